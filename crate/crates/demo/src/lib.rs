//! Browser bindings: analyse a phase table, build one from coefficients, project it.
//!
//! Every export takes plain strings and returns a JSON string; failures come
//! back as `{"error": "..."}` so the page never has to catch exceptions.

use serde_json::{json, Value};
use wasm_bindgen::prelude::wasm_bindgen;

use nilspace::abelian::{make_group, FinAbGroup, GroupExtension};
use nilspace::gowers::{
    coefficient_phases, gowers_norm, phase_degree, project_phase, GroupFunction,
};
use nilspace::phase::Phase;
use nilspace::Limits;

/// Largest group the page accepts; norms up to U^4 stay instant below it.
const MAX_ORDER: u64 = 64;

fn parse_group(text: &str) -> Result<FinAbGroup, String> {
    let orders = text
        .split([',', ' '])
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.trim()
                .parse::<i64>()
                .map_err(|_| format!("bad cyclic order {s:?}"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let g = make_group(&orders).map_err(|e| e.to_string())?;
    if g.order() > MAX_ORDER {
        return Err(format!("group of order {} exceeds {MAX_ORDER}", g.order()));
    }
    Ok(g)
}

fn parse_phases(g: &FinAbGroup, text: &str) -> Result<GroupFunction, String> {
    let phases = text
        .split_whitespace()
        .map(|s| s.parse::<Phase>().map_err(|_| format!("bad phase {s:?}")))
        .collect::<Result<Vec<_>, _>>()?;
    GroupFunction::from_phases(g.clone(), phases).map_err(|e| e.to_string())
}

fn table(f: &GroupFunction) -> Value {
    let g = f.group();
    let rows: Vec<Value> = g
        .elements()
        .zip(f.values())
        .enumerate()
        .map(|(i, (x, v))| {
            json!({
                "x": x.coords(),
                "phase": f.phases().map(|p| p[i].to_string()),
                "re": v.re,
                "im": v.im,
            })
        })
        .collect();
    json!(rows)
}

fn respond(r: Result<Value, String>) -> String {
    match r {
        Ok(v) => v.to_string(),
        Err(e) => json!({ "error": e }).to_string(),
    }
}

fn analyze_inner(group: &str, phases: &str, max_degree: usize) -> Result<Value, String> {
    let g = parse_group(group)?;
    let f = parse_phases(&g, phases)?;
    let lim = Limits::default();
    let degree = phase_degree(&f, max_degree, &lim).map_err(|e| e.to_string())?;
    let norms = (1..=max_degree + 1)
        .map(|d| gowers_norm(&f, d, &lim).map(|n| json!({ "d": d, "norm": n })))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    Ok(json!({ "group": g.cyclic_orders(), "degree": degree, "norms": norms }))
}

/// Phase-polynomial degree (up to `max_degree`) and the norms `U^1..U^{max_degree+1}`.
#[wasm_bindgen]
pub fn analyze(group: &str, phases: &str, max_degree: usize) -> String {
    respond(analyze_inner(group, phases, max_degree.min(3)))
}

fn from_coefficients_inner(group: &str, terms: &str) -> Result<Value, String> {
    let g = parse_group(group)?;
    let mut parsed = Vec::new();
    for line in terms.lines().map(str::trim).filter(|l| !l.is_empty()) {
        let (r, theta) = line
            .split_once(':')
            .ok_or_else(|| format!("expected `r1 r2 ... : theta`, got {line:?}"))?;
        let r = r
            .split_whitespace()
            .map(|s| {
                s.parse::<usize>()
                    .map_err(|_| format!("bad exponent {s:?}"))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if r.len() != g.num_coords() {
            return Err(format!("{line:?} needs {} exponents", g.num_coords()));
        }
        let theta: Phase = theta
            .trim()
            .parse()
            .map_err(|_| format!("bad phase {:?}", theta.trim()))?;
        parsed.push((r, theta));
    }
    let f = GroupFunction::from_phases(g.clone(), coefficient_phases(&g, &parsed))
        .map_err(|e| e.to_string())?;
    let phases: Vec<String> = f
        .phases()
        .unwrap_or_default()
        .iter()
        .map(Phase::to_string)
        .collect();
    Ok(json!({ "phases": phases.join(" "), "table": table(&f) }))
}

/// Phase table of `x ↦ Σ θ_r binom(x, r)`; one term `r1 r2 ... : theta` per line.
#[wasm_bindgen]
pub fn from_coefficients(group: &str, terms: &str) -> String {
    respond(from_coefficients_inner(group, terms))
}

fn project_inner(total: &str, base: &str, phases: &str) -> Result<Value, String> {
    let ext = GroupExtension::componentwise(&parse_group(total)?, &parse_group(base)?)
        .map_err(|e| e.to_string())?;
    let phi = parse_phases(ext.total(), phases)?;
    let f = project_phase(&phi, &ext).map_err(|e| e.to_string())?;
    let max_abs = f.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
    Ok(json!({ "base": ext.base().cyclic_orders(), "max_abs": max_abs, "table": table(&f) }))
}

/// Average of a phase on the total group over the fibres of the componentwise quotient.
#[wasm_bindgen]
pub fn project(total: &str, base: &str, phases: &str) -> String {
    respond(project_inner(total, base, phases))
}
