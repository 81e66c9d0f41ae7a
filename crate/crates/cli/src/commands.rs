//! One handler per command; each returns a JSON result payload.

use serde::Serialize;
use serde_json::{json, Value};

use nilspace::bundle::{
    factor_nilspace, sim_classes, step_of, structure_group, verify_degree_bundle,
};
use nilspace::extension::{
    default_check_dim, find_section, find_section_structured, lift_translation,
    lift_translation_split, trans_group,
};
use nilspace::free::{factor_to_finite, lift_morphism, PolyMap};
use nilspace::gowers::{
    decompose_phase, gowers_norm, gowers_u2_fourier, inverse_search, is_phase_polynomial,
    project_phase, tz_residue_check, GroupFunction, InverseSearch, PhasePolynomial,
};
use nilspace::space::check_axioms;
use nilspace::{Error, Limits, Result};

use crate::config::Command;
use crate::objects;

/// Resources and randomness shared by every command.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Context {
    pub seed: u64,
    pub limits: Limits,
    /// Largest cube dimension a command may check.
    pub dimension: usize,
}

impl Context {
    fn dim(&self, n: usize, what: &str) -> Result<usize> {
        if n > self.dimension {
            return Err(Error::ResourceLimit {
                what: format!("{what} at dimension {n}"),
                budget: self.dimension as u64,
                dim: Some(n),
            });
        }
        Ok(n)
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn function_value(f: &GroupFunction) -> Value {
    let values: Vec<[f64; 2]> = f.values().iter().map(|v| [v.re, v.im]).collect();
    let max_abs = f.values().iter().map(|v| v.norm()).fold(0.0, f64::max);
    json!({
        "group": f.group().cyclic_orders(),
        "values": values,
        "phases": f.phases(),
        "max_abs": max_abs,
    })
}

pub fn run(command: &Command, ctx: &Context) -> Result<Value> {
    let lim = &ctx.limits;
    match command {
        Command::VerifyAxioms { space, n_upto } => {
            let n = ctx.dim(*n_upto, "axiom check")?;
            let (s, _) = objects::space(space, lim)?;
            let report = check_axioms(s.as_ref(), n, lim)?;
            let mut v = to_value(&report);
            v["all_ok"] = json!(report.all_ok());
            Ok(v)
        }
        Command::Factor { space, i, n_check } => {
            let (s, _) = objects::space(space, lim)?;
            let n = ctx.dim(
                n_check.unwrap_or(step_of(s.as_ref())? + 1),
                "factor projection check",
            )?;
            let classes = sim_classes(s.as_ref(), *i)?;
            let (f, proj) = factor_nilspace(s, *i, n, lim)?;
            Ok(json!({
                "i": i,
                "size": f.size(),
                "projection": proj,
                "classes": classes.classes,
                "n_check": n,
            }))
        }
        Command::StructureGroups { space } => {
            let (s, _) = objects::space(space, lim)?;
            let k = step_of(s.as_ref())?;
            let mut levels = Vec::new();
            for i in 1..=k {
                let sg = structure_group(&s, i)?;
                levels.push(json!({
                    "i": i,
                    "group": sg.group.invariant_factors(),
                    "factor_size": sg.factor.size(),
                    "fiber_of": sg.fiber_of,
                    "fibers": sg.fibers,
                    "action": sg.action,
                }));
            }
            Ok(json!({ "k": k, "levels": levels }))
        }
        Command::VerifyBundle { space, n_upto } => {
            let (s, _) = objects::space(space, lim)?;
            let n = ctx.dim(n_upto.unwrap_or(step_of(s.as_ref())? + 1), "bundle check")?;
            Ok(to_value(&verify_degree_bundle(&s, n, lim)?))
        }
        Command::VerifyExtension { extension, n_upto } => {
            let k = objects::extension_degree(extension);
            let n = ctx.dim(n_upto.unwrap_or(k + 1), "extension check")?;
            let (ext, _) = objects::extension(extension, n, lim)?;
            Ok(json!({
                "certified": true,
                "degree": ext.degree,
                "group": ext.group.invariant_factors(),
                "total_size": ext.total.size(),
                "base_size": ext.base.size(),
                "n_checked": ext.n_checked,
                "proj": ext.proj,
                "action": ext.action,
            }))
        }
        Command::FindSection {
            extension,
            n_upto,
            exhaustive,
        } => {
            let k = objects::extension_degree(extension);
            let n = ctx.dim(n_upto.unwrap_or(k + 1), "section check")?;
            let (ext, base) = objects::extension(extension, n, lim)?;
            let search = match (&base, exhaustive) {
                (Some(b), false) => find_section_structured(&ext, b, lim)?,
                _ => find_section(&ext, lim)?,
            };
            let verified = match &search.section {
                Some(m) => Some(ext.is_section(m, lim)?),
                None => None,
            };
            let mut v = to_value(&search);
            v["verified"] = json!(verified);
            v["proj"] = json!(ext.proj);
            Ok(v)
        }
        Command::TransGroup {
            space,
            i,
            check_dim,
        } => {
            let (s, _) = objects::space(space, lim)?;
            let d = match check_dim {
                Some(d) => *d,
                None => default_check_dim(s.as_ref())?,
            };
            let d = ctx.dim(d, "translation check")?;
            Ok(to_value(&trans_group(s.as_ref(), *i, d, lim)?))
        }
        Command::LiftTranslation {
            extension,
            space,
            alpha,
            i,
            n_upto,
        } => match (extension, space) {
            (Some(e), None) => {
                let k = objects::extension_degree(e);
                let n = ctx.dim(n_upto.unwrap_or(k + 1), "extension check")?;
                let (ext, _) = objects::extension(e, n, lim)?;
                let mut v = to_value(&lift_translation(&ext, alpha, *i, lim)?);
                v["route"] = json!("extension");
                Ok(v)
            }
            (None, Some(sp)) => {
                let (s, _) = objects::space(sp, lim)?;
                let n = ctx.dim(
                    n_upto.unwrap_or(step_of(s.as_ref())? + 1),
                    "translation bundle check",
                )?;
                let beta = lift_translation_split(alpha, &s, *i, n, lim)?;
                Ok(json!({ "beta": beta, "route": "split", "n_upto": n }))
            }
            _ => Err(Error::InvalidArgument(
                "lift-translation needs exactly one of `extension` or `space`".into(),
            )),
        },
        Command::FactorToFinite { space, alpha_cap } => {
            let (s, _) = objects::space(space, lim)?;
            let f = factor_to_finite(&s, *alpha_cap, lim)?;
            Ok(json!({
                "rank": f.rank,
                "alpha": f.alpha,
                "exponent": f.exponent,
                "size": f.space.group().order(),
                "h": f.h,
                "reduced_rank": f.reduced_rank,
                "top_group": f.top_group.invariant_factors(),
                "beta": f.beta,
                "attempts": f.attempts,
            }))
        }
        Command::LiftMorphism {
            group,
            space,
            phi,
            ext_cap,
            alpha_cap,
        } => {
            let g = objects::group(group, lim)?;
            let (s, _) = objects::space(space, lim)?;
            let l = lift_morphism(&g, &s, phi, *ext_cap, *alpha_cap, lim)?;
            Ok(json!({
                "height": l.height,
                "extension": l.extension.total().invariant_factors(),
                "psi": l.psi,
                "commutes": l.commutes,
                "reading": l.reading,
                "free_rank": l.factor.reduced_rank,
                "top_group": l.factor.top_group.invariant_factors(),
                "beta": l.factor.beta,
            }))
        }
        Command::GowersNorm { function, d } => {
            let f = objects::function(function, ctx.seed, lim)?;
            let d = ctx.dim(*d, "Gowers norm")?;
            let norm = gowers_norm(&f, d, lim)?;
            let fourier = (d == 2).then(|| gowers_u2_fourier(&f));
            Ok(json!({ "d": d, "norm": norm, "fourier_u2": fourier }))
        }
        Command::PhaseCheck { function, k } => {
            let f = objects::function(function, ctx.seed, lim)?;
            ctx.dim(k + 1, "phase polynomial check")?;
            Ok(to_value(&is_phase_polynomial(&f, *k, lim)?))
        }
        Command::ProjectPhase {
            function,
            extension,
        } => {
            let ext = objects::group_extension(extension, lim)?;
            let phi = objects::function(function, ctx.seed, lim)?;
            let f = project_phase(&phi, &ext)?;
            Ok(json!({
                "base": ext.base().cyclic_orders(),
                "total": ext.total().cyclic_orders(),
                "projected": function_value(&f),
            }))
        }
        Command::DecomposePhase { function, k, q } => {
            let f = objects::function(function, ctx.seed, lim)?;
            let phi = PhasePolynomial::certify(f, *k, lim)?;
            let s = decompose_phase(&phi, *q, lim)?;
            Ok(json!({
                "k": k,
                "q": q,
                "phi1": s.phi1.phases(),
                "phi1_degree": s.phi1.degree,
                "phi2": s.phi2.phases(),
                "phi2_degree": s.phi2.degree,
                "candidates_rejected": s.candidates_rejected,
            }))
        }
        Command::InverseSearch {
            function,
            k,
            q,
            ext_cap,
            delta,
            norm_floor,
            search_budget,
        } => {
            let f = objects::function(function, ctx.seed, lim)?;
            let params = InverseSearch {
                k: *k,
                q: *q,
                ext_cap: *ext_cap,
                delta: *delta,
                norm_floor: *norm_floor,
                budget: *search_budget,
                seed: ctx.seed,
            };
            Ok(to_value(&inverse_search(&f, &params, lim)?))
        }
        Command::TzCheck { map, p, radius } => {
            let m = PolyMap::from_literal(map)?;
            let r = radius.unwrap_or(2 * *p as i64);
            let mut v = to_value(&tz_residue_check(&m, *p, r)?);
            v["radius"] = json!(r);
            Ok(v)
        }
    }
}
