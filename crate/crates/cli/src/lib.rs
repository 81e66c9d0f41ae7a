//! Config-driven experiment runner for the `nilspace` library.
//!
//! A run reads one JSON config, dispatches to a command and emits a report
//! with the config echo, seed, budgets, result and timing. Exit codes: 0 for
//! an answer (including "no"), 1 for a malformed config or argument, 2 for a
//! structural failure, 3 for an exhausted budget.

pub mod commands;
pub mod config;
pub mod objects;

use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};

use nilspace::limits::MAX_DIM;
use nilspace::{Error, Limits};

pub use config::{Command, ExperimentConfig, SchemaError, COMMANDS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_SCHEMA: i32 = 1;
pub const EXIT_STRUCTURAL: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

/// Values given on the command line or in the environment.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub budget_maps: Option<u64>,
    /// Candidate budget from the environment, below config and flags.
    pub env_budget: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Budgets {
    pub candidates: u64,
    pub ground: usize,
    pub dimension: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub version: String,
    pub status: String,
    pub exit_code: i32,
    pub seed: u64,
    pub threads: usize,
    pub budget: Budgets,
    pub config: Value,
    pub result: Value,
    pub timing: Timing,
}

impl Report {
    /// Everything except timing, for reproducibility comparisons.
    pub fn payload(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("reports serialize");
        v.as_object_mut().expect("object").remove("timing");
        v
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// Flattened `path,value` rows.
    pub fn to_csv(&self) -> String {
        let mut rows = Vec::new();
        flatten(
            "",
            &serde_json::to_value(self).expect("reports serialize"),
            &mut rows,
        );
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["path", "value"]).expect("in-memory write");
        for (p, v) in rows {
            w.write_record([p, v]).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory write")).expect("utf-8")
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| flatten(&join(k), x, out)),
        Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => a
            .iter()
            .enumerate()
            .for_each(|(i, x)| flatten(&join(&i.to_string()), x, out)),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        _ => out.push((prefix.to_string(), v.to_string())),
    }
}

fn error_exit(e: &Error) -> (i32, &'static str) {
    match e {
        Error::InvalidArgument(_) | Error::InvalidCorner(_) | Error::Unsupported(_) => {
            (EXIT_SCHEMA, "invalid-argument")
        }
        Error::StructuralFailure { .. } => (EXIT_STRUCTURAL, "structural-failure"),
        Error::NotFound(_) => (EXIT_STRUCTURAL, "not-found"),
        Error::ResourceLimit { .. } => (EXIT_RESOURCE, "resource-limit"),
    }
}

fn error_value(e: &Error, kind: &str) -> Value {
    let mut v = json!({ "error": kind, "message": e.to_string() });
    match e {
        Error::StructuralFailure { witness, .. } => v["witness"] = json!(witness),
        Error::ResourceLimit { budget, dim, .. } => {
            v["budget"] = json!(budget);
            v["dim"] = json!(dim);
        }
        _ => {}
    }
    v
}

/// Run a parsed config.
pub fn run(config: &ExperimentConfig, ov: &Overrides) -> Report {
    let start = Instant::now();
    let defaults = Limits::default();
    let candidates = ov
        .budget_maps
        .or(config.budget.candidates)
        .or(ov.env_budget)
        .unwrap_or(defaults.candidates);
    let budget = Budgets {
        candidates,
        ground: config.budget.ground.unwrap_or(defaults.ground),
        dimension: config.budget.dimension.unwrap_or(MAX_DIM),
    };
    let ctx = commands::Context {
        seed: ov.seed.or(config.seed).unwrap_or(0),
        limits: Limits {
            candidates: budget.candidates,
            ground: budget.ground,
        },
        dimension: budget.dimension,
    };
    let (exit_code, status, result) = match commands::run(&config.command, &ctx) {
        Ok(v) => (EXIT_OK, "ok", v),
        Err(e) => {
            let (code, kind) = error_exit(&e);
            (code, kind, error_value(&e, kind))
        }
    };
    Report {
        command: config.command.name().to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        status: status.to_string(),
        exit_code,
        seed: ctx.seed,
        threads: ov.threads.unwrap_or(1),
        budget,
        config: config.echo.clone(),
        result,
        timing: Timing {
            elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
        },
    }
}

/// Parse and run config text; schema errors become an exit-1 report.
pub fn run_text(text: &str, ov: &Overrides) -> Report {
    match ExperimentConfig::parse(text) {
        Ok(c) => run(&c, ov),
        Err(e) => {
            let mut r = schema_report(&e, ov);
            if let Ok(Value::Object(m)) = serde_json::from_str::<Value>(text) {
                if let Some(Value::String(c)) = m.get("command") {
                    r.command = c.clone();
                }
                r.config = Value::Object(m);
            }
            r
        }
    }
}

pub fn schema_report(e: &SchemaError, ov: &Overrides) -> Report {
    Report {
        command: String::new(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        status: "schema-error".into(),
        exit_code: EXIT_SCHEMA,
        seed: ov.seed.unwrap_or(0),
        threads: ov.threads.unwrap_or(1),
        budget: Budgets {
            candidates: ov
                .budget_maps
                .or(ov.env_budget)
                .unwrap_or(Limits::default().candidates),
            ground: Limits::default().ground,
            dimension: MAX_DIM,
        },
        config: Value::Null,
        result: json!({ "error": "schema", "path": e.path, "message": e.message }),
        timing: Timing { elapsed_ms: 0.0 },
    }
}
