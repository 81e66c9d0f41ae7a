//! Experiment configuration: one JSON document naming a command, its object
//! descriptors and optional budgets.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use nilspace::free::PolyMapLiteral;
use nilspace::phase::Phase;

/// A parsed configuration file.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub command: Command,
    pub seed: Option<u64>,
    pub budget: Budget,
    /// The document as given, echoed into reports.
    pub echo: Value,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Budget {
    pub candidates: Option<u64>,
    pub ground: Option<usize>,
    pub dimension: Option<usize>,
}

/// A schema violation with the JSON path where it occurred.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("config error at {path}: {message}")]
pub struct SchemaError {
    pub path: String,
    pub message: String,
}

impl SchemaError {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        SchemaError {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self, SchemaError> {
        let echo: Value = serde_json::from_str(text).map_err(|e| {
            SchemaError::new(
                format!("line {} column {}", e.line(), e.column()),
                e.to_string(),
            )
        })?;
        Self::from_value(echo)
    }

    pub fn from_value(echo: Value) -> Result<Self, SchemaError> {
        let Value::Object(mut map) = echo.clone() else {
            return Err(SchemaError::new(".", "config must be a JSON object"));
        };
        let seed = match map.remove("seed") {
            None | Some(Value::Null) => None,
            Some(v) => Some(v.as_u64().ok_or_else(|| {
                SchemaError::new("seed", "seed must be a 64-bit unsigned integer")
            })?),
        };
        let budget: Budget = match map.remove("budget") {
            None | Some(Value::Null) => Budget::default(),
            Some(v) => parse_at(v, "budget")?,
        };
        for (name, v) in [
            ("budget.candidates", budget.candidates.map(|x| x as usize)),
            ("budget.ground", budget.ground),
            ("budget.dimension", budget.dimension),
        ] {
            if v == Some(0) {
                return Err(SchemaError::new(name, "budgets must be positive"));
            }
        }
        let name = match map.remove("command") {
            Some(Value::String(s)) => s,
            Some(_) => return Err(SchemaError::new("command", "command must be a string")),
            None => return Err(SchemaError::new("command", "missing field `command`")),
        };
        if !COMMANDS.contains(&name.as_str()) {
            return Err(SchemaError::new(
                "command",
                format!(
                    "unknown command {name:?}, expected one of {}",
                    COMMANDS.join(", ")
                ),
            ));
        }
        let mut wrapped = serde_json::Map::new();
        wrapped.insert(name.clone(), Value::Object(map));
        let command = parse_at(Value::Object(wrapped), "")?;
        Ok(ExperimentConfig {
            command,
            seed,
            budget,
            echo,
        })
    }
}

fn parse_at<T: for<'de> Deserialize<'de>>(v: Value, prefix: &str) -> Result<T, SchemaError> {
    serde_path_to_error::deserialize(v).map_err(|e| {
        // drop the command-name segment added by the wrapper
        let full = e.path().to_string();
        let inner = if prefix.is_empty() {
            full.split_once('.')
                .map(|(_, rest)| rest.to_string())
                .unwrap_or_else(|| ".".into())
        } else {
            full
        };
        let path = match (prefix.is_empty(), inner == ".") {
            (true, _) => inner,
            (false, true) => prefix.to_string(),
            (false, false) => format!("{prefix}.{inner}"),
        };
        SchemaError::new(path, e.into_inner().to_string())
    })
}

/// `{"dk": {"group": [..], "k": ..}}`, `{"linear": [..]}`, `{"product": [.., ..]}`
/// and a few more group-based structures.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SpaceDesc {
    Dk {
        group: Vec<i64>,
        k: usize,
    },
    Linear(Vec<i64>),
    Product(Vec<SpaceDesc>),
    /// Coordinate `j` of the group carries `D_{degrees[j]}`.
    Degrees {
        group: Vec<i64>,
        degrees: Vec<usize>,
    },
    /// Möbius coefficient of weight `w` in coordinate `j` divisible by `divisors[j][w-1]`.
    Filtered {
        group: Vec<i64>,
        divisors: Vec<Vec<u64>>,
    },
    /// `Π_i D_i(Z_n^{ranks[i-1]})`.
    ModFree {
        modulus: u64,
        ranks: Vec<usize>,
    },
}

/// `0 → C → B → A → 0` for function transport.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupExtDesc {
    /// Coordinatewise reduction `⊕ Z_{b_j} → ⊕ Z_{a_j}`.
    Componentwise { total: Vec<i64>, base: Vec<i64> },
    /// The canonical height-`height` extension of `base`.
    Height { base: Vec<i64>, height: u32 },
}

/// A degree-`k` extension of cubespaces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ExtensionDesc {
    /// `D_k(B)` over `D_k(A)` by the kernel `C`.
    Groups { groups: GroupExtDesc, k: usize },
    /// `N × D_k(A)` over `N`.
    Trivial {
        base: SpaceDesc,
        group: Vec<i64>,
        k: usize,
    },
    /// Arbitrary `M → N` by `A`; the action is recovered when omitted.
    Explicit {
        total: SpaceDesc,
        base: SpaceDesc,
        group: Vec<i64>,
        proj: Vec<usize>,
        k: usize,
        #[serde(default)]
        action: Option<Vec<Vec<usize>>>,
    },
}

/// A function value: a `"p/q"` phase or a complex pair `[re, im]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ValueLit {
    Phase(Phase),
    Complex([f64; 2]),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermLit {
    pub r: Vec<usize>,
    pub theta: Phase,
}

/// A function on a finite abelian group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionDesc {
    /// One value per element, in index order.
    Values {
        group: Vec<i64>,
        values: Vec<ValueLit>,
    },
    Constant {
        group: Vec<i64>,
        phase: Phase,
    },
    Character {
        group: Vec<i64>,
        coeffs: Vec<u64>,
    },
    Dirac {
        group: Vec<i64>,
    },
    /// Uniform on the unit disk; the seed defaults to the run seed.
    Random {
        group: Vec<i64>,
        #[serde(default)]
        seed: Option<u64>,
    },
    RandomPhases {
        group: Vec<i64>,
        denom: i64,
        #[serde(default)]
        seed: Option<u64>,
    },
    /// `x ↦ Σ θ_r Π binom(x_j, r_j)` on coordinate representatives.
    Coefficients {
        group: Vec<i64>,
        terms: Vec<TermLit>,
    },
    /// `x ↦ χ(p(x))`.
    Polymap {
        group: Vec<i64>,
        map: PolyMapLiteral,
        character: Vec<u64>,
    },
    /// Fiber average of a function on the extension group.
    Projected {
        function: Box<FunctionDesc>,
        extension: GroupExtDesc,
    },
}

/// One variant per CLI command, named by the config's `"command"` field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum Command {
    VerifyAxioms {
        space: SpaceDesc,
        n_upto: usize,
    },
    Factor {
        space: SpaceDesc,
        i: usize,
        #[serde(default)]
        n_check: Option<usize>,
    },
    StructureGroups {
        space: SpaceDesc,
    },
    VerifyBundle {
        space: SpaceDesc,
        #[serde(default)]
        n_upto: Option<usize>,
    },
    VerifyExtension {
        extension: ExtensionDesc,
        #[serde(default)]
        n_upto: Option<usize>,
    },
    FindSection {
        extension: ExtensionDesc,
        #[serde(default)]
        n_upto: Option<usize>,
        #[serde(default)]
        exhaustive: bool,
    },
    TransGroup {
        space: SpaceDesc,
        i: usize,
        #[serde(default)]
        check_dim: Option<usize>,
    },
    LiftTranslation {
        /// Lift along this extension, or through the split bundle of `space`;
        /// in the latter case `alpha` acts on `F_{k-1}(space)`.
        #[serde(default)]
        extension: Option<ExtensionDesc>,
        #[serde(default)]
        space: Option<SpaceDesc>,
        alpha: Vec<usize>,
        i: usize,
        #[serde(default)]
        n_upto: Option<usize>,
    },
    FactorToFinite {
        space: SpaceDesc,
        #[serde(default = "default_cap")]
        alpha_cap: u32,
    },
    LiftMorphism {
        group: Vec<i64>,
        space: SpaceDesc,
        phi: Vec<usize>,
        #[serde(default = "default_cap")]
        ext_cap: u32,
        #[serde(default = "default_cap")]
        alpha_cap: u32,
    },
    GowersNorm {
        function: FunctionDesc,
        d: usize,
    },
    PhaseCheck {
        function: FunctionDesc,
        k: usize,
    },
    ProjectPhase {
        function: FunctionDesc,
        extension: GroupExtDesc,
    },
    DecomposePhase {
        function: FunctionDesc,
        k: usize,
        q: u64,
    },
    InverseSearch {
        function: FunctionDesc,
        k: usize,
        q: u64,
        #[serde(default = "default_cap")]
        ext_cap: u32,
        #[serde(default = "default_delta")]
        delta: f64,
        #[serde(default)]
        norm_floor: f64,
        #[serde(default = "default_search_budget")]
        search_budget: u64,
    },
    TzCheck {
        map: PolyMapLiteral,
        p: u64,
        #[serde(default)]
        radius: Option<i64>,
    },
}

fn default_cap() -> u32 {
    3
}

fn default_delta() -> f64 {
    0.5
}

fn default_search_budget() -> u64 {
    1 << 16
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::VerifyAxioms { .. } => "verify-axioms",
            Command::Factor { .. } => "factor",
            Command::StructureGroups { .. } => "structure-groups",
            Command::VerifyBundle { .. } => "verify-bundle",
            Command::VerifyExtension { .. } => "verify-extension",
            Command::FindSection { .. } => "find-section",
            Command::TransGroup { .. } => "trans-group",
            Command::LiftTranslation { .. } => "lift-translation",
            Command::FactorToFinite { .. } => "factor-to-finite",
            Command::LiftMorphism { .. } => "lift-morphism",
            Command::GowersNorm { .. } => "gowers-norm",
            Command::PhaseCheck { .. } => "phase-check",
            Command::ProjectPhase { .. } => "project-phase",
            Command::DecomposePhase { .. } => "decompose-phase",
            Command::InverseSearch { .. } => "inverse-search",
            Command::TzCheck { .. } => "tz-check",
        }
    }
}

/// Names of all commands, in dispatch order.
pub const COMMANDS: [&str; 16] = [
    "verify-axioms",
    "factor",
    "structure-groups",
    "verify-bundle",
    "verify-extension",
    "find-section",
    "trans-group",
    "lift-translation",
    "factor-to-finite",
    "lift-morphism",
    "gowers-norm",
    "phase-check",
    "project-phase",
    "decompose-phase",
    "inverse-search",
    "tz-check",
];
