//! Job files: a JSON object naming the command, the equation, its parameters
//! and the checks to run. Complex numbers are `[re, im]` pairs.
//!
//! Missing parameters are drawn from the seeded sampler. For the degree-two
//! and degree-three equations `B` may be omitted and is then filled in from
//! the balance condition.

use std::fmt;
use std::path::Path;

use qhyp_core::equations::{DegenerationBase, DegenerationKind, Equation, Params2, Params3};
use qhyp_core::opalgebra::CoeffRecord;
use qhyp_core::sampling::Sampler;
use qhyp_core::{QContext, C64};
use serde::Deserialize;
use serde_json::{json, Value};

/// Invalid input; the process exits with code 2.
#[derive(Debug)]
pub struct InputError(pub String);

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<qhyp_core::QError> for InputError {
    fn from(e: qhyp_core::QError) -> Self {
        InputError(e.to_string())
    }
}

pub type Input<T> = Result<T, InputError>;

pub fn invalid<T>(msg: impl Into<String>) -> Input<T> {
    Err(InputError(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Config,
    Verify,
    Relations,
    Limits,
    Sample,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Config => "config",
            Command::Verify => "verify",
            Command::Relations => "relations",
            Command::Limits => "limits",
            Command::Sample => "sample",
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Labels {
    One(String),
    Many(Vec<String>),
}

impl Labels {
    pub fn list(&self) -> Vec<String> {
        match self {
            Labels::One(s) => vec![s.clone()],
            Labels::Many(v) => v.clone(),
        }
    }
}

/// Partial overrides of the numeric context.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CtxOverrides {
    pub q: Option<[f64; 2]>,
    pub max_terms: Option<usize>,
    pub tail_tol: Option<f64>,
    pub eq_tol: Option<f64>,
}

impl CtxOverrides {
    pub fn apply(&self) -> Input<QContext> {
        let d = QContext::default();
        let ctx = QContext {
            q: self.q.map(|[re, im]| C64::new(re, im)).unwrap_or(d.q),
            max_terms: self.max_terms.unwrap_or(d.max_terms),
            tail_tol: self.tail_tol.unwrap_or(d.tail_tol),
            eq_tol: self.eq_tol.unwrap_or(d.eq_tol),
        };
        ctx.validate()?;
        Ok(ctx)
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitsSpec {
    pub kinds: Option<Vec<DegenerationKind>>,
    pub base: Option<DegenerationBase>,
    pub scales: Option<Vec<f64>>,
}

/// The job file as written.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub command: Option<Command>,
    pub equation: Option<String>,
    pub params: Option<Value>,
    /// Raw operator for `config`, as `{i, j, re, im}` records.
    pub operator: Option<Vec<CoeffRecord>>,
    pub solutions: Option<Labels>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub ctx: Option<CtxOverrides>,
    /// Set to `false` to skip the balance check and run on the parameters as given.
    pub check_balance: Option<bool>,
    pub limits: Option<LimitsSpec>,
    /// Radii `[lo, hi]` for `sample`.
    pub range: Option<[f64; 2]>,
}

impl JobSpec {
    pub fn load(path: &Path) -> Input<JobSpec> {
        let text = std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))
    }
}

pub const DEFAULT_SAMPLES: usize = 5;

/// A job with overrides applied and parameters resolved.
#[derive(Debug, Clone)]
pub struct Job {
    pub command: Command,
    pub ctx: QContext,
    pub seed: u64,
    pub samples: usize,
    pub equation: Option<Equation>,
    pub operator: Option<Vec<CoeffRecord>>,
    pub labels: Vec<String>,
    pub check_balance: bool,
    pub limits: LimitsSpec,
    pub range: Option<[f64; 2]>,
}

/// Command-line overrides.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub no_balance_check: bool,
}

pub const EQUATIONS: [&str; 7] = ["heine", "e2", "e3", "h2", "h3", "qheun", "qheun3"];

impl Job {
    pub fn new(command: Command, spec: JobSpec, o: Overrides) -> Input<Job> {
        if let Some(c) = spec.command {
            if c != command {
                return invalid(format!("job file is for `{}`, not `{}`", c.name(), command.name()));
            }
        }
        let ctx = spec.ctx.clone().unwrap_or_default().apply()?;
        let seed = o.seed.or(spec.seed).unwrap_or(0);
        let samples = o.samples.or(spec.samples).unwrap_or(DEFAULT_SAMPLES);
        if samples == 0 {
            return invalid("samples must be positive");
        }
        let check_balance = !o.no_balance_check && spec.check_balance.unwrap_or(true);
        let name = match (&spec.equation, command) {
            (Some(n), _) => Some(n.as_str()),
            (None, Command::Relations) => Some("e3"),
            (None, Command::Config) if spec.operator.is_some() => None,
            (None, Command::Limits) => None,
            (None, _) => return invalid("missing `equation`"),
        };
        if spec.operator.is_some() && (command != Command::Config || name.is_some()) {
            return invalid("`operator` is only accepted by `config`, without `equation`");
        }
        let equation = match name {
            Some(n) => {
                let eq = equation(n, spec.params.as_ref(), seed, &ctx)?;
                if check_balance {
                    eq.validate(&ctx)?;
                }
                Some(eq)
            }
            None => None,
        };
        if let Some(r) = spec.range {
            if !(r[0] > 0.0 && r[0] < r[1] && r[1].is_finite()) {
                return invalid(format!("range {r:?} must satisfy 0 < lo < hi"));
            }
        }
        Ok(Job {
            command,
            ctx,
            seed,
            samples,
            equation,
            operator: spec.operator,
            labels: spec.solutions.map(|l| l.list()).unwrap_or_else(|| vec!["all".into()]),
            check_balance,
            limits: spec.limits.unwrap_or_default(),
            range: spec.range,
        })
    }

    /// A sampler for auxiliary draws, independent of the parameter draw.
    pub fn sampler(&self, stream: u64) -> Sampler {
        Sampler::new(self.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(stream))
    }
}

fn equation(name: &str, params: Option<&Value>, seed: u64, ctx: &QContext) -> Input<Equation> {
    if !EQUATIONS.contains(&name) {
        return invalid(format!("unknown equation {name:?}; expected one of {EQUATIONS:?}"));
    }
    let Some(v) = params else { return Ok(draw(name, seed, ctx)) };
    let fill_b = matches!(name, "e2" | "e3") && v.get("B").is_none();
    let mut v = v.clone();
    if fill_b {
        match v.as_object_mut() {
            Some(m) => m.insert("B".into(), json!([1.0, 0.0])),
            None => return invalid("`params` must be an object"),
        };
    }
    let eq: Equation = serde_json::from_value(json!({ "equation": name, "params": v }))
        .map_err(|e| InputError(format!("params for {name}: {e}")))?;
    Ok(match eq {
        Equation::E3(p) if fill_b => Equation::E3(Params3::balanced(p.a, p.b, p.big_a, ctx)),
        Equation::E2(p) if fill_b => Equation::E2(Params2::balanced(p.alpha, p.a, p.b, p.big_a, ctx)),
        e => e,
    })
}

fn draw(name: &str, seed: u64, ctx: &QContext) -> Equation {
    let mut s = Sampler::new(seed);
    match name {
        "heine" => Equation::Heine(s.heine(ctx)),
        "e2" => Equation::E2(s.params2(ctx)),
        "e3" => Equation::E3(s.params3(ctx)),
        "h2" => Equation::H2(s.h2()),
        "h3" => Equation::H3(s.h3()),
        "qheun" => Equation::Qheun(s.heun()),
        _ => Equation::Qheun3(s.heun3()),
    }
}
