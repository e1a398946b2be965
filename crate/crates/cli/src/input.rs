//! JSON model files and calibration configs.
//!
//! Model file:
//!
//! ```json
//! {
//!   "label": "binom100",
//!   "variables": [
//!     {"family": "bernoulli", "p": 0.5, "count": 100},
//!     {"family": "poisson", "lambda": 2.0, "count": 3},
//!     {"family": "geometric", "p": 0.25},
//!     {"family": "finite", "support": [[0, 0.5], [2, 0.5]]}
//!   ]
//! }
//! ```
//!
//! Shape problems (bad JSON, missing or mistyped fields) are parse errors.
//! Well-formed files with impossible values are validation errors.

use std::fmt;
use std::path::Path;

use pointprob_core::calibrate::{Generator, Method, Sweep};
use pointprob_core::{DistributionSpec, SumModel};
use serde_json::{Map, Value};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InputError {
    Parse(String),
    Invalid(String),
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InputError::Parse(m) => write!(f, "parse error: {m}"),
            InputError::Invalid(m) => write!(f, "validation error: {m}"),
        }
    }
}

type Result<T> = std::result::Result<T, InputError>;

fn parse_err(path: &str, what: impl fmt::Display) -> InputError {
    InputError::Parse(format!("{path}: {what}"))
}

fn invalid(path: &str, what: impl fmt::Display) -> InputError {
    InputError::Invalid(format!("{path}: {what}"))
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| InputError::Parse(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        InputError::Parse(format!(
            "{} line {} column {}: {e}",
            path.display(),
            e.line(),
            e.column()
        ))
    })
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>> {
    v.as_object().ok_or_else(|| parse_err(path, "expected an object"))
}

fn field<'a>(obj: &'a Map<String, Value>, path: &str, name: &str) -> Result<&'a Value> {
    obj.get(name)
        .ok_or_else(|| parse_err(path, format!("missing field `{name}`")))
}

fn number(v: &Value, path: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| parse_err(path, "expected a number"))
}

fn integer(v: &Value, path: &str) -> Result<i64> {
    v.as_i64().ok_or_else(|| parse_err(path, "expected an integer"))
}

fn unsigned(v: &Value, path: &str) -> Result<u64> {
    v.as_u64()
        .ok_or_else(|| parse_err(path, "expected a non-negative integer"))
}

fn string<'a>(v: &'a Value, path: &str) -> Result<&'a str> {
    v.as_str().ok_or_else(|| parse_err(path, "expected a string"))
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| parse_err(path, "expected an array"))
}

fn reject_unknown(obj: &Map<String, Value>, path: &str, allowed: &[&str]) -> Result<()> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(parse_err(path, format!("unknown field `{k}`"))),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelFile {
    pub label: Option<String>,
    pub model: SumModel,
}

pub fn load_model(path: &Path) -> Result<ModelFile> {
    parse_model(&read_json(path)?)
}

pub fn parse_model(root: &Value) -> Result<ModelFile> {
    let obj = object(root, "model")?;
    reject_unknown(obj, "model", &["label", "variables"])?;
    let label = obj
        .get("label")
        .map(|v| string(v, "label").map(str::to_string))
        .transpose()?;
    let vars = array(field(obj, "model", "variables")?, "variables")?;
    if vars.is_empty() {
        return Err(invalid("variables", "model has no variables"));
    }
    let components = vars
        .iter()
        .enumerate()
        .map(|(i, v)| parse_variable(v, &format!("variables[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let model = SumModel::new(components).map_err(|e| invalid("variables", e))?;
    Ok(ModelFile { label, model })
}

fn parse_variable(v: &Value, path: &str) -> Result<(DistributionSpec, u64)> {
    let obj = object(v, path)?;
    let family = string(field(obj, path, "family")?, &format!("{path}.family"))?;
    let count = match obj.get("count") {
        Some(c) => unsigned(c, &format!("{path}.count"))?,
        None => 1,
    };
    if count == 0 {
        return Err(invalid(&format!("{path}.count"), "count must be at least 1"));
    }
    let num = |name: &str| -> Result<f64> {
        number(field(obj, path, name)?, &format!("{path}.{name}"))
    };
    let spec = match family.to_ascii_lowercase().as_str() {
        "bernoulli" => {
            reject_unknown(obj, path, &["family", "p", "count"])?;
            DistributionSpec::bernoulli(num("p")?)
        }
        "geometric" => {
            reject_unknown(obj, path, &["family", "p", "count"])?;
            DistributionSpec::geometric(num("p")?)
        }
        "poisson" => {
            reject_unknown(obj, path, &["family", "lambda", "count"])?;
            DistributionSpec::poisson(num("lambda")?)
        }
        "finite" => {
            reject_unknown(obj, path, &["family", "support", "count"])?;
            let support_path = format!("{path}.support");
            let pairs = array(field(obj, path, "support")?, &support_path)?
                .iter()
                .enumerate()
                .map(|(j, pair)| {
                    let p = format!("{support_path}[{j}]");
                    match array(pair, &p)?.as_slice() {
                        [value, weight] => Ok((
                            integer(value, &format!("{p}[0]"))?,
                            number(weight, &format!("{p}[1]"))?,
                        )),
                        _ => Err(parse_err(&p, "expected a [value, weight] pair")),
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            DistributionSpec::finite(pairs)
        }
        other => {
            return Err(parse_err(
                &format!("{path}.family"),
                format!("unknown family `{other}` (expected bernoulli, geometric, poisson or finite)"),
            ))
        }
    };
    Ok((spec.map_err(|e| invalid(path, e))?, count))
}

pub fn load_sweep(path: &Path) -> Result<Sweep> {
    parse_sweep(&read_json(path)?)
}

/// Calibration config:
///
/// ```json
/// {
///   "generators": [{"kind": "binomial", "p": 0.5}, {"kind": "mixed", "seed": 7}],
///   "sizes": [64, 128, 256],
///   "t_min": -3, "t_max": 3,
///   "method": "gaussian",
///   "eps": 1e-15
/// }
/// ```
pub fn parse_sweep(root: &Value) -> Result<Sweep> {
    let obj = object(root, "config")?;
    reject_unknown(obj, "config", &["generators", "sizes", "t_min", "t_max", "method", "eps"])?;
    let generators = array(field(obj, "config", "generators")?, "generators")?
        .iter()
        .enumerate()
        .map(|(i, g)| parse_generator(g, &format!("generators[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let sizes = array(field(obj, "config", "sizes")?, "sizes")?
        .iter()
        .enumerate()
        .map(|(i, s)| unsigned(s, &format!("sizes[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    let t_min = number(field(obj, "config", "t_min")?, "t_min")?;
    let t_max = number(field(obj, "config", "t_max")?, "t_max")?;
    let method = match obj.get("method") {
        None => Method::Gaussian,
        Some(m) => match string(m, "method")? {
            "gaussian" => Method::Gaussian,
            "tilted" => Method::Tilted,
            other => {
                return Err(parse_err(
                    "method",
                    format!("unknown method `{other}` (expected gaussian or tilted)"),
                ))
            }
        },
    };
    let eps = match obj.get("eps") {
        None => 1e-15,
        Some(e) => number(e, "eps")?,
    };
    if generators.is_empty() || sizes.is_empty() {
        return Err(InputError::Invalid("calibration sweep is empty".into()));
    }
    if let Some(i) = sizes.iter().position(|&s| s == 0) {
        return Err(invalid(&format!("sizes[{i}]"), "size must be at least 1"));
    }
    if t_min > t_max {
        return Err(invalid("t_min", format!("{t_min} exceeds t_max = {t_max}")));
    }
    Ok(Sweep {
        generators,
        sizes,
        t_min,
        t_max,
        method,
        eps,
    })
}

fn parse_generator(v: &Value, path: &str) -> Result<Generator> {
    let obj = object(v, path)?;
    let kind = string(field(obj, path, "kind")?, &format!("{path}.kind"))?;
    let num = |name: &str| -> Result<f64> {
        number(field(obj, path, name)?, &format!("{path}.{name}"))
    };
    let g = match kind {
        "binomial" => {
            reject_unknown(obj, path, &["kind", "p"])?;
            Generator::Binomial { p: num("p")? }
        }
        "geometric_sum" => {
            reject_unknown(obj, path, &["kind", "p"])?;
            Generator::GeometricSum { p: num("p")? }
        }
        "poisson_sum" => {
            reject_unknown(obj, path, &["kind", "lambda"])?;
            Generator::PoissonSum { rate: num("lambda")? }
        }
        "mixed" => {
            reject_unknown(obj, path, &["kind", "seed"])?;
            Generator::Mixed {
                seed: unsigned(field(obj, path, "seed")?, &format!("{path}.seed"))?,
            }
        }
        other => {
            return Err(parse_err(
                &format!("{path}.kind"),
                format!("unknown generator `{other}`"),
            ))
        }
    };
    // parameters are checked here so a bad config fails before any work starts
    g.build(1).map_err(|e| invalid(path, e))?;
    Ok(g)
}
