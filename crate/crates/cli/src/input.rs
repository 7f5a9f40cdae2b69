//! Parsing of character specs, points, grids and hyperplanes.

use std::fs;

use multizeta::{AdditiveCharacter64, AdditiveTuple64, Complex64, DirichletCharacter64, DirichletTuple64, Hyperplane};
use serde::Deserialize;

/// A malformed command line or input file (exit code 2).
#[derive(Debug)]
pub struct InputError(pub String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

fn bad<T>(msg: impl Into<String>) -> Result<T, InputError> {
    Err(InputError(msg.into()))
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum CharSpec {
    Additive {
        #[serde(default)]
        value_at_one: Option<[f64; 2]>,
        #[serde(default)]
        lambda: Option<[f64; 2]>,
    },
    Dirichlet {
        modulus: u64,
        values: Vec<[f64; 2]>,
    },
    /// `root:b/N`; only from the shorthand.
    #[serde(skip)]
    Root { b: i64, n: i64 },
}

#[derive(Debug, Clone)]
pub enum Characters {
    Additive(AdditiveTuple64),
    Dirichlet(DirichletTuple64),
}

impl Characters {
    pub fn depth(&self) -> usize {
        match self {
            Characters::Additive(t) => t.depth(),
            Characters::Dirichlet(t) => t.depth(),
        }
    }
}

/// Library-level errors raised while building characters
/// (invalid tables, divergent tuples) are reported with exit code 1.
pub enum BuildError {
    Input(InputError),
    Library(multizeta::Error),
}

impl From<InputError> for BuildError {
    fn from(e: InputError) -> Self {
        BuildError::Input(e)
    }
}

impl From<multizeta::Error> for BuildError {
    fn from(e: multizeta::Error) -> Self {
        BuildError::Library(e)
    }
}

fn parse_item(item: &str, out: &mut Vec<CharSpec>) -> Result<(), InputError> {
    if let Some(r) = item.strip_prefix("trivial:") {
        let r: usize = r.parse().map_err(|_| InputError(format!("bad depth in '{item}'")))?;
        if r == 0 {
            return bad("trivial:r needs r >= 1");
        }
        out.extend((0..r).map(|_| CharSpec::Root { b: 0, n: 1 }));
    } else if let Some(frac) = item.strip_prefix("root:") {
        let (b, n) = frac.split_once('/').ok_or_else(|| InputError(format!("expected root:b/N, got '{item}'")))?;
        let b: i64 = b.trim().parse().map_err(|_| InputError(format!("bad numerator in '{item}'")))?;
        let n: i64 = n.trim().parse().map_err(|_| InputError(format!("bad modulus in '{item}'")))?;
        if n <= 0 {
            return bad(format!("modulus must be positive in '{item}'"));
        }
        out.push(CharSpec::Root { b, n });
    } else if let Some(path) = item.strip_prefix('@') {
        let text = fs::read_to_string(path).map_err(|e| InputError(format!("cannot read {path}: {e}")))?;
        let value: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| InputError(format!("{path}: invalid JSON: {e}")))?;
        let list = match value {
            serde_json::Value::Array(v) => v,
            other => vec![other],
        };
        for v in list {
            out.push(serde_json::from_value(v).map_err(|e| InputError(format!("{path}: {e}")))?);
        }
    } else {
        return bad(format!("unknown character spec '{item}' (use trivial:r, root:b/N or @file.json)"));
    }
    Ok(())
}

/// Parses every `--chars` argument, each a comma-separated list of specs.
pub fn parse_characters(args: &[String]) -> Result<Characters, BuildError> {
    let mut specs = Vec::new();
    for arg in args {
        for item in arg.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            parse_item(item, &mut specs)?;
        }
    }
    if specs.is_empty() {
        return Err(InputError("--chars is required".into()).into());
    }
    let dirichlet = specs.iter().filter(|s| matches!(s, CharSpec::Dirichlet { .. })).count();
    if dirichlet > 0 && dirichlet < specs.len() {
        return Err(InputError("cannot mix additive and Dirichlet characters".into()).into());
    }
    if dirichlet > 0 {
        let chars = specs
            .into_iter()
            .map(|s| match s {
                CharSpec::Dirichlet { modulus, values } => {
                    DirichletCharacter64::new(modulus, values.iter().map(|v| Complex64::new(v[0], v[1])).collect())
                }
                _ => unreachable!(),
            })
            .collect::<multizeta::Result<Vec<_>>>()?;
        return Ok(Characters::Dirichlet(DirichletTuple64::new(chars)?));
    }
    let chars = specs
        .into_iter()
        .map(|s| -> Result<AdditiveCharacter64, BuildError> {
            Ok(match s {
                CharSpec::Root { b, n } => AdditiveCharacter64::root(b, n)?,
                CharSpec::Additive { value_at_one: Some(v), lambda: None } => {
                    AdditiveCharacter64::from_value(Complex64::new(v[0], v[1]))?
                }
                CharSpec::Additive { value_at_one: None, lambda: Some(l) } => {
                    AdditiveCharacter64::from_lambda(Complex64::new(l[0], l[1]))?
                }
                CharSpec::Additive { .. } => {
                    return Err(InputError("additive spec needs exactly one of value_at_one, lambda".into()).into())
                }
                CharSpec::Dirichlet { .. } => unreachable!(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Characters::Additive(AdditiveTuple64::new(chars)?))
}

/// `3`, `-0.5`, `2i`, `0.5+14.1i`, `1e-3-2i`.
pub fn parse_complex(text: &str) -> Result<Complex64, InputError> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let err = || InputError(format!("bad complex number '{text}'"));
    if s.is_empty() {
        return Err(err());
    }
    if let Ok(x) = s.parse::<f64>() {
        return Ok(Complex64::new(x, 0.0));
    }
    let body = s.strip_suffix('i').ok_or_else(err)?;
    // split at the last sign that is not a leading sign or an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        x => x,
    };
    Ok(Complex64::new(re.parse().map_err(|_| err())?, im.parse().map_err(|_| err())?))
}

pub fn parse_point(text: &str) -> Result<Vec<Complex64>, InputError> {
    text.split(',').map(parse_complex).collect()
}

/// `x0:x1:nx,...`, one axis per coordinate; the lattice is real.
pub fn parse_grid(text: &str) -> Result<Vec<Vec<Complex64>>, InputError> {
    let mut axes = Vec::new();
    for axis in text.split(',') {
        let parts: Vec<&str> = axis.split(':').collect();
        let [a, b, n] = parts[..] else {
            return bad(format!("grid axis '{axis}' must be x0:x1:nx"));
        };
        let a: f64 = a.trim().parse().map_err(|_| InputError(format!("bad grid bound in '{axis}'")))?;
        let b: f64 = b.trim().parse().map_err(|_| InputError(format!("bad grid bound in '{axis}'")))?;
        let n: usize = n.trim().parse().map_err(|_| InputError(format!("bad grid count in '{axis}'")))?;
        if n == 0 || !a.is_finite() || !b.is_finite() {
            return bad(format!("grid axis '{axis}' must have finite bounds and nx >= 1"));
        }
        let step = if n == 1 { 0.0 } else { (b - a) / (n - 1) as f64 };
        axes.push((0..n).map(|k| a + step * k as f64).collect::<Vec<_>>());
    }
    // row-major, last axis fastest
    let mut points = vec![vec![]];
    for axis in &axes {
        points = points
            .into_iter()
            .flat_map(|p: Vec<Complex64>| axis.iter().map(move |&x| [p.clone(), vec![Complex64::new(x, 0.0)]].concat()))
            .collect();
    }
    Ok(points)
}

/// `i:n`.
pub fn parse_hyperplane(text: &str) -> Result<Hyperplane, InputError> {
    let (i, n) = text.split_once(':').ok_or_else(|| InputError(format!("expected i:n, got '{text}'")))?;
    let i: usize = i.trim().parse().map_err(|_| InputError(format!("bad index in '{text}'")))?;
    let n: i64 = n.trim().parse().map_err(|_| InputError(format!("bad level in '{text}'")))?;
    if i == 0 {
        return bad("hyperplane index starts at 1");
    }
    Ok(Hyperplane::new(i, n))
}
