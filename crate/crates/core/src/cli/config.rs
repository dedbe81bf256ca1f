//! Line-oriented job configuration: `[section]` headers, `key = value`
//! lines and `#` comments. Rationals are exact (`p/q`, integers or finite
//! decimals).

use std::collections::BTreeMap;
use std::fmt;

use crate::linalg::{parse_q, Q, QVec};
use crate::rootdata::{AlgebraSpec, Family};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    /// 1-based line, or 0 when the problem is a missing entry.
    pub line: usize,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "config: {}", self.message)
        } else {
            write!(f, "config line {}: {}", self.line, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError { line, message: message.into() })
}

const SECTIONS: &[(&str, &[&str])] = &[
    ("algebra", &["family", "m", "n", "alpha"]),
    ("realform", &["tag"]),
    ("positive", &["functional"]),
    ("cell", &["r"]),
    ("potential", &["kind", "coefficients", "term", "quad"]),
    ("job", &["box", "lambda_hat", "lattice_scale"]),
    ("solver", &["tol", "max_iter", "divergence_norm", "sample_radius", "sample_points"]),
    ("output", &["dir"]),
    ("unitary", &["mu", "lambda", "a", "b"]),
    ("atlas", &["slice"]),
];

/// Keys that may appear more than once.
const REPEATABLE: &[(&str, &str)] = &[("potential", "term")];

#[derive(Debug, Clone, PartialEq, Eq)]
struct Entry {
    line: usize,
    value: String,
}

/// Raw parsed file: `(section, key) -> entries in file order`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawConfig {
    entries: BTreeMap<(String, String), Vec<Entry>>,
}

impl RawConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut out = RawConfig::default();
        let mut section: Option<String> = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            if let Some(rest) = content.strip_prefix('[') {
                let Some(name) = rest.strip_suffix(']') else {
                    return err(line, "unterminated section header");
                };
                let name = name.trim();
                if !SECTIONS.iter().any(|(s, _)| *s == name) {
                    return err(line, format!("unknown section [{name}]"));
                }
                section = Some(name.to_string());
                continue;
            }
            let Some((key, value)) = content.split_once('=') else {
                return err(line, format!("expected `key = value`, found `{content}`"));
            };
            let key = key.trim();
            let Some(sec) = &section else {
                return err(line, format!("key `{key}` outside any section"));
            };
            let allowed = SECTIONS.iter().find(|(s, _)| s == sec).map(|(_, k)| *k).unwrap_or(&[]);
            if !allowed.contains(&key) {
                return err(line, format!("unknown key `{key}` in [{sec}]"));
            }
            let slot = out.entries.entry((sec.clone(), key.to_string())).or_default();
            if !slot.is_empty() && !REPEATABLE.contains(&(sec.as_str(), key)) {
                return err(line, format!("duplicate key `{key}` in [{sec}] (first on line {})", slot[0].line));
            }
            slot.push(Entry { line, value: value.trim().to_string() });
        }
        Ok(out)
    }

    fn get(&self, section: &str, key: &str) -> Option<&Entry> {
        self.entries.get(&(section.to_string(), key.to_string())).and_then(|v| v.first())
    }

    fn all(&self, section: &str, key: &str) -> &[Entry] {
        self.entries.get(&(section.to_string(), key.to_string())).map_or(&[], |v| v.as_slice())
    }
}

fn parse_rational(e: &Entry) -> Result<Q, ConfigError> {
    parse_q(&e.value).or_else(|_| err(e.line, format!("`{}` is not a rational number", e.value)))
}

pub fn parse_vector(s: &str) -> Result<QVec, String> {
    let s = s.trim().trim_start_matches('(').trim_end_matches(')');
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|x| parse_q(x.trim()).map_err(|_| format!("`{}` is not a rational number", x.trim()))).collect()
}

fn vector(e: &Entry) -> Result<QVec, ConfigError> {
    parse_vector(&e.value).or_else(|m| err(e.line, m))
}

fn uint(e: &Entry) -> Result<u64, ConfigError> {
    e.value.parse().or_else(|_| err(e.line, format!("`{}` is not a nonnegative integer", e.value)))
}

fn float(e: &Entry) -> Result<f64, ConfigError> {
    match e.value.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => parse_rational(e).map(|q| crate::linalg::to_f64(&q)),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PotentialSpec {
    /// Unit (or given) coefficients on the cell's extreme rays.
    Model { coefficients: Option<Vec<f64>> },
    /// Terms `c ; weight` with ambient weights, and a quadratic part in the
    /// cell's subspace coordinates.
    Custom { terms: Vec<(f64, QVec, usize)>, quad: Option<Vec<QVec>> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnitarySpec {
    pub mu: Option<QVec>,
    pub lambda: Option<Q>,
    pub a: Option<QVec>,
    pub b: Option<Q>,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JobConfig {
    pub algebra: AlgebraSpec,
    pub realform: Option<(String, usize)>,
    pub functional: Option<(QVec, usize)>,
    /// 1-based simple-root indices.
    pub cell: Option<(Vec<usize>, usize)>,
    pub potential: PotentialSpec,
    pub box_n: u32,
    pub lambda_hat: Option<(QVec, usize)>,
    pub lattice_scale: u32,
    pub tol: f64,
    pub max_iter: usize,
    pub divergence_norm: f64,
    pub sample_radius: f64,
    pub sample_points: usize,
    pub out_dir: Option<String>,
    pub unitary: UnitarySpec,
    pub slice: Option<(String, usize)>,
}

impl JobConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let raw = RawConfig::parse(text)?;
        let Some(fam) = raw.get("algebra", "family") else {
            return err(0, "missing `family` in [algebra]");
        };
        let family: Family = fam.value.parse().or_else(|m: String| err(fam.line, m))?;
        let m = raw.get("algebra", "m").map(uint).transpose()?.unwrap_or(0) as usize;
        let n = raw.get("algebra", "n").map(uint).transpose()?.unwrap_or(0) as usize;
        let alpha = raw.get("algebra", "alpha").map(parse_rational).transpose()?;
        let algebra = AlgebraSpec { family, m, n, alpha };
        let line_of = |s: &str, k: &str| raw.get(s, k).map_or(0, |e| e.line);
        if let Err(e) = algebra.validate() {
            return err(line_of("algebra", "family"), e.to_string());
        }

        let potential = match raw.get("potential", "kind").map(|e| (e.value.as_str(), e.line)) {
            None | Some(("model", _)) => {
                let coefficients = match raw.get("potential", "coefficients") {
                    None => None,
                    Some(e) => Some(
                        e.value
                            .split(',')
                            .map(|x| float(&Entry { line: e.line, value: x.trim().to_string() }))
                            .collect::<Result<Vec<f64>, _>>()?,
                    ),
                };
                PotentialSpec::Model { coefficients }
            }
            Some(("custom", _)) => {
                let mut terms = Vec::new();
                for e in raw.all("potential", "term") {
                    let Some((c, w)) = e.value.split_once(';') else {
                        return err(e.line, "term must read `coefficient ; w1, w2, ...`");
                    };
                    let c = float(&Entry { line: e.line, value: c.trim().to_string() })?;
                    let w = parse_vector(w).or_else(|m| err(e.line, m))?;
                    terms.push((c, w, e.line));
                }
                let quad = match raw.get("potential", "quad") {
                    None => None,
                    Some(e) => Some(
                        e.value.split(';').map(|r| parse_vector(r).or_else(|m| err(e.line, m))).collect::<Result<_, _>>()?,
                    ),
                };
                PotentialSpec::Custom { terms, quad }
            }
            Some((other, line)) => return err(line, format!("potential kind must be `model` or `custom`, not `{other}`")),
        };

        let cell = match raw.get("cell", "r") {
            None => None,
            Some(e) => {
                let body = e.value.trim().trim_start_matches('{').trim_end_matches('}');
                let idx = if body.trim().is_empty() {
                    Vec::new()
                } else {
                    body.split(',')
                        .map(|x| {
                            let x = x.trim().trim_start_matches('a');
                            x.parse::<usize>().ok().filter(|v| *v >= 1)
                        })
                        .collect::<Option<Vec<usize>>>()
                        .map_or_else(|| err(e.line, "R must be a list of 1-based simple-root indices"), Ok)?
                };
                Some((idx, e.line))
            }
        };

        let u32_of = |s: &str, k: &str, d: u32| -> Result<u32, ConfigError> {
            match raw.get(s, k) {
                None => Ok(d),
                Some(e) => u32::try_from(uint(e)?).or_else(|_| err(e.line, "value too large")),
            }
        };
        let f64_of = |s: &str, k: &str, d: f64| -> Result<f64, ConfigError> {
            match raw.get(s, k) {
                None => Ok(d),
                Some(e) => {
                    let v = float(e)?;
                    if v > 0.0 { Ok(v) } else { err(e.line, "must be positive") }
                }
            }
        };
        let lattice_scale = u32_of("job", "lattice_scale", 1)?;
        if lattice_scale == 0 {
            return err(line_of("job", "lattice_scale"), "lattice_scale must be positive");
        }
        Ok(JobConfig {
            realform: raw.get("realform", "tag").map(|e| (e.value.clone(), e.line)),
            functional: raw.get("positive", "functional").map(|e| vector(e).map(|v| (v, e.line))).transpose()?,
            cell,
            potential,
            box_n: u32_of("job", "box", 4)?,
            lambda_hat: raw.get("job", "lambda_hat").map(|e| vector(e).map(|v| (v, e.line))).transpose()?,
            lattice_scale,
            tol: f64_of("solver", "tol", 1e-8)?,
            max_iter: u32_of("solver", "max_iter", 10_000)? as usize,
            divergence_norm: f64_of("solver", "divergence_norm", 1e3)?,
            sample_radius: f64_of("solver", "sample_radius", 3.0)?,
            sample_points: u32_of("solver", "sample_points", 7)? as usize,
            out_dir: raw.get("output", "dir").map(|e| e.value.clone()),
            unitary: UnitarySpec {
                mu: raw.get("unitary", "mu").map(vector).transpose()?,
                lambda: raw.get("unitary", "lambda").map(parse_rational).transpose()?,
                a: raw.get("unitary", "a").map(vector).transpose()?,
                b: raw.get("unitary", "b").map(parse_rational).transpose()?,
                line: line_of("unitary", "lambda").max(line_of("unitary", "mu")),
            },
            slice: raw.get("atlas", "slice").map(|e| (e.value.clone(), e.line)),
            algebra,
        })
    }
}

/// `v1 ; v2 ; origin`.
pub fn parse_slice(s: &str) -> Result<[QVec; 3], String> {
    let parts: Vec<&str> = s.split(';').collect();
    if parts.len() != 3 {
        return Err("slice must read `v1 ; v2 ; origin`".into());
    }
    Ok([parse_vector(parts[0])?, parse_vector(parts[1])?, parse_vector(parts[2])?])
}
