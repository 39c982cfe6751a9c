//! Plain-text grid specification for `aqi sweep`.
//!
//! One `key = value` assignment per line; `#` starts a comment. Numeric axes
//! accept a scalar or `start:stop:count` (append `:log` for logarithmic
//! spacing); `probe` takes a comma-separated subset of
//! `tmsv,coherent,threemode`; `m` takes integers (0 means the M -> infinity
//! limit). Axis order in the emitted Cartesian product is fixed:
//! probe, ns, nb, kappa, eps, c, m.

use std::fmt;

#[derive(Debug)]
pub struct SpecError {
    pub line: usize,
    pub message: String,
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "grid spec line {}: {}", self.line, self.message)
    }
}

#[derive(Debug, Clone)]
pub struct GridSpec {
    pub probes: Vec<String>,
    pub ns: Vec<f64>,
    pub nb: Vec<f64>,
    pub kappa: Vec<f64>,
    pub eps: Vec<f64>,
    /// Three-mode correlation axis; `None` means "default C_max per point".
    pub c: Option<Vec<f64>>,
    pub m: Vec<u64>,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            probes: vec!["tmsv".to_string()],
            ns: vec![1.0],
            nb: vec![1.0],
            kappa: vec![0.01],
            eps: vec![0.01],
            c: None,
            m: vec![0],
        }
    }
}

fn parse_axis(value: &str, line: usize) -> Result<Vec<f64>, SpecError> {
    let err = |message: String| SpecError { line, message };
    let parts: Vec<&str> = value.split(':').collect();
    match parts.len() {
        1 => {
            let x = value
                .parse::<f64>()
                .map_err(|e| err(format!("bad number '{value}': {e}")))?;
            Ok(vec![x])
        }
        3 | 4 => {
            let start = parts[0]
                .parse::<f64>()
                .map_err(|e| err(format!("bad start '{}': {e}", parts[0])))?;
            let stop = parts[1]
                .parse::<f64>()
                .map_err(|e| err(format!("bad stop '{}': {e}", parts[1])))?;
            let count = parts[2]
                .parse::<usize>()
                .map_err(|e| err(format!("bad count '{}': {e}", parts[2])))?;
            if count == 0 {
                return Err(err("count must be at least 1".to_string()));
            }
            let log = if parts.len() == 4 {
                if parts[3] != "log" {
                    return Err(err(format!("unknown axis suffix '{}'", parts[3])));
                }
                true
            } else {
                false
            };
            if log && (start <= 0.0 || stop <= 0.0) {
                return Err(err("log axis requires positive endpoints".to_string()));
            }
            if count == 1 {
                return Ok(vec![start]);
            }
            let mut out = Vec::with_capacity(count);
            for i in 0..count {
                let t = i as f64 / (count - 1) as f64;
                let x = if log {
                    (start.ln() + t * (stop.ln() - start.ln())).exp()
                } else {
                    start + t * (stop - start)
                };
                out.push(x);
            }
            Ok(out)
        }
        _ => Err(err(format!(
            "expected 'value' or 'start:stop:count[:log]', got '{value}'"
        ))),
    }
}

pub fn parse(text: &str) -> Result<GridSpec, SpecError> {
    let mut spec = GridSpec::default();
    let mut seen: Vec<String> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |message: String| SpecError { line, message };
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| err(format!("expected 'key = value', got '{content}'")))?;
        let key = key.trim().to_ascii_lowercase();
        let value = value.trim();
        if seen.contains(&key) {
            return Err(err(format!("duplicate key '{key}'")));
        }
        seen.push(key.clone());
        match key.as_str() {
            "probe" => {
                let probes: Vec<String> = value
                    .split(',')
                    .map(|s| s.trim().to_ascii_lowercase())
                    .collect();
                for p in &probes {
                    if !matches!(p.as_str(), "tmsv" | "coherent" | "threemode") {
                        return Err(err(format!("unknown probe '{p}'")));
                    }
                }
                if probes.is_empty() {
                    return Err(err("empty probe list".to_string()));
                }
                spec.probes = probes;
            }
            "ns" => spec.ns = parse_axis(value, line)?,
            "nb" => spec.nb = parse_axis(value, line)?,
            "kappa" => spec.kappa = parse_axis(value, line)?,
            "eps" => spec.eps = parse_axis(value, line)?,
            "c" => spec.c = Some(parse_axis(value, line)?),
            "m" => {
                let vals = parse_axis(value, line)?;
                let mut ms = Vec::with_capacity(vals.len());
                for v in vals {
                    if !v.is_finite() || !(0.0..=1e18).contains(&v) {
                        return Err(err(format!("M value {v} out of range")));
                    }
                    ms.push(v.round() as u64);
                }
                spec.m = ms;
            }
            other => return Err(err(format!("unknown key '{other}'"))),
        }
    }
    Ok(spec)
}
