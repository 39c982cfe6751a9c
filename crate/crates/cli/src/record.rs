//! The row unit shared by every tabular output.

use aqi_core::probes::{ProbeKind, SceneParams};
use aqi_core::stein::{error_exponent, error_probability, probe_rel_entropy, ExponentQuery};
use serde::Serialize;

/// Pinned CSV schema; floats are printed with 17 significant digits so
/// re-parsing is bit-exact.
pub const CSV_HEADER: &str = "probe,N_S,N_B,kappa,epsilon,C,M,a,b,R,P_err,path,flags";

/// One grid point's inputs and outputs. `m = 0` encodes the `M -> infinity`
/// limit (`R = a`). `c` is populated for the three-mode probe only.
#[derive(Debug, Clone, Serialize)]
pub struct SweepRecord {
    pub probe: String,
    #[serde(rename = "N_S")]
    pub n_s: f64,
    #[serde(rename = "N_B")]
    pub n_b: f64,
    pub kappa: f64,
    pub epsilon: f64,
    #[serde(rename = "C")]
    pub c: Option<f64>,
    #[serde(rename = "M")]
    pub m: u64,
    pub a: f64,
    pub b: f64,
    #[serde(rename = "R")]
    pub r: f64,
    #[serde(rename = "P_err")]
    pub p_err: f64,
    pub path: String,
    pub flags: Vec<String>,
}

/// 17 significant digits, round-trip safe.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

impl SweepRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            self.probe,
            fmt_float(self.n_s),
            fmt_float(self.n_b),
            fmt_float(self.kappa),
            fmt_float(self.epsilon),
            self.c.map(fmt_float).unwrap_or_default(),
            self.m,
            fmt_float(self.a),
            fmt_float(self.b),
            fmt_float(self.r),
            fmt_float(self.p_err),
            self.path,
            // flags must not break the column count
            self.flags.join(";").replace(',', " "),
        )
    }

    pub fn is_error(&self) -> bool {
        self.flags.iter().any(|f| f.starts_with("error:"))
    }

    /// Parses a data row of the pinned schema.
    #[cfg(test)]
    pub fn parse_csv_row(line: &str) -> Result<SweepRecord, String> {
        let parts: Vec<&str> = line.split(',').collect();
        if parts.len() != 13 {
            return Err(format!("expected 13 columns, got {}", parts.len()));
        }
        let f = |s: &str, name: &str| -> Result<f64, String> {
            s.parse::<f64>().map_err(|e| format!("{name}: {e}"))
        };
        Ok(SweepRecord {
            probe: parts[0].to_string(),
            n_s: f(parts[1], "N_S")?,
            n_b: f(parts[2], "N_B")?,
            kappa: f(parts[3], "kappa")?,
            epsilon: f(parts[4], "epsilon")?,
            c: if parts[5].is_empty() {
                None
            } else {
                Some(f(parts[5], "C")?)
            },
            m: parts[6].parse::<u64>().map_err(|e| format!("M: {e}"))?,
            a: f(parts[7], "a")?,
            b: f(parts[8], "b")?,
            r: f(parts[9], "R")?,
            p_err: f(parts[10], "P_err")?,
            path: parts[11].to_string(),
            flags: if parts[12].is_empty() {
                Vec::new()
            } else {
                parts[12].split(';').map(str::to_string).collect()
            },
        })
    }
}

/// Evaluates one record. Numeric failures yield a diagnostic record with
/// NaN outputs and an `error:` flag rather than aborting the whole run.
pub fn evaluate(probe: &ProbeKind, scene: &SceneParams, m: u64) -> SweepRecord {
    let mut rec = SweepRecord {
        probe: probe.label().to_string(),
        n_s: scene.n_s,
        n_b: scene.n_b,
        kappa: scene.kappa,
        epsilon: scene.epsilon,
        c: None,
        m,
        a: f64::NAN,
        b: f64::NAN,
        r: f64::NAN,
        p_err: f64::NAN,
        path: "-".to_string(),
        flags: Vec::new(),
    };
    match probe_rel_entropy(probe, scene) {
        Ok(eval) => {
            rec.c = eval.c;
            rec.a = eval.pair.a;
            rec.b = eval.pair.b;
            rec.path = eval.path.label().to_string();
            rec.flags = eval.warnings;
            if m == 0 {
                // limit row: R = a; the bound e^{-M R} goes to 0 when a > 0
                rec.r = eval.pair.a;
                rec.p_err = if eval.pair.a > 0.0 { 0.0 } else { 1.0 };
            } else {
                match error_exponent(&ExponentQuery {
                    m,
                    epsilon: scene.epsilon,
                    pair: eval.pair,
                }) {
                    Ok(r) => {
                        rec.r = r;
                        rec.p_err = error_probability(r, m);
                    }
                    Err(e) => rec.flags.push(format!("error:{e}")),
                }
            }
        }
        Err(e) => rec.flags.push(format!("error:{e}")),
    }
    rec
}
