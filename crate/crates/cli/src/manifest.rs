//! Run provenance emitted alongside every output file.

use std::io;
use std::path::Path;

use serde::Serialize;

pub const CONVENTIONS: &str = "quadrature ordering [q1..qn, p1..pn]; vacuum variance 1/2; \
entropic quantities in nats; R = a + sqrt(b/M) Phi^-1(eps), omitting the O(ln M / M) term; \
P_err = exp(-M R) clamped to 1 for R <= 0";

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command_line: String,
    pub conventions: &'static str,
    pub timestamp_utc: String,
}

impl RunManifest {
    pub fn current() -> Self {
        let command_line = std::env::args().collect::<Vec<_>>().join(" ");
        RunManifest {
            tool: "aqi",
            version: env!("CARGO_PKG_VERSION"),
            command_line,
            conventions: CONVENTIONS,
            timestamp_utc: chrono::Utc::now().to_rfc3339(),
        }
    }

    /// Writes `<output>.manifest.json` next to the file at `output`. The
    /// data file itself stays byte-identical across reruns; only this
    /// sidecar carries the timestamp.
    pub fn write_sidecar(&self, output: &Path) -> io::Result<()> {
        let mut name = output.file_name().unwrap_or_default().to_os_string();
        name.push(".manifest.json");
        let path = output.with_file_name(name);
        let body = serde_json::to_string_pretty(self).expect("manifest serializes");
        std::fs::write(path, body + "\n")
    }
}
