use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn new(path: &Path, bytes: &[u8]) -> Self {
        Self {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(bytes)),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ErrorInfo {
    pub kind: String,
    pub message: String,
}

/// Everything a command prints. `result` is command specific.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub inputs: Vec<InputDigest>,
    pub status: &'static str,
    pub exit_code: i32,
    pub result: Value,
    pub error: Option<ErrorInfo>,
    pub wall_time_seconds: f64,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Indented `key: value` lines; reals to 12 significant digits.
    pub fn to_human(&self) -> String {
        let mut out = String::new();
        writeln!(out, "command: {}", self.command.join(" ")).unwrap();
        for input in &self.inputs {
            writeln!(out, "input: {} (sha256 {})", input.path, input.sha256).unwrap();
        }
        render(&mut out, &self.result, 0);
        if let Some(e) = &self.error {
            writeln!(out, "error ({}): {}", e.kind, e.message).unwrap();
        }
        writeln!(out, "status: {} (exit {})", self.status, self.exit_code).unwrap();
        writeln!(out, "wall time: {:.3} s", self.wall_time_seconds).unwrap();
        out
    }
}

fn render(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, v) in map {
                match v {
                    Value::Object(_) => {
                        writeln!(out, "{pad}{k}:").unwrap();
                        render(out, v, depth + 1);
                    }
                    _ => writeln!(out, "{pad}{k}: {}", scalar(v)).unwrap(),
                }
            }
        }
        other => writeln!(out, "{pad}{}", scalar(other)).unwrap(),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Number(n) if n.is_f64() => sig12(n.as_f64().unwrap()),
        Value::String(s) => s.clone(),
        Value::Array(items) => format!("[{}]", items.iter().map(scalar).collect::<Vec<_>>().join(", ")),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

/// Twelve significant digits, fixed notation where that stays readable.
pub fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if (-4..12).contains(&mag) {
        format!("{:.*}", (11 - mag).max(0) as usize, x)
    } else {
        format!("{x:.11e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digits() {
        assert_eq!(sig12(0.8535533905932737), "0.853553390593");
        assert_eq!(sig12(2.4356601717798214), "2.43566017178");
        assert_eq!(sig12(1.5e-9), "1.50000000000e-9");
        assert_eq!(sig12(0.0), "0");
        assert_eq!(sig12(-0.000123), "-0.000123000000000");
    }
}
