//! Machine-readable reports: inputs, outputs, residuals with their tolerances, pass flags, timing.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: BTreeMap<String, Value>,
    pub outputs: BTreeMap<String, Value>,
    pub residuals: BTreeMap<String, f64>,
    pub tolerances: BTreeMap<String, f64>,
    /// One flag per check, plus `all`.
    pub pass: BTreeMap<String, bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

fn to_value(v: impl Serialize) -> Value {
    serde_json::to_value(v).expect("report values serialise")
}

impl Report {
    pub fn new(command: impl Into<String>) -> Self {
        let mut r = Self { command: command.into(), ..Self::default() };
        r.pass.insert("all".into(), true);
        r
    }

    pub fn input(&mut self, key: &str, v: impl Serialize) -> &mut Self {
        self.inputs.insert(key.into(), to_value(v));
        self
    }

    pub fn output(&mut self, key: &str, v: impl Serialize) -> &mut Self {
        self.outputs.insert(key.into(), to_value(v));
        self
    }

    /// Records `residual ≤ tolerance` as a check.
    pub fn check(&mut self, key: &str, residual: f64, tolerance: f64) -> bool {
        let ok = residual.is_finite() && residual <= tolerance;
        self.residuals.insert(key.into(), if residual.is_finite() { residual } else { f64::MAX });
        self.tolerances.insert(key.into(), tolerance);
        self.flag(key, ok)
    }

    /// Records a check without a numeric residual.
    pub fn flag(&mut self, key: &str, ok: bool) -> bool {
        self.pass.insert(key.into(), ok);
        if !ok {
            self.pass.insert("all".into(), false);
        }
        ok
    }

    /// Replaces the tolerance of every numeric check and re-evaluates the flags.
    pub fn override_tolerance(&mut self, tolerance: f64) {
        for t in self.tolerances.values_mut() {
            *t = tolerance;
        }
        for (k, r) in &self.residuals {
            self.pass.insert(k.clone(), *r <= tolerance);
        }
        let all = self.pass.iter().filter(|(k, _)| k.as_str() != "all").all(|(_, ok)| *ok);
        self.pass.insert("all".into(), all);
    }

    pub fn passed(&self) -> bool {
        self.pass.get("all").copied().unwrap_or(true)
    }

    pub fn set_elapsed(&mut self, ms: Option<f64>) {
        self.elapsed_ms = ms;
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}", self.command);
        let section = |s: &mut String, title: &str, m: &BTreeMap<String, Value>| {
            if m.is_empty() {
                return;
            }
            let _ = writeln!(s, "{title}:");
            for (k, v) in m {
                let text = match v {
                    Value::String(x) => x.clone(),
                    other => other.to_string(),
                };
                let _ = writeln!(s, "  {k} = {text}");
            }
        };
        section(&mut s, "inputs", &self.inputs);
        section(&mut s, "outputs", &self.outputs);
        if !self.pass.is_empty() {
            let _ = writeln!(s, "checks:");
            for (k, ok) in &self.pass {
                let status = if *ok { "pass" } else { "FAIL" };
                match (self.residuals.get(k), self.tolerances.get(k)) {
                    (Some(r), Some(t)) => {
                        let _ = writeln!(s, "  {k}: {status} (residual {r:.3e}, tolerance {t:.1e})");
                    }
                    _ => {
                        let _ = writeln!(s, "  {k}: {status}");
                    }
                }
            }
        }
        if let Some(ms) = self.elapsed_ms {
            let _ = writeln!(s, "elapsed: {ms:.1} ms");
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failed_check_clears_all() {
        let mut r = Report::new("x");
        assert!(r.check("a", 0.0, 0.0));
        assert!(r.passed());
        assert!(!r.check("b", 1.0, 0.5));
        assert!(!r.passed());
        assert!(!r.check("c", f64::NAN, 1.0));
        assert!(r.to_json().contains("\"residuals\""));
        assert!(r.to_text().contains("FAIL"));
    }

    #[test]
    fn overriding_the_tolerance_reevaluates() {
        let mut r = Report::new("x");
        r.check("a", 1e-3, 1e-6);
        r.flag("b", true);
        assert!(!r.passed());
        r.override_tolerance(1e-2);
        assert!(r.passed());
        assert_eq!(r.tolerances["a"], 1e-2);
    }

    #[test]
    fn json_is_stable() {
        let mut a = Report::new("demo");
        a.input("z", 1).input("a", "x");
        a.output("v", vec![1, 2]);
        let b = a.clone();
        assert_eq!(a.to_json(), b.to_json());
        assert!(!a.to_json().contains("elapsed_ms"));
    }
}
