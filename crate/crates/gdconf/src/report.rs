//! Uniform reporting for CLI checks: a structured record serialized to
//! JSON with `--format json`, or rendered as indented text otherwise.

use serde::Serialize;
use std::collections::BTreeMap;
use std::time::Instant;

/// Outcome of one check run.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    /// Name of the check that ran, e.g. "envelope" or "lemma2".
    pub check: String,
    /// "pass", "fail", or "overflow".
    pub status: String,
    /// Human-readable witnesses: counterexamples on failure, certifying
    /// artifacts (rendered images, ranks, localities) on success.
    pub witnesses: Vec<String>,
    /// The bounds the run was performed under, by name.
    pub bounds: BTreeMap<String, u64>,
    /// RNG seed, recorded even for deterministic checks so reruns can be
    /// reproduced verbatim.
    pub seed: u64,
    /// Wall-clock milliseconds.
    pub timing_ms: u128,
    /// Check-specific structured payload.
    #[serde(skip_serializing_if = "serde_json::Value::is_null")]
    pub details: serde_json::Value,
}

impl Report {
    pub fn new(check: &str) -> Report {
        Report {
            check: check.to_string(),
            status: "pass".to_string(),
            witnesses: Vec::new(),
            bounds: BTreeMap::new(),
            seed: 0,
            timing_ms: 0,
            details: serde_json::Value::Null,
        }
    }

    pub fn bound(mut self, name: &str, value: u64) -> Report {
        self.bounds.insert(name.to_string(), value);
        self
    }

    pub fn passed(&self) -> bool {
        self.status == "pass"
    }

    pub fn overflowed(&self) -> bool {
        self.status == "overflow"
    }

    pub fn fail(&mut self, witness: String) {
        self.status = "fail".to_string();
        self.witnesses.push(witness);
    }

    pub fn render_text(&self) -> String {
        let mut out = format!(
            "check: {}\nstatus: {}\nseed: {}\ntime: {} ms\n",
            self.check, self.status, self.seed, self.timing_ms
        );
        if !self.bounds.is_empty() {
            let bounds: Vec<String> = self
                .bounds
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect();
            out.push_str(&format!("bounds: {}\n", bounds.join(", ")));
        }
        for w in &self.witnesses {
            out.push_str(&format!("  {w}\n"));
        }
        out
    }

    pub fn render_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Measures elapsed wall-clock time for a report.
pub struct Timer(Instant);

impl Timer {
    pub fn start() -> Timer {
        Timer(Instant::now())
    }

    pub fn stop(&self, report: &mut Report) {
        report.timing_ms = self.0.elapsed().as_millis();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_roundtrip_has_required_fields() {
        let mut r = Report::new("bracket").bound("order", 4);
        r.seed = 7;
        r.witnesses.push("(T + 2*λ)·v".to_string());
        let v: serde_json::Value = serde_json::from_str(&r.render_json()).unwrap();
        assert_eq!(v["check"], "bracket");
        assert_eq!(v["status"], "pass");
        assert_eq!(v["bounds"]["order"], 4);
        assert_eq!(v["seed"], 7);
        assert!(v["witnesses"].as_array().unwrap().len() == 1);
    }

    #[test]
    fn fail_flips_status() {
        let mut r = Report::new("check");
        r.fail("axiom broken".into());
        assert!(!r.passed());
        assert!(r.render_text().contains("axiom broken"));
    }
}
