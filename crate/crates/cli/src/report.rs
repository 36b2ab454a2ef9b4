//! Line-oriented `key=value` run reports, with an optional JSON rendering.

use std::fmt::Write as _;

use twofactor::embed::Trace;
use twofactor::Constants;

/// Ordered report entries. Timing entries are kept apart so that two runs
/// with identical inputs produce identical reports once they are dropped.
#[derive(Clone, Debug, Default)]
pub struct RunReport {
    entries: Vec<(String, String)>,
    timings: Vec<(String, f64)>,
}

impl RunReport {
    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) {
        self.entries.push((key.into(), value.to_string()));
    }

    #[cfg(test)]
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn time(&mut self, key: impl Into<String>, secs: f64) {
        self.timings.push((key.into(), secs));
    }

    /// Every constant that differs from the strict defaults.
    pub fn deviations(&mut self, constants: &Constants) {
        let devs = constants.deviations();
        self.push("deviations", devs.len());
        for (k, v) in devs {
            self.push(format!("deviation.{k}"), v);
        }
    }

    pub fn trace(&mut self, trace: &Trace) {
        for (k, v) in trace.counts() {
            self.push(format!("count.{k}"), v);
        }
        for (k, v) in trace.timings() {
            self.time(format!("time.{k}"), *v);
        }
    }

    pub fn to_text(&self, with_timings: bool) -> String {
        let mut s = String::new();
        for (k, v) in &self.entries {
            let _ = writeln!(s, "{k}={v}");
        }
        if with_timings {
            for (k, v) in &self.timings {
                let _ = writeln!(s, "{k}={v:.3}");
            }
        }
        s
    }

    pub fn to_json(&self, with_timings: bool) -> String {
        let mut map = serde_json::Map::new();
        for (k, v) in &self.entries {
            map.insert(k.clone(), serde_json::Value::String(v.clone()));
        }
        if with_timings {
            for (k, v) in &self.timings {
                map.insert(k.clone(), serde_json::json!(v));
            }
        }
        let mut s = serde_json::to_string_pretty(&serde_json::Value::Object(map)).expect("string map");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn timings_are_separable() {
        let mut r = RunReport::default();
        r.push("status", "ok");
        r.time("time.total", 1.25);
        assert_eq!(r.to_text(false), "status=ok\n");
        assert_eq!(r.to_text(true), "status=ok\ntime.total=1.250\n");
        let json: serde_json::Value = serde_json::from_str(&r.to_json(false)).unwrap();
        assert_eq!(json["status"], "ok");
        assert_eq!(r.get("status"), Some("ok"));
    }

    #[test]
    fn practical_constants_list_deviations() {
        let mut r = RunReport::default();
        r.deviations(&Constants::practical());
        assert!(r.get("deviation.K").is_some());
        let mut s = RunReport::default();
        s.deviations(&Constants::strict());
        assert_eq!(s.to_text(false), "deviations=0\n");
    }
}
