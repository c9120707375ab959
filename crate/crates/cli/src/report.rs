//! Newline-delimited JSON records with a trailing summary.

use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Pass,
    Fail,
    /// Reported without a pass criterion.
    Info,
    /// Not applicable here, e.g. no sample points inside the domain.
    Skip,
    /// The check could not be evaluated.
    Error,
}

#[derive(Debug, Default)]
pub struct Report {
    rows: Vec<Value>,
    counts: [usize; 5],
}

#[derive(Debug, Serialize)]
struct Summary<'a> {
    summary: &'a str,
    pass: usize,
    fail: usize,
    info: usize,
    skip: usize,
    error: usize,
    exit_code: i32,
}

impl Report {
    /// Appends a record; `fields` must be a JSON object.
    pub fn push(&mut self, check: &str, verdict: Verdict, fields: Value) {
        let mut m = match fields {
            Value::Object(m) => m,
            Value::Null => Map::new(),
            other => panic!("record fields must be an object, got {other}"),
        };
        m.insert("check".into(), check.into());
        m.insert("verdict".into(), serde_json::to_value(verdict).expect("serializable"));
        self.counts[verdict as usize] += 1;
        self.rows.push(Value::Object(m));
    }

    pub fn pass_if(&mut self, check: &str, ok: bool, fields: Value) {
        self.push(check, if ok { Verdict::Pass } else { Verdict::Fail }, fields);
    }

    pub fn count(&self, v: Verdict) -> usize {
        self.counts[v as usize]
    }

    pub fn exit_code(&self) -> i32 {
        if self.count(Verdict::Fail) + self.count(Verdict::Error) > 0 {
            1
        } else {
            0
        }
    }

    pub fn render(&self, command: &str) -> String {
        let mut out = String::new();
        for r in &self.rows {
            out.push_str(&r.to_string());
            out.push('\n');
        }
        let s = Summary {
            summary: command,
            pass: self.count(Verdict::Pass),
            fail: self.count(Verdict::Fail),
            info: self.count(Verdict::Info),
            skip: self.count(Verdict::Skip),
            error: self.count(Verdict::Error),
            exit_code: self.exit_code(),
        };
        out.push_str(&serde_json::to_string(&s).expect("serializable"));
        out.push('\n');
        out
    }
}

/// `[re, im]`.
pub fn cx(z: qhyp_core::C64) -> Value {
    Value::from(vec![z.re, z.im])
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn exit_code_follows_failures() {
        let mut r = Report::default();
        r.push("a", Verdict::Pass, json!({}));
        r.push("b", Verdict::Skip, Value::Null);
        assert_eq!(r.exit_code(), 0);
        r.pass_if("c", false, json!({"value": 1.0}));
        assert_eq!(r.exit_code(), 1);
        let text = r.render("verify");
        let last: Value = serde_json::from_str(text.lines().last().unwrap()).unwrap();
        assert_eq!(last["fail"], 1);
        assert_eq!(last["exit_code"], 1);
        assert_eq!(text.lines().count(), 4);
    }
}
