//! JSON run reports and CSV exports. Floats carry 17 significant digits;
//! infinities are written as the strings `"+inf"` and `"-inf"`.

use std::io::Write;
use std::path::Path;
use std::process::ExitCode;

use serde_json::{json, Map, Number, Value};
use subsmooth_core::{ExtReal, Status, TailEstimate, Verdict};

use crate::error::{code, CliError};

/// `v` with 17 significant digits.
pub fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn num(v: f64) -> Value {
    if v.is_nan() {
        Value::Null
    } else if v.is_infinite() {
        Value::String(if v > 0.0 { "+inf" } else { "-inf" }.into())
    } else {
        // arbitrary_precision keeps the literal as written
        Value::Number(fmt17(v).parse::<Number>().expect("formatted float is a JSON number"))
    }
}

pub fn ext(v: ExtReal) -> Value {
    num(v.to_f64())
}

pub fn nums(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|x| num(*x)).collect())
}

pub fn verdict(v: &Verdict) -> Value {
    json!({
        "status": v.status.as_str(),
        "margin": num(v.margin),
        "notes": v.notes,
    })
}

pub fn tail(e: &TailEstimate, window: usize) -> Value {
    let last = e.samples.len().saturating_sub(window);
    json!({
        "liminf": ext(e.liminf_est),
        "limsup": ext(e.limsup_est),
        "divergent": format!("{:?}", e.divergent),
        "stable": e.stable,
        "samples": e.samples.len(),
        "tail": e.samples[last..].iter().map(|(t, q)| json!([num(*t), ext(*q)])).collect::<Vec<_>>(),
    })
}

/// One result item. `verdicts` drive the exit code unless `decisive` names
/// a subset.
pub struct Record {
    pub key: String,
    pub operation: &'static str,
    pub inputs: Value,
    pub outputs: Value,
    pub verdicts: Vec<(String, Verdict)>,
    pub decisive: Option<Vec<String>>,
    pub seconds: f64,
}

impl Record {
    pub fn new(key: impl Into<String>, operation: &'static str, inputs: Value) -> Self {
        Record {
            key: key.into(),
            operation,
            inputs,
            outputs: Value::Object(Map::new()),
            verdicts: Vec::new(),
            decisive: None,
            seconds: 0.0,
        }
    }

    pub fn verdict(mut self, name: &str, v: Verdict) -> Self {
        self.verdicts.push((name.to_string(), v));
        self
    }

    fn statuses(&self) -> impl Iterator<Item = Status> + '_ {
        self.verdicts
            .iter()
            .filter(|(n, _)| self.decisive.as_ref().is_none_or(|d| d.contains(n)))
            .map(|(_, v)| v.status)
    }
}

pub struct RunReport {
    pub command: &'static str,
    pub config_echo: Value,
    pub records: Vec<Record>,
}

impl RunReport {
    /// Fails over inconclusive over holds.
    pub fn status(&self) -> Status {
        let all: Vec<Status> = self.records.iter().flat_map(Record::statuses).collect();
        if all.contains(&Status::Fails) {
            Status::Fails
        } else if all.contains(&Status::Inconclusive) {
            Status::Inconclusive
        } else {
            Status::Holds
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self.status() {
            Status::Holds => code::HOLDS,
            Status::Fails => code::FAILS,
            Status::Inconclusive => code::INCONCLUSIVE,
        })
    }

    pub fn to_json(&self) -> Value {
        let mut records: Vec<&Record> = self.records.iter().collect();
        records.sort_by(|a, b| a.key.cmp(&b.key));
        let results: Vec<Value> = records
            .iter()
            .map(|r| {
                let verdicts: Map<String, Value> = r.verdicts.iter().map(|(n, v)| (n.clone(), verdict(v))).collect();
                json!({
                    "key": r.key,
                    "operation": r.operation,
                    "inputs": r.inputs,
                    "outputs": r.outputs,
                    "verdicts": verdicts,
                })
            })
            .collect();
        let timing: Vec<Value> = records.iter().map(|r| json!({"key": r.key, "seconds": num(r.seconds)})).collect();
        json!({
            "command": self.command,
            "status": self.status().as_str(),
            "config_echo": self.config_echo,
            "results": results,
            "timing": timing,
        })
    }

    /// Pretty JSON to `path`, or to stdout when `None`.
    pub fn write(&self, path: Option<&Path>) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(&self.to_json()).expect("report serializes");
        match path {
            Some(p) => std::fs::write(p, text + "\n").map_err(|e| CliError::Output(format!("{}: {e}", p.display()))),
            None => {
                let mut out = std::io::stdout().lock();
                writeln!(out, "{text}").map_err(|e| CliError::Output(format!("stdout: {e}")))
            }
        }
    }
}

/// Writes rows under a header; floats with 17 significant digits.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<(), CliError> {
    let err = |e: csv::Error| CliError::Output(format!("{}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(err)?;
    w.write_record(header).map_err(err)?;
    for r in rows {
        w.write_record(r).map_err(err)?;
    }
    w.flush().map_err(|e| CliError::Output(format!("{}: {e}", path.display())))
}

/// CSV cell for an extended real.
pub fn cell(v: ExtReal) -> String {
    match v {
        ExtReal::Finite(x) => fmt17(x),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_with_17_digits() {
        for v in [0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, f64::MIN_POSITIVE] {
            let j = serde_json::to_string(&num(v)).unwrap();
            assert_eq!(j.parse::<f64>().unwrap(), v);
            let mantissa = j.split('e').next().unwrap().replace(['-', '.'], "");
            assert_eq!(mantissa.len(), 17, "{j}");
        }
        assert_eq!(num(f64::INFINITY), json!("+inf"));
        assert_eq!(num(f64::NAN), Value::Null);
    }

    #[test]
    fn status_prefers_fails_then_inconclusive() {
        let mut r = RunReport {
            command: "t",
            config_echo: Value::Null,
            records: vec![Record::new("b", "op", Value::Null).verdict("v", Verdict::holds(1.0))],
        };
        assert_eq!(r.status(), Status::Holds);
        r.records.push(Record::new("a", "op", Value::Null).verdict("v", Verdict::inconclusive("x")));
        assert_eq!(r.status(), Status::Inconclusive);
        r.records[1].decisive = Some(vec![]);
        assert_eq!(r.status(), Status::Holds);
        r.records.push(Record::new("c", "op", Value::Null).verdict("v", Verdict::fails(-1.0)));
        assert_eq!(r.status(), Status::Fails);
        let keys: Vec<String> = r.to_json()["results"]
            .as_array()
            .unwrap()
            .iter()
            .map(|x| x["key"].as_str().unwrap().to_string())
            .collect();
        assert_eq!(keys, ["a", "b", "c"]);
    }
}
