use std::time::Instant;

use clap::Args;
use serde_json::{json, Map, Value};
use subsmooth_core::semismooth::RecoveryConfig;
use subsmooth_core::subderiv::{estimate, lattice_check, Kind, LATTICE_EDGES};
use subsmooth_core::Verdict;

use super::{resolve_fn, same_len};
use crate::error::CliError;
use crate::report::{ext, nums, tail, Record};

#[derive(Args, Debug, Clone)]
pub struct SubderivArgs {
    /// Catalogue name or expression in x1..xn
    #[arg(long = "fn", allow_hyphen_values = true)]
    pub function: String,
    /// Base point, comma separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub x: Vec<f64>,
    /// Direction, comma separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub u: Vec<f64>,
    /// One of r, r+, 0, d, up
    #[arg(long, default_value = "r")]
    pub kind: String,
}

impl SubderivArgs {
    pub fn echo(&self) -> Value {
        json!({"fn": self.function, "x": nums(&self.x), "u": nums(&self.u), "kind": self.kind})
    }
}

pub fn run(a: &SubderivArgs, cfg: &RecoveryConfig) -> Result<Vec<Record>, CliError> {
    let start = Instant::now();
    let kind: Kind = a.kind.parse()?;
    same_len(&a.x, &a.u)?;
    let target = resolve_fn(&a.function, a.x.len())?;
    let f = target.function.as_ref();
    let est = estimate(kind, f, &a.x, &a.u, &cfg.sampling)?;
    let value = kind.value(&est);
    let lattice = lattice_check(f, &a.x, &a.u, &cfg.sampling)?;

    let values: Map<String, Value> = Kind::ALL
        .iter()
        .map(|k| (k.symbol().to_string(), lattice.value(*k).map_or(Value::Null, ext)))
        .collect();
    let below: Vec<&str> = LATTICE_EDGES.iter().filter(|e| e.1 == kind).map(|e| e.0.symbol()).collect();
    let above: Vec<&str> = LATTICE_EDGES.iter().filter(|e| e.0 == kind).map(|e| e.1.symbol()).collect();

    let stable = if est.trustworthy() {
        Verdict::holds(f64::NAN)
    } else {
        Verdict::inconclusive("difference quotients did not settle on the tail window")
    };
    eprintln!(
        "f^{}({:?}; {:?}) = {value} [{}; lattice {}]",
        kind.symbol(),
        a.x,
        a.u,
        if est.trustworthy() { "stable" } else { "unstable" },
        lattice.verdict.status.as_str()
    );
    let mut r = Record::new(format!("{}/{}", target.label, kind.symbol()), "subderiv", json!({
        "function": target.describe(),
        "x": nums(&a.x),
        "u": nums(&a.u),
        "kind": kind.symbol(),
    }));
    r.outputs = json!({
        "value": ext(value),
        "estimate": tail(&est, cfg.sampling.base.window),
        "lattice": {"values": values, "below": below, "above": above},
    });
    let mut r = r.verdict("estimate", stable).verdict("lattice", lattice.verdict);
    r.seconds = start.elapsed().as_secs_f64();
    Ok(vec![r])
}
