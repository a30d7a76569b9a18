use std::collections::BTreeMap;
use std::time::Instant;

use clap::Args;
use rayon::prelude::*;
use serde_json::{json, Value};
use subsmooth_core::semismooth::RecoveryConfig;
use subsmooth_core::suite::{cases, GROUPS};
use subsmooth_core::Status;

use crate::error::CliError;
use crate::report::Record;

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    /// Run a single group
    #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(GROUPS))]
    pub only: Option<String>,
}

impl VerifyArgs {
    pub fn echo(&self) -> Value {
        json!({"only": self.only})
    }
}

pub fn run(a: &VerifyArgs, cfg: &RecoveryConfig) -> Result<Vec<Record>, CliError> {
    let all = cases(a.only.as_deref())?;
    let records: Vec<Record> = all
        .par_iter()
        .map(|c| {
            let start = Instant::now();
            let v = c.run(cfg);
            let mut r = Record::new(format!("{}/{}", c.group, c.name), "fixture", json!({"group": c.group, "name": c.name}))
                .verdict("fixture", v);
            r.seconds = start.elapsed().as_secs_f64();
            r
        })
        .collect();

    let mut tally: BTreeMap<&str, [usize; 3]> = BTreeMap::new();
    for r in &records {
        let group = r.inputs["group"].as_str().unwrap_or("");
        let slot = match r.verdicts[0].1.status {
            Status::Holds => 0,
            Status::Inconclusive => 1,
            Status::Fails => 2,
        };
        tally.entry(GROUPS.iter().find(|g| **g == group).copied().unwrap_or("")).or_default()[slot] += 1;
        if slot > 0 {
            eprintln!("{}: {}", r.verdicts[0].1.status.as_str(), r.key);
        }
    }
    for (g, [h, i, f]) in &tally {
        eprintln!("{g:>17}: {h} hold, {i} inconclusive, {f} fail");
    }
    Ok(records)
}
