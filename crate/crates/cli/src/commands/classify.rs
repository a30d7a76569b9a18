use std::path::PathBuf;
use std::time::Instant;

use clap::Args;
use serde_json::{json, Value};
use subsmooth_core::semismooth::{classify_fn, RecoveryConfig};

use super::{resolve_fn, same_len};
use crate::error::CliError;
use crate::report::{ext, nums, Record};
use crate::table::load_oracle;

#[derive(Args, Debug, Clone)]
pub struct ClassifyArgs {
    /// Catalogue name or expression in x1..xn
    #[arg(long = "fn", allow_hyphen_values = true)]
    pub function: String,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub x: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub u: Vec<f64>,
    /// Let strict upper semismoothness decide the exit code
    #[arg(long)]
    pub strict: bool,
    /// Subgradient samples (CSV) replacing the catalogue oracle
    #[arg(long)]
    pub oracle: Option<PathBuf>,
}

impl ClassifyArgs {
    pub fn echo(&self) -> Value {
        json!({
            "fn": self.function,
            "x": nums(&self.x),
            "u": nums(&self.u),
            "strict": self.strict,
            "oracle": self.oracle.as_ref().map(|p| p.display().to_string()),
        })
    }
}

pub fn run(a: &ClassifyArgs, cfg: &RecoveryConfig) -> Result<Vec<Record>, CliError> {
    let start = Instant::now();
    same_len(&a.x, &a.u)?;
    let target = resolve_fn(&a.function, a.x.len())?;
    let loaded = a.oracle.as_deref().map(load_oracle).transpose()?;
    if let Some(o) = &loaded {
        if o.dim() != a.x.len() {
            return Err(CliError::Usage(format!("oracle has {} coordinates, the point {}", o.dim(), a.x.len())));
        }
    }
    let oracle = loaded.as_ref().or(target.entry.as_ref().map(|e| e.exact_subdiff()));
    let c = classify_fn(target.function.as_ref(), oracle, &a.x, &a.u, cfg)?;

    let headline = if a.strict { "strictly_upper_semismooth" } else { "upper_semismooth" };
    let mut r = Record::new(format!("{}/classify", target.label), "classify", json!({
        "function": target.describe(),
        "x": nums(&a.x),
        "u": nums(&a.u),
        "oracle": match (&a.oracle, oracle) {
            (Some(p), _) => json!({"csv": p.display().to_string()}),
            (None, Some(o)) => json!(o.provenance().as_str()),
            (None, None) => Value::Null,
        },
    }));
    r.outputs = json!({
        "recovered_directional": ext(c.recovered_value_directional),
        "recovered_full": ext(c.recovered_value_full),
        "direct_radial": ext(c.direct_radial),
    });
    r.decisive = Some(vec![headline.to_string(), "consistency".to_string()]);
    let mut r = r
        .verdict("radially_accessible", c.radially_accessible)
        .verdict("upper_semismooth", c.upper_semismooth)
        .verdict("strictly_upper_semismooth", c.strictly_upper_semismooth)
        .verdict("mifflin_semismooth", c.mifflin_semismooth)
        .verdict("dir_approx_convex", c.dir_approx_convex)
        .verdict("dir_lipschitz", c.dir_lipschitz)
        .verdict("consistency", c.consistency);
    for (name, v) in &r.verdicts {
        eprintln!("{name:>26}: {}", v.status.as_str());
    }
    r.seconds = start.elapsed().as_secs_f64();
    Ok(vec![r])
}
