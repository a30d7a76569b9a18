pub mod classify;
pub mod determine;
pub mod subderiv;
pub mod verify;

use serde_json::{json, Value};
use subsmooth_core::catalogue::{get, CatalogueEntry};
use subsmooth_core::SharedFn;

use crate::error::CliError;
use crate::expr;

/// A function named on the command line: a catalogue entry or an
/// expression.
pub struct Target {
    pub label: String,
    pub function: SharedFn,
    pub entry: Option<CatalogueEntry>,
}

impl Target {
    pub fn describe(&self) -> Value {
        match &self.entry {
            Some(e) => json!({"catalogue": e.name, "formula": e.formula}),
            None => json!({"expression": self.label}),
        }
    }
}

/// Catalogue names win over expressions; an expression gets `dim`
/// coordinates.
pub fn resolve_fn(spec: &str, dim: usize) -> Result<Target, CliError> {
    if let Ok(e) = get(spec) {
        if e.dim() != dim {
            return Err(CliError::Usage(format!("`{}` takes {} coordinates, got {dim}", e.name, e.dim())));
        }
        return Ok(Target {
            label: e.name.clone(),
            function: e.function.clone(),
            entry: Some(e),
        });
    }
    let parsed = expr::parse(spec)?;
    if parsed.arity() > dim {
        return Err(CliError::Usage(format!(
            "`{spec}` uses x{} but the point has {dim} coordinates",
            parsed.arity()
        )));
    }
    Ok(Target {
        label: spec.to_string(),
        function: parsed.into_fn(dim),
        entry: None,
    })
}

pub fn same_len(x: &[f64], u: &[f64]) -> Result<(), CliError> {
    if x.is_empty() || x.len() != u.len() {
        return Err(CliError::Usage(format!(
            "--x and --u need the same positive number of coordinates, got {} and {}",
            x.len(),
            u.len()
        )));
    }
    Ok(())
}
