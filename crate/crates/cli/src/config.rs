//! Resolved numerical settings: defaults, an optional `key=value` file (or a
//! previous report's `config_echo`), `SUBSMOOTH_SEED`, then flags.

use std::path::Path;

use serde_json::{Map, Value};
use subsmooth_core::semismooth::{Mode, RecoveryConfig};

use crate::error::CliError;
use crate::report::num;

pub const SEED_VAR: &str = "SUBSMOOTH_SEED";

fn parse<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("config key `{key}`: cannot read `{v}`")))
}

/// Sets one `section.field` key.
pub fn set(cfg: &mut RecoveryConfig, key: &str, v: &str) -> Result<(), CliError> {
    let s = &mut cfg.sampling;
    let g = &mut s.base;
    match key {
        "grid.t0" => g.t0 = parse(key, v)?,
        "grid.rho" => g.rho = parse(key, v)?,
        "grid.k" => g.k = parse(key, v)?,
        "grid.window" => g.window = parse(key, v)?,
        "grid.div_threshold" => g.div_threshold = parse(key, v)?,
        "grid.tol" => g.tol = parse(key, v)?,
        "grid.seed" => g.seed = parse(key, v)?,
        "sampling.n_dirs" => s.n_dirs = parse(key, v)?,
        "sampling.delta0" => s.delta0 = parse(key, v)?,
        "sampling.delta_rho" => s.delta_rho = parse(key, v)?,
        "sampling.value_filter" => s.value_filter = parse(key, v)?,
        "sampling.shell_radius" => s.shell_radius = parse(key, v)?,
        "sampling.shell_rho" => s.shell_rho = parse(key, v)?,
        "sampling.shells" => s.shells = parse(key, v)?,
        "recovery.alpha_grid" => {
            cfg.alpha_grid = v
                .split(',')
                .map(|a| parse(key, a))
                .collect::<Result<_, _>>()?
        }
        "recovery.mode" => {
            cfg.mode = match v.trim() {
                "directional" => Mode::Directional,
                "full" => Mode::Full,
                other => return Err(CliError::Usage(format!("recovery.mode must be directional or full, got `{other}`"))),
            }
        }
        "recovery.shell_radius" => cfg.shell_radius = parse(key, v)?,
        "recovery.shell_rho" => cfg.shell_rho = parse(key, v)?,
        "recovery.shells" => cfg.shells = parse(key, v)?,
        "recovery.dir_spread" => cfg.dir_spread = parse(key, v)?,
        _ => return Err(CliError::Usage(format!("unknown config key `{key}`"))),
    }
    Ok(())
}

/// Every setting under its config-file key.
pub fn echo(cfg: &RecoveryConfig) -> Map<String, Value> {
    let s = &cfg.sampling;
    let g = &s.base;
    let mut m = Map::new();
    let mut put = |k: &str, v: Value| {
        m.insert(k.to_string(), v);
    };
    put("grid.t0", num(g.t0));
    put("grid.rho", num(g.rho));
    put("grid.k", g.k.into());
    put("grid.window", g.window.into());
    put("grid.div_threshold", num(g.div_threshold));
    put("grid.tol", num(g.tol));
    put("grid.seed", g.seed.into());
    put("sampling.n_dirs", s.n_dirs.into());
    put("sampling.delta0", num(s.delta0));
    put("sampling.delta_rho", num(s.delta_rho));
    put("sampling.value_filter", num(s.value_filter));
    put("sampling.shell_radius", num(s.shell_radius));
    put("sampling.shell_rho", num(s.shell_rho));
    put("sampling.shells", s.shells.into());
    put("recovery.alpha_grid", cfg.alpha_grid.iter().map(|a| num(*a)).collect());
    put("recovery.mode", cfg.mode.as_str().into());
    put("recovery.shell_radius", num(cfg.shell_radius));
    put("recovery.shell_rho", num(cfg.shell_rho));
    put("recovery.shells", cfg.shells.into());
    put("recovery.dir_spread", num(cfg.dir_spread));
    m
}

fn text_of(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) => a.iter().map(text_of).collect::<Vec<_>>().join(","),
        other => other.to_string(),
    }
}

/// Applies a `key=value` file, or a JSON object of settings. A full report
/// is accepted too; its `config_echo.settings` are used.
pub fn apply_file(cfg: &mut RecoveryConfig, path: &Path) -> Result<(), CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    if text.trim_start().starts_with('{') {
        let v: Value = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        let settings = v
            .pointer("/config_echo/settings")
            .or_else(|| v.get("settings"))
            .unwrap_or(&v)
            .as_object()
            .ok_or_else(|| CliError::Usage(format!("{}: expected a JSON object of settings", path.display())))?;
        for (k, v) in settings {
            set(cfg, k, &text_of(v))?;
        }
        return Ok(());
    }
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("{}:{}: expected key=value", path.display(), n + 1)))?;
        set(cfg, k.trim(), v)?;
    }
    Ok(())
}

/// Flag-level overrides.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub config: Option<std::path::PathBuf>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
}

pub fn resolve(o: &Overrides) -> Result<RecoveryConfig, CliError> {
    let mut cfg = RecoveryConfig::default();
    if let Some(p) = &o.config {
        apply_file(&mut cfg, p)?;
    }
    if let Ok(v) = std::env::var(SEED_VAR) {
        cfg.sampling.base.seed = parse(SEED_VAR, &v)?;
    }
    if let Some(t) = o.tol {
        cfg.sampling.base.tol = t;
    }
    if let Some(s) = o.seed {
        cfg.sampling.base.seed = s;
    }
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn echo_round_trips_through_set() {
        let mut cfg = RecoveryConfig::default();
        cfg.sampling.base.tol = 1.0 / 3.0;
        cfg.sampling.base.seed = 42;
        cfg.mode = Mode::Full;
        cfg.alpha_grid = vec![0.0, 0.1, 7.0];
        let mut back = RecoveryConfig::default();
        for (k, v) in echo(&cfg) {
            set(&mut back, &k, &text_of(&v)).unwrap();
        }
        assert_eq!(back, cfg);
    }

    #[test]
    fn key_value_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.conf");
        std::fs::write(&p, "# grid\ngrid.tol = 1e-8\ngrid.k=40  # shorter\n\nrecovery.mode=full\n").unwrap();
        let mut cfg = RecoveryConfig::default();
        apply_file(&mut cfg, &p).unwrap();
        assert_eq!(cfg.sampling.base.tol, 1e-8);
        assert_eq!(cfg.sampling.base.k, 40);
        assert_eq!(cfg.mode, Mode::Full);
        std::fs::write(&p, "grid.nope=1\n").unwrap();
        assert!(matches!(apply_file(&mut cfg, &p), Err(CliError::Usage(_))));
        std::fs::write(&p, "grid.tol\n").unwrap();
        assert!(apply_file(&mut cfg, &p).is_err());
    }
}
