use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, ValueEnum};
use serde_json::{json, Value};
use subsmooth_core::determination::{determination_experiment, recover_increment, SegmentTask, TheoremMode};
use subsmooth_core::semismooth::RecoveryConfig;
use subsmooth_core::subdiff::SubdiffOracle;
use subsmooth_core::{ExtReal, ScalarFn, SharedFn};

use super::{resolve_fn, Target};
use crate::error::CliError;
use crate::report::{cell, ext, fmt17, nums, verdict, write_csv, Record};
use crate::table::load_oracle;

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeArg {
    Continuous,
    Semicontinuous,
}

#[derive(Args, Debug, Clone)]
pub struct DetermineArgs {
    /// Catalogue name or expression in x1
    #[arg(long, allow_hyphen_values = true)]
    pub f: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub g: Option<String>,
    /// Subgradient samples (CSV) for f
    #[arg(long)]
    pub f_oracle: Option<PathBuf>,
    /// Subgradient samples (CSV) for g
    #[arg(long)]
    pub g_oracle: Option<PathBuf>,
    /// Grid `a:b:step`; the segment runs from a to b
    #[arg(long, allow_hyphen_values = true)]
    pub grid: String,
    #[arg(long, value_enum, default_value = "continuous")]
    pub mode: ModeArg,
    /// Points of [a, b] allowed to break the hypotheses, comma separated
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub exceptional: Vec<f64>,
    /// Where to write the recovered r(t)
    #[arg(long, default_value = "r_of_t.csv")]
    pub csv: PathBuf,
}

impl DetermineArgs {
    pub fn echo(&self) -> Value {
        let path = |p: &Option<PathBuf>| p.as_ref().map(|p| p.display().to_string());
        json!({
            "f": self.f,
            "g": self.g,
            "f_oracle": path(&self.f_oracle),
            "g_oracle": path(&self.g_oracle),
            "grid": self.grid,
            "mode": format!("{:?}", self.mode).to_lowercase(),
            "exceptional": nums(&self.exceptional),
            "csv": self.csv.display().to_string(),
        })
    }
}

/// `a:b:step` as the points `a, a + step, ..., b`.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Usage(format!("--grid expects a:b:step with a < b and step > 0, got `{s}`"));
    let parts: Vec<f64> = s
        .split(':')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad())?;
    let [a, b, step] = parts[..] else { return Err(bad()) };
    if !(a.is_finite() && b.is_finite() && a < b && step > 0.0) {
        return Err(bad());
    }
    let n = ((b - a) / step - 1e-9).ceil();
    if n > 1e6 {
        return Err(CliError::Usage(format!("--grid `{s}` has more than a million points")));
    }
    let n = n as usize;
    // multiples of step are formed exactly when a is one
    let k0 = (a / step).round();
    let on_lattice = (a - k0 * step).abs() <= 1e-12 * step.max(a.abs());
    Ok((0..=n)
        .map(|i| match i {
            0 => a,
            _ if i == n => b,
            _ if on_lattice => (k0 + i as f64) * step,
            _ => a + step * i as f64,
        })
        .collect())
}

/// Piecewise-linear `g` rebuilt from an oracle by recovered increments
/// between consecutive nodes, anchored at 0 on the first node; `+inf`
/// outside the nodes.
struct Rebuilt {
    nodes: Vec<f64>,
    values: Vec<f64>,
}

impl ScalarFn for Rebuilt {
    fn dim(&self) -> usize {
        1
    }
    fn eval(&self, x: &[f64]) -> ExtReal {
        let t = x[0];
        let (first, last) = (self.nodes[0], *self.nodes.last().unwrap());
        if !(first..=last).contains(&t) {
            return ExtReal::PosInf;
        }
        let i = self.nodes.partition_point(|&n| n <= t).clamp(1, self.nodes.len() - 1);
        let (t0, t1) = (self.nodes[i - 1], self.nodes[i]);
        let w = (t - t0) / (t1 - t0);
        ExtReal::Finite(self.values[i - 1] + w * (self.values[i] - self.values[i - 1]))
    }
}

fn rebuild(oracle: &SubdiffOracle, nodes: &[f64], cfg: &RecoveryConfig) -> Result<SharedFn, CliError> {
    let mut values = vec![0.0];
    for w in nodes.windows(2) {
        let r = recover_increment(oracle, &[w[0]], &[w[1]], cfg)?;
        values.push(values.last().unwrap() + r.increment);
    }
    Ok(Arc::new(Rebuilt {
        nodes: nodes.to_vec(),
        values,
    }))
}

struct Side {
    describe: Value,
    function: SharedFn,
    oracle: SubdiffOracle,
}

fn side(
    name: &str,
    spec: &Option<String>,
    csv: &Option<PathBuf>,
    nodes: &[f64],
    cfg: &RecoveryConfig,
) -> Result<Side, CliError> {
    let target: Option<Target> = spec.as_deref().map(|s| resolve_fn(s, 1)).transpose()?;
    let loaded = csv.as_deref().map(load_oracle).transpose()?;
    if loaded.as_ref().is_some_and(|o| o.dim() != 1) {
        return Err(CliError::Usage(format!("the {name} oracle must be one-dimensional")));
    }
    Ok(match (target, loaded) {
        (Some(t), Some(o)) => Side {
            describe: json!({"function": t.describe(), "oracle": "user_supplied"}),
            function: t.function,
            oracle: o,
        },
        (Some(t), None) => {
            let oracle = match &t.entry {
                Some(e) => e.exact_subdiff().clone(),
                None => SubdiffOracle::one_sided_hull(t.function.clone(), cfg.sampling.base.clone())?,
            };
            Side {
                describe: json!({"function": t.describe(), "oracle": oracle.provenance().as_str()}),
                function: t.function,
                oracle,
            }
        }
        (None, Some(o)) => Side {
            describe: json!({"function": "rebuilt from oracle, 0 at the first grid point", "oracle": "user_supplied"}),
            function: rebuild(&o, nodes, cfg)?,
            oracle: o,
        },
        (None, None) => return Err(CliError::Usage(format!("give --{name} or --{name}-oracle"))),
    })
}

pub fn run(a: &DetermineArgs, cfg: &RecoveryConfig) -> Result<Vec<Record>, CliError> {
    let start = Instant::now();
    let nodes = parse_grid(&a.grid)?;
    let (lo, hi) = (nodes[0], *nodes.last().unwrap());
    if let Some(c) = a.exceptional.iter().find(|c| !(lo..=hi).contains(*c)) {
        return Err(CliError::Usage(format!("exceptional point {c} lies outside [{lo}, {hi}]")));
    }
    let f = side("f", &a.f, &a.f_oracle, &nodes, cfg)?;
    let g = side("g", &a.g, &a.g_oracle, &nodes, cfg)?;
    let mode = match a.mode {
        ModeArg::Continuous => TheoremMode::Continuous,
        ModeArg::Semicontinuous => TheoremMode::Semicontinuous,
    };
    let task = SegmentTask {
        xbar: vec![lo],
        ybar: vec![hi],
        f: f.function,
        g: g.function,
        f_oracle: f.oracle,
        g_oracle: g.oracle,
        exceptional: a.exceptional.iter().map(|c| (c - lo) / (hi - lo)).collect(),
        mode,
    };
    let grid: Vec<Vec<f64>> = nodes.iter().map(|x| vec![*x]).collect();
    let rep = determination_experiment(&task, &grid, cfg)?;

    let mut rows = Vec::new();
    let segments: Vec<Value> = rep
        .per_segment
        .iter()
        .enumerate()
        .map(|(i, s)| {
            if let Some(rec) = &s.reconstruction {
                for (t, r) in &rec.samples {
                    let x = s.xbar[0] + t * (s.ybar[0] - s.xbar[0]);
                    rows.push(vec![i.to_string(), fmt17(*t), fmt17(x), cell(*r)]);
                }
            }
            json!({
                "xbar": nums(&s.xbar),
                "ybar": nums(&s.ybar),
                "recovered_increment": s.reconstruction.as_ref().map(|r| ext(ExtReal::Finite(r.increment))),
                "failed_nodes": s.reconstruction.as_ref().map(|r| r.failed),
                "g_increment": ext(s.g_increment),
                "f_increment": ext(s.f_increment),
                "notes": s.notes,
            })
        })
        .collect();
    write_csv(&a.csv, &["segment", "t", "x", "r"], &rows)?;

    let by_point: Vec<Value> = rep
        .inclusion_by_point
        .iter()
        .map(|(x, v)| json!({"x": nums(x), "inclusion": verdict(v)}))
        .collect();
    let hypotheses = match mode {
        TheoremMode::Continuous => rep.hypothesis_51,
        TheoremMode::Semicontinuous => rep.hypothesis_52,
    };
    eprintln!(
        "inclusion {}, hypotheses {}, f - g = {} (deviation {:e}), theorem {}",
        rep.inclusion_holds.status.as_str(),
        hypotheses.status.as_str(),
        rep.const_estimate,
        rep.const_deviation,
        rep.theorem.status.as_str()
    );
    let mut r = Record::new("determine", "determine", json!({
        "f": f.describe,
        "g": g.describe,
        "grid": nums(&nodes),
        "mode": mode.as_str(),
        "exceptional": nums(&a.exceptional),
    }));
    r.outputs = json!({
        "const_estimate": ext(ExtReal::Finite(rep.const_estimate)),
        "const_deviation": ext(ExtReal::Finite(rep.const_deviation)),
        "inclusion_by_point": by_point,
        "segments": segments,
        "r_csv": a.csv.display().to_string(),
    });
    let mut r = r
        .verdict("inclusion", rep.inclusion_holds)
        .verdict("hypotheses", hypotheses)
        .verdict("theorem", rep.theorem);
    r.seconds = start.elapsed().as_secs_f64();
    Ok(vec![r])
}
