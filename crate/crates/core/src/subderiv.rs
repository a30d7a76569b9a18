//! Numeric estimators for the five subderivatives and the inequality
//! lattice linking them.
//!
//! All estimators share one step grid per `(x, u)`: the radial trajectory
//! fixes the resolved prefix of the grid, and every estimator reads its
//! tail window from the same steps. That makes the orderings
//! `f^d <= f^r <= f^r_+ <= f^0` and `f^up <= f^0` hold sample by sample.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{bail, Error, Result};
use crate::ext::ExtReal;
use crate::function::{lipschitz_of, ScalarFn};
use crate::grid::{
    finite_at, limit_bounds, quotient, ray_samples, resolved, tail_bounds, Divergence, GridConfig, TailEstimate,
};
use crate::vector::{axpy, ball_points, same_dim};
use crate::verdict::{Status, Verdict};

/// Number of direction-ball radii in the Clarke-Rockafellar scan.
pub const DELTA_LEVELS: usize = 7;

/// Inner scans at a point `y` at distance `s` from the base point start at
/// step `s * INNER_STEP_RATIO`, so that they stay local to `y`.
pub const INNER_STEP_RATIO: f64 = 1e-3;

/// Sampling of nearby base points and perturbed directions.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectionalSamplingConfig {
    pub base: GridConfig,
    /// Sample points per shell and per direction ball.
    pub n_dirs: usize,
    /// Largest direction-perturbation radius.
    pub delta0: f64,
    pub delta_rho: f64,
    /// Admissible `|f(y) - f(x)|` for functions without Lipschitz metadata.
    pub value_filter: f64,
    /// Radius of the outermost base-point shell.
    pub shell_radius: f64,
    pub shell_rho: f64,
    pub shells: usize,
}

impl Default for DirectionalSamplingConfig {
    fn default() -> Self {
        DirectionalSamplingConfig {
            base: GridConfig::default(),
            n_dirs: 16,
            delta0: 1e-7,
            delta_rho: 0.5,
            value_filter: 0.05,
            shell_radius: 1e-3,
            shell_rho: 0.5,
            shells: 8,
        }
    }
}

impl DirectionalSamplingConfig {
    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if self.n_dirs == 0 {
            bail!(Config, "n_dirs must be at least 1");
        }
        if !(self.delta0 > 0.0) {
            bail!(Config, "delta0 must be positive");
        }
        if !(self.delta_rho > 0.0 && self.delta_rho < 1.0) {
            bail!(Config, "delta_rho must lie in (0, 1)");
        }
        if !(self.value_filter >= 0.0) {
            bail!(Config, "value_filter must be non-negative");
        }
        if !(self.shell_radius > 0.0) || !(self.shell_rho > 0.0 && self.shell_rho < 1.0) || self.shells == 0 {
            bail!(Config, "shell grid needs radius > 0, ratio in (0, 1) and at least one shell");
        }
        Ok(())
    }

    pub fn shell_radii(&self) -> Vec<f64> {
        let mut s = self.shell_radius;
        (0..self.shells)
            .map(|_| {
                let r = s;
                s *= self.shell_rho;
                r
            })
            .collect()
    }

    pub fn delta_levels(&self) -> Vec<f64> {
        (0..DELTA_LEVELS)
            .map(|k| self.delta0 * libm::pow(self.delta_rho, k as f64))
            .collect()
    }
}

/// The five subderivatives.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    /// `f^r`, lower radial.
    Radial,
    /// `f^r_+`, upper radial.
    RadialUpper,
    /// `f^0`, Clarke.
    Clarke,
    /// `f^d`, lower Dini-Hadamard.
    Directional,
    /// `f^up`, Clarke-Rockafellar.
    ClarkeRockafellar,
}

impl Kind {
    pub const ALL: [Kind; 5] = [
        Kind::Directional,
        Kind::Radial,
        Kind::RadialUpper,
        Kind::ClarkeRockafellar,
        Kind::Clarke,
    ];

    /// Lower kinds are liminfs, upper kinds limsups.
    pub fn is_lower(self) -> bool {
        matches!(self, Kind::Radial | Kind::Directional)
    }

    /// The field of a [`TailEstimate`] carrying this kind's value.
    pub fn value(self, e: &TailEstimate) -> ExtReal {
        if self.is_lower() {
            e.liminf_est
        } else {
            e.limsup_est
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Kind::Radial => "r",
            Kind::RadialUpper => "r+",
            Kind::Clarke => "0",
            Kind::Directional => "d",
            Kind::ClarkeRockafellar => "up",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl FromStr for Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Kind> {
        Ok(match s {
            "r" => Kind::Radial,
            "r+" => Kind::RadialUpper,
            "0" => Kind::Clarke,
            "d" => Kind::Directional,
            "up" => Kind::ClarkeRockafellar,
            other => bail!(Contract, "unknown subderivative kind `{other}` (expected r, r+, 0, d, up)"),
        })
    }
}

fn check_inputs(f: &dyn ScalarFn, x: &[f64], u: &[f64]) -> Result<f64> {
    same_dim(x, u)?;
    finite_at(f, x)
}

/// Estimates `f^r(x; u)` (read `liminf_est`).
///
/// A finite monotone tail is read at its last step for both bounds.
pub fn radial_lower(f: &dyn ScalarFn, x: &[f64], u: &[f64], cfg: &GridConfig) -> Result<TailEstimate> {
    cfg.validate()?;
    let fx = check_inputs(f, x, u)?;
    limit_bounds(&ray_samples(f, x, fx, u, cfg), cfg)
}

/// Estimates `f^r_+(x; u)` (read `limsup_est`).
pub fn radial_upper(f: &dyn ScalarFn, x: &[f64], u: &[f64], cfg: &GridConfig) -> Result<TailEstimate> {
    radial_lower(f, x, u, cfg)
}

/// `f^r(y; u)` at a point `y` at distance `scale` from a base point, on a
/// grid rescaled so the steps stay well below `scale`.
pub(crate) fn radial_near(
    f: &dyn ScalarFn,
    y: &[f64],
    u: &[f64],
    cfg: &GridConfig,
    scale: f64,
) -> Result<TailEstimate> {
    let fy = finite_at(f, y)?;
    let t0 = if scale > 0.0 {
        cfg.t0.min(scale * INNER_STEP_RATIO)
    } else {
        cfg.t0
    };
    let inner = cfg.rescaled(t0);
    limit_bounds(&ray_samples(f, y, fy, u, &inner), &inner)
}

/// The tail steps shared by all estimators at `(x, u)`.
fn tail_steps(f: &dyn ScalarFn, x: &[f64], fx: f64, u: &[f64], cfg: &GridConfig) -> Result<(Vec<f64>, TailEstimate)> {
    let samples = ray_samples(f, x, fx, u, cfg);
    let radial = tail_bounds(&samples, cfg)?;
    let steps = samples[samples.len() - cfg.window..].iter().map(|s| s.0).collect();
    Ok((steps, radial))
}

struct BasePoint {
    y: Vec<f64>,
    fy: f64,
}

/// `x` itself followed by admissible points of the shells around `x`.
fn base_points(f: &dyn ScalarFn, x: &[f64], fx: f64, cfg: &DirectionalSamplingConfig) -> Vec<BasePoint> {
    let lip = lipschitz_of(f);
    let offsets = ball_points(x.len(), cfg.n_dirs + 1, cfg.base.seed);
    let mut out = alloc::vec![BasePoint { y: x.to_vec(), fy: fx }];
    for s in cfg.shell_radii() {
        let admissible = match lip {
            Some(l) => l * s * (1.0 + 1e-9) + 4.0 * f64::EPSILON * libm::fabs(fx),
            None => cfg.value_filter,
        };
        for w in offsets.iter().skip(1) {
            let y = axpy(x, s, w);
            if let ExtReal::Finite(fy) = f.eval(&y) {
                if libm::fabs(fy - fx) <= admissible {
                    out.push(BasePoint { y, fy });
                }
            }
        }
    }
    out
}

fn direction_ball(u: &[f64], delta: f64, cfg: &DirectionalSamplingConfig) -> Vec<Vec<f64>> {
    ball_points(u.len(), cfg.n_dirs + 1, cfg.base.seed.wrapping_add(1))
        .iter()
        .map(|w| axpy(u, delta, w))
        .collect()
}

fn window_estimate(steps: &[f64], values: Vec<ExtReal>, cfg: &GridConfig) -> Result<TailEstimate> {
    let samples: Vec<(f64, ExtReal)> = steps.iter().copied().zip(values).collect();
    let w = GridConfig {
        window: samples.len(),
        ..cfg.clone()
    };
    tail_bounds(&samples, &w)
}

fn forced(mut e: TailEstimate, d: Divergence) -> TailEstimate {
    let v = if d == Divergence::ToPosInf {
        ExtReal::PosInf
    } else {
        ExtReal::NegInf
    };
    e.divergent = d;
    e.liminf_est = v;
    e.limsup_est = v;
    e.stable = true;
    e
}

/// Estimates `f^0(x; u)` (read `limsup_est`).
pub fn clarke(f: &dyn ScalarFn, x: &[f64], u: &[f64], cfg: &DirectionalSamplingConfig) -> Result<TailEstimate> {
    cfg.validate()?;
    let fx = check_inputs(f, x, u)?;
    let (steps, radial) = tail_steps(f, x, fx, u, &cfg.base)?;
    let bases = base_points(f, x, fx, cfg);
    let mut values = Vec::with_capacity(steps.len());
    for &t in &steps {
        let mut best: Option<ExtReal> = None;
        for (i, b) in bases.iter().enumerate() {
            let q = quotient(f, &b.y, b.fy, u, t);
            if i > 0 && !resolved(&q, cfg.base.tol) {
                continue;
            }
            best = Some(best.map_or(q.value, |m| m.max(q.value)));
        }
        match best {
            Some(v) => values.push(v),
            None => bail!(Estimation, "no admissible base points near x"),
        }
    }
    let e = window_estimate(&steps, values, &cfg.base)?;
    // dominates the radial samples pointwise
    if radial.divergent == Divergence::ToPosInf {
        return Ok(forced(e, Divergence::ToPosInf));
    }
    Ok(e)
}

/// Estimates `f^d(x; u)` (read `liminf_est`).
pub fn directional(f: &dyn ScalarFn, x: &[f64], u: &[f64], cfg: &DirectionalSamplingConfig) -> Result<TailEstimate> {
    cfg.validate()?;
    let fx = check_inputs(f, x, u)?;
    let (steps, radial) = tail_steps(f, x, fx, u, &cfg.base)?;
    let deltas = cfg.delta_levels();
    let mut values = Vec::with_capacity(steps.len());
    for (i, &t) in steps.iter().enumerate() {
        let delta = deltas[i.min(DELTA_LEVELS - 1)];
        let mut best = quotient(f, x, fx, u, t).value;
        for v in direction_ball(u, delta, cfg).iter().skip(1) {
            let q = quotient(f, x, fx, v, t);
            if resolved(&q, cfg.base.tol) {
                best = best.min(q.value);
            }
        }
        values.push(best);
    }
    let e = window_estimate(&steps, values, &cfg.base)?;
    if radial.divergent == Divergence::ToNegInf {
        return Ok(forced(e, Divergence::ToNegInf));
    }
    Ok(e)
}

/// Per-radius limsups of the Clarke-Rockafellar construction.
#[derive(Clone, Debug, PartialEq)]
pub struct UpperStrictScan {
    /// `(delta, limsup over (y, t) of inf over B_delta(u))`, by decreasing delta.
    pub levels: Vec<(f64, TailEstimate)>,
    /// The supremum over the levels.
    pub estimate: TailEstimate,
}

/// Estimates `f^up(x; u)` with every direction-ball radius reported.
pub fn clarke_rockafellar_levels(
    f: &dyn ScalarFn,
    x: &[f64],
    u: &[f64],
    cfg: &DirectionalSamplingConfig,
) -> Result<UpperStrictScan> {
    cfg.validate()?;
    let fx = check_inputs(f, x, u)?;
    let (steps, _) = tail_steps(f, x, fx, u, &cfg.base)?;
    let bases = base_points(f, x, fx, cfg);
    let mut levels = Vec::with_capacity(DELTA_LEVELS);
    for delta in cfg.delta_levels() {
        let ball = direction_ball(u, delta, cfg);
        let mut values = Vec::with_capacity(steps.len());
        for &t in &steps {
            let mut best: Option<ExtReal> = None;
            for (i, b) in bases.iter().enumerate() {
                let mut inner: Option<ExtReal> = None;
                for (j, v) in ball.iter().enumerate() {
                    let q = quotient(f, &b.y, b.fy, v, t);
                    let exact_ray = i == 0 && j == 0;
                    if !exact_ray && !resolved(&q, cfg.base.tol) {
                        continue;
                    }
                    inner = Some(inner.map_or(q.value, |m| m.min(q.value)));
                }
                if let Some(v) = inner {
                    best = Some(best.map_or(v, |m| m.max(v)));
                }
            }
            match best {
                Some(v) => values.push(v),
                None => bail!(Estimation, "no admissible base points near x"),
            }
        }
        levels.push((delta, window_estimate(&steps, values, &cfg.base)?));
    }
    let estimate = levels
        .iter()
        .map(|(_, e)| e)
        .max_by(|a, b| a.limsup_est.cmp(&b.limsup_est))
        .cloned()
        .ok_or_else(|| Error::Estimation(String::from("empty delta sequence")))?;
    Ok(UpperStrictScan { levels, estimate })
}

/// Estimates `f^up(x; u)` (read `limsup_est`).
pub fn clarke_rockafellar(
    f: &dyn ScalarFn,
    x: &[f64],
    u: &[f64],
    cfg: &DirectionalSamplingConfig,
) -> Result<TailEstimate> {
    Ok(clarke_rockafellar_levels(f, x, u, cfg)?.estimate)
}

/// Estimates one kind.
pub fn estimate(
    kind: Kind,
    f: &dyn ScalarFn,
    x: &[f64],
    u: &[f64],
    cfg: &DirectionalSamplingConfig,
) -> Result<TailEstimate> {
    match kind {
        Kind::Radial => radial_lower(f, x, u, &cfg.base),
        Kind::RadialUpper => radial_upper(f, x, u, &cfg.base),
        Kind::Clarke => clarke(f, x, u, cfg),
        Kind::Directional => directional(f, x, u, cfg),
        Kind::ClarkeRockafellar => clarke_rockafellar(f, x, u, cfg),
    }
}

/// All five estimates at one `(x, u)` and the lattice verdict.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeReport {
    /// `(kind, estimate)` in the order of [`Kind::ALL`].
    pub estimates: Vec<(Kind, TailEstimate)>,
    pub verdict: Verdict,
}

impl LatticeReport {
    pub fn value(&self, kind: Kind) -> Option<ExtReal> {
        self.estimates
            .iter()
            .find(|(k, _)| *k == kind)
            .map(|(k, e)| k.value(e))
    }
}

/// Pairs `(a, b)` with `a <= b` always.
pub const LATTICE_EDGES: [(Kind, Kind); 5] = [
    (Kind::Directional, Kind::Radial),
    (Kind::Radial, Kind::RadialUpper),
    (Kind::RadialUpper, Kind::Clarke),
    (Kind::Directional, Kind::ClarkeRockafellar),
    (Kind::ClarkeRockafellar, Kind::Clarke),
];

/// Checks `f^d <= f^r <= f^r_+ <= f^0` and `f^d <= f^up <= f^0` within
/// `3 * tol`.
///
/// A violation counts as a failure only when both estimates involved are
/// stable or divergent; otherwise the verdict is inconclusive.
pub fn lattice_check(
    f: &dyn ScalarFn,
    x: &[f64],
    u: &[f64],
    cfg: &DirectionalSamplingConfig,
) -> Result<LatticeReport> {
    check_inputs(f, x, u)?;
    let mut estimates = Vec::with_capacity(5);
    for kind in Kind::ALL {
        match estimate(kind, f, x, u, cfg) {
            Ok(e) => estimates.push((kind, e)),
            Err(Error::Estimation(m)) => {
                return Ok(LatticeReport {
                    estimates,
                    verdict: Verdict::inconclusive(format!("{kind}: {m}")),
                })
            }
            Err(e) => return Err(e),
        }
    }
    let slack = 3.0 * cfg.base.tol;
    let get = |k: Kind| &estimates.iter().find(|(kk, _)| *kk == k).unwrap().1;
    let mut verdict = Verdict::holds(f64::INFINITY);
    for (a, b) in LATTICE_EDGES {
        let (ea, eb) = (get(a), get(b));
        let (va, vb) = (a.value(ea), b.value(eb));
        let margin = match (va, vb) {
            (ExtReal::Finite(p), ExtReal::Finite(q)) => q - p + slack,
            _ if va.le_within(vb, slack) => f64::INFINITY,
            _ => f64::NEG_INFINITY,
        };
        verdict.margin = verdict.margin.min(margin);
        if !va.le_within(vb, slack) {
            let status = if ea.trustworthy() && eb.trustworthy() {
                Status::Fails
            } else {
                Status::Inconclusive
            };
            verdict.status = verdict.status.and(status);
            verdict
                .notes
                .push(format!("f^{a} = {va} exceeds f^{b} = {vb} beyond {slack:e}"));
        }
    }
    Ok(LatticeReport { estimates, verdict })
}
