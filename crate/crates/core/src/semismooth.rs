//! Recovery of the radial subderivative from subdifferential data, the
//! subderivative/subdifferential duality check, and detectors for upper
//! semismoothness and the function classes that imply it.
//!
//! Limits over `x -> x̄` are sampled on shells `s_j = radius * ratio^j`.
//! Each shell holds `n_dirs` points whose distances interpolate
//! geometrically between `s_j` and `s_{j+1}`. In directional mode the
//! points are `x̄ + r (v + w)` with `|w| <= dir_spread * r`; in full mode
//! they cover the sphere and `x̄` itself is part of the limit.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::catalogue::CatalogueEntry;
use crate::error::{bail, Error, Result};
use crate::ext::ExtReal;
use crate::function::{lipschitz_of, ScalarFn};
use crate::grid::{finite_at, limit_bounds, ray_samples, tail_bounds, vanishing_toward, Divergence, GridConfig, TailEstimate};
use crate::subderiv::{clarke, radial_lower, radial_near, DirectionalSamplingConfig};
use crate::subdiff::{support, SubdiffOracle};
use crate::vector::{axpy, ball_points, is_zero, norm, same_dim, scaled, sphere_points, sub};
use crate::verdict::{Status, Verdict};

/// How `x` approaches `x̄`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// `x -> x̄` along the direction `u`.
    Directional,
    /// `x -> x̄` from all directions.
    Full,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Directional => "directional",
            Mode::Full => "full",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RecoveryConfig {
    /// Ascending, starts at 0.
    pub alpha_grid: Vec<f64>,
    pub sampling: DirectionalSamplingConfig,
    pub mode: Mode,
    pub shell_radius: f64,
    pub shell_rho: f64,
    pub shells: usize,
    /// Directional-mode perturbation: `|w| <= dir_spread * r`.
    pub dir_spread: f64,
}

impl Default for RecoveryConfig {
    fn default() -> Self {
        let mut alpha_grid = alloc::vec![0.0, 0.5];
        let mut a = 1.0;
        while a <= 1024.0 {
            alpha_grid.push(a);
            a *= 2.0;
        }
        RecoveryConfig {
            alpha_grid,
            sampling: DirectionalSamplingConfig::default(),
            mode: Mode::Directional,
            shell_radius: 1e-4,
            shell_rho: 0.5,
            shells: 24,
            dir_spread: 0.5,
        }
    }
}

impl RecoveryConfig {
    pub fn validate(&self) -> Result<()> {
        self.sampling.validate()?;
        if self.alpha_grid.first() != Some(&0.0) {
            bail!(Config, "alpha_grid must start at 0");
        }
        if self.alpha_grid.windows(2).any(|w| !(w[1] > w[0])) || self.alpha_grid.iter().any(|a| !a.is_finite()) {
            bail!(Config, "alpha_grid must be finite and strictly ascending");
        }
        if !(self.shell_radius > 0.0) || !(self.shell_rho > 0.0 && self.shell_rho < 1.0) || self.shells == 0 {
            bail!(Config, "shell grid needs radius > 0, ratio in (0, 1) and at least one shell");
        }
        if !(self.dir_spread >= 0.0) {
            bail!(Config, "dir_spread must be non-negative");
        }
        Ok(())
    }

    pub fn tol(&self) -> f64 {
        self.sampling.base.tol
    }

    pub fn with_mode(&self, mode: Mode) -> RecoveryConfig {
        RecoveryConfig {
            mode,
            ..self.clone()
        }
    }

    fn shell_grid(&self, len: usize) -> GridConfig {
        GridConfig {
            t0: self.shell_radius,
            rho: self.shell_rho,
            k: self.shells,
            window: self.sampling.base.window.min(len).max(1),
            ..self.sampling.base.clone()
        }
    }

    fn radii(&self) -> Vec<f64> {
        let mut s = self.shell_radius;
        (0..self.shells)
            .map(|_| {
                let r = s;
                s *= self.shell_rho;
                r
            })
            .collect()
    }
}

/// Where support values `f^∂(x; d)` or radial values `f^r(x; d)` come from.
#[derive(Clone, Copy)]
pub enum RadialSource<'a> {
    Oracle(&'a SubdiffOracle),
    Function(&'a dyn ScalarFn),
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Approach<'a> {
    Along(&'a [f64]),
    Full,
}

/// `(radius, points)` per shell.
fn approach_points(xbar: &[f64], approach: Approach<'_>, cfg: &RecoveryConfig) -> Vec<(f64, Vec<Vec<f64>>)> {
    let n = cfg.sampling.n_dirs;
    let seed = cfg.sampling.base.seed;
    let dim = xbar.len();
    let offsets = ball_points(dim, n + 1, seed);
    let sphere = sphere_points(dim, if dim == 1 { 0 } else { n.saturating_sub(2 * dim) }, seed);
    cfg.radii()
        .into_iter()
        .map(|s| {
            let pts = (0..n)
                .map(|i| {
                    let r = s * libm::pow(cfg.shell_rho, i as f64 / n as f64);
                    match approach {
                        Approach::Along(v) => {
                            let dir = axpy(v, cfg.dir_spread * r, &offsets[i + 1]);
                            axpy(xbar, r, &dir)
                        }
                        Approach::Full => axpy(xbar, r, &sphere[i % sphere.len()]),
                    }
                })
                .collect();
            (s, pts)
        })
        .collect()
}

fn value_at(source: RadialSource<'_>, x: &[f64], d: &[f64], scale: f64, cfg: &RecoveryConfig) -> Result<Option<ExtReal>> {
    match source {
        RadialSource::Oracle(o) => {
            let set = o.at(x)?;
            if set.is_empty() {
                Ok(None)
            } else {
                support(&set, d).map(Some)
            }
        }
        RadialSource::Function(f) => {
            if !f.eval(x).is_finite() {
                return Ok(None);
            }
            let e = if scale > 0.0 {
                radial_near(f, x, d, &cfg.sampling.base, scale)
            } else {
                radial_lower(f, x, d, &cfg.sampling.base)
            };
            match e {
                Ok(e) => Ok(Some(e.liminf_est)),
                Err(Error::Estimation(_)) => Ok(None),
                Err(e) => Err(e),
            }
        }
    }
}

/// Per-`alpha` limsup of the recovery formula.
#[derive(Clone, Debug, PartialEq)]
pub struct AlphaLimsup {
    pub alpha: f64,
    /// `None` when no sampled point carried data.
    pub estimate: Option<TailEstimate>,
    /// The limsup including `x = x̄` in full mode.
    pub limsup: ExtReal,
    /// Lower bound on `limsup`: the smallest tail value.
    pub floor: ExtReal,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Recovery {
    pub mode: Mode,
    /// Minimum of the per-`alpha` limsups.
    pub value: ExtReal,
    pub per_alpha: Vec<AlphaLimsup>,
}

impl Recovery {
    /// Whether every contributing limsup is stable or divergent.
    pub fn trustworthy(&self) -> bool {
        self.per_alpha
            .iter()
            .filter_map(|a| a.estimate.as_ref())
            .all(|e| e.trustworthy())
    }

    /// Minimum over `alpha` of the smallest tail value, a lower bound on
    /// `value` that does not depend on the tail settling.
    pub fn floor(&self) -> ExtReal {
        self.per_alpha
            .iter()
            .filter(|a| a.estimate.is_some() || a.limsup != ExtReal::NegInf)
            .map(|a| a.floor)
            .min()
            .unwrap_or(ExtReal::NegInf)
    }
}

fn alpha_limsup(
    source: RadialSource<'_>,
    xbar: &[f64],
    u: &[f64],
    alpha: f64,
    approach: Approach<'_>,
    shells: &[(f64, Vec<Vec<f64>>)],
    cfg: &RecoveryConfig,
) -> Result<AlphaLimsup> {
    let mut seq: Vec<(f64, ExtReal)> = Vec::with_capacity(shells.len());
    for (s, pts) in shells {
        let mut best: Option<ExtReal> = None;
        for x in pts {
            let d = axpy(u, alpha, &sub(xbar, x));
            let scale = norm(&sub(x, xbar));
            if let Some(v) = value_at(source, x, &d, scale, cfg)? {
                best = Some(best.map_or(v, |b| b.max(v)));
            }
        }
        if let Some(v) = best {
            seq.push((*s, v));
        }
    }
    let estimate = if seq.is_empty() {
        None
    } else {
        Some(limit_bounds(&seq, &cfg.shell_grid(seq.len()))?)
    };
    let mut limsup = estimate.as_ref().map_or(ExtReal::NegInf, |e| e.limsup_est);
    let mut floor = estimate.as_ref().map_or(ExtReal::NegInf, |e| e.liminf_est);
    if approach == Approach::Full {
        if let Some(v) = value_at(source, xbar, u, 0.0, cfg)? {
            limsup = limsup.max(v);
            floor = floor.max(v);
        }
    }
    Ok(AlphaLimsup {
        alpha,
        estimate,
        limsup,
        floor,
    })
}

fn check_point(xbar: &[f64], u: &[f64]) -> Result<()> {
    same_dim(xbar, u)?;
    if is_zero(u) {
        bail!(Precondition, "direction must be nonzero");
    }
    Ok(())
}

/// `inf_alpha limsup_{x -> x̄} f^∂(x; u + alpha (x̄ - x))` (oracle source)
/// or the same with `f^r` (function source), over the approach of
/// `cfg.mode`. Each per-`alpha` value is reported.
pub fn recovered_radial(source: RadialSource<'_>, xbar: &[f64], u: &[f64], cfg: &RecoveryConfig) -> Result<Recovery> {
    cfg.validate()?;
    check_point(xbar, u)?;
    let dim = match source {
        RadialSource::Oracle(o) => o.dim(),
        RadialSource::Function(f) => {
            finite_at(f, xbar)?;
            f.dim()
        }
    };
    if dim != xbar.len() {
        bail!(Contract, "source has dimension {dim}, point has {}", xbar.len());
    }
    let approach = match cfg.mode {
        Mode::Directional => Approach::Along(u),
        Mode::Full => Approach::Full,
    };
    let shells = approach_points(xbar, approach, cfg);
    let mut per_alpha = Vec::with_capacity(cfg.alpha_grid.len());
    for &alpha in &cfg.alpha_grid {
        per_alpha.push(alpha_limsup(source, xbar, u, alpha, approach, &shells, cfg)?);
    }
    let value = per_alpha
        .iter()
        .filter(|a| a.estimate.is_some() || a.limsup != ExtReal::NegInf)
        .map(|a| a.limsup)
        .min()
        .ok_or_else(|| Error::Estimation(String::from("no sampled point carried subdifferential data for any alpha")))?;
    Ok(Recovery {
        mode: cfg.mode,
        value,
        per_alpha,
    })
}

fn compare(lhs: ExtReal, rhs: ExtReal, slack: f64, trusted: bool, what: &str) -> Verdict {
    let margin = match (lhs, rhs) {
        (ExtReal::Finite(a), ExtReal::Finite(b)) => b + slack - a,
        _ if lhs.le_within(rhs, slack) => f64::INFINITY,
        _ => f64::NEG_INFINITY,
    };
    let note = format!("{what}: {lhs} <= {rhs} + {slack:e}");
    if lhs.le_within(rhs, slack) {
        Verdict::holds(margin).note(note)
    } else if trusted {
        Verdict::fails(margin).note(note)
    } else {
        Verdict {
            status: Status::Inconclusive,
            margin,
            notes: alloc::vec![note, String::from("estimates not stable")],
        }
    }
}

/// Matched estimates of `limsup_{x ->_v x̄} f^r(x; u + alpha (x̄ - x))` and
/// `limsup_{x ->_v x̄} f^∂(x; u + alpha (x̄ - x))`; `v = 0` means the full
/// limit. Holds when they agree within `3 tol`.
pub fn duality_check(
    f: &dyn ScalarFn,
    oracle: &SubdiffOracle,
    xbar: &[f64],
    u: &[f64],
    v: &[f64],
    alpha: f64,
    cfg: &RecoveryConfig,
) -> Result<Verdict> {
    cfg.validate()?;
    same_dim(xbar, u)?;
    same_dim(xbar, v)?;
    finite_at(f, xbar)?;
    if !(alpha >= 0.0) {
        bail!(Precondition, "alpha must be non-negative");
    }
    let approach = if is_zero(v) { Approach::Full } else { Approach::Along(v) };
    let shells = approach_points(xbar, approach, cfg);
    let primal = alpha_limsup(RadialSource::Function(f), xbar, u, alpha, approach, &shells, cfg);
    let dual = alpha_limsup(RadialSource::Oracle(oracle), xbar, u, alpha, approach, &shells, cfg);
    let (primal, dual) = match (primal, dual) {
        (Ok(p), Ok(d)) => (p, d),
        (Err(e), _) | (_, Err(e)) => return Ok(Verdict::from(e)),
    };
    if primal.estimate.is_none() && dual.estimate.is_none() && approach != Approach::Full {
        return Ok(Verdict::inconclusive("no sampled point carried data"));
    }
    let gap = primal.limsup.distance(dual.limsup);
    let slack = 3.0 * cfg.tol();
    let trusted = [&primal, &dual]
        .iter()
        .all(|a| a.estimate.as_ref().is_none_or(|e| e.trustworthy()));
    let note = format!("f^r side {}, support side {}", primal.limsup, dual.limsup);
    let margin = if gap.is_finite() { slack - gap } else if gap == 0.0 { slack } else { f64::NEG_INFINITY };
    Ok(if gap <= slack {
        Verdict::holds(margin).note(note)
    } else if trusted {
        Verdict::fails(margin).note(note)
    } else {
        Verdict::new(Status::Inconclusive, margin).note(note)
    })
}

/// `f(x̄) = liminf_{t -> 0+} f(x̄ + t u)`.
///
/// Besides a tail window within `tol` of `f(x̄)`, a tail approaching
/// `f(x̄)` monotonically at a power rate counts as accessible.
pub fn is_radially_accessible(f: &dyn ScalarFn, xbar: &[f64], u: &[f64], cfg: &GridConfig) -> Result<Verdict> {
    cfg.validate()?;
    same_dim(xbar, u)?;
    let fx = finite_at(f, xbar)?;
    let samples: Vec<(f64, ExtReal)> = cfg.steps().into_iter().map(|t| (t, f.eval(&axpy(xbar, t, u)))).collect();
    let tail = &samples[samples.len() - cfg.window..];
    let liminf = tail.iter().map(|s| s.1).min().unwrap_or(ExtReal::PosInf);
    let gap = liminf.distance(ExtReal::Finite(fx));
    let note = format!("liminf of f along the ray {liminf}, f(x̄) = {fx}");
    if gap <= cfg.tol {
        Ok(Verdict::holds(cfg.tol - gap).note(note))
    } else if vanishing_toward(tail, fx) {
        Ok(Verdict::holds(0.0).note(note).note("tail converges monotonically"))
    } else {
        Ok(Verdict::fails(cfg.tol - gap).note(note))
    }
}

/// Searches for `mu_n -> 0` with
/// `liminf f^r(x̄ + mu_n u; u) >= f^r_+(x̄; u) - 3 tol`.
///
/// Candidates `mu` form a geometric grid of ratio 0.8 from `t0` down to
/// 1e-7; those satisfying the inequality are kept, and the search succeeds
/// when they reach the deepest window of candidates.
pub fn radial_stability_check(f: &dyn ScalarFn, xbar: &[f64], u: &[f64], cfg: &GridConfig) -> Result<Verdict> {
    let access = is_radially_accessible(f, xbar, u, cfg)?;
    if !access.is_holds() {
        bail!(Precondition, "f is not radially accessible at x̄ from u");
    }
    let fx = finite_at(f, xbar)?;
    let upper = tail_bounds(&ray_samples(f, xbar, fx, u, cfg), cfg)?;
    let target = upper.limsup_est;
    let mut candidates: Vec<(f64, ExtReal)> = Vec::new();
    let mut mu = cfg.t0;
    while mu >= 1e-7 {
        let y = axpy(xbar, mu, u);
        if let ExtReal::Finite(_) = f.eval(&y) {
            if let Ok(e) = radial_near(f, &y, u, cfg, mu * norm(u)) {
                candidates.push((mu, e.liminf_est));
            }
        }
        mu *= 0.8;
    }
    let window = cfg.window;
    if candidates.len() < window {
        return Ok(Verdict::inconclusive("too few admissible mu"));
    }
    let slack = 3.0 * cfg.tol;
    if target == ExtReal::PosInf {
        let e = tail_bounds(&candidates, &GridConfig { window, ..cfg.clone() })?;
        return Ok(if e.divergent == Divergence::ToPosInf {
            Verdict::holds(f64::INFINITY).note("both sides are +inf")
        } else {
            Verdict::inconclusive(format!("f^r_+ = +inf but f^r along the ray stays near {}", e.liminf_est))
        });
    }
    let kept: Vec<(f64, ExtReal)> = candidates
        .iter()
        .copied()
        .filter(|&(_, v)| target.le_within(v, slack))
        .collect();
    let deepest = candidates[candidates.len() - window].0;
    match kept.last() {
        Some(&(mu_min, _)) if kept.len() >= window && mu_min <= deepest => {
            let tail = &kept[kept.len() - window..];
            let liminf = tail.iter().map(|s| s.1).min().unwrap_or(ExtReal::PosInf);
            let margin = match (liminf, target) {
                (ExtReal::Finite(a), ExtReal::Finite(b)) => a - b + slack,
                _ => f64::INFINITY,
            };
            Ok(Verdict::holds(margin).note(format!(
                "f^r_+ = {target}; {} of {} mu kept, liminf along them {liminf}",
                kept.len(),
                candidates.len()
            )))
        }
        _ => Ok(Verdict::inconclusive(format!(
            "no subsequence of mu with f^r >= f^r_+ = {target} reaching mu = {deepest:e}"
        ))),
    }
}

/// Recovered value, direct radial value and the comparison between them.
#[derive(Clone, Debug, PartialEq)]
pub struct SemismoothReport {
    pub verdict: Verdict,
    pub recovered: ExtReal,
    pub direct: TailEstimate,
    /// Function-route value when the verdict came from an oracle.
    pub cross_check: Option<ExtReal>,
    pub recovery: Recovery,
}

fn semismooth_report(
    f: &dyn ScalarFn,
    oracle: Option<&SubdiffOracle>,
    xbar: &[f64],
    u: &[f64],
    cfg: &RecoveryConfig,
    mode: Mode,
) -> Result<SemismoothReport> {
    cfg.validate()?;
    check_point(xbar, u)?;
    finite_at(f, xbar)?;
    let cfg = cfg.with_mode(mode);
    let direct = radial_lower(f, xbar, u, &cfg.sampling.base)?;
    let (recovery, cross_check) = match oracle {
        Some(o) => {
            let r = recovered_radial(RadialSource::Oracle(o), xbar, u, &cfg)?;
            let c = recovered_radial(RadialSource::Function(f), xbar, u, &cfg).ok().map(|c| c.value);
            (r, c)
        }
        None => (recovered_radial(RadialSource::Function(f), xbar, u, &cfg)?, None),
    };
    let slack = 3.0 * cfg.tol();
    let trusted = direct.trustworthy() && (recovery.trustworthy() || !recovery.floor().le_within(direct.liminf_est, slack));
    let mut verdict = compare(recovery.value, direct.liminf_est, slack, trusted, "recovered <= f^r");
    if let Some(c) = cross_check {
        verdict = verdict.note(format!("function-route recovery {c}"));
    }
    Ok(SemismoothReport {
        verdict,
        recovered: recovery.value,
        direct,
        cross_check,
        recovery,
    })
}

pub fn upper_semismooth_report(
    f: &dyn ScalarFn,
    oracle: Option<&SubdiffOracle>,
    xbar: &[f64],
    u: &[f64],
    cfg: &RecoveryConfig,
) -> Result<SemismoothReport> {
    semismooth_report(f, oracle, xbar, u, cfg, Mode::Directional)
}

pub fn strictly_upper_semismooth_report(
    f: &dyn ScalarFn,
    oracle: Option<&SubdiffOracle>,
    xbar: &[f64],
    u: &[f64],
    cfg: &RecoveryConfig,
) -> Result<SemismoothReport> {
    semismooth_report(f, oracle, xbar, u, cfg, Mode::Full)
}

fn verdict_of(r: Result<SemismoothReport>) -> Result<Verdict> {
    match r {
        Ok(r) => Ok(r.verdict),
        Err(Error::Estimation(m)) => Ok(Verdict::inconclusive(m)),
        Err(e) => Err(e),
    }
}

/// `inf_alpha limsup_{x ->_u x̄} f^r(x; u + alpha (x̄ - x)) <= f^r(x̄; u)`.
///
/// With an oracle the recovered side uses support values and the
/// function-route value is reported as a cross-check.
pub fn is_upper_semismooth(
    f: &dyn ScalarFn,
    oracle: Option<&SubdiffOracle>,
    xbar: &[f64],
    u: &[f64],
    cfg: &RecoveryConfig,
) -> Result<Verdict> {
    verdict_of(upper_semismooth_report(f, oracle, xbar, u, cfg))
}

/// The same inequality with the full limit `x -> x̄`.
pub fn is_strictly_upper_semismooth(
    f: &dyn ScalarFn,
    oracle: Option<&SubdiffOracle>,
    xbar: &[f64],
    u: &[f64],
    cfg: &RecoveryConfig,
) -> Result<Verdict> {
    verdict_of(strictly_upper_semismooth_report(f, oracle, xbar, u, cfg))
}

fn band(seq: &[(f64, f64, f64)], window: usize) -> (f64, f64) {
    let tail = &seq[seq.len().saturating_sub(window)..];
    let lo = tail.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
    let hi = tail.iter().map(|s| s.2).fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

/// Lipschitz `f` with `f^r(x; u) -> f^r(x̄; u)` and `<g, u> -> f^r(x̄; u)`
/// for subgradients `g` at `x ->_u x̄`.
pub fn is_mifflin_semismooth(
    f: &dyn ScalarFn,
    oracle: &SubdiffOracle,
    xbar: &[f64],
    u: &[f64],
    cfg: &RecoveryConfig,
) -> Result<Verdict> {
    cfg.validate()?;
    check_point(xbar, u)?;
    if lipschitz_of(f).is_none() {
        bail!(Contract, "Mifflin semismoothness is defined for locally Lipschitz functions");
    }
    finite_at(f, xbar)?;
    let tol = cfg.tol();
    let target = match radial_lower(f, xbar, u, &cfg.sampling.base)?.liminf_est {
        ExtReal::Finite(v) => v,
        other => return Ok(Verdict::fails(f64::NEG_INFINITY).note(format!("f^r(x̄; u) = {other}"))),
    };
    let shells = approach_points(xbar, Approach::Along(u), cfg);
    let mut primal = Vec::new();
    let mut dual = Vec::new();
    let neg_u = scaled(u, -1.0);
    for (s, pts) in &shells {
        let (mut plo, mut phi) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut dlo, mut dhi) = (f64::INFINITY, f64::NEG_INFINITY);
        for x in pts {
            let scale = norm(&sub(x, xbar));
            if let Some(ExtReal::Finite(v)) = value_at(RadialSource::Function(f), x, u, scale, cfg)? {
                plo = plo.min(v);
                phi = phi.max(v);
            }
            let set = oracle.at(x)?;
            if !set.is_empty() {
                if let (ExtReal::Finite(hi), ExtReal::Finite(lo)) = (support(&set, u)?, support(&set, &neg_u)?) {
                    dlo = dlo.min(-lo);
                    dhi = dhi.max(hi);
                }
            }
        }
        if plo <= phi {
            primal.push((*s, plo, phi));
        }
        if dlo <= dhi {
            dual.push((*s, dlo, dhi));
        }
    }
    let window = cfg.sampling.base.window;
    if primal.len() < window || dual.len() < window {
        return Ok(Verdict::inconclusive("too few shells with finite data"));
    }
    let mut verdict = Verdict::holds(f64::INFINITY);
    for (what, seq, width) in [("f^r(x; u)", &primal, 2.0 * tol), ("<g, u>", &dual, 2.0 * tol)] {
        let (lo, hi) = band(seq, window);
        let off = libm::fabs(lo - target).max(libm::fabs(hi - target));
        let margin = (width - (hi - lo)).min(3.0 * tol - off);
        let note = format!("{what} ranges over [{lo}, {hi}] near x̄, f^r(x̄; u) = {target}");
        let v = if margin >= 0.0 {
            Verdict::holds(margin)
        } else {
            Verdict::fails(margin)
        };
        verdict = verdict.and(v.note(note));
    }
    Ok(verdict)
}

/// Pairs `x, y` in `B(x̄, delta)` with `(x - y)/|x - y|` in `B(u, delta)`
/// and `t` in `{0.1, .., 0.9}` are tested against
/// `f(tx + (1-t)y) <= t f(x) + (1-t) f(y) + eps t (1-t) |x - y|`,
/// violations measured per unit of `|x - y|`.
///
/// The radii `delta` are the shell radii of `cfg`. Separations run
/// geometrically from `delta / 2` down to a quarter of the squared distance
/// of the pair's midpoint to `x̄`, where oscillations of period of that
/// order become visible.
pub fn is_dir_approx_convex(
    f: &dyn ScalarFn,
    xbar: &[f64],
    u: &[f64],
    eps: f64,
    cfg: &DirectionalSamplingConfig,
) -> Result<Verdict> {
    cfg.validate()?;
    check_point(xbar, u)?;
    finite_at(f, xbar)?;
    if !(eps > 0.0) {
        bail!(Precondition, "eps must be positive");
    }
    let tol = cfg.base.tol;
    let unit = scaled(u, 1.0 / norm(u));
    let centers = ball_points(xbar.len(), cfg.n_dirs + 1, cfg.base.seed);
    let perturb = ball_points(xbar.len(), 5, cfg.base.seed.wrapping_add(3));
    let mut worst_by_delta = Vec::new();
    for delta in cfg.shell_radii() {
        let mut worst = f64::NEG_INFINITY;
        let floor = 1e-9 * (1.0 + norm(xbar));
        for c in &centers {
            let mid = axpy(xbar, 0.5 * delta, c);
            let z = norm(&sub(&mid, xbar));
            for w in &perturb {
                let dir = axpy(&unit, delta, w);
                let dir = scaled(&dir, 1.0 / norm(&dir));
                let mut h = 0.5 * delta;
                let stop = (0.25 * z * z).max(floor);
                while h >= stop {
                    let x = axpy(&mid, 0.5 * h, &dir);
                    let y = axpy(&mid, -0.5 * h, &dir);
                    let (fx, fy) = match (f.eval(&x), f.eval(&y)) {
                        (ExtReal::Finite(a), ExtReal::Finite(b)) => (a, b),
                        _ => {
                            h *= 0.5;
                            continue;
                        }
                    };
                    let sep = norm(&sub(&x, &y));
                    for k in 1..10 {
                        let t = k as f64 / 10.0;
                        let p: Vec<f64> = x.iter().zip(&y).map(|(a, b)| t * a + (1.0 - t) * b).collect();
                        let excess = match f.eval(&p) {
                            ExtReal::Finite(fp) => fp - t * fx - (1.0 - t) * fy,
                            _ => f64::INFINITY,
                        };
                        let v = excess / sep - eps * t * (1.0 - t);
                        worst = worst.max(v);
                    }
                    h *= 0.5;
                }
            }
        }
        worst_by_delta.push((delta, worst));
        if worst <= tol {
            return Ok(Verdict::holds(tol - worst).note(format!("no violation at delta = {delta:e}")));
        }
    }
    let margin = worst_by_delta.iter().map(|p| tol - p.1).fold(f64::NEG_INFINITY, f64::max);
    Ok(Verdict::fails(margin).note(format!(
        "violations at every delta down to {:e}",
        worst_by_delta.last().map_or(0.0, |p| p.0)
    )))
}

/// `limsup (f(x + t v) - f(x)) / t < inf` over `(x, f(x)) -> (x̄, f(x̄))`,
/// `t -> 0+` and `v -> u`.
pub fn is_dir_lipschitz(f: &dyn ScalarFn, xbar: &[f64], u: &[f64], cfg: &DirectionalSamplingConfig) -> Result<Verdict> {
    cfg.validate()?;
    same_dim(xbar, u)?;
    finite_at(f, xbar)?;
    let mut dirs = alloc::vec![u.to_vec()];
    for w in ball_points(u.len(), 5, cfg.base.seed.wrapping_add(5)).iter().skip(1) {
        dirs.push(axpy(u, cfg.delta0, w));
    }
    let mut worst = ExtReal::NegInf;
    let mut stable = true;
    for v in &dirs {
        let e = match clarke(f, xbar, v, cfg) {
            Ok(e) => e,
            Err(Error::Estimation(m)) => return Ok(Verdict::inconclusive(m)),
            Err(e) => return Err(e),
        };
        if e.divergent == Divergence::ToPosInf {
            return Ok(Verdict::fails(f64::NEG_INFINITY).note("quotients diverge to +inf"));
        }
        stable &= e.trustworthy();
        worst = worst.max(e.limsup_est);
    }
    let threshold = cfg.base.div_threshold;
    match worst {
        ExtReal::Finite(v) if v >= threshold => Ok(Verdict::fails(threshold - v)),
        ExtReal::PosInf => Ok(Verdict::fails(f64::NEG_INFINITY)),
        _ if !stable => Ok(Verdict::inconclusive(format!("limsup estimate {worst} from an unstable tail"))),
        _ => Ok(Verdict::holds(threshold - worst.to_f64()).note(format!("limsup {worst}"))),
    }
}

/// Tolerance of the approximate-convexity test inside [`classify`].
pub const CLASSIFY_EPS: f64 = 0.1;

#[derive(Clone, Debug, PartialEq)]
pub struct ClassVerdict {
    pub radially_accessible: Verdict,
    pub upper_semismooth: Verdict,
    pub strictly_upper_semismooth: Verdict,
    pub mifflin_semismooth: Verdict,
    pub dir_approx_convex: Verdict,
    pub dir_lipschitz: Verdict,
    pub recovered_value_directional: ExtReal,
    pub recovered_value_full: ExtReal,
    pub direct_radial: ExtReal,
    /// Fails when a class implication is contradicted by the detectors.
    pub consistency: Verdict,
}

fn or_inconclusive(r: Result<Verdict>) -> Result<Verdict> {
    match r {
        Ok(v) => Ok(v),
        Err(Error::Estimation(m)) | Err(Error::Contract(m)) => Ok(Verdict::inconclusive(m)),
        Err(e) => Err(e),
    }
}

/// Runs every detector at `(x̄, u)` and cross-checks the class
/// implications: convex, directionally approximately convex, and
/// directionally Lipschitz plus regular each imply strict upper
/// semismoothness; Mifflin semismoothness implies upper semismoothness;
/// strict implies plain.
pub fn classify(entry: &CatalogueEntry, xbar: &[f64], u: &[f64], cfg: &RecoveryConfig) -> Result<ClassVerdict> {
    classify_fn(entry.function.as_ref(), Some(entry.exact_subdiff()), xbar, u, cfg)
}

/// [`classify`] for any function. Without an oracle the semismoothness
/// verdicts come from the function route and Mifflin is inconclusive.
pub fn classify_fn(
    f: &dyn ScalarFn,
    oracle: Option<&SubdiffOracle>,
    xbar: &[f64],
    u: &[f64],
    cfg: &RecoveryConfig,
) -> Result<ClassVerdict> {
    cfg.validate()?;
    let meta = f.meta();
    let radially_accessible = is_radially_accessible(f, xbar, u, &cfg.sampling.base)?;
    let uss = upper_semismooth_report(f, oracle, xbar, u, cfg)?;
    let strict = strictly_upper_semismooth_report(f, oracle, xbar, u, cfg)?;
    let mifflin = match oracle {
        _ if !meta.locally_lipschitz => Verdict::inconclusive("not locally Lipschitz"),
        Some(o) => or_inconclusive(is_mifflin_semismooth(f, o, xbar, u, cfg))?,
        None => Verdict::inconclusive("no subdifferential oracle"),
    };
    let dac = or_inconclusive(is_dir_approx_convex(f, xbar, u, CLASSIFY_EPS, &cfg.sampling))?;
    let dlip = or_inconclusive(is_dir_lipschitz(f, xbar, u, &cfg.sampling))?;

    let mut consistency = Verdict::holds(f64::NAN);
    let mut flag = |cond: bool, what: &str| {
        if cond {
            consistency.status = Status::Fails;
            consistency.notes.push(format!("estimator inconsistency: {what}"));
        }
    };
    let strict_fails = strict.verdict.is_fails();
    flag(meta.convex && strict_fails, "convex but strict upper semismoothness fails");
    flag(dac.is_holds() && strict_fails, "directionally approximately convex but strict upper semismoothness fails");
    flag(
        dlip.is_holds() && meta.regular && strict_fails,
        "directionally Lipschitz and regular but strict upper semismoothness fails",
    );
    flag(
        meta.locally_lipschitz && mifflin.is_holds() && uss.verdict.is_fails(),
        "Mifflin semismooth but upper semismoothness fails",
    );
    flag(strict.verdict.is_holds() && uss.verdict.is_fails(), "strict holds but plain fails");

    Ok(ClassVerdict {
        radially_accessible,
        recovered_value_directional: uss.recovered,
        recovered_value_full: strict.recovered,
        direct_radial: uss.direct.liminf_est,
        upper_semismooth: uss.verdict,
        strictly_upper_semismooth: strict.verdict,
        mifflin_semismooth: mifflin,
        dir_approx_convex: dac,
        dir_lipschitz: dlip,
        consistency,
    })
}
