//! Geometric step grids and the tail-window surrogate for `liminf`/`limsup`
//! as the step decreases to zero.

use alloc::vec::Vec;

use crate::error::{bail, Result};
use crate::ext::ExtReal;
use crate::function::ScalarFn;
use crate::vector::{axpy, dot, is_zero, norm_inf, same_dim, sub};

/// Smallest admissible last grid step `t0 * rho^(K-1)`.
pub const STEP_FLOOR: f64 = 1e-13;

/// Minimal log-log growth rate of a monotone tail that is read as
/// divergence even below `div_threshold`.
pub const MIN_GROWTH_EXPONENT: f64 = 0.1;

/// Fraction of `tol` that a single quotient's rounding error may reach
/// before deeper steps are dropped from the tail.
pub const NOISE_FRACTION: f64 = 0.1;

#[derive(Clone, Debug, PartialEq)]
pub struct GridConfig {
    pub t0: f64,
    pub rho: f64,
    /// Grid length.
    pub k: usize,
    /// Tail-window width.
    pub window: usize,
    pub div_threshold: f64,
    pub tol: f64,
    pub seed: u64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            t0: 1e-1,
            rho: 0.6,
            k: 50,
            window: 10,
            div_threshold: 1e8,
            tol: 1e-6,
            seed: 0,
        }
    }
}

impl GridConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            bail!(Config, "grid length K must be positive");
        }
        if !(self.t0 > 0.0 && self.t0.is_finite()) {
            bail!(Config, "t0 must be positive, got {}", self.t0);
        }
        if !(self.rho > 0.0 && self.rho < 1.0) {
            bail!(Config, "rho must lie in (0, 1), got {}", self.rho);
        }
        if self.window == 0 || self.window > self.k {
            bail!(Config, "window {} must lie in 1..=K={}", self.window, self.k);
        }
        if !(self.div_threshold > 0.0) || !(self.tol > 0.0) {
            bail!(Config, "div_threshold and tol must be positive");
        }
        let last = self.t0 * libm::pow(self.rho, self.k as f64);
        if last < STEP_FLOOR {
            bail!(Config, "t0*rho^K = {last:e} is below the precision floor {STEP_FLOOR:e}");
        }
        Ok(())
    }

    /// Same grid shape anchored at a different first step; used for inner
    /// scans at points close to a base point, where the absolute floor does
    /// not apply and rounding is handled by tail truncation instead.
    pub(crate) fn rescaled(&self, t0: f64) -> GridConfig {
        GridConfig {
            t0,
            ..self.clone()
        }
    }

    pub(crate) fn steps(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.k);
        let mut t = self.t0;
        for _ in 0..self.k {
            out.push(t);
            t *= self.rho;
        }
        out
    }
}

/// `(t0 * rho^k)` for `k = 0..K`.
pub fn geometric_grid(cfg: &GridConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    Ok(cfg.steps())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Divergence {
    None,
    ToPosInf,
    ToNegInf,
}

/// Result of a limiting difference-quotient scan.
#[derive(Clone, Debug, PartialEq)]
pub struct TailEstimate {
    /// `(t, q)` ordered by decreasing `t`.
    pub samples: Vec<(f64, ExtReal)>,
    pub liminf_est: ExtReal,
    pub limsup_est: ExtReal,
    pub divergent: Divergence,
    pub stable: bool,
}

impl TailEstimate {
    /// Whether the estimate can back a strict verdict.
    pub fn trustworthy(&self) -> bool {
        self.stable || self.divergent != Divergence::None
    }
}

/// `(f(x + t u) - f(x)) / t`.
pub fn difference_quotient(f: &dyn ScalarFn, x: &[f64], u: &[f64], t: f64) -> Result<ExtReal> {
    same_dim(x, u)?;
    if !(t > 0.0) {
        bail!(Precondition, "step must be positive, got {t}");
    }
    let fx = finite_at(f, x)?;
    Ok(quotient(f, x, fx, u, t).value)
}

pub(crate) fn finite_at(f: &dyn ScalarFn, x: &[f64]) -> Result<f64> {
    if x.len() != f.dim() {
        bail!(Contract, "point has dimension {}, function expects {}", x.len(), f.dim());
    }
    match f.eval(x) {
        ExtReal::Finite(v) => Ok(v),
        other => bail!(Precondition, "f(x) = {other} is not finite; quotients are undefined"),
    }
}

pub(crate) struct Quotient {
    pub value: ExtReal,
    /// Bound on the rounding error of `value`.
    pub noise: f64,
}

/// Forward quotient using the step actually realized in floating point
/// along `u`, with a rounding-error bound.
pub(crate) fn quotient(f: &dyn ScalarFn, x: &[f64], fx: f64, u: &[f64], t: f64) -> Quotient {
    if is_zero(u) {
        return Quotient {
            value: ExtReal::ZERO,
            noise: 0.0,
        };
    }
    let y = axpy(x, t, u);
    let d = sub(&y, x);
    let mut step = dot(&d, u) / dot(u, u);
    if !(step > 0.0) || libm::fabs(step - t) > 1e-3 * t {
        step = t;
    }
    match f.eval(&y) {
        ExtReal::Finite(fy) => {
            let q = (fy - fx) / step;
            let eps = f64::EPSILON;
            let mut noise = 4.0 * eps * (libm::fabs(fx) + libm::fabs(fy)) / step;
            if x.len() > 1 {
                noise += 4.0 * eps * norm_inf(x) * (1.0 + libm::fabs(q)) / step;
            }
            Quotient {
                value: ExtReal::Finite(q),
                noise,
            }
        }
        other => Quotient {
            value: other,
            noise: 0.0,
        },
    }
}

/// Whether a quotient is resolved well enough to stay in a tail window.
pub(crate) fn resolved(q: &Quotient, tol: f64) -> bool {
    let scale = match q.value {
        ExtReal::Finite(v) => libm::fabs(v).max(1.0),
        _ => return true,
    };
    q.noise <= NOISE_FRACTION * tol * scale
}

/// Number of leading steps of `steps` to keep: up to the first unresolved
/// quotient, but never fewer than `window`.
pub(crate) fn resolved_prefix(quotients: &[Quotient], tol: f64, window: usize) -> usize {
    let cut = quotients
        .iter()
        .position(|q| !resolved(q, tol))
        .unwrap_or(quotients.len());
    cut.max(window).min(quotients.len())
}

/// Quotient samples of `f` at `x` along `u` on the grid of `cfg`, truncated
/// where rounding error dominates.
pub(crate) fn ray_samples(
    f: &dyn ScalarFn,
    x: &[f64],
    fx: f64,
    u: &[f64],
    cfg: &GridConfig,
) -> Vec<(f64, ExtReal)> {
    let steps = cfg.steps();
    let qs: Vec<Quotient> = steps.iter().map(|&t| quotient(f, x, fx, u, t)).collect();
    let keep = resolved_prefix(&qs, cfg.tol, cfg.window);
    steps
        .into_iter()
        .zip(qs)
        .take(keep)
        .map(|(t, q)| (t, q.value))
        .collect()
}

fn growth_divergence(tail: &[(f64, ExtReal)], positive: bool, threshold: f64) -> bool {
    let sign = if positive { 1.0 } else { -1.0 };
    let mut prev: Option<f64> = None;
    let mut first: Option<(f64, f64)> = None;
    let mut last: Option<(f64, f64)> = None;
    let mut saw_inf = false;
    for &(t, q) in tail {
        match q {
            ExtReal::Finite(v) => {
                if saw_inf {
                    return false;
                }
                let m = sign * v;
                if !(m > 0.0) {
                    return false;
                }
                if let Some(p) = prev {
                    if !(m > p) {
                        return false;
                    }
                }
                prev = Some(m);
                if first.is_none() {
                    first = Some((t, m));
                }
                last = Some((t, m));
            }
            ExtReal::PosInf if positive => saw_inf = true,
            ExtReal::NegInf if !positive => saw_inf = true,
            _ => return false,
        }
    }
    if saw_inf {
        return true;
    }
    match (first, last) {
        (Some((t_a, m_a)), Some((t_b, m_b))) if t_a > t_b => {
            if m_b > threshold {
                return true;
            }
            let rate = libm::log(m_b / m_a) / libm::log(t_a / t_b);
            rate >= MIN_GROWTH_EXPONENT
        }
        _ => false,
    }
}

/// Windowed `liminf`/`limsup` of samples ordered by decreasing `t`.
pub fn tail_bounds(samples: &[(f64, ExtReal)], cfg: &GridConfig) -> Result<TailEstimate> {
    if cfg.window == 0 {
        bail!(Config, "window must be positive");
    }
    if samples.len() < cfg.window {
        bail!(
            Estimation,
            "{} samples available, tail window needs {}",
            samples.len(),
            cfg.window
        );
    }
    let tail = &samples[samples.len() - cfg.window..];
    let mut lo = ExtReal::PosInf;
    let mut hi = ExtReal::NegInf;
    for &(_, q) in tail {
        lo = lo.min(q);
        hi = hi.max(q);
    }
    let divergent = if growth_divergence(tail, true, cfg.div_threshold) {
        Divergence::ToPosInf
    } else if growth_divergence(tail, false, cfg.div_threshold) {
        Divergence::ToNegInf
    } else {
        Divergence::None
    };
    match divergent {
        Divergence::ToPosInf => {
            lo = ExtReal::PosInf;
            hi = ExtReal::PosInf;
        }
        Divergence::ToNegInf => {
            lo = ExtReal::NegInf;
            hi = ExtReal::NegInf;
        }
        Divergence::None => {}
    }
    let stable = hi.distance(lo) <= cfg.tol;
    Ok(TailEstimate {
        samples: samples.to_vec(),
        liminf_est: lo,
        limsup_est: hi,
        divergent,
        stable,
    })
}

/// Like [`tail_bounds`], but a monotone finite tail is summarized by its
/// last term, the best available estimate of its limit.
pub(crate) fn limit_bounds(samples: &[(f64, ExtReal)], cfg: &GridConfig) -> Result<TailEstimate> {
    let mut e = tail_bounds(samples, cfg)?;
    if e.divergent != Divergence::None {
        return Ok(e);
    }
    let tail: Vec<f64> = match samples[samples.len() - cfg.window..]
        .iter()
        .map(|s| s.1.finite())
        .collect::<Option<Vec<f64>>>()
    {
        Some(v) => v,
        None => return Ok(e),
    };
    let up = tail.windows(2).all(|w| w[1] >= w[0]);
    let down = tail.windows(2).all(|w| w[1] <= w[0]);
    if tail.len() >= 2 && (up || down) {
        let last = tail[tail.len() - 1];
        e.liminf_est = ExtReal::Finite(last);
        e.limsup_est = ExtReal::Finite(last);
        e.stable = libm::fabs(last - tail[tail.len() - 2]) <= cfg.tol;
    }
    Ok(e)
}

/// Whether `values` (ordered by decreasing step) approach `target`
/// monotonically at a rate of at least `t^MIN_GROWTH_EXPONENT`.
pub(crate) fn vanishing_toward(tail: &[(f64, ExtReal)], target: f64) -> bool {
    let mut prev: Option<f64> = None;
    let mut sign = 0.0;
    for &(_, v) in tail {
        let d = match v {
            ExtReal::Finite(v) => v - target,
            _ => return false,
        };
        if d == 0.0 {
            continue;
        }
        let s = if d > 0.0 { 1.0 } else { -1.0 };
        if sign == 0.0 {
            sign = s;
        } else if s != sign {
            return false;
        }
        let m = libm::fabs(d);
        if let Some(p) = prev {
            if !(m < p) {
                return false;
            }
        }
        prev = Some(m);
    }
    let nonzero: Vec<(f64, f64)> = tail
        .iter()
        .filter_map(|&(t, v)| v.finite().map(|v| (t, libm::fabs(v - target))))
        .filter(|&(_, d)| d > 0.0)
        .collect();
    match (nonzero.first(), nonzero.last()) {
        (Some(&(t_a, d_a)), Some(&(t_b, d_b))) if t_a > t_b => {
            libm::log(d_a / d_b) / libm::log(t_a / t_b) >= MIN_GROWTH_EXPONENT
        }
        // every sample equals the target
        (None, None) => true,
        _ => false,
    }
}
