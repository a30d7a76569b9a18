//! Mean value inequality witness and checkers for the two mean value
//! theorems on `[0, 1]`.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{bail, Error, Result};
use crate::ext::ExtReal;
use crate::function::{FnMeta, ScalarFn, SharedFn};
use crate::grid::GridConfig;
use crate::subderiv::{radial_lower, radial_upper};
use crate::verdict::{Status, Verdict};

/// Hypothesis scan resolution on `[0, 1)`.
pub const SCAN_POINTS: usize = 200;
/// Resolution of the coarse grid searched for jumps.
pub const JUMP_SCAN_POINTS: usize = 1000;
const STAGE_POINTS: usize = 1001;
const MAX_STAGES: usize = 12;

/// Declared regularity of a function on `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Continuity {
    Lsc,
    Usc,
    Continuous,
    None,
}

/// A function `[0, 1] -> (-inf, +inf]`; `+inf` outside `[0, 1]`.
#[derive(Clone)]
pub struct Fn01 {
    f: Arc<dyn Fn(f64) -> ExtReal + Send + Sync>,
    pub continuity: Continuity,
}

impl core::fmt::Debug for Fn01 {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("Fn01").field("continuity", &self.continuity).finish_non_exhaustive()
    }
}

impl Fn01 {
    /// NaN and `+inf` read as `+inf`.
    pub fn new(continuity: Continuity, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Fn01 {
            f: Arc::new(move |t| ExtReal::from_f64(f(t))),
            continuity,
        }
    }

    /// Restriction of a one-dimensional function to `[0, 1]`.
    pub fn from_scalar(f: SharedFn, continuity: Continuity) -> Result<Self> {
        if f.dim() != 1 {
            bail!(Contract, "expected a function of one variable, got dimension {}", f.dim());
        }
        Ok(Fn01 {
            f: Arc::new(move |t| f.eval(&[t])),
            continuity,
        })
    }

    pub fn eval(&self, t: f64) -> ExtReal {
        if (0.0..=1.0).contains(&t) {
            (self.f)(t)
        } else {
            ExtReal::PosInf
        }
    }

    /// `f^r(t; +1)`.
    pub fn lower_dini(&self, t: f64, cfg: &GridConfig) -> Result<ExtReal> {
        Ok(radial_lower(self, &[t], &[1.0], cfg)?.liminf_est)
    }

    /// `f^r_+(t; +1)`.
    pub fn upper_dini(&self, t: f64, cfg: &GridConfig) -> Result<ExtReal> {
        Ok(radial_upper(self, &[t], &[1.0], cfg)?.limsup_est)
    }
}

impl ScalarFn for Fn01 {
    fn dim(&self) -> usize {
        1
    }

    fn eval(&self, x: &[f64]) -> ExtReal {
        Fn01::eval(self, x[0])
    }

    fn meta(&self) -> FnMeta {
        FnMeta {
            domain_hint: Some(vec![(0.0, 1.0)]),
            ..FnMeta::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MviWitness {
    pub t0: f64,
    pub psi_t0: ExtReal,
    pub lower_dini_est: ExtReal,
    /// `psi(0) + t0 lambda - psi(t0)`.
    pub slack_position: f64,
    /// `psi^r(t0; +1) - lambda`.
    pub slack_derivative: f64,
}

fn g_value(psi: &Fn01, lambda: f64, t: f64) -> ExtReal {
    match psi.eval(t) {
        ExtReal::Finite(v) => ExtReal::Finite(v - t * lambda),
        other => other,
    }
}

/// First minimizer of `g` over `n` uniform points of `[lo, hi]`, never `t = 1`.
fn stage_min(psi: &Fn01, lambda: f64, lo: f64, hi: f64) -> Option<(f64, ExtReal)> {
    let mut best: Option<(f64, ExtReal)> = None;
    for i in 0..STAGE_POINTS {
        let t = lo + (hi - lo) * i as f64 / (STAGE_POINTS - 1) as f64;
        if !(t < 1.0) {
            continue;
        }
        let g = g_value(psi, lambda, t);
        if best.is_none_or(|(_, b)| g < b) {
            best = Some((t, g));
        }
    }
    best
}

/// A point `t0` in `[0, 1)` with `psi(t0) <= psi(0) + t0 lambda` and
/// `lambda <= psi^r(t0; +1)`, found by minimizing `psi(t) - t lambda`.
///
/// Three uniform stages of 1001 points, each on a window of twice the
/// previous spacing around the incumbent; further stages are added while
/// the derivative slack stays below `-tol`, which moves the incumbent onto
/// kinks and jumps the uniform grid straddles.
pub fn mvi_witness(psi: &Fn01, lambda: f64, cfg: &GridConfig) -> Result<MviWitness> {
    cfg.validate()?;
    let tol = cfg.tol;
    let psi0 = match psi.eval(0.0) {
        ExtReal::Finite(v) => v,
        _ => bail!(Precondition, "psi(0) must be finite"),
    };
    if !lambda.is_finite() {
        bail!(Precondition, "lambda must be finite");
    }
    let psi1 = psi.eval(1.0);
    if let ExtReal::Finite(v) = psi1 {
        if lambda > v - psi0 + tol {
            bail!(Precondition, "lambda = {lambda} exceeds psi(1) - psi(0) = {}", v - psi0);
        }
    }
    let (mut t0, mut g0) = stage_min(psi, lambda, 0.0, 1.0).ok_or_else(|| Error::Search("empty grid".into()))?;
    let g1 = g_value(psi, lambda, 1.0);
    if g1 < g0 && !g1.le_within(g0, tol) {
        bail!(
            Search,
            "the discrete minimum of psi(t) - t lambda sits at t = 1 only; refine the grid near 1"
        );
    }
    let mut h = 1.0 / (STAGE_POINTS - 1) as f64;
    let mut witness = None;
    for stage in 1..MAX_STAGES {
        let lo = (t0 - 2.0 * h).max(0.0);
        let hi = (t0 + 2.0 * h).min(1.0);
        if let Some((t, g)) = stage_min(psi, lambda, lo, hi) {
            if g < g0 {
                t0 = t;
                g0 = g;
            }
        }
        h = (hi - lo) / (STAGE_POINTS - 1) as f64;
        if stage >= 2 {
            let w = assemble(psi, psi0, lambda, t0, cfg)?;
            let done = w.slack_derivative >= -tol || h <= f64::EPSILON * t0.max(1e-300);
            witness = Some(w);
            if done {
                break;
            }
        }
    }
    witness.ok_or_else(|| Error::Search("no refinement stage ran".into()))
}

fn assemble(psi: &Fn01, psi0: f64, lambda: f64, t0: f64, cfg: &GridConfig) -> Result<MviWitness> {
    let psi_t0 = psi.eval(t0);
    let lower = psi.lower_dini(t0, cfg)?;
    let slack_position = match psi_t0 {
        ExtReal::Finite(v) => psi0 + t0 * lambda - v,
        _ => f64::NEG_INFINITY,
    };
    Ok(MviWitness {
        t0,
        psi_t0,
        lower_dini_est: lower,
        slack_position,
        slack_derivative: lower.to_f64() - lambda,
    })
}

/// Which of the pair a breach concerns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Which {
    Phi,
    Gamma,
}

impl Which {
    pub fn as_str(self) -> &'static str {
        match self {
            Which::Phi => "phi",
            Which::Gamma => "gamma",
        }
    }
}

/// The regularity a theorem requires of one of its functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Required {
    Lower,
    Upper,
    Continuity,
}

impl Required {
    pub fn as_str(self) -> &'static str {
        match self {
            Required::Lower => "lower semicontinuity",
            Required::Upper => "upper semicontinuity",
            Required::Continuity => "continuity",
        }
    }
}

/// A hypothesis found violated.
#[derive(Clone, Debug, PartialEq)]
pub enum Breach {
    Semicontinuity { which: Which, required: Required, at: f64 },
    /// `phi^r(t; +1) = +inf` or `gamma^r(t; +1) = -inf`: no real `rho(t)`.
    Finiteness { which: Which, at: f64 },
    /// The derivative comparison fails at `at`.
    Comparison { at: f64, phi: ExtReal, gamma: ExtReal },
}

impl core::fmt::Display for Breach {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Breach::Semicontinuity { which, required, at } => {
                write!(f, "{} breaks {} at t = {at}", which.as_str(), required.as_str())
            }
            Breach::Finiteness { which, at } => {
                let side = if *which == Which::Phi { "+inf" } else { "-inf" };
                write!(f, "{}^r(t; +1) = {side} at t = {at}", which.as_str())
            }
            Breach::Comparison { at, phi, gamma } => {
                write!(f, "derivative comparison fails at t = {at}: {phi} > {gamma}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MvtOutcome {
    pub verdict: Verdict,
    /// `phi(1) - phi(0)`.
    pub phi_increment: ExtReal,
    /// `gamma(1) - gamma(0)`.
    pub gamma_increment: ExtReal,
    /// `phi(1) - phi(0) <= gamma(1) - gamma(0) + tol`.
    pub conclusion_holds: bool,
    pub breaches: Vec<Breach>,
}

/// Brackets `[a, b]` of width near rounding level inside which `f` jumps
/// by more than `gap`. Every interval of a uniform scan whose values differ
/// by more than `gap` is bisected toward the larger half-difference.
pub(crate) fn locate_jumps(f: &dyn Fn(f64) -> ExtReal, lo: f64, hi: f64, n: usize, gap: f64) -> Vec<(f64, f64)> {
    let jump = |a: ExtReal, b: ExtReal| a.distance(b);
    let mut out: Vec<(f64, f64)> = Vec::new();
    let pts: Vec<f64> = (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect();
    for w in pts.windows(2) {
        let (mut a, mut b) = (w[0], w[1]);
        let (mut fa, mut fb) = (f(a), f(b));
        if !(jump(fa, fb) > gap) {
            continue;
        }
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            let fm = f(m);
            if jump(fa, fm) >= jump(fm, fb) {
                b = m;
                fb = fm;
            } else {
                a = m;
                fa = fm;
            }
        }
        if jump(fa, fb) > gap && out.last().is_none_or(|l| l.1 < a) {
            out.push((a, b));
        }
    }
    out
}

/// Whether `f` satisfies the required semicontinuity at both ends of a
/// bracket. Each end is compared with a point inside the bracket (the other
/// end once they are adjacent floats) and with the point one bracket width
/// outside.
fn bracket_breach(f: &Fn01, (a, b): (f64, f64), required: Required, tol: f64) -> Option<f64> {
    let w = b - a;
    let m = 0.5 * (a + b);
    for (p, inner, outer) in [(a, if m > a && m < b { m } else { b }, a - w), (b, if m > a && m < b { m } else { a }, b + w)] {
        let fp = f.eval(p);
        for q in [inner, outer] {
            if !(0.0..=1.0).contains(&q) {
                continue;
            }
            let fq = f.eval(q);
            let lower_ok = fp.le_within(fq, tol);
            let upper_ok = fq.le_within(fp, tol);
            let ok = match required {
                Required::Lower => lower_ok,
                Required::Upper => upper_ok,
                Required::Continuity => lower_ok && upper_ok,
            };
            if !ok {
                return Some(p);
            }
        }
    }
    None
}

fn semicontinuity_breaches(f: &Fn01, which: Which, required: Required, tol: f64) -> Vec<Breach> {
    let eval = |t: f64| f.eval(t);
    locate_jumps(&eval, 0.0, 1.0, JUMP_SCAN_POINTS, 10.0 * tol)
        .into_iter()
        .filter_map(|br| bracket_breach(f, br, required, tol))
        .map(|at| Breach::Semicontinuity { which, required, at })
        .collect()
}

fn increments(phi: &Fn01, gamma: &Fn01) -> Result<(ExtReal, ExtReal)> {
    let (p0, g0) = (phi.eval(0.0), gamma.eval(0.0));
    if !p0.is_finite() || !g0.is_finite() {
        bail!(Precondition, "phi(0) and gamma(0) must be finite");
    }
    Ok((phi.eval(1.0).try_sub(p0)?, gamma.eval(1.0).try_sub(g0)?))
}

fn scan_grid(excluded: &[f64]) -> Vec<f64> {
    let h = 1.0 / SCAN_POINTS as f64;
    (0..SCAN_POINTS)
        .map(|i| i as f64 * h)
        .filter(|t| excluded.iter().all(|c| libm::fabs(t - c) >= h))
        .collect()
}

fn comparison_breaches(
    phi_dini: impl Fn(f64) -> Result<ExtReal>,
    gamma: &Fn01,
    grid: &[f64],
    cfg: &GridConfig,
) -> Result<Vec<Breach>> {
    let mut out = Vec::new();
    for &t in grid {
        let p = phi_dini(t)?;
        let g = gamma.lower_dini(t, cfg)?;
        if p == ExtReal::PosInf {
            out.push(Breach::Finiteness { which: Which::Phi, at: t });
        }
        if g == ExtReal::NegInf {
            out.push(Breach::Finiteness { which: Which::Gamma, at: t });
        }
        if !p.le_within(g, cfg.tol) {
            out.push(Breach::Comparison { at: t, phi: p, gamma: g });
        }
    }
    Ok(out)
}

fn outcome(phi_inc: ExtReal, gamma_inc: ExtReal, breaches: Vec<Breach>, tol: f64) -> MvtOutcome {
    let conclusion_holds = phi_inc.le_within(gamma_inc, tol);
    let margin = match (phi_inc, gamma_inc) {
        (ExtReal::Finite(p), ExtReal::Finite(g)) => g + tol - p,
        _ if conclusion_holds => f64::INFINITY,
        _ => f64::NEG_INFINITY,
    };
    let status = if !breaches.is_empty() {
        Status::Inconclusive
    } else if conclusion_holds {
        Status::Holds
    } else {
        Status::Fails
    };
    let mut verdict = Verdict::new(status, margin).note(format!(
        "phi(1) - phi(0) = {phi_inc}, gamma(1) - gamma(0) = {gamma_inc}"
    ));
    if !conclusion_holds {
        verdict = verdict.note("conclusion violated");
    }
    for b in breaches.iter().take(8) {
        verdict = verdict.note(format!("hypothesis breached: {b}"));
    }
    if status == Status::Fails {
        verdict = verdict.note("hypotheses verified on the scan grid; the breach lies between grid points or the estimates are off");
    }
    MvtOutcome {
        verdict,
        phi_increment: phi_inc,
        gamma_increment: gamma_inc,
        conclusion_holds,
        breaches,
    }
}

/// Semicontinuous version: `phi` lsc, `gamma` usc, finite at 0, and a real
/// `rho(t)` with `phi^r(t; +1) <= rho(t) <= gamma^r(t; +1)` on `[0, 1)`
/// give `phi(1) - phi(0) <= gamma(1) - gamma(0)`.
///
/// Holds when no hypothesis breach is found and the conclusion holds;
/// fails when the hypotheses pass the scan but the conclusion does not;
/// inconclusive when a hypothesis is breached, with the breaches listed.
pub fn mvt_semicontinuous_check(phi: &Fn01, gamma: &Fn01, cfg: &GridConfig) -> Result<MvtOutcome> {
    cfg.validate()?;
    let (pi, gi) = increments(phi, gamma)?;
    let mut breaches = semicontinuity_breaches(phi, Which::Phi, Required::Lower, cfg.tol);
    breaches.extend(semicontinuity_breaches(gamma, Which::Gamma, Required::Upper, cfg.tol));
    breaches.extend(comparison_breaches(|t| phi.lower_dini(t, cfg), gamma, &scan_grid(&[]), cfg)?);
    Ok(outcome(pi, gi, breaches, cfg.tol))
}

/// Continuous version: `phi`, `gamma` continuous and
/// `phi^r_+(t; +1) <= rho(t) <= gamma^r(t; +1)` off a countable set `C`.
/// Scan points within one grid step of `C` are skipped.
pub fn mvt_continuous_check(phi: &Fn01, gamma: &Fn01, c: &[f64], cfg: &GridConfig) -> Result<MvtOutcome> {
    cfg.validate()?;
    let (pi, gi) = increments(phi, gamma)?;
    let mut breaches = semicontinuity_breaches(phi, Which::Phi, Required::Continuity, cfg.tol);
    breaches.extend(semicontinuity_breaches(gamma, Which::Gamma, Required::Continuity, cfg.tol));
    breaches.extend(comparison_breaches(|t| phi.upper_dini(t, cfg), gamma, &scan_grid(c), cfg)?);
    Ok(outcome(pi, gi, breaches, cfg.tol))
}
