//! Determination of a function by its subdifferential: inclusion checks,
//! the hypotheses of the continuous and semicontinuous determination
//! theorems along a segment, reconstruction of increments by integrating
//! the recovered radial subderivative, and the end-to-end constant test.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{bail, Error, Result};
use crate::ext::ExtReal;
use crate::function::SharedFn;
use crate::grid::GridConfig;
use crate::meanvalue::locate_jumps;
use crate::semismooth::{
    is_radially_accessible, is_strictly_upper_semismooth, is_upper_semismooth, recovered_radial, Mode, RadialSource,
    RecoveryConfig,
};
use crate::subderiv::{radial_lower, radial_upper};
use crate::subdiff::{included_in, SubdiffOracle};
use crate::vector::{axpy, is_zero, same_dim, sub};
use crate::verdict::{Status, Verdict};

/// Points of the hypothesis scan along a segment: `t = i / 40`.
pub const HYPOTHESIS_POINTS: usize = 40;
/// Uniform base intervals of the reconstruction quadrature.
pub const BASE_INTERVALS: usize = 64;
/// Largest share of reconstruction nodes allowed to fail.
pub const MAX_FAILED_SHARE: f64 = 0.05;
const CONTINUITY_SCAN: usize = 400;
const JUMP_BISECTIONS: usize = 48;

/// Which determination theorem a segment is checked against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TheoremMode {
    Continuous,
    Semicontinuous,
}

impl TheoremMode {
    pub fn as_str(self) -> &'static str {
        match self {
            TheoremMode::Continuous => "continuous",
            TheoremMode::Semicontinuous => "semicontinuous",
        }
    }
}

/// The segment `x̄_t = x̄ + t (ȳ - x̄)`, `t` in `[0, 1]`, with both functions
/// and their oracles.
#[derive(Clone)]
pub struct SegmentTask {
    pub xbar: Vec<f64>,
    pub ybar: Vec<f64>,
    pub f: SharedFn,
    pub g: SharedFn,
    pub f_oracle: SubdiffOracle,
    pub g_oracle: SubdiffOracle,
    /// Exceptional parameters in `[0, 1]`.
    pub exceptional: Vec<f64>,
    pub mode: TheoremMode,
}

impl SegmentTask {
    pub fn validate(&self) -> Result<()> {
        same_dim(&self.xbar, &self.ybar)?;
        let dim = self.xbar.len();
        for (what, d) in [
            ("f", self.f.dim()),
            ("g", self.g.dim()),
            ("f oracle", self.f_oracle.dim()),
            ("g oracle", self.g_oracle.dim()),
        ] {
            if d != dim {
                bail!(Contract, "{what} has dimension {d}, segment has {dim}");
            }
        }
        if self.xbar == self.ybar {
            bail!(Precondition, "segment endpoints coincide");
        }
        if self.exceptional.iter().any(|c| !(0.0..=1.0).contains(c)) {
            bail!(Precondition, "exceptional parameters must lie in [0, 1]");
        }
        if self.mode == TheoremMode::Continuous {
            for p in [&self.xbar, &self.ybar] {
                if !self.f.eval(p).is_finite() || !self.g.eval(p).is_finite() {
                    bail!(Precondition, "f and g must be finite at both endpoints");
                }
            }
        }
        Ok(())
    }

    pub fn direction(&self) -> Vec<f64> {
        sub(&self.ybar, &self.xbar)
    }

    pub fn point(&self, t: f64) -> Vec<f64> {
        axpy(&self.xbar, t, &self.direction())
    }

    /// Scan parameters at least one scan step away from every exceptional one.
    fn scan(&self) -> Vec<f64> {
        let h = 1.0 / HYPOTHESIS_POINTS as f64;
        (0..=HYPOTHESIS_POINTS)
            .map(|i| i as f64 * h)
            .filter(|t| self.exceptional.iter().all(|c| libm::fabs(t - c) >= h))
            .collect()
    }
}

/// `∂f(x) ⊆ ∂g(x)` at each point, by support domination.
pub fn inclusion_by_point(
    f_oracle: &SubdiffOracle,
    g_oracle: &SubdiffOracle,
    points: &[Vec<f64>],
    cfg: &GridConfig,
) -> Result<Vec<Verdict>> {
    if points.is_empty() {
        bail!(Precondition, "no points to check");
    }
    Ok(points
        .iter()
        .map(|x| {
            let sets = f_oracle.at(x).and_then(|a| Ok((a, g_oracle.at(x)?)));
            match sets.and_then(|(a, b)| included_in(&a, &b, cfg.tol, cfg.seed)) {
                Ok(v) => v,
                Err(e) => Verdict::from(e),
            }
            .note(format!("at {x:?}"))
        })
        .collect())
}

fn aggregate(verdicts: impl IntoIterator<Item = Verdict>) -> Verdict {
    let mut out = Verdict::holds(f64::INFINITY);
    let mut failing = 0usize;
    for v in verdicts {
        if v.is_holds() {
            out.margin = out.margin.min(v.margin);
            continue;
        }
        if v.is_fails() {
            failing += 1;
        }
        out.status = out.status.and(v.status);
        out.margin = out.margin.min(v.margin);
        if out.notes.len() < 8 {
            out.notes.extend(v.notes);
        }
    }
    if failing > 0 {
        out.notes.push(format!("{failing} failing points"));
    }
    out
}

/// Holds when the inclusion holds at every point.
pub fn inclusion_check(
    f_oracle: &SubdiffOracle,
    g_oracle: &SubdiffOracle,
    points: &[Vec<f64>],
    cfg: &GridConfig,
) -> Result<Verdict> {
    Ok(aggregate(inclusion_by_point(f_oracle, g_oracle, points, cfg)?))
}

/// Jumps of `t ↦ h(x̄_t)` on `[0, 1]`, and whether it is finite on the scan.
fn continuity_verdict(task: &SegmentTask, which: &str, h: &SharedFn, tol: f64) -> Verdict {
    let eval = |t: f64| h.eval(&task.point(t));
    let jumps = locate_jumps(&eval, 0.0, 1.0, CONTINUITY_SCAN, 10.0 * tol);
    let infinite = (0..=CONTINUITY_SCAN)
        .map(|i| i as f64 / CONTINUITY_SCAN as f64)
        .find(|&t| !eval(t).is_finite());
    match (jumps.first(), infinite) {
        (_, Some(t)) => Verdict::fails(f64::NEG_INFINITY).note(format!("{which} is infinite at t = {t}")),
        (Some(&(a, b)), None) => Verdict::fails(f64::NEG_INFINITY).note(format!("{which} jumps in t = [{a}, {b}]")),
        (None, None) => Verdict::holds(f64::INFINITY),
    }
}

fn uss_at(task: &SegmentTask, x: &[f64], u: &[f64], strict: bool, cfg: &RecoveryConfig) -> Verdict {
    let g = task.g.as_ref();
    let r = if strict {
        is_strictly_upper_semismooth(g, Some(&task.g_oracle), x, u, cfg)
    } else {
        is_upper_semismooth(g, Some(&task.g_oracle), x, u, cfg)
    };
    r.unwrap_or_else(Verdict::from)
}

/// Continuity of `t ↦ f(x̄_t)` and `t ↦ g(x̄_t)` on `[0, 1]`, and at scan
/// points away from the exceptional set: `f^r_+(x̄_t; u)` or
/// `g^r(x̄_t; u)` finite, and `g` upper semismooth at `x̄_t` along `u`.
pub fn hypothesis_check_51(task: &SegmentTask, cfg: &RecoveryConfig) -> Result<Verdict> {
    task.validate()?;
    cfg.validate()?;
    let base = &cfg.sampling.base;
    let u = task.direction();
    let mut parts = alloc::vec![
        continuity_verdict(task, "f", &task.f, base.tol),
        continuity_verdict(task, "g", &task.g, base.tol),
    ];
    for t in task.scan() {
        let x = task.point(t);
        let fu = radial_upper(task.f.as_ref(), &x, &u, base).map(|e| e.limsup_est);
        let gl = radial_lower(task.g.as_ref(), &x, &u, base).map(|e| e.liminf_est);
        let finite = match (fu, gl) {
            (Ok(a), Ok(b)) => {
                if a.is_finite() || b.is_finite() {
                    Verdict::holds(f64::INFINITY)
                } else {
                    Verdict::fails(f64::NEG_INFINITY).note(format!("f^r_+ = {a} and g^r = {b}"))
                }
            }
            (Err(e), _) | (_, Err(e)) => Verdict::from(e),
        };
        parts.push(finite.note(format!("finiteness at t = {t}")));
        parts.push(uss_at(task, &x, &u, false, cfg).note(format!("upper semismoothness of g at t = {t}")));
    }
    Ok(aggregate(parts))
}

/// At scan points away from the exceptional set: either `f` radially
/// accessible and `g` upper semismooth at `x̄_t` along `u`, or `g` strictly
/// upper semismooth there.
pub fn hypothesis_check_52(task: &SegmentTask, cfg: &RecoveryConfig) -> Result<Verdict> {
    task.validate()?;
    cfg.validate()?;
    let u = task.direction();
    let mut parts = Vec::new();
    for t in task.scan() {
        let x = task.point(t);
        if !task.f.eval(&x).is_finite() {
            // outside dom f the theorem makes no claim
            continue;
        }
        let accessible = is_radially_accessible(task.f.as_ref(), &x, &u, &cfg.sampling.base).unwrap_or_else(Verdict::from);
        let first = if accessible.is_holds() {
            uss_at(task, &x, &u, false, cfg)
        } else {
            accessible
        };
        let v = if first.is_holds() {
            first
        } else {
            let second = uss_at(task, &x, &u, true, cfg);
            if second.is_holds() {
                second
            } else {
                let status = if first.is_fails() && second.is_fails() {
                    Status::Fails
                } else {
                    Status::Inconclusive
                };
                Verdict::new(status, first.margin.max(second.margin))
                    .note(format!("at t = {t}: neither hypothesis (a) nor (b) holds"))
            }
        };
        parts.push(v);
    }
    if parts.is_empty() {
        return Ok(Verdict::inconclusive("no scan point inside dom f"));
    }
    Ok(aggregate(parts))
}

/// Recovered `g^r(x̄_t; u)` at the reconstruction nodes and the quadrature.
#[derive(Clone, Debug, PartialEq)]
pub struct Reconstruction {
    /// Estimate of `g(ȳ) - g(x̄)`.
    pub increment: f64,
    /// `(t, r(t))` in increasing `t`, failed nodes included.
    pub samples: Vec<(f64, ExtReal)>,
    pub failed: usize,
}

fn recovered_at(oracle: &SubdiffOracle, x: &[f64], u: &[f64], cfg: &RecoveryConfig) -> ExtReal {
    match recovered_radial(RadialSource::Oracle(oracle), x, u, cfg) {
        Ok(r) => r.value,
        Err(_) => ExtReal::NegInf,
    }
}

fn jump_size(a: ExtReal, b: ExtReal) -> f64 {
    a.distance(b)
}

/// `∫_0^1 r(t) dt` with `r(t)` the directional recovery of `g^r(x̄_t; u)`
/// from the oracle, `u = ȳ - x̄`.
///
/// Composite trapezoid rule on 64 uniform intervals. An interval is
/// bisected toward its larger half-difference while that half keeps at
/// least three quarters of the difference, which pins jumps of `r` to
/// within rounding. Nodes where `r` is infinite or the recovery fails are
/// dropped; more than 5% of them is an error.
pub fn recover_increment(oracle: &SubdiffOracle, xbar: &[f64], ybar: &[f64], cfg: &RecoveryConfig) -> Result<Reconstruction> {
    cfg.validate()?;
    same_dim(xbar, ybar)?;
    let u = sub(ybar, xbar);
    if is_zero(&u) {
        bail!(Precondition, "segment endpoints coincide");
    }
    let cfg = cfg.with_mode(Mode::Directional);
    let r = |t: f64| recovered_at(oracle, &axpy(xbar, t, &u), &u, &cfg);
    let base: Vec<(f64, ExtReal)> = (0..=BASE_INTERVALS)
        .map(|i| {
            let t = i as f64 / BASE_INTERVALS as f64;
            (t, r(t))
        })
        .collect();
    let mut samples = alloc::vec![base[0]];
    for w in base.windows(2) {
        let (mut a, mut b) = (w[0], w[1]);
        let mut extra = Vec::new();
        for _ in 0..JUMP_BISECTIONS {
            let gap = jump_size(a.1, b.1);
            if !(gap > cfg.tol()) {
                break;
            }
            let m = 0.5 * (a.0 + b.0);
            if m <= a.0 || m >= b.0 {
                break;
            }
            let mid = (m, r(m));
            extra.push(mid);
            let (left, right) = (jump_size(a.1, mid.1), jump_size(mid.1, b.1));
            if left.max(right) < 0.75 * gap {
                break;
            }
            if left >= right {
                b = mid;
            } else {
                a = mid;
            }
        }
        extra.sort_by(|p, q| p.0.total_cmp(&q.0));
        samples.extend(extra);
        samples.push(w[1]);
    }
    let good: Vec<(f64, f64)> = samples.iter().filter_map(|&(t, v)| v.finite().map(|v| (t, v))).collect();
    let failed = samples.len() - good.len();
    if failed as f64 > MAX_FAILED_SHARE * samples.len() as f64 {
        return Err(Error::Reconstruction(format!(
            "recovery failed or diverged at {failed} of {} nodes",
            samples.len()
        )));
    }
    if good.len() < 2 || good[0].0 > 0.0 || good[good.len() - 1].0 < 1.0 {
        return Err(Error::Reconstruction(format!(
            "recovery failed at a segment endpoint ({failed} failed nodes)"
        )));
    }
    let increment = good.windows(2).map(|w| 0.5 * (w[1].0 - w[0].0) * (w[0].1 + w[1].1)).sum();
    Ok(Reconstruction {
        increment,
        samples,
        failed,
    })
}

/// One segment of a determination run.
#[derive(Clone, Debug, PartialEq)]
pub struct SegmentReport {
    pub xbar: Vec<f64>,
    pub ybar: Vec<f64>,
    /// `None` when the reconstruction failed; the reason is in `notes`.
    pub reconstruction: Option<Reconstruction>,
    pub g_increment: ExtReal,
    pub f_increment: ExtReal,
    pub notes: Vec<alloc::string::String>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeterminationReport {
    pub mode: TheoremMode,
    pub inclusion_holds: Verdict,
    pub inclusion_by_point: Vec<(Vec<f64>, Verdict)>,
    pub hypothesis_51: Verdict,
    pub hypothesis_52: Verdict,
    /// Median of `f - g` over grid points where both are finite.
    pub const_estimate: f64,
    /// Largest `|(f - g) - const_estimate|` over those points.
    pub const_deviation: f64,
    /// Holds when inclusion and hypotheses hold and the deviation is within
    /// `5 tol (1 + max |f|)`; fails when they hold but the deviation is not.
    pub theorem: Verdict,
    pub per_segment: Vec<SegmentReport>,
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn increment(h: &SharedFn, a: &[f64], b: &[f64]) -> ExtReal {
    h.eval(b).try_sub(h.eval(a)).unwrap_or(ExtReal::PosInf)
}

/// Inclusion on the grid, the hypotheses of the task's theorem on its
/// segment, the reconstruction of `g` along the segment and the constant
/// `f - g` over the grid.
pub fn determination_experiment(task: &SegmentTask, grid: &[Vec<f64>], cfg: &RecoveryConfig) -> Result<DeterminationReport> {
    task.validate()?;
    cfg.validate()?;
    let base = &cfg.sampling.base;
    if grid.iter().any(|x| x.len() != task.xbar.len()) {
        bail!(Contract, "grid points must have the segment's dimension");
    }
    let by_point = inclusion_by_point(&task.f_oracle, &task.g_oracle, grid, base)?;
    let inclusion = aggregate(by_point.iter().cloned());
    let not_run = || Verdict::inconclusive(format!("not run in {} mode", task.mode.as_str()));
    let (h51, h52) = match task.mode {
        TheoremMode::Continuous => (hypothesis_check_51(task, cfg)?, not_run()),
        TheoremMode::Semicontinuous => (not_run(), hypothesis_check_52(task, cfg)?),
    };
    let hypotheses = if task.mode == TheoremMode::Continuous { &h51 } else { &h52 };

    let pairs: Vec<(f64, f64)> = grid
        .iter()
        .filter_map(|x| match (task.f.eval(x), task.g.eval(x)) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => Some((a, a - b)),
            _ => None,
        })
        .collect();
    if pairs.is_empty() {
        bail!(Precondition, "f and g are not both finite at any grid point");
    }
    let const_estimate = median(pairs.iter().map(|p| p.1).collect());
    let const_deviation = pairs.iter().map(|p| libm::fabs(p.1 - const_estimate)).fold(0.0, f64::max);
    let scale = pairs.iter().map(|p| libm::fabs(p.0)).fold(0.0, f64::max);
    let bound = 5.0 * base.tol * (1.0 + scale);

    let theorem = if inclusion.is_holds() && hypotheses.is_holds() {
        let note = format!("deviation {const_deviation:e} against bound {bound:e}");
        if const_deviation <= bound {
            Verdict::holds(bound - const_deviation).note(note)
        } else {
            Verdict::fails(bound - const_deviation).note(note)
        }
    } else {
        Verdict::new(Status::Inconclusive, f64::NAN).note("inclusion or hypotheses not verified")
    };

    let segment = {
        let (r, notes) = match recover_increment(&task.g_oracle, &task.xbar, &task.ybar, cfg) {
            Ok(r) => (Some(r), Vec::new()),
            Err(e) => (None, alloc::vec![format!("{e}")]),
        };
        SegmentReport {
            xbar: task.xbar.clone(),
            ybar: task.ybar.clone(),
            reconstruction: r,
            g_increment: increment(&task.g, &task.xbar, &task.ybar),
            f_increment: increment(&task.f, &task.xbar, &task.ybar),
            notes,
        }
    };

    Ok(DeterminationReport {
        mode: task.mode,
        inclusion_by_point: grid.iter().cloned().zip(by_point).collect(),
        inclusion_holds: inclusion,
        hypothesis_51: h51,
        hypothesis_52: h52,
        const_estimate,
        const_deviation,
        theorem,
        per_segment: alloc::vec![segment],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalogue::get;

    fn task(f: &str, g: &str, a: f64, b: f64) -> SegmentTask {
        let (f, g) = (get(f).unwrap(), get(g).unwrap());
        SegmentTask {
            xbar: alloc::vec![a],
            ybar: alloc::vec![b],
            f: f.function.clone(),
            g: g.function.clone(),
            f_oracle: f.exact_subdiff().clone(),
            g_oracle: g.exact_subdiff().clone(),
            exceptional: Vec::new(),
            mode: TheoremMode::Continuous,
        }
    }

    #[test]
    fn median_of_even_and_odd() {
        assert_eq!(median(alloc::vec![3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(alloc::vec![4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn inclusion_examples() {
        let g = GridConfig::default();
        let (abs, relu) = (get("abs").unwrap(), get("relu").unwrap());
        let pts = [alloc::vec![0.0]];
        assert!(inclusion_check(relu.exact_subdiff(), abs.exact_subdiff(), &pts, &g).unwrap().is_holds());
        assert!(inclusion_check(abs.exact_subdiff(), relu.exact_subdiff(), &pts, &g).unwrap().is_fails());
    }

    #[test]
    fn reconstruction_of_a_step() {
        let cfg = RecoveryConfig::default();
        for (name, want) in [("abs", 0.0), ("relu", 1.0)] {
            let e = get(name).unwrap();
            let r = recover_increment(e.exact_subdiff(), &[-1.0], &[1.0], &cfg).unwrap();
            assert!(libm::fabs(r.increment - want) <= 1e-6, "{name}: {}", r.increment);
            assert_eq!(r.failed, 0);
        }
    }

    #[test]
    fn degenerate_segment_is_rejected() {
        let mut t = task("abs", "abs", 0.0, 1.0);
        t.ybar = t.xbar.clone();
        assert!(matches!(t.validate(), Err(Error::Precondition(_))));
    }
}
