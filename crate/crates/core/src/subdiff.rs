//! Closed convex subgradient sets, their support functions, and the
//! subdifferential oracles built from them.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{bail, Result};
use crate::ext::ExtReal;
use crate::function::{lipschitz_of, ScalarFn, SharedFn};
use crate::grid::{finite_at, GridConfig};
use crate::subderiv::{clarke_rockafellar, radial_lower, DirectionalSamplingConfig};
use crate::vector::{check_dim, dot, norm, same_dim, sphere_points, sub};
use crate::verdict::Verdict;

pub type SupportFn = Arc<dyn Fn(&[f64]) -> ExtReal + Send + Sync>;

#[derive(Clone)]
pub enum SetForm {
    Empty,
    /// `[lo, hi]`, one-dimensional only.
    Interval { lo: ExtReal, hi: ExtReal },
    /// Convex hull of the vertices.
    Polytope(Vec<Vec<f64>>),
    Ball { center: Vec<f64>, radius: f64 },
    /// Given by its support function.
    Support(SupportFn),
}

/// A closed convex subset of R^n.
#[derive(Clone)]
pub struct SubgradientSet {
    form: SetForm,
    dim: usize,
}

impl fmt::Debug for SubgradientSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.form {
            SetForm::Empty => write!(f, "Empty(dim={})", self.dim),
            SetForm::Interval { lo, hi } => write!(f, "[{lo}, {hi}]"),
            SetForm::Polytope(v) => write!(f, "Polytope({v:?})"),
            SetForm::Ball { center, radius } => write!(f, "Ball({center:?}, {radius})"),
            SetForm::Support(_) => write!(f, "Support(dim={})", self.dim),
        }
    }
}

impl SubgradientSet {
    pub fn empty(dim: usize) -> Self {
        SubgradientSet {
            form: SetForm::Empty,
            dim,
        }
    }

    pub fn interval(lo: ExtReal, hi: ExtReal) -> Result<Self> {
        if lo == ExtReal::PosInf || hi == ExtReal::NegInf || lo > hi {
            bail!(Contract, "interval [{lo}, {hi}] is empty or malformed");
        }
        Ok(SubgradientSet {
            form: SetForm::Interval { lo, hi },
            dim: 1,
        })
    }

    pub fn closed(lo: f64, hi: f64) -> Result<Self> {
        Self::interval(ExtReal::from_f64(lo), ExtReal::from_f64(hi))
    }

    pub fn point(v: Vec<f64>) -> Result<Self> {
        Self::polytope(alloc::vec![v])
    }

    pub fn polytope(vertices: Vec<Vec<f64>>) -> Result<Self> {
        let dim = match vertices.first() {
            Some(v) => v.len(),
            None => bail!(Contract, "polytope needs at least one vertex"),
        };
        check_dim(dim)?;
        if vertices.iter().any(|v| v.len() != dim || v.iter().any(|c| !c.is_finite())) {
            bail!(Contract, "polytope vertices must be finite and of equal dimension");
        }
        Ok(SubgradientSet {
            form: SetForm::Polytope(vertices),
            dim,
        })
    }

    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        check_dim(center.len())?;
        if !(radius >= 0.0 && radius.is_finite()) {
            bail!(Contract, "ball radius must be finite and non-negative");
        }
        Ok(SubgradientSet {
            dim: center.len(),
            form: SetForm::Ball { center, radius },
        })
    }

    /// A set given by a sublinear support function.
    pub fn support_oracle(dim: usize, sigma: SupportFn) -> Result<Self> {
        check_dim(dim)?;
        Ok(SubgradientSet {
            form: SetForm::Support(sigma),
            dim,
        })
    }

    pub fn form(&self) -> &SetForm {
        &self.form
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_empty(&self) -> bool {
        matches!(self.form, SetForm::Empty)
    }

    /// `[-sigma(-1), sigma(1)]` for a nonempty one-dimensional set.
    pub fn as_interval(&self) -> Result<Option<(ExtReal, ExtReal)>> {
        if self.dim != 1 {
            bail!(Contract, "interval view needs dimension 1, set has {}", self.dim);
        }
        if self.is_empty() {
            return Ok(None);
        }
        Ok(Some((-support(self, &[-1.0])?, support(self, &[1.0])?)))
    }
}

/// `sup { <g, u> : g in S }`; `-inf` for the empty set.
pub fn support(s: &SubgradientSet, u: &[f64]) -> Result<ExtReal> {
    if u.len() != s.dim {
        bail!(Contract, "direction has dimension {}, set has {}", u.len(), s.dim);
    }
    Ok(match &s.form {
        SetForm::Empty => ExtReal::NegInf,
        SetForm::Interval { lo, hi } => {
            let d = u[0];
            if d > 0.0 {
                hi.scale(d)
            } else if d < 0.0 {
                lo.scale(d)
            } else {
                ExtReal::ZERO
            }
        }
        SetForm::Polytope(vs) => ExtReal::Finite(
            vs.iter()
                .map(|v| dot(v, u))
                .fold(f64::NEG_INFINITY, f64::max),
        ),
        SetForm::Ball { center, radius } => ExtReal::Finite(dot(center, u) + radius * norm(u)),
        SetForm::Support(sigma) => sigma(u),
    })
}

/// Inclusion `a ⊆ b` tested by support domination on the directions of
/// `sphere_points(dim, 32, seed)` (in one dimension, the two endpoints).
/// Returns the verdict with the smallest slack as margin.
pub fn included_in(a: &SubgradientSet, b: &SubgradientSet, tol: f64, seed: u64) -> Result<Verdict> {
    if a.dim != b.dim {
        bail!(Contract, "sets of dimension {} and {}", a.dim, b.dim);
    }
    if a.is_empty() {
        return Ok(Verdict::holds(f64::INFINITY));
    }
    let dirs = if a.dim == 1 {
        alloc::vec![alloc::vec![1.0], alloc::vec![-1.0]]
    } else {
        sphere_points(a.dim, 32, seed)
    };
    let mut margin = f64::INFINITY;
    let mut worst: Option<(Vec<f64>, ExtReal, ExtReal)> = None;
    for d in dirs {
        let (sa, sb) = (support(a, &d)?, support(b, &d)?);
        let m = match (sa, sb) {
            (ExtReal::Finite(p), ExtReal::Finite(q)) => q + tol - p,
            _ if sa.le_within(sb, tol) => f64::INFINITY,
            _ => f64::NEG_INFINITY,
        };
        if m < margin {
            margin = m;
            worst = Some((d, sa, sb));
        }
    }
    if margin >= 0.0 {
        Ok(Verdict::holds(margin))
    } else {
        let mut v = Verdict::fails(margin);
        if let Some((d, sa, sb)) = worst {
            v = v.note(format!("support {sa} exceeds {sb} in direction {d:?}"));
        }
        Ok(v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    ExactCatalogue,
    NumericMr,
    NumericClarke,
    OneSidedHull,
    UserSupplied,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::ExactCatalogue => "exact_catalogue",
            Provenance::NumericMr => "numeric_mr",
            Provenance::NumericClarke => "numeric_clarke",
            Provenance::OneSidedHull => "one_sided_hull",
            Provenance::UserSupplied => "user_supplied",
        }
    }
}

type SetMap = Arc<dyn Fn(&[f64]) -> SubgradientSet + Send + Sync>;

/// A subdifferential operator `x ↦ ∂f(x)`.
#[derive(Clone)]
pub struct SubdiffOracle {
    dim: usize,
    provenance: Provenance,
    at: SetMap,
}

impl fmt::Debug for SubdiffOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SubdiffOracle({}, dim={})", self.provenance.as_str(), self.dim)
    }
}

impl SubdiffOracle {
    pub fn new<F>(dim: usize, provenance: Provenance, at: F) -> Self
    where
        F: Fn(&[f64]) -> SubgradientSet + Send + Sync + 'static,
    {
        SubdiffOracle {
            dim,
            provenance,
            at: Arc::new(at),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn at(&self, x: &[f64]) -> Result<SubgradientSet> {
        if x.len() != self.dim {
            bail!(Contract, "oracle of dimension {} queried at a point of dimension {}", self.dim, x.len());
        }
        let s = (self.at)(x);
        if s.dim != self.dim {
            bail!(Contract, "oracle returned a set of dimension {}", s.dim);
        }
        Ok(s)
    }

    /// `x ↦` [`mr_subdiff_1d`]; empty where the construction fails.
    pub fn numeric_mr(f: SharedFn, cfg: GridConfig) -> Result<Self> {
        if f.dim() != 1 || !f.meta().convex {
            bail!(Contract, "the numeric MR oracle needs a convex function of one variable");
        }
        Ok(Self::new(1, Provenance::NumericMr, move |x| {
            mr_subdiff_1d(f.as_ref(), x[0], &cfg).unwrap_or_else(|_| SubgradientSet::empty(1))
        }))
    }

    /// `x ↦ co{-f^r(x; -1), f^r(x; 1)}` for `f` of one variable, with no
    /// convexity required. For piecewise C^1 functions this is `∂_C f(x)`.
    /// Empty outside the domain or where an estimate fails or diverges.
    pub fn one_sided_hull(f: SharedFn, cfg: GridConfig) -> Result<Self> {
        if f.dim() != 1 {
            bail!(Contract, "the one-sided hull oracle needs a function of one variable");
        }
        Ok(Self::new(1, Provenance::OneSidedHull, move |x| {
            let side = |u: f64| radial_lower(f.as_ref(), x, &[u], &cfg).ok().and_then(|e| e.liminf_est.finite());
            match (side(1.0), side(-1.0)) {
                (Some(r), Some(l)) => {
                    let (a, b) = (-l, r);
                    SubgradientSet::closed(a.min(b), a.max(b)).unwrap_or_else(|_| SubgradientSet::empty(1))
                }
                _ => SubgradientSet::empty(1),
            }
        }))
    }

    /// `x ↦` [`clarke_subdiff`]; empty outside the domain, the whole space
    /// where the estimate fails.
    pub fn numeric_clarke(f: SharedFn, cfg: DirectionalSamplingConfig) -> Self {
        let dim = f.dim();
        Self::new(dim, Provenance::NumericClarke, move |x| match f.eval(x) {
            ExtReal::Finite(_) => clarke_subdiff(f.clone(), x, &cfg).unwrap_or_else(|_| whole_space(dim)),
            _ => SubgradientSet::empty(dim),
        })
    }
}

/// Subgradients tabulated at sample points, each group of rows with the
/// same coordinates giving the vertices of the set at that point.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleTable {
    pub dim: usize,
    pub points: Vec<(Vec<f64>, Vec<Vec<f64>>)>,
}

impl SampleTable {
    /// Groups `(x, g)` rows by exact coordinates, keeping first-seen order.
    pub fn from_rows(dim: usize, rows: Vec<(Vec<f64>, Vec<f64>)>) -> Result<Self> {
        check_dim(dim)?;
        let mut points: Vec<(Vec<f64>, Vec<Vec<f64>>)> = Vec::new();
        for (i, (x, g)) in rows.into_iter().enumerate() {
            if x.len() != dim || g.len() != dim {
                bail!(Contract, "row {i}: expected {dim} coordinates and {dim} subgradient entries");
            }
            if x.iter().chain(&g).any(|c| !c.is_finite()) {
                bail!(Contract, "row {i}: entries must be finite");
            }
            match points.iter_mut().find(|(p, _)| *p == x) {
                Some((_, vs)) => vs.push(g),
                None => points.push((x, alloc::vec![g])),
            }
        }
        if points.is_empty() {
            bail!(Contract, "no subgradient rows");
        }
        Ok(SampleTable { dim, points })
    }

    /// Largest distance from a sample point to its nearest neighbour; 0 for
    /// a single point.
    pub fn spacing(&self) -> f64 {
        let pts = &self.points;
        pts.iter()
            .enumerate()
            .map(|(i, (p, _))| {
                pts.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, (q, _))| norm(&sub(p, q)))
                    .fold(f64::INFINITY, f64::min)
            })
            .filter(|d| d.is_finite())
            .fold(0.0, f64::max)
    }
}

impl SubdiffOracle {
    /// The set tabulated at the nearest sample point. Queries farther from
    /// every sample than the table's largest nearest-neighbour spacing get
    /// the empty set.
    pub fn from_table(table: SampleTable) -> Result<Self> {
        let dim = table.dim;
        let reach = table.spacing();
        let sets = table
            .points
            .into_iter()
            .map(|(x, vs)| {
                let set = if dim == 1 {
                    let lo = vs.iter().map(|v| v[0]).fold(f64::INFINITY, f64::min);
                    let hi = vs.iter().map(|v| v[0]).fold(f64::NEG_INFINITY, f64::max);
                    SubgradientSet::closed(lo, hi)?
                } else {
                    SubgradientSet::polytope(vs)?
                };
                Ok((x, set))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(dim, Provenance::UserSupplied, move |x| {
            let nearest = sets
                .iter()
                .map(|p| (norm(&sub(&p.0, x)), p))
                .min_by(|a, b| a.0.total_cmp(&b.0));
            match nearest {
                Some((d, p)) if d <= reach => p.1.clone(),
                _ => SubgradientSet::empty(dim),
            }
        }))
    }
}

fn whole_space(dim: usize) -> SubgradientSet {
    let sigma: SupportFn = Arc::new(|u: &[f64]| {
        if u.iter().all(|&c| c == 0.0) {
            ExtReal::ZERO
        } else {
            ExtReal::PosInf
        }
    });
    SubgradientSet {
        form: SetForm::Support(sigma),
        dim,
    }
}

fn ordered_interval(lo: ExtReal, hi: ExtReal, tol: f64) -> Result<SubgradientSet> {
    if lo.le_within(hi, 0.0) {
        return SubgradientSet::interval(lo, hi);
    }
    match (lo, hi) {
        (ExtReal::Finite(a), ExtReal::Finite(b)) if a - b <= tol => {
            let m = 0.5 * (a + b);
            SubgradientSet::closed(m, m)
        }
        _ => Ok(SubgradientSet::empty(1)),
    }
}

/// `∂_MR f(x) = [-f^r(x; -1), f^r(x; 1)]` for convex `f` of one variable.
pub fn mr_subdiff_1d(f: &dyn ScalarFn, x: f64, cfg: &GridConfig) -> Result<SubgradientSet> {
    if f.dim() != 1 {
        bail!(Contract, "function has dimension {}, expected 1", f.dim());
    }
    if !f.meta().convex {
        bail!(Contract, "the MR construction from radial derivatives needs convex metadata");
    }
    let hi = radial_lower(f, &[x], &[1.0], cfg)?.liminf_est;
    let lo = -radial_lower(f, &[x], &[-1.0], cfg)?.liminf_est;
    ordered_interval(lo, hi, cfg.tol)
}

/// `∂_C f(x)` as the set dominated by `f^up(x; .)`.
///
/// In one dimension the set is returned as `[-f^up(x; -1), f^up(x; 1)]`.
/// Otherwise support values are estimated on demand; a failed estimate
/// reads as `+inf`, which can only enlarge the set.
pub fn clarke_subdiff(f: SharedFn, x: &[f64], cfg: &DirectionalSamplingConfig) -> Result<SubgradientSet> {
    finite_at(f.as_ref(), x)?;
    cfg.validate()?;
    if x.len() == 1 {
        let hi = clarke_rockafellar(f.as_ref(), x, &[1.0], cfg)?.limsup_est;
        let lo = -clarke_rockafellar(f.as_ref(), x, &[-1.0], cfg)?.limsup_est;
        return ordered_interval(lo, hi, cfg.base.tol);
    }
    let point = x.to_vec();
    let cfg = cfg.clone();
    let sigma: SupportFn = Arc::new(move |u: &[f64]| {
        if u.iter().all(|&c| c == 0.0) {
            return ExtReal::ZERO;
        }
        clarke_rockafellar(f.as_ref(), &point, u, &cfg)
            .map(|e| e.limsup_est)
            .unwrap_or(ExtReal::PosInf)
    });
    SubgradientSet::support_oracle(x.len(), sigma)
}

/// Radii `shell_radius * shell_rho^j` down to `0.1 * tol`.
fn scan_radii(cfg: &DirectionalSamplingConfig) -> Vec<f64> {
    let floor = 0.1 * cfg.base.tol;
    let mut out = Vec::new();
    let mut s = cfg.shell_radius;
    while out.len() < 128 {
        out.push(s);
        if s < floor {
            break;
        }
        s *= cfg.shell_rho;
    }
    out
}

/// Searches for `(x_n, g_n)` in the graph of `oracle` with `x_n -> x̄`,
/// `f(x_n) -> f(x̄)` and `limsup <g_n, x_n - x̄> <= 0`.
///
/// Points are taken on shells shrinking to `0.1 * tol`; at each shell the
/// admissible point and subgradient minimizing the pairing are kept.
/// Admissibility requires `|f(x_n) - f(x̄)|` below
/// `value_filter * sqrt(s / shell_radius) + L * s`.
pub fn density_scan(
    f: &dyn ScalarFn,
    oracle: &SubdiffOracle,
    xbar: &[f64],
    cfg: &DirectionalSamplingConfig,
) -> Result<Verdict> {
    cfg.validate()?;
    let fx = finite_at(f, xbar)?;
    if oracle.dim() != xbar.len() {
        bail!(Contract, "oracle dimension {} differs from point dimension {}", oracle.dim(), xbar.len());
    }
    let lip = lipschitz_of(f).unwrap_or(0.0);
    let dirs = sphere_points(xbar.len(), cfg.n_dirs, cfg.base.seed);
    let mut sequence: Vec<(f64, f64)> = Vec::new();
    for s in scan_radii(cfg) {
        let filter = cfg.value_filter * libm::sqrt(s / cfg.shell_radius) + lip * s * (1.0 + 1e-9);
        let mut best: Option<f64> = None;
        for w in &dirs {
            let y: Vec<f64> = xbar.iter().zip(w).map(|(a, b)| a + s * b).collect();
            match f.eval(&y) {
                ExtReal::Finite(v) if libm::fabs(v - fx) <= filter => {}
                _ => continue,
            }
            let set = oracle.at(&y)?;
            if set.is_empty() {
                continue;
            }
            // min over g of <g, y - x̄> = -sigma(x̄ - y)
            let pairing = -support(&set, &sub(xbar, &y))?;
            if let ExtReal::Finite(p) = pairing {
                best = Some(best.map_or(p, |b: f64| b.min(p)));
            } else if pairing == ExtReal::NegInf {
                best = Some(f64::NEG_INFINITY);
            }
        }
        if let Some(p) = best {
            sequence.push((s, p));
        }
    }
    if sequence.is_empty() {
        return Ok(Verdict::fails(f64::NEG_INFINITY)
            .note(String::from("no admissible point with a nonempty subdifferential on any shell")));
    }
    let window = cfg.base.window.min(sequence.len());
    let tail = &sequence[sequence.len() - window..];
    let innermost = tail[tail.len() - 1];
    // non-increasing tail: the limit is at most the last term
    let limsup = if tail.windows(2).all(|w| w[1].1 <= w[0].1) {
        innermost.1
    } else {
        tail.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max)
    };
    let margin = cfg.base.tol - limsup;
    let v = if margin >= 0.0 {
        Verdict::holds(margin)
    } else {
        Verdict::fails(margin)
    };
    Ok(v.note(format!(
        "{} shells with admissible points, innermost radius {:e}, pairing limsup {:e}",
        sequence.len(),
        innermost.0,
        limsup
    )))
}

/// `f^∂(x; u) = sup <∂f(x), u>`.
pub fn support_at(oracle: &SubdiffOracle, x: &[f64], u: &[f64]) -> Result<ExtReal> {
    same_dim(x, u)?;
    support(&oracle.at(x)?, u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::function::{shared, FnMeta};
    use alloc::vec;

    fn abs_fn() -> SharedFn {
        shared(
            1,
            FnMeta {
                convex: true,
                locally_lipschitz: true,
                lipschitz_const: Some(1.0),
                ..FnMeta::default()
            },
            |x| x[0].abs(),
        )
    }

    #[test]
    fn support_examples() {
        let s = SubgradientSet::closed(-1.0, 1.0).unwrap();
        assert_eq!(support(&s, &[1.0]).unwrap(), ExtReal::Finite(1.0));
        assert_eq!(support(&SubgradientSet::empty(2), &[1.0, 0.0]).unwrap(), ExtReal::NegInf);
        let p = SubgradientSet::polytope(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(support(&p, &[1.0, 1.0]).unwrap(), ExtReal::Finite(1.0));
        assert!(matches!(support(&p, &[1.0]), Err(Error::Contract(_))));
        let b = SubgradientSet::ball(vec![1.0, 0.0], 2.0).unwrap();
        assert_eq!(support(&b, &[0.0, -3.0]).unwrap(), ExtReal::Finite(6.0));
    }

    #[test]
    fn malformed_sets_are_rejected() {
        assert!(SubgradientSet::closed(1.0, 0.0).is_err());
        assert!(SubgradientSet::interval(ExtReal::PosInf, ExtReal::PosInf).is_err());
        assert!(SubgradientSet::polytope(vec![]).is_err());
        assert!(SubgradientSet::polytope(vec![vec![1.0], vec![1.0, 2.0]]).is_err());
        assert!(SubgradientSet::ball(vec![0.0], -1.0).is_err());
    }

    #[test]
    fn half_line_support() {
        let s = SubgradientSet::interval(ExtReal::NegInf, ExtReal::ZERO).unwrap();
        assert_eq!(support(&s, &[-1.0]).unwrap(), ExtReal::PosInf);
        assert_eq!(support(&s, &[2.0]).unwrap(), ExtReal::ZERO);
        assert_eq!(support(&s, &[0.0]).unwrap(), ExtReal::ZERO);
    }

    #[test]
    fn inclusion_by_endpoints() {
        let small = SubgradientSet::closed(0.0, 1.0).unwrap();
        let big = SubgradientSet::closed(-1.0, 1.0).unwrap();
        assert!(included_in(&small, &big, 1e-6, 0).unwrap().is_holds());
        assert!(included_in(&big, &small, 1e-6, 0).unwrap().is_fails());
        assert!(included_in(&SubgradientSet::empty(1), &small, 1e-6, 0).unwrap().is_holds());
        assert!(included_in(&small, &SubgradientSet::empty(1), 1e-6, 0).unwrap().is_fails());
    }

    #[test]
    fn mr_of_abs() {
        let f = abs_fn();
        let cfg = GridConfig::default();
        let s = mr_subdiff_1d(f.as_ref(), 0.0, &cfg).unwrap();
        assert_eq!(s.as_interval().unwrap(), Some((ExtReal::Finite(-1.0), ExtReal::Finite(1.0))));
        let s = mr_subdiff_1d(f.as_ref(), 2.0, &cfg).unwrap();
        assert_eq!(s.as_interval().unwrap(), Some((ExtReal::Finite(1.0), ExtReal::Finite(1.0))));
        let nonconvex = shared(1, FnMeta::default(), |x| -x[0].abs());
        assert!(matches!(mr_subdiff_1d(nonconvex.as_ref(), 0.0, &cfg), Err(Error::Contract(_))));
    }

    #[test]
    fn density_scan_fails_on_a_far_away_oracle() {
        let f = abs_fn();
        let oracle = SubdiffOracle::new(1, Provenance::UserSupplied, |x| {
            if x[0] == 5.0 {
                SubgradientSet::closed(1.0, 1.0).unwrap()
            } else {
                SubgradientSet::empty(1)
            }
        });
        let v = density_scan(f.as_ref(), &oracle, &[0.0], &DirectionalSamplingConfig::default()).unwrap();
        assert!(v.is_fails());
    }

    #[test]
    fn one_sided_hull_orders_the_derivatives() {
        let neg = crate::catalogue::get("neg_abs").unwrap();
        let o = SubdiffOracle::one_sided_hull(neg.function.clone(), GridConfig::default()).unwrap();
        let (lo, hi) = o.at(&[0.0]).unwrap().as_interval().unwrap().unwrap();
        assert!(lo.distance(ExtReal::Finite(-1.0)) < 1e-6 && hi.distance(ExtReal::Finite(1.0)) < 1e-6);
        let (lo, hi) = o.at(&[0.5]).unwrap().as_interval().unwrap().unwrap();
        assert!(lo.distance(ExtReal::Finite(-1.0)) < 1e-6 && hi.distance(ExtReal::Finite(-1.0)) < 1e-6);
        let s = crate::catalogue::get("sqrt_abs").unwrap();
        let o = SubdiffOracle::one_sided_hull(s.function.clone(), GridConfig::default()).unwrap();
        assert!(o.at(&[0.0]).unwrap().is_empty());
    }
}
