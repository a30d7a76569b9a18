//! Fixture functions with closed-form radial subderivatives and
//! subdifferentials.
//!
//! The three functions named `step_gamma`, `jump_phi` and `sqrt_gamma` live
//! on `[0, 1]` and are `+inf` elsewhere. Exact subdifferentials are Clarke
//! subdifferentials (equal to the convex-analysis ones on convex entries).

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{bail, Result};
use crate::ext::ExtReal;
use crate::function::{shared, FnMeta, SharedFn, Shifted};
use crate::grid::finite_at;
use crate::subdiff::{Provenance, SubdiffOracle, SubgradientSet};
use crate::vector::{ball_points, same_dim, sphere_points};

pub type RadialFn = fn(&[f64], &[f64]) -> ExtReal;
type SetFn = fn(&[f64]) -> SubgradientSet;

/// A point and a direction.
pub type PointDir = (Vec<f64>, Vec<f64>);

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Labels {
    pub convex: bool,
    pub lipschitz: bool,
    /// A function on `[0, 1]` that fails upper semicontinuity.
    pub usc_counterexample: bool,
    pub upper_semismooth_at: Vec<PointDir>,
    pub strictly_upper_semismooth_at: Vec<PointDir>,
    pub not_upper_semismooth_at: Vec<PointDir>,
    pub not_strictly_upper_semismooth_at: Vec<PointDir>,
    /// Points where the function is nonsmooth or its domain ends.
    pub kinks: Vec<Vec<f64>>,
}

#[derive(Clone)]
pub struct CatalogueEntry {
    pub name: String,
    pub formula: String,
    pub function: SharedFn,
    pub labels: Labels,
    radial: RadialFn,
    radial_upper: Option<RadialFn>,
    subdiff: SubdiffOracle,
}

impl core::fmt::Debug for CatalogueEntry {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "CatalogueEntry({}: {})", self.name, self.formula)
    }
}

impl CatalogueEntry {
    pub fn dim(&self) -> usize {
        self.function.dim()
    }

    pub fn eval(&self, x: &[f64]) -> ExtReal {
        self.function.eval(x)
    }

    /// Closed-form `f^r(x; u)`.
    pub fn exact_radial(&self, x: &[f64], u: &[f64]) -> Result<ExtReal> {
        same_dim(x, u)?;
        finite_at(self.function.as_ref(), x)?;
        Ok((self.radial)(x, u))
    }

    /// Closed-form `f^r_+(x; u)`; equal to `f^r` on every entry that does
    /// not override it.
    pub fn exact_radial_upper(&self, x: &[f64], u: &[f64]) -> Result<ExtReal> {
        same_dim(x, u)?;
        finite_at(self.function.as_ref(), x)?;
        Ok(self.radial_upper.unwrap_or(self.radial)(x, u))
    }

    pub fn exact_subdiff(&self) -> &SubdiffOracle {
        &self.subdiff
    }

    /// The same entry plus a constant.
    pub fn shifted(&self, c: f64) -> CatalogueEntry {
        CatalogueEntry {
            name: format!("{}{:+}", self.name, c),
            formula: format!("{} {:+}", self.formula, c),
            function: Arc::new(Shifted {
                inner: self.function.clone(),
                shift: c,
            }),
            ..self.clone()
        }
    }
}

fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

fn ext(v: f64) -> ExtReal {
    ExtReal::Finite(v)
}

fn interval(lo: f64, hi: f64) -> SubgradientSet {
    SubgradientSet::interval(ExtReal::from_f64(lo), ExtReal::from_f64(hi)).expect("ordered interval")
}

fn singleton(v: f64) -> SubgradientSet {
    interval(v, v)
}

fn on_unit_interval(t: f64) -> bool {
    (0.0..=1.0).contains(&t)
}

/// `+inf` if the ray leaves `[0, 1]` immediately.
fn leaves_unit_interval(t: f64, u: f64) -> bool {
    (t <= 0.0 && u < 0.0) || (t >= 1.0 && u > 0.0)
}

fn lipschitz(l: f64, convex: bool) -> FnMeta {
    FnMeta {
        convex,
        locally_lipschitz: true,
        lipschitz_const: Some(l),
        regular: convex,
        domain_hint: None,
    }
}

fn unit_domain() -> FnMeta {
    FnMeta {
        domain_hint: Some(vec![(0.0, 1.0)]),
        ..FnMeta::default()
    }
}

/// `2 x sin(1/x) - cos(1/x)`, the derivative of `osc` off the origin.
pub fn osc_derivative(x: f64) -> f64 {
    2.0 * x * libm::sin(1.0 / x) - libm::cos(1.0 / x)
}

fn osc(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x * libm::sin(1.0 / x)
    }
}

fn step_gamma(t: f64) -> f64 {
    if !on_unit_interval(t) {
        f64::INFINITY
    } else if t < 0.5 {
        1.0
    } else {
        0.0
    }
}

fn jump_phi(t: f64) -> f64 {
    if !on_unit_interval(t) {
        f64::INFINITY
    } else if t == 0.0 {
        0.0
    } else {
        2.0
    }
}

fn sqrt_gamma(t: f64) -> f64 {
    if on_unit_interval(t) {
        libm::sqrt(t)
    } else {
        f64::INFINITY
    }
}

fn pd(x: &[f64], u: &[f64]) -> PointDir {
    (x.to_vec(), u.to_vec())
}

struct Spec {
    name: &'static str,
    formula: &'static str,
    dim: usize,
    meta: FnMeta,
    eval: fn(&[f64]) -> f64,
    radial: RadialFn,
    subdiff: SetFn,
    labels: Labels,
}

fn build(s: Spec) -> CatalogueEntry {
    let dim = s.dim;
    let eval = s.eval;
    let function = shared(dim, s.meta, eval);
    let set = s.subdiff;
    let f = function.clone();
    let subdiff = SubdiffOracle::new(dim, Provenance::ExactCatalogue, move |x| match f.eval(x) {
        ExtReal::Finite(_) => set(x),
        _ => SubgradientSet::empty(dim),
    });
    CatalogueEntry {
        name: s.name.to_string(),
        formula: s.formula.to_string(),
        function,
        labels: s.labels,
        radial: s.radial,
        radial_upper: None,
        subdiff,
    }
}

/// Registered names, in registry order.
pub const NAMES: [&str; 14] = [
    "abs",
    "neg_abs",
    "sqrt_abs",
    "neg_sqrt_abs",
    "step_gamma",
    "jump_phi",
    "sqrt_gamma",
    "osc",
    "relu",
    "half_dom",
    "max2d",
    "neg_l1_2d",
    "square",
    "abs_plus_square",
];

/// Looks up a registered entry.
pub fn get(name: &str) -> Result<CatalogueEntry> {
    let zero = [0.0];
    let spec = match name {
        "abs" => Spec {
            name: "abs",
            formula: "|x|",
            dim: 1,
            meta: lipschitz(1.0, true),
            eval: |x| libm::fabs(x[0]),
            radial: |x, u| if x[0] == 0.0 { ext(libm::fabs(u[0])) } else { ext(sign(x[0]) * u[0]) },
            subdiff: |x| if x[0] == 0.0 { interval(-1.0, 1.0) } else { singleton(sign(x[0])) },
            labels: Labels {
                convex: true,
                lipschitz: true,
                upper_semismooth_at: vec![pd(&zero, &[1.0]), pd(&zero, &[-1.0])],
                strictly_upper_semismooth_at: vec![pd(&zero, &[1.0]), pd(&zero, &[-1.0]), pd(&[0.3], &[1.0])],
                kinks: vec![zero.to_vec()],
                ..Labels::default()
            },
        },
        "neg_abs" => Spec {
            name: "neg_abs",
            formula: "-|x|",
            dim: 1,
            meta: lipschitz(1.0, false),
            eval: |x| -libm::fabs(x[0]),
            radial: |x, u| if x[0] == 0.0 { ext(-libm::fabs(u[0])) } else { ext(-sign(x[0]) * u[0]) },
            subdiff: |x| if x[0] == 0.0 { interval(-1.0, 1.0) } else { singleton(-sign(x[0])) },
            labels: Labels {
                lipschitz: true,
                upper_semismooth_at: vec![pd(&zero, &[1.0]), pd(&zero, &[-1.0]), pd(&zero, &[2.0])],
                not_strictly_upper_semismooth_at: vec![pd(&zero, &[1.0]), pd(&zero, &[-1.0])],
                kinks: vec![zero.to_vec()],
                ..Labels::default()
            },
        },
        "sqrt_abs" => Spec {
            name: "sqrt_abs",
            formula: "sqrt(|x|)",
            dim: 1,
            meta: FnMeta::default(),
            eval: |x| libm::sqrt(libm::fabs(x[0])),
            radial: |x, u| match (x[0] == 0.0, u[0] == 0.0) {
                (_, true) => ExtReal::ZERO,
                (true, false) => ExtReal::PosInf,
                _ => ext(sign(x[0]) * u[0] / (2.0 * libm::sqrt(libm::fabs(x[0])))),
            },
            subdiff: |x| {
                if x[0] == 0.0 {
                    interval(f64::NEG_INFINITY, f64::INFINITY)
                } else {
                    singleton(sign(x[0]) / (2.0 * libm::sqrt(libm::fabs(x[0]))))
                }
            },
            labels: Labels {
                upper_semismooth_at: vec![pd(&zero, &[1.0]), pd(&zero, &[-1.0])],
                kinks: vec![zero.to_vec()],
                ..Labels::default()
            },
        },
        "neg_sqrt_abs" => Spec {
            name: "neg_sqrt_abs",
            formula: "-sqrt(|x|)",
            dim: 1,
            meta: FnMeta::default(),
            eval: |x| -libm::sqrt(libm::fabs(x[0])),
            radial: |x, u| match (x[0] == 0.0, u[0] == 0.0) {
                (_, true) => ExtReal::ZERO,
                (true, false) => ExtReal::NegInf,
                _ => ext(-sign(x[0]) * u[0] / (2.0 * libm::sqrt(libm::fabs(x[0])))),
            },
            subdiff: |x| {
                if x[0] == 0.0 {
                    interval(f64::NEG_INFINITY, f64::INFINITY)
                } else {
                    singleton(-sign(x[0]) / (2.0 * libm::sqrt(libm::fabs(x[0]))))
                }
            },
            labels: Labels {
                upper_semismooth_at: vec![pd(&zero, &[1.0])],
                not_strictly_upper_semismooth_at: vec![pd(&zero, &[1.0])],
                kinks: vec![zero.to_vec()],
                ..Labels::default()
            },
        },
        "step_gamma" => Spec {
            name: "step_gamma",
            formula: "1 on [0,1/2), 0 on [1/2,1], +inf elsewhere",
            dim: 1,
            meta: unit_domain(),
            eval: |x| step_gamma(x[0]),
            radial: |x, u| {
                let (t, d) = (x[0], u[0]);
                if d == 0.0 {
                    ExtReal::ZERO
                } else if leaves_unit_interval(t, d) || (t == 0.5 && d < 0.0) {
                    ExtReal::PosInf
                } else {
                    ExtReal::ZERO
                }
            },
            subdiff: |x| match x[0] {
                t if t == 0.0 || t == 0.5 => interval(f64::NEG_INFINITY, 0.0),
                t if t == 1.0 => interval(0.0, f64::INFINITY),
                _ => singleton(0.0),
            },
            labels: Labels {
                usc_counterexample: true,
                kinks: vec![vec![0.0], vec![0.5], vec![1.0]],
                ..Labels::default()
            },
        },
        "jump_phi" => Spec {
            name: "jump_phi",
            formula: "0 at 0, 2 on (0,1], +inf elsewhere",
            dim: 1,
            meta: unit_domain(),
            eval: |x| jump_phi(x[0]),
            radial: |x, u| {
                let (t, d) = (x[0], u[0]);
                if d == 0.0 {
                    ExtReal::ZERO
                } else if leaves_unit_interval(t, d) || t == 0.0 {
                    ExtReal::PosInf
                } else {
                    ExtReal::ZERO
                }
            },
            subdiff: |x| match x[0] {
                t if t == 0.0 => interval(f64::NEG_INFINITY, f64::INFINITY),
                t if t == 1.0 => interval(0.0, f64::INFINITY),
                _ => singleton(0.0),
            },
            labels: Labels {
                kinks: vec![vec![0.0], vec![1.0]],
                ..Labels::default()
            },
        },
        "sqrt_gamma" => Spec {
            name: "sqrt_gamma",
            formula: "sqrt(t) on [0,1], +inf elsewhere",
            dim: 1,
            meta: unit_domain(),
            eval: |x| sqrt_gamma(x[0]),
            radial: |x, u| {
                let (t, d) = (x[0], u[0]);
                if d == 0.0 {
                    ExtReal::ZERO
                } else if leaves_unit_interval(t, d) || t == 0.0 {
                    ExtReal::PosInf
                } else {
                    ext(d / (2.0 * libm::sqrt(t)))
                }
            },
            subdiff: |x| match x[0] {
                t if t == 0.0 => interval(f64::NEG_INFINITY, f64::INFINITY),
                t if t == 1.0 => interval(0.5, f64::INFINITY),
                t => singleton(0.5 / libm::sqrt(t)),
            },
            labels: Labels {
                kinks: vec![vec![0.0], vec![1.0]],
                ..Labels::default()
            },
        },
        "osc" => Spec {
            name: "osc",
            formula: "x^2 sin(1/x), 0 at 0",
            dim: 1,
            meta: lipschitz(3.0, false),
            eval: |x| osc(x[0]),
            radial: |x, u| if x[0] == 0.0 { ExtReal::ZERO } else { ext(osc_derivative(x[0]) * u[0]) },
            subdiff: |x| if x[0] == 0.0 { interval(-1.0, 1.0) } else { singleton(osc_derivative(x[0])) },
            labels: Labels {
                lipschitz: true,
                not_upper_semismooth_at: vec![pd(&zero, &[1.0])],
                not_strictly_upper_semismooth_at: vec![pd(&zero, &[1.0])],
                kinks: vec![zero.to_vec()],
                ..Labels::default()
            },
        },
        "relu" => Spec {
            name: "relu",
            formula: "max(0, x)",
            dim: 1,
            meta: lipschitz(1.0, true),
            eval: |x| x[0].max(0.0),
            radial: |x, u| match x[0] {
                v if v > 0.0 => ext(u[0]),
                v if v < 0.0 => ExtReal::ZERO,
                _ => ext(u[0].max(0.0)),
            },
            subdiff: |x| match x[0] {
                v if v > 0.0 => singleton(1.0),
                v if v < 0.0 => singleton(0.0),
                _ => interval(0.0, 1.0),
            },
            labels: Labels {
                convex: true,
                lipschitz: true,
                upper_semismooth_at: vec![pd(&zero, &[1.0]), pd(&zero, &[-1.0])],
                strictly_upper_semismooth_at: vec![pd(&zero, &[1.0]), pd(&zero, &[-1.0])],
                kinks: vec![zero.to_vec()],
                ..Labels::default()
            },
        },
        "half_dom" => Spec {
            name: "half_dom",
            formula: "0 on [0,inf), +inf elsewhere",
            dim: 1,
            meta: FnMeta {
                convex: true,
                regular: true,
                ..FnMeta::default()
            },
            eval: |x| if x[0] >= 0.0 { 0.0 } else { f64::INFINITY },
            radial: |x, u| if x[0] == 0.0 && u[0] < 0.0 { ExtReal::PosInf } else { ExtReal::ZERO },
            subdiff: |x| if x[0] == 0.0 { interval(f64::NEG_INFINITY, 0.0) } else { singleton(0.0) },
            labels: Labels {
                convex: true,
                upper_semismooth_at: vec![pd(&zero, &[1.0])],
                strictly_upper_semismooth_at: vec![pd(&zero, &[1.0]), pd(&zero, &[-1.0])],
                kinks: vec![zero.to_vec()],
                ..Labels::default()
            },
        },
        "max2d" => Spec {
            name: "max2d",
            formula: "max(x1, x2)",
            dim: 2,
            meta: lipschitz(1.0, true),
            eval: |x| x[0].max(x[1]),
            radial: |x, u| match x[0] - x[1] {
                d if d > 0.0 => ext(u[0]),
                d if d < 0.0 => ext(u[1]),
                _ => ext(u[0].max(u[1])),
            },
            subdiff: |x| {
                let v = match x[0] - x[1] {
                    d if d > 0.0 => vec![vec![1.0, 0.0]],
                    d if d < 0.0 => vec![vec![0.0, 1.0]],
                    _ => vec![vec![1.0, 0.0], vec![0.0, 1.0]],
                };
                SubgradientSet::polytope(v).expect("valid vertices")
            },
            labels: Labels {
                convex: true,
                lipschitz: true,
                upper_semismooth_at: vec![pd(&[0.0, 0.0], &[1.0, 0.0])],
                strictly_upper_semismooth_at: vec![pd(&[0.0, 0.0], &[1.0, 0.0]), pd(&[0.0, 0.0], &[-1.0, 1.0])],
                kinks: vec![vec![0.0, 0.0], vec![0.5, 0.5]],
                ..Labels::default()
            },
        },
        "neg_l1_2d" => Spec {
            name: "neg_l1_2d",
            formula: "-|x1| - |x2|",
            dim: 2,
            meta: lipschitz(core::f64::consts::SQRT_2, false),
            eval: |x| -libm::fabs(x[0]) - libm::fabs(x[1]),
            radial: |x, u| {
                ext(x.iter()
                    .zip(u)
                    .map(|(&c, &d)| if c == 0.0 { -libm::fabs(d) } else { -sign(c) * d })
                    .sum())
            },
            subdiff: |x| {
                let choices: Vec<Vec<f64>> = x
                    .iter()
                    .map(|&c| if c == 0.0 { vec![-1.0, 1.0] } else { vec![-sign(c)] })
                    .collect();
                let mut vertices = vec![Vec::new()];
                for opts in choices {
                    vertices = vertices
                        .into_iter()
                        .flat_map(|v| {
                            opts.iter().map(move |&o| {
                                let mut w = v.clone();
                                w.push(o);
                                w
                            })
                        })
                        .collect();
                }
                SubgradientSet::polytope(vertices).expect("valid vertices")
            },
            labels: Labels {
                lipschitz: true,
                upper_semismooth_at: vec![pd(&[0.0, 0.0], &[1.0, 0.0])],
                not_strictly_upper_semismooth_at: vec![pd(&[0.0, 0.0], &[1.0, 0.0])],
                kinks: vec![vec![0.0, 0.0], vec![0.0, 0.5]],
                ..Labels::default()
            },
        },
        "square" => Spec {
            name: "square",
            formula: "x^2",
            dim: 1,
            meta: lipschitz(4.0, true),
            eval: |x| x[0] * x[0],
            radial: |x, u| ext(2.0 * x[0] * u[0]),
            subdiff: |x| singleton(2.0 * x[0]),
            labels: Labels {
                convex: true,
                lipschitz: true,
                strictly_upper_semismooth_at: vec![pd(&[0.5], &[1.0])],
                ..Labels::default()
            },
        },
        "abs_plus_square" => Spec {
            name: "abs_plus_square",
            formula: "|x| + x^2",
            dim: 1,
            meta: lipschitz(5.0, true),
            eval: |x| libm::fabs(x[0]) + x[0] * x[0],
            radial: |x, u| {
                let a = if x[0] == 0.0 { libm::fabs(u[0]) } else { sign(x[0]) * u[0] };
                ext(a + 2.0 * x[0] * u[0])
            },
            subdiff: |x| {
                let g = 2.0 * x[0];
                if x[0] == 0.0 {
                    interval(g - 1.0, g + 1.0)
                } else {
                    singleton(g + sign(x[0]))
                }
            },
            labels: Labels {
                convex: true,
                lipschitz: true,
                strictly_upper_semismooth_at: vec![pd(&zero, &[1.0])],
                kinks: vec![zero.to_vec()],
                ..Labels::default()
            },
        },
        other => bail!(Lookup, "{other}"),
    };
    Ok(build(spec))
}

/// Every registered entry.
pub fn all() -> Vec<CatalogueEntry> {
    NAMES.iter().map(|n| get(n).expect("registered name")).collect()
}

/// `count` deterministic `(x, u)` pairs with `f(x)` finite: the kinks in
/// the axis directions first, then low-discrepancy points of the domain box
/// (`[-1, 1]^n` unless the entry declares one) with unit directions.
pub fn sample_points(entry: &CatalogueEntry, count: usize, seed: u64) -> Vec<PointDir> {
    let dim = entry.dim();
    let dirs = sphere_points(dim, 8, seed);
    let boxed: Vec<(f64, f64)> = entry
        .function
        .meta()
        .domain_hint
        .unwrap_or_else(|| vec![(-1.0, 1.0); dim]);
    let mut out = Vec::with_capacity(count);
    for k in &entry.labels.kinks {
        for d in dirs.iter().take(2 * dim) {
            if out.len() < count {
                out.push((k.clone(), d.clone()));
            }
        }
    }
    let cube = ball_points(dim, 8 * count + 1, seed.wrapping_add(17));
    let mut i = 0;
    for p in cube.iter().skip(1) {
        if out.len() >= count {
            break;
        }
        let x: Vec<f64> = p
            .iter()
            .zip(&boxed)
            .map(|(c, (lo, hi))| lo + 0.5 * (c + 1.0) * (hi - lo))
            .collect();
        if entry.eval(&x).is_finite() {
            out.push((x, dirs[i % dirs.len()].clone()));
            i += 1;
        }
    }
    out
}

/// A machine-checkable statement about a fixture.
#[derive(Clone, Debug, PartialEq)]
pub enum Fact {
    /// `f^r(x; u) = value`.
    Radial { x: Vec<f64>, u: Vec<f64>, value: ExtReal },
    /// `f(1) - f(0) = value` for a function on `[0, 1]`.
    Increment { value: f64 },
    /// A mean value conclusion that fails for the pair (`phi`, `gamma`);
    /// `phi: None` is the zero function.
    MvtGap {
        phi: Option<String>,
        gamma: String,
        phi_increment: f64,
        gamma_increment: f64,
        breached: &'static str,
    },
    UpperSemismooth { x: Vec<f64>, u: Vec<f64>, holds: bool },
    StrictlyUpperSemismooth { x: Vec<f64>, u: Vec<f64>, holds: bool },
    Mifflin { x: Vec<f64>, u: Vec<f64>, holds: bool },
    RadiallyAccessible { x: Vec<f64>, u: Vec<f64>, holds: bool },
    /// `f^r` recovered from the exact subdifferential equals `value`.
    Recovered { x: Vec<f64>, u: Vec<f64>, full: bool, value: ExtReal },
}

#[derive(Clone, Debug)]
pub struct Fixture {
    pub entry: CatalogueEntry,
    pub fact: Fact,
    pub statement: String,
}

fn fixture(name: &str, fact: Fact, statement: &str) -> Fixture {
    Fixture {
        entry: get(name).expect("registered name"),
        fact,
        statement: statement.to_string(),
    }
}

/// The facts the fixtures are built to exhibit.
pub fn paper_fixture_suite() -> Vec<Fixture> {
    let (o, p, m) = (vec![0.0], vec![1.0], vec![-1.0]);
    vec![
        fixture("neg_abs", Fact::Radial { x: o.clone(), u: p.clone(), value: ext(-1.0) }, "f^r(0; 1) = -1"),
        fixture("neg_abs", Fact::Radial { x: o.clone(), u: vec![-2.0], value: ext(-2.0) }, "f^r(0; -2) = -2"),
        fixture("sqrt_abs", Fact::Radial { x: o.clone(), u: p.clone(), value: ExtReal::PosInf }, "f^r(0; 1) = +inf"),
        fixture("jump_phi", Fact::Radial { x: o.clone(), u: p.clone(), value: ExtReal::PosInf }, "phi^r(0; +1) = +inf"),
        fixture("sqrt_gamma", Fact::Radial { x: o.clone(), u: p.clone(), value: ExtReal::PosInf }, "gamma^r(0; +1) = +inf"),
        fixture("step_gamma", Fact::Increment { value: -1.0 }, "gamma(1) - gamma(0) = -1"),
        fixture("jump_phi", Fact::Increment { value: 2.0 }, "phi(1) - phi(0) = 2"),
        fixture(
            "jump_phi",
            Fact::MvtGap {
                phi: Some("jump_phi".to_string()),
                gamma: "sqrt_gamma".to_string(),
                phi_increment: 2.0,
                gamma_increment: 1.0,
                breached: "finiteness",
            },
            "phi(1) - phi(0) = 2 > gamma(1) - gamma(0) = 1 with infinite radial derivatives at 0",
        ),
        fixture(
            "step_gamma",
            Fact::MvtGap {
                phi: None,
                gamma: "step_gamma".to_string(),
                phi_increment: 0.0,
                gamma_increment: -1.0,
                breached: "semicontinuity",
            },
            "phi = 0: phi(1) - phi(0) = 0 > gamma(1) - gamma(0) = -1 with gamma not usc at 1/2",
        ),
        fixture("neg_abs", Fact::UpperSemismooth { x: o.clone(), u: p.clone(), holds: true }, "upper semismooth at 0 from 1"),
        fixture("neg_abs", Fact::UpperSemismooth { x: o.clone(), u: m.clone(), holds: true }, "upper semismooth at 0 from -1"),
        fixture(
            "neg_abs",
            Fact::StrictlyUpperSemismooth { x: o.clone(), u: p.clone(), holds: false },
            "not strictly upper semismooth at 0 from 1",
        ),
        fixture("neg_abs", Fact::Recovered { x: o.clone(), u: p.clone(), full: false, value: ext(-1.0) }, "directional recovery gives -1"),
        fixture("neg_abs", Fact::Recovered { x: o.clone(), u: p.clone(), full: true, value: ext(1.0) }, "full recovery gives |u| = 1"),
        fixture("abs", Fact::StrictlyUpperSemismooth { x: o.clone(), u: p.clone(), holds: true }, "convex, so strictly upper semismooth"),
        fixture("max2d", Fact::StrictlyUpperSemismooth { x: vec![0.0, 0.0], u: vec![1.0, 0.0], holds: true }, "convex, so strictly upper semismooth"),
        fixture("sqrt_abs", Fact::UpperSemismooth { x: o.clone(), u: p.clone(), holds: true }, "upper semismooth at 0 from 1 with f^r = +inf"),
        fixture("sqrt_abs", Fact::RadiallyAccessible { x: o.clone(), u: p.clone(), holds: true }, "radially accessible at 0 from 1"),
        fixture("half_dom", Fact::RadiallyAccessible { x: o.clone(), u: m.clone(), holds: false }, "not radially accessible at 0 from -1"),
        fixture("osc", Fact::UpperSemismooth { x: o.clone(), u: p.clone(), holds: false }, "not upper semismooth at 0 from 1"),
        fixture("osc", Fact::Mifflin { x: o.clone(), u: p.clone(), holds: false }, "not Mifflin semismooth at 0"),
        fixture("abs", Fact::Mifflin { x: o, u: p, holds: true }, "Mifflin semismooth at 0"),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::subdiff::support;

    #[test]
    fn registry_examples() {
        let e = get("neg_abs").unwrap();
        assert_eq!(e.exact_radial(&[0.0], &[1.0]).unwrap(), ext(-1.0));
        assert_eq!(get("sqrt_abs").unwrap().exact_radial(&[0.0], &[1.0]).unwrap(), ExtReal::PosInf);
        let g = get("step_gamma").unwrap();
        assert_eq!(g.eval(&[0.25]), ext(1.0));
        assert_eq!(g.eval(&[0.75]), ext(0.0));
        assert!(matches!(get("nope"), Err(Error::Lookup(_))));
    }

    #[test]
    fn labels_match_metadata() {
        for e in all() {
            let m = e.function.meta();
            assert_eq!(e.labels.convex, m.convex, "{}", e.name);
            assert_eq!(e.labels.lipschitz, m.locally_lipschitz, "{}", e.name);
        }
        assert!(get("step_gamma").unwrap().labels.usc_counterexample);
    }

    #[test]
    fn exact_subdiff_is_empty_outside_domain() {
        let e = get("half_dom").unwrap();
        assert!(e.exact_subdiff().at(&[-1.0]).unwrap().is_empty());
        let s = e.exact_subdiff().at(&[0.0]).unwrap();
        assert_eq!(support(&s, &[-1.0]).unwrap(), ExtReal::PosInf);
    }

    #[test]
    fn shift_keeps_derivatives() {
        let e = get("abs_plus_square").unwrap().shifted(3.0);
        assert_eq!(e.eval(&[1.0]), ext(5.0));
        assert_eq!(e.exact_radial(&[0.0], &[-1.0]).unwrap(), ext(1.0));
    }

    #[test]
    fn samples_lie_in_the_domain() {
        for e in all() {
            let pts = sample_points(&e, 24, 3);
            assert_eq!(pts.len(), 24, "{}", e.name);
            assert!(pts.iter().all(|(x, _)| e.eval(x).is_finite()));
        }
    }

    #[test]
    fn neg_l1_vertices() {
        let e = get("neg_l1_2d").unwrap();
        let s = e.exact_subdiff().at(&[0.0, 0.0]).unwrap();
        assert_eq!(support(&s, &[1.0, 1.0]).unwrap(), ext(2.0));
        let s = e.exact_subdiff().at(&[0.0, 1.0]).unwrap();
        assert_eq!(support(&s, &[0.0, 1.0]).unwrap(), ext(-1.0));
    }
}
