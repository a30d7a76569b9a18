use std::time::Instant;

use subsmooth_core::catalogue::{get, CatalogueEntry};
use subsmooth_core::semismooth::{
    classify, duality_check, is_dir_approx_convex, is_dir_lipschitz, is_mifflin_semismooth, is_radially_accessible,
    is_strictly_upper_semismooth, is_upper_semismooth, radial_stability_check, recovered_radial, Mode, RadialSource,
    RecoveryConfig,
};
use subsmooth_core::subderiv::DirectionalSamplingConfig;
use subsmooth_core::{ExtReal, GridConfig, Status};

fn close(v: ExtReal, want: f64, tol: f64) -> bool {
    v.distance(ExtReal::Finite(want)) <= tol
}

fn entry(name: &str) -> CatalogueEntry {
    get(name).unwrap()
}

fn recover(name: &str, x: &[f64], u: &[f64], mode: Mode) -> ExtReal {
    let e = entry(name);
    let cfg = RecoveryConfig::default().with_mode(mode);
    recovered_radial(RadialSource::Oracle(e.exact_subdiff()), x, u, &cfg).unwrap().value
}

#[test]
fn recovery_from_exact_subdifferentials() {
    assert!(close(recover("abs", &[0.0], &[1.0], Mode::Directional), 1.0, 1e-6));
    assert!(close(recover("neg_abs", &[0.0], &[1.0], Mode::Directional), -1.0, 1e-6));
    assert!(close(recover("neg_abs", &[0.0], &[1.0], Mode::Full), 1.0, 1e-6));
    // the derivative 2x sin(1/x) - cos(1/x) has limsup 1 along x -> 0+
    let v = recover("osc", &[0.0], &[1.0], Mode::Directional);
    assert!(close(v, 1.0, 1e-3), "{v}");
}

#[test]
fn recovery_from_function_values() {
    let e = entry("neg_abs");
    let cfg = RecoveryConfig::default();
    let r = recovered_radial(RadialSource::Function(e.function.as_ref()), &[0.0], &[1.0], &cfg).unwrap();
    assert!(close(r.value, -1.0, 1e-5), "{}", r.value);
    let r = recovered_radial(RadialSource::Function(e.function.as_ref()), &[0.0], &[1.0], &cfg.with_mode(Mode::Full)).unwrap();
    assert!(close(r.value, 1.0, 1e-5), "{}", r.value);
}

#[test]
fn convex_recovery_matches_closed_forms() {
    let cases: [(&str, &[f64], &[f64]); 9] = [
        ("abs", &[0.0], &[1.0]),
        ("abs", &[0.0], &[-1.0]),
        ("abs", &[0.4], &[-1.0]),
        ("relu", &[0.0], &[1.0]),
        ("relu", &[0.0], &[-1.0]),
        ("max2d", &[0.0, 0.0], &[1.0, 0.0]),
        ("max2d", &[0.0, 0.0], &[-1.0, 0.5]),
        ("half_dom", &[0.0], &[1.0]),
        ("half_dom", &[0.0], &[-1.0]),
    ];
    for (name, x, u) in cases {
        let want = entry(name).exact_radial(x, u).unwrap();
        let got = recover(name, x, u, Mode::Full);
        assert!(got.distance(want) <= 1e-4, "{name} at {x:?} along {u:?}: {got} vs {want}");
    }
}

#[test]
fn infinite_recovery_cases() {
    assert_eq!(recover("sqrt_abs", &[0.0], &[1.0], Mode::Full), ExtReal::PosInf);
    assert_eq!(recover("sqrt_abs", &[0.0], &[1.0], Mode::Directional), ExtReal::PosInf);
    assert_eq!(recover("neg_sqrt_abs", &[0.0], &[1.0], Mode::Directional), ExtReal::NegInf);
}

#[test]
fn duality_examples() {
    let cfg = RecoveryConfig::default();
    let abs = entry("abs");
    let v = duality_check(abs.function.as_ref(), abs.exact_subdiff(), &[0.0], &[1.0], &[1.0], 0.0, &cfg).unwrap();
    assert_eq!(v.status, Status::Holds, "{v:?}");
    let neg = entry("neg_abs");
    let v = duality_check(neg.function.as_ref(), neg.exact_subdiff(), &[0.0], &[1.0], &[0.0], 0.0, &cfg).unwrap();
    assert_eq!(v.status, Status::Holds, "{v:?}");
    let v = duality_check(neg.function.as_ref(), neg.exact_subdiff(), &[0.0], &[1.0], &[1.0], 2.0, &cfg).unwrap();
    assert_eq!(v.status, Status::Holds, "{v:?}");
}

#[test]
fn accessibility_examples() {
    let g = GridConfig::default();
    let half = entry("half_dom");
    assert!(is_radially_accessible(half.function.as_ref(), &[0.0], &[1.0], &g).unwrap().is_holds());
    assert!(is_radially_accessible(half.function.as_ref(), &[0.0], &[-1.0], &g).unwrap().is_fails());
    let s = entry("sqrt_abs");
    assert!(is_radially_accessible(s.function.as_ref(), &[0.0], &[1.0], &g).unwrap().is_holds());
}

#[test]
fn radial_stability_examples() {
    let g = GridConfig::default();
    for name in ["abs", "neg_abs", "sqrt_abs"] {
        let e = entry(name);
        let v = radial_stability_check(e.function.as_ref(), &[0.0], &[1.0], &g).unwrap();
        assert!(v.is_holds(), "{name}: {v:?}");
    }
}

#[test]
fn semismooth_examples() {
    let cfg = RecoveryConfig::default();
    let check = |name: &str, x: &[f64], u: &[f64], strict: bool, want: Status| {
        let e = entry(name);
        let f = e.function.as_ref();
        let v = if strict {
            is_strictly_upper_semismooth(f, Some(e.exact_subdiff()), x, u, &cfg)
        } else {
            is_upper_semismooth(f, Some(e.exact_subdiff()), x, u, &cfg)
        }
        .unwrap();
        assert_eq!(v.status, want, "{name} strict={strict}: {v:?}");
    };
    check("neg_abs", &[0.0], &[1.0], false, Status::Holds);
    check("osc", &[0.0], &[1.0], false, Status::Fails);
    check("sqrt_abs", &[0.0], &[1.0], false, Status::Holds);
    check("abs", &[0.0], &[1.0], true, Status::Holds);
    check("neg_abs", &[0.0], &[1.0], true, Status::Fails);
    check("max2d", &[0.0, 0.0], &[1.0, 0.0], true, Status::Holds);
}

#[test]
fn semismooth_without_oracle() {
    let cfg = RecoveryConfig::default();
    let e = entry("neg_abs");
    let v = is_upper_semismooth(e.function.as_ref(), None, &[0.0], &[1.0], &cfg).unwrap();
    assert!(v.is_holds(), "{v:?}");
    let v = is_strictly_upper_semismooth(e.function.as_ref(), None, &[0.0], &[1.0], &cfg).unwrap();
    assert!(v.is_fails(), "{v:?}");
}

#[test]
fn mifflin_examples() {
    let cfg = RecoveryConfig::default();
    for (name, want) in [("abs", Status::Holds), ("neg_abs", Status::Holds), ("osc", Status::Fails)] {
        let e = entry(name);
        let v = is_mifflin_semismooth(e.function.as_ref(), e.exact_subdiff(), &[0.0], &[1.0], &cfg).unwrap();
        assert_eq!(v.status, want, "{name}: {v:?}");
    }
    let s = entry("sqrt_abs");
    assert!(is_mifflin_semismooth(s.function.as_ref(), s.exact_subdiff(), &[0.0], &[1.0], &cfg).is_err());
}

#[test]
fn approximate_convexity_examples() {
    let cfg = DirectionalSamplingConfig::default();
    let abs = entry("abs");
    for x in [-0.5, 0.0, 0.7] {
        assert!(is_dir_approx_convex(abs.function.as_ref(), &[x], &[1.0], 0.01, &cfg).unwrap().is_holds());
    }
    let osc = entry("osc");
    assert!(is_dir_approx_convex(osc.function.as_ref(), &[0.0], &[1.0], 0.1, &cfg).unwrap().is_fails());
    let neg = entry("neg_abs");
    assert!(is_dir_approx_convex(neg.function.as_ref(), &[1.0], &[1.0], 0.01, &cfg).unwrap().is_holds());
}

#[test]
fn dir_lipschitz_examples() {
    let cfg = DirectionalSamplingConfig::default();
    assert!(is_dir_lipschitz(entry("abs").function.as_ref(), &[0.0], &[1.0], &cfg).unwrap().is_holds());
    assert!(is_dir_lipschitz(entry("sqrt_abs").function.as_ref(), &[0.0], &[1.0], &cfg).unwrap().is_fails());
    let v = is_dir_lipschitz(entry("half_dom").function.as_ref(), &[0.0], &[1.0], &cfg).unwrap();
    assert!(v.is_holds(), "{v:?}");
}

#[test]
fn classification_table() {
    let start = Instant::now();
    let cfg = RecoveryConfig::default();
    let abs = classify(&entry("abs"), &[0.0], &[1.0], &cfg).unwrap();
    assert!(abs.strictly_upper_semismooth.is_holds());
    assert!(abs.mifflin_semismooth.is_holds());
    let neg = classify(&entry("neg_abs"), &[0.0], &[1.0], &cfg).unwrap();
    assert!(neg.upper_semismooth.is_holds());
    assert!(neg.strictly_upper_semismooth.is_fails());
    assert!(neg.mifflin_semismooth.is_holds());
    let osc = classify(&entry("osc"), &[0.0], &[1.0], &cfg).unwrap();
    assert!(osc.upper_semismooth.is_fails(), "{:?}", osc.upper_semismooth);
    assert!(osc.mifflin_semismooth.is_fails());
    assert!(osc.dir_approx_convex.is_fails());
    let s = classify(&entry("sqrt_abs"), &[0.0], &[1.0], &cfg).unwrap();
    assert!(s.upper_semismooth.is_holds());
    assert_eq!(s.direct_radial, ExtReal::PosInf);
    for c in [&abs, &neg, &osc, &s] {
        assert!(!c.consistency.is_fails(), "{:?}", c.consistency);
    }
    assert!(start.elapsed().as_secs() < 60);
}
