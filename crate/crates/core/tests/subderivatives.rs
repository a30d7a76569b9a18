use subsmooth_core::catalogue::{self, get};
use subsmooth_core::grid::Divergence;
use subsmooth_core::subderiv::{
    clarke, clarke_rockafellar, directional, lattice_check, radial_lower, radial_upper, DirectionalSamplingConfig, Kind,
};
use subsmooth_core::{ExtReal, GridConfig, Status};

fn close(v: ExtReal, want: f64, tol: f64) -> bool {
    v.distance(ExtReal::Finite(want)) <= tol
}

#[test]
fn radial_examples() {
    let g = GridConfig::default();
    let e = radial_lower(get("abs").unwrap().function.as_ref(), &[0.0], &[1.0], &g).unwrap();
    assert!(close(e.liminf_est, 1.0, 1e-12));
    let e = radial_lower(get("sqrt_abs").unwrap().function.as_ref(), &[0.0], &[1.0], &g).unwrap();
    assert_eq!(e.divergent, Divergence::ToPosInf);
    assert_eq!(e.liminf_est, ExtReal::PosInf);
    let e = radial_lower(get("neg_abs").unwrap().function.as_ref(), &[0.0], &[-2.0], &g).unwrap();
    assert!(close(e.liminf_est, -2.0, 1e-12));
}

#[test]
fn radial_upper_examples() {
    let g = GridConfig::default();
    let e = radial_upper(get("abs").unwrap().function.as_ref(), &[0.0], &[1.0], &g).unwrap();
    assert!(close(e.limsup_est, 1.0, 1e-12));
    // closed form: the quotient is t sin(1/t), bounded by t
    let e = radial_upper(get("osc").unwrap().function.as_ref(), &[0.0], &[1.0], &g).unwrap();
    assert!(close(e.limsup_est, 0.0, 1e-6), "{:?}", e.limsup_est);
    let e = radial_upper(get("jump_phi").unwrap().function.as_ref(), &[0.0], &[1.0], &g).unwrap();
    assert_eq!(e.divergent, Divergence::ToPosInf);
    assert_eq!(e.limsup_est, ExtReal::PosInf);
}

#[test]
fn clarke_examples() {
    let cfg = DirectionalSamplingConfig::default();
    for (name, want) in [("neg_abs", 1.0), ("abs", 1.0), ("osc", 1.0)] {
        let f = get(name).unwrap().function;
        let e = clarke(f.as_ref(), &[0.0], &[1.0], &cfg).unwrap();
        assert!(close(e.limsup_est, want, 1e-3), "{name}: {:?}", e.limsup_est);
    }
}

#[test]
fn directional_examples() {
    let cfg = DirectionalSamplingConfig::default();
    let f = get("max2d").unwrap().function;
    let e = directional(f.as_ref(), &[0.0, 0.0], &[1.0, 0.0], &cfg).unwrap();
    assert!(close(e.liminf_est, 1.0, 1e-6), "{:?}", e.liminf_est);
    let f = get("abs").unwrap().function;
    let d = directional(f.as_ref(), &[0.0], &[1.0], &cfg).unwrap();
    let r = radial_lower(f.as_ref(), &[0.0], &[1.0], &cfg.base).unwrap();
    assert!(close(d.liminf_est, 1.0, 1e-6));
    assert!(d.liminf_est.distance(r.liminf_est) <= cfg.base.tol);
}

#[test]
fn clarke_rockafellar_examples() {
    let cfg = DirectionalSamplingConfig::default();
    for (name, want) in [("abs", 1.0), ("half_dom", 0.0), ("neg_abs", 1.0)] {
        let f = get(name).unwrap().function;
        let e = clarke_rockafellar(f.as_ref(), &[0.0], &[1.0], &cfg).unwrap();
        assert!(close(e.limsup_est, want, 1e-6), "{name}: {:?}", e.limsup_est);
    }
}

#[test]
fn lattice_examples() {
    let cfg = DirectionalSamplingConfig::default();
    let f = get("abs").unwrap().function;
    let r = lattice_check(f.as_ref(), &[0.3], &[1.0], &cfg).unwrap();
    assert_eq!(r.verdict.status, Status::Holds);
    for k in Kind::ALL {
        assert!(close(r.value(k).unwrap(), 1.0, 1e-6), "{k}");
    }

    let f = get("neg_abs").unwrap().function;
    let r = lattice_check(f.as_ref(), &[0.0], &[1.0], &cfg).unwrap();
    assert_eq!(r.verdict.status, Status::Holds);
    for k in [Kind::Directional, Kind::Radial, Kind::RadialUpper] {
        assert!(close(r.value(k).unwrap(), -1.0, 1e-6), "{k}");
    }
    for k in [Kind::Clarke, Kind::ClarkeRockafellar] {
        assert!(close(r.value(k).unwrap(), 1.0, 1e-6), "{k}");
    }

    let f = get("osc").unwrap().function;
    let r = lattice_check(f.as_ref(), &[0.0], &[1.0], &cfg).unwrap();
    assert_ne!(r.verdict.status, Status::Fails);
    assert!(close(r.value(Kind::Radial).unwrap(), 0.0, 1e-6));
    assert!(close(r.value(Kind::RadialUpper).unwrap(), 0.0, 1e-6));
    assert!(close(r.value(Kind::Clarke).unwrap(), 1.0, 1e-3));
}

#[test]
fn neg_l1_separates_dini_hadamard_from_clarke_rockafellar() {
    let cfg = DirectionalSamplingConfig::default();
    let f = get("neg_l1_2d").unwrap().function;
    let r = lattice_check(f.as_ref(), &[0.0, 0.0], &[1.0, 0.0], &cfg).unwrap();
    assert_eq!(r.verdict.status, Status::Holds);
    assert!(close(r.value(Kind::Directional).unwrap(), -1.0, 1e-6));
    assert!(close(r.value(Kind::Radial).unwrap(), -1.0, 1e-6));
    assert!(close(r.value(Kind::ClarkeRockafellar).unwrap(), 1.0, 1e-6));
}

#[test]
fn numeric_radial_matches_closed_forms_on_samples() {
    let g = GridConfig::default();
    for e in catalogue::all() {
        for (x, u) in catalogue::sample_points(&e, 24, 0) {
            let want = e.exact_radial(&x, &u).unwrap();
            let got = radial_lower(e.function.as_ref(), &x, &u, &g).unwrap();
            let ok = match want {
                ExtReal::Finite(_) => got.liminf_est.distance(want) <= 10.0 * g.tol,
                ExtReal::PosInf => got.divergent == Divergence::ToPosInf,
                ExtReal::NegInf => got.divergent == Divergence::ToNegInf,
            };
            assert!(ok, "{} at {x:?} along {u:?}: {:?} vs {want}", e.name, got.liminf_est);
        }
    }
}
