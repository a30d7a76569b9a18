mod common;

use common::random_psi;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use subsmooth_core::catalogue::get;
use subsmooth_core::meanvalue::{
    mvi_witness, mvt_continuous_check, mvt_semicontinuous_check, Breach, Continuity, Fn01, Required, Which,
};
use subsmooth_core::{ExtReal, GridConfig, Status};

fn entry(name: &str, c: Continuity) -> Fn01 {
    Fn01::from_scalar(get(name).unwrap().function, c).unwrap()
}

#[test]
fn random_witnesses_have_nonnegative_slacks() {
    let cfg = GridConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 0..100 {
        let psi = random_psi(&mut rng);
        let lambda = psi.eval(1.0).to_f64() - psi.eval(0.0).to_f64();
        let w = mvi_witness(&psi, lambda, &cfg).unwrap();
        assert!(w.t0 >= 0.0 && w.t0 < 1.0);
        assert!(w.slack_position >= -1e-6 && w.slack_derivative >= -1e-6, "case {n}: {w:?}");
    }
}

#[test]
fn step_counterexample_is_attributed_to_semicontinuity() {
    let phi = Fn01::new(Continuity::Continuous, |_| 0.0);
    let gamma = entry("step_gamma", Continuity::None);
    let out = mvt_semicontinuous_check(&phi, &gamma, &GridConfig::default()).unwrap();
    assert_eq!(out.phi_increment, ExtReal::Finite(0.0));
    assert_eq!(out.gamma_increment, ExtReal::Finite(-1.0));
    assert!(!out.conclusion_holds);
    assert_eq!(
        out.breaches,
        vec![Breach::Semicontinuity {
            which: Which::Gamma,
            required: Required::Upper,
            at: 0.5
        }]
    );
    assert_eq!(out.verdict.status, Status::Inconclusive);
}

#[test]
fn jump_counterexample_is_attributed_to_finiteness() {
    let phi = entry("jump_phi", Continuity::Lsc);
    let gamma = entry("sqrt_gamma", Continuity::Continuous);
    let out = mvt_semicontinuous_check(&phi, &gamma, &GridConfig::default()).unwrap();
    assert_eq!(out.phi_increment, ExtReal::Finite(2.0));
    assert_eq!(out.gamma_increment, ExtReal::Finite(1.0));
    assert!(!out.conclusion_holds);
    assert_eq!(out.breaches, vec![Breach::Finiteness { which: Which::Phi, at: 0.0 }]);
    assert_eq!(out.verdict.status, Status::Inconclusive);
}

#[test]
fn affine_pair_holds() {
    let phi = Fn01::new(Continuity::Continuous, |t| t);
    let gamma = Fn01::new(Continuity::Continuous, |t| 2.0 * t);
    let out = mvt_semicontinuous_check(&phi, &gamma, &GridConfig::default()).unwrap();
    assert_eq!(out.verdict.status, Status::Holds, "{:?}", out.verdict);
}

#[test]
fn continuous_version_examples() {
    let cfg = GridConfig::default();
    let phi = Fn01::new(Continuity::Continuous, |t| -(t - 0.5f64).abs());
    let zero = Fn01::new(Continuity::Continuous, |_| 0.0);
    let out = mvt_continuous_check(&phi, &zero, &[0.5], &cfg).unwrap();
    assert_eq!(out.verdict.status, Status::Inconclusive);
    assert!(out.breaches.iter().all(|b| matches!(b, Breach::Comparison { at, .. } if *at < 0.5)));

    let phi = Fn01::new(Continuity::Continuous, |t| t * (1.0 - t));
    let gamma = Fn01::new(Continuity::Continuous, |t| t);
    assert_eq!(mvt_continuous_check(&phi, &gamma, &[], &cfg).unwrap().verdict.status, Status::Holds);

    assert_eq!(mvt_continuous_check(&phi, &phi, &[], &cfg).unwrap().verdict.status, Status::Holds);
    // sqrt has infinite derivatives at 0, so 0 must be in C
    let s = entry("sqrt_gamma", Continuity::Continuous);
    assert_eq!(mvt_continuous_check(&s, &s, &[], &cfg).unwrap().verdict.status, Status::Inconclusive);
    let out = mvt_continuous_check(&s, &s, &[0.0], &cfg).unwrap();
    assert_eq!(out.verdict.status, Status::Holds, "{:?}", out.breaches);
}

#[test]
fn infinite_start_is_rejected() {
    let phi = Fn01::new(Continuity::Lsc, |t| if t == 0.0 { f64::INFINITY } else { 0.0 });
    let zero = Fn01::new(Continuity::Continuous, |_| 0.0);
    assert!(mvt_semicontinuous_check(&phi, &zero, &GridConfig::default()).is_err());
}
