//! Acceptance criteria. Prints one line per criterion and exits non-zero if
//! any of them fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use subsmooth_core::catalogue::get;
use subsmooth_core::determination::{determination_experiment, inclusion_by_point, recover_increment, TheoremMode};
use subsmooth_core::meanvalue::{mvi_witness, mvt_semicontinuous_check, Breach, Continuity, Fn01};
use subsmooth_core::semismooth::{classify, recovered_radial, Mode, RadialSource, RecoveryConfig};
use subsmooth_core::suite::{cases, convex_recovery_points, segment, uniform};
use subsmooth_core::{ExtReal, GridConfig};

type Outcome = Result<String, String>;

fn recover(name: &str, x: &[f64], u: &[f64], mode: Mode) -> Result<ExtReal, String> {
    let e = get(name).map_err(|e| e.to_string())?;
    let cfg = RecoveryConfig::default().with_mode(mode);
    recovered_radial(RadialSource::Oracle(e.exact_subdiff()), x, u, &cfg)
        .map(|r| r.value)
        .map_err(|e| e.to_string())
}

fn example_values() -> Outcome {
    let d = recover("neg_abs", &[0.0], &[1.0], Mode::Directional)?;
    let f = recover("neg_abs", &[0.0], &[1.0], Mode::Full)?;
    let ok = d.distance(ExtReal::Finite(-1.0)) <= 1e-4 && f.distance(ExtReal::Finite(1.0)) <= 1e-4;
    let msg = format!("directional {d}, full {f}");
    if ok { Ok(msg) } else { Err(msg) }
}

fn counterexamples() -> Outcome {
    let cfg = GridConfig::default();
    let fn01 = |n: &str, c| Fn01::from_scalar(get(n).unwrap().function, c).unwrap();
    let zero = Fn01::new(Continuity::Continuous, |_| 0.0);
    let step = mvt_semicontinuous_check(&zero, &fn01("step_gamma", Continuity::None), &cfg).map_err(|e| e.to_string())?;
    let jump = mvt_semicontinuous_check(&fn01("jump_phi", Continuity::None), &fn01("sqrt_gamma", Continuity::None), &cfg)
        .map_err(|e| e.to_string())?;
    let gaps = [step.phi_increment, step.gamma_increment, jump.phi_increment, jump.gamma_increment];
    let want = [0.0, -1.0, 2.0, 1.0].map(ExtReal::Finite);
    let blamed = |o: &subsmooth_core::meanvalue::MvtOutcome, semi: bool| {
        !o.breaches.is_empty()
            && o.breaches.iter().all(|b| match b {
                Breach::Semicontinuity { .. } => semi,
                Breach::Finiteness { .. } => !semi,
                Breach::Comparison { .. } => false,
            })
    };
    let ok = gaps == want && !step.conclusion_holds && !jump.conclusion_holds && blamed(&step, true) && blamed(&jump, false);
    let msg = format!(
        "increments {:?}; breaches [{}] and [{}]",
        gaps.map(|g| g.to_f64()),
        step.breaches.iter().map(|b| b.to_string()).collect::<Vec<_>>().join("; "),
        jump.breaches.iter().map(|b| b.to_string()).collect::<Vec<_>>().join("; "),
    );
    if ok { Ok(msg) } else { Err(msg) }
}

fn suite_group(group: &str) -> Outcome {
    let cfg = RecoveryConfig::default();
    let all = cases(Some(group)).map_err(|e| e.to_string())?;
    let bad: Vec<String> = all
        .iter()
        .filter_map(|c| {
            let v = c.run(&cfg);
            (!v.is_holds()).then(|| format!("{} ({})", c.name, v.status.as_str()))
        })
        .collect();
    if bad.is_empty() {
        Ok(format!("{} cases hold", all.len()))
    } else {
        Err(bad.join("; "))
    }
}

fn lattice() -> Outcome {
    // fails is the only disqualifying outcome here
    let cfg = RecoveryConfig::default();
    let all = cases(Some("subderivatives")).map_err(|e| e.to_string())?;
    let mut inconclusive = 0;
    let mut bad = Vec::new();
    for c in &all {
        let v = c.run(&cfg);
        if v.is_fails() {
            bad.push(format!("{}: {:?}", c.name, v.notes));
        } else if !v.is_holds() {
            inconclusive += 1;
        }
    }
    if bad.is_empty() {
        Ok(format!("{} entries, no failures ({inconclusive} with inconclusive points)", all.len()))
    } else {
        Err(bad.join("; "))
    }
}

fn convex_recovery() -> Outcome {
    let mut worst = 0.0f64;
    for (name, x, u) in convex_recovery_points() {
        let e = get(name).map_err(|e| e.to_string())?;
        let want = e.exact_radial(&x, &u).map_err(|e| e.to_string())?;
        let got = recover(name, &x, &u, Mode::Full)?;
        let gap = got.distance(want);
        if gap > 1e-4 {
            return Err(format!("{name} at {x:?} along {u:?}: {got} vs {want}"));
        }
        worst = worst.max(gap);
    }
    let s = recover("sqrt_abs", &[0.0], &[1.0], Mode::Full)?;
    let n = recover("neg_sqrt_abs", &[0.0], &[1.0], Mode::Directional)?;
    let n_full = recover("neg_sqrt_abs", &[0.0], &[1.0], Mode::Full)?;
    let msg = format!(
        "max gap {worst:.2e}; sqrt_abs full {s}; neg_sqrt_abs directional {n} (full mode gives {n_full})"
    );
    if s == ExtReal::PosInf && n == ExtReal::NegInf { Ok(msg) } else { Err(msg) }
}

fn classification() -> Outcome {
    let cfg = RecoveryConfig::default();
    let c = |n: &str| classify(&get(n).unwrap(), &[0.0], &[1.0], &cfg).map_err(|e| e.to_string());
    let (abs, neg, osc, s) = (c("abs")?, c("neg_abs")?, c("osc")?, c("sqrt_abs")?);
    let rows = [
        ("abs strict", abs.strictly_upper_semismooth.is_holds()),
        ("neg_abs USS", neg.upper_semismooth.is_holds()),
        ("neg_abs not strict", neg.strictly_upper_semismooth.is_fails()),
        ("osc not USS", osc.upper_semismooth.is_fails()),
        ("osc not Mifflin", osc.mifflin_semismooth.is_fails()),
        ("sqrt_abs USS", s.upper_semismooth.is_holds()),
        ("sqrt_abs f^r = +inf", s.direct_radial == ExtReal::PosInf),
    ];
    let bad: Vec<&str> = rows.iter().filter(|r| !r.1).map(|r| r.0).collect();
    if bad.is_empty() { Ok(format!("{} rows match", rows.len())) } else { Err(bad.join(", ")) }
}

fn witnesses() -> Outcome {
    let cfg = GridConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = f64::INFINITY;
    for n in 0..500 {
        let psi = common::random_psi(&mut rng);
        let lambda = psi.eval(1.0).to_f64() - psi.eval(0.0).to_f64();
        let w = mvi_witness(&psi, lambda, &cfg).map_err(|e| format!("case {n}: {e}"))?;
        let m = w.slack_position.min(w.slack_derivative);
        if m < -1e-6 {
            return Err(format!("case {n}: {w:?}"));
        }
        worst = worst.min(m);
    }
    Ok(format!("500 witnesses, smallest slack {worst:.3e}"))
}

fn determination() -> Outcome {
    let cfg = RecoveryConfig::default();
    let g = get("abs_plus_square").unwrap();
    let f = g.shifted(3.0);
    let r = determination_experiment(&segment(&f, &g, -1.0, 1.0, TheoremMode::Continuous), &uniform(-1.0, 1.0, 21), &cfg)
        .map_err(|e| e.to_string())?;
    let pair_ok = r.inclusion_holds.is_holds()
        && r.hypothesis_51.is_holds()
        && (r.const_estimate - 3.0).abs() <= 1e-3
        && r.const_deviation <= 1e-3;
    let (relu, abs) = (get("relu").unwrap(), get("abs").unwrap());
    let pts = uniform(-1.0, 1.0, 21);
    let by = inclusion_by_point(relu.exact_subdiff(), abs.exact_subdiff(), &pts, &cfg.sampling.base).map_err(|e| e.to_string())?;
    let left = pts.iter().zip(&by).filter(|(x, _)| x[0] < 0.0);
    let relu_ok = left.clone().all(|(_, v)| v.is_fails());
    let msg = format!(
        "const {:.6} deviation {:.2e}; relu/abs inclusion fails at {}/{} points left of 0",
        r.const_estimate,
        r.const_deviation,
        left.clone().filter(|(_, v)| v.is_fails()).count(),
        left.count()
    );
    if pair_ok && relu_ok { Ok(msg) } else { Err(msg) }
}

fn reconstruction() -> Outcome {
    let cfg = RecoveryConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut worst = 0.0f64;
    for name in ["abs", "relu", "square"] {
        let g = get(name).unwrap();
        for _ in 0..10 {
            let (a, b) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let r = recover_increment(g.exact_subdiff(), &[a], &[b], &cfg).map_err(|e| format!("{name} [{a}, {b}]: {e}"))?;
            let gap = (r.increment - (g.eval(&[b]).to_f64() - g.eval(&[a]).to_f64())).abs();
            if gap > 1e-3 {
                return Err(format!("{name} on [{a}, {b}]: gap {gap}"));
            }
            worst = worst.max(gap);
        }
    }
    Ok(format!("30 segments, max gap {worst:.2e}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, u64); 10] = [
        ("example recovered values", example_values, 1),
        ("mean value counterexamples", counterexamples, 1),
        ("inequality lattice", lattice, 30),
        ("convex recovery", convex_recovery, 30),
        ("classification table", classification, 60),
        ("radial stability", || suite_group("semismooth"), 30),
        ("mean value witnesses", witnesses, 60),
        ("determination", determination, 60),
        ("reconstruction", reconstruction, 60),
        ("density scan", || suite_group("subdifferentials"), 10),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let took = start.elapsed();
        let over = took > Duration::from_secs(*limit);
        let (tag, detail) = match (&out, over) {
            (Ok(m), false) => ("PASS", m.clone()),
            (Ok(m), true) => ("FAIL", format!("{m}; over the {limit} s budget")),
            (Err(m), _) => ("FAIL", m.clone()),
        };
        if tag == "FAIL" {
            failed += 1;
        }
        println!("{tag} {:>2} {name} [{:.2} s]: {detail}", i + 1, took.as_secs_f64());
    }
    println!("{} of 10 criteria pass", 10 - failed);
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
