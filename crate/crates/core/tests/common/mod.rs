use rand::Rng;
use rand_chacha::ChaCha8Rng;

use subsmooth_core::meanvalue::{Continuity, Fn01};

/// Random lsc piecewise quadratic on [0, 1]; interior pieces may be +inf.
pub fn random_psi(rng: &mut ChaCha8Rng) -> Fn01 {
    let k = rng.gen_range(1..=5);
    let mut cuts: Vec<f64> = (0..k).map(|_| rng.gen_range(0.02..0.98)).collect();
    cuts.sort_by(f64::total_cmp);
    let pieces: Vec<Option<[f64; 3]>> = (0..=k)
        .map(|i| {
            if i > 0 && i < k && rng.gen_bool(0.15) {
                None
            } else {
                Some([rng.gen_range(-2.0..2.0), rng.gen_range(-3.0..3.0), rng.gen_range(-4.0..4.0)])
            }
        })
        .collect();
    let piece = move |i: usize, t: f64| match pieces[i] {
        Some([a, b, c]) => a + b * t + c * t * t,
        None => f64::INFINITY,
    };
    Fn01::new(Continuity::Lsc, move |t| {
        let i = cuts.partition_point(|&c| c < t);
        if i < cuts.len() && cuts[i] == t {
            piece(i, t).min(piece(i + 1, t))
        } else {
            piece(i, t)
        }
    })
}
