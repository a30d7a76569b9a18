//! Points and directions of R^n (n <= 5) plus deterministic sample sets.

use alloc::vec::Vec;
use core::ops::Deref;

use crate::error::{bail, Result};

/// Largest supported dimension.
pub const MAX_DIM: usize = 5;

/// A point or direction of R^n with `1 <= n <= MAX_DIM`.
#[derive(Clone, Debug, PartialEq)]
pub struct Vector(Vec<f64>);

impl Vector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        check_dim(coords.len())?;
        Ok(Vector(coords))
    }

    pub fn scalar(v: f64) -> Self {
        Vector(alloc::vec![v])
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::new(alloc::vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for Vector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<f64> for Vector {
    fn from(v: f64) -> Self {
        Vector::scalar(v)
    }
}

pub fn check_dim(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DIM {
        bail!(Contract, "dimension {n} outside 1..={MAX_DIM}");
    }
    Ok(())
}

pub fn same_dim(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() {
        bail!(Contract, "dimension mismatch: {} vs {}", a.len(), b.len());
    }
    Ok(())
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    libm::sqrt(dot(a, a))
}

pub fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// `a + k * b`
pub fn axpy(a: &[f64], k: f64, b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + k * y).collect()
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scaled(a: &[f64], k: f64) -> Vec<f64> {
    a.iter().map(|x| k * x).collect()
}

pub fn is_zero(a: &[f64]) -> bool {
    a.iter().all(|&v| v == 0.0)
}

const PRIMES: [u64; MAX_DIM] = [2, 3, 5, 7, 11];

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += f * (i % base) as f64;
        i /= base;
        f *= inv;
    }
    r
}

/// Halton point `index` of the cube `[-1, 1]^dim`, shifted by `seed`.
fn halton_cube(dim: usize, index: u64, seed: u64) -> Vec<f64> {
    let i = index + 1 + (seed % 1_000_003) * 97;
    (0..dim)
        .map(|k| 2.0 * radical_inverse(i, PRIMES[k]) - 1.0)
        .collect()
}

/// `count` deterministic points of the closed unit ball.
///
/// The first point is the origin; in one dimension the remaining points
/// fill `[-1, 1]` by a van der Corput sequence.
pub fn ball_points(dim: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return out;
    }
    out.push(alloc::vec![0.0; dim]);
    let mut index = 0;
    while out.len() < count {
        let mut p = halton_cube(dim, index, seed);
        index += 1;
        let r = norm(&p);
        if r > 1.0 {
            p.iter_mut().for_each(|c| *c /= r);
        }
        out.push(p);
    }
    out
}

/// The `2 * dim` signed axis directions followed by `extra` deterministic
/// unit vectors.
pub fn sphere_points(dim: usize, extra: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(2 * dim + extra);
    for k in 0..dim {
        for s in [1.0, -1.0] {
            let mut e = alloc::vec![0.0; dim];
            e[k] = s;
            out.push(e);
        }
    }
    let mut index = 0;
    let mut added = 0;
    while added < extra {
        let mut p = halton_cube(dim, index, seed);
        index += 1;
        let r = norm(&p);
        if r < 1e-3 {
            continue;
        }
        p.iter_mut().for_each(|c| *c /= r);
        out.push(p);
        added += 1;
    }
    out
}
