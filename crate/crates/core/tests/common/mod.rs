#![allow(dead_code)]

use koopman_rkhs::{GramSystem, KernelSpec, MaternNu, PointSet};
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn m52() -> KernelSpec {
    KernelSpec::matern(MaternNu::FiveHalves, 0.1).unwrap()
}

/// Uniform points in the unit cube.
pub fn random_points(rng: &mut ChaCha8Rng, n: usize, dim: usize) -> PointSet {
    let coords = (0..n * dim).map(|_| rng.gen::<f64>()).collect();
    PointSet::from_flat(dim, coords).unwrap()
}

/// Uniform points in the unit cube, rejecting any closer than `min_sep` to an earlier one.
pub fn separated_points(rng: &mut ChaCha8Rng, n: usize, dim: usize, min_sep: f64) -> PointSet {
    let mut set = PointSet::empty(dim).unwrap();
    while set.len() < n {
        let p: Vec<f64> = (0..dim).map(|_| rng.gen::<f64>()).collect();
        if set.iter().all(|q| dist(q, &p) >= min_sep) {
            set.push(&p).unwrap();
        }
    }
    set
}

pub fn random_values(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Vec<f64> {
    (0..n)
        .map(|_| scale * (2.0 * rng.gen::<f64>() - 1.0))
        .collect()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Plain double loop: max over reference of min over samples.
pub fn brute_fill_distance(samples: &PointSet, reference: &PointSet) -> f64 {
    let mut worst = 0.0f64;
    for x in reference.iter() {
        let nearest = samples
            .iter()
            .map(|s| dist(x, s))
            .fold(f64::INFINITY, f64::min);
        worst = worst.max(nearest);
    }
    worst
}

pub fn gram_dmatrix(sys: &GramSystem) -> DMatrix<f64> {
    let n = sys.len();
    DMatrix::from_row_slice(n, n, sys.gram_matrix())
}

pub fn min_eigenvalue(sys: &GramSystem) -> f64 {
    gram_dmatrix(sys).symmetric_eigenvalues().min()
}

/// `(K + jitter I)^{-1} y` through an explicit LU inverse.
pub fn inverse_solve(sys: &GramSystem, y: &[f64]) -> Vec<f64> {
    let n = sys.len();
    let a = gram_dmatrix(sys) + DMatrix::identity(n, n) * sys.jitter();
    let inv = a.try_inverse().expect("invertible");
    (inv * DVector::from_column_slice(y))
        .iter()
        .copied()
        .collect()
}

pub fn sup_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Max relative difference, with the reference's sup norm as scale.
pub fn rel_diff(a: &[f64], b: &[f64]) -> f64 {
    let scale = sup_norm(b).max(f64::MIN_POSITIVE);
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
        / scale
}
