//! Oracles shared by the integration targets. Nothing here calls into the
//! crate's phase finder or polynomial code.

#![allow(dead_code)]

use nalgebra::DMatrix;
use opuc::cmv::CmvOperator;
use opuc::{Complex64, TAU};

/// Eigenangles of the dense matrix in `[0, 2π)`, sorted.
pub fn dense_eigenangles(c: &CmvOperator) -> Vec<f64> {
    let n = c.dim();
    let m = DMatrix::from_fn(n, n, |i, k| c.entry(i, k));
    let eig = m.schur().eigenvalues().expect("triangular Schur form");
    let mut args: Vec<f64> = eig.iter().map(|z| z.arg().rem_euclid(TAU)).collect();
    args.sort_by(f64::total_cmp);
    args
}

/// Smallest singular value of `C - I`.
pub fn dense_min_singular_shifted(c: &CmvOperator) -> f64 {
    let n = c.dim();
    let m = DMatrix::from_fn(n, n, |i, k| {
        c.entry(i, k) - if i == k { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) }
    });
    m.singular_values().min()
}

/// Distance on the circle between two angles.
pub fn circ_dist(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Angles of points, `[0, 2π)`, sorted.
pub fn sorted_args(points: &[Complex64]) -> Vec<f64> {
    let mut v: Vec<f64> = points.iter().map(|z| z.arg().rem_euclid(TAU)).collect();
    v.sort_by(f64::total_cmp);
    v
}

/// Largest distance between two equally long angle sets after matching
/// sorted order, allowing the wrap at 0 to rotate the labelling by one.
pub fn max_matched_dist(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let n = a.len();
    (0..n)
        .filter(|&s| s <= 1 || s + 1 >= n)
        .map(|s| (0..n).map(|i| circ_dist(a[i], b[(i + s) % n])).fold(0.0, f64::max))
        .fold(f64::INFINITY, f64::min)
}

/// Schur function of the constant sequence `α`: the root of
/// `ᾱz f² + (1 - z) f - α = 0` inside the unit disk.
pub fn schur_constant(alpha: Complex64, z: Complex64) -> Complex64 {
    let a = alpha.conj() * z;
    let b = Complex64::new(1.0, 0.0) - z;
    let c = -alpha;
    if a.norm() == 0.0 {
        return -c / b;
    }
    let disc = (b * b - 4.0 * a * c).sqrt();
    let r1 = (-b + disc) / (2.0 * a);
    let r2 = (-b - disc) / (2.0 * a);
    if r1.norm() < r2.norm() {
        r1
    } else {
        r2
    }
}

/// Schur function of `α_0, …, α_{n-1}` followed by the constant `tail`,
/// by backward composition `f ← (α_j + z f) / (1 + ᾱ_j z f)`.
pub fn schur_prefixed(alphas: &[Complex64], tail: Complex64, z: Complex64) -> Complex64 {
    let mut f = schur_constant(tail, z);
    for &a in alphas.iter().rev() {
        f = (a + z * f) / (1.0 + a.conj() * z * f);
    }
    f
}

/// `F = (1 + z f) / (1 - z f)`.
pub fn caratheodory(f: Complex64, z: Complex64) -> Complex64 {
    (1.0 + z * f) / (1.0 - z * f)
}
