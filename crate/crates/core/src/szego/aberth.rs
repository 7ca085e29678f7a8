//! Aberth–Ehrlich simultaneous root iteration.
//!
//! Iterates in double-double regardless of the input scalar: Horner
//! evaluation error then sits ~16 digits below the `f64` rounding of the
//! result, which is what ill-conditioned paraorthogonal coefficient arrays
//! need to resolve their unimodular roots to 1e-9.

use num_complex::{Complex, Complex64};
use num_traits::{One, Zero};

use crate::dd::{demote, DoubleDouble, Scalar};
use crate::error::{Error, Result};
use crate::TAU;

type Cdd = Complex<DoubleDouble>;

#[derive(Debug, Clone, Copy)]
pub struct AberthOptions {
    /// Residual tolerance relative to [`residual_scale`].
    pub tol: f64,
    pub max_iter: usize,
    /// Radius of the initial circle.
    pub seed_radius: f64,
}

impl Default for AberthOptions {
    fn default() -> Self {
        AberthOptions { tol: 1e-12, max_iter: 200, seed_radius: 0.9 }
    }
}

#[derive(Debug, Clone)]
pub struct RootReport {
    pub roots: Vec<Complex64>,
    /// `|p(z)| / scale(z)` per root.
    pub residuals: Vec<f64>,
    pub iterations: usize,
}

impl RootReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

// (√5 - 1)/2 of a seed spacing; keeps the seeds off every symmetry axis.
const SEED_OFFSET: f64 = 0.618_033_988_749_894_9;
const STEP_TOL: f64 = 1e-28;

fn horner2(coeffs: &[Cdd], z: Cdd) -> (Cdd, Cdd) {
    let mut p = Cdd::zero();
    let mut dp = Cdd::zero();
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// `Σ |a_j| · max(1, |z|)^j`: coefficient magnitude, grown for `|z| > 1`.
fn residual_scale(coeffs: &[Cdd], z_abs: f64) -> f64 {
    let r = z_abs.max(1.0);
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * r + crate::dd::abs_f64(c))
}

fn relative_residual(coeffs: &[Cdd], z: Cdd) -> f64 {
    let (p, _) = horner2(coeffs, z);
    crate::dd::abs_f64(p) / residual_scale(coeffs, crate::dd::abs_f64(z))
}

/// All roots of `Σ coeffs[j] z^j` with the default options.
pub fn interior_roots(coeffs: &[Complex64], tol: f64, max_iter: usize) -> Result<Vec<Complex64>> {
    let opts = AberthOptions { tol, max_iter, ..AberthOptions::default() };
    interior_roots_with(coeffs, opts).map(|r| r.roots)
}

pub fn interior_roots_with<T: Scalar>(coeffs: &[Complex<T>], opts: AberthOptions) -> Result<RootReport> {
    if coeffs.len() < 2 {
        return Err(Error::domain("root finding needs degree at least 1"));
    }
    let lead = coeffs[coeffs.len() - 1];
    if lead.re.to_f64() == 0.0 && lead.im.to_f64() == 0.0 {
        return Err(Error::domain("leading coefficient is zero"));
    }
    let lead = Cdd::new(lead.re.to_dd(), lead.im.to_dd());
    let monic: Vec<Cdd> = coeffs.iter().map(|c| Cdd::new(c.re.to_dd(), c.im.to_dd()) / lead).collect();
    let deg = monic.len() - 1;

    let mut z: Vec<Cdd> = (0..deg)
        .map(|k| {
            let w = Complex64::from_polar(opts.seed_radius, (TAU * (k as f64 + SEED_OFFSET)) / deg as f64);
            Cdd::new(w.re.into(), w.im.into())
        })
        .collect();

    let mut iterations = 0;
    let mut residuals = vec![f64::INFINITY; deg];
    for it in 1..=opts.max_iter {
        iterations = it;
        let mut max_step = 0.0f64;
        for k in 0..deg {
            let (p, dp) = horner2(&monic, z[k]);
            if p.is_zero() {
                continue;
            }
            let ratio = p / dp;
            let mut s = Cdd::zero();
            for j in 0..deg {
                if j != k {
                    s = s + Cdd::one() / (z[k] - z[j]);
                }
            }
            let w = ratio / (Cdd::one() - ratio * s);
            let wf = demote(w);
            if !(wf.re.is_finite() && wf.im.is_finite()) {
                continue;
            }
            z[k] = z[k] - w;
            max_step = max_step.max(wf.norm() / crate::dd::abs_f64(z[k]).max(1.0));
        }
        residuals = z.iter().map(|&zk| relative_residual(&monic, zk)).collect();
        if max_step <= STEP_TOL || residuals.iter().all(|&r| r <= STEP_TOL) {
            break;
        }
    }

    let roots: Vec<Complex64> = z.iter().map(|&w| demote(w)).collect();
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);
    if !(max_residual <= opts.tol) {
        return Err(Error::NonConvergence { iterations, max_residual, roots, residuals });
    }
    Ok(RootReport { roots, residuals, iterations })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted_by_arg(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.arg().partial_cmp(&b.arg()).unwrap());
        v
    }

    #[test]
    fn quadratic() {
        let r = sorted_by_arg(interior_roots(&[c(0.5, 0.0), c(1.0, 0.0), c(1.0, 0.0)], 1e-12, 200).unwrap());
        assert!((r[0] - c(-0.5, -0.5)).norm() < 1e-15);
        assert!((r[1] - c(-0.5, 0.5)).norm() < 1e-15);
    }

    #[test]
    fn triple_root_at_zero() {
        let r = interior_roots(&[c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)], 1e-12, 200).unwrap();
        assert_eq!(r.len(), 3);
        assert!(r.iter().all(|z| z.norm() < 1e-4));
    }

    #[test]
    fn roots_of_unity_shifted() {
        // z^8 - 1
        let mut p = vec![c(0.0, 0.0); 9];
        p[0] = c(-1.0, 0.0);
        p[8] = c(1.0, 0.0);
        let r = interior_roots(&p, 1e-12, 200).unwrap();
        for z in r {
            assert!((z.powu(8) - 1.0).norm() < 1e-14);
        }
    }

    #[test]
    fn non_monic_input() {
        // 3(z - 2)(z + i) = 3z² + (3i - 6) z - 6i
        let p = [c(0.0, -6.0), c(-6.0, 3.0), c(3.0, 0.0)];
        let r = sorted_by_arg(interior_roots(&p, 1e-12, 200).unwrap());
        assert!((r[0] - c(0.0, -1.0)).norm() < 1e-14);
        assert!((r[1] - c(2.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn errors() {
        assert!(interior_roots(&[c(1.0, 0.0)], 1e-12, 10).is_err());
        assert!(interior_roots(&[c(1.0, 0.0), c(0.0, 0.0)], 1e-12, 10).is_err());
        let mut p = vec![c(1.0, 0.0); 30];
        p[0] = c(3.0, 1.0);
        match interior_roots(&p, 1e-40, 3) {
            Err(Error::NonConvergence { roots, residuals, iterations, .. }) => {
                assert_eq!(roots.len(), 29);
                assert_eq!(residuals.len(), 29);
                assert_eq!(iterations, 3);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }
}
