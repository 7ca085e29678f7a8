//! Coefficient-level Szegő recursion.
//!
//! Arrays are degree-ascending: `phi[j]` multiplies `z^j`. Everything is
//! generic over [`Scalar`] so the same recursion runs in `f64` or in
//! double-double when coefficient arrays feed a root finder.

mod aberth;

use std::io::Write;

use num_complex::{Complex, Complex64};

use crate::dd::{promote, DoubleDouble, Scalar};
use crate::error::{Error, Result};
use crate::verblunsky::VerblunskySequence;

pub use aberth::{interior_roots, interior_roots_with, AberthOptions, RootReport};

/// `Φ_n` together with its reversal `Φ_n^*(z) = z^n conj(Φ_n(1/conj z))`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialPair<T: Scalar = f64> {
    pub phi: Vec<Complex<T>>,
    pub phistar: Vec<Complex<T>>,
}

/// Second-kind polynomials `Ψ_n, Ψ_n^*`; same layout as [`PolynomialPair`].
pub type SecondKindPair<T = f64> = PolynomialPair<T>;

fn conj_reverse<T: Scalar>(p: &[Complex<T>]) -> Vec<Complex<T>> {
    p.iter().rev().map(|z| z.conj()).collect()
}

fn check_alpha(alpha: Complex64) -> Result<()> {
    if !(alpha.norm() < 1.0) {
        return Err(Error::domain(format!("|α| = {} is not < 1", alpha.norm())));
    }
    Ok(())
}

impl<T: Scalar> PolynomialPair<T> {
    /// `Φ_0 = Φ_0^* = 1`.
    pub fn one() -> Self {
        let one = Complex::new(T::one(), T::zero());
        PolynomialPair { phi: vec![one], phistar: vec![one] }
    }

    pub fn degree(&self) -> usize {
        self.phi.len() - 1
    }

    /// One Szegő step. The reversal is taken as the conjugate-reverse of the
    /// new `Φ`; [`PolynomialPair::step_coupled`] runs the second recursion
    /// instead.
    pub fn step(&self, alpha: Complex64) -> Result<Self> {
        check_alpha(alpha)?;
        let phi = shift_minus(&self.phi, &self.phistar, promote::<T>(alpha).conj());
        let phistar = conj_reverse(&phi);
        Ok(PolynomialPair { phi, phistar })
    }

    /// Runs both `Φ' = zΦ - ᾱΦ^*` and `Φ^{*'} = Φ^* - αzΦ`.
    pub fn step_coupled(&self, alpha: Complex64) -> Result<Self> {
        check_alpha(alpha)?;
        let a = promote::<T>(alpha);
        let phi = shift_minus(&self.phi, &self.phistar, a.conj());
        let n = self.phi.len();
        let mut phistar = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let s = if j < n { self.phistar[j] } else { Complex::new(T::zero(), T::zero()) };
            let p = if j >= 1 { self.phi[j - 1] } else { Complex::new(T::zero(), T::zero()) };
            phistar.push(s - a * p);
        }
        Ok(PolynomialPair { phi, phistar })
    }

    /// `max_j |phistar[j] - conj(phi[n-j])|`.
    pub fn reversal_defect(&self) -> f64 {
        let n = self.degree();
        (0..=n).map(|j| crate::dd::abs_f64(self.phistar[j] - self.phi[n - j].conj())).fold(0.0, f64::max)
    }
}

/// `z·p - c·q` for equal-length `p, q`.
fn shift_minus<T: Scalar>(p: &[Complex<T>], q: &[Complex<T>], c: Complex<T>) -> Vec<Complex<T>> {
    let n = p.len();
    let zero = Complex::new(T::zero(), T::zero());
    (0..=n)
        .map(|j| {
            let shifted = if j >= 1 { p[j - 1] } else { zero };
            let tail = if j < n { c * q[j] } else { zero };
            shifted - tail
        })
        .collect()
}

pub fn szego_step(pair: &PolynomialPair, alpha: Complex64) -> Result<PolynomialPair> {
    pair.step(alpha)
}

fn upto<T: Scalar>(alphas: impl IntoIterator<Item = Complex64>) -> Result<PolynomialPair<T>> {
    alphas.into_iter().try_fold(PolynomialPair::one(), |p, a| p.step(a))
}

/// `Φ_n, Φ_n^*` from `α_0, …, α_{n-1}`.
pub fn polynomials_upto(seq: &VerblunskySequence, n: usize) -> Result<PolynomialPair> {
    upto(seq.prefix(n)?)
}

/// Second-kind `Ψ_n, Ψ_n^*`: the same recursion driven by `-α_j`.
pub fn second_kind_upto(seq: &VerblunskySequence, n: usize) -> Result<SecondKindPair> {
    upto(seq.prefix(n)?.into_iter().map(|a| -a))
}

/// Double-double `Φ_n, Φ_n^*` for a realized prefix.
pub fn polynomials_from_dd(alphas: &[Complex64]) -> Result<PolynomialPair<DoubleDouble>> {
    upto(alphas.iter().copied())
}

fn check_unimodular(beta: Complex64) -> Result<()> {
    if (beta.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::domain(format!("|β| = {} is not 1", beta.norm())));
    }
    Ok(())
}

/// `Φ_{n+1}^{(β)} = zΦ_n - conj(β) Φ_n^*`.
pub fn paraorthogonal<T: Scalar>(pair: &PolynomialPair<T>, beta: Complex64) -> Result<Vec<Complex<T>>> {
    check_unimodular(beta)?;
    Ok(shift_minus(&pair.phi, &pair.phistar, promote::<T>(beta).conj()))
}

/// Degree-`n` paraorthogonal coefficients built from `α_0..α_{n-2}` in
/// double-double.
pub fn paraorthogonal_dd(seq: &VerblunskySequence, n: usize, beta: Complex64) -> Result<Vec<Complex<DoubleDouble>>> {
    if n == 0 {
        return Err(Error::domain("paraorthogonal degree must be at least 1"));
    }
    let pair = polynomials_from_dd(&seq.prefix(n - 1)?)?;
    paraorthogonal(&pair, beta)
}

/// Horner evaluation.
pub fn evaluate<T: Scalar>(coeffs: &[Complex<T>], z: Complex<T>) -> Complex<T> {
    coeffs.iter().rev().fold(Complex::new(T::zero(), T::zero()), |acc, &c| acc * z + c)
}

/// `Σ |a_j| |z|^j`, the natural scale for residuals of [`evaluate`].
pub fn coefficient_scale<T: Scalar>(coeffs: &[Complex<T>], z_abs: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * z_abs + crate::dd::abs_f64(c))
}

/// CSV dump with header `j,re,im`, one row per coefficient, degree-ascending.
pub fn write_coefficients_csv<W: Write, T: Scalar>(out: W, coeffs: &[Complex<T>]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["j", "re", "im"])?;
    for (j, c) in coeffs.iter().enumerate() {
        w.serialize((j, c.re.to_f64(), c.im.to_f64()))?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() <= tol)
    }

    #[test]
    fn first_steps() {
        let p = PolynomialPair::<f64>::one().step(c(0.0, 0.0)).unwrap();
        assert_eq!(p.phi, vec![c(0.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(p.phistar, vec![c(1.0, 0.0), c(0.0, 0.0)]);

        let a = -0.3;
        let p = PolynomialPair::<f64>::one().step(c(a, 0.0)).unwrap();
        assert_eq!(p.phi, vec![c(-a, 0.0), c(1.0, 0.0)]);
        assert_eq!(p.phistar, vec![c(1.0, 0.0), c(-a, 0.0)]);
    }

    #[test]
    fn two_steps_constant_minus_half() {
        // Φ_2 = z(z + 1/2) + (1/2)(1 + z/2) = z² + 3z/4 + 1/2
        let seq = VerblunskySequence::constant(c(-0.5, 0.0)).unwrap();
        let p = polynomials_upto(&seq, 2).unwrap();
        assert!(close(&p.phi, &[c(0.5, 0.0), c(0.75, 0.0), c(1.0, 0.0)], 1e-15));
        assert!(close(&p.phistar, &[c(1.0, 0.0), c(0.75, 0.0), c(0.5, 0.0)], 1e-15));
    }

    #[test]
    fn free_case() {
        let p = polynomials_upto(&VerblunskySequence::zeros(), 5).unwrap();
        let mut e = vec![c(0.0, 0.0); 6];
        e[5] = c(1.0, 0.0);
        assert_eq!(p.phi, e);
        e.reverse();
        assert_eq!(p.phistar, e);
    }

    #[test]
    fn second_kind_examples() {
        let p = second_kind_upto(&VerblunskySequence::zeros(), 3).unwrap();
        assert_eq!(p.phi[3], c(1.0, 0.0));
        assert!(p.phi[..3].iter().all(|z| z.norm() == 0.0));
        let p0 = second_kind_upto(&VerblunskySequence::zeros(), 0).unwrap();
        assert_eq!(p0, PolynomialPair::one());
        let p1 = second_kind_upto(&VerblunskySequence::constant(c(-0.5, 0.0)).unwrap(), 1).unwrap();
        // Ψ_1 = z - conj(-α) = z + ᾱ = z - 1/2 for α = -1/2
        assert!(close(&p1.phi, &[c(-0.5, 0.0), c(1.0, 0.0)], 1e-15));
        assert!(close(&p1.phistar, &[c(1.0, 0.0), c(-0.5, 0.0)], 1e-15));
    }

    #[test]
    fn coupled_update_agrees() {
        let seq = VerblunskySequence::custom(|n| c(0.3 * (n as f64).cos(), -0.4 * (0.7 * n as f64).sin()) * 0.9);
        let mut p = PolynomialPair::<f64>::one();
        for j in 0..40 {
            let a = seq.get(j).unwrap();
            let s = p.step(a).unwrap();
            let sc = p.step_coupled(a).unwrap();
            assert!(close(&s.phistar, &sc.phistar, 1e-10 * (j + 1) as f64));
            assert_eq!(s.phi, sc.phi);
            p = s;
        }
    }

    #[test]
    fn paraorthogonal_examples() {
        let a0 = -0.35;
        let p1 = PolynomialPair::<f64>::one().step(c(a0, 0.0)).unwrap();
        let q = paraorthogonal(&p1, c(-1.0, 0.0)).unwrap();
        assert!(close(&q, &[c(1.0, 0.0), c(-2.0 * a0, 0.0), c(1.0, 0.0)], 1e-15));

        let p3 = polynomials_upto(&VerblunskySequence::zeros(), 3).unwrap();
        let q = paraorthogonal(&p3, c(-1.0, 0.0)).unwrap();
        assert_eq!(q, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let q = paraorthogonal(&p3, c(0.0, 1.0)).unwrap();
        assert_eq!(q[0], c(0.0, 1.0));
        assert!(paraorthogonal(&p3, c(0.0, 1.0 + 1e-9)).is_err());
    }

    #[test]
    fn horner_examples() {
        assert_eq!(evaluate(&[c(1.0, 0.0)], c(5.0, 0.0)), c(1.0, 0.0));
        let z = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
        assert!(evaluate(&[c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)], z).norm() < 1e-15);
        let z = Complex64::from_polar(1.0, PI / 4.0);
        let q = [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
        assert!(evaluate(&q, z).norm() < 1e-15);
    }

    #[test]
    fn rejects_alpha_on_circle() {
        assert!(szego_step(&PolynomialPair::one(), c(1.0, 0.0)).is_err());
    }

    #[test]
    fn dd_matches_f64() {
        let seq = VerblunskySequence::power_law(1.0, 0.25).unwrap();
        let a = seq.prefix(34).unwrap();
        let p = polynomials_upto(&seq, 34).unwrap();
        let q = polynomials_from_dd(&a).unwrap();
        for (x, y) in p.phi.iter().zip(&q.phi) {
            assert!((x - crate::dd::demote(*y)).norm() < 1e-12 * (1.0 + x.norm()));
        }
    }

    #[test]
    fn csv_dump() {
        let mut buf = Vec::new();
        write_coefficients_csv(&mut buf, &[c(0.5, 0.0), c(1.0, -2.0)]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "j,re,im\n0,0.5,0.0\n1,1.0,-2.0\n");
    }
}
