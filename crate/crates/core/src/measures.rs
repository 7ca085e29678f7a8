//! Carathéodory functions on the gap arc of a constant-coefficient tail.
//!
//! For `α ∈ (-1, 0)` the measure with all Verblunsky coefficients equal to
//! `α` has a gap `(-θ_α, θ_α)` around 1, on which its Carathéodory function
//! `F_0` is purely imaginary. Prepending `α_0..α_{n-1}` gives `F_{-n}`, a
//! Möbius image of `F_0` with polynomial coefficients. `F_{-n}` blows up on
//! the gap exactly where `F_0 = (b_n + 1)/(b_n - 1) = -i cot(arg b_n / 2)`,
//! and those points are the pure points of the perturbed measure there.

use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::phase::PhaseFunction;
use crate::szego::{evaluate, polynomials_upto, second_kind_upto};
use crate::verblunsky::{RegionP, VerblunskySequence};

/// Half-width of the excluded neighbourhood of `θ = 0`, relative to `θ_α`.
pub const DEFAULT_PUNCTURE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CaratheodoryEvaluation {
    pub theta: f64,
    pub value: Complex64,
    /// `sin²(θ/2) ≤ α²`
    pub regular: bool,
}

/// Whether `θ` lies in the closed gap arc for `α`.
pub fn gap_regular(alpha: f64, theta: f64) -> bool {
    (theta / 2.0).sin().powi(2) <= alpha * alpha
}

fn check_gap_alpha(alpha: f64) -> Result<f64> {
    if !(alpha > -1.0 && alpha < 0.0) {
        return Err(Error::domain(format!("α = {alpha} not in (-1, 0)")));
    }
    Ok(2.0 * alpha.abs().asin())
}

/// `-iF_0 = [α cot(θ/2) + csc(θ/2) √(α² - sin²(θ/2))] / (1 + α)`,
/// root taken nonnegative, on `0 < |θ| < θ_α`.
pub fn f0_boundary(alpha: f64, theta: f64) -> Result<CaratheodoryEvaluation> {
    let theta_a = check_gap_alpha(alpha)?;
    if theta == 0.0 || !(theta.abs() < theta_a) {
        return Err(Error::domain(format!("θ = {theta} outside the open gap arc (0 < |θ| < {theta_a})")));
    }
    let x = f0_cross_numerator(alpha, theta) / (theta / 2.0).sin();
    Ok(CaratheodoryEvaluation { theta, value: Complex64::new(0.0, x), regular: gap_regular(alpha, theta) })
}

/// `sin(θ/2)·(-iF_0)`, free of the pole at `θ = 0`.
fn f0_cross_numerator(alpha: f64, theta: f64) -> f64 {
    let (s, c) = (theta / 2.0).sin_cos();
    (alpha * c + (alpha * alpha - s * s).max(0.0).sqrt()) / (1.0 + alpha)
}

/// `F_{-n}(z) = [Ψ* - Ψ + (Ψ* + Ψ)F_0] / [Φ* + Φ + (Φ* - Φ)F_0]`
/// with `F_0` supplied by the caller.
pub fn peherstorfer_f_with(seq: &VerblunskySequence, n: usize, z: Complex64, f0: Complex64) -> Result<Complex64> {
    let first = polynomials_upto(seq, n)?;
    let second = second_kind_upto(seq, n)?;
    let (phi, phis) = (evaluate(&first.phi, z), evaluate(&first.phistar, z));
    let (psi, psis) = (evaluate(&second.phi, z), evaluate(&second.phistar, z));
    let num = psis - psi + (psis + psi) * f0;
    let den = phis + phi + (phis - phi) * f0;
    let scale = (phis.norm() + phi.norm()) * (1.0 + f0.norm());
    if !(den.norm() > 1e-14 * scale) {
        return Err(Error::Pole(z));
    }
    Ok(num / den)
}

/// `F_{-n}(e^{iθ})` on the gap arc, with `F_0` from [`f0_boundary`].
pub fn peherstorfer_f(seq: &VerblunskySequence, n: usize, alpha: f64, z: Complex64) -> Result<Complex64> {
    if (z.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::domain(format!("|z| = {} is not 1; supply F_0 explicitly off the circle", z.norm())));
    }
    let f0 = f0_boundary(alpha, z.arg())?.value;
    peherstorfer_f_with(seq, n, z, f0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Candidate {
    pub theta_lo: f64,
    pub theta_hi: f64,
    pub g_lo: f64,
    pub g_hi: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PurePointScan {
    pub n: usize,
    pub alpha: f64,
    pub grid_points: usize,
    /// All of `α_0..α_{n-1}` lie in `P_α`.
    pub hypothesis_ok: bool,
    pub offending: Vec<usize>,
    pub candidates: Vec<Candidate>,
}

impl PurePointScan {
    /// CSV `theta_lo,theta_hi,g_lo,g_hi`, header only when there are no
    /// candidates.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["theta_lo", "theta_hi", "g_lo", "g_hi"])?;
        for c in &self.candidates {
            w.serialize((c.theta_lo, c.theta_hi, c.g_lo, c.g_hi))?;
        }
        w.flush()?;
        Ok(())
    }
}

/// `sin(θ/2)cos(φ/2) + sin(θ/2)(-iF_0) sin(φ/2)` with `φ` the lifted
/// `arg b_n(e^{iθ})`. Its zeros are the zeros of `-iF_0 + cot(φ/2)`, and it
/// stays finite where `F_0` or the cotangent has a pole.
pub fn cross_form(phase: &PhaseFunction, alpha: f64, theta: f64) -> f64 {
    let (sp, cp) = (phase.blaschke_arg(theta) / 2.0).sin_cos();
    (theta / 2.0).sin() * cp + f0_cross_numerator(alpha, theta) * sp
}

/// Sign changes of [`cross_form`] on `grid_points` cell midpoints of
/// `(-θ_α, θ_α)`, skipping `|θ| < θ_α·10⁻⁶`; each side of 0 is scanned on its
/// own.
pub fn pure_point_scan(seq: &VerblunskySequence, n: usize, alpha: f64, grid_points: usize) -> Result<PurePointScan> {
    pure_point_scan_with(seq, n, alpha, grid_points, DEFAULT_PUNCTURE, Exec::default())
}

pub fn pure_point_scan_with(
    seq: &VerblunskySequence,
    n: usize,
    alpha: f64,
    grid_points: usize,
    puncture: f64,
    exec: Exec,
) -> Result<PurePointScan> {
    let region = RegionP::new(alpha)?;
    if !(alpha > -0.5) {
        return Err(Error::domain(format!("α = {alpha} not in (-1/2, 0)")));
    }
    if grid_points < 2 {
        return Err(Error::domain("need at least 2 grid points"));
    }
    let alphas = seq.prefix(n)?;
    let offending: Vec<usize> = (0..n).filter(|&j| !region.contains(alphas[j])).collect();
    let phase = PhaseFunction::from_prefix(alphas)?;
    let theta_a = 2.0 * alpha.abs().asin();
    let width = 2.0 * theta_a / grid_points as f64;
    let p = theta_a * puncture;
    let thetas: Vec<f64> =
        (0..grid_points).map(|i| -theta_a + (i as f64 + 0.5) * width).filter(|t| t.abs() >= p).collect();
    let g = exec.map_indexed(thetas.len(), |i| cross_form(&phase, alpha, thetas[i]));
    let candidates = (1..thetas.len())
        .filter(|&i| (thetas[i - 1] < 0.0) == (thetas[i] < 0.0))
        .filter(|&i| g[i - 1] == 0.0 || g[i] == 0.0 || (g[i - 1] < 0.0) != (g[i] < 0.0))
        .map(|i| Candidate { theta_lo: thetas[i - 1], theta_hi: thetas[i], g_lo: g[i - 1], g_hi: g[i] })
        .collect();
    Ok(PurePointScan { n, alpha, grid_points, hypothesis_ok: offending.is_empty(), offending, candidates })
}
