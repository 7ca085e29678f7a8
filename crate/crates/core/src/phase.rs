//! Prüfer phase of `e^{iθ} b_{n-1}(e^{iθ})` and the zeros it pins down.
//!
//! With `b_n = Φ_n / Φ_n^*` on the circle, the paraorthogonal polynomial
//! `Φ_n^{(β)} = zΦ_{n-1} - β̄Φ_{n-1}^*` vanishes at `e^{iθ}` exactly when
//! `e^{iθ} b_{n-1}(e^{iθ}) = β̄`. The lifted phase
//!
//! ```text
//! η_1(θ) = θ,    η_n(θ) = η_{n-1}(θ) + θ - 2 arg(1 - α_{n-2} e^{iη_{n-1}(θ)})
//! ```
//!
//! is continuous and strictly increasing in `θ`, and gains `2πn` over a full
//! turn, so each of the `n` zeros is the unique solution of `η_n(θ) = t_m`
//! for one branch value `t_m`. The phase is carried as whole turns plus a
//! remainder in `[-π, π)` so that `O(n)` accumulated turns cost no precision.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::verblunsky::{RegionP, VerblunskySequence};
use crate::TAU;

/// Default bisection tolerance in radians.
pub const DEFAULT_TOL_RAD: f64 = 1e-12;

/// A lifted angle `2π·turns + rem`, `rem ∈ [-π, π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lifted {
    pub turns: i64,
    pub rem: f64,
}

impl Lifted {
    fn normalized(turns: i64, rem: f64) -> Self {
        let k = ((rem + PI) / TAU).floor();
        Lifted { turns: turns + k as i64, rem: rem - k * TAU }
    }

    pub fn value(&self) -> f64 {
        TAU * self.turns as f64 + self.rem
    }

    /// `self - other`, exact in the turn count.
    pub fn minus(&self, other: &Lifted) -> f64 {
        TAU * (self.turns - other.turns) as f64 + (self.rem - other.rem)
    }
}

/// Principal value in `[-π, π)`.
pub fn wrap_angle(x: f64) -> f64 {
    Lifted::normalized(0, x).rem
}

/// One step of the Möbius form of the Szegő recursion on the circle,
/// `b ↦ (e^{iθ}b - ᾱ) / (1 - α e^{iθ} b)`.
pub fn blaschke_step(b: Complex64, alpha: Complex64, theta: f64) -> Result<Complex64> {
    if (b.norm() - 1.0).abs() > 1e-10 {
        return Err(Error::domain(format!("|b| = {} is not 1", b.norm())));
    }
    if !(alpha.norm() < 1.0) {
        return Err(Error::domain(format!("|α| = {} is not < 1", alpha.norm())));
    }
    let w = Complex64::from_polar(1.0, theta) * b;
    Ok((w - alpha.conj()) / (1.0 - alpha * w))
}

/// `η_n` for a fixed coefficient prefix `α_0, …, α_{n-2}`.
#[derive(Debug, Clone)]
pub struct PhaseFunction {
    alphas: Vec<Complex64>,
}

impl PhaseFunction {
    /// Phase of degree `n ≥ 1`, realizing `α_0..α_{n-2}`.
    pub fn new(seq: &VerblunskySequence, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("degree must be at least 1"));
        }
        Ok(PhaseFunction { alphas: seq.prefix(n - 1)? })
    }

    /// Phase whose recursion runs through every entry of `alphas`; its degree
    /// is `alphas.len() + 1`.
    pub fn from_prefix(alphas: Vec<Complex64>) -> Result<Self> {
        if let Some(j) = alphas.iter().position(|a| !(a.norm() < 1.0)) {
            return Err(Error::domain(format!("|α_{j}| = {} is not < 1", alphas[j].norm())));
        }
        Ok(PhaseFunction { alphas })
    }

    pub fn degree(&self) -> usize {
        self.alphas.len() + 1
    }

    pub fn alphas(&self) -> &[Complex64] {
        &self.alphas
    }

    pub fn is_real(&self) -> bool {
        self.alphas.iter().all(|a| a.im == 0.0)
    }

    /// `η_n(θ)`; valid for any real `θ`, negative arguments are lifted
    /// directly rather than through conjugation.
    pub fn eta(&self, theta: f64) -> Lifted {
        let mut phase = Lifted::normalized(0, theta);
        for &a in &self.alphas {
            let w = Complex64::from_polar(1.0, phase.rem);
            let step = theta - 2.0 * (1.0 - a * w).arg();
            phase = Lifted::normalized(phase.turns, phase.rem + step);
        }
        phase
    }

    /// Lifted `arg b_{n-1}(e^{iθ}) = η_n(θ) - θ`.
    pub fn blaschke_arg(&self, theta: f64) -> f64 {
        let e = self.eta(theta);
        TAU * e.turns as f64 + (e.rem - theta)
    }

    fn branch_targets(&self, beta: Complex64) -> (Lifted, f64) {
        let base = self.eta(0.0);
        let xi = beta.conj().arg();
        let mut d = (xi - base.rem).rem_euclid(TAU);
        if d == 0.0 {
            d = TAU;
        }
        (base, d)
    }

    /// Solves `η_n(θ) = base + d + 2π(m-1)` for `θ ∈ (0, 2π]`.
    fn solve_branch(&self, base: Lifted, d: f64, m: usize, tol: f64) -> Result<f64> {
        let n = self.degree();
        let target = Lifted { turns: base.turns + (m as i64 - 1), rem: base.rem + d };
        if m == n && d == TAU {
            return Ok(TAU);
        }
        let g = |theta: f64| self.eta(theta).minus(&target);
        let guess = ((d + TAU * (m as f64 - 1.0)) / n as f64).clamp(0.0, TAU);
        let mut h = TAU / n as f64;
        let (mut lo, mut hi);
        if g(guess) < 0.0 {
            lo = guess;
            loop {
                hi = (lo + h).min(TAU);
                let gh = g(hi);
                if gh >= 0.0 {
                    break;
                }
                if hi == TAU {
                    if gh > -1e-9 {
                        return Ok(TAU);
                    }
                    return Err(Error::Internal(format!("branch {m}: η_n(2π) below target by {}", -gh)));
                }
                lo = hi;
                h *= 2.0;
            }
        } else {
            hi = guess;
            loop {
                lo = (hi - h).max(0.0);
                if g(lo) < 0.0 {
                    break;
                }
                if lo == 0.0 {
                    return Err(Error::Internal(format!("branch {m}: η_n(0) not below target")));
                }
                hi = lo;
                h *= 2.0;
            }
        }
        while hi - lo > tol {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if g(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// The `k`-th zero counted from `1` in the given direction: `arg ζ_k`
    /// counter-clockwise, `arg ζ_{n-k+1}` clockwise.
    pub fn kth_zero(&self, beta: Complex64, k: usize, side: Side, tol: f64) -> Result<f64> {
        check_beta(beta)?;
        check_tol(tol)?;
        let n = self.degree();
        if k == 0 || k > n {
            return Err(Error::domain(format!("k = {k} outside 1..={n}")));
        }
        let (base, d) = self.branch_targets(beta);
        let m = match side {
            Side::Ccw => k,
            Side::Cw => n - k + 1,
        };
        let theta = self.solve_branch(base, d, m, tol)?;
        Ok(if theta >= TAU { 0.0 } else { theta })
    }

    /// All `n` zeros of `Φ_n^{(β)}`.
    pub fn zeros(&self, beta: Complex64, tol: f64, exec: Exec) -> Result<ZeroSet> {
        check_beta(beta)?;
        check_tol(tol)?;
        let n = self.degree();
        let (base, d) = self.branch_targets(beta);
        let mut args = exec.try_map_indexed(n, |i| self.solve_branch(base, d, i + 1, tol))?;
        if let Some(last) = args.last_mut() {
            if *last >= TAU {
                args.pop();
                args.insert(0, 0.0);
            }
        }
        Ok(ZeroSet { n, args, beta_arg: beta.arg() })
    }
}

fn check_beta(beta: Complex64) -> Result<()> {
    if (beta.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::domain(format!("|β| = {} is not 1", beta.norm())));
    }
    Ok(())
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0) {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    Ok(())
}

/// `η_n(θ)` as a plain number, `θ ∈ [-2π, 2π]`.
pub fn eta(seq: &VerblunskySequence, n: usize, theta: f64) -> Result<f64> {
    if !(-TAU..=TAU).contains(&theta) {
        return Err(Error::domain(format!("θ = {theta} outside [-2π, 2π]")));
    }
    Ok(PhaseFunction::new(seq, n)?.eta(theta).value())
}

/// Zeros of a paraorthogonal polynomial as angles, counter-clockwise from 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroSet {
    pub n: usize,
    pub args: Vec<f64>,
    /// `arg β ∈ (-π, π]`.
    pub beta_arg: f64,
}

impl ZeroSet {
    pub fn points(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.args.iter().map(|&t| Complex64::from_polar(1.0, t))
    }

    /// CSV with header `k,arg,re,im`, `k` starting at 1.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["k", "arg", "re", "im"])?;
        for (k, &t) in self.args.iter().enumerate() {
            w.serialize((k + 1, t, t.cos(), t.sin()))?;
        }
        w.flush()?;
        Ok(())
    }

    /// JSON object with `n`, `beta_arg`, `args`.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

pub fn popuc_zeros(seq: &VerblunskySequence, n: usize, beta: Complex64, tol_rad: f64) -> Result<ZeroSet> {
    PhaseFunction::new(seq, n)?.zeros(beta, tol_rad, Exec::default())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Ccw,
    Cw,
}

/// `arg ζ_1` (ccw) or `arg ζ_n` (cw) in `O(n log 1/tol)`.
pub fn nearest_zero_to_one(
    seq: &VerblunskySequence,
    n: usize,
    beta: Complex64,
    side: Side,
    tol_rad: f64,
) -> Result<f64> {
    PhaseFunction::new(seq, n)?.kth_zero(beta, 1, side, tol_rad)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapMeasurements {
    /// `arg ζ_1`
    pub gap_ccw: f64,
    /// `2π - arg ζ_n`
    pub gap_cw: f64,
    /// `arg ζ_{k+1} - arg ζ_k`; the gap through 1 is excluded.
    pub spacings: Vec<f64>,
    pub max_offgap_spacing: f64,
}

pub fn gap_measurements(zs: &ZeroSet) -> GapMeasurements {
    let spacings: Vec<f64> = zs.args.windows(2).map(|w| w[1] - w[0]).collect();
    GapMeasurements {
        gap_ccw: zs.args.first().copied().unwrap_or(0.0),
        gap_cw: TAU - zs.args.last().copied().unwrap_or(TAU),
        max_offgap_spacing: spacings.iter().copied().fold(0.0, f64::max),
        spacings,
    }
}

/// Strict interlacing of two zero sets around the circle.
pub fn interlaces(a: &ZeroSet, b: &ZeroSet) -> bool {
    if a.n != b.n || a.args.len() != b.args.len() {
        return false;
    }
    let mut merged: Vec<(f64, bool)> =
        a.args.iter().map(|&t| (t, false)).chain(b.args.iter().map(|&t| (t, true))).collect();
    merged.sort_by(|x, y| x.0.total_cmp(&y.0));
    let len = merged.len();
    (0..len).all(|i| {
        let (t0, s0) = merged[i];
        let (t1, s1) = merged[(i + 1) % len];
        s0 != s1 && (i + 1 == len || t0 < t1)
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PhaseBoundReport {
    pub n: usize,
    pub alpha: f64,
    pub grid_points: usize,
    /// `max |arg b_n(e^{iθ})|` over the grid, principal branch.
    pub max_abs_arg: f64,
    /// `π/2 - arcsin|α|`
    pub bound: f64,
    pub pass: bool,
}

/// Evaluates `arg b_n` on cell midpoints of `(-θ_α, θ_α)` and compares with
/// `π/2 - arcsin|α|`. Every `α_j`, `j < n`, must lie in `P_α`.
pub fn phase_bound_check(
    seq: &VerblunskySequence,
    n: usize,
    alpha: f64,
    grid_points: usize,
) -> Result<PhaseBoundReport> {
    let alphas = seq.prefix(n)?;
    phase_bound_check_prefix(alphas, alpha, grid_points)
}

pub fn phase_bound_check_prefix(alphas: Vec<Complex64>, alpha: f64, grid_points: usize) -> Result<PhaseBoundReport> {
    if !(alpha > -0.5 && alpha < 0.0) {
        return Err(Error::domain(format!("reference α = {alpha} not in (-1/2, 0)")));
    }
    if grid_points < 2 {
        return Err(Error::domain("need at least 2 grid points"));
    }
    let region = RegionP::new(alpha)?;
    let offending: Vec<usize> = (0..alphas.len()).filter(|&j| !region.contains(alphas[j])).collect();
    if !offending.is_empty() {
        return Err(Error::Precondition { reason: format!("coefficients outside P_{alpha}"), indices: offending });
    }
    let n = alphas.len();
    let phase = PhaseFunction::from_prefix(alphas)?;
    let theta_a = 2.0 * alpha.abs().asin();
    let width = 2.0 * theta_a / grid_points as f64;
    let max_abs_arg = (0..grid_points)
        .map(|i| {
            let theta = -theta_a + (i as f64 + 0.5) * width;
            wrap_angle(phase.blaschke_arg(theta)).abs()
        })
        .fold(0.0, f64::max);
    let bound = PI / 2.0 - alpha.abs().asin();
    Ok(PhaseBoundReport { n, alpha, grid_points, max_abs_arg, bound, pass: max_abs_arg < bound })
}
