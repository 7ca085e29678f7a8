//! Truncated CMV operator `C^{(n)}_β = L·M` in pentadiagonal storage.
//!
//! `L = Θ_0 ⊕ Θ_2 ⊕ …`, `M = 1 ⊕ Θ_1 ⊕ Θ_3 ⊕ …` with
//! `Θ_j = [[ᾱ_j, ρ_j], [ρ_j, -α_j]]`. The slot `α_{n-1}` holds `β`, so
//! `ρ_{n-1} = 0` and the block that would straddle the boundary shrinks to the
//! single entry `β̄`. Its characteristic polynomial is `Φ_n^{(β)}`.
//!
//! Rows and columns are 0-based in code; the trial-vector formulas are written
//! with 1-based `j` and shifted on storage.

use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::phase::{PhaseFunction, Side, DEFAULT_TOL_RAD};
use crate::verblunsky::VerblunskySequence;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Largest dimension accepted by the dense CSV dump.
pub const DENSE_DUMP_MAX: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    L,
    M,
}

impl Factor {
    fn parity(self) -> usize {
        match self {
            Factor::L => 0,
            Factor::M => 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CmvOperator {
    n: usize,
    /// `band[i][k - i + 2]` is `C[i][k]`.
    band: Vec<[Complex64; 5]>,
    beta: Complex64,
    /// `α_0..α_{n-2}` followed by `β`.
    alphas: Vec<Complex64>,
}

fn factor_entry(alphas: &[Complex64], which: Factor, i: usize, j: usize) -> Complex64 {
    let n = alphas.len();
    if i >= n || j >= n {
        return ZERO;
    }
    let p = which.parity();
    if i < p {
        return if j == i { ONE } else { ZERO };
    }
    let s = i - (i - p) % 2;
    if j < s || j > s + 1 {
        return ZERO;
    }
    let a = alphas[s];
    if s + 1 >= n {
        return if j == s { a.conj() } else { ZERO };
    }
    let rho = Complex64::new((1.0 - a.norm_sqr()).sqrt(), 0.0);
    match (i - s, j - s) {
        (0, 0) => a.conj(),
        (1, 1) => -a,
        _ => rho,
    }
}

impl CmvOperator {
    pub fn new(seq: &VerblunskySequence, n: usize, beta: Complex64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("dimension must be at least 1"));
        }
        let mut alphas = seq.prefix(n - 1)?;
        alphas.push(beta);
        Self::from_alphas(alphas)
    }

    /// `alphas` is `α_0..α_{n-2}` with `β` appended.
    pub fn from_alphas(alphas: Vec<Complex64>) -> Result<Self> {
        let n = alphas.len();
        let Some(&beta) = alphas.last() else {
            return Err(Error::domain("dimension must be at least 1"));
        };
        if (beta.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::domain(format!("|β| = {} is not 1", beta.norm())));
        }
        if let Some(j) = alphas[..n - 1].iter().position(|a| !(a.norm() < 1.0)) {
            return Err(Error::domain(format!("|α_{j}| = {} is not < 1", alphas[j].norm())));
        }
        let band = (0..n)
            .map(|i| {
                let mut row = [ZERO; 5];
                for (d, slot) in row.iter_mut().enumerate() {
                    let Some(k) = (i + d).checked_sub(2).filter(|&k| k < n) else { continue };
                    *slot = (i.saturating_sub(1)..=(i + 1).min(n - 1))
                        .map(|j| factor_entry(&alphas, Factor::L, i, j) * factor_entry(&alphas, Factor::M, j, k))
                        .sum();
                }
                row
            })
            .collect();
        Ok(CmvOperator { n, band, beta, alphas })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    pub fn alphas(&self) -> &[Complex64] {
        &self.alphas
    }

    /// `C[i][k]`, zero outside the band.
    pub fn entry(&self, i: usize, k: usize) -> Complex64 {
        if i >= self.n || k >= self.n || i.abs_diff(k) > 2 {
            return ZERO;
        }
        self.band[i][k + 2 - i]
    }

    pub fn factor(&self, which: Factor, i: usize, j: usize) -> Complex64 {
        factor_entry(&self.alphas, which, i, j)
    }

    pub fn to_dense(&self) -> Vec<Vec<Complex64>> {
        (0..self.n).map(|i| (0..self.n).map(|k| self.entry(i, k)).collect()).collect()
    }

    /// `Cv` in `O(n)`.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.n {
            return Err(Error::Dimension { expected: self.n, got: v.len() });
        }
        Ok((0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(2);
                let hi = (i + 2).min(self.n - 1);
                (lo..=hi).map(|k| self.band[i][k + 2 - i] * v[k]).sum()
            })
            .collect())
    }

    /// `max |(M - L)_{ij} - conj((M - L)_{ji})|`.
    pub fn factor_skew(&self) -> f64 {
        let d = |i, j| self.factor(Factor::M, i, j) - self.factor(Factor::L, i, j);
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in i..(i + 2).min(self.n) {
                worst = worst.max((d(i, j) - d(j, i).conj()).norm());
            }
        }
        worst
    }

    /// Nonzero entries as `i,j,re,im`, 1-based, for `n ≤ 64`.
    pub fn write_dense_csv<W: Write>(&self, out: W) -> Result<()> {
        if self.n > DENSE_DUMP_MAX {
            return Err(Error::domain(format!("dense dump limited to n ≤ {DENSE_DUMP_MAX}")));
        }
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["i", "j", "re", "im"])?;
        for i in 0..self.n {
            for k in i.saturating_sub(2)..(i + 3).min(self.n) {
                let e = self.entry(i, k);
                if e != ZERO {
                    w.serialize((i + 1, k + 1, e.re, e.im))?;
                }
            }
        }
        w.flush()?;
        Ok(())
    }
}

pub fn build_cmv(seq: &VerblunskySequence, n: usize, beta: Complex64) -> Result<CmvOperator> {
    CmvOperator::new(seq, n, beta)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TrialKind {
    Nu { gamma: usize },
    Upsilon,
}

#[derive(Debug, Clone)]
pub struct TrialVector {
    pub n: usize,
    pub entries: Vec<Complex64>,
    pub kind: TrialKind,
}

impl TrialVector {
    pub fn norm(&self) -> f64 {
        norm(&self.entries)
    }

    /// 1-based indices of nonzero entries.
    pub fn support(&self) -> std::ops::RangeInclusive<usize> {
        let first = self.entries.iter().position(|z| *z != ZERO).map_or(1, |p| p + 1);
        let last = self.entries.iter().rposition(|z| *z != ZERO).map_or(0, |p| p + 1);
        first..=last
    }
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `γ = round(n - n^{(1+b)/2})`, capped so that the support is nonempty.
pub fn gamma_for_power(n: usize, b: f64) -> usize {
    let g = (n as f64 - (n as f64).powf((1.0 + b) / 2.0)).round().max(0.0) as usize;
    g.min(n.saturating_sub(2))
}

/// `ν_j = (j - γ)(n - j)` on `γ < j < n`, times `i` for odd `j`.
pub fn trial_nu(n: usize, gamma: usize) -> Result<TrialVector> {
    if n < 2 || gamma + 1 >= n {
        return Err(Error::domain(format!("need 0 ≤ γ < n - 1, got γ = {gamma}, n = {n}")));
    }
    let mut entries = vec![ZERO; n];
    for j in gamma + 1..n {
        let v = ((j - gamma) as f64) * ((n - j) as f64);
        entries[j - 1] = if j % 2 == 1 { Complex64::new(0.0, v) } else { Complex64::new(v, 0.0) };
    }
    Ok(TrialVector { n, entries, kind: TrialKind::Nu { gamma } })
}

/// Constant on `floor(n - √n) + 1 ..= n - 1`, unit norm.
pub fn trial_upsilon(n: usize) -> Result<TrialVector> {
    if n < 4 {
        return Err(Error::domain(format!("need n ≥ 4, got {n}")));
    }
    let lo = (n as f64 - (n as f64).sqrt()).floor() as usize + 1;
    let count = n - lo;
    let value = 1.0 / (count as f64).sqrt();
    let mut entries = vec![ZERO; n];
    for e in &mut entries[lo - 1..n - 1] {
        *e = Complex64::new(value, 0.0);
    }
    Ok(TrialVector { n, entries, kind: TrialKind::Upsilon })
}

/// `‖(C - I)v‖ / ‖v‖`.
pub fn residual(c: &CmvOperator, v: &[Complex64]) -> Result<f64> {
    let nv = norm(v);
    if nv == 0.0 {
        return Err(Error::domain("trial vector is zero"));
    }
    let cv = c.apply(v)?;
    let diff: f64 = cv.iter().zip(v).map(|(a, b)| (a - b).norm_sqr()).sum();
    Ok(diff.sqrt() / nv)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigenBall {
    /// Chordal radius `|λ - 1|`.
    pub chordal: f64,
    /// Corresponding arc radius `2 arcsin(r/2)`.
    pub angular: f64,
}

impl EigenBall {
    /// Whether the unimodular point `e^{iθ}` lies in the closed ball.
    pub fn contains_angle(&self, theta: f64) -> bool {
        chordal_distance(theta) <= self.chordal
    }
}

/// `|e^{iθ} - 1|`.
pub fn chordal_distance(theta: f64) -> f64 {
    2.0 * (theta / 2.0).sin().abs()
}

/// A normal operator with a unit vector of residual `r` has an eigenvalue
/// within `r` of 1.
pub fn eigenvalue_ball(residual_value: f64) -> Result<EigenBall> {
    if !(0.0..2.0).contains(&residual_value) {
        return Err(Error::domain(format!("residual {residual_value} gives no localization on the circle")));
    }
    Ok(EigenBall { chordal: residual_value, angular: 2.0 * (residual_value / 2.0).asin() })
}

#[derive(Debug, Clone, Serialize)]
pub struct ResolventReport {
    pub n: usize,
    /// `min_k |ζ_k - 1|` for `β = -1`.
    pub min_distance: f64,
    /// `2|α_{n-1}|`, or `2|α_{n-2}|` when the sequence stops at `n - 1` terms.
    pub bound: f64,
    /// `2|α_{n-2}|`, the last coefficient inside the truncation.
    pub inner_bound: f64,
    pub pass: bool,
}

/// Lower bound on the distance of the spectrum of `C^{(n)}_{-1}` from 1,
/// equivalent to an upper bound on `‖(C - 1)^{-1}‖`.
pub fn resolvent_gap_check(seq: &VerblunskySequence, n: usize) -> Result<ResolventReport> {
    if n < 2 {
        return Err(Error::domain("need n ≥ 2"));
    }
    let available = seq.len().map_or(n, |l| l.min(n));
    if available < n - 1 {
        return Err(Error::Index { index: n - 2, len: available });
    }
    let alphas = seq.prefix(available)?;
    let nonreal: Vec<usize> = (0..alphas.len()).filter(|&j| alphas[j].im != 0.0).collect();
    if !nonreal.is_empty() {
        return Err(Error::Precondition { reason: "coefficients must be real".into(), indices: nonreal });
    }
    let bad: Vec<usize> = (0..alphas.len())
        .filter(|&j| !(alphas[j].re < 0.0) || (j + 1 < alphas.len() && !(alphas[j].re < alphas[j + 1].re)))
        .collect();
    if !bad.is_empty() {
        return Err(Error::Precondition {
            reason: "coefficients must be negative and strictly increasing".into(),
            indices: bad,
        });
    }
    let phase = PhaseFunction::from_prefix(alphas[..n - 1].to_vec())?;
    let beta = Complex64::new(-1.0, 0.0);
    let ccw = phase.kth_zero(beta, 1, Side::Ccw, DEFAULT_TOL_RAD)?;
    let cw = phase.kth_zero(beta, 1, Side::Cw, DEFAULT_TOL_RAD)?;
    let min_distance = chordal_distance(ccw).min(chordal_distance(cw));
    let inner_bound = 2.0 * alphas[n - 2].norm();
    let bound = if alphas.len() >= n { 2.0 * alphas[n - 1].norm() } else { inner_bound };
    Ok(ResolventReport { n, min_distance, bound, inner_bound, pass: min_distance > bound })
}

#[derive(Debug, Clone, Serialize)]
pub struct SignPatternReport {
    pub n: usize,
    /// Determinant of the row-scaled matrix.
    pub scaled_det: f64,
    pub det_sign: i8,
    pub predicted_sign: i8,
    pub pass: bool,
}

/// Builds the alternating-sign tridiagonal matrix from magnitudes: diagonal
/// `+,-,+,…`, both off-diagonals `-,+,-,…`.
pub fn sign_pattern_matrix(diag: &[f64], off: &[f64]) -> Result<Vec<Vec<f64>>> {
    let n = diag.len();
    if off.len() + 1 != n.max(1) {
        return Err(Error::Dimension { expected: n.saturating_sub(1), got: off.len() });
    }
    let sgn = |k: usize| if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let mut j = vec![vec![0.0; n]; n];
    for i in 0..n {
        j[i][i] = sgn(i) * diag[i].abs();
        if i + 1 < n {
            j[i][i + 1] = -sgn(i) * off[i].abs();
            j[i + 1][i] = -sgn(i) * off[i].abs();
        }
    }
    Ok(j)
}

/// Checks the alternating tridiagonal sign pattern, computes the determinant
/// by partial-pivot elimination and compares its sign with the parity rule.
pub fn sign_pattern_invertibility(j: &[Vec<f64>]) -> Result<SignPatternReport> {
    let n = j.len();
    if n == 0 {
        return Err(Error::domain("empty matrix"));
    }
    if let Some(r) = j.iter().position(|row| row.len() != n) {
        return Err(Error::Dimension { expected: n, got: j[r].len() });
    }
    let sgn = |k: usize| if k.is_multiple_of(2) { 1.0 } else { -1.0 };
    let bad: Vec<usize> = (0..n)
        .filter(|&r| {
            (0..n).any(|c| {
                let x = j[r][c];
                let want = match c as isize - r as isize {
                    0 => sgn(r),
                    1 => -sgn(r),
                    -1 => -sgn(c),
                    _ => return x != 0.0,
                };
                !(x * want > 0.0)
            })
        })
        .collect();
    if !bad.is_empty() {
        return Err(Error::Precondition { reason: "sign pattern violated".into(), indices: bad });
    }

    let mut a: Vec<Vec<f64>> = j
        .iter()
        .map(|row| {
            let s = row.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            row.iter().map(|x| x / s).collect()
        })
        .collect();
    let mut det = 1.0;
    for col in 0..n {
        let p = (col..n).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs())).unwrap();
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        let pivot = a[col][col];
        det *= pivot;
        if pivot == 0.0 {
            break;
        }
        for r in col + 1..n {
            let f = a[r][col] / pivot;
            if f != 0.0 {
                for c in col..n {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
    }
    let det_sign = if det > 0.0 {
        1
    } else if det < 0.0 {
        -1
    } else {
        0
    };
    let predicted_sign = if (n / 2).is_multiple_of(2) { 1 } else { -1 };
    Ok(SignPatternReport {
        n,
        scaled_det: det,
        det_sign,
        predicted_sign,
        pass: det.abs() > 1e-12 && det_sign == predicted_sign,
    })
}
