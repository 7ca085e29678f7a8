//! Verblunsky coefficient sequences, slow-decay control functions and the
//! half-plane region `P_α`.

use std::fmt;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

type CustomRule = Arc<dyn Fn(usize) -> Complex64 + Send + Sync>;

#[derive(Clone)]
enum Rule {
    Explicit(Arc<[Complex64]>),
    /// `α_n = -C (n+2)^{-b}`
    PowerLaw {
        c: f64,
        b: f64,
    },
    /// `α_n = -1 / log(n+3)`
    LogLaw,
    Constant(Complex64),
    Custom(CustomRule),
}

/// A rule `n ↦ α_n`. Coefficients are produced on demand; nothing beyond the
/// explicit list (if any) is stored.
#[derive(Clone)]
pub struct VerblunskySequence {
    rule: Rule,
}

impl fmt::Debug for VerblunskySequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VerblunskySequence({})", self.describe())
    }
}

impl VerblunskySequence {
    pub fn explicit(values: impl Into<Vec<Complex64>>) -> Self {
        let values: Vec<Complex64> = values.into();
        VerblunskySequence { rule: Rule::Explicit(values.into()) }
    }

    pub fn explicit_real(values: &[f64]) -> Self {
        Self::explicit(values.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>())
    }

    pub fn power_law(c: f64, b: f64) -> Result<Self> {
        if !(c > 0.0) || !(b > 0.0 && b < 1.0) {
            return Err(Error::domain(format!("power law needs C > 0 and 0 < b < 1, got C={c}, b={b}")));
        }
        Ok(VerblunskySequence { rule: Rule::PowerLaw { c, b } })
    }

    pub fn log_law() -> Self {
        VerblunskySequence { rule: Rule::LogLaw }
    }

    pub fn constant(alpha: Complex64) -> Result<Self> {
        if alpha.norm() >= 1.0 {
            return Err(Error::domain(format!("|α| = {} is not < 1", alpha.norm())));
        }
        Ok(VerblunskySequence { rule: Rule::Constant(alpha) })
    }

    pub fn zeros() -> Self {
        VerblunskySequence { rule: Rule::Constant(Complex64::new(0.0, 0.0)) }
    }

    pub fn custom(rule: impl Fn(usize) -> Complex64 + Send + Sync + 'static) -> Self {
        VerblunskySequence { rule: Rule::Custom(Arc::new(rule)) }
    }

    /// Parses `power:C,b`, `log`, `const:re,im`, `file:<path>` (one `re im`
    /// pair per line) and the alias `zeros`.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let (head, tail) = match spec.split_once(':') {
            Some((h, t)) => (h, Some(t)),
            None => (spec, None),
        };
        let nums = |t: Option<&str>, want: usize| -> Result<Vec<f64>> {
            let t = t.ok_or_else(|| Error::Parse(format!("`{spec}` needs {want} arguments")))?;
            let v = t
                .split(',')
                .map(|s| s.trim().parse::<f64>().map_err(|e| Error::Parse(format!("`{s}`: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            if v.len() != want {
                return Err(Error::Parse(format!("`{spec}` needs {want} arguments, got {}", v.len())));
            }
            Ok(v)
        };
        match head {
            "power" => {
                let v = nums(tail, 2)?;
                Self::power_law(v[0], v[1])
            }
            "log" if tail.is_none() => Ok(Self::log_law()),
            "zeros" if tail.is_none() => Ok(Self::zeros()),
            "const" => {
                let v = nums(tail, 2)?;
                Self::constant(Complex64::new(v[0], v[1]))
            }
            "file" => {
                let path = tail.ok_or_else(|| Error::Parse("`file:` needs a path".into()))?;
                Self::from_file(path)
            }
            _ => Err(Error::Parse(format!("unknown sequence spec `{spec}`"))),
        }
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut values = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let mut next = || -> Result<f64> {
                parts
                    .next()
                    .ok_or_else(|| Error::Parse(format!("line {}: expected `re im`", lineno + 1)))?
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1)))
            };
            let re = next()?;
            let im = next()?;
            let z = Complex64::new(re, im);
            if z.norm() >= 1.0 {
                return Err(Error::domain(format!("line {}: |α| = {} is not < 1", lineno + 1, z.norm())));
            }
            values.push(z);
        }
        Ok(Self::explicit(values))
    }

    pub fn describe(&self) -> String {
        match &self.rule {
            Rule::Explicit(v) => format!("explicit[{}]", v.len()),
            Rule::PowerLaw { c, b } => format!("power:{c},{b}"),
            Rule::LogLaw => "log".to_string(),
            Rule::Constant(a) => format!("const:{},{}", a.re, a.im),
            Rule::Custom(_) => "custom".to_string(),
        }
    }

    /// Length of the sequence, `None` when infinite.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> Option<usize> {
        match &self.rule {
            Rule::Explicit(v) => Some(v.len()),
            _ => None,
        }
    }

    /// Parameters `(C, b)` when this is a power law.
    pub fn power_params(&self) -> Option<(f64, f64)> {
        match self.rule {
            Rule::PowerLaw { c, b } => Some((c, b)),
            _ => None,
        }
    }

    pub fn is_log_law(&self) -> bool {
        matches!(self.rule, Rule::LogLaw)
    }

    /// `α_n`, checked to lie in the open unit disk.
    pub fn get(&self, n: usize) -> Result<Complex64> {
        let z = match &self.rule {
            Rule::Explicit(v) => *v.get(n).ok_or(Error::Index { index: n, len: v.len() })?,
            Rule::PowerLaw { c, b } => Complex64::new(-c * (n as f64 + 2.0).powf(-b), 0.0),
            Rule::LogLaw => Complex64::new(-1.0 / (n as f64 + 3.0).ln(), 0.0),
            Rule::Constant(a) => *a,
            Rule::Custom(f) => f(n),
        };
        if !(z.norm() < 1.0) {
            return Err(Error::domain(format!("|α_{n}| = {} is not < 1", z.norm())));
        }
        Ok(z)
    }

    /// `α_0, …, α_{n-1}`.
    pub fn prefix(&self, n: usize) -> Result<Vec<Complex64>> {
        if let Rule::Explicit(v) = &self.rule {
            if n > v.len() {
                return Err(Error::Index { index: n - 1, len: v.len() });
            }
        }
        (0..n).map(|j| self.get(j)).collect()
    }

    /// Whether every coefficient is real. Rules are decided structurally;
    /// custom rules are probed on the first `probe` indices.
    pub fn is_real(&self, probe: usize) -> bool {
        match &self.rule {
            Rule::Explicit(v) => v.iter().all(|z| z.im == 0.0),
            Rule::PowerLaw { .. } | Rule::LogLaw => true,
            Rule::Constant(a) => a.im == 0.0,
            Rule::Custom(f) => (0..probe).all(|n| f(n).im == 0.0),
        }
    }
}

/// `θ_α = 2 arcsin |α|`, the half-width of the gap arc of the constant
/// sequence `α, α, …`.
pub fn theta_alpha(alpha: Complex64) -> Result<f64> {
    let r = alpha.norm();
    if !(r < 1.0) {
        return Err(Error::domain(format!("|α| = {r} is not < 1")));
    }
    Ok(2.0 * r.asin())
}

/// The region `P_α = { z ∈ 𝔻 : Re z ≤ Re α }` for a reference `α` in the disk
/// `|z + 1/2| < 1/2`. Only real `α` are used downstream.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionP {
    alpha: f64,
}

impl RegionP {
    pub fn new(alpha: f64) -> Result<Self> {
        if !((alpha + 0.5).abs() < 0.5) {
            return Err(Error::domain(format!("reference α = {alpha} not in (-1, 0)")));
        }
        Ok(RegionP { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn contains(&self, z: Complex64) -> bool {
        in_region_p(z, self)
    }
}

pub fn in_region_p(z: Complex64, region: &RegionP) -> bool {
    z.norm() < 1.0 && z.re <= region.alpha
}

/// The control function `f` of the slow-decay conditions.
#[derive(Clone)]
pub struct DecayProfile {
    kind: ProfileKind,
    rule: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum ProfileKind {
    /// `f(n) = -C n^{-b}`
    Power {
        c: f64,
        b: f64,
    },
    General,
}

impl fmt::Debug for DecayProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DecayProfile({:?})", self.kind)
    }
}

impl DecayProfile {
    pub fn power(c: f64, b: f64) -> Result<Self> {
        if !(c > 0.0) || !(b > 0.0 && b < 1.0) {
            return Err(Error::domain(format!("power profile needs C > 0 and 0 < b < 1, got C={c}, b={b}")));
        }
        Ok(DecayProfile { kind: ProfileKind::Power { c, b }, rule: Arc::new(move |n| -c * n.powf(-b)) })
    }

    /// `f(n) = -1 / log(n + 3)`.
    pub fn log() -> Self {
        Self::general(|n| -1.0 / (n + 3.0).ln())
    }

    /// Any rule; it is evaluated at real arguments since conditions (i) and
    /// (iii) sample `f` at `n - k√n`.
    pub fn general(rule: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        DecayProfile { kind: ProfileKind::General, rule: Arc::new(rule) }
    }

    /// The natural control function of a sequence: `f(n) = α_n` extended to
    /// real `n`. Power laws get `f(n) = -C (n+2)^{-b}` (tagged general, since
    /// the shift takes it outside the pure power case).
    pub fn matching(seq: &VerblunskySequence) -> Option<Self> {
        if let Some((c, b)) = seq.power_params() {
            return Some(Self::general(move |n| -c * (n + 2.0).powf(-b)));
        }
        if seq.is_log_law() {
            return Some(Self::log());
        }
        None
    }

    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    pub fn eval(&self, n: f64) -> f64 {
        (self.rule)(n)
    }
}

/// One flag per slow-decay condition, plus the numbers behind each.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub n_max: usize,
    /// Condition (i): power case, or `√n f(n-√n)²` increasing over the last
    /// decade and above [`DIVERGENCE_THRESHOLD`] at `n_max`.
    pub cond_i: bool,
    pub cond_i_power_case: bool,
    pub cond_i_divergence_value: f64,
    pub cond_i_increasing: bool,
    /// Condition (ii): `f(n) < f(n+1) < 0` on `1..n_max` and `|f|` shrinking.
    pub cond_ii: bool,
    /// Condition (iii): worst `|f(n-k√n)/f(n) - 1|` over `k ≤ k_max`.
    pub cond_iii: bool,
    pub cond_iii_worst: f64,
    /// Condition (iv): `|α_n / f(n) - 1|` at `n_max`.
    pub cond_iv: bool,
    pub cond_iv_value: f64,
    /// Condition (v): smallest `m₀` with `Re α_n ≤ f(m)` for all
    /// `n ≤ m`, `m₀ ≤ m ≤ n_max`. Reported, not asserted.
    pub cond_v_m0: Option<usize>,
}

impl ValidationReport {
    /// Conditions (i)–(iv). Condition (v) is informational.
    pub fn passes(&self) -> bool {
        self.cond_i && self.cond_ii && self.cond_iii && self.cond_iv
    }
}

/// Numerical stand-in for `√n f(n-√n)² → ∞`.
pub const DIVERGENCE_THRESHOLD: f64 = 1.0;

pub fn validate_slow_decay(
    profile: &DecayProfile,
    seq: &VerblunskySequence,
    n_max: usize,
    k_max: usize,
    tol: f64,
) -> Result<ValidationReport> {
    if n_max < 100 {
        return Err(Error::domain(format!("n_max = {n_max} must be at least 100")));
    }
    if k_max < 1 {
        return Err(Error::domain("k_max must be at least 1"));
    }
    let alphas = seq.prefix(n_max + 1)?;
    let f = |n: f64| profile.eval(n);
    let nf = n_max as f64;

    let q = |n: f64| n.sqrt() * f(n - n.sqrt()).powi(2);
    let decade: Vec<f64> = (0..=10).map(|i| nf / 10.0 * 10f64.powf(i as f64 / 10.0)).collect();
    let cond_i_increasing = decade.windows(2).all(|w| q(w[0]) < q(w[1]));
    let cond_i_divergence_value = q(nf);
    let cond_i_power_case = matches!(profile.kind, ProfileKind::Power { .. });
    let cond_i = cond_i_power_case || (cond_i_increasing && cond_i_divergence_value > DIVERGENCE_THRESHOLD);

    let monotone = (1..n_max).all(|n| {
        let (a, b) = (f(n as f64), f(n as f64 + 1.0));
        a < b && b < 0.0
    });
    let cond_ii = monotone && f(nf).abs() < f((nf / 10.0).ceil()).abs();

    let cond_iii_worst = (1..=k_max)
        .map(|k| {
            let arg = (nf - k as f64 * nf.sqrt()).floor();
            (f(arg) / f(nf) - 1.0).abs()
        })
        .fold(0.0, f64::max);
    let cond_iii = cond_iii_worst < tol;

    let cond_iv_value = (alphas[n_max] / f(nf) - 1.0).norm();
    let cond_iv = cond_iv_value < tol;

    // prefix maximum of Re α_n for n ≤ m, compared with f(m), scanning down.
    let mut running = f64::NEG_INFINITY;
    let holds: Vec<bool> = (0..=n_max)
        .map(|m| {
            running = running.max(alphas[m].re);
            m >= 1 && running <= f(m as f64)
        })
        .collect();
    let cond_v_m0 = if holds[n_max] {
        let mut m0 = n_max;
        while m0 > 1 && holds[m0 - 1] {
            m0 -= 1;
        }
        Some(m0)
    } else {
        None
    };

    Ok(ValidationReport {
        n_max,
        cond_i,
        cond_i_power_case,
        cond_i_divergence_value,
        cond_i_increasing,
        cond_ii,
        cond_iii,
        cond_iii_worst,
        cond_iv,
        cond_iv_value,
        cond_v_m0,
    })
}
