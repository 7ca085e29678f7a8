//! Experiment drivers behind the `opuc` binary.
//!
//! Each subcommand resolves its defaults, runs, and produces an [`Outcome`]:
//! a JSON object `{config, results, pass}` or a CSV table with a header row.
//! `pass` is false exactly when an asserted bound fails, and the binary maps
//! that to a nonzero exit code. Random trials draw from ChaCha8 with one
//! stream per trial, so output is independent of scheduling.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cmv::{self, chordal_distance, eigenvalue_ball, gamma_for_power, trial_nu, trial_upsilon, CmvOperator};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::measures::{pure_point_scan_with, DEFAULT_PUNCTURE};
use crate::phase::{gap_measurements, interlaces, GapMeasurements, PhaseFunction, Side, ZeroSet, DEFAULT_TOL_RAD};
use crate::szego::{interior_roots_with, polynomials_from_dd, AberthOptions};
use crate::verblunsky::{validate_slow_decay, DecayProfile, ValidationReport, VerblunskySequence};
use crate::TAU;

#[derive(Parser, Debug, Clone)]
#[command(name = "opuc", version, about = "Zeros of paraorthogonal polynomials on the unit circle")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Zeros of the degree-34 paraorthogonal polynomial and its gap at 1.
    Figure1,
    /// k-th zero from 1 against 2|f(M)| over a list of degrees.
    GapTrend,
    /// Normalized zero spacing on the arc away from 1.
    Clock,
    /// Trial-vector residual of the truncated CMV operator.
    Residual,
    /// Spectral distance from 1 against 2|α_{n-1}|.
    Resolvent,
    /// Pole scan of the perturbed Carathéodory function on the gap arc.
    Purepoints,
    /// Interior roots of Φ_n stay out of the wedge at 1.
    Wedge,
    /// Slow-decay conditions for a sequence and its control function.
    ValidateProfile,
}

#[derive(Args, Debug, Clone, Default, Serialize)]
pub struct Options {
    /// `power:C,b` | `log` | `zeros` | `const:re,im` | `file:PATH`
    #[arg(long, global = true)]
    pub seq: Option<String>,
    /// Degree.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Comma-separated degrees.
    #[arg(long = "n-list", global = true, value_delimiter = ',')]
    pub n_list: Option<Vec<usize>>,
    /// Boundary parameter as an angle: β = e^{iξ}.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub xi: Option<f64>,
    /// Zero index counted from 1.
    #[arg(long, global = true)]
    pub k: Option<usize>,
    /// Bisection tolerance in radians; profile tolerance for `validate-profile`.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Grid points on the gap arc.
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Base seed; trial `t` uses stream `t`.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Reference coefficient for the gap arc and region P_α.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Number of random trials.
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// Allowed deviation in `clock`.
    #[arg(long, global = true)]
    pub eps: Option<f64>,
    /// Trial vector for `residual`.
    #[arg(long, global = true, value_enum)]
    pub vector: Option<VectorKind>,
    #[arg(long, global = true, value_enum)]
    pub profile: Option<ProfileChoice>,
    /// Write to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Disable data parallelism.
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    #[default]
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VectorKind {
    Nu,
    Upsilon,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProfileChoice {
    /// `-C n^{-b}` or `-1/log(n+3)`.
    Literal,
    /// `f(n) = α_n` extended to real `n`.
    Matching,
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(headers: &[&'static str]) -> Self {
        Table { headers: headers.to_vec(), rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }
}

macro_rules! row {
    ($($x:expr),* $(,)?) => { vec![$($x.to_string()),*] };
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub command: Command,
    pub config: Value,
    pub results: Value,
    pub table: Table,
    pub pass: bool,
}

impl Outcome {
    pub fn write<W: Write>(&self, format: Format, mut out: W) -> Result<()> {
        match format {
            Format::Json => {
                let doc = json!({ "config": self.config, "results": self.results, "pass": self.pass });
                serde_json::to_writer_pretty(&mut out, &doc)?;
                writeln!(out)?;
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.table.headers)?;
                for r in &self.table.rows {
                    w.write_record(r)?;
                }
                w.flush()?;
            }
        }
        Ok(())
    }
}

/// Writes the outcome to `--out` or stdout.
pub fn emit(outcome: &Outcome, opts: &Options) -> Result<()> {
    match &opts.out {
        Some(path) => outcome.write(opts.format, BufWriter::new(File::create(path)?)),
        None => outcome.write(opts.format, io::stdout().lock()),
    }
}

pub fn beta_from_xi(xi: f64) -> Complex64 {
    Complex64::from_polar(1.0, xi)
}

/// Whether a real, negative, increasing sequence with `|α_{n-1}| < 1/2` and
/// this `ξ` certifies `arg ζ_1 ≥ θ_{α_{n-1}}`: the Blaschke phase bound keeps
/// `e^{iθ}b_{n-1}` within `π/2 + θ_α/2` of 1 on the gap arc.
pub fn zero_free_arc_applies(alphas: &[Complex64], xi: f64) -> bool {
    let Some(last) = alphas.last() else { return false };
    let real_increasing =
        alphas.iter().all(|a| a.im == 0.0 && a.re < 0.0) && alphas.windows(2).all(|w| w[0].re < w[1].re);
    let half = last.norm().asin();
    let x = xi.rem_euclid(TAU);
    real_increasing && last.norm() < 0.5 && x >= FRAC_PI_2 + half && x <= 3.0 * FRAC_PI_2 - half
}

/// `2 arcsin|α|`.
fn theta_of(a: Complex64) -> f64 {
    2.0 * a.norm().min(1.0).asin()
}

fn seq_or(opts: &Options, default: &str) -> Result<(String, VerblunskySequence)> {
    let spec = opts.seq.clone().unwrap_or_else(|| default.to_string());
    let seq = VerblunskySequence::parse(&spec)?;
    Ok((spec, seq))
}

fn exec_of(opts: &Options) -> Exec {
    if opts.sequential {
        Exec::Sequential
    } else {
        Exec::default()
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let o = &cli.opts;
    let exec = exec_of(o);
    let tol = o.tol.unwrap_or(DEFAULT_TOL_RAD);
    let xi = o.xi.unwrap_or(PI);
    match cli.command {
        Command::Figure1 => {
            let (spec, seq) = seq_or(o, "power:1,0.25")?;
            let n = o.n.unwrap_or(34);
            let r = figure1(&seq, n, xi, tol, exec)?;
            let mut table = Table::new(&["k", "arg", "re", "im"]);
            for (k, &t) in r.zeros.args.iter().enumerate() {
                table.push(row![k + 1, t, t.cos(), t.sin()]);
            }
            let config = json!({ "command": cli.command, "seq": spec, "n": n, "xi": xi, "tol": tol });
            Ok(Outcome { command: cli.command, config, pass: r.pass, results: serde_json::to_value(&r)?, table })
        }
        Command::GapTrend => {
            let (spec, seq) = seq_or(o, "power:1,0.25")?;
            let list = o.n_list.clone().unwrap_or_else(|| vec![1_000, 10_000, 100_000]);
            let k = o.k.unwrap_or(1);
            let r = gap_trend(&seq, &list, xi, k, tol, exec)?;
            let mut table = Table::new(&[
                "m",
                "arg_ccw",
                "gap_cw",
                "two_f",
                "ratio",
                "ratio_cw",
                "lower_bound",
                "bound_applies",
                "margin",
            ]);
            for x in &r.rows {
                table.push(row![
                    x.m,
                    x.arg_ccw,
                    x.gap_cw,
                    x.two_f,
                    x.ratio,
                    x.ratio_cw,
                    x.lower_bound,
                    x.bound_applies,
                    x.margin
                ]);
            }
            let config = json!({
                "command": cli.command, "seq": spec, "n_list": list, "xi": xi, "eps_tilde": r.eps_tilde, "k": k, "tol": tol,
            });
            Ok(Outcome { command: cli.command, config, pass: r.pass, results: serde_json::to_value(&r)?, table })
        }
        Command::Clock => {
            let (spec, seq) = seq_or(o, "power:1,0.25")?;
            let n = o.n.unwrap_or(2000);
            let eps = o.eps.unwrap_or(0.1);
            let (r, arcs) = clock(&seq, n, xi, eps, tol, exec)?;
            let mut table = Table::new(&["k", "arg", "normalized_spacing"]);
            for (k, t, s) in arcs {
                table.push(row![k, t, s]);
            }
            let config = json!({ "command": cli.command, "seq": spec, "n": n, "xi": xi, "eps": eps, "tol": tol });
            Ok(Outcome { command: cli.command, config, pass: r.pass, results: serde_json::to_value(&r)?, table })
        }
        Command::Residual => {
            let (spec, seq) = seq_or(o, "power:1,0.25")?;
            let list = o.n_list.clone().or(o.n.map(|n| vec![n])).unwrap_or_else(|| vec![1_000, 10_000, 100_000]);
            let vector =
                o.vector.unwrap_or(if seq.power_params().is_some() { VectorKind::Nu } else { VectorKind::Upsilon });
            let rows = residual_runs(&seq, &list, xi, vector, tol, exec)?;
            let pass = rows.iter().all(|r| r.pass);
            let mut table = Table::new(&[
                "n",
                "vector",
                "gamma",
                "residual",
                "f_abs",
                "scaled",
                "bound",
                "ball_angular",
                "nearest_chordal",
                "ball_contains",
                "pass",
            ]);
            for x in &rows {
                let gamma = x.gamma.map_or(String::new(), |g| g.to_string());
                table.push(row![
                    x.n,
                    format!("{:?}", x.vector).to_lowercase(),
                    gamma,
                    x.residual,
                    x.f_abs,
                    x.scaled,
                    x.bound,
                    x.ball_angular,
                    x.nearest_chordal,
                    x.ball_contains,
                    x.pass,
                ]);
            }
            let config =
                json!({ "command": cli.command, "seq": spec, "n_list": list, "xi": xi, "vector": vector, "tol": tol });
            Ok(Outcome { command: cli.command, config, pass, results: serde_json::to_value(&rows)?, table })
        }
        Command::Resolvent => {
            let (spec, seq) = seq_or(o, "power:1,0.25")?;
            let list = o.n_list.clone().or(o.n.map(|n| vec![n])).unwrap_or_else(|| vec![50, 100, 200, 500]);
            let rows = exec.try_map_indexed(list.len(), |i| cmv::resolvent_gap_check(&seq, list[i]))?;
            let pass = rows.iter().all(|r| r.pass);
            let mut table = Table::new(&["n", "min_distance", "bound", "inner_bound", "pass"]);
            for x in &rows {
                table.push(row![x.n, x.min_distance, x.bound, x.inner_bound, x.pass]);
            }
            let config = json!({ "command": cli.command, "seq": spec, "n_list": list });
            Ok(Outcome { command: cli.command, config, pass, results: serde_json::to_value(&rows)?, table })
        }
        Command::Purepoints => {
            let alpha = o.alpha.unwrap_or(-0.3);
            let n = o.n.unwrap_or(50);
            let grid = o.grid.unwrap_or(1000);
            let seed = o.seed.unwrap_or(11);
            let trials = if o.seq.is_some() { 1 } else { o.trials.unwrap_or(1000) };
            let seq = o.seq.as_deref().map(VerblunskySequence::parse).transpose()?;
            let rows = purepoints(seq.as_ref(), n, alpha, grid, trials, seed, exec)?;
            let pass = rows.iter().all(|r| r.pass);
            let mut table = Table::new(&["trial", "hypothesis_ok", "candidates", "candidates_refined"]);
            for x in &rows {
                table.push(row![x.trial, x.hypothesis_ok, x.candidates.len(), x.candidates_refined]);
            }
            let config = json!({
                "command": cli.command, "seq": o.seq.as_deref().unwrap_or("random-in-region"), "n": n, "alpha": alpha,
                "grid": grid, "refined_grid": 2 * grid, "trials": trials, "seed": seed, "puncture": DEFAULT_PUNCTURE,
            });
            Ok(Outcome { command: cli.command, config, pass, results: serde_json::to_value(&rows)?, table })
        }
        Command::Wedge => {
            let alpha = o.alpha.unwrap_or(-0.3);
            let n = o.n.unwrap_or(30);
            let trials = o.trials.unwrap_or(100);
            let seed = o.seed.unwrap_or(7);
            let res_tol = o.tol.unwrap_or(1e-10);
            let rows = wedge(alpha, n, trials, seed, res_tol, exec)?;
            let pass = rows.iter().all(|r| r.pass);
            let mut table =
                Table::new(&["trial", "max_residual", "interior_roots", "min_interior_abs_arg", "violations", "pass"]);
            for x in &rows {
                table.push(row![
                    x.trial,
                    x.max_residual,
                    x.interior_roots,
                    x.min_interior_abs_arg,
                    x.violations,
                    x.pass
                ]);
            }
            let config = json!({
                "command": cli.command, "alpha": alpha, "n": n, "trials": trials, "seed": seed, "residual_tol": res_tol,
                "theta_alpha": 2.0 * alpha.abs().asin(),
            });
            Ok(Outcome { command: cli.command, config, pass, results: serde_json::to_value(&rows)?, table })
        }
        Command::ValidateProfile => {
            let (spec, seq) = seq_or(o, "log")?;
            let n_max = o.n.unwrap_or(1_000_000);
            let k_max = o.k.unwrap_or(3);
            let ptol = o.tol.unwrap_or(1e-2);
            let choice = o.profile.unwrap_or(ProfileChoice::Literal);
            let r = validate_profile(&seq, choice, n_max, k_max, ptol)?;
            let mut table = Table::new(&["condition", "pass", "value"]);
            let i_branch = if r.cond_i_power_case { "power" } else { "divergence" };
            table.push(row![format!("i ({i_branch})"), r.cond_i, r.cond_i_divergence_value]);
            table.push(row!["ii", r.cond_ii, ""]);
            table.push(row!["iii", r.cond_iii, r.cond_iii_worst]);
            table.push(row!["iv", r.cond_iv, r.cond_iv_value]);
            table.push(row!["v", r.cond_v_m0.is_some(), r.cond_v_m0.map_or(String::new(), |m| m.to_string())]);
            let config = json!({
                "command": cli.command, "seq": spec, "profile": choice, "n_max": n_max, "k_max": k_max, "tol": ptol,
            });
            let mut results = serde_json::to_value(&r)?;
            results["cond_i_branch"] = json!(i_branch);
            Ok(Outcome { command: cli.command, config, pass: r.passes(), results, table })
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Figure1 {
    pub zeros: ZeroSet,
    pub gaps: GapMeasurements,
    /// `θ_{α_{n-1}} = 2 arcsin|α_{n-1}|`
    pub lower_bound: f64,
    pub bound_applies: bool,
    pub bound_holds: bool,
    pub partner_xi: f64,
    pub interlaces: bool,
    pub pass: bool,
}

/// Zeros for `β = e^{iξ}`, their gaps, the finite-`n` zero-free arc, and
/// interlacing against `ξ + π/2`.
pub fn figure1(seq: &VerblunskySequence, n: usize, xi: f64, tol: f64, exec: Exec) -> Result<Figure1> {
    let phase = PhaseFunction::new(seq, n)?;
    let zeros = phase.zeros(beta_from_xi(xi), tol, exec)?;
    let gaps = gap_measurements(&zeros);
    let alphas = seq.prefix(n)?;
    let last = alphas[n - 1];
    let lower_bound = theta_of(last);
    let bound_applies = zero_free_arc_applies(&alphas, xi);
    let bound_holds = gaps.gap_ccw >= lower_bound && gaps.gap_cw >= lower_bound;
    let partner_xi = xi + FRAC_PI_2;
    let partner = phase.zeros(beta_from_xi(partner_xi), tol, exec)?;
    let interlaces = interlaces(&zeros, &partner);
    let pass = zeros.args.len() == n && (!bound_applies || bound_holds) && interlaces;
    Ok(Figure1 { zeros, gaps, lower_bound, bound_applies, bound_holds, partner_xi, interlaces, pass })
}

#[derive(Debug, Clone, Serialize)]
pub struct GapTrendRow {
    pub m: usize,
    /// `arg ζ_k`
    pub arg_ccw: f64,
    /// `2π - arg ζ_{M-k+1}`
    pub gap_cw: f64,
    /// `2|f(M)|` with `f(M) = α_M`
    pub two_f: f64,
    pub ratio: f64,
    pub ratio_cw: f64,
    pub lower_bound: f64,
    pub bound_applies: bool,
    pub margin: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct GapTrend {
    pub k: usize,
    pub eps_tilde: f64,
    pub rows: Vec<GapTrendRow>,
    pub ratio_decreasing: bool,
    /// Largest `|arg ζ_k - (2π - arg ζ_{M-k+1})|`, when the data are symmetric.
    pub symmetry_defect: Option<f64>,
    pub pass: bool,
}

pub fn gap_trend(
    seq: &VerblunskySequence,
    m_list: &[usize],
    xi: f64,
    k: usize,
    tol: f64,
    exec: Exec,
) -> Result<GapTrend> {
    if m_list.is_empty() || m_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain("degree list must be nonempty and strictly increasing"));
    }
    let x = xi.rem_euclid(TAU);
    let eps_tilde = (x - FRAC_PI_2).min(3.0 * FRAC_PI_2 - x);
    if !(eps_tilde > 0.0) {
        return Err(Error::domain(format!("ξ = {xi} must lie strictly inside (π/2, 3π/2)")));
    }
    let beta = beta_from_xi(xi);
    let symmetric = beta.im.abs() < 1e-15 && seq.is_real(*m_list.last().unwrap() + 1);
    let rows = exec.try_map_indexed(m_list.len(), |i| {
        let m = m_list[i];
        let alphas = seq.prefix(m + 1)?;
        let phase = PhaseFunction::from_prefix(alphas[..m - 1].to_vec())?;
        let arg_ccw = phase.kth_zero(beta, k, Side::Ccw, tol)?;
        let cw = phase.kth_zero(beta, k, Side::Cw, tol)?;
        let gap_cw = if cw == 0.0 { 0.0 } else { TAU - cw };
        let two_f = 2.0 * alphas[m].norm();
        let lower_bound = theta_of(alphas[m - 1]);
        Ok::<_, Error>(GapTrendRow {
            m,
            arg_ccw,
            gap_cw,
            two_f,
            ratio: arg_ccw / two_f,
            ratio_cw: gap_cw / two_f,
            lower_bound,
            bound_applies: zero_free_arc_applies(&alphas[..m], xi),
            margin: arg_ccw.min(gap_cw) - lower_bound,
        })
    })?;
    let ratio_decreasing = rows.windows(2).all(|w| w[1].ratio < w[0].ratio);
    let symmetry_defect = symmetric.then(|| rows.iter().map(|r| (r.arg_ccw - r.gap_cw).abs()).fold(0.0, f64::max));
    let pass = rows.iter().all(|r| !r.bound_applies || r.margin > 0.0) && symmetry_defect.is_none_or(|d| d <= 1e-9);
    Ok(GapTrend { k, eps_tilde, rows, ratio_decreasing, symmetry_defect, pass })
}

#[derive(Debug, Clone, Serialize)]
pub struct Clock {
    pub n: usize,
    /// Spacings with both ends in `(π/2, 3π/2)`.
    pub count: usize,
    pub mean: f64,
    pub max_deviation: f64,
    pub eps: f64,
    pub pass: bool,
}

/// `(k, arg ζ_k, (arg ζ_{k+1} - arg ζ_k)·n/2π)`.
pub type ClockSpacing = (usize, f64, f64);

/// `spacing·n/2π` on the arc `(π/2, 3π/2)`.
pub fn clock(
    seq: &VerblunskySequence,
    n: usize,
    xi: f64,
    eps: f64,
    tol: f64,
    exec: Exec,
) -> Result<(Clock, Vec<ClockSpacing>)> {
    if n < 100 {
        return Err(Error::domain(format!("clock needs n ≥ 100, got {n}")));
    }
    let zeros = PhaseFunction::new(seq, n)?.zeros(beta_from_xi(xi), tol, exec)?;
    let on_arc = |t: f64| t > FRAC_PI_2 && t < 3.0 * FRAC_PI_2;
    let arcs: Vec<ClockSpacing> = zeros
        .args
        .windows(2)
        .enumerate()
        .filter(|(_, w)| on_arc(w[0]) && on_arc(w[1]))
        .map(|(k, w)| (k + 1, w[0], (w[1] - w[0]) * n as f64 / TAU))
        .collect();
    let count = arcs.len();
    let mean = arcs.iter().map(|a| a.2).sum::<f64>() / count.max(1) as f64;
    let max_deviation = arcs.iter().map(|a| (a.2 - 1.0).abs()).fold(0.0, f64::max);
    let pass = count > 0 && max_deviation <= eps;
    Ok((Clock { n, count, mean, max_deviation, eps, pass }, arcs))
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidualRow {
    pub n: usize,
    pub vector: VectorKind,
    pub gamma: Option<usize>,
    pub residual: f64,
    /// Decay scale the bound is measured in.
    pub f_abs: f64,
    /// `residual / f_abs`
    pub scaled: f64,
    /// `2.2·f_abs`
    pub bound: f64,
    pub ball_angular: f64,
    /// `min(|ζ_1 - 1|, |ζ_n - 1|)`
    pub nearest_chordal: f64,
    pub ball_contains: bool,
    pub pass: bool,
}

/// Residual constant for both trial vectors.
pub const RESIDUAL_CONSTANT: f64 = 2.2;

/// `|f|` at a real index: exact for power and log laws, else `|α_{⌊x⌋}|`.
fn f_abs_at(seq: &VerblunskySequence, x: f64) -> Result<f64> {
    if let Some((c, b)) = seq.power_params() {
        return Ok(c * (x + 2.0).powf(-b));
    }
    if seq.is_log_law() {
        return Ok(1.0 / (x + 3.0).ln());
    }
    Ok(seq.get(x.floor() as usize)?.norm())
}

pub fn residual_run(seq: &VerblunskySequence, n: usize, xi: f64, vector: VectorKind, tol: f64) -> Result<ResidualRow> {
    let c = CmvOperator::new(seq, n, beta_from_xi(xi))?;
    let (v, gamma, f_abs) = match vector {
        VectorKind::Nu => {
            let (cc, b) =
                seq.power_params().ok_or_else(|| Error::domain("the ν trial vector needs a power-law sequence"))?;
            let g = gamma_for_power(n, b);
            (trial_nu(n, g)?, Some(g), cc * (n as f64).powf(-b))
        }
        VectorKind::Upsilon => (trial_upsilon(n)?, None, f_abs_at(seq, n as f64 - (n as f64).sqrt())?),
    };
    let residual = cmv::residual(&c, &v.entries)?;
    let phase = PhaseFunction::new(seq, n)?;
    let beta = beta_from_xi(xi);
    let ccw = phase.kth_zero(beta, 1, Side::Ccw, tol)?;
    let cw = phase.kth_zero(beta, 1, Side::Cw, tol)?;
    let nearest_chordal = chordal_distance(ccw).min(chordal_distance(cw));
    let (ball_angular, ball_contains) = match eigenvalue_ball(residual) {
        Ok(b) => (b.angular, nearest_chordal <= b.chordal),
        Err(_) => (PI, true),
    };
    let bound = RESIDUAL_CONSTANT * f_abs;
    Ok(ResidualRow {
        n,
        vector,
        gamma,
        residual,
        f_abs,
        scaled: residual / f_abs,
        bound,
        ball_angular,
        nearest_chordal,
        ball_contains,
        pass: residual <= bound && ball_contains,
    })
}

pub fn residual_runs(
    seq: &VerblunskySequence,
    list: &[usize],
    xi: f64,
    vector: VectorKind,
    tol: f64,
    exec: Exec,
) -> Result<Vec<ResidualRow>> {
    exec.try_map_indexed(list.len(), |i| residual_run(seq, list[i], xi, vector, tol))
}

#[derive(Debug, Clone, Serialize)]
pub struct PurePointRow {
    pub trial: usize,
    pub hypothesis_ok: bool,
    pub offending: Vec<usize>,
    pub candidates: Vec<crate::measures::Candidate>,
    pub candidates_refined: usize,
    pub pass: bool,
}

/// Uniform on `{ z : |z| < radius, Re z ≤ α }`.
pub fn sample_region(rng: &mut impl Rng, alpha: f64, radius: f64) -> Complex64 {
    loop {
        let z = Complex64::new(rng.random_range(-radius..=alpha), rng.random_range(-radius..radius));
        if z.norm() < radius {
            return z;
        }
    }
}

/// Trial `t` of a seeded experiment draws from its own stream.
pub fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    rng
}

/// Random sequences from `P_α ∩ {|z| < 0.9}`, or one scan of `seq` when
/// given. Only trials meeting the hypothesis count towards `pass`.
pub fn purepoints(
    seq: Option<&VerblunskySequence>,
    n: usize,
    alpha: f64,
    grid: usize,
    trials: usize,
    seed: u64,
    exec: Exec,
) -> Result<Vec<PurePointRow>> {
    exec.try_map_indexed(trials, |t| {
        let s = match seq {
            Some(s) => s.clone(),
            None => {
                let mut rng = trial_rng(seed, t);
                VerblunskySequence::explicit((0..n).map(|_| sample_region(&mut rng, alpha, 0.9)).collect::<Vec<_>>())
            }
        };
        let coarse = pure_point_scan_with(&s, n, alpha, grid, DEFAULT_PUNCTURE, Exec::Sequential)?;
        let fine = pure_point_scan_with(&s, n, alpha, 2 * grid, DEFAULT_PUNCTURE, Exec::Sequential)?;
        let pass = !coarse.hypothesis_ok || (coarse.candidates.is_empty() && fine.candidates.is_empty());
        Ok(PurePointRow {
            trial: t,
            hypothesis_ok: coarse.hypothesis_ok,
            offending: coarse.offending,
            candidates: coarse.candidates,
            candidates_refined: fine.candidates.len(),
            pass,
        })
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct WedgeRow {
    pub trial: usize,
    pub max_residual: f64,
    pub interior_roots: usize,
    /// `min |arg z|` over roots with `|z| < 1`; `π` if there are none.
    pub min_interior_abs_arg: f64,
    pub violations: usize,
    pub pass: bool,
}

/// Roots of `Φ_n` for `α_j ~ U(-1, α)`, `j < n-1`, and `α_{n-1} = α`.
pub fn wedge(alpha: f64, n: usize, trials: usize, seed: u64, residual_tol: f64, exec: Exec) -> Result<Vec<WedgeRow>> {
    if !(alpha > -1.0 && alpha < 0.0) {
        return Err(Error::domain(format!("α = {alpha} not in (-1, 0)")));
    }
    if n < 1 {
        return Err(Error::domain("need n ≥ 1"));
    }
    let theta_a = 2.0 * alpha.abs().asin();
    exec.try_map_indexed(trials, |t| {
        let mut rng = trial_rng(seed, t);
        let mut alphas: Vec<Complex64> = (0..n - 1)
            .map(|_| loop {
                let a = rng.random_range(-1.0..alpha);
                if a > -1.0 {
                    break Complex64::new(a, 0.0);
                }
            })
            .collect();
        alphas.push(Complex64::new(alpha, 0.0));
        let phi = polynomials_from_dd(&alphas)?.phi;
        let opts = AberthOptions { tol: residual_tol, ..AberthOptions::default() };
        let (roots, residuals, converged) = match interior_roots_with(&phi, opts) {
            Ok(r) => (r.roots, r.residuals, true),
            Err(Error::NonConvergence { roots, residuals, .. }) => (roots, residuals, false),
            Err(e) => return Err(e),
        };
        let max_residual = residuals.iter().copied().fold(0.0, f64::max);
        let interior: Vec<&Complex64> = roots.iter().filter(|z| z.norm() < 1.0).collect();
        let min_interior_abs_arg = interior.iter().map(|z| z.arg().abs()).fold(PI, f64::min);
        let violations = interior.iter().filter(|z| z.arg().abs() < theta_a).count();
        Ok(WedgeRow {
            trial: t,
            max_residual,
            interior_roots: interior.len(),
            min_interior_abs_arg,
            violations,
            pass: converged && violations == 0,
        })
    })
}

pub fn validate_profile(
    seq: &VerblunskySequence,
    choice: ProfileChoice,
    n_max: usize,
    k_max: usize,
    tol: f64,
) -> Result<ValidationReport> {
    let profile = match choice {
        ProfileChoice::Literal => match seq.power_params() {
            Some((c, b)) => DecayProfile::power(c, b)?,
            None if seq.is_log_law() => DecayProfile::log(),
            None => return Err(Error::domain("literal profile needs a power or log sequence")),
        },
        ProfileChoice::Matching => {
            DecayProfile::matching(seq).ok_or_else(|| Error::domain("no matching profile for this sequence"))?
        }
    };
    validate_slow_decay(&profile, seq, n_max, k_max, tol)
}
