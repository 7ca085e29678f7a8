//! Acceptance suite: one line per criterion, nonzero exit if any fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{dense_eigenangles, max_matched_dist, sorted_args};
use opuc::cmv::{
    build_cmv, gamma_for_power, resolvent_gap_check, sign_pattern_invertibility, sign_pattern_matrix, trial_nu,
};
use opuc::exec::Exec;
use opuc::experiments::{clock, gap_trend, purepoints, residual_run, wedge, VectorKind};
use opuc::phase::{interlaces, popuc_zeros, PhaseFunction, Side};
use opuc::szego::{interior_roots_with, paraorthogonal_dd, AberthOptions};
use opuc::verblunsky::VerblunskySequence;
use opuc::{Complex64, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MINUS_ONE: Complex64 = Complex64::new(-1.0, 0.0);
const TOL: f64 = 1e-13;

struct Check {
    pass: bool,
    detail: String,
}

fn check(pass: bool, detail: impl Into<String>) -> Result<Check> {
    Ok(Check { pass, detail: detail.into() })
}

fn power(b: f64) -> VerblunskySequence {
    VerblunskySequence::power_law(1.0, b).expect("valid power law")
}

fn random_real(rng: &mut ChaCha8Rng, len: usize) -> VerblunskySequence {
    let v: Vec<f64> =
        (0..len).map(|_| -rng.random_range(0.0..0.9)).map(|x: f64| if x == 0.0 { -0.45 } else { x }).collect();
    VerblunskySequence::explicit_real(&v)
}

fn c1() -> Result<Check> {
    let mut worst = 0.0f64;
    for n in [4, 17, 256] {
        let zs = popuc_zeros(&VerblunskySequence::zeros(), n, MINUS_ONE, TOL)?;
        let err = (1..=n).map(|k| (zs.args[k - 1] - PI * (2 * k - 1) as f64 / n as f64).abs()).fold(0.0, f64::max);
        worst = worst.max(err);
    }
    check(worst <= 1e-12, format!("max error {worst:.2e}"))
}

fn c2() -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let n = rng.random_range(11..=60);
        let seq = random_real(&mut rng, n - 1);
        let phase = popuc_zeros(&seq, n, MINUS_ONE, TOL)?.args;
        let roots = interior_roots_with(&paraorthogonal_dd(&seq, n, MINUS_ONE)?, AberthOptions::default())?;
        let aberth = sorted_args(&roots.roots);
        let dense = dense_eigenangles(&build_cmv(&seq, n, MINUS_ONE)?);
        worst = worst
            .max(max_matched_dist(&phase, &aberth))
            .max(max_matched_dist(&phase, &dense))
            .max(max_matched_dist(&aberth, &dense));
    }
    check(worst <= 1e-9, format!("max pairwise angle gap {worst:.2e}"))
}

fn c3() -> Result<Check> {
    let seqs =
        [("b=1/4", power(0.25)), ("b=1/2", power(0.5)), ("b=3/4", power(0.75)), ("log", VerblunskySequence::log_law())];
    let mut pass = true;
    let mut min_margin = f64::INFINITY;
    let mut at = String::new();
    for (name, seq) in &seqs {
        for m in [34, 100, 1_000, 10_000] {
            let arg = PhaseFunction::new(seq, m)?.kth_zero(MINUS_ONE, 1, Side::Ccw, TOL)?;
            let margin = arg - 2.0 * seq.get(m - 1)?.norm().asin();
            pass &= margin > 0.0;
            if margin < min_margin {
                min_margin = margin;
                at = format!("{name} M={m}");
            }
        }
    }
    check(pass, format!("min margin {min_margin:.3e} at {at}"))
}

fn c4() -> Result<Check> {
    let t = gap_trend(&power(0.25), &[1_000, 10_000, 100_000], PI, 1, TOL, Exec::Parallel)?;
    let ratios: Vec<f64> = t.rows.iter().map(|r| r.ratio).collect();
    let in_range = ratios.iter().all(|r| (1.0..=1.5).contains(r));
    let defect = t.symmetry_defect.unwrap_or(f64::INFINITY);
    check(
        in_range && t.ratio_decreasing && defect <= 1e-9,
        format!("r1 = {ratios:.4?}, decreasing {}, cw defect {defect:.1e}", t.ratio_decreasing),
    )
}

fn c5() -> Result<Check> {
    let n = 100_000;
    let mut pass = true;
    let mut parts = Vec::new();
    for b in [0.25, 0.5] {
        let r = residual_run(&power(b), n, PI, VectorKind::Nu, TOL)?;
        pass &= r.scaled <= 2.2;
        parts.push(format!("nu b={b}: {:.4}", r.scaled));
    }
    let r = residual_run(&VerblunskySequence::log_law(), n, PI, VectorKind::Upsilon, TOL)?;
    let bound = 2.2 / (n as f64 - (n as f64).sqrt() + 3.0).ln();
    pass &= r.residual <= bound;
    parts.push(format!("upsilon log: {:.5} vs {bound:.5}", r.residual));
    check(pass, parts.join(", "))
}

fn c6() -> Result<Check> {
    let n = 100_000usize;
    let v = trial_nu(n, gamma_for_power(n, 0.25))?;
    let ratio = v.norm().powi(2) / ((n as f64).powf(25.0 / 8.0) / 30.0);
    let small = trial_nu(10, 0)?.norm().powi(2);
    check((0.95..=1.05).contains(&ratio) && small == 3333.0, format!("ratio {ratio:.5}, n=10 gives {small}"))
}

fn c7() -> Result<Check> {
    let mut pass = true;
    let mut parts = Vec::new();
    for n in [1_000, 10_000] {
        let r = residual_run(&power(0.25), n, PI, VectorKind::Nu, TOL)?;
        pass &= r.ball_contains;
        parts.push(format!("n={n}: ball {:.4} ⊇ {:.4}", r.residual, r.nearest_chordal));
    }
    check(pass, parts.join(", "))
}

fn c8() -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let other = Complex64::from_polar(1.0, 0.75 * PI);
    let mut ok = 0;
    for _ in 0..20 {
        let seq = random_real(&mut rng, 49);
        let a = popuc_zeros(&seq, 50, MINUS_ONE, TOL)?;
        let b = popuc_zeros(&seq, 50, other, TOL)?;
        ok += interlaces(&a, &b) as usize;
    }
    check(ok == 20, format!("{ok}/20 interlace"))
}

fn c9() -> Result<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut ok = 0;
    let mut min_det = f64::INFINITY;
    for _ in 0..10_000 {
        let n = rng.random_range(1..=16);
        let mag = |rng: &mut ChaCha8Rng| 10.0 - rng.random_range(0.0..10.0);
        let diag: Vec<f64> = (0..n).map(|_| mag(&mut rng)).collect();
        let off: Vec<f64> = (0..n - 1).map(|_| mag(&mut rng)).collect();
        let rep = sign_pattern_invertibility(&sign_pattern_matrix(&diag, &off)?)?;
        min_det = min_det.min(rep.scaled_det.abs());
        ok += (rep.pass && rep.scaled_det.abs() > 1e-12) as usize;
    }
    check(ok == 10_000, format!("{ok}/10000, min |scaled det| {min_det:.3e}"))
}

fn c10() -> Result<Check> {
    let seqs = [power(0.25), power(0.5), power(0.75), VerblunskySequence::log_law()];
    let mut ok = 0;
    let mut total = 0;
    for seq in &seqs {
        for n in [50, 100, 200, 500] {
            total += 1;
            ok += resolvent_gap_check(seq, n)?.pass as usize;
        }
    }
    let hand = resolvent_gap_check(&VerblunskySequence::explicit_real(&[-0.5]), 2)?.min_distance;
    let err = (hand - 3f64.sqrt()).abs();
    check(ok == total && err <= 1e-12, format!("{ok}/{total} pass, hand case error {err:.1e}"))
}

fn c11() -> Result<Check> {
    let rows = purepoints(None, 50, -0.3, 1_000, 1_000, 11, Exec::Parallel)?;
    let eligible = rows.iter().filter(|r| r.hypothesis_ok).count();
    let found: usize = rows.iter().map(|r| r.candidates.len() + r.candidates_refined).sum();
    check(eligible == rows.len() && found == 0, format!("{eligible}/{} in region, {found} candidates", rows.len()))
}

fn c12() -> Result<Check> {
    let rows = wedge(-0.3, 30, 100, 7, 1e-10, Exec::Parallel)?;
    let max_res = rows.iter().map(|r| r.max_residual).fold(0.0, f64::max);
    let violations: usize = rows.iter().map(|r| r.violations).sum();
    let all = rows.iter().all(|r| r.pass);
    check(all && max_res <= 1e-10, format!("{violations} roots in wedge, max residual {max_res:.1e}"))
}

fn c13() -> Result<Check> {
    let (c, _) = clock(&power(0.25), 2000, PI, 0.1, TOL, Exec::Parallel)?;
    check(c.pass, format!("max deviation {:.4} over {} spacings", c.max_deviation, c.count))
}

type Criterion = (fn() -> Result<Check>, Duration);

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        (c1, Duration::from_secs(1)),
        (c2, Duration::from_secs(30)),
        (c3, Duration::from_secs(60)),
        (c4, Duration::from_secs(300)),
        (c5, Duration::from_secs(60)),
        (c6, Duration::MAX),
        (c7, Duration::MAX),
        (c8, Duration::MAX),
        (c9, Duration::MAX),
        (c10, Duration::MAX),
        (c11, Duration::MAX),
        (c12, Duration::MAX),
        (c13, Duration::MAX),
    ];
    let mut failed = 0;
    for (i, (run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let (pass, detail) = match result {
            Ok(c) => (c.pass && elapsed < *limit, c.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let limit_note = if *limit == Duration::MAX { String::new() } else { format!(" (limit {}s)", limit.as_secs()) };
        println!(
            "criterion {:>2} {} {detail}; {:.2}s{limit_note}",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
        failed += !pass as usize;
    }
    println!("{} of 13 criteria pass", 13 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
