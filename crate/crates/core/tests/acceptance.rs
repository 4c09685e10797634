//! Acceptance suite. Run with `cargo test -p gpd-core --test acceptance`.
//!
//! Prints one `[PASS]`/`[FAIL]` line per criterion and exits non-zero if any
//! criterion fails. Every tolerance and time limit is pinned below.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{p1981, random_triples};
use gpd_core::commands::{cmd_table1_with, gini_series_table1, Table1Tolerances};
use gpd_core::inequality::first_moment_distribution_left;
use gpd_core::model::{exponential_approx, exponential_approx_remainder_bound};
use gpd_core::quadrature::DEFAULT_GRID_NODES;
use gpd_core::reference::table1;
use gpd_core::{
    build_first_moment_grid, empirical_gini, empirical_share, first_moment_distribution,
    fit_distribution, gini, gompertz_share, integrate, lorenz_curve, sample, theoretical_a,
    Execution, FitConfig, QuadratureConfig, SampleSpec,
};

const BETA_REL_TOL: f64 = 0.02;
const GINI_STAR_TOL: f64 = 0.01;
const U_STAR_TOL: f64 = 0.5;
const MAX_GINI_GAP: f64 = 0.045;
const EXPECTED_GAP_YEAR: i32 = 1992;
const EXPECTED_GAP: f64 = 0.041;
const EXPECTED_GAP_TOL: f64 = 0.0015;
const MAX_U_REL_GAP: f64 = 0.06;
const ORACLE_TRIPLES: usize = 200;
const ORACLE_LORENZ_POINTS: usize = 100_000;
const ORACLE_TOL: f64 = 5e-4;
const PROPERTY_TRIPLES: usize = 1000;
const CONTINUITY_TOL: f64 = 1e-9;
const NORMALIZATION_TOL: f64 = 1e-8;
const F1_CONTINUITY_TOL: f64 = 1e-6;
const CONVEXITY_REL_TOL: f64 = 1e-6;
const SHARE_IDENTITY_TOL: f64 = 1e-9;
const ROUND_TRIP_N: usize = 1_000_000;
const ROUND_TRIP_SEED: u64 = 1981;
const B_REL_TOL: f64 = 0.02;
const ALPHA_REL_TOL: f64 = 0.05;
const THRESHOLD_REL_TOL: f64 = 0.15;
const FIT_GINI_REF: f64 = 0.613;
const FIT_GINI_TOL: f64 = 0.02;
const MC_N: usize = 1_000_000;
const MC_SEED: u64 = 2006;
const MC_GINI_TOL: f64 = 0.005;
const MC_SHARE_TOL: f64 = 1.0;
const TAYLOR_GRID: usize = 2000;

type Outcome = Result<String, String>;
type Criterion = (&'static str, Option<Duration>, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within_time(limit: Option<Duration>, elapsed: Duration, outcome: Outcome) -> Outcome {
    match (limit, outcome) {
        (Some(l), Ok(d)) if elapsed > l => Err(format!("{d}; took {elapsed:.2?} > {l:?}")),
        (_, o) => o,
    }
}

fn table1_beta() -> Outcome {
    let mut worst = (0, 0.0f64);
    for row in table1() {
        let p = row.params().map_err(|e| e.to_string())?;
        let rel = (p.beta() / row.beta - 1.0).abs();
        if rel > worst.1 {
            worst = (row.year, rel);
        }
    }
    check(
        worst.1 <= BETA_REL_TOL,
        format!("24 rows, max relative beta error {:.4} ({})", worst.1, worst.0),
    )
}

fn table1_columns(pick_gini: bool) -> Outcome {
    let report = cmd_table1_with(
        &Table1Tolerances::default(),
        &QuadratureConfig::default(),
        false,
        Execution::default(),
    )
    .map_err(|e| e.to_string())?;
    let tol = if pick_gini { GINI_STAR_TOL } else { U_STAR_TOL };
    let mut worst = (0, 0.0f64);
    for r in &report.rows {
        let d = if pick_gini { r.gini_delta } else { r.u_delta }.abs();
        if d > worst.1 {
            worst = (r.year, d);
        }
    }
    check(
        report.rows.len() == 24 && worst.1 <= tol,
        format!("{} rows, max |delta| {:.4} ({})", report.rows.len(), worst.1, worst.0),
    )
}

fn discrepancy_claims() -> Outcome {
    let s = gini_series_table1(&QuadratureConfig::default()).map_err(|e| e.to_string())?;
    check(
        s.max_gini_gap <= MAX_GINI_GAP
            && s.max_gini_gap_year == EXPECTED_GAP_YEAR
            && (s.max_gini_gap - EXPECTED_GAP).abs() < EXPECTED_GAP_TOL
            && s.max_u_rel_gap <= MAX_U_REL_GAP,
        format!(
            "max Gini gap {:.4} in {}, max relative u gap {:.2}% in {}",
            s.max_gini_gap,
            s.max_gini_gap_year,
            100.0 * s.max_u_rel_gap,
            s.max_u_rel_gap_year
        ),
    )
}

fn theoretical_location() -> Outcome {
    let a = theoretical_a();
    let rounded = (a * 1e5).round() / 1e5;
    check(rounded == 1.52718, format!("ln ln 100 = {a:.10}"))
}

fn gini_oracle() -> Outcome {
    let cfg = QuadratureConfig::default();
    let triples = random_triples(ORACLE_TRIPLES, 606);
    let errors = Execution::default().map(&triples, |p| -> Result<f64, String> {
        let grid = build_first_moment_grid(p, DEFAULT_GRID_NODES, &cfg).map_err(|e| e.to_string())?;
        let closed = gini(p, &grid, &cfg).map_err(|e| e.to_string())?;
        let curve = lorenz_curve(p, ORACLE_LORENZ_POINTS, &grid).map_err(|e| e.to_string())?;
        Ok((closed - curve.gini()).abs())
    });
    let worst = errors
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .fold(0.0f64, f64::max);
    check(
        worst <= ORACLE_TOL,
        format!("{ORACLE_TRIPLES} triples, max |closed form - Lorenz area| {worst:.2e}"),
    )
}

#[derive(Default)]
struct PropertyWorst {
    continuity: f64,
    normalization: f64,
    f1_continuity: f64,
    share_identity: f64,
    non_convex: usize,
}

fn property_suite() -> Outcome {
    let cfg = QuadratureConfig::default();
    let tight = QuadratureConfig::new(1e-11, 1e-12, 60).map_err(|e| e.to_string())?;
    let triples = random_triples(PROPERTY_TRIPLES, 707);
    let rows = Execution::default().map(&triples, |p| -> Result<[f64; 5], String> {
        let q = p.pareto_ccdf(p.x_t());
        let continuity = (p.gompertz_ccdf(p.x_t()) - q).abs() / q;
        let body = integrate(|x| p.gompertz_density(x), 0.0, p.x_t(), &tight)
            .map_err(|e| e.to_string())?;
        let normalization = (body + q - 100.0).abs();
        let grid = build_first_moment_grid(p, DEFAULT_GRID_NODES, &cfg).map_err(|e| e.to_string())?;
        let right = first_moment_distribution(p.x_t(), p, &grid).map_err(|e| e.to_string())?;
        let f1_continuity = (first_moment_distribution_left(&grid) - right).abs();
        let u = gompertz_share(p, &grid).map_err(|e| e.to_string())?;
        let share_identity = (u - right).abs() / right;
        let convex = lorenz_curve(p, 256, &grid)
            .map_err(|e| e.to_string())?
            .is_convex(CONVEXITY_REL_TOL);
        Ok([
            continuity,
            normalization,
            f1_continuity,
            share_identity,
            if convex { 0.0 } else { 1.0 },
        ])
    });
    let mut w = PropertyWorst::default();
    for r in rows {
        let r = r?;
        w.continuity = w.continuity.max(r[0]);
        w.normalization = w.normalization.max(r[1]);
        w.f1_continuity = w.f1_continuity.max(r[2]);
        w.share_identity = w.share_identity.max(r[3]);
        w.non_convex += r[4] as usize;
    }
    check(
        w.continuity < CONTINUITY_TOL
            && w.normalization < NORMALIZATION_TOL
            && w.f1_continuity < F1_CONTINUITY_TOL
            && w.share_identity < SHARE_IDENTITY_TOL
            && w.non_convex == 0,
        format!(
            "{PROPERTY_TRIPLES} triples: continuity {:.1e}, normalization {:.1e}, F1 continuity {:.1e}, u identity {:.1e}, non-convex curves {}",
            w.continuity, w.normalization, w.f1_continuity, w.share_identity, w.non_convex
        ),
    )
}

fn fit_round_trip() -> Outcome {
    let p = p1981();
    let spec = SampleSpec::new(ROUND_TRIP_N, ROUND_TRIP_SEED).map_err(|e| e.to_string())?;
    let dist = sample(&spec, &p).map_err(|e| e.to_string())?;
    let r = fit_distribution(&dist, &FitConfig::default()).map_err(|e| e.to_string())?;
    let q = r.params;
    let cfg = QuadratureConfig::default();
    let grid = build_first_moment_grid(&q, DEFAULT_GRID_NODES, &cfg).map_err(|e| e.to_string())?;
    let g = gini(&q, &grid, &cfg).map_err(|e| e.to_string())?;
    let eb = (q.b() / p.b() - 1.0).abs();
    let ea = (q.alpha() / p.alpha() - 1.0).abs();
    let et = (q.x_t() / p.x_t() - 1.0).abs();
    check(
        eb <= B_REL_TOL
            && ea <= ALPHA_REL_TOL
            && et <= THRESHOLD_REL_TOL
            && (g - FIT_GINI_REF).abs() <= FIT_GINI_TOL,
        format!(
            "B {:.4} ({:.2}%), alpha {:.4} ({:.2}%), x_t {:.3} ({:.2}%), Gini {:.4}",
            q.b(),
            100.0 * eb,
            q.alpha(),
            100.0 * ea,
            q.x_t(),
            100.0 * et,
            g
        ),
    )
}

fn estimator_convergence() -> Outcome {
    let p = p1981();
    let cfg = QuadratureConfig::default();
    let grid = build_first_moment_grid(&p, DEFAULT_GRID_NODES, &cfg).map_err(|e| e.to_string())?;
    let g = gini(&p, &grid, &cfg).map_err(|e| e.to_string())?;
    let u = gompertz_share(&p, &grid).map_err(|e| e.to_string())?;
    let spec = SampleSpec::new(MC_N, MC_SEED).map_err(|e| e.to_string())?;
    let dist = sample(&spec, &p).map_err(|e| e.to_string())?;
    let eg = empirical_gini(&dist).map_err(|e| e.to_string())?;
    let es = empirical_share(&dist, p.x_t()).map_err(|e| e.to_string())?;
    check(
        (eg - g).abs() <= MC_GINI_TOL && (es - u).abs() <= MC_SHARE_TOL,
        format!("Gini {eg:.4} vs {g:.4}, share {es:.3} vs {u:.3}"),
    )
}

/// `exp(z) - (1 + z)` summed as its power series, free of cancellation.
fn taylor_tail(z: f64) -> f64 {
    let mut term = z * z / 2.0;
    let mut sum = 0.0;
    let mut k = 2.0;
    while term > sum * f64::EPSILON * 0.25 {
        sum += term;
        k += 1.0;
        term *= z / k;
    }
    sum
}

fn taylor_bound() -> Outcome {
    let mut violations = 0;
    let mut tightest = f64::INFINITY;
    for k in 0..=TAYLOR_GRID {
        let bx = 0.1 + (20.0 - 0.1) * k as f64 / TAYLOR_GRID as f64;
        let z = (-bx).exp();
        let e = exponential_approx(bx, 1.0);
        let bound = exponential_approx_remainder_bound(bx, 1.0);
        let remainder = taylor_tail(z);
        // the evaluated approximation against exp(exp(-Bx)), up to rounding
        let exact = z.exp();
        let evaluated = (exact - e.ccdf).abs() - 4.0 * f64::EPSILON * exact;
        if !e.valid || remainder < 0.0 || remainder > bound || evaluated > bound {
            violations += 1;
        }
        tightest = tightest.min(bound / remainder);
    }
    check(
        violations == 0,
        format!(
            "{} grid points, {violations} violations, min bound/remainder {tightest:.4}",
            TAYLOR_GRID + 1
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("reference beta within 2%", Some(Duration::from_secs(1)), table1_beta),
        ("reference Gini* within 0.01", Some(Duration::from_secs(10)), || table1_columns(true)),
        ("reference u* within 0.5", Some(Duration::from_secs(10)), || table1_columns(false)),
        ("discrepancy claims", None, discrepancy_claims),
        ("theoretical A = 1.52718", None, theoretical_location),
        ("closed-form Gini vs Lorenz area", Some(Duration::from_secs(60)), gini_oracle),
        ("continuity and normalization properties", Some(Duration::from_secs(120)), property_suite),
        ("fit round trip", Some(Duration::from_secs(60)), fit_round_trip),
        ("Monte Carlo estimator convergence", None, estimator_convergence),
        ("Taylor remainder bound", None, taylor_bound),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        let elapsed = start.elapsed();
        let outcome = within_time(*limit, elapsed, outcome);
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        println!("[{tag}] criterion {}: {name}: {detail} ({elapsed:.2?})", i + 1);
        failed += usize::from(outcome.is_err());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
