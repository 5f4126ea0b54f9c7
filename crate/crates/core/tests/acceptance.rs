//! Acceptance gate. Every criterion prints one PASS/FAIL line; run with
//! `cargo test --test acceptance -- --nocapture --test-threads=1` to see
//! them all in order.

mod common;

use std::collections::HashSet;
use std::time::{Duration, Instant};

use clap::Parser;
use edenlab::bounds::{
    fit_scaling, solve_t1, solve_t2, solve_t2_unchecked, t1_residual, t2_residual, theorem1_exponent,
    ScalingSample,
};
use edenlab::cli::{histories_table, Cli, Command};
use edenlab::eden::{eden_grow, eden_grow_with, sample_next_site, GrowthOptions};
use edenlab::error::Error;
use edenlab::fpp::coupling_test;
use edenlab::histories::{
    average_perimeter_over_histories, branching_tree, brute_force_linear_extensions,
    centred_path_tree, count_linear_extensions, enumerate_histories, exact_eden_distribution,
    histories_via_trees, DEFAULT_MAX_HISTORIES,
};
use edenlab::lattice::{LatticeAnimal, PerimeterMetric};
use edenlab::rng::run_rng;
use edenlab::stats::mean_stderr;
use num_bigint::BigUint;

use common::{eden_by_trajectories, expected_perimeter_edges, ratio, recount_perimeter_edges};

const BUDGET: u128 = DEFAULT_MAX_HISTORIES;

fn report(id: u32, name: &str, ok: bool, elapsed: Duration, limit: Duration, detail: &str) {
    let within = elapsed < limit;
    let tag = if ok && within { "PASS" } else { "FAIL" };
    println!(
        "[{tag}] criterion {id}: {name} ({:.2?} of {:.0?} allowed) {detail}",
        elapsed, limit
    );
    assert!(ok, "criterion {id} failed: {detail}");
    assert!(within, "criterion {id} exceeded its {limit:?} budget ({elapsed:.2?})");
}

#[test]
fn c1_linear_extension_golden_values() {
    let start = Instant::now();
    let branching = branching_tree();
    let path = centred_path_tree(4);
    let hook_b = count_linear_extensions(&branching);
    let hook_p = count_linear_extensions(&path);
    let brute_b = brute_force_linear_extensions(&branching).unwrap();
    let brute_p = brute_force_linear_extensions(&path).unwrap();
    let ok = hook_b == BigUint::from(1680u32)
        && hook_p == BigUint::from(70u32)
        && brute_b == 1680
        && brute_p == 70;
    report(
        1,
        "linear-extension golden values",
        ok,
        start.elapsed(),
        Duration::from_secs(1),
        &format!("branching: hook {hook_b}, brute {brute_b}; path: hook {hook_p}, brute {brute_p}"),
    );
}

#[test]
fn c2_history_census() {
    let start = Instant::now();
    let mut ok = true;
    let mut notes = Vec::new();
    for (d, max_m) in [(2usize, 5usize), (1, 8)] {
        for m in 1..=max_m {
            let direct = average_perimeter_over_histories(d, m, BUDGET).unwrap();
            let trees = histories_via_trees(d, m, BUDGET).unwrap();
            let streamed = enumerate_histories(d, m, BUDGET).unwrap().count();
            let agree = direct == trees && BigUint::from(streamed) == direct.count;
            ok &= agree;
            if !agree {
                notes.push(format!("d={d} m={m} disagree"));
            }
        }
    }
    let counts: Vec<usize> = (1..=3)
        .map(|m| enumerate_histories(2, m, BUDGET).unwrap().count())
        .collect();
    ok &= counts == [4, 24, 192];
    notes.push(format!("d=2 counts m=1..3: {counts:?}"));
    report(
        2,
        "history census (direct vs tree-weighted)",
        ok,
        start.elapsed(),
        Duration::from_secs(60),
        &notes.join("; "),
    );
}

#[test]
fn c3_fpp_eden_coupling() {
    let start = Instant::now();
    let runs = 100_000;
    let mut ok = true;
    let mut notes = Vec::new();
    for n in [2usize, 3, 4] {
        let p: Vec<f64> = (1..=3u64)
            .map(|rep| {
                coupling_test(2, n, runs, 1000 * n as u64 + rep, BUDGET)
                    .unwrap()
                    .chi_square
                    .p_value
            })
            .collect();
        let low = p.iter().filter(|&&x| x <= 0.001).count();
        let pass = match low {
            0 => true,
            1 => {
                let rerun = coupling_test(2, n, runs, 1000 * n as u64 + 99, BUDGET)
                    .unwrap()
                    .chi_square
                    .p_value;
                notes.push(format!("n={n} rerun p={rerun:.4}"));
                rerun > 0.001
            }
            _ => false,
        };
        ok &= pass;
        notes.push(format!("n={n} p={:.4}/{:.4}/{:.4}", p[0], p[1], p[2]));
    }
    report(
        3,
        "chi-square coupling of FPP growth with exact Eden law",
        ok,
        start.elapsed(),
        Duration::from_secs(120),
        &notes.join("; "),
    );
}

#[test]
fn c4_exact_eden_expectation() {
    let start = Instant::now();
    // independent trajectory expansion first
    let oracle2 = expected_perimeter_edges(&eden_by_trajectories(2, 2));
    let oracle3 = expected_perimeter_edges(&eden_by_trajectories(2, 3));
    let oracle_ok = oracle2 == ratio(8, 1) && oracle3 == ratio(29, 3);
    let e2 = exact_eden_distribution(2, 2, BUDGET)
        .unwrap()
        .expected_perimeter(PerimeterMetric::Edges);
    let e3 = exact_eden_distribution(2, 3, BUDGET)
        .unwrap()
        .expected_perimeter(PerimeterMetric::Edges);
    let ok = oracle_ok && e2 == ratio(8, 1) && e3 == ratio(29, 3);
    report(
        4,
        "exact Eden expected perimeter",
        ok,
        start.elapsed(),
        Duration::from_secs(1),
        &format!("m=2: {e2} (oracle {oracle2}); m=3: {e3} (oracle {oracle3})"),
    );
}

#[test]
fn c5_perimeter_invariants() {
    let start = Instant::now();
    let n = 10_000usize;
    let mut ok = true;
    let mut checks = 0;
    for d in [2usize, 3] {
        for run in 0..100u64 {
            let mut rng = run_rng(500 + d as u64, run);
            let mut animal = LatticeAnimal::at_origin(d).unwrap();
            let mut cells: HashSet<Vec<i64>> = HashSet::from([vec![0; d]]);
            for step in 1..=n {
                let v = sample_next_site(&animal, &mut rng);
                cells.insert(v.coords().to_vec());
                animal.add_site(v).unwrap();
                ok &= animal.perimeter_edge_count() + 2 * animal.interior_edge_count()
                    == 2 * d * animal.len();
                if step % 100 == 0 {
                    ok &= animal.perimeter_edge_count() == recount_perimeter_edges(&cells);
                    checks += 1;
                }
            }
        }
    }
    report(
        5,
        "incremental perimeter equals recount",
        ok,
        start.elapsed(),
        Duration::from_secs(60),
        &format!("{checks} prefix recounts over 200 runs"),
    );
}

#[test]
fn c6_perimeter_exponent_below_bound() {
    let start = Instant::now();
    let seeds = 20u64;
    let samples: Vec<ScalingSample> = [1_000u64, 10_000, 100_000]
        .iter()
        .enumerate()
        .map(|(j, &n)| {
            let per: Vec<f64> = (0..seeds)
                .map(|i| {
                    eden_grow_with(2, n - 1, 6, ((j as u64) << 32) | i, GrowthOptions::default())
                        .unwrap()
                        .animal()
                        .perimeter_edge_count() as f64
                })
                .collect();
            let (mean, se) = mean_stderr(&per);
            ScalingSample {
                n: n as f64,
                mean_perimeter: mean,
                std_error: se,
            }
        })
        .collect();
    let fit = fit_scaling(&samples).unwrap();
    let bound = theorem1_exponent(2);
    report(
        6,
        "fitted perimeter exponent below 18/19",
        fit.exponent < bound,
        start.elapsed(),
        Duration::from_secs(300),
        &format!("exponent {:.4}, r^2 {:.6}, bound {bound:.6}", fit.exponent, fit.r_squared),
    );
}

#[test]
fn c7_bracket_inequalities() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut max_residual: f64 = 0.0;
    for k in 2..=8 {
        let s = 10f64.powi(k);
        match solve_t1(s) {
            Ok(t) => max_residual = max_residual.max(t1_residual(t, s)),
            Err(e) => failures.push(format!("t1 s=1e{k}: {e}")),
        }
    }
    for d in 1..=3 {
        for c in [0.5, 1.0, 2.0] {
            for k in [4, 6, 8] {
                let s = 10f64.powi(k);
                let root = solve_t2_unchecked(s, d, c).unwrap();
                max_residual = max_residual.max(t2_residual(root, s, d, c));
                match solve_t2(s, d, c) {
                    Ok(_) => {}
                    Err(e @ Error::Bracket { .. }) => {
                        failures.push(format!("t2 d={d} c={c} s=1e{k}: {e}"))
                    }
                    Err(e) => failures.push(format!("t2 d={d} c={c} s=1e{k}: {e}")),
                }
            }
        }
    }
    let ok = failures.is_empty() && max_residual < 1e-10;
    for f in &failures {
        println!("    {f}");
    }
    report(
        7,
        "t1/t2 bracket inequalities on the grid",
        ok,
        start.elapsed(),
        Duration::from_secs(1),
        &format!("{} violation(s), max residual {max_residual:.1e}", failures.len()),
    );
}

#[test]
fn c8_history_vs_eden_table() {
    let start = Instant::now();
    let cli = Cli::try_parse_from(["edenlab", "histories", "-d", "2", "-m", "5"]).unwrap();
    let Command::Histories(args) = cli.command else {
        unreachable!()
    };
    let table = histories_table(&args).unwrap();
    let col = |name: &str| table.header.iter().position(|h| h == name).unwrap();
    let (pe, ee) = (col("pbar_edges"), col("eden_expected_edges"));
    let is_ratio = |v: &serde_json::Value| {
        v.as_str()
            .and_then(|s| s.split_once('/'))
            .is_some_and(|(a, b)| a.parse::<u64>().is_ok() && b.parse::<u64>().is_ok())
    };
    let exact = table.rows.iter().all(|r| r[2..].iter().all(is_ratio));
    let differ: Vec<String> = table
        .rows
        .iter()
        .filter(|r| r[pe] != r[ee])
        .map(|r| format!("m={}: {} vs {}", r[0], r[pe], r[ee]))
        .collect();
    report(
        8,
        "history average vs Eden expectation table",
        table.rows.len() == 5 && exact && !differ.is_empty(),
        start.elapsed(),
        Duration::from_secs(60),
        &differ.join("; "),
    );
}

#[test]
fn c9_million_site_growth() {
    let start = Instant::now();
    let run = eden_grow(2, 1_000_000, 9).unwrap();
    let elapsed = start.elapsed();
    report(
        9,
        "Eden growth to 10^6 sites",
        run.animal().len() == 1_000_001,
        elapsed,
        Duration::from_secs(10),
        &format!("perimeter {} edges", run.animal().perimeter_edge_count()),
    );
}
