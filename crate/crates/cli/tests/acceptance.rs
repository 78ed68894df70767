//! Acceptance suite: every release criterion, one test each, printing one
//! PASS/FAIL line per criterion (run with `-- --nocapture` to see them).
//!
//! Tolerances are pinned here and never loosened at runtime: inequality
//! slacks allow -1e-9, falsification minima allow -1e-6 against the solved
//! constants, and exact-optimum comparisons on integer-valued objectives are
//! exact.

use std::process::Command;
use std::time::Instant;
use submod::analysis::{
    falsify_program_main, falsify_program_simple, run_verification, solve_constants, VerifyConfig,
};
use submod::bounds::{lazy_mgreedy_ub, DeltaMode};
use submod::error::Result;
use submod::exact::{branch_and_bound, BnbConfig, BoundStrategy};
use submod::greedy::{mgreedy, Chosen};
use submod::instance::Instance;
use submod::objectives::{
    degree_weighted_setup, gen_random_bipartite, gen_random_digraph, sample_live_edges,
    ModularObjective,
};
use submod::oracle::RestrictedOracle;

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "criterion {criterion}: {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} failed: {detail}");
}

#[test]
fn criterion_1_constants() {
    let started = Instant::now();
    let constants = solve_constants(1e-9).expect("constants must solve");
    let elapsed = started.elapsed();
    let in_windows = constants.alpha_bot > 0.405
        && constants.alpha_bot < 0.406
        && constants.alpha_prime > 0.357
        && constants.alpha_prime < 0.358;
    let identity = (constants.alpha_prime - (1.0 - (-constants.beta).exp())).abs();
    // solve_constants already certified the sign changes at ±1e-9.
    report(
        "1 (constants)",
        in_windows && identity < 1e-9 && elapsed.as_secs_f64() < 1.0,
        &format!(
            "alpha_bot = {:.6}, alpha_prime = {:.6}, |alpha_prime - (1 - e^-beta)| = {:.2e}, {} ms",
            constants.alpha_bot,
            constants.alpha_prime,
            identity,
            elapsed.as_millis()
        ),
    );
}

/// Criteria 2, 3, 4, and 6 share one pass over the generated suite of 1050
/// brute-forceable instances (coverage, modular, influence with R = 50;
/// mixed unit/random costs; budgets spanning 10%-100% of total cost).
#[test]
fn criteria_2_3_4_6_inequality_suite() {
    let config = VerifyConfig {
        instances: 1050,
        samples: 50_000,
        seed: 0,
        tolerance: 1e-9,
        delta_mode: DeltaMode::Exact,
    };
    let r = run_verification(&config).expect("verification run must complete");
    let summary = |name: &str| {
        r.summaries
            .iter()
            .find(|s| s.name == name)
            .unwrap_or_else(|| panic!("summary row {name} missing"))
    };

    let lambda = summary("lambda_soundness");
    report(
        "2 (upper-bound soundness)",
        lambda.checked >= 1000 && lambda.violations == 0,
        &format!(
            "{} instances, 0 required violations, min slack {:.2e}",
            lambda.checked, lambda.min_slack
        ),
    );

    let chain = summary("bound_ratio_chain");
    report(
        "3 (value >= alpha_prime * bound)",
        chain.checked >= 1000 && chain.violations == 0,
        &format!(
            "{} instances, min slack {:.2e}",
            chain.checked, chain.min_slack
        ),
    );

    let factor = summary("factor_main");
    let theorem3_floor = r.constants.one_minus_inv_sqrt_e;
    report(
        "4 (worst-case factor)",
        factor.violations == 0 && r.min_ratio >= theorem3_floor - 1e-9,
        &format!(
            "empirical min ratio {:.6} (factor floor {:.6}, sqrt-e floor {:.6})",
            r.min_ratio, r.constants.alpha_bot, theorem3_floor
        ),
    );

    let trace_names = [
        "prefix_exponential",
        "rejection_exponential",
        "singleton_lower",
        "rejection_linear",
        "budget_linear",
        "extension_exponential",
        "cardinality_cap",
    ];
    let mut all_clean = true;
    let mut worst_skip_rate: f64 = 0.0;
    let mut detail = String::new();
    for name in trace_names {
        let s = summary(name);
        let population = s.checked + s.skipped;
        let skip_rate = if population > 0 {
            s.skipped as f64 / population as f64
        } else {
            1.0
        };
        worst_skip_rate = worst_skip_rate.max(skip_rate);
        if s.violations > 0 || skip_rate >= 0.2 {
            all_clean = false;
            detail.push_str(&format!(
                "{name}: {} violations, skip rate {:.2}; ",
                s.violations, skip_rate
            ));
        }
    }
    report(
        "6 (proof-trace inequalities)",
        all_clean && r.passed(),
        &format!(
            "zero violations across {} names, worst skip rate {:.1}%, {} skip/marker log lines{}{}",
            trace_names.len(),
            worst_skip_rate * 100.0,
            r.lines
                .iter()
                .filter(|l| l.contains("SKIPPED") || l.contains("markers"))
                .count(),
            if detail.is_empty() { "" } else { "; " },
            detail
        ),
    );
}

#[test]
fn criterion_5_tightness_regression() {
    // Three elements, modular, eps = 0.1: ratio is exactly (1 + 2eps)/2.
    let eps = 0.1;
    let f = ModularObjective::new(vec![1.0, 1.0, 1.0 + 2.0 * eps]);
    let inst = Instance::new(vec![1.0, 1.0, 1.0 + eps], 2.0).unwrap();
    let trace = mgreedy(&f, &inst).unwrap();
    let ratio = trace.chosen_value / 2.0;
    let expected = (1.0 + 2.0 * eps) / 2.0;
    let three_ok = trace.chosen_set.iter().collect::<Vec<_>>() == vec![2]
        && ratio == expected
        && (ratio - 0.6).abs() < 1e-15;

    // Two elements, eps = 0.25: the safeguard singleton recovers the optimum.
    let eps2 = 0.25;
    let g = ModularObjective::new(vec![1.0, 2.0 * eps2]);
    let inst2 = Instance::new(vec![1.0, eps2], 1.0).unwrap();
    let trace2 = mgreedy(&g, &inst2).unwrap();
    let two_ok = trace2.chosen == Chosen::BestSingleton
        && trace2.chosen_set.iter().collect::<Vec<_>>() == vec![0]
        && trace2.chosen_value == 1.0;

    report(
        "5 (tightness regression)",
        three_ok && two_ok,
        &format!("three-element ratio = {ratio} (exactly (1+2eps)/2), safeguard ratio = 1"),
    );
}

#[test]
fn criterion_7_program_falsification() {
    let constants = solve_constants(1e-9).unwrap();
    let started = Instant::now();
    let main = falsify_program_main(1_000_000, 7, &constants);
    let simple = falsify_program_simple(1_000_000, 7);
    let elapsed = started.elapsed();
    let pass = main.alpha >= constants.alpha_bot - 1e-6
        && simple.alpha >= constants.one_minus_inv_sqrt_e - 1e-6
        && elapsed.as_secs_f64() < 300.0;
    report(
        "7 (program falsification)",
        pass,
        &format!(
            "main min alpha {:.6} (>= {:.6} - 1e-6) over {} points, simple min alpha {:.6} (>= {:.6} - 1e-6) over {} points, {:.1} s",
            main.alpha,
            constants.alpha_bot,
            main.samples,
            simple.alpha,
            constants.one_minus_inv_sqrt_e,
            simple.samples,
            elapsed.as_secs_f64()
        ),
    );
}

#[test]
fn criterion_8_branch_and_bound_comparison() {
    let mut ordered_pairs = 0usize;
    let mut total_pairs = 0usize;
    let mut optima_agree = true;
    let mut lambda_all_complete = true;
    let mut min_gap = f64::INFINITY;
    let mut max_lambda_nodes = 0u64;

    for seed in 0..10u64 {
        let cov = gen_random_bipartite(100, 100, 0.02, seed);
        let oracle = cov.oracle();
        for budget in 1..=10u32 {
            let inst = cov.instance().with_budget(budget as f64).unwrap();
            let run = |strategy, audit| -> Result<_> {
                let mut config = BnbConfig::new(strategy);
                config.node_cap = 10_000_000;
                config.audit_bounds = audit;
                branch_and_bound(&oracle, &inst, &config)
            };
            let lambda = run(BoundStrategy::Lambda, true).unwrap();
            let dca = run(BoundStrategy::Dca, false).unwrap();
            total_pairs += 1;
            lambda_all_complete &= !lambda.capped;
            max_lambda_nodes = max_lambda_nodes.max(lambda.nodes_expanded);
            if lambda.nodes_expanded <= dca.nodes_expanded {
                ordered_pairs += 1;
            }
            if !dca.capped {
                optima_agree &= lambda.optimum == dca.optimum;
            }
            if let Some(gap) = lambda.min_bound_gap {
                min_gap = min_gap.min(gap);
            }
        }
    }

    let ordering_rate = ordered_pairs as f64 / total_pairs as f64;
    report(
        "8 (search-bound comparison)",
        lambda_all_complete && optima_agree && ordering_rate >= 0.9 && min_gap >= -1e-9,
        &format!(
            "identical optima on all completed pairs; lambda nodes <= dca nodes on {ordered_pairs}/{total_pairs} pairs; max lambda expansion {max_lambda_nodes} (cap 10^7); per-node dca - lambda gap >= {min_gap:.2e}"
        ),
    );
}

#[test]
fn criterion_9_influence_ratio_rows() {
    let constants = solve_constants(1e-9).unwrap();
    let graph = gen_random_digraph(1200, 4800, 11);
    let (probs, costs) = degree_weighted_setup(&graph, 1.0, 1.0);
    let graph = graph.with_probs(probs);
    let ens = sample_live_edges(&graph, 200, 12).unwrap();
    let mut pass = true;
    let mut rows = String::new();
    for budget in [20.0, 40.0, 80.0, 160.0, 320.0] {
        let raw = Instance::new(costs.clone(), budget).unwrap();
        let (filtered, map) = raw.filter_overweight().unwrap();
        let view = RestrictedOracle::remap(&ens, map.new_to_old().to_vec());
        let (_, r) = lazy_mgreedy_ub(&view, &filtered).unwrap();
        pass &= r.ratio_lambda >= r.ratio_leskovec - 1e-12
            && r.ratio_lambda >= constants.alpha_prime - 1e-9;
        rows.push_str(&format!(
            "b={budget}: ratio_lambda {:.4} vs ratio_single_term {:.4}; ",
            r.ratio_lambda, r.ratio_leskovec
        ));
    }
    // Ratios are reported for qualitative comparison with large-graph runs
    // (where they typically exceed 0.9); no such threshold is asserted here.
    report(
        "9 (influence bound ratios)",
        pass,
        &format!("1200 vertices, R = 200, degree-based p and costs: {rows}"),
    );
}

fn run_cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_submod"))
        .args(args)
        .output()
        .expect("binary runs")
}

/// Drop the `time_ms` column (by header name) from a CSV body.
fn strip_time_column(csv: &str) -> String {
    let mut lines = csv.lines();
    let header = lines.next().unwrap_or_default();
    let time_idx = header.split(',').position(|c| c == "time_ms");
    let mut out = String::new();
    for line in std::iter::once(header).chain(lines) {
        let fields: Vec<&str> = line
            .split(',')
            .enumerate()
            .filter(|(i, _)| Some(*i) != time_idx)
            .map(|(_, f)| f)
            .collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

#[test]
fn criterion_10_csv_determinism() {
    let dir = std::env::temp_dir().join("submod-acceptance-determinism");
    std::fs::create_dir_all(&dir).unwrap();
    let greedy_args = [
        "greedy",
        "--objective",
        "coverage",
        "--gen",
        "bipartite:nv=60,nw=60,p=0.05",
        "--budgets",
        "2,4,6",
        "--seed",
        "5",
    ];
    let bnb_args = [
        "bnb",
        "--objective",
        "coverage",
        "--gen",
        "bipartite:nv=40,nw=40,p=0.05",
        "--budgets",
        "2,3",
        "--strategy",
        "both",
        "--seed",
        "6",
    ];
    let mut pass = true;
    let mut detail = String::new();
    for (name, args) in [("greedy", &greedy_args[..]), ("bnb", &bnb_args[..])] {
        let out_a = dir.join(format!("{name}-a.csv"));
        let out_b = dir.join(format!("{name}-b.csv"));
        for out in [&out_a, &out_b] {
            let mut full: Vec<&str> = args.to_vec();
            let out_str = out.to_str().unwrap();
            full.extend_from_slice(&["--out", out_str]);
            let status = run_cli(&full);
            assert!(status.status.success(), "{name} run failed");
        }
        let a = strip_time_column(&std::fs::read_to_string(&out_a).unwrap());
        let b = strip_time_column(&std::fs::read_to_string(&out_b).unwrap());
        let same = a == b;
        pass &= same;
        detail.push_str(&format!(
            "{name}: {} bytes, reruns {}; ",
            a.len(),
            if same { "identical" } else { "DIFFER" }
        ));
    }
    report("10 (CSV determinism)", pass, &detail);
}
