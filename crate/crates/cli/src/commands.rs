//! The four subcommands. Each returns a process exit code; errors bubble up
//! to `main` which maps them onto the documented codes.

use crate::config::RunConfig;
use crate::logger::{info, warn_log};
use crate::problem::load_problem;
use std::io::Write;
use std::time::Instant;
use submod::analysis::{run_verification, VerifyConfig};
use submod::bounds::{lazy_mgreedy_ub, BoundReport, DeltaMode};
use submod::error::{Error, Result};
use submod::exact::{branch_and_bound, BnbConfig, BnbStats, BoundStrategy};
use submod::instance::Instance;
use submod::objectives::{
    degree_weighted_setup, gen_random_bipartite, gen_random_digraph, gen_random_modular,
};
use submod::oracle::{RestrictedOracle, ValueOracle};

/// Where rows go: a file (`--out`) or stdout.
struct Sink {
    out: Box<dyn Write>,
}

impl Sink {
    fn open(cfg: &RunConfig) -> Result<Sink> {
        let out: Box<dyn Write> = match cfg.get("out") {
            Some(path) => Box::new(std::io::BufWriter::new(std::fs::File::create(path)?)),
            None => Box::new(std::io::stdout()),
        };
        Ok(Sink { out })
    }

    fn line(&mut self, line: &str) -> Result<()> {
        writeln!(self.out, "{line}")?;
        Ok(())
    }

    fn finish(mut self) -> Result<()> {
        self.out.flush()?;
        Ok(())
    }
}

fn elapsed_ms(from: Instant) -> f64 {
    from.elapsed().as_secs_f64() * 1e3
}

/// `greedy`: one bound report row per budget.
pub fn cmd_greedy(cfg: &RunConfig) -> Result<i32> {
    let problem = load_problem(cfg)?;
    let budgets = cfg.budgets()?;
    let mut sink = Sink::open(cfg)?;
    sink.line(BoundReport::CSV_HEADER)?;
    for &budget in &budgets {
        let raw = Instance::new(problem.costs.clone(), budget)?;
        let (filtered, map) = raw.filter_overweight()?;
        let started = Instant::now();
        let report = problem
            .objective
            .with_oracle(|oracle| -> Result<BoundReport> {
                let view = RestrictedOracle::remap(oracle, map.new_to_old().to_vec());
                view.reset_calls();
                let (_, report) = lazy_mgreedy_ub(&view, &filtered)?;
                Ok(report)
            })?;
        info!(
            "greedy {} budget {budget}: value {} bound {}",
            problem.id, report.f_sm, report.lambda
        );
        sink.line(&report.csv_row(&problem.id, budget, elapsed_ms(started)))?;
    }
    sink.finish()?;
    Ok(0)
}

/// `bnb`: exact search per budget per strategy, plus a paired comparison row
/// with `--strategy both`.
pub fn cmd_bnb(cfg: &RunConfig) -> Result<i32> {
    let problem = load_problem(cfg)?;
    let budgets = cfg.budgets()?;
    let node_cap = cfg.u64_or("node-cap", 10_000_000)?;
    let strategy_arg = cfg.str_or("strategy", "lambda");
    let strategies: Vec<BoundStrategy> = match strategy_arg {
        "both" => vec![BoundStrategy::Lambda, BoundStrategy::Dca],
        one => vec![one.parse()?],
    };
    let mut sink = Sink::open(cfg)?;
    sink.line(BnbStats::CSV_HEADER)?;
    for &budget in &budgets {
        let raw = Instance::new(problem.costs.clone(), budget)?;
        let (filtered, map) = raw.filter_overweight()?;
        let mut per_strategy: Vec<BnbStats> = Vec::new();
        for &strategy in &strategies {
            let started = Instant::now();
            let stats = problem
                .objective
                .with_oracle(|oracle| -> Result<BnbStats> {
                    let view = RestrictedOracle::remap(oracle, map.new_to_old().to_vec());
                    let mut config = BnbConfig::new(strategy);
                    config.node_cap = node_cap;
                    branch_and_bound(&view, &filtered, &config)
                })?;
            if stats.capped {
                warn_log!(
                    "bnb {} budget {budget} strategy {}: node cap hit, result is best-effort",
                    problem.id,
                    strategy.name()
                );
            }
            sink.line(&stats.csv_row(&problem.id, budget, elapsed_ms(started)))?;
            per_strategy.push(stats);
        }
        if let [lambda, dca] = per_strategy.as_slice() {
            // Paired row: optimum column carries the agreement flag, the node
            // columns carry each strategy's expansion count.
            let agree = !lambda.capped && !dca.capped && lambda.optimum == dca.optimum;
            sink.line(&format!(
                "{},{budget},paired,{},{},{},0,{}",
                problem.id,
                if agree { 1 } else { 0 },
                lambda.nodes_expanded,
                dca.nodes_expanded,
                if lambda.capped || dca.capped { 1 } else { 0 }
            ))?;
        }
    }
    sink.finish()?;
    Ok(0)
}

/// `verify`: constants, program falsification, and the inequality suite.
pub fn cmd_verify(cfg: &RunConfig) -> Result<i32> {
    let delta_mode = match cfg.get("inject-fault") {
        None => DeltaMode::Exact,
        Some("delta-drop-fractional") => DeltaMode::DropFractional,
        Some(other) => {
            return Err(Error::InvalidParameter(format!(
                "unknown fault `{other}` (expected delta-drop-fractional)"
            )))
        }
    };
    let config = VerifyConfig {
        instances: cfg.usize_or("instances", 300)?,
        samples: cfg.u64_or("samples", 1_000_000)?,
        seed: cfg.u64_or("seed", 0)?,
        tolerance: 1e-9,
        delta_mode,
    };
    info!(
        "verify: {} instances, {} samples per program, seed {}",
        config.instances, config.samples, config.seed
    );
    let report = run_verification(&config)?;

    if let Some(path) = cfg.get("out") {
        let mut file = std::fs::File::create(path)?;
        for line in &report.lines {
            writeln!(file, "{line}")?;
        }
        write!(file, "{}", report.summary_csv())?;
    }

    println!(
        "constants: alpha_bot = {:.6}, alpha_prime = {:.6}, beta = {:.6}, 1-1/sqrt(e) = {:.6}",
        report.constants.alpha_bot,
        report.constants.alpha_prime,
        report.constants.beta,
        report.constants.one_minus_inv_sqrt_e
    );
    println!(
        "program sweeps: main min alpha = {:.6} ({} samples), simple min alpha = {:.6} ({} samples)",
        report.program_main.alpha,
        report.program_main.samples,
        report.program_simple.alpha,
        report.program_simple.samples
    );
    println!(
        "suite: {} instances, worst value/optimum ratio = {:.6}",
        report.suite_size, report.min_ratio
    );
    print!("{}", report.summary_csv());

    if report.passed() {
        println!("verification: PASS");
        Ok(0)
    } else {
        for failure in &report.failures {
            eprintln!("verification failure: {failure}");
        }
        println!("verification: FAIL ({} failures)", report.failures.len());
        Ok(1)
    }
}

/// `gen`: write an instance file; refuses to clobber without `--overwrite`.
pub fn cmd_gen(cfg: &RunConfig) -> Result<i32> {
    let out = cfg
        .get("out")
        .ok_or_else(|| Error::InvalidParameter("gen requires --out PATH".into()))?;
    if std::path::Path::new(out).exists() && !cfg.flag("overwrite") {
        eprintln!("refusing to overwrite `{out}` (pass --overwrite)");
        return Ok(4);
    }
    let seed = cfg.u64_or("seed", 0)?;
    let kind = cfg.str_or("kind", "bipartite");
    let mut buf: Vec<u8> = Vec::new();
    match kind {
        "bipartite" => {
            let nv = cfg.usize_or("nv", 100)?;
            let nw = cfg.usize_or("nw", 100)?;
            let p = cfg.f64_or("p", 0.02)?;
            crate::problem::check_bipartite_params(nv, nw, p)?;
            gen_random_bipartite(nv, nw, p, seed).write(&mut buf)?;
        }
        "digraph" => {
            let n = cfg.usize_or("n", 500)?;
            let edges =
                cfg.usize_or("edges", (4 * n).min(n.saturating_mul(n.saturating_sub(1))))?;
            crate::problem::check_digraph_params(n, edges)?;
            let graph = gen_random_digraph(n, edges, seed);
            let graph = if cfg.flag("degree-weighted") {
                let (probs, _) = degree_weighted_setup(
                    &graph,
                    cfg.f64_or("gamma", 1.0)?,
                    cfg.f64_or("cmin", 1.0)?,
                );
                graph.with_probs(probs)
            } else {
                graph
            };
            graph.write(&mut buf)?;
        }
        "modular" => {
            let n = cfg.usize_or("n", 50)?;
            let wmax = cfg.f64_or("wmax", 5.0)?;
            crate::problem::check_modular_params(n, wmax)?;
            let weights = gen_random_modular(n, wmax, seed);
            for (id, w) in weights.weights().iter().enumerate() {
                buf.extend_from_slice(format!("{id} {w}\n").as_bytes());
            }
        }
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown generator kind `{other}` (expected bipartite|digraph|modular)"
            )))
        }
    }
    std::fs::write(out, &buf)?;
    info!("wrote {kind} instance to {out}");
    Ok(0)
}
