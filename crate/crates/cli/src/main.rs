//! Command-line harness for knapsack-constrained monotone submodular
//! maximization: greedy runs with data-dependent optimality bounds, exact
//! branch-and-bound comparisons, instance generation, and the verification
//! suite.

mod commands;
mod config;
mod logger;
mod problem;

use config::RunConfig;
use submod::error::Error;

const USAGE: &str = "\
usage: submod <greedy|bnb|verify|gen> [--flags]

subcommands:
  greedy   run the bounded greedy per budget, emit one CSV row each
  bnb      exact branch-and-bound per budget and strategy, emit CSV rows
  verify   solve the constants, falsify the worst-case programs, and check
           every bound inequality on a generated instance suite
  gen      write an instance file (bipartite | digraph | modular)

common flags:
  --objective coverage|modular|influence   what f(S) is (greedy, bnb)
  --instance PATH | --gen SPEC             problem source; SPEC examples:
                                           bipartite:nv=100,nw=100,p=0.02
                                           digraph:n=500,edges=2000
                                           modular:n=50,wmax=5
  --budgets a,b,c      budget list, one run per budget
  --seed N             RNG seed (default 0; runs never use wall-clock seeds)
  --out PATH           CSV / report destination (default stdout)
  --strategy S         bnb bounding rule: lambda | dca | both
  --samples N          falsification samples per program (verify)
  --instances N        verification suite size (verify)
  --R N                live-edge subgraphs per ensemble (influence)
  --node-cap N         bnb node cap (default 10000000)
  --costs PATH         per-element cost file `<id> <cost>`
  --gamma F --cmin F   degree-proportional cost scale and floor (influence)
  --kind K             gen target: bipartite | digraph | modular
  --nv N --nw N --p F --n N --edges N --wmax F   generator dimensions
  --overwrite          allow gen to replace an existing file
  --degree-weighted    attach in-degree-reciprocal probabilities (gen digraph)
  --inject-fault F     verify-only mutation hook (delta-drop-fractional)
  --config PATH        key = value file; explicit flags win

environment:
  SUBMOD_LOG=error|warn|info|debug   stderr log level (default warn)

exit codes:
  0 success | 1 verification failure | 2 unreadable instance
  3 invalid or infeasible config | 4 output exists without --overwrite";

fn exit_code_for(error: &Error) -> i32 {
    match error {
        Error::Io(_) | Error::Parse { .. } => 2,
        Error::InvalidParameter(_)
        | Error::NonPositiveBudget { .. }
        | Error::NonPositiveCost { .. }
        | Error::EmptyInstance
        | Error::Domain { .. }
        | Error::NonUnitCosts { .. }
        | Error::GroundSetTooLarge { .. } => 3,
        _ => 1,
    }
}

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.is_empty() || args[0] == "--help" || args[0] == "help" {
        println!("{USAGE}");
        std::process::exit(if args.is_empty() { 3 } else { 0 });
    }
    let outcome = RunConfig::parse(&args).and_then(|cfg| match cfg.subcommand.as_str() {
        "greedy" => commands::cmd_greedy(&cfg),
        "bnb" => commands::cmd_bnb(&cfg),
        "verify" => commands::cmd_verify(&cfg),
        "gen" => commands::cmd_gen(&cfg),
        other => Err(Error::InvalidParameter(format!(
            "unknown subcommand `{other}`"
        ))),
    });
    match outcome {
        Ok(code) => std::process::exit(code),
        Err(error) => {
            eprintln!("submod: {error}");
            std::process::exit(exit_code_for(&error));
        }
    }
}
