//! Build the (objective, costs) pair a run works on, from an instance file
//! or an inline generator spec like `bipartite:nv=100,nw=100,p=0.02`.

use crate::config::RunConfig;
use std::collections::BTreeMap;
use std::path::Path;
use submod::error::{Error, Result};
use submod::instance::read_dense_values;
use submod::objectives::{
    degree_weighted_setup, gen_random_bipartite, gen_random_digraph, gen_random_modular,
    sample_live_edges, AnyObjective, CoverageInstance, DiGraph, ModularObjective,
};

/// A loaded or generated problem: the objective, the per-element costs, and
/// a stable identifier for CSV rows.
pub struct Problem {
    pub objective: AnyObjective,
    pub costs: Vec<f64>,
    pub id: String,
}

pub fn load_problem(cfg: &RunConfig) -> Result<Problem> {
    let objective_kind = cfg
        .get("objective")
        .ok_or_else(|| Error::InvalidParameter("--objective is required".into()))?;
    let seed = cfg.u64_or("seed", 0)?;

    let (objective, default_costs, id) = match objective_kind {
        "coverage" => build_coverage(cfg, seed)?,
        "modular" => build_modular(cfg, seed)?,
        "influence" => build_influence(cfg, seed)?,
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown objective `{other}` (expected coverage|modular|influence)"
            )))
        }
    };

    let costs = match cfg.get("costs") {
        Some(path) => {
            let costs = read_dense_values(Path::new(path))?;
            let n = objective.ground_size();
            if costs.len() != n {
                return Err(Error::InvalidParameter(format!(
                    "cost file has {} entries but the ground set has {n}",
                    costs.len()
                )));
            }
            costs
        }
        None => default_costs,
    };

    // CSV fields are comma-separated; keep the id free of separators.
    let id = id.replace([',', '\n'], ";");
    Ok(Problem {
        objective,
        costs,
        id,
    })
}

fn build_coverage(cfg: &RunConfig, seed: u64) -> Result<(AnyObjective, Vec<f64>, String)> {
    if let Some(path) = cfg.get("instance") {
        let cov = CoverageInstance::read(path)?;
        let costs = cov.costs().to_vec();
        let id = basename(path);
        return Ok((AnyObjective::Coverage(cov), costs, id));
    }
    let spec = generator_spec(cfg, "bipartite")?;
    let nv = spec_usize(&spec, "nv", 100)?;
    let nw = spec_usize(&spec, "nw", 100)?;
    let p = spec_f64(&spec, "p", 0.02)?;
    check_bipartite_params(nv, nw, p)?;
    let cov = gen_random_bipartite(nv, nw, p, seed);
    let costs = cov.costs().to_vec();
    let id = format!("bipartite:nv={nv};nw={nw};p={p};seed={seed}");
    Ok((AnyObjective::Coverage(cov), costs, id))
}

fn build_modular(cfg: &RunConfig, seed: u64) -> Result<(AnyObjective, Vec<f64>, String)> {
    if let Some(path) = cfg.get("instance") {
        let weights = read_dense_values(Path::new(path))?;
        if let Some(bad) = weights.iter().find(|w| w.is_nan() || **w < 0.0) {
            return Err(Error::InvalidParameter(format!(
                "modular weights must be nonnegative, found {bad}"
            )));
        }
        let n = weights.len();
        let obj = AnyObjective::Modular(ModularObjective::new(weights));
        return Ok((obj, vec![1.0; n], basename(path)));
    }
    let spec = generator_spec(cfg, "modular")?;
    let n = spec_usize(&spec, "n", 50)?;
    let wmax = spec_f64(&spec, "wmax", 5.0)?;
    check_modular_params(n, wmax)?;
    let obj = AnyObjective::Modular(gen_random_modular(n, wmax, seed));
    let id = format!("modular:n={n};wmax={wmax};seed={seed}");
    Ok((obj, vec![1.0; n], id))
}

fn build_influence(cfg: &RunConfig, seed: u64) -> Result<(AnyObjective, Vec<f64>, String)> {
    let r_subgraphs = cfg.usize_or("R", 200)?;
    let gamma = cfg.f64_or("gamma", 1.0)?;
    let c_min = cfg.f64_or("cmin", 1.0)?;
    let (graph, source) = if let Some(path) = cfg.get("instance") {
        (DiGraph::read(path)?, basename(path))
    } else {
        let spec = generator_spec(cfg, "digraph")?;
        let n = spec_usize(&spec, "n", 500)?;
        let edges = spec_usize(
            &spec,
            "edges",
            (4 * n).min(n.saturating_mul(n.saturating_sub(1))),
        )?;
        check_digraph_params(n, edges)?;
        (
            gen_random_digraph(n, edges, seed),
            format!("digraph:n={n};edges={edges};seed={seed}"),
        )
    };
    let (probs, degree_costs) = degree_weighted_setup(&graph, gamma, c_min);
    let graph = if graph.probs.is_some() {
        graph
    } else {
        graph.with_probs(probs)
    };
    let ens = sample_live_edges(&graph, r_subgraphs, seed.wrapping_add(1))?;
    let id = format!("{source};R={r_subgraphs}");
    Ok((AnyObjective::Influence(ens), degree_costs, id))
}

/// Digraph generator inputs a user can get wrong; reject them before the
/// library asserts.
pub fn check_digraph_params(n: usize, edges: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "digraph needs at least 2 vertices, got {n}"
        )));
    }
    if edges > n * (n - 1) {
        return Err(Error::InvalidParameter(format!(
            "{edges} edges exceed the {n}-vertex maximum of {}",
            n * (n - 1)
        )));
    }
    Ok(())
}

/// Bipartite generator inputs, likewise.
pub fn check_bipartite_params(nv: usize, nw: usize, p: f64) -> Result<()> {
    if nv < 1 || nw < 1 {
        return Err(Error::InvalidParameter(format!(
            "bipartite needs at least one object and one word, got {nv} x {nw}"
        )));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "edge probability {p} outside [0, 1]"
        )));
    }
    Ok(())
}

fn generator_spec(cfg: &RunConfig, expected_kind: &str) -> Result<BTreeMap<String, String>> {
    let raw = cfg
        .get("gen")
        .ok_or_else(|| Error::InvalidParameter("provide --instance PATH or --gen SPEC".into()))?;
    let (kind, rest) = raw.split_once(':').unwrap_or((raw, ""));
    if kind != expected_kind {
        return Err(Error::InvalidParameter(format!(
            "generator `{kind}` does not produce a {expected_kind} objective"
        )));
    }
    let mut spec = BTreeMap::new();
    for pair in rest.split(',').filter(|p| !p.trim().is_empty()) {
        let (k, v) = pair.split_once('=').ok_or_else(|| {
            Error::InvalidParameter(format!("generator spec item `{pair}` is not key=value"))
        })?;
        spec.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(spec)
}

/// Modular generator inputs.
pub fn check_modular_params(n: usize, wmax: f64) -> Result<()> {
    if n < 1 {
        return Err(Error::InvalidParameter(
            "modular needs at least one element".into(),
        ));
    }
    if wmax.is_nan() || wmax <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "weight ceiling {wmax} must be positive"
        )));
    }
    Ok(())
}

fn spec_usize(spec: &BTreeMap<String, String>, key: &str, default: usize) -> Result<usize> {
    match spec.get(key) {
        None => Ok(default),
        Some(raw) => raw
            .parse()
            .map_err(|e| Error::InvalidParameter(format!("generator {key}={raw}: {e}"))),
    }
}

fn spec_f64(spec: &BTreeMap<String, String>, key: &str, default: f64) -> Result<f64> {
    match spec.get(key) {
        None => Ok(default),
        Some(raw) => raw
            .parse()
            .map_err(|e| Error::InvalidParameter(format!("generator {key}={raw}: {e}"))),
    }
}

fn basename(path: &str) -> String {
    Path::new(path)
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.to_string())
}
