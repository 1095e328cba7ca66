use cavi_core::edward_sokal::{
    es_elbo, gradient_fidelity, simulate_es_with, CaviConfig, ESParams, ESState, GradientSource,
    LineSearch,
};
use cavi_core::oracle::{grid_minimize, GridSpec};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{json, Context};
use crate::args::{EsArgs, EsReportArgs, Gradient};
use crate::error::{CliError, Result};

/// Agreement required between closed-form and finite-difference partials
/// before `--gradient auto` uses the closed forms.
const FIDELITY_TOLERANCE: f64 = 1e-5;
/// Per-axis probe values for the `auto` fidelity check.
const FIDELITY_PROBES: [f64; 3] = [0.2, 0.5, 0.8];

pub fn es_params(p: Option<f64>, beta: Option<f64>) -> Result<ESParams> {
    match (p, beta) {
        (Some(p), None) => Ok(ESParams::new(p)?),
        (None, Some(beta)) => Ok(ESParams::from_beta(beta)?),
        (Some(_), Some(_)) => Err(CliError::usage("give either --p or --beta, not both")),
        (None, None) => Err(CliError::usage("--p (or --beta) is required here")),
    }
}

pub fn config_for(a: &EsArgs, q: ESParams) -> Result<CaviConfig> {
    let gradient = match a.gradient {
        Gradient::Printed => GradientSource::Printed,
        Gradient::Fd => GradientSource::FiniteDifference,
        Gradient::Auto => {
            let probes: Vec<(ESState, ESParams)> = FIDELITY_PROBES
                .iter()
                .flat_map(|&a| FIDELITY_PROBES.iter().map(move |&b| (a, b)))
                .flat_map(|(a, b)| FIDELITY_PROBES.iter().map(move |&y| (a, b, y)))
                .map(|(a, b, y)| ESState::new(a, b, y).map(|s| (s, q)))
                .collect::<Result<_, _>>()?;
            gradient_fidelity(&probes, FIDELITY_TOLERANCE)?.recommended_source()
        }
    };
    let search = if a.exact_grid {
        LineSearch::Exact
    } else {
        LineSearch::TwoStage
    };
    Ok(CaviConfig {
        resolution: a.resolution,
        gradient,
        search,
    })
}

pub fn source_name(source: GradientSource) -> &'static str {
    match source {
        GradientSource::Printed => "printed",
        GradientSource::FiniteDifference => "fd",
    }
}

#[derive(Serialize)]
struct Report {
    p: f64,
    resolution: f64,
    gradient: &'static str,
    inits: Vec<ESState>,
    terminal_states: Vec<ESState>,
    terminal_elbos: Vec<f64>,
    iterations: Vec<usize>,
    converged: Vec<bool>,
    elbo_min_grid: f64,
    grid_argmin: ESState,
}

pub fn report(a: &EsReportArgs, ctx: &Context) -> Result<String> {
    let q = es_params(a.es.p, a.beta)?;
    let config = config_for(&a.es, q)?;
    let mut rng = ctx.rng();
    let inits: Vec<ESState> = (0..a.runs)
        .map(|_| {
            let mut draw = || rng.random_range(f64::EPSILON..1.0);
            ESState::new(draw(), draw(), draw())
        })
        .collect::<Result<_, _>>()?;
    let runs = inits
        .par_iter()
        .map(|&s0| simulate_es_with(s0, q, &config, a.iters, a.tol))
        .collect::<Result<Vec<_>, _>>()?;
    let (grid_argmin, elbo_min_grid) = grid_minimum(q, a.grid)?;

    json(&Report {
        p: q.p,
        resolution: config.resolution,
        gradient: source_name(config.gradient),
        terminal_states: runs.iter().map(|r| r.terminal()).collect(),
        terminal_elbos: runs.iter().map(|r| r.terminal_elbo()).collect(),
        iterations: runs.iter().map(|r| r.iterations()).collect(),
        converged: runs.iter().map(|r| r.converged).collect(),
        inits,
        elbo_min_grid,
        grid_argmin,
    })
}

/// Brute-force minimum of the objective on the interior grid `i / (n + 1)`,
/// split into `x1` slabs for the thread pool. Ties go to the first slab, as
/// in a single serial scan.
fn grid_minimum(q: ESParams, n: usize) -> Result<(ESState, f64)> {
    let axis = GridSpec::open_unit(n)?;
    let slabs = (0..n)
        .into_par_iter()
        .map(|i| {
            let x1 = axis.value(i);
            grid_minimize(
                |v| {
                    es_elbo(
                        ESState {
                            x1,
                            x2: v[0],
                            y: v[1],
                        },
                        q,
                    )
                },
                &[axis, axis],
            )
            .map(|(arg, min)| {
                (
                    ESState {
                        x1,
                        x2: arg[0],
                        y: arg[1],
                    },
                    min,
                )
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let best = slabs
        .into_iter()
        .reduce(|best, cand| if cand.1 < best.1 { cand } else { best })
        .expect("open_unit grids are non-empty");
    Ok(best)
}
