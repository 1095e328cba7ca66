use std::fmt::Write;

use cavi_core::edward_sokal::{simulate_es_with, ESState};
use cavi_core::ising::{
    predict_regime, simulate as simulate_ising, IsingParams, MeanFieldState, Terminal, UpdateMode,
};
use rand::Rng;

use super::es::{config_for, es_params};
use super::{json, required, Context};
use crate::args::{IsingArgs, Mode, Model, PredictArgs, SimulateArgs};
use crate::error::{CliError, Result};
use crate::output::{num, row};

pub fn simulate(a: &SimulateArgs, ctx: &Context) -> Result<String> {
    match a.model {
        Model::IsingSeq => ising(a, UpdateMode::Sequential, ctx),
        Model::IsingPar => ising(a, UpdateMode::Parallel, ctx),
        Model::Es => es(a, ctx),
    }
}

pub fn ising_params(a: &IsingArgs) -> Result<IsingParams> {
    let beta = required(a.beta, "beta")?;
    Ok(IsingParams::with_fields(beta, a.j12, a.h1, a.h2))
}

/// The `--init` values, or `n` uniform draws from the seeded generator.
fn initial(init: Option<&[f64]>, n: usize, ctx: &Context) -> Result<Vec<f64>> {
    match init {
        Some(v) if v.len() == n => Ok(v.to_vec()),
        Some(v) => Err(CliError::usage(format!(
            "--init needs {n} comma-separated values, got {}",
            v.len()
        ))),
        None => {
            let mut rng = ctx.rng();
            Ok((0..n)
                .map(|_| rng.random_range(f64::EPSILON..1.0))
                .collect())
        }
    }
}

fn ising(a: &SimulateArgs, mode: UpdateMode, ctx: &Context) -> Result<String> {
    let p = ising_params(&a.ising)?;
    let v = initial(a.init.as_deref(), 2, ctx)?;
    let s0 = MeanFieldState::new(v[0], v[1])?;
    let record = simulate_ising(s0, &p, mode, a.iters, a.tol)?;

    let mut text = String::from("iter,zeta,xi,elbo\n");
    for (k, (s, e)) in record.states.iter().zip(&record.elbos).enumerate() {
        writeln!(text, "{k},{}", row(&[s.zeta, s.xi, *e])).unwrap();
    }
    let iterations = record.iterations();
    match &record.terminal {
        Terminal::ConvergedToFixedPoint(s) => writeln!(
            text,
            "# terminal=fixed_point iterations={iterations} state={},{}",
            num(s.zeta),
            num(s.xi)
        ),
        Terminal::ConvergedToCycle { points, .. } => {
            let pts: Vec<String> = points
                .iter()
                .map(|s| format!("{},{}", num(s.zeta), num(s.xi)))
                .collect();
            writeln!(
                text,
                "# terminal=cycle2 iterations={iterations} points={}",
                pts.join(";")
            )
        }
        Terminal::MaxIterations => {
            writeln!(text, "# terminal=max_iters iterations={iterations}")
        }
    }
    .unwrap();
    Ok(text)
}

fn es(a: &SimulateArgs, ctx: &Context) -> Result<String> {
    let q = es_params(a.es.p, a.ising.beta)?;
    let config = config_for(&a.es, q)?;
    let v = initial(a.init.as_deref(), 3, ctx)?;
    let s0 = ESState::new(v[0], v[1], v[2])?;
    let record = simulate_es_with(s0, q, &config, a.iters, Some(a.tol))?;

    let mut text = String::from("iter,x1,x2,y,elbo\n");
    for (k, (s, e)) in record.states.iter().zip(&record.elbos).enumerate() {
        writeln!(text, "{k},{}", row(&[s.x1, s.x2, s.y, *e])).unwrap();
    }
    let terminal = if record.converged {
        "fixed_point"
    } else {
        "max_iters"
    };
    let s = record.terminal();
    writeln!(
        text,
        "# terminal={terminal} iterations={} state={} gradient={}",
        record.iterations(),
        row(&[s.x1, s.x2, s.y]),
        super::es::source_name(config.gradient),
    )
    .unwrap();
    Ok(text)
}

pub fn predict(a: &PredictArgs) -> Result<String> {
    if a.init.len() != 2 {
        return Err(CliError::usage("--init needs 2 comma-separated values"));
    }
    let s0 = MeanFieldState::new(a.init[0], a.init[1])?;
    let mode = match a.mode {
        Mode::Seq => UpdateMode::Sequential,
        Mode::Par => UpdateMode::Parallel,
    };
    json(&predict_regime(s0, &IsingParams::new(a.beta), mode)?)
}
