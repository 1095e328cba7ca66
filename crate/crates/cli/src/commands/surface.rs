use std::fmt::Write;

use cavi_core::ising::{elbo, MeanFieldState};
use rayon::prelude::*;

use super::simulate::ising_params;
use crate::args::SurfaceArgs;
use crate::error::{CliError, Result};
use crate::output::{num, row};

/// Grid values within this much of the maximum count as maximisers; the
/// mirror images of a maximiser differ from it only by rounding.
const ARGMAX_TIE: f64 = 1e-12;

/// Row-major ELBO table on `{i / (n + 1)}²`, `zeta` outermost, followed by
/// one comment line per grid maximiser.
pub fn surface(a: &SurfaceArgs) -> Result<String> {
    if a.grid < 2 {
        return Err(CliError::usage("--grid must be at least 2"));
    }
    let p = ising_params(&a.ising)?;
    let n = a.grid;
    let axis: Vec<f64> = (1..=n).map(|i| i as f64 / (n + 1) as f64).collect();
    let rows: Vec<Vec<(f64, f64, f64)>> = axis
        .par_iter()
        .map(|&z| {
            axis.iter()
                .map(|&x| MeanFieldState::new(z, x).map(|s| (z, x, elbo(s, &p))))
                .collect::<Result<_, _>>()
        })
        .collect::<Result<_, _>>()?;

    let max = rows
        .iter()
        .flatten()
        .map(|r| r.2)
        .fold(f64::NEG_INFINITY, f64::max);
    let mut text = String::from("zeta,xi,elbo\n");
    for &(z, x, e) in rows.iter().flatten() {
        writeln!(text, "{}", row(&[z, x, e])).unwrap();
    }
    for &(z, x, e) in rows.iter().flatten().filter(|r| r.2 >= max - ARGMAX_TIE) {
        writeln!(
            text,
            "# argmax zeta={} xi={} elbo={}",
            num(z),
            num(x),
            num(e)
        )
        .unwrap();
    }
    Ok(text)
}
