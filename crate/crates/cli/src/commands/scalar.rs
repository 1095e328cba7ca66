use std::fmt::Write;

use cavi_core::bifurcation::{diagram_column, scan_bifurcations};
use cavi_core::scalar::{find_fixed_points, Map1D};
use cavi_core::Error;
use rayon::prelude::*;

use super::json;
use crate::args::{BifurcateArgs, CobwebArgs, DiagramArgs, MapArgs};
use crate::error::{CliError, Result};
use crate::output::{num, row};

pub fn fixed_points(a: &MapArgs) -> Result<String> {
    json(&find_fixed_points(&Map1D::new(a.family, a.param))?)
}

pub fn bifurcate(a: &BifurcateArgs) -> Result<String> {
    json(&scan_bifurcations(a.family, a.from, a.to, a.step)?)
}

/// Alternating vertical (to the graph) and horizontal (to the diagonal)
/// segments, two per iteration.
pub fn cobweb(a: &CobwebArgs) -> Result<String> {
    let map = Map1D::new(a.map.family, a.map.param);
    let mut text = String::from("x0,y0,x1,y1\n");
    let mut x = a.init;
    for _ in 0..a.iters {
        let y = map.eval(x)?;
        writeln!(text, "{}", row(&[x, x, x, y])).unwrap();
        writeln!(text, "{}", row(&[x, y, y, y])).unwrap();
        x = y;
    }
    Ok(text)
}

pub fn diagram(a: &DiagramArgs) -> Result<String> {
    if a.points < 2 || a.keep == 0 || a.inits.is_empty() {
        return Err(CliError::usage(
            "diagram needs --points >= 2, --keep >= 1 and some --inits",
        ));
    }
    if a.from.partial_cmp(&a.to) != Some(std::cmp::Ordering::Less) {
        return Err(Error::InvalidArgument("diagram needs --from < --to").into());
    }
    if let Some(&x) = a.inits.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        return Err(Error::Domain {
            what: "initial value",
            value: x,
        }
        .into());
    }
    let last = (a.points - 1) as f64;
    let columns: Vec<(f64, Vec<_>)> = (0..a.points)
        .into_par_iter()
        .map(|i| {
            let param = a.from + (a.to - a.from) * i as f64 / last;
            let map = Map1D::new(a.family, param);
            (param, diagram_column(&map, &a.inits, a.burn_in, a.keep))
        })
        .collect();

    let mut text = String::from("param,x,period\n");
    for (param, points) in columns {
        for p in points {
            let period = p.period.map(|k| k.to_string()).unwrap_or_default();
            writeln!(text, "{},{},{period}", num(param), num(p.x)).unwrap();
        }
    }
    Ok(text)
}
