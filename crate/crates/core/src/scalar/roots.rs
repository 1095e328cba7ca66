//! Bracketing root search on `[0, 1]`: uniform sign-change scan, then a
//! safeguarded Newton/bisection polish inside each bracket.

use alloc::vec::Vec;

/// Number of uniform cells used by the sign-change scan.
pub const SCAN_CELLS: usize = 10_000;

/// Roots closer than this are considered the same root.
pub const MERGE_TOLERANCE: f64 = 1e-5;

/// A located root together with its residual `|g(x)|`.
#[derive(Debug, Clone, Copy)]
pub struct Root {
    pub x: f64,
    pub residual: f64,
    /// Supplied by the caller rather than found by the scan.
    pub known: bool,
}

/// All roots of `g` on `[0, 1]` found by a scan over [`SCAN_CELLS`] cells.
///
/// `g` returns `(g(x), g'(x))`. `extra` are known roots that are added before
/// merging: tangential roots a sign-change scan cannot see, or roots that sit
/// inside a root cluster where the scan locates them poorly. A known root
/// always wins a merge.
pub fn scan_unit_interval<G>(g: G, extra: &[f64]) -> Vec<Root>
where
    G: Fn(f64) -> (f64, f64),
{
    let mut roots: Vec<Root> = extra
        .iter()
        .map(|&x| Root {
            x,
            residual: g(x).0.abs(),
            known: true,
        })
        .collect();

    let node = |i: usize| i as f64 / SCAN_CELLS as f64;
    let mut a = 0.0;
    let mut ga = g(a).0;
    if ga == 0.0 {
        roots.push(Root {
            x: a,
            residual: 0.0,
            known: false,
        });
    }
    for i in 1..=SCAN_CELLS {
        let b = node(i);
        let gb = g(b).0;
        if gb == 0.0 {
            roots.push(Root {
                x: b,
                residual: 0.0,
                known: false,
            });
        } else if ga != 0.0 && (ga < 0.0) != (gb < 0.0) {
            let x = polish(&g, a, ga, b);
            roots.push(Root {
                x,
                residual: g(x).0.abs(),
                known: false,
            });
        }
        a = b;
        ga = gb;
    }
    merge(roots)
}

/// Safeguarded Newton iteration inside a sign-change bracket `[lo, hi]`.
fn polish<G>(g: &G, mut lo: f64, g_lo: f64, mut hi: f64) -> f64
where
    G: Fn(f64) -> (f64, f64),
{
    let lo_negative = g_lo < 0.0;
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let (gx, dgx) = g(x);
        if gx == 0.0 {
            return x;
        }
        if (gx < 0.0) == lo_negative {
            lo = x;
        } else {
            hi = x;
        }
        let newton = x - gx / dgx;
        let next = if dgx != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if next == x || hi - lo <= f64::EPSILON * hi.abs().max(1e-300) {
            return next;
        }
        x = next;
    }
    x
}

fn merge(mut roots: Vec<Root>) -> Vec<Root> {
    roots.sort_by(|a, b| a.x.total_cmp(&b.x));
    let mut merged: Vec<Root> = Vec::with_capacity(roots.len());
    for r in roots {
        match merged.last_mut() {
            Some(last) if (r.x - last.x).abs() < MERGE_TOLERANCE => {
                let better = (r.known && !last.known)
                    || (r.known == last.known && r.residual < last.residual);
                if better {
                    *last = r;
                }
            }
            _ => merged.push(r),
        }
    }
    merged
}
