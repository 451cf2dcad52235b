//! Min-max fit of the second-order symbol `a + b s²` against the open-domain
//! square root on a discrete set of Fourier variables.

use serde::Serialize;

use super::{lambda_opt_open, rho_open, SymbolSpec};
use crate::error::{Error, Result};
use crate::scalar::{cplx, Cplx, Real};
use crate::setup::PhysicalSetup;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Oo2Fit<T> {
    pub a: Cplx<T>,
    pub b: Cplx<T>,
    /// Achieved `max |ρ_open|` over the retained grid.
    pub max_rho: T,
    /// Number of grid points after removing the band around `s = k`.
    pub retained: usize,
}

impl<T: Real> Oo2Fit<T> {
    pub fn spec(&self) -> SymbolSpec<T> {
        SymbolSpec::Oo2 {
            a: self.a,
            b: self.b,
        }
    }
}

/// Mode grid `{mπ/h : m = 1, …, ⌈h/dy⌉}`, reaching the mesh cut-off `π/dy`.
pub fn oo2_default_grid<T: Real>(setup: &PhysicalSetup<T>, dy: T) -> Vec<T> {
    let count = (setup.h / dy).round().to_usize().unwrap_or(1).max(1);
    (1..=count).map(|m| setup.s_of(m)).collect()
}

/// `max_s |ρ_open(a + b s², s)|`; a degenerate point counts as `+∞`.
pub fn max_rho_open<T: Real>(a: Cplx<T>, b: Cplx<T>, grid: &[T], setup: &PhysicalSetup<T>) -> T {
    let spec = SymbolSpec::Oo2 { a, b };
    grid.iter()
        .fold(T::zero(), |m, &s| match rho_open(&spec, s, setup) {
            Ok(r) => m.max(r.norm()),
            Err(_) => T::infinity(),
        })
}

/// Chooses `(a, b)` minimizing the largest open-domain radius over `s_grid`,
/// skipping points with `|s − k| < exclusion_halfwidth`.
///
/// One or two retained points are interpolated exactly; otherwise a
/// restarted Nelder–Mead search runs over the four real parameters.
pub fn optimize_oo2<T: Real>(
    setup: &PhysicalSetup<T>,
    s_grid: &[T],
    exclusion_halfwidth: T,
) -> Result<Oo2Fit<T>> {
    if !(exclusion_halfwidth > T::zero()) {
        return Err(Error::InvalidInput(
            "exclusion half-width must be positive".into(),
        ));
    }
    let k = setup.k;
    let grid: Vec<T> = s_grid
        .iter()
        .copied()
        .filter(|&s| (s - k).abs() >= exclusion_halfwidth)
        .collect();
    if grid.is_empty() {
        return Err(Error::InvalidInput(
            "no grid points left after the exclusion band".into(),
        ));
    }

    let (a, b) = match grid.as_slice() {
        [s0] => (lambda_opt_open(*s0, k), cplx(T::zero(), T::zero())),
        [s0, s1] if s0 != s1 => {
            let (l0, l1) = (lambda_opt_open(*s0, k), lambda_opt_open(*s1, k));
            let b = (l1 - l0) / (*s1 * *s1 - *s0 * *s0);
            (l0 - b * (*s0 * *s0), b)
        }
        _ => minimax_search(setup, &grid),
    };
    let max_rho = max_rho_open(a, b, &grid, setup);
    if !(max_rho < T::one()) {
        return Err(Error::OptimizationFailure {
            max_rho: max_rho.to_f64_lossy(),
        });
    }
    Ok(Oo2Fit {
        a,
        b,
        max_rho,
        retained: grid.len(),
    })
}

fn minimax_search<T: Real>(setup: &PhysicalSetup<T>, grid: &[T]) -> (Cplx<T>, Cplx<T>) {
    let k = setup.k;
    // Parameters scaled to O(1): [Re a/k, Im a/k, Re b·k, Im b·k].
    let unpack = |x: &[T; 4]| (cplx(x[0] * k, x[1] * k), cplx(x[2] / k, x[3] / k));
    let objective = |x: &[T; 4]| {
        let (a, b) = unpack(x);
        max_rho_open(a, b, grid, setup)
    };

    let starts: [[f64; 4]; 6] = [
        [0.1, -0.5, 0.1, 0.1],
        [0.5, -0.5, 0.5, 0.5],
        [0.05, -1.0, 0.02, 0.02],
        [0.3, -0.3, 0.2, 0.05],
        [0.1, -0.9, 0.5, 0.1],
        [0.2, -0.6, 0.05, 0.2],
    ];
    let mut best = starts[0].map(T::lit);
    let mut best_f = objective(&best);
    for start in starts {
        let mut x = start.map(T::lit);
        let mut f = objective(&x);
        for _ in 0..4 {
            let (nx, nf) = nelder_mead(&objective, x, T::lit(0.1), 4000);
            let improved = nf < f;
            x = nx;
            f = nf;
            if !improved {
                break;
            }
        }
        if f < best_f {
            best = x;
            best_f = f;
        }
    }
    unpack(&best)
}

/// Plain Nelder–Mead on ℝ⁴ with an axis-aligned initial simplex.
fn nelder_mead<T: Real, F: Fn(&[T; 4]) -> T>(
    f: &F,
    x0: [T; 4],
    step: T,
    max_evals: usize,
) -> ([T; 4], T) {
    const N: usize = 4;
    let half = T::lit(0.5);
    let two = T::lit(2.0);
    let mut simplex: Vec<([T; 4], T)> = Vec::with_capacity(N + 1);
    simplex.push((x0, f(&x0)));
    for i in 0..N {
        let mut x = x0;
        x[i] += if x[i] == T::zero() {
            step
        } else {
            step * x[i].abs().max(T::lit(0.05))
        };
        simplex.push((x, f(&x)));
    }
    let mut evals = N + 1;
    let lin = |a: &[T; 4], b: &[T; 4], t: T| -> [T; 4] {
        std::array::from_fn(|i| a[i] + t * (b[i] - a[i]))
    };

    while evals < max_evals {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
        let spread = simplex[N].1 - simplex[0].1;
        let size = simplex[1..]
            .iter()
            .map(|(x, _)| {
                (0..N)
                    .map(|i| (x[i] - simplex[0].0[i]).abs())
                    .fold(T::zero(), T::max)
            })
            .fold(T::zero(), T::max);
        if spread.abs() < T::lit(1e-13) && size < T::lit(1e-10) {
            break;
        }
        let centroid: [T; 4] = std::array::from_fn(|i| {
            simplex[..N]
                .iter()
                .map(|(x, _)| x[i])
                .fold(T::zero(), |a, b| a + b)
                / T::from_usize(N)
        });
        let worst = simplex[N];
        let reflected = lin(&centroid, &worst.0, -T::one());
        let fr = f(&reflected);
        evals += 1;
        if fr < simplex[0].1 {
            let expanded = lin(&centroid, &worst.0, -two);
            let fe = f(&expanded);
            evals += 1;
            simplex[N] = if fe < fr {
                (expanded, fe)
            } else {
                (reflected, fr)
            };
        } else if fr < simplex[N - 1].1 {
            simplex[N] = (reflected, fr);
        } else {
            let (target, ft) = if fr < worst.1 {
                (reflected, fr)
            } else {
                (worst.0, worst.1)
            };
            let contracted = lin(&centroid, &target, half);
            let fc = f(&contracted);
            evals += 1;
            if fc < ft {
                simplex[N] = (contracted, fc);
            } else {
                let best = simplex[0].0;
                for v in simplex.iter_mut().skip(1) {
                    v.0 = lin(&best, &v.0, half);
                    v.1 = f(&v.0);
                }
                evals += N;
            }
        }
    }
    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap_or(std::cmp::Ordering::Equal));
    simplex[0]
}
