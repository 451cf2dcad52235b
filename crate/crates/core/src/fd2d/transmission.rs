//! Transmission operators acting on one interface block of `ny` values, and
//! the per-mode discrete symbols they induce.

use super::grid::Grid2D;
use crate::error::Result;
use crate::linalg::{solve_tridiagonal, DenseMatrix, SineTransform};
use crate::scalar::{cplx, jay, re, Cplx, Real};
use crate::symbols::{damped_wavenumber, lambda_symbol, PadeCoefficients, SymbolSpec};

/// Eigenvalue of `−L_y` on discrete sine mode `m`: `(2/dy²)(1 − cos(mπ dy/h))`.
pub fn discrete_s2<T: Real>(grid: &Grid2D<T>, m: usize) -> T {
    let theta = T::from_usize(m) * T::PI() / T::from_usize(grid.ny + 1);
    T::lit(2.0) / (grid.dy * grid.dy) * (T::one() - theta.cos())
}

/// `sin(mπ y_j / h)` at the interior rows.
pub fn sine_mode<T: Real>(grid: &Grid2D<T>, m: usize) -> Vec<Cplx<T>> {
    let np1 = T::from_usize(grid.ny + 1);
    (1..=grid.ny)
        .map(|j| re((T::from_usize(m * j % (2 * (grid.ny + 1))) * T::PI() / np1).sin()))
        .collect()
}

/// `L_y u`: 3-point second difference with zero end values.
pub fn second_difference<T: Real>(u: &[Cplx<T>], dy: T) -> Vec<Cplx<T>> {
    let n = u.len();
    let inv = T::one() / (dy * dy);
    let zero = Cplx::new(T::zero(), T::zero());
    (0..n)
        .map(|j| {
            let below = if j > 0 { u[j - 1] } else { zero };
            let above = if j + 1 < n { u[j + 1] } else { zero };
            (below + above - u[j] * T::lit(2.0)) * inv
        })
        .collect()
}

/// Applies the transmission operator to one interface block.
///
/// Local operators act through the y-stencil (Padé terms via one tridiagonal
/// solve each); the two optimal symbols are applied in sine space at the
/// discrete eigenvalues. Either way, discrete sine mode `m` is scaled by
/// `λ(spec, s̃_m)`.
pub fn apply_transmission<T: Real>(
    u: &[Cplx<T>],
    spec: &SymbolSpec<T>,
    grid: &Grid2D<T>,
) -> Result<Vec<Cplx<T>>> {
    assert_eq!(u.len(), grid.ny, "interface block must have ny entries");
    let k = grid.setup.k;
    match *spec {
        SymbolSpec::Oo0 | SymbolSpec::Emda { .. } => {
            let lambda = lambda_symbol(spec, T::zero(), &grid.setup)?;
            Ok(u.iter().map(|z| z * lambda).collect())
        }
        SymbolSpec::Oo2 { a, b } => {
            let lap = second_difference(u, grid.dy);
            Ok(u.iter().zip(lap).map(|(z, l)| z * a - l * b).collect())
        }
        SymbolSpec::Pade {
            n_terms,
            xi,
            epsilon,
        } => {
            let coeffs = PadeCoefficients::new(n_terms, xi);
            let ke = damped_wavenumber(k, epsilon);
            let ke2 = ke * ke;
            let scaled_lap: Vec<Cplx<T>> = second_difference(u, grid.dy)
                .into_iter()
                .map(|z| z / ke2)
                .collect();
            let off = re(T::one() / (grid.dy * grid.dy)) / ke2;
            let n = grid.ny;
            let mut acc: Vec<Cplx<T>> = u.iter().map(|z| z * coeffs.c0).collect();
            for (&ap, &bp) in coeffs.big_a.iter().zip(&coeffs.big_b) {
                let lower = vec![bp * off; n];
                let diag = vec![Cplx::new(T::one(), T::zero()) - bp * off * T::lit(2.0); n];
                let phi = solve_tridiagonal(&lower, &diag, &lower, &scaled_lap)?;
                for (a, p) in acc.iter_mut().zip(phi) {
                    *a += ap * p;
                }
            }
            let factor = -jay::<T>() * k;
            Ok(acc.into_iter().map(|z| z * factor).collect())
        }
        SymbolSpec::OptClose | SymbolSpec::OptOpen => {
            let weights = (1..=grid.ny)
                .map(|m| lambda_symbol(spec, discrete_s2(grid, m).sqrt(), &grid.setup))
                .collect::<Result<Vec<_>>>()?;
            Ok(SineTransform::new(grid.ny).multiply_diagonal(&weights, u))
        }
    }
}

/// Dense `ny × ny` matrix of [`apply_transmission`].
pub fn transmission_matrix<T: Real>(
    spec: &SymbolSpec<T>,
    grid: &Grid2D<T>,
) -> Result<DenseMatrix<T>> {
    let n = grid.ny;
    let columns = (0..n)
        .map(|j| {
            let mut e = vec![Cplx::new(T::zero(), T::zero()); n];
            e[j] = Cplx::new(T::one(), T::zero());
            apply_transmission(&e, spec, grid)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DenseMatrix::from_columns(&columns))
}

/// Discrete symbol `λ(spec, s̃_m)` of the interface operator on mode `m`.
pub fn discrete_lambda<T: Real>(
    spec: &SymbolSpec<T>,
    grid: &Grid2D<T>,
    m: usize,
) -> Result<Cplx<T>> {
    lambda_symbol(spec, discrete_s2(grid, m).sqrt(), &grid.setup)
}

/// Condition on the far end of a half strip.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OuterCondition {
    Dirichlet,
    /// `∂n p − jk p = 0`
    Absorbing,
}

/// Discrete Dirichlet-to-Neumann value of one finite-difference half strip on
/// mode `m`: the interface flux per unit interface value.
///
/// With `c = k² − s̃_m²`, the ratio `q = u_{ξ−1}/u_ξ` obeys
/// `q ← 1/(2 − dx²c − q)` from the far end, and the interface flux is
/// `(1 − q)/dx − (dx/2)c`.
pub fn discrete_optimal_symbol<T: Real>(
    grid: &Grid2D<T>,
    m: usize,
    far: OuterCondition,
) -> Cplx<T> {
    let k = grid.setup.k;
    let dx = grid.dx;
    let c = k * k - discrete_s2(grid, m);
    let one = Cplx::new(T::one(), T::zero());
    let two_minus = re(T::lit(2.0) - dx * dx * c);
    // q at ξ = 1, then nx_half updates up to the interface column
    let mut q = match far {
        OuterCondition::Dirichlet => Cplx::new(T::zero(), T::zero()),
        OuterCondition::Absorbing => one / (one - cplx(dx * dx * c / T::lit(2.0), dx * k)),
    };
    for _ in 0..grid.nx_half {
        q = one / (two_minus - q);
    }
    (one - q) / dx - re(dx / T::lit(2.0) * c)
}

/// `(λ − D)/(λ + D)` with the discrete symbol `D` of the given half strip.
pub fn discrete_rho<T: Real>(
    spec: &SymbolSpec<T>,
    grid: &Grid2D<T>,
    m: usize,
    far: OuterCondition,
) -> Result<Cplx<T>> {
    let lambda = discrete_lambda(spec, grid, m)?;
    let d = discrete_optimal_symbol(grid, m, far);
    Ok((lambda - d) / (lambda + d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setup::PhysicalSetup;

    fn grid() -> Grid2D<f64> {
        Grid2D::new(PhysicalSetup::reference(), 16.0).unwrap()
    }

    fn max_dev(a: &[Cplx<f64>], b: &[Cplx<f64>]) -> f64 {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    #[test]
    fn oo0_is_scalar() {
        let g = grid();
        let u = sine_mode(&g, 4);
        let got = apply_transmission(&u, &SymbolSpec::Oo0, &g).unwrap();
        let want: Vec<_> = u.iter().map(|z| z * cplx(0.0, -g.setup.k)).collect();
        assert!(max_dev(&got, &want) < 1e-14);
    }

    #[test]
    fn oo2_scales_sine_modes_by_discrete_symbol() {
        let g = grid();
        let (a, b) = (cplx(0.7, -3.0), cplx(0.02, 0.01));
        for m in [1, 9, 40, 75] {
            let u = sine_mode(&g, m);
            let got = apply_transmission(&u, &SymbolSpec::Oo2 { a, b }, &g).unwrap();
            let lam = a + b * discrete_s2(&g, m);
            let want: Vec<_> = u.iter().map(|z| z * lam).collect();
            assert!(max_dev(&got, &want) < 1e-12 * (1.0 + lam.norm()), "m={m}");
        }
    }

    #[test]
    fn stencil_eigenvalue_matches_direct_application() {
        let g = grid();
        for m in [1, 20, 75] {
            let u = sine_mode(&g, m);
            let lap = second_difference(&u, g.dy);
            let want: Vec<_> = u.iter().map(|z| -z * discrete_s2(&g, m)).collect();
            assert!(max_dev(&lap, &want) < 1e-10);
        }
    }

    #[test]
    fn pade_scales_sine_modes_by_symbol() {
        let g = grid();
        let spec = SymbolSpec::pade_default();
        for m in [1, 5, 9, 10, 30, 75] {
            let u = sine_mode(&g, m);
            let got = apply_transmission(&u, &spec, &g).unwrap();
            let lam = discrete_lambda(&spec, &g, m).unwrap();
            let want: Vec<_> = u.iter().map(|z| z * lam).collect();
            assert!(max_dev(&got, &want) < 1e-10 * (1.0 + lam.norm()), "m={m}");
        }
    }

    #[test]
    fn optimal_symbols_act_diagonally_in_sine_space() {
        let g = grid();
        for spec in [SymbolSpec::OptOpen, SymbolSpec::OptClose] {
            let u = sine_mode(&g, 3);
            let got = apply_transmission(&u, &spec, &g).unwrap();
            let lam = discrete_lambda(&spec, &g, 3).unwrap();
            let want: Vec<_> = u.iter().map(|z| z * lam).collect();
            assert!(max_dev(&got, &want) < 1e-11 * (1.0 + lam.norm()));
        }
    }

    #[test]
    fn matrix_reproduces_operator() {
        let g = grid();
        let spec = SymbolSpec::pade_default();
        let mat = transmission_matrix(&spec, &g).unwrap();
        let u: Vec<_> = (0..g.ny)
            .map(|j| cplx((j as f64 * 0.3).sin(), 0.1 * j as f64))
            .collect();
        let direct = apply_transmission(&u, &spec, &g).unwrap();
        assert!(crate::scalar::relative_l2(&mat.matvec(&u), &direct) < 1e-12);
    }

    #[test]
    fn discrete_dtn_approaches_continuous_on_fine_grids() {
        let setup = PhysicalSetup::<f64>::new(2.0, 3.0, 4.0).unwrap();
        let coarse = Grid2D::with_counts(setup, 60, 60).unwrap();
        let fine = Grid2D::with_counts(setup, 960, 960).unwrap();
        let exact = crate::symbols::lambda_opt_close(setup.s_of(2), &setup).unwrap();
        let e_coarse =
            (discrete_optimal_symbol(&coarse, 2, OuterCondition::Dirichlet) - exact).norm();
        let e_fine = (discrete_optimal_symbol(&fine, 2, OuterCondition::Dirichlet) - exact).norm();
        assert!(e_fine < e_coarse / 100.0, "{e_coarse} -> {e_fine}");
    }

    #[test]
    fn absorbing_far_end_tends_to_open_symbol_for_evanescent_modes() {
        let g = grid();
        let m = 30;
        let d = discrete_optimal_symbol(&g, m, OuterCondition::Absorbing);
        let s2 = discrete_s2(&g, m);
        let k = g.setup.k;
        // discrete decay rate: cosh(a dx) = 1 + dx²(s̃² − k²)/2
        let a = ((1.0 + g.dx * g.dx * (s2 - k * k) / 2.0).acosh()) / g.dx;
        let q = (-a * g.dx).exp();
        let want = (1.0 - q) / g.dx + g.dx / 2.0 * (s2 - k * k);
        assert!((d - cplx(want, 0.0)).norm() < 1e-10 * want);
    }
}
