//! Five-point finite-difference matrices on vertical strips of grid columns.
//!
//! Unknowns are ordered column by column, `index = c·ny + (j − 1)`, so every
//! matrix is banded with half-bandwidth `ny`. A column is either an interior
//! column of the Helmholtz stencil or a flux row
//! `(u_c − u_nb)/dx − (dx/2)(L_y + k²)u_c + M u_c = data`, which is the
//! centred normal derivative with the ghost value eliminated through the PDE.

use super::config::{ExperimentConfig, Scenario};
use super::grid::{Field2D, Grid2D};
use super::transmission::{transmission_matrix, OuterCondition};
use crate::error::Result;
use crate::linalg::{BandMatrix, BandedLu, DenseMatrix};
use crate::scalar::{cplx, re, Cplx, Real};
use crate::setup::Side;

/// Treatment of the first or last column of a strip.
#[derive(Debug, Clone, Copy)]
pub(crate) enum EndColumn<'a, T> {
    /// Interior stencil; the missing neighbour is Dirichlet data.
    NextToDirichlet,
    /// Flux row with the given zeroth-order block `M`.
    Flux(&'a DenseMatrix<T>),
}

pub(crate) fn assemble_strip<T: Real>(
    grid: &Grid2D<T>,
    n_cols: usize,
    first: EndColumn<'_, T>,
    last: EndColumn<'_, T>,
) -> BandMatrix<T> {
    let ny = grid.ny;
    let k2 = grid.setup.k * grid.setup.k;
    let (dx, dy) = (grid.dx, grid.dy);
    let (idx2, idy2) = (T::one() / (dx * dx), T::one() / (dy * dy));
    let two = T::lit(2.0);
    let mut mat = BandMatrix::zeros(n_cols * ny, ny, ny);
    let at = |c: usize, j: usize| c * ny + j;
    for c in 0..n_cols {
        let end = if c + 1 == n_cols {
            Some((last, c.checked_sub(1)))
        } else if c == 0 {
            Some((first, Some(1).filter(|&n| n < n_cols)))
        } else {
            None
        };
        match end {
            Some((EndColumn::Flux(block), Some(nb))) => {
                let half = dx / two;
                for j in 0..ny {
                    let row = at(c, j);
                    mat.add(row, row, re(T::one() / dx - half * (k2 - two * idy2)));
                    if j > 0 {
                        mat.add(row, at(c, j - 1), re(-half * idy2));
                    }
                    if j + 1 < ny {
                        mat.add(row, at(c, j + 1), re(-half * idy2));
                    }
                    mat.add(row, at(nb, j), re(-T::one() / dx));
                    for l in 0..ny {
                        let v = block[(j, l)];
                        if v.re != T::zero() || v.im != T::zero() {
                            mat.add(row, at(c, l), v);
                        }
                    }
                }
            }
            Some((EndColumn::Flux(_), None)) => panic!("flux column needs a neighbour"),
            _ => {
                for j in 0..ny {
                    let row = at(c, j);
                    mat.add(row, row, re(k2 - two * idx2 - two * idy2));
                    if j > 0 {
                        mat.add(row, at(c, j - 1), re(idy2));
                    }
                    if j + 1 < ny {
                        mat.add(row, at(c, j + 1), re(idy2));
                    }
                    if c > 0 {
                        mat.add(row, at(c - 1, j), re(idx2));
                    }
                    if c + 1 < n_cols {
                        mat.add(row, at(c + 1, j), re(idx2));
                    }
                }
            }
        }
    }
    mat
}

/// Source `Σ_{m=1}^{N} sin(mπ y_j/h)` on the left wall, at the interior rows.
pub fn source_profile<T: Real>(grid: &Grid2D<T>, n_modes: usize) -> Vec<Cplx<T>> {
    let np1 = T::from_usize(grid.ny + 1);
    (1..=grid.ny)
        .map(|j| {
            let v = (1..=n_modes).fold(T::zero(), |acc, m| {
                acc + (T::from_usize(m * j % (2 * (grid.ny + 1))) * T::PI() / np1).sin()
            });
            re(v)
        })
        .collect()
}

fn scaled_identity<T: Real>(n: usize, v: Cplx<T>) -> DenseMatrix<T> {
    DenseMatrix::from_fn(n, n, |i, j| {
        if i == j {
            v
        } else {
            Cplx::new(T::zero(), T::zero())
        }
    })
}

/// One factorized subdomain problem.
#[derive(Debug, Clone)]
pub struct SubdomainProblem<T> {
    pub side: Side,
    pub grid: Grid2D<T>,
    pub outer_condition: OuterCondition,
    /// Local index `ξ` of the first unknown column.
    first_xi: usize,
    n_cols: usize,
    source: Vec<Cplx<T>>,
    /// Right-hand side on an absorbing far end (zero unless the literal form is requested).
    far_data: Cplx<T>,
    factorization: BandedLu<T>,
}

impl<T: Real> SubdomainProblem<T> {
    /// Assembles and factorizes with the given interface block.
    pub fn build(
        side: Side,
        config: &ExperimentConfig<T>,
        transmission: &DenseMatrix<T>,
    ) -> Result<Self> {
        let grid = config.grid;
        let outer_condition = match (side, config.scenario) {
            (Side::Right, Scenario::Waveguide) => OuterCondition::Absorbing,
            _ => OuterCondition::Dirichlet,
        };
        let interface = grid.interface_index();
        let absorbing = scaled_identity(grid.ny, cplx(T::zero(), -grid.setup.k));
        let (first_xi, first) = match outer_condition {
            OuterCondition::Dirichlet => (1, EndColumn::NextToDirichlet),
            OuterCondition::Absorbing => (0, EndColumn::Flux(&absorbing)),
        };
        let n_cols = interface + 1 - first_xi;
        let matrix = assemble_strip(&grid, n_cols, first, EndColumn::Flux(transmission));
        let source = match side {
            Side::Left => source_profile(&grid, config.n_source_modes),
            Side::Right => vec![Cplx::new(T::zero(), T::zero()); grid.ny],
        };
        let far_data = if config.gamma_inf_literal && outer_condition == OuterCondition::Absorbing {
            cplx(T::zero(), grid.setup.k)
        } else {
            Cplx::new(T::zero(), T::zero())
        };
        Ok(Self {
            side,
            grid,
            outer_condition,
            first_xi,
            n_cols,
            source,
            far_data,
            factorization: matrix.factor()?,
        })
    }

    /// Solves with interface data `g`; `physical` switches the wall source and
    /// far-end data on.
    pub fn solve(&self, g: &[Cplx<T>], physical: bool) -> Vec<Cplx<T>> {
        let ny = self.grid.ny;
        assert_eq!(g.len(), ny, "interface data must have ny entries");
        let mut rhs = vec![Cplx::new(T::zero(), T::zero()); self.n_cols * ny];
        rhs[(self.n_cols - 1) * ny..].copy_from_slice(g);
        if physical {
            if self.first_xi == 1 {
                let idx2 = T::one() / (self.grid.dx * self.grid.dx);
                for (r, f) in rhs[..ny].iter_mut().zip(&self.source) {
                    *r -= f * idx2;
                }
            } else {
                for r in rhs[..ny].iter_mut() {
                    *r += self.far_data;
                }
            }
        }
        self.factorization.solve(&rhs)
    }

    /// The interface column of a solution returned by [`SubdomainProblem::solve`].
    pub fn interface_values<'a>(&self, solution: &'a [Cplx<T>]) -> &'a [Cplx<T>] {
        &solution[(self.n_cols - 1) * self.grid.ny..]
    }

    /// Global column index of local column `c` of the solution vector.
    pub fn global_column(&self, c: usize) -> usize {
        let xi = c + self.first_xi;
        match self.side {
            Side::Left => xi,
            Side::Right => 2 * self.grid.interface_index() - xi,
        }
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    /// Dirichlet data on the left wall.
    pub(crate) fn wall_source(&self) -> &[Cplx<T>] {
        &self.source
    }
}

/// Assembles and factorizes the subdomain for `config`.
pub fn build_subdomain<T: Real>(
    side: Side,
    config: &ExperimentConfig<T>,
) -> Result<SubdomainProblem<T>> {
    let lambda = transmission_matrix(&config.spec, &config.grid)?;
    SubdomainProblem::build(side, config, &lambda)
}

/// Single-domain direct solve of the same discrete problem on the whole rectangle.
pub fn solve_monodomain<T: Real>(config: &ExperimentConfig<T>) -> Result<Field2D<T>> {
    let grid = config.grid;
    let ny = grid.ny;
    let last_global = grid.global_columns() - 1;
    let absorbing = scaled_identity(ny, cplx(T::zero(), -grid.setup.k));
    let (n_cols, last) = match config.scenario {
        Scenario::Cavity => (last_global - 1, EndColumn::NextToDirichlet),
        Scenario::Waveguide => (last_global, EndColumn::Flux(&absorbing)),
    };
    let lu = assemble_strip(&grid, n_cols, EndColumn::NextToDirichlet, last).factor()?;
    let source = source_profile(&grid, config.n_source_modes);
    let mut rhs = vec![Cplx::new(T::zero(), T::zero()); n_cols * ny];
    let idx2 = T::one() / (grid.dx * grid.dx);
    for (r, f) in rhs[..ny].iter_mut().zip(&source) {
        *r -= f * idx2;
    }
    if config.gamma_inf_literal && config.scenario == Scenario::Waveguide {
        for r in rhs[(n_cols - 1) * ny..].iter_mut() {
            *r += cplx(T::zero(), grid.setup.k);
        }
    }
    let sol = lu.solve(&rhs);
    let mut field = Field2D::zeros(grid);
    for (j, f) in source.iter().enumerate() {
        field.set(0, j + 1, *f);
    }
    for c in 0..n_cols {
        for j in 0..ny {
            field.set(c + 1, j + 1, sol[c * ny + j]);
        }
    }
    Ok(field)
}
