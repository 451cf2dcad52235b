use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::scalar::{Cplx, Real};
use crate::setup::PhysicalSetup;

/// Coarsest resolution accepted, in points per wavelength.
pub const MIN_POINTS_PER_WAVELENGTH: f64 = 8.0;

/// Tensor grid on the two half rectangles.
///
/// In each subdomain the local column index `ξ = 0..=nx_half+1` runs from the
/// outer wall (`ξ = 0`) to the interface (`ξ = nx_half+1`). Rows `j = 1..=ny`
/// are interior; `j = 0` and `j = ny+1` lie on the Dirichlet walls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D<T> {
    pub nx_half: usize,
    pub ny: usize,
    pub dx: T,
    pub dy: T,
    pub setup: PhysicalSetup<T>,
}

impl<T: Real> Grid2D<T> {
    /// Grid with spacing as close as possible to `λ_w / points_per_wavelength`.
    pub fn new(setup: PhysicalSetup<T>, points_per_wavelength: T) -> Result<Self> {
        if !(points_per_wavelength >= T::lit(MIN_POINTS_PER_WAVELENGTH)) {
            return Err(Error::InvalidInput(format!(
                "resolution must be at least {MIN_POINTS_PER_WAVELENGTH} points per wavelength (got {points_per_wavelength})"
            )));
        }
        let target = setup.lambda_w / points_per_wavelength;
        let half = setup.ell / T::lit(2.0);
        let cells_x = (half / target).round().to_usize().unwrap_or(1).max(2);
        let cells_y = (setup.h / target).round().to_usize().unwrap_or(1).max(2);
        Self::with_counts(setup, cells_x - 1, cells_y - 1)
    }

    pub fn with_counts(setup: PhysicalSetup<T>, nx_half: usize, ny: usize) -> Result<Self> {
        if nx_half == 0 || ny == 0 {
            return Err(Error::InvalidInput(
                "grid needs at least one interior point per direction".into(),
            ));
        }
        let dx = setup.ell / T::lit(2.0) / T::from_usize(nx_half + 1);
        let dy = setup.h / T::from_usize(ny + 1);
        let grid = Self {
            nx_half,
            ny,
            dx,
            dy,
            setup,
        };
        if !(grid.points_per_wavelength() >= T::lit(MIN_POINTS_PER_WAVELENGTH)) {
            return Err(Error::InvalidInput(format!(
                "grid resolves only {} points per wavelength",
                grid.points_per_wavelength()
            )));
        }
        Ok(grid)
    }

    /// `λ_w / max(dx, dy)`.
    pub fn points_per_wavelength(&self) -> T {
        self.setup.lambda_w / self.dx.max(self.dy)
    }

    /// Local index of the interface column.
    pub fn interface_index(&self) -> usize {
        self.nx_half + 1
    }

    pub fn y(&self, j: usize) -> T {
        T::from_usize(j) * self.dy
    }

    /// Global column `i = 0..=2(nx_half+1)` sits at `x = −ℓ/2 + i·dx`.
    pub fn x(&self, i: usize) -> T {
        -self.setup.ell / T::lit(2.0) + T::from_usize(i) * self.dx
    }

    pub fn global_columns(&self) -> usize {
        2 * self.interface_index() + 1
    }
}

/// Nodal field on the whole rectangle, boundary nodes included.
#[derive(Debug, Clone, PartialEq)]
pub struct Field2D<T> {
    pub grid: Grid2D<T>,
    /// `values[i·(ny+2) + j]` at `(x_i, y_j)`.
    pub values: Vec<Cplx<T>>,
}

impl<T: Real> Field2D<T> {
    pub fn zeros(grid: Grid2D<T>) -> Self {
        let len = grid.global_columns() * (grid.ny + 2);
        Self {
            grid,
            values: vec![Cplx::new(T::zero(), T::zero()); len],
        }
    }

    pub fn rows(&self) -> usize {
        self.grid.ny + 2
    }

    pub fn at(&self, i: usize, j: usize) -> Cplx<T> {
        self.values[i * self.rows() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Cplx<T>) {
        let r = self.rows();
        self.values[i * r + j] = v;
    }

    /// Relative discrete L² distance to `other`.
    pub fn relative_error(&self, other: &Self) -> T {
        crate::scalar::relative_l2(&self.values, &other.values)
    }

    /// `x,y,re_p,im_p` rows, x-major.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(48 * self.values.len() + 16);
        out.push_str("x,y,re_p,im_p\n");
        for i in 0..self.grid.global_columns() {
            let x = self.grid.x(i);
            for j in 0..self.rows() {
                let p = self.at(i, j);
                let _ = writeln!(out, "{},{},{},{}", x, self.grid.y(j), p.re, p.im);
            }
        }
        out
    }
}
