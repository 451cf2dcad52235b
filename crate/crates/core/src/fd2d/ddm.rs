//! Two-subdomain Schwarz iteration recast as the interface system `(I − A) d = b`.

use super::assembly::{solve_monodomain, SubdomainProblem};
use super::config::ExperimentConfig;
use super::grid::Field2D;
use super::transmission::{sine_mode, transmission_matrix};
use crate::error::{Error, Result};
use crate::krylov::{gmres, GmresTrace, IdentityMinus, LinearOperator};
use crate::linalg::DenseMatrix;
use crate::scalar::{dot, norm2, relative_l2, Cplx, Real};
use crate::setup::Side;

/// Interface data `[g₀ (left side, ny values), g₁ (right side, ny values)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct InterfaceTrace<T> {
    pub values: Vec<Cplx<T>>,
    pub ny: usize,
}

impl<T: Real> InterfaceTrace<T> {
    pub fn zeros(ny: usize) -> Self {
        Self {
            values: vec![Cplx::new(T::zero(), T::zero()); 2 * ny],
            ny,
        }
    }

    pub fn from_blocks(left: &[Cplx<T>], right: &[Cplx<T>]) -> Self {
        assert_eq!(left.len(), right.len(), "trace blocks differ in length");
        let mut values = left.to_vec();
        values.extend_from_slice(right);
        Self {
            values,
            ny: left.len(),
        }
    }

    pub fn from_vec(values: Vec<Cplx<T>>) -> Self {
        assert!(values.len() % 2 == 0, "trace length must be even");
        let ny = values.len() / 2;
        Self { values, ny }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Offset of a side's block.
    pub fn offset(&self, side: Side) -> usize {
        side.index() * self.ny
    }

    pub fn block(&self, side: Side) -> &[Cplx<T>] {
        let o = self.offset(side);
        &self.values[o..o + self.ny]
    }

    pub fn is_finite(&self) -> bool {
        self.values
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

/// Result of a full DDM solve.
#[derive(Debug, Clone)]
pub struct DdmSolution<T> {
    pub rhs: InterfaceTrace<T>,
    pub gmres: GmresTrace<T>,
    pub field: Field2D<T>,
    /// `‖p₀ − p₁‖/‖p₀‖` on the interface; reported, not asserted.
    pub interface_mismatch: T,
}

/// The two factorized subdomains and the interface operator between them.
#[derive(Debug, Clone)]
pub struct DdmSolver<T> {
    pub config: ExperimentConfig<T>,
    transmission: DenseMatrix<T>,
    left: SubdomainProblem<T>,
    right: SubdomainProblem<T>,
}

impl<T: Real> DdmSolver<T> {
    pub fn new(config: ExperimentConfig<T>) -> Result<Self> {
        config.validate()?;
        let transmission = transmission_matrix(&config.spec, &config.grid)?;
        let (left, right) = rayon::join(
            || SubdomainProblem::build(Side::Left, &config, &transmission),
            || SubdomainProblem::build(Side::Right, &config, &transmission),
        );
        Ok(Self {
            config,
            transmission,
            left: left?,
            right: right?,
        })
    }

    pub fn ny(&self) -> usize {
        self.config.grid.ny
    }

    pub fn subdomain(&self, side: Side) -> &SubdomainProblem<T> {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    /// Outgoing data `2Λu − g` towards the neighbour.
    fn outgoing(&self, side: Side, g: &[Cplx<T>], physical: bool) -> Vec<Cplx<T>> {
        let sub = self.subdomain(side);
        let sol = sub.solve(g, physical);
        let u = sub.interface_values(&sol);
        let lu = self.transmission.matvec(u);
        lu.iter()
            .zip(g)
            .map(|(l, gi)| l * T::lit(2.0) - gi)
            .collect()
    }

    fn sweep(&self, d: &[Cplx<T>], physical: bool) -> Result<Vec<Cplx<T>>> {
        let ny = self.ny();
        if d.len() != 2 * ny {
            return Err(Error::InvalidInput(format!(
                "trace has length {}, expected {}",
                d.len(),
                2 * ny
            )));
        }
        let (g0, g1) = d.split_at(ny);
        let (from_left, from_right) = rayon::join(
            || self.outgoing(Side::Left, g0, physical),
            || self.outgoing(Side::Right, g1, physical),
        );
        let mut out = from_right;
        out.extend(from_left);
        Ok(out)
    }

    /// `A d`: one Schwarz sweep with homogeneous physical data.
    pub fn apply_fixed_point_operator(&self, d: &InterfaceTrace<T>) -> Result<InterfaceTrace<T>> {
        Ok(InterfaceTrace::from_vec(self.sweep(&d.values, false)?))
    }

    /// `b`: one sweep from zero traces with the physical data switched on.
    pub fn build_rhs(&self) -> Result<InterfaceTrace<T>> {
        let zero = vec![Cplx::new(T::zero(), T::zero()); 2 * self.ny()];
        Ok(InterfaceTrace::from_vec(self.sweep(&zero, true)?))
    }

    /// Subdomain solutions for traces `d`, glued into one field. The interface
    /// column holds the mean of both sides.
    pub fn reconstruct_solution(&self, d: &InterfaceTrace<T>) -> Field2D<T> {
        self.reconstruct_with_mismatch(d).0
    }

    fn reconstruct_with_mismatch(&self, d: &InterfaceTrace<T>) -> (Field2D<T>, T) {
        let grid = self.config.grid;
        let ny = grid.ny;
        let (sl, sr) = rayon::join(
            || self.left.solve(d.block(Side::Left), true),
            || self.right.solve(d.block(Side::Right), true),
        );
        let mut field = Field2D::zeros(grid);
        for (j, f) in self.left.wall_source().iter().enumerate() {
            field.set(0, j + 1, *f);
        }
        let interface = grid.interface_index();
        for (sub, sol) in [(&self.left, &sl), (&self.right, &sr)] {
            for c in 0..sub.n_cols() {
                let i = sub.global_column(c);
                for j in 0..ny {
                    let v = sol[c * ny + j];
                    if i == interface {
                        field.set(i, j + 1, field.at(i, j + 1) + v * T::lit(0.5));
                    } else {
                        field.set(i, j + 1, v);
                    }
                }
            }
        }
        let mismatch = relative_l2(
            self.left.interface_values(&sl),
            self.right.interface_values(&sr),
        );
        (field, mismatch)
    }

    /// Solves `(I − A) d = b` by GMRES and reconstructs the field.
    pub fn solve(&self) -> Result<DdmSolution<T>> {
        let rhs = self.build_rhs()?;
        let trace = gmres(
            &IdentityMinus(self),
            &rhs.values,
            self.config.gmres_tol,
            self.config.gmres_maxit,
        )?;
        let d = InterfaceTrace::from_vec(trace.solution.clone());
        let (field, interface_mismatch) = self.reconstruct_with_mismatch(&d);
        Ok(DdmSolution {
            rhs,
            gmres: trace,
            field,
            interface_mismatch,
        })
    }

    /// Reference solution of the same discrete problem without decomposition.
    pub fn monodomain(&self) -> Result<Field2D<T>> {
        solve_monodomain(&self.config)
    }

    /// The 2×2 block of `A` on discrete sine mode `m`: `[[a₀₀, a₀₁], [a₁₀, a₁₁]]`
    /// where `a_{ij}` maps the mode coefficient of block `j` to block `i`.
    pub fn mode_block(&self, m: usize) -> Result<[[Cplx<T>; 2]; 2]> {
        let ny = self.ny();
        let v = sine_mode(&self.config.grid, m);
        let vv = dot(&v, &v);
        let zero = vec![Cplx::new(T::zero(), T::zero()); ny];
        let mut block = [[Cplx::new(T::zero(), T::zero()); 2]; 2];
        for (col, trace) in [
            InterfaceTrace::from_blocks(&v, &zero),
            InterfaceTrace::from_blocks(&zero, &v),
        ]
        .iter()
        .enumerate()
        {
            let out = self.apply_fixed_point_operator(trace)?;
            for (row, side) in [Side::Left, Side::Right].into_iter().enumerate() {
                block[row][col] = dot(&v, out.block(side)) / vv;
            }
        }
        Ok(block)
    }

    /// Coefficient ratio of mode `m` in the left block after two applications
    /// of `A` to a pure mode-`m` left trace.
    pub fn two_application_ratio(&self, m: usize) -> Result<Cplx<T>> {
        let ny = self.ny();
        let v = sine_mode(&self.config.grid, m);
        let d = InterfaceTrace::from_blocks(&v, &vec![Cplx::new(T::zero(), T::zero()); ny]);
        let twice = self.apply_fixed_point_operator(&self.apply_fixed_point_operator(&d)?)?;
        Ok(dot(&v, twice.block(Side::Left)) / dot(&v, &v))
    }

    /// Share of `‖w‖` outside the span of mode `m`, per block.
    pub fn off_mode_fraction(&self, w: &[Cplx<T>], m: usize) -> T {
        let v = sine_mode(&self.config.grid, m);
        let c = dot(&v, w) / dot(&v, &v);
        let resid: Vec<_> = w.iter().zip(&v).map(|(wi, vi)| wi - vi * c).collect();
        let nw = norm2(w);
        if nw == T::zero() {
            T::zero()
        } else {
            norm2(&resid) / nw
        }
    }
}

impl<T: Real> LinearOperator<T> for DdmSolver<T> {
    fn dim(&self) -> usize {
        2 * self.ny()
    }

    fn apply(&self, x: &[Cplx<T>]) -> Result<Vec<Cplx<T>>> {
        self.sweep(x, false)
    }
}
