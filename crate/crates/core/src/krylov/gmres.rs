use std::fmt::Write as _;

use super::LinearOperator;
use crate::error::{Error, Result};
use crate::scalar::{axpy, dot, norm2, Cplx, Real};

/// A second Gram–Schmidt pass runs when `max|⟨vᵢ, w⟩|/‖w‖` exceeds this.
pub const REORTHOGONALIZATION_THRESHOLD: f64 = 1e-8;

/// Residual history of one GMRES run.
#[derive(Debug, Clone)]
pub struct GmresTrace<T> {
    /// Relative residual estimates; `residuals[0] = 1` unless `b = 0`.
    pub residuals: Vec<T>,
    pub iterations: usize,
    pub converged: bool,
    pub solution: Vec<Cplx<T>>,
    /// `‖M x − b‖/‖b‖` recomputed from the returned solution.
    pub true_residual: T,
}

impl<T: Real> GmresTrace<T> {
    /// Final residual, never below the recomputed one.
    pub fn reported_residual(&self) -> T {
        self.residuals
            .last()
            .copied()
            .unwrap_or(T::zero())
            .max(self.true_residual)
    }

    /// First iteration whose residual falls below `tol`.
    pub fn first_below(&self, tol: T) -> Option<usize> {
        self.residuals.iter().position(|&r| r < tol)
    }
}

fn givens<T: Real>(a: Cplx<T>, b: Cplx<T>) -> (T, Cplx<T>) {
    let na = a.norm();
    let nb = b.norm();
    if nb == T::zero() {
        (T::one(), Cplx::new(T::zero(), T::zero()))
    } else if na == T::zero() {
        (T::zero(), b.conj() / nb)
    } else {
        let r = na.hypot(nb);
        (na / r, (a / na) * b.conj() / r)
    }
}

/// Solves `M x = b` by GMRES without restart. `maxit` defaults to the dimension.
pub fn gmres<T: Real, O: LinearOperator<T> + ?Sized>(
    op: &O,
    b: &[Cplx<T>],
    tol: T,
    maxit: Option<usize>,
) -> Result<GmresTrace<T>> {
    let n = op.dim();
    if b.len() != n {
        return Err(Error::InvalidInput(format!(
            "rhs has length {} but operator dimension is {n}",
            b.len()
        )));
    }
    if !(tol > T::zero()) {
        return Err(Error::InvalidInput(format!(
            "GMRES tolerance must be positive (got {tol})"
        )));
    }
    let maxit = maxit.unwrap_or(n).min(n);
    let zero = Cplx::new(T::zero(), T::zero());
    let beta = norm2(b);
    if beta == T::zero() {
        return Ok(GmresTrace {
            residuals: vec![T::zero()],
            iterations: 0,
            converged: true,
            solution: vec![zero; n],
            true_residual: T::zero(),
        });
    }

    let reorth = T::lit(REORTHOGONALIZATION_THRESHOLD);
    let mut basis: Vec<Vec<Cplx<T>>> = vec![b.iter().map(|z| z / beta).collect()];
    let mut hess: Vec<Vec<Cplx<T>>> = Vec::with_capacity(maxit);
    let mut rotations: Vec<(T, Cplx<T>)> = Vec::with_capacity(maxit);
    let mut g = vec![Cplx::new(beta, T::zero())];
    let mut residuals = vec![T::one()];
    let mut converged = false;

    for j in 0..maxit {
        let mut w = op.apply(&basis[j])?;
        let mut h = vec![zero; j + 2];
        for (i, v) in basis.iter().enumerate() {
            let hij = dot(v, &w);
            h[i] = hij;
            axpy(-hij, v, &mut w);
        }
        let wn = norm2(&w);
        if wn > T::zero() {
            let loss = basis
                .iter()
                .map(|v| dot(v, &w).norm())
                .fold(T::zero(), T::max)
                / wn;
            if loss > reorth {
                for (i, v) in basis.iter().enumerate() {
                    let c = dot(v, &w);
                    h[i] += c;
                    axpy(-c, v, &mut w);
                }
            }
        }
        let wn = norm2(&w);
        h[j + 1] = Cplx::new(wn, T::zero());

        for (i, &(c, s)) in rotations.iter().enumerate() {
            let (x, y) = (h[i], h[i + 1]);
            h[i] = x * c + s * y;
            h[i + 1] = y * c - s.conj() * x;
        }
        let (c, s) = givens(h[j], h[j + 1]);
        h[j] = h[j] * c + s * h[j + 1];
        h[j + 1] = zero;
        rotations.push((c, s));
        let gj = g[j];
        g[j] = gj * c;
        g.push(-s.conj() * gj);
        hess.push(h);

        let res = g[j + 1].norm() / beta;
        residuals.push(res);

        let happy = wn <= T::epsilon() * hess[j][j].norm().max(T::min_positive_value());
        if res < tol {
            converged = true;
            break;
        }
        if happy {
            if res > T::lit(1e-8) {
                return Err(Error::Breakdown {
                    iteration: j + 1,
                    residual: res.to_f64_lossy(),
                });
            }
            converged = true;
            break;
        }
        basis.push(w.into_iter().map(|z| z / wn).collect());
    }

    let m = hess.len();
    let mut y = vec![zero; m];
    for i in (0..m).rev() {
        let mut acc = g[i];
        for l in i + 1..m {
            acc -= hess[l][i] * y[l];
        }
        y[i] = acc / hess[i][i];
    }
    let mut x = vec![zero; n];
    for (yi, v) in y.iter().zip(&basis) {
        axpy(*yi, v, &mut x);
    }
    let mx = op.apply(&x)?;
    let r: Vec<_> = mx.iter().zip(b).map(|(a, bb)| bb - a).collect();
    let true_residual = norm2(&r) / beta;
    Ok(GmresTrace {
        iterations: m,
        residuals,
        converged,
        solution: x,
        true_residual,
    })
}

/// `iteration,relative_residual` rows.
pub fn gmres_csv<T: Real>(trace: &GmresTrace<T>) -> String {
    let mut out = String::from("iteration,relative_residual\n");
    for (i, r) in trace.residuals.iter().enumerate() {
        let _ = writeln!(out, "{i},{r}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::krylov::FnOperator;
    use crate::linalg::{DenseLu, DenseMatrix};
    use crate::scalar::cplx;
    use rand::{Rng, SeedableRng};

    fn random_vec(n: usize, seed: u64) -> Vec<Cplx<f64>> {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| cplx(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect()
    }

    #[test]
    fn identity_converges_in_one_step() {
        let op = FnOperator::new(6, |x: &[Cplx<f64>]| Ok(x.to_vec()));
        let b = random_vec(6, 1);
        let t = gmres(&op, &b, 1e-12, None).unwrap();
        assert_eq!(t.iterations, 1);
        assert!(t.converged);
        assert!(crate::scalar::relative_l2(&t.solution, &b) < 1e-14);
    }

    #[test]
    fn zero_rhs_returns_at_iteration_zero() {
        let op = FnOperator::new(3, |x: &[Cplx<f64>]| Ok(x.to_vec()));
        let t = gmres(&op, &[cplx(0.0, 0.0); 3], 1e-6, None).unwrap();
        assert_eq!(t.iterations, 0);
        assert!(t.converged);
    }

    #[test]
    fn matches_dense_solve_and_residuals_decrease() {
        let n = 30;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        // known spectrum: V diag(μ) V⁻¹ with μ on a ring around 1
        let v = DenseMatrix::from_fn(n, n, |i, j| {
            let d = if i == j { 3.0 } else { 0.0 };
            cplx(d + rng.gen_range(-0.3..0.3), rng.gen_range(-0.3..0.3))
        });
        let vinv_cols: Vec<Vec<_>> = {
            let lu = DenseLu::factor(&v).unwrap();
            (0..n)
                .map(|j| {
                    let mut e = vec![cplx(0.0, 0.0); n];
                    e[j] = cplx(1.0, 0.0);
                    lu.solve(&e)
                })
                .collect()
        };
        let vinv = DenseMatrix::from_columns(&vinv_cols);
        let diag = DenseMatrix::from_fn(n, n, |i, j| {
            if i == j {
                let t = i as f64 * 0.4;
                cplx(1.0 + 0.5 * t.cos(), 0.5 * t.sin())
            } else {
                cplx(0.0, 0.0)
            }
        });
        let a = v.matmul(&diag).matmul(&vinv);
        let b = random_vec(n, 4);
        let t = gmres(&a, &b, 1e-13, None).unwrap();
        let want = DenseLu::factor(&a).unwrap().solve(&b);
        assert!(crate::scalar::relative_l2(&t.solution, &want) < 1e-10);
        assert!(t.residuals.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-14)));
        assert!(t.true_residual <= t.reported_residual() * (1.0 + 1e-10));
    }

    #[test]
    fn csv_lists_every_iteration() {
        let op = FnOperator::new(2, |x: &[Cplx<f64>]| Ok(vec![x[0] * 2.0, x[1] * 3.0]));
        let t = gmres(&op, &[cplx(1.0, 0.0), cplx(1.0, 0.0)], 1e-12, None).unwrap();
        let csv = gmres_csv(&t);
        assert_eq!(csv.lines().count(), t.residuals.len() + 1);
        assert!(csv.starts_with("iteration,relative_residual\n0,1\n"));
    }
}
