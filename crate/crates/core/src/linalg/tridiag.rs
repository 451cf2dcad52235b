use crate::error::{Error, Result};
use crate::scalar::{Cplx, Real};

/// Pivots below this magnitude abort the Thomas sweep.
pub const TRIDIAGONAL_PIVOT_FLOOR: f64 = 1e-14;

/// Solves `lower[i]·x[i−1] + diag[i]·x[i] + upper[i]·x[i+1] = rhs[i]`
/// without pivoting. `lower[0]` and `upper[n−1]` are ignored.
pub fn solve_tridiagonal<T: Real>(
    lower: &[Cplx<T>],
    diag: &[Cplx<T>],
    upper: &[Cplx<T>],
    rhs: &[Cplx<T>],
) -> Result<Vec<Cplx<T>>> {
    let n = diag.len();
    assert!(
        lower.len() == n && upper.len() == n && rhs.len() == n,
        "tridiagonal length mismatch"
    );
    let floor = T::lit(TRIDIAGONAL_PIVOT_FLOOR);
    let mut c = Vec::with_capacity(n);
    let mut d = Vec::with_capacity(n);
    for i in 0..n {
        let (pivot, prev_d) = if i == 0 {
            (diag[0], Cplx::new(T::zero(), T::zero()))
        } else {
            (diag[i] - lower[i] * c[i - 1], d[i - 1])
        };
        if pivot.norm() < floor {
            return Err(Error::TridiagonalSingular { row: i });
        }
        c.push(upper[i] / pivot);
        let shifted = if i == 0 {
            rhs[0]
        } else {
            rhs[i] - lower[i] * prev_d
        };
        d.push(shifted / pivot);
    }
    let mut x = d;
    for i in (0..n.saturating_sub(1)).rev() {
        let next = x[i + 1];
        x[i] = x[i] - c[i] * next;
    }
    Ok(x)
}
