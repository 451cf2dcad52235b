//! Eigenvalues of a dense complex matrix: Householder reduction to Hessenberg
//! form followed by single-shift QR with Wilkinson shifts and deflation.
//! Eigenvectors come from inverse iteration.

use crate::error::{Error, Result};
use crate::linalg::dense::{DenseLu, DenseMatrix};
use crate::scalar::{norm2, Cplx, Real};

/// QR sweeps allowed per unit of dimension before giving up.
const SWEEPS_PER_DIM: usize = 100;

/// An eigenvalue with a unit-norm eigenvector and its backward error
/// `‖A v − μ v‖ / ‖A‖_F`.
#[derive(Debug, Clone)]
pub struct EigenPair<T> {
    pub value: Cplx<T>,
    pub vector: Vec<Cplx<T>>,
    pub backward_error: T,
}

fn zero<T: Real>() -> Cplx<T> {
    Cplx::new(T::zero(), T::zero())
}

fn hessenberg<T: Real>(a: &mut DenseMatrix<T>) {
    let n = a.rows();
    for k in 0..n.saturating_sub(2) {
        let x: Vec<Cplx<T>> = (k + 1..n).map(|i| a[(i, k)]).collect();
        let xnorm = norm2(&x);
        if xnorm == T::zero() {
            continue;
        }
        let x0 = x[0];
        let phase = if x0.norm() == T::zero() {
            Cplx::new(T::one(), T::zero())
        } else {
            x0 / x0.norm()
        };
        let mut v = x;
        v[0] = x0 + phase * xnorm;
        let vnorm = norm2(&v);
        for z in v.iter_mut() {
            *z = *z / vnorm;
        }
        let two = T::lit(2.0);
        // left: rows k+1.., all columns k..
        for j in k..n {
            let mut s = zero::<T>();
            for (t, vi) in v.iter().enumerate() {
                s += vi.conj() * a[(k + 1 + t, j)];
            }
            for (t, vi) in v.iter().enumerate() {
                a[(k + 1 + t, j)] -= vi * s * two;
            }
        }
        // right: all rows, columns k+1..
        for i in 0..n {
            let mut s = zero::<T>();
            for (t, vi) in v.iter().enumerate() {
                s += a[(i, k + 1 + t)] * vi;
            }
            for (t, vi) in v.iter().enumerate() {
                a[(i, k + 1 + t)] -= s * vi.conj() * two;
            }
        }
        for i in k + 2..n {
            a[(i, k)] = zero();
        }
    }
}

/// Rotation `G = [[c, s], [−s̄, c]]` with real `c` mapping `(a, b)` to `(r, 0)`.
fn givens<T: Real>(a: Cplx<T>, b: Cplx<T>) -> (T, Cplx<T>) {
    let na = a.norm();
    let nb = b.norm();
    if nb == T::zero() {
        return (T::one(), zero());
    }
    if na == T::zero() {
        return (T::zero(), b.conj() / nb);
    }
    let r = na.hypot(nb);
    (na / r, (a / na) * b.conj() / r)
}

fn wilkinson_shift<T: Real>(a: Cplx<T>, b: Cplx<T>, c: Cplx<T>, d: Cplx<T>) -> Cplx<T> {
    let half = T::lit(0.5);
    let mid = (a - d) * half;
    let disc = (mid * mid + b * c).sqrt();
    let (l1, l2) = (d + mid + disc, d + mid - disc);
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// All eigenvalues of a square matrix, in the order they deflate.
pub fn eigenvalues<T: Real>(matrix: &DenseMatrix<T>) -> Result<Vec<Cplx<T>>> {
    assert!(matrix.is_square(), "eigenvalues need a square matrix");
    let n = matrix.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut h = matrix.clone();
    hessenberg(&mut h);
    let eps = T::epsilon();
    let budget = SWEEPS_PER_DIM * n;
    let mut total = 0usize;
    let mut since_deflation = 0usize;
    let mut hi = n - 1;
    while hi > 0 {
        let mut l = hi;
        while l > 0 {
            let sub = h[(l, l - 1)].norm();
            let scale = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            let scale = if scale == T::zero() { T::one() } else { scale };
            if sub <= eps * scale {
                h[(l, l - 1)] = zero();
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        total += 1;
        since_deflation += 1;
        if total > budget {
            return Err(Error::NonConvergence { iterations: total });
        }
        let mut shift = wilkinson_shift(
            h[(hi - 1, hi - 1)],
            h[(hi - 1, hi)],
            h[(hi, hi - 1)],
            h[(hi, hi)],
        );
        if since_deflation % 11 == 10 {
            // exceptional shift breaks symmetric stagnation cycles
            let bump = h[(hi, hi - 1)].norm()
                + if hi >= l + 2 {
                    h[(hi - 1, hi - 2)].norm()
                } else {
                    T::zero()
                };
            shift = h[(hi, hi)] + Cplx::new(T::lit(0.75) * bump, T::lit(-0.4375) * bump);
        }
        for i in l..=hi {
            h[(i, i)] -= shift;
        }
        let mut rotations = Vec::with_capacity(hi - l);
        for j in l..hi {
            let (c, s) = givens(h[(j, j)], h[(j + 1, j)]);
            for q in j..=hi {
                let x = h[(j, q)];
                let y = h[(j + 1, q)];
                h[(j, q)] = x * c + s * y;
                h[(j + 1, q)] = y * c - s.conj() * x;
            }
            rotations.push((c, s));
        }
        for (offset, &(c, s)) in rotations.iter().enumerate() {
            let j = l + offset;
            for p in l..=(j + 1).min(hi) {
                let x = h[(p, j)];
                let y = h[(p, j + 1)];
                h[(p, j)] = x * c + s.conj() * y;
                h[(p, j + 1)] = y * c - s * x;
            }
        }
        for i in l..=hi {
            h[(i, i)] += shift;
        }
    }
    Ok((0..n).map(|i| h[(i, i)]).collect())
}

/// Eigenvectors for the requested eigenvalues by inverse iteration.
pub fn eigenpairs<T: Real>(
    matrix: &DenseMatrix<T>,
    values: &[Cplx<T>],
) -> Result<Vec<EigenPair<T>>> {
    let n = matrix.rows();
    let anorm = matrix.frobenius_norm().max(T::min_positive_value());
    let floor = anorm * T::epsilon();
    values
        .iter()
        .map(|&mu| {
            let shifted = DenseMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    matrix[(i, j)] - mu
                } else {
                    matrix[(i, j)]
                }
            });
            let lu = DenseLu::factor_with_floor(&shifted, floor)?;
            let mut v: Vec<Cplx<T>> = (0..n)
                .map(|i| Cplx::new(T::one(), T::from_usize(i % 7) / T::lit(7.0)))
                .collect();
            for _ in 0..3 {
                let w = lu.solve(&v);
                let wn = norm2(&w);
                if !(wn > T::zero()) || !wn.is_finite() {
                    break;
                }
                v = w.into_iter().map(|z| z / wn).collect();
            }
            let av = matrix.matvec(&v);
            let res: Vec<_> = av.iter().zip(&v).map(|(a, x)| a - x * mu).collect();
            Ok(EigenPair {
                value: mu,
                vector: v,
                backward_error: norm2(&res) / anorm,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cplx;

    fn sorted(mut v: Vec<Cplx<f64>>) -> Vec<Cplx<f64>> {
        v.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
        v
    }

    #[test]
    fn triangular_matrix_returns_its_diagonal() {
        let a = DenseMatrix::from_fn(4, 4, |i, j| {
            if j >= i {
                cplx((i + 1) as f64, j as f64)
            } else {
                cplx(0.0, 0.0)
            }
        });
        let got = sorted(eigenvalues(&a).unwrap());
        for (i, g) in got.iter().enumerate() {
            assert!((g - cplx((i + 1) as f64, i as f64)).norm() < 1e-12);
        }
    }

    #[test]
    fn rotation_has_unimodular_eigenvalues() {
        let t = 0.3f64;
        let a = DenseMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) | (1, 1) => cplx(t.cos(), 0.0),
            (0, 1) => cplx(-t.sin(), 0.0),
            _ => cplx(t.sin(), 0.0),
        });
        let got = sorted(eigenvalues(&a).unwrap());
        assert!((got[0] - cplx(t.cos(), -t.sin())).norm() < 1e-13);
        assert!((got[1] - cplx(t.cos(), t.sin())).norm() < 1e-13);
    }

    #[test]
    fn matches_nalgebra_schur_on_random_matrix() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let n = 40;
        let a = DenseMatrix::from_fn(n, n, |_, _| {
            cplx(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let ours = eigenvalues(&a).unwrap();
        let na = nalgebra::DMatrix::from_fn(n, n, |i, j| {
            nalgebra::Complex::new(a[(i, j)].re, a[(i, j)].im)
        });
        let theirs: Vec<Cplx<f64>> = na
            .schur()
            .eigenvalues()
            .unwrap()
            .iter()
            .map(|z| cplx(z.re, z.im))
            .collect();
        for t in &theirs {
            let best = ours
                .iter()
                .map(|o| (o - t).norm())
                .fold(f64::INFINITY, f64::min);
            assert!(best < 1e-10, "eigenvalue {t} unmatched ({best})");
        }
        let pairs = eigenpairs(&a, &ours[..10]).unwrap();
        assert!(pairs.iter().all(|p| p.backward_error < 1e-8));
    }
}
