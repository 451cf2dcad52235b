//! Banded LU with partial pivoting, the direct solver behind every subdomain.
//!
//! Row `i` stores columns `i − kl ..= i + kl + ku`; the extra `kl`
//! superdiagonals absorb the fill-in caused by row interchanges. Multipliers
//! stay in the eliminated positions and are applied interleaved with the
//! interchanges during the solve, as in LAPACK's `gbtrf`/`gbtrs`.

use crate::error::{Error, Result};
use crate::scalar::{Cplx, Real};

/// A square band matrix under assembly.
#[derive(Debug, Clone)]
pub struct BandMatrix<T> {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    data: Vec<Cplx<T>>,
}

impl<T: Real> BandMatrix<T> {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let width = 2 * kl + ku + 1;
        Self {
            n,
            kl,
            ku,
            width,
            data: vec![Cplx::new(T::zero(), T::zero()); n * width],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> usize {
        i * self.width + (j + self.kl - i)
    }

    fn in_band(&self, i: usize, j: usize) -> bool {
        j + self.kl >= i && j <= i + self.ku
    }

    /// `A[i, j] += v`. Panics outside the declared band.
    pub fn add(&mut self, i: usize, j: usize, v: Cplx<T>) {
        assert!(
            self.in_band(i, j),
            "entry ({i}, {j}) outside band kl={} ku={}",
            self.kl,
            self.ku
        );
        let s = self.slot(i, j);
        self.data[s] += v;
    }

    pub fn get(&self, i: usize, j: usize) -> Cplx<T> {
        if self.in_band(i, j) {
            self.data[self.slot(i, j)]
        } else {
            Cplx::new(T::zero(), T::zero())
        }
    }

    pub fn matvec(&self, x: &[Cplx<T>]) -> Vec<Cplx<T>> {
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.kl);
                let hi = (i + self.ku).min(self.n - 1);
                (lo..=hi).fold(Cplx::new(T::zero(), T::zero()), |acc, j| {
                    acc + self.data[self.slot(i, j)] * x[j]
                })
            })
            .collect()
    }

    pub fn factor(self) -> Result<BandedLu<T>> {
        let BandMatrix {
            n,
            kl,
            ku,
            width,
            mut data,
        } = self;
        let slot = |i: usize, j: usize| i * width + (j + kl - i);
        let upper = kl + ku;
        let mut piv = Vec::with_capacity(n);
        for k in 0..n {
            let last = (k + kl).min(n - 1);
            let mut p = k;
            let mut pmax = data[slot(k, k)].norm();
            for i in k + 1..=last {
                let v = data[slot(i, k)].norm();
                if v > pmax {
                    p = i;
                    pmax = v;
                }
            }
            piv.push(p);
            if !(pmax > T::zero()) || !pmax.is_finite() {
                return Err(Error::SingularMatrix { column: k });
            }
            let jmax = (k + upper).min(n - 1);
            if p != k {
                for j in k..=jmax {
                    data.swap(slot(k, j), slot(p, j));
                }
            }
            let pivot = data[slot(k, k)];
            for i in k + 1..=last {
                let l = data[slot(i, k)] / pivot;
                data[slot(i, k)] = l;
                if l.re == T::zero() && l.im == T::zero() {
                    continue;
                }
                for j in k + 1..=jmax {
                    let u = data[slot(k, j)];
                    data[slot(i, j)] -= l * u;
                }
            }
        }
        Ok(BandedLu {
            n,
            kl,
            upper,
            width,
            data,
            piv,
        })
    }
}

/// Factorized band matrix; immutable and shareable across threads.
#[derive(Debug, Clone)]
pub struct BandedLu<T> {
    n: usize,
    kl: usize,
    upper: usize,
    width: usize,
    data: Vec<Cplx<T>>,
    piv: Vec<usize>,
}

impl<T: Real> BandedLu<T> {
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> Cplx<T> {
        self.data[i * self.width + (j + self.kl - i)]
    }

    pub fn solve(&self, b: &[Cplx<T>]) -> Vec<Cplx<T>> {
        assert_eq!(b.len(), self.n, "rhs length mismatch");
        let n = self.n;
        let mut x = b.to_vec();
        for k in 0..n {
            x.swap(k, self.piv[k]);
            let xk = x[k];
            if xk.re == T::zero() && xk.im == T::zero() {
                continue;
            }
            for i in k + 1..=(k + self.kl).min(n - 1) {
                x[i] = x[i] - self.at(i, k) * xk;
            }
        }
        for k in (0..n).rev() {
            let mut acc = x[k];
            for j in k + 1..=(k + self.upper).min(n - 1) {
                acc -= self.at(k, j) * x[j];
            }
            x[k] = acc / self.at(k, k);
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::dense::{DenseLu, DenseMatrix};
    use crate::scalar::cplx;

    fn sample(n: usize, kl: usize, ku: usize) -> BandMatrix<f64> {
        let mut m = BandMatrix::zeros(n, kl, ku);
        for i in 0..n {
            for j in i.saturating_sub(kl)..=(i + ku).min(n - 1) {
                let v = ((i * 7 + j * 13) % 11) as f64 - 5.0;
                let w = ((i * 3 + j * 5) % 7) as f64 - 3.0;
                // weak diagonal on purpose, to exercise pivoting
                let d = if i == j { 0.01 } else { 1.0 };
                m.add(i, j, cplx(d * v, w));
            }
        }
        m
    }

    #[test]
    fn matches_dense_lu() {
        let (n, kl, ku) = (40, 3, 5);
        let band = sample(n, kl, ku);
        let dense = DenseMatrix::from_fn(n, n, |i, j| band.get(i, j));
        let b: Vec<_> = (0..n)
            .map(|i| cplx(i as f64, 1.0 - i as f64 * 0.5))
            .collect();
        let want = DenseLu::factor(&dense).unwrap().solve(&b);
        let got = band.factor().unwrap().solve(&b);
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).norm() < 1e-9 * (1.0 + w.norm()), "{g} vs {w}");
        }
    }

    #[test]
    fn residual_is_small() {
        let band = sample(200, 10, 10);
        let x: Vec<_> = (0..200)
            .map(|i| cplx((i as f64).sin(), (i as f64).cos()))
            .collect();
        let b = band.matvec(&x);
        let got = band.clone().factor().unwrap().solve(&b);
        let err = crate::scalar::relative_l2(&got, &x);
        assert!(err < 1e-10, "{err}");
    }

    #[test]
    fn singular_band_is_reported() {
        let m = BandMatrix::<f64>::zeros(3, 1, 1);
        assert!(matches!(
            m.factor(),
            Err(Error::SingularMatrix { column: 0 })
        ));
    }
}
