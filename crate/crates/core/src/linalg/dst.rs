//! Orthonormal type-I discrete sine transform on the interior interface nodes.

use crate::scalar::{Cplx, Real};

/// Dense orthonormal DST-I of size `n`: `S[j][m] = √(2/(n+1))·sin((j+1)(m+1)π/(n+1))`.
/// `S` is symmetric and its own inverse.
#[derive(Debug, Clone)]
pub struct SineTransform<T> {
    n: usize,
    matrix: Vec<T>,
}

impl<T: Real> SineTransform<T> {
    pub fn new(n: usize) -> Self {
        let np1 = T::from_usize(n + 1);
        let scale = (T::lit(2.0) / np1).sqrt();
        let mut matrix = Vec::with_capacity(n * n);
        for j in 1..=n {
            for m in 1..=n {
                // reduce (j·m) mod 2(n+1) so the sine argument stays small
                let r = (j * m) % (2 * (n + 1));
                matrix.push(scale * (T::from_usize(r) * T::PI() / np1).sin());
            }
        }
        Self { n, matrix }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Nodal values to mode coefficients (and back: the transform is an involution).
    pub fn apply(&self, v: &[Cplx<T>]) -> Vec<Cplx<T>> {
        assert_eq!(v.len(), self.n, "sine transform length mismatch");
        (0..self.n)
            .map(|m| {
                let row = &self.matrix[m * self.n..(m + 1) * self.n];
                row.iter()
                    .zip(v)
                    .fold(Cplx::new(T::zero(), T::zero()), |acc, (&s, z)| acc + z * s)
            })
            .collect()
    }

    /// Applies `diag(weights)` in sine space: `S·diag(w)·S·v`.
    pub fn multiply_diagonal(&self, weights: &[Cplx<T>], v: &[Cplx<T>]) -> Vec<Cplx<T>> {
        let coeffs = self.apply(v);
        let scaled: Vec<_> = coeffs.iter().zip(weights).map(|(c, w)| c * w).collect();
        self.apply(&scaled)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cplx;

    #[test]
    fn is_an_involution() {
        let t = SineTransform::<f64>::new(17);
        let v: Vec<_> = (0..17).map(|i| cplx((i as f64).cos(), i as f64)).collect();
        let back = t.apply(&t.apply(&v));
        assert!(crate::scalar::relative_l2(&back, &v) < 1e-13);
    }

    #[test]
    fn diagonalizes_the_second_difference() {
        let n = 12;
        let t = SineTransform::<f64>::new(n);
        let m = 3;
        let v: Vec<_> = (0..n)
            .map(|j| {
                t.apply(&{
                    let mut e = vec![cplx(0.0, 0.0); n];
                    e[m - 1] = cplx(1.0, 0.0);
                    e
                })[j]
            })
            .collect();
        let eig = -2.0 * (1.0 - (m as f64 * std::f64::consts::PI / (n + 1) as f64).cos());
        for j in 0..n {
            let left = if j > 0 { v[j - 1] } else { cplx(0.0, 0.0) };
            let right = if j + 1 < n { v[j + 1] } else { cplx(0.0, 0.0) };
            let lap = left + right - v[j] * 2.0;
            assert!((lap - v[j] * eig).norm() < 1e-13);
        }
    }
}
