//! Rotated-branch Padé approximation of `√(1+z)`.

use serde::Serialize;

use crate::scalar::{cplx, Cplx, Real};

/// Coefficients of the `n_terms`-term Padé expansion with branch cut rotated by `xi`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PadeCoefficients<T> {
    pub n_terms: usize,
    pub xi: T,
    /// `a_p = 2/(2N+1)·sin²(pπ/(2N+1))`
    pub a: Vec<T>,
    /// `b_p = cos²(pπ/(2N+1))`
    pub b: Vec<T>,
    /// `C₀ = e^{jξ/2}·R_N(e^{−jξ} − 1)`
    pub c0: Cplx<T>,
    /// `A_p = e^{−jξ/2}·a_p / [1 + b_p(e^{−jξ} − 1)]²`
    pub big_a: Vec<Cplx<T>>,
    /// `B_p = e^{−jξ}·b_p / [1 + b_p(e^{−jξ} − 1)]`
    pub big_b: Vec<Cplx<T>>,
}

impl<T: Real> PadeCoefficients<T> {
    pub fn new(n_terms: usize, xi: T) -> Self {
        assert!(n_terms >= 1, "Padé expansion needs at least one term");
        let denom = T::from_usize(2 * n_terms + 1);
        let two = T::lit(2.0);
        let (a, b): (Vec<T>, Vec<T>) = (1..=n_terms)
            .map(|p| {
                let theta = T::from_usize(p) * T::PI() / denom;
                let (sin, cos) = theta.sin_cos();
                (two / denom * sin * sin, cos * cos)
            })
            .unzip();

        let rot = cplx(T::zero(), -xi).exp();
        let z = rot - T::one();
        let mut r = cplx(T::one(), T::zero());
        for (&ap, &bp) in a.iter().zip(&b) {
            r += z * ap / (z * bp + T::one());
        }
        let c0 = cplx(T::zero(), xi / two).exp() * r;
        let half_rot = cplx(T::zero(), -xi / two).exp();
        let (big_a, big_b) = a
            .iter()
            .zip(&b)
            .map(|(&ap, &bp)| {
                let d = z * bp + T::one();
                (half_rot * ap / (d * d), rot * bp / d)
            })
            .unzip();
        Self {
            n_terms,
            xi,
            a,
            b,
            c0,
            big_a,
            big_b,
        }
    }

    /// The real Padé approximant `R_N(z) = 1 + Σ a_p z / (1 + b_p z)`.
    pub fn real_approximant(&self, z: Cplx<T>) -> Cplx<T> {
        self.a
            .iter()
            .zip(&self.b)
            .fold(cplx(T::one(), T::zero()), |acc, (&ap, &bp)| {
                acc + z * ap / (z * bp + T::one())
            })
    }

    /// Rotated approximation of `√(1+z)`: `C₀ + Σ A_p z / (1 + B_p z)`.
    pub fn rotated_sqrt(&self, z: Cplx<T>) -> Cplx<T> {
        self.big_a
            .iter()
            .zip(&self.big_b)
            .fold(self.c0, |acc, (&ap, &bp)| {
                acc + ap * z / (bp * z + T::one())
            })
    }
}
