//! Scalar abstraction shared by every numerical routine in the crate.
//!
//! All math is written against [`Real`] so the same code runs in `f32` and
//! `f64`. Tolerances quoted throughout the crate are calibrated for `f64`;
//! instantiating with `f32` is supported for exploration, not verification.

use std::fmt::{Debug, Display, LowerExp};

use num_complex::Complex;
use num_traits::{Float, FloatConst, NumAssign};

/// Real floating-point scalar the solvers are generic over.
pub trait Real:
    Float + FloatConst + NumAssign + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into the scalar type.
    ///
    /// Panics only if the conversion is impossible, which never happens for
    /// the finite literals used in this crate.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from(x).expect("literal not representable")
    }

    /// Converts a count or index.
    #[inline]
    fn from_usize(n: usize) -> Self {
        Self::from(n).expect("integer not representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex counterpart of a [`Real`] scalar.
pub type Cplx<T> = Complex<T>;

#[inline]
pub fn cplx<T: Real>(re: T, im: T) -> Cplx<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn re<T: Real>(x: T) -> Cplx<T> {
    Complex::new(x, T::zero())
}

/// The imaginary unit.
#[inline]
pub(crate) fn jay<T: Real>() -> Cplx<T> {
    Complex::new(T::zero(), T::one())
}

/// Euclidean norm of a complex vector, scaled to avoid overflow.
pub fn norm2<T: Real>(v: &[Cplx<T>]) -> T {
    let scale = v
        .iter()
        .fold(T::zero(), |m, z| m.max(z.re.abs()).max(z.im.abs()));
    if scale == T::zero() || !scale.is_finite() {
        return scale;
    }
    let sum = v.iter().fold(T::zero(), |acc, z| {
        let r = z.re / scale;
        let i = z.im / scale;
        acc + r * r + i * i
    });
    scale * sum.sqrt()
}

/// Hermitian inner product `xᴴ y`.
pub fn dot<T: Real>(x: &[Cplx<T>], y: &[Cplx<T>]) -> Cplx<T> {
    x.iter()
        .zip(y)
        .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| {
            acc + a.conj() * b
        })
}

/// `y += a x`
pub fn axpy<T: Real>(a: Cplx<T>, x: &[Cplx<T>], y: &mut [Cplx<T>]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

/// Relative discrete L² distance `‖a − b‖ / ‖b‖`.
pub fn relative_l2<T: Real>(a: &[Cplx<T>], b: &[Cplx<T>]) -> T {
    let diff: Vec<Cplx<T>> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let nb = norm2(b);
    if nb == T::zero() {
        norm2(&diff)
    } else {
        norm2(&diff) / nb
    }
}
