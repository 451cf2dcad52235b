//! Physical setup of the two-subdomain cavity and its sine-Fourier modes.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Cplx, Real};
use crate::symbols::alpha;

/// Wavenumber and geometry of the rectangle `[−ℓ/2, ℓ/2] × [0, h]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalSetup<T> {
    /// Wavenumber `k = 2π/λ_w`.
    pub k: T,
    /// Total length ℓ; each subdomain has length ℓ/2.
    pub ell: T,
    /// Height h.
    pub h: T,
    /// Wavelength λ_w.
    pub lambda_w: T,
}

impl<T: Real> PhysicalSetup<T> {
    /// Builds a setup from the wavenumber. Validates positivity only; call
    /// [`PhysicalSetup::check_nonresonant`] for the eigenvalue guard.
    pub fn new(k: T, ell: T, h: T) -> Result<Self> {
        if !(k > T::zero() && ell > T::zero() && h > T::zero()) {
            return Err(Error::InvalidInput(format!(
                "k, ell and h must be positive (got k={k}, ell={ell}, h={h})"
            )));
        }
        Ok(Self {
            k,
            ell,
            h,
            lambda_w: T::TAU() / k,
        })
    }

    pub fn from_wavelength(lambda_w: T, ell: T, h: T) -> Result<Self> {
        if !(lambda_w > T::zero()) {
            return Err(Error::InvalidInput(format!(
                "wavelength must be positive (got {lambda_w})"
            )));
        }
        Self::new(T::TAU() / lambda_w, ell, h)
    }

    /// Cavity of length `ell_over_lambda·λ_w` and height ℓ/2 with λ_w = 1.
    pub fn cavity(ell_over_lambda: T) -> Result<Self> {
        let ell = ell_over_lambda;
        Self::from_wavelength(T::one(), ell, ell / T::lit(2.0))
    }

    /// ℓ = 9.5 λ_w, h = ℓ/2, λ_w = 1.
    pub fn reference() -> Self {
        Self::cavity(T::lit(9.5)).expect("reference setup is valid")
    }

    /// Sine-series variable of mode `m`: `s = mπ/h`.
    pub fn s_of(&self, m: usize) -> T {
        T::from_usize(m) * T::PI() / self.h
    }

    pub fn mode(&self, m: usize) -> FourierMode<T> {
        FourierMode::new(m, self)
    }

    /// Modes `1..=count`.
    pub fn modes(&self, count: usize) -> Vec<FourierMode<T>> {
        (1..=count).map(|m| self.mode(m)).collect()
    }

    /// Number of modes `m ≥ 1` with `s_m < k`.
    pub fn propagating_count(&self) -> usize {
        let mut m = 1;
        while self.s_of(m) < self.k {
            m += 1;
        }
        m - 1
    }

    pub fn regime(&self, s: T) -> Regime {
        Regime::classify(s, self.k)
    }

    /// Fails if `k²` lies within `guard·k²` of a Dirichlet eigenvalue
    /// `(mπ/h)² + (qπ/L)²` of the full cavity (L = ℓ) or of a half cavity (L = ℓ/2).
    pub fn check_nonresonant(&self, guard: T) -> Result<()> {
        let k2 = self.k * self.k;
        let half = self.ell / T::lit(2.0);
        for length in [self.ell, half] {
            let m_max = (T::lit(2.0) * self.k * self.h / T::PI())
                .ceil()
                .to_usize()
                .unwrap_or(0)
                + 1;
            let q_max = (T::lit(2.0) * self.k * length / T::PI())
                .ceil()
                .to_usize()
                .unwrap_or(0)
                + 1;
            for m in 1..=m_max {
                let sm = T::from_usize(m) * T::PI() / self.h;
                for q in 1..=q_max {
                    let sq = T::from_usize(q) * T::PI() / length;
                    if (k2 - sm * sm - sq * sq).abs() <= guard * k2 {
                        return Err(Error::InvalidInput(format!(
                            "k is an eigen-wavenumber (m={m}, q={q}, length={length})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Default guard `1e-8·k²` for [`PhysicalSetup::check_nonresonant`].
    pub fn default_guard() -> T {
        T::lit(1e-8)
    }
}

/// Subdomain: `Left` is Ω₀ = [−ℓ/2, 0] × [0, h], `Right` is Ω₁ = [0, ℓ/2] × [0, h].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn other(self) -> Self {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Side::Left => 0,
            Side::Right => 1,
        }
    }
}

/// Position of `s` relative to the cut-off `s = k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// `s² < k²`
    Propagating,
    /// `s² = k²`
    CutOn,
    /// `s² > k²`
    Evanescent,
}

impl Regime {
    pub fn classify<T: Real>(s: T, k: T) -> Self {
        let d = s * s - k * k;
        if d < T::zero() {
            Regime::Propagating
        } else if d > T::zero() {
            Regime::Evanescent
        } else {
            Regime::CutOn
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Propagating => "propagating",
            Regime::CutOn => "cut-on",
            Regime::Evanescent => "evanescent",
        }
    }
}

/// One term of the sine series in y.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierMode<T> {
    pub m: usize,
    pub s: T,
    pub alpha: Cplx<T>,
}

impl<T: Real> FourierMode<T> {
    pub fn new(m: usize, setup: &PhysicalSetup<T>) -> Self {
        let s = setup.s_of(m);
        Self {
            m,
            s,
            alpha: alpha(s, setup.k),
        }
    }

    /// Off-grid mode at an arbitrary `s` (index 0).
    pub fn at(s: T, k: T) -> Self {
        Self {
            m: 0,
            s,
            alpha: alpha(s, k),
        }
    }

    pub fn regime(&self, k: T) -> Regime {
        Regime::classify(self.s, k)
    }
}

/// Sweep grid on `[0, s_max]`: `n_uniform` equispaced points plus a geometric
/// cluster of `n_refine` points on each side of `k`, from `0.2k` down to `1e-6·k`
/// away. Contains `s = k` exactly. Sorted, duplicates removed.
pub fn refined_grid<T: Real>(k: T, s_max: T, n_uniform: usize, n_refine: usize) -> Vec<T> {
    let mut grid = Vec::with_capacity(n_uniform + 2 * n_refine + 1);
    if n_uniform > 1 {
        let step = s_max / T::from_usize(n_uniform - 1);
        grid.extend((0..n_uniform).map(|i| step * T::from_usize(i)));
    } else {
        grid.push(T::zero());
    }
    if k <= s_max {
        grid.push(k);
        if n_refine > 0 {
            let widest = T::lit(0.2);
            let narrowest = T::lit(1e-6);
            let ratio = if n_refine > 1 {
                (narrowest / widest).powf(T::one() / T::from_usize(n_refine - 1))
            } else {
                T::one()
            };
            let mut off = widest;
            for _ in 0..n_refine {
                for s in [k * (T::one() - off), k * (T::one() + off)] {
                    if s >= T::zero() && s <= s_max {
                        grid.push(s);
                    }
                }
                off = off * ratio;
            }
        }
    }
    grid.sort_by(|a, b| a.partial_cmp(b).expect("finite grid"));
    grid.dedup();
    grid
}
