//! Qualitative comparison of symbols on a sampled `s` axis: zeros, poles,
//! codomain and the values at `s = 0` and `s = k`.

use serde::Serialize;

use super::{lambda_symbol, SymbolSpec};
use crate::error::Error;
use crate::scalar::{Cplx, Real};
use crate::setup::{PhysicalSetup, Regime};

/// Where the sampled values of a symbol live.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Codomain {
    /// No samples in this regime.
    Empty,
    /// Real, nonnegative.
    RealNonNegative,
    Real,
    /// Purely imaginary with nonpositive imaginary part.
    ImaginaryNonPositive,
    Imaginary,
    Complex,
}

#[derive(Debug, Clone, Serialize)]
pub struct SymbolProperties<T> {
    pub label: &'static str,
    pub zeros_propagating: usize,
    pub zeros_evanescent: usize,
    pub poles_propagating: usize,
    pub poles_evanescent: usize,
    pub codomain_propagating: Codomain,
    pub codomain_evanescent: Codomain,
    /// `λ(0)`, `None` when 0 is a pole or not on the grid.
    pub value_at_zero: Option<Cplx<T>>,
    /// `λ(k)`, `None` when not evaluable.
    pub value_at_cut_off: Option<Cplx<T>>,
    /// The symbol vanishes at `s = k` but not at `s = 0`. A value of 0 listed
    /// "at s = 0" for the open-domain symbol refers to this point.
    pub zero_at_cut_off_not_origin: bool,
}

impl<T> SymbolProperties<T> {
    pub fn zeros(&self) -> usize {
        self.zeros_propagating + self.zeros_evanescent
    }

    pub fn poles(&self) -> usize {
        self.poles_propagating + self.poles_evanescent
    }
}

enum Crossing {
    Zero,
    Pole,
}

/// Scans `s_grid` (strictly increasing) and classifies the symbol.
///
/// A sign change of `Re λ + Im λ` between neighbours is bracketed and bisected;
/// it counts as a zero when `|λ|` shrinks towards the crossing and as a pole
/// when it blows up. Samples where `λ` is exactly zero count as zeros, and
/// samples that hit a pole count as poles.
pub fn tabulate_symbol_properties<T: Real>(
    spec: &SymbolSpec<T>,
    setup: &PhysicalSetup<T>,
    s_grid: &[T],
) -> SymbolProperties<T> {
    let k = setup.k;
    let eval = |s: T| lambda_symbol(spec, s, setup);
    let proj = |z: Cplx<T>| z.re + z.im;

    let mut zeros = [0usize; 2];
    let mut poles = [0usize; 2];
    let slot = |s: T| usize::from(Regime::classify(s, k) == Regime::Evanescent);

    let mut vals: Vec<Option<Cplx<T>>> = Vec::with_capacity(s_grid.len());
    for &s in s_grid {
        match eval(s) {
            Ok(v) => {
                if v.norm() == T::zero() {
                    zeros[slot(s)] += 1;
                }
                vals.push(Some(v));
            }
            Err(Error::Pole { .. }) => {
                poles[slot(s)] += 1;
                vals.push(None);
            }
            Err(_) => vals.push(None),
        }
    }

    for i in 0..s_grid.len().saturating_sub(1) {
        let (Some(va), Some(vb)) = (vals[i], vals[i + 1]) else {
            continue;
        };
        let (pa, pb) = (proj(va), proj(vb));
        if pa == T::zero() || pb == T::zero() || (pa > T::zero()) == (pb > T::zero()) {
            continue;
        }
        let (mut lo, mut hi) = (s_grid[i], s_grid[i + 1]);
        let mut p_lo = pa;
        let mut crossing = None;
        for _ in 0..200 {
            let mid = (lo + hi) / T::lit(2.0);
            if mid <= lo || mid >= hi {
                break;
            }
            match eval(mid) {
                Ok(v) => {
                    let p = proj(v);
                    if p == T::zero() {
                        crossing = Some(Crossing::Zero);
                        break;
                    }
                    if (p > T::zero()) == (p_lo > T::zero()) {
                        lo = mid;
                        p_lo = p;
                    } else {
                        hi = mid;
                    }
                }
                Err(Error::Pole { .. }) => {
                    crossing = Some(Crossing::Pole);
                    break;
                }
                Err(_) => break,
            }
        }
        let crossing = crossing.unwrap_or_else(|| {
            let ends = va.norm().max(vb.norm());
            let at = eval((lo + hi) / T::lit(2.0))
                .map(|v| v.norm())
                .unwrap_or(T::infinity());
            if at > ends {
                Crossing::Pole
            } else {
                Crossing::Zero
            }
        });
        let at = slot((lo + hi) / T::lit(2.0));
        match crossing {
            Crossing::Zero => zeros[at] += 1,
            Crossing::Pole => poles[at] += 1,
        }
    }

    let codomain = |regime: Regime| {
        let picked: Vec<Cplx<T>> = s_grid
            .iter()
            .zip(&vals)
            .filter(|(&s, _)| {
                let r = Regime::classify(s, k);
                r == regime || (r == Regime::CutOn && regime == Regime::Propagating)
            })
            .filter_map(|(_, v)| *v)
            .collect();
        classify_codomain(&picked)
    };

    let value_at_zero = s_grid
        .first()
        .filter(|&&s| s == T::zero())
        .and_then(|_| vals[0]);
    let value_at_cut_off = eval(k).ok();
    let zero_at_cut_off_not_origin = matches!(value_at_cut_off, Some(v) if v.norm() == T::zero())
        && matches!(eval(T::zero()), Ok(v) if v.norm() > T::zero());

    SymbolProperties {
        label: spec.label(),
        zeros_propagating: zeros[0],
        zeros_evanescent: zeros[1],
        poles_propagating: poles[0],
        poles_evanescent: poles[1],
        codomain_propagating: codomain(Regime::Propagating),
        codomain_evanescent: codomain(Regime::Evanescent),
        value_at_zero,
        value_at_cut_off,
        zero_at_cut_off_not_origin,
    }
}

fn classify_codomain<T: Real>(values: &[Cplx<T>]) -> Codomain {
    if values.is_empty() {
        return Codomain::Empty;
    }
    let tol = T::lit(1e-12);
    let is_real = values.iter().all(|v| v.im.abs() <= tol * v.norm());
    let is_imag = values.iter().all(|v| v.re.abs() <= tol * v.norm());
    if is_real {
        if values.iter().all(|v| v.re >= T::zero()) {
            Codomain::RealNonNegative
        } else {
            Codomain::Real
        }
    } else if is_imag {
        if values.iter().all(|v| v.im <= T::zero()) {
            Codomain::ImaginaryNonPositive
        } else {
            Codomain::Imaginary
        }
    } else {
        Codomain::Complex
    }
}
