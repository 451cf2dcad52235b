//! Per-mode Schwarz iteration from the exact closed-form subdomain solutions.
//!
//! Each sine mode decouples the two-subdomain problem into 1D boundary value
//! problems `p'' + (k² − s²)p = 0` on `[−ℓ/2, 0]` and `[0, ℓ/2]` with a
//! homogeneous Dirichlet wall. Iterating the transmission conditions on these
//! solutions gives an independent route to every radius formula in
//! [`crate::symbols`].

use serde::Serialize;

use crate::error::{Error, Result};
use crate::krylov::{LinearOperator, SpectrumReport};
use crate::scalar::{cplx, re, Cplx, Real};
use crate::setup::{FourierMode, PhysicalSetup, Side};
use crate::symbols::{alpha, lambda_symbol, SymbolSpec, DEGENERACY_FLOOR};

/// `|sin(βℓ/2)|` below this marks a mode resonant with the half cavity.
pub const RESONANCE_FLOOR: f64 = 1e-14;
/// Traces smaller than this stop radius extraction.
pub const UNDERFLOW_FLOOR: f64 = 1e-300;
/// Traces larger than this abort radius extraction.
pub const OVERFLOW_CEILING: f64 = 1e300;

/// Closed-form solution of one subdomain problem for one mode.
///
/// Away from cut-off the solution is `A·e^{αx} + B·e^{−αx}`; at `s = k` it is
/// affine, `linear_slope·x + linear_offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormSolution<T> {
    pub side: Side,
    pub mode: FourierMode<T>,
    pub a: Cplx<T>,
    pub b: Cplx<T>,
    pub linear_slope: Cplx<T>,
    pub linear_offset: Cplx<T>,
    /// Interface value `P`.
    pub trace: Cplx<T>,
    ell: T,
    /// `e^{−αℓ}`; unused in the affine case.
    decay: Cplx<T>,
    affine: bool,
}

impl<T: Real> ClosedFormSolution<T> {
    pub fn is_affine(&self) -> bool {
        self.affine
    }

    /// Value at `x`, which may lie outside the subdomain (analytic continuation).
    pub fn evaluate(&self, x: T) -> Cplx<T> {
        if self.affine {
            return self.linear_slope * x + self.linear_offset;
        }
        let al = self.mode.alpha;
        let scale = self.trace / (Cplx::new(T::one(), T::zero()) - self.decay);
        // Written without e^{+αℓ} factors so evanescent modes cannot overflow.
        match self.side {
            Side::Left => scale * ((al * x).exp() - (-al * (re(self.ell) + x)).exp()),
            Side::Right => scale * ((-al * x).exp() - (al * (x - self.ell)).exp()),
        }
    }

    /// `d/dx` at `x`.
    pub fn derivative(&self, x: T) -> Cplx<T> {
        if self.affine {
            return self.linear_slope;
        }
        let al = self.mode.alpha;
        let scale = self.trace * al / (Cplx::new(T::one(), T::zero()) - self.decay);
        match self.side {
            Side::Left => scale * ((al * x).exp() + (-al * (re(self.ell) + x)).exp()),
            Side::Right => -scale * ((-al * x).exp() + (al * (x - self.ell)).exp()),
        }
    }

    /// `|A·e^{∓αℓ/2} + B·e^{±αℓ/2}|` relative to `|A| + |B|`; zero for the affine case.
    pub fn wall_residual(&self) -> T {
        if self.affine {
            let wall = self.wall();
            return self.evaluate(wall).norm();
        }
        let denom = self.a.norm() + self.b.norm();
        if denom == T::zero() {
            return T::zero();
        }
        self.evaluate(self.wall()).norm() / denom
    }

    /// x-coordinate of the outer wall.
    pub fn wall(&self) -> T {
        let half = self.ell / T::lit(2.0);
        match self.side {
            Side::Left => -half,
            Side::Right => half,
        }
    }
}

/// Solves the subdomain problem for one mode with interface value `p`.
pub fn solve_subdomain<T: Real>(
    p: Cplx<T>,
    mode: FourierMode<T>,
    side: Side,
    setup: &PhysicalSetup<T>,
) -> Result<ClosedFormSolution<T>> {
    let zero = Cplx::new(T::zero(), T::zero());
    let two = T::lit(2.0);
    let mode = FourierMode {
        alpha: alpha(mode.s, setup.k),
        ..mode
    };
    let d = (setup.k - mode.s) * (setup.k + mode.s);
    if d == T::zero() {
        let slope = p * two / setup.ell;
        let slope = match side {
            Side::Left => slope,
            Side::Right => -slope,
        };
        return Ok(ClosedFormSolution {
            side,
            mode,
            a: zero,
            b: zero,
            linear_slope: slope,
            linear_offset: p,
            trace: p,
            ell: setup.ell,
            decay: zero,
            affine: true,
        });
    }
    if d > T::zero() && (d.sqrt() * setup.ell / two).sin().abs() < T::lit(RESONANCE_FLOOR) {
        return Err(Error::ResonantMode { m: mode.m });
    }
    let decay = (-mode.alpha * setup.ell).exp();
    let one = Cplx::new(T::one(), T::zero());
    let inv = one / (one - decay);
    let (a, b) = match side {
        Side::Left => (p * inv, -p * decay * inv),
        Side::Right => (-p * decay * inv, p * inv),
    };
    Ok(ClosedFormSolution {
        side,
        mode,
        a,
        b,
        linear_slope: zero,
        linear_offset: zero,
        trace: p,
        ell: setup.ell,
        decay,
        affine: false,
    })
}

/// `dp̂/dx` at the interface: `±αP·coth(αℓ/2)`, or the affine slope at cut-off.
pub fn interface_normal_derivative<T: Real>(sol: &ClosedFormSolution<T>) -> Cplx<T> {
    sol.derivative(T::zero())
}

/// Interface traces of one mode across iterations.
#[derive(Debug, Clone, PartialEq)]
pub struct ModalState<T> {
    pub mode: FourierMode<T>,
    pub p0: Cplx<T>,
    pub p1: Cplx<T>,
    pub iteration: usize,
    pub history: Vec<(Cplx<T>, Cplx<T>)>,
}

impl<T: Real> ModalState<T> {
    pub fn new(mode: FourierMode<T>, p0: Cplx<T>, p1: Cplx<T>) -> Self {
        Self {
            mode,
            p0,
            p1,
            iteration: 0,
            history: vec![(p0, p1)],
        }
    }

    /// `P0 = 1`, `P1 = 0`: both parities of `ρ` show up in the history.
    pub fn seeded(mode: FourierMode<T>) -> Self {
        Self::new(mode, cplx(T::one(), T::zero()), cplx(T::zero(), T::zero()))
    }

    pub fn trace_norm(&self) -> T {
        self.p0.norm().hypot(self.p1.norm())
    }
}

/// Per-unit-trace interface derivatives `(D_L, D_R)` of the two subdomains.
fn interface_dtn<T: Real>(
    mode: FourierMode<T>,
    setup: &PhysicalSetup<T>,
) -> Result<(Cplx<T>, Cplx<T>)> {
    let one = cplx(T::one(), T::zero());
    let left = interface_normal_derivative(&solve_subdomain(one, mode, Side::Left, setup)?);
    let right = interface_normal_derivative(&solve_subdomain(one, mode, Side::Right, setup)?);
    Ok((left, right))
}

/// Symbol value used by the modal engine. The closed-cavity optimum is the
/// subdomain DtN itself, so it is taken from the closed form directly.
fn engine_symbol<T: Real>(
    spec: &SymbolSpec<T>,
    mode: FourierMode<T>,
    setup: &PhysicalSetup<T>,
    dtn_left: Cplx<T>,
) -> Result<Cplx<T>> {
    match spec {
        SymbolSpec::OptClose => Ok(dtn_left),
        _ => lambda_symbol(spec, mode.s, setup),
    }
}

/// One sweep of the transmission conditions on both interfaces.
///
/// Left: `P0' (D_L + λ) = (D_R + λ) P1`; right: `P1' (λ − D_R) = (λ − D_L) P0`,
/// which reduces to `P0' = ρ·P1`, `P1' = ρ·P0`.
pub fn schwarz_modal_step<T: Real>(
    state: &ModalState<T>,
    spec: &SymbolSpec<T>,
    setup: &PhysicalSetup<T>,
) -> Result<ModalState<T>> {
    let mode = state.mode;
    let (dl, dr) = interface_dtn(mode, setup)?;
    let lambda = engine_symbol(spec, mode, setup, dl)?;
    let floor = T::lit(DEGENERACY_FLOOR);
    let left_den = dl + lambda;
    let right_den = lambda - dr;
    if left_den.norm() < floor || right_den.norm() < floor {
        return Err(Error::Degenerate {
            s: mode.s.to_f64_lossy(),
            denominator: left_den.norm().min(right_den.norm()).to_f64_lossy(),
        });
    }
    let left = solve_subdomain(state.p1, mode, Side::Right, setup)?;
    let right = solve_subdomain(state.p0, mode, Side::Left, setup)?;
    let p0 = (interface_normal_derivative(&left) + lambda * state.p1) / left_den;
    let p1 = (lambda * state.p0 - interface_normal_derivative(&right)) / right_den;
    let mut history = state.history.clone();
    history.push((p0, p1));
    Ok(ModalState {
        mode,
        p0,
        p1,
        iteration: state.iteration + 1,
        history,
    })
}

/// The per-mode factor `ρ` the engine applies in one sweep.
pub fn modal_rho<T: Real>(
    spec: &SymbolSpec<T>,
    mode: FourierMode<T>,
    setup: &PhysicalSetup<T>,
) -> Result<Cplx<T>> {
    let one = cplx(T::one(), T::zero());
    let stepped = schwarz_modal_step(
        &ModalState::new(mode, cplx(T::zero(), T::zero()), one),
        spec,
        setup,
    )?;
    Ok(stepped.p0)
}

/// Radius measured from iteration history.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmpiricalRadius<T> {
    pub value: T,
    /// Two-step ratios that entered the geometric mean.
    pub pairs_used: usize,
    /// The traces underflowed before one pair completed; `value` is the formula radius.
    pub formula_fallback: bool,
}

/// Geometric mean of `√(‖P^{n+1}‖/‖P^{n−1}‖)` over `n_pairs` non-overlapping
/// pairs, seeded with `P0 = 1`, `P1 = 0`.
pub fn empirical_radius<T: Real>(
    spec: &SymbolSpec<T>,
    mode: FourierMode<T>,
    setup: &PhysicalSetup<T>,
    n_pairs: usize,
) -> Result<EmpiricalRadius<T>> {
    if n_pairs < 2 {
        return Err(Error::InvalidInput(format!(
            "empirical radius needs at least 2 pairs (got {n_pairs})"
        )));
    }
    let under = T::lit(UNDERFLOW_FLOOR);
    let over = T::lit(OVERFLOW_CEILING);
    let mut state = ModalState::seeded(mode);
    let mut log_sum = T::zero();
    let mut pairs = 0;
    while pairs < n_pairs {
        let start = state.trace_norm();
        state = schwarz_modal_step(&state, spec, setup)?;
        state = schwarz_modal_step(&state, spec, setup)?;
        let end = state.trace_norm();
        if !end.is_finite() || end > over {
            return Err(Error::DivergenceOverflow {
                iterations: state.iteration,
            });
        }
        if end == T::zero() {
            return Ok(EmpiricalRadius {
                value: T::zero(),
                pairs_used: pairs,
                formula_fallback: false,
            });
        }
        if end < under {
            break;
        }
        log_sum += (end / start).ln() / T::lit(2.0);
        pairs += 1;
    }
    if pairs == 0 {
        let value = modal_rho(spec, mode, setup)?.norm();
        return Ok(EmpiricalRadius {
            value,
            pairs_used: 0,
            formula_fallback: true,
        });
    }
    Ok(EmpiricalRadius {
        value: (log_sum / T::from_usize(pairs)).exp(),
        pairs_used: pairs,
        formula_fallback: false,
    })
}

/// Per-mode factors with the pole convention: resonant modes map to `−1`.
fn rhos<T: Real>(
    spec: &SymbolSpec<T>,
    modes: &[FourierMode<T>],
    setup: &PhysicalSetup<T>,
) -> Result<Vec<Cplx<T>>> {
    modes
        .iter()
        .map(|&m| match modal_rho(spec, m, setup) {
            Err(Error::ResonantMode { .. }) => Ok(cplx(-T::one(), T::zero())),
            other => other,
        })
        .collect()
}

/// The modal fixed-point operator `A` on `[P0 of every mode, P1 of every mode]`.
#[derive(Debug, Clone)]
pub struct ModalOperator<T> {
    pub modes: Vec<FourierMode<T>>,
    pub rhos: Vec<Cplx<T>>,
}

impl<T: Real> ModalOperator<T> {
    pub fn new(
        spec: &SymbolSpec<T>,
        modes: &[FourierMode<T>],
        setup: &PhysicalSetup<T>,
    ) -> Result<Self> {
        if modes.is_empty() {
            return Err(Error::InvalidInput(
                "modal operator needs at least one mode".into(),
            ));
        }
        Ok(Self {
            modes: modes.to_vec(),
            rhos: rhos(spec, modes, setup)?,
        })
    }
}

impl<T: Real> LinearOperator<T> for ModalOperator<T> {
    fn dim(&self) -> usize {
        2 * self.modes.len()
    }

    fn apply(&self, x: &[Cplx<T>]) -> Result<Vec<Cplx<T>>> {
        let n = self.modes.len();
        if x.len() != 2 * n {
            return Err(Error::InvalidInput(format!(
                "expected {} entries, got {}",
                2 * n,
                x.len()
            )));
        }
        let mut out = Vec::with_capacity(2 * n);
        out.extend((0..n).map(|i| self.rhos[i] * x[n + i]));
        out.extend((0..n).map(|i| self.rhos[i] * x[i]));
        Ok(out)
    }
}

/// Eigenvalues of `I − A` for the modal operator: `1 ∓ ρ(s_m)` per mode.
pub fn modal_iteration_spectrum<T: Real>(
    spec: &SymbolSpec<T>,
    modes: &[FourierMode<T>],
    setup: &PhysicalSetup<T>,
) -> Result<SpectrumReport<T>> {
    let op = ModalOperator::new(spec, modes, setup)?;
    let one = cplx(T::one(), T::zero());
    let mut values = Vec::with_capacity(2 * modes.len());
    let mut labels = Vec::with_capacity(2 * modes.len());
    for (mode, rho) in op.modes.iter().zip(&op.rhos) {
        values.push(one - rho);
        values.push(one + rho);
        labels.push(mode.m);
        labels.push(mode.m);
    }
    Ok(SpectrumReport::from_eigenvalues(values, Some(labels)))
}

#[derive(Serialize)]
struct SpectrumRecord {
    m: usize,
    s: f64,
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct HistoryRecord {
    m: usize,
    s: f64,
    iteration: usize,
    side: usize,
    re: f64,
    im: f64,
}

/// JSON array of `{m, s, re, im}` records, one per labeled eigenvalue.
pub fn spectrum_json<T: Real>(report: &SpectrumReport<T>, setup: &PhysicalSetup<T>) -> String {
    let records: Vec<SpectrumRecord> = report
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(i, mu)| {
            let m = report.mode_labels.as_ref().map_or(0, |l| l[i]);
            SpectrumRecord {
                m,
                s: setup.s_of(m).to_f64_lossy(),
                re: mu.re.to_f64_lossy(),
                im: mu.im.to_f64_lossy(),
            }
        })
        .collect();
    serde_json::to_string_pretty(&records).expect("plain records serialize")
}

/// JSON array of `{m, s, iteration, side, re, im}` records.
pub fn history_json<T: Real>(state: &ModalState<T>) -> String {
    let mut records = Vec::with_capacity(2 * state.history.len());
    for (n, (p0, p1)) in state.history.iter().enumerate() {
        for (side, p) in [(0, p0), (1, p1)] {
            records.push(HistoryRecord {
                m: state.mode.m,
                s: state.mode.s.to_f64_lossy(),
                iteration: n,
                side,
                re: p.re.to_f64_lossy(),
                im: p.im.to_f64_lossy(),
            });
        }
    }
    serde_json::to_string_pretty(&records).expect("plain records serialize")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::{oo2_default_grid, optimize_oo2, rho_close};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn setup() -> PhysicalSetup<f64> {
        PhysicalSetup::reference()
    }

    fn one() -> Cplx<f64> {
        cplx(1.0, 0.0)
    }

    #[test]
    fn zero_data_gives_zero_solution() {
        let s = setup();
        for m in [1, 9, 10, 30] {
            let sol = solve_subdomain(cplx(0.0, 0.0), s.mode(m), Side::Left, &s).unwrap();
            assert_eq!(sol.a, cplx(0.0, 0.0));
            assert_eq!(sol.b, cplx(0.0, 0.0));
            assert_eq!(interface_normal_derivative(&sol), cplx(0.0, 0.0));
        }
    }

    #[test]
    fn wall_condition_and_interface_value_hold() {
        let s = setup();
        for m in 1..=30 {
            for side in [Side::Left, Side::Right] {
                let sol = solve_subdomain(one(), s.mode(m), side, &s).unwrap();
                assert!(sol.wall_residual() < 1e-12, "m={m} {side:?}");
                let via_constants = sol.a + sol.b;
                assert!((via_constants - one()).norm() < 1e-12);
                assert!((sol.evaluate(0.0) - one()).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn cut_off_solution_is_affine() {
        let s = PhysicalSetup::new(std::f64::consts::PI / 4.75 * 3.0, 9.5, 4.75).unwrap();
        let mode = FourierMode::at(s.k, s.k);
        let left = solve_subdomain(one(), mode, Side::Left, &s).unwrap();
        assert!(left.is_affine());
        assert!((left.linear_slope - cplx(2.0 / 9.5, 0.0)).norm() < 1e-15);
        assert_eq!(left.linear_offset, one());
        assert!(left.evaluate(-4.75).norm() < 1e-15);
        let right = solve_subdomain(one(), mode, Side::Right, &s).unwrap();
        assert!((interface_normal_derivative(&right) - cplx(-2.0 / 9.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn evanescent_derivative_is_coth_form() {
        let s = setup();
        let mode = s.mode(12);
        let a = (mode.s * mode.s - s.k * s.k).sqrt();
        let want = a / (a * s.ell / 2.0).tanh();
        let got =
            interface_normal_derivative(&solve_subdomain(one(), mode, Side::Left, &s).unwrap());
        assert!((got - cplx(want, 0.0)).norm() < 1e-12 * want);
        assert!(got.im == 0.0 && got.re > 0.0);
    }

    #[test]
    fn derivative_matches_centered_difference() {
        let s = setup();
        let step = 1e-4 * s.ell;
        for m in 1..=20 {
            for side in [Side::Left, Side::Right] {
                let sol = solve_subdomain(cplx(0.3, -1.2), s.mode(m), side, &s).unwrap();
                let f = |x: f64| sol.evaluate(x);
                let fd = (f(-2.0 * step) - f(-step) * 8.0 + f(step) * 8.0 - f(2.0 * step))
                    / (12.0 * step);
                let d = interface_normal_derivative(&sol);
                assert!(
                    (fd - d).norm() < 1e-6 * d.norm(),
                    "m={m} {side:?}: {fd} vs {d}"
                );
            }
        }
    }

    #[test]
    fn solution_satisfies_the_ode() {
        let s = setup();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let h = 1e-3;
        for m in [1, 5, 9, 10, 14] {
            let mode = s.mode(m);
            let c = s.k * s.k - mode.s * mode.s;
            for side in [Side::Left, Side::Right] {
                let sol = solve_subdomain(cplx(0.7, 0.2), mode, side, &s).unwrap();
                let scale = (0..=20)
                    .map(|i| sol.evaluate(sol.wall() * i as f64 / 20.0).norm())
                    .fold(0.0, f64::max);
                for _ in 0..10 {
                    let x = sol.wall() * rng.gen_range(0.05..0.95);
                    let f = |t: f64| sol.evaluate(t);
                    let d2 = (-f(x + 2.0 * h) + f(x + h) * 16.0 - f(x) * 30.0 + f(x - h) * 16.0
                        - f(x - 2.0 * h))
                        / (12.0 * h * h);
                    let res = (d2 + f(x) * c).norm();
                    assert!(res < 1e-6 * c.abs() * scale, "m={m}: {res}");
                }
            }
        }
    }

    #[test]
    fn resonant_half_cavity_mode_is_rejected() {
        // β·ℓ/2 = π with s = 0.5 and ℓ = 2
        let beta: f64 = std::f64::consts::PI;
        let sm: f64 = std::f64::consts::PI / 4.0;
        let k = (beta * beta + sm * sm).sqrt();
        let s = PhysicalSetup::new(k, 2.0, 4.0).unwrap();
        let err = solve_subdomain(one(), s.mode(1), Side::Left, &s).unwrap_err();
        assert_eq!(err, Error::ResonantMode { m: 1 });
    }

    #[test]
    fn opt_close_annihilates_in_one_step() {
        let s = setup();
        for m in [1, 9, 10, 20] {
            let st = schwarz_modal_step(
                &ModalState::new(s.mode(m), one(), one()),
                &SymbolSpec::OptClose,
                &s,
            )
            .unwrap();
            assert_eq!(st.p0, cplx(0.0, 0.0));
            assert_eq!(st.p1, cplx(0.0, 0.0));
            let r = empirical_radius(&SymbolSpec::OptClose, s.mode(m), &s, 3).unwrap();
            assert_eq!(r.value, 0.0);
        }
    }

    #[test]
    fn oo0_preserves_modulus() {
        let s = setup();
        for m in 1..=50 {
            let st = ModalState::new(s.mode(m), one(), cplx(0.0, 1.0));
            let next = schwarz_modal_step(&st, &SymbolSpec::Oo0, &s).unwrap();
            assert!((next.p0.norm() - 1.0).abs() < 1e-12);
            assert!((next.p1.norm() - 1.0).abs() < 1e-12);
            let r = empirical_radius(&SymbolSpec::Oo0, s.mode(m), &s, 4).unwrap();
            assert!((r.value - 1.0).abs() < 1e-12);
            assert_eq!(next.history.len(), next.iteration + 1);
        }
    }

    #[test]
    fn square_root_symbol_decays_like_exponential() {
        // ℓ√(s² − k²) = 2
        let s = setup();
        let sv = (s.k * s.k + (2.0 / s.ell).powi(2)).sqrt();
        let r = empirical_radius(&SymbolSpec::OptOpen, FourierMode::at(sv, s.k), &s, 4).unwrap();
        assert!((r.value - (-2.0f64).exp()).abs() < 1e-9);
        assert!(!r.formula_fallback);
    }

    #[test]
    fn deep_evanescent_mode_uses_completed_pairs_or_fallback() {
        let s = setup();
        let r = empirical_radius(&SymbolSpec::OptOpen, s.mode(60), &s, 5).unwrap();
        let want = rho_close(&SymbolSpec::OptOpen, s.s_of(60), &s)
            .unwrap()
            .norm();
        assert!((r.value - want).abs() <= 1e-9 * want.max(1e-300));
        assert!(r.pairs_used < 5);
    }

    #[test]
    fn divergent_radius_overflows() {
        let s = setup();
        // a negative real symbol against a positive cavity symbol amplifies
        let spec = SymbolSpec::Oo2 {
            a: cplx(-5.0, 0.0),
            b: cplx(0.0, 0.0),
        };
        let m = (1..=30)
            .find(|&m| rho_close(&spec, s.s_of(m), &s).unwrap().norm() > 1.2)
            .unwrap();
        let err = empirical_radius(&spec, s.mode(m), &s, 2000).unwrap_err();
        assert!(matches!(err, Error::DivergenceOverflow { .. }));
    }

    #[test]
    fn oracle_agrees_with_radius_formula() {
        let s = setup();
        let dy = s.lambda_w / 16.0;
        let oo2 = optimize_oo2(&s, &oo2_default_grid(&s, dy), 0.05 * s.k)
            .unwrap()
            .spec();
        let specs = [
            SymbolSpec::Oo0,
            SymbolSpec::emda_default(),
            oo2,
            SymbolSpec::pade_default(),
            SymbolSpec::OptOpen,
        ];
        for spec in &specs {
            for m in 1..=25 {
                let formula = rho_close(spec, s.s_of(m), &s).unwrap().norm();
                let n_pairs = if formula > 1.0 { 3 } else { 6 };
                let got = empirical_radius(spec, s.mode(m), &s, n_pairs)
                    .unwrap()
                    .value;
                assert!(
                    (got - formula).abs() < 1e-9,
                    "{} m={m}: {got} vs {formula}",
                    spec.label()
                );
            }
        }
    }

    #[test]
    fn spectrum_pairs_sum_to_two() {
        let s = setup();
        let rep = modal_iteration_spectrum(&SymbolSpec::emda_default(), &s.modes(20), &s).unwrap();
        assert_eq!(rep.dim, 40);
        for pair in rep.eigenvalues.chunks(2) {
            assert_eq!(pair[0] + pair[1], cplx(2.0, 0.0));
        }
        let opt = modal_iteration_spectrum(&SymbolSpec::OptClose, &s.modes(20), &s).unwrap();
        assert!(opt.eigenvalues.iter().all(|&mu| mu == one()));
    }

    #[test]
    fn opt_open_has_two_unit_circle_eigenvalues_per_propagating_mode() {
        let s = setup();
        let rep = modal_iteration_spectrum(&SymbolSpec::OptOpen, &s.modes(30), &s).unwrap();
        assert_eq!(rep.classify(1e-8).on, 2 * s.propagating_count());
    }

    #[test]
    fn operator_layout_swaps_and_scales() {
        let s = setup();
        let op = ModalOperator::new(&SymbolSpec::emda_default(), &s.modes(2), &s).unwrap();
        let out = op
            .apply(&[one(), cplx(2.0, 0.0), cplx(3.0, 0.0), cplx(4.0, 0.0)])
            .unwrap();
        assert_eq!(out[0], op.rhos[0] * 3.0);
        assert_eq!(out[1], op.rhos[1] * 4.0);
        assert_eq!(out[2], op.rhos[0] * 1.0);
        assert_eq!(out[3], op.rhos[1] * 2.0);
    }

    #[test]
    fn json_exports_parse() {
        let s = setup();
        let rep = modal_iteration_spectrum(&SymbolSpec::Oo0, &s.modes(3), &s).unwrap();
        let v: serde_json::Value = serde_json::from_str(&spectrum_json(&rep, &s)).unwrap();
        assert_eq!(v.as_array().unwrap().len(), 6);
        assert_eq!(v[2]["m"], 2);
        let mut st = ModalState::seeded(s.mode(1));
        st = schwarz_modal_step(&st, &SymbolSpec::Oo0, &s).unwrap();
        let h: serde_json::Value = serde_json::from_str(&history_json(&st)).unwrap();
        assert_eq!(h.as_array().unwrap().len(), 4);
    }

    proptest! {
        #[test]
        fn two_step_identity(s_over_k in 0.0f64..3.0, re0 in -1.0f64..1.0, im0 in -1.0f64..1.0, re1 in -1.0f64..1.0) {
            let setup = setup();
            let sv = s_over_k * setup.k;
            let mode = FourierMode::at(sv, setup.k);
            for spec in [SymbolSpec::Oo0, SymbolSpec::emda_default(), SymbolSpec::pade_default(), SymbolSpec::OptOpen] {
                let st0 = ModalState::new(mode, cplx(re0, im0), cplx(re1, 0.5));
                let Ok(st1) = schwarz_modal_step(&st0, &spec, &setup) else { continue };
                let st2 = schwarz_modal_step(&st1, &spec, &setup).unwrap();
                let rho = modal_rho(&spec, mode, &setup).unwrap();
                let scale = st0.trace_norm() * rho.norm_sqr().max(1.0);
                prop_assert!((st2.p0 - rho * rho * st0.p0).norm() <= 1e-12 * scale);
                prop_assert!((st2.p1 - rho * rho * st0.p1).norm() <= 1e-12 * scale);
            }
        }

        #[test]
        fn engine_rho_matches_symbol_rho(s_over_k in 0.05f64..3.0) {
            let setup = setup();
            let sv = s_over_k * setup.k;
            let mode = FourierMode::at(sv, setup.k);
            for spec in [SymbolSpec::Oo0, SymbolSpec::emda_default(), SymbolSpec::pade_default()] {
                let formula = rho_close(&spec, sv, &setup).unwrap();
                let engine = modal_rho(&spec, mode, &setup).unwrap();
                prop_assert!((formula - engine).norm() < 1e-8 * (1.0 + formula.norm()));
            }
        }
    }
}
