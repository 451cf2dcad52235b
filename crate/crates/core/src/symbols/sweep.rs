use std::fmt::Write as _;

use super::{lambda_opt_close, lambda_opt_open, lambda_symbol, rho_close, rho_open, SymbolSpec};
use crate::scalar::{Cplx, Real};
use crate::setup::{PhysicalSetup, Regime};

pub const SWEEP_HEADER: &str = "s,re_lambda,im_lambda,abs_rho_close,abs_rho_open,regime";

/// One sample of a symbol sweep. Undefined quantities are NaN.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow<T> {
    pub s: T,
    pub lambda: Cplx<T>,
    pub abs_rho_close: T,
    pub abs_rho_open: T,
    pub regime: Regime,
}

pub fn sweep_rows<T: Real>(
    spec: &SymbolSpec<T>,
    setup: &PhysicalSetup<T>,
    grid: &[T],
) -> Vec<SweepRow<T>> {
    let nan = T::nan();
    grid.iter()
        .map(|&s| SweepRow {
            s,
            lambda: lambda_symbol(spec, s, setup).unwrap_or(Cplx::new(nan, nan)),
            abs_rho_close: rho_close(spec, s, setup).map(|r| r.norm()).unwrap_or(nan),
            abs_rho_open: rho_open(spec, s, setup).map(|r| r.norm()).unwrap_or(nan),
            regime: setup.regime(s),
        })
        .collect()
}

/// Renders rows with [`SWEEP_HEADER`]. Floats use the shortest round-trip
/// decimal representation.
pub fn rho_sweep_csv<T: Real>(rows: &[SweepRow<T>]) -> String {
    let mut out = String::with_capacity(64 * (rows.len() + 1));
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.s,
            r.lambda.re,
            r.lambda.im,
            r.abs_rho_close,
            r.abs_rho_open,
            r.regime.as_str()
        );
    }
    out
}

/// Both optimal symbols on `grid`; NaN at cotangent poles.
pub fn lambda_sweep_csv<T: Real>(setup: &PhysicalSetup<T>, grid: &[T]) -> String {
    let mut out =
        String::from("k,s,re_lambda_open,im_lambda_open,re_lambda_close,im_lambda_close,regime\n");
    for &s in grid {
        let open = lambda_opt_open(s, setup.k);
        let close = lambda_opt_close(s, setup).unwrap_or(T::nan());
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            setup.k,
            s,
            open.re,
            open.im,
            close,
            T::zero(),
            setup.regime(s).as_str()
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_header_and_one_line_per_sample() {
        let setup = PhysicalSetup::<f64>::reference();
        let grid = [0.0, setup.k, 2.0 * setup.k];
        let csv = rho_sweep_csv(&sweep_rows(&SymbolSpec::Oo0, &setup, &grid));
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], SWEEP_HEADER);
        assert_eq!(lines.len(), 4);
        assert!(lines[2].ends_with("cut-on"));
    }

    #[test]
    fn floats_round_trip() {
        let setup = PhysicalSetup::<f64>::reference();
        let rows = sweep_rows(
            &SymbolSpec::pade_default(),
            &setup,
            &[0.123456789012345678, 7.7],
        );
        let csv = rho_sweep_csv(&rows);
        let line = csv.lines().nth(1).unwrap();
        let fields: Vec<f64> = line
            .split(',')
            .take(5)
            .map(|f| f.parse().unwrap())
            .collect();
        assert_eq!(fields[0], rows[0].s);
        assert_eq!(fields[1], rows[0].lambda.re);
        assert_eq!(fields[2], rows[0].lambda.im);
        assert_eq!(fields[3], rows[0].abs_rho_close);
    }
}
