//! Hyperbolic helpers used by the closed forms.
//!
//! `csch` and the overlap kernel `x·csch x` both have a removable singularity
//! at the origin and overflow-prone `sinh` for large arguments, so each one
//! switches to a series or an exponential form outside the safe range.

/// Below this magnitude the Laurent/Taylor series is used.
pub const SERIES_CUTOFF: f64 = 1e-4;

/// Above this magnitude `csch` is reported as zero.
pub const CSCH_UNDERFLOW: f64 = 350.0;

/// Hyperbolic secant, evaluated as `2e^{-|x|}/(1+e^{-2|x|})` so it never
/// overflows.
#[inline]
pub fn sech(x: f64) -> f64 {
    let e = (-x.abs()).exp();
    2.0 * e / (1.0 + e * e)
}

/// Hyperbolic cosecant `1/sinh x`.
pub fn csch(x: f64) -> f64 {
    let ax = x.abs();
    if ax > CSCH_UNDERFLOW {
        return 0.0_f64.copysign(x);
    }
    if ax < SERIES_CUTOFF {
        if x == 0.0 {
            return f64::INFINITY.copysign(x);
        }
        // 1/x - x/6 + 7x^3/360
        let x2 = x * x;
        return 1.0 / x - x / 6.0 + 7.0 * x * x2 / 360.0;
    }
    1.0 / x.sinh()
}

/// `x·csch x`, continuous at the origin with value 1.
///
/// This is the overlap of two copies of the `sech x/√2` ground state whose
/// centres are `x` apart.
pub fn x_csch_x(x: f64) -> f64 {
    let ax = x.abs();
    if ax < SERIES_CUTOFF {
        let x2 = ax * ax;
        return 1.0 - x2 / 6.0 + 7.0 * x2 * x2 / 360.0;
    }
    if ax > 20.0 {
        let e = (-ax).exp();
        return 2.0 * ax * e / (1.0 - e * e);
    }
    ax / ax.sinh()
}

/// `1 − x·csch x`, accurate for small `x` where the difference cancels.
pub fn one_minus_x_csch_x(x: f64) -> f64 {
    let ax = x.abs();
    if ax < 1e-2 {
        let x2 = ax * ax;
        // x²/6 − 7x⁴/360 + 31x⁶/15120
        return x2 / 6.0 - 7.0 * x2 * x2 / 360.0 + 31.0 * x2 * x2 * x2 / 15120.0;
    }
    1.0 - x_csch_x(ax)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sech_matches_cosh_in_safe_range() {
        for i in -200..=200 {
            let x = i as f64 * 0.1;
            let direct = 1.0 / x.cosh();
            assert!((sech(x) - direct).abs() <= 1e-15 * direct.max(1e-300) + 1e-300);
        }
        assert_eq!(sech(1e6), 0.0);
    }

    #[test]
    fn csch_branches_are_continuous() {
        for &x in &[SERIES_CUTOFF, CSCH_UNDERFLOW] {
            let below = csch(x * (1.0 - 1e-12));
            let above = csch(x * (1.0 + 1e-12));
            let reference = 1.0 / x.sinh();
            assert!((below - reference).abs() <= 1e-9 * reference.abs() || x == CSCH_UNDERFLOW);
            if x == CSCH_UNDERFLOW {
                assert_eq!(above, 0.0);
            } else {
                assert!((above - reference).abs() <= 1e-9 * reference.abs());
            }
        }
        assert_eq!(csch(400.0), 0.0);
        assert!(csch(-400.0).is_sign_negative());
        assert!(csch(-0.5) < 0.0);
    }

    #[test]
    fn overlap_kernel_limits() {
        assert_eq!(x_csch_x(0.0), 1.0);
        assert!((x_csch_x(1e-5) - 1.0).abs() < 1e-10);
        assert!((x_csch_x(4.0) - 4.0 / 4.0_f64.sinh()).abs() < 1e-16);
        assert!((x_csch_x(10.0) - 10.0 / 10.0_f64.sinh()).abs() < 1e-18);
        let big = x_csch_x(30.0);
        assert!((big - 30.0 / 30.0_f64.sinh()).abs() <= 1e-15 * big);
        assert!(x_csch_x(500.0) > 0.0);
        assert_eq!(x_csch_x(-3.0), x_csch_x(3.0));
    }

    #[test]
    fn one_minus_kernel_small_argument() {
        let x: f64 = 5e-3;
        let exact = x * x / 6.0 - 7.0 * x.powi(4) / 360.0;
        assert!((one_minus_x_csch_x(x) - exact).abs() < 1e-16);
        let y = 0.02;
        assert!((one_minus_x_csch_x(y) - (1.0 - y / f64::sinh(y))).abs() < 1e-14);
    }
}
