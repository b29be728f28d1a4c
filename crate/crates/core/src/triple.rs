//! The symmetric triple-well family built from the `sech` seed with weights
//! `(1−λ, λ/2, λ/2)` at shifts `(0, a, −a)`.
//!
//! Everything here is closed form; the generic path in
//! [`crate::construction`] and the grid oracle are used only by tests and the
//! verification suites.

use std::f64::consts::FRAC_1_SQRT_2;

use thiserror::Error;

use crate::construction::{ConstructionError, SolvableSeed, WellSpec};
use crate::oracle::{FdSolver, GridSpec, OracleError, Parity, SolverOptions, DEFAULT_MARGIN};
use crate::special::{one_minus_x_csch_x, x_csch_x};

/// Ground energy `E₀` shared by every member of the family.
pub const GROUND_ENERGY: f64 = -1.0;

/// Bounds are only evaluated for `λ ∈ [GUARD, 1 − GUARD]`.
pub const LAMBDA_GUARD: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TripleError {
    #[error("lambda must lie in (0, 1), got {0}")]
    Lambda(f64),
    #[error("a must be positive and finite, got {0}")]
    Shift(f64),
    #[error("lambda {lambda} is outside the guard band [{lo}, {hi}] used for bounds")]
    GuardBand { lambda: f64, lo: f64, hi: f64 },
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Parameters `(λ, a)` of one triple well.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripleParams {
    lambda: f64,
    a: f64,
}

impl TripleParams {
    pub fn new(lambda: f64, a: f64) -> Result<Self, TripleError> {
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(TripleError::Lambda(lambda));
        }
        if !(a > 0.0 && a.is_finite()) {
            return Err(TripleError::Shift(a));
        }
        Ok(Self { lambda, a })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
    pub fn a(&self) -> f64 {
        self.a
    }

    /// `(1−λ, λ/2, λ/2)`
    pub fn coefficients(&self) -> [f64; 3] {
        [1.0 - self.lambda, 0.5 * self.lambda, 0.5 * self.lambda]
    }

    /// `(0, a, −a)`
    pub fn shifts(&self) -> [f64; 3] {
        [0.0, self.a, -self.a]
    }

    /// Equivalent generic specification on the `sech` seed.
    pub fn well_spec(&self) -> Result<WellSpec, TripleError> {
        let mut w = self.coefficients().to_vec();
        // 1−λ + λ/2 + λ/2 can miss 1 by an ulp.
        w[0] = 1.0 - w[1] - w[2];
        Ok(WellSpec::from_parts(
            SolvableSeed::poschl_teller(),
            w,
            self.shifts().to_vec(),
        )?)
    }

    fn guarded(&self) -> Result<(), TripleError> {
        let (lo, hi) = (LAMBDA_GUARD, 1.0 - LAMBDA_GUARD);
        if self.lambda < lo || self.lambda > hi {
            return Err(TripleError::GuardBand {
                lambda: self.lambda,
                lo,
                hi,
            });
        }
        Ok(())
    }

    /// `sech(x + a_n)·e^{m}` for the three wells, `m` the distance to the
    /// nearest centre, so nothing underflows far from the wells.
    fn scaled_sech(&self, x: f64) -> ([f64; 3], f64) {
        let d = [x.abs(), (x + self.a).abs(), (x - self.a).abs()];
        let m = d[0].min(d[1]).min(d[2]);
        let s = d.map(|y| {
            let e = (-2.0 * y).exp();
            2.0 * (m - y).exp() / (1.0 + e)
        });
        (s, m)
    }
}

/// `V_{λ,a}(x) = −2 Σ w_n sech³(x+a_n) / Σ w_n sech(x+a_n)`
pub fn v3(p: &TripleParams, x: f64) -> f64 {
    let c = p.coefficients();
    let (s, m) = p.scaled_sech(x);
    let num: f64 = (0..3).map(|n| c[n] * s[n].powi(3)).sum();
    let den: f64 = (0..3).map(|n| c[n] * s[n]).sum();
    -2.0 * (-2.0 * m).exp() * num / den
}

/// `Ξ(x) = Σ w_n ψ₀(x + a_n)`
pub fn xi3(p: &TripleParams, x: f64) -> f64 {
    let c = p.coefficients();
    let (s, m) = p.scaled_sech(x);
    FRAC_1_SQRT_2 * (-m).exp() * (0..3).map(|n| c[n] * s[n]).sum::<f64>()
}

/// `𝒪_{+,−} = 2a·csch 2a`
pub fn overlap_pm(a: f64) -> f64 {
    x_csch_x(2.0 * a)
}

/// `𝒪_{0,+} = a·csch a`
pub fn overlap_0p(a: f64) -> f64 {
    x_csch_x(a)
}

/// `λᵀ O λ = (1−λ)² + 2λ(1−λ)𝒪_{0,+} + (λ²/2)(1 + 𝒪_{+,−})`
fn gram_ground(p: &TripleParams) -> f64 {
    let l = p.lambda;
    let m = 1.0 - l;
    m * m + 2.0 * l * m * overlap_0p(p.a) + 0.5 * l * l * (1.0 + overlap_pm(p.a))
}

/// Normalisation constant `α_{λ,a}`.
pub fn alpha3(p: &TripleParams) -> f64 {
    gram_ground(p).powf(-0.5)
}

/// `lim_{a→∞} α_{λ,a} = ((1−λ)² + λ²/2)^{-1/2}`
pub fn alpha3_limit(lambda: f64) -> f64 {
    let m = 1.0 - lambda;
    (m * m + 0.5 * lambda * lambda).powf(-0.5)
}

/// Exact ground state `Ψ₀ = α Ξ`.
pub fn psi3(p: &TripleParams, x: f64) -> f64 {
    alpha3(p) * xi3(p, x)
}

/// Ground density `ρ = Ψ₀²`.
pub fn rho3(p: &TripleParams, x: f64) -> f64 {
    psi3(p, x).powi(2)
}

fn seed_density(x: f64) -> f64 {
    0.5 * crate::special::sech(x).powi(2)
}

/// Localised part `α²[(1−λ)²ρ₀(x) + (λ²/4)(ρ₀(x+a) + ρ₀(x−a))]`.
pub fn localized_density3(p: &TripleParams, x: f64) -> f64 {
    let l = p.lambda;
    let m = 1.0 - l;
    let a2 = alpha3(p).powi(2);
    a2 * (m * m * seed_density(x) + 0.25 * l * l * (seed_density(x + p.a) + seed_density(x - p.a)))
}

/// Overlap term `ι(x) = ρ(x) − localized_density3(x)`:
/// `α²[(1−λ)λ sech x (sech(x+a) + sech(x−a))/2 + (λ²/4) sech(x+a) sech(x−a)]`.
pub fn iota3(p: &TripleParams, x: f64) -> f64 {
    use crate::special::sech;
    let l = p.lambda;
    let (sp, sm) = (sech(x + p.a), sech(x - p.a));
    alpha3(p).powi(2) * ((1.0 - l) * l * sech(x) * (sp + sm) * 0.5 + 0.25 * l * l * sp * sm)
}

/// Incoherent limit `[(1−λ)²ρ₀(x) + (λ²/4)(ρ₀(x+a) + ρ₀(x−a))] / ((1−λ)² + λ²/2)`.
pub fn classical_density3(p: &TripleParams, x: f64) -> f64 {
    let l = p.lambda;
    let m = 1.0 - l;
    let local = m * m * seed_density(x) + 0.25 * l * l * (seed_density(x + p.a) + seed_density(x - p.a));
    local * alpha3_limit(l).powi(2)
}

/// Upper bound on `E₁` from the odd trial `Φ₁`.
pub fn bound_e1(p: &TripleParams) -> Result<f64, TripleError> {
    p.guarded()?;
    let l = p.lambda;
    let opm = overlap_pm(p.a);
    Ok(GROUND_ENERGY + 4.0 * ((1.0 - l) / l * overlap_0p(p.a) + opm) / one_minus_x_csch_x(2.0 * p.a))
}

/// Gram norm squared `D` of the unnormalised `Φ₂`.
fn phi2_norm2(p: &TripleParams) -> f64 {
    let l = p.lambda;
    let m = 1.0 - l;
    m * m + 0.5 * l * l + 0.5 * l * l * overlap_pm(p.a) - 2.0 * l * m * overlap_0p(p.a)
}

/// `f_a(λ) = 6λ² a csch 2a / ((1−λ)² + λ²/2 + λ² a csch 2a − 2λ(1−λ) a csch a)`
pub fn gap_bound_f(p: &TripleParams) -> Result<f64, TripleError> {
    p.guarded()?;
    Ok(3.0 * p.lambda.powi(2) * overlap_pm(p.a) / phi2_norm2(p))
}

/// Location `λ* = 1/(1 + a csch a)` of the maximum of `f_a` over `(0, 1)`.
///
/// `f_a` increases on `(0, λ*)` and decreases on `(λ*, 1)`.
pub fn gap_bound_argmax(a: f64) -> f64 {
    1.0 / (1.0 + overlap_0p(a))
}

/// `sup_λ f_a(λ) = f_a(λ*) = 6𝒪_{+,−} / (1 + 𝒪_{+,−} − 2𝒪_{0,+}²)`.
pub fn gap_bound_sup(a: f64) -> f64 {
    let o = overlap_pm(a);
    let p = overlap_0p(a);
    6.0 * o / (1.0 + o - 2.0 * p * p)
}

/// `lim_{λ→1} f_a(λ) = 6𝒪_{+,−} / (1 + 𝒪_{+,−})`.
pub fn gap_bound_at_one(a: f64) -> f64 {
    let o = overlap_pm(a);
    6.0 * o / (1.0 + o)
}

/// Smallest `a` with `sup_λ f_a(λ) ≤ eps`, located by bisection.
pub fn gap_threshold(eps: f64) -> f64 {
    let (mut lo, mut hi) = (1e-3, 1.0);
    while gap_bound_sup(hi) > eps {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if gap_bound_sup(mid) > eps {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-12 * hi {
            break;
        }
    }
    hi
}

/// Coefficients of `Φ₁` over shifts `(0, a, −a)`.
pub fn phi1_coefficients(p: &TripleParams) -> [f64; 3] {
    let n = (2.0 * one_minus_x_csch_x(2.0 * p.a)).sqrt();
    [0.0, 1.0 / n, -1.0 / n]
}

/// Coefficients `(β₀, β₊, β₋)` of `Φ₂` over shifts `(0, a, −a)`.
pub fn phi2_coefficients(p: &TripleParams) -> [f64; 3] {
    let n = phi2_norm2(p).sqrt();
    let b = -0.5 * p.lambda / n;
    [(1.0 - p.lambda) / n, b, b]
}

fn combine(p: &TripleParams, beta: [f64; 3], x: f64) -> f64 {
    use crate::special::sech;
    FRAC_1_SQRT_2 * (beta[0] * sech(x) + beta[1] * sech(x + p.a) + beta[2] * sech(x - p.a))
}

/// Odd trial function `(ψ₀(x+a) − ψ₀(x−a)) / √(2(1 − 𝒪_{+,−}))`.
pub fn trial_phi1(p: &TripleParams, x: f64) -> f64 {
    combine(p, phi1_coefficients(p), x)
}

/// Even, two-node trial function orthogonal-in-spirit to `Ψ₀`.
pub fn trial_phi2(p: &TripleParams, x: f64) -> f64 {
    combine(p, phi2_coefficients(p), x)
}

/// Depth quotient `Q = V(0)/V(a)`.
pub fn q_ratio(p: &TripleParams) -> f64 {
    v3(p, 0.0) / v3(p, p.a)
}

/// Density-peak quotient `C = ρ(0)/ρ(a)`.
pub fn c_ratio(p: &TripleParams) -> f64 {
    (xi3(p, 0.0) / xi3(p, p.a)).powi(2)
}

/// Closed-form bound data for one `(λ, a)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundReport {
    pub e1_upper: f64,
    pub e2_gap_upper: f64,
    pub overlap_pm: f64,
    pub overlap_0p: f64,
    pub alpha: f64,
}

pub fn bounds(p: &TripleParams) -> Result<BoundReport, TripleError> {
    Ok(BoundReport {
        e1_upper: bound_e1(p)?,
        e2_gap_upper: gap_bound_f(p)?,
        overlap_pm: overlap_pm(p.a),
        overlap_0p: overlap_0p(p.a),
        alpha: alpha3(p),
    })
}

/// Lowest three levels from parity-restricted grid solves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripleLevels {
    pub e0: f64,
    pub e1: f64,
    pub e2: f64,
}

impl TripleLevels {
    pub fn gap1(&self) -> f64 {
        self.e1 - self.e0
    }
    pub fn gap2(&self) -> f64 {
        self.e2 - self.e0
    }
}

/// `E₀, E₂` from an even solve and `E₁` from an odd solve on `±(a + 25)`.
pub fn oracle_levels(p: &TripleParams, step: f64) -> Result<TripleLevels, TripleError> {
    let even = GridSpec::symmetric(p.a + DEFAULT_MARGIN, step, Parity::Even)?;
    let odd = even.with_parity(Parity::Odd)?;
    let mut solver = FdSolver::new(SolverOptions::default());
    let v = |x: f64| v3(p, x);
    let se = solver.solve(v, &even, 2)?;
    let so = solver.solve(v, &odd, 1)?;
    Ok(TripleLevels {
        e0: se.energies[0],
        e1: so.energies[0],
        e2: se.energies[1],
    })
}
