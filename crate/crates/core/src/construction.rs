//! Multi-well potentials with a known ground state.
//!
//! Given a seed Hamiltonian `−d²/dx² + V` with a positive, normalised ground
//! state `ψ₀` at energy `E₀`, positive weights `λ_n` summing to one and
//! shifts `a_n`, the function `Ξ(x) = Σ λ_n ψ₀(x + a_n)` is node-free and is
//! the exact ground state, with the same energy `E₀`, of
//!
//! ```text
//! V_{Λ,A}(x) = Σ λ_n V(x + a_n) ψ₀(x + a_n) / Ξ(x).
//! ```

use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::oracle::{QuadError, Quadrature};
use crate::special::{sech, x_csch_x};

/// Shared real function handle.
pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Allowed deviation of `Σλ_n` from one.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConstructionError {
    #[error("weights must be finite and strictly positive (index {index}: {value})")]
    NonPositiveWeight { index: usize, value: f64 },
    #[error("weights must sum to 1, got {sum} (tolerance {WEIGHT_SUM_TOLERANCE:e})")]
    WeightSum { sum: f64 },
    #[error("shift {index} is not finite: {value}")]
    NonFiniteShift { index: usize, value: f64 },
    #[error("need at least one well")]
    Empty,
    #[error("{weights} weights but {shifts} shifts")]
    LengthMismatch { weights: usize, shifts: usize },
    #[error("invalid seed: {0}")]
    InvalidSeed(String),
    #[error("overlap ({k}, {l}) did not converge: {source}")]
    Overlap {
        k: usize,
        l: usize,
        #[source]
        source: QuadError,
    },
    #[error(transparent)]
    Quadrature(#[from] QuadError),
}

/// Exactly solvable single-well seed: potential, positive normalised ground
/// state, its energy and bounds on the potential.
#[derive(Clone)]
pub struct SolvableSeed {
    name: String,
    potential: RealFn,
    ground: RealFn,
    ground_energy: f64,
    lower_bound: f64,
    upper_bound: f64,
    half_width: f64,
    closed_overlap: Option<fn(f64) -> f64>,
}

impl fmt::Debug for SolvableSeed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SolvableSeed")
            .field("name", &self.name)
            .field("ground_energy", &self.ground_energy)
            .field("lower_bound", &self.lower_bound)
            .field("upper_bound", &self.upper_bound)
            .field("half_width", &self.half_width)
            .field("closed_overlap", &self.closed_overlap.is_some())
            .finish()
    }
}

fn sech_overlap(d: f64) -> f64 {
    x_csch_x(d)
}

impl SolvableSeed {
    /// Build a seed from callables. `half_width` is the distance beyond which
    /// `ψ₀` is negligible; integrals over a shifted family use
    /// `[−(max|a| + half_width), max|a| + half_width]`.
    pub fn new(
        name: impl Into<String>,
        potential: RealFn,
        ground: RealFn,
        ground_energy: f64,
        lower_bound: f64,
        upper_bound: f64,
        half_width: f64,
    ) -> Result<Self, ConstructionError> {
        if !(ground_energy.is_finite() && lower_bound.is_finite() && upper_bound.is_finite()) {
            return Err(ConstructionError::InvalidSeed(
                "energy and potential bounds must be finite".into(),
            ));
        }
        if lower_bound > upper_bound {
            return Err(ConstructionError::InvalidSeed(format!(
                "lower bound {lower_bound} exceeds upper bound {upper_bound}"
            )));
        }
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(ConstructionError::InvalidSeed(format!(
                "half width must be positive, got {half_width}"
            )));
        }
        Ok(Self {
            name: name.into(),
            potential,
            ground,
            ground_energy,
            lower_bound,
            upper_bound,
            half_width,
            closed_overlap: None,
        })
    }

    /// `V = −2 sech² x`, `ψ₀ = sech x / √2`, `E₀ = −1`, `−2 ≤ V < 0`.
    pub fn poschl_teller() -> Self {
        Self {
            name: "poschl-teller".into(),
            potential: Arc::new(|x| -2.0 * sech(x).powi(2)),
            ground: Arc::new(|x| sech(x) * std::f64::consts::FRAC_1_SQRT_2),
            ground_energy: -1.0,
            lower_bound: -2.0,
            upper_bound: 0.0,
            half_width: 25.0,
            closed_overlap: Some(sech_overlap),
        }
    }

    /// Same ground state, potential and energy shifted by `c`.
    pub fn with_energy_shift(&self, c: f64) -> Self {
        let v = Arc::clone(&self.potential);
        Self {
            name: format!("{}{:+}", self.name, c),
            potential: Arc::new(move |x| v(x) + c),
            ground: Arc::clone(&self.ground),
            ground_energy: self.ground_energy + c,
            lower_bound: self.lower_bound + c,
            upper_bound: self.upper_bound + c,
            half_width: self.half_width,
            closed_overlap: self.closed_overlap,
        }
    }

    /// Forces overlaps through quadrature even when a closed form exists.
    pub fn without_closed_overlap(mut self) -> Self {
        self.closed_overlap = None;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn v(&self, x: f64) -> f64 {
        (self.potential)(x)
    }
    pub fn psi0(&self, x: f64) -> f64 {
        (self.ground)(x)
    }
    pub fn density(&self, x: f64) -> f64 {
        let p = self.psi0(x);
        p * p
    }
    pub fn e0(&self) -> f64 {
        self.ground_energy
    }
    pub fn v_lower(&self) -> f64 {
        self.lower_bound
    }
    pub fn v_upper(&self) -> f64 {
        self.upper_bound
    }
    pub fn half_width(&self) -> f64 {
        self.half_width
    }
    pub fn potential_fn(&self) -> RealFn {
        Arc::clone(&self.potential)
    }
    pub fn ground_fn(&self) -> RealFn {
        Arc::clone(&self.ground)
    }

    /// Overlap `∫ψ₀(x)ψ₀(x + d)dx`, closed form when available.
    pub fn overlap_at(&self, d: f64, quad: &Quadrature) -> Result<f64, QuadError> {
        if let Some(f) = self.closed_overlap {
            return Ok(f(d));
        }
        let lim = d.abs() + self.half_width;
        Ok(quad
            .integrate(|x| self.psi0(x) * self.psi0(x + d), -lim, lim)?
            .value)
    }

    /// Checks the seed invariants: positivity, normalisation, potential
    /// bounds, and the three-point eigen-residual.
    pub fn validate(&self, quad: &Quadrature) -> Result<SeedDiagnostics, ConstructionError> {
        let w = self.half_width;
        let h = 1e-3;
        let n = (2.0 * w / h).round() as usize;
        let mut min_psi = f64::INFINITY;
        let mut residual = 0.0_f64;
        let mut bound_violation = 0.0_f64;
        for i in 1..n {
            let x = -w + i as f64 * h;
            let p = self.psi0(x);
            min_psi = min_psi.min(p);
            let v = self.v(x);
            bound_violation = bound_violation
                .max(self.lower_bound - v)
                .max(v - self.upper_bound);
            let d2 = (self.psi0(x + h) - 2.0 * p + self.psi0(x - h)) / (h * h);
            residual = residual.max((-d2 + (v - self.ground_energy) * p).abs());
        }
        let norm = quad.integrate(|x| self.density(x), -w, w)?.value;
        let diag = SeedDiagnostics {
            norm,
            min_psi,
            bound_violation: bound_violation.max(0.0),
            residual,
        };
        if min_psi.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
            return Err(ConstructionError::InvalidSeed(format!(
                "ground state not positive (min {min_psi:e})"
            )));
        }
        if (norm - 1.0).abs() > 1e-8 {
            return Err(ConstructionError::InvalidSeed(format!(
                "ground state not normalised (norm {norm})"
            )));
        }
        if diag.bound_violation > 0.0 {
            return Err(ConstructionError::InvalidSeed(format!(
                "potential leaves [{}, {}] by {:e}",
                self.lower_bound, self.upper_bound, diag.bound_violation
            )));
        }
        if residual > 1e-5 {
            return Err(ConstructionError::InvalidSeed(format!(
                "ground pair is not an eigenpair (residual {residual:e})"
            )));
        }
        Ok(diag)
    }
}

/// Measurements made by [`SolvableSeed::validate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeedDiagnostics {
    pub norm: f64,
    pub min_psi: f64,
    pub bound_violation: f64,
    pub residual: f64,
}

/// Positive weights `λ_n` with `Σλ_n = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightTuple(Vec<f64>);

impl WeightTuple {
    pub fn new(lambdas: Vec<f64>) -> Result<Self, ConstructionError> {
        if lambdas.is_empty() {
            return Err(ConstructionError::Empty);
        }
        for (index, &value) in lambdas.iter().enumerate() {
            if !(value.is_finite() && value > 0.0) {
                return Err(ConstructionError::NonPositiveWeight { index, value });
            }
        }
        let sum: f64 = lambdas.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(ConstructionError::WeightSum { sum });
        }
        Ok(Self(lambdas))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
    pub fn len(&self) -> usize {
        self.0.len()
    }
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
    pub fn sum_of_squares(&self) -> f64 {
        self.0.iter().map(|l| l * l).sum()
    }
}

/// Well shifts `a_n`; the well of term `n` sits near `x = −a_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftTuple(Vec<f64>);

impl ShiftTuple {
    pub fn new(shifts: Vec<f64>) -> Result<Self, ConstructionError> {
        if shifts.is_empty() {
            return Err(ConstructionError::Empty);
        }
        for (index, &value) in shifts.iter().enumerate() {
            if !value.is_finite() {
                return Err(ConstructionError::NonFiniteShift { index, value });
            }
        }
        Ok(Self(shifts))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }
    pub fn len(&self) -> usize {
        self.0.len()
    }
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|A| = max_{j,k} |a_j − a_k|`
    pub fn diameter(&self) -> f64 {
        let max = self.0.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = self.0.iter().copied().fold(f64::INFINITY, f64::min);
        max - min
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, a| m.max(a.abs()))
    }
}

/// A seed together with `(Λ, A)`: one synthesised potential.
#[derive(Debug, Clone)]
pub struct WellSpec {
    seed: SolvableSeed,
    weights: WeightTuple,
    shifts: ShiftTuple,
}

impl WellSpec {
    pub fn new(seed: SolvableSeed, weights: WeightTuple, shifts: ShiftTuple) -> Result<Self, ConstructionError> {
        if weights.len() != shifts.len() {
            return Err(ConstructionError::LengthMismatch {
                weights: weights.len(),
                shifts: shifts.len(),
            });
        }
        Ok(Self { seed, weights, shifts })
    }

    /// Convenience constructor from raw vectors.
    pub fn from_parts(seed: SolvableSeed, lambdas: Vec<f64>, shifts: Vec<f64>) -> Result<Self, ConstructionError> {
        Self::new(seed, WeightTuple::new(lambdas)?, ShiftTuple::new(shifts)?)
    }

    pub fn seed(&self) -> &SolvableSeed {
        &self.seed
    }
    pub fn weights(&self) -> &WeightTuple {
        &self.weights
    }
    pub fn shifts(&self) -> &ShiftTuple {
        &self.shifts
    }
    pub fn len(&self) -> usize {
        self.weights.len()
    }
    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Same weights, shifts negated: the spatial mirror image.
    pub fn mirrored(&self) -> Self {
        Self {
            seed: self.seed.clone(),
            weights: self.weights.clone(),
            shifts: ShiftTuple(self.shifts.0.iter().map(|a| -a).collect()),
        }
    }

    /// Same seed and weights, shifts multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self, ConstructionError> {
        Ok(Self {
            seed: self.seed.clone(),
            weights: self.weights.clone(),
            shifts: ShiftTuple::new(self.shifts.0.iter().map(|a| a * factor).collect())?,
        })
    }

    /// Half width of the integration domain, `max|a_n| + seed half width`.
    pub fn domain_half_width(&self) -> f64 {
        self.shifts.max_abs() + self.seed.half_width
    }

    fn terms(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.weights
            .as_slice()
            .iter()
            .copied()
            .zip(self.shifts.as_slice().iter().copied())
    }

    /// `Ξ(x) = Σ λ_n ψ₀(x + a_n)`
    pub fn xi(&self, x: f64) -> f64 {
        self.terms().map(|(l, a)| l * self.seed.psi0(x + a)).sum()
    }

    /// `V_{Λ,A}(x)`: `ψ₀`-weighted average of the shifted seed potentials.
    pub fn potential(&self, x: f64) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for (l, a) in self.terms() {
            let w = l * self.seed.psi0(x + a);
            num += w * self.seed.v(x + a);
            den += w;
        }
        if den > 0.0 && den.is_finite() {
            num / den
        } else {
            // Every ψ₀ underflowed: the nearest well dominates.
            let nearest = self
                .shifts
                .as_slice()
                .iter()
                .copied()
                .min_by(|p, q| (x + p).abs().total_cmp(&(x + q).abs()))
                .expect("non-empty");
            self.seed.v(x + nearest)
        }
    }

    /// `min_n V(x+a_n)` and `max_n V(x+a_n)`.
    pub fn potential_envelope(&self, x: f64) -> (f64, f64) {
        self.shifts
            .as_slice()
            .iter()
            .map(|a| self.seed.v(x + a))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
    }

    /// `O_{k,l} = ∫ψ₀(x+a_k)ψ₀(x+a_l)dx` with the default quadrature.
    pub fn overlap_matrix(&self) -> Result<DMatrix<f64>, ConstructionError> {
        self.overlap_matrix_with(&Quadrature::default())
    }

    pub fn overlap_matrix_with(&self, quad: &Quadrature) -> Result<DMatrix<f64>, ConstructionError> {
        let n = self.len();
        let a = self.shifts.as_slice();
        let mut m = DMatrix::identity(n, n);
        for k in 0..n {
            for l in k + 1..n {
                let o = self
                    .seed
                    .overlap_at(a[l] - a[k], quad)
                    .map_err(|source| ConstructionError::Overlap { k, l, source })?;
                m[(k, l)] = o;
                m[(l, k)] = o;
            }
        }
        Ok(m)
    }

    /// Overlap matrix computed by quadrature of the shifted ground states,
    /// including the diagonal, regardless of any closed form.
    pub fn overlap_matrix_quadrature(&self, quad: &Quadrature) -> Result<DMatrix<f64>, ConstructionError> {
        let n = self.len();
        let a = self.shifts.as_slice();
        let lim = self.domain_half_width();
        let mut m = DMatrix::zeros(n, n);
        for k in 0..n {
            for l in k..n {
                let o = quad
                    .integrate(|x| self.seed.psi0(x + a[k]) * self.seed.psi0(x + a[l]), -lim, lim)
                    .map_err(|source| ConstructionError::Overlap { k, l, source })?
                    .value;
                m[(k, l)] = o;
                m[(l, k)] = o;
            }
        }
        Ok(m)
    }

    /// `α = (λᵀ O λ)^{-1/2}`, normalising `αΞ`.
    pub fn alpha(&self) -> Result<f64, ConstructionError> {
        Ok(alpha_from_overlap(&self.weights, &self.overlap_matrix()?))
    }

    /// Upper end `(Σλ_n²)^{-1/2}` of the bracket on `α`.
    pub fn alpha_upper_bound(&self) -> f64 {
        self.weights.sum_of_squares().powf(-0.5)
    }

    pub fn ground_state(&self) -> Result<GroundState, ConstructionError> {
        Ok(GroundState {
            alpha: self.alpha()?,
            spec: self.clone(),
        })
    }

    pub fn density_decomposition(&self) -> Result<DensityDecomposition, ConstructionError> {
        let alpha = self.alpha()?;
        let a2 = alpha * alpha;
        Ok(DensityDecomposition {
            weights: self.weights.as_slice().iter().map(|l| a2 * l * l).collect(),
            alpha,
            spec: self.clone(),
        })
    }

    /// Incoherent sum `Σ (λ_n²/Σλ_k²) ρ₀(x + a_n)`.
    pub fn classical_density(&self, x: f64) -> f64 {
        let s2 = self.weights.sum_of_squares();
        self.terms()
            .map(|(l, a)| l * l / s2 * self.seed.density(x + a))
            .sum()
    }
}

pub(crate) fn alpha_from_overlap(weights: &WeightTuple, overlap: &DMatrix<f64>) -> f64 {
    let l = DVector::from_column_slice(weights.as_slice());
    let q = l.dot(&(overlap * &l));
    q.powf(-0.5)
}

/// The exact normalised ground state `α Ξ(x)` of a [`WellSpec`].
#[derive(Debug, Clone)]
pub struct GroundState {
    spec: WellSpec,
    alpha: f64,
}

impl GroundState {
    pub fn spec(&self) -> &WellSpec {
        &self.spec
    }
    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn energy(&self) -> f64 {
        self.spec.seed.e0()
    }
    pub fn psi(&self, x: f64) -> f64 {
        self.alpha * self.spec.xi(x)
    }
    pub fn density(&self, x: f64) -> f64 {
        let p = self.psi(x);
        p * p
    }
}

/// `ρ(x) = ι(x) + Σ W_n ρ₀(x + a_n)` with `W_n = α²λ_n²`.
#[derive(Debug, Clone)]
pub struct DensityDecomposition {
    spec: WellSpec,
    alpha: f64,
    weights: Vec<f64>,
}

impl DensityDecomposition {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Weighting factors `W_n`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Shifted seed density `ρ₀(x + a_n)`.
    pub fn component(&self, n: usize, x: f64) -> f64 {
        self.spec.seed.density(x + self.spec.shifts.as_slice()[n])
    }

    /// Cross terms `α² Σ_{k≠l} λ_kλ_l ψ₀(x+a_k)ψ₀(x+a_l)`.
    pub fn overlap_term(&self, x: f64) -> f64 {
        let l = self.spec.weights.as_slice();
        let a = self.spec.shifts.as_slice();
        let psi: Vec<f64> = a.iter().map(|s| self.spec.seed.psi0(x + s)).collect();
        let mut sum = 0.0;
        for k in 0..l.len() {
            for j in 0..l.len() {
                if j != k {
                    sum += l[k] * l[j] * psi[k] * psi[j];
                }
            }
        }
        self.alpha * self.alpha * sum
    }

    /// `Σ W_n ρ₀(x + a_n)`
    pub fn localized_sum(&self, x: f64) -> f64 {
        (0..self.weights.len())
            .map(|n| self.weights[n] * self.component(n, x))
            .sum()
    }

    pub fn reassembled(&self, x: f64) -> f64 {
        self.overlap_term(x) + self.localized_sum(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{lowest_eigenpairs, residual, GridSpec, Parity};
    use proptest::prelude::*;

    fn third() -> WellSpec {
        WellSpec::from_parts(
            SolvableSeed::poschl_teller(),
            vec![1.0 / 3.0; 3],
            vec![0.0, 5.0, -5.0],
        )
        .unwrap()
    }

    #[test]
    fn seed_passes_validation() {
        let d = SolvableSeed::poschl_teller().validate(&Quadrature::default()).unwrap();
        assert!((d.norm - 1.0).abs() < 1e-12);
        assert!(d.residual < 1e-6);
    }

    #[test]
    fn validation_rejects_broken_seed() {
        let good = SolvableSeed::poschl_teller();
        let wrong_energy = SolvableSeed::new(
            "bad",
            good.potential_fn(),
            good.ground_fn(),
            -0.5,
            -2.0,
            0.0,
            25.0,
        )
        .unwrap();
        assert!(wrong_energy.validate(&Quadrature::default()).is_err());
        let tight_bounds = SolvableSeed::new("bad", good.potential_fn(), good.ground_fn(), -1.0, -1.0, 0.0, 25.0).unwrap();
        assert!(tight_bounds.validate(&Quadrature::default()).is_err());
        assert!(SolvableSeed::new("bad", good.potential_fn(), good.ground_fn(), -1.0, 1.0, 0.0, 25.0).is_err());
    }

    #[test]
    fn tuple_validation() {
        assert!(matches!(
            WeightTuple::new(vec![0.5, 0.6]),
            Err(ConstructionError::WeightSum { .. })
        ));
        assert!(matches!(
            WeightTuple::new(vec![1.5, -0.5]),
            Err(ConstructionError::NonPositiveWeight { index: 1, .. })
        ));
        assert!(WeightTuple::new(vec![]).is_err());
        assert!(ShiftTuple::new(vec![f64::NAN]).is_err());
        assert!(matches!(
            WellSpec::from_parts(SolvableSeed::poschl_teller(), vec![0.5, 0.5], vec![0.0]),
            Err(ConstructionError::LengthMismatch { .. })
        ));
        assert_eq!(ShiftTuple::new(vec![0.0, 5.0, -5.0]).unwrap().diameter(), 10.0);
    }

    #[test]
    fn single_term_collapses_to_seed() {
        let seed = SolvableSeed::poschl_teller();
        let spec = WellSpec::from_parts(seed.clone(), vec![1.0], vec![0.0]).unwrap();
        let dd = spec.density_decomposition().unwrap();
        assert_eq!(spec.alpha().unwrap(), 1.0);
        assert_eq!(dd.weights(), &[1.0]);
        for i in -50..=50 {
            let x = i as f64 * 0.3;
            assert_eq!(spec.xi(x), seed.psi0(x));
            assert!((spec.potential(x) - seed.v(x)).abs() < 1e-15);
            assert_eq!(dd.overlap_term(x), 0.0);
            assert!((spec.classical_density(x) - seed.density(x)).abs() < 1e-16);
        }
    }

    #[test]
    fn xi_at_origin() {
        let expected = std::f64::consts::FRAC_1_SQRT_2 / 3.0 * (1.0 + 2.0 / 5.0_f64.cosh());
        assert!((third().xi(0.0) - expected).abs() < 1e-15);
    }

    #[test]
    fn mirror_symmetry() {
        let spec = WellSpec::from_parts(
            SolvableSeed::poschl_teller(),
            vec![0.2, 0.5, 0.3],
            vec![1.0, -3.0, 7.0],
        )
        .unwrap();
        let m = spec.mirrored();
        for i in -40..=40 {
            let x = i as f64 * 0.37;
            assert!((spec.xi(x) - m.xi(-x)).abs() < 1e-15);
            assert!((spec.potential(x) - m.potential(-x)).abs() < 1e-14);
        }
    }

    #[test]
    fn potential_far_out_falls_back_to_nearest_well() {
        let spec = third();
        let v = spec.potential(1e4);
        assert!(v.is_finite() && v <= 0.0);
    }

    #[test]
    fn alpha_of_equal_thirds() {
        let spec = third();
        let alpha = spec.alpha().unwrap();
        // (1/3 + (2/9)(2·5csch5 ... ))^{-1/2} by direct arithmetic
        let o1 = 5.0 / 5.0_f64.sinh();
        let o2 = 10.0 / 10.0_f64.sinh();
        let by_hand = (1.0 / 3.0 + 2.0 / 9.0 * (2.0 * o1 + o2)).powf(-0.5);
        assert!((alpha - by_hand).abs() < 1e-14);
        assert!((alpha - 1.65866).abs() < 1e-4);
        assert!(1.0 < alpha && alpha < 3.0_f64.sqrt());
        assert!((spec.alpha_upper_bound() - 3.0_f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn overlap_closed_form_agrees_with_quadrature() {
        let q = Quadrature::default();
        let spec = WellSpec::from_parts(
            SolvableSeed::poschl_teller(),
            vec![0.25; 4],
            vec![-5.0, 5.0, 0.0, 0.0],
        )
        .unwrap();
        let closed = spec.overlap_matrix().unwrap();
        let quad = spec.overlap_matrix_quadrature(&q).unwrap();
        assert!((closed[(0, 1)] - 9.0800e-4).abs() < 1e-7);
        assert!((closed[(0, 1)] - 10.0 / 10.0_f64.sinh()).abs() < 1e-16);
        assert_eq!(closed[(2, 3)], 1.0);
        for k in 0..4 {
            assert!((quad[(k, k)] - 1.0).abs() < 1e-11);
            for l in 0..4 {
                assert!((closed[(k, l)] - quad[(k, l)]).abs() < 1e-10);
                assert!(closed[(k, l)] > 0.0 && closed[(k, l)] <= 1.0);
            }
        }
    }

    #[test]
    fn generic_seed_uses_quadrature_overlap() {
        let seed = SolvableSeed::poschl_teller().without_closed_overlap();
        let spec = WellSpec::from_parts(seed, vec![0.5, 0.5], vec![-1.5, 1.5]).unwrap();
        let o = spec.overlap_matrix().unwrap();
        assert!((o[(0, 1)] - 3.0 / 3.0_f64.sinh()).abs() < 1e-11);
    }

    #[test]
    fn overlaps_decrease_with_separation() {
        let seed = SolvableSeed::poschl_teller();
        let q = Quadrature::default();
        let mut prev = 1.0;
        for i in 1..=40 {
            let o = seed.overlap_at(i as f64 * 0.5, &q).unwrap();
            assert!(o < prev);
            prev = o;
        }
        assert!(prev < 1e-6);
    }

    #[test]
    fn ground_state_value_and_normalisation() {
        let g = WellSpec::from_parts(SolvableSeed::poschl_teller(), vec![1.0 / 3.0; 3], vec![0.0, 5.0, -5.0])
            .unwrap()
            .ground_state()
            .unwrap();
        assert!((g.psi(0.0) - 0.40150).abs() < 1e-4);
        let q = Quadrature::default();
        let norm = q.integrate(|x| g.density(x), -30.0, 30.0).unwrap().value;
        assert!((norm - 1.0).abs() < 1e-8);
    }

    #[test]
    fn ground_pair_fd_residual() {
        let spec = WellSpec::from_parts(
            SolvableSeed::poschl_teller(),
            vec![0.1, 0.6, 0.3],
            vec![-2.0, 1.0, 6.0],
        )
        .unwrap();
        let g = spec.ground_state().unwrap();
        let grid = GridSpec::symmetric(spec.domain_half_width(), 1e-3, Parity::None).unwrap();
        let r = residual(|x| spec.potential(x), g.energy(), |x| g.psi(x), &grid);
        assert!(r < 1e-6, "{r}");
    }

    #[test]
    fn decomposition_reassembles_density() {
        let spec = third();
        let g = spec.ground_state().unwrap();
        let dd = spec.density_decomposition().unwrap();
        for i in 0..1000 {
            let x = -20.0 + 40.0 * i as f64 / 999.0;
            assert!((dd.reassembled(x) - g.density(x)).abs() < 1e-12);
        }
        let total: f64 = dd.weights().iter().sum::<f64>();
        let q = Quadrature::default();
        let mass = q.integrate(|x| dd.reassembled(x), -30.0, 30.0).unwrap().value;
        assert!((mass - 1.0).abs() < 1e-10);
        assert!(total < 1.0);
    }

    #[test]
    fn overlap_term_fades_with_distance() {
        let ratio = |a: f64| {
            let spec = WellSpec::from_parts(
                SolvableSeed::poschl_teller(),
                vec![1.0 / 3.0; 3],
                vec![0.0, a, -a],
            )
            .unwrap();
            let dd = spec.density_decomposition().unwrap();
            dd.overlap_term(0.0) / dd.localized_sum(0.0)
        };
        let mut prev = f64::INFINITY;
        for a in [4.0, 8.0, 12.0, 16.0, 20.0] {
            let r = ratio(a);
            assert!(r < prev);
            prev = r;
        }
        assert!(prev < 1e-7);
    }

    #[test]
    fn classical_density_normalised_and_approached() {
        let q = Quadrature::default();
        let l1 = |a: f64| {
            let spec = WellSpec::from_parts(
                SolvableSeed::poschl_teller(),
                vec![1.0 / 3.0; 3],
                vec![0.0, a, -a],
            )
            .unwrap();
            let g = spec.ground_state().unwrap();
            let lim = spec.domain_half_width();
            let mass = q.integrate(|x| spec.classical_density(x), -lim, lim).unwrap().value;
            assert!((mass - 1.0).abs() < 1e-10);
            q.integrate(|x| (g.density(x) - spec.classical_density(x)).abs(), -lim, lim)
                .unwrap()
                .value
        };
        assert!(l1(20.0) < l1(4.0));
    }

    #[test]
    fn energy_shifted_seed_shares_overlaps() {
        let seed = SolvableSeed::poschl_teller().with_energy_shift(0.7);
        assert!((seed.e0() + 0.3).abs() < 1e-15);
        assert_eq!(seed.v_upper(), 0.7);
        seed.validate(&Quadrature::default()).unwrap();
    }

    fn spec_strategy() -> impl Strategy<Value = WellSpec> {
        (1usize..=5)
            .prop_flat_map(|n| {
                (
                    prop::collection::vec(0.05f64..1.0, n),
                    prop::collection::vec(-12.0f64..12.0, n),
                )
            })
            .prop_map(|(raw, shifts)| {
                let s: f64 = raw.iter().sum();
                let lambdas = raw.iter().map(|x| x / s).collect();
                WellSpec::from_parts(SolvableSeed::poschl_teller(), lambdas, shifts).unwrap()
            })
    }

    proptest! {
        #[test]
        fn positivity_and_sandwich(spec in spec_strategy(), x in -40.0f64..40.0) {
            prop_assert!(spec.xi(x) > 0.0);
            let v = spec.potential(x);
            let (lo, hi) = spec.potential_envelope(x);
            prop_assert!(lo - 1e-14 <= v && v <= hi + 1e-14);
            prop_assert!((-2.0..0.0).contains(&v));
            let g = spec.ground_state().unwrap();
            prop_assert!(g.psi(x) > 0.0);
        }

        #[test]
        fn alpha_bracket(spec in spec_strategy()) {
            let alpha = spec.alpha().unwrap();
            let distinct = {
                let mut a = spec.shifts().as_slice().to_vec();
                a.sort_by(f64::total_cmp);
                a.windows(2).all(|w| w[1] > w[0])
            };
            if spec.len() >= 2 && distinct {
                prop_assert!(1.0 < alpha && alpha < spec.alpha_upper_bound());
            } else if spec.len() == 1 {
                prop_assert!((alpha - 1.0).abs() < 1e-15);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(6))]
        #[test]
        fn oracle_ground_energy_equals_seed(spec in spec_strategy()) {
            let grid = GridSpec::symmetric(spec.domain_half_width(), 0.005, Parity::None).unwrap();
            let s = lowest_eigenpairs(|x| spec.potential(x), &grid, 1).unwrap();
            prop_assert!((s.energies[0] - spec.seed().e0()).abs() < 1e-4);
        }
    }
}
