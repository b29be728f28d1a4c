//! Brute-force verifier: second-order finite differences for
//! `−d²/dx² + V(x)` on a uniform grid, plus quadrature-based moments.
//!
//! Nothing here knows about the closed forms in [`crate::triple`] or the
//! construction in [`crate::construction`]; the oracle only ever sees a
//! potential as a black-box function.

pub mod quadrature;
pub mod tridiag;

use thiserror::Error;

pub use quadrature::{quadrature, Integral, QuadError, Quadrature};
pub use tridiag::SymTridiagonal;

/// Default finite-difference step for triple-well solves.
pub const DEFAULT_STEP: f64 = 0.005;
/// Margin added beyond the outermost well when sizing the domain.
pub const DEFAULT_MARGIN: f64 = 25.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("requested {k} levels but the grid only supports {max}")]
    TooManyLevels { k: usize, max: usize },
    #[error("inverse iteration for level {level} did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence {
        level: usize,
        iterations: usize,
        residual: f64,
    },
    #[error("potential is not finite at x = {x}")]
    NonFinitePotential { x: f64 },
    #[error(transparent)]
    Quadrature(#[from] QuadError),
}

/// Boundary treatment at `x = 0` for solves restricted to one parity class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    /// Full domain, Dirichlet at both ends.
    None,
    /// Mirror condition `ψ(−h) = ψ(h)` at the origin.
    Even,
    /// Dirichlet condition `ψ(0) = 0` at the origin.
    Odd,
}

/// Parity observed on an eigenvector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevelParity {
    Even,
    Odd,
    Mixed,
}

/// Uniform grid `x_i = x_min + i·h`, `i = 0..n_points`, with Dirichlet
/// conditions at both ends.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    x_min: f64,
    x_max: f64,
    n_points: usize,
    parity: Parity,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, n_points: usize, parity: Parity) -> Result<Self, OracleError> {
        if !(x_min.is_finite() && x_max.is_finite()) || x_min >= x_max {
            return Err(OracleError::InvalidGrid(format!(
                "need finite x_min < x_max, got [{x_min}, {x_max}]"
            )));
        }
        if n_points < 3 {
            return Err(OracleError::InvalidGrid(format!(
                "need at least 3 points, got {n_points}"
            )));
        }
        if parity != Parity::None {
            let scale = x_max.abs().max(1.0);
            if (x_min + x_max).abs() > 1e-12 * scale {
                return Err(OracleError::InvalidGrid(format!(
                    "parity solves need a symmetric domain, got [{x_min}, {x_max}]"
                )));
            }
            if n_points.is_multiple_of(2) {
                return Err(OracleError::InvalidGrid(
                    "parity solves need an odd point count so x = 0 is a node".into(),
                ));
            }
        }
        Ok(Self {
            x_min,
            x_max,
            n_points,
            parity,
        })
    }

    /// Symmetric grid `[−X', X']` with `X' = ⌈X/h⌉·h ≥ half_width` and step
    /// exactly `step`.
    pub fn symmetric(half_width: f64, step: f64, parity: Parity) -> Result<Self, OracleError> {
        if !(step > 0.0 && step.is_finite() && half_width > 0.0 && half_width.is_finite()) {
            return Err(OracleError::InvalidGrid(format!(
                "need positive half width and step, got {half_width}, {step}"
            )));
        }
        let m = (half_width / step - 1e-9).ceil() as usize;
        let x_max = m as f64 * step;
        Self::new(-x_max, x_max, 2 * m + 1, parity)
    }

    /// Default triple-well grid: `±(a + 25)` at `h = 0.005`.
    pub fn for_wells(max_shift: f64, parity: Parity) -> Result<Self, OracleError> {
        Self::symmetric(max_shift.abs() + DEFAULT_MARGIN, DEFAULT_STEP, parity)
    }

    pub fn with_parity(self, parity: Parity) -> Result<Self, OracleError> {
        Self::new(self.x_min, self.x_max, self.n_points, parity)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }
    pub fn x_max(&self) -> f64 {
        self.x_max
    }
    pub fn n_points(&self) -> usize {
        self.n_points
    }
    pub fn parity(&self) -> Parity {
        self.parity
    }
    pub fn step(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }
    pub fn x(&self, i: usize) -> f64 {
        if i + 1 == self.n_points {
            self.x_max
        } else {
            self.x_min + i as f64 * self.step()
        }
    }
    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.x(i)).collect()
    }
    fn is_symmetric(&self) -> bool {
        self.n_points % 2 == 1 && (self.x_min + self.x_max).abs() <= 1e-12 * self.x_max.abs().max(1.0)
    }
}

/// Lowest eigenpairs of a discretised Hamiltonian.
///
/// `vectors[j]` is sampled on every point of `x` (boundary zeros included)
/// and normalised so that `h Σ ψ² = 1`.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub x: Vec<f64>,
    pub step: f64,
    pub energies: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
    pub residuals: Vec<f64>,
    pub parities: Vec<LevelParity>,
    /// Leading-order estimate `(h²/12)‖ψ''‖²` of the discretisation shift of
    /// each energy.
    pub truncation_estimates: Vec<f64>,
    pub warnings: Vec<String>,
}

impl Spectrum {
    pub fn ground_energy(&self) -> f64 {
        self.energies[0]
    }

    /// Grid-L² distance `√(h Σ (v − f)²)` between level `j` and a sampled
    /// function, after fixing the sign of `v` to best match `f`.
    pub fn l2_distance<F: Fn(f64) -> f64>(&self, j: usize, f: F) -> f64 {
        let v = &self.vectors[j];
        let sampled: Vec<f64> = self.x.iter().map(|&x| f(x)).collect();
        let dot: f64 = v.iter().zip(&sampled).map(|(a, b)| a * b).sum();
        let sign = if dot < 0.0 { -1.0 } else { 1.0 };
        let sum: f64 = v
            .iter()
            .zip(&sampled)
            .map(|(a, b)| (sign * a - b).powi(2))
            .sum();
        (self.step * sum).sqrt()
    }
}

/// Settings for [`FdSolver`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub max_iterations: usize,
    /// Energies whose estimated discretisation error exceeds this produce a
    /// warning in the returned [`Spectrum`].
    pub energy_tolerance: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            max_iterations: 50,
            energy_tolerance: 1e-4,
        }
    }
}

/// Finite-difference eigensolver. Owns its sampling workspace, so one
/// instance serves one solve at a time.
#[derive(Debug, Default)]
pub struct FdSolver {
    options: SolverOptions,
    potential_samples: Vec<f64>,
}

impl FdSolver {
    pub fn new(options: SolverOptions) -> Self {
        Self {
            options,
            potential_samples: Vec::new(),
        }
    }

    pub fn options(&self) -> &SolverOptions {
        &self.options
    }

    /// The `k` lowest eigenpairs of `−d²/dx² + V` on `grid`.
    pub fn solve<V: Fn(f64) -> f64>(&mut self, potential: V, grid: &GridSpec, k: usize) -> Result<Spectrum, OracleError> {
        let n = grid.n_points();
        let max = (n / 10).max(1);
        if k == 0 || k > max {
            return Err(OracleError::TooManyLevels { k, max });
        }
        let h = grid.step();
        let inv_h2 = 1.0 / (h * h);

        self.potential_samples.clear();
        for i in 0..n {
            let x = grid.x(i);
            let v = potential(x);
            if !v.is_finite() {
                return Err(OracleError::NonFinitePotential { x });
            }
            self.potential_samples.push(v);
        }
        let samples = &self.potential_samples;

        // Unknowns: interior nodes (full), or the right half including or
        // excluding the centre node (even / odd).
        let centre = (n - 1) / 2;
        let first = match grid.parity() {
            Parity::None => 1,
            Parity::Even => centre,
            Parity::Odd => centre + 1,
        };
        let last = n - 2;
        if last < first {
            return Err(OracleError::InvalidGrid("no interior unknowns".into()));
        }
        let m = last - first + 1;
        let diag: Vec<f64> = (first..=last).map(|i| 2.0 * inv_h2 + samples[i]).collect();
        let mut off = vec![-inv_h2; m - 1];
        // The mirror row couples to its neighbour with weight 2; the similarity
        // transform diag(1/√2, 1, …) makes the matrix symmetric.
        let mirror = grid.parity() == Parity::Even;
        if mirror && m > 1 {
            off[0] = -std::f64::consts::SQRT_2 * inv_h2;
        }
        let t = SymTridiagonal::new(diag, off);

        let energies = t.lowest_eigenvalues(k);
        let eigvecs = tridiag::inverse_iteration(&t, &energies, self.options.max_iterations)?;

        let mut vectors = Vec::with_capacity(k);
        for ev in &eigvecs {
            let mut local = ev.vector.clone();
            if mirror {
                local[0] *= std::f64::consts::SQRT_2;
            }
            let mut full = vec![0.0; n];
            match grid.parity() {
                Parity::None => full[first..=last].copy_from_slice(&local),
                Parity::Even | Parity::Odd => {
                    let sign = if grid.parity() == Parity::Even { 1.0 } else { -1.0 };
                    for (j, &val) in local.iter().enumerate() {
                        let i = first + j;
                        full[i] = val;
                        let mirror_i = 2 * centre - i;
                        if mirror_i != i {
                            full[mirror_i] = sign * val;
                        }
                    }
                }
            }
            let norm = (h * full.iter().map(|x| x * x).sum::<f64>()).sqrt();
            full.iter_mut().for_each(|x| *x /= norm);
            // Fix the sign so the largest-magnitude component is positive.
            let peak = full.iter().fold(0.0_f64, |p, &x| if x.abs() > p.abs() { x } else { p });
            if peak < 0.0 {
                full.iter_mut().for_each(|x| *x = -*x);
            }
            vectors.push(full);
        }

        let mut residuals = Vec::with_capacity(k);
        let mut truncation_estimates = Vec::with_capacity(k);
        let mut parities = Vec::with_capacity(k);
        let mut warnings = Vec::new();
        for (j, (v, &e)) in vectors.iter().zip(&energies).enumerate() {
            let mut res = 0.0_f64;
            let mut d2sum = 0.0;
            for i in 1..n - 1 {
                let d2 = (v[i + 1] - 2.0 * v[i] + v[i - 1]) * inv_h2;
                res = res.max((-d2 + (samples[i] - e) * v[i]).abs());
                d2sum += d2 * d2;
            }
            residuals.push(res);
            let estimate = h * h / 12.0 * h * d2sum;
            truncation_estimates.push(estimate);
            if estimate > self.options.energy_tolerance {
                warnings.push(format!(
                    "level {j}: estimated discretisation error {estimate:.3e} exceeds tolerance {:.3e}; refine the grid",
                    self.options.energy_tolerance
                ));
            }
            parities.push(match grid.parity() {
                Parity::Even => LevelParity::Even,
                Parity::Odd => LevelParity::Odd,
                Parity::None => classify_parity(v, grid),
            });
        }

        Ok(Spectrum {
            x: grid.points(),
            step: h,
            energies,
            vectors,
            residuals,
            parities,
            truncation_estimates,
            warnings,
        })
    }
}

fn classify_parity(v: &[f64], grid: &GridSpec) -> LevelParity {
    if !grid.is_symmetric() {
        return LevelParity::Mixed;
    }
    let n = v.len();
    let (mut even, mut odd, mut total) = (0.0, 0.0, 0.0);
    for i in 0..n {
        let r = v[n - 1 - i];
        even += (v[i] - r).powi(2);
        odd += (v[i] + r).powi(2);
        total += v[i] * v[i];
    }
    if even <= 1e-8 * total {
        LevelParity::Even
    } else if odd <= 1e-8 * total {
        LevelParity::Odd
    } else {
        LevelParity::Mixed
    }
}

/// The `k` lowest eigenpairs of `−d²/dx² + V` with default solver options.
pub fn lowest_eigenpairs<V: Fn(f64) -> f64>(potential: V, grid: &GridSpec, k: usize) -> Result<Spectrum, OracleError> {
    FdSolver::new(SolverOptions::default()).solve(potential, grid, k)
}

/// Max-norm residual of the three-point stencil applied to `(E, ψ)` over the
/// interior of `grid`.
pub fn residual<V, P>(potential: V, energy: f64, wavefn: P, grid: &GridSpec) -> f64
where
    V: Fn(f64) -> f64,
    P: Fn(f64) -> f64,
{
    let h = grid.step();
    let n = grid.n_points();
    let mut prev = wavefn(grid.x(0));
    let mut cur = wavefn(grid.x(1));
    let mut worst = 0.0_f64;
    for i in 1..n - 1 {
        let next = wavefn(grid.x(i + 1));
        let x = grid.x(i);
        let r = -(next - 2.0 * cur + prev) / (h * h) + (potential(x) - energy) * cur;
        worst = worst.max(r.abs());
        prev = cur;
        cur = next;
    }
    worst
}

/// Standard deviation `√(⟨x²⟩ − ⟨x⟩²)` of a density on `[x_min, x_max]`.
/// The moments are divided by the integrated mass, so a slightly
/// unnormalised density is tolerated.
pub fn dispersion<D: Fn(f64) -> f64>(density: D, x_min: f64, x_max: f64, quad: &Quadrature) -> Result<f64, OracleError> {
    let m0 = quad.integrate(&density, x_min, x_max)?.value;
    let m1 = quad.integrate(|x| x * density(x), x_min, x_max)?.value;
    let m2 = quad.integrate(|x| x * x * density(x), x_min, x_max)?.value;
    let mean = m1 / m0;
    Ok((m2 / m0 - mean * mean).max(0.0).sqrt())
}

/// First moment `⟨x⟩` of a density.
pub fn mean_position<D: Fn(f64) -> f64>(density: D, x_min: f64, x_max: f64, quad: &Quadrature) -> Result<f64, OracleError> {
    let m0 = quad.integrate(&density, x_min, x_max)?.value;
    let m1 = quad.integrate(|x| x * density(x), x_min, x_max)?.value;
    Ok(m1 / m0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::sech;
    use std::f64::consts::PI;

    fn seed_v(x: f64) -> f64 {
        -2.0 * sech(x).powi(2)
    }

    #[test]
    fn grid_validation() {
        assert!(GridSpec::new(1.0, 0.0, 10, Parity::None).is_err());
        assert!(GridSpec::new(0.0, 1.0, 2, Parity::None).is_err());
        assert!(GridSpec::new(-1.0, 2.0, 11, Parity::Even).is_err());
        assert!(GridSpec::new(-1.0, 1.0, 10, Parity::Odd).is_err());
        let g = GridSpec::symmetric(10.0, 0.01, Parity::Even).unwrap();
        assert_eq!(g.n_points(), 2001);
        assert!((g.step() - 0.01).abs() < 1e-15);
        assert_eq!(g.x(1000), 0.0);
    }

    #[test]
    fn level_count_sanity() {
        let g = GridSpec::symmetric(1.0, 0.1, Parity::None).unwrap();
        assert!(matches!(
            lowest_eigenpairs(|_| 0.0, &g, 5),
            Err(OracleError::TooManyLevels { .. })
        ));
        assert!(lowest_eigenpairs(|_| 0.0, &g, 0).is_err());
    }

    #[test]
    fn particle_in_a_box() {
        let g = GridSpec::symmetric(10.0, 0.01, Parity::None).unwrap();
        let s = lowest_eigenpairs(|_| 0.0, &g, 3).unwrap();
        assert!((s.energies[0] - (PI / 20.0).powi(2)).abs() < 1e-5);
        assert!((s.energies[0] - 0.024674).abs() < 1e-5);
        assert_eq!(s.parities[0], LevelParity::Even);
        assert_eq!(s.parities[1], LevelParity::Odd);
        assert!(s.warnings.is_empty());
    }

    #[test]
    fn seed_ground_state() {
        let g = GridSpec::symmetric(30.0, 0.005, Parity::None).unwrap();
        let s = lowest_eigenpairs(seed_v, &g, 1).unwrap();
        assert!((s.energies[0] + 1.0).abs() < 1e-4);
        let d = s.l2_distance(0, |x| sech(x) / 2.0_f64.sqrt());
        assert!(d < 1e-3, "{d}");
        assert!(s.residuals[0] < 1e-6);
    }

    #[test]
    fn parity_spectra_partition_the_full_spectrum() {
        let v = |x: f64| -2.0 * sech(x - 3.0).powi(2) - 2.0 * sech(x + 3.0).powi(2);
        let full = GridSpec::symmetric(25.0, 0.01, Parity::None).unwrap();
        let all = lowest_eigenpairs(v, &full, 4).unwrap();
        let even = lowest_eigenpairs(v, &full.with_parity(Parity::Even).unwrap(), 2).unwrap();
        let odd = lowest_eigenpairs(v, &full.with_parity(Parity::Odd).unwrap(), 2).unwrap();
        let mut merged: Vec<f64> = even.energies.iter().chain(&odd.energies).copied().collect();
        merged.sort_by(f64::total_cmp);
        for (a, b) in merged.iter().zip(&all.energies) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
        assert_eq!(all.parities[0], LevelParity::Even);
        assert_eq!(all.parities[1], LevelParity::Odd);
        // parity-restricted vectors match the full-domain ones
        let d: f64 = even.vectors[0]
            .iter()
            .zip(&all.vectors[0])
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            * all.step;
        assert!(d.sqrt() < 1e-6);
    }

    #[test]
    fn richardson_second_order() {
        let errs: Vec<f64> = [0.04, 0.02, 0.01]
            .iter()
            .map(|&h| {
                let g = GridSpec::symmetric(30.0, h, Parity::Even).unwrap();
                lowest_eigenpairs(seed_v, &g, 1).unwrap().energies[0] + 1.0
            })
            .collect();
        let r1 = errs[0] / errs[1];
        let r2 = errs[1] / errs[2];
        assert!((r1 - 4.0).abs() < 0.2, "{r1}");
        assert!((r2 - 4.0).abs() < 0.2, "{r2}");
    }

    #[test]
    fn coarse_grid_warns() {
        let g = GridSpec::symmetric(30.0, 0.2, Parity::None).unwrap();
        let mut solver = FdSolver::new(SolverOptions {
            energy_tolerance: 1e-6,
            ..SolverOptions::default()
        });
        let s = solver.solve(seed_v, &g, 1).unwrap();
        assert!(!s.warnings.is_empty());
        // the estimate tracks the actual shift
        let actual = -1.0 - s.energies[0];
        assert!(actual > 0.0);
        assert!((s.truncation_estimates[0] / actual - 1.0).abs() < 0.2);
    }

    #[test]
    fn residual_detects_wrong_energy() {
        let g = GridSpec::symmetric(30.0, 1e-3, Parity::None).unwrap();
        let psi = |x: f64| sech(x) / 2.0_f64.sqrt();
        assert!(residual(seed_v, -1.0, psi, &g) < 1e-5);
        assert!(residual(seed_v, -0.9, psi, &g) > 1e-2);
    }

    #[test]
    fn residual_is_second_order() {
        let psi = |x: f64| sech(x) / 2.0_f64.sqrt();
        let coarse = residual(seed_v, -1.0, psi, &GridSpec::symmetric(20.0, 0.02, Parity::None).unwrap());
        let fine = residual(seed_v, -1.0, psi, &GridSpec::symmetric(20.0, 0.01, Parity::None).unwrap());
        let ratio = coarse / fine;
        assert!((ratio - 4.0).abs() < 0.2, "{ratio}");
    }

    #[test]
    fn seed_dispersion() {
        let q = Quadrature::default();
        let rho = |x: f64| 0.5 * sech(x).powi(2);
        let d = dispersion(rho, -30.0, 30.0, &q).unwrap();
        assert!((d - PI / 12.0_f64.sqrt()).abs() < 1e-6);
        assert!(mean_position(rho, -30.0, 30.0, &q).unwrap().abs() < 1e-12);
    }
}
