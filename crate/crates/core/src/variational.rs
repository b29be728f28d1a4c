//! Trial states built from shifted copies of the seed ground state.
//!
//! For `F = Σ β_n ψ₀(x + a_n)` the seed eigen-equation turns the Rayleigh
//! quotient into overlap-type integrals:
//!
//! ```text
//! ⟨F|H|F⟩ = E₀ + Σ β_n²(𝒱_{n,n} − ⟨V⟩) + Σ_{k≠n} β_kβ_n(𝒱_{k,n} − 𝒰_{k,n})
//! 𝒱_{k,n} = ∫ ψ₀(x+a_k) V_{Λ,A}(x) ψ₀(x+a_n) dx
//! 𝒰_{k,n} = ∫ ψ₀(x+a_k) V(x+a_n) ψ₀(x+a_n) dx
//! ```

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use thiserror::Error;

use crate::construction::{ConstructionError, SolvableSeed, WellSpec};
use crate::oracle::{FdSolver, GridSpec, OracleError, Parity, QuadError, Quadrature, SolverOptions};
use crate::triple::{self, TripleError, TripleParams};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VariationalError {
    #[error("{betas} coefficients for {wells} wells")]
    LengthMismatch { betas: usize, wells: usize },
    #[error("trial function has zero norm")]
    ZeroNorm,
    #[error("overlap matrix is not positive definite")]
    Singular,
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Triple(#[from] TripleError),
}

/// `⟨V⟩ = ∫ ψ₀ V ψ₀ dx`
pub fn mean_v(seed: &SolvableSeed, quad: &Quadrature) -> Result<f64, VariationalError> {
    let w = seed.half_width();
    Ok(quad.integrate(|x| seed.density(x) * seed.v(x), -w, w)?.value)
}

/// `⟨V⟩`, `𝒱` and `𝒰` for one specification.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralSet {
    pub mean_v: f64,
    pub v_mat: DMatrix<f64>,
    /// `u_mat[(k, n)] = ∫ψ₀(x+a_k) V(x+a_n) ψ₀(x+a_n) dx`
    pub u_mat: DMatrix<f64>,
}

impl IntegralSet {
    /// `max |𝒰_{k,n} − 𝒰_{n,k}|`
    pub fn u_asymmetry(&self) -> f64 {
        (&self.u_mat - self.u_mat.transpose()).amax()
    }
}

pub fn integral_set(spec: &WellSpec, quad: &Quadrature) -> Result<IntegralSet, VariationalError> {
    let seed = spec.seed();
    let a = spec.shifts().as_slice();
    let n = a.len();
    let lim = spec.domain_half_width();
    let mut v_mat = DMatrix::zeros(n, n);
    let mut u_mat = DMatrix::zeros(n, n);
    for k in 0..n {
        for l in k..n {
            let v = quad
                .integrate(|x| seed.psi0(x + a[k]) * spec.potential(x) * seed.psi0(x + a[l]), -lim, lim)?
                .value;
            v_mat[(k, l)] = v;
            v_mat[(l, k)] = v;
        }
        for l in 0..n {
            u_mat[(k, l)] = quad
                .integrate(|x| seed.psi0(x + a[k]) * seed.v(x + a[l]) * seed.psi0(x + a[l]), -lim, lim)?
                .value;
        }
    }
    Ok(IntegralSet {
        mean_v: mean_v(seed, quad)?,
        v_mat,
        u_mat,
    })
}

/// Normalised `F_β = Σ β_n ψ₀(x + a_n)`.
#[derive(Debug, Clone)]
pub struct TrialCombination {
    spec: WellSpec,
    betas: Vec<f64>,
    overlap: DMatrix<f64>,
}

impl TrialCombination {
    /// Rescales `betas` so that `βᵀ O β = 1`.
    pub fn new(spec: &WellSpec, betas: &[f64]) -> Result<Self, VariationalError> {
        let overlap = spec.overlap_matrix()?;
        Self::with_overlap(spec, betas, overlap)
    }

    pub fn with_overlap(spec: &WellSpec, betas: &[f64], overlap: DMatrix<f64>) -> Result<Self, VariationalError> {
        if betas.len() != spec.len() {
            return Err(VariationalError::LengthMismatch {
                betas: betas.len(),
                wells: spec.len(),
            });
        }
        let b = DVector::from_column_slice(betas);
        let norm2 = b.dot(&(&overlap * &b));
        if !(norm2 > 0.0 && norm2.is_finite()) {
            return Err(VariationalError::ZeroNorm);
        }
        let s = norm2.sqrt();
        Ok(Self {
            spec: spec.clone(),
            betas: betas.iter().map(|x| x / s).collect(),
            overlap,
        })
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }
    pub fn spec(&self) -> &WellSpec {
        &self.spec
    }
    pub fn overlap(&self) -> &DMatrix<f64> {
        &self.overlap
    }

    /// `βᵀ O β`, one after construction.
    pub fn norm2(&self) -> f64 {
        let b = DVector::from_column_slice(&self.betas);
        b.dot(&(&self.overlap * &b))
    }

    pub fn eval(&self, x: f64) -> f64 {
        let seed = self.spec.seed();
        self.betas
            .iter()
            .zip(self.spec.shifts().as_slice())
            .map(|(b, a)| b * seed.psi0(x + a))
            .sum()
    }
}

/// Rayleigh quotient from the integral set.
pub fn rayleigh(trial: &TrialCombination, integrals: &IntegralSet) -> f64 {
    let b = &trial.betas;
    let n = b.len();
    let mut r = trial.spec.seed().e0();
    for k in 0..n {
        r += b[k] * b[k] * (integrals.v_mat[(k, k)] - integrals.mean_v);
        for l in 0..n {
            if l != k {
                r += b[k] * b[l] * (integrals.v_mat[(k, l)] - integrals.u_mat[(k, l)]);
            }
        }
    }
    r
}

/// `∫ F (−F'' + V_{Λ,A} F) dx` with `−ψ₀'' = (E₀ − V)ψ₀` applied termwise.
pub fn rayleigh_direct(trial: &TrialCombination, quad: &Quadrature) -> Result<f64, VariationalError> {
    let spec = &trial.spec;
    let seed = spec.seed();
    let a = spec.shifts().as_slice();
    let e0 = seed.e0();
    let lim = spec.domain_half_width();
    let h_f = |x: f64| {
        let vx = spec.potential(x);
        trial
            .betas
            .iter()
            .zip(a)
            .map(|(b, s)| b * (e0 - seed.v(x + s) + vx) * seed.psi0(x + s))
            .sum::<f64>()
    };
    Ok(quad.integrate(|x| trial.eval(x) * h_f(x), -lim, lim)?.value)
}

/// `∫ (F'² + V_{Λ,A} F²) dx` given the seed derivative `ψ₀'`.
pub fn rayleigh_kinetic<D: Fn(f64) -> f64>(
    trial: &TrialCombination,
    dpsi0: D,
    quad: &Quadrature,
) -> Result<f64, VariationalError> {
    let spec = &trial.spec;
    let a = spec.shifts().as_slice();
    let lim = spec.domain_half_width();
    let df = |x: f64| trial.betas.iter().zip(a).map(|(b, s)| b * dpsi0(x + s)).sum::<f64>();
    Ok(quad
        .integrate(|x| df(x).powi(2) + spec.potential(x) * trial.eval(x).powi(2), -lim, lim)?
        .value)
}

/// Rayleigh quotient next to the bound that replaces every cross term by
/// `(V_U − V_L) β_kβ_n 𝒪_{k,n}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCheck {
    pub rayleigh: f64,
    pub bound: f64,
    /// Same bound with `|β_kβ_n|`; holds for every trial.
    pub bound_abs: f64,
    /// All `β_kβ_n ≥ 0` for `k ≠ n`, in which case `bound ≥ rayleigh`.
    pub cross_nonnegative: bool,
}

impl BoundCheck {
    /// `bound − rayleigh` when the order is guaranteed.
    pub fn slack(&self) -> Option<f64> {
        self.cross_nonnegative.then_some(self.bound - self.rayleigh)
    }
}

pub fn bound_rhs(trial: &TrialCombination, integrals: &IntegralSet) -> BoundCheck {
    let seed = trial.spec.seed();
    let b = &trial.betas;
    let o = &trial.overlap;
    let width = seed.v_upper() - seed.v_lower();
    let mut diag = seed.e0();
    let mut cross = 0.0;
    let mut cross_abs = 0.0;
    let mut nonneg = true;
    for k in 0..b.len() {
        diag += b[k] * b[k] * (integrals.v_mat[(k, k)] - integrals.mean_v);
        for l in 0..b.len() {
            if l != k {
                let p = b[k] * b[l];
                nonneg &= p >= 0.0;
                cross += p * o[(k, l)];
                cross_abs += p.abs() * o[(k, l)];
            }
        }
    }
    BoundCheck {
        rayleigh: rayleigh(trial, integrals),
        bound: diag + width * cross,
        bound_abs: diag + width * cross_abs,
        cross_nonnegative: nonneg,
    }
}

/// `⟨ψ₀(·+a_k)| H |ψ₀(·+a_n)⟩`, symmetrised.
pub fn hamiltonian_matrix(spec: &WellSpec, integrals: &IntegralSet, overlap: &DMatrix<f64>) -> DMatrix<f64> {
    let e0 = spec.seed().e0();
    let h = overlap * e0 + &integrals.v_mat - &integrals.u_mat;
    (&h + h.transpose()) * 0.5
}

/// Ritz values and coefficient vectors on `span{ψ₀(x + a_n)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct RitzResult {
    /// Ascending; the `j`-th is an upper bound on the `j`-th level.
    pub values: Vec<f64>,
    /// Gram-normalised coefficient vectors, one per value.
    pub vectors: Vec<Vec<f64>>,
}

/// Solves `H c = E O c`. The second value minimises the Rayleigh quotient
/// over trials Gram-orthogonal to the lowest Ritz vector.
pub fn ritz(spec: &WellSpec, integrals: &IntegralSet, overlap: &DMatrix<f64>) -> Result<RitzResult, VariationalError> {
    let h = hamiltonian_matrix(spec, integrals, overlap);
    let chol = overlap.clone().cholesky().ok_or(VariationalError::Singular)?;
    let l = chol.l();
    let l_inv = l
        .clone()
        .try_inverse()
        .ok_or(VariationalError::Singular)?;
    let m = &l_inv * h * l_inv.transpose();
    let m = (&m + m.transpose()) * 0.5;
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let back = l_inv.transpose();
    let mut values = Vec::with_capacity(order.len());
    let mut vectors = Vec::with_capacity(order.len());
    for i in order {
        values.push(eig.eigenvalues[i]);
        let c = &back * eig.eigenvectors.column(i);
        let sign = if c.sum() < 0.0 { -1.0 } else { 1.0 };
        vectors.push(c.iter().map(|x| sign * x).collect());
    }
    Ok(RitzResult { values, vectors })
}

/// Smallest eigenvalue of the Gram matrix; positive iff the shifted ground
/// states are linearly independent.
pub fn gram_min_eigenvalue(overlap: &DMatrix<f64>) -> f64 {
    SymmetricEigen::new(overlap.clone())
        .eigenvalues
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Every quantity that enters the two triple-well excited-level bounds,
/// from the integrals up to the closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundChain {
    pub params: TripleParams,
    pub mean_v: f64,
    pub v00: f64,
    pub vpp: f64,
    pub v0p: f64,
    pub vpm: f64,
    pub u0p: f64,
    pub up0: f64,
    pub upm: f64,
    pub ump: f64,
    pub overlap_pm: f64,
    pub overlap_0p: f64,
    pub beta0: f64,
    pub beta_plus: f64,
    /// `Rayleigh(Φ₁)` from the integral set.
    pub rayleigh_phi1: f64,
    /// `E₀ + (𝒱₊₊ − ⟨V⟩ − 𝒱₊₋ + 𝒰₊₋)/(1 − 𝒪₊₋)`
    pub odd_exact: f64,
    /// `E₀ + (𝒱₊₊ − ⟨V⟩ + 2𝒪₊₋)/(1 − 𝒪₊₋)`
    pub odd_overlap_bound: f64,
    /// `2(1−λ)/(λ/2)·𝒪₀₊ + 2𝒪₊₋`, bound on `𝒱₊₊ − ⟨V⟩`
    pub outer_diagonal_bound: f64,
    /// Closed-form bound on `E₁`.
    pub odd_closed_form: f64,
    /// `Rayleigh(Φ₂)` from the integral set.
    pub rayleigh_phi2: f64,
    /// Even-trial expansion with the `(+,−)` cross term weighted `4β₊²`.
    pub even_expansion_4: f64,
    /// Same with the weight `2β₊²` that the double sum actually produces.
    pub even_expansion_2: f64,
    /// Cross terms replaced by `2·|β_kβ_n|·𝒪` with the `8β₊²𝒪₊₋` weight.
    pub even_overlap_bound: f64,
    /// `2λ/(1−λ)·𝒪₀₊`, bound on `𝒱₀₀ − ⟨V⟩`
    pub central_diagonal_bound: f64,
    /// Even overlap bound after both diagonal bounds.
    pub even_diagonal_bound: f64,
    /// `E₀ + f_a(λ)`
    pub even_closed_form: f64,
}

/// One step of the chain: `lhs ≤ rhs` up to `slack`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainStep {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
}

impl ChainStep {
    pub fn margin(&self) -> f64 {
        self.rhs - self.lhs
    }
    pub fn holds(&self, slack: f64) -> bool {
        self.margin() >= -slack
    }
}

impl BoundChain {
    pub fn compute(params: TripleParams, quad: &Quadrature) -> Result<Self, VariationalError> {
        let spec = params.well_spec()?;
        let ints = integral_set(&spec, quad)?;
        Ok(Self::from_integrals(params, &ints)?)
    }

    pub fn from_integrals(p: TripleParams, ints: &IntegralSet) -> Result<Self, TripleError> {
        let (l, e0) = (p.lambda(), triple::GROUND_ENERGY);
        let opm = triple::overlap_pm(p.a());
        let o0p = triple::overlap_0p(p.a());
        let v = &ints.v_mat;
        let u = &ints.u_mat;
        let mv = ints.mean_v;
        // shift order (0, a, −a)
        let (v00, vpp, v0p, vpm) = (v[(0, 0)], v[(1, 1)], v[(0, 1)], v[(1, 2)]);
        let (u0p, up0, upm, ump) = (u[(0, 1)], u[(1, 0)], u[(1, 2)], u[(2, 1)]);

        let b1 = triple::phi1_coefficients(&p);
        let rayleigh_phi1 = e0
            + (b1[1] * b1[1] + b1[2] * b1[2]) * (vpp - mv)
            + b1[1] * b1[2] * (2.0 * vpm - upm - ump);
        let odd_exact = e0 + (vpp - mv - vpm + 0.5 * (upm + ump)) / (1.0 - opm);
        let odd_overlap_bound = e0 + (vpp - mv + 2.0 * opm) / (1.0 - opm);
        let outer_diagonal_bound = 2.0 * (1.0 - l) / (0.5 * l) * o0p + 2.0 * opm;

        let b2 = triple::phi2_coefficients(&p);
        let (b0, bp) = (b2[0], b2[1]);
        let diag = -mv * (b0 * b0 + 2.0 * bp * bp) + b0 * b0 * v00 + 2.0 * bp * bp * vpp;
        let cross0 = 2.0 * b0 * bp * ((v0p - u0p) + (v0p - up0));
        let crosspm = |w: f64| w * bp * bp * (vpm - 0.5 * (upm + ump));
        let rayleigh_phi2 = e0 + diag + cross0 + crosspm(2.0);
        let central_diagonal_bound = 2.0 * l / (1.0 - l) * o0p;
        let overlap_cross = 8.0 * (-b0 * bp * o0p + bp * bp * opm);

        Ok(Self {
            params: p,
            mean_v: mv,
            v00,
            vpp,
            v0p,
            vpm,
            u0p,
            up0,
            upm,
            ump,
            overlap_pm: opm,
            overlap_0p: o0p,
            beta0: b0,
            beta_plus: bp,
            rayleigh_phi1,
            odd_exact,
            odd_overlap_bound,
            outer_diagonal_bound,
            odd_closed_form: triple::bound_e1(&p)?,
            rayleigh_phi2,
            even_expansion_4: e0 + diag + cross0 + crosspm(4.0),
            even_expansion_2: rayleigh_phi2,
            even_overlap_bound: e0 + diag + overlap_cross,
            central_diagonal_bound,
            even_diagonal_bound: e0
                + b0 * b0 * central_diagonal_bound
                + 2.0 * bp * bp * outer_diagonal_bound
                + overlap_cross,
            even_closed_form: e0 + triple::gap_bound_f(&p)?,
        })
    }

    /// The inequalities in derivation order. The last one compares the even
    /// trial directly against the closed-form gap bound.
    pub fn steps(&self) -> Vec<ChainStep> {
        vec![
            ChainStep {
                name: "odd trial: cross terms bounded by overlap",
                lhs: self.rayleigh_phi1,
                rhs: self.odd_overlap_bound,
            },
            ChainStep {
                name: "outer diagonal shift bounded by overlaps",
                lhs: self.vpp - self.mean_v,
                rhs: self.outer_diagonal_bound,
            },
            ChainStep {
                name: "odd trial: closed-form E1 bound",
                lhs: self.odd_overlap_bound,
                rhs: self.odd_closed_form,
            },
            ChainStep {
                name: "central diagonal shift bounded by overlap",
                lhs: self.v00 - self.mean_v,
                rhs: self.central_diagonal_bound,
            },
            ChainStep {
                name: "even trial: cross terms bounded by overlap",
                lhs: self.rayleigh_phi2,
                rhs: self.even_overlap_bound,
            },
            ChainStep {
                name: "even trial: diagonal shifts bounded",
                lhs: self.even_overlap_bound,
                rhs: self.even_diagonal_bound,
            },
            ChainStep {
                name: "even trial: closed-form gap bound f_a",
                lhs: self.rayleigh_phi2,
                rhs: self.even_closed_form,
            },
        ]
    }

    /// `even_diagonal_bound − even_closed_form`, which algebra puts at
    /// `8λ(1−λ)𝒪₀₊ / D` with `D` the squared norm of the unnormalised `Φ₂`.
    pub fn closed_form_shortfall(&self) -> f64 {
        self.even_diagonal_bound - self.even_closed_form
    }
}

/// One member of a family with growing separation.
#[derive(Debug, Clone, PartialEq)]
pub struct TrendRecord {
    pub diameter: f64,
    pub max_overlap: f64,
    pub max_diagonal_shift: f64,
    /// Oracle `E_n − E₀` for `0 < n < N`.
    pub gaps: Vec<f64>,
    pub ground: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrendReport {
    pub records: Vec<TrendRecord>,
    pub overlap_decreasing: bool,
    pub diagonal_decreasing: bool,
    pub gaps_decreasing: bool,
}

fn strictly_decreasing(xs: &[f64]) -> bool {
    xs.len() >= 2 && xs.windows(2).all(|w| w[1] < w[0])
}

/// Overlap, diagonal-shift and oracle-gap metrics along a family of
/// specifications, with a full-domain grid solve of step `step` for each.
pub fn degeneracy_trend(specs: &[WellSpec], step: f64, quad: &Quadrature) -> Result<TrendReport, VariationalError> {
    let mut records = Vec::with_capacity(specs.len());
    let mut solver = FdSolver::new(SolverOptions::default());
    for spec in specs {
        let o = spec.overlap_matrix_with(quad)?;
        let n = spec.len();
        let mut max_overlap: f64 = 0.0;
        for k in 0..n {
            for l in 0..n {
                if k != l {
                    max_overlap = max_overlap.max(o[(k, l)]);
                }
            }
        }
        let ints = integral_set(spec, quad)?;
        let max_diagonal_shift = (0..n)
            .map(|k| (ints.v_mat[(k, k)] - ints.mean_v).abs())
            .fold(0.0, f64::max);
        let grid = GridSpec::symmetric(spec.domain_half_width(), step, Parity::None)?;
        let s = solver.solve(|x| spec.potential(x), &grid, n)?;
        let gaps = s.energies[1..].iter().map(|e| e - s.energies[0]).collect();
        records.push(TrendRecord {
            diameter: spec.shifts().diameter(),
            max_overlap,
            max_diagonal_shift,
            gaps,
            ground: s.energies[0],
        });
    }
    let col = |f: &dyn Fn(&TrendRecord) -> f64| records.iter().map(f).collect::<Vec<_>>();
    let levels = records.first().map_or(0, |r| r.gaps.len());
    let gaps_decreasing =
        levels > 0 && (0..levels).all(|j| strictly_decreasing(&col(&|r| r.gaps.get(j).copied().unwrap_or(f64::NAN))));
    Ok(TrendReport {
        overlap_decreasing: strictly_decreasing(&col(&|r| r.max_overlap)),
        diagonal_decreasing: strictly_decreasing(&col(&|r| r.max_diagonal_shift)),
        gaps_decreasing,
        records,
    })
}
