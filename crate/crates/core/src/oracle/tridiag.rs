//! Selected eigenpairs of a real symmetric tridiagonal matrix.
//!
//! Eigenvalues come from bisection on the Sturm count (number of negative
//! pivots of `T − σI = LDLᵀ`); eigenvectors from inverse iteration with a
//! partially pivoted tridiagonal LU. Vectors of one solve are kept mutually
//! orthogonal, which is what lets clustered or numerically degenerate levels
//! come out as distinct vectors.

use super::OracleError;

/// Symmetric tridiagonal matrix stored as diagonal and off-diagonal.
#[derive(Debug, Clone)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert!(!diag.is_empty());
        assert_eq!(off.len() + 1, diag.len());
        Self { diag, off }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Gershgorin interval containing every eigenvalue.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    pub fn norm_bound(&self) -> f64 {
        let (lo, hi) = self.gershgorin();
        lo.abs().max(hi.abs())
    }

    fn pivmin(&self) -> f64 {
        let max_e2 = self.off.iter().fold(1.0_f64, |m, e| m.max(e * e));
        f64::MIN_POSITIVE * max_e2
    }

    /// Number of eigenvalues strictly below `sigma`.
    pub fn sturm_count(&self, sigma: f64) -> usize {
        let pivmin = self.pivmin();
        let mut count = 0;
        let mut q = self.diag[0] - sigma;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.len() {
            let e = self.off[i - 1];
            q = self.diag[i] - sigma - e * e / q;
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// The `k` smallest eigenvalues, ascending, by bisection.
    pub fn lowest_eigenvalues(&self, k: usize) -> Vec<f64> {
        let k = k.min(self.len());
        let (g_lo, g_hi) = self.gershgorin();
        let pad = 2.0 * f64::EPSILON * self.norm_bound().max(1.0) + self.pivmin();
        let mut lo_start = g_lo - pad;
        let hi_start = g_hi + pad;
        let mut out = Vec::with_capacity(k);
        for idx in 0..k {
            let mut lo = lo_start;
            let mut hi = hi_start;
            for _ in 0..400 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if hi - lo <= 2.0 * f64::EPSILON * (lo.abs() + hi.abs()) + self.pivmin() {
                    break;
                }
                if self.sturm_count(mid) > idx {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            out.push(0.5 * (lo + hi));
            // Next eigenvalue is not below the current lower bracket.
            lo_start = lo;
        }
        out
    }

    /// `y = T x`
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        let n = self.len();
        for i in 0..n {
            let mut s = self.diag[i] * x[i];
            if i > 0 {
                s += self.off[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                s += self.off[i] * x[i + 1];
            }
            y[i] = s;
        }
    }

    /// `‖T v − λ v‖_∞`
    pub fn residual(&self, lambda: f64, v: &[f64]) -> f64 {
        let mut tv = vec![0.0; v.len()];
        self.apply(v, &mut tv);
        tv.iter()
            .zip(v)
            .map(|(t, x)| (t - lambda * x).abs())
            .fold(0.0, f64::max)
    }
}

/// Partially pivoted LU of a (shifted) tridiagonal matrix, LAPACK `gttrf`
/// layout.
struct TridiagLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagLu {
    fn factor(t: &SymTridiagonal, shift: f64, tiny: f64) -> Self {
        let n = t.len();
        let mut dl = t.off.clone();
        let mut du = t.off.clone();
        let mut d: Vec<f64> = t.diag.iter().map(|x| x - shift).collect();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swapped = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    d[i] = tiny;
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        if d[n - 1] == 0.0 {
            d[n - 1] = tiny;
        }
        for x in d.iter_mut() {
            if x.abs() < tiny {
                *x = tiny.copysign(*x);
            }
        }
        Self { dl, d, du, du2, swapped }
    }

    fn solve(&self, b: &mut [f64]) {
        let n = self.d.len();
        for i in 0..n - 1 {
            if self.swapped[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[n - 1] /= self.d[n - 1];
        if n > 1 {
            b[n - 2] = (b[n - 2] - self.du[n - 2] * b[n - 1]) / self.d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }
}

fn start_vector(n: usize, seed: u64) -> Vec<f64> {
    // xorshift; any vector with components along every eigenvector works.
    let mut state = 0x9E37_79B9_7F4A_7C15_u64 ^ seed.wrapping_mul(0xD1B5_4A32_D192_ED03);
    (0..n)
        .map(|_| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            0.5 + (state >> 11) as f64 / (1u64 << 53) as f64
        })
        .collect()
}

fn normalise(v: &mut [f64]) -> f64 {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    norm
}

fn orthogonalise(v: &mut [f64], basis: &[Vec<f64>]) {
    // Two passes of classical Gram–Schmidt.
    for _ in 0..2 {
        for b in basis {
            let dot: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
            v.iter_mut().zip(b).for_each(|(x, y)| *x -= dot * y);
        }
    }
}

/// Outcome of inverse iteration for one eigenvalue.
#[derive(Debug, Clone)]
pub struct EigenVector {
    pub vector: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
}

/// Inverse iteration for each eigenvalue in `eigenvalues`, returning
/// Euclidean-normalised vectors orthogonal to each other.
pub fn inverse_iteration(
    t: &SymTridiagonal,
    eigenvalues: &[f64],
    max_iterations: usize,
) -> Result<Vec<EigenVector>, OracleError> {
    let n = t.len();
    let norm = t.norm_bound().max(f64::MIN_POSITIVE);
    let tiny = f64::EPSILON * norm;
    let tol = 1e3 * f64::EPSILON * norm;
    let mut found: Vec<Vec<f64>> = Vec::with_capacity(eigenvalues.len());
    let mut out = Vec::with_capacity(eigenvalues.len());

    for (level, &lambda) in eigenvalues.iter().enumerate() {
        let lu = TridiagLu::factor(t, lambda, tiny);
        let mut v = start_vector(n, level as u64 + 1);
        orthogonalise(&mut v, &found);
        normalise(&mut v);
        let mut converged_at = None;
        let mut residual = f64::INFINITY;
        let mut iterations = 0;
        while iterations < max_iterations {
            iterations += 1;
            lu.solve(&mut v);
            orthogonalise(&mut v, &found);
            if normalise(&mut v) == 0.0 || v.iter().any(|x| !x.is_finite()) {
                v = start_vector(n, 1000 + level as u64 + iterations as u64);
                orthogonalise(&mut v, &found);
                normalise(&mut v);
                continue;
            }
            residual = t.residual(lambda, &v);
            if residual <= tol {
                match converged_at {
                    // one extra sweep after the residual test first passes
                    Some(_) => break,
                    None => converged_at = Some(iterations),
                }
            }
        }
        if converged_at.is_none() {
            return Err(OracleError::NonConvergence {
                level,
                iterations,
                residual,
            });
        }
        found.push(v.clone());
        out.push(EigenVector {
            vector: v,
            residual,
            iterations,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn chain(n: usize) -> SymTridiagonal {
        SymTridiagonal::new(vec![2.0; n], vec![-1.0; n - 1])
    }

    #[test]
    fn sturm_count_two_by_two() {
        // [[1,-1],[-1,3]] has eigenvalues 2 ∓ √2
        let t = SymTridiagonal::new(vec![1.0, 3.0], vec![-1.0]);
        assert_eq!(t.sturm_count(0.0), 0);
        assert_eq!(t.sturm_count(1.0), 1);
        assert_eq!(t.sturm_count(4.0), 2);
        let ev = t.lowest_eigenvalues(2);
        assert!((ev[0] - (2.0 - 2.0_f64.sqrt())).abs() < 1e-15);
        assert!((ev[1] - (2.0 + 2.0_f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn discrete_laplacian_spectrum() {
        let n = 200;
        let t = chain(n);
        let ev = t.lowest_eigenvalues(5);
        for (j, e) in ev.iter().enumerate() {
            let exact = 2.0 - 2.0 * ((j + 1) as f64 * PI / (n + 1) as f64).cos();
            assert!((e - exact).abs() < 1e-14, "{j}: {e} vs {exact}");
        }
        let vecs = inverse_iteration(&t, &ev, 30).unwrap();
        for (j, ev) in vecs.iter().enumerate() {
            let mut exact: Vec<f64> = (1..=n)
                .map(|i| (i as f64 * (j + 1) as f64 * PI / (n + 1) as f64).sin())
                .collect();
            normalise(&mut exact);
            let dot: f64 = ev.vector.iter().zip(&exact).map(|(a, b)| a * b).sum();
            assert!((dot.abs() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn exactly_degenerate_blocks_give_orthogonal_vectors() {
        // Two decoupled identical chains: every eigenvalue is doubled.
        let n = 40;
        let mut off = vec![-1.0; 2 * n - 1];
        off[n - 1] = 0.0;
        let t = SymTridiagonal::new(vec![2.0; 2 * n], off);
        let ev = t.lowest_eigenvalues(2);
        assert!((ev[0] - ev[1]).abs() < 1e-14);
        let vecs = inverse_iteration(&t, &ev, 30).unwrap();
        let dot: f64 = vecs[0].vector.iter().zip(&vecs[1].vector).map(|(a, b)| a * b).sum();
        assert!(dot.abs() < 1e-12);
        assert!(vecs.iter().all(|v| v.residual < 1e-12));
    }

    #[test]
    fn lu_solve_matches_dense() {
        let t = SymTridiagonal::new(vec![0.1, 3.0, -2.0, 5.0, 0.5], vec![4.0, 1.0, -3.0, 2.0]);
        let lu = TridiagLu::factor(&t, 0.3, 1e-300);
        let x_true = [1.0, -2.0, 0.5, 3.0, -1.0];
        let shifted = SymTridiagonal::new(t.diag.iter().map(|d| d - 0.3).collect(), t.off.clone());
        let mut b = vec![0.0; 5];
        shifted.apply(&x_true, &mut b);
        lu.solve(&mut b);
        for (a, e) in b.iter().zip(x_true) {
            assert!((a - e).abs() < 1e-12);
        }
    }
}
