//! The equispaced Vandermonde matrix `V_{ij} = ((i−1)/k)^{j−1}`: its
//! spectrum and determinant, and the grid-dominance bound for polynomials
//! sampled on `{0, 1/k, …, 1}`.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::seed::rng_for;

/// Largest supported `k`. Beyond it `2^{−2k²}` leaves double range and the
/// matrix is too ill-conditioned for trustworthy small singular values.
pub const MAX_K: usize = 12;

const JACOBI_TOLERANCE: f64 = 1e-13;
const MAX_SWEEPS: usize = 100;

/// Row-major square matrix.
pub type Matrix = Vec<Vec<f64>>;

fn check_k(k: usize) -> Result<()> {
    if k == 0 || k > MAX_K {
        return Err(Error::OutOfRange(format!(
            "k must lie in 1..={MAX_K}, got {k}"
        )));
    }
    Ok(())
}

/// The `(k+1)×(k+1)` matrix with entries `((i−1)/k)^{j−1}`, 1-indexed.
pub fn build_vandermonde(k: usize) -> Result<Matrix> {
    check_k(k)?;
    Ok((0..=k)
        .map(|i| {
            let x = i as f64 / k as f64;
            (0..=k).map(|j| x.powi(j as i32)).collect()
        })
        .collect())
}

/// One-sided (Hestenes) Jacobi: orthogonalizes the columns of `a` by plane
/// rotations; the final column norms are the singular values. Returns them
/// ascending with the number of sweeps used.
pub fn jacobi_singular_values(a: &Matrix) -> Result<(Vec<f64>, usize)> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    // column-major working copy
    let mut u: Vec<Vec<f64>> = (0..cols)
        .map(|j| (0..rows).map(|i| a[i][j]).collect())
        .collect();
    let dot = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>();
    for sweep in 1..=MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in p + 1..cols {
                let alpha = dot(&u[p], &u[p]);
                let beta = dot(&u[q], &u[q]);
                let gamma = dot(&u[p], &u[q]);
                if gamma == 0.0 || gamma.abs() <= JACOBI_TOLERANCE * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (head, tail) = u.split_at_mut(q);
                for (x, y) in head[p].iter_mut().zip(tail[0].iter_mut()) {
                    (*x, *y) = (c * *x - s * *y, s * *x + c * *y);
                }
            }
        }
        if !rotated {
            let mut sigma: Vec<f64> = u.iter().map(|col| dot(col, col).sqrt()).collect();
            sigma.sort_by(f64::total_cmp);
            return Ok((sigma, sweep));
        }
    }
    Err(Error::Numeric(format!(
        "Jacobi SVD did not converge in {MAX_SWEEPS} sweeps"
    )))
}

/// `|det a|` by LU factorization with partial pivoting.
pub fn lu_det_abs(a: &Matrix) -> f64 {
    let n = a.len();
    let mut m = a.clone();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| m[x][col].abs().total_cmp(&m[y][col].abs()))
            .expect("non-empty range");
        if m[pivot][col] == 0.0 {
            return 0.0;
        }
        m.swap(col, pivot);
        det *= m[col][col];
        let (upper, lower) = m.split_at_mut(col + 1);
        let pivot_row = &upper[col];
        for row in lower {
            let factor = row[col] / pivot_row[col];
            for (x, y) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= factor * y;
            }
        }
    }
    det.abs()
}

/// `Π_{1≤i<j≤k+1} (j−i)/k`.
pub fn det_product_formula(k: usize) -> f64 {
    let mut acc = 1.0;
    for i in 1..=k + 1 {
        for j in i + 1..=k + 1 {
            acc *= (j - i) as f64 / k as f64;
        }
    }
    acc
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub k: usize,
    /// `λ₁ ≤ … ≤ λ_{k+1}`.
    pub singular_values: Vec<f64>,
    pub det_abs: f64,
    pub product_formula: f64,
    pub sweeps: usize,
    /// `λ_{k+1} ≤ k+1`.
    pub max_bound_holds: bool,
    /// `log₂ λ₁`, compared against `−2k²`.
    pub log2_min: f64,
    pub min_bound_holds: bool,
    /// `| |det V| − product | / product`.
    pub det_rel_error: f64,
    /// `| Π λᵢ − |det V| | / |det V|`.
    pub spectrum_det_rel_error: f64,
}

impl SpectrumReport {
    pub fn all_hold(&self, rel_tol: f64) -> bool {
        self.max_bound_holds
            && self.min_bound_holds
            && self.det_rel_error <= rel_tol
            && self.spectrum_det_rel_error <= rel_tol
    }
}

pub fn spectrum(k: usize) -> Result<SpectrumReport> {
    let v = build_vandermonde(k)?;
    let (singular_values, sweeps) = jacobi_singular_values(&v)?;
    let det_abs = lu_det_abs(&v);
    let product_formula = det_product_formula(k);
    let largest = *singular_values.last().expect("k ≥ 1");
    let log2_min = singular_values[0].log2();
    let spectrum_product: f64 = singular_values.iter().product();
    Ok(SpectrumReport {
        k,
        max_bound_holds: largest <= (k + 1) as f64,
        min_bound_holds: log2_min >= -2.0 * (k * k) as f64,
        log2_min,
        det_rel_error: (det_abs - product_formula).abs() / product_formula,
        spectrum_det_rel_error: (spectrum_product - det_abs).abs() / det_abs,
        singular_values,
        det_abs,
        product_formula,
        sweeps,
    })
}

/// `f(q) = a₀ + a₁q + … + a_k q^k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridPolynomial {
    k: usize,
    coeffs: Vec<f64>,
}

impl GridPolynomial {
    /// `coeffs` holds `a₀..a_k`, so `k = coeffs.len() − 1`.
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::OutOfRange(
                "a grid polynomial needs at least a₀ and a₁".into(),
            ));
        }
        Ok(GridPolynomial {
            k: coeffs.len() - 1,
            coeffs,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn eval(&self, q: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, a| acc * q + a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridCheck {
    pub max_abs_on_grid: f64,
    /// `|a₁|·2^{−3k²}`.
    pub bound: f64,
    pub holds: bool,
}

/// Compares `max_{q∈{0,1/k,…,1}} |f(q)|` with `|a₁|·2^{−3k²}`.
pub fn grid_dominance_check(poly: &GridPolynomial) -> GridCheck {
    let k = poly.k;
    let max_abs_on_grid = (0..=k)
        .map(|j| poly.eval(j as f64 / k as f64).abs())
        .fold(0.0, f64::max);
    let exponent = 3 * k * k;
    let bound = if exponent > 1100 {
        0.0
    } else {
        poly.coeffs[1].abs() * 2f64.powi(-(exponent as i32))
    };
    GridCheck {
        max_abs_on_grid,
        bound,
        holds: max_abs_on_grid >= bound,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridTrialSummary {
    pub k: usize,
    pub trials: usize,
    pub failures: usize,
    /// Smallest `max|f| / bound` seen over trials with a non-zero bound.
    pub min_ratio: f64,
}

/// Checks `trials` polynomials with coefficients uniform in `[−1, 1]`.
pub fn random_grid_trials(k: usize, trials: usize, seed: u64) -> Result<GridTrialSummary> {
    if k == 0 {
        return Err(Error::OutOfRange("k must be at least 1".into()));
    }
    let checks: Vec<GridCheck> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = rng_for(seed, &[k as u64, t as u64]);
            let coeffs = (0..=k).map(|_| rng.gen_range(-1.0..=1.0)).collect();
            grid_dominance_check(&GridPolynomial::new(coeffs).expect("k ≥ 1"))
        })
        .collect();
    let min_ratio = checks
        .iter()
        .filter(|c| c.bound > 0.0)
        .map(|c| c.max_abs_on_grid / c.bound)
        .fold(f64::INFINITY, f64::min);
    Ok(GridTrialSummary {
        k,
        trials,
        failures: checks.iter().filter(|c| !c.holds).count(),
        min_ratio,
    })
}
