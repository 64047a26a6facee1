//! Fixed points of `Zρ(v) = sqrt(Π_{u→v} ρ(u) + Π_{v→w} ρ(w))`, strictly
//! subadditive labelings, and the common Perron eigenvector of `A_Γ`, `A_Δ`.

use crate::ade::is_admissible;
use crate::graph::BipartiteQuiver;
use crate::lp;
use crate::tropical::{self, TropicalError};
use nalgebra::{DMatrix, DVector};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::PI;
use thiserror::Error;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const MAX_ITERATIONS: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EquilibriumError {
    #[error("no strictly subadditive labeling exists")]
    NoSubadditiveLabeling,
    #[error("no fixed point with values >= 1: the iteration from ρ ≡ 1 exceeded e^{log_bound} after {iterations} steps")]
    Diverged { iterations: usize, log_bound: f64 },
    #[error("fixed point has a value {value} <= 1 at `{vertex}`")]
    NotAboveOne { vertex: String, value: f64 },
    #[error("no convergence within {0} iterations")]
    NoConvergence(usize),
    #[error("the input is not admissible, so no (h, h′) is defined")]
    NotAdmissible,
    #[error("eigenvector check failed: residual {residual:e} exceeds {tol:e}")]
    Residual { residual: f64, tol: f64 },
    #[error("period-sum labeling needs a tropical period, and N = {0} is not one")]
    NotAPeriod(usize),
    #[error(transparent)]
    Tropical(#[from] TropicalError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LabelRole {
    Subadditive,
    FixedPoint,
}

/// Real vertex labels.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Labeling {
    pub role: LabelRole,
    pub values: Vec<f64>,
}

impl Labeling {
    /// JSON object mapping vertex id to value.
    pub fn to_json(&self, ids: &[String]) -> String {
        let map: BTreeMap<&str, f64> = ids.iter().map(String::as_str).zip(self.values.iter().copied()).collect();
        serde_json::to_string_pretty(&map).expect("finite labels serialize")
    }
}

fn log_sum_exp(a: f64, b: f64) -> f64 {
    let m = a.max(b);
    m + ((a - m).exp() + (b - m).exp()).ln()
}

fn weighted(x: &[f64], nbrs: &[(usize, u32)]) -> f64 {
    nbrs.iter().map(|&(u, k)| k as f64 * x[u]).sum()
}

/// One application of `Z`.
pub fn z_apply(q: &BipartiteQuiver, rho: &[f64]) -> Vec<f64> {
    (0..q.len())
        .map(|v| {
            let a: f64 = q.in_neighbors(v).iter().map(|&(u, k)| rho[u].powi(k as i32)).product();
            let b: f64 = q.out_neighbors(v).iter().map(|&(w, k)| rho[w].powi(k as i32)).product();
            (a + b).sqrt()
        })
        .collect()
}

/// `Z` in logarithmic coordinates `ℓ = ln ρ`.
pub fn z_apply_log(q: &BipartiteQuiver, l: &[f64]) -> Vec<f64> {
    (0..q.len()).map(|v| 0.5 * log_sum_exp(weighted(l, q.in_neighbors(v)), weighted(l, q.out_neighbors(v)))).collect()
}

/// `max_v |ρ(v)² − Π − Π| / ρ(v)²`, computed from `ℓ = ln ρ`.
pub fn relative_residual_log(q: &BipartiteQuiver, l: &[f64]) -> f64 {
    (0..q.len())
        .map(|v| {
            let a = weighted(l, q.in_neighbors(v)) - 2.0 * l[v];
            let b = weighted(l, q.out_neighbors(v)) - 2.0 * l[v];
            (1.0 - a.exp() - b.exp()).abs()
        })
        .fold(0.0, f64::max)
}

/// Minimum of `2ν(v) − Σ_in ν` and `2ν(v) − Σ_out ν` over all vertices.
pub fn subadditive_slack(q: &BipartiteQuiver, nu: &[f64]) -> f64 {
    (0..q.len())
        .map(|v| (2.0 * nu[v] - weighted(nu, q.in_neighbors(v))).min(2.0 * nu[v] - weighted(nu, q.out_neighbors(v))))
        .fold(f64::INFINITY, f64::min)
}

/// Both strict inequalities at every vertex, and `ν > 0`.
pub fn check_subadditive(q: &BipartiteQuiver, nu: &[f64]) -> bool {
    nu.len() == q.len() && nu.iter().all(|&x| x > 0.0) && (q.is_empty() || subadditive_slack(q, nu) > 0.0)
}

/// Exact version of [`check_subadditive`].
pub fn check_subadditive_exact(q: &BipartiteQuiver, nu: &[BigInt]) -> bool {
    let sum = |nbrs: &[(usize, u32)]| nbrs.iter().fold(BigInt::zero(), |acc, &(u, k)| acc + &nu[u] * k);
    nu.len() == q.len()
        && nu.iter().all(|x| x.is_positive())
        && (0..q.len()).all(|v| {
            let two = &nu[v] * 2u32;
            two > sum(q.in_neighbors(v)) && two > sum(q.out_neighbors(v))
        })
}

/// A strictly subadditive labeling found by linear programming.
pub fn lp_subadditive(q: &BipartiteQuiver) -> Option<Labeling> {
    let ins: Vec<Vec<(usize, u32)>> = (0..q.len()).map(|v| q.in_neighbors(v).to_vec()).collect();
    let outs: Vec<Vec<(usize, u32)>> = (0..q.len()).map(|v| q.out_neighbors(v).to_vec()).collect();
    lp::find_subadditive(q.len(), &ins, &outs)
        .filter(|nu| check_subadditive(q, nu))
        .map(|values| Labeling { role: LabelRole::Subadditive, values })
}

/// Result of the common-eigenvector construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigen {
    pub labeling: Labeling,
    pub lambda_gamma: f64,
    pub lambda_delta: f64,
    pub residual: f64,
}

/// Positive common eigenvector of `A_Γ` and `A_Δ` with eigenvalues
/// `2cos(π/h)` and `2cos(π/h′)`: power iteration on `A_Γ + A_Δ + I`, one
/// combined component at a time, each scaled to maximum 1.
pub fn common_eigenvector(g: &BipartiteQuiver, tol: f64) -> Result<Eigen, EquilibriumError> {
    let report = is_admissible(g);
    let (h, hp) = report.coxeter_pair().ok_or(EquilibriumError::NotAdmissible)?;
    let lg = 2.0 * (PI / h as f64).cos();
    let ld = 2.0 * (PI / hp as f64).cos();
    let n = g.len();
    let mut x = vec![0.0; n];
    for comp in g.components() {
        let mut cur: Vec<f64> = vec![1.0; comp.len()];
        let pos: BTreeMap<usize, usize> = comp.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        for _ in 0..MAX_ITERATIONS {
            let mut next = cur.clone();
            for (i, &v) in comp.iter().enumerate() {
                for &(u, k) in g.gamma_neighbors(v).iter().chain(g.delta_neighbors(v)) {
                    next[i] += k as f64 * cur[pos[&u]];
                }
            }
            let m = next.iter().cloned().fold(0.0, f64::max);
            next.iter_mut().for_each(|y| *y /= m);
            let step = next.iter().zip(&cur).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            cur = next;
            if step < 1e-15 {
                break;
            }
        }
        for (i, &v) in comp.iter().enumerate() {
            x[v] = cur[i];
        }
    }
    let residual = (0..n)
        .map(|v| {
            let rg = (weighted(&x, g.gamma_neighbors(v)) - lg * x[v]).abs();
            let rd = (weighted(&x, g.delta_neighbors(v)) - ld * x[v]).abs();
            rg.max(rd)
        })
        .fold(0.0, f64::max);
    if residual > tol || x.iter().any(|&y| y <= 0.0) {
        return Err(EquilibriumError::Residual { residual, tol });
    }
    Ok(Eigen { labeling: Labeling { role: LabelRole::Subadditive, values: x }, lambda_gamma: lg, lambda_delta: ld, residual })
}

/// A fixed point together with its diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedPoint {
    pub labeling: Labeling,
    /// `max_v |ρ(v)² − Π − Π| / ρ(v)²`
    pub residual: f64,
    pub iterations: usize,
    /// Whether the first step satisfied `ρ₀ < Zρ₁ < ρ₁`.
    pub sandwich: bool,
}

/// Newton's method on `F(ℓ)_v = 2ℓ_v − ln(e^{Σ_in ℓ} + e^{Σ_out ℓ})`.
fn newton_polish(q: &BipartiteQuiver, l: &mut Vec<f64>, target: f64) -> bool {
    let n = q.len();
    for _ in 0..50 {
        if relative_residual_log(q, l) <= target {
            return true;
        }
        let mut jac = DMatrix::<f64>::zeros(n, n);
        let mut f = DVector::<f64>::zeros(n);
        for v in 0..n {
            let a = weighted(l, q.in_neighbors(v));
            let b = weighted(l, q.out_neighbors(v));
            let s = log_sum_exp(a, b);
            let pa = (a - s).exp();
            f[v] = 2.0 * l[v] - s;
            jac[(v, v)] += 2.0;
            for &(u, k) in q.in_neighbors(v) {
                jac[(v, u)] -= pa * k as f64;
            }
            for &(w, k) in q.out_neighbors(v) {
                jac[(v, w)] -= (1.0 - pa) * k as f64;
            }
        }
        let step = match jac.lu().solve(&f) {
            Some(s) => s,
            None => return false,
        };
        let cand: Vec<f64> = l.iter().zip(step.iter()).map(|(x, d)| x - d).collect();
        if cand.iter().any(|&x| !(x > 0.0) || !x.is_finite()) || relative_residual_log(q, &cand) >= relative_residual_log(q, l) {
            return relative_residual_log(q, l) <= target;
        }
        *l = cand;
    }
    relative_residual_log(q, l) <= target
}

fn finish(q: &BipartiteQuiver, l: Vec<f64>, iterations: usize, sandwich: bool) -> Result<FixedPoint, EquilibriumError> {
    let residual = relative_residual_log(q, &l);
    let values: Vec<f64> = l.iter().map(|x| x.exp()).collect();
    if let Some(v) = (0..q.len()).find(|&v| values[v] <= 1.0) {
        return Err(EquilibriumError::NotAboveOne { vertex: q.id(v).to_string(), value: values[v] });
    }
    Ok(FixedPoint { labeling: Labeling { role: LabelRole::FixedPoint, values }, residual, iterations, sandwich })
}

/// Finds `ρ > 1` with `Zρ = ρ`.
///
/// Starting from a strictly subadditive `ν` with minimal slack `s`, the map
/// `ρ₁ = α^ν` with `α = 2e^{1/s}` satisfies `Zρ₁ < ρ₁`, and iterating `Z`
/// decreases monotonically to a fixed point. The iteration runs in log
/// coordinates and is polished with Newton steps. Without a subadditive
/// labeling, the upward iteration from `ρ ≡ 1` is tried; its divergence rules
/// out any fixed point `≥ 1`.
pub fn find_fixed_point(q: &BipartiteQuiver, tol: f64) -> Result<FixedPoint, EquilibriumError> {
    if q.is_empty() {
        return finish(q, Vec::new(), 0, true);
    }
    let seed = common_eigenvector(q, 1e-9).map(|e| e.labeling).ok().or_else(|| lp_subadditive(q));
    match seed {
        Some(nu) => descend(q, &nu.values, tol),
        None => ascend(q, tol),
    }
}

fn descend(q: &BipartiteQuiver, nu: &[f64], tol: f64) -> Result<FixedPoint, EquilibriumError> {
    let slack = subadditive_slack(q, nu);
    if !(slack > 0.0) {
        return Err(EquilibriumError::NoSubadditiveLabeling);
    }
    let log_alpha = 2f64.ln() + 1.0 / slack;
    let mut l: Vec<f64> = nu.iter().map(|x| x * log_alpha).collect();
    let first = z_apply_log(q, &l);
    let sandwich = first.iter().zip(&l).all(|(z, x)| *z > 0.0 && z < x);
    for it in 1..=MAX_ITERATIONS {
        let next = z_apply_log(q, &l);
        let step = next.iter().zip(&l).map(|(a, b)| (a - b).abs() / b.abs().max(1.0)).fold(0.0, f64::max);
        l = next;
        if step < 1e-4 && newton_polish(q, &mut l, tol * 1e-2) {
            return finish(q, l, it, sandwich);
        }
        if step < tol * 1e-2 {
            return finish(q, l, it, sandwich);
        }
    }
    Err(EquilibriumError::NoConvergence(MAX_ITERATIONS))
}

fn ascend(q: &BipartiteQuiver, tol: f64) -> Result<FixedPoint, EquilibriumError> {
    const LOG_BOUND: f64 = 50.0;
    let mut l = vec![0.0; q.len()];
    for it in 1..=MAX_ITERATIONS {
        let next = z_apply_log(q, &l);
        let step = next.iter().zip(&l).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        l = next;
        if l.iter().any(|&x| x > LOG_BOUND) {
            return Err(EquilibriumError::Diverged { iterations: it, log_bound: LOG_BOUND });
        }
        if step < tol * 1e-2 {
            return finish(q, l, it, false);
        }
    }
    Err(EquilibriumError::NoConvergence(MAX_ITERATIONS))
}

/// `ν(v) = Σ_u Σ_{j<N} 𝔱^{δ_u}_v(2j + ε_v)`.
pub fn period_sum_labeling(g: &BipartiteQuiver, n: usize) -> Result<Vec<BigInt>, EquilibriumError> {
    if !tropical::verify_tropical_periodicity(g, n)? {
        return Err(EquilibriumError::NotAPeriod(n));
    }
    let sweep = tropical::delta_sweep(g, 0, 2 * n as i64)?;
    Ok((0..g.len())
        .map(|v| {
            let e = g.eps()[v] as i64;
            sweep.iter().map(|tr| (0..n as i64).fold(BigInt::zero(), |acc, j| acc + tr.value(v, 2 * j + e))).sum()
        })
        .collect())
}

/// `b^u(v)` for a single source.
pub fn period_sum(g: &BipartiteQuiver, u: usize, n: usize) -> Result<Vec<BigInt>, EquilibriumError> {
    let tr = tropical::trajectory::<BigInt>(g, &tropical::delta(g.len(), u), 0, 2 * n as i64)?;
    Ok((0..g.len())
        .map(|v| {
            let e = g.eps()[v] as i64;
            (0..n as i64).fold(BigInt::zero(), |acc, j| acc + tr.value(v, 2 * j + e))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ade::AdeType;
    use crate::families::tensor;

    #[test]
    fn golden_ratio_fixed_point() {
        let g = tensor(AdeType::a(2), AdeType::a(1));
        let fp = find_fixed_point(&g, DEFAULT_TOL).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        for x in &fp.labeling.values {
            assert!((x - phi).abs() < 1e-10);
        }
        assert!(fp.sandwich);
    }

    #[test]
    fn z_of_ones_is_sqrt_two() {
        let g = tensor(AdeType::a(3), AdeType::a(2));
        for x in z_apply(&g, &vec![1.0; 6]) {
            assert!((x - 2f64.sqrt()).abs() < 1e-15);
        }
    }

    #[test]
    fn single_vertex() {
        let g = tensor(AdeType::a(1), AdeType::a(1));
        let fp = find_fixed_point(&g, DEFAULT_TOL).unwrap();
        assert!((fp.labeling.values[0] - 2f64.sqrt()).abs() < 1e-12);
        let e = common_eigenvector(&g, DEFAULT_TOL).unwrap();
        assert_eq!((e.lambda_gamma.abs() < 1e-15, e.lambda_delta.abs() < 1e-15), (true, true));
    }
}
