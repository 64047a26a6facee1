//! Linear-programming search for strictly subadditive labelings.

use microlp::{ComparisonOp, LinearExpr, OptimizationDirection, Problem};

/// Slack below which the optimum counts as zero.
pub const FEASIBILITY_EPS: f64 = 1e-9;

/// Maximises `s` subject to `2ν_v − Σ_in ν ≥ s`, `2ν_v − Σ_out ν ≥ s`,
/// `ν_v ≥ s` and `0 ≤ ν ≤ 1`. Returns `(ν, s)` at the optimum.
pub fn max_slack(n: usize, in_nbrs: &[Vec<(usize, u32)>], out_nbrs: &[Vec<(usize, u32)>]) -> Option<(Vec<f64>, f64)> {
    if n == 0 {
        return Some((Vec::new(), 1.0));
    }
    let mut p = Problem::new(OptimizationDirection::Maximize);
    let nu: Vec<_> = (0..n).map(|_| p.add_var(0.0, (0.0, 1.0))).collect();
    let s = p.add_var(1.0, (-4.0, 1.0));
    for v in 0..n {
        for nbrs in [&in_nbrs[v], &out_nbrs[v]] {
            let mut e = LinearExpr::empty();
            let mut self_coeff = 2.0;
            for &(u, k) in nbrs.iter() {
                if u == v {
                    self_coeff -= k as f64;
                } else {
                    e.add(nu[u], -(k as f64));
                }
            }
            e.add(nu[v], self_coeff);
            e.add(s, -1.0);
            p.add_constraint(e, ComparisonOp::Ge, 0.0);
        }
        let mut e = LinearExpr::empty();
        e.add(nu[v], 1.0);
        e.add(s, -1.0);
        p.add_constraint(e, ComparisonOp::Ge, 0.0);
    }
    let sol = p.solve().ok()?;
    Some((nu.iter().map(|&x| *sol.var_value(x)).collect(), *sol.var_value(s)))
}

/// A strictly subadditive labeling, when the optimum slack is positive.
pub fn find_subadditive(n: usize, in_nbrs: &[Vec<(usize, u32)>], out_nbrs: &[Vec<(usize, u32)>]) -> Option<Vec<f64>> {
    match max_slack(n, in_nbrs, out_nbrs) {
        Some((nu, s)) if s > FEASIBILITY_EPS => Some(nu),
        _ => None,
    }
}

/// Vinberg's test on a simple undirected graph: a labeling with
/// `2ν_v > Σ_{u ~ v} ν_u` and `ν > 0` exists iff every component is ADE.
pub fn vinberg_feasible(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut nbrs = vec![Vec::new(); n];
    for &(a, b) in edges {
        nbrs[a].push((b, 1));
        nbrs[b].push((a, 1));
    }
    find_subadditive(n, &nbrs, &nbrs).is_some()
}
