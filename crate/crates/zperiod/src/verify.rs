//! Runs the five equivalent conditions (admissible, subadditive labeling,
//! fixed point, tropical periodicity, birational periodicity) on one input.

use crate::ade::is_admissible;
use crate::birational::{verify_birational_periodicity, BirationalError};
use crate::equilibrium::{find_fixed_point, lp_subadditive};
use crate::graph::BipartiteQuiver;
use crate::tropical::{minimal_period, verify_tropical_periodicity};
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use std::time::Instant;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("the quiver is not bipartite recurrent (Γ and Δ do not commute)")]
    NotRecurrent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    True,
    False,
    Skipped,
}

impl From<bool> for Verdict {
    fn from(b: bool) -> Self {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConditionResult {
    pub name: &'static str,
    pub verdict: Verdict,
    pub detail: String,
    pub millis: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    /// Term budget for the symbolic T-system.
    pub budget_terms: usize,
    /// Largest half-period `N` searched when no Coxeter pair is available.
    pub period_cap: usize,
    /// Size limit, in bits, for the numeric T-system used without a Coxeter pair.
    pub value_bits: u64,
    /// Tolerance for the fixed-point residual.
    pub tol: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { budget_terms: 20_000, period_cap: 64, value_bits: 1 << 20, tol: 1e-10 }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyAllReport {
    pub h: Option<u32>,
    pub h_prime: Option<u32>,
    /// Full tropical period `2N` that was confirmed, if any.
    pub tropical_period: Option<usize>,
    pub conditions: Vec<ConditionResult>,
    pub total_millis: f64,
}

impl VerifyAllReport {
    fn executed(&self) -> impl Iterator<Item = Verdict> + '_ {
        self.conditions.iter().map(|c| c.verdict).filter(|v| *v != Verdict::Skipped)
    }

    /// Executed verdicts all agree.
    pub fn consistent(&self) -> bool {
        let mut it = self.executed();
        match it.next() {
            Some(first) => it.all(|v| v == first),
            None => true,
        }
    }

    /// 0 when every executed condition holds, 1 when none does, 3 otherwise.
    pub fn exit_code(&self) -> i32 {
        if !self.consistent() {
            3
        } else if self.executed().next() == Some(Verdict::False) {
            1
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn timed(name: &'static str, f: impl FnOnce() -> (Verdict, String)) -> ConditionResult {
    let start = Instant::now();
    let (verdict, detail) = f();
    ConditionResult { name, verdict, detail, millis: start.elapsed().as_secs_f64() * 1e3 }
}

/// Exact T-system evaluated at `x ≡ 1`: the least `N ≤ cap` with every
/// `T_v(ε_v + 2N) = 1`, `Ok(None)` if there is none, `Err(bits)` when the
/// values outgrow `max_bits`.
pub fn scalar_period(g: &BipartiteQuiver, cap: usize, max_bits: u64) -> Result<Option<usize>, u64> {
    let n = g.len();
    let one = BigRational::one();
    let mut cur = vec![one.clone(); n];
    let prod = |s: &[BigRational], nbrs: &[(usize, u32)]| {
        nbrs.iter().fold(BigRational::one(), |acc, &(u, k)| acc * num_traits::pow(s[u].clone(), k as usize))
    };
    for k in 1..=cap {
        for t in [2 * k as i64, 2 * k as i64 + 1] {
            let color = (t % 2) as u8;
            let prev = cur.clone();
            for v in (0..n).filter(|&v| g.eps()[v] == color) {
                let num = prod(&prev, g.gamma_neighbors(v)) + prod(&prev, g.delta_neighbors(v));
                debug_assert!(!prev[v].is_zero());
                cur[v] = num / &prev[v];
                let bits = cur[v].numer().bits().max(cur[v].denom().bits());
                if bits > max_bits {
                    return Err(bits);
                }
            }
        }
        if cur.iter().all(|x| *x == one) {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// Runs all five conditions. Conditions (1) to (4) always run; the symbolic
/// check (5) is marked skipped when it exceeds the term budget.
pub fn verify_all(g: &BipartiteQuiver, config: &VerifyConfig) -> Result<VerifyAllReport, VerifyError> {
    if !g.commutator().is_zero() {
        return Err(VerifyError::NotRecurrent);
    }
    let start = Instant::now();
    let mut conditions = Vec::with_capacity(5);

    let ade = is_admissible(g);
    let pair = ade.coxeter_pair();
    conditions.push(timed("admissible", || match (pair, &ade.failure_reason) {
        (Some((h, hp)), _) => (Verdict::True, format!("h = {h}, h' = {hp}")),
        (None, Some(reason)) => (Verdict::False, format!("{reason:?}")),
        (None, None) => (Verdict::False, "not admissible".into()),
    }));

    conditions.push(timed("subadditive_labeling", || match lp_subadditive(g) {
        Some(l) => (Verdict::True, format!("slack {:.3e}", crate::equilibrium::subadditive_slack(g, &l.values))),
        None => (Verdict::False, "linear program infeasible".into()),
    }));

    conditions.push(timed("fixed_point", || match find_fixed_point(g, config.tol) {
        Ok(fp) => (Verdict::True, format!("residual {:.3e} after {} iterations", fp.residual, fp.iterations)),
        Err(e) => (Verdict::False, e.to_string()),
    }));

    let mut tropical_period = None;
    conditions.push(timed("tropical_periodic", || {
        let r = match pair {
            Some((h, hp)) => verify_tropical_periodicity(g, (h + hp) as usize).map(|ok| ok.then_some((h + hp) as usize)),
            None => minimal_period(g, config.period_cap),
        };
        match r {
            Ok(Some(n)) => {
                tropical_period = Some(2 * n);
                (Verdict::True, format!("every δ-orbit returns after {} steps", 2 * n))
            }
            Ok(None) if pair.is_some() => (Verdict::False, "some δ-orbit does not return after 2(h+h') steps".into()),
            Ok(None) => (Verdict::False, format!("no period 2N with N <= {}", config.period_cap)),
            Err(e) => (Verdict::False, e.to_string()),
        }
    }));

    conditions.push(timed("birational_periodic", || match pair {
        Some((h, hp)) => match verify_birational_periodicity(g, (h + hp) as usize, config.budget_terms) {
            Ok(ok) => (ok.into(), format!("T_v(ε_v + {}) symbolic check", 2 * (h + hp))),
            Err(BirationalError::Budget { used, limit }) => (Verdict::Skipped, format!("term budget exhausted ({used} > {limit})")),
            Err(e) => (Verdict::False, e.to_string()),
        },
        None => match scalar_period(g, config.period_cap, config.value_bits) {
            Ok(Some(n)) => (Verdict::True, format!("x ≡ 1 returns after {} steps", 2 * n)),
            Ok(None) => (Verdict::False, format!("x ≡ 1 does not return within N <= {}", config.period_cap)),
            Err(bits) => (Verdict::Skipped, format!("values reached {bits} bits")),
        },
    }));

    Ok(VerifyAllReport {
        h: ade.h,
        h_prime: ade.h_prime,
        tropical_period,
        conditions,
        total_millis: start.elapsed().as_secs_f64() * 1e3,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ade::AdeType;
    use crate::families::tensor;

    #[test]
    fn tensor_a3_a2_is_all_true() {
        let g = tensor(AdeType::a(3), AdeType::a(2)).into_quiver();
        let r = verify_all(&g, &VerifyConfig::default()).unwrap();
        assert_eq!((r.h, r.h_prime, r.tropical_period), (Some(4), Some(3), Some(14)));
        assert!(r.conditions.iter().all(|c| c.verdict == Verdict::True), "{r:?}");
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn doubled_tensor_is_all_false() {
        let g = tensor(AdeType::a(2), AdeType::a(2)).into_quiver().scale_multiplicities(2);
        let r = verify_all(&g, &VerifyConfig { period_cap: 24, ..VerifyConfig::default() }).unwrap();
        assert!(r.conditions.iter().all(|c| c.verdict != Verdict::True), "{r:?}");
        assert_eq!(r.exit_code(), 1);
        assert!(scalar_period(&g, 100, 64).is_err());
    }

    #[test]
    fn exit_codes() {
        let c = |v| ConditionResult { name: "x", verdict: v, detail: String::new(), millis: 0.0 };
        let r = |vs: Vec<Verdict>| VerifyAllReport {
            h: None,
            h_prime: None,
            tropical_period: None,
            conditions: vs.into_iter().map(c).collect(),
            total_millis: 0.0,
        };
        assert_eq!(r(vec![Verdict::True, Verdict::Skipped]).exit_code(), 0);
        assert_eq!(r(vec![Verdict::False, Verdict::Skipped]).exit_code(), 1);
        assert_eq!(r(vec![Verdict::True, Verdict::False]).exit_code(), 3);
    }

    #[test]
    fn scalar_period_of_a_tensor() {
        let g = tensor(AdeType::a(3), AdeType::a(1)).into_quiver();
        // h + h' = 6 is a period; the minimal one may divide it
        let n = scalar_period(&g, 20, 1 << 16).unwrap().unwrap();
        assert_eq!(6 % n, 0);
    }
}
