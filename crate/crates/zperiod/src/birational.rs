//! The birational T-system in ℤ[x^±1], sample-point Y-systems, and the bridge
//! to the tropical system through Newton supports.

use crate::graph::BipartiteQuiver;
use crate::laurent::{LaurentError, LaurentPoly};
use crate::tropical::{self, TropicalError};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::fmt::Write as _;
use std::sync::Arc;
use thiserror::Error;

pub const DEFAULT_TERM_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BirationalError {
    #[error("the quiver is not recurrent (A_Γ and A_Δ do not commute)")]
    NotRecurrent,
    #[error("T_{vertex}({time}) is not a Laurent polynomial: the division left a remainder")]
    Remainder { vertex: String, time: i64 },
    #[error("term budget exceeded: {used} terms needed, {limit} allowed")]
    Budget { used: usize, limit: usize },
    #[error("sample point must be strictly positive with one value per vertex")]
    BadPoint,
    #[error("division by zero in the Y-system")]
    ZeroDivision,
    #[error("requested {requested} steps but only {available} were computed")]
    Horizon { requested: i64, available: i64 },
    #[error(transparent)]
    Tropical(#[from] TropicalError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
}

/// Degree range of one variable in a Laurent polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DegreePair {
    pub deg_min: i32,
    pub deg_max: i32,
}

/// `T_v(t)` for `0 ≤ t ≤ t_max`, stored with the carry convention of the
/// tropical engine (slice 1 holds the initial variables).
#[derive(Debug, Clone)]
pub struct TSystem {
    ids: Vec<String>,
    eps: Vec<u8>,
    slices: Vec<Vec<Arc<LaurentPoly>>>,
    terms: usize,
}

impl TSystem {
    pub fn t_max(&self) -> i64 {
        self.slices.len() as i64
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    /// `T_v(t)`; requires `0 ≤ t ≤ t_max` and `t + ε_v` even.
    pub fn get(&self, v: usize, t: i64) -> &LaurentPoly {
        assert!((t + self.eps[v] as i64) % 2 == 0, "t + ε_v must be even");
        assert!(t >= 0 && t <= self.t_max(), "time {t} outside 0..={}", self.t_max());
        &self.slices[(t.max(1) - 1) as usize][v]
    }

    /// Every produced `(v, t)` in time order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        (0..=self.t_max()).flat_map(move |t| (0..self.eps.len()).filter(move |&v| (t + self.eps[v] as i64) % 2 == 0).map(move |v| (v, t)))
    }

    pub fn term_count(&self) -> usize {
        self.terms
    }

    /// One line per `(v, t)`: `T_<id>(<t>) = <poly>`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (v, t) in self.entries() {
            let _ = writeln!(out, "T_{}({t}) = {}", self.ids[v], self.get(v, t).to_text(&self.ids));
        }
        out
    }
}

fn ensure_recurrent(g: &BipartiteQuiver) -> Result<(), BirationalError> {
    if g.commutator().is_zero() {
        Ok(())
    } else {
        Err(BirationalError::NotRecurrent)
    }
}

/// Product of neighbor values; fails once an intermediate polynomial has more
/// than `cap` terms.
fn product(slice: &[Arc<LaurentPoly>], nbrs: &[(usize, u32)], nvars: usize, cap: usize) -> Result<LaurentPoly, usize> {
    let mut acc = LaurentPoly::one(nvars);
    for &(u, k) in nbrs {
        for _ in 0..k {
            acc = acc.mul(&slice[u]);
            if acc.len() > cap {
                return Err(acc.len());
            }
        }
    }
    Ok(acc)
}

/// Runs `T_v(t+1) T_v(t−1) = Π_Γ T_u(t) + Π_Δ T_w(t)` from `T_v(ε_v) = x_v`.
/// Each division is checked to be exact. The total number of stored terms is
/// capped by `budget`; so is every intermediate product and numerator.
pub fn t_system_run(g: &BipartiteQuiver, t_max: i64, budget: usize) -> Result<TSystem, BirationalError> {
    ensure_recurrent(g)?;
    let n = g.len();
    let first: Vec<Arc<LaurentPoly>> = (0..n).map(|v| Arc::new(LaurentPoly::var(n, v))).collect();
    let mut terms = n;
    let mut slices = vec![first];
    for t in 2..=t_max {
        let color = (t % 2) as u8;
        let prev = slices.last().unwrap();
        let over = |used: usize| BirationalError::Budget { used, limit: budget };
        let updated: Vec<(usize, LaurentPoly)> = (0..n)
            .into_par_iter()
            .filter(|&v| g.eps()[v] == color)
            .map(|v| {
                let room = budget.saturating_sub(terms);
                let a = product(prev, g.gamma_neighbors(v), n, room).map_err(|k| over(terms + k))?;
                let b = product(prev, g.delta_neighbors(v), n, room).map_err(|k| over(terms + k))?;
                let num = a.add(&b);
                if num.len() > room {
                    return Err(over(terms + num.len()));
                }
                let q = num.div_exact(&prev[v]).map_err(|e| match e {
                    LaurentError::Inexact => BirationalError::Remainder { vertex: g.id(v).to_string(), time: t },
                    other => other.into(),
                })?;
                Ok((v, q))
            })
            .collect::<Result<_, _>>()?;
        let mut next = prev.clone();
        for (v, q) in updated {
            terms += q.len();
            if terms > budget {
                return Err(BirationalError::Budget { used: terms, limit: budget });
            }
            next[v] = Arc::new(q);
        }
        slices.push(next);
    }
    Ok(TSystem { ids: g.ids().to_vec(), eps: g.eps().to_vec(), slices, terms })
}

/// `(deg_min, deg_max)` of `x_v` over the support of `p`.
pub fn newton_extremes(p: &LaurentPoly, v: usize) -> Result<DegreePair, BirationalError> {
    p.degree_range(v).map(|(lo, hi)| DegreePair { deg_min: lo, deg_max: hi }).ok_or(BirationalError::Laurent(LaurentError::ZeroDivision))
}

/// `T_v(ε_v + 2N) = x_v` for every vertex.
pub fn verify_birational_periodicity(g: &BipartiteQuiver, n: usize, budget: usize) -> Result<bool, BirationalError> {
    let ts = t_system_run(g, 2 * n as i64 + 1, budget)?;
    Ok((0..g.len()).all(|v| *ts.get(v, g.eps()[v] as i64 + 2 * n as i64) == LaurentPoly::var(g.len(), v)))
}

/// Ratios `c(v)` with `T_v(ε_v + 2N) = c(v) x_v`, when every such ratio is a
/// positive constant.
pub fn scalar_return(ts: &TSystem, n: usize) -> Option<Vec<BigRational>> {
    let nv = ts.ids.len();
    (0..nv)
        .map(|v| {
            let t = ts.eps[v] as i64 + 2 * n as i64;
            if t > ts.t_max() {
                return None;
            }
            let p = ts.get(v, t);
            if !p.is_monomial() {
                return None;
            }
            let (e, c) = p.terms().next().unwrap();
            let mut want = vec![0; nv];
            want[v] = 1;
            (*e == want && c.is_positive()).then(|| BigRational::from_integer(c.clone()))
        })
        .collect()
}

/// Checks `𝔱^λ_v(t) = max_{α ∈ supp T_v(t)} ⟨λ, α⟩` for every produced `(v, t)`.
pub fn tropicalize_check_with(g: &BipartiteQuiver, ts: &TSystem, lambda: &[BigRational]) -> Result<bool, BirationalError> {
    let tr = tropical::trajectory(g, lambda, 0, ts.t_max().max(1))?;
    Ok(ts.entries().all(|(v, t)| ts.get(v, t).support_max(lambda).as_ref() == Some(tr.value(v, t))))
}

pub fn tropicalize_check(g: &BipartiteQuiver, lambda: &[BigRational], t_max: i64, budget: usize) -> Result<bool, BirationalError> {
    let ts = t_system_run(g, t_max, budget)?;
    tropicalize_check_with(g, &ts, lambda)
}

/// Checks the min/max degree relation between the T-system and δ-trajectories:
/// `−deg_min(u, T_v(t)) = 𝔱^{δ_u}_v(t + 2)` when `ε_u = 0`, and
/// `= 𝔱^{δ_u}_v(t − 2)` when `ε_u = 1`.
pub fn minmax_degree_duality_with(g: &BipartiteQuiver, ts: &TSystem) -> Result<bool, BirationalError> {
    minmax_check(g, ts, 2, -2)
}

/// The same relation with arbitrary shifts for `ε_u = 0` and `ε_u = 1`.
pub fn minmax_check(g: &BipartiteQuiver, ts: &TSystem, shift0: i64, shift1: i64) -> Result<bool, BirationalError> {
    let sweep = tropical::delta_sweep(g, -4, ts.t_max() + 4)?;
    Ok((0..g.len()).all(|u| {
        let shift = if g.eps()[u] == 0 { shift0 } else { shift1 };
        ts.entries().all(|(v, t)| {
            let (lo, _) = ts.get(v, t).degree_range(u).unwrap();
            BigInt::from(-lo) == *sweep[u].value(v, t + shift)
        })
    }))
}

pub fn minmax_degree_duality(g: &BipartiteQuiver, t_max: i64, budget: usize) -> Result<bool, BirationalError> {
    let ts = t_system_run(g, t_max, budget)?;
    minmax_degree_duality_with(g, &ts)
}

/// Checks `deg_max(u, T_v(t)) = 𝔱^{δ_u}_v(t)` for every produced `(u, v, t)`.
pub fn max_degree_matches_delta(g: &BipartiteQuiver, ts: &TSystem) -> Result<bool, BirationalError> {
    let sweep = tropical::delta_sweep(g, 0, ts.t_max().max(1))?;
    Ok((0..g.len()).all(|u| {
        ts.entries().all(|(v, t)| BigInt::from(ts.get(v, t).degree_range(u).unwrap().1) == *sweep[u].value(v, t))
    }))
}

/// `Y_v(t)` for `0 ≤ t ≤ t_max` at a sample point, carry convention as above.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YSample {
    eps: Vec<u8>,
    slices: Vec<Vec<BigRational>>,
}

impl YSample {
    pub fn t_max(&self) -> i64 {
        self.slices.len() as i64
    }

    pub fn get(&self, v: usize, t: i64) -> &BigRational {
        assert!((t + self.eps[v] as i64) % 2 == 0, "t + ε_v must be even");
        assert!(t >= 0 && t <= self.t_max());
        &self.slices[(t.max(1) - 1) as usize][v]
    }

    /// Whether `Y_v(ε_v + 2N) = Y_v(ε_v)` for all `v`.
    pub fn returns_after(&self, n: usize) -> Result<bool, BirationalError> {
        let need = 2 * n as i64 + 1;
        if need > self.t_max() {
            return Err(BirationalError::Horizon { requested: need, available: self.t_max() });
        }
        Ok((0..self.eps.len()).all(|v| self.get(v, self.eps[v] as i64 + 2 * n as i64) == self.get(v, self.eps[v] as i64)))
    }
}

fn one_plus(y: &BigRational) -> BigRational {
    BigRational::one() + y
}

fn one_plus_inv(y: &BigRational) -> Result<BigRational, BirationalError> {
    if y.is_zero() {
        return Err(BirationalError::ZeroDivision);
    }
    Ok(BigRational::one() + y.recip())
}

fn pow(x: BigRational, k: u32) -> BigRational {
    num_traits::pow::Pow::pow(x, k)
}

/// Evaluates the Y-system at a positive point. White vertices (`ε = 0`) use
/// `Y(t+1)Y(t−1) = Π_{u→v}(1+Y_u) Π_{v→w}(1+Y_w⁻¹)⁻¹`; black vertices use the
/// same formula with arrows reversed.
pub fn y_system_sample(g: &BipartiteQuiver, point: &[BigRational], t_max: i64) -> Result<YSample, BirationalError> {
    ensure_recurrent(g)?;
    if point.len() != g.len() || point.iter().any(|x| !x.is_positive()) {
        return Err(BirationalError::BadPoint);
    }
    let mut slices = vec![point.to_vec()];
    for t in 2..=t_max {
        let color = (t % 2) as u8;
        let prev = slices.last().unwrap();
        let mut next = prev.clone();
        for v in 0..g.len() {
            if g.eps()[v] != color {
                continue;
            }
            let (plus, minus) = if g.eps()[v] == 0 {
                (g.in_neighbors(v), g.out_neighbors(v))
            } else {
                (g.out_neighbors(v), g.in_neighbors(v))
            };
            let mut rhs = BigRational::one();
            for &(u, k) in plus {
                rhs *= pow(one_plus(&prev[u]), k);
            }
            for &(w, k) in minus {
                rhs /= pow(one_plus_inv(&prev[w])?, k);
            }
            if prev[v].is_zero() {
                return Err(BirationalError::ZeroDivision);
            }
            next[v] = rhs / &prev[v];
        }
        slices.push(next);
    }
    Ok(YSample { eps: g.eps().to_vec(), slices })
}

/// Positive rationals `p/q` with `1 ≤ p, q ≤ 20`, one per vertex.
pub fn random_point(n: usize, rng: &mut impl Rng) -> Vec<BigRational> {
    (0..n).map(|_| BigRational::new(rng.gen_range(1..=20i64).into(), rng.gen_range(1..=20i64).into())).collect()
}

/// Rationals `p/q` with `|p| ≤ 30`, `1 ≤ q ≤ 12`, one per vertex.
pub fn random_lambda(n: usize, rng: &mut impl Rng) -> Vec<BigRational> {
    (0..n).map(|_| BigRational::new(rng.gen_range(-30..=30i64).into(), rng.gen_range(1..=12i64).into())).collect()
}

/// Y-periodicity at `samples` seeded random points.
pub fn verify_y_periodicity(g: &BipartiteQuiver, n: usize, samples: usize, seed: u64) -> Result<bool, BirationalError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let p = random_point(g.len(), &mut rng);
        if !y_system_sample(g, &p, 2 * n as i64 + 1)?.returns_after(n)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ade::AdeType;
    use crate::families::tensor;

    #[test]
    fn single_vertex() {
        let g = tensor(AdeType::a(1), AdeType::a(1));
        let ts = t_system_run(&g, 4, 1000).unwrap();
        let ids = ts.ids().to_vec();
        assert_eq!(ts.get(0, 2).to_text(&ids), "2 * x_r1c1^-1");
        assert_eq!(ts.get(0, 4).to_text(&ids), "1 * x_r1c1");
        assert_eq!(newton_extremes(ts.get(0, 2), 0).unwrap(), DegreePair { deg_min: -1, deg_max: -1 });
        let y = y_system_sample(&g, &[BigRational::one()], 4).unwrap();
        assert_eq!(*y.get(0, 2), BigRational::one());
    }

    #[test]
    fn budget_is_enforced() {
        let g = tensor(AdeType::a(3), AdeType::a(3));
        assert!(matches!(t_system_run(&g, 16, 50), Err(BirationalError::Budget { limit: 50, .. })));
    }

    #[test]
    fn y_rejects_nonpositive_points() {
        let g = tensor(AdeType::a(2), AdeType::a(1));
        let bad = [BigRational::one(), BigRational::zero()];
        assert_eq!(y_system_sample(&g, &bad, 4), Err(BirationalError::BadPoint));
    }
}
