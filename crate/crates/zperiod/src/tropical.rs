//! The tropical T-system
//! `𝔱_v(t+1) + 𝔱_v(t−1) = max(Σ_Γ 𝔱_u(t), Σ_Δ 𝔱_w(t))` in exact arithmetic.
//!
//! A slice at time `t` stores, for every vertex `v`, the value `𝔱_v(t′)` for the
//! largest `t′ ≤ t` with `t′ + ε_v` even. Slice 1 is the initial data λ, and
//! the step into slice `t+1` rewrites exactly the vertices with `ε_v ≡ t+1`.
//! Each such step is an involution, so the same map also runs time backwards.

use crate::families::grid_id;
use crate::graph::BipartiteQuiver;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TropicalError {
    #[error("the quiver is not recurrent (A_Γ and A_Δ do not commute)")]
    NotRecurrent,
    #[error("integer overflow")]
    Overflow,
    #[error("initial data has {got} values for {expected} vertices")]
    Length { expected: usize, got: usize },
    #[error("parameter out of range: {0}")]
    Range(String),
}

/// Exact scalar for tropical evaluation.
pub trait TropicalScalar: Clone + Ord + fmt::Debug + fmt::Display + Send + Sync {
    fn zero() -> Self;
    fn checked_add(&self, o: &Self) -> Option<Self>;
    fn checked_sub(&self, o: &Self) -> Option<Self>;
    fn checked_scale(&self, k: u32) -> Option<Self>;
}

impl TropicalScalar for i64 {
    fn zero() -> Self {
        0
    }
    fn checked_add(&self, o: &Self) -> Option<Self> {
        i64::checked_add(*self, *o)
    }
    fn checked_sub(&self, o: &Self) -> Option<Self> {
        i64::checked_sub(*self, *o)
    }
    fn checked_scale(&self, k: u32) -> Option<Self> {
        i64::checked_mul(*self, k as i64)
    }
}

impl TropicalScalar for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn checked_add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn checked_sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn checked_scale(&self, k: u32) -> Option<Self> {
        Some(self * k)
    }
}

impl TropicalScalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn checked_add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn checked_sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn checked_scale(&self, k: u32) -> Option<Self> {
        Some(self * BigRational::from_integer(BigInt::from(k)))
    }
}

fn weighted_sum<T: TropicalScalar>(slice: &[T], nbrs: &[(usize, u32)]) -> Result<T, TropicalError> {
    let mut acc = T::zero();
    for &(u, k) in nbrs {
        let term = if k == 1 { slice[u].clone() } else { slice[u].checked_scale(k).ok_or(TropicalError::Overflow)? };
        acc = acc.checked_add(&term).ok_or(TropicalError::Overflow)?;
    }
    Ok(acc)
}

/// Rewrites every vertex of the given color: `new = max(Σ_Γ, Σ_Δ) − old`.
pub fn step<T: TropicalScalar>(g: &BipartiteQuiver, slice: &[T], color: u8) -> Result<Vec<T>, TropicalError> {
    let mut out = slice.to_vec();
    for v in 0..g.len() {
        if g.eps()[v] != color {
            continue;
        }
        let sg = weighted_sum(slice, g.gamma_neighbors(v))?;
        let sd = weighted_sum(slice, g.delta_neighbors(v))?;
        let m = if sg >= sd { sg } else { sd };
        out[v] = m.checked_sub(&slice[v]).ok_or(TropicalError::Overflow)?;
    }
    Ok(out)
}

/// Color rewritten when moving from slice `t−1` to slice `t` (and back).
fn color_at(t: i64) -> u8 {
    t.rem_euclid(2) as u8
}

/// Values of the tropical T-system on a window of time slices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory<T> {
    eps: Vec<u8>,
    t_min: i64,
    slices: Vec<Vec<T>>,
}

/// One time slice, under the carry convention described at module level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropicalState<T> {
    pub time: i64,
    pub values: Vec<T>,
}

impl<T: TropicalScalar> Trajectory<T> {
    pub fn t_min(&self) -> i64 {
        self.t_min
    }

    pub fn t_max(&self) -> i64 {
        self.t_min + self.slices.len() as i64 - 1
    }

    pub fn slice(&self, t: i64) -> &[T] {
        assert!(t >= self.t_min && t <= self.t_max(), "time {t} outside the computed window");
        &self.slices[(t - self.t_min) as usize]
    }

    /// `𝔱_v(t)`; requires `t + ε_v` even.
    pub fn value(&self, v: usize, t: i64) -> &T {
        assert!((t + self.eps[v] as i64) % 2 == 0, "t + ε_v must be even");
        &self.slice(t)[v]
    }

    pub fn states(&self) -> Vec<TropicalState<T>> {
        self.slices
            .iter()
            .enumerate()
            .map(|(i, s)| TropicalState { time: self.t_min + i as i64, values: s.clone() })
            .collect()
    }
}

fn ensure_recurrent(g: &BipartiteQuiver) -> Result<(), TropicalError> {
    if g.commutator().is_zero() {
        Ok(())
    } else {
        Err(TropicalError::NotRecurrent)
    }
}

/// Runs from initial data λ (`𝔱_v(ε_v) = λ(v)`) over slices `t_min..=t_max`.
/// Recurrence is checked.
pub fn trajectory<T: TropicalScalar>(
    g: &BipartiteQuiver,
    lambda: &[T],
    t_min: i64,
    t_max: i64,
) -> Result<Trajectory<T>, TropicalError> {
    ensure_recurrent(g)?;
    trajectory_unchecked(g, lambda, t_min, t_max)
}

pub(crate) fn trajectory_unchecked<T: TropicalScalar>(
    g: &BipartiteQuiver,
    lambda: &[T],
    t_min: i64,
    t_max: i64,
) -> Result<Trajectory<T>, TropicalError> {
    if lambda.len() != g.len() {
        return Err(TropicalError::Length { expected: g.len(), got: lambda.len() });
    }
    if t_min > 1 || t_max < 1 {
        return Err(TropicalError::Range(format!("window {t_min}..={t_max} must contain t = 1")));
    }
    let mut back = Vec::new();
    let mut cur = lambda.to_vec();
    for t in (t_min..1).rev() {
        cur = step(g, &cur, color_at(t + 1))?;
        back.push(cur.clone());
    }
    back.reverse();
    let mut slices = back;
    slices.push(lambda.to_vec());
    let mut cur = lambda.to_vec();
    for t in 2..=t_max {
        cur = step(g, &cur, color_at(t))?;
        slices.push(cur.clone());
    }
    Ok(Trajectory { eps: g.eps().to_vec(), t_min, slices })
}

/// States for `t = 0..=t_max`, starting from `𝔱_v(ε_v) = λ(v)`.
pub fn tropical_run(
    g: &BipartiteQuiver,
    lambda: &[BigRational],
    t_max: i64,
) -> Result<Vec<TropicalState<BigRational>>, TropicalError> {
    Ok(trajectory(g, lambda, 0, t_max.max(1))?.states().into_iter().take((t_max + 1).max(0) as usize).collect())
}

/// Indicator of a single vertex.
pub fn delta<T: TropicalScalar + From<i64>>(n: usize, u: usize) -> Vec<T> {
    (0..n).map(|v| T::from(if v == u { 1 } else { 0 })).collect()
}

/// Slice `1 + 2N` obtained from slice 1 by `2N` forward steps.
fn advance<T: TropicalScalar>(g: &BipartiteQuiver, init: &[T], steps: usize) -> Result<Vec<T>, TropicalError> {
    let mut cur = init.to_vec();
    for t in 2..(2 + steps as i64) {
        cur = step(g, &cur, color_at(t))?;
    }
    Ok(cur)
}

fn delta_returns(g: &BipartiteQuiver, u: usize, n: usize) -> bool {
    match advance::<i64>(g, &delta(g.len(), u), 2 * n) {
        Ok(end) => end == delta::<i64>(g.len(), u),
        Err(_) => advance::<BigInt>(g, &delta::<BigInt>(g.len(), u), 2 * n)
            .map(|end| end == delta::<BigInt>(g.len(), u))
            .unwrap_or(false),
    }
}

/// `𝔱^{δ_u}_v(ε_v + 2N) = 𝔱^{δ_u}_v(ε_v)` for every source `u` and vertex `v`.
pub fn verify_tropical_periodicity(g: &BipartiteQuiver, n: usize) -> Result<bool, TropicalError> {
    ensure_recurrent(g)?;
    Ok((0..g.len()).into_par_iter().all(|u| delta_returns(g, u, n)))
}

/// Whether arbitrary initial data returns after `2N` steps.
pub fn returns_after<T: TropicalScalar>(g: &BipartiteQuiver, lambda: &[T], n: usize) -> Result<bool, TropicalError> {
    ensure_recurrent(g)?;
    if lambda.len() != g.len() {
        return Err(TropicalError::Length { expected: g.len(), got: lambda.len() });
    }
    Ok(advance(g, lambda, 2 * n)? == lambda)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Least `N ≤ cap` such that every δ-orbit returns after `2N` steps.
pub fn minimal_period(g: &BipartiteQuiver, cap: usize) -> Result<Option<usize>, TropicalError> {
    ensure_recurrent(g)?;
    let per_source: Vec<Option<usize>> = (0..g.len())
        .into_par_iter()
        .map(|u| {
            let init: Vec<BigInt> = delta(g.len(), u);
            let mut cur = init.clone();
            for k in 1..=cap {
                for t in [2 * k as i64, 2 * k as i64 + 1] {
                    cur = step(g, &cur, color_at(t)).ok()?;
                }
                if cur == init {
                    return Some(k);
                }
            }
            None
        })
        .collect();
    let mut l = 1usize;
    for p in per_source {
        let p = match p {
            Some(p) => p,
            None => return Ok(None),
        };
        l = l / gcd(l, p) * p;
        if l > cap {
            return Ok(None);
        }
    }
    Ok(Some(l))
}

/// Per-source δ trajectories for `t_min..=t_max`, indexed by source.
pub fn delta_sweep(g: &BipartiteQuiver, t_min: i64, t_max: i64) -> Result<Vec<Trajectory<BigInt>>, TropicalError> {
    ensure_recurrent(g)?;
    (0..g.len())
        .into_par_iter()
        .map(|u| trajectory_unchecked(g, &delta::<BigInt>(g.len(), u), t_min, t_max))
        .collect()
}

fn triangle(start: i64, peak: i64, end: i64) -> Vec<i64> {
    let dir = match peak.cmp(&start) {
        std::cmp::Ordering::Greater => 1,
        std::cmp::Ordering::Less => -1,
        std::cmp::Ordering::Equal if end <= peak => 1,
        std::cmp::Ordering::Equal => -1,
    };
    let mut s = vec![start];
    let mut x = start;
    while x != peak {
        x += dir;
        s.push(x);
    }
    s.push(x);
    while x != end {
        x -= dir;
        s.push(x);
    }
    s
}

/// Closed form of `𝔱^{δ_u}(t)` on `A_n ⊗ A_m` for `u = v(a,b)` with `ε_u = 1`
/// and `1 ≤ t ≤ n+m`: the indicator of the rectangle cut out by four moving
/// diagonals. Each diagonal moves out to a corner, rests there for one step,
/// and moves back until all four meet at `v(n+1−a, m+1−b)`.
///
/// Keys are tensor vertex ids `r{i}c{j}`.
pub fn aa_closed_form(n: usize, m: usize, a: usize, b: usize, t: usize) -> Result<BTreeMap<String, i64>, TropicalError> {
    if !(1..=n).contains(&a) || !(1..=m).contains(&b) || (a + b) % 2 == 0 || !(1..=n + m).contains(&t) {
        return Err(TropicalError::Range(format!("aa_closed_form(n={n}, m={m}, a={a}, b={b}, t={t})")));
    }
    let (n, m, a, b) = (n as i64, m as i64, a as i64, b as i64);
    let (ab, bb) = (n + 1 - a, m + 1 - b);
    let k = t - 1;
    let se = triangle(a + b, n + m, ab + bb)[k];
    let nw = triangle(a + b, 2, ab + bb)[k];
    let sw = triangle(b - a, 1 - n, bb - ab)[k];
    let ne = triangle(b - a, m - 1, bb - ab)[k];
    let mut out = BTreeMap::new();
    for i in 1..=n {
        for j in 1..=m {
            let inside = nw <= i + j && i + j <= se && sw <= j - i && j - i <= ne;
            out.insert(grid_id(i as usize - 1, j as usize - 1), inside as i64);
        }
    }
    Ok(out)
}

/// TSV with columns `t`, `vertex`, `value`, listing only entries with
/// `t + ε_v` even.
pub fn trajectory_tsv<T: TropicalScalar>(g: &BipartiteQuiver, traj: &Trajectory<T>, t_from: i64) -> String {
    let mut out = String::from("t\tvertex\tvalue\n");
    for t in t_from.max(traj.t_min())..=traj.t_max() {
        for v in 0..g.len() {
            if (t + g.eps()[v] as i64) % 2 == 0 {
                let _ = writeln!(out, "{t}\t{}\t{}", g.id(v), traj.slice(t)[v]);
            }
        }
    }
    out
}

fn parse_grid_id(id: &str) -> Option<(usize, usize)> {
    let rest = id.strip_prefix('r')?;
    let (i, j) = rest.split_once('c')?;
    Some((i.parse().ok()?, j.parse().ok()?))
}

/// ASCII frames of the support evolution: a grid for `r{i}c{j}` ids, otherwise
/// the list of nonzero entries. Zero renders as `.`.
pub fn render_frames<T: TropicalScalar>(g: &BipartiteQuiver, traj: &Trajectory<T>, t_from: i64) -> String {
    let zero = T::zero();
    let cells: Option<Vec<(usize, usize)>> = g.ids().iter().map(|s| parse_grid_id(s)).collect();
    let width = (t_from.max(traj.t_min())..=traj.t_max())
        .flat_map(|t| traj.slice(t).iter().map(|x| x.to_string().len()))
        .max()
        .unwrap_or(1);
    let mut out = String::new();
    for t in t_from.max(traj.t_min())..=traj.t_max() {
        let slice = traj.slice(t);
        let _ = writeln!(out, "t = {t}");
        let show = |x: &T| if *x == zero { ".".to_string() } else { x.to_string() };
        match &cells {
            Some(cells) => {
                let rows = cells.iter().map(|c| c.0).max().unwrap_or(0);
                let cols = cells.iter().map(|c| c.1).max().unwrap_or(0);
                let mut grid = vec![vec![" ".to_string(); cols]; rows];
                for (v, &(i, j)) in cells.iter().enumerate() {
                    grid[i - 1][j - 1] = show(&slice[v]);
                }
                for row in grid {
                    let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
                    let _ = writeln!(out, "  {}", line.join(" ").trim_end());
                }
            }
            None => {
                let nz: Vec<String> =
                    (0..g.len()).filter(|&v| slice[v] != zero).map(|v| format!("{}={}", g.id(v), slice[v])).collect();
                let _ = writeln!(out, "  {}", if nz.is_empty() { ".".to_string() } else { nz.join(" ") });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ade::AdeType;
    use crate::families::tensor;

    #[test]
    fn single_vertex() {
        let g = tensor(AdeType::a(1), AdeType::a(1));
        let tr = trajectory::<i64>(&g, &[5], 0, 4).unwrap();
        assert_eq!(*tr.value(0, 2), -5);
        assert_eq!(*tr.value(0, 4), 5);
        assert!(verify_tropical_periodicity(&g, 2).unwrap());
        assert_eq!(minimal_period(&g, 8).unwrap(), Some(2));
    }

    #[test]
    fn backward_window_is_consistent() {
        let g = tensor(AdeType::a(3), AdeType::a(2));
        let lam: Vec<i64> = vec![3, -1, 4, 1, -5, 9];
        let wide = trajectory(&g, &lam, -6, 10).unwrap();
        let narrow = trajectory(&g, &lam, 0, 10).unwrap();
        for t in 0..=10 {
            assert_eq!(wide.slice(t), narrow.slice(t));
        }
        // running forward from slice -6 reproduces slice 1
        let mut cur = wide.slice(-6).to_vec();
        for t in -5..=1 {
            cur = step(&g, &cur, color_at(t)).unwrap();
        }
        assert_eq!(cur, lam);
    }

    #[test]
    fn triangle_pauses_at_turn() {
        assert_eq!(triangle(3, 5, 4), vec![3, 4, 5, 5, 4]);
        assert_eq!(triangle(3, 2, 3), vec![3, 2, 2, 3]);
        assert_eq!(triangle(-2, -2, 0), vec![-2, -2, -1, 0]);
    }

    #[test]
    fn closed_form_range_errors() {
        assert!(aa_closed_form(3, 3, 1, 1, 1).is_err());
        assert!(aa_closed_form(3, 3, 1, 2, 0).is_err());
        assert!(aa_closed_form(3, 3, 4, 1, 1).is_err());
    }

    #[test]
    fn rejects_non_recurrent() {
        let g = crate::graph::Bigraph::from_strs(
            &[("a", 0), ("b", 1), ("c", 0), ("d", 1)],
            &[("a", "b"), ("b", "c")],
            &[("a", "d")],
        )
        .unwrap();
        assert_eq!(verify_tropical_periodicity(&g, 3), Err(TropicalError::NotRecurrent));
    }
}
