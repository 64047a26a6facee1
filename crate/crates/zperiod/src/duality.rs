//! Symmetric labeled bigraphs `(G, ι, V₊, V₀, V₋, ρ, X)`, their duals, and
//! the standard involutions that reduce the folded families to tensor
//! products.
//!
//! Labels of a dual carry factors `√2^{±1}`; they are kept exact as
//! [`Sqrt2Label`] values `q·√2^k`.

use crate::ade::AdeType;
use crate::families::{grid_id, tensor_shapes, FamilySpec, Shape};
use crate::graph::{Bigraph, GraphError, VertexJson};
use crate::iso::{bigraphs_isomorphic, is_isomorphism, witness_by_id, witness_from_ids};
use crate::tropical::{self, TropicalError, TropicalScalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DualityError {
    #[error("iota is not an involution at `{0}`")]
    NotInvolution(String),
    #[error("iota does not preserve the bipartition at `{0}`")]
    ColorChanged(String),
    #[error("iota does not map edge ({0}, {1}) to an edge of the same color")]
    NotAutomorphism(String, String),
    #[error("partition is inconsistent with iota at `{0}`")]
    Partition(String),
    #[error("X contains ({0}, {1}), which is not an edge with both ends fixed")]
    BadXEdge(String, String),
    #[error("the dual would join `{0}` and `{1}` twice")]
    DualMultiEdge(String, String),
    #[error("labels are not iota-symmetric at `{0}`")]
    Asymmetric(String),
    #[error("{expected} vertices but {got} labels")]
    Length { expected: usize, got: usize },
    #[error("vertex `{0}` is not fixed by iota")]
    NotFixed(String),
    #[error("{0} has no standard involutions")]
    Unsupported(String),
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Tropical(#[from] TropicalError),
}

/// The exact real number `q·√2^k`, normalized to `k ∈ {0, 1}` (and `k = 0`
/// when `q = 0`). Sums are defined only within one exponent class.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sqrt2Label {
    q: BigRational,
    k: u8,
}

impl Sqrt2Label {
    pub fn new(q: BigRational, exp: i32) -> Self {
        if q.is_zero() {
            return Sqrt2Label { q, k: 0 };
        }
        let half = exp.div_euclid(2);
        let k = exp.rem_euclid(2) as u8;
        let two = BigRational::from_integer(BigInt::from(2));
        let scale = if half >= 0 { num_traits::pow(two, half as usize) } else { num_traits::pow(two, (-half) as usize).recip() };
        Sqrt2Label { q: q * scale, k }
    }

    pub fn rational(q: BigRational) -> Self {
        Sqrt2Label::new(q, 0)
    }

    pub fn from_int(x: i64) -> Self {
        Sqrt2Label::rational(BigRational::from_integer(BigInt::from(x)))
    }

    pub fn coefficient(&self) -> &BigRational {
        &self.q
    }

    pub fn exponent(&self) -> u8 {
        self.k
    }

    /// Multiplication by `√2^e`.
    pub fn times_sqrt2(&self, e: i32) -> Self {
        Sqrt2Label::new(self.q.clone(), self.k as i32 + e)
    }
}

impl Ord for Sqrt2Label {
    fn cmp(&self, o: &Self) -> Ordering {
        if self.k == o.k {
            return self.q.cmp(&o.q);
        }
        let (sa, sb) = (self.q.signum(), o.q.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        // equal nonzero signs: compare q²·2^k
        let sq = |x: &Sqrt2Label| &x.q * &x.q * BigRational::from_integer(BigInt::from(1u8 << x.k));
        let by_size = sq(self).cmp(&sq(o));
        if sa.is_positive() {
            by_size
        } else {
            by_size.reverse()
        }
    }
}

impl PartialOrd for Sqrt2Label {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Sqrt2Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 0 {
            write!(f, "{}", self.q)
        } else {
            write!(f, "{}*sqrt2", self.q)
        }
    }
}

impl TropicalScalar for Sqrt2Label {
    fn zero() -> Self {
        Sqrt2Label::from_int(0)
    }
    fn checked_add(&self, o: &Self) -> Option<Self> {
        if o.q.is_zero() {
            Some(self.clone())
        } else if self.q.is_zero() {
            Some(o.clone())
        } else if self.k == o.k {
            Some(Sqrt2Label::new(&self.q + &o.q, self.k as i32))
        } else {
            None
        }
    }
    fn checked_sub(&self, o: &Self) -> Option<Self> {
        self.checked_add(&Sqrt2Label { q: -o.q.clone(), k: o.k })
    }
    fn checked_scale(&self, k: u32) -> Option<Self> {
        Some(Sqrt2Label::new(&self.q * BigRational::from_integer(BigInt::from(k)), self.k as i32))
    }
}

/// `(G, ι, V₊, V₀, V₋, X)`. Labels are passed separately.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricBigraph {
    graph: Bigraph,
    iota: Vec<usize>,
    /// `+1` on V₊, `0` on V₀, `−1` on V₋
    sign: Vec<i8>,
    /// index pairs `(min, max)`
    x_edges: BTreeSet<(usize, usize)>,
}

fn edge_color(g: &Bigraph, a: usize, b: usize) -> Option<u8> {
    if g.gamma_neighbors(a).iter().any(|&(u, _)| u == b) {
        Some(0)
    } else if g.delta_neighbors(a).iter().any(|&(u, _)| u == b) {
        Some(1)
    } else {
        None
    }
}

impl SymmetricBigraph {
    pub fn new(graph: Bigraph, iota: Vec<usize>, sign: Vec<i8>, x_edges: BTreeSet<(usize, usize)>) -> Result<Self, DualityError> {
        let n = graph.len();
        if iota.len() != n || sign.len() != n {
            return Err(DualityError::Length { expected: n, got: iota.len().min(sign.len()) });
        }
        let id = |v: usize| graph.id(v).to_string();
        for v in 0..n {
            let w = iota[v];
            if w >= n || iota[w] != v {
                return Err(DualityError::NotInvolution(id(v)));
            }
            if graph.eps()[v] != graph.eps()[w] {
                return Err(DualityError::ColorChanged(id(v)));
            }
            let ok = if w == v { sign[v] == 0 } else { sign[v] != 0 && sign[v].abs() == 1 && sign[w] == -sign[v] };
            if !ok {
                return Err(DualityError::Partition(id(v)));
            }
        }
        for (c, edges) in [graph.gamma_edges(), graph.delta_edges()].into_iter().enumerate() {
            for (a, b, _) in edges {
                if edge_color(&graph, iota[a], iota[b]) != Some(c as u8) {
                    return Err(DualityError::NotAutomorphism(id(a), id(b)));
                }
            }
        }
        let x_edges: BTreeSet<(usize, usize)> = x_edges.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        for &(a, b) in &x_edges {
            if a >= n || b >= n || edge_color(&graph, a, b).is_none() || iota[a] != a || iota[b] != b {
                let name = |v: usize| if v < n { id(v) } else { v.to_string() };
                return Err(DualityError::BadXEdge(name(a), name(b)));
            }
        }
        Ok(SymmetricBigraph { graph, iota, sign, x_edges })
    }

    /// Builds from ids: `swaps` lists `(v⁺, v⁻)` pairs; every other vertex is fixed.
    pub fn from_ids(graph: Bigraph, swaps: &[(String, String)], x: &[(String, String)]) -> Result<Self, DualityError> {
        let n = graph.len();
        let mut iota: Vec<usize> = (0..n).collect();
        let mut sign = vec![0i8; n];
        for (p, m) in swaps {
            let (a, b) = (graph.index(p)?, graph.index(m)?);
            if iota[a] != a || iota[b] != b || a == b {
                return Err(DualityError::NotInvolution(p.clone()));
            }
            iota[a] = b;
            iota[b] = a;
            sign[a] = 1;
            sign[b] = -1;
        }
        let mut xs = BTreeSet::new();
        for (a, b) in x {
            xs.insert((graph.index(a)?, graph.index(b)?));
        }
        SymmetricBigraph::new(graph, iota, sign, xs)
    }

    /// The trivial structure: ι = id, X = ∅.
    pub fn trivial(graph: Bigraph) -> Self {
        let n = graph.len();
        SymmetricBigraph { graph, iota: (0..n).collect(), sign: vec![0; n], x_edges: BTreeSet::new() }
    }

    pub fn graph(&self) -> &Bigraph {
        &self.graph
    }

    pub fn iota(&self) -> &[usize] {
        &self.iota
    }

    pub fn sign(&self) -> &[i8] {
        &self.sign
    }

    pub fn x_edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.x_edges
    }

    pub fn fixed(&self) -> Vec<usize> {
        (0..self.iota.len()).filter(|&v| self.iota[v] == v).collect()
    }

    /// Whether `ρ ∘ ι = ρ`.
    pub fn is_symmetric<T: PartialEq>(&self, rho: &[T]) -> bool {
        rho.len() == self.iota.len() && (0..rho.len()).all(|v| rho[v] == rho[self.iota[v]])
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("serializable")
    }

    fn to_doc(&self) -> SymmetricJson {
        let g = &self.graph;
        let ids = |vs: Vec<usize>| vs.into_iter().map(|v| g.id(v).to_string()).collect::<Vec<_>>();
        let pairs = |l: Vec<(usize, usize, u32)>| -> Vec<(String, String)> {
            l.into_iter().map(|(a, b, _)| (g.id(a).to_string(), g.id(b).to_string())).collect()
        };
        let n = g.len();
        SymmetricJson {
            vertices: (0..n).map(|v| VertexJson { id: g.id(v).to_string(), eps: g.eps()[v] }).collect(),
            gamma: pairs(g.gamma_edges()),
            delta: pairs(g.delta_edges()),
            iota: (0..n).filter(|&v| self.sign[v] > 0).map(|v| (g.id(v).to_string(), g.id(self.iota[v]).to_string())).collect(),
            x_edges: self.x_edges.iter().map(|&(a, b)| (g.id(a).to_string(), g.id(b).to_string())).collect(),
            partition: PartitionJson {
                plus: ids((0..n).filter(|&v| self.sign[v] > 0).collect()),
                zero: ids((0..n).filter(|&v| self.sign[v] == 0).collect()),
                minus: ids((0..n).filter(|&v| self.sign[v] < 0).collect()),
            },
        }
    }

    /// Bigraph JSON plus `iota` (swapped pairs `[v⁺, v⁻]`), `x_edges`, and a
    /// `partition` into `plus`, `zero`, `minus` that must agree with `iota`.
    pub fn from_json(text: &str) -> Result<Self, DualityError> {
        let doc: SymmetricJson = serde_json::from_str(text).map_err(|e| DualityError::Json(e.to_string()))?;
        let verts = doc.vertices.into_iter().map(|v| (v.id, v.eps)).collect();
        let graph = Bigraph::new(verts, &doc.gamma, &doc.delta)?;
        let sb = SymmetricBigraph::from_ids(graph, &doc.iota, &doc.x_edges)?;
        let g = &sb.graph;
        let mut listed = vec![None; g.len()];
        for (list, s) in [(&doc.partition.plus, 1i8), (&doc.partition.zero, 0), (&doc.partition.minus, -1)] {
            for id in list {
                let v = g.index(id)?;
                if listed[v].replace(s).is_some() {
                    return Err(DualityError::Partition(id.clone()));
                }
            }
        }
        for v in 0..g.len() {
            if listed[v] != Some(sb.sign[v]) {
                return Err(DualityError::Partition(g.id(v).to_string()));
            }
        }
        Ok(sb)
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PartitionJson {
    plus: Vec<String>,
    zero: Vec<String>,
    minus: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SymmetricJson {
    vertices: Vec<VertexJson>,
    #[serde(default)]
    gamma: Vec<(String, String)>,
    #[serde(default)]
    delta: Vec<(String, String)>,
    #[serde(default)]
    iota: Vec<(String, String)>,
    #[serde(default)]
    x_edges: Vec<(String, String)>,
    partition: PartitionJson,
}

/// Where a vertex of the dual comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    /// `u_j^±` from the fixed vertex `v_j`
    Split { from: usize, plus: bool },
    /// `u_j` from the swapped pair `(v_j⁺, v_j⁻)`
    Fused { plus: usize, minus: usize },
}

/// A dual together with the vertex correspondence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dual {
    pub sb: SymmetricBigraph,
    /// indexed by dual vertex
    pub origin: Vec<Origin>,
    /// for each original vertex, its dual vertex (a fused vertex for both
    /// members of a pair) or, for a fixed vertex, `(u⁺, u⁻)`
    pub image: Vec<(usize, usize)>,
}

fn split_names(id: &str) -> (String, String) {
    (format!("{id}+"), format!("{id}-"))
}

fn fused_name(p: &str, m: &str) -> String {
    match (p.strip_suffix('+'), m.strip_suffix('-')) {
        (Some(a), Some(b)) if a == b => a.to_string(),
        _ => format!("{p}|{m}"),
    }
}

/// `B*`: fixed vertices split into `±` pairs, swapped pairs fuse, and edges
/// follow the five-case rule with X deciding crossing.
pub fn dualize(sb: &SymmetricBigraph) -> Result<Dual, DualityError> {
    let g = &sb.graph;
    let n = g.len();
    let mut names: Vec<(String, u8, Origin)> = Vec::new();
    for v in 0..n {
        if sb.iota[v] == v {
            let (p, m) = split_names(g.id(v));
            names.push((p, g.eps()[v], Origin::Split { from: v, plus: true }));
            names.push((m, g.eps()[v], Origin::Split { from: v, plus: false }));
        } else if sb.sign[v] > 0 {
            let w = sb.iota[v];
            names.push((fused_name(g.id(v), g.id(w)), g.eps()[v], Origin::Fused { plus: v, minus: w }));
        }
    }
    let name_of: BTreeMap<(usize, i8), String> = names
        .iter()
        .flat_map(|(s, _, o)| match *o {
            Origin::Split { from, plus } => vec![((from, if plus { 1 } else { -1 }), s.clone())],
            Origin::Fused { plus, minus } => vec![((plus, 0), s.clone()), ((minus, 0), s.clone())],
        })
        .collect();
    let fixed = |v: usize| sb.iota[v] == v;
    let mut edges: [BTreeSet<(String, String)>; 2] = [BTreeSet::new(), BTreeSet::new()];
    let mut x_star: BTreeSet<(String, String)> = BTreeSet::new();
    let mut fused_kind: BTreeMap<(String, String), bool> = BTreeMap::new();
    let key = |a: &String, b: &String| if a <= b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
    for (c, list) in [g.gamma_edges(), g.delta_edges()].into_iter().enumerate() {
        for (a, b, _) in list {
            match (fixed(a), fixed(b)) {
                (true, true) => {
                    let crossed = sb.x_edges.contains(&(a.min(b), a.max(b)));
                    let (sa, sb_) = if crossed { (1, -1) } else { (1, 1) };
                    edges[c].insert(key(&name_of[&(a, sa)], &name_of[&(b, sb_)]));
                    edges[c].insert(key(&name_of[&(a, -sa)], &name_of[&(b, -sb_)]));
                }
                (false, true) | (true, false) => {
                    let (p, f) = if fixed(a) { (b, a) } else { (a, b) };
                    edges[c].insert(key(&name_of[&(p, 0)], &name_of[&(f, 1)]));
                    edges[c].insert(key(&name_of[&(p, 0)], &name_of[&(f, -1)]));
                }
                (false, false) => {
                    let crossed = sb.sign[a] != sb.sign[b];
                    let k = key(&name_of[&(a, 0)], &name_of[&(b, 0)]);
                    if let Some(&prev) = fused_kind.get(&k) {
                        if prev != crossed {
                            return Err(DualityError::DualMultiEdge(k.0, k.1));
                        }
                    }
                    fused_kind.insert(k.clone(), crossed);
                    if crossed {
                        x_star.insert(k.clone());
                    }
                    edges[c].insert(k);
                }
            }
        }
    }
    let verts: Vec<(String, u8)> = names.iter().map(|(s, e, _)| (s.clone(), *e)).collect();
    let [gamma, delta] = edges.map(|s| s.into_iter().collect::<Vec<_>>());
    let graph = Bigraph::new(verts, &gamma, &delta)?;
    let nd = graph.len();
    let mut origin = vec![Origin::Split { from: 0, plus: true }; nd];
    for (s, _, o) in &names {
        origin[graph.index(s)?] = *o;
    }
    let mut iota: Vec<usize> = (0..nd).collect();
    let mut sign = vec![0i8; nd];
    let mut image = vec![(0, 0); n];
    for u in 0..nd {
        match origin[u] {
            Origin::Split { from, plus } => {
                let (p, m) = (graph.index(&name_of[&(from, 1)])?, graph.index(&name_of[&(from, -1)])?);
                iota[u] = if plus { m } else { p };
                sign[u] = if plus { 1 } else { -1 };
                image[from] = (p, m);
            }
            Origin::Fused { plus, minus } => {
                image[plus] = (u, u);
                image[minus] = (u, u);
            }
        }
    }
    let mut xs = BTreeSet::new();
    for (a, b) in &x_star {
        xs.insert((graph.index(a)?, graph.index(b)?));
    }
    Ok(Dual { sb: SymmetricBigraph::new(graph, iota, sign, xs)?, origin, image })
}

/// For `second = dualize(first.sb)`, the vertex of the original bigraph that
/// each vertex of `(B*)*` stands for.
pub fn double_dual_correspondence(first: &Dual, second: &Dual) -> Vec<usize> {
    second
        .origin
        .iter()
        .map(|o| match *o {
            Origin::Split { from, plus } => match first.origin[from] {
                Origin::Fused { plus: p, minus: m } => if plus { p } else { m },
                Origin::Split { .. } => unreachable!("split vertices of B* are swapped, so they fuse"),
            },
            Origin::Fused { plus, .. } => match first.origin[plus] {
                Origin::Split { from, .. } => from,
                Origin::Fused { .. } => unreachable!("fused vertices of B* are fixed, so they split"),
            },
        })
        .collect()
}

/// Whether `map` carries `a` onto `b` together with ι, the partition and X.
pub fn is_structure_isomorphism(a: &SymmetricBigraph, b: &SymmetricBigraph, map: &[usize]) -> bool {
    is_isomorphism(&a.graph, &b.graph, map)
        && (0..map.len()).all(|v| b.iota[map[v]] == map[a.iota[v]] && b.sign[map[v]] == a.sign[v])
        && a.x_edges.iter().map(|&(x, y)| (map[x].min(map[y]), map[x].max(map[y]))).collect::<BTreeSet<_>>() == b.x_edges
}

fn check_len<T>(sb: &SymmetricBigraph, rho: &[T]) -> Result<(), DualityError> {
    if rho.len() != sb.graph.len() {
        return Err(DualityError::Length { expected: sb.graph.len(), got: rho.len() });
    }
    Ok(())
}

/// `ρ*(u_j) = √2 ρ(v_j^±)` and `ρ*(u_j^±) = ρ(v_j)/√2`.
pub fn dual_labels(sb: &SymmetricBigraph, dual: &Dual, rho: &[Sqrt2Label]) -> Result<Vec<Sqrt2Label>, DualityError> {
    check_len(sb, rho)?;
    if let Some(v) = (0..rho.len()).find(|&v| rho[v] != rho[sb.iota[v]]) {
        return Err(DualityError::Asymmetric(sb.graph.id(v).to_string()));
    }
    Ok(dual
        .origin
        .iter()
        .map(|o| match *o {
            Origin::Split { from, .. } => rho[from].times_sqrt2(-1),
            Origin::Fused { plus, .. } => rho[plus].times_sqrt2(1),
        })
        .collect())
}

/// Whether `(B, ρ)` and `(B*, ρ*)` are dual as labeled bigraphs.
pub fn is_dual_labeling(sb: &SymmetricBigraph, dual: &Dual, rho: &[Sqrt2Label], rho_star: &[Sqrt2Label]) -> bool {
    sb.is_symmetric(rho)
        && dual.sb.is_symmetric(rho_star)
        && rho_star.len() == dual.origin.len()
        && dual_labels(sb, dual, rho).map(|d| d == rho_star).unwrap_or(false)
}

/// Tropical mutation at pairwise non-adjacent vertices:
/// `λ(v) = max(Σ_Γ ρ, Σ_Δ ρ) − ρ(v)`.
pub fn tropical_mutate<T: TropicalScalar>(g: &Bigraph, rho: &[T], at: &[usize]) -> Result<Vec<T>, TropicalError> {
    let sum = |nbrs: &[(usize, u32)]| -> Result<T, TropicalError> {
        nbrs.iter().try_fold(T::zero(), |acc, &(u, _)| acc.checked_add(&rho[u]).ok_or(TropicalError::Overflow))
    };
    let mut out = rho.to_vec();
    for &v in at {
        let m = sum(g.gamma_neighbors(v))?.max(sum(g.delta_neighbors(v))?);
        out[v] = m.checked_sub(&rho[v]).ok_or(TropicalError::Overflow)?;
    }
    Ok(out)
}

/// Mutates `B` at the fixed vertex `v` and `B*` at `u_v⁺, u_v⁻`, then checks
/// the results are still dual.
pub fn verify_mutation_duality(sb: &SymmetricBigraph, rho: &[Sqrt2Label], v: usize) -> Result<bool, DualityError> {
    check_len(sb, rho)?;
    if v >= rho.len() || sb.iota[v] != v {
        return Err(DualityError::NotFixed(if v < rho.len() { sb.graph.id(v).to_string() } else { v.to_string() }));
    }
    let dual = dualize(sb)?;
    let rho_star = dual_labels(sb, &dual, rho)?;
    let (p, m) = dual.image[v];
    let lambda = tropical_mutate(&sb.graph, rho, &[v])?;
    let lambda_star = tropical_mutate(&dual.sb.graph, &rho_star, &[p, m])?;
    Ok(is_dual_labeling(sb, &dual, &lambda, &lambda_star))
}

/// Runs the tropical T-system on `B` and `B*` side by side for `steps`
/// half-steps and returns the first step at which duality fails.
pub fn verify_orbit_duality(sb: &SymmetricBigraph, rho: &[Sqrt2Label], steps: usize) -> Result<Option<usize>, DualityError> {
    let dual = dualize(sb)?;
    let mut cur = rho.to_vec();
    let mut cur_star = dual_labels(sb, &dual, rho)?;
    for s in 0..steps {
        let color = (s % 2) as u8;
        cur = tropical::step(sb.graph.as_quiver(), &cur, color)?;
        cur_star = tropical::step(dual.sb.graph.as_quiver(), &cur_star, color)?;
        if !is_dual_labeling(sb, &dual, &cur, &cur_star) {
            return Ok(Some(s + 1));
        }
    }
    Ok(None)
}

/// An involution of a folded family with its predicted dual.
#[derive(Debug, Clone)]
pub struct Reduction {
    /// `"iota"` or `"jota"`
    pub involution: &'static str,
    pub sb: SymmetricBigraph,
    pub target_name: String,
    pub target: Bigraph,
}

fn flipped(mut s: Shape) -> Shape {
    s.eps.iter_mut().for_each(|e| *e = 1 - *e);
    s
}

fn ext(k: usize) -> String {
    format!("e{}", k + 1)
}

/// The two involutions `ι`, `ȷ` with `Fix(ι) ∪ Fix(ȷ) = Vert(G)`, their
/// crossing sets, and the tensor products their duals should be.
pub fn standard_involutions(spec: &FamilySpec) -> Result<Vec<Reduction>, DualityError> {
    let g = spec.build().map_err(|e| DualityError::Unsupported(format!("{spec} ({e})")))?;
    let a = |r: usize| Shape::of(AdeType::a(r));
    let d = Shape::d;
    let e6 = Shape::of(AdeType::e(6));
    let out: Vec<(&'static str, Vec<(String, String)>, Vec<(String, String)>, String, Bigraph)> = match *spec {
        FamilySpec::ApowD(m, n) => {
            // rows 0..m−1 of A_{2n−1}; extra D_{n+1} with forks e_{n−1}, e_n
            let iota = vec![(ext(n - 1), ext(n))];
            let x_iota = (0..m - 1).map(|i| (grid_id(i, n - 1), grid_id(i, n))).collect();
            let jota = (0..m - 1).flat_map(|i| (0..n - 1).map(move |j| (grid_id(i, j), grid_id(i, 2 * n - 2 - j)))).collect();
            let x_jota = vec![(ext(n - 1), grid_id(m - 2, n - 1))];
            vec![
                ("iota", iota, x_iota, format!("A{}⊗A{}", 2 * m - 1, 2 * n - 1), tensor_shapes(&a(2 * m - 1), &a(2 * n - 1))),
                ("jota", jota, x_jota, format!("D{}⊗D{}", m + 1, n + 1), tensor_shapes(&d(m + 1), &d(n + 1))),
            ]
        }
        FamilySpec::ADpow(m, n) => {
            // rows 0..m−1 of D_{n+1} with forks in columns n−1, n; extra A_{2n−1}
            let iota = (0..m - 1).map(|i| (grid_id(i, n - 1), grid_id(i, n))).collect();
            let x_iota = vec![(ext(n - 1), ext(n - 2))];
            let jota = (0..n - 1).map(|j| (ext(j), ext(2 * n - 2 - j))).collect();
            let x_jota = vec![(ext(n - 1), grid_id(m - 2, n - 1))];
            vec![
                ("iota", iota, x_iota, format!("D{}⊗A{}", m + 1, 2 * n - 1), tensor_shapes(&d(m + 1), &a(2 * n - 1))),
                ("jota", jota, x_jota, format!("A{}⊗D{}", 2 * m - 1, n + 1), tensor_shapes(&a(2 * m - 1), &d(n + 1))),
            ]
        }
        FamilySpec::EE(n) => {
            // E₆ labelled as the path 0–4 with 5 on 2; its involution swaps 0↔4, 1↔3
            let iota = vec![(ext(0), ext(4)), (ext(1), ext(3))];
            let x_iota = vec![(ext(2), grid_id(1, n - 2)), (ext(5), grid_id(0, n - 2))];
            let jota = (0..n - 1).flat_map(|j| [(grid_id(0, j), grid_id(4, j)), (grid_id(1, j), grid_id(3, j))]).collect();
            let x_jota = vec![(ext(2), ext(1))];
            vec![
                ("iota", iota, x_iota, format!("E6⊗A{}", 2 * n - 1), tensor_shapes(&e6, &a(2 * n - 1))),
                // the D factor with its bipartition reversed
                ("jota", jota, x_jota, format!("E6⊗D{}", n + 1), tensor_shapes(&e6, &flipped(d(n + 1)))),
            ]
        }
        _ => return Err(DualityError::Unsupported(spec.to_string())),
    };
    out.into_iter()
        .map(|(involution, swaps, x, target_name, target)| {
            Ok(Reduction { involution, sb: SymmetricBigraph::from_ids(g.clone(), &swaps, &x)?, target_name, target })
        })
        .collect()
}

/// Serialized isomorphism from a dual onto its predicted tensor product.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionCertificate {
    pub family: String,
    pub involution: String,
    pub target: String,
    pub witness: BTreeMap<String, String>,
}

/// Searches for the certificates of both involutions, in parallel.
pub fn reduction_certificates(spec: &FamilySpec) -> Result<Vec<Option<ReductionCertificate>>, DualityError> {
    let reds = standard_involutions(spec)?;
    reds.par_iter()
        .map(|r| {
            let dual = dualize(&r.sb)?;
            Ok(bigraphs_isomorphic(dual.sb.graph(), &r.target).map(|m| ReductionCertificate {
                family: spec.to_string(),
                involution: r.involution.to_string(),
                target: r.target_name.clone(),
                witness: witness_by_id(dual.sb.graph(), &r.target, &m),
            }))
        })
        .collect()
}

/// Replays a certificate without searching.
pub fn check_certificate(spec: &FamilySpec, cert: &ReductionCertificate) -> Result<bool, DualityError> {
    let reds = standard_involutions(spec)?;
    let Some(r) = reds.iter().find(|r| r.involution == cert.involution) else { return Ok(false) };
    let dual = dualize(&r.sb)?;
    Ok(cert.target == r.target_name
        && witness_from_ids(dual.sb.graph(), &r.target, &cert.witness).is_some_and(|m| is_isomorphism(dual.sb.graph(), &r.target, &m)))
}

/// The involution of `A_{2n−1}` (vertices `v1..v{2n−1}`, all red) with
/// `X = ∅`, whose dual is `D_{n+1}`.
pub fn a_odd_involution(n: usize) -> SymmetricBigraph {
    let len = 2 * n - 1;
    let id = |i: usize| format!("v{}", i + 1);
    let shape = Shape::of(AdeType::a(len));
    let verts: Vec<(String, u8)> = (0..len).map(|i| (id(i), shape.eps[i])).collect();
    let gamma: Vec<(String, String)> = shape.edges.iter().map(|&(x, y)| (id(x), id(y))).collect();
    let g = Bigraph::new(verts, &gamma, &[]).expect("path is a bigraph");
    let swaps: Vec<(String, String)> = (0..n - 1).map(|j| (id(j), id(len - 1 - j))).collect();
    SymmetricBigraph::from_ids(g, &swaps, &[]).expect("mirror is an automorphism")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn sqrt2_arithmetic() {
        let s = Sqrt2Label::from_int(3).times_sqrt2(1);
        assert_eq!(s.times_sqrt2(1), Sqrt2Label::from_int(6));
        assert_eq!(s.times_sqrt2(-1), Sqrt2Label::from_int(3));
        assert_eq!(Sqrt2Label::from_int(1).times_sqrt2(-1), Sqrt2Label::new(r(1, 2), 1));
        assert!(Sqrt2Label::from_int(1) < Sqrt2Label::from_int(1).times_sqrt2(1));
        assert!(Sqrt2Label::from_int(2) > Sqrt2Label::from_int(1).times_sqrt2(1));
        assert!(Sqrt2Label::from_int(-2) < Sqrt2Label::from_int(-1).times_sqrt2(1));
        assert!(Sqrt2Label::from_int(0).times_sqrt2(1) == Sqrt2Label::from_int(0));
        assert_eq!(s.checked_add(&Sqrt2Label::from_int(1)), None);
        assert_eq!(s.checked_add(&Sqrt2Label::from_int(0)), Some(s.clone()));
    }

    #[test]
    fn a_odd_folds_to_d() {
        for n in 2..=6 {
            let sb = a_odd_involution(n);
            let dual = dualize(&sb).unwrap();
            let count = |s: &SymmetricBigraph, x: i8| s.sign().iter().filter(|&&y| y == x).count();
            assert_eq!((count(&sb, 0), count(&sb, 1), count(&sb, -1)), (1, n - 1, n - 1));
            assert_eq!((count(&dual.sb, 0), count(&dual.sb, 1), count(&dual.sb, -1)), (n - 1, 1, 1));
            let d = tensor_shapes(&Shape::d(n + 1), &Shape::of(AdeType::a(1)));
            assert!(bigraphs_isomorphic(dual.sb.graph(), &d).is_some(), "n = {n}");
            let back = dualize(&dual.sb).unwrap();
            let map = double_dual_correspondence(&dual, &back);
            assert!(is_structure_isomorphism(&back.sb, &sb, &map));
        }
    }

    #[test]
    fn rejects_broken_structures() {
        let g = Bigraph::from_strs(&[("a", 0), ("b", 1), ("c", 0)], &[("a", "b"), ("b", "c")], &[]).unwrap();
        let s = |x: &str| x.to_string();
        assert!(SymmetricBigraph::from_ids(g.clone(), &[(s("a"), s("c"))], &[]).is_ok());
        assert!(matches!(SymmetricBigraph::from_ids(g.clone(), &[(s("a"), s("b"))], &[]), Err(DualityError::ColorChanged(_))));
        assert!(matches!(
            SymmetricBigraph::from_ids(g.clone(), &[(s("a"), s("c"))], &[(s("a"), s("b"))]),
            Err(DualityError::BadXEdge(..))
        ));
        let h = Bigraph::from_strs(&[("a", 0), ("b", 1), ("c", 0), ("d", 1)], &[("a", "b"), ("b", "c"), ("c", "d")], &[]).unwrap();
        assert!(matches!(SymmetricBigraph::from_ids(h, &[(s("a"), s("c"))], &[]), Err(DualityError::NotAutomorphism(..))));
    }

    #[test]
    fn json_round_trip() {
        let sb = a_odd_involution(3);
        let text = sb.to_json();
        assert_eq!(SymmetricBigraph::from_json(&text).unwrap(), sb);
        let bad = text.replace("\"zero\": [\n      \"v3\"\n    ]", "\"zero\": []");
        assert!(SymmetricBigraph::from_json(&bad).is_err());
    }
}
