//! Bigraphs, quivers, and the dictionary between them.
//!
//! Vertex ids are opaque strings. Every container keeps its vertices sorted by
//! id, so vertex indices agree between a bigraph and the quiver built from it
//! and all iteration is reproducible.

use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::Deref;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("unknown vertex id `{0}`")]
    UnknownVertex(String),
    #[error("vertex `{id}` has color {eps}; expected 0 or 1")]
    InvalidColor { id: String, eps: u8 },
    #[error("self-loop at `{0}`")]
    SelfLoop(String),
    #[error("edge ({0}, {1}) joins two vertices of the same color")]
    Monochromatic(String, String),
    #[error("edge ({0}, {1}) is both red and blue")]
    SharedEdge(String, String),
    #[error("edge ({0}, {1}) is listed twice")]
    DuplicateEdge(String, String),
    #[error("arrows {0} -> {1} and {1} -> {0} form a 2-cycle")]
    TwoCycle(String, String),
    #[error("arrow {0} -> {1} has multiplicity {2}; bigraphs are simple")]
    Multiplicity(String, String, u32),
    #[error("arrow {0} -> {1} has multiplicity 0")]
    ZeroMultiplicity(String, String),
    #[error("bipartition has {got} entries for {expected} vertices")]
    BipartitionLength { expected: usize, got: usize },
    #[error("malformed JSON: {0}")]
    Json(String),
}

impl GraphError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            GraphError::DuplicateVertex(_) => "duplicate-vertex",
            GraphError::UnknownVertex(_) => "unknown-vertex",
            GraphError::InvalidColor { .. } => "invalid-color",
            GraphError::SelfLoop(_) => "self-loop",
            GraphError::Monochromatic(..) => "monochromatic-edge",
            GraphError::SharedEdge(..) => "shared-edge",
            GraphError::DuplicateEdge(..) => "duplicate-edge",
            GraphError::TwoCycle(..) => "two-cycle",
            GraphError::Multiplicity(..) => "multiplicity",
            GraphError::ZeroMultiplicity(..) => "zero-multiplicity",
            GraphError::BipartitionLength { .. } => "bipartition-length",
            GraphError::Json(_) => "json",
        }
    }
}

fn sorted_ids(ids: Vec<String>) -> Result<Vec<String>, GraphError> {
    let mut ids = ids;
    ids.sort();
    for w in ids.windows(2) {
        if w[0] == w[1] {
            return Err(GraphError::DuplicateVertex(w[0].clone()));
        }
    }
    Ok(ids)
}

fn lookup(ids: &[String], id: &str) -> Result<usize, GraphError> {
    ids.binary_search_by(|x| x.as_str().cmp(id))
        .map_err(|_| GraphError::UnknownVertex(id.to_string()))
}

/// Square integer matrix indexed by vertex position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    n: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        IntMatrix { n, data: vec![0; n * n] }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: i64) {
        self.data[i * self.n + j] = x;
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = IntMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, other.n);
        IntMatrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Nonzero entries as `(row, col, value)`.
    pub fn nonzero(&self) -> Vec<(usize, usize, i64)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                let x = self.get(i, j);
                if x != 0 {
                    out.push((i, j, x));
                }
            }
        }
        out
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

/// Directed multigraph without loops or 2-cycles.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Quiver {
    ids: Vec<String>,
    arrows: BTreeMap<(usize, usize), u32>,
}

impl Quiver {
    /// Builds a quiver; repeated arrows accumulate multiplicity.
    pub fn new(ids: Vec<String>, arrows: &[(String, String, u32)]) -> Result<Self, GraphError> {
        let ids = sorted_ids(ids)?;
        let mut map: BTreeMap<(usize, usize), u32> = BTreeMap::new();
        for (u, v, k) in arrows {
            let (a, b) = (lookup(&ids, u)?, lookup(&ids, v)?);
            if a == b {
                return Err(GraphError::SelfLoop(u.clone()));
            }
            if *k == 0 {
                return Err(GraphError::ZeroMultiplicity(u.clone(), v.clone()));
            }
            *map.entry((a, b)).or_insert(0) += k;
        }
        for &(a, b) in map.keys() {
            if map.contains_key(&(b, a)) {
                return Err(GraphError::TwoCycle(ids[a].clone(), ids[b].clone()));
            }
        }
        Ok(Quiver { ids, arrows: map })
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        lookup(&self.ids, id).ok()
    }

    /// Arrows as `(tail, head, multiplicity)` in index order.
    pub fn arrows(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.arrows.iter().map(|(&(a, b), &k)| (a, b, k))
    }

    /// Total number of arrows counted with multiplicity.
    pub fn arrow_count(&self) -> u64 {
        self.arrows.values().map(|&k| k as u64).sum()
    }

    pub fn multiplicity(&self, from: usize, to: usize) -> u32 {
        self.arrows.get(&(from, to)).copied().unwrap_or(0)
    }

    pub fn in_arrows(&self, v: usize) -> Vec<(usize, u32)> {
        self.arrows.iter().filter(|(&(_, b), _)| b == v).map(|(&(a, _), &k)| (a, k)).collect()
    }

    pub fn out_arrows(&self, v: usize) -> Vec<(usize, u32)> {
        self.arrows.iter().filter(|(&(a, _), _)| a == v).map(|(&(_, b), &k)| (b, k)).collect()
    }

    pub fn reversed(&self) -> Quiver {
        Quiver {
            ids: self.ids.clone(),
            arrows: self.arrows.iter().map(|(&(a, b), &k)| ((b, a), k)).collect(),
        }
    }

    /// Mutation at vertex index `v`: compose paths through `v`, reverse the
    /// arrows at `v`, then cancel 2-cycles.
    pub fn mutate_at(&self, v: usize) -> Quiver {
        assert!(v < self.ids.len(), "vertex index out of range");
        let ins = self.in_arrows(v);
        let outs = self.out_arrows(v);
        let mut map = self.arrows.clone();
        for &(u, a) in &ins {
            for &(w, b) in &outs {
                *map.entry((u, w)).or_insert(0) += a * b;
            }
        }
        for &(u, a) in &ins {
            map.remove(&(u, v));
            map.insert((v, u), a);
        }
        for &(w, b) in &outs {
            map.remove(&(v, w));
            map.insert((w, v), b);
        }
        let keys: Vec<(usize, usize)> = map.keys().copied().collect();
        for (a, b) in keys {
            if a > b {
                continue;
            }
            let fwd = map.get(&(a, b)).copied().unwrap_or(0);
            let back = map.get(&(b, a)).copied().unwrap_or(0);
            if fwd > 0 && back > 0 {
                let c = fwd.min(back);
                for (key, val) in [((a, b), fwd - c), ((b, a), back - c)] {
                    if val == 0 {
                        map.remove(&key);
                    } else {
                        map.insert(key, val);
                    }
                }
            }
        }
        Quiver { ids: self.ids.clone(), arrows: map }
    }

    /// Quiver with the same arrows on relabelled vertices.
    pub fn relabel(&self, f: impl Fn(&str) -> String) -> Result<Quiver, GraphError> {
        let ids: Vec<String> = self.ids.iter().map(|s| f(s)).collect();
        let arrows: Vec<(String, String, u32)> =
            self.arrows().map(|(a, b, k)| (ids[a].clone(), ids[b].clone(), k)).collect();
        Quiver::new(ids, &arrows)
    }
}

/// Mutation at the vertex with the given id.
pub fn mutate(q: &Quiver, v: &str) -> Result<Quiver, GraphError> {
    let i = lookup(&q.ids, v)?;
    Ok(q.mutate_at(i))
}

fn check_bipartition(q: &Quiver, eps: &[u8]) -> Result<(), GraphError> {
    if eps.len() != q.len() {
        return Err(GraphError::BipartitionLength { expected: q.len(), got: eps.len() });
    }
    for (i, &e) in eps.iter().enumerate() {
        if e > 1 {
            return Err(GraphError::InvalidColor { id: q.ids[i].clone(), eps: e });
        }
    }
    for (a, b, _) in q.arrows() {
        if eps[a] == eps[b] {
            return Err(GraphError::Monochromatic(q.ids[a].clone(), q.ids[b].clone()));
        }
    }
    Ok(())
}

/// Mutation at every vertex of one color, in id order.
pub fn mutate_color(q: &Quiver, eps: &[u8], color: u8) -> Result<Quiver, GraphError> {
    check_bipartition(q, eps)?;
    Ok(mutate_sequence(q, (0..q.len()).filter(|&i| eps[i] == color)))
}

/// Mutations applied left to right.
pub fn mutate_sequence(q: &Quiver, order: impl IntoIterator<Item = usize>) -> Quiver {
    order.into_iter().fold(q.clone(), |acc, v| acc.mutate_at(v))
}

/// Recurrence via mutation: each color mutation reverses every arrow.
pub fn is_recurrent(q: &Quiver, eps: &[u8]) -> Result<bool, GraphError> {
    let rev = q.reversed();
    Ok(mutate_color(q, eps, 0)? == rev && mutate_color(q, eps, 1)? == rev)
}

/// Recurrence via the adjacency matrices of the two colors.
pub fn is_recurrent_by_matrices(q: &Quiver, eps: &[u8]) -> Result<bool, GraphError> {
    let bq = BipartiteQuiver::from_quiver(q, eps)?;
    Ok(bq.commutator().is_zero())
}

/// Bipartite quiver stored as two colored multigraphs.
///
/// Red (Γ) edges run from color 0 to color 1, blue (Δ) edges from color 1 to
/// color 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BipartiteQuiver {
    ids: Vec<String>,
    eps: Vec<u8>,
    gamma: Vec<Vec<(usize, u32)>>,
    delta: Vec<Vec<(usize, u32)>>,
}

type EdgeList = [(String, String, u32)];

impl BipartiteQuiver {
    pub fn new(vertices: Vec<(String, u8)>, gamma: &EdgeList, delta: &EdgeList) -> Result<Self, GraphError> {
        let mut vertices = vertices;
        vertices.sort();
        let ids = sorted_ids(vertices.iter().map(|(s, _)| s.clone()).collect())?;
        let eps: Vec<u8> = vertices.iter().map(|(_, e)| *e).collect();
        for (i, &e) in eps.iter().enumerate() {
            if e > 1 {
                return Err(GraphError::InvalidColor { id: ids[i].clone(), eps: e });
            }
        }
        let n = ids.len();
        let mut seen: [BTreeSet<(usize, usize)>; 2] = [BTreeSet::new(), BTreeSet::new()];
        let mut adj = [vec![Vec::new(); n], vec![Vec::new(); n]];
        for (c, list) in [gamma, delta].into_iter().enumerate() {
            for (u, v, k) in list {
                let (a, b) = (lookup(&ids, u)?, lookup(&ids, v)?);
                if a == b {
                    return Err(GraphError::SelfLoop(u.clone()));
                }
                if eps[a] == eps[b] {
                    return Err(GraphError::Monochromatic(u.clone(), v.clone()));
                }
                if *k == 0 {
                    return Err(GraphError::ZeroMultiplicity(u.clone(), v.clone()));
                }
                let key = (a.min(b), a.max(b));
                if !seen[c].insert(key) {
                    return Err(GraphError::DuplicateEdge(u.clone(), v.clone()));
                }
                if seen[1 - c].contains(&key) {
                    return Err(GraphError::SharedEdge(u.clone(), v.clone()));
                }
                adj[c][a].push((b, *k));
                adj[c][b].push((a, *k));
            }
        }
        let [mut gamma, mut delta] = adj;
        for l in gamma.iter_mut().chain(delta.iter_mut()) {
            l.sort_unstable();
        }
        Ok(BipartiteQuiver { ids, eps, gamma, delta })
    }

    /// Reads a quiver with a bipartition: Γ from arrows leaving color 0,
    /// Δ from arrows leaving color 1.
    pub fn from_quiver(q: &Quiver, eps: &[u8]) -> Result<Self, GraphError> {
        check_bipartition(q, eps)?;
        let mut gamma = Vec::new();
        let mut delta = Vec::new();
        for (a, b, k) in q.arrows() {
            let e = (q.ids[a].clone(), q.ids[b].clone(), k);
            if eps[a] == 0 {
                gamma.push(e);
            } else {
                delta.push(e);
            }
        }
        let vertices = q.ids.iter().cloned().zip(eps.iter().copied()).collect();
        BipartiteQuiver::new(vertices, &gamma, &delta)
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, v: usize) -> &str {
        &self.ids[v]
    }

    pub fn eps(&self) -> &[u8] {
        &self.eps
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        lookup(&self.ids, id).ok()
    }

    pub fn index(&self, id: &str) -> Result<usize, GraphError> {
        lookup(&self.ids, id)
    }

    pub fn gamma_neighbors(&self, v: usize) -> &[(usize, u32)] {
        &self.gamma[v]
    }

    pub fn delta_neighbors(&self, v: usize) -> &[(usize, u32)] {
        &self.delta[v]
    }

    /// Neighbors along arrows into `v`.
    pub fn in_neighbors(&self, v: usize) -> &[(usize, u32)] {
        if self.eps[v] == 0 {
            &self.delta[v]
        } else {
            &self.gamma[v]
        }
    }

    /// Neighbors along arrows out of `v`.
    pub fn out_neighbors(&self, v: usize) -> &[(usize, u32)] {
        if self.eps[v] == 0 {
            &self.gamma[v]
        } else {
            &self.delta[v]
        }
    }

    fn edges_of(adj: &[Vec<(usize, u32)>]) -> Vec<(usize, usize, u32)> {
        let mut out = Vec::new();
        for (a, l) in adj.iter().enumerate() {
            for &(b, k) in l {
                if a < b {
                    out.push((a, b, k));
                }
            }
        }
        out
    }

    /// Red edges `(u, v, multiplicity)` with `u < v`.
    pub fn gamma_edges(&self) -> Vec<(usize, usize, u32)> {
        Self::edges_of(&self.gamma)
    }

    /// Blue edges `(u, v, multiplicity)` with `u < v`.
    pub fn delta_edges(&self) -> Vec<(usize, usize, u32)> {
        Self::edges_of(&self.delta)
    }

    pub fn is_simple(&self) -> bool {
        self.gamma.iter().chain(&self.delta).all(|l| l.iter().all(|&(_, k)| k == 1))
    }

    fn matrix_of(&self, adj: &[Vec<(usize, u32)>]) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.len());
        for (a, l) in adj.iter().enumerate() {
            for &(b, k) in l {
                m.set(a, b, k as i64);
            }
        }
        m
    }

    pub fn gamma_matrix(&self) -> IntMatrix {
        self.matrix_of(&self.gamma)
    }

    pub fn delta_matrix(&self) -> IntMatrix {
        self.matrix_of(&self.delta)
    }

    /// `A_Γ A_Δ − A_Δ A_Γ`.
    pub fn commutator(&self) -> IntMatrix {
        let (g, d) = (self.gamma_matrix(), self.delta_matrix());
        g.mul(&d).sub(&d.mul(&g))
    }

    pub fn to_quiver(&self) -> Quiver {
        let mut arrows = BTreeMap::new();
        for (a, b, k) in self.gamma_edges() {
            let (s, t) = if self.eps[a] == 0 { (a, b) } else { (b, a) };
            arrows.insert((s, t), k);
        }
        for (a, b, k) in self.delta_edges() {
            let (s, t) = if self.eps[a] == 1 { (a, b) } else { (b, a) };
            arrows.insert((s, t), k);
        }
        Quiver { ids: self.ids.clone(), arrows }
    }

    /// Swaps the two edge colors.
    pub fn color_dual(&self) -> BipartiteQuiver {
        BipartiteQuiver {
            ids: self.ids.clone(),
            eps: self.eps.clone(),
            gamma: self.delta.clone(),
            delta: self.gamma.clone(),
        }
    }

    /// Replaces every color ε by 1 − ε.
    pub fn flip_eps(&self) -> BipartiteQuiver {
        BipartiteQuiver {
            ids: self.ids.clone(),
            eps: self.eps.iter().map(|e| 1 - e).collect(),
            gamma: self.gamma.clone(),
            delta: self.delta.clone(),
        }
    }

    /// Every edge multiplicity scaled by `k`.
    pub fn scale_multiplicities(&self, k: u32) -> BipartiteQuiver {
        let scale = |adj: &Vec<Vec<(usize, u32)>>| {
            adj.iter().map(|l| l.iter().map(|&(b, m)| (b, m * k)).collect()).collect()
        };
        BipartiteQuiver {
            ids: self.ids.clone(),
            eps: self.eps.clone(),
            gamma: scale(&self.gamma),
            delta: scale(&self.delta),
        }
    }

    fn raw_edges(&self) -> (Vec<(String, u8)>, Vec<(String, String, u32)>, Vec<(String, String, u32)>) {
        let verts = self.ids.iter().cloned().zip(self.eps.iter().copied()).collect();
        let name = |l: Vec<(usize, usize, u32)>| {
            l.into_iter().map(|(a, b, k)| (self.ids[a].clone(), self.ids[b].clone(), k)).collect()
        };
        (verts, name(self.gamma_edges()), name(self.delta_edges()))
    }

    /// Same graph with vertex ids rewritten.
    pub fn relabel(&self, f: impl Fn(&str) -> String) -> Result<BipartiteQuiver, GraphError> {
        let (v, g, d) = self.raw_edges();
        let v = v.into_iter().map(|(s, e)| (f(&s), e)).collect();
        let g: Vec<_> = g.into_iter().map(|(a, b, k)| (f(&a), f(&b), k)).collect();
        let d: Vec<_> = d.into_iter().map(|(a, b, k)| (f(&a), f(&b), k)).collect();
        BipartiteQuiver::new(v, &g, &d)
    }

    /// Connected components of Γ ∪ Δ, each sorted, ordered by first vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        components_of(self.len(), |v| {
            self.gamma[v].iter().chain(&self.delta[v]).map(|&(b, _)| b).collect()
        })
    }

    /// Connected components of Γ alone.
    pub fn gamma_components(&self) -> Vec<Vec<usize>> {
        components_of(self.len(), |v| self.gamma[v].iter().map(|&(b, _)| b).collect())
    }

    /// Connected components of Δ alone.
    pub fn delta_components(&self) -> Vec<Vec<usize>> {
        components_of(self.len(), |v| self.delta[v].iter().map(|&(b, _)| b).collect())
    }

    /// Induced subgraph on the given vertex indices.
    pub fn induced(&self, verts: &[usize]) -> BipartiteQuiver {
        let keep: BTreeSet<usize> = verts.iter().copied().collect();
        let (v, g, d) = self.raw_edges();
        let v = v.into_iter().enumerate().filter(|(i, _)| keep.contains(i)).map(|(_, x)| x).collect();
        let inside = |l: Vec<(String, String, u32)>| -> Vec<(String, String, u32)> {
            l.into_iter()
                .filter(|(a, b, _)| {
                    keep.contains(&self.index_of(a).unwrap()) && keep.contains(&self.index_of(b).unwrap())
                })
                .collect()
        };
        BipartiteQuiver::new(v, &inside(g), &inside(d)).expect("induced subgraph of a valid graph")
    }

    /// Quiver JSON: `{"vertices":[{"id","eps"}],"arrows":[[u,v,k]]}`.
    pub fn to_quiver_json(&self) -> String {
        let q = self.to_quiver();
        let doc = QuiverJson {
            vertices: self
                .ids
                .iter()
                .zip(&self.eps)
                .map(|(id, &eps)| VertexJson { id: id.clone(), eps })
                .collect(),
            arrows: q.arrows().map(|(a, b, k)| (self.ids[a].clone(), self.ids[b].clone(), k)).collect(),
        };
        serde_json::to_string(&doc).expect("serializable")
    }

    pub fn from_quiver_json(text: &str) -> Result<Self, GraphError> {
        let doc: QuiverJson = serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
        let ids: Vec<String> = doc.vertices.iter().map(|v| v.id.clone()).collect();
        let q = Quiver::new(ids, &doc.arrows)?;
        let mut eps = vec![0u8; q.len()];
        for v in &doc.vertices {
            eps[q.index_of(&v.id).expect("id just inserted")] = v.eps;
        }
        BipartiteQuiver::from_quiver(&q, &eps)
    }
}

pub(crate) fn components_of(n: usize, nbrs: impl Fn(usize) -> Vec<usize>) -> Vec<Vec<usize>> {
    let mut comp = vec![usize::MAX; n];
    let mut out = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        comp[s] = id;
        let mut stack = vec![s];
        let mut members = vec![s];
        while let Some(v) = stack.pop() {
            for w in nbrs(v) {
                if comp[w] == usize::MAX {
                    comp[w] = id;
                    stack.push(w);
                    members.push(w);
                }
            }
        }
        members.sort_unstable();
        out.push(members);
    }
    out
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct VertexJson {
    pub id: String,
    pub eps: u8,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuiverJson {
    vertices: Vec<VertexJson>,
    #[serde(default)]
    arrows: Vec<(String, String, u32)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub(crate) struct BigraphJson {
    pub vertices: Vec<VertexJson>,
    #[serde(default)]
    pub gamma: Vec<(String, String)>,
    #[serde(default)]
    pub delta: Vec<(String, String)>,
}

/// Bipartite bigraph: a bipartite quiver whose edges are all simple.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bigraph(BipartiteQuiver);

impl Deref for Bigraph {
    type Target = BipartiteQuiver;

    fn deref(&self) -> &BipartiteQuiver {
        &self.0
    }
}

impl AsRef<BipartiteQuiver> for Bigraph {
    fn as_ref(&self) -> &BipartiteQuiver {
        &self.0
    }
}

impl TryFrom<BipartiteQuiver> for Bigraph {
    type Error = GraphError;

    fn try_from(q: BipartiteQuiver) -> Result<Self, GraphError> {
        for (a, b, k) in q.gamma_edges().into_iter().chain(q.delta_edges()) {
            if k > 1 {
                return Err(GraphError::Multiplicity(q.ids[a].clone(), q.ids[b].clone(), k));
            }
        }
        Ok(Bigraph(q))
    }
}

impl Bigraph {
    pub fn new(
        vertices: Vec<(String, u8)>,
        gamma: &[(String, String)],
        delta: &[(String, String)],
    ) -> Result<Self, GraphError> {
        let lift = |l: &[(String, String)]| -> Vec<(String, String, u32)> {
            l.iter().map(|(a, b)| (a.clone(), b.clone(), 1)).collect()
        };
        Ok(Bigraph(BipartiteQuiver::new(vertices, &lift(gamma), &lift(delta))?))
    }

    /// Convenience constructor over string slices.
    pub fn from_strs(vertices: &[(&str, u8)], gamma: &[(&str, &str)], delta: &[(&str, &str)]) -> Result<Self, GraphError> {
        let own = |l: &[(&str, &str)]| -> Vec<(String, String)> {
            l.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
        };
        Bigraph::new(
            vertices.iter().map(|(s, e)| (s.to_string(), *e)).collect(),
            &own(gamma),
            &own(delta),
        )
    }

    pub fn as_quiver(&self) -> &BipartiteQuiver {
        &self.0
    }

    pub fn into_quiver(self) -> BipartiteQuiver {
        self.0
    }

    pub fn color_dual(&self) -> Bigraph {
        Bigraph(self.0.color_dual())
    }

    pub fn flip_eps(&self) -> Bigraph {
        Bigraph(self.0.flip_eps())
    }

    pub fn relabel(&self, f: impl Fn(&str) -> String) -> Result<Bigraph, GraphError> {
        Ok(Bigraph(self.0.relabel(f)?))
    }

    pub fn induced(&self, verts: &[usize]) -> Bigraph {
        Bigraph(self.0.induced(verts))
    }

    pub(crate) fn to_json_doc(&self) -> BigraphJson {
        let pairs = |l: Vec<(usize, usize, u32)>| -> Vec<(String, String)> {
            l.into_iter().map(|(a, b, _)| (self.ids[a].clone(), self.ids[b].clone())).collect()
        };
        BigraphJson {
            vertices: self
                .ids
                .iter()
                .zip(&self.eps)
                .map(|(id, &eps)| VertexJson { id: id.clone(), eps })
                .collect(),
            gamma: pairs(self.gamma_edges()),
            delta: pairs(self.delta_edges()),
        }
    }

    pub(crate) fn from_json_doc(doc: BigraphJson) -> Result<Self, GraphError> {
        let verts = doc.vertices.into_iter().map(|v| (v.id, v.eps)).collect();
        Bigraph::new(verts, &doc.gamma, &doc.delta)
    }

    /// Bigraph JSON: `{"vertices":[{"id","eps"}],"gamma":[[u,v]],"delta":[[u,v]]}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_json_doc()).expect("serializable")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_doc()).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, GraphError> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Strict {
            vertices: Vec<VertexJson>,
            #[serde(default)]
            gamma: Vec<(String, String)>,
            #[serde(default)]
            delta: Vec<(String, String)>,
        }
        let s: Strict = serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
        Bigraph::from_json_doc(BigraphJson { vertices: s.vertices, gamma: s.gamma, delta: s.delta })
    }
}

/// Either JSON format: quiver documents carry an `arrows` key.
pub fn parse_graph_json(text: &str) -> Result<BipartiteQuiver, GraphError> {
    let v: serde_json::Value = serde_json::from_str(text).map_err(|e| GraphError::Json(e.to_string()))?;
    if v.get("arrows").is_some() {
        BipartiteQuiver::from_quiver_json(text)
    } else {
        Ok(Bigraph::from_json(text)?.into_quiver())
    }
}

/// The quiver of a bigraph: Γ edges point from color 0, Δ edges from color 1.
pub fn quiver_from_bigraph(g: &Bigraph) -> Quiver {
    g.to_quiver()
}

/// Inverse of [`quiver_from_bigraph`].
pub fn bigraph_from_quiver(q: &Quiver, eps: &[u8]) -> Result<Bigraph, GraphError> {
    Bigraph::try_from(BipartiteQuiver::from_quiver(q, eps)?)
}

/// `A_Γ A_Δ − A_Δ A_Γ` for a bigraph.
pub fn commutator(g: &BipartiteQuiver) -> IntMatrix {
    g.commutator()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(x: &str) -> String {
        x.to_string()
    }

    fn path3() -> Quiver {
        Quiver::new(vec![s("a"), s("b"), s("c")], &[(s("a"), s("b"), 1), (s("b"), s("c"), 1)]).unwrap()
    }

    #[test]
    fn a3_mutation_at_middle() {
        let q = mutate(&path3(), "b").unwrap();
        let got: Vec<_> = q.arrows().map(|(a, b, k)| (q.ids()[a].as_str(), q.ids()[b].as_str(), k)).collect();
        assert_eq!(got, vec![("a", "c", 1), ("b", "a", 1), ("c", "b", 1)]);
    }

    #[test]
    fn mutation_is_involutive_on_path() {
        let q = path3();
        for v in ["a", "b", "c"] {
            assert_eq!(mutate(&mutate(&q, v).unwrap(), v).unwrap(), q);
        }
    }

    #[test]
    fn two_cycles_cancel_with_multiplicity() {
        // a -> b -> c with c -> a twice: mutation at b adds a -> c, cancelling one c -> a.
        let q = Quiver::new(
            vec![s("a"), s("b"), s("c")],
            &[(s("a"), s("b"), 1), (s("b"), s("c"), 1), (s("c"), s("a"), 2)],
        )
        .unwrap();
        let m = mutate(&q, "b").unwrap();
        assert_eq!(m.multiplicity(2, 0), 1);
        assert_eq!(m.multiplicity(0, 2), 0);
    }

    #[test]
    fn constructor_rejects_two_cycles_and_loops() {
        let e = Quiver::new(vec![s("a"), s("b")], &[(s("a"), s("b"), 1), (s("b"), s("a"), 1)]).unwrap_err();
        assert_eq!(e.code(), "two-cycle");
        let e = Quiver::new(vec![s("a")], &[(s("a"), s("a"), 1)]).unwrap_err();
        assert_eq!(e.code(), "self-loop");
    }

    #[test]
    fn json_error_codes_are_distinct() {
        let dup = r#"{"vertices":[{"id":"a","eps":0},{"id":"a","eps":1}],"gamma":[],"delta":[]}"#;
        let shared = r#"{"vertices":[{"id":"a","eps":0},{"id":"b","eps":1}],"gamma":[["a","b"]],"delta":[["b","a"]]}"#;
        let mono = r#"{"vertices":[{"id":"a","eps":0},{"id":"b","eps":0}],"gamma":[["a","b"]],"delta":[]}"#;
        let codes: Vec<&str> = [dup, shared, mono].iter().map(|t| Bigraph::from_json(t).unwrap_err().code()).collect();
        assert_eq!(codes, vec!["duplicate-vertex", "shared-edge", "monochromatic-edge"]);
    }

    #[test]
    fn single_edge_directions() {
        let g = Bigraph::from_strs(&[("a", 0), ("b", 1)], &[("a", "b")], &[]).unwrap();
        let q = quiver_from_bigraph(&g);
        assert_eq!(q.arrows().collect::<Vec<_>>(), vec![(0, 1, 1)]);
        let g = Bigraph::from_strs(&[("a", 1), ("b", 0)], &[], &[("a", "b")]).unwrap();
        assert_eq!(quiver_from_bigraph(&g).arrows().collect::<Vec<_>>(), vec![(0, 1, 1)]);
    }

    #[test]
    fn bigraph_from_quiver_rejects_multiplicity() {
        let q = Quiver::new(vec![s("a"), s("b")], &[(s("a"), s("b"), 2)]).unwrap();
        assert_eq!(bigraph_from_quiver(&q, &[0, 1]).unwrap_err().code(), "multiplicity");
        assert_eq!(bigraph_from_quiver(&q, &[0, 0]).unwrap_err().code(), "monochromatic-edge");
    }

    #[test]
    fn commutator_of_small_counterexample() {
        // Γ = a–b–c, Δ = a–b'. Not commuting.
        let g = Bigraph::from_strs(
            &[("a", 0), ("b", 1), ("c", 0), ("b'", 1)],
            &[("a", "b"), ("b", "c")],
            &[("a", "b'")],
        )
        .unwrap();
        let c = commutator(&g);
        assert!(!c.is_zero());
        // the only nonzero entries sit at (b, b') and (b', b); (c, b') is zero
        let (ib, ib2, ic) = (g.index_of("b").unwrap(), g.index_of("b'").unwrap(), g.index_of("c").unwrap());
        assert_eq!(c.get(ib, ib2), 1);
        assert_eq!(c.get(ib2, ib), -1);
        assert_eq!(c.get(ic, ib2), 0);
        assert_eq!(c.nonzero().len(), 2);
        let q = quiver_from_bigraph(&g);
        assert!(!is_recurrent(&q, g.eps()).unwrap());
        assert!(!is_recurrent_by_matrices(&q, g.eps()).unwrap());
    }

    #[test]
    fn quiver_json_roundtrip() {
        let g = Bigraph::from_strs(&[("a", 0), ("b", 1), ("c", 0)], &[("a", "b")], &[("b", "c")])
            .unwrap()
            .into_quiver()
            .scale_multiplicities(2);
        let text = g.to_quiver_json();
        assert_eq!(BipartiteQuiver::from_quiver_json(&text).unwrap(), g);
        assert_eq!(parse_graph_json(&text).unwrap(), g);
    }
}
