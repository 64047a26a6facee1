//! ADE recognition, Coxeter numbers, and admissibility of bigraphs.

use crate::graph::{components_of, BipartiteQuiver, GraphError};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AdeFamily {
    A,
    D,
    E,
}

/// A simply-laced Dynkin type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AdeType {
    family: AdeFamily,
    rank: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AdeError {
    #[error("invalid Dynkin type {0}")]
    InvalidType(String),
    #[error("input graph is disconnected")]
    Disconnected,
    #[error("edge ({0}, {1}) out of range")]
    BadEdge(usize, usize),
}

impl AdeType {
    pub fn new(family: AdeFamily, rank: usize) -> Result<Self, AdeError> {
        let ok = match family {
            AdeFamily::A => rank >= 1,
            AdeFamily::D => rank >= 4,
            AdeFamily::E => (6..=8).contains(&rank),
        };
        if ok {
            Ok(AdeType { family, rank })
        } else {
            Err(AdeError::InvalidType(format!("{:?}{}", family, rank)))
        }
    }

    pub fn a(n: usize) -> Self {
        AdeType::new(AdeFamily::A, n).expect("A_n needs n >= 1")
    }

    pub fn d(n: usize) -> Self {
        AdeType::new(AdeFamily::D, n).expect("D_n needs n >= 4")
    }

    pub fn e(n: usize) -> Self {
        AdeType::new(AdeFamily::E, n).expect("E_n needs n in 6..=8")
    }

    /// `D_n`, or `A_3` when `n = 3` (the two diagrams coincide).
    pub fn d_or_a3(n: usize) -> Self {
        if n == 3 {
            AdeType::a(3)
        } else {
            AdeType::d(n)
        }
    }

    pub fn family(&self) -> AdeFamily {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn coxeter_number(&self) -> u32 {
        let r = self.rank as u32;
        match (self.family, r) {
            (AdeFamily::A, n) => n + 1,
            (AdeFamily::D, n) => 2 * n - 2,
            (AdeFamily::E, 6) => 12,
            (AdeFamily::E, 7) => 18,
            (AdeFamily::E, _) => 30,
        }
    }

    /// Edges of the standard labelling: `A_n` is the path `0..n`; `D_n` is the
    /// path `0..n-1` with `n-1` attached to `n-3`; `E_n` is the path `0..n-1`
    /// with `n-1` attached to `2`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.rank;
        match self.family {
            AdeFamily::A => (1..n).map(|i| (i - 1, i)).collect(),
            AdeFamily::D => {
                let mut e: Vec<_> = (1..n - 1).map(|i| (i - 1, i)).collect();
                e.push((n - 3, n - 1));
                e
            }
            AdeFamily::E => {
                let mut e: Vec<_> = (1..n - 1).map(|i| (i - 1, i)).collect();
                e.push((2, n - 1));
                e
            }
        }
    }

    /// Bipartition of the standard labelling with vertex 0 in color 0.
    pub fn eps(&self) -> Vec<u8> {
        let n = self.rank;
        let mut eps = vec![0u8; n];
        match self.family {
            AdeFamily::A => {
                for (i, e) in eps.iter_mut().enumerate() {
                    *e = (i % 2) as u8;
                }
            }
            AdeFamily::D | AdeFamily::E => {
                for (i, e) in eps.iter_mut().enumerate().take(n - 1) {
                    *e = (i % 2) as u8;
                }
                let anchor = if self.family == AdeFamily::D { n - 3 } else { 2 };
                eps[n - 1] = 1 - eps[anchor];
            }
        }
        eps
    }

    /// Adjacency lists of the standard labelling.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.rank];
        for (a, b) in self.edges() {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }
}

impl fmt::Display for AdeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

impl FromStr for AdeType {
    type Err = AdeError;

    fn from_str(s: &str) -> Result<Self, AdeError> {
        let s = s.trim();
        let bad = || AdeError::InvalidType(s.to_string());
        let mut chars = s.chars();
        let family = match chars.next() {
            Some('A') => AdeFamily::A,
            Some('D') => AdeFamily::D,
            Some('E') => AdeFamily::E,
            _ => return Err(bad()),
        };
        let digits = chars.as_str();
        if digits.is_empty() || digits.len() > 6 || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let rank: usize = digits.parse().map_err(|_| bad())?;
        AdeType::new(family, rank).map_err(|_| bad())
    }
}

impl Serialize for AdeType {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for AdeType {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Coxeter number of a Dynkin type.
pub fn coxeter_number(t: AdeType) -> u32 {
    t.coxeter_number()
}

/// Recognizes a connected simple graph on vertices `0..n` by its shape.
pub fn classify_component(n: usize, edges: &[(usize, usize)]) -> Result<Option<AdeType>, AdeError> {
    if n == 0 {
        return Err(AdeError::Disconnected);
    }
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        if a >= n || b >= n || a == b {
            return Err(AdeError::BadEdge(a, b));
        }
        adj[a].push(b);
        adj[b].push(a);
    }
    if components_of(n, |v| adj[v].clone()).len() != 1 {
        return Err(AdeError::Disconnected);
    }
    for l in adj.iter_mut() {
        l.sort_unstable();
        if l.windows(2).any(|w| w[0] == w[1]) {
            return Ok(None);
        }
    }
    if edges.len() != n - 1 {
        return Ok(None);
    }
    if adj.iter().any(|l| l.len() > 3) {
        return Ok(None);
    }
    let branch: Vec<usize> = (0..n).filter(|&v| adj[v].len() == 3).collect();
    match branch.len() {
        0 => Ok(Some(AdeType::a(n))),
        1 => {
            let c = branch[0];
            let mut arms: Vec<usize> = adj[c]
                .iter()
                .map(|&start| {
                    let (mut prev, mut cur, mut len) = (c, start, 1);
                    while adj[cur].len() == 2 {
                        let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
                        prev = cur;
                        cur = next;
                        len += 1;
                    }
                    len
                })
                .collect();
            arms.sort_unstable();
            Ok(match (arms[0], arms[1], arms[2]) {
                (1, 1, _) => Some(AdeType::d(n)),
                (1, 2, 2) => Some(AdeType::e(6)),
                (1, 2, 3) => Some(AdeType::e(7)),
                (1, 2, 4) => Some(AdeType::e(8)),
                _ => None,
            })
        }
        _ => Ok(None),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FailureReason {
    NotBipartite,
    SharedEdge,
    NonAdeComponent,
    NonCommuting,
    MixedCoxeter,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub vertices: Vec<String>,
    #[serde(rename = "type")]
    pub ade: Option<AdeType>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibilityReport {
    pub verdict: bool,
    pub gamma_components: Vec<Component>,
    pub delta_components: Vec<Component>,
    pub h: Option<u32>,
    pub h_prime: Option<u32>,
    pub failure_reason: Option<FailureReason>,
}

impl AdmissibilityReport {
    /// Report for input that failed to load as a bigraph.
    pub fn from_graph_error(e: &GraphError) -> Option<Self> {
        let reason = match e {
            GraphError::Monochromatic(..) => FailureReason::NotBipartite,
            GraphError::SharedEdge(..) | GraphError::TwoCycle(..) => FailureReason::SharedEdge,
            _ => return None,
        };
        Some(AdmissibilityReport {
            verdict: false,
            gamma_components: Vec::new(),
            delta_components: Vec::new(),
            h: None,
            h_prime: None,
            failure_reason: Some(reason),
        })
    }

    /// Coxeter pair when the verdict is positive.
    pub fn coxeter_pair(&self) -> Option<(u32, u32)> {
        match (self.verdict, self.h, self.h_prime) {
            (true, Some(h), Some(hp)) => Some((h, hp)),
            _ => None,
        }
    }
}

fn classify_color(g: &BipartiteQuiver, comps: Vec<Vec<usize>>, red: bool) -> Vec<Component> {
    comps
        .into_iter()
        .map(|verts| {
            let local = |v: usize| verts.binary_search(&v).expect("component member");
            let mut edges = Vec::new();
            let mut simple = true;
            for &v in &verts {
                let nbrs = if red { g.gamma_neighbors(v) } else { g.delta_neighbors(v) };
                for &(w, k) in nbrs {
                    simple &= k == 1;
                    if v < w {
                        edges.push((local(v), local(w)));
                    }
                }
            }
            let ade = if simple {
                classify_component(verts.len(), &edges).expect("components are connected")
            } else {
                None
            };
            Component { vertices: verts.iter().map(|&v| g.id(v).to_string()).collect(), ade }
        })
        .collect()
}

fn uniform_h(comps: &[Component]) -> Option<Option<u32>> {
    let mut hs = comps.iter().map(|c| c.ade.map(|t| t.coxeter_number()));
    let first = match hs.next() {
        None => return Some(None),
        Some(h) => h?,
    };
    for h in hs {
        if h? != first {
            return None;
        }
    }
    Some(Some(first))
}

/// Admissibility: every color component is ADE, the adjacency matrices
/// commute, and each color has a single Coxeter number.
pub fn is_admissible(g: &BipartiteQuiver) -> AdmissibilityReport {
    let gamma_components = classify_color(g, g.gamma_components(), true);
    let delta_components = classify_color(g, g.delta_components(), false);
    let mut report = AdmissibilityReport {
        verdict: false,
        gamma_components,
        delta_components,
        h: None,
        h_prime: None,
        failure_reason: None,
    };
    let all_ade = report.gamma_components.iter().chain(&report.delta_components).all(|c| c.ade.is_some());
    if !all_ade {
        report.failure_reason = Some(FailureReason::NonAdeComponent);
        return report;
    }
    if !g.commutator().is_zero() {
        report.failure_reason = Some(FailureReason::NonCommuting);
        return report;
    }
    match (uniform_h(&report.gamma_components), uniform_h(&report.delta_components)) {
        (Some(h), Some(hp)) => {
            report.verdict = true;
            report.h = h;
            report.h_prime = hp;
        }
        _ => report.failure_reason = Some(FailureReason::MixedCoxeter),
    }
    report
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("component graph of red edges contains an odd cycle")]
    OddCycle,
}

/// Maps `c_Γ, c_Δ : V → {0,1}` built from a 2-coloring τ of the component
/// graph of Γ: `c_Γ = τ + ε`, `c_Δ = τ`.
pub fn two_by_two_partition(g: &BipartiteQuiver) -> Result<(Vec<u8>, Vec<u8>), PartitionError> {
    let comps = g.gamma_components();
    let mut comp_of = vec![0usize; g.len()];
    for (i, c) in comps.iter().enumerate() {
        for &v in c {
            comp_of[v] = i;
        }
    }
    let mut cadj = vec![Vec::new(); comps.len()];
    for (a, b, _) in g.delta_edges() {
        let (ca, cb) = (comp_of[a], comp_of[b]);
        if ca == cb {
            return Err(PartitionError::OddCycle);
        }
        cadj[ca].push(cb);
        cadj[cb].push(ca);
    }
    let mut tau = vec![u8::MAX; comps.len()];
    for s in 0..comps.len() {
        if tau[s] != u8::MAX {
            continue;
        }
        tau[s] = 0;
        let mut stack = vec![s];
        while let Some(c) = stack.pop() {
            for &d in &cadj[c] {
                if tau[d] == u8::MAX {
                    tau[d] = 1 - tau[c];
                    stack.push(d);
                } else if tau[d] == tau[c] {
                    return Err(PartitionError::OddCycle);
                }
            }
        }
    }
    let c_delta: Vec<u8> = (0..g.len()).map(|v| tau[comp_of[v]]).collect();
    let c_gamma: Vec<u8> = (0..g.len()).map(|v| (c_delta[v] + g.eps()[v]) % 2).collect();
    Ok((c_gamma, c_delta))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star(arms: &[usize]) -> (usize, Vec<(usize, usize)>) {
        let mut edges = Vec::new();
        let mut next = 1;
        for &len in arms {
            let mut prev = 0;
            for _ in 0..len {
                edges.push((prev, next));
                prev = next;
                next += 1;
            }
        }
        (next, edges)
    }

    #[test]
    fn shapes() {
        let (n, e) = star(&[1, 1, 2]);
        assert_eq!(classify_component(n, &e).unwrap(), Some(AdeType::d(5)));
        let (n, e) = star(&[1, 2, 3]);
        assert_eq!(n, 7);
        assert_eq!(classify_component(n, &e).unwrap(), Some(AdeType::e(7)));
        let (n, e) = star(&[1, 2, 5]);
        assert_eq!(classify_component(n, &e).unwrap(), None);
        let (n, e) = star(&[2, 2, 2]);
        assert_eq!(classify_component(n, &e).unwrap(), None);
        let (n, e) = star(&[1, 1, 1, 1]);
        assert_eq!(classify_component(n, &e).unwrap(), None);
        assert_eq!(classify_component(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap(), Some(AdeType::a(5)));
        assert_eq!(classify_component(1, &[]).unwrap(), Some(AdeType::a(1)));
        assert_eq!(classify_component(3, &[(0, 1), (1, 2), (2, 0)]).unwrap(), None);
        assert_eq!(classify_component(3, &[(0, 1)]), Err(AdeError::Disconnected));
    }

    #[test]
    fn two_branch_points_rejected() {
        // D-like at both ends: affine D5.
        let e = [(0, 2), (1, 2), (2, 3), (3, 4), (3, 5)];
        assert_eq!(classify_component(6, &e).unwrap(), None);
    }

    #[test]
    fn standard_labellings_classify_to_themselves() {
        let mut types: Vec<AdeType> = (1..=9).map(AdeType::a).collect();
        types.extend((4..=9).map(AdeType::d));
        types.extend((6..=8).map(AdeType::e));
        for t in types {
            assert_eq!(classify_component(t.rank(), &t.edges()).unwrap(), Some(t), "{t}");
            let eps = t.eps();
            assert!(t.edges().iter().all(|&(a, b)| eps[a] != eps[b]), "{t}");
        }
    }

    #[test]
    fn coxeter_numbers() {
        assert_eq!(coxeter_number(AdeType::a(3)), 4);
        assert_eq!(coxeter_number(AdeType::d(6)), 10);
        assert_eq!(coxeter_number(AdeType::e(6)), 12);
        assert_eq!(coxeter_number(AdeType::e(7)), 18);
        assert_eq!(coxeter_number(AdeType::e(8)), 30);
        assert_eq!(coxeter_number(AdeType::a(1)), 2);
    }

    #[test]
    fn type_parsing() {
        assert_eq!("E6".parse::<AdeType>().unwrap(), AdeType::e(6));
        assert_eq!("D10".parse::<AdeType>().unwrap(), AdeType::d(10));
        for bad in ["E9", "D3", "A0", "B2", "A", "A-1", "a3", "A99999999999"] {
            assert!(bad.parse::<AdeType>().is_err(), "{bad}");
        }
    }
}
