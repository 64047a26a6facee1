//! Generators for the admissible bigraphs: tensor products, twists, the three
//! folded families, the eight exceptional cases, and the color dual.
//!
//! Vertex naming:
//! - tensor and the tensor part of folded families: `r{i}c{j}`, 1-based, `i`
//!   indexing the red factor and `j` the blue factor;
//! - twists: `a{i}` and `b{i}` for the two copies of node `i`;
//! - the extra component of a folded family: `e{k}`.

use crate::ade::{is_admissible, AdeType};
use crate::graph::{Bigraph, GraphError};
use serde::Deserialize;
use sha2::{Digest, Sha256};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("parameter out of range: {0}")]
    Range(String),
    #[error("unknown exceptional bigraph `{0}`")]
    UnknownExceptional(String),
    #[error("exceptional data `{0}` failed its integrity check: {1}")]
    Integrity(String, String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// One member of the classification.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FamilySpec {
    Tensor(AdeType, AdeType),
    Twist(AdeType),
    ADpow(usize, usize),
    ApowD(usize, usize),
    EE(usize),
    Exceptional(String),
}

impl FamilySpec {
    pub fn build(&self) -> Result<Bigraph, FamilyError> {
        match self {
            FamilySpec::Tensor(a, b) => Ok(tensor(*a, *b)),
            FamilySpec::Twist(a) => Ok(twist(*a)),
            FamilySpec::ADpow(m, n) => family_ad_pow(*m, *n),
            FamilySpec::ApowD(m, n) => family_a_pow_d(*m, *n),
            FamilySpec::EE(n) => family_ee(*n),
            FamilySpec::Exceptional(name) => exceptional(name),
        }
    }

    /// `(h, h′)` predicted by the construction.
    pub fn coxeter_pair(&self) -> Result<(u32, u32), FamilyError> {
        Ok(match self {
            FamilySpec::Tensor(a, b) => (a.coxeter_number(), b.coxeter_number()),
            FamilySpec::Twist(a) => (a.coxeter_number(), a.coxeter_number()),
            FamilySpec::ADpow(m, n) | FamilySpec::ApowD(m, n) => (2 * *m as u32, 2 * *n as u32),
            FamilySpec::EE(n) => (12, 2 * *n as u32),
            FamilySpec::Exceptional(name) => {
                let e = manifest_entry(name)?;
                (e.h, e.h_prime)
            }
        })
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Tensor(a, b) => write!(f, "tensor({a},{b})"),
            FamilySpec::Twist(a) => write!(f, "twist({a})"),
            FamilySpec::ADpow(m, n) => write!(f, "ADpow({m},{n})"),
            FamilySpec::ApowD(m, n) => write!(f, "ApowD({m},{n})"),
            FamilySpec::EE(n) => write!(f, "EE({n})"),
            FamilySpec::Exceptional(name) => write!(f, "exc:{name}"),
        }
    }
}

pub(crate) fn grid_id(i: usize, j: usize) -> String {
    format!("r{}c{}", i + 1, j + 1)
}

/// Edge list, bipartition and size of a diagram in a fixed labelling.
#[derive(Debug, Clone)]
pub(crate) struct Shape {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub eps: Vec<u8>,
}

impl Shape {
    pub fn of(t: AdeType) -> Shape {
        Shape { n: t.rank(), edges: t.edges(), eps: t.eps() }
    }

    /// `D_r` in the standard labelling, allowing `r = 3` (forks 1, 2 on 0).
    pub fn d(r: usize) -> Shape {
        assert!(r >= 3);
        let mut edges: Vec<_> = (1..r - 1).map(|i| (i - 1, i)).collect();
        edges.push((r - 3, r - 1));
        let mut eps: Vec<u8> = (0..r).map(|i| (i % 2) as u8).collect();
        eps[r - 1] = 1 - eps[r - 3];
        Shape { n: r, edges, eps }
    }
}

pub(crate) fn tensor_shapes(a: &Shape, b: &Shape) -> Bigraph {
    let mut verts = Vec::new();
    for i in 0..a.n {
        for j in 0..b.n {
            verts.push((grid_id(i, j), (a.eps[i] + b.eps[j]) % 2));
        }
    }
    let mut gamma = Vec::new();
    for &(x, y) in &a.edges {
        for j in 0..b.n {
            gamma.push((grid_id(x, j), grid_id(y, j)));
        }
    }
    let mut delta = Vec::new();
    for &(x, y) in &b.edges {
        for i in 0..a.n {
            delta.push((grid_id(i, x), grid_id(i, y)));
        }
    }
    Bigraph::new(verts, &gamma, &delta).expect("tensor construction is valid")
}

/// `Λ ⊗ Λ′`: red edges along Λ inside each Λ′-slice, blue edges along Λ′
/// inside each Λ-slice, ε added mod 2.
pub fn tensor(a: AdeType, b: AdeType) -> Bigraph {
    tensor_shapes(&Shape::of(a), &Shape::of(b))
}

/// `Λ × Λ`: two red copies of Λ, blue edges crossing between the copies.
pub fn twist(a: AdeType) -> Bigraph {
    let eps = a.eps();
    let one = |i: usize| format!("a{}", i + 1);
    let two = |i: usize| format!("b{}", i + 1);
    let mut verts = Vec::new();
    for (i, &e) in eps.iter().enumerate() {
        verts.push((one(i), e));
        verts.push((two(i), e));
    }
    let mut gamma = Vec::new();
    let mut delta = Vec::new();
    for (u, w) in a.edges() {
        gamma.push((one(u), one(w)));
        gamma.push((two(u), two(w)));
        delta.push((one(u), two(w)));
        delta.push((one(w), two(u)));
    }
    Bigraph::new(verts, &gamma, &delta).expect("twist construction is valid")
}

/// Vertices of `D_{n+1}` matched with vertex `j` of `A_{2n−1}`: the two
/// mirror vertices `j` and `2n−2−j` share a non-fork vertex, and the middle
/// vertex meets both forks.
pub fn a_to_d_correspondence(n: usize, j: usize) -> Vec<usize> {
    assert!(n >= 2 && j < 2 * n - 1);
    let mid = n - 1;
    match j.cmp(&mid) {
        std::cmp::Ordering::Equal => vec![n - 1, n],
        std::cmp::Ordering::Less => vec![j],
        std::cmp::Ordering::Greater => vec![2 * n - 2 - j],
    }
}

/// Vertices of the second E₆ matched with vertex `x` of the first, in the
/// standard labelling (path 0–4, vertex 5 on vertex 2).
pub fn e6_correspondence(x: usize) -> &'static [usize] {
    match x {
        0 | 4 => &[5],
        1 | 3 => &[2],
        2 => &[1, 3],
        5 => &[0, 4],
        _ => panic!("E6 vertex out of range"),
    }
}

fn extra_id(k: usize) -> String {
    format!("e{}", k + 1)
}

fn check_range(ok: bool, what: String) -> Result<(), FamilyError> {
    if ok {
        Ok(())
    } else {
        Err(FamilyError::Range(what))
    }
}

/// Glues an extra component to the last slice of a tensor product.
///
/// `links[k]` lists the vertices of the final slice joined to extra vertex `k`.
fn glue(
    base: &Bigraph,
    extra: &Shape,
    links: &[Vec<String>],
    extra_red: bool,
) -> Result<Bigraph, FamilyError> {
    let mut verts: Vec<(String, u8)> =
        base.ids().iter().cloned().zip(base.eps().iter().copied()).collect();
    for (k, l) in links.iter().enumerate() {
        let anchor = base.index(&l[0])?;
        verts.push((extra_id(k), 1 - base.eps()[anchor]));
    }
    let pairs = |l: Vec<(usize, usize, u32)>| -> Vec<(String, String)> {
        l.into_iter().map(|(a, b, _)| (base.id(a).to_string(), base.id(b).to_string())).collect()
    };
    let mut gamma = pairs(base.gamma_edges());
    let mut delta = pairs(base.delta_edges());
    let inner: Vec<(String, String)> =
        extra.edges.iter().map(|&(a, b)| (extra_id(a), extra_id(b))).collect();
    let mut cross = Vec::new();
    for (k, l) in links.iter().enumerate() {
        for v in l {
            cross.push((v.clone(), extra_id(k)));
        }
    }
    if extra_red {
        gamma.extend(inner);
        delta.extend(cross);
    } else {
        delta.extend(inner);
        gamma.extend(cross);
    }
    Ok(Bigraph::new(verts, &gamma, &delta)?)
}

/// `(AD^{m−1})_n`: `A_{m−1} ⊗ D_{n+1}` with the last blue copy of `D_{n+1}`
/// joined by red edges to an extra blue `A_{2n−1}`.
pub fn family_ad_pow(m: usize, n: usize) -> Result<Bigraph, FamilyError> {
    check_range(m >= 2 && n >= 2, format!("ADpow({m},{n}) needs m, n >= 2"))?;
    let base = tensor_shapes(&Shape::of(AdeType::a(m - 1)), &Shape::d(n + 1));
    let links: Vec<Vec<String>> = (0..2 * n - 1)
        .map(|j| a_to_d_correspondence(n, j).into_iter().map(|k| grid_id(m - 2, k)).collect())
        .collect();
    glue(&base, &Shape::of(AdeType::a(2 * n - 1)), &links, false)
}

/// `(A^{m−1}D)_n`: `A_{m−1} ⊗ A_{2n−1}` with the last blue copy of `A_{2n−1}`
/// joined by red edges to an extra blue `D_{n+1}`.
pub fn family_a_pow_d(m: usize, n: usize) -> Result<Bigraph, FamilyError> {
    check_range(m >= 2 && n >= 2, format!("ApowD({m},{n}) needs m, n >= 2"))?;
    let base = tensor(AdeType::a(m - 1), AdeType::a(2 * n - 1));
    let mut links = vec![Vec::new(); n + 1];
    for j in 0..2 * n - 1 {
        for k in a_to_d_correspondence(n, j) {
            links[k].push(grid_id(m - 2, j));
        }
    }
    glue(&base, &Shape::d(n + 1), &links, false)
}

/// `EE^{n−1}`: `E₆ ⊗ A_{n−1}` with the last red copy of E₆ joined by blue
/// edges to an extra red E₆.
pub fn family_ee(n: usize) -> Result<Bigraph, FamilyError> {
    check_range(n >= 2, format!("EE({n}) needs n >= 2"))?;
    let base = tensor(AdeType::e(6), AdeType::a(n - 1));
    let mut links = vec![Vec::new(); 6];
    for x in 0..6 {
        for &y in e6_correspondence(x) {
            links[y].push(grid_id(x, n - 2));
        }
    }
    glue(&base, &Shape::of(AdeType::e(6)), &links, true)
}

/// Swaps red and blue.
pub fn color_dual(g: &Bigraph) -> Bigraph {
    g.color_dual()
}

#[derive(Debug, Clone, Deserialize)]
pub struct ManifestEntry {
    pub name: String,
    pub file: String,
    pub sha256: String,
    pub vertices: usize,
    pub h: u32,
    pub h_prime: u32,
}

const MANIFEST: &str = include_str!("../data/exceptional/manifest.json");

const DATA: [(&str, &str); 8] = [
    ("D6-star-D6.json", include_str!("../data/exceptional/D6-star-D6.json")),
    ("E8-star-E8.json", include_str!("../data/exceptional/E8-star-E8.json")),
    ("E8-star-E8-eq-E8.json", include_str!("../data/exceptional/E8-star-E8-eq-E8.json")),
    ("D6-star-D6-eq-D6.json", include_str!("../data/exceptional/D6-star-D6-eq-D6.json")),
    ("E6-eq-E6-star-E6-eq-E6.json", include_str!("../data/exceptional/E6-eq-E6-star-E6-eq-E6.json")),
    ("D5-box-A7.json", include_str!("../data/exceptional/D5-box-A7.json")),
    ("E7-box-D10.json", include_str!("../data/exceptional/E7-box-D10.json")),
    ("E8-star-E8-eq-E8-eq-E8.json", include_str!("../data/exceptional/E8-star-E8-eq-E8-eq-E8.json")),
];

/// The eight exceptional names in canonical form.
pub const EXCEPTIONAL_NAMES: [&str; 8] = [
    "D6*D6",
    "E8*E8",
    "E8*E8≡E8",
    "D6*D6≡D6",
    "E6≡E6*E6≡E6",
    "D5⊠A7",
    "E7⊠D10",
    "E8*E8≡E8≡E8",
];

pub fn manifest() -> Vec<ManifestEntry> {
    serde_json::from_str(MANIFEST).expect("shipped manifest parses")
}

/// Canonical name for an exceptional label; `=` stands for `≡` and `x` for `⊠`.
pub fn canonical_exceptional_name(name: &str) -> Option<&'static str> {
    let norm: String = name.trim().replace('=', "≡").replace('x', "⊠").replace('X', "⊠");
    EXCEPTIONAL_NAMES.iter().copied().find(|n| *n == norm)
}

fn manifest_entry(name: &str) -> Result<ManifestEntry, FamilyError> {
    let canon = canonical_exceptional_name(name).ok_or_else(|| FamilyError::UnknownExceptional(name.to_string()))?;
    Ok(manifest().into_iter().find(|e| e.name == canon).expect("every canonical name is in the manifest"))
}

/// Loads an exceptional bigraph and checks checksum, size, and `(h, h′)`.
pub fn exceptional(name: &str) -> Result<Bigraph, FamilyError> {
    let entry = manifest_entry(name)?;
    let text = DATA
        .iter()
        .find(|(f, _)| *f == entry.file)
        .map(|(_, t)| *t)
        .ok_or_else(|| FamilyError::Integrity(entry.name.clone(), "missing data file".into()))?;
    let digest = hex::encode(Sha256::digest(text.as_bytes()));
    if digest != entry.sha256 {
        return Err(FamilyError::Integrity(entry.name, format!("sha256 {digest} != {}", entry.sha256)));
    }
    let g = Bigraph::from_json(text)?;
    if g.len() != entry.vertices {
        return Err(FamilyError::Integrity(entry.name, format!("{} vertices, expected {}", g.len(), entry.vertices)));
    }
    let report = is_admissible(&g);
    if report.coxeter_pair() != Some((entry.h, entry.h_prime)) {
        return Err(FamilyError::Integrity(entry.name, format!("admissibility report {:?}", report.coxeter_pair())));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tensor_counts() {
        let g = tensor(AdeType::a(3), AdeType::a(2));
        assert_eq!((g.len(), g.gamma_edges().len(), g.delta_edges().len()), (6, 4, 3));
        assert_eq!(tensor(AdeType::d(5), AdeType::a(3)).len(), 15);
        let g = tensor(AdeType::a(1), AdeType::a(1));
        assert_eq!((g.len(), g.gamma_edges().len(), g.delta_edges().len()), (1, 0, 0));
    }

    #[test]
    fn twist_counts() {
        let g = twist(AdeType::a(3));
        assert_eq!((g.len(), g.gamma_edges().len(), g.delta_edges().len()), (6, 4, 4));
        let g = twist(AdeType::d(5));
        assert_eq!((g.len(), g.gamma_edges().len(), g.delta_edges().len()), (10, 8, 8));
        assert_eq!(twist(AdeType::a(1)).gamma_edges().len(), 0);
    }

    #[test]
    fn folded_family_sizes() {
        assert_eq!(family_ad_pow(4, 5).unwrap().len(), 27);
        assert_eq!(family_a_pow_d(4, 5).unwrap().len(), 33);
        assert_eq!(family_a_pow_d(2, 2).unwrap().len(), 6);
        assert_eq!(family_ee(5).unwrap().len(), 30);
        assert_eq!(family_ee(2).unwrap().len(), 12);
        assert!(family_ad_pow(1, 3).is_err());
        assert!(family_ee(1).is_err());
    }

    #[test]
    fn exceptional_aliases() {
        assert_eq!(canonical_exceptional_name("E8*E8=E8=E8"), Some("E8*E8≡E8≡E8"));
        assert_eq!(canonical_exceptional_name("D5xA7"), Some("D5⊠A7"));
        assert_eq!(canonical_exceptional_name("E9*E9"), None);
        assert!(matches!(exceptional("nope"), Err(FamilyError::UnknownExceptional(_))));
    }
}
