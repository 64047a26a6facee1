//! Labeled mutations and the twist operators `μ̄_v = s_v ∘ μ̃_{v₁} ∘ μ̃_{v₂}`
//! on `Q(Λ × Λ)`, with an exact check of the Coxeter relations.

use crate::ade::AdeType;
use crate::birational::random_point;
use crate::families::twist;
use crate::graph::{GraphError, Quiver};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TwistError {
    #[error("labels must be positive; `{0}` is not")]
    NonPositive(String),
    #[error("{expected} vertices but {got} labels")]
    Length { expected: usize, got: usize },
    #[error("node {0} has no copies a{0}, b{0} in the quiver")]
    MissingNode(usize),
    #[error("the quiver is not of twist shape at node {0}")]
    NotTwistShape(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A quiver with a positive rational label on every vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledQuiver {
    quiver: Quiver,
    labels: Vec<BigRational>,
}

impl LabeledQuiver {
    pub fn new(quiver: Quiver, labels: Vec<BigRational>) -> Result<Self, TwistError> {
        if labels.len() != quiver.len() {
            return Err(TwistError::Length { expected: quiver.len(), got: labels.len() });
        }
        if let Some(i) = labels.iter().position(|x| *x <= BigRational::zero()) {
            return Err(TwistError::NonPositive(quiver.ids()[i].clone()));
        }
        Ok(LabeledQuiver { quiver, labels })
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn labels(&self) -> &[BigRational] {
        &self.labels
    }
}

/// `μ̃_v`: mutate the quiver at `v` and set
/// `ρ′(v) ρ(v) = Π_{u→v} ρ(u) + Π_{v→w} ρ(w)`.
pub fn labeled_mutate(lq: &LabeledQuiver, v: usize) -> LabeledQuiver {
    let prod = |arrows: Vec<(usize, u32)>| {
        arrows.into_iter().fold(BigRational::one(), |acc, (u, k)| acc * num_traits::pow(lq.labels[u].clone(), k as usize))
    };
    let num = prod(lq.quiver.in_arrows(v)) + prod(lq.quiver.out_arrows(v));
    let mut labels = lq.labels.clone();
    labels[v] = num / &lq.labels[v];
    LabeledQuiver { quiver: lq.quiver.mutate_at(v), labels }
}

/// `s`: exchange two vertices, both their labels and their arrows.
pub fn swap_vertices(lq: &LabeledQuiver, i: usize, j: usize) -> LabeledQuiver {
    let ids = lq.quiver.ids();
    let (a, b) = (ids[i].clone(), ids[j].clone());
    let quiver = lq
        .quiver
        .relabel(|s| if s == a { b.clone() } else if s == b { a.clone() } else { s.to_string() })
        .expect("a transposition keeps ids distinct");
    let mut labels = lq.labels.clone();
    labels.swap(i, j);
    LabeledQuiver { quiver, labels }
}

fn copies(q: &Quiver, node: usize) -> Result<(usize, usize), TwistError> {
    let a = q.index_of(&format!("a{}", node + 1)).ok_or(TwistError::MissingNode(node + 1))?;
    let b = q.index_of(&format!("b{}", node + 1)).ok_or(TwistError::MissingNode(node + 1))?;
    Ok((a, b))
}

/// `μ̄_v` for the 0-based node `node` of Λ, acting on a labeled `Q(Λ × Λ)`
/// with the vertex names of [`twist`].
pub fn twist_step(lq: &LabeledQuiver, node: usize) -> Result<LabeledQuiver, TwistError> {
    let (a, b) = copies(&lq.quiver, node)?;
    if lq.quiver.multiplicity(a, b) + lq.quiver.multiplicity(b, a) > 0 {
        return Err(TwistError::NotTwistShape(node + 1));
    }
    let out = swap_vertices(&labeled_mutate(&labeled_mutate(lq, b), a), a, b);
    if out.quiver != lq.quiver {
        return Err(TwistError::NotTwistShape(node + 1));
    }
    Ok(out)
}

/// `μ̄_Λ = Π_{ε=0} μ̄_v Π_{ε=1} μ̄_v`: the black nodes act first.
pub fn coxeter_element(lq: &LabeledQuiver, t: AdeType) -> Result<LabeledQuiver, TwistError> {
    let eps = t.eps();
    let mut cur = lq.clone();
    for color in [1u8, 0] {
        for v in (0..t.rank()).filter(|&v| eps[v] == color) {
            cur = twist_step(&cur, v)?;
        }
    }
    Ok(cur)
}

/// Outcome of [`check_coxeter_relations`]; `transcript` lists every failure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoxeterReport {
    pub passed: bool,
    pub checks: usize,
    pub transcript: Vec<String>,
}

fn fmt_labels(l: &[BigRational]) -> String {
    l.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

/// For `trials` seeded random labelings: `μ̄_v² = id`, `(μ̄_u μ̄_w)^{m(u,w)} = id`
/// with `m = 3` on edges of Λ and `2` otherwise, and `(μ̄_Λ)^h = id`.
pub fn check_coxeter_relations(t: AdeType, trials: usize, seed: u64) -> Result<CoxeterReport, TwistError> {
    let q = twist(t).to_quiver();
    let edges = t.edges();
    let adjacent = |u: usize, w: usize| edges.contains(&(u.min(w), u.max(w)));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = CoxeterReport { passed: true, checks: 0, transcript: Vec::new() };
    let record = |report: &mut CoxeterReport, what: String, start: &LabeledQuiver, end: &LabeledQuiver| {
        report.checks += 1;
        if end != start {
            report.passed = false;
            report.transcript.push(format!("{what}: [{}] -> [{}]", fmt_labels(&start.labels), fmt_labels(&end.labels)));
        }
    };
    for trial in 0..trials {
        let start = LabeledQuiver::new(q.clone(), random_point(q.len(), &mut rng))?;
        for u in 0..t.rank() {
            let end = twist_step(&twist_step(&start, u)?, u)?;
            record(&mut report, format!("{t} trial {trial}: (mu{})^2", u + 1), &start, &end);
            for w in u + 1..t.rank() {
                let m = if adjacent(u, w) { 3 } else { 2 };
                let mut end = start.clone();
                for _ in 0..m {
                    end = twist_step(&twist_step(&end, w)?, u)?;
                }
                record(&mut report, format!("{t} trial {trial}: (mu{} mu{})^{m}", u + 1, w + 1), &start, &end);
            }
        }
        let mut end = start.clone();
        for _ in 0..t.coxeter_number() {
            end = coxeter_element(&end, t)?;
        }
        record(&mut report, format!("{t} trial {trial}: (mu_Lambda)^{}", t.coxeter_number()), &start, &end);
    }
    Ok(report)
}
