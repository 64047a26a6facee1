//! Color- and ε-preserving isomorphism of bigraphs.

use crate::graph::{BipartiteQuiver, Bigraph};
use std::collections::{BTreeMap, BTreeSet, VecDeque};

/// Stable partition of the vertices under iterated refinement by
/// `(ε, class, sorted red-neighbor classes, sorted blue-neighbor classes)`.
/// Both graphs are refined together so class numbers are comparable.
fn refine(gs: [&BipartiteQuiver; 2]) -> [Vec<usize>; 2] {
    let mut cls: [Vec<usize>; 2] = [gs[0].eps().iter().map(|&e| e as usize).collect(), gs[1].eps().iter().map(|&e| e as usize).collect()];
    let mut count = 0;
    loop {
        let mut sigs: [Vec<(usize, Vec<usize>, Vec<usize>)>; 2] = [Vec::new(), Vec::new()];
        for k in 0..2 {
            let g = gs[k];
            sigs[k] = (0..g.len())
                .map(|v| {
                    let mut r: Vec<usize> = g.gamma_neighbors(v).iter().map(|&(u, _)| cls[k][u]).collect();
                    let mut b: Vec<usize> = g.delta_neighbors(v).iter().map(|&(u, _)| cls[k][u]).collect();
                    r.sort_unstable();
                    b.sort_unstable();
                    (cls[k][v], r, b)
                })
                .collect();
        }
        let table: BTreeMap<&(usize, Vec<usize>, Vec<usize>), usize> =
            sigs[0].iter().chain(&sigs[1]).collect::<BTreeSet<_>>().into_iter().enumerate().map(|(i, s)| (s, i)).collect();
        let next = [sigs[0].iter().map(|s| table[s]).collect::<Vec<_>>(), sigs[1].iter().map(|s| table[s]).collect::<Vec<_>>()];
        if table.len() == count {
            return next;
        }
        count = table.len();
        cls = next;
    }
}

fn adjacency(g: &BipartiteQuiver) -> Vec<BTreeMap<usize, u8>> {
    (0..g.len())
        .map(|v| {
            let mut m = BTreeMap::new();
            for &(u, _) in g.gamma_neighbors(v) {
                m.insert(u, 1);
            }
            for &(u, _) in g.delta_neighbors(v) {
                m.insert(u, 2);
            }
            m
        })
        .collect()
}

/// Vertex map `a → b` (by index) preserving ε, red edges and blue edges, or
/// `None` when the bigraphs are not isomorphic.
pub fn bigraphs_isomorphic(a: &Bigraph, b: &Bigraph) -> Option<Vec<usize>> {
    let (qa, qb) = (a.as_quiver(), b.as_quiver());
    let n = qa.len();
    if n != qb.len() || qa.gamma_edges().len() != qb.gamma_edges().len() || qa.delta_edges().len() != qb.delta_edges().len() {
        return None;
    }
    let [ca, cb] = refine([qa, qb]);
    let hist = |c: &[usize]| c.iter().fold(BTreeMap::new(), |mut m, &x| {
        *m.entry(x).or_insert(0usize) += 1;
        m
    });
    if hist(&ca) != hist(&cb) {
        return None;
    }
    let (adj_a, adj_b) = (adjacency(qa), adjacency(qb));

    // BFS order seeded from the rarest class, so each later vertex has an
    // already-placed neighbor that pins its candidates.
    let sizes = hist(&ca);
    let mut order = Vec::with_capacity(n);
    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut roots: Vec<usize> = (0..n).collect();
    roots.sort_by_key(|&v| (sizes[&ca[v]], v));
    for r in roots {
        if seen[r] {
            continue;
        }
        seen[r] = true;
        let mut queue = VecDeque::from([r]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &u in adj_a[v].keys() {
                if !seen[u] {
                    seen[u] = true;
                    parent[u] = v;
                    queue.push_back(u);
                }
            }
        }
    }

    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    let ok = search(0, &order, &parent, &ca, &cb, &adj_a, &adj_b, &mut map, &mut used);
    ok.then_some(map)
}

#[allow(clippy::too_many_arguments)]
fn search(
    k: usize,
    order: &[usize],
    parent: &[usize],
    ca: &[usize],
    cb: &[usize],
    adj_a: &[BTreeMap<usize, u8>],
    adj_b: &[BTreeMap<usize, u8>],
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    let Some(&v) = order.get(k) else { return true };
    let candidates: Vec<usize> = if parent[v] == usize::MAX {
        (0..cb.len()).collect()
    } else {
        adj_b[map[parent[v]]].keys().copied().collect()
    };
    for w in candidates {
        if used[w] || cb[w] != ca[v] || adj_a[v].len() != adj_b[w].len() {
            continue;
        }
        // every placed neighbor of v must map to a same-colored neighbor of w
        let consistent = adj_a[v].iter().all(|(&u, &c)| map[u] == usize::MAX || adj_b[w].get(&map[u]) == Some(&c))
            && adj_b[w].keys().all(|&x| !used[x] || adj_a[v].keys().any(|&u| map[u] == x));
        if !consistent {
            continue;
        }
        map[v] = w;
        used[w] = true;
        if search(k + 1, order, parent, ca, cb, adj_a, adj_b, map, used) {
            return true;
        }
        map[v] = usize::MAX;
        used[w] = false;
    }
    false
}

/// Checks that `map` (by index) is a color- and ε-preserving isomorphism.
pub fn is_isomorphism(a: &Bigraph, b: &Bigraph, map: &[usize]) -> bool {
    let n = a.len();
    if b.len() != n || map.len() != n || map.iter().collect::<BTreeSet<_>>().len() != n || map.iter().any(|&w| w >= n) {
        return false;
    }
    if (0..n).any(|v| a.eps()[v] != b.eps()[map[v]]) {
        return false;
    }
    let edges = |g: &Bigraph, f: &dyn Fn(usize) -> usize| -> [BTreeSet<(usize, usize)>; 2] {
        let e = |l: Vec<(usize, usize, u32)>| l.into_iter().map(|(x, y, _)| (f(x).min(f(y)), f(x).max(f(y)))).collect();
        [e(g.gamma_edges()), e(g.delta_edges())]
    };
    edges(a, &|v| map[v]) == edges(b, &|v| v)
}

/// Isomorphism witness keyed by vertex id.
pub fn witness_by_id(a: &Bigraph, b: &Bigraph, map: &[usize]) -> BTreeMap<String, String> {
    map.iter().enumerate().map(|(v, &w)| (a.id(v).to_string(), b.id(w).to_string())).collect()
}

/// Index form of an id-keyed witness, if every id resolves.
pub fn witness_from_ids(a: &Bigraph, b: &Bigraph, w: &BTreeMap<String, String>) -> Option<Vec<usize>> {
    if w.len() != a.len() {
        return None;
    }
    let mut map = vec![usize::MAX; a.len()];
    for (x, y) in w {
        map[a.index_of(x)?] = b.index_of(y)?;
    }
    Some(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ade::AdeType;
    use crate::families::{tensor, twist};

    #[test]
    fn self_and_dual_symmetry() {
        let g = tensor(AdeType::d(5), AdeType::a(3));
        let m = bigraphs_isomorphic(&g, &g).unwrap();
        assert!(is_isomorphism(&g, &g, &m));
        let a = tensor(AdeType::a(2), AdeType::a(3));
        let b = tensor(AdeType::a(3), AdeType::a(2)).color_dual();
        let m = bigraphs_isomorphic(&a, &b).unwrap();
        assert!(is_isomorphism(&a, &b, &m));
    }

    #[test]
    fn tensor_square_is_not_a_twist() {
        assert!(bigraphs_isomorphic(&tensor(AdeType::a(3), AdeType::a(3)), &twist(AdeType::a(3))).is_none());
        // same underlying graph, opposite bipartition at the center
        let g = tensor(AdeType::a(3), AdeType::a(3));
        assert!(bigraphs_isomorphic(&g, &g.flip_eps()).is_none());
    }
}
