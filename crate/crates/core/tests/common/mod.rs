//! Generators and brute-force oracles shared by the integration tests. The
//! oracles work from raw tables and relations, never from the operators
//! under test.

#![allow(dead_code)]

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use tarski::galois::GaloisConnection;
use tarski::lattice::corpus::small_lattices;
use tarski::semantics::KripkeModel;
use tarski::sheaf::{Cochain0, Graph, TarskiSheaf};
use tarski::{Elem, FiniteLattice, MonotoneMap};

pub fn corpus() -> Vec<Arc<FiniteLattice>> {
    small_lattices().into_iter().map(|(_, l)| Arc::new(l)).collect()
}

/// `x ↦ ⋁ {y_k | x ⋠ c_k}`. Each step map preserves joins because
/// `a ∨ b ⪯ c` iff both are, so any join of them does too.
pub fn random_join_map<R: Rng>(src: &Arc<FiniteLattice>, tgt: &Arc<FiniteLattice>, rng: &mut R) -> MonotoneMap {
    let steps: Vec<(Elem, Elem)> = (0..rng.gen_range(1..=3))
        .map(|_| (rng.gen_range(0..src.size()), rng.gen_range(0..tgt.size())))
        .collect();
    let image = src
        .elements()
        .map(|x| {
            steps
                .iter()
                .filter(|&&(c, _)| !src.leq(x, c))
                .fold(tgt.bot(), |acc, &(_, y)| tgt.join(acc, y))
        })
        .collect();
    MonotoneMap::new(src.clone(), tgt.clone(), image).expect("step joins are monotone")
}

/// `g(y) = ⋁ {x | f(x) ⪯ y}`.
pub fn upper_adjoint_oracle(f: &MonotoneMap) -> Vec<Elem> {
    let (src, tgt) = (f.dom(), f.cod());
    tgt.elements()
        .map(|y| src.join_all(src.elements().filter(|&x| tgt.leq(f.apply(x), y))))
        .collect()
}

pub fn random_connection<R: Rng>(src: &Arc<FiniteLattice>, tgt: &Arc<FiniteLattice>, rng: &mut R) -> GaloisConnection {
    let f = random_join_map(src, tgt, rng);
    let g = MonotoneMap::new(tgt.clone(), src.clone(), upper_adjoint_oracle(&f)).expect("adjoint is monotone");
    GaloisConnection::new(f, g).expect("oracle adjoint")
}

/// Each pair joined with probability `p`.
pub fn random_graph<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|_| rng.gen_bool(p))
        .collect();
    Graph::new(n, edges).expect("simple graph")
}

/// Random corpus stalks and step-map restrictions on a random graph with at
/// most `max_nodes` nodes and `max_edges` edges.
pub fn random_sheaf<R: Rng>(max_nodes: usize, max_edges: usize, rng: &mut R) -> TarskiSheaf {
    let lattices = corpus();
    let n = rng.gen_range(1..=max_nodes);
    let mut graph = random_graph(n, 0.6, rng);
    while graph.edge_count() > max_edges {
        graph = random_graph(n, 0.6, rng);
    }
    let pick = |rng: &mut R| lattices.choose(rng).expect("corpus is non-empty").clone();
    let nodes: Vec<Arc<FiniteLattice>> = (0..n).map(|_| pick(rng)).collect();
    let edges: Vec<Arc<FiniteLattice>> = (0..graph.edge_count()).map(|_| pick(rng)).collect();
    let restrictions = graph
        .edges()
        .iter()
        .zip(&edges)
        .map(|(&(i, j), le)| {
            [
                Arc::new(random_connection(&nodes[i], le, rng)),
                Arc::new(random_connection(&nodes[j], le, rng)),
            ]
        })
        .collect();
    TarskiSheaf::build(graph, nodes, edges, restrictions).expect("random sheaf is well formed")
}

pub fn random_cochain<R: Rng>(sheaf: &TarskiSheaf, rng: &mut R) -> Cochain0 {
    Cochain0(sheaf.node_stalks().iter().map(|l| rng.gen_range(0..l.size())).collect())
}

/// Every 0-cochain, in lexicographic order.
pub fn all_cochains(sizes: &[usize]) -> Vec<Vec<Elem>> {
    let mut out = vec![Vec::new()];
    for &m in sizes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..m).map(move |v| {
                    let mut next = prefix.clone();
                    next.push(v);
                    next
                })
            })
            .collect();
    }
    out
}

/// `x_i` and `x_j` agree over every edge after restriction.
pub fn is_section_oracle(sheaf: &TarskiSheaf, x: &[Elem]) -> bool {
    sheaf.graph().edges().iter().enumerate().all(|(e, &(i, j))| {
        let [ri, rj] = sheaf.restriction_pair(e);
        ri.lower().image()[x[i]] == rj.lower().image()[x[j]]
    })
}

/// `K∃(e) = {t | ∃ s ∈ e, s R t}` from the raw relation.
pub fn exists_oracle(model: &KripkeModel, agent: usize, e: Elem) -> Elem {
    let rel = model.relation(agent).unwrap();
    let n = model.state_count();
    (0..n)
        .filter(|&t| (0..n).any(|s| e >> s & 1 == 1 && rel.contains(s, t)))
        .fold(0, |acc, t| acc | 1 << t)
}

/// `K∀(e) = {s | every successor of s lies in e}` from the raw relation.
pub fn forall_oracle(model: &KripkeModel, agent: usize, e: Elem) -> Elem {
    let rel = model.relation(agent).unwrap();
    let n = model.state_count();
    (0..n)
        .filter(|&s| (0..n).all(|t| !rel.contains(s, t) || e >> t & 1 == 1))
        .fold(0, |acc, s| acc | 1 << s)
}

/// `(Lx)_i = ⋂_{j ∈ N(i)} K_i∀(K_j∃ x_j)`, all states when `i` is isolated.
pub fn kripke_laplacian_oracle(graph: &Graph, model: &KripkeModel, x: &[Elem]) -> Vec<Elem> {
    let full = (1 << model.state_count()) - 1;
    (0..graph.node_count())
        .map(|i| {
            graph
                .edges()
                .iter()
                .filter_map(|&(a, b)| {
                    if a == i {
                        Some(b)
                    } else if b == i {
                        Some(a)
                    } else {
                        None
                    }
                })
                .fold(full, |acc, j| acc & forall_oracle(model, i, exists_oracle(model, j, x[j])))
        })
        .collect()
}
