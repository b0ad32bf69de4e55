//! Tarski sheaves over graphs: lattice stalks on nodes and edges, one Galois
//! connection per node-edge incidence, cochains, and brute-force section
//! oracles.

mod enumerate;
mod graph;
mod transport;

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::galois::GaloisConnection;
use crate::lattice::{Elem, FiniteLattice};

pub use enumerate::{
    check_quasi_sublattice, cochain_space_size, h1_bruteforce, h1_bruteforce_with, sections_bruteforce,
    sections_bruteforce_with, MAX_ENUMERATION,
};
pub use graph::Graph;
pub use transport::{holonomy, transport, transport_map, MAX_HOLONOMY_LENGTH};

/// One stalk element per node.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cochain0(pub Vec<Elem>);

/// One stalk element per edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cochain1(pub Vec<Elem>);

impl Cochain0 {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Cochain1 {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A graph with lattice stalks and, per edge `e = (i, j)` with `i < j`, the
/// restrictions `[F(i ⊴ e), F(j ⊴ e)]`.
#[derive(Clone, Debug)]
pub struct TarskiSheaf {
    graph: Graph,
    node_stalks: Vec<Arc<FiniteLattice>>,
    edge_stalks: Vec<Arc<FiniteLattice>>,
    restrictions: Vec<[Arc<GaloisConnection>; 2]>,
}

impl TarskiSheaf {
    /// Checks incidence shapes and validates every restriction. Connections
    /// shared through the same `Arc` are validated once.
    pub fn build(
        graph: Graph,
        node_stalks: Vec<Arc<FiniteLattice>>,
        edge_stalks: Vec<Arc<FiniteLattice>>,
        restrictions: Vec<[Arc<GaloisConnection>; 2]>,
    ) -> Result<Self> {
        if node_stalks.len() != graph.node_count() {
            return Err(Error::shape(format!(
                "{} node stalks for {} nodes",
                node_stalks.len(),
                graph.node_count()
            )));
        }
        if edge_stalks.len() != graph.edge_count() || restrictions.len() != graph.edge_count() {
            return Err(Error::shape(format!(
                "{} edge stalks and {} restriction pairs for {} edges",
                edge_stalks.len(),
                restrictions.len(),
                graph.edge_count()
            )));
        }
        let mut verdicts: HashMap<*const GaloisConnection, Option<(Elem, Elem)>> = HashMap::new();
        for (e, &(i, j)) in graph.edges().iter().enumerate() {
            for (end, node) in [i, j].into_iter().enumerate() {
                let conn = &restrictions[e][end];
                if !conn.source().same_shape(&node_stalks[node]) || !conn.target().same_shape(&edge_stalks[e]) {
                    return Err(Error::shape(format!(
                        "restriction of node {node} into edge {e} has the wrong lattices"
                    )));
                }
                let verdict = *verdicts
                    .entry(Arc::as_ptr(conn))
                    .or_insert_with(|| conn.validate().err().map(|w| (w.x, w.y)));
                if let Some((x, y)) = verdict {
                    return Err(Error::InvalidConnection { node, edge: e, x, y });
                }
            }
        }
        Ok(TarskiSheaf {
            graph,
            node_stalks,
            edge_stalks,
            restrictions,
        })
    }

    /// Every stalk `L`, every restriction the identity.
    pub fn constant(graph: Graph, lattice: Arc<FiniteLattice>) -> Self {
        let id = Arc::new(GaloisConnection::identity(lattice.clone()));
        TarskiSheaf {
            node_stalks: vec![lattice.clone(); graph.node_count()],
            edge_stalks: vec![lattice; graph.edge_count()],
            restrictions: vec![[id.clone(), id]; graph.edge_count()],
            graph,
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn node_stalk(&self, i: usize) -> &Arc<FiniteLattice> {
        &self.node_stalks[i]
    }

    pub fn edge_stalk(&self, e: usize) -> &Arc<FiniteLattice> {
        &self.edge_stalks[e]
    }

    pub fn node_stalks(&self) -> &[Arc<FiniteLattice>] {
        &self.node_stalks
    }

    pub fn edge_stalks(&self) -> &[Arc<FiniteLattice>] {
        &self.edge_stalks
    }

    /// `[F(i ⊴ e), F(j ⊴ e)]` for `e = (i, j)`, `i < j`.
    pub fn restriction_pair(&self, e: usize) -> &[Arc<GaloisConnection>; 2] {
        &self.restrictions[e]
    }

    /// The connection `F(node ⊴ e)`. Panics when `node` is not an endpoint of `e`.
    pub fn restriction(&self, node: usize, e: usize) -> &GaloisConnection {
        let (i, j) = self.graph.edge(e);
        if node == i {
            &self.restrictions[e][0]
        } else {
            assert_eq!(node, j, "node {node} is not incident to edge {e}");
            &self.restrictions[e][1]
        }
    }

    /// `F∧(node ⊴ e)(x)`.
    #[inline]
    pub fn lower(&self, node: usize, e: usize, x: Elem) -> Elem {
        self.restriction(node, e).lower().apply(x)
    }

    /// `F∨(node ⊴ e)(y)`.
    #[inline]
    pub fn upper(&self, node: usize, e: usize, y: Elem) -> Elem {
        self.restriction(node, e).upper().apply(y)
    }

    pub(crate) fn check_cochain0(&self, x: &Cochain0) -> Result<()> {
        if x.len() != self.graph.node_count() {
            return Err(Error::shape(format!(
                "0-cochain of length {} on {} nodes",
                x.len(),
                self.graph.node_count()
            )));
        }
        if let Some(i) = (0..x.len()).find(|&i| x.0[i] >= self.node_stalks[i].size()) {
            return Err(Error::shape(format!("value {} outside stalk at node {i}", x.0[i])));
        }
        Ok(())
    }

    pub(crate) fn check_cochain1(&self, y: &Cochain1) -> Result<()> {
        if y.len() != self.graph.edge_count() {
            return Err(Error::shape(format!(
                "1-cochain of length {} on {} edges",
                y.len(),
                self.graph.edge_count()
            )));
        }
        if let Some(e) = (0..y.len()).find(|&e| y.0[e] >= self.edge_stalks[e].size()) {
            return Err(Error::shape(format!("value {} outside stalk at edge {e}", y.0[e])));
        }
        Ok(())
    }

    pub fn bot_cochain(&self) -> Cochain0 {
        Cochain0(self.node_stalks.iter().map(|l| l.bot()).collect())
    }

    pub fn top_cochain(&self) -> Cochain0 {
        Cochain0(self.node_stalks.iter().map(|l| l.top()).collect())
    }

    /// Componentwise order on 0-cochains.
    pub fn cochain_leq(&self, x: &Cochain0, y: &Cochain0) -> bool {
        self.node_stalks.iter().enumerate().all(|(i, l)| l.leq(x.0[i], y.0[i]))
    }

    pub fn cochain_meet(&self, x: &Cochain0, y: &Cochain0) -> Cochain0 {
        Cochain0(self.node_stalks.iter().enumerate().map(|(i, l)| l.meet(x.0[i], y.0[i])).collect())
    }

    pub fn cochain_join(&self, x: &Cochain0, y: &Cochain0) -> Cochain0 {
        Cochain0(self.node_stalks.iter().enumerate().map(|(i, l)| l.join(x.0[i], y.0[i])).collect())
    }

    /// Restriction images agree over every edge.
    pub fn is_section(&self, x: &Cochain0) -> Result<bool> {
        self.check_cochain0(x)?;
        Ok(self.is_section_unchecked(&x.0))
    }

    pub(crate) fn is_section_unchecked(&self, x: &[Elem]) -> bool {
        self.graph.edges().iter().enumerate().all(|(e, &(i, j))| {
            self.restrictions[e][0].lower().apply(x[i]) == self.restrictions[e][1].lower().apply(x[j])
        })
    }

    /// `(δ± x)_e = F∧(e± ⊴ e)(x_{e±})`: `minus` selects the smaller endpoint.
    pub fn coboundary(&self, x: &Cochain0, minus: bool) -> Result<Cochain1> {
        self.check_cochain0(x)?;
        let end = usize::from(!minus);
        Ok(Cochain1(
            self.graph
                .edges()
                .iter()
                .enumerate()
                .map(|(e, &(i, j))| self.restrictions[e][end].lower().apply(if minus { x.0[i] } else { x.0[j] }))
                .collect(),
        ))
    }

    /// Upper adjoint of the coboundary: `(δ±* y)_i = ⋀ F∨(i ⊴ e)(y_e)` over edges
    /// whose `±` end is `i`; top where there are none.
    pub fn coboundary_adjoint(&self, y: &Cochain1, minus: bool) -> Result<Cochain0> {
        self.check_cochain1(y)?;
        Ok(Cochain0(self.coboundary_adjoint_unchecked(&y.0, minus)))
    }

    pub(crate) fn coboundary_adjoint_unchecked(&self, y: &[Elem], minus: bool) -> Vec<Elem> {
        let end = usize::from(!minus);
        let mut out = self.top_cochain().0;
        for (e, &(i, j)) in self.graph.edges().iter().enumerate() {
            let node = if minus { i } else { j };
            let pulled = self.restrictions[e][end].upper().apply(y[e]);
            out[node] = self.node_stalks[node].meet(out[node], pulled);
        }
        out
    }
}
