use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lattice::{Elem, FiniteLattice};
use crate::sheaf::{Cochain0, TarskiSheaf};

/// Largest edge stalk for which a Hasse distance table is built.
const MAX_HASSE_TABLE: usize = 1024;

/// Distance on edge stalks used by the Dirichlet energy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeMetric {
    /// Size of the symmetric difference; powerset stalks only.
    Hamming,
    /// Shortest-path length in the undirected Hasse diagram.
    Hasse,
}

impl EdgeMetric {
    /// Hamming when every edge stalk is a powerset, Hasse otherwise.
    pub fn default_for(sheaf: &TarskiSheaf) -> Self {
        if sheaf.edge_stalks().iter().all(|l| l.powerset_ground().is_some()) {
            EdgeMetric::Hamming
        } else {
            EdgeMetric::Hasse
        }
    }
}

impl fmt::Display for EdgeMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeMetric::Hamming => "hamming",
            EdgeMetric::Hasse => "hasse",
        })
    }
}

impl FromStr for EdgeMetric {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "hamming" => Ok(EdgeMetric::Hamming),
            "hasse" => Ok(EdgeMetric::Hasse),
            other => Err(format!("unknown metric `{other}` (expected hamming or hasse)")),
        }
    }
}

#[derive(Clone, Debug)]
enum EdgeDistance {
    Hamming,
    Table { m: usize, dist: Arc<Vec<u32>> },
}

impl EdgeDistance {
    fn distance(&self, a: Elem, b: Elem) -> u64 {
        match self {
            EdgeDistance::Hamming => (a ^ b).count_ones() as u64,
            EdgeDistance::Table { m, dist } => dist[a * m + b] as u64,
        }
    }
}

/// Evaluates `V(x) = Σ_ij d_ij(F∧(i ⊴ ij) x_i, F∧(j ⊴ ij) x_j)` with
/// per-edge distances prepared once.
#[derive(Clone, Debug)]
pub struct EnergyMeter {
    metric: EdgeMetric,
    per_edge: Vec<EdgeDistance>,
}

impl EnergyMeter {
    pub fn new(sheaf: &TarskiSheaf, metric: EdgeMetric) -> Result<Self> {
        let mut tables: HashMap<*const FiniteLattice, Arc<Vec<u32>>> = HashMap::new();
        let mut per_edge = Vec::with_capacity(sheaf.graph().edge_count());
        for (e, stalk) in sheaf.edge_stalks().iter().enumerate() {
            per_edge.push(match metric {
                EdgeMetric::Hamming => {
                    if stalk.powerset_ground().is_none() {
                        return Err(Error::MetricUndefined {
                            edge: e,
                            reason: "hamming distance needs a powerset stalk".into(),
                        });
                    }
                    EdgeDistance::Hamming
                }
                EdgeMetric::Hasse => {
                    if stalk.size() > MAX_HASSE_TABLE {
                        return Err(Error::MetricUndefined {
                            edge: e,
                            reason: format!("stalk of {} elements exceeds the Hasse table limit", stalk.size()),
                        });
                    }
                    let dist = tables
                        .entry(Arc::as_ptr(stalk))
                        .or_insert_with(|| Arc::new(hasse_distances(stalk)))
                        .clone();
                    EdgeDistance::Table { m: stalk.size(), dist }
                }
            });
        }
        Ok(EnergyMeter { metric, per_edge })
    }

    pub fn metric(&self) -> EdgeMetric {
        self.metric
    }

    pub fn energy(&self, sheaf: &TarskiSheaf, x: &Cochain0) -> u64 {
        sheaf
            .graph()
            .edges()
            .iter()
            .enumerate()
            .map(|(e, &(i, j))| self.per_edge[e].distance(sheaf.lower(i, e, x.0[i]), sheaf.lower(j, e, x.0[j])))
            .sum()
    }

    /// Distance between two edge-stalk values on edge `e`.
    pub fn edge_distance(&self, e: usize, a: Elem, b: Elem) -> u64 {
        self.per_edge[e].distance(a, b)
    }
}

/// All-pairs BFS over the undirected cover graph.
fn hasse_distances(l: &FiniteLattice) -> Vec<u32> {
    let m = l.size();
    let mut undirected = vec![Vec::new(); m];
    for (x, ups) in l.upper_covers().into_iter().enumerate() {
        for y in ups {
            undirected[x].push(y);
            undirected[y].push(x);
        }
    }
    let mut dist = vec![u32::MAX; m * m];
    for src in 0..m {
        let row = &mut dist[src * m..(src + 1) * m];
        row[src] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            for &v in &undirected[u] {
                if row[v] == u32::MAX {
                    row[v] = row[u] + 1;
                    queue.push_back(v);
                }
            }
        }
    }
    dist
}

pub fn dirichlet_energy(sheaf: &TarskiSheaf, metric: EdgeMetric, x: &Cochain0) -> Result<u64> {
    sheaf.check_cochain0(x)?;
    Ok(EnergyMeter::new(sheaf, metric)?.energy(sheaf, x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sheaf::Graph;

    #[test]
    fn single_edge_hamming() {
        let p = Arc::new(FiniteLattice::powerset(["a"]).unwrap());
        let sheaf = TarskiSheaf::constant(Graph::path(2), p);
        assert_eq!(dirichlet_energy(&sheaf, EdgeMetric::Hamming, &Cochain0(vec![1, 0])).unwrap(), 1);
        assert_eq!(dirichlet_energy(&sheaf, EdgeMetric::Hamming, &Cochain0(vec![1, 1])).unwrap(), 0);
    }

    #[test]
    fn hasse_distances_on_powerset_match_hamming() {
        let p = FiniteLattice::powerset(["a", "b", "c"]).unwrap();
        let d = hasse_distances(&p);
        for a in p.elements() {
            for b in p.elements() {
                assert_eq!(d[a * 8 + b], (a ^ b).count_ones());
            }
        }
    }

    #[test]
    fn hamming_needs_powerset() {
        let c = Arc::new(FiniteLattice::chain(3).unwrap());
        let sheaf = TarskiSheaf::constant(Graph::path(2), c);
        assert!(matches!(
            dirichlet_energy(&sheaf, EdgeMetric::Hamming, &Cochain0(vec![0, 2])),
            Err(Error::MetricUndefined { edge: 0, .. })
        ));
        assert_eq!(EdgeMetric::default_for(&sheaf), EdgeMetric::Hasse);
        assert_eq!(dirichlet_energy(&sheaf, EdgeMetric::Hasse, &Cochain0(vec![0, 2])).unwrap(), 2);
    }
}
