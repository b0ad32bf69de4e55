//! Strict JSON description of a sheaf, an optional Kripke model, a broadcast
//! schedule, an initial cochain and an optional max-plus instance.
//!
//! ```json
//! {
//!   "lattices": { "P": { "kind": "powerset", "ground": ["a", "b"] } },
//!   "graph": { "nodes": 2, "edges": [[0, 1]] },
//!   "node_stalks": "P",
//!   "edge_stalks": "P",
//!   "default_restriction": { "kind": "identity" }
//! }
//! ```
//!
//! Stalk assignments are either one lattice name for every cell or a list
//! with one name per node (edge). Restrictions not listed explicitly fall
//! back to `default_restriction`. When `kripke` is given and no stalks are,
//! the Kripke sheaf of the model over `graph` is built.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dynamics::BroadcastSequence;
use crate::error::{Error, Result};
use crate::galois::maxplus::{ExtendedReal, MaxPlusMatrix};
use crate::galois::{adjoint_of, from_relation_covariant, GaloisConnection, Relation};
use crate::lattice::{FiniteLattice, MonotoneMap};
use crate::semantics::{kripke_connection, kripke_sheaf, KripkeModel};
use crate::sheaf::{Cochain0, Graph, TarskiSheaf};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub lattices: BTreeMap<String, LatticeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub node_stalks: Option<StalkAssignment>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge_stalks: Option<StalkAssignment>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub restrictions: Vec<RestrictionEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub default_restriction: Option<RestrictionSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kripke: Option<KripkeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<ScheduleSpec>,
    /// One element label per node; the top cochain when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub maxplus: Option<MaxPlusSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LatticeSpec {
    /// Elements plus `(a, b)` pairs meaning `a ⪯ b`; the order is their
    /// reflexive-transitive closure.
    Explicit {
        elements: Vec<String>,
        order: Vec<(String, String)>,
    },
    Powerset { ground: Vec<String> },
    Chain { n: usize },
    Partition { n: usize },
    /// Product of previously named lattices.
    Product { factors: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSpec {
    pub nodes: usize,
    pub edges: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum StalkAssignment {
    Uniform(String),
    PerCell(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RestrictionEntry {
    pub node: usize,
    pub edge: (usize, usize),
    pub map: RestrictionSpec,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RestrictionSpec {
    Identity,
    /// `(R∃, R∀)` for a relation between the ground sets of two powerset
    /// stalks, given as `(node element, edge element)` pairs.
    Relation { pairs: Vec<(String, String)> },
    /// The lower adjoint as a label-to-label table; the upper adjoint is
    /// derived and the table must preserve joins.
    Table { lower: BTreeMap<String, String> },
    /// The Kripke connection of an agent from the `kripke` section.
    Agent { agent: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KripkeSpec {
    pub states: Vec<String>,
    #[serde(default)]
    pub atoms: Vec<String>,
    /// Per agent, the accessible `(from, to)` state pairs.
    pub relations: Vec<Vec<(String, String)>>,
    /// Atoms true at each listed state.
    #[serde(default)]
    pub valuation: BTreeMap<String, Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScheduleSpec {
    Sync,
    Uniform1 { seed: u64 },
    RoundRobin,
    Periodic { rounds: Vec<Vec<usize>> },
    Explicit { rounds: Vec<Vec<usize>> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaxPlusSpec {
    pub a: MaxPlusMatrix,
    pub b: MaxPlusMatrix,
    pub x0: Vec<ExtendedReal>,
    pub y0: Vec<ExtendedReal>,
    #[serde(default = "default_maxplus_iterations")]
    pub max_iterations: usize,
}

fn default_maxplus_iterations() -> usize {
    1000
}

impl ScheduleSpec {
    /// Parses a standalone schedule document such as `{"kind": "sync"}`.
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(json_error)
    }

    pub fn to_sequence(&self, nodes: usize) -> BroadcastSequence {
        match self {
            ScheduleSpec::Sync => BroadcastSequence::Synchronous,
            ScheduleSpec::Uniform1 { seed } => BroadcastSequence::UniformSingle { seed: *seed },
            ScheduleSpec::RoundRobin => BroadcastSequence::round_robin(nodes),
            ScheduleSpec::Periodic { rounds } => BroadcastSequence::Periodic(rounds.clone()),
            ScheduleSpec::Explicit { rounds } => BroadcastSequence::Explicit(rounds.clone()),
        }
    }
}

fn json_error(e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

/// Everything a spec file describes, resolved and validated.
#[derive(Clone, Debug)]
pub struct LoadedSpec {
    pub sheaf: Option<TarskiSheaf>,
    pub model: Option<KripkeModel>,
    pub schedule: Option<BroadcastSequence>,
    pub initial: Option<Cochain0>,
    pub maxplus: Option<MaxPlusSpec>,
}

impl SpecFile {
    /// Parses strictly; syntax and schema errors carry line and column.
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(json_error)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    pub fn load(&self) -> Result<LoadedSpec> {
        let model = self.kripke.as_ref().map(build_model).transpose()?;
        let sheaf = match &self.graph {
            None => None,
            Some(g) => Some(self.build_sheaf(Graph::new(g.nodes, g.edges.iter().copied())?, model.as_ref())?),
        };
        let schedule = self
            .schedule
            .as_ref()
            .map(|s| s.to_sequence(self.graph.as_ref().map_or(0, |g| g.nodes)));
        let initial = match (&self.initial, &sheaf) {
            (None, _) => None,
            (Some(_), None) => return Err(Error::Spec("`initial` needs a graph".into())),
            (Some(labels), Some(sheaf)) => Some(parse_cochain(sheaf, labels)?),
        };
        Ok(LoadedSpec {
            sheaf,
            model,
            schedule,
            initial,
            maxplus: self.maxplus.clone(),
        })
    }

    fn build_sheaf(&self, graph: Graph, model: Option<&KripkeModel>) -> Result<TarskiSheaf> {
        if self.node_stalks.is_none() && self.edge_stalks.is_none() && self.restrictions.is_empty() {
            if let Some(model) = model {
                return kripke_sheaf(&graph, model);
            }
        }
        let mut lattices = HashMap::new();
        for name in self.lattices.keys() {
            resolve_lattice(name, &self.lattices, &mut lattices, &mut Vec::new())?;
        }
        let lookup = |name: &String| {
            lattices
                .get(name)
                .cloned()
                .ok_or_else(|| Error::Spec(format!("unknown lattice `{name}`")))
        };
        let assign = |what: &str, a: &Option<StalkAssignment>, count: usize| -> Result<Vec<Arc<FiniteLattice>>> {
            match a {
                None => Err(Error::Spec(format!("missing `{what}`"))),
                Some(StalkAssignment::Uniform(name)) => Ok(vec![lookup(name)?; count]),
                Some(StalkAssignment::PerCell(names)) if names.len() == count => names.iter().map(lookup).collect(),
                Some(StalkAssignment::PerCell(names)) => {
                    Err(Error::Spec(format!("`{what}` lists {} lattices for {count} cells", names.len())))
                }
            }
        };
        let node_stalks = assign("node_stalks", &self.node_stalks, graph.node_count())?;
        let edge_stalks = assign("edge_stalks", &self.edge_stalks, graph.edge_count())?;

        let mut explicit: HashMap<(usize, usize), &RestrictionSpec> = HashMap::new();
        for entry in &self.restrictions {
            let (a, b) = entry.edge;
            let e = graph
                .edge_between(a, b)
                .ok_or_else(|| Error::Spec(format!("restriction on missing edge ({a}, {b})")))?;
            if entry.node != a && entry.node != b {
                return Err(Error::Spec(format!("node {} is not an end of edge ({a}, {b})", entry.node)));
            }
            if explicit.insert((entry.node, e), &entry.map).is_some() {
                return Err(Error::Spec(format!("restriction of node {} on edge ({a}, {b}) given twice", entry.node)));
            }
        }
        // identical specs between identical stalks share one connection
        let mut cache: HashMap<(RestrictionSpec, usize, usize), Arc<GaloisConnection>> = HashMap::new();
        let mut restrictions = Vec::with_capacity(graph.edge_count());
        for (e, &(i, j)) in graph.edges().iter().enumerate() {
            let mut pair = Vec::with_capacity(2);
            for node in [i, j] {
                let spec = explicit
                    .get(&(node, e))
                    .copied()
                    .or(self.default_restriction.as_ref())
                    .ok_or_else(|| Error::Spec(format!("no restriction for node {node} on edge ({i}, {j})")))?;
                let (src, tgt) = (&node_stalks[node], &edge_stalks[e]);
                let key = (spec.clone(), Arc::as_ptr(src) as usize, Arc::as_ptr(tgt) as usize);
                let conn = match cache.get(&key) {
                    Some(c) => c.clone(),
                    None => {
                        let c = Arc::new(build_restriction(spec, src, tgt, model)?);
                        cache.insert(key, c.clone());
                        c
                    }
                };
                pair.push(conn);
            }
            restrictions.push([pair[0].clone(), pair[1].clone()]);
        }
        TarskiSheaf::build(graph, node_stalks, edge_stalks, restrictions)
    }
}

fn resolve_lattice(
    name: &str,
    specs: &BTreeMap<String, LatticeSpec>,
    done: &mut HashMap<String, Arc<FiniteLattice>>,
    stack: &mut Vec<String>,
) -> Result<Arc<FiniteLattice>> {
    if let Some(l) = done.get(name) {
        return Ok(l.clone());
    }
    if stack.iter().any(|s| s == name) {
        return Err(Error::Spec(format!("lattice `{name}` is defined in terms of itself")));
    }
    let spec = specs
        .get(name)
        .ok_or_else(|| Error::Spec(format!("unknown lattice `{name}`")))?;
    stack.push(name.to_string());
    let lattice = match spec {
        LatticeSpec::Explicit { elements, order } => {
            let index = |label: &String| {
                elements
                    .iter()
                    .position(|e| e == label)
                    .ok_or_else(|| Error::Spec(format!("lattice `{name}` has no element `{label}`")))
            };
            let pairs = order
                .iter()
                .map(|(a, b)| Ok((index(a)?, index(b)?)))
                .collect::<Result<Vec<_>>>()?;
            FiniteLattice::from_order_pairs(elements.clone(), &pairs)?
        }
        LatticeSpec::Powerset { ground } => FiniteLattice::powerset(ground.clone())?,
        LatticeSpec::Chain { n } => FiniteLattice::chain(*n)?,
        LatticeSpec::Partition { n } => FiniteLattice::partitions(*n)?,
        LatticeSpec::Product { factors } => {
            let fs = factors
                .iter()
                .map(|f| resolve_lattice(f, specs, done, stack))
                .collect::<Result<Vec<_>>>()?;
            let refs: Vec<&FiniteLattice> = fs.iter().map(|f| f.as_ref()).collect();
            FiniteLattice::product(&refs)?
        }
    };
    stack.pop();
    let lattice = Arc::new(lattice);
    done.insert(name.to_string(), lattice.clone());
    Ok(lattice)
}

fn build_restriction(
    spec: &RestrictionSpec,
    src: &Arc<FiniteLattice>,
    tgt: &Arc<FiniteLattice>,
    model: Option<&KripkeModel>,
) -> Result<GaloisConnection> {
    match spec {
        RestrictionSpec::Identity => {
            if !src.same_shape(tgt) {
                return Err(Error::Spec("identity restriction between different lattices".into()));
            }
            Ok(GaloisConnection::identity(src.clone()))
        }
        RestrictionSpec::Relation { pairs } => {
            let (Some(xs), Some(ys)) = (src.powerset_ground(), tgt.powerset_ground()) else {
                return Err(Error::Spec("relation restriction needs powerset stalks".into()));
            };
            let find = |ground: &[String], label: &String| {
                ground
                    .iter()
                    .position(|g| g == label)
                    .ok_or_else(|| Error::Spec(format!("relation mentions unknown element `{label}`")))
            };
            let idx = pairs
                .iter()
                .map(|(a, b)| Ok((find(xs, a)?, find(ys, b)?)))
                .collect::<Result<Vec<_>>>()?;
            from_relation_covariant(&Relation::new(xs.to_vec(), ys.to_vec(), &idx)?)
        }
        RestrictionSpec::Table { lower } => {
            let image = src
                .elements()
                .map(|x| {
                    let label = src.label(x);
                    let to = lower
                        .get(&label)
                        .ok_or_else(|| Error::Spec(format!("table has no entry for `{label}`")))?;
                    tgt.find_label(to)
                        .ok_or_else(|| Error::Spec(format!("table maps to unknown element `{to}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            if lower.len() != src.size() {
                return Err(Error::Spec("table lists elements outside the node stalk".into()));
            }
            adjoint_of(&MonotoneMap::new(src.clone(), tgt.clone(), image)?)
        }
        RestrictionSpec::Agent { agent } => {
            let model = model.ok_or_else(|| Error::Spec("agent restriction needs a `kripke` section".into()))?;
            kripke_connection(model, *agent)
        }
    }
}

fn build_model(spec: &KripkeSpec) -> Result<KripkeModel> {
    let state = |label: &String| {
        spec.states
            .iter()
            .position(|s| s == label)
            .ok_or_else(|| Error::Spec(format!("unknown state `{label}`")))
    };
    let relations = spec
        .relations
        .iter()
        .map(|pairs| pairs.iter().map(|(a, b)| Ok((state(a)?, state(b)?))).collect())
        .collect::<Result<Vec<Vec<_>>>>()?;
    let mut valuation = vec![Vec::new(); spec.states.len()];
    for (s, atoms) in &spec.valuation {
        let s = state(s)?;
        for a in atoms {
            let p = spec
                .atoms
                .iter()
                .position(|x| x == a)
                .ok_or_else(|| Error::Spec(format!("unknown atom `{a}`")))?;
            valuation[s].push(p);
        }
    }
    KripkeModel::new(spec.states.clone(), &relations, spec.atoms.clone(), &valuation)
}

/// One element label per node, resolved in the node stalks.
pub fn parse_cochain(sheaf: &TarskiSheaf, labels: &[String]) -> Result<Cochain0> {
    let n = sheaf.graph().node_count();
    if labels.len() != n {
        return Err(Error::Spec(format!("{} labels for {n} nodes", labels.len())));
    }
    labels
        .iter()
        .enumerate()
        .map(|(i, l)| {
            sheaf
                .node_stalk(i)
                .find_label(l)
                .ok_or_else(|| Error::Spec(format!("node {i} has no element `{l}`")))
        })
        .collect::<Result<Vec<_>>>()
        .map(Cochain0)
}
