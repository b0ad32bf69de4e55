use std::sync::Arc;

use super::{intension, relation_properties, Event, Formula, KripkeModel};
use crate::dynamics::tarski_laplacian;
use crate::error::{Error, Result};
use crate::galois::{from_relation_covariant, GaloisConnection};
use crate::sheaf::{Cochain0, Graph, TarskiSheaf};

/// `(K_i∃, K_i∀): ℘(S) → ℘(S)`.
pub fn kripke_connection(model: &KripkeModel, agent: usize) -> Result<GaloisConnection> {
    from_relation_covariant(model.relation(agent)?)
}

/// Node `i` of `graph` is agent `i`; every stalk is `℘(S)` and the
/// restriction of node `i` into each incident edge is agent `i`'s connection.
pub fn kripke_sheaf(graph: &Graph, model: &KripkeModel) -> Result<TarskiSheaf> {
    if graph.node_count() != model.agent_count() {
        return Err(Error::shape(format!(
            "{} graph nodes for {} agents",
            graph.node_count(),
            model.agent_count()
        )));
    }
    let conns: Vec<Arc<GaloisConnection>> = (0..model.agent_count())
        .map(|i| kripke_connection(model, i).map(Arc::new))
        .collect::<Result<_>>()?;
    let stalk = match conns.first() {
        Some(c) => c.source().clone(),
        None => Arc::new(crate::lattice::FiniteLattice::powerset(model.states().to_vec())?),
    };
    TarskiSheaf::build(
        graph.clone(),
        vec![stalk.clone(); graph.node_count()],
        vec![stalk; graph.edge_count()],
        graph.edges().iter().map(|&(i, j)| [conns[i].clone(), conns[j].clone()]).collect(),
    )
}

/// `(Lx)_i = ⋂_{j ∈ N(i)} K_i∀(K_j∃ x_j)`, the Tarski Laplacian of the
/// Kripke sheaf.
pub fn kripke_laplacian(graph: &Graph, model: &KripkeModel, x: &[Event]) -> Result<Vec<Event>> {
    let sheaf = kripke_sheaf(graph, model)?;
    Ok(tarski_laplacian(&sheaf, &Cochain0(x.to_vec()))?.0)
}

/// Edgewise comparison of a formula tuple `φ_i` (one per agent).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EpistemicSectionCheck {
    /// `K_i∃⟦φ_i⟧ = K_j∃⟦φ_j⟧` on every edge.
    pub is_section: bool,
    /// `⟦K_i¬φ_i⟧ = ⟦K_j¬φ_j⟧` on every edge.
    pub negated_knowledge_agrees: bool,
    /// `⟦K_iφ_i⟧ = ⟦K_jφ_j⟧` on every edge.
    pub knowledge_agrees: bool,
    pub all_symmetric: bool,
    pub all_serial: bool,
}

/// The first two flags coincide whenever every relation is symmetric, since
/// then `⟦K_i¬φ⟧` is the complement of `K_i∃⟦φ⟧`. The third is reported for
/// comparison only: it can differ from the first even for equivalence
/// relations.
pub fn epistemic_section_check(graph: &Graph, model: &KripkeModel, phis: &[Formula]) -> Result<EpistemicSectionCheck> {
    if phis.len() != graph.node_count() || graph.node_count() != model.agent_count() {
        return Err(Error::shape(format!(
            "{} formulas, {} nodes, {} agents",
            phis.len(),
            graph.node_count(),
            model.agent_count()
        )));
    }
    let x: Vec<Event> = phis.iter().map(|phi| intension(model, phi)).collect::<Result<_>>()?;
    let all = model.all_states();
    let mut check = EpistemicSectionCheck {
        is_section: true,
        negated_knowledge_agrees: true,
        knowledge_agrees: true,
        all_symmetric: true,
        all_serial: true,
    };
    for rel in model.relations() {
        let p = relation_properties(rel)?;
        check.all_symmetric &= p.symmetric;
        check.all_serial &= p.serial;
    }
    for &(i, j) in graph.edges() {
        check.is_section &= model.exists(i, x[i])? == model.exists(j, x[j])?;
        check.negated_knowledge_agrees &= model.forall(i, all & !x[i])? == model.forall(j, all & !x[j])?;
        check.knowledge_agrees &= model.forall(i, x[i])? == model.forall(j, x[j])?;
    }
    Ok(check)
}

/// `⋀_{j ∈ N(i)} K_i¬K_j¬φ_j`; `true` for an isolated node.
pub fn syntactic_laplacian(graph: &Graph, i: usize, phis: &[Formula]) -> Result<Formula> {
    if phis.len() != graph.node_count() || i >= graph.node_count() {
        return Err(Error::shape(format!("node {i} with {} formulas on {} nodes", phis.len(), graph.node_count())));
    }
    Ok(Formula::conj(
        graph
            .neighbors(i)
            .iter()
            .map(|&(j, _)| Formula::know(i, Formula::possible(j, phis[j].clone()))),
    ))
}

/// Diffusive knowledge `L_A φ = ⋀_{i ∈ A} ⋀_{j ∈ N(i)} K_i¬K_j¬φ`.
pub fn diffusive(graph: &Graph, agents: &[usize], phi: &Formula) -> Result<Formula> {
    if let Some(&bad) = agents.iter().find(|&&i| i >= graph.node_count()) {
        return Err(Error::shape(format!("agent {bad} not a node of a {}-node graph", graph.node_count())));
    }
    let phis = vec![phi.clone(); graph.node_count()];
    Ok(Formula::conj(
        agents
            .iter()
            .map(|&i| syntactic_laplacian(graph, i, &phis))
            .collect::<Result<Vec<_>>>()?,
    ))
}

/// `L_A^k φ`. The formula grows geometrically in `k`.
pub fn diffusive_power(graph: &Graph, agents: &[usize], phi: &Formula, k: usize) -> Result<Formula> {
    (0..k).try_fold(phi.clone(), |acc, _| diffusive(graph, agents, &acc))
}

/// `⋂_{k ≥ 1} ⟦L_A^k φ⟧`, evaluated on events.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DiffusiveOmega {
    pub event: Event,
    /// Powers evaluated before the sequence `⟦L_A^k φ⟧` repeated.
    pub iterations: usize,
    /// Strict shrinks of the running intersection; at most `|S|`.
    pub decreases: usize,
}

pub fn diffusive_omega(graph: &Graph, model: &KripkeModel, agents: &[usize], phi: &Formula) -> Result<DiffusiveOmega> {
    if graph.node_count() != model.agent_count() {
        return Err(Error::shape(format!(
            "{} graph nodes for {} agents",
            graph.node_count(),
            model.agent_count()
        )));
    }
    if let Some(&bad) = agents.iter().find(|&&i| i >= graph.node_count()) {
        return Err(Error::BadAgent {
            agent: bad,
            agents: model.agent_count(),
        });
    }
    let all = model.all_states();
    // ⟦¬K_j¬ψ⟧ = ¬K_j∀(¬⟦ψ⟧)
    let step = |e: Event| -> Result<Event> {
        let mut out = all;
        for &i in agents {
            for &(j, _) in graph.neighbors(i) {
                let possible = all & !model.forall(j, all & !e)?;
                out &= model.forall(i, possible)?;
            }
        }
        Ok(out)
    };
    let mut cur = step(intension(model, phi)?)?;
    let mut acc = cur;
    let mut seen = vec![cur];
    let mut decreases = 0;
    loop {
        cur = step(cur)?;
        if seen.contains(&cur) {
            break;
        }
        seen.push(cur);
        if acc & cur != acc {
            decreases += 1;
            acc &= cur;
        }
    }
    Ok(DiffusiveOmega {
        event: acc,
        iterations: seen.len(),
        decreases,
    })
}
