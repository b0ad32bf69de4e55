use super::{Event, Formula, KripkeModel};
use crate::error::{Error, Result};

/// `M, s ⊨ φ`, evaluated state by state from the truth clauses.
pub fn satisfies(model: &KripkeModel, state: usize, phi: &Formula) -> Result<bool> {
    if state >= model.state_count() {
        return Err(Error::shape(format!("state {state} of {}", model.state_count())));
    }
    Ok(match phi {
        Formula::True => true,
        Formula::Atom(a) => model.atom_event(a)? >> state & 1 == 1,
        Formula::Not(a) => !satisfies(model, state, a)?,
        Formula::And(a, b) => satisfies(model, state, a)? && satisfies(model, state, b)?,
        Formula::Know(i, a) => {
            let rel = model.relation(*i)?;
            let mut all = true;
            for t in 0..model.state_count() {
                if rel.contains(state, t) && !satisfies(model, t, a)? {
                    all = false;
                }
            }
            all
        }
    })
}

/// `⟦φ⟧`, the event where `φ` holds, computed compositionally with
/// `⟦K_i φ⟧ = K_i∀⟦φ⟧`.
pub fn intension(model: &KripkeModel, phi: &Formula) -> Result<Event> {
    Ok(match phi {
        Formula::True => model.all_states(),
        Formula::Atom(a) => model.atom_event(a)?,
        Formula::Not(a) => model.all_states() & !intension(model, a)?,
        Formula::And(a, b) => intension(model, a)? & intension(model, b)?,
        Formula::Know(i, a) => model.forall(*i, intension(model, a)?)?,
    })
}

/// `⋂_{i ∈ agents} K_i∀(e)`.
pub fn everyone_knows(model: &KripkeModel, agents: &[usize], e: Event) -> Result<Event> {
    agents
        .iter()
        .try_fold(model.all_states(), |acc, &i| Ok(acc & model.forall(i, e)?))
}

/// Common knowledge `⋂_{k ≥ 1} E^k(e)`, computed as the greatest fixed
/// point of `X ↦ E(e ∩ X)`.
pub fn common_knowledge(model: &KripkeModel, agents: &[usize], e: Event) -> Result<Event> {
    let mut x = model.all_states();
    loop {
        let next = everyone_knows(model, agents, e & x)?;
        if next == x {
            return Ok(x);
        }
        x = next;
    }
}

/// Distributed knowledge: `K∀` along the intersection of the agents'
/// relations.
pub fn distributed_knowledge(model: &KripkeModel, agents: &[usize], e: Event) -> Result<Event> {
    let n = model.state_count();
    let mut out = 0;
    for s in 0..n {
        let mut reach = model.all_states() as u64;
        for &i in agents {
            reach &= model.relation(i)?.successors(s);
        }
        if reach & !(e as u64) == 0 {
            out |= 1 << s;
        }
    }
    Ok(out)
}
