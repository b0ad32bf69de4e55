//! Multi-agent epistemic logic over Kripke models, and the Kripke sheaves
//! that turn formula tuples into Tarski-sheaf cochains.
//!
//! Events are subsets of the state set encoded as bitmasks, the same
//! encoding the powerset lattice uses for its elements.

mod eval;
mod formula;
mod kripke;
pub mod reference;

use rand::Rng;

use crate::error::{Error, Result};
use crate::galois::Relation;
use crate::lattice::{Elem, MAX_POWERSET_GROUND};

pub use eval::{common_knowledge, distributed_knowledge, everyone_knows, intension, satisfies};
pub use formula::{parse_formula, Formula};
pub use kripke::{
    diffusive, diffusive_omega, diffusive_power, epistemic_section_check, kripke_connection, kripke_laplacian,
    kripke_sheaf, syntactic_laplacian, DiffusiveOmega, EpistemicSectionCheck,
};

/// A subset of states as a bitmask.
pub type Event = Elem;

/// States, one accessibility relation per agent, and a valuation of atoms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KripkeModel {
    states: Vec<String>,
    relations: Vec<Relation>,
    atoms: Vec<String>,
    /// `truth[p]`: event where atom `p` holds.
    truth: Vec<Event>,
}

impl KripkeModel {
    /// `relations[i]` lists the pairs `(s, t)` with `s K_i t`; `valuation[s]`
    /// lists the atoms true at state `s`.
    pub fn new<S: Into<String>, A: Into<String>>(
        states: impl IntoIterator<Item = S>,
        relations: &[Vec<(usize, usize)>],
        atoms: impl IntoIterator<Item = A>,
        valuation: &[Vec<usize>],
    ) -> Result<Self> {
        let states: Vec<String> = states.into_iter().map(Into::into).collect();
        let atoms: Vec<String> = atoms.into_iter().map(Into::into).collect();
        if states.len() > MAX_POWERSET_GROUND {
            return Err(Error::too_large("Kripke state set", states.len() as u64, MAX_POWERSET_GROUND as u64));
        }
        if valuation.len() != states.len() {
            return Err(Error::shape(format!("valuation for {} of {} states", valuation.len(), states.len())));
        }
        let relations = relations
            .iter()
            .map(|pairs| Relation::new(states.clone(), states.clone(), pairs))
            .collect::<Result<Vec<_>>>()?;
        let mut truth = vec![0; atoms.len()];
        for (s, true_atoms) in valuation.iter().enumerate() {
            for &p in true_atoms {
                if p >= atoms.len() {
                    return Err(Error::shape(format!("atom index {p} of {}", atoms.len())));
                }
                truth[p] |= 1 << s;
            }
        }
        Ok(KripkeModel {
            states,
            relations,
            atoms,
            truth,
        })
    }

    /// I.i.d. relations: `(a, a)` with probability `p_diag`, `(a, b)` with
    /// `p_off`; each atom holds at each state with probability ½.
    pub fn random<R: Rng + ?Sized>(
        state_count: usize,
        agents: usize,
        atom_count: usize,
        p_diag: f64,
        p_off: f64,
        rng: &mut R,
    ) -> Result<Self> {
        let relations: Vec<Vec<(usize, usize)>> = (0..agents)
            .map(|_| {
                let mut pairs = Vec::new();
                for a in 0..state_count {
                    for b in 0..state_count {
                        if rng.gen_bool(if a == b { p_diag } else { p_off }) {
                            pairs.push((a, b));
                        }
                    }
                }
                pairs
            })
            .collect();
        let valuation: Vec<Vec<usize>> = (0..state_count)
            .map(|_| (0..atom_count).filter(|_| rng.gen_bool(0.5)).collect())
            .collect();
        Self::new(
            (0..state_count).map(|s| format!("s{s}")),
            &relations,
            (0..atom_count).map(|p| format!("p{p}")),
            &valuation,
        )
    }

    /// Three agents (Alice, Bob, Eve) over states `r, s, t`:
    /// Alice confuses `r`–`s` and `s`–`t`, Bob confuses `r`–`t`, Eve's
    /// relation is the cycle `r → t → s → r`; all three are reflexive.
    /// Atom `p` holds at `r` and `s`, atom `q` at `t`.
    pub fn alice_bob_eve() -> Self {
        let loops = [(0, 0), (1, 1), (2, 2)];
        let alice = [&loops[..], &[(0, 1), (1, 0), (1, 2), (2, 1)]].concat();
        let bob = [&loops[..], &[(0, 2), (2, 0)]].concat();
        let eve = [&loops[..], &[(0, 2), (2, 1), (1, 0)]].concat();
        Self::new(["r", "s", "t"], &[alice, bob, eve], ["p", "q"], &[vec![0], vec![0], vec![1]])
            .expect("fixture is well formed")
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn agent_count(&self) -> usize {
        self.relations.len()
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn relation(&self, agent: usize) -> Result<&Relation> {
        self.relations.get(agent).ok_or(Error::BadAgent {
            agent,
            agents: self.relations.len(),
        })
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    /// The full event `S`.
    pub fn all_states(&self) -> Event {
        (1 << self.states.len()) - 1
    }

    pub fn atom_event(&self, name: &str) -> Result<Event> {
        self.atoms
            .iter()
            .position(|a| a == name)
            .map(|p| self.truth[p])
            .ok_or_else(|| Error::UnknownAtom(name.to_string()))
    }

    /// Atoms true at each state, as indices.
    pub fn valuation(&self) -> Vec<Vec<usize>> {
        (0..self.states.len())
            .map(|s| (0..self.atoms.len()).filter(|&p| self.truth[p] >> s & 1 == 1).collect())
            .collect()
    }

    /// `{s, t}`-style label of an event.
    pub fn event_label(&self, e: Event) -> String {
        let names: Vec<&str> = (0..self.states.len())
            .filter(|s| e >> s & 1 == 1)
            .map(|s| self.states[s].as_str())
            .collect();
        format!("{{{}}}", names.join(","))
    }

    /// `K_i∃(e) = {t | ∃s ∈ e. s K_i t}`.
    pub fn exists(&self, agent: usize, e: Event) -> Result<Event> {
        Ok(self.relation(agent)?.exists(e as u64) as Event)
    }

    /// `K_i∀(e) = {s | ∀t. s K_i t ⇒ t ∈ e}`.
    pub fn forall(&self, agent: usize, e: Event) -> Result<Event> {
        Ok(self.relation(agent)?.forall(e as u64) as Event)
    }
}

/// Flags of an endorelation, computed from the definitions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RelationProperties {
    pub reflexive: bool,
    pub transitive: bool,
    pub symmetric: bool,
    pub antisymmetric: bool,
    pub serial: bool,
    pub euclidean: bool,
    pub connex: bool,
    /// Every state has exactly one successor.
    pub functional: bool,
}

pub fn relation_properties(rel: &Relation) -> Result<RelationProperties> {
    let n = rel.sources().len();
    if rel.targets().len() != n {
        return Err(Error::shape("relation properties need a square relation"));
    }
    let r = |a: usize, b: usize| rel.contains(a, b);
    let all = |f: &dyn Fn(usize) -> bool| (0..n).all(f);
    Ok(RelationProperties {
        reflexive: all(&|a| r(a, a)),
        transitive: all(&|a| all(&|b| all(&|c| !(r(a, b) && r(b, c)) || r(a, c)))),
        symmetric: all(&|a| all(&|b| !r(a, b) || r(b, a))),
        antisymmetric: all(&|a| all(&|b| !(r(a, b) && r(b, a)) || a == b)),
        serial: all(&|a| (0..n).any(|b| r(a, b))),
        euclidean: all(&|a| all(&|b| all(&|c| !(r(a, b) && r(a, c)) || r(b, c)))),
        connex: all(&|a| all(&|b| r(a, b) || r(b, a))),
        functional: all(&|a| rel.successors(a).count_ones() == 1),
    })
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    #[test]
    fn identity_properties() {
        let id = Relation::from_fn(["a", "b", "c"], ["a", "b", "c"], |a, b| a == b).unwrap();
        let p = relation_properties(&id).unwrap();
        assert!(p.reflexive && p.transitive && p.symmetric && p.antisymmetric && p.serial && p.functional);
        assert!(p.euclidean && !p.connex);
    }

    #[test]
    fn equivalence_properties() {
        // classes {a, b}, {c}
        let eq = Relation::from_fn(["a", "b", "c"], ["a", "b", "c"], |a, b| (a < 2) == (b < 2)).unwrap();
        let p = relation_properties(&eq).unwrap();
        assert!(p.reflexive && p.transitive && p.symmetric && p.euclidean);
        assert!(!p.antisymmetric && !p.functional);
    }

    #[test]
    fn fixture_relations() {
        let m = KripkeModel::alice_bob_eve();
        let (r, s, t) = (1, 2, 4);
        assert_eq!(m.exists(0, r).unwrap(), r | s);
        assert_eq!(m.exists(1, s).unwrap(), s);
        assert_eq!(m.exists(2, r).unwrap(), r | t);
        assert_eq!(m.exists(2, s).unwrap(), r | s);
        assert_eq!(m.forall(2, r | s).unwrap(), s);
        assert!(matches!(m.exists(3, r), Err(Error::BadAgent { agent: 3, agents: 3 })));
        assert!(relation_properties(m.relation(0).unwrap()).unwrap().symmetric);
        assert!(!relation_properties(m.relation(2).unwrap()).unwrap().symmetric);
        assert_eq!(m.event_label(r | t), "{r,t}");
    }

    #[test]
    fn random_models_are_reproducible() {
        let a = KripkeModel::random(5, 3, 2, 0.9, 0.1, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let b = KripkeModel::random(5, 3, 2, 0.9, 0.1, &mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.agent_count(), 3);
    }
}
