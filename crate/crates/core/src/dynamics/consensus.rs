use crate::error::{Error, Result};
use crate::lattice::{Elem, FiniteLattice};
use crate::sheaf::Graph;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConsensusRun {
    pub final_state: Vec<Elem>,
    /// Synchronous rounds that changed at least one node.
    pub rounds: usize,
}

/// Synchronous `x_i ← x_i ∧ ⋀_{j ∈ N(i)} x_j` until nothing changes.
pub fn meet_consensus(graph: &Graph, lattice: &FiniteLattice, x0: &[Elem]) -> Result<ConsensusRun> {
    run(graph, lattice, x0, |a, b| lattice.meet(a, b))
}

/// The dual `x_i ← x_i ∨ ⋁_{j ∈ N(i)} x_j`.
pub fn join_consensus(graph: &Graph, lattice: &FiniteLattice, x0: &[Elem]) -> Result<ConsensusRun> {
    run(graph, lattice, x0, |a, b| lattice.join(a, b))
}

fn run(graph: &Graph, lattice: &FiniteLattice, x0: &[Elem], op: impl Fn(Elem, Elem) -> Elem) -> Result<ConsensusRun> {
    if x0.len() != graph.node_count() {
        return Err(Error::shape(format!("{} values for {} nodes", x0.len(), graph.node_count())));
    }
    if let Some(&bad) = x0.iter().find(|&&v| v >= lattice.size()) {
        return Err(Error::shape(format!("value {bad} outside lattice")));
    }
    let mut x = x0.to_vec();
    let mut rounds = 0;
    loop {
        let next: Vec<Elem> = (0..x.len())
            .map(|i| graph.neighbors(i).iter().fold(x[i], |acc, &(j, _)| op(acc, x[j])))
            .collect();
        if next == x {
            return Ok(ConsensusRun { final_state: x, rounds });
        }
        x = next;
        rounds += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_of_three() {
        let p = FiniteLattice::powerset(["a", "b"]).unwrap();
        let run = meet_consensus(&Graph::path(3), &p, &[1, 2, 3]).unwrap();
        assert_eq!(run.final_state, vec![0, 0, 0]);
        assert_eq!(run.rounds, 2);
        let run = join_consensus(&Graph::path(3), &p, &[1, 2, 0]).unwrap();
        assert_eq!(run.final_state, vec![3, 3, 3]);
    }

    #[test]
    fn agreement_needs_no_rounds() {
        let c = FiniteLattice::chain(4).unwrap();
        assert_eq!(meet_consensus(&Graph::cycle(5), &c, &[2; 5]).unwrap().rounds, 0);
    }
}
