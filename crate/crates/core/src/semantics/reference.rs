//! Reference values for [`KripkeModel::alice_bob_eve`] next to
//! their recomputation. Several reference rows disagree with the relations
//! and with the adjunction law, so they are reported rather than trusted.

use super::{kripke_laplacian, Event, KripkeModel};
use crate::error::Result;
use crate::sheaf::Graph;

/// Events in the order `∅, {r}, {s}, {t}, {r,s}, {r,t}, {s,t}, S`.
pub const REFERENCE_EVENTS: [Event; 8] = [0, 1, 2, 4, 3, 5, 6, 7];

/// Per event, `[K_0∃, K_0∀, K_1∃, K_1∀, K_2∃, K_2∀]` as tabulated.
pub const REFERENCE_GALOIS: [[Event; 6]; 8] = [
    [0, 0, 0, 0, 0, 0],
    [3, 0, 5, 0, 5, 0],
    [7, 0, 2, 2, 3, 0],
    [6, 0, 5, 0, 6, 0],
    [7, 1, 7, 2, 7, 2],
    [7, 7, 5, 5, 7, 1],
    [7, 7, 7, 7, 7, 4],
    [7, 7, 7, 7, 7, 7],
];

/// Laplacian inputs and outputs on the path `0 - 1 - 2`, as tabulated.
pub const REFERENCE_LAPLACIAN: [([Event; 3], [Event; 3]); 6] = [
    ([0, 0, 0], [0, 0, 0]),
    ([1, 2, 4], [0, 2, 0]),
    ([2, 1, 4], [7, 7, 1]),
    ([4, 4, 4], [7, 7, 1]),
    ([2, 2, 2], [0, 2, 0]),
    ([7, 7, 7], [7, 7, 7]),
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaloisRow {
    pub event: Event,
    pub agent: usize,
    pub exists: Event,
    pub forall: Event,
    pub reference_exists: Event,
    pub reference_forall: Event,
}

impl GaloisRow {
    pub fn agrees(&self) -> bool {
        self.exists == self.reference_exists && self.forall == self.reference_forall
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaplacianRow {
    pub input: [Event; 3],
    pub output: Vec<Event>,
    pub reference: [Event; 3],
}

impl LaplacianRow {
    pub fn agrees(&self) -> bool {
        self.output == self.reference
    }
}

/// Every event and agent, recomputed from the relations.
pub fn galois_rows(model: &KripkeModel) -> Result<Vec<GaloisRow>> {
    let mut rows = Vec::with_capacity(24);
    for (k, &event) in REFERENCE_EVENTS.iter().enumerate() {
        for agent in 0..3 {
            rows.push(GaloisRow {
                event,
                agent,
                exists: model.exists(agent, event)?,
                forall: model.forall(agent, event)?,
                reference_exists: REFERENCE_GALOIS[k][2 * agent],
                reference_forall: REFERENCE_GALOIS[k][2 * agent + 1],
            });
        }
    }
    Ok(rows)
}

pub fn laplacian_rows(model: &KripkeModel) -> Result<Vec<LaplacianRow>> {
    let path = Graph::path(3);
    REFERENCE_LAPLACIAN
        .iter()
        .map(|&(input, reference)| {
            Ok(LaplacianRow {
                input,
                output: kripke_laplacian(&path, model, &input)?,
                reference,
            })
        })
        .collect()
}
