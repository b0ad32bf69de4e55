use std::sync::Arc;

use super::GaloisConnection;
use crate::error::{Error, Result};
use crate::lattice::{Elem, FiniteLattice, MonotoneMap, MAX_POWERSET_GROUND, MAX_TABLE_ELEMENTS};

/// Largest side of a relation; subsets are stored as `u64` masks.
const MAX_SIDE: usize = 64;
/// Largest `|X|·|Y|` accepted by [`concept_lattice`].
const MAX_CONCEPT_CELLS: usize = 400;

/// A binary relation `R ⊆ X × Y` between small labelled sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    sources: Vec<String>,
    targets: Vec<String>,
    /// `succ[x]`: mask of `y` with `x R y`.
    succ: Vec<u64>,
}

impl Relation {
    pub fn new<S: Into<String>, T: Into<String>>(
        sources: impl IntoIterator<Item = S>,
        targets: impl IntoIterator<Item = T>,
        pairs: &[(usize, usize)],
    ) -> Result<Self> {
        let sources: Vec<String> = sources.into_iter().map(Into::into).collect();
        let targets: Vec<String> = targets.into_iter().map(Into::into).collect();
        for (what, side) in [("relation sources", sources.len()), ("relation targets", targets.len())] {
            if side > MAX_SIDE {
                return Err(Error::too_large(what, side as u64, MAX_SIDE as u64));
            }
        }
        let mut succ = vec![0u64; sources.len()];
        for &(x, y) in pairs {
            if x >= sources.len() || y >= targets.len() {
                return Err(Error::shape(format!("pair ({x}, {y}) outside relation")));
            }
            succ[x] |= 1 << y;
        }
        Ok(Relation { sources, targets, succ })
    }

    /// The relation `{(x, y) | f(x, y)}`.
    pub fn from_fn<S: Into<String>, T: Into<String>>(
        sources: impl IntoIterator<Item = S>,
        targets: impl IntoIterator<Item = T>,
        f: impl Fn(usize, usize) -> bool,
    ) -> Result<Self> {
        let mut rel = Self::new(sources, targets, &[])?;
        for x in 0..rel.sources.len() {
            for y in 0..rel.targets.len() {
                if f(x, y) {
                    rel.succ[x] |= 1 << y;
                }
            }
        }
        Ok(rel)
    }

    pub fn sources(&self) -> &[String] {
        &self.sources
    }

    pub fn targets(&self) -> &[String] {
        &self.targets
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.succ[x] >> y & 1 == 1
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.sources.len())
            .flat_map(|x| (0..self.targets.len()).filter(move |&y| self.contains(x, y)).map(move |y| (x, y)))
            .collect()
    }

    /// Mask of `y` with `x R y`.
    pub fn successors(&self, x: usize) -> u64 {
        self.succ[x]
    }

    pub fn transpose(&self) -> Relation {
        let mut succ = vec![0u64; self.targets.len()];
        for (x, &row) in self.succ.iter().enumerate() {
            for (y, s) in succ.iter_mut().enumerate() {
                if row >> y & 1 == 1 {
                    *s |= 1 << x;
                }
            }
        }
        Relation {
            sources: self.targets.clone(),
            targets: self.sources.clone(),
            succ,
        }
    }

    fn full_targets(&self) -> u64 {
        mask(self.targets.len())
    }

    fn full_sources(&self) -> u64 {
        mask(self.sources.len())
    }

    fn members(set: u64) -> impl Iterator<Item = usize> {
        (0..64).filter(move |b| set >> b & 1 == 1)
    }

    /// `R∃(U) = {y | ∃x ∈ U. x R y}`.
    pub fn exists(&self, set: u64) -> u64 {
        Self::members(set).fold(0, |acc, x| acc | self.succ[x])
    }

    /// `R∀(V) = {x | ∀y. x R y ⇒ y ∈ V}`.
    pub fn forall(&self, set: u64) -> u64 {
        (0..self.sources.len())
            .filter(|&x| self.succ[x] & !set == 0)
            .fold(0, |acc, x| acc | 1 << x)
    }

    /// `R↑(U) = {y | ∀x ∈ U. x R y}`: the common successors.
    pub fn up(&self, set: u64) -> u64 {
        Self::members(set).fold(self.full_targets(), |acc, x| acc & self.succ[x])
    }

    /// `R↓(V) = {x | ∀y ∈ V. x R y}`: the common predecessors.
    pub fn down(&self, set: u64) -> u64 {
        (0..self.sources.len())
            .filter(|&x| set & !self.succ[x] == 0)
            .fold(0, |acc, x| acc | 1 << x)
    }
}

fn mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn check_powerset_side(what: &'static str, n: usize) -> Result<()> {
    if n > MAX_POWERSET_GROUND {
        return Err(Error::too_large(what, n as u64, MAX_POWERSET_GROUND as u64));
    }
    Ok(())
}

/// `(R∃, R∀): ℘(X) → ℘(Y)`.
pub fn from_relation_covariant(rel: &Relation) -> Result<GaloisConnection> {
    check_powerset_side("relation sources", rel.sources.len())?;
    check_powerset_side("relation targets", rel.targets.len())?;
    let px = Arc::new(FiniteLattice::powerset(rel.sources.clone())?);
    let py = Arc::new(FiniteLattice::powerset(rel.targets.clone())?);
    let lower: Vec<Elem> = px.elements().map(|u| rel.exists(u as u64) as Elem).collect();
    let upper: Vec<Elem> = py.elements().map(|v| rel.forall(v as u64) as Elem).collect();
    Ok(GaloisConnection {
        lower: MonotoneMap::new_unchecked(px.clone(), py.clone(), lower),
        upper: MonotoneMap::new_unchecked(py, px, upper),
    })
}

/// `(R↑, R↓): ℘(X) → ℘(Y)ᵒᵖ`. Both maps reverse inclusion, so the pair is
/// a covariant connection into the opposite lattice.
pub fn from_relation_contravariant(rel: &Relation) -> Result<GaloisConnection> {
    check_powerset_side("relation sources", rel.sources.len())?;
    let side = 1u64.checked_shl(rel.targets.len() as u32).unwrap_or(u64::MAX);
    if side > MAX_TABLE_ELEMENTS as u64 {
        return Err(Error::too_large("opposite powerset", side, MAX_TABLE_ELEMENTS as u64));
    }
    let px = Arc::new(FiniteLattice::powerset(rel.sources.clone())?);
    let py_op = Arc::new(FiniteLattice::powerset(rel.targets.clone())?.opposite());
    let lower: Vec<Elem> = px.elements().map(|u| rel.up(u as u64) as Elem).collect();
    let upper: Vec<Elem> = py_op.elements().map(|v| rel.down(v as u64) as Elem).collect();
    Ok(GaloisConnection {
        lower: MonotoneMap::new_unchecked(px.clone(), py_op.clone(), lower),
        upper: MonotoneMap::new_unchecked(py_op, px, upper),
    })
}

/// Formal concepts `(A, B)` with `R↑(A) = B`, `R↓(B) = A`, ordered by extent.
#[derive(Clone, Debug)]
pub struct ConceptLattice {
    pub lattice: FiniteLattice,
    /// Extent mask of each lattice element.
    pub extents: Vec<u64>,
    /// Intent mask of each lattice element.
    pub intents: Vec<u64>,
}

pub fn concept_lattice(rel: &Relation) -> Result<ConceptLattice> {
    let cells = rel.sources.len() * rel.targets.len();
    if cells > MAX_CONCEPT_CELLS {
        return Err(Error::too_large("concept context |X|·|Y|", cells as u64, MAX_CONCEPT_CELLS as u64));
    }
    // Extents are the closed sets of R↓R↑: all of X and every intersection of
    // attribute columns R↓({y}).
    let mut extents = vec![rel.full_sources()];
    for y in 0..rel.targets.len() {
        let column = rel.down(1 << y);
        let fresh: Vec<u64> = extents.iter().map(|&e| e & column).collect();
        for e in fresh {
            if !extents.contains(&e) {
                extents.push(e);
                if extents.len() > MAX_TABLE_ELEMENTS {
                    return Err(Error::too_large(
                        "concept lattice",
                        extents.len() as u64,
                        MAX_TABLE_ELEMENTS as u64,
                    ));
                }
            }
        }
    }
    extents.sort_by_key(|&e| (e.count_ones(), e));
    let intents: Vec<u64> = extents.iter().map(|&e| rel.up(e)).collect();
    let labels = extents
        .iter()
        .zip(&intents)
        .map(|(&e, &i)| format!("({},{})", set_label(&rel.sources, e), set_label(&rel.targets, i)))
        .collect();
    let leq: Vec<Vec<bool>> = extents
        .iter()
        .map(|&a| extents.iter().map(|&b| a & !b == 0).collect())
        .collect();
    let lattice = FiniteLattice::from_leq_labeled(&leq, labels)?;
    Ok(ConceptLattice {
        lattice,
        extents,
        intents,
    })
}

fn set_label(names: &[String], set: u64) -> String {
    let parts: Vec<&str> = (0..names.len())
        .filter(|b| set >> b & 1 == 1)
        .map(|b| names[b].as_str())
        .collect();
    format!("{{{}}}", parts.join(","))
}
