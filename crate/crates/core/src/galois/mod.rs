//! Galois connections between finite lattices: validation, synthesis of the
//! missing adjoint, composition, closure operators, relation-induced
//! connections and concept lattices, plus residuated and max-plus transforms.

pub mod maxplus;
mod relation;
pub mod residuated;

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lattice::{Elem, FiniteLattice, MonotoneMap};

pub use relation::{
    concept_lattice, from_relation_contravariant, from_relation_covariant, ConceptLattice, Relation,
};

/// Largest `|K|·|L|` for which a failed validation searches for the
/// lexicographically first offending pair.
const WITNESS_SCAN_LIMIT: usize = 1 << 24;

/// An adjoint pair `lower: K → L`, `upper: L → K` with
/// `lower(x) ⪯ y ⇔ x ⪯ upper(y)`.
///
/// [`from_maps`](Self::from_maps) only checks shapes, so a value may hold a
/// pair that fails the law; [`validate`](Self::validate) decides. Every
/// constructor that synthesizes an adjoint returns a valid connection.
#[derive(Clone, Debug)]
pub struct GaloisConnection {
    lower: MonotoneMap,
    upper: MonotoneMap,
}

/// Counterexample to the adjunction: exactly one of `lower(x) ⪯ y` and
/// `x ⪯ upper(y)` holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AdjunctionFailure {
    pub x: Elem,
    pub y: Elem,
}

impl GaloisConnection {
    pub fn from_maps(lower: MonotoneMap, upper: MonotoneMap) -> Result<Self> {
        if !lower.dom().same_shape(upper.cod()) || !lower.cod().same_shape(upper.dom()) {
            return Err(Error::shape("lower and upper maps run between different lattices"));
        }
        Ok(GaloisConnection { lower, upper })
    }

    /// [`from_maps`](Self::from_maps) followed by [`validate`](Self::validate).
    pub fn new(lower: MonotoneMap, upper: MonotoneMap) -> Result<Self> {
        let conn = Self::from_maps(lower, upper)?;
        conn.validate()
            .map_err(|AdjunctionFailure { x, y }| Error::NotAdjoint { x, y })?;
        Ok(conn)
    }

    pub fn identity(lattice: Arc<FiniteLattice>) -> Self {
        let id = MonotoneMap::identity(lattice);
        GaloisConnection {
            lower: id.clone(),
            upper: id,
        }
    }

    pub fn lower(&self) -> &MonotoneMap {
        &self.lower
    }

    pub fn upper(&self) -> &MonotoneMap {
        &self.upper
    }

    /// Domain `K` of the lower adjoint.
    pub fn source(&self) -> &Arc<FiniteLattice> {
        self.lower.dom()
    }

    /// Codomain `L` of the lower adjoint.
    pub fn target(&self) -> &Arc<FiniteLattice> {
        self.lower.cod()
    }

    /// Checks the adjunction through unit and counit (`upper∘lower ⪰ id`,
    /// `lower∘upper ⪯ id`), which is equivalent for monotone maps and linear
    /// in the lattice sizes. On failure reports the first offending `(x, y)`
    /// pair in lexicographic order.
    pub fn validate(&self) -> std::result::Result<(), AdjunctionFailure> {
        let (k, l) = (self.source(), self.target());
        let unit_ok = k.elements().all(|x| k.leq(x, self.upper.apply(self.lower.apply(x))));
        let counit_ok = l.elements().all(|y| l.leq(self.lower.apply(self.upper.apply(y)), y));
        if unit_ok && counit_ok {
            return Ok(());
        }
        if k.size().saturating_mul(l.size()) <= WITNESS_SCAN_LIMIT {
            for x in k.elements() {
                for y in l.elements() {
                    if l.leq(self.lower.apply(x), y) != k.leq(x, self.upper.apply(y)) {
                        return Err(AdjunctionFailure { x, y });
                    }
                }
            }
        }
        let x = k
            .elements()
            .find(|&x| !k.leq(x, self.upper.apply(self.lower.apply(x))));
        Err(match x {
            Some(x) => AdjunctionFailure {
                x,
                y: self.lower.apply(x),
            },
            None => {
                let y = l
                    .elements()
                    .find(|&y| !l.leq(self.lower.apply(self.upper.apply(y)), y))
                    .expect("unit or counit fails");
                AdjunctionFailure {
                    x: self.upper.apply(y),
                    y,
                }
            }
        })
    }

    /// `upper ∘ lower`, a closure operator on the source.
    pub fn closure(&self) -> MonotoneMap {
        self.upper.after(&self.lower).expect("shapes checked at construction")
    }

    /// `lower ∘ upper`, a kernel (interior) operator on the target.
    pub fn coclosure(&self) -> MonotoneMap {
        self.lower.after(&self.upper).expect("shapes checked at construction")
    }

    /// Tablewise equality.
    pub fn same_as(&self, other: &GaloisConnection) -> bool {
        self.lower.same_as(&other.lower) && self.upper.same_as(&other.upper)
    }
}

/// Completes a join-preserving `f: K → L` to `(f, f*)` with
/// `f*(y) = ⋁{x | f(x) ⪯ y}`.
pub fn adjoint_of(f: &MonotoneMap) -> Result<GaloisConnection> {
    f.preserves_binary_joins()
        .map_err(|(a, b)| Error::NotJoinPreserving { a, b })?;
    let (k, l) = (f.dom(), f.cod());
    let upper: Vec<Elem> = match k.powerset_ground() {
        // Join-preserving maps out of ℘(X) are determined by the atoms.
        Some(ground) => l
            .elements()
            .map(|y| {
                (0..ground.len())
                    .filter(|b| l.leq(f.apply(1 << b), y))
                    .fold(0, |acc, b| acc | 1 << b)
            })
            .collect(),
        None => l
            .elements()
            .map(|y| k.join_all(k.elements().filter(|&x| l.leq(f.apply(x), y))))
            .collect(),
    };
    let upper = MonotoneMap::new(l.clone(), k.clone(), upper)?;
    Ok(GaloisConnection {
        lower: f.clone(),
        upper,
    })
}

/// Completes a meet-preserving `g: L → K` to `(g_*, g)` with
/// `g_*(x) = ⋀{y | g(y) ⪰ x}`.
pub fn coadjoint_of(g: &MonotoneMap) -> Result<GaloisConnection> {
    g.preserves_binary_meets()
        .map_err(|(a, b)| Error::NotMeetPreserving { a, b })?;
    let (l, k) = (g.dom(), g.cod());
    let lower: Vec<Elem> = match l.powerset_ground() {
        Some(ground) => {
            let full = l.top();
            k.elements()
                .map(|x| {
                    (0..ground.len())
                        .map(|b| full & !(1 << b))
                        .filter(|&c| k.leq(x, g.apply(c)))
                        .fold(full, |acc, c| acc & c)
                })
                .collect()
        }
        None => k
            .elements()
            .map(|x| l.meet_all(l.elements().filter(|&y| k.leq(x, g.apply(y)))))
            .collect(),
    };
    let lower = MonotoneMap::new(k.clone(), l.clone(), lower)?;
    Ok(GaloisConnection {
        lower,
        upper: g.clone(),
    })
}

/// `g ∘ f` for `f: K → L`, `g: L → M`: lower `g.lower∘f.lower`, upper `f.upper∘g.upper`.
pub fn compose(g: &GaloisConnection, f: &GaloisConnection) -> Result<GaloisConnection> {
    if !f.target().same_shape(g.source()) {
        return Err(Error::shape("compose: middle lattices differ"));
    }
    Ok(GaloisConnection {
        lower: g.lower.after(&f.lower)?,
        upper: f.upper.after(&g.upper)?,
    })
}

/// The closure operator `upper ∘ lower` on the source lattice.
pub fn closure_of(conn: &GaloisConnection) -> MonotoneMap {
    conn.closure()
}

/// The kernel operator `lower ∘ upper` on the target lattice.
pub fn coclosure_of(conn: &GaloisConnection) -> MonotoneMap {
    conn.coclosure()
}
