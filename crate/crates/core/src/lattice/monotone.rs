use std::sync::Arc;

use super::{Elem, FiniteLattice};
use crate::error::{Error, Result};

/// An order-preserving map between finite lattices, stored as its image table.
#[derive(Clone, Debug)]
pub struct MonotoneMap {
    dom: Arc<FiniteLattice>,
    cod: Arc<FiniteLattice>,
    image: Vec<Elem>,
}

impl MonotoneMap {
    /// Validates shape and monotonicity.
    pub fn new(dom: Arc<FiniteLattice>, cod: Arc<FiniteLattice>, image: Vec<Elem>) -> Result<Self> {
        if image.len() != dom.size() {
            return Err(Error::shape(format!(
                "image table has {} entries, domain has {}",
                image.len(),
                dom.size()
            )));
        }
        if let Some(&bad) = image.iter().find(|&&y| y >= cod.size()) {
            return Err(Error::shape(format!("image value {bad} outside codomain")));
        }
        let map = MonotoneMap { dom, cod, image };
        map.check_monotone()?;
        Ok(map)
    }

    pub(crate) fn new_unchecked(dom: Arc<FiniteLattice>, cod: Arc<FiniteLattice>, image: Vec<Elem>) -> Self {
        MonotoneMap { dom, cod, image }
    }

    pub fn from_fn(
        dom: Arc<FiniteLattice>,
        cod: Arc<FiniteLattice>,
        f: impl Fn(Elem) -> Elem,
    ) -> Result<Self> {
        let image = dom.elements().map(f).collect();
        Self::new(dom, cod, image)
    }

    pub fn identity(lattice: Arc<FiniteLattice>) -> Self {
        let image = lattice.elements().collect();
        MonotoneMap {
            dom: lattice.clone(),
            cod: lattice,
            image,
        }
    }

    pub fn constant(dom: Arc<FiniteLattice>, cod: Arc<FiniteLattice>, value: Elem) -> Self {
        assert!(value < cod.size());
        let image = vec![value; dom.size()];
        MonotoneMap { dom, cod, image }
    }

    fn check_monotone(&self) -> Result<()> {
        let dom = &self.dom;
        let ok = |a: Elem, b: Elem| self.cod.leq(self.image[a], self.image[b]);
        if dom.powerset_ground().is_some() {
            // Covers of a boolean lattice are single-bit additions.
            let bits = dom.powerset_ground().unwrap().len();
            for a in dom.elements() {
                for bit in 0..bits {
                    let b = a | 1 << bit;
                    if b != a && !ok(a, b) {
                        return Err(Error::NotMonotone { a, b });
                    }
                }
            }
        } else {
            for a in dom.elements() {
                for b in dom.elements() {
                    if dom.leq(a, b) && !ok(a, b) {
                        return Err(Error::NotMonotone { a, b });
                    }
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn apply(&self, x: Elem) -> Elem {
        self.image[x]
    }

    pub fn image(&self) -> &[Elem] {
        &self.image
    }

    pub fn dom(&self) -> &Arc<FiniteLattice> {
        &self.dom
    }

    pub fn cod(&self) -> &Arc<FiniteLattice> {
        &self.cod
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &MonotoneMap) -> Result<MonotoneMap> {
        if !inner.cod.same_shape(&self.dom) {
            return Err(Error::shape("composition: codomain/domain mismatch"));
        }
        let image = inner.image.iter().map(|&y| self.image[y]).collect();
        Ok(MonotoneMap {
            dom: inner.dom.clone(),
            cod: self.cod.clone(),
            image,
        })
    }

    /// Tablewise equality (lattices compared by shape).
    pub fn same_as(&self, other: &MonotoneMap) -> bool {
        self.image == other.image && self.dom.same_shape(&other.dom) && self.cod.same_shape(&other.cod)
    }

    pub fn is_endo(&self) -> bool {
        self.dom.same_shape(&self.cod)
    }

    pub fn preserves_binary_joins(&self) -> std::result::Result<(), (Elem, Elem)> {
        if self.image[self.dom.bot()] != self.cod.bot() {
            return Err((self.dom.bot(), self.dom.bot()));
        }
        if let Some(ground) = self.dom.powerset_ground() {
            // f(A) must equal the join of f over the atoms of A.
            for a in self.dom.elements() {
                let atoms = (0..ground.len()).filter(|b| a >> b & 1 == 1).map(|b| self.image[1 << b]);
                if self.cod.join_all(atoms) != self.image[a] {
                    let low = a & a.wrapping_neg();
                    return Err((low, a & !low));
                }
            }
            return Ok(());
        }
        for a in self.dom.elements() {
            for b in a..self.dom.size() {
                if self.image[self.dom.join(a, b)] != self.cod.join(self.image[a], self.image[b]) {
                    return Err((a, b));
                }
            }
        }
        Ok(())
    }

    pub fn preserves_binary_meets(&self) -> std::result::Result<(), (Elem, Elem)> {
        if self.image[self.dom.top()] != self.cod.top() {
            return Err((self.dom.top(), self.dom.top()));
        }
        if let Some(ground) = self.dom.powerset_ground() {
            let full = self.dom.top();
            for a in self.dom.elements() {
                let coatoms = (0..ground.len())
                    .filter(|b| a >> b & 1 == 0)
                    .map(|b| self.image[full & !(1 << b)]);
                if self.cod.meet_all(coatoms) != self.image[a] {
                    let missing = !a & full;
                    let low = missing & missing.wrapping_neg();
                    return Err((full & !low, a | low));
                }
            }
            return Ok(());
        }
        for a in self.dom.elements() {
            for b in a..self.dom.size() {
                if self.image[self.dom.meet(a, b)] != self.cod.meet(self.image[a], self.image[b]) {
                    return Err((a, b));
                }
            }
        }
        Ok(())
    }
}

/// Prefix, suffix and fixed points of an endomap, plus the least fixed point
/// reached by iterating `x ↦ f(x) ∨ x` from the bottom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedPointSets {
    /// `{x | f(x) ⪯ x}`
    pub prefix: Vec<Elem>,
    /// `{x | f(x) ⪰ x}`
    pub suffix: Vec<Elem>,
    pub fixed: Vec<Elem>,
    pub least_fixed: Elem,
}

pub fn fixed_point_sets(f: &MonotoneMap) -> Result<FixedPointSets> {
    if !f.is_endo() {
        return Err(Error::shape("fixed points need an endomap"));
    }
    let l = f.dom();
    let prefix: Vec<Elem> = l.elements().filter(|&x| l.leq(f.apply(x), x)).collect();
    let suffix: Vec<Elem> = l.elements().filter(|&x| l.leq(x, f.apply(x))).collect();
    let fixed = l.elements().filter(|&x| f.apply(x) == x).collect();
    let mut x = l.bot();
    loop {
        let next = l.join(f.apply(x), x);
        if next == x {
            break;
        }
        x = next;
    }
    Ok(FixedPointSets {
        prefix,
        suffix,
        fixed,
        least_fixed: x,
    })
}
