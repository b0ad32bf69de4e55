use super::{construct, Elem, FiniteLattice};
use crate::error::{Error, Result};

/// A finite poset given by an explicit order table. Used for the
/// join-irreducible sub-order of a lattice and as input to the downset
/// construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    labels: Vec<String>,
    /// Element ids in the lattice this poset was extracted from, if any.
    source: Vec<Elem>,
    leq: Vec<Vec<bool>>,
}

impl Poset {
    pub fn new(labels: Vec<String>, leq: Vec<Vec<bool>>) -> Result<Self> {
        let k = labels.len();
        if leq.len() != k || leq.iter().any(|r| r.len() != k) {
            return Err(Error::shape("poset order table does not match labels"));
        }
        for a in 0..k {
            if !leq[a][a] {
                return Err(Error::NotPartialOrder(format!("not reflexive at {a}")));
            }
            for b in 0..k {
                if a != b && leq[a][b] && leq[b][a] {
                    return Err(Error::NotPartialOrder(format!("not antisymmetric at ({a},{b})")));
                }
                for c in 0..k {
                    if leq[a][b] && leq[b][c] && !leq[a][c] {
                        return Err(Error::NotPartialOrder(format!(
                            "not transitive at ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        Ok(Poset {
            source: (0..k).collect(),
            labels,
            leq,
        })
    }

    pub fn antichain<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Self {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let k = labels.len();
        let leq = (0..k).map(|a| (0..k).map(|b| a == b).collect()).collect();
        Poset {
            source: (0..k).collect(),
            labels,
            leq,
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    /// Lattice element each poset element came from.
    pub fn source_elements(&self) -> &[Elem] {
        &self.source
    }
}

impl FiniteLattice {
    /// Non-bottom elements `z` with `z = a ∨ b ⇒ z ∈ {a, b}`, with the inherited
    /// order. In a finite lattice these are exactly the elements with a single
    /// lower cover.
    pub fn join_irreducibles(&self) -> Poset {
        let mut lower_covers = vec![0usize; self.size()];
        for ups in self.upper_covers() {
            for y in ups {
                lower_covers[y] += 1;
            }
        }
        let source: Vec<Elem> = self.elements().filter(|&z| lower_covers[z] == 1).collect();
        let labels = source.iter().map(|&z| self.label(z)).collect();
        let leq = source
            .iter()
            .map(|&a| source.iter().map(|&b| self.leq(a, b)).collect())
            .collect();
        Poset { labels, source, leq }
    }

    /// Both distributive identities over all triples.
    pub fn is_distributive(&self) -> bool {
        if self.powerset_ground().is_some() {
            return true;
        }
        let m = self.size();
        (0..m).all(|x| {
            (0..m).all(|y| {
                (0..m).all(|z| {
                    self.meet(x, self.join(y, z)) == self.join(self.meet(x, y), self.meet(x, z))
                        && self.join(x, self.meet(y, z))
                            == self.meet(self.join(x, y), self.join(x, z))
                })
            })
        })
    }

    /// A rank function `r` with `r(bot) = 0` and `r(y) = r(x) + 1` on every cover
    /// `x ⋖ y`, or `None` when the lattice is not graded.
    pub fn rank_grading(&self) -> Option<Vec<usize>> {
        let covers = self.upper_covers();
        let mut rank = vec![0usize; self.size()];
        for x in self.linear_extension() {
            for &y in &covers[x] {
                rank[y] = rank[y].max(rank[x] + 1);
            }
        }
        let graded = covers
            .iter()
            .enumerate()
            .all(|(x, ups)| ups.iter().all(|&y| rank[y] == rank[x] + 1));
        graded.then_some(rank)
    }
}

/// Verifies `D(J(L)) ≅ L` through `x ↦ {j ∈ J(L) | j ⪯ x}`.
pub fn birkhoff_check(lattice: &FiniteLattice) -> Result<bool> {
    if !lattice.is_distributive() {
        return Err(Error::NotDistributive);
    }
    let irreducibles = lattice.join_irreducibles();
    let downsets = construct::downset_lattice(&irreducibles)?;
    if downsets.size() != lattice.size() {
        return Ok(false);
    }
    let image: Vec<usize> = lattice
        .elements()
        .map(|x| {
            irreducibles
                .source_elements()
                .iter()
                .enumerate()
                .filter(|&(_, &j)| lattice.leq(j, x))
                .fold(0, |acc, (k, _)| acc | 1 << k)
        })
        .collect();
    let mut sorted = image.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != lattice.size() {
        return Ok(false);
    }
    let order_iso = lattice.elements().all(|x| {
        lattice
            .elements()
            .all(|y| lattice.leq(x, y) == (image[x] & !image[y] == 0))
    });
    Ok(order_iso)
}
