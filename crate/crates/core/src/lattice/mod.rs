//! Finite complete lattices as explicit order structures.
//!
//! Elements are dense indices `0..m`. General lattices carry a precomputed
//! order bit-matrix plus meet/join tables. Powerset lattices use a boolean
//! representation instead: element `a` *is* the bitmask of the subset, and
//! meet/join are `&`/`|`, which keeps `℘(S)` usable up to twenty atoms
//! without quadratic tables.

mod bits;
mod construct;
pub mod corpus;
mod monotone;
mod structure;

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

pub(crate) use bits::BitMatrix;
pub use construct::{downset_lattice, partition_label};
pub use monotone::{fixed_point_sets, FixedPointSets, MonotoneMap};
pub use structure::{birkhoff_check, Poset};

/// Index of an element inside a [`FiniteLattice`].
pub type Elem = usize;

/// Upper bound on the element count of a table-backed lattice.
pub const MAX_TABLE_ELEMENTS: usize = 4096;
/// Upper bound on the ground-set size of a powerset lattice.
pub const MAX_POWERSET_GROUND: usize = 20;

#[derive(Clone, Debug)]
enum Repr {
    Table {
        leq: BitMatrix,
        meet: Vec<u32>,
        join: Vec<u32>,
    },
    Boolean {
        bits: u32,
    },
}

#[derive(Clone, Debug)]
enum Labels {
    Stored(Vec<String>),
    Subsets(Vec<String>),
}

#[derive(Clone, Debug)]
pub struct FiniteLattice {
    m: usize,
    bot: Elem,
    top: Elem,
    repr: Repr,
    labels: Labels,
}

impl FiniteLattice {
    /// Builds and validates a lattice from its order table `leq[a][b] ⇔ a ⪯ b`.
    pub fn from_leq(leq: &[Vec<bool>]) -> Result<Self> {
        let labels = (0..leq.len()).map(|i| i.to_string()).collect();
        Self::from_leq_labeled(leq, labels)
    }

    pub fn from_leq_labeled(leq: &[Vec<bool>], labels: Vec<String>) -> Result<Self> {
        let m = leq.len();
        if m == 0 {
            return Err(Error::NotPartialOrder("empty carrier".into()));
        }
        if leq.iter().any(|row| row.len() != m) {
            return Err(Error::shape("order table is not square"));
        }
        if labels.len() != m {
            return Err(Error::shape("label count differs from element count"));
        }
        if m > MAX_TABLE_ELEMENTS {
            return Err(Error::too_large("lattice", m as u128, MAX_TABLE_ELEMENTS as u128));
        }
        let up = BitMatrix::from_fn(m, |a, b| leq[a][b]);
        Self::from_order(up, labels)
    }

    /// Builds a lattice as the reflexive-transitive closure of `pairs`
    /// (`(a, b)` meaning `a ⪯ b`), e.g. from a cover list.
    pub fn from_order_pairs(labels: Vec<String>, pairs: &[(Elem, Elem)]) -> Result<Self> {
        let m = labels.len();
        if m == 0 {
            return Err(Error::NotPartialOrder("empty carrier".into()));
        }
        if m > MAX_TABLE_ELEMENTS {
            return Err(Error::too_large("lattice", m as u128, MAX_TABLE_ELEMENTS as u128));
        }
        let mut up = BitMatrix::new(m);
        for &(a, b) in pairs {
            if a >= m || b >= m {
                return Err(Error::shape(format!("order pair ({a}, {b}) out of range")));
            }
            up.set(a, b);
        }
        up.close_transitively();
        Self::from_order(up, labels)
    }

    /// `up.get(a, b)` ⇔ `a ⪯ b`.
    fn from_order(up: BitMatrix, labels: Vec<String>) -> Result<Self> {
        let m = labels.len();
        for a in 0..m {
            if !up.get(a, a) {
                return Err(Error::NotPartialOrder(format!("not reflexive at {a}")));
            }
        }
        for a in 0..m {
            for b in bits::ones(up.row(a)) {
                if b != a && up.get(b, a) {
                    return Err(Error::NotPartialOrder(format!(
                        "not antisymmetric: {a} and {b}"
                    )));
                }
                if !bits::subset(up.row(b), up.row(a)) {
                    return Err(Error::NotPartialOrder(format!(
                        "not transitive through {a} ⪯ {b}"
                    )));
                }
            }
        }
        let down = up.transpose();

        // Linear extension: strictly smaller elements have strictly smaller down-sets.
        let mut order: Vec<Elem> = (0..m).collect();
        let down_count: Vec<u32> = (0..m)
            .map(|a| down.row(a).iter().map(|w| w.count_ones()).sum())
            .collect();
        order.sort_by_key(|&a| (down_count[a], a));
        // Up-sets indexed by position: the first bit of an upper-bound set is a
        // minimal upper bound. Down-sets are indexed by reversed position.
        let up_pos = BitMatrix::from_fn(m, |a, p| up.get(a, order[p]));
        let down_pos = BitMatrix::from_fn(m, |a, p| down.get(a, order[m - 1 - p]));

        let words = up_pos.words();
        let mut scratch = vec![0u64; words];
        let mut meet = vec![0u32; m * m];
        let mut join = vec![0u32; m * m];
        for a in 0..m {
            for b in a..m {
                let j = bound(&up_pos, a, b, &mut scratch, |p| order[p]).map(|p| order[p]);
                let j = j.ok_or(Error::NotALattice {
                    a,
                    b,
                    bound: "least upper bound",
                })?;
                let mt = bound(&down_pos, a, b, &mut scratch, |p| order[m - 1 - p])
                    .map(|p| order[m - 1 - p]);
                let mt = mt.ok_or(Error::NotALattice {
                    a,
                    b,
                    bound: "greatest lower bound",
                })?;
                join[a * m + b] = j as u32;
                join[b * m + a] = j as u32;
                meet[a * m + b] = mt as u32;
                meet[b * m + a] = mt as u32;
            }
        }
        let bot = (0..m).fold(order[m - 1], |acc, x| meet[acc * m + x] as usize);
        let top = (0..m).fold(order[0], |acc, x| join[acc * m + x] as usize);
        Ok(FiniteLattice {
            m,
            bot,
            top,
            repr: Repr::Table { leq: up, meet, join },
            labels: Labels::Stored(labels),
        })
    }

    /// Trusted constructor for constructions whose algebra is known correct.
    pub(crate) fn from_tables(
        leq: BitMatrix,
        meet: Vec<u32>,
        join: Vec<u32>,
        bot: Elem,
        top: Elem,
        labels: Vec<String>,
    ) -> Self {
        FiniteLattice {
            m: labels.len(),
            bot,
            top,
            repr: Repr::Table { leq, meet, join },
            labels: Labels::Stored(labels),
        }
    }

    pub(crate) fn boolean(ground: Vec<String>) -> Self {
        let bits = ground.len() as u32;
        let m = 1usize << bits;
        FiniteLattice {
            m,
            bot: 0,
            top: m - 1,
            repr: Repr::Boolean { bits },
            labels: Labels::Subsets(ground),
        }
    }

    /// Number of elements.
    pub fn size(&self) -> usize {
        self.m
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.m
    }

    pub fn bot(&self) -> Elem {
        self.bot
    }

    pub fn top(&self) -> Elem {
        self.top
    }

    #[inline]
    pub fn leq(&self, a: Elem, b: Elem) -> bool {
        match &self.repr {
            Repr::Table { leq, .. } => leq.get(a, b),
            Repr::Boolean { .. } => a & !b == 0,
        }
    }

    #[inline]
    pub fn lt(&self, a: Elem, b: Elem) -> bool {
        a != b && self.leq(a, b)
    }

    #[inline]
    pub fn meet(&self, a: Elem, b: Elem) -> Elem {
        match &self.repr {
            Repr::Table { meet, .. } => meet[a * self.m + b] as Elem,
            Repr::Boolean { .. } => a & b,
        }
    }

    #[inline]
    pub fn join(&self, a: Elem, b: Elem) -> Elem {
        match &self.repr {
            Repr::Table { join, .. } => join[a * self.m + b] as Elem,
            Repr::Boolean { .. } => a | b,
        }
    }

    /// Meet of a family; the empty meet is `top`.
    pub fn meet_all(&self, items: impl IntoIterator<Item = Elem>) -> Elem {
        items.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    /// Join of a family; the empty join is `bot`.
    pub fn join_all(&self, items: impl IntoIterator<Item = Elem>) -> Elem {
        items.into_iter().fold(self.bot, |acc, x| self.join(acc, x))
    }

    /// For powerset lattices, the ground-set labels; elements are bitmasks over them.
    pub fn powerset_ground(&self) -> Option<&[String]> {
        match (&self.repr, &self.labels) {
            (Repr::Boolean { .. }, Labels::Subsets(g)) => Some(g),
            _ => None,
        }
    }

    pub fn label(&self, a: Elem) -> String {
        match &self.labels {
            Labels::Stored(l) => l[a].clone(),
            Labels::Subsets(ground) => subset_label(ground, a),
        }
    }

    pub fn labels(&self) -> Vec<String> {
        self.elements().map(|a| self.label(a)).collect()
    }

    /// Inverse of [`label`](Self::label). Powerset labels accept any member order.
    pub fn find_label(&self, label: &str) -> Option<Elem> {
        match &self.labels {
            Labels::Stored(l) => l.iter().position(|s| s == label),
            Labels::Subsets(ground) => parse_subset_label(ground, label),
        }
    }

    /// Structural equality of the order (labels ignored).
    pub fn same_shape(&self, other: &FiniteLattice) -> bool {
        if std::ptr::eq(self, other) {
            return true;
        }
        if self.m != other.m || self.bot != other.bot || self.top != other.top {
            return false;
        }
        match (&self.repr, &other.repr) {
            (Repr::Boolean { bits: a }, Repr::Boolean { bits: b }) => a == b,
            (Repr::Table { leq: a, .. }, Repr::Table { leq: b, .. }) => a == b,
            _ => {
                self.m <= MAX_TABLE_ELEMENTS
                    && self
                        .elements()
                        .all(|a| self.elements().all(|b| self.leq(a, b) == other.leq(a, b)))
            }
        }
    }

    /// The order-dual lattice: same elements and labels, `⪯` reversed.
    pub fn opposite(&self) -> FiniteLattice {
        let m = self.m;
        let leq = BitMatrix::from_fn(m, |a, b| self.leq(b, a));
        let mut meet = vec![0u32; m * m];
        let mut join = vec![0u32; m * m];
        for a in 0..m {
            for b in 0..m {
                meet[a * m + b] = self.join(a, b) as u32;
                join[a * m + b] = self.meet(a, b) as u32;
            }
        }
        FiniteLattice::from_tables(leq, meet, join, self.top, self.bot, self.labels())
    }

    /// Elements in a fixed linear extension of the order (a topological sort,
    /// ties broken by index).
    pub fn linear_extension(&self) -> Vec<Elem> {
        let mut order: Vec<Elem> = self.elements().collect();
        match &self.repr {
            Repr::Boolean { .. } => order.sort_by_key(|&a| (a.count_ones(), a)),
            Repr::Table { leq, .. } => {
                let below: Vec<usize> = self
                    .elements()
                    .map(|b| self.elements().filter(|&a| leq.get(a, b)).count())
                    .collect();
                order.sort_by_key(|&a| (below[a], a));
            }
        }
        order
    }

    /// Upper covers of every element (`covers[x]` lists `y` with `x ⋖ y`).
    pub fn upper_covers(&self) -> Vec<Vec<Elem>> {
        match &self.repr {
            Repr::Boolean { bits } => self
                .elements()
                .map(|a| (0..*bits).map(|b| a | (1 << b)).filter(|&c| c != a).collect())
                .collect(),
            Repr::Table { leq, .. } => {
                let m = self.m;
                let strict_down = BitMatrix::from_fn(m, |y, x| x != y && leq.get(x, y));
                let mut covers = vec![Vec::new(); m];
                let mut below = vec![0u64; strict_down.words()];
                for y in 0..m {
                    below.iter_mut().for_each(|w| *w = 0);
                    for z in bits::ones(strict_down.row(y)) {
                        for (w, bits) in below.iter_mut().zip(strict_down.row(z)) {
                            *w |= bits;
                        }
                    }
                    for x in bits::ones(strict_down.row(y)) {
                        if (below[x / 64] >> (x % 64)) & 1 == 0 {
                            covers[x].push(y);
                        }
                    }
                }
                covers
            }
        }
    }

    /// Length of the longest chain from `bot` to `top` (number of cover steps).
    pub fn height(&self) -> usize {
        match &self.repr {
            Repr::Boolean { bits } => *bits as usize,
            Repr::Table { .. } => {
                let covers = self.upper_covers();
                let mut depth = vec![0usize; self.m];
                for x in self.linear_extension() {
                    for &y in &covers[x] {
                        depth[y] = depth[y].max(depth[x] + 1);
                    }
                }
                depth[self.top]
            }
        }
    }

    /// Exhaustive check of the order/algebra agreement: partial order,
    /// meet = glb, join = lub, bounds. Quadratic-to-cubic; for tests.
    pub fn check_laws(&self) -> std::result::Result<(), String> {
        let m = self.m;
        for a in 0..m {
            if !self.leq(a, a) {
                return Err(format!("not reflexive at {a}"));
            }
            if !self.leq(self.bot, a) || !self.leq(a, self.top) {
                return Err(format!("bounds fail at {a}"));
            }
            for b in 0..m {
                if a != b && self.leq(a, b) && self.leq(b, a) {
                    return Err(format!("antisymmetry fails at ({a},{b})"));
                }
                let (mt, j) = (self.meet(a, b), self.join(a, b));
                if !(self.leq(mt, a) && self.leq(mt, b) && self.leq(a, j) && self.leq(b, j)) {
                    return Err(format!("bounds of ({a},{b}) are not bounds"));
                }
                for c in 0..m {
                    if self.leq(a, b) && self.leq(b, c) && !self.leq(a, c) {
                        return Err(format!("transitivity fails at ({a},{b},{c})"));
                    }
                    if self.leq(c, a) && self.leq(c, b) && !self.leq(c, mt) {
                        return Err(format!("meet of ({a},{b}) is not greatest"));
                    }
                    if self.leq(a, c) && self.leq(b, c) && !self.leq(j, c) {
                        return Err(format!("join of ({a},{b}) is not least"));
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for FiniteLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "lattice with {} elements", self.m)
    }
}

/// Position of the unique extremal element of `row(a) ∩ row(b)`, if any.
/// Rows are indexed by linear-extension position, so the first set bit is a
/// minimal element of the bound set; it is the bound iff its own cone equals
/// the whole set.
fn bound(
    mat: &BitMatrix,
    a: Elem,
    b: Elem,
    scratch: &mut [u64],
    elem_at: impl Fn(usize) -> Elem,
) -> Option<usize> {
    for (s, (x, y)) in scratch.iter_mut().zip(mat.row(a).iter().zip(mat.row(b))) {
        *s = x & y;
    }
    let first = bits::ones(scratch).next()?;
    (mat.row(elem_at(first)) == scratch).then_some(first)
}

fn subset_label(ground: &[String], mask: Elem) -> String {
    let members: Vec<&str> = ground
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, s)| s.as_str())
        .collect();
    format!("{{{}}}", members.join(","))
}

fn parse_subset_label(ground: &[String], label: &str) -> Option<Elem> {
    let inner = label.trim().strip_prefix('{')?.strip_suffix('}')?.trim();
    if inner.is_empty() {
        return Some(0);
    }
    let index: HashMap<&str, usize> = ground.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    inner
        .split(',')
        .map(|s| index.get(s.trim()).map(|&i| 1usize << i))
        .try_fold(0, |acc, bit| bit.map(|b| acc | b))
}
