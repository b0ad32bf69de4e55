//! Complete residuated lattices and the integral transforms they support.
//!
//! A residuated lattice carries a monoid `⋆` with unit `1` and a residual
//! `[y, z]` satisfying `x ⋆ y ⪯ z ⇔ x ⪯ [y, z]`.

use std::fmt::Debug;
use std::sync::Arc;

use num_rational::Rational64;

use super::maxplus::ExtendedReal;
use crate::error::{Error, Result};
use crate::lattice::{Elem, FiniteLattice};

pub trait Residuated {
    type Value: Clone + Debug + PartialEq;

    fn bot(&self) -> Self::Value;
    fn top(&self) -> Self::Value;
    fn unit(&self) -> Self::Value;
    fn leq(&self, a: &Self::Value, b: &Self::Value) -> bool;
    fn join(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn meet(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn star(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    /// `[y, z] = ⋁{x | x ⋆ y ⪯ z}`.
    fn residual(&self, y: &Self::Value, z: &Self::Value) -> Self::Value;

    fn join_all(&self, items: impl IntoIterator<Item = Self::Value>) -> Self::Value {
        items.into_iter().fold(self.bot(), |acc, v| self.join(&acc, &v))
    }

    fn meet_all(&self, items: impl IntoIterator<Item = Self::Value>) -> Self::Value {
        items.into_iter().fold(self.top(), |acc, v| self.meet(&acc, &v))
    }
}

/// `({0, 1}, ∧)` with residual `y → z`.
#[derive(Clone, Copy, Debug, Default)]
pub struct BooleanAlgebra;

impl Residuated for BooleanAlgebra {
    type Value = bool;

    fn bot(&self) -> bool {
        false
    }
    fn top(&self) -> bool {
        true
    }
    fn unit(&self) -> bool {
        true
    }
    fn leq(&self, a: &bool, b: &bool) -> bool {
        !a | b
    }
    fn join(&self, a: &bool, b: &bool) -> bool {
        a | b
    }
    fn meet(&self, a: &bool, b: &bool) -> bool {
        a & b
    }
    fn star(&self, a: &bool, b: &bool) -> bool {
        a & b
    }
    fn residual(&self, y: &bool, z: &bool) -> bool {
        !y | z
    }
}

/// `(ℝ̄, +)` with unit `0`, residual `z − y`, compared up to
/// [`TOLERANCE`](super::maxplus::TOLERANCE).
#[derive(Clone, Copy, Debug, Default)]
pub struct MaxPlus;

impl Residuated for MaxPlus {
    type Value = ExtendedReal;

    fn bot(&self) -> ExtendedReal {
        ExtendedReal::NegInf
    }
    fn top(&self) -> ExtendedReal {
        ExtendedReal::PosInf
    }
    fn unit(&self) -> ExtendedReal {
        ExtendedReal::Finite(0.0)
    }
    fn leq(&self, a: &ExtendedReal, b: &ExtendedReal) -> bool {
        a.leq_tol(*b)
    }
    fn join(&self, a: &ExtendedReal, b: &ExtendedReal) -> ExtendedReal {
        a.max(*b)
    }
    fn meet(&self, a: &ExtendedReal, b: &ExtendedReal) -> ExtendedReal {
        a.min(*b)
    }
    fn star(&self, a: &ExtendedReal, b: &ExtendedReal) -> ExtendedReal {
        a.add_lower(*b)
    }
    fn residual(&self, y: &ExtendedReal, z: &ExtendedReal) -> ExtendedReal {
        z.add_upper(-*y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TNormKind {
    Product,
    Lukasiewicz,
    /// Gödel (minimum) t-norm.
    Godel,
}

/// `[0, 1] ∩ ℚ` with a continuous t-norm, in exact arithmetic.
#[derive(Clone, Copy, Debug)]
pub struct TNorm(pub TNormKind);

impl Residuated for TNorm {
    type Value = Rational64;

    fn bot(&self) -> Rational64 {
        Rational64::from_integer(0)
    }
    fn top(&self) -> Rational64 {
        Rational64::from_integer(1)
    }
    fn unit(&self) -> Rational64 {
        self.top()
    }
    fn leq(&self, a: &Rational64, b: &Rational64) -> bool {
        a <= b
    }
    fn join(&self, a: &Rational64, b: &Rational64) -> Rational64 {
        *a.max(b)
    }
    fn meet(&self, a: &Rational64, b: &Rational64) -> Rational64 {
        *a.min(b)
    }
    fn star(&self, a: &Rational64, b: &Rational64) -> Rational64 {
        match self.0 {
            TNormKind::Product => a * b,
            TNormKind::Lukasiewicz => (a + b - self.top()).max(self.bot()),
            TNormKind::Godel => *a.min(b),
        }
    }
    fn residual(&self, y: &Rational64, z: &Rational64) -> Rational64 {
        if y <= z {
            return self.top();
        }
        match self.0 {
            TNormKind::Product => z / y,
            TNormKind::Lukasiewicz => self.top() - y + z,
            TNormKind::Godel => *z,
        }
    }
}

/// A finite distributive lattice as a Heyting algebra: `⋆ = ∧`,
/// `[y, z] = ⋁{x | x ∧ y ⪯ z}`.
#[derive(Clone, Debug)]
pub struct Heyting {
    lattice: Arc<FiniteLattice>,
    residual: Vec<Elem>,
}

impl Heyting {
    pub fn new(lattice: Arc<FiniteLattice>) -> Result<Self> {
        if !lattice.is_distributive() {
            return Err(Error::NotDistributive);
        }
        let m = lattice.size();
        let residual = match lattice.powerset_ground() {
            Some(_) => (0..m * m).map(|k| (!(k / m) | (k % m)) & lattice.top()).collect(),
            None => (0..m * m)
                .map(|k| {
                    let (y, z) = (k / m, k % m);
                    lattice.join_all(lattice.elements().filter(|&x| lattice.leq(lattice.meet(x, y), z)))
                })
                .collect(),
        };
        Ok(Heyting { lattice, residual })
    }

    pub fn lattice(&self) -> &Arc<FiniteLattice> {
        &self.lattice
    }
}

impl Residuated for Heyting {
    type Value = Elem;

    fn bot(&self) -> Elem {
        self.lattice.bot()
    }
    fn top(&self) -> Elem {
        self.lattice.top()
    }
    fn unit(&self) -> Elem {
        self.lattice.top()
    }
    fn leq(&self, a: &Elem, b: &Elem) -> bool {
        self.lattice.leq(*a, *b)
    }
    fn join(&self, a: &Elem, b: &Elem) -> Elem {
        self.lattice.join(*a, *b)
    }
    fn meet(&self, a: &Elem, b: &Elem) -> Elem {
        self.lattice.meet(*a, *b)
    }
    fn star(&self, a: &Elem, b: &Elem) -> Elem {
        self.lattice.meet(*a, *b)
    }
    fn residual(&self, y: &Elem, z: &Elem) -> Elem {
        self.residual[y * self.lattice.size() + z]
    }
}

/// `ĝ(y) = ⋁_x H(x, y) ⋆ g(x)` for a kernel `H: X × Y → V` stored row-major
/// (`kernel[x][y]`).
pub fn integral_transform<R: Residuated>(
    alg: &R,
    kernel: &[Vec<R::Value>],
    g: &[R::Value],
) -> Result<Vec<R::Value>> {
    let cols = kernel_shape(kernel, g.len())?;
    Ok((0..cols)
        .map(|y| alg.join_all(g.iter().enumerate().map(|(x, gx)| alg.star(&kernel[x][y], gx))))
        .collect())
}

/// Right adjoint of [`integral_transform`]: `ǧ(x) = ⋀_y [H(x, y), g(y)]`,
/// the greatest `f` with `f̂ ⪯ g`.
pub fn adjoint_transform<R: Residuated>(
    alg: &R,
    kernel: &[Vec<R::Value>],
    g: &[R::Value],
) -> Result<Vec<R::Value>> {
    let cols = kernel_shape(kernel, kernel.len())?;
    if g.len() != cols {
        return Err(Error::shape(format!("signal of length {} for {} kernel columns", g.len(), cols)));
    }
    Ok(kernel
        .iter()
        .map(|row| alg.meet_all(row.iter().zip(g).map(|(h, gy)| alg.residual(h, gy))))
        .collect())
}

fn kernel_shape<V>(kernel: &[Vec<V>], rows: usize) -> Result<usize> {
    if kernel.len() != rows {
        return Err(Error::shape(format!("kernel has {} rows, expected {rows}", kernel.len())));
    }
    let cols = kernel.first().map_or(0, Vec::len);
    if kernel.iter().any(|r| r.len() != cols) {
        return Err(Error::shape("ragged kernel"));
    }
    Ok(cols)
}

/// First `(x, y)` among the samples violating `x ⋆ y ⪯ z ⇔ x ⪯ [y, z]`.
pub fn residuation_counterexample<R: Residuated>(
    alg: &R,
    samples: &[R::Value],
) -> Option<(R::Value, R::Value, R::Value)> {
    for x in samples {
        for y in samples {
            for z in samples {
                if alg.leq(&alg.star(x, y), z) != alg.leq(x, &alg.residual(y, z)) {
                    return Some((x.clone(), y.clone(), z.clone()));
                }
            }
        }
    }
    None
}
