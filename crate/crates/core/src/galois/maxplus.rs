//! Max-plus arithmetic over `ℝ ∪ {−∞, +∞}`: matrix action `A ⊻ x`, its
//! residual `A† ⊼ y`, and the alternating method for the two-node sheaf.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Neg;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};

/// Absolute tolerance for comparing finite values.
pub const TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExtendedReal {
    NegInf,
    Finite(f64),
    PosInf,
}

use ExtendedReal::{Finite, NegInf, PosInf};

impl ExtendedReal {
    /// Maps infinities and NaN-free floats; NaN is rejected.
    pub fn from_f64(v: f64) -> Option<Self> {
        if v.is_nan() {
            None
        } else if v == f64::INFINITY {
            Some(PosInf)
        } else if v == f64::NEG_INFINITY {
            Some(NegInf)
        } else {
            Some(Finite(v))
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            NegInf => f64::NEG_INFINITY,
            Finite(v) => v,
            PosInf => f64::INFINITY,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Finite(_))
    }

    /// `a ⊗ b` on the join side: `−∞` absorbs, so `(−∞) + (+∞) = −∞`.
    pub fn add_lower(self, other: Self) -> Self {
        match (self, other) {
            (NegInf, _) | (_, NegInf) => NegInf,
            (PosInf, _) | (_, PosInf) => PosInf,
            (Finite(a), Finite(b)) => Finite(a + b),
        }
    }

    /// `a ⊗′ b` on the meet side: `+∞` absorbs, so `(+∞) + (−∞) = +∞`.
    pub fn add_upper(self, other: Self) -> Self {
        match (self, other) {
            (PosInf, _) | (_, PosInf) => PosInf,
            (NegInf, _) | (_, NegInf) => NegInf,
            (Finite(a), Finite(b)) => Finite(a + b),
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self.total_cmp(&other) == Ordering::Less {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Self) -> Self {
        if self.total_cmp(&other) == Ordering::Greater {
            other
        } else {
            self
        }
    }

    /// Exact order; finite values compare with `f64::total_cmp`.
    pub fn total_cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Finite(a), Finite(b)) => a.total_cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }

    fn rank(&self) -> u8 {
        match self {
            NegInf => 0,
            Finite(_) => 1,
            PosInf => 2,
        }
    }

    /// `self ⪯ other` up to [`TOLERANCE`].
    pub fn leq_tol(self, other: Self) -> bool {
        match (self, other) {
            (Finite(a), Finite(b)) => a <= b + TOLERANCE,
            _ => self.rank() <= other.rank(),
        }
    }

    /// Equality up to [`TOLERANCE`].
    pub fn approx_eq(self, other: Self) -> bool {
        self.leq_tol(other) && other.leq_tol(self)
    }
}

impl Neg for ExtendedReal {
    type Output = Self;

    fn neg(self) -> Self {
        match self {
            NegInf => PosInf,
            Finite(v) => Finite(-v),
            PosInf => NegInf,
        }
    }
}

impl PartialOrd for ExtendedReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.total_cmp(other))
    }
}

impl From<f64> for ExtendedReal {
    fn from(v: f64) -> Self {
        ExtendedReal::from_f64(v).expect("NaN is not an extended real")
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NegInf => f.write_str("-inf"),
            Finite(v) => write!(f, "{v}"),
            PosInf => f.write_str("inf"),
        }
    }
}

impl Serialize for ExtendedReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Finite(v) => s.serialize_f64(*v),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for ExtendedReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = ExtendedReal;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a number, \"inf\" or \"-inf\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Self::Value, E> {
                ExtendedReal::from_f64(v).ok_or_else(|| E::custom("NaN"))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Self::Value, E> {
                Ok(Finite(v as f64))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Self::Value, E> {
                Ok(Finite(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Self::Value, E> {
                match v {
                    "inf" | "+inf" => Ok(PosInf),
                    "-inf" => Ok(NegInf),
                    _ => Err(E::invalid_value(de::Unexpected::Str(v), &self)),
                }
            }
        }
        d.deserialize_any(V)
    }
}

/// A dense `rows × cols` matrix over the extended reals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<ExtendedReal>>", into = "Vec<Vec<ExtendedReal>>")]
pub struct MaxPlusMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<ExtendedReal>,
}

impl MaxPlusMatrix {
    pub fn new(rows: Vec<Vec<ExtendedReal>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::shape("ragged max-plus matrix"));
        }
        Ok(MaxPlusMatrix {
            rows: rows.len(),
            cols,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_f64(rows: &[&[f64]]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.iter().map(|&v| ExtendedReal::from(v)).collect()).collect())
    }

    /// Max-plus identity: `0` on the diagonal, `−∞` elsewhere.
    pub fn identity(n: usize) -> Self {
        let entries = (0..n * n)
            .map(|k| if k / n == k % n { Finite(0.0) } else { NegInf })
            .collect();
        MaxPlusMatrix { rows: n, cols: n, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> ExtendedReal {
        self.entries[i * self.cols + j]
    }

    /// `(A ⊻ x)_i = ⋁_j (a_ij + x_j)`.
    pub fn apply(&self, x: &[ExtendedReal]) -> Result<Vec<ExtendedReal>> {
        if x.len() != self.cols {
            return Err(Error::shape(format!("vector of length {} for {} columns", x.len(), self.cols)));
        }
        Ok((0..self.rows)
            .map(|i| {
                (0..self.cols).fold(NegInf, |acc, j| acc.max(self.get(i, j).add_lower(x[j])))
            })
            .collect())
    }

    /// `(A† ⊼ y)_j = ⋀_i (−a_ij + y_i)`, the greatest `x` with `A ⊻ x ⪯ y`.
    pub fn dual_apply(&self, y: &[ExtendedReal]) -> Result<Vec<ExtendedReal>> {
        if y.len() != self.rows {
            return Err(Error::shape(format!("vector of length {} for {} rows", y.len(), self.rows)));
        }
        Ok((0..self.cols)
            .map(|j| {
                (0..self.rows).fold(PosInf, |acc, i| acc.min((-self.get(i, j)).add_upper(y[i])))
            })
            .collect())
    }
}

impl TryFrom<Vec<Vec<ExtendedReal>>> for MaxPlusMatrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<ExtendedReal>>) -> Result<Self> {
        MaxPlusMatrix::new(rows)
    }
}

impl From<MaxPlusMatrix> for Vec<Vec<ExtendedReal>> {
    fn from(m: MaxPlusMatrix) -> Self {
        m.entries.chunks(m.cols.max(1)).take(m.rows).map(<[_]>::to_vec).collect()
    }
}

/// Outcome of [`alternating_method`].
#[derive(Clone, Debug, PartialEq)]
pub struct SyncOutcome {
    pub x: Vec<ExtendedReal>,
    pub y: Vec<ExtendedReal>,
    /// Half-steps taken until neither vector changed.
    pub iterations: usize,
    /// The loop stopped at a fixed point rather than the iteration cap.
    pub converged: bool,
    /// `A ⊻ x = B ⊻ y` with every entry finite.
    pub synchronized: bool,
}

/// Gossip on the two-node sheaf with stalks `ℝ̄ⁿ`, `ℝ̄ᵐ` and edge maps
/// `A`, `B` into a shared `ℝ̄ᵏ`: alternately
/// `x ← x ∧ A† ⊼ (B ⊻ y)` and `y ← y ∧ B† ⊼ (A ⊻ x)`.
pub fn alternating_method(
    a: &MaxPlusMatrix,
    b: &MaxPlusMatrix,
    x0: &[ExtendedReal],
    y0: &[ExtendedReal],
    max_iterations: usize,
) -> Result<SyncOutcome> {
    if a.rows() != b.rows() {
        return Err(Error::shape("edge maps have different codomains"));
    }
    let meet = |u: &[ExtendedReal], v: &[ExtendedReal]| -> Vec<ExtendedReal> {
        u.iter().zip(v).map(|(&p, &q)| p.min(q)).collect()
    };
    let same = |u: &[ExtendedReal], v: &[ExtendedReal]| u.iter().zip(v).all(|(&p, &q)| p.approx_eq(q));
    let mut x = x0.to_vec();
    let mut y = y0.to_vec();
    a.apply(&x)?;
    b.apply(&y)?;
    let mut iterations = 0;
    let mut quiet = 0;
    let mut converged = false;
    while iterations < max_iterations {
        let changed = if iterations % 2 == 0 {
            let next = meet(&x, &a.dual_apply(&b.apply(&y)?)?);
            let changed = !same(&next, &x);
            x = next;
            changed
        } else {
            let next = meet(&y, &b.dual_apply(&a.apply(&x)?)?);
            let changed = !same(&next, &y);
            y = next;
            changed
        };
        iterations += 1;
        quiet = if changed { 0 } else { quiet + 1 };
        if quiet == 2 {
            converged = true;
            break;
        }
    }
    let ax = a.apply(&x)?;
    let by = b.apply(&y)?;
    let synchronized = ax.iter().zip(&by).all(|(&p, &q)| p.is_finite() && p.approx_eq(q));
    Ok(SyncOutcome {
        x,
        y,
        iterations,
        converged,
        synchronized,
    })
}
