use std::sync::Arc;

use num_rational::Rational64;
use num_traits::{One, Zero};

use super::LatticeSignal;
#[cfg(test)]
use super::ShiftFlavor;
use crate::error::{Error, Result};
use crate::lattice::{Elem, FiniteLattice};

/// Largest lattice for which the dense basis matrices are built.
pub const MAX_BASIS_ELEMENTS: usize = 512;

/// Indicator bases and the change of basis between them. Rows and columns
/// are indexed by position in `order`, a linear extension of the lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisPair {
    pub order: Vec<Elem>,
    /// `b_meet[i][j] = 1` iff `order[i] ⪯ order[j]`; upper unitriangular.
    pub b_meet: Vec<Vec<u8>>,
    /// Transpose of `b_meet`.
    pub b_join: Vec<Vec<u8>>,
    /// The unique `Θ` with `Θ · b_meet = b_join`.
    pub theta: Vec<Vec<Rational64>>,
}

impl BasisPair {
    pub fn size(&self) -> usize {
        self.order.len()
    }

    /// `Θ f` for `f` given in element order; the result is in element order.
    pub fn apply_theta(&self, f: &LatticeSignal<Rational64>) -> Result<LatticeSignal<Rational64>> {
        if f.values().len() != self.size() {
            return Err(Error::shape(format!("signal of length {} for basis of size {}", f.values().len(), self.size())));
        }
        let mut out = vec![Rational64::zero(); self.size()];
        for (i, row) in self.theta.iter().enumerate() {
            out[self.order[i]] = row
                .iter()
                .zip(&self.order)
                .fold(Rational64::zero(), |acc, (t, &x)| acc + t * f.values()[x]);
        }
        LatticeSignal::new(f.lattice().clone(), out)
    }
}

/// `f^{⪯y}_x = 1_{y ⪯ x}`: eigenvector of every `T_x^∧` with eigenvalue `1_{y ⪯ x}`.
pub fn meet_eigenvector<T: Clone + Zero + One>(lattice: &Arc<FiniteLattice>, y: Elem) -> LatticeSignal<T> {
    LatticeSignal::from_fn(lattice.clone(), |x| if lattice.leq(y, x) { T::one() } else { T::zero() })
}

/// `f^{⪰y}_x = 1_{x ⪯ y}`: eigenvector of every `T_x^∨` with eigenvalue `1_{x ⪯ y}`.
pub fn join_eigenvector<T: Clone + Zero + One>(lattice: &Arc<FiniteLattice>, y: Elem) -> LatticeSignal<T> {
    LatticeSignal::from_fn(lattice.clone(), |x| if lattice.leq(x, y) { T::one() } else { T::zero() })
}

/// Builds both 0/1 matrices and solves `Θ = b_join · b_meet⁻¹` exactly.
/// `b_meet` is the zeta matrix of the order, so its inverse is the Möbius
/// matrix and every entry of `Θ` is an integer.
pub fn eigenbasis(lattice: &FiniteLattice) -> Result<BasisPair> {
    let m = lattice.size();
    if m > MAX_BASIS_ELEMENTS {
        return Err(Error::too_large("lattice for basis matrices", m as u64, MAX_BASIS_ELEMENTS as u64));
    }
    let order = lattice.linear_extension();
    let le = |i: usize, j: usize| lattice.leq(order[i], order[j]);
    let b_meet: Vec<Vec<u8>> = (0..m).map(|i| (0..m).map(|j| le(i, j) as u8).collect()).collect();
    let b_join: Vec<Vec<u8>> = (0..m).map(|i| (0..m).map(|j| b_meet[j][i]).collect()).collect();

    // μ(i, i) = 1, μ(i, j) = -Σ_{i ⪯ k ≺ j} μ(i, k); zero unless i ⪯ j, and
    // i ⪯ j forces i ≤ j in a linear extension
    let mut mu = vec![vec![0i64; m]; m];
    for i in 0..m {
        mu[i][i] = 1;
        for j in i + 1..m {
            if le(i, j) {
                mu[i][j] = -(i..j).filter(|&k| le(k, j)).map(|k| mu[i][k]).sum::<i64>();
            }
        }
    }
    // Θ[i][j] = Σ_k b_join[i][k] μ[k][j] = Σ_{k ⪯ i} μ(k, j)
    let theta = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| Rational64::from_integer((0..=i).filter(|&k| le(k, i)).map(|k| mu[k][j]).sum()))
                .collect()
        })
        .collect();
    Ok(BasisPair {
        order,
        b_meet,
        b_join,
        theta,
    })
}

/// Whether `Θ ∘ T_x^∧ = T_x^∨ ∘ Θ` for every `x`, compared as exact matrices.
/// This holds only for the one-element lattice.
pub fn theta_intertwines(lattice: &FiniteLattice) -> Result<bool> {
    let basis = eigenbasis(lattice)?;
    let m = basis.size();
    let mut pos = vec![0; m];
    for (k, &x) in basis.order.iter().enumerate() {
        pos[x] = k;
    }
    for x in lattice.elements() {
        // T as position maps: (T f)[a] = f[s(a)]
        let meet_pos: Vec<usize> = basis.order.iter().map(|&y| pos[lattice.meet(y, x)]).collect();
        let join_pos: Vec<usize> = basis.order.iter().map(|&y| pos[lattice.join(y, x)]).collect();
        for a in 0..m {
            for b in 0..m {
                // (Θ T^∧)[a][b] = Σ_{c : s∧(c) = b} Θ[a][c];  (T^∨ Θ)[a][b] = Θ[s∨(a)][b]
                let left: Rational64 = (0..m).filter(|&c| meet_pos[c] == b).map(|c| basis.theta[a][c]).sum();
                if left != basis.theta[join_pos[a]][b] {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::corpus::{five_element_example, small_lattices};

    fn q(n: i64) -> Rational64 {
        Rational64::from_integer(n)
    }

    #[test]
    fn five_element_matrix() {
        let basis = eigenbasis(&five_element_example()).unwrap();
        assert_eq!(basis.order, vec![0, 1, 2, 3, 4]);
        let expected: Vec<Vec<u8>> = vec![
            vec![1, 1, 1, 1, 1],
            vec![0, 1, 1, 1, 1],
            vec![0, 0, 1, 0, 1],
            vec![0, 0, 0, 1, 1],
            vec![0, 0, 0, 0, 1],
        ];
        assert_eq!(basis.b_meet, expected);
        // θ(f) = (f0 − fz, f0 − fx − fy + f1, f0 − fy, f0 − fx, f0)
        let theta: Vec<Vec<i64>> = vec![
            vec![1, -1, 0, 0, 0],
            vec![1, 0, -1, -1, 1],
            vec![1, 0, 0, -1, 0],
            vec![1, 0, -1, 0, 0],
            vec![1, 0, 0, 0, 0],
        ];
        let theta: Vec<Vec<Rational64>> = theta.into_iter().map(|r| r.into_iter().map(q).collect()).collect();
        assert_eq!(basis.theta, theta);
    }

    #[test]
    fn theta_solves_change_of_basis() {
        for (name, l) in small_lattices() {
            let basis = eigenbasis(&l).unwrap();
            let m = basis.size();
            for i in 0..m {
                for j in 0..m {
                    let prod: Rational64 = (0..m).map(|k| basis.theta[i][k] * q(basis.b_meet[k][j] as i64)).sum();
                    assert_eq!(prod, q(basis.b_join[i][j] as i64), "{name}");
                }
            }
        }
    }

    #[test]
    fn eigen_relations() {
        for (name, l) in small_lattices() {
            let l = Arc::new(l);
            for y in l.elements() {
                let fm: LatticeSignal<Rational64> = meet_eigenvector(&l, y);
                let fj: LatticeSignal<Rational64> = join_eigenvector(&l, y);
                for x in l.elements() {
                    let lm = if l.leq(y, x) { q(1) } else { q(0) };
                    let lj = if l.leq(x, y) { q(1) } else { q(0) };
                    let scaled_m: Vec<Rational64> = fm.values().iter().map(|v| v * lm).collect();
                    let scaled_j: Vec<Rational64> = fj.values().iter().map(|v| v * lj).collect();
                    assert_eq!(fm.shift(x, ShiftFlavor::Meet).unwrap().values(), &scaled_m[..], "{name}");
                    assert_eq!(fj.shift(x, ShiftFlavor::Join).unwrap().values(), &scaled_j[..], "{name}");
                }
            }
        }
    }

    #[test]
    fn chain_basis_is_upper_triangular_ones() {
        let basis = eigenbasis(&FiniteLattice::chain(4).unwrap()).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(basis.b_meet[i][j], (i <= j) as u8);
            }
        }
    }

    #[test]
    fn intertwining_only_for_trivial_lattice() {
        assert!(theta_intertwines(&FiniteLattice::chain(1).unwrap()).unwrap());
        assert!(!theta_intertwines(&FiniteLattice::chain(2).unwrap()).unwrap());
        for (name, l) in small_lattices() {
            assert_eq!(theta_intertwines(&l).unwrap(), l.size() == 1, "{name}");
        }
    }
}
