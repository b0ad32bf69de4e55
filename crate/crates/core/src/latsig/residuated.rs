use crate::error::{Error, Result};
use crate::galois::residuated::Residuated;
use crate::lattice::FiniteLattice;

fn check_len(lattice: &FiniteLattice, what: &str, len: usize) -> Result<()> {
    if len != lattice.size() {
        return Err(Error::shape(format!("{what} has {len} values for a {}-element lattice", lattice.size())));
    }
    Ok(())
}

/// `(h ⊛ f)(x) = ⋁_y h(y) ⋆ f(x ∧ y)` for signals on `lattice` with values in `alg`.
pub fn residuated_convolve<R: Residuated>(
    lattice: &FiniteLattice,
    alg: &R,
    h: &[R::Value],
    f: &[R::Value],
) -> Result<Vec<R::Value>> {
    check_len(lattice, "filter", h.len())?;
    check_len(lattice, "signal", f.len())?;
    Ok(lattice
        .elements()
        .map(|x| alg.join_all(lattice.elements().map(|y| alg.star(&h[y], &f[lattice.meet(x, y)]))))
        .collect())
}

/// Right adjoint of `h ↦ h ⊛ f`: `(g ⊛′ f)(y) = ⋀_x [f(x ∧ y), g(x)]`, the
/// greatest filter `h` with `h ⊛ f ⪯ g`.
pub fn residuated_convolve_adjoint<R: Residuated>(
    lattice: &FiniteLattice,
    alg: &R,
    g: &[R::Value],
    f: &[R::Value],
) -> Result<Vec<R::Value>> {
    check_len(lattice, "target", g.len())?;
    check_len(lattice, "signal", f.len())?;
    Ok(lattice
        .elements()
        .map(|y| alg.meet_all(lattice.elements().map(|x| alg.residual(&f[lattice.meet(x, y)], &g[x]))))
        .collect())
}

#[cfg(test)]
mod tests {
    use num_rational::Rational64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::galois::maxplus::ExtendedReal;
    use crate::galois::residuated::{BooleanAlgebra, MaxPlus, TNorm, TNormKind};
    use crate::lattice::corpus::small_lattices;

    fn leq_all<R: Residuated>(alg: &R, a: &[R::Value], b: &[R::Value]) -> bool {
        a.iter().zip(b).all(|(x, y)| alg.leq(x, y))
    }

    #[test]
    fn boolean_is_set_convolution() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for (_, l) in small_lattices() {
            let f: Vec<bool> = l.elements().map(|_| rng.gen_bool(0.5)).collect();
            let top_only: Vec<bool> = l.elements().map(|y| y == l.top()).collect();
            assert_eq!(residuated_convolve(&l, &BooleanAlgebra, &top_only, &f).unwrap(), f);
            let h: Vec<bool> = l.elements().map(|_| rng.gen_bool(0.5)).collect();
            let direct: Vec<bool> = l
                .elements()
                .map(|x| l.elements().any(|y| h[y] && f[l.meet(x, y)]))
                .collect();
            assert_eq!(residuated_convolve(&l, &BooleanAlgebra, &h, &f).unwrap(), direct);
        }
    }

    #[test]
    fn maxplus_on_chain() {
        let n = 6;
        let l = FiniteLattice::chain(n).unwrap();
        let h: Vec<ExtendedReal> = [0.0, -1.0, 2.5, f64::NEG_INFINITY, 1.0, -3.0].map(ExtendedReal::from).to_vec();
        let f: Vec<ExtendedReal> = [1.0, 4.0, -2.0, 0.5, f64::NEG_INFINITY, 2.0].map(ExtendedReal::from).to_vec();
        let out = residuated_convolve(&l, &MaxPlus, &h, &f).unwrap();
        for x in 0..n {
            let direct = (0..n)
                .map(|y| h[y].to_f64() + f[x.min(y)].to_f64())
                .fold(f64::NEG_INFINITY, f64::max);
            assert_eq!(out[x].to_f64(), direct, "x={x}");
        }
    }

    #[test]
    fn adjunction_on_samples() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let alg = TNorm(TNormKind::Lukasiewicz);
        for (name, l) in small_lattices() {
            for _ in 0..20 {
                let mut sample = || -> Vec<Rational64> {
                    l.elements().map(|_| Rational64::new(rng.gen_range(0..=4), 4)).collect()
                };
                let (h, f, g) = (sample(), sample(), sample());
                let conv = residuated_convolve(&l, &alg, &h, &f).unwrap();
                let adj = residuated_convolve_adjoint(&l, &alg, &g, &f).unwrap();
                assert_eq!(leq_all(&alg, &conv, &g), leq_all(&alg, &h, &adj), "{name}");
                // the adjoint itself is the largest admissible filter
                let back = residuated_convolve(&l, &alg, &adj, &f).unwrap();
                assert!(leq_all(&alg, &back, &g), "{name}");
            }
        }
    }

    #[test]
    fn length_mismatch() {
        let l = FiniteLattice::chain(3).unwrap();
        assert!(residuated_convolve(&l, &BooleanAlgebra, &[true], &[true, false, true]).is_err());
    }
}
