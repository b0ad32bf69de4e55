use std::collections::HashSet;

use super::{Cochain0, Cochain1, TarskiSheaf};
use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::lattice::Elem;

/// Largest cochain space the brute-force oracles will walk.
pub const MAX_ENUMERATION: u128 = 1_000_000;
/// Largest section set checked pairwise by [`check_quasi_sublattice`].
const MAX_PAIRWISE: usize = 4096;

/// `∏ sizes`, saturating.
pub fn cochain_space_size(sizes: impl IntoIterator<Item = usize>) -> u128 {
    sizes.into_iter().fold(1u128, |acc, s| acc.saturating_mul(s as u128))
}

/// Mixed-radix decoding with the last position varying fastest, so index
/// order is lexicographic order.
fn decode(mut index: u64, radix: &[usize]) -> Vec<Elem> {
    let mut out = vec![0; radix.len()];
    for (slot, &r) in out.iter_mut().zip(radix).rev() {
        *slot = (index % r as u64) as Elem;
        index /= r as u64;
    }
    out
}

fn guarded_total(what: &'static str, radix: &[usize]) -> Result<u64> {
    let total = cochain_space_size(radix.iter().copied());
    if total > MAX_ENUMERATION {
        return Err(Error::too_large(what, total, MAX_ENUMERATION));
    }
    Ok(total as u64)
}

/// Every global section, in lexicographic order.
pub fn sections_bruteforce(sheaf: &TarskiSheaf) -> Result<Vec<Cochain0>> {
    sections_bruteforce_with(sheaf, Exec::default())
}

pub fn sections_bruteforce_with(sheaf: &TarskiSheaf, exec: Exec) -> Result<Vec<Cochain0>> {
    let radix: Vec<usize> = sheaf.node_stalks().iter().map(|l| l.size()).collect();
    let total = guarded_total("0-cochain space", &radix)?;
    Ok(exec::filter_map_range(exec, 0..total, |k| {
        let x = decode(k, &radix);
        sheaf.is_section_unchecked(&x).then_some(Cochain0(x))
    }))
}

/// `{y ∈ C¹ | δ−*(y) = δ+*(y)}`, in lexicographic order.
pub fn h1_bruteforce(sheaf: &TarskiSheaf) -> Result<Vec<Cochain1>> {
    h1_bruteforce_with(sheaf, Exec::default())
}

pub fn h1_bruteforce_with(sheaf: &TarskiSheaf, exec: Exec) -> Result<Vec<Cochain1>> {
    let radix: Vec<usize> = sheaf.edge_stalks().iter().map(|l| l.size()).collect();
    let total = guarded_total("1-cochain space", &radix)?;
    Ok(exec::filter_map_range(exec, 0..total, |k| {
        let y = decode(k, &radix);
        (sheaf.coboundary_adjoint_unchecked(&y, true) == sheaf.coboundary_adjoint_unchecked(&y, false))
            .then_some(Cochain1(y))
    }))
}

/// Whether every subset of `sections` has a least upper bound inside
/// `sections` under the componentwise order. For a finite set this means a
/// least element plus a least upper bound for every pair.
pub fn check_quasi_sublattice(sheaf: &TarskiSheaf, sections: &[Cochain0]) -> Result<bool> {
    if sections.len() > MAX_PAIRWISE {
        return Err(Error::too_large("section set", sections.len() as u64, MAX_PAIRWISE as u64));
    }
    let members: HashSet<&Cochain0> = sections.iter().collect();
    let least_of = |candidates: &[&Cochain0]| -> bool {
        candidates
            .iter()
            .any(|c| candidates.iter().all(|d| sheaf.cochain_leq(c, d)))
    };
    let all: Vec<&Cochain0> = sections.iter().collect();
    if !least_of(&all) {
        return Ok(false);
    }
    for (k, a) in sections.iter().enumerate() {
        for b in &sections[k + 1..] {
            if members.contains(&sheaf.cochain_join(a, b)) {
                continue;
            }
            let uppers: Vec<&Cochain0> = sections
                .iter()
                .filter(|c| sheaf.cochain_leq(a, c) && sheaf.cochain_leq(b, c))
                .collect();
            if !least_of(&uppers) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
