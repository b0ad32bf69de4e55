use std::collections::HashMap;

use super::{bits, BitMatrix, Elem, FiniteLattice, Poset, MAX_POWERSET_GROUND, MAX_TABLE_ELEMENTS};
use crate::error::{Error, Result};

/// Largest ground set accepted by [`FiniteLattice::partitions`] (Bell(7) = 877).
pub const MAX_PARTITION_GROUND: usize = 7;

impl FiniteLattice {
    /// The chain `0 < 1 < … < n-1`.
    pub fn chain(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::NotPartialOrder("empty chain".into()));
        }
        if n > MAX_TABLE_ELEMENTS {
            return Err(Error::too_large("chain", n as u128, MAX_TABLE_ELEMENTS as u128));
        }
        let leq = BitMatrix::from_fn(n, |a, b| a <= b);
        let mut meet = vec![0u32; n * n];
        let mut join = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                meet[a * n + b] = a.min(b) as u32;
                join[a * n + b] = a.max(b) as u32;
            }
        }
        let labels = (0..n).map(|i| i.to_string()).collect();
        Ok(FiniteLattice::from_tables(leq, meet, join, 0, n - 1, labels))
    }

    /// `℘(ground)` ordered by inclusion. Element `a` is the subset with bitmask `a`.
    pub fn powerset<S: Into<String>>(ground: impl IntoIterator<Item = S>) -> Result<Self> {
        let ground: Vec<String> = ground.into_iter().map(Into::into).collect();
        if ground.len() > MAX_POWERSET_GROUND {
            return Err(Error::too_large(
                "powerset ground set",
                ground.len() as u128,
                MAX_POWERSET_GROUND as u128,
            ));
        }
        Ok(FiniteLattice::boolean(ground))
    }

    /// Set partitions of `{1..n}` ordered by refinement (finer is smaller).
    /// Labels list blocks of 1-based members, e.g. `12|34|5`.
    pub fn partitions(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::NotPartialOrder("partitions of the empty set".into()));
        }
        if n > MAX_PARTITION_GROUND {
            return Err(Error::too_large(
                "partition ground set",
                n as u128,
                MAX_PARTITION_GROUND as u128,
            ));
        }
        let parts = restricted_growth_strings(n);
        let index: HashMap<Vec<u8>, Elem> =
            parts.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        let m = parts.len();
        let leq = BitMatrix::from_fn(m, |a, b| refines(&parts[a], &parts[b]));
        let mut meet = vec![0u32; m * m];
        let mut join = vec![0u32; m * m];
        for a in 0..m {
            for b in a..m {
                let mt = index[&common_refinement(&parts[a], &parts[b])] as u32;
                let j = index[&common_coarsening(&parts[a], &parts[b])] as u32;
                meet[a * m + b] = mt;
                meet[b * m + a] = mt;
                join[a * m + b] = j;
                join[b * m + a] = j;
            }
        }
        let bot = index[&(0..n as u8).collect::<Vec<_>>()];
        let top = index[&vec![0u8; n]];
        let labels = parts.iter().map(|p| partition_label(p)).collect();
        Ok(FiniteLattice::from_tables(leq, meet, join, bot, top, labels))
    }

    /// Componentwise product. Element indices are little-endian mixed radix:
    /// the first factor varies fastest.
    pub fn product(factors: &[&FiniteLattice]) -> Result<Self> {
        match factors {
            [] => Err(Error::shape("product of zero factors")),
            [single] => Ok((*single).clone()),
            _ if factors.iter().all(|f| f.powerset_ground().is_some()) => {
                let bits: usize = factors.iter().map(|f| f.powerset_ground().unwrap().len()).sum();
                if bits > MAX_POWERSET_GROUND {
                    return Err(Error::too_large(
                        "product",
                        1u128 << bits,
                        1u128 << MAX_POWERSET_GROUND,
                    ));
                }
                let ground = factors
                    .iter()
                    .enumerate()
                    .flat_map(|(k, f)| {
                        f.powerset_ground().unwrap().iter().map(move |g| format!("{k}:{g}"))
                    })
                    .collect();
                Ok(FiniteLattice::boolean(ground))
            }
            _ => {
                let size = factors
                    .iter()
                    .try_fold(1usize, |acc, f| acc.checked_mul(f.size()))
                    .filter(|&s| s <= MAX_TABLE_ELEMENTS);
                let m = size.ok_or_else(|| {
                    let total: u128 = factors.iter().map(|f| f.size() as u128).product();
                    Error::too_large("product", total, MAX_TABLE_ELEMENTS as u128)
                })?;
                let digits: Vec<Vec<Elem>> = (0..m)
                    .map(|mut idx| {
                        factors
                            .iter()
                            .map(|f| {
                                let d = idx % f.size();
                                idx /= f.size();
                                d
                            })
                            .collect()
                    })
                    .collect();
                let encode = |ds: &mut dyn Iterator<Item = Elem>| -> Elem {
                    let mut stride = 1;
                    let mut idx = 0;
                    for (d, f) in ds.zip(factors) {
                        idx += d * stride;
                        stride *= f.size();
                    }
                    idx
                };
                let leq = BitMatrix::from_fn(m, |a, b| {
                    factors
                        .iter()
                        .enumerate()
                        .all(|(k, f)| f.leq(digits[a][k], digits[b][k]))
                });
                let mut meet = vec![0u32; m * m];
                let mut join = vec![0u32; m * m];
                for a in 0..m {
                    for b in 0..m {
                        let (da, db) = (&digits[a], &digits[b]);
                        meet[a * m + b] = encode(
                            &mut factors.iter().enumerate().map(|(k, f)| f.meet(da[k], db[k])),
                        ) as u32;
                        join[a * m + b] = encode(
                            &mut factors.iter().enumerate().map(|(k, f)| f.join(da[k], db[k])),
                        ) as u32;
                    }
                }
                let bot = encode(&mut factors.iter().map(|f| f.bot()));
                let top = encode(&mut factors.iter().map(|f| f.top()));
                let labels = digits
                    .iter()
                    .map(|ds| {
                        let parts: Vec<String> =
                            ds.iter().zip(factors).map(|(&d, f)| f.label(d)).collect();
                        format!("({})", parts.join(","))
                    })
                    .collect();
                Ok(FiniteLattice::from_tables(leq, meet, join, bot, top, labels))
            }
        }
    }
}

/// Lattice of down-closed subsets of `poset`, ordered by inclusion.
/// Element labels are the member sets, e.g. `{a,b}`.
pub fn downset_lattice(poset: &Poset) -> Result<FiniteLattice> {
    let k = poset.len();
    if k > MAX_POWERSET_GROUND {
        return Err(Error::too_large("poset", k as u128, MAX_POWERSET_GROUND as u128));
    }
    let below: Vec<usize> = (0..k)
        .map(|x| (0..k).filter(|&y| poset.leq(y, x)).fold(0, |acc, y| acc | 1 << y))
        .collect();
    let downsets: Vec<usize> = (0..1usize << k)
        .filter(|&mask| (0..k).all(|x| mask >> x & 1 == 0 || below[x] & !mask == 0))
        .collect();
    let m = downsets.len();
    if m > MAX_TABLE_ELEMENTS {
        return Err(Error::too_large("downset lattice", m as u128, MAX_TABLE_ELEMENTS as u128));
    }
    let index: HashMap<usize, Elem> = downsets.iter().enumerate().map(|(i, &d)| (d, i)).collect();
    let leq = BitMatrix::from_fn(m, |a, b| downsets[a] & !downsets[b] == 0);
    let mut meet = vec![0u32; m * m];
    let mut join = vec![0u32; m * m];
    for a in 0..m {
        for b in 0..m {
            meet[a * m + b] = index[&(downsets[a] & downsets[b])] as u32;
            join[a * m + b] = index[&(downsets[a] | downsets[b])] as u32;
        }
    }
    let labels = downsets
        .iter()
        .map(|&d| {
            let members: Vec<&str> = bits::ones(&[d as u64]).map(|i| poset.label(i)).collect();
            format!("{{{}}}", members.join(","))
        })
        .collect();
    Ok(FiniteLattice::from_tables(
        leq,
        meet,
        join,
        index[&0],
        index[&((1usize << k) - 1)],
        labels,
    ))
}

/// Canonical label of a partition given as a restricted growth string
/// (`rgs[i]` = block of member `i`, blocks numbered by first occurrence).
pub fn partition_label(rgs: &[u8]) -> String {
    let blocks = rgs.iter().copied().max().map_or(0, |b| b as usize + 1);
    let mut out: Vec<String> = vec![String::new(); blocks];
    for (i, &b) in rgs.iter().enumerate() {
        out[b as usize].push_str(&(i + 1).to_string());
    }
    out.join("|")
}

fn restricted_growth_strings(n: usize) -> Vec<Vec<u8>> {
    fn extend(prefix: &mut Vec<u8>, max: u8, n: usize, out: &mut Vec<Vec<u8>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for b in 0..=max + 1 {
            prefix.push(b);
            extend(prefix, max.max(b), n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    let mut prefix = vec![0u8];
    extend(&mut prefix, 0, n, &mut out);
    out
}

fn canonical(labels: impl Iterator<Item = usize>) -> Vec<u8> {
    let mut seen: HashMap<usize, u8> = HashMap::new();
    labels
        .map(|l| {
            let next = seen.len() as u8;
            *seen.entry(l).or_insert(next)
        })
        .collect()
}

fn refines(a: &[u8], b: &[u8]) -> bool {
    let n = a.len();
    (0..n).all(|i| (i + 1..n).all(|j| a[i] != a[j] || b[i] == b[j]))
}

fn common_refinement(a: &[u8], b: &[u8]) -> Vec<u8> {
    canonical(a.iter().zip(b).map(|(&x, &y)| x as usize * 64 + y as usize))
}

fn common_coarsening(a: &[u8], b: &[u8]) -> Vec<u8> {
    let n = a.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for rgs in [a, b] {
        let mut first: HashMap<u8, usize> = HashMap::new();
        for (i, &blk) in rgs.iter().enumerate() {
            let root = *first.entry(blk).or_insert(i);
            let (ra, rb) = (find(&mut parent, root), find(&mut parent, i));
            parent[ra.max(rb)] = ra.min(rb);
        }
    }
    canonical((0..n).map(|i| find(&mut parent, i)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn by_label(l: &FiniteLattice, s: &str) -> Elem {
        l.find_label(s).unwrap_or_else(|| panic!("no element {s}"))
    }

    #[test]
    fn empty_powerset_is_trivial() {
        let l = FiniteLattice::powerset(Vec::<String>::new()).unwrap();
        assert_eq!(l.size(), 1);
        assert_eq!(l.bot(), l.top());
    }

    #[test]
    fn powerset_of_two() {
        let l = FiniteLattice::powerset(["1", "2"]).unwrap();
        let (one, two) = (by_label(&l, "{1}"), by_label(&l, "{2}"));
        assert_eq!(l.label(l.join(one, two)), "{1,2}");
        assert_eq!(l.label(l.meet(one, two)), "{}");
        assert_eq!(by_label(&l, "{2, 1}"), 3);
        assert!(FiniteLattice::powerset((0..21).map(|i| i.to_string())).is_err());
    }

    #[test]
    fn partition_example() {
        let l = FiniteLattice::partitions(5).unwrap();
        assert_eq!(l.size(), 52);
        let p = by_label(&l, "12|34|5");
        let q = by_label(&l, "123|45");
        assert_eq!(l.label(l.meet(p, q)), "12|3|4|5");
        assert_eq!(l.label(l.join(p, q)), "12345");
        l.check_laws().unwrap();
    }

    #[test]
    fn partition_sizes() {
        // Bell numbers, counted independently by the recurrence B(n+1) = Σ C(n,k) B(k).
        let mut bell = vec![1u64];
        for n in 0..7 {
            let mut binom = 1u64;
            let mut next = 0;
            for k in 0..=n {
                next += binom * bell[k];
                binom = binom * (n - k) as u64 / (k + 1) as u64;
            }
            bell.push(next);
        }
        for n in 1..=6 {
            assert_eq!(FiniteLattice::partitions(n).unwrap().size() as u64, bell[n]);
        }
        assert_eq!(FiniteLattice::partitions(1).unwrap().size(), 1);
        assert_eq!(FiniteLattice::partitions(4).unwrap().size(), 15);
        assert!(FiniteLattice::partitions(8).is_err());
    }

    #[test]
    fn products() {
        let c2 = FiniteLattice::chain(2).unwrap();
        let sq = FiniteLattice::product(&[&c2, &c2]).unwrap();
        let boolean_square = FiniteLattice::powerset(["a", "b"]).unwrap();
        assert!(sq.same_shape(&boolean_square));
        sq.check_laws().unwrap();

        let c3 = FiniteLattice::chain(3).unwrap();
        assert!(FiniteLattice::product(&[&c3]).unwrap().same_shape(&c3));

        let p = FiniteLattice::powerset(["r", "s", "t"]).unwrap();
        assert_eq!(FiniteLattice::product(&[&p, &p, &p]).unwrap().size(), 512);

        let mixed = FiniteLattice::product(&[&c3, &p]).unwrap();
        assert_eq!(mixed.size(), 24);
        mixed.check_laws().unwrap();
        assert_eq!(mixed.label(mixed.top()), "(2,{r,s,t})");
    }

    #[test]
    fn product_guard() {
        let c = FiniteLattice::chain(100).unwrap();
        assert!(matches!(
            FiniteLattice::product(&[&c, &c]),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn antichain_downsets_form_boolean_square() {
        let p = Poset::antichain(["a", "b"]);
        let d = downset_lattice(&p).unwrap();
        assert_eq!(d.size(), 4);
        assert!(d.same_shape(&FiniteLattice::powerset(["x", "y"]).unwrap()));
    }
}
