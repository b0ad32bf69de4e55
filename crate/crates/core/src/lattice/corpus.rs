use super::FiniteLattice;

fn from_covers(labels: &[&str], covers: &[(usize, usize)]) -> FiniteLattice {
    FiniteLattice::from_order_pairs(labels.iter().map(|s| s.to_string()).collect(), covers)
        .expect("corpus lattice is well formed")
}

/// `0̂ < z < x, y < 1̂` with `x`, `y` incomparable, listed in that order.
pub fn five_element_example() -> FiniteLattice {
    from_covers(&["0", "z", "x", "y", "1"], &[(0, 1), (1, 2), (1, 3), (2, 4), (3, 4)])
}

/// `0 < a, b, c < 1`.
pub fn m3() -> FiniteLattice {
    from_covers(&["0", "a", "b", "c", "1"], &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)])
}

/// `0 < a < b < 1`, `0 < c < 1`.
pub fn n5() -> FiniteLattice {
    from_covers(&["0", "a", "b", "c", "1"], &[(0, 1), (1, 2), (2, 4), (0, 3), (3, 4)])
}

/// Named lattices with at most eight elements, covering chains, boolean
/// algebras, products, and the non-distributive `M3`, `N5`.
pub fn small_lattices() -> Vec<(String, FiniteLattice)> {
    let mut out: Vec<(String, FiniteLattice)> = (1..=8)
        .map(|n| (format!("chain{n}"), FiniteLattice::chain(n).expect("small chain")))
        .collect();
    for n in 1..=3 {
        let ground: Vec<String> = (0..n).map(|i| format!("a{i}")).collect();
        out.push((format!("powerset{n}"), FiniteLattice::powerset(ground).expect("small powerset")));
    }
    let c2 = FiniteLattice::chain(2).expect("chain");
    let c3 = FiniteLattice::chain(3).expect("chain");
    let c4 = FiniteLattice::chain(4).expect("chain");
    out.push(("chain2xchain3".into(), FiniteLattice::product(&[&c2, &c3]).expect("product")));
    out.push(("chain2xchain4".into(), FiniteLattice::product(&[&c2, &c4]).expect("product")));
    out.push(("partitions3".into(), FiniteLattice::partitions(3).expect("partitions")));
    out.push(("m3".into(), m3()));
    out.push(("n5".into(), n5()));
    out.push(("five_element_example".into(), five_element_example()));
    out.push((
        "m4".into(),
        from_covers(
            &["0", "a", "b", "c", "d", "1"],
            &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 5), (2, 5), (3, 5), (4, 5)],
        ),
    ));
    out.push((
        "hexagon".into(),
        from_covers(&["0", "a", "b", "c", "d", "1"], &[(0, 1), (1, 2), (2, 5), (0, 3), (3, 4), (4, 5)]),
    ));
    out.push((
        "stacked_diamonds".into(),
        from_covers(
            &["0", "a", "b", "m", "c", "d", "1"],
            &[(0, 1), (0, 2), (1, 3), (2, 3), (3, 4), (3, 5), (4, 6), (5, 6)],
        ),
    ));
    out.push((
        "m3_with_top".into(),
        from_covers(
            &["0", "a", "b", "c", "m", "1"],
            &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4), (4, 5)],
        ),
    ));
    out
}
