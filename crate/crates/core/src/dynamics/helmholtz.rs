use crate::error::Result;
use crate::lattice::Elem;
use crate::sheaf::{h1_bruteforce, Cochain1, TarskiSheaf};

/// `(𝔏y)_ij = ⋁_{j′ ∈ N(i)−j} F∧(i ⊴ ij) F∨(i ⊴ ij′)(y_ij′)
///          ∨ ⋁_{i′ ∈ N(j)−i} F∧(j ⊴ ij) F∨(j ⊴ i′j)(y_i′j)`.
pub fn helmholtzian(sheaf: &TarskiSheaf, y: &Cochain1) -> Result<Cochain1> {
    sheaf.check_cochain1(y)?;
    Ok(Cochain1(helmholtzian_unchecked(sheaf, &y.0)))
}

fn helmholtzian_unchecked(sheaf: &TarskiSheaf, y: &[Elem]) -> Vec<Elem> {
    let graph = sheaf.graph();
    graph
        .edges()
        .iter()
        .enumerate()
        .map(|(e, &(i, j))| {
            let stalk = sheaf.edge_stalk(e);
            [i, j].into_iter().fold(stalk.bot(), |acc, end| {
                graph
                    .neighbors(end)
                    .iter()
                    .filter(|&&(_, other)| other != e)
                    .fold(acc, |acc, &(_, other)| {
                        stalk.join(acc, sheaf.lower(end, e, sheaf.upper(end, other, y[other])))
                    })
            })
        })
        .collect()
}

/// Side-by-side comparison of `prefix(𝔏) = {y | 𝔏y ⪯ y}` with the
/// brute-force `H¹` set. Exploratory: nothing is asserted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjectureReport {
    pub prefix_points: Vec<Cochain1>,
    pub h1: Vec<Cochain1>,
    pub only_prefix: Vec<Cochain1>,
    pub only_h1: Vec<Cochain1>,
}

impl ConjectureReport {
    pub fn sets_equal(&self) -> bool {
        self.only_prefix.is_empty() && self.only_h1.is_empty()
    }
}

pub fn conjecture_report(sheaf: &TarskiSheaf) -> Result<ConjectureReport> {
    let h1 = h1_bruteforce(sheaf)?;
    let radix: Vec<usize> = sheaf.edge_stalks().iter().map(|l| l.size()).collect();
    // h1_bruteforce already enforced the size guard on the same space
    let total: usize = radix.iter().product();
    let mut prefix_points = Vec::new();
    for mut k in 0..total {
        let mut y = vec![0; radix.len()];
        for e in (0..radix.len()).rev() {
            y[e] = k % radix[e];
            k /= radix[e];
        }
        let ly = helmholtzian_unchecked(sheaf, &y);
        if (0..y.len()).all(|e| sheaf.edge_stalk(e).leq(ly[e], y[e])) {
            prefix_points.push(Cochain1(y));
        }
    }
    let only_prefix = prefix_points.iter().filter(|y| h1.binary_search(y).is_err()).cloned().collect();
    let only_h1 = h1.iter().filter(|y| prefix_points.binary_search(y).is_err()).cloned().collect();
    Ok(ConjectureReport {
        prefix_points,
        h1,
        only_prefix,
        only_h1,
    })
}
