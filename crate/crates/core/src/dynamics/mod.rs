//! The Tarski Laplacian and the dynamics built on it: the closure operator
//! `E`, heat flow, gossip under broadcast schedules, consensus, Dirichlet
//! energy, and the Helmholtzian on 1-cochains.

mod consensus;
mod energy;
mod gossip;
mod helmholtz;
mod schedule;

use crate::error::{Error, Result};
use crate::exec::{self, Exec};
use crate::lattice::Elem;
use crate::sheaf::{cochain_space_size, Cochain0, TarskiSheaf, MAX_ENUMERATION};

pub use consensus::{join_consensus, meet_consensus, ConsensusRun};
pub use energy::{dirichlet_energy, EdgeMetric, EnergyMeter};
pub use gossip::{gossip, time_varying_laplacian, write_trace_csv, GossipConfig, GossipRun, TraceRow};
pub use helmholtz::{conjecture_report, helmholtzian, ConjectureReport};
pub use schedule::{BroadcastSequence, Liveness, ScheduleCursor};

/// `(Lx)_i = ⋀_{j ∈ N(i)} F∨(i ⊴ ij) F∧(j ⊴ ij)(x_j)`; the empty meet is top.
pub fn tarski_laplacian(sheaf: &TarskiSheaf, x: &Cochain0) -> Result<Cochain0> {
    tarski_laplacian_with(sheaf, x, Exec::default())
}

pub fn tarski_laplacian_with(sheaf: &TarskiSheaf, x: &Cochain0, exec: Exec) -> Result<Cochain0> {
    sheaf.check_cochain0(x)?;
    Ok(Cochain0(exec::map_indices(exec, x.len(), |i| laplacian_at(sheaf, &x.0, i))))
}

fn laplacian_at(sheaf: &TarskiSheaf, x: &[Elem], i: usize) -> Elem {
    let stalk = sheaf.node_stalk(i);
    sheaf
        .graph()
        .neighbors(i)
        .iter()
        .fold(stalk.top(), |acc, &(j, e)| stalk.meet(acc, sheaf.upper(i, e, sheaf.lower(j, e, x[j]))))
}

/// `(Ex)_i = ⋀_{j ∈ N(i)} F∨(i ⊴ ij) F∧(i ⊴ ij)(x_i)`, a closure operator on `C⁰`.
pub fn closure_e(sheaf: &TarskiSheaf, x: &Cochain0) -> Result<Cochain0> {
    sheaf.check_cochain0(x)?;
    Ok(Cochain0(
        (0..x.len())
            .map(|i| {
                let stalk = sheaf.node_stalk(i);
                sheaf
                    .graph()
                    .neighbors(i)
                    .iter()
                    .fold(stalk.top(), |acc, &(_, e)| stalk.meet(acc, sheaf.upper(i, e, sheaf.lower(i, e, x.0[i]))))
            })
            .collect(),
    ))
}

/// `L(x) ∧ x`.
pub fn heat_step(sheaf: &TarskiSheaf, x: &Cochain0) -> Result<Cochain0> {
    Ok(sheaf.cochain_meet(&tarski_laplacian(sheaf, x)?, x))
}

/// A heat-flow run: `trajectory[0] = x0`, each later state strictly below its
/// predecessor, the last one fixed by `L ∧ id`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeatFlow {
    pub trajectory: Vec<Cochain0>,
}

impl HeatFlow {
    pub fn final_state(&self) -> &Cochain0 {
        self.trajectory.last().expect("trajectory starts with x0")
    }

    /// Number of strict decreases.
    pub fn steps(&self) -> usize {
        self.trajectory.len() - 1
    }
}

/// Iterates `x ← L(x) ∧ x` to its fixpoint, a global section.
pub fn heat_flow(sheaf: &TarskiSheaf, x0: &Cochain0) -> Result<HeatFlow> {
    sheaf.check_cochain0(x0)?;
    let mut trajectory = vec![x0.clone()];
    loop {
        let x = trajectory.last().unwrap();
        let next = heat_step(sheaf, x)?;
        if &next == x {
            return Ok(HeatFlow { trajectory });
        }
        trajectory.push(next);
    }
}

/// `1 + Σ_i height(F(i))`, the bound on heat-flow trajectory length.
pub fn heat_flow_bound(sheaf: &TarskiSheaf) -> usize {
    1 + sheaf.node_stalks().iter().map(|l| l.height()).sum::<usize>()
}

/// Result of comparing `suffix(L)`, `H⁰` and `fixed(L ∧ id)` over all of `C⁰`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HodgeTarski {
    pub sections: usize,
    pub suffix_points: usize,
    pub fixed_points: usize,
    /// First cochain (lexicographically) in some but not all three sets.
    pub witness: Option<Cochain0>,
}

impl HodgeTarski {
    pub fn holds(&self) -> bool {
        self.witness.is_none()
    }
}

pub fn check_hodge_tarski(sheaf: &TarskiSheaf) -> Result<HodgeTarski> {
    check_hodge_tarski_with(sheaf, Exec::default())
}

pub fn check_hodge_tarski_with(sheaf: &TarskiSheaf, exec: Exec) -> Result<HodgeTarski> {
    const SECTION: u8 = 1;
    const SUFFIX: u8 = 2;
    const FIXED: u8 = 4;
    let radix: Vec<usize> = sheaf.node_stalks().iter().map(|l| l.size()).collect();
    let total = cochain_space_size(radix.iter().copied());
    if total > MAX_ENUMERATION {
        return Err(Error::too_large("0-cochain space", total, MAX_ENUMERATION));
    }
    let n = radix.len();
    let flagged = exec::filter_map_range(exec, 0..total as u64, |mut k| {
        let mut x = vec![0; n];
        for i in (0..n).rev() {
            x[i] = (k % radix[i] as u64) as Elem;
            k /= radix[i] as u64;
        }
        let lx: Vec<Elem> = (0..n).map(|i| laplacian_at(sheaf, &x, i)).collect();
        let mut flags = 0;
        if sheaf.is_section_unchecked(&x) {
            flags |= SECTION;
        }
        if (0..n).all(|i| sheaf.node_stalk(i).leq(x[i], lx[i])) {
            flags |= SUFFIX;
        }
        if (0..n).all(|i| sheaf.node_stalk(i).meet(lx[i], x[i]) == x[i]) {
            flags |= FIXED;
        }
        (flags != 0).then_some((x, flags))
    });
    let count = |bit: u8| flagged.iter().filter(|(_, f)| f & bit != 0).count();
    Ok(HodgeTarski {
        sections: count(SECTION),
        suffix_points: count(SUFFIX),
        fixed_points: count(FIXED),
        witness: flagged
            .iter()
            .find(|(_, f)| *f != SECTION | SUFFIX | FIXED)
            .map(|(x, _)| Cochain0(x.clone())),
    })
}
