use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Which nodes broadcast at each gossip step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BroadcastSequence {
    /// Every node, every step.
    Synchronous,
    /// One node per step, drawn i.i.d. uniformly from a ChaCha8 stream.
    UniformSingle { seed: u64 },
    /// The listed node sets, cycled forever.
    Periodic(Vec<Vec<usize>>),
    /// The listed node sets once, then nothing.
    Explicit(Vec<Vec<usize>>),
}

/// Whether every node keeps broadcasting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Liveness {
    /// Every node occurs in every window of `period` consecutive steps.
    Live { period: usize },
    /// Every node occurs infinitely often with probability one.
    AlmostSurely,
    /// These nodes never broadcast again after some step.
    Starved(Vec<usize>),
}

impl BroadcastSequence {
    /// Node round-robin `[[0], [1], …, [n−1]]`.
    pub fn round_robin(n: usize) -> Self {
        BroadcastSequence::Periodic((0..n).map(|i| vec![i]).collect())
    }

    pub fn liveness(&self, n: usize) -> Liveness {
        let missing = |sets: &[Vec<usize>]| -> Vec<usize> {
            (0..n).filter(|i| !sets.iter().any(|s| s.contains(i))).collect()
        };
        match self {
            BroadcastSequence::Synchronous => Liveness::Live { period: 1 },
            BroadcastSequence::UniformSingle { .. } if n > 0 => Liveness::AlmostSurely,
            BroadcastSequence::UniformSingle { .. } => Liveness::Live { period: 1 },
            BroadcastSequence::Periodic(sets) => {
                let starved = missing(sets);
                if starved.is_empty() {
                    Liveness::Live { period: sets.len().max(1) }
                } else {
                    Liveness::Starved(starved)
                }
            }
            // A finite list cannot broadcast infinitely often.
            BroadcastSequence::Explicit(_) if n == 0 => Liveness::Live { period: 1 },
            BroadcastSequence::Explicit(_) => Liveness::Starved((0..n).collect()),
        }
    }

    pub fn is_live(&self, n: usize) -> bool {
        !matches!(self.liveness(n), Liveness::Starved(_))
    }

    pub fn is_synchronous(&self) -> bool {
        matches!(self, BroadcastSequence::Synchronous)
    }

    pub fn cursor(&self, n: usize) -> ScheduleCursor {
        let rng = match self {
            BroadcastSequence::UniformSingle { seed } => Some(ChaCha8Rng::seed_from_u64(*seed)),
            _ => None,
        };
        ScheduleCursor {
            schedule: self.clone(),
            n,
            t: 0,
            rng,
        }
    }
}

/// Iterator over `τ(0), τ(1), …`; ends only for explicit lists.
#[derive(Clone, Debug)]
pub struct ScheduleCursor {
    schedule: BroadcastSequence,
    n: usize,
    t: usize,
    rng: Option<ChaCha8Rng>,
}

impl Iterator for ScheduleCursor {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let t = self.t;
        self.t += 1;
        match &self.schedule {
            BroadcastSequence::Synchronous => Some((0..self.n).collect()),
            BroadcastSequence::UniformSingle { .. } => {
                if self.n == 0 {
                    return Some(Vec::new());
                }
                let rng = self.rng.as_mut().expect("seeded at construction");
                Some(vec![rng.gen_range(0..self.n)])
            }
            BroadcastSequence::Periodic(sets) if sets.is_empty() => Some(Vec::new()),
            BroadcastSequence::Periodic(sets) => Some(sets[t % sets.len()].clone()),
            BroadcastSequence::Explicit(sets) => sets.get(t).cloned(),
        }
    }
}
