use std::io::Write;

use super::energy::{EdgeMetric, EnergyMeter};
use super::schedule::BroadcastSequence;
use crate::error::{Error, Result};
use crate::lattice::Elem;
use crate::sheaf::{Cochain0, TarskiSheaf};

#[derive(Clone, Debug)]
pub struct GossipConfig {
    /// Backstop for schedules that never quiesce.
    pub max_steps: usize,
    /// `None` picks [`EdgeMetric::default_for`] the sheaf.
    pub metric: Option<EdgeMetric>,
    /// Keep every intermediate state in [`GossipRun::trajectory`].
    pub record_states: bool,
}

impl Default for GossipConfig {
    fn default() -> Self {
        GossipConfig {
            max_steps: 1_000_000,
            metric: None,
            record_states: true,
        }
    }
}

/// State after step `t` (row 0 is the initial state).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceRow {
    pub t: usize,
    /// Broadcasting nodes; left empty for the synchronous schedule.
    pub fired: Vec<usize>,
    pub energy: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GossipRun {
    pub steps: usize,
    /// Stopped because every node had broadcast its current value.
    pub converged: bool,
    pub final_state: Cochain0,
    pub trace: Vec<TraceRow>,
    /// `x[0], x[1], …` when states are recorded, otherwise empty.
    pub trajectory: Vec<Cochain0>,
    /// Broadcasts per node.
    pub firings: Vec<usize>,
}

/// `(L_τ x)_i = ⋀_{j ∈ N(i) ∩ τ} F∨(i ⊴ ij) F∧(j ⊴ ij)(x_j)`, top when no
/// neighbor of `i` broadcasts.
pub fn time_varying_laplacian(sheaf: &TarskiSheaf, x: &Cochain0, fired: &[usize]) -> Result<Cochain0> {
    sheaf.check_cochain0(x)?;
    let mask = fired_mask(sheaf, fired)?;
    Ok(Cochain0(
        (0..x.len())
            .map(|i| {
                let stalk = sheaf.node_stalk(i);
                sheaf
                    .graph()
                    .neighbors(i)
                    .iter()
                    .filter(|&&(j, _)| mask[j])
                    .fold(stalk.top(), |acc, &(j, e)| stalk.meet(acc, sheaf.upper(i, e, sheaf.lower(j, e, x.0[j]))))
            })
            .collect(),
    ))
}

fn fired_mask(sheaf: &TarskiSheaf, fired: &[usize]) -> Result<Vec<bool>> {
    let n = sheaf.graph().node_count();
    let mut mask = vec![false; n];
    for &j in fired {
        if j >= n {
            return Err(Error::shape(format!("schedule fires node {j} of {n}")));
        }
        mask[j] = true;
    }
    Ok(mask)
}

/// Asynchronous heat flow `x[t+1] = L_{τ(t)}(x[t]) ∧ x[t]`.
///
/// Each broadcast pushes the sender's current value to its neighbors, which
/// meet it into their own state. The run stops once every node has broadcast
/// since its value last changed: from then on no schedule can change the
/// state, and the state is a section. Hitting `max_steps` or the end of an
/// explicit schedule first yields [`Error::NotConverged`] with the partial run.
pub fn gossip(
    sheaf: &TarskiSheaf,
    x0: &Cochain0,
    schedule: &BroadcastSequence,
    config: &GossipConfig,
) -> Result<GossipRun> {
    sheaf.check_cochain0(x0)?;
    let graph = sheaf.graph();
    let n = graph.node_count();
    let metric = config.metric.unwrap_or_else(|| EdgeMetric::default_for(sheaf));
    let meter = EnergyMeter::new(sheaf, metric)?;
    let synchronous = schedule.is_synchronous();

    let mut x = x0.clone();
    let mut settled: Vec<bool> = (0..n).map(|i| graph.degree(i) == 0).collect();
    let mut firings = vec![0usize; n];
    let mut trace = vec![TraceRow {
        t: 0,
        fired: Vec::new(),
        energy: meter.energy(sheaf, &x),
    }];
    let mut trajectory = if config.record_states { vec![x.clone()] } else { Vec::new() };
    let mut cursor = schedule.cursor(n);
    let mut converged = settled.iter().all(|&s| s);
    let mut steps = 0;

    while !converged && steps < config.max_steps {
        let Some(fired) = cursor.next() else { break };
        let mask = fired_mask(sheaf, &fired)?;
        let mut next = x.0.clone();
        for (j, _) in mask.iter().enumerate().filter(|(_, &m)| m) {
            for &(i, e) in graph.neighbors(j) {
                let pulled: Elem = sheaf.upper(i, e, sheaf.lower(j, e, x.0[j]));
                next[i] = sheaf.node_stalk(i).meet(next[i], pulled);
            }
        }
        for &j in &fired {
            settled[j] = true;
            firings[j] += 1;
        }
        for i in 0..n {
            if next[i] != x.0[i] {
                settled[i] = false;
            }
        }
        x = Cochain0(next);
        steps += 1;
        trace.push(TraceRow {
            t: steps,
            fired: if synchronous { Vec::new() } else { fired },
            energy: meter.energy(sheaf, &x),
        });
        if config.record_states {
            trajectory.push(x.clone());
        }
        converged = settled.iter().all(|&s| s);
    }

    let run = GossipRun {
        steps,
        converged,
        final_state: x,
        trace,
        trajectory,
        firings,
    };
    if converged {
        Ok(run)
    } else {
        Err(Error::NotConverged(Box::new(run)))
    }
}

/// CSV with header `t,fired,energy`; fired node ids are `;`-separated.
pub fn write_trace_csv<W: Write>(mut out: W, rows: &[TraceRow]) -> std::io::Result<()> {
    writeln!(out, "t,fired,energy")?;
    for row in rows {
        let fired: Vec<String> = row.fired.iter().map(usize::to_string).collect();
        writeln!(out, "{},{},{}", row.t, fired.join(";"), row.energy)?;
    }
    Ok(())
}
