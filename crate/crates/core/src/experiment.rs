//! Gossip on random Kripke sheaves over random geometric graphs: one agent
//! per node, i.i.d. relations, random initial cochains, one energy trace per
//! trial.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dynamics::{gossip, BroadcastSequence, EdgeMetric, GossipConfig, GossipRun, TraceRow};
use crate::error::{Error, Result};
use crate::exec::{map_jobs, Exec};
use crate::semantics::{kripke_sheaf, KripkeModel};
use crate::sheaf::{Cochain0, Graph, TarskiSheaf};

/// How each trial picks broadcasting nodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScheduleKind {
    Synchronous,
    /// One uniform node per step; trial `k` uses stream seed `seed + k`.
    UniformSingle,
    RoundRobin,
    /// The same sequence for every trial.
    Fixed(BroadcastSequence),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub nodes: usize,
    /// Connection radius in the unit square.
    pub radius: f64,
    pub states: usize,
    pub p_diag: f64,
    pub p_off: f64,
    pub schedule: ScheduleKind,
    pub max_steps: usize,
    /// `None` uses the sheaf default (Hamming on powerset stalks).
    pub metric: Option<EdgeMetric>,
    pub trials: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            seed: 0,
            nodes: 40,
            radius: 0.08,
            states: 10,
            p_diag: 0.9,
            p_off: 0.1,
            schedule: ScheduleKind::UniformSingle,
            max_steps: 1_000_000,
            metric: None,
            trials: 10,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, p) in [("p_diag", self.p_diag), ("p_off", self.p_off)] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Spec(format!("{name} = {p} is not a probability")));
            }
        }
        // r = 0 is allowed and gives the edgeless graph
        if !(self.radius >= 0.0 && self.radius.is_finite()) {
            return Err(Error::Spec(format!("radius {} must be finite and non-negative", self.radius)));
        }
        Ok(())
    }
}

/// The shared random instance every trial runs on.
#[derive(Clone, Debug)]
pub struct ExperimentInstance {
    pub graph: Graph,
    pub points: Vec<(f64, f64)>,
    pub model: KripkeModel,
    pub sheaf: TarskiSheaf,
}

#[derive(Clone, Debug)]
pub struct TrialOutcome {
    pub trial: usize,
    pub initial: Cochain0,
    /// The full run, or the partial one when it did not converge.
    pub run: GossipRun,
    pub converged: bool,
    pub final_is_section: bool,
}

impl TrialOutcome {
    pub fn final_energy(&self) -> u64 {
        self.run.trace.last().map_or(0, |r| r.energy)
    }

    pub fn max_firings(&self) -> usize {
        self.run.firings.iter().copied().max().unwrap_or(0)
    }
}

/// Builds the graph, model and Kripke sheaf from `seed`.
pub fn build_instance(config: &ExperimentConfig) -> Result<ExperimentInstance> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let (graph, points) = Graph::random_geometric(config.nodes, config.radius, &mut rng);
    let model = KripkeModel::random(config.states, config.nodes, 1, config.p_diag, config.p_off, &mut rng)?;
    let sheaf = kripke_sheaf(&graph, &model)?;
    Ok(ExperimentInstance {
        graph,
        points,
        model,
        sheaf,
    })
}

/// Uniform random events, one per node, from stream `trial + 1` of `seed`.
pub fn random_initial(config: &ExperimentConfig, trial: usize) -> Cochain0 {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(trial as u64 + 1);
    let full = (1usize << config.states) - 1;
    Cochain0((0..config.nodes).map(|_| rng.gen::<u64>() as usize & full).collect())
}

fn schedule_for(config: &ExperimentConfig, trial: usize) -> BroadcastSequence {
    match &config.schedule {
        ScheduleKind::Synchronous => BroadcastSequence::Synchronous,
        ScheduleKind::UniformSingle => BroadcastSequence::UniformSingle {
            seed: config.seed.wrapping_add(trial as u64),
        },
        ScheduleKind::RoundRobin => BroadcastSequence::round_robin(config.nodes),
        ScheduleKind::Fixed(seq) => seq.clone(),
    }
}

/// Runs every trial on one instance. Non-converged trials are reported with
/// their partial run rather than as an error.
pub fn run_experiment(config: &ExperimentConfig, exec: Exec) -> Result<(ExperimentInstance, Vec<TrialOutcome>)> {
    let instance = build_instance(config)?;
    let gossip_config = GossipConfig {
        max_steps: config.max_steps,
        metric: config.metric,
        record_states: false,
    };
    let outcomes = map_jobs(exec, config.trials, |trial| -> Result<TrialOutcome> {
        let initial = random_initial(config, trial);
        let (run, converged) = match gossip(&instance.sheaf, &initial, &schedule_for(config, trial), &gossip_config) {
            Ok(run) => (run, true),
            Err(Error::NotConverged(run)) => (*run, false),
            Err(e) => return Err(e),
        };
        let final_is_section = instance.sheaf.is_section(&run.final_state)?;
        Ok(TrialOutcome {
            trial,
            initial,
            run,
            converged,
            final_is_section,
        })
    });
    let outcomes = outcomes.into_iter().collect::<Result<Vec<_>>>()?;
    Ok((instance, outcomes))
}

/// CSV with header `trial,t,fired,energy`; fired node ids are `;`-separated.
pub fn write_experiment_csv<W: Write>(mut out: W, outcomes: &[TrialOutcome]) -> std::io::Result<()> {
    writeln!(out, "trial,t,fired,energy")?;
    for o in outcomes {
        for TraceRow { t, fired, energy } in &o.run.trace {
            let fired: Vec<String> = fired.iter().map(usize::to_string).collect();
            writeln!(out, "{},{},{},{}", o.trial, t, fired.join(";"), energy)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(schedule: ScheduleKind) -> ExperimentConfig {
        ExperimentConfig {
            seed: 7,
            nodes: 5,
            radius: 1.5,
            states: 3,
            schedule,
            trials: 4,
            ..ExperimentConfig::default()
        }
    }

    #[test]
    fn complete_graph_converges_within_height_bound() {
        let config = small(ScheduleKind::UniformSingle);
        let (instance, outcomes) = run_experiment(&config, Exec::Sequential).unwrap();
        assert_eq!(instance.graph.edge_count(), 10);
        for o in &outcomes {
            assert!(o.converged && o.final_is_section);
            assert_eq!(o.final_energy(), 0);
        }
        let rr = small(ScheduleKind::RoundRobin);
        for o in run_experiment(&rr, Exec::Sequential).unwrap().1 {
            // each node's value can drop at most |S| times
            assert!(o.max_firings() <= 1 + config.nodes * config.states);
        }
    }

    #[test]
    fn edgeless_graph_has_zero_energy_throughout() {
        let config = ExperimentConfig {
            radius: 0.0,
            ..small(ScheduleKind::Synchronous)
        };
        let (_, outcomes) = run_experiment(&config, Exec::Sequential).unwrap();
        for o in outcomes {
            assert!(o.run.trace.iter().all(|r| r.energy == 0));
        }
    }

    #[test]
    fn seeded_runs_are_deterministic_across_strategies() {
        let config = small(ScheduleKind::UniformSingle);
        let csv = |exec| {
            let mut buf = Vec::new();
            write_experiment_csv(&mut buf, &run_experiment(&config, exec).unwrap().1).unwrap();
            buf
        };
        let a = csv(Exec::Sequential);
        assert_eq!(a, csv(Exec::Parallel));
        assert!(String::from_utf8(a).unwrap().starts_with("trial,t,fired,energy\n0,0,,"));
    }

    #[test]
    fn rejects_bad_parameters() {
        let bad = ExperimentConfig {
            p_off: 1.5,
            ..ExperimentConfig::default()
        };
        assert!(matches!(bad.validate(), Err(Error::Spec(_))));
        let bad = ExperimentConfig {
            radius: f64::NAN,
            ..ExperimentConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn starved_explicit_schedule_reports_partial_run() {
        let config = small(ScheduleKind::Fixed(BroadcastSequence::Explicit(vec![vec![0]])));
        let (_, outcomes) = run_experiment(&config, Exec::Sequential).unwrap();
        assert!(outcomes.iter().all(|o| !o.converged && o.run.steps == 1));
    }
}
