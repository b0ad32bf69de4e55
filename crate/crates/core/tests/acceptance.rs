//! End-to-end acceptance checks. Runs without the libtest harness so that
//! every criterion prints exactly one pass/fail line.

mod common;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_rational::Rational64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tarski::dynamics::{
    check_hodge_tarski, conjecture_report, gossip, heat_flow, heat_flow_bound, helmholtzian, meet_consensus,
    BroadcastSequence, GossipConfig,
};
use tarski::experiment::{run_experiment, ExperimentConfig, ScheduleKind};
use tarski::galois::maxplus::{alternating_method, ExtendedReal, MaxPlusMatrix};
use tarski::galois::{adjoint_of, closure_of};
use tarski::lattice::corpus::{five_element_example, small_lattices};
use tarski::lattice::fixed_point_sets;
use tarski::latsig::{eigenbasis, theta_intertwines, LatticeSignal, ShiftFlavor};
use tarski::semantics::{kripke_laplacian, kripke_sheaf, KripkeModel};
use tarski::sheaf::{sections_bruteforce, Cochain1, Graph, TarskiSheaf};
use tarski::{Elem, Exec};

use common::*;

fn hodge_tarski_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for case in 0..120 {
        let n = rng.gen_range(1..=4);
        let states = rng.gen_range(1..=3);
        let graph = random_graph(n, 0.6, &mut rng);
        let model = KripkeModel::random(states, n, 1, 0.8, 0.3, &mut rng).unwrap();
        let sheaf = kripke_sheaf(&graph, &model).unwrap();
        let space = all_cochains(&vec![1 << states; n]);
        assert!(space.len() <= 4096);

        let sections: Vec<Vec<Elem>> = space.iter().filter(|x| is_section_oracle(&sheaf, x)).cloned().collect();
        let suffix: Vec<Vec<Elem>> = space
            .iter()
            .filter(|x| {
                let lx = kripke_laplacian_oracle(&graph, &model, x);
                x.iter().zip(&lx).all(|(&a, &b)| a & !b == 0)
            })
            .cloned()
            .collect();
        let fixed: Vec<Vec<Elem>> = space
            .iter()
            .filter(|x| {
                let lx = kripke_laplacian_oracle(&graph, &model, x);
                lx.iter().zip(x.iter()).map(|(&b, &a)| a & b).eq(x.iter().copied())
            })
            .cloned()
            .collect();
        assert_eq!(sections, suffix, "case {case}: sections differ from suffix points");
        assert_eq!(sections, fixed, "case {case}: sections differ from fixed points");

        let library: Vec<Vec<Elem>> = sections_bruteforce(&sheaf).unwrap().into_iter().map(|c| c.0).collect();
        assert_eq!(library, sections, "case {case}: library sections");
        let report = check_hodge_tarski(&sheaf).unwrap();
        assert!(report.holds(), "case {case}: {report:?}");
        assert_eq!(report.sections, sections.len());
        for x in space.iter().step_by(7) {
            assert_eq!(
                kripke_laplacian(&graph, &model, x).unwrap(),
                kripke_laplacian_oracle(&graph, &model, x),
                "case {case}"
            );
        }
    }
}

fn worked_example() {
    let model = KripkeModel::alice_bob_eve();
    let path = Graph::path(3);
    let (r, s, t, all) = (1, 2, 4, 7);
    for (input, expected) in [
        ([0, 0, 0], [0, 0, 0]),
        ([r, s, t], [0, s, 0]),
        ([s, s, s], [0, s, 0]),
        ([all, all, all], [all, all, all]),
    ] {
        assert_eq!(kripke_laplacian(&path, &model, &input).unwrap(), expected, "{input:?}");
    }
    // rows e = {r} and e = {s}: (K_0∃, K_0∀, K_1∃, K_1∀, K_2∃, K_2∀)
    for (e, row) in [(r, [3, 0, 5, 0, 5, 0]), (s, [7, 0, 2, 2, 3, 0])] {
        for agent in 0..3 {
            assert_eq!(model.exists(agent, e).unwrap(), row[2 * agent], "K_{agent}∃ of {e}");
            assert_eq!(model.forall(agent, e).unwrap(), row[2 * agent + 1], "K_{agent}∀ of {e}");
        }
    }
    assert_eq!(model.forall(0, r | s).unwrap(), r);

    let rows = tarski::semantics::reference::galois_rows(&model).unwrap();
    for row in &rows {
        assert_eq!(row.exists, exists_oracle(&model, row.agent, row.event));
        assert_eq!(row.forall, forall_oracle(&model, row.agent, row.event));
    }
    let divergent: Vec<String> = rows
        .iter()
        .filter(|row| !row.agrees())
        .map(|row| format!("{}/agent {}", model.event_label(row.event), row.agent))
        .collect();
    let lap_divergent: Vec<usize> = tarski::semantics::reference::laplacian_rows(&model)
        .unwrap()
        .iter()
        .enumerate()
        .filter(|(_, row)| !row.agrees())
        .map(|(k, _)| k + 1)
        .collect();
    println!("    reference table rows recomputed differently: {}", divergent.join(", "));
    println!("    reference Laplacian rows recomputed differently: {lap_divergent:?}");
}

fn gossip_experiment() {
    let full = ExperimentConfig {
        seed: 2024,
        ..ExperimentConfig::default()
    };
    assert_eq!((full.nodes, full.radius, full.states), (40, 0.08, 10));
    assert_eq!((full.p_diag, full.p_off, full.trials), (0.9, 0.1, 10));
    let (instance, outcomes) = run_experiment(&full, Exec::default()).unwrap();
    assert_eq!(outcomes.len(), 10);
    for o in &outcomes {
        assert!(o.converged, "trial {} did not converge", o.trial);
        assert_eq!(o.final_energy(), 0, "trial {}", o.trial);
        assert!(o.final_is_section);
        assert!(is_section_oracle(&instance.sheaf, &o.run.final_state.0));
    }
    let steps: Vec<usize> = outcomes.iter().map(|o| o.run.steps).collect();
    println!(
        "    n=40: {} edges, steps per trial {steps:?}",
        instance.graph.edge_count()
    );

    let small = ExperimentConfig {
        seed: 8,
        nodes: 8,
        radius: 0.5,
        states: 4,
        schedule: ScheduleKind::RoundRobin,
        ..ExperimentConfig::default()
    };
    let bound = 1 + small.nodes * small.states;
    let (_, outcomes) = run_experiment(&small, Exec::default()).unwrap();
    for o in &outcomes {
        assert!(o.converged && o.final_is_section && o.final_energy() == 0);
        assert!(o.max_firings() <= bound, "trial {}: {} firings > {bound}", o.trial, o.max_firings());
    }
    let worst = outcomes.iter().map(|o| o.max_firings()).max().unwrap();
    println!("    n=8 round robin: at most {worst} firings per node (bound {bound})");
}

fn heat_contract() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut sheaves: Vec<TarskiSheaf> = (0..100).map(|_| random_sheaf(4, 4, &mut rng)).collect();
    for _ in 0..50 {
        let n = rng.gen_range(1..=5);
        let graph = random_graph(n, 0.5, &mut rng);
        let model = KripkeModel::random(rng.gen_range(1..=4), n, 1, 0.8, 0.3, &mut rng).unwrap();
        sheaves.push(kripke_sheaf(&graph, &model).unwrap());
    }
    let config = GossipConfig {
        record_states: true,
        ..GossipConfig::default()
    };
    for (k, sheaf) in sheaves.iter().enumerate() {
        for _ in 0..5 {
            let x0 = random_cochain(sheaf, &mut rng);
            let flow = heat_flow(sheaf, &x0).unwrap();
            for w in flow.trajectory.windows(2) {
                assert!(sheaf.cochain_leq(&w[1], &w[0]) && w[1] != w[0], "sheaf {k}: not strictly decreasing");
            }
            assert!(flow.trajectory.len() <= heat_flow_bound(sheaf), "sheaf {k}: trajectory too long");
            assert!(is_section_oracle(sheaf, &flow.final_state().0), "sheaf {k}: final state");

            let run = gossip(sheaf, &x0, &BroadcastSequence::Synchronous, &config).unwrap();
            let graph_has_edges = sheaf.graph().edge_count() > 0;
            let expected_len = flow.trajectory.len() + usize::from(graph_has_edges);
            assert_eq!(run.trajectory.len(), expected_len, "sheaf {k}");
            assert_eq!(&run.trajectory[..flow.trajectory.len()], &flow.trajectory[..], "sheaf {k}");
            assert_eq!(run.trajectory.last(), flow.trajectory.last());
        }
    }
}

fn galois_laws() {
    let lattices = small_lattices();
    for (name, l) in &lattices {
        assert!(l.size() <= 8, "{name}");
    }
    let lattices: Vec<Arc<_>> = lattices.into_iter().map(|(_, l)| Arc::new(l)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for case in 0..500 {
        let src = lattices.choose(&mut rng).unwrap().clone();
        let tgt = lattices.choose(&mut rng).unwrap().clone();
        let f = random_join_map(&src, &tgt, &mut rng);
        let conn = adjoint_of(&f).unwrap();
        let g = conn.upper();
        assert_eq!(g.image(), &upper_adjoint_oracle(&f)[..], "case {case}");
        for x in src.elements() {
            for y in tgt.elements() {
                assert_eq!(tgt.leq(f.apply(x), y), src.leq(x, g.apply(y)), "case {case}: ({x}, {y})");
            }
        }
        for x in src.elements() {
            assert_eq!(f.apply(g.apply(f.apply(x))), f.apply(x), "case {case}");
        }
        for y in tgt.elements() {
            assert_eq!(g.apply(f.apply(g.apply(y))), g.apply(y), "case {case}");
        }
        let e = closure_of(&conn);
        for x in src.elements() {
            assert!(src.leq(x, e.apply(x)), "case {case}: not inflationary");
            assert_eq!(e.apply(e.apply(x)), e.apply(x), "case {case}: not idempotent");
            for y in src.elements() {
                if src.leq(x, y) {
                    assert!(src.leq(e.apply(x), e.apply(y)), "case {case}: not monotone");
                }
            }
        }
        let fixed = fixed_point_sets(&e).unwrap().fixed;
        for &a in &fixed {
            for &b in &fixed {
                let meet = src.meet(a, b);
                assert!(fixed.contains(&meet), "case {case}: meet leaves fixed set");
                let join = e.apply(src.join(a, b));
                assert!(fixed.contains(&join));
                let least = fixed
                    .iter()
                    .copied()
                    .filter(|&c| src.leq(a, c) && src.leq(b, c))
                    .all(|c| src.leq(join, c));
                assert!(least, "case {case}: E(a ∨ b) is not the least fixed upper bound");
            }
        }
    }
}

fn consensus() {
    let lattices = corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for case in 0..50 {
        let n = rng.gen_range(2..=12);
        let graph = Graph::random_connected(n, 0.15, &mut rng);
        let l = lattices.choose(&mut rng).unwrap();
        let x0: Vec<Elem> = (0..n).map(|_| rng.gen_range(0..l.size())).collect();
        let global = l.meet_all(x0.iter().copied());
        let run = meet_consensus(&graph, l, &x0).unwrap();
        assert_eq!(run.final_state, vec![global; n], "case {case}");
        assert!(run.rounds <= graph.diameter().unwrap(), "case {case}: {} rounds", run.rounds);
    }
}

fn lattice_signals() {
    let l = Arc::new(five_element_example());
    let basis = eigenbasis(&l).unwrap();
    let printed: [[u8; 5]; 5] = [[1, 1, 1, 1, 1], [0, 1, 1, 1, 1], [0, 0, 1, 0, 1], [0, 0, 0, 1, 1], [0, 0, 0, 0, 1]];
    assert_eq!(basis.order, vec![0, 1, 2, 3, 4]);
    for i in 0..5 {
        assert_eq!(basis.b_meet[i], printed[i].to_vec(), "row {i}");
    }
    // θ(f) = (f0 − fz, f0 − fx − fy + f1, f0 − fy, f0 − fx, f0) over (f0, fz, fx, fy, f1)
    let expected: [[i64; 5]; 5] =
        [[1, -1, 0, 0, 0], [1, 0, -1, -1, 1], [1, 0, 0, -1, 0], [1, 0, -1, 0, 0], [1, 0, 0, 0, 0]];
    for k in 0..5 {
        let unit: LatticeSignal<Rational64> = LatticeSignal::one_hot(l.clone(), k).unwrap();
        let image = basis.apply_theta(&unit).unwrap();
        for y in 0..5 {
            assert_eq!(image.values()[y], Rational64::from_integer(expected[y][k]), "coefficient of f{k} in θ_{y}");
        }
    }

    for (name, lat) in small_lattices() {
        let lat = Arc::new(lat);
        let units: Vec<LatticeSignal<Rational64>> =
            lat.elements().map(|k| LatticeSignal::one_hot(lat.clone(), k).unwrap()).collect();
        for f in &units {
            assert_eq!(f.shift(lat.top(), ShiftFlavor::Meet).unwrap(), *f, "{name}: T∧ at top");
            assert_eq!(f.shift(lat.bot(), ShiftFlavor::Join).unwrap(), *f, "{name}: T∨ at bottom");
            for x in lat.elements() {
                for y in lat.elements() {
                    for (flavor, combined) in
                        [(ShiftFlavor::Meet, lat.meet(x, y)), (ShiftFlavor::Join, lat.join(x, y))]
                    {
                        let xy = f.shift(y, flavor).unwrap().shift(x, flavor).unwrap();
                        let yx = f.shift(x, flavor).unwrap().shift(y, flavor).unwrap();
                        assert_eq!(xy, f.shift(combined, flavor).unwrap(), "{name}: T_x T_y");
                        assert_eq!(xy, yx, "{name}: shifts commute");
                    }
                }
            }
        }
        // linearity on a pair of dense signals
        let a = LatticeSignal::from_fn(lat.clone(), |k| Rational64::from_integer(k as i64 * 3 - 2));
        let b = LatticeSignal::from_fn(lat.clone(), |k| Rational64::new(1, k as i64 + 1));
        let (p, q) = (Rational64::new(2, 3), Rational64::from_integer(-5));
        for x in lat.elements() {
            for flavor in [ShiftFlavor::Meet, ShiftFlavor::Join] {
                let lhs = a.linear_combination(p, &b, q).unwrap().shift(x, flavor).unwrap();
                let rhs = a.shift(x, flavor).unwrap().linear_combination(p, &b.shift(x, flavor).unwrap(), q).unwrap();
                assert_eq!(lhs, rhs, "{name}: linearity");
            }
        }
        assert_eq!(theta_intertwines(&lat).unwrap(), lat.size() == 1, "{name}: intertwining");
    }
}

fn maxplus() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let entry = |rng: &mut ChaCha8Rng| {
        if rng.gen_bool(0.15) {
            ExtendedReal::NegInf
        } else {
            ExtendedReal::Finite(rng.gen_range(-10.0..10.0))
        }
    };
    let mut boundary = 0;
    for sample in 0..1000 {
        let (rows, cols) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let a = MaxPlusMatrix::new((0..rows).map(|_| (0..cols).map(|_| entry(&mut rng)).collect()).collect()).unwrap();
        let x: Vec<ExtendedReal> = (0..cols).map(|_| entry(&mut rng)).collect();
        // half the targets sit exactly on A ⊻ x, where the equivalence is tight
        let y: Vec<ExtendedReal> = if sample % 2 == 0 {
            boundary += 1;
            a.apply(&x).unwrap()
        } else {
            (0..rows).map(|_| entry(&mut rng)).collect()
        };
        let ax = a.apply(&x).unwrap();
        let residual = a.dual_apply(&y).unwrap();
        let lhs = ax.iter().zip(&y).all(|(&p, &q)| p.leq_tol(q));
        let rhs = x.iter().zip(&residual).all(|(&p, &q)| p.leq_tol(q));
        assert_eq!(lhs, rhs, "sample {sample}: A={a:?} x={x:?} y={y:?}");
        // A ⊻ x from the definition
        for i in 0..rows {
            let direct = (0..cols).fold(ExtendedReal::NegInf, |acc, j| acc.max(a.get(i, j).add_lower(x[j])));
            assert!(direct.approx_eq(ax[i]), "sample {sample}");
        }
    }
    assert_eq!(boundary, 500);

    let f = ExtendedReal::Finite;
    let instances = [
        (vec![vec![0.0, 1.0], vec![2.0, 0.0]], vec![vec![0.0], vec![2.0]], vec![10.0, 10.0], vec![10.0]),
        (vec![vec![0.0, 1.0], vec![2.0, 0.0]], vec![vec![0.0, f64::NEG_INFINITY], vec![f64::NEG_INFINITY, 0.0]], vec![5.0, 5.0], vec![5.0, 5.0]),
        (vec![vec![3.0]], vec![vec![1.0]], vec![0.0], vec![7.0]),
        (vec![vec![0.0, 0.0, 0.0]], vec![vec![-1.0, 4.0]], vec![2.0, 9.0, -3.0], vec![1.0, 1.0]),
    ];
    for (k, (a, b, x0, y0)) in instances.into_iter().enumerate() {
        let rows = |m: Vec<Vec<f64>>| MaxPlusMatrix::new(m.into_iter().map(|r| r.into_iter().map(ExtendedReal::from).collect()).collect()).unwrap();
        let (a, b) = (rows(a), rows(b));
        let x0: Vec<ExtendedReal> = x0.into_iter().map(f).collect();
        let y0: Vec<ExtendedReal> = y0.into_iter().map(f).collect();
        let out = alternating_method(&a, &b, &x0, &y0, 1000).unwrap();
        assert!(out.converged && out.synchronized, "instance {k}: {out:?}");
        let ax = a.apply(&out.x).unwrap();
        let by = b.apply(&out.y).unwrap();
        assert!(ax.iter().zip(&by).all(|(&p, &q)| p.is_finite() && p.approx_eq(q)), "instance {k}");
        assert!(out.x.iter().zip(&x0).all(|(&p, &q)| p.leq_tol(q)), "instance {k}: x rose");
    }
}

fn helmholtz_oracle(sheaf: &TarskiSheaf, y: &[Elem]) -> Vec<Elem> {
    let edges = sheaf.graph().edges();
    edges
        .iter()
        .enumerate()
        .map(|(e, &(i, j))| {
            let stalk = sheaf.edge_stalk(e);
            let mut acc = stalk.bot();
            for (other, &(a, b)) in edges.iter().enumerate() {
                if other == e {
                    continue;
                }
                for end in [i, j] {
                    if a == end || b == end {
                        let up = sheaf.restriction(end, other).upper().image()[y[other]];
                        acc = stalk.join(acc, sheaf.restriction(end, e).lower().image()[up]);
                    }
                }
            }
            acc
        })
        .collect()
}

fn helmholtzian_check() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for case in 0..40 {
        let sheaf = random_sheaf(4, 3, &mut rng);
        let sizes: Vec<usize> = sheaf.edge_stalks().iter().map(|l| l.size()).collect();
        for y in all_cochains(&sizes) {
            let got = helmholtzian(&sheaf, &Cochain1(y.clone())).unwrap();
            assert_eq!(got.0, helmholtz_oracle(&sheaf, &y), "case {case}: {y:?}");
        }
    }
    let dir = option_env!("CARGO_TARGET_TMPDIR").map(std::path::PathBuf::from).unwrap_or_else(std::env::temp_dir);
    let path = dir.join("helmholtz_conjecture.csv");
    let mut out = BufWriter::new(File::create(&path).unwrap());
    writeln!(out, "instance,edges,prefix_points,h1,only_prefix,only_h1,equal").unwrap();
    let mut equal = 0;
    for k in 0..10 {
        let sheaf = random_sheaf(4, 3, &mut rng);
        let report = conjecture_report(&sheaf).unwrap();
        equal += usize::from(report.sets_equal());
        writeln!(
            out,
            "{k},{},{},{},{},{},{}",
            sheaf.graph().edge_count(),
            report.prefix_points.len(),
            report.h1.len(),
            report.only_prefix.len(),
            report.only_h1.len(),
            report.sets_equal()
        )
        .unwrap();
    }
    out.flush().unwrap();
    println!("    prefix(𝔏) = H¹ on {equal} of 10 random instances; report at {}", path.display());
}

fn main() -> ExitCode {
    let criteria: [(&str, fn(), Option<Duration>); 9] = [
        ("Hodge-Tarski oracle equivalence", hodge_tarski_oracle, Some(Duration::from_secs(10))),
        ("worked example fidelity", worked_example, Some(Duration::from_secs(1))),
        ("gossip experiment", gossip_experiment, Some(Duration::from_secs(30))),
        ("heat-flow contract", heat_contract, None),
        ("Galois law suite", galois_laws, None),
        ("meet consensus within diameter", consensus, None),
        ("lattice signal processing", lattice_signals, None),
        ("max-plus adjunction and synchronization", maxplus, None),
        ("Helmholtzian", helmholtzian_check, None),
    ];
    panic::set_hook(Box::new(|info| println!("    {info}")));
    let mut failed = 0;
    for (k, (name, check, budget)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check));
        let elapsed = start.elapsed();
        // debug builds get ten times the budget
        let limit = budget.map(|b| if cfg!(debug_assertions) { b * 10 } else { b });
        let in_time = limit.is_none_or(|l| elapsed <= l);
        let ok = outcome.is_ok() && in_time;
        failed += usize::from(!ok);
        let note = if in_time { String::new() } else { format!(" (over budget {:?})", limit.unwrap()) };
        println!(
            "criterion {}: {:<42} {} in {:.2?}{note}",
            k + 1,
            name,
            if ok { "PASS" } else { "FAIL" },
            elapsed
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
