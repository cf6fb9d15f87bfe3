mod common;

use common::*;
use qadaprune::harness::{
    exact_diag, load_hamiltonian, run_experiment, StopReason, SCHEMA_VERSION,
};

fn stream_without_clock(cfg: &qadaprune::harness::ExperimentConfig) -> Vec<String> {
    let mut lines = Vec::new();
    run_experiment(cfg, &mut |line| {
        let mut v: serde_json::Value = serde_json::from_str(&line.to_json()).unwrap();
        v.as_object_mut().unwrap().remove("wall_ms");
        lines.push(v.to_string());
        Ok(())
    })
    .unwrap();
    lines
}

#[test]
fn identical_seed_gives_identical_stream() {
    let mut cfg = iris(4, 9);
    cfg.steps = 30;
    let a = stream_without_clock(&cfg);
    assert_eq!(a, stream_without_clock(&cfg));
    assert!(a.iter().any(|l| l.contains("\"type\":\"prune\"")));
    cfg.seed = 10;
    assert_ne!(a, stream_without_clock(&cfg));
}

#[test]
fn every_line_carries_the_schema_version() {
    let mut cfg = barren(3, 1);
    cfg.steps = 12;
    for line in stream_without_clock(&cfg) {
        let v: serde_json::Value = serde_json::from_str(&line).unwrap();
        assert_eq!(v["v"], SCHEMA_VERSION);
    }
}

#[test]
fn circuit_evaluations_follow_the_freeze_mask() {
    for cfg in [barren(4, 2), vqe_gd(1)] {
        let r = run(&cfg);
        let n = r.summary().n_params as u64;
        let mut prev_total = 0;
        let mut frozen_before = 0u64;
        for rec in &r.steps {
            let spent = rec.circuit_evals - prev_total;
            assert_eq!(spent, 2 * (n - frozen_before) + 1, "step {}", rec.step);
            prev_total = rec.circuit_evals;
            frozen_before = rec.n_frozen as u64;
        }
        // One more execution for the final cost.
        assert_eq!(r.summary().total_circuit_evals, prev_total + 1);
        let plain = run(&without_pruning(&cfg));
        if r.summary().n_frozen > 0 {
            assert!(r.summary().total_circuit_evals < plain.summary().total_circuit_evals);
        }
    }
}

#[test]
fn minibatch_evaluations_scale_with_batch() {
    let mut cfg = synthetic(0);
    cfg.dataset.as_mut().unwrap().epochs = Some(1);
    let r = run(&without_pruning(&cfg));
    let n = r.summary().n_params as u64;
    // 560 training rows in batches of 32: 17 full batches and one of 16.
    assert_eq!(r.steps.len(), 18);
    let per_sample = 2 * n + 1;
    assert_eq!(r.steps.last().unwrap().circuit_evals, 560 * per_sample);
    assert_eq!(r.summary().total_circuit_evals, 560 * per_sample + 560);
    assert!(r.steps.last().unwrap().val_accuracy.is_some());
    assert!(r.steps[..17].iter().all(|s| s.val_accuracy.is_none()));
}

#[test]
fn vqe_energies_respect_the_variational_bound() {
    let h = load_hamiltonian(data("h2/h2_0.7414.txt")).unwrap();
    let exact = exact_diag(&h).unwrap();
    assert!((exact - -1.137_270).abs() < 1e-5, "{exact}");
    for cfg in [vqe_gd(0), vqe_gd(4), without_pruning(&vqe_gd(4))] {
        let r = run(&cfg);
        for rec in &r.steps {
            assert!(rec.cost >= exact - 1e-9, "step {}: {}", rec.step, rec.cost);
        }
        assert!(r.summary().final_energy.unwrap() >= exact - 1e-9);
        assert_eq!(r.summary().exact_energy, Some(exact));
    }
}

#[test]
fn summary_agrees_with_last_record() {
    for cfg in [barren(6, 0), iris(6, 0)] {
        let r = run(&cfg);
        let last = r.steps.last().unwrap();
        let s = r.summary();
        assert_eq!(s.total_steps, r.steps.len() as u64);
        assert_eq!(s.n_frozen, last.n_frozen);
        assert_eq!(s.final_pruning_ratio, last.pruning_ratio);
        assert!(s.total_circuit_evals > last.circuit_evals);
        for (i, rec) in r.steps.iter().enumerate() {
            assert_eq!(rec.step, i as u64);
        }
    }
}

#[test]
fn fully_frozen_runs_stop_early() {
    let r = run(&barren(6, 0));
    let s = r.summary();
    assert_eq!(s.stop_reason, StopReason::AllFrozen);
    assert_eq!(s.n_frozen, s.n_params);
    assert!(s.total_steps < 200);
    // The last event froze whatever was still live.
    let last_event = r.events.last().unwrap();
    assert!(last_event.frozen_now.len() <= last_event.saliency.len());
}

#[test]
fn frozen_slots_keep_their_values() {
    let mut cfg = iris(4, 2);
    cfg.steps = 60;
    cfg.record_snapshots = true;
    let mut params_at_freeze = std::collections::BTreeMap::new();
    let full = run(&cfg);
    for ev in &full.events {
        // Rerun up to the event step to see the parameter value that was frozen.
        let mut short = cfg.clone();
        short.steps = ev.step as usize;
        let before = run(&short).summary().final_params.clone();
        for &j in &ev.frozen_now {
            params_at_freeze.insert(j, before[j]);
        }
    }
    assert!(!params_at_freeze.is_empty());
    for (j, v) in params_at_freeze {
        assert_eq!(full.summary().final_params[j], v, "slot {j}");
    }
    assert!(full
        .steps
        .iter()
        .all(|s| s.tau.is_some() && s.accum.is_some()));
}
