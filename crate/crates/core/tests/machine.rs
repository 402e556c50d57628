mod common;

use krivine_lab_core::machine::{run_with, step_h, KForm, MachineKind, RunOptions, RunStatus};
use krivine_lab_core::reduce::{head_reduce, head_step, leftmost_reduce, ReductionStatus};
use krivine_lab_core::term::satisfies_variable_convention;
use krivine_lab_core::{alpha_eq, ensure_variable_convention, parse, run, Term};
use proptest::prelude::*;

const FUEL: usize = 2000;

proptest! {
    #[test]
    fn printing_round_trips(t in common::open_term(14)) {
        let back = parse(&t.to_string()).unwrap();
        prop_assert_eq!(back, t);
    }

    #[test]
    fn variable_convention(t in common::open_term(14)) {
        let r = ensure_variable_convention(&t);
        prop_assert!(satisfies_variable_convention(&r));
        prop_assert!(alpha_eq(&r, &t));
    }

    // The head machine ends in the head normal form found by head reduction,
    // after at least as many steps as there are contractions.
    #[test]
    fn head_machine_matches_head_reduction(t in common::open_term(12)) {
        let reference = head_reduce(&t, FUEL);
        let r = run(&t, MachineKind::Head, 50 * FUEL);
        if reference.status == ReductionStatus::Normalized {
            prop_assert_eq!(r.status, RunStatus::Finished);
            prop_assert!(alpha_eq(&r.normal_form().unwrap(), &reference.term));
            prop_assert!(r.steps >= reference.steps);
        }
        if r.status == RunStatus::Finished {
            prop_assert!(alpha_eq(&r.normal_form().unwrap(), &head_reduce(&t, 50 * FUEL).term));
        }
    }

    #[test]
    fn beta_machine_matches_leftmost_reduction(t in common::open_term(12)) {
        let reference = leftmost_reduce(&t, FUEL);
        let r = run(&t, MachineKind::Beta, 50 * FUEL);
        if reference.status == ReductionStatus::Normalized {
            prop_assert_eq!(r.status, RunStatus::Finished);
            prop_assert!(alpha_eq(&r.normal_form().unwrap(), &reference.term));
            prop_assert!(r.steps >= reference.steps);
        }
    }

    // Each head step either keeps the realized term or performs one head
    // contraction on it.
    #[test]
    fn head_steps_simulate_head_reduction(t in common::closed_term(11)) {
        let mut k = KForm::initial(ensure_variable_convention(&t));
        for _ in 0..300 {
            let Some(next) = step_h(&k) else { break };
            let (before, after) = (k.realize(), next.realize());
            let same = alpha_eq(&before, &after);
            let one = head_step(&before).is_some_and(|c| alpha_eq(&c, &after));
            prop_assert!(same || one, "{} then {}", before, after);
            k = next;
        }
    }

    #[test]
    fn traces_are_reproducible(t in common::open_term(10)) {
        let opts = RunOptions { fuel: 200, trace: true, detect_cycles: false };
        let a = run_with(&t, MachineKind::Beta, &opts);
        let b = run_with(&t, MachineKind::Beta, &opts);
        let show = |r: &krivine_lab_core::RunReport| -> Vec<String> {
            r.trace.iter().flatten().map(|e| format!("{} {}", e.rule, e.form)).collect()
        };
        prop_assert_eq!(show(&a), show(&b));
        prop_assert_eq!(a.trace.unwrap().len(), a.steps);
    }
}

#[test]
fn church_numerals_applied_to_identity() {
    for n in 0..8 {
        let t = Term::app(krivine_lab_core::corpus::church(n), krivine_lab_core::corpus::identity());
        assert_eq!(run(&t, MachineKind::Head, 1000).steps, 4 * (n + 1), "n = {n}");
    }
}

#[test]
fn omega_is_caught_by_cycle_detection() {
    let omega = parse("(\\x.(x)x)\\x.(x)x").unwrap();
    let opts = RunOptions {
        fuel: 1000,
        trace: false,
        detect_cycles: true,
    };
    assert_eq!(run_with(&omega, MachineKind::Head, &opts).status, RunStatus::Diverges);
    assert_eq!(run(&omega, MachineKind::Head, 1000).status, RunStatus::FuelExhausted);
}
