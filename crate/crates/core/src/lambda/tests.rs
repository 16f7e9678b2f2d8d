use alloc::vec::Vec;

use super::*;
use crate::agents::Tower;
use crate::Error;

fn o() -> Type {
    Type::Base
}

#[test]
fn numerals_have_their_types() {
    assert!(church(0, 0).alpha_eq(&lam("f", Type::church(1), lam("x", o(), var("x")))));
    for n in 0..4 {
        for p in 0..4 {
            assert_eq!(church(n, p).typecheck().unwrap(), Type::church(p + 2));
        }
    }
    assert_eq!(Type::church(2).level(), 2);
    assert!(degree(&church(2, 0)).unwrap() >= 2);
}

#[test]
fn family_typechecks() {
    assert_eq!(lower_bound_family(0), app(church(2, 0), id_base()));
    for n in 0..=3 {
        assert_eq!(lower_bound_family(n).typecheck().unwrap(), Type::church(1));
    }
}

#[test]
fn family_step_counts() {
    let counts: Vec<u64> = (0..=2)
        .map(|n| hlr_steps(&lower_bound_family(n), HlrBudget::default()).unwrap().steps)
        .collect();
    for (n, c) in counts.iter().enumerate() {
        let floor = Tower::new(n as u32 + 1, 1u32).to_u64().unwrap();
        assert!(*c >= floor, "n={n}: {c} < {floor}");
        let syntactic = hlr_run(&lower_bound_family(n as u32), HlrBudget::default()).unwrap();
        assert_eq!(syntactic.steps, *c);
    }
    assert_eq!(counts[0], 4);
}

#[test]
fn game_situation_of_the_family() {
    let t = eta_long_spine(&lower_bound_family(1)).unwrap();
    let gs = game_situation(&t).unwrap();
    assert!(gs.head.alpha_eq(&eta_long(&church(2, 1)).unwrap()));
    assert_eq!(gs.args.len(), 2);
    // S = λf.λx.λz. f (λz1. f (λz2. x z2) z1) z has sh 4; η(2_0) has sh 3;
    // the arguments have types A_2 and A_1
    assert_eq!(sh(&gs.head), 4);
    assert_eq!(sh(&gs.args[0]), 3);
    assert_eq!(gs.bound, Tower::new(1, 16u32));
    let steps = hlr_steps(&t, HlrBudget::default()).unwrap().steps;
    assert!(Tower::from(steps) <= gs.bound);
}

#[test]
fn non_normal_components_are_reported() {
    let err = game_situation(&lower_bound_family(1)).unwrap_err();
    assert!(matches!(err, Error::NotGameSituation(ref m) if m.contains("head is not η-long")));
    assert!(game_situation(&id_base()).is_err());
}

#[test]
fn general_bound_of_a_normal_term() {
    // β-normal, degree 1: 2_1^{(h+2)·2}
    let t = lam("x", o(), app(lam("u", o(), var("u")), var("x")));
    let n = id_base();
    let gb = general_bound(&n).unwrap();
    assert_eq!(gb.bound, Tower::new(1, (height(&n) as u64 + 2) * 2));
    assert!(gb.wrapped.alpha_eq(&n));
    let gb = general_bound(&t).unwrap();
    assert!(is_beta_normal(&gb.delayed));
    let wrapped = game_situation(&gb.wrapped).unwrap();
    let steps = hlr_steps(&t, HlrBudget::default()).unwrap().steps;
    let wrapped_steps = hlr_steps(&gb.wrapped, HlrBudget::default()).unwrap().steps;
    assert!(wrapped_steps >= steps);
    assert!(Tower::from(wrapped_steps) <= wrapped.bound);
    assert!(Tower::from(steps) <= gb.bound);
}

#[test]
fn evaluators_are_eta_long() {
    let e = evaluator(&Type::church(2)).unwrap();
    assert!(is_eta_long(&e).unwrap());
    assert_eq!(
        e.typecheck().unwrap(),
        Type::arrow(Type::church(2), Type::church(2))
    );
}
