mod common;

use std::collections::BTreeSet;

use common::{fig1, mixed, naive_game};
use nptkit::stack::{Stack, StackOp};
use nptkit::system::{enumerate_runs, Run, RunFilter};
use nptkit::wordtypes::{
    ancestor_structure, fo_equiv, iso_check, transfer_extension, AncestorParams, Structure, Verdict, WordTypeError,
    WordTypes,
};
use proptest::prelude::*;

const BUDGET: usize = 200_000;

fn naive(a: &Structure, b: &Structure, k: usize) -> bool {
    naive_game(a, &mut Vec::new(), b, &mut Vec::new(), k)
}

#[test]
fn game_examples_against_the_naive_oracle() {
    let c5 = Structure::chain(vec![0; 5]);
    let c6 = Structure::chain(vec![0; 6]);
    assert!(fo_equiv(&c5, &[], &c5, &[], 3));
    assert_eq!(fo_equiv(&c5, &[], &c6, &[], 2), naive(&c5, &c6, 2));
    let c1 = Structure::chain(vec![0]);
    let c2 = Structure::chain(vec![0; 2]);
    assert_eq!(fo_equiv(&c1, &[], &c2, &[], 1), naive(&c1, &c2, 1));
    assert_eq!(fo_equiv(&c1, &[], &c2, &[], 2), naive(&c1, &c2, 2));
    assert!(!fo_equiv(&c1, &[], &c2, &[], 2));
}

fn structure() -> impl Strategy<Value = Structure> {
    (1usize..4).prop_flat_map(|n| {
        let pairs = prop::collection::btree_set((0..n as u32, 0..n as u32), 0..=n * n);
        (prop::collection::vec(0u64..2, n), pairs)
            .prop_map(|(labels, rel): (Vec<u64>, BTreeSet<(u32, u32)>)| Structure::new(labels, vec![rel]))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn game_agrees_with_naive_oracle(a in structure(), b in structure(), k in 0usize..3) {
        prop_assert_eq!(fo_equiv(&a, &[], &b, &[], k), naive(&a, &b, k));
    }
}

fn reachable_stacks(depth: usize) -> Vec<Stack> {
    let sys = fig1();
    let mut out: Vec<Stack> = enumerate_runs(&sys, &sys.initial_configuration(), depth, &RunFilter::default())
        .iter()
        .map(|r| r.stack().clone())
        .collect();
    out.sort_by_key(|s| format!("{s:?}"));
    out.dedup();
    out
}

#[test]
fn word_equivalence_examples() {
    let sys = fig1();
    let wt = WordTypes::new(&sys, BUDGET).unwrap();
    let a = sys.parse_word("_.a").unwrap();
    let aa = sys.parse_word("_.a.a").unwrap();
    assert_eq!(wt.word_equiv(&a, &a, 1, 2).unwrap(), Verdict::Equivalent);
    assert_eq!(wt.word_equiv(&a, &aa, 0, 2).unwrap(), Verdict::Distinct);
    let m = wt.build_lin(&aa, 0, 2, 2).unwrap();
    assert_eq!(m.len(), aa.len());
}

#[test]
fn stack_equivalence_is_push_compatible() {
    let sys = fig1();
    let wt = WordTypes::new(&sys, BUDGET).unwrap();
    let stacks = reachable_stacks(9);
    let mut positive = 0;
    for s1 in &stacks {
        for s2 in &stacks {
            if s1 == s2 || wt.stack_equiv(s1, s2, 0, 2, 1).unwrap() != Verdict::Equivalent {
                continue;
            }
            positive += 1;
            for sym in sys.letters() {
                let (p1, p2) = (
                    s1.apply(StackOp::Push(sym)).unwrap(),
                    s2.apply(StackOp::Push(sym)).unwrap(),
                );
                assert_ne!(wt.stack_equiv(&p1, &p2, 0, 2, 1).unwrap(), Verdict::Distinct);
            }
        }
    }
    assert!(positive > 0);
}

#[test]
fn ancestor_structures_of_runs() {
    for sys in [fig1(), mixed()] {
        let wt = WordTypes::new(&sys, BUDGET).unwrap();
        let params = AncestorParams {
            l: 1,
            n1: 0,
            n2: 0,
            z: 2,
        };
        let runs = enumerate_runs(&sys, &sys.initial_configuration(), 5, &RunFilter::default());
        for r in &runs {
            let a = ancestor_structure(std::slice::from_ref(r), params);
            assert_eq!(iso_check(&wt, &a, &a).unwrap(), Verdict::Equivalent);
        }
        for r in &runs {
            for t in &runs {
                if r.state() != t.state() {
                    let (a, b) = (
                        ancestor_structure(std::slice::from_ref(r), params),
                        ancestor_structure(std::slice::from_ref(t), params),
                    );
                    assert_eq!(iso_check(&wt, &a, &b).unwrap(), Verdict::Distinct);
                }
            }
        }
    }
}

#[test]
fn transfer_needs_positive_level() {
    let sys = fig1();
    let wt = WordTypes::new(&sys, BUDGET).unwrap();
    let root = Run::from_initial(&sys, &[]).unwrap();
    let ext = Run::from_initial(&sys, &[0, 1]).unwrap();
    assert!(matches!(
        transfer_extension(&wt, &root, &root, &ext, &[], 0, 2, 1000),
        Err(WordTypeError::Precondition(_))
    ));
}
