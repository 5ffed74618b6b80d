mod common;

use common::{from_raw, is_raw_prefix, pop_closure, raw, replace_raw, RawStack};
use nptkit::stack::{common_prefix, Stack, StackError, StackOp, Symbol, Word};
use proptest::prelude::*;

const BOT: u16 = 0;

fn st(words: &[&[u16]]) -> Stack {
    from_raw(&words.iter().map(|w| w.to_vec()).collect())
}

fn word(syms: &[u16]) -> Word {
    Word::new(syms.iter().map(|&x| Symbol(x)).collect()).unwrap()
}

fn raw_word() -> impl Strategy<Value = Vec<u16>> {
    prop::collection::vec(1u16..3, 0..4).prop_map(|mut v| {
        v.insert(0, BOT);
        v
    })
}

fn raw_stack() -> impl Strategy<Value = RawStack> {
    prop::collection::vec(raw_word(), 1..5)
}

/// A stack together with one of its prefixes, built by cutting a random stack.
fn stack_and_prefix() -> impl Strategy<Value = (RawStack, RawStack)> {
    (
        raw_stack(),
        any::<prop::sample::Index>(),
        any::<prop::sample::Index>(),
        raw_stack(),
    )
        .prop_map(|(base, i, j, tail)| {
            // extend the base so that some top words share the cut
            let k = i.index(base.len());
            let cut_word = base[k].clone();
            let cut = 1 + j.index(cut_word.len());
            let mut t: RawStack = base[..=k].to_vec();
            for w in tail {
                let mut v = cut_word[..cut].to_vec();
                v.extend_from_slice(&w[1..]);
                t.push(v);
            }
            let mut s = base[..k].to_vec();
            s.push(cut_word[..cut].to_vec());
            (t, s)
        })
}

#[test]
fn operations_on_small_stacks() {
    let bot2 = Stack::initial(2, Symbol(BOT));
    let cloned = bot2.apply(StackOp::Clone(2)).unwrap();
    assert_eq!(cloned, st(&[&[0], &[0]]));
    assert_eq!(cloned.apply(StackOp::Push(Symbol(1))).unwrap(), st(&[&[0], &[0, 1]]));
    assert_eq!(bot2.apply(StackOp::Pop(2)), Err(StackError::Undefined(StackOp::Pop(2))));
    assert_eq!(bot2.apply(StackOp::Pop(1)), Err(StackError::Undefined(StackOp::Pop(1))));
}

#[test]
fn top_entries() {
    let s = st(&[&[0], &[0, 1]]);
    assert_eq!(s.top1(), Symbol(1));
    assert_eq!(s.top_word(), &word(&[0, 1]));
    assert_eq!(Stack::initial(2, Symbol(BOT)).top_word(), &word(&[0]));
}

#[test]
fn substack_examples() {
    let s = st(&[&[0], &[0, 1]]);
    assert!(s.is_substack(&s));
    assert!(s.is_substack(&st(&[&[0], &[0, 1, 2], &[0, 3]])));
    assert!(!st(&[&[0, 2]]).is_substack(&s));
}

#[test]
fn prefix_examples() {
    let s = st(&[&[0], &[0, 1]]);
    assert!(s.is_prefix(&s));
    assert!(s.is_prefix(&st(&[&[0], &[0, 1, 2], &[0, 1, 3]])));
    assert!(!s.is_prefix(&st(&[&[0], &[0, 1, 2], &[0, 3]])));
}

#[test]
fn replacement_examples() {
    let t = st(&[&[0], &[0, 1, 2], &[0, 1, 3]]);
    assert_eq!(t.replace_prefix(&t, &t).unwrap(), t);
    let s = st(&[&[0], &[0, 1]]);
    let u = st(&[&[0, 4]]);
    assert_eq!(t.replace_prefix(&s, &u).unwrap(), st(&[&[0, 4, 2], &[0, 4, 3]]));
    let bad = st(&[&[0, 2]]);
    assert_eq!(t.replace_prefix(&bad, &u), Err(StackError::NotAPrefix));
}

#[test]
fn common_prefix_examples() {
    assert_eq!(common_prefix(&word(&[0, 1, 2]), &word(&[0, 1, 3])), word(&[0, 1]));
    assert_eq!(common_prefix(&word(&[0, 1]), &word(&[0, 1])), word(&[0, 1]));
    assert_eq!(common_prefix(&word(&[0]), &word(&[0, 1, 2, 3])), word(&[0]));
}

proptest! {
    #[test]
    fn prefix_agrees_with_raw_definition(s in raw_stack(), t in raw_stack()) {
        prop_assert_eq!(from_raw(&s).is_prefix(&from_raw(&t)), is_raw_prefix(&s, &t));
    }

    #[test]
    fn prefix_is_reflexive_and_antisymmetric(s in raw_stack(), t in raw_stack()) {
        let (a, b) = (from_raw(&s), from_raw(&t));
        prop_assert!(a.is_prefix(&a));
        if a.is_prefix(&b) && b.is_prefix(&a) {
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn prefix_is_transitive((t, s) in stack_and_prefix(), r in raw_stack()) {
        let (t, s, r) = (from_raw(&t), from_raw(&s), from_raw(&r));
        prop_assert!(s.is_prefix(&t));
        if r.is_prefix(&s) {
            prop_assert!(r.is_prefix(&t));
        }
    }

    #[test]
    fn replacement_matches_word_formula((t, s) in stack_and_prefix(), u in raw_stack()) {
        let got = from_raw(&t).replace_prefix(&from_raw(&s), &from_raw(&u)).unwrap();
        prop_assert_eq!(raw(&got), replace_raw(&t, &s, &u));
        prop_assert_eq!(got.width(), t.len() + u.len() - s.len());
    }

    #[test]
    fn replacing_by_itself_is_identity((t, s) in stack_and_prefix()) {
        let t = from_raw(&t);
        let s = from_raw(&s);
        prop_assert_eq!(t.replace_prefix(&s, &s).unwrap(), t);
    }

    #[test]
    fn substack_is_pop_closure(s in raw_stack(), t in raw_stack()) {
        prop_assert_eq!(from_raw(&s).is_substack(&from_raw(&t)), pop_closure(&t).contains(&s));
    }
}
