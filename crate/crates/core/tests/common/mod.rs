//! Fixtures and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet, VecDeque};

use nptkit::stack::{Stack, StackOp, Symbol, Word};
use nptkit::system::{parse_system, Configuration, PushdownSystem, Run};
use nptkit::wordtypes::Structure;

pub fn fig1() -> PushdownSystem {
    parse_system(include_str!("../../../../fixtures/fig1.nps")).expect("fig1 fixture")
}

pub fn level1() -> PushdownSystem {
    parse_system(include_str!("../../../../fixtures/level1.nps")).expect("level1 fixture")
}

pub fn mixed() -> PushdownSystem {
    parse_system(include_str!("../../../../fixtures/mixed.nps")).expect("mixed fixture")
}

/// Stacks as plain vectors of symbol ids, bottom first.
pub type RawStack = Vec<Vec<u16>>;

pub fn raw(s: &Stack) -> RawStack {
    s.words()
        .iter()
        .map(|w| w.symbols().iter().map(|x| x.0).collect())
        .collect()
}

pub fn from_raw(r: &RawStack) -> Stack {
    let words = r
        .iter()
        .map(|w| Word::new(w.iter().map(|&x| Symbol(x)).collect()).expect("nonempty word"))
        .collect();
    Stack::from_words(words).expect("nonempty stack")
}

/// Every word `⊥x` with `x` over `letters` and total length at most `max_len`.
pub fn all_words(letters: &[u16], max_len: usize) -> Vec<Vec<u16>> {
    let mut out = vec![vec![0u16]];
    let mut frontier = vec![vec![0u16]];
    for _ in 1..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for &a in letters {
                let mut v = w.clone();
                v.push(a);
                next.push(v);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Every level-2 stack with height at most `max_h` and width at most `max_w`.
pub fn all_stacks(letters: &[u16], max_h: usize, max_w: usize) -> Vec<RawStack> {
    let words = all_words(letters, max_h);
    let mut out: Vec<RawStack> = Vec::new();
    let mut frontier: Vec<RawStack> = vec![vec![]];
    for _ in 0..max_w {
        let mut next = Vec::new();
        for s in &frontier {
            for w in &words {
                let mut t = s.clone();
                t.push(w.clone());
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// All stacks reachable from `t` by pop operations, `t` included.
pub fn pop_closure(t: &RawStack) -> HashSet<RawStack> {
    let mut seen = HashSet::new();
    let mut queue = VecDeque::from([t.clone()]);
    while let Some(s) = queue.pop_front() {
        if !seen.insert(s.clone()) {
            continue;
        }
        if s.len() > 1 {
            queue.push_back(s[..s.len() - 1].to_vec());
        }
        let top = s.last().expect("nonempty");
        if top.len() > 1 {
            let mut u = s.clone();
            u.last_mut().expect("nonempty").pop();
            queue.push_back(u);
        }
    }
    seen
}

/// `t[s/u]` computed directly on the word lists.
pub fn replace_raw(t: &RawStack, s: &RawStack, u: &RawStack) -> RawStack {
    let k = s.len() - 1;
    let cut = s[k].len();
    let mut out: RawStack = u[..u.len() - 1].to_vec();
    let base = &u[u.len() - 1];
    for w in &t[k..] {
        let mut v = base.clone();
        v.extend_from_slice(&w[cut..]);
        out.push(v);
    }
    out
}

pub fn is_raw_prefix(s: &RawStack, t: &RawStack) -> bool {
    let k = s.len() - 1;
    t.len() > k && s[..k] == t[..k] && t[k..].iter().all(|w| w.starts_with(&s[k]))
}

/// The operation of transition `d` grows the top-level sequence.
pub fn opens(sys: &PushdownSystem, d: usize) -> bool {
    let op = sys.transitions()[d].op;
    match sys.level() {
        1 => matches!(op, StackOp::Push(_)),
        l => op == StackOp::Clone(l),
    }
}

/// The operation of transition `d` shrinks the top-level sequence.
pub fn closes(sys: &PushdownSystem, d: usize) -> bool {
    sys.transitions()[d].op == StackOp::Pop(sys.level())
}

fn extends(a: &Run, b: &Run) -> bool {
    a.start() == b.start() && a.len() <= b.len() && a.steps()[..] == b.steps()[..a.len()]
}

fn widths(r: &Run) -> Vec<usize> {
    r.configs().iter().map(Configuration::width).collect()
}

pub fn delta(a: &Run, b: &Run) -> bool {
    b.len() == a.len() + 1 && extends(a, b)
}

pub fn delta_at(a: &Run, b: &Run, i: usize) -> bool {
    delta(a, b) && b.steps()[a.len()] == i
}

pub fn jump(sys: &PushdownSystem, a: &Run, b: &Run) -> bool {
    if b.len() < a.len() + 2 || !extends(a, b) {
        return false;
    }
    let st = b.steps();
    let ws = widths(b);
    opens(sys, st[a.len()])
        && closes(sys, st[b.len() - 1])
        && b.stack() == a.stack()
        && ws[a.len() + 1..b.len()].iter().all(|&w| w > ws[a.len()])
}

pub fn plus(a: &Run, b: &Run) -> bool {
    if b.len() <= a.len() || !extends(a, b) {
        return false;
    }
    let ws = widths(b);
    let wa = ws[a.len()];
    wa + 1 == ws[b.len()] && ws[a.len() + 1..b.len()].iter().all(|&w| w > wa)
}

/// `RelAnc^l(ρ)` by brute force over all prefixes, as lengths.
pub fn relanc_oracle(sys: &PushdownSystem, rho: &Run, l: usize) -> BTreeSet<usize> {
    let prefixes: Vec<Run> = (0..=rho.len()).map(|i| rho.prefix(i)).collect();
    let mut set = BTreeSet::from([rho.len()]);
    for _ in 0..l {
        let mut next = set.clone();
        for &t in &set {
            for p in &prefixes[..t] {
                let target = &prefixes[t];
                if delta(p, target) || jump(sys, p, target) || plus(p, target) {
                    next.insert(p.len());
                }
            }
        }
        set = next;
    }
    set
}

/// Runs from `from` of length at most `max_len`, depth first, in no particular order.
/// `visit` sees the configurations of each run and decides whether it may be extended.
pub fn dfs_runs(
    sys: &PushdownSystem,
    from: &Configuration,
    max_len: usize,
    visit: &mut dyn FnMut(&[Configuration]) -> bool,
) {
    fn go(
        sys: &PushdownSystem,
        path: &mut Vec<Configuration>,
        max_len: usize,
        visit: &mut dyn FnMut(&[Configuration]) -> bool,
    ) {
        if !visit(path) || path.len() > max_len {
            return;
        }
        let last = path.last().expect("nonempty").clone();
        for d in 0..sys.transitions().len() {
            if let Ok(c) = sys.step(&last, d) {
                path.push(c);
                go(sys, path, max_len, visit);
                path.pop();
            }
        }
    }
    let mut path = vec![from.clone()];
    go(sys, &mut path, max_len, visit);
}

pub fn partial_iso(a: &Structure, ta: &[u32], b: &Structure, tb: &[u32]) -> bool {
    for i in 0..ta.len() {
        if a.labels()[ta[i] as usize] != b.labels()[tb[i] as usize] {
            return false;
        }
        for j in 0..ta.len() {
            if (ta[i] == ta[j]) != (tb[i] == tb[j]) {
                return false;
            }
            for r in 0..a.relations().len() {
                if a.holds(r, ta[i], ta[j]) != b.holds(r, tb[i], tb[j]) {
                    return false;
                }
            }
        }
    }
    true
}

/// The plain game tree, no memoization.
pub fn naive_game(a: &Structure, ta: &mut Vec<u32>, b: &Structure, tb: &mut Vec<u32>, k: usize) -> bool {
    if !partial_iso(a, ta, b, tb) {
        return false;
    }
    if k == 0 {
        return true;
    }
    for x in 0..a.size() as u32 {
        ta.push(x);
        let answered = (0..b.size() as u32).any(|y| {
            tb.push(y);
            let r = naive_game(a, ta, b, tb, k - 1);
            tb.pop();
            r
        });
        ta.pop();
        if !answered {
            return false;
        }
    }
    for y in 0..b.size() as u32 {
        tb.push(y);
        let answered = (0..a.size() as u32).any(|x| {
            ta.push(x);
            let r = naive_game(a, ta, b, tb, k - 1);
            ta.pop();
            r
        });
        tb.pop();
        if !answered {
            return false;
        }
    }
    true
}

/// Simple pass/fail line for a criterion.
pub fn report(id: u32, name: &str, violations: usize, tolerance: usize, detail: &str) {
    let verdict = if violations <= tolerance { "PASS" } else { "FAIL" };
    println!("criterion {id:>2} {verdict} {name}: violations={violations} (tolerance {tolerance}); {detail}");
    assert!(violations <= tolerance, "criterion {id} failed: {detail}");
}
