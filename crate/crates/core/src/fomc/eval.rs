//! Evaluation on finite truncations and on constraint generators.

use std::collections::{HashMap, HashSet};
use std::ops::ControlFlow;

use super::formula::Formula;
use super::FomcError;
use crate::npt::{is_delta_edge, is_jump_edge, truncate, EdgeKind, NptError, Truncation};
use crate::system::{walk_runs, PushdownSystem, Run, WalkControl};

/// Admissible tuples per arity and a generator for their extensions.
pub trait Constraint {
    fn admits(&self, tuple: &[Run]) -> bool;

    /// Visits the admissible extensions of `tuple` in length-lexicographic
    /// order until `visit` breaks.
    fn for_each_extension(
        &self,
        tuple: &[Run],
        visit: &mut dyn FnMut(&Run) -> ControlFlow<()>,
    ) -> Result<(), FomcError>;

    fn extensions(&self, tuple: &[Run]) -> Result<Vec<Run>, FomcError> {
        let mut out = Vec::new();
        self.for_each_extension(tuple, &mut |r| {
            out.push(r.clone());
            ControlFlow::Continue(())
        })?;
        Ok(out)
    }

    /// Parameters and where they came from.
    fn describe(&self) -> String;
}

/// Every run of length at most `depth`, at every arity.
#[derive(Debug, Clone)]
pub struct UniformConstraint {
    pub depth: usize,
    runs: Vec<Run>,
}

impl UniformConstraint {
    pub fn new(sys: &PushdownSystem, depth: usize, cap: usize) -> Result<Self, FomcError> {
        let mut runs = Vec::new();
        let stats = walk_runs(sys, &sys.initial_configuration(), depth, Some(cap), |r| {
            runs.push(r.clone());
            WalkControl::Expand
        });
        if stats.truncated && runs.len() >= cap {
            return Err(NptError::SizeLimit { cap }.into());
        }
        Ok(UniformConstraint { depth, runs })
    }

    pub fn runs(&self) -> &[Run] {
        &self.runs
    }
}

impl Constraint for UniformConstraint {
    fn admits(&self, tuple: &[Run]) -> bool {
        tuple.iter().all(|r| r.len() <= self.depth)
    }

    fn for_each_extension(
        &self,
        _tuple: &[Run],
        visit: &mut dyn FnMut(&Run) -> ControlFlow<()>,
    ) -> Result<(), FomcError> {
        for r in &self.runs {
            if visit(r).is_break() {
                break;
            }
        }
        Ok(())
    }

    fn describe(&self) -> String {
        format!(
            "uniform: all runs of length <= {} ({} runs)",
            self.depth,
            self.runs.len()
        )
    }
}

fn lookup<'a, T>(env: &'a [(String, T)], x: &str) -> Result<&'a T, FomcError> {
    env.iter()
        .rev()
        .find(|(v, _)| v == x)
        .map(|(_, t)| t)
        .ok_or_else(|| FomcError::UnboundVariable(x.to_string()))
}

/// The atoms of a structure with elements of type `T`.
trait Atoms<T> {
    fn eq(&self, a: &T, b: &T) -> bool;
    fn edge(&self, a: &T, b: &T, index: Option<usize>) -> bool;
    fn jump(&self, a: &T, b: &T) -> bool;
    fn root(&self, a: &T) -> bool;
}

fn atom<T, A: Atoms<T>>(s: &A, f: &Formula, env: &[(String, T)]) -> Result<Option<bool>, FomcError> {
    Ok(Some(match f {
        Formula::Eq(x, y) => s.eq(lookup(env, x)?, lookup(env, y)?),
        Formula::Edge(x, y) => s.edge(lookup(env, x)?, lookup(env, y)?, None),
        Formula::EdgeAt(i, x, y) => s.edge(lookup(env, x)?, lookup(env, y)?, Some(*i)),
        Formula::Jump(x, y) => s.jump(lookup(env, x)?, lookup(env, y)?),
        Formula::Root(x) => s.root(lookup(env, x)?),
        _ => return Ok(None),
    }))
}

struct Finite {
    nodes: usize,
    root: usize,
    delta: HashMap<(usize, usize), usize>,
    jumps: HashSet<(usize, usize)>,
}

impl Atoms<usize> for Finite {
    fn eq(&self, a: &usize, b: &usize) -> bool {
        a == b
    }

    fn edge(&self, a: &usize, b: &usize, index: Option<usize>) -> bool {
        self.delta.get(&(*a, *b)).is_some_and(|&d| index.is_none_or(|i| i == d))
    }

    fn jump(&self, a: &usize, b: &usize) -> bool {
        self.jumps.contains(&(*a, *b))
    }

    fn root(&self, a: &usize) -> bool {
        *a == self.root
    }
}

fn eval_finite(s: &Finite, f: &Formula, env: &mut Vec<(String, usize)>) -> Result<bool, FomcError> {
    if let Some(v) = atom(s, f, env)? {
        return Ok(v);
    }
    match f {
        Formula::Not(g) => Ok(!eval_finite(s, g, env)?),
        Formula::And(a, b) => Ok(eval_finite(s, a, env)? && eval_finite(s, b, env)?),
        Formula::Or(a, b) => Ok(eval_finite(s, a, env)? || eval_finite(s, b, env)?),
        Formula::Exists(x, g) | Formula::Forall(x, g) => {
            let want = matches!(f, Formula::Exists(..));
            for v in 0..s.nodes {
                env.push((x.clone(), v));
                let r = eval_finite(s, g, env);
                env.pop();
                if r? == want {
                    return Ok(want);
                }
            }
            Ok(!want)
        }
        _ => unreachable!("atoms handled above"),
    }
}

/// Standard evaluation on a truncation seen as a finite structure.
pub fn check_truncation(t: &Truncation, f: &Formula, assignment: &[(String, Run)]) -> Result<bool, FomcError> {
    let mut delta = HashMap::new();
    let mut jumps = HashSet::new();
    for &(a, b, kind) in &t.edges {
        match kind {
            EdgeKind::Delta(d) => {
                delta.insert((a, b), d);
            }
            EdgeKind::Jump => {
                jumps.insert((a, b));
            }
            EdgeKind::Plus => {}
        }
    }
    let s = Finite {
        nodes: t.nodes.len(),
        root: t.nodes.iter().position(Run::is_empty).unwrap_or(usize::MAX),
        delta,
        jumps,
    };
    let mut env = Vec::new();
    for (x, r) in assignment {
        let i = t.node_index(r).ok_or_else(|| FomcError::OutsideStructure(x.clone()))?;
        env.push((x.clone(), i));
    }
    eval_finite(&s, f, &mut env)
}

/// [`check_truncation`] on the depth-`depth` truncation.
pub fn check_bounded(
    sys: &PushdownSystem,
    f: &Formula,
    depth: usize,
    assignment: &[(String, Run)],
) -> Result<bool, FomcError> {
    let t = truncate(sys, depth)?;
    check_truncation(&t, f, assignment)
}

struct Runs;

impl Atoms<Run> for Runs {
    fn eq(&self, a: &Run, b: &Run) -> bool {
        a == b
    }

    fn edge(&self, a: &Run, b: &Run, index: Option<usize>) -> bool {
        is_delta_edge(a, b) && index.is_none_or(|i| b.last_step() == Some(i))
    }

    fn jump(&self, a: &Run, b: &Run) -> bool {
        is_jump_edge(a, b)
    }

    fn root(&self, a: &Run) -> bool {
        a.is_empty()
    }
}

fn eval_runs(c: &dyn Constraint, f: &Formula, env: &mut Vec<(String, Run)>) -> Result<bool, FomcError> {
    if let Some(v) = atom(&Runs, f, env)? {
        return Ok(v);
    }
    match f {
        Formula::Not(g) => Ok(!eval_runs(c, g, env)?),
        Formula::And(a, b) => Ok(eval_runs(c, a, env)? && eval_runs(c, b, env)?),
        Formula::Or(a, b) => Ok(eval_runs(c, a, env)? || eval_runs(c, b, env)?),
        Formula::Exists(x, g) | Formula::Forall(x, g) => {
            let want = matches!(f, Formula::Exists(..));
            let tuple: Vec<Run> = env.iter().map(|(_, r)| r.clone()).collect();
            let mut found = false;
            let mut failure = None;
            c.for_each_extension(&tuple, &mut |r| {
                env.push((x.clone(), r.clone()));
                let v = eval_runs(c, g, env);
                env.pop();
                match v {
                    Ok(v) if v == want => {
                        found = true;
                        ControlFlow::Break(())
                    }
                    Ok(_) => ControlFlow::Continue(()),
                    Err(e) => {
                        failure = Some(e);
                        ControlFlow::Break(())
                    }
                }
            })?;
            if let Some(e) = failure {
                return Err(e);
            }
            Ok(if found { want } else { !want })
        }
        _ => unreachable!("atoms handled above"),
    }
}

/// Evaluates `f` with quantifiers ranging over the constraint's generator.
/// The assignment is the current tuple, in order.
pub fn s_model_check(c: &dyn Constraint, f: &Formula, assignment: &[(String, Run)]) -> Result<bool, FomcError> {
    let mut env = assignment.to_vec();
    eval_runs(c, f, &mut env)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fomc::formula::parse_formula;
    use crate::system::testing::fig1;

    #[test]
    fn bounded_examples() {
        let sys = fig1();
        let f = parse_formula("exists x. exists y. jump(x,y)").unwrap();
        assert!(check_bounded(&sys, &f, 3, &[]).unwrap());
        assert!(!check_bounded(&sys, &f, 2, &[]).unwrap());
        let f = parse_formula("exists x. jump(x,x)").unwrap();
        assert!(!check_bounded(&sys, &f, 3, &[]).unwrap());
        let f = parse_formula("exists x. x = x").unwrap();
        assert!(check_bounded(&sys, &f, 0, &[]).unwrap());
    }

    #[test]
    fn unbound_variable() {
        let sys = fig1();
        let f = parse_formula("root(x)").unwrap();
        assert_eq!(
            check_bounded(&sys, &f, 1, &[]),
            Err(FomcError::UnboundVariable("x".into()))
        );
    }

    #[test]
    fn atoms_on_an_assignment() {
        let sys = fig1();
        let c = UniformConstraint::new(&sys, 0, 100).unwrap();
        let root = Run::from_initial(&sys, &[]).unwrap();
        let one = Run::from_initial(&sys, &[0]).unwrap();
        let f = parse_formula("edge[0](x,y) & root(x) & !jump(x,y)").unwrap();
        let env = [("x".to_string(), root), ("y".to_string(), one)];
        assert!(s_model_check(&c, &f, &env).unwrap());
    }

    #[test]
    fn uniform_matches_bounded_on_examples() {
        let sys = fig1();
        let c = UniformConstraint::new(&sys, 3, 1000).unwrap();
        for text in [
            "exists x. exists y. jump(x,y)",
            "forall x. !jump(x,x)",
            "forall x. exists y. edge(x,y)",
        ] {
            let f = parse_formula(text).unwrap();
            assert_eq!(
                s_model_check(&c, &f, &[]).unwrap(),
                check_bounded(&sys, &f, 3, &[]).unwrap(),
                "{text}"
            );
        }
    }
}
