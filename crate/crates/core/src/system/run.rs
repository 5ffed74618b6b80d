use std::cmp::Ordering;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use super::{PushdownSystem, StateId, SystemError};
use crate::stack::Stack;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    pub state: StateId,
    pub stack: Stack,
}

impl Configuration {
    pub fn new(state: StateId, stack: Stack) -> Self {
        Configuration { state, stack }
    }

    pub fn width(&self) -> usize {
        self.stack.width()
    }
}

/// A run: a start configuration and the transition indices applied to it.
/// Identity is the pair (start, steps); configurations are memoized.
#[derive(Debug, Clone)]
pub struct Run {
    steps: Vec<u32>,
    configs: Arc<Vec<Configuration>>,
}

impl PartialEq for Run {
    fn eq(&self, other: &Self) -> bool {
        self.steps == other.steps && self.configs[0] == other.configs[0]
    }
}

impl Eq for Run {}

impl Hash for Run {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.configs[0].hash(state);
        self.steps.hash(state);
    }
}

impl Ord for Run {
    /// Length-lexicographic on the step sequence, ties broken by the start.
    fn cmp(&self, other: &Self) -> Ordering {
        self.steps
            .len()
            .cmp(&other.steps.len())
            .then_with(|| self.steps.cmp(&other.steps))
            .then_with(|| self.configs[0].cmp(&other.configs[0]))
    }
}

impl PartialOrd for Run {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Run {
    pub fn empty(start: Configuration) -> Run {
        Run {
            steps: Vec::new(),
            configs: Arc::new(vec![start]),
        }
    }

    /// Replays `steps` from `start`, validating every step.
    pub fn replay(sys: &PushdownSystem, start: Configuration, steps: &[usize]) -> Result<Run, SystemError> {
        if steps.len() > u32::MAX as usize {
            return Err(SystemError::Capacity("run longer than 2^32 steps".into()));
        }
        let mut configs = Vec::with_capacity(steps.len() + 1);
        configs.push(start);
        for (i, &d) in steps.iter().enumerate() {
            let next = sys.step(&configs[i], d).map_err(|e| match e {
                SystemError::Inapplicable { transition, .. } => SystemError::Inapplicable {
                    position: i,
                    transition,
                },
                other => other,
            })?;
            configs.push(next);
        }
        Ok(Run {
            steps: steps.iter().map(|&d| d as u32).collect(),
            configs: Arc::new(configs),
        })
    }

    pub fn from_initial(sys: &PushdownSystem, steps: &[usize]) -> Result<Run, SystemError> {
        Run::replay(sys, sys.initial_configuration(), steps)
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn steps(&self) -> Vec<usize> {
        self.steps.iter().map(|&d| d as usize).collect()
    }

    pub fn step_at(&self, i: usize) -> usize {
        self.steps[i] as usize
    }

    pub fn last_step(&self) -> Option<usize> {
        self.steps.last().map(|&d| d as usize)
    }

    pub fn start(&self) -> &Configuration {
        &self.configs[0]
    }

    pub fn last(&self) -> &Configuration {
        &self.configs[self.steps.len()]
    }

    /// `ρ(i)`.
    pub fn config(&self, i: usize) -> &Configuration {
        &self.configs[i]
    }

    pub fn configs(&self) -> &[Configuration] {
        &self.configs[..=self.steps.len()]
    }

    /// Width of the final stack, written `|ρ|`.
    pub fn width(&self) -> usize {
        self.last().stack.width()
    }

    pub fn state(&self) -> StateId {
        self.last().state
    }

    pub fn stack(&self) -> &Stack {
        &self.last().stack
    }

    /// The initial segment of length `len`.
    pub fn prefix(&self, len: usize) -> Run {
        assert!(len <= self.len());
        Run {
            steps: self.steps[..len].to_vec(),
            configs: Arc::new(self.configs[..=len].to_vec()),
        }
    }

    /// The subrun between positions `i` and `j`.
    pub fn segment(&self, i: usize, j: usize) -> Run {
        assert!(i <= j && j <= self.len());
        Run {
            steps: self.steps[i..j].to_vec(),
            configs: Arc::new(self.configs[i..=j].to_vec()),
        }
    }

    /// `self ⪯ other`.
    pub fn is_prefix_of(&self, other: &Run) -> bool {
        self.len() <= other.len() && self.start() == other.start() && other.steps.starts_with(&self.steps)
    }

    /// Appends one transition.
    pub fn extend(&self, sys: &PushdownSystem, delta: usize) -> Result<Run, SystemError> {
        let next = sys.step(self.last(), delta).map_err(|e| match e {
            SystemError::Inapplicable { transition, .. } => SystemError::Inapplicable {
                position: self.len(),
                transition,
            },
            other => other,
        })?;
        Ok(self.extend_with(delta, next))
    }

    /// Appends a step whose result has already been computed.
    pub(crate) fn extend_with(&self, delta: usize, next: Configuration) -> Run {
        let mut steps = Vec::with_capacity(self.steps.len() + 1);
        steps.extend_from_slice(&self.steps);
        steps.push(delta as u32);
        let mut configs = Vec::with_capacity(self.steps.len() + 2);
        configs.extend_from_slice(self.configs());
        configs.push(next);
        Run {
            steps,
            configs: Arc::new(configs),
        }
    }

    /// `π∘ρ`.
    pub fn compose(&self, rho: &Run) -> Result<Run, SystemError> {
        if self.last() != rho.start() {
            return Err(SystemError::EndpointMismatch);
        }
        let mut steps = self.steps.clone();
        steps.extend_from_slice(&rho.steps);
        let mut configs = self.configs().to_vec();
        configs.extend_from_slice(&rho.configs()[1..]);
        Ok(Run {
            steps,
            configs: Arc::new(configs),
        })
    }

    /// Checks that the memoized configurations agree with a fresh replay.
    pub fn revalidate(&self, sys: &PushdownSystem) -> bool {
        match Run::replay(sys, self.start().clone(), &self.steps()) {
            Ok(r) => r.configs() == self.configs(),
            Err(_) => false,
        }
    }

    pub fn format_steps(&self) -> String {
        self.steps.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::testing::fig1;

    #[test]
    fn compose_and_prefix() {
        let sys = fig1();
        let pi = Run::from_initial(&sys, &[0, 1]).unwrap();
        let tail = Run::replay(&sys, pi.last().clone(), &[3]).unwrap();
        let whole = pi.compose(&tail).unwrap();
        assert_eq!(whole.len(), pi.len() + tail.len());
        assert_eq!(whole, Run::from_initial(&sys, &[0, 1, 3]).unwrap());
        assert_eq!(pi.compose(&Run::empty(pi.last().clone())).unwrap(), pi);
        assert_eq!(pi.compose(&pi), Err(SystemError::EndpointMismatch));
        assert!(pi.is_prefix_of(&whole));
        assert_eq!(whole.prefix(2), pi);
        assert!(whole.revalidate(&sys));
    }

    #[test]
    fn replay_reports_position() {
        let sys = fig1();
        assert_eq!(
            Run::from_initial(&sys, &[0, 3]),
            Err(SystemError::Inapplicable {
                position: 1,
                transition: 3
            })
        );
    }
}
