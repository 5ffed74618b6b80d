//! Enriched word models and their type classification.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use super::game::{fo_equiv, Structure};
use super::{Verdict, WordTypeError};
use crate::analysis::{count_word, CountFunction, WordCounts};
use crate::stack::{Stack, Symbol, Word};
use crate::system::PushdownSystem;

/// Class of an enriched word model under rank-`k` game equivalence, relative
/// to one `(n, k, z)` registry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeId(pub u32);

/// Atomic type of position `i`, which stands for the prefix `w_{-i}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PositionColor {
    pub symbol: Symbol,
    /// Runs from the full word to `w_{-i}` (the `S^j` predicates).
    pub reach: CountFunction,
    pub returns: CountFunction,
    pub loops: CountFunction,
    pub high_loops: CountFunction,
    /// Types of `w_{-i}` at levels `0..n`.
    pub types: Vec<TypeId>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnrichedWordModel {
    pub word: Word,
    pub n: usize,
    pub k: usize,
    pub z: usize,
    /// Position 0 is the whole word.
    pub positions: Vec<PositionColor>,
    /// All counts behind the colors were certified.
    pub exact: bool,
}

impl EnrichedWordModel {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

/// Registry of class representatives per `(n, k, z)`.
#[derive(Debug, Default)]
pub struct TypeRegistry {
    classes: Mutex<HashMap<(usize, usize, usize), Vec<Structure>>>,
}

impl TypeRegistry {
    pub fn classify(&self, key: (usize, usize, usize), s: &Structure) -> TypeId {
        let reps = {
            let guard = self.classes.lock().expect("registry lock");
            guard.get(&key).cloned().unwrap_or_default()
        };
        for (i, r) in reps.iter().enumerate() {
            if fo_equiv(r, &[], s, &[], key.1) {
                return TypeId(i as u32);
            }
        }
        let mut guard = self.classes.lock().expect("registry lock");
        let list = guard.entry(key).or_default();
        // Another caller may have added classes meanwhile.
        for (i, r) in list.iter().enumerate().skip(reps.len()) {
            if fo_equiv(r, &[], s, &[], key.1) {
                return TypeId(i as u32);
            }
        }
        list.push(s.clone());
        TypeId(list.len() as u32 - 1)
    }

    /// Number of classes observed so far.
    pub fn class_count(&self, key: (usize, usize, usize)) -> usize {
        self.classes
            .lock()
            .expect("registry lock")
            .get(&key)
            .map_or(0, Vec::len)
    }
}

type TypeKey = (Word, usize, usize, usize);

/// Caches counts, models and types for one system.
pub struct WordTypes<'a> {
    sys: &'a PushdownSystem,
    budget: usize,
    context: Stack,
    counts: Mutex<HashMap<(Word, usize), Arc<WordCounts>>>,
    types: Mutex<HashMap<TypeKey, (TypeId, bool)>>,
    colors: Mutex<HashMap<PositionColor, u64>>,
    registry: TypeRegistry,
}

impl<'a> WordTypes<'a> {
    /// `budget` bounds the runs visited by each counting call.
    pub fn new(sys: &'a PushdownSystem, budget: usize) -> Result<Self, WordTypeError> {
        if sys.level() != 2 {
            return Err(WordTypeError::LevelUnsupported(sys.level()));
        }
        Ok(WordTypes {
            sys,
            budget,
            context: Stack::initial(2, sys.bottom()),
            counts: Mutex::default(),
            types: Mutex::default(),
            colors: Mutex::default(),
            registry: TypeRegistry::default(),
        })
    }

    pub fn system(&self) -> &'a PushdownSystem {
        self.sys
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn registry(&self) -> &TypeRegistry {
        &self.registry
    }

    fn counts(&self, w: &Word, z: usize) -> Result<Arc<WordCounts>, WordTypeError> {
        let key = (w.clone(), z);
        if let Some(c) = self.counts.lock().expect("counts lock").get(&key) {
            return Ok(c.clone());
        }
        let c = Arc::new(count_word(self.sys, &self.context, w, z, self.budget)?);
        self.counts.lock().expect("counts lock").insert(key, c.clone());
        Ok(c)
    }

    pub fn build_lin(&self, w: &Word, n: usize, k: usize, z: usize) -> Result<EnrichedWordModel, WordTypeError> {
        let full = self.counts(w, z)?;
        let mut exact = full.exact;
        let mut positions = Vec::with_capacity(w.len());
        for i in 0..w.len() {
            let v = w.drop_top(i).expect("i < |w|");
            let cv = self.counts(&v, z)?;
            exact &= cv.exact;
            let mut types = Vec::with_capacity(n);
            for level in 0..n {
                let (t, e) = self.type_of(&v, level, k, z)?;
                exact &= e;
                types.push(t);
            }
            positions.push(PositionColor {
                symbol: v.top(),
                reach: full.to_prefix[i].clone(),
                returns: cv.returns.clone(),
                loops: cv.loops.clone(),
                high_loops: cv.high_loops.clone(),
                types,
            });
        }
        Ok(EnrichedWordModel {
            word: w.clone(),
            n,
            k,
            z,
            positions,
            exact,
        })
    }

    /// The model as a labelled successor chain.
    pub fn structure(&self, m: &EnrichedWordModel) -> Structure {
        let mut colors = self.colors.lock().expect("colors lock");
        let labels = m
            .positions
            .iter()
            .map(|p| {
                let next = colors.len() as u64;
                *colors.entry(p.clone()).or_insert(next)
            })
            .collect();
        Structure::chain(labels)
    }

    /// `Typ^n_{k,z}(w)` and whether it rests on certified counts.
    pub fn type_of(&self, w: &Word, n: usize, k: usize, z: usize) -> Result<(TypeId, bool), WordTypeError> {
        let key = (w.clone(), n, k, z);
        if let Some(&t) = self.types.lock().expect("types lock").get(&key) {
            return Ok(t);
        }
        let model = self.build_lin(w, n, k, z)?;
        let id = self.registry.classify((n, k, z), &self.structure(&model));
        let result = (id, model.exact);
        self.types.lock().expect("types lock").insert(key, result);
        Ok(result)
    }

    /// `w1 ≡_{n,z} w2`, with `k = z`.
    pub fn word_equiv(&self, w1: &Word, w2: &Word, n: usize, z: usize) -> Result<Verdict, WordTypeError> {
        if w1 == w2 {
            return Ok(Verdict::Equivalent);
        }
        let (t1, e1) = self.type_of(w1, n, z, z)?;
        let (t2, e2) = self.type_of(w2, n, z, z)?;
        Ok(if !(e1 && e2) {
            Verdict::Indeterminate
        } else {
            Verdict::from_bool(t1 == t2)
        })
    }

    /// `s1 ≡^{n,z}_m s2`: the topmost words compared pairwise.
    pub fn stack_equiv(&self, s1: &Stack, s2: &Stack, n: usize, z: usize, m: usize) -> Result<Verdict, WordTypeError> {
        if s1.level() != 2 || s2.level() != 2 {
            return Err(WordTypeError::LevelUnsupported(s1.level().max(s2.level())));
        }
        if s1 == s2 {
            return Ok(Verdict::Equivalent);
        }
        let (a, b) = (s1.words(), s2.words());
        let depth = if a.len() > m && b.len() > m {
            m + 1
        } else if a.len() == b.len() {
            a.len()
        } else {
            return Ok(Verdict::Distinct);
        };
        let mut verdict = Verdict::Equivalent;
        for i in 0..depth {
            let v = self.word_equiv(a[a.len() - 1 - i], b[b.len() - 1 - i], n, z)?;
            verdict = verdict.and(v);
            if verdict == Verdict::Distinct {
                break;
            }
        }
        Ok(verdict)
    }

    /// Number of `≡_{n,z}` classes observed so far.
    pub fn observed_classes(&self, n: usize, z: usize) -> usize {
        self.registry.class_count((n, z, z))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::testing::fig1;
    use crate::system::StateId;

    #[test]
    fn bottom_word_model() {
        let sys = fig1();
        let wt = WordTypes::new(&sys, 100_000).unwrap();
        let w = sys.parse_word("_").unwrap();
        let m = wt.build_lin(&w, 0, 2, 2).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m.positions[0].symbol, sys.bottom());
        assert_eq!(m.positions[0].reach, m.positions[0].loops);
        assert!(m.exact);
    }

    #[test]
    fn return_code_of_a() {
        let sys = fig1();
        let wt = WordTypes::new(&sys, 100_000).unwrap();
        let w = sys.parse_word("_.a").unwrap();
        let m = wt.build_lin(&w, 0, 2, 2).unwrap();
        assert_eq!(m.positions[0].symbol, sys.symbol_by_name("a").unwrap());
        assert_eq!(m.positions[0].returns.get(StateId(1), StateId(2)), 2);
    }

    #[test]
    fn counting_letters() {
        let sys = fig1();
        let wt = WordTypes::new(&sys, 100_000).unwrap();
        let a = sys.parse_word("_.a").unwrap();
        let aa = sys.parse_word("_.a.a").unwrap();
        assert_eq!(wt.word_equiv(&a, &a, 0, 2).unwrap(), Verdict::Equivalent);
        assert_eq!(wt.word_equiv(&a, &aa, 0, 2).unwrap(), Verdict::Distinct);
    }
}
