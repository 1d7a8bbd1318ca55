//! The monotone frame sequence F_0..F_k in delta encoding.
//!
//! Each lemma is stored once, at the highest frame that contains it; the
//! lemma set of F_i (i ≥ 1) is the union of the delta levels ≥ i, and F_0 is
//! the initial cube. Monotone containment F_{i+1} ⊆ F_i is structural under
//! this encoding, and propagation's "F_i \ F_{i+1}" iteration is exactly one
//! delta level.

use crate::logic::{Clause, Cube};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FrameError {
    #[error("no equal adjacent frame pair: invariant extraction requires a fixpoint")]
    NotAtFixpoint,
}

/// Result of inserting a lemma at level i.
#[derive(Debug, PartialEq, Eq)]
pub enum Insert {
    /// An existing lemma at level ≥ i already subsumes the new one; nothing
    /// changed (set semantics also lands here for exact duplicates).
    Subsumed,
    /// Inserted; `removed` lists lemmas the new one subsumed, with the level
    /// they were removed from (solver databases keep those clauses — they are
    /// implied by the new lemma, so they stay sound and merely redundant).
    Added { removed: Vec<(usize, Clause)> },
}

pub struct FrameSequence {
    init: Cube,
    /// delta[i] = lemmas whose highest frame is exactly i, in insertion
    /// order. delta[0] stays empty — frame 0 is the initial cube.
    delta: Vec<Vec<Clause>>,
}

impl FrameSequence {
    /// Starts at k = 1 with F_1 = ⊤.
    pub fn new(init: Cube) -> Self {
        FrameSequence {
            init,
            delta: vec![Vec::new(), Vec::new()],
        }
    }

    /// Current top frame index k.
    pub fn k(&self) -> usize {
        self.delta.len() - 1
    }

    pub fn initial_cube(&self) -> &Cube {
        &self.init
    }

    /// Opens the next major iteration: F_{k+1} = ⊤.
    pub fn push_frame(&mut self) {
        self.delta.push(Vec::new());
    }

    /// Lemmas whose highest frame is exactly i (the F_i \ F_{i+1} view).
    pub fn level(&self, i: usize) -> &[Clause] {
        &self.delta[i]
    }

    /// Materializes F_i's full lemma set (i ≥ 1): union of levels ≥ i, in
    /// (level, insertion) order.
    pub fn frame_lemmas(&self, i: usize) -> Vec<Clause> {
        assert!(i >= 1, "frame 0 is the initial cube, not a lemma set");
        self.delta[i..]
            .iter()
            .flat_map(|lvl| lvl.iter().cloned())
            .collect()
    }

    /// Inserts the lemma ¬gen at frames 1..=i with two-way subsumption:
    /// skipped when an existing lemma at level ≥ i subsumes it; existing
    /// lemmas at levels ≤ i that it subsumes are removed.
    pub fn insert(&mut self, gen: &Cube, i: usize) -> Insert {
        debug_assert!(i >= 1 && i <= self.k());
        let clause = gen.negate();
        for level in self.delta[i..].iter() {
            if level.iter().any(|old| old.subsumes(&clause)) {
                return Insert::Subsumed;
            }
        }
        let mut removed = Vec::new();
        for (j, level) in self.delta[..=i].iter_mut().enumerate() {
            let mut idx = 0;
            while idx < level.len() {
                if clause.subsumes(&level[idx]) {
                    removed.push((j, level.remove(idx)));
                } else {
                    idx += 1;
                }
            }
        }
        self.delta[i].push(clause);
        Insert::Added { removed }
    }

    /// Moves one lemma of level i up to level i+1 (propagation step). The
    /// lemma joins F_{i+1}, so any existing F_{i+1} lemma it subsumes is
    /// removed; the reverse direction cannot occur (a stronger lemma at a
    /// higher level would have blocked this one's insertion).
    pub fn promote(&mut self, i: usize, lemma: &Clause) -> Vec<Clause> {
        let pos = self.delta[i]
            .iter()
            .position(|c| c == lemma)
            .expect("promoted lemma must live at its level");
        let clause = self.delta[i].remove(pos);
        let mut removed = Vec::new();
        let above = &mut self.delta[i + 1];
        let mut idx = 0;
        while idx < above.len() {
            if clause.subsumes(&above[idx]) {
                removed.push(above.remove(idx));
            } else {
                idx += 1;
            }
        }
        debug_assert!(
            !above.iter().any(|old| old.subsumes(&clause)),
            "a subsuming lemma above would have blocked this insertion"
        );
        above.push(clause);
        removed
    }

    /// True iff F_i = F_{i+1}, i.e. the delta level i is empty.
    pub fn equal_pair(&self, i: usize) -> bool {
        self.delta[i].is_empty()
    }

    /// The inductive invariant at a fixpoint level: F_{i}'s lemma set where
    /// F_i = F_{i+1}.
    pub fn extract_invariant(&self) -> Result<Vec<Clause>, FrameError> {
        for i in 1..self.k() {
            if self.equal_pair(i) {
                return Ok(self.frame_lemmas(i + 1));
            }
        }
        Err(FrameError::NotAtFixpoint)
    }

    /// Structural audit: F_{i+1} ⊆ F_i over materialized lemma sets, and
    /// per-level subsumption canonicity (no level keeps a lemma another lemma
    /// of the same level subsumes).
    pub fn audit_containment(&self) -> Result<(), String> {
        for i in 1..self.k() {
            let hi = self.frame_lemmas(i + 1);
            let lo = self.frame_lemmas(i);
            for lemma in &hi {
                if !lo.contains(lemma) {
                    return Err(format!("lemma of F_{} missing from F_{}", i + 1, i));
                }
            }
        }
        for (i, level) in self.delta.iter().enumerate() {
            for (a_idx, a) in level.iter().enumerate() {
                for (b_idx, b) in level.iter().enumerate() {
                    if a_idx != b_idx && a.subsumes(b) {
                        return Err(format!(
                            "level {i} keeps a subsumed lemma pair ({a:?} ⊆ {b:?})"
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}
