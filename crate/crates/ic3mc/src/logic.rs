//! Literals, cubes and clauses over the checker's variable space.
//!
//! Variables are dense `u32` indices. A literal packs variable and sign into a
//! single `u32` as `2 * var + sign` (sign bit 1 = negated), the same convention
//! AIGER uses, so hot loops stay branch-free and cubes can be kept sorted for
//! O(n) set operations.

use std::fmt;

/// A variable index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub u32);

/// A literal: `2 * var + sign`, sign bit 1 meaning negated.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(u32);

impl Lit {
    pub fn new(var: Var, positive: bool) -> Self {
        Lit(var.0 << 1 | (!positive as u32))
    }

    pub fn var(self) -> Var {
        Var(self.0 >> 1)
    }

    /// True for `x`, false for `¬x`.
    pub fn positive(self) -> bool {
        self.0 & 1 == 0
    }

    pub fn code(self) -> u32 {
        self.0
    }

    pub fn from_code(code: u32) -> Self {
        Lit(code)
    }
}

impl std::ops::Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

impl fmt::Debug for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive() {
            write!(f, "x{}", self.var().0)
        } else {
            write!(f, "!x{}", self.var().0)
        }
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Shared representation of an ordered, duplicate-free literal set.
///
/// Both [`Cube`] (conjunction) and [`Clause`] (disjunction) are thin wrappers
/// around this: sorted by variable id, at most one literal per variable.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LitSet(Vec<Lit>);

impl LitSet {
    /// Builds a set from arbitrary literals: sorts, removes duplicates.
    /// Returns `None` if some variable occurs with both signs.
    fn normalize(mut lits: Vec<Lit>) -> Option<Self> {
        lits.sort_unstable();
        lits.dedup();
        for w in lits.windows(2) {
            if w[0].var() == w[1].var() {
                return None;
            }
        }
        Some(LitSet(lits))
    }

    fn negate(&self) -> LitSet {
        // Negation preserves the variable order, so no re-sort is needed.
        LitSet(self.0.iter().map(|&l| !l).collect())
    }

    /// True iff `self ⊆ other` as literal sets. Both sides are sorted, so a
    /// single merge pass suffices.
    fn contains_all_of(other: &LitSet, sub: &LitSet) -> bool {
        if sub.0.len() > other.0.len() {
            return false;
        }
        let mut it = other.0.iter();
        'outer: for &l in &sub.0 {
            for &o in it.by_ref() {
                match o.cmp(&l) {
                    std::cmp::Ordering::Less => continue,
                    std::cmp::Ordering::Equal => continue 'outer,
                    std::cmp::Ordering::Greater => return false,
                }
            }
            return false;
        }
        true
    }

    fn intersect(&self, other: &LitSet) -> LitSet {
        let mut out = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.push(self.0[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        LitSet(out)
    }
}

impl fmt::Debug for LitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for l in &self.0 {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{l:?}")?;
            first = false;
        }
        Ok(())
    }
}

macro_rules! litset_wrapper {
    ($name:ident, $doc:literal) => {
        #[doc = $doc]
        #[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
        pub struct $name(LitSet);

        impl $name {
            /// Builds from arbitrary literals (sorted, deduplicated).
            /// Returns `None` when a variable occurs with both signs.
            pub fn try_new(lits: Vec<Lit>) -> Option<Self> {
                LitSet::normalize(lits).map(Self)
            }

            /// Like [`Self::try_new`] but panics on a sign conflict; for
            /// literal sets built from models or other conflict-free sources.
            pub fn new(lits: Vec<Lit>) -> Self {
                Self::try_new(lits).expect("variable occurs with both signs")
            }

            pub fn lits(&self) -> &[Lit] {
                &self.0 .0
            }

            pub fn len(&self) -> usize {
                self.0 .0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0 .0.is_empty()
            }

            pub fn contains(&self, l: Lit) -> bool {
                self.0 .0.binary_search(&l).is_ok()
            }

            /// True iff `self ⊆ other` as literal sets — `self` is the
            /// stronger clause / the more general blocked cube.
            pub fn subsumes(&self, other: &Self) -> bool {
                LitSet::contains_all_of(&other.0, &self.0)
            }

            /// The literals common to `self` and `other`.
            pub fn intersect(&self, other: &Self) -> Self {
                Self(self.0.intersect(&other.0))
            }

            /// Removes one literal; the remaining set stays ordered.
            pub fn without(&self, l: Lit) -> Self {
                let mut lits = self.0 .0.clone();
                lits.retain(|&x| x != l);
                Self(LitSet(lits))
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}(", stringify!($name))?;
                fmt::Debug::fmt(&self.0, f)?;
                write!(f, ")")
            }
        }
    };
}

litset_wrapper!(Cube, "A conjunction of literals over state variables.");
litset_wrapper!(Clause, "A disjunction of literals.");

impl Cube {
    /// `¬cube` — the clause with every literal negated.
    pub fn negate(&self) -> Clause {
        Clause(self.0.negate())
    }

    /// Decodes a cube that fully assigns the contiguous variable block
    /// `first..first + len` into a bit vector (`bits[i]` is the phase of
    /// variable `first + i`). Returns `None` unless the cube mentions
    /// exactly that block, each variable once.
    pub fn as_bits(&self, first: Var, len: usize) -> Option<Vec<bool>> {
        if self.len() != len {
            return None;
        }
        // Literals are kept sorted by variable, so a full assignment over a
        // contiguous block must line up index-by-index.
        let mut bits = Vec::with_capacity(len);
        for (i, l) in self.lits().iter().enumerate() {
            if l.var().0 != first.0 + i as u32 {
                return None;
            }
            bits.push(l.positive());
        }
        Some(bits)
    }
}

impl Clause {
    /// `¬clause` — the cube with every literal negated.
    pub fn negate(&self) -> Cube {
        Cube(self.0.negate())
    }
}
