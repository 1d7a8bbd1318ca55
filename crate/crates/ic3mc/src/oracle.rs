//! Explicit-state oracle: brute-force reachability by netlist simulation.
//!
//! The simulator evaluates the and-inverter graph directly and shares no code
//! with the CNF encoding, so it can serve as an independent referee for the
//! checker's verdicts on small circuits. Sixty-four input assignments are
//! evaluated per pass by packing them into the lanes of a `u64`.
//!
//! A state is encoded as a `u32` whose bit `i` is the value of latch `i`.

use crate::transys::TransitionSystem;
use thiserror::Error;

/// Hard cap on `state bits + input bits` for explicit enumeration.
pub const MAX_UNIVERSE_BITS: u32 = 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error(
        "explicit enumeration over {state_bits} latches and {input_bits} inputs \
         exceeds the 24-bit cap"
    )]
    TooLarge { state_bits: u32, input_bits: u32 },
}

/// A set of states over a small universe, stored as a flat bitset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateSet {
    universe_bits: u32,
    words: Vec<u64>,
    count: u64,
}

impl StateSet {
    /// An empty set over `2^universe_bits` states.
    ///
    /// # Panics
    /// If `universe_bits` exceeds [`MAX_UNIVERSE_BITS`].
    pub fn new(universe_bits: u32) -> Self {
        assert!(
            universe_bits <= MAX_UNIVERSE_BITS,
            "state universe of {universe_bits} bits exceeds the {MAX_UNIVERSE_BITS}-bit cap"
        );
        let states = 1u64 << universe_bits;
        StateSet {
            universe_bits,
            words: vec![0; states.div_ceil(64) as usize],
            count: 0,
        }
    }

    /// Adds `s`; returns true iff it was not already present.
    pub fn insert(&mut self, s: u32) -> bool {
        debug_assert!((s as u64) < (1u64 << self.universe_bits));
        let word = &mut self.words[(s >> 6) as usize];
        let bit = 1u64 << (s & 63);
        if *word & bit != 0 {
            false
        } else {
            *word |= bit;
            self.count += 1;
            true
        }
    }

    pub fn contains(&self, s: u32) -> bool {
        debug_assert!((s as u64) < (1u64 << self.universe_bits));
        self.words[(s >> 6) as usize] & (1u64 << (s & 63)) != 0
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn universe_bits(&self) -> u32 {
        self.universe_bits
    }

    /// All member states, ascending.
    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        (0..1u64 << self.universe_bits)
            .map(|s| s as u32)
            .filter(move |&s| self.contains(s))
    }
}

/// Result of an exhaustive forward exploration.
#[derive(Debug, PartialEq, Eq)]
pub struct Reachability {
    /// Every state reachable from the initial states.
    pub reachable: StateSet,
    /// Length of a shortest path from an initial state to an assignment that
    /// asserts the bad literal (`0` means some initial state does, possibly
    /// only under particular inputs), or `None` if the system is safe.
    pub cex_depth: Option<u32>,
}

/// Lane masks for the first six input bits: bit `t` of `LANE_MASK[j]` equals
/// input-bit `j` of lane `t`, so the 64 lanes of one word sweep all
/// combinations of inputs 0..6. Further input bits are swept block-by-block.
const LANE_MASK: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

fn broadcast(bit: bool) -> u64 {
    if bit {
        !0
    } else {
        0
    }
}

fn lit_val(values: &[u64], lit: u32) -> u64 {
    let v = values[(lit >> 1) as usize];
    if lit & 1 == 1 {
        !v
    } else {
        v
    }
}

/// Evaluates every AIGER variable under the given latch/input lane patterns.
/// `values` is indexed by AIGER variable; slot 0 is the constant-false var.
fn eval_netlist(
    ts: &TransitionSystem,
    values: &mut [u64],
    latch_bit: impl Fn(usize) -> u64,
    input_bit: impl Fn(usize) -> u64,
) {
    values[0] = 0;
    for (i, &v) in ts.latch_aigvar.iter().enumerate() {
        values[v as usize] = latch_bit(i);
    }
    for (i, &v) in ts.input_aigvar.iter().enumerate() {
        values[v as usize] = input_bit(i);
    }
    for g in &ts.gates {
        values[(g.lhs >> 1) as usize] = lit_val(values, g.rhs0) & lit_val(values, g.rhs1);
    }
}

/// Runs one concrete step. Returns the successor latch values along with
/// whether `state`/`input` assert the bad literal combinationally (i.e.
/// before the step is taken).
///
/// # Panics
/// If `state` or `input` have the wrong length.
pub fn step(ts: &TransitionSystem, state: &[bool], input: &[bool]) -> (Vec<bool>, bool) {
    assert_eq!(state.len(), ts.num_state_vars() as usize, "state width");
    assert_eq!(input.len(), ts.num_input_vars() as usize, "input width");
    let mut values = vec![0u64; ts.aig_max_var as usize + 1];
    eval_netlist(
        ts,
        &mut values,
        |i| broadcast(state[i]),
        |i| broadcast(input[i]),
    );
    let next = ts
        .next_lit
        .iter()
        .map(|&l| lit_val(&values, l) != 0)
        .collect();
    let bad = lit_val(&values, ts.bad_lit) != 0;
    (next, bad)
}

/// Explores the full reachable state space breadth-first and reports the
/// minimal counterexample depth, if any. Fails up front when the combined
/// latch/input width exceeds [`MAX_UNIVERSE_BITS`].
pub fn brute_force_reachable(ts: &TransitionSystem) -> Result<Reachability, OracleError> {
    let nl = ts.num_state_vars();
    let ni = ts.num_input_vars();
    if nl + ni > MAX_UNIVERSE_BITS {
        return Err(OracleError::TooLarge {
            state_bits: nl,
            input_bits: ni,
        });
    }

    // Expand unconstrained reset bits into the full set of initial states.
    let mut reached = StateSet::new(nl);
    let mut frontier: Vec<u32> = Vec::new();
    let mut base = 0u32;
    let mut free = Vec::new();
    for (i, init) in ts.init.iter().enumerate() {
        match init {
            Some(true) => base |= 1 << i,
            Some(false) => {}
            None => free.push(i),
        }
    }
    for m in 0..1u64 << free.len() {
        let mut s = base;
        for (j, &i) in free.iter().enumerate() {
            if (m >> j) & 1 == 1 {
                s |= 1 << i;
            }
        }
        if reached.insert(s) {
            frontier.push(s);
        }
    }

    // Input sweep geometry: lanes cover input bits 0..6, blocks the rest.
    let blocks = 1u64 << ni.saturating_sub(6);
    let lanes: u32 = if ni >= 6 { 64 } else { 1 << ni };
    let valid: u64 = if ni >= 6 { !0 } else { (1u64 << lanes) - 1 };

    let mut values = vec![0u64; ts.aig_max_var as usize + 1];
    let mut next_vals = vec![0u64; nl as usize];
    let mut next_frontier = Vec::new();
    let mut cex_depth = None;
    let mut depth = 0u32;

    while !frontier.is_empty() {
        for &s in &frontier {
            for b in 0..blocks {
                eval_netlist(
                    ts,
                    &mut values,
                    |i| broadcast((s >> i) & 1 == 1),
                    |i| {
                        if i < 6 {
                            LANE_MASK[i]
                        } else {
                            broadcast((b >> (i - 6)) & 1 == 1)
                        }
                    },
                );
                // Waves are processed in breadth order, so the first hit is
                // at minimal depth.
                if cex_depth.is_none() && lit_val(&values, ts.bad_lit) & valid != 0 {
                    cex_depth = Some(depth);
                }
                for (i, &l) in ts.next_lit.iter().enumerate() {
                    next_vals[i] = lit_val(&values, l);
                }
                for lane in 0..lanes {
                    let mut t = 0u32;
                    for (i, &nv) in next_vals.iter().enumerate() {
                        t |= (((nv >> lane) & 1) as u32) << i;
                    }
                    if reached.insert(t) {
                        next_frontier.push(t);
                    }
                }
            }
        }
        std::mem::swap(&mut frontier, &mut next_frontier);
        next_frontier.clear();
        depth += 1;
    }

    Ok(Reachability {
        reachable: reached,
        cex_depth,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aiger::parse_aiger;
    use crate::transys::to_transition_system;

    fn sys(text: &[u8]) -> TransitionSystem {
        to_transition_system(&parse_aiger(text).unwrap()).unwrap()
    }

    /// Scalar reference BFS built on `step` only; checks the lane-packed
    /// explorer against per-assignment evaluation.
    fn scalar_reachable(ts: &TransitionSystem) -> Reachability {
        let nl = ts.num_state_vars() as usize;
        let ni = ts.num_input_vars() as usize;
        let mut reached = StateSet::new(nl as u32);
        let mut frontier = Vec::new();
        for m in 0..1u32 << nl {
            let ok = ts
                .init
                .iter()
                .enumerate()
                .all(|(i, init)| init.is_none_or(|b| b == ((m >> i) & 1 == 1)));
            if ok && reached.insert(m) {
                frontier.push(m);
            }
        }
        let mut cex_depth = None;
        let mut depth = 0;
        while !frontier.is_empty() {
            let mut next_frontier = Vec::new();
            for &s in &frontier {
                let state: Vec<bool> = (0..nl).map(|i| (s >> i) & 1 == 1).collect();
                for y in 0..1u32 << ni {
                    let input: Vec<bool> = (0..ni).map(|i| (y >> i) & 1 == 1).collect();
                    let (next, bad) = step(ts, &state, &input);
                    if bad && cex_depth.is_none() {
                        cex_depth = Some(depth);
                    }
                    let t = next
                        .iter()
                        .enumerate()
                        .fold(0u32, |acc, (i, &b)| acc | (u32::from(b) << i));
                    if reached.insert(t) {
                        next_frontier.push(t);
                    }
                }
            }
            frontier = next_frontier;
            depth += 1;
        }
        Reachability {
            reachable: reached,
            cex_depth,
        }
    }

    #[test]
    fn state_set_basics() {
        let mut s = StateSet::new(7);
        assert_eq!(s.count(), 0);
        assert!(s.insert(5));
        assert!(!s.insert(5));
        assert!(s.insert(127));
        assert!(s.contains(5));
        assert!(!s.contains(6));
        assert_eq!(s.count(), 2);
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![5, 127]);
    }

    #[test]
    fn toggle_hits_bad_at_depth_one() {
        // Latch starts at 0 and inverts each step; bad is the latch itself.
        let ts = sys(b"aag 1 0 1 1 0\n2 3\n2\n");
        let r = brute_force_reachable(&ts).unwrap();
        assert_eq!(r.cex_depth, Some(1));
        assert_eq!(r.reachable.count(), 2);
    }

    #[test]
    fn negated_bad_hits_at_depth_zero() {
        let ts = sys(b"aag 1 0 1 1 0\n2 3\n3\n");
        let r = brute_force_reachable(&ts).unwrap();
        assert_eq!(r.cex_depth, Some(0));
    }

    #[test]
    fn constant_latch_is_safe() {
        // Identity latch stuck at its reset value 0; bad is the latch.
        let ts = sys(b"aag 1 0 1 1 0\n2 2\n2\n");
        let r = brute_force_reachable(&ts).unwrap();
        assert_eq!(r.cex_depth, None);
        assert_eq!(r.reachable.count(), 1);
        assert!(r.reachable.contains(0));
    }

    #[test]
    fn two_bit_counter_reaches_top_at_depth_three() {
        // Gray-less binary counter: bit0 toggles, bit1 xors with bit0.
        // bad = bit0 & bit1, first true at count 3.
        let ts = sys(b"aag 6 0 2 1 4\n2 3\n4 11\n12\n6 2 5\n8 4 3\n10 7 9\n12 2 4\n");
        let r = brute_force_reachable(&ts).unwrap();
        assert_eq!(r.cex_depth, Some(3));
        assert_eq!(r.reachable.count(), 4);
    }

    #[test]
    fn input_or_latch_absorbs() {
        // next(x) = x | y; bad = x. One step with y=1 reaches the bad state.
        let ts = sys(b"aag 3 1 1 1 1\n2\n4 7\n4\n6 3 5\n");
        let r = brute_force_reachable(&ts).unwrap();
        assert_eq!(r.cex_depth, Some(1));
        assert_eq!(r.reachable.count(), 2);
    }

    #[test]
    fn seven_inputs_sweep_multiple_blocks() {
        // next(x) = x | (y0 & .. & y6): only the all-ones input assignment
        // (which lives in the second 64-lane block) sets the latch.
        let ts = sys(
            b"aag 15 7 1 1 7\n2\n4\n6\n8\n10\n12\n14\n16 31\n16\n\
              18 2 4\n20 18 6\n22 20 8\n24 22 10\n26 24 12\n28 26 14\n30 17 29\n",
        );
        let r = brute_force_reachable(&ts).unwrap();
        assert_eq!(r.cex_depth, Some(1));
        assert_eq!(r.reachable.count(), 2);
    }

    #[test]
    fn unconstrained_reset_expands_initial_states() {
        // Identity latch with a free reset; bad = x holds in initial state 1.
        let ts = sys(b"aag 1 0 1 1 0\n2 2 2\n2\n");
        let r = brute_force_reachable(&ts).unwrap();
        assert_eq!(r.cex_depth, Some(0));
        assert_eq!(r.reachable.count(), 2);
    }

    #[test]
    fn step_mirrors_toggle_semantics() {
        let ts = sys(b"aag 1 0 1 1 0\n2 3\n2\n");
        assert_eq!(step(&ts, &[false], &[]), (vec![true], false));
        assert_eq!(step(&ts, &[true], &[]), (vec![false], true));
    }

    #[test]
    fn lane_packed_explorer_matches_scalar_reference() {
        for text in [
            b"aag 6 0 2 1 4\n2 3\n4 11\n12\n6 2 5\n8 4 3\n10 7 9\n12 2 4\n".as_slice(),
            b"aag 3 1 1 1 1\n2\n4 7\n4\n6 3 5\n".as_slice(),
            b"aag 15 7 1 1 7\n2\n4\n6\n8\n10\n12\n14\n16 31\n16\n\
              18 2 4\n20 18 6\n22 20 8\n24 22 10\n26 24 12\n28 26 14\n30 17 29\n"
                .as_slice(),
            b"aag 1 0 1 1 0\n2 2 2\n2\n".as_slice(),
        ] {
            let ts = sys(text);
            let fast = brute_force_reachable(&ts).unwrap();
            let slow = scalar_reachable(&ts);
            assert_eq!(fast.cex_depth, slow.cex_depth);
            assert_eq!(fast.reachable, slow.reachable);
        }
    }

    #[test]
    fn oversized_universe_is_rejected() {
        let mut text = String::from("aag 25 0 25 1 0\n");
        for v in 1..=25 {
            text.push_str(&format!("{0} {0}\n", 2 * v));
        }
        text.push_str("2\n");
        let ts = sys(text.as_bytes());
        assert_eq!(
            brute_force_reachable(&ts),
            Err(OracleError::TooLarge {
                state_bits: 25,
                input_bits: 0
            })
        );
    }
}
