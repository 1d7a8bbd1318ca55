//! Self-certification of verdicts.
//!
//! A safe verdict carries an inductive invariant and an unsafe verdict
//! carries a concrete input trace. Both artifacts are validated from scratch:
//! the invariant with fresh SAT solvers over a fresh transition encoding, the
//! trace on the netlist simulator. Neither check trusts the frame bookkeeping
//! that produced the artifact.

use crate::logic::{Clause, Cube, Var};
use crate::oracle;
use crate::sat::{SatCtx, SatError};
use crate::transys::{encode_transition, TransitionSystem};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CertifyError {
    #[error("invariant clause {index} mentions a non-state variable")]
    ClauseShape { index: usize },
    #[error("invariant clause {index} excludes an initial state")]
    ClauseOpenAtInit { index: usize },
    #[error("invariant clause {index} is not inductive relative to the candidate")]
    ClauseNotInductive { index: usize },
    #[error("a state satisfying the candidate invariant asserts the bad literal")]
    BadStateInside,
    #[error("trace is empty")]
    EmptyTrace,
    #[error("trace step {step} does not fully assign the state and input variables")]
    BadStateShape { step: usize },
    #[error("trace does not start in an initial state (latch {latch} differs from reset)")]
    TraceNotInitial { latch: usize },
    #[error("trace step {step} is not a transition of the circuit")]
    TraceStepMismatch { step: usize },
    #[error("trace never asserts the bad literal")]
    TraceEndsClean,
    #[error("solver gave up during certification")]
    Solver(#[from] SatError),
}

/// Checks that `inv` (a conjunction of clauses over the state variables) is
/// an inductive invariant establishing safety:
///
/// 1. every initial state satisfies every clause,
/// 2. the conjunction is closed under the transition relation, and
/// 3. no state satisfying the conjunction asserts the bad literal.
///
/// Each condition is discharged by unsatisfiability queries on solvers built
/// here, independent of whatever produced the candidate.
pub fn check_invariant(
    ts: &TransitionSystem,
    inv: &[Clause],
    seed: u64,
) -> Result<(), CertifyError> {
    let cnf = encode_transition(ts);
    let nl = ts.num_state_vars();
    let ni = ts.num_input_vars();

    // Shape first: a stray variable must not reach the solvers at all.
    for (index, clause) in inv.iter().enumerate() {
        if clause.lits().iter().any(|l| l.var().0 >= nl) {
            return Err(CertifyError::ClauseShape { index });
        }
    }

    // 1. I ∧ ¬clause is unsat for each clause.
    let mut at_init = SatCtx::new(&cnf, nl, ni, Some(&ts.initial_cube()), seed);
    for (index, clause) in inv.iter().enumerate() {
        if at_init.solve_assuming(clause.negate().lits())? {
            return Err(CertifyError::ClauseOpenAtInit { index });
        }
    }

    // 2. INV ∧ T ∧ ¬clause' is unsat for each clause.
    let mut closed = SatCtx::new(&cnf, nl, ni, None, seed);
    for clause in inv {
        closed.add_clause(clause);
    }
    for (index, clause) in inv.iter().enumerate() {
        let primed = ts
            .prime(&clause.negate())
            .expect("clause shape validated above");
        if closed.solve_assuming(primed.lits())? {
            return Err(CertifyError::ClauseNotInductive { index });
        }
    }

    // 3. INV ∧ bad is unsat (same solver: T plus the invariant clauses).
    if closed.solve_assuming(&[cnf.bad_lit])? {
        return Err(CertifyError::BadStateInside);
    }
    Ok(())
}

/// Replays a claimed counterexample on the netlist simulator. Each step is a
/// fully assigned (state, input) pair; consecutive states must be connected
/// by the circuit's transition function, the first state must agree with
/// every constrained reset bit, and the final step must assert the bad
/// literal combinationally.
pub fn replay_trace(ts: &TransitionSystem, trace: &[(Cube, Cube)]) -> Result<(), CertifyError> {
    if trace.is_empty() {
        return Err(CertifyError::EmptyTrace);
    }
    let nl = ts.num_state_vars() as usize;
    let ni = ts.num_input_vars() as usize;

    let mut decoded = Vec::with_capacity(trace.len());
    for (step, (s, y)) in trace.iter().enumerate() {
        let state = s
            .as_bits(Var(0), nl)
            .ok_or(CertifyError::BadStateShape { step })?;
        let input = y
            .as_bits(Var(nl as u32), ni)
            .ok_or(CertifyError::BadStateShape { step })?;
        decoded.push((state, input));
    }

    for (latch, reset) in ts.init.iter().enumerate() {
        if reset.is_some_and(|b| decoded[0].0[latch] != b) {
            return Err(CertifyError::TraceNotInitial { latch });
        }
    }

    for step in 0..decoded.len() - 1 {
        let (next, _) = oracle::step(ts, &decoded[step].0, &decoded[step].1);
        if next != decoded[step + 1].0 {
            return Err(CertifyError::TraceStepMismatch { step });
        }
    }

    let (last_state, last_input) = decoded.last().expect("trace checked nonempty");
    let (_, bad) = oracle::step(ts, last_state, last_input);
    if !bad {
        return Err(CertifyError::TraceEndsClean);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aiger::parse_aiger;
    use crate::logic::Lit;
    use crate::transys::to_transition_system;

    fn sys(text: &[u8]) -> TransitionSystem {
        to_transition_system(&parse_aiger(text).unwrap()).unwrap()
    }

    fn lit(v: u32, pos: bool) -> Lit {
        Lit::new(Var(v), pos)
    }

    #[test]
    fn stuck_latch_invariant_passes() {
        // Identity latch resetting to 0, bad = x; ¬x is inductive and safe.
        let ts = sys(b"aag 1 0 1 1 0\n2 2\n2\n");
        let inv = vec![Clause::new(vec![lit(0, false)])];
        assert_eq!(check_invariant(&ts, &inv, 1), Ok(()));
    }

    #[test]
    fn clause_violated_at_reset_is_rejected() {
        let ts = sys(b"aag 1 0 1 1 0\n2 2\n2\n");
        let inv = vec![Clause::new(vec![lit(0, true)])];
        assert_eq!(
            check_invariant(&ts, &inv, 1),
            Err(CertifyError::ClauseOpenAtInit { index: 0 })
        );
    }

    #[test]
    fn non_inductive_clause_is_rejected() {
        // x0' = x1 with x1 free-running (identity, unconstrained reset):
        // ¬x0 holds initially but the state (¬x0, x1) escapes it.
        let ts = sys(b"aag 2 0 2 1 0\n2 4\n4 4 4\n2\n");
        let inv = vec![Clause::new(vec![lit(0, false)])];
        assert_eq!(
            check_invariant(&ts, &inv, 1),
            Err(CertifyError::ClauseNotInductive { index: 0 })
        );
    }

    #[test]
    fn invariant_containing_bad_state_is_rejected() {
        // bad = ¬x and the candidate pins x to 0: inductive but not safe.
        let ts = sys(b"aag 1 0 1 1 0\n2 2\n3\n");
        let inv = vec![Clause::new(vec![lit(0, false)])];
        assert_eq!(
            check_invariant(&ts, &inv, 1),
            Err(CertifyError::BadStateInside)
        );
    }

    #[test]
    fn empty_invariant_needs_unsatisfiable_bad() {
        // bad is the constant-false literal: ⊤ certifies safety.
        let ts = sys(b"aag 1 0 1 1 0\n2 3\n0\n");
        assert_eq!(check_invariant(&ts, &[], 1), Ok(()));
        // ...but not when some state asserts bad.
        let ts = sys(b"aag 1 0 1 1 0\n2 3\n2\n");
        assert_eq!(
            check_invariant(&ts, &[], 1),
            Err(CertifyError::BadStateInside)
        );
    }

    #[test]
    fn non_state_clause_is_rejected() {
        let ts = sys(b"aag 1 0 1 1 0\n2 2\n2\n");
        // Clause over variable 5, far outside the single state variable.
        let inv = vec![
            Clause::new(vec![lit(0, false)]),
            Clause::new(vec![lit(5, false)]),
        ];
        assert_eq!(
            check_invariant(&ts, &inv, 1),
            Err(CertifyError::ClauseShape { index: 1 })
        );
    }

    #[test]
    fn toggle_trace_replays() {
        // Toggle latch, bad = x: two steps reach and witness the bad state.
        let ts = sys(b"aag 1 0 1 1 0\n2 3\n2\n");
        let trace = vec![
            (Cube::new(vec![lit(0, false)]), Cube::new(vec![])),
            (Cube::new(vec![lit(0, true)]), Cube::new(vec![])),
        ];
        assert_eq!(replay_trace(&ts, &trace), Ok(()));
    }

    #[test]
    fn trace_with_inputs_replays() {
        // next(x) = x | y, bad = x: assert y once, then witness.
        let ts = sys(b"aag 3 1 1 1 1\n2\n4 7\n4\n6 3 5\n");
        let trace = vec![
            (Cube::new(vec![lit(0, false)]), Cube::new(vec![lit(1, true)])),
            (Cube::new(vec![lit(0, true)]), Cube::new(vec![lit(1, false)])),
        ];
        assert_eq!(replay_trace(&ts, &trace), Ok(()));
    }

    #[test]
    fn replay_rejects_broken_transition() {
        let ts = sys(b"aag 1 0 1 1 0\n2 3\n2\n");
        let trace = vec![
            (Cube::new(vec![lit(0, false)]), Cube::new(vec![])),
            (Cube::new(vec![lit(0, false)]), Cube::new(vec![])),
        ];
        assert_eq!(
            replay_trace(&ts, &trace),
            Err(CertifyError::TraceStepMismatch { step: 0 })
        );
    }

    #[test]
    fn replay_rejects_wrong_start() {
        let ts = sys(b"aag 1 0 1 1 0\n2 3\n2\n");
        let trace = vec![(Cube::new(vec![lit(0, true)]), Cube::new(vec![]))];
        assert_eq!(
            replay_trace(&ts, &trace),
            Err(CertifyError::TraceNotInitial { latch: 0 })
        );
    }

    #[test]
    fn replay_rejects_clean_ending() {
        // Identity latch stuck at 0 never asserts bad = x.
        let ts = sys(b"aag 1 0 1 1 0\n2 2\n2\n");
        let trace = vec![(Cube::new(vec![lit(0, false)]), Cube::new(vec![]))];
        assert_eq!(
            replay_trace(&ts, &trace),
            Err(CertifyError::TraceEndsClean)
        );
    }

    #[test]
    fn replay_rejects_partial_state() {
        let ts = sys(b"aag 2 0 2 1 0\n2 3\n4 5\n2\n");
        let trace = vec![(Cube::new(vec![lit(0, false)]), Cube::new(vec![]))];
        assert_eq!(
            replay_trace(&ts, &trace),
            Err(CertifyError::BadStateShape { step: 0 })
        );
        assert_eq!(replay_trace(&ts, &[]), Err(CertifyError::EmptyTrace));
    }
}
