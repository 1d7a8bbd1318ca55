//! Transition system extracted from an AIGER circuit, and its CNF encoding.
//!
//! Checker variables are dense and grouped:
//!
//! ```text
//! 0 .. nl                 state variables X (one per latch)
//! nl .. nl+ni             input variables Y
//! nl+ni .. 2nl+ni         primed state variables X'
//! 2nl+ni                  constant-true auxiliary (unit clause, emitted lazily)
//! 2nl+ni+1 ..             Tseitin variables, one per and-gate
//! ```
//!
//! Keeping the auxiliary block contiguous and above X ∪ Y ∪ X' lets every
//! solver context share a single copy of the transition CNF.

use crate::aiger::{AigerCircuit, AndGate};
use crate::logic::{Clause, Cube, Lit, Var};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TransysError {
    #[error("circuit declares neither outputs nor bad-state literals")]
    NoProperty,
    #[error("property index {index} out of range: circuit has {available} properties")]
    PropertyIndexOutOfRange { index: usize, available: usize },
    #[error("variable {0:?} is not a state variable")]
    VarNotStateVar(Var),
}

/// The verification problem ⟨X, Y, I, T, P⟩ in netlist form.
///
/// The netlist keeps AIGER literal numbering so that the explicit-state
/// simulator and the CNF encoder can each interpret it independently.
#[derive(Debug, Clone)]
pub struct TransitionSystem {
    num_latches: u32,
    num_inputs: u32,
    /// Reset value per latch; `None` leaves the latch unconstrained in I.
    pub init: Vec<Option<bool>>,
    /// AIGER literal of each latch's next-state function.
    pub next_lit: Vec<u32>,
    /// AIGER literal whose value 1 means the property is violated (¬P).
    pub bad_lit: u32,
    /// And gates in ascending-lhs (topological) order.
    pub gates: Vec<AndGate>,
    /// Highest AIGER variable index in use (including disjunction gates
    /// appended for multiple properties).
    pub aig_max_var: u32,
    /// AIGER variable of each latch, in latch order.
    pub latch_aigvar: Vec<u32>,
    /// AIGER variable of each input, in input order.
    pub input_aigvar: Vec<u32>,
}

/// Converts a parsed circuit, checking all bad-state literals (or, when there
/// are none, all outputs) as a single disjoined property.
pub fn to_transition_system(circuit: &AigerCircuit) -> Result<TransitionSystem, TransysError> {
    to_transition_system_with(circuit, None)
}

/// Like [`to_transition_system`], but `property` may pick a single literal out
/// of the circuit's bad/output list instead of disjoining them all.
pub fn to_transition_system_with(
    circuit: &AigerCircuit,
    property: Option<usize>,
) -> Result<TransitionSystem, TransysError> {
    let pool: &[u32] = if !circuit.bad.is_empty() {
        &circuit.bad
    } else {
        &circuit.outputs
    };
    if pool.is_empty() {
        return Err(TransysError::NoProperty);
    }
    let selected: Vec<u32> = match property {
        Some(index) => {
            let &lit = pool
                .get(index)
                .ok_or(TransysError::PropertyIndexOutOfRange {
                    index,
                    available: pool.len(),
                })?;
            vec![lit]
        }
        None => pool.to_vec(),
    };

    let mut gates = circuit.and_gates.clone();
    gates.sort_by_key(|g| g.lhs);
    let mut max_var = circuit.max_var;

    // bad = b_0 ∨ ... ∨ b_n, built as ¬(¬b_0 ∧ ... ∧ ¬b_n) with a chain of
    // fresh and-gates when there is more than one property literal.
    let mut acc = selected[0] ^ 1;
    for &b in &selected[1..] {
        max_var += 1;
        let lhs = 2 * max_var;
        let (mut r0, mut r1) = (acc, b ^ 1);
        if r0 < r1 {
            std::mem::swap(&mut r0, &mut r1);
        }
        gates.push(AndGate { lhs, rhs0: r0, rhs1: r1 });
        acc = lhs;
    }
    let bad_lit = acc ^ 1;

    Ok(TransitionSystem {
        num_latches: circuit.latches.len() as u32,
        num_inputs: circuit.inputs.len() as u32,
        init: circuit
            .latches
            .iter()
            .map(|l| match l.reset {
                crate::aiger::Reset::Zero => Some(false),
                crate::aiger::Reset::One => Some(true),
                crate::aiger::Reset::Uninitialized => None,
            })
            .collect(),
        next_lit: circuit.latches.iter().map(|l| l.next).collect(),
        bad_lit,
        gates,
        aig_max_var: max_var,
        latch_aigvar: circuit.latches.iter().map(|l| l.current >> 1).collect(),
        input_aigvar: circuit.inputs.iter().map(|&l| l >> 1).collect(),
    })
}

impl TransitionSystem {
    pub fn num_state_vars(&self) -> u32 {
        self.num_latches
    }

    pub fn num_input_vars(&self) -> u32 {
        self.num_inputs
    }

    /// First primed state variable; `prime` adds this offset minus nothing —
    /// the X→X' bijection is `v ↦ v + num_latches + num_inputs`.
    pub fn prime_offset(&self) -> u32 {
        self.num_latches + self.num_inputs
    }

    /// The initial states as a (possibly partial) cube over X.
    pub fn initial_cube(&self) -> Cube {
        Cube::new(
            self.init
                .iter()
                .enumerate()
                .filter_map(|(i, v)| v.map(|b| Lit::new(Var(i as u32), b)))
                .collect(),
        )
    }

    /// Literal-wise application of the X→X' bijection, signs preserved.
    pub fn prime(&self, c: &Cube) -> Result<Cube, TransysError> {
        let off = self.prime_offset();
        let mut lits = Vec::with_capacity(c.len());
        for &l in c.lits() {
            if l.var().0 >= self.num_latches {
                return Err(TransysError::VarNotStateVar(l.var()));
            }
            lits.push(Lit::new(Var(l.var().0 + off), l.positive()));
        }
        Ok(Cube::new(lits))
    }

    /// True iff some initial state satisfies `c`. Because I is a cube this is
    /// a syntactic scan — no literal of `c` may contradict a reset literal —
    /// and never a SAT call.
    pub fn intersects_initial(&self, c: &Cube) -> bool {
        c.lits().iter().all(|l| {
            debug_assert!(l.var().0 < self.num_latches, "cube not over X");
            match self.init[l.var().0 as usize] {
                Some(v) => v == l.positive(),
                None => true,
            }
        })
    }
}

/// Tseitin encoding of the transition relation, plus the hooks the solver
/// contexts need: the bad literal and the lazily emitted constant.
#[derive(Debug, Clone)]
pub struct TransCnf {
    pub num_vars: u32,
    pub clauses: Vec<Clause>,
    /// SAT literal that is true exactly when the circuit's bad signal is 1.
    pub bad_lit: Lit,
}

/// Encodes T(X, Y, X'): three clauses per and-gate and two clauses binding
/// each primed state variable to its next-state function. Satisfying
/// assignments restricted to (X, Y, X') are exactly the transitions.
pub fn encode_transition(ts: &TransitionSystem) -> TransCnf {
    let nl = ts.num_latches;
    let ni = ts.num_inputs;
    let const_var = Var(2 * nl + ni);
    let gate_base = 2 * nl + ni + 1;

    // AIGER var -> SAT var. Gates get consecutive vars in topological order.
    let mut var_map: Vec<u32> = vec![u32::MAX; ts.aig_max_var as usize + 1];
    var_map[0] = const_var.0;
    for (i, &v) in ts.latch_aigvar.iter().enumerate() {
        var_map[v as usize] = i as u32;
    }
    for (j, &v) in ts.input_aigvar.iter().enumerate() {
        var_map[v as usize] = nl + j as u32;
    }
    for (g, gate) in ts.gates.iter().enumerate() {
        var_map[(gate.lhs >> 1) as usize] = gate_base + g as u32;
    }

    let mut const_used = false;
    let mut sat_lit = |aig_lit: u32| -> Lit {
        let var = var_map[(aig_lit >> 1) as usize];
        debug_assert_ne!(var, u32::MAX, "undefined aiger variable");
        if aig_lit >> 1 == 0 {
            const_used = true;
            // Literal 1 is constant true, so it maps to the positive phase.
            Lit::new(const_var, aig_lit & 1 == 1)
        } else {
            Lit::new(Var(var), aig_lit & 1 == 0)
        }
    };

    let mut clauses = Vec::with_capacity(3 * ts.gates.len() + 2 * nl as usize + 1);
    for (g, gate) in ts.gates.iter().enumerate() {
        let lhs = Lit::new(Var(gate_base + g as u32), true);
        let r0 = sat_lit(gate.rhs0);
        let r1 = sat_lit(gate.rhs1);
        clauses.push(Clause::new(vec![!lhs, r0]));
        clauses.push(Clause::new(vec![!lhs, r1]));
        clauses.push(Clause::new(vec![lhs, !r0, !r1]));
    }
    for i in 0..nl {
        let primed = Lit::new(Var(nl + ni + i), true);
        let f = sat_lit(ts.next_lit[i as usize]);
        clauses.push(Clause::new(vec![!primed, f]));
        clauses.push(Clause::new(vec![primed, !f]));
    }
    let bad_lit = sat_lit(ts.bad_lit);
    if const_used {
        clauses.push(Clause::new(vec![Lit::new(const_var, true)]));
    }

    TransCnf {
        num_vars: gate_base + ts.gates.len() as u32,
        clauses,
        bad_lit,
    }
}

/// DIMACS rendering of the transition CNF (debug aid for cross-checking with
/// external solvers). Variables are 1-based; the layout is described in
/// leading comment lines.
pub fn to_dimacs(ts: &TransitionSystem, cnf: &TransCnf) -> String {
    use std::fmt::Write;
    let mut s = String::new();
    let nl = ts.num_state_vars();
    let ni = ts.num_input_vars();
    writeln!(s, "c transition relation T(X, Y, X')").unwrap();
    writeln!(s, "c X = 1..{}, Y = {}..{}, X' = {}..{}", nl, nl + 1, nl + ni, nl + ni + 1, 2 * nl + ni).unwrap();
    writeln!(s, "c bad literal: {}", dimacs_lit(cnf.bad_lit)).unwrap();
    writeln!(s, "p cnf {} {}", cnf.num_vars, cnf.clauses.len()).unwrap();
    for c in &cnf.clauses {
        for &l in c.lits() {
            write!(s, "{} ", dimacs_lit(l)).unwrap();
        }
        writeln!(s, "0").unwrap();
    }
    s
}

fn dimacs_lit(l: Lit) -> i64 {
    let v = l.var().0 as i64 + 1;
    if l.positive() {
        v
    } else {
        -v
    }
}
