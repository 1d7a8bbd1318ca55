//! Incremental SAT contexts, one per frame.
//!
//! Every context holds the shared transition CNF; the frame-0 context
//! additionally holds the initial cube as unit clauses, and contexts i ≥ 1
//! accumulate the lemma clauses of F_i. Relative-induction queries assert ¬c
//! under a fresh activation literal that is retired (fixed false) right after
//! the query, so thousands of generalization probes never pollute the clause
//! database with stale blocking clauses.

use crate::logic::{Clause, Cube, Lit, Var};
use crate::transys::TransCnf;
use batsat::{lbool, BasicSolver, SolverInterface, SolverOpts};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SatError {
    /// The backend gave up (budget or internal limit) — never treated as
    /// UNSAT; the engine aborts with an Unknown verdict.
    #[error("SAT backend failed to decide a query")]
    SolverFailure,
}

/// A total assignment over the state and input variables of a satisfiable
/// query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Model {
    /// Full cube over X (one literal per state variable).
    pub state: Cube,
    /// Full cube over Y.
    pub input: Cube,
}

pub struct SatCtx {
    solver: BasicSolver,
    num_latches: u32,
    num_inputs: u32,
    /// Activation literals retired since the last clause-database cleanup.
    retired: u32,
    tmp: Vec<batsat::Lit>,
}

/// Retired activation clauses are swept out this often.
const SIMPLIFY_EVERY: u32 = 512;

fn slit(l: Lit) -> batsat::Lit {
    batsat::Lit::new(batsat::Var::unsafe_from_idx(l.var().0), l.positive())
}

impl SatCtx {
    /// Builds a context holding the transition CNF; `init` additionally loads
    /// the initial cube as unit clauses (frame 0 only).
    pub fn new(cnf: &TransCnf, nl: u32, ni: u32, init: Option<&Cube>, seed: u64) -> SatCtx {
        let mut opts = SolverOpts::default();
        if seed != 0 {
            opts.random_seed = seed as f64;
        }
        debug_assert!(opts.check());
        let mut solver = BasicSolver::new(opts, Default::default());
        for _ in 0..cnf.num_vars {
            solver.new_var_default();
        }
        let mut ctx = SatCtx {
            solver,
            num_latches: nl,
            num_inputs: ni,
            retired: 0,
            tmp: Vec::new(),
        };
        for clause in &cnf.clauses {
            ctx.add_clause(clause);
        }
        if let Some(init) = init {
            for &l in init.lits() {
                ctx.tmp.clear();
                ctx.tmp.push(slit(l));
                let ok = ctx.solver.add_clause_reuse(&mut ctx.tmp);
                debug_assert!(ok);
            }
        }
        ctx
    }

    /// Adds a permanent clause (a transition clause or a frame lemma).
    pub fn add_clause(&mut self, clause: &Clause) {
        self.tmp.clear();
        self.tmp.extend(clause.lits().iter().map(|&l| slit(l)));
        let ok = self.solver.add_clause_reuse(&mut self.tmp);
        debug_assert!(ok, "frame clause database became unsatisfiable");
    }

    /// Adds the lemma ¬gen (the clause negating a blocked cube).
    pub fn add_lemma(&mut self, gen: &Cube) {
        self.add_clause(&gen.negate());
    }

    /// The relative-induction query on this context's frame:
    /// sat(F_i ∧ ¬c ∧ T ∧ c'). Returns `Ok(None)` when UNSAT (the lemma ¬c is
    /// inductive relative to F_i) and the witness model when SAT.
    pub fn relind(&mut self, c: &Cube, primed: &Cube) -> Result<Option<Model>, SatError> {
        let act_var = self.solver.new_var_default();
        let act = batsat::Lit::new(act_var, true);
        // ¬c, guarded: act → ¬c.
        self.tmp.clear();
        self.tmp.push(!act);
        self.tmp.extend(c.lits().iter().map(|&l| !slit(l)));
        self.solver.add_clause_reuse(&mut self.tmp);

        let mut assumps = Vec::with_capacity(1 + primed.len());
        assumps.push(act);
        assumps.extend(primed.lits().iter().map(|&l| slit(l)));
        let res = self.solver.solve_limited(&assumps);
        let out = if res == lbool::TRUE {
            Ok(Some(self.extract_model()))
        } else if res == lbool::FALSE {
            Ok(None)
        } else {
            Err(SatError::SolverFailure)
        };

        // Retire the activation: the guard clause is now satisfied at level 0
        // and gets swept by the periodic cleanup.
        self.tmp.clear();
        self.tmp.push(!act);
        self.solver.add_clause_reuse(&mut self.tmp);
        self.retired += 1;
        if self.retired >= SIMPLIFY_EVERY {
            self.retired = 0;
            self.solver.simplify();
        }
        out
    }

    /// Pulls a state of this frame that can assert the bad signal:
    /// sat(F_i ∧ bad). The transition clauses are loaded but only constrain
    /// X', which the query ignores.
    pub fn solve_bad(&mut self, bad: Lit) -> Result<Option<Model>, SatError> {
        let res = self.solver.solve_limited(&[slit(bad)]);
        if res == lbool::TRUE {
            Ok(Some(self.extract_model()))
        } else if res == lbool::FALSE {
            Ok(None)
        } else {
            Err(SatError::SolverFailure)
        }
    }

    /// Generic assumption query against the loaded clauses (used by the
    /// certification and audit paths).
    pub fn solve_assuming(&mut self, assumps: &[Lit]) -> Result<bool, SatError> {
        let a: Vec<batsat::Lit> = assumps.iter().map(|&l| slit(l)).collect();
        let res = self.solver.solve_limited(&a);
        if res == lbool::TRUE {
            Ok(true)
        } else if res == lbool::FALSE {
            Ok(false)
        } else {
            Err(SatError::SolverFailure)
        }
    }

    fn extract_model(&self) -> Model {
        let nl = self.num_latches;
        let ni = self.num_inputs;
        let mut state = Vec::with_capacity(nl as usize);
        for v in 0..nl {
            state.push(Lit::new(Var(v), self.var_value(v)));
        }
        let mut input = Vec::with_capacity(ni as usize);
        for v in nl..nl + ni {
            input.push(Lit::new(Var(v), self.var_value(v)));
        }
        Model {
            state: Cube::new(state),
            input: Cube::new(input),
        }
    }

    fn var_value(&self, v: u32) -> bool {
        let val = self.solver.value_var(batsat::Var::unsafe_from_idx(v));
        debug_assert_ne!(val, lbool::UNDEF, "model not total over x{v}");
        val == lbool::TRUE
    }
}
