//! The IC3/PDR engine: blocking phase, propagation phase, verdict assembly.
//!
//! The engine owns one SAT context per frame, the delta-encoded frame store,
//! and the run statistics. Generalization strategies live in a sibling module
//! and are dispatched per obligation; everything else — obligation recursion,
//! counterexample reconstruction, lemma bookkeeping — is shared by all four
//! strategies so that strategy comparisons differ only where the strategies
//! themselves do.

use crate::config::{EngineOptions, StrategyConfig, StrategyKind};
use crate::frames::{FrameSequence, Insert};
use crate::logic::{Clause, Cube};
use crate::sat::{Model, SatCtx, SatError};
use crate::stats::Stats;
use crate::tracelog::TraceWriter;
use crate::transys::{encode_transition, TransCnf, TransitionSystem};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(transparent)]
    Solver(#[from] SatError),
    #[error("frame audit failed: {0}")]
    Audit(String),
}

/// Final answer of a run.
#[derive(Debug)]
pub enum Verdict {
    /// The property holds; `invariant` is an inductive strengthening found at
    /// `depth` frames.
    Safe {
        invariant: Vec<Clause>,
        depth: usize,
    },
    /// The property fails; `trace` is the counterexample as (state, input)
    /// pairs from an initial state to one asserting the bad literal.
    Unsafe { trace: Vec<(Cube, Cube)> },
    /// The solver gave up (resource exhaustion); no verdict.
    Unknown,
}

/// Result of blocking one proof obligation.
pub(crate) enum BlockOutcome {
    Blocked,
    /// Counterexample fragment, leaf (initial state) first. Each caller
    /// appends the (predecessor, input) pair it extracted; the main loop
    /// appends the bad-pull state last.
    Cex(Vec<(Cube, Cube)>),
}

pub struct Engine {
    pub(crate) ts: TransitionSystem,
    pub(crate) cnf: TransCnf,
    pub(crate) cfg: StrategyConfig,
    pub(crate) opts: EngineOptions,
    pub(crate) frames: FrameSequence,
    /// solvers[i] holds T plus the clauses of F_i (I units for i = 0).
    pub(crate) solvers: Vec<SatCtx>,
    pub(crate) stats: Stats,
    pub(crate) trace: Option<TraceWriter>,
    pub(crate) next_obligation: u64,
    /// Per state variable: occurrences in added lemmas (drop-order "act").
    pub(crate) activity: Vec<u64>,
}

impl Engine {
    pub fn new(ts: TransitionSystem, cfg: StrategyConfig, opts: EngineOptions) -> Engine {
        let cnf = encode_transition(&ts);
        let nl = ts.num_state_vars();
        let ni = ts.num_input_vars();
        let init = ts.initial_cube();
        let solvers = vec![
            SatCtx::new(&cnf, nl, ni, Some(&init), opts.seed),
            SatCtx::new(&cnf, nl, ni, None, opts.seed),
        ];
        let frames = FrameSequence::new(init);
        let stats = Stats {
            max_frame: 1,
            ..Stats::default()
        };
        Engine {
            activity: vec![0; nl as usize],
            ts,
            cnf,
            cfg,
            opts,
            frames,
            solvers,
            stats,
            trace: None,
            next_obligation: 1,
        }
    }

    /// Attaches a run-trace writer; must be called before `check`.
    pub fn attach_trace(&mut self, writer: TraceWriter) {
        self.trace = Some(writer);
    }

    /// Flushes and (for in-memory traces) returns the trace bytes.
    pub fn finish_trace(&mut self) -> std::io::Result<Option<Vec<u8>>> {
        match self.trace.take() {
            Some(w) => w.finish(),
            None => Ok(None),
        }
    }

    pub fn stats(&self) -> &Stats {
        &self.stats
    }

    pub fn frames(&self) -> &FrameSequence {
        &self.frames
    }

    pub fn transition_system(&self) -> &TransitionSystem {
        &self.ts
    }

    /// Runs the full check to a verdict.
    pub fn check(&mut self) -> Result<Verdict, EngineError> {
        // Depth 0: the blocking phase below assumes no initial state asserts
        // bad (obligations then provably never intersect I), so settle that
        // case up front.
        if let Some(m) = self.solve_bad_at(0)? {
            return Ok(Verdict::Unsafe {
                trace: vec![(m.state, m.input)],
            });
        }

        loop {
            let k = self.frames.k();
            while let Some(m) = self.solve_bad_at(k)? {
                match self.block(m.state.clone(), k, 0, None)? {
                    BlockOutcome::Blocked => {}
                    BlockOutcome::Cex(mut chain) => {
                        chain.push((m.state, m.input));
                        return Ok(Verdict::Unsafe { trace: chain });
                    }
                }
            }
            self.new_frame();
            if self.propagate()? {
                let invariant = self
                    .frames
                    .extract_invariant()
                    .expect("propagate reported a fixpoint");
                return Ok(Verdict::Safe {
                    invariant,
                    depth: self.frames.k(),
                });
            }
            if self.opts.audit_frames {
                self.audit_frames().map_err(EngineError::Audit)?;
            }
        }
    }

    /// Recursively blocks the obligation `c` at frame `i`. `sact` is the
    /// number of relative-induction failures the *parent* obligation had
    /// accumulated when this one was spawned (0 for roots); the dynamic
    /// strategy selects its generalization regime from it.
    fn block(
        &mut self,
        c: Cube,
        i: usize,
        sact: u32,
        parent: Option<u64>,
    ) -> Result<BlockOutcome, SatError> {
        let ob = self.next_obligation;
        self.next_obligation += 1;
        self.stats.obligations += 1;
        if let Some(t) = &mut self.trace {
            t.obligation(ob, parent, sact);
        }

        // An obligation holding an initial state is a concrete counterexample
        // leaf. For i = 0 this is Alg.-1 behavior (frame-0 models always
        // satisfy I); for i ≥ 1 it is unreachable while the frame invariants
        // hold, but checking is free and locally sound.
        if i == 0 || self.ts.intersects_initial(&c) {
            return Ok(BlockOutcome::Cex(Vec::new()));
        }

        let mut act: u32 = 0;
        while let Some(m) = self.query_relind(&c, i - 1)? {
            if let Some(t) = &mut self.trace {
                t.failure(ob);
            }
            act += 1;
            let (p, y) = (m.state, m.input);
            match self.block(p.clone(), i - 1, act, Some(ob))? {
                BlockOutcome::Blocked => {}
                BlockOutcome::Cex(mut chain) => {
                    chain.push((p, y));
                    return Ok(BlockOutcome::Cex(chain));
                }
            }
        }

        let gen = self.generalize(&c, i - 1, sact, ob)?;
        self.stats.literals_dropped += (c.len() - gen.len()) as u64;
        self.add_lemma(&gen, i);
        Ok(BlockOutcome::Blocked)
    }

    /// Strategy dispatch for the top-of-obligation generalization call.
    fn generalize(
        &mut self,
        c: &Cube,
        i: usize,
        sact: u32,
        ob: u64,
    ) -> Result<Cube, SatError> {
        match self.cfg.kind {
            StrategyKind::Standard => {
                if let Some(t) = &mut self.trace {
                    t.generalize(ob, "standard", sact);
                }
                self.standard_generalize(c, i)
            }
            StrategyKind::Ctg => {
                if let Some(t) = &mut self.trace {
                    t.generalize(ob, "ctg", sact);
                }
                let params = self.fixed_params();
                self.ctg_generalize(c, i, self.cfg.ctg_lv, &params)
            }
            StrategyKind::Exctg => {
                if let Some(t) = &mut self.trace {
                    t.generalize(ob, "exctg", sact);
                }
                let params = self.fixed_params();
                self.exctg_generalize(c, i, self.cfg.ctg_lv, &params)
            }
            StrategyKind::Dynamic => self.dyn_generalize(c, i, sact, ob),
        }
    }

    /// Lemma insertion shared by every strategy: frame store, per-frame
    /// solvers 1..=i, trace line, statistics, and variable activity.
    pub(crate) fn add_lemma(&mut self, gen: &Cube, i: usize) {
        debug_assert!(
            !self.ts.intersects_initial(gen),
            "lemma cube must exclude the initial states"
        );
        self.stats.lemmas += 1;
        if let Some(t) = &mut self.trace {
            t.lemma(i, gen);
        }
        for l in gen.lits() {
            self.activity[l.var().0 as usize] += 1;
        }
        match self.frames.insert(gen, i) {
            // An existing, stronger lemma at level ≥ i already implies this
            // clause everywhere it would be loaded.
            Insert::Subsumed => {}
            Insert::Added { .. } => {
                for s in 1..=i {
                    self.solvers[s].add_lemma(gen);
                }
            }
        }
    }

    /// Relative-induction query against F_frame, with trace and stats.
    pub(crate) fn query_relind(
        &mut self,
        c: &Cube,
        frame: usize,
    ) -> Result<Option<Model>, SatError> {
        let primed = self.ts.prime(c).expect("obligation cube over X");
        let r = self.solvers[frame].relind(c, &primed)?;
        self.stats.queries += 1;
        if let Some(t) = &mut self.trace {
            t.query_relind(frame, c, r.is_some());
        }
        Ok(r)
    }

    /// Bad-state pull sat(F_frame ∧ ¬P), with trace and stats.
    fn solve_bad_at(&mut self, frame: usize) -> Result<Option<Model>, SatError> {
        let r = self.solvers[frame].solve_bad(self.cnf.bad_lit)?;
        self.stats.queries += 1;
        if let Some(t) = &mut self.trace {
            t.query_bad(frame, r.is_some());
        }
        Ok(r)
    }

    fn new_frame(&mut self) {
        self.frames.push_frame();
        self.solvers.push(SatCtx::new(
            &self.cnf,
            self.ts.num_state_vars(),
            self.ts.num_input_vars(),
            None,
            self.opts.seed,
        ));
        self.stats.max_frame = self.frames.k() as u64;
    }

    /// Pushes each lemma of F_i \ F_{i+1} that is inductive relative to F_i
    /// up one level, bottom-up; true iff some adjacent pair became equal.
    fn propagate(&mut self) -> Result<bool, SatError> {
        let k = self.frames.k();
        for i in 1..k {
            // Snapshot taken per level, after lower levels finished: entries
            // can only leave this level through their own promotion.
            for clause in self.frames.level(i).to_vec() {
                let cube = clause.negate();
                if self.query_relind(&cube, i)?.is_none() {
                    self.frames.promote(i, &clause);
                    self.solvers[i + 1].add_clause(&clause);
                }
            }
            if self.frames.equal_pair(i) {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Re-derives the frame-sequence invariants from scratch: containment
    /// and per-level canonicity structurally, consecution F_i ∧ T ⇒ F_{i+1}'
    /// and the property F_i ⇒ P (i < k) by fresh-solver UNSAT queries. These
    /// queries deliberately bypass the run trace and statistics.
    pub fn audit_frames(&mut self) -> Result<(), String> {
        self.frames.audit_containment()?;
        let k = self.frames.k();
        let nl = self.ts.num_state_vars();
        let ni = self.ts.num_input_vars();
        for i in 0..k {
            let init = self.ts.initial_cube();
            let mut ctx = SatCtx::new(
                &self.cnf,
                nl,
                ni,
                if i == 0 { Some(&init) } else { None },
                self.opts.seed,
            );
            if i >= 1 {
                for clause in self.frames.frame_lemmas(i) {
                    ctx.add_clause(&clause);
                }
            }
            let sat = ctx
                .solve_assuming(&[self.cnf.bad_lit])
                .map_err(|e| format!("audit solver failed at frame {i}: {e}"))?;
            if sat {
                return Err(format!("frame {i} admits a bad state (F_{i} ⇏ P)"));
            }
            for clause in self.frames.frame_lemmas(i + 1) {
                let primed = self
                    .ts
                    .prime(&clause.negate())
                    .expect("lemma clause over X");
                let sat = ctx
                    .solve_assuming(primed.lits())
                    .map_err(|e| format!("audit solver failed at frame {i}: {e}"))?;
                if sat {
                    return Err(format!(
                        "consecution broken: F_{i} ∧ T can leave a lemma of F_{}",
                        i + 1
                    ));
                }
            }
        }
        Ok(())
    }
}
