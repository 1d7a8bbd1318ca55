//! Cube generalization: the literal-dropping strategies.
//!
//! Four strategies share one skeleton — try to drop each literal, accept the
//! drop if the shrunk cube can be proven inductive relative to its frame —
//! and differ in how hard they fight counterexamples-to-generalization
//! (CTGs), the frame states that witness a failed drop:
//!
//! * standard: join the cube with the CTG and retry, nothing more;
//! * ctg: additionally try to block the CTG itself with one query;
//! * exctg: block the CTG with a bounded recursive budget;
//! * dynamic: pick one of the above per obligation, based on how often the
//!   obligation's successor resisted blocking.
//!
//! The ctg and exctg paths are deliberately separate implementations of
//! their respective procedures — their behavioral coincidences (exctg with a
//! unit budget acts like ctg; ctg level 0 acts like standard) are verified
//! by comparing run traces, not by sharing code.

use crate::config::StrategyConfig;
use crate::engine::Engine;
use crate::logic::{Cube, Lit};
use crate::sat::SatError;

/// Numeric knobs a single generalization call tree runs under. Fixed
/// strategies take them from the configuration; the dynamic selector
/// recomputes them per call.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenParams {
    /// Max consecutive CTG blocks before falling back to intersection.
    pub ctg_max: u32,
    /// Recursive blocking budget per CTG attempt (exctg only).
    pub exctg_limit: u32,
}

/// Regime picked by the dynamic selector for one generalization call.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DynRegime {
    Standard,
    Ctg,
    Exctg,
}

impl DynRegime {
    pub fn name(self) -> &'static str {
        match self {
            DynRegime::Standard => "standard",
            DynRegime::Ctg => "ctg",
            DynRegime::Exctg => "exctg",
        }
    }
}

/// A dynamic-selector decision: regime, ctg level, and knobs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DynChoice {
    pub regime: DynRegime,
    pub ctg_lv: u32,
    pub params: GenParams,
}

/// Maps an obligation's activity (failed blocking attempts of its successor)
/// to a generalization regime:
///
/// * below `ctg_th`: standard (ctg level 0);
/// * from `ctg_th` up to `exctg_th`: ctg — realized as exctg with a unit
///   budget — with `ctg_max = (act − ctg_th) / 10 + 2`;
/// * from `exctg_th`: exctg with `ctg_max = 5` and
///   `exctg_limit = round((act − exctg_th)^0.3 · 2 + 5)`.
pub fn strategy_params(sact: u32, cfg: &StrategyConfig) -> DynChoice {
    if sact < cfg.ctg_th {
        DynChoice {
            regime: DynRegime::Standard,
            ctg_lv: 0,
            // Level 0 never reaches a CTG path; knobs are inert.
            params: GenParams {
                ctg_max: cfg.ctg_max,
                exctg_limit: cfg.exctg_limit,
            },
        }
    } else if sact < cfg.exctg_th {
        DynChoice {
            regime: DynRegime::Ctg,
            ctg_lv: 1,
            params: GenParams {
                ctg_max: (sact - cfg.ctg_th) / 10 + 2,
                exctg_limit: 1,
            },
        }
    } else {
        let over = f64::from(sact - cfg.exctg_th);
        DynChoice {
            regime: DynRegime::Exctg,
            ctg_lv: 1,
            params: GenParams {
                ctg_max: 5,
                exctg_limit: (over.powf(0.3) * 2.0 + 5.0).round() as u32,
            },
        }
    }
}

impl Engine {
    pub(crate) fn fixed_params(&self) -> GenParams {
        GenParams {
            ctg_max: self.cfg.ctg_max,
            exctg_limit: self.cfg.exctg_limit,
        }
    }

    /// The literal order generalization attempts drops in, snapshotted at
    /// entry (the cube shrinks while iterating).
    fn drop_order(&self, c: &Cube) -> Vec<Lit> {
        use crate::config::DropOrder;
        let mut lits = c.lits().to_vec();
        match self.opts.drop_order {
            DropOrder::Asc => {}
            DropOrder::Desc => lits.reverse(),
            DropOrder::Act => {
                lits.sort_by(|a, b| {
                    let (aa, ab) = (
                        self.activity[a.var().0 as usize],
                        self.activity[b.var().0 as usize],
                    );
                    ab.cmp(&aa).then(a.var().0.cmp(&b.var().0))
                });
            }
        }
        lits
    }

    /// Drops literals of `c` (inductive relative to F_i) using plain `down`.
    pub(crate) fn standard_generalize(&mut self, c: &Cube, i: usize) -> Result<Cube, SatError> {
        let mut cur = c.clone();
        for lit in self.drop_order(&cur) {
            if !cur.contains(lit) {
                continue; // removed by an earlier down's intersection
            }
            let mut cand = cur.without(lit);
            if self.down(&mut cand, i)? {
                cur = cand;
            }
        }
        Ok(cur)
    }

    /// Repairs `c` toward an inductive-relative-to-F_i cube by intersecting
    /// with predecessor states; fails as soon as `c` covers an initial state.
    pub(crate) fn down(&mut self, c: &mut Cube, i: usize) -> Result<bool, SatError> {
        loop {
            if self.ts.intersects_initial(c) {
                return Ok(false);
            }
            match self.query_relind(c, i)? {
                None => return Ok(true),
                // p disagrees with c on ≥ 1 literal, so c strictly shrinks.
                Some(m) => *c = c.intersect(&m.state),
            }
        }
    }

    /// `standard_generalize` with `ctg_down` in place of `down`.
    pub(crate) fn ctg_generalize(
        &mut self,
        c: &Cube,
        i: usize,
        cl: u32,
        params: &GenParams,
    ) -> Result<Cube, SatError> {
        let mut cur = c.clone();
        for lit in self.drop_order(&cur) {
            if !cur.contains(lit) {
                continue;
            }
            let mut cand = cur.without(lit);
            if self.ctg_down(&mut cand, i, cl, params)? {
                cur = cand;
            }
        }
        Ok(cur)
    }

    /// `down` that additionally tries to block up to `ctg_max` consecutive
    /// counterexamples-to-generalization with a single relative-induction
    /// query each (recursing into generalization at level cl − 1) before
    /// falling back to intersection. At cl = 0 this is exactly `down`.
    pub(crate) fn ctg_down(
        &mut self,
        c: &mut Cube,
        i: usize,
        cl: u32,
        params: &GenParams,
    ) -> Result<bool, SatError> {
        let mut num_ctg = 0u32;
        loop {
            if self.ts.intersects_initial(c) {
                return Ok(false);
            }
            let m = match self.query_relind(c, i)? {
                None => return Ok(true),
                Some(m) => m,
            };
            let p = m.state;
            if cl > 0
                && num_ctg < params.ctg_max
                && i > 0
                && !self.ts.intersects_initial(&p)
                && self.query_relind(&p, i - 1)?.is_none()
            {
                let gen = self.ctg_generalize(&p, i - 1, cl - 1, params)?;
                self.stats.literals_dropped += (p.len() - gen.len()) as u64;
                self.add_lemma(&gen, i);
                self.stats.ctg_blocks += 1;
                num_ctg += 1;
                continue;
            }
            num_ctg = 0;
            *c = c.intersect(&p);
        }
    }

    /// `standard_generalize` with `exctg_down` in place of `down`.
    pub(crate) fn exctg_generalize(
        &mut self,
        c: &Cube,
        i: usize,
        cl: u32,
        params: &GenParams,
    ) -> Result<Cube, SatError> {
        let mut cur = c.clone();
        for lit in self.drop_order(&cur) {
            if !cur.contains(lit) {
                continue;
            }
            let mut cand = cur.without(lit);
            if self.exctg_down(&mut cand, i, cl, params)? {
                cur = cand;
            }
        }
        Ok(cur)
    }

    /// `ctg_down` variant that attacks each CTG with `exctg_block` under a
    /// fresh `exctg_limit` budget instead of a single query.
    pub(crate) fn exctg_down(
        &mut self,
        c: &mut Cube,
        i: usize,
        cl: u32,
        params: &GenParams,
    ) -> Result<bool, SatError> {
        let mut num_ctg = 0u32;
        loop {
            if self.ts.intersects_initial(c) {
                return Ok(false);
            }
            let m = match self.query_relind(c, i)? {
                None => return Ok(true),
                Some(m) => m,
            };
            let p = m.state;
            if cl > 0 && num_ctg < params.ctg_max && i > 0 {
                // exctg_block re-checks the initial-state intersection first,
                // in the same order the ctg path does.
                let mut limit = params.exctg_limit;
                if self.exctg_block(&p, i, &mut limit, cl - 1, params)? {
                    self.stats.ctg_blocks += 1;
                    num_ctg += 1;
                    continue;
                }
            }
            num_ctg = 0;
            *c = c.intersect(&p);
        }
    }

    /// Blocks the CTG `c` at frame `i` by recursively blocking its own
    /// predecessors, spending one unit of `limit` per attempted cube. On
    /// success the generalized lemma lands at F_1..F_i; any failure (budget
    /// exhausted, initial state reached) aborts the whole burst.
    pub(crate) fn exctg_block(
        &mut self,
        c: &Cube,
        i: usize,
        limit: &mut u32,
        cl: u32,
        params: &GenParams,
    ) -> Result<bool, SatError> {
        if self.ts.intersects_initial(c) {
            return Ok(false);
        }
        if *limit == 0 {
            self.stats.exctg_exhausted += 1;
            return Ok(false);
        }
        *limit -= 1;
        if i == 0 {
            // Unreachable in practice: frame-0 predecessors satisfy I and are
            // caught above. Kept as a hard guard for the i − 1 queries below.
            return Ok(false);
        }
        loop {
            match self.query_relind(c, i - 1)? {
                None => {
                    let gen = self.exctg_generalize(c, i - 1, cl, params)?;
                    self.stats.literals_dropped += (c.len() - gen.len()) as u64;
                    self.add_lemma(&gen, i);
                    return Ok(true);
                }
                Some(m) => {
                    if !self.exctg_block(&m.state, i - 1, limit, cl, params)? {
                        return Ok(false);
                    }
                }
            }
        }
    }

    /// Per-obligation regime selection for the dynamic strategy; always runs
    /// through `exctg_generalize`, whose level/budget degenerations realize
    /// the standard and ctg regimes.
    pub(crate) fn dyn_generalize(
        &mut self,
        c: &Cube,
        i: usize,
        sact: u32,
        ob: u64,
    ) -> Result<Cube, SatError> {
        let choice = strategy_params(sact, &self.cfg);
        match choice.regime {
            DynRegime::Standard => self.stats.dyn_standard += 1,
            DynRegime::Ctg => self.stats.dyn_ctg += 1,
            DynRegime::Exctg => self.stats.dyn_exctg += 1,
        }
        if let Some(t) = &mut self.trace {
            t.generalize(ob, choice.regime.name(), sact);
        }
        self.exctg_generalize(c, i, choice.ctg_lv, &choice.params)
    }
}
