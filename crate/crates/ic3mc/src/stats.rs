//! Run statistics: deterministic counters only (no timing), so that two runs
//! with the same seed print byte-identical stats lines.

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Stats {
    /// All SAT calls: relative-induction queries plus bad-state pulls.
    pub queries: u64,
    /// Lemmas inserted into frames (skipped-by-subsumption not counted).
    pub lemmas: u64,
    /// Obligations created in the blocking phase.
    pub obligations: u64,
    /// Counterexamples-to-generalization successfully blocked inside the
    /// nested generalization paths.
    pub ctg_blocks: u64,
    /// Recursive blocking attempts refused because the shared budget hit 0.
    pub exctg_exhausted: u64,
    /// Literals removed by generalization, summed over all generalize calls.
    pub literals_dropped: u64,
    /// Dynamic-strategy branch histogram.
    pub dyn_standard: u64,
    pub dyn_ctg: u64,
    pub dyn_exctg: u64,
    /// Highest frame index reached.
    pub max_frame: u64,
}

impl std::fmt::Display for Stats {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "queries={} lemmas={} obligations={} ctg_blocks={} exctg_exhausted={} \
             literals_dropped={} dyn_standard={} dyn_ctg={} dyn_exctg={} max_frame={}",
            self.queries,
            self.lemmas,
            self.obligations,
            self.ctg_blocks,
            self.exctg_exhausted,
            self.literals_dropped,
            self.dyn_standard,
            self.dyn_ctg,
            self.dyn_exctg,
            self.max_frame
        )
    }
}
