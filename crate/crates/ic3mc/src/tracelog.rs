//! Structured run trace: one line per SAT query, lemma, and obligation event.
//!
//! The trace serves three purposes: determinism checks (hash the whole file),
//! strategy-coincidence checks (compare the query lines or the lemma lines of
//! two runs), and the activity audit (cross-check the `sact` passed to each
//! generalize call against the failure count of the obligation's successor).
//!
//! Line grammar (fields space-separated, literals as DIMACS-style signed
//! var+1 integers in ascending variable order):
//!
//! ```text
//! B <frame> <sat|unsat>              bad-state pull sat(F_frame ∧ ¬P)
//! Q <frame> <sat|unsat> <cube>       relative-induction query relind(cube, frame)
//! L <frame> <cube>                   lemma ¬cube added to F_1..F_frame
//! O <id> <parent-id|-> <sact>        obligation entered (parent - for roots)
//! F <id>                             failed relind for obligation <id>
//! G <id> <branch> <sact>             generalize call while blocking <id>
//! ```

use crate::logic::Cube;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

enum Sink {
    File(BufWriter<File>),
    Mem(Vec<u8>),
}

pub struct TraceWriter {
    sink: Sink,
    err: Option<io::Error>,
}

/// Renders a cube's literals as DIMACS-style integers ("1 -3 4").
pub fn cube_text(c: &Cube) -> String {
    let mut s = String::new();
    for (i, l) in c.lits().iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        let v = l.var().0 as i64 + 1;
        s.push_str(&(if l.positive() { v } else { -v }).to_string());
    }
    s
}

fn sat_text(sat: bool) -> &'static str {
    if sat {
        "sat"
    } else {
        "unsat"
    }
}

impl TraceWriter {
    pub fn to_file(path: &Path) -> io::Result<Self> {
        Ok(TraceWriter {
            sink: Sink::File(BufWriter::new(File::create(path)?)),
            err: None,
        })
    }

    pub fn in_memory() -> Self {
        TraceWriter {
            sink: Sink::Mem(Vec::new()),
            err: None,
        }
    }

    fn line(&mut self, text: std::fmt::Arguments<'_>) {
        if self.err.is_some() {
            return;
        }
        let res = match &mut self.sink {
            Sink::File(w) => w.write_fmt(text).and_then(|_| w.write_all(b"\n")),
            Sink::Mem(v) => {
                v.write_fmt(text).unwrap();
                v.push(b'\n');
                Ok(())
            }
        };
        if let Err(e) = res {
            self.err = Some(e);
        }
    }

    pub fn query_bad(&mut self, frame: usize, sat: bool) {
        self.line(format_args!("B {frame} {}", sat_text(sat)));
    }

    pub fn query_relind(&mut self, frame: usize, cube: &Cube, sat: bool) {
        self.line(format_args!(
            "Q {frame} {} {}",
            sat_text(sat),
            cube_text(cube)
        ));
    }

    pub fn lemma(&mut self, frame: usize, gen: &Cube) {
        self.line(format_args!("L {frame} {}", cube_text(gen)));
    }

    pub fn obligation(&mut self, id: u64, parent: Option<u64>, sact: u32) {
        match parent {
            Some(p) => self.line(format_args!("O {id} {p} {sact}")),
            None => self.line(format_args!("O {id} - {sact}")),
        }
    }

    pub fn failure(&mut self, id: u64) {
        self.line(format_args!("F {id}"));
    }

    pub fn generalize(&mut self, id: u64, branch: &str, sact: u32) {
        self.line(format_args!("G {id} {branch} {sact}"));
    }

    /// Flushes and returns the captured bytes for in-memory traces.
    pub fn finish(self) -> io::Result<Option<Vec<u8>>> {
        if let Some(e) = self.err {
            return Err(e);
        }
        match self.sink {
            Sink::File(mut w) => {
                w.flush()?;
                Ok(None)
            }
            Sink::Mem(v) => Ok(Some(v)),
        }
    }
}

/// Keeps only the lines whose first byte is in `kinds` (e.g. b"QB" for the
/// SAT-query view, b"L" for the lemma view).
pub fn filter_lines(trace: &[u8], kinds: &[u8]) -> Vec<u8> {
    let mut out = Vec::new();
    for line in trace.split(|&b| b == b'\n') {
        if let Some(&first) = line.first() {
            if kinds.contains(&first) {
                out.extend_from_slice(line);
                out.push(b'\n');
            }
        }
    }
    out
}

/// Cross-checks the activity bookkeeping recorded in a trace: every
/// generalize call must have received exactly the number of relind failures
/// its successor obligation (the parent) had accumulated at spawn time, and
/// root obligations always generalize with activity 0.
pub fn audit_activity(trace: &[u8]) -> Result<(), String> {
    let text = std::str::from_utf8(trace).map_err(|e| e.to_string())?;
    use std::collections::HashMap;
    let mut parent: HashMap<u64, Option<u64>> = HashMap::new();
    let mut spawn_sact: HashMap<u64, u32> = HashMap::new();
    let mut failures: HashMap<u64, u32> = HashMap::new();

    for (lineno, line) in text.lines().enumerate() {
        let mut f = line.split_whitespace();
        match f.next() {
            Some("O") => {
                let id: u64 = f.next().and_then(|s| s.parse().ok()).ok_or_else(|| {
                    format!("line {}: malformed obligation id", lineno + 1)
                })?;
                let p = match f.next() {
                    Some("-") => None,
                    Some(s) => Some(s.parse::<u64>().map_err(|e| e.to_string())?),
                    None => return Err(format!("line {}: missing parent", lineno + 1)),
                };
                let sact: u32 = f
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| format!("line {}: missing sact", lineno + 1))?;
                // Spawn-time consistency: sact equals the parent's failure
                // count right now (roots spawn with 0).
                let expect = p.map_or(0, |p| failures.get(&p).copied().unwrap_or(0));
                if sact != expect {
                    return Err(format!(
                        "line {}: obligation {} spawned with sact {} but parent had {} failures",
                        lineno + 1,
                        id,
                        sact,
                        expect
                    ));
                }
                parent.insert(id, p);
                spawn_sact.insert(id, sact);
            }
            Some("F") => {
                let id: u64 = f
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| format!("line {}: malformed failure", lineno + 1))?;
                *failures.entry(id).or_insert(0) += 1;
            }
            Some("G") => {
                let id: u64 = f
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| format!("line {}: malformed generalize", lineno + 1))?;
                let _branch = f.next();
                let sact: u32 = f
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| format!("line {}: missing sact", lineno + 1))?;
                let p = parent.get(&id).copied().ok_or_else(|| {
                    format!("line {}: generalize for unknown obligation {}", lineno + 1, id)
                })?;
                // The parent cannot fail again while this obligation is being
                // blocked, so the parent's count is still the spawn count.
                let expect = p.map_or(0, |p| failures.get(&p).copied().unwrap_or(0));
                if sact != expect {
                    return Err(format!(
                        "line {}: generalize for {} got sact {} but successor has {} failures",
                        lineno + 1,
                        id,
                        sact,
                        expect
                    ));
                }
                if sact != spawn_sact[&id] {
                    return Err(format!(
                        "line {}: generalize sact {} differs from spawn sact {}",
                        lineno + 1,
                        sact,
                        spawn_sact[&id]
                    ));
                }
            }
            _ => {}
        }
    }
    Ok(())
}
