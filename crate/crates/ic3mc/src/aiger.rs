//! AIGER circuit reader and writer.
//!
//! Accepts both the ASCII ("aag") and the binary delta-encoded ("aig") format,
//! including the 1.9 extensions for bad-state properties and latch resets.
//! Justice, fairness and invariant-constraint sections are rejected: this
//! checker handles safety properties only.

use std::fmt;
use thiserror::Error;

/// Position of a parse error: ASCII problems name a 1-based line, binary
/// problems a 0-based byte offset.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Loc {
    Line(usize),
    Byte(usize),
}

impl fmt::Display for Loc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Loc::Line(n) => write!(f, "line {n}"),
            Loc::Byte(n) => write!(f, "byte {n}"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AigerError {
    #[error("malformed header at {loc}: {detail}")]
    MalformedHeader { loc: Loc, detail: String },
    #[error("non-monotonic and-gate at {loc}: lhs {lhs} must exceed operands {rhs0} and {rhs1}, with rhs0 >= rhs1 in binary files")]
    NonMonotonicGate { loc: Loc, lhs: u32, rhs0: u32, rhs1: u32 },
    #[error("duplicate definition of variable {var} at {loc}")]
    DuplicateDefinition { loc: Loc, var: u32 },
    #[error("truncated file at {loc}: {detail}")]
    TruncatedFile { loc: Loc, detail: String },
    #[error("unsupported feature at {loc}: {detail}")]
    UnsupportedFeature { loc: Loc, detail: String },
    #[error("invalid literal at {loc}: {detail}")]
    InvalidLiteral { loc: Loc, detail: String },
}

/// Latch reset value. `Uninitialized` (the latch literal as its own reset in
/// AIGER 1.9) leaves the latch unconstrained in the initial states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reset {
    Zero,
    One,
    Uninitialized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Latch {
    /// Even literal of the latch output (the state variable).
    pub current: u32,
    /// Literal giving the next-state function.
    pub next: u32,
    pub reset: Reset,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AndGate {
    /// Even literal, strictly above both operands.
    pub lhs: u32,
    pub rhs0: u32,
    pub rhs1: u32,
}

/// An and-inverter-graph circuit. Literals follow the AIGER convention:
/// `2 * var` is the positive phase, `2 * var + 1` the negated phase, and
/// literals 0 / 1 are constant false / true.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AigerCircuit {
    pub max_var: u32,
    /// Even literals of the inputs.
    pub inputs: Vec<u32>,
    pub latches: Vec<Latch>,
    /// Output literals (usable as bad-state properties when no B section).
    pub outputs: Vec<u32>,
    /// Bad-state literals (AIGER 1.9 B section).
    pub bad: Vec<u32>,
    /// And gates, operands normalized so that `rhs0 >= rhs1`.
    pub and_gates: Vec<AndGate>,
}

// Header fields can in principle go up to u32::MAX, but anything near that is
// a corrupt file in practice and would overflow literal arithmetic; cap well
// below.
const MAX_VAR_LIMIT: u64 = 1 << 28;

pub fn parse_aiger(bytes: &[u8]) -> Result<AigerCircuit, AigerError> {
    if bytes.starts_with(b"aag ") {
        parse_ascii(bytes)
    } else if bytes.starts_with(b"aig ") {
        parse_binary(bytes)
    } else {
        Err(AigerError::MalformedHeader {
            loc: Loc::Line(1),
            detail: "expected magic \"aag\" or \"aig\"".into(),
        })
    }
}

#[derive(Debug, Clone, Copy)]
struct Header {
    m: u32,
    i: u32,
    l: u32,
    o: u32,
    a: u32,
    b: u32,
}

fn parse_header(line: &str, loc: Loc) -> Result<Header, AigerError> {
    let bad = |detail: &str| AigerError::MalformedHeader {
        loc,
        detail: detail.into(),
    };
    let mut fields = line.split_ascii_whitespace();
    let _magic = fields.next();
    let mut nums = Vec::new();
    for f in fields {
        let v: u64 = f
            .parse()
            .map_err(|_| bad(&format!("non-numeric header field {f:?}")))?;
        if v >= MAX_VAR_LIMIT {
            return Err(bad(&format!("header field {v} too large")));
        }
        nums.push(v as u32);
    }
    if nums.len() < 5 || nums.len() > 9 {
        return Err(bad(&format!(
            "expected 5 to 9 numeric fields, found {}",
            nums.len()
        )));
    }
    // M I L O A [B [C [J [F]]]]
    let get = |i: usize| nums.get(i).copied().unwrap_or(0);
    let (c, j, f) = (get(6), get(7), get(8));
    if c > 0 || j > 0 || f > 0 {
        return Err(AigerError::UnsupportedFeature {
            loc,
            detail: "invariant-constraint, justice and fairness sections are not supported"
                .into(),
        });
    }
    Ok(Header {
        m: nums[0],
        i: nums[1],
        l: nums[2],
        o: nums[3],
        a: nums[4],
        b: get(5),
    })
}

/// Tracks which variable defines what, to reject double definitions.
struct DefTable {
    bits: Vec<u64>,
}

impl DefTable {
    fn new(max_var: u32) -> Self {
        DefTable {
            bits: vec![0; max_var as usize / 64 + 1],
        }
    }

    fn defined(&self, var: u32) -> bool {
        self.bits[var as usize / 64] >> (var % 64) & 1 != 0
    }

    fn define(&mut self, var: u32, loc: Loc) -> Result<(), AigerError> {
        if var == 0 {
            return Err(AigerError::InvalidLiteral {
                loc,
                detail: "variable 0 is reserved for the constants".into(),
            });
        }
        if self.defined(var) {
            return Err(AigerError::DuplicateDefinition { loc, var });
        }
        self.bits[var as usize / 64] |= 1 << (var % 64);
        Ok(())
    }
}

fn check_lit(lit: u64, max_var: u32, loc: Loc) -> Result<u32, AigerError> {
    if lit > 2 * max_var as u64 + 1 {
        return Err(AigerError::InvalidLiteral {
            loc,
            detail: format!("literal {lit} exceeds maximum variable index {max_var}"),
        });
    }
    Ok(lit as u32)
}

fn parse_lit_field(s: &str, max_var: u32, loc: Loc) -> Result<u32, AigerError> {
    let v: u64 = s.parse().map_err(|_| AigerError::InvalidLiteral {
        loc,
        detail: format!("expected a literal, found {s:?}"),
    })?;
    check_lit(v, max_var, loc)
}

fn parse_reset(field: &str, current: u32, loc: Loc) -> Result<Reset, AigerError> {
    let v = parse_lit_field(field, u32::MAX / 2 - 1, loc)?;
    if v == 0 {
        Ok(Reset::Zero)
    } else if v == 1 {
        Ok(Reset::One)
    } else if v == current {
        Ok(Reset::Uninitialized)
    } else {
        Err(AigerError::InvalidLiteral {
            loc,
            detail: format!("latch reset must be 0, 1 or the latch literal {current}, found {v}"),
        })
    }
}

/// Validation shared by both readers once all sections are in.
fn finish(circuit: AigerCircuit, defs: &DefTable) -> Result<AigerCircuit, AigerError> {
    let check_defined = |lit: u32| -> Result<(), AigerError> {
        let var = lit >> 1;
        if var != 0 && !defs.defined(var) {
            return Err(AigerError::InvalidLiteral {
                loc: Loc::Line(0),
                detail: format!("literal {lit} references undefined variable {var}"),
            });
        }
        Ok(())
    };
    for l in &circuit.latches {
        check_defined(l.next)?;
    }
    for &o in circuit.outputs.iter().chain(&circuit.bad) {
        check_defined(o)?;
    }
    for g in &circuit.and_gates {
        check_defined(g.rhs0)?;
        check_defined(g.rhs1)?;
    }
    Ok(circuit)
}

fn parse_ascii(bytes: &[u8]) -> Result<AigerCircuit, AigerError> {
    let text = std::str::from_utf8(bytes).map_err(|e| AigerError::MalformedHeader {
        loc: Loc::Byte(e.valid_up_to()),
        detail: "file is not valid UTF-8 text".into(),
    })?;
    let mut lines = text.lines().enumerate();
    let mut next_line = |section: &str| -> Result<(Loc, &str), AigerError> {
        match lines.next() {
            Some((idx, s)) => Ok((Loc::Line(idx + 1), s)),
            None => Err(AigerError::TruncatedFile {
                loc: Loc::Line(text.lines().count() + 1),
                detail: format!("file ends inside the {section} section"),
            }),
        }
    };

    let (hloc, hline) = next_line("header")?;
    let h = parse_header(hline, hloc)?;
    let mut defs = DefTable::new(h.m);
    let mut circuit = AigerCircuit {
        max_var: h.m,
        inputs: Vec::with_capacity(h.i as usize),
        latches: Vec::with_capacity(h.l as usize),
        outputs: Vec::with_capacity(h.o as usize),
        bad: Vec::with_capacity(h.b as usize),
        and_gates: Vec::with_capacity(h.a as usize),
    };

    for _ in 0..h.i {
        let (loc, line) = next_line("input")?;
        let lit = parse_lit_field(line.trim(), h.m, loc)?;
        if lit & 1 != 0 || lit < 2 {
            return Err(AigerError::InvalidLiteral {
                loc,
                detail: format!("input must be a positive even literal >= 2, found {lit}"),
            });
        }
        defs.define(lit >> 1, loc)?;
        circuit.inputs.push(lit);
    }

    for _ in 0..h.l {
        let (loc, line) = next_line("latch")?;
        let fields: Vec<&str> = line.split_ascii_whitespace().collect();
        if fields.len() != 2 && fields.len() != 3 {
            return Err(AigerError::InvalidLiteral {
                loc,
                detail: format!("latch line needs 2 or 3 fields, found {}", fields.len()),
            });
        }
        let current = parse_lit_field(fields[0], h.m, loc)?;
        if current & 1 != 0 || current < 2 {
            return Err(AigerError::InvalidLiteral {
                loc,
                detail: format!("latch literal must be a positive even literal, found {current}"),
            });
        }
        let next = parse_lit_field(fields[1], h.m, loc)?;
        let reset = match fields.get(2) {
            Some(f) => parse_reset(f, current, loc)?,
            None => Reset::Zero,
        };
        defs.define(current >> 1, loc)?;
        circuit.latches.push(Latch {
            current,
            next,
            reset,
        });
    }

    for _ in 0..h.o {
        let (loc, line) = next_line("output")?;
        circuit.outputs.push(parse_lit_field(line.trim(), h.m, loc)?);
    }
    for _ in 0..h.b {
        let (loc, line) = next_line("bad")?;
        circuit.bad.push(parse_lit_field(line.trim(), h.m, loc)?);
    }

    for _ in 0..h.a {
        let (loc, line) = next_line("and-gate")?;
        let fields: Vec<&str> = line.split_ascii_whitespace().collect();
        if fields.len() != 3 {
            return Err(AigerError::InvalidLiteral {
                loc,
                detail: format!("and-gate line needs 3 fields, found {}", fields.len()),
            });
        }
        let lhs = parse_lit_field(fields[0], h.m, loc)?;
        let mut rhs0 = parse_lit_field(fields[1], h.m, loc)?;
        let mut rhs1 = parse_lit_field(fields[2], h.m, loc)?;
        // Operand order carries no meaning; normalize so rhs0 >= rhs1, which
        // is also what the binary encoding requires.
        if rhs0 < rhs1 {
            std::mem::swap(&mut rhs0, &mut rhs1);
        }
        if lhs & 1 != 0 {
            return Err(AigerError::InvalidLiteral {
                loc,
                detail: format!("and-gate lhs must be even, found {lhs}"),
            });
        }
        if lhs <= rhs0 {
            return Err(AigerError::NonMonotonicGate {
                loc,
                lhs,
                rhs0,
                rhs1,
            });
        }
        defs.define(lhs >> 1, loc)?;
        circuit.and_gates.push(AndGate { lhs, rhs0, rhs1 });
    }

    // Remaining lines may only be a symbol table and comments.
    for (idx, line) in lines {
        let loc = Loc::Line(idx + 1);
        if line == "c" {
            break; // comment section runs to end of file
        }
        let mut chars = line.chars();
        let kind = chars.next();
        let is_symbol = matches!(kind, Some('i' | 'l' | 'o' | 'b'))
            && chars.as_str().split(' ').next().is_some_and(|idx_str| {
                !idx_str.is_empty() && idx_str.chars().all(|c| c.is_ascii_digit())
            });
        if !is_symbol {
            return Err(AigerError::InvalidLiteral {
                loc,
                detail: format!("unexpected line {line:?} after the and-gate section"),
            });
        }
    }

    finish(circuit, &defs)
}

fn parse_binary(bytes: &[u8]) -> Result<AigerCircuit, AigerError> {
    let mut pos = 0usize;
    let mut read_line = |section: &str| -> Result<(Loc, usize, String), AigerError> {
        let start = pos;
        let end = bytes[start..]
            .iter()
            .position(|&b| b == b'\n')
            .map(|off| start + off)
            .ok_or_else(|| AigerError::TruncatedFile {
                loc: Loc::Byte(bytes.len()),
                detail: format!("file ends inside the {section} section"),
            })?;
        pos = end + 1;
        let s = std::str::from_utf8(&bytes[start..end]).map_err(|_| AigerError::InvalidLiteral {
            loc: Loc::Byte(start),
            detail: format!("non-ASCII bytes in the {section} section"),
        })?;
        Ok((Loc::Byte(start), start, s.to_owned()))
    };

    let (hloc, _, hline) = read_line("header")?;
    let h = parse_header(&hline, hloc)?;
    if h.m != h.i + h.l + h.a {
        return Err(AigerError::MalformedHeader {
            loc: hloc,
            detail: format!(
                "binary files need M = I + L + A, found {} != {} + {} + {}",
                h.m, h.i, h.l, h.a
            ),
        });
    }

    let mut defs = DefTable::new(h.m);
    let mut circuit = AigerCircuit {
        max_var: h.m,
        inputs: Vec::with_capacity(h.i as usize),
        latches: Vec::with_capacity(h.l as usize),
        outputs: Vec::with_capacity(h.o as usize),
        bad: Vec::with_capacity(h.b as usize),
        and_gates: Vec::with_capacity(h.a as usize),
    };

    // Inputs are implicit: variables 1..=I.
    for v in 1..=h.i {
        defs.define(v, Loc::Byte(0))?;
        circuit.inputs.push(2 * v);
    }

    for idx in 0..h.l {
        let (loc, _, line) = read_line("latch")?;
        let current = 2 * (h.i + idx + 1);
        let fields: Vec<&str> = line.split_ascii_whitespace().collect();
        if fields.is_empty() || fields.len() > 2 {
            return Err(AigerError::InvalidLiteral {
                loc,
                detail: format!("latch line needs 1 or 2 fields, found {}", fields.len()),
            });
        }
        let next = parse_lit_field(fields[0], h.m, loc)?;
        let reset = match fields.get(1) {
            Some(f) => parse_reset(f, current, loc)?,
            None => Reset::Zero,
        };
        defs.define(current >> 1, loc)?;
        circuit.latches.push(Latch {
            current,
            next,
            reset,
        });
    }

    for _ in 0..h.o {
        let (loc, _, line) = read_line("output")?;
        circuit.outputs.push(parse_lit_field(line.trim(), h.m, loc)?);
    }
    for _ in 0..h.b {
        let (loc, _, line) = read_line("bad")?;
        circuit.bad.push(parse_lit_field(line.trim(), h.m, loc)?);
    }

    // And gates: delta-encoded varints. Gate i has implicit
    // lhs = 2 * (I + L + i + 1) and stores lhs - rhs0, rhs0 - rhs1.
    fn read_delta(bytes: &[u8], pos: &mut usize, gate_lhs: u32) -> Result<u64, AigerError> {
        let start = *pos;
        let mut value: u64 = 0;
        let mut shift = 0u32;
        loop {
            let &byte = bytes.get(*pos).ok_or_else(|| AigerError::TruncatedFile {
                loc: Loc::Byte(bytes.len()),
                detail: format!("file ends inside the delta code of and-gate {gate_lhs}"),
            })?;
            *pos += 1;
            if shift > 35 {
                return Err(AigerError::InvalidLiteral {
                    loc: Loc::Byte(start),
                    detail: format!("delta code of and-gate {gate_lhs} is too long"),
                });
            }
            value |= ((byte & 0x7f) as u64) << shift;
            if byte & 0x80 == 0 {
                return Ok(value);
            }
            shift += 7;
        }
    }

    for idx in 0..h.a {
        let lhs = 2 * (h.i + h.l + idx + 1);
        let gate_start = pos;
        let delta0 = read_delta(bytes, &mut pos, lhs)?;
        let delta1 = read_delta(bytes, &mut pos, lhs)?;
        let rhs0 = lhs as i64 - delta0 as i64;
        let rhs1 = rhs0 - delta1 as i64;
        if delta0 == 0 || rhs1 < 0 {
            return Err(AigerError::NonMonotonicGate {
                loc: Loc::Byte(gate_start),
                lhs,
                rhs0: rhs0.max(0) as u32,
                rhs1: rhs1.max(0) as u32,
            });
        }
        defs.define(lhs >> 1, Loc::Byte(gate_start))?;
        circuit.and_gates.push(AndGate {
            lhs,
            rhs0: rhs0 as u32,
            rhs1: rhs1 as u32,
        });
    }

    // Symbol table and comments are not validated beyond this point.
    finish(circuit, &defs)
}

impl AigerCircuit {
    /// Renders the circuit in the ASCII "aag" format. `parse_aiger` on the
    /// result reproduces the circuit exactly.
    pub fn write_ascii(&self) -> Vec<u8> {
        use std::io::Write;
        let mut out = Vec::new();
        write!(
            out,
            "aag {} {} {} {} {}",
            self.max_var,
            self.inputs.len(),
            self.latches.len(),
            self.outputs.len(),
            self.and_gates.len()
        )
        .unwrap();
        if !self.bad.is_empty() {
            write!(out, " {}", self.bad.len()).unwrap();
        }
        out.push(b'\n');
        for &i in &self.inputs {
            writeln!(out, "{i}").unwrap();
        }
        for l in &self.latches {
            match l.reset {
                Reset::Zero => writeln!(out, "{} {}", l.current, l.next).unwrap(),
                Reset::One => writeln!(out, "{} {} 1", l.current, l.next).unwrap(),
                Reset::Uninitialized => {
                    writeln!(out, "{} {} {}", l.current, l.next, l.current).unwrap()
                }
            }
        }
        for &o in &self.outputs {
            writeln!(out, "{o}").unwrap();
        }
        for &b in &self.bad {
            writeln!(out, "{b}").unwrap();
        }
        for g in &self.and_gates {
            writeln!(out, "{} {} {}", g.lhs, g.rhs0, g.rhs1).unwrap();
        }
        out
    }

    /// Renders the circuit in the binary "aig" format, renumbering variables
    /// into the canonical inputs / latches / gates order the format requires.
    pub fn write_binary(&self) -> Vec<u8> {
        use std::io::Write;
        let c = self.canonicalize();
        let mut out = Vec::new();
        write!(
            out,
            "aig {} {} {} {} {}",
            c.max_var,
            c.inputs.len(),
            c.latches.len(),
            c.outputs.len(),
            c.and_gates.len()
        )
        .unwrap();
        if !c.bad.is_empty() {
            write!(out, " {}", c.bad.len()).unwrap();
        }
        out.push(b'\n');
        for l in &c.latches {
            match l.reset {
                Reset::Zero => writeln!(out, "{}", l.next).unwrap(),
                Reset::One => writeln!(out, "{} 1", l.next).unwrap(),
                Reset::Uninitialized => writeln!(out, "{} {}", l.next, l.current).unwrap(),
            }
        }
        for &o in &c.outputs {
            writeln!(out, "{o}").unwrap();
        }
        for &b in &c.bad {
            writeln!(out, "{b}").unwrap();
        }
        let mut push_delta = |mut v: u32| loop {
            let byte = (v & 0x7f) as u8;
            v >>= 7;
            if v == 0 {
                out.push(byte);
                break;
            }
            out.push(byte | 0x80);
        };
        for g in &c.and_gates {
            push_delta(g.lhs - g.rhs0);
            push_delta(g.rhs0 - g.rhs1);
        }
        out
    }

    /// Remaps variables to the canonical dense numbering: inputs first, then
    /// latches, then gates in topological (ascending lhs) order. Holes in the
    /// variable space disappear; the circuit's behavior is unchanged.
    pub fn canonicalize(&self) -> AigerCircuit {
        let mut map: Vec<u32> = vec![0; self.max_var as usize + 1];
        let mut next = 1u32;
        for &i in &self.inputs {
            map[(i >> 1) as usize] = next;
            next += 1;
        }
        for l in &self.latches {
            map[(l.current >> 1) as usize] = next;
            next += 1;
        }
        let mut gates = self.and_gates.clone();
        gates.sort_by_key(|g| g.lhs);
        for g in &gates {
            map[(g.lhs >> 1) as usize] = next;
            next += 1;
        }
        let ml = |lit: u32| map[(lit >> 1) as usize] * 2 + (lit & 1);
        AigerCircuit {
            max_var: next - 1,
            inputs: self.inputs.iter().map(|&l| ml(l)).collect(),
            latches: self
                .latches
                .iter()
                .map(|l| Latch {
                    current: ml(l.current),
                    next: ml(l.next),
                    reset: l.reset,
                })
                .collect(),
            outputs: self.outputs.iter().map(|&l| ml(l)).collect(),
            bad: self.bad.iter().map(|&l| ml(l)).collect(),
            and_gates: gates
                .iter()
                .map(|g| {
                    let (mut r0, mut r1) = (ml(g.rhs0), ml(g.rhs1));
                    if r0 < r1 {
                        std::mem::swap(&mut r0, &mut r1);
                    }
                    AndGate {
                        lhs: ml(g.lhs),
                        rhs0: r0,
                        rhs1: r1,
                    }
                })
                .collect(),
        }
    }
}
