//! Shared circuit generators for the integration and acceptance tests.
//!
//! Everything here produces ASCII AIGER text. The small-parameter circuits
//! stay within the explicit-state oracle's universe limit so the two engines
//! can be cross-checked; the scaling families below are sized for the
//! benchmark harness instead.

#![allow(dead_code)]

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Tiny and-inverter netlist builder with constant folding.
///
/// Literal convention matches AIGER: `0`/`1` are the constants, inputs start
/// at variable 1, latches follow the inputs, gates follow the latches, and
/// `lit ^ 1` negates.
pub struct Netlist {
    ni: u32,
    nl: u32,
    next_lit: u32,
    gates: Vec<(u32, u32, u32)>,
}

impl Netlist {
    pub fn new(ni: u32, nl: u32) -> Netlist {
        Netlist {
            ni,
            nl,
            next_lit: 2 * (ni + nl) + 2,
            gates: Vec::new(),
        }
    }

    pub fn input(&self, k: u32) -> u32 {
        assert!(k < self.ni);
        2 * (1 + k)
    }

    pub fn latch(&self, k: u32) -> u32 {
        assert!(k < self.nl);
        2 * (1 + self.ni + k)
    }

    /// AND of two literals; folds constants, duplicates, and complements.
    pub fn and2(&mut self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        if a == 1 {
            return b;
        }
        if b == 1 {
            return a;
        }
        if a == b {
            return a;
        }
        if a == (b ^ 1) {
            return 0;
        }
        let lhs = self.next_lit;
        self.next_lit += 2;
        self.gates.push((lhs, a.max(b), a.min(b)));
        lhs
    }

    pub fn or2(&mut self, a: u32, b: u32) -> u32 {
        self.and2(a ^ 1, b ^ 1) ^ 1
    }

    pub fn xor2(&mut self, a: u32, b: u32) -> u32 {
        let t1 = self.and2(a, b ^ 1);
        let t2 = self.and2(a ^ 1, b);
        self.or2(t1, t2)
    }

    pub fn and_all(&mut self, xs: &[u32]) -> u32 {
        xs.iter().fold(1, |acc, &x| self.and2(acc, x))
    }

    pub fn or_all(&mut self, xs: &[u32]) -> u32 {
        xs.iter().fold(0, |acc, &x| self.or2(acc, x))
    }

    /// Renders the circuit; all latches reset to zero.
    pub fn to_aag(&self, nexts: &[u32], bad: u32) -> String {
        self.to_aag_with_resets(nexts, bad, &vec![false; self.nl as usize])
    }

    /// Renders the circuit with a per-latch reset-to-one mask.
    pub fn to_aag_with_resets(&self, nexts: &[u32], bad: u32, ones: &[bool]) -> String {
        assert_eq!(nexts.len(), self.nl as usize);
        assert_eq!(ones.len(), self.nl as usize);
        let mut out = format!(
            "aag {} {} {} 1 {}\n",
            self.next_lit / 2 - 1,
            self.ni,
            self.nl,
            self.gates.len()
        );
        for k in 0..self.ni {
            out.push_str(&format!("{}\n", self.input(k)));
        }
        for k in 0..self.nl {
            if ones[k as usize] {
                out.push_str(&format!("{} {} 1\n", self.latch(k), nexts[k as usize]));
            } else {
                out.push_str(&format!("{} {}\n", self.latch(k), nexts[k as usize]));
            }
        }
        out.push_str(&format!("{bad}\n"));
        for &(lhs, a, b) in &self.gates {
            out.push_str(&format!("{lhs} {a} {b}\n"));
        }
        out
    }
}

/// Wrap counter: `v' = (v == TOP) ? 0 : v + 1` with `TOP = 2^n - 2^j`,
/// bad = all-ones. Safe; the tail `(TOP, 2^n)` is unreachable and its states
/// form predecessor chains of length `2^j - 1`.
pub fn wrap_chain(n: u32, j: u32) -> String {
    assert!(0 < j && j < n);
    let mut b = Netlist::new(0, n);
    let x: Vec<u32> = (0..n).map(|k| b.latch(k)).collect();
    let mut s = Vec::new();
    let mut c = 1;
    for &xm in &x {
        s.push(b.xor2(xm, c));
        c = b.and2(xm, c);
    }
    let mut at_top: Vec<u32> = (j..n).map(|m| x[m as usize]).collect();
    at_top.extend((0..j).map(|m| x[m as usize] ^ 1));
    let top = b.and_all(&at_top);
    let nxt: Vec<u32> = (0..n as usize).map(|m| b.and2(s[m], top ^ 1)).collect();
    let bad = b.and_all(&x);
    b.to_aag(&nxt, bad)
}

/// Jump trap: an n-bit register starts at the fence `TOP = 2^n - 2^j`.
/// Below the fence it walks `v' = v + 1 + (u << p)` saturating at `TOP`
/// (so it never crosses); above the fence — unreachable — the same walk
/// wraps mod `2^n`. Bad = all-ones. The strided input fan gives
/// generalization `2^i` scattered predecessors per blocked state, and joins
/// collapse onto the fence state, so dropping literals is hard work.
pub fn jump_trap(n: u32, j: u32, i: u32, p: u32) -> String {
    assert!(0 < j && j < n);
    let mut b = Netlist::new(i, n);
    let u: Vec<u32> = (0..i).map(|k| b.input(k)).collect();
    let x: Vec<u32> = (0..n).map(|k| b.latch(k)).collect();
    // w = 1 + (u << p); for p == 0 that is u + 1, otherwise the shifted
    // input and the +1 occupy disjoint bits
    let mut w = vec![0u32; n as usize + 1];
    if p == 0 {
        let mut cc = 1;
        for m in 0..i as usize {
            w[m] = b.xor2(u[m], cc);
            cc = b.and2(u[m], cc);
        }
        w[i as usize] = cc;
    } else {
        w[0] = 1;
        for m in 0..i {
            if p + m < n {
                w[(p + m) as usize] = u[m as usize];
            }
        }
    }
    // s = v + w, keeping the carry out
    let mut s = Vec::new();
    let mut c = 0;
    for m in 0..n as usize {
        let ab = b.xor2(x[m], w[m]);
        s.push(b.xor2(ab, c));
        let t1 = b.and2(x[m], w[m]);
        let t2 = b.and2(c, ab);
        c = b.or2(t1, t2);
    }
    let carry_out = c;
    // v > TOP and s > TOP: upper bits all one, low bits not all zero
    let gt_top = |b: &mut Netlist, bits: &[u32]| {
        let hi: Vec<u32> = (j..n).map(|m| bits[m as usize]).collect();
        let lo: Vec<u32> = (0..j).map(|m| bits[m as usize]).collect();
        let hi_all = b.and_all(&hi);
        let lo_any = b.or_all(&lo);
        b.and2(hi_all, lo_any)
    };
    let live = gt_top(&mut b, &x);
    let s_over = gt_top(&mut b, &s);
    let over = b.or2(carry_out, s_over);
    // below the fence saturate overshoot at TOP; above it wrap mod 2^n
    let mut nxt = Vec::new();
    for (m, &sm) in s.iter().enumerate() {
        let dead = if m as u32 >= j {
            b.or2(over, sm) // TOP bit is 1 here
        } else {
            b.and2(over ^ 1, sm) // TOP bit is 0 here
        };
        let t1 = b.and2(live, sm);
        let t2 = b.and2(live ^ 1, dead);
        nxt.push(b.or2(t1, t2));
    }
    let bad = b.and_all(&x);
    let ones: Vec<bool> = (0..n).map(|m| m >= j).collect();
    b.to_aag_with_resets(&nxt, bad, &ones)
}

/// Monotone lattice walk: `j` latches and two `i`-bit one-hot selectors.
/// From any nonzero state the next state ORs in up to two selected bits
/// (selector codes `>= j` stall that selector); the zero state is a fixpoint
/// and the sole initial state, so bad = all-ones is unreachable. Predecessor
/// fans near the top have width ~`C(j,2)`, which drives obligation retry
/// counts — and with them the activity-based strategy selector — far higher
/// than any arithmetic walk does.
pub fn twohot_lattice(j: u32, i: u32) -> String {
    assert!(j >= 2 && j <= (1 << i) * 2);
    let mut b = Netlist::new(2 * i, j);
    let u1: Vec<u32> = (0..i).map(|k| b.input(k)).collect();
    let u2: Vec<u32> = (0..i).map(|k| b.input(i + k)).collect();
    let x: Vec<u32> = (0..j).map(|k| b.latch(k)).collect();
    let onehot = |b: &mut Netlist, u: &[u32], m: u32| {
        let bits: Vec<u32> = (0..i)
            .map(|t| {
                if (m >> t) & 1 == 1 {
                    u[t as usize]
                } else {
                    u[t as usize] ^ 1
                }
            })
            .collect();
        b.and_all(&bits)
    };
    let live = b.or_all(&x);
    let mut nxt = Vec::new();
    for m in 0..j {
        let h1 = onehot(&mut b, &u1, m);
        let h2 = onehot(&mut b, &u2, m);
        let set = b.or_all(&[x[m as usize], h1, h2]);
        nxt.push(b.and2(live, set));
    }
    let bad = b.and_all(&x);
    b.to_aag(&nxt, bad)
}

/// Free-running n-bit counter from zero, bad = all-ones: unsafe with the
/// deepest possible minimal counterexample, `2^n - 1` steps.
pub fn full_counter(n: u32) -> String {
    let mut b = Netlist::new(0, n);
    let x: Vec<u32> = (0..n).map(|k| b.latch(k)).collect();
    let mut nxt = Vec::new();
    let mut c = 1;
    for &xm in &x {
        nxt.push(b.xor2(xm, c));
        c = b.and2(xm, c);
    }
    let bad = b.and_all(&x);
    b.to_aag(&nxt, bad)
}

/// Bank of n toggles flipping in phase from zero. With `skewed` the first
/// latch starts at one instead. Bad compares the first two latches:
/// `equal` selects `x0 AND NOT x1` (safe in phase, violated immediately when
/// skewed), otherwise `x0 AND x1` (violated at step 1 in phase, safe when
/// skewed).
pub fn toggle_bank(n: u32, skewed: bool, equal: bool) -> String {
    assert!(n >= 2);
    let mut b = Netlist::new(0, n);
    let x: Vec<u32> = (0..n).map(|k| b.latch(k)).collect();
    let nxt: Vec<u32> = x.iter().map(|&l| l ^ 1).collect();
    let bad = if equal {
        b.and2(x[0], x[1] ^ 1)
    } else {
        b.and2(x[0], x[1])
    };
    let mut ones = vec![false; n as usize];
    ones[0] = skewed;
    b.to_aag_with_resets(&nxt, bad, &ones)
}

/// Closed shift ring of zeros; bad = any latch set. Safe.
pub fn shift_ring(n: u32) -> String {
    assert!(n >= 2);
    let mut b = Netlist::new(0, n);
    let x: Vec<u32> = (0..n).map(|k| b.latch(k)).collect();
    let mut nxt = vec![x[n as usize - 1]];
    nxt.extend((1..n as usize).map(|m| x[m - 1]));
    let bad = b.or_all(&x);
    b.to_aag(&nxt, bad)
}

/// Shift register fed by an input; bad = last latch. Unsafe at depth n.
pub fn shift_inject(n: u32) -> String {
    assert!(n >= 1);
    let b = Netlist::new(1, n);
    let x: Vec<u32> = (0..n).map(|k| b.latch(k)).collect();
    let mut nxt = vec![b.input(0)];
    nxt.extend((1..n as usize).map(|m| x[m - 1]));
    b.to_aag(&nxt, x[n as usize - 1])
}

/// Linear feedback shift register seeded with a single one; bad = all-ones.
/// Whether the all-ones state lies on the cycle depends on n, so the
/// expected verdict comes from the oracle, not from construction.
pub fn shift_lfsr(n: u32) -> String {
    assert!(n >= 2);
    let mut b = Netlist::new(0, n);
    let x: Vec<u32> = (0..n).map(|k| b.latch(k)).collect();
    let feedback = b.xor2(x[n as usize - 1], x[0]);
    let mut nxt = vec![feedback];
    nxt.extend((1..n as usize).map(|m| x[m - 1]));
    let bad = b.and_all(&x);
    let mut ones = vec![false; n as usize];
    ones[0] = true;
    b.to_aag_with_resets(&nxt, bad, &ones)
}

/// Random netlist: gates draw operands (with random polarity) from the pool
/// of constants, inputs, latches, and earlier gates; latch updates and the
/// bad literal draw from the same pool. Safety is decided by the oracle.
pub fn random_netlist(seed: u64, ni: u32, nl: u32, ngates: u32) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut b = Netlist::new(ni, nl);
    let mut pool: Vec<u32> = vec![0, 1];
    pool.extend((0..ni).map(|k| b.input(k)));
    pool.extend((0..nl).map(|k| b.latch(k)));
    let pick = |rng: &mut ChaCha8Rng, pool: &[u32]| {
        let lit = pool[rng.gen_range(0..pool.len())];
        lit ^ u32::from(rng.gen_bool(0.5))
    };
    for _ in 0..ngates {
        let a = pick(&mut rng, &pool);
        let c = pick(&mut rng, &pool);
        let g = b.and2(a, c);
        pool.push(g);
    }
    let nexts: Vec<u32> = (0..nl).map(|_| pick(&mut rng, &pool)).collect();
    let bad = pick(&mut rng, &pool);
    b.to_aag(&nexts, bad)
}

/// Hand-written fixtures exercising parser and engine edge cases.
fn hand_circuits() -> Vec<(String, String)> {
    let fixtures: [(&str, &str); 6] = [
        ("hand_toggle_unsafe", "aag 1 0 1 1 0\n2 3\n2\n"),
        ("hand_depth_zero", "aag 1 0 1 1 0\n2 3\n3\n"),
        ("hand_identity_safe", "aag 1 0 1 1 0\n2 2\n2\n"),
        (
            "hand_counter_2bit",
            "aag 6 0 2 1 4\n2 3\n4 11\n12\n6 2 5\n8 4 3\n10 7 9\n12 2 4\n",
        ),
        ("hand_input_or", "aag 3 1 1 1 1\n2\n4 7\n4\n6 3 5\n"),
        ("hand_gated_pair", "aag 3 0 2 1 1\n2 2\n4 2\n6\n6 2 4\n"),
    ];
    fixtures
        .iter()
        .map(|&(n, s)| (n.to_string(), s.to_string()))
        .collect()
}

/// The oracle-checkable corpus: 212 circuits, every one within 16 combined
/// latch/input bits. Names are unique and stable across runs.
pub fn corpus() -> Vec<(String, String)> {
    let mut out = hand_circuits();
    for &(n, j) in &[
        (4, 2),
        (5, 2),
        (5, 3),
        (6, 2),
        (6, 3),
        (6, 4),
        (7, 3),
        (7, 4),
        (8, 3),
        (8, 4),
    ] {
        out.push((format!("chain_{n:02}_{j:02}"), wrap_chain(n, j)));
    }
    for &(n, j, i, p) in &[(6, 3, 2, 0), (7, 4, 2, 1), (8, 5, 2, 1), (8, 5, 3, 2)] {
        out.push((
            format!("trap_{n:02}_{j:02}_{i:02}_{p:02}"),
            jump_trap(n, j, i, p),
        ));
    }
    for &(j, i) in &[(4, 2), (5, 3), (6, 3)] {
        out.push((format!("twohot_{j:02}_{i:02}"), twohot_lattice(j, i)));
    }
    for n in 2..=5 {
        out.push((format!("ctr_{n:02}"), full_counter(n)));
    }
    for n in 2..=7 {
        out.push((format!("tgl_eq_{n:02}"), toggle_bank(n, false, true)));
        out.push((format!("tgl_both_{n:02}"), toggle_bank(n, false, false)));
        out.push((format!("tgl_skew_{n:02}"), toggle_bank(n, true, false)));
    }
    for n in 3..=11 {
        out.push((format!("ring_{n:02}"), shift_ring(n)));
    }
    for n in 2..=10 {
        out.push((format!("inject_{n:02}"), shift_inject(n)));
    }
    for n in 2..=10 {
        out.push((format!("lfsr_{n:02}"), shift_lfsr(n)));
    }
    for &(ni, nl, ngates) in &[
        (0, 4, 8),
        (1, 4, 10),
        (2, 4, 12),
        (0, 6, 12),
        (1, 6, 14),
        (2, 6, 16),
        (3, 5, 14),
        (0, 8, 16),
        (1, 8, 18),
        (2, 8, 20),
        (2, 7, 16),
        (4, 6, 18),
        (3, 7, 18),
        (1, 9, 20),
    ] {
        for seed in 0..10u64 {
            out.push((
                format!("rand_i{ni}_l{nl}_g{ngates}_s{seed:02}"),
                random_netlist(seed, ni, nl, ngates),
            ));
        }
    }
    out
}

/// The 20 designated circuits for the trace-comparison and determinism runs.
pub fn designated_names() -> [&'static str; 20] {
    [
        "hand_counter_2bit",
        "hand_gated_pair",
        "chain_06_03",
        "chain_07_04",
        "chain_08_03",
        "trap_07_04_02_01",
        "trap_08_05_03_02",
        "twohot_05_03",
        "twohot_06_03",
        "ctr_04",
        "tgl_eq_04",
        "tgl_skew_05",
        "ring_06",
        "inject_06",
        "lfsr_07",
        "rand_i0_l6_g12_s03",
        "rand_i1_l6_g14_s07",
        "rand_i2_l6_g16_s01",
        "rand_i2_l8_g20_s05",
        "rand_i3_l7_g18_s02",
    ]
}

/// Filters the corpus down to the designated 20-circuit set.
pub fn designated_sub_corpus() -> Vec<(String, String)> {
    let names = designated_names();
    let sub: Vec<(String, String)> = corpus()
        .into_iter()
        .filter(|(n, _)| names.contains(&n.as_str()))
        .collect();
    assert_eq!(sub.len(), names.len(), "designated names must all exist");
    sub
}

/// The scaling corpus for the benchmark harness: 24 cases mixing sizes where
/// budget-bounded generalization pays a tax against sizes only it can crack,
/// spanning 8 to 40 latches. Sized for a 60-second per-case limit.
pub fn scaling_corpus() -> Vec<(String, String)> {
    let mut out = Vec::new();
    for &(n, j) in &[
        (11, 3),
        (12, 3),
        (13, 3),
        (14, 3),
        (15, 3),
        (16, 3),
        (17, 3),
        (12, 4),
        (13, 4),
        (14, 4),
        (15, 4),
        (16, 4),
        (17, 4),
        (18, 4),
    ] {
        out.push((format!("chain_{n:02}_{j:02}"), wrap_chain(n, j)));
    }
    for &(n, j, i, p) in &[
        (20, 12, 6, 3),
        (24, 12, 6, 3),
        (28, 11, 6, 3),
        (36, 11, 6, 3),
        (40, 10, 6, 3),
    ] {
        out.push((
            format!("trap_{n:02}_{j:02}_{i:02}_{p:02}"),
            jump_trap(n, j, i, p),
        ));
    }
    for &(j, i) in &[(8, 3), (12, 4), (16, 4), (18, 5), (20, 5)] {
        out.push((format!("twohot_{j:02}_{i:02}"), twohot_lattice(j, i)));
    }
    out
}
