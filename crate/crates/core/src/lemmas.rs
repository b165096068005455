//! Interval machinery behind the distinct-count lower bound: quadratic
//! image counts in windows, the shift/difference sieve, solution counts
//! of (n!)^2 = P(n), and the factorial-coloring pair analysis with its
//! Wilson-identity reduction.
//!
//! The unconditional statements here (the shift sieve guarantee, the
//! coloring checks (i)-(iv), the derived pair congruence) are verified,
//! not assumed; a violation is surfaced as a failed flag so callers can
//! treat it as a hard finding.  The analytic estimates (Burgess-strength
//! deviations, the N^(3/4) solution envelope) only carry soft envelopes,
//! since their implied constants are not explicit.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::modarith::{factorials_at, jacobi, FactorialStream, PrimeCtx};
use crate::polyfp::PolyFp;
use crate::residues::Window;

/// P(x) = x^2 + bx + c over F_p, coefficients stored reduced.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Quadratic {
    pub b: u64,
    pub c: u64,
}

impl Quadratic {
    pub fn new(ctx: &PrimeCtx, b: i64, c: i64) -> Quadratic {
        let p = ctx.p() as i64;
        Quadratic {
            b: b.rem_euclid(p) as u64,
            c: c.rem_euclid(p) as u64,
        }
    }

    pub fn eval(&self, ctx: &PrimeCtx, x: u64) -> u64 {
        ctx.add(ctx.mul(x, ctx.add(x, self.b)), self.c)
    }
}

/// Count of window values hit by x^2 + bx + c, against the N/2 target.
#[derive(Debug, Clone, Serialize)]
pub struct BurgessReport {
    pub p: u64,
    pub b: u64,
    pub c: u64,
    pub h: u64,
    pub n: u64,
    pub count: u64,
    /// N/2, the main term for the image count.
    pub expected: f64,
    pub deviation: f64,
    /// 3 sqrt(p) ln p: a soft Polya-Vinogradov-scale envelope, reported
    /// rather than asserted because the true error constant is not
    /// explicit.
    pub envelope: f64,
    pub within_envelope: bool,
}

/// Counts y in the window [H, H+N] (values taken mod p, so a window
/// crossing p-1 wraps) that the quadratic attains.  Completing the square
/// turns membership into one quadratic-character evaluation: y = P(x) is
/// solvable iff 4y + b^2 - 4c is a square (or zero) mod p.
pub fn burgess_count(ctx: &PrimeCtx, q: Quadratic, h: u64, n: u64) -> Result<BurgessReport> {
    let p = ctx.p();
    if n >= p {
        return Err(Error::OutOfRange {
            what: "quadratic image window length N",
            value: n,
            lo: 0,
            hi: p - 1,
        });
    }
    let four = 4 % p;
    let shift = ctx.sub(ctx.mul(q.b, q.b), ctx.mul(four, q.c));
    let mut y = h % p;
    let mut count = 0u64;
    for _ in 0..=n {
        let t = ctx.add(ctx.mul(four, y), shift);
        if jacobi(t as i64, p).expect("p odd") >= 0 {
            count += 1;
        }
        y += 1;
        if y == p {
            y = 0;
        }
    }
    let expected = n as f64 / 2.0;
    let deviation = count as f64 - expected;
    let envelope = 3.0 * (p as f64).sqrt() * (p as f64).ln();
    Ok(BurgessReport {
        p,
        b: q.b,
        c: q.c,
        h,
        n,
        count,
        expected,
        deviation,
        envelope,
        within_envelope: deviation.abs() <= envelope,
    })
}

/// Exhaustive oracle for [`burgess_count`]: mark P(x) for every x in F_p,
/// then count the same window.  O(p), guarded.
pub fn quadratic_image_oracle(ctx: &PrimeCtx, q: Quadratic, h: u64, n: u64) -> Result<u64> {
    const GUARD: u64 = 10_000_000;
    let p = ctx.p();
    if p > GUARD {
        return Err(Error::GuardExceeded {
            what: "image oracle modulus",
            value: p,
            max: GUARD,
        });
    }
    if n >= p {
        return Err(Error::OutOfRange {
            what: "quadratic image window length N",
            value: n,
            lo: 0,
            hi: p - 1,
        });
    }
    let mut image = vec![false; p as usize];
    for x in 0..p {
        image[q.eval(ctx, x) as usize] = true;
    }
    let mut y = h % p;
    let mut count = 0u64;
    for _ in 0..=n {
        count += image[y as usize] as u64;
        y += 1;
        if y == p {
            y = 0;
        }
    }
    Ok(count)
}

/// A shift d at which the set S repeats itself often; the difference
/// sieve guarantees such a d exists below ceil(1/alpha).
#[derive(Debug, Clone, Serialize)]
pub struct ShiftWitness {
    pub d: u64,
    /// #{(a, b) in S x S : a - b = d}.
    pub pair_count: u64,
    pub set_size: u64,
    pub interval_len: u64,
    /// |S| / interval_len.
    pub alpha: f64,
    /// alpha^3 * interval_len / 2, the guaranteed pair count.
    pub bound: f64,
    /// pair_count >= bound, checked exactly as
    /// 2 * pair_count * len^2 >= |S|^3.
    pub guarantee_ok: bool,
    /// bound < 1 (|S|^3 < 2 len^2): the guarantee asks for less than one
    /// pair, so pair_count = 0 still satisfies the underlying statement.
    pub vacuous: bool,
}

/// Finds the shift d in [1, ceil(1/alpha)] maximizing the number of pairs
/// a - b = d within S (ties broken toward the smallest d).  Positions are
/// translation-invariant, so only the interval length matters, not H.
pub fn sieve_shift_find(s: &[u64], interval_len: u64) -> Result<ShiftWitness> {
    const LEN_GUARD: u64 = 100_000_000;
    if s.is_empty() {
        return Err(Error::Invalid("shift witness needs a nonempty set"));
    }
    if interval_len == 0 {
        return Err(Error::Invalid(
            "shift witness needs a positive interval length",
        ));
    }
    if interval_len > LEN_GUARD {
        return Err(Error::GuardExceeded {
            what: "shift sieve interval length",
            value: interval_len,
            max: LEN_GUARD,
        });
    }
    let mut sorted = s.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let span = sorted.last().unwrap() - sorted[0] + 1;
    if span > interval_len {
        return Err(Error::Invalid("set spans more than the stated interval"));
    }
    let size = sorted.len() as u64;
    let alpha = size as f64 / interval_len as f64;
    let bound = alpha * alpha * alpha * interval_len as f64 / 2.0;
    let vacuous = (size as u128).pow(3) < 2 * (interval_len as u128).pow(2);
    let (mut d, mut pair_count) = (1u64, 0u64);
    if size > 1 {
        let dmax = interval_len.div_ceil(size);
        for cand in 1..=dmax {
            let count = sorted
                .iter()
                .filter(|&&a| sorted.binary_search(&(a + cand)).is_ok())
                .count() as u64;
            if count > pair_count {
                d = cand;
                pair_count = count;
            }
        }
    }
    let guarantee_ok =
        2 * pair_count as u128 * (interval_len as u128).pow(2) >= (size as u128).pow(3);
    Ok(ShiftWitness {
        d,
        pair_count,
        set_size: size,
        interval_len,
        alpha,
        bound,
        guarantee_ok,
        vacuous,
    })
}

/// Solutions of (n!)^2 = P(n) mod p in a window, with the derived
/// pair-congruence cross-check at the sieve's witness shift.
#[derive(Debug, Clone, Serialize)]
pub struct SquaredFactorialReport {
    pub p: u64,
    pub lo: u64,
    pub hi: u64,
    pub effective_len: u64,
    pub solutions: u64,
    pub solution_list: Vec<u64>,
    /// solutions / effective_len^(3/4); tracked as an empirical envelope.
    pub ratio: f64,
    /// Shift witness over the solution set, when there are >= 2 solutions.
    pub pair_shift: Option<ShiftWitness>,
    /// For every solution pair (n, n+d) at the witness shift, does
    /// P(n) (prod_{k=1..d} (n+k)^2 - 1) = P(n+d) - P(n) hold?  This is
    /// forced algebraically, so `false` would be a hard finding.
    pub pair_congruence_ok: Option<bool>,
}

pub fn squared_factorial_count(ctx: &PrimeCtx, poly: &PolyFp, w: Window) -> Result<SquaredFactorialReport> {
    const MAX_DEG: usize = 8;
    let p = ctx.p();
    if poly.modulus() != p {
        return Err(Error::MismatchedModulus {
            left: poly.modulus(),
            right: p,
        });
    }
    if poly.deg().unwrap_or(0) > MAX_DEG {
        return Err(Error::GuardExceeded {
            what: "congruence polynomial degree",
            value: poly.deg().unwrap_or(0) as u64,
            max: MAX_DEG as u64,
        });
    }
    let (lo, hi) = w.effective(p)?;
    let effective_len = hi - lo + 1;
    let mut solution_list = Vec::new();
    for (n, f) in FactorialStream::new(ctx, 2)? {
        if n > hi {
            break;
        }
        if n >= lo && ctx.mul(f, f) == poly.eval(n) {
            solution_list.push(n);
        }
    }
    let solutions = solution_list.len() as u64;
    let ratio = solutions as f64 / (effective_len as f64).powf(0.75);
    let (pair_shift, pair_congruence_ok) = if solutions >= 2 {
        let w = sieve_shift_find(&solution_list, effective_len)?;
        let d = w.d;
        let mut ok = true;
        for &n in &solution_list {
            if solution_list.binary_search(&(n + d)).is_err() {
                continue;
            }
            // prod_{k=1..d} (n+k)^2 mod p
            let mut prod = 1u64;
            for k in 1..=d {
                let m = (n + k) % p;
                prod = ctx.mul(prod, ctx.mul(m, m));
            }
            let lhs = ctx.mul(poly.eval(n), ctx.sub(prod, 1));
            let rhs = ctx.sub(poly.eval((n + d) % p), poly.eval(n));
            if lhs != rhs {
                ok = false;
            }
        }
        (Some(w), Some(ok))
    } else {
        (None, None)
    };
    Ok(SquaredFactorialReport {
        p,
        lo,
        hi,
        effective_len,
        solutions,
        solution_list,
        ratio,
        pair_shift,
        pair_congruence_ok,
    })
}

/// Results of the pair-coloring analysis on a window colored by factorial
/// value.  Checks (i)-(iv) are forced algebraically and must pass; the
/// pattern-union count and its envelope constant are reported.
#[derive(Debug, Clone, Serialize)]
pub struct ColoringReport {
    pub p: u64,
    pub lo: u64,
    pub hi: u64,
    /// hi - lo: the number of adjacent pairs and the N of the envelope.
    pub n_eff: u64,
    /// Distinct colors (factorial values) in the window.
    pub k: u64,
    pub adjacent_pairs: u64,
    pub adjacent_patterns: u64,
    /// (i) n -> (c(n), c(n+1)) is injective.
    pub adjacent_injective: bool,
    pub skip_pairs: u64,
    /// Index pairs n < m whose (n, n+2) and (m, m+2) patterns coincide
    /// (at most the first 64 are listed; the count is exact).
    pub couple_count: u64,
    pub couple_pairs: Vec<(u64, u64)>,
    /// (ii) every couple pair satisfies n + m + 3 = 0 mod p.
    pub sum_zero_ok: bool,
    /// (iii) ((n+2)!)^2 = (-1)^(n-1) (n+1)(n+2) for each couple member.
    pub wilson_ok: bool,
    pub cross_count: u64,
    pub cross_pairs: Vec<(u64, u64)>,
    /// (iv) (n, n+1) matching (m, m+2) forces n = m^2 + 3m + 1 mod p.
    pub cross_ok: bool,
    /// Distinct patterns among adjacent and skip pairs together.
    pub pattern_union: u64,
    /// (v) k^2 >= pattern_union.
    pub k_squared_ok: bool,
    /// C with pattern_union >= 1.5 n_eff - C n_eff^(3/4); negative when
    /// the union beats 1.5 n_eff outright.
    pub envelope_c: f64,
    /// n_eff < 4: too small for the pair analysis to say anything.
    pub degenerate: bool,
    pub pass: bool,
}

const PAIR_LIST_CAP: usize = 64;

/// Colors [H, H+N] clipped to [2, p-2] by n! mod p and verifies the pair
/// relations that force distinct colorings.  One factorial-stream pass
/// plus group-local pair scans.
pub fn coloring_pairs(ctx: &PrimeCtx, h: u64, n: u64) -> Result<ColoringReport> {
    let p = ctx.p();
    let lo = h.max(2);
    let hi = h.saturating_add(n).min(p - 2);
    if lo > hi {
        return Err(Error::EmptyWindow { p, h, n });
    }
    let mut vals = vec![0u64; (hi - lo + 1) as usize];
    for (idx, f) in FactorialStream::new(ctx, 2)? {
        if idx > hi {
            break;
        }
        if idx >= lo {
            vals[(idx - lo) as usize] = f;
        }
    }
    let c = |i: u64| vals[(i - lo) as usize];

    let mut colors: HashMap<u64, Vec<u64>> = HashMap::new();
    for i in lo..=hi {
        colors.entry(c(i)).or_default().push(i);
    }
    let k = colors.len() as u64;

    // (i) adjacent patterns
    let mut adjacent: HashMap<(u64, u64), u32> = HashMap::new();
    let mut adjacent_pairs = 0u64;
    for i in lo..hi {
        *adjacent.entry((c(i), c(i + 1))).or_insert(0) += 1;
        adjacent_pairs += 1;
    }
    let adjacent_injective = adjacent.values().all(|&m| m == 1);

    // (ii)+(iii) same-pattern skip pairs
    let mut skip: HashMap<(u64, u64), Vec<u64>> = HashMap::new();
    let mut skip_pairs = 0u64;
    for i in lo..=hi.saturating_sub(2) {
        if i + 2 > hi {
            break;
        }
        skip.entry((c(i), c(i + 2))).or_default().push(i);
        skip_pairs += 1;
    }
    let mut couple_pairs = Vec::new();
    let mut couple_count = 0u64;
    let mut sum_zero_ok = true;
    let mut wilson_ok = true;
    for group in skip.values() {
        for (a, &n1) in group.iter().enumerate() {
            for &m1 in &group[a + 1..] {
                couple_count += 1;
                if couple_pairs.len() < PAIR_LIST_CAP {
                    couple_pairs.push((n1, m1));
                }
                if (n1 + m1 + 3) % p != 0 {
                    sum_zero_ok = false;
                }
                for t in [n1, m1] {
                    let lhs = ctx.mul(c(t + 2), c(t + 2));
                    let mut rhs = ctx.mul((t + 1) % p, (t + 2) % p);
                    if t % 2 == 0 {
                        rhs = ctx.sub(0, rhs);
                    }
                    if lhs != rhs {
                        wilson_ok = false;
                    }
                }
            }
        }
    }

    // (iv) adjacent pattern matching a skip pattern
    let mut cross_pairs = Vec::new();
    let mut cross_count = 0u64;
    let mut cross_ok = true;
    for group in colors.values() {
        for &n1 in group {
            if n1 + 1 > hi {
                continue;
            }
            for &m1 in group {
                if m1 + 2 > hi || c(n1 + 1) != c(m1 + 2) {
                    continue;
                }
                cross_count += 1;
                if cross_pairs.len() < PAIR_LIST_CAP {
                    cross_pairs.push((n1, m1));
                }
                let want = ((m1 as u128 * m1 as u128 + 3 * m1 as u128 + 1) % p as u128) as u64;
                if n1 % p != want {
                    cross_ok = false;
                }
            }
        }
    }

    // (v) distinct patterns across both pair families
    let mut union: HashSet<(u64, u64)> = adjacent.keys().copied().collect();
    union.extend(skip.keys().copied());
    let pattern_union = union.len() as u64;
    let k_squared_ok = k * k >= pattern_union;
    let n_eff = hi - lo;
    let envelope_c = if n_eff > 0 {
        (1.5 * n_eff as f64 - pattern_union as f64) / (n_eff as f64).powf(0.75)
    } else {
        0.0
    };

    Ok(ColoringReport {
        p,
        lo,
        hi,
        n_eff,
        k,
        adjacent_pairs,
        adjacent_patterns: adjacent.len() as u64,
        adjacent_injective,
        skip_pairs,
        couple_count,
        couple_pairs,
        sum_zero_ok,
        wilson_ok,
        cross_count,
        cross_pairs,
        cross_ok,
        pattern_union,
        k_squared_ok,
        envelope_c,
        degenerate: n_eff < 4,
        pass: adjacent_injective && sum_zero_ok && wilson_ok && cross_ok && k_squared_ok,
    })
}

/// (p-1)! and (p-2)! are distinct mod p (-1 vs +1 by Wilson); computed
/// directly rather than assumed, since the pair analysis leans on it at
/// the window boundary.
pub fn wilson_boundary_distinct(ctx: &PrimeCtx) -> Result<bool> {
    let p = ctx.p();
    let v = factorials_at(ctx, &[p - 2, p - 1])?;
    Ok(v[0] != v[1])
}
