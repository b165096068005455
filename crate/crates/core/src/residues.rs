//! Distinct residue classes hit by n! (mod p) over index windows, factorial
//! collision witnesses, and the scan statistics built on them (mean hit
//! ratio, average missed-class counts).

use serde::Serialize;

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::modarith::{primes_in_range, FactorialStream, PrimeCtx};
use crate::scan::{self, ScanRecord};

/// Index window [H, H+N]. Only indices n with 2 <= n <= p-1 contribute;
/// the intersection must be nonempty.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub h: u64,
    pub n: u64,
}

impl Window {
    pub fn new(h: u64, n: u64) -> Window {
        Window { h, n }
    }

    /// The full-sequence window [0, p-1].
    pub fn full(p: u64) -> Window {
        Window { h: 0, n: p - 1 }
    }

    /// Clips to the index range of the factorial sequence; errors when
    /// nothing remains.
    pub fn effective(&self, p: u64) -> Result<(u64, u64)> {
        let lo = self.h.max(2);
        let hi = self.h.saturating_add(self.n).min(p - 1);
        if lo > hi {
            return Err(Error::EmptyWindow {
                p,
                h: self.h,
                n: self.n,
            });
        }
        Ok((lo, hi))
    }
}

/// Distinct-count statistics for one prime and window. `missed` counts
/// classes of {0,...,p-1} no factorial in the window hits; class 0 is never
/// hit, so for the full window missed >= 1 always.
#[derive(Debug, Clone, Serialize)]
pub struct VStats {
    pub p: u64,
    #[serde(rename = "V")]
    pub v: u64,
    pub missed: u64,
    /// Count of indices actually scanned after clipping to [2, p-1].
    pub effective_len: u64,
    /// v / p.
    pub ratio: f64,
    pub collision: Option<(u64, u64)>,
}

/// V(H,N): the number of distinct residues among n! mod p for n in the
/// clipped window. Single streaming pass over a p-bit set.
pub fn v_count(ctx: &PrimeCtx, w: Window) -> Result<VStats> {
    let p = ctx.p();
    let (lo, hi) = w.effective(p)?;
    let mut seen = BitSet::new(p as usize);
    let mut v = 0u64;
    for (n, value) in FactorialStream::new(ctx, 2)? {
        if n > hi {
            break;
        }
        if n >= lo && seen.insert(value as usize) {
            v += 1;
        }
    }
    Ok(VStats {
        p,
        v,
        missed: p - v,
        effective_len: hi - lo + 1,
        ratio: v as f64 / p as f64,
        collision: None,
    })
}

/// Earliest-repeat collision witness: the smallest n in [2, p-1] whose
/// factorial value already occurred, paired with that first occurrence m.
/// Expected O(sqrt p) stream steps by the birthday bound.
pub fn first_collision(ctx: &PrimeCtx) -> Option<(u64, u64)> {
    let cap = 4 * (ctx.p() as f64).sqrt() as usize + 16;
    let mut seen: std::collections::HashMap<u64, u64> =
        std::collections::HashMap::with_capacity(cap);
    for (n, value) in FactorialStream::new(ctx, 2).ok()? {
        if let Some(&m) = seen.get(&value) {
            return Some((m, n));
        }
        seen.insert(value, n);
    }
    None
}

/// The lexicographically first pair (m, n), 2 <= m < n <= p-1, with
/// m! = n! (mod p); None when all factorials are distinct (possible for
/// tiny p, and a loud counterexample for large p). Differs from
/// [`first_collision`], which minimizes n rather than (m, n).
pub fn erdos_check(ctx: &PrimeCtx) -> Result<Option<(u64, u64)>> {
    let p = ctx.p();
    if p < 5 {
        return Err(Error::OutOfRange {
            what: "erdos_check modulus",
            value: p,
            lo: 5,
            hi: u64::MAX,
        });
    }
    // First and second index per value; index 0 doubles as "unset" since
    // real indices start at 2.
    let mut occ = vec![(0u64, 0u64); p as usize];
    for (n, value) in FactorialStream::new(ctx, 2)? {
        let slot = &mut occ[value as usize];
        if slot.0 == 0 {
            slot.0 = n;
        } else if slot.1 == 0 {
            slot.1 = n;
        }
    }
    let mut best: Option<(u64, u64)> = None;
    for &(m, n) in occ.iter() {
        if n != 0 && best.map(|b| (m, n) < b).unwrap_or(true) {
            best = Some((m, n));
        }
    }
    Ok(best)
}

fn isqrt(x: u128) -> u64 {
    if x == 0 {
        return 0;
    }
    let mut r = (x as f64).sqrt() as u128;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r as u64
}

/// Interval lower-bound report: compares V(H,N) against sqrt(1.5 N) (the
/// proven short-interval constant) and the older trivial floor sqrt(N-1).
#[derive(Debug, Clone, Serialize)]
pub struct IntervalBoundReport {
    pub p: u64,
    pub h: u64,
    pub n: u64,
    #[serde(rename = "V")]
    pub v: u64,
    pub effective_len: u64,
    /// floor(sqrt(1.5 N))
    pub bound_floor: u64,
    /// floor(sqrt(N-1))
    pub trivial_floor: u64,
    /// V >= sqrt(1.5 N), decided exactly as 2 V^2 >= 3 N.
    pub pass: bool,
    pub pass_trivial: bool,
    /// N >= p^regime_exponent; the bound is only claimed in-regime.
    pub in_regime: bool,
    pub regime_exponent: f64,
}

/// Checks the short-interval bound for one window. The regime exponent
/// defaults to 1/4 (callers may surface it as a parameter; the constant in
/// "N >> p^(1/4+eps)" is not explicit, so regime membership is advisory).
pub fn short_interval_bound_check(
    ctx: &PrimeCtx,
    w: Window,
    regime_exponent: f64,
) -> Result<IntervalBoundReport> {
    let stats = v_count(ctx, w)?;
    let v = stats.v;
    let n = w.n;
    let pass = 2 * (v as u128) * (v as u128) >= 3 * n as u128;
    let pass_trivial = (v as u128) * (v as u128) >= n.saturating_sub(1) as u128;
    let in_regime = n as f64 >= (ctx.p() as f64).powf(regime_exponent) - 1e-9;
    Ok(IntervalBoundReport {
        p: ctx.p(),
        h: w.h,
        n,
        v,
        effective_len: stats.effective_len,
        bound_floor: isqrt(3 * n as u128 / 2),
        trivial_floor: isqrt(n.saturating_sub(1) as u128),
        pass,
        pass_trivial,
        in_regime,
        regime_exponent,
    })
}

/// Full-window floor check V(0,p-1) >= sqrt(1.5 p), decided exactly.
#[derive(Debug, Clone, Serialize)]
pub struct ChenDaiReport {
    pub p: u64,
    #[serde(rename = "V")]
    pub v: u64,
    pub floor: u64,
    pub pass: bool,
}

pub fn chen_dai_check(ctx: &PrimeCtx) -> Result<ChenDaiReport> {
    let stats = v_count(ctx, Window::full(ctx.p()))?;
    let v = stats.v;
    Ok(ChenDaiReport {
        p: ctx.p(),
        v,
        floor: isqrt(3 * ctx.p() as u128 / 2),
        pass: 2 * (v as u128) * (v as u128) >= 3 * ctx.p() as u128,
    })
}

/// Full-window stats plus earliest-repeat collision for one prime: the
/// standard row of the prime scans.
pub fn scan_record_for(p: u64) -> Result<ScanRecord> {
    let ctx = PrimeCtx::new(p)?;
    let stats = v_count(&ctx, Window::full(p))?;
    Ok(ScanRecord {
        p,
        v: stats.v,
        missed: stats.missed,
        ratio: stats.ratio,
        collision: first_collision(&ctx),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct GuySummary {
    pub primes: u64,
    /// Mean of V(0,p-1)/p; None for an empty range.
    pub mean_ratio: Option<f64>,
    pub target: f64,
    /// mean - (1 - 1/e)
    pub deviation: Option<f64>,
}

pub const GUY_TARGET: f64 = 1.0 - std::f64::consts::E.recip();

/// Scans primes in [lo, hi], recording V, missed classes and a collision
/// witness per prime, and averages V/p against the conjectured limit
/// 1 - 1/e. Deterministic output order; parallel inside.
pub fn guy_ratio_scan(lo: u64, hi: u64, force: bool) -> Result<(Vec<ScanRecord>, GuySummary)> {
    scan::check_budget(scan::est_sigma_p_range(lo, hi), force)?;
    let primes: Vec<u64> = primes_in_range(lo.max(5), hi);
    let mut records = Vec::with_capacity(primes.len());
    let mut sum_ratio = 0.0f64;
    scan::map_primes_chunked(
        &primes,
        1024,
        scan_record_for,
        |_, rec: ScanRecord| {
            sum_ratio += rec.ratio;
            records.push(rec);
            Ok(())
        },
        |_| Ok(true),
    )?;
    let count = records.len() as u64;
    let mean = (count > 0).then(|| sum_ratio / count as f64);
    Ok((
        records,
        GuySummary {
            primes: count,
            mean_ratio: mean,
            target: GUY_TARGET,
            deviation: mean.map(|m| m - GUY_TARGET),
        },
    ))
}

/// Average missed-class count (1/pi*(x)) * sum over p <= x of
/// (p - V(0,p-1)), where the sum runs over odd primes p >= 5 (smaller
/// primes have no length-2 factorial sequence to speak of). Exact integer
/// sums; the asymptotic comparison shapes are advisory only.
#[derive(Debug, Clone, Serialize)]
pub struct MissedAverage {
    pub x: u64,
    pub primes: u64,
    pub sum_missed: u128,
    pub mean: f64,
    /// log log x / log log log x, the unconditional lower-bound shape;
    /// None when x is too small for the triple log.
    pub loglog_shape: Option<f64>,
    /// x^(1/4) / log x, the GRH-conditional shape.
    pub grh_shape: f64,
}

pub fn average_missed(x: u64, force: bool) -> Result<MissedAverage> {
    if x < 5 {
        return Err(Error::OutOfRange {
            what: "average_missed x",
            value: x,
            lo: 5,
            hi: u64::MAX,
        });
    }
    scan::check_budget(scan::est_sigma_p(x), force)?;
    let primes: Vec<u64> = primes_in_range(5, x);
    let mut sum = 0u128;
    let mut count = 0u64;
    scan::map_primes_chunked(
        &primes,
        1024,
        scan_record_for,
        |_, rec: ScanRecord| {
            sum += rec.missed as u128;
            count += 1;
            Ok(())
        },
        |_| Ok(true),
    )?;
    Ok(missed_average_from(x, sum, count))
}

/// Assembles a [`MissedAverage`] from externally accumulated sums, so
/// checkpointed scans that stream records elsewhere share the comparison
/// shapes with [`average_missed`].
pub fn missed_average_from(x: u64, sum_missed: u128, primes: u64) -> MissedAverage {
    let xf = x as f64;
    let lll = xf.ln().ln().ln();
    MissedAverage {
        x,
        primes,
        sum_missed,
        mean: sum_missed as f64 / primes as f64,
        loglog_shape: (lll.is_finite() && lll > 0.0).then(|| xf.ln().ln() / lll),
        grh_shape: xf.powf(0.25) / xf.ln(),
    }
}
