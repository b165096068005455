//! The monic family f_n(t) = t(t+1)...(t+n-1) - 1 and its root counts
//! modulo p.
//!
//! A root t0 of f_n mod p is the same thing as a factorial collision at
//! gap n: dividing (t0+n-1)! by (t0-1)! leaves the n consecutive factors
//! t0, ..., t0+n-1, so f_n(t0) = 0 mod p exactly when those two factorials
//! agree.  Root counts therefore measure how often the factorial sequence
//! revisits a value at a fixed gap, and their averages over p feed the
//! missed-class estimates.  The discriminant of f_n identifies the ramified
//! primes and, through its squarefree kernel, the quadratic subfield of the
//! splitting field - which is what the disjointness proxy compares.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::modarith::{factorials_at, is_prime, sieve_primes, PrimeCtx};
use crate::polyfp::{discriminant_z, PolyFp, PolyZ};
use crate::residues::{v_count, Window};
use crate::scan::{check_budget, est_root_scan, map_primes_chunked};

/// Hard cap on the family index for exact construction over Z.
pub const MAX_FAMILY_N: u64 = 64;
/// Cap on the family index in whole-range scans.
pub const MAX_SCAN_N: u64 = 20;
/// Cap on the scan bound x.
pub const MAX_SCAN_X: u64 = 10_000_000;
/// Cap on the family index for discriminant work; the integers involved
/// reach a few thousand bits by n = 24.
pub const MAX_DISC_N: u64 = 24;
/// Cap on the family indices in the disjointness proxy (two scans).
pub const MAX_DISJOINT_N: u64 = 12;

/// f_n over Z together with its lazily computed discriminant.
#[derive(Debug)]
pub struct FamilyPoly {
    n: u64,
    poly: PolyZ,
    disc: OnceLock<BigInt>,
}

impl FamilyPoly {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn poly(&self) -> &PolyZ {
        &self.poly
    }

    /// disc(f_n), computed once per instance and cached.
    pub fn disc(&self) -> &BigInt {
        self.disc
            .get_or_init(|| discriminant_z(&self.poly).expect("family polynomial is nonzero"))
    }

    /// Coefficient-wise reduction of f_n into F_p.
    pub fn reduce_mod(&self, ctx: &PrimeCtx) -> PolyFp {
        self.poly.reduce_mod(ctx)
    }
}

/// Builds f_n(t) = t(t+1)...(t+n-1) - 1 by iterated multiplication by
/// (t + k), exactly over Z.
pub fn build_f(n: u64) -> Result<FamilyPoly> {
    if !(1..=MAX_FAMILY_N).contains(&n) {
        return Err(Error::OutOfRange {
            what: "family index n",
            value: n,
            lo: 1,
            hi: MAX_FAMILY_N,
        });
    }
    let mut prod = PolyZ::from_i64(&[0, 1]);
    for k in 1..n {
        prod = prod.mul(&PolyZ::from_i64(&[k as i64, 1]));
    }
    // The rising product has zero constant term, so subtracting 1 only
    // touches c[0].
    let mut c = prod.coeffs().to_vec();
    c[0] -= BigInt::one();
    Ok(FamilyPoly {
        n,
        poly: PolyZ::new(c),
        disc: OnceLock::new(),
    })
}

/// Number of distinct roots of f_n mod p.  p = 2 falls outside the
/// Montgomery context and is handled by direct evaluation at 0 and 1.
pub fn rho_count(fam: &FamilyPoly, p: u64) -> Result<u64> {
    if p == 2 {
        let two = BigInt::from(2);
        let count = (0..2)
            .filter(|&t| fam.poly.eval(&BigInt::from(t)).mod_floor(&two).is_zero())
            .count();
        return Ok(count as u64);
    }
    let ctx = PrimeCtx::new(p)?;
    fam.reduce_mod(&ctx).distinct_root_count()
}

/// Root count of f_n mod p, with the roots themselves (and a factorial
/// cross-check) whenever p is small enough to enumerate them.
#[derive(Debug, Clone, Serialize)]
pub struct RhoReport {
    pub n: u64,
    pub p: u64,
    /// deg gcd(x^p - x, f_n mod p): the number of distinct roots.
    pub count: u64,
    /// All roots in [0, p-1], present when p <= 10^6.
    pub roots: Option<Vec<u64>>,
    /// Roots t0 with t0 = 0 or t0 + n - 1 > p - 1, which fall outside the
    /// factorial index range.  Provably empty: any such window of n
    /// consecutive integers contains a multiple of p, forcing f_n = -1.
    /// Kept as a field so the claim is checked, not assumed.
    pub boundary_roots: Vec<u64>,
    /// Did (t0 + n - 1)! = (t0 - 1)! hold in a direct factorial
    /// computation for every in-range root?  None when roots were not
    /// enumerated.
    pub verified: Option<bool>,
}

pub fn rho(n: u64, ctx: &PrimeCtx) -> Result<RhoReport> {
    rho_with(&build_f(n)?, ctx)
}

/// [`rho`] for a prebuilt family; scans reuse the polynomial.
pub fn rho_with(fam: &FamilyPoly, ctx: &PrimeCtx) -> Result<RhoReport> {
    let p = ctx.p();
    let n = fam.n;
    let reduced = fam.reduce_mod(ctx);
    let count = reduced.distinct_root_count()?;
    if p > PolyFp::ROOT_ENUM_MAX_P {
        return Ok(RhoReport {
            n,
            p,
            count,
            roots: None,
            boundary_roots: Vec::new(),
            verified: None,
        });
    }
    let roots = reduced.roots_brute()?;
    debug_assert_eq!(roots.len() as u64, count);
    let in_range = |t: u64| t >= 1 && t + n - 1 <= p - 1;
    let boundary_roots: Vec<u64> = roots.iter().copied().filter(|&t| !in_range(t)).collect();
    let mut idx = Vec::new();
    for &t in roots.iter().filter(|&&t| in_range(t)) {
        idx.push(t - 1);
        idx.push(t + n - 1);
    }
    let vals = factorials_at(ctx, &idx)?;
    let verified = vals.chunks(2).all(|pair| pair[0] == pair[1]);
    Ok(RhoReport {
        n,
        p,
        count,
        roots: Some(roots),
        boundary_roots,
        verified: Some(verified),
    })
}

/// Mean and histogram of the root count of f_n over all primes p <= x.
/// `sum_rho` / `primes` is the exact rational mean; `mean` rounds it.
#[derive(Debug, Clone, Serialize)]
pub struct RhoScanSummary {
    pub n: u64,
    pub x: u64,
    pub primes: u64,
    pub sum_rho: u64,
    pub mean: f64,
    /// mean - 1; the count averages to one root per prime.
    pub deviation: f64,
    /// histogram[k] = #{p <= x : f_n has exactly k roots mod p}.
    pub histogram: BTreeMap<u64, u64>,
}

pub fn rho_mean_scan(n: u64, x: u64, force: bool) -> Result<(Vec<(u64, u64)>, RhoScanSummary)> {
    if !(1..=MAX_SCAN_N).contains(&n) {
        return Err(Error::OutOfRange {
            what: "scan family index n",
            value: n,
            lo: 1,
            hi: MAX_SCAN_N,
        });
    }
    if x < 2 {
        return Err(Error::OutOfRange {
            what: "root scan bound x",
            value: x,
            lo: 2,
            hi: MAX_SCAN_X,
        });
    }
    if x > MAX_SCAN_X {
        return Err(Error::GuardExceeded {
            what: "root scan bound x",
            value: x,
            max: MAX_SCAN_X,
        });
    }
    check_budget(est_root_scan(n, x), force)?;
    let fam = build_f(n)?;
    let primes = sieve_primes(x);
    let mut records = Vec::with_capacity(primes.len());
    let mut histogram = BTreeMap::new();
    let mut sum_rho = 0u64;
    map_primes_chunked(
        &primes,
        1024,
        |p| rho_count(&fam, p),
        |p, r| {
            sum_rho += r;
            *histogram.entry(r).or_insert(0u64) += 1;
            records.push((p, r));
            Ok(())
        },
        |_| Ok(true),
    )?;
    let k = records.len() as u64;
    let mean = sum_rho as f64 / k as f64;
    Ok((
        records,
        RhoScanSummary {
            n,
            x,
            primes: k,
            sum_rho,
            mean,
            deviation: mean - 1.0,
            histogram,
        },
    ))
}

/// Per-prime test of "missed classes dominate the odd-gap root counts":
/// missed(p) >= sum over j of rho_{2j+1}(p).  A failed inequality is a
/// reportable finding, not an error, so `pass` is a field.
#[derive(Debug, Clone, Serialize)]
pub struct MissedInequality {
    pub p: u64,
    pub nmax: u64,
    /// p - V over the full window: classes mod p no factorial hits.
    pub missed: u64,
    pub rho_sum: u64,
    /// (degree 2j+1, root count) for each gap that fits below p - 2.
    pub per_degree: Vec<(u64, u64)>,
    /// Odd gaps skipped because 2j+1 > p - 2.
    pub skipped_degrees: Vec<u64>,
    pub pass: bool,
}

pub fn missed_inequality_check(ctx: &PrimeCtx, nmax: u64) -> Result<MissedInequality> {
    const MAX_NMAX: u64 = 10;
    if nmax > MAX_NMAX {
        return Err(Error::OutOfRange {
            what: "odd-gap count nmax",
            value: nmax,
            lo: 0,
            hi: MAX_NMAX,
        });
    }
    let p = ctx.p();
    let missed = v_count(ctx, Window::full(p))?.missed;
    let mut per_degree = Vec::new();
    let mut skipped_degrees = Vec::new();
    let mut rho_sum = 0u64;
    for j in 1..=nmax {
        let d = 2 * j + 1;
        if d > p - 2 {
            skipped_degrees.push(d);
            continue;
        }
        let c = rho_count(&build_f(d)?, p)?;
        rho_sum += c;
        per_degree.push((d, c));
    }
    Ok(MissedInequality {
        p,
        nmax,
        missed,
        rho_sum,
        per_degree,
        skipped_degrees,
        pass: missed >= rho_sum,
    })
}

/// Exact discriminant data for f_n.
#[derive(Debug, Clone)]
pub struct DiscReport {
    pub n: u64,
    pub disc: BigInt,
    /// Product of the primes dividing disc to an odd power, sign included,
    /// as far as trial division plus a perfect-square peel resolves it.
    pub squarefree_part: BigInt,
    /// True when a composite cofactor survived trial division uncertified;
    /// the squarefree part then still contains it.
    pub partial: bool,
    /// |disc| <= n^(10 n^2); vacuous at n = 1.
    pub bound_ok: bool,
    /// ln|disc| / (10 n^2 ln n), None at n = 1.
    pub bound_log_ratio: Option<f64>,
}

const TRIAL_LIMIT: u64 = 1_000_000;

/// Squarefree kernel of d by trial division to 10^6, with the leftover
/// cofactor either certified (prime, or a perfect square contributing
/// nothing) or folded in and flagged incomplete.
fn squarefree_part(d: &BigInt) -> (BigInt, bool) {
    if d.is_zero() {
        return (BigInt::zero(), true);
    }
    let mut m = d.abs();
    let mut out = BigInt::one();
    for q in sieve_primes(TRIAL_LIMIT) {
        if m.is_one() {
            break;
        }
        let qb = BigInt::from(q);
        let mut odd = false;
        loop {
            let (quot, rem) = m.div_rem(&qb);
            if rem.is_zero() {
                m = quot;
                odd = !odd;
            } else {
                break;
            }
        }
        if odd {
            out *= &qb;
        }
    }
    let mut complete = true;
    if !m.is_one() {
        // every prime factor of m now exceeds the trial limit
        let s = m.sqrt();
        if &s * &s == m {
            // even multiplicity throughout; contributes nothing
        } else if m.to_u64().map(is_prime) == Some(true) {
            out *= &m;
        } else {
            out *= &m;
            complete = false;
        }
    }
    if d.is_negative() {
        out = -out;
    }
    (out, complete)
}

// ln of a positive BigInt without overflowing f64.
fn big_ln(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 53 {
        return x.to_f64().expect("fits in f64").ln();
    }
    let shift = bits - 53;
    let top = (x >> shift).to_f64().expect("53 bits fit in f64");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn disc_family(n: u64) -> Result<DiscReport> {
    if !(1..=MAX_DISC_N).contains(&n) {
        return Err(Error::OutOfRange {
            what: "discriminant family index n",
            value: n,
            lo: 1,
            hi: MAX_DISC_N,
        });
    }
    let fam = build_f(n)?;
    let disc = fam.disc().clone();
    let (squarefree_part, complete) = squarefree_part(&disc);
    let abs = disc.abs();
    let bound = Pow::pow(BigInt::from(n), (10 * n * n) as u32);
    let bound_log_ratio =
        (n >= 2).then(|| big_ln(&abs) / (10.0 * (n * n) as f64 * (n as f64).ln()));
    Ok(DiscReport {
        n,
        disc,
        squarefree_part,
        partial: !complete,
        bound_ok: abs <= bound,
        bound_log_ratio,
    })
}

/// Two proxies for "the splitting behaviours of f_{n1} and f_{n2} are
/// unrelated", reported side by side and never over-claimed: differing
/// squarefree discriminant kernels mean the quadratic subfields
/// Q(sqrt(disc)) differ, and over p <= x the events {rho_{n1}(p) > 0},
/// {rho_{n2}(p) > 0} should be uncorrelated, so the joint frequency is
/// compared with the product of marginals in units of the binomial
/// standard error.
#[derive(Debug, Clone)]
pub struct DisjointnessReport {
    pub n1: u64,
    pub n2: u64,
    pub x: u64,
    pub primes: u64,
    pub sqf1: BigInt,
    pub sqf2: BigInt,
    /// True when either squarefree kernel is incomplete (see DiscReport).
    pub sqf_partial: bool,
    pub quadratic_subfields_differ: bool,
    pub count1: u64,
    pub count2: u64,
    pub count_joint: u64,
    pub freq1: f64,
    pub freq2: f64,
    pub joint: f64,
    pub product: f64,
    /// joint - product.
    pub diff: f64,
    /// sqrt(product * (1 - product) / primes).
    pub std_err: f64,
    pub within_3se: bool,
}

pub fn splitting_disjointness_proxy(
    n1: u64,
    n2: u64,
    x: u64,
    force: bool,
) -> Result<DisjointnessReport> {
    if n1 == n2 {
        return Err(Error::Invalid(
            "disjointness proxy needs two distinct family indices",
        ));
    }
    for (what, v) in [("family index n1", n1), ("family index n2", n2)] {
        if !(1..=MAX_DISJOINT_N).contains(&v) {
            return Err(Error::OutOfRange {
                what,
                value: v,
                lo: 1,
                hi: MAX_DISJOINT_N,
            });
        }
    }
    if !(2..=MAX_SCAN_X).contains(&x) {
        return Err(Error::OutOfRange {
            what: "disjointness scan bound x",
            value: x,
            lo: 2,
            hi: MAX_SCAN_X,
        });
    }
    check_budget(est_root_scan(n1, x) + est_root_scan(n2, x), force)?;
    let fa = build_f(n1)?;
    let fb = build_f(n2)?;
    let (sqf1, c1) = squarefree_part(fa.disc());
    let (sqf2, c2) = squarefree_part(fb.disc());
    let primes = sieve_primes(x);
    let (mut count1, mut count2, mut count_joint) = (0u64, 0u64, 0u64);
    map_primes_chunked(
        &primes,
        1024,
        |p| Ok((rho_count(&fa, p)? > 0, rho_count(&fb, p)? > 0)),
        |_, (ra, rb)| {
            count1 += ra as u64;
            count2 += rb as u64;
            count_joint += (ra && rb) as u64;
            Ok(())
        },
        |_| Ok(true),
    )?;
    let k = primes.len() as u64;
    let kf = k as f64;
    let freq1 = count1 as f64 / kf;
    let freq2 = count2 as f64 / kf;
    let joint = count_joint as f64 / kf;
    let product = freq1 * freq2;
    let diff = joint - product;
    let std_err = (product * (1.0 - product) / kf).sqrt();
    let within_3se = if std_err > 0.0 {
        diff.abs() <= 3.0 * std_err
    } else {
        diff == 0.0
    };
    let quadratic_subfields_differ = sqf1 != sqf2;
    Ok(DisjointnessReport {
        n1,
        n2,
        x,
        primes: k,
        sqf1,
        sqf2,
        sqf_partial: !(c1 && c2),
        quadratic_subfields_differ,
        count1,
        count2,
        count_joint,
        freq1,
        freq2,
        joint,
        product,
        diff,
        std_err,
        within_3se,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modarith::legendre;
    use crate::polyfp::resultant_fp;

    fn ctx(p: u64) -> PrimeCtx {
        PrimeCtx::new(p).unwrap()
    }

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn build_examples() {
        assert_eq!(build_f(1).unwrap().poly(), &PolyZ::from_i64(&[-1, 1]));
        assert_eq!(build_f(2).unwrap().poly(), &PolyZ::from_i64(&[-1, 1, 1]));
        assert_eq!(build_f(3).unwrap().poly(), &PolyZ::from_i64(&[-1, 2, 3, 1]));
        assert!(matches!(build_f(0), Err(Error::OutOfRange { .. })));
        assert!(matches!(build_f(65), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn family_shape_and_special_values() {
        let mut factorial = BigInt::one();
        for n in 1..=MAX_FAMILY_N {
            factorial *= n;
            let f = build_f(n).unwrap();
            let p = f.poly();
            assert_eq!(p.deg(), Some(n as usize));
            assert_eq!(p.lc(), BigInt::one());
            assert_eq!(p.coeffs()[0], big(-1));
            assert_eq!(p.eval(&BigInt::zero()), big(-1));
            assert_eq!(p.eval(&BigInt::one()), &factorial - 1);
        }
    }

    // Rational-root sanity for irreducibility: lc = 1 and constant = -1
    // leave only t = +-1 as candidates, and neither is a root for n >= 2.
    #[test]
    fn no_rational_roots() {
        for n in 2..=8 {
            let f = build_f(n).unwrap();
            assert!(!f.poly().eval(&big(1)).is_zero());
            assert_eq!(f.poly().eval(&big(-1)), big(-1));
        }
    }

    #[test]
    fn rho_known_small_cases() {
        let cases: &[(u64, u64, &[u64])] = &[
            (1, 13, &[1]),
            (2, 11, &[3, 7]),
            (2, 7, &[]),
            (3, 11, &[5]),
            (3, 7, &[4]),
            (4, 7, &[2]),
            (5, 11, &[3, 6]),
            (9, 11, &[1]),
        ];
        for &(n, p, roots) in cases {
            let r = rho(n, &ctx(p)).unwrap();
            assert_eq!(r.count, roots.len() as u64, "count n={n} p={p}");
            assert_eq!(r.roots.as_deref(), Some(roots), "roots n={n} p={p}");
            assert_eq!(r.verified, Some(true), "verify n={n} p={p}");
            assert!(r.boundary_roots.is_empty());
        }
    }

    #[test]
    fn rho_two_follows_legendre_of_five() {
        let f2 = build_f(2).unwrap();
        for p in sieve_primes(1000).into_iter().skip(1) {
            let expect = match legendre(5, p).unwrap() {
                1 => 2,
                0 => 1,
                _ => 0,
            };
            assert_eq!(rho_count(&f2, p).unwrap(), expect, "p={p}");
        }
    }

    #[test]
    fn boundary_roots_never_occur() {
        for n in 1..=8 {
            for p in sieve_primes(100).into_iter().skip(1) {
                let r = rho(n, &ctx(p)).unwrap();
                assert!(r.boundary_roots.is_empty(), "n={n} p={p}");
                assert_eq!(r.count, r.roots.as_ref().unwrap().len() as u64);
                assert_eq!(r.verified, Some(true), "n={n} p={p}");
            }
        }
    }

    #[test]
    fn rho_large_p_skips_enumeration() {
        let p = 1_000_003;
        let r = rho(2, &ctx(p)).unwrap();
        assert!(r.roots.is_none());
        assert!(r.verified.is_none());
        let expect = match legendre(5, p).unwrap() {
            1 => 2,
            0 => 1,
            _ => 0,
        };
        assert_eq!(r.count, expect);
    }

    #[test]
    fn mean_scan_linear_family_is_exact() {
        let (records, s) = rho_mean_scan(1, 1000, false).unwrap();
        assert_eq!(records.len(), 168);
        assert_eq!(records[0], (2, 1));
        assert_eq!(s.mean, 1.0);
        assert_eq!(s.deviation, 0.0);
        assert_eq!(s.histogram, BTreeMap::from([(1, 168)]));
    }

    #[test]
    fn mean_scan_quadratic_histogram() {
        // 89 inert, 78 split, and the single ramified p = 5 among the
        // 168 primes below 1000.
        let (_, s) = rho_mean_scan(2, 1000, false).unwrap();
        assert_eq!(s.histogram, BTreeMap::from([(0, 89), (1, 1), (2, 78)]));
        assert_eq!(s.sum_rho, 157);
    }

    #[test]
    fn mean_scan_cubic_histogram() {
        let (records, s) = rho_mean_scan(3, 1000, false).unwrap();
        assert_eq!(s.primes, 168);
        assert_eq!(s.sum_rho, 164);
        assert_eq!(
            s.histogram,
            BTreeMap::from([(0, 55), (1, 87), (2, 1), (3, 25)])
        );
        assert_eq!(records.iter().map(|&(_, r)| r).sum::<u64>(), 164);
    }

    #[test]
    fn scan_guards() {
        assert!(matches!(
            rho_mean_scan(21, 100, false),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            rho_mean_scan(3, 20_000_000, false),
            Err(Error::GuardExceeded { .. })
        ));
    }

    #[test]
    fn missed_inequality_examples() {
        let r = missed_inequality_check(&ctx(11), 1).unwrap();
        assert_eq!((r.missed, r.rho_sum, r.pass), (6, 1, true));
        assert_eq!(r.per_degree, vec![(3, 1)]);

        let r = missed_inequality_check(&ctx(7), 1).unwrap();
        assert_eq!((r.missed, r.rho_sum, r.pass), (3, 1, true));

        let r = missed_inequality_check(&ctx(7), 0).unwrap();
        assert_eq!((r.rho_sum, r.pass), (0, true));

        let r = missed_inequality_check(&ctx(7), 3).unwrap();
        assert_eq!(r.per_degree, vec![(3, 1), (5, 1)]);
        assert_eq!(r.skipped_degrees, vec![7]);
        assert_eq!((r.missed, r.rho_sum, r.pass), (3, 2, true));

        let r = missed_inequality_check(&ctx(11), 5).unwrap();
        assert_eq!(r.per_degree, vec![(3, 1), (5, 2), (7, 0), (9, 1)]);
        assert_eq!(r.skipped_degrees, vec![11]);
        assert_eq!((r.missed, r.rho_sum), (6, 4));

        let r = missed_inequality_check(&ctx(5), 2).unwrap();
        assert_eq!(r.per_degree, vec![(3, 1)]);
        assert_eq!(r.skipped_degrees, vec![5]);
        assert_eq!((r.missed, r.rho_sum, r.pass), (2, 1, true));

        assert!(matches!(
            missed_inequality_check(&ctx(7), 11),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn missed_inequality_holds_below_five_hundred() {
        for p in sieve_primes(500).into_iter().filter(|&p| p >= 5) {
            let r = missed_inequality_check(&ctx(p), 5).unwrap();
            assert!(r.pass, "p={p}: missed {} < sum {}", r.missed, r.rho_sum);
            assert_eq!(r.rho_sum, r.per_degree.iter().map(|&(_, c)| c).sum());
        }
    }

    #[test]
    fn disc_frozen_table() {
        // (n, disc, squarefree part); disc(f_6) = 33269^2 so its kernel
        // collapses to 1, and disc(f_8) = 2^22 * 11^2 * 89 * 589933^2.
        let table: &[(u64, i64, i64)] = &[
            (1, 1, 1),
            (2, 5, 5),
            (3, -23, -23),
            (4, -448, -7),
            (5, 38569, 38569),
            (6, 1_106_826_361, 1),
            (7, 613_905_133_493_513, 613_905_133_493_513),
        ];
        for &(n, d, sq) in table {
            let r = disc_family(n).unwrap();
            assert_eq!(r.disc, big(d), "disc n={n}");
            assert_eq!(r.squarefree_part, big(sq), "sqf n={n}");
            assert!(!r.partial);
        }
        let r8 = disc_family(8).unwrap();
        assert_eq!(
            r8.disc,
            "15719570032356925374464".parse::<BigInt>().unwrap()
        );
        assert_eq!(r8.squarefree_part, big(89));
        assert!(!r8.partial);
    }

    #[test]
    fn disc_bound_holds_through_twelve() {
        let r1 = disc_family(1).unwrap();
        assert!(r1.bound_ok);
        assert!(r1.bound_log_ratio.is_none());
        for n in 2..=12 {
            let r = disc_family(n).unwrap();
            assert!(r.bound_ok, "n={n}");
            let ratio = r.bound_log_ratio.unwrap();
            assert!(ratio > 0.0 && ratio < 1.0, "n={n} ratio={ratio}");
        }
        assert!(matches!(disc_family(0), Err(Error::OutOfRange { .. })));
        assert!(matches!(disc_family(25), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn disc_commutes_with_reduction() {
        for n in 2..=6u64 {
            let fam = build_f(n).unwrap();
            let d = n as usize;
            let sign_flip = (d * (d - 1) / 2) % 2 == 1;
            for p in [101u64, 997, 10007] {
                let pb = big(p as i64);
                if fam.disc().mod_floor(&pb).is_zero() {
                    continue;
                }
                let c = ctx(p);
                let fp = fam.reduce_mod(&c);
                let dfp = fam.poly().derivative().reduce_mod(&c);
                let mut res = resultant_fp(&fp, &dfp).unwrap();
                if sign_flip && res != 0 {
                    res = p - res;
                }
                let want = u64::try_from(fam.disc().mod_floor(&pb)).unwrap();
                assert_eq!(res, want, "n={n} p={p}");
            }
        }
    }

    #[test]
    fn squarefree_part_edges() {
        assert_eq!(squarefree_part(&big(0)), (big(0), true));
        assert_eq!(squarefree_part(&big(1)), (big(1), true));
        assert_eq!(squarefree_part(&big(-1)), (big(-1), true));
        assert_eq!(squarefree_part(&big(360)), (big(10), true)); // 2^3 3^2 5
        assert_eq!(squarefree_part(&big(-448)), (big(-7), true));
        // cofactor above the trial limit: prime, square, and neither
        let p_big = big(1_000_003);
        assert_eq!(squarefree_part(&(&p_big * 4)), (p_big.clone(), true));
        assert_eq!(squarefree_part(&(&p_big * &p_big)), (big(1), true));
        let semi = &p_big * big(1_000_033);
        let (part, complete) = squarefree_part(&semi);
        assert_eq!(part, semi);
        assert!(!complete);
    }

    #[test]
    fn disjointness_trivial_linear_event() {
        let r = splitting_disjointness_proxy(1, 2, 1000, false).unwrap();
        assert_eq!(r.freq1, 1.0);
        assert_eq!(r.count1, r.primes);
        assert_eq!(r.diff, 0.0);
        assert!(r.within_3se);
    }

    #[test]
    fn disjointness_quadratic_vs_cubic() {
        let r = splitting_disjointness_proxy(2, 3, 10_000, false).unwrap();
        assert_eq!(r.primes, 1229);
        assert_eq!((r.count1, r.count2, r.count_joint), (610, 821, 410));
        assert!(r.quadratic_subfields_differ); // 5 vs -23
        assert!(!r.sqf_partial);
        assert!(r.within_3se, "diff {} se {}", r.diff, r.std_err);
    }

    #[test]
    fn disjointness_guards() {
        assert!(matches!(
            splitting_disjointness_proxy(2, 2, 100, false),
            Err(Error::Invalid(_))
        ));
        assert!(matches!(
            splitting_disjointness_proxy(13, 2, 100, false),
            Err(Error::OutOfRange { .. })
        ));
    }
}
