//! Acceptance gate: one test per headline claim, each printing a single
//! PASS/FAIL line (run with `--nocapture` to see them on success).  These
//! are the end-to-end checks the library is judged by; tolerances are
//! stated inline and failures print enough context to reproduce.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use factmod::families::{build_f, disc_family, rho_mean_scan, rho_with};
use factmod::lemmas::{
    burgess_count, coloring_pairs, squared_factorial_count, quadratic_image_oracle, sieve_shift_find,
    Quadratic,
};
use factmod::modarith::{factorials_at, primes_in_range, PrimeCtx};
use factmod::permgroup::{
    burnside_orbit_check, derangement_count, failing_density_estimate,
    fixed_point_free_proportion, parse_generators, partial_products_distinct, PermGroup,
};
use factmod::polyfp::{resultant_z, sylvester_resultant, BigInt, PolyFp, PolyZ};
use factmod::residues::{
    chen_dai_check, erdos_check, first_collision, guy_ratio_scan, short_interval_bound_check,
    v_count, Window,
};

fn verdict(ok: bool, line: String) {
    println!("{} {}", if ok { "PASS" } else { "FAIL" }, line);
    assert!(ok, "{}", line);
}

/// Every prime 7 <= p <= 10^6 has a collision m! = n! (mod p) with
/// 2 <= m < n <= p-1; p = 5 is the lone exception, confirmed again by
/// full enumeration.  A sample of reported pairs is re-verified by
/// recomputing both factorials from scratch.
#[test]
fn a01_collision_census_to_one_million() {
    let start = Instant::now();
    let primes = primes_in_range(5, 1_000_000);
    let missing: Vec<u64> = primes
        .par_iter()
        .filter_map(|&p| {
            let ctx = PrimeCtx::new(p).unwrap();
            match first_collision(&ctx) {
                Some(_) => None,
                None => Some(p),
            }
        })
        .collect();

    let five = PrimeCtx::new(5).unwrap();
    let five_bare = erdos_check(&five).unwrap().is_none();

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut bad_pairs = Vec::new();
    for _ in 0..200 {
        let p = primes[rng.gen_range(1..primes.len())]; // index 0 is p = 5
        let ctx = PrimeCtx::new(p).unwrap();
        let (m, n) = first_collision(&ctx).unwrap();
        let v = factorials_at(&ctx, &[m, n]).unwrap();
        if !(2 <= m && m < n && n <= p - 1 && v[0] == v[1]) {
            bad_pairs.push((p, m, n));
        }
    }

    let ok = missing == vec![5] && five_bare && bad_pairs.is_empty();
    verdict(
        ok,
        format!(
            "collision m! = n! (mod p) found for every prime 7 <= p <= 10^6 \
             ({} primes in {:.0}s; collision-free: {:?}, p = 5 confirmed bare by \
             enumeration; 200 sampled pairs re-verified, bad: {:?})",
            primes.len(),
            start.elapsed().as_secs_f64(),
            missing,
            bad_pairs,
        ),
    );
}

/// The mean of V(0,p-1)/p over primes in [10^4, 10^5] lands within 0.01
/// of 1 - 1/e.
#[test]
fn a02_mean_full_window_ratio() {
    let (_, s) = guy_ratio_scan(10_000, 100_000, false).unwrap();
    let dev = s.deviation.unwrap();
    verdict(
        dev.abs() <= 0.01,
        format!(
            "mean V(0,p-1)/p over {} primes in [10^4, 10^5] is {:.6}, within 0.01 \
             of 1 - 1/e = {:.6} (deviation {:+.6})",
            s.primes,
            s.mean_ratio.unwrap(),
            s.target,
            dev,
        ),
    );
}

/// V(0,p-1) >= sqrt(1.5 p), decided exactly, for every prime in
/// [10^3, 10^5] — zero violations.
#[test]
fn a03_full_window_floor() {
    let primes = primes_in_range(1_000, 100_000);
    let violations: Vec<u64> = primes
        .par_iter()
        .filter_map(|&p| {
            let ctx = PrimeCtx::new(p).unwrap();
            let rep = chen_dai_check(&ctx).unwrap();
            if rep.pass {
                None
            } else {
                Some(p)
            }
        })
        .collect();
    verdict(
        violations.is_empty(),
        format!(
            "V(0,p-1) >= sqrt(1.5 p) holds exactly at all {} primes in [10^3, 10^5]; \
             violations: {:?}",
            primes.len(),
            violations,
        ),
    );
}

/// 100 seeded random short windows (N >= p^(1/4), fully inside [2, p-1])
/// at primes in [10^4, 10^5] all satisfy V(H,N) >= sqrt(1.5 N).  Half the
/// draws hug the minimum length, where the floor actually bites.
#[test]
fn a04_random_short_window_floor() {
    let primes = primes_in_range(10_000, 100_000);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut cases = Vec::new();
    for draw in 0..100u64 {
        let p = primes[rng.gen_range(0..primes.len())];
        let n_min = (p as f64).powf(0.25).ceil() as u64;
        let n_hi = if draw % 2 == 0 { (16 * n_min).min(p - 3) } else { p - 3 };
        let n = rng.gen_range(n_min..=n_hi);
        let h = rng.gen_range(2..=p - 1 - n);
        cases.push((p, h, n));
    }
    let violations: Vec<(u64, u64, u64, u64)> = cases
        .par_iter()
        .filter_map(|&(p, h, n)| {
            let ctx = PrimeCtx::new(p).unwrap();
            let rep = short_interval_bound_check(&ctx, Window::new(h, n), 0.25).unwrap();
            assert!(rep.in_regime);
            if rep.pass {
                None
            } else {
                Some((p, h, n, rep.v))
            }
        })
        .collect();
    verdict(
        violations.is_empty(),
        format!(
            "V(H,N) >= sqrt(1.5 N) on 100 random windows with N >= p^(1/4), \
             p in [10^4, 10^5]; violations (a violation here would be a finding \
             worth reporting, not a code bug): {:?}",
            violations,
        ),
    );
}

/// deg gcd(x^p - x, f_n) equals exhaustive root enumeration for every
/// n <= 8 and every odd prime p <= 1000.
#[test]
fn a05_root_count_routes_agree() {
    let fams: Vec<_> = (1..=8).map(|n| build_f(n).unwrap()).collect();
    let primes = primes_in_range(3, 1000);
    let mismatches: Vec<(u64, u64, u64, u64)> = primes
        .par_iter()
        .flat_map_iter(|&p| {
            let ctx = PrimeCtx::new(p).unwrap();
            let mut bad = Vec::new();
            for fam in &fams {
                let f = fam.reduce_mod(&ctx);
                let fast = f.distinct_root_count().unwrap();
                let brute = f.roots_brute().unwrap().len() as u64;
                if fast != brute {
                    bad.push((fam.n(), p, fast, brute));
                }
            }
            bad
        })
        .collect();
    verdict(
        mismatches.is_empty(),
        format!(
            "gcd-based root count equals exhaustive enumeration on all {} (n, p) \
             pairs, n <= 8, odd p <= 1000; mismatches: {:?}",
            primes.len() * 8,
            mismatches,
        ),
    );
}

/// Every root t0 of f_n mod p really is a factorial collision:
/// (t0+n-1)! = (t0-1)! recomputed directly, for n <= 10, p <= 10^4,
/// with the out-of-range root list empty throughout.  Zero tolerance.
#[test]
fn a06_roots_are_collisions() {
    let fams: Vec<_> = (1..=10).map(|n| build_f(n).unwrap()).collect();
    let primes = primes_in_range(3, 10_000);
    let failures: Vec<(u64, u64)> = primes
        .par_iter()
        .flat_map_iter(|&p| {
            let ctx = PrimeCtx::new(p).unwrap();
            let mut bad = Vec::new();
            for fam in &fams {
                let rep = rho_with(fam, &ctx).unwrap();
                if rep.verified != Some(true) || !rep.boundary_roots.is_empty() {
                    bad.push((fam.n(), p));
                }
            }
            bad
        })
        .collect();
    verdict(
        failures.is_empty(),
        format!(
            "every root of f_n verified as a factorial collision for n <= 10 and \
             odd p <= 10^4 ({} (n, p) pairs, no out-of-range roots); failures: {:?}",
            primes.len() * 10,
            failures,
        ),
    );
}

/// The root count of the cubic member averages 1 over primes p <= 10^5
/// (Chebotarev for a Galois-group-S_3 cubic), within 0.05, in well under
/// five minutes.
#[test]
fn a07_cubic_mean_root_count() {
    let start = Instant::now();
    let (_, s) = rho_mean_scan(3, 100_000, false).unwrap();
    let elapsed = start.elapsed();
    let ok = s.deviation.abs() <= 0.05 && elapsed < Duration::from_secs(300);
    verdict(
        ok,
        format!(
            "mean root count of the cubic member over {} primes p <= 10^5 is {:.6} \
             (|deviation| {:.6} <= 0.05; histogram {:?}; {:.1}s < 300s)",
            s.primes,
            s.mean,
            s.deviation.abs(),
            s.histogram,
            elapsed.as_secs_f64(),
        ),
    );
}

/// For 10^4 random subsets S of an interval of length N, some shift
/// d <= ceil(N/|S|) pairs up at least alpha^3 N / 2 elements (alpha =
/// |S|/N), checked in exact integer arithmetic.  Zero violations —
/// this is an unconditional pigeonhole fact, so a failure here fails
/// the suite hard.
#[test]
fn a08_shift_pair_guarantee() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut instances = Vec::with_capacity(10_000);
    for _ in 0..10_000 {
        let len = rng.gen_range(50..=2000u64);
        let alpha: f64 = rng.gen_range(0.1..0.9);
        let mut s: Vec<u64> = (0..len).filter(|_| rng.gen_bool(alpha)).collect();
        if s.is_empty() {
            s.push(rng.gen_range(0..len));
        }
        instances.push((s, len));
    }
    let violations: Vec<(u64, u64, u64, u64)> = instances
        .par_iter()
        .filter_map(|(s, len)| {
            let w = sieve_shift_find(s, *len).unwrap();
            let d_cap = len.div_ceil(s.len() as u64);
            if (w.guarantee_ok || w.vacuous) && w.d >= 1 && w.d <= d_cap {
                None
            } else {
                Some((s.len() as u64, *len, w.d, w.pair_count))
            }
        })
        .collect();
    verdict(
        violations.is_empty(),
        format!(
            "shift with >= alpha^3 N / 2 pairs found at d <= ceil(N/|S|) in all \
             10^4 random instances (N in [50, 2000], alpha in [0.1, 0.9)); \
             violations: {:?}",
            violations,
        ),
    );
}

/// Solutions of (n!)^2 = P(n) (mod p) in a window of length N stay below
/// 5 N^(3/4) for random monic quadratics P at p = 100003, and the
/// algebraically-forced pair congruence at the witness shift never fails.
#[test]
fn a09_squared_factorial_solutions_sparse() {
    let p = 100_003;
    let ctx = PrimeCtx::new(p).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut per_n = Vec::new();
    let mut congruence_bad = 0u64;
    for &n in &[100u64, 1_000, 10_000] {
        let mut worst = 0.0f64;
        for _ in 0..100 {
            let b = rng.gen_range(0..p);
            let c = rng.gen_range(0..p);
            let h = rng.gen_range(2..=p - 1 - n);
            let poly = PolyFp::from_residues(&ctx, &[c, b, 1]);
            let rep = squared_factorial_count(&ctx, &poly, Window::new(h, n)).unwrap();
            if rep.pair_congruence_ok == Some(false) {
                congruence_bad += 1;
            }
            if rep.ratio > worst {
                worst = rep.ratio;
            }
        }
        per_n.push((n, worst));
    }
    let max_ratio = per_n.iter().fold(0.0f64, |m, &(_, w)| m.max(w));
    let ok = max_ratio <= 5.0 && congruence_bad == 0;
    verdict(
        ok,
        format!(
            "(n!)^2 = P(n) solution counts stay <= 5 N^(3/4) at p = 100003 over \
             100 random quadratics per window length: worst ratio {:?}; forced \
             pair-congruence failures: {}",
            per_n, congruence_bad,
        ),
    );
}

/// The count of y hit by a quadratic on a length-N window stays within
/// the soft 3 sqrt(p) ln p envelope of N/2 on random instances, and
/// agrees exactly with the exhaustive-image oracle at every p <= 500.
#[test]
fn a10_quadratic_image_counts() {
    let primes = primes_in_range(5, 100_000);
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut out_of_envelope = Vec::new();
    for _ in 0..100 {
        let p = primes[rng.gen_range(0..primes.len())];
        let ctx = PrimeCtx::new(p).unwrap();
        let b = rng.gen_range(0..p) as i64;
        let c = rng.gen_range(0..p) as i64;
        let sq = (p as f64).sqrt().ceil() as u64;
        let n = rng.gen_range(sq..p);
        let h = rng.gen_range(0..p);
        let q = Quadratic::new(&ctx, b, c);
        let rep = burgess_count(&ctx, q, h, n).unwrap();
        if !rep.within_envelope {
            out_of_envelope.push((p, b, c, h, n, rep.count));
        }
    }

    let mut oracle_bad = Vec::new();
    let mut oracle_checked = 0u64;
    for p in primes_in_range(3, 500) {
        let ctx = PrimeCtx::new(p).unwrap();
        for k in 0..3u64 {
            let b = rng.gen_range(0..p) as i64;
            let c = rng.gen_range(0..p) as i64;
            let (h, n) = if k == 0 {
                (0, p - 1) // full window once per prime
            } else {
                (rng.gen_range(0..p), rng.gen_range(1..p))
            };
            let q = Quadratic::new(&ctx, b, c);
            let fast = burgess_count(&ctx, q, h, n).unwrap().count;
            let slow = quadratic_image_oracle(&ctx, q, h, n).unwrap();
            oracle_checked += 1;
            if fast != slow {
                oracle_bad.push((p, b, c, h, n, fast, slow));
            }
        }
    }

    let ok = out_of_envelope.is_empty() && oracle_bad.is_empty();
    verdict(
        ok,
        format!(
            "quadratic image count within 3 sqrt(p) ln p of N/2 on 100 random \
             (p <= 10^5, N >= sqrt(p)) instances (outliers: {:?}); exact match \
             with the exhaustive oracle on {} instances at p <= 500 \
             (mismatches: {:?})",
            out_of_envelope, oracle_checked, oracle_bad,
        ),
    );
}

/// The factorial-coloring pair relations — adjacent-pattern injectivity,
/// the n + m + 3 = 0 couple law, the Wilson-type square identity, the
/// cross-pattern congruence, and k^2 >= #patterns — hold on the full
/// window at every prime 5 <= p <= 10^4.
#[test]
fn a11_coloring_pair_relations() {
    let primes = primes_in_range(5, 10_000);
    let failures: Vec<u64> = primes
        .par_iter()
        .filter_map(|&p| {
            let ctx = PrimeCtx::new(p).unwrap();
            let rep = coloring_pairs(&ctx, 0, p - 1).unwrap();
            if rep.pass {
                None
            } else {
                Some(p)
            }
        })
        .collect();
    verdict(
        failures.is_empty(),
        format!(
            "all five coloring pair relations hold on the full window at every \
             prime 5 <= p <= 10^4 ({} primes); failures: {:?}",
            primes.len(),
            failures,
        ),
    );
}

/// Discriminant of the quadratic member is exactly 5; the subresultant
/// route matches the Sylvester determinant on 500 random pairs of degree
/// <= 8; and |disc(f_n)| <= n^(10 n^2) for n in 2..=12.
#[test]
fn a12_discriminants() {
    fn random_polyz(rng: &mut ChaCha8Rng) -> PolyZ {
        let d = rng.gen_range(0..=8usize);
        let mut c: Vec<i64> = (0..=d).map(|_| rng.gen_range(-50..=50)).collect();
        if c[d] == 0 {
            c[d] = 1;
        }
        PolyZ::from_i64(&c)
    }

    let d2 = disc_family(2).unwrap();
    let disc2_ok = d2.disc == BigInt::from(5);

    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let mut oracle_bad = 0u64;
    for _ in 0..500 {
        let f = random_polyz(&mut rng);
        let g = random_polyz(&mut rng);
        if resultant_z(&f, &g).unwrap() != sylvester_resultant(&f, &g).unwrap() {
            oracle_bad += 1;
        }
    }

    let bound_bad: Vec<u64> = (2..=12)
        .filter(|&n| !disc_family(n).unwrap().bound_ok)
        .collect();

    let ok = disc2_ok && oracle_bad == 0 && bound_bad.is_empty();
    verdict(
        ok,
        format!(
            "disc of the quadratic member = {} (expect 5); subresultant vs \
             Sylvester determinant mismatches on 500 random degree-<=8 pairs: {}; \
             |disc(f_n)| <= n^(10 n^2) violations for n in 2..=12: {:?}",
            d2.disc, oracle_bad, bound_bad,
        ),
    );
}

/// 200 seeded random orderings of 1..p-1 at p = 10007: the mean number
/// of distinct partial products lands within 0.01 of (1 - 1/e) p, and a
/// rerun with the same seed reproduces every trial bit-for-bit.
#[test]
fn a13_random_order_partial_products() {
    let s1 = partial_products_distinct(10_007, 200, 42, false).unwrap();
    let s2 = partial_products_distinct(10_007, 200, 42, false).unwrap();
    let dev = (s1.mean_over_p - s1.target).abs();
    let repro = s1.distinct == s2.distinct;
    verdict(
        dev <= 0.01 && repro,
        format!(
            "mean distinct partial products over 200 random orderings at p = 10007 \
             is {:.6} p (|deviation| {:.6} <= 0.01 vs 1 - 1/e); rerun \
             bit-identical: {}",
            s1.mean_over_p, dev, repro,
        ),
    );
}

/// Fixed-point-free fractions: sigma(S_n) = D_n/n! exactly for n <= 8,
/// sigma <= 1 - 1/n for every enumerated transitive example (tight for a
/// single n-cycle), the Burnside identity holds exactly, and the
/// telescoped failing-density product is exactly 1/N.
#[test]
fn a14_derangement_fraction_and_density() {
    let mut sym_bad = Vec::new();
    let mut enumerated = Vec::new();
    for n in 1..=8u64 {
        let g = PermGroup::symmetric(n as usize).unwrap();
        let fp = fixed_point_free_proportion(&g);
        if fp.fixed_point_free != derangement_count(n).unwrap() {
            sym_bad.push(n);
        }
        enumerated.push((format!("S_{n}"), g));
    }
    for (name, spec) in [
        ("C_6", "(1 2 3 4 5 6)"),
        ("D_4", "(1 2 3 4), (1 3)"),
        ("V_4", "(1 2)(3 4), (1 3)(2 4)"),
        ("A_4", "(1 2 3), (2 3 4)"),
    ] {
        let (deg, gens) = parse_generators(spec).unwrap();
        let g = PermGroup::from_generators(deg, &gens).unwrap();
        enumerated.push((name.to_string(), g));
    }

    let mut bound_bad = Vec::new();
    let mut burnside_bad = Vec::new();
    for (name, g) in &enumerated {
        let fp = fixed_point_free_proportion(g);
        if !fp.upper_bound_ok {
            bound_bad.push((name.clone(), fp.sigma.clone()));
        }
        if !burnside_orbit_check(g).identity_ok {
            burnside_bad.push(name.clone());
        }
    }

    let density_bad: Vec<u64> = (2..=12u64)
        .chain([100, 10_000, 1_000_000])
        .filter(|&n| failing_density_estimate(n).unwrap().product != format!("1/{n}"))
        .collect();

    let ok = sym_bad.is_empty()
        && bound_bad.is_empty()
        && burnside_bad.is_empty()
        && density_bad.is_empty();
    verdict(
        ok,
        format!(
            "sigma(S_n) = D_n/n! for n <= 8 (bad: {:?}); sigma <= 1 - 1/n and the \
             Burnside identity hold on {} enumerated groups (bad: {:?} / {:?}); \
             failing-density product telescopes to exactly 1/N (bad: {:?})",
            sym_bad,
            enumerated.len(),
            bound_bad,
            burnside_bad,
            density_bad,
        ),
    );
}

/// The window machinery itself: full-window stats of the first few primes
/// pinned to hand-computed values, guarding everything above against a
/// silent off-by-one in the shared streaming code.
#[test]
fn a00_pinned_window_stats() {
    let expect = [(5u64, 3u64, 2u64), (7, 4, 3), (11, 5, 6), (13, 9, 4)];
    let mut bad = Vec::new();
    for &(p, v, missed) in &expect {
        let ctx = PrimeCtx::new(p).unwrap();
        let s = v_count(&ctx, Window::full(p)).unwrap();
        if (s.v, s.missed) != (v, missed) {
            bad.push((p, s.v, s.missed));
        }
    }
    verdict(
        bad.is_empty(),
        format!(
            "full-window distinct/missed counts match hand computation at \
             p = 5, 7, 11, 13; mismatches: {:?}",
            bad,
        ),
    );
}
