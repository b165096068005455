//! Permutation-group side of the distinct-count heuristics: Monte Carlo
//! partial products of random permutations, exact fixed-point-free
//! proportions with the Burnside orbit identity, the telescoping density
//! product, and the all-factorials-distinct census over primes.
//!
//! Everything randomized is seeded explicitly and trial-indexed, so
//! parallel and serial runs emit identical numbers.

use std::collections::{HashSet, VecDeque};

use num_integer::Integer;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bits::BitSet;
use crate::error::{Error, Result};
use crate::modarith::{sieve_primes, PrimeCtx};
use crate::residues::first_collision;
use crate::scan::{check_budget, est_collision_scan};

/// A permutation of {0, ..., n-1} by its image table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    img: Vec<u32>,
}

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm {
            img: (0..n as u32).collect(),
        }
    }

    pub fn degree(&self) -> usize {
        self.img.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.img[x] as usize
    }

    /// self after other: x -> self(other(x)).
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm {
            img: other.img.iter().map(|&x| self.img[x as usize]).collect(),
        }
    }

    pub fn fixed_points(&self) -> u64 {
        self.img
            .iter()
            .enumerate()
            .filter(|&(i, &v)| i as u32 == v)
            .count() as u64
    }

    pub fn is_identity(&self) -> bool {
        self.img.iter().enumerate().all(|(i, &v)| i as u32 == v)
    }
}

/// Parses a comma-separated generator list in cycle notation, e.g.
/// `(1 2 3),(1 2)`; points are 1-based, the degree is the largest point
/// mentioned.  Returns (degree, generators).
pub fn parse_generators(s: &str) -> Result<(usize, Vec<Perm>)> {
    let gens_cycles = parse_cycle_lists(s)?;
    let degree = gens_cycles
        .iter()
        .flatten()
        .flatten()
        .copied()
        .max()
        .ok_or_else(|| Error::Parse("no cycles found".into()))?;
    let mut gens = Vec::new();
    for cycles in &gens_cycles {
        let mut img: Vec<u32> = (0..degree as u32).collect();
        for cycle in cycles {
            for w in 0..cycle.len() {
                let from = cycle[w] - 1;
                let to = cycle[(w + 1) % cycle.len()] - 1;
                img[from] = to as u32;
            }
        }
        gens.push(Perm { img });
    }
    Ok((degree, gens))
}

fn parse_cycle_lists(s: &str) -> Result<Vec<Vec<Vec<usize>>>> {
    let mut out = Vec::new();
    for gen_str in s.split(',') {
        let gen_str = gen_str.trim();
        if gen_str.is_empty() {
            return Err(Error::Parse("empty generator".into()));
        }
        let mut cycles = Vec::new();
        let mut rest = gen_str;
        let mut seen = HashSet::new();
        while !rest.is_empty() {
            let open = rest
                .strip_prefix('(')
                .ok_or_else(|| Error::Parse(format!("expected '(' in {gen_str:?}")))?;
            let close = open
                .find(')')
                .ok_or_else(|| Error::Parse(format!("unclosed cycle in {gen_str:?}")))?;
            let mut cycle = Vec::new();
            for tok in open[..close].split_whitespace() {
                let point: usize = tok
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad point {tok:?}")))?;
                if point == 0 {
                    return Err(Error::Parse("points are 1-based".into()));
                }
                if !seen.insert(point) {
                    return Err(Error::Parse(format!("point {point} repeated in generator")));
                }
                cycle.push(point);
            }
            if !cycle.is_empty() {
                cycles.push(cycle);
            }
            rest = open[close + 1..].trim_start();
        }
        out.push(cycles);
    }
    Ok(out)
}

/// Explicitly enumerated subgroup of S_n.
#[derive(Debug, Clone)]
pub struct PermGroup {
    degree: usize,
    elements: Vec<Perm>,
}

/// Largest group order the closure enumeration will materialize.
pub const MAX_GROUP_ORDER: usize = 1_000_000;

impl PermGroup {
    /// Closure of the generators under composition (which, in a finite
    /// group, also closes under inverse).  Elements come out sorted.
    pub fn from_generators(degree: usize, gens: &[Perm]) -> Result<PermGroup> {
        for g in gens {
            if g.degree() != degree {
                return Err(Error::Invalid("generator degree mismatch"));
            }
        }
        let id = Perm::identity(degree);
        let mut seen: HashSet<Perm> = HashSet::new();
        seen.insert(id.clone());
        let mut queue = VecDeque::from([id]);
        while let Some(cur) = queue.pop_front() {
            for g in gens {
                let next = g.compose(&cur);
                if seen.len() >= MAX_GROUP_ORDER && !seen.contains(&next) {
                    return Err(Error::GuardExceeded {
                        what: "group order",
                        value: (seen.len() + 1) as u64,
                        max: MAX_GROUP_ORDER as u64,
                    });
                }
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        let mut elements: Vec<Perm> = seen.into_iter().collect();
        elements.sort();
        Ok(PermGroup { degree, elements })
    }

    /// All of S_n, enumerated directly.
    pub fn symmetric(n: usize) -> Result<PermGroup> {
        const MAX_SYM: usize = 9; // 9! is the last factorial under the order guard
        if n == 0 || n > MAX_SYM {
            return Err(Error::OutOfRange {
                what: "symmetric group degree",
                value: n as u64,
                lo: 1,
                hi: MAX_SYM as u64,
            });
        }
        let mut elements = Vec::new();
        let mut img: Vec<u32> = (0..n as u32).collect();
        permute_rec(&mut img, 0, &mut elements);
        elements.sort();
        Ok(PermGroup {
            degree: n,
            elements,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elements
    }

    /// Orbit count of the natural action on points, by union-find over
    /// every element's mapping.
    pub fn orbits(&self) -> u64 {
        let mut parent: Vec<usize> = (0..self.degree).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for e in &self.elements {
            for x in 0..self.degree {
                let (a, b) = (find(&mut parent, x), find(&mut parent, e.apply(x)));
                if a != b {
                    parent[a] = b;
                }
            }
        }
        (0..self.degree)
            .filter(|&x| find(&mut parent, x) == x)
            .count() as u64
    }
}

fn permute_rec(img: &mut Vec<u32>, k: usize, out: &mut Vec<Perm>) {
    if k == img.len() {
        out.push(Perm { img: img.clone() });
        return;
    }
    for i in k..img.len() {
        img.swap(k, i);
        permute_rec(img, k + 1, out);
        img.swap(k, i);
    }
}

/// Exact fixed-point-free proportion of a group action, with the
/// averaging upper bound sigma <= 1 - 1/n checked exactly.  The reversed
/// printed bound 1 - 1/n! is reported but never asserted: S_3 already
/// sits below it.
#[derive(Debug, Clone, Serialize)]
pub struct FixedPointFree {
    pub degree: u64,
    pub order: u64,
    pub fixed_point_free: u64,
    /// Reduced fraction fixed_point_free / order.
    pub sigma: String,
    pub sigma_value: f64,
    /// 1 - 1/degree.
    pub upper_bound: f64,
    /// degree * fixed_point_free <= (degree - 1) * order, exactly.
    pub upper_bound_ok: bool,
    /// 1 - 1/degree!.
    pub printed_lower_bound: f64,
    pub sigma_ge_printed: bool,
}

pub fn fixed_point_free_proportion(g: &PermGroup) -> FixedPointFree {
    let n = g.degree() as u64;
    let order = g.order();
    let free = g
        .elements()
        .iter()
        .filter(|e| e.fixed_points() == 0)
        .count() as u64;
    let d = free.gcd(&order);
    let sigma_value = free as f64 / order as f64;
    let mut fact = 1f64;
    for k in 1..=n.min(170) {
        fact *= k as f64;
    }
    let printed_lower_bound = 1.0 - 1.0 / fact;
    FixedPointFree {
        degree: n,
        order,
        fixed_point_free: free,
        sigma: format!("{}/{}", free / d, order / d),
        sigma_value,
        upper_bound: 1.0 - 1.0 / n as f64,
        upper_bound_ok: (n as u128) * (free as u128) <= (n as u128 - 1) * (order as u128),
        printed_lower_bound,
        sigma_ge_printed: sigma_value >= printed_lower_bound,
    }
}

/// The orbit-counting identity sum |X^sigma| = |G| * #orbits, exactly.
#[derive(Debug, Clone, Serialize)]
pub struct BurnsideReport {
    pub degree: u64,
    pub order: u64,
    pub fixed_point_sum: u64,
    pub orbits: u64,
    pub identity_ok: bool,
}

pub fn burnside_orbit_check(g: &PermGroup) -> BurnsideReport {
    let fixed_point_sum: u64 = g.elements().iter().map(|e| e.fixed_points()).sum();
    let orbits = g.orbits();
    BurnsideReport {
        degree: g.degree() as u64,
        order: g.order(),
        fixed_point_sum,
        orbits,
        identity_ok: fixed_point_sum == g.order() * orbits,
    }
}

/// D_n by the recurrence D_n = (n-1)(D_{n-1} + D_{n-2}); n <= 20 keeps
/// the count in u64.
pub fn derangement_count(n: u64) -> Result<u64> {
    if n > 20 {
        return Err(Error::OutOfRange {
            what: "derangement index",
            value: n,
            lo: 0,
            hi: 20,
        });
    }
    let (mut prev2, mut prev) = (1u64, 0u64); // D_0, D_1
    match n {
        0 => return Ok(1),
        1 => return Ok(0),
        _ => {}
    }
    for k in 2..=n {
        let cur = (k - 1) * (prev + prev2);
        prev2 = prev;
        prev = cur;
    }
    Ok(prev)
}

/// Distinct values among the prefix products of `values` mod p.  `values`
/// must be a permutation of {1, ..., p-1}.
pub fn distinct_partial_products(ctx: &PrimeCtx, values: &[u64]) -> Result<u64> {
    let p = ctx.p();
    if values.len() as u64 != p - 1 {
        return Err(Error::Invalid(
            "partial products need a permutation of 1..p-1",
        ));
    }
    let mut present = BitSet::new(p as usize);
    for &v in values {
        if v == 0 || v >= p || !present.insert(v as usize) {
            return Err(Error::Invalid(
                "partial products need a permutation of 1..p-1",
            ));
        }
    }
    let mut seen = BitSet::new(p as usize);
    let mut acc = 1u64;
    for &v in values {
        acc = ctx.mul(acc, v);
        seen.insert(acc as usize);
    }
    Ok(seen.count() as u64)
}

/// Monte Carlo distinct-count of partial products of uniform random
/// permutations of {1, ..., p-1}.
#[derive(Debug, Clone, Serialize)]
pub struct TrialSummary {
    pub p: u64,
    pub trials: u64,
    pub seed: u64,
    pub distinct: Vec<u64>,
    pub mean: f64,
    pub mean_over_p: f64,
    /// 1 - 1/e.
    pub target: f64,
    pub deviation: f64,
}

/// Trial t shuffles with stream t of the master seed, so results do not
/// depend on scheduling.
pub fn partial_products_distinct(
    p: u64,
    trials: u64,
    seed: u64,
    force: bool,
) -> Result<TrialSummary> {
    const MAX_P: u64 = 10_000_000;
    if p > MAX_P {
        return Err(Error::GuardExceeded {
            what: "trial modulus",
            value: p,
            max: MAX_P,
        });
    }
    let ctx = PrimeCtx::new(p)?;
    if p < 5 {
        return Err(Error::OutOfRange {
            what: "trial modulus",
            value: p,
            lo: 5,
            hi: MAX_P,
        });
    }
    if trials == 0 {
        return Err(Error::OutOfRange {
            what: "trial count",
            value: 0,
            lo: 1,
            hi: u64::MAX,
        });
    }
    check_budget(trials as u128 * p as u128, force)?;
    let distinct: Vec<u64> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(t);
            let mut values: Vec<u64> = (1..p).collect();
            values.shuffle(&mut rng);
            distinct_partial_products(&ctx, &values)
        })
        .collect::<Result<_>>()?;
    let mean = distinct.iter().sum::<u64>() as f64 / trials as f64;
    let target = 1.0 - (-1f64).exp();
    let mean_over_p = mean / p as f64;
    Ok(TrialSummary {
        p,
        trials,
        seed,
        distinct,
        mean,
        mean_over_p,
        target,
        deviation: mean_over_p - target,
    })
}

/// The telescoping density product and the sigma chain it caps.
#[derive(Debug, Clone, Serialize)]
pub struct DensityReport {
    pub n: u64,
    /// prod_{m=2..N} (1 - 1/m), exact; always reduces to 1/N.
    pub product: String,
    pub product_value: f64,
    /// sum_{m=2..N} (1 - sigma_m)/sigma_m.
    pub chain_sum: f64,
    /// prod_{m=2..N} sigma_m.
    pub chain_product: f64,
    /// chain_sum * chain_product.
    pub chain_value: f64,
    /// sigma_m measured from S_m up to here, the 1 - 1/m bound beyond.
    pub measured_up_to: u64,
}

pub fn failing_density_estimate(n: u64) -> Result<DensityReport> {
    const MAX_N: u64 = 10_000_000;
    const MEASURED: u64 = 8;
    if n < 2 || n > MAX_N {
        return Err(Error::OutOfRange {
            what: "density chain length N",
            value: n,
            lo: 2,
            hi: MAX_N,
        });
    }
    // exact telescoping in (numerator, denominator) form, reduced each step
    let (mut num, mut den) = (1u64, 1u64);
    for m in 2..=n {
        num *= m - 1;
        den *= m;
        let d = num.gcd(&den);
        num /= d;
        den /= d;
    }
    let mut chain_sum = 0f64;
    let mut chain_product = 1f64;
    for m in 2..=n {
        let sigma = if m <= MEASURED {
            let g = PermGroup::symmetric(m as usize)?;
            fixed_point_free_proportion(&g).sigma_value
        } else {
            1.0 - 1.0 / m as f64
        };
        chain_sum += (1.0 - sigma) / sigma;
        chain_product *= sigma;
    }
    Ok(DensityReport {
        n,
        product: format!("{num}/{den}"),
        product_value: num as f64 / den as f64,
        chain_sum,
        chain_product,
        chain_value: chain_sum * chain_product,
        measured_up_to: MEASURED.min(n),
    })
}

/// Census of primes whose factorials 2!, ..., (p-1)! stay pairwise
/// distinct mod p.  p = 2 and 3 are vacuously distinct and included;
/// beyond p = 5 none are expected.
#[derive(Debug, Clone, Serialize)]
pub struct ErdosDensityReport {
    pub x: u64,
    pub primes: u64,
    pub no_collision: Vec<u64>,
    /// |no_collision| / primes; None when no primes are <= x.
    pub fraction: Option<f64>,
}

pub fn erdos_density_scan(x: u64, force: bool) -> Result<ErdosDensityReport> {
    check_budget(est_collision_scan(x), force)?;
    let primes = sieve_primes(x);
    let mut no_collision: Vec<u64> = primes.iter().copied().filter(|&p| p < 5).collect();
    let found: Vec<u64> = primes
        .par_iter()
        .filter(|&&p| p >= 5)
        .filter_map(|&p| {
            let ctx = PrimeCtx::new(p).expect("sieved prime");
            match first_collision(&ctx) {
                None => Some(p),
                Some(_) => None,
            }
        })
        .collect();
    no_collision.extend(found);
    no_collision.sort_unstable();
    let count = primes.len() as u64;
    Ok(ErdosDensityReport {
        x,
        primes: count,
        fraction: (count > 0).then(|| no_collision.len() as f64 / count as f64),
        no_collision,
    })
}
