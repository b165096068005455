//! Modular arithmetic mod an odd prime, prime enumeration, Legendre symbols,
//! and streaming of the factorial sequence n! (mod p).

use crate::error::{Error, Result};

/// Multiplies two residues mod `m` through 128-bit intermediates. This is the
/// wide-integer oracle that the fast path must agree with bit for bit.
#[inline]
pub fn wide_mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// a^e mod m by square-and-multiply over the wide-integer route.
pub fn wide_pow_mod(mut a: u64, mut e: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = wide_mul_mod(acc, a, m);
        }
        a = wide_mul_mod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin over the full u64 range. The witness set
/// 2..=37 is known to have no composite survivors below 2^64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let s = d.trailing_zeros();
    d >>= s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = wide_pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = wide_mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn simple_sieve(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

const SEGMENT: u64 = 1 << 18;

/// All primes in [lo, hi] inclusive, ascending, by a segmented sieve.
/// Memory stays O(sqrt(hi) + segment) regardless of the range width.
pub fn primes_in_range(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 2 || hi < lo {
        return Vec::new();
    }
    let lo = lo.max(2);
    let root = (hi as f64).sqrt() as u64 + 2;
    let base = simple_sieve(root);
    if hi <= root {
        return base.into_iter().filter(|&p| p >= lo && p <= hi).collect();
    }
    let mut out: Vec<u64> = base.iter().copied().filter(|&p| p >= lo).collect();
    let mut seg_lo = (root + 1).max(lo);
    let mut mark = vec![false; SEGMENT as usize];
    while seg_lo <= hi {
        let seg_hi = (seg_lo + SEGMENT - 1).min(hi);
        let width = (seg_hi - seg_lo + 1) as usize;
        mark[..width].fill(false);
        for &p in &base {
            if p * p > seg_hi {
                break;
            }
            let mut j = (seg_lo + p - 1) / p * p;
            if j < p * p {
                j = p * p;
            }
            while j <= seg_hi {
                mark[(j - seg_lo) as usize] = true;
                j += p;
            }
        }
        for (i, &m) in mark[..width].iter().enumerate() {
            if !m {
                out.push(seg_lo + i as u64);
            }
        }
        seg_lo = seg_hi + 1;
    }
    out
}

/// All primes up to `limit` inclusive; `limit < 2` yields an empty list.
pub fn sieve_primes(limit: u64) -> Vec<u64> {
    primes_in_range(2, limit)
}

/// Jacobi symbol (a/n) for odd n >= 1; None when n is even.
/// Negative a is folded in via (-1/n) = (-1)^((n-1)/2).
pub fn jacobi(a: i64, n: u64) -> Option<i32> {
    if n == 0 || n % 2 == 0 {
        return None;
    }
    let mut a = a.rem_euclid(n as i64) as u64;
    let mut n = n;
    let mut t = 1i32;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        Some(t)
    } else {
        Some(0)
    }
}

/// Legendre symbol (a/p) for an odd prime p, via Jacobi reciprocity:
/// 0 when p | a, +1 when a is a nonzero square mod p, -1 otherwise.
pub fn legendre(a: i64, p: u64) -> Result<i32> {
    if p <= 2 || p % 2 == 0 {
        return Err(Error::NotOddPrime(p));
    }
    Ok(jacobi(a, p).expect("p odd"))
}

/// Legendre symbol by Euler's criterion a^((p-1)/2); the independent route
/// that must agree with [`legendre`].
pub fn legendre_euler(ctx: &PrimeCtx, a: u64) -> i32 {
    let a = a % ctx.p();
    if a == 0 {
        return 0;
    }
    let e = ctx.pow(a, (ctx.p() - 1) / 2);
    if e == 1 {
        1
    } else {
        debug_assert_eq!(e, ctx.p() - 1);
        -1
    }
}

/// An odd prime p < 2^63 with Montgomery constants for fast multiplication.
/// The contract is bit-exact agreement with [`wide_mul_mod`]; the redundant
/// representation is an internal detail.
#[derive(Debug, Clone)]
pub struct PrimeCtx {
    p: u64,
    neg_inv: u64, // -p^{-1} mod 2^64
    r2: u64,      // 2^128 mod p
    one: u64,     // 2^64 mod p, i.e. 1 in Montgomery form
}

impl PrimeCtx {
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 63 {
            return Err(Error::PrimeTooLarge(p));
        }
        if p < 3 || p % 2 == 0 {
            return Err(Error::NotOddPrime(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        // Newton iteration doubles correct low bits each round; p odd makes
        // x = p a valid start (p*p = 1 mod 8).
        let mut inv = p;
        for _ in 0..5 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        debug_assert_eq!(p.wrapping_mul(inv), 1);
        let one = ((1u128 << 64) % p as u128) as u64;
        let r2 = ((one as u128 * one as u128) % p as u128) as u64;
        Ok(PrimeCtx {
            p,
            neg_inv: inv.wrapping_neg(),
            r2,
            one,
        })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    /// Montgomery reduction: t * 2^-64 mod p, for t < 2^64 * p.
    #[inline]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.neg_inv);
        let r = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if r >= self.p {
            r - self.p
        } else {
            r
        }
    }

    #[inline]
    pub fn to_mont(&self, a: u64) -> u64 {
        debug_assert!(a < self.p);
        self.redc(a as u128 * self.r2 as u128)
    }

    #[inline]
    pub fn from_mont(&self, a: u64) -> u64 {
        self.redc(a as u128)
    }

    /// Product of two Montgomery-form residues, in Montgomery form.
    #[inline]
    pub fn mont_mul(&self, a: u64, b: u64) -> u64 {
        self.redc(a as u128 * b as u128)
    }

    /// 1 in Montgomery form.
    #[inline]
    pub fn mont_one(&self) -> u64 {
        self.one
    }

    /// Plain-residue product (a*b) mod p. Two reductions, no division.
    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        self.redc(self.to_mont(a) as u128 * b as u128)
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.p && b < self.p);
        let s = a + b; // no overflow: both < p < 2^63
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.p && b < self.p);
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    /// a^e mod p on plain residues.
    pub fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut base = self.to_mont(a % self.p);
        let mut acc = self.one;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mont_mul(acc, base);
            }
            base = self.mont_mul(base, base);
            e >>= 1;
        }
        self.from_mont(acc)
    }

    /// Multiplicative inverse of a nonzero residue (Fermat).
    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(a % self.p != 0);
        self.pow(a, self.p - 2)
    }
}

/// Convenience form of [`PrimeCtx::mul`]: (a*b) mod p under a context.
#[inline]
pub fn mul_mod(a: u64, b: u64, ctx: &PrimeCtx) -> u64 {
    ctx.mul(a, b)
}

/// Yields (n, n! mod p) for n = start, start+1, ..., p-1 by a running
/// product. Supports checkpoint/resume through [`FactorialStream::state`]
/// and [`FactorialStream::resume`].
pub struct FactorialStream<'a> {
    ctx: &'a PrimeCtx,
    n: u64,         // index of the next value to yield
    value: u64,     // n! in Montgomery form
    next_idx: u64,  // n+1 in Montgomery form, maintained additively
}

impl<'a> FactorialStream<'a> {
    /// Stream positioned at n = start, computing start! from scratch.
    pub fn new(ctx: &'a PrimeCtx, start: u64) -> Result<Self> {
        if start < 2 || start > ctx.p() - 1 {
            return Err(Error::OutOfRange {
                what: "factorial stream start",
                value: start,
                lo: 2,
                hi: ctx.p() - 1,
            });
        }
        let mut value = ctx.mont_one();
        let mut k = ctx.mont_one();
        for _ in 2..=start {
            k = ctx.add(k, ctx.mont_one());
            value = ctx.mont_mul(value, k);
        }
        Ok(FactorialStream {
            ctx,
            n: start,
            value,
            next_idx: ctx.add(k, ctx.mont_one()),
        })
    }

    /// Resumes from a checkpointed (n, n! mod p) pair; the next yield is
    /// exactly that pair. The value is trusted, not recomputed.
    pub fn resume(ctx: &'a PrimeCtx, n: u64, value: u64) -> Result<Self> {
        if n < 2 || n > ctx.p() - 1 {
            return Err(Error::OutOfRange {
                what: "factorial stream resume index",
                value: n,
                lo: 2,
                hi: ctx.p() - 1,
            });
        }
        if value >= ctx.p() {
            return Err(Error::OutOfRange {
                what: "factorial stream resume value",
                value,
                lo: 0,
                hi: ctx.p() - 1,
            });
        }
        Ok(FactorialStream {
            ctx,
            n,
            value: ctx.to_mont(value),
            next_idx: ctx.to_mont((n + 1) % ctx.p()),
        })
    }

    /// The (n, n! mod p) pair the next `next()` call will yield, or None
    /// when the stream is exhausted. Feed this to [`FactorialStream::resume`].
    pub fn state(&self) -> Option<(u64, u64)> {
        if self.n <= self.ctx.p() - 1 {
            Some((self.n, self.ctx.from_mont(self.value)))
        } else {
            None
        }
    }
}

impl Iterator for FactorialStream<'_> {
    type Item = (u64, u64);

    #[inline]
    fn next(&mut self) -> Option<(u64, u64)> {
        if self.n > self.ctx.p() - 1 {
            return None;
        }
        let out = (self.n, self.ctx.from_mont(self.value));
        self.n += 1;
        self.value = self.ctx.mont_mul(self.value, self.next_idx);
        self.next_idx = self.ctx.add(self.next_idx, self.ctx.mont_one());
        Some(out)
    }
}

/// Free-function alias for [`FactorialStream::new`].
pub fn factorial_stream(ctx: &PrimeCtx, start: u64) -> Result<FactorialStream<'_>> {
    FactorialStream::new(ctx, start)
}

/// n! mod p for each requested index (0! = 1! = 1), in input order,
/// via one ascending pass. Indices must be <= p-1.
pub fn factorials_at(ctx: &PrimeCtx, indices: &[u64]) -> Result<Vec<u64>> {
    for &i in indices {
        if i > ctx.p() - 1 {
            return Err(Error::OutOfRange {
                what: "factorial index",
                value: i,
                lo: 0,
                hi: ctx.p() - 1,
            });
        }
    }
    let mut sorted: Vec<u64> = indices.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let mut table = std::collections::HashMap::new();
    let mut want = sorted.iter().copied().peekable();
    while let Some(&i) = want.peek() {
        if i <= 1 {
            table.insert(i, 1u64);
            want.next();
        } else {
            break;
        }
    }
    if want.peek().is_some() {
        for (n, v) in FactorialStream::new(ctx, 2)? {
            match want.peek() {
                Some(&i) if i == n => {
                    table.insert(n, v);
                    want.next();
                }
                Some(_) => {}
                None => break,
            }
        }
    }
    Ok(indices.iter().map(|i| table[i]).collect())
}
