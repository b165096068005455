//! Dense univariate polynomials: over F_p (multiplication, remainder, monic
//! gcd, x^p mod f, distinct-root counting) and over Z (subresultant-sequence
//! resultants, discriminants, Sylvester-determinant oracle).

pub use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::modarith::{wide_mul_mod, PrimeCtx};

/// Polynomial over F_p, ascending coefficients, no trailing zeros
/// (the zero polynomial is the empty list).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyFp {
    p: u64,
    c: Vec<u64>,
}

fn trim(c: &mut Vec<u64>) {
    while c.last() == Some(&0) {
        c.pop();
    }
}

impl PolyFp {
    pub fn from_residues(ctx: &PrimeCtx, coeffs: &[u64]) -> PolyFp {
        let mut c: Vec<u64> = coeffs.iter().map(|&x| x % ctx.p()).collect();
        trim(&mut c);
        PolyFp { p: ctx.p(), c }
    }

    /// Coefficients given as signed integers, reduced into [0, p).
    pub fn from_signed(ctx: &PrimeCtx, coeffs: &[i64]) -> PolyFp {
        let p = ctx.p() as i64;
        let mut c: Vec<u64> = coeffs.iter().map(|&x| x.rem_euclid(p) as u64).collect();
        trim(&mut c);
        PolyFp { p: ctx.p(), c }
    }

    /// Parses the CLI coefficient format `c0,c1,...,cd` (ascending, decimal,
    /// each term optionally negative).
    pub fn parse(ctx: &PrimeCtx, s: &str) -> Result<PolyFp> {
        let mut coeffs = Vec::new();
        for part in s.split(',') {
            let part = part.trim();
            let v: i64 = part
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient {part:?}")))?;
            coeffs.push(v);
        }
        Ok(PolyFp::from_signed(ctx, &coeffs))
    }

    pub fn zero(ctx: &PrimeCtx) -> PolyFp {
        PolyFp {
            p: ctx.p(),
            c: Vec::new(),
        }
    }

    pub fn one(ctx: &PrimeCtx) -> PolyFp {
        PolyFp::from_residues(ctx, &[1])
    }

    /// The monomial x.
    pub fn x(ctx: &PrimeCtx) -> PolyFp {
        PolyFp::from_residues(ctx, &[0, 1])
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// None for the zero polynomial.
    pub fn deg(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Leading coefficient; 0 for the zero polynomial.
    pub fn lc(&self) -> u64 {
        self.c.last().copied().unwrap_or(0)
    }

    fn check_same(&self, other: &PolyFp) -> Result<()> {
        if self.p != other.p {
            return Err(Error::MismatchedModulus {
                left: self.p,
                right: other.p,
            });
        }
        Ok(())
    }

    pub fn eval(&self, t: u64) -> u64 {
        let t = t % self.p;
        let mut acc = 0u64;
        for &ci in self.c.iter().rev() {
            acc = wide_mul_mod(acc, t, self.p);
            acc += ci;
            if acc >= self.p {
                acc -= self.p;
            }
        }
        acc
    }

    pub fn add(&self, other: &PolyFp) -> Result<PolyFp> {
        self.check_same(other)?;
        let mut c = vec![0u64; self.c.len().max(other.c.len())];
        for (i, slot) in c.iter_mut().enumerate() {
            let a = self.c.get(i).copied().unwrap_or(0);
            let b = other.c.get(i).copied().unwrap_or(0);
            let s = a + b;
            *slot = if s >= self.p { s - self.p } else { s };
        }
        trim(&mut c);
        Ok(PolyFp { p: self.p, c })
    }

    pub fn sub(&self, other: &PolyFp) -> Result<PolyFp> {
        self.check_same(other)?;
        let mut c = vec![0u64; self.c.len().max(other.c.len())];
        for (i, slot) in c.iter_mut().enumerate() {
            let a = self.c.get(i).copied().unwrap_or(0);
            let b = other.c.get(i).copied().unwrap_or(0);
            *slot = if a >= b { a - b } else { a + self.p - b };
        }
        trim(&mut c);
        Ok(PolyFp { p: self.p, c })
    }

    pub fn scale(&self, k: u64) -> PolyFp {
        let k = k % self.p;
        let mut c: Vec<u64> = self.c.iter().map(|&x| wide_mul_mod(x, k, self.p)).collect();
        trim(&mut c);
        PolyFp { p: self.p, c }
    }

    /// Schoolbook product; fine at the degrees this crate needs.
    pub fn mul(&self, other: &PolyFp) -> Result<PolyFp> {
        self.check_same(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(PolyFp {
                p: self.p,
                c: Vec::new(),
            });
        }
        let mut acc = vec![0u128; self.c.len() + other.c.len() - 1];
        let cap = u128::MAX - (self.p as u128 - 1).pow(2);
        for (i, &a) in self.c.iter().enumerate() {
            for (j, &b) in other.c.iter().enumerate() {
                let slot = &mut acc[i + j];
                if *slot > cap {
                    *slot %= self.p as u128;
                }
                *slot += a as u128 * b as u128;
            }
        }
        let mut c: Vec<u64> = acc.into_iter().map(|x| (x % self.p as u128) as u64).collect();
        trim(&mut c);
        Ok(PolyFp { p: self.p, c })
    }

    pub fn monic(&self) -> PolyFp {
        if self.is_zero() || self.lc() == 1 {
            return self.clone();
        }
        // p prime by construction, so lc is invertible
        let inv = mod_inv(self.lc(), self.p);
        self.scale(inv)
    }

    /// Remainder of self by a nonzero divisor (not required monic).
    pub fn rem(&self, div: &PolyFp) -> Result<PolyFp> {
        self.check_same(div)?;
        if div.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let dd = div.deg().unwrap();
        let mut r = self.c.clone();
        if r.len() <= dd {
            return Ok(self.clone());
        }
        let lcinv = mod_inv(div.lc(), self.p);
        let mut top = r.len();
        while top > dd {
            let q = wide_mul_mod(r[top - 1], lcinv, self.p);
            if q != 0 {
                let shift = top - 1 - dd;
                for (j, &bc) in div.c.iter().enumerate() {
                    let sub = wide_mul_mod(q, bc, self.p);
                    let slot = &mut r[shift + j];
                    *slot = if *slot >= sub { *slot - sub } else { *slot + self.p - sub };
                }
            }
            debug_assert_eq!(r[top - 1], 0);
            top -= 1;
        }
        r.truncate(top);
        trim(&mut r);
        Ok(PolyFp { p: self.p, c: r })
    }

    /// Monic gcd; gcd(f, 0) = monic(f).
    pub fn gcd(&self, other: &PolyFp) -> Result<PolyFp> {
        self.check_same(other)?;
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// x^p mod f by square-and-multiply over the bits of p.
    /// The degree-p polynomial itself is never materialized.
    pub fn powmod_xp(&self) -> Result<PolyFp> {
        let d = self.deg().ok_or(Error::ZeroPolynomial)?;
        if d == 0 {
            return Err(Error::OutOfRange {
                what: "powmod_xp degree",
                value: 0,
                lo: 1,
                hi: u64::MAX,
            });
        }
        let p = self.p;
        let ctx_free_x = PolyFp { p, c: vec![0, 1] };
        let mut acc = PolyFp { p, c: vec![1] };
        for bit in (0..64 - p.leading_zeros()).rev() {
            acc = acc.mul(&acc)?.rem(self)?;
            if p >> bit & 1 == 1 {
                acc = acc.mul(&ctx_free_x)?.rem(self)?;
            }
        }
        Ok(acc)
    }

    /// Number of distinct roots of f in F_p, as deg gcd(x^p - x mod f, f).
    pub fn distinct_root_count(&self) -> Result<u64> {
        let d = self.deg().ok_or(Error::ZeroPolynomial)?;
        if d == 0 {
            return Ok(0);
        }
        let xp = self.powmod_xp()?;
        let x = PolyFp {
            p: self.p,
            c: vec![0, 1],
        };
        let h = xp.sub(&x)?.rem(self)?;
        let g = h.gcd(self)?;
        Ok(g.deg().unwrap_or(0) as u64)
    }

    /// Largest modulus [`PolyFp::roots_brute`] will sweep exhaustively.
    pub const ROOT_ENUM_MAX_P: u64 = 1_000_000;

    /// All roots in [0, p-1] by Horner evaluation; oracle for
    /// [`PolyFp::distinct_root_count`]. Guarded to p <= 10^6.
    pub fn roots_brute(&self) -> Result<Vec<u64>> {
        if self.p > Self::ROOT_ENUM_MAX_P {
            return Err(Error::GuardExceeded {
                what: "roots_brute modulus",
                value: self.p,
                max: Self::ROOT_ENUM_MAX_P,
            });
        }
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let ctx = PrimeCtx::new(self.p).expect("modulus validated at construction");
        let mont: Vec<u64> = self.c.iter().map(|&x| ctx.to_mont(x)).collect();
        let mut roots = Vec::new();
        for t in 0..self.p {
            let tm = ctx.to_mont(t);
            let mut acc = 0u64;
            for &cm in mont.iter().rev() {
                acc = ctx.add(ctx.mont_mul(acc, tm), cm);
            }
            if acc == 0 {
                roots.push(t);
            }
        }
        Ok(roots)
    }
}

impl std::fmt::Display for PolyFp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let strs: Vec<String> = self.c.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", strs.join(","))
    }
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // Fermat; p prime by the PolyFp construction path.
    crate::modarith::wide_pow_mod(a, p - 2, p)
}

/// Resultant over F_p by the Euclidean remainder sequence with the standard
/// sign/leading-coefficient bookkeeping:
/// Res(A,B) = (-1)^(deg A * deg B) * lc(B)^(deg A - deg R) * Res(B, R).
pub fn resultant_fp(a: &PolyFp, b: &PolyFp) -> Result<u64> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if a.modulus() != b.modulus() {
        return Err(Error::MismatchedModulus {
            left: a.modulus(),
            right: b.modulus(),
        });
    }
    let p = a.modulus();
    let mut a = a.clone();
    let mut b = b.clone();
    let mut acc = 1u64;
    let mut negate = false;
    loop {
        if b.is_zero() {
            return Ok(0);
        }
        let (da, db) = (a.deg().unwrap() as u64, b.deg().unwrap() as u64);
        if db == 0 {
            acc = wide_mul_mod(acc, crate::modarith::wide_pow_mod(b.lc(), da, p), p);
            break;
        }
        let r = a.rem(&b)?;
        let dr = r.deg().map(|d| d as u64).unwrap_or(0);
        if da & 1 == 1 && db & 1 == 1 {
            negate = !negate;
        }
        acc = wide_mul_mod(acc, crate::modarith::wide_pow_mod(b.lc(), da - dr, p), p);
        a = b;
        b = r;
    }
    if negate && acc != 0 {
        acc = p - acc;
    }
    Ok(acc)
}

/// Polynomial with arbitrary-precision integer coefficients, ascending,
/// no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyZ {
    c: Vec<BigInt>,
}

impl PolyZ {
    pub fn new(mut c: Vec<BigInt>) -> PolyZ {
        while c.last().map(Zero::is_zero) == Some(true) {
            c.pop();
        }
        PolyZ { c }
    }

    pub fn from_i64(coeffs: &[i64]) -> PolyZ {
        PolyZ::new(coeffs.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero() -> PolyZ {
        PolyZ { c: Vec::new() }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn deg(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lc(&self) -> BigInt {
        self.c.last().cloned().unwrap_or_else(Zero::zero)
    }

    pub fn eval(&self, t: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for ci in self.c.iter().rev() {
            acc = acc * t + ci;
        }
        acc
    }

    pub fn mul(&self, other: &PolyZ) -> PolyZ {
        if self.is_zero() || other.is_zero() {
            return PolyZ::zero();
        }
        let mut c = vec![BigInt::zero(); self.c.len() + other.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in other.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        PolyZ::new(c)
    }

    pub fn derivative(&self) -> PolyZ {
        if self.c.len() <= 1 {
            return PolyZ::zero();
        }
        PolyZ::new(
            self.c[1..]
                .iter()
                .enumerate()
                .map(|(i, ci)| ci * (i as u64 + 1))
                .collect(),
        )
    }

    /// Coefficient-wise reduction into F_p.
    pub fn reduce_mod(&self, ctx: &PrimeCtx) -> PolyFp {
        let p = BigInt::from(ctx.p());
        let mut c: Vec<u64> = self
            .c
            .iter()
            .map(|ci| {
                let r = ci.mod_floor(&p);
                u64::try_from(r).expect("mod_floor lands in [0, p)")
            })
            .collect();
        trim(&mut c);
        PolyFp { p: ctx.p(), c }
    }

    fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for ci in &self.c {
            g = g.gcd(ci);
            if g.is_one() {
                break;
            }
        }
        g
    }

    fn scale(&self, k: &BigInt) -> PolyZ {
        PolyZ::new(self.c.iter().map(|ci| ci * k).collect())
    }

    fn exact_div_scalar(&self, k: &BigInt) -> PolyZ {
        debug_assert!(!k.is_zero());
        PolyZ::new(
            self.c
                .iter()
                .map(|ci| {
                    let (q, r) = ci.div_rem(k);
                    debug_assert!(r.is_zero(), "inexact division in remainder sequence");
                    q
                })
                .collect(),
        )
    }

    fn sub(&self, other: &PolyZ) -> PolyZ {
        let mut c = vec![BigInt::zero(); self.c.len().max(other.c.len())];
        for (i, slot) in c.iter_mut().enumerate() {
            let a = self.c.get(i).cloned().unwrap_or_else(Zero::zero);
            let b = other.c.get(i).cloned().unwrap_or_else(Zero::zero);
            *slot = a - b;
        }
        PolyZ::new(c)
    }

    fn shift_up(&self, k: usize) -> PolyZ {
        if self.is_zero() {
            return PolyZ::zero();
        }
        let mut c = vec![BigInt::zero(); k];
        c.extend(self.c.iter().cloned());
        PolyZ { c }
    }
}

impl std::fmt::Display for PolyZ {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let strs: Vec<String> = self.c.iter().map(|c| c.to_string()).collect();
        write!(f, "{}", strs.join(","))
    }
}

/// Pseudo-remainder: the remainder of lc(b)^(deg a - deg b + 1) * a by b,
/// computed without fractions.
fn pseudo_rem(a: &PolyZ, b: &PolyZ) -> PolyZ {
    let d = b.lc();
    let db = b.deg().unwrap();
    let mut r = a.clone();
    let mut steps = a.deg().unwrap() as i64 - db as i64 + 1;
    while !r.is_zero() && r.deg().unwrap() >= db {
        let k = r.deg().unwrap() - db;
        let lr = r.lc();
        r = r.scale(&d).sub(&b.shift_up(k).scale(&lr));
        steps -= 1;
    }
    if steps > 0 {
        r = r.scale(&d.pow(steps as u32));
    }
    r
}

/// Resultant of two nonzero integer polynomials via the subresultant
/// polynomial remainder sequence. Sign convention: the determinant of the
/// Sylvester matrix (checkable against [`sylvester_resultant`]).
pub fn resultant_z(f: &PolyZ, g: &PolyZ) -> Result<BigInt> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let (mut a, mut b) = (f.clone(), g.clone());
    let mut s = 1i32;
    if a.deg() < b.deg() {
        if a.deg().unwrap() & 1 == 1 && b.deg().unwrap() & 1 == 1 {
            s = -s;
        }
        std::mem::swap(&mut a, &mut b);
    }
    if b.deg() == Some(0) {
        let r = b.lc().pow(a.deg().unwrap() as u32);
        return Ok(if s < 0 { -r } else { r });
    }
    // contents split off first; they re-enter through t below
    let ca = a.content();
    let cb = b.content();
    let t = ca.pow(b.deg().unwrap() as u32) * cb.pow(a.deg().unwrap() as u32);
    let mut a = a.exact_div_scalar(&ca);
    let mut b = b.exact_div_scalar(&cb);
    let mut gcoef = BigInt::one();
    let mut h = BigInt::one();
    loop {
        let (da, db) = (a.deg().unwrap(), b.deg().unwrap());
        let delta = da - db;
        if da & 1 == 1 && db & 1 == 1 {
            s = -s;
        }
        let r = pseudo_rem(&a, &b);
        a = b;
        b = if delta == 0 {
            r.exact_div_scalar(&gcoef)
        } else {
            r.exact_div_scalar(&(&gcoef * h.pow(delta as u32)))
        };
        gcoef = a.lc();
        h = match delta {
            0 => h,
            1 => gcoef.clone(),
            _ => {
                let (q, rem) = gcoef.pow(delta as u32).div_rem(&h.pow(delta as u32 - 1));
                debug_assert!(rem.is_zero());
                q
            }
        };
        if b.is_zero() {
            return Ok(BigInt::zero());
        }
        if b.deg() == Some(0) {
            break;
        }
    }
    let da = a.deg().unwrap() as u32;
    let (hp, rem) = b.lc().pow(da).div_rem(&h.pow(da.saturating_sub(1)));
    debug_assert!(rem.is_zero());
    let out = t * hp;
    Ok(if s < 0 { -out } else { out })
}

/// Resultant as the literal Sylvester-matrix determinant, evaluated by
/// fraction-free (Bareiss) elimination. Small-degree oracle for
/// [`resultant_z`]; guarded to deg f + deg g <= 32.
pub fn sylvester_resultant(f: &PolyZ, g: &PolyZ) -> Result<BigInt> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let m = f.deg().unwrap();
    let n = g.deg().unwrap();
    if m + n > 32 {
        return Err(Error::GuardExceeded {
            what: "sylvester matrix size",
            value: (m + n) as u64,
            max: 32,
        });
    }
    if m + n == 0 {
        return Ok(BigInt::one());
    }
    let size = m + n;
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    for (i, row) in mat.iter_mut().take(n).enumerate() {
        for (j, cf) in f.c.iter().rev().enumerate() {
            row[i + j] = cf.clone();
        }
    }
    for (i, row) in mat.iter_mut().skip(n).enumerate() {
        for (j, cg) in g.c.iter().rev().enumerate() {
            row[i + j] = cg.clone();
        }
    }
    Ok(bareiss_det(mat))
}

fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                let (q, r) = t.div_rem(&prev);
                debug_assert!(r.is_zero(), "Bareiss division must be exact");
                m[i][j] = q;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Discriminant of f: (-1)^(d(d-1)/2) * Res(f, f') / lc(f). A linear (or
/// constant) polynomial has discriminant 1 by the empty-product convention.
pub fn discriminant_z(f: &PolyZ) -> Result<BigInt> {
    let d = f.deg().ok_or(Error::ZeroPolynomial)?;
    if d <= 1 {
        return Ok(BigInt::one());
    }
    let res = resultant_z(f, &f.derivative())?;
    let (q, r) = res.div_rem(&f.lc());
    debug_assert!(r.is_zero(), "lc must divide Res(f, f')");
    Ok(if (d * (d - 1) / 2) % 2 == 1 { -q } else { q })
}
