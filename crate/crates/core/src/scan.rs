//! Shared plumbing for multi-prime scans: cost estimates against the work
//! budget, per-prime result records with their CSV rendering, line-oriented
//! checkpoints, and a deterministic parallel map (ordered merge, so output
//! does not depend on thread scheduling).

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Refuse scans estimated above this many modular multiplications unless
/// explicitly forced.
pub const DEFAULT_BUDGET: u128 = 100_000_000_000;

pub fn check_budget(estimated: u128, force: bool) -> Result<()> {
    if !force && estimated > DEFAULT_BUDGET {
        return Err(Error::BudgetExceeded {
            estimated,
            limit: DEFAULT_BUDGET,
        });
    }
    Ok(())
}

/// Analytic estimate of sum of p over primes p <= x (x^2 / (2 ln x)); used
/// for budgeting full factorial scans without sieving first.
pub fn est_sigma_p(x: u64) -> u128 {
    if x < 3 {
        return x as u128;
    }
    let xf = x as f64;
    (xf * xf / (2.0 * xf.ln())) as u128
}

pub fn est_sigma_p_range(lo: u64, hi: u64) -> u128 {
    est_sigma_p(hi).saturating_sub(est_sigma_p(lo.saturating_sub(1)))
}

/// Collision scans stop after ~sqrt(p) stream steps on average; estimate
/// sum of 3 sqrt(p) = 2 x^(3/2) / ln x.
pub fn est_collision_scan(x: u64) -> u128 {
    if x < 3 {
        return x as u128;
    }
    let xf = x as f64;
    (2.0 * xf.powf(1.5) / xf.ln()) as u128
}

/// Root-count scans cost O(deg^2 log p) polynomial coefficient operations
/// per prime.
pub fn est_root_scan(deg: u64, x: u64) -> u128 {
    if x < 3 {
        return 1;
    }
    let xf = x as f64;
    let per_prime = 2.0 * ((deg + 1) * (deg + 1)) as f64 * xf.log2();
    ((xf / xf.ln()) * per_prime) as u128
}

/// One result row of a per-prime scan. CSV columns:
/// `p,V,missed,ratio,collision_m,collision_n` (collision fields empty when
/// no collision was found).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRecord {
    pub p: u64,
    pub v: u64,
    pub missed: u64,
    pub ratio: f64,
    pub collision: Option<(u64, u64)>,
}

pub const CSV_SCHEMA_LINE: &str = "# schema=1";
pub const SCAN_CSV_HEADER: &str = "p,V,missed,ratio,collision_m,collision_n";

impl ScanRecord {
    pub fn csv_row(&self) -> String {
        match self.collision {
            Some((m, n)) => format!(
                "{},{},{},{:.9},{},{}",
                self.p, self.v, self.missed, self.ratio, m, n
            ),
            None => format!("{},{},{},{:.9},,", self.p, self.v, self.missed, self.ratio),
        }
    }
}

/// Scan checkpoint: resumable running sums keyed by the last fully
/// processed prime. Serialized as `key=value` lines; the three required
/// keys come first, any extra keys follow in sorted order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Checkpoint {
    pub last_prime: u64,
    pub sum_missed: u128,
    pub count: u64,
    pub extra: BTreeMap<String, String>,
}

impl Checkpoint {
    pub fn load(path: &Path) -> Result<Checkpoint> {
        let text = std::fs::read_to_string(path)?;
        let mut cp = Checkpoint::default();
        let mut seen_last = false;
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Checkpoint(format!("line without '=': {line:?}")))?;
            let bad = |_| Error::Checkpoint(format!("bad value for {k}: {v:?}"));
            match k {
                "last_prime" => {
                    cp.last_prime = v.parse().map_err(bad)?;
                    seen_last = true;
                }
                "sum_missed" => cp.sum_missed = v.parse().map_err(bad)?,
                "count" => cp.count = v.parse().map_err(bad)?,
                _ => {
                    cp.extra.insert(k.to_string(), v.to_string());
                }
            }
        }
        if !seen_last {
            return Err(Error::Checkpoint("missing last_prime".into()));
        }
        Ok(cp)
    }

    /// Writes through a temp file and renames, so an interrupted save never
    /// leaves a torn checkpoint behind.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut text = format!(
            "last_prime={}\nsum_missed={}\ncount={}\n",
            self.last_prime, self.sum_missed, self.count
        );
        for (k, v) in &self.extra {
            text.push_str(&format!("{k}={v}\n"));
        }
        let tmp = path.with_extension("tmp");
        {
            let mut f = std::fs::File::create(&tmp)?;
            f.write_all(text.as_bytes())?;
            f.sync_all()?;
        }
        std::fs::rename(&tmp, path)?;
        Ok(())
    }
}

/// Stable identifier for a scan configuration, reported next to checkpoint
/// paths so resumed runs can be matched to their originals.
pub fn checkpoint_id(tag: &str) -> String {
    let digest = Sha256::digest(tag.as_bytes());
    let mut s = String::new();
    for b in &digest[..8] {
        s.push_str(&format!("{b:02x}"));
    }
    s
}

/// Round-trip helpers for storing f64 running sums in checkpoints without
/// losing bits.
pub fn f64_bits_hex(x: f64) -> String {
    format!("{:016x}", x.to_bits())
}

pub fn f64_from_bits_hex(s: &str) -> Result<f64> {
    let bits = u64::from_str_radix(s, 16)
        .map_err(|_| Error::Checkpoint(format!("bad f64 bits: {s:?}")))?;
    Ok(f64::from_bits(bits))
}

/// Applies `f` to each prime, parallel within fixed-size chunks, then feeds
/// results to `sink` strictly in ascending-prime order. `after_chunk` runs
/// once per chunk with the last prime processed; returning false stops the
/// scan early (used for checkpoint-interruption tests).
pub fn map_primes_chunked<T, F, S, A>(
    primes: &[u64],
    chunk: usize,
    f: F,
    mut sink: S,
    mut after_chunk: A,
) -> Result<()>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync,
    S: FnMut(u64, T) -> Result<()>,
    A: FnMut(u64) -> Result<bool>,
{
    for ch in primes.chunks(chunk.max(1)) {
        let results: Vec<(u64, Result<T>)> = ch.par_iter().map(|&p| (p, f(p))).collect();
        for (p, r) in results {
            sink(p, r?)?;
        }
        if !after_chunk(*ch.last().unwrap())? {
            return Ok(());
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_row_shapes() {
        let r = ScanRecord {
            p: 7,
            v: 4,
            missed: 3,
            ratio: 4.0 / 7.0,
            collision: Some((3, 6)),
        };
        assert_eq!(r.csv_row(), "7,4,3,0.571428571,3,6");
        let r2 = ScanRecord {
            collision: None,
            ..r
        };
        assert_eq!(r2.csv_row(), "7,4,3,0.571428571,,");
    }

    #[test]
    fn checkpoint_round_trip() {
        let dir = std::env::temp_dir().join("factmod-ckpt-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("a.ckpt");
        let mut cp = Checkpoint {
            last_prime: 101,
            sum_missed: 1234567890123456789,
            count: 25,
            extra: BTreeMap::new(),
        };
        cp.extra
            .insert("sum_ratio_bits".into(), f64_bits_hex(0.632));
        cp.save(&path).unwrap();
        let back = Checkpoint::load(&path).unwrap();
        assert_eq!(back, cp);
        assert_eq!(
            f64_from_bits_hex(&back.extra["sum_ratio_bits"]).unwrap(),
            0.632
        );
        std::fs::remove_file(&path).unwrap();
    }

    #[test]
    fn checkpoint_rejects_garbage() {
        let dir = std::env::temp_dir().join("factmod-ckpt-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("bad.ckpt");
        std::fs::write(&path, "not a checkpoint\n").unwrap();
        assert!(matches!(
            Checkpoint::load(&path),
            Err(Error::Checkpoint(_))
        ));
        std::fs::write(&path, "count=3\n").unwrap();
        assert!(Checkpoint::load(&path).is_err()); // last_prime missing
        std::fs::remove_file(&path).unwrap();
    }

    #[test]
    fn budget_refusal() {
        assert!(check_budget(DEFAULT_BUDGET, false).is_ok());
        assert!(matches!(
            check_budget(DEFAULT_BUDGET + 1, false),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(check_budget(u128::MAX, true).is_ok());
    }

    #[test]
    fn estimates_are_sane() {
        // sum of primes to 1e5 is 454396537; the analytic estimate should be
        // within a factor of two
        let est = est_sigma_p(100_000);
        assert!(est > 200_000_000 && est < 900_000_000, "est = {est}");
        assert!(est_sigma_p_range(10_000, 100_000) < est);
        assert!(est_collision_scan(1_000_000) < DEFAULT_BUDGET);
    }

    #[test]
    fn ordered_parallel_map() {
        let primes: Vec<u64> = crate::modarith::sieve_primes(500);
        let mut seen = Vec::new();
        map_primes_chunked(
            &primes,
            7,
            |p| Ok(p * 2),
            |p, d| {
                seen.push((p, d));
                Ok(())
            },
            |_| Ok(true),
        )
        .unwrap();
        let expect: Vec<(u64, u64)> = primes.iter().map(|&p| (p, p * 2)).collect();
        assert_eq!(seen, expect);

        // early stop after first chunk
        let mut count = 0;
        map_primes_chunked(
            &primes,
            10,
            |p| Ok(p),
            |_, _| {
                count += 1;
                Ok(())
            },
            |_| Ok(false),
        )
        .unwrap();
        assert_eq!(count, 10);
    }

    #[test]
    fn checkpoint_id_is_stable() {
        let a = checkpoint_id("guy-scan lo=10000 hi=100000");
        assert_eq!(a, checkpoint_id("guy-scan lo=10000 hi=100000"));
        assert_ne!(a, checkpoint_id("guy-scan lo=10000 hi=100001"));
        assert_eq!(a.len(), 16);
    }
}
