//! Checkpointed record scans. The driver streams one row per prime in
//! ascending order, folds each row into running sums, and saves those sums
//! (with the last finished prime) at chunk boundaries; a resumed run picks
//! up after the checkpointed prime and appends, so the concatenated output
//! is byte-identical to an uninterrupted run.

use std::cell::{Cell, RefCell};
use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use factmod::families::MissedInequality;
use factmod::scan::{
    checkpoint_id, f64_bits_hex, f64_from_bits_hex, map_primes_chunked, Checkpoint, ScanRecord,
    CSV_SCHEMA_LINE, SCAN_CSV_HEADER,
};
use factmod::{Error, Result};

pub const RHO_CSV_HEADER: &str = "p,n,rho";

/// Running state a scan carries across chunks and through checkpoints.
pub trait ScanState {
    type Rec: Send + Serialize;
    fn header(&self) -> &'static str;
    fn row(&self, rec: &Self::Rec) -> String;
    fn absorb(&mut self, rec: &Self::Rec);
    fn restore(&mut self, cp: &Checkpoint) -> Result<()>;
    fn dump(&self, cp: &mut Checkpoint);
}

pub struct ScanOpts<'a> {
    /// Stable identity of the scan configuration; a mismatched checkpoint
    /// is refused rather than silently merged.
    pub tag: String,
    pub output: Option<&'a Path>,
    pub checkpoint: Option<&'a Path>,
    /// Buffer records as JSON values instead of streaming CSV rows.
    pub json: bool,
    /// Stop (checkpoint intact) once this many primes are done.
    pub stop_after: Option<u64>,
}

pub struct ScanOutcome {
    pub id: String,
    /// Primes processed by this run (a resumed run counts only new ones).
    pub processed: u64,
    pub stopped_early: bool,
    pub resumed: bool,
    pub wall_seconds: f64,
    /// Present in JSON mode only.
    pub records: Option<Vec<serde_json::Value>>,
}

pub fn run_scan<S: ScanState>(
    primes: &[u64],
    compute: impl Fn(u64) -> Result<S::Rec> + Sync,
    state: &mut S,
    opts: &ScanOpts,
) -> Result<ScanOutcome> {
    let start = Instant::now();
    let id = checkpoint_id(&opts.tag);
    if opts.json && opts.checkpoint.is_some() {
        return Err(Error::Invalid("checkpointing requires csv record output"));
    }
    let mut resume_after = None;
    if let Some(cp_path) = opts.checkpoint {
        if cp_path.exists() {
            let cp = Checkpoint::load(cp_path)?;
            if cp.extra.get("id").map(String::as_str) != Some(id.as_str()) {
                return Err(Error::Checkpoint(
                    "existing checkpoint belongs to a different scan configuration".into(),
                ));
            }
            state.restore(&cp)?;
            resume_after = Some(cp.last_prime);
        }
    }
    let todo: Vec<u64> = primes
        .iter()
        .copied()
        .filter(|&p| resume_after.map_or(true, |done| p > done))
        .collect();

    let sink: Option<Box<dyn Write>> = if opts.json {
        None
    } else {
        Some(match opts.output {
            Some(path) => {
                if resume_after.is_some() && path.exists() {
                    Box::new(OpenOptions::new().append(true).open(path)?)
                } else {
                    Box::new(File::create(path)?)
                }
            }
            None => Box::new(std::io::stdout()),
        })
    };
    let writer = RefCell::new(sink.map(BufWriter::new));
    if resume_after.is_none() {
        if let Some(w) = writer.borrow_mut().as_mut() {
            writeln!(w, "{CSV_SCHEMA_LINE}")?;
            writeln!(w, "{}", state.header())?;
        }
    }

    let state_cell = RefCell::new(state);
    let json_records = RefCell::new(Vec::new());
    let processed = Cell::new(0u64);
    let chunk = opts
        .stop_after
        .map(|s| (s as usize).clamp(1, 1024))
        .unwrap_or(1024);
    map_primes_chunked(
        &todo,
        chunk,
        |p| compute(p),
        |_, rec| {
            let mut st = state_cell.borrow_mut();
            st.absorb(&rec);
            if opts.json {
                let v = serde_json::to_value(&rec)
                    .map_err(|e| Error::Parse(format!("record serialization: {e}")))?;
                json_records.borrow_mut().push(v);
            } else if let Some(w) = writer.borrow_mut().as_mut() {
                writeln!(w, "{}", st.row(&rec))?;
            }
            processed.set(processed.get() + 1);
            Ok(())
        },
        |last| {
            if let Some(w) = writer.borrow_mut().as_mut() {
                w.flush()?;
            }
            if let Some(cp_path) = opts.checkpoint {
                let mut cp = Checkpoint {
                    last_prime: last,
                    ..Checkpoint::default()
                };
                state_cell.borrow().dump(&mut cp);
                cp.extra.insert("id".into(), id.clone());
                cp.save(cp_path)?;
            }
            Ok(opts.stop_after.map_or(true, |s| processed.get() < s))
        },
    )?;
    if let Some(w) = writer.borrow_mut().as_mut() {
        w.flush()?;
    }
    Ok(ScanOutcome {
        id,
        processed: processed.get(),
        stopped_early: (processed.get() as usize) < todo.len(),
        resumed: resume_after.is_some(),
        wall_seconds: start.elapsed().as_secs_f64(),
        records: opts.json.then(|| json_records.into_inner()),
    })
}

fn parse_u64_list(s: &str) -> Result<Vec<u64>> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            t.parse()
                .map_err(|_| Error::Checkpoint(format!("bad integer list entry {t:?}")))
        })
        .collect()
}

fn render_u64_list(v: &[u64]) -> String {
    v.iter()
        .map(u64::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

const F64_ZERO_BITS: &str = "0000000000000000";

/// Sums for the V/missed/collision row shared by the prime censuses.
#[derive(Default)]
pub struct RecordSums {
    pub count: u64,
    pub sum_missed: u128,
    pub sum_ratio: f64,
    /// Primes whose factorials stayed pairwise distinct.
    pub no_collision: Vec<u64>,
    /// Primes violating the proven full-window floor 2 V^2 >= 3 p.
    pub floor_violations: Vec<u64>,
}

impl ScanState for RecordSums {
    type Rec = ScanRecord;

    fn header(&self) -> &'static str {
        SCAN_CSV_HEADER
    }

    fn row(&self, rec: &ScanRecord) -> String {
        rec.csv_row()
    }

    fn absorb(&mut self, rec: &ScanRecord) {
        self.count += 1;
        self.sum_missed += rec.missed as u128;
        self.sum_ratio += rec.ratio;
        if rec.collision.is_none() {
            self.no_collision.push(rec.p);
        }
        if 2 * (rec.v as u128) * (rec.v as u128) < 3 * rec.p as u128 {
            self.floor_violations.push(rec.p);
        }
    }

    fn restore(&mut self, cp: &Checkpoint) -> Result<()> {
        self.count = cp.count;
        self.sum_missed = cp.sum_missed;
        let bits = cp
            .extra
            .get("sum_ratio_bits")
            .map(String::as_str)
            .unwrap_or(F64_ZERO_BITS);
        self.sum_ratio = f64_from_bits_hex(bits)?;
        self.no_collision =
            parse_u64_list(cp.extra.get("no_collision").map(String::as_str).unwrap_or(""))?;
        self.floor_violations = parse_u64_list(
            cp.extra
                .get("floor_violations")
                .map(String::as_str)
                .unwrap_or(""),
        )?;
        Ok(())
    }

    fn dump(&self, cp: &mut Checkpoint) {
        cp.count = self.count;
        cp.sum_missed = self.sum_missed;
        cp.extra
            .insert("sum_ratio_bits".into(), f64_bits_hex(self.sum_ratio));
        cp.extra
            .insert("no_collision".into(), render_u64_list(&self.no_collision));
        cp.extra.insert(
            "floor_violations".into(),
            render_u64_list(&self.floor_violations),
        );
    }
}

/// Census row plus the optional odd-gap inequality detail.
#[derive(Serialize)]
pub struct MissedRec {
    #[serde(flatten)]
    pub record: ScanRecord,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inequality: Option<MissedInequality>,
}

#[derive(Default)]
pub struct MissedSums {
    pub base: RecordSums,
    /// Primes where missed(p) fell below the odd-gap root-count sum.
    pub ineq_failures: Vec<u64>,
}

impl ScanState for MissedSums {
    type Rec = MissedRec;

    fn header(&self) -> &'static str {
        SCAN_CSV_HEADER
    }

    fn row(&self, rec: &MissedRec) -> String {
        rec.record.csv_row()
    }

    fn absorb(&mut self, rec: &MissedRec) {
        self.base.absorb(&rec.record);
        if let Some(iq) = &rec.inequality {
            if !iq.pass {
                self.ineq_failures.push(iq.p);
            }
        }
    }

    fn restore(&mut self, cp: &Checkpoint) -> Result<()> {
        self.base.restore(cp)?;
        self.ineq_failures = parse_u64_list(
            cp.extra
                .get("ineq_failures")
                .map(String::as_str)
                .unwrap_or(""),
        )?;
        Ok(())
    }

    fn dump(&self, cp: &mut Checkpoint) {
        self.base.dump(cp);
        cp.extra
            .insert("ineq_failures".into(), render_u64_list(&self.ineq_failures));
    }
}

#[derive(Serialize)]
pub struct RhoRec {
    pub p: u64,
    pub n: u64,
    pub rho: u64,
}

#[derive(Default)]
pub struct RhoSums {
    pub count: u64,
    pub sum_rho: u64,
    pub histogram: BTreeMap<u64, u64>,
}

impl ScanState for RhoSums {
    type Rec = RhoRec;

    fn header(&self) -> &'static str {
        RHO_CSV_HEADER
    }

    fn row(&self, rec: &RhoRec) -> String {
        format!("{},{},{}", rec.p, rec.n, rec.rho)
    }

    fn absorb(&mut self, rec: &RhoRec) {
        self.count += 1;
        self.sum_rho += rec.rho;
        *self.histogram.entry(rec.rho).or_default() += 1;
    }

    fn restore(&mut self, cp: &Checkpoint) -> Result<()> {
        self.count = cp.count;
        self.sum_rho = match cp.extra.get("sum_rho") {
            Some(v) => v
                .parse()
                .map_err(|_| Error::Checkpoint(format!("bad sum_rho: {v:?}")))?,
            None => 0,
        };
        self.histogram.clear();
        for (k, v) in &cp.extra {
            if let Some(key) = k.strip_prefix("hist_") {
                let rho: u64 = key
                    .parse()
                    .map_err(|_| Error::Checkpoint(format!("bad histogram key {k:?}")))?;
                let count: u64 = v
                    .parse()
                    .map_err(|_| Error::Checkpoint(format!("bad histogram count {v:?}")))?;
                self.histogram.insert(rho, count);
            }
        }
        Ok(())
    }

    fn dump(&self, cp: &mut Checkpoint) {
        cp.count = self.count;
        cp.sum_missed = 0;
        cp.extra.insert("sum_rho".into(), self.sum_rho.to_string());
        for (rho, count) in &self.histogram {
            cp.extra.insert(format!("hist_{rho}"), count.to_string());
        }
    }
}
