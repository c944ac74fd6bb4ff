//! Range sweeps: cross-verify the cyclic formula against the search oracle,
//! survey the shifted invariant with shift set `{0,1}`, and serialize the
//! rows as CSV or JSON lines. Completed rows are cached per `(k, l, C)` so
//! expensive sweeps are resumable.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::lambda_cyclic;
use crate::group::FiniteAbelianGroup;
use crate::rational::Rational;
use crate::search::{max_shifted_sum_free, max_sum_free, SearchConfig};
use crate::subset::GroupSubset;

/// Header of the CSV report format.
pub const CSV_HEADER: &str = "n,k,l,formula,oracle,shifted,bound_eq,witness";

/// One row of a sweep over `Z_n`.
///
/// `oracle_value` and `shifted_value` are present only when the respective
/// search ran to certified completion; an absent oracle marks an infeasible
/// or budget-exhausted row, never an approximate one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurveyRecord {
    pub n: u64,
    pub k: u32,
    pub l: u32,
    pub formula_value: Rational,
    pub oracle_value: Option<Rational>,
    pub shifted_value: Option<Rational>,
    pub shifted_equals_bound: Option<bool>,
    pub witness: Option<GroupSubset>,
}

/// Wire form shared by the JSON-lines report and the cache files.
#[derive(Serialize, Deserialize)]
struct RawRecord {
    n: u64,
    k: u32,
    l: u32,
    formula_value: String,
    oracle_value: Option<String>,
    shifted_value: Option<String>,
    shifted_equals_bound: Option<bool>,
    witness: Option<String>,
}

impl SurveyRecord {
    fn to_raw(&self) -> RawRecord {
        RawRecord {
            n: self.n,
            k: self.k,
            l: self.l,
            formula_value: self.formula_value.to_string(),
            oracle_value: self.oracle_value.map(|r| r.to_string()),
            shifted_value: self.shifted_value.map(|r| r.to_string()),
            shifted_equals_bound: self.shifted_equals_bound,
            witness: self.witness.as_ref().map(|w| w.to_string()),
        }
    }

    fn from_raw(raw: RawRecord) -> Result<SurveyRecord> {
        let group = FiniteAbelianGroup::cyclic(raw.n)?;
        let witness = raw
            .witness
            .map(|w| GroupSubset::parse(group, &w))
            .transpose()?;
        Ok(SurveyRecord {
            n: raw.n,
            k: raw.k,
            l: raw.l,
            formula_value: raw.formula_value.parse()?,
            oracle_value: raw.oracle_value.map(|s| s.parse()).transpose()?,
            shifted_value: raw.shifted_value.map(|s| s.parse()).transpose()?,
            shifted_equals_bound: raw.shifted_equals_bound,
            witness,
        })
    }

    /// One JSON object per record, field names as in the type.
    pub fn to_json_line(&self) -> String {
        serde_json::to_string(&self.to_raw()).expect("record serializes")
    }

    pub fn from_json_line(line: &str) -> Result<SurveyRecord> {
        SurveyRecord::from_raw(serde_json::from_str(line)?)
    }

    /// One CSV row under [`CSV_HEADER`]; absent fields are empty, and the
    /// witness is quoted because its literal contains commas.
    pub fn to_csv_row(&self) -> String {
        let opt = |r: &Option<Rational>| r.map(|v| v.to_string()).unwrap_or_default();
        let bound = self
            .shifted_equals_bound
            .map(|b| b.to_string())
            .unwrap_or_default();
        let witness = self
            .witness
            .as_ref()
            .map(|w| csv_quote(&w.to_string()))
            .unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{}",
            self.n,
            self.k,
            self.l,
            self.formula_value,
            opt(&self.oracle_value),
            opt(&self.shifted_value),
            bound,
            witness
        )
    }

    pub fn from_csv_row(row: &str) -> Result<SurveyRecord> {
        let fields = csv_split(row);
        if fields.len() != 8 {
            return Err(Error::Parse(format!(
                "expected 8 CSV fields, got {}",
                fields.len()
            )));
        }
        let bad = |what: &str| Error::Parse(format!("invalid CSV field {what}: {row:?}"));
        let opt_rational = |s: &str| -> Result<Option<Rational>> {
            if s.is_empty() {
                Ok(None)
            } else {
                Ok(Some(s.parse()?))
            }
        };
        let raw = RawRecord {
            n: fields[0].parse().map_err(|_| bad("n"))?,
            k: fields[1].parse().map_err(|_| bad("k"))?,
            l: fields[2].parse().map_err(|_| bad("l"))?,
            formula_value: fields[3].clone(),
            oracle_value: None,
            shifted_value: None,
            shifted_equals_bound: match fields[6].as_str() {
                "" => None,
                "true" => Some(true),
                "false" => Some(false),
                _ => return Err(bad("bound_eq")),
            },
            witness: if fields[7].is_empty() {
                None
            } else {
                Some(fields[7].clone())
            },
        };
        let mut rec = SurveyRecord::from_raw(raw)?;
        rec.oracle_value = opt_rational(&fields[4])?;
        rec.shifted_value = opt_rational(&fields[5])?;
        Ok(rec)
    }
}

fn csv_quote(field: &str) -> String {
    if field.contains(',') {
        format!("\"{field}\"")
    } else {
        field.to_string()
    }
}

fn csv_split(row: &str) -> Vec<String> {
    let mut fields = Vec::new();
    let mut cur = String::new();
    let mut quoted = false;
    for ch in row.chars() {
        match ch {
            '"' => quoted = !quoted,
            ',' if !quoted => fields.push(std::mem::take(&mut cur)),
            _ => cur.push(ch),
        }
    }
    fields.push(cur);
    fields
}

// ---------------------------------------------------------------------------
// Resumable cache
// ---------------------------------------------------------------------------

/// Append-only JSONL store keyed by `(k, l, C)`; one file per key, one
/// record per line. Completed `n` values are skipped on rerun.
struct SurveyCache {
    path: PathBuf,
    loaded: BTreeMap<u64, SurveyRecord>,
}

impl SurveyCache {
    fn open(dir: &Path, k: u32, l: u32, shift: &[u64]) -> Result<SurveyCache> {
        let key: Vec<String> = shift.iter().map(|c| c.to_string()).collect();
        let path = dir.join(format!("k{}_l{}_C{}.jsonl", k, l, key.join("-")));
        let mut loaded = BTreeMap::new();
        if path.exists() {
            let reader = BufReader::new(File::open(&path)?);
            for line in reader.lines() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let rec = SurveyRecord::from_json_line(&line)?;
                if rec.k != k || rec.l != l {
                    return Err(Error::Parse(format!(
                        "cache {} holds a record for (k,l)=({},{})",
                        path.display(),
                        rec.k,
                        rec.l
                    )));
                }
                loaded.insert(rec.n, rec);
            }
        }
        Ok(SurveyCache { path, loaded })
    }

    fn get(&self, n: u64) -> Option<&SurveyRecord> {
        self.loaded.get(&n)
    }

    fn append(&mut self, rec: &SurveyRecord) -> Result<()> {
        if let Some(dir) = self.path.parent() {
            std::fs::create_dir_all(dir)?;
        }
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)?;
        writeln!(file, "{}", rec.to_json_line())?;
        self.loaded.insert(rec.n, rec.clone());
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Sweeps
// ---------------------------------------------------------------------------

fn check_range(k: u32, l: u32, n_lo: u64, n_hi: u64) -> Result<()> {
    if k == 0 || k >= l {
        return Err(Error::InvalidPair { k, l });
    }
    if n_lo == 0 {
        return Err(Error::ZeroOrder);
    }
    if n_lo > n_hi {
        return Err(Error::Parse(format!("empty range {n_lo}..={n_hi}")));
    }
    Ok(())
}

/// Computes the closed-form value and the certified search maximum for each
/// `n` in the range and records both. Rows whose search cannot run to
/// completion (order cap, node budget) carry an absent oracle. Errors with
/// the first mismatching `n` if formula and oracle ever disagree.
pub fn verify_range(
    k: u32,
    l: u32,
    n_lo: u64,
    n_hi: u64,
    config: &SearchConfig,
    cache_dir: Option<&Path>,
) -> Result<Vec<SurveyRecord>> {
    check_range(k, l, n_lo, n_hi)?;
    let mut cache = cache_dir
        .map(|dir| SurveyCache::open(dir, k, l, &[0]))
        .transpose()?;
    let mut records = Vec::new();
    for n in n_lo..=n_hi {
        if let Some(rec) = cache.as_ref().and_then(|c| c.get(n)) {
            records.push(rec.clone());
            continue;
        }
        let formula_value = lambda_cyclic(k, l, n)?.value;
        let mut rec = SurveyRecord {
            n,
            k,
            l,
            formula_value,
            oracle_value: None,
            shifted_value: None,
            shifted_equals_bound: None,
            witness: None,
        };
        if n <= config.max_group_order {
            let group = FiniteAbelianGroup::cyclic(n)?;
            let out = max_sum_free(&group, k, l, config)?;
            if out.complete {
                rec.oracle_value = Some(out.density);
                rec.witness = Some(out.witness);
            }
        }
        if let Some(c) = cache.as_mut() {
            c.append(&rec)?;
        }
        records.push(rec);
    }
    for rec in &records {
        if let Some(oracle) = rec.oracle_value {
            if oracle != rec.formula_value {
                return Err(Error::VerifyMismatch {
                    n: rec.n,
                    formula: rec.formula_value,
                    oracle,
                });
            }
        }
    }
    Ok(records)
}

/// Surveys the shifted invariant with shift set `{0,1}` reduced mod `n`
/// (which degenerates to `{0}` for `n = 1`). Each row records the certified
/// shifted maximum and whether it attains the `1/(k+l)` upper bound; the
/// closed-form unshifted value is carried for context.
pub fn survey_shifted(
    k: u32,
    l: u32,
    n_lo: u64,
    n_hi: u64,
    config: &SearchConfig,
    cache_dir: Option<&Path>,
) -> Result<Vec<SurveyRecord>> {
    check_range(k, l, n_lo, n_hi)?;
    let mut cache = cache_dir
        .map(|dir| SurveyCache::open(dir, k, l, &[0, 1]))
        .transpose()?;
    let bound = Rational::one_over((k + l) as u64);
    let mut records = Vec::new();
    for n in n_lo..=n_hi {
        if let Some(rec) = cache.as_ref().and_then(|c| c.get(n)) {
            records.push(rec.clone());
            continue;
        }
        let formula_value = lambda_cyclic(k, l, n)?.value;
        let mut rec = SurveyRecord {
            n,
            k,
            l,
            formula_value,
            oracle_value: None,
            shifted_value: None,
            shifted_equals_bound: None,
            witness: None,
        };
        if n <= config.max_group_order {
            let group = FiniteAbelianGroup::cyclic(n)?;
            let shift = GroupSubset::from_indices(group.clone(), (0..2u64).map(|c| c % n))?;
            let out = max_shifted_sum_free(&group, k, l, &shift, config)?;
            if out.complete {
                rec.shifted_value = Some(out.density);
                rec.shifted_equals_bound = Some(out.density == bound);
                rec.witness = Some(out.witness);
            }
        }
        if let Some(c) = cache.as_mut() {
            c.append(&rec)?;
        }
        records.push(rec);
    }
    Ok(records)
}

/// The minimizer the shifted survey reports: smallest shifted value over the
/// records, earliest `n` on ties. `None` if no row has a shifted value.
pub fn shifted_argmin(records: &[SurveyRecord]) -> Option<(u64, Rational)> {
    let mut best: Option<(u64, Rational)> = None;
    for rec in records {
        if let Some(v) = rec.shifted_value {
            if best.is_none_or(|(_, bv)| v < bv) {
                best = Some((rec.n, v));
            }
        }
    }
    best
}

/// Whether every (1,2) value in the records lies in the sharp window
/// `[2/7, 1/2]`. Rows with `n = 1` are excluded: the trivial group's value
/// is 0 and the window concerns nontrivial groups only.
pub fn check_sumfree_bounds(records: &[SurveyRecord]) -> bool {
    let lo = Rational::new(2, 7);
    let hi = Rational::new(1, 2);
    records.iter().filter(|rec| rec.n > 1).all(|rec| {
        let formula_ok = rec.formula_value >= lo && rec.formula_value <= hi;
        let oracle_ok = rec.oracle_value.is_none_or(|v| v >= lo && v <= hi);
        formula_ok && oracle_ok
    })
}
