//! Append-only text memo for class numbers and fundamental units.
//!
//! ```text
//! # qclab-cache v1 reduced-forms+continued-fractions
//! -148,2
//! 37,12,2,2,-1
//! ```
//! Two fields are `fundamental discriminant,class number`; five fields are
//! `radicand,x,y,denominator,norm` for the unit `(x + y sqrt(d))/denominator`.

use std::collections::HashMap;
use std::fs::{self, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::{Mutex, RwLock};

use log::warn;
use num_bigint::BigInt;
use qclab_core::arith::field_disc;
use qclab_core::quadratic_core::{Direct, FundamentalUnit, QuadraticData};
use qclab_core::{Result, Q};

pub const HEADER: &str = "# qclab-cache v1 reduced-forms+continued-fractions";

#[derive(Debug, Clone, PartialEq, Eq)]
enum Entry {
    ClassNumber(i64, u64),
    Unit(i64, FundamentalUnit),
}

impl Entry {
    fn parse(line: &str) -> Option<Entry> {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        match fields.as_slice() {
            [disc, h] => Some(Entry::ClassNumber(disc.parse().ok()?, h.parse().ok().filter(|&h| h > 0)?)),
            [d, x, y, denom, norm] => {
                let unit = FundamentalUnit {
                    x: x.parse::<BigInt>().ok()?,
                    y: y.parse::<BigInt>().ok()?,
                    denom: denom.parse().ok().filter(|&k| k == 1 || k == 2)?,
                    norm: norm.parse().ok().filter(|&n: &i8| n.abs() == 1)?,
                };
                Some(Entry::Unit(d.parse().ok()?, unit))
            }
            _ => None,
        }
    }

    fn line(&self) -> String {
        match self {
            Entry::ClassNumber(disc, h) => format!("{disc},{h}"),
            Entry::Unit(d, u) => format!("{d},{},{},{},{}", u.x, u.y, u.denom, u.norm),
        }
    }
}

/// What a cache file held when it was loaded.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CacheStats {
    pub header_ok: bool,
    pub class_numbers: usize,
    pub units: usize,
    pub corrupt: usize,
}

/// A [`QuadraticData`] source that consults the file cache before computing.
/// New entries are queued and written by [`CachedSource::flush`] from one thread.
#[derive(Debug)]
pub struct CachedSource {
    path: PathBuf,
    stats: CacheStats,
    class_numbers: RwLock<HashMap<i64, u64>>,
    units: RwLock<HashMap<i64, FundamentalUnit>>,
    pending: Mutex<Vec<Entry>>,
}

impl CachedSource {
    pub fn open(path: &Path) -> io::Result<Self> {
        let mut stats = CacheStats::default();
        let mut class_numbers = HashMap::new();
        let mut units = HashMap::new();
        match fs::read_to_string(path) {
            Ok(text) => {
                let mut lines = text.lines();
                stats.header_ok = lines.next().map(str::trim) == Some(HEADER);
                if !stats.header_ok {
                    warn!("{}: unrecognized cache header, ignoring its contents", path.display());
                } else {
                    for (n, line) in lines.enumerate() {
                        if line.trim().is_empty() {
                            continue;
                        }
                        match Entry::parse(line) {
                            Some(Entry::ClassNumber(disc, h)) => {
                                class_numbers.insert(disc, h);
                            }
                            Some(Entry::Unit(d, u)) => {
                                units.insert(d, u);
                            }
                            None => {
                                stats.corrupt += 1;
                                warn!("{}:{}: ignoring corrupt cache line {:?}", path.display(), n + 2, line);
                            }
                        }
                    }
                }
            }
            Err(e) if e.kind() == io::ErrorKind::NotFound => stats.header_ok = true,
            Err(e) => return Err(e),
        }
        stats.class_numbers = class_numbers.len();
        stats.units = units.len();
        Ok(CachedSource {
            path: path.to_path_buf(),
            stats,
            class_numbers: RwLock::new(class_numbers),
            units: RwLock::new(units),
            pending: Mutex::new(Vec::new()),
        })
    }

    pub fn stats(&self) -> &CacheStats {
        &self.stats
    }

    fn record(&self, entry: Entry) {
        self.pending.lock().expect("cache queue poisoned").push(entry);
    }

    /// Appends queued entries, rewriting the file when its header was not recognized.
    pub fn flush(&self) -> io::Result<usize> {
        let mut pending = std::mem::take(&mut *self.pending.lock().expect("cache queue poisoned"));
        if pending.is_empty() {
            return Ok(0);
        }
        pending.sort_by_key(Entry::line);
        pending.dedup();
        let fresh = !self.path.exists() || !self.stats.header_ok;
        let mut file = if fresh {
            let mut f = fs::File::create(&self.path)?;
            writeln!(f, "{HEADER}")?;
            f
        } else {
            OpenOptions::new().append(true).open(&self.path)?
        };
        let mut out = String::new();
        for e in &pending {
            out.push_str(&e.line());
            out.push('\n');
        }
        file.write_all(out.as_bytes())?;
        Ok(pending.len())
    }
}

impl QuadraticData for CachedSource {
    fn class_number(&self, m: i64) -> Result<u64> {
        let disc = field_disc(m);
        if let Some(&h) = self.class_numbers.read().expect("cache poisoned").get(&disc) {
            return Ok(h);
        }
        let h = Direct.class_number(m)?;
        if self.class_numbers.write().expect("cache poisoned").insert(disc, h).is_none() {
            self.record(Entry::ClassNumber(disc, h));
        }
        Ok(h)
    }

    fn fundamental_unit(&self, m: i64) -> Result<FundamentalUnit> {
        if let Some(u) = self.units.read().expect("cache poisoned").get(&m) {
            return Ok(u.clone());
        }
        let u = Direct.fundamental_unit(m)?;
        if self.units.write().expect("cache poisoned").insert(m, u.clone()).is_none() {
            self.record(Entry::Unit(m, u.clone()));
        }
        Ok(u)
    }

    fn zeta_minus1(&self, m: i64) -> Result<Q> {
        Direct.zeta_minus1(m)
    }
}

pub fn clear(path: &Path) -> io::Result<bool> {
    match fs::remove_file(path) {
        Ok(()) => Ok(true),
        Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(false),
        Err(e) => Err(e),
    }
}
