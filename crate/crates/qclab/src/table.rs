//! Row computation over prime ranges and serialization.

use std::io::Write;

use qclab_core::arith::is_prime;
use qclab_core::quadratic_core::QuadraticData;
use qclab_core::quaternion_formulas::{format_q, identity_suite, SurfaceCountRow};
use qclab_core::{Error, Q};
use rayon::prelude::*;
use serde_json::{Map, Value};

use crate::error::CliError;

pub const COLUMNS: &[&str] = &[
    "H", "T", "tO1", "tO8", "tO16", "hO1", "hO4", "hO8", "hO16", "hF", "hA", "varpi", "zeta", "hO4_informational",
    "passed",
];

pub fn parse_columns(spec: &str) -> Result<Vec<String>, CliError> {
    let mut out = Vec::new();
    for name in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if name == "p" {
            continue;
        }
        if !COLUMNS.contains(&name) {
            return Err(CliError::Input(format!("unknown column {name:?}; known columns: p,{}", COLUMNS.join(","))));
        }
        out.push(name.to_string());
    }
    Ok(out)
}

fn q(v: &Q) -> Option<String> {
    Some(format_q(v))
}

pub fn cell(row: &SurfaceCountRow, column: &str) -> Option<String> {
    match column {
        "H" => q(&row.h),
        "T" => q(&row.t),
        "tO1" => q(&row.t_o1),
        "tO8" => row.t_o8.as_ref().map(format_q),
        "tO16" => row.t_o16.as_ref().map(format_q),
        "hO1" => q(&row.h_o1),
        "hO4" => q(&row.h_o4),
        "hO8" => row.h_o8.as_ref().map(format_q),
        "hO16" => row.h_o16.as_ref().map(format_q),
        "hF" => Some(row.h_f.to_string()),
        "hA" => row.h_a.map(|v| v.to_string()),
        "varpi" => row.varpi.map(|v| v.to_string()),
        "zeta" => q(&row.zeta),
        "hO4_informational" => Some(row.h_o4_informational.to_string()),
        "passed" => Some(row.passed().to_string()),
        _ => None,
    }
}

pub fn primes(from: u64, to: u64) -> Vec<u64> {
    (from..=to).filter(|&p| is_prime(p)).collect()
}

/// Evaluates every prime, splitting the list into one contiguous block per worker.
pub fn compute_rows<S>(primes: &[u64], jobs: usize, data: &S) -> Result<Vec<SurfaceCountRow>, CliError>
where
    S: QuadraticData + Sync,
{
    if primes.is_empty() {
        return Ok(Vec::new());
    }
    let block = primes.len().div_ceil(jobs.max(1));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| CliError::Input(format!("cannot start {jobs} workers: {e}")))?;
    let blocks: Vec<Result<Vec<SurfaceCountRow>, (u64, Error)>> = pool.install(|| {
        primes
            .par_chunks(block)
            .map(|chunk| chunk.iter().map(|&p| identity_suite(p, data).map_err(|e| (p, e))).collect())
            .collect()
    });
    let mut rows = Vec::with_capacity(primes.len());
    for b in blocks {
        rows.extend(b.map_err(|(p, e)| CliError::Math(p, e))?);
    }
    Ok(rows)
}

pub fn write_csv<W: Write>(out: W, rows: &[SurfaceCountRow], columns: &[String]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["p"];
    header.extend(columns.iter().map(String::as_str));
    w.write_record(&header).map_err(CliError::from_csv)?;
    for row in rows {
        let mut record = vec![row.p.to_string()];
        record.extend(columns.iter().map(|c| cell(row, c).unwrap_or_default()));
        w.write_record(&record).map_err(CliError::from_csv)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(mut out: W, rows: &[SurfaceCountRow], columns: &[String]) -> Result<(), CliError> {
    let array: Vec<Value> = rows
        .iter()
        .map(|row| {
            let mut obj = Map::new();
            obj.insert("p".into(), Value::from(row.p));
            for c in columns {
                obj.insert(c.clone(), cell(row, c).map_or(Value::Null, Value::String));
            }
            Value::Object(obj)
        })
        .collect();
    serde_json::to_writer_pretty(&mut out, &array).map_err(std::io::Error::from)?;
    writeln!(out)?;
    Ok(())
}
