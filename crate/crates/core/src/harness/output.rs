use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::ResultTable;
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "M,class_n,K_prime,L_prime,sinr_linear,sinr_db,se_bits_per_s_per_hz,ee_normalized";
pub const TRACE_HEADER: &str = "slot,user_id,class_n,persisted";

/// Plain decimal with 12 significant digits, e.g. `0.237847361256`,
/// `-6.23671144974`, `120.000000000`.
pub fn format_sig(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.11e}", x.abs());
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let body = if exp >= 11 {
        format!("{digits}{}", "0".repeat((exp - 11) as usize))
    } else if exp >= 0 {
        let (int, frac) = digits.split_at(exp as usize + 1);
        if frac.is_empty() {
            int.to_string()
        } else {
            format!("{int}.{frac}")
        }
    } else {
        format!("0.{}{digits}", "0".repeat((-exp - 1) as usize))
    };
    if x < 0.0 {
        format!("-{body}")
    } else {
        body
    }
}

pub fn write_csv<W: Write>(table: &ResultTable, mut out: W) -> Result<()> {
    if table.rows.is_empty() {
        return Err(Error::EmptyTable);
    }
    writeln!(out, "{CSV_HEADER}")?;
    for r in &table.rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.num_antennas,
            r.class_n,
            r.k_prime,
            r.l_prime,
            format_sig(r.sinr),
            format_sig(r.sinr_db()),
            format_sig(r.se),
            format_sig(r.ee)
        )?;
    }
    Ok(())
}

pub fn emit_csv(table: &ResultTable, path: &Path) -> Result<()> {
    if table.rows.is_empty() {
        return Err(Error::EmptyTable);
    }
    let mut w = BufWriter::new(File::create(path)?);
    write_csv(table, &mut w)?;
    w.flush()?;
    Ok(())
}

/// One parsed line of a sweep CSV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepCsvRow {
    pub num_antennas: usize,
    pub class_n: u32,
    pub k_prime: usize,
    pub l_prime: usize,
    pub sinr: f64,
    pub sinr_db: f64,
    pub se: f64,
    pub ee: f64,
}

pub fn parse_csv(text: &str) -> Result<Vec<SweepCsvRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        other => return Err(Error::Table(format!("unexpected header {other:?}"))),
    }
    lines
        .enumerate()
        .map(|(i, line)| {
            let f: Vec<&str> = line.split(',').collect();
            if f.len() != 8 {
                return Err(Error::Table(format!("line {}: {} fields", i + 2, f.len())));
            }
            let bad = |what: &str| Error::Table(format!("line {}: bad {what}", i + 2));
            Ok(SweepCsvRow {
                num_antennas: f[0].parse().map_err(|_| bad("M"))?,
                class_n: f[1].parse().map_err(|_| bad("class_n"))?,
                k_prime: f[2].parse().map_err(|_| bad("K_prime"))?,
                l_prime: f[3].parse().map_err(|_| bad("L_prime"))?,
                sinr: f[4].parse().map_err(|_| bad("sinr_linear"))?,
                sinr_db: f[5].parse().map_err(|_| bad("sinr_db"))?,
                se: f[6].parse().map_err(|_| bad("se"))?,
                ee: f[7].parse().map_err(|_| bad("ee"))?,
            })
        })
        .collect()
}

/// One classifier evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceRow {
    pub slot: u64,
    pub user_id: usize,
    pub class_n: u32,
    pub persisted: bool,
}

pub fn write_trace_csv<W: Write>(rows: &[TraceRow], mut out: W) -> std::io::Result<()> {
    writeln!(out, "{TRACE_HEADER}")?;
    for r in rows {
        writeln!(out, "{},{},{},{}", r.slot, r.user_id, r.class_n, r.persisted as u8)?;
    }
    Ok(())
}

pub fn emit_trace_csv(rows: &[TraceRow], path: &Path) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    write_trace_csv(rows, &mut w)?;
    w.flush()?;
    Ok(())
}
