//! CSV output: `x,f_exact,f_approx,abs_error` for experiment rows and
//! `m,kernel,order,rms` for convergence sweeps. Reals are written in
//! scientific notation with 17 significant digits, lines end in LF.

use std::io::{Read, Write};

use csv::{ReaderBuilder, Terminator, WriterBuilder};

use super::{ExperimentRow, SweepRow};
use crate::error::{QsphError, Result};
use crate::kernels::{DerivativeOrder, KernelFamily};

pub const ROWS_HEADER: [&str; 4] = ["x", "f_exact", "f_approx", "abs_error"];
pub const SWEEP_HEADER: [&str; 4] = ["m", "kernel", "order", "rms"];

fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    WriterBuilder::new().terminator(Terminator::Any(b'\n')).from_writer(w)
}

fn reader<R: Read>(r: R) -> csv::Reader<R> {
    ReaderBuilder::new().has_headers(true).from_reader(r)
}

fn check_header<R: Read>(rdr: &mut csv::Reader<R>, expected: &[&str; 4]) -> Result<()> {
    let header = rdr.headers()?;
    if header.iter().ne(expected.iter().copied()) {
        return Err(QsphError::MalformedCsv(format!(
            "expected header {}, found {}",
            expected.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    Ok(())
}

fn parse_field<T: std::str::FromStr>(record: &csv::StringRecord, i: usize, name: &str) -> Result<T> {
    record
        .get(i)
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| QsphError::MalformedCsv(format!("bad `{name}` field in {record:?}")))
}

pub fn write_rows_csv<W: Write>(w: W, rows: &[ExperimentRow]) -> Result<()> {
    let mut wtr = writer(w);
    wtr.write_record(ROWS_HEADER)?;
    for r in rows {
        wtr.write_record([fmt_real(r.x), fmt_real(r.f_exact), fmt_real(r.f_approx), fmt_real(r.abs_error)])?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_rows_csv<R: Read>(r: R) -> Result<Vec<ExperimentRow>> {
    let mut rdr = reader(r);
    check_header(&mut rdr, &ROWS_HEADER)?;
    rdr.records()
        .map(|rec| {
            let rec = rec?;
            Ok(ExperimentRow {
                x: parse_field(&rec, 0, "x")?,
                f_exact: parse_field(&rec, 1, "f_exact")?,
                f_approx: parse_field(&rec, 2, "f_approx")?,
                abs_error: parse_field(&rec, 3, "abs_error")?,
            })
        })
        .collect()
}

pub fn write_sweep_csv<W: Write>(w: W, rows: &[SweepRow]) -> Result<()> {
    let mut wtr = writer(w);
    wtr.write_record(SWEEP_HEADER)?;
    for r in rows {
        wtr.write_record([
            r.m.to_string(),
            r.kernel.name().to_string(),
            r.order.as_u8().to_string(),
            fmt_real(r.rms),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_sweep_csv<R: Read>(r: R) -> Result<Vec<SweepRow>> {
    let mut rdr = reader(r);
    check_header(&mut rdr, &SWEEP_HEADER)?;
    rdr.records()
        .map(|rec| {
            let rec = rec?;
            let kernel: KernelFamily = parse_field(&rec, 1, "kernel")?;
            let order: u8 = parse_field(&rec, 2, "order")?;
            Ok(SweepRow {
                m: parse_field(&rec, 0, "m")?,
                kernel,
                order: DerivativeOrder::try_from(order)?,
                rms: parse_field(&rec, 3, "rms")?,
            })
        })
        .collect()
}
