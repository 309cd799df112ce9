use std::fs;
use std::io::Write;

use anyhow::{bail, Context};
use serde::Serialize;

use eulerscan::rational::format_rational;
use eulerscan::Rational;

use crate::{Format, OutputArgs};

pub fn emit(out: &OutputArgs, text: &str) -> anyhow::Result<()> {
    match &out.output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn csv(header: &[&str], rows: &[Vec<String>]) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// Space-separated exact coordinates.
pub fn point(p: &[Rational]) -> String {
    p.iter().map(format_rational).collect::<Vec<_>>().join(" ")
}

pub fn approx(r: &Rational) -> String {
    format!("{:.12}", eulerscan::rational::to_f64(r))
}

pub fn no_plot(out: &OutputArgs, what: &str) -> anyhow::Result<()> {
    if out.format == Format::PlotCsv {
        bail!("plot-csv output is not available for {what}");
    }
    Ok(())
}
