use std::fmt::Write as _;
use std::io::{self, Write};

use clap::ValueEnum;
use num_complex::Complex64;
use serde::Serialize;

use psido_core::io::{Pair, SymbolDoc};
use psido_core::verify::VerificationReport;

use crate::{GroupInfo, InputError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

pub fn print_json<T: Serialize + ?Sized>(value: &T) -> Result<(), InputError> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

/// JSON documents are printed as-is; text mode prints them compactly on one line.
pub fn print_doc<T: Serialize>(fmt: Format, value: &T) -> Result<(), InputError> {
    match fmt {
        Format::Json => print_json(value),
        _ => {
            println!("{}", serde_json::to_string(value)?);
            Ok(())
        }
    }
}

/// A table of rows. Text mode aligns columns; CSV writes a header line.
pub fn emit_rows<T: Serialize>(
    fmt: Format,
    rows: &[T],
    headers: &[&str],
    cells: impl Fn(&T) -> Vec<String>,
) -> Result<(), InputError> {
    match fmt {
        Format::Json => print_json(rows),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(io::stdout().lock());
            w.write_record(headers)?;
            for r in rows {
                w.write_record(cells(r))?;
            }
            w.flush()?;
            Ok(())
        }
        Format::Text => {
            let body: Vec<Vec<String>> = rows.iter().map(&cells).collect();
            print!("{}", table(headers, &body));
            Ok(())
        }
    }
}

/// A single record. Text mode prints `key: value` lines, CSV prints one header row and one value row.
pub fn emit_record<T: Serialize>(
    fmt: Format,
    value: &T,
    fields: impl FnOnce() -> Vec<(&'static str, String)>,
) -> Result<(), InputError> {
    match fmt {
        Format::Json => print_json(value),
        Format::Csv => {
            let fields = fields();
            let mut w = csv::Writer::from_writer(io::stdout().lock());
            w.write_record(fields.iter().map(|f| f.0))?;
            w.write_record(fields.iter().map(|f| &f.1))?;
            w.flush()?;
            Ok(())
        }
        Format::Text => {
            let fields = fields();
            let width = fields
                .iter()
                .map(|f| f.0.chars().count())
                .max()
                .unwrap_or(0);
            for (k, v) in fields {
                println!("{k:<width$}  {v}");
            }
            Ok(())
        }
    }
}

fn table(headers: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = headers.iter().map(|h| h.len()).collect();
    for r in rows {
        for (w, c) in widths.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let mut s = String::new();
    let line = |s: &mut String, cells: &mut dyn Iterator<Item = &str>| {
        let parts: Vec<String> = cells
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        let _ = writeln!(s, "{}", parts.join("  ").trim_end());
    };
    line(&mut s, &mut headers.iter().copied());
    for r in rows {
        line(&mut s, &mut r.iter().map(String::as_str));
    }
    s
}

pub fn complex(z: Complex64) -> String {
    if z.im >= 0.0 {
        format!("{} + {}i", z.re, z.im)
    } else {
        format!("{} - {}i", z.re, -z.im)
    }
}

fn short(p: &Pair) -> String {
    let (re, im) = (clean(p[0]), clean(p[1]));
    if im == 0.0 {
        format!("{re:.6}")
    } else if im > 0.0 {
        format!("{re:.6}+{im:.6}i")
    } else {
        format!("{re:.6}-{:.6}i", -im)
    }
}

fn clean(x: f64) -> f64 {
    if x.abs() < 5e-13 {
        0.0
    } else {
        x
    }
}

pub fn pairs_inline(ps: &[Pair]) -> String {
    ps.iter().map(short).collect::<Vec<_>>().join(" ")
}

pub fn group_text(info: &GroupInfo) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "group {} (order {}, Cayley table {}x{}{})",
        info.name,
        info.order,
        info.cayley[0],
        info.cayley[1],
        if info.abelian { ", abelian" } else { "" }
    );
    let _ = writeln!(s, "\nsubgroups");
    let rows: Vec<Vec<String>> = info
        .subgroups
        .iter()
        .map(|h| {
            vec![
                h.name.clone(),
                h.order.to_string(),
                if h.normal { "yes" } else { "no" }.to_string(),
            ]
        })
        .collect();
    s.push_str(&table(&["name", "order", "normal"], &rows));
    let _ = writeln!(
        s,
        "\ncharacter table (columns are element indices 0..{})",
        info.order
    );
    let rows: Vec<Vec<String>> = info
        .irreps
        .iter()
        .map(|i| {
            vec![
                i.label.clone(),
                i.dim.to_string(),
                pairs_inline(&i.character),
            ]
        })
        .collect();
    s.push_str(&table(&["irrep", "dim", "character"], &rows));
    s
}

pub fn verify_text(reports: &[VerificationReport]) -> String {
    let mut s = String::new();
    let (mut total, mut failed) = (0, 0);
    for r in reports {
        let _ = writeln!(s, "{} suite={} seed={}", r.pair, r.suite, r.seed);
        let rows: Vec<Vec<String>> = r
            .checks
            .iter()
            .map(|c| {
                vec![
                    if c.passed { "ok" } else { "FAIL" }.to_string(),
                    c.id.clone(),
                    format!("{:.3e}", c.residual),
                    format!("{:.1e}", c.tolerance),
                    c.note.clone().unwrap_or_default(),
                ]
            })
            .collect();
        s.push_str(&table(
            &["", "check", "residual", "tolerance", "note"],
            &rows,
        ));
        s.push('\n');
        total += r.checks.len();
        failed += r.failed;
    }
    let _ = writeln!(
        s,
        "{} pairs, {} checks, {} failed",
        reports.len(),
        total,
        failed
    );
    s
}

pub fn symbol_text(pair: &str, doc: &SymbolDoc) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "symbol on {pair} (group {})", doc.group);
    let _ = writeln!(s, "solvability residual {:e}", doc.solvability_residual);
    for c in &doc.cosets {
        let _ = writeln!(
            s,
            "\ncoset {} (representative {})",
            c.coset, c.representative
        );
        for b in &c.classes {
            let _ = writeln!(s, "  [{}] dim {}", b.label, b.dim);
            for row in &b.block {
                let _ = writeln!(
                    s,
                    "    {}",
                    row.iter().map(short).collect::<Vec<_>>().join("  ")
                );
            }
        }
    }
    s
}
