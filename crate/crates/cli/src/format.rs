//! Output rendering. Everything here is deterministic in its inputs.

use std::fmt::Write as _;

use hopfcalc::hopf::{BoundKind, HopfResult};
use hopfcalc::oracle::{CheckRow, Verdict};
use hopfcalc::presentation::{Presentation, TABLE_ROWS};

use crate::Format;

pub struct Cell {
    pub row: usize,
    pub prime: u64,
    pub names: Vec<String>,
    pub result: HopfResult,
}

fn marker(kind: BoundKind) -> &'static str {
    match kind {
        BoundKind::Exact => "",
        BoundKind::UpperBound => "≤",
    }
}

fn h2_phrase(r: &HopfResult) -> String {
    match r.h2_kind {
        BoundKind::Exact => format!("h2 = {} (exact)", r.h2_value),
        BoundKind::UpperBound => format!("h2 ≤ {} (upper bound)", r.h2_value),
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn json_lines(values: Vec<serde_json::Value>) -> String {
    let v = if values.len() == 1 {
        values.into_iter().next().unwrap()
    } else {
        serde_json::Value::Array(values)
    };
    let mut s = serde_json::to_string_pretty(&v).expect("plain data");
    s.push('\n');
    s
}

pub fn render_compute(
    name: &str,
    pres: &Presentation,
    results: &[HopfResult],
    generators: bool,
    format: Format,
) -> String {
    let names = pres.generator_names();
    let mut out = String::new();
    match format {
        Format::Text => {
            let _ = writeln!(out, "group: {name}");
            for r in results {
                let _ = writeln!(out, "p = {}: h1 = {}, {}", r.prime, r.h1_dim, h2_phrase(r));
                let _ = writeln!(
                    out,
                    "  dim A {} {}, rank of image = {}, confluent: base {}, cover {}",
                    if r.dim_a_kind == BoundKind::Exact { "=" } else { "≤" },
                    r.dim_a,
                    r.rank_image,
                    yes(r.confluent_base()),
                    yes(r.confluent_cover()),
                );
                if generators {
                    let _ = writeln!(out, "  candidates:");
                    for c in &r.candidates {
                        let _ = writeln!(out, "    {:?} {}", c.coeffs, c.word.display(names));
                    }
                }
            }
        }
        Format::Json => {
            return json_lines(results.iter().map(|r| r.to_json(name, names)).collect());
        }
        Format::Csv => {
            out.push_str("group,prime,h1,h2,h2_kind,dim_A,rank_image\n");
            for r in results {
                let _ = writeln!(
                    out,
                    "{name},{},{},{},{},{},{}",
                    r.prime,
                    r.h1_dim,
                    r.h2_value,
                    r.h2_kind.name(),
                    r.dim_a,
                    r.rank_image
                );
            }
        }
        Format::Markdown => {
            out.push_str("| group | p | h1 | h2 | dim A | rank |\n|---|---|---|---|---|---|\n");
            for r in results {
                let _ = writeln!(
                    out,
                    "| {name} | {} | {} | {}{} | {} | {} |",
                    r.prime,
                    r.h1_dim,
                    marker(r.h2_kind),
                    r.h2_value,
                    r.dim_a,
                    r.rank_image
                );
            }
        }
    }
    out
}

pub fn render_table(primes: &[u64], cells: &[Cell], format: Format) -> String {
    let find = |row: usize, p: u64| {
        cells
            .iter()
            .find(|c| c.row == row && c.prime == p)
            .map(|c| &c.result)
            .expect("every cell computed")
    };
    let h1 = |r: &HopfResult| r.h1_dim.to_string();
    let h2 = |r: &HopfResult| format!("{}{}", marker(r.h2_kind), r.h2_value);
    let mut out = String::new();
    match format {
        Format::Json => {
            let mut values = Vec::new();
            for (i, row) in TABLE_ROWS.iter().enumerate() {
                for &p in primes {
                    let c = cells.iter().find(|c| c.row == i && c.prime == p).unwrap();
                    values.push(c.result.to_json(row.name, &c.names));
                }
            }
            let mut s = serde_json::to_string_pretty(&values).expect("plain data");
            s.push('\n');
            return s;
        }
        Format::Csv => {
            out.push_str("homology,group");
            for p in primes {
                let _ = write!(out, ",p={p}");
            }
            out.push('\n');
            for (title, f) in [("h1", &h1 as &dyn Fn(&HopfResult) -> String), ("h2", &h2)] {
                for (i, row) in TABLE_ROWS.iter().enumerate() {
                    let _ = write!(out, "{title},{}", row.label);
                    for &p in primes {
                        let _ = write!(out, ",{}", f(find(i, p)));
                    }
                    out.push('\n');
                }
            }
        }
        Format::Markdown | Format::Text => {
            for (n, (title, f)) in [("H1", &h1 as &dyn Fn(&HopfResult) -> String), ("H2", &h2)]
                .into_iter()
                .enumerate()
            {
                if n > 0 {
                    out.push('\n');
                }
                let _ = writeln!(out, "### {title}\n");
                out.push_str("| Group |");
                for p in primes {
                    let _ = write!(out, " p={p} |");
                }
                out.push_str("\n|---|");
                for _ in primes {
                    out.push_str("---|");
                }
                out.push('\n');
                for (i, row) in TABLE_ROWS.iter().enumerate() {
                    let _ = write!(out, "| {} |", row.label);
                    for &p in primes {
                        let _ = write!(out, " {} |", f(find(i, p)));
                    }
                    out.push('\n');
                }
            }
        }
    }
    out
}

fn verdict(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "FAIL",
    }
}

pub fn render_check(name: &str, rows: &[CheckRow], format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Text => {
            for r in rows {
                let rel = if r.pipeline_kind == BoundKind::Exact { "=" } else { "≤" };
                let _ = writeln!(
                    out,
                    "{name} p = {}: pipeline h1 = {}, h2 {rel} {}; oracle h1 = {}, h2 = {}; {}",
                    r.prime,
                    r.pipeline_h1,
                    r.pipeline_h2,
                    r.oracle_h1,
                    r.oracle_h2,
                    verdict(r.verdict)
                );
            }
        }
        Format::Json => {
            let values = rows
                .iter()
                .map(|r| {
                    let mut v = serde_json::to_value(r).expect("plain data");
                    v["group"] = serde_json::Value::from(name);
                    v
                })
                .collect();
            return json_lines(values);
        }
        Format::Csv => {
            out.push_str(
                "group,prime,pipeline_h1,pipeline_h2,pipeline_kind,oracle_h1,oracle_h2,verdict\n",
            );
            for r in rows {
                let _ = writeln!(
                    out,
                    "{name},{},{},{},{},{},{},{}",
                    r.prime,
                    r.pipeline_h1,
                    r.pipeline_h2,
                    r.pipeline_kind.name(),
                    r.oracle_h1,
                    r.oracle_h2,
                    verdict(r.verdict)
                );
            }
        }
        Format::Markdown => {
            out.push_str("| group | p | pipeline h1 | pipeline h2 | oracle h1 | oracle h2 | verdict |\n");
            out.push_str("|---|---|---|---|---|---|---|\n");
            for r in rows {
                let _ = writeln!(
                    out,
                    "| {name} | {} | {} | {}{} | {} | {} | {} |",
                    r.prime,
                    r.pipeline_h1,
                    marker(r.pipeline_kind),
                    r.pipeline_h2,
                    r.oracle_h1,
                    r.oracle_h2,
                    verdict(r.verdict)
                );
            }
        }
    }
    out
}
