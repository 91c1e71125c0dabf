//! Output of density tables and generating polynomials as CSV, JSON, LaTeX
//! or plain text. All output is deterministic: the same table and selection
//! always produce the same bytes.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use super::polys::GeneratingPolynomials;
use super::table::{DensityTable, Quantity};
use crate::error::{Error, Result};
use crate::exactalg::{RationalFunction, ZPoly};
use crate::series::TruncatedSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
    Latex,
    Text,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            "latex" | "tex" => Ok(Format::Latex),
            "text" | "txt" => Ok(Format::Text),
            _ => Err(Error::Parse { input: s.into(), reason: "expected csv, json, latex or text".into() }),
        }
    }
}

/// One entry of a grid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Entry {
    pub quantity: &'static str,
    pub n: usize,
    pub k: usize,
    pub value: RationalFunction,
}

/// Which part of a table to emit; `None` means every available index.
#[derive(Clone, Debug, Default)]
pub struct Selection {
    pub quantities: Vec<Quantity>,
    pub n: Option<usize>,
    pub k: Option<usize>,
}

/// Entries of the selected grids, quantity by quantity, then by `n` and `k`.
/// Moment grids list `d <= min(n, d_max)`; probability grids list `r <= n`.
pub fn select(table: &DensityTable, sel: &Selection) -> Vec<Entry> {
    let mut out = Vec::new();
    for &q in &sel.quantities {
        for (n, row) in table.grid(q).iter().enumerate() {
            if sel.n.is_some_and(|m| m != n) {
                continue;
            }
            for (k, v) in row.iter().enumerate().take(n + 1) {
                if sel.k.is_some_and(|m| m != k) {
                    continue;
                }
                out.push(Entry { quantity: q.name(), n, k, value: v.clone() });
            }
        }
    }
    out
}

/// Display label of a grid entry, such as `rho*(4,0)`.
pub fn entry_label(q: &str, n: usize, k: usize) -> String {
    let sym = match q {
        "alpha_star" => "alpha*",
        "beta_star" => "beta*",
        "rho_star" => "rho*",
        "alpha_tilde" => "alpha~",
        other => other,
    };
    format!("{sym}({n},{k})")
}

pub fn render_entries(entries: &[Entry], format: Format) -> Result<String> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["quantity", "n", "k", "numerator", "denominator"]).map_err(csv_err)?;
            for e in entries {
                w.write_record([
                    e.quantity.to_string(),
                    e.n.to_string(),
                    e.k.to_string(),
                    e.value.numerator().to_string(),
                    e.value.denominator().to_string(),
                ])
                .map_err(csv_err)?;
            }
            into_string(w)
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Row<'a> {
                quantity: &'a str,
                n: usize,
                k: usize,
                value: String,
                #[serde(flatten)]
                parts: &'a RationalFunction,
            }
            let rows: Vec<Row> = entries
                .iter()
                .map(|e| Row { quantity: e.quantity, n: e.n, k: e.k, value: e.value.to_string(), parts: &e.value })
                .collect();
            Ok(serde_json::to_string_pretty(&rows)? + "\n")
        }
        Format::Latex => {
            let mut s = String::from("\\begin{align*}\n");
            for (i, e) in entries.iter().enumerate() {
                let q = Quantity::from_name(e.quantity).map_or(e.quantity, Quantity::latex);
                let sep = if i + 1 < entries.len() { " \\\\" } else { "" };
                let _ = writeln!(s, "{q}({},{}) &= {}{sep}", e.n, e.k, latex_rf(&e.value));
            }
            s.push_str("\\end{align*}\n");
            Ok(s)
        }
        Format::Text => {
            let mut s = String::new();
            for e in entries {
                let _ = writeln!(s, "{} = {}", entry_label(e.quantity, e.n, e.k), e.value);
            }
            Ok(s)
        }
    }
}

/// Which generating polynomial: `A`, `B` or `R`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesKind {
    A,
    B,
    R,
}

impl FromStr for SeriesKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(SeriesKind::A),
            "B" | "b" => Ok(SeriesKind::B),
            "R" | "r" => Ok(SeriesKind::R),
            _ => Err(Error::Parse { input: s.into(), reason: "expected A, B or R".into() }),
        }
    }
}

impl SeriesKind {
    pub fn letter(self) -> &'static str {
        match self {
            SeriesKind::A => "A",
            SeriesKind::B => "B",
            SeriesKind::R => "R",
        }
    }

    pub fn pick(self, g: &GeneratingPolynomials) -> &TruncatedSeries {
        match self {
            SeriesKind::A => &g.a,
            SeriesKind::B => &g.b,
            SeriesKind::R => &g.r,
        }
    }
}

pub fn render_polynomials(polys: &[(SeriesKind, &GeneratingPolynomials)], format: Format) -> Result<String> {
    let exact_coeffs = |s: &TruncatedSeries| -> Vec<RationalFunction> {
        let deg = s.exact_degree().unwrap_or(s.order());
        s.coefficients()[..=deg].to_vec()
    };
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["series", "d", "k", "numerator", "denominator"]).map_err(csv_err)?;
            for (kind, g) in polys {
                for (k, c) in exact_coeffs(kind.pick(g)).iter().enumerate() {
                    w.write_record([
                        kind.letter().to_string(),
                        g.d.to_string(),
                        k.to_string(),
                        c.numerator().to_string(),
                        c.denominator().to_string(),
                    ])
                    .map_err(csv_err)?;
                }
            }
            into_string(w)
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Row {
                series: &'static str,
                d: usize,
                polynomial: String,
                coefficients: Vec<RationalFunction>,
            }
            let rows: Vec<Row> = polys
                .iter()
                .map(|(kind, g)| Row {
                    series: kind.letter(),
                    d: g.d,
                    polynomial: kind.pick(g).to_string(),
                    coefficients: exact_coeffs(kind.pick(g)),
                })
                .collect();
            Ok(serde_json::to_string_pretty(&rows)? + "\n")
        }
        Format::Latex => {
            let mut s = String::from("\\begin{align*}\n");
            for (i, (kind, g)) in polys.iter().enumerate() {
                let sep = if i + 1 < polys.len() { " \\\\" } else { "" };
                let _ = writeln!(s, "{{\\mathcal {}}}_{{{}}}(t) &= {}{sep}", kind.letter(), g.d, latex_series(kind.pick(g)));
            }
            s.push_str("\\end{align*}\n");
            Ok(s)
        }
        Format::Text => {
            let mut s = String::new();
            for (kind, g) in polys {
                let _ = writeln!(s, "{}_{}(t) = {}", kind.letter(), g.d, kind.pick(g));
            }
            Ok(s)
        }
    }
}

/// The whole table as pretty JSON, grids as `{numerator, denominator}` objects.
pub fn table_to_json(table: &DensityTable) -> Result<String> {
    Ok(serde_json::to_string_pretty(table)? + "\n")
}

fn csv_err(e: csv::Error) -> Error {
    Error::Internal(format!("csv: {e}"))
}

fn into_string(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::Internal(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
}

/// `p^12` becomes `p^{12}`.
pub fn latex_poly(f: &ZPoly) -> String {
    let s = f.to_string();
    let mut out = String::with_capacity(s.len() + 8);
    let mut chars = s.chars().peekable();
    while let Some(c) = chars.next() {
        out.push(c);
        if c == '^' {
            out.push('{');
            while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                out.push(*d);
                chars.next();
            }
            out.push('}');
        }
    }
    out
}

pub fn latex_rf(v: &RationalFunction) -> String {
    if v.is_polynomial() {
        latex_poly(v.numerator())
    } else {
        format!("\\frac{{{}}}{{{}}}", latex_poly(v.numerator()), latex_poly(v.denominator()))
    }
}

fn latex_series(s: &TruncatedSeries) -> String {
    let deg = s.exact_degree().unwrap_or(s.order());
    let mut out = String::new();
    for (n, c) in s.coefficients()[..=deg].iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let neg = c.numerator().leading_sign() == std::cmp::Ordering::Less;
        let mag = if neg { -c } else { c.clone() };
        let single_term = mag.is_polynomial() && mag.numerator().coeffs().iter().filter(|x| !num_traits::Zero::is_zero(*x)).count() == 1;
        let grouped = single_term || n == 0 || !mag.is_polynomial();
        let body = if grouped { latex_rf(&mag) } else { format!("\\left({}\\right)", latex_rf(&mag)) };
        let tpow = match n {
            0 => String::new(),
            1 => "t".into(),
            _ => format!("t^{{{n}}}"),
        };
        let term = if n > 0 && mag.is_one() { tpow } else { format!("{body}{tpow}") };
        match (out.is_empty(), neg) {
            (true, true) => out.push('-'),
            (true, false) => {}
            (false, true) => out.push_str(" - "),
            (false, false) => out.push_str(" + "),
        }
        out.push_str(&term);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
