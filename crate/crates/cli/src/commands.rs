use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use padic_density::densities::{
    assemble_generating_polynomials, compute_genfun_route, entry_label, full_table, render_entries,
    render_polynomials, select, verify_all_with, Format, Quantity, Selection, SplittingCache,
};
use padic_density::oracle::{
    exhaustive_small, expected_distribution, is_small_prime, monte_carlo, MonteCarloConfig, MonteCarloReport,
};
use padic_density::Limit;
use serde::Serialize;

use crate::{ExhaustArgs, LimitsArgs, SampleArgs, TableArgs, VerifyArgs, OUTPUT_DIR_ENV};

/// Why a command did not succeed, and with which exit status.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags or values (exit 2).
    Usage(String),
    /// The output was produced but a check failed (exit 1).
    Verification(String),
    /// An I/O or engine error (exit 2).
    Runtime(String),
}

impl Failure {
    pub fn report(&self) -> ExitCode {
        match self {
            Failure::Usage(m) => {
                eprintln!("error: {m}");
                ExitCode::from(2)
            }
            Failure::Verification(m) => {
                eprintln!("verification failed: {m}");
                ExitCode::from(1)
            }
            Failure::Runtime(m) => {
                eprintln!("error: {m}");
                ExitCode::from(2)
            }
        }
    }
}

impl From<padic_density::Error> for Failure {
    fn from(e: padic_density::Error) -> Self {
        use padic_density::Error as E;
        match e {
            E::InvalidArgument(_) | E::Parse { .. } | E::BudgetExceeded { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

/// Rendered output plus, if a check failed, a one-line reason.
pub struct Output {
    pub body: String,
    pub failure: Option<String>,
}

impl Output {
    fn ok(body: String) -> Self {
        Output { body, failure: None }
    }
}

type CmdResult = Result<Output, Failure>;

/// Writes the body to `path` (or stdout), then turns a recorded check
/// failure into an error so the exit status reflects it.
pub fn emit(out: &Output, path: Option<&Path>) -> Result<(), Failure> {
    match path {
        Some(p) => {
            let p = resolve_output(p);
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).map_err(|e| Failure::Runtime(format!("{}: {e}", dir.display())))?;
            }
            std::fs::write(&p, &out.body).map_err(|e| Failure::Runtime(format!("{}: {e}", p.display())))?;
        }
        None => print!("{}", out.body),
    }
    match &out.failure {
        Some(m) => Err(Failure::Verification(m.clone())),
        None => Ok(()),
    }
}

fn resolve_output(p: &Path) -> PathBuf {
    match std::env::var_os(OUTPUT_DIR_ENV) {
        Some(dir) if p.is_relative() && !dir.is_empty() => PathBuf::from(dir).join(p),
        _ => p.to_path_buf(),
    }
}

fn parse_quantities(names: &[String]) -> Result<Vec<Quantity>, Failure> {
    let mut out = Vec::new();
    for name in names {
        if name == "all" {
            out.extend(Quantity::ALL);
            continue;
        }
        let q = Quantity::from_name(name).ok_or_else(|| {
            Failure::Usage(format!(
                "unknown grid {name:?}; expected one of {} or all",
                Quantity::ALL.map(Quantity::name).join(", ")
            ))
        })?;
        out.push(q);
    }
    Ok(out)
}

fn unsupported(cmd: &str, format: Format) -> Failure {
    Failure::Usage(format!("{cmd} does not support {format:?} output").to_lowercase())
}

pub fn table(a: &TableArgs, format: Option<Format>) -> CmdResult {
    let (n_max, d_max) = a.bounds.resolve()?;
    let format = format.unwrap_or(Format::Text);
    if !a.genfun.is_empty() {
        if !a.grid.is_empty() || a.n.is_some() {
            return Err(Failure::Usage("--genfun cannot be combined with --grid or --n".into()));
        }
        let ds: Vec<usize> = match a.d {
            Some(d) => vec![d],
            None => (1..=d_max).collect(),
        };
        let top = ds.iter().copied().max().unwrap_or(0);
        let t = compute_genfun_route(2 * top, top)?;
        let polys = ds
            .iter()
            .map(|&d| assemble_generating_polynomials(&t, d))
            .collect::<Result<Vec<_>, _>>()?;
        let list: Vec<_> = polys.iter().flat_map(|g| a.genfun.iter().map(move |&k| (k, g))).collect();
        return Ok(Output::ok(render_polynomials(&list, format)?));
    }

    let quantities = if a.grid.is_empty() { Quantity::ALL.to_vec() } else { parse_quantities(&a.grid)? };
    // Star rows exist up to min(n_max, d_max), so a requested row widens both.
    let mut n_eff = n_max;
    let mut d_eff = d_max;
    for idx in [a.n, a.d].into_iter().flatten() {
        n_eff = n_eff.max(idx);
        d_eff = d_eff.max(idx);
    }
    let t = full_table(n_eff, d_eff)?;
    let entries = select(&t, &Selection { quantities, n: a.n, k: a.d });
    if entries.is_empty() {
        return Err(Failure::Usage("selection is empty (is --d larger than --n?)".into()));
    }
    Ok(Output::ok(render_entries(&entries, format)?))
}

pub fn verify(a: &VerifyArgs, format: Option<Format>) -> CmdResult {
    let (n_max, d_max) = a.bounds.resolve()?;
    let cache = match a.corrupt_irreducible {
        Some(d) if d == 0 || d > n_max => {
            return Err(Failure::Usage(format!("cannot corrupt N_{d} with n_max = {n_max}")));
        }
        Some(d) => SplittingCache::corrupted(n_max, d, 1),
        None => SplittingCache::new(n_max),
    };
    let report = verify_all_with(&cache, n_max, d_max);
    let body = match format.unwrap_or(Format::Text) {
        Format::Text => format!("{report}\n"),
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                n_max: usize,
                d_max: usize,
                all_pass: bool,
                checks: &'a [padic_density::densities::CheckResult],
            }
            let doc = Doc { n_max, d_max, all_pass: report.all_pass(), checks: &report.checks };
            serde_json::to_string_pretty(&doc)? + "\n"
        }
        Format::Csv => csv_table(
            &["group", "name", "passed", "detail"],
            report.checks.iter().map(|c| {
                vec![c.group.clone(), c.name.clone(), c.passed.to_string(), c.detail.clone().unwrap_or_default()]
            }),
        )?,
        f @ Format::Latex => return Err(unsupported("verify", f)),
    };
    let failed: Vec<&str> = report.failures().map(|c| c.name.as_str()).collect();
    let failure = (!failed.is_empty())
        .then(|| format!("{} of {} checks failed: {}", failed.len(), report.len(), failed.join("; ")));
    Ok(Output { body, failure })
}

fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<String, Failure> {
    let err = |e: csv::Error| Failure::Runtime(format!("csv: {e}"));
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(err)?;
    for row in rows {
        w.write_record(&row).map_err(err)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Runtime(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Failure::Runtime(e.to_string()))
}

pub fn sample(a: &SampleArgs, format: Option<Format>) -> CmdResult {
    if a.trials == 0 {
        return Err(Failure::Usage("--trials must be at least 1".into()));
    }
    if let Some(p) = a.primes.iter().find(|&&p| !is_small_prime(p)) {
        return Err(Failure::Usage(format!("{p} is not a prime")));
    }
    if a.n.contains(&0) {
        return Err(Failure::Usage("--n must be at least 1".into()));
    }
    let mut reports = Vec::new();
    for &n in &a.n {
        for &p in &a.primes {
            for &mode in &a.mode {
                let mut cfg = MonteCarloConfig::new(n, p, mode, a.trials, a.seed);
                cfg.k0 = a.k0;
                cfg.precision_cap = a.precision_cap;
                reports.push(monte_carlo(&cfg)?);
            }
        }
    }
    let warnings: Vec<String> = reports
        .iter()
        .flat_map(|r| r.warnings.iter().map(move |w| format!("n={} p={} {}: {w}", r.n, r.p, r.mode)))
        .collect();
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    let body = match format.unwrap_or(Format::Json) {
        Format::Json if reports.len() == 1 => serde_json::to_string_pretty(&reports[0])? + "\n",
        Format::Json => serde_json::to_string_pretty(&reports)? + "\n",
        Format::Text => reports.iter().map(sample_text).collect(),
        Format::Csv => csv_table(
            &["n", "p", "mode", "r", "count", "frequency", "expected", "z"],
            reports.iter().flat_map(|rep| {
                rep.counts.iter().map(move |(r, c)| {
                    vec![
                        rep.n.to_string(),
                        rep.p.to_string(),
                        rep.mode.to_string(),
                        r.to_string(),
                        c.to_string(),
                        rep.frequencies[r].to_string(),
                        rep.expected[r].clone(),
                        rep.z_scores[r].to_string(),
                    ]
                })
            }),
        )?,
        f @ Format::Latex => return Err(unsupported("sample", f)),
    };
    let failure = (a.strict && !warnings.is_empty()).then(|| format!("{} warning(s) under --strict", warnings.len()));
    Ok(Output { body, failure })
}

fn sample_text(r: &MonteCarloReport) -> String {
    let mut s = format!(
        "n={} p={} mode={} trials={} seed={} K0={} abandoned={} extended={:.4}\n",
        r.n, r.p, r.mode, r.trials, r.seed, r.k0, r.abandoned, r.extended_fraction
    );
    for (k, c) in &r.counts {
        let _ = writeln!(
            s,
            "  r={k}: count={c} freq={:.6} expected={} z={:+.3}",
            r.frequencies[k], r.expected[k], r.z_scores[k]
        );
    }
    let _ = writeln!(
        s,
        "  mean roots {:.6} (expected {}), z={:+.3}",
        r.mean_roots, r.expected_mean_roots, r.mean_z_score
    );
    s
}

pub fn limits(a: &LimitsArgs, format: Option<Format>) -> CmdResult {
    let (n_max, d_max) = a.bounds.resolve()?;
    let quantities = if a.grid.is_empty() { Quantity::ALL.to_vec() } else { parse_quantities(&a.grid)? };
    let t = full_table(n_max, d_max)?;
    let entries = select(&t, &Selection { quantities, n: None, k: None });
    let rows: Vec<(String, usize, usize, Limit)> =
        entries.iter().map(|e| (e.quantity.to_string(), e.n, e.k, e.value.large_p_limit())).collect();
    let body = match format.unwrap_or(Format::Text) {
        Format::Text => rows.iter().map(|(q, n, k, l)| format!("lim {} = {l}\n", entry_label(q, *n, *k))).collect(),
        Format::Csv => csv_table(
            &["quantity", "n", "k", "limit"],
            rows.iter().map(|(q, n, k, l)| vec![q.clone(), n.to_string(), k.to_string(), l.to_string()]),
        )?,
        Format::Json => {
            #[derive(Serialize)]
            struct Row<'a> {
                quantity: &'a str,
                n: usize,
                k: usize,
                limit: String,
            }
            let rows: Vec<Row> =
                rows.iter().map(|(q, n, k, l)| Row { quantity: q, n: *n, k: *k, limit: l.to_string() }).collect();
            serde_json::to_string_pretty(&rows)? + "\n"
        }
        Format::Latex => {
            let mut s = String::from("\\begin{align*}\n");
            for (i, (q, n, k, l)) in rows.iter().enumerate() {
                let sym = Quantity::from_name(q).map_or_else(|| q.clone(), |x| x.latex().to_string());
                let sep = if i + 1 < rows.len() { " \\\\" } else { "" };
                let _ = writeln!(s, "\\lim_{{p\\to\\infty}} {sym}({n},{k}) &= {}{sep}", latex_limit(l));
            }
            s.push_str("\\end{align*}\n");
            s
        }
    };
    Ok(Output::ok(body))
}

fn latex_limit(l: &Limit) -> String {
    match l {
        Limit::Finite(q) if q.denom().to_string() == "1" => q.numer().to_string(),
        Limit::Finite(q) => {
            let sign = if q.numer().to_string().starts_with('-') { "-" } else { "" };
            format!("{sign}\\frac{{{}}}{{{}}}", q.numer().to_string().trim_start_matches('-'), q.denom())
        }
        Limit::PlusInfinity => "\\infty".into(),
        Limit::MinusInfinity => "-\\infty".into(),
    }
}

pub fn exhaust(a: &ExhaustArgs, format: Option<Format>) -> CmdResult {
    let h = exhaustive_small(a.n, a.p, a.precision, a.mode, a.budget)?;
    let expected = expected_distribution(a.n, a.p, a.mode)?;

    #[derive(Serialize)]
    struct Bracket {
        r: usize,
        lower: String,
        upper: String,
        expected: String,
        contains: bool,
    }
    let brackets: Vec<Bracket> = expected
        .iter()
        .enumerate()
        .map(|(r, e)| {
            let (lo, hi) = h.bracket(r);
            Bracket { r, contains: &lo <= e && e <= &hi, lower: lo.to_string(), upper: hi.to_string(), expected: e.to_string() }
        })
        .collect();

    let body = match format.unwrap_or(Format::Json) {
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                #[serde(flatten)]
                histogram: &'a padic_density::oracle::ExhaustiveHistogram,
                brackets: &'a [Bracket],
            }
            serde_json::to_string_pretty(&Doc { histogram: &h, brackets: &brackets })? + "\n"
        }
        Format::Text => {
            let mut s = format!(
                "n={} p={} K={} mode={}: {} polynomials, {} undetermined\n",
                h.n, h.p, h.precision, h.mode, h.total, h.undetermined
            );
            for b in &brackets {
                let _ = writeln!(
                    s,
                    "  r={}: {} <= {} <= {} {}",
                    b.r,
                    b.lower,
                    b.expected,
                    b.upper,
                    if b.contains { "ok" } else { "VIOLATED" }
                );
            }
            s
        }
        Format::Csv => csv_table(
            &["r", "lower", "expected", "upper", "contains"],
            brackets.iter().map(|b| {
                vec![b.r.to_string(), b.lower.clone(), b.expected.clone(), b.upper.clone(), b.contains.to_string()]
            }),
        )?,
        f @ Format::Latex => return Err(unsupported("exhaust", f)),
    };
    let bad: Vec<String> = brackets.iter().filter(|b| !b.contains).map(|b| format!("r={}", b.r)).collect();
    let failure = (!bad.is_empty()).then(|| format!("exact probability outside the bracket at {}", bad.join(", ")));
    Ok(Output { body, failure })
}
