//! CSV, JSON and plain-text renderings.

use std::fmt::Write as _;

use serde::Serialize;
use starlex::verify::suites::SuiteConfig;
use starlex::verify::{Fig1Matrices, Margins, RankedRow, Verdict, VerificationReport};
use starlex::{Alpha, Surd, SurdMatrix};

/// Shortest round-trip form, so identical runs give identical bytes; tiny
/// and huge magnitudes switch to exponent notation.
fn float(x: Option<f64>) -> String {
    match x {
        None => String::new(),
        Some(v) if v == 0.0 || (1e-4..1e15).contains(&v.abs()) => v.to_string(),
        Some(v) => format!("{v:e}"),
    }
}

#[derive(Serialize)]
struct OrderRecord {
    partition: String,
    rho_direct: String,
    rho_quotient: String,
    rank: usize,
    tie_class: usize,
    margin_to_next: String,
}

pub fn order_csv(rows: &[RankedRow]) -> Result<Vec<u8>, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(OrderRecord {
            partition: r.partition.to_string(),
            rho_direct: float(Some(r.rho_direct)),
            rho_quotient: float(r.rho_quotient),
            rank: r.rank,
            tie_class: r.tie_class,
            margin_to_next: float(r.margin_to_next),
        })?;
    }
    w.into_inner().map_err(|e| e.into_error().into())
}

pub fn order_text(rows: &[RankedRow], report: &VerificationReport) -> Vec<u8> {
    let mut s = String::new();
    let width = rows.iter().map(|r| r.partition.to_string().len()).max().unwrap_or(9).max(9);
    let _ = writeln!(s, "{:<width$}  {:>20}  {:>4}  {:>5}", "partition", "rho", "rank", "class");
    for r in rows {
        let _ = writeln!(
            s,
            "{:<width$}  {:>20.15}  {:>4}  {:>5}",
            r.partition.to_string(),
            r.rho_direct,
            r.rank,
            r.tie_class
        );
    }
    let _ = writeln!(s, "{}", summary_line(report));
    s.into_bytes()
}

pub fn reports_csv(reports: &[VerificationReport]) -> Result<Vec<u8>, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in reports.iter().flat_map(VerificationReport::csv_rows) {
        w.serialize(row)?;
    }
    w.into_inner().map_err(|e| e.into_error().into())
}

fn summary_line(r: &VerificationReport) -> String {
    let gap = r
        .margins
        .min_strict_gap
        .map(|g| format!(", min strict gap {g:.3e}"))
        .unwrap_or_default();
    format!("{}: {} ({} items{gap})", r.claim, r.verdict.as_str(), r.items.len())
}

pub fn reports_text(reports: &[VerificationReport]) -> Vec<u8> {
    let mut s = String::new();
    for r in reports {
        let _ = writeln!(s, "{}", summary_line(r));
        for f in r.failures() {
            let _ = writeln!(s, "  {f}");
        }
    }
    s.into_bytes()
}

#[derive(Serialize)]
struct SuiteSummary<'a> {
    claim: &'a str,
    verdict: Verdict,
    items: usize,
    params: &'a std::collections::BTreeMap<String, String>,
    margins: &'a Margins,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    failures: Vec<String>,
}

#[derive(Serialize)]
struct ConfigSummary {
    alphas: Vec<String>,
    seed: u64,
    oracle_max_n: usize,
    split_max_n: usize,
    identity_max_a: usize,
    sign_max_a: usize,
    partition_max_n: usize,
    chain_max_n: usize,
}

#[derive(Serialize)]
pub struct CheckSummary<'a> {
    verdict: Verdict,
    config: ConfigSummary,
    suites: Vec<SuiteSummary<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    reports: Option<&'a [VerificationReport]>,
}

impl<'a> CheckSummary<'a> {
    pub fn new(config: &SuiteConfig, reports: &'a [VerificationReport], full: bool) -> Self {
        let passed = reports.iter().all(VerificationReport::passed);
        CheckSummary {
            verdict: Verdict::from_bool(passed),
            config: ConfigSummary {
                alphas: config.alphas.iter().map(Alpha::to_string).collect(),
                seed: config.seed,
                oracle_max_n: config.oracle_max_n,
                split_max_n: config.split_max_n,
                identity_max_a: config.identity_max_a,
                sign_max_a: config.sign_max_a,
                partition_max_n: config.partition_max_n,
                chain_max_n: config.chain_max_n,
            },
            suites: reports
                .iter()
                .map(|r| SuiteSummary {
                    claim: &r.claim,
                    verdict: r.verdict,
                    items: r.items.len(),
                    params: &r.params,
                    margins: &r.margins,
                    failures: r.failures(),
                })
                .collect(),
            reports: full.then_some(reports),
        }
    }
}

/// `0`, `2`, `4/3`, `sqrt(3)`, `2*sqrt(3)`, `1/2*sqrt(3)`.
pub fn surd_text(x: &Surd) -> String {
    let c = x.coef();
    let coef = if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    };
    match x.radicand() {
        _ if x.is_zero() => "0".to_string(),
        1 => coef,
        r if c.numer() == c.denom() => format!("sqrt({r})"),
        r => format!("{coef}*sqrt({r})"),
    }
}

fn matrix_strings(m: &SurdMatrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(surd_text).collect()).collect()
}

fn matrix_text(out: &mut String, title: &str, m: &SurdMatrix) {
    let cells = matrix_strings(m);
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    let _ = writeln!(out, "{title}");
    for row in cells {
        let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        let _ = writeln!(out, "  [ {} ]", line.join("  "));
    }
}

fn named(m: &Fig1Matrices) -> [(&'static str, &SurdMatrix); 4] {
    [
        ("degree_path", &m.degree_path),
        ("adjacency_path", &m.adjacency_path),
        ("q_prime", &m.q_prime),
        ("q_s", &m.q_s),
    ]
}

pub fn fig1_text(alpha: &Alpha, m: &Fig1Matrices, report: &VerificationReport) -> Vec<u8> {
    let mut s = String::new();
    let _ = writeln!(s, "alpha = {alpha}");
    let titles = [
        "D(P_s): degree matrix of the weighted path",
        "A(P_s): adjacency matrix of the weighted path",
        "Q'(G): quotient of C_3 with the root loop",
        "Q_s: symmetrized quotient of A_alpha(H)",
    ];
    for (title, (_, matrix)) in titles.iter().zip(named(m)) {
        matrix_text(&mut s, title, matrix);
    }
    if let Some(item) = report.items.iter().find(|i| i.label == "radius H") {
        let _ = writeln!(s, "rho(H) = {:.15}", item.values.get("rho").copied().unwrap_or(f64::NAN));
    }
    for item in &report.items {
        let _ = writeln!(s, "{:<12} {}", item.verdict.as_str(), item.label);
    }
    let _ = writeln!(s, "{}", summary_line(report));
    s.into_bytes()
}

#[derive(Serialize)]
pub struct Fig1Body<'a> {
    alpha: String,
    matrices: std::collections::BTreeMap<&'static str, Vec<Vec<String>>>,
    report: &'a VerificationReport,
}

impl<'a> Fig1Body<'a> {
    pub fn new(alpha: &Alpha, m: &Fig1Matrices, report: &'a VerificationReport) -> Self {
        Fig1Body {
            alpha: alpha.to_string(),
            matrices: named(m).into_iter().map(|(k, v)| (k, matrix_strings(v))).collect(),
            report,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use starlex::number::rat;

    #[test]
    fn surd_rendering() {
        assert_eq!(surd_text(&Surd::zero()), "0");
        assert_eq!(surd_text(&Surd::rational(rat(2, 1))), "2");
        assert_eq!(surd_text(&Surd::rational(rat(4, 3))), "4/3");
        assert_eq!(surd_text(&Surd::sqrt(3)), "sqrt(3)");
        assert_eq!(surd_text(&Surd::new(rat(2, 3), 3)), "2/3*sqrt(3)");
        assert_eq!(surd_text(&Surd::new(rat(2, 1), 2)), "2*sqrt(2)");
    }

    #[test]
    fn float_rendering() {
        assert_eq!(float(None), "");
        assert_eq!(float(Some(0.0)), "0");
        assert_eq!(float(Some(1.5)), "1.5");
        assert_eq!(float(Some(-2.5e-15)), "-2.5e-15");
    }
}
