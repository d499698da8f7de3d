//! Library surface of the command-line front end.
//!
//! The binary in `main.rs` is a thin argument parser over the functions
//! here, which return their output as strings so integration tests can
//! compare runs byte for byte.

pub mod cache;
pub mod report;
pub mod verify;

use anyhow::Result;

use spheremass_core::mass::{distinctness_table, mass_estimate, partial_sum_f64, Manifold};

/// Invalid flag combination or argument value: exit code 2, like a
/// parse error, rather than 1 (verification/internal failure).
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for UsageError {}

macro_rules! usage_bail {
    ($($arg:tt)*) => {
        return Err(UsageError(format!($($arg)*)).into())
    };
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Certified,
    Fast,
}

/// Certified mass report for one or more manifolds.
pub fn run_mass(manifolds: &[Manifold], n: u32, digits: u32, format: Format, mode: Mode) -> Result<String> {
    if mode == Mode::Fast {
        if format != Format::Text {
            usage_bail!("fast-float mode is diagnostic only; JSON/CSV carry certified output");
        }
        let mut out = String::new();
        for &m in manifolds {
            out.push_str(&format!(
                "{} N={} S_N ~ {:.10}  (fast-float diagnostics, NOT certified)\n",
                m.key(),
                n,
                partial_sum_f64(m, n)
            ));
        }
        return Ok(out);
    }
    let estimates = manifolds
        .iter()
        .map(|&m| mass_estimate(m, n, digits))
        .collect::<spheremass_core::Result<Vec<_>>>()?;
    match format {
        Format::Text => {
            let mut out = String::new();
            for (i, est) in estimates.iter().enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                out.push_str(&report::mass_text(est));
            }
            Ok(out)
        }
        Format::Json => {
            let views: Vec<_> = estimates.iter().map(report::mass_json).collect();
            let text = if views.len() == 1 {
                serde_json::to_string_pretty(&views[0])?
            } else {
                serde_json::to_string_pretty(&views)?
            };
            Ok(text + "\n")
        }
        Format::Csv => {
            let mut out = String::from(report::CSV_HEADER);
            out.push('\n');
            for est in &estimates {
                out.push_str(&report::mass_csv_row(est));
                out.push('\n');
            }
            Ok(out)
        }
    }
}

/// Per-N table of partial sums, bounds, and interval widths.
pub fn run_convergence(
    manifolds: &[Manifold],
    n_list: &[u32],
    digits: u32,
    format: Format,
    mode: Mode,
) -> Result<String> {
    if n_list.is_empty() {
        usage_bail!("empty N list");
    }
    if mode == Mode::Fast {
        if format != Format::Text {
            usage_bail!("fast-float mode is diagnostic only; JSON/CSV carry certified output");
        }
        let mut out = String::new();
        for &m in manifolds {
            for &n in n_list {
                out.push_str(&format!(
                    "{} N={} S_N ~ {:.10}  (fast-float diagnostics, NOT certified)\n",
                    m.key(),
                    n,
                    partial_sum_f64(m, n)
                ));
            }
        }
        return Ok(out);
    }
    let mut estimates = Vec::new();
    for &m in manifolds {
        for &n in n_list {
            estimates.push(mass_estimate(m, n, digits)?);
        }
    }
    match format {
        Format::Text => {
            let mut out = String::new();
            out.push_str(&format!(
                "{:<9} {:>4}  {:<26} {:<14} {:<14}\n",
                "manifold", "N", "S_N enclosure", "error bound", "interval width"
            ));
            for est in &estimates {
                let enc = est
                    .partial_sum
                    .enclosure(est.partial_sum.enclosure_digits_for(est.digits));
                out.push_str(&format!(
                    "{:<9} {:>4}  {:<26} {:<14} {:<14}\n",
                    est.manifold.key(),
                    est.truncation,
                    enc.decimal_string(est.digits.min(10)),
                    spheremass_core::exactnum::decimal_upper(&est.error_bound, est.digits.min(10)),
                    spheremass_core::exactnum::decimal_upper(&est.mass.width(), est.digits.min(10)),
                ));
            }
            Ok(out)
        }
        Format::Json => {
            let views: Vec<_> = estimates.iter().map(report::mass_json).collect();
            Ok(serde_json::to_string_pretty(&views)? + "\n")
        }
        Format::Csv => {
            let mut out = String::from(report::CSV_HEADER);
            out.push('\n');
            for est in &estimates {
                out.push_str(&report::mass_csv_row(est));
                out.push('\n');
            }
            Ok(out)
        }
    }
}

/// Certified critical-value intervals and distinctness verdicts.
pub fn run_t0(manifolds: &[Manifold], n: u32, digits: u32, format: Format, mode: Mode) -> Result<String> {
    if mode == Mode::Fast {
        usage_bail!("t0 reporting is a certified comparison; fast-float mode is not supported here");
    }
    let estimates = manifolds
        .iter()
        .map(|&m| mass_estimate(m, n, digits))
        .collect::<spheremass_core::Result<Vec<_>>>()?;
    let full_table = manifolds == Manifold::ALL;
    let rows = if full_table {
        distinctness_table(&estimates[0], &estimates[1], &estimates[2])
    } else {
        // Without all three masses only the -1/3 comparisons apply.
        let third = spheremass_core::RatInterval::point(spheremass_core::exactnum::rat(-1, 3));
        estimates
            .iter()
            .map(|est| {
                let verdict = spheremass_core::mass::check_distinct(&third, &est.t0);
                spheremass_core::mass::DistinctnessRow {
                    topology: match est.manifold {
                        Manifold::S2xS2 => "S2xS2 # CP2bar",
                        Manifold::G24 => "G(2,4) # CP2bar",
                        Manifold::Rp2xRp2 => "RP2xRP2 # CP2bar",
                    },
                    left_label: "-1/3",
                    right_label: "-(9m)^-1",
                    left: third.clone(),
                    right: est.t0.clone(),
                    verdict,
                }
            })
            .collect()
    };
    match format {
        Format::Text => {
            let mut out = String::new();
            for est in &estimates {
                out.push_str(&format!(
                    "{:<9} N={:<4} t0 in {}   2t0 in {}\n",
                    est.manifold.key(),
                    est.truncation,
                    est.t0.decimal_string(digits),
                    est.t0_double.decimal_string(digits)
                ));
            }
            out.push_str(&report::distinctness_text(&rows, digits));
            Ok(out)
        }
        Format::Json => {
            #[derive(serde::Serialize)]
            struct T0Json {
                n: u32,
                digits: u32,
                values: Vec<report::MassJson>,
                distinctness: Vec<report::DistinctnessJson>,
            }
            let doc = T0Json {
                n,
                digits,
                values: estimates.iter().map(report::mass_json).collect(),
                distinctness: report::distinctness_json(&rows, digits),
            };
            Ok(serde_json::to_string_pretty(&doc)? + "\n")
        }
        Format::Csv => {
            let mut out = String::from("quantity,manifold,N,lo,hi\n");
            for est in &estimates {
                for (label, interval) in [("t0", &est.t0), ("t0_double", &est.t0_double)] {
                    let s = interval.decimal_string(digits);
                    let (lo, hi) = s.split_once(" .. ").unwrap();
                    out.push_str(&format!(
                        "{label},{},{},{lo},{hi}\n",
                        est.manifold.key(),
                        est.truncation
                    ));
                }
            }
            Ok(out)
        }
    }
}

/// Run verification suites; returns the report and overall success.
pub fn run_verify(suite: Option<&str>, tol: f64) -> Result<(String, bool)> {
    let names: Vec<&str> = match suite {
        Some(name) => {
            if !verify::ALL_SUITES.contains(&name) {
                usage_bail!(
                    "unknown suite {name:?}; available: {}",
                    verify::ALL_SUITES.join(", ")
                );
            }
            vec![name]
        }
        None => verify::ALL_SUITES.to_vec(),
    };
    let mut out = String::new();
    let mut all_pass = true;
    for name in names {
        let results = verify::run_suite(name, tol).expect("suite name validated");
        out.push_str(&format!("suite {name}:\n"));
        for c in &results {
            let status = if c.pass { "PASS" } else { "FAIL" };
            all_pass &= c.pass;
            if c.detail.is_empty() {
                out.push_str(&format!("  [{status}] {}\n", c.name));
            } else {
                out.push_str(&format!("  [{status}] {} ({})\n", c.name, c.detail));
            }
        }
    }
    out.push_str(if all_pass { "verification: all suites pass\n" } else { "verification: FAILURES\n" });
    Ok((out, all_pass))
}
