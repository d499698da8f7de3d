//! Output rendering: text, JSON and CSV views of certified estimates.
//!
//! Rationals are serialized as decimal-string numerator/denominator
//! pairs, never as floats, so emitted files are lossless and
//! language-neutral. All rendering is deterministic: identical inputs
//! produce byte-identical output regardless of thread count.

use serde::{Deserialize, Serialize};

use spheremass_core::exactnum::decimal_upper;
use spheremass_core::mass::DistinctnessRow;
use spheremass_core::{MassEstimate, Rational};

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct RationalJson {
    pub num: String,
    pub den: String,
}

impl RationalJson {
    pub fn of(r: &Rational) -> Self {
        RationalJson {
            num: r.numer().to_string(),
            den: r.denom().to_string(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct SumJson {
    pub a_num: String,
    pub a_den: String,
    pub b_num: String,
    pub b_den: String,
}

#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct IntervalJson {
    pub lo: String,
    pub hi: String,
}

/// JSON shape of one certified mass estimate.
#[derive(Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MassJson {
    pub manifold: String,
    pub n: u32,
    pub digits: u32,
    pub sum_rational: SumJson,
    pub bound: RationalJson,
    pub interval: IntervalJson,
    pub t0: IntervalJson,
    pub t0_double: IntervalJson,
}

fn interval_json(i: &spheremass_core::RatInterval, digits: u32) -> IntervalJson {
    let s = i.decimal_string(digits);
    let (lo, hi) = s.split_once(" .. ").expect("decimal_string format");
    IntervalJson { lo: lo.to_string(), hi: hi.to_string() }
}

pub fn mass_json(est: &MassEstimate) -> MassJson {
    MassJson {
        manifold: est.manifold.key().to_string(),
        n: est.truncation,
        digits: est.digits,
        sum_rational: SumJson {
            a_num: est.partial_sum.a.numer().to_string(),
            a_den: est.partial_sum.a.denom().to_string(),
            b_num: est.partial_sum.b.numer().to_string(),
            b_den: est.partial_sum.b.denom().to_string(),
        },
        bound: RationalJson::of(&est.error_bound),
        interval: interval_json(&est.mass, est.digits),
        t0: interval_json(&est.t0, est.digits),
        t0_double: interval_json(&est.t0_double, est.digits),
    }
}

pub const CSV_HEADER: &str =
    "manifold,N,sum_a_num,sum_a_den,sum_b_num,sum_b_den,bound_num,bound_den,lo,hi";

pub fn mass_csv_row(est: &MassEstimate) -> String {
    let s = est.mass.decimal_string(est.digits);
    let (lo, hi) = s.split_once(" .. ").expect("decimal_string format");
    format!(
        "{},{},{},{},{},{},{},{},{},{}",
        est.manifold.key(),
        est.truncation,
        est.partial_sum.a.numer(),
        est.partial_sum.a.denom(),
        est.partial_sum.b.numer(),
        est.partial_sum.b.denom(),
        est.error_bound.numer(),
        est.error_bound.denom(),
        lo,
        hi
    )
}

pub fn mass_text(est: &MassEstimate) -> String {
    let mut out = String::new();
    out.push_str(&format!("manifold:      {} ({})\n", est.manifold, est.manifold.key()));
    out.push_str(&format!("N:             {}\n", est.truncation));
    out.push_str(&format!(
        "S_N exact:     {}/{} + ({}/{})*ln2\n",
        est.partial_sum.a.numer(),
        est.partial_sum.a.denom(),
        est.partial_sum.b.numer(),
        est.partial_sum.b.denom()
    ));
    out.push_str(&format!(
        "S_N decimal:   {}\n",
        est.partial_sum
            .enclosure(est.partial_sum.enclosure_digits_for(est.digits))
            .decimal_string(est.digits)
    ));
    out.push_str(&format!(
        "error bound:   {}/{}  (<= {})\n",
        est.error_bound.numer(),
        est.error_bound.denom(),
        decimal_upper(&est.error_bound, est.digits)
    ));
    out.push_str(&format!("mass interval: {}\n", est.mass.decimal_string(est.digits)));
    out.push_str(&format!("t0 = -1/(9m):  {}\n", est.t0.decimal_string(est.digits)));
    out.push_str(&format!("2 t0:          {}\n", est.t0_double.decimal_string(est.digits)));
    out
}

pub fn distinctness_text(rows: &[DistinctnessRow], digits: u32) -> String {
    let mut out = String::new();
    out.push_str("distinct critical values:\n");
    for row in rows {
        out.push_str(&format!(
            "  {:20} {:12} in {}  vs  {:12} in {}  -> {}\n",
            row.topology,
            row.left_label,
            row.left.decimal_string(digits),
            row.right_label,
            row.right.decimal_string(digits),
            row.verdict
        ));
    }
    out
}

#[derive(Debug, Serialize, Deserialize)]
pub struct DistinctnessJson {
    pub topology: String,
    pub left_label: String,
    pub right_label: String,
    pub left: IntervalJson,
    pub right: IntervalJson,
    pub proven: bool,
}

pub fn distinctness_json(rows: &[DistinctnessRow], digits: u32) -> Vec<DistinctnessJson> {
    rows.iter()
        .map(|row| DistinctnessJson {
            topology: row.topology.to_string(),
            left_label: row.left_label.to_string(),
            right_label: row.right_label.to_string(),
            left: interval_json(&row.left, digits),
            right: interval_json(&row.right, digits),
            proven: row.verdict == spheremass_core::mass::Verdict::Proven,
        })
        .collect()
}

/// Recompute the decimal interval fields of a `MassJson` from its exact
/// fields; used by round-trip checks.
pub fn rederive_intervals(m: &MassJson) -> anyhow::Result<(IntervalJson, IntervalJson, IntervalJson)> {
    let parse = |num: &str, den: &str| -> anyhow::Result<Rational> {
        let n: num_bigint::BigInt = num.parse()?;
        let d: num_bigint::BigInt = den.parse()?;
        anyhow::ensure!(d > num_bigint::BigInt::from(0), "nonpositive denominator");
        Ok(Rational::new(n, d))
    };
    let a = parse(&m.sum_rational.a_num, &m.sum_rational.a_den)?;
    let b = parse(&m.sum_rational.b_num, &m.sum_rational.b_den)?;
    let bound = parse(&m.bound.num, &m.bound.den)?;
    let sum = spheremass_core::ExactValue::new(a, b);
    let enclosure = sum.enclosure(sum.enclosure_digits_for(m.digits));
    let mass = enclosure.widen(&bound);
    let t0 = mass.neg_ninth_reciprocal()?;
    let t0_double = t0.scale(&spheremass_core::exactnum::rat_int(2));
    Ok((
        interval_json(&mass, m.digits),
        interval_json(&t0, m.digits),
        interval_json(&t0_double, m.digits),
    ))
}
