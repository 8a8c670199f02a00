use std::io::Write;

use crate::error::Result;
use crate::harness::TrialRecord;
use crate::solver::Estimate;

pub const CSV_HEADER: [&str; 10] = [
    "instance_id",
    "algorithm",
    "seed",
    "F_reported",
    "F_mode",
    "sum_fT",
    "F_opt",
    "ratio",
    "evals",
    "wall_ms",
];

const SIGNIFICANT_DIGITS: usize = 12;

/// Whether wall-clock columns are written. Omitting them makes the CSV a
/// pure function of `(instance, config)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Timing {
    Include,
    Omit,
}

/// Renders `x` with `digits` significant digits, `%g` style: fixed notation
/// for moderate exponents, scientific otherwise, trailing zeros dropped.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if exp < -4 || exp >= digits as i32 {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn num(x: f64) -> String {
    format_sig(x, SIGNIFICANT_DIGITS)
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// Writes one row per record, then a `mean` and a `stddev` row for every
/// `(instance_id, algorithm)` group. Records are expected pre-sorted.
pub fn write_csv<W: Write>(out: W, records: &[TrialRecord], timing: Timing) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| std::io::Error::other(e);
    w.write_record(CSV_HEADER).map_err(io)?;
    let wall = |ms: f64| match timing {
        Timing::Include => num(ms),
        Timing::Omit => String::new(),
    };
    for r in records {
        w.write_record([
            r.instance_id.clone(),
            r.algorithm.name().to_string(),
            r.seed.to_string(),
            num(r.f_reported),
            r.f_mode.name().to_string(),
            num(r.sum_ft),
            opt(r.f_opt),
            opt(r.ratio),
            r.evals.to_string(),
            wall(r.wall_ms),
        ])
        .map_err(io)?;
    }

    for group in
        records.chunk_by(|a, b| a.instance_id == b.instance_id && a.algorithm == b.algorithm)
    {
        let stat = |f: &dyn Fn(&TrialRecord) -> f64| {
            Estimate::from_samples(&group.iter().map(f).collect::<Vec<_>>())
        };
        let reported = stat(&|r| r.f_reported);
        let sum_ft = stat(&|r| r.sum_ft);
        let evals = stat(&|r| r.evals as f64);
        let wall_ms = stat(&|r| r.wall_ms);
        let f_opt = group[0].f_opt;
        let ratio = group
            .iter()
            .map(|r| r.ratio)
            .collect::<Option<Vec<_>>>()
            .map(|v| Estimate::from_samples(&v));
        for (label, pick) in [
            ("mean", (|e: &Estimate| e.mean) as fn(&Estimate) -> f64),
            ("stddev", |e: &Estimate| e.stddev),
        ] {
            w.write_record([
                group[0].instance_id.clone(),
                group[0].algorithm.name().to_string(),
                label.to_string(),
                num(pick(&reported)),
                String::new(),
                num(pick(&sum_ft)),
                opt(f_opt.map(|v| if label == "mean" { v } else { 0.0 })),
                opt(ratio.as_ref().map(pick)),
                num(pick(&evals)),
                wall(pick(&wall_ms)),
            ])
            .map_err(io)?;
        }
    }
    w.flush()?;
    Ok(())
}
