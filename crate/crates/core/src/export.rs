//! CSV writers. Floats use Rust's shortest round-trip `{:e}` form so a value
//! read back parses to the same bits.

use std::io::Write;

use crate::bounds::{BoundRow, Fig3Row};
use crate::error::Result;
use crate::mc::{RocEstimate, TrialBatch};
use crate::roc::{RocCurve, SaddlePointTrace};

/// Bumped whenever a header or row format below changes.
pub const CSV_SCHEMA_VERSION: u32 = 1;

pub const BOUNDS_HEADER: [&str; 8] = ["M", "kappa", "n_s", "n_b", "bound_name", "exponent", "value", "regime_valid"];
pub const TRIALS_HEADER: [&str; 2] = ["trial", "statistic"];
pub const ROC_ESTIMATE_HEADER: [&str; 5] = ["pf", "pd", "ci_low", "ci_high", "trials"];
pub const ROC_CURVE_HEADER: [&str; 4] = ["pf", "pd", "radar", "method"];
pub const SADDLE_TRACE_HEADER: [&str; 6] = ["s", "mu", "mu_dot", "mu_ddot", "pf", "pm"];
pub const FIG3_HEADER: [&str; 4] = ["M", "pr_e_cs_ub", "pr_e_qi_ub", "pr_e_cs_lb"];

pub fn fmt_f64(x: f64) -> String {
    format!("{x:e}")
}

fn write_rows<W: Write, const N: usize>(
    out: W,
    header: [&str; N],
    rows: impl IntoIterator<Item = [String; N]>,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_bounds<W: Write>(out: W, rows: &[BoundRow]) -> Result<()> {
    write_rows(
        out,
        BOUNDS_HEADER,
        rows.iter().map(|r| {
            [
                fmt_f64(r.m),
                fmt_f64(r.kappa),
                fmt_f64(r.n_s),
                fmt_f64(r.n_b),
                r.bound.name.as_str().to_owned(),
                fmt_f64(r.bound.total_exponent),
                fmt_f64(r.bound.bound_value),
                r.bound.regime_valid.to_string(),
            ]
        }),
    )
}

pub fn write_trial_batch<W: Write>(out: W, batch: &TrialBatch) -> Result<()> {
    write_rows(
        out,
        TRIALS_HEADER,
        batch.statistics.iter().enumerate().map(|(i, x)| [i.to_string(), fmt_f64(*x)]),
    )
}

pub fn write_roc_estimate<W: Write>(out: W, roc: &RocEstimate) -> Result<()> {
    write_rows(
        out,
        ROC_ESTIMATE_HEADER,
        roc.points.iter().map(|p| {
            [fmt_f64(p.pf), fmt_f64(p.pd), fmt_f64(p.ci_low), fmt_f64(p.ci_high), roc.trials.to_string()]
        }),
    )
}

/// Several curves share one file, distinguished by the `radar` column.
pub fn write_roc_curves<W: Write>(out: W, curves: &[RocCurve]) -> Result<()> {
    write_rows(
        out,
        ROC_CURVE_HEADER,
        curves.iter().flat_map(|c| {
            c.points.iter().map(move |p| {
                [fmt_f64(p.pf), fmt_f64(p.pd), c.radar.as_str().to_owned(), c.method.as_str().to_owned()]
            })
        }),
    )
}

pub fn write_saddle_trace<W: Write>(out: W, trace: &SaddlePointTrace) -> Result<()> {
    write_rows(
        out,
        SADDLE_TRACE_HEADER,
        trace.points.iter().map(|p| {
            [fmt_f64(p.s), fmt_f64(p.mu), fmt_f64(p.mu_dot), fmt_f64(p.mu_ddot), fmt_f64(p.pf), fmt_f64(p.pm)]
        }),
    )
}

pub fn write_fig3<W: Write>(out: W, rows: &[Fig3Row]) -> Result<()> {
    write_rows(
        out,
        FIG3_HEADER,
        rows.iter()
            .map(|r| [fmt_f64(r.m), fmt_f64(r.pr_e_cs_ub), fmt_f64(r.pr_e_qi_ub), fmt_f64(r.pr_e_cs_lb)]),
    )
}
