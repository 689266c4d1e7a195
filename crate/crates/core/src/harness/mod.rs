//! Seeded randomized campaigns against the bounds, threshold region scans,
//! violation frontiers and Werner visibility sweeps, with CSV emitters.

mod campaign;
mod scan;

pub use campaign::{
    run_campaign, trial_rng, CampaignConfig, CampaignReport, Claim, Ensemble, TrialRecord, ViolationRecord,
    DEFAULT_TOLERANCE, REVERIFY_TOLERANCE,
};
pub use scan::{
    frontier_scan, frontiers_nested, region_scan, werner_sweep, FrontierPoint, Grid, GridMode, RegionCell,
    RegionGrid, SweepRow,
};

use crate::error::Result;

/// CSV float format: 17 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_float).unwrap_or_default()
}

fn to_csv(header: Vec<String>, rows: impl IntoIterator<Item = Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| std::io::Error::other(e);
    w.write_record(&header).map_err(io)?;
    for row in rows {
        w.write_record(&row).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("CSV of ASCII fields"))
}

/// One row per evaluated trial: `trial, margin, B, bound, K, c1..cn`.
pub fn campaign_csv(report: &CampaignReport) -> Result<String> {
    let mut header: Vec<String> = ["trial", "margin", "B", "bound", "K"].map(String::from).to_vec();
    header.extend((1..=report.n).map(|i| format!("c{i}")));
    to_csv(
        header,
        report.records.iter().map(|r| {
            let mut row = vec![
                r.trial.to_string(),
                fmt_float(r.margin),
                fmt_float(r.b),
                fmt_float(r.bound),
                fmt_float(r.concurrences.iter().product()),
            ];
            row.extend(r.concurrences.iter().map(|&c| fmt_float(c)));
            row
        }),
    )
}

pub fn region_csv(grid: &RegionGrid) -> Result<String> {
    let mut header: Vec<String> = (1..=grid.n).map(|i| format!("c{i}")).collect();
    header.extend(["product", "threshold", "detected"].map(String::from));
    to_csv(
        header,
        grid.cells.iter().map(|cell| {
            let mut row: Vec<String> = cell.concurrences.iter().map(|&c| fmt_float(c)).collect();
            row.push(fmt_float(cell.product));
            row.push(fmt_float(grid.threshold));
            row.push(cell.detected.to_string());
            row
        }),
    )
}

pub fn frontier_csv(points: &[FrontierPoint]) -> Result<String> {
    to_csv(
        ["curve", "n", "e1", "e2"].map(String::from).to_vec(),
        points.iter().map(|p| {
            vec![
                if p.n.is_some() { "star" } else { "linear" }.to_string(),
                p.n.map(|n| n.to_string()).unwrap_or_default(),
                fmt_float(p.e1),
                fmt_float(p.e2),
            ]
        }),
    )
}

pub fn sweep_csv(rows: &[SweepRow]) -> Result<String> {
    to_csv(
        ["n", "v", "V", "b_linear", "b_star", "m_linear", "m_star", "delta_n", "delta_printed"]
            .map(String::from)
            .to_vec(),
        rows.iter().map(|r| {
            vec![
                r.n.to_string(),
                fmt_opt(r.v_source),
                fmt_float(r.v_product),
                fmt_float(r.b_linear),
                fmt_float(r.b_star),
                fmt_float(r.m_linear),
                fmt_float(r.m_star),
                fmt_float(r.delta_n),
                fmt_float(r.delta_printed),
            ]
        }),
    )
}
