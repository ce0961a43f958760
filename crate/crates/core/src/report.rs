//! Report serialization.
//!
//! All CSV outputs have a fixed header and column order, format
//! similarities with six decimals and leave unknown values empty.
//! The JSON detection report carries `schema_version`; see the README for
//! its layout.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write as _};
use std::path::Path;

use crate::corpus::{Corpus, DatasetStats};
use crate::ir_filter::SimilarityTable;
use crate::metrics::ScenarioReport;
use crate::pipeline::{DetectionReport, ReportFormat, SweepReport};
use crate::Error;

pub const DETECTION_CSV_HEADER: &str = "dataset,pair_a,pair_b,sim_ir,passed,sim_sm";
pub const SWEEP_CSV_HEADER: &str = "dataset,matcher,mechanism,raw_threshold,effective_threshold,nep_raw,nep_norm,anp_baseline,anp_filtered,ranp_pct,dep_raw,dep_norm,pearson_r";
pub const CORRELATION_CSV_HEADER: &str = "dataset,matcher,pairs,pearson_r";
pub const IR_DUMP_CSV_HEADER: &str = "pair_id_a,pair_id_b,sim_ir";

/// Quotes a field when it would otherwise break the row.
fn field(value: &str) -> String {
    if value.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", value.replace('"', "\"\""))
    } else {
        value.to_string()
    }
}

fn real(value: Option<f64>) -> String {
    value.map(|v| format!("{v:.6}")).unwrap_or_default()
}

fn int<T: ToString>(value: Option<T>) -> String {
    value.map(|v| v.to_string()).unwrap_or_default()
}

pub fn detection_csv(report: &DetectionReport) -> String {
    let mut out = String::from(DETECTION_CSV_HEADER);
    out.push('\n');
    for dataset in &report.datasets {
        for row in &dataset.rows {
            let _ = writeln!(
                out,
                "{},{},{},{:.6},{},{}",
                field(&dataset.stats.dataset_id),
                field(&row.a),
                field(&row.b),
                row.sim_ir,
                row.passed,
                real(row.sim_sm)
            );
        }
    }
    out
}

pub fn detection_json(report: &DetectionReport) -> Result<String, Error> {
    let mut text = serde_json::to_string_pretty(report)?;
    text.push('\n');
    Ok(text)
}

fn scenario_row(out: &mut String, r: &ScenarioReport) {
    let _ = writeln!(
        out,
        "{},{},{},{:.6},{},{},{:.6},{},{},{:.6},{},{},{}",
        field(&r.dataset),
        r.scenario.matcher,
        r.scenario.mechanism,
        r.scenario.raw_threshold,
        real(r.effective_threshold),
        r.nep_raw,
        r.nep_norm,
        r.anp_baseline,
        r.anp_filtered,
        r.ranp_pct,
        int(r.dep_raw),
        real(r.dep_norm),
        real(r.pearson_r)
    );
}

/// Per-dataset scenario rows followed by `mean` rows when present. Raw
/// counts are left empty in `mean` rows.
pub fn sweep_csv(report: &SweepReport) -> String {
    let mut out = String::from(SWEEP_CSV_HEADER);
    out.push('\n');
    for r in &report.rows {
        scenario_row(&mut out, r);
    }
    for m in &report.means {
        let _ = writeln!(
            out,
            "mean,{},{},{:.6},{},,{:.6},,,{:.6},,{},{}",
            m.scenario.matcher,
            m.scenario.mechanism,
            m.scenario.raw_threshold,
            real(m.effective_threshold),
            m.nep_norm,
            m.ranp_pct,
            real(m.dep_norm),
            real(m.pearson_r)
        );
    }
    out
}

pub fn correlation_csv(report: &SweepReport) -> String {
    let mut out = String::from(CORRELATION_CSV_HEADER);
    out.push('\n');
    for c in &report.correlations {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            field(&c.dataset),
            c.matcher,
            c.pairs,
            real(c.pearson_r)
        );
    }
    out
}

/// Statistics rows, one per sub-dataset.
pub fn stats_csv(stats: &[DatasetStats]) -> String {
    let mut out = String::from(DatasetStats::CSV_HEADER);
    out.push('\n');
    for s in stats {
        out.push_str(&s.csv_row());
        out.push('\n');
    }
    out
}

/// IR similarities before filtering. With several sub-datasets the ids are
/// prefixed with `<dataset>/`.
pub fn ir_dump_csv(tables: &[(&Corpus, &SimilarityTable)]) -> String {
    let prefix = tables.len() > 1;
    let mut out = String::from(IR_DUMP_CSV_HEADER);
    out.push('\n');
    for (corpus, table) in tables {
        for e in table.entries() {
            let (a, b) = corpus.pair_names(e.pair);
            let (a, b) = if prefix {
                (
                    format!("{}/{a}", corpus.dataset_id),
                    format!("{}/{b}", corpus.dataset_id),
                )
            } else {
                (a.to_string(), b.to_string())
            };
            let _ = writeln!(out, "{},{},{:.6}", field(&a), field(&b), e.sim_ir);
        }
    }
    out
}

pub fn render_detection(report: &DetectionReport, format: ReportFormat) -> Result<String, Error> {
    match format {
        ReportFormat::Json => detection_json(report),
        ReportFormat::Csv => Ok(detection_csv(report)),
    }
}

/// Writes `text` to `path`, or to stdout when `path` is `None` or `-`.
pub fn write_output(text: &str, path: Option<&Path>) -> Result<(), Error> {
    match path {
        Some(p) if p != Path::new("-") => {
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(parent).map_err(|source| Error::Io {
                    path: parent.to_path_buf(),
                    source,
                })?;
            }
            fs::write(p, text).map_err(|source| Error::Io {
                path: p.to_path_buf(),
                source,
            })
        }
        _ => {
            let mut out = io::stdout().lock();
            match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
                // a closed pipe (`| head`) is not an error
                Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(Error::Io {
                    path: "-".into(),
                    source: e,
                }),
                _ => Ok(()),
            }
        }
    }
}

pub fn emit_report(report: &DetectionReport, format: ReportFormat, path: Option<&Path>) -> Result<(), Error> {
    write_output(&render_detection(report, format)?, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quoting() {
        assert_eq!(field("a.java"), "a.java");
        assert_eq!(field("a,b"), "\"a,b\"");
        assert_eq!(field("say \"hi\""), "\"say \"\"hi\"\"\"");
    }

    #[test]
    fn optional_cells() {
        assert_eq!(real(None), "");
        assert_eq!(real(Some(0.5)), "0.500000");
        assert_eq!(int(Some(-3i64)), "-3");
        assert_eq!(int::<i64>(None), "");
    }

    #[test]
    fn headers_have_fixed_widths() {
        assert_eq!(SWEEP_CSV_HEADER.split(',').count(), 13);
        assert_eq!(DETECTION_CSV_HEADER.split(',').count(), 6);
    }
}
