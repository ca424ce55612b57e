//! Report tables and per-record plot data for analyzed datasets.
//!
//! The TSV and markdown formats round to two decimals for human reading;
//! the JSON format keeps full precision so a report can be parsed back and
//! compared numerically. Undefined r-squared values (degenerate-variance
//! data) appear as `NA` in text formats and `null` in JSON.

use serde::{Deserialize, Serialize};

use crate::dataset::AnalysisRow;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Tsv,
    Json,
    Markdown,
}

pub const REPORT_COLUMNS: [&str; 7] = [
    "id", "P_MB", "R2_MB", "P_BE", "R2_BE", "delta_BIC", "verdict",
];

/// One report line, format-independent and at full precision.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub id: u32,
    pub p_mb: f64,
    pub r2_mb: Option<f64>,
    pub p_be: f64,
    pub r2_be: Option<f64>,
    pub delta_bic: f64,
    pub verdict: String,
}

pub fn report_rows(rows: &[AnalysisRow]) -> Vec<ReportRow> {
    rows.iter()
        .map(|row| ReportRow {
            id: row.spec.id,
            p_mb: row.fit_mb.params.p1(),
            r2_mb: row.fit_mb.r_squared,
            p_be: row.fit_be.params.p1(),
            r2_be: row.fit_be.r_squared,
            delta_bic: row.comparison.delta_bic,
            verdict: row.comparison.verdict(),
        })
        .collect()
}

pub fn emit_report(rows: &[AnalysisRow], format: ReportFormat) -> String {
    let rows = report_rows(rows);
    match format {
        ReportFormat::Tsv => emit_tsv(&rows),
        ReportFormat::Json => {
            let mut text = serde_json::to_string_pretty(&rows).expect("rows serialize");
            text.push('\n');
            text
        }
        ReportFormat::Markdown => emit_markdown(&rows),
    }
}

/// Parses a JSON report back into rows (inverse of the JSON format).
pub fn parse_report_json(text: &str) -> Result<Vec<ReportRow>, serde_json::Error> {
    serde_json::from_str(text)
}

fn emit_tsv(rows: &[ReportRow]) -> String {
    let mut out = REPORT_COLUMNS.join("\t");
    out.push('\n');
    for row in rows {
        out.push_str(&format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
            row.id,
            fixed2(row.p_mb),
            opt_fixed2(row.r2_mb),
            fixed2(row.p_be),
            opt_fixed2(row.r2_be),
            fixed2(row.delta_bic),
            row.verdict,
        ));
    }
    out
}

fn emit_markdown(rows: &[ReportRow]) -> String {
    let mut out = format!("| {} |\n", REPORT_COLUMNS.join(" | "));
    out.push_str("|---:|---:|---:|---:|---:|---:|:---|\n");
    for row in rows {
        out.push_str(&format!(
            "| {} | {} | {} | {} | {} | {} | {} |\n",
            row.id,
            fixed2(row.p_mb),
            opt_fixed2(row.r2_mb),
            fixed2(row.p_be),
            opt_fixed2(row.r2_be),
            fixed2(row.delta_bic),
            row.verdict,
        ));
    }
    out
}

fn fixed2(value: f64) -> String {
    let text = format!("{value:.2}");
    if text == "-0.00" {
        "0.00".to_string()
    } else {
        text
    }
}

fn opt_fixed2(value: Option<f64>) -> String {
    match value {
        Some(v) => fixed2(v),
        None => "NA".to_string(),
    }
}

/// CSV plot data for one analyzed record: per occupancy index, the observed
/// relative frequency plus both fitted curves over the full index range.
/// Masked-out indices get an empty frequency field so plots show the gap.
pub fn emit_plotdata(row: &AnalysisRow) -> String {
    let total = row.counts.total();
    let freqs = row.counts.to_frequencies();
    let observed: std::collections::BTreeMap<u32, f64> = row
        .counts
        .indices()
        .into_iter()
        .zip(freqs)
        .collect();
    let mb = row.fit_mb.params.pmf_vector(total);
    let be = row.fit_be.params.pmf_vector(total);
    let mut out = String::from("n,empirical_freq,mb_fit,be_fit\n");
    for n in 0..=total {
        let empirical = observed
            .get(&n)
            .map(|f| format!("{f}"))
            .unwrap_or_default();
        out.push_str(&format!("{n},{empirical},{},{}\n", mb[n as usize], be[n as usize]));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{analyze, read_csv, AnalysisOptions};

    const SAMPLE_CSV: &str = "\
id,N,concept,state1,state2,c0,c1,c2,c3,c4,c5,c6,c7,c8,c9,c10,c11
1,11,Animals,Cat,Dog,6,11,22,31,36,46,38,34,30,27,12,8
2,3,Coin,Heads,Tails,9,25,27,11
3,2,Flat,Up,Down,5,5,5
";

    fn analyzed() -> Vec<AnalysisRow> {
        let records = read_csv(SAMPLE_CSV.as_bytes()).unwrap();
        analyze(&records, &AnalysisOptions::default()).unwrap().rows
    }

    #[test]
    fn tsv_has_one_line_per_record_and_two_decimals() {
        let text = emit_report(&analyzed(), ReportFormat::Tsv);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], REPORT_COLUMNS.join("\t"));
        for line in &lines[1..] {
            let fields: Vec<&str> = line.split('\t').collect();
            assert_eq!(fields.len(), 7);
            for numeric in &fields[1..6] {
                if *numeric == "NA" {
                    continue;
                }
                let digits = numeric.rsplit('.').next().unwrap();
                assert_eq!(digits.len(), 2, "field {numeric:?} in {line:?}");
            }
        }
    }

    #[test]
    fn undefined_r_squared_prints_as_na_and_null() {
        let rows = analyzed();
        let tsv = emit_report(&rows, ReportFormat::Tsv);
        let flat_line = tsv.lines().nth(3).unwrap();
        assert!(flat_line.starts_with("3\t"));
        assert!(flat_line.contains("\tNA\t"));
        let json = emit_report(&rows, ReportFormat::Json);
        assert!(json.contains("\"r2_mb\": null"));
        let parsed = parse_report_json(&json).unwrap();
        assert_eq!(parsed[2].r2_mb, None);
        assert_eq!(parsed[2].r2_be, Some(1.0));
    }

    #[test]
    fn json_round_trips_at_full_precision() {
        let rows = analyzed();
        let direct = report_rows(&rows);
        let parsed = parse_report_json(&emit_report(&rows, ReportFormat::Json)).unwrap();
        assert_eq!(parsed.len(), direct.len());
        for (a, b) in parsed.iter().zip(&direct) {
            assert_eq!(a.id, b.id);
            assert_eq!(a.verdict, b.verdict);
            assert!((a.p_mb - b.p_mb).abs() <= 1e-9);
            assert!((a.p_be - b.p_be).abs() <= 1e-9);
            assert!((a.delta_bic - b.delta_bic).abs() <= 1e-9);
        }
    }

    #[test]
    fn markdown_is_a_pipe_table() {
        let text = emit_report(&analyzed(), ReportFormat::Markdown);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 5);
        assert!(lines[0].starts_with("| id |"));
        assert!(lines[1].starts_with("|---:|"));
        for line in &lines {
            assert_eq!(line.matches('|').count(), 8);
        }
    }

    #[test]
    fn negative_zero_never_appears() {
        assert_eq!(fixed2(-0.0001), "0.00");
        assert_eq!(fixed2(-0.005), "-0.01");
        assert_eq!(fixed2(0.0), "0.00");
    }

    #[test]
    fn plotdata_covers_the_full_range_with_gaps_for_masked_indices() {
        let records = read_csv(SAMPLE_CSV.as_bytes()).unwrap();
        let run = analyze(
            &records[..1],
            &AnalysisOptions {
                mask: Some((2, 9)),
                ..AnalysisOptions::default()
            },
        )
        .unwrap();
        let text = emit_plotdata(&run.rows[0]);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 13);
        assert_eq!(lines[0], "n,empirical_freq,mb_fit,be_fit");
        let first: Vec<&str> = lines[1].split(',').collect();
        assert_eq!(first[0], "0");
        assert!(first[1].is_empty(), "masked index keeps an empty field");
        let third: Vec<&str> = lines[3].split(',').collect();
        assert!(!third[1].is_empty());
        for column in [2, 3] {
            let sum: f64 = lines[1..]
                .iter()
                .map(|l| l.split(',').nth(column).unwrap().parse::<f64>().unwrap())
                .sum();
            assert!((sum - 1.0).abs() < 1e-9, "model column {column} sums to {sum}");
        }
    }

    #[test]
    fn emission_is_deterministic() {
        let rows = analyzed();
        for format in [ReportFormat::Tsv, ReportFormat::Json, ReportFormat::Markdown] {
            assert_eq!(emit_report(&rows, format), emit_report(&rows, format));
        }
    }
}
