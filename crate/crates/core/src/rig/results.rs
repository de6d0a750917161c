//! The per-cell results CSV.

use std::io::{Read, Write};
use std::path::Path;

use super::CellResult;
use crate::metrics::MetricReport;
use crate::sampling::SkipReason;
use crate::{Error, Result};

pub const RESULTS_CSV_HEADER: [&str; 12] = [
    "project", "release", "policy", "learner", "recall", "pf", "auc", "gm", "d2h", "brier", "ifa",
    "flags",
];

/// Write results with six-decimal floats and LF line endings. Not-applicable
/// cells have empty metric fields and `na:<reason>` flags.
pub fn write_results_csv<W: Write>(out: W, results: &[CellResult]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(RESULTS_CSV_HEADER)?;
    for cell in results {
        let mut row = vec![
            cell.project.clone(),
            cell.release.to_string(),
            cell.policy.name().to_string(),
            cell.learner.name().to_string(),
        ];
        match &cell.outcome {
            Ok(r) => {
                for v in [r.recall, r.pf, r.auc, r.gm, r.d2h, r.brier] {
                    row.push(format!("{v:.6}"));
                }
                row.push(r.ifa.to_string());
            }
            Err(_) => row.extend(std::iter::repeat_n(String::new(), 7)),
        }
        row.push(cell.flags().join(";"));
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| Error::io("<results>", e))?;
    Ok(())
}

fn skip_from_code(code: &str) -> SkipReason {
    match code {
        "empty_release" => SkipReason::EmptyRelease,
        "empty_window" => SkipReason::EmptyWindow,
        "single_class" => SkipReason::SingleClass,
        "pool_incomplete" => SkipReason::PoolIncomplete,
        "degenerate_test" => SkipReason::DegenerateTest,
        other => SkipReason::Failed(other.to_string()),
    }
}

/// Read a results CSV written by [`write_results_csv`]. Metric values come
/// back rounded to six decimals.
pub fn read_results_csv<R: Read>(input: R, origin: &Path) -> Result<Vec<CellResult>> {
    let mut r = csv::ReaderBuilder::new().from_reader(input);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != RESULTS_CSV_HEADER {
        return Err(Error::Parse {
            path: origin.to_path_buf(),
            line: 1,
            message: format!("unexpected header {header:?}"),
        });
    }
    let mut out = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let line = i + 2;
        let perr = |message: String| Error::Parse {
            path: origin.to_path_buf(),
            line,
            message,
        };
        let field = |j: usize| rec.get(j).unwrap_or("");
        let float = |j: usize| {
            field(j)
                .parse::<f64>()
                .map_err(|e| perr(format!("{}: {e}", RESULTS_CSV_HEADER[j])))
        };
        let flags: Vec<&str> = field(11).split(';').filter(|s| !s.is_empty()).collect();
        let na = flags.iter().find_map(|f| f.strip_prefix("na:"));
        let outcome = match na {
            Some(code) => Err(skip_from_code(code)),
            None => Ok(MetricReport {
                recall: float(4)?,
                pf: float(5)?,
                auc: float(6)?,
                gm: float(7)?,
                d2h: float(8)?,
                brier: float(9)?,
                ifa: field(10).parse().map_err(|e| perr(format!("ifa: {e}")))?,
                no_positives: flags.contains(&"no_positives"),
                no_negatives: flags.contains(&"no_negatives"),
            }),
        };
        out.push(CellResult {
            project: field(0).to_string(),
            release: field(1)
                .parse()
                .map_err(|e| perr(format!("release: {e}")))?,
            policy: field(2).parse().map_err(|e: Error| perr(e.to_string()))?,
            learner: field(3).parse().map_err(|e: Error| perr(e.to_string()))?,
            outcome,
            e_fallback: flags.contains(&"e_fallback"),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learners::LearnerKind;
    use crate::sampling::Policy;

    #[test]
    fn round_trip() {
        let report = MetricReport {
            recall: 0.75,
            pf: 0.125,
            auc: 0.8,
            gm: 0.8076923076923077,
            d2h: 0.2,
            brier: 0.1,
            ifa: 2,
            no_positives: false,
            no_negatives: true,
        };
        let cells = vec![
            CellResult {
                project: "p".into(),
                release: 1,
                policy: Policy::All,
                learner: LearnerKind::Lr,
                outcome: Ok(report),
                e_fallback: false,
            },
            CellResult {
                project: "p".into(),
                release: 1,
                policy: Policy::E,
                learner: LearnerKind::Lr,
                outcome: Err(SkipReason::PoolIncomplete),
                e_fallback: false,
            },
        ];
        let mut buf = Vec::new();
        write_results_csv(&mut buf, &cells).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(
            text,
            "project,release,policy,learner,recall,pf,auc,gm,d2h,brier,ifa,flags\n\
             p,1,ALL,LR,0.750000,0.125000,0.800000,0.807692,0.200000,0.100000,2,no_negatives\n\
             p,1,E,LR,,,,,,,,na:pool_incomplete\n"
        );
        let back = read_results_csv(buf.as_slice(), Path::new("r.csv")).unwrap();
        assert_eq!(back[1], cells[1]);
        assert_eq!(back[0].report().unwrap().gm, 0.807692);
        assert!(back[0].report().unwrap().no_negatives);
    }
}
