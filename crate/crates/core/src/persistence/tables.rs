use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::bench::{AggregateRow, SummaryRow};
use crate::error::{Error, Result};

use super::write_atomic;

pub const AGGREGATE_HEADER: &str = "n,meta_mean_best_z,baseline_mean_best_z,meta_mean_gap,baseline_mean_gap,\
meta_mean_gamma_f,baseline_mean_gamma_f,meta_mean_infeasible,baseline_mean_infeasible";

pub const SUMMARY_HEADER: &str = "param,value,meta_mean_first_gap,baseline_mean_first_gap,\
meta_mean_gap_n6,baseline_mean_gap_n6,meta_mean_gap_n10,baseline_mean_gap_n10,\
meta_mean_infeasible,baseline_mean_infeasible";

fn write_rows<T: Serialize>(path: &Path, header: &str, rows: &[T]) -> Result<()> {
    // Written without serde headers so an empty table still has its header.
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(header.split(',')).map_err(|e| Error::Parse(e.to_string()))?;
    for r in rows {
        w.serialize(r).map_err(|e| Error::Parse(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    write_atomic(path, &bytes)
}

fn read_rows<T: DeserializeOwned>(path: &Path, header: &str) -> Result<Vec<T>> {
    let text = super::read_to_string(path)?;
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let found = rdr.headers().map_err(|e| Error::corrupt("header", e.to_string()))?;
    if found.iter().ne(header.split(',')) {
        return Err(Error::corrupt("header", format!("unexpected columns `{}`", found.iter().collect::<Vec<_>>().join(","))));
    }
    rdr.deserialize()
        .enumerate()
        .map(|(k, r)| r.map_err(|e| Error::corrupt(format!("row {}", k + 1), e.to_string())))
        .collect()
}

pub fn save_aggregate(path: &Path, rows: &[AggregateRow]) -> Result<()> {
    write_rows(path, AGGREGATE_HEADER, rows)
}

pub fn load_aggregate(path: &Path) -> Result<Vec<AggregateRow>> {
    let rows: Vec<AggregateRow> = read_rows(path, AGGREGATE_HEADER)?;
    for (k, r) in rows.iter().enumerate() {
        if r.n != k + 1 {
            return Err(Error::corrupt(format!("row {}, column n", k + 1), format!("expected {}, got {}", k + 1, r.n)));
        }
    }
    Ok(rows)
}

pub fn save_summary(path: &Path, rows: &[SummaryRow]) -> Result<()> {
    write_rows(path, SUMMARY_HEADER, rows)
}

pub fn load_summary(path: &Path) -> Result<Vec<SummaryRow>> {
    read_rows(path, SUMMARY_HEADER)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn opt() -> impl Strategy<Value = Option<f64>> {
        prop::option::of(-1e5f64..1e5)
    }

    proptest! {
        #[test]
        fn aggregate_round_trip(
            cells in prop::collection::vec((opt(), opt(), opt(), opt(), 1e-9f64..1e4, 1e-9f64..1e4, 0.0f64..100.0, 0.0f64..100.0), 0..15)
        ) {
            let rows: Vec<AggregateRow> = cells
                .into_iter()
                .enumerate()
                .map(|(k, (a, b, c, d, e, f, g, h))| AggregateRow {
                    n: k + 1,
                    meta_mean_best_z: a,
                    baseline_mean_best_z: b,
                    meta_mean_gap: c,
                    baseline_mean_gap: d,
                    meta_mean_gamma_f: e,
                    baseline_mean_gamma_f: f,
                    meta_mean_infeasible: g,
                    baseline_mean_infeasible: h,
                })
                .collect();
            let dir = tempfile::tempdir().unwrap();
            let p = dir.path().join("agg.csv");
            save_aggregate(&p, &rows).unwrap();
            prop_assert_eq!(load_aggregate(&p).unwrap(), rows);
        }

        #[test]
        fn summary_round_trip(value in 0.0f64..50.0, a in -1e3f64..1e3, g in opt(), h in opt()) {
            let rows = vec![SummaryRow {
                param: "tau".into(),
                value,
                meta_mean_first_gap: a,
                baseline_mean_first_gap: -a,
                meta_mean_gap_n6: g,
                baseline_mean_gap_n6: h,
                meta_mean_gap_n10: h,
                baseline_mean_gap_n10: g,
                meta_mean_infeasible: 1.5,
                baseline_mean_infeasible: 2.0,
            }];
            let dir = tempfile::tempdir().unwrap();
            let p = dir.path().join("summary.csv");
            save_summary(&p, &rows).unwrap();
            prop_assert_eq!(load_summary(&p).unwrap(), rows);
        }
    }

    #[test]
    fn header_mismatch_is_corrupt() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("agg.csv");
        std::fs::write(&p, "n,foo\n1,2\n").unwrap();
        assert!(matches!(load_aggregate(&p), Err(Error::CorruptFile { .. })));
        save_aggregate(&p, &[]).unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap().trim(), AGGREGATE_HEADER);
    }
}
