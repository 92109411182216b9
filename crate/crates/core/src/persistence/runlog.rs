use std::path::Path;

use crate::error::{Error, Result};
use crate::meta::SIMPLEX_TOL;
use crate::smgo::{IterationRecord, Mode, RunLog};

use super::write_atomic;

/// Column names: `n, x_1..x_d, z, c_1..c_S, z_best, gamma_f, mode, S_1..S_M`.
pub fn runlog_header(dim: usize, n_constraints: usize, n_tasks: usize) -> Vec<String> {
    let mut h = vec!["n".to_string()];
    h.extend((1..=dim).map(|j| format!("x_{j}")));
    h.push("z".into());
    h.extend((1..=n_constraints).map(|j| format!("c_{j}")));
    h.extend(["z_best".into(), "gamma_f".into(), "mode".into()]);
    h.extend((1..=n_tasks).map(|j| format!("S_{j}")));
    h
}

/// Serializes a run log as CSV text.
pub fn write_runlog(log: &RunLog) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Parse(e.to_string());
    w.write_record(runlog_header(log.dim, log.n_constraints, log.n_tasks)).map_err(csv_err)?;
    for r in &log.records {
        let mut row = vec![r.n.to_string()];
        row.extend(r.x.iter().map(f64::to_string));
        row.push(r.z.to_string());
        row.extend(r.c.iter().map(f64::to_string));
        row.push(r.z_best.map(|v| v.to_string()).unwrap_or_default());
        row.push(r.gamma_f.to_string());
        row.push(r.mode.as_str().into());
        match &r.similarity {
            Some(s) => row.extend(s.iter().map(f64::to_string)),
            None => row.extend(std::iter::repeat_n(String::new(), log.n_tasks)),
        }
        w.write_record(&row).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

pub fn save_runlog(path: &Path, log: &RunLog) -> Result<()> {
    write_atomic(path, write_runlog(log)?.as_bytes())
}

fn count_prefixed(header: &[String], at: usize, prefix: &str) -> usize {
    header[at.min(header.len())..]
        .iter()
        .take_while(|h| h.starts_with(prefix))
        .count()
}

fn parse_f64(cell: &str, field: &str) -> Result<f64> {
    let v: f64 = cell
        .parse()
        .map_err(|_| Error::corrupt(field, format!("`{cell}` is not a number")))?;
    if !v.is_finite() {
        return Err(Error::corrupt(field, format!("non-finite value `{cell}`")));
    }
    Ok(v)
}

/// Parses a run log and checks row numbering, monotone best values,
/// positive slopes and simplex similarity vectors.
pub fn parse_runlog(text: &str) -> Result<RunLog> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let header: Vec<String> = rdr
        .headers()
        .map_err(|e| Error::corrupt("header", e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    let dim = count_prefixed(&header, 1, "x_");
    let n_constraints = count_prefixed(&header, dim + 2, "c_");
    let n_tasks = count_prefixed(&header, dim + n_constraints + 5, "S_");
    if dim == 0 || header != runlog_header(dim, n_constraints, n_tasks) {
        return Err(Error::corrupt("header", format!("unexpected columns `{}`", header.join(","))));
    }
    let mut records: Vec<IterationRecord> = Vec::new();
    for (k, row) in rdr.records().enumerate() {
        let row = row.map_err(|e| Error::corrupt(format!("row {}", k + 1), e.to_string()))?;
        let cell = |j: usize| row.get(j).unwrap_or("");
        let at = |col: usize| format!("row {}, column {}", k + 1, header[col]);
        let n: usize = cell(0)
            .parse()
            .map_err(|_| Error::corrupt(at(0), format!("`{}` is not an iteration number", cell(0))))?;
        if n != k + 1 {
            return Err(Error::corrupt(at(0), format!("expected iteration {}, got {n}", k + 1)));
        }
        let floats = |from: usize, len: usize| -> Result<Vec<f64>> {
            (from..from + len).map(|j| parse_f64(cell(j), &at(j))).collect()
        };
        let x = floats(1, dim)?;
        let z = parse_f64(cell(dim + 1), &at(dim + 1))?;
        let c = floats(dim + 2, n_constraints)?;
        let zb_col = dim + n_constraints + 2;
        let z_best = match cell(zb_col) {
            "" => None,
            s => Some(parse_f64(s, &at(zb_col))?),
        };
        if let (Some(prev), None) = (records.last().and_then(|r| r.z_best), z_best) {
            return Err(Error::corrupt(at(zb_col), format!("best value {prev} disappeared")));
        }
        if let (Some(prev), Some(cur)) = (records.last().and_then(|r| r.z_best), z_best) {
            if cur > prev {
                return Err(Error::corrupt(at(zb_col), format!("best value rose from {prev} to {cur}")));
            }
        }
        let gamma_f = parse_f64(cell(zb_col + 1), &at(zb_col + 1))?;
        if gamma_f <= 0.0 {
            return Err(Error::corrupt(at(zb_col + 1), format!("must be positive, got {gamma_f}")));
        }
        let mode: Mode = cell(zb_col + 2)
            .parse()
            .map_err(|e: Error| Error::corrupt(at(zb_col + 2), e.to_string()))?;
        let s_col = zb_col + 3;
        let similarity = if n_tasks > 0 && (s_col..s_col + n_tasks).all(|j| !cell(j).is_empty()) {
            let s = floats(s_col, n_tasks)?;
            let sum: f64 = s.iter().sum();
            if s.iter().any(|v| *v < 0.0) || (sum - 1.0).abs() > SIMPLEX_TOL {
                return Err(Error::corrupt(format!("row {}, similarity", k + 1), format!("not a point of the simplex (sum {sum})")));
            }
            Some(s)
        } else if (s_col..s_col + n_tasks).all(|j| cell(j).is_empty()) {
            None
        } else {
            return Err(Error::corrupt(format!("row {}, similarity", k + 1), "partially empty"));
        };
        records.push(IterationRecord {
            n,
            x,
            z,
            c,
            z_best,
            gamma_f,
            mode,
            similarity,
        });
    }
    Ok(RunLog {
        dim,
        n_constraints,
        n_tasks,
        records,
    })
}

pub fn load_runlog(path: &Path) -> Result<RunLog> {
    parse_runlog(&super::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn record(n: usize, z_best: Option<f64>, s: Option<Vec<f64>>) -> IterationRecord {
        IterationRecord {
            n,
            x: vec![0.1 * n as f64, -1.0 / 3.0],
            z: 1.0 / 7.0,
            c: vec![-0.5, 2.0],
            z_best,
            gamma_f: 1e-6,
            mode: if n == 1 { Mode::Init } else { Mode::Exploration },
            similarity: s,
        }
    }

    #[test]
    fn header_order() {
        assert_eq!(
            runlog_header(2, 2, 3).join(","),
            "n,x_1,x_2,z,c_1,c_2,z_best,gamma_f,mode,S_1,S_2,S_3"
        );
        assert_eq!(runlog_header(2, 2, 0).join(","), "n,x_1,x_2,z,c_1,c_2,z_best,gamma_f,mode");
    }

    #[test]
    fn empty_cells_for_missing_values() {
        let log = RunLog {
            dim: 2,
            n_constraints: 2,
            n_tasks: 2,
            records: vec![record(1, None, None), record(2, Some(0.5), Some(vec![0.25, 0.75]))],
        };
        let text = write_runlog(&log).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[1].ends_with(",,0.000001,init,,"), "{}", lines[1]);
        assert_eq!(parse_runlog(&text).unwrap(), log);
    }

    #[test]
    fn rejects_bad_similarity_and_numbering() {
        let log = RunLog {
            dim: 2,
            n_constraints: 2,
            n_tasks: 2,
            records: vec![record(1, Some(1.0), Some(vec![0.5, 0.5]))],
        };
        let text = write_runlog(&log).unwrap();
        let bad = text.replace(",0.5,0.5", ",0.5,0.6");
        assert!(matches!(parse_runlog(&bad), Err(Error::CorruptFile { .. })));
        let bad = text.replacen("\n1,", "\n2,", 1);
        assert!(matches!(parse_runlog(&bad), Err(Error::CorruptFile { .. })));
        let bad = text.replace("x_2", "y_2");
        assert!(matches!(parse_runlog(&bad), Err(Error::CorruptFile { field, .. }) if field == "header"));
    }

    proptest! {
        #[test]
        fn round_trip(
            rows in prop::collection::vec(
                (prop::collection::vec(-5.0f64..5.0, 3), -1e6f64..1e6, prop::collection::vec(-1e3f64..1e3, 1), 1e-9f64..1e4, 0usize..3, prop::collection::vec(0.0f64..1.0, 4)),
                1..20,
            ),
            with_similarity in any::<bool>(),
        ) {
            let mut best: Option<f64> = None;
            let records = rows
                .into_iter()
                .enumerate()
                .map(|(k, (x, z, c, gamma_f, m, w))| {
                    if c[0] >= 0.0 {
                        best = Some(best.map_or(z, |b: f64| b.min(z)));
                    }
                    let total: f64 = w.iter().sum::<f64>() + 1e-3;
                    let mut s: Vec<f64> = w.iter().map(|v| (v + 2.5e-4) / total).collect();
                    let rest: f64 = s[..3].iter().sum();
                    s[3] = 1.0 - rest;
                    IterationRecord {
                        n: k + 1,
                        x,
                        z,
                        c,
                        z_best: best,
                        gamma_f,
                        mode: [Mode::Init, Mode::Exploitation, Mode::Exploration][m],
                        similarity: with_similarity.then_some(s),
                    }
                })
                .collect();
            let log = RunLog { dim: 3, n_constraints: 1, n_tasks: if with_similarity { 4 } else { 0 }, records };
            let back = parse_runlog(&write_runlog(&log).unwrap()).unwrap();
            prop_assert_eq!(back, log);
        }
    }
}
