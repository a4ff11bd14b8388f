use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::run::Record;
use crate::error::{Error, Result};
use crate::theorems::StatementId;

/// CSV tables derived from a report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlotTables {
    /// `instance,R,shell_inf`
    pub shells: String,
    /// `instance,iteration,step_norm`
    pub fixed_point: String,
    /// `instance,gamma,lhs,rhs,gap`
    pub minimax: String,
}

pub fn plot_tables(records: &[Record]) -> PlotTables {
    let mut shells = String::from("instance,R,shell_inf\n");
    let mut fixed_point = String::from("instance,iteration,step_norm\n");
    let mut minimax = String::from("instance,gamma,lhs,rhs,gap\n");
    for r in records {
        match r.statement_id {
            StatementId::Thm4Eq4 => {
                for (radius, v) in &r.series {
                    let _ = writeln!(shells, "{},{},{}", r.instance, radius, v);
                }
            }
            StatementId::Thm2Fix => {
                for (k, v) in &r.series {
                    let _ = writeln!(fixed_point, "{},{},{}", r.instance, k, v);
                }
            }
            StatementId::Thm1 => {
                let gamma = r.gamma.map_or_else(String::new, |g| g.to_string());
                let _ = writeln!(minimax, "{},{},{},{},{}", r.instance, gamma, r.lhs, r.rhs, r.gap);
            }
            _ => {}
        }
    }
    PlotTables {
        shells,
        fixed_point,
        minimax,
    }
}

/// Writes `thm4_4.csv`, `thm2_fix.csv` and `thm1.csv` into `dir`, headers
/// included even when a table is empty.
pub fn emit_plotdata(records: &[Record], dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io {
        path: dir.display().to_string(),
        message: e.to_string(),
    })?;
    let t = plot_tables(records);
    let files = [("thm4_4.csv", t.shells), ("thm2_fix.csv", t.fixed_point), ("thm1.csv", t.minimax)];
    files
        .into_iter()
        .map(|(name, body)| {
            let path = dir.join(name);
            std::fs::write(&path, body).map_err(|e| Error::Io {
                path: path.display().to_string(),
                message: e.to_string(),
            })?;
            Ok(path)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::run::Num;
    use crate::theorems::{Provenance, Verdict};

    fn record(id: StatementId, series: Vec<(f64, f64)>) -> Record {
        Record {
            statement_id: id,
            instance: 0,
            gamma: None,
            seed: 1,
            lhs: Num::new(0.0),
            rhs: Num::new(0.0),
            gap: Num::new(0.0),
            tolerance: Num::new(1e-3),
            verdict: Verdict::Pass,
            lhs_provenance: Provenance::Optimizer,
            rhs_provenance: Provenance::Optimizer,
            budget_used: 0,
            series: series.into_iter().map(|(a, b)| (Num::new(a), Num::new(b))).collect(),
            notes: Vec::new(),
        }
    }

    #[test]
    fn empty_stream_gives_headers_only() {
        let t = plot_tables(&[]);
        assert_eq!(t.shells, "instance,R,shell_inf\n");
        assert_eq!(t.fixed_point.lines().count(), 1);
        assert_eq!(t.minimax.lines().count(), 1);
    }

    #[test]
    fn one_row_per_series_point() {
        let steps: Vec<(f64, f64)> = (0..30).map(|k| (k as f64, 0.5f64.powi(k))).collect();
        let shells = vec![(1.0, 0.1), (10.0, 0.01), (100.0, 0.001), (1000.0, 0.0001)];
        let t = plot_tables(&[record(StatementId::Thm2Fix, steps), record(StatementId::Thm4Eq4, shells)]);
        assert_eq!(t.fixed_point.lines().count(), 31);
        assert_eq!(t.shells.lines().count(), 5);
        assert_eq!(t.shells.lines().nth(4), Some("0,1000,0.0001"));
    }

    #[test]
    fn writes_three_files() {
        let dir = tempfile::tempdir().unwrap();
        let paths = emit_plotdata(&[], dir.path()).unwrap();
        assert_eq!(paths.len(), 3);
        for p in paths {
            assert!(std::fs::read_to_string(p).unwrap().ends_with('\n'));
        }
    }
}
