use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, Planned};
use crate::error::{Error, Result};
use crate::gamma::GammaFn;
use crate::theorems::{
    check_nonattainment, verify_fixed_point, verify_hausdorff, verify_theorem1, verify_theorem3, verify_theorem4,
    verify_unbounded, Gap, Provenance, StatementId, Verdict, VerificationReport,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_FAIL: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

/// A report number: finite values rounded to 12 significant digits, other
/// values as the strings `"-inf"`, `"inf"`, `"nan"`, `"both -inf"` or
/// `"undefined"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Value(f64),
    Label(String),
}

impl Num {
    pub fn new(v: f64) -> Self {
        if v.is_finite() {
            Num::Value(round12(v))
        } else if v.is_nan() {
            Num::Label("nan".into())
        } else if v > 0.0 {
            Num::Label("inf".into())
        } else {
            Num::Label("-inf".into())
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Num::Value(v) => *v,
            Num::Label(l) => match l.as_str() {
                "-inf" | "both -inf" => f64::NEG_INFINITY,
                "inf" => f64::INFINITY,
                _ => f64::NAN,
            },
        }
    }
}

impl std::fmt::Display for Num {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Num::Value(v) => write!(f, "{v}"),
            Num::Label(l) => f.write_str(l),
        }
    }
}

fn round12(v: f64) -> f64 {
    format!("{v:.11e}").parse().expect("formatted float parses")
}

/// One line of the report file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Record {
    pub statement_id: StatementId,
    pub instance: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<usize>,
    pub seed: u64,
    pub lhs: Num,
    pub rhs: Num,
    pub gap: Num,
    pub tolerance: Num,
    pub verdict: Verdict,
    pub lhs_provenance: Provenance,
    pub rhs_provenance: Provenance,
    pub budget_used: u64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub series: Vec<(Num, Num)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Record {
    pub fn new(report: VerificationReport, instance: usize, gamma: Option<usize>, seed: u64) -> Self {
        let gap = match report.gap {
            Gap::Value(g) => Num::new(g),
            Gap::BothNegInf => Num::Label("both -inf".into()),
            Gap::Undefined => Num::Label("undefined".into()),
        };
        Self {
            statement_id: report.statement_id,
            instance,
            gamma,
            seed,
            lhs: Num::new(report.lhs),
            rhs: Num::new(report.rhs),
            gap,
            tolerance: Num::new(report.tolerance),
            verdict: report.verdict,
            lhs_provenance: report.lhs_provenance,
            rhs_provenance: report.rhs_provenance,
            budget_used: report.budget_used,
            series: report.series.iter().map(|&(a, b)| (Num::new(a), Num::new(b))).collect(),
            notes: report.notes,
        }
    }
}

/// Exit code for a set of verdicts: 0 when all pass, 2 on any failure, 3 on
/// any inconclusive verdict without failures.
pub fn exit_code(records: &[Record]) -> i32 {
    if records.iter().any(|r| r.verdict == Verdict::Fail) {
        EXIT_FAIL
    } else if records.iter().any(|r| r.verdict == Verdict::Inconclusive) {
        EXIT_INCONCLUSIVE
    } else {
        EXIT_PASS
    }
}

/// Runs every requested verifier on every planned instance. Records come
/// back ordered by statement, instance and γ index.
pub fn run_config(cfg: &ExperimentConfig) -> Result<Vec<Record>> {
    cfg.validate()?;
    if cfg.statements.is_empty() {
        return Ok(Vec::new());
    }
    let gammas = cfg.gammas()?;
    let mut records = Vec::new();
    for planned in cfg.plan()? {
        run_instance(cfg, &gammas, &planned, &mut records)?;
    }
    records.sort_by_key(|r| (r.statement_id, r.instance, r.gamma));
    Ok(records)
}

fn run_instance(cfg: &ExperimentConfig, gammas: &[GammaFn], p: &Planned, out: &mut Vec<Record>) -> Result<()> {
    let inst = &p.instance;
    let budget = cfg.budget.build(p.seed)?;
    let tol = &cfg.tolerance;
    let wants = |id: StatementId| cfg.statements.contains(&id);

    for &gi in &p.gammas {
        let g = &gammas[gi];
        if wants(StatementId::Thm1) {
            out.push(Record::new(verify_theorem1(inst, g, &budget, tol)?, p.index, Some(gi), p.seed));
        }
        if wants(StatementId::Thm3) && g.strictly_increasing_deriv() {
            out.push(Record::new(verify_theorem3(inst, g, &budget, tol)?, p.index, Some(gi), p.seed));
        }
    }
    if cfg.statements.iter().any(|id| id.is_theorem4()) {
        for rep in verify_theorem4(inst, &budget, tol)? {
            if wants(rep.statement_id) {
                out.push(Record::new(rep, p.index, None, p.seed));
            }
        }
    }
    if wants(StatementId::Thm2Fix) && inst.space.norm_kind() == crate::banach::Norm::L2 {
        let prm = &cfg.params;
        let rep = verify_fixed_point(inst, &prm.fix_lambdas, prm.fix_r, prm.fix_starts, p.seed)?;
        out.push(Record::new(rep, p.index, None, p.seed));
    }
    if wants(StatementId::Thm2Haus) {
        let prm = &cfg.params;
        let rep = verify_hausdorff(&inst.phi, &inst.space, &prm.hausdorff_levels, prm.hausdorff_samples, p.seed)?;
        out.push(Record::new(rep, p.index, None, p.seed));
    }
    if wants(StatementId::Prop1) {
        let rep = check_nonattainment(inst, cfg.params.prop1_r, &budget, tol)?;
        out.push(Record::new(rep, p.index, None, p.seed));
    }
    if wants(StatementId::Prop21) {
        let lambda = cfg.params.unbounded_lambda_for(inst.regime);
        out.push(Record::new(verify_unbounded(inst, lambda, &budget, tol)?, p.index, None, p.seed));
    }
    Ok(())
}

/// The report as JSON lines.
pub fn to_jsonl(records: &[Record]) -> String {
    let mut s = String::new();
    for r in records {
        s.push_str(&serde_json::to_string(r).expect("records serialize"));
        s.push('\n');
    }
    s
}

/// Parses a JSON-lines report. Blank lines are skipped.
pub fn parse_jsonl(src: &str) -> Result<Vec<Record>> {
    src.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| Error::Parse {
                line: i + 1,
                column: e.column(),
                message: e.to_string(),
            })
        })
        .collect()
}

/// Fixed-width table of the records followed by verdict counts.
pub fn summary_table(records: &[Record]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<9} {:>8} {:>5} {:>20} {:>20} {:>20} {:<12}",
        "statement", "instance", "gamma", "lhs", "rhs", "gap", "verdict"
    );
    for r in records {
        let gamma = r.gamma.map_or_else(|| "-".to_string(), |g| g.to_string());
        let verdict = serde_json::to_value(r.verdict).expect("verdict serializes");
        let _ = writeln!(
            s,
            "{:<9} {:>8} {:>5} {:>20} {:>20} {:>20} {:<12}",
            r.statement_id.as_str(),
            r.instance,
            gamma,
            r.lhs.to_string(),
            r.rhs.to_string(),
            r.gap.to_string(),
            verdict.as_str().unwrap_or_default()
        );
    }
    let count = |v: Verdict| records.iter().filter(|r| r.verdict == v).count();
    let _ = writeln!(
        s,
        "PASS {}  FAIL {}  INCONCLUSIVE {}  exit {}",
        count(Verdict::Pass),
        count(Verdict::Fail),
        count(Verdict::Inconclusive),
        exit_code(records)
    );
    s
}

/// Paths written by [`run`].
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub records: Vec<Record>,
    pub report_path: PathBuf,
    pub summary_path: PathBuf,
    pub summary: String,
    pub exit_code: i32,
}

fn io_err(path: &Path, e: std::io::Error) -> Error {
    Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

/// Reads a config file, runs it, and writes the report plus a
/// `.summary.txt` table next to it. `output` overrides the configured path.
pub fn run(config_path: &Path, output: Option<&Path>) -> Result<RunOutput> {
    let src = std::fs::read_to_string(config_path).map_err(|e| io_err(config_path, e))?;
    let cfg = ExperimentConfig::parse(&src)?;
    let report_path = match output {
        Some(p) => p.to_path_buf(),
        None if cfg.output.is_absolute() => cfg.output.clone(),
        None => config_path.parent().unwrap_or(Path::new(".")).join(&cfg.output),
    };
    let records = run_config(&cfg)?;
    let summary = summary_table(&records);
    let summary_path = report_path.with_extension("summary.txt");
    std::fs::write(&report_path, to_jsonl(&records)).map_err(|e| io_err(&report_path, e))?;
    std::fs::write(&summary_path, &summary).map_err(|e| io_err(&summary_path, e))?;
    Ok(RunOutput {
        exit_code: exit_code(&records),
        records,
        report_path,
        summary_path,
        summary,
    })
}
