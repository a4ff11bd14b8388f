use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::banach::{LinearFunctional, Norm, Space};
use crate::error::{Error, Result};
use crate::functional::{generate_instance, parse_node, LipschitzFn, ProblemInstance, Regime};
use crate::gamma::{GammaFn, GammaSpec};
use crate::optimizer::SearchBudget;
use crate::rng;
use crate::theorems::{StatementId, Tolerances};

/// Exponent p as a number or the tag `"inf"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Exponent {
    Value(f64),
    Tag(String),
}

impl Exponent {
    pub fn norm(&self) -> Result<Norm> {
        match self {
            Exponent::Value(p) => Norm::from_exponent(*p),
            Exponent::Tag(t) => Norm::parse_tag(t),
        }
    }
}

impl From<Norm> for Exponent {
    fn from(norm: Norm) -> Self {
        match norm {
            Norm::LInf => Exponent::Tag("inf".into()),
            other => Exponent::Value(other.exponent()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceSpec {
    pub n: usize,
    pub p: Exponent,
}

/// One explicit instance: φ coefficients and ψ in the expression grammar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSpec {
    pub phi: Vec<f64>,
    pub psi: String,
    #[serde(default = "default_regime")]
    pub regime: Regime,
}

/// Seeded random instances. Instance k uses dimension `dims[k % len]` and
/// norm `norms[(k / dims.len()) % len]`, so all combinations appear.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteSpec {
    pub count: usize,
    #[serde(default = "default_dims")]
    pub dims: Vec<usize>,
    #[serde(default = "default_norms")]
    pub norms: Vec<Exponent>,
    #[serde(default = "default_regime")]
    pub regime: Regime,
}

/// Budget overrides; the seed always comes from the instance seed.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub starts: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iters_per_start: Option<usize>,
    /// Defaults to the decades 1, 10, …, 10^7.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radii: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stall_tol: Option<f64>,
}

impl BudgetSpec {
    pub fn build(&self, seed: u64) -> Result<SearchBudget> {
        let mut b = SearchBudget::default().with_decades(DEFAULT_MAX_DECADE).with_seed(seed);
        if let Some(s) = self.starts {
            b.starts = s;
        }
        if let Some(i) = self.iters_per_start {
            b.iters_per_start = i;
        }
        if let Some(r) = &self.radii {
            b.radii = r.clone();
        }
        if let Some(t) = self.stall_tol {
            b.stall_tol = t;
        }
        b.validate()?;
        Ok(b)
    }
}

const DEFAULT_MAX_DECADE: i32 = 7;

/// Statement-specific parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default = "default_fix_lambdas")]
    pub fix_lambdas: Vec<f64>,
    #[serde(default)]
    pub fix_r: f64,
    #[serde(default = "default_fix_starts")]
    pub fix_starts: usize,
    #[serde(default = "default_prop1_r")]
    pub prop1_r: f64,
    /// λ of the unboundedness check; defaults to 0.5 (`EQUAL`) or 1 (`STRICT_LESS`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unbounded_lambda: Option<f64>,
    #[serde(default = "default_hausdorff_samples")]
    pub hausdorff_samples: usize,
    #[serde(default = "default_hausdorff_levels")]
    pub hausdorff_levels: Vec<(f64, f64)>,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            fix_lambdas: default_fix_lambdas(),
            fix_r: 0.0,
            fix_starts: default_fix_starts(),
            prop1_r: default_prop1_r(),
            unbounded_lambda: None,
            hausdorff_samples: default_hausdorff_samples(),
            hausdorff_levels: default_hausdorff_levels(),
        }
    }
}

impl Params {
    pub fn unbounded_lambda_for(&self, regime: Regime) -> f64 {
        self.unbounded_lambda.unwrap_or(match regime {
            Regime::Equal => 0.5,
            Regime::StrictLess => 1.0,
        })
    }
}

fn default_regime() -> Regime {
    Regime::Equal
}

fn default_dims() -> Vec<usize> {
    vec![1, 2, 3]
}

fn default_norms() -> Vec<Exponent> {
    vec![Exponent::Value(1.0), Exponent::Value(2.0), Exponent::Tag("inf".into())]
}

fn default_fix_lambdas() -> Vec<f64> {
    vec![0.3, 0.5, 0.9]
}

fn default_fix_starts() -> usize {
    100
}

fn default_prop1_r() -> f64 {
    2.0
}

fn default_hausdorff_samples() -> usize {
    10_000
}

fn default_hausdorff_levels() -> Vec<(f64, f64)> {
    vec![(-1.0, 2.0), (0.0, 5.0)]
}

fn default_output() -> PathBuf {
    PathBuf::from("report.jsonl")
}

fn default_gammas() -> Vec<GammaSpec> {
    vec![GammaSpec::from(&GammaFn::entropy(-1.0, 1.0).expect("valid interval"))]
}

/// A verification run. Exactly one of `instance` (with `space`) or `suite`
/// must be given unless `statements` is empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub statements: Vec<StatementId>,
    /// Report path; relative paths resolve against the config file's directory.
    #[serde(default = "default_output")]
    pub output: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub space: Option<SpaceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance: Option<InstanceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suite: Option<SuiteSpec>,
    /// γ list. A single instance runs every entry; suite instance k runs
    /// entry `k % len`. Defaults to entropy on [−1, 1].
    #[serde(default = "default_gammas")]
    pub gamma: Vec<GammaSpec>,
    #[serde(default)]
    pub budget: BudgetSpec,
    #[serde(default)]
    pub tolerance: Tolerances,
    #[serde(default)]
    pub params: Params,
}

/// One instance of a run with its derived seed.
#[derive(Debug, Clone, PartialEq)]
pub struct Planned {
    pub index: usize,
    pub seed: u64,
    pub instance: ProblemInstance,
    /// Indices into the γ list.
    pub gammas: Vec<usize>,
}

impl ExperimentConfig {
    /// Parses TOML text. Errors carry the 1-based line and column.
    pub fn parse(src: &str) -> Result<Self> {
        toml::from_str(src).map_err(|e| {
            let (line, column) = e.span().map_or((1, 1), |s| line_col(src, s.start));
            Error::Parse {
                line,
                column,
                message: e.message().to_string(),
            }
        })
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::InvalidInput(e.to_string()))
    }

    pub fn regime(&self) -> Option<Regime> {
        match (&self.instance, &self.suite) {
            (Some(i), _) => Some(i.regime),
            (None, Some(s)) => Some(s.regime),
            _ => None,
        }
    }

    pub fn gammas(&self) -> Result<Vec<GammaFn>> {
        self.gamma.iter().map(GammaSpec::build).collect()
    }

    /// Checks every precondition that can be decided before running.
    pub fn validate(&self) -> Result<()> {
        self.tolerance_ok()?;
        if self.gamma.is_empty() {
            return Err(Error::InvalidInput("the gamma list must not be empty".into()));
        }
        let gammas = self.gammas()?;
        if self.statements.is_empty() {
            return Ok(());
        }
        if self.instance.is_some() == self.suite.is_some() {
            return Err(Error::InvalidInput("give exactly one of [instance] or [suite]".into()));
        }
        if self.instance.is_some() && self.space.is_none() {
            return Err(Error::InvalidInput("[instance] needs a [space] table".into()));
        }
        if let Some(s) = &self.suite {
            if s.count == 0 || s.dims.is_empty() || s.norms.is_empty() || s.dims.contains(&0) {
                return Err(Error::InvalidInput("suite needs a positive count, dims and norms".into()));
            }
            for p in &s.norms {
                p.norm()?;
            }
        }
        let regime = self.regime().expect("instance or suite present");
        for id in &self.statements {
            let needs_equal = matches!(id, StatementId::Thm1 | StatementId::Thm3) || id.is_theorem4();
            if needs_equal && regime != Regime::Equal {
                return Err(Error::Hypothesis(format!("{id} needs regime EQUAL")));
            }
        }
        if self.statements.contains(&StatementId::Thm3) && !gammas.iter().any(GammaFn::strictly_increasing_deriv) {
            return Err(Error::Unsupported("THM3 needs a gamma with strictly increasing derivative".into()));
        }
        if self.statements.contains(&StatementId::Thm2Fix) {
            if let Some(l) = self.params.fix_lambdas.iter().find(|l| !(l.abs() < 1.0)) {
                return Err(Error::Hypothesis(format!("fixed-point lambda {l} needs |lambda| < 1")));
            }
            if let (Some(_), Some(space)) = (&self.instance, &self.space) {
                if space.p.norm()? != Norm::L2 {
                    return Err(Error::Unsupported("THM2_FIX needs p = 2".into()));
                }
            }
        }
        if self.statements.contains(&StatementId::Prop21) {
            let l = self.params.unbounded_lambda_for(regime);
            let ok = match regime {
                Regime::Equal => l.abs() < 1.0,
                Regime::StrictLess => l.abs() <= 1.0,
            };
            if !ok {
                return Err(Error::Hypothesis(format!("no unboundedness ray for lambda {l} in this regime")));
            }
        }
        self.budget.build(self.seed)?;
        self.plan()?;
        Ok(())
    }

    fn tolerance_ok(&self) -> Result<()> {
        let t = &self.tolerance;
        if !(t.optimizer > 0.0 && t.closed_form > 0.0) {
            return Err(Error::InvalidInput("tolerances must be positive".into()));
        }
        Ok(())
    }

    /// Builds the instances of the run.
    pub fn plan(&self) -> Result<Vec<Planned>> {
        let all: Vec<usize> = (0..self.gamma.len()).collect();
        if let Some(inst) = &self.instance {
            let spec = self
                .space
                .as_ref()
                .ok_or_else(|| Error::InvalidInput("[instance] needs a [space] table".into()))?;
            let space = Space::new(spec.n, spec.p.norm()?)?;
            let psi = LipschitzFn::new(space, parse_node(&inst.psi)?)?;
            let phi = LinearFunctional::new(inst.phi.clone())?;
            let instance = ProblemInstance::new(space, phi, psi, inst.regime)?;
            return Ok(vec![Planned {
                index: 0,
                seed: self.seed,
                instance,
                gammas: all,
            }]);
        }
        let Some(suite) = &self.suite else {
            return Ok(Vec::new());
        };
        (0..suite.count)
            .map(|k| {
                let n = suite.dims[k % suite.dims.len()];
                let norm = suite.norms[(k / suite.dims.len()) % suite.norms.len()].norm()?;
                let seed = rng::derive_seed(self.seed, &[k as u64]);
                let instance = generate_instance(seed, Space::new(n, norm)?, suite.regime)?;
                Ok(Planned {
                    index: k,
                    seed,
                    instance,
                    gammas: vec![k % self.gamma.len()],
                })
            })
            .collect()
    }
}

fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

/// A config for one generated instance, as TOML text.
pub fn config_skeleton(seed: u64, regime: Regime, n: usize, norm: Norm) -> Result<String> {
    let inst = generate_instance(seed, Space::new(n, norm)?, regime)?;
    let statements = match regime {
        Regime::Equal => vec![StatementId::Thm1, StatementId::Thm4Eq3],
        Regime::StrictLess => vec![StatementId::Prop21],
    };
    let cfg = ExperimentConfig {
        seed,
        statements,
        output: default_output(),
        space: Some(SpaceSpec {
            n,
            p: norm.into(),
        }),
        instance: Some(InstanceSpec {
            phi: inst.phi.coeffs().to_vec(),
            psi: inst.psi.to_string(),
            regime,
        }),
        suite: None,
        gamma: default_gammas(),
        budget: BudgetSpec::default(),
        tolerance: Tolerances::default(),
        params: Params::default(),
    };
    cfg.to_toml()
}
