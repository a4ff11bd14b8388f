use super::{Gap, Provenance, StatementId, Verdict, VerificationReport};
use crate::banach::{hausdorff_halfspaces, project_halfspace, sampled_hausdorff_halfspaces, HalfSpace, LinearFunctional, Norm, Space};
use crate::error::{check_dim, Error, Result};
use crate::functional::ProblemInstance;
use crate::rng;

const FIXED_POINT_STREAM: u64 = 0x66_6978;
const HAUSDORFF_STREAM: u64 = 0x68_6175;
const STEP_TOL: f64 = 1e-10;
/// Steps below this size are too noisy to enter the rate estimate.
const RATE_FLOOR: f64 = 1e-9;
const FEASIBILITY_TOL: f64 = 1e-9;
const RATE_SLACK: f64 = 0.05;
const HAUSDORFF_REL_TOL: f64 = 0.05;
const START_RADIUS: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub struct FixedPointRun {
    pub x_star: Vec<f64>,
    /// Largest ratio of successive step norms.
    pub rate: f64,
    /// Norm of every nonzero step taken.
    pub steps: Vec<f64>,
}

/// The sublevel half-space G(r − λψ(x)) = {y : φ(y) ≤ r − λψ(x)}.
fn image(inst: &ProblemInstance, lambda: f64, r: f64, x: &[f64]) -> HalfSpace {
    HalfSpace::new(inst.phi.clone(), r - lambda * inst.psi.eval_unchecked(x))
}

/// Whether x ∈ F(x) for F(x) = G(r − λψ(x)).
pub fn in_fixed_set(inst: &ProblemInstance, lambda: f64, r: f64, x: &[f64]) -> bool {
    image(inst, lambda, r, x).contains(x)
}

/// Iterates x ← projection of x onto G(r − λψ(x)) until a step drops below
/// 1e-10 or the point stops moving.
pub fn fixed_point_iterate(
    inst: &ProblemInstance,
    lambda: f64,
    r: f64,
    x0: &[f64],
    max_iters: usize,
) -> Result<FixedPointRun> {
    if !(lambda.abs() < 1.0) {
        return Err(Error::Hypothesis(format!("contraction needs |lambda| < 1, got {lambda}")));
    }
    if inst.space.norm_kind() != Norm::L2 {
        return Err(Error::Unsupported("fixed-point iteration needs the Euclidean norm".into()));
    }
    check_dim(inst.space.dim(), x0.len())?;
    let mut x = x0.to_vec();
    let mut steps = Vec::new();
    for _ in 0..max_iters {
        let next = project_halfspace(&x, &image(inst, lambda, r, &x), &inst.space)?;
        let step = inst.space.dist(&next, &x);
        x = next;
        if step == 0.0 {
            break;
        }
        steps.push(step);
        if step < STEP_TOL {
            break;
        }
    }
    let rate = steps
        .windows(2)
        .filter(|w| w[0] > RATE_FLOOR)
        .map(|w| w[1] / w[0])
        .fold(0.0, f64::max);
    Ok(FixedPointRun { x_star: x, rate, steps })
}

/// Runs the fixed-point iteration from `starts` random points per λ.
///
/// lhs is the worst observed rate minus |λ|, rhs is 0, and the tolerance is the
/// 0.05 rate slack. The verdict also requires every limit to be feasible to
/// 1e-9 and every sampled sublevel point to satisfy x ∈ F(x).
pub fn verify_fixed_point(
    inst: &ProblemInstance,
    lambdas: &[f64],
    r: f64,
    starts: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let n = inst.space.dim();
    let mut worst_excess = f64::NEG_INFINITY;
    let mut worst_infeasibility: f64 = 0.0;
    let mut sublevel_failures = 0usize;
    let mut sublevel_checked = 0usize;
    let mut series: Vec<(f64, f64)> = Vec::new();
    let mut iterations = 0u64;

    for (li, &lambda) in lambdas.iter().enumerate() {
        let mut rng = rng::stream(seed, &[FIXED_POINT_STREAM, li as u64]);
        for _ in 0..starts {
            let x0 = inst.space.sample_ball(START_RADIUS, &mut rng);
            let run = fixed_point_iterate(inst, lambda, r, &x0, 10_000)?;
            iterations += run.steps.len() as u64 + 1;
            worst_excess = worst_excess.max(run.rate - lambda.abs());
            worst_infeasibility = worst_infeasibility.max(inst.combined(lambda, &run.x_star) - r);
            if run.steps.len() > series.len() {
                series = run.steps.iter().enumerate().map(|(i, s)| (i as f64, *s)).collect();
            }
        }
        for _ in 0..starts.max(1) * 10 {
            let x = inst.space.sample_ball(START_RADIUS, &mut rng);
            if inst.combined(lambda, &x) <= r {
                sublevel_checked += 1;
                if !in_fixed_set(inst, lambda, r, &x) {
                    sublevel_failures += 1;
                }
            }
        }
    }
    if lambdas.is_empty() {
        worst_excess = 0.0;
    }

    let feasible = worst_infeasibility <= FEASIBILITY_TOL;
    let verdict = if worst_excess <= RATE_SLACK && feasible && sublevel_failures == 0 {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(VerificationReport {
        statement_id: StatementId::Thm2Fix,
        lhs: worst_excess,
        rhs: 0.0,
        gap: Gap::Value(worst_excess.max(0.0)),
        tolerance: RATE_SLACK,
        verdict,
        lhs_provenance: Provenance::Oracle,
        rhs_provenance: Provenance::ClosedForm,
        budget_used: iterations,
        series,
        notes: vec![
            format!("dimension {n}"),
            format!("max infeasibility {worst_infeasibility:e}"),
            format!("sublevel points checked {sublevel_checked}, failures {sublevel_failures}"),
        ],
    })
}

/// Compares the closed-form Hausdorff distance between G(t) and G(s) with the
/// direction-sampled estimate for every level pair. The gap is the largest
/// relative difference; the tolerance is 5%.
pub fn verify_hausdorff(
    phi: &LinearFunctional,
    space: &Space,
    levels: &[(f64, f64)],
    samples: usize,
    seed: u64,
) -> Result<VerificationReport> {
    let mut rng = rng::stream(seed, &[HAUSDORFF_STREAM, space.dim() as u64]);
    let mut worst = (0.0, 0.0, 0.0);
    for &(t, s) in levels {
        let closed = hausdorff_halfspaces(t, s, phi, space)?;
        let sampled = sampled_hausdorff_halfspaces(t, s, phi, space, samples, &mut rng)?;
        let rel = if closed == 0.0 {
            sampled.abs()
        } else {
            (sampled - closed).abs() / closed
        };
        if rel >= worst.2 {
            worst = (closed, sampled, rel);
        }
    }
    let (closed, sampled, rel) = worst;
    Ok(VerificationReport {
        statement_id: StatementId::Thm2Haus,
        lhs: closed,
        rhs: sampled,
        gap: Gap::Value(rel),
        tolerance: HAUSDORFF_REL_TOL,
        verdict: if rel <= HAUSDORFF_REL_TOL { Verdict::Pass } else { Verdict::Fail },
        lhs_provenance: Provenance::ClosedForm,
        rhs_provenance: Provenance::Oracle,
        budget_used: (samples * levels.len()) as u64,
        series: Vec::new(),
        notes: Vec::new(),
    })
}
