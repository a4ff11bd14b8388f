//! Budgeted global infimum estimation over R^n.
//!
//! [`estimate_inf`] runs a derivative-free pattern search from many random
//! starts inside each ball of an increasing radius schedule. The sequence of
//! per-radius best values decides the outcome:
//!
//! * a clearly negative slope of best value against radius, confirmed by a
//!   sampled ray certificate, gives [`InfStatus::UnboundedBelow`];
//! * a stall between the last two radii gives [`InfStatus::Finite`];
//! * anything else is [`InfStatus::Inconclusive`].
//!
//! Starts within one radius run in parallel. Each start owns a random stream
//! derived from `(seed, radius index, start index)` and the per-radius
//! reduction picks the minimum by `(value, witness)` lexicographically, so the
//! result does not depend on scheduling.

use std::cmp::Ordering;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::banach::{dual_norm, norming_direction, Space};
use crate::error::{check_dim, Error, Result};
use crate::functional::{ProblemInstance, Regime};
use crate::rng;

/// Sample points of the sampled ray certificate.
pub const RAY_SAMPLES: [f64; 4] = [1.0, 10.0, 100.0, 1000.0];
/// Relative slack of the ray certificate.
pub const RAY_SLACK: f64 = 0.01;
/// Fitted slope (per unit radius) below which a search suspects unboundedness.
pub const UNBOUNDED_SLOPE: f64 = -1e-6;

const INITIAL_STEP: f64 = 1.0;
const MIN_STEP: f64 = 1e-9;
const START_REJECTION_TRIES: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchBudget {
    pub starts: usize,
    pub iters_per_start: usize,
    /// Strictly increasing ball radii.
    pub radii: Vec<f64>,
    pub seed: u64,
    /// Relative improvement between the last two radii below which the
    /// infimum is declared finite.
    #[serde(default = "default_stall_tol")]
    pub stall_tol: f64,
}

fn default_stall_tol() -> f64 {
    1e-6
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            starts: 32,
            iters_per_start: 2000,
            radii: vec![1.0, 10.0, 100.0, 1000.0],
            seed: 0,
            stall_tol: default_stall_tol(),
        }
    }
}

impl SearchBudget {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Decade radii 1, 10, …, 10^max_exp. Infima approached at rate 1/R
    /// need radii around 10^7 before their improvements stall below 1e-6.
    pub fn with_decades(mut self, max_exp: i32) -> Self {
        self.radii = (0..=max_exp).map(|k| 10f64.powi(k)).collect();
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.starts == 0 || self.iters_per_start == 0 {
            return Err(Error::InvalidInput("budget starts and iterations must be positive".into()));
        }
        if self.radii.is_empty() || self.radii.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
            return Err(Error::InvalidInput("budget radii must be positive and finite".into()));
        }
        if self.radii.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidInput("budget radii must be strictly increasing".into()));
        }
        if !(self.stall_tol > 0.0) {
            return Err(Error::InvalidInput("stall tolerance must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum InfStatus {
    Finite,
    UnboundedBelow,
    Inconclusive,
}

/// A ray along which an objective decreases at least at rate `-slope`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ray {
    pub base: Vec<f64>,
    pub direction: Vec<f64>,
    pub slope: f64,
}

impl Ray {
    pub fn point(&self, t: f64) -> Vec<f64> {
        self.base.iter().zip(&self.direction).map(|(b, d)| b + t * d).collect()
    }
}

/// Best point found inside one ball of the radius schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiusBest {
    pub radius: f64,
    pub value: f64,
    pub witness: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InfResult {
    pub status: InfStatus,
    /// The infimum estimate; −∞ when unbounded below. For inconclusive
    /// searches this is the best value seen.
    pub value: f64,
    pub witness: Option<Vec<f64>>,
    pub ray: Option<Ray>,
    /// Objective evaluations spent.
    pub budget_used: u64,
    pub trajectory: Vec<RadiusBest>,
}

impl InfResult {
    /// Wraps a ray that passed [`certify_ray`].
    pub fn unbounded(ray: Ray, budget_used: u64) -> Self {
        Self {
            status: InfStatus::UnboundedBelow,
            value: f64::NEG_INFINITY,
            witness: None,
            ray: Some(ray),
            budget_used,
            trajectory: Vec::new(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.status == InfStatus::Finite
    }

    pub fn is_unbounded(&self) -> bool {
        self.status == InfStatus::UnboundedBelow
    }
}

/// Sampled ray certificate: the objective at `base + t·direction` must sit at
/// or below `objective(base) + slope·t·(1 − 0.01)` for t ∈ {1, 10, 100, 1000}.
pub fn certify_ray<F>(objective: &F, ray: &Ray) -> bool
where
    F: Fn(&[f64]) -> f64 + ?Sized,
{
    if !(ray.slope < 0.0) {
        return false;
    }
    let f0 = objective(&ray.base);
    if !f0.is_finite() {
        return false;
    }
    RAY_SAMPLES.iter().all(|&t| {
        let ft = objective(&ray.point(t));
        ft <= f0 + ray.slope * t * (1.0 - RAY_SLACK)
    })
}

/// Analytic unboundedness ray for φ + λψ.
///
/// Along d = −(norming direction of φ), φ drops at rate ‖φ‖ while λψ can rise
/// at most at rate |λ|L, so the slope −(‖φ‖ − |λ|L) is an upper bound on the
/// decay. Available in the `Equal` regime for |λ| < 1 and in the `StrictLess`
/// regime for |λ| ≤ 1; `None` otherwise.
pub fn unboundedness_certificate(inst: &ProblemInstance, lambda: f64) -> Option<Ray> {
    let applies = match inst.regime {
        Regime::Equal => lambda.abs() < 1.0,
        Regime::StrictLess => lambda.abs() <= 1.0,
    };
    if !applies {
        return None;
    }
    let dn = dual_norm(&inst.phi, &inst.space).ok()?;
    let slope = -(dn - lambda.abs() * inst.psi.lip_bound());
    if !(slope < 0.0) {
        return None;
    }
    let d = norming_direction(&inst.phi, &inst.space).ok()?;
    Some(Ray {
        base: vec![0.0; inst.space.dim()],
        direction: d.into_iter().map(|v| -v).collect(),
        slope,
    })
}

/// Global infimum estimate of `objective` over R^n.
pub fn estimate_inf<F>(objective: &F, space: &Space, budget: &SearchBudget) -> Result<InfResult>
where
    F: Fn(&[f64]) -> f64 + Sync + ?Sized,
{
    search(objective, None::<&fn(&[f64]) -> bool>, &[], space, budget)
        .map(|r| r.expect("unconstrained search always has a start"))
}

/// Infimum estimate over the region `{x : feasible(x)}`.
///
/// Random starts are rejection-sampled and moves leaving the region are
/// discarded. `seeds` are extra feasible starting points. Returns `None` when
/// no feasible point was found at any radius (the region is treated as empty).
pub fn estimate_inf_in<F, R>(
    objective: &F,
    feasible: &R,
    seeds: &[Vec<f64>],
    space: &Space,
    budget: &SearchBudget,
) -> Result<Option<InfResult>>
where
    F: Fn(&[f64]) -> f64 + Sync + ?Sized,
    R: Fn(&[f64]) -> bool + Sync + ?Sized,
{
    search(objective, Some(feasible), seeds, space, budget)
}

fn search<F, R>(
    objective: &F,
    feasible: Option<&R>,
    seeds: &[Vec<f64>],
    space: &Space,
    budget: &SearchBudget,
) -> Result<Option<InfResult>>
where
    F: Fn(&[f64]) -> f64 + Sync + ?Sized,
    R: Fn(&[f64]) -> bool + Sync + ?Sized,
{
    budget.validate()?;
    for s in seeds {
        check_dim(space.dim(), s.len())?;
    }
    let n = space.dim();
    let allowed = |x: &[f64]| feasible.is_none_or(|f| f(x));
    let guarded = |x: &[f64]| {
        if !allowed(x) {
            return f64::INFINITY;
        }
        let v = objective(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut trajectory: Vec<RadiusBest> = Vec::new();
    let mut evals = 0u64;
    let mut warm: Option<Vec<f64>> = None;

    for (ri, &radius) in budget.radii.iter().enumerate() {
        let project = |x: &mut [f64]| project_ball(space, radius, x);
        let outcomes: Vec<Option<Local>> = (0..budget.starts)
            .into_par_iter()
            .map(|si| {
                let mut rng = rng::stream(budget.seed, &[ri as u64, si as u64]);
                let start = if si == 0 {
                    warm.clone().or_else(|| Some(vec![0.0; n])).filter(|x| allowed(x))
                } else {
                    None
                }
                .or_else(|| {
                    (0..START_REJECTION_TRIES)
                        .map(|_| space.sample_ball(radius, &mut rng))
                        .find(|x| allowed(x))
                })?;
                Some(pattern_search(
                    &guarded,
                    start,
                    &project,
                    budget.iters_per_start,
                    radius,
                    &mut rng,
                ))
            })
            .collect();
        let seeded: Vec<Local> = seeds
            .iter()
            .filter(|s| space.norm(s) <= radius && allowed(s))
            .enumerate()
            .map(|(k, s)| {
                let mut rng = rng::stream(budget.seed, &[ri as u64, (budget.starts + k) as u64]);
                pattern_search(&guarded, s.clone(), &project, budget.iters_per_start, radius, &mut rng)
            })
            .collect();

        let mut best: Option<Local> = None;
        for local in outcomes.into_iter().flatten().chain(seeded) {
            evals += local.evals;
            if !local.fx.is_finite() && local.fx > 0.0 {
                continue;
            }
            if best.as_ref().is_none_or(|b| better(&local, b)) {
                best = Some(local);
            }
        }
        if let Some(b) = best {
            warm = Some(b.x.clone());
            trajectory.push(RadiusBest {
                radius,
                value: b.fx,
                witness: b.x,
            });
        }
    }

    let Some(last) = trajectory.last().cloned() else {
        return Ok(None);
    };
    let mut result = InfResult {
        status: InfStatus::Inconclusive,
        value: last.value,
        witness: Some(last.witness.clone()),
        ray: None,
        budget_used: evals,
        trajectory,
    };
    classify(&mut result, &guarded, space, budget);
    Ok(Some(result))
}

fn classify<F>(result: &mut InfResult, objective: &F, space: &Space, budget: &SearchBudget)
where
    F: Fn(&[f64]) -> f64,
{
    let traj = &result.trajectory;
    let k = traj.len();
    if k < 2 {
        return;
    }
    let window = &traj[k.saturating_sub(3)..];
    if fitted_slope(window) <= UNBOUNDED_SLOPE {
        // Continue outward from the last best point along the last transition;
        // a decrease that is levelling off fails the sampled certificate.
        let from = &traj[k - 2];
        let tip = &traj[k - 1];
        let diff: Vec<f64> = tip.witness.iter().zip(&from.witness).map(|(a, b)| a - b).collect();
        let len = space.norm(&diff);
        if len > 0.0 {
            let observed = (tip.value - from.value) / len;
            let ray = Ray {
                base: tip.witness.clone(),
                direction: diff.iter().map(|d| d / len).collect(),
                slope: 0.5 * observed,
            };
            result.budget_used += 1 + RAY_SAMPLES.len() as u64;
            if certify_ray(objective, &ray) {
                result.status = InfStatus::UnboundedBelow;
                result.value = f64::NEG_INFINITY;
                result.ray = Some(ray);
            }
        }
        return;
    }
    let prev = traj[k - 2].value;
    let last = traj[k - 1].value;
    if prev - last <= budget.stall_tol * last.abs().max(1.0) {
        result.status = InfStatus::Finite;
    }
}

/// Least-squares slope of best value against radius.
fn fitted_slope(window: &[RadiusBest]) -> f64 {
    let m = window.len() as f64;
    let mr = window.iter().map(|w| w.radius).sum::<f64>() / m;
    let mv = window.iter().map(|w| w.value).sum::<f64>() / m;
    let cov: f64 = window.iter().map(|w| (w.radius - mr) * (w.value - mv)).sum();
    let var: f64 = window.iter().map(|w| (w.radius - mr).powi(2)).sum();
    if var == 0.0 {
        0.0
    } else {
        cov / var
    }
}

#[derive(Debug, Clone)]
struct Local {
    x: Vec<f64>,
    fx: f64,
    evals: u64,
}

fn better(a: &Local, b: &Local) -> bool {
    match a.fx.total_cmp(&b.fx) {
        Ordering::Less => true,
        Ordering::Greater => false,
        Ordering::Equal => a.x.iter().zip(&b.x).map(|(p, q)| p.total_cmp(q)).find(|o| o.is_ne())
            == Some(Ordering::Less),
    }
}

fn project_ball(space: &Space, radius: f64, x: &mut [f64]) {
    let r = space.norm(x);
    if r > radius {
        let s = radius / r;
        x.iter_mut().for_each(|v| *v *= s);
    }
}

fn project_annulus(space: &Space, lo: f64, hi: f64, x: &mut [f64]) {
    let r = space.norm(x);
    if r == 0.0 {
        x.iter_mut().for_each(|v| *v = 0.0);
        x[0] = lo;
    } else if r > hi {
        x.iter_mut().for_each(|v| *v *= hi / r);
    } else if r < lo {
        x.iter_mut().for_each(|v| *v *= lo / r);
    }
}

/// Compass search with extra random directions.
///
/// Polls ±e_i and ± a fresh random orthogonal-ish set of directions,
/// accepting the first improvement and doubling the step (up to `step_cap`);
/// a failed poll halves the step. Stops once the step falls below 1e-9.
fn pattern_search<F, P, R>(f: &F, x0: Vec<f64>, project: &P, iters: usize, step_cap: f64, rng: &mut R) -> Local
where
    F: Fn(&[f64]) -> f64 + ?Sized,
    P: Fn(&mut [f64]),
    R: Rng + ?Sized,
{
    let n = x0.len();
    let mut x = x0;
    project(&mut x);
    let mut fx = f(&x);
    let mut evals = 1u64;
    let mut step = INITIAL_STEP.min(step_cap);
    let mut random_dirs = random_directions(n, rng);
    let mut trial = vec![0.0; n];

    for _ in 0..iters {
        if step < MIN_STEP {
            break;
        }
        let mut improved = false;
        'poll: for k in 0..2 * n {
            for sign in [1.0, -1.0] {
                trial.copy_from_slice(&x);
                if k < n {
                    trial[k] += sign * step;
                } else {
                    let d = &random_dirs[k - n];
                    trial.iter_mut().zip(d).for_each(|(t, di)| *t += sign * step * di);
                }
                project(&mut trial);
                let ft = f(&trial);
                evals += 1;
                if ft < fx {
                    x.copy_from_slice(&trial);
                    fx = ft;
                    improved = true;
                    break 'poll;
                }
            }
        }
        if improved {
            step = (2.0 * step).min(step_cap);
        } else {
            step *= 0.5;
            random_dirs = random_directions(n, rng);
        }
    }
    Local { x, fx, evals }
}

fn random_directions<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| {
            let mut v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
            let r = v.iter().map(|t| t * t).sum::<f64>().sqrt();
            if r > 0.0 {
                v.iter_mut().for_each(|t| *t /= r);
            }
            v
        })
        .collect()
}

/// Best point found in the annulus {r_low ≤ ‖x‖_p ≤ r_high}.
#[derive(Debug, Clone, PartialEq)]
pub struct ShellResult {
    pub value: f64,
    pub witness: Vec<f64>,
    pub budget_used: u64,
}

/// Estimated infimum of the objective over an annulus.
pub fn shell_inf<F>(objective: &F, space: &Space, r_low: f64, r_high: f64, budget: &SearchBudget) -> Result<f64>
where
    F: Fn(&[f64]) -> f64 + Sync + ?Sized,
{
    shell_search(objective, space, r_low, r_high, budget).map(|s| s.value)
}

pub fn shell_search<F>(
    objective: &F,
    space: &Space,
    r_low: f64,
    r_high: f64,
    budget: &SearchBudget,
) -> Result<ShellResult>
where
    F: Fn(&[f64]) -> f64 + Sync + ?Sized,
{
    if !(0.0 < r_low && r_low < r_high && r_high.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "shell needs 0 < r_low < r_high, got [{r_low}, {r_high}]"
        )));
    }
    budget.validate()?;
    let guarded = |x: &[f64]| {
        let v = objective(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let project = |x: &mut [f64]| project_annulus(space, r_low, r_high, x);
    let tag = r_low.to_bits();
    let best = (0..budget.starts)
        .into_par_iter()
        .map(|si| {
            let mut rng = rng::stream(budget.seed, &[tag, si as u64]);
            let mut x = space.sample_unit_sphere(&mut rng);
            let r = rng.random_range(r_low..=r_high);
            x.iter_mut().for_each(|v| *v *= r);
            pattern_search(&guarded, x, &project, budget.iters_per_start, r_high, &mut rng)
        })
        .collect::<Vec<_>>();
    let evals = best.iter().map(|l| l.evals).sum();
    let winner = best
        .into_iter()
        .reduce(|a, b| if better(&b, &a) { b } else { a })
        .expect("at least one start");
    Ok(ShellResult {
        value: winner.fx,
        witness: winner.x,
        budget_used: evals,
    })
}

/// Exact minimum over the uniform grid on [−radius, radius]^n (n ≤ 3).
pub fn grid_oracle<F>(objective: &F, space: &Space, radius: f64, points_per_axis: usize) -> Result<f64>
where
    F: Fn(&[f64]) -> f64 + ?Sized,
{
    grid_argmin(objective, space, radius, points_per_axis).map(|(v, _)| v)
}

/// [`grid_oracle`] together with a minimizing grid point.
pub fn grid_argmin<F>(objective: &F, space: &Space, radius: f64, points_per_axis: usize) -> Result<(f64, Vec<f64>)>
where
    F: Fn(&[f64]) -> f64 + ?Sized,
{
    let n = space.dim();
    if n > 3 {
        return Err(Error::CostGuard(n));
    }
    if points_per_axis == 0 || !(radius >= 0.0 && radius.is_finite()) {
        return Err(Error::InvalidInput("grid needs points and a finite radius".into()));
    }
    let m = points_per_axis;
    let coord = |i: usize| {
        if m == 1 {
            0.0
        } else {
            -radius + 2.0 * radius * i as f64 / (m - 1) as f64
        }
    };
    let total = m.pow(n as u32);
    let mut x = vec![0.0; n];
    let mut best = (f64::INFINITY, vec![0.0; n]);
    for idx in 0..total {
        let mut rest = idx;
        for xi in x.iter_mut() {
            *xi = coord(rest % m);
            rest /= m;
        }
        let v = objective(&x);
        if v < best.0 {
            best = (v, x.clone());
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::banach::{LinearFunctional, Norm};
    use crate::functional::{LipschitzFn, Node};

    fn l2(n: usize) -> Space {
        Space::euclidean(n).unwrap()
    }

    fn quick() -> SearchBudget {
        SearchBudget {
            starts: 8,
            iters_per_start: 400,
            ..SearchBudget::default()
        }
    }

    #[test]
    fn budget_validation() {
        assert!(SearchBudget::default().validate().is_ok());
        let mut b = SearchBudget {
            radii: vec![1.0, 1.0],
            ..SearchBudget::default()
        };
        assert!(b.validate().is_err());
        b.radii = vec![];
        assert!(b.validate().is_err());
        let b = SearchBudget {
            starts: 0,
            ..SearchBudget::default()
        };
        assert!(b.validate().is_err());
    }

    #[test]
    fn finite_kinked_objective() {
        let sp = l2(2);
        let f = |x: &[f64]| x[0] + x[0].abs();
        let r = estimate_inf(&f, &sp, &quick()).unwrap();
        assert_eq!(r.status, InfStatus::Finite);
        assert!(r.value.abs() < 1e-9);
        let w = r.witness.unwrap();
        assert_eq!(f(&w), r.value);
        // Grid oracle agrees.
        assert_eq!(grid_oracle(&f, &sp, 5.0, 101).unwrap(), 0.0);
    }

    #[test]
    fn norm_objective_found_at_origin() {
        let sp = Space::new(3, Norm::L1).unwrap();
        let f = |x: &[f64]| sp.norm(x);
        let r = estimate_inf(&f, &sp, &quick()).unwrap();
        assert_eq!(r.status, InfStatus::Finite);
        assert!(r.value < 1e-8);
        assert!(sp.norm(r.witness.as_ref().unwrap()) < 1e-8);
    }

    #[test]
    fn linear_decay_is_unbounded() {
        let sp = l2(2);
        let f = |x: &[f64]| x[0] + 0.5 * x[0].abs();
        let r = estimate_inf(&f, &sp, &quick()).unwrap();
        assert_eq!(r.status, InfStatus::UnboundedBelow);
        assert_eq!(r.value, f64::NEG_INFINITY);
        assert!(certify_ray(&f, r.ray.as_ref().unwrap()));
    }

    #[test]
    fn slow_approach_is_inconclusive_on_short_schedule() {
        // inf = -1, approached like 1/R.
        let sp = l2(1);
        let f = |x: &[f64]| -x[0].abs() / (1.0 + x[0].abs());
        let r = estimate_inf(&f, &sp, &quick()).unwrap();
        assert_eq!(r.status, InfStatus::Inconclusive);
        assert!(r.value > -1.0);
    }

    #[test]
    fn estimate_is_deterministic() {
        let sp = Space::new(3, Norm::LInf).unwrap();
        let f = |x: &[f64]| (x[0] - 0.3).abs() + (x[1] + x[2]).powi(2) - x[2].sin();
        let a = estimate_inf(&f, &sp, &quick()).unwrap();
        let b = estimate_inf(&f, &sp, &quick()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn constrained_search_respects_region() {
        let sp = l2(2);
        let f = |x: &[f64]| x[0] + x[1];
        let region = |x: &[f64]| x[0] >= 1.0 && x[1] >= -2.0 && x[0] <= 3.0 && x[1] <= 4.0;
        let r = estimate_inf_in(&f, &region, &[], &sp, &quick()).unwrap().unwrap();
        assert!(region(r.witness.as_ref().unwrap()));
        assert!((r.value - (-1.0)).abs() < 1e-6, "{}", r.value);
        let empty = |x: &[f64]| x[0] > 1e9;
        assert!(estimate_inf_in(&f, &empty, &[], &sp, &quick()).unwrap().is_none());
    }

    #[test]
    fn certificate_examples() {
        let sp = l2(2);
        let phi = LinearFunctional::new(vec![1.0, 0.0]).unwrap();
        let psi = LipschitzFn::new(sp, Node::abs_dev(&[1.0, 0.0], 0.0)).unwrap();
        let inst = ProblemInstance::new(sp, phi, psi, Regime::Equal).unwrap();
        let ray = unboundedness_certificate(&inst, 0.0).unwrap();
        assert_eq!(ray.direction, vec![-1.0, 0.0]);
        assert_eq!(ray.slope, -1.0);
        let ray = unboundedness_certificate(&inst, 0.5).unwrap();
        assert_eq!(ray.slope, -0.5);
        // Oracle: sample the objective along the ray.
        let f = |x: &[f64]| inst.combined(0.5, x);
        for t in [1e2, 1e3] {
            let decay = (f(&ray.point(t)) - f(&ray.base)) / t;
            assert!((decay - (-0.5)).abs() < 1e-12);
        }
        assert!(certify_ray(&f, &ray));
        assert!(unboundedness_certificate(&inst, 1.0).is_none());
        assert!(unboundedness_certificate(&inst, -1.0).is_none());
    }

    #[test]
    fn shell_examples() {
        let sp = l2(2);
        let norm = |x: &[f64]| sp.norm(x);
        assert!((shell_inf(&norm, &sp, 1.0, 2.0, &quick()).unwrap() - 1.0).abs() < 1e-9);
        let constant = |_: &[f64]| 4.25;
        assert_eq!(shell_inf(&constant, &sp, 1.0, 2.0, &quick()).unwrap(), 4.25);
        assert!(shell_inf(&norm, &sp, 2.0, 1.0, &quick()).is_err());

        // φ + |ψ| with φ = x1, ψ = ‖x − (0,1)‖₂ on the shell [10, 20].
        let f = |x: &[f64]| x[0] + (x[0].powi(2) + (x[1] - 1.0).powi(2)).sqrt();
        // Oracle: brute-force polar grid over the annulus.
        let mut oracle = f64::INFINITY;
        for i in 0..=200 {
            let r = 10.0 + 10.0 * i as f64 / 200.0;
            for j in 0..3600 {
                let th = std::f64::consts::TAU * j as f64 / 3600.0;
                oracle = oracle.min(f(&[r * th.cos(), r * th.sin()]));
            }
        }
        assert!(oracle.abs() < 1e-3);
        let est = shell_inf(&f, &sp, 10.0, 20.0, &quick()).unwrap();
        assert!(est.abs() < 1e-6, "{est}");
        assert!(est <= oracle + 1e-9);
    }

    #[test]
    fn grid_oracle_examples() {
        let sp = l2(2);
        let f = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
        assert_eq!(grid_oracle(&f, &sp, 1.0, 11).unwrap(), 0.0);
        let sp4 = l2(4);
        assert_eq!(grid_oracle(&f, &sp4, 1.0, 3).unwrap_err(), Error::CostGuard(4));
    }

    #[test]
    fn longer_schedule_never_worse() {
        let sp = l2(2);
        let f = |x: &[f64]| x[0] + (x[0].powi(2) + (x[1] - 1.0).powi(2) + 1.0).sqrt();
        let short = estimate_inf(&f, &sp, &quick()).unwrap();
        let mut longer = quick();
        longer.radii.push(1e4);
        let long = estimate_inf(&f, &sp, &longer).unwrap();
        assert!(long.value <= short.value);
    }
}
