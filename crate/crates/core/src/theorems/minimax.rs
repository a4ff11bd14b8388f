use super::{report, Provenance, Side, StatementId, Tolerances, VerificationReport};
use crate::banach::norming_direction;
use crate::error::{Error, Result};
use crate::functional::{LipschitzFn, ProblemInstance, Regime};
use crate::gamma::GammaFn;
use crate::optimizer::{certify_ray, estimate_inf, estimate_inf_in, unboundedness_certificate, Ray, SearchBudget};

/// Region of the case split on ψ(x) against the range of γ′.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    /// ψ(x) ≤ inf γ′.
    A,
    /// ψ(x) ≥ sup γ′.
    B,
    /// Strictly between.
    C,
}

/// Classifies points by ψ(x) against `[inf γ′, sup γ′]`. Ties go to A or B.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionPartition {
    lo: f64,
    hi: f64,
}

impl RegionPartition {
    pub fn new(g: &GammaFn) -> Self {
        Self {
            lo: g.deriv_inf(),
            hi: g.deriv_sup(),
        }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn classify_value(&self, mu: f64) -> Region {
        if mu <= self.lo {
            Region::A
        } else if mu >= self.hi {
            Region::B
        } else {
            Region::C
        }
    }

    pub fn classify(&self, psi: &LipschitzFn, x: &[f64]) -> Region {
        self.classify_value(psi.eval_unchecked(x))
    }

    /// Whether the region is empty for every ψ (an infinite bound).
    pub fn trivially_empty(&self, region: Region) -> bool {
        match region {
            Region::A => self.lo == f64::NEG_INFINITY,
            Region::B => self.hi == f64::INFINITY,
            Region::C => false,
        }
    }
}

pub(super) fn require_equal(inst: &ProblemInstance) -> Result<()> {
    if inst.regime != Regime::Equal {
        return Err(Error::Hypothesis("this statement needs the regime L = ||phi||".into()));
    }
    Ok(())
}

/// inf(φ + λψ) − γ(λ), via the analytic ray when it applies.
fn endpoint_side(inst: &ProblemInstance, g: &GammaFn, lambda: f64, budget: &SearchBudget) -> Result<(Side, u64)> {
    let f = |x: &[f64]| inst.combined(lambda, x);
    if let Some(ray) = unboundedness_certificate(inst, lambda) {
        if certify_ray(&f, &ray) {
            return Ok((Side::unbounded(Provenance::ClosedForm), 5));
        }
    }
    let r = estimate_inf(&f, &inst.space, budget)?;
    Ok((Side::from_inf(&r, -g.eval_unchecked(lambda)), r.budget_used))
}

/// max over the endpoints a, b of inf(φ + λψ) − γ(λ).
fn endpoint_max(inst: &ProblemInstance, g: &GammaFn, budget: &SearchBudget) -> Result<(Side, u64)> {
    let (sa, ua) = endpoint_side(inst, g, g.a(), budget)?;
    let (sb, ub) = endpoint_side(inst, g, g.b(), budget)?;
    Ok((sa.max(sb), ua + ub))
}

/// Ray along −d for objectives φ + h(ψ) with h Lipschitz of constant
/// max(|a|, |b|) < 1.
fn interior_ray(inst: &ProblemInstance, g: &GammaFn) -> Option<Ray> {
    let m = g.a().abs().max(g.b().abs());
    if m >= 1.0 {
        return None;
    }
    let slope = -(inst.phi_norm() - m * inst.psi.lip_bound());
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

/// Checks max of the endpoint infima against inf_x sup_λ (φ + λψ − γ(λ)).
///
/// The left side goes through the analytic unboundedness ray for interior
/// endpoints and the optimizer otherwise. The right side evaluates the
/// restricted conjugate of γ at ψ(x) pointwise and minimizes the result.
pub fn verify_theorem1(
    inst: &ProblemInstance,
    g: &GammaFn,
    budget: &SearchBudget,
    tolerances: &Tolerances,
) -> Result<VerificationReport> {
    require_equal(inst)?;
    let (lhs, used_lhs) = endpoint_max(inst, g, budget)?;

    let h = |x: &[f64]| inst.phi.apply(x) + g.restricted_conjugate(inst.psi.eval_unchecked(x)).value;
    let (rhs, used_rhs) = match interior_ray(inst, g) {
        Some(ray) if certify_ray(&h, &ray) => (Side::unbounded(Provenance::ClosedForm), 5),
        _ => {
            let r = estimate_inf(&h, &inst.space, budget)?;
            (Side::from_inf(&r, 0.0), r.budget_used)
        }
    };
    Ok(report(StatementId::Thm1, lhs, rhs, tolerances, used_lhs + used_rhs))
}

fn region_value(g: &GammaFn, region: Region, mu: f64) -> f64 {
    match region {
        Region::A => g.a() * mu - g.eval_unchecked(g.a()),
        Region::B => g.b() * mu - g.eval_unchecked(g.b()),
        Region::C => match g.eta(mu) {
            Ok(l) => l * mu - g.eval_unchecked(l),
            Err(_) => f64::NAN,
        },
    }
}

/// Candidate feasible starts for the region searches: axis and norming-ray
/// points across the radius schedule, plus the search paths of min ψ and
/// max ψ.
fn seed_pool(inst: &ProblemInstance, budget: &SearchBudget) -> Result<(Vec<Vec<f64>>, u64)> {
    let n = inst.space.dim();
    let mut pool = vec![vec![0.0; n]];
    let d = norming_direction(&inst.phi, &inst.space)?;
    for &r in &budget.radii {
        for sign in [1.0, -1.0] {
            pool.push(d.iter().map(|v| sign * r * v).collect());
            for i in 0..n {
                let mut e = vec![0.0; n];
                e[i] = sign * r;
                pool.push(e);
            }
        }
    }
    let probe = SearchBudget {
        starts: (budget.starts / 4).max(1),
        ..budget.clone()
    };
    let mut used = 0;
    for sign in [1.0, -1.0] {
        let f = |x: &[f64]| sign * inst.psi.eval_unchecked(x);
        let r = estimate_inf(&f, &inst.space, &probe)?;
        used += r.budget_used;
        pool.extend(r.trajectory.into_iter().map(|t| t.witness));
    }
    Ok((pool, used))
}

/// Checks the endpoint maximum against the minimum of the constrained
/// infima over the regions A, B and C.
///
/// Each region infimum uses its own closed-form integrand (a fixed endpoint on
/// A and B, the η-interior value on C) and a rejection-constrained search.
/// Empty regions contribute +∞.
pub fn verify_theorem3(
    inst: &ProblemInstance,
    g: &GammaFn,
    budget: &SearchBudget,
    tolerances: &Tolerances,
) -> Result<VerificationReport> {
    require_equal(inst)?;
    if !g.strictly_increasing_deriv() {
        return Err(Error::Unsupported(
            "the region split needs a strictly increasing derivative".into(),
        ));
    }
    let (lhs, mut used) = endpoint_max(inst, g, budget)?;
    let part = RegionPartition::new(g);
    let psi = &inst.psi;

    let piecewise = |x: &[f64]| {
        let mu = psi.eval_unchecked(x);
        inst.phi.apply(x) + region_value(g, part.classify_value(mu), mu)
    };
    let mut notes = Vec::new();
    let rhs = match interior_ray(inst, g) {
        Some(ray) if certify_ray(&piecewise, &ray) => {
            used += 5;
            Side::unbounded(Provenance::ClosedForm)
        }
        _ => {
            let (pool, probe_used) = seed_pool(inst, budget)?;
            used += probe_used;
            let mut acc = Side::finite(f64::INFINITY, Provenance::Optimizer);
            for region in [Region::A, Region::B, Region::C] {
                if part.trivially_empty(region) {
                    notes.push(format!("region {region:?} empty"));
                    continue;
                }
                let inside = |x: &[f64]| part.classify(psi, x) == region;
                let f = |x: &[f64]| inst.phi.apply(x) + region_value(g, region, psi.eval_unchecked(x));
                let seeds: Vec<Vec<f64>> = pool.iter().filter(|x| inside(x)).cloned().collect();
                match estimate_inf_in(&f, &inside, &seeds, &inst.space, budget)? {
                    None => notes.push(format!("region {region:?} has no feasible point")),
                    Some(r) => {
                        used += r.budget_used;
                        acc = acc.min(Side::from_inf(&r, 0.0));
                    }
                }
            }
            acc
        }
    };
    let mut rep = report(StatementId::Thm3, lhs, rhs, tolerances, used);
    rep.notes = notes;
    Ok(rep)
}
