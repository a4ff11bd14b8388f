//! Finite-dimensional ℓp spaces.
//!
//! A [`Space`] is R^n with one of the ℓp norms, 1 ≤ p ≤ ∞. Linear functionals
//! are coefficient vectors acting by the standard pairing, so their dual norm
//! is the ℓq norm of the coefficients with 1/p + 1/q = 1.
//!
//! Besides norms, this module supplies the sublevel-set geometry used by the
//! fixed-point machinery: distances to hyperplanes, the Hausdorff distance
//! between nested half-spaces and Euclidean projection onto a half-space.

use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};

/// Closed-form tolerance used by the geometric routines.
pub const CLOSED_FORM_TOL: f64 = 1e-12;

/// The ℓp norm tag of a [`Space`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Norm {
    L1,
    L2,
    /// General exponent, strictly between 1 and ∞ and different from 2.
    Lp(f64),
    LInf,
}

impl Norm {
    /// Builds the tag from an exponent; `f64::INFINITY` selects ℓ∞.
    pub fn from_exponent(p: f64) -> Result<Self> {
        if p.is_nan() || p < 1.0 {
            return Err(Error::InvalidInput(format!("norm exponent must be >= 1, got {p}")));
        }
        Ok(if p == 1.0 {
            Norm::L1
        } else if p == 2.0 {
            Norm::L2
        } else if p.is_infinite() {
            Norm::LInf
        } else {
            Norm::Lp(p)
        })
    }

    pub fn exponent(self) -> f64 {
        match self {
            Norm::L1 => 1.0,
            Norm::L2 => 2.0,
            Norm::Lp(p) => p,
            Norm::LInf => f64::INFINITY,
        }
    }

    /// The conjugate exponent norm.
    pub fn dual(self) -> Norm {
        match self {
            Norm::L1 => Norm::LInf,
            Norm::L2 => Norm::L2,
            Norm::Lp(p) => Norm::Lp(p / (p - 1.0)),
            Norm::LInf => Norm::L1,
        }
    }

    pub fn eval(self, x: &[f64]) -> f64 {
        match self {
            Norm::L1 => x.iter().map(|v| v.abs()).sum(),
            Norm::L2 => x.iter().map(|v| v * v).sum::<f64>().sqrt(),
            Norm::LInf => x.iter().fold(0.0, |m, v| m.max(v.abs())),
            Norm::Lp(p) => {
                let scale = x.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
                if scale == 0.0 {
                    return 0.0;
                }
                let sum: f64 = x.iter().map(|v| (v.abs() / scale).powf(p)).sum();
                scale * sum.powf(1.0 / p)
            }
        }
    }

    /// Text tag used in configuration files: `"1"`, `"2"`, `"inf"` or the exponent.
    pub fn tag(self) -> String {
        match self {
            Norm::L1 => "1".into(),
            Norm::L2 => "2".into(),
            Norm::LInf => "inf".into(),
            Norm::Lp(p) => format!("{p:?}"),
        }
    }

    pub fn parse_tag(tag: &str) -> Result<Self> {
        let t = tag.trim();
        if t.eq_ignore_ascii_case("inf") || t == "∞" {
            return Ok(Norm::LInf);
        }
        let p: f64 = t
            .parse()
            .map_err(|_| Error::InvalidInput(format!("unknown norm tag {tag:?}")))?;
        Norm::from_exponent(p)
    }
}

/// R^n equipped with an ℓp norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Space {
    n: usize,
    norm: Norm,
}

impl Space {
    pub fn new(n: usize, norm: Norm) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("dimension must be at least 1".into()));
        }
        if let Norm::Lp(p) = norm {
            // Re-validate so that hand-built tags cannot smuggle in p < 1.
            Norm::from_exponent(p)?;
        }
        Ok(Self { n, norm })
    }

    pub fn euclidean(n: usize) -> Result<Self> {
        Self::new(n, Norm::L2)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn norm_kind(&self) -> Norm {
        self.norm
    }

    pub fn norm(&self, x: &[f64]) -> f64 {
        self.norm.eval(x)
    }

    pub fn dist(&self, x: &[f64], y: &[f64]) -> f64 {
        let d: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
        self.norm(&d)
    }

    /// Dual norm of a coefficient vector (ℓq with q conjugate to p).
    pub fn dual_norm_of(&self, coeffs: &[f64]) -> f64 {
        self.norm.dual().eval(coeffs)
    }

    /// A random point on the unit sphere of this norm.
    ///
    /// ℓ1 and general ℓp use the cone-measure construction (normalized
    /// generalized-Gaussian coordinates); ℓ∞ samples a cube face uniformly.
    pub fn sample_unit_sphere<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let n = self.n;
        let mut v: Vec<f64> = match self.norm {
            Norm::L2 => (0..n).map(|_| StandardNormal.sample(rng)).collect(),
            Norm::L1 => (0..n)
                .map(|_| {
                    let e: f64 = Exp1.sample(rng);
                    if rng.random::<bool>() {
                        e
                    } else {
                        -e
                    }
                })
                .collect(),
            Norm::Lp(p) => {
                let gamma = Gamma::new(1.0 / p, 1.0).expect("valid gamma shape");
                (0..n)
                    .map(|_| {
                        let g: f64 = gamma.sample(rng);
                        let m = g.powf(1.0 / p);
                        if rng.random::<bool>() {
                            m
                        } else {
                            -m
                        }
                    })
                    .collect()
            }
            Norm::LInf => {
                let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
                let k = rng.random_range(0..n);
                v[k] = if rng.random::<bool>() { 1.0 } else { -1.0 };
                v
            }
        };
        let r = self.norm(&v);
        if r == 0.0 || !r.is_finite() {
            v.iter_mut().for_each(|x| *x = 0.0);
            v[0] = 1.0;
            return v;
        }
        v.iter_mut().for_each(|x| *x /= r);
        v
    }

    /// A random point of the closed ball of the given radius around the origin.
    pub fn sample_ball<R: Rng + ?Sized>(&self, radius: f64, rng: &mut R) -> Vec<f64> {
        let u: f64 = rng.random();
        let r = radius * u.powf(1.0 / self.n as f64);
        let mut d = self.sample_unit_sphere(rng);
        d.iter_mut().for_each(|x| *x *= r);
        d
    }
}

/// A non-zero linear functional x ↦ ⟨c, x⟩.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearFunctional {
    coeffs: Vec<f64>,
}

impl LinearFunctional {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("functional needs at least one coefficient".into()));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("functional coefficients must be finite".into()));
        }
        if coeffs.iter().all(|&c| c == 0.0) {
            return Err(Error::InvalidInput("zero functional".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn apply(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    pub fn negated(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

/// The closed half-space G(t) = {x : φ(x) ≤ t}.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfSpace {
    pub functional: LinearFunctional,
    pub level: f64,
}

impl HalfSpace {
    pub fn new(functional: LinearFunctional, level: f64) -> Self {
        Self { functional, level }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        self.functional.apply(x) <= self.level
    }
}

/// ‖φ‖_{X*}: the ℓq norm of the coefficients.
pub fn dual_norm(phi: &LinearFunctional, space: &Space) -> Result<f64> {
    check_dim(space.dim(), phi.dim())?;
    Ok(space.dual_norm_of(phi.coeffs()))
}

/// A unit vector d (in ‖·‖_p) with φ(d) = ‖φ‖_{X*}.
///
/// Ties in the ℓ1 case are broken by the lowest index.
pub fn norming_direction(phi: &LinearFunctional, space: &Space) -> Result<Vec<f64>> {
    check_dim(space.dim(), phi.dim())?;
    let c = phi.coeffs();
    let d = match space.norm_kind() {
        Norm::L1 => {
            let mut k = 0;
            for (i, v) in c.iter().enumerate() {
                if v.abs() > c[k].abs() {
                    k = i;
                }
            }
            let mut d = vec![0.0; c.len()];
            d[k] = c[k].signum();
            d
        }
        Norm::LInf => c
            .iter()
            .map(|&v| if v == 0.0 { 0.0 } else { v.signum() })
            .collect(),
        Norm::L2 => {
            let r = Norm::L2.eval(c);
            c.iter().map(|v| v / r).collect()
        }
        Norm::Lp(p) => {
            let q = p / (p - 1.0);
            let scale = c.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
            let mut d: Vec<f64> = c
                .iter()
                .map(|&v| {
                    if v == 0.0 {
                        0.0
                    } else {
                        v.signum() * (v.abs() / scale).powf(q - 1.0)
                    }
                })
                .collect();
            let r = Norm::Lp(p).eval(&d);
            d.iter_mut().for_each(|x| *x /= r);
            d
        }
    };
    Ok(d)
}

/// Distance from x to the hyperplane {φ = t}: |φ(x) − t| / ‖φ‖_{X*}.
pub fn dist_to_hyperplane(x: &[f64], phi: &LinearFunctional, t: f64, space: &Space) -> Result<f64> {
    check_dim(space.dim(), x.len())?;
    let dn = dual_norm(phi, space)?;
    Ok((phi.apply(x) - t).abs() / dn)
}

/// Hausdorff distance between the nested half-spaces G(t) and G(s).
///
/// Equals |t − s| / ‖φ‖_{X*}: every point of the larger set lies within that
/// distance of the smaller one, and boundary points of the larger set realize it.
pub fn hausdorff_halfspaces(t: f64, s: f64, phi: &LinearFunctional, space: &Space) -> Result<f64> {
    let dn = dual_norm(phi, space)?;
    Ok((t - s).abs() / dn)
}

/// Direction-sampled estimate of the Hausdorff distance between G(t) and G(s).
///
/// Boundary points x of the larger half-space are generated algebraically and
/// their distance to the smaller one is estimated by shooting rays along
/// `samples` random unit directions u, taking the shortest hit length
/// (φ(x) − t_min) / φ(u). The result never undercuts the true distance and
/// tightens as `samples` grows.
pub fn sampled_hausdorff_halfspaces<R: Rng + ?Sized>(
    t: f64,
    s: f64,
    phi: &LinearFunctional,
    space: &Space,
    samples: usize,
    rng: &mut R,
) -> Result<f64> {
    check_dim(space.dim(), phi.dim())?;
    let (lo, hi) = if t <= s { (t, s) } else { (s, t) };
    if lo == hi {
        return Ok(0.0);
    }
    let c = phi.coeffs();
    let pivot = (0..c.len())
        .max_by(|&i, &j| c[i].abs().total_cmp(&c[j].abs()))
        .expect("non-empty");

    let directions: Vec<Vec<f64>> = (0..samples).map(|_| space.sample_unit_sphere(rng)).collect();
    const BOUNDARY_POINTS: usize = 8;
    let mut sup: f64 = 0.0;
    for _ in 0..BOUNDARY_POINTS {
        // Random z, then slide along the pivot axis onto {φ = hi}.
        let mut x: Vec<f64> = (0..c.len()).map(|_| rng.random_range(-10.0..10.0)).collect();
        x[pivot] += (hi - phi.apply(&x)) / c[pivot];
        let excess = phi.apply(&x) - lo;
        let mut best = f64::INFINITY;
        for u in &directions {
            let rate = phi.apply(u);
            if rate > 0.0 {
                best = best.min(excess / rate);
            }
        }
        sup = sup.max(best);
    }
    Ok(sup)
}

/// Euclidean projection of x onto the half-space `hs`.
pub fn project_halfspace(x: &[f64], hs: &HalfSpace, space: &Space) -> Result<Vec<f64>> {
    check_dim(space.dim(), x.len())?;
    check_dim(space.dim(), hs.functional.dim())?;
    if space.norm_kind() != Norm::L2 {
        return Err(Error::Unsupported(
            "half-space projection is only defined for the Euclidean norm".into(),
        ));
    }
    let c = hs.functional.coeffs();
    let excess = hs.functional.apply(x) - hs.level;
    if excess <= 0.0 {
        return Ok(x.to_vec());
    }
    let cc: f64 = c.iter().map(|v| v * v).sum();
    let mut y: Vec<f64> = x.iter().zip(c).map(|(xi, ci)| xi - excess * ci / cc).collect();
    // Rounding may leave φ(y) a few ulps above the level; nudge inward.
    // Small bumps can vanish below the ulp of large coordinates, so the
    // floor scales with |y| and doubles each round.
    let scale = y.iter().fold(hs.level.abs(), |m, v| m.max(v.abs())).max(1.0);
    let mut bump = f64::EPSILON * scale;
    let mut over = hs.functional.apply(&y) - hs.level;
    let mut guard = 0;
    while over > 0.0 && guard < 64 {
        let step = over.max(bump);
        y.iter_mut().zip(c).for_each(|(yi, ci)| *yi -= step * ci / cc);
        over = hs.functional.apply(&y) - hs.level;
        bump *= 2.0;
        guard += 1;
    }
    Ok(y)
}
