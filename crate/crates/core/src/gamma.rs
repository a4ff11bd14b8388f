//! Convex functions γ on a subinterval [a, b] of [−1, 1].
//!
//! The central operation is the restricted conjugate
//! `sup_{λ ∈ [a,b]} (λμ − γ(λ))`, evaluated by the three-way case split on the
//! position of μ relative to the range of γ′: at or below `inf γ′` the
//! supremum sits at `a`, at or above `sup γ′` it sits at `b`, and otherwise at
//! the interior critical point `η(μ)`, where η inverts γ′.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Inverse-derivative bisection tolerance for tabulated γ.
const BISECT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum GammaKind {
    /// κλ²/2 with κ > 0.
    Quadratic { kappa: f64 },
    /// (1 − |λ|) log(1 − |λ|) + |λ| for |λ| < 1, and 1 at |λ| = 1.
    Entropy,
    /// βλ. Convex but with constant derivative.
    LinearPlus { beta: f64 },
    /// Piecewise-linear interpolation through `(λ, γ(λ))` knots.
    Tabulated { knots: Vec<(f64, f64)> },
}

/// Where the restricted conjugate attains its supremum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Branch {
    AtA,
    AtB,
    Interior,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConjugateValue {
    pub value: f64,
    pub argmax_lambda: f64,
    pub branch: Branch,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GammaFn {
    a: f64,
    b: f64,
    kind: GammaKind,
}

impl GammaFn {
    pub fn new(a: f64, b: f64, kind: GammaKind) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && -1.0 <= a && a < b && b <= 1.0) {
            return Err(Error::InvalidInput(format!(
                "gamma interval [{a}, {b}] must satisfy -1 <= a < b <= 1"
            )));
        }
        match &kind {
            GammaKind::Quadratic { kappa } if !(*kappa > 0.0 && kappa.is_finite()) => {
                return Err(Error::InvalidInput("quadratic kappa must be positive".into()));
            }
            GammaKind::LinearPlus { beta } if !beta.is_finite() => {
                return Err(Error::InvalidInput("linear beta must be finite".into()));
            }
            GammaKind::Tabulated { knots } => validate_knots(a, b, knots)?,
            _ => {}
        }
        Ok(Self { a, b, kind })
    }

    pub fn entropy(a: f64, b: f64) -> Result<Self> {
        Self::new(a, b, GammaKind::Entropy)
    }

    pub fn quadratic(kappa: f64, a: f64, b: f64) -> Result<Self> {
        Self::new(a, b, GammaKind::Quadratic { kappa })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn kind(&self) -> &GammaKind {
        &self.kind
    }

    /// Whether γ′ is strictly increasing on ]a, b[, so that η exists.
    pub fn strictly_increasing_deriv(&self) -> bool {
        matches!(self.kind, GammaKind::Quadratic { .. } | GammaKind::Entropy)
    }

    pub fn eval(&self, lambda: f64) -> Result<f64> {
        if !(self.a <= lambda && lambda <= self.b) {
            return Err(self.out_of_domain("lambda", lambda));
        }
        Ok(self.eval_unchecked(lambda))
    }

    pub(crate) fn eval_unchecked(&self, lambda: f64) -> f64 {
        match &self.kind {
            GammaKind::Quadratic { kappa } => 0.5 * kappa * lambda * lambda,
            GammaKind::Entropy => entropy(lambda),
            GammaKind::LinearPlus { beta } => beta * lambda,
            GammaKind::Tabulated { knots } => {
                let i = segment(knots, lambda);
                let (l0, v0) = knots[i];
                let (l1, v1) = knots[i + 1];
                v0 + (v1 - v0) * (lambda - l0) / (l1 - l0)
            }
        }
    }

    /// γ′ on the open interval. For tabulated γ this is the right derivative.
    pub fn deriv(&self, lambda: f64) -> Result<f64> {
        if !(self.a < lambda && lambda < self.b) {
            return Err(self.out_of_domain("lambda", lambda));
        }
        Ok(self.deriv_unchecked(lambda))
    }

    fn deriv_unchecked(&self, lambda: f64) -> f64 {
        match &self.kind {
            GammaKind::Quadratic { kappa } => kappa * lambda,
            GammaKind::Entropy => entropy_deriv(lambda),
            GammaKind::LinearPlus { beta } => *beta,
            GammaKind::Tabulated { knots } => slope(knots, segment(knots, lambda)),
        }
    }

    /// inf of γ′ over ]a, b[ (its limit at a⁺).
    pub fn deriv_inf(&self) -> f64 {
        match &self.kind {
            GammaKind::Quadratic { kappa } => kappa * self.a,
            GammaKind::Entropy => entropy_deriv(self.a),
            GammaKind::LinearPlus { beta } => *beta,
            GammaKind::Tabulated { knots } => slope(knots, 0),
        }
    }

    /// sup of γ′ over ]a, b[ (its limit at b⁻).
    pub fn deriv_sup(&self) -> f64 {
        match &self.kind {
            GammaKind::Quadratic { kappa } => kappa * self.b,
            GammaKind::Entropy => entropy_deriv(self.b),
            GammaKind::LinearPlus { beta } => *beta,
            GammaKind::Tabulated { knots } => slope(knots, knots.len() - 2),
        }
    }

    /// η(μ): the λ with γ′(λ) = μ.
    ///
    /// For tabulated γ this is the kink whose subdifferential contains μ,
    /// located by bisection.
    pub fn eta(&self, mu: f64) -> Result<f64> {
        let (lo, hi) = (self.deriv_inf(), self.deriv_sup());
        if !(lo <= mu && mu <= hi) {
            return Err(Error::OutOfDomain {
                what: "mu",
                value: mu,
                lo,
                hi,
            });
        }
        match &self.kind {
            GammaKind::Entropy => Ok(entropy_eta(mu)),
            GammaKind::Quadratic { kappa } => Ok(mu / kappa),
            GammaKind::LinearPlus { .. } => Err(Error::Unsupported(
                "linear gamma has a constant derivative; eta is undefined".into(),
            )),
            GammaKind::Tabulated { knots } => {
                let (mut lo, mut hi) = (self.a, self.b);
                while hi - lo > BISECT_TOL {
                    let mid = 0.5 * (lo + hi);
                    if slope(knots, segment(knots, mid)) >= mu {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                Ok(0.5 * (lo + hi))
            }
        }
    }

    /// sup over λ ∈ [a, b] of λμ − γ(λ), with its maximizer and branch.
    ///
    /// Ties μ = inf γ′ or μ = sup γ′ resolve to the endpoint branch.
    pub fn restricted_conjugate(&self, mu: f64) -> ConjugateValue {
        if mu <= self.deriv_inf() {
            return self.endpoint(self.a, mu, Branch::AtA);
        }
        if mu >= self.deriv_sup() {
            return self.endpoint(self.b, mu, Branch::AtB);
        }
        match &self.kind {
            GammaKind::Tabulated { knots } => {
                // Concave piecewise-linear in λ: the maximum sits on a knot.
                let (lambda, value) = knots[1..knots.len() - 1]
                    .iter()
                    .map(|&(l, v)| (l, l * mu - v))
                    .fold((f64::NAN, f64::NEG_INFINITY), |best, c| if c.1 > best.1 { c } else { best });
                ConjugateValue {
                    value,
                    argmax_lambda: lambda,
                    branch: Branch::Interior,
                }
            }
            _ => {
                let lambda = self.eta(mu).expect("mu strictly inside the derivative range");
                ConjugateValue {
                    value: lambda * mu - self.eval_unchecked(lambda),
                    argmax_lambda: lambda,
                    branch: Branch::Interior,
                }
            }
        }
    }

    fn endpoint(&self, lambda: f64, mu: f64, branch: Branch) -> ConjugateValue {
        ConjugateValue {
            value: lambda * mu - self.eval_unchecked(lambda),
            argmax_lambda: lambda,
            branch,
        }
    }

    fn out_of_domain(&self, what: &'static str, value: f64) -> Error {
        Error::OutOfDomain {
            what,
            value,
            lo: self.a,
            hi: self.b,
        }
    }
}

/// Brute-force restricted conjugate: the maximum of λμ − γ(λ) over the grid
/// {a, a + step, …} ∪ {b}. Never exceeds the true supremum.
pub fn conjugate_oracle(g: &GammaFn, mu: f64, step: f64) -> Result<f64> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidInput("oracle step must be positive".into()));
    }
    let count = ((g.b - g.a) / step).floor() as u64;
    let mut best = g.b * mu - g.eval_unchecked(g.b);
    for k in 0..=count {
        let lambda = (g.a + k as f64 * step).min(g.b);
        best = best.max(lambda * mu - g.eval_unchecked(lambda));
    }
    Ok(best)
}

fn entropy(lambda: f64) -> f64 {
    let s = lambda.abs();
    if s >= 1.0 {
        return 1.0;
    }
    (1.0 - s) * (-s).ln_1p() + s
}

fn entropy_deriv(lambda: f64) -> f64 {
    if lambda == 0.0 {
        return 0.0;
    }
    if lambda.abs() >= 1.0 {
        return lambda.signum() * f64::INFINITY;
    }
    -lambda.signum() * (-lambda.abs()).ln_1p()
}

fn entropy_eta(mu: f64) -> f64 {
    if mu == 0.0 {
        return 0.0;
    }
    -mu.signum() * (-mu.abs()).exp_m1()
}

fn validate_knots(a: f64, b: f64, knots: &[(f64, f64)]) -> Result<()> {
    let bad = |m: &str| Err(Error::InvalidInput(format!("tabulated gamma: {m}")));
    if knots.len() < 2 {
        return bad("needs at least two knots");
    }
    if knots.iter().any(|(l, v)| !l.is_finite() || !v.is_finite()) {
        return bad("knots must be finite");
    }
    if knots[0].0 != a || knots[knots.len() - 1].0 != b {
        return bad("first and last knot must sit at a and b");
    }
    if knots.windows(2).any(|w| w[1].0 <= w[0].0) {
        return bad("knot abscissae must be strictly increasing");
    }
    for i in 1..knots.len() - 1 {
        if slope(knots, i) < slope(knots, i - 1) - 1e-12 {
            return bad("slopes must be nondecreasing (convexity)");
        }
    }
    Ok(())
}

/// Index i of the segment [knots[i], knots[i+1]] containing λ (right-continuous).
fn segment(knots: &[(f64, f64)], lambda: f64) -> usize {
    let last = knots.len() - 2;
    knots[1..=last]
        .iter()
        .position(|&(l, _)| lambda < l)
        .unwrap_or(last)
}

fn slope(knots: &[(f64, f64)], i: usize) -> f64 {
    let (l0, v0) = knots[i];
    let (l1, v1) = knots[i + 1];
    (v1 - v0) / (l1 - l0)
}

/// Serializable γ description: `(kind, parameters, a, b)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaSpec {
    /// One of `quadratic`, `entropy`, `linear_plus`, `tabulated`.
    pub kind: String,
    pub a: f64,
    pub b: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub knots: Option<Vec<(f64, f64)>>,
}

impl GammaSpec {
    pub fn build(&self) -> Result<GammaFn> {
        let missing = |p: &str| Error::InvalidInput(format!("gamma kind {} needs `{p}`", self.kind));
        let kind = match self.kind.as_str() {
            "quadratic" => GammaKind::Quadratic {
                kappa: self.kappa.ok_or_else(|| missing("kappa"))?,
            },
            "entropy" => GammaKind::Entropy,
            "linear_plus" => GammaKind::LinearPlus {
                beta: self.beta.ok_or_else(|| missing("beta"))?,
            },
            "tabulated" => GammaKind::Tabulated {
                knots: self.knots.clone().ok_or_else(|| missing("knots"))?,
            },
            other => return Err(Error::InvalidInput(format!("unknown gamma kind {other:?}"))),
        };
        GammaFn::new(self.a, self.b, kind)
    }
}

impl From<&GammaFn> for GammaSpec {
    fn from(g: &GammaFn) -> Self {
        let mut spec = GammaSpec {
            kind: String::new(),
            a: g.a,
            b: g.b,
            kappa: None,
            beta: None,
            knots: None,
        };
        match &g.kind {
            GammaKind::Quadratic { kappa } => {
                spec.kind = "quadratic".into();
                spec.kappa = Some(*kappa);
            }
            GammaKind::Entropy => spec.kind = "entropy".into(),
            GammaKind::LinearPlus { beta } => {
                spec.kind = "linear_plus".into();
                spec.beta = Some(*beta);
            }
            GammaKind::Tabulated { knots } => {
                spec.kind = "tabulated".into();
                spec.knots = Some(knots.clone());
            }
        }
        spec
    }
}
