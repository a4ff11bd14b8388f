//! Lipschitz functionals ψ as expression trees.
//!
//! Every [`LipschitzFn`] carries a Lipschitz bound computed by composition
//! rules at construction time, plus an exactness certificate. Only whitelisted
//! constructions may claim exactness: the verifiers rely on L = ‖φ‖_{X*} holding
//! exactly, and a loose bound would silently void that hypothesis.

mod generate;
mod text;

pub use generate::generate_instance;
pub use text::parse_node;

use serde::{Deserialize, Serialize};

use crate::banach::{dual_norm, norming_direction, LinearFunctional, Norm, Space};
use crate::error::{check_dim, Error, Result};

/// Tie and zero tolerance for nondifferentiability detection.
pub const KINK_TOL: f64 = 1e-12;

/// A node of the expression tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    /// x ↦ ⟨c, x⟩.
    Linear(Vec<f64>),
    /// x ↦ |⟨c, x⟩ − offset|.
    AbsDev { coeffs: Vec<f64>, offset: f64 },
    /// x ↦ α‖x − center‖_p.
    ScaledDist { alpha: f64, center: Vec<f64> },
    /// x ↦ α·sqrt(ε + ‖x − center‖₂²). Euclidean spaces only.
    SmoothDist { alpha: f64, eps: f64, center: Vec<f64> },
    MaxOf(Vec<Node>),
    Sum(Vec<Node>),
    Scale(f64, Box<Node>),
    /// x ↦ child(x) − c.
    Shift(Box<Node>, f64),
}

impl Node {
    pub fn linear(coeffs: &[f64]) -> Self {
        Node::Linear(coeffs.to_vec())
    }

    pub fn abs_dev(coeffs: &[f64], offset: f64) -> Self {
        Node::AbsDev {
            coeffs: coeffs.to_vec(),
            offset,
        }
    }

    pub fn scaled_dist(alpha: f64, center: &[f64]) -> Self {
        Node::ScaledDist {
            alpha,
            center: center.to_vec(),
        }
    }

    pub fn smooth_dist(alpha: f64, eps: f64, center: &[f64]) -> Self {
        Node::SmoothDist {
            alpha,
            eps,
            center: center.to_vec(),
        }
    }

    pub fn scale(alpha: f64, child: Node) -> Self {
        Node::Scale(alpha, Box::new(child))
    }

    pub fn shift(child: Node, c: f64) -> Self {
        Node::Shift(Box::new(child), c)
    }

    fn validate(&self, space: &Space) -> Result<()> {
        let n = space.dim();
        let finite = |v: f64, what: &str| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidInput(format!("{what} must be finite")))
            }
        };
        let finite_vec = |v: &[f64], what: &str| -> Result<()> {
            check_dim(n, v.len())?;
            v.iter().try_for_each(|&x| finite(x, what))
        };
        match self {
            Node::Linear(c) => finite_vec(c, "linear coefficient"),
            Node::AbsDev { coeffs, offset } => {
                finite_vec(coeffs, "absdev coefficient")?;
                finite(*offset, "absdev offset")
            }
            Node::ScaledDist { alpha, center } => {
                finite(*alpha, "dist scale")?;
                finite_vec(center, "dist center")
            }
            Node::SmoothDist { alpha, eps, center } => {
                if space.norm_kind() != Norm::L2 {
                    return Err(Error::Unsupported(
                        "smooth distance is only defined for the Euclidean norm".into(),
                    ));
                }
                finite(*alpha, "smooth scale")?;
                if !(*eps > 0.0 && eps.is_finite()) {
                    return Err(Error::InvalidInput("smooth epsilon must be positive".into()));
                }
                finite_vec(center, "smooth center")
            }
            Node::MaxOf(children) | Node::Sum(children) => {
                if children.is_empty() {
                    return Err(Error::InvalidInput("max/sum need at least one child".into()));
                }
                children.iter().try_for_each(|c| c.validate(space))
            }
            Node::Scale(alpha, child) => {
                finite(*alpha, "scale factor")?;
                child.validate(space)
            }
            Node::Shift(child, c) => {
                finite(*c, "shift")?;
                child.validate(space)
            }
        }
    }

    fn eval(&self, space: &Space, x: &[f64]) -> f64 {
        match self {
            Node::Linear(c) => dot(c, x),
            Node::AbsDev { coeffs, offset } => (dot(coeffs, x) - offset).abs(),
            Node::ScaledDist { alpha, center } => alpha * space.dist(x, center),
            Node::SmoothDist { alpha, eps, center } => {
                let sq: f64 = x.iter().zip(center).map(|(a, b)| (a - b) * (a - b)).sum();
                alpha * (eps + sq).sqrt()
            }
            Node::MaxOf(children) => children
                .iter()
                .map(|c| c.eval(space, x))
                .fold(f64::NEG_INFINITY, f64::max),
            Node::Sum(children) => children.iter().map(|c| c.eval(space, x)).sum(),
            Node::Scale(alpha, child) => alpha * child.eval(space, x),
            Node::Shift(child, c) => child.eval(space, x) - c,
        }
    }

    /// Composition rules for (bound, exact).
    fn lipschitz(&self, space: &Space) -> (f64, bool) {
        match self {
            Node::Linear(c) => (space.dual_norm_of(c), true),
            Node::AbsDev { coeffs, .. } => (space.dual_norm_of(coeffs), true),
            Node::ScaledDist { alpha, .. } | Node::SmoothDist { alpha, .. } => (alpha.abs(), true),
            Node::MaxOf(children) => {
                let parts: Vec<(f64, bool)> = children.iter().map(|c| c.lipschitz(space)).collect();
                let bound = parts.iter().fold(0.0, |m: f64, p| m.max(p.0));
                let exact = parts.iter().any(|&(b, e)| e && b == bound);
                (bound, exact)
            }
            Node::Sum(children) => {
                let parts: Vec<(f64, bool)> = children.iter().map(|c| c.lipschitz(space)).collect();
                let bound = parts.iter().map(|p| p.0).sum();
                let mut moving = parts.iter().filter(|p| p.0 > 0.0);
                let exact = match (moving.next(), moving.next()) {
                    (None, _) => true,
                    (Some(&(_, e)), None) => e,
                    _ => false,
                };
                (bound, exact)
            }
            Node::Scale(alpha, child) => {
                let (b, e) = child.lipschitz(space);
                (alpha.abs() * b, e)
            }
            Node::Shift(child, _) => child.lipschitz(space),
        }
    }

    fn differentiable(&self) -> bool {
        match self {
            Node::Linear(_) | Node::SmoothDist { .. } => true,
            Node::AbsDev { .. } | Node::ScaledDist { .. } | Node::MaxOf(_) => false,
            Node::Sum(children) => children.iter().all(Node::differentiable),
            Node::Scale(_, child) | Node::Shift(child, _) => child.differentiable(),
        }
    }

    fn gradient(&self, space: &Space, x: &[f64]) -> Option<Vec<f64>> {
        match self {
            Node::Linear(c) => Some(c.clone()),
            Node::AbsDev { coeffs, offset } => {
                let dev = dot(coeffs, x) - offset;
                if dev.abs() <= KINK_TOL * offset.abs().max(1.0) {
                    None
                } else {
                    Some(coeffs.iter().map(|c| dev.signum() * c).collect())
                }
            }
            Node::ScaledDist { alpha, center } => {
                let v: Vec<f64> = x.iter().zip(center).map(|(a, b)| a - b).collect();
                norm_gradient(space.norm_kind(), &v).map(|g| g.into_iter().map(|gi| alpha * gi).collect())
            }
            Node::SmoothDist { alpha, eps, center } => {
                let v: Vec<f64> = x.iter().zip(center).map(|(a, b)| a - b).collect();
                let r = (eps + v.iter().map(|t| t * t).sum::<f64>()).sqrt();
                Some(v.iter().map(|t| alpha * t / r).collect())
            }
            Node::MaxOf(children) => {
                let values: Vec<f64> = children.iter().map(|c| c.eval(space, x)).collect();
                let (top, &best) = values
                    .iter()
                    .enumerate()
                    .max_by(|a, b| a.1.total_cmp(b.1))?;
                let tol = KINK_TOL * best.abs().max(1.0);
                let tied = values
                    .iter()
                    .enumerate()
                    .any(|(i, &v)| i != top && best - v <= tol);
                if tied {
                    None
                } else {
                    children[top].gradient(space, x)
                }
            }
            Node::Sum(children) => {
                let mut acc = vec![0.0; x.len()];
                for c in children {
                    let g = c.gradient(space, x)?;
                    acc.iter_mut().zip(&g).for_each(|(a, b)| *a += b);
                }
                Some(acc)
            }
            Node::Scale(alpha, child) => child
                .gradient(space, x)
                .map(|g| g.into_iter().map(|gi| alpha * gi).collect()),
            Node::Shift(child, _) => child.gradient(space, x),
        }
    }

    /// Pairs on which this node is known to realize its Lipschitz bound
    /// (or approach it).
    fn candidate_pairs(&self, space: &Space, out: &mut Vec<(Vec<f64>, Vec<f64>)>) {
        let n = space.dim();
        let unit = {
            let mut e = vec![0.0; n];
            e[0] = 1.0;
            e
        };
        match self {
            Node::Linear(c) | Node::AbsDev { coeffs: c, .. } => {
                let offset = match self {
                    Node::AbsDev { offset, .. } => *offset,
                    _ => 0.0,
                };
                let Ok(f) = LinearFunctional::new(c.clone()) else {
                    out.push((vec![0.0; n], unit));
                    return;
                };
                let d = norming_direction(&f, space).expect("validated dimension");
                let dn = dual_norm(&f, space).expect("validated dimension");
                let base: Vec<f64> = d.iter().map(|v| offset * v / dn).collect();
                let tip: Vec<f64> = base.iter().zip(&d).map(|(b, v)| b + v).collect();
                out.push((base, tip));
            }
            Node::ScaledDist { center, .. } => {
                let tip: Vec<f64> = center.iter().zip(&unit).map(|(c, u)| c + u).collect();
                out.push((center.clone(), tip));
            }
            Node::SmoothDist { eps, center, .. } => {
                let far = 100.0 * (1.0 + eps.sqrt());
                let a: Vec<f64> = center.iter().zip(&unit).map(|(c, u)| c + far * u).collect();
                let b: Vec<f64> = center.iter().zip(&unit).map(|(c, u)| c + (far + 1.0) * u).collect();
                out.push((a, b));
            }
            Node::MaxOf(children) | Node::Sum(children) => {
                children.iter().for_each(|c| c.candidate_pairs(space, out));
            }
            Node::Scale(_, child) | Node::Shift(child, _) => child.candidate_pairs(space, out),
        }
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Gradient of the ℓp norm at v, when it exists.
fn norm_gradient(norm: Norm, v: &[f64]) -> Option<Vec<f64>> {
    let r = norm.eval(v);
    if r <= KINK_TOL {
        return None;
    }
    match norm {
        Norm::L2 => Some(v.iter().map(|t| t / r).collect()),
        Norm::L1 => {
            if v.iter().any(|t| t.abs() <= KINK_TOL * r) {
                None
            } else {
                Some(v.iter().map(|t| t.signum()).collect())
            }
        }
        Norm::LInf => {
            let k = (0..v.len()).max_by(|&i, &j| v[i].abs().total_cmp(&v[j].abs()))?;
            let tied = (0..v.len()).any(|i| i != k && r - v[i].abs() <= KINK_TOL * r);
            if tied {
                None
            } else {
                let mut g = vec![0.0; v.len()];
                g[k] = v[k].signum();
                Some(g)
            }
        }
        Norm::Lp(p) => Some(
            v.iter()
                .map(|t| t.signum() * (t.abs() / r).powf(p - 1.0))
                .collect(),
        ),
    }
}

/// The functional ψ with its Lipschitz certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct LipschitzFn {
    space: Space,
    node: Node,
    lip_bound: f64,
    lip_exact: bool,
    differentiable: bool,
}

impl LipschitzFn {
    /// Validates the tree against `space` and computes its certificate.
    ///
    /// Rejects functionals that are constant on a deterministic probe set.
    pub fn new(space: Space, node: Node) -> Result<Self> {
        node.validate(&space)?;
        let (lip_bound, lip_exact) = node.lipschitz(&space);
        let psi = Self {
            space,
            differentiable: node.differentiable(),
            node,
            lip_bound,
            lip_exact,
        };
        if lip_bound == 0.0 || psi.looks_constant() {
            return Err(Error::InvalidInput("psi must be non-constant".into()));
        }
        Ok(psi)
    }

    fn looks_constant(&self) -> bool {
        let n = self.space.dim();
        let mut probes = vec![vec![0.0; n]];
        for i in 0..n {
            for s in [1.0, -1.0, 10.0, -10.0] {
                let mut e = vec![0.0; n];
                e[i] = s;
                probes.push(e);
            }
        }
        probes.push((0..n).map(|i| 0.37 * (i + 1) as f64).collect());
        let mut pairs = Vec::new();
        self.node.candidate_pairs(&self.space, &mut pairs);
        for (a, b) in pairs {
            probes.push(a);
            probes.push(b);
        }
        let v0 = self.eval_unchecked(&probes[0]);
        probes.iter().all(|x| self.eval_unchecked(x) == v0)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn node(&self) -> &Node {
        &self.node
    }

    pub fn lip_bound(&self) -> f64 {
        self.lip_bound
    }

    pub fn lip_exact(&self) -> bool {
        self.lip_exact
    }

    /// True when every node of the tree is differentiable everywhere.
    pub fn differentiable(&self) -> bool {
        self.differentiable
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.space.dim(), x.len())?;
        Ok(self.eval_unchecked(x))
    }

    /// Evaluation without the dimension check, for hot loops whose inputs
    /// are generated in the right dimension.
    pub fn eval_unchecked(&self, x: &[f64]) -> f64 {
        self.node.eval(&self.space, x)
    }

    /// `(bound, exact)` from the composition rules.
    pub fn certified_lipschitz(&self) -> (f64, bool) {
        (self.lip_bound, self.lip_exact)
    }

    /// Gradient at x, or `None` at detected kinks.
    pub fn gradient(&self, x: &[f64]) -> Result<Option<Vec<f64>>> {
        check_dim(self.space.dim(), x.len())?;
        Ok(self.node.gradient(&self.space, x))
    }

    /// A pair (x, y) whose difference quotient comes close to the bound.
    ///
    /// Only available for exact certificates. Candidates from the leaves are
    /// also translated far along their own direction so that max nodes settle
    /// on a single branch.
    pub fn adversarial_pair(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        if !self.lip_exact {
            return None;
        }
        let mut leaves = Vec::new();
        self.node.candidate_pairs(&self.space, &mut leaves);
        let mut best: Option<(f64, Vec<f64>, Vec<f64>)> = None;
        for (a, b) in leaves {
            let u: Vec<f64> = b.iter().zip(&a).map(|(p, q)| p - q).collect();
            for shift in [0.0, 10.0, 1e3, -11.0, -1e3 - 1.0] {
                let x: Vec<f64> = a.iter().zip(&u).map(|(p, d)| p + shift * d).collect();
                let y: Vec<f64> = x.iter().zip(&u).map(|(p, d)| p + d).collect();
                let q = self.quotient(&x, &y);
                if best.as_ref().is_none_or(|(bq, _, _)| q > *bq) {
                    best = Some((q, x, y));
                }
            }
        }
        best.map(|(_, x, y)| (x, y))
    }

    /// |ψ(x) − ψ(y)| / ‖x − y‖_p.
    pub fn quotient(&self, x: &[f64], y: &[f64]) -> f64 {
        let d = self.space.dist(x, y);
        if d == 0.0 {
            return 0.0;
        }
        (self.eval_unchecked(x) - self.eval_unchecked(y)).abs() / d
    }

    /// Closed-form Remark-1 data for a smooth distance ψ (possibly shifted):
    /// `(alpha, eps, center)`.
    pub fn as_smooth_dist(&self) -> Option<(f64, f64, &[f64])> {
        let mut node = &self.node;
        while let Node::Shift(child, _) = node {
            node = child;
        }
        match node {
            Node::SmoothDist { alpha, eps, center } => Some((*alpha, *eps, center)),
            _ => None,
        }
    }
}

impl std::fmt::Display for LipschitzFn {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.node.fmt(f)
    }
}

/// Which relation between L and ‖φ‖ an instance satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Regime {
    /// L = ‖φ‖_{X*}.
    Equal,
    /// L < ‖φ‖_{X*}.
    StrictLess,
}

/// φ and ψ on a common space, with the standing hypothesis checked.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    pub space: Space,
    pub phi: LinearFunctional,
    pub psi: LipschitzFn,
    pub regime: Regime,
}

impl ProblemInstance {
    pub fn new(space: Space, phi: LinearFunctional, psi: LipschitzFn, regime: Regime) -> Result<Self> {
        check_dim(space.dim(), phi.dim())?;
        if *psi.space() != space {
            return Err(Error::InvalidInput("phi and psi live on different spaces".into()));
        }
        let dn = dual_norm(&phi, &space)?;
        let (bound, exact) = psi.certified_lipschitz();
        match regime {
            Regime::Equal => {
                if !exact {
                    return Err(Error::Hypothesis(
                        "L = ||phi|| needs an exact Lipschitz certificate".into(),
                    ));
                }
                if (bound - dn).abs() > 1e-12 * dn {
                    return Err(Error::Hypothesis(format!(
                        "Lipschitz constant {bound} differs from ||phi|| = {dn}"
                    )));
                }
            }
            Regime::StrictLess => {
                if bound >= dn {
                    return Err(Error::Hypothesis(format!(
                        "Lipschitz bound {bound} is not below ||phi|| = {dn}"
                    )));
                }
            }
        }
        Ok(Self {
            space,
            phi,
            psi,
            regime,
        })
    }

    pub fn phi_norm(&self) -> f64 {
        self.space.dual_norm_of(self.phi.coeffs())
    }

    /// φ(x) + λψ(x).
    pub fn combined(&self, lambda: f64, x: &[f64]) -> f64 {
        self.phi.apply(x) + lambda * self.psi.eval_unchecked(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn l2(n: usize) -> Space {
        Space::euclidean(n).unwrap()
    }

    fn psi(space: Space, node: Node) -> LipschitzFn {
        LipschitzFn::new(space, node).unwrap()
    }

    #[test]
    fn eval_examples() {
        let f = psi(l2(2), Node::abs_dev(&[1.0, 0.0], 0.0));
        assert_eq!(f.eval(&[-3.0, 5.0]).unwrap(), 3.0);
        let f = psi(l2(2), Node::scaled_dist(1.0, &[0.0, 1.0]));
        assert_eq!(f.eval(&[0.0, 1.0]).unwrap(), 0.0);
        let f = psi(
            l2(2),
            Node::MaxOf(vec![Node::linear(&[1.0, 0.0]), Node::linear(&[-1.0, 0.0])]),
        );
        assert_eq!(f.eval(&[2.0, 9.0]).unwrap(), 2.0);
    }

    #[test]
    fn eval_rejects_wrong_dimension() {
        let f = psi(l2(2), Node::abs_dev(&[1.0, 0.0], 0.0));
        assert!(matches!(f.eval(&[1.0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn certificate_examples() {
        let f = psi(l2(2), Node::abs_dev(&[3.0, 4.0], 0.0));
        assert_eq!(f.certified_lipschitz(), (5.0, true));
        let f = psi(
            l2(2),
            Node::scale(0.5, Node::scaled_dist(1.0, &[1.0, -1.0])),
        );
        assert_eq!(f.certified_lipschitz(), (0.5, true));
    }

    #[test]
    fn sum_certificate_is_sound_but_not_exact() {
        let sp = l2(2);
        let f = psi(
            sp,
            Node::Sum(vec![
                Node::abs_dev(&[3.0, 4.0], 0.0),
                Node::abs_dev(&[3.0, 4.0], 1.0),
            ]),
        );
        assert_eq!(f.certified_lipschitz(), (10.0, false));
        assert!(f.adversarial_pair().is_none());
        // Oracle: sampled difference quotients.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut worst: f64 = 0.0;
        for _ in 0..10_000 {
            let x: Vec<f64> = (0..2).map(|_| rng.random_range(-3.0..3.0)).collect();
            let y: Vec<f64> = (0..2).map(|_| rng.random_range(-3.0..3.0)).collect();
            worst = worst.max(f.quotient(&x, &y));
        }
        assert!(worst <= 10.0 + 1e-9);
        assert!(worst > 9.0);
    }

    #[test]
    fn constant_functionals_rejected() {
        let sp = l2(2);
        assert!(LipschitzFn::new(sp, Node::linear(&[0.0, 0.0])).is_err());
        assert!(LipschitzFn::new(sp, Node::scale(0.0, Node::linear(&[1.0, 0.0]))).is_err());
        assert!(LipschitzFn::new(
            sp,
            Node::Sum(vec![Node::linear(&[1.0, 2.0]), Node::linear(&[-1.0, -2.0])])
        )
        .is_err());
    }

    #[test]
    fn smooth_dist_requires_euclidean() {
        let sp = Space::new(2, Norm::L1).unwrap();
        assert!(matches!(
            LipschitzFn::new(sp, Node::smooth_dist(1.0, 1.0, &[0.0, 0.0])),
            Err(Error::Unsupported(_))
        ));
        assert!(LipschitzFn::new(l2(2), Node::smooth_dist(1.0, 0.0, &[0.0, 0.0])).is_err());
    }

    #[test]
    fn gradient_examples() {
        let f = psi(l2(2), Node::smooth_dist(1.0, 1.0, &[0.0, 0.0]));
        assert_eq!(f.gradient(&[0.0, 0.0]).unwrap(), Some(vec![0.0, 0.0]));
        let f = psi(l2(2), Node::abs_dev(&[1.0, 0.0], 0.0));
        assert_eq!(f.gradient(&[2.0, 7.0]).unwrap(), Some(vec![1.0, 0.0]));
        assert_eq!(f.gradient(&[0.0, 7.0]).unwrap(), None);
    }

    #[test]
    fn smooth_gradient_matches_finite_difference() {
        let f = psi(l2(1), Node::smooth_dist(1.0, 1.0, &[0.0]));
        let h = 1e-6;
        let fd = (f.eval(&[1.0 + h]).unwrap() - f.eval(&[1.0 - h]).unwrap()) / (2.0 * h);
        let g = f.gradient(&[1.0]).unwrap().unwrap()[0];
        assert!((fd - 0.5f64.sqrt()).abs() < 1e-9);
        assert!((g - fd).abs() <= 1e-5 * fd.abs());
    }

    #[test]
    fn max_ties_are_nondifferentiable() {
        let f = psi(
            l2(2),
            Node::MaxOf(vec![Node::linear(&[1.0, 0.0]), Node::linear(&[-1.0, 0.0])]),
        );
        assert_eq!(f.gradient(&[0.0, 3.0]).unwrap(), None);
        assert_eq!(f.gradient(&[-2.0, 3.0]).unwrap(), Some(vec![-1.0, 0.0]));
    }

    #[test]
    fn norm_gradients_detect_kinks() {
        let l1 = Space::new(2, Norm::L1).unwrap();
        let f = psi(l1, Node::scaled_dist(2.0, &[0.0, 0.0]));
        assert_eq!(f.gradient(&[1.0, 0.0]).unwrap(), None);
        assert_eq!(f.gradient(&[1.0, -3.0]).unwrap(), Some(vec![2.0, -2.0]));
        let linf = Space::new(2, Norm::LInf).unwrap();
        let f = psi(linf, Node::scaled_dist(1.0, &[0.0, 0.0]));
        assert_eq!(f.gradient(&[1.0, -1.0]).unwrap(), None);
        assert_eq!(f.gradient(&[0.5, -1.0]).unwrap(), Some(vec![0.0, -1.0]));
    }

    #[test]
    fn adversarial_pairs_reach_the_bound() {
        let sp = Space::new(3, Norm::LInf).unwrap();
        let c = [0.5, -1.0, 2.0];
        let trees = [
            Node::linear(&c),
            Node::abs_dev(&c, 0.7),
            Node::scaled_dist(3.5, &[1.0, 0.0, -1.0]),
            Node::MaxOf(vec![
                Node::shift(Node::linear(&c), 0.3),
                Node::shift(Node::linear(&[-0.5, 1.0, -2.0]), -0.2),
            ]),
            Node::scale(0.25, Node::abs_dev(&c, -1.0)),
        ];
        for t in trees {
            let f = psi(sp, t);
            let (x, y) = f.adversarial_pair().expect("exact family");
            assert!(f.quotient(&x, &y) >= 0.99 * f.lip_bound(), "{f}");
        }
        let f = psi(l2(2), Node::smooth_dist(2.0, 4.0, &[1.0, 1.0]));
        let (x, y) = f.adversarial_pair().unwrap();
        assert!(f.quotient(&x, &y) >= 0.99 * 2.0);
    }

    #[test]
    fn instance_regimes_enforced() {
        let sp = l2(2);
        let phi = LinearFunctional::new(vec![3.0, 4.0]).unwrap();
        let exact = psi(sp, Node::scaled_dist(5.0, &[0.0, 0.0]));
        assert!(ProblemInstance::new(sp, phi.clone(), exact.clone(), Regime::Equal).is_ok());
        assert!(ProblemInstance::new(sp, phi.clone(), exact, Regime::StrictLess).is_err());
        let loose = psi(
            sp,
            Node::Sum(vec![Node::linear(&[1.0, 0.0]), Node::linear(&[0.0, 1.0])]),
        );
        assert!(matches!(
            ProblemInstance::new(sp, phi.clone(), loose, Regime::Equal),
            Err(Error::Hypothesis(_))
        ));
        let small = psi(sp, Node::scaled_dist(4.0, &[0.0, 0.0]));
        assert!(ProblemInstance::new(sp, phi, small, Regime::StrictLess).is_ok());
    }
}
