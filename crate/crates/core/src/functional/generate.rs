use rand::Rng;

use super::{LipschitzFn, Node, ProblemInstance, Regime};
use crate::banach::{LinearFunctional, Norm, Space};
use crate::error::Result;
use crate::rng;

const GENERATOR_STREAM: u64 = 0x67_656e;

/// Deterministic random instance for the verifiers.
///
/// In the `Equal` regime ψ is drawn from the certified-exact families: an
/// absolute deviation of φ with a random offset, a distance (or smoothed
/// Euclidean distance) scaled by ‖φ‖, or the max of ±φ shifted by constants.
/// `StrictLess` scales that ψ by a factor in [0.2, 0.9].
pub fn generate_instance(seed: u64, space: Space, regime: Regime) -> Result<ProblemInstance> {
    let n = space.dim();
    let mut rng = rng::stream(seed, &[GENERATOR_STREAM, n as u64]);

    let coeffs = loop {
        let c: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();
        if space.dual_norm_of(&c) >= 0.25 {
            break c;
        }
    };
    let dn = space.dual_norm_of(&coeffs);
    let center: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..=1.0)).collect();

    let families = if space.norm_kind() == Norm::L2 { 4 } else { 3 };
    let node = match rng.random_range(0..families) {
        0 => Node::abs_dev(&coeffs, rng.random_range(-1.0..=1.0)),
        1 => Node::scaled_dist(dn, &center),
        2 => {
            let neg: Vec<f64> = coeffs.iter().map(|c| -c).collect();
            Node::MaxOf(vec![
                Node::shift(Node::linear(&coeffs), rng.random_range(-1.0..=1.0)),
                Node::shift(Node::linear(&neg), rng.random_range(-1.0..=1.0)),
            ])
        }
        _ => Node::smooth_dist(dn, rng.random_range(0.1..=1.0), &center),
    };
    let node = match regime {
        Regime::Equal => node,
        Regime::StrictLess => Node::scale(rng.random_range(0.2..=0.9), node),
    };

    let psi = LipschitzFn::new(space, node)?;
    ProblemInstance::new(space, LinearFunctional::new(coeffs)?, psi, regime)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn equal_regime_matches_dual_norm() {
        let space = Space::euclidean(2).unwrap();
        let inst = generate_instance(0, space, Regime::Equal).unwrap();
        let (bound, exact) = inst.psi.certified_lipschitz();
        assert!(exact);
        assert!((bound - inst.phi_norm()).abs() <= 1e-12 * inst.phi_norm());
    }

    #[test]
    fn generation_is_deterministic() {
        let space = Space::new(3, Norm::LInf).unwrap();
        let a = generate_instance(42, space, Regime::Equal).unwrap();
        let b = generate_instance(42, space, Regime::Equal).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.psi.to_string(), b.psi.to_string());
    }

    #[test]
    fn seed_sweep_passes_lipschitz_sampler() {
        for seed in 0..100u64 {
            let norm = [Norm::L1, Norm::L2, Norm::LInf][(seed % 3) as usize];
            let space = Space::new(1 + (seed % 3) as usize, norm).unwrap();
            let regime = if seed % 5 == 0 { Regime::StrictLess } else { Regime::Equal };
            let inst = generate_instance(seed, space, regime).unwrap();
            let psi = &inst.psi;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..1000 {
                let x = space.sample_ball(20.0, &mut rng);
                let y = space.sample_ball(20.0, &mut rng);
                let lhs = (psi.eval_unchecked(&x) - psi.eval_unchecked(&y)).abs();
                assert!(lhs <= psi.lip_bound() * space.dist(&x, &y) + 1e-9, "seed {seed}: {psi}");
            }
            if regime == Regime::Equal {
                let (x, y) = psi.adversarial_pair().unwrap();
                assert!(psi.quotient(&x, &y) >= 0.99 * psi.lip_bound(), "seed {seed}: {psi}");
            } else {
                assert!(psi.lip_bound() < inst.phi_norm());
            }
        }
    }
}
