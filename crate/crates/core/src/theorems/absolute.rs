use super::minimax::require_equal;
use super::{report, Provenance, Side, SideStatus, StatementId, Tolerances, Verdict, VerificationReport};
use crate::error::Result;
use crate::functional::ProblemInstance;
use crate::optimizer::{estimate_inf, shell_search, InfResult, SearchBudget, UNBOUNDED_SLOPE};

/// Checks the four absolute-value identities on one instance.
///
/// Returns reports for, in order: max(inf(φ+ψ), inf(φ−ψ)) = inf(φ+|ψ|); the
/// liminf of φ+|ψ| at infinity (shell infima over [R, 2R] at the largest
/// schedule radius) = inf(φ+|ψ|); the signed maximum = inf(φ+|ψ|+e^{−|ψ|});
/// and inf(φ+|ψ|) = inf(φ+|ψ|+e^{−|ψ|}).
pub fn verify_theorem4(
    inst: &ProblemInstance,
    budget: &SearchBudget,
    tolerances: &Tolerances,
) -> Result<Vec<VerificationReport>> {
    require_equal(inst)?;
    let psi = &inst.psi;
    let phi = &inst.phi;
    let plus_f = |x: &[f64]| phi.apply(x) + psi.eval_unchecked(x);
    let minus_f = |x: &[f64]| phi.apply(x) - psi.eval_unchecked(x);
    let abs_f = |x: &[f64]| phi.apply(x) + psi.eval_unchecked(x).abs();
    let exp_f = |x: &[f64]| {
        let m = psi.eval_unchecked(x).abs();
        phi.apply(x) + m + (-m).exp()
    };

    let plus = estimate_inf(&plus_f, &inst.space, budget)?;
    let minus = estimate_inf(&minus_f, &inst.space, budget)?;
    let abs = estimate_inf(&abs_f, &inst.space, budget)?;
    let exp = estimate_inf(&exp_f, &inst.space, budget)?;

    let signed = Side::from_inf(&plus, 0.0).max(Side::from_inf(&minus, 0.0));
    let j = Side::from_inf(&abs, 0.0);
    let k = Side::from_inf(&exp, 0.0);
    let signed_used = plus.budget_used + minus.budget_used;

    // Pointwise orders behind the trivial inequalities, at every witness.
    let witnesses = witnesses(&[&plus, &minus, &abs, &exp]);
    let order_ok = witnesses
        .iter()
        .all(|x| abs_f(x) >= plus_f(x) && abs_f(x) >= minus_f(x) && exp_f(x) >= abs_f(x));

    let mut eq3 = report(StatementId::Thm4Eq3, signed, j, tolerances, signed_used + abs.budget_used);
    if !order_ok {
        eq3.verdict = Verdict::Fail;
        eq3.notes.push("pointwise order violated at a witness".into());
    }

    let mut series = Vec::with_capacity(budget.radii.len());
    let mut shell_used = 0;
    for &r in &budget.radii {
        let s = shell_search(&abs_f, &inst.space, r, 2.0 * r, budget)?;
        shell_used += s.budget_used;
        series.push((r, s.value));
    }
    let shell_side = shell_limit(&series);
    let mut eq4 = report(StatementId::Thm4Eq4, shell_side, j, tolerances, shell_used + abs.budget_used);
    eq4.series = series;

    let eq5 = report(StatementId::Thm4Eq5, signed, k, tolerances, signed_used + exp.budget_used);
    let mut eq6 = report(StatementId::Thm4Eq6, j, k, tolerances, abs.budget_used + exp.budget_used);
    if !order_ok {
        eq6.verdict = Verdict::Fail;
    }
    Ok(vec![eq3, eq4, eq5, eq6])
}

fn witnesses(results: &[&InfResult]) -> Vec<Vec<f64>> {
    results
        .iter()
        .flat_map(|r| r.trajectory.iter().map(|t| t.witness.clone()))
        .collect()
}

/// The liminf estimate: the shell infimum at the largest radius, or −∞ when
/// the shell infima fall at least linearly in R: every rate of decrease is
/// below the unboundedness slope and none is less than half the previous one.
fn shell_limit(series: &[(f64, f64)]) -> Side {
    let (_, last) = *series.last().expect("radii are non-empty");
    let rates: Vec<f64> = series
        .windows(2)
        .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
        .collect();
    let diverging = !rates.is_empty()
        && rates.iter().all(|&r| r <= UNBOUNDED_SLOPE)
        && rates.windows(2).all(|w| w[1] <= 0.5 * w[0]);
    if diverging {
        Side::unbounded(Provenance::Optimizer)
    } else {
        Side {
            value: last,
            status: if last.is_finite() { SideStatus::Finite } else { SideStatus::Inconclusive },
            provenance: Provenance::Optimizer,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::banach::{LinearFunctional, Space};
    use crate::functional::{LipschitzFn, Node, Regime};

    fn instance(psi: Node) -> ProblemInstance {
        let space = Space::euclidean(2).unwrap();
        let psi = LipschitzFn::new(space, psi).unwrap();
        ProblemInstance::new(space, LinearFunctional::new(vec![1.0, 0.0]).unwrap(), psi, Regime::Equal).unwrap()
    }

    #[test]
    fn abs_value_instance_passes_all_four() {
        let inst = instance(Node::abs_dev(&[1.0, 0.0], 0.0));
        let reps = verify_theorem4(&inst, &SearchBudget::default(), &Tolerances::default()).unwrap();
        let ids: Vec<_> = reps.iter().map(|r| r.statement_id).collect();
        assert_eq!(
            ids,
            [StatementId::Thm4Eq3, StatementId::Thm4Eq4, StatementId::Thm4Eq5, StatementId::Thm4Eq6]
        );
        for r in &reps {
            assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
            assert!(r.rhs.abs() < 1e-3);
        }
        assert_eq!(reps[1].series.len(), 4);
        assert!(reps[1].series.iter().all(|(_, v)| v.abs() < 1e-6));
    }

    #[test]
    fn smooth_distance_approaches_zero_slowly() {
        let inst = instance(Node::smooth_dist(1.0, 1.0, &[0.0, 0.0]));
        let budget = SearchBudget::default().with_decades(7);
        let reps = verify_theorem4(&inst, &budget, &Tolerances::default()).unwrap();
        for r in &reps {
            assert_eq!(r.verdict, Verdict::Pass, "{r:?}");
        }
    }

    #[test]
    fn diverging_shells_read_as_unbounded() {
        let s = shell_limit(&[(1.0, -1.0), (10.0, -10.0), (100.0, -100.0)]);
        assert_eq!(s.status, SideStatus::Unbounded);
        let s = shell_limit(&[(1.0, 0.5), (10.0, 0.05), (100.0, 0.005)]);
        assert_eq!(s.status, SideStatus::Finite);
    }
}
