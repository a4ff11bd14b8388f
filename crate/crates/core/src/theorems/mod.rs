//! Verifiers for the infimum identities.
//!
//! Each verifier computes the two sides of one identity through structurally
//! different code paths (endpoint infima through the optimizer, conjugate
//! sides through the closed-form γ machinery plus the optimizer) and compares
//! them in a [`VerificationReport`].
//!
//! Verdict rules:
//! * any inconclusive side makes the verdict [`Verdict::Inconclusive`];
//! * two sides that are both certified unbounded below pass;
//! * one unbounded side against a finite one fails;
//! * two finite sides pass iff their gap is within tolerance.

mod absolute;
mod geometry;
mod minimax;
mod nonattainment;

pub use absolute::verify_theorem4;
pub use geometry::{fixed_point_iterate, in_fixed_set, verify_fixed_point, verify_hausdorff, FixedPointRun};
pub use minimax::{verify_theorem1, verify_theorem3, Region, RegionPartition};
pub use nonattainment::{check_nonattainment, verify_unbounded};

use serde::{Deserialize, Serialize};

use crate::optimizer::{InfResult, InfStatus};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum StatementId {
    #[serde(rename = "THM1")]
    Thm1,
    #[serde(rename = "THM2_FIX")]
    Thm2Fix,
    #[serde(rename = "THM2_HAUS")]
    Thm2Haus,
    #[serde(rename = "THM3")]
    Thm3,
    #[serde(rename = "THM4_3")]
    Thm4Eq3,
    #[serde(rename = "THM4_4")]
    Thm4Eq4,
    #[serde(rename = "THM4_5")]
    Thm4Eq5,
    #[serde(rename = "THM4_6")]
    Thm4Eq6,
    #[serde(rename = "PROP1")]
    Prop1,
    #[serde(rename = "PROP21")]
    Prop21,
}

impl StatementId {
    pub const ALL: [StatementId; 10] = [
        StatementId::Thm1,
        StatementId::Thm2Fix,
        StatementId::Thm2Haus,
        StatementId::Thm3,
        StatementId::Thm4Eq3,
        StatementId::Thm4Eq4,
        StatementId::Thm4Eq5,
        StatementId::Thm4Eq6,
        StatementId::Prop1,
        StatementId::Prop21,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StatementId::Thm1 => "THM1",
            StatementId::Thm2Fix => "THM2_FIX",
            StatementId::Thm2Haus => "THM2_HAUS",
            StatementId::Thm3 => "THM3",
            StatementId::Thm4Eq3 => "THM4_3",
            StatementId::Thm4Eq4 => "THM4_4",
            StatementId::Thm4Eq5 => "THM4_5",
            StatementId::Thm4Eq6 => "THM4_6",
            StatementId::Prop1 => "PROP1",
            StatementId::Prop21 => "PROP21",
        }
    }

    pub fn is_theorem4(self) -> bool {
        matches!(
            self,
            StatementId::Thm4Eq3 | StatementId::Thm4Eq4 | StatementId::Thm4Eq5 | StatementId::Thm4Eq6
        )
    }
}

impl std::fmt::Display for StatementId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for StatementId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        StatementId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| format!("unknown statement id {s:?}"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Provenance {
    ClosedForm,
    Optimizer,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gap {
    Value(f64),
    BothNegInf,
    /// Not comparable (one side unbounded or inconclusive).
    Undefined,
}

/// Comparison tolerances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Applied when either side comes from a budgeted search.
    #[serde(default = "default_optimizer_tol")]
    pub optimizer: f64,
    /// Applied when both sides are closed-form.
    #[serde(default = "default_closed_form_tol")]
    pub closed_form: f64,
}

fn default_optimizer_tol() -> f64 {
    1e-3
}

fn default_closed_form_tol() -> f64 {
    1e-9
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            optimizer: default_optimizer_tol(),
            closed_form: default_closed_form_tol(),
        }
    }
}

impl Tolerances {
    pub fn for_sides(&self, lhs: Provenance, rhs: Provenance) -> f64 {
        if lhs == Provenance::ClosedForm && rhs == Provenance::ClosedForm {
            self.closed_form
        } else {
            self.optimizer
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub statement_id: StatementId,
    pub lhs: f64,
    pub rhs: f64,
    pub gap: Gap,
    pub tolerance: f64,
    pub verdict: Verdict,
    pub lhs_provenance: Provenance,
    pub rhs_provenance: Provenance,
    pub budget_used: u64,
    /// Plot series: (R, shell inf) for THM4_4, (iteration, step norm) for THM2_FIX.
    pub series: Vec<(f64, f64)>,
    pub notes: Vec<String>,
}

/// Outcome of one side of an identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum SideStatus {
    Finite,
    /// Unbounded below with an explicit certificate.
    Unbounded,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Side {
    pub value: f64,
    pub status: SideStatus,
    pub provenance: Provenance,
}

impl Side {
    pub fn finite(value: f64, provenance: Provenance) -> Self {
        Self {
            value,
            status: SideStatus::Finite,
            provenance,
        }
    }

    pub fn unbounded(provenance: Provenance) -> Self {
        Self {
            value: f64::NEG_INFINITY,
            status: SideStatus::Unbounded,
            provenance,
        }
    }

    /// Side from a search result, shifted by a constant (e.g. −γ(λ)).
    pub fn from_inf(r: &InfResult, offset: f64) -> Self {
        let status = match r.status {
            InfStatus::Finite => SideStatus::Finite,
            InfStatus::UnboundedBelow if r.ray.is_some() => SideStatus::Unbounded,
            _ => SideStatus::Inconclusive,
        };
        Self {
            value: r.value + offset,
            status,
            provenance: Provenance::Optimizer,
        }
    }

    /// max of two extended reals.
    pub fn max(self, other: Side) -> Side {
        use SideStatus::*;
        let provenance = merge(self.provenance, other.provenance);
        match (self.status, other.status) {
            (Inconclusive, _) | (_, Inconclusive) => Side {
                value: self.value.max(other.value),
                status: Inconclusive,
                provenance,
            },
            (Unbounded, Unbounded) => Side::unbounded(provenance),
            (Unbounded, Finite) => Side::finite(other.value, provenance),
            (Finite, Unbounded) => Side::finite(self.value, provenance),
            (Finite, Finite) => Side::finite(self.value.max(other.value), provenance),
        }
    }

    /// min of two extended reals; an unbounded side dominates.
    pub fn min(self, other: Side) -> Side {
        use SideStatus::*;
        let provenance = merge(self.provenance, other.provenance);
        match (self.status, other.status) {
            (Unbounded, _) | (_, Unbounded) => Side::unbounded(provenance),
            (Inconclusive, _) | (_, Inconclusive) => Side {
                value: self.value.min(other.value),
                status: Inconclusive,
                provenance,
            },
            (Finite, Finite) => Side::finite(self.value.min(other.value), provenance),
        }
    }
}

fn merge(a: Provenance, b: Provenance) -> Provenance {
    if a == Provenance::ClosedForm {
        b
    } else {
        a
    }
}

pub(crate) fn compare(lhs: Side, rhs: Side, tolerance: f64) -> (Gap, Verdict) {
    use SideStatus::*;
    match (lhs.status, rhs.status) {
        (Inconclusive, _) | (_, Inconclusive) => (Gap::Undefined, Verdict::Inconclusive),
        (Unbounded, Unbounded) => (Gap::BothNegInf, Verdict::Pass),
        (Unbounded, Finite) | (Finite, Unbounded) => (Gap::Undefined, Verdict::Fail),
        (Finite, Finite) => {
            let gap = (lhs.value - rhs.value).abs();
            let verdict = if gap <= tolerance { Verdict::Pass } else { Verdict::Fail };
            (Gap::Value(gap), verdict)
        }
    }
}

pub(crate) fn report(
    statement_id: StatementId,
    lhs: Side,
    rhs: Side,
    tolerances: &Tolerances,
    budget_used: u64,
) -> VerificationReport {
    let tolerance = tolerances.for_sides(lhs.provenance, rhs.provenance);
    let (gap, verdict) = compare(lhs, rhs, tolerance);
    VerificationReport {
        statement_id,
        lhs: lhs.value,
        rhs: rhs.value,
        gap,
        tolerance,
        verdict,
        lhs_provenance: lhs.provenance,
        rhs_provenance: rhs.provenance,
        budget_used,
        series: Vec::new(),
        notes: Vec::new(),
    }
}
