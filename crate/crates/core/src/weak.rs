//! Weak values between a pre-selected state `|Φ⟩` and a post-selected state
//! `|Ψ⟩`, their decomposition identities, and the commutator test that
//! decides whether a projector's weak value is a conditional probability.

use crate::error::{Error, Result};
use crate::hilbert::{c64, Operator, OperatorKind, StateVector, C64, COMPARISON_TOL};

/// Below this `|⟨post|pre⟩|` post-selection is treated as impossible.
pub const OVERLAP_CUTOFF: f64 = 1e-12;

fn checked_overlap(pre: &StateVector, post: &StateVector) -> Result<C64> {
    let overlap = post.inner(pre)?;
    if overlap.norm() <= OVERLAP_CUTOFF {
        return Err(Error::OrthogonalSelection {
            overlap: overlap.norm(),
        });
    }
    Ok(overlap)
}

/// `⟨post|a|pre⟩ / ⟨post|pre⟩`.
pub fn weak_value(a: &Operator, pre: &StateVector, post: &StateVector) -> Result<C64> {
    let overlap = checked_overlap(pre, post)?;
    Ok(a.matrix_element(post, pre)? / overlap)
}

/// One term `(Pr(ψⱼ|Φ), ⟨a⟩_{ψⱼΦ})` of the expectation decomposition.
/// `weak_value` is `None` when `ψⱼ` is orthogonal to `Φ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpectationTerm {
    pub probability: f64,
    pub weak_value: Option<C64>,
}

/// Splits `⟨Φ|a|Φ⟩` into `Σⱼ Pr(ψⱼ|Φ) ⟨a⟩_{ψⱼΦ}` over an orthonormal basis.
pub fn decompose_expectation(a: &Operator, phi: &StateVector, basis: &[StateVector]) -> Result<Vec<ExpectationTerm>> {
    let dim = phi.dim();
    if a.dim() != dim {
        return Err(Error::DimMismatch {
            left: a.dim(),
            right: dim,
        });
    }
    if basis.len() != dim {
        return Err(Error::IncompleteBasis { defect: 1.0 });
    }
    let mut resolution = Operator::zero(dim);
    for b in basis {
        if b.dim() != dim {
            return Err(Error::DimMismatch {
                left: b.dim(),
                right: dim,
            });
        }
        resolution = resolution.add(&b.projector())?;
    }
    let defect = resolution.sub(&Operator::identity(dim))?.max_abs();
    if defect > COMPARISON_TOL {
        return Err(Error::IncompleteBasis { defect });
    }

    basis
        .iter()
        .map(|psi| match weak_value(a, phi, psi) {
            Ok(w) => Ok(ExpectationTerm {
                probability: psi.inner(phi)?.norm_sqr(),
                weak_value: Some(w),
            }),
            Err(Error::OrthogonalSelection { .. }) => Ok(ExpectationTerm {
                probability: 0.0,
                weak_value: None,
            }),
            Err(e) => Err(e),
        })
        .collect()
}

/// Which of the three commutation conditions hold.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Conditions {
    /// `[|Ψ⟩⟨Ψ|, a] = 0`
    pub post_commutes: bool,
    /// `[|Φ⟩⟨Φ|, a] = 0`
    pub pre_commutes: bool,
    /// `[|Ψ⟩⟨Ψ|, |Φ⟩⟨Φ|] = 0`
    pub pre_post_commute: bool,
}

impl Conditions {
    pub fn is_empty(&self) -> bool {
        !(self.post_commutes || self.pre_commutes || self.pre_post_commute)
    }

    pub fn names(&self) -> Vec<&'static str> {
        let mut v = Vec::new();
        if self.post_commutes {
            v.push("PostCommutes");
        }
        if self.pre_commutes {
            v.push("PreCommutes");
        }
        if self.pre_post_commute {
            v.push("PrePostCommute");
        }
        v
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    ConditionalProbability(Conditions),
    NotProbability,
}

impl Classification {
    pub fn is_conditional_probability(&self) -> bool {
        matches!(self, Classification::ConditionalProbability(_))
    }
}

/// Operator norms of the three commutators entering the classification.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CommutatorNorms {
    /// `‖[Ψ̂, a]‖`
    pub post_observable: f64,
    /// `‖[Φ̂, a]‖`
    pub pre_observable: f64,
    /// `‖[Ψ̂, Φ̂]‖`
    pub post_pre: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeakValueReport {
    pub value: C64,
    /// `⟨post|pre⟩`
    pub pre_post_overlap: C64,
    pub observable_kind: OperatorKind,
    pub classification: Classification,
    pub commutator_norms: CommutatorNorms,
    /// `⟨Φ|(Ψ̂a + aΨ̂)/2|Φ⟩ / Pr(Ψ|Φ)`, real for hermitian `a`.
    pub real_part_symmetric: C64,
    /// `⟨Φ|[Ψ̂, a]/2|Φ⟩ / Pr(Ψ|Φ)`, imaginary for hermitian `a`.
    pub commutator_part: C64,
}

impl WeakValueReport {
    pub fn post_selection_probability(&self) -> f64 {
        self.pre_post_overlap.norm_sqr()
    }
}

/// Weak value of a projector together with its classification.
pub fn classify(a_proj: &Operator, pre: &StateVector, post: &StateVector, tol: f64) -> Result<WeakValueReport> {
    a_proj.require_projector()?;
    evaluate(a_proj, pre, post, tol)
}

/// Same as [`classify`] without the projector requirement. For a hermitian
/// non-projector a conditional verdict reads as a conditional expectation.
pub fn evaluate(a: &Operator, pre: &StateVector, post: &StateVector, tol: f64) -> Result<WeakValueReport> {
    let overlap = checked_overlap(pre, post)?;
    let value = a.matrix_element(post, pre)? / overlap;
    let psi_hat = post.projector();
    let phi_hat = pre.projector();

    let commutator_norms = CommutatorNorms {
        post_observable: psi_hat.commutator(a)?.norm(),
        pre_observable: phi_hat.commutator(a)?.norm(),
        post_pre: psi_hat.commutator(&phi_hat)?.norm(),
    };
    let conditions = Conditions {
        post_commutes: commutator_norms.post_observable <= tol,
        pre_commutes: commutator_norms.pre_observable <= tol,
        pre_post_commute: commutator_norms.post_pre <= tol,
    };
    let classification = if conditions.is_empty() {
        Classification::NotProbability
    } else {
        Classification::ConditionalProbability(conditions)
    };

    let (symmetric, commutator) = split_unchecked(&psi_hat, a, pre)?;
    let pr = overlap.norm_sqr();
    Ok(WeakValueReport {
        value,
        pre_post_overlap: overlap,
        observable_kind: a.kind(),
        classification,
        commutator_norms,
        real_part_symmetric: symmetric / pr,
        commutator_part: commutator / pr,
    })
}

fn split_unchecked(psi_proj: &Operator, a: &Operator, phi: &StateVector) -> Result<(C64, C64)> {
    let half = c64(0.5, 0.0);
    let symmetric = psi_proj.anticommutator(a)?.expectation(phi)? * half;
    let commutator = psi_proj.commutator(a)?.expectation(phi)? * half;
    Ok((symmetric, commutator))
}

/// `⟨Φ|Ψ̂Â|Φ⟩` split into `⟨Φ|{Ψ̂, Â}/2|Φ⟩` (real) and `⟨Φ|[Ψ̂, Â]/2|Φ⟩`
/// (imaginary).
pub fn real_imag_split(psi_proj: &Operator, a_proj: &Operator, phi: &StateVector) -> Result<(C64, C64)> {
    psi_proj.require_projector()?;
    a_proj.require_projector()?;
    split_unchecked(psi_proj, a_proj, phi)
}

/// Both sides of `|⟨Âᵢ⟩_{ψⱼΦ}|² = Pr(aᵢ|ψⱼ) Pr(aᵢ|Φ) / Pr(ψⱼ|Φ)` for a
/// rank-1 projector `Âᵢ`.
pub fn squared_weak_value_check(a_i: &Operator, psi_j: &StateVector, phi: &StateVector) -> Result<(f64, f64)> {
    a_i.require_projector()?;
    let trace = a_i.trace().re;
    if (trace - 1.0).abs() > 1e-9 {
        return Err(Error::NotRankOne { trace });
    }
    let lhs = weak_value(a_i, phi, psi_j)?.norm_sqr();
    let pr_a_psi = a_i.expectation(psi_j)?.re;
    let pr_a_phi = a_i.expectation(phi)?.re;
    let pr_psi_phi = psi_j.inner(phi)?.norm_sqr();
    Ok((lhs, pr_a_psi * pr_a_phi / pr_psi_phi))
}

/// The hermitian sandwich `Â Ψ̂ⱼ Â`.
pub fn sandwich(a: &Operator, psi_proj: &Operator) -> Result<Operator> {
    a.require_hermitian()?;
    psi_proj.require_projector()?;
    let m = a.entries() * psi_proj.entries() * a.entries();
    let kind = if crate::hilbert::idempotency_defect(&m) <= crate::hilbert::CONSTRUCTION_TOL {
        OperatorKind::Projector
    } else {
        OperatorKind::Hermitian
    };
    Ok(Operator::raw(crate::hilbert::hermitize(&m), kind))
}

/// `(|⟨Â⟩_{ψΦ}|², ⟨Φ|ÂΨ̂Â|Φ⟩ / Pr(ψ|Φ))`.
pub fn sandwich_check(a: &Operator, psi: &StateVector, phi: &StateVector) -> Result<(f64, f64)> {
    let h = sandwich(a, &psi.projector())?;
    let lhs = weak_value(a, phi, psi)?.norm_sqr();
    let rhs = h.expectation(phi)?.re / psi.inner(phi)?.norm_sqr();
    Ok((lhs, rhs))
}
