//! Quantum logic on the projector lattice of a single Hilbert space.
//!
//! Propositions are projectors. `meet` is the projector onto the
//! intersection of ranges, obtained as the limit of `(pq)ⁿ`; `join` follows
//! by De Morgan from the orthocomplement `I − p`.
//!
//! The effective-commutativity checks use the commutator weak value
//! `⟨[Y, X]⟩_{yx}` read with `|y⟩` as the post-selected state and `|x⟩` as
//! the pre-selected one, the same ordering as [`crate::weak::weak_value`].

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::hilbert::{c64, eig_hermitian, hermitize, operator_norm, Operator, OperatorKind, StateVector, C64};
use crate::weak;

/// Default iteration cap for [`meet`].
pub const MEET_MAX_ITER: usize = 10_000;
/// Default convergence tolerance for [`meet`].
pub const MEET_TOL: f64 = 1e-12;

/// Outcome of a lattice identity check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LatticeVerdict {
    pub holds: bool,
    /// Operator-norm residual of the tested identity.
    pub defect: f64,
}

fn require_pair(p: &Operator, q: &Operator) -> Result<()> {
    p.require_projector()?;
    q.require_projector()?;
    if p.dim() != q.dim() {
        return Err(Error::DimMismatch {
            left: p.dim(),
            right: q.dim(),
        });
    }
    Ok(())
}

/// True iff `‖[p, q]‖ ≤ tol`.
pub fn commutes(p: &Operator, q: &Operator, tol: f64) -> Result<bool> {
    require_pair(p, q)?;
    Ok(p.commutator(q)?.norm() <= tol)
}

/// Projector onto `range(p) ∩ range(q)`.
///
/// Iterates by repeated squaring, so step `k` holds `(pq)^(2^k)`, and stops
/// once two successive iterates agree within `tol`. The limit is then
/// hermitized and its spectrum snapped to {0, 1} at 0.5.
pub fn meet(p: &Operator, q: &Operator, max_iter: usize, tol: f64) -> Result<Operator> {
    require_pair(p, q)?;
    let product = p.entries() * q.entries();
    if operator_norm(&(&product - q.entries() * p.entries())) <= CONSTRUCTION_COMMUTE_TOL {
        return Ok(commuting_product(product));
    }

    let mut current = product;
    let mut iterations = 0;
    let mut step = f64::INFINITY;
    while iterations < max_iter {
        let next = &current * &current;
        step = operator_norm(&(&next - &current));
        current = next;
        iterations += 1;
        if step <= tol {
            break;
        }
    }
    let rounded = spectral_round(&current);
    let defect = operator_norm(&(rounded.entries() - &current));
    if step > tol && defect > tol {
        return Err(Error::NoConvergence { iterations, defect });
    }
    Ok(rounded)
}

// commuting projectors multiply to their meet; skip the iteration
const CONSTRUCTION_COMMUTE_TOL: f64 = 1e-12;

fn commuting_product(m: DMatrix<C64>) -> Operator {
    Operator::raw(hermitize(&m), OperatorKind::Projector)
}

fn spectral_round(m: &DMatrix<C64>) -> Operator {
    let h = Operator::raw(hermitize(m), OperatorKind::Hermitian);
    let spec = eig_hermitian(&h).expect("hermitized");
    let n = m.nrows();
    let mut out = DMatrix::<C64>::zeros(n, n);
    for (lambda, proj) in spec.iter() {
        if lambda > 0.5 {
            out += proj.entries();
        }
    }
    Operator::raw(hermitize(&out), OperatorKind::Projector)
}

/// `I − p`.
pub fn orthocomplement(p: &Operator) -> Result<Operator> {
    p.require_projector()?;
    let m = DMatrix::<C64>::identity(p.dim(), p.dim()) - p.entries();
    Ok(Operator::raw(m, OperatorKind::Projector))
}

/// `(p^⊥ ∧ q^⊥)^⊥`.
pub fn join(p: &Operator, q: &Operator) -> Result<Operator> {
    require_pair(p, q)?;
    let m = meet(&orthocomplement(p)?, &orthocomplement(q)?, MEET_MAX_ITER, MEET_TOL)?;
    orthocomplement(&m)
}

/// Checks `q = p ∨ (q ∧ p^⊥)` for `p ≤ q`.
pub fn check_orthomodular(p: &Operator, q: &Operator, tol: f64) -> Result<LatticeVerdict> {
    require_pair(p, q)?;
    let below = operator_norm(&(q.entries() * p.entries() - p.entries()));
    if below > tol {
        return Err(Error::PreconditionFailed(format!(
            "p is not below q (‖qp − p‖ = {below:e})"
        )));
    }
    let inner = meet(q, &orthocomplement(p)?, MEET_MAX_ITER, MEET_TOL)?;
    let rhs = join(p, &inner)?;
    let defect = operator_norm(&(rhs.entries() - q.entries()));
    Ok(LatticeVerdict {
        holds: defect <= tol,
        defect,
    })
}

/// Fits the scalar `c` in `pnpn = c·pn` by least squares over the matrix
/// entries.
pub fn identity_coefficient(p: &Operator, n: &Operator) -> Result<C64> {
    if p.dim() != n.dim() {
        return Err(Error::DimMismatch {
            left: p.dim(),
            right: n.dim(),
        });
    }
    let pn = p.entries() * n.entries();
    let pnpn = &pn * &pn;
    let denom: f64 = pn.iter().map(|z| z.norm_sqr()).sum();
    if denom <= 1e-24 {
        return Err(Error::PreconditionFailed("product pn vanishes".into()));
    }
    let num: C64 = pn.iter().zip(pnpn.iter()).map(|(b, a)| b.conj() * a).sum();
    let c = num / denom;
    let residual = operator_norm(&(&pnpn - pn.map(|z| z * c)));
    if residual > 1e-10 {
        return Err(Error::NotProportional { residual });
    }
    Ok(c)
}

/// Result of [`effective_commutativity`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EffectiveCommutativity {
    /// `|⟨[Y, X]⟩_{yx}| < relative_error`.
    pub holds: bool,
    pub commutator_weak_value: C64,
    /// `1 − ⟨[Y, X]⟩_{yx}`, the factor in `YXYX = (1 − ⟨[Y, X]⟩_{yx}) YX`.
    pub coefficient: C64,
    /// Operator-norm residual of that identity.
    pub identity_residual: f64,
}

/// Decides whether `y_proj · x_proj` may be treated as a proposition at the
/// given relative error. `post` spans the `y` eigenvector, `pre` the `x` one.
pub fn effective_commutativity(
    y_proj: &Operator,
    x_proj: &Operator,
    relative_error: f64,
    pre: &StateVector,
    post: &StateVector,
) -> Result<EffectiveCommutativity> {
    require_pair(y_proj, x_proj)?;
    let comm = y_proj.commutator(x_proj)?;
    let w = weak::weak_value(&comm, pre, post).map_err(|e| match e {
        Error::OrthogonalSelection { overlap } => Error::UndefinedWeakValue { overlap },
        other => other,
    })?;
    let coefficient = c64(1.0, 0.0) - w;
    let yx = y_proj.entries() * x_proj.entries();
    let lhs = &yx * &yx;
    let identity_residual = operator_norm(&(lhs - yx.map(|z| z * coefficient)));
    Ok(EffectiveCommutativity {
        holds: w.norm() < relative_error,
        commutator_weak_value: w,
        coefficient,
        identity_residual,
    })
}

/// Result of [`effective_observable_product`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ObservableProductCheck {
    pub holds: bool,
    /// `Σᵢ ⟨Ξ|Y Xᵢ|Ξ⟩ xᵢ ⟨[Y, Xᵢ]⟩_{y xᵢ}`.
    pub correction: C64,
}

/// Decides whether `⟨Ξ|Y X|Ξ⟩` may be read as an expectation value at the
/// given absolute error, for hermitian `X = Σ xᵢ Xᵢ` and rank-1 `Y = |y⟩⟨y|`.
///
/// For a degenerate `Xᵢ` the `x` eigenvector is taken as the normalized
/// projection `Xᵢ|y⟩`; terms with `Xᵢ|y⟩ = 0` vanish since then `Y Xᵢ = 0`.
pub fn effective_observable_product(
    x_obs: &Operator,
    y_proj: &Operator,
    state: &StateVector,
    absolute_error: f64,
) -> Result<ObservableProductCheck> {
    x_obs.require_hermitian()?;
    y_proj.require_projector()?;
    let y = y_proj.rank_one_vector()?;
    let spec = eig_hermitian(x_obs)?;
    let mut correction = c64(0.0, 0.0);
    for (x_i, proj) in spec.iter() {
        let projected = proj.apply(&y)?;
        if projected.norm() <= 1e-12 {
            continue;
        }
        let x_state = StateVector::new(projected.as_slice())?;
        let comm = y_proj.commutator(proj)?;
        let w = weak::weak_value(&comm, &x_state, &y)?;
        let joint = y_proj.compose(proj)?.expectation(state)?;
        correction += joint * x_i * w;
    }
    Ok(ObservableProductCheck {
        holds: correction.norm() < absolute_error,
        correction,
    })
}
