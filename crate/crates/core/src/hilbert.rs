//! Dense complex linear algebra over finite-dimensional Hilbert spaces.
//!
//! States are normalized amplitude vectors, operators are square complex
//! matrices tagged with a cached [`OperatorKind`]. Composite systems are
//! built with the Kronecker product in left-major order: for `a ⊗ b` the
//! basis index is `i * dim(b) + j`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance used when validating freshly constructed states and operators.
pub const CONSTRUCTION_TOL: f64 = 1e-12;
/// Default tolerance for comparisons between computed quantities.
pub const COMPARISON_TOL: f64 = 1e-10;
/// Eigenvalues closer than this are merged into one eigenprojector.
pub const MERGE_TOL: f64 = 1e-9;

pub type C64 = Complex64;

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    Complex64::new(re, im)
}

/// A normalized pure state.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amplitudes: DVector<C64>,
}

impl StateVector {
    /// Normalizes `raw` into a state. Fails when the norm is at or below
    /// [`CONSTRUCTION_TOL`].
    pub fn new(raw: &[C64]) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::Empty);
        }
        let v = DVector::from_column_slice(raw);
        let norm = v.norm();
        if norm <= CONSTRUCTION_TOL || !norm.is_finite() {
            return Err(Error::ZeroVector { norm });
        }
        Ok(Self {
            amplitudes: v.unscale(norm),
        })
    }

    pub fn from_real(raw: &[f64]) -> Result<Self> {
        let v: Vec<C64> = raw.iter().map(|&x| c64(x, 0.0)).collect();
        Self::new(&v)
    }

    /// Standard basis vector `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Self {
        assert!(index < dim, "basis index {index} out of range for dim {dim}");
        let mut v = DVector::zeros(dim);
        v[index] = c64(1.0, 0.0);
        Self { amplitudes: v }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        self.amplitudes.as_slice()
    }

    pub fn as_vector(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// `⟨self|other⟩`, conjugating `self`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        check_dims(self.dim(), other.dim())?;
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// `|self⟩⟨other|`. The result is tagged `Projector` when both
    /// arguments are the same ray.
    pub fn outer(&self, other: &StateVector) -> Result<Operator> {
        check_dims(self.dim(), other.dim())?;
        let m = &self.amplitudes * other.amplitudes.adjoint();
        Ok(Operator::from_matrix_unchecked_kind(m))
    }

    /// `|self⟩⟨self|`.
    pub fn projector(&self) -> Operator {
        let m = &self.amplitudes * self.amplitudes.adjoint();
        Operator::raw(hermitize(&m), OperatorKind::Projector)
    }

    pub fn tensor(&self, other: &StateVector) -> StateVector {
        StateVector {
            amplitudes: self.amplitudes.kronecker(&other.amplitudes),
        }
    }

    /// Multiplies every amplitude by `e^{iθ}`.
    pub fn with_phase(&self, theta: f64) -> StateVector {
        StateVector {
            amplitudes: self.amplitudes.scale_complex(C64::from_polar(1.0, theta)),
        }
    }
}

trait ScaleComplex {
    fn scale_complex(&self, z: C64) -> Self;
}

impl ScaleComplex for DVector<C64> {
    fn scale_complex(&self, z: C64) -> Self {
        self.map(|a| a * z)
    }
}

pub fn make_state(raw: &[C64]) -> Result<StateVector> {
    StateVector::new(raw)
}

pub fn inner(a: &StateVector, b: &StateVector) -> Result<C64> {
    a.inner(b)
}

pub fn outer(a: &StateVector, b: &StateVector) -> Result<Operator> {
    a.outer(b)
}

fn check_dims(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::DimMismatch { left, right })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OperatorKind {
    General,
    Hermitian,
    Projector,
}

impl std::fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            OperatorKind::General => "general",
            OperatorKind::Hermitian => "hermitian",
            OperatorKind::Projector => "projector",
        };
        f.write_str(s)
    }
}

/// A square complex matrix with a cached hermiticity/projector flag.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    entries: DMatrix<C64>,
    kind: OperatorKind,
}

impl Operator {
    /// Wraps `entries` and detects its kind at [`CONSTRUCTION_TOL`].
    pub fn new(entries: DMatrix<C64>) -> Result<Self> {
        Self::with_tolerance(entries, CONSTRUCTION_TOL)
    }

    pub fn with_tolerance(entries: DMatrix<C64>, tol: f64) -> Result<Self> {
        check_square(&entries)?;
        let kind = detect_kind(&entries, tol);
        Ok(Self { entries, kind })
    }

    /// Wraps `entries` after verifying that they satisfy `declared`.
    pub fn declared(entries: DMatrix<C64>, declared: OperatorKind, tol: f64) -> Result<Self> {
        check_square(&entries)?;
        match declared {
            OperatorKind::General => {}
            OperatorKind::Hermitian => {
                let defect = hermitian_defect(&entries);
                if defect > tol {
                    return Err(Error::NotHermitian { defect });
                }
            }
            OperatorKind::Projector => {
                let defect = hermitian_defect(&entries);
                if defect > tol {
                    return Err(Error::NotHermitian { defect });
                }
                let defect = idempotency_defect(&entries);
                if defect > tol {
                    return Err(Error::NotProjector { defect });
                }
            }
        }
        // a declared-general matrix may still be hermitian; keep the stronger tag
        let kind = detect_kind(&entries, tol);
        Ok(Self { entries, kind })
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Empty);
        }
        for r in rows {
            if r.len() != n {
                return Err(Error::NotSquare { rows: n, cols: r.len() });
            }
        }
        Self::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<C64>> = rows.iter().map(|r| r.iter().map(|&x| c64(x, 0.0)).collect()).collect();
        Self::from_rows(&rows)
    }

    pub fn identity(dim: usize) -> Self {
        Self::raw(DMatrix::identity(dim, dim), OperatorKind::Projector)
    }

    pub fn zero(dim: usize) -> Self {
        Self::raw(DMatrix::zeros(dim, dim), OperatorKind::Projector)
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let d = DVector::from_iterator(values.len(), values.iter().map(|&x| c64(x, 0.0)));
        let m = DMatrix::from_diagonal(&d);
        let kind = detect_kind(&m, CONSTRUCTION_TOL);
        Self::raw(m, kind)
    }

    pub(crate) fn raw(entries: DMatrix<C64>, kind: OperatorKind) -> Self {
        Self { entries, kind }
    }

    pub(crate) fn from_matrix_unchecked_kind(entries: DMatrix<C64>) -> Self {
        let kind = detect_kind(&entries, CONSTRUCTION_TOL);
        Self { entries, kind }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<C64> {
        self.entries
    }

    pub fn is_hermitian(&self) -> bool {
        matches!(self.kind, OperatorKind::Hermitian | OperatorKind::Projector)
    }

    pub fn is_projector(&self) -> bool {
        self.kind == OperatorKind::Projector
    }

    pub fn require_hermitian(&self) -> Result<()> {
        if self.is_hermitian() {
            Ok(())
        } else {
            Err(Error::NotHermitian {
                defect: hermitian_defect(&self.entries),
            })
        }
    }

    pub fn require_projector(&self) -> Result<()> {
        if self.is_projector() {
            Ok(())
        } else {
            Err(Error::NotProjector {
                defect: idempotency_defect(&self.entries).max(hermitian_defect(&self.entries)),
            })
        }
    }

    pub fn compose(&self, other: &Operator) -> Result<Operator> {
        check_dims(self.dim(), other.dim())?;
        Ok(Self::from_matrix_unchecked_kind(&self.entries * &other.entries))
    }

    pub fn adjoint(&self) -> Operator {
        Self::raw(self.entries.adjoint(), self.kind)
    }

    /// `xy − yx`.
    pub fn commutator(&self, other: &Operator) -> Result<Operator> {
        check_dims(self.dim(), other.dim())?;
        let m = &self.entries * &other.entries - &other.entries * &self.entries;
        Ok(Self::from_matrix_unchecked_kind(m))
    }

    /// `xy + yx`.
    pub fn anticommutator(&self, other: &Operator) -> Result<Operator> {
        check_dims(self.dim(), other.dim())?;
        let m = &self.entries * &other.entries + &other.entries * &self.entries;
        Ok(Self::from_matrix_unchecked_kind(m))
    }

    pub fn add(&self, other: &Operator) -> Result<Operator> {
        check_dims(self.dim(), other.dim())?;
        Ok(Self::from_matrix_unchecked_kind(&self.entries + &other.entries))
    }

    pub fn sub(&self, other: &Operator) -> Result<Operator> {
        check_dims(self.dim(), other.dim())?;
        Ok(Self::from_matrix_unchecked_kind(&self.entries - &other.entries))
    }

    pub fn scale(&self, z: C64) -> Operator {
        Self::from_matrix_unchecked_kind(self.entries.map(|a| a * z))
    }

    pub fn tensor(&self, other: &Operator) -> Operator {
        let kind = match (self.kind, other.kind) {
            (OperatorKind::Projector, OperatorKind::Projector) => OperatorKind::Projector,
            (OperatorKind::General, _) | (_, OperatorKind::General) => OperatorKind::General,
            _ => OperatorKind::Hermitian,
        };
        Self::raw(self.entries.kronecker(&other.entries), kind)
    }

    pub fn trace(&self) -> C64 {
        self.entries.trace()
    }

    /// Operator (spectral) norm.
    pub fn norm(&self) -> f64 {
        operator_norm(&self.entries)
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// `⟨bra|self|ket⟩`.
    pub fn matrix_element(&self, bra: &StateVector, ket: &StateVector) -> Result<C64> {
        check_dims(self.dim(), bra.dim())?;
        check_dims(self.dim(), ket.dim())?;
        Ok(bra.as_vector().dotc(&(&self.entries * ket.as_vector())))
    }

    /// `⟨state|self|state⟩`.
    pub fn expectation(&self, state: &StateVector) -> Result<C64> {
        self.matrix_element(state, state)
    }

    pub fn apply(&self, state: &StateVector) -> Result<DVector<C64>> {
        check_dims(self.dim(), state.dim())?;
        Ok(&self.entries * state.as_vector())
    }

    /// The unit vector spanning the range of a rank-1 projector, up to phase.
    pub fn rank_one_vector(&self) -> Result<StateVector> {
        self.require_projector()?;
        let trace = self.trace().re;
        if (trace - 1.0).abs() > 1e-9 {
            return Err(Error::NotRankOne { trace });
        }
        let (best, _) = (0..self.dim())
            .map(|j| (j, self.entries.column(j).norm()))
            .fold((0, -1.0), |acc, c| if c.1 > acc.1 { c } else { acc });
        let col: Vec<C64> = self.entries.column(best).iter().copied().collect();
        StateVector::new(&col)
    }

    pub fn eig_hermitian(&self) -> Result<SpectralDecomposition> {
        eig_hermitian(self)
    }

    pub fn approx_eq(&self, other: &Operator, tol: f64) -> bool {
        self.dim() == other.dim() && operator_norm(&(&self.entries - &other.entries)) <= tol
    }
}

fn check_square(m: &DMatrix<C64>) -> Result<()> {
    if m.nrows() == 0 {
        return Err(Error::Empty);
    }
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare {
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(())
}

/// Max entrywise deviation from hermiticity.
pub fn hermitian_defect(m: &DMatrix<C64>) -> f64 {
    let n = m.nrows();
    let mut d: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            d = d.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    d
}

/// Max entrywise deviation of `m²` from `m`.
pub fn idempotency_defect(m: &DMatrix<C64>) -> f64 {
    (m * m - m).iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

fn detect_kind(m: &DMatrix<C64>, tol: f64) -> OperatorKind {
    if m.nrows() != m.ncols() || hermitian_defect(m) > tol {
        OperatorKind::General
    } else if idempotency_defect(m) <= tol {
        OperatorKind::Projector
    } else {
        OperatorKind::Hermitian
    }
}

pub(crate) fn hermitize(m: &DMatrix<C64>) -> DMatrix<C64> {
    (m + m.adjoint()).unscale(2.0)
}

/// Largest singular value, from the largest eigenvalue of `m†m`.
pub fn operator_norm(m: &DMatrix<C64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    let gram = hermitize(&(m.adjoint() * m));
    let top = gram.symmetric_eigenvalues().iter().fold(0.0_f64, |acc, &x| acc.max(x));
    top.max(0.0).sqrt()
}

pub fn tensor_states(a: &StateVector, b: &StateVector) -> StateVector {
    a.tensor(b)
}

pub fn tensor_operators(a: &Operator, b: &Operator) -> Operator {
    a.tensor(b)
}

/// Eigenvalues (ascending, degeneracies merged) with their eigenprojectors.
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    projectors: Vec<Operator>,
}

impl SpectralDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn projectors(&self) -> &[Operator] {
        &self.projectors
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &Operator)> {
        self.eigenvalues.iter().copied().zip(self.projectors.iter())
    }

    /// `Σ λₖ Pₖ`.
    pub fn reconstruct(&self) -> Operator {
        let n = self.projectors.first().map_or(0, Operator::dim);
        let m = self
            .iter()
            .fold(DMatrix::zeros(n, n), |acc, (l, p)| acc + p.entries().scale(l));
        Operator::from_matrix_unchecked_kind(m)
    }
}

/// Spectral decomposition of a hermitian operator. Eigenvalues within
/// [`MERGE_TOL`] of their neighbour share one eigenprojector.
pub fn eig_hermitian(x: &Operator) -> Result<SpectralDecomposition> {
    x.require_hermitian()?;
    let n = x.dim();
    let eig = hermitize(x.entries()).symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let mut eigenvalues = Vec::new();
    let mut projectors = Vec::new();
    let mut cluster: Vec<usize> = Vec::new();
    let flush = |cluster: &mut Vec<usize>, eigenvalues: &mut Vec<f64>, projectors: &mut Vec<Operator>| {
        if cluster.is_empty() {
            return;
        }
        let mean = cluster.iter().map(|&k| eig.eigenvalues[k]).sum::<f64>() / cluster.len() as f64;
        let mut p = DMatrix::<C64>::zeros(n, n);
        for &k in cluster.iter() {
            let v = eig.eigenvectors.column(k);
            p += v * v.adjoint();
        }
        eigenvalues.push(mean);
        projectors.push(Operator::raw(hermitize(&p), OperatorKind::Projector));
        cluster.clear();
    };
    for &k in &order {
        if let Some(&last) = cluster.last() {
            if eig.eigenvalues[k] - eig.eigenvalues[last] > MERGE_TOL {
                flush(&mut cluster, &mut eigenvalues, &mut projectors);
            }
        }
        cluster.push(k);
    }
    flush(&mut cluster, &mut eigenvalues, &mut projectors);
    Ok(SpectralDecomposition {
        eigenvalues,
        projectors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn hardy_phi() -> StateVector {
        StateVector::from_real(&[0.0, 1.0, 1.0, 1.0]).unwrap()
    }

    #[test]
    fn make_state_normalizes() {
        let s = StateVector::from_real(&[1.0, 0.0]).unwrap();
        assert_eq!(s.amplitudes(), &[c64(1.0, 0.0), c64(0.0, 0.0)]);

        let s = StateVector::from_real(&[1.0, 1.0, 1.0, 0.0]).unwrap();
        for a in &s.amplitudes()[..3] {
            assert_abs_diff_eq!(a.re, 1.0 / 3f64.sqrt(), epsilon = 1e-15);
        }
        assert_eq!(s.amplitudes()[3], c64(0.0, 0.0));
    }

    #[test]
    fn zero_state_rejected() {
        assert!(matches!(
            StateVector::from_real(&[0.0, 0.0]),
            Err(Error::ZeroVector { .. })
        ));
        assert!(matches!(StateVector::new(&[]), Err(Error::Empty)));
    }

    #[test]
    fn inner_products() {
        let x = StateVector::new(&[c64(0.3, 0.1), c64(-0.2, 0.7)]).unwrap();
        assert_abs_diff_eq!(x.inner(&x).unwrap().re, 1.0, epsilon = 1e-15);
        let e0 = StateVector::basis(2, 0);
        let e1 = StateVector::basis(2, 1);
        assert_eq!(e0.inner(&e1).unwrap(), c64(0.0, 0.0));

        let psi = StateVector::from_real(&[1.0, -1.0, -1.0, 1.0]).unwrap();
        assert_abs_diff_eq!(psi.inner(&hardy_phi()).unwrap().norm_sqr(), 1.0 / 12.0, epsilon = 1e-15);

        let three = StateVector::basis(3, 0);
        assert_eq!(e0.inner(&three), Err(Error::DimMismatch { left: 2, right: 3 }));
    }

    #[test]
    fn outer_products() {
        let e0 = StateVector::basis(2, 0);
        let e1 = StateVector::basis(2, 1);
        let p = e0.outer(&e0).unwrap();
        assert_eq!(p.kind(), OperatorKind::Projector);
        assert_eq!(p, Operator::diagonal(&[1.0, 0.0]));
        assert_eq!(e0.outer(&e1).unwrap().kind(), OperatorKind::General);

        let phi = hardy_phi().projector();
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == 0 || j == 0 { 0.0 } else { 1.0 / 3.0 };
                assert_abs_diff_eq!(phi.entries()[(i, j)].re, want, epsilon = 1e-15);
                assert_abs_diff_eq!(phi.entries()[(i, j)].im, 0.0);
            }
        }
    }

    #[test]
    fn commutators() {
        let p = Operator::diagonal(&[1.0, 0.0, 0.0]);
        let q = Operator::diagonal(&[0.0, 1.0, 1.0]);
        assert_eq!(p.commutator(&p).unwrap().max_abs(), 0.0);
        assert_eq!(p.commutator(&q).unwrap().max_abs(), 0.0);

        let psi = StateVector::from_real(&[1.0, -1.0, -1.0, 1.0]).unwrap().projector();
        let n = Operator::diagonal(&[0.0, 0.0, 0.0, 1.0]);
        let c = psi.commutator(&n).unwrap();
        assert!(c.norm() > 0.1, "norm {}", c.norm());
        // [Ψ̂, N] has rows/cols 0..3 against 3 equal to ±1/4; singular values 1/4·√3
        assert_abs_diff_eq!(c.norm(), 3f64.sqrt() / 4.0, epsilon = 1e-12);
    }

    #[test]
    fn adjoint_is_involution() {
        let m = Operator::from_rows(&[
            vec![c64(1.0, 2.0), c64(0.5, -1.0)],
            vec![c64(-3.0, 0.0), c64(0.0, 0.25)],
        ])
        .unwrap();
        assert_eq!(m.kind(), OperatorKind::General);
        assert_eq!(m.adjoint().adjoint(), m);
    }

    #[test]
    fn tensor_products() {
        let s = StateVector::basis(2, 0).tensor(&StateVector::basis(2, 1));
        assert_eq!(s, StateVector::basis(4, 1));
        let i4 = Operator::identity(2).tensor(&Operator::identity(2));
        assert_eq!(i4, Operator::identity(4));
        let o = Operator::diagonal(&[1.0, 0.0]);
        let no = Operator::diagonal(&[0.0, 1.0]);
        let n_o_no = o.tensor(&no);
        assert_eq!(n_o_no, Operator::diagonal(&[0.0, 1.0, 0.0, 0.0]));
        assert!(n_o_no.is_projector());
    }

    #[test]
    fn eig_of_diagonal_and_projectors() {
        let d = Operator::diagonal(&[0.0, 1.0]).eig_hermitian().unwrap();
        assert_eq!(d.eigenvalues().len(), 2);
        assert_abs_diff_eq!(d.eigenvalues()[0], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(d.eigenvalues()[1], 1.0, epsilon = 1e-15);
        assert!(d.projectors()[0].approx_eq(&Operator::diagonal(&[1.0, 0.0]), 1e-14));
        assert!(d.projectors()[1].approx_eq(&Operator::diagonal(&[0.0, 1.0]), 1e-14));

        let p = hardy_phi().projector();
        let spec = p.eig_hermitian().unwrap();
        assert_eq!(spec.len(), 2);
        assert_abs_diff_eq!(spec.eigenvalues()[0], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(spec.eigenvalues()[1], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(spec.projectors()[0].trace().re, 3.0, epsilon = 1e-12);
    }

    #[test]
    fn eig_rejects_general() {
        let m = Operator::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(m.eig_hermitian(), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn sandwich_spectrum_matches_brute_force_2x2() {
        // ÂΨ̂Â with Â=|a⟩⟨a|, Ψ̂=|ψ⟩⟨ψ| equals |⟨a|ψ⟩|² |a⟩⟨a|.
        let a = StateVector::new(&[c64(0.6, 0.0), c64(0.0, 0.8)]).unwrap();
        let psi = StateVector::new(&[c64(0.28, -0.96), c64(0.5, 0.5)]).unwrap();
        let h = a
            .projector()
            .compose(&psi.projector())
            .unwrap()
            .compose(&a.projector())
            .unwrap();
        let spec = h.eig_hermitian().unwrap();
        // 2x2 closed form: eigenvalues (tr ± √(tr² − 4 det)) / 2
        let e = h.entries();
        let tr = (e[(0, 0)] + e[(1, 1)]).re;
        let det = (e[(0, 0)] * e[(1, 1)] - e[(0, 1)] * e[(1, 0)]).re;
        let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
        let overlap = a.inner(&psi).unwrap().norm_sqr();
        assert_abs_diff_eq!(spec.eigenvalues()[1], (tr + disc) / 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(spec.eigenvalues()[1], overlap, epsilon = 1e-12);
        assert_abs_diff_eq!(spec.eigenvalues()[0], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn degenerate_eigenvalues_merge() {
        let spec = Operator::diagonal(&[2.0, -1.0, 2.0, 2.0 + 1e-12])
            .eig_hermitian()
            .unwrap();
        assert_eq!(spec.len(), 2);
        assert_abs_diff_eq!(spec.projectors()[1].trace().re, 3.0, epsilon = 1e-12);
        assert!(spec
            .reconstruct()
            .approx_eq(&Operator::diagonal(&[2.0, -1.0, 2.0, 2.0]), 1e-11));
    }

    #[test]
    fn rank_one_vector_recovers_ray() {
        let v = StateVector::new(&[c64(0.1, 0.2), c64(-0.4, 0.0), c64(0.0, 0.9)]).unwrap();
        let w = v.projector().rank_one_vector().unwrap();
        assert_abs_diff_eq!(v.inner(&w).unwrap().norm(), 1.0, epsilon = 1e-12);
        assert!(matches!(
            Operator::identity(2).rank_one_vector(),
            Err(Error::NotRankOne { .. })
        ));
    }

    #[test]
    fn declared_kind_is_verified() {
        let m = DMatrix::from_fn(2, 2, |i, j| c64(if i == j { 0.5 } else { 0.0 }, 0.0));
        assert!(matches!(
            Operator::declared(m.clone(), OperatorKind::Projector, 1e-12),
            Err(Error::NotProjector { .. })
        ));
        assert_eq!(
            Operator::declared(m, OperatorKind::Hermitian, 1e-12).unwrap().kind(),
            OperatorKind::Hermitian
        );
    }
}
