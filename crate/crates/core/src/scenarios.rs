//! Pre/post-selection scenarios: the Hardy and three-box fixtures, JSON
//! scenario files, and aggregated weak-value reports.
//!
//! Hardy's two-particle space uses the basis order
//! `(O_p O_e, O_p NO_e, NO_p O_e, NO_p NO_e)`, where `O` means "through the
//! overlap region" and `p`/`e` label positron and electron.
//!
//! # Scenario file format
//!
//! ```json
//! {
//!   "name": "qubit",
//!   "dim": 2,
//!   "pre":  [[1.0, 0.0], [0.0, 0.0]],
//!   "post": [[1.0, 0.0], [1.0, 0.0]],
//!   "observables": [
//!     { "label": "X", "kind": "hermitian",
//!       "matrix": [[[0.0, 0.0], [1.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]] }
//!   ]
//! }
//! ```
//!
//! Complex numbers are `[re, im]` pairs; matrices are row-major. `kind` is
//! one of `general`, `hermitian`, `projector` and is verified on load.
//! States are normalized on load. Unknown fields are rejected.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::hilbert::{c64, Operator, OperatorKind, StateVector, C64, COMPARISON_TOL, CONSTRUCTION_TOL};
use crate::logic::identity_coefficient;
use crate::weak::{self, WeakValueReport, OVERLAP_CUTOFF};

/// Hardy pair-operator labels in basis order.
pub const HARDY_PAIR_LABELS: [&str; 4] = ["N_O,O", "N_O,NO", "N_NO,O", "N_NO,NO"];
/// Hardy single-particle labels: `N+` counts the positron, `N-` the electron.
pub const HARDY_SINGLE_LABELS: [&str; 4] = ["N+_O", "N+_NO", "N-_O", "N-_NO"];

#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    name: String,
    pre: StateVector,
    post: StateVector,
    observables: Vec<(String, Operator)>,
}

impl Scenario {
    pub fn new(
        name: impl Into<String>,
        pre: StateVector,
        post: StateVector,
        observables: Vec<(String, Operator)>,
    ) -> Result<Self> {
        let dim = pre.dim();
        if post.dim() != dim {
            return Err(Error::DimMismatch {
                left: dim,
                right: post.dim(),
            });
        }
        for (i, (label, op)) in observables.iter().enumerate() {
            if op.dim() != dim {
                return Err(Error::DimMismatch {
                    left: dim,
                    right: op.dim(),
                });
            }
            if observables[..i].iter().any(|(l, _)| l == label) {
                return Err(Error::Validation {
                    field: format!("observables[{i}].label"),
                    message: format!("duplicate label `{label}`"),
                });
            }
        }
        Ok(Self {
            name: name.into(),
            pre,
            post,
            observables,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.pre.dim()
    }

    pub fn pre(&self) -> &StateVector {
        &self.pre
    }

    pub fn post(&self) -> &StateVector {
        &self.post
    }

    pub fn observables(&self) -> &[(String, Operator)] {
        &self.observables
    }

    pub fn observable(&self, label: &str) -> Result<&Operator> {
        self.observables
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, op)| op)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// `|⟨post|pre⟩|²`.
    pub fn overlap_probability(&self) -> f64 {
        self.post.inner(&self.pre).map(|z| z.norm_sqr()).unwrap_or(0.0)
    }

    /// Copy with global phases applied to the pre- and post-selected states.
    pub fn with_phases(&self, pre_phase: f64, post_phase: f64) -> Scenario {
        Scenario {
            name: self.name.clone(),
            pre: self.pre.with_phase(pre_phase),
            post: self.post.with_phase(post_phase),
            observables: self.observables.clone(),
        }
    }
}

/// One weak-value row of a [`ScenarioReport`].
#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub label: String,
    pub report: WeakValueReport,
}

/// `Pr(N|Ψ)·Pr(N|Φ)` for a rank-1 projector observable.
#[derive(Clone, Debug, PartialEq)]
pub struct RatioEntry {
    pub label: String,
    pub product: f64,
    /// `product` divided by the table maximum.
    pub normalized: f64,
}

/// Coefficients `c` in `Ψ̂NΨ̂N = c·Ψ̂N` and `Φ̂NΦ̂N = c·Φ̂N` for a projector
/// observable `N`. `None` when the product vanishes.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientRow {
    pub label: String,
    pub post: Option<C64>,
    pub pre: Option<C64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioReport {
    pub name: String,
    pub overlap_probability: f64,
    pub rows: Vec<ReportRow>,
    pub ratio_table: Vec<RatioEntry>,
    pub identity_coefficients: Vec<CoefficientRow>,
}

impl ScenarioReport {
    pub fn row(&self, label: &str) -> Option<&WeakValueReport> {
        self.rows.iter().find(|r| r.label == label).map(|r| &r.report)
    }
}

fn state(re: &[f64]) -> StateVector {
    StateVector::from_real(re).expect("nonzero fixture")
}

/// Hardy's paradox: no annihilation, both particles detected at the dark
/// ports.
pub fn hardy_scenario() -> Scenario {
    let pre = state(&[0.0, 1.0, 1.0, 1.0]);
    let post = state(&[1.0, -1.0, -1.0, 1.0]);

    let o = Operator::diagonal(&[1.0, 0.0]);
    let no = Operator::diagonal(&[0.0, 1.0]);
    let pair = |p: &Operator, e: &Operator| p.tensor(e);
    let n_oo = pair(&o, &o);
    let n_ono = pair(&o, &no);
    let n_noo = pair(&no, &o);
    let n_nono = pair(&no, &no);
    let sum = |a: &Operator, b: &Operator| a.add(b).expect("same dim");

    let observables = vec![
        (HARDY_PAIR_LABELS[0].to_string(), n_oo.clone()),
        (HARDY_PAIR_LABELS[1].to_string(), n_ono.clone()),
        (HARDY_PAIR_LABELS[2].to_string(), n_noo.clone()),
        (HARDY_PAIR_LABELS[3].to_string(), n_nono.clone()),
        (HARDY_SINGLE_LABELS[0].to_string(), sum(&n_oo, &n_ono)),
        (HARDY_SINGLE_LABELS[1].to_string(), sum(&n_noo, &n_nono)),
        (HARDY_SINGLE_LABELS[2].to_string(), sum(&n_oo, &n_noo)),
        (HARDY_SINGLE_LABELS[3].to_string(), sum(&n_ono, &n_nono)),
    ];
    Scenario::new("hardy", pre, post, observables).expect("consistent fixture")
}

/// `(ψ, φ)` coefficients of `P̂NP̂N = c·P̂N` for `N = N_NO,NO` with
/// `P̂ = |Ψ⟩⟨Ψ|` and `P̂ = |Φ⟩⟨Φ|`.
pub fn hardy_identity_coefficients() -> Result<(f64, f64)> {
    let s = hardy_scenario();
    let n = s.observable(HARDY_PAIR_LABELS[3])?;
    let psi = identity_coefficient(&s.post().projector(), n)?;
    let phi = identity_coefficient(&s.pre().projector(), n)?;
    Ok((psi.re, phi.re))
}

/// Normalized `Pr(N|Ψ)·Pr(N|Φ)` over the four Hardy pair operators.
pub fn hardy_ratio_table() -> Vec<f64> {
    let s = hardy_scenario();
    let ops: Vec<Operator> = HARDY_PAIR_LABELS
        .iter()
        .map(|l| s.observable(l).expect("fixture label").clone())
        .collect();
    ratio_products(s.pre(), s.post(), &ops).map(|(_, n)| n).collect()
}

/// `(product, normalized)` pairs; an all-zero table stays zero.
fn ratio_products<'a>(
    pre: &'a StateVector,
    post: &'a StateVector,
    ops: &'a [Operator],
) -> impl Iterator<Item = (f64, f64)> + 'a {
    let products: Vec<f64> = ops
        .iter()
        .map(|n| {
            let a = n.expectation(post).expect("dims").re;
            let b = n.expectation(pre).expect("dims").re;
            a * b
        })
        .collect();
    let max = products.iter().copied().fold(0.0_f64, f64::max);
    products
        .into_iter()
        .map(move |p| (p, if max > 0.0 { p / max } else { 0.0 }))
}

/// Three-box paradox with box projectors `|k⟩⟨k|`.
pub fn three_box_scenario() -> Scenario {
    let pre = state(&[1.0, 1.0, 1.0]);
    let post = state(&[1.0, 1.0, -1.0]);
    let observables = (0..3)
        .map(|k| {
            let mut d = [0.0; 3];
            d[k] = 1.0;
            (format!("box{}", k + 1), Operator::diagonal(&d))
        })
        .collect();
    Scenario::new("threebox", pre, post, observables).expect("consistent fixture")
}

pub fn report(s: &Scenario) -> Result<ScenarioReport> {
    report_with(s, COMPARISON_TOL, Execution::default())
}

/// Evaluates every observable of `s`. The ratio table covers the rank-1
/// projector observables, the identity coefficients every projector.
pub fn report_with(s: &Scenario, tol: f64, exec: Execution) -> Result<ScenarioReport> {
    let overlap = s.post().inner(s.pre())?;
    if overlap.norm() <= OVERLAP_CUTOFF {
        return Err(Error::OrthogonalSelection {
            overlap: overlap.norm(),
        });
    }
    let rows = exec::try_map(exec, s.observables(), |(label, op)| {
        weak::evaluate(op, s.pre(), s.post(), tol).map(|report| ReportRow {
            label: label.clone(),
            report,
        })
    })?;

    let rank_one: Vec<&(String, Operator)> = s
        .observables()
        .iter()
        .filter(|(_, op)| op.is_projector() && (op.trace().re - 1.0).abs() < 1e-9)
        .collect();
    let ops: Vec<Operator> = rank_one.iter().map(|(_, op)| op.clone()).collect();
    let ratio_table = rank_one
        .iter()
        .zip(ratio_products(s.pre(), s.post(), &ops))
        .map(|((label, _), (product, normalized))| RatioEntry {
            label: label.clone(),
            product,
            normalized,
        })
        .collect();

    let psi_hat = s.post().projector();
    let phi_hat = s.pre().projector();
    let identity_coefficients = s
        .observables()
        .iter()
        .filter(|(_, op)| op.is_projector())
        .map(|(label, op)| CoefficientRow {
            label: label.clone(),
            post: identity_coefficient(&psi_hat, op).ok(),
            pre: identity_coefficient(&phi_hat, op).ok(),
        })
        .collect();

    Ok(ScenarioReport {
        name: s.name().to_string(),
        overlap_probability: overlap.norm_sqr(),
        rows,
        ratio_table,
        identity_coefficients,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDocument {
    pub name: String,
    pub dim: usize,
    pub pre: Vec<[f64; 2]>,
    pub post: Vec<[f64; 2]>,
    pub observables: Vec<ObservableDocument>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObservableDocument {
    pub label: String,
    pub kind: OperatorKind,
    pub matrix: Vec<Vec<[f64; 2]>>,
}

fn invalid(field: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Validation {
        field: field.into(),
        message: message.into(),
    }
}

fn pairs_to_state(field: &str, dim: usize, raw: &[[f64; 2]]) -> Result<StateVector> {
    if raw.len() != dim {
        return Err(invalid(
            field,
            format!("expected {dim} amplitudes, found {}", raw.len()),
        ));
    }
    let amps: Vec<C64> = raw.iter().map(|&[re, im]| c64(re, im)).collect();
    StateVector::new(&amps).map_err(|e| invalid(field, e.to_string()))
}

impl ScenarioDocument {
    pub fn into_scenario(self) -> Result<Scenario> {
        if self.dim == 0 {
            return Err(invalid("dim", "must be positive"));
        }
        let pre = pairs_to_state("pre", self.dim, &self.pre)?;
        let post = pairs_to_state("post", self.dim, &self.post)?;
        let mut observables = Vec::with_capacity(self.observables.len());
        for (i, obs) in self.observables.into_iter().enumerate() {
            let field = format!("observables[{i}].matrix");
            if obs.matrix.len() != self.dim || obs.matrix.iter().any(|r| r.len() != self.dim) {
                return Err(invalid(field, format!("expected a {0}x{0} matrix", self.dim)));
            }
            let m = DMatrix::from_fn(self.dim, self.dim, |r, c| {
                let [re, im] = obs.matrix[r][c];
                c64(re, im)
            });
            if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(invalid(field, "non-finite entry"));
            }
            let op = Operator::declared(m, obs.kind, CONSTRUCTION_TOL)
                .map_err(|e| invalid(format!("observables[{i}].kind"), format!("declared {}: {e}", obs.kind)))?;
            observables.push((obs.label, op));
        }
        Scenario::new(self.name, pre, post, observables)
    }

    pub fn from_scenario(s: &Scenario) -> Self {
        let pairs = |v: &StateVector| v.amplitudes().iter().map(|z| [z.re, z.im]).collect();
        ScenarioDocument {
            name: s.name().to_string(),
            dim: s.dim(),
            pre: pairs(s.pre()),
            post: pairs(s.post()),
            observables: s
                .observables()
                .iter()
                .map(|(label, op)| ObservableDocument {
                    label: label.clone(),
                    kind: op.kind(),
                    matrix: op
                        .entries()
                        .row_iter()
                        .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
                        .collect(),
                })
                .collect(),
        }
    }
}

/// Parses and validates a JSON scenario document.
pub fn load_scenario(source: &str) -> Result<Scenario> {
    let doc: ScenarioDocument = serde_json::from_str(source).map_err(|e| Error::Parse(e.to_string()))?;
    doc.into_scenario()
}

/// Pretty-printed JSON for `s`.
pub fn serialize_scenario(s: &Scenario) -> String {
    serde_json::to_string_pretty(&ScenarioDocument::from_scenario(s)).expect("plain data")
}
