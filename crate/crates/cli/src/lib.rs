//! Command implementations behind the `weakval` binary.
//!
//! Every command returns an [`OutputTable`] that renders either as an
//! aligned text table or as CSV. Numbers carry 12 significant digits and
//! complex numbers render as `re+imi`.

use std::path::Path;

use num_complex::Complex64;
use thiserror::Error;
use weakval::logic::{
    check_orthomodular, commutes, effective_commutativity, identity_coefficient, join, meet, MEET_MAX_ITER, MEET_TOL,
};
use weakval::pointer::{extract_weak_value, PointerGrid};
use weakval::scenarios::{self, load_scenario, report_with, Scenario, ScenarioReport};
use weakval::weak::{weak_value, Classification};
use weakval::{Execution, Operator, OperatorKind};

pub mod format;

pub use format::{fmt_complex, fmt_real, OutputTable};

/// Observable label that refers to `|pre⟩⟨pre|`.
pub const PRE_LABEL: &str = "@pre";
/// Observable label that refers to `|post⟩⟨post|`.
pub const POST_LABEL: &str = "@post";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Library(#[from] weakval::Error),
    #[error("cannot read `{path}`: {message}")]
    Io { path: String, message: String },
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    /// 0 success, 1 internal error, 2 validation, 3 orthogonal selection.
    pub fn exit_code(&self) -> i32 {
        use weakval::Error as E;
        match self {
            CliError::Library(e) => match e {
                E::OrthogonalSelection { .. } | E::PostSelectionVanished { .. } | E::UndefinedWeakValue { .. } => 3,
                E::NoConvergence { .. } | E::FitUnstable { .. } | E::NotProportional { .. } => 1,
                _ => 2,
            },
            CliError::Io { .. } => 2,
            CliError::Internal(_) => 1,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Resolves `hardy`, `threebox`, or a path to a JSON scenario file.
pub fn resolve_scenario(source: &str) -> CliResult<Scenario> {
    match source {
        "hardy" => Ok(scenarios::hardy_scenario()),
        "threebox" | "three-box" => Ok(scenarios::three_box_scenario()),
        path => {
            let text = std::fs::read_to_string(Path::new(path)).map_err(|e| CliError::Io {
                path: path.to_string(),
                message: e.to_string(),
            })?;
            Ok(load_scenario(&text)?)
        }
    }
}

fn lookup(s: &Scenario, label: &str) -> CliResult<Operator> {
    match label {
        PRE_LABEL => Ok(s.pre().projector()),
        POST_LABEL => Ok(s.post().projector()),
        _ => Ok(s.observable(label)?.clone()),
    }
}

fn classification_cell(kind: OperatorKind, c: &Classification) -> (&'static str, String) {
    match c {
        Classification::NotProbability => ("NotProbability", String::new()),
        Classification::ConditionalProbability(cond) => {
            let name = if kind == OperatorKind::Projector {
                "ConditionalProbability"
            } else {
                "ConditionalExpectation"
            };
            (name, cond.names().join("|"))
        }
    }
}

fn coefficient_cell(c: Option<Complex64>) -> String {
    match c {
        Some(z) if z.im.abs() <= 1e-12 => fmt_real(z.re),
        Some(z) => fmt_complex(z),
        None => "n/a".to_string(),
    }
}

pub const REPORT_HEADERS: [&str; 8] = [
    "kind",
    "label",
    "value",
    "classification",
    "conditions",
    "norm_post",
    "norm_pre",
    "norm_prepost",
];

/// Tabulates a scenario report: overlap, one weak-value row per
/// observable, ratio table, identity coefficients.
pub fn render_report(r: &ScenarioReport) -> OutputTable {
    let mut t = OutputTable::new(&REPORT_HEADERS);
    let pad = |mut v: Vec<String>| {
        v.resize(REPORT_HEADERS.len(), String::new());
        v
    };
    t.push(pad(vec![
        "overlap".into(),
        "|<post|pre>|^2".into(),
        fmt_real(r.overlap_probability),
    ]));
    for row in &r.rows {
        let rep = &row.report;
        let (class, cond) = classification_cell(rep.observable_kind, &rep.classification);
        t.push(vec![
            "weak_value".into(),
            row.label.clone(),
            fmt_complex(rep.value),
            class.into(),
            cond,
            fmt_real(rep.commutator_norms.post_observable),
            fmt_real(rep.commutator_norms.pre_observable),
            fmt_real(rep.commutator_norms.post_pre),
        ]);
    }
    for e in &r.ratio_table {
        t.push(pad(vec!["ratio".into(), e.label.clone(), fmt_real(e.normalized)]));
    }
    for c in &r.identity_coefficients {
        t.push(pad(vec![
            "coefficients".into(),
            c.label.clone(),
            format!("{}, {}", coefficient_cell(c.post), coefficient_cell(c.pre)),
        ]));
    }
    t
}

pub fn cmd_report(source: &str, tol: f64) -> CliResult<OutputTable> {
    let s = resolve_scenario(source)?;
    Ok(render_report(&report_with(&s, tol, Execution::default())?))
}

pub fn cmd_hardy(tol: f64) -> CliResult<OutputTable> {
    cmd_report("hardy", tol)
}

pub fn cmd_threebox(tol: f64) -> CliResult<OutputTable> {
    cmd_report("threebox", tol)
}

pub fn cmd_eval(path: &str, tol: f64) -> CliResult<OutputTable> {
    cmd_report(path, tol)
}

pub const SIMULATE_HEADERS: [&str; 7] = [
    "kind",
    "g_over_sigma",
    "post_selection_probability",
    "mean_position",
    "mean_momentum",
    "estimate",
    "exact",
];

/// Pointer sweep for one observable. Couplings are given in units of
/// sigma and are sorted into decreasing order.
pub fn cmd_simulate(source: &str, label: &str, g_list: &[f64], grid: &PointerGrid) -> CliResult<OutputTable> {
    let s = resolve_scenario(source)?;
    let a = lookup(&s, label)?;
    let mut gs: Vec<f64> = g_list.iter().map(|g| g * grid.sigma()).collect();
    gs.sort_by(|a, b| b.total_cmp(a));
    let est = extract_weak_value(&a, s.pre(), s.post(), &gs, grid)?;
    let exact = weak_value(&a, s.pre(), s.post())?;

    let mut t = OutputTable::new(&SIMULATE_HEADERS);
    for st in &est.per_g {
        t.push(vec![
            "sweep".into(),
            fmt_real(st.coupling / grid.sigma()),
            fmt_real(st.post_selection_probability),
            fmt_real(st.mean_position),
            fmt_real(st.mean_momentum),
            String::new(),
            String::new(),
        ]);
    }
    t.push(vec![
        "extrapolated".into(),
        fmt_real(0.0),
        fmt_real(s.overlap_probability()),
        String::new(),
        String::new(),
        fmt_complex(est.estimate),
        fmt_complex(exact),
    ]);
    Ok(t)
}

/// Lattice diagnostics for a pair of projector observables.
pub fn cmd_lattice(source: &str, p_label: &str, q_label: &str, tol: f64) -> CliResult<OutputTable> {
    let s = resolve_scenario(source)?;
    let p = lookup(&s, p_label)?;
    let q = lookup(&s, q_label)?;
    p.require_projector()?;
    q.require_projector()?;

    let mut t = OutputTable::new(&["quantity", "value"]);
    let mut put = |k: &str, v: String| t.push(vec![k.to_string(), v]);
    let bool_cell = |b: bool| if b { "true" } else { "false" }.to_string();

    put("commutes", bool_cell(commutes(&p, &q, tol)?));
    put("commutator_norm", fmt_real(p.commutator(&q)?.norm()));
    put(
        "meet_trace",
        fmt_real(meet(&p, &q, MEET_MAX_ITER, MEET_TOL)?.trace().re),
    );
    put("join_trace", fmt_real(join(&p, &q)?.trace().re));

    let below = |a: &Operator, b: &Operator| b.compose(a).and_then(|ba| ba.sub(a)).map(|d| d.norm() <= tol);
    let ortho = if below(&p, &q)? {
        Some(check_orthomodular(&p, &q, tol)?)
    } else if below(&q, &p)? {
        Some(check_orthomodular(&q, &p, tol)?)
    } else {
        None
    };
    match ortho {
        Some(v) => {
            put("orthomodular", bool_cell(v.holds));
            put("orthomodular_defect", fmt_real(v.defect));
        }
        None => {
            put("orthomodular", "n/a".into());
            put("orthomodular_defect", "n/a".into());
        }
    }

    put(
        "identity_coefficient",
        coefficient_cell(identity_coefficient(&p, &q).ok()),
    );

    let rank_one = p.rank_one_vector().ok().zip(q.rank_one_vector().ok());
    let pair = rank_one.and_then(|(y, x)| effective_commutativity(&p, &q, f64::INFINITY, &x, &y).ok());
    match pair {
        Some(r) => {
            put("commutator_weak_value", fmt_complex(r.commutator_weak_value));
            put("identity_residual", fmt_real(r.identity_residual));
        }
        None => {
            put("commutator_weak_value", "n/a".into());
            put("identity_residual", "n/a".into());
        }
    }
    Ok(t)
}
