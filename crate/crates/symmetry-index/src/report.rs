//! Full analysis pipeline and the serializable reports it produces:
//! build -> classify -> Cartan subspace -> leaf -> checks. Reports are
//! deterministic for a fixed seed and tolerance, with stable field order.

use crate::catalog::{Expected, Tagged};
use crate::homo::{Assertions, HomogeneousSpace, MetricFlags};
use crate::killing::{
    EngineError, EngineOptions, IndexStatus, InvariantFieldPolicy, KillingEngine, SignConvention,
};
use crate::kostant::{self, KostantError, KostantResiduals};
use crate::leaf::{self, LeafError, SymmetryFixedCheck};
use serde::Serialize;
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Leaf(#[from] LeafError),
}

impl AnalysisError {
    /// 2 for input/validation problems, 3 for numerical instability.
    pub fn exit_code(&self) -> i32 {
        match self {
            AnalysisError::Engine(EngineError::InvariantFieldNotKilling) => 2,
            AnalysisError::Engine(EngineError::NotFixedVector { .. }) => 2,
            AnalysisError::Engine(_) => 3,
            AnalysisError::Leaf(LeafError::Engine(e)) => {
                AnalysisError::Engine(e_clone(e)).exit_code()
            }
            AnalysisError::Leaf(_) => 3,
        }
    }
}

fn e_clone(e: &EngineError) -> EngineError {
    match e {
        EngineError::InvariantFieldNotKilling => EngineError::InvariantFieldNotKilling,
        EngineError::KoszulMismatch { residual } => EngineError::KoszulMismatch {
            residual: *residual,
        },
        EngineError::ClosureFailure { residual } => EngineError::ClosureFailure {
            residual: *residual,
        },
        EngineError::NotFixedVector { residual } => EngineError::NotFixedVector {
            residual: *residual,
        },
    }
}

#[derive(Debug, Clone)]
pub struct AnalysisOptions {
    pub seed: u64,
    pub invariant_fields: InvariantFieldPolicy,
    pub sign: SignConvention,
    /// Random pairs for the bracket-formula identity check.
    pub bracket_trials: usize,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            seed: 42,
            invariant_fields: InvariantFieldPolicy::Auto,
            sign: SignConvention::AntiHomomorphism,
            bracket_trials: 100,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IndexReport {
    pub value: usize,
    pub status: IndexStatus,
    /// Set when invariant-field candidates were forced onto a space that is
    /// not naturally reductive.
    pub heuristic: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FactorReport {
    pub p_dim: usize,
    pub k_dim: usize,
    pub g_dim: usize,
    pub group_type: bool,
    pub simple_ideal_dims: Vec<usize>,
    pub closure_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct LeafReport {
    pub leaf_dim: usize,
    pub flat_dim: usize,
    pub factors: Vec<FactorReport>,
    pub sigma_dim: usize,
    pub flat_in_fixed_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct KostantReport {
    pub residuals: KostantResiduals,
    pub signature_on_h: (usize, usize, usize),
    pub solution_space_dim: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChecksReport {
    pub symmetry_equals_fixed: SymmetryFixedCheck,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bracket_formula_max_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kostant: Option<KostantReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kostant_error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SymmetryReport {
    pub name: String,
    pub dim_m: usize,
    pub flags: MetricFlags,
    pub index: IndexReport,
    pub is_symmetric: bool,
    pub fix_dim: usize,
    /// Basis of the symmetry subspace in ambient g-coordinates.
    pub symmetry_subspace: Vec<Vec<f64>>,
    pub leaf: LeafReport,
    pub checks: ChecksReport,
    pub tolerance: f64,
    pub seed: u64,
}

/// Runs the full pipeline on a validated space.
pub fn analyze(
    name: &str,
    space: &HomogeneousSpace,
    assertions: Assertions,
    options: &AnalysisOptions,
) -> Result<SymmetryReport, AnalysisError> {
    let engine = KillingEngine::new(
        space,
        EngineOptions {
            invariant_fields: options.invariant_fields,
            sign: options.sign,
            seed: options.seed,
            assertions,
        },
    )?;
    let cs = engine.cartan_subspace();
    let decomposition = leaf::leaf_decomposition(&engine, &cs)?;
    let symmetry_equals_fixed = leaf::fixed_vector_match_check(&engine, &cs);

    let flags = space.flags();
    let bracket_formula_max_residual = if flags.is_naturally_reductive && !cs.basis.is_empty() {
        Some(leaf::bracket_formula_check(
            &engine,
            &cs,
            &decomposition,
            options.bracket_trials,
        )?)
    } else {
        None
    };

    let (kostant, kostant_error) = if flags.is_naturally_reductive {
        match kostant::kostant_form(space) {
            Ok(k) => (
                Some(KostantReport {
                    residuals: k.residuals,
                    signature_on_h: k.signature_on_h,
                    solution_space_dim: k.solution_space_dim,
                }),
                None,
            ),
            Err(e @ KostantError::TransvectionMismatch { .. }) => (None, Some(e.to_string())),
            Err(e) => (None, Some(e.to_string())),
        }
    } else {
        (None, None)
    };

    let symmetry_subspace = cs
        .symmetry_subspace
        .basis_vectors()
        .iter()
        .map(|v| space.from_frame(v).iter().copied().collect())
        .collect();

    Ok(SymmetryReport {
        name: name.to_string(),
        dim_m: space.dim_m(),
        flags,
        is_symmetric: cs.index == space.dim_m(),
        index: IndexReport {
            value: cs.index,
            status: cs.status,
            heuristic: cs.heuristic,
        },
        fix_dim: engine.fixed_subspace().dim(),
        symmetry_subspace,
        leaf: LeafReport {
            leaf_dim: decomposition.leaf_dim(),
            flat_dim: decomposition.flat_dim(),
            factors: decomposition
                .factors
                .iter()
                .map(|f| FactorReport {
                    p_dim: f.p_dim(),
                    k_dim: f.k_dim(),
                    g_dim: f.g_dim(),
                    group_type: f.group_type,
                    simple_ideal_dims: f.simple_ideal_dims.clone(),
                    closure_residual: f.closure_residual,
                })
                .collect(),
            sigma_dim: decomposition.sigma_dim,
            flat_in_fixed_residual: decomposition.flat_in_fixed_residual,
        },
        checks: ChecksReport {
            symmetry_equals_fixed,
            bracket_formula_max_residual,
            kostant,
            kostant_error,
        },
        tolerance: space.tolerance(),
        seed: options.seed,
    })
}

impl SymmetryReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "space: {}", self.name);
        let _ = writeln!(out, "  dim M = {}", self.dim_m);
        let _ = writeln!(
            out,
            "  metric: normal = {}, naturally reductive = {}",
            self.flags.is_normal, self.flags.is_naturally_reductive
        );
        let status = match self.index.status {
            IndexStatus::Exact => "EXACT",
            IndexStatus::LowerBound => "LOWER_BOUND",
        };
        let heuristic = if self.index.heuristic {
            " (heuristic)"
        } else {
            ""
        };
        let _ = writeln!(
            out,
            "  index of symmetry = {} [{}]{}",
            self.index.value, status, heuristic
        );
        let _ = writeln!(out, "  symmetric: {}", self.is_symmetric);
        let _ = writeln!(out, "  fixed-vector subspace dim = {}", self.fix_dim);
        let _ = writeln!(
            out,
            "  leaf: dim = {}, flat part = {}, factors = {}",
            self.leaf.leaf_dim,
            self.leaf.flat_dim,
            self.leaf.factors.len()
        );
        for (i, f) in self.leaf.factors.iter().enumerate() {
            let _ = writeln!(
                out,
                "    factor {}: p = {}, k = {}, g = {}, group type = {}, ideal dims = {:?}",
                i, f.p_dim, f.k_dim, f.g_dim, f.group_type, f.simple_ideal_dims
            );
        }
        match &self.checks.symmetry_equals_fixed {
            SymmetryFixedCheck::Pass { residual } => {
                let _ = writeln!(
                    out,
                    "  symmetry subspace = fixed vectors: PASS (residual {residual:.2e})"
                );
            }
            SymmetryFixedCheck::Fail { residual } => {
                let _ = writeln!(
                    out,
                    "  symmetry subspace = fixed vectors: FAIL (residual {residual:.2e})"
                );
            }
            SymmetryFixedCheck::NotApplicable { reason } => {
                let _ = writeln!(out, "  symmetry subspace = fixed vectors: n/a ({reason})");
            }
        }
        if let Some(r) = self.checks.bracket_formula_max_residual {
            let _ = writeln!(out, "  bracket-formula max residual = {r:.2e}");
        }
        if let Some(k) = &self.checks.kostant {
            let _ = writeln!(
                out,
                "  invariant-form solve: residuals (inv {:.2e}, h-m {:.2e}, metric {:.2e}), \
                 signature on h = {:?}, solution space dim = {}",
                k.residuals.invariance,
                k.residuals.h_m_orthogonality,
                k.residuals.metric_match,
                k.signature_on_h,
                k.solution_space_dim
            );
        }
        if let Some(e) = &self.checks.kostant_error {
            let _ = writeln!(out, "  invariant-form solve: skipped ({e})");
        }
        let _ = writeln!(
            out,
            "  tolerance = {:.1e}, seed = {}",
            self.tolerance, self.seed
        );
        out
    }
}

fn diff_line<T: PartialEq + std::fmt::Debug>(
    out: &mut Vec<String>,
    field: &str,
    expected: &Tagged<T>,
    got: &T,
) {
    if &expected.value != got {
        out.push(format!(
            "{field}: expected {:?} ({}), got {got:?}",
            expected.value, expected.provenance
        ));
    }
}

/// Differences between a report and a catalog entry's expected values;
/// empty means every expectation matched.
pub fn diff_expected(expected: &Expected, report: &SymmetryReport) -> Vec<String> {
    let mut out = Vec::new();
    if expected.dim_m != report.dim_m {
        out.push(format!(
            "dim_m: expected {}, got {}",
            expected.dim_m, report.dim_m
        ));
    }
    diff_line(&mut out, "index", &expected.index, &report.index.value);
    let exact = report.index.status == IndexStatus::Exact;
    diff_line(&mut out, "exact-status", &expected.exact, &exact);
    diff_line(
        &mut out,
        "is_symmetric",
        &expected.is_symmetric,
        &report.is_symmetric,
    );
    if let Some(t) = &expected.leaf_dim {
        diff_line(&mut out, "leaf_dim", t, &report.leaf.leaf_dim);
    }
    if let Some(t) = &expected.flat_dim {
        diff_line(&mut out, "flat_dim", t, &report.leaf.flat_dim);
    }
    if let Some(t) = &expected.num_factors {
        diff_line(&mut out, "num_factors", t, &report.leaf.factors.len());
    }
    if let Some(t) = &expected.factor_group_type {
        for (i, f) in report.leaf.factors.iter().enumerate() {
            diff_line(
                &mut out,
                &format!("factor[{i}].group_type"),
                t,
                &f.group_type,
            );
        }
    }
    if let Some(t) = &expected.symmetry_equals_fixed {
        let got = matches!(
            report.checks.symmetry_equals_fixed,
            SymmetryFixedCheck::Pass { .. }
        );
        diff_line(&mut out, "symmetry_equals_fixed", t, &got);
    }
    out
}

/// One line of the structural validation report.
#[derive(Debug, Clone, Serialize)]
pub struct CheckLine {
    pub check: String,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CheckStatus {
    Pass,
    Fail,
    NotRun,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub name: String,
    pub checks: Vec<CheckLine>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jacobi_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flags: Option<MetricFlags>,
    pub ok: bool,
}

pub const VALIDATION_CHECKS: [&str; 7] = [
    "structure-constants",
    "jacobi",
    "isotropy-subalgebra",
    "complement",
    "reductivity",
    "metric-invariance",
    "positive-definite",
];

/// Validation report for a successfully built space: all checks pass.
pub fn validation_report_ok(name: &str, space: &HomogeneousSpace) -> ValidationReport {
    let (residual, _) = space.algebra().jacobi_worst();
    ValidationReport {
        name: name.to_string(),
        checks: VALIDATION_CHECKS
            .iter()
            .map(|c| CheckLine {
                check: (*c).to_string(),
                status: CheckStatus::Pass,
                detail: None,
            })
            .collect(),
        jacobi_residual: Some(residual),
        flags: Some(space.flags()),
        ok: true,
    }
}

/// Validation report where `failed` names the first failing check.
pub fn validation_report_failed(name: &str, failed: &str, detail: String) -> ValidationReport {
    let mut seen_failure = false;
    let checks = VALIDATION_CHECKS
        .iter()
        .map(|c| {
            let status = if *c == failed {
                seen_failure = true;
                CheckStatus::Fail
            } else if seen_failure {
                CheckStatus::NotRun
            } else {
                CheckStatus::Pass
            };
            CheckLine {
                check: (*c).to_string(),
                status,
                detail: if *c == failed {
                    Some(detail.clone())
                } else {
                    None
                },
            }
        })
        .collect();
    ValidationReport {
        name: name.to_string(),
        checks,
        jacobi_residual: None,
        flags: None,
        ok: false,
    }
}

impl ValidationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "validation: {}", self.name);
        for line in &self.checks {
            let mark = match line.status {
                CheckStatus::Pass => "ok",
                CheckStatus::Fail => "FAIL",
                CheckStatus::NotRun => "--",
            };
            match &line.detail {
                Some(d) => {
                    let _ = writeln!(out, "  [{mark:>4}] {}: {d}", line.check);
                }
                None => {
                    let _ = writeln!(out, "  [{mark:>4}] {}", line.check);
                }
            }
        }
        if let Some(j) = self.jacobi_residual {
            let _ = writeln!(out, "  jacobi residual = {j:.2e}");
        }
        if let Some(f) = self.flags {
            let _ = writeln!(
                out,
                "  flags: normal = {}, naturally reductive = {}",
                f.is_normal, f.is_naturally_reductive
            );
        }
        out
    }
}
