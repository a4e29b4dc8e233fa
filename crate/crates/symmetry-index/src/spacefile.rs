//! Space-description file format: a JSON document with the algebra as sparse
//! structure-constant triples, the isotropy by basis vectors or label
//! references, the metric (normal form on g or explicit basis plus Gram
//! matrix), and user assertions. Maps one-to-one onto the space builder.

use crate::homo::{Assertions, HomogeneousSpace, MetricSpec};
use crate::lie::{BilinearForm, LieAlgebra};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpaceFileError {
    #[error("failed to read {path}: {source}")]
    Read {
        path: String,
        source: std::io::Error,
    },
    #[error("JSON parse error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid field `{field}`: {message}")]
    Invalid { field: String, message: String },
    #[error("algebra fails validation: {0}")]
    Algebra(#[from] crate::lie::LieError),
    #[error("Jacobi identity fails (residual {residual:.3e} at triple {triple:?})")]
    Jacobi { residual: f64, triple: [usize; 3] },
    #[error("space fails validation: {0}")]
    Space(#[from] crate::homo::SpaceError),
}

fn invalid(field: &str, message: impl Into<String>) -> SpaceFileError {
    SpaceFileError::Invalid {
        field: field.into(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpaceDescription {
    pub name: String,
    pub algebra: AlgebraDescription,
    pub isotropy: IsotropyDescription,
    pub metric: MetricDescription,
    #[serde(default)]
    pub assertions: Assertions,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AlgebraDescription {
    pub dim: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    /// Sparse triples `[i, j, k, value]` with 0-based indices; each gives
    /// `[e_i, e_j] = value * e_k + ...` and implies the antisymmetric entry.
    pub structure: Vec<(usize, usize, usize, f64)>,
}

/// Isotropy subalgebra: explicit coordinate vectors, or references to basis
/// labels (the span of those coordinate directions).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IsotropyDescription {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "mode")]
pub enum MetricDescription {
    #[serde(rename = "NORMAL")]
    Normal { form: FormDescription },
    #[serde(rename = "EXPLICIT")]
    Explicit {
        m_basis: Vec<Vec<f64>>,
        form: FormDescription,
    },
}

/// A form matrix, or the shorthands `"identity"` / a plain scale factor.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FormDescription {
    Identity(String),
    Scale(f64),
    Matrix(Vec<Vec<f64>>),
}

impl FormDescription {
    fn to_matrix(&self, dim: usize, field: &str) -> Result<DMatrix<f64>, SpaceFileError> {
        match self {
            FormDescription::Identity(s) if s == "identity" => Ok(DMatrix::identity(dim, dim)),
            FormDescription::Identity(s) => Err(invalid(
                field,
                format!("unknown form shorthand '{s}', expected \"identity\""),
            )),
            FormDescription::Scale(s) => Ok(DMatrix::identity(dim, dim) * *s),
            FormDescription::Matrix(rows) => {
                if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
                    return Err(invalid(field, format!("form matrix must be {dim}x{dim}")));
                }
                Ok(DMatrix::from_fn(dim, dim, |i, j| rows[i][j]))
            }
        }
    }
}

impl std::str::FromStr for SpaceDescription {
    type Err = SpaceFileError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        Ok(serde_json::from_str(text)?)
    }
}

impl SpaceDescription {
    pub fn from_path(path: &Path) -> Result<Self, SpaceFileError> {
        let text = std::fs::read_to_string(path).map_err(|source| SpaceFileError::Read {
            path: path.display().to_string(),
            source,
        })?;
        text.parse()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("description serializes")
    }

    /// Validates the description and builds the space.
    pub fn to_space(&self, tol: f64) -> Result<HomogeneousSpace, SpaceFileError> {
        let dim = self.algebra.dim;
        if dim == 0 {
            return Err(invalid("algebra.dim", "dimension must be positive"));
        }
        let algebra =
            LieAlgebra::from_entries(dim, self.algebra.labels.clone(), &self.algebra.structure)?;
        let (residual, triple) = algebra.jacobi_worst();
        if residual > tol.max(1e-9) {
            return Err(SpaceFileError::Jacobi { residual, triple });
        }

        let isotropy = self.isotropy_vectors(&algebra)?;
        let spec = match &self.metric {
            MetricDescription::Normal { form } => {
                MetricSpec::Normal(BilinearForm::new(form.to_matrix(dim, "metric.form")?)?)
            }
            MetricDescription::Explicit { m_basis, form } => {
                if m_basis.is_empty() {
                    return Err(invalid("metric.m_basis", "explicit basis is empty"));
                }
                let vectors: Result<Vec<DVector<f64>>, SpaceFileError> = m_basis
                    .iter()
                    .map(|row| {
                        if row.len() != dim {
                            Err(invalid(
                                "metric.m_basis",
                                format!("basis vectors must have length {dim}"),
                            ))
                        } else {
                            Ok(DVector::from_row_slice(row))
                        }
                    })
                    .collect();
                let vectors = vectors?;
                let gram = form.to_matrix(vectors.len(), "metric.form")?;
                MetricSpec::Explicit {
                    m_basis: vectors,
                    gram,
                }
            }
        };
        Ok(HomogeneousSpace::build(algebra, &isotropy, spec, tol)?)
    }

    fn isotropy_vectors(&self, algebra: &LieAlgebra) -> Result<Vec<DVector<f64>>, SpaceFileError> {
        let dim = algebra.dim();
        match (&self.isotropy.basis, &self.isotropy.labels) {
            (Some(rows), None) => rows
                .iter()
                .map(|row| {
                    if row.len() != dim {
                        Err(invalid(
                            "isotropy.basis",
                            format!("vectors must have length {dim}"),
                        ))
                    } else {
                        Ok(DVector::from_row_slice(row))
                    }
                })
                .collect(),
            (None, Some(labels)) => labels
                .iter()
                .map(|label| {
                    let idx = algebra
                        .labels()
                        .iter()
                        .position(|l| l == label)
                        .ok_or_else(|| {
                            invalid("isotropy.labels", format!("unknown label '{label}'"))
                        })?;
                    let mut v = DVector::zeros(dim);
                    v[idx] = 1.0;
                    Ok(v)
                })
                .collect(),
            (Some(_), Some(_)) => Err(invalid(
                "isotropy",
                "give either basis vectors or labels, not both",
            )),
            (None, None) => Err(invalid("isotropy", "missing: give basis vectors or labels")),
        }
    }

    /// Serializes a built space back into a description. The exact m-basis,
    /// Gram matrix and normal form are preserved so re-parsing reproduces the
    /// analysis bit for bit.
    pub fn from_space(name: &str, space: &HomogeneousSpace, assertions: Assertions) -> Self {
        let algebra = space.algebra();
        let dim = algebra.dim();
        let metric = match space.normal_form() {
            Some(q) => MetricDescription::Normal {
                form: FormDescription::Matrix(matrix_rows(q.matrix())),
            },
            None => MetricDescription::Explicit {
                m_basis: (0..space.m_basis().ncols())
                    .map(|j| space.m_basis().column(j).iter().copied().collect())
                    .collect(),
                form: FormDescription::Matrix(matrix_rows(space.gram())),
            },
        };
        SpaceDescription {
            name: name.to_string(),
            algebra: AlgebraDescription {
                dim,
                labels: Some(algebra.labels().to_vec()),
                structure: algebra.sparse_entries(),
            },
            isotropy: IsotropyDescription {
                basis: Some(
                    space
                        .isotropy()
                        .basis_vectors()
                        .iter()
                        .map(|v| v.iter().copied().collect())
                        .collect(),
                ),
                labels: None,
            },
            metric,
            assertions,
        }
    }
}

fn matrix_rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn catalog_spaces_round_trip_through_the_file_format() {
        for name in ["sphere-3", "stiefel-4-2", "t1s3", "aloff-wallach"] {
            let entry = catalog::find(name).unwrap();
            let space = entry.build().unwrap();
            let description = SpaceDescription::from_space(name, &space, entry.assertions);
            let text = description.to_json();
            let reparsed: SpaceDescription = text.parse().unwrap();
            let rebuilt = reparsed.to_space(1e-8).unwrap();
            assert_eq!(rebuilt.dim_m(), space.dim_m(), "{name}");
            assert_eq!(rebuilt.flags(), space.flags(), "{name}");
            // Bit-exact frames: JSON round-trips f64 exactly and the builder
            // path is deterministic.
            assert_eq!(rebuilt.frame(), space.frame(), "{name}");
        }
    }

    #[test]
    fn missing_isotropy_is_a_parse_error() {
        let text = r#"{
            "name": "broken",
            "algebra": {"dim": 3, "structure": [[0,1,2,1.0],[1,2,0,1.0],[2,0,1,1.0]]},
            "isotropy": {},
            "metric": {"mode": "NORMAL", "form": "identity"}
        }"#;
        let description: SpaceDescription = text.parse().unwrap();
        let err = description.to_space(1e-8).unwrap_err();
        assert!(matches!(err, SpaceFileError::Invalid { ref field, .. } if field == "isotropy"));
    }

    #[test]
    fn out_of_range_indices_are_rejected() {
        let text = r#"{
            "name": "broken",
            "algebra": {"dim": 2, "structure": [[0,1,5,1.0]]},
            "isotropy": {"basis": []},
            "metric": {"mode": "NORMAL", "form": "identity"}
        }"#;
        let description: SpaceDescription = text.parse().unwrap();
        assert!(matches!(
            description.to_space(1e-8),
            Err(SpaceFileError::Algebra(_))
        ));
    }

    #[test]
    fn perturbed_structure_constants_fail_jacobi_with_located_triple() {
        let text = r#"{
            "name": "broken",
            "algebra": {"dim": 3, "structure": [[0,1,2,1.0],[0,1,0,0.1],[1,2,0,1.0],[2,0,1,1.0]]},
            "isotropy": {"basis": []},
            "metric": {"mode": "NORMAL", "form": "identity"}
        }"#;
        let description: SpaceDescription = text.parse().unwrap();
        match description.to_space(1e-8) {
            Err(SpaceFileError::Jacobi { residual, triple }) => {
                assert!(residual >= 0.05);
                assert_eq!(triple, [0, 1, 2]);
            }
            other => panic!("expected Jacobi failure, got {other:?}"),
        }
    }

    #[test]
    fn label_references_select_coordinate_directions() {
        let entry = catalog::find("stiefel-4-2").unwrap();
        let space = entry.build().unwrap();
        let mut description = SpaceDescription::from_space("stiefel-4-2", &space, entry.assertions);
        description.isotropy = IsotropyDescription {
            basis: None,
            labels: Some(vec!["L34".into()]),
        };
        let rebuilt = description.to_space(1e-8).unwrap();
        assert_eq!(rebuilt.dim_m(), 5);
    }
}
