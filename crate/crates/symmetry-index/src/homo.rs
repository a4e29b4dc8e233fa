//! Homogeneous space G/H with reductive decomposition g = h + m and an
//! invariant metric on m. Validation happens at build time; everything
//! downstream may assume the invariants hold.
//!
//! Subspaces of m are expressed in a metric-orthonormal frame, so the metric
//! Gram matrix is the identity there and metric-skew operators are plain
//! antisymmetric matrices.

use crate::lie::{BilinearForm, LieAlgebra, Subspace};
use crate::linalg::{self, RankCut};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpaceError {
    #[error("isotropy basis vectors are linearly dependent")]
    DependentIsotropy,
    #[error("isotropy is not a subalgebra: [h,h] leaks out of h by {residual:.3e}")]
    NotSubalgebra { residual: f64 },
    #[error("h and m do not form a direct sum complement of g")]
    NotComplement,
    #[error("decomposition is not reductive: [h,m] leaks out of m by {residual:.3e}")]
    NonReductive { residual: f64 },
    #[error("metric is not isotropy-invariant (residual {residual:.3e})")]
    NotInvariant { residual: f64 },
    #[error("metric is not positive definite (minimum eigenvalue {min_eigenvalue:.3e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },
    #[error("normal-mode form is not ad-invariant (residual {residual:.3e})")]
    FormNotInvariant { residual: f64 },
    #[error("{0}")]
    Form(#[from] crate::lie::LieError),
}

/// How the invariant metric is specified.
#[derive(Debug, Clone)]
pub enum MetricSpec {
    /// Ad-invariant positive-definite form `Q` on g; `m := Q-orthogonal
    /// complement of h` and the metric is `Q` restricted to m.
    Normal(BilinearForm),
    /// Caller-supplied reductive complement with a positive-definite Gram
    /// matrix expressed in that basis.
    Explicit {
        m_basis: Vec<DVector<f64>>,
        gram: DMatrix<f64>,
    },
}

/// Metric classification flags, set during build.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize, PartialEq, Eq)]
pub struct MetricFlags {
    pub is_normal: bool,
    pub is_naturally_reductive: bool,
}

/// User-supplied facts about the space that the tool does not compute.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize, PartialEq, Eq)]
#[serde(default)]
pub struct Assertions {
    pub irreducible: bool,
    pub non_sphere: bool,
}

#[derive(Debug, Clone)]
pub struct HomogeneousSpace {
    algebra: LieAlgebra,
    isotropy: Subspace,
    tangent_span: Subspace,
    /// m-basis as given (or computed in normal mode), one column per vector.
    m_basis: DMatrix<f64>,
    /// Metric Gram matrix in the `m_basis` columns.
    gram: DMatrix<f64>,
    /// Metric-orthonormal frame of m, columns in g-coordinates.
    frame: DMatrix<f64>,
    /// Extraction map: g-coordinates -> frame coordinates of the m-component
    /// along the h + m splitting.
    extract: DMatrix<f64>,
    proj_m: DMatrix<f64>,
    proj_h: DMatrix<f64>,
    /// Frame coordinates of `[f_i, f_j]_m` for all frame pairs.
    bracket_m_table: Vec<Vec<DVector<f64>>>,
    normal_form: Option<BilinearForm>,
    flags: MetricFlags,
    tol: f64,
}

impl HomogeneousSpace {
    /// Builds and fully validates a homogeneous space.
    pub fn build(
        algebra: LieAlgebra,
        isotropy_vectors: &[DVector<f64>],
        spec: MetricSpec,
        tol: f64,
    ) -> Result<Self, SpaceError> {
        let n = algebra.dim();
        let isotropy = Subspace::from_spanning(n, isotropy_vectors, tol);
        if isotropy.dim() != isotropy_vectors.len() {
            return Err(SpaceError::DependentIsotropy);
        }

        // h must be a subalgebra.
        let h_vecs = isotropy.basis_vectors();
        let mut worst = 0.0_f64;
        for (a, x) in h_vecs.iter().enumerate() {
            for y in h_vecs.iter().skip(a + 1) {
                let br = algebra.bracket(x, y).expect("dimensions agree");
                worst = worst.max(isotropy.containment_residual(&br));
            }
        }
        if worst > tol {
            return Err(SpaceError::NotSubalgebra { residual: worst });
        }

        let (m_basis, gram, normal_form) = match spec {
            MetricSpec::Normal(q) => {
                let inv = q.ad_invariance_residual(&algebra);
                if inv > tol {
                    return Err(SpaceError::FormNotInvariant { residual: inv });
                }
                if !q.is_positive_definite(tol) {
                    let (vals, _) = linalg::symmetric_eigen_sorted(q.matrix());
                    return Err(SpaceError::NotPositiveDefinite {
                        min_eigenvalue: vals[0],
                    });
                }
                let m = isotropy.complement_wrt(&q, None, tol);
                let gram = q.restricted(m.basis());
                (m.basis().clone(), gram, Some(q))
            }
            MetricSpec::Explicit { m_basis, gram } => {
                let m = linalg::from_columns(n, &m_basis);
                let gram = BilinearForm::new(gram)?.matrix().clone();
                (m, gram, None)
            }
        };

        let d = m_basis.ncols();
        if isotropy.dim() + d != n {
            return Err(SpaceError::NotComplement);
        }
        let mut combined = DMatrix::zeros(n, n);
        combined
            .view_mut((0, 0), (n, isotropy.dim()))
            .copy_from(isotropy.basis());
        combined
            .view_mut((0, isotropy.dim()), (n, d))
            .copy_from(&m_basis);
        if linalg::rank(&combined, RankCut::Absolute(tol)) != n {
            return Err(SpaceError::NotComplement);
        }
        let combined_inv = combined
            .clone()
            .try_inverse()
            .ok_or(SpaceError::NotComplement)?;
        let mut sel_m = DMatrix::zeros(n, n);
        let mut sel_h = DMatrix::zeros(n, n);
        for i in 0..n {
            if i < isotropy.dim() {
                sel_h[(i, i)] = 1.0;
            } else {
                sel_m[(i, i)] = 1.0;
            }
        }
        let proj_m = &combined * sel_m * &combined_inv;
        let proj_h = &combined * sel_h * &combined_inv;

        // Metric-orthonormal frame: F = M V L^{-1/2} V^T for gram = V L V^T.
        let (gvals, gvecs) = linalg::symmetric_eigen_sorted(&gram);
        if d > 0 && gvals[0] <= tol {
            return Err(SpaceError::NotPositiveDefinite {
                min_eigenvalue: gvals[0],
            });
        }
        let mut inv_sqrt = DMatrix::zeros(d, d);
        for i in 0..d {
            inv_sqrt[(i, i)] = 1.0 / gvals[i].sqrt();
        }
        let frame = &m_basis * (&gvecs * inv_sqrt * gvecs.transpose());
        let ftf_inv = (frame.transpose() * &frame)
            .try_inverse()
            .ok_or(SpaceError::NotComplement)?;
        let extract = ftf_inv * frame.transpose() * &proj_m;

        let tangent_span =
            Subspace::from_orthonormal(linalg::column_space(&m_basis, RankCut::Absolute(tol)));

        // Reductivity: [h, m] stays in m.
        let mut worst = 0.0_f64;
        for x in &h_vecs {
            for i in 0..d {
                let br = algebra.bracket(x, &frame.column(i).into_owned()).unwrap();
                worst = worst.max((&proj_h * &br).norm());
            }
        }
        if worst > tol {
            return Err(SpaceError::NonReductive { residual: worst });
        }

        // Infinitesimal isotropy invariance of the metric: in frame
        // coordinates, ad(x)|_m must be antisymmetric for every x in h.
        let mut worst = 0.0_f64;
        for x in &h_vecs {
            let mut op = DMatrix::zeros(d, d);
            for i in 0..d {
                let br = algebra.bracket(x, &frame.column(i).into_owned()).unwrap();
                op.set_column(i, &(&extract * br));
            }
            worst = worst.max(linalg::max_abs(&(&op + op.transpose())));
        }
        if worst > tol {
            return Err(SpaceError::NotInvariant { residual: worst });
        }

        let mut bracket_m_table = vec![vec![DVector::zeros(d); d]; d];
        for i in 0..d {
            for j in 0..d {
                let br = algebra
                    .bracket(&frame.column(i).into_owned(), &frame.column(j).into_owned())
                    .unwrap();
                bracket_m_table[i][j] = &extract * br;
            }
        }

        let mut space = Self {
            algebra,
            isotropy,
            tangent_span,
            m_basis,
            gram,
            frame,
            extract,
            proj_m,
            proj_h,
            bracket_m_table,
            normal_form,
            flags: MetricFlags::default(),
            tol,
        };
        space.flags = crate::kostant::classify_metric(&space);
        Ok(space)
    }

    pub fn algebra(&self) -> &LieAlgebra {
        &self.algebra
    }

    pub fn isotropy(&self) -> &Subspace {
        &self.isotropy
    }

    /// Span of m as a subspace of g (Euclidean-orthonormal basis).
    pub fn tangent_span(&self) -> &Subspace {
        &self.tangent_span
    }

    pub fn dim_g(&self) -> usize {
        self.algebra.dim()
    }

    pub fn dim_m(&self) -> usize {
        self.frame.ncols()
    }

    pub fn flags(&self) -> MetricFlags {
        self.flags
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    /// The m-basis exactly as supplied or computed at build time.
    pub fn m_basis(&self) -> &DMatrix<f64> {
        &self.m_basis
    }

    /// Metric Gram matrix in `m_basis` coordinates.
    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    /// The ad-invariant form of a normal-mode build.
    pub fn normal_form(&self) -> Option<&BilinearForm> {
        self.normal_form.as_ref()
    }

    /// Metric-orthonormal frame of m, columns in g-coordinates.
    pub fn frame(&self) -> &DMatrix<f64> {
        &self.frame
    }

    /// Component of `x` in m along the h + m splitting, in g-coordinates.
    pub fn project_m(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.proj_m * x
    }

    /// Component of `x` in h along the splitting.
    pub fn project_h(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.proj_h * x
    }

    /// Frame coordinates of the m-component of `x`.
    pub fn to_frame(&self, x: &DVector<f64>) -> DVector<f64> {
        &self.extract * x
    }

    /// g-coordinates of a frame vector.
    pub fn from_frame(&self, v: &DVector<f64>) -> DVector<f64> {
        &self.frame * v
    }

    /// Frame coordinates of `[f_i, f_j]_m`.
    pub(crate) fn bracket_m(&self, i: usize, j: usize) -> &DVector<f64> {
        &self.bracket_m_table[i][j]
    }

    /// `[u, v]_m` for frame vectors, in frame coordinates.
    pub fn bracket_m_frame(&self, u: &DVector<f64>, v: &DVector<f64>) -> DVector<f64> {
        let d = self.dim_m();
        let mut out = DVector::zeros(d);
        for i in 0..d {
            if u[i] == 0.0 {
                continue;
            }
            for j in 0..d {
                let s = u[i] * v[j];
                if s != 0.0 {
                    out += &self.bracket_m_table[i][j] * s;
                }
            }
        }
        out
    }

    /// Map a subspace of g that lies inside m to frame coordinates.
    pub fn subspace_to_frame(&self, s: &Subspace) -> Subspace {
        let vecs: Vec<DVector<f64>> = s.basis_vectors().iter().map(|v| self.to_frame(v)).collect();
        Subspace::from_spanning(self.dim_m(), &vecs, self.tol)
    }

    /// Fixed vectors of the isotropy action on m: `{v : [x, v] = 0 for all
    /// x in h}`, in frame coordinates. For connected H this is the tangent
    /// space at the base point of the fixed-point set.
    pub fn fixed_vectors(&self) -> Subspace {
        let d = self.dim_m();
        let k = self.isotropy.dim();
        if k == 0 {
            return Subspace::full(d);
        }
        let mut rows = DMatrix::zeros(k * d, d);
        for (b, x) in self.isotropy.basis_vectors().iter().enumerate() {
            let op = &self.extract * self.algebra.ad(x) * &self.frame;
            rows.view_mut((b * d, 0), (d, d)).copy_from(&op);
        }
        Subspace::from_orthonormal(linalg::nullspace(&rows, RankCut::Absolute(self.tol)))
    }

    /// The symmetric correction tensor U of the Levi-Civita connection,
    /// defined by `2<U(x,y),z> = <[z,x]_m,y> + <x,[z,y]_m>`. Vanishes exactly
    /// when the metric is naturally reductive for this decomposition.
    pub fn u_tensor(&self) -> UTensor {
        let d = self.dim_m();
        let mut coeffs = vec![vec![DVector::zeros(d); d]; d];
        for i in 0..d {
            for j in i..d {
                let mut u = DVector::zeros(d);
                for k in 0..d {
                    u[k] = 0.5 * (self.bracket_m_table[k][i][j] + self.bracket_m_table[k][j][i]);
                }
                coeffs[i][j] = u.clone();
                coeffs[j][i] = u;
            }
        }
        UTensor { coeffs }
    }
}

/// Symmetric bilinear map U: m x m -> m in frame coordinates.
#[derive(Debug, Clone)]
pub struct UTensor {
    coeffs: Vec<Vec<DVector<f64>>>,
}

impl UTensor {
    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    /// U(f_i, f_j) in frame coordinates.
    pub fn basis_value(&self, i: usize, j: usize) -> &DVector<f64> {
        &self.coeffs[i][j]
    }

    /// U(u, v) for frame vectors.
    pub fn evaluate(&self, u: &DVector<f64>, v: &DVector<f64>) -> DVector<f64> {
        let d = self.dim();
        let mut out = DVector::zeros(d);
        for i in 0..d {
            if u[i] == 0.0 {
                continue;
            }
            for j in 0..d {
                let s = u[i] * v[j];
                if s != 0.0 {
                    out += &self.coeffs[i][j] * s;
                }
            }
        }
        out
    }

    pub fn max_coefficient(&self) -> f64 {
        self.coeffs
            .iter()
            .flatten()
            .map(|v| v.amax())
            .fold(0.0, f64::max)
    }

    /// Residual of the defining identity, max over frame triples.
    pub fn defining_identity_residual(&self, space: &HomogeneousSpace) -> f64 {
        let d = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let lhs = 2.0 * self.coeffs[i][j][k];
                    let rhs = space.bracket_m(k, i)[j] + space.bracket_m(k, j)[i];
                    worst = worst.max((lhs - rhs).abs());
                }
            }
        }
        worst
    }
}
