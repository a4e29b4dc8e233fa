//! Numerical Lie algebra arithmetic on a fixed basis: brackets from structure
//! constants, the Killing form, ad-invariant bilinear forms, centralizers and
//! the splitting of a compact-type algebra into its center and simple ideals.

use crate::linalg::{self, RankCut};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Default absolute singular-value threshold for rank and kernel decisions.
pub const DEFAULT_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum LieError {
    #[error("coordinate vector has length {got}, algebra dimension is {dim}")]
    DimensionMismatch { dim: usize, got: usize },
    #[error("structure entry ({i},{j},{k}) out of range for dimension {dim}")]
    IndexOutOfRange {
        i: usize,
        j: usize,
        k: usize,
        dim: usize,
    },
    #[error("structure entries for ({i},{j},{k}) violate antisymmetry: {a} vs {b}")]
    NotAntisymmetric {
        i: usize,
        j: usize,
        k: usize,
        a: f64,
        b: f64,
    },
    #[error("bilinear form matrix is not symmetric (residual {residual:.3e})")]
    NotSymmetric { residual: f64 },
    #[error("Killing form signature contradicts compact type: {reason}")]
    NotCompactType { reason: String },
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
}

/// A finite-dimensional real Lie algebra presented by structure constants
/// `[e_i, e_j] = sum_k c[i][j][k] e_k` on a fixed basis.
#[derive(Debug, Clone)]
pub struct LieAlgebra {
    dim: usize,
    labels: Vec<String>,
    /// Dense table, index `i*dim*dim + j*dim + k`.
    constants: Vec<f64>,
}

impl LieAlgebra {
    /// Builds the algebra from sparse entries `(i, j, k, value)`.
    ///
    /// Each entry sets `c[i][j][k] = value` and `c[j][i][k] = -value`;
    /// conflicting duplicates and diagonal entries with nonzero value are
    /// rejected. Labels default to `e1..en`.
    pub fn from_entries(
        dim: usize,
        labels: Option<Vec<String>>,
        entries: &[(usize, usize, usize, f64)],
    ) -> Result<Self, LieError> {
        let labels = match labels {
            Some(l) if l.len() != dim => {
                return Err(LieError::LabelCount {
                    expected: dim,
                    got: l.len(),
                })
            }
            Some(l) => l,
            None => (1..=dim).map(|i| format!("e{i}")).collect(),
        };
        let mut constants = vec![0.0; dim * dim * dim];
        let mut set = vec![false; dim * dim * dim];
        let mut put = |i: usize, j: usize, k: usize, v: f64| -> Result<(), LieError> {
            let idx = (i * dim + j) * dim + k;
            if set[idx] && constants[idx] != v {
                return Err(LieError::NotAntisymmetric {
                    i,
                    j,
                    k,
                    a: constants[idx],
                    b: v,
                });
            }
            constants[idx] = v;
            set[idx] = true;
            Ok(())
        };
        for &(i, j, k, v) in entries {
            if i >= dim || j >= dim || k >= dim {
                return Err(LieError::IndexOutOfRange { i, j, k, dim });
            }
            if i == j && v != 0.0 {
                return Err(LieError::NotAntisymmetric {
                    i,
                    j,
                    k,
                    a: 0.0,
                    b: v,
                });
            }
            put(i, j, k, v)?;
            put(j, i, k, -v)?;
        }
        Ok(Self {
            dim,
            labels,
            constants,
        })
    }

    /// The abelian algebra of the given dimension.
    pub fn abelian(dim: usize) -> Self {
        Self::from_entries(dim, None, &[]).expect("no entries to conflict")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn constant(&self, i: usize, j: usize, k: usize) -> f64 {
        self.constants[(i * self.dim + j) * self.dim + k]
    }

    /// Nonzero entries with `i < j`, for serialization.
    pub fn sparse_entries(&self) -> Vec<(usize, usize, usize, f64)> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                for k in 0..self.dim {
                    let v = self.constant(i, j, k);
                    if v != 0.0 {
                        out.push((i, j, k, v));
                    }
                }
            }
        }
        out
    }

    /// `[x, y]` by bilinear extension of the structure constants.
    pub fn bracket(&self, x: &DVector<f64>, y: &DVector<f64>) -> Result<DVector<f64>, LieError> {
        if x.len() != self.dim {
            return Err(LieError::DimensionMismatch {
                dim: self.dim,
                got: x.len(),
            });
        }
        if y.len() != self.dim {
            return Err(LieError::DimensionMismatch {
                dim: self.dim,
                got: y.len(),
            });
        }
        let mut out = DVector::zeros(self.dim);
        for i in 0..self.dim {
            let xi = x[i];
            if xi == 0.0 {
                continue;
            }
            for j in 0..self.dim {
                let s = xi * y[j];
                if s == 0.0 {
                    continue;
                }
                for k in 0..self.dim {
                    out[k] += s * self.constant(i, j, k);
                }
            }
        }
        Ok(out)
    }

    /// The matrix of `ad(x) = [x, .]`.
    pub fn ad(&self, x: &DVector<f64>) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for j in 0..self.dim {
            for k in 0..self.dim {
                let mut v = 0.0;
                for i in 0..self.dim {
                    v += x[i] * self.constant(i, j, k);
                }
                m[(k, j)] = v;
            }
        }
        m
    }

    fn basis_vector(&self, i: usize) -> DVector<f64> {
        let mut v = DVector::zeros(self.dim);
        v[i] = 1.0;
        v
    }

    /// Max-norm Jacobi residual over all basis triples.
    pub fn jacobi_residual(&self) -> f64 {
        self.jacobi_worst().0
    }

    /// Jacobi residual together with the basis triple attaining it.
    pub fn jacobi_worst(&self) -> (f64, [usize; 3]) {
        let n = self.dim;
        let mut worst = (0.0_f64, [0usize; 3]);
        let basis: Vec<DVector<f64>> = (0..n).map(|i| self.basis_vector(i)).collect();
        for i in 0..n {
            for j in (i + 1)..n {
                let bij = self.bracket(&basis[i], &basis[j]).unwrap();
                for k in (j + 1)..n {
                    let bjk = self.bracket(&basis[j], &basis[k]).unwrap();
                    let bki = self.bracket(&basis[k], &basis[i]).unwrap();
                    let s = self.bracket(&basis[i], &bjk).unwrap()
                        + self.bracket(&basis[j], &bki).unwrap()
                        + self.bracket(&basis[k], &bij).unwrap();
                    let norm = s.norm();
                    if norm > worst.0 {
                        worst = (norm, [i, j, k]);
                    }
                }
            }
        }
        worst
    }

    /// Killing form `B(x, y) = trace(ad x . ad y)`.
    pub fn killing_form(&self) -> BilinearForm {
        let ads: Vec<DMatrix<f64>> = (0..self.dim)
            .map(|i| self.ad(&self.basis_vector(i)))
            .collect();
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for i in 0..self.dim {
            for j in i..self.dim {
                let v = (&ads[i] * &ads[j]).trace();
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        BilinearForm { matrix: m }
    }

    /// Block direct sum; labels of the right summand get a `'` suffix.
    pub fn direct_sum(&self, other: &LieAlgebra) -> LieAlgebra {
        let dim = self.dim + other.dim;
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().map(|l| format!("{l}'")));
        let mut entries = self.sparse_entries();
        for (i, j, k, v) in other.sparse_entries() {
            entries.push((i + self.dim, j + self.dim, k + self.dim, v));
        }
        LieAlgebra::from_entries(dim, Some(labels), &entries).expect("summands were consistent")
    }
}

/// A symmetric bilinear form on the algebra's coordinate space.
#[derive(Debug, Clone)]
pub struct BilinearForm {
    matrix: DMatrix<f64>,
}

impl BilinearForm {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self, LieError> {
        let residual = linalg::max_abs(&(&matrix - matrix.transpose()));
        if residual > 1e-12 * linalg::max_abs(&matrix).max(1.0) {
            return Err(LieError::NotSymmetric { residual });
        }
        let matrix = (&matrix + matrix.transpose()) * 0.5;
        Ok(Self { matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: DMatrix::identity(dim, dim),
        }
    }

    pub fn scaled_identity(dim: usize, scale: f64) -> Self {
        Self {
            matrix: DMatrix::identity(dim, dim) * scale,
        }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn evaluate(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        (x.transpose() * &self.matrix * y)[(0, 0)]
    }

    pub fn rank(&self, tol: f64) -> usize {
        linalg::rank(&self.matrix, RankCut::Absolute(tol))
    }

    /// Gram matrix of the form on the given basis columns.
    pub fn restricted(&self, basis: &DMatrix<f64>) -> DMatrix<f64> {
        basis.transpose() * &self.matrix * basis
    }

    /// (positive, negative, zero) eigenvalue counts at the given threshold.
    pub fn signature(&self, tol: f64) -> (usize, usize, usize) {
        let (vals, _) = linalg::symmetric_eigen_sorted(&self.matrix);
        let pos = vals.iter().filter(|&&v| v > tol).count();
        let neg = vals.iter().filter(|&&v| v < -tol).count();
        (pos, neg, self.dim() - pos - neg)
    }

    pub fn is_positive_definite(&self, tol: f64) -> bool {
        let (vals, _) = linalg::symmetric_eigen_sorted(&self.matrix);
        !vals.is_empty() && vals[0] > tol
    }

    /// Max over basis triples of `|B([z,x],y) + B(x,[z,y])|`.
    pub fn ad_invariance_residual(&self, algebra: &LieAlgebra) -> f64 {
        let n = algebra.dim();
        let ads: Vec<DMatrix<f64>> = (0..n)
            .map(|i| algebra.ad(&algebra.basis_vector(i)))
            .collect();
        let mut worst = 0.0_f64;
        for az in &ads {
            // B(ad_z x, y) + B(x, ad_z y) as a matrix in (x, y).
            let m = az.transpose() * &self.matrix + &self.matrix * az;
            worst = worst.max(linalg::max_abs(&m));
        }
        worst
    }
}

/// A linear subspace of `R^ambient` with an orthonormal basis as columns.
#[derive(Debug, Clone)]
pub struct Subspace {
    ambient: usize,
    basis: DMatrix<f64>,
}

impl Subspace {
    /// Orthonormalizes the span of the given vectors (SVD, absolute cut).
    /// Already-orthonormal inputs pass through unchanged, which keeps
    /// serialize/parse round trips bit-exact.
    pub fn from_spanning(ambient: usize, vectors: &[DVector<f64>], tol: f64) -> Self {
        let m = linalg::from_columns(ambient, vectors);
        if m.ncols() > 0 && m.ncols() <= ambient {
            let gram = m.transpose() * &m;
            let residual = linalg::max_abs(&(&gram - DMatrix::identity(m.ncols(), m.ncols())));
            if residual < 1e-12 {
                return Self { ambient, basis: m };
            }
        }
        Self {
            ambient,
            basis: linalg::column_space(&m, RankCut::Absolute(tol)),
        }
    }

    /// Wraps columns that are already orthonormal (e.g. SVD output).
    pub fn from_orthonormal(basis: DMatrix<f64>) -> Self {
        Self {
            ambient: basis.nrows(),
            basis,
        }
    }

    pub fn zero(ambient: usize) -> Self {
        Self {
            ambient,
            basis: DMatrix::zeros(ambient, 0),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self {
            ambient,
            basis: DMatrix::identity(ambient, ambient),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &DMatrix<f64> {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<DVector<f64>> {
        (0..self.dim())
            .map(|j| self.basis.column(j).into_owned())
            .collect()
    }

    /// Orthogonal projection onto the subspace.
    pub fn project(&self, v: &DVector<f64>) -> DVector<f64> {
        &self.basis * (self.basis.transpose() * v)
    }

    /// Coordinates of `v` in the orthonormal basis (least squares for
    /// vectors off the subspace).
    pub fn coords(&self, v: &DVector<f64>) -> DVector<f64> {
        self.basis.transpose() * v
    }

    /// Norm of the component of `v` orthogonal to the subspace.
    pub fn containment_residual(&self, v: &DVector<f64>) -> f64 {
        (v - self.project(v)).norm()
    }

    pub fn contains(&self, v: &DVector<f64>, tol: f64) -> bool {
        self.containment_residual(v) <= tol
    }

    /// Max containment residual of the other subspace's basis in `self`.
    pub fn subspace_residual(&self, other: &Subspace) -> f64 {
        (0..other.dim())
            .map(|j| self.containment_residual(&other.basis.column(j).into_owned()))
            .fold(0.0, f64::max)
    }

    /// Mutual containment at the given tolerance.
    pub fn coincides_with(&self, other: &Subspace, tol: f64) -> bool {
        self.subspace_residual(other) <= tol && other.subspace_residual(self) <= tol
    }

    /// Euclidean orthogonal complement in the ambient space.
    pub fn orthogonal_complement(&self, tol: f64) -> Subspace {
        Subspace::from_orthonormal(linalg::nullspace(
            &self.basis.transpose(),
            RankCut::Absolute(tol),
        ))
    }

    /// `{x in within : form(b, x) = 0 for all basis b of self}`.
    ///
    /// With `within = None` the complement is taken in the ambient space.
    pub fn complement_wrt(
        &self,
        form: &BilinearForm,
        within: Option<&Subspace>,
        tol: f64,
    ) -> Subspace {
        let rows = self.basis.transpose() * form.matrix();
        match within {
            None => Subspace::from_orthonormal(linalg::nullspace(&rows, RankCut::Absolute(tol))),
            Some(w) => {
                let system = rows * w.basis();
                let coeffs = linalg::nullspace(&system, RankCut::Absolute(tol));
                Subspace::from_orthonormal(linalg::column_space(
                    &(w.basis() * coeffs),
                    RankCut::Absolute(tol),
                ))
            }
        }
    }

    /// Span of the union of both subspaces.
    pub fn sum(&self, other: &Subspace, tol: f64) -> Subspace {
        let mut cols = self.basis_vectors();
        cols.extend(other.basis_vectors());
        Subspace::from_spanning(self.ambient, &cols, tol)
    }
}

/// A homogeneous linear condition on a symmetric form:
/// `sum of coeff * Q(e_i, e_j) = 0` over the listed terms.
#[derive(Debug, Clone)]
pub struct FormConstraint {
    pub terms: Vec<(usize, usize, f64)>,
}

/// Index of the variable for `Q(e_a, e_b)`, `a <= b`, in packed order.
pub(crate) fn sym_index(n: usize, a: usize, b: usize) -> usize {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    a * n - a * (a + 1) / 2 + b
}

pub(crate) fn sym_var_count(n: usize) -> usize {
    n * (n + 1) / 2
}

pub(crate) fn sym_matrix_from_vars(n: usize, vars: &DVector<f64>) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    for a in 0..n {
        for b in a..n {
            let v = vars[sym_index(n, a, b)];
            m[(a, b)] = v;
            m[(b, a)] = v;
        }
    }
    m
}

/// Rows of the ad-invariance system `Q([z,x],y) + Q(x,[z,y]) = 0` over the
/// packed symmetric variables, one row per basis triple `(z, x, y)`.
pub(crate) fn invariance_rows(algebra: &LieAlgebra) -> DMatrix<f64> {
    let n = algebra.dim();
    let vars = sym_var_count(n);
    let mut rows = DMatrix::zeros(n * n * n, vars);
    let mut r = 0;
    for z in 0..n {
        for x in 0..n {
            for y in 0..n {
                for k in 0..n {
                    let czx = algebra.constant(z, x, k);
                    if czx != 0.0 {
                        rows[(r, sym_index(n, k, y))] += czx;
                    }
                    let czy = algebra.constant(z, y, k);
                    if czy != 0.0 {
                        rows[(r, sym_index(n, x, k))] += czy;
                    }
                }
                r += 1;
            }
        }
    }
    rows
}

/// Basis of the space of ad-invariant symmetric bilinear forms satisfying the
/// given homogeneous constraints. Empty list means no nonzero solution.
pub fn invariant_forms(
    algebra: &LieAlgebra,
    constraints: &[FormConstraint],
    tol: f64,
) -> Vec<BilinearForm> {
    let n = algebra.dim();
    let vars = sym_var_count(n);
    let inv = invariance_rows(algebra);
    let mut rows = DMatrix::zeros(inv.nrows() + constraints.len(), vars);
    rows.view_mut((0, 0), (inv.nrows(), vars)).copy_from(&inv);
    for (c, constraint) in constraints.iter().enumerate() {
        for &(i, j, coeff) in &constraint.terms {
            rows[(inv.nrows() + c, sym_index(n, i, j))] += coeff;
        }
    }
    let null = linalg::nullspace(&rows, RankCut::Absolute(tol));
    (0..null.ncols())
        .map(|j| BilinearForm {
            matrix: sym_matrix_from_vars(n, &null.column(j).into_owned()),
        })
        .collect()
}

/// Center plus the simple ideals of a compact-type algebra.
#[derive(Debug, Clone)]
pub struct IdealDecomposition {
    pub center: Subspace,
    pub ideals: Vec<Subspace>,
}

/// `{x : [x, v] = 0 for all v in s}`, computed as a stacked kernel.
pub fn centralizer(algebra: &LieAlgebra, s: &Subspace, tol: f64) -> Subspace {
    let n = algebra.dim();
    if s.dim() == 0 {
        return Subspace::full(n);
    }
    let mut rows = DMatrix::zeros(n * s.dim(), n);
    for (b, v) in s.basis_vectors().iter().enumerate() {
        // [x, v] = -ad(v) x
        let m = algebra.ad(v);
        rows.view_mut((b * n, 0), (n, n)).copy_from(&m);
    }
    Subspace::from_orthonormal(linalg::nullspace(&rows, RankCut::Absolute(tol)))
}

/// Splits a compact-type algebra into its center and simple ideals via the
/// eigenspaces of a seeded random symmetric operator commuting with the
/// adjoint representation, refined by bracket closure.
pub fn ideal_decomposition(
    algebra: &LieAlgebra,
    tol: f64,
    seed: u64,
) -> Result<IdealDecomposition, LieError> {
    let n = algebra.dim();
    let killing = algebra.killing_form();
    let (kvals, _) = linalg::symmetric_eigen_sorted(killing.matrix());
    if kvals.iter().any(|&v| v > tol) {
        return Err(LieError::NotCompactType {
            reason: format!(
                "Killing form has a positive eigenvalue {:.3e}",
                kvals[n - 1]
            ),
        });
    }
    let center = centralizer(algebra, &Subspace::full(n), tol);
    let killing_nullity = kvals.iter().filter(|&&v| v.abs() <= tol).count();
    if killing_nullity != center.dim() {
        return Err(LieError::NotCompactType {
            reason: format!(
                "Killing form kernel has dimension {}, center has dimension {}",
                killing_nullity,
                center.dim()
            ),
        });
    }

    // Derived subalgebra spans the semisimple part.
    let basis: Vec<DVector<f64>> = (0..n).map(|i| algebra.basis_vector(i)).collect();
    let mut bracket_cols = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            bracket_cols.push(algebra.bracket(&basis[i], &basis[j]).unwrap());
        }
    }
    let derived = Subspace::from_spanning(n, &bracket_cols, tol);
    if derived.dim() + center.dim() != n {
        return Err(LieError::NotCompactType {
            reason: format!(
                "center ({}) plus derived algebra ({}) do not span (dim {})",
                center.dim(),
                derived.dim(),
                n
            ),
        });
    }
    if derived.dim() == 0 {
        return Ok(IdealDecomposition {
            center,
            ideals: Vec::new(),
        });
    }

    // ad restricted to the derived part, expressed in coordinates that are
    // orthonormal for the negated Killing form. There the adjoint action is
    // skew and the commutant's symmetric elements realize the projections
    // onto ideals, whatever basis the algebra came in.
    let d = derived.dim();
    let dm = derived.basis();
    let killing_derived = -(dm.transpose() * killing.matrix() * dm);
    let (kvals_d, kvecs_d) = linalg::symmetric_eigen_sorted(&killing_derived);
    if kvals_d[0] <= tol {
        return Err(LieError::NotCompactType {
            reason: "Killing form is degenerate on the derived algebra".into(),
        });
    }
    let mut sqrt_d = DMatrix::zeros(d, d);
    let mut inv_sqrt_d = DMatrix::zeros(d, d);
    for i in 0..d {
        sqrt_d[(i, i)] = kvals_d[i].sqrt();
        inv_sqrt_d[(i, i)] = 1.0 / kvals_d[i].sqrt();
    }
    let w = &kvecs_d * sqrt_d * kvecs_d.transpose();
    let w_inv = &kvecs_d * inv_sqrt_d * kvecs_d.transpose();
    let ad_restricted: Vec<DMatrix<f64>> = (0..n)
        .map(|i| &w * (dm.transpose() * algebra.ad(&basis[i]) * dm) * &w_inv)
        .collect();

    // Symmetric commutant of the restricted adjoint action.
    let vars = sym_var_count(d);
    let mut rows = DMatrix::zeros(n * d * d, vars);
    let mut r = 0;
    for a in &ad_restricted {
        for p in 0..d {
            for q in 0..d {
                // (S A - A S)[p][q] = sum_k S[p][k] A[k][q] - A[p][k] S[k][q]
                for k in 0..d {
                    rows[(r, sym_index(d, p, k))] += a[(k, q)];
                    rows[(r, sym_index(d, k, q))] -= a[(p, k)];
                }
                r += 1;
            }
        }
    }
    let commutant = linalg::nullspace(&rows, RankCut::Absolute(tol));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _attempt in 0..8 {
        let mut vars_vec = DVector::zeros(vars);
        for j in 0..commutant.ncols() {
            let c: f64 = rng.gen_range(-1.0..1.0);
            vars_vec += commutant.column(j) * c;
        }
        let op = sym_matrix_from_vars(d, &vars_vec);
        let (vals, vecs) = linalg::symmetric_eigen_sorted(&op);

        // Cluster eigenvalues; exactly equal within fp noise means the same
        // simple ideal, random draws separate distinct ideals.
        let cluster_radius = (10.0 * tol).max(1e-10);
        let mut clusters: Vec<Vec<usize>> = Vec::new();
        for i in 0..d {
            match clusters.last_mut() {
                Some(c) if (vals[i] - vals[*c.last().unwrap()]).abs() <= cluster_radius => {
                    c.push(i)
                }
                _ => clusters.push(vec![i]),
            }
        }
        // Re-draw when two clusters are suspiciously close.
        let ambiguous = clusters
            .windows(2)
            .any(|w| (vals[w[1][0]] - vals[*w[0].last().unwrap()]).abs() < 1e-4);
        if ambiguous && commutant.ncols() > 1 {
            continue;
        }

        let mut parts: Vec<Subspace> = clusters
            .iter()
            .map(|c| {
                let cols: Vec<DVector<f64>> = c
                    .iter()
                    .map(|&i| dm * (&w_inv * vecs.column(i).into_owned()))
                    .collect();
                Subspace::from_spanning(n, &cols, tol)
            })
            .collect();

        // Bracket-closure refinement: merge parts until each is an ideal.
        let ideal_leak = |part: &Subspace| -> f64 {
            let mut worst = 0.0_f64;
            for b in part.basis_vectors() {
                for e in &basis {
                    let br = algebra.bracket(e, &b).unwrap();
                    worst = worst.max(part.containment_residual(&br));
                }
            }
            worst
        };
        loop {
            let mut merged = false;
            'outer: for a in 0..parts.len() {
                if ideal_leak(&parts[a]) <= 10.0 * tol {
                    continue;
                }
                for b in 0..parts.len() {
                    if a == b {
                        continue;
                    }
                    for va in parts[a].basis_vectors() {
                        for vb in parts[b].basis_vectors() {
                            let br = algebra.bracket(&va, &vb).unwrap();
                            if br.norm() > 10.0 * tol {
                                let union = parts[a].sum(&parts[b], tol);
                                let keep = a.min(b);
                                let drop = a.max(b);
                                parts[keep] = union;
                                parts.remove(drop);
                                merged = true;
                                break 'outer;
                            }
                        }
                    }
                }
                // Leaky but bracket-isolated: not resolvable, re-draw.
                break;
            }
            if !merged {
                break;
            }
        }
        if parts.iter().any(|p| ideal_leak(p) > 10.0 * tol) {
            continue;
        }

        parts.sort_by_key(|p| {
            let lead = (0..n)
                .find(|&i| p.coords(&basis[i]).norm() > 0.5)
                .unwrap_or(n);
            (p.dim(), lead)
        });
        return Ok(IdealDecomposition {
            center,
            ideals: parts,
        });
    }
    Err(LieError::NotCompactType {
        reason: "ideal refinement did not converge".into(),
    })
}

#[cfg(test)]
pub(crate) mod test_algebras {
    use super::*;

    /// so(3) with cyclic basis L_23, L_31, L_12: [e1,e2] = e3 and cyclic.
    pub fn so3_cyclic() -> LieAlgebra {
        LieAlgebra::from_entries(
            3,
            Some(vec!["L23".into(), "L31".into(), "L12".into()]),
            &[(0, 1, 2, 1.0), (1, 2, 0, 1.0), (2, 0, 1, 1.0)],
        )
        .unwrap()
    }

    /// u(2) = su(2) + center.
    pub fn u2() -> LieAlgebra {
        LieAlgebra::from_entries(4, None, &[(0, 1, 2, 1.0), (1, 2, 0, 1.0), (2, 0, 1, 1.0)])
            .unwrap()
    }
}
