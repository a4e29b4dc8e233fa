//! Dense linear-algebra helpers shared across the crate: rank decisions,
//! nullspaces, orthonormal spans and least-norm solves, all driven by SVD
//! with explicit singular-value thresholds.

use nalgebra::{DMatrix, DVector};

/// How singular values are turned into a rank decision.
#[derive(Debug, Clone, Copy)]
pub enum RankCut {
    /// Keep singular values strictly above the given absolute threshold.
    Absolute(f64),
    /// Keep singular values strictly above `rel * sigma_max`.
    Relative(f64),
}

impl RankCut {
    pub fn cutoff(self, sigma_max: f64) -> f64 {
        match self {
            RankCut::Absolute(t) => t,
            RankCut::Relative(t) => t * sigma_max,
        }
    }
}

/// Orthonormal basis (columns) of the nullspace of `a`.
///
/// The matrix is padded with zero rows when it is wider than tall so that the
/// thin SVD exposes the full right singular basis.
pub fn nullspace(a: &DMatrix<f64>, cut: RankCut) -> DMatrix<f64> {
    let ncols = a.ncols();
    if ncols == 0 {
        return DMatrix::zeros(0, 0);
    }
    if a.nrows() == 0 || max_abs(a) == 0.0 {
        return DMatrix::identity(ncols, ncols);
    }
    let padded = if a.nrows() < ncols {
        let mut p = DMatrix::zeros(ncols, ncols);
        p.view_mut((0, 0), (a.nrows(), ncols)).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("SVD with v_t requested");
    let sigma_max = svd.singular_values.max();
    let cutoff = cut.cutoff(sigma_max);
    let cols: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] <= cutoff)
        .collect();
    let mut out = DMatrix::zeros(ncols, cols.len());
    for (j, &i) in cols.iter().enumerate() {
        out.set_column(j, &v_t.row(i).transpose());
    }
    out
}

/// Orthonormal basis (columns) of the column space of `a`.
pub fn column_space(a: &DMatrix<f64>, cut: RankCut) -> DMatrix<f64> {
    if a.ncols() == 0 || a.nrows() == 0 || max_abs(a) == 0.0 {
        return DMatrix::zeros(a.nrows(), 0);
    }
    let svd = a.clone().svd(true, false);
    let u = svd.u.expect("SVD with u requested");
    let sigma_max = svd.singular_values.max();
    let cutoff = cut.cutoff(sigma_max);
    let cols: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > cutoff)
        .collect();
    let mut out = DMatrix::zeros(a.nrows(), cols.len());
    for (j, &i) in cols.iter().enumerate() {
        out.set_column(j, &u.column(i).into_owned());
    }
    out
}

pub fn rank(a: &DMatrix<f64>, cut: RankCut) -> usize {
    if a.ncols() == 0 || a.nrows() == 0 || max_abs(a) == 0.0 {
        return 0;
    }
    let svd = a.clone().svd(false, false);
    let cutoff = cut.cutoff(svd.singular_values.max());
    svd.singular_values.iter().filter(|&&s| s > cutoff).count()
}

/// Least-norm least-squares solution of `a x = b` via the pseudo-inverse,
/// together with the residual norm and the nullspace dimension of `a`.
pub struct LstSq {
    pub solution: DVector<f64>,
    pub residual: f64,
    pub nullity: usize,
}

pub fn lstsq_min_norm(a: &DMatrix<f64>, b: &DVector<f64>, cut: RankCut) -> LstSq {
    let ncols = a.ncols();
    if ncols == 0 {
        return LstSq {
            solution: DVector::zeros(0),
            residual: b.norm(),
            nullity: 0,
        };
    }
    if max_abs(a) == 0.0 {
        return LstSq {
            solution: DVector::zeros(ncols),
            residual: b.norm(),
            nullity: ncols,
        };
    }
    let svd = a.clone().svd(true, true);
    let sigma_max = svd.singular_values.max();
    let cutoff = cut.cutoff(sigma_max);
    let r = svd.singular_values.iter().filter(|&&s| s > cutoff).count();
    let solution = svd
        .solve(b, cutoff)
        .expect("SVD solve with both factors computed");
    let residual = (a * &solution - b).norm();
    LstSq {
        solution,
        residual,
        nullity: ncols - r,
    }
}

/// Eigenvalues (ascending) and matching eigenvectors of a symmetric matrix.
pub fn symmetric_eigen_sorted(m: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let n = m.nrows();
    let sym = (m + m.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let mut values = DVector::zeros(n);
    let mut vectors = DMatrix::zeros(n, n);
    for (j, &i) in order.iter().enumerate() {
        values[j] = eig.eigenvalues[i];
        vectors.set_column(j, &eig.eigenvectors.column(i).into_owned());
    }
    (values, vectors)
}

pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, &x| acc.max(x.abs()))
}

/// Stacks column vectors into a matrix; zero columns are kept.
pub fn from_columns(nrows: usize, cols: &[DVector<f64>]) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(nrows, cols.len());
    for (j, c) in cols.iter().enumerate() {
        m.set_column(j, c);
    }
    m
}
