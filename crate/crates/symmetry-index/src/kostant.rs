//! Metric classification (normal / naturally reductive), the transvection
//! algebra of the canonical connection, and the ad-invariant bilinear form on
//! g that restricts to the metric on m and annihilates h x m.

use crate::homo::{HomogeneousSpace, MetricFlags};
use crate::lie::{self, BilinearForm, Subspace};
use crate::linalg::{self, RankCut};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum KostantError {
    #[error("space is not flagged naturally reductive")]
    NotNaturallyReductive,
    #[error(
        "presented algebra (dim {algebra_dim}) is strictly larger than the transvection algebra \
         (dim {transvection_dim}); restrict the presentation first"
    )]
    TransvectionMismatch {
        algebra_dim: usize,
        transvection_dim: usize,
    },
    #[error("no invariant form matched the metric (residual {residual:.3e})")]
    SolveFailure { residual: f64 },
}

/// Residuals of the defining constraints, evaluated on the returned form.
#[derive(Debug, Clone, Serialize)]
pub struct KostantResiduals {
    pub invariance: f64,
    pub h_m_orthogonality: f64,
    pub metric_match: f64,
}

#[derive(Debug, Clone)]
pub struct KostantForm {
    pub form: BilinearForm,
    pub residuals: KostantResiduals,
    /// (positive, negative, zero) eigenvalue counts of Q restricted to h.
    pub signature_on_h: (usize, usize, usize),
    /// Dimension of the homogeneous solution space (invariant forms vanishing
    /// on h x m and on all m-pairs).
    pub solution_space_dim: usize,
}

/// Decides the naturally-reductive and normal flags for a freshly built
/// space. Called from `HomogeneousSpace::build`.
pub(crate) fn classify_metric(space: &HomogeneousSpace) -> MetricFlags {
    let tol = space.tolerance();
    let d = space.dim_m();
    // Naturally reductive iff <[x,u]_m, v> is skew in (u, v) for all x in m,
    // which in frame coordinates is a plain antisymmetry statement.
    let mut worst = 0.0_f64;
    for x in 0..d {
        for u in 0..d {
            for v in u..d {
                let r = space.bracket_m(x, u)[v] + space.bracket_m(x, v)[u];
                worst = worst.max(r.abs());
            }
        }
    }
    let is_naturally_reductive = worst <= tol;

    let is_normal = if space.normal_form().is_some() {
        true
    } else {
        match solve_q_system(space) {
            Some(solve) => solve.residual_max() <= tol && find_positive_definite(space, &solve),
            None => false,
        }
    };
    MetricFlags {
        is_normal,
        is_naturally_reductive,
    }
}

/// Smallest subspace of g containing m and closed under bracketing with m.
pub fn transvection_algebra(space: &HomogeneousSpace) -> Subspace {
    let tol = space.tolerance();
    let algebra = space.algebra();
    let n = space.dim_g();
    let m_vectors = space.tangent_span().basis_vectors();
    let mut current = space.tangent_span().clone();
    loop {
        let mut cols = current.basis_vectors();
        let before = current.dim();
        for m in &m_vectors {
            for v in current.basis_vectors() {
                cols.push(algebra.bracket(m, &v).expect("dimensions agree"));
            }
        }
        current = Subspace::from_spanning(n, &cols, tol);
        if current.dim() == before || current.dim() == n {
            return current;
        }
    }
}

/// Solves for an ad-invariant symmetric form Q on g with Q(h,m) = 0 and
/// Q restricted to m equal to the metric. The space being naturally reductive
/// and presented by its transvection algebra guarantees a solution exists.
pub fn kostant_form(space: &HomogeneousSpace) -> Result<KostantForm, KostantError> {
    if !space.flags().is_naturally_reductive {
        return Err(KostantError::NotNaturallyReductive);
    }
    let tr = transvection_algebra(space);
    if tr.dim() < space.dim_g() {
        return Err(KostantError::TransvectionMismatch {
            algebra_dim: space.dim_g(),
            transvection_dim: tr.dim(),
        });
    }
    let solve = solve_q_system(space).ok_or(KostantError::SolveFailure { residual: f64::MAX })?;
    let tol = space.tolerance();
    if solve.residual_max() > tol {
        return Err(KostantError::SolveFailure {
            residual: solve.residual_max(),
        });
    }
    let h_gram = solve.form.restricted(space.isotropy().basis());
    let signature_on_h = BilinearForm::new(h_gram)
        .expect("restriction of a symmetric form")
        .signature(tol);
    Ok(KostantForm {
        residuals: solve.residuals(),
        signature_on_h,
        solution_space_dim: solve.nullity,
        form: solve.form,
    })
}

pub(crate) struct QSolve {
    pub form: BilinearForm,
    pub invariance: f64,
    pub h_m: f64,
    pub metric_match: f64,
    pub nullity: usize,
    null_basis: Vec<DMatrix<f64>>,
}

impl QSolve {
    pub fn residual_max(&self) -> f64 {
        self.invariance.max(self.h_m).max(self.metric_match)
    }

    fn residuals(&self) -> KostantResiduals {
        KostantResiduals {
            invariance: self.invariance,
            h_m_orthogonality: self.h_m,
            metric_match: self.metric_match,
        }
    }
}

/// Least-norm solve of the affine system {Q symmetric ad-invariant,
/// Q(h, m) = 0, Q|_m = metric} over the packed symmetric variables.
pub(crate) fn solve_q_system(space: &HomogeneousSpace) -> Option<QSolve> {
    let algebra = space.algebra();
    let n = algebra.dim();
    let tol = space.tolerance();
    let vars = lie::sym_var_count(n);
    let h = space.isotropy().basis_vectors();
    let m = space.m_basis();
    let d = m.ncols();

    let inv_rows = lie::invariance_rows(algebra);
    let n_inv = inv_rows.nrows();
    let n_hm = h.len() * d;
    let n_mm = d * (d + 1) / 2;
    let mut rows = DMatrix::zeros(n_inv + n_hm + n_mm, vars);
    let mut rhs = DVector::zeros(n_inv + n_hm + n_mm);
    rows.view_mut((0, 0), (n_inv, vars)).copy_from(&inv_rows);

    let mut r = n_inv;
    for hb in &h {
        for j in 0..d {
            let mc = m.column(j);
            for a in 0..n {
                if hb[a] == 0.0 {
                    continue;
                }
                for b in 0..n {
                    let c = hb[a] * mc[b];
                    if c != 0.0 {
                        rows[(r, lie::sym_index(n, a, b))] += c;
                    }
                }
            }
            r += 1;
        }
    }
    for i in 0..d {
        for j in i..d {
            let (ci, cj) = (m.column(i), m.column(j));
            for a in 0..n {
                if ci[a] == 0.0 {
                    continue;
                }
                for b in 0..n {
                    let c = ci[a] * cj[b];
                    if c != 0.0 {
                        rows[(r, lie::sym_index(n, a, b))] += c;
                    }
                }
            }
            rhs[r] = space.gram()[(i, j)];
            r += 1;
        }
    }

    let solve = linalg::lstsq_min_norm(&rows, &rhs, RankCut::Absolute(tol));
    let q = lie::sym_matrix_from_vars(n, &solve.solution);
    let form = BilinearForm::new(q).ok()?;

    let invariance = form.ad_invariance_residual(algebra);
    let mut h_m = 0.0_f64;
    for hb in &h {
        for j in 0..d {
            h_m = h_m.max(form.evaluate(hb, &m.column(j).into_owned()).abs());
        }
    }
    let metric_match = linalg::max_abs(&(form.restricted(m) - space.gram()));

    let null = linalg::nullspace(&rows, RankCut::Absolute(tol));
    let null_basis = (0..null.ncols())
        .map(|j| lie::sym_matrix_from_vars(n, &null.column(j).into_owned()))
        .collect();

    Some(QSolve {
        form,
        invariance,
        h_m,
        metric_match,
        nullity: null.ncols(),
        null_basis,
    })
}

/// Looks for a positive-definite element of the affine solution space:
/// the least-norm solution first, then a bounded seeded search over the
/// homogeneous directions.
fn find_positive_definite(space: &HomogeneousSpace, solve: &QSolve) -> bool {
    let tol = space.tolerance();
    if solve.form.is_positive_definite(tol) {
        return true;
    }
    if solve.null_basis.is_empty() {
        return false;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x9f0e);
    for _ in 0..32 {
        let mut q = solve.form.matrix().clone();
        for nb in &solve.null_basis {
            q += nb * rng.gen_range(-4.0..4.0);
        }
        if let Ok(f) = BilinearForm::new(q) {
            if f.is_positive_definite(tol) {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn normal_builds_are_flagged_normal_and_naturally_reductive() {
        for entry in ["sphere-3", "stiefel-4-2", "group-so3-so3"] {
            let space = catalog::find(entry).unwrap().build().unwrap();
            let flags = space.flags();
            assert!(flags.is_normal, "{entry}");
            assert!(flags.is_naturally_reductive, "{entry}");
        }
    }

    #[test]
    fn scaled_tangent_bundle_metric_is_not_naturally_reductive() {
        let space = catalog::unit_tangent_sphere_space(3, 2.0).unwrap();
        let flags = space.flags();
        assert!(!flags.is_naturally_reductive);
        assert!(!flags.is_normal);

        // Direct oracle for one mixed triple: x = L14, u = L13, v = L34.
        // <[x,u]_m, v> + <u, [x,v]_m> = 1 - 2 with the factor-2 metric.
        let a = space.algebra();
        let l14 = catalog::so_basis_vector(4, 1, 4);
        let l13 = catalog::so_basis_vector(4, 1, 3);
        let l34 = catalog::so_basis_vector(4, 3, 4);
        let xu = space.to_frame(&a.bracket(&l14, &l13).unwrap());
        let xv = space.to_frame(&a.bracket(&l14, &l34).unwrap());
        let u = space.to_frame(&l13);
        let v = space.to_frame(&l34);
        let residual = xu.dot(&v) + u.dot(&xv);
        assert!(residual.abs() > 0.3, "skewness residual {residual}");
    }

    #[test]
    fn unscaled_triple_metric_reduces_to_the_normal_one() {
        let space = catalog::unit_tangent_sphere_space(3, 1.0).unwrap();
        assert!(space.flags().is_naturally_reductive);
        assert!(space.flags().is_normal);
        assert!(space.u_tensor().max_coefficient() < 1e-12);
    }

    #[test]
    fn aloff_wallach_metric_is_not_normal() {
        let space = catalog::aloff_wallach_space(2.0).unwrap();
        assert!(!space.flags().is_naturally_reductive);
        assert!(!space.flags().is_normal);
    }

    #[test]
    fn transvection_algebra_cases() {
        // Normal Stiefel: brackets of m regenerate all of so(n+k).
        let stiefel = catalog::stiefel_space(3, 2).unwrap();
        assert_eq!(transvection_algebra(&stiefel).dim(), 10);

        // Symmetric pair: closure after one step, still everything here.
        let sphere = catalog::sphere_space(3).unwrap();
        assert_eq!(transvection_algebra(&sphere).dim(), 6);

        // Abelian algebra with trivial isotropy: m is already closed.
        let torus = crate::homo::HomogeneousSpace::build(
            crate::lie::LieAlgebra::abelian(2),
            &[],
            crate::homo::MetricSpec::Normal(BilinearForm::identity(2)),
            1e-8,
        )
        .unwrap();
        assert_eq!(transvection_algebra(&torus).dim(), 2);
    }

    #[test]
    fn kostant_form_on_the_bi_invariant_group_space() {
        let space = catalog::group_space_so3().unwrap();
        let k = kostant_form(&space).unwrap();
        assert!(k.residuals.invariance < 1e-8);
        assert!(k.residuals.h_m_orthogonality < 1e-8);
        assert!(k.residuals.metric_match < 1e-8);
        assert_eq!(k.signature_on_h, (3, 0, 0));
        // Oracle: the two block scales are pinned by Q(h,m) = 0 (equal
        // scales) and Q|_m = metric, so Q is the coordinate identity.
        let expected = DMatrix::identity(6, 6);
        assert!(linalg::max_abs(&(k.form.matrix() - &expected)) < 1e-8);
    }

    #[test]
    fn kostant_form_on_the_sphere_is_the_defining_form() {
        let space = catalog::sphere_space(3).unwrap();
        let k = kostant_form(&space).unwrap();
        assert!(k.residuals.invariance < 1e-8);
        // so(4) has a 2-dim invariant form space; the constraints pin it to
        // the coordinate identity, a multiple of the Killing form.
        let killing = space.algebra().killing_form();
        let scale = k.form.matrix()[(0, 0)] / killing.matrix()[(0, 0)];
        assert!(linalg::max_abs(&(k.form.matrix() - killing.matrix() * scale)) < 1e-8);
        assert_eq!(k.signature_on_h, (3, 0, 0));
    }

    #[test]
    fn kostant_form_rejects_non_naturally_reductive_spaces() {
        let t1s3 = catalog::unit_tangent_sphere_space(3, 2.0).unwrap();
        assert!(matches!(
            kostant_form(&t1s3),
            Err(KostantError::NotNaturallyReductive)
        ));
    }

    #[test]
    fn kostant_form_reports_transvection_mismatch() {
        // so(3) + so(3) acting with only one factor moving the point:
        // isotropy is the second factor, m is the first, and the
        // transvection algebra is the first factor alone.
        let g = crate::lie::test_algebras::so3_cyclic()
            .direct_sum(&crate::lie::test_algebras::so3_cyclic());
        let h: Vec<_> = (3..6)
            .map(|i| {
                let mut v = nalgebra::DVector::zeros(6);
                v[i] = 1.0;
                v
            })
            .collect();
        let space = crate::homo::HomogeneousSpace::build(
            g,
            &h,
            crate::homo::MetricSpec::Normal(BilinearForm::identity(6)),
            1e-8,
        )
        .unwrap();
        assert!(space.flags().is_naturally_reductive);
        assert!(matches!(
            kostant_form(&space),
            Err(KostantError::TransvectionMismatch {
                algebra_dim: 6,
                transvection_dim: 3
            })
        ));
    }
}
