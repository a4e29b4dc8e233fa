//! Candidate Killing algebra g + f, Killing operators at the base point,
//! and the Cartan subspace of transvections whose values span the symmetry
//! subspace. The index of symmetry is the dimension of that span.
//!
//! A candidate is the 1-jet (value, operator) at the base point of a Killing
//! field: the field induced by an element of g, a G-invariant field attached
//! to an isotropy-fixed vector, or a sum of both. Fields induced by g enter
//! through an anti-homomorphism, so brackets of g-parts pick up a sign.

use crate::homo::{Assertions, HomogeneousSpace, UTensor};
use crate::lie::Subspace;
use crate::linalg::{self, RankCut};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error(
        "invariant fields are only Killing on naturally reductive spaces; \
         pass the override policy to experiment anyway"
    )]
    InvariantFieldNotKilling,
    #[error(
        "closed-form Killing operator disagrees with the three-term Koszul sum \
         (residual {residual:.3e}); aborting analysis"
    )]
    KoszulMismatch { residual: f64 },
    #[error(
        "bracket of invariant fields leaves the fixed-vector subspace (residual {residual:.3e})"
    )]
    ClosureFailure { residual: f64 },
    #[error(
        "invariant-field input lies outside the fixed-vector subspace (residual {residual:.3e})"
    )]
    NotFixedVector { residual: f64 },
}

/// Whether candidates from invariant fields participate in the solve.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum InvariantFieldPolicy {
    /// Include exactly when the space is naturally reductive.
    #[default]
    Auto,
    /// Include regardless; results are heuristic on other spaces.
    On,
    /// Never include.
    Off,
}

/// Sign convention for the map from g to Killing fields.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignConvention {
    /// Fields bracket through the negative of the algebra bracket.
    #[default]
    AntiHomomorphism,
    /// Flipped bookkeeping; negates every operator and bracket but leaves
    /// kernels, the symmetry subspace and the index unchanged.
    Homomorphism,
}

impl SignConvention {
    fn factor(self) -> f64 {
        match self {
            SignConvention::AntiHomomorphism => 1.0,
            SignConvention::Homomorphism => -1.0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct EngineOptions {
    pub invariant_fields: InvariantFieldPolicy,
    pub sign: SignConvention,
    pub seed: u64,
    pub assertions: Assertions,
}

impl Default for EngineOptions {
    fn default() -> Self {
        Self {
            invariant_fields: InvariantFieldPolicy::Auto,
            sign: SignConvention::AntiHomomorphism,
            seed: 42,
            assertions: Assertions::default(),
        }
    }
}

/// 1-jet of a candidate Killing field at the base point.
#[derive(Debug, Clone)]
pub struct KillingCandidate {
    /// Component coming from g, in g-coordinates.
    pub g_part: DVector<f64>,
    /// Component coming from an invariant field: a fixed vector of the
    /// isotropy, in frame coordinates.
    pub f_part: DVector<f64>,
    /// Value at the base point, frame coordinates.
    pub value: DVector<f64>,
    /// Covariant differential at the base point, frame coordinates;
    /// metric-skew, i.e. antisymmetric in the frame.
    pub operator: DMatrix<f64>,
}

impl KillingCandidate {
    pub fn operator_norm(&self) -> f64 {
        self.operator.norm()
    }

    /// Stacked (value, operator) vector; Killing fields on a connected space
    /// are determined by this jet.
    pub fn jet(&self) -> DVector<f64> {
        let d = self.value.len();
        let mut out = DVector::zeros(d + d * d);
        out.rows_mut(0, d).copy_from(&self.value);
        for j in 0..d {
            out.rows_mut(d + j * d, d)
                .copy_from(&self.operator.column(j));
        }
        out
    }
}

/// How trustworthy the computed index is.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum IndexStatus {
    /// The candidate algebra provably exhausts all Killing fields, or the
    /// index already equals dim M.
    Exact,
    /// Killing fields outside the candidate algebra cannot be ruled out.
    LowerBound,
}

/// Basis of transvections at the base point together with the span of their
/// values.
#[derive(Debug, Clone)]
pub struct CartanSubspace {
    pub basis: Vec<KillingCandidate>,
    /// Span of the basis values, frame coordinates.
    pub symmetry_subspace: Subspace,
    pub index: usize,
    pub status: IndexStatus,
    /// True when invariant-field candidates were forced onto a space that is
    /// not naturally reductive.
    pub heuristic: bool,
}

pub struct KillingEngine<'a> {
    space: &'a HomogeneousSpace,
    fix: Subspace,
    include_fix: bool,
    u: UTensor,
    sign: f64,
    tol: f64,
    seed: u64,
    assertions: Assertions,
    heuristic: bool,
}

impl<'a> KillingEngine<'a> {
    /// Builds the engine and validates the closed-form operator against an
    /// independently evaluated three-term Koszul sum on a random triple.
    pub fn new(space: &'a HomogeneousSpace, options: EngineOptions) -> Result<Self, EngineError> {
        let naturally_reductive = space.flags().is_naturally_reductive;
        let (include_fix, heuristic) = match options.invariant_fields {
            InvariantFieldPolicy::Auto => (naturally_reductive, false),
            InvariantFieldPolicy::On => (true, !naturally_reductive),
            InvariantFieldPolicy::Off => (false, false),
        };
        let engine = Self {
            space,
            fix: space.fixed_vectors(),
            include_fix,
            u: space.u_tensor(),
            sign: options.sign.factor(),
            tol: space.tolerance(),
            seed: options.seed,
            assertions: options.assertions,
            heuristic,
        };
        engine.koszul_self_check()?;
        Ok(engine)
    }

    pub fn space(&self) -> &HomogeneousSpace {
        self.space
    }

    /// Fixed-vector subspace of m, frame coordinates.
    pub fn fixed_subspace(&self) -> &Subspace {
        &self.fix
    }

    pub fn includes_invariant_fields(&self) -> bool {
        self.include_fix
    }

    pub fn is_heuristic(&self) -> bool {
        self.heuristic
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn assertions(&self) -> Assertions {
        self.assertions
    }

    /// Candidate induced by `x` in g: value is the m-component of x, and the
    /// operator is `A(u) = [x_h, u] + (1/2)[x_m, u]_m + U(u, x_m)`.
    pub fn operator_from_g(&self, x: &DVector<f64>) -> KillingCandidate {
        let space = self.space;
        let d = space.dim_m();
        let algebra = space.algebra();
        let x_h = space.project_h(x);
        let x_m = space.project_m(x);
        let value = space.to_frame(x);
        let mut operator = DMatrix::zeros(d, d);
        for i in 0..d {
            let f_i = space.frame().column(i).into_owned();
            let iso = space.to_frame(&algebra.bracket(&x_h, &f_i).expect("dims"));
            let rot = space.to_frame(&algebra.bracket(&x_m, &f_i).expect("dims")) * 0.5;
            let mut col = iso + rot;
            for j in 0..d {
                if value[j] != 0.0 {
                    col += self.u.basis_value(i, j) * value[j];
                }
            }
            operator.set_column(i, &(col * self.sign));
        }
        KillingCandidate {
            g_part: x.clone(),
            f_part: DVector::zeros(d),
            value,
            operator,
        }
    }

    /// Candidate for the G-invariant field with value `v` (a fixed vector of
    /// the isotropy, frame coordinates). Its operator is defined by
    /// `2<A(u), w> = -<[u, w]_m, v>`; on naturally reductive spaces this is
    /// the difference-tensor action `A(u) = (1/2)[u, v]_m`.
    pub fn operator_from_fix(&self, v: &DVector<f64>) -> Result<KillingCandidate, EngineError> {
        if !self.include_fix {
            return Err(EngineError::InvariantFieldNotKilling);
        }
        let residual = self.fix.containment_residual(v);
        if residual > self.tol.max(1e-10 * v.norm()) {
            return Err(EngineError::NotFixedVector { residual });
        }
        Ok(self.fix_candidate_unchecked(v))
    }

    fn fix_candidate_unchecked(&self, v: &DVector<f64>) -> KillingCandidate {
        let d = self.space.dim_m();
        let mut operator = DMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                // <A(f_i), f_j> = -(1/2) <[f_i, f_j]_m, v>
                operator[(j, i)] = -0.5 * self.space.bracket_m(i, j).dot(v) * self.sign;
            }
        }
        KillingCandidate {
            g_part: DVector::zeros(self.space.dim_g()),
            f_part: v.clone(),
            value: v.clone(),
            operator,
        }
    }

    /// Candidate for a mixed parameter (x in g, v in Fix).
    pub fn candidate(&self, x: &DVector<f64>, v: &DVector<f64>) -> KillingCandidate {
        let g = self.operator_from_g(x);
        if v.norm() == 0.0 {
            return g;
        }
        let f = self.fix_candidate_unchecked(v);
        KillingCandidate {
            g_part: g.g_part,
            f_part: f.f_part,
            value: g.value + f.value,
            operator: g.operator + f.operator,
        }
    }

    fn parameter_dim(&self) -> usize {
        self.space.dim_g() + if self.include_fix { self.fix.dim() } else { 0 }
    }

    fn candidate_from_parameters(&self, p: &DVector<f64>) -> KillingCandidate {
        let n = self.space.dim_g();
        let x = DVector::from_fn(n, |i, _| p[i]);
        let v = if self.include_fix {
            self.fix.basis() * p.rows(n, self.fix.dim())
        } else {
            DVector::zeros(self.space.dim_m())
        };
        self.candidate(&x, &v)
    }

    /// Kernel of the parameter-to-operator map over g + Fix. Parameters with
    /// zero value and zero operator (ineffectivity) are filtered out of the
    /// reported basis.
    pub fn cartan_subspace(&self) -> CartanSubspace {
        let space = self.space;
        let d = space.dim_m();
        let params = self.parameter_dim();

        let mut op_matrix = DMatrix::zeros(d * d, params);
        let mut value_matrix = DMatrix::zeros(d, params);
        for p in 0..params {
            let mut unit = DVector::zeros(params);
            unit[p] = 1.0;
            let c = self.candidate_from_parameters(&unit);
            for j in 0..d {
                op_matrix
                    .view_mut((j * d, p), (d, 1))
                    .copy_from(&c.operator.column(j));
            }
            value_matrix.set_column(p, &c.value);
        }

        // Relative cut: parameters whose operators vanish against the
        // largest singular value of the assembled system.
        let kernel = linalg::nullspace(&op_matrix, RankCut::Relative(self.tol));
        let values_on_kernel = &value_matrix * &kernel;
        let ineffective = linalg::nullspace(&values_on_kernel, RankCut::Absolute(self.tol));
        let effective_coeffs =
            linalg::nullspace(&ineffective.transpose(), RankCut::Absolute(self.tol));
        let effective = &kernel * effective_coeffs;

        let basis: Vec<KillingCandidate> = (0..effective.ncols())
            .map(|j| self.candidate_from_parameters(&effective.column(j).into_owned()))
            .collect();
        let values: Vec<DVector<f64>> = basis.iter().map(|c| c.value.clone()).collect();
        let symmetry_subspace = Subspace::from_spanning(d, &values, self.tol);
        let index = symmetry_subspace.dim();
        debug_assert_eq!(index, basis.len());

        let exhaustive = self.include_fix
            && space.flags().is_naturally_reductive
            && self.assertions.irreducible
            && self.assertions.non_sphere
            && !self.heuristic;
        let status = if index == d || exhaustive {
            IndexStatus::Exact
        } else {
            IndexStatus::LowerBound
        };
        CartanSubspace {
            basis,
            symmetry_subspace,
            index,
            status,
            heuristic: self.heuristic,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.cartan_subspace().index == self.space.dim_m()
    }

    /// Bracket of two candidates: g-parts bracket through the sign
    /// convention, invariant-field parts bracket to the invariant field with
    /// value `A_2(v_1) - A_1(v_2)`, and cross brackets vanish.
    pub fn bracket(
        &self,
        c1: &KillingCandidate,
        c2: &KillingCandidate,
    ) -> Result<KillingCandidate, EngineError> {
        let algebra = self.space.algebra();
        let g = algebra.bracket(&c1.g_part, &c2.g_part).expect("dims") * (-self.sign);
        let has_f = c1.f_part.norm() > 0.0 || c2.f_part.norm() > 0.0;
        let v = if has_f {
            let b1 = self.fix_candidate_unchecked(&c1.f_part).operator;
            let b2 = self.fix_candidate_unchecked(&c2.f_part).operator;
            let w = b2 * &c1.f_part - b1 * &c2.f_part;
            let residual = self.fix.containment_residual(&w);
            if residual > self.tol * 10.0 {
                return Err(EngineError::ClosureFailure { residual });
            }
            self.fix.project(&w)
        } else {
            DVector::zeros(self.space.dim_m())
        };
        Ok(self.candidate(&g, &v))
    }

    /// Compares the closed-form operator with the three-term sum
    /// `2<A(u), w> = -<[u,y]_m,w> - <[u,w]_m,y_m> - <[y,w]_m,u>` obtained by
    /// evaluating the Killing-field Koszul formula at the base point, on one
    /// seeded random triple.
    fn koszul_self_check(&self) -> Result<(), EngineError> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ 0x6b7a);
        let residual = self.koszul_residual(&mut rng);
        if residual > 1e-8 {
            return Err(EngineError::KoszulMismatch { residual });
        }
        Ok(())
    }

    /// Residual of the closed form against the three-term sum on one random
    /// triple drawn from `rng`. Exposed for the property suite.
    pub fn koszul_residual(&self, rng: &mut impl Rng) -> f64 {
        let space = self.space;
        let n = space.dim_g();
        let d = space.dim_m();
        if d == 0 {
            return 0.0;
        }
        let y = DVector::from_fn(n, |_, _| rng.gen_range(-1.0..1.0));
        let u = DVector::from_fn(d, |_, _| rng.gen_range(-1.0..1.0));
        let w = DVector::from_fn(d, |_, _| rng.gen_range(-1.0..1.0));
        let candidate = self.operator_from_g(&y);

        let algebra = space.algebra();
        let u_g = space.from_frame(&u);
        let w_g = space.from_frame(&w);
        let y_m = candidate.value.clone();
        let t1 = space
            .to_frame(&algebra.bracket(&u_g, &y).expect("dims"))
            .dot(&w);
        let t2 = space.bracket_m_frame(&u, &w).dot(&y_m);
        let t3 = space
            .to_frame(&algebra.bracket(&y, &w_g).expect("dims"))
            .dot(&u);
        let lhs = 2.0 * (&candidate.operator * &u).dot(&w);
        let rhs = self.sign * (-t1 - t2 - t3);
        (lhs - rhs).abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn engine_on(space: &HomogeneousSpace) -> KillingEngine<'_> {
        KillingEngine::new(space, EngineOptions::default()).unwrap()
    }

    fn e(n: usize, i: usize) -> DVector<f64> {
        let mut v = DVector::zeros(n);
        v[i] = 1.0;
        v
    }

    #[test]
    fn symmetric_pair_tangent_directions_are_parallel() {
        let space = catalog::group_space_so3().unwrap();
        let engine = engine_on(&space);
        for m in space.tangent_span().basis_vectors() {
            let c = engine.operator_from_g(&m);
            assert!(c.operator_norm() < 1e-12, "[m,m] in h and U = 0");
        }
    }

    #[test]
    fn abelian_torus_with_trivial_isotropy_is_flat_and_symmetric() {
        // h = {0}: every coordinate field and every invariant field is
        // parallel, and they coincide; the ineffectivity filter must quotient
        // the overlap instead of double counting.
        let space = HomogeneousSpace::build(
            crate::lie::LieAlgebra::abelian(2),
            &[],
            crate::homo::MetricSpec::Normal(crate::lie::BilinearForm::identity(2)),
            1e-8,
        )
        .unwrap();
        let engine = engine_on(&space);
        assert_eq!(engine.fixed_subspace().dim(), 2);
        let cs = engine.cartan_subspace();
        assert_eq!(cs.index, 2);
        assert_eq!(cs.status, IndexStatus::Exact);
        assert!(engine.is_symmetric());
    }

    #[test]
    fn candidates_off_the_kernel_have_operators_above_the_cut() {
        let space = catalog::stiefel_space(2, 2).unwrap();
        let engine = engine_on(&space);
        let cs = engine.cartan_subspace();
        // Parameter directions orthogonal to the transvection kernel keep a
        // visibly nonzero operator; the rank cut separates cleanly.
        let n = space.dim_g();
        for i in 0..n {
            let x = e(n, i);
            let c = engine.operator_from_g(&x);
            let in_kernel = cs
                .basis
                .iter()
                .any(|b| (b.g_part.normalize() - x.clone()).norm() < 1e-9);
            if !in_kernel && c.value.norm() > 1e-9 {
                assert!(
                    c.operator_norm() > 1e-3,
                    "basis {i}: operator norm {}",
                    c.operator_norm()
                );
            }
        }
    }

    #[test]
    fn isotropy_elements_give_linear_isotropy_operators() {
        let space = catalog::stiefel_space(2, 2).unwrap();
        let engine = engine_on(&space);
        for x in space.isotropy().basis_vectors() {
            let c = engine.operator_from_g(&x);
            assert!(c.value.norm() < 1e-12);
            // Operator is ad(x) restricted to m.
            let d = space.dim_m();
            let mut expected = DMatrix::zeros(d, d);
            for i in 0..d {
                let f_i = space.frame().column(i).into_owned();
                let br = space.algebra().bracket(&x, &f_i).unwrap();
                expected.set_column(i, &space.to_frame(&br));
            }
            assert!(linalg::max_abs(&(&c.operator - expected)) < 1e-12);
            assert!(c.operator_norm() > 0.1, "isotropy acts nontrivially");
        }
    }

    #[test]
    fn stiefel_left_block_gives_half_adjoint_operator() {
        // Oracle: the independent three-term Koszul sum per basis pair,
        // evaluated here without the closed form.
        let space = catalog::stiefel_space(2, 2).unwrap();
        let engine = engine_on(&space);
        let x = e(6, 0); // L12, the left so(2) generator
        let c = engine.operator_from_g(&x);
        let d = space.dim_m();
        for i in 0..d {
            let u = e(d, i);
            for j in 0..d {
                let w = e(d, j);
                let u_g = space.from_frame(&u);
                let w_g = space.from_frame(&w);
                let t1 = space
                    .to_frame(&space.algebra().bracket(&u_g, &x).unwrap())
                    .dot(&w);
                let t2 = space.bracket_m_frame(&u, &w).dot(&c.value);
                let t3 = space
                    .to_frame(&space.algebra().bracket(&x, &w_g).unwrap())
                    .dot(&u);
                let oracle = -0.5 * (t1 + t2 + t3);
                assert!(((&c.operator * &u).dot(&w) - oracle).abs() < 1e-12);
            }
        }
        // And the closed form collapses to (1/2) ad(x) on m here.
        let mut half_ad = DMatrix::zeros(d, d);
        for i in 0..d {
            let f_i = space.frame().column(i).into_owned();
            let br = space.algebra().bracket(&x, &f_i).unwrap();
            half_ad.set_column(i, &(space.to_frame(&br) * 0.5));
        }
        assert!(linalg::max_abs(&(&c.operator - half_ad)) < 1e-12);
        assert!(c.operator_norm() > 0.1);
    }

    #[test]
    fn invariant_field_operator_satisfies_its_defining_identity() {
        let space = catalog::stiefel_space(2, 2).unwrap();
        let engine = engine_on(&space);
        let fix = engine.fixed_subspace().clone();
        let v = fix.basis().column(0).into_owned();
        let c = engine.operator_from_fix(&v).unwrap();
        assert!((c.value.clone() - &v).norm() < 1e-12);
        assert!(c.operator_norm() > 0.1);
        let d = space.dim_m();
        for i in 0..d {
            for j in 0..d {
                let lhs = 2.0 * c.operator[(j, i)];
                let rhs = -space.bracket_m(i, j).dot(&v);
                assert!((lhs - rhs).abs() < 1e-12);
            }
        }
        // Zero fixed vector gives the zero candidate.
        let zero = engine.operator_from_fix(&DVector::zeros(d)).unwrap();
        assert!(zero.value.norm() == 0.0 && zero.operator_norm() == 0.0);
    }

    #[test]
    fn invariant_fields_are_rejected_without_the_naturally_reductive_flag() {
        let space = catalog::unit_tangent_sphere_space(3, 2.0).unwrap();
        let engine = engine_on(&space);
        assert!(!engine.includes_invariant_fields());
        let v = DVector::zeros(space.dim_m());
        assert!(matches!(
            engine.operator_from_fix(&v),
            Err(EngineError::InvariantFieldNotKilling)
        ));

        let forced = KillingEngine::new(
            &space,
            EngineOptions {
                invariant_fields: InvariantFieldPolicy::On,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(forced.is_heuristic());
    }

    #[test]
    fn bi_invariant_group_space_has_no_invariant_field_candidates() {
        let space = catalog::group_space_so3().unwrap();
        let engine = engine_on(&space);
        assert!(engine.includes_invariant_fields());
        assert_eq!(engine.fixed_subspace().dim(), 0);
    }

    #[test]
    fn sphere_is_symmetric_with_full_index() {
        let space = catalog::sphere_space(3).unwrap();
        let engine = engine_on(&space);
        let cs = engine.cartan_subspace();
        assert_eq!(cs.index, 3);
        assert_eq!(cs.status, IndexStatus::Exact);
        assert!(engine.is_symmetric());
    }

    #[test]
    fn stiefel_4_2_transvections_are_mixed_pairs() {
        let space = catalog::stiefel_space(2, 2).unwrap();
        let engine = KillingEngine::new(
            &space,
            EngineOptions {
                assertions: Assertions {
                    irreducible: true,
                    non_sphere: true,
                },
                ..Default::default()
            },
        )
        .unwrap();
        let cs = engine.cartan_subspace();
        assert_eq!(cs.index, 1);
        assert_eq!(cs.status, IndexStatus::Exact);
        let c = &cs.basis[0];
        assert!(c.operator_norm() < 1e-8);
        // Mixed transvection: the g-part is the left so(2) generator and the
        // f-part is the matching fixed vector.
        assert!(c.g_part.norm() > 0.1, "g-part present");
        assert!(c.f_part.norm() > 0.1, "f-part present");
        let g_dir = c.g_part.normalize();
        assert!((g_dir[0].abs() - 1.0).abs() < 1e-9, "g-part along L12");
        // Symmetry subspace equals the fixed-vector subspace.
        assert!(cs
            .symmetry_subspace
            .coincides_with(engine.fixed_subspace(), 1e-8));
    }

    #[test]
    fn scaled_tangent_directions_of_the_totally_geodesic_fiber_are_parallel() {
        // For the factor-2 metric the operators of p' directions vanish even
        // though the space is not naturally reductive.
        let (space, p_prime, _) = catalog::unit_tangent_sphere_parts(3, 2.0).unwrap();
        let engine = engine_on(&space);
        for v in p_prime.basis_vectors() {
            let c = engine.operator_from_g(&v);
            assert!(c.operator_norm() < 1e-9, "p' is parallel at the base point");
        }
        let cs = engine.cartan_subspace();
        assert_eq!(cs.index, 2);
        assert_eq!(cs.status, IndexStatus::LowerBound);
    }

    #[test]
    fn is_symmetric_cases() {
        assert!(engine_on(&catalog::sphere_space(3).unwrap()).is_symmetric());
        assert!(engine_on(&catalog::group_space_so3().unwrap()).is_symmetric());
        assert!(!engine_on(&catalog::stiefel_space(2, 2).unwrap()).is_symmetric());
    }

    #[test]
    fn bracket_of_pure_g_candidates_is_the_negated_algebra_bracket() {
        let space = catalog::stiefel_space(2, 2).unwrap();
        let engine = engine_on(&space);
        let c1 = engine.operator_from_g(&e(6, 1));
        let c2 = engine.operator_from_g(&e(6, 2));
        let br = engine.bracket(&c1, &c2).unwrap();
        let expected = space.algebra().bracket(&e(6, 1), &e(6, 2)).unwrap() * -1.0;
        assert!((br.g_part.clone() - expected).norm() < 1e-12);
        assert!(br.f_part.norm() == 0.0);

        let self_bracket = engine.bracket(&c1, &c1).unwrap();
        assert!(self_bracket.value.norm() < 1e-12);
        assert!(self_bracket.operator_norm() < 1e-12);
    }

    #[test]
    fn stiefel_transvection_brackets_live_in_the_symmetric_isotropy() {
        let space = catalog::stiefel_space(2, 3).unwrap();
        let engine = engine_on(&space);
        let cs = engine.cartan_subspace();
        assert_eq!(cs.index, 3);
        for i in 0..cs.basis.len() {
            for j in (i + 1)..cs.basis.len() {
                let br = engine.bracket(&cs.basis[i], &cs.basis[j]).unwrap();
                assert!(br.value.norm() < 1e-8, "bracket value vanishes at p");
                assert!(br.operator_norm() > 1e-3, "nontrivial isotropy element");
                // g-part sits in h + (left block), f-part in Fix.
                assert!(br.f_part.norm() > 1e-3);
            }
        }
    }

    #[test]
    fn index_is_invariant_under_the_sign_convention_flip() {
        for name in [
            "sphere-3",
            "stiefel-4-2",
            "stiefel-5-3",
            "t1s3",
            "aloff-wallach",
        ] {
            let entry = catalog::find(name).unwrap();
            let space = entry.build().unwrap();
            let base = KillingEngine::new(&space, EngineOptions::default())
                .unwrap()
                .cartan_subspace();
            let flipped_engine = KillingEngine::new(
                &space,
                EngineOptions {
                    sign: SignConvention::Homomorphism,
                    ..Default::default()
                },
            )
            .unwrap();
            let flipped = flipped_engine.cartan_subspace();
            assert_eq!(base.index, flipped.index, "{name}");
            assert!(base
                .symmetry_subspace
                .coincides_with(&flipped.symmetry_subspace, 1e-8));
        }
    }

    #[test]
    fn cartan_basis_operators_are_metric_skew_and_tiny() {
        for name in ["stiefel-4-2", "stiefel-5-3", "t1s3"] {
            let space = catalog::find(name).unwrap().build().unwrap();
            let engine = engine_on(&space);
            let cs = engine.cartan_subspace();
            for c in &cs.basis {
                assert!(c.operator_norm() < 1e-8, "{name}");
                let skew = linalg::max_abs(&(&c.operator + c.operator.transpose()));
                assert!(skew < 1e-9, "{name}");
            }
        }
    }

    #[test]
    fn symmetry_subspace_is_isotropy_invariant() {
        for name in ["stiefel-4-2", "stiefel-5-3", "t1s3", "aloff-wallach"] {
            let space = catalog::find(name).unwrap().build().unwrap();
            let engine = engine_on(&space);
            let cs = engine.cartan_subspace();
            for x in space.isotropy().basis_vectors() {
                for u in cs.symmetry_subspace.basis_vectors() {
                    let u_g = space.from_frame(&u);
                    let br = space.to_frame(&space.algebra().bracket(&x, &u_g).unwrap());
                    assert!(
                        cs.symmetry_subspace.containment_residual(&br) < 1e-8,
                        "{name}"
                    );
                }
            }
        }
    }
}
