//! Structure of the leaf of symmetry: the symmetric isotropy algebra spanned
//! by brackets of transvections, the flat/irreducible factor split of the
//! symmetry subspace, group-type detection on the reconstructed abstract
//! algebra, and the checks tying the leaf to the fixed-vector subspace.

use crate::killing::{CartanSubspace, EngineError, KillingCandidate, KillingEngine};
use crate::lie::{self, LieAlgebra, Subspace};
use crate::linalg::{self, RankCut};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LeafError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("module splitting is tolerance-ambiguous (eigenvalue gap {gap:.3e})")]
    DecompositionUnstable { gap: f64 },
    #[error("abstract factor algebra could not be decomposed: {0}")]
    Lie(#[from] lie::LieError),
}

/// One irreducible component of the leaf: tangent candidates `p`, their
/// brackets `k`, and the group-type verdict on `g = k + p`.
#[derive(Debug, Clone)]
pub struct LeafFactor {
    pub p_basis: Vec<KillingCandidate>,
    pub k_basis: Vec<KillingCandidate>,
    /// Span of the `p_basis` values, frame coordinates.
    pub p_values: Subspace,
    pub group_type: bool,
    pub simple_ideal_dims: Vec<usize>,
    /// Residual of bracket closure of the abstract algebra `k + p`.
    pub closure_residual: f64,
}

impl LeafFactor {
    pub fn p_dim(&self) -> usize {
        self.p_basis.len()
    }

    pub fn k_dim(&self) -> usize {
        self.k_basis.len()
    }

    pub fn g_dim(&self) -> usize {
        self.p_basis.len() + self.k_basis.len()
    }
}

#[derive(Debug, Clone)]
pub struct LeafDecomposition {
    /// Transvections bracketing to zero with the whole Cartan subspace.
    pub flat_basis: Vec<KillingCandidate>,
    pub flat_values: Subspace,
    pub factors: Vec<LeafFactor>,
    /// Dimension of the fixed-vector subspace.
    pub sigma_dim: usize,
    /// Residual of the containment of the flat values in the fixed vectors.
    pub flat_in_fixed_residual: f64,
}

impl LeafDecomposition {
    pub fn flat_dim(&self) -> usize {
        self.flat_basis.len()
    }

    pub fn leaf_dim(&self) -> usize {
        self.flat_dim() + self.factors.iter().map(|f| f.p_dim()).sum::<usize>()
    }
}

/// Outcome of comparing the symmetry subspace with the fixed vectors.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SymmetryFixedCheck {
    Pass { residual: f64 },
    Fail { residual: f64 },
    NotApplicable { reason: String },
}

fn combine(cands: &[KillingCandidate], coeffs: &DVector<f64>) -> KillingCandidate {
    let first = &cands[0];
    let mut g_part = DVector::zeros(first.g_part.len());
    let mut f_part = DVector::zeros(first.f_part.len());
    let mut value = DVector::zeros(first.value.len());
    let mut operator = DMatrix::zeros(first.operator.nrows(), first.operator.ncols());
    for (c, &a) in cands.iter().zip(coeffs.iter()) {
        if a == 0.0 {
            continue;
        }
        g_part += &c.g_part * a;
        f_part += &c.f_part * a;
        value += &c.value * a;
        operator += &c.operator * a;
    }
    KillingCandidate {
        g_part,
        f_part,
        value,
        operator,
    }
}

fn param_vector(engine: &KillingEngine, c: &KillingCandidate) -> DVector<f64> {
    let n = c.g_part.len();
    let fix = engine.fixed_subspace();
    let mut out = DVector::zeros(n + fix.dim());
    out.rows_mut(0, n).copy_from(&c.g_part);
    if fix.dim() > 0 {
        out.rows_mut(n, fix.dim()).copy_from(&fix.coords(&c.f_part));
    }
    out
}

fn candidate_from_param(engine: &KillingEngine, p: &DVector<f64>) -> KillingCandidate {
    let n = engine.space().dim_g();
    let fix = engine.fixed_subspace();
    let x = DVector::from_fn(n, |i, _| p[i]);
    let v = if fix.dim() > 0 {
        fix.basis() * p.rows(n, fix.dim())
    } else {
        DVector::zeros(engine.space().dim_m())
    };
    engine.candidate(&x, &v)
}

/// Orthonormal parameter basis of the span of the given candidates, with
/// directions of zero 1-jet (ineffectivity) filtered out. The jets of the
/// returned candidates are linearly independent.
fn span_mod_ineffective(
    engine: &KillingEngine,
    cands: &[KillingCandidate],
    tol: f64,
) -> Vec<KillingCandidate> {
    if cands.is_empty() {
        return Vec::new();
    }
    let params: Vec<DVector<f64>> = cands.iter().map(|c| param_vector(engine, c)).collect();
    let span = linalg::column_space(
        &linalg::from_columns(params[0].len(), &params),
        RankCut::Absolute(tol),
    );
    if span.ncols() == 0 {
        return Vec::new();
    }
    let span_cands: Vec<KillingCandidate> = (0..span.ncols())
        .map(|j| candidate_from_param(engine, &span.column(j).into_owned()))
        .collect();
    let jets = linalg::from_columns(
        span_cands[0].jet().len(),
        &span_cands.iter().map(|c| c.jet()).collect::<Vec<_>>(),
    );
    let dead = linalg::nullspace(&jets, RankCut::Absolute(tol));
    let keep = linalg::nullspace(&dead.transpose(), RankCut::Absolute(tol));
    let effective = span * keep;
    (0..effective.ncols())
        .map(|j| candidate_from_param(engine, &effective.column(j).into_owned()))
        .collect()
}

/// Span of `bracket(c_i, c_j)` over the Cartan basis: the symmetric isotropy
/// algebra. Every element vanishes at the base point.
pub fn symmetric_isotropy(
    engine: &KillingEngine,
    cs: &CartanSubspace,
) -> Result<Vec<KillingCandidate>, LeafError> {
    let mut brackets = Vec::new();
    for i in 0..cs.basis.len() {
        for j in (i + 1)..cs.basis.len() {
            brackets.push(engine.bracket(&cs.basis[i], &cs.basis[j])?);
        }
    }
    Ok(span_mod_ineffective(engine, &brackets, engine.tolerance()))
}

/// Splits the Cartan subspace into its flat part and the irreducible
/// components of the leaf, grouped into commuting factor algebras.
pub fn leaf_decomposition(
    engine: &KillingEngine,
    cs: &CartanSubspace,
) -> Result<LeafDecomposition, LeafError> {
    let tol = engine.tolerance();
    let fix = engine.fixed_subspace();
    let d = engine.space().dim_m();
    let r = cs.basis.len();
    if r == 0 {
        return Ok(LeafDecomposition {
            flat_basis: Vec::new(),
            flat_values: Subspace::zero(d),
            factors: Vec::new(),
            sigma_dim: fix.dim(),
            flat_in_fixed_residual: 0.0,
        });
    }

    // Brackets of the Cartan basis, as jets, for the flat-part kernel.
    let jet_dim = cs.basis[0].jet().len();
    let mut jets = vec![vec![DVector::zeros(jet_dim); r]; r];
    for i in 0..r {
        for j in (i + 1)..r {
            let b = engine.bracket(&cs.basis[i], &cs.basis[j])?;
            jets[i][j] = b.jet();
            jets[j][i] = -jets[i][j].clone();
        }
    }
    // Flat part: coefficient vectors whose bracket with every basis element
    // vanishes as a field.
    let mut rows = DMatrix::zeros(r * jet_dim, r);
    for j in 0..r {
        for i in 0..r {
            rows.view_mut((j * jet_dim, i), (jet_dim, 1))
                .copy_from(&jets[i][j]);
        }
    }
    let flat_coeffs = linalg::nullspace(&rows, RankCut::Absolute(tol));
    let flat_basis: Vec<KillingCandidate> = (0..flat_coeffs.ncols())
        .map(|j| combine(&cs.basis, &flat_coeffs.column(j).into_owned()))
        .collect();
    let flat_values = Subspace::from_spanning(
        d,
        &flat_basis
            .iter()
            .map(|c| c.value.clone())
            .collect::<Vec<_>>(),
        tol,
    );
    let flat_in_fixed_residual = fix.subspace_residual(&flat_values);

    // Metric-orthogonal complement of the flat values inside the symmetry
    // subspace carries the semisimple part.
    let system = flat_values.basis().transpose() * cs.symmetry_subspace.basis();
    let ss_coeffs = linalg::nullspace(&system, RankCut::Absolute(tol));
    let p_ss = Subspace::from_orthonormal(linalg::column_space(
        &(cs.symmetry_subspace.basis() * ss_coeffs),
        RankCut::Absolute(tol),
    ));

    let mut factors = Vec::new();
    if p_ss.dim() > 0 {
        let value_matrix = linalg::from_columns(
            d,
            &cs.basis.iter().map(|c| c.value.clone()).collect::<Vec<_>>(),
        );
        let candidate_with_value = |v: &DVector<f64>| -> KillingCandidate {
            let solve = linalg::lstsq_min_norm(&value_matrix, v, RankCut::Absolute(tol));
            combine(&cs.basis, &solve.solution)
        };

        let k_basis = symmetric_isotropy(engine, cs)?;
        let s = p_ss.dim();
        let ss_candidates: Vec<KillingCandidate> = p_ss
            .basis_vectors()
            .iter()
            .map(&candidate_with_value)
            .collect();

        // Action of the symmetric isotropy algebra on the semisimple values.
        let mut actions = Vec::new();
        for kappa in &k_basis {
            let mut t = DMatrix::zeros(s, s);
            for (a, c) in ss_candidates.iter().enumerate() {
                let moved = engine.bracket(kappa, c)?;
                t.set_column(a, &p_ss.coords(&moved.value));
            }
            actions.push(t);
        }

        let modules = split_into_modules(&actions, s, tol, engine.seed())?;

        // Group modules into commuting factors.
        let module_candidates: Vec<Vec<KillingCandidate>> = modules
            .iter()
            .map(|m| {
                (0..m.ncols())
                    .map(|j| candidate_with_value(&(p_ss.basis() * m.column(j).into_owned())))
                    .collect()
            })
            .collect();
        let mut group_of: Vec<usize> = (0..modules.len()).collect();
        for a in 0..modules.len() {
            for b in (a + 1)..modules.len() {
                let mut linked = false;
                'search: for ca in &module_candidates[a] {
                    for cb in &module_candidates[b] {
                        if engine.bracket(ca, cb)?.jet().norm() > 1e-6 {
                            linked = true;
                            break 'search;
                        }
                    }
                }
                if linked {
                    let (ga, gb) = (group_of[a], group_of[b]);
                    for g in group_of.iter_mut() {
                        if *g == gb {
                            *g = ga;
                        }
                    }
                }
            }
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut seen: Vec<usize> = Vec::new();
        for (idx, &g) in group_of.iter().enumerate() {
            match seen.iter().position(|&x| x == g) {
                Some(pos) => groups[pos].push(idx),
                None => {
                    seen.push(g);
                    groups.push(vec![idx]);
                }
            }
        }

        for group in groups {
            let mut p_basis = Vec::new();
            for &m in &group {
                p_basis.extend(module_candidates[m].iter().cloned());
            }
            let factor = build_factor(engine, p_basis, tol)?;
            factors.push(factor);
        }
    }

    Ok(LeafDecomposition {
        flat_basis,
        flat_values,
        factors,
        sigma_dim: fix.dim(),
        flat_in_fixed_residual,
    })
}

/// Irreducible invariant subspaces of the joint action, via eigenspaces of a
/// seeded random symmetric element of the commutant.
fn split_into_modules(
    actions: &[DMatrix<f64>],
    s: usize,
    tol: f64,
    seed: u64,
) -> Result<Vec<DMatrix<f64>>, LeafError> {
    if actions.is_empty() {
        // No isotropy action to split by; a single module.
        return Ok(vec![DMatrix::identity(s, s)]);
    }
    let vars = lie::sym_var_count(s);
    let mut rows = DMatrix::zeros(actions.len() * s * s, vars);
    let mut r = 0;
    for a in actions {
        for p in 0..s {
            for q in 0..s {
                for k in 0..s {
                    rows[(r, lie::sym_index(s, p, k))] += a[(k, q)];
                    rows[(r, lie::sym_index(s, k, q))] -= a[(p, k)];
                }
                r += 1;
            }
        }
    }
    let commutant = linalg::nullspace(&rows, RankCut::Absolute(tol));
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x1eaf);
    let cluster_radius = 10.0 * tol;
    let mut last_gap = f64::MAX;
    for _attempt in 0..8 {
        let mut vars_vec = DVector::zeros(vars);
        for j in 0..commutant.ncols() {
            let c: f64 = rng.gen_range(-1.0..1.0);
            vars_vec += commutant.column(j) * c;
        }
        let op = lie::sym_matrix_from_vars(s, &vars_vec);
        let (vals, vecs) = linalg::symmetric_eigen_sorted(&op);
        let mut clusters: Vec<Vec<usize>> = Vec::new();
        for i in 0..s {
            match clusters.last_mut() {
                Some(c) if (vals[i] - vals[*c.last().unwrap()]).abs() <= cluster_radius => {
                    c.push(i)
                }
                _ => clusters.push(vec![i]),
            }
        }
        // Distinct clusters separated by less than 10x the merge radius are
        // ambiguous; re-draw, and give up if it persists.
        let min_gap = clusters
            .windows(2)
            .map(|w| (vals[w[1][0]] - vals[*w[0].last().unwrap()]).abs())
            .fold(f64::MAX, f64::min);
        if min_gap < 10.0 * cluster_radius && commutant.ncols() > 1 {
            last_gap = min_gap;
            continue;
        }
        return Ok(clusters
            .into_iter()
            .map(|c| {
                let cols: Vec<DVector<f64>> =
                    c.iter().map(|&i| vecs.column(i).into_owned()).collect();
                linalg::from_columns(s, &cols)
            })
            .collect());
    }
    Err(LeafError::DecompositionUnstable { gap: last_gap })
}

fn build_factor(
    engine: &KillingEngine,
    p_basis: Vec<KillingCandidate>,
    tol: f64,
) -> Result<LeafFactor, LeafError> {
    let d = engine.space().dim_m();
    let mut pair_brackets = Vec::new();
    for i in 0..p_basis.len() {
        for j in (i + 1)..p_basis.len() {
            pair_brackets.push(engine.bracket(&p_basis[i], &p_basis[j])?);
        }
    }
    let k_basis = span_mod_ineffective(engine, &pair_brackets, tol);
    let p_values = Subspace::from_spanning(
        d,
        &p_basis.iter().map(|c| c.value.clone()).collect::<Vec<_>>(),
        tol,
    );

    let (group_type, simple_ideal_dims, closure_residual) =
        group_type_check(engine, &k_basis, &p_basis)?;

    Ok(LeafFactor {
        p_basis,
        k_basis,
        p_values,
        group_type,
        simple_ideal_dims,
        closure_residual,
    })
}

/// Reconstructs the abstract involutive algebra spanned by `k + p` from
/// candidate brackets and decides whether it splits into exactly two simple
/// ideals interchanged by the involution (+1 on k, -1 on p).
pub fn group_type_check(
    engine: &KillingEngine,
    k_basis: &[KillingCandidate],
    p_basis: &[KillingCandidate],
) -> Result<(bool, Vec<usize>, f64), LeafError> {
    let tol = engine.tolerance();
    let q = k_basis.len() + p_basis.len();
    if p_basis.is_empty() {
        return Ok((false, Vec::new(), 0.0));
    }
    let basis: Vec<&KillingCandidate> = k_basis.iter().chain(p_basis.iter()).collect();
    let jets = linalg::from_columns(
        basis[0].jet().len(),
        &basis.iter().map(|c| c.jet()).collect::<Vec<_>>(),
    );
    let mut entries = Vec::new();
    let mut closure_residual = 0.0_f64;
    for a in 0..q {
        for b in (a + 1)..q {
            let br = engine.bracket(basis[a], basis[b])?;
            let solve = linalg::lstsq_min_norm(&jets, &br.jet(), RankCut::Absolute(tol));
            closure_residual = closure_residual.max(solve.residual);
            for k in 0..q {
                if solve.solution[k].abs() > 1e-12 {
                    entries.push((a, b, k, solve.solution[k]));
                }
            }
        }
    }
    let abstract_algebra = LieAlgebra::from_entries(q, None, &entries)?;

    let decomposition = lie::ideal_decomposition(&abstract_algebra, tol.max(1e-7), engine.seed())?;
    if decomposition.center.dim() != 0 || decomposition.ideals.len() != 2 {
        let dims = decomposition.ideals.iter().map(|i| i.dim()).collect();
        return Ok((false, dims, closure_residual));
    }
    // Involution: +1 on the k coordinates, -1 on the p coordinates.
    let theta = DMatrix::from_fn(q, q, |i, j| {
        if i != j {
            0.0
        } else if i < k_basis.len() {
            1.0
        } else {
            -1.0
        }
    });
    let swapped = Subspace::from_orthonormal(&theta * decomposition.ideals[0].basis());
    let is_swap = swapped.coincides_with(&decomposition.ideals[1], 1e-6);
    let dims: Vec<usize> = decomposition.ideals.iter().map(|i| i.dim()).collect();
    let simple = dims.len() == 2 && dims[0] == dims[1];
    Ok((is_swap && simple, dims, closure_residual))
}

/// Compares the symmetry subspace with the fixed vectors of the isotropy.
/// Applies to normal homogeneous, non-symmetric spaces asserted irreducible.
pub fn fixed_vector_match_check(engine: &KillingEngine, cs: &CartanSubspace) -> SymmetryFixedCheck {
    let space = engine.space();
    if !space.flags().is_normal {
        return SymmetryFixedCheck::NotApplicable {
            reason: "metric is not flagged normal homogeneous".into(),
        };
    }
    if cs.index == space.dim_m() {
        return SymmetryFixedCheck::NotApplicable {
            reason: "space is symmetric".into(),
        };
    }
    if !engine.assertions().irreducible {
        return SymmetryFixedCheck::NotApplicable {
            reason: "irreducibility not asserted".into(),
        };
    }
    let fix = engine.fixed_subspace();
    let residual = fix
        .subspace_residual(&cs.symmetry_subspace)
        .max(cs.symmetry_subspace.subspace_residual(fix));
    if residual < engine.tolerance() {
        SymmetryFixedCheck::Pass { residual }
    } else {
        SymmetryFixedCheck::Fail { residual }
    }
}

/// Max residual of `<[xi, X], eta> + (1/2) <X, [xi, eta]>` at the base point
/// over seeded random pairs `(xi, eta)` perpendicular to the symmetry
/// subspace and Cartan elements `X` tangent to a semisimple factor.
pub fn bracket_formula_check(
    engine: &KillingEngine,
    cs: &CartanSubspace,
    decomposition: &LeafDecomposition,
    trials: usize,
) -> Result<f64, LeafError> {
    if trials == 0 || cs.basis.is_empty() {
        return Ok(0.0);
    }
    let xs: Vec<&KillingCandidate> = decomposition
        .factors
        .iter()
        .flat_map(|f| f.p_basis.iter())
        .collect();
    if xs.is_empty() {
        return Ok(0.0);
    }
    let space = engine.space();
    let complement = cs
        .symmetry_subspace
        .orthogonal_complement(engine.tolerance());
    if complement.dim() == 0 {
        return Ok(0.0);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(engine.seed() ^ 0xb4ac);
    let mut worst = 0.0_f64;
    for _ in 0..trials {
        let xi = normalized_sample(&complement, &mut rng);
        let eta = normalized_sample(&complement, &mut rng);
        let c_xi = engine.operator_from_g(&space.from_frame(&xi));
        let c_eta = engine.operator_from_g(&space.from_frame(&eta));
        let xi_eta_value = engine.bracket(&c_xi, &c_eta)?.value;
        for x in &xs {
            let moved = engine.bracket(&c_xi, x)?.value;
            let residual = moved.dot(&eta) + 0.5 * x.value.dot(&xi_eta_value);
            worst = worst.max(residual.abs());
        }
    }
    Ok(worst)
}

fn normalized_sample(subspace: &Subspace, rng: &mut impl Rng) -> DVector<f64> {
    let coeffs = DVector::from_fn(subspace.dim(), |_, _| rng.gen_range(-1.0..1.0));
    let v = subspace.basis() * coeffs;
    let n = v.norm();
    if n < 1e-12 {
        subspace.basis().column(0).into_owned()
    } else {
        v / n
    }
}

/// Max 1-jet norm of brackets between candidates of distinct leaf
/// components (flat part and factors). Vanishes for commuting ideals.
pub fn cross_factor_bracket_residual(
    engine: &KillingEngine,
    decomposition: &LeafDecomposition,
) -> Result<f64, LeafError> {
    let mut components: Vec<Vec<&KillingCandidate>> = Vec::new();
    if !decomposition.flat_basis.is_empty() {
        components.push(decomposition.flat_basis.iter().collect());
    }
    for f in &decomposition.factors {
        components.push(f.p_basis.iter().chain(f.k_basis.iter()).collect());
    }
    let mut worst = 0.0_f64;
    for a in 0..components.len() {
        for b in (a + 1)..components.len() {
            for ca in &components[a] {
                for cb in &components[b] {
                    worst = worst.max(engine.bracket(ca, cb)?.jet().norm());
                }
            }
        }
    }
    Ok(worst)
}

/// Residual of bracket closure of `g = k + p`: brackets of any two members
/// expanded in the joint jet basis.
pub fn involutive_closure_residual(
    engine: &KillingEngine,
    k_basis: &[KillingCandidate],
    p_basis: &[KillingCandidate],
) -> Result<f64, LeafError> {
    let basis: Vec<&KillingCandidate> = k_basis.iter().chain(p_basis.iter()).collect();
    if basis.is_empty() {
        return Ok(0.0);
    }
    let tol = engine.tolerance();
    let jets = linalg::from_columns(
        basis[0].jet().len(),
        &basis.iter().map(|c| c.jet()).collect::<Vec<_>>(),
    );
    let mut worst = 0.0_f64;
    for a in 0..basis.len() {
        for b in (a + 1)..basis.len() {
            let br = engine.bracket(basis[a], basis[b])?;
            let solve = linalg::lstsq_min_norm(&jets, &br.jet(), RankCut::Absolute(tol));
            worst = worst.max(solve.residual);
        }
    }
    Ok(worst)
}
