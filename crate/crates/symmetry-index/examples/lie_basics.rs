//! Structure-constant arithmetic: brackets, the Killing form, invariant
//! bilinear forms and the ideal decomposition of so(4).

use symmetry_index::catalog::{so_algebra, so_basis_vector};
use symmetry_index::lie::{ideal_decomposition, invariant_forms, DEFAULT_TOLERANCE};

fn main() {
    let so4 = so_algebra(4).unwrap();
    println!("so(4): dim {}, basis {:?}", so4.dim(), so4.labels());
    println!("Jacobi residual: {:.2e}", so4.jacobi_residual());

    let l12 = so_basis_vector(4, 1, 2);
    let l13 = so_basis_vector(4, 1, 3);
    let bracket = so4.bracket(&l12, &l13).unwrap();
    let coeffs: Vec<(String, f64)> = so4
        .labels()
        .iter()
        .zip(bracket.iter())
        .filter(|(_, &c)| c != 0.0)
        .map(|(l, &c)| (l.clone(), c))
        .collect();
    println!("[L12, L13] = {coeffs:?}");

    let killing = so4.killing_form();
    println!(
        "Killing form: B(L12, L12) = {}, ad-invariance residual {:.2e}",
        killing.matrix()[(0, 0)],
        killing.ad_invariance_residual(&so4)
    );

    let forms = invariant_forms(&so4, &[], DEFAULT_TOLERANCE);
    println!(
        "ad-invariant symmetric forms on so(4): {}-dimensional space",
        forms.len()
    );

    let split = ideal_decomposition(&so4, DEFAULT_TOLERANCE, 42).unwrap();
    println!(
        "ideal decomposition: center dim {}, simple ideals {:?}",
        split.center.dim(),
        split.ideals.iter().map(|i| i.dim()).collect::<Vec<_>>()
    );
    println!("(the self-dual and anti-self-dual so(3) copies)");
}
