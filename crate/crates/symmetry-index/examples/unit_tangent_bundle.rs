//! The unit tangent bundle of the 3-sphere of curvature 2: the same quotient
//! SO(4)/SO(2) as the Stiefel manifold, but with the fiber metric doubled.
//! The leaf of symmetry changes from a flat circle to a round 2-sphere.

use symmetry_index::catalog;
use symmetry_index::killing::{EngineOptions, KillingEngine};
use symmetry_index::leaf;

fn main() {
    // Normal metric: leaf is the circle of fixed vectors.
    let entry = catalog::find("stiefel-4-2").unwrap();
    let normal = entry.build().unwrap();
    let engine = KillingEngine::new(
        &normal,
        EngineOptions {
            assertions: entry.assertions,
            ..Default::default()
        },
    )
    .unwrap();
    let cs = engine.cartan_subspace();
    let decomposition = leaf::leaf_decomposition(&engine, &cs).unwrap();
    println!("SO(4)/SO(2), normal metric:");
    println!(
        "  index {}, leaf dim {} (flat {}, factors {})",
        cs.index,
        decomposition.leaf_dim(),
        decomposition.flat_dim(),
        decomposition.factors.len()
    );

    // Fiber scaled by 2: the p' directions become parallel at the base
    // point and the leaf is the totally geodesic 2-sphere fiber.
    let (scaled, p_prime, _) = catalog::unit_tangent_sphere_parts(3, 2.0).unwrap();
    let engine = KillingEngine::new(&scaled, EngineOptions::default()).unwrap();
    for v in p_prime.basis_vectors() {
        let c = engine.operator_from_g(&v);
        println!(
            "  |operator| of a p' direction: {:.2e} (parallel at the base point)",
            c.operator_norm()
        );
    }
    let cs = engine.cartan_subspace();
    let decomposition = leaf::leaf_decomposition(&engine, &cs).unwrap();
    println!("SO(4)/SO(2), fiber scaled by 2 (unit tangent bundle of S^3):");
    println!(
        "  index {}, leaf dim {}, factors: {}",
        cs.index,
        decomposition.leaf_dim(),
        decomposition.factors.len()
    );
    let f = &decomposition.factors[0];
    println!(
        "  factor: g dim {} with ideals {:?}, group type = {} (a 2-sphere leaf)",
        f.g_dim(),
        f.simple_ideal_dims,
        f.group_type
    );

    // Over S^4 the leaf is a 3-sphere, which IS a group manifold.
    let (scaled4, _, _) = catalog::unit_tangent_sphere_parts(4, 2.0).unwrap();
    let engine = KillingEngine::new(&scaled4, EngineOptions::default()).unwrap();
    let cs = engine.cartan_subspace();
    let decomposition = leaf::leaf_decomposition(&engine, &cs).unwrap();
    let f = &decomposition.factors[0];
    println!("SO(5)/SO(3), fiber scaled by 2 (unit tangent bundle of S^4):");
    println!(
        "  index {}, leaf dim {}, factor ideals {:?}, group type = {}",
        cs.index,
        decomposition.leaf_dim(),
        f.simple_ideal_dims,
        f.group_type
    );
}
