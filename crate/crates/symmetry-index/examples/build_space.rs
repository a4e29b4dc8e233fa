//! Building and validating a homogeneous space: the Stiefel manifold
//! SO(5)/SO(3) with its normal metric, its fixed vectors and its
//! classification flags.

use symmetry_index::catalog;

fn main() {
    let space = catalog::stiefel_space(3, 2).unwrap();
    println!(
        "SO(5)/SO(3): dim g = {}, dim h = {}, dim M = {}",
        space.dim_g(),
        space.isotropy().dim(),
        space.dim_m()
    );
    let flags = space.flags();
    println!(
        "flags: normal = {}, naturally reductive = {}",
        flags.is_normal, flags.is_naturally_reductive
    );

    let fix = space.fixed_vectors();
    println!(
        "fixed vectors of the isotropy: dim {} (the left so(2) block)",
        fix.dim()
    );

    let u = space.u_tensor();
    println!(
        "U-tensor max coefficient: {:.2e} (vanishes: naturally reductive)",
        u.max_coefficient()
    );

    // The scaled-fiber metric on the same underlying quotient is not
    // naturally reductive and has a genuine U-tensor.
    let scaled = catalog::unit_tangent_sphere_space(4, 2.0).unwrap();
    println!(
        "same quotient, fiber scaled by 2: naturally reductive = {}, U max = {:.3}",
        scaled.flags().is_naturally_reductive,
        scaled.u_tensor().max_coefficient()
    );
}
