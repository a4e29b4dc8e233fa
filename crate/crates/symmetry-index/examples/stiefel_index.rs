//! Index of symmetry of Stiefel manifolds SO(n+k)/SO(n): the computed index
//! matches k(k-1)/2 and the symmetry subspace is the fixed-vector subspace.

use symmetry_index::catalog;
use symmetry_index::homo::Assertions;
use symmetry_index::killing::{EngineOptions, KillingEngine};

fn main() {
    println!(
        "{:>4} {:>4} {:>6} {:>7} {:>9} {:>8}",
        "n", "k", "dim M", "index", "k(k-1)/2", "fix dim"
    );
    for (n, k) in [(2usize, 2usize), (3, 2), (2, 3), (4, 2), (3, 3), (2, 4)] {
        let space = catalog::stiefel_space(n, k).unwrap();
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
        let fix = engine.fixed_subspace();
        let matches = cs.symmetry_subspace.coincides_with(fix, 1e-8);
        println!(
            "{n:>4} {k:>4} {:>6} {:>7} {:>9} {:>8}   symmetry = fixed: {matches}",
            space.dim_m(),
            cs.index,
            k * (k - 1) / 2,
            fix.dim()
        );
    }
    println!();
    println!("Each transvection pairs a left-block generator with the invariant");
    println!("field of the matching fixed vector; neither alone is parallel.");
}
