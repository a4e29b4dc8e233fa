//! Metric classification, the transvection algebra of the canonical
//! connection, and the ad-invariant form on g that restricts to the metric:
//! solved on the bi-invariant group space and a Stiefel manifold.

use symmetry_index::catalog;
use symmetry_index::kostant::{kostant_form, transvection_algebra};

fn main() {
    for name in ["group-so3-so3", "stiefel-5-2", "sphere-3"] {
        let space = catalog::find(name).unwrap().build().unwrap();
        let flags = space.flags();
        let tr = transvection_algebra(&space);
        println!("{name}:");
        println!(
            "  normal = {}, naturally reductive = {}, transvection algebra dim = {} (of {})",
            flags.is_normal,
            flags.is_naturally_reductive,
            tr.dim(),
            space.dim_g()
        );
        match kostant_form(&space) {
            Ok(k) => {
                println!(
                    "  Q solved: residuals inv {:.1e}, Q(h,m) {:.1e}, Q|m {:.1e}",
                    k.residuals.invariance, k.residuals.h_m_orthogonality, k.residuals.metric_match
                );
                println!(
                    "  signature on h = {:?}, solution space dim = {}",
                    k.signature_on_h, k.solution_space_dim
                );
            }
            Err(e) => println!("  Q not solved: {e}"),
        }
    }

    // The scaled-fiber metric is not naturally reductive, so no such form
    // exists for its decomposition.
    let t1s3 = catalog::find("t1s3").unwrap().build().unwrap();
    println!("t1s3:");
    println!(
        "  naturally reductive = {}, solve: {:?}",
        t1s3.flags().is_naturally_reductive,
        kostant_form(&t1s3).err().map(|e| e.to_string())
    );
}
