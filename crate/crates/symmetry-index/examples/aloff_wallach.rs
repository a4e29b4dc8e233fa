//! Full analysis of the Aloff-Wallach 7-manifold SU(3)/SO(2) with the
//! fiber-scaled metric: index 2, leaf a 2-sphere, not of group type.

use symmetry_index::catalog;
use symmetry_index::report::{analyze, diff_expected, AnalysisOptions};

fn main() {
    let entry = catalog::find("aloff-wallach").unwrap();
    let space = entry.build().unwrap();
    let report = analyze(
        entry.name,
        &space,
        entry.assertions,
        &AnalysisOptions::default(),
    )
    .unwrap();
    print!("{}", report.to_text());

    let diff = diff_expected(&entry.expected, &report);
    if diff.is_empty() {
        println!("expected values: all match");
    } else {
        for line in diff {
            println!("mismatch: {line}");
        }
    }
}
