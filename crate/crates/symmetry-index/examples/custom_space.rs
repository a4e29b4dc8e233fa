//! The space-description file format end to end: write the round 2-sphere
//! SO(3)/SO(2) as a JSON document by hand, parse it, validate it and run the
//! full analysis.

use symmetry_index::report::{analyze, AnalysisOptions};
use symmetry_index::spacefile::SpaceDescription;

fn main() {
    // so(3) on the basis (L23, L31, L12) with cyclic brackets; the isotropy
    // is the circle generated by L12 and the metric is the normal one.
    let text = r#"{
        "name": "sphere-2",
        "algebra": {
            "dim": 3,
            "labels": ["L23", "L31", "L12"],
            "structure": [
                [0, 1, 2, 1.0],
                [1, 2, 0, 1.0],
                [2, 0, 1, 1.0]
            ]
        },
        "isotropy": { "labels": ["L12"] },
        "metric": { "mode": "NORMAL", "form": "identity" },
        "assertions": { "irreducible": true, "non_sphere": false }
    }"#;

    let description: SpaceDescription = text.parse().unwrap();
    let space = description.to_space(1e-8).unwrap();
    println!(
        "parsed '{}': dim M = {}, flags = {:?}",
        description.name,
        space.dim_m(),
        space.flags()
    );

    let report = analyze(
        &description.name,
        &space,
        description.assertions,
        &AnalysisOptions::default(),
    )
    .unwrap();
    print!("{}", report.to_text());
    println!("full JSON report:\n{}", report.to_json());
}
