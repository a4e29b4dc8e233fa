//! Analyzes every catalog entry and diffs the results against the expected
//! values shipped with the catalog.

use symmetry_index::catalog;
use symmetry_index::report::{analyze, diff_expected, AnalysisOptions};

fn main() {
    println!(
        "{:<15} {:>6} {:>6} {:>12} {:>5} {:>8}  leaf",
        "name", "dim M", "index", "status", "sym", "factors"
    );
    for entry in catalog::named_catalog() {
        let space = match entry.build() {
            Ok(s) => s,
            Err(e) => {
                println!("{:<15} skipped: {e}", entry.name);
                continue;
            }
        };
        let report = analyze(
            entry.name,
            &space,
            entry.assertions,
            &AnalysisOptions::default(),
        )
        .expect("analysis");
        let status = format!("{:?}", report.index.status);
        let factors: Vec<String> = report
            .leaf
            .factors
            .iter()
            .map(|f| format!("g{}{}", f.g_dim, if f.group_type { " (group)" } else { "" }))
            .collect();
        println!(
            "{:<15} {:>6} {:>6} {:>12} {:>5} {:>8}  flat {} + {:?}",
            entry.name,
            report.dim_m,
            report.index.value,
            status,
            report.is_symmetric,
            report.leaf.factors.len(),
            report.leaf.flat_dim,
            factors
        );
        let diff = diff_expected(&entry.expected, &report);
        for line in diff {
            println!("{:<15}   MISMATCH {line}", "");
        }
    }
}
