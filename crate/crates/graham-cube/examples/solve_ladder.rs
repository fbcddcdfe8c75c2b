//! Solves the parallel-class instance for n = 2..=5 with the internal CDCL
//! solver, decodes each model into a class coloring, and re-verifies it
//! against the independent K4 checker.
//!
//! All four instances are satisfiable; the n = 6 instance is unsatisfiable
//! but takes minutes, so it is left to `graham-cube solve --n 6` and the
//! acceptance suite.

use graham_cube::encode::{build_cnf, decode_witness, verify_class_coloring};
use graham_cube::solver::{solve, SolverConfig, Status};

fn main() -> graham_cube::Result<()> {
    let config = SolverConfig::default();
    println!("solver config: {}", config.describe());
    for n in 2..=5 {
        let f = build_cnf(n)?;
        let res = solve(&f, &config)?;
        match res.status {
            Status::Sat => {
                let model = res.model.expect("SAT result carries a model");
                let coloring = decode_witness(&model, n)?;
                let violations = verify_class_coloring(&coloring, n)?;
                println!(
                    "n = {n}: SAT  ({} vars, {} clauses, {} conflicts, {} mono K4s in witness)",
                    f.var_count,
                    f.clauses.len(),
                    res.stats.conflicts,
                    violations.len()
                );
                assert!(violations.is_empty(), "witness must be violation-free");
            }
            Status::Unsat => println!("n = {n}: UNSAT"),
        }
    }
    Ok(())
}
