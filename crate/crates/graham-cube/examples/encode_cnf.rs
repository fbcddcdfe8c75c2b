//! Builds the parallel-class CNF instance for small dimensions and prints the
//! DIMACS text for n = 2 plus size statistics for n = 2..=6.
//!
//! Each canonical direction of {-1,0,+1}^n gets one boolean variable (true =
//! Red); every planar K4 {a, b, a+b, a-b} contributes two clauses forbidding
//! the monochromatic assignments. At n = 6 this is the 364-variable instance.

use graham_cube::encode::{build_cnf, emit_dimacs};

fn main() -> graham_cube::Result<()> {
    let f2 = build_cnf(2)?;
    println!("DIMACS for n = 2:");
    print!("{}", emit_dimacs(&f2, &["dimension 2 parallel-class coloring instance"]));
    println!();

    println!("{:>3} {:>10} {:>10}", "n", "variables", "clauses");
    for n in 2..=6 {
        let f = build_cnf(n)?;
        println!("{:>3} {:>10} {:>10}", n, f.var_count, f.clauses.len());
    }
    Ok(())
}
