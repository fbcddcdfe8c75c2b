//! Exact 2x2-square census over seeded random length-2 edge colorings,
//! the dimension threshold where the counting argument closes, and the
//! parity structure that rules out the boundary case.

use graham_cube::squares::{
    census, lemma_bounds, margin, random_length2_coloring, square_threshold,
    verify_parity_structure,
};

fn main() -> graham_cube::Result<()> {
    println!("{}", graham_cube::squares::CensusReport::csv_header());
    for n in 5..=8 {
        let ec = random_length2_coloring(n, 1000 + n as u64)?;
        let report = census(&ec, n)?;
        println!("{}", report.csv_row());
    }

    let (threshold, m) = square_threshold();
    println!("\nthreshold dimension: {threshold} (margin {m} > 0)");
    println!("margin at {}: {} (not yet positive)", threshold - 1, margin(threshold - 1)?);
    let (lb_adj, lb_opp, ub_odd) = lemma_bounds(threshold)?;
    println!("lemma bounds at n = {threshold}: adj >= {lb_adj}, opp >= {lb_opp}, odd <= {ub_odd}");

    // The parity structure lives on 10 fixed vertices and is the same in
    // every dimension >= 5, so a small n suffices to exhibit it.
    let parity = verify_parity_structure(8)?;
    println!(
        "\nparity structure at n = {}: {} squares, {} length-2 edges, every edge in {} squares, impossibility = {}",
        parity.n, parity.squares, parity.edges, parity.max_multiplicity, parity.parity_impossible
    );
    Ok(())
}
