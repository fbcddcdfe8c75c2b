//! Shows the coordinatewise bijection Phi between crossing edges of the cube
//! {-1,+1}^(n+1) and points of [4]^n, then checks that it carries
//! d-hyperbowties onto d-dimensional tic-tac-toe spaces for small (n, d).

use graham_cube::cube::Vertex;
use graham_cube::params::{big_phi, phi, verify_bijection};

fn main() -> graham_cube::Result<()> {
    println!("phi(x, y) on a single coordinate pair:");
    for x in [-1i8, 1] {
        for y in [-1i8, 1] {
            println!("  phi({x:>2}, {y:>2}) = {}", phi(x, y));
        }
    }

    println!("\nPhi on a crossing edge of {{-1,+1}}^3 (x0 = -1 endpoint first):");
    let u = Vertex::parse("-+-")?;
    let v = Vertex::parse("+--")?;
    println!("  Phi({u}, {v}) = {:?}", big_phi(&u, &v)?);

    println!("\nhyperbowtie <-> tic-tac-toe space counts:");
    for (n, d) in [(1, 1), (2, 1), (2, 2), (3, 1), (3, 2)] {
        let report = verify_bijection(n, d)?;
        println!(
            "  n = {n}, d = {d}: {} hyperbowties, {} ttt spaces, bijective = {}",
            report.hyperbowtie_count, report.ttt_space_count, report.bijective
        );
    }
    Ok(())
}
