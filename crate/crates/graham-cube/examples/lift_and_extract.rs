//! The lower-bound transfer pipeline: color [4]^2, lift to an edge coloring
//! of the complete graph on {-1,+1}^3, enumerate monochromatic 2-subcubes,
//! and extract from each a tic-tac-toe line of [4]^2 that is monochromatic
//! under the original coloring.

use graham_cube::constructions::{extract_ttt_space, find_mono_subcubes, lift_coloring};
use graham_cube::cube::Color;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> graham_cube::Result<()> {
    let n = 2usize; // color [4]^n, lift to {-1,+1}^(n+1)
    for seed in 0u64.. {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let c4: Vec<Color> = (0..4usize.pow(n as u32))
            .map(|_| if rng.gen::<bool>() { Color::Red } else { Color::Blue })
            .collect();
        let lifted = lift_coloring(&c4, n)?;
        let subcubes = find_mono_subcubes(&lifted, 2)?;
        if subcubes.is_empty() {
            continue; // not every coloring yields a mono 2-subcube at n = 2
        }
        println!(
            "seed {seed}: coloring of [4]^{n} = {}",
            c4.iter().map(|c| if *c == Color::Red { 'R' } else { 'B' }).collect::<String>()
        );
        println!("lifted edge coloring: {} edges of K_{}", lifted.colors().len(), 1 << (n + 1));
        println!("monochromatic 2-subcubes found: {}", subcubes.len());
        for f in &subcubes {
            let space = extract_ttt_space(f, &c4)?;
            println!("  subcube {:?}", f.entries);
            println!("    -> monochromatic ttt space {:?}", space.entries);
        }
        break;
    }
    Ok(())
}
