//! The Folkman-style case analysis: four directions a, b, c, d with pairwise
//! disjoint supports whose 15 nonempty subset-sums are all Red force a Red
//! planar K4 no matter how the four "branch" differences are colored.
//!
//! Runs all 16 colorings of {a-b, c-d, a-b+c-d, a-b-c+d} and prints which of
//! the five cases fires each time.

use graham_cube::constructions::{folkman_case_analysis, K4Form};
use graham_cube::cube::{dir_diff, dir_sum, Color, Direction};

fn main() -> graham_cube::Result<()> {
    // Supports {0}, {1}, {2}, {3} inside dimension 4: pairwise disjoint.
    let a = Direction::parse("+000")?;
    let b = Direction::parse("0+00")?;
    let c = Direction::parse("00+0")?;
    let d = Direction::parse("000+")?;

    let branch = [
        dir_diff(&a, &b)?,
        dir_diff(&c, &d)?,
        dir_sum(&dir_diff(&a, &b)?, &dir_diff(&c, &d)?)?,
        dir_diff(&dir_diff(&a, &b)?, &dir_diff(&c, &d)?)?,
    ];

    for mask in 0u8..16 {
        let branch = branch.clone();
        let oracle = move |x: &Direction| {
            match branch.iter().position(|bd| bd == x) {
                // Branch directions follow the current 4-bit pattern.
                Some(i) => {
                    if mask >> i & 1 == 1 {
                        Color::Red
                    } else {
                        Color::Blue
                    }
                }
                // Every subset-sum of {a, b, c, d} is Red by hypothesis.
                None => Color::Red,
            }
        };
        let cert = folkman_case_analysis(&a, &b, &c, &d, oracle)?;
        let K4Form::Classes(classes) = &cert.form else {
            unreachable!("folkman certificates are class-form")
        };
        println!(
            "branch colors {mask:04b}: {:?} K4 on {{{}, {}, {}, {}}}",
            cert.color, classes[0], classes[1], classes[2], classes[3]
        );
    }
    Ok(())
}
