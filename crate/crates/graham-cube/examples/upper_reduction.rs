//! The upper-bound reduction: given a (d+1)-subcube whose crossing ("middle")
//! edges are monochromatic, either exhibit a monochromatic planar K4 directly
//! (rules (2)+(3)) or produce an induced class coloring of dimension d whose
//! monochromatic K4s pull back to concrete Blue K4s (rule (1)).

use std::collections::BTreeMap;

use graham_cube::constructions::{
    check_induced_correspondence, reduce_to_class_coloring, ReductionOutcome, UpperInstance,
};
use graham_cube::cube::{Color, Edge, EdgeColorMap, Vertex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_face(d: usize, rng: &mut ChaCha8Rng) -> graham_cube::Result<EdgeColorMap> {
    let verts = Vertex::enumerate(d)?;
    let mut colors = BTreeMap::new();
    for i in 0..verts.len() {
        for j in i + 1..verts.len() {
            let c = if rng.gen::<bool>() { Color::Red } else { Color::Blue };
            colors.insert(Edge::new(verts[i], verts[j])?, c);
        }
    }
    Ok(EdgeColorMap::new(d, colors))
}

fn main() -> graham_cube::Result<()> {
    let d = 3usize;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..5 {
        let inst = UpperInstance::new(d, random_face(d, &mut rng)?, random_face(d, &mut rng)?, Color::Red)?;
        match reduce_to_class_coloring(&inst)? {
            ReductionOutcome::Direct(cert) => {
                cert.verify_points()?;
                println!(
                    "trial {trial}: direct {:?} K4 certificate, {} edges",
                    cert.color,
                    cert.edges.len()
                );
            }
            ReductionOutcome::Induced(induced) => {
                let checked = check_induced_correspondence(&inst, &induced)?;
                println!(
                    "trial {trial}: induced class coloring on {} classes, {} mono K4s cross-checked",
                    induced.classes().len(),
                    checked
                );
            }
        }
    }
    Ok(())
}
