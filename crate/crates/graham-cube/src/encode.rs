//! SAT encoding of the parallel-class coloring problem: one binary variable
//! per canonical direction (true = Red), and for every planar K4 two clauses
//! saying its four classes are not all equal.

use crate::cube::{
    enumerate_rectangles, k4_vertices, ClassColoring, Color, DirectionIndex, Edge,
    EdgeColorMap, PlanarK4, Vertex,
};
use crate::error::{Error, Result};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

/// A CNF formula over direction-indexed variables. Variable `v` corresponds
/// to the direction of lexicographic rank `v - 1`; assignment true = Red.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CnfFormula {
    pub var_count: usize,
    pub clauses: Vec<Vec<i32>>,
}

impl CnfFormula {
    pub fn validate(&self) -> Result<()> {
        for c in &self.clauses {
            if c.is_empty() {
                return Err(Error::Parse("empty clause".into()));
            }
            for &l in c {
                if l == 0 || l.unsigned_abs() as usize > self.var_count {
                    return Err(Error::Parse(format!("literal {l} out of range")));
                }
            }
        }
        Ok(())
    }

    /// True iff the total assignment satisfies every clause.
    pub fn satisfied_by(&self, model: &[bool]) -> bool {
        debug_assert_eq!(model.len(), self.var_count);
        self.clauses.iter().all(|c| {
            c.iter().any(|&l| {
                let v = model[l.unsigned_abs() as usize - 1];
                if l > 0 {
                    v
                } else {
                    !v
                }
            })
        })
    }
}

/// A monochromatic planar K4 found while checking a class coloring.
#[derive(Clone, PartialEq, Eq, Debug, serde::Serialize)]
pub struct MonoK4Violation {
    pub k4: PlanarK4,
    pub color: Color,
}

/// Builds the constraint instance for dimension `n`: variables are the
/// canonical directions in lexicographic rank order; each distinct planar K4
/// contributes the clause pair (at least one Red, not all Red).
pub fn build_cnf(n: usize) -> Result<CnfFormula> {
    if !(2..=8).contains(&n) {
        return Err(Error::DimensionOutOfRange { n, min: 2, max: 8 });
    }
    let index = DirectionIndex::new(n)?;
    let mut seen: BTreeSet<PlanarK4> = BTreeSet::new();
    let mut clauses = Vec::new();
    for r in enumerate_rectangles(n)? {
        let k4 = PlanarK4::from_rectangle(&r);
        if !seen.insert(k4.clone()) {
            continue; // coincident K4 from a different generating rectangle
        }
        let lits: Vec<i32> = k4
            .classes()
            .iter()
            .map(|d| index.rank(d).expect("canonical direction") as i32 + 1)
            .collect();
        clauses.push(lits.clone());
        clauses.push(lits.iter().map(|&l| -l).collect());
    }
    Ok(CnfFormula { var_count: index.len(), clauses })
}

/// Renders a formula as standard DIMACS CNF. Deterministic: identical bytes
/// for identical formulas.
pub fn emit_dimacs(f: &CnfFormula, comments: &[&str]) -> String {
    let mut out = String::new();
    for c in comments {
        writeln!(out, "c {c}").unwrap();
    }
    writeln!(out, "p cnf {} {}", f.var_count, f.clauses.len()).unwrap();
    for clause in &f.clauses {
        for &l in clause {
            write!(out, "{l} ").unwrap();
        }
        out.push_str("0\n");
    }
    out
}

/// Parses DIMACS CNF text (the inverse of `emit_dimacs`).
pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
    let mut var_count = None;
    let mut declared = 0usize;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("p ") {
            let parts: Vec<&str> = rest.split_whitespace().collect();
            if parts.len() != 3 || parts[0] != "cnf" {
                return Err(Error::Parse(format!("bad problem line: {line}")));
            }
            var_count =
                Some(parts[1].parse::<usize>().map_err(|e| Error::Parse(e.to_string()))?);
            declared = parts[2].parse::<usize>().map_err(|e| Error::Parse(e.to_string()))?;
            continue;
        }
        for tok in line.split_whitespace() {
            let l: i32 = tok.parse().map_err(|_| Error::Parse(format!("bad literal {tok}")))?;
            if l == 0 {
                if current.is_empty() {
                    return Err(Error::Parse("empty clause".into()));
                }
                clauses.push(std::mem::take(&mut current));
            } else {
                current.push(l);
            }
        }
    }
    let var_count = var_count.ok_or_else(|| Error::Parse("missing problem line".into()))?;
    if !current.is_empty() {
        return Err(Error::Parse("unterminated clause".into()));
    }
    if clauses.len() != declared {
        return Err(Error::Parse(format!(
            "declared {declared} clauses, found {}",
            clauses.len()
        )));
    }
    let f = CnfFormula { var_count, clauses };
    f.validate()?;
    Ok(f)
}

/// Decodes a total SAT model into a class coloring (true = Red).
pub fn decode_witness(model: &[bool], n: usize) -> Result<ClassColoring> {
    let index = DirectionIndex::new(n)?;
    if model.len() != index.len() {
        return Err(Error::PartialAssignment(format!(
            "model has {} variables, instance has {}",
            model.len(),
            index.len()
        )));
    }
    let classes = index
        .dirs()
        .iter()
        .enumerate()
        .map(|(i, d)| (d.clone(), if model[i] { Color::Red } else { Color::Blue }))
        .collect();
    ClassColoring::new(n, classes)
}

/// Encodes a class coloring as a SAT model (Red = true).
pub fn encode_witness(c: &ClassColoring) -> Result<Vec<bool>> {
    let index = DirectionIndex::new(c.n())?;
    index
        .dirs()
        .iter()
        .map(|d| {
            c.color(d)
                .map(|col| col == Color::Red)
                .ok_or_else(|| Error::PartialAssignment(format!("class {d} uncolored")))
        })
        .collect()
}

/// Lists every distinct monochromatic planar K4 under a class coloring, by
/// direct K4 enumeration (independent of the CNF path).
pub fn verify_class_coloring(c: &ClassColoring, n: usize) -> Result<Vec<MonoK4Violation>> {
    if c.n() != n {
        return Err(Error::DimensionMismatch { left: c.n(), right: n });
    }
    c.validate()?;
    let mut seen = BTreeSet::new();
    let mut violations = Vec::new();
    for r in enumerate_rectangles(n)? {
        let k4 = PlanarK4::from_rectangle(&r);
        if !seen.insert(k4.clone()) {
            continue;
        }
        let colors: Vec<Color> =
            k4.classes().iter().map(|d| c.color(d).expect("total coloring")).collect();
        if colors.iter().all(|&x| x == colors[0]) {
            violations.push(MonoK4Violation { k4, color: colors[0] });
        }
    }
    Ok(violations)
}

/// Expands a class coloring into the full edge coloring where every concrete
/// edge gets its class color.
pub fn expand_to_edge_coloring(c: &ClassColoring, n: usize) -> Result<EdgeColorMap> {
    if n > 6 {
        return Err(Error::DimensionOutOfRange { n, min: 1, max: 6 });
    }
    if c.n() != n {
        return Err(Error::DimensionMismatch { left: c.n(), right: n });
    }
    let verts = Vertex::enumerate(n)?;
    let mut colors = BTreeMap::new();
    for i in 0..verts.len() {
        for j in i + 1..verts.len() {
            let e = Edge::new(verts[i], verts[j])?;
            let col = c
                .color(&e.class())
                .ok_or_else(|| Error::PartialAssignment(format!("class {} uncolored", e.class())))?;
            colors.insert(e, col);
        }
    }
    Ok(EdgeColorMap::new(n, colors))
}

/// Vertex-level exhaustive check: every concrete planar K4 whose six edges
/// are monochromatic under an edge coloring. Cross-checks the class path.
pub fn mono_k4s_vertex_level(ec: &EdgeColorMap, n: usize) -> Result<Vec<(Vec<Vertex>, Color)>> {
    let mut found = Vec::new();
    for r in enumerate_rectangles(n)? {
        let free = !(r.a().support() | r.b().support()) & ((1u64 << n) - 1);
        let base_fixed = (r.a().support() & !r.a().plus_mask())
            | (r.b().support() & !r.b().plus_mask());
        let mut sub = 0u64;
        loop {
            let x = Vertex::new(n, base_fixed | sub)?;
            let (verts, edges) = k4_vertices(&r, x)?;
            let colors: Vec<Color> = edges
                .iter()
                .map(|(e, _)| ec.color(e).expect("total edge coloring"))
                .collect();
            if colors.iter().all(|&c| c == colors[0]) {
                found.push((verts, colors[0]));
            }
            if sub == free {
                break;
            }
            sub = sub.wrapping_sub(free) & free;
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cube::Direction;
    use crate::cube::DirectionIndex;
    use std::collections::HashSet;

    #[test]
    fn build_cnf_n2() {
        let f = build_cnf(2).unwrap();
        assert_eq!(f.var_count, 4);
        assert_eq!(f.clauses.len(), 2);
        assert_eq!(f.clauses[0].len(), 4);
        assert_eq!(f.clauses[1], f.clauses[0].iter().map(|&l| -l).collect::<Vec<_>>());
    }

    #[test]
    fn build_cnf_n6_variables() {
        let f = build_cnf(6).unwrap();
        assert_eq!(f.var_count, 364);
    }

    #[test]
    fn clause_count_matches_brute_force_oracle() {
        // independent oracle: enumerate all canonical pairs by hand, dedupe
        // K4 class-sets in a HashSet
        for n in 2..=6 {
            let dirs = Direction::enumerate(n).unwrap();
            let mut k4s: HashSet<Vec<Direction>> = HashSet::new();
            for i in 0..dirs.len() {
                for j in i + 1..dirs.len() {
                    if dirs[i].support() & dirs[j].support() != 0 {
                        continue;
                    }
                    let sum: Vec<i8> = dirs[i]
                        .coords()
                        .iter()
                        .zip(dirs[j].coords())
                        .map(|(&a, &b)| a + b)
                        .collect();
                    let diff: Vec<i8> = dirs[i]
                        .coords()
                        .iter()
                        .zip(dirs[j].coords())
                        .map(|(&a, &b)| a - b)
                        .collect();
                    let mut set = vec![
                        dirs[i].clone(),
                        dirs[j].clone(),
                        Direction::canonical(&sum).unwrap(),
                        Direction::canonical(&diff).unwrap(),
                    ];
                    set.sort();
                    k4s.insert(set);
                }
            }
            let f = build_cnf(n).unwrap();
            assert_eq!(f.clauses.len(), 2 * k4s.len(), "n={n}");
        }
    }

    #[test]
    fn clauses_are_complementary_pairs_of_width_4() {
        let f = build_cnf(4).unwrap();
        assert_eq!(f.clauses.len() % 2, 0);
        for pair in f.clauses.chunks(2) {
            assert_eq!(pair[0].len(), 4);
            assert!(pair[0].iter().all(|&l| l > 0));
            assert_eq!(pair[1], pair[0].iter().map(|&l| -l).collect::<Vec<_>>());
        }
    }

    #[test]
    fn dimacs_minimal() {
        let f = CnfFormula { var_count: 1, clauses: vec![vec![1]] };
        assert_eq!(emit_dimacs(&f, &[]), "p cnf 1 1\n1 0\n");
    }

    #[test]
    fn dimacs_header_n2() {
        let text = emit_dimacs(&build_cnf(2).unwrap(), &[]);
        assert!(text.starts_with("p cnf 4 2\n"));
    }

    #[test]
    fn dimacs_roundtrip() {
        for n in 2..=4 {
            let f = build_cnf(n).unwrap();
            let text = emit_dimacs(&f, &["generated instance"]);
            assert_eq!(parse_dimacs(&text).unwrap(), f);
            // byte stability
            assert_eq!(emit_dimacs(&build_cnf(n).unwrap(), &["generated instance"]), text);
        }
    }

    #[test]
    fn decode_witness_all_true() {
        let c = decode_witness(&[true; 4], 2).unwrap();
        for d in Direction::enumerate(2).unwrap() {
            assert_eq!(c.color(&d), Some(Color::Red));
        }
        let c = decode_witness(&[false; 4], 2).unwrap();
        for d in Direction::enumerate(2).unwrap() {
            assert_eq!(c.color(&d), Some(Color::Blue));
        }
        assert!(decode_witness(&[true; 3], 2).is_err());
    }

    #[test]
    fn verify_class_coloring_n2() {
        let dir = |s: &str| Direction::parse(s).unwrap();
        let mut classes = BTreeMap::new();
        classes.insert(dir("+0"), Color::Red);
        classes.insert(dir("0+"), Color::Red);
        classes.insert(dir("++"), Color::Red);
        classes.insert(dir("+-"), Color::Blue);
        let c = ClassColoring::new(2, classes).unwrap();
        assert!(verify_class_coloring(&c, 2).unwrap().is_empty());

        let all_red = ClassColoring::constant(2, Color::Red).unwrap();
        let v = verify_class_coloring(&all_red, 2).unwrap();
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].color, Color::Red);
    }

    #[test]
    fn cnf_and_direct_paths_agree() {
        // exhaustive at n=2 (16 colorings), deterministic pseudorandom at n=3..4
        let index2 = DirectionIndex::new(2).unwrap();
        let f2 = build_cnf(2).unwrap();
        for bits in 0u32..16 {
            let model: Vec<bool> = (0..index2.len()).map(|i| bits >> i & 1 == 1).collect();
            let c = decode_witness(&model, 2).unwrap();
            let sat = f2.satisfied_by(&model);
            let clean = verify_class_coloring(&c, 2).unwrap().is_empty();
            assert_eq!(sat, clean, "bits={bits}");
        }
        for n in 3..=4 {
            let index = DirectionIndex::new(n).unwrap();
            let f = build_cnf(n).unwrap();
            let mut state = 0x9e3779b97f4a7c15u64;
            for _ in 0..50 {
                let model: Vec<bool> = (0..index.len())
                    .map(|_| {
                        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                        state >> 33 & 1 == 1
                    })
                    .collect();
                let c = decode_witness(&model, n).unwrap();
                assert_eq!(
                    f.satisfied_by(&model),
                    verify_class_coloring(&c, n).unwrap().is_empty()
                );
            }
        }
    }

    #[test]
    fn expand_to_edge_coloring_matches_class_check() {
        // all-Red at n=2: 6 edges of the K4 on {±1}^2, all Red
        let all_red = ClassColoring::constant(2, Color::Red).unwrap();
        let ec = expand_to_edge_coloring(&all_red, 2).unwrap();
        assert_eq!(ec.colors().len(), 6);
        assert!(ec.colors().values().all(|&c| c == Color::Red));

        // vertex-level cross-check oracle at n=3
        let f = build_cnf(3).unwrap();
        let mut state = 42u64;
        for _ in 0..30 {
            let model: Vec<bool> = (0..f.var_count)
                .map(|_| {
                    state = state.wrapping_mul(6364136223846793005).wrapping_add(99991);
                    state >> 30 & 1 == 1
                })
                .collect();
            let c = decode_witness(&model, 3).unwrap();
            let ec = expand_to_edge_coloring(&c, 3).unwrap();
            let vertex_mono = mono_k4s_vertex_level(&ec, 3).unwrap();
            let class_mono = verify_class_coloring(&c, 3).unwrap();
            assert_eq!(vertex_mono.is_empty(), class_mono.is_empty());
        }
    }

    #[test]
    fn parallel_edges_share_class_color() {
        let mut state = 7u64;
        for _ in 0..20 {
            let dirs = Direction::enumerate(4).unwrap();
            let classes: BTreeMap<Direction, Color> = dirs
                .into_iter()
                .map(|d| {
                    state = state.wrapping_mul(2862933555777941757).wrapping_add(3037000493);
                    (d, if state >> 40 & 1 == 1 { Color::Red } else { Color::Blue })
                })
                .collect();
            let c = ClassColoring::new(4, classes).unwrap();
            let ec = expand_to_edge_coloring(&c, 4).unwrap();
            for (e, &col) in ec.colors() {
                assert_eq!(Some(col), c.color(&e.class()));
            }
        }
    }
}
