//! Coloring transfers between the edge world and the tic-tac-toe world, the
//! top/bottom reduction of crossing subcubes, and the Folkman-style case
//! analysis over four disjoint directions.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::cube::{
    dir_diff, dir_sum, disjoint_support, edges_in_class, k4_vertices, ClassColoring, Color,
    Direction, DirectionIndex, Edge, EdgeColorMap, Vertex,
};
use crate::error::{Error, Result};
use crate::params::{
    enumerate_parameter_maps, point_rank, point_to_vertex, Entry, GroupKind,
    Hyperbowtie, ParameterMap, Twist,
};

/// Color of one edge (any vertex pair) of `{-1,+1}^(n+1)` under the coloring
/// lifted from `c4 : [4]^n -> Color` (indexed by `point_rank` base 4).
///
/// Crossing edges go through Phi directly; an edge inside one half is first
/// oriented by its lowest differing coordinate (the `-1` endpoint plays the
/// bottom role), then altered to the crossing edge with `x_0 = -1, y_0 = +1`.
pub fn lift_edge_color(c4: &[Color], u: &Vertex, v: &Vertex) -> Result<Color> {
    if u.n() != v.n() {
        return Err(Error::DimensionMismatch { left: u.n(), right: v.n() });
    }
    if u == v {
        return Err(Error::Parse("edge endpoints must be distinct".into()));
    }
    let n = u.n() - 1;
    if c4.len() != 1usize << (2 * n) {
        return Err(Error::PartialAssignment(format!(
            "coloring has {} entries, expected 4^{}",
            c4.len(),
            n
        )));
    }
    let (x, y) = if u.coord(0) != v.coord(0) {
        if u.coord(0) == -1 {
            (u, v)
        } else {
            (v, u)
        }
    } else {
        let i = (1..u.n()).find(|&i| u.coord(i) != v.coord(i)).expect("distinct endpoints");
        if u.coord(i) == -1 {
            (u, v)
        } else {
            (v, u)
        }
    };
    let point: Vec<u8> = (1..u.n()).map(|i| crate::params::phi(x.coord(i), y.coord(i))).collect();
    Ok(c4[point_rank(&point, 4)])
}

/// Materializes the lifted coloring on every vertex pair of `{-1,+1}^(n+1)`.
pub fn lift_coloring(c4: &[Color], n: usize) -> Result<EdgeColorMap> {
    if n > 10 {
        return Err(Error::DimensionOutOfRange { n, min: 1, max: 10 });
    }
    let verts = Vertex::enumerate(n + 1)?;
    let mut colors = BTreeMap::new();
    for (i, u) in verts.iter().enumerate() {
        for v in &verts[i + 1..] {
            colors.insert(Edge::new(*u, *v)?, lift_edge_color(c4, u, v)?);
        }
    }
    Ok(EdgeColorMap::new(n + 1, colors))
}

/// All d-dimensional subcube maps of `{-1,+1}^ncube` in deterministic order,
/// one representative per distinct point-set image.
fn subcube_maps(ncube: usize, d: usize) -> Result<Vec<(ParameterMap, Vec<Vertex>)>> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for f in enumerate_parameter_maps(2, GroupKind::Flip, d, ncube)? {
        let image = f.materialize()?;
        if !seen.insert(image.clone()) {
            continue;
        }
        let verts = image.iter().map(|p| point_to_vertex(p)).collect::<Result<Vec<_>>>()?;
        out.push((f, verts));
    }
    Ok(out)
}

fn subcube_is_mono(ec: &EdgeColorMap, verts: &[Vertex]) -> Result<Option<Color>> {
    let mut first = None;
    for (i, u) in verts.iter().enumerate() {
        for v in &verts[i + 1..] {
            let e = Edge::new(*u, *v)?;
            let c = ec
                .color(&e)
                .ok_or_else(|| Error::PartialAssignment(format!("edge {e:?} uncolored")))?;
            match first {
                None => first = Some(c),
                Some(f) if f != c => return Ok(None),
                _ => {}
            }
        }
    }
    Ok(first)
}

/// First d-dimensional subcube of `{-1,+1}^n` all of whose `C(2^d, 2)`
/// pairwise edges share one color, in deterministic enumeration order.
pub fn find_mono_subcube(ec: &EdgeColorMap, d: usize) -> Result<Option<ParameterMap>> {
    let ncube = ec.n();
    if ncube > 7 || d > 4 || d == 0 || d > ncube {
        return Err(Error::Infeasible(format!(
            "find_mono_subcube limited to cube dimension <= 7, 1 <= d <= 4, got n={ncube} d={d}"
        )));
    }
    for (f, verts) in subcube_maps(ncube, d)? {
        if subcube_is_mono(ec, &verts)?.is_some() {
            return Ok(Some(f));
        }
    }
    Ok(None)
}

/// All monochromatic d-subcubes (one map per image), for exhaustive checks.
pub fn find_mono_subcubes(ec: &EdgeColorMap, d: usize) -> Result<Vec<ParameterMap>> {
    let ncube = ec.n();
    if ncube > 7 || d > 4 || d == 0 || d > ncube {
        return Err(Error::Infeasible(format!(
            "find_mono_subcubes limited to cube dimension <= 7, 1 <= d <= 4, got n={ncube} d={d}"
        )));
    }
    let mut out = Vec::new();
    for (f, verts) in subcube_maps(ncube, d)? {
        if subcube_is_mono(ec, &verts)?.is_some() {
            out.push(f);
        }
    }
    Ok(out)
}

/// Reparameterizes a subcube map so the parameter controlling coordinate `i`
/// is parameter 0 with identity twist at coordinate `i`.
fn normalize_at(f: &ParameterMap, i: usize) -> Result<ParameterMap> {
    let (j0, tw0) = match f.entries.get(i) {
        Some(&Entry::Var { j, twist }) => (j, twist),
        _ => {
            return Err(Error::InvalidParameterMap(format!(
                "coordinate {i} of the subcube map is constant"
            )))
        }
    };
    let entries = f
        .entries
        .iter()
        .map(|e| match *e {
            Entry::Const(a) => Entry::Const(a),
            Entry::Var { j, twist } => {
                let nj = if j == j0 { 0 } else if j == 0 { j0 } else { j };
                let ntw = if nj == 0 { twist.compose(tw0) } else { twist };
                Entry::Var { j: nj, twist: ntw }
            }
        })
        .collect();
    ParameterMap::new(f.t, f.k, entries)
}

/// Pulls a monochromatic tic-tac-toe d-space of `[4]^n` out of a
/// monochromatic (d+1)-subcube `f` of `{-1,+1}^(n+1)` lifted from `c4`.
///
/// A crossing subcube maps through its hyperbowtie; a subcube contained in
/// one half instead uses its edges along the lowest non-constant coordinate,
/// altered to crossing edges. The result is re-verified against `c4`.
pub fn extract_ttt_space(f: &ParameterMap, c4: &[Color]) -> Result<ParameterMap> {
    f.validate()?;
    if f.t != 2 || f.k == 0 {
        return Err(Error::InvalidParameterMap(
            "expected a t=2 subcube map with at least one parameter".into(),
        ));
    }
    let n = f.n() - 1;
    // precondition: f is monochromatic under the lift
    let verts = f
        .materialize()?
        .iter()
        .map(|p| point_to_vertex(p))
        .collect::<Result<Vec<_>>>()?;
    let mut lift_color = None;
    for (i, u) in verts.iter().enumerate() {
        for v in &verts[i + 1..] {
            let c = lift_edge_color(c4, u, v)?;
            if *lift_color.get_or_insert(c) != c {
                return Err(Error::ContractViolation(
                    "subcube is not monochromatic under the lifted coloring".into(),
                ));
            }
        }
    }
    let crossing = if matches!(f.entries[0], Entry::Var { .. }) {
        // crossing case: the subcube meets both halves
        Hyperbowtie::from_subcube(f)?.source().clone()
    } else {
        // contained case: substitute the lowest non-constant coordinate's
        // parameter for the crossing role
        let i = f
            .entries
            .iter()
            .position(|e| matches!(e, Entry::Var { .. }))
            .ok_or_else(|| Error::InvalidParameterMap("subcube map has no parameter".into()))?;
        let mut altered = normalize_at(f, i)?;
        altered.entries[0] = Entry::Var { j: 0, twist: Twist::Id };
        altered.validate()?;
        altered
    };
    let g = crate::params::hyperbowtie_to_ttt(&crossing)?;
    // the extracted space must be monochromatic under c4 itself
    let mut c4_color = None;
    for p in g.materialize()? {
        let c = c4[point_rank(&p, 4)];
        if *c4_color.get_or_insert(c) != c {
            return Err(Error::ContractViolation(
                "extracted space is not monochromatic under the base coloring".into(),
            ));
        }
    }
    let _ = n;
    Ok(g)
}

/// A monochromatic planar K4, as four parallel classes or four concrete
/// points, with its supporting edges.
#[derive(Clone, Debug, Serialize)]
pub enum K4Form {
    Classes([Direction; 4]),
    Points([Vertex; 4]),
}

#[derive(Clone, Debug, Serialize)]
pub struct MonoK4Certificate {
    pub form: K4Form,
    pub color: Color,
    pub edges: Vec<(Vertex, Vertex, Color)>,
}

/// Checks that four directions are `{a, b, a+b, a-b}` for some rectangle.
pub fn is_planar_class_set(classes: &[Direction; 4]) -> Result<bool> {
    for i in 0..4 {
        for j in 0..4 {
            if i == j {
                continue;
            }
            let (a, b) = (&classes[i], &classes[j]);
            if !disjoint_support(a, b)? {
                continue;
            }
            let s = dir_sum(a, b)?;
            let d = dir_diff(a, b)?;
            let mut rest: Vec<&Direction> =
                (0..4).filter(|&k| k != i && k != j).map(|k| &classes[k]).collect();
            rest.sort();
            let mut want = [&s, &d];
            want.sort();
            if rest == want {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

impl MonoK4Certificate {
    /// Structural check of a point-form certificate: four distinct coplanar
    /// points whose six pairwise edges are listed and all carry the color.
    pub fn verify_points(&self) -> Result<()> {
        let K4Form::Points(points) = &self.form else {
            return Err(Error::ContractViolation("certificate is not in point form".into()));
        };
        let mut listed: Vec<Edge> = Vec::new();
        for (u, v, c) in &self.edges {
            if *c != self.color {
                return Err(Error::ContractViolation(format!(
                    "edge {u}-{v} colored {c}, certificate claims {}",
                    self.color
                )));
            }
            listed.push(Edge::new(*u, *v)?);
        }
        listed.sort();
        listed.dedup();
        let mut pairwise = Vec::new();
        for i in 0..4 {
            for j in i + 1..4 {
                pairwise.push(Edge::new(points[i], points[j])?);
            }
        }
        pairwise.sort();
        if listed != pairwise {
            return Err(Error::ContractViolation(
                "edge list does not match the six pairwise edges".into(),
            ));
        }
        // planar structure: classes come out as a, a, b, b, a+b, a-b
        let mut by_class: BTreeMap<Direction, usize> = BTreeMap::new();
        for e in &pairwise {
            *by_class.entry(e.class()).or_insert(0) += 1;
        }
        if by_class.len() != 4 {
            return Err(Error::ContractViolation(format!(
                "expected 4 distinct edge classes, found {}",
                by_class.len()
            )));
        }
        let classes: Vec<Direction> = by_class.keys().cloned().collect();
        let counts: Vec<usize> = by_class.values().copied().collect();
        let mut sorted_counts = counts.clone();
        sorted_counts.sort_unstable();
        if sorted_counts != [1, 1, 2, 2] {
            return Err(Error::ContractViolation(format!(
                "edge class multiplicities {counts:?}, expected two pairs and two diagonals"
            )));
        }
        if !is_planar_class_set(&[
            classes[0].clone(),
            classes[1].clone(),
            classes[2].clone(),
            classes[3].clone(),
        ])? {
            return Err(Error::ContractViolation(
                "edge classes do not form a planar K4 class set".into(),
            ));
        }
        Ok(())
    }

    /// Checks a class-form certificate against a class-color oracle.
    pub fn verify_classes<F>(&self, oracle: F) -> Result<()>
    where
        F: Fn(&Direction) -> Color,
    {
        let K4Form::Classes(classes) = &self.form else {
            return Err(Error::ContractViolation("certificate is not in class form".into()));
        };
        if !is_planar_class_set(classes)? {
            return Err(Error::ContractViolation(
                "classes do not form a planar K4 class set".into(),
            ));
        }
        for cl in classes {
            if oracle(cl) != self.color {
                return Err(Error::ContractViolation(format!(
                    "class {cl} is not colored {}",
                    self.color
                )));
            }
        }
        Ok(())
    }
}

/// The data of the top/bottom reduction: complete-graph colorings of the two
/// copies of `{-1,+1}^d` and the (monochromatic) color of the crossing edges.
#[derive(Clone, Debug)]
pub struct UpperInstance {
    d: usize,
    top: EdgeColorMap,
    bottom: EdgeColorMap,
    middle: Color,
}

impl UpperInstance {
    pub fn new(d: usize, top: EdgeColorMap, bottom: EdgeColorMap, middle: Color) -> Result<Self> {
        if d == 0 || d > 6 {
            return Err(Error::DimensionOutOfRange { n: d, min: 1, max: 6 });
        }
        for (name, m) in [("top", &top), ("bottom", &bottom)] {
            if m.n() != d {
                return Err(Error::DimensionMismatch { left: m.n(), right: d });
            }
            let want = (1usize << d) * ((1usize << d) - 1) / 2;
            if m.colors().len() != want {
                return Err(Error::PartialAssignment(format!(
                    "{name} coloring has {} edges, expected {want}",
                    m.colors().len()
                )));
            }
        }
        Ok(UpperInstance { d, top, bottom, middle })
    }

    /// Splits a complete-graph coloring of `{-1,+1}^(d+1)` into its top and
    /// bottom faces and its crossing edges; the crossing edges must all share
    /// one color.
    pub fn from_cube_coloring(ec: &EdgeColorMap) -> Result<Self> {
        let d = ec.n() - 1;
        let mut top = BTreeMap::new();
        let mut bottom = BTreeMap::new();
        let mut middle = None;
        for (e, &c) in ec.colors() {
            let (u, v) = (e.u(), e.v());
            if u.coord(0) != v.coord(0) {
                match middle {
                    None => middle = Some(c),
                    Some(m) if m != c => {
                        return Err(Error::ContractViolation(
                            "crossing edges are not monochromatic".into(),
                        ))
                    }
                    _ => {}
                }
                continue;
            }
            let drop0 = |w: &Vertex| Vertex::from_coords(&w.coords()[1..]);
            let edge = Edge::new(drop0(&u)?, drop0(&v)?)?;
            if u.coord(0) == 1 {
                top.insert(edge, c);
            } else {
                bottom.insert(edge, c);
            }
        }
        let middle = middle
            .ok_or_else(|| Error::PartialAssignment("no crossing edges present".into()))?;
        UpperInstance::new(d, EdgeColorMap::new(d, top), EdgeColorMap::new(d, bottom), middle)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn top(&self) -> &EdgeColorMap {
        &self.top
    }

    pub fn bottom(&self) -> &EdgeColorMap {
        &self.bottom
    }

    pub fn middle(&self) -> Color {
        self.middle
    }

    /// Top/bottom colors with the middle renamed to Red.
    fn renamed(&self, e: &Edge, top: bool) -> Result<Color> {
        let m = if top { &self.top } else { &self.bottom };
        let c = m
            .color(e)
            .ok_or_else(|| Error::PartialAssignment(format!("edge {e:?} uncolored")))?;
        Ok(if self.middle == Color::Blue { c.flip() } else { c })
    }
}

/// Outcome of the reduction: a concrete monochromatic K4 found on the way, or
/// a class coloring of `{-1,+1}^d` induced by the top/bottom rules.
#[derive(Clone, Debug)]
pub enum ReductionOutcome {
    Direct(MonoK4Certificate),
    Induced(ClassColoring),
}

/// Endpoints of `e` ordered so the first one agrees with `-a` on the support
/// of its class `a`.
fn oriented_by_class(e: &Edge, a: &Direction) -> (Vertex, Vertex) {
    let supp = a.support();
    let minus_side = supp & !a.plus_mask();
    if e.u().bits() & supp == minus_side {
        (e.u(), e.v())
    } else {
        (e.v(), e.u())
    }
}

fn extend(v: &Vertex, c0: i8) -> Result<Vertex> {
    let mut coords = Vec::with_capacity(v.n() + 1);
    coords.push(c0);
    coords.extend(v.coords());
    Vertex::from_coords(&coords)
}

/// Applies the three reduction rules, class by class, to a crossing
/// (d+1)-subcube with monochromatic middle:
///
/// 1. all top edges of a class Blue (after renaming the middle to Red) → the
///    class is colored Blue;
/// 2. otherwise, all bottom edges Blue → Red;
/// 3. otherwise a Red top edge and a Red bottom edge of the same class,
///    together with the four crossing edges between their endpoints, form a
///    concrete monochromatic K4, returned directly (in true colors).
pub fn reduce_to_class_coloring(inst: &UpperInstance) -> Result<ReductionOutcome> {
    let d = inst.d;
    let mut classes = BTreeMap::new();
    for a in DirectionIndex::new(d)?.dirs() {
        let edges = edges_in_class(a, d)?;
        let top_all_blue = edges
            .iter()
            .map(|e| inst.renamed(e, true))
            .collect::<Result<Vec<_>>>()?
            .iter()
            .all(|&c| c == Color::Blue);
        if top_all_blue {
            classes.insert(a.clone(), Color::Blue);
            continue;
        }
        let bottom_all_blue = edges
            .iter()
            .map(|e| inst.renamed(e, false))
            .collect::<Result<Vec<_>>>()?
            .iter()
            .all(|&c| c == Color::Blue);
        if bottom_all_blue {
            classes.insert(a.clone(), Color::Red);
            continue;
        }
        // rule (3): first red top edge, first red bottom edge
        let red_top = edges
            .iter()
            .find(|e| matches!(inst.renamed(e, true), Ok(Color::Red)))
            .expect("some top edge is red");
        let red_bottom = edges
            .iter()
            .find(|e| matches!(inst.renamed(e, false), Ok(Color::Red)))
            .expect("some bottom edge is red");
        let (bx, by) = oriented_by_class(red_bottom, a);
        let (tx, ty) = oriented_by_class(red_top, a);
        let points = [extend(&bx, -1)?, extend(&by, -1)?, extend(&tx, 1)?, extend(&ty, 1)?];
        let mut edges_out = Vec::with_capacity(6);
        for i in 0..4 {
            for j in i + 1..4 {
                edges_out.push((points[i], points[j], inst.middle));
            }
        }
        let cert = MonoK4Certificate {
            form: K4Form::Points(points),
            color: inst.middle,
            edges: edges_out,
        };
        cert.verify_points()?;
        return Ok(ReductionOutcome::Direct(cert));
    }
    Ok(ReductionOutcome::Induced(ClassColoring::new(d, classes)?))
}

/// Checks the transfer behind the reduction: every monochromatic planar K4 of
/// the induced class coloring corresponds to a concrete monochromatic Blue K4
/// (after renaming) on the top (if Blue) or bottom (if Red) face. Returns the
/// number of concrete K4s checked.
pub fn check_induced_correspondence(
    inst: &UpperInstance,
    induced: &ClassColoring,
) -> Result<usize> {
    let d = inst.d;
    let mut checked = 0usize;
    for r in crate::cube::enumerate_rectangles(d)? {
        let k4 = crate::cube::PlanarK4::from_rectangle(&r);
        let colors: Vec<Color> = k4
            .classes()
            .iter()
            .map(|cl| {
                induced
                    .color(cl)
                    .ok_or_else(|| Error::PartialAssignment(format!("class {cl} uncolored")))
            })
            .collect::<Result<_>>()?;
        let Some(&col) = colors.first().filter(|_| colors.windows(2).all(|w| w[0] == w[1]))
        else {
            continue;
        };
        let on_top = col == Color::Blue;
        for x in Vertex::enumerate(d)? {
            let Ok((_, edges)) = k4_vertices(&r, x) else { continue };
            for (e, _) in &edges {
                if inst.renamed(e, on_top)? != Color::Blue {
                    return Err(Error::ContractViolation(format!(
                        "induced mono K4 {:?} does not map to a blue concrete K4",
                        k4.classes()
                    )));
                }
            }
            checked += 1;
        }
    }
    Ok(checked)
}

fn require_red<F>(oracle: &F, dir: &Direction, what: &str) -> Result<()>
where
    F: Fn(&Direction) -> Color,
{
    if oracle(dir) != Color::Red {
        return Err(Error::ContractViolation(format!("{what} {dir} must be red")));
    }
    Ok(())
}

/// The five-way case analysis over four directions with pairwise disjoint
/// supports, all of whose 15 nonempty subset-sums are red: the colors of
/// `a-b`, `c-d`, `a-b+c-d` and `a-b-c+d` decide which of five candidate
/// planar K4s is monochromatic.
pub fn folkman_case_analysis<F>(
    a: &Direction,
    b: &Direction,
    c: &Direction,
    d: &Direction,
    oracle: F,
) -> Result<MonoK4Certificate>
where
    F: Fn(&Direction) -> Color,
{
    let dirs = [a, b, c, d];
    for i in 0..4 {
        for j in i + 1..4 {
            if !disjoint_support(dirs[i], dirs[j])? {
                return Err(Error::OverlappingSupport);
            }
        }
    }
    // precondition: all 15 nonempty subset-sums are red
    for mask in 1u32..16 {
        let mut sum: Option<Direction> = None;
        for (i, dir) in dirs.iter().enumerate() {
            if mask >> i & 1 == 1 {
                sum = Some(match sum {
                    None => (*dir).clone(),
                    Some(s) => dir_sum(&s, dir)?,
                });
            }
        }
        require_red(&oracle, &sum.expect("nonempty mask"), "subset-sum")?;
    }
    let ab = dir_diff(a, b)?; // a - b
    let cd = dir_diff(c, d)?; // c - d
    let abcd_plus = dir_sum(&ab, &cd)?; // a - b + c - d
    let abcd_minus = dir_diff(&ab, &cd)?; // a - b - c + d
    let candidate = |x: &Direction, y: &Direction| -> Result<[Direction; 4]> {
        Ok([x.clone(), y.clone(), dir_sum(x, y)?, dir_diff(x, y)?])
    };
    let (classes, color) = if oracle(&ab) == Color::Red {
        (candidate(a, b)?, Color::Red)
    } else if oracle(&cd) == Color::Red {
        (candidate(c, d)?, Color::Red)
    } else if oracle(&abcd_plus) == Color::Red {
        (candidate(&dir_sum(a, c)?, &dir_sum(b, d)?)?, Color::Red)
    } else if oracle(&abcd_minus) == Color::Red {
        (candidate(&dir_sum(a, d)?, &dir_sum(b, c)?)?, Color::Red)
    } else {
        // a-b, c-d, a-b+c-d and a-b-c+d are all blue and themselves form a
        // planar K4 on the rectangle (a-b, c-d)
        (candidate(&ab, &cd)?, Color::Blue)
    };
    let cert = MonoK4Certificate {
        form: K4Form::Classes(classes),
        color,
        edges: Vec::new(),
    };
    cert.verify_classes(&oracle)?;
    Ok(cert)
}

/// Searches `{0,1}^n` directions for `k` pairwise-disjoint directions whose
/// nonempty subset-sums have colors depending only on the largest index, in
/// deterministic depth-first order.
pub fn find_folkman_directions(cl: &ClassColoring, k: usize) -> Result<Option<Vec<Direction>>> {
    let n = cl.n();
    if n > 12 || k > 4 {
        return Err(Error::Infeasible(format!(
            "find_folkman_directions limited to n <= 12, k <= 4, got n={n} k={k}"
        )));
    }
    if k == 0 {
        return Ok(Some(Vec::new()));
    }
    let zero_one: Vec<Direction> = Direction::enumerate(n)?
        .into_iter()
        .filter(|d| d.coords().iter().all(|&c| c >= 0))
        .collect();
    // all subset-sums of the chosen prefix, including the empty sum
    fn search(
        cl: &ClassColoring,
        pool: &[Direction],
        start: usize,
        k: usize,
        chosen: &mut Vec<Direction>,
        sums: &mut Vec<Option<Direction>>,
    ) -> Result<Option<Vec<Direction>>> {
        if chosen.len() == k {
            return Ok(Some(chosen.clone()));
        }
        'next: for i in start..pool.len() {
            let cand = &pool[i];
            for prev in chosen.iter() {
                if !disjoint_support(prev, cand)? {
                    continue 'next;
                }
            }
            // every sum with the new direction as maximum must match its color
            let want = cl
                .color(cand)
                .ok_or_else(|| Error::PartialAssignment(format!("class {cand} uncolored")))?;
            let mut new_sums = Vec::with_capacity(sums.len());
            for s in sums.iter() {
                let total = match s {
                    None => cand.clone(),
                    Some(s) => dir_sum(s, cand)?,
                };
                let got = cl
                    .color(&total)
                    .ok_or_else(|| Error::PartialAssignment(format!("class {total} uncolored")))?;
                if got != want {
                    continue 'next;
                }
                new_sums.push(Some(total));
            }
            chosen.push(cand.clone());
            let old_len = sums.len();
            sums.extend(new_sums);
            if let Some(hit) = search(cl, pool, i + 1, k, chosen, sums)? {
                return Ok(Some(hit));
            }
            sums.truncate(old_len);
            chosen.pop();
        }
        Ok(None)
    }
    let mut chosen = Vec::new();
    let mut sums: Vec<Option<Direction>> = vec![None];
    search(cl, &zero_one, 0, k, &mut chosen, &mut sums)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn v(s: &str) -> Vertex {
        Vertex::parse(s).unwrap()
    }

    fn dir(s: &str) -> Direction {
        Direction::parse(s).unwrap()
    }

    #[test]
    fn lift_examples_n1() {
        // point [1]:R [2]:R [3]:B [4]:B
        let c4 = [Color::Red, Color::Red, Color::Blue, Color::Blue];
        assert_eq!(lift_edge_color(&c4, &v("--"), &v("++")).unwrap(), Color::Red);
        // within the +1 half: altered to the crossing edge (-1,-1)->(+1,+1)
        assert_eq!(lift_edge_color(&c4, &v("+-"), &v("++")).unwrap(), Color::Red);
        assert_eq!(lift_edge_color(&c4, &v("-+"), &v("++")).unwrap(), Color::Blue);
    }

    #[test]
    fn lift_constant_red() {
        let c4 = vec![Color::Red; 16];
        let ec = lift_coloring(&c4, 2).unwrap();
        assert_eq!(ec.colors().len(), 8 * 7 / 2);
        assert!(ec.colors().values().all(|&c| c == Color::Red));
    }

    #[test]
    fn lift_orientation_independent() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let c4: Vec<Color> =
            (0..16).map(|_| if rng.gen::<bool>() { Color::Red } else { Color::Blue }).collect();
        let verts = Vertex::enumerate(3).unwrap();
        for u in &verts {
            for w in &verts {
                if u == w {
                    continue;
                }
                assert_eq!(
                    lift_edge_color(&c4, u, w).unwrap(),
                    lift_edge_color(&c4, w, u).unwrap()
                );
            }
        }
    }

    #[test]
    fn mono_subcube_trivial() {
        let c4 = vec![Color::Red; 4];
        let ec = lift_coloring(&c4, 1).unwrap();
        // constant coloring of the square: the whole square is the first hit
        let f = find_mono_subcube(&ec, 2).unwrap().unwrap();
        assert_eq!(f.materialize().unwrap().len(), 4);
    }

    #[test]
    fn mono_subcube_single_red_edge() {
        // color one pair red, the other five blue, d=1 hits a blue edge
        let verts = Vertex::enumerate(2).unwrap();
        let mut colors = BTreeMap::new();
        for (i, u) in verts.iter().enumerate() {
            for w in &verts[i + 1..] {
                colors.insert(Edge::new(*u, *w).unwrap(), Color::Blue);
            }
        }
        let red = Edge::new(v("--"), v("++")).unwrap();
        colors.insert(red, Color::Red);
        let ec = EdgeColorMap::new(2, colors);
        let f = find_mono_subcube(&ec, 1).unwrap().unwrap();
        let pts: Vec<Vertex> = f
            .materialize()
            .unwrap()
            .iter()
            .map(|p| point_to_vertex(p).unwrap())
            .collect();
        let found = Edge::new(pts[0], pts[1]).unwrap();
        assert_ne!(found, red);
        assert_eq!(ec.color(&found), Some(Color::Blue));
    }

    #[test]
    fn extract_crossing_trivial() {
        let c4 = vec![Color::Red; 4];
        let ec = lift_coloring(&c4, 1).unwrap();
        let f = find_mono_subcube(&ec, 2).unwrap().unwrap();
        let g = extract_ttt_space(&f, &c4).unwrap();
        assert_eq!(g.t, 4);
        assert_eq!(g.k, 1);
        assert_eq!(g.materialize().unwrap().len(), 4);
    }

    #[test]
    fn extract_rejects_non_mono() {
        let mut c4 = vec![Color::Red; 4];
        c4[0] = Color::Blue;
        // the whole square is not monochromatic under this lift
        let f = ParameterMap::new(
            2,
            2,
            vec![
                Entry::Var { j: 0, twist: Twist::Id },
                Entry::Var { j: 1, twist: Twist::Id },
            ],
        )
        .unwrap();
        assert!(matches!(extract_ttt_space(&f, &c4), Err(Error::ContractViolation(_))));
    }

    #[test]
    fn extract_contained_case() {
        // the top face x_0 = +1 of {-1,+1}^3 is a 2-subcube contained in one
        // half; search for a nonconstant base coloring that makes it
        // monochromatic under the lift and extract from it
        let face = ParameterMap::new(
            2,
            2,
            vec![
                Entry::Const(2),
                Entry::Var { j: 0, twist: Twist::Id },
                Entry::Var { j: 1, twist: Twist::Id },
            ],
        )
        .unwrap();
        let mut found_contained = false;
        for bits in 1u32..65535 {
            let c4: Vec<Color> = (0..16)
                .map(|r| if bits >> r & 1 == 1 { Color::Red } else { Color::Blue })
                .collect();
            if extract_ttt_space(&face, &c4).is_ok() {
                found_contained = true;
                let g = extract_ttt_space(&face, &c4).unwrap();
                // the extracted line is monochromatic under c4
                let colors: Vec<Color> =
                    g.materialize().unwrap().iter().map(|p| c4[point_rank(p, 4)]).collect();
                assert!(colors.windows(2).all(|w| w[0] == w[1]));
                break;
            }
        }
        assert!(found_contained, "no contained monochromatic subcube arose");
    }

    #[test]
    fn lower_theorem_end_to_end_n1() {
        // exhaustive over all colorings of [4]^1: every monochromatic
        // 2-subcube of the lift extracts to a verified line of [4]^1
        for bits in 0u32..16 {
            let c4: Vec<Color> = (0..4)
                .map(|r| if bits >> r & 1 == 1 { Color::Red } else { Color::Blue })
                .collect();
            let ec = lift_coloring(&c4, 1).unwrap();
            for f in find_mono_subcubes(&ec, 2).unwrap() {
                extract_ttt_space(&f, &c4).unwrap();
            }
        }
    }

    #[test]
    fn lower_theorem_random_n2() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..200 {
            let c4: Vec<Color> = (0..16)
                .map(|_| if rng.gen::<bool>() { Color::Red } else { Color::Blue })
                .collect();
            let ec = lift_coloring(&c4, 2).unwrap();
            for f in find_mono_subcubes(&ec, 2).unwrap() {
                extract_ttt_space(&f, &c4).unwrap();
            }
        }
    }

    fn complete_coloring(d: usize, mut pick: impl FnMut(&Edge) -> Color) -> EdgeColorMap {
        let verts = Vertex::enumerate(d).unwrap();
        let mut colors = BTreeMap::new();
        for (i, u) in verts.iter().enumerate() {
            for w in &verts[i + 1..] {
                let e = Edge::new(*u, *w).unwrap();
                colors.insert(e, pick(&e));
            }
        }
        EdgeColorMap::new(d, colors)
    }

    #[test]
    fn reduction_all_blue() {
        let top = complete_coloring(2, |_| Color::Blue);
        let bottom = complete_coloring(2, |_| Color::Blue);
        let inst = UpperInstance::new(2, top, bottom, Color::Red).unwrap();
        match reduce_to_class_coloring(&inst).unwrap() {
            ReductionOutcome::Induced(cl) => {
                assert!(cl.classes().values().all(|&c| c == Color::Blue));
            }
            ReductionOutcome::Direct(_) => panic!("expected induced coloring"),
        }
    }

    #[test]
    fn reduction_direct_certificate() {
        // make every top and bottom edge red: rule (3) fires immediately
        let top = complete_coloring(2, |_| Color::Red);
        let bottom = complete_coloring(2, |_| Color::Red);
        let inst = UpperInstance::new(2, top, bottom, Color::Red).unwrap();
        match reduce_to_class_coloring(&inst).unwrap() {
            ReductionOutcome::Direct(cert) => {
                assert_eq!(cert.color, Color::Red);
                cert.verify_points().unwrap();
            }
            ReductionOutcome::Induced(_) => panic!("expected direct certificate"),
        }
    }

    #[test]
    fn reduction_renames_blue_middle() {
        // blue middle: "red" internally means blue; an all-blue top/bottom is
        // internally all-red, so rule (3) fires with true color blue
        let top = complete_coloring(2, |_| Color::Blue);
        let bottom = complete_coloring(2, |_| Color::Blue);
        let inst = UpperInstance::new(2, top, bottom, Color::Blue).unwrap();
        match reduce_to_class_coloring(&inst).unwrap() {
            ReductionOutcome::Direct(cert) => {
                assert_eq!(cert.color, Color::Blue);
                cert.verify_points().unwrap();
            }
            ReductionOutcome::Induced(_) => panic!("expected direct certificate"),
        }
    }

    #[test]
    fn reduction_correspondence_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let d = if rng.gen::<bool>() { 2 } else { 3 };
            let top =
                complete_coloring(d, |_| if rng.gen::<bool>() { Color::Red } else { Color::Blue });
            let bottom =
                complete_coloring(d, |_| if rng.gen::<bool>() { Color::Red } else { Color::Blue });
            let middle = if rng.gen::<bool>() { Color::Red } else { Color::Blue };
            let inst = UpperInstance::new(d, top, bottom, middle).unwrap();
            match reduce_to_class_coloring(&inst).unwrap() {
                ReductionOutcome::Direct(cert) => cert.verify_points().unwrap(),
                ReductionOutcome::Induced(cl) => {
                    check_induced_correspondence(&inst, &cl).unwrap();
                }
            }
        }
    }

    #[test]
    fn upper_instance_from_cube_coloring() {
        let c4 = vec![Color::Red; 16];
        let ec = lift_coloring(&c4, 2).unwrap();
        let inst = UpperInstance::from_cube_coloring(&ec).unwrap();
        assert_eq!(inst.d(), 2);
        assert_eq!(inst.middle(), Color::Red);
        assert_eq!(inst.top().colors().len(), 6);
        // non-monochromatic middle is rejected
        let mut colors = ec.colors().clone();
        let e = Edge::new(v("---"), v("+++")).unwrap();
        colors.insert(e, Color::Blue);
        let bad = EdgeColorMap::new(3, colors);
        assert!(UpperInstance::from_cube_coloring(&bad).is_err());
    }

    #[test]
    fn folkman_all_red() {
        let (a, b, c, d) = (dir("+000"), dir("0+00"), dir("00+0"), dir("000+"));
        let cert = folkman_case_analysis(&a, &b, &c, &d, |_| Color::Red).unwrap();
        let K4Form::Classes(classes) = &cert.form else { panic!("class form expected") };
        assert_eq!(cert.color, Color::Red);
        assert_eq!(classes[0], a);
        assert_eq!(classes[1], b);
    }

    #[test]
    fn folkman_exhaustive_sixteen() {
        let (a, b, c, d) = (dir("+000"), dir("0+00"), dir("00+0"), dir("000+"));
        let branch = [
            dir_diff(&a, &b).unwrap(),
            dir_diff(&c, &d).unwrap(),
            dir_sum(&dir_diff(&a, &b).unwrap(), &dir_diff(&c, &d).unwrap()).unwrap(),
            dir_diff(&dir_diff(&a, &b).unwrap(), &dir_diff(&c, &d).unwrap()).unwrap(),
        ];
        for mask in 0u32..16 {
            let branch = branch.clone();
            let oracle = move |x: &Direction| {
                match branch.iter().position(|y| y == x) {
                    Some(i) if mask >> i & 1 == 1 => Color::Blue,
                    _ => Color::Red,
                }
            };
            let cert = folkman_case_analysis(&a, &b, &c, &d, oracle).unwrap();
            if mask == 0b1111 {
                assert_eq!(cert.color, Color::Blue);
            }
        }
    }

    #[test]
    fn folkman_rejects_bad_precondition() {
        let (a, b, c, d) = (dir("+000"), dir("0+00"), dir("00+0"), dir("000+"));
        let sum_all = dir("++++");
        let oracle =
            move |x: &Direction| if *x == sum_all { Color::Blue } else { Color::Red };
        assert!(folkman_case_analysis(&a, &b, &c, &d, oracle).is_err());
        // overlapping supports
        assert!(folkman_case_analysis(&a, &a, &c, &d, |_| Color::Red).is_err());
    }

    #[test]
    fn folkman_branch_cases() {
        let (a, b, c, d) = (dir("+000"), dir("0+00"), dir("00+0"), dir("000+"));
        let ab = dir_diff(&a, &b).unwrap();
        // a-b blue, c-d red: second branch
        let oracle = {
            let ab = ab.clone();
            move |x: &Direction| if *x == ab { Color::Blue } else { Color::Red }
        };
        let cert = folkman_case_analysis(&a, &b, &c, &d, oracle).unwrap();
        let K4Form::Classes(classes) = &cert.form else { panic!() };
        assert_eq!(classes[0], c);
        assert_eq!(classes[1], d);
        assert_eq!(cert.color, Color::Red);
    }

    #[test]
    fn folkman_directions_trivial() {
        let cl = ClassColoring::constant(2, Color::Red).unwrap();
        let hit = find_folkman_directions(&cl, 2).unwrap().unwrap();
        assert_eq!(hit.len(), 2);
        assert!(disjoint_support(&hit[0], &hit[1]).unwrap());
        // k=1: the very first {0,1} direction works for any coloring
        let hit1 = find_folkman_directions(&cl, 1).unwrap().unwrap();
        assert_eq!(hit1.len(), 1);
    }

    #[test]
    fn folkman_directions_vs_bruteforce() {
        // crafted colorings at n=4, k=2, compared against a direct
        // quadruple-loop oracle over ordered pairs
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let dirs = Direction::enumerate(4).unwrap();
        for _ in 0..20 {
            let mut classes = BTreeMap::new();
            for d in &dirs {
                let c = if rng.gen::<bool>() { Color::Red } else { Color::Blue };
                classes.insert(d.clone(), c);
            }
            let cl = ClassColoring::new(4, classes).unwrap();
            let fast = find_folkman_directions(&cl, 2).unwrap();
            // brute force in the same enumeration order
            let zero_one: Vec<&Direction> =
                dirs.iter().filter(|d| d.coords().iter().all(|&c| c >= 0)).collect();
            let mut slow = None;
            'outer: for (i, x) in zero_one.iter().enumerate() {
                for y in &zero_one[i + 1..] {
                    if !disjoint_support(x, y).unwrap() {
                        continue;
                    }
                    let s = dir_sum(x, y).unwrap();
                    if cl.color(&s) == cl.color(y) {
                        slow = Some(vec![(*x).clone(), (*y).clone()]);
                        break 'outer;
                    }
                }
            }
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn planar_class_set_check() {
        let good = [dir("+00"), dir("0+0"), dir("++0"), dir("+-0")];
        assert!(is_planar_class_set(&good).unwrap());
        let bad = [dir("+00"), dir("0+0"), dir("00+"), dir("+++")];
        assert!(!is_planar_class_set(&bad).unwrap());
    }
}
