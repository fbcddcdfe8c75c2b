//! Hypercube vertices, directions (parallel edge classes), rectangles and
//! planar K4s, with exhaustive enumerators.
//!
//! A vertex of the cube lives in `{-1,+1}^n`; a direction is a canonical sign
//! vector in `{-1,0,+1}^n` naming the class of all parallel edges that flip
//! exactly its support coordinates in the indicated signs.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;

/// Largest dimension we represent; vertices fit a single machine word.
pub const MAX_DIM: usize = 63;

/// A point of `{-1,+1}^n`. Bit `i` set means coordinate `i` is `+1`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex {
    n: u8,
    bits: u64,
}

impl Vertex {
    pub fn new(n: usize, bits: u64) -> Result<Self> {
        if n < 1 || n > MAX_DIM {
            return Err(Error::DimensionOutOfRange { n, min: 1, max: MAX_DIM });
        }
        if n < 64 && bits >> n != 0 {
            return Err(Error::Parse(format!("bits {bits:#x} exceed dimension {n}")));
        }
        Ok(Vertex { n: n as u8, bits })
    }

    pub fn from_coords(coords: &[i8]) -> Result<Self> {
        let mut bits = 0u64;
        for (i, &c) in coords.iter().enumerate() {
            match c {
                1 => bits |= 1 << i,
                -1 => {}
                _ => return Err(Error::Parse(format!("vertex coordinate {c} not in {{-1,+1}}"))),
            }
        }
        Vertex::new(coords.len(), bits)
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn coord(&self, i: usize) -> i8 {
        debug_assert!(i < self.n());
        if self.bits >> i & 1 == 1 {
            1
        } else {
            -1
        }
    }

    pub fn coords(&self) -> Vec<i8> {
        (0..self.n()).map(|i| self.coord(i)).collect()
    }

    /// Flips the coordinates in `mask`.
    pub fn flip_mask(&self, mask: u64) -> Vertex {
        Vertex { n: self.n, bits: self.bits ^ mask }
    }

    /// All `2^n` vertices in increasing bit order.
    pub fn enumerate(n: usize) -> Result<Vec<Vertex>> {
        if n < 1 || n > 24 {
            return Err(Error::DimensionOutOfRange { n, min: 1, max: 24 });
        }
        Ok((0..1u64 << n).map(|bits| Vertex { n: n as u8, bits }).collect())
    }

    pub fn parse(s: &str) -> Result<Self> {
        let coords: Vec<i8> = s
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                _ => Err(Error::Parse(format!("bad vertex char {c:?}"))),
            })
            .collect::<Result<_>>()?;
        Vertex::from_coords(&coords)
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n() {
            write!(f, "{}", if self.coord(i) == 1 { '+' } else { '-' })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Vertex({self})")
    }
}

impl Serialize for Vertex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Vertex {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Vertex::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// A canonical parallel edge class: a nonzero vector in `{-1,0,+1}^n` whose
/// first nonzero coordinate is `+1`. `a` and `-a` name the same class.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Direction {
    coords: Vec<i8>,
}

impl Direction {
    /// Canonicalizes a raw sign vector: returns `v` if its first nonzero
    /// coordinate is `+1`, else `-v`. Rejects the all-zero vector.
    pub fn canonical(raw: &[i8]) -> Result<Self> {
        if raw.len() < 1 || raw.len() > MAX_DIM {
            return Err(Error::DimensionOutOfRange { n: raw.len(), min: 1, max: MAX_DIM });
        }
        for &c in raw {
            if !(-1..=1).contains(&c) {
                return Err(Error::Parse(format!("direction coordinate {c} not in {{-1,0,+1}}")));
            }
        }
        let first = raw.iter().find(|&&c| c != 0).ok_or(Error::ZeroVector)?;
        let coords = if *first == 1 {
            raw.to_vec()
        } else {
            raw.iter().map(|&c| -c).collect()
        };
        Ok(Direction { coords })
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[i8] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> i8 {
        self.coords[i]
    }

    /// Bitmask of nonzero coordinates.
    pub fn support(&self) -> u64 {
        let mut m = 0u64;
        for (i, &c) in self.coords.iter().enumerate() {
            if c != 0 {
                m |= 1 << i;
            }
        }
        m
    }

    /// Bitmask of `+1` coordinates (after canonicalization).
    pub fn plus_mask(&self) -> u64 {
        let mut m = 0u64;
        for (i, &c) in self.coords.iter().enumerate() {
            if c == 1 {
                m |= 1 << i;
            }
        }
        m
    }

    pub fn parse(s: &str) -> Result<Self> {
        let coords: Vec<i8> = s
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '0' => Ok(0),
                '-' => Ok(-1),
                _ => Err(Error::Parse(format!("bad direction char {c:?}"))),
            })
            .collect::<Result<_>>()?;
        Direction::canonical(&coords)
    }

    /// All canonical directions of dimension `n`, in lexicographic order on
    /// coordinates with `-1 < 0 < +1`. There are `(3^n - 1) / 2` of them.
    pub fn enumerate(n: usize) -> Result<Vec<Direction>> {
        if n < 1 || n > 13 {
            return Err(Error::DimensionOutOfRange { n, min: 1, max: 13 });
        }
        let mut out = Vec::with_capacity((3usize.pow(n as u32) - 1) / 2);
        let mut coords = vec![-1i8; n];
        loop {
            if coords.iter().find(|&&c| c != 0) == Some(&1) {
                out.push(Direction { coords: coords.clone() });
            }
            // odometer over {-1,0,+1}^n, last coordinate fastest
            let mut i = n;
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                if coords[i] < 1 {
                    coords[i] += 1;
                    break;
                }
                coords[i] = -1;
            }
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &c in &self.coords {
            write!(f, "{}", match c {
                1 => '+',
                0 => '0',
                _ => '-',
            })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Direction({self})")
    }
}

impl Serialize for Direction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Direction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Direction::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Lookup table from canonical direction to its lexicographic rank.
pub struct DirectionIndex {
    n: usize,
    dirs: Vec<Direction>,
    ranks: HashMap<Direction, usize>,
}

impl DirectionIndex {
    pub fn new(n: usize) -> Result<Self> {
        let dirs = Direction::enumerate(n)?;
        let ranks = dirs.iter().cloned().enumerate().map(|(i, d)| (d, i)).collect();
        Ok(DirectionIndex { n, dirs, ranks })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.dirs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dirs.is_empty()
    }

    pub fn dirs(&self) -> &[Direction] {
        &self.dirs
    }

    pub fn rank(&self, d: &Direction) -> Option<usize> {
        self.ranks.get(d).copied()
    }

    pub fn by_rank(&self, rank: usize) -> &Direction {
        &self.dirs[rank]
    }
}

/// True iff no coordinate is nonzero in both directions.
pub fn disjoint_support(a: &Direction, b: &Direction) -> Result<bool> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch { left: a.n(), right: b.n() });
    }
    Ok(a.support() & b.support() == 0)
}

/// Componentwise sum of two disjoint-support directions, canonicalized.
pub fn dir_sum(a: &Direction, b: &Direction) -> Result<Direction> {
    if !disjoint_support(a, b)? {
        return Err(Error::OverlappingSupport);
    }
    let coords: Vec<i8> = a.coords().iter().zip(b.coords()).map(|(&x, &y)| x + y).collect();
    Direction::canonical(&coords)
}

/// Componentwise difference `a - b`, canonicalized.
pub fn dir_diff(a: &Direction, b: &Direction) -> Result<Direction> {
    if !disjoint_support(a, b)? {
        return Err(Error::OverlappingSupport);
    }
    let coords: Vec<i8> = a.coords().iter().zip(b.coords()).map(|(&x, &y)| x - y).collect();
    Direction::canonical(&coords)
}

/// Two disjoint-support directions: the sides of a planar rectangle.
/// Stored with `a` lexicographically smaller than `b`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Rectangle {
    a: Direction,
    b: Direction,
}

impl Rectangle {
    pub fn new(a: Direction, b: Direction) -> Result<Self> {
        if !disjoint_support(&a, &b)? {
            return Err(Error::OverlappingSupport);
        }
        if a == b {
            return Err(Error::OverlappingSupport);
        }
        Ok(if a < b { Rectangle { a, b } } else { Rectangle { a: b, b: a } })
    }

    pub fn a(&self) -> &Direction {
        &self.a
    }

    pub fn b(&self) -> &Direction {
        &self.b
    }
}

/// The four parallel edge classes `{a, b, a+b, a-b}` of a coplanar K4.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, serde::Serialize)]
pub struct PlanarK4 {
    classes: [Direction; 4],
}

impl PlanarK4 {
    /// The edge classes of the unique planar K4 containing the rectangle.
    pub fn from_rectangle(r: &Rectangle) -> Self {
        let sum = dir_sum(&r.a, &r.b).expect("rectangle invariant");
        let diff = dir_diff(&r.a, &r.b).expect("rectangle invariant");
        let mut classes = [r.a.clone(), r.b.clone(), sum, diff];
        classes.sort();
        PlanarK4 { classes }
    }

    /// Sorted class list.
    pub fn classes(&self) -> &[Direction; 4] {
        &self.classes
    }
}

/// All rectangles over canonical directions of dimension `n`: every unordered
/// canonical pair with disjoint supports, exactly once, in deterministic order.
pub fn enumerate_rectangles(n: usize) -> Result<Vec<Rectangle>> {
    if n > 8 {
        return Err(Error::DimensionOutOfRange { n, min: 1, max: 8 });
    }
    let dirs = Direction::enumerate(n)?;
    let mut out = Vec::new();
    for i in 0..dirs.len() {
        for j in i + 1..dirs.len() {
            if dirs[i].support() & dirs[j].support() == 0 {
                out.push(Rectangle { a: dirs[i].clone(), b: dirs[j].clone() });
            }
        }
    }
    Ok(out)
}

/// An unordered pair of distinct equal-dimension vertices.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Edge {
    u: Vertex,
    v: Vertex,
}

impl Edge {
    pub fn new(u: Vertex, v: Vertex) -> Result<Self> {
        if u.n() != v.n() {
            return Err(Error::DimensionMismatch { left: u.n(), right: v.n() });
        }
        if u == v {
            return Err(Error::Parse("edge endpoints must be distinct".into()));
        }
        Ok(if u.bits() <= v.bits() { Edge { u, v } } else { Edge { u: v, v: u } })
    }

    pub fn u(&self) -> Vertex {
        self.u
    }

    pub fn v(&self) -> Vertex {
        self.v
    }

    pub fn hamming(&self) -> u32 {
        (self.u.bits() ^ self.v.bits()).count_ones()
    }

    /// The parallel edge class this edge belongs to.
    pub fn class(&self) -> Direction {
        let n = self.u.n();
        let coords: Vec<i8> = (0..n)
            .map(|i| {
                if self.u.coord(i) == self.v.coord(i) {
                    0
                } else {
                    // signed step from u to v, halved
                    self.v.coord(i)
                }
            })
            .collect();
        Direction::canonical(&coords).expect("distinct endpoints")
    }
}

/// All concrete edges in class `a` over `{-1,+1}^n`.
///
/// An edge leaves `x` along `a` iff `x` agrees with `-a` on `support(a)`; the
/// other endpoint flips exactly those coordinates. There are
/// `2^(n - |support(a)|)` edges in the class.
pub fn edges_in_class(a: &Direction, n: usize) -> Result<Vec<Edge>> {
    if a.n() != n {
        return Err(Error::DimensionMismatch { left: a.n(), right: n });
    }
    if n > 24 {
        return Err(Error::DimensionOutOfRange { n, min: 1, max: 24 });
    }
    let supp = a.support();
    let plus = a.plus_mask();
    let mut out = Vec::new();
    // free coordinates range over all sign patterns; support coordinates of x
    // are -a (so x's +1 bits on the support are exactly where a is -1)
    let minus_on_supp = supp & !plus;
    let free = !supp & ((1u64 << n) - 1);
    let mut sub = 0u64;
    loop {
        let xbits = sub | minus_on_supp;
        let x = Vertex::new(n, xbits)?;
        let y = x.flip_mask(supp);
        out.push(Edge::new(x, y)?);
        if sub == free {
            break;
        }
        sub = (sub.wrapping_sub(free)) & free; // next subset of free
    }
    Ok(out)
}

/// The four vertices of the planar K4 generated by rectangle `r` at base
/// vertex `x`, with its six edges labeled by class.
///
/// `x` must agree with `-a` on `support(a)` and with `-b` on `support(b)`.
pub fn k4_vertices(r: &Rectangle, x: Vertex) -> Result<(Vec<Vertex>, Vec<(Edge, Direction)>)> {
    let n = x.n();
    if r.a.n() != n {
        return Err(Error::DimensionMismatch { left: r.a.n(), right: n });
    }
    for (d, name) in [(&r.a, "a"), (&r.b, "b")] {
        let supp = d.support();
        let want = supp & !d.plus_mask(); // x's +1 bits on supp must be where d is -1
        if x.bits() & supp != want {
            return Err(Error::IncompatibleBaseVertex(format!(
                "base {x} does not agree with -{name} on support"
            )));
        }
    }
    let sa = r.a.support();
    let sb = r.b.support();
    let verts = vec![x, x.flip_mask(sa), x.flip_mask(sb), x.flip_mask(sa | sb)];
    let mut edges = Vec::with_capacity(6);
    for i in 0..4 {
        for j in i + 1..4 {
            let e = Edge::new(verts[i], verts[j])?;
            let cls = e.class();
            edges.push((e, cls));
        }
    }
    Ok((verts, edges))
}

/// Edge or class color.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Color {
    #[serde(rename = "R")]
    Red,
    #[serde(rename = "B")]
    Blue,
}

impl Color {
    pub fn flip(self) -> Color {
        match self {
            Color::Red => Color::Blue,
            Color::Blue => Color::Red,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", if *self == Color::Red { "R" } else { "B" })
    }
}

/// A total coloring of the parallel edge classes of `{-1,+1}^n`.
///
/// Serializes as the witness JSON `{"n": ..., "classes": {"<dirstring>": "R"|"B", ...}}`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ClassColoring {
    n: usize,
    classes: std::collections::BTreeMap<Direction, Color>,
}

impl ClassColoring {
    /// Builds a coloring and checks totality over the canonical directions.
    pub fn new(n: usize, classes: std::collections::BTreeMap<Direction, Color>) -> Result<Self> {
        let dirs = Direction::enumerate(n)?;
        if classes.len() != dirs.len() {
            return Err(Error::PartialAssignment(format!(
                "{} classes colored, dimension {n} has {}",
                classes.len(),
                dirs.len()
            )));
        }
        for d in &dirs {
            if !classes.contains_key(d) {
                return Err(Error::PartialAssignment(format!("class {d} uncolored")));
            }
        }
        Ok(ClassColoring { n, classes })
    }

    pub fn constant(n: usize, color: Color) -> Result<Self> {
        let classes = Direction::enumerate(n)?.into_iter().map(|d| (d, color)).collect();
        Ok(ClassColoring { n, classes })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn color(&self, d: &Direction) -> Option<Color> {
        self.classes.get(d).copied()
    }

    pub fn classes(&self) -> &std::collections::BTreeMap<Direction, Color> {
        &self.classes
    }

    /// Re-validates totality (used after deserializing untrusted JSON).
    pub fn validate(&self) -> Result<()> {
        ClassColoring::new(self.n, self.classes.clone()).map(|_| ())
    }
}

/// A materialized total edge coloring of `{-1,+1}^n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EdgeColorMap {
    n: usize,
    colors: std::collections::BTreeMap<Edge, Color>,
}

impl EdgeColorMap {
    pub fn new(n: usize, colors: std::collections::BTreeMap<Edge, Color>) -> Self {
        EdgeColorMap { n, colors }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn color(&self, e: &Edge) -> Option<Color> {
        self.colors.get(e).copied()
    }

    pub fn colors(&self) -> &std::collections::BTreeMap<Edge, Color> {
        &self.colors
    }
}
