//! Parameter sets over an alphabet `[t]` with a group action, the phi/Phi
//! bijection between crossing cube edges and `[4]^n`, tic-tac-toe spaces,
//! hyperbowties, and the correspondence between the two.

use crate::cube::{Color, Vertex};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashSet};

/// Group element twisting a parameter: identity or `x -> t+1-x`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Twist {
    #[serde(rename = "e")]
    Id,
    #[serde(rename = "pi")]
    Flip,
}

impl Twist {
    pub fn apply(self, t: u8, x: u8) -> u8 {
        match self {
            Twist::Id => x,
            Twist::Flip => t + 1 - x,
        }
    }

    pub fn compose(self, other: Twist) -> Twist {
        if self == other {
            Twist::Id
        } else {
            Twist::Flip
        }
    }
}

/// Which group acts on the alphabet.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum GroupKind {
    Trivial,
    Flip,
}

impl GroupKind {
    pub fn twists(self) -> &'static [Twist] {
        match self {
            GroupKind::Trivial => &[Twist::Id],
            GroupKind::Flip => &[Twist::Id, Twist::Flip],
        }
    }
}

/// One coordinate of a parameter map: a constant letter or a twisted parameter.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Entry {
    #[serde(rename = "const")]
    Const(u8),
    #[serde(rename = "var")]
    Var { j: usize, twist: Twist },
}

/// An injection `[t]^k -> [t]^n` of the Graham-Rothschild form: each output
/// coordinate is a constant or a (possibly twisted) parameter, and every
/// parameter is used at least once. Parameter indices are 0-based.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct ParameterMap {
    pub t: u8,
    pub k: usize,
    pub entries: Vec<Entry>,
}

/// A materialized point set in `[t]^n`.
pub type Point = Vec<u8>;
pub type PointSet = BTreeSet<Point>;

impl ParameterMap {
    pub fn new(t: u8, k: usize, entries: Vec<Entry>) -> Result<Self> {
        let m = ParameterMap { t, k, entries };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if self.t < 2 {
            return Err(Error::InvalidParameterMap("alphabet size must be >= 2".into()));
        }
        if self.k > self.entries.len() {
            return Err(Error::InvalidParameterMap("more parameters than coordinates".into()));
        }
        let mut used = vec![false; self.k];
        for e in &self.entries {
            match *e {
                Entry::Const(a) => {
                    if a < 1 || a > self.t {
                        return Err(Error::InvalidParameterMap(format!(
                            "constant {a} outside alphabet [1, {}]",
                            self.t
                        )));
                    }
                }
                Entry::Var { j, .. } => {
                    if j >= self.k {
                        return Err(Error::InvalidParameterMap(format!(
                            "parameter index {j} out of range"
                        )));
                    }
                    used[j] = true;
                }
            }
        }
        if let Some(j) = used.iter().position(|&u| !u) {
            return Err(Error::InvalidParameterMap(format!("parameter {j} never used")));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    /// Applies the map to one parameter tuple (values in `1..=t`).
    pub fn apply(&self, args: &[u8]) -> Point {
        debug_assert_eq!(args.len(), self.k);
        self.entries
            .iter()
            .map(|e| match *e {
                Entry::Const(a) => a,
                Entry::Var { j, twist } => twist.apply(self.t, args[j]),
            })
            .collect()
    }

    /// The image of `[t]^k` as an explicit set.
    pub fn materialize(&self) -> Result<PointSet> {
        let size = (self.t as u64).checked_pow(self.k as u32).filter(|&s| s <= 1 << 20);
        let Some(_) = size else {
            return Err(Error::Infeasible(format!(
                "t^k = {}^{} too large to materialize",
                self.t, self.k
            )));
        };
        let mut set = PointSet::new();
        let mut args = vec![1u8; self.k];
        loop {
            set.insert(self.apply(&args));
            let mut i = self.k;
            loop {
                if i == 0 {
                    return Ok(set);
                }
                i -= 1;
                if args[i] < self.t {
                    args[i] += 1;
                    break;
                }
                args[i] = 1;
            }
        }
    }

    /// Composition `self . g`, a k'-parameter map where `g` has k' parameters
    /// and alphabet-`t` coordinates matching `self`'s parameter count.
    pub fn compose(&self, g: &ParameterMap) -> Result<ParameterMap> {
        if g.t != self.t {
            return Err(Error::InvalidParameterMap("alphabet mismatch in composition".into()));
        }
        if g.n() != self.k {
            return Err(Error::InvalidParameterMap(format!(
                "inner map has {} coordinates, outer has {} parameters",
                g.n(),
                self.k
            )));
        }
        let entries = self
            .entries
            .iter()
            .map(|e| match *e {
                Entry::Const(a) => Entry::Const(a),
                Entry::Var { j, twist } => match g.entries[j] {
                    Entry::Const(b) => Entry::Const(twist.apply(self.t, b)),
                    Entry::Var { j: l, twist: tau } => {
                        Entry::Var { j: l, twist: twist.compose(tau) }
                    }
                },
            })
            .collect();
        ParameterMap::new(self.t, g.k, entries)
    }
}

/// `phi(-1,-1)=1, (-1,+1)=2, (+1,-1)=3, (+1,+1)=4`.
pub fn phi(x: i8, y: i8) -> u8 {
    debug_assert!(x == 1 || x == -1);
    debug_assert!(y == 1 || y == -1);
    match (x, y) {
        (-1, -1) => 1,
        (-1, 1) => 2,
        (1, -1) => 3,
        (1, 1) => 4,
        _ => unreachable!(),
    }
}

pub fn phi_inv(z: u8) -> (i8, i8) {
    match z {
        1 => (-1, -1),
        2 => (-1, 1),
        3 => (1, -1),
        4 => (1, 1),
        _ => panic!("phi value {z} out of range"),
    }
}

/// The bijection from crossing edges of `{-1,+1}^(n+1)` (coordinate 0 differs)
/// to `[4]^n`, applied coordinatewise.
///
/// Orients the endpoint with coordinate 0 equal to `-1` first.
pub fn big_phi(u: &Vertex, v: &Vertex) -> Result<Point> {
    if u.n() != v.n() {
        return Err(Error::DimensionMismatch { left: u.n(), right: v.n() });
    }
    let (lo, hi) = match (u.coord(0), v.coord(0)) {
        (-1, 1) => (u, v),
        (1, -1) => (v, u),
        _ => return Err(Error::NotCrossingEdge),
    };
    Ok((1..u.n()).map(|i| phi(lo.coord(i), hi.coord(i))).collect())
}

/// Converts a `t=2` alphabet point (values 1,2) to a cube vertex (-1,+1).
pub fn point_to_vertex(p: &[u8]) -> Result<Vertex> {
    let coords: Vec<i8> = p
        .iter()
        .map(|&v| match v {
            1 => Ok(-1),
            2 => Ok(1),
            _ => Err(Error::Parse(format!("value {v} not in [2]"))),
        })
        .collect::<Result<_>>()?;
    Vertex::from_coords(&coords)
}

/// Lexicographic rank of a point of `[t]^n` (coordinate 0 most significant).
pub fn point_rank(p: &[u8], t: u8) -> usize {
    p.iter().fold(0usize, |acc, &v| acc * t as usize + (v as usize - 1))
}

/// Inverse of `point_rank`.
pub fn rank_point(mut r: usize, t: u8, n: usize) -> Point {
    let mut p = vec![1u8; n];
    for i in (0..n).rev() {
        p[i] = (r % t as usize) as u8 + 1;
        r /= t as usize;
    }
    p
}

/// All valid parameter maps `[t]^k -> [t]^n` for the given group, in
/// deterministic lexicographic order over per-coordinate choices.
pub fn enumerate_parameter_maps(
    t: u8,
    group: GroupKind,
    k: usize,
    n: usize,
) -> Result<Vec<ParameterMap>> {
    let mut options: Vec<Entry> = (1..=t).map(Entry::Const).collect();
    for j in 0..k {
        for &tw in group.twists() {
            options.push(Entry::Var { j, twist: tw });
        }
    }
    let total = (options.len() as u64).checked_pow(n as u32).filter(|&s| s <= 1 << 24);
    if total.is_none() {
        return Err(Error::Infeasible(format!(
            "{}^{} parameter maps is too many to enumerate",
            options.len(),
            n
        )));
    }
    let mut out = Vec::new();
    let mut choice = vec![0usize; n];
    loop {
        let entries: Vec<Entry> = choice.iter().map(|&c| options[c]).collect();
        if let Ok(m) = ParameterMap::new(t, k, entries) {
            out.push(m);
        }
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if choice[i] + 1 < options.len() {
                choice[i] += 1;
                break;
            }
            choice[i] = 0;
        }
    }
}

/// All distinct d-dimensional point sets of `[t]^n` under the given group,
/// deduplicated by materialized image, in first-occurrence order.
pub fn enumerate_spaces(t: u8, group: GroupKind, d: usize, n: usize) -> Result<Vec<PointSet>> {
    let maps = enumerate_parameter_maps(t, group, d, n)?;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for m in &maps {
        let set = m.materialize()?;
        if seen.insert(set.clone()) {
            out.push(set);
        }
    }
    Ok(out)
}

/// The edge set of a `(d+1)`-dimensional subcube of `{-1,+1}^(n+1)` crossing
/// coordinate 0, oriented from the `x_0 = -1` half to the `x_0 = +1` half,
/// together with its generating parameter map (normalized so that the
/// crossing parameter is parameter 0 with identity twist).
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Hyperbowtie {
    d: usize,
    edges: BTreeSet<(Vertex, Vertex)>,
    source: ParameterMap,
}

impl Hyperbowtie {
    /// Builds the hyperbowtie of a crossing subcube map `f` over `{-1,+1}`
    /// (alphabet `t=2`, flip group, `d+1` parameters over `n+1` coordinates,
    /// coordinate 0 non-constant).
    pub fn from_subcube(f: &ParameterMap) -> Result<Self> {
        f.validate()?;
        if f.t != 2 {
            return Err(Error::InvalidParameterMap("subcube map must have t=2".into()));
        }
        if f.k == 0 {
            return Err(Error::InvalidParameterMap("subcube must have at least 1 parameter".into()));
        }
        let f = normalize_crossing(f)?;
        let d = f.k - 1;
        let n1 = f.n();
        let mut edges = BTreeSet::new();
        // all 4^d pairs of parameter tuples for the two halves
        let mut lo_args = vec![1u8; f.k];
        let mut hi_args = vec![1u8; f.k];
        lo_args[0] = 1; // x_0 = -1
        hi_args[0] = 2; // x_0 = +1
        let count = 1usize << d;
        for li in 0..count {
            for hi_i in 0..count {
                for b in 0..d {
                    lo_args[b + 1] = (li >> b & 1) as u8 + 1;
                    hi_args[b + 1] = (hi_i >> b & 1) as u8 + 1;
                }
                let lo = point_to_vertex(&f.apply(&lo_args))?;
                let hi = point_to_vertex(&f.apply(&hi_args))?;
                debug_assert_eq!(lo.coord(0), -1);
                debug_assert_eq!(hi.coord(0), 1);
                edges.insert((lo, hi));
            }
        }
        debug_assert_eq!(edges.len(), count * count);
        let _ = n1;
        Ok(Hyperbowtie { d, edges, source: f })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn edges(&self) -> &BTreeSet<(Vertex, Vertex)> {
        &self.edges
    }

    pub fn source(&self) -> &ParameterMap {
        &self.source
    }

    /// Image of the edge set under Phi.
    pub fn phi_image(&self) -> Result<PointSet> {
        self.edges.iter().map(|(u, v)| big_phi(u, v)).collect()
    }
}

/// Reparameterizes a crossing subcube map so the parameter controlling
/// coordinate 0 is parameter 0 with identity twist.
pub fn normalize_crossing(f: &ParameterMap) -> Result<ParameterMap> {
    let (j0, tw0) = match f.entries.first() {
        Some(&Entry::Var { j, twist }) => (j, twist),
        _ => {
            return Err(Error::InvalidParameterMap(
                "coordinate 0 is constant: subcube does not cross".into(),
            ))
        }
    };
    let entries = f
        .entries
        .iter()
        .map(|e| match *e {
            Entry::Const(a) => Entry::Const(a),
            Entry::Var { j, twist } => {
                // swap parameter j0 <-> 0, then compose the new parameter 0
                // with tw0 so that f_0 becomes the identity on it
                let nj = if j == j0 { 0 } else if j == 0 { j0 } else { j };
                let ntw = if nj == 0 { twist.compose(tw0) } else { twist };
                Entry::Var { j: nj, twist: ntw }
            }
        })
        .collect();
    ParameterMap::new(f.t, f.k, entries)
}

/// Translates a hyperbowtie's source map into the tic-tac-toe parameter map
/// `g : [4]^d -> [4]^n` whose image is the Phi-image of the hyperbowtie.
///
/// Case table over each non-crossing coordinate of `f` (with `f_0 = x_0`):
/// constants map to 1 or 4, copies of the crossing parameter to 2 or 3,
/// untwisted parameters pass through, twisted ones become `5 - z_j`.
pub fn hyperbowtie_to_ttt(f: &ParameterMap) -> Result<ParameterMap> {
    f.validate()?;
    if f.t != 2 {
        return Err(Error::InvalidParameterMap("source map must have t=2".into()));
    }
    match f.entries.first() {
        Some(&Entry::Var { j: 0, twist: Twist::Id }) => {}
        _ => {
            return Err(Error::InvalidParameterMap(
                "crossing parameter must be parameter 0 with identity twist".into(),
            ))
        }
    }
    let d = f.k - 1;
    let entries = f.entries[1..]
        .iter()
        .map(|e| match *e {
            // value 1 is -1, value 2 is +1; phi(-1,-1)=1, phi(+1,+1)=4
            Entry::Const(1) => Entry::Const(1),
            Entry::Const(_) => Entry::Const(4),
            // f_i = x_0: -1 on the Q- side, +1 on the Q+ side -> phi(-1,+1)=2
            Entry::Var { j: 0, twist: Twist::Id } => Entry::Const(2),
            // f_i = -x_0: phi(+1,-1)=3
            Entry::Var { j: 0, twist: Twist::Flip } => Entry::Const(3),
            Entry::Var { j, twist } => Entry::Var { j: j - 1, twist },
        })
        .collect();
    ParameterMap::new(4, d, entries)
}

/// Outcome of the exhaustive hyperbowtie / tic-tac-toe correspondence check.
#[derive(Clone, Debug, Serialize)]
pub struct BijectionReport {
    pub n: usize,
    pub d: usize,
    pub hyperbowtie_count: usize,
    pub ttt_space_count: usize,
    pub bijective: bool,
}

/// Enumerates every d-hyperbowtie of `{-1,+1}^(n+1)` and every d-dimensional
/// tic-tac-toe space of `[4]^n`, and checks that Phi maps the former onto the
/// latter bijectively.
pub fn verify_bijection(n: usize, d: usize) -> Result<BijectionReport> {
    if n > 3 || d > 2 || d < 1 || d > n {
        return Err(Error::Infeasible(format!("verify_bijection limited to n <= 3, d <= 2, got n={n} d={d}")));
    }
    let maps = enumerate_parameter_maps(2, GroupKind::Flip, d + 1, n + 1)?;
    let mut bowties: Vec<Hyperbowtie> = Vec::new();
    let mut seen_edges = HashSet::new();
    for f in &maps {
        if !matches!(f.entries[0], Entry::Var { .. }) {
            continue; // contained in one half, not crossing
        }
        let hb = Hyperbowtie::from_subcube(f)?;
        if seen_edges.insert(hb.edges.clone()) {
            bowties.push(hb);
        }
    }
    let spaces = enumerate_spaces(4, GroupKind::Flip, d, n)?;
    let space_set: HashSet<&PointSet> = spaces.iter().collect();
    let mut images = HashSet::new();
    let mut bijective = true;
    for hb in &bowties {
        let img = hb.phi_image()?;
        if !space_set.contains(&img) || !images.insert(img) {
            bijective = false;
        }
    }
    bijective = bijective
        && bowties.len() == spaces.len()
        && images.len() == spaces.len();
    Ok(BijectionReport {
        n,
        d,
        hyperbowtie_count: bowties.len(),
        ttt_space_count: spaces.len(),
        bijective,
    })
}

/// First monochromatic d-dimensional space of `[t]^n` in deterministic order,
/// if any. `coloring` is indexed by `point_rank`.
pub fn find_mono_space(
    coloring: &[Color],
    t: u8,
    group: GroupKind,
    d: usize,
    n: usize,
) -> Result<Option<PointSet>> {
    let size = (t as u64).checked_pow(n as u32).filter(|&s| s <= 1 << 24);
    if size.is_none() {
        return Err(Error::Infeasible(format!("[{t}]^{n} too large")));
    }
    if coloring.len() != (t as usize).pow(n as u32) {
        return Err(Error::PartialAssignment(format!(
            "coloring has {} entries, expected {}",
            coloring.len(),
            (t as usize).pow(n as u32)
        )));
    }
    for set in enumerate_spaces(t, group, d, n)? {
        let mut colors = set.iter().map(|p| coloring[point_rank(p, t)]);
        let first = colors.next().expect("nonempty space");
        if colors.all(|c| c == first) {
            return Ok(Some(set));
        }
    }
    Ok(None)
}
