//! Counting 2x2 squares (4-cycles whose sides have Hamming length 2), the
//! right-angle and parallel-pair statistics, and the exact-rational threshold
//! where a monochromatic square is forced.

use std::collections::BTreeMap;

use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cube::{Color, Edge, EdgeColorMap, Vertex};
use crate::error::{Error, Result};

pub type Rat = Ratio<i64>;

/// A 2x2 square: the 4-cycle `base, base^A, base^(A|B), base^B` where `A` and
/// `B` are disjoint two-coordinate flip sets. Stored canonically with the
/// smallest of the four vertices as base and `A < B` as bit masks.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Square2x2 {
    base: Vertex,
    pair_a: u64,
    pair_b: u64,
}

impl Square2x2 {
    pub fn new(v: Vertex, a: u64, b: u64) -> Result<Self> {
        let n = v.n();
        let full = (1u64 << n) - 1;
        if a.count_ones() != 2 || b.count_ones() != 2 || a & !full != 0 || b & !full != 0 {
            return Err(Error::Parse("flip sets must be 2-element coordinate sets".into()));
        }
        if a & b != 0 {
            return Err(Error::OverlappingSupport);
        }
        let bits = [v.bits(), v.bits() ^ a, v.bits() ^ b, v.bits() ^ a ^ b];
        let base = Vertex::new(n, *bits.iter().min().expect("nonempty"))?;
        let (pair_a, pair_b) = if a < b { (a, b) } else { (b, a) };
        Ok(Square2x2 { base, pair_a, pair_b })
    }

    pub fn base(&self) -> Vertex {
        self.base
    }

    pub fn pair_a(&self) -> u64 {
        self.pair_a
    }

    pub fn pair_b(&self) -> u64 {
        self.pair_b
    }

    pub fn vertices(&self) -> [Vertex; 4] {
        let n = self.base.n();
        let b = self.base.bits();
        let v = |bits| Vertex::new(n, bits).expect("in range");
        [
            self.base,
            v(b ^ self.pair_a),
            v(b ^ self.pair_a ^ self.pair_b),
            v(b ^ self.pair_b),
        ]
    }

    /// The four sides in cycle order.
    pub fn cycle_edges(&self) -> [Edge; 4] {
        let vs = self.vertices();
        let e = |i: usize, j: usize| Edge::new(vs[i], vs[j]).expect("distinct");
        [e(0, 1), e(1, 2), e(2, 3), e(3, 0)]
    }
}

/// The four colorings of a square's cycle up to symmetry and color swap.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SquareType {
    Mono,
    ThreeOne,
    TwoAdj,
    TwoOpp,
}

fn edge_color(ec: &EdgeColorMap, e: &Edge) -> Result<Color> {
    ec.color(e).ok_or_else(|| Error::PartialAssignment(format!("edge {e:?} uncolored")))
}

pub fn classify_square(s: &Square2x2, ec: &EdgeColorMap) -> Result<SquareType> {
    let c: Vec<Color> =
        s.cycle_edges().iter().map(|e| edge_color(ec, e)).collect::<Result<_>>()?;
    let reds = c.iter().filter(|&&x| x == Color::Red).count();
    Ok(match reds {
        0 | 4 => SquareType::Mono,
        1 | 3 => SquareType::ThreeOne,
        _ => {
            if c[0] == c[2] {
                SquareType::TwoOpp
            } else {
                SquareType::TwoAdj
            }
        }
    })
}

/// Exact statistics of one coloring: square-type proportions, plus directly
/// counted right-angle and parallel-pair monochromatic proportions.
#[derive(Clone, Debug)]
pub struct CensusReport {
    pub n: usize,
    pub total_squares: u64,
    pub count_mono: u64,
    pub count_three_one: u64,
    pub count_two_adj: u64,
    pub count_two_opp: u64,
    pub p_mono: Rat,
    pub p_31: Rat,
    pub p_2adj: Rat,
    pub p_2opp: Rat,
    pub right_angles: u64,
    pub mono_right_angles: u64,
    pub right_angle_mono: Rat,
    pub parallel_pairs: u64,
    pub mono_parallel_pairs: u64,
    pub parallel_mono: Rat,
}

impl CensusReport {
    pub fn csv_header() -> &'static str {
        "n,total_squares,p_mono,p_31,p_2adj,p_2opp,right_angle_mono,parallel_mono"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.n,
            self.total_squares,
            self.p_mono,
            self.p_31,
            self.p_2adj,
            self.p_2opp,
            self.right_angle_mono,
            self.parallel_mono
        )
    }
}

fn two_subsets(n: usize) -> Vec<u64> {
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            out.push(1u64 << i | 1u64 << j);
        }
    }
    out
}

fn ratio(num: u64, den: u64) -> Rat {
    Ratio::new(num as i64, den as i64)
}

/// Exhaustive census over all squares, right angles (pairs of length-2 edges
/// at a shared vertex with disjoint flip pairs) and parallel pairs (equal
/// flip pair, translation support disjoint from it).
pub fn census(ec: &EdgeColorMap, n: usize) -> Result<CensusReport> {
    if !(4..=10).contains(&n) {
        return Err(Error::DimensionOutOfRange { n, min: 4, max: 10 });
    }
    if ec.n() != n {
        return Err(Error::DimensionMismatch { left: ec.n(), right: n });
    }
    let pairs = two_subsets(n);
    let vert = |bits: u64| Vertex::new(n, bits).expect("in range");
    let color = |x: u64, y: u64| edge_color(ec, &Edge::new(vert(x), vert(y)).expect("distinct"));

    let mut counts = [0u64; 4];
    let mut right_angles = 0u64;
    let mut mono_right_angles = 0u64;
    let mut parallel_pairs = 0u64;
    let mut mono_parallel_pairs = 0u64;
    for (ai, &a) in pairs.iter().enumerate() {
        // right angles and squares: unordered disjoint {a, b}
        for &b in &pairs[ai + 1..] {
            if a & b != 0 {
                continue;
            }
            for v in 0..1u64 << n {
                right_angles += 1;
                if color(v, v ^ a)? == color(v, v ^ b)? {
                    mono_right_angles += 1;
                }
                // count each square once, at its smallest vertex
                if v < v ^ a && v < v ^ b && v < v ^ a ^ b {
                    let s = Square2x2::new(vert(v), a, b)?;
                    let t = classify_square(&s, ec)?;
                    counts[match t {
                        SquareType::Mono => 0,
                        SquareType::ThreeOne => 1,
                        SquareType::TwoAdj => 2,
                        SquareType::TwoOpp => 3,
                    }] += 1;
                }
            }
        }
        // parallel pairs: flip pair a, translation b disjoint from a
        for &b in &pairs {
            if a & b != 0 {
                continue;
            }
            for v in 0..1u64 << n {
                // count each unordered pair of edges once: v is the smaller
                // endpoint of its edge and on the smaller side of b
                if v > v ^ a || v > v ^ b {
                    continue;
                }
                parallel_pairs += 1;
                if color(v, v ^ a)? == color(v ^ b, v ^ b ^ a)? {
                    mono_parallel_pairs += 1;
                }
            }
        }
    }
    let total: u64 = counts.iter().sum();
    Ok(CensusReport {
        n,
        total_squares: total,
        count_mono: counts[0],
        count_three_one: counts[1],
        count_two_adj: counts[2],
        count_two_opp: counts[3],
        p_mono: ratio(counts[0], total),
        p_31: ratio(counts[1], total),
        p_2adj: ratio(counts[2], total),
        p_2opp: ratio(counts[3], total),
        right_angles,
        mono_right_angles,
        right_angle_mono: ratio(mono_right_angles, right_angles),
        parallel_pairs,
        mono_parallel_pairs,
        parallel_mono: ratio(mono_parallel_pairs, parallel_pairs),
    })
}

/// Monte-Carlo estimate of the census with uniformly sampled squares, right
/// angles and parallel pairs. Deterministic for a fixed seed.
pub fn sample_census(ec: &EdgeColorMap, n: usize, samples: u64, seed: u64) -> Result<CensusReport> {
    if samples == 0 {
        return Err(Error::Infeasible("need at least one sample".into()));
    }
    if !(4..=24).contains(&n) {
        return Err(Error::DimensionOutOfRange { n, min: 4, max: 24 });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vert = |bits: u64| Vertex::new(n, bits).expect("in range");
    let color = |x: u64, y: u64| edge_color(ec, &Edge::new(vert(x), vert(y)).expect("distinct"));
    let mut counts = [0u64; 4];
    let mut mono_right_angles = 0u64;
    let mut mono_parallel_pairs = 0u64;
    for _ in 0..samples {
        let v = rng.gen_range(0..1u64 << n);
        // pair A: two distinct coordinates; pair B: two distinct among the rest
        let mut coords: Vec<usize> = (0..n).collect();
        for slot in 0..4 {
            let pick = rng.gen_range(slot..coords.len());
            coords.swap(slot, pick);
        }
        let a = 1u64 << coords[0] | 1u64 << coords[1];
        let b = 1u64 << coords[2] | 1u64 << coords[3];
        let s = Square2x2::new(vert(v), a, b)?;
        let t = classify_square(&s, ec)?;
        counts[match t {
            SquareType::Mono => 0,
            SquareType::ThreeOne => 1,
            SquareType::TwoAdj => 2,
            SquareType::TwoOpp => 3,
        }] += 1;
        if color(v, v ^ a)? == color(v, v ^ b)? {
            mono_right_angles += 1;
        }
        if color(v, v ^ a)? == color(v ^ b, v ^ b ^ a)? {
            mono_parallel_pairs += 1;
        }
    }
    Ok(CensusReport {
        n,
        total_squares: samples,
        count_mono: counts[0],
        count_three_one: counts[1],
        count_two_adj: counts[2],
        count_two_opp: counts[3],
        p_mono: ratio(counts[0], samples),
        p_31: ratio(counts[1], samples),
        p_2adj: ratio(counts[2], samples),
        p_2opp: ratio(counts[3], samples),
        right_angles: samples,
        mono_right_angles,
        right_angle_mono: ratio(mono_right_angles, samples),
        parallel_pairs: samples,
        mono_parallel_pairs,
        parallel_mono: ratio(mono_parallel_pairs, samples),
    })
}

/// The lower bounds of the right-angle and parallel-pair lemmas and the upper
/// bound of the odd-parity lemma, as exact rationals:
/// `(1/2 - 1/(2*floor(n/2) - 2), 1/2 - 1/(2(n-3)), 14/15)`.
/// The last is valid for n >= 5.
pub fn lemma_bounds(n: usize) -> Result<(Rat, Rat, Rat)> {
    if n < 4 {
        return Err(Error::OutOfValidity(format!("bounds require n >= 4, got {n}")));
    }
    let half = Ratio::new(1, 2);
    let right = half - Ratio::new(1, 2 * (n as i64 / 2) - 2);
    let par = half - Ratio::new(1, 2 * (n as i64 - 3));
    Ok((right, par, Ratio::new(14, 15)))
}

/// `1/30 - 1/(floor(n/2) - 1) - 1/(2(n-3))`: positive exactly when a
/// monochromatic square is forced; the guaranteed mono-square proportion is
/// half the margin.
pub fn margin(n: usize) -> Result<Rat> {
    if n < 5 {
        return Err(Error::OutOfValidity(format!("margin requires n >= 5, got {n}")));
    }
    Ok(Ratio::new(1, 30)
        - Ratio::new(1, n as i64 / 2 - 1)
        - Ratio::new(1, 2 * (n as i64 - 3)))
}

/// Smallest `n` whose margin is positive, together with that margin.
pub fn square_threshold() -> (usize, Rat) {
    for n in 5..1000 {
        let m = margin(n).expect("n >= 5");
        if m > Ratio::new(0, 1) {
            return (n, m);
        }
    }
    unreachable!("margin is eventually positive");
}

/// Structure report of the 10-point configuration behind the odd-parity
/// lemma.
#[derive(Clone, Debug)]
pub struct ParityReport {
    pub n: usize,
    pub squares: usize,
    pub edges: usize,
    pub min_multiplicity: usize,
    pub max_multiplicity: usize,
    /// true when the double-counting argument applies: every edge lies in an
    /// even number of squares while the number of squares is odd, so the 15
    /// square color-sums cannot all be odd
    pub parity_impossible: bool,
}

/// Examines the 10 vertices `v ^ pi[i] ^ pi[j]` (i < j over five chosen
/// coordinates): counts the 2x2 squares with all four corners among them and
/// how often each length-2 edge is used.
pub fn verify_parity_structure_at(n: usize, v: &Vertex, pi: &[usize; 5]) -> Result<ParityReport> {
    if n < 5 {
        return Err(Error::DimensionOutOfRange { n, min: 5, max: 64 });
    }
    if v.n() != n {
        return Err(Error::DimensionMismatch { left: v.n(), right: n });
    }
    let mut sorted = pi.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != 5 || sorted[4] >= n {
        return Err(Error::Parse("pi must pick five distinct coordinates".into()));
    }
    let mut points = Vec::new();
    for i in 0..5 {
        for j in i + 1..5 {
            points.push(v.bits() ^ 1u64 << pi[i] ^ 1u64 << pi[j]);
        }
    }
    let mut edge_use: BTreeMap<(u64, u64), usize> = BTreeMap::new();
    let mut squares = 0usize;
    // every 4-subset whose points form a 2x2 square: all pairwise distances
    // are 2,2,2,2,4,4 and the four bit patterns cancel
    for a in 0..10 {
        for b in a + 1..10 {
            for c in b + 1..10 {
                for d in c + 1..10 {
                    let quad = [points[a], points[b], points[c], points[d]];
                    if quad[0] ^ quad[1] ^ quad[2] ^ quad[3] != 0 {
                        continue;
                    }
                    let mut dists = Vec::with_capacity(6);
                    for i in 0..4 {
                        for j in i + 1..4 {
                            dists.push((quad[i] ^ quad[j]).count_ones());
                        }
                    }
                    dists.sort_unstable();
                    if dists != [2, 2, 2, 2, 4, 4] {
                        continue;
                    }
                    squares += 1;
                    for i in 0..4 {
                        for j in i + 1..4 {
                            if (quad[i] ^ quad[j]).count_ones() == 2 {
                                let key =
                                    (quad[i].min(quad[j]), quad[i].max(quad[j]));
                                *edge_use.entry(key).or_insert(0) += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    let min_mult = edge_use.values().copied().min().unwrap_or(0);
    let max_mult = edge_use.values().copied().max().unwrap_or(0);
    Ok(ParityReport {
        n,
        squares,
        edges: edge_use.len(),
        min_multiplicity: min_mult,
        max_multiplicity: max_mult,
        parity_impossible: min_mult == max_mult && min_mult % 2 == 0 && squares % 2 == 1,
    })
}

/// `verify_parity_structure_at` with `v` the all-(-1) vertex and the first
/// five coordinates.
pub fn verify_parity_structure(n: usize) -> Result<ParityReport> {
    let v = Vertex::new(n, 0)?;
    verify_parity_structure_at(n, &v, &[0, 1, 2, 3, 4])
}

/// Materializes a coloring of every Hamming-length-2 edge of `{-1,+1}^n`.
pub fn length2_coloring(n: usize, mut pick: impl FnMut(&Edge) -> Color) -> Result<EdgeColorMap> {
    if n > 16 {
        return Err(Error::DimensionOutOfRange { n, min: 2, max: 16 });
    }
    let mut colors = BTreeMap::new();
    for m in two_subsets(n) {
        for v in 0..1u64 << n {
            if v < v ^ m {
                let e = Edge::new(Vertex::new(n, v)?, Vertex::new(n, v ^ m)?)?;
                colors.insert(e, pick(&e));
            }
        }
    }
    Ok(EdgeColorMap::new(n, colors))
}

/// A seeded uniformly random coloring of the length-2 edges.
pub fn random_length2_coloring(n: usize, seed: u64) -> Result<EdgeColorMap> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    length2_coloring(n, |_| if rng.gen::<bool>() { Color::Red } else { Color::Blue })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    fn flip_mask(e: &Edge) -> u64 {
        e.u().bits() ^ e.v().bits()
    }

    #[test]
    fn classify_examples() {
        let n = 4;
        let s = Square2x2::new(Vertex::new(n, 0).unwrap(), 0b0011, 0b1100).unwrap();
        let all_red = length2_coloring(n, |_| Color::Red).unwrap();
        assert_eq!(classify_square(&s, &all_red).unwrap(), SquareType::Mono);
        // color exactly one cycle edge blue: ThreeOne
        let odd_edge = s.cycle_edges()[3];
        let ec = length2_coloring(n, |e| if *e == odd_edge { Color::Blue } else { Color::Red })
            .unwrap();
        assert_eq!(classify_square(&s, &ec).unwrap(), SquareType::ThreeOne);
        // alternate around the cycle: TwoOpp
        let cyc = s.cycle_edges();
        let ec = length2_coloring(n, |e| {
            if *e == cyc[0] || *e == cyc[2] {
                Color::Blue
            } else {
                Color::Red
            }
        })
        .unwrap();
        assert_eq!(classify_square(&s, &ec).unwrap(), SquareType::TwoOpp);
        // adjacent equal colors: TwoAdj
        let ec = length2_coloring(n, |e| {
            if *e == cyc[0] || *e == cyc[1] {
                Color::Blue
            } else {
                Color::Red
            }
        })
        .unwrap();
        assert_eq!(classify_square(&s, &ec).unwrap(), SquareType::TwoAdj);
    }

    #[test]
    fn square_canonical_form() {
        let n = 5;
        let a = 0b00011u64;
        let b = 0b01100u64;
        let v = Vertex::new(n, 0b01010).unwrap();
        let s1 = Square2x2::new(v, a, b).unwrap();
        let s2 = Square2x2::new(Vertex::new(n, v.bits() ^ a ^ b).unwrap(), b, a).unwrap();
        assert_eq!(s1, s2);
        assert!(s1.pair_a() < s1.pair_b());
        assert!(Square2x2::new(v, 0b00011, 0b00110).is_err()); // overlap
    }

    #[test]
    fn census_constant() {
        let ec = length2_coloring(5, |_| Color::Red).unwrap();
        let r = census(&ec, 5).unwrap();
        assert_eq!(r.total_squares, 120);
        assert_eq!(r.right_angles, 480);
        assert_eq!(r.parallel_pairs, 240);
        assert_eq!(r.p_mono, Ratio::new(1, 1));
        assert_eq!(r.right_angle_mono, Ratio::new(1, 1));
        assert_eq!(r.parallel_mono, Ratio::new(1, 1));
    }

    #[test]
    fn census_parity_coloring_matches_decomposition() {
        // color by parity of the lowest flipped coordinate
        let ec = length2_coloring(5, |e| {
            if flip_mask(e).trailing_zeros() % 2 == 0 {
                Color::Red
            } else {
                Color::Blue
            }
        })
        .unwrap();
        let r = census(&ec, 5).unwrap();
        assert_eq!(r.p_mono + r.p_31 + r.p_2adj + r.p_2opp, Ratio::new(1, 1));
        // the directly-counted angle statistics agree with the per-square
        // decomposition: two independent counting paths
        let half = Ratio::new(1, 2);
        assert_eq!(r.right_angle_mono, r.p_mono + half * r.p_31 + half * r.p_2adj);
        assert_eq!(r.parallel_mono, r.p_mono + half * r.p_31 + r.p_2opp);
    }

    #[test]
    fn census_identities_random() {
        let half = Ratio::new(1, 2);
        for n in 5..=7 {
            for seed in 0..20 {
                let ec = random_length2_coloring(n, seed).unwrap();
                let r = census(&ec, n).unwrap();
                assert_eq!(r.p_mono + r.p_31 + r.p_2adj + r.p_2opp, Ratio::new(1, 1));
                assert_eq!(r.right_angle_mono, r.p_mono + half * r.p_31 + half * r.p_2adj);
                assert_eq!(r.parallel_mono, r.p_mono + half * r.p_31 + r.p_2opp);
                let (right_lb, par_lb, odd_ub) = lemma_bounds(n).unwrap();
                assert!(r.right_angle_mono >= right_lb);
                assert!(r.parallel_mono >= par_lb);
                assert!(r.p_31 <= odd_ub);
            }
        }
    }

    #[test]
    fn census_adversarial_alternating() {
        // color by parity of the popcount of the smaller endpoint: a highly
        // structured adversary for the inequality checks
        for n in [5usize, 6] {
            let ec = length2_coloring(n, |e| {
                if e.u().bits().count_ones() % 2 == 0 {
                    Color::Red
                } else {
                    Color::Blue
                }
            })
            .unwrap();
            let r = census(&ec, n).unwrap();
            let (right_lb, par_lb, odd_ub) = lemma_bounds(n).unwrap();
            assert!(r.right_angle_mono >= right_lb);
            assert!(r.parallel_mono >= par_lb);
            assert!(r.p_31 <= odd_ub);
        }
    }

    #[test]
    fn sample_census_behavior() {
        let ec = length2_coloring(6, |_| Color::Blue).unwrap();
        let r = sample_census(&ec, 6, 500, 1).unwrap();
        assert_eq!(r.p_mono, Ratio::new(1, 1));
        // determinism
        let ec = random_length2_coloring(6, 3).unwrap();
        let a = sample_census(&ec, 6, 1000, 9).unwrap();
        let b = sample_census(&ec, 6, 1000, 9).unwrap();
        assert_eq!(a.count_mono, b.count_mono);
        assert_eq!(a.mono_right_angles, b.mono_right_angles);
        // convergence to the exhaustive census
        let exact = census(&ec, 6).unwrap();
        let big = sample_census(&ec, 6, 100_000, 2).unwrap();
        let close = |x: Rat, y: Rat| {
            let d = x - y;
            d.abs() < Ratio::new(1, 50)
        };
        assert!(close(big.p_mono, exact.p_mono));
        assert!(close(big.p_31, exact.p_31));
        assert!(close(big.right_angle_mono, exact.right_angle_mono));
        assert!(close(big.parallel_mono, exact.parallel_mono));
    }

    #[test]
    fn lemma_bounds_examples() {
        assert_eq!(
            lemma_bounds(8).unwrap(),
            (
                Ratio::new(1, 2) - Ratio::new(1, 6),
                Ratio::new(1, 2) - Ratio::new(1, 10),
                Ratio::new(14, 15)
            )
        );
        assert_eq!(lemma_bounds(4).unwrap().0, Ratio::new(0, 1));
        assert_eq!(
            lemma_bounds(78).unwrap(),
            (
                Ratio::new(1, 2) - Ratio::new(1, 76),
                Ratio::new(1, 2) - Ratio::new(1, 150),
                Ratio::new(14, 15)
            )
        );
        assert!(lemma_bounds(3).is_err());
    }

    #[test]
    fn threshold_is_78() {
        let (n, m) = square_threshold();
        assert_eq!(n, 78);
        assert_eq!(m, Ratio::new(1, 30) - Ratio::new(1, 38) - Ratio::new(1, 150));
        assert!(m > Ratio::new(0, 1));
        assert!(margin(77).unwrap() <= Ratio::new(0, 1));
        assert_eq!(margin(77).unwrap(), Ratio::new(1, 30) - Ratio::new(1, 37) - Ratio::new(1, 148));
    }

    #[test]
    fn parity_structure_counts() {
        let r = verify_parity_structure(5).unwrap();
        assert_eq!(r.squares, 15);
        assert_eq!(r.edges, 30);
        assert_eq!((r.min_multiplicity, r.max_multiplicity), (2, 2));
        assert!(r.parity_impossible);
        // invariance under base point and coordinate relabeling at n=6
        let v = Vertex::new(6, 0b101010).unwrap();
        let r = verify_parity_structure_at(6, &v, &[5, 3, 1, 0, 4]).unwrap();
        assert_eq!(r.squares, 15);
        assert_eq!(r.edges, 30);
        assert_eq!((r.min_multiplicity, r.max_multiplicity), (2, 2));
    }

    #[test]
    fn parity_double_count_even() {
        // with every edge in exactly two squares, the total of the 15 square
        // color-sums is even for any coloring of the 30 edges
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let v = Vertex::new(5, 0).unwrap();
        // reconstruct the squares over the 10 points to sum directly
        let pi = [0usize, 1, 2, 3, 4];
        let mut points = Vec::new();
        for i in 0..5 {
            for j in i + 1..5 {
                points.push(v.bits() ^ 1u64 << pi[i] ^ 1u64 << pi[j]);
            }
        }
        let mut squares: Vec<Vec<(u64, u64)>> = Vec::new();
        for a in 0..10 {
            for b in a + 1..10 {
                for c in b + 1..10 {
                    for d in c + 1..10 {
                        let quad = [points[a], points[b], points[c], points[d]];
                        if quad[0] ^ quad[1] ^ quad[2] ^ quad[3] != 0 {
                            continue;
                        }
                        let mut dists: Vec<u32> = (0..4)
                            .flat_map(|i| ((i + 1)..4).map(move |j| (i, j)))
                            .map(|(i, j)| (quad[i] ^ quad[j]).count_ones())
                            .collect();
                        dists.sort_unstable();
                        if dists != [2, 2, 2, 2, 4, 4] {
                            continue;
                        }
                        let sides: Vec<(u64, u64)> = (0..4)
                            .flat_map(|i| ((i + 1)..4).map(move |j| (i, j)))
                            .filter(|&(i, j)| (quad[i] ^ quad[j]).count_ones() == 2)
                            .map(|(i, j)| (quad[i].min(quad[j]), quad[i].max(quad[j])))
                            .collect();
                        squares.push(sides);
                    }
                }
            }
        }
        assert_eq!(squares.len(), 15);
        let mut edges: Vec<(u64, u64)> =
            squares.iter().flatten().copied().collect();
        edges.sort_unstable();
        edges.dedup();
        assert_eq!(edges.len(), 30);
        for _ in 0..1000 {
            let coloring: BTreeMap<(u64, u64), u32> =
                edges.iter().map(|&e| (e, rng.gen_range(0..2u32))).collect();
            let total: u32 = squares
                .iter()
                .map(|sq| sq.iter().map(|e| coloring[e]).sum::<u32>())
                .sum();
            assert_eq!(total % 2, 0);
        }
    }

    #[test]
    fn exact_implication_chain() {
        // bounds (2),(3),(4) plus identity (1) give
        // p_mono >= margin(n)/2, with margin(78) > 0
        // derivation: 2*(RA >= lb2) + (PAR >= lb3) - (sum = 1) - (1/2)*(p31 <= 14/15)
        let (n, m) = square_threshold();
        let (lb2, lb3, ub4) = lemma_bounds(n).unwrap();
        // 2*RA + PAR = 3 p_mono + (3/2) p31 + p_2adj + p_2opp
        //            = 2 p_mono + (1/2) p31 + (p_mono + p31 + p_2adj + p_2opp)
        // so 2 p_mono >= 2 lb2 + lb3 - 1 - (1/2) ub4 = margin(n)
        let margin_from_bounds = Ratio::new(2, 1) * lb2 + lb3
            - Ratio::new(1, 1)
            - Ratio::new(1, 2) * ub4;
        assert_eq!(margin_from_bounds, m);
        assert!(m / Ratio::new(2, 1) > Ratio::new(0, 1));
    }
}
