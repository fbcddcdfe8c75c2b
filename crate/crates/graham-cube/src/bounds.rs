//! Exact small-tower arithmetic: up-arrow expressions, a sound partial
//! comparator, Shelah's Hales-Jewett recursion, and the bound chains for
//! HJ(4,2,6) and the n(k) recursion.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};

/// Upper bound on the bit size of any exactly evaluated integer.
const MAX_BITS: u64 = 10_000_000;

/// `Nat(c)`, `Tet(b, h)` meaning `b^^h`, or `TriArrow(b, c)` meaning
/// `b^^^c`. Heights are themselves expressions so that nested towers like
/// `2^^(2^^9)` are representable.
#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub enum TowerExpr {
    Nat(BigUint),
    Tet { base: u32, height: Box<TowerExpr> },
    TriArrow { base: u32, count: u32 },
}

impl TowerExpr {
    pub fn nat(v: u64) -> TowerExpr {
        TowerExpr::Nat(BigUint::from(v))
    }

    pub fn tet(base: u32, height: TowerExpr) -> TowerExpr {
        TowerExpr::Tet { base, height: Box::new(height) }
    }

    /// `b^^h` with a plain numeric height.
    pub fn tower(base: u32, height: u64) -> TowerExpr {
        TowerExpr::tet(base, TowerExpr::nat(height))
    }
}

impl fmt::Display for TowerExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TowerExpr::Nat(v) => write!(f, "{v}"),
            TowerExpr::Tet { base, height } => match height.as_ref() {
                TowerExpr::Nat(v) => write!(f, "{base}^^{v}"),
                h => write!(f, "{base}^^({h})"),
            },
            TowerExpr::TriArrow { base, count } => write!(f, "{base}^^^{count}"),
        }
    }
}

/// Parses the ASCII rendering: `123`, `2^^9`, `2^^(2^^9)`, `2^^^6`.
pub fn parse_expr(s: &str) -> Result<TowerExpr> {
    fn parse_inner(s: &str) -> Result<TowerExpr> {
        let s = s.trim();
        if let Some(idx) = s.find("^^^") {
            let base: u32 = s[..idx]
                .parse()
                .map_err(|_| Error::Parse(format!("bad base in {s:?}")))?;
            let count: u32 = s[idx + 3..]
                .parse()
                .map_err(|_| Error::Parse(format!("bad arrow count in {s:?}")))?;
            return Ok(TowerExpr::TriArrow { base, count });
        }
        if let Some(idx) = s.find("^^") {
            let base: u32 = s[..idx]
                .parse()
                .map_err(|_| Error::Parse(format!("bad base in {s:?}")))?;
            let rest = s[idx + 2..].trim();
            let height = if let Some(inner) = rest.strip_prefix('(') {
                let inner = inner
                    .strip_suffix(')')
                    .ok_or_else(|| Error::Parse(format!("unbalanced parens in {s:?}")))?;
                parse_inner(inner)?
            } else {
                TowerExpr::Nat(
                    rest.parse().map_err(|_| Error::Parse(format!("bad height in {s:?}")))?,
                )
            };
            return Ok(TowerExpr::tet(base, height));
        }
        Ok(TowerExpr::Nat(
            s.parse().map_err(|_| Error::Parse(format!("not a tower expression: {s:?}")))?,
        ))
    }
    parse_inner(s)
}

fn checked_pow(base: u32, exp: &BigUint) -> Result<BigUint> {
    if base < 2 {
        return Err(Error::OutOfValidity("tower base must be >= 2".into()));
    }
    let e = exp.to_u64().ok_or_else(|| {
        Error::Infeasible(format!("exponent of {exp} bits does not fit in a machine word"))
    })?;
    let bits = e.saturating_mul(32 - (base.leading_zeros() as u64));
    if bits > MAX_BITS {
        return Err(Error::Infeasible(format!(
            "result would need about {bits} bits (limit {MAX_BITS})"
        )));
    }
    let e32 = u32::try_from(e)
        .map_err(|_| Error::Infeasible(format!("exponent {e} too large")))?;
    Ok(BigUint::from(base).pow(e32))
}

/// `base^^height` exactly, with the convention `b^^0 = 1`.
pub fn tet_eval(base: u32, height: u32) -> Result<BigUint> {
    let mut v = BigUint::one();
    for _ in 0..height {
        v = checked_pow(base, &v)?;
    }
    Ok(v)
}

/// Exact value of an expression, when the guard allows it.
pub fn expr_eval(e: &TowerExpr) -> Result<BigUint> {
    match e {
        TowerExpr::Nat(v) => Ok(v.clone()),
        TowerExpr::Tet { base, height } => {
            let h = expr_eval(height)?;
            let h32 = h
                .to_u32()
                .ok_or_else(|| Error::Infeasible(format!("tower height {h} too large")))?;
            tet_eval(*base, h32)
        }
        TowerExpr::TriArrow { .. } => expr_eval(&expand_triarrow(e)?),
    }
}

/// Rewrites `b^^^c` as the nested tower `b^^(b^^(...^^b))` with `c` levels.
pub fn expand_triarrow(e: &TowerExpr) -> Result<TowerExpr> {
    match e {
        TowerExpr::TriArrow { base, count } => {
            if *count == 0 {
                return Ok(TowerExpr::nat(1));
            }
            let mut acc = TowerExpr::nat(*base as u64);
            for _ in 1..*count {
                acc = TowerExpr::tet(*base, acc);
            }
            Ok(acc)
        }
        _ => Ok(e.clone()),
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Comparison {
    Lt,
    Eq,
    Gt,
    Unknown,
}

/// Sound partial order on normalized expressions: exact evaluation where the
/// guard allows, structural height comparison for equal-base towers, and
/// magnitude arguments for towers too large to evaluate. Returns `Unknown`
/// rather than guessing.
pub fn compare(e1: &TowerExpr, e2: &TowerExpr) -> Comparison {
    let e1 = match e1 {
        TowerExpr::TriArrow { .. } => expand_triarrow(e1).expect("triarrow expands"),
        _ => e1.clone(),
    };
    let e2 = match e2 {
        TowerExpr::TriArrow { .. } => expand_triarrow(e2).expect("triarrow expands"),
        _ => e2.clone(),
    };
    if let (Ok(a), Ok(b)) = (expr_eval(&e1), expr_eval(&e2)) {
        return match a.cmp(&b) {
            std::cmp::Ordering::Less => Comparison::Lt,
            std::cmp::Ordering::Equal => Comparison::Eq,
            std::cmp::Ordering::Greater => Comparison::Gt,
        };
    }
    match (&e1, &e2) {
        // same base: b^^h is strictly increasing in h for b >= 2
        (
            TowerExpr::Tet { base: b1, height: h1 },
            TowerExpr::Tet { base: b2, height: h2 },
        ) if b1 == b2 => compare(h1, h2),
        // a tower too large to evaluate dominates any representable number
        (TowerExpr::Tet { .. }, TowerExpr::Nat(_)) if expr_eval(&e1).is_err() => Comparison::Gt,
        (TowerExpr::Nat(_), TowerExpr::Tet { .. }) if expr_eval(&e2).is_err() => Comparison::Lt,
        _ => Comparison::Unknown,
    }
}

/// One step of a derivation: the expression reached, the rewrite rule
/// applied, and a short tag naming the rule family.
#[derive(Clone, Debug, Serialize)]
pub struct TraceStep {
    pub expr: String,
    pub rule: String,
    pub tag: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct DerivationTrace {
    pub steps: Vec<TraceStep>,
}

impl DerivationTrace {
    fn push(&mut self, expr: &TowerExpr, rule: &str, tag: &str) {
        self.steps.push(TraceStep {
            expr: expr.to_string(),
            rule: rule.to_string(),
            tag: tag.to_string(),
        });
    }

    pub fn render(&self) -> String {
        self.steps
            .iter()
            .enumerate()
            .map(|(i, s)| format!("{}. {}  [{}: {}]", i + 1, s.expr, s.tag, s.rule))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// Shelah's recursion `f(1,k) = k+1`, `f(l+1,k) = k^(f(l,k)^(2l)) + 1`,
/// evaluated exactly while the bit-size guard holds.
pub fn shelah_f_exact(l: u32, k: u32) -> Result<BigUint> {
    if l == 0 || k == 0 {
        return Err(Error::OutOfValidity(format!("need l >= 1 and k >= 1, got l={l} k={k}")));
    }
    let mut f = BigUint::from(k + 1);
    for step in 1..l {
        // f_{step+1} = k^(f_step^(2*step)) + 1
        let e = f.to_u64().ok_or_else(|| {
            Error::Infeasible(format!("f({step},{k}) of {} bits blows the next exponent", f.bits()))
        })?;
        let exp = BigUint::from(e).pow(2 * step);
        f = checked_pow(k, &exp)? + BigUint::one();
    }
    Ok(f)
}

/// The tower bound `f(l,k) < k^^(2l)`, valid under the proof's side condition
/// `k > 2l`.
pub fn shelah_f_bound(l: u32, k: u32) -> Result<TowerExpr> {
    if k <= 2 * l {
        return Err(Error::OutOfValidity(format!(
            "side condition k > 2l violated: k={k}, 2l={}",
            2 * l
        )));
    }
    Ok(TowerExpr::tower(k, 2 * l as u64))
}

/// `e + 1` as a bound: exact on naturals; for a tower, one application of
/// the addition-absorption bullet `a + 2^^k < 2^^(k+1)` (for `a < 2^^k`)
/// bumps the height instead.
fn succ_bound(e: &TowerExpr, trace: &mut DerivationTrace) -> TowerExpr {
    match e {
        TowerExpr::Nat(v) => TowerExpr::Nat(v + BigUint::one()),
        TowerExpr::Tet { base, height } => {
            let bumped = TowerExpr::tet(*base, succ_bound(height, trace));
            trace.push(
                &bumped,
                &format!("a + {e} < {bumped} for a < {e}"),
                "absorb-add",
            );
            bumped
        }
        TowerExpr::TriArrow { .. } => {
            let expanded = expand_triarrow(e).expect("triarrow expands");
            succ_bound(&expanded, trace)
        }
    }
}

/// `m + 3` as a bound, absorbing the constant into the tower height when `m`
/// is itself a tower.
fn add3_bound(m: &TowerExpr, trace: &mut DerivationTrace) -> TowerExpr {
    match m {
        TowerExpr::Nat(v) => TowerExpr::Nat(v + BigUint::from(3u32)),
        _ => succ_bound(m, trace),
    }
}

/// One Hales-Jewett color-count step: from `HJ(t,2,d) <= 2^^m` to
/// `HJ(t+1,2,d) <= 2^^2^^(m+3)`.
pub fn hj_step_bound(m: &TowerExpr) -> (TowerExpr, DerivationTrace) {
    let mut trace = DerivationTrace::default();
    let inner = add3_bound(m, &mut trace);
    let out = TowerExpr::tet(2, TowerExpr::tet(2, inner));
    trace.push(&out, &format!("HJ step: 2^^m to 2^^2^^(m+3) with m = {m}"), "hj-step");
    (out, trace)
}

/// Smallest `m` with `v <= 2^^m`, for exactly evaluable `v`.
fn tower_height_of(v: &BigUint) -> u32 {
    let mut m = 0;
    loop {
        if let Ok(t) = tet_eval(2, m) {
            if &t >= v {
                return m;
            }
        } else {
            panic!("value too large for exact tower-height search");
        }
        m += 1;
    }
}

/// The full chain from `HJ(2,2,d) <= 2^(2^(2d))` through two color-count
/// steps, for the two seeds that occur: d = 6 and d = 2^^18.
pub fn hj_chain(d_seed: &TowerExpr) -> Result<(TowerExpr, DerivationTrace)> {
    let mut trace = DerivationTrace::default();
    let m0 = match d_seed {
        TowerExpr::Nat(d) => {
            // evaluate 2^(2^(2d)) and round up to the nearest tower exactly
            let d = d
                .to_u64()
                .ok_or_else(|| Error::OutOfValidity("numeric seed too large".into()))?;
            let inner = checked_pow(2, &BigUint::from(2 * d))?;
            let v = checked_pow(2, &inner)?;
            let m = tower_height_of(&v);
            let bound = TowerExpr::tower(2, m as u64);
            trace.push(
                &bound,
                &format!("2^(2^(2*{d})) = 2^(2^{}) < 2^^{m} by exact evaluation", 2 * d),
                "exact",
            );
            TowerExpr::nat(m as u64)
        }
        TowerExpr::Tet { base: 2, height } => {
            let h = match height.as_ref() {
                TowerExpr::Nat(v) => v
                    .to_u64()
                    .ok_or_else(|| Error::OutOfValidity("tower seed height too large".into()))?,
                _ => return Err(Error::OutOfValidity("seed must be Nat or 2^^k".into())),
            };
            // 2d = 2 * 2^^h < 2^^(h+1) by multiplication absorption, then
            // each exponentiation wraps one more level
            let m = h + 3;
            let d_str = format!("2^^{h}");
            trace.push(
                &TowerExpr::tower(2, h + 1),
                &format!("2 * {d_str} < 2^^{} for 2 < {d_str}", h + 1),
                "absorb-mul",
            );
            trace.push(
                &TowerExpr::tower(2, h + 2),
                &format!("2^(2^^{}) = 2^^{}", h + 1, h + 2),
                "tower-def",
            );
            trace.push(
                &TowerExpr::tower(2, m),
                &format!("2^(2^^{}) = 2^^{}", h + 2, m),
                "tower-def",
            );
            TowerExpr::nat(m)
        }
        _ => return Err(Error::OutOfValidity(format!("unsupported seed {d_seed}"))),
    };
    let (b1, t1) = hj_step_bound(&m0);
    trace.steps.extend(t1.steps);
    let TowerExpr::Tet { height: m1, .. } = &b1 else { unreachable!("hj step returns a tower") };
    let (b2, t2) = hj_step_bound(m1);
    trace.steps.extend(t2.steps);
    Ok((b2, trace))
}

/// The direction-count recursion: `n(1) = 1` and `n(k) <= 2^^m` implies
/// `n(k+1) <= 2^^(m+3)`. Returns the bound for `n(k)` with its unfolding.
pub fn nk_bound(k: u32) -> Result<(TowerExpr, DerivationTrace)> {
    if k == 0 {
        return Err(Error::OutOfValidity("k must be >= 1".into()));
    }
    let mut trace = DerivationTrace::default();
    if k == 1 {
        let e = TowerExpr::nat(1);
        trace.push(&e, "n(1) = 1 = 2^^0: a single direction suffices", "base-case");
        return Ok((e, trace));
    }
    let mut m: u64 = 0;
    trace.push(&TowerExpr::nat(1), "n(1) = 1 = 2^^0", "base-case");
    for step in 1..k {
        m += 3;
        let bound = TowerExpr::tower(2, m);
        let mut rule = format!(
            "n({}) <= 2^(2^(2*n({step}))) <= 2^(2^(2^n({step}))) <= 2^^{m}",
            step + 1
        );
        if let Ok(v) = expr_eval(&bound) {
            if v.bits() <= 64 {
                rule.push_str(&format!(" = {v}"));
            }
        }
        trace.push(&bound, &rule, "recursion");
    }
    Ok((TowerExpr::tower(2, m), trace))
}
