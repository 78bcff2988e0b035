//! Charges, slopes, Euler weights and wall enumeration.
//!
//! A stability parameter is an exact rational with an optional
//! infinitesimal side tag: `(v, Plus)` stands for `v + ε` and `(v, Minus)`
//! for `v - ε`. Every comparison in the wallcrossing formulas is against a
//! rational slope, so the tag carries all the information a generic real
//! parameter would.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::ParseError;
use crate::rational::{q_frac, q_int, sign_pow, Q};

/// Numerical type `(r, e)` of a Higgs object; the rank is always at least one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Charge {
    rank: i64,
    degree: i64,
}

impl Charge {
    /// Panics if `rank < 1`; use [`Charge::try_new`] for untrusted input.
    pub fn new(rank: i64, degree: i64) -> Self {
        Self::try_new(rank, degree).expect("charge rank must be >= 1")
    }

    pub fn try_new(rank: i64, degree: i64) -> Option<Self> {
        (rank >= 1).then_some(Charge { rank, degree })
    }

    pub fn rank(&self) -> i64 {
        self.rank
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn slope(&self) -> Q {
        q_frac(self.degree, self.rank)
    }

    /// `(e + δ) / r`, keeping the side tag of `δ`.
    pub fn delta_slope(&self, delta: &StabilityParam) -> SidedRational {
        SidedRational {
            value: (q_int(self.degree) + &delta.value) / q_int(self.rank),
            side: delta.side,
        }
    }

    /// `χ = e - r(g-1)`, the pairing of a framed object with this Higgs class.
    pub fn chi(&self, genus: i64) -> i64 {
        self.degree - self.rank * (genus - 1)
    }

    pub fn euler_weight(&self, genus: i64) -> EulerWeight {
        euler_weight(self, genus)
    }

    /// `(r, e) ↦ (r, 2r(g-1) - e)`; an involution exchanging `χ` and `-χ`.
    pub fn reflect(&self, genus: i64) -> Charge {
        Charge {
            rank: self.rank,
            degree: 2 * self.rank * (genus - 1) - self.degree,
        }
    }

    pub fn checked_sub(&self, other: &Charge) -> Option<Charge> {
        Charge::try_new(self.rank - other.rank, self.degree - other.degree)
    }
}

impl Add for Charge {
    type Output = Charge;
    fn add(self, rhs: Charge) -> Charge {
        Charge {
            rank: self.rank + rhs.rank,
            degree: self.degree + rhs.degree,
        }
    }
}

impl Mul<Charge> for i64 {
    type Output = Charge;
    fn mul(self, rhs: Charge) -> Charge {
        Charge::new(self * rhs.rank, self * rhs.degree)
    }
}

impl fmt::Display for Charge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.rank, self.degree)
    }
}

impl FromStr for Charge {
    type Err = ParseError;

    /// Parses `"r,e"` (optionally parenthesized).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseError::Charge(s.to_string());
        let t = s.trim();
        let t = t
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(t);
        let (r, e) = t.split_once(',').ok_or_else(bad)?;
        let r: i64 = r.trim().parse().map_err(|_| bad())?;
        let e: i64 = e.trim().parse().map_err(|_| bad())?;
        // Keep degrees well inside i64 so rank/degree products cannot overflow.
        const LIMIT: i64 = 1 << 40;
        if !(1..LIMIT).contains(&r) || e.abs() >= LIMIT {
            return Err(bad());
        }
        Ok(Charge::new(r, e))
    }
}

/// Framed (`v = 1`, ADHM) or unframed (`v = 0`, Higgs) class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FramedCharge {
    pub charge: Charge,
    pub framed: bool,
}

/// Infinitesimal offset attached to a rational.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    Minus,
    Exact,
    Plus,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Minus => Side::Plus,
            Side::Exact => Side::Exact,
            Side::Plus => Side::Minus,
        }
    }
}

/// Rational with a side tag, totally ordered by `(value, side)`, so that
/// `(v, Minus) < (v, Exact) < (v, Plus)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SidedRational {
    pub value: Q,
    pub side: Side,
}

pub type StabilityParam = SidedRational;
pub type Slope = Q;

impl SidedRational {
    pub fn exact(value: Q) -> Self {
        SidedRational {
            value,
            side: Side::Exact,
        }
    }

    pub fn plus(value: Q) -> Self {
        SidedRational {
            value,
            side: Side::Plus,
        }
    }

    pub fn minus(value: Q) -> Self {
        SidedRational {
            value,
            side: Side::Minus,
        }
    }

    pub fn is_generic(&self) -> bool {
        self.side != Side::Exact
    }

    pub fn neg(&self) -> Self {
        SidedRational {
            value: -&self.value,
            side: self.side.flip(),
        }
    }

    /// Compare against an exact rational.
    pub fn cmp_q(&self, x: &Q) -> Ordering {
        self.value.cmp(x).then(self.side.cmp(&Side::Exact))
    }

    /// `x < self`.
    pub fn exceeds(&self, x: &Q) -> bool {
        self.cmp_q(x) == Ordering::Greater
    }

    /// `x > self`.
    pub fn below(&self, x: &Q) -> bool {
        self.cmp_q(x) == Ordering::Less
    }

    /// Largest integer `e` with `e / r < self`.
    pub fn max_degree_below(&self, rank: i64) -> i64 {
        let scaled = &self.value * q_int(rank);
        if self.side == Side::Plus {
            crate::rational::floor_i64(&scaled)
        } else {
            crate::rational::ceil_i64(&scaled) - 1
        }
    }

    /// Smallest integer `e` with `e / r > self`.
    pub fn min_degree_above(&self, rank: i64) -> i64 {
        let scaled = &self.value * q_int(rank);
        if self.side == Side::Minus {
            crate::rational::ceil_i64(&scaled)
        } else {
            crate::rational::floor_i64(&scaled) + 1
        }
    }
}

impl fmt::Display for SidedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.side {
            Side::Minus => "-",
            Side::Exact => "",
            Side::Plus => "+",
        };
        write!(f, "{}{}", crate::rational::format_q(&self.value), tag)
    }
}

pub fn slope(alpha: &Charge) -> Slope {
    alpha.slope()
}

pub fn delta_slope(alpha: &Charge, delta: &StabilityParam) -> SidedRational {
    alpha.delta_slope(delta)
}

/// `χ` and the signed factor `w = (-1)^χ χ` entering every wallcrossing product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EulerWeight {
    pub chi: i64,
    pub weight: i64,
}

pub fn euler_weight(alpha: &Charge, genus: i64) -> EulerWeight {
    let chi = alpha.chi(genus);
    EulerWeight {
        chi,
        weight: sign_pow(chi) * chi,
    }
}

/// Critical values `δ_c ∈ (0, δ_max]` of `alpha`, ascending.
///
/// A wall sits at `δ_c = r·s - e` whenever some proper rank `r₁ < r` admits
/// an integral degree `r₁·s`, i.e. a Higgs summand of slope `s` splits off.
/// With a slope floor, only `s ≥ floor` is kept.
pub fn enumerate_walls(alpha: &Charge, floor: Option<&Q>, delta_max: &Q) -> Vec<Q> {
    let (r, e) = (alpha.rank(), alpha.degree());
    let mut walls = BTreeSet::new();
    if !delta_max.is_positive() {
        return Vec::new();
    }
    for r1 in 1..r {
        // s = e1/r1 with e + 0 < r s ≤ e + δ_max
        let lo = crate::rational::floor_i64(&q_frac(r1 * e, r)) + 1;
        let hi = crate::rational::floor_i64(&(q_int(r1) * (q_int(e) + delta_max) / q_int(r)));
        for e1 in lo..=hi {
            let s = q_frac(e1, r1);
            if floor.is_some_and(|f| &s < f) {
                continue;
            }
            let dc = &s * q_int(r) - q_int(e);
            debug_assert!(dc.is_positive() && &dc <= delta_max);
            walls.insert(dc);
        }
    }
    walls.into_iter().collect()
}

/// Whether `delta > 0` is a wall of `alpha` under the given slope floor.
pub fn is_critical(alpha: &Charge, delta: &Q, floor: Option<&Q>) -> bool {
    if !delta.is_positive() {
        return delta.is_zero();
    }
    let s = (q_int(alpha.degree()) + delta) / q_int(alpha.rank());
    if floor.is_some_and(|f| &s < f) {
        return false;
    }
    (1..alpha.rank()).any(|r1| (&s * q_int(r1)).is_integer())
}

/// Walls immediately below and above `delta` (for diagnostics).
pub fn nearest_walls(alpha: &Charge, delta: &Q, floor: Option<&Q>, delta_max: &Q) -> (Option<Q>, Option<Q>) {
    let reach = if delta > delta_max { delta.clone() } else { delta_max.clone() } + q_int(1);
    let walls = enumerate_walls(alpha, floor, &reach);
    let below = walls.iter().filter(|w| *w < delta).next_back().cloned();
    let above = walls.iter().find(|w| *w > delta).cloned();
    (below, above)
}
