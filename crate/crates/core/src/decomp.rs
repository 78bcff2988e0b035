//! Exhaustive enumeration of the ordered decompositions appearing in the
//! wallcrossing sums.
//!
//! Every family is enumerated the same way: walk the compositions of the
//! rank into `l` positive parts, then range each degree over the finite
//! integer interval cut out by the slope window (wall and origin sets force
//! the degrees outright). Relational constraints between parts are applied
//! as a final filter.

use crate::lattice::{Charge, SidedRational, StabilityParam};
use crate::rational::{as_integer, ceil_i64, q_int, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DecompKind {
    Wall,
    Origin,
    BandPlus,
    BandMinus,
    BandFloor,
    /// `μ_{-δ}(α) < μ(αᵢ) < μ(α₁) ≤ μ̄₀`, the mirror image of `BandPlus`.
    BandReflected,
    /// `μ_{-δ}(α) < μ(αᵢ) < μ₀` for every part.
    BandBelowFloor,
    Nested,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Decomposition {
    pub parts: Vec<Charge>,
    pub kind: DecompKind,
}

impl Decomposition {
    pub fn total(&self) -> Charge {
        self.parts
            .iter()
            .copied()
            .reduce(|a, b| a + b)
            .expect("decomposition has at least one part")
    }
}

/// Upper end of a band window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bound {
    Finite(StabilityParam),
    Infinity,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BandVariant {
    /// `μ₀ ≤ μ(α₁) < μ(αᵢ) < μ_δ(α)`
    Plus,
    /// `μ₀ ≤ μ(α₁) ≤ μ(αᵢ) < μ_δ(α)`
    Minus,
    /// `μ₀ ≤ μ(αᵢ) < μ_δ(α)` for all parts
    Floor,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NegativeBandVariant {
    Reflected,
    BelowFloor,
}

/// All compositions of `total` into `parts` positive integers, lexicographic.
pub fn compositions(total: i64, parts: usize) -> Vec<Vec<i64>> {
    fn rec(rem: i64, left: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if left == 1 {
            if rem >= 1 {
                cur.push(rem);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        for first in 1..=(rem - left as i64 + 1) {
            cur.push(first);
            rec(rem - first, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if parts == 0 || total < parts as i64 {
        return out;
    }
    rec(total, parts, &mut Vec::with_capacity(parts), &mut out);
    out
}

/// Inclusive degree interval for one part; `None` means unbounded on that side.
type DegreeRange = (Option<i64>, Option<i64>);

/// Enumerate degree vectors for fixed ranks with per-part bounds and
/// `Σ eᵢ = total`. Panics if the resulting set would be infinite.
fn degree_vectors(ranks: &[i64], total: i64, bounds: &[DegreeRange]) -> Vec<Vec<i64>> {
    let l = ranks.len();
    // suffix sums of bounds for pruning
    let mut lo_suffix = vec![Some(0i64); l + 1];
    let mut hi_suffix = vec![Some(0i64); l + 1];
    for i in (0..l).rev() {
        lo_suffix[i] = lo_suffix[i + 1].and_then(|s| bounds[i].0.map(|b| s + b));
        hi_suffix[i] = hi_suffix[i + 1].and_then(|s| bounds[i].1.map(|b| s + b));
    }
    if lo_suffix[0].is_some_and(|lo| lo > total) || hi_suffix[0].is_some_and(|hi| hi < total) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(l);
    fn rec(
        i: usize,
        rem: i64,
        bounds: &[DegreeRange],
        lo_suffix: &[Option<i64>],
        hi_suffix: &[Option<i64>],
        cur: &mut Vec<i64>,
        out: &mut Vec<Vec<i64>>,
    ) {
        let l = bounds.len();
        if i + 1 == l {
            let (lo, hi) = bounds[i];
            if lo.is_none_or(|b| rem >= b) && hi.is_none_or(|b| rem <= b) {
                cur.push(rem);
                out.push(cur.clone());
                cur.pop();
            }
            return;
        }
        let lo = max_opt(bounds[i].0, hi_suffix[i + 1].map(|h| rem - h));
        let hi = min_opt(bounds[i].1, lo_suffix[i + 1].map(|s| rem - s));
        let (lo, hi) = match (lo, hi) {
            (Some(lo), Some(hi)) => (lo, hi),
            _ => panic!("unbounded degree range in decomposition enumeration"),
        };
        for e in lo..=hi {
            cur.push(e);
            rec(i + 1, rem - e, bounds, lo_suffix, hi_suffix, cur, out);
            cur.pop();
        }
    }
    rec(0, total, bounds, &lo_suffix, &hi_suffix, &mut cur, &mut out);
    out
}

fn max_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.max(b)),
        (x, None) | (None, x) => x,
    }
}

fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(a), Some(b)) => Some(a.min(b)),
        (x, None) | (None, x) => x,
    }
}

/// Generic driver: every rank composition, bounded degrees, then a filter.
fn enumerate<B, P>(alpha: &Charge, l: usize, kind: DecompKind, bounds: B, keep: P) -> Vec<Decomposition>
where
    B: Fn(usize, i64) -> DegreeRange,
    P: Fn(&[Charge]) -> bool,
{
    let mut out = Vec::new();
    for ranks in compositions(alpha.rank(), l) {
        let b: Vec<DegreeRange> = ranks.iter().enumerate().map(|(i, &r)| bounds(i, r)).collect();
        for degrees in degree_vectors(&ranks, alpha.degree(), &b) {
            let parts: Vec<Charge> = ranks
                .iter()
                .zip(&degrees)
                .map(|(&r, &e)| Charge::new(r, e))
                .collect();
            if keep(&parts) {
                out.push(Decomposition { parts, kind });
            }
        }
    }
    out
}

fn forced_degree(rank: i64, slope: &Q) -> Option<i64> {
    as_integer(&(slope * q_int(rank)))
}

/// `S^{(l,j)}_{δ_c}(α)`: parts other than `j` (1-based) have slope `μ_c(α)`,
/// part `j` has `δ_c`-slope `μ_c(α)`. With `j = l` this is the wall set of
/// the positive-wall formula.
pub fn enum_wall_decomps(alpha: &Charge, delta_c: &Q, l: usize, j: usize) -> Vec<Decomposition> {
    assert!(l >= 1 && (1..=l).contains(&j), "need 1 <= j <= l");
    let mu_c = (q_int(alpha.degree()) + delta_c) / q_int(alpha.rank());
    let mut out = Vec::new();
    for ranks in compositions(alpha.rank(), l) {
        let mut parts = Vec::with_capacity(l);
        let mut used = 0i64;
        let mut ok = true;
        for (i, &r) in ranks.iter().enumerate() {
            if i + 1 == j {
                parts.push(Charge::new(r, 0));
                continue;
            }
            match forced_degree(r, &mu_c) {
                Some(e) => {
                    used += e;
                    parts.push(Charge::new(r, e));
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        let rj = ranks[j - 1];
        parts[j - 1] = Charge::new(rj, alpha.degree() - used);
        debug_assert_eq!(
            (q_int(parts[j - 1].degree()) + delta_c) / q_int(rj),
            mu_c
        );
        out.push(Decomposition {
            parts,
            kind: DecompKind::Wall,
        });
    }
    out
}

/// `S^{(l)}_0(α)`: every part has slope `μ(α)`.
pub fn enum_origin_decomps(alpha: &Charge, l: usize) -> Vec<Decomposition> {
    let mu = alpha.slope();
    compositions(alpha.rank(), l)
        .into_iter()
        .filter_map(|ranks| {
            ranks
                .iter()
                .map(|&r| forced_degree(r, &mu).map(|e| Charge::new(r, e)))
                .collect::<Option<Vec<_>>>()
        })
        .map(|parts| Decomposition {
            parts,
            kind: DecompKind::Origin,
        })
        .collect()
}

/// Band sets between the slope floor `μ₀` and `μ_δ(α)` (or unbounded above).
pub fn enum_band_decomps(
    alpha: &Charge,
    variant: BandVariant,
    bound: &Bound,
    mu0: &Q,
    l: usize,
) -> Vec<Decomposition> {
    let min_l = if variant == BandVariant::Floor { 1 } else { 2 };
    if l < min_l {
        return Vec::new();
    }
    let top = match bound {
        Bound::Finite(delta) => Some(alpha.delta_slope(delta)),
        Bound::Infinity => None,
    };
    let bounds = |_: usize, r: i64| -> DegreeRange {
        (
            Some(ceil_i64(&(mu0 * q_int(r)))),
            top.as_ref().map(|t| t.max_degree_below(r)),
        )
    };
    let kind = match variant {
        BandVariant::Plus => DecompKind::BandPlus,
        BandVariant::Minus => DecompKind::BandMinus,
        BandVariant::Floor => DecompKind::BandFloor,
    };
    enumerate(alpha, l, kind, bounds, |parts| {
        let first = parts[0].slope();
        match variant {
            BandVariant::Plus => parts[1..].iter().all(|p| p.slope() > first),
            BandVariant::Minus => parts[1..].iter().all(|p| p.slope() >= first),
            BandVariant::Floor => true,
        }
    })
}

/// Mirror-image band sets used on the negative side of the origin.
///
/// `bound` is the magnitude of the negative parameter: `Finite(δ)` gives the
/// lower window `μ_{-δ}(α) < μ(αᵢ)`, `Infinity` drops it.
pub fn enum_negative_band_decomps(
    alpha: &Charge,
    variant: NegativeBandVariant,
    bound: &Bound,
    mu0: &Q,
    mu0_bar: &Q,
    l: usize,
) -> Vec<Decomposition> {
    if l == 0 || (variant == NegativeBandVariant::Reflected && l < 2) {
        return Vec::new();
    }
    let bottom = match bound {
        Bound::Finite(delta) => Some(alpha.delta_slope(&delta.neg())),
        Bound::Infinity => None,
    };
    let ceiling = match variant {
        NegativeBandVariant::Reflected => SidedRational::plus(mu0_bar.clone()),
        NegativeBandVariant::BelowFloor => SidedRational::exact(mu0.clone()),
    };
    let bounds = |_: usize, r: i64| -> DegreeRange {
        (
            bottom.as_ref().map(|b| b.min_degree_above(r)),
            Some(ceiling.max_degree_below(r)),
        )
    };
    let kind = match variant {
        NegativeBandVariant::Reflected => DecompKind::BandReflected,
        NegativeBandVariant::BelowFloor => DecompKind::BandBelowFloor,
    };
    enumerate(alpha, l, kind, bounds, |parts| match variant {
        NegativeBandVariant::Reflected => {
            let first = parts[0].slope();
            parts[1..].iter().all(|p| p.slope() < first)
        }
        NegativeBandVariant::BelowFloor => true,
    })
}

/// Tuples `(α₁, η₁,₁ … η_{n,l_n})` with block slopes strictly increasing from
/// `μ(α₁) ≥ μ₀` up to `μ_δ(α)`, equal slopes inside each block.
pub fn enum_nested_decomps(
    alpha: &Charge,
    delta: &StabilityParam,
    mu0: &Q,
    lengths: &[usize],
) -> Vec<Decomposition> {
    if lengths.is_empty() || lengths.iter().any(|&l| l == 0) {
        return Vec::new();
    }
    let total_parts = 1 + lengths.iter().sum::<usize>();
    let top = alpha.delta_slope(delta);
    let bounds = |_: usize, r: i64| -> DegreeRange {
        (Some(ceil_i64(&(mu0 * q_int(r)))), Some(top.max_degree_below(r)))
    };
    enumerate(alpha, total_parts, DecompKind::Nested, bounds, |parts| {
        let mut prev = parts[0].slope();
        let mut idx = 1;
        for &len in lengths {
            let block = &parts[idx..idx + len];
            let s = block[0].slope();
            if s <= prev || block.iter().any(|p| p.slope() != s) {
                return false;
            }
            prev = s;
            idx += len;
        }
        true
    })
}

/// The Harder–Narasimhan ordering test used when inverting the wall relation:
/// for every cut `1 ≤ k < l`, compare the left and right partial sums, using
/// the `δ₊`-slope on the side that contains the framed part `j` (1-based).
pub fn split_ordering_holds(parts: &[Charge], j: usize, delta_plus: &StabilityParam) -> bool {
    let l = parts.len();
    (1..l).all(|k| {
        let left = parts[..k].iter().copied().reduce(|a, b| a + b).unwrap();
        let right = parts[k..].iter().copied().reduce(|a, b| a + b).unwrap();
        let lhs = if k < j {
            SidedRational::exact(left.slope())
        } else {
            left.delta_slope(delta_plus)
        };
        let rhs = if k >= j {
            SidedRational::exact(right.slope())
        } else {
            right.delta_slope(delta_plus)
        };
        lhs < rhs
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q_frac;

    fn degrees(ds: &[Decomposition]) -> Vec<Vec<(i64, i64)>> {
        let mut v: Vec<_> = ds
            .iter()
            .map(|d| d.parts.iter().map(|p| (p.rank(), p.degree())).collect())
            .collect();
        v.sort();
        v
    }

    #[test]
    fn compositions_count() {
        assert_eq!(compositions(5, 2).len(), 4);
        assert_eq!(compositions(5, 3).len(), 6);
        assert!(compositions(2, 3).is_empty());
        assert_eq!(compositions(3, 1), vec![vec![3]]);
    }

    #[test]
    fn wall_examples() {
        let d = enum_wall_decomps(&Charge::new(2, -1), &q_int(1), 2, 2);
        assert_eq!(degrees(&d), vec![vec![(1, 0), (1, -1)]]);
        assert!(enum_wall_decomps(&Charge::new(1, 4), &q_int(2), 2, 2).is_empty());
        let d = enum_wall_decomps(&Charge::new(3, 0), &q_int(3), 3, 3);
        assert_eq!(degrees(&d), vec![vec![(1, 1), (1, 1), (1, -2)]]);
    }

    #[test]
    fn origin_examples() {
        assert_eq!(
            degrees(&enum_origin_decomps(&Charge::new(2, 0), 2)),
            vec![vec![(1, 0), (1, 0)]]
        );
        assert!(enum_origin_decomps(&Charge::new(2, 1), 2).is_empty());
        assert_eq!(
            degrees(&enum_origin_decomps(&Charge::new(2, 4), 1)),
            vec![vec![(2, 4)]]
        );
    }

    #[test]
    fn band_examples() {
        let floor = enum_band_decomps(
            &Charge::new(2, -1),
            BandVariant::Floor,
            &Bound::Finite(SidedRational::exact(q_frac(7, 2))),
            &q_int(-2),
            2,
        );
        assert_eq!(
            degrees(&floor),
            vec![
                vec![(1, -2), (1, 1)],
                vec![(1, -1), (1, 0)],
                vec![(1, 0), (1, -1)],
                vec![(1, 1), (1, -2)]
            ]
        );
        let plus = enum_band_decomps(&Charge::new(2, 0), BandVariant::Plus, &Bound::Infinity, &q_int(0), 2);
        assert!(plus.is_empty());
        let too_long = enum_band_decomps(&Charge::new(2, 0), BandVariant::Floor, &Bound::Infinity, &q_int(-3), 3);
        assert!(too_long.is_empty());
    }

    #[test]
    fn nested_examples() {
        let d = enum_nested_decomps(
            &Charge::new(2, -1),
            &SidedRational::minus(q_frac(7, 2)),
            &q_int(-2),
            &[1],
        );
        assert_eq!(degrees(&d), vec![vec![(1, -2), (1, 1)], vec![(1, -1), (1, 0)]]);
        assert!(enum_nested_decomps(&Charge::new(2, -1), &SidedRational::minus(q_int(9)), &q_int(-2), &[2]).is_empty());
        let d = enum_nested_decomps(&Charge::new(3, 0), &SidedRational::minus(q_int(4)), &q_int(-1), &[1, 1]);
        assert_eq!(degrees(&d), vec![vec![(1, -1), (1, 0), (1, 1)]]);
    }
}
