//! Laurent polynomials and rational functions in `q` with denominators
//! `∏ (1 - (-q)^k)^{m_k}`, and the generating functions
//! `Z(q)_r = Σ_e q^{e - r(g-1)} A(r, e)`.
//!
//! Equality is decided by cross-multiplication, never by factoring.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde_json::{Map, Value};

use crate::decomp::compositions;
use crate::error::EngineError;
use crate::lattice::{Charge, Side, StabilityParam};
use crate::rational::{ceil_i64, floor_i64, format_q, inv_factorial, q_frac, q_int, sign_pow, Q};
use crate::theory::Theory;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, Q>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::monomial(0, Q::one())
    }

    pub fn monomial(exp: i64, c: Q) -> Self {
        let mut p = LaurentPoly::zero();
        p.add_coeff(exp, c);
        p
    }

    /// `(-q)^n`.
    pub fn neg_q_pow(n: i64) -> Self {
        LaurentPoly::monomial(n, q_int(sign_pow(n)))
    }

    pub fn from_coeffs(coeffs: impl IntoIterator<Item = (i64, Q)>) -> Self {
        let mut p = LaurentPoly::zero();
        for (e, c) in coeffs {
            p.add_coeff(e, c);
        }
        p
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, Q> {
        &self.coeffs
    }

    pub fn coeff(&self, exp: i64) -> Q {
        self.coeffs.get(&exp).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn add_coeff(&mut self, exp: i64, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(exp).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&exp);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.coeffs {
            out.add_coeff(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&q_int(-1)))
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &other.coeffs {
                out.add_coeff(e1 + e2, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(LaurentPoly::one(), |acc, _| acc.mul(self))
    }

    /// `q d/dq`.
    pub fn theta(&self) -> Self {
        LaurentPoly::from_coeffs(self.coeffs.iter().map(|(e, c)| (*e, c * q_int(*e))))
    }

    /// `q ↦ q⁻¹`.
    pub fn invert_q(&self) -> Self {
        LaurentPoly::from_coeffs(self.coeffs.iter().map(|(e, c)| (-e, c.clone())))
    }

    /// Multiply by `q^n`.
    pub fn shift(&self, n: i64) -> Self {
        LaurentPoly::from_coeffs(self.coeffs.iter().map(|(e, c)| (e + n, c.clone())))
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        for (e, c) in &self.coeffs {
            m.insert(e.to_string(), Value::from(format_q(c)));
        }
        Value::Object(m)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .map(|(e, c)| format!("({})q^{e}", format_q(c)))
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// `1 - (-q)^k`.
fn cyclo(k: u32) -> LaurentPoly {
    LaurentPoly::one().sub(&LaurentPoly::neg_q_pow(k as i64))
}

/// `∏ (1 - (-q)^k)^{m_k}`, keyed by `k`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Denominator {
    factors: BTreeMap<u32, u32>,
}

impl Denominator {
    pub fn one() -> Self {
        Denominator::default()
    }

    pub fn factor(k: u32) -> Self {
        assert!(k >= 1, "factor 1 - (-q)^0 vanishes");
        Denominator {
            factors: BTreeMap::from([(k, 1)]),
        }
    }

    pub fn factors(&self) -> &BTreeMap<u32, u32> {
        &self.factors
    }

    pub fn expand(&self) -> LaurentPoly {
        self.factors
            .iter()
            .fold(LaurentPoly::one(), |acc, (k, m)| acc.mul(&cyclo(*k).pow(*m)))
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, m) in &other.factors {
            *out.factors.entry(*k).or_insert(0) += m;
        }
        out
    }

    fn lcm(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, m) in &other.factors {
            let slot = out.factors.entry(*k).or_insert(0);
            *slot = (*slot).max(*m);
        }
        out
    }

    /// `self / other` as a polynomial; `other` must divide `self` factorwise.
    fn cofactor(&self, other: &Self) -> LaurentPoly {
        self.factors.iter().fold(LaurentPoly::one(), |acc, (k, m)| {
            let have = other.factors.get(k).copied().unwrap_or(0);
            acc.mul(&cyclo(*k).pow(m - have))
        })
    }
}

/// `num / den` with `den = ∏ (1 - (-q)^k)^{m_k}`.
#[derive(Clone, Debug, Default)]
pub struct LaurentRational {
    pub num: LaurentPoly,
    pub den: Denominator,
}

impl PartialEq for LaurentRational {
    fn eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den.expand()) == other.num.mul(&self.den.expand())
    }
}

impl From<LaurentPoly> for LaurentRational {
    fn from(num: LaurentPoly) -> Self {
        LaurentRational {
            num,
            den: Denominator::one(),
        }
    }
}

impl LaurentRational {
    pub fn zero() -> Self {
        LaurentPoly::zero().into()
    }

    pub fn new(num: LaurentPoly, den: Denominator) -> Self {
        LaurentRational { num, den }
    }

    /// `1 / (1 - (-q)^k)`.
    pub fn geometric(k: u32) -> Self {
        LaurentRational::new(LaurentPoly::one(), Denominator::factor(k))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        let den = self.den.lcm(&other.den);
        let num = self
            .num
            .mul(&den.cofactor(&self.den))
            .add(&other.num.mul(&den.cofactor(&other.den)));
        LaurentRational { num, den }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&q_int(-1)))
    }

    pub fn scale(&self, c: &Q) -> Self {
        LaurentRational::new(self.num.scale(c), self.den.clone())
    }

    pub fn mul(&self, other: &Self) -> Self {
        LaurentRational::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn mul_poly(&self, p: &LaurentPoly) -> Self {
        LaurentRational::new(self.num.mul(p), self.den.clone())
    }

    /// `q d/dq`, using `θ(1 - (-q)^k) = -k(-q)^k`.
    pub fn theta(&self) -> Self {
        let distinct: Vec<u32> = self.den.factors.keys().copied().collect();
        let full: LaurentPoly = distinct.iter().fold(LaurentPoly::one(), |acc, k| acc.mul(&cyclo(*k)));
        let mut num = self.num.theta().mul(&full);
        for (k, m) in &self.den.factors {
            let others = distinct
                .iter()
                .filter(|j| *j != k)
                .fold(LaurentPoly::one(), |acc, j| acc.mul(&cyclo(*j)));
            let dk = LaurentPoly::neg_q_pow(*k as i64).scale(&q_int(-(*k as i64) * *m as i64));
            num = num.sub(&self.num.mul(&dk).mul(&others));
        }
        let mut den = self.den.clone();
        for k in &distinct {
            *den.factors.get_mut(k).unwrap() += 1;
        }
        LaurentRational::new(num, den)
    }

    /// `q ↦ q⁻¹`, using `1/(1 - (-q)^{-k}) = -(-q)^k / (1 - (-q)^k)`.
    pub fn invert_q(&self) -> Self {
        let mut num = self.num.invert_q();
        for (k, m) in &self.den.factors {
            let f = LaurentPoly::neg_q_pow(*k as i64).scale(&q_int(-1));
            num = num.mul(&f.pow(*m));
        }
        LaurentRational::new(num, self.den.clone())
    }

    /// Cancel denominator factors that divide the numerator exactly.
    pub fn reduce(&self) -> Self {
        let mut out = self.clone();
        let ks: Vec<u32> = out.den.factors.keys().copied().collect();
        for k in ks {
            while out.den.factors.get(&k).copied().unwrap_or(0) > 0 {
                match divide_exact(&out.num, &cyclo(k)) {
                    Some(q) => {
                        out.num = q;
                        let m = out.den.factors.get_mut(&k).unwrap();
                        *m -= 1;
                        if *m == 0 {
                            out.den.factors.remove(&k);
                        }
                    }
                    None => break,
                }
            }
        }
        out
    }

    /// Ascending Laurent expansion, all coefficients with exponent `≤ max_exp`.
    pub fn expand_ascending(&self, max_exp: i64) -> LaurentPoly {
        let Some(low) = self.num.min_exp() else {
            return LaurentPoly::zero();
        };
        if max_exp < low {
            return LaurentPoly::zero();
        }
        let order = (max_exp - low) as usize;
        let inv = series_inverse(&self.den.expand(), order);
        let mut out = LaurentPoly::zero();
        for (e1, c1) in self.num.coeffs() {
            for (e2, c2) in inv.coeffs() {
                if e1 + e2 <= max_exp {
                    out.add_coeff(e1 + e2, c1 * c2);
                }
            }
        }
        out
    }

    /// Descending expansion (in powers of `q⁻¹`), exponents `≥ min_exp`.
    pub fn expand_descending(&self, min_exp: i64) -> LaurentPoly {
        self.invert_q().expand_ascending(-min_exp).invert_q()
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("num".into(), self.num.to_json());
        m.insert("den".into(), self.den.expand().to_json());
        Value::Object(m)
    }
}

impl fmt::Display for LaurentRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] / [{}]", self.num, self.den.expand())
    }
}

/// Power series inverse of `p` (constant term must be 1) up to `q^order`.
fn series_inverse(p: &LaurentPoly, order: usize) -> LaurentPoly {
    assert!(p.coeff(0).is_one() && p.min_exp() == Some(0));
    let mut inv: Vec<Q> = vec![Q::one()];
    for n in 1..=order {
        let mut acc = Q::zero();
        for (e, c) in p.coeffs() {
            let e = *e as usize;
            if e >= 1 && e <= n {
                acc -= c * &inv[n - e];
            }
        }
        inv.push(acc);
    }
    LaurentPoly::from_coeffs(inv.into_iter().enumerate().map(|(i, c)| (i as i64, c)))
}

/// Exact polynomial division, `None` if there is a remainder.
fn divide_exact(num: &LaurentPoly, div: &LaurentPoly) -> Option<LaurentPoly> {
    let (dlo, dhi) = (div.min_exp()?, div.max_exp()?);
    let lead = div.coeff(dhi);
    let mut rem = num.clone();
    let mut quot = LaurentPoly::zero();
    while let Some(top) = rem.max_exp() {
        if top - dhi < rem.min_exp().unwrap() - dlo {
            return None;
        }
        let c = rem.coeff(top) / &lead;
        let term = LaurentPoly::monomial(top - dhi, c);
        rem = rem.sub(&div.mul(&term));
        quot = quot.add(&term);
    }
    Some(quot)
}

pub fn palindrome_check(f: &LaurentRational) -> bool {
    f.invert_q() == *f
}

fn check_theory(theory: &Theory, rank: i64) -> Result<Q, EngineError> {
    if rank < 1 || rank > theory.rank_cap {
        return Err(EngineError::RankOutOfRange {
            rank,
            cap: theory.rank_cap,
        });
    }
    theory
        .mu0()
        .ok_or_else(|| EngineError::InvalidTheory("c(1) missing".into()))
}

fn chi(rank: i64, degree: i64, genus: i64) -> i64 {
    degree - rank * (genus - 1)
}

/// `F(r, a) = Σ_{e ≥ a} (-q)^χ χ H(r, e)` in closed form.
pub fn f_series(theory: &Theory, rank: i64, a: &Q) -> Result<LaurentRational, EngineError> {
    check_theory(theory, rank)?;
    let g = theory.genus;
    let mut out = LaurentRational::zero();
    for v in 1..=rank {
        let h = theory.higgs_value(rank, v);
        if h.is_zero() {
            continue;
        }
        // m = max{m : m < (a - v)/r}
        let m = ceil_i64(&((a - q_int(v)) / q_int(rank))) - 1;
        let c0 = chi(rank, v, g);
        let tail = LaurentRational::new(LaurentPoly::neg_q_pow(rank * (m + 1)), Denominator::factor(rank as u32));
        let term = tail.theta().add(&tail.scale(&q_int(c0)));
        out = out.add(&term.mul_poly(&LaurentPoly::neg_q_pow(c0)).scale(&h));
    }
    Ok(out)
}

/// `Σ_{e < a} (-q)^χ (-χ) H(r, e)`, built from the ascending series in
/// `q⁻¹` by inversion.
pub fn f_prime_series(theory: &Theory, rank: i64, a: &Q) -> Result<LaurentRational, EngineError> {
    check_theory(theory, rank)?;
    let g = theory.genus;
    let mut out = LaurentRational::zero();
    for v in 0..rank {
        let h = theory.higgs_value(rank, v);
        if h.is_zero() {
            continue;
        }
        // largest e ≡ v (mod r) with e < a
        let top = v + rank * (ceil_i64(&((a - q_int(v)) / q_int(rank))) - 1);
        let c0 = chi(rank, top, g);
        // Σ_k (c0 - rk) (-q)^{rk}, then q ↦ q⁻¹
        let geo = LaurentRational::geometric(rank as u32);
        let weighted = geo.scale(&q_int(c0)).sub(&geo.theta());
        let term = weighted.invert_q().mul_poly(&LaurentPoly::neg_q_pow(c0));
        out = out.sub(&term.scale(&h));
    }
    Ok(out)
}

/// `Z_{0-}(q)_r` restricted to the window `c(r) ≤ e ≤ c̄(r)`.
pub fn z_zero_minus(theory: &Theory, rank: i64) -> Result<LaurentPoly, EngineError> {
    check_theory(theory, rank)?;
    let (c, cbar) = window(theory, rank)?;
    Ok(LaurentPoly::from_coeffs((c..=cbar).map(|e| {
        (
            chi(rank, e, theory.genus),
            theory.a_zero_minus_entry(&Charge::new(rank, e)),
        )
    })))
}

fn window(theory: &Theory, rank: i64) -> Result<(i64, i64), EngineError> {
    match (theory.c_of(rank), theory.c_bar(rank)) {
        (Some(c), Some(cbar)) => Ok((c, cbar)),
        _ => Err(EngineError::InvalidTheory(format!("c({rank}) missing"))),
    }
}

fn ordered_rank_tuples(rank: i64, l: usize) -> Vec<Vec<i64>> {
    compositions(rank, l)
}

/// Generic assembly shared by `+∞` and `-∞`: `series(r, a)` sums a single
/// Higgs factor over one side of slope `a/r`.
fn assemble_infinite(
    theory: &Theory,
    rank: i64,
    series: &dyn Fn(i64, &Q) -> Result<LaurentRational, EngineError>,
) -> Result<LaurentRational, EngineError> {
    let mu0 = check_theory(theory, rank)?;
    let g = theory.genus;
    let mut out: LaurentRational = z_zero_minus(theory, rank)?.into();
    for l in 1..=rank as usize {
        for ranks in ordered_rank_tuples(rank, l) {
            if l >= 2 {
                let coeff = inv_factorial(l as u32 - 1);
                let r1 = ranks[0];
                let (c, cbar) = window(theory, r1)?;
                for e1 in c..=cbar {
                    let a0 = theory.a_zero_minus_entry(&Charge::new(r1, e1));
                    if a0.is_zero() {
                        continue;
                    }
                    let mut term: LaurentRational = LaurentPoly::monomial(chi(r1, e1, g), a0 * &coeff).into();
                    for &ri in &ranks[1..] {
                        term = term.mul(&series(ri, &q_frac(ri * e1, r1))?);
                    }
                    out = out.add(&term);
                }
            }
            let mut term: LaurentRational = LaurentPoly::monomial(0, inv_factorial(l as u32)).into();
            for &ri in &ranks {
                term = term.mul(&series(ri, &(&mu0 * q_int(ri)))?);
            }
            out = out.add(&term);
        }
    }
    Ok(out)
}

/// `Z_∞(q)_r`.
pub fn z_infty(theory: &Theory, rank: i64) -> Result<LaurentRational, EngineError> {
    assemble_infinite(theory, rank, &|r, a| f_series(theory, r, a))
}

/// The same assembly with every Higgs factor summed below its threshold;
/// its descending expansion is the `-∞` side.
pub fn z_minus_infty(theory: &Theory, rank: i64) -> Result<LaurentRational, EngineError> {
    assemble_infinite(theory, rank, &|r, a| f_prime_series(theory, r, a))
}

/// Integer vectors with `lo[i] ≤ xᵢ ≤ hi[i]` and `Σ xᵢ = total`.
fn bounded_vectors(lo: &[i64], hi: &[i64], total: i64) -> Vec<Vec<i64>> {
    fn rec(i: usize, lo: &[i64], hi: &[i64], rem: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if i == lo.len() {
            if rem == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let rest_lo: i64 = lo[i + 1..].iter().sum();
        let rest_hi: i64 = hi[i + 1..].iter().sum();
        let from = lo[i].max(rem - rest_hi);
        let to = hi[i].min(rem - rest_lo);
        for x in from..=to {
            cur.push(x);
            rec(i + 1, lo, hi, rem - x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if lo.iter().zip(hi).all(|(a, b)| a <= b) {
        rec(0, lo, hi, total, &mut Vec::new(), &mut out);
    }
    out
}

/// Degree tuples of the given ranks, each with `μ ≥ a` and `μ < μ_δ` of
/// the total `(R, total)`.
fn floor_tuples(ranks: &[i64], a: &Q, delta: &StabilityParam, total: i64) -> Vec<Vec<i64>> {
    let big_r: i64 = ranks.iter().sum();
    let top = Charge::new(big_r, total).delta_slope(delta);
    let lo: Vec<i64> = ranks.iter().map(|r| ceil_i64(&(a * q_int(*r)))).collect();
    let hi: Vec<i64> = ranks.iter().map(|r| top.max_degree_below(*r)).collect();
    bounded_vectors(&lo, &hi, total)
}

/// `Σ_e (-q)^{χ(R,e)} Σ_{tuples} ∏ χᵢ H(rᵢ, eᵢ)` over tuples counted by
/// `floor_tuples`: a finite head below `E0 > aR + (R-1)δ`, then a tail in
/// which every tuple of total `e + R` is a tuple of total `e` shifted by
/// `(r₁, …, r_l)`.
pub fn f_delta(theory: &Theory, ranks: &[i64], a: &Q, delta: &StabilityParam) -> Result<LaurentRational, EngineError> {
    let g = theory.genus;
    let big_r: i64 = ranks.iter().sum();
    let weight = |tuple: &[i64]| -> Q {
        ranks
            .iter()
            .zip(tuple)
            .map(|(r, e)| q_int(chi(*r, *e, g)) * theory.higgs_value(*r, *e))
            .product()
    };
    let start: i64 = ranks.iter().map(|r| ceil_i64(&(a * q_int(*r)))).sum();
    let e0 = floor_i64(&(a * q_int(big_r) + &delta.value * q_int(big_r - 1))) + 1;
    let mut head = LaurentPoly::zero();
    for e in start..e0 {
        let sign = q_int(sign_pow(chi(big_r, e, g)));
        for t in floor_tuples(ranks, a, delta, e) {
            head.add_coeff(chi(big_r, e, g), weight(&t) * &sign);
        }
    }
    let mut out: LaurentRational = head.into();
    let geo = LaurentRational::geometric(big_r as u32);
    for e in e0.max(start)..e0.max(start) + big_r {
        for t in floor_tuples(ranks, a, delta, e) {
            let h: Q = ranks.iter().zip(&t).map(|(r, e)| theory.higgs_value(*r, *e)).product();
            if h.is_zero() {
                continue;
            }
            // ∏ (χᵢ + (rᵢ/R) θ) applied to 1/(1 - (-q)^R)
            let mut acc = geo.clone();
            for (r, ei) in ranks.iter().zip(&t) {
                let th = acc.theta().scale(&q_frac(*r, big_r));
                acc = acc.scale(&q_int(chi(*r, *ei, g))).add(&th);
            }
            out = out.add(&acc.mul_poly(&LaurentPoly::neg_q_pow(chi(big_r, e, g))).scale(&h));
        }
    }
    Ok(out)
}

/// `Z_δ(q)_r` for `δ > 0`.
pub fn z_delta(theory: &Theory, rank: i64, delta: &StabilityParam) -> Result<LaurentRational, EngineError> {
    let mu0 = check_theory(theory, rank)?;
    if !delta.value.is_positive() {
        return Err(EngineError::Precondition("z_delta needs delta > 0".into()));
    }
    if delta.side == Side::Exact && *delta.value.denom() <= num_bigint::BigInt::from(rank - 1) {
        return Err(EngineError::Critical {
            charge: format!("rank {rank}"),
            delta: format_q(&delta.value),
            below: "none".into(),
            above: "none".into(),
        });
    }
    let g = theory.genus;
    let mut out: LaurentRational = z_zero_minus(theory, rank)?.into();
    let mut band = LaurentPoly::zero();
    for l in 1..=rank as usize {
        for ranks in ordered_rank_tuples(rank, l) {
            if l >= 2 {
                let coeff = inv_factorial(l as u32 - 1);
                let r1 = ranks[0];
                let (c, cbar) = window(theory, r1)?;
                for e1 in c..=cbar {
                    let a0 = theory.a_zero_minus_entry(&Charge::new(r1, e1));
                    if a0.is_zero() {
                        continue;
                    }
                    let lo: Vec<i64> = ranks[1..].iter().map(|r| ceil_i64(&q_frac(r * e1, r1))).collect();
                    let hi: Vec<i64> = ranks[1..]
                        .iter()
                        .map(|r| floor_i64(&((q_int(e1) + &delta.value) * q_int(*r) / q_int(r1))))
                        .collect();
                    for_each_box(&lo, &hi, &mut |rest| {
                        let total = e1 + rest.iter().sum::<i64>();
                        let top = Charge::new(rank, total).delta_slope(delta);
                        let inside = top.exceeds(&q_frac(e1, r1))
                            && ranks[1..].iter().zip(rest).all(|(r, e)| top.exceeds(&q_frac(*e, *r)));
                        if !inside {
                            return;
                        }
                        let w: Q = ranks[1..]
                            .iter()
                            .zip(rest)
                            .map(|(r, e)| {
                                let x = chi(*r, *e, g);
                                q_int(sign_pow(x) * x) * theory.higgs_value(*r, *e)
                            })
                            .product();
                        band.add_coeff(chi(rank, total, g), w * &a0 * &coeff);
                    });
                }
            }
            out = out.add(&f_delta(theory, &ranks, &mu0, delta)?.scale(&inv_factorial(l as u32)));
        }
    }
    Ok(out.add(&band.into()))
}

fn for_each_box(lo: &[i64], hi: &[i64], f: &mut dyn FnMut(&[i64])) {
    fn rec(i: usize, lo: &[i64], hi: &[i64], cur: &mut Vec<i64>, f: &mut dyn FnMut(&[i64])) {
        if i == lo.len() {
            f(cur);
            return;
        }
        for x in lo[i]..=hi[i] {
            cur.push(x);
            rec(i + 1, lo, hi, cur, f);
            cur.pop();
        }
    }
    rec(0, lo, hi, &mut Vec::new(), f);
}
