//! The truncated Lie algebra spanned by `e_γ` (Higgs charges) and `f_σ`
//! (framed charges), its formal group, and the product identity across a
//! single wall.
//!
//! Brackets: `[e, e] = [f, f] = 0`, `[e_γ, f_σ] = (-1)^{χ(γ)} χ(γ) f_{γ+σ}`.
//! Elements live in the cone `{e_{qβ} : q ≥ 1} ∪ {f_{α+qβ} : q ≥ 0}` and are
//! truncated at `q ≤ Q`. The f-span is an abelian ideal acted on by the
//! abelian e-span, so a group element `exp(E + G)` has the normal form
//! `exp(E) exp(F)` with `F = φ(ad E) G`, `φ(z) = (1 - e^{-z})/z`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::EngineError;
use crate::invariants::Engine;
use crate::lattice::{Charge, SidedRational};
use crate::rational::{format_q, gcd_i64, inv_factorial, q_int, sign_pow, Q};
use crate::theory::Chamber;

/// Cone and truncation order: apex `alpha` (framed), primitive direction
/// `beta`, degrees `q ≤ max_degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Truncation {
    pub genus: i64,
    pub alpha: Charge,
    pub beta: Charge,
    pub max_degree: i64,
}

impl Truncation {
    /// `q` with `γ = qβ`, if `1 ≤ q ≤ Q`.
    pub fn higgs_degree(&self, gamma: &Charge) -> Option<i64> {
        let q = gamma.rank() / self.beta.rank();
        (gamma.rank() % self.beta.rank() == 0
            && gamma.degree() == q * self.beta.degree()
            && (1..=self.max_degree).contains(&q))
        .then_some(q)
    }

    /// `q` with `σ = α + qβ`, if `0 ≤ q ≤ Q`.
    pub fn framed_degree(&self, sigma: &Charge) -> Option<i64> {
        let dr = sigma.rank() - self.alpha.rank();
        if dr < 0 || dr % self.beta.rank() != 0 {
            return None;
        }
        let q = dr / self.beta.rank();
        (sigma.degree() == self.alpha.degree() + q * self.beta.degree() && q <= self.max_degree).then_some(q)
    }

    pub fn framed(&self, q: i64) -> Charge {
        Charge::new(self.alpha.rank() + q * self.beta.rank(), self.alpha.degree() + q * self.beta.degree())
    }

    pub fn higgs(&self, q: i64) -> Charge {
        q * self.beta
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LieElement {
    pub e: BTreeMap<Charge, Q>,
    pub f: BTreeMap<Charge, Q>,
}

fn add_into(map: &mut BTreeMap<Charge, Q>, key: Charge, c: Q) {
    if c.is_zero() {
        return;
    }
    let slot = map.entry(key).or_insert_with(Q::zero);
    *slot += c;
    if slot.is_zero() {
        map.remove(&key);
    }
}

impl LieElement {
    pub fn zero() -> Self {
        LieElement::default()
    }

    pub fn e(gamma: Charge, c: Q) -> Self {
        let mut x = LieElement::zero();
        add_into(&mut x.e, gamma, c);
        x
    }

    pub fn f(sigma: Charge, c: Q) -> Self {
        let mut x = LieElement::zero();
        add_into(&mut x.f, sigma, c);
        x
    }

    pub fn is_zero(&self) -> bool {
        self.e.is_empty() && self.f.is_empty()
    }

    pub fn e_part(&self) -> LieElement {
        LieElement {
            e: self.e.clone(),
            f: BTreeMap::new(),
        }
    }

    pub fn f_part(&self) -> LieElement {
        LieElement {
            e: BTreeMap::new(),
            f: self.f.clone(),
        }
    }

    pub fn f_coefficient(&self, sigma: &Charge) -> Q {
        self.f.get(sigma).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, v) in &other.e {
            add_into(&mut out.e, *k, v.clone());
        }
        for (k, v) in &other.f {
            add_into(&mut out.f, *k, v.clone());
        }
        out
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = LieElement::zero();
        for (k, v) in &self.e {
            add_into(&mut out.e, *k, v * c);
        }
        for (k, v) in &self.f {
            add_into(&mut out.f, *k, v * c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&q_int(-1)))
    }

    /// Drop every term outside the truncated cone.
    pub fn truncate(&self, t: &Truncation) -> Self {
        LieElement {
            e: self
                .e
                .iter()
                .filter(|(k, _)| t.higgs_degree(k).is_some())
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
            f: self
                .f
                .iter()
                .filter(|(k, _)| t.framed_degree(k).is_some())
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }

    /// `[self, other]`, truncated.
    pub fn bracket(&self, other: &Self, t: &Truncation) -> Self {
        let mut out = LieElement::zero();
        for (gamma, a) in &self.e {
            let w = q_int(gamma.euler_weight(t.genus).weight);
            for (sigma, b) in &other.f {
                add_into(&mut out.f, *gamma + *sigma, a * b * &w);
            }
        }
        for (gamma, a) in &other.e {
            let w = q_int(gamma.euler_weight(t.genus).weight);
            for (sigma, b) in &self.f {
                add_into(&mut out.f, *gamma + *sigma, -(a * b * &w));
            }
        }
        out.truncate(t)
    }

    /// `Σ_n c_n (ad self)^n y` until the terms vanish.
    fn ad_series(&self, y: &Self, coeff: &dyn Fn(usize) -> Q, t: &Truncation) -> Self {
        let mut out = LieElement::zero();
        let mut term = y.truncate(t);
        let mut n = 0;
        while !term.is_zero() {
            out = out.add(&term.scale(&coeff(n)));
            term = self.bracket(&term, t);
            n += 1;
        }
        out
    }
}

/// `Σ_n (ad a)^n b / n!`, the log of `exp(a) exp(b) exp(-a)`.
pub fn bch_conjugate(a: &LieElement, b: &LieElement, t: &Truncation) -> LieElement {
    a.truncate(t).ad_series(b, &|n| inv_factorial(n as u32), t)
}

/// Coefficients of `z / (1 - e^{-z})` up to `z^n`, by inverting
/// `(1 - e^{-z})/z = Σ (-1)^k z^k / (k+1)!`.
fn psi_coefficients(n: usize) -> Vec<Q> {
    let phi: Vec<Q> = (0..=n)
        .map(|k| q_int(sign_pow(k as i64)) * inv_factorial(k as u32 + 1))
        .collect();
    let mut inv = vec![Q::one()];
    for m in 1..=n {
        let acc: Q = (1..=m).map(|k| &phi[k] * &inv[m - k]).sum();
        inv.push(-acc);
    }
    inv
}

/// A formal group element, stored through its logarithm.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroupElement {
    pub log: LieElement,
}

impl GroupElement {
    pub fn identity() -> Self {
        GroupElement::default()
    }

    pub fn exp(log: LieElement, t: &Truncation) -> Self {
        GroupElement { log: log.truncate(t) }
    }

    /// `(E, F)` with `self = exp(E) exp(F)`.
    pub fn normal_form(&self, t: &Truncation) -> (LieElement, LieElement) {
        let e = self.log.e_part();
        let f = e.ad_series(
            &self.log.f_part(),
            &|n| q_int(sign_pow(n as i64)) * inv_factorial(n as u32 + 1),
            t,
        );
        (e, f)
    }

    pub fn from_normal_form(e: &LieElement, f: &LieElement, t: &Truncation) -> Self {
        let psi = psi_coefficients(t.max_degree as usize + 1);
        let g = e.ad_series(f, &|n| psi[n].clone(), t);
        GroupElement { log: e.add(&g) }
    }

    /// `exp(E₁)exp(F₁)exp(E₂)exp(F₂) = exp(E₁+E₂) exp(e^{-ad E₂} F₁ + F₂)`.
    pub fn mul(&self, other: &Self, t: &Truncation) -> Self {
        let (e1, f1) = self.normal_form(t);
        let (e2, f2) = other.normal_form(t);
        let moved = bch_conjugate(&e2.scale(&q_int(-1)), &f1, t);
        GroupElement::from_normal_form(&e1.add(&e2), &moved.add(&f2), t)
    }

    pub fn inverse(&self) -> Self {
        GroupElement {
            log: self.log.scale(&q_int(-1)),
        }
    }

    pub fn product<'a>(items: impl IntoIterator<Item = &'a GroupElement>, t: &Truncation) -> Self {
        items
            .into_iter()
            .fold(GroupElement::identity(), |acc, x| acc.mul(x, t))
    }
}

/// `exp(c f_σ)`.
pub fn u_framed(sigma: Charge, c: Q, t: &Truncation) -> GroupElement {
    GroupElement::exp(LieElement::f(sigma, c), t)
}

/// `exp(c Σ_{m ≥ 1} e_{mγ} / m²)`, keeping the terms inside the truncation.
pub fn u_higgs(gamma: Charge, c: Q, t: &Truncation) -> GroupElement {
    let mut log = LieElement::zero();
    let mut m = 1;
    while t.higgs_degree(&(m * gamma)).is_some() {
        log = log.add(&LieElement::e(m * gamma, &c / q_int(m * m)));
        m += 1;
    }
    GroupElement::exp(log, t)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KsCoefficient {
    pub charge: Charge,
    /// `A₊ - A₋` read off the conjugation identity.
    pub from_product: Q,
    /// The positive-wall formula (zero when the wall is not critical).
    pub from_wall: Q,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KsReport {
    pub group_equal: bool,
    pub coefficients: Vec<KsCoefficient>,
}

impl KsReport {
    pub fn pass(&self) -> bool {
        self.group_equal && self.coefficients.iter().all(|c| c.from_product == c.from_wall)
    }
}

/// Compare `∏_{q↑} U_{α+qβ}^{A₊} ∏_{q↑} U_{qβ}^{H̄}` with
/// `∏_{q↓} U_{qβ}^{H̄} ∏_{q↓} U_{α+qβ}^{A₋}` at the wall `δ_c`, and the
/// coefficient of every `f_{α+pβ}` with the positive-wall formula.
pub fn ks_check(
    engine: &Engine,
    alpha: &Charge,
    beta: &Charge,
    delta_c: &Q,
    max_degree: i64,
) -> Result<KsReport, EngineError> {
    let precondition = |m: String| Err(EngineError::Precondition(m));
    if max_degree < 1 {
        return precondition("truncation order must be >= 1".into());
    }
    if delta_c <= &Q::zero() {
        return precondition("delta_c must be positive".into());
    }
    if gcd_i64(beta.rank(), beta.degree()) != 1 {
        return precondition(format!("direction {beta} is not primitive"));
    }
    if alpha.rank() > beta.rank() {
        return precondition(format!("{alpha} is not the apex of the cone along {beta}"));
    }
    let mu_c = (q_int(alpha.degree()) + delta_c) / q_int(alpha.rank());
    if mu_c != beta.slope() {
        return precondition(format!(
            "slope condition fails: mu_c({alpha}) = {} but mu({beta}) = {}",
            format_q(&mu_c),
            format_q(&beta.slope())
        ));
    }
    let t = Truncation {
        genus: engine.genus(),
        alpha: *alpha,
        beta: *beta,
        max_degree,
    };
    let plus = Chamber::Delta(SidedRational::plus(delta_c.clone()));
    let minus = Chamber::Delta(SidedRational::minus(delta_c.clone()));
    let mut a_plus = Vec::new();
    let mut a_minus = Vec::new();
    for q in 0..=max_degree {
        a_plus.push(engine.a_invariant(&t.framed(q), &plus)?);
        a_minus.push(engine.a_invariant(&t.framed(q), &minus)?);
    }
    let mut higgs_factors = Vec::new();
    let mut higgs_log = LieElement::zero();
    for q in 1..=max_degree {
        let gamma = t.higgs(q);
        higgs_factors.push(u_higgs(gamma, engine.hbar(&gamma)?, &t));
        higgs_log = higgs_log.add(&LieElement::e(gamma, engine.higgs(gamma.rank(), gamma.degree())?));
    }
    let framed = |a: &[Q]| -> Vec<GroupElement> {
        (0..=max_degree)
            .map(|q| u_framed(t.framed(q), a[q as usize].clone(), &t))
            .collect()
    };
    let plus_f = framed(&a_plus);
    let minus_f = framed(&a_minus);
    let lhs = GroupElement::product(plus_f.iter().chain(higgs_factors.iter()), &t);
    let rhs = GroupElement::product(higgs_factors.iter().rev().chain(minus_f.iter().rev()), &t);

    let minus_log = (0..=max_degree).fold(LieElement::zero(), |acc, q| {
        acc.add(&LieElement::f(t.framed(q), a_minus[q as usize].clone()))
    });
    let conjugated = bch_conjugate(&higgs_log, &minus_log, &t);
    let mut coefficients = Vec::new();
    for p in 0..=max_degree {
        let sigma = t.framed(p);
        let from_wall = if engine.is_critical(&sigma, delta_c) {
            engine.wall_diff_positive(&sigma, delta_c)?
        } else {
            Q::zero()
        };
        coefficients.push(KsCoefficient {
            charge: sigma,
            from_product: conjugated.f_coefficient(&sigma) - &a_minus[p as usize],
            from_wall,
        });
    }
    Ok(KsReport {
        group_equal: lhs == rhs,
        coefficients,
    })
}
