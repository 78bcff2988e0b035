//! The numerical wallcrossing engine.
//!
//! `A_{0-}` is the primitive input. Every other chamber is derived from it:
//! the `0+` chamber by the origin formula, positive chambers by the band
//! sums from `0-`, negative chambers by reflection. An independent flow
//! route (origin crossing followed by one wall at a time) is kept alongside
//! for cross-checking.

use std::collections::{BTreeMap, HashMap};
use std::sync::RwLock;

use num_traits::{Signed, Zero};

use crate::decomp::{
    enum_band_decomps, enum_negative_band_decomps, enum_origin_decomps, enum_wall_decomps, BandVariant, Bound,
    NegativeBandVariant,
};
use crate::error::EngineError;
use crate::lattice::{enumerate_walls, is_critical, nearest_walls, Charge, Side, SidedRational, StabilityParam};
use crate::rational::{format_q, gcd_i64, inv_factorial, q_frac, q_int, sign_pow, Q};
use crate::theory::{Chamber, Theory, ValidationReport};

type Result<T> = std::result::Result<T, EngineError>;

/// Which sign convention to use for the Euler factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Weight {
    /// `(-1)^χ χ`
    Plain,
    /// `(-1)^χ (-χ)`, the reflected weight.
    Negated,
}

/// Outcome of comparing two independent routes to the same number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RouteCheck {
    pub first: Q,
    pub second: Q,
}

impl RouteCheck {
    pub fn pass(&self) -> bool {
        self.first == self.second
    }
}

pub struct Engine {
    theory: Theory,
    mu0: Q,
    mu0_bar: Q,
    hbar: BTreeMap<(i64, i64), Q>,
    cache: RwLock<HashMap<(Charge, Chamber), Q>>,
    flow_cache: RwLock<HashMap<(Charge, Chamber), Q>>,
}

impl Engine {
    /// Validates the structural invariants and builds an engine.
    pub fn new(theory: Theory) -> Result<Engine> {
        let report = theory.structural_report();
        if !report.is_valid() {
            return Err(EngineError::InvalidTheory(report.errors.join("; ")));
        }
        let mu0 = theory.mu0().expect("validated theory has c(1)");
        let mu0_bar = theory.mu0_bar().expect("validated theory has c(1)");
        let hbar = multicover_table(&theory);
        Ok(Engine {
            theory,
            mu0,
            mu0_bar,
            hbar,
            cache: RwLock::new(HashMap::new()),
            flow_cache: RwLock::new(HashMap::new()),
        })
    }

    pub fn theory(&self) -> &Theory {
        &self.theory
    }

    pub fn genus(&self) -> i64 {
        self.theory.genus
    }

    pub fn mu0(&self) -> &Q {
        &self.mu0
    }

    pub fn mu0_bar(&self) -> &Q {
        &self.mu0_bar
    }

    fn check_rank(&self, alpha: &Charge) -> Result<()> {
        if alpha.rank() > self.theory.rank_cap {
            return Err(EngineError::RankOutOfRange {
                rank: alpha.rank(),
                cap: self.theory.rank_cap,
            });
        }
        Ok(())
    }

    /// `H(r, e)` extended periodically.
    pub fn higgs(&self, rank: i64, degree: i64) -> Result<Q> {
        if rank < 1 || rank > self.theory.rank_cap {
            return Err(EngineError::RankOutOfRange {
                rank,
                cap: self.theory.rank_cap,
            });
        }
        Ok(self.theory.higgs_value(rank, degree))
    }

    fn h(&self, alpha: &Charge) -> Q {
        self.theory.higgs_value(alpha.rank(), alpha.degree())
    }

    fn factor(&self, alpha: &Charge, kind: Weight) -> Q {
        let w = alpha.euler_weight(self.genus()).weight;
        let w = match kind {
            Weight::Plain => w,
            Weight::Negated => -w,
        };
        q_int(w) * self.h(alpha)
    }

    fn product(&self, parts: &[Charge], kind: Weight) -> Q {
        parts.iter().map(|p| self.factor(p, kind)).product()
    }

    /// Walls of `alpha` in `(0, δ_max]` above the slope floor `μ₀`.
    pub fn walls(&self, alpha: &Charge) -> Vec<Q> {
        enumerate_walls(alpha, Some(&self.mu0), &self.theory.delta_max)
    }

    pub fn is_critical(&self, alpha: &Charge, delta: &Q) -> bool {
        is_critical(alpha, delta, Some(&self.mu0))
    }

    fn critical_error(&self, alpha: &Charge, delta: &Q) -> EngineError {
        let (below, above) = nearest_walls(alpha, delta, Some(&self.mu0), &self.theory.delta_max);
        let show = |w: Option<Q>| w.map(|q| format_q(&q)).unwrap_or_else(|| "none".into());
        EngineError::Critical {
            charge: alpha.to_string(),
            delta: format_q(delta),
            below: show(below),
            above: show(above),
        }
    }

    /// `A_{0-}(α)`: the table on the window, zero above it, the low-slope
    /// formula below it.
    pub fn a_zero_minus(&self, alpha: &Charge) -> Result<Q> {
        self.check_rank(alpha)?;
        let c = self.theory.c_of(alpha.rank()).expect("validated");
        let cbar = self.theory.c_bar(alpha.rank()).expect("validated");
        if alpha.degree() < c {
            self.a_zero_minus_lowslope(alpha)
        } else if alpha.degree() > cbar {
            Ok(Q::zero())
        } else {
            Ok(self.theory.a_zero_minus_entry(alpha))
        }
    }

    /// `A_{0-}(α)` for `μ(α) < μ₀`: exponential sum over equal-slope
    /// decompositions with reflected Euler weights.
    pub fn a_zero_minus_lowslope(&self, alpha: &Charge) -> Result<Q> {
        self.check_rank(alpha)?;
        if alpha.slope() >= self.mu0 {
            return Err(EngineError::Precondition(format!(
                "{alpha} has slope >= mu0 = {}; read the table instead",
                format_q(&self.mu0)
            )));
        }
        let mut total = Q::zero();
        for l in 1..=alpha.rank() as usize {
            let coeff = inv_factorial(l as u32);
            for d in enum_origin_decomps(alpha, l) {
                total += &coeff * self.product(&d.parts, Weight::Negated);
            }
        }
        Ok(total)
    }

    /// Generic positive-wall sum with a caller-supplied `A_{δ-}` lookup.
    fn wall_sum(
        &self,
        alpha: &Charge,
        delta_c: &Q,
        a_minus: &dyn Fn(&Charge) -> Result<Q>,
    ) -> Result<Q> {
        let mut total = Q::zero();
        for l in 2..=alpha.rank() as usize {
            let coeff = inv_factorial(l as u32 - 1);
            for d in enum_wall_decomps(alpha, delta_c, l, l) {
                let (last, higgs) = d.parts.split_last().unwrap();
                let w = self.product(higgs, Weight::Plain);
                if w.is_zero() {
                    continue;
                }
                total += &coeff * w * a_minus(last)?;
            }
        }
        Ok(total)
    }

    /// `A_{δ_c+}(α) - A_{δ_c-}(α)` across a positive wall.
    pub fn wall_diff_positive(&self, alpha: &Charge, delta_c: &Q) -> Result<Q> {
        self.check_rank(alpha)?;
        if !delta_c.is_positive() || !self.is_critical(alpha, delta_c) {
            return Err(EngineError::Precondition(format!(
                "{} is not a positive wall of {alpha}",
                format_q(delta_c)
            )));
        }
        let below = Chamber::Delta(SidedRational::minus(delta_c.clone()));
        self.wall_sum(alpha, delta_c, &|a| self.a_invariant(a, &below))
    }

    fn origin_sum(&self, alpha: &Charge, a_minus: &dyn Fn(&Charge) -> Result<Q>) -> Result<Q> {
        let mut total = Q::zero();
        for l in 1..=alpha.rank() as usize {
            let decomps = enum_origin_decomps(alpha, l);
            if l >= 2 {
                let coeff = inv_factorial(l as u32 - 1);
                for d in &decomps {
                    let (last, higgs) = d.parts.split_last().unwrap();
                    let w = self.product(higgs, Weight::Plain);
                    if !w.is_zero() {
                        total += &coeff * w * a_minus(last)?;
                    }
                }
            }
            let coeff = inv_factorial(l as u32);
            for d in &decomps {
                total += &coeff * self.product(&d.parts, Weight::Plain);
            }
        }
        Ok(total)
    }

    /// `A_{0+}(α) - A_{0-}(α)`.
    pub fn wall_diff_origin(&self, alpha: &Charge) -> Result<Q> {
        self.check_rank(alpha)?;
        self.origin_sum(alpha, &|a| self.a_zero_minus(a))
    }

    /// `A_δ(α) - A_{0-}(α)` for `δ > 0` (or `+∞`) as a single band sum.
    fn band_sum(&self, alpha: &Charge, bound: &Bound) -> Result<Q> {
        let mut total = Q::zero();
        for l in 1..=alpha.rank() as usize {
            if l >= 2 {
                let coeff = inv_factorial(l as u32 - 1);
                for d in enum_band_decomps(alpha, BandVariant::Minus, bound, &self.mu0, l) {
                    let (first, rest) = d.parts.split_first().unwrap();
                    let w = self.product(rest, Weight::Plain);
                    if !w.is_zero() {
                        total += &coeff * w * self.a_zero_minus(first)?;
                    }
                }
            }
            let coeff = inv_factorial(l as u32);
            for d in enum_band_decomps(alpha, BandVariant::Floor, bound, &self.mu0, l) {
                total += &coeff * self.product(&d.parts, Weight::Plain);
            }
        }
        Ok(total)
    }

    /// `A(α)` in the given chamber.
    pub fn a_invariant(&self, alpha: &Charge, chamber: &Chamber) -> Result<Q> {
        self.check_rank(alpha)?;
        let chamber = chamber.clone().normalized();
        let key = (*alpha, chamber.clone());
        if let Some(v) = self.cache.read().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let value = self.compute_a(alpha, &chamber)?;
        self.cache.write().unwrap().insert(key, value.clone());
        Ok(value)
    }

    fn compute_a(&self, alpha: &Charge, chamber: &Chamber) -> Result<Q> {
        let below_floor = alpha.slope() < self.mu0;
        match chamber {
            Chamber::ZeroMinus => self.a_zero_minus(alpha),
            Chamber::ZeroPlus => {
                if below_floor {
                    return Ok(Q::zero());
                }
                Ok(self.a_zero_minus(alpha)? + self.wall_diff_origin(alpha)?)
            }
            Chamber::PlusInfinity => {
                if below_floor {
                    return Ok(Q::zero());
                }
                Ok(self.a_zero_minus(alpha)? + self.band_sum(alpha, &Bound::Infinity)?)
            }
            Chamber::MinusInfinity => {
                self.a_invariant(&alpha.reflect(self.genus()), &Chamber::PlusInfinity)
            }
            Chamber::Delta(p) => {
                if p.value.is_negative() {
                    return self.a_invariant(&alpha.reflect(self.genus()), &Chamber::Delta(p.neg()));
                }
                if p.value > self.theory.delta_max {
                    return Err(EngineError::Precondition(format!(
                        "|delta| = {} exceeds delta_max = {}",
                        format_q(&p.value),
                        format_q(&self.theory.delta_max)
                    )));
                }
                if p.side == Side::Exact && self.is_critical(alpha, &p.value) {
                    return Err(self.critical_error(alpha, &p.value));
                }
                if below_floor {
                    return Ok(Q::zero());
                }
                Ok(self.a_zero_minus(alpha)? + self.band_sum(alpha, &Bound::Finite(p.clone()))?)
            }
        }
    }

    /// Largest `δ` at which a wall of `alpha` can contribute.
    fn last_relevant_wall(&self, alpha: &Charge) -> Q {
        let (r, e) = (alpha.rank(), alpha.degree());
        (1..r)
            .map(|rl| q_int(r) * (q_int(e) - q_int(rl) * &self.mu0) / q_int(r - rl) - q_int(e))
            .max()
            .unwrap_or_else(Q::zero)
    }

    /// `A(α)` obtained by crossing the origin and then every wall below the
    /// target one at a time. Independent of the band sums.
    pub fn a_invariant_by_flow(&self, alpha: &Charge, chamber: &Chamber) -> Result<Q> {
        self.check_rank(alpha)?;
        let chamber = chamber.clone().normalized();
        let key = (*alpha, chamber.clone());
        if let Some(v) = self.flow_cache.read().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let value = match &chamber {
            Chamber::ZeroMinus => self.a_zero_minus(alpha)?,
            Chamber::ZeroPlus => self.a_zero_minus(alpha)? + self.origin_sum(alpha, &|a| self.a_zero_minus(a))?,
            Chamber::MinusInfinity => {
                self.a_invariant_by_flow(&alpha.reflect(self.genus()), &Chamber::PlusInfinity)?
            }
            Chamber::PlusInfinity => {
                let top = self.last_relevant_wall(alpha);
                self.flow_up_to(alpha, &SidedRational::plus(top.max(Q::zero())))?
            }
            Chamber::Delta(p) => {
                if p.value.is_negative() {
                    self.a_invariant_by_flow(&alpha.reflect(self.genus()), &Chamber::Delta(p.neg()))?
                } else {
                    if p.side == Side::Exact && self.is_critical(alpha, &p.value) {
                        return Err(self.critical_error(alpha, &p.value));
                    }
                    self.flow_up_to(alpha, p)?
                }
            }
        };
        self.flow_cache.write().unwrap().insert(key, value.clone());
        Ok(value)
    }

    fn flow_up_to(&self, alpha: &Charge, target: &StabilityParam) -> Result<Q> {
        let mut value = self.a_invariant_by_flow(alpha, &Chamber::ZeroPlus)?;
        for wall in enumerate_walls(alpha, Some(&self.mu0), &target.value) {
            if !target.exceeds(&wall) {
                continue;
            }
            let below = Chamber::Delta(SidedRational::minus(wall.clone()));
            value += self.wall_sum(alpha, &wall, &|a| self.a_invariant_by_flow(a, &below))?;
        }
        Ok(value)
    }

    /// `A_{-δ}(α) - A_{0-}(α)` for `μ(α) ≤ μ̄₀`, from reflected band sums
    /// anchored at `0-` (no reflection of `α` itself).
    pub fn negative_flow_difference(&self, alpha: &Charge, bound: &Bound) -> Result<Q> {
        self.check_rank(alpha)?;
        if alpha.slope() > self.mu0_bar {
            return Err(EngineError::Precondition(format!(
                "{alpha} has slope above mu0_bar = {}",
                format_q(&self.mu0_bar)
            )));
        }
        let mut total = Q::zero();
        for l in 1..=alpha.rank() as usize {
            if l >= 2 {
                let coeff = inv_factorial(l as u32 - 1);
                let sets = enum_negative_band_decomps(
                    alpha,
                    NegativeBandVariant::Reflected,
                    bound,
                    &self.mu0,
                    &self.mu0_bar,
                    l,
                );
                for d in sets {
                    let (first, rest) = d.parts.split_first().unwrap();
                    if first.slope() < self.mu0 {
                        continue;
                    }
                    let w = self.product(rest, Weight::Negated);
                    if !w.is_zero() {
                        total += &coeff * w * self.a_zero_minus(first)?;
                    }
                }
            }
            let coeff = inv_factorial(l as u32);
            if l >= 2 {
                let sets = enum_negative_band_decomps(
                    alpha,
                    NegativeBandVariant::BelowFloor,
                    bound,
                    &self.mu0,
                    &self.mu0_bar,
                    l,
                );
                for d in sets {
                    total += &coeff * self.product(&d.parts, Weight::Negated);
                }
                // The equal-slope correction only arises when A_{0-}(α) itself
                // comes from the low-slope formula.
                if alpha.slope() < self.mu0 {
                    for d in enum_origin_decomps(alpha, l) {
                        total -= &coeff * self.product(&d.parts, Weight::Negated);
                    }
                }
            }
        }
        Ok(total)
    }

    /// Compare `A_{-δ}(α)` from the reflected band sums with the value
    /// obtained by reflecting `α` and flowing on the positive side.
    pub fn a_negative_flow_check(&self, alpha: &Charge, delta: &Chamber) -> Result<RouteCheck> {
        let bound = match delta.clone().normalized() {
            Chamber::Delta(p) if p.value.is_positive() => Bound::Finite(p),
            Chamber::PlusInfinity => Bound::Infinity,
            other => {
                return Err(EngineError::Precondition(format!(
                    "expected a positive delta or inf, got {other}"
                )))
            }
        };
        let first = self.a_zero_minus(alpha)? + self.negative_flow_difference(alpha, &bound)?;
        let second = self.a_invariant(&alpha.reflect(self.genus()), delta)?;
        Ok(RouteCheck { first, second })
    }

    /// `H̄(r, e)` from the multicover relation, periodic in `e` with period `r`.
    pub fn hbar(&self, alpha: &Charge) -> Result<Q> {
        self.check_rank(alpha)?;
        Ok(self
            .hbar
            .get(&(alpha.rank(), alpha.degree().rem_euclid(alpha.rank())))
            .cloned()
            .unwrap_or_else(Q::zero))
    }

    pub fn multicover_invert(&self) -> BTreeMap<(i64, i64), Q> {
        self.hbar.clone()
    }

    /// Full validation: structural errors plus engine-level warnings
    /// (integrality of `H̄`, reflection consistency of the `0-` table).
    pub fn validate(theory: &Theory) -> ValidationReport {
        let mut report = theory.structural_report();
        if !report.is_valid() {
            return report;
        }
        let engine = Engine::new(theory.clone()).expect("structurally valid");
        for ((r, rho), v) in &engine.hbar {
            if !v.is_integer() {
                report.warn(format!("higgs: multicover invariant H̄({r},{rho}) = {} is not an integer", format_q(v)));
            }
        }
        for r in 1..=theory.rank_cap {
            let c = theory.c_of(r).unwrap();
            let cbar = theory.c_bar(r).unwrap();
            for e in c..=cbar {
                let alpha = Charge::new(r, e);
                match engine.reflection_defect(&alpha) {
                    Ok(d) if d.is_zero() => {}
                    Ok(d) => report.warn(format!(
                        "a_zero_minus.{r}.{e}: inconsistent with reflection (defect {})",
                        format_q(&d)
                    )),
                    Err(err) => report.warn(format!("a_zero_minus.{r}.{e}: {err}")),
                }
            }
        }
        report
    }

    /// `A_{0-}(α) - A_{0+}(ᾱ)`, which reflection symmetry forces to vanish.
    pub fn reflection_defect(&self, alpha: &Charge) -> Result<Q> {
        let mirror = alpha.reflect(self.genus());
        Ok(self.a_zero_minus(alpha)? - self.a_zero_minus(&mirror)? - self.wall_diff_origin(&mirror)?)
    }
}

/// Solve `H(r,e) = Σ_{m | gcd(r,e)} H̄(r/m, e/m) / m²` for `H̄`, rank by rank.
fn multicover_table(theory: &Theory) -> BTreeMap<(i64, i64), Q> {
    let mut out: BTreeMap<(i64, i64), Q> = BTreeMap::new();
    for r in 1..=theory.rank_cap {
        for rho in 0..r {
            let mut v = theory.higgs_value(r, rho);
            let g = gcd_i64(r, rho);
            for m in 2..=g {
                if g % m != 0 {
                    continue;
                }
                let (rs, es) = (r / m, rho / m);
                let sub = out.get(&(rs, es.rem_euclid(rs))).cloned().unwrap_or_else(Q::zero);
                v -= sub * q_frac(1, m * m);
            }
            if !v.is_zero() {
                out.insert((r, rho), v);
            }
        }
    }
    out
}

/// `(-1)^χ χ` as a rational, exposed for the other modules.
pub fn euler_factor(alpha: &Charge, genus: i64) -> Q {
    let chi = alpha.chi(genus);
    q_int(sign_pow(chi) * chi)
}
