//! Theory data: genus, rank cap, vanishing thresholds, the periodic Higgs
//! table and the `0-` boundary table, plus JSON ingestion and validation.
//!
//! JSON layout:
//!
//! ```json
//! {
//!   "genus": 0,
//!   "rank_cap": 2,
//!   "c": {"1": -2, "2": -4},
//!   "higgs": {"1": {"0": "1/2"}, "2": {"0": "1", "1": "-3/4"}},
//!   "a_zero_minus": {"1": {"-2": "1", "-1": "2/3"}},
//!   "delta_max": "12"
//! }
//! ```
//!
//! Higgs values are keyed by residue `0 ≤ e < r`; missing entries are zero,
//! as are missing `a_zero_minus` entries inside the window `c(r) ≤ e ≤ c̄(r)`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde_json::{Map, Value};

use crate::error::ParseError;
use crate::lattice::{Charge, Side, SidedRational, StabilityParam};
use crate::rational::{format_q, parse_q, q_frac, q_int, Q};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theory {
    pub genus: i64,
    pub rank_cap: i64,
    /// `c(r)`: `A_δ(r, e) = 0` for `e < c(r)` and every `δ > 0`.
    pub c: BTreeMap<i64, i64>,
    /// `H(r, ρ)` for residues `0 ≤ ρ < r`.
    pub higgs: BTreeMap<i64, BTreeMap<i64, Q>>,
    /// `A_{0-}(r, e)` on the window `c(r) ≤ e ≤ c̄(r)`.
    pub a_zero_minus: BTreeMap<i64, BTreeMap<i64, Q>>,
    pub delta_max: Q,
}

const FIELDS: [&str; 6] = ["genus", "rank_cap", "c", "higgs", "a_zero_minus", "delta_max"];

impl Theory {
    pub fn from_json_str(s: &str) -> Result<Theory, ParseError> {
        let value: Value = serde_json::from_str(s).map_err(|e| ParseError::theory("<document>", e.to_string()))?;
        Theory::from_json(&value)
    }

    pub fn from_json(value: &Value) -> Result<Theory, ParseError> {
        let obj = value
            .as_object()
            .ok_or_else(|| ParseError::theory("<document>", "expected a JSON object"))?;
        if let Some(extra) = obj.keys().find(|k| !FIELDS.contains(&k.as_str())) {
            return Err(ParseError::theory(extra.as_str(), "unknown field"));
        }
        let field = |name: &str| obj.get(name).ok_or_else(|| ParseError::theory(name, "missing field"));
        let genus = json_int(field("genus")?, "genus")?;
        let rank_cap = json_int(field("rank_cap")?, "rank_cap")?;

        let mut c = BTreeMap::new();
        for (k, v) in json_object(field("c")?, "c")? {
            let path = format!("c.{k}");
            c.insert(key_int(k, &path)?, json_int(v, &path)?);
        }
        let higgs = rational_table(field("higgs")?, "higgs")?;
        let a_zero_minus = rational_table(field("a_zero_minus")?, "a_zero_minus")?;
        let delta_max = json_rational(field("delta_max")?, "delta_max")?;
        Ok(Theory {
            genus,
            rank_cap,
            c,
            higgs,
            a_zero_minus,
            delta_max,
        })
    }

    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("genus".into(), Value::from(self.genus));
        obj.insert("rank_cap".into(), Value::from(self.rank_cap));
        obj.insert(
            "c".into(),
            Value::Object(self.c.iter().map(|(r, v)| (r.to_string(), Value::from(*v))).collect()),
        );
        obj.insert("higgs".into(), table_to_json(&self.higgs));
        obj.insert("a_zero_minus".into(), table_to_json(&self.a_zero_minus));
        obj.insert("delta_max".into(), Value::from(format_q(&self.delta_max)));
        Value::Object(obj)
    }

    /// Common ratio `c(r)/r`, if `c(1)` is present.
    pub fn mu0(&self) -> Option<Q> {
        self.c.get(&1).map(|&c1| q_int(c1))
    }

    /// `μ̄₀ = -μ₀ + 2(g-1)`.
    pub fn mu0_bar(&self) -> Option<Q> {
        self.mu0().map(|m| -m + q_int(2 * (self.genus - 1)))
    }

    pub fn c_of(&self, rank: i64) -> Option<i64> {
        self.c.get(&rank).copied()
    }

    /// `c̄(r) = -c(r) + 2r(g-1)`.
    pub fn c_bar(&self, rank: i64) -> Option<i64> {
        self.c_of(rank).map(|c| -c + 2 * rank * (self.genus - 1))
    }

    /// `H(r, e)` through periodicity; zero when absent.
    pub fn higgs_value(&self, rank: i64, degree: i64) -> Q {
        self.higgs
            .get(&rank)
            .and_then(|row| row.get(&degree.rem_euclid(rank)))
            .cloned()
            .unwrap_or_else(Q::zero)
    }

    /// Raw table lookup, zero when absent (no window check).
    pub fn a_zero_minus_entry(&self, alpha: &Charge) -> Q {
        self.a_zero_minus
            .get(&alpha.rank())
            .and_then(|row| row.get(&alpha.degree()))
            .cloned()
            .unwrap_or_else(Q::zero)
    }

    /// Structural checks that do not need the engine.
    pub fn structural_report(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        if self.genus < 0 {
            report.error(format!("genus: must be >= 0, got {}", self.genus));
        }
        if self.rank_cap < 1 {
            report.error(format!("rank_cap: must be >= 1, got {}", self.rank_cap));
        }
        if !self.delta_max.is_positive() {
            report.error(format!("delta_max: must be > 0, got {}", format_q(&self.delta_max)));
        }
        for r in 1..=self.rank_cap.max(0) {
            if !self.c.contains_key(&r) {
                report.error(format!("c: threshold missing for rank {r}"));
            }
        }
        for &r in self.c.keys() {
            if r < 1 || r > self.rank_cap {
                report.error(format!("c: rank {r} outside 1..={}", self.rank_cap));
            }
        }
        if let Some(&c1) = self.c.get(&1) {
            for (&r, &cr) in &self.c {
                if q_frac(cr, r.max(1)) != q_int(c1) {
                    report.error(format!(
                        "c: ratio c({r})/{r} = {} differs from c(1)/1 = {c1}",
                        format_q(&q_frac(cr, r.max(1)))
                    ));
                }
            }
        }
        for (&r, &cr) in &self.c {
            let cbar = -cr + 2 * r * (self.genus - 1);
            if cbar < cr {
                report.error(format!("c: empty window at rank {r}: c̄({r}) = {cbar} < c({r}) = {cr}"));
            }
        }
        for (&r, row) in &self.higgs {
            if r < 1 || r > self.rank_cap {
                report.error(format!("higgs: rank {r} outside 1..={}", self.rank_cap));
                continue;
            }
            for &rho in row.keys() {
                if !(0..r).contains(&rho) {
                    report.error(format!("higgs.{r}: residue {rho} outside 0..{r}"));
                }
            }
            for rho in 0..r {
                let mirror = (-rho).rem_euclid(r);
                if self.higgs_value(r, rho) != self.higgs_value(r, mirror) {
                    report.error(format!(
                        "higgs.{r}: not palindromic, H({r},{rho}) != H({r},{mirror})"
                    ));
                }
            }
        }
        for (&r, row) in &self.a_zero_minus {
            if r < 1 || r > self.rank_cap {
                report.error(format!("a_zero_minus: rank {r} outside 1..={}", self.rank_cap));
                continue;
            }
            let (Some(c), Some(cbar)) = (self.c_of(r), self.c_bar(r)) else {
                continue;
            };
            for &e in row.keys() {
                if e < c || e > cbar {
                    report.error(format!(
                        "a_zero_minus.{r}.{e}: degree outside the window {c}..={cbar}"
                    ));
                }
            }
        }
        report
    }
}

fn json_int(v: &Value, path: &str) -> Result<i64, ParseError> {
    const LIMIT: i64 = 1 << 40;
    match v.as_i64() {
        Some(n) if n.abs() < LIMIT => Ok(n),
        Some(_) => Err(ParseError::theory(path, "integer out of range")),
        None => Err(ParseError::theory(path, format!("expected an integer, got {v}"))),
    }
}

fn key_int(k: &str, path: &str) -> Result<i64, ParseError> {
    let n: i64 = k
        .parse()
        .map_err(|_| ParseError::theory(path, format!("key {k:?} is not an integer")))?;
    if n.abs() >= 1 << 40 {
        return Err(ParseError::theory(path, "key out of range"));
    }
    Ok(n)
}

fn json_object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, ParseError> {
    v.as_object()
        .ok_or_else(|| ParseError::theory(path, "expected a JSON object"))
}

fn json_rational(v: &Value, path: &str) -> Result<Q, ParseError> {
    match v {
        Value::String(s) => parse_q(s).map_err(|e| ParseError::theory(path, e.to_string())),
        Value::Number(n) if n.is_i64() => Ok(q_int(json_int(v, path)?)),
        other => Err(ParseError::theory(
            path,
            format!("expected a \"p/q\" string, got {other}"),
        )),
    }
}

fn rational_table(v: &Value, name: &str) -> Result<BTreeMap<i64, BTreeMap<i64, Q>>, ParseError> {
    let mut out = BTreeMap::new();
    for (rk, row) in json_object(v, name)? {
        let rpath = format!("{name}.{rk}");
        let r = key_int(rk, &rpath)?;
        let mut entries = BTreeMap::new();
        for (ek, val) in json_object(row, &rpath)? {
            let path = format!("{rpath}.{ek}");
            let e = key_int(ek, &path)?;
            let q = json_rational(val, &path)?;
            if !q.is_zero() {
                entries.insert(e, q);
            }
        }
        out.insert(r, entries);
    }
    Ok(out)
}

fn table_to_json(t: &BTreeMap<i64, BTreeMap<i64, Q>>) -> Value {
    Value::Object(
        t.iter()
            .map(|(r, row)| {
                let inner: Map<String, Value> = row
                    .iter()
                    .map(|(e, q)| (e.to_string(), Value::from(format_q(q))))
                    .collect();
                (r.to_string(), Value::Object(inner))
            })
            .collect(),
    )
}

/// Errors make a theory unusable; warnings flag conjectural or
/// consistency properties that the engine does not depend on.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub errors: Vec<String>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.errors.is_empty()
    }

    pub(crate) fn error(&mut self, msg: String) {
        self.errors.push(msg);
    }

    pub(crate) fn warn(&mut self, msg: String) {
        self.warnings.push(msg);
    }
}

/// A point of the stability axis, possibly one of the limiting chambers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Chamber {
    ZeroMinus,
    ZeroPlus,
    Delta(StabilityParam),
    PlusInfinity,
    MinusInfinity,
}

impl Chamber {
    pub fn delta(value: Q, side: Side) -> Chamber {
        Chamber::Delta(SidedRational { value, side }).normalized()
    }

    /// Folds `delta=0±` into the named origin chambers.
    pub fn normalized(self) -> Chamber {
        match self {
            Chamber::Delta(p) if p.value.is_zero() => match p.side {
                Side::Plus => Chamber::ZeroPlus,
                Side::Minus => Chamber::ZeroMinus,
                Side::Exact => Chamber::Delta(p),
            },
            other => other,
        }
    }

    /// Mirror chamber under `δ ↦ -δ`.
    pub fn reflected(&self) -> Chamber {
        match self {
            Chamber::ZeroMinus => Chamber::ZeroPlus,
            Chamber::ZeroPlus => Chamber::ZeroMinus,
            Chamber::Delta(p) => Chamber::Delta(p.neg()),
            Chamber::PlusInfinity => Chamber::MinusInfinity,
            Chamber::MinusInfinity => Chamber::PlusInfinity,
        }
    }
}

impl fmt::Display for Chamber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Chamber::ZeroMinus => write!(f, "0-"),
            Chamber::ZeroPlus => write!(f, "0+"),
            Chamber::Delta(p) => write!(f, "delta={p}"),
            Chamber::PlusInfinity => write!(f, "inf"),
            Chamber::MinusInfinity => write!(f, "-inf"),
        }
    }
}

impl FromStr for Chamber {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ParseError::Chamber(s.to_string());
        match s.trim() {
            "0-" => return Ok(Chamber::ZeroMinus),
            "0+" => return Ok(Chamber::ZeroPlus),
            "inf" | "+inf" => return Ok(Chamber::PlusInfinity),
            "-inf" => return Ok(Chamber::MinusInfinity),
            _ => {}
        }
        let body = s.trim().strip_prefix("delta=").ok_or_else(bad)?;
        let (num, side) = if let Some(b) = body.strip_suffix('+') {
            (b, Side::Plus)
        } else if let Some(b) = body.strip_suffix('-') {
            (b, Side::Minus)
        } else {
            (body, Side::Exact)
        };
        let value = parse_q(num).map_err(|_| bad())?;
        Ok(Chamber::delta(value, side))
    }
}
