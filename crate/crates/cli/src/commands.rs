use std::fmt;

use num_traits::Zero;
use serde_json::{json, Map, Value};
use wallcross_core::bell::alternating_identity;
use wallcross_core::decomp::enum_wall_decomps;
use wallcross_core::error::{EngineError, ParseError};
use wallcross_core::genfun::{palindrome_check, z_delta, z_infty, z_minus_infty, z_zero_minus, LaurentRational};
use wallcross_core::hall::check_commutator_identity;
use wallcross_core::invariants::Engine;
use wallcross_core::kslie::ks_check;
use wallcross_core::lattice::{enumerate_walls, Charge, SidedRational};
use wallcross_core::rational::{format_q, parse_q, Q};
use wallcross_core::theory::{Chamber, Theory};

use crate::report::RunReport;
use crate::Command;

#[derive(Debug)]
pub enum CliError {
    Io(String, std::io::Error),
    Parse(ParseError),
    Engine(EngineError),
    Usage(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(path, e) => write!(f, "cannot read {path}: {e}"),
            CliError::Parse(e) => write!(f, "{e}"),
            CliError::Engine(e) => write!(f, "{e}"),
            CliError::Usage(m) => write!(f, "{m}"),
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Parse(e)
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> Self {
        CliError::Engine(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn read_theory(path: &str) -> Result<(Theory, Vec<u8>)> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Io(path.to_string(), e))?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| CliError::Usage(format!("{path} is not UTF-8")))?;
    Ok((Theory::from_json_str(&text)?, bytes))
}

fn load_engine(path: &str) -> Result<(Engine, Vec<u8>)> {
    let (theory, bytes) = read_theory(path)?;
    let report = Engine::validate(&theory);
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    Ok((Engine::new(theory)?, bytes))
}

fn q(x: &Q) -> Value {
    Value::from(format_q(x))
}

fn function_json(f: &LaurentRational) -> Value {
    f.to_json()
}

pub fn run(command: Command, args: &[String]) -> Result<RunReport> {
    match command {
        Command::Validate { theory } => {
            let (t, bytes) = read_theory(&theory)?;
            let report = Engine::validate(&t);
            let results = json!({"errors": report.errors, "warnings": report.warnings});
            Ok(RunReport::new(args, Some(&bytes), results, Some(report.is_valid())))
        }
        Command::Walls { theory, charge, delta_max } => {
            let (engine, bytes) = load_engine(&theory)?;
            let alpha: Charge = charge.parse()?;
            let dmax = match delta_max {
                Some(s) => parse_q(&s)?,
                None => engine.theory().delta_max.clone(),
            };
            let mut walls = Vec::new();
            for dc in enumerate_walls(&alpha, Some(engine.mu0()), &dmax) {
                let mut decomps = Vec::new();
                for l in 2..=alpha.rank() as usize {
                    for d in enum_wall_decomps(&alpha, &dc, l, l) {
                        let (framed, higgs) = d.parts.split_last().unwrap();
                        decomps.push(json!({
                            "framed": framed.to_string(),
                            "higgs": higgs.iter().map(|h| h.to_string()).collect::<Vec<_>>(),
                        }));
                    }
                }
                walls.push(json!({"delta": format_q(&dc), "decompositions": decomps}));
            }
            let results = json!({"charge": alpha.to_string(), "walls": walls});
            Ok(RunReport::new(args, Some(&bytes), results, None))
        }
        Command::Invariant { theory, charge, chamber } => {
            let (engine, bytes) = load_engine(&theory)?;
            let alpha: Charge = charge.parse()?;
            let ch: Chamber = chamber.parse()?;
            let value = engine.a_invariant(&alpha, &ch)?;
            let results = json!({"charge": alpha.to_string(), "chamber": ch.to_string(), "value": q(&value)});
            Ok(RunReport::new(args, Some(&bytes), results, None))
        }
        Command::Cross { theory, charge, wall } => {
            let (engine, bytes) = load_engine(&theory)?;
            let alpha: Charge = charge.parse()?;
            let w = parse_q(&wall)?;
            let (below, above, formula) = if w.is_zero() {
                (
                    engine.a_invariant(&alpha, &Chamber::ZeroMinus)?,
                    engine.a_invariant(&alpha, &Chamber::ZeroPlus)?,
                    engine.wall_diff_origin(&alpha)?,
                )
            } else if w > Q::zero() {
                (
                    engine.a_invariant(&alpha, &Chamber::Delta(SidedRational::minus(w.clone())))?,
                    engine.a_invariant(&alpha, &Chamber::Delta(SidedRational::plus(w.clone())))?,
                    engine.wall_diff_positive(&alpha, &w)?,
                )
            } else {
                return Err(CliError::Usage("--wall must be 0 or a positive wall".into()));
            };
            let pass = &above - &below == formula;
            let results = json!({
                "charge": alpha.to_string(),
                "wall": format_q(&w),
                "below": q(&below),
                "above": q(&above),
                "difference": q(&formula),
            });
            Ok(RunReport::new(args, Some(&bytes), results, Some(pass)))
        }
        Command::Zfun { theory, rank, chamber, expand } => {
            let (engine, bytes) = load_engine(&theory)?;
            let t = engine.theory();
            let ch: Chamber = chamber.parse::<Chamber>()?.normalized();
            let mut results = Map::new();
            let f: LaurentRational = match &ch {
                Chamber::ZeroMinus => z_zero_minus(t, rank)?.into(),
                Chamber::PlusInfinity => z_infty(t, rank)?,
                Chamber::MinusInfinity => z_minus_infty(t, rank)?,
                Chamber::Delta(d) if d.value > Q::zero() => z_delta(t, rank, d)?,
                other => {
                    return Err(CliError::Usage(format!(
                        "zfun supports 0-, inf, -inf and positive delta, got {other}"
                    )))
                }
            };
            results.insert("rank".into(), Value::from(rank));
            results.insert("chamber".into(), Value::from(ch.to_string()));
            results.insert("function".into(), function_json(&f));
            if matches!(ch, Chamber::PlusInfinity | Chamber::MinusInfinity) {
                results.insert("palindromic".into(), Value::from(palindrome_check(&f)));
            }
            if let Some(n) = expand {
                let series = if ch == Chamber::MinusInfinity {
                    f.expand_descending(-n)
                } else {
                    f.expand_ascending(n)
                };
                results.insert("expansion".into(), series.to_json());
            }
            Ok(RunReport::new(args, Some(&bytes), Value::Object(results), None))
        }
        Command::KsCheck { theory, alpha, beta, wall, order } => {
            let (engine, bytes) = load_engine(&theory)?;
            let alpha: Charge = alpha.parse()?;
            let beta: Charge = beta.parse()?;
            let w = parse_q(&wall)?;
            let rep = ks_check(&engine, &alpha, &beta, &w, order)?;
            let coefficients: Vec<Value> = rep
                .coefficients
                .iter()
                .map(|c| {
                    json!({
                        "charge": c.charge.to_string(),
                        "from_product": q(&c.from_product),
                        "from_wall": q(&c.from_wall),
                    })
                })
                .collect();
            let results = json!({"group_equal": rep.group_equal, "coefficients": coefficients});
            Ok(RunReport::new(args, Some(&bytes), results, Some(rep.pass())))
        }
        Command::HallCheck { rank_cap, degree_bound, delta_max } => {
            if !(1..=6).contains(&rank_cap) {
                return Err(CliError::Usage("--rank-cap must be in 1..=6".into()));
            }
            let dmax = parse_q(&delta_max)?;
            let (mut checked, mut failures) = (0usize, Vec::new());
            for r in 1..=rank_cap {
                for e in -degree_bound..=degree_bound {
                    let alpha = Charge::new(r, e);
                    for dc in enumerate_walls(&alpha, None, &dmax) {
                        let rep = check_commutator_identity(&alpha, &dc, rank_cap)?;
                        checked += 1;
                        if let Some(m) = rep.mismatch {
                            failures.push(json!({"charge": alpha.to_string(), "wall": format_q(&dc), "mismatch": m}));
                        }
                    }
                }
            }
            let pass = failures.is_empty();
            let results = json!({"checked": checked, "failures": failures});
            Ok(RunReport::new(args, None, results, Some(pass)))
        }
        Command::Bell { n } => {
            if n < 1 {
                return Err(CliError::Usage("--n must be >= 1".into()));
            }
            let failing: Vec<u32> = (1..=n).filter(|k| !alternating_identity(*k)).collect();
            let results = json!({"n": n, "failing": failing});
            Ok(RunReport::new(args, None, results, Some(failing.is_empty())))
        }
    }
}
