//! Partial Bell polynomials, Faà di Bruno composition and the alternating
//! identity `Σ_k (-1)^k k! B_{n,k}(1, …, 1) = (-1)^n`.
//!
//! Series are exponential generating functions: `f(x) = Σ_{n≥1} a_n x^n / n!`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::EngineError;
use crate::rational::{factorial, inv_factorial, q_int, sign_pow, Q};

/// Multiplicities `j_1, …, j_{n-k+1}` with `Σ i·j_i = n` and `Σ j_i = k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub multiplicities: Vec<u32>,
}

impl Partition {
    pub fn size(&self) -> u32 {
        self.multiplicities
            .iter()
            .enumerate()
            .map(|(i, j)| (i as u32 + 1) * j)
            .sum()
    }

    pub fn length(&self) -> u32 {
        self.multiplicities.iter().sum()
    }
}

/// All partitions of `n` into exactly `k` parts.
pub fn partitions(n: u32, k: u32) -> Vec<Partition> {
    fn rec(i: u32, width: u32, size_left: u32, parts_left: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if i > width {
            if size_left == 0 && parts_left == 0 {
                out.push(Partition {
                    multiplicities: cur.clone(),
                });
            }
            return;
        }
        let max_j = (size_left / i).min(parts_left);
        for j in 0..=max_j {
            cur.push(j);
            rec(i + 1, width, size_left - i * j, parts_left - j, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k == 0 || k > n {
        return out;
    }
    rec(1, n - k + 1, n, k, &mut Vec::new(), &mut out);
    out
}

/// `B_{n,k}(x_1, …, x_{n-k+1}) = Σ n! / ∏ j_i! · ∏ (x_i / i!)^{j_i}`.
pub fn bell_poly(n: u32, k: u32, x: &[Q]) -> Result<Q, EngineError> {
    if k < 1 || k > n {
        return Err(EngineError::Precondition(format!("need 1 <= k <= n, got n={n}, k={k}")));
    }
    if x.len() < (n - k + 1) as usize {
        return Err(EngineError::Precondition(format!(
            "need {} arguments, got {}",
            n - k + 1,
            x.len()
        )));
    }
    let nf = Q::from_integer(factorial(n));
    let mut total = Q::zero();
    for p in partitions(n, k) {
        let mut term = nf.clone();
        for (i, &j) in p.multiplicities.iter().enumerate() {
            if j == 0 {
                continue;
            }
            let base = &x[i] * inv_factorial(i as u32 + 1);
            term = term * num_traits::pow(base, j as usize) * inv_factorial(j);
        }
        total += term;
    }
    Ok(total)
}

/// EGF coefficients `c_1..c_N` of `g(f(x))`: `c_n = Σ_k b_k B_{n,k}(a_1, …)`.
///
/// `a` and `b` hold `a_1, a_2, …` (no constant term); missing entries are zero.
pub fn faa_di_bruno(a: &[Q], b: &[Q], order: u32) -> Result<Vec<Q>, EngineError> {
    if order < 1 {
        return Err(EngineError::Precondition("order must be >= 1".into()));
    }
    let get = |v: &[Q], i: usize| v.get(i).cloned().unwrap_or_else(Q::zero);
    let a_full: Vec<Q> = (0..order as usize).map(|i| get(a, i)).collect();
    let mut out = Vec::with_capacity(order as usize);
    for n in 1..=order {
        let mut c = Q::zero();
        for k in 1..=n {
            let bk = get(b, k as usize - 1);
            if !bk.is_zero() {
                c += bk * bell_poly(n, k, &a_full)?;
            }
        }
        out.push(c);
    }
    Ok(out)
}

/// Variant taking series with an explicit constant term in slot 0, which
/// must vanish.
pub fn faa_di_bruno_with_constant(a: &[Q], b: &[Q], order: u32) -> Result<Vec<Q>, EngineError> {
    for (name, s) in [("inner", a), ("outer", b)] {
        if s.first().is_some_and(|c| !c.is_zero()) {
            return Err(EngineError::Precondition(format!("{name} series has a nonzero constant term")));
        }
    }
    let tail = |s: &[Q]| s.get(1..).map(|t| t.to_vec()).unwrap_or_default();
    faa_di_bruno(&tail(a), &tail(b), order)
}

pub fn alternating_identity(n: u32) -> bool {
    if n < 1 {
        return false;
    }
    let ones = vec![Q::one(); n as usize];
    let sum: Q = (1..=n)
        .map(|k| {
            let sign = q_int(sign_pow(k as i64));
            sign * Q::from_integer(factorial(k)) * bell_poly(n, k, &ones).expect("in range")
        })
        .sum();
    sum == q_int(sign_pow(n as i64))
}

/// `B_{n,k}(1, …, 1)` as an integer.
pub fn stirling2(n: u32, k: u32) -> BigInt {
    if k == 0 || k > n {
        return BigInt::from(u8::from(n == 0 && k == 0));
    }
    let ones = vec![Q::one(); (n - k + 1) as usize];
    bell_poly(n, k, &ones).expect("in range").to_integer()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Q> {
        v.iter().map(|x| q_int(*x)).collect()
    }

    #[test]
    fn bell_examples() {
        let x = ints(&[2, 3, 5, 7]);
        assert_eq!(bell_poly(4, 1, &x).unwrap(), q_int(7));
        assert_eq!(bell_poly(3, 2, &ints(&[1, 1])).unwrap(), q_int(3));
        assert_eq!(bell_poly(4, 2, &ints(&[1, 1, 1])).unwrap(), q_int(7));
        assert!(bell_poly(2, 3, &x).is_err());
        assert!(bell_poly(4, 1, &ints(&[1])).is_err());
    }

    #[test]
    fn partition_constraints() {
        for n in 1..=8 {
            for k in 1..=n {
                for p in partitions(n, k) {
                    assert_eq!((p.size(), p.length()), (n, k));
                    assert_eq!(p.multiplicities.len() as u32, n - k + 1);
                }
            }
        }
        assert_eq!(partitions(4, 2).len(), 2);
    }

    #[test]
    fn alternating_small() {
        assert!(alternating_identity(1));
        assert!(alternating_identity(4));
        assert!(alternating_identity(20));
    }

    #[test]
    fn composition_with_exponential() {
        // f = e^x - 1, g = -x/(1+x): g(f(x)) = e^{-x} - 1
        let a = vec![Q::one(); 6];
        let b: Vec<Q> = (1..=6)
            .map(|n| q_int(sign_pow(n)) * Q::from_integer(factorial(n as u32)))
            .collect();
        let c = faa_di_bruno(&a, &b, 6).unwrap();
        for (n, cn) in c.iter().enumerate() {
            assert_eq!(*cn, q_int(sign_pow(n as i64 + 1)));
        }
        assert!(faa_di_bruno_with_constant(&ints(&[1, 1]), &ints(&[0, 1]), 3).is_err());
    }
}
