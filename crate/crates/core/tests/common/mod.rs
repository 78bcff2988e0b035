//! Toy theories shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wallcross_core::invariants::Engine;
use wallcross_core::lattice::Charge;
use wallcross_core::rational::{q_frac, q_int, Q};
use wallcross_core::theory::Theory;

pub fn small_rational(rng: &mut ChaCha8Rng) -> Q {
    let p: i64 = rng.gen_range(-4..=4);
    let d: i64 = rng.gen_range(1..=3);
    q_frac(p, d)
}

/// Random palindromic Higgs table and a `0-` table completed so that it is
/// consistent with reflection: the lower half of each window is random, the
/// upper half is forced.
pub fn toy_theory(genus: i64, rank_cap: i64, mu0: i64, delta_max: i64, seed: u64) -> Theory {
    assert!(mu0 <= genus - 1, "window would be empty");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c: BTreeMap<i64, i64> = (1..=rank_cap).map(|r| (r, r * mu0)).collect();
    let mut higgs = BTreeMap::new();
    for r in 1..=rank_cap {
        let mut row = BTreeMap::new();
        for rho in 0..r {
            let mirror = (-rho).rem_euclid(r);
            if mirror < rho {
                let v: Q = row.get(&mirror).cloned().unwrap_or_else(Q::zero);
                row.insert(rho, v);
            } else {
                row.insert(rho, small_rational(&mut rng));
            }
        }
        row.retain(|_, v: &mut Q| !v.is_zero());
        higgs.insert(r, row);
    }
    let mut theory = Theory {
        genus,
        rank_cap,
        c,
        higgs,
        a_zero_minus: BTreeMap::new(),
        delta_max: q_int(delta_max),
    };
    for r in 1..=rank_cap {
        let (lo, hi) = (r * mu0, -r * mu0 + 2 * r * (genus - 1));
        let center = r * (genus - 1);
        let mut row = BTreeMap::new();
        for e in lo..=center {
            row.insert(e, small_rational(&mut rng));
        }
        theory.a_zero_minus.insert(r, row.clone());
        let engine = Engine::new(theory.clone()).expect("toy theory is valid");
        for e in center + 1..=hi {
            let mirror = Charge::new(r, 2 * r * (genus - 1) - e);
            let od = engine.wall_diff_origin(&mirror).unwrap();
            row.insert(e, row[&mirror.degree()].clone() + od);
        }
        row.retain(|_, v| !v.is_zero());
        theory.a_zero_minus.insert(r, row);
    }
    theory
}

/// Same layout with every Higgs invariant zero.
pub fn zero_higgs_theory(genus: i64, rank_cap: i64, mu0: i64, seed: u64) -> Theory {
    let mut t = toy_theory(genus, rank_cap, mu0, 12, seed);
    t.higgs.clear();
    // with H ≡ 0 reflection consistency says the window is symmetric
    for (r, row) in t.a_zero_minus.iter_mut() {
        let center = r * (genus - 1);
        let lower: Vec<(i64, Q)> = row.range(..=center).map(|(e, v)| (*e, v.clone())).collect();
        row.retain(|e, _| *e <= center);
        for (e, v) in lower {
            if e < center {
                row.insert(2 * center - e, v);
            }
        }
    }
    t
}

/// The three toy theories used across suites (g = 0, 1, 2).
pub fn standard_theories() -> Vec<Theory> {
    vec![
        toy_theory(0, 4, -2, 12, 11),
        toy_theory(1, 4, -1, 12, 12),
        toy_theory(2, 4, 0, 12, 13),
    ]
}

pub fn window(theory: &Theory, rank: i64) -> std::ops::RangeInclusive<i64> {
    theory.c_of(rank).unwrap()..=theory.c_bar(rank).unwrap()
}
