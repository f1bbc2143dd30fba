//! The integer chain complex of a complete system and the two lower bounds
//! computed from it.
//!
//! Three matrices are assembled:
//!
//! * `d0`, one row, with entry `arity(f) - 1` for every symbol `f`;
//! * `d1`, symbols by rules, whose column for `l -> r` is the symbol-count
//!   difference `φ(r) - φ(l)`;
//! * `D(R)`, rules by critical pairs, whose column for the pair `(t_i, s_i)`
//!   records how many times each rule is used on the two sides of the
//!   joining diagram, plus the two rules of the peak itself.
//!
//! Over the coefficient ring selected by the degree, `e(R)` counts the
//! invertible elementary divisors of `D(R)` and `#R - e(R)` bounds the size
//! of every equivalent rule set. Subtracting the rank of `d1` from that bound
//! gives the minimal number of generators of the second homology group.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::Serialize;

use crate::critical::{critical_pairs, CriticalPeak};
use crate::error::{Error, Result};
use crate::linalg::{factorize, is_prime, rank_mod_p, snf, snf_with_transforms, IntMatrix, SnfResult};
use crate::term::Signature;
use crate::trs::{Strategy, Trs};

/// Coefficient ring: the integers, or the integers modulo a prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ring {
    Z,
    Zp(u64),
}

impl Ring {
    pub fn zp(p: u64) -> Result<Ring> {
        if is_prime(p) {
            Ok(Ring::Zp(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    /// `Z` for degree 0, `Z/dZ` for a prime degree, an error otherwise.
    pub fn for_degree(d: u64) -> Result<Ring> {
        match d {
            0 => Ok(Ring::Z),
            d if is_prime(d) => Ok(Ring::Zp(d)),
            d => {
                let f = factorize(d);
                let factors = if f.is_empty() {
                    "a unit".to_string()
                } else {
                    f.iter().map(u64::to_string).collect::<Vec<_>>().join(" * ")
                };
                Err(Error::CompositeDegree { degree: d, factors })
            }
        }
    }

    /// Rank of `m` over this ring. Over `Z` this is the rank over `Q`.
    pub fn rank(&self, m: &IntMatrix) -> usize {
        match *self {
            Ring::Z => snf(m).rank,
            Ring::Zp(p) => rank_mod_p(m, p).expect("ring modulus is prime"),
        }
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Z => f.write_str("Z"),
            Ring::Zp(p) => write!(f, "Z/{p}Z"),
        }
    }
}

impl Serialize for Ring {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `D(R)`: row `j` is rule `j`, column `i` is critical peak `i`, and the
/// entry is `nr_j(s_i) - nr_j(t_i) + δ(b_i, j) - δ(a_i, j)`.
pub fn build_d(trs: &Trs, cps: &[CriticalPeak], strat: Strategy, max_steps: usize) -> Result<IntMatrix> {
    let n = trs.len();
    let columns = cps
        .par_iter()
        .enumerate()
        .map(|(i, cp)| {
            let ts = trs.normalize_counted(&cp.t, strat, max_steps)?;
            let ss = trs.normalize_counted(&cp.s, strat, max_steps)?;
            if ts.normal_form != ss.normal_form {
                return Err(Error::NonJoinableCp {
                    index: i + 1,
                    t: cp.t.to_string(),
                    s: cp.s.to_string(),
                });
            }
            let mut col: Vec<BigInt> = (0..n)
                .map(|j| BigInt::from(ss.usage[j]) - BigInt::from(ts.usage[j]))
                .collect();
            col[cp.inner - 1] += 1;
            col[cp.outer - 1] -= 1;
            Ok(col)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IntMatrix::from_columns(n, &columns))
}

/// `d1`: symbols by rules, column `j` is `φ(r_j) - φ(l_j)`.
pub fn build_d1(trs: &Trs) -> IntMatrix {
    let sig = trs.signature();
    let columns: Vec<Vec<BigInt>> = trs
        .rules()
        .iter()
        .map(|r| {
            let l = r.lhs.symbol_counts(sig);
            let rr = r.rhs.symbol_counts(sig);
            l.iter().zip(&rr).map(|(a, b)| BigInt::from(b - a)).collect()
        })
        .collect();
    IntMatrix::from_columns(sig.len(), &columns)
}

/// `d0`: a single row with `arity(f) - 1` per symbol.
pub fn build_d0(sig: &Signature) -> IntMatrix {
    let row: Vec<BigInt> = sig.iter().map(|f| BigInt::from(f.arity() as i64 - 1)).collect();
    IntMatrix::from_rows(1, sig.len(), row)
}

/// Number of invertible elementary divisors of `d` over `ring`: divisors
/// equal to 1 over `Z`, the rank over a field.
pub fn e_of(d: &IntMatrix, ring: Ring) -> usize {
    match ring {
        Ring::Z => snf(d).unit_count(),
        Ring::Zp(p) => rank_mod_p(d, p).expect("ring modulus is prime"),
    }
}

/// Minimal number of generators of `Z^free_rank × Π Z/d_i Z` with every
/// `d_i >= 2`.
pub fn s_of_group(free_rank: usize, torsion_divisors: &[BigInt]) -> usize {
    debug_assert!(torsion_divisors.iter().all(|d| *d > BigInt::one()));
    free_rank + torsion_divisors.len()
}

/// Minimal number of generators of `ker d0 / im d1` over the ring selected
/// by the degree.
pub fn s_h1(trs: &Trs) -> Result<usize> {
    let ring = Ring::for_degree(trs.degree())?;
    Ok(s_h1_over(trs, ring))
}

fn s_h1_over(trs: &Trs, ring: Ring) -> usize {
    let d0 = build_d0(trs.signature());
    let d1 = build_d1(trs);
    let n = trs.signature().len();
    match ring {
        Ring::Zp(_) => {
            let kernel_dim = n - ring.rank(&d0);
            kernel_dim - ring.rank(&d1)
        }
        Ring::Z => {
            let s0 = snf_with_transforms(&d0);
            let t = s0.transforms.as_ref().expect("transforms requested");
            // columns r0.. of V span ker d0; V^{-1} gives coordinates in that basis
            let coords = t.v_inv.mul(&d1);
            let kernel_rank = n - s0.rank;
            debug_assert!((0..s0.rank).all(|r| coords.row(r).iter().all(|x| *x == BigInt::from(0))));
            let rows: Vec<BigInt> = (s0.rank..n).flat_map(|r| coords.row(r).to_vec()).collect();
            let c = IntMatrix::from_rows(kernel_rank, d1.cols(), rows);
            let sc = snf(&c);
            s_of_group(kernel_rank - sc.rank, &sc.torsion())
        }
    }
}

/// What was checked before the bound was computed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Completeness {
    /// Every critical pair was joined under the strategy.
    pub locally_confluent: bool,
    pub pairs_checked: usize,
    /// Termination is never proven; it is an assumption of the caller.
    pub termination: &'static str,
}

#[derive(Clone, Debug)]
pub struct BoundReport {
    pub degree: u64,
    pub ring: Ring,
    pub strategy: Strategy,
    pub n_rules: usize,
    pub n_symbols: usize,
    pub n_cps: usize,
    pub n_prime_cps: usize,
    pub prime_only: bool,
    pub cps: Vec<CriticalPeak>,
    pub d: IntMatrix,
    /// Smith normal form of `D(R)` over `Z`, whatever the ring.
    pub snf: SnfResult,
    pub e: usize,
    pub lower_bound: usize,
    pub rank_d1: usize,
    pub s_h2: usize,
    pub s_h1: Option<usize>,
    pub completeness: Completeness,
}

/// Runs the whole pipeline: degree, ring, critical pairs, `D(R)`, `e(R)`,
/// the bound `#R - e(R)`, and the homology generator counts.
pub fn analyze(trs: &Trs, strat: Strategy, use_prime: bool, max_steps: usize) -> Result<BoundReport> {
    let degree = trs.degree();
    let ring = Ring::for_degree(degree)?;
    let all = critical_pairs(trs);
    let n_cps = all.len();
    let n_prime_cps = all.iter().filter(|c| c.prime).count();

    let joins = all
        .par_iter()
        .map(|cp| Ok(trs.normal_form(&cp.t, strat, max_steps)? == trs.normal_form(&cp.s, strat, max_steps)?))
        .collect::<Result<Vec<bool>>>()?;
    let failed = joins.iter().filter(|j| !**j).count();
    if failed > 0 {
        return Err(Error::NotComplete(failed));
    }

    let cps: Vec<CriticalPeak> = if use_prime {
        all.into_iter().filter(|c| c.prime).collect()
    } else {
        all
    };
    let d = build_d(trs, &cps, strat, max_steps)?;
    let snf_z = snf(&d);
    let e = match ring {
        Ring::Z => snf_z.unit_count(),
        Ring::Zp(_) => e_of(&d, ring),
    };
    let n = trs.len();
    let lower_bound = n - e;
    let rank_d1 = ring.rank(&build_d1(trs));
    let s_h2 = lower_bound
        .checked_sub(rank_d1)
        .expect("rank(d1) + e(R) <= #R because d1 * D(R) vanishes over the ring");
    Ok(BoundReport {
        degree,
        ring,
        strategy: strat,
        n_rules: n,
        n_symbols: trs.signature().len(),
        n_cps,
        n_prime_cps,
        prime_only: use_prime,
        cps,
        d,
        snf: snf_z,
        e,
        lower_bound,
        rank_d1,
        s_h2,
        s_h1: Some(s_h1_over(trs, ring)),
        completeness: Completeness {
            locally_confluent: true,
            pairs_checked: n_cps,
            termination: "assumed",
        },
    })
}
