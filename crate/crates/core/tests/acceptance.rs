//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Runs with its own `main` so every line is printed even when an
//! earlier criterion fails.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use trsbound::conversion::SearchOptions;
use trsbound::equiv::{equiv_check, Verdict};
use trsbound::fixtures;
use trsbound::homology::{analyze, Ring};
use trsbound::linalg::{rank_mod_p, snf, snf_with_transforms, IntMatrix};
use trsbound::syntax::{parse_matrix, parse_trs_str};
use trsbound::term::{unify, Signature, Substitution, Term};
use trsbound::trs::{Strategy, DEFAULT_MAX_STEPS};

use common::*;

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> std::result::Result<Duration, String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:?}, limit {limit:?}"))?;
    Ok(t)
}

fn li() -> Strategy {
    Strategy::LeftmostInnermost
}

fn group() -> Check {
    let start = Instant::now();
    let trs = fixtures::group();
    let r = analyze(&trs, li(), false, DEFAULT_MAX_STEPS).map_err(|e| e.to_string())?;
    let rank2 = rank_mod_p(&r.d, 2).map_err(|e| e.to_string())?;
    let t = within(Duration::from_secs(5), start)?;
    ensure(r.degree == 2, || format!("degree {}", r.degree))?;
    ensure(r.n_cps == 48, || format!("{} critical pairs", r.n_cps))?;
    ensure(r.d.rows() == 10 && r.d.cols() == 48, || format!("D is {}x{}", r.d.rows(), r.d.cols()))?;
    ensure(rank2 == 8 && r.e == 8, || format!("rank over GF(2) {rank2}, e {}", r.e))?;
    ensure(r.lower_bound == 2, || format!("lower bound {}", r.lower_bound))?;
    ensure(r.s_h2 == 0, || format!("s(H2) {}", r.s_h2))?;
    Ok(format!("degree 2, 48 CPs, rank_2 D = 8, bound 2, s(H2) 0 in {t:.2?}"))
}

fn ave() -> Check {
    let start = Instant::now();
    let r = analyze(&fixtures::ave(), li(), false, DEFAULT_MAX_STEPS).map_err(|e| e.to_string())?;
    let t = within(Duration::from_secs(1), start)?;
    ensure(r.degree == 0 && r.ring == Ring::Z, || format!("degree {}", r.degree))?;
    ensure(r.n_cps == 1, || format!("{} critical pairs", r.n_cps))?;
    ensure(r.d == IntMatrix::zeros(5, 1), || format!("D = {:?}", r.d.to_i64_rows()))?;
    ensure(r.e == 0 && r.lower_bound == 5, || format!("e {}, bound {}", r.e, r.lower_bound))?;
    ensure(r.s_h2 == 3, || format!("s(H2) {}", r.s_h2))?;
    Ok(format!("D = 0 (5x1), e 0, bound 5, s(H2) 3 in {t:.2?}"))
}

/// Brute force over the 4! column orders and 2^4 column signs.
fn equal_up_to_columns(a: &[Vec<i64>], b: &[Vec<i64>]) -> bool {
    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(n - 1) {
            for i in 0..=p.len() {
                let mut q = p.clone();
                q.insert(i, n - 1);
                out.push(q);
            }
        }
        out
    }
    let cols = b[0].len();
    if a.len() != b.len() || a[0].len() != cols {
        return false;
    }
    perms(cols).iter().any(|perm| {
        (0u32..1 << cols).any(|signs| {
            (0..cols).all(|c| {
                let s = if signs >> c & 1 == 1 { -1 } else { 1 };
                (0..a.len()).all(|r| a[r][perm[c]] * s == b[r][c])
            })
        })
    })
}

fn minus() -> Check {
    let start = Instant::now();
    let r = analyze(&fixtures::minus(), li(), false, DEFAULT_MAX_STEPS).map_err(|e| e.to_string())?;
    let t = within(Duration::from_secs(1), start)?;
    let expected = parse_matrix(include_str!("../fixtures/minus_d.mat")).unwrap();
    let got = r.d.to_i64_rows().unwrap();
    ensure(r.degree == 0, || format!("degree {}", r.degree))?;
    ensure(r.n_cps == 4, || format!("{} critical pairs", r.n_cps))?;
    ensure(equal_up_to_columns(&got, &expected.to_i64_rows().unwrap()), || {
        format!("D = {got:?}")
    })?;
    let divs: Vec<BigInt> = vec![1.into(), 2.into()];
    ensure(r.snf.divisors == divs, || format!("divisors {:?}", r.snf.divisors))?;
    ensure(r.lower_bound == 3 && r.s_h2 == 1, || format!("bound {}, s(H2) {}", r.lower_bound, r.s_h2))?;
    Ok(format!("D matches up to column order/sign, divisors (1,2), bound 3, s(H2) 1 in {t:.2?}"))
}

fn assoc() -> Check {
    let r = analyze(&fixtures::assoc(), li(), false, DEFAULT_MAX_STEPS).map_err(|e| e.to_string())?;
    let d = r.d.to_i64_rows().unwrap();
    ensure(d == [[1]] || d == [[-1]], || format!("D = {d:?}"))?;
    ensure(r.lower_bound == 0, || format!("bound {}", r.lower_bound))?;
    Ok(format!("D = {d:?}, bound 0"))
}

fn identity(corpus: &[(String, trsbound::trs::Trs)]) -> Check {
    for (name, trs) in corpus {
        let r = analyze(trs, li(), false, DEFAULT_MAX_STEPS).map_err(|e| format!("{name}: {e}"))?;
        let oracle = s_h2_from_kernel(trs, li());
        ensure(oracle == r.s_h2, || format!("{name}: s(H2) {} but kernel oracle {oracle}", r.s_h2))?;
        ensure(r.lower_bound == oracle + r.rank_d1, || {
            format!("{name}: bound {} != {oracle} + {}", r.lower_bound, r.rank_d1)
        })?;
    }
    Ok(format!("{} systems, s(H2) checked against ker d1 / im D", corpus.len()))
}

fn strategy_invariance(corpus: &[(String, trsbound::trs::Trs)]) -> Check {
    let mut differing_d = 0;
    for (name, trs) in corpus {
        let a = analyze(trs, Strategy::LeftmostInnermost, false, DEFAULT_MAX_STEPS).map_err(|e| e.to_string())?;
        let b = analyze(trs, Strategy::LeftmostOutermost, false, DEFAULT_MAX_STEPS).map_err(|e| e.to_string())?;
        ensure((a.e, a.lower_bound, a.s_h2) == (b.e, b.lower_bound, b.s_h2), || {
            format!("{name}: li {:?} vs lo {:?}", (a.e, a.lower_bound, a.s_h2), (b.e, b.lower_bound, b.s_h2))
        })?;
        differing_d += usize::from(a.d != b.d);
    }
    Ok(format!("{} systems ({differing_d} with differing D entries)", corpus.len()))
}

fn prime_invariance(corpus: &[(String, trsbound::trs::Trs)]) -> Check {
    let mut dropped = 0;
    for (name, trs) in corpus {
        let a = analyze(trs, li(), false, DEFAULT_MAX_STEPS).map_err(|e| e.to_string())?;
        let b = analyze(trs, li(), true, DEFAULT_MAX_STEPS).map_err(|e| e.to_string())?;
        ensure((a.e, a.lower_bound) == (b.e, b.lower_bound), || {
            format!("{name}: all {:?} vs prime {:?}", (a.e, a.lower_bound), (b.e, b.lower_bound))
        })?;
        dropped += a.n_cps - b.cps.len();
    }
    Ok(format!("{} systems, {dropped} non-prime pairs dropped in total", corpus.len()))
}

fn snf_oracle() -> Check {
    let mut rng = StdRng::seed_from_u64(8);
    for k in 0..500 {
        let rows = random_matrix(&mut rng, 5, 6, 9);
        let m = IntMatrix::from_i64(&rows);
        let plain = snf(&m);
        let oracle = divisors_by_minors(&rows);
        ensure(plain.divisors == oracle, || format!("#{k} {rows:?}: {:?} vs minors {oracle:?}", plain.divisors))?;
        let full = snf_with_transforms(&m);
        ensure(full.divisors == plain.divisors, || format!("#{k}: transforms changed the divisors"))?;
        let t = full.transforms.as_ref().unwrap();
        let d = full.normal_form(m.rows(), m.cols());
        ensure(t.u.mul(&m).mul(&t.v) == d, || format!("#{k} {rows:?}: U A V != D"))?;
        for (name, x) in [("U", &t.u), ("V", &t.v)] {
            let det = det_cofactor(&x.to_i64_rows().unwrap());
            ensure(det == 1.into() || det == (-1).into(), || format!("#{k}: det {name} = {det}"))?;
        }
        ensure(t.v.mul(&t.v_inv) == IntMatrix::identity(m.cols()), || format!("#{k}: V V^-1 != I"))?;
    }
    Ok("500 matrices agree with the minors oracle; U A V = D, det U, det V = ±1".into())
}

/// All ground terms of depth at most 2 over `f/2, g/1, a, b`: 74 of them.
fn ground_universe(sig: &Signature) -> Vec<Term> {
    let f = sig.get("f").unwrap();
    let g = sig.get("g").unwrap();
    let d0: Vec<Term> = ["a", "b"].iter().map(|c| Term::constant(sig.get(c).unwrap())).collect();
    let grow = |prev: &[Term]| {
        let mut out = d0.clone();
        out.extend(prev.iter().map(|t| Term::app(g, vec![t.clone()])));
        for s in prev {
            for t in prev {
                out.push(Term::app(f, vec![s.clone(), t.clone()]));
            }
        }
        out
    };
    grow(&grow(&d0))
}

fn unification() -> Check {
    let sig = small_signature();
    let universe = ground_universe(&sig);
    ensure(universe.len() == 74, || format!("universe has {} terms", universe.len()))?;
    let mut rng = StdRng::seed_from_u64(9);
    let (mut unifiable, mut checked_instances) = (0, 0usize);
    for k in 0..1000 {
        let s = random_term(&mut rng, &sig, 2, 3);
        // half the pairs are built to be unifiable-ish by copying and
        // generalising a subterm
        let t = if rng.gen_bool(0.5) {
            let ps = s.positions();
            let p = &ps[rng.gen_range(0..ps.len())];
            s.replace_at(p, Term::var(rng.gen_range(1..=2))).unwrap()
        } else {
            random_term(&mut rng, &sig, 2, 3)
        };
        let theta_unifies = |th: &Substitution| th.apply(&s) == th.apply(&t);
        match unify(&s, &t) {
            Some(mgu) => {
                unifiable += 1;
                ensure(mgu.apply(&s) == mgu.apply(&t), || format!("#{k}: not a unifier"))?;
                ensure(mgu.apply(&mgu.apply(&s)) == mgu.apply(&s) && mgu.is_idempotent(), || {
                    format!("#{k}: not idempotent")
                })?;
                for x1 in &universe {
                    for x2 in &universe {
                        let th = Substitution::from_pairs([(1, x1.clone()), (2, x2.clone())]);
                        if !theta_unifies(&th) {
                            continue;
                        }
                        checked_instances += 1;
                        // θ is an instance of an idempotent σ iff σθ = θ
                        for v in [1, 2] {
                            let via = th.apply(&mgu.apply(&Term::var(v)));
                            ensure(via == th.apply(&Term::var(v)), || format!("#{k}: mgu not most general"))?;
                        }
                    }
                }
            }
            None => {
                for x1 in &universe {
                    for x2 in &universe {
                        let th = Substitution::from_pairs([(1, x1.clone()), (2, x2.clone())]);
                        ensure(!theta_unifies(&th), || format!("#{k}: missed a unifier"))?;
                    }
                }
            }
        }
    }
    Ok(format!("1000 pairs ({unifiable} unifiable, {checked_instances} ground unifiers factored)"))
}

fn equivalence() -> Check {
    let base = fixtures::group();
    let opts = SearchOptions::default();
    let three = parse_trs_str(fixtures::GROUP3_AXIOMS).unwrap().trs;
    let start = Instant::now();
    let r = equiv_check(&base, &three, &opts).map_err(|e| e.to_string())?;
    ensure(r.verdict == Verdict::Yes, || format!("three axioms gave {}", r.verdict))?;
    let t3 = start.elapsed();
    let two = parse_trs_str(fixtures::GROUP2_AXIOMS).unwrap().trs;
    let start = Instant::now();
    let r2 = equiv_check(&base, &two, &opts).map_err(|e| e.to_string())?;
    ensure(r2.verdict != Verdict::Yes, || "two axioms gave Yes".into())?;
    Ok(format!("three axioms: Yes ({t3:.2?}); two axioms: {} ({:.2?})", r2.verdict, start.elapsed()))
}

fn main() -> ExitCode {
    // the corpus feeds criteria 5-7
    let corpus = corpus(24);
    let criteria: Vec<(&str, Box<dyn Fn() -> Check + '_>)> = vec![
        ("group system", Box::new(group)),
        ("ave system", Box::new(ave)),
        ("minus system", Box::new(minus)),
        ("associativity", Box::new(assoc)),
        ("bound = s(H2) + rank d1", Box::new(|| identity(&corpus))),
        ("strategy invariance", Box::new(|| strategy_invariance(&corpus))),
        ("prime-pair invariance", Box::new(|| prime_invariance(&corpus))),
        ("Smith normal form oracle", Box::new(snf_oracle)),
        ("unification", Box::new(unification)),
        ("equivalence", Box::new(equivalence)),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let outcome = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match outcome {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why}", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
