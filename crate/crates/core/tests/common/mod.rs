//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use trsbound::homology::{build_d, build_d1, Ring};
use trsbound::critical::critical_pairs;
use trsbound::linalg::{snf, snf_with_transforms, IntMatrix};
use trsbound::syntax::parse_rule;
use trsbound::term::{Signature, Symbol, Term};
use trsbound::trs::{Rule, Strategy, Trs, DEFAULT_MAX_STEPS};

// ---------------------------------------------------------------------------
// linear algebra oracles

/// Determinant by cofactor expansion along the first row.
pub fn det_cofactor(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    if n == 1 {
        return BigInt::from(m[0][0]);
    }
    let mut acc = BigInt::zero();
    for c in 0..n {
        if m[0][c] == 0 {
            continue;
        }
        let minor: Vec<Vec<i64>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(j, _)| *j != c).map(|(_, v)| *v).collect())
            .collect();
        let term = BigInt::from(m[0][c]) * det_cofactor(&minor);
        if c % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Elementary divisors from determinantal divisors: with `d_k` the gcd of
/// all k×k minors, the k-th divisor is `d_k / d_{k-1}`.
pub fn divisors_by_minors(m: &[Vec<i64>]) -> Vec<BigInt> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut out = Vec::new();
    let mut prev = BigInt::from(1);
    for k in 1..=rows.min(cols) {
        let mut g = BigInt::zero();
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let sub: Vec<Vec<i64>> = rs.iter().map(|&r| cs.iter().map(|&c| m[r][c]).collect()).collect();
                g = g.gcd(&det_cofactor(&sub));
            }
        }
        if g.is_zero() {
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

/// Rank over GF(p) by plain Gaussian elimination on `i64` residues.
pub fn rank_gf(m: &IntMatrix, p: i64) -> usize {
    let mut a: Vec<Vec<i64>> = (0..m.rows())
        .map(|r| {
            m.row(r)
                .iter()
                .map(|x| {
                    let v = x.mod_floor(&BigInt::from(p));
                    i64::try_from(v).unwrap()
                })
                .collect()
        })
        .collect();
    let inv = |x: i64| {
        // Fermat: x^(p-2)
        let (mut b, mut e, mut r) = (x, p - 2, 1i64);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    };
    let mut rank = 0;
    for c in 0..m.cols() {
        let Some(piv) = (rank..a.len()).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(rank, piv);
        let iv = inv(a[rank][c]);
        for x in a[rank].iter_mut() {
            *x = *x * iv % p;
        }
        for r in 0..a.len() {
            if r != rank && a[r][c] != 0 {
                let f = a[r][c];
                for j in 0..m.cols() {
                    a[r][j] = (a[r][j] - f * a[rank][j]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Rank over Q: the number of nonzero determinantal divisors.
pub fn rank_q(m: &IntMatrix) -> usize {
    snf(m).rank
}

/// Minimal number of generators of `ker d1 / im D`, computed from a basis of
/// the kernel rather than from `#R - e(R)`.
pub fn s_h2_from_kernel(trs: &Trs, strat: Strategy) -> usize {
    let cps = critical_pairs(trs);
    let d = build_d(trs, &cps, strat, DEFAULT_MAX_STEPS).unwrap();
    let d1 = build_d1(trs);
    let n = trs.len();
    match Ring::for_degree(trs.degree()).unwrap() {
        Ring::Zp(p) => {
            let p = p as i64;
            (n - rank_gf(&d1, p)) - rank_gf(&d, p)
        }
        Ring::Z => {
            let s1 = snf_with_transforms(&d1);
            let t = s1.transforms.as_ref().unwrap();
            let k = n - s1.rank;
            // columns r.. of V span ker d1; V^{-1} D expresses D in that basis
            let coords = t.v_inv.mul(&d);
            for r in 0..s1.rank {
                assert!(coords.row(r).iter().all(Zero::is_zero), "im D must lie in ker d1");
            }
            let rows: Vec<BigInt> = (s1.rank..n).flat_map(|r| coords.row(r).to_vec()).collect();
            let c = IntMatrix::from_rows(k, d.cols(), rows);
            let sc = snf(&c);
            let torsion = sc.divisors.iter().filter(|x| x.abs() != BigInt::from(1)).count();
            (k - sc.rank) + torsion
        }
    }
}

// ---------------------------------------------------------------------------
// term generators

pub fn small_signature() -> Signature {
    Signature::from_symbols([
        Symbol::new("f", 2),
        Symbol::new("g", 1),
        Symbol::new("a", 0),
        Symbol::new("b", 0),
    ])
    .unwrap()
}

/// A random term of depth at most `depth` over `sig` and variables
/// `x1..=nvars`.
pub fn random_term(rng: &mut StdRng, sig: &Signature, nvars: u32, depth: usize) -> Term {
    let leaf = depth == 0 || rng.gen_bool(0.3);
    if leaf {
        let consts: Vec<&Symbol> = sig.iter().filter(|s| s.arity() == 0).collect();
        if nvars > 0 && (consts.is_empty() || rng.gen_bool(0.6)) {
            return Term::var(rng.gen_range(1..=nvars));
        }
        return Term::constant(consts[rng.gen_range(0..consts.len())]);
    }
    let fs: Vec<&Symbol> = sig.iter().filter(|s| s.arity() > 0).collect();
    let f = fs[rng.gen_range(0..fs.len())];
    let args = (0..f.arity()).map(|_| random_term(rng, sig, nvars, depth - 1)).collect();
    Term::app(f, args)
}

fn non_var_term(rng: &mut StdRng, sig: &Signature, nvars: u32, depth: usize) -> Term {
    loop {
        let t = random_term(rng, sig, nvars, depth);
        if !t.is_var() {
            return t;
        }
    }
}

/// Linear interpretation `[a] = 1, [b] = 2, [g](t) = t + 1,
/// [f](s, t) = 2s + t + 1` as (constant, coefficient per variable).
fn interpret(t: &Term) -> (i64, BTreeMap<u32, i64>) {
    match t {
        Term::Var(i) => (0, BTreeMap::from([(*i, 1)])),
        _ => {
            let sym = t.root_symbol().unwrap();
            let args: Vec<_> = t.args().iter().map(interpret).collect();
            let (weights, c0): (&[i64], i64) = match (sym.name(), sym.arity()) {
                ("a", 0) => (&[], 1),
                ("b", 0) => (&[], 2),
                ("g", 1) => (&[1], 1),
                ("f", 2) => (&[2, 1], 1),
                other => panic!("no interpretation for {other:?}"),
            };
            let mut c = c0;
            let mut coeffs = BTreeMap::new();
            for (w, (ac, acs)) in weights.iter().zip(args) {
                c += w * ac;
                for (v, k) in acs {
                    *coeffs.entry(v).or_insert(0) += w * k;
                }
            }
            (c, coeffs)
        }
    }
}

/// `[l] > [r]` for all variable values >= 0 under a strictly monotone
/// interpretation, so a system of such rules terminates.
pub fn poly_decreasing(l: &Term, r: &Term) -> bool {
    let (lc, lv) = interpret(l);
    let (rc, rv) = interpret(r);
    lc > rc && rv.iter().all(|(v, k)| lv.get(v).is_some_and(|lk| lk >= k))
}

/// Shapes that give prime degrees or classic overlaps; parsed over
/// [`small_signature`] with variables `x, y, z`.
const SEED_RULES: &[&str] = &[
    "g(g(x)) -> x",
    "g(g(g(x))) -> x",
    "f(f(x,y),z) -> f(x,f(y,z))",
    "f(a,x) -> x",
    "f(x,a) -> x",
    "g(a) -> a",
    "g(b) -> a",
    "f(g(x),x) -> a",
    "f(x,g(x)) -> a",
    "f(b,b) -> b",
    "f(x,x) -> x",
];

fn random_rule(rng: &mut StdRng, sig: &Signature) -> Rule {
    if rng.gen_bool(0.4) {
        let names: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        let text = SEED_RULES[rng.gen_range(0..SEED_RULES.len())];
        return parse_rule(text, sig, &names).unwrap();
    }
    loop {
        let lhs = non_var_term(rng, sig, 3, 3);
        let rhs = if rng.gen_bool(0.5) {
            let ps = lhs.positions();
            lhs.subterm_at(&ps[rng.gen_range(0..ps.len())]).unwrap().clone()
        } else {
            let vars = lhs.vars();
            let t = random_term(rng, sig, vars.len() as u32, 2);
            // rename x_k to the k-th variable of the left side
            t.map_vars(&|k| vars[k as usize - 1])
        };
        if poly_decreasing(&lhs, &rhs) {
            if let Ok(r) = Rule::new(lhs, rhs) {
                return r;
            }
        }
    }
}

/// Random complete systems: rules decreasing under one polynomial
/// interpretation (so the system terminates), kept only
/// when every critical pair joins and the degree is 0 or prime. Systems
/// without critical pairs are kept at most `n / 4` times so that most of the
/// corpus exercises `D(R)`.
pub fn random_complete_trss(seed: u64, n: usize) -> Vec<Trs> {
    let mut rng = StdRng::seed_from_u64(seed);
    let sig = small_signature();
    let mut out: Vec<Trs> = Vec::new();
    let mut trivial = 0;
    let mut attempts = 0;
    while out.len() < n {
        attempts += 1;
        assert!(attempts < 200_000, "generator starved after {} systems", out.len());
        let k = rng.gen_range(1..=4);
        let rules: Vec<Rule> = (0..k).map(|_| random_rule(&mut rng, &sig)).collect();
        if rules
            .iter()
            .enumerate()
            .any(|(i, r)| rules[..i].iter().any(|q| q.is_variant_of(r)))
        {
            continue;
        }
        let trs = Trs::new(sig.clone(), rules).unwrap();
        if Ring::for_degree(trs.degree()).is_err() {
            continue;
        }
        let cps = critical_pairs(&trs);
        if cps.is_empty() {
            if trivial >= n / 4 {
                continue;
            }
            trivial += 1;
        }
        let Ok(report) = trs.local_confluence_check(Strategy::LeftmostInnermost, DEFAULT_MAX_STEPS) else {
            continue;
        };
        if report.all_joinable() && !out.contains(&trs) {
            out.push(trs);
        }
    }
    out
}

/// The four reference systems followed by `n_random` random complete ones.
pub fn corpus(n_random: usize) -> Vec<(String, Trs)> {
    let mut v: Vec<(String, Trs)> = trsbound::fixtures::reference_systems()
        .into_iter()
        .map(|(n, t)| (n.to_string(), t))
        .collect();
    for (k, t) in random_complete_trss(0x5eed, n_random).into_iter().enumerate() {
        v.push((format!("random-{k}"), t));
    }
    v
}

pub fn random_matrix(rng: &mut StdRng, max_rows: usize, max_cols: usize, bound: i64) -> Vec<Vec<i64>> {
    let r = rng.gen_range(1..=max_rows);
    let c = rng.gen_range(1..=max_cols);
    (0..r).map(|_| (0..c).map(|_| rng.gen_range(-bound..=bound)).collect()).collect()
}
