//! Rewrite rules, the degree of a system, and deterministic normalization
//! with per-rule usage counts.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::critical::{critical_pairs, CriticalPeak};
use crate::error::{Error, Result};
use crate::term::{match_term, Position, Signature, Term};

/// Default bound on rewrite steps for one normalization.
pub const DEFAULT_MAX_STEPS: usize = 100_000;

/// A rule `lhs -> rhs`. `index` is its 1-based position in the system.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub lhs: Term,
    pub rhs: Term,
    pub index: usize,
}

impl Rule {
    /// Checks that the left side is not a variable and that the right side
    /// introduces no variables.
    pub fn new(lhs: Term, rhs: Term) -> Result<Rule> {
        if lhs.is_var() {
            return Err(Error::InvalidRule {
                rule: format!("{lhs} -> {rhs}"),
                reason: "left-hand side is a variable".into(),
            });
        }
        let lvars = lhs.var_set();
        if let Some(v) = rhs.vars().into_iter().find(|v| !lvars.contains(v)) {
            return Err(Error::InvalidRule {
                rule: format!("{lhs} -> {rhs}"),
                reason: format!("variable x{v} of the right-hand side does not occur on the left"),
            });
        }
        Ok(Rule { lhs, rhs, index: 0 })
    }

    /// Equality up to a bijective renaming of variables.
    pub fn is_variant_of(&self, other: &Rule) -> bool {
        let a = Term::canonical_renaming(&[&self.lhs, &self.rhs]);
        let b = Term::canonical_renaming(&[&other.lhs, &other.rhs]);
        let ra = |t: &Term| t.map_vars(&|i| a[&i]);
        let rb = |t: &Term| t.map_vars(&|i| b[&i]);
        ra(&self.lhs) == rb(&other.lhs) && ra(&self.rhs) == rb(&other.rhs)
    }
}

impl fmt::Debug for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} -> {}", self.index, self.lhs, self.rhs)
    }
}

/// A term rewriting system `(Σ, R)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trs {
    sig: Signature,
    rules: Vec<Rule>,
}

impl Trs {
    /// Builds a system, renumbering the rules `1..=n` in the given order.
    pub fn new(sig: Signature, rules: Vec<Rule>) -> Result<Trs> {
        let mut out = Vec::with_capacity(rules.len());
        for (k, mut r) in rules.into_iter().enumerate() {
            check_over(&sig, &r.lhs)?;
            check_over(&sig, &r.rhs)?;
            r.index = k + 1;
            out.push(r);
        }
        Ok(Trs { sig, rules: out })
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// The rule with 1-based index `j`.
    pub fn rule(&self, j: usize) -> &Rule {
        &self.rules[j - 1]
    }

    /// `deg(R)`: gcd over all rules and variables of `#_i l - #_i r`, with
    /// the gcd of nothing but zeros taken to be 0.
    pub fn degree(&self) -> u64 {
        let mut d = 0u64;
        for r in &self.rules {
            for v in r.lhs.var_set() {
                let diff = r.lhs.var_count(v) as i64 - r.rhs.var_count(v) as i64;
                d = d.gcd(&diff.unsigned_abs());
            }
        }
        d
    }

    /// The lowest-index rule whose left side matches `t` at its root,
    /// together with the reduct.
    pub fn root_step(&self, t: &Term) -> Option<(Term, usize)> {
        if t.is_var() {
            return None;
        }
        self.rules.iter().find_map(|r| {
            match_term(&r.lhs, t).map(|sigma| (sigma.apply(&r.rhs), r.index))
        })
    }

    pub fn is_normal_form(&self, t: &Term) -> bool {
        match t {
            Term::Var(_) => true,
            Term::App(_, args) => self.root_step(t).is_none() && args.iter().all(|a| self.is_normal_form(a)),
        }
    }

    /// One step under `strat`, or `None` when `t` is a normal form.
    pub fn rewrite_step(&self, t: &Term, strat: Strategy) -> Option<Step> {
        let mut path = Vec::new();
        let (term, rule) = match strat {
            Strategy::LeftmostInnermost => self.step_innermost(t, &mut path)?,
            Strategy::LeftmostOutermost => self.step_outermost(t, &mut path)?,
        };
        Some(Step {
            term,
            rule,
            pos: Position(path),
        })
    }

    fn step_innermost(&self, t: &Term, path: &mut Vec<usize>) -> Option<(Term, usize)> {
        if let Term::App(f, args) = t {
            for (k, a) in args.iter().enumerate() {
                path.push(k + 1);
                if let Some((new_a, j)) = self.step_innermost(a, path) {
                    let mut new_args = args.clone();
                    new_args[k] = new_a;
                    return Some((Term::App(f.clone(), new_args), j));
                }
                path.pop();
            }
        }
        self.root_step(t)
    }

    fn step_outermost(&self, t: &Term, path: &mut Vec<usize>) -> Option<(Term, usize)> {
        if let Some(hit) = self.root_step(t) {
            return Some(hit);
        }
        if let Term::App(f, args) = t {
            for (k, a) in args.iter().enumerate() {
                path.push(k + 1);
                if let Some((new_a, j)) = self.step_outermost(a, path) {
                    let mut new_args = args.clone();
                    new_args[k] = new_a;
                    return Some((Term::App(f.clone(), new_args), j));
                }
                path.pop();
            }
        }
        None
    }

    /// Rewrites `t` to normal form under `strat`, counting how often each
    /// rule fires. Fails once `max_steps` steps have been taken and the term
    /// is still reducible.
    pub fn normalize_counted(&self, t: &Term, strat: Strategy, max_steps: usize) -> Result<NormalizationTrace> {
        let mut usage = vec![0u64; self.rules.len()];
        let mut steps = 0usize;
        let normal_form = match strat {
            Strategy::LeftmostInnermost => self.innermost(t, &mut usage, &mut steps, max_steps)?,
            Strategy::LeftmostOutermost => {
                let mut cur = t.clone();
                while let Some(step) = self.rewrite_step(&cur, strat) {
                    if steps == max_steps {
                        return Err(budget_error(max_steps, t));
                    }
                    usage[step.rule - 1] += 1;
                    steps += 1;
                    cur = step.term;
                }
                cur
            }
        };
        Ok(NormalizationTrace {
            normal_form,
            usage,
            steps,
        })
    }

    // Normalizing the arguments left to right and then retrying the root
    // performs exactly the leftmost-innermost step sequence.
    fn innermost(&self, t: &Term, usage: &mut [u64], steps: &mut usize, max_steps: usize) -> Result<Term> {
        let Term::App(f, args) = t else {
            return Ok(t.clone());
        };
        let args = args
            .iter()
            .map(|a| self.innermost(a, usage, steps, max_steps))
            .collect::<Result<Vec<_>>>()?;
        let t = Term::App(f.clone(), args);
        match self.root_step(&t) {
            None => Ok(t),
            Some((reduct, j)) => {
                if *steps == max_steps {
                    return Err(budget_error(max_steps, &t));
                }
                *steps += 1;
                usage[j - 1] += 1;
                self.innermost(&reduct, usage, steps, max_steps)
            }
        }
    }

    pub fn normal_form(&self, t: &Term, strat: Strategy, max_steps: usize) -> Result<Term> {
        Ok(self.normalize_counted(t, strat, max_steps)?.normal_form)
    }

    /// Checks that every critical pair joins under the fixed strategy.
    pub fn local_confluence_check(&self, strat: Strategy, max_steps: usize) -> Result<ConfluenceReport> {
        let pairs = critical_pairs(self)
            .into_iter()
            .map(|cp| {
                let nt = self.normal_form(&cp.t, strat, max_steps)?;
                let ns = self.normal_form(&cp.s, strat, max_steps)?;
                Ok(PairJoin {
                    joinable: nt == ns,
                    nf_t: nt,
                    nf_s: ns,
                    peak: cp,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ConfluenceReport { pairs })
    }
}

fn budget_error(limit: usize, t: &Term) -> Error {
    Error::StepBudgetExceeded {
        limit,
        term: t.to_string(),
    }
}

fn check_over(sig: &Signature, t: &Term) -> Result<()> {
    match t {
        Term::Var(_) => Ok(()),
        Term::App(f, args) => {
            if !sig.contains(f) {
                return Err(Error::SignatureMismatch(format!(
                    "symbol {f:?} is not in the signature"
                )));
            }
            args.iter().try_for_each(|a| check_over(sig, a))
        }
    }
}

/// The fixed rewriting strategy behind the usage counts. At the chosen
/// position the lowest-index applicable rule wins.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Strategy {
    #[default]
    #[serde(rename = "leftmost-innermost")]
    LeftmostInnermost,
    #[serde(rename = "leftmost-outermost")]
    LeftmostOutermost,
}

impl Strategy {
    pub const ALL: [Strategy; 2] = [Strategy::LeftmostInnermost, Strategy::LeftmostOutermost];
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::LeftmostInnermost => "leftmost-innermost",
            Strategy::LeftmostOutermost => "leftmost-outermost",
        })
    }
}

/// One rewrite step: the reduct, the 1-based rule index, and the redex position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub term: Term,
    pub rule: usize,
    pub pos: Position,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizationTrace {
    pub normal_form: Term,
    /// `usage[j-1]` is the number of applications of rule `j`.
    pub usage: Vec<u64>,
    pub steps: usize,
}

#[derive(Clone, Debug)]
pub struct PairJoin {
    pub peak: CriticalPeak,
    pub nf_t: Term,
    pub nf_s: Term,
    pub joinable: bool,
}

#[derive(Clone, Debug)]
pub struct ConfluenceReport {
    pub pairs: Vec<PairJoin>,
}

impl ConfluenceReport {
    pub fn all_joinable(&self) -> bool {
        self.pairs.iter().all(|p| p.joinable)
    }

    pub fn failures(&self) -> impl Iterator<Item = &PairJoin> {
        self.pairs.iter().filter(|p| !p.joinable)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn degree_examples() {
        let t = crate::syntax::parse_trs_str("(VAR x y) (RULES f(x,y,y) -> x  g(x,x,x) -> e)").unwrap();
        assert_eq!(t.trs.degree(), 1);
        assert_eq!(fixtures::group().degree(), 2);
        assert_eq!(fixtures::ave().degree(), 0);
        assert_eq!(fixtures::minus().degree(), 0);
    }

    #[test]
    fn root_tie_break_prefers_lower_index() {
        let g = fixtures::group();
        let t = fixtures::term(&g, "m(e,e)");
        for strat in Strategy::ALL {
            let step = g.rewrite_step(&t, strat).unwrap();
            assert_eq!(step.rule, 2);
            assert_eq!(step.term, fixtures::term(&g, "e"));
            assert!(step.pos.is_root());
        }
    }

    #[test]
    fn ave_step() {
        let a = fixtures::ave();
        let t = fixtures::term(&a, "ave(0,s(0))");
        let step = a.rewrite_step(&t, Strategy::LeftmostInnermost).unwrap();
        assert_eq!(step.rule, 2);
        assert_eq!(step.term, fixtures::term(&a, "ave(s(0),0)"));
        assert!(step.pos.is_root());
    }

    #[test]
    fn normal_forms_take_no_steps() {
        let g = fixtures::group();
        let t = fixtures::term(&g, "m(x,i(y))");
        assert!(g.rewrite_step(&t, Strategy::LeftmostInnermost).is_none());
        let tr = g.normalize_counted(&t, Strategy::LeftmostInnermost, 10).unwrap();
        assert_eq!(tr.steps, 0);
        assert!(tr.usage.iter().all(|&u| u == 0));
    }

    #[test]
    fn strategies_pick_different_redexes() {
        let g = fixtures::group();
        // i(i(m(e,x))): outermost fires G8 at the root, innermost G2 below
        let t = fixtures::term(&g, "i(i(m(e,x)))");
        let li = g.rewrite_step(&t, Strategy::LeftmostInnermost).unwrap();
        let lo = g.rewrite_step(&t, Strategy::LeftmostOutermost).unwrap();
        assert_eq!((li.rule, li.pos.to_string()), (2, "1.1".to_string()));
        assert_eq!((lo.rule, lo.pos.to_string()), (8, "root".to_string()));
    }

    #[test]
    fn step_budget() {
        let t = crate::syntax::parse_trs_str("(VAR x) (RULES f(x) -> f(f(x)))").unwrap();
        let term = fixtures::term(&t.trs, "f(a)");
        for strat in Strategy::ALL {
            let err = t.trs.normalize_counted(&term, strat, 50).unwrap_err();
            assert!(matches!(err, Error::StepBudgetExceeded { limit: 50, .. }));
        }
    }

    #[test]
    fn exact_budget_is_enough() {
        let a = fixtures::ave();
        let t = fixtures::term(&a, "ave(0,s(0))");
        let tr = a.normalize_counted(&t, Strategy::LeftmostInnermost, 2).unwrap();
        assert_eq!(tr.steps, 2);
        assert_eq!(tr.normal_form, fixtures::term(&a, "0"));
    }

    #[test]
    fn rule_validation() {
        let x = Term::var(1);
        let f = crate::term::Symbol::new("f", 1);
        assert!(Rule::new(x.clone(), Term::app(&f, vec![x.clone()])).is_err());
        assert!(Rule::new(Term::app(&f, vec![x]), Term::var(2)).is_err());
    }

    #[test]
    fn non_confluent_pair_reported() {
        let t = crate::syntax::parse_trs_str("(RULES a -> b  a -> c)").unwrap();
        let rep = t.trs.local_confluence_check(Strategy::default(), 100).unwrap();
        assert!(!rep.all_joinable());
    }

    #[test]
    fn reference_systems_locally_confluent() {
        for (name, trs) in fixtures::reference_systems() {
            let rep = trs.local_confluence_check(Strategy::default(), DEFAULT_MAX_STEPS).unwrap();
            assert!(rep.all_joinable(), "{name}");
        }
        let rep = fixtures::ave().local_confluence_check(Strategy::default(), 1000).unwrap();
        assert_eq!(rep.pairs.len(), 1);
    }
}
