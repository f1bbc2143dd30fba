//! Checking that a candidate rule set presents the same equational theory as
//! a complete system.
//!
//! One direction is decided exactly: every candidate rule must have both
//! sides rewrite to the same normal form under the complete base. The other
//! direction, deriving each base rule from the candidates, is a bounded
//! conversion search. Base rules proved so far are reused both as extra
//! conversion steps and as a terminating joiner, and easy rules are attempted
//! first with small budgets.

use serde::Serialize;

use crate::conversion::{ConversionSearch, SearchOptions, SearchOutcome};
use crate::error::{Error, Result};
use crate::term::{Signature, Term};
use crate::trs::{Rule, Trs};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "Yes",
            Verdict::No => "No",
            Verdict::Unknown => "Unknown",
        })
    }
}

/// Normal forms of both sides of one candidate rule under the base system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CandidateWitness {
    pub rule: Rule,
    pub lhs_nf: Term,
    pub rhs_nf: Term,
}

impl CandidateWitness {
    pub fn holds(&self) -> bool {
        self.lhs_nf == self.rhs_nf
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Derivation {
    /// The base rule is literally one of the candidates, up to renaming.
    Given,
    /// A conversion was found.
    Derived { steps: usize, nodes: usize },
    /// The whole conversion class of the left side was enumerated and the
    /// right side is not in it.
    Refuted { nodes: usize },
    Undecided,
}

#[derive(Clone, Debug)]
pub struct EquivReport {
    pub verdict: Verdict,
    pub candidates: Vec<CandidateWitness>,
    /// Indexed like the base rules.
    pub derivations: Vec<(Rule, Derivation)>,
}

impl EquivReport {
    /// The first candidate rule that does not hold in the base theory.
    pub fn offending_candidate(&self) -> Option<&CandidateWitness> {
        self.candidates.iter().find(|c| !c.holds())
    }

    /// The first base rule shown not to follow from the candidates.
    pub fn refuted_base_rule(&self) -> Option<&Rule> {
        self.derivations
            .iter()
            .find(|(_, d)| matches!(d, Derivation::Refuted { .. }))
            .map(|(r, _)| r)
    }
}

fn same_symbols(a: &Signature, b: &Signature) -> bool {
    a.len() == b.len() && a.iter().all(|s| b.contains(s))
}

/// Checks a candidate signature against the base one, as sets of symbols.
pub fn check_signatures(base: &Signature, candidate: &Signature) -> Result<()> {
    if same_symbols(base, candidate) {
        return Ok(());
    }
    let show = |s: &Signature| {
        s.iter()
            .map(|f| format!("{}/{}", f.name(), f.arity()))
            .collect::<Vec<_>>()
            .join(" ")
    };
    Err(Error::SignatureMismatch(format!(
        "base has {{{}}}, candidate has {{{}}}",
        show(base),
        show(candidate)
    )))
}

/// Decides whether `candidate` generates the same conversion relation as
/// the complete system `base`.
///
/// `Yes` and `No` are always justified; `Unknown` means some base rule could
/// not be derived within the budget.
pub fn equiv_check(base: &Trs, candidate: &Trs, opts: &SearchOptions) -> Result<EquivReport> {
    check_signatures(base.signature(), candidate.signature())?;
    let confluence = base.local_confluence_check(opts.strategy, opts.max_steps)?;
    if !confluence.all_joinable() {
        return Err(Error::NotComplete(confluence.failures().count()));
    }

    let mut candidates = Vec::with_capacity(candidate.len());
    for r in candidate.rules() {
        candidates.push(CandidateWitness {
            rule: r.clone(),
            lhs_nf: base.normal_form(&r.lhs, opts.strategy, opts.max_steps)?,
            rhs_nf: base.normal_form(&r.rhs, opts.strategy, opts.max_steps)?,
        });
    }

    let mut derivations: Vec<(Rule, Derivation)> = base
        .rules()
        .iter()
        .map(|r| {
            let given = candidate.rules().iter().any(|c| c.is_variant_of(r));
            (r.clone(), if given { Derivation::Given } else { Derivation::Undecided })
        })
        .collect();

    if candidates.iter().any(|c| !c.holds()) {
        return Ok(EquivReport {
            verdict: Verdict::No,
            candidates,
            derivations,
        });
    }

    derive_base_rules(base, candidate, opts, &mut derivations)?;

    let verdict = if derivations
        .iter()
        .all(|(_, d)| matches!(d, Derivation::Given | Derivation::Derived { .. }))
    {
        Verdict::Yes
    } else if derivations.iter().any(|(_, d)| matches!(d, Derivation::Refuted { .. })) {
        Verdict::No
    } else {
        Verdict::Unknown
    };
    Ok(EquivReport {
        verdict,
        candidates,
        derivations,
    })
}

fn proven(d: &Derivation) -> bool {
    matches!(d, Derivation::Given | Derivation::Derived { .. })
}

fn derive_base_rules(
    base: &Trs,
    candidate: &Trs,
    opts: &SearchOptions,
    derivations: &mut [(Rule, Derivation)],
) -> Result<()> {
    const FIRST_BUDGET: usize = 500;
    let max = opts.search_nodes.max(1);
    let mut budget = FIRST_BUDGET.min(max);
    // One resumable search per base rule, valid while the lemma set it was
    // built with is unchanged.
    let mut searches: Vec<Option<(usize, ConversionSearch)>> = (0..derivations.len()).map(|_| None).collect();
    loop {
        let mut progress = false;
        for k in 0..derivations.len() {
            if !matches!(derivations[k].1, Derivation::Undecided) {
                continue;
            }
            // Lemmas: base rules already shown to follow from the candidates.
            let lemmas: Vec<Rule> = derivations
                .iter()
                .filter(|(_, d)| proven(d))
                .map(|(r, _)| r.clone())
                .collect();
            if searches[k].as_ref().map(|(n, _)| *n) != Some(lemmas.len()) {
                let joiner = Trs::new(base.signature().clone(), lemmas.clone())?;
                let mut edges: Vec<Rule> = candidate.rules().to_vec();
                edges.extend(lemmas.iter().cloned());
                let rule = &derivations[k].0;
                let s = ConversionSearch::new(&edges, &rule.lhs, &rule.rhs).with_joiner(
                    joiner,
                    opts.strategy,
                    opts.max_steps,
                );
                searches[k] = Some((lemmas.len(), s));
            }
            let (_, search) = searches[k].as_mut().expect("set above");
            match search.run(budget) {
                SearchOutcome::Found { steps, nodes } => {
                    derivations[k].1 = Derivation::Derived { steps, nodes };
                    progress = true;
                }
                SearchOutcome::Exhausted { nodes } => {
                    derivations[k].1 = Derivation::Refuted { nodes };
                }
                SearchOutcome::Budget { .. } => {}
            }
        }
        let open = derivations.iter().any(|(_, d)| matches!(d, Derivation::Undecided));
        if !open {
            return Ok(());
        }
        if progress {
            budget = FIRST_BUDGET.min(max);
        } else if budget >= max {
            return Ok(());
        } else {
            budget = (budget * 4).min(max);
        }
    }
}
