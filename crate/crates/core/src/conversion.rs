//! Bounded search for conversions `s ↔* t`.
//!
//! The search runs breadth-first from both ends, using every rule forwards
//! and backwards at every position. Rules whose right side lacks some
//! left-side variables are applied backwards by instantiating those variables
//! with subterms of the two goal terms only, so the search never invents
//! fresh variables. Two frontiers also meet when a term on one side rewrites,
//! under an optional terminating `joiner` system whose rules are known to be
//! derivable, to a term seen on the other side.
//!
//! The outcome is `Found` only for a real conversion. `Exhausted` is
//! returned only when the whole reachable class was enumerated without any
//! restriction, which proves the terms are not convertible.

use std::collections::VecDeque;

use rustc_hash::FxHashSet;

use crate::term::{match_term, Term};
use crate::trs::{Rule, Strategy, Trs};

/// Default node budget for one conversion search.
pub const DEFAULT_SEARCH_NODES: usize = 50_000;

/// Budgets shared by the equivalence check and Tietze validation.
#[derive(Clone, Copy, Debug)]
pub struct SearchOptions {
    pub strategy: Strategy,
    pub max_steps: usize,
    /// Node budget for each conversion search.
    pub search_nodes: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            strategy: Strategy::LeftmostInnermost,
            max_steps: crate::trs::DEFAULT_MAX_STEPS,
            search_nodes: DEFAULT_SEARCH_NODES,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    /// A conversion was found; `steps` counts the explicit rewrite steps on
    /// the breadth-first paths (joiner normalization steps are not counted).
    Found { steps: usize, nodes: usize },
    /// The reachable class is finite, fully enumerated, and does not contain
    /// the target.
    Exhausted { nodes: usize },
    /// The node budget ran out, or the space was pruned.
    Budget { nodes: usize },
}

impl SearchOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self, SearchOutcome::Found { .. })
    }
}

/// A breadth-first conversion search between two fixed terms. [`run`]
/// may be called again with a larger budget and continues where the
/// previous call stopped.
///
/// [`run`]: ConversionSearch::run
pub struct ConversionSearch {
    rules: Vec<Rule>,
    joiner: Option<(Trs, Strategy, usize)>,
    from: Term,
    to: Term,
    state: Option<State>,
    done: Option<SearchOutcome>,
}

struct Side {
    seen: FxHashSet<Term>,
    /// Normal forms under the joiner of every seen term.
    reach: FxHashSet<Term>,
    frontier: VecDeque<Term>,
    depth: usize,
}

struct State {
    sides: [Side; 2],
    pool: Vec<Term>,
    max_size: usize,
    nodes: usize,
    restricted: bool,
    /// Every frontier emptied, but only because of pruning.
    finished: bool,
    /// Side whose level is being expanded, with the rest of that level and
    /// the unprocessed neighbours of the current term.
    pick: usize,
    level: VecDeque<Term>,
    pending: VecDeque<Term>,
}

impl ConversionSearch {
    pub fn new(rules: &[Rule], from: &Term, to: &Term) -> ConversionSearch {
        ConversionSearch {
            rules: rules.to_vec(),
            joiner: None,
            from: from.clone(),
            to: to.clone(),
            state: None,
            done: None,
        }
    }

    /// Uses `joiner` to normalize every visited term. Its rules must already
    /// be known to hold in the equational theory being searched, and it
    /// should terminate.
    pub fn with_joiner(mut self, joiner: Trs, strategy: Strategy, max_steps: usize) -> ConversionSearch {
        self.joiner = Some((joiner, strategy, max_steps));
        self
    }

    fn normal_forms(&self, t: &Term) -> Option<Term> {
        let (j, strat, max_steps) = self.joiner.as_ref()?;
        j.normal_form(t, *strat, *max_steps).ok()
    }

    fn side(&self, t: &Term) -> Side {
        let mut seen = FxHashSet::default();
        seen.insert(t.clone());
        Side {
            seen,
            reach: self.normal_forms(t).into_iter().collect(),
            frontier: VecDeque::from([t.clone()]),
            depth: 0,
        }
    }

    fn init(&self) -> Result<State, SearchOutcome> {
        if self.from == self.to {
            return Err(SearchOutcome::Found { steps: 0, nodes: 1 });
        }
        let mut pool: Vec<Term> = Vec::new();
        for g in [&self.from, &self.to] {
            for p in g.positions() {
                let s = g.subterm_at(&p).expect("own position").clone();
                if !pool.contains(&s) {
                    pool.push(s);
                }
            }
        }
        let sides = [self.side(&self.from), self.side(&self.to)];
        if meets(&sides[1], &self.from, self.normal_forms(&self.from).as_ref()) {
            return Err(SearchOutcome::Found { steps: 0, nodes: 2 });
        }
        Ok(State {
            sides,
            pool,
            max_size: 2 * self.from.size().max(self.to.size()) + 6,
            nodes: 2,
            restricted: false,
            finished: false,
            pick: 0,
            level: VecDeque::new(),
            pending: VecDeque::new(),
        })
    }

    /// Searches until `max_nodes` distinct terms have been visited in total
    /// (over all calls), a conversion is found, or the space is exhausted.
    pub fn run(&mut self, max_nodes: usize) -> SearchOutcome {
        if let Some(done) = self.done {
            return done;
        }
        if self.state.is_none() {
            match self.init() {
                Ok(st) => self.state = Some(st),
                Err(out) => {
                    self.done = Some(out);
                    return out;
                }
            }
        }
        let mut st = self.state.take().expect("initialized above");
        let out = self.step(&mut st, max_nodes);
        if matches!(out, SearchOutcome::Budget { .. }) && !st.finished {
            self.state = Some(st);
        } else {
            self.done = Some(out);
        }
        out
    }

    fn step(&self, st: &mut State, max_nodes: usize) -> SearchOutcome {
        loop {
            if !st.pending.is_empty() {
                if st.nodes >= max_nodes {
                    return SearchOutcome::Budget { nodes: st.nodes };
                }
                let v = st.pending.pop_front().expect("front exists");
                let pick = st.pick;
                if !st.sides[pick].seen.insert(v.clone()) {
                    continue;
                }
                let nf = self.normal_forms(&v);
                st.nodes += 1;
                if meets(&st.sides[1 - pick], &v, nf.as_ref()) {
                    return SearchOutcome::Found {
                        steps: st.sides[0].depth + st.sides[1].depth,
                        nodes: st.nodes,
                    };
                }
                let side = &mut st.sides[pick];
                side.reach.extend(nf);
                side.frontier.push_back(v);
                continue;
            }
            if let Some(u) = st.level.pop_front() {
                let cut = self.neighbours(&u, &st.pool, st.max_size, &mut st.pending);
                st.restricted |= cut;
                continue;
            }
            let (a, b) = (&st.sides[0].frontier, &st.sides[1].frontier);
            st.pick = match (a.is_empty(), b.is_empty()) {
                (true, true) => {
                    return if st.restricted {
                        st.finished = true;
                        SearchOutcome::Budget { nodes: st.nodes }
                    } else {
                        SearchOutcome::Exhausted { nodes: st.nodes }
                    };
                }
                (false, true) => 0,
                (true, false) => 1,
                (false, false) => usize::from(b.len() < a.len()),
            };
            let side = &mut st.sides[st.pick];
            st.level = std::mem::take(&mut side.frontier);
            side.depth += 1;
        }
    }

    /// Appends all one-step conversions of `u` to `out`. Returns whether
    /// anything was left out (size cut or restricted instantiation).
    fn neighbours(&self, u: &Term, pool: &[Term], max_size: usize, out: &mut VecDeque<Term>) -> bool {
        let mut cut = false;
        let u_size = u.size();
        for p in u.positions() {
            let v = u.subterm_at(&p).expect("own position");
            let room = max_size + v.size() - u_size;
            for rule in &self.rules {
                if let Some(sigma) = match_term(&rule.lhs, v) {
                    let w = sigma.apply(&rule.rhs);
                    if w.size() > room {
                        cut = true;
                    } else {
                        out.push_back(u.replace_at(&p, w).expect("own position"));
                    }
                }
                if let Some(sigma) = match_term(&rule.rhs, v) {
                    let rvars = rule.rhs.var_set();
                    let free: Vec<u32> = rule.lhs.vars().into_iter().filter(|x| !rvars.contains(x)).collect();
                    if !free.is_empty() {
                        cut = true;
                    }
                    for inst in assignments(&free, pool) {
                        let mut full = sigma.clone();
                        for (x, t) in inst {
                            full.insert(x, t);
                        }
                        let w = full.apply(&rule.lhs);
                        if w.size() > room {
                            cut = true;
                        } else {
                            out.push_back(u.replace_at(&p, w).expect("own position"));
                        }
                    }
                }
            }
        }
        cut
    }
}

/// One-shot search from `from` to `to` with a node budget.
pub fn search(rules: &[Rule], from: &Term, to: &Term, max_nodes: usize) -> SearchOutcome {
    ConversionSearch::new(rules, from, to).run(max_nodes)
}

/// Every map from `free` into `pool`; a single empty map when `free` is empty.
fn assignments(free: &[u32], pool: &[Term]) -> Vec<Vec<(u32, Term)>> {
    let mut acc: Vec<Vec<(u32, Term)>> = vec![Vec::new()];
    for &x in free {
        let mut next = Vec::with_capacity(acc.len() * pool.len());
        for partial in &acc {
            for t in pool {
                let mut a = partial.clone();
                a.push((x, t.clone()));
                next.push(a);
            }
        }
        acc = next;
    }
    acc
}

fn meets(other: &Side, v: &Term, nf: Option<&Term>) -> bool {
    other.seen.contains(v)
        || other.reach.contains(v)
        || nf.is_some_and(|n| other.seen.contains(n) || other.reach.contains(n))
}
