//! First-order terms over an unsorted signature.
//!
//! Variables are numbered `x1, x2, ...` and carry no names; surface names
//! only exist in the parser and in rendered output. Positions are 1-based
//! argument paths from the root. All values here are immutable once built.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::Error;

/// A function symbol `f` of fixed arity.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    name: Arc<str>,
    arity: usize,
}

impl Symbol {
    pub fn new(name: &str, arity: usize) -> Symbol {
        assert!(!name.is_empty(), "symbol names must be nonempty");
        Symbol {
            name: Arc::from(name),
            arity,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.name, self.arity)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

/// An ordered set of symbols. The declaration order is the index order
/// used for symbol-count vectors and for the boundary matrices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    symbols: Vec<Symbol>,
}

impl Signature {
    pub fn new() -> Signature {
        Signature::default()
    }

    pub fn from_symbols<I: IntoIterator<Item = Symbol>>(symbols: I) -> Result<Signature, Error> {
        let mut sig = Signature::new();
        for s in symbols {
            sig.push(s)?;
        }
        Ok(sig)
    }

    /// Appends a symbol; names must be unique.
    pub fn push(&mut self, sym: Symbol) -> Result<(), Error> {
        if self.get(sym.name()).is_some() {
            return Err(Error::DuplicateSymbol(sym.name().to_string()));
        }
        self.symbols.push(sym);
        Ok(())
    }

    /// Removes the symbol with the given name, keeping the order of the rest.
    pub fn remove(&mut self, name: &str) -> Option<Symbol> {
        let idx = self.index_of(name)?;
        Some(self.symbols.remove(idx))
    }

    pub fn get(&self, name: &str) -> Option<&Symbol> {
        self.symbols.iter().find(|s| s.name() == name)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name() == name)
    }

    pub fn contains(&self, sym: &Symbol) -> bool {
        self.get(sym.name()) == Some(sym)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Symbol> {
        self.symbols.iter()
    }
}

/// A path of 1-based argument indices from the root. The empty path is the
/// root position.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position(pub Vec<usize>);

impl Position {
    pub fn root() -> Position {
        Position(Vec::new())
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, i: usize) -> Position {
        let mut p = self.0.clone();
        p.push(i);
        Position(p)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True if `self` lies strictly below `other`.
    pub fn is_strictly_below(&self, other: &Position) -> bool {
        self.0.len() > other.0.len() && self.0.starts_with(&other.0)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("root");
        }
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(".")?;
            }
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

/// A first-order term. `Var(i)` is the variable `x_i` with `i >= 1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(u32),
    App(Symbol, Vec<Term>),
}

impl Term {
    pub fn var(i: u32) -> Term {
        assert!(i >= 1, "variable indices start at 1");
        Term::Var(i)
    }

    /// Builds `f(args)`. Panics if the argument count differs from the arity.
    pub fn app(sym: &Symbol, args: Vec<Term>) -> Term {
        assert_eq!(
            sym.arity(),
            args.len(),
            "symbol {} applied to {} arguments",
            sym.name(),
            args.len()
        );
        Term::App(sym.clone(), args)
    }

    pub fn constant(sym: &Symbol) -> Term {
        Term::app(sym, Vec::new())
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn root_symbol(&self) -> Option<&Symbol> {
        match self {
            Term::Var(_) => None,
            Term::App(f, _) => Some(f),
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::Var(_) => &[],
            Term::App(_, args) => args,
        }
    }

    /// Number of symbol and variable occurrences.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// Variables in order of first occurrence, left to right.
    pub fn vars(&self) -> Vec<u32> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<u32>) {
        match self {
            Term::Var(i) => {
                if !out.contains(i) {
                    out.push(*i);
                }
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn var_set(&self) -> BTreeSet<u32> {
        self.vars().into_iter().collect()
    }

    pub fn max_var(&self) -> u32 {
        match self {
            Term::Var(i) => *i,
            Term::App(_, args) => args.iter().map(Term::max_var).max().unwrap_or(0),
        }
    }

    pub fn occurs(&self, i: u32) -> bool {
        match self {
            Term::Var(j) => *j == i,
            Term::App(_, args) => args.iter().any(|a| a.occurs(i)),
        }
    }

    /// `#_i t`: the number of occurrences of `x_i`.
    pub fn var_count(&self, i: u32) -> usize {
        match self {
            Term::Var(j) => usize::from(*j == i),
            Term::App(_, args) => args.iter().map(|a| a.var_count(i)).sum(),
        }
    }

    pub fn contains_symbol(&self, name: &str) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(f, args) => f.name() == name || args.iter().any(|a| a.contains_symbol(name)),
        }
    }

    /// Per-symbol occurrence counts, indexed by the signature order.
    /// Symbols outside `sig` are ignored.
    pub fn symbol_counts(&self, sig: &Signature) -> Vec<i64> {
        let mut counts = vec![0i64; sig.len()];
        self.add_symbol_counts(sig, &mut counts);
        counts
    }

    fn add_symbol_counts(&self, sig: &Signature, counts: &mut [i64]) {
        if let Term::App(f, args) = self {
            if let Some(k) = sig.index_of(f.name()) {
                counts[k] += 1;
            }
            for a in args {
                a.add_symbol_counts(sig, counts);
            }
        }
    }

    /// All positions, outermost first and left to right (pre-order).
    pub fn positions(&self) -> Vec<Position> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        self.collect_positions(&mut path, &mut out, false);
        out
    }

    /// Positions whose subterm is not a variable, in pre-order.
    pub fn function_positions(&self) -> Vec<Position> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        self.collect_positions(&mut path, &mut out, true);
        out
    }

    fn collect_positions(&self, path: &mut Vec<usize>, out: &mut Vec<Position>, skip_vars: bool) {
        match self {
            Term::Var(_) => {
                if !skip_vars {
                    out.push(Position(path.clone()));
                }
            }
            Term::App(_, args) => {
                out.push(Position(path.clone()));
                for (k, a) in args.iter().enumerate() {
                    path.push(k + 1);
                    a.collect_positions(path, out, skip_vars);
                    path.pop();
                }
            }
        }
    }

    pub fn subterm_at(&self, p: &Position) -> Result<&Term, Error> {
        let mut t = self;
        for &i in &p.0 {
            t = match t {
                Term::App(_, args) if i >= 1 && i <= args.len() => &args[i - 1],
                _ => return Err(Error::InvalidPosition(p.to_string())),
            };
        }
        Ok(t)
    }

    pub fn replace_at(&self, p: &Position, s: Term) -> Result<Term, Error> {
        fn go(t: &Term, path: &[usize], s: Term, p: &Position) -> Result<Term, Error> {
            let Some((&i, rest)) = path.split_first() else {
                return Ok(s);
            };
            match t {
                Term::App(f, args) if i >= 1 && i <= args.len() => {
                    let mut new_args = Vec::with_capacity(args.len());
                    new_args.extend_from_slice(&args[..i - 1]);
                    new_args.push(go(&args[i - 1], rest, s, p)?);
                    new_args.extend_from_slice(&args[i..]);
                    Ok(Term::App(f.clone(), new_args))
                }
                _ => Err(Error::InvalidPosition(p.to_string())),
            }
        }
        go(self, &p.0, s, p)
    }

    /// Shifts every variable index by `offset`.
    pub fn rename_apart(&self, offset: u32) -> Term {
        self.map_vars(&|i| i + offset)
    }

    pub fn map_vars(&self, f: &dyn Fn(u32) -> u32) -> Term {
        match self {
            Term::Var(i) => Term::Var(f(*i)),
            Term::App(g, args) => Term::App(g.clone(), args.iter().map(|a| a.map_vars(f)).collect()),
        }
    }

    /// Renumbers variables to `x1, x2, ...` in order of first occurrence and
    /// returns the renaming that was used.
    pub fn canonical_renaming(terms: &[&Term]) -> BTreeMap<u32, u32> {
        let mut map = BTreeMap::new();
        for t in terms {
            for v in t.vars() {
                let next = map.len() as u32 + 1;
                map.entry(v).or_insert(next);
            }
        }
        map
    }

    /// Renders with the given variable names (`names[i-1]` for `x_i`);
    /// indices past the end fall back to `x<i>`.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        TermDisplay { term: self, names }
    }
}

struct TermDisplay<'a> {
    term: &'a Term,
    names: &'a [String],
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(self.term, self.names, f)
    }
}

fn write_term(t: &Term, names: &[String], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        Term::Var(i) => match names.get(*i as usize - 1) {
            Some(n) => f.write_str(n),
            None => write!(f, "x{i}"),
        },
        Term::App(g, args) => {
            f.write_str(g.name())?;
            if !args.is_empty() {
                f.write_str("(")?;
                for (k, a) in args.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write_term(a, names, f)?;
                }
                f.write_str(")")?;
            }
            Ok(())
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(self, &[], f)
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(self, &[], f)
    }
}

/// A finite parallel substitution `{x_i ↦ t_i}`. Trivial bindings
/// `x_i ↦ x_i` are never stored.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Substitution {
    bindings: BTreeMap<u32, Term>,
}

impl Substitution {
    pub fn new() -> Substitution {
        Substitution::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (u32, Term)>>(pairs: I) -> Substitution {
        let mut s = Substitution::new();
        for (i, t) in pairs {
            s.insert(i, t);
        }
        s
    }

    pub fn insert(&mut self, i: u32, t: Term) {
        if t == Term::Var(i) {
            self.bindings.remove(&i);
        } else {
            self.bindings.insert(i, t);
        }
    }

    pub fn get(&self, i: u32) -> Option<&Term> {
        self.bindings.get(&i)
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &Term)> {
        self.bindings.iter().map(|(i, t)| (*i, t))
    }

    pub fn domain(&self) -> impl Iterator<Item = u32> + '_ {
        self.bindings.keys().copied()
    }

    /// Simultaneous replacement of every bound variable in `t`.
    pub fn apply(&self, t: &Term) -> Term {
        if self.bindings.is_empty() {
            return t.clone();
        }
        match t {
            Term::Var(i) => self.bindings.get(i).cloned().unwrap_or_else(|| t.clone()),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| self.apply(a)).collect()),
        }
    }

    /// The substitution `t ↦ outer(self(t))`.
    pub fn then(&self, outer: &Substitution) -> Substitution {
        let mut out = Substitution::new();
        for (i, t) in &self.bindings {
            out.insert(*i, outer.apply(t));
        }
        for (i, t) in &outer.bindings {
            if !self.bindings.contains_key(i) {
                out.insert(*i, t.clone());
            }
        }
        out
    }

    pub fn is_idempotent(&self) -> bool {
        self.bindings
            .values()
            .all(|t| t.vars().iter().all(|v| !self.bindings.contains_key(v)))
    }
}

impl fmt::Debug for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, (i, t)) in self.bindings.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "x{i} ↦ {t}")?;
        }
        f.write_str("}")
    }
}

/// Most general unifier of `t1` and `t2`, with occurs check. The result is
/// idempotent. Callers are expected to rename the two terms apart first.
pub fn unify(t1: &Term, t2: &Term) -> Option<Substitution> {
    unify_all(vec![(t1.clone(), t2.clone())])
}

/// Simultaneous unification of several equations.
pub fn unify_all(mut eqs: Vec<(Term, Term)>) -> Option<Substitution> {
    // solved form kept fully applied, so it stays idempotent
    let mut solved = Substitution::new();
    while let Some((a, b)) = eqs.pop() {
        let a = solved.apply(&a);
        let b = solved.apply(&b);
        match (a, b) {
            (Term::Var(i), Term::Var(j)) if i == j => {}
            (Term::Var(i), t) | (t, Term::Var(i)) => {
                if t.occurs(i) {
                    return None;
                }
                solved = solved.then(&Substitution::from_pairs([(i, t)]));
            }
            (Term::App(f, fa), Term::App(g, ga)) => {
                if f != g {
                    return None;
                }
                eqs.extend(fa.into_iter().zip(ga));
            }
        }
    }
    Some(solved)
}

/// One-sided matching: `σ` with `σ(pattern) = subject`.
pub fn match_term(pattern: &Term, subject: &Term) -> Option<Substitution> {
    let mut bindings = BTreeMap::new();
    if match_into(pattern, subject, &mut bindings) {
        Some(Substitution::from_pairs(bindings))
    } else {
        None
    }
}

pub(crate) fn match_into(pattern: &Term, subject: &Term, bindings: &mut BTreeMap<u32, Term>) -> bool {
    match pattern {
        Term::Var(i) => match bindings.get(i) {
            Some(bound) => bound == subject,
            None => {
                bindings.insert(*i, subject.clone());
                true
            }
        },
        Term::App(f, pargs) => match subject {
            Term::App(g, sargs) if f == g => pargs
                .iter()
                .zip(sargs)
                .all(|(p, s)| match_into(p, s, bindings)),
            _ => false,
        },
    }
}
