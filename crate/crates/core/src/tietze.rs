//! Tietze transformations: the four moves that change a presentation
//! without changing the theory it presents, each with its side condition
//! checked before it is applied.
//!
//! Scripts are line oriented:
//!
//! ```text
//! # comment
//! load peano.trs                 # relative to the script's directory
//! var x y z                      # extra variable names
//! add-symbol 1 := S(0)           # (1) adds 1/0 and S(0) -> 1
//! add-symbol d(x) := +(x,x)      # (1) with parameters
//! add-rule +(1,x) -> S(x)        # (3)
//! remove-rule S(0) -> 1          # (4)
//! remove-symbol S                # (2)
//! ```

use std::path::{Path, PathBuf};

use crate::conversion::{search, SearchOptions, SearchOutcome};
use crate::error::{Error, Result};
use crate::syntax::{parse_rule, parse_term, parse_trs_file, TrsFile};
use crate::term::{Signature, Symbol, Term};
use crate::trs::{Rule, Trs};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TietzeStep {
    /// (1) Adjoin a fresh symbol `f/n` defined by `t`, adding `t -> f(params)`.
    AddSymbol {
        symbol: Symbol,
        params: Vec<u32>,
        definition: Term,
    },
    /// (2) Remove `f` together with its defining rule `t -> f(x1..xn)`.
    RemoveSymbol { name: String },
    /// (3) Add a rule whose sides are already convertible.
    AddRule(Rule),
    /// (4) Remove a rule whose sides stay convertible without it.
    RemoveRule(Rule),
}

impl TietzeStep {
    pub fn clause(&self) -> u8 {
        match self {
            TietzeStep::AddSymbol { .. } => 1,
            TietzeStep::RemoveSymbol { .. } => 2,
            TietzeStep::AddRule(_) => 3,
            TietzeStep::RemoveRule(_) => 4,
        }
    }
}

fn violated(clause: u8, reason: impl Into<String>) -> Error {
    Error::SideConditionViolated {
        clause,
        reason: reason.into(),
    }
}

/// Applies one transformation, refusing it when its side condition fails.
pub fn tietze_apply(trs: &Trs, step: &TietzeStep, opts: &SearchOptions) -> Result<Trs> {
    match step {
        TietzeStep::AddSymbol {
            symbol,
            params,
            definition,
        } => {
            if trs.signature().get(symbol.name()).is_some() {
                return Err(violated(1, format!("symbol `{}` is not fresh", symbol.name())));
            }
            if params.len() != symbol.arity() {
                return Err(violated(1, "parameter count differs from the arity"));
            }
            let mut distinct = params.clone();
            distinct.sort_unstable();
            distinct.dedup();
            if distinct.len() != params.len() {
                return Err(violated(1, "parameters must be distinct variables"));
            }
            if let Some(v) = definition.vars().into_iter().find(|v| !params.contains(v)) {
                return Err(violated(1, format!("definition uses x{v}, which is not a parameter")));
            }
            if definition.is_var() {
                return Err(violated(1, "definition must not be a variable"));
            }
            if !over(trs.signature(), definition) {
                return Err(violated(1, "definition uses a symbol outside the signature"));
            }
            let mut sig = trs.signature().clone();
            sig.push(symbol.clone())?;
            let rhs = Term::app(symbol, params.iter().map(|&v| Term::var(v)).collect());
            let mut rules = trs.rules().to_vec();
            rules.push(Rule::new(definition.clone(), rhs)?);
            Trs::new(sig, rules)
        }
        TietzeStep::RemoveSymbol { name } => {
            let Some(sym) = trs.signature().get(name).cloned() else {
                return Err(violated(2, format!("`{name}` is not in the signature")));
            };
            let users: Vec<&Rule> = trs
                .rules()
                .iter()
                .filter(|r| r.lhs.contains_symbol(name) || r.rhs.contains_symbol(name))
                .collect();
            let [def] = users.as_slice() else {
                return Err(violated(
                    2,
                    format!("`{name}` occurs in {} rules; exactly one defining rule is allowed", users.len()),
                ));
            };
            if !defines(def, &sym) {
                return Err(violated(
                    2,
                    format!("rule {} -> {} is not of the form t -> {name}(x1,...,xn) with `{name}` absent from t", def.lhs, def.rhs),
                ));
            }
            let mut sig = trs.signature().clone();
            sig.remove(name);
            let rules = trs.rules().iter().filter(|r| r.index != def.index).cloned().collect();
            Trs::new(sig, rules)
        }
        TietzeStep::AddRule(rule) => {
            if !over(trs.signature(), &rule.lhs) || !over(trs.signature(), &rule.rhs) {
                return Err(violated(3, "rule uses a symbol outside the signature"));
            }
            convertible(trs, &rule.lhs, &rule.rhs, 3, opts)?;
            let mut rules = trs.rules().to_vec();
            rules.push(rule.clone());
            Trs::new(trs.signature().clone(), rules)
        }
        TietzeStep::RemoveRule(rule) => {
            let Some(found) = trs.rules().iter().find(|r| r.is_variant_of(rule)) else {
                return Err(violated(4, format!("{} -> {} is not a rule of the system", rule.lhs, rule.rhs)));
            };
            let rest: Vec<Rule> = trs.rules().iter().filter(|r| r.index != found.index).cloned().collect();
            let smaller = Trs::new(trs.signature().clone(), rest)?;
            convertible(&smaller, &found.lhs, &found.rhs, 4, opts)?;
            Ok(smaller)
        }
    }
}

fn over(sig: &Signature, t: &Term) -> bool {
    match t {
        Term::Var(_) => true,
        Term::App(f, args) => sig.contains(f) && args.iter().all(|a| over(sig, a)),
    }
}

fn defines(rule: &Rule, f: &Symbol) -> bool {
    if rule.lhs.contains_symbol(f.name()) || rule.rhs.root_symbol() != Some(f) {
        return false;
    }
    let mut vars = Vec::new();
    for a in rule.rhs.args() {
        match a {
            Term::Var(v) if !vars.contains(v) => vars.push(*v),
            _ => return false,
        }
    }
    true
}

/// Establishes `s ↔* t` in `trs`. Equal normal forms settle it at once;
/// distinct normal forms of a locally confluent system refute it (the system
/// is assumed terminating); otherwise a bounded search decides.
fn convertible(trs: &Trs, s: &Term, t: &Term, clause: u8, opts: &SearchOptions) -> Result<()> {
    let nfs = (
        trs.normal_form(s, opts.strategy, opts.max_steps),
        trs.normal_form(t, opts.strategy, opts.max_steps),
    );
    if let (Ok(a), Ok(b)) = &nfs {
        if a == b {
            return Ok(());
        }
        let confluent = trs
            .local_confluence_check(opts.strategy, opts.max_steps)
            .map(|r| r.all_joinable())
            .unwrap_or(false);
        if confluent {
            return Err(violated(
                clause,
                format!("{s} and {t} have distinct normal forms {a} and {b} in a complete system"),
            ));
        }
    }
    match search(trs.rules(), s, t, opts.search_nodes) {
        SearchOutcome::Found { .. } => Ok(()),
        SearchOutcome::Exhausted { .. } => Err(violated(clause, format!("{s} and {t} are not convertible"))),
        SearchOutcome::Budget { nodes } => Err(Error::SearchBudgetExceeded(nodes)),
    }
}

/// A system with the variable names used to read and print it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub trs: Trs,
    pub var_names: Vec<String>,
}

impl From<TrsFile> for Presentation {
    fn from(f: TrsFile) -> Self {
        Presentation {
            trs: f.trs,
            var_names: f.var_names,
        }
    }
}

impl Default for Presentation {
    fn default() -> Self {
        Presentation {
            trs: Trs::new(Signature::new(), Vec::new()).expect("empty system"),
            var_names: Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AppliedStep {
    pub line: usize,
    pub step: TietzeStep,
}

#[derive(Clone, Debug)]
pub struct ScriptRun {
    pub result: Presentation,
    pub steps: Vec<AppliedStep>,
}

/// Runs a script file; `load` paths are resolved against its directory.
pub fn run_script(path: &Path, start: Presentation, opts: &SearchOptions) -> Result<ScriptRun> {
    let text = std::fs::read_to_string(path)?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    run_script_str(&text, &dir, start, opts)
}

/// Runs script text. A failing step is reported as
/// [`Error::TietzeStep`] carrying its 1-based step number and line.
pub fn run_script_str(text: &str, base_dir: &Path, start: Presentation, opts: &SearchOptions) -> Result<ScriptRun> {
    let mut cur = start;
    let mut steps = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line_no = k + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (cmd, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        let wrap = |source: Error, step: usize| Error::TietzeStep {
            step,
            line: line_no,
            source: Box::new(source),
        };
        match cmd {
            "load" => {
                let p: PathBuf = base_dir.join(rest);
                cur = parse_trs_file(&p).map_err(|e| wrap(e, steps.len() + 1))?.into();
            }
            "var" => {
                for v in rest.split_whitespace() {
                    if !cur.var_names.iter().any(|n| n == v) {
                        cur.var_names.push(v.to_string());
                    }
                }
            }
            _ => {
                let n = steps.len() + 1;
                let step = parse_step(cmd, rest, &mut cur).map_err(|e| wrap(e, n))?;
                cur.trs = tietze_apply(&cur.trs, &step, opts).map_err(|e| wrap(e, n))?;
                steps.push(AppliedStep { line: line_no, step });
            }
        }
    }
    Ok(ScriptRun { result: cur, steps })
}

fn parse_step(cmd: &str, rest: &str, cur: &mut Presentation) -> Result<TietzeStep> {
    let sig = cur.trs.signature();
    match cmd {
        "add-symbol" => {
            let (head, body) = rest.split_once(":=").ok_or_else(|| Error::Syntax {
                loc: crate::error::Location { line: 1, col: 1 },
                msg: "expected `add-symbol f(x1,...,xn) := t`".into(),
            })?;
            let head = head.trim();
            let (name, args) = match head.split_once('(') {
                Some((n, a)) => {
                    let a = a.trim_end().strip_suffix(')').ok_or_else(|| Error::Syntax {
                        loc: crate::error::Location { line: 1, col: head.len() },
                        msg: "unclosed parameter list".into(),
                    })?;
                    let names: Vec<&str> = a.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
                    (n.trim(), names)
                }
                None => (head, Vec::new()),
            };
            let mut params = Vec::with_capacity(args.len());
            for a in args {
                let idx = match cur.var_names.iter().position(|v| v == a) {
                    Some(i) => i,
                    None => {
                        cur.var_names.push(a.to_string());
                        cur.var_names.len() - 1
                    }
                };
                params.push(idx as u32 + 1);
            }
            let definition = parse_term(body.trim(), cur.trs.signature(), &cur.var_names)?;
            Ok(TietzeStep::AddSymbol {
                symbol: Symbol::new(name, params.len()),
                params,
                definition,
            })
        }
        "remove-symbol" => Ok(TietzeStep::RemoveSymbol { name: rest.to_string() }),
        "add-rule" => Ok(TietzeStep::AddRule(parse_rule(rest, sig, &cur.var_names)?)),
        "remove-rule" => Ok(TietzeStep::RemoveRule(parse_rule(rest, sig, &cur.var_names)?)),
        other => Err(Error::Syntax {
            loc: crate::error::Location { line: 1, col: 1 },
            msg: format!("unknown directive `{other}`"),
        }),
    }
}
