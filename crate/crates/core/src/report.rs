//! Text and JSON renderings of analysis results.
//!
//! JSON objects are built as [`serde_json::Value`]s, whose maps keep keys
//! sorted, so output is stable and re-rendering parsed output reproduces it
//! byte for byte. Integers that fit in `i64` are numbers; larger ones are
//! decimal strings.

use std::fmt::Write;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::critical::CriticalPeak;
use crate::equiv::{Derivation, EquivReport};
use crate::homology::BoundReport;
use crate::linalg::{IntMatrix, SnfResult};
use crate::syntax::render_trs;
use crate::term::Term;
use crate::tietze::{ScriptRun, TietzeStep};
use crate::trs::Rule;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ReportFormat {
    #[default]
    Text,
    Json,
}

/// Pretty-printed JSON with a trailing newline.
pub fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values always serialize");
    s.push('\n');
    s
}

pub fn int_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(k) => Value::from(k),
        None => Value::from(n.to_string()),
    }
}

pub fn matrix_json(m: &IntMatrix) -> Value {
    json!({
        "rows": m.rows(),
        "cols": m.cols(),
        "entries": (0..m.rows())
            .map(|r| m.row(r).iter().map(int_json).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    })
}

pub fn snf_json(s: &SnfResult) -> Value {
    json!({
        "divisors": s.divisors.iter().map(int_json).collect::<Vec<_>>(),
        "rank": s.rank,
    })
}

fn divisors_text(s: &SnfResult) -> String {
    if s.divisors.is_empty() {
        "(none)".to_string()
    } else {
        s.divisors.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
    }
}

const VACUOUS: &str = "a bound of 0 is vacuous: every system has at least 0 rules";

pub fn bound_json(r: &BoundReport) -> Value {
    json!({
        "degree": r.degree,
        "ring": r.ring.to_string(),
        "strategy": r.strategy.to_string(),
        "n_rules": r.n_rules,
        "n_symbols": r.n_symbols,
        "n_cps": r.n_cps,
        "n_prime_cps": r.n_prime_cps,
        "prime_only": r.prime_only,
        "d": matrix_json(&r.d),
        "snf": snf_json(&r.snf),
        "e": r.e,
        "lower_bound": r.lower_bound,
        "rank_d1": r.rank_d1,
        "s_h2": r.s_h2,
        "s_h1": r.s_h1,
        "completeness": {
            "locally_confluent": r.completeness.locally_confluent,
            "pairs_checked": r.completeness.pairs_checked,
            "termination": r.completeness.termination,
        },
        "note": if r.lower_bound == 0 { Value::from(VACUOUS) } else { Value::Null },
    })
}

pub fn bound_text(r: &BoundReport) -> String {
    let mut o = String::new();
    writeln!(o, "rules: {}", r.n_rules).unwrap();
    writeln!(o, "symbols: {}", r.n_symbols).unwrap();
    writeln!(o, "degree: {}", r.degree).unwrap();
    writeln!(o, "ring: {}", r.ring).unwrap();
    writeln!(o, "strategy: {}", r.strategy).unwrap();
    writeln!(o, "critical pairs: {}", r.n_cps).unwrap();
    writeln!(o, "prime critical pairs: {}", r.n_prime_cps).unwrap();
    if r.prime_only {
        writeln!(o, "D(R) built from prime critical pairs only").unwrap();
    }
    writeln!(
        o,
        "local confluence: verified ({} critical pairs joined)",
        r.completeness.pairs_checked
    )
    .unwrap();
    writeln!(o, "termination: {}", r.completeness.termination).unwrap();
    writeln!(o, "D(R): {} x {}", r.d.rows(), r.d.cols()).unwrap();
    writeln!(o, "SNF divisors over Z: {}", divisors_text(&r.snf)).unwrap();
    writeln!(o, "e(R): {}", r.e).unwrap();
    writeln!(o, "lower bound: {}", r.lower_bound).unwrap();
    writeln!(o, "rank(d1): {}", r.rank_d1).unwrap();
    writeln!(o, "s(H2): {}", r.s_h2).unwrap();
    if let Some(h1) = r.s_h1 {
        writeln!(o, "s(H1): {h1}").unwrap();
    }
    if r.lower_bound == 0 {
        writeln!(o, "note: {VACUOUS}").unwrap();
    }
    o
}

pub fn cp_json(cp: &CriticalPeak) -> Value {
    json!({
        "a": cp.outer,
        "b": cp.inner,
        "pos": cp.pos.to_string(),
        "peak": cp.peak.to_string(),
        "t": cp.t.to_string(),
        "s": cp.s.to_string(),
        "prime": cp.prime,
    })
}

pub fn cps_json(cps: &[CriticalPeak]) -> Value {
    Value::Array(cps.iter().map(cp_json).collect())
}

pub fn cps_text(cps: &[CriticalPeak]) -> String {
    let mut o = String::new();
    for (k, cp) in cps.iter().enumerate() {
        writeln!(
            o,
            "{:>3}. a={} b={} pos={} prime={} peak={} t={} s={}",
            k + 1,
            cp.outer,
            cp.inner,
            cp.pos,
            if cp.prime { "yes" } else { "no" },
            cp.peak,
            cp.t,
            cp.s
        )
        .unwrap();
    }
    writeln!(o, "total: {}", cps.len()).unwrap();
    o
}

pub fn snf_text(s: &SnfResult) -> String {
    format!("divisors: {}\nrank: {}\n", divisors_text(s), s.rank)
}

fn rule_text(r: &Rule, names: &[String]) -> String {
    format!("{} -> {}", r.lhs.display_with(names), r.rhs.display_with(names))
}

fn term_text(t: &Term, names: &[String]) -> String {
    t.display_with(names).to_string()
}

fn derivation_json(d: &Derivation) -> Value {
    match d {
        Derivation::Given => json!({"status": "given"}),
        Derivation::Derived { steps, nodes } => json!({"status": "derived", "steps": steps, "nodes": nodes}),
        Derivation::Refuted { nodes } => json!({"status": "refuted", "nodes": nodes}),
        Derivation::Undecided => json!({"status": "undecided"}),
    }
}

/// `base` and `cand` name the variables of the two systems.
pub fn equiv_json(r: &EquivReport, base: &[String], cand: &[String]) -> Value {
    json!({
        "verdict": r.verdict.to_string(),
        "candidates": r.candidates.iter().map(|c| json!({
            "rule": rule_text(&c.rule, cand),
            "lhs_nf": term_text(&c.lhs_nf, cand),
            "rhs_nf": term_text(&c.rhs_nf, cand),
            "holds": c.holds(),
        })).collect::<Vec<_>>(),
        "base_rules": r.derivations.iter().map(|(rule, d)| {
            let mut v = derivation_json(d);
            v["rule"] = Value::from(rule_text(rule, base));
            v["index"] = Value::from(rule.index);
            v
        }).collect::<Vec<_>>(),
        "offending_candidate": r.offending_candidate().map(|c| rule_text(&c.rule, cand)),
        "refuted_base_rule": r.refuted_base_rule().map(|b| rule_text(b, base)),
    })
}

pub fn equiv_text(r: &EquivReport, base: &[String], cand: &[String]) -> String {
    let mut o = String::new();
    writeln!(o, "verdict: {}", r.verdict).unwrap();
    if let Some(c) = r.offending_candidate() {
        writeln!(
            o,
            "offending candidate rule: {}  (normal forms {} and {})",
            rule_text(&c.rule, cand),
            term_text(&c.lhs_nf, cand),
            term_text(&c.rhs_nf, cand)
        )
        .unwrap();
    }
    if let Some(b) = r.refuted_base_rule() {
        writeln!(o, "base rule not derivable from the candidates: {}", rule_text(b, base)).unwrap();
    }
    for c in &r.candidates {
        writeln!(
            o,
            "candidate {}: {}  lhs nf = {}, rhs nf = {}",
            c.rule.index,
            rule_text(&c.rule, cand),
            term_text(&c.lhs_nf, cand),
            term_text(&c.rhs_nf, cand)
        )
        .unwrap();
    }
    for (rule, d) in &r.derivations {
        let status = match d {
            Derivation::Given => "given".to_string(),
            Derivation::Derived { steps, nodes } => format!("derived ({steps} explicit steps, {nodes} nodes)"),
            Derivation::Refuted { nodes } => format!("not derivable (class exhausted after {nodes} nodes)"),
            Derivation::Undecided => "undecided within budget".to_string(),
        };
        writeln!(o, "base rule {}: {}  {}", rule.index, rule_text(rule, base), status).unwrap();
    }
    o
}

pub fn step_text(step: &TietzeStep, names: &[String]) -> String {
    match step {
        TietzeStep::AddSymbol {
            symbol,
            params,
            definition,
        } => {
            let head = if params.is_empty() {
                symbol.name().to_string()
            } else {
                let ps: Vec<String> = params.iter().map(|&v| term_text(&Term::var(v), names)).collect();
                format!("{}({})", symbol.name(), ps.join(","))
            };
            format!("add-symbol {head} := {}", term_text(definition, names))
        }
        TietzeStep::RemoveSymbol { name } => format!("remove-symbol {name}"),
        TietzeStep::AddRule(r) => format!("add-rule {}", rule_text(r, names)),
        TietzeStep::RemoveRule(r) => format!("remove-rule {}", rule_text(r, names)),
    }
}

pub fn tietze_json(run: &ScriptRun) -> Value {
    let names = &run.result.var_names;
    json!({
        "steps": run.steps.iter().map(|s| json!({
            "line": s.line,
            "clause": s.step.clause(),
            "step": step_text(&s.step, names),
        })).collect::<Vec<_>>(),
        "signature": run.result.trs.signature().iter()
            .map(|f| json!({"name": f.name(), "arity": f.arity()}))
            .collect::<Vec<_>>(),
        "rules": run.result.trs.rules().iter().map(|r| rule_text(r, names)).collect::<Vec<_>>(),
        "system": render_trs(&run.result.trs, names),
    })
}

/// The final system in the input file format, preceded by a comment listing
/// the applied steps.
pub fn tietze_text(run: &ScriptRun) -> String {
    let names = &run.result.var_names;
    let mut o = String::new();
    writeln!(o, "(COMMENT {} step(s) applied", run.steps.len()).unwrap();
    for s in &run.steps {
        writeln!(o, "  line {}: ({}) {}", s.line, s.step.clause(), step_text(&s.step, names)).unwrap();
    }
    o.push_str(")\n");
    o.push_str(&render_trs(&run.result.trs, names));
    o
}
