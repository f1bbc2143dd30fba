//! Text formats: prefix term syntax, the `(VAR ...) (RULES ...)` system
//! format, and whitespace-separated integer matrices.
//!
//! Identifiers are runs of any characters other than whitespace, `(`, `)`
//! and `,`; the arrow `->` always ends an identifier. Constants may be
//! written with or without `()`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;

use crate::error::{Error, Location, Result};
use crate::linalg::IntMatrix;
use crate::term::{Signature, Symbol, Term};
use crate::trs::{Rule, Trs};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Open,
    Close,
    Comma,
    Arrow,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Lexer<'a> {
        Lexer {
            src,
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn loc(&self) -> Location {
        Location {
            line: self.line,
            col: self.col,
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.rest().chars().next()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while self.rest().starts_with(char::is_whitespace) {
            self.bump();
        }
    }

    fn all(mut self) -> Vec<(Tok, Location)> {
        let mut out = Vec::new();
        loop {
            self.skip_ws();
            let loc = self.loc();
            let rest = self.rest();
            let Some(c) = rest.chars().next() else {
                return out;
            };
            let tok = if rest.starts_with("->") {
                self.bump();
                self.bump();
                Tok::Arrow
            } else if c == '(' {
                self.bump();
                Tok::Open
            } else if c == ')' {
                self.bump();
                Tok::Close
            } else if c == ',' {
                self.bump();
                Tok::Comma
            } else {
                let start = self.pos;
                while let Some(c) = self.rest().chars().next() {
                    if c.is_whitespace() || "(),".contains(c) || self.rest().starts_with("->") {
                        break;
                    }
                    self.bump();
                }
                Tok::Ident(self.src[start..self.pos].to_string())
            };
            out.push((tok, loc));
        }
    }
}

/// A parsed but unresolved term: identifiers are not yet classified as
/// variables or symbols.
#[derive(Clone, Debug)]
struct RawTerm {
    name: String,
    loc: Location,
    args: Option<Vec<RawTerm>>,
}

struct Parser {
    toks: Vec<(Tok, Location)>,
    pos: usize,
    end: Location,
}

impl Parser {
    fn new(src: &str) -> Parser {
        let toks = Lexer::new(src).all();
        let end = {
            let mut lx = Lexer::new(src);
            while lx.bump().is_some() {}
            lx.loc()
        };
        Parser { toks, pos: 0, end }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn loc(&self) -> Location {
        self.toks.get(self.pos).map(|(_, l)| *l).unwrap_or(self.end)
    }

    fn next(&mut self) -> Option<(Tok, Location)> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            loc: self.loc(),
            msg: msg.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected {what}"))
        }
    }

    fn ident(&mut self) -> Result<(String, Location)> {
        match self.next() {
            Some((Tok::Ident(s), loc)) => Ok((s, loc)),
            _ => {
                self.pos -= 1;
                self.err("expected an identifier")
            }
        }
    }

    fn term(&mut self) -> Result<RawTerm> {
        let (name, loc) = self.ident()?;
        if self.peek() != Some(&Tok::Open) {
            return Ok(RawTerm { name, loc, args: None });
        }
        self.pos += 1;
        let mut args = Vec::new();
        if self.peek() == Some(&Tok::Close) {
            self.pos += 1;
            return Ok(RawTerm {
                name,
                loc,
                args: Some(args),
            });
        }
        loop {
            args.push(self.term()?);
            match self.peek() {
                Some(Tok::Comma) => self.pos += 1,
                Some(Tok::Close) => {
                    self.pos += 1;
                    break;
                }
                _ => return self.err("expected `,` or `)`"),
            }
        }
        Ok(RawTerm {
            name,
            loc,
            args: Some(args),
        })
    }

    /// Skips a balanced parenthesized group whose `(` was already consumed.
    fn skip_group(&mut self) -> Result<()> {
        let mut depth = 1;
        while depth > 0 {
            match self.next() {
                Some((Tok::Open, _)) => depth += 1,
                Some((Tok::Close, _)) => depth -= 1,
                Some(_) => {}
                None => return self.err("unbalanced parentheses"),
            }
        }
        Ok(())
    }
}

fn resolve(raw: &RawTerm, sig: &Signature, vars: &[String]) -> Result<Term> {
    if let Some(k) = vars.iter().position(|v| *v == raw.name) {
        if raw.args.is_some() {
            return Err(Error::AmbiguousIdentifier {
                loc: raw.loc,
                name: raw.name.clone(),
            });
        }
        return Ok(Term::Var(k as u32 + 1));
    }
    let Some(sym) = sig.get(&raw.name) else {
        return Err(Error::UnknownIdentifier {
            loc: raw.loc,
            name: raw.name.clone(),
        });
    };
    let args = raw.args.as_deref().unwrap_or(&[]);
    if args.len() != sym.arity() {
        return Err(Error::ArityMismatch {
            loc: raw.loc,
            name: raw.name.clone(),
            expected: sym.arity(),
            found: args.len(),
        });
    }
    let args = args
        .iter()
        .map(|a| resolve(a, sig, vars))
        .collect::<Result<Vec<_>>>()?;
    Ok(Term::App(sym.clone(), args))
}

/// Parses a term in prefix syntax. The k-th name in `vars` becomes `x_k`;
/// every other identifier must be a symbol of `sig`.
pub fn parse_term(text: &str, sig: &Signature, vars: &[String]) -> Result<Term> {
    let mut p = Parser::new(text);
    let raw = p.term()?;
    if !p.at_end() {
        return p.err("trailing input after term");
    }
    resolve(&raw, sig, vars)
}

/// Parses `lhs -> rhs` against a known signature.
pub fn parse_rule(text: &str, sig: &Signature, vars: &[String]) -> Result<Rule> {
    let mut p = Parser::new(text);
    let l = p.term()?;
    p.expect(Tok::Arrow, "`->`")?;
    let r = p.term()?;
    if !p.at_end() {
        return p.err("trailing input after rule");
    }
    Rule::new(resolve(&l, sig, vars)?, resolve(&r, sig, vars)?)
}

/// A parsed system file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrsFile {
    pub var_names: Vec<String>,
    pub trs: Trs,
    pub source_path: Option<PathBuf>,
}

impl TrsFile {
    pub fn term(&self, text: &str) -> Result<Term> {
        parse_term(text, self.trs.signature(), &self.var_names)
    }

    pub fn rule(&self, text: &str) -> Result<Rule> {
        parse_rule(text, self.trs.signature(), &self.var_names)
    }
}

pub fn parse_trs_file(path: &Path) -> Result<TrsFile> {
    let text = std::fs::read_to_string(path)?;
    let mut f = parse_trs_str(&text)?;
    f.source_path = Some(path.to_path_buf());
    Ok(f)
}

/// Parses the `(VAR ...) (SIG ...) (RULES ...)` format. `SIG` is optional
/// and lists `(name arity)` pairs; without it the signature is inferred in
/// order of first occurrence. Other sections such as `COMMENT` are skipped.
pub fn parse_trs_str(text: &str) -> Result<TrsFile> {
    let mut p = Parser::new(text);
    let mut var_names: Vec<String> = Vec::new();
    let mut declared: Option<Vec<(String, usize, Location)>> = None;
    let mut raw_rules: Vec<(RawTerm, RawTerm)> = Vec::new();

    while !p.at_end() {
        p.expect(Tok::Open, "`(` opening a section")?;
        let (section, _) = p.ident()?;
        match section.as_str() {
            "VAR" => {
                while let Some(Tok::Ident(_)) = p.peek() {
                    let (v, loc) = p.ident()?;
                    if var_names.contains(&v) {
                        return Err(Error::Syntax {
                            loc,
                            msg: format!("variable `{v}` declared twice"),
                        });
                    }
                    var_names.push(v);
                }
                p.expect(Tok::Close, "`)` closing VAR")?;
            }
            "SIG" => {
                let mut syms = Vec::new();
                while p.peek() == Some(&Tok::Open) {
                    p.pos += 1;
                    let (name, loc) = p.ident()?;
                    let (n, nloc) = p.ident()?;
                    let arity = n.parse::<usize>().map_err(|_| Error::Syntax {
                        loc: nloc,
                        msg: format!("arity `{n}` is not a natural number"),
                    })?;
                    p.expect(Tok::Close, "`)`")?;
                    syms.push((name, arity, loc));
                }
                p.expect(Tok::Close, "`)` closing SIG")?;
                declared = Some(syms);
            }
            "RULES" => {
                while p.peek() != Some(&Tok::Close) {
                    if p.at_end() {
                        return p.err("unterminated RULES section");
                    }
                    let l = p.term()?;
                    p.expect(Tok::Arrow, "`->`")?;
                    let r = p.term()?;
                    raw_rules.push((l, r));
                }
                p.pos += 1;
            }
            _ => p.skip_group()?,
        }
    }

    let mut sig = Signature::new();
    if let Some(syms) = declared {
        for (name, arity, loc) in syms {
            if var_names.contains(&name) {
                return Err(Error::AmbiguousIdentifier { loc, name });
            }
            sig.push(Symbol::new(&name, arity)).map_err(|_| Error::Syntax {
                loc,
                msg: format!("symbol `{name}` declared twice"),
            })?;
        }
        for (l, r) in &raw_rules {
            check_declared(l, &sig, &var_names)?;
            check_declared(r, &sig, &var_names)?;
        }
    } else {
        for (l, r) in &raw_rules {
            infer(l, &mut sig, &var_names)?;
            infer(r, &mut sig, &var_names)?;
        }
    }

    let mut rules = Vec::with_capacity(raw_rules.len());
    for (l, r) in &raw_rules {
        let lhs = resolve(l, &sig, &var_names)?;
        let rhs = resolve(r, &sig, &var_names)?;
        let rule = Rule::new(lhs, rhs).map_err(|e| match e {
            Error::InvalidRule { reason, .. } => Error::InvalidRule {
                rule: format!("at {}", l.loc),
                reason,
            },
            e => e,
        })?;
        rules.push(rule);
    }
    Ok(TrsFile {
        var_names,
        trs: Trs::new(sig, rules)?,
        source_path: None,
    })
}

fn infer(raw: &RawTerm, sig: &mut Signature, vars: &[String]) -> Result<()> {
    if vars.contains(&raw.name) {
        if raw.args.is_some() {
            return Err(Error::AmbiguousIdentifier {
                loc: raw.loc,
                name: raw.name.clone(),
            });
        }
        return Ok(());
    }
    let args = raw.args.as_deref().unwrap_or(&[]);
    match sig.get(&raw.name) {
        Some(s) if s.arity() != args.len() => {
            return Err(Error::InconsistentArity {
                loc: raw.loc,
                name: raw.name.clone(),
                expected: s.arity(),
                found: args.len(),
            })
        }
        Some(_) => {}
        None => sig.push(Symbol::new(&raw.name, args.len()))?,
    }
    args.iter().try_for_each(|a| infer(a, sig, vars))
}

fn check_declared(raw: &RawTerm, sig: &Signature, vars: &[String]) -> Result<()> {
    if vars.contains(&raw.name) {
        return Ok(());
    }
    if sig.get(&raw.name).is_none() {
        return Err(Error::UnknownIdentifier {
            loc: raw.loc,
            name: raw.name.clone(),
        });
    }
    raw.args
        .as_deref()
        .unwrap_or(&[])
        .iter()
        .try_for_each(|a| check_declared(a, sig, vars))
}

/// Renders a system in the file format accepted by [`parse_trs_str`].
/// A `SIG` section is written only when the signature cannot be recovered
/// from the rules alone.
pub fn render_trs(trs: &Trs, var_names: &[String]) -> String {
    let mut names: Vec<String> = var_names.to_vec();
    let max_var = trs
        .rules()
        .iter()
        .map(|r| r.lhs.max_var())
        .max()
        .unwrap_or(0) as usize;
    for i in names.len()..max_var {
        let mut cand = format!("x{}", i + 1);
        while names.contains(&cand) || trs.signature().get(&cand).is_some() {
            cand.push('\'');
        }
        names.push(cand);
    }

    let mut out = String::new();
    if !names.is_empty() {
        writeln!(out, "(VAR {})", names.join(" ")).unwrap();
    }
    let mut inferred = Signature::new();
    for r in trs.rules() {
        collect_symbols(&r.lhs, &mut inferred);
        collect_symbols(&r.rhs, &mut inferred);
    }
    if &inferred != trs.signature() {
        out.push_str("(SIG");
        for s in trs.signature().iter() {
            write!(out, " ({} {})", s.name(), s.arity()).unwrap();
        }
        out.push_str(")\n");
    }
    out.push_str("(RULES\n");
    for r in trs.rules() {
        writeln!(out, "  {} -> {}", r.lhs.display_with(&names), r.rhs.display_with(&names)).unwrap();
    }
    out.push_str(")\n");
    out
}

fn collect_symbols(t: &Term, sig: &mut Signature) {
    if let Term::App(f, args) = t {
        if sig.get(f.name()).is_none() {
            sig.push(f.clone()).unwrap();
        }
        args.iter().for_each(|a| collect_symbols(a, sig));
    }
}

/// Parses one matrix row per line, integers separated by whitespace. Blank
/// lines and lines starting with `#` are ignored. A `/` may also separate
/// rows, so a small matrix fits on one line.
pub fn parse_matrix(text: &str) -> Result<IntMatrix> {
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        for chunk in line.split('/') {
            let row = chunk
                .split_whitespace()
                .map(|w| {
                    w.parse::<BigInt>().map_err(|_| {
                        Error::MalformedMatrix(format!("line {}: `{w}` is not an integer", ln + 1))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            if row.is_empty() {
                return Err(Error::MalformedMatrix(format!("line {}: empty row", ln + 1)));
            }
            if let Some(first) = rows.first() {
                if first.len() != row.len() {
                    return Err(Error::MalformedMatrix(format!(
                        "line {}: row has {} entries, expected {}",
                        ln + 1,
                        row.len(),
                        first.len()
                    )));
                }
            }
            rows.push(row);
        }
    }
    let cols = rows.first().map_or(0, Vec::len);
    Ok(IntMatrix::from_rows(rows.len(), cols, rows.into_iter().flatten().collect()))
}

pub fn render_matrix(m: &IntMatrix) -> String {
    let mut out = String::new();
    for r in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|c| m.get(r, c).to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}
