//! Small complete systems from the literature, bundled for tests, examples
//! and the guide.

use crate::syntax::{parse_term, parse_trs_str, TrsFile};
use crate::term::Term;
use crate::trs::Trs;

pub const GROUP10: &str = include_str!("../fixtures/group10.trs");
pub const GROUP3_AXIOMS: &str = include_str!("../fixtures/group3axioms.trs");
pub const GROUP2_AXIOMS: &str = include_str!("../fixtures/group2axioms.trs");
pub const AVE: &str = include_str!("../fixtures/ave.trs");
pub const MINUS: &str = include_str!("../fixtures/minus.trs");
pub const ASSOC: &str = include_str!("../fixtures/assoc.trs");
pub const EMPTY_GROUP_SIG: &str = include_str!("../fixtures/empty.trs");
pub const PEANO: &str = include_str!("../fixtures/peano.trs");
pub const PEANO_TIETZE: &str = include_str!("../fixtures/peano.tietze");

fn load(text: &str) -> TrsFile {
    parse_trs_str(text).expect("bundled fixture parses")
}

pub fn group_file() -> TrsFile {
    load(GROUP10)
}

/// The ten-rule complete system for groups over `m/2, i/1, e/0`.
pub fn group() -> Trs {
    load(GROUP10).trs
}

/// Five rules for halving over `0/0, s/1, ave/2`.
pub fn ave() -> Trs {
    load(AVE).trs
}

/// Four rules pushing a unary minus inward over `-/1, f/1, +/2, */2`.
pub fn minus() -> Trs {
    load(MINUS).trs
}

/// The single associativity rule.
pub fn assoc() -> Trs {
    load(ASSOC).trs
}

pub fn reference_systems() -> Vec<(&'static str, Trs)> {
    vec![
        ("group", group()),
        ("ave", ave()),
        ("minus", minus()),
        ("assoc", assoc()),
    ]
}

/// Parses a term over `trs`'s signature with variables named `x, y, z, w`.
/// Unknown constants are an error; this is a test helper and panics.
pub fn term(trs: &Trs, text: &str) -> Term {
    let names: Vec<String> = ["x", "y", "z", "w"].iter().map(|s| s.to_string()).collect();
    match parse_term(text, trs.signature(), &names) {
        Ok(t) => t,
        Err(_) => {
            // allow free constants such as `a` in tests by extending the signature
            let mut sig = trs.signature().clone();
            let extended = crate::syntax::parse_trs_str(&format!("(VAR x y z w) (RULES {text} -> {text})"))
                .expect("term parses");
            for s in extended.trs.signature().iter() {
                if sig.get(s.name()).is_none() {
                    sig.push(s.clone()).unwrap();
                }
            }
            parse_term(text, &sig, &names).expect("term parses")
        }
    }
}
