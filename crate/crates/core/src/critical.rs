//! Critical pairs as structured overlap records.
//!
//! A critical peak for rules `a` (outer) and `b` (inner) at a non-variable
//! position `p` of `l_a` is
//!
//! ```text
//! t = r_a σ  <-  l_a σ = C[l_b σ]  ->  C[r_b σ] = s
//! ```
//!
//! where `σ` unifies `l_a|p` with a renamed copy of `l_b`. The trivial
//! overlap of a rule with itself at the root is never emitted. A root
//! overlap of two distinct rules is one peak, recorded with the
//! lower-index rule as the outer one.

use crate::term::{unify, Position, Substitution, Term};
use crate::trs::Trs;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalPeak {
    /// 1-based index of the rule applied at the root (`a`).
    pub outer: usize,
    /// 1-based index of the rule applied at `pos` (`b`).
    pub inner: usize,
    pub pos: Position,
    pub mgu: Substitution,
    pub peak: Term,
    /// Outer reduct `r_a σ`.
    pub t: Term,
    /// Inner reduct `C[r_b σ]`.
    pub s: Term,
    pub prime: bool,
}

impl CriticalPeak {
    /// The inner redex `l_b σ`, i.e. the subterm of the peak at `pos`.
    pub fn inner_redex(&self) -> &Term {
        self.peak
            .subterm_at(&self.pos)
            .expect("critical peak position lies inside the peak")
    }
}

/// All critical peaks of `trs`, ordered by `(outer, inner, pos)`.
pub fn critical_pairs(trs: &Trs) -> Vec<CriticalPeak> {
    let mut out = Vec::new();
    for ra in trs.rules() {
        let offset = ra.lhs.max_var();
        for rb in trs.rules() {
            let lb = rb.lhs.rename_apart(offset);
            let rb_rhs = rb.rhs.rename_apart(offset);
            for pos in ra.lhs.function_positions() {
                if pos.is_root() && rb.index <= ra.index {
                    continue;
                }
                let sub = ra.lhs.subterm_at(&pos).expect("position from function_positions");
                let Some(sigma) = unify(sub, &lb) else {
                    continue;
                };
                let peak = sigma.apply(&ra.lhs);
                let t = sigma.apply(&ra.rhs);
                let s = peak
                    .replace_at(&pos, sigma.apply(&rb_rhs))
                    .expect("position valid in instance");

                let renaming = Term::canonical_renaming(&[&peak]);
                let rn = |u: &Term| u.map_vars(&|i| renaming[&i]);
                let canon = Substitution::from_pairs(renaming.iter().map(|(&i, &j)| (i, Term::Var(j))));
                let mut cp = CriticalPeak {
                    outer: ra.index,
                    inner: rb.index,
                    pos,
                    mgu: sigma.then(&canon),
                    peak: rn(&peak),
                    t: rn(&t),
                    s: rn(&s),
                    prime: false,
                };
                cp.prime = is_prime(trs, &cp);
                out.push(cp);
            }
        }
    }
    out
}

/// A critical peak is prime when every proper subterm of its inner redex is
/// in normal form.
pub fn is_prime(trs: &Trs, cp: &CriticalPeak) -> bool {
    cp.inner_redex().args().iter().all(|a| trs.is_normal_form(a))
}

/// Keeps the prime peaks, in order.
pub fn cp_filter_prime(cps: Vec<CriticalPeak>) -> Vec<CriticalPeak> {
    cps.into_iter().filter(|c| c.prime).collect()
}
