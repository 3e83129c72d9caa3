//! Symbolic Boolean expressions over automaton variables.
//!
//! An expression is a tree of constants, variables and `Not`/`And`/`Or`/`Xor`
//! nodes. `Xor` is a first-class connector rather than sugar. Variables are
//! 1-based automaton ids; display names are optional and live in [`VarNames`].
//!
//! Semantic questions (equality, essential variables, influence signs,
//! canonical simplification) are answered by exhaustive truth tables, bounded
//! by a configurable support limit ([`DEFAULT_MAX_SUPPORT`]).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{BitAnd, BitOr, BitXor, Not};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::state::State;
use crate::table::{self, Table};

/// 1-based automaton id.
pub type VarId = u32;

/// Default cap on the number of variables a truth-table computation may
/// enumerate. `2^16` rows evaluate instantly; anything past that deserves an
/// explicit opt-in.
pub const DEFAULT_MAX_SUPPORT: usize = 16;

/// A Boolean expression tree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BoolExpr {
    Const(bool),
    Var(VarId),
    Not(Box<BoolExpr>),
    And(Vec<BoolExpr>),
    Or(Vec<BoolExpr>),
    Xor(Vec<BoolExpr>),
}

/// How one variable acts on a Boolean function.
///
/// `Positive`/`Negative` hold when every 0-to-1 flip of the variable moves the
/// function in that one direction; `NonMonotone` when both directions occur;
/// `None` when the variable is not essential.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InfluenceSign {
    Positive,
    Negative,
    NonMonotone,
    None,
}

impl InfluenceSign {
    /// Short form used by graph exports: `+`, `-`, `±`.
    pub fn symbol(&self) -> &'static str {
        match self {
            InfluenceSign::Positive => "+",
            InfluenceSign::Negative => "-",
            InfluenceSign::NonMonotone => "±",
            InfluenceSign::None => "0",
        }
    }
}

impl fmt::Display for InfluenceSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let word = match self {
            InfluenceSign::Positive => "positive",
            InfluenceSign::Negative => "negative",
            InfluenceSign::NonMonotone => "non-monotone",
            InfluenceSign::None => "none",
        };
        f.write_str(word)
    }
}

impl BoolExpr {
    pub fn var(id: VarId) -> BoolExpr {
        BoolExpr::Var(id)
    }

    /// n-ary conjunction; empty input collapses to `1`, a single child to
    /// itself, so the `And` node always has at least two children.
    pub fn and(mut children: Vec<BoolExpr>) -> BoolExpr {
        match children.len() {
            0 => BoolExpr::Const(true),
            1 => children.pop().unwrap(),
            _ => BoolExpr::And(children),
        }
    }

    /// n-ary disjunction; empty input collapses to `0`.
    pub fn or(mut children: Vec<BoolExpr>) -> BoolExpr {
        match children.len() {
            0 => BoolExpr::Const(false),
            1 => children.pop().unwrap(),
            _ => BoolExpr::Or(children),
        }
    }

    /// n-ary parity; empty input collapses to `0`.
    pub fn xor(mut children: Vec<BoolExpr>) -> BoolExpr {
        match children.len() {
            0 => BoolExpr::Const(false),
            1 => children.pop().unwrap(),
            _ => BoolExpr::Xor(children),
        }
    }

    pub fn negated(self) -> BoolExpr {
        BoolExpr::Not(Box::new(self))
    }

    /// Syntactic variables, sorted.
    pub fn vars(&self) -> BTreeSet<VarId> {
        let mut acc = BTreeSet::new();
        self.collect_vars(&mut acc);
        acc
    }

    fn collect_vars(&self, acc: &mut BTreeSet<VarId>) {
        match self {
            BoolExpr::Const(_) => {}
            BoolExpr::Var(v) => {
                acc.insert(*v);
            }
            BoolExpr::Not(e) => e.collect_vars(acc),
            BoolExpr::And(cs) | BoolExpr::Or(cs) | BoolExpr::Xor(cs) => {
                for c in cs {
                    c.collect_vars(acc);
                }
            }
        }
    }

    /// Evaluate under a total assignment. Every child is visited (no
    /// short-circuiting), so an unbound variable is reported wherever it
    /// hides in the tree.
    pub fn eval(&self, state: &State) -> Result<bool> {
        match self {
            BoolExpr::Const(b) => Ok(*b),
            BoolExpr::Var(v) => state.get(*v).ok_or(Error::UnboundVariable(*v)),
            BoolExpr::Not(e) => Ok(!e.eval(state)?),
            BoolExpr::And(cs) => {
                let mut acc = true;
                for c in cs {
                    acc &= c.eval(state)?;
                }
                Ok(acc)
            }
            BoolExpr::Or(cs) => {
                let mut acc = false;
                for c in cs {
                    acc |= c.eval(state)?;
                }
                Ok(acc)
            }
            BoolExpr::Xor(cs) => {
                let mut acc = false;
                for c in cs {
                    acc ^= c.eval(state)?;
                }
                Ok(acc)
            }
        }
    }

    /// Simultaneous substitution: every `Var(i)` with a binding is replaced by
    /// its bound expression; unbound variables pass through unchanged.
    pub fn substitute(&self, bindings: &BTreeMap<VarId, BoolExpr>) -> BoolExpr {
        match self {
            BoolExpr::Const(b) => BoolExpr::Const(*b),
            BoolExpr::Var(v) => bindings.get(v).cloned().unwrap_or(BoolExpr::Var(*v)),
            BoolExpr::Not(e) => BoolExpr::Not(Box::new(e.substitute(bindings))),
            BoolExpr::And(cs) => BoolExpr::And(cs.iter().map(|c| c.substitute(bindings)).collect()),
            BoolExpr::Or(cs) => BoolExpr::Or(cs.iter().map(|c| c.substitute(bindings)).collect()),
            BoolExpr::Xor(cs) => BoolExpr::Xor(cs.iter().map(|c| c.substitute(bindings)).collect()),
        }
    }

    /// Canonical semantically-equal form; see [`simplify_with_limit`](Self::simplify_with_limit).
    pub fn simplify(&self) -> Result<BoolExpr> {
        self.simplify_with_limit(DEFAULT_MAX_SUPPORT)
    }

    /// Canonicalization through the truth table over the essential variables:
    /// constants and lone literals come back as `Const`/`Var`/`!Var`, the
    /// two-variable parity patterns as `Xor`/`!Xor`, and everything else as a
    /// minimal sum of products. The output depends on the truth table only.
    pub fn simplify_with_limit(&self, max_support: usize) -> Result<BoolExpr> {
        let full = Table::from_expr(self, max_support)?;
        let table = full.project(&full.essential_positions());
        Ok(canonical_from_table(&table))
    }

    /// Variables the expression semantically depends on.
    pub fn essential_vars(&self) -> Result<BTreeSet<VarId>> {
        self.essential_vars_with_limit(DEFAULT_MAX_SUPPORT)
    }

    pub fn essential_vars_with_limit(&self, max_support: usize) -> Result<BTreeSet<VarId>> {
        Ok(Table::from_expr(self, max_support)?
            .essential_vars()
            .into_iter()
            .collect())
    }

    /// Sign of `var`'s influence, decided by exhaustive check.
    pub fn influence_sign(&self, var: VarId) -> Result<InfluenceSign> {
        self.influence_sign_with_limit(var, DEFAULT_MAX_SUPPORT)
    }

    pub fn influence_sign_with_limit(
        &self,
        var: VarId,
        max_support: usize,
    ) -> Result<InfluenceSign> {
        let table = Table::from_expr(self, max_support)?;
        let j = match table.vars().binary_search(&var) {
            Ok(j) => j,
            Err(_) => return Ok(InfluenceSign::None),
        };
        Ok(match table.influence(j) {
            (false, false) => InfluenceSign::None,
            (true, false) => InfluenceSign::Positive,
            (false, true) => InfluenceSign::Negative,
            (true, true) => InfluenceSign::NonMonotone,
        })
    }

    /// Semantic equality: identical truth tables over the union of the two
    /// supports.
    pub fn semantically_equals(&self, other: &BoolExpr) -> Result<bool> {
        self.semantically_equals_with_limit(other, DEFAULT_MAX_SUPPORT)
    }

    pub fn semantically_equals_with_limit(
        &self,
        other: &BoolExpr,
        max_support: usize,
    ) -> Result<bool> {
        let vars: Vec<VarId> = self.vars().union(&other.vars()).copied().collect();
        if vars.len() > max_support {
            return Err(Error::SupportTooLarge {
                support: vars.len(),
                limit: max_support,
            });
        }
        Ok(Table::over(self, vars.clone()) == Table::over(other, vars))
    }

    /// Which connectors (and constants) the expression uses.
    pub fn connectors(&self) -> ConnectorUsage {
        let mut usage = ConnectorUsage::default();
        self.collect_connectors(&mut usage);
        usage
    }

    fn collect_connectors(&self, usage: &mut ConnectorUsage) {
        match self {
            BoolExpr::Const(_) => usage.constants = true,
            BoolExpr::Var(_) => {}
            BoolExpr::Not(e) => {
                usage.not = true;
                e.collect_connectors(usage);
            }
            BoolExpr::And(cs) => {
                usage.and = true;
                cs.iter().for_each(|c| c.collect_connectors(usage));
            }
            BoolExpr::Or(cs) => {
                usage.or = true;
                cs.iter().for_each(|c| c.collect_connectors(usage));
            }
            BoolExpr::Xor(cs) => {
                usage.xor = true;
                cs.iter().for_each(|c| c.collect_connectors(usage));
            }
        }
    }

    /// Render with display names where available.
    pub fn to_named_string(&self, names: &VarNames) -> String {
        let mut out = String::new();
        self.fmt_prec(&mut out, 0, Some(names));
        out
    }

    fn precedence(&self) -> u8 {
        match self {
            BoolExpr::Or(_) => 0,
            BoolExpr::Xor(_) => 1,
            BoolExpr::And(_) => 2,
            BoolExpr::Not(_) => 3,
            BoolExpr::Const(_) | BoolExpr::Var(_) => 4,
        }
    }

    fn fmt_prec(&self, out: &mut String, min_prec: u8, names: Option<&VarNames>) {
        let prec = self.precedence();
        let parens = prec < min_prec;
        if parens {
            out.push('(');
        }
        match self {
            BoolExpr::Const(b) => out.push(if *b { '1' } else { '0' }),
            BoolExpr::Var(v) => match names.and_then(|n| n.name_of(*v)) {
                Some(name) => out.push_str(name),
                None => {
                    out.push('x');
                    out.push_str(&v.to_string());
                }
            },
            BoolExpr::Not(e) => {
                out.push('!');
                e.fmt_prec(out, 3, names);
            }
            BoolExpr::And(cs) => join(out, cs, " & ", 2, names),
            BoolExpr::Xor(cs) => join(out, cs, " ^ ", 1, names),
            BoolExpr::Or(cs) => join(out, cs, " | ", 0, names),
        }
        if parens {
            out.push(')');
        }
    }
}

fn join(out: &mut String, children: &[BoolExpr], sep: &str, prec: u8, names: Option<&VarNames>) {
    for (k, child) in children.iter().enumerate() {
        if k > 0 {
            out.push_str(sep);
        }
        // Same-precedence children print unparenthesized; the connectors are
        // associative, so the reparse is semantically identical.
        child.fmt_prec(out, prec, names);
    }
}

fn canonical_from_table(table: &Table) -> BoolExpr {
    let vars = table.vars();
    match table.arity() {
        0 => BoolExpr::Const(table.bit(0)),
        1 => {
            if table.bit(1) {
                BoolExpr::Var(vars[0])
            } else {
                BoolExpr::Var(vars[0]).negated()
            }
        }
        2 => {
            let profile = (0u64..4).fold(0u8, |acc, r| acc | (table.bit(r) as u8) << r);
            let xor = BoolExpr::Xor(vec![BoolExpr::Var(vars[0]), BoolExpr::Var(vars[1])]);
            match profile {
                0b0110 => xor,
                0b1001 => xor.negated(),
                _ => sum_of_products(table),
            }
        }
        _ => sum_of_products(table),
    }
}

fn sum_of_products(table: &Table) -> BoolExpr {
    let vars = table.vars();
    let mut terms: Vec<Vec<(usize, bool)>> = table::minimal_cover(table)
        .into_iter()
        .map(|imp| imp.literals(table.arity()))
        .collect();
    terms.sort();
    let products = terms
        .into_iter()
        .map(|lits| {
            BoolExpr::and(
                lits.into_iter()
                    .map(|(j, value)| {
                        let v = BoolExpr::Var(vars[j]);
                        if value {
                            v
                        } else {
                            v.negated()
                        }
                    })
                    .collect(),
            )
        })
        .collect();
    BoolExpr::or(products)
}

impl fmt::Display for BoolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        self.fmt_prec(&mut out, 0, None);
        f.write_str(&out)
    }
}

impl FromStr for BoolExpr {
    type Err = Error;

    fn from_str(s: &str) -> Result<BoolExpr> {
        crate::parse::parse_expr(s, None)
    }
}

impl Not for BoolExpr {
    type Output = BoolExpr;
    fn not(self) -> BoolExpr {
        self.negated()
    }
}

impl BitAnd for BoolExpr {
    type Output = BoolExpr;
    fn bitand(self, rhs: BoolExpr) -> BoolExpr {
        BoolExpr::And(vec![self, rhs])
    }
}

impl BitOr for BoolExpr {
    type Output = BoolExpr;
    fn bitor(self, rhs: BoolExpr) -> BoolExpr {
        BoolExpr::Or(vec![self, rhs])
    }
}

impl BitXor for BoolExpr {
    type Output = BoolExpr;
    fn bitxor(self, rhs: BoolExpr) -> BoolExpr {
        BoolExpr::Xor(vec![self, rhs])
    }
}

/// Connectors appearing in an expression or network.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ConnectorUsage {
    pub not: bool,
    pub and: bool,
    pub or: bool,
    pub xor: bool,
    pub constants: bool,
}

impl ConnectorUsage {
    pub fn merge(&mut self, other: ConnectorUsage) {
        self.not |= other.not;
        self.and |= other.and;
        self.or |= other.or;
        self.xor |= other.xor;
        self.constants |= other.constants;
    }

    /// Connector symbols in grammar order, e.g. `["!", "&", "^"]`.
    pub fn symbols(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.not {
            out.push("!");
        }
        if self.and {
            out.push("&");
        }
        if self.xor {
            out.push("^");
        }
        if self.or {
            out.push("|");
        }
        out
    }

    pub fn is_empty(&self) -> bool {
        !(self.not || self.and || self.or || self.xor)
    }
}

/// Optional display names for automaton ids (both directions unique).
///
/// Names are ordinary identifiers; the reserved `x<digits>` shape is
/// rejected so a name can never shadow the numeric syntax.
#[derive(Clone, Debug, Default)]
pub struct VarNames {
    by_id: BTreeMap<VarId, String>,
    by_name: BTreeMap<String, VarId>,
}

impl VarNames {
    pub fn new() -> VarNames {
        VarNames::default()
    }

    pub fn insert(&mut self, id: VarId, name: impl Into<String>) -> Result<()> {
        let name = name.into();
        if !is_valid_name(&name) {
            return Err(Error::InvalidName(name));
        }
        if self.by_id.contains_key(&id) || self.by_name.contains_key(&name) {
            return Err(Error::InvalidName(name));
        }
        self.by_id.insert(id, name.clone());
        self.by_name.insert(name, id);
        Ok(())
    }

    pub fn id_of(&self, name: &str) -> Option<VarId> {
        self.by_name.get(name).copied()
    }

    pub fn name_of(&self, id: VarId) -> Option<&str> {
        self.by_id.get(&id).map(String::as_str)
    }
}

fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    let head_ok = chars
        .next()
        .map(|c| c.is_ascii_alphabetic() || c == '_')
        .unwrap_or(false);
    let tail_ok = chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
    let reserved =
        name.len() > 1 && name.starts_with('x') && name[1..].chars().all(|c| c.is_ascii_digit());
    head_ok && tail_ok && !reserved
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::State;
    use std::sync::Arc;

    fn state(ids: &[VarId], bits: &[u8]) -> State {
        let ids: Arc<[VarId]> = ids.to_vec().into();
        State::new(ids, bits.iter().map(|&b| b == 1).collect()).unwrap()
    }

    fn base6_f1() -> BoolExpr {
        // x4 & (!x2 | !x3)
        BoolExpr::Var(4) & (!BoolExpr::Var(2) | !BoolExpr::Var(3))
    }

    #[test]
    fn eval_first_example_function() {
        let x = state(&[1, 2, 3, 4, 5, 6], &[1, 1, 1, 0, 0, 1]);
        assert!(!base6_f1().eval(&x).unwrap());
        let f4 = BoolExpr::Var(2) | BoolExpr::Var(3);
        assert!(f4.eval(&x).unwrap());
        assert!(!BoolExpr::Const(false).eval(&x).unwrap());
    }

    #[test]
    fn eval_reports_unbound_variable() {
        let x = state(&[1, 2], &[0, 1]);
        let err = base6_f1().eval(&x).unwrap_err();
        assert_eq!(err, Error::UnboundVariable(4));
    }

    #[test]
    fn eval_does_not_short_circuit_past_unbound_vars() {
        let x = state(&[1], &[0]);
        // The And is already decided by x1 = 0, but x9 must still be flagged.
        let e = BoolExpr::Var(1) & BoolExpr::Var(9);
        assert_eq!(e.eval(&x).unwrap_err(), Error::UnboundVariable(9));
    }

    #[test]
    fn substitution_composes_like_evaluation() {
        // x4 <- (x2 | x3) inside f1, then simplify: the parity form.
        let mut bindings = BTreeMap::new();
        bindings.insert(4, BoolExpr::Var(2) | BoolExpr::Var(3));
        let composed = base6_f1().substitute(&bindings).simplify().unwrap();
        assert_eq!(
            composed,
            BoolExpr::Xor(vec![BoolExpr::Var(2), BoolExpr::Var(3)])
        );
    }

    #[test]
    fn substitution_with_empty_bindings_is_identity() {
        let e = base6_f1();
        assert!(e
            .substitute(&BTreeMap::new())
            .semantically_equals(&e)
            .unwrap());
    }

    #[test]
    fn substitute_negation_into_literal() {
        let mut bindings = BTreeMap::new();
        bindings.insert(3, !BoolExpr::Var(3));
        assert_eq!(BoolExpr::Var(3).substitute(&bindings), !BoolExpr::Var(3));
    }

    #[test]
    fn simplify_contradiction_to_constant() {
        // (f3 | f3) & (!f3 | !f3) with f3 = !x3 collapses to 0.
        let f3 = || !BoolExpr::Var(3);
        let e = (f3() | f3()) & (!f3() | !f3());
        assert_eq!(e.simplify().unwrap(), BoolExpr::Const(false));
    }

    #[test]
    fn simplify_idempotence() {
        let e = BoolExpr::Var(1) | BoolExpr::Var(1);
        assert_eq!(e.simplify().unwrap(), BoolExpr::Var(1));
    }

    #[test]
    fn simplify_recovers_xor() {
        let e = (!BoolExpr::Var(2) | !BoolExpr::Var(3)) & (BoolExpr::Var(2) | BoolExpr::Var(3));
        assert_eq!(
            e.simplify().unwrap(),
            BoolExpr::Xor(vec![BoolExpr::Var(2), BoolExpr::Var(3)])
        );
    }

    #[test]
    fn essential_vars_of_base6_f1() {
        let ess: Vec<VarId> = base6_f1().essential_vars().unwrap().into_iter().collect();
        assert_eq!(ess, vec![2, 3, 4]);
        assert!(BoolExpr::Const(true).essential_vars().unwrap().is_empty());
        let xor = BoolExpr::Var(2) ^ BoolExpr::Var(3);
        let ess: Vec<VarId> = xor.essential_vars().unwrap().into_iter().collect();
        assert_eq!(ess, vec![2, 3]);
    }

    #[test]
    fn influence_signs() {
        assert_eq!(
            (!BoolExpr::Var(3)).influence_sign(3).unwrap(),
            InfluenceSign::Negative
        );
        assert_eq!(
            (BoolExpr::Var(2) ^ BoolExpr::Var(3))
                .influence_sign(2)
                .unwrap(),
            InfluenceSign::NonMonotone
        );
        assert_eq!(
            (BoolExpr::Var(2) | BoolExpr::Var(3))
                .influence_sign(2)
                .unwrap(),
            InfluenceSign::Positive
        );
        // Inessential syntactic occurrence.
        let padded = BoolExpr::Var(2) | (BoolExpr::Var(5) & !BoolExpr::Var(5));
        assert_eq!(padded.influence_sign(5).unwrap(), InfluenceSign::None);
    }

    #[test]
    fn support_limit_is_enforced() {
        let wide = BoolExpr::Or((1..=5).map(BoolExpr::Var).collect());
        let err = wide.simplify_with_limit(4).unwrap_err();
        assert_eq!(
            err,
            Error::SupportTooLarge {
                support: 5,
                limit: 4
            }
        );
    }

    #[test]
    fn display_uses_grammar_precedence() {
        let e = (BoolExpr::Var(1) | BoolExpr::Var(2)) & !BoolExpr::Var(3);
        assert_eq!(e.to_string(), "(x1 | x2) & !x3");
        let e = BoolExpr::Var(1) | (BoolExpr::Var(2) & BoolExpr::Var(3));
        assert_eq!(e.to_string(), "x1 | x2 & x3");
        let e = (BoolExpr::Var(1) ^ BoolExpr::Var(2)) | BoolExpr::Var(3);
        assert_eq!(e.to_string(), "x1 ^ x2 | x3");
        let e = !(BoolExpr::Var(1) ^ BoolExpr::Var(2));
        assert_eq!(e.to_string(), "!(x1 ^ x2)");
    }

    #[test]
    fn named_display_and_reserved_names() {
        let mut names = VarNames::new();
        names.insert(1, "lac").unwrap();
        assert!(names.insert(2, "x12").is_err());
        assert!(names.insert(2, "lac").is_err());
        names.insert(2, "gal").unwrap();
        let e = BoolExpr::Var(1) & !BoolExpr::Var(2) & BoolExpr::Var(3);
        assert_eq!(e.to_named_string(&names), "lac & !gal & x3");
    }
}
