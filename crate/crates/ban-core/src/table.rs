//! Bit-parallel truth tables over an ordered variable list.
//!
//! Row `r` assigns variable `vars[j]` the value of bit `j` of `r`, so row
//! indices read as integers with the first variable in the least significant
//! position. Tables are the workhorse behind semantic equality, essential
//! variables, sign analysis and canonical minimization.

use crate::error::{Error, Result};
use crate::expr::{BoolExpr, VarId};

// Rows with bit j set, for j < 6 (within one 64-bit word).
const VAR_MASKS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Table {
    vars: Vec<VarId>,
    words: Vec<u64>,
}

impl Table {
    /// Table over the expression's own (sorted) syntactic variables.
    pub fn from_expr(expr: &BoolExpr, limit: usize) -> Result<Table> {
        let vars: Vec<VarId> = expr.vars().into_iter().collect();
        if vars.len() > limit {
            return Err(Error::SupportTooLarge {
                support: vars.len(),
                limit,
            });
        }
        Ok(Table::over(expr, vars))
    }

    /// Table over an explicit variable list; every variable of `expr` must
    /// appear in `vars`, and `vars` must be sorted.
    pub fn over(expr: &BoolExpr, vars: Vec<VarId>) -> Table {
        assert!(vars.len() < 64, "table limited to 63 variables");
        let words = build(expr, &vars);
        Table { vars, words }
    }

    pub fn arity(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[VarId] {
        &self.vars
    }

    pub fn rows(&self) -> u64 {
        1u64 << self.vars.len()
    }

    pub fn bit(&self, row: u64) -> bool {
        (self.words[(row >> 6) as usize] >> (row & 63)) & 1 == 1
    }

    fn valid_mask(&self) -> u64 {
        valid_mask(self.vars.len())
    }

    /// Does flipping variable position `j` ever change the value?
    pub fn depends_on(&self, j: usize) -> bool {
        if j < 6 {
            let shift = 1u64 << j;
            let keep = !VAR_MASKS[j] & self.valid_mask();
            self.words.iter().any(|&w| (w ^ (w >> shift)) & keep != 0)
        } else {
            let stride = 1usize << (j - 6);
            (0..self.words.len())
                .filter(|w| w & stride == 0)
                .any(|w| self.words[w] != self.words[w ^ stride])
        }
    }

    /// Positions of the essential variables.
    pub fn essential_positions(&self) -> Vec<usize> {
        (0..self.vars.len())
            .filter(|&j| self.depends_on(j))
            .collect()
    }

    pub fn essential_vars(&self) -> Vec<VarId> {
        self.essential_positions()
            .into_iter()
            .map(|j| self.vars[j])
            .collect()
    }

    /// Checks both monotony orders for variable position `j`.
    ///
    /// Returns `(raises, lowers)`: whether setting the variable to 1 ever
    /// raises the value (0 to 1) and whether it ever lowers it (1 to 0).
    pub fn influence(&self, j: usize) -> (bool, bool) {
        let mut raises = false;
        let mut lowers = false;
        if j < 6 {
            let shift = 1u64 << j;
            let keep = !VAR_MASKS[j] & self.valid_mask();
            for &w in &self.words {
                let low = w & keep;
                let high = (w >> shift) & keep;
                raises |= !low & high != 0;
                lowers |= low & !high != 0;
            }
        } else {
            let stride = 1usize << (j - 6);
            for w in (0..self.words.len()).filter(|w| w & stride == 0) {
                let low = self.words[w];
                let high = self.words[w ^ stride];
                raises |= !low & high != 0;
                lowers |= low & !high != 0;
            }
        }
        (raises, lowers)
    }

    /// Lowest row (by index) where flipping position `j` from 0 to 1 moves
    /// the value `from -> !from`; the returned row has bit `j` clear.
    pub fn first_flip_witness(&self, j: usize, from: bool) -> Option<u64> {
        let step = 1u64 << j;
        let mut row = 0u64;
        while row < self.rows() {
            if row & step == 0 && self.bit(row) == from && self.bit(row | step) != from {
                return Some(row);
            }
            row += 1;
        }
        None
    }

    /// Restriction of the table to the given positions; dropped variables are
    /// fixed to 0 (only meaningful when they are inessential).
    pub fn project(&self, positions: &[usize]) -> Table {
        let vars: Vec<VarId> = positions.iter().map(|&j| self.vars[j]).collect();
        let rows = 1u64 << vars.len();
        let mut words = vec![0u64; rows.div_ceil(64).max(1) as usize];
        for row in 0..rows {
            let mut full = 0u64;
            for (new_bit, &j) in positions.iter().enumerate() {
                if row >> new_bit & 1 == 1 {
                    full |= 1 << j;
                }
            }
            if self.bit(full) {
                words[(row >> 6) as usize] |= 1 << (row & 63);
            }
        }
        Table { vars, words }
    }

    pub fn minterms(&self) -> Vec<u32> {
        (0..self.rows())
            .filter(|&r| self.bit(r))
            .map(|r| r as u32)
            .collect()
    }
}

fn valid_mask(arity: usize) -> u64 {
    if arity >= 6 {
        !0
    } else {
        (1u64 << (1usize << arity)) - 1
    }
}

fn build(expr: &BoolExpr, vars: &[VarId]) -> Vec<u64> {
    let nwords = 1usize << vars.len().saturating_sub(6);
    let vmask = valid_mask(vars.len());
    match expr {
        BoolExpr::Const(b) => vec![if *b { vmask } else { 0 }; nwords],
        BoolExpr::Var(v) => {
            let j = vars
                .binary_search(v)
                .expect("expression variable missing from table domain");
            if j < 6 {
                vec![VAR_MASKS[j] & vmask; nwords]
            } else {
                let stride = 1usize << (j - 6);
                (0..nwords)
                    .map(|w| if w & stride != 0 { !0 } else { 0 })
                    .collect()
            }
        }
        BoolExpr::Not(e) => {
            let mut words = build(e, vars);
            for w in &mut words {
                *w = !*w & vmask;
            }
            words
        }
        BoolExpr::And(children) => combine(children, vars, vmask, |a, b| a & b),
        BoolExpr::Or(children) => combine(children, vars, vmask, |a, b| a | b),
        BoolExpr::Xor(children) => combine(children, vars, vmask, |a, b| a ^ b),
    }
}

fn combine(children: &[BoolExpr], vars: &[VarId], vmask: u64, op: fn(u64, u64) -> u64) -> Vec<u64> {
    let mut acc = build(&children[0], vars);
    for child in &children[1..] {
        let next = build(child, vars);
        for (a, b) in acc.iter_mut().zip(next) {
            *a = op(*a, b) & vmask;
        }
    }
    acc
}

/// A product term over table positions: `dc` marks don't-care positions,
/// `val` fixes the remaining ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct Implicant {
    pub dc: u32,
    pub val: u32,
}

impl Implicant {
    fn covers(&self, minterm: u32) -> bool {
        minterm & !self.dc == self.val
    }

    /// Literals as `(position, value)` pairs, ascending by position.
    pub fn literals(&self, arity: usize) -> Vec<(usize, bool)> {
        (0..arity)
            .filter(|&j| self.dc >> j & 1 == 0)
            .map(|j| (j, self.val >> j & 1 == 1))
            .collect()
    }
}

/// Quine-McCluskey style minimal cover of the table's on-set.
///
/// Deterministic in the table contents alone: essential primes first, then a
/// greedy cover choosing the prime with the widest uncovered reach (ties go
/// to the smallest implicant). The caller handles constant tables.
pub(crate) fn minimal_cover(table: &Table) -> Vec<Implicant> {
    use std::collections::{BTreeMap, BTreeSet};

    let arity = table.arity();
    let minterms = table.minterms();
    debug_assert!(!minterms.is_empty() && (minterms.len() as u64) < table.rows());

    // Merge pass: group by don't-care mask, pair values differing in one bit.
    let mut primes: BTreeSet<Implicant> = BTreeSet::new();
    let mut level: BTreeMap<u32, BTreeSet<u32>> = BTreeMap::new();
    level.insert(0, minterms.iter().copied().collect());
    while !level.is_empty() {
        let mut next: BTreeMap<u32, BTreeSet<u32>> = BTreeMap::new();
        for (&dc, vals) in &level {
            for &val in vals {
                let mut merged = false;
                for j in (0..arity).filter(|&j| dc >> j & 1 == 0) {
                    let bit = 1u32 << j;
                    if vals.contains(&(val ^ bit)) {
                        merged = true;
                        if val & bit == 0 {
                            next.entry(dc | bit).or_default().insert(val);
                        }
                    }
                }
                if !merged {
                    primes.insert(Implicant { dc, val });
                }
            }
        }
        level = next;
    }

    let primes: Vec<Implicant> = primes.into_iter().collect();
    let cover_sets: Vec<Vec<usize>> = minterms
        .iter()
        .map(|&m| (0..primes.len()).filter(|&p| primes[p].covers(m)).collect())
        .collect();

    let mut chosen: BTreeSet<usize> = BTreeSet::new();
    let mut uncovered: BTreeSet<usize> = (0..minterms.len()).collect();

    // Essential primes: sole cover of some minterm.
    for covers in &cover_sets {
        if covers.len() == 1 {
            chosen.insert(covers[0]);
        }
    }
    uncovered.retain(|&m| !cover_sets[m].iter().any(|p| chosen.contains(p)));

    while !uncovered.is_empty() {
        let best = (0..primes.len())
            .filter(|p| !chosen.contains(p))
            .max_by_key(|&p| {
                let gain = uncovered
                    .iter()
                    .filter(|&&m| cover_sets[m].contains(&p))
                    .count();
                (gain, std::cmp::Reverse(p))
            })
            .expect("primes cover every minterm");
        chosen.insert(best);
        uncovered.retain(|&m| !cover_sets[m].contains(&best));
    }

    chosen.into_iter().map(|p| primes[p]).collect()
}
