//! Update schedules: finite block sequences, optionally periodic.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::expr::VarId;
use crate::network::Network;

/// A sequence of update sets ("blocks"), applied in order; a periodic
/// schedule repeats its sequence indefinitely.
///
/// Text form: comma-separated blocks, each a bare id or `{id,id,...}`, with a
/// trailing `*` for periodicity — `3,2,4,1*` or `{1,2},{3}*`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schedule {
    blocks: Vec<BTreeSet<VarId>>,
    periodic: bool,
}

impl Schedule {
    pub fn new(blocks: Vec<BTreeSet<VarId>>, periodic: bool) -> Result<Schedule> {
        if blocks.iter().any(BTreeSet::is_empty) {
            return Err(Error::EmptyBlock);
        }
        if blocks.iter().flatten().any(|&id| id == 0) {
            return Err(Error::ZeroId);
        }
        Ok(Schedule { blocks, periodic })
    }

    pub fn blocks(&self) -> &[BTreeSet<VarId>] {
        &self.blocks
    }

    pub fn is_periodic(&self) -> bool {
        self.periodic
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Block applied at step `k` (0-based), wrapping when periodic.
    pub fn block_at(&self, k: usize) -> Option<&BTreeSet<VarId>> {
        if self.periodic && !self.blocks.is_empty() {
            self.blocks.get(k % self.blocks.len())
        } else {
            self.blocks.get(k)
        }
    }

    /// Every automaton named by some block.
    pub fn members(&self) -> BTreeSet<VarId> {
        self.blocks.iter().flatten().copied().collect()
    }

    /// Check that every block only names automata of `net`.
    pub fn validate_for(&self, net: &Network) -> Result<()> {
        for &id in self.blocks.iter().flatten() {
            if !net.contains(id) {
                return Err(Error::UnknownAutomaton(id));
            }
        }
        Ok(())
    }
}

impl FromStr for Schedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Schedule> {
        let trimmed = s.trim();
        let (body, periodic) = match trimmed.strip_suffix('*') {
            Some(rest) => (rest.trim_end(), true),
            None => (trimmed, false),
        };
        if body.is_empty() {
            return Schedule::new(Vec::new(), periodic);
        }
        let mut blocks = Vec::new();
        let mut depth = 0usize;
        let mut start = 0usize;
        let bytes = body.as_bytes();
        for (k, &b) in bytes.iter().enumerate() {
            match b {
                b'{' => depth += 1,
                b'}' => {
                    depth = depth
                        .checked_sub(1)
                        .ok_or_else(|| Error::parse(k + 1, "unmatched `}`"))?;
                }
                b',' if depth == 0 => {
                    blocks.push(parse_block(&body[start..k], start)?);
                    start = k + 1;
                }
                _ => {}
            }
        }
        if depth != 0 {
            return Err(Error::parse(body.len(), "unclosed `{`"));
        }
        blocks.push(parse_block(&body[start..], start)?);
        Schedule::new(blocks, periodic)
    }
}

fn parse_block(text: &str, offset: usize) -> Result<BTreeSet<VarId>> {
    let t = text.trim();
    let col = offset + 1;
    if t.is_empty() {
        return Err(Error::parse(col, "empty update block"));
    }
    let inner = match t.strip_prefix('{') {
        Some(rest) => rest
            .strip_suffix('}')
            .ok_or_else(|| Error::parse(col, "unclosed `{`"))?,
        None => t,
    };
    let mut ids = BTreeSet::new();
    for part in inner.split(',') {
        let part = part.trim();
        let id: VarId = part
            .parse()
            .map_err(|_| Error::parse(col, format!("`{part}` is not an automaton id")))?;
        if id == 0 {
            return Err(Error::parse(col, "automaton ids start at 1"));
        }
        ids.insert(id);
    }
    Ok(ids)
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, block) in self.blocks.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            if block.len() == 1 {
                write!(f, "{}", block.first().unwrap())?;
            } else {
                let ids: Vec<String> = block.iter().map(VarId::to_string).collect();
                write!(f, "{{{}}}", ids.join(","))?;
            }
        }
        if self.periodic {
            f.write_str("*")?;
        }
        Ok(())
    }
}
