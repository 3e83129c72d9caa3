//! Expression text parsing.
//!
//! Grammar (tightest first): `!` unary, `&`, `^`, `|`, all left-associative;
//! parentheses; constants `0`/`1`; variables `x<id>` or bare names resolved
//! through a [`VarNames`](crate::expr::VarNames) table.

use crate::error::{Error, Result};
use crate::expr::{BoolExpr, VarNames};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Not,
    And,
    Or,
    Xor,
    LParen,
    RParen,
    Ident(String),
    Digits(String),
}

struct Lexeme {
    tok: Tok,
    col: usize, // 1-based byte column
}

fn lex(text: &str) -> Result<Vec<Lexeme>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut k = 0;
    while k < bytes.len() {
        let col = k + 1;
        let c = bytes[k] as char;
        let tok = match c {
            ' ' | '\t' => {
                k += 1;
                continue;
            }
            '!' => Tok::Not,
            '&' => Tok::And,
            '|' => Tok::Or,
            '^' => Tok::Xor,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '0'..='9' => {
                let start = k;
                while k < bytes.len() && bytes[k].is_ascii_digit() {
                    k += 1;
                }
                out.push(Lexeme {
                    tok: Tok::Digits(text[start..k].to_string()),
                    col,
                });
                continue;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = k;
                while k < bytes.len()
                    && ((bytes[k] as char).is_ascii_alphanumeric() || bytes[k] == b'_')
                {
                    k += 1;
                }
                out.push(Lexeme {
                    tok: Tok::Ident(text[start..k].to_string()),
                    col,
                });
                continue;
            }
            other => return Err(Error::parse(col, format!("unexpected character `{other}`"))),
        };
        out.push(Lexeme { tok, col });
        k += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Lexeme>,
    pos: usize,
    end_col: usize,
    names: Option<&'a VarNames>,
}

/// Parse one expression; `names` resolves bare identifiers.
pub fn parse_expr(text: &str, names: Option<&VarNames>) -> Result<BoolExpr> {
    let toks = lex(text)?;
    let mut parser = Parser {
        toks,
        pos: 0,
        end_col: text.len() + 1,
        names,
    };
    let expr = parser.or_level()?;
    match parser.peek() {
        None => Ok(expr),
        Some(lexeme) => Err(Error::parse(lexeme.col, "unexpected trailing input")),
    }
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Lexeme> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<(Tok, usize)> {
        let lexeme = self.toks.get(self.pos)?;
        self.pos += 1;
        Some((lexeme.tok.clone(), lexeme.col))
    }

    fn or_level(&mut self) -> Result<BoolExpr> {
        let mut children = vec![self.xor_level()?];
        while matches!(self.peek().map(|l| &l.tok), Some(Tok::Or)) {
            self.pos += 1;
            children.push(self.xor_level()?);
        }
        Ok(BoolExpr::or(children))
    }

    fn xor_level(&mut self) -> Result<BoolExpr> {
        let mut children = vec![self.and_level()?];
        while matches!(self.peek().map(|l| &l.tok), Some(Tok::Xor)) {
            self.pos += 1;
            children.push(self.and_level()?);
        }
        Ok(BoolExpr::xor(children))
    }

    fn and_level(&mut self) -> Result<BoolExpr> {
        let mut children = vec![self.unary()?];
        while matches!(self.peek().map(|l| &l.tok), Some(Tok::And)) {
            self.pos += 1;
            children.push(self.unary()?);
        }
        Ok(BoolExpr::and(children))
    }

    fn unary(&mut self) -> Result<BoolExpr> {
        if matches!(self.peek().map(|l| &l.tok), Some(Tok::Not)) {
            self.pos += 1;
            return Ok(self.unary()?.negated());
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<BoolExpr> {
        let end_col = self.end_col;
        let Some((tok, col)) = self.bump() else {
            return Err(Error::parse(end_col, "unexpected end of expression"));
        };
        match tok {
            Tok::Digits(d) => match d.as_str() {
                "0" => Ok(BoolExpr::Const(false)),
                "1" => Ok(BoolExpr::Const(true)),
                other => Err(Error::parse(
                    col,
                    format!("`{other}` is not a constant; only 0 and 1 are"),
                )),
            },
            Tok::Ident(name) => self.resolve(name, col),
            Tok::LParen => {
                let inner = self.or_level()?;
                match self.bump() {
                    Some((Tok::RParen, _)) => Ok(inner),
                    Some((_, c)) => Err(Error::parse(c, "expected `)`")),
                    None => Err(Error::parse(end_col, "unclosed parenthesis")),
                }
            }
            _ => Err(Error::parse(col, "expected a variable, constant or `(`")),
        }
    }

    fn resolve(&self, name: String, col: usize) -> Result<BoolExpr> {
        if name.len() > 1 && name.starts_with('x') && name[1..].bytes().all(|b| b.is_ascii_digit())
        {
            return match name[1..].parse::<u32>() {
                Ok(0) => Err(Error::parse(col, "automaton ids start at 1")),
                Ok(id) => Ok(BoolExpr::Var(id)),
                Err(_) => Err(Error::parse(col, format!("variable id `{name}` overflows"))),
            };
        }
        match self.names.and_then(|n| n.id_of(&name)) {
            Some(id) => Ok(BoolExpr::Var(id)),
            None => Err(Error::parse(col, format!("unknown variable name `{name}`"))),
        }
    }
}
