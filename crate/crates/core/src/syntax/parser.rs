//! Recursive-descent reader for the ASCII type, configuration and sequent
//! syntax.

use thiserror::Error;

use super::config::{Config, Item};
use super::sequent::Sequent;
use super::types::Type;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("{0}")]
    Sort(String),
}

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(s: &'a str) -> Self {
        Cursor {
            src: s.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn starts_with(&mut self, s: &str) -> bool {
        self.skip_ws();
        self.src[self.pos..].starts_with(s.as_bytes())
    }

    fn eat(&mut self, s: &str) -> bool {
        if self.starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, s: &str) -> Result<(), ParseError> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{s}`")))
        }
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    /// Optional decimal index directly after an operator symbol.
    fn index(&mut self) -> Result<usize, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Ok(1);
        }
        let k: usize = std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("index too large"))?;
        if k == 0 {
            return Err(ParseError::Syntax {
                pos: start,
                msg: "indices start at 1".into(),
            });
        }
        Ok(k)
    }

    fn ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let start = self.pos;
        let s = self.src;
        if self.pos < s.len() && s[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
            while self.pos < s.len() && (s[self.pos].is_ascii_alphanumeric() || s[self.pos] == b'_')
            {
                self.pos += 1;
            }
            Some(std::str::from_utf8(&s[start..self.pos]).unwrap())
        } else {
            None
        }
    }
}

fn operand(c: &mut Cursor) -> Result<Type, ParseError> {
    if c.peek() == Some(b'(') && !c.starts_with("(o)") {
        c.pos += 1;
        let t = type_expr(c)?;
        c.expect(")")?;
        return Ok(t);
    }
    match c.ident() {
        Some("I") => Ok(Type::I),
        Some("J") => Ok(Type::J),
        Some(name) => Ok(Type::atom(name)),
        None => Err(c.err("expected a type")),
    }
}

fn type_expr(c: &mut Cursor) -> Result<Type, ParseError> {
    let left = operand(c)?;
    let ctor: fn(usize, Type, Type) -> Type = if c.eat("\\") {
        |_, a, b| Type::under(a, b)
    } else if c.eat("/") {
        |_, a, b| Type::over(a, b)
    } else if c.eat("*") {
        |_, a, b| Type::prod(a, b)
    } else if c.eat("^") {
        Type::extract
    } else if c.eat("!") {
        Type::infix
    } else if c.eat("(o)") {
        Type::disc_prod
    } else {
        return Ok(left);
    };
    let k = c.index()?;
    let right = operand(c)?;
    if matches!(c.peek(), Some(b'\\' | b'/' | b'*' | b'^' | b'!')) || c.starts_with("(o)") {
        return Err(c.err("nested binary subformulas must be parenthesized"));
    }
    Ok(ctor(k, left, right))
}

fn config_expr(c: &mut Cursor, closers: &[u8]) -> Result<Config, ParseError> {
    let mut items = Vec::new();
    match c.peek() {
        None => return Ok(Config::empty()),
        Some(b) if closers.contains(&b) => return Ok(Config::empty()),
        Some(b'0') => {
            c.pos += 1;
            return Ok(Config::empty());
        }
        _ => {}
    }
    loop {
        items.push(item_expr(c)?);
        if !c.eat(",") {
            break;
        }
    }
    Ok(Config(items))
}

fn item_expr(c: &mut Cursor) -> Result<Item, ParseError> {
    if c.eat("[") {
        c.expect("]")?;
        return Ok(Item::Sep);
    }
    let ty = type_expr(c)?;
    if c.eat("{") {
        let mut fillers = vec![config_expr(c, b":}")?];
        while c.eat(":") {
            fillers.push(config_expr(c, b":}")?);
        }
        c.expect("}")?;
        Ok(Item::Hyper {
            ty,
            fillers,
            label: None,
        })
    } else {
        Ok(Item::Leaf { ty, label: None })
    }
}

/// Parses a type; the result is not sort-checked.
pub fn parse_type(s: &str) -> Result<Type, ParseError> {
    let mut c = Cursor::new(s);
    let t = type_expr(&mut c)?;
    if !c.at_end() {
        return Err(c.err("trailing input after type"));
    }
    Ok(t)
}

/// Parses and validates a type.
pub fn parse_valid_type(s: &str) -> Result<Type, ParseError> {
    let t = parse_type(s)?;
    t.validate().map_err(|e| ParseError::Sort(e.to_string()))?;
    Ok(t)
}

/// Parses a configuration; `0` or the empty string denote the empty one.
pub fn parse_config(s: &str) -> Result<Config, ParseError> {
    let mut c = Cursor::new(s);
    let cfg = config_expr(&mut c, b"")?;
    if !c.at_end() {
        return Err(c.err("trailing input after configuration"));
    }
    Ok(cfg)
}

/// Parses `antecedent => succedent` and checks sorts and arities.
pub fn parse_sequent(s: &str) -> Result<Sequent, ParseError> {
    let mut c = Cursor::new(s);
    let ante = config_expr(&mut c, b"=")?;
    c.expect("=>")?;
    let succ = type_expr(&mut c)?;
    if !c.at_end() {
        return Err(c.err("trailing input after sequent"));
    }
    let seq = Sequent::new(ante, succ);
    seq.validate().map_err(ParseError::Sort)?;
    Ok(seq)
}
