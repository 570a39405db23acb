//! Lambda terms: syntax, substitution, normalization and alpha-equivalence.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum SemTerm {
    Var(String),
    Const(String),
    App(Box<SemTerm>, Box<SemTerm>),
    Lam(String, Box<SemTerm>),
    Pair(Box<SemTerm>, Box<SemTerm>),
    Proj1(Box<SemTerm>),
    Proj2(Box<SemTerm>),
    /// The inhabitant of the unit type, written `d`.
    Unit,
}

use SemTerm::*;

impl SemTerm {
    pub fn var(name: impl Into<String>) -> SemTerm {
        Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> SemTerm {
        Const(name.into())
    }

    pub fn app(f: SemTerm, a: SemTerm) -> SemTerm {
        App(Box::new(f), Box::new(a))
    }

    /// Left-nested application `f a1 a2 ...`.
    pub fn apps(f: SemTerm, args: impl IntoIterator<Item = SemTerm>) -> SemTerm {
        args.into_iter().fold(f, SemTerm::app)
    }

    pub fn lam(x: impl Into<String>, body: SemTerm) -> SemTerm {
        Lam(x.into(), Box::new(body))
    }

    pub fn pair(a: SemTerm, b: SemTerm) -> SemTerm {
        Pair(Box::new(a), Box::new(b))
    }

    pub fn proj1(t: SemTerm) -> SemTerm {
        Proj1(Box::new(t))
    }

    pub fn proj2(t: SemTerm) -> SemTerm {
        Proj2(Box::new(t))
    }

    /// Positional variable standing for the `i`-th antecedent occurrence.
    pub fn slot(i: usize) -> SemTerm {
        Var(format!("${i}"))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        free_rec(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn size(&self) -> usize {
        match self {
            Var(_) | Const(_) | Unit => 1,
            App(a, b) | Pair(a, b) => 1 + a.size() + b.size(),
            Lam(_, b) | Proj1(b) | Proj2(b) => 1 + b.size(),
        }
    }

    /// Every name used anywhere, bound or free.
    fn names(&self, out: &mut BTreeSet<String>) {
        match self {
            Var(x) => {
                out.insert(x.clone());
            }
            Const(_) | Unit => {}
            App(a, b) | Pair(a, b) => {
                a.names(out);
                b.names(out);
            }
            Lam(x, b) => {
                out.insert(x.clone());
                b.names(out);
            }
            Proj1(b) | Proj2(b) => b.names(out),
        }
    }
}

fn free_rec(t: &SemTerm, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
    match t {
        Var(x) => {
            if !bound.contains(x) {
                out.insert(x.clone());
            }
        }
        Const(_) | Unit => {}
        App(a, b) | Pair(a, b) => {
            free_rec(a, bound, out);
            free_rec(b, bound, out);
        }
        Lam(x, b) => {
            bound.push(x.clone());
            free_rec(b, bound, out);
            bound.pop();
        }
        Proj1(b) | Proj2(b) => free_rec(b, bound, out),
    }
}

fn fresh(base: &str, avoid: &BTreeSet<String>) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit() || c == '\'');
    let stem = if stem.is_empty() || stem.starts_with('$') {
        "x"
    } else {
        stem
    };
    (1..)
        .map(|i| format!("{stem}{i}"))
        .find(|n| !avoid.contains(n))
        .unwrap()
}

/// Simultaneous capture-avoiding substitution of free variables.
pub fn subst(t: &SemTerm, map: &BTreeMap<String, SemTerm>) -> SemTerm {
    if map.is_empty() {
        return t.clone();
    }
    let mut range_fv = BTreeSet::new();
    for s in map.values() {
        range_fv.extend(s.free_vars());
    }
    subst_rec(t, map, &range_fv)
}

/// Substitutes `s` for the free variable `x`.
pub fn subst1(t: &SemTerm, x: &str, s: &SemTerm) -> SemTerm {
    let mut m = BTreeMap::new();
    m.insert(x.to_string(), s.clone());
    subst(t, &m)
}

fn subst_rec(t: &SemTerm, map: &BTreeMap<String, SemTerm>, range_fv: &BTreeSet<String>) -> SemTerm {
    match t {
        Var(x) => map.get(x).cloned().unwrap_or_else(|| t.clone()),
        Const(_) | Unit => t.clone(),
        App(a, b) => SemTerm::app(subst_rec(a, map, range_fv), subst_rec(b, map, range_fv)),
        Pair(a, b) => SemTerm::pair(subst_rec(a, map, range_fv), subst_rec(b, map, range_fv)),
        Proj1(b) => SemTerm::proj1(subst_rec(b, map, range_fv)),
        Proj2(b) => SemTerm::proj2(subst_rec(b, map, range_fv)),
        Lam(x, body) => {
            let mut inner = map.clone();
            inner.remove(x);
            if inner.is_empty() {
                return t.clone();
            }
            let body_fv = body.free_vars();
            let live = inner.keys().any(|k| body_fv.contains(k));
            if !live {
                return t.clone();
            }
            if range_fv.contains(x) {
                let mut avoid = range_fv.clone();
                body.names(&mut avoid);
                avoid.extend(inner.keys().cloned());
                let y = fresh(x, &avoid);
                inner.insert(x.clone(), Var(y.clone()));
                let mut rfv = range_fv.clone();
                rfv.insert(y.clone());
                SemTerm::lam(y, subst_rec(body, &inner, &rfv))
            } else {
                SemTerm::lam(x.clone(), subst_rec(body, &inner, range_fv))
            }
        }
    }
}

/// Beta and projection normal form.
pub fn normalize(t: &SemTerm) -> SemTerm {
    match t {
        Var(_) | Const(_) | Unit => t.clone(),
        Lam(x, b) => SemTerm::lam(x.clone(), normalize(b)),
        Pair(a, b) => SemTerm::pair(normalize(a), normalize(b)),
        Proj1(b) => match normalize(b) {
            Pair(a, _) => *a,
            n => SemTerm::proj1(n),
        },
        Proj2(b) => match normalize(b) {
            Pair(_, c) => *c,
            n => SemTerm::proj2(n),
        },
        App(f, a) => {
            let a = normalize(a);
            match normalize(f) {
                Lam(x, body) => normalize(&subst1(&body, &x, &a)),
                g => SemTerm::app(g, a),
            }
        }
    }
}

/// Eta contraction for functions and pairs, applied bottom-up. On a beta
/// normal term the result is again beta normal.
pub fn eta_reduce(t: &SemTerm) -> SemTerm {
    match t {
        Var(_) | Const(_) | Unit => t.clone(),
        App(f, a) => SemTerm::app(eta_reduce(f), eta_reduce(a)),
        Proj1(b) => SemTerm::proj1(eta_reduce(b)),
        Proj2(b) => SemTerm::proj2(eta_reduce(b)),
        Lam(x, b) => {
            let b = eta_reduce(b);
            if let App(f, a) = &b {
                if matches!(&**a, Var(y) if y == x) && !f.free_vars().contains(x) {
                    return (**f).clone();
                }
            }
            SemTerm::lam(x.clone(), b)
        }
        Pair(a, b) => {
            let (a, b) = (eta_reduce(a), eta_reduce(b));
            if let (Proj1(p), Proj2(q)) = (&a, &b) {
                if p == q {
                    return (**p).clone();
                }
            }
            SemTerm::pair(a, b)
        }
    }
}

/// Beta, projection and eta normal form.
pub fn normalize_eta(t: &SemTerm) -> SemTerm {
    eta_reduce(&normalize(t))
}

/// Renames bound variables to `A`, `B`, ... in order of appearance, avoiding
/// the free variables of `t`. Alpha-equivalent terms have identical
/// canonical forms.
pub fn canonical(t: &SemTerm) -> SemTerm {
    let avoid = t.free_vars();
    let mut next = 0usize;
    canon_rec(t, &mut BTreeMap::new(), &avoid, &mut next)
}

fn binder_name(i: usize) -> String {
    let letter = (b'A' + (i % 26) as u8) as char;
    if i < 26 {
        letter.to_string()
    } else {
        format!("{letter}{}", i / 26)
    }
}

fn canon_rec(
    t: &SemTerm,
    env: &mut BTreeMap<String, String>,
    avoid: &BTreeSet<String>,
    next: &mut usize,
) -> SemTerm {
    match t {
        Var(x) => Var(env.get(x).cloned().unwrap_or_else(|| x.clone())),
        Const(_) | Unit => t.clone(),
        App(a, b) => SemTerm::app(canon_rec(a, env, avoid, next), canon_rec(b, env, avoid, next)),
        Pair(a, b) => SemTerm::pair(canon_rec(a, env, avoid, next), canon_rec(b, env, avoid, next)),
        Proj1(b) => SemTerm::proj1(canon_rec(b, env, avoid, next)),
        Proj2(b) => SemTerm::proj2(canon_rec(b, env, avoid, next)),
        Lam(x, b) => {
            let name = loop {
                let n = binder_name(*next);
                *next += 1;
                if !avoid.contains(&n) {
                    break n;
                }
            };
            let saved = env.insert(x.clone(), name.clone());
            let body = canon_rec(b, env, avoid, next);
            match saved {
                Some(s) => env.insert(x.clone(), s),
                None => env.remove(x),
            };
            SemTerm::lam(name, body)
        }
    }
}

/// Equality up to renaming of bound variables.
pub fn alpha_eq(t: &SemTerm, u: &SemTerm) -> bool {
    fn go(t: &SemTerm, u: &SemTerm, bt: &mut Vec<String>, bu: &mut Vec<String>) -> bool {
        match (t, u) {
            (Var(x), Var(y)) => {
                let ix = bt.iter().rposition(|b| b == x);
                let iy = bu.iter().rposition(|b| b == y);
                match (ix, iy) {
                    (Some(i), Some(j)) => i == j,
                    (None, None) => x == y,
                    _ => false,
                }
            }
            (Const(a), Const(b)) => a == b,
            (Unit, Unit) => true,
            (App(a, b), App(c, e)) | (Pair(a, b), Pair(c, e)) => {
                go(a, c, bt, bu) && go(b, e, bt, bu)
            }
            (Proj1(a), Proj1(b)) | (Proj2(a), Proj2(b)) => go(a, b, bt, bu),
            (Lam(x, a), Lam(y, b)) => {
                bt.push(x.clone());
                bu.push(y.clone());
                let r = go(a, b, bt, bu);
                bt.pop();
                bu.pop();
                r
            }
            _ => false,
        }
    }
    go(t, u, &mut Vec::new(), &mut Vec::new())
}

// ---------------------------------------------------------------- parsing

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("term syntax error at byte {pos}: {msg}")]
pub struct TermParseError {
    pub pos: usize,
    pub msg: String,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Lt,
    Gt,
    Comma,
    Dot,
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>, TermParseError> {
    let mut out = Vec::new();
    let bytes: Vec<(usize, char)> = s.char_indices().collect();
    let mut i = 0;
    while i < bytes.len() {
        let (pos, c) = bytes[i];
        let single = match c {
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            '<' => Some(Tok::Lt),
            '>' => Some(Tok::Gt),
            ',' => Some(Tok::Comma),
            '.' => Some(Tok::Dot),
            _ => None,
        };
        if let Some(t) = single {
            out.push((pos, t));
            i += 1;
        } else if c.is_whitespace() {
            i += 1;
        } else if c.is_alphanumeric() || c == '_' || c == '$' || c == '\'' {
            let mut name = String::new();
            while i < bytes.len() {
                let c = bytes[i].1;
                if c.is_alphanumeric() || c == '_' || c == '$' || c == '\'' {
                    name.push(c);
                    i += 1;
                } else {
                    break;
                }
            }
            out.push((pos, Tok::Ident(name)));
        } else {
            return Err(TermParseError {
                pos,
                msg: format!("unexpected character {c:?}"),
            });
        }
    }
    Ok(out)
}

const KEYWORDS: [&str; 6] = ["lam", "forall", "exists", "p1", "p2", "d"];

struct TermParser {
    toks: Vec<(usize, Tok)>,
    i: usize,
    end: usize,
    scope: Vec<String>,
}

impl TermParser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, TermParseError> {
        Err(TermParseError {
            pos: self.pos(),
            msg: msg.into(),
        })
    }

    fn expect(&mut self, t: Tok) -> Result<(), TermParseError> {
        if self.peek() == Some(&t) {
            self.i += 1;
            Ok(())
        } else {
            self.err(format!("expected {t:?}"))
        }
    }

    fn term(&mut self) -> Result<SemTerm, TermParseError> {
        if let Some(Tok::Ident(k)) = self.peek() {
            let k = k.clone();
            if k == "lam" || k == "forall" || k == "exists" {
                self.i += 1;
                return self.binder(&k);
            }
        }
        self.app()
    }

    fn binder(&mut self, kind: &str) -> Result<SemTerm, TermParseError> {
        let mut vars = Vec::new();
        while let Some(Tok::Ident(x)) = self.peek() {
            if KEYWORDS.contains(&x.as_str()) {
                return self.err(format!("keyword {x} cannot be bound"));
            }
            vars.push(x.clone());
            self.i += 1;
        }
        if vars.is_empty() {
            return self.err("binder needs at least one variable");
        }
        self.expect(Tok::Dot)?;
        let n = self.scope.len();
        self.scope.extend(vars.iter().cloned());
        let body = self.term()?;
        self.scope.truncate(n);
        Ok(vars.into_iter().rev().fold(body, |b, x| {
            let l = SemTerm::lam(x, b);
            match kind {
                "lam" => l,
                q => SemTerm::app(Const(q.to_string()), l),
            }
        }))
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Some(Tok::LParen) | Some(Tok::Lt) => true,
            Some(Tok::Ident(k)) => k != "lam" && k != "forall" && k != "exists",
            _ => false,
        }
    }

    fn app(&mut self) -> Result<SemTerm, TermParseError> {
        let mut head = self.atom()?;
        loop {
            if self.starts_atom() {
                let a = self.atom()?;
                head = SemTerm::app(head, a);
            } else if let Some(Tok::Ident(k)) = self.peek() {
                // A trailing binder extends to the right as an argument.
                let k = k.clone();
                self.i += 1;
                let a = self.binder(&k)?;
                head = SemTerm::app(head, a);
            } else {
                return Ok(head);
            }
        }
    }

    fn atom(&mut self) -> Result<SemTerm, TermParseError> {
        match self.peek().cloned() {
            Some(Tok::LParen) => {
                self.i += 1;
                let t = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Some(Tok::Lt) => {
                self.i += 1;
                let a = self.term()?;
                self.expect(Tok::Comma)?;
                let b = self.term()?;
                self.expect(Tok::Gt)?;
                Ok(SemTerm::pair(a, b))
            }
            Some(Tok::Ident(x)) => {
                self.i += 1;
                match x.as_str() {
                    "p1" => Ok(SemTerm::proj1(self.atom()?)),
                    "p2" => Ok(SemTerm::proj2(self.atom()?)),
                    "d" => Ok(Unit),
                    _ if self.scope.contains(&x) || x.starts_with('$') => Ok(Var(x)),
                    _ => Ok(Const(x)),
                }
            }
            _ => self.err("expected a term"),
        }
    }
}

/// Parses the ASCII term syntax. Identifiers bound by an enclosing binder
/// and identifiers starting with `$` are variables; all others are
/// constants.
pub fn parse_term(s: &str) -> Result<SemTerm, TermParseError> {
    let mut p = TermParser {
        toks: lex(s)?,
        i: 0,
        end: s.len(),
        scope: Vec::new(),
    };
    let t = p.term()?;
    if p.i != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(t)
}

// -------------------------------------------------------------- rendering

fn quantifier(t: &SemTerm) -> Option<(&str, &str, &SemTerm)> {
    if let App(f, a) = t {
        if let (Const(q), Lam(x, b)) = (&**f, &**a) {
            if q == "forall" || q == "exists" {
                return Some((q, x, b));
            }
        }
    }
    None
}

fn is_atomic(t: &SemTerm) -> bool {
    matches!(t, Var(_) | Const(_) | Unit | Pair(..))
}

fn ascii(t: &SemTerm, out: &mut String) {
    if let Some((q, x, b)) = quantifier(t) {
        out.push_str(&format!("{q} {x}. "));
        ascii(b, out);
        return;
    }
    match t {
        Var(x) | Const(x) => out.push_str(x),
        Unit => out.push('d'),
        Pair(a, b) => {
            out.push('<');
            ascii(a, out);
            out.push_str(", ");
            ascii(b, out);
            out.push('>');
        }
        Lam(..) => {
            let mut vars = Vec::new();
            let mut body = t;
            while let Lam(x, b) = body {
                vars.push(x.as_str());
                body = b;
            }
            out.push_str(&format!("lam {}. ", vars.join(" ")));
            ascii(body, out);
        }
        Proj1(b) | Proj2(b) => {
            out.push_str(if matches!(t, Proj1(_)) { "p1 " } else { "p2 " });
            ascii_arg(b, out);
        }
        App(f, a) => {
            match &**f {
                App(..) | Proj1(_) | Proj2(_) if quantifier(f).is_none() => ascii(f, out),
                _ => ascii_arg(f, out),
            }
            out.push(' ');
            ascii_arg(a, out);
        }
    }
}

fn ascii_arg(t: &SemTerm, out: &mut String) {
    if is_atomic(t) {
        ascii(t, out);
    } else {
        out.push('(');
        ascii(t, out);
        out.push(')');
    }
}

/// Renders in the ASCII syntax accepted by [`parse_term`].
pub fn render_term(t: &SemTerm) -> String {
    let mut s = String::new();
    ascii(t, &mut s);
    s
}

impl fmt::Display for SemTerm {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str(&render_term(self))
    }
}

fn binary_op(t: &SemTerm) -> Option<(&'static str, &SemTerm, &SemTerm)> {
    if let App(f, b) = t {
        if let App(g, a) = &**f {
            if let Const(c) = &**g {
                let op = match c.as_str() {
                    "and" => "∧",
                    "or" => "∨",
                    "implies" => "→",
                    _ => return None,
                };
                return Some((op, a, b));
            }
        }
    }
    None
}

fn card(t: &SemTerm) -> Option<&SemTerm> {
    match t {
        App(f, a) if matches!(&**f, Const(c) if c == "card") => Some(a),
        _ => None,
    }
}

fn comparison(t: &SemTerm) -> Option<(&SemTerm, &SemTerm)> {
    if let App(f, b) = t {
        if let App(g, a) = &**f {
            if matches!(&**g, Const(c) if c == "gt") {
                return Some((card(a)?, card(b)?));
            }
        }
    }
    None
}

/// Brackets-free rendering of a connective, used inside `[...]`.
fn pretty_inner(t: &SemTerm) -> String {
    if let Some((op, a, b)) = binary_op(t) {
        return format!("{} {op} {}", pretty(a), pretty(b));
    }
    if let Some((a, b)) = comparison(t) {
        return format!("|{}|>|{}|", pretty(a), pretty(b));
    }
    pretty(t)
}

/// Logical notation: juxtaposed application in parentheses, `∀x[...]`,
/// `[A ∧ B]`, `λx...`, `π₁`, `ι`.
pub fn pretty(t: &SemTerm) -> String {
    if let Some((q, x, b)) = quantifier(t) {
        let sym = if q == "forall" { "∀" } else { "∃" };
        return format!("{sym}{x}[{}]", pretty_inner(b));
    }
    if binary_op(t).is_some() || comparison(t).is_some() {
        return format!("[{}]", pretty_inner(t));
    }
    match t {
        Var(x) => x.clone(),
        Const(c) if c == "iota" => "ι".into(),
        Const(c) => c.clone(),
        Unit => "d".into(),
        Pair(a, b) => format!("⟨{}, {}⟩", pretty(a), pretty(b)),
        Proj1(b) => format!("π₁{}", pretty(b)),
        Proj2(b) => format!("π₂{}", pretty(b)),
        Lam(x, b) => {
            let body = pretty(b);
            if body.starts_with(['(', '[', 'λ']) {
                format!("λ{x}{body}")
            } else {
                format!("λ{x} {body}")
            }
        }
        App(f, a) => format!("({} {})", pretty(f), pretty(a)),
    }
}
