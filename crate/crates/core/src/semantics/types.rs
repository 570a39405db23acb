//! Semantic types, the type map from syntactic types, and type inference
//! for terms.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use thiserror::Error;

use super::term::SemTerm;
use crate::syntax::Type;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum SemType {
    E,
    T,
    Arrow(Box<SemType>, Box<SemType>),
    Pair(Box<SemType>, Box<SemType>),
    Unit,
    /// Type variable; only appears in inferred types of terms that do not
    /// determine their own type.
    Var(u32),
}

impl SemType {
    pub fn arrow(a: SemType, b: SemType) -> SemType {
        SemType::Arrow(Box::new(a), Box::new(b))
    }

    pub fn pair(a: SemType, b: SemType) -> SemType {
        SemType::Pair(Box::new(a), Box::new(b))
    }

    pub fn is_ground(&self) -> bool {
        match self {
            SemType::Var(_) => false,
            SemType::Arrow(a, b) | SemType::Pair(a, b) => a.is_ground() && b.is_ground(),
            _ => true,
        }
    }
}

impl fmt::Display for SemType {
    fn fmt(&self, f: &mut fmt::Formatter) -> fmt::Result {
        fn go(t: &SemType, f: &mut fmt::Formatter, arg: bool) -> fmt::Result {
            match t {
                SemType::E => f.write_str("e"),
                SemType::T => f.write_str("t"),
                SemType::Unit => f.write_str("unit"),
                SemType::Var(v) => write!(f, "'{v}"),
                SemType::Pair(a, b) => {
                    f.write_str("(")?;
                    go(a, f, true)?;
                    f.write_str(" * ")?;
                    go(b, f, true)?;
                    f.write_str(")")
                }
                SemType::Arrow(a, b) => {
                    if arg {
                        f.write_str("(")?;
                    }
                    go(a, f, true)?;
                    f.write_str("->")?;
                    go(b, f, false)?;
                    if arg {
                        f.write_str(")")?;
                    }
                    Ok(())
                }
            }
        }
        go(self, f, false)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemTypeError {
    #[error("no semantic type for atom {0}")]
    UnknownAtom(String),
    #[error("unbound variable {0}")]
    Unbound(String),
    #[error("cannot unify {0} with {1}")]
    Mismatch(String, String),
    #[error("semantic type syntax: {0}")]
    Syntax(String),
}

/// Semantic types of atomic syntactic types.
pub type AtomTable = BTreeMap<String, SemType>;

/// The homomorphic image of a syntactic type.
pub fn sem_type(ty: &Type, atoms: &AtomTable) -> Result<SemType, SemTypeError> {
    Ok(match ty {
        Type::Atom(a) => atoms
            .get(&**a)
            .cloned()
            .ok_or_else(|| SemTypeError::UnknownAtom(a.to_string()))?,
        Type::Under(a, c) | Type::Infix(_, a, c) => {
            SemType::arrow(sem_type(a, atoms)?, sem_type(c, atoms)?)
        }
        Type::Over(c, b) | Type::Extract(_, c, b) => {
            SemType::arrow(sem_type(b, atoms)?, sem_type(c, atoms)?)
        }
        Type::Prod(a, b) | Type::DiscProd(_, a, b) => {
            SemType::pair(sem_type(a, atoms)?, sem_type(b, atoms)?)
        }
        Type::I | Type::J => SemType::Unit,
    })
}

/// Parses `e`, `t`, `unit`, `A->B` (right associative), `A*B` and
/// parentheses. `*` binds tighter than `->`.
pub fn parse_sem_type(s: &str) -> Result<SemType, SemTypeError> {
    let toks: Vec<String> = {
        let mut v = Vec::new();
        let mut cur = String::new();
        let mut it = s.chars().peekable();
        while let Some(c) = it.next() {
            if c.is_alphanumeric() {
                cur.push(c);
                continue;
            }
            if !cur.is_empty() {
                v.push(std::mem::take(&mut cur));
            }
            match c {
                '-' if it.peek() == Some(&'>') => {
                    it.next();
                    v.push("->".into());
                }
                '(' | ')' | '*' => v.push(c.to_string()),
                c if c.is_whitespace() => {}
                c => return Err(SemTypeError::Syntax(format!("unexpected {c:?}"))),
            }
        }
        if !cur.is_empty() {
            v.push(cur);
        }
        v
    };
    fn arrow(t: &[String], i: &mut usize) -> Result<SemType, SemTypeError> {
        let a = prod(t, i)?;
        if t.get(*i).map(String::as_str) == Some("->") {
            *i += 1;
            Ok(SemType::arrow(a, arrow(t, i)?))
        } else {
            Ok(a)
        }
    }
    fn prod(t: &[String], i: &mut usize) -> Result<SemType, SemTypeError> {
        let mut a = atom(t, i)?;
        while t.get(*i).map(String::as_str) == Some("*") {
            *i += 1;
            a = SemType::pair(a, atom(t, i)?);
        }
        Ok(a)
    }
    fn atom(t: &[String], i: &mut usize) -> Result<SemType, SemTypeError> {
        let tok = t
            .get(*i)
            .ok_or_else(|| SemTypeError::Syntax("unexpected end".into()))?;
        *i += 1;
        match tok.as_str() {
            "e" => Ok(SemType::E),
            "t" => Ok(SemType::T),
            "unit" => Ok(SemType::Unit),
            "(" => {
                let a = arrow(t, i)?;
                if t.get(*i).map(String::as_str) != Some(")") {
                    return Err(SemTypeError::Syntax("expected )".into()));
                }
                *i += 1;
                Ok(a)
            }
            other => Err(SemTypeError::Syntax(format!("unexpected {other}"))),
        }
    }
    let mut i = 0;
    let ty = arrow(&toks, &mut i)?;
    if i != toks.len() {
        return Err(SemTypeError::Syntax("trailing input".into()));
    }
    Ok(ty)
}

/// Typing context. Constants without a declared type are uninterpreted:
/// each name receives one type variable per inference run, so all its
/// occurrences must be used at the same type.
#[derive(Clone, Debug, Default)]
pub struct TypeEnv {
    pub vars: HashMap<String, SemType>,
    pub consts: HashMap<String, SemType>,
}

impl TypeEnv {
    pub fn new() -> TypeEnv {
        TypeEnv::default()
    }

    pub fn with_var(mut self, x: impl Into<String>, t: SemType) -> TypeEnv {
        self.vars.insert(x.into(), t);
        self
    }
}

struct Unifier {
    subst: Vec<Option<SemType>>,
}

impl Unifier {
    fn fresh(&mut self) -> SemType {
        self.subst.push(None);
        SemType::Var(self.subst.len() as u32 - 1)
    }

    /// Instantiates variables of an externally supplied type so they do not
    /// clash with unifier variables.
    fn import(&mut self, t: &SemType, map: &mut HashMap<u32, SemType>) -> SemType {
        match t {
            SemType::Var(v) => {
                if let Some(x) = map.get(v) {
                    return x.clone();
                }
                let x = self.fresh();
                map.insert(*v, x.clone());
                x
            }
            SemType::Arrow(a, b) => SemType::arrow(self.import(a, map), self.import(b, map)),
            SemType::Pair(a, b) => SemType::pair(self.import(a, map), self.import(b, map)),
            _ => t.clone(),
        }
    }

    fn resolve(&self, t: &SemType) -> SemType {
        match t {
            SemType::Var(v) => match &self.subst[*v as usize] {
                Some(x) => self.resolve(x),
                None => t.clone(),
            },
            SemType::Arrow(a, b) => SemType::arrow(self.resolve(a), self.resolve(b)),
            SemType::Pair(a, b) => SemType::pair(self.resolve(a), self.resolve(b)),
            _ => t.clone(),
        }
    }

    fn occurs(&self, v: u32, t: &SemType) -> bool {
        match self.resolve(t) {
            SemType::Var(w) => v == w,
            SemType::Arrow(a, b) | SemType::Pair(a, b) => self.occurs(v, &a) || self.occurs(v, &b),
            _ => false,
        }
    }

    fn unify(&mut self, a: &SemType, b: &SemType) -> Result<(), SemTypeError> {
        let (a, b) = (self.resolve(a), self.resolve(b));
        match (&a, &b) {
            _ if a == b => Ok(()),
            (SemType::Var(v), t) | (t, SemType::Var(v)) => {
                if self.occurs(*v, t) {
                    return Err(SemTypeError::Mismatch(a.to_string(), b.to_string()));
                }
                self.subst[*v as usize] = Some(t.clone());
                Ok(())
            }
            (SemType::Arrow(a1, b1), SemType::Arrow(a2, b2))
            | (SemType::Pair(a1, b1), SemType::Pair(a2, b2)) => {
                self.unify(a1, a2)?;
                self.unify(b1, b2)
            }
            _ => Err(SemTypeError::Mismatch(a.to_string(), b.to_string())),
        }
    }
}

struct Infer<'a> {
    env: &'a TypeEnv,
    u: Unifier,
    consts: HashMap<String, SemType>,
    imported: HashMap<u32, SemType>,
}

impl Infer<'_> {
    fn infer(&mut self, t: &SemTerm, locals: &mut Vec<(String, SemType)>) -> Result<SemType, SemTypeError> {
        match t {
            SemTerm::Var(x) => {
                if let Some((_, ty)) = locals.iter().rev().find(|(y, _)| y == x) {
                    return Ok(ty.clone());
                }
                match self.env.vars.get(x) {
                    Some(ty) => Ok(self.u.import(ty, &mut self.imported)),
                    None => Err(SemTypeError::Unbound(x.clone())),
                }
            }
            SemTerm::Const(c) => {
                if let Some(ty) = self.env.consts.get(c) {
                    return Ok(self.u.import(ty, &mut self.imported));
                }
                if let Some(ty) = self.consts.get(c) {
                    return Ok(ty.clone());
                }
                let ty = self.u.fresh();
                self.consts.insert(c.clone(), ty.clone());
                Ok(ty)
            }
            SemTerm::Unit => Ok(SemType::Unit),
            SemTerm::App(f, a) => {
                let tf = self.infer(f, locals)?;
                let ta = self.infer(a, locals)?;
                let r = self.u.fresh();
                self.u.unify(&tf, &SemType::arrow(ta, r.clone()))?;
                Ok(r)
            }
            SemTerm::Lam(x, b) => {
                let tx = self.u.fresh();
                locals.push((x.clone(), tx.clone()));
                let tb = self.infer(b, locals);
                locals.pop();
                Ok(SemType::arrow(tx, tb?))
            }
            SemTerm::Pair(a, b) => {
                let ta = self.infer(a, locals)?;
                let tb = self.infer(b, locals)?;
                Ok(SemType::pair(ta, tb))
            }
            SemTerm::Proj1(p) | SemTerm::Proj2(p) => {
                let tp = self.infer(p, locals)?;
                let (l, r) = (self.u.fresh(), self.u.fresh());
                self.u.unify(&tp, &SemType::pair(l.clone(), r.clone()))?;
                Ok(if matches!(t, SemTerm::Proj1(_)) { l } else { r })
            }
        }
    }
}

/// Renumbers type variables from 0 in order of appearance.
fn tidy(t: &SemType, map: &mut HashMap<u32, u32>) -> SemType {
    match t {
        SemType::Var(v) => {
            let n = map.len() as u32;
            SemType::Var(*map.entry(*v).or_insert(n))
        }
        SemType::Arrow(a, b) => SemType::arrow(tidy(a, map), tidy(b, map)),
        SemType::Pair(a, b) => SemType::pair(tidy(a, map), tidy(b, map)),
        _ => t.clone(),
    }
}

fn run(t: &SemTerm, env: &TypeEnv, expected: Option<&SemType>) -> Result<SemType, SemTypeError> {
    let mut inf = Infer {
        env,
        u: Unifier { subst: Vec::new() },
        consts: HashMap::new(),
        imported: HashMap::new(),
    };
    let ty = inf.infer(t, &mut Vec::new())?;
    if let Some(e) = expected {
        let e = inf.u.import(e, &mut HashMap::new());
        inf.u.unify(&ty, &e)?;
    }
    Ok(tidy(&inf.u.resolve(&ty), &mut HashMap::new()))
}

/// The most general semantic type of `t`.
pub fn typecheck(t: &SemTerm, env: &TypeEnv) -> Result<SemType, SemTypeError> {
    run(t, env, None)
}

/// Checks `t` against an expected type; returns the instantiated type.
pub fn check_type(t: &SemTerm, env: &TypeEnv, expected: &SemType) -> Result<SemType, SemTypeError> {
    run(t, env, Some(expected))
}
