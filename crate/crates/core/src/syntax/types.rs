use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// A sorted type of the displacement calculus.
///
/// Binary constructors keep their operands in reading order: `Under(a, c)` is
/// `a\c`, `Over(c, b)` is `c/b`, `Infix(k, a, c)` is `a!k c` (infixation) and
/// `Extract(k, c, b)` is `c^k b` (extraction).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Type {
    Atom(Arc<str>),
    Under(Arc<Type>, Arc<Type>),
    Over(Arc<Type>, Arc<Type>),
    Prod(Arc<Type>, Arc<Type>),
    I,
    Infix(usize, Arc<Type>, Arc<Type>),
    Extract(usize, Arc<Type>, Arc<Type>),
    DiscProd(usize, Arc<Type>, Arc<Type>),
    J,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("ill-sorted subformula {subformula}: {reason}")]
pub struct SortError {
    pub subformula: String,
    pub reason: String,
}

impl Type {
    pub fn atom(name: &str) -> Type {
        Type::Atom(Arc::from(name))
    }

    pub fn under(a: Type, c: Type) -> Type {
        Type::Under(Arc::new(a), Arc::new(c))
    }

    pub fn over(c: Type, b: Type) -> Type {
        Type::Over(Arc::new(c), Arc::new(b))
    }

    pub fn prod(a: Type, b: Type) -> Type {
        Type::Prod(Arc::new(a), Arc::new(b))
    }

    pub fn infix(k: usize, a: Type, c: Type) -> Type {
        Type::Infix(k, Arc::new(a), Arc::new(c))
    }

    pub fn extract(k: usize, c: Type, b: Type) -> Type {
        Type::Extract(k, Arc::new(c), Arc::new(b))
    }

    pub fn disc_prod(k: usize, a: Type, b: Type) -> Type {
        Type::DiscProd(k, Arc::new(a), Arc::new(b))
    }

    /// Sort by the derived-sort equations. Saturates at zero on ill-sorted
    /// input, so call [`Type::validate`] first when the input is untrusted.
    pub fn sort(&self) -> usize {
        match self {
            Type::Atom(_) | Type::I => 0,
            Type::J => 1,
            Type::Under(a, c) => c.sort().saturating_sub(a.sort()),
            Type::Over(c, b) => c.sort().saturating_sub(b.sort()),
            Type::Prod(a, b) => a.sort() + b.sort(),
            Type::Infix(_, a, c) => (c.sort() + 1).saturating_sub(a.sort()),
            Type::Extract(_, c, b) => (c.sort() + 1).saturating_sub(b.sort()),
            Type::DiscProd(_, a, b) => (a.sort() + b.sort()).saturating_sub(1),
        }
    }

    /// Number of connective and unit occurrences.
    pub fn weight(&self) -> usize {
        match self {
            Type::Atom(_) => 0,
            Type::I | Type::J => 1,
            Type::Under(x, y)
            | Type::Over(x, y)
            | Type::Prod(x, y)
            | Type::Infix(_, x, y)
            | Type::Extract(_, x, y)
            | Type::DiscProd(_, x, y) => 1 + x.weight() + y.weight(),
        }
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Type::Atom(_))
    }

    /// Checks every subformula against the sort grammar, innermost first.
    pub fn validate(&self) -> Result<(), SortError> {
        let fail = |reason: String| {
            Err(SortError {
                subformula: self.to_string(),
                reason,
            })
        };
        match self {
            Type::Atom(_) | Type::I | Type::J => Ok(()),
            Type::Under(a, c) => {
                a.validate()?;
                c.validate()?;
                if c.sort() < a.sort() {
                    return fail(format!(
                        "under needs sort(C) >= sort(A), got {} < {}",
                        c.sort(),
                        a.sort()
                    ));
                }
                Ok(())
            }
            Type::Over(c, b) => {
                c.validate()?;
                b.validate()?;
                if c.sort() < b.sort() {
                    return fail(format!(
                        "over needs sort(C) >= sort(B), got {} < {}",
                        c.sort(),
                        b.sort()
                    ));
                }
                Ok(())
            }
            Type::Prod(a, b) => {
                a.validate()?;
                b.validate()
            }
            Type::Infix(k, a, c) => {
                a.validate()?;
                c.validate()?;
                let (sa, sc) = (a.sort(), c.sort());
                if sa < 1 {
                    return fail(format!("infix needs sort(A) >= 1, got {sa}"));
                }
                if sc + 1 < sa {
                    return fail(format!(
                        "infix needs sort(C) >= sort(A) - 1, got {sc} < {}",
                        sa - 1
                    ));
                }
                if *k < 1 || *k > sa {
                    return fail(format!("infix index {k} outside 1..={sa}"));
                }
                Ok(())
            }
            Type::Extract(k, c, b) => {
                c.validate()?;
                b.validate()?;
                let (sc, sb) = (c.sort(), b.sort());
                if sc < sb {
                    return fail(format!(
                        "extract needs sort(C) >= sort(B), got {sc} < {sb}"
                    ));
                }
                let max = sc - sb + 1;
                if *k < 1 || *k > max {
                    return fail(format!("extract index {k} outside 1..={max}"));
                }
                Ok(())
            }
            Type::DiscProd(k, a, b) => {
                a.validate()?;
                b.validate()?;
                let sa = a.sort();
                if sa < 1 {
                    return fail(format!("discontinuous product needs sort(A) >= 1, got {sa}"));
                }
                if *k < 1 || *k > sa {
                    return fail(format!("discontinuous product index {k} outside 1..={sa}"));
                }
                Ok(())
            }
        }
    }

    pub fn children(&self) -> Vec<&Type> {
        match self {
            Type::Atom(_) | Type::I | Type::J => vec![],
            Type::Under(x, y)
            | Type::Over(x, y)
            | Type::Prod(x, y)
            | Type::Infix(_, x, y)
            | Type::Extract(_, x, y)
            | Type::DiscProd(_, x, y) => vec![x, y],
        }
    }

    /// All subformulas including `self`, preorder.
    pub fn subformulas(&self) -> Vec<&Type> {
        let mut out = vec![self];
        for c in self.children() {
            out.extend(c.subformulas());
        }
        out
    }

    pub fn is_binary(&self) -> bool {
        !matches!(self, Type::Atom(_) | Type::I | Type::J)
    }

    /// LaTeX math-mode rendering; index 1 is left implicit.
    pub fn to_latex(&self) -> String {
        fn operand(t: &Type) -> String {
            if t.is_binary() {
                format!("({})", t.to_latex())
            } else {
                t.to_latex()
            }
        }
        fn idx(k: usize) -> String {
            if k == 1 {
                String::new()
            } else {
                format!("_{{{k}}}")
            }
        }
        match self {
            Type::Atom(a) => {
                if a.chars().count() > 1 {
                    format!("\\mathit{{{a}}}")
                } else {
                    a.to_string()
                }
            }
            Type::I => "I".into(),
            Type::J => "J".into(),
            Type::Under(a, c) => format!("{}\\backslash {}", operand(a), operand(c)),
            Type::Over(c, b) => format!("{}/{}", operand(c), operand(b)),
            Type::Prod(a, b) => format!("{}\\bullet {}", operand(a), operand(b)),
            Type::Infix(k, a, c) => format!("{}{{\\downarrow}}{} {}", operand(a), idx(*k), operand(c)),
            Type::Extract(k, c, b) => format!("{}{{\\uparrow}}{} {}", operand(c), idx(*k), operand(b)),
            Type::DiscProd(k, a, b) => format!("{}{{\\odot}}{} {}", operand(a), idx(*k), operand(b)),
        }
    }
}

fn fmt_operand(t: &Type, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if t.is_binary() {
        write!(f, "({t})")
    } else {
        write!(f, "{t}")
    }
}

fn fmt_index(k: usize, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if k == 1 {
        Ok(())
    } else {
        write!(f, "{k}")
    }
}

/// ASCII syntax. Top-level binary formulas are printed without parentheses,
/// nested ones always with.
impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (op, k, x, y): (&str, Option<usize>, &Type, &Type) = match self {
            Type::Atom(a) => return write!(f, "{a}"),
            Type::I => return write!(f, "I"),
            Type::J => return write!(f, "J"),
            Type::Under(a, c) => ("\\", None, a, c),
            Type::Over(c, b) => ("/", None, c, b),
            Type::Prod(a, b) => ("*", None, a, b),
            Type::Infix(k, a, c) => ("!", Some(*k), a, c),
            Type::Extract(k, c, b) => ("^", Some(*k), c, b),
            Type::DiscProd(k, a, b) => ("(o)", Some(*k), a, b),
        };
        fmt_operand(x, f)?;
        f.write_str(op)?;
        if let Some(k) = k {
            fmt_index(k, f)?;
        }
        fmt_operand(y, f)
    }
}
