use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::types::Type;

/// Opaque reference attached to a type occurrence. Its meaning is up to the
/// caller: lexical insertion stores lexicon entry ids, semantic composition
/// stores occurrence numbers.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Label(pub u32);

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Item {
    Sep,
    Leaf {
        ty: Type,
        label: Option<Label>,
    },
    Hyper {
        ty: Type,
        fillers: Vec<Config>,
        label: Option<Label>,
    },
}

/// A hyperconfiguration. The empty sequence is the empty configuration.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Config(pub Vec<Item>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WrapError {
    #[error("separator index {k} out of range for configuration of sort {sort}")]
    IndexOutOfRange { k: usize, sort: usize },
    #[error("generalized wrap needs {expected} fillers, got {got}")]
    Arity { expected: usize, got: usize },
}

impl Item {
    pub fn leaf(ty: Type) -> Item {
        Item::Leaf { ty, label: None }
    }

    /// The item `ty{fillers}`, or a leaf when there are no fillers.
    pub fn occurrence(ty: Type, fillers: Vec<Config>, label: Option<Label>) -> Item {
        if fillers.is_empty() {
            Item::Leaf { ty, label }
        } else {
            Item::Hyper { ty, fillers, label }
        }
    }

    pub fn ty(&self) -> Option<&Type> {
        match self {
            Item::Sep => None,
            Item::Leaf { ty, .. } | Item::Hyper { ty, .. } => Some(ty),
        }
    }

    pub fn label(&self) -> Option<Label> {
        match self {
            Item::Sep => None,
            Item::Leaf { label, .. } | Item::Hyper { label, .. } => *label,
        }
    }

    pub fn set_label(&mut self, new: Option<Label>) {
        match self {
            Item::Sep => {}
            Item::Leaf { label, .. } | Item::Hyper { label, .. } => *label = new,
        }
    }

    pub fn fillers(&self) -> &[Config] {
        match self {
            Item::Hyper { fillers, .. } => fillers,
            _ => &[],
        }
    }

    pub fn fillers_mut(&mut self) -> &mut [Config] {
        match self {
            Item::Hyper { fillers, .. } => fillers,
            _ => &mut [],
        }
    }

    pub fn is_sep(&self) -> bool {
        matches!(self, Item::Sep)
    }

    pub fn sort(&self) -> usize {
        match self {
            Item::Sep => 1,
            Item::Leaf { .. } => 0,
            Item::Hyper { fillers, .. } => fillers.iter().map(Config::sort).sum(),
        }
    }

    pub fn weight(&self) -> usize {
        match self {
            Item::Sep => 0,
            Item::Leaf { ty, .. } => ty.weight(),
            Item::Hyper { ty, fillers, .. } => {
                ty.weight() + fillers.iter().map(Config::weight).sum::<usize>()
            }
        }
    }

    /// Number of items in this subtree, counting the item itself.
    pub fn size(&self) -> usize {
        1 + self.fillers().iter().map(Config::size).sum::<usize>()
    }

    /// True when this item is exactly `vector(ty)`: a leaf, or a hyperleaf
    /// whose fillers are all a single separator.
    pub fn is_vector(&self) -> bool {
        match self {
            Item::Sep => false,
            Item::Leaf { ty, .. } => ty.sort() == 0,
            Item::Hyper { ty, fillers, .. } => {
                fillers.len() == ty.sort() && fillers.iter().all(|f| f.0 == [Item::Sep])
            }
        }
    }

    fn strip(&mut self) {
        self.set_label(None);
        for f in self.fillers_mut() {
            f.strip_labels();
        }
    }
}

impl Config {
    pub fn empty() -> Config {
        Config(Vec::new())
    }

    pub fn sep() -> Config {
        Config(vec![Item::Sep])
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn items(&self) -> &[Item] {
        &self.0
    }

    pub fn sort(&self) -> usize {
        self.0.iter().map(Item::sort).sum()
    }

    pub fn weight(&self) -> usize {
        self.0.iter().map(Item::weight).sum()
    }

    /// Total number of items at every nesting level.
    pub fn size(&self) -> usize {
        self.0.iter().map(Item::size).sum()
    }

    /// The canonical configuration of a type.
    pub fn vector(ty: &Type) -> Config {
        Config(vec![vector_item(ty)])
    }

    pub fn concat(mut self, other: Config) -> Config {
        self.0.extend(other.0);
        self
    }

    pub fn strip_labels(&mut self) {
        for it in &mut self.0 {
            it.strip();
        }
    }

    pub fn stripped(&self) -> Config {
        let mut c = self.clone();
        c.strip_labels();
        c
    }

    /// Replaces the `k`-th separator (1-based, flattened left-to-right order)
    /// by the items of `g`.
    pub fn wrap_at(&self, k: usize, g: &Config) -> Result<Config, WrapError> {
        let sort = self.sort();
        if k == 0 || k > sort {
            return Err(WrapError::IndexOutOfRange { k, sort });
        }
        let mut seen = 0;
        Ok(wrap_one(self, k, g, &mut seen))
    }

    /// Simultaneously replaces the successive separators by `gs`.
    pub fn gen_wrap(&self, gs: &[Config]) -> Result<Config, WrapError> {
        let sort = self.sort();
        if gs.len() != sort {
            return Err(WrapError::Arity {
                expected: sort,
                got: gs.len(),
            });
        }
        let mut it = gs.iter();
        Ok(wrap_all(self, &mut it))
    }

    /// Visits every item in preorder (an item before the contents of its
    /// fillers).
    pub fn for_each_item<'a>(&'a self, f: &mut impl FnMut(&'a Item)) {
        for it in &self.0 {
            f(it);
            for fl in it.fillers() {
                fl.for_each_item(f);
            }
        }
    }

    /// Type occurrences (leaves and hyperleaves) in preorder.
    pub fn occurrences(&self) -> Vec<&Item> {
        let mut out = Vec::new();
        self.for_each_item(&mut |it| {
            if !it.is_sep() {
                out.push(it)
            }
        });
        out
    }

    /// Every type occurring at any level.
    pub fn types(&self) -> Vec<&Type> {
        self.occurrences().into_iter().filter_map(Item::ty).collect()
    }

    /// Assigns labels `start, start+1, ...` to occurrences in preorder and
    /// returns the next unused label.
    pub fn label_occurrences(&mut self, start: u32) -> u32 {
        let mut next = start;
        label_rec(self, &mut next);
        next
    }

    /// Checks that every hyperleaf has as many fillers as its type's sort,
    /// every leaf has a sort-0 type, and every type is well-sorted.
    pub fn validate(&self) -> Result<(), String> {
        for it in &self.0 {
            match it {
                Item::Sep => {}
                Item::Leaf { ty, .. } => {
                    ty.validate().map_err(|e| e.to_string())?;
                    if ty.sort() != 0 {
                        return Err(format!("leaf {ty} has sort {} but no fillers", ty.sort()));
                    }
                }
                Item::Hyper { ty, fillers, .. } => {
                    ty.validate().map_err(|e| e.to_string())?;
                    if fillers.len() != ty.sort() {
                        return Err(format!(
                            "hyperleaf {ty} of sort {} has {} fillers",
                            ty.sort(),
                            fillers.len()
                        ));
                    }
                    for f in fillers {
                        f.validate()?;
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_latex(&self) -> String {
        if self.0.is_empty() {
            return String::new();
        }
        self.0
            .iter()
            .map(|it| match it {
                Item::Sep => "[\\,]".to_string(),
                Item::Leaf { ty, .. } => ty.to_latex(),
                Item::Hyper { ty, fillers, .. } => format!(
                    "{}\\{{{}\\}}",
                    ty.to_latex(),
                    fillers
                        .iter()
                        .map(|f| if f.is_empty() { "\\Lambda".to_string() } else { f.to_latex() })
                        .collect::<Vec<_>>()
                        .join(" : ")
                ),
            })
            .collect::<Vec<_>>()
            .join(", ")
    }
}

fn label_rec(c: &mut Config, next: &mut u32) {
    for it in &mut c.0 {
        if !it.is_sep() {
            it.set_label(Some(Label(*next)));
            *next += 1;
        }
        for f in it.fillers_mut() {
            label_rec(f, next);
        }
    }
}

pub fn vector_item(ty: &Type) -> Item {
    let s = ty.sort();
    Item::occurrence(ty.clone(), vec![Config::sep(); s], None)
}

fn wrap_one(c: &Config, k: usize, g: &Config, seen: &mut usize) -> Config {
    let mut out = Vec::with_capacity(c.0.len() + g.0.len());
    for it in &c.0 {
        match it {
            Item::Sep => {
                *seen += 1;
                if *seen == k {
                    out.extend(g.0.iter().cloned());
                } else {
                    out.push(Item::Sep);
                }
            }
            Item::Leaf { .. } => out.push(it.clone()),
            Item::Hyper { ty, fillers, label } => {
                let fillers = fillers.iter().map(|f| wrap_one(f, k, g, seen)).collect();
                out.push(Item::Hyper {
                    ty: ty.clone(),
                    fillers,
                    label: *label,
                });
            }
        }
    }
    Config(out)
}

fn wrap_all<'a>(c: &Config, gs: &mut impl Iterator<Item = &'a Config>) -> Config {
    let mut out = Vec::with_capacity(c.0.len());
    for it in &c.0 {
        match it {
            Item::Sep => out.extend(gs.next().expect("arity checked").0.iter().cloned()),
            Item::Leaf { .. } => out.push(it.clone()),
            Item::Hyper { ty, fillers, label } => {
                let fillers = fillers.iter().map(|f| wrap_all(f, gs)).collect();
                out.push(Item::Hyper {
                    ty: ty.clone(),
                    fillers,
                    label: *label,
                });
            }
        }
    }
    Config(out)
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Item::Sep => write!(f, "[]"),
            Item::Leaf { ty, .. } => write!(f, "{ty}"),
            Item::Hyper { ty, fillers, .. } => {
                write!(f, "{ty}{{")?;
                for (i, fl) in fillers.iter().enumerate() {
                    if i > 0 {
                        write!(f, " : ")?;
                    }
                    write!(f, "{fl}")?;
                }
                write!(f, "}}")
            }
        }
    }
}

/// ASCII syntax; the empty configuration prints as `0`.
impl fmt::Display for Config {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        for (i, it) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{it}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_config, parse_type};

    fn c(s: &str) -> Config {
        parse_config(s).unwrap()
    }

    #[test]
    fn weights_follow_the_recursion() {
        assert_eq!(Config::empty().weight(), 0);
        assert_eq!(c("N, [], N\\S").weight(), 1);
        assert_eq!(c("(N\\S)^N{N/CN, CN}").weight(), 3);
    }

    #[test]
    fn vectors() {
        let n = parse_type("N").unwrap();
        assert_eq!(Config::vector(&n), c("N"));
        let idiom = parse_type("(N\\S)^N").unwrap();
        assert_eq!(Config::vector(&idiom), c("(N\\S)^N{[]}"));
        let t = parse_type("S^(((S^N)!S)/CN)").unwrap();
        assert_eq!(t.sort(), 1);
        assert_eq!(Config::vector(&t).0[0].fillers(), &[Config::sep()]);
    }

    #[test]
    fn wrap_examples() {
        assert_eq!(Config::sep().wrap_at(1, &c("N")).unwrap(), c("N"));
        let idiom = Config::vector(&parse_type("(N\\S)^N").unwrap());
        assert_eq!(
            idiom.wrap_at(1, &c("N/CN, CN")).unwrap(),
            c("(N\\S)^N{N/CN, CN}")
        );
        assert_eq!(c("N, [], []").wrap_at(2, &Config::sep()).unwrap(), c("N, [], []"));
        assert!(c("N").wrap_at(1, &c("N")).is_err());
    }

    #[test]
    fn gen_wrap_examples() {
        assert_eq!(c("[], []").gen_wrap(&[c("N"), c("S")]).unwrap(), c("N, S"));
        assert_eq!(
            c("A{[] : N, []}, []").gen_wrap(&[c("X"), c("Y, Z"), Config::empty()]).unwrap(),
            c("A{X : N, Y, Z}")
        );
        assert!(c("[]").gen_wrap(&[]).is_err());
    }

    #[test]
    fn display_round_trips_through_the_parser() {
        for s in ["0", "N, (N\\S)^N{N/CN, CN}", "[], A{0 : []}"] {
            assert_eq!(c(s).to_string(), s);
        }
    }
}
