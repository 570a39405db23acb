//! Addresses into configurations, span enumeration and extraction (the
//! inverse of generalized wrap).

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::{Config, Item, Label, Type};

/// One descent step: into filler `filler` of the hyperleaf at `item`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Step {
    pub item: usize,
    pub filler: usize,
}

pub type Path = Vec<Step>;

/// A contiguous run of sibling items `start..end` at nesting position `path`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct SpanRef {
    pub path: Path,
    pub start: usize,
    pub end: usize,
}

/// The address of a single item.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct ItemAddr {
    pub path: Path,
    pub index: usize,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Extraction {
    pub gamma: Config,
    pub thetas: Vec<Config>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid address {0}")]
pub struct AddrError(pub String);

impl SpanRef {
    pub fn new(path: Path, start: usize, end: usize) -> SpanRef {
        SpanRef { path, start, end }
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    pub fn of_item(a: &ItemAddr) -> SpanRef {
        SpanRef::new(a.path.clone(), a.index, a.index + 1)
    }
}

impl ItemAddr {
    pub fn new(path: Path, index: usize) -> ItemAddr {
        ItemAddr { path, index }
    }

    pub fn top(index: usize) -> ItemAddr {
        ItemAddr::new(Vec::new(), index)
    }

    /// Path to filler `filler` of the addressed item.
    pub fn child(&self, filler: usize) -> Path {
        let mut p = self.path.clone();
        p.push(Step {
            item: self.index,
            filler,
        });
        p
    }
}

fn fmt_path(p: &Path, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    for s in p {
        write!(f, "{}.{}/", s.item, s.filler)?;
    }
    Ok(())
}

impl fmt::Display for ItemAddr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_path(&self.path, f)?;
        write!(f, "{}", self.index)
    }
}

impl fmt::Display for SpanRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_path(&self.path, f)?;
        write!(f, "[{}..{})", self.start, self.end)
    }
}

/// The item sequence at a nesting position.
pub fn level<'a>(c: &'a Config, path: &[Step]) -> Option<&'a Config> {
    let mut cur = c;
    for s in path {
        cur = cur.0.get(s.item)?.fillers().get(s.filler)?;
    }
    Some(cur)
}

fn level_mut<'a>(c: &'a mut Config, path: &[Step]) -> Option<&'a mut Config> {
    let mut cur = c;
    for s in path {
        cur = cur.0.get_mut(s.item)?.fillers_mut().get_mut(s.filler)?;
    }
    Some(cur)
}

pub fn get<'a>(c: &'a Config, a: &ItemAddr) -> Option<&'a Item> {
    level(c, &a.path)?.0.get(a.index)
}

pub fn span_items<'a>(c: &'a Config, s: &SpanRef) -> Option<&'a [Item]> {
    let lv = level(c, &s.path)?;
    if s.start <= s.end && s.end <= lv.len() {
        Some(&lv.0[s.start..s.end])
    } else {
        None
    }
}

/// Replaces the items of span `at` by the items of `with`.
pub fn replace(c: &Config, at: &SpanRef, with: &Config) -> Result<Config, AddrError> {
    let mut out = c.clone();
    let lv = level_mut(&mut out, &at.path).ok_or_else(|| AddrError(at.to_string()))?;
    if at.start > at.end || at.end > lv.len() {
        return Err(AddrError(at.to_string()));
    }
    lv.0.splice(at.start..at.end, with.0.iter().cloned());
    Ok(out)
}

/// Replaces one item.
pub fn replace_item(c: &Config, at: &ItemAddr, with: &Config) -> Result<Config, AddrError> {
    if get(c, at).is_none() {
        return Err(AddrError(at.to_string()));
    }
    replace(c, &SpanRef::of_item(at), with)
}

/// Every nesting position in preorder: the top level first, then the fillers
/// of each hyperleaf in document order.
pub fn levels(c: &Config) -> Vec<Path> {
    fn go(c: &Config, path: &mut Path, out: &mut Vec<Path>) {
        out.push(path.clone());
        for (i, it) in c.0.iter().enumerate() {
            for (f, fl) in it.fillers().iter().enumerate() {
                path.push(Step { item: i, filler: f });
                go(fl, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(c, &mut Vec::new(), &mut out);
    out
}

/// All spans at all nesting positions, ordered by position, then start, then
/// length.
pub fn enumerate_spans(c: &Config) -> Vec<SpanRef> {
    let mut out = Vec::new();
    for p in levels(c) {
        let n = level(c, &p).map_or(0, Config::len);
        for start in 0..=n {
            for end in start..=n {
                out.push(SpanRef::new(p.clone(), start, end));
            }
        }
    }
    out
}

/// Type occurrences satisfying `pred`, with addresses, in preorder.
pub fn occurrences(c: &Config, pred: impl Fn(&Type) -> bool) -> Vec<(ItemAddr, &Item)> {
    fn go<'a>(
        c: &'a Config,
        path: &mut Path,
        pred: &dyn Fn(&Type) -> bool,
        out: &mut Vec<(ItemAddr, &'a Item)>,
    ) {
        for (i, it) in c.0.iter().enumerate() {
            if let Some(t) = it.ty() {
                if pred(t) {
                    out.push((ItemAddr::new(path.clone(), i), it));
                }
            }
            for (f, fl) in it.fillers().iter().enumerate() {
                path.push(Step { item: i, filler: f });
                go(fl, path, pred, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(c, &mut Vec::new(), &pred, &mut out);
    out
}

/// Finds the item carrying `label`.
pub fn find_label(c: &Config, label: Label) -> Option<ItemAddr> {
    occurrences(c, |_| true)
        .into_iter()
        .find(|(_, it)| it.label() == Some(label))
        .map(|(a, _)| a)
}

/// Number of separators strictly before the gap `offset` at nesting
/// position `path`, in flattened document order.
pub fn seps_before(c: &Config, path: &[Step], offset: usize) -> usize {
    let mut count = 0;
    let mut cur = c;
    let mut steps = path.iter().peekable();
    loop {
        let stop = match steps.peek() {
            Some(s) => s.item,
            None => offset,
        };
        count += cur.0[..stop].iter().map(Item::sort).sum::<usize>();
        match steps.next() {
            Some(s) => {
                let it = &cur.0[s.item];
                count += it.fillers()[..s.filler].iter().map(Config::sort).sum::<usize>();
                cur = &it.fillers()[s.filler];
            }
            None => return count,
        }
    }
}

/// Address of the `k`-th separator (1-based).
pub fn sep_address(c: &Config, k: usize) -> Option<ItemAddr> {
    fn go(c: &Config, k: &mut usize, path: &mut Path) -> Option<ItemAddr> {
        for (i, it) in c.0.iter().enumerate() {
            if it.is_sep() {
                *k -= 1;
                if *k == 0 {
                    return Some(ItemAddr::new(path.clone(), i));
                }
            }
            for (f, fl) in it.fillers().iter().enumerate() {
                path.push(Step { item: i, filler: f });
                let r = go(fl, k, path);
                path.pop();
                if r.is_some() {
                    return r;
                }
            }
        }
        None
    }
    if k == 0 {
        return None;
    }
    let mut k = k;
    go(c, &mut k, &mut Vec::new())
}

/// All ways of writing `c` as `gen_wrap(gamma, thetas)` with `n` fillers.
///
/// Chosen spans are pairwise disjoint, in document order, may sit at any
/// nesting depth, may be empty, and together cover every separator of `c`.
pub fn extract(c: &Config, n: usize) -> Vec<Extraction> {
    if n == 0 {
        return if c.sort() == 0 {
            vec![Extraction {
                gamma: c.clone(),
                thetas: Vec::new(),
            }]
        } else {
            Vec::new()
        };
    }
    ext_from(&c.0, 0, n, None)
        .into_iter()
        .map(|(g, t)| Extraction {
            gamma: Config(g),
            thetas: t,
        })
        .collect()
}

/// Extraction in which the item at `forced` must be chosen alone as piece
/// number `k` (1-based) out of `n`. The returned thetas omit that piece.
pub fn extract_forced(c: &Config, n: usize, forced: &ItemAddr, k: usize) -> Vec<Extraction> {
    const MARK: Label = Label(u32::MAX);
    let marker = Item::Leaf {
        ty: Type::atom("#"),
        label: Some(MARK),
    };
    let Ok(marked) = replace_item(c, forced, &Config(vec![marker.clone()])) else {
        return Vec::new();
    };
    let is_marker = |it: &Item| it.label() == Some(MARK);
    ext_from(&marked.0, 0, n, Some(&is_marker))
        .into_iter()
        .filter(|(_, t)| t.get(k - 1).is_some_and(|p| p.0.len() == 1 && is_marker(&p.0[0])))
        .map(|(g, mut t)| {
            t.remove(k - 1);
            Extraction {
                gamma: Config(g),
                thetas: t,
            }
        })
        .collect()
}

type Partial = (Vec<Item>, Vec<Config>);

fn contains_marker(items: &[Item], m: &dyn Fn(&Item) -> bool) -> bool {
    items
        .iter()
        .any(|it| m(it) || it.fillers().iter().any(|f| contains_marker(&f.0, m)))
}

/// Extractions of `items[idx..]` with exactly `n` pieces.
fn ext_from(
    items: &[Item],
    idx: usize,
    n: usize,
    marker: Option<&dyn Fn(&Item) -> bool>,
) -> Vec<Partial> {
    let mut out = Vec::new();
    let sort_rest: usize = items[idx..].iter().map(Item::sort).sum();
    if n == 0 {
        let blocked = marker.is_some_and(|m| contains_marker(&items[idx..], m));
        if sort_rest == 0 && !blocked {
            out.push((items[idx..].to_vec(), Vec::new()));
        }
        return out;
    }
    // Start a piece at this gap.
    for end in idx..=items.len() {
        let piece = &items[idx..end];
        if let Some(m) = marker {
            if contains_marker(piece, m) && !(piece.len() == 1 && m(&piece[0])) {
                continue;
            }
        }
        for (mut g, mut t) in ext_from(items, end, n - 1, marker) {
            g.insert(0, Item::Sep);
            t.insert(0, Config(piece.to_vec()));
            out.push((g, t));
        }
    }
    // Or keep the item at this gap in the skeleton.
    if idx < items.len() {
        let it = &items[idx];
        if it.is_sep() || marker.is_some_and(|m| m(it)) {
            return out;
        }
        match it {
            Item::Hyper { ty, fillers, label } => {
                for (new_fillers, used, thetas) in ext_fillers(fillers, n, marker) {
                    for (mut g, t) in ext_from(items, idx + 1, n - used, marker) {
                        g.insert(
                            0,
                            Item::Hyper {
                                ty: ty.clone(),
                                fillers: new_fillers.clone(),
                                label: *label,
                            },
                        );
                        let mut all = thetas.clone();
                        all.extend(t);
                        out.push((g, all));
                    }
                }
            }
            _ => {
                for (mut g, t) in ext_from(items, idx + 1, n, marker) {
                    g.insert(0, it.clone());
                    out.push((g, t));
                }
            }
        }
    }
    out
}

/// Extractions distributed over a list of fillers using at most `n` pieces.
fn ext_fillers(
    fillers: &[Config],
    n: usize,
    marker: Option<&dyn Fn(&Item) -> bool>,
) -> Vec<(Vec<Config>, usize, Vec<Config>)> {
    let Some((first, rest)) = fillers.split_first() else {
        return vec![(Vec::new(), 0, Vec::new())];
    };
    let mut out = Vec::new();
    for m in 0..=n {
        for (g, t) in ext_from(&first.0, 0, m, marker) {
            for (gs, used, ts) in ext_fillers(rest, n - m, marker) {
                let mut fs = vec![Config(g.clone())];
                fs.extend(gs);
                let mut all = t.clone();
                all.extend(ts);
                out.push((fs, m + used, all));
            }
        }
    }
    out
}
