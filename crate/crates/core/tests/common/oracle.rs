//! Forward-chaining decision procedure for small sequents, independent of
//! backward proof search.
//!
//! Every rule raises total weight by exactly one and axioms `vect A => A`
//! weigh `2|A|`, so all sequents of weight at most `w` are derivable from
//! axioms of weight at most `w` in at most `w` steps. The closure applies
//! every rule instance forward, enumerating metadata exhaustively, and keeps
//! conclusions within the weight bound.

use std::collections::{HashMap, HashSet};

use displace_core::matcher::{self, ItemAddr};
use displace_core::proof::{infer, Meta, Rule};
use displace_core::{Config, Item, Sequent, Type};

/// Well-sorted types of weight exactly `w` over `atoms`, with wrap indices
/// up to `max_k`.
pub fn types_of_weight(w: usize, atoms: &[&str], max_k: usize) -> Vec<Type> {
    let mut by_w: Vec<Vec<Type>> = Vec::new();
    for cur in 0..=w {
        let mut out = Vec::new();
        if cur == 0 {
            out.extend(atoms.iter().map(|a| Type::atom(a)));
        } else {
            if cur == 1 {
                out.push(Type::I);
                out.push(Type::J);
            }
            for wa in 0..cur {
                let wb = cur - 1 - wa;
                for a in &by_w[wa] {
                    for b in &by_w[wb] {
                        let mut cands = vec![
                            Type::under(a.clone(), b.clone()),
                            Type::over(a.clone(), b.clone()),
                            Type::prod(a.clone(), b.clone()),
                        ];
                        for k in 1..=max_k {
                            cands.push(Type::infix(k, a.clone(), b.clone()));
                            cands.push(Type::extract(k, a.clone(), b.clone()));
                            cands.push(Type::disc_prod(k, a.clone(), b.clone()));
                        }
                        out.extend(cands.into_iter().filter(|t| t.validate().is_ok()));
                    }
                }
            }
        }
        by_w.push(out);
    }
    by_w.pop().unwrap()
}

pub fn types_up_to(w: usize, atoms: &[&str], max_k: usize) -> Vec<Type> {
    (0..=w).flat_map(|i| types_of_weight(i, atoms, max_k)).collect()
}

type Built<T> = Vec<(T, usize, usize)>;

/// Configurations with at most `items` items counted at all levels and
/// weight at most `weight`, built from `types` and separators.
pub fn configs(items: usize, weight: usize, types: &[Type]) -> Vec<Config> {
    // Results carry (items used, weight used); memoized on the budgets.
    struct Gen<'a> {
        types: &'a [Type],
        memo: HashMap<(usize, usize), Built<Config>>,
    }
    impl Gen<'_> {
        fn seqs(&mut self, items: usize, weight: usize) -> Built<Config> {
            if let Some(v) = self.memo.get(&(items, weight)) {
                return v.clone();
            }
            let mut out = vec![(Config::empty(), 0, 0)];
            for (it, n, w) in self.single_items(items, weight) {
                for (rest, n2, w2) in self.seqs(items - n, weight - w) {
                    let mut v = vec![it.clone()];
                    v.extend(rest.0);
                    out.push((Config(v), n + n2, w + w2));
                }
            }
            self.memo.insert((items, weight), out.clone());
            out
        }
        fn single_items(&mut self, items: usize, weight: usize) -> Built<Item> {
            let mut out = Vec::new();
            if items == 0 {
                return out;
            }
            out.push((Item::Sep, 1, 0));
            let types = self.types;
            for t in types.iter().filter(|t| t.weight() <= weight) {
                let (s, tw) = (t.sort(), t.weight());
                for (fills, n, w) in self.filler_lists(s, items - 1, weight - tw) {
                    out.push((Item::occurrence(t.clone(), fills, None), 1 + n, tw + w));
                }
            }
            out
        }
        fn filler_lists(&mut self, count: usize, items: usize, weight: usize) -> Built<Vec<Config>> {
            if count == 0 {
                return vec![(Vec::new(), 0, 0)];
            }
            let mut out = Vec::new();
            for (c, n, w) in self.seqs(items, weight) {
                for (mut rest, n2, w2) in self.filler_lists(count - 1, items - n, weight - w) {
                    rest.insert(0, c.clone());
                    out.push((rest, n + n2, w + w2));
                }
            }
            out
        }
    }
    let mut g = Gen {
        types,
        memo: HashMap::new(),
    };
    g.seqs(items, weight).into_iter().map(|(c, _, _)| c).collect()
}

fn all_items(c: &Config) -> Vec<ItemAddr> {
    matcher::occurrences(c, |_| true)
        .into_iter()
        .map(|(a, _)| a)
        .collect()
}

fn push_ok(out: &mut Vec<Sequent>, r: Result<Sequent, displace_core::proof::InferError>) {
    if let Ok(s) = r {
        if s.validate().is_ok() {
            out.push(s);
        }
    }
}

/// Every conclusion of a one-premise rule applied forward to `p`.
fn unary(p: &Sequent, max_k: usize) -> Vec<Sequent> {
    let mut out = Vec::new();
    for r in [Rule::UnderR, Rule::OverR] {
        push_ok(&mut out, infer(r, &Meta::none(), &[p]));
    }
    for k in 1..=max_k {
        push_ok(&mut out, infer(Rule::InfixR, &Meta::index(k), &[p]));
    }
    for a in all_items(&p.ante) {
        push_ok(&mut out, infer(Rule::ProdL, &Meta::at(&a), &[p]));
        for k in 1..=max_k {
            let m = Meta::at(&a).with_k(k);
            push_ok(&mut out, infer(Rule::DiscProdL, &m, &[p]));
            push_ok(&mut out, infer(Rule::ExtractR, &m, &[p]));
        }
    }
    for s in matcher::enumerate_spans(&p.ante) {
        if s.is_empty() {
            push_ok(&mut out, infer(Rule::IL, &Meta::span(s.clone()), &[p]));
        }
        push_ok(&mut out, infer(Rule::JL, &Meta::span(s), &[p]));
    }
    out
}

/// Every conclusion of a two-premise rule applied forward to `p`, `q`.
fn binary(p: &Sequent, q: &Sequent, max_k: usize) -> Vec<Sequent> {
    let mut out = Vec::new();
    push_ok(&mut out, infer(Rule::ProdR, &Meta::none(), &[p, q]));
    for k in 1..=max_k {
        push_ok(&mut out, infer(Rule::DiscProdR, &Meta::index(k), &[p, q]));
    }
    for a in all_items(&q.ante) {
        for r in [Rule::UnderL, Rule::OverL] {
            push_ok(&mut out, infer(r, &Meta::at(&a), &[p, q]));
        }
        for k in 1..=max_k {
            for r in [Rule::InfixL, Rule::ExtractL] {
                push_ok(&mut out, infer(r, &Meta::at(&a).with_k(k), &[p, q]));
            }
        }
    }
    out
}

/// All cut-free derivable sequents of total weight at most `max_w`.
///
/// Each rule adds exactly one to the summed weight of its premises, so the
/// sequents of weight `w` are the axioms of that weight, unary conclusions
/// from weight `w - 1`, and binary conclusions from weights summing to
/// `w - 1`.
pub fn closure(atoms: &[&str], max_w: usize, max_k: usize) -> HashSet<Sequent> {
    let mut levels: Vec<HashSet<Sequent>> = Vec::new();
    for w in 0..=max_w {
        let mut level = HashSet::new();
        if w % 2 == 0 {
            for t in types_of_weight(w / 2, atoms, max_k) {
                level.insert(Sequent::new(Config::vector(&t), t));
            }
        }
        if w == 1 {
            level.insert(Sequent::new(Config::empty(), Type::I));
            level.insert(Sequent::new(Config::sep(), Type::J));
        }
        if w > 0 {
            for p in &levels[w - 1] {
                level.extend(unary(p, max_k));
            }
            for a in 0..w {
                for p in &levels[a] {
                    for q in &levels[w - 1 - a] {
                        level.extend(binary(p, q, max_k));
                    }
                }
            }
        }
        debug_assert!(level.iter().all(|s| s.weight() == w));
        levels.push(level);
    }
    levels.into_iter().flatten().collect()
}

/// Number of items at all nesting levels.
pub fn flat_len(c: &Config) -> usize {
    let mut n = 0;
    c.for_each_item(&mut |_| n += 1);
    n
}

/// Visits the target space: well-formed sequents over `atoms` with total
/// weight at most `max_w` and at most `max_items` antecedent items.
pub fn for_each_sequent(
    atoms: &[&str],
    max_w: usize,
    max_items: usize,
    max_k: usize,
    mut f: impl FnMut(Sequent),
) {
    let types = types_up_to(max_w, atoms, max_k);
    let mut by_weight_sort: HashMap<(usize, usize), Vec<Type>> = HashMap::new();
    for t in &types {
        by_weight_sort
            .entry((t.weight(), t.sort()))
            .or_default()
            .push(t.clone());
    }
    for c in configs(max_items, max_w, &types) {
        let (cw, cs) = (c.weight(), c.sort());
        for w in 0..=max_w - cw {
            for t in by_weight_sort.get(&(w, cs)).into_iter().flatten() {
                f(Sequent::new(c.clone(), t.clone()));
            }
        }
    }
}
