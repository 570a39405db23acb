//! Backward cut-free proof search.
//!
//! [`applicable_inferences`] lists every backward rule instance for a goal.
//! [`Prover`] closes a goal under these instances into an AND-OR forest keyed
//! by sequent, keeping only instances whose premises are all provable. Since
//! every premise is strictly lighter than its conclusion the forest is finite
//! and acyclic.

use std::collections::HashMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::matcher::{self, ItemAddr, SpanRef};
use crate::proof::{Meta, Proof, Rule};
use crate::syntax::{Config, Item, Sequent, Type};

/// A backward rule instance: applying `rule` with `meta` to proofs of
/// `premises` yields the goal.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Inference {
    pub rule: Rule,
    pub meta: Meta,
    pub premises: Vec<Sequent>,
}

impl Inference {
    fn new(rule: Rule, meta: Meta, premises: Vec<Sequent>) -> Inference {
        Inference {
            rule,
            meta,
            premises,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("search time budget exhausted")]
pub struct Timeout;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_proofs: usize,
    pub timeout: Option<Duration>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_proofs: 1000,
            timeout: None,
        }
    }
}

fn occ(ty: &Type, fillers: &[Config]) -> Config {
    Config(vec![Item::occurrence(ty.clone(), fillers.to_vec(), None)])
}

fn seq(ante: Config, succ: &Type) -> Sequent {
    Sequent::new(ante, succ.clone())
}

/// All backward rule instances for `g`: identity, then the right rule for
/// the succedent's main connective, then left rules for each antecedent
/// occurrence in preorder.
pub fn applicable_inferences(g: &Sequent) -> Vec<Inference> {
    let mut out = Vec::new();
    if g.ante == Config::vector(&g.succ) {
        out.push(Inference::new(Rule::Id, Meta::none(), vec![]));
    }
    right_rules(g, &mut out);
    for (addr, it) in matcher::occurrences(&g.ante, |_| true) {
        left_rules(g, &addr, it, &mut out);
    }
    out
}

fn right_rules(g: &Sequent, out: &mut Vec<Inference>) {
    let ante = &g.ante;
    match &g.succ {
        Type::Atom(_) => {}
        Type::I => {
            if ante.is_empty() {
                out.push(Inference::new(Rule::IR, Meta::none(), vec![]));
            }
        }
        Type::J => {
            if ante.0 == [Item::Sep] {
                out.push(Inference::new(Rule::JR, Meta::none(), vec![]));
            }
        }
        Type::Under(a, c) => {
            let p = Config::vector(a).concat(ante.clone());
            out.push(Inference::new(Rule::UnderR, Meta::none(), vec![seq(p, c)]));
        }
        Type::Over(c, b) => {
            let p = ante.clone().concat(Config::vector(b));
            out.push(Inference::new(Rule::OverR, Meta::none(), vec![seq(p, c)]));
        }
        Type::Prod(a, b) => {
            let (sa, sb) = (a.sort(), b.sort());
            for i in 0..=ante.len() {
                let g1 = Config(ante.0[..i].to_vec());
                let g2 = Config(ante.0[i..].to_vec());
                if g1.sort() == sa && g2.sort() == sb {
                    out.push(Inference::new(
                        Rule::ProdR,
                        Meta::none(),
                        vec![seq(g1, a), seq(g2, b)],
                    ));
                }
            }
        }
        Type::Infix(k, a, c) => {
            if let Ok(p) = Config::vector(a).wrap_at(*k, ante) {
                out.push(Inference::new(Rule::InfixR, Meta::index(*k), vec![seq(p, c)]));
            }
        }
        Type::Extract(k, c, b) => {
            if let Some(addr) = matcher::sep_address(ante, *k) {
                let p = matcher::replace_item(ante, &addr, &Config::vector(b))
                    .expect("separator address is valid");
                out.push(Inference::new(
                    Rule::ExtractR,
                    Meta::at(&addr).with_k(*k),
                    vec![seq(p, c)],
                ));
            }
        }
        Type::DiscProd(k, a, b) => {
            let (sa, sb) = (a.sort(), b.sort());
            for span in matcher::enumerate_spans(ante) {
                if matcher::seps_before(ante, &span.path, span.start) != k - 1 {
                    continue;
                }
                let inner = Config(matcher::span_items(ante, &span).unwrap().to_vec());
                if inner.sort() != sb {
                    continue;
                }
                let g1 = matcher::replace(ante, &span, &Config::sep()).unwrap();
                if g1.sort() != sa {
                    continue;
                }
                out.push(Inference::new(
                    Rule::DiscProdR,
                    Meta::index(*k),
                    vec![seq(g1, a), seq(inner, b)],
                ));
            }
        }
    }
}

fn left_rules(g: &Sequent, addr: &ItemAddr, it: &Item, out: &mut Vec<Inference>) {
    let ante = &g.ante;
    let ty = it.ty().expect("occurrences are typed");
    let psi = it.fillers();
    let lv = matcher::level(ante, &addr.path).expect("occurrence level exists");
    let i = addr.index;
    let here = |j: usize| ItemAddr::new(addr.path.clone(), j);
    match ty {
        Type::Atom(_) => {}
        Type::Under(a, c) => {
            let sa = a.sort();
            for j in (0..=i).rev() {
                let content = Config(lv.0[j..i].to_vec());
                for ext in matcher::extract(&content, sa) {
                    let mut fs = ext.thetas;
                    fs.extend(psi.iter().cloned());
                    let span = SpanRef::new(addr.path.clone(), j, i + 1);
                    let p2 = matcher::replace(ante, &span, &occ(c, &fs)).unwrap();
                    out.push(Inference::new(
                        Rule::UnderL,
                        Meta::at(&here(j)),
                        vec![seq(ext.gamma, a), seq(p2, &g.succ)],
                    ));
                }
            }
        }
        Type::Over(c, b) => {
            let sb = b.sort();
            for end in i + 1..=lv.len() {
                let content = Config(lv.0[i + 1..end].to_vec());
                for ext in matcher::extract(&content, sb) {
                    let mut fs = psi.to_vec();
                    fs.extend(ext.thetas);
                    let span = SpanRef::new(addr.path.clone(), i, end);
                    let p2 = matcher::replace(ante, &span, &occ(c, &fs)).unwrap();
                    out.push(Inference::new(
                        Rule::OverL,
                        Meta::at(addr),
                        vec![seq(ext.gamma, b), seq(p2, &g.succ)],
                    ));
                }
            }
        }
        Type::Prod(a, b) => {
            let sa = a.sort();
            let repl = occ(a, &psi[..sa]).concat(occ(b, &psi[sa..]));
            let p = matcher::replace_item(ante, addr, &repl).unwrap();
            out.push(Inference::new(Rule::ProdL, Meta::at(addr), vec![seq(p, &g.succ)]));
        }
        Type::DiscProd(k, a, b) => {
            let (k, sb) = (*k, b.sort());
            let mut fs = psi[..k - 1].to_vec();
            fs.push(occ(b, &psi[k - 1..k - 1 + sb]));
            fs.extend(psi[k - 1 + sb..].iter().cloned());
            let p = matcher::replace_item(ante, addr, &occ(a, &fs)).unwrap();
            out.push(Inference::new(
                Rule::DiscProdL,
                Meta::at(addr).with_k(k),
                vec![seq(p, &g.succ)],
            ));
        }
        Type::I => {
            let p = matcher::replace_item(ante, addr, &Config::empty()).unwrap();
            out.push(Inference::new(
                Rule::IL,
                Meta::span(SpanRef::new(addr.path.clone(), i, i)),
                vec![seq(p, &g.succ)],
            ));
        }
        Type::J => {
            let phi = &psi[0];
            let p = matcher::replace_item(ante, addr, phi).unwrap();
            out.push(Inference::new(
                Rule::JL,
                Meta::span(SpanRef::new(addr.path.clone(), i, i + phi.len())),
                vec![seq(p, &g.succ)],
            ));
        }
        Type::Extract(k, c, b) => {
            let k = *k;
            for ext in matcher::extract(&psi[k - 1], b.sort()) {
                let mut fs = psi[..k - 1].to_vec();
                fs.extend(ext.thetas);
                fs.extend(psi[k..].iter().cloned());
                let p2 = matcher::replace_item(ante, addr, &occ(c, &fs)).unwrap();
                out.push(Inference::new(
                    Rule::ExtractL,
                    Meta::at(addr).with_k(k),
                    vec![seq(ext.gamma, b), seq(p2, &g.succ)],
                ));
            }
        }
        Type::Infix(k, a, c) => infix_left(g, addr, *k, a, c, psi, out),
    }
}

/// Instances of the infixation left rule: the occurrence sits inside a
/// contiguous span, at any ancestor level, that wraps around it.
fn infix_left(
    g: &Sequent,
    addr: &ItemAddr,
    k: usize,
    a: &Type,
    c: &Type,
    psi: &[Config],
    out: &mut Vec<Inference>,
) {
    let ante = &g.ante;
    let sa = a.sort();
    // Levels from the occurrence's own level outwards.
    for depth in (0..=addr.path.len()).rev() {
        let lpath = addr.path[..depth].to_vec();
        let anchor = if depth == addr.path.len() {
            addr.index
        } else {
            addr.path[depth].item
        };
        let lv = matcher::level(ante, &lpath).unwrap();
        for start in (0..=anchor).rev() {
            for end in anchor + 1..=lv.len() {
                let content = Config(lv.0[start..end].to_vec());
                let mut rel_path = addr.path[depth..].to_vec();
                let rel_index = if let Some(first) = rel_path.first_mut() {
                    first.item -= start;
                    addr.index
                } else {
                    addr.index - start
                };
                let forced = ItemAddr::new(rel_path, rel_index);
                for ext in matcher::extract_forced(&content, sa, &forced, k) {
                    let mut fs = ext.thetas[..k - 1].to_vec();
                    fs.extend(psi.iter().cloned());
                    fs.extend(ext.thetas[k - 1..].iter().cloned());
                    let span = SpanRef::new(lpath.clone(), start, end);
                    let p2 = matcher::replace(ante, &span, &occ(c, &fs)).unwrap();
                    out.push(Inference::new(
                        Rule::InfixL,
                        Meta::at(&ItemAddr::new(lpath.clone(), start)).with_k(k),
                        vec![seq(ext.gamma, a), seq(p2, &g.succ)],
                    ));
                }
            }
        }
    }
}

/// Memoized proof forest.
#[derive(Default)]
pub struct Prover {
    memo: HashMap<Sequent, Option<Arc<[Inference]>>>,
    proofs: HashMap<Sequent, Arc<Vec<Proof>>>,
    deadline: Option<Instant>,
    steps: usize,
}

/// Result of an exhaustive search for one goal.
#[derive(Debug, Clone)]
pub struct ProofSet {
    pub proofs: Vec<Proof>,
    /// Total number of cut-free proofs (saturating).
    pub total: u128,
    /// True when `total` exceeds the number of proofs returned.
    pub truncated: bool,
}

impl Prover {
    pub fn new() -> Prover {
        Prover::default()
    }

    pub fn with_timeout(timeout: Option<Duration>) -> Prover {
        Prover {
            deadline: timeout.map(|t| Instant::now() + t),
            ..Prover::default()
        }
    }

    /// Number of distinct sequents explored so far.
    pub fn explored(&self) -> usize {
        self.memo.len()
    }

    pub fn provable(&mut self, g: &Sequent) -> Result<bool, Timeout> {
        if let Some(r) = self.memo.get(g) {
            return Ok(r.is_some());
        }
        self.steps += 1;
        if self.steps.is_multiple_of(256) {
            if let Some(d) = self.deadline {
                if Instant::now() > d {
                    return Err(Timeout);
                }
            }
        }
        let mut kept = Vec::new();
        for inf in applicable_inferences(g) {
            let mut ok = true;
            for p in &inf.premises {
                if !self.provable(p)? {
                    ok = false;
                    break;
                }
            }
            if ok {
                kept.push(inf);
            }
        }
        let entry = (!kept.is_empty()).then(|| Arc::from(kept));
        let res = entry.is_some();
        self.memo.insert(g.clone(), entry);
        Ok(res)
    }

    /// The provable instances for an explored goal.
    pub fn inferences(&self, g: &Sequent) -> Option<Arc<[Inference]>> {
        self.memo.get(g).cloned().flatten()
    }

    /// Number of cut-free proofs of `g` (saturating at `u128::MAX`).
    pub fn count(&mut self, g: &Sequent) -> Result<u128, Timeout> {
        let mut cache = HashMap::new();
        if !self.provable(g)? {
            return Ok(0);
        }
        Ok(self.count_rec(g, &mut cache))
    }

    fn count_rec(&self, g: &Sequent, cache: &mut HashMap<Sequent, u128>) -> u128 {
        if let Some(c) = cache.get(g) {
            return *c;
        }
        let mut total: u128 = 0;
        if let Some(infs) = self.inferences(g) {
            for inf in infs.iter() {
                let mut prod: u128 = 1;
                for p in &inf.premises {
                    prod = prod.saturating_mul(self.count_rec(p, cache));
                }
                total = total.saturating_add(prod);
            }
        }
        cache.insert(g.clone(), total);
        total
    }

    /// Up to `cap` proofs of an explored goal, in search order.
    pub fn proofs(&mut self, g: &Sequent, cap: usize) -> Vec<Proof> {
        self.proofs_rec(g, cap).as_ref().clone()
    }

    fn proofs_rec(&mut self, g: &Sequent, cap: usize) -> Arc<Vec<Proof>> {
        if let Some(ps) = self.proofs.get(g) {
            if ps.len() >= cap {
                return Arc::new(ps[..cap].to_vec());
            }
        }
        let mut out = Vec::new();
        if let Some(infs) = self.inferences(g) {
            'outer: for inf in infs.iter() {
                let lists: Vec<Arc<Vec<Proof>>> =
                    inf.premises.iter().map(|p| self.proofs_rec(p, cap)).collect();
                let mut idx = vec![0usize; lists.len()];
                loop {
                    if out.len() >= cap {
                        break 'outer;
                    }
                    let premises = lists
                        .iter()
                        .zip(&idx)
                        .map(|(l, &i)| l[i].clone())
                        .collect();
                    out.push(Proof::new(inf.rule, inf.meta.clone(), g.clone(), premises));
                    // Advance the odometer, last premise fastest.
                    let mut d = lists.len();
                    loop {
                        if d == 0 {
                            continue 'outer;
                        }
                        d -= 1;
                        idx[d] += 1;
                        if idx[d] < lists[d].len() {
                            break;
                        }
                        idx[d] = 0;
                    }
                }
            }
        }
        let out = Arc::new(out);
        self.proofs.insert(g.clone(), out.clone());
        out
    }
}

/// Exhaustive search for cut-free proofs of `g`.
pub fn prove_all(g: &Sequent, limits: Limits) -> Result<ProofSet, Timeout> {
    let mut prover = Prover::with_timeout(limits.timeout);
    prove_with(&mut prover, g, limits.max_proofs)
}

pub fn prove_with(prover: &mut Prover, g: &Sequent, max_proofs: usize) -> Result<ProofSet, Timeout> {
    let total = prover.count(g)?;
    let proofs = prover.proofs(g, max_proofs);
    Ok(ProofSet {
        truncated: total > proofs.len() as u128,
        proofs,
        total,
    })
}
