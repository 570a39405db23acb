//! Term assignment for proofs.
//!
//! The meaning of a sequent proof is a term whose free variables are the
//! positional slots `$0, $1, ...`, one per antecedent type occurrence in
//! preorder. Each rule combines premise meanings: functor left rules apply
//! the new functor to the minor premise, right rules abstract, product
//! left rules project, product right rules pair, unit right rules yield
//! `d`, unit left rules discard, and Cut substitutes.

use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use thiserror::Error;

use super::term::{canonical, normalize, normalize_eta, subst, SemTerm};
use crate::matcher::{self, ItemAddr};
use crate::proof::{infer, Meta, Proof, Rule};
use crate::search::Prover;
use crate::syntax::{Label, Sequent};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComposeError {
    #[error("rule application failed: {0}")]
    Infer(String),
    #[error("{rule}: {msg}")]
    Shape { rule: Rule, msg: String },
    #[error("{expected} lexical terms needed, got {got}")]
    Labels { expected: usize, got: usize },
}

fn shape(rule: Rule, msg: impl Into<String>) -> ComposeError {
    ComposeError::Shape {
        rule,
        msg: msg.into(),
    }
}

fn var_name(i: usize) -> String {
    format!("${i}")
}

/// Meaning of the conclusion of `rule` given the meanings of its premises.
pub fn compose(
    rule: Rule,
    meta: &Meta,
    premises: &[&Sequent],
    terms: &[SemTerm],
) -> Result<SemTerm, ComposeError> {
    if premises.len() != rule.arity() || terms.len() != rule.arity() {
        return Err(shape(rule, "wrong number of premises"));
    }
    match rule {
        Rule::Id => return Ok(SemTerm::slot(0)),
        Rule::IR | Rule::JR => return Ok(SemTerm::Unit),
        _ => {}
    }
    // Give every premise occurrence a distinct label so that occurrences can
    // be traced into the conclusion.
    let mut labelled = Vec::new();
    let mut bases = Vec::new();
    let mut next = 0u32;
    for p in premises {
        let mut s = (*p).clone();
        bases.push(next);
        next = s.ante.label_occurrences(next);
        labelled.push(s);
    }
    let refs: Vec<&Sequent> = labelled.iter().collect();
    let concl = infer(rule, meta, &refs).map_err(|e| ComposeError::Infer(e.0))?;

    let mut position: HashMap<u32, usize> = HashMap::new();
    let mut created = Vec::new();
    for (i, it) in concl.ante.occurrences().into_iter().enumerate() {
        match it.label() {
            Some(Label(l)) => {
                position.insert(l, i);
            }
            None => created.push(i),
        }
    }

    // Substitution for each premise: surviving occurrences become conclusion
    // slots; consumed ones are collected for the rule-specific treatment.
    let mut maps: Vec<BTreeMap<String, SemTerm>> = Vec::new();
    let mut consumed: Vec<Vec<(usize, u32)>> = Vec::new();
    for (pi, s) in labelled.iter().enumerate() {
        let mut m = BTreeMap::new();
        let mut gone = Vec::new();
        for (j, it) in s.ante.occurrences().into_iter().enumerate() {
            let l = it.label().unwrap().0;
            match position.get(&l) {
                Some(&c) => {
                    m.insert(var_name(j), SemTerm::slot(c));
                }
                None => gone.push((j, l)),
            }
        }
        debug_assert!(gone.iter().all(|&(_, l)| l >= bases[pi]));
        maps.push(m);
        consumed.push(gone);
    }

    let one_created = |rule| -> Result<usize, ComposeError> {
        match created.as_slice() {
            [c] => Ok(*c),
            _ => Err(shape(rule, "expected exactly one new occurrence")),
        }
    };

    match rule {
        Rule::UnderL | Rule::OverL | Rule::InfixL | Rule::ExtractL | Rule::Cut => {
            if !consumed[0].is_empty() {
                return Err(shape(rule, "minor premise occurrence lost"));
            }
            let hole = match consumed[1].as_slice() {
                [(j, _)] => *j,
                _ => return Err(shape(rule, "expected one consumed occurrence")),
            };
            let minor = subst(&terms[0], &maps[0]);
            let value = if rule == Rule::Cut {
                if !created.is_empty() {
                    return Err(shape(rule, "cut creates no occurrence"));
                }
                minor
            } else {
                SemTerm::app(SemTerm::slot(one_created(rule)?), minor)
            };
            let mut m = maps[1].clone();
            m.insert(var_name(hole), value);
            Ok(subst(&terms[1], &m))
        }
        Rule::UnderR | Rule::OverR | Rule::InfixR | Rule::ExtractR => {
            let j = match consumed[0].as_slice() {
                [(j, _)] => *j,
                _ => return Err(shape(rule, "expected one abstracted occurrence")),
            };
            let x = "x".to_string();
            let mut m = maps[0].clone();
            m.insert(var_name(j), SemTerm::var(x.clone()));
            Ok(SemTerm::lam(x, subst(&terms[0], &m)))
        }
        Rule::ProdL | Rule::DiscProdL => {
            let p = SemTerm::slot(one_created(rule)?);
            let first = meta
                .item()
                .and_then(|a| matcher::get(&labelled[0].ante, &a))
                .and_then(|it| it.label())
                .ok_or_else(|| shape(rule, "metadata does not address an occurrence"))?;
            if consumed[0].len() != 2 {
                return Err(shape(rule, "expected two consumed occurrences"));
            }
            let mut m = maps[0].clone();
            for &(j, l) in &consumed[0] {
                let v = if Label(l) == first {
                    SemTerm::proj1(p.clone())
                } else {
                    SemTerm::proj2(p.clone())
                };
                m.insert(var_name(j), v);
            }
            Ok(subst(&terms[0], &m))
        }
        Rule::IL | Rule::JL => {
            one_created(rule)?;
            Ok(subst(&terms[0], &maps[0]))
        }
        Rule::ProdR | Rule::DiscProdR => Ok(SemTerm::pair(
            subst(&terms[0], &maps[0]),
            subst(&terms[1], &maps[1]),
        )),
        Rule::Id | Rule::IR | Rule::JR => unreachable!(),
    }
}

/// Meaning of a proof in terms of the slots of its endsequent.
pub fn proof_term(p: &Proof) -> Result<SemTerm, ComposeError> {
    let terms = p
        .premises
        .iter()
        .map(proof_term)
        .collect::<Result<Vec<_>, _>>()?;
    let prem: Vec<&Sequent> = p.premises.iter().map(|q| &q.conclusion).collect();
    compose(p.rule, &p.meta, &prem, &terms)
}

/// Substitutes `labels[i]` for slot `$i`.
pub fn fill_slots(t: &SemTerm, labels: &[SemTerm]) -> SemTerm {
    let m = labels
        .iter()
        .enumerate()
        .map(|(i, l)| (var_name(i), l.clone()))
        .collect();
    subst(t, &m)
}

/// The (unnormalized) meaning of `p` with the endsequent's occurrences
/// labelled, in preorder, by `labels`.
pub fn extract_term(p: &Proof, labels: &[SemTerm]) -> Result<SemTerm, ComposeError> {
    let n = p.conclusion.ante.occurrences().len();
    if labels.len() != n {
        return Err(ComposeError::Labels {
            expected: n,
            got: labels.len(),
        });
    }
    Ok(fill_slots(&proof_term(p)?, labels))
}

/// How readings are identified.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normal {
    /// Beta and projection reduction.
    Beta,
    /// Additionally contract eta redexes.
    BetaEta,
}

impl Normal {
    pub fn apply(self, t: &SemTerm) -> SemTerm {
        canonical(&match self {
            Normal::Beta => normalize(t),
            Normal::BetaEta => normalize_eta(t),
        })
    }
}

/// Distinct normalized meanings with the number of proofs yielding each.
pub type ReadingCounts = BTreeMap<SemTerm, u128>;

/// Distinct normal slot-level meanings of all cut-free proofs of `g`,
/// computed over the prover's memoized proof forest. `g` must already have
/// been explored with [`Prover::provable`].
pub fn forest_readings(prover: &Prover, g: &Sequent, mode: Normal) -> Result<ReadingCounts, ComposeError> {
    let mut cache = HashMap::new();
    Ok(forest_rec(prover, &g.stripped(), mode, &mut cache)?
        .as_ref()
        .clone())
}

fn forest_rec(
    prover: &Prover,
    g: &Sequent,
    mode: Normal,
    cache: &mut HashMap<Sequent, Rc<ReadingCounts>>,
) -> Result<Rc<ReadingCounts>, ComposeError> {
    if let Some(r) = cache.get(g) {
        return Ok(r.clone());
    }
    let mut out = ReadingCounts::new();
    if let Some(infs) = prover.inferences(g) {
        for inf in infs.iter() {
            let subs = inf
                .premises
                .iter()
                .map(|p| forest_rec(prover, p, mode, cache))
                .collect::<Result<Vec<_>, _>>()?;
            let lists: Vec<Vec<(&SemTerm, u128)>> = subs
                .iter()
                .map(|m| m.iter().map(|(t, c)| (t, *c)).collect())
                .collect();
            if lists.iter().any(Vec::is_empty) {
                continue;
            }
            let prem: Vec<&Sequent> = inf.premises.iter().collect();
            let mut idx = vec![0usize; lists.len()];
            loop {
                let terms: Vec<SemTerm> = lists
                    .iter()
                    .zip(&idx)
                    .map(|(l, &i)| l[i].0.clone())
                    .collect();
                let count = lists
                    .iter()
                    .zip(&idx)
                    .fold(1u128, |acc, (l, &i)| acc.saturating_mul(l[i].1));
                let t = mode.apply(&compose(inf.rule, &inf.meta, &prem, &terms)?);
                let e = out.entry(t).or_insert(0);
                *e = e.saturating_add(count);
                let mut d = lists.len();
                let mut done = true;
                while d > 0 {
                    d -= 1;
                    idx[d] += 1;
                    if idx[d] < lists[d].len() {
                        done = false;
                        break;
                    }
                    idx[d] = 0;
                }
                if done {
                    break;
                }
            }
        }
    }
    let out = Rc::new(out);
    cache.insert(g.clone(), out.clone());
    Ok(out)
}

/// Readings of `g` after substituting lexical meanings for its slots,
/// merged up to alpha-equivalence.
pub fn readings(
    prover: &Prover,
    g: &Sequent,
    labels: &[SemTerm],
    mode: Normal,
) -> Result<ReadingCounts, ComposeError> {
    let n = g.ante.occurrences().len();
    if labels.len() != n {
        return Err(ComposeError::Labels {
            expected: n,
            got: labels.len(),
        });
    }
    let mut out = ReadingCounts::new();
    for (t, c) in forest_readings(prover, g, mode)? {
        let r = mode.apply(&fill_slots(&t, labels));
        let e = out.entry(r).or_insert(0);
        *e = e.saturating_add(c);
    }
    Ok(out)
}

/// Address of the occurrence whose slot is `$i`.
pub fn slot_address(s: &Sequent, i: usize) -> Option<ItemAddr> {
    let mut c = s.ante.clone();
    c.label_occurrences(0);
    matcher::find_label(&c, Label(i as u32))
}
