//! Cut elimination.
//!
//! A topmost Cut (one with cut-free premises) is reduced by one of:
//! the axiom case, where one premise is an identity and the other premise
//! is returned; a right permutation, when the cut occurrence is not created
//! by the last rule of the right premise; a left permutation, when the left
//! premise ends in a left rule; and a principal case, when the Cut formula is
//! created on both sides. Every Cut produced by a step has strictly smaller
//! degree than the Cut it replaces.
//!
//! Rule metadata of permuted rules is translated by planting two marker
//! occurrences around the addressed span, performing the substitution, and
//! reading the markers back.

use serde::Serialize;
use thiserror::Error;

use crate::matcher::{self, ItemAddr, SpanRef};
use crate::proof::{infer, InferError, Meta, Proof, Rule};
use crate::search::Prover;
use crate::syntax::{Config, Item, Label, Sequent, Type};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CutElimError {
    #[error("proof contains no Cut")]
    NoCut,
    #[error("invalid Cut: {0}")]
    Invalid(String),
    #[error("reduction {case} raised the degree from {before} to {after}")]
    Degree {
        case: String,
        before: usize,
        after: usize,
    },
    #[error("reduction {case} changed the endsequent from {before} to {after}")]
    Endsequent {
        case: String,
        before: String,
        after: String,
    },
}

impl From<InferError> for CutElimError {
    fn from(e: InferError) -> Self {
        CutElimError::Invalid(e.0)
    }
}

/// A Cut node seen as its two premises and the addressed occurrence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CutInstance {
    pub left: Sequent,
    pub right: Sequent,
    pub hole: ItemAddr,
    pub conclusion: Sequent,
}

impl CutInstance {
    pub fn of(p: &Proof) -> Option<CutInstance> {
        if p.rule != Rule::Cut || p.premises.len() != 2 {
            return None;
        }
        Some(CutInstance {
            left: p.premises[0].conclusion.clone(),
            right: p.premises[1].conclusion.clone(),
            hole: p.meta.item()?,
            conclusion: p.conclusion.clone(),
        })
    }

    /// Antecedent weight of the left premise, plus the weight of the right
    /// antecedent context with the hole counted as zero, plus the weights of
    /// the Cut formula and the succedent.
    pub fn degree(&self) -> usize {
        let a = self.left.succ.weight();
        let context = self.right.ante.weight() - a;
        self.left.ante.weight() + context + a + self.right.succ.weight()
    }
}

/// Degree of a Cut node.
pub fn degree(p: &Proof) -> Option<usize> {
    CutInstance::of(p).map(|c| c.degree())
}

/// One reduction step, as recorded in a trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub case: String,
    pub degree_before: usize,
    pub degrees_after: Vec<usize>,
}

/// Builds `Cut(p1, p2)` on the occurrence of `p2`'s antecedent at `at`.
pub fn splice_cut(p1: Proof, p2: Proof, at: &ItemAddr) -> Result<Proof, CutElimError> {
    Ok(Proof::build(Rule::Cut, Meta::at(at), vec![p1, p2])?)
}

/// Path (premise indices) to the leftmost Cut with no Cut above it.
pub fn topmost_cut(p: &Proof) -> Option<Vec<usize>> {
    for (i, q) in p.premises.iter().enumerate() {
        if let Some(mut path) = topmost_cut(q) {
            path.insert(0, i);
            return Some(path);
        }
    }
    (p.rule == Rule::Cut).then(Vec::new)
}

/// Reduces the leftmost topmost Cut of `p`.
pub fn reduce_once(p: &Proof) -> Result<(Proof, TraceStep), CutElimError> {
    let path = topmost_cut(p).ok_or(CutElimError::NoCut)?;
    let node = p.node(&path).unwrap();
    let (reduct, step) = reduce_cut(node)?;
    let mut out = p.clone();
    *out.node_mut(&path).unwrap() = reduct;
    Ok((out, step))
}

/// Repeats [`reduce_once`] until no Cut remains.
pub fn eliminate(p: &Proof) -> Result<(Proof, Vec<TraceStep>), CutElimError> {
    let mut cur = p.clone();
    let mut trace = Vec::new();
    while !cur.is_cut_free() {
        let (next, step) = reduce_once(&cur)?;
        trace.push(step);
        cur = next;
    }
    Ok((cur, trace))
}

// ------------------------------------------------------------------ cases

/// Reduces a Cut node whose premises are cut-free.
pub fn reduce_cut(cut: &Proof) -> Result<(Proof, TraceStep), CutElimError> {
    let inst = CutInstance::of(cut).ok_or_else(|| CutElimError::Invalid("not a Cut node".into()))?;
    let before = inst.degree();
    let (p1, p2) = (&cut.premises[0], &cut.premises[1]);
    let (case, reduct) = if p1.rule == Rule::Id {
        ("axiom-left".to_string(), p2.clone())
    } else if p2.rule == Rule::Id {
        ("axiom-right".to_string(), p1.clone())
    } else {
        match trace_hole(p2, &inst.hole)? {
            Some((i, addr)) => (
                format!("permute-right {}", p2.rule),
                permute_right(p1, p2, i, &addr)?,
            ),
            None if p1.rule.is_left() => (
                format!("permute-left {}", p1.rule),
                permute_left(p1, p2, &inst.hole)?,
            ),
            None => (format!("principal {}", p1.rule), principal(p1, p2)?),
        }
    };
    if reduct.conclusion != cut.conclusion {
        return Err(CutElimError::Endsequent {
            case,
            before: cut.conclusion.to_string(),
            after: reduct.conclusion.to_string(),
        });
    }
    let degrees_after = new_cut_degrees(&reduct);
    if let Some(&d) = degrees_after.iter().find(|&&d| d >= before) {
        return Err(CutElimError::Degree {
            case,
            before,
            after: d,
        });
    }
    Ok((
        reduct,
        TraceStep {
            case,
            degree_before: before,
            degrees_after,
        },
    ))
}

/// Degrees of the Cuts of a reduct, which are exactly the Cuts the step
/// created since the reduced Cut had cut-free premises.
fn new_cut_degrees(p: &Proof) -> Vec<usize> {
    let mut out = Vec::new();
    p.for_each(&mut |q| {
        if let Some(d) = degree(q) {
            out.push(d);
        }
    });
    out
}

/// Labels the antecedent occurrences of `s` from `*next` on.
fn labelled(s: &Sequent, next: &mut u32) -> Sequent {
    let mut s = s.clone();
    *next = s.ante.label_occurrences(*next);
    s
}

/// If the occurrence at `hole` in the conclusion of `p` comes from a
/// premise, that premise's index and the occurrence's address there.
fn trace_hole(p: &Proof, hole: &ItemAddr) -> Result<Option<(usize, ItemAddr)>, CutElimError> {
    let mut next = 0;
    let prems: Vec<Sequent> = p
        .premises
        .iter()
        .map(|q| labelled(&q.conclusion, &mut next))
        .collect();
    let refs: Vec<&Sequent> = prems.iter().collect();
    let concl = infer(p.rule, &p.meta, &refs)?;
    let label = match matcher::get(&concl.ante, hole).and_then(Item::label) {
        Some(l) => l,
        None => return Ok(None),
    };
    for (i, s) in prems.iter().enumerate() {
        if let Some(a) = matcher::find_label(&s.ante, label) {
            return Ok(Some((i, a)));
        }
    }
    Err(CutElimError::Invalid("lost track of the cut occurrence".into()))
}

const BEGIN: Label = Label(u32::MAX - 1);
const END: Label = Label(u32::MAX - 2);

fn marker(l: Label) -> Config {
    Config(vec![Item::Leaf {
        ty: Type::atom("#"),
        label: Some(l),
    }])
}

/// Plants markers around `span` in `c`.
fn mark(c: &Config, span: &SpanRef) -> Result<Config, CutElimError> {
    let bad = |e: matcher::AddrError| CutElimError::Invalid(e.0);
    let at_end = SpanRef::new(span.path.clone(), span.end, span.end);
    let at_start = SpanRef::new(span.path.clone(), span.start, span.start);
    let c = matcher::replace(c, &at_end, &marker(END)).map_err(bad)?;
    matcher::replace(&c, &at_start, &marker(BEGIN)).map_err(bad)
}

/// Reads back the span delimited by the markers.
fn unmark(c: &Config) -> Result<SpanRef, CutElimError> {
    let lost = || CutElimError::Invalid("span markers lost".into());
    let b = matcher::find_label(c, BEGIN).ok_or_else(lost)?;
    let e = matcher::find_label(c, END).ok_or_else(lost)?;
    if b.path != e.path || e.index <= b.index {
        return Err(lost());
    }
    Ok(SpanRef::new(b.path, b.index, e.index - 1))
}

/// Replaces the occurrence at `hole` in `delta` by `gamma` wrapped with the
/// occurrence's fillers.
fn plug(delta: &Config, hole: &ItemAddr, gamma: &Config) -> Result<Config, CutElimError> {
    let it = matcher::get(delta, hole)
        .ok_or_else(|| CutElimError::Invalid(format!("no occurrence at {hole}")))?;
    let filled = gamma
        .gen_wrap(it.fillers())
        .map_err(|e| CutElimError::Invalid(e.to_string()))?;
    matcher::replace_item(delta, hole, &filled).map_err(|e| CutElimError::Invalid(e.0))
}

/// Cut occurrence `i` of the right premise `p2` was already present in its
/// premise `i`: cut into that premise and reapply the last rule.
fn permute_right(p1: &Proof, p2: &Proof, i: usize, addr: &ItemAddr) -> Result<Proof, CutElimError> {
    let prem = &p2.premises[i];
    let mut meta = p2.meta.clone();
    if p2.rule.meta_premise() == Some(i) {
        if let Some(span) = &p2.meta.span {
            // Labels keep the hole findable after the markers shift indices.
            let mut ante = prem.conclusion.ante.clone();
            ante.label_occurrences(0);
            let hole_label = matcher::get(&ante, addr).and_then(Item::label).unwrap();
            let marked = mark(&ante, span)?;
            let hole = matcher::find_label(&marked, hole_label).unwrap();
            meta.span = Some(unmark(&plug(&marked, &hole, &p1.conclusion.ante)?)?);
        }
    }
    let cut = splice_cut(p1.clone(), prem.clone(), addr)?;
    let mut premises = p2.premises.clone();
    premises[i] = cut;
    Ok(Proof::build(p2.rule, meta, premises)?)
}

/// The left premise ends in a left rule: cut its major premise instead.
fn permute_left(p1: &Proof, p2: &Proof, hole: &ItemAddr) -> Result<Proof, CutElimError> {
    let m = p1.rule.major_premise();
    let major = &p1.premises[m];
    let mut meta = p1.meta.clone();
    if p1.rule.meta_premise() == Some(m) {
        if let Some(span) = &p1.meta.span {
            let marked = mark(&major.conclusion.ante, span)?;
            meta.span = Some(unmark(&plug(&p2.conclusion.ante, hole, &marked)?)?);
        }
    }
    let cut = splice_cut(major.clone(), p2.clone(), hole)?;
    let mut premises = p1.premises.clone();
    premises[m] = cut;
    Ok(Proof::build(p1.rule, meta, premises)?)
}

/// A proof paired with a labelled copy of its conclusion.
struct Tracked {
    proof: Proof,
    seq: Sequent,
}

fn track(p: &Proof, next: &mut u32) -> Tracked {
    Tracked {
        proof: p.clone(),
        seq: labelled(&p.conclusion, next),
    }
}

fn cut_at(left: Tracked, right: Tracked, label: Label) -> Result<Tracked, CutElimError> {
    let hole = matcher::find_label(&right.seq.ante, label)
        .ok_or_else(|| CutElimError::Invalid("principal case lost an occurrence".into()))?;
    let meta = Meta::at(&hole);
    let seq = infer(Rule::Cut, &meta, &[&left.seq, &right.seq])?;
    let proof = Proof::new(Rule::Cut, meta, seq.stripped(), vec![left.proof, right.proof]);
    Ok(Tracked { proof, seq })
}

/// Labels of `premise` occurrences that the rule at `p` consumes.
fn consumed(p: &Proof, premise: usize, prems: &[&Sequent]) -> Result<Vec<Label>, CutElimError> {
    let concl = infer(p.rule, &p.meta, prems)?;
    let kept: Vec<Label> = concl
        .ante
        .occurrences()
        .into_iter()
        .filter_map(Item::label)
        .collect();
    Ok(prems[premise]
        .ante
        .occurrences()
        .into_iter()
        .filter_map(Item::label)
        .filter(|l| !kept.contains(l))
        .collect())
}

fn principal(p1: &Proof, p2: &Proof) -> Result<Proof, CutElimError> {
    let mismatch = || CutElimError::Invalid(format!("no principal case for {} against {}", p1.rule, p2.rule));
    let mut next = 0;
    match (p1.rule, p2.rule) {
        (Rule::IR, Rule::IL) | (Rule::JR, Rule::JL) => Ok(p2.premises[0].clone()),
        (Rule::UnderR, Rule::UnderL)
        | (Rule::OverR, Rule::OverL)
        | (Rule::InfixR, Rule::InfixL)
        | (Rule::ExtractR, Rule::ExtractL) => {
            // p1: r1 / Gamma => F ; p2: q, r / Delta<..F..> => B.
            let r1 = track(&p1.premises[0], &mut next);
            let q = track(&p2.premises[0], &mut next);
            let r = track(&p2.premises[1], &mut next);
            let bound = match consumed(p1, 0, &[&r1.seq])?.as_slice() {
                [l] => *l,
                _ => return Err(mismatch()),
            };
            let hole = p2.meta.item().ok_or_else(mismatch)?;
            let hole_label = matcher::get(&r.seq.ante, &hole)
                .and_then(Item::label)
                .ok_or_else(mismatch)?;
            let inner = cut_at(r1, r, hole_label)?;
            Ok(cut_at(q, inner, bound)?.proof)
        }
        (Rule::ProdR, Rule::ProdL) | (Rule::DiscProdR, Rule::DiscProdL) => {
            // p1: q1, q2 / Gamma => A*B ; p2: r / Delta<..A*B..> => C.
            let q1 = track(&p1.premises[0], &mut next);
            let q2 = track(&p1.premises[1], &mut next);
            let r = track(&p2.premises[0], &mut next);
            let first = p2
                .meta
                .item()
                .and_then(|a| matcher::get(&r.seq.ante, &a))
                .and_then(Item::label)
                .ok_or_else(mismatch)?;
            let second = consumed(p2, 0, &[&r.seq])?
                .into_iter()
                .find(|&l| l != first)
                .ok_or_else(mismatch)?;
            let inner = cut_at(q1, r, first)?;
            Ok(cut_at(q2, inner, second)?.proof)
        }
        _ => Err(mismatch()),
    }
}

// --------------------------------------------------------------- fixtures

/// A cut-free proof of `vect(ty) => ty` other than the identity axiom, if
/// the type has one.
fn expanded_identity(prover: &mut Prover, ty: &Type) -> Option<Proof> {
    let g = crate::proof::axiom(ty);
    prover.provable(&g).ok()?;
    prover.proofs(&g, 4).into_iter().find(|q| q.rule != Rule::Id)
}

/// Proofs with Cuts built from the cut-free proof `p`, each with the same
/// endsequent as `p`. Three kinds are produced, visiting subproofs in
/// preorder: a subproof is cut against an expanded identity proof of its
/// succedent; an expanded identity proof of an antecedent occurrence is cut
/// into a subproof; and, when a subproof's antecedent is a contiguous span
/// of the endsequent, the span is replaced by the subproof's succedent, the
/// resulting sequent is proved, and the subproof is cut back in.
pub fn spliced_fixtures(p: &Proof, max: usize) -> Vec<Proof> {
    let mut prover = Prover::new();
    let mut out: Vec<Proof> = Vec::new();
    let mut paths = Vec::new();
    collect_paths(p, &mut Vec::new(), &mut paths);
    let push = |out: &mut Vec<Proof>, path: &[usize], node: Proof| {
        let mut whole = p.clone();
        *whole.node_mut(path).unwrap() = node;
        if !out.contains(&whole) {
            out.push(whole);
        }
    };
    for path in &paths {
        if out.len() >= max {
            break;
        }
        let q = p.node(path).unwrap();
        if q.rule == Rule::Id {
            continue;
        }
        if let Some(e) = expanded_identity(&mut prover, &q.conclusion.succ) {
            if let Ok(c) = splice_cut(q.clone(), e, &ItemAddr::top(0)) {
                push(&mut out, path, c);
            }
        }
        for (addr, it) in matcher::occurrences(&q.conclusion.ante, |_| true) {
            let ty = it.ty().unwrap();
            if let Some(e) = expanded_identity(&mut prover, ty) {
                if let Ok(c) = splice_cut(e, q.clone(), &addr) {
                    push(&mut out, path, c);
                    break;
                }
            }
        }
        if let Some(c) = span_splice(&mut prover, &p.conclusion, q) {
            push(&mut out, &[], c);
        }
    }
    out.truncate(max);
    out
}

fn collect_paths(p: &Proof, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    out.push(cur.clone());
    for (i, q) in p.premises.iter().enumerate() {
        cur.push(i);
        collect_paths(q, cur, out);
        cur.pop();
    }
}

fn span_splice(prover: &mut Prover, g: &Sequent, sub: &Proof) -> Option<Proof> {
    let gamma = &sub.conclusion.ante;
    let a = &sub.conclusion.succ;
    for span in matcher::enumerate_spans(&g.ante) {
        if span.start == span.end || matcher::span_items(&g.ante, &span) != Some(&gamma.0[..]) {
            continue;
        }
        let Ok(ante) = matcher::replace(&g.ante, &span, &Config::vector(a)) else {
            continue;
        };
        let g2 = Sequent::new(ante, g.succ.clone());
        if g2.validate().is_err() || !prover.provable(&g2).unwrap_or(false) {
            continue;
        }
        let p2 = prover.proofs(&g2, 1).into_iter().next()?;
        let at = ItemAddr::new(span.path.clone(), span.start);
        if let Ok(c) = splice_cut(sub.clone(), p2, &at) {
            return Some(c);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::proof::check_proof;
    use crate::search::prove_all;
    use crate::syntax::{parse_sequent, parse_type};

    /// The first proof found that is not an identity axiom.
    fn prove(s: &str) -> Proof {
        let mut ps = prove_all(&parse_sequent(s).unwrap(), Default::default())
            .unwrap()
            .proofs;
        assert!(!ps.is_empty(), "{s} has no proof");
        let i = ps.iter().position(|p| p.rule != Rule::Id).unwrap_or(0);
        ps.swap_remove(i)
    }

    fn run(p: &Proof) -> Proof {
        check_proof(p).unwrap();
        let (q, trace) = eliminate(p).unwrap();
        assert!(q.is_cut_free());
        check_proof(&q).unwrap();
        assert_eq!(q.conclusion, p.conclusion);
        for s in &trace {
            assert!(s.degrees_after.iter().all(|&d| d < s.degree_before), "{s:?}");
        }
        q
    }

    #[test]
    fn trivial_degree_and_axiom_case() {
        let n = parse_type("N").unwrap();
        let c = splice_cut(Proof::id(&n), Proof::id(&n), &ItemAddr::top(0)).unwrap();
        assert_eq!(degree(&c), Some(0));
        let (q, trace) = eliminate(&c).unwrap();
        assert_eq!(q, Proof::id(&n));
        assert_eq!(trace.len(), 1);
        assert_eq!(trace[0].case, "axiom-left");
    }

    #[test]
    fn cut_free_input_is_unchanged() {
        let p = prove("N, N\\S => S");
        assert_eq!(eliminate(&p).unwrap(), (p.clone(), vec![]));
        assert_eq!(reduce_once(&p).unwrap_err(), CutElimError::NoCut);
    }

    #[test]
    fn idiom_subproof_splice() {
        let p1 = prove("N/CN, CN => N");
        let p2 = prove("N, (N\\S)^N{N} => S");
        let c = splice_cut(p1, p2, &ItemAddr::new(vec![crate::matcher::Step { item: 1, filler: 0 }], 0)).unwrap();
        assert_eq!(c.conclusion, parse_sequent("N, (N\\S)^N{N/CN, CN} => S").unwrap());
        run(&c);
    }

    #[test]
    fn principal_cases() {
        let cases = [
            ("N => S/(N\\S)", "S/(N\\S), N\\S => S", 0),
            ("N => (S/N)\\S", "S/N, (S/N)\\S => S", 1),
            ("N, N => N*N", "N*N => N*N", 0),
            ("(N\\S)/N, [] => (N\\S)^N","N, (N\\S)^N{N} => S", 1),
            ("N => (S^N)!S", "(S^N)!S, N\\S => S", 0),
            ("N\\S => (S^N)(o)I", "(S^N)(o)I => (S^N)(o)I", 0),
            ("=> I", "I, N => N", 0),
            ("[] => J", "J{[]} => J", 0),
        ];
        for (l, r, at) in cases {
            let p1 = prove(l);
            let p2 = prove(r);
            let c = splice_cut(p1, p2, &ItemAddr::top(at)).unwrap();
            let (q, step) = reduce_once(&c).unwrap();
            check_proof(&q).unwrap();
            assert!(step.case.starts_with("principal") || step.case.starts_with("permute"), "{l} | {r}: {step:?}");
            run(&c);
        }
    }

    #[test]
    fn degree_formula() {
        let p1 = prove("N/CN, CN => N");
        let p2 = prove("N, N\\S => S");
        let c = splice_cut(p1, p2, &ItemAddr::top(0)).unwrap();
        // |N/CN, CN| + |N\S| + |N| + |S|
        assert_eq!(degree(&c), Some(1 + 1));
    }

    #[test]
    fn nested_cuts() {
        let p = prove("N, (N\\S)/N, N => S");
        let fx = spliced_fixtures(&p, 20);
        assert!(fx.len() >= 3);
        for f in &fx {
            run(f);
            let again = splice_cut(f.clone(), Proof::id(&f.conclusion.succ), &ItemAddr::top(0)).unwrap();
            assert_eq!(again.count_cuts(), 2);
            run(&again);
        }
    }
}
