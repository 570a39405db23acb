//! Proof trees, forward rule application and the proof checker.
//!
//! Rule metadata is stored on the premise side: for rules that act on an
//! antecedent position, `meta.span` addresses that position in the premise
//! named by [`Rule::meta_premise`]. The checker rebuilds every conclusion
//! from premises and metadata with [`infer`], which never consults the
//! backward search code.

use std::fmt;

use serde_json::{json, Value};
use thiserror::Error;

use crate::matcher::{self, ItemAddr, SpanRef, Step};
use crate::syntax::{parse_sequent, vector_item, Config, Item, Sequent, Type};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Rule {
    Id,
    UnderL,
    UnderR,
    OverL,
    OverR,
    ProdL,
    ProdR,
    IL,
    IR,
    InfixL,
    InfixR,
    ExtractL,
    ExtractR,
    DiscProdL,
    DiscProdR,
    JL,
    JR,
    Cut,
}

pub const ALL_RULES: [Rule; 18] = [
    Rule::Id,
    Rule::UnderL,
    Rule::UnderR,
    Rule::OverL,
    Rule::OverR,
    Rule::ProdL,
    Rule::ProdR,
    Rule::IL,
    Rule::IR,
    Rule::InfixL,
    Rule::InfixR,
    Rule::ExtractL,
    Rule::ExtractR,
    Rule::DiscProdL,
    Rule::DiscProdR,
    Rule::JL,
    Rule::JR,
    Rule::Cut,
];

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::Id => "id",
            Rule::UnderL => "\\L",
            Rule::UnderR => "\\R",
            Rule::OverL => "/L",
            Rule::OverR => "/R",
            Rule::ProdL => "*L",
            Rule::ProdR => "*R",
            Rule::IL => "IL",
            Rule::IR => "IR",
            Rule::InfixL => "!L",
            Rule::InfixR => "!R",
            Rule::ExtractL => "^L",
            Rule::ExtractR => "^R",
            Rule::DiscProdL => "(o)L",
            Rule::DiscProdR => "(o)R",
            Rule::JL => "JL",
            Rule::JR => "JR",
            Rule::Cut => "Cut",
        }
    }

    pub fn from_name(s: &str) -> Option<Rule> {
        ALL_RULES.iter().copied().find(|r| r.name() == s)
    }

    pub fn arity(self) -> usize {
        match self {
            Rule::Id | Rule::IR | Rule::JR => 0,
            Rule::UnderL
            | Rule::OverL
            | Rule::ProdR
            | Rule::InfixL
            | Rule::ExtractL
            | Rule::DiscProdR
            | Rule::Cut => 2,
            _ => 1,
        }
    }

    pub fn is_left(self) -> bool {
        matches!(
            self,
            Rule::UnderL
                | Rule::OverL
                | Rule::ProdL
                | Rule::IL
                | Rule::InfixL
                | Rule::ExtractL
                | Rule::DiscProdL
                | Rule::JL
        )
    }

    pub fn has_index(self) -> bool {
        matches!(
            self,
            Rule::InfixL
                | Rule::InfixR
                | Rule::ExtractL
                | Rule::ExtractR
                | Rule::DiscProdL
                | Rule::DiscProdR
        )
    }

    /// The premise whose antecedent `meta.span` points into, if any.
    pub fn meta_premise(self) -> Option<usize> {
        match self {
            Rule::UnderL | Rule::OverL | Rule::InfixL | Rule::ExtractL | Rule::Cut => Some(1),
            Rule::ProdL | Rule::DiscProdL | Rule::IL | Rule::JL | Rule::ExtractR => Some(0),
            _ => None,
        }
    }

    /// For left rules, the premise that carries the conclusion's succedent.
    pub fn major_premise(self) -> usize {
        match self {
            Rule::UnderL | Rule::OverL | Rule::InfixL | Rule::ExtractL | Rule::Cut => 1,
            _ => 0,
        }
    }

    pub fn to_latex(self, k: Option<usize>) -> String {
        let idx = match k {
            Some(k) if k != 1 => format!("_{{{k}}}"),
            _ => String::new(),
        };
        match self {
            Rule::Id => "id".into(),
            Rule::UnderL => "\\backslash L".into(),
            Rule::UnderR => "\\backslash R".into(),
            Rule::OverL => "/L".into(),
            Rule::OverR => "/R".into(),
            Rule::ProdL => "\\bullet L".into(),
            Rule::ProdR => "\\bullet R".into(),
            Rule::IL => "IL".into(),
            Rule::IR => "IR".into(),
            Rule::JL => "JL".into(),
            Rule::JR => "JR".into(),
            Rule::Cut => "Cut".into(),
            Rule::InfixL => format!("{{\\downarrow}}{idx}L"),
            Rule::InfixR => format!("{{\\downarrow}}{idx}R"),
            Rule::ExtractL => format!("{{\\uparrow}}{idx}L"),
            Rule::ExtractR => format!("{{\\uparrow}}{idx}R"),
            Rule::DiscProdL => format!("{{\\odot}}{idx}L"),
            Rule::DiscProdR => format!("{{\\odot}}{idx}R"),
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Meta {
    pub span: Option<SpanRef>,
    pub k: Option<usize>,
}

impl Meta {
    pub fn none() -> Meta {
        Meta::default()
    }

    pub fn at(a: &ItemAddr) -> Meta {
        Meta {
            span: Some(SpanRef::of_item(a)),
            k: None,
        }
    }

    pub fn span(s: SpanRef) -> Meta {
        Meta {
            span: Some(s),
            k: None,
        }
    }

    pub fn with_k(mut self, k: usize) -> Meta {
        self.k = Some(k);
        self
    }

    pub fn index(k: usize) -> Meta {
        Meta::none().with_k(k)
    }

    /// The addressed item, when the span covers exactly one.
    pub fn item(&self) -> Option<ItemAddr> {
        let s = self.span.as_ref()?;
        (s.end == s.start + 1).then(|| ItemAddr::new(s.path.clone(), s.start))
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Proof {
    pub rule: Rule,
    pub meta: Meta,
    pub conclusion: Sequent,
    pub premises: Vec<Proof>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0}")]
pub struct InferError(pub String);

fn ierr<T>(msg: impl Into<String>) -> Result<T, InferError> {
    Err(InferError(msg.into()))
}

/// Location of a node: premise indices from the root.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct NodePath(pub Vec<usize>);

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "root")?;
        for i in &self.0 {
            write!(f, ".{i}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid node {node} ({rule}): {msg}")]
pub struct CheckError {
    pub node: NodePath,
    pub rule: String,
    pub msg: String,
}

fn valid(t: Type) -> Result<Type, InferError> {
    t.validate().map_err(|e| InferError(e.to_string()))?;
    Ok(t)
}

fn need_k(meta: &Meta) -> Result<usize, InferError> {
    match meta.k {
        Some(k) if k >= 1 => Ok(k),
        _ => ierr("missing wrap index k"),
    }
}

fn need_item<'a>(c: &'a Config, meta: &Meta) -> Result<(ItemAddr, &'a Item), InferError> {
    let a = meta
        .item()
        .ok_or_else(|| InferError("missing item address".into()))?;
    match matcher::get(c, &a) {
        Some(it) if !it.is_sep() => Ok((a, it)),
        Some(_) => ierr(format!("address {a} is a separator")),
        None => ierr(format!("address {a} out of range")),
    }
}

fn wrap_err(e: impl fmt::Display) -> InferError {
    InferError(e.to_string())
}

/// Replaces the hole item `C{ds}` of `delta` by `gen_wrap(g, ds)`.
fn plug(delta: &Config, hole: &ItemAddr, g: &Config, ds: &[Config]) -> Result<Config, InferError> {
    let filled = g.gen_wrap(ds).map_err(wrap_err)?;
    matcher::replace_item(delta, hole, &filled).map_err(wrap_err)
}

/// The conclusion of the axiom `vect(ty) => ty`.
pub fn axiom(ty: &Type) -> Sequent {
    Sequent::new(Config::vector(ty), ty.clone())
}

/// Forward application of a rule: the conclusion determined by the premises
/// and metadata. Labels on premise items are carried over; items created by
/// the rule are unlabelled.
pub fn infer(rule: Rule, meta: &Meta, premises: &[&Sequent]) -> Result<Sequent, InferError> {
    if premises.len() != rule.arity() {
        return ierr(format!(
            "{rule} takes {} premises, got {}",
            rule.arity(),
            premises.len()
        ));
    }
    match rule {
        Rule::Id => ierr("identity axioms are checked against their conclusion"),
        Rule::IR => Ok(Sequent::new(Config::empty(), Type::I)),
        Rule::JR => Ok(Sequent::new(Config::sep(), Type::J)),
        Rule::UnderL | Rule::OverL | Rule::InfixL | Rule::ExtractL | Rule::Cut => {
            let (p1, p2) = (premises[0], premises[1]);
            let (hole, it) = need_item(&p2.ante, meta)?;
            let c = it.ty().unwrap().clone();
            let ds = it.fillers();
            let g = match rule {
                Rule::Cut => {
                    if c != p1.succ {
                        return ierr(format!("cut formula {} does not match hole {c}", p1.succ));
                    }
                    p1.ante.clone()
                }
                Rule::UnderL => {
                    let f = valid(Type::under(p1.succ.clone(), c))?;
                    let mut g = p1.ante.clone();
                    g.0.push(vector_item(&f));
                    g
                }
                Rule::OverL => {
                    let f = valid(Type::over(c, p1.succ.clone()))?;
                    let mut g = Config(vec![vector_item(&f)]);
                    g.0.extend(p1.ante.0.iter().cloned());
                    g
                }
                Rule::InfixL => {
                    let k = need_k(meta)?;
                    let f = valid(Type::infix(k, p1.succ.clone(), c))?;
                    p1.ante.wrap_at(k, &Config::vector(&f)).map_err(wrap_err)?
                }
                Rule::ExtractL => {
                    let k = need_k(meta)?;
                    let f = valid(Type::extract(k, c, p1.succ.clone()))?;
                    Config::vector(&f).wrap_at(k, &p1.ante).map_err(wrap_err)?
                }
                _ => unreachable!(),
            };
            Ok(Sequent::new(plug(&p2.ante, &hole, &g, ds)?, p2.succ.clone()))
        }
        Rule::ProdL => {
            let p = premises[0];
            let (a_addr, a) = need_item(&p.ante, meta)?;
            let b_addr = ItemAddr::new(a_addr.path.clone(), a_addr.index + 1);
            let b = match matcher::get(&p.ante, &b_addr) {
                Some(b) if !b.is_sep() => b,
                _ => return ierr("product left needs two adjacent type occurrences"),
            };
            let f = valid(Type::prod(a.ty().unwrap().clone(), b.ty().unwrap().clone()))?;
            let mut fillers = a.fillers().to_vec();
            fillers.extend(b.fillers().iter().cloned());
            let merged = Config(vec![Item::occurrence(f, fillers, None)]);
            let span = SpanRef::new(a_addr.path.clone(), a_addr.index, a_addr.index + 2);
            let ante = matcher::replace(&p.ante, &span, &merged).map_err(wrap_err)?;
            Ok(Sequent::new(ante, p.succ.clone()))
        }
        Rule::DiscProdL => {
            let p = premises[0];
            let k = need_k(meta)?;
            let (addr, a) = need_item(&p.ante, meta)?;
            let fs = a.fillers();
            let inner = match fs.get(k - 1) {
                Some(fl) if fl.len() == 1 && !fl.0[0].is_sep() => &fl.0[0],
                _ => return ierr(format!("filler {k} is not a single type occurrence")),
            };
            let f = valid(Type::disc_prod(
                k,
                a.ty().unwrap().clone(),
                inner.ty().unwrap().clone(),
            ))?;
            let mut fillers = fs[..k - 1].to_vec();
            fillers.extend(inner.fillers().iter().cloned());
            fillers.extend(fs[k..].iter().cloned());
            let merged = Config(vec![Item::occurrence(f, fillers, None)]);
            let ante = matcher::replace_item(&p.ante, &addr, &merged).map_err(wrap_err)?;
            Ok(Sequent::new(ante, p.succ.clone()))
        }
        Rule::IL => {
            let p = premises[0];
            let s = meta
                .span
                .as_ref()
                .filter(|s| s.is_empty())
                .ok_or_else(|| InferError("IL needs an empty span".into()))?;
            let ante = matcher::replace(&p.ante, s, &Config(vec![Item::leaf(Type::I)]))
                .map_err(wrap_err)?;
            Ok(Sequent::new(ante, p.succ.clone()))
        }
        Rule::JL => {
            let p = premises[0];
            let s = meta
                .span
                .as_ref()
                .ok_or_else(|| InferError("JL needs a span".into()))?;
            let inner = matcher::span_items(&p.ante, s)
                .ok_or_else(|| InferError(format!("span {s} out of range")))?;
            let j = Item::Hyper {
                ty: Type::J,
                fillers: vec![Config(inner.to_vec())],
                label: None,
            };
            let ante = matcher::replace(&p.ante, s, &Config(vec![j])).map_err(wrap_err)?;
            Ok(Sequent::new(ante, p.succ.clone()))
        }
        Rule::UnderR | Rule::OverR => {
            let p = premises[0];
            let pos = if rule == Rule::UnderR {
                0
            } else {
                p.ante.len().wrapping_sub(1)
            };
            let it = match p.ante.0.get(pos) {
                Some(it) if it.is_vector() => it,
                _ => return ierr("premise does not have the required vector at its edge"),
            };
            let a = it.ty().unwrap().clone();
            let mut rest = p.ante.clone();
            rest.0.remove(pos);
            let f = if rule == Rule::UnderR {
                Type::under(a, p.succ.clone())
            } else {
                Type::over(p.succ.clone(), a)
            };
            Ok(Sequent::new(rest, valid(f)?))
        }
        Rule::InfixR => {
            let p = premises[0];
            let k = need_k(meta)?;
            let it = match p.ante.0.as_slice() {
                [it @ Item::Hyper { .. }] => it,
                _ => return ierr("premise antecedent is not a single hyperleaf"),
            };
            let fs = it.fillers();
            if k > fs.len() {
                return ierr(format!("index {k} exceeds hyperleaf arity {}", fs.len()));
            }
            if fs
                .iter()
                .enumerate()
                .any(|(i, f)| i != k - 1 && f.0 != [Item::Sep])
            {
                return ierr("hyperleaf fillers other than the wrapped one must be separators");
            }
            let f = valid(Type::infix(k, it.ty().unwrap().clone(), p.succ.clone()))?;
            Ok(Sequent::new(fs[k - 1].clone(), f))
        }
        Rule::ExtractR => {
            let p = premises[0];
            let k = need_k(meta)?;
            let (addr, it) = need_item(&p.ante, meta)?;
            if !it.is_vector() {
                return ierr("extracted occurrence is not a vector");
            }
            let b = it.ty().unwrap().clone();
            let ante = matcher::replace_item(&p.ante, &addr, &Config::sep()).map_err(wrap_err)?;
            let before = matcher::seps_before(&ante, &addr.path, addr.index);
            if before != k - 1 {
                return ierr(format!(
                    "extraction site is separator {} but index is {k}",
                    before + 1
                ));
            }
            let f = valid(Type::extract(k, p.succ.clone(), b))?;
            Ok(Sequent::new(ante, f))
        }
        Rule::ProdR => {
            let (p1, p2) = (premises[0], premises[1]);
            let f = valid(Type::prod(p1.succ.clone(), p2.succ.clone()))?;
            Ok(Sequent::new(p1.ante.clone().concat(p2.ante.clone()), f))
        }
        Rule::DiscProdR => {
            let (p1, p2) = (premises[0], premises[1]);
            let k = need_k(meta)?;
            let f = valid(Type::disc_prod(k, p1.succ.clone(), p2.succ.clone()))?;
            let ante = p1.ante.wrap_at(k, &p2.ante).map_err(wrap_err)?;
            Ok(Sequent::new(ante, f))
        }
    }
}

impl Proof {
    pub fn new(rule: Rule, meta: Meta, conclusion: Sequent, premises: Vec<Proof>) -> Proof {
        Proof {
            rule,
            meta,
            conclusion,
            premises,
        }
    }

    pub fn id(ty: &Type) -> Proof {
        Proof::new(Rule::Id, Meta::none(), axiom(ty), Vec::new())
    }

    /// Builds a node, computing its conclusion forward.
    pub fn build(rule: Rule, meta: Meta, premises: Vec<Proof>) -> Result<Proof, InferError> {
        let ps: Vec<&Sequent> = premises.iter().map(|p| &p.conclusion).collect();
        let conclusion = infer(rule, &meta, &ps)?.stripped();
        Ok(Proof::new(rule, meta, conclusion, premises))
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Proof::size).sum::<usize>()
    }

    pub fn height(&self) -> usize {
        1 + self.premises.iter().map(Proof::height).max().unwrap_or(0)
    }

    pub fn is_cut_free(&self) -> bool {
        self.rule != Rule::Cut && self.premises.iter().all(Proof::is_cut_free)
    }

    pub fn count_cuts(&self) -> usize {
        usize::from(self.rule == Rule::Cut) + self.premises.iter().map(Proof::count_cuts).sum::<usize>()
    }

    /// Visits every node in preorder.
    pub fn for_each<'a>(&'a self, f: &mut impl FnMut(&'a Proof)) {
        f(self);
        for p in &self.premises {
            p.for_each(f);
        }
    }

    pub fn node(&self, path: &[usize]) -> Option<&Proof> {
        match path.split_first() {
            None => Some(self),
            Some((i, rest)) => self.premises.get(*i)?.node(rest),
        }
    }

    pub fn node_mut(&mut self, path: &[usize]) -> Option<&mut Proof> {
        match path.split_first() {
            None => Some(self),
            Some((i, rest)) => self.premises.get_mut(*i)?.node_mut(rest),
        }
    }
}

/// Recomputes one node's conclusion and compares it with the stored one.
pub fn check_node(p: &Proof) -> Result<(), String> {
    p.conclusion.validate()?;
    let expected = if p.rule == Rule::Id {
        if !p.premises.is_empty() {
            return Err("identity axiom has premises".into());
        }
        axiom(&p.conclusion.succ)
    } else {
        let ps: Vec<&Sequent> = p.premises.iter().map(|q| &q.conclusion).collect();
        infer(p.rule, &p.meta, &ps).map_err(|e| e.0)?
    };
    if expected.stripped() != p.conclusion.stripped() {
        return Err(format!(
            "premises yield `{expected}` but node states `{}`",
            p.conclusion
        ));
    }
    Ok(())
}

/// Checks every node, premises before conclusions, and reports the first
/// failing node.
pub fn check_proof(p: &Proof) -> Result<(), CheckError> {
    fn go(p: &Proof, path: &mut Vec<usize>) -> Result<(), CheckError> {
        for (i, q) in p.premises.iter().enumerate() {
            path.push(i);
            go(q, path)?;
            path.pop();
        }
        check_node(p).map_err(|msg| CheckError {
            node: NodePath(path.clone()),
            rule: p.rule.name().to_string(),
            msg,
        })
    }
    go(p, &mut Vec::new())
}

/// True when every type in the proof is a subformula of a type in the
/// endsequent.
pub fn subformula_check(p: &Proof) -> bool {
    let mut allowed = std::collections::HashSet::new();
    let end = &p.conclusion;
    for t in end.ante.types().into_iter().chain(std::iter::once(&end.succ)) {
        allowed.extend(t.subformulas());
    }
    let mut ok = true;
    p.for_each(&mut |q| {
        let s = &q.conclusion;
        if !allowed.contains(&s.succ) || s.ante.types().iter().any(|t| !allowed.contains(t)) {
            ok = false;
        }
    });
    ok
}

/// Total weight of a node's conclusion minus the total weight of its
/// premises. Equals 1 for every rule except identity and cut.
pub fn weight_drop(p: &Proof) -> isize {
    p.conclusion.weight() as isize
        - p.premises.iter().map(|q| q.conclusion.weight() as isize).sum::<isize>()
}

// ---------------------------------------------------------------------------
// JSON

fn path_json(p: &[Step]) -> Value {
    Value::Array(p.iter().map(|s| json!([s.item, s.filler])).collect())
}

impl Proof {
    pub fn to_json(&self) -> Value {
        let mut meta = serde_json::Map::new();
        if let Some(s) = &self.meta.span {
            meta.insert("path".into(), path_json(&s.path));
            meta.insert("span".into(), json!([s.start, s.end]));
        }
        if let Some(k) = self.meta.k {
            meta.insert("k".into(), json!(k));
        }
        if let (Some(mp), Some(a)) = (self.rule.meta_premise(), self.meta.item()) {
            if let Some(it) = self
                .premises
                .get(mp)
                .and_then(|q| matcher::get(&q.conclusion.ante, &a))
            {
                if !it.fillers().is_empty() {
                    meta.insert(
                        "extraction".into(),
                        Value::Array(it.fillers().iter().map(|f| json!(f.to_string())).collect()),
                    );
                }
            }
        }
        json!({
            "rule": self.rule.name(),
            "conclusion": self.conclusion.to_string(),
            "meta": Value::Object(meta),
            "premises": self.premises.iter().map(Proof::to_json).collect::<Vec<_>>(),
        })
    }

    /// Reads a proof from JSON. Errors name the offending node.
    pub fn from_json(v: &Value) -> Result<Proof, CheckError> {
        fn go(v: &Value, path: &mut Vec<usize>) -> Result<Proof, CheckError> {
            let fail = |rule: &str, msg: String| CheckError {
                node: NodePath(path.clone()),
                rule: rule.to_string(),
                msg,
            };
            let rule_name = v.get("rule").and_then(Value::as_str).unwrap_or("?");
            let rule = Rule::from_name(rule_name)
                .ok_or_else(|| fail(rule_name, format!("unknown rule `{rule_name}`")))?;
            let text = v
                .get("conclusion")
                .and_then(Value::as_str)
                .ok_or_else(|| fail(rule_name, "missing conclusion".into()))?;
            let conclusion = parse_sequent(text)
                .map_err(|e| fail(rule_name, format!("bad conclusion `{text}`: {e}")))?;
            let mut meta = Meta::none();
            if let Some(m) = v.get("meta").filter(|m| !m.is_null()) {
                if let Some(k) = m.get("k").filter(|k| !k.is_null()) {
                    meta.k = Some(
                        k.as_u64()
                            .ok_or_else(|| fail(rule_name, "meta.k is not a number".into()))?
                            as usize,
                    );
                }
                if let Some(sp) = m.get("span").filter(|s| !s.is_null()) {
                    let pair = sp
                        .as_array()
                        .filter(|a| a.len() == 2)
                        .and_then(|a| Some((a[0].as_u64()?, a[1].as_u64()?)))
                        .ok_or_else(|| fail(rule_name, "meta.span must be [start, end]".into()))?;
                    let mut steps = Vec::new();
                    if let Some(ps) = m.get("path").and_then(Value::as_array) {
                        for s in ps {
                            let st = s
                                .as_array()
                                .filter(|a| a.len() == 2)
                                .and_then(|a| Some((a[0].as_u64()?, a[1].as_u64()?)))
                                .ok_or_else(|| {
                                    fail(rule_name, "meta.path steps must be [item, filler]".into())
                                })?;
                            steps.push(Step {
                                item: st.0 as usize,
                                filler: st.1 as usize,
                            });
                        }
                    }
                    meta.span = Some(SpanRef::new(steps, pair.0 as usize, pair.1 as usize));
                }
            }
            let mut premises = Vec::new();
            if let Some(ps) = v.get("premises") {
                let arr = ps
                    .as_array()
                    .ok_or_else(|| fail(rule_name, "premises must be an array".into()))?;
                for (i, q) in arr.iter().enumerate() {
                    path.push(i);
                    premises.push(go(q, path)?);
                    path.pop();
                }
            }
            Ok(Proof::new(rule, meta, conclusion, premises))
        }
        go(v, &mut Vec::new())
    }

    /// Indented outline, conclusion first and premises below.
    pub fn to_text(&self) -> String {
        fn go(p: &Proof, depth: usize, out: &mut String) {
            out.push_str(&"  ".repeat(depth));
            out.push_str(&p.conclusion.to_string());
            out.push_str("   [");
            out.push_str(p.rule.name());
            if let Some(k) = p.meta.k.filter(|k| *k != 1) {
                out.push_str(&k.to_string());
            }
            out.push_str("]\n");
            for q in &p.premises {
                go(q, depth + 1, out);
            }
        }
        let mut out = String::new();
        go(self, 0, &mut out);
        out
    }

    /// A `prooftree` environment for the bussproofs package.
    pub fn to_latex(&self) -> String {
        fn go(p: &Proof, out: &mut String) {
            for q in &p.premises {
                go(q, out);
            }
            if p.premises.is_empty() {
                out.push_str("\\AxiomC{}\n");
            }
            let cmd = match p.premises.len() {
                0 | 1 => "UnaryInfC",
                2 => "BinaryInfC",
                _ => "TrinaryInfC",
            };
            out.push_str(&format!(
                "\\RightLabel{{\\scriptsize ${}$}}\n\\{cmd}{{${}$}}\n",
                p.rule.to_latex(p.meta.k),
                p.conclusion.to_latex()
            ));
        }
        let mut out = String::from("\\begin{prooftree}\n");
        go(self, &mut out);
        out.push_str("\\end{prooftree}\n");
        out
    }
}

/// Wraps rendered proof trees into a standalone LaTeX document.
pub fn latex_document(bodies: &[String]) -> String {
    let mut out = String::from(
        "\\documentclass{article}\n\\usepackage[landscape,margin=1cm]{geometry}\n\\usepackage{amsmath,amssymb,graphicx}\n\\usepackage{bussproofs}\n\\begin{document}\n",
    );
    for b in bodies {
        out.push_str("\\resizebox{\\linewidth}{!}{\\begin{minipage}{2\\linewidth}\n");
        out.push_str(b);
        out.push_str("\\end{minipage}}\n\n");
    }
    out.push_str("\\end{document}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_config, parse_type};

    fn seq(s: &str) -> Sequent {
        parse_sequent(s).unwrap()
    }

    fn id(s: &str) -> Proof {
        Proof::id(&parse_type(s).unwrap())
    }

    #[test]
    fn rule_names_round_trip() {
        for r in ALL_RULES {
            assert_eq!(Rule::from_name(r.name()), Some(r));
        }
    }

    #[test]
    fn under_left_builds_lambek_application() {
        let p = Proof::build(Rule::UnderL, Meta::at(&ItemAddr::top(0)), vec![id("N"), id("S")])
            .unwrap();
        assert_eq!(p.conclusion, seq("N, N\\S => S"));
        assert!(check_proof(&p).is_ok());
    }

    /// The idiom derivation, assembled by hand.
    #[test]
    fn idiom_proof_checks() {
        let np = Proof::build(Rule::OverL, Meta::at(&ItemAddr::top(0)), vec![id("CN"), id("N")])
            .unwrap();
        assert_eq!(np.conclusion, seq("N/CN, CN => N"));
        let vp = Proof::build(Rule::UnderL, Meta::at(&ItemAddr::top(0)), vec![id("N"), id("S")])
            .unwrap();
        let p = Proof::build(
            Rule::ExtractL,
            Meta::at(&ItemAddr::top(1)).with_k(1),
            vec![np, vp],
        )
        .unwrap();
        assert_eq!(p.conclusion, seq("N, (N\\S)^N{N/CN, CN} => S"));
        assert!(check_proof(&p).is_ok());
        assert!(subformula_check(&p));
    }

    #[test]
    fn type_lifting() {
        let app = Proof::build(Rule::UnderL, Meta::at(&ItemAddr::top(0)), vec![id("N"), id("S")])
            .unwrap();
        assert_eq!(app.conclusion, seq("N, N\\S => S"));
        let lift = Proof::build(Rule::OverR, Meta::none(), vec![app]).unwrap();
        assert_eq!(lift.conclusion, seq("N => S/(N\\S)"));
    }

    #[test]
    fn tampering_is_reported_at_the_node() {
        let vp = Proof::build(Rule::UnderL, Meta::at(&ItemAddr::top(0)), vec![id("N"), id("S")])
            .unwrap();
        let mut p = Proof::build(Rule::OverR, Meta::none(), vec![vp]).unwrap();
        p.premises[0].premises[1].conclusion = seq("N => N");
        let err = check_proof(&p).unwrap_err();
        assert_eq!(err.node, NodePath(vec![0]));
        p.premises[0].premises[1].conclusion.succ = parse_type("N").unwrap();
        p.premises[0].premises[1].conclusion.ante = parse_config("S").unwrap();
        let err = check_proof(&p).unwrap_err();
        assert_eq!(err.node, NodePath(vec![0, 1]));
    }

    #[test]
    fn units_and_wrapping_rules() {
        let ir = Proof::build(Rule::IR, Meta::none(), vec![]).unwrap();
        assert_eq!(ir.conclusion, seq("0 => I"));
        let jr = Proof::build(Rule::JR, Meta::none(), vec![]).unwrap();
        assert_eq!(jr.conclusion, seq("[] => J"));
        // S => S^I via IL then ^R.
        let il = Proof::build(Rule::IL, Meta::span(SpanRef::new(vec![], 1, 1)), vec![id("S")])
            .unwrap();
        assert_eq!(il.conclusion, seq("S, I => S"));
        let up = Proof::build(Rule::ExtractR, Meta::at(&ItemAddr::top(1)).with_k(1), vec![il])
            .unwrap();
        assert_eq!(up.conclusion, seq("S, [] => S^I"));
        let jl = Proof::build(Rule::JL, Meta::span(SpanRef::new(vec![], 0, 2)), vec![up.clone()])
            .unwrap();
        assert_eq!(jl.conclusion, seq("J{S, []} => S^I"));
        let dn = Proof::build(Rule::InfixR, Meta::index(1), vec![Proof::id(&parse_type("J").unwrap())])
            .unwrap();
        assert_eq!(dn.conclusion, seq("[] => J!J"));
        let odot = Proof::build(Rule::DiscProdR, Meta::index(1), vec![up, id("N")]).unwrap();
        assert_eq!(odot.conclusion, seq("S, N => (S^I)(o)N"));
        let odl = Proof::build(
            Rule::DiscProdL,
            Meta::at(&ItemAddr::top(0)).with_k(1),
            vec![Proof::id(&parse_type("(S^I)(o)N").unwrap())],
        );
        // The identity's antecedent is a leaf, so no filler holds N.
        assert!(odl.is_err());
    }

    #[test]
    fn json_round_trip() {
        let p = Proof::build(Rule::UnderL, Meta::at(&ItemAddr::top(0)), vec![id("N"), id("S")])
            .unwrap();
        let v = p.to_json();
        assert_eq!(Proof::from_json(&v).unwrap(), p);
        let mut bad = v.clone();
        bad["premises"][1]["rule"] = json!("XX");
        assert_eq!(Proof::from_json(&bad).unwrap_err().node, NodePath(vec![1]));
    }
}
