//! Lexicon files, lookup, and lexical insertion.
//!
//! A lexical surface is a token sequence in which the token `1` marks a
//! separator. Insertion covers an input token string with entries; the
//! material between the segments of a discontinuous entry becomes the
//! fillers of its hyperleaf.

use std::collections::{BTreeSet, HashMap};
use std::path::Path;

use thiserror::Error;

use crate::semantics::{check_type, parse_sem_type, parse_term, sem_type, AtomTable, SemTerm, TypeEnv};
use crate::syntax::{parse_type, Config, Item, Label, Type};

/// The lexicon shipped with the crate.
pub const BUILTIN_LEXICON: &str = include_str!("../data/lexicon.txt");

/// Token standing for a separator.
pub const SEPARATOR: &str = "1";

#[derive(Clone, Debug, PartialEq)]
pub struct LexEntry {
    pub surface: Vec<String>,
    pub ty: Type,
    pub term: SemTerm,
    /// Line number in the source file (1-based).
    pub line: usize,
}

impl LexEntry {
    /// The maximal separator-free pieces of the surface.
    pub fn segments(&self) -> Vec<&[String]> {
        self.surface.split(|t| t == SEPARATOR).collect()
    }

    pub fn is_discontinuous(&self) -> bool {
        self.surface.iter().any(|t| t == SEPARATOR)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("lexicon line {line}: {msg}")]
pub struct LexiconError {
    pub line: usize,
    pub msg: String,
}

#[derive(Clone, Debug, Default)]
pub struct Lexicon {
    pub atoms: AtomTable,
    pub entries: Vec<LexEntry>,
    by_first: HashMap<String, Vec<usize>>,
}

fn lerr<T>(line: usize, msg: impl Into<String>) -> Result<T, LexiconError> {
    Err(LexiconError {
        line,
        msg: msg.into(),
    })
}

/// Lowercases and splits on whitespace.
pub fn tokenize(s: &str) -> Vec<String> {
    s.split_whitespace().map(str::to_lowercase).collect()
}

impl Lexicon {
    /// Parses and validates lexicon text.
    pub fn parse(text: &str) -> Result<Lexicon, LexiconError> {
        let mut lex = Lexicon::default();
        let mut pending = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let l = raw.trim();
            if l.is_empty() || l.starts_with('#') {
                continue;
            }
            if let Some(rest) = l.strip_prefix("atom ") {
                let (name, st) = match rest.split_once(':') {
                    Some(p) => p,
                    None => return lerr(line, "atom line needs `atom NAME : TYPE`"),
                };
                let st = parse_sem_type(st.trim()).or_else(|e| lerr(line, e.to_string()))?;
                lex.atoms.insert(name.trim().to_string(), st);
                continue;
            }
            let parts: Vec<&str> = l.splitn(3, " : ").collect();
            if parts.len() != 3 {
                return lerr(line, "entry needs `surface : TYPE : TERM`");
            }
            pending.push((line, parts[0], parts[1], parts[2]));
        }
        for (line, surface, ty, term) in pending {
            let e = parse_entry(line, surface, ty, term, &lex.atoms)?;
            lex.add(e);
        }
        Ok(lex)
    }

    pub fn load(path: &Path) -> Result<Lexicon, LexiconError> {
        let text = std::fs::read_to_string(path).or_else(|e| lerr(0, format!("{}: {e}", path.display())))?;
        Lexicon::parse(&text)
    }

    pub fn builtin() -> Lexicon {
        Lexicon::parse(BUILTIN_LEXICON).expect("shipped lexicon is valid")
    }

    fn add(&mut self, e: LexEntry) {
        let id = self.entries.len();
        self.by_first.entry(e.surface[0].clone()).or_default().push(id);
        self.entries.push(e);
    }

    /// Entries whose surface is exactly `tokens` (separators written `1`).
    pub fn lookup(&self, tokens: &[&str]) -> Vec<&LexEntry> {
        let Some(first) = tokens.first() else {
            return Vec::new();
        };
        self.by_first
            .get(*first)
            .into_iter()
            .flatten()
            .map(|&i| &self.entries[i])
            .filter(|e| e.surface.iter().map(String::as_str).eq(tokens.iter().copied()))
            .collect()
    }

    /// Input tokens that occur in no entry.
    pub fn unknown_tokens(&self, tokens: &[String]) -> Vec<String> {
        let known: BTreeSet<&str> = self
            .entries
            .iter()
            .flat_map(|e| e.surface.iter().map(String::as_str))
            .collect();
        tokens
            .iter()
            .filter(|t| t.as_str() != SEPARATOR && !known.contains(t.as_str()))
            .cloned()
            .collect()
    }

    /// Lexical meanings of the occurrences of an inserted configuration, in
    /// preorder. Occurrence labels are entry indices.
    pub fn terms_of(&self, c: &Config) -> Option<Vec<SemTerm>> {
        c.occurrences()
            .into_iter()
            .map(|it| {
                let l = it.label()?;
                self.entries.get(l.0 as usize).map(|e| e.term.clone())
            })
            .collect()
    }

    /// All antecedents obtained by covering `tokens` exactly with entries.
    /// Each occurrence is labelled with its entry index.
    pub fn insertions(&self, tokens: &[String]) -> Vec<Config> {
        let mut memo = HashMap::new();
        let mut out: Vec<Config> = self.cover(tokens, 0, tokens.len(), &mut memo);
        let mut seen = BTreeSet::new();
        out.retain(|c| seen.insert(c.clone()));
        out
    }

    fn cover(
        &self,
        toks: &[String],
        i: usize,
        j: usize,
        memo: &mut HashMap<(usize, usize), Vec<Config>>,
    ) -> Vec<Config> {
        if i == j {
            return vec![Config::empty()];
        }
        if let Some(r) = memo.get(&(i, j)) {
            return r.clone();
        }
        let mut out = Vec::new();
        if toks[i] == SEPARATOR {
            for rest in self.cover(toks, i + 1, j, memo) {
                out.push(Config(vec![Item::Sep]).concat(rest));
            }
        }
        for &id in self.by_first.get(&toks[i]).into_iter().flatten() {
            let e = &self.entries[id];
            let segs = e.segments();
            for (fillers, end) in self.place(toks, &segs, i, j, memo) {
                let item = Item::occurrence(e.ty.clone(), fillers, Some(Label(id as u32)));
                for rest in self.cover(toks, end, j, memo) {
                    out.push(Config(vec![item.clone()]).concat(rest));
                }
            }
        }
        memo.insert((i, j), out.clone());
        out
    }

    /// Placements of `segs` starting at `i` within `..j`: the filler
    /// configurations between consecutive segments and the end position.
    fn place(
        &self,
        toks: &[String],
        segs: &[&[String]],
        i: usize,
        j: usize,
        memo: &mut HashMap<(usize, usize), Vec<Config>>,
    ) -> Vec<(Vec<Config>, usize)> {
        let seg = segs[0];
        let end = i + seg.len();
        if end > j || toks[i..end] != *seg {
            return Vec::new();
        }
        if segs.len() == 1 {
            return vec![(Vec::new(), end)];
        }
        let mut out = Vec::new();
        for next in end..j {
            let tails = self.place(toks, &segs[1..], next, j, memo);
            if tails.is_empty() {
                continue;
            }
            let fills = self.cover(toks, end, next, memo);
            for f in &fills {
                for (rest, e) in &tails {
                    let mut v = vec![f.clone()];
                    v.extend(rest.iter().cloned());
                    out.push((v, *e));
                }
            }
        }
        out
    }
}

fn parse_entry(
    line: usize,
    surface: &str,
    ty: &str,
    term: &str,
    atoms: &AtomTable,
) -> Result<LexEntry, LexiconError> {
    let surface = tokenize(surface);
    if surface.is_empty() {
        return lerr(line, "empty surface");
    }
    if surface.first().map(String::as_str) == Some(SEPARATOR)
        || surface.last().map(String::as_str) == Some(SEPARATOR)
    {
        return lerr(line, "surface may not start or end with a separator");
    }
    if surface.windows(2).any(|w| w[0] == SEPARATOR && w[1] == SEPARATOR) {
        return lerr(line, "adjacent separators leave an empty segment");
    }
    let ty = parse_type(ty.trim()).or_else(|e| lerr(line, e.to_string()))?;
    ty.validate().or_else(|e| lerr(line, e.to_string()))?;
    let seps = surface.iter().filter(|t| *t == SEPARATOR).count();
    if seps != ty.sort() {
        return lerr(
            line,
            format!("surface has {seps} separators but {ty} has sort {}", ty.sort()),
        );
    }
    let term = parse_term(term.trim()).or_else(|e| lerr(line, e.to_string()))?;
    let st = sem_type(&ty, atoms).or_else(|e| lerr(line, e.to_string()))?;
    check_type(&term, &TypeEnv::new(), &st).or_else(|e| lerr(line, format!("term does not have type {st}: {e}")))?;
    Ok(LexEntry {
        surface,
        ty,
        term,
        line,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_config;

    fn toks(s: &str) -> Vec<String> {
        tokenize(s)
    }

    #[test]
    fn builtin_loads() {
        let lex = Lexicon::builtin();
        assert_eq!(lex.atoms.len(), 5);
        assert!(lex.entries.len() >= 50);
    }

    #[test]
    fn lookup_examples() {
        let lex = Lexicon::builtin();
        assert_eq!(lex.lookup(&["and"]).len(), 2);
        assert!(lex.lookup(&["xyzzy"]).is_empty());
        assert_eq!(lex.lookup(&["did"]).len(), 1);
        assert_eq!(lex.lookup(&["did", "too"]).len(), 1);
        assert_eq!(lex.lookup(&["gave", "1", "the", "cold", "shoulder"]).len(), 1);
    }

    #[test]
    fn validation_errors_carry_lines() {
        let base = "atom N : e\natom S : t\n";
        let bad_sort = format!("{base}x 1 y 1 z : (N\\S)^N : f\n");
        let e = Lexicon::parse(&bad_sort).unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.msg.contains("sort"), "{e}");
        let ill_typed = format!("{base}\nx : N\\S : lam A. A\n");
        assert_eq!(Lexicon::parse(&ill_typed).unwrap_err().line, 4);
        assert!(Lexicon::parse(&format!("{base}1 x : (N\\S)^N : f\n")).is_err());
        assert!(Lexicon::parse(&format!("{base}x : Q : f\n")).is_err());
        assert!(Lexicon::parse("x : N\n").is_err());
        let ok = format!("{base}gave 1 the cold shoulder : (N\\S)^N : shunned\n");
        assert!(Lexicon::parse(&ok).is_ok());
    }

    #[test]
    fn idiom_insertion() {
        let lex = Lexicon::builtin();
        let ins = lex.insertions(&toks("mary gave the man the cold shoulder"));
        let shapes: Vec<String> = ins.iter().map(|c| c.stripped().to_string()).collect();
        let want = parse_config("N, (N\\S)^N{N/CN, CN}").unwrap();
        assert!(ins.iter().any(|c| c.stripped() == want), "{shapes:?}");
        let c = ins.iter().find(|c| c.stripped() == want).unwrap();
        let terms: Vec<String> = lex.terms_of(c).unwrap().iter().map(|t| t.to_string()).collect();
        assert_eq!(terms, ["m", "shunned", "iota", "man"]);
    }

    #[test]
    fn continuous_and_multiword() {
        let lex = Lexicon::builtin();
        let ins = lex.insertions(&toks("john slept"));
        assert_eq!(ins.len(), 1);
        assert_eq!(ins[0].stripped(), parse_config("N, N\\S").unwrap());
        let ins = lex.insertions(&toks("mary did too"));
        assert_eq!(ins.len(), 1);
        assert_eq!(ins[0].len(), 2);
        assert!(lex.insertions(&toks("mary xyzzy")).is_empty());
        assert_eq!(lex.unknown_tokens(&toks("mary xyzzy")), ["xyzzy"]);
    }

    #[test]
    fn separator_tokens_yield_sorted_configurations() {
        let lex = Lexicon::builtin();
        let ins = lex.insertions(&toks("1 slept"));
        assert_eq!(ins.len(), 1);
        assert_eq!(ins[0].sort(), 1);
    }

    #[test]
    fn two_separator_entries() {
        let text = "atom N : e\natom S : t\na : N : a\nb : N : b\nx 1 y 1 z : (S^N)^N : f\n";
        let lex = Lexicon::parse(text).unwrap();
        assert_eq!(lex.entries[2].segments().len(), 3);
        let ins = lex.insertions(&toks("x a y b z"));
        let want = parse_config("(S^N)^N{N : N}").unwrap();
        assert_eq!(ins.iter().map(Config::stripped).collect::<Vec<_>>(), [want.clone()]);
        let g = crate::Sequent::new(want, crate::Type::atom("S"));
        assert!(crate::search::Prover::new().provable(&g).unwrap());
    }
}
