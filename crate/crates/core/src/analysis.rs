//! Parsing as deduction: lexical insertion, proof search and readings for
//! a token string.

use std::time::{Duration, Instant};

use crate::lexicon::Lexicon;
use crate::proof::Proof;
use crate::search::{Prover, Timeout};
use crate::semantics::{readings, ComposeError, Normal, SemTerm};
use crate::syntax::{Config, Sequent, Type};

#[derive(Clone, Debug)]
pub struct Options {
    pub goal: Type,
    pub max_proofs: usize,
    pub timeout: Option<Duration>,
    pub normal: Normal,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            goal: Type::atom("S"),
            max_proofs: 1000,
            timeout: None,
            normal: Normal::Beta,
        }
    }
}

/// One lexical insertion and its derivations.
#[derive(Clone, Debug)]
pub struct Candidate {
    /// Inserted antecedent; occurrence labels are lexicon entry indices.
    pub config: Config,
    pub sequent: Sequent,
    /// Lexical meanings of the occurrences, in preorder.
    pub labels: Vec<SemTerm>,
    /// Total number of cut-free proofs.
    pub total: u128,
    /// Up to `max_proofs` proofs in search order.
    pub proofs: Vec<Proof>,
    /// Distinct normal readings with the number of proofs for each.
    pub readings: Vec<(SemTerm, u128)>,
}

#[derive(Clone, Debug, Default)]
pub struct Analysis {
    pub tokens: Vec<String>,
    pub unknown: Vec<String>,
    /// Number of lexical insertions tried.
    pub insertions: usize,
    /// Insertions with at least one proof.
    pub candidates: Vec<Candidate>,
    pub elapsed: Duration,
}

impl Analysis {
    /// Distinct readings over all candidates, with summed proof counts, in
    /// order of first appearance.
    pub fn readings(&self) -> Vec<(SemTerm, u128)> {
        let mut out: Vec<(SemTerm, u128)> = Vec::new();
        for c in &self.candidates {
            for (t, n) in &c.readings {
                match out.iter_mut().find(|(u, _)| u == t) {
                    Some(e) => e.1 = e.1.saturating_add(*n),
                    None => out.push((t.clone(), *n)),
                }
            }
        }
        out
    }

    pub fn truncated(&self) -> bool {
        self.candidates
            .iter()
            .any(|c| c.total > c.proofs.len() as u128)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Timeout(#[from] Timeout),
    #[error(transparent)]
    Compose(#[from] ComposeError),
}

/// Runs every lexical insertion of `tokens` against the goal.
pub fn analyze(lex: &Lexicon, tokens: &[String], opts: &Options) -> Result<Analysis, AnalysisError> {
    let start = Instant::now();
    let mut out = Analysis {
        tokens: tokens.to_vec(),
        unknown: lex.unknown_tokens(tokens),
        ..Analysis::default()
    };
    let mut prover = Prover::with_timeout(opts.timeout);
    for config in lex.insertions(tokens) {
        out.insertions += 1;
        let sequent = Sequent::new(config.stripped(), opts.goal.clone());
        if sequent.validate().is_err() || !prover.provable(&sequent)? {
            continue;
        }
        let labels = lex.terms_of(&config).expect("insertion labels are entry indices");
        let total = prover.count(&sequent)?;
        let proofs = prover.proofs(&sequent, opts.max_proofs);
        let readings = readings(&prover, &sequent, &labels, opts.normal)?
            .into_iter()
            .collect();
        out.candidates.push(Candidate {
            config,
            sequent,
            labels,
            total,
            proofs,
            readings,
        });
    }
    out.elapsed = start.elapsed();
    Ok(out)
}
