//! Command implementations behind the `displace` binary.
//!
//! Each command returns an [`Outcome`] holding its exit code and output so
//! that tests can drive the same code paths as the executable.

use std::path::PathBuf;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value};

use displace_core::analysis::{analyze, Analysis, Options};
use displace_core::cutelim::eliminate;
use displace_core::lexicon::{tokenize, Lexicon};
use displace_core::proof::{check_proof, latex_document, CheckError, Proof};
use displace_core::search::{prove_all, Limits};
use displace_core::semantics::{extract_term, pretty, proof_term, render_term, Normal, SemTerm};
use displace_core::{parse_sequent, parse_type, Type};

/// Environment variable naming the default lexicon file.
pub const LEXICON_ENV: &str = "DISPLACE_LEXICON";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Latex,
    Json,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    /// Lexicon file; the shipped lexicon when absent.
    pub lexicon: Option<PathBuf>,
    pub goal: Type,
    pub format: Format,
    pub max_proofs: usize,
    pub timeout: Option<Duration>,
    /// Merge proofs with alpha-equal readings.
    pub dedup: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            lexicon: None,
            goal: Type::atom("S"),
            format: Format::Text,
            max_proofs: 1000,
            timeout: None,
            dedup: true,
        }
    }
}

impl RunConfig {
    pub fn with_goal(mut self, goal: &str) -> Result<RunConfig> {
        self.goal = parse_goal(goal)?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        self.goal
            .validate()
            .map_err(|e| anyhow!("goal type {}: {e}", self.goal))?;
        if self.max_proofs == 0 {
            bail!("--max-proofs must be positive");
        }
        if self.timeout == Some(Duration::ZERO) {
            bail!("--timeout must be positive");
        }
        Ok(())
    }

    pub fn load_lexicon(&self) -> Result<Lexicon> {
        match &self.lexicon {
            Some(p) => Lexicon::load(p).with_context(|| format!("loading lexicon {}", p.display())),
            None => Ok(Lexicon::builtin()),
        }
    }
}

pub fn parse_goal(s: &str) -> Result<Type> {
    let t = parse_type(s).with_context(|| format!("goal type `{s}`"))?;
    t.validate().map_err(|e| anyhow!("goal type `{s}`: {e}"))?;
    Ok(t)
}

/// Exit status and streams of one command.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn new(code: i32, stdout: String) -> Outcome {
        Outcome {
            code,
            stdout,
            stderr: String::new(),
        }
    }
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_LEXICAL_GAP: i32 = 2;

/// One distinct reading and the number of derivations behind it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reading {
    pub term: String,
    pub pretty: String,
    pub proofs: u128,
    pub sem: SemTerm,
}

impl Reading {
    fn new(sem: SemTerm, proofs: u128) -> Reading {
        Reading {
            term: render_term(&sem),
            pretty: pretty(&sem),
            proofs,
            sem,
        }
    }
}

/// Everything `parse` computes for one sentence.
#[derive(Debug)]
pub struct ParseReport {
    pub analysis: Analysis,
    /// Distinct readings when deduplicating, else one entry per listed
    /// proof.
    pub readings: Vec<Reading>,
    /// The reading of each listed proof, per candidate.
    pub proof_readings: Vec<Vec<SemTerm>>,
    pub code: i32,
}

impl ParseReport {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.render_text(),
            Format::Json => serde_json::to_string_pretty(&self.to_json()).unwrap() + "\n",
            Format::Latex => {
                let bodies: Vec<String> = self
                    .analysis
                    .candidates
                    .iter()
                    .flat_map(|c| c.proofs.iter().map(Proof::to_latex))
                    .collect();
                latex_document(&bodies)
            }
        }
    }

    fn render_text(&self) -> String {
        let a = &self.analysis;
        let mut out = String::new();
        out.push_str(&format!("tokens: {}\n", a.tokens.join(" ")));
        for (c, rs) in a.candidates.iter().zip(&self.proof_readings) {
            out.push_str(&format!(
                "\ninsertion: {}\nproofs: {} (listing {})\n",
                c.sequent,
                c.total,
                c.proofs.len()
            ));
            for (i, (p, r)) in c.proofs.iter().zip(rs).enumerate() {
                out.push_str(&format!("\nproof {}:\n{}reading: {}\n", i + 1, p.to_text(), pretty(r)));
            }
        }
        out.push_str(&format!("\nreadings: {}\n", self.readings.len()));
        for r in &self.readings {
            out.push_str(&format!("  {}   [{} proofs]\n    {}\n", r.pretty, r.proofs, r.term));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let a = &self.analysis;
        json!({
            "tokens": a.tokens,
            "unknown": a.unknown,
            "insertions": a.insertions,
            "candidates": a.candidates.iter().zip(&self.proof_readings).map(|(c, rs)| json!({
                "sequent": c.sequent.to_string(),
                "total": c.total.to_string(),
                "proofs": c.proofs.iter().zip(rs).map(|(p, r)| json!({
                    "proof": p.to_json(),
                    "reading": render_term(r),
                })).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "readings": self.readings.iter().map(|r| json!({
                "term": r.term,
                "pretty": r.pretty,
                "proofs": r.proofs.to_string(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Analyzes a sentence without rendering it.
pub fn parse_sentence(sentence: &str, cfg: &RunConfig) -> Result<ParseReport> {
    cfg.validate()?;
    let lex = cfg.load_lexicon()?;
    let normal = Normal::Beta;
    let opts = Options {
        goal: cfg.goal.clone(),
        max_proofs: cfg.max_proofs,
        timeout: cfg.timeout,
        normal,
    };
    let tokens = tokenize(sentence);
    if tokens.is_empty() {
        bail!("empty sentence");
    }
    let analysis = analyze(&lex, &tokens, &opts)?;
    let mut proof_readings = Vec::new();
    for c in &analysis.candidates {
        let rs = c
            .proofs
            .iter()
            .map(|p| Ok(normal.apply(&extract_term(p, &c.labels)?)))
            .collect::<Result<Vec<_>>>()?;
        proof_readings.push(rs);
    }
    let readings: Vec<Reading> = if cfg.dedup {
        analysis
            .readings()
            .into_iter()
            .map(|(t, n)| Reading::new(t, n))
            .collect()
    } else {
        proof_readings
            .iter()
            .flatten()
            .map(|t| Reading::new(t.clone(), 1))
            .collect()
    };
    let code = if !analysis.unknown.is_empty() {
        EXIT_LEXICAL_GAP
    } else if readings.is_empty() {
        EXIT_FAIL
    } else {
        EXIT_OK
    };
    Ok(ParseReport {
        analysis,
        readings,
        proof_readings,
        code,
    })
}

/// Parses a sentence and reports its readings.
pub fn cmd_parse(sentence: &str, cfg: &RunConfig) -> Result<Outcome> {
    let report = parse_sentence(sentence, cfg)?;
    let mut out = Outcome::new(report.code, report.render(cfg.format));
    let a = &report.analysis;
    if !a.unknown.is_empty() {
        out.stderr
            .push_str(&format!("lexical gap: no entry for {}\n", a.unknown.join(", ")));
    } else if report.readings.is_empty() {
        out.stderr.push_str("no derivation\n");
    }
    if a.truncated() {
        out.stderr.push_str(&format!(
            "warning: proof listing truncated at {} per insertion; counts and readings are complete\n",
            cfg.max_proofs
        ));
    }
    Ok(out)
}

/// Searches for cut-free proofs of a sequent.
pub fn cmd_prove(sequent: &str, cfg: &RunConfig) -> Result<Outcome> {
    cfg.validate()?;
    let s = parse_sequent(sequent).with_context(|| format!("sequent `{sequent}`"))?;
    let set = prove_all(
        &s,
        Limits {
            max_proofs: cfg.max_proofs,
            timeout: cfg.timeout,
        },
    )?;
    let terms = set
        .proofs
        .iter()
        .map(|p| Ok(Normal::Beta.apply(&proof_term(p)?)))
        .collect::<Result<Vec<_>>>()?;
    let stdout = match cfg.format {
        Format::Text => {
            let mut o = format!("{s}\nproofs: {} (listing {})\n", set.total, set.proofs.len());
            for (i, (p, t)) in set.proofs.iter().zip(&terms).enumerate() {
                o.push_str(&format!("\nproof {}:\n{}term: {}\n", i + 1, p.to_text(), render_term(t)));
            }
            o
        }
        Format::Json => {
            let v = json!({
                "sequent": s.to_string(),
                "total": set.total.to_string(),
                "proofs": set.proofs.iter().map(Proof::to_json).collect::<Vec<_>>(),
                "terms": terms.iter().map(render_term).collect::<Vec<_>>(),
            });
            serde_json::to_string_pretty(&v)? + "\n"
        }
        Format::Latex => latex_document(&set.proofs.iter().map(Proof::to_latex).collect::<Vec<_>>()),
    };
    let mut out = Outcome::new(if set.total > 0 { EXIT_OK } else { EXIT_FAIL }, stdout);
    if set.total == 0 {
        out.stderr.push_str("not provable\n");
    } else if set.truncated {
        out.stderr.push_str(&format!(
            "warning: listing {} of {} proofs\n",
            set.proofs.len(),
            set.total
        ));
    }
    Ok(out)
}

/// Proofs in a JSON document: a single proof, an array of proofs, or an
/// object with a `proofs` array (the output of `prove --format json`).
pub fn proofs_from_json(text: &str) -> Result<Vec<Proof>, CheckError> {
    let bad = |msg: String| CheckError {
        node: Default::default(),
        rule: "?".into(),
        msg,
    };
    let v: Value = serde_json::from_str(text).map_err(|e| bad(format!("malformed JSON: {e}")))?;
    let items: Vec<&Value> = match &v {
        Value::Array(a) => a.iter().collect(),
        Value::Object(o) if o.contains_key("proofs") && !o.contains_key("rule") => o["proofs"]
            .as_array()
            .ok_or_else(|| bad("`proofs` must be an array".into()))?
            .iter()
            .collect(),
        _ => vec![&v],
    };
    items.into_iter().map(Proof::from_json).collect()
}

/// Validates every node of the proofs in `text`.
pub fn cmd_check(text: &str) -> Outcome {
    let proofs = match proofs_from_json(text) {
        Ok(ps) => ps,
        Err(e) => {
            return Outcome {
                code: EXIT_FAIL,
                stdout: String::new(),
                stderr: format!("rejected: {e}\n"),
            }
        }
    };
    if proofs.is_empty() {
        return Outcome {
            code: EXIT_FAIL,
            stdout: String::new(),
            stderr: "rejected: no proofs\n".into(),
        };
    }
    let mut out = Outcome::default();
    for (i, p) in proofs.iter().enumerate() {
        match check_proof(p) {
            Ok(()) => out
                .stdout
                .push_str(&format!("ok: {} ({} nodes)\n", p.conclusion, p.size())),
            Err(e) => {
                out.code = EXIT_FAIL;
                let which = if proofs.len() > 1 {
                    format!("proof {}: ", i + 1)
                } else {
                    String::new()
                };
                out.stderr.push_str(&format!("rejected: {which}{e}\n"));
            }
        }
    }
    out
}

fn single_proof(text: &str) -> Result<Proof> {
    let mut ps = proofs_from_json(text)?;
    if ps.len() != 1 {
        bail!("expected one proof, found {}", ps.len());
    }
    let p = ps.pop().unwrap();
    check_proof(&p)?;
    Ok(p)
}

/// Eliminates every Cut. With `trace`, stderr gets one JSON line per
/// reduction step.
pub fn cmd_elim(text: &str, trace: bool) -> Result<Outcome> {
    let p = single_proof(text)?;
    let (q, steps) = eliminate(&p)?;
    check_proof(&q).context("reduced proof failed to check")?;
    let mut out = Outcome::new(EXIT_OK, serde_json::to_string_pretty(&q.to_json())? + "\n");
    if trace {
        for s in &steps {
            out.stderr.push_str(&serde_json::to_string(s)?);
            out.stderr.push('\n');
        }
    }
    Ok(out)
}

/// Renders a checked proof.
pub fn cmd_render(text: &str, format: Format) -> Result<Outcome> {
    let p = single_proof(text)?;
    let stdout = match format {
        Format::Text => p.to_text(),
        Format::Latex => latex_document(&[p.to_latex()]),
        Format::Json => serde_json::to_string_pretty(&p.to_json())? + "\n",
    };
    Ok(Outcome::new(EXIT_OK, stdout))
}
