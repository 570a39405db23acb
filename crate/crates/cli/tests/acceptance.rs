//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use serde_json::Value;

use common::oracle::{closure, flat_len, for_each_sequent};
use displace_cli::{cmd_check, cmd_elim, parse_sentence, RunConfig, EXIT_FAIL, EXIT_OK};
use displace_core::cutelim::{reduce_once, spliced_fixtures, CutInstance};
use displace_core::proof::{check_proof, subformula_check, weight_drop, Proof, Rule};
use displace_core::search::{prove_all, Limits, Prover};
use displace_core::semantics::{alpha_eq, extract_term, normalize, parse_term, render_term, SemTerm};
use displace_core::parse_sequent;

type Verdict = Result<String, String>;

/// Proofs (with lexical meanings) produced while checking the golden
/// readings, reused by later criteria.
struct Corpus {
    proofs: Vec<(Proof, Vec<SemTerm>)>,
}

fn criterion_1(corpus: &mut Corpus) -> Verdict {
    let mut failures = Vec::new();
    let mut slowest = (Duration::ZERO, "");
    for g in common::GOLDEN {
        let cfg = RunConfig::default().with_goal(g.goal).map_err(|e| e.to_string())?;
        let start = Instant::now();
        let report = match parse_sentence(g.sentence, &cfg) {
            Ok(r) => r,
            Err(e) => {
                failures.push(format!("{}: {e:#}", g.name));
                continue;
            }
        };
        let took = start.elapsed();
        if took > slowest.0 {
            slowest = (took, g.name);
        }
        if took > Duration::from_secs(g.budget) {
            failures.push(format!("{}: {took:?} exceeds {}s", g.name, g.budget));
        }
        let expected: Vec<SemTerm> = g.readings.iter().map(|r| parse_term(r).unwrap()).collect();
        let got: Vec<&SemTerm> = report.readings.iter().map(|r| &r.sem).collect();
        let covered = expected.iter().all(|e| got.iter().any(|t| alpha_eq(t, e)));
        let exact = got.iter().all(|t| expected.iter().any(|e| alpha_eq(t, e)));
        if report.code != EXIT_OK || !covered || !exact || got.len() != expected.len() {
            failures.push(format!(
                "{}: got {:?}",
                g.name,
                got.iter().map(|t| render_term(t)).collect::<Vec<_>>()
            ));
        }
        for c in &report.analysis.candidates {
            for p in &c.proofs {
                corpus.proofs.push((p.clone(), c.labels.clone()));
            }
        }
    }
    if failures.is_empty() {
        Ok(format!(
            "{} examples reproduce their readings exactly; slowest {} in {:.2?}",
            common::GOLDEN.len(),
            slowest.1,
            slowest.0
        ))
    } else {
        Err(failures.join("; "))
    }
}

fn criterion_2(corpus: &Corpus) -> Verdict {
    let mut nodes = 0;
    for (p, _) in &corpus.proofs {
        let mut bad = None;
        p.for_each(&mut |q| {
            if q.rule != Rule::Id {
                nodes += 1;
                if weight_drop(q) != 1 && bad.is_none() {
                    bad = Some(format!("{} at {}", q.rule, q.conclusion));
                }
            }
        });
        if let Some(b) = bad {
            return Err(format!("weight does not drop by one: {b}"));
        }
    }
    Ok(format!(
        "{nodes} rule nodes in {} proofs each drop exactly one unit of weight",
        corpus.proofs.len()
    ))
}

/// Runs every fixture through the reduction loop and `elim`; returns the
/// cut-free results.
fn criterion_5(corpus: &Corpus) -> (Verdict, Vec<Proof>) {
    let mut fixtures = Vec::new();
    let mut seen = HashSet::new();
    for (p, labels) in &corpus.proofs {
        for f in spliced_fixtures(p, 4) {
            if seen.insert(f.clone()) {
                fixtures.push((f, labels.clone()));
            }
        }
    }
    let mut results = Vec::new();
    let mut steps = 0;
    let mut cases = HashSet::new();
    let fail = |msg: String| (Err(msg), Vec::new());
    for (f, labels) in &fixtures {
        if let Err(e) = check_proof(f) {
            return fail(format!("fixture does not check: {e}"));
        }
        let mut cur = f.clone();
        while !cur.is_cut_free() {
            let (next, step) = match reduce_once(&cur) {
                Ok(x) => x,
                Err(e) => return fail(format!("reduce_once failed on {}: {e}", f.conclusion)),
            };
            if step.degrees_after.iter().any(|d| *d >= step.degree_before) {
                return fail(format!("{step:?} does not decrease the degree"));
            }
            if let Err(e) = check_proof(&next) {
                return fail(format!("{} produced an invalid proof: {e}", step.case));
            }
            cases.insert(step.case.split(' ').next().unwrap().to_string());
            steps += 1;
            cur = next;
        }
        let out = match cmd_elim(&f.to_json().to_string(), false) {
            Ok(o) => o,
            Err(e) => return fail(format!("elim failed: {e:#}")),
        };
        let v: Value = serde_json::from_str(&out.stdout).unwrap();
        let q = Proof::from_json(&v).unwrap();
        if !q.is_cut_free() || check_proof(&q).is_err() || q.conclusion != f.conclusion {
            return fail(format!("elim output for {} is not a cut-free proof of it", f.conclusion));
        }
        let before = normalize(&extract_term(f, labels).unwrap());
        let after = normalize(&extract_term(&q, labels).unwrap());
        if !alpha_eq(&before, &after) {
            return fail(format!(
                "meaning changed: {} became {}",
                render_term(&before),
                render_term(&after)
            ));
        }
        results.push(q);
    }
    if fixtures.len() < 50 {
        return fail(format!("only {} fixtures", fixtures.len()));
    }
    let mut cases: Vec<String> = cases.into_iter().collect();
    cases.sort();
    let degree = fixtures
        .iter()
        .filter_map(|(f, _)| CutInstance::of(f).map(|c| c.degree()))
        .max()
        .unwrap_or(0);
    (
        Ok(format!(
            "{} fixtures (max degree {degree}) reduce in {steps} steps via {} to cut-free proofs with the same meaning",
            fixtures.len(),
            cases.join("/")
        )),
        results,
    )
}

fn criterion_3(corpus: &Corpus, eliminated: &[Proof]) -> Verdict {
    let all: Vec<&Proof> = corpus.proofs.iter().map(|(p, _)| p).chain(eliminated).collect();
    if eliminated.is_empty() {
        return Err("no cut-free proofs from the cut elimination fixtures".into());
    }
    for p in &all {
        if !p.is_cut_free() {
            return Err(format!("proof of {} is not cut-free", p.conclusion));
        }
        if !subformula_check(p) {
            return Err(format!("proof of {} leaves the subformulas", p.conclusion));
        }
    }
    Ok(format!(
        "{} cut-free proofs ({} parses, {} from cut elimination)",
        all.len(),
        corpus.proofs.len(),
        eliminated.len()
    ))
}

fn criterion_4() -> Verdict {
    let start = Instant::now();
    let atoms = ["N", "S"];
    let derivable = closure(&atoms, 3, 3);
    let (mut total, mut theorems, mut disagree) = (0usize, 0usize, Vec::new());
    let mut seen = HashSet::new();
    for_each_sequent(&atoms, 3, 3, 3, |s| {
        total += 1;
        let expected = derivable.contains(&s);
        let set = prove_all(&s, Limits { max_proofs: 1, timeout: None });
        let got = match set {
            Ok(set) => set.total > 0,
            Err(_) => {
                disagree.push(format!("{s}: timeout"));
                return;
            }
        };
        if got != expected && disagree.len() < 5 {
            disagree.push(format!("{s}: search {got}, oracle {expected}"));
        }
        if expected {
            theorems += 1;
            seen.insert(s);
        }
    });
    let missed = derivable
        .iter()
        .filter(|s| flat_len(&s.ante) <= 3 && !seen.contains(*s))
        .count();
    let took = start.elapsed();
    if !disagree.is_empty() {
        return Err(disagree.join("; "));
    }
    if missed > 0 {
        return Err(format!("{missed} derivable sequents missing from the enumeration"));
    }
    if took > Duration::from_secs(600) {
        return Err(format!("took {took:?}"));
    }
    Ok(format!(
        "{total} sequents, {theorems} theorems, 100% agreement in {took:.1?}"
    ))
}

fn criterion_6() -> Verdict {
    let cases = [
        ("N => S/(N\\S)", true),
        ("S/(N\\S) => N", false),
        ("0 => I", true),
        ("[] => J", true),
    ];
    let mut notes = Vec::new();
    for (text, want) in cases {
        let start = Instant::now();
        let s = parse_sequent(text).map_err(|e| e.to_string())?;
        let got = Prover::new().provable(&s).map_err(|e| e.to_string())?;
        let took = start.elapsed();
        if got != want {
            return Err(format!("{text}: provable = {got}"));
        }
        if took >= Duration::from_secs(1) {
            return Err(format!("{text}: {took:?}"));
        }
        notes.push(format!("{text} {}", if got { "yes" } else { "no" }));
    }
    for (text, rule) in [("0 => I", Rule::IR), ("[] => J", Rule::JR)] {
        let set = prove_all(&parse_sequent(text).unwrap(), Limits::default()).unwrap();
        if set.total != 1 || set.proofs[0].rule != rule || !set.proofs[0].premises.is_empty() {
            return Err(format!("{text} is not derived by the axiom {rule}"));
        }
    }
    Ok(notes.join(", "))
}

fn node_mut<'a>(v: &'a mut Value, path: &[usize]) -> &'a mut Value {
    path.iter()
        .fold(v, |n, i| &mut n["premises"].as_array_mut().unwrap()[*i])
}

fn paths(p: &Proof, cur: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, Rule, usize)>) {
    out.push((cur.clone(), p.rule, p.premises.len()));
    for (i, q) in p.premises.iter().enumerate() {
        cur.push(i);
        paths(q, cur, out);
        cur.pop();
    }
}

/// A different rule with the same number of premises.
fn rename(r: Rule) -> &'static str {
    match r {
        Rule::Id => "IR",
        Rule::UnderL => "/L",
        Rule::OverL => "\\L",
        Rule::UnderR => "/R",
        Rule::OverR => "\\R",
        Rule::InfixL => "^L",
        Rule::ExtractL => "!L",
        Rule::InfixR => "^R",
        Rule::ExtractR => "!R",
        Rule::ProdL => "(o)L",
        Rule::DiscProdL => "*L",
        Rule::ProdR => "(o)R",
        Rule::DiscProdR => "*R",
        Rule::IL => "JL",
        Rule::JL => "IL",
        Rule::IR => "JR",
        Rule::JR => "IR",
        Rule::Cut => "\\L",
    }
}

/// Swaps one atom occurrence in a sequent's text.
fn swap_type(text: &str) -> String {
    let succ = text.rfind("=>").unwrap();
    let (ante, rest) = text.split_at(succ);
    let swapped = if rest.contains('N') {
        rest.replacen('N', "S", 1)
    } else if rest.contains("CN") || rest.contains('S') {
        rest.replacen('S', "N", 1)
    } else if rest.contains('I') {
        rest.replacen('I', "N", 1)
    } else {
        rest.replacen('J', "S^N", 1)
    };
    format!("{ante}{swapped}")
}

fn criterion_7(corpus: &Corpus) -> Verdict {
    let mut mutants: Vec<(String, Vec<usize>, Value)> = Vec::new();
    for (p, _) in corpus.proofs.iter().step_by(7).take(12) {
        let base = p.to_json();
        let mut nodes = Vec::new();
        paths(p, &mut Vec::new(), &mut nodes);
        // Root, a deep leaf and an inner node.
        let picks = [0, nodes.len() - 1, nodes.len() / 2];
        for &i in &picks {
            let (path, rule, arity) = &nodes[i];
            let mut v = base.clone();
            node_mut(&mut v, path)["rule"] = Value::from(rename(*rule));
            mutants.push(("rule renamed".into(), path.clone(), v));
            if *arity > 0 {
                let mut v = base.clone();
                node_mut(&mut v, path)["premises"]
                    .as_array_mut()
                    .unwrap()
                    .remove(arity - 1);
                mutants.push(("premise dropped".into(), path.clone(), v));
            }
            let mut v = base.clone();
            let n = node_mut(&mut v, path);
            let text = n["conclusion"].as_str().unwrap().to_string();
            n["conclusion"] = Value::from(swap_type(&text));
            mutants.push(("type swapped".into(), path.clone(), v));
        }
    }
    let mut kinds = HashSet::new();
    for (kind, path, v) in &mutants {
        let out = cmd_check(&v.to_string());
        let where_ = std::iter::once("root".to_string())
            .chain(path.iter().map(|i| i.to_string()))
            .collect::<Vec<_>>()
            .join(".");
        let precise = out.stderr.contains(&format!("invalid node {where_} "));
        if out.code != EXIT_FAIL || !precise {
            return Err(format!(
                "{kind} at {where_} not rejected precisely: exit {}, {}",
                out.code,
                out.stderr.trim()
            ));
        }
        kinds.insert(kind.clone());
    }
    if mutants.len() < 20 || kinds.len() < 3 {
        return Err(format!("only {} mutants of {} kinds", mutants.len(), kinds.len()));
    }
    // Sanity: the unmutated proofs pass the same checker.
    for (p, _) in corpus.proofs.iter().step_by(7).take(12) {
        if cmd_check(&p.to_json().to_string()).code != EXIT_OK {
            return Err(format!("original proof of {} rejected", p.conclusion));
        }
    }
    Ok(format!(
        "{} mutants (rule renamed, premise dropped, type swapped) rejected at the mutated node",
        mutants.len()
    ))
}

fn report(n: usize, title: &str, v: &Verdict, all_ok: &mut bool) {
    match v {
        Ok(msg) => println!("[PASS] criterion {n}: {title}: {msg}"),
        Err(msg) => {
            *all_ok = false;
            println!("[FAIL] criterion {n}: {title}: {msg}");
        }
    }
}

fn main() -> ExitCode {
    let mut corpus = Corpus { proofs: Vec::new() };
    let mut ok = true;
    let v1 = criterion_1(&mut corpus);
    report(1, "golden readings", &v1, &mut ok);
    let v2 = criterion_2(&corpus);
    report(2, "weight decrease", &v2, &mut ok);
    let (v5, eliminated) = criterion_5(&corpus);
    let v3 = criterion_3(&corpus, &eliminated);
    report(3, "subformula property", &v3, &mut ok);
    let v4 = criterion_4();
    report(4, "oracle equivalence", &v4, &mut ok);
    report(5, "cut elimination", &v5, &mut ok);
    let v6 = criterion_6();
    report(6, "Lambek subsumption and units", &v6, &mut ok);
    let v7 = criterion_7(&corpus);
    report(7, "checker rejects corrupted proofs", &v7, &mut ok);
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
