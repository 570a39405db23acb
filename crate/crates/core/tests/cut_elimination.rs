mod common;

use displace_core::analysis::{analyze, Options};
use displace_core::cutelim::{eliminate, reduce_once, spliced_fixtures};
use displace_core::lexicon::{tokenize, Lexicon};
use displace_core::proof::{check_proof, Proof};
use displace_core::semantics::{alpha_eq, extract_term, normalize, SemTerm};
use displace_core::parse_type;

/// Cut fixtures from the first proofs of every example, with the lexical
/// meanings of their endsequents.
fn fixtures(per_proof: usize) -> Vec<(Proof, Vec<SemTerm>)> {
    let lex = Lexicon::builtin();
    let mut out = Vec::new();
    for g in common::GOLDEN {
        let opts = Options {
            goal: parse_type(g.goal).unwrap(),
            max_proofs: 2,
            ..Options::default()
        };
        let a = analyze(&lex, &tokenize(g.sentence), &opts).unwrap();
        for c in &a.candidates {
            for p in &c.proofs {
                for f in spliced_fixtures(p, per_proof) {
                    out.push((f, c.labels.clone()));
                }
            }
        }
    }
    out
}

#[test]
fn every_fixture_eliminates_with_descending_degrees() {
    let fx = fixtures(8);
    assert!(fx.len() >= 50, "only {} fixtures", fx.len());
    for (p, labels) in &fx {
        check_proof(p).unwrap();
        assert!(!p.is_cut_free());
        let (q, trace) = eliminate(p).unwrap_or_else(|e| panic!("{e}\n{}", p.to_text()));
        assert!(q.is_cut_free());
        check_proof(&q).unwrap();
        assert_eq!(q.conclusion, p.conclusion);
        for s in &trace {
            assert!(s.degrees_after.iter().all(|&d| d < s.degree_before), "{s:?}");
        }
        let before = normalize(&extract_term(p, labels).unwrap());
        let after = normalize(&extract_term(&q, labels).unwrap());
        assert!(alpha_eq(&before, &after), "{before} vs {after}");
    }
}

#[test]
fn every_intermediate_proof_checks() {
    for (p, labels) in fixtures(3).iter().take(40) {
        let want = normalize(&extract_term(p, labels).unwrap());
        let mut cur = p.clone();
        while !cur.is_cut_free() {
            cur = reduce_once(&cur).unwrap().0;
            check_proof(&cur).unwrap();
            assert_eq!(cur.conclusion, p.conclusion);
            let got = normalize(&extract_term(&cur, labels).unwrap());
            assert!(alpha_eq(&want, &got));
        }
    }
}

#[test]
fn all_reduction_kinds_occur() {
    let mut cases = std::collections::BTreeSet::new();
    let mut full = std::collections::BTreeSet::new();
    for (p, _) in fixtures(8) {
        for s in eliminate(&p).unwrap().1 {
            full.insert(s.case.clone());
            cases.insert(s.case.split(' ').next().unwrap().to_string());
        }
    }
    eprintln!("{full:?}");
    for k in ["axiom-left", "axiom-right", "permute-left", "permute-right", "principal"] {
        assert!(cases.contains(k), "{k} never exercised: {full:?}");
    }
}
