//! Example sentences with their expected readings, shared by integration
//! and acceptance tests.
#![allow(dead_code)]

pub mod oracle;

pub struct Golden {
    pub name: &'static str,
    pub sentence: &'static str,
    pub goal: &'static str,
    /// Expected readings in the ASCII term syntax, compared up to
    /// alpha-equivalence.
    pub readings: &'static [&'static str],
    /// Runtime budget in seconds.
    pub budget: u64,
}

const FORTUNATELY: &[&str] = &["fortunately (has perseverance j)"];

pub const GOLDEN: &[Golden] = &[
    Golden {
        name: "discontinuous idiom",
        sentence: "mary gave the man the cold shoulder",
        goal: "S",
        readings: &["shunned (iota man) m"],
        budget: 60,
    },
    Golden {
        name: "medial quantifier",
        sentence: "john gave every book to mary",
        goal: "S",
        readings: &["forall C. implies (book C) (gave m C j)"],
        budget: 60,
    },
    Golden {
        name: "de re / de dicto",
        sentence: "mary thinks someone left",
        goal: "S",
        readings: &[
            "thinks (exists B. and (person B) (left B)) m",
            "exists B. and (person B) (thinks (left B) m)",
        ],
        budget: 60,
    },
    Golden {
        name: "quantifier scope",
        sentence: "everyone loves someone",
        goal: "S",
        readings: &[
            "exists B. and (person B) (forall E. implies (person E) (love B E))",
            "forall B. implies (person B) (exists E. and (person E) (love E B))",
        ],
        budget: 60,
    },
    Golden {
        name: "VP ellipsis (before)",
        sentence: "john slept before mary did",
        goal: "S",
        readings: &["before (slept m) (slept j)"],
        budget: 60,
    },
    Golden {
        name: "VP ellipsis (and ... too)",
        sentence: "john slept and mary did too",
        goal: "S",
        readings: &["and (slept j) (slept m)"],
        budget: 60,
    },
    Golden {
        name: "medial relativization",
        sentence: "dog that mary saw today",
        goal: "CN",
        readings: &["lam C. and (dog C) (today (saw C m))"],
        budget: 60,
    },
    Golden {
        name: "pied piping",
        sentence: "mountain the painting of which by cezanne john sold for $10,000,000",
        goal: "CN",
        readings: &[
            "lam D. and (mountain D) (sold tenmilliondollars (iota (by cezanne (of D painting))) j)",
        ],
        budget: 300,
    },
    Golden {
        name: "appositive relativization",
        sentence: "john who jogs sneezed",
        goal: "S",
        readings: &["and (jogs j) (sneezed j)"],
        budget: 60,
    },
    Golden {
        name: "parenthetical (initial)",
        sentence: "fortunately john has perseverance",
        goal: "S",
        readings: FORTUNATELY,
        budget: 60,
    },
    Golden {
        name: "parenthetical (after subject)",
        sentence: "john fortunately has perseverance",
        goal: "S",
        readings: FORTUNATELY,
        budget: 60,
    },
    Golden {
        name: "parenthetical (after verb)",
        sentence: "john has fortunately perseverance",
        goal: "S",
        readings: FORTUNATELY,
        budget: 60,
    },
    Golden {
        name: "parenthetical (final)",
        sentence: "john has perseverance fortunately",
        goal: "S",
        readings: FORTUNATELY,
        budget: 60,
    },
    Golden {
        name: "gapping",
        sentence: "john studies logic and charles phonetics",
        goal: "S",
        readings: &["and (studies logic j) (studies phonetics c)"],
        budget: 60,
    },
    Golden {
        name: "comparative subdeletion",
        sentence: "john ate more donuts than mary bought bagels",
        goal: "S",
        readings: &[
            "gt (card (lam C. and (donuts C) (ate C j))) (card (lam C. and (bagels C) (bought C m)))",
        ],
        budget: 300,
    },
    Golden {
        name: "reflexivization",
        sentence: "john sent himself flowers",
        goal: "S",
        readings: &["sent j flowers j"],
        budget: 60,
    },
];
