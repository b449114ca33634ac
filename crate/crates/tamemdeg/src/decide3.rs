//! Rule engine for multidegrees of tame automorphisms of ℂ³.
//!
//! Rules are tried in a fixed order and the first applicable one decides.
//! Every applicable rule is still listed in the notes.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::construct3::{Variant469, WitnessRecipe};
use crate::error::{Error, Result};
use crate::numsg::SemigroupPair;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Status {
    Realizable,
    NotRealizable,
    Unknown,
    ConditionalOnJC2,
}

impl Status {
    /// CLI exit code for this verdict.
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Realizable => 0,
            Status::NotRealizable => 1,
            Status::Unknown => 2,
            Status::ConditionalOnJC2 => 3,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Status::Realizable => "Realizable",
            Status::NotRealizable => "NotRealizable",
            Status::Unknown => "Unknown",
            Status::ConditionalOnJC2 => "ConditionalOnJC2",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Rule {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
    R9,
    R10,
    R11,
    R12,
    Gallery,
    Open,
}

impl Rule {
    pub const ORDER: [Rule; 13] = [
        Rule::R1,
        Rule::R2,
        Rule::R3,
        Rule::R4,
        Rule::R5,
        Rule::R6,
        Rule::R7,
        Rule::R8,
        Rule::R9,
        Rule::R10,
        Rule::R11,
        Rule::R12,
        Rule::Gallery,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Rule::R1 => "R1",
            Rule::R2 => "R2",
            Rule::R3 => "R3",
            Rule::R4 => "R4",
            Rule::R5 => "R5",
            Rule::R6 => "R6",
            Rule::R7 => "R7",
            Rule::R8 => "R8",
            Rule::R9 => "R9",
            Rule::R10 => "R10",
            Rule::R11 => "R11",
            Rule::R12 => "R12",
            Rule::Gallery => "G",
            Rule::Open => "open",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Rule::R1 => "d1 = 1: padding of the identity",
            Rule::R2 => "d1 <= 2: residues modulo d1 give a sum relation",
            Rule::R3 => "sum rule: d2 in d1N or d3 in d1N + d2N",
            Rule::R4 => "gcd rule: d1/gcd(d1,d2,d3) <= 2",
            Rule::R5 => "(3,d2,d3): realizable iff 3|d2 or d3 in 3N + d2N",
            Rule::R6 => {
                "(4,d2,d3): parity cases, the (4,6,.), (4,10,.) and (4,4k+2,.) constructions"
            }
            Rule::R7 => "(5,6,9) is not a tame multidegree",
            Rule::R8 => "(p,d2,d3), p >= 5 prime: realizable iff p|d2 or d3 in pN + d2N",
            Rule::R9 => "(p,2(p-2),3(p-2)), p prime: excluded for p <= 35, conditional beyond",
            Rule::R10 => "odd coprime (d1,d2): realizable iff d3 in d1N + d2N",
            Rule::R11 => "distinct odd primes (p1,p2): realizable iff d3 in p1N + p2N",
            Rule::R12 => "finiteness tail: d3 >= lcm(d1,d2) - min(d2-1, (d1-1)(floor(d2/d1)+1))",
            Rule::Gallery => "explicit tame map from the gallery",
            Rule::Open => "no rule settles this triple",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.tag(), self.description())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub input: [u64; 3],
    pub sorted: [u64; 3],
    pub status: Status,
    pub rule: Rule,
    pub witness_recipe: Option<WitnessRecipe>,
    pub notes: Vec<String>,
}

/// A verdict produced by one rule.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub status: Status,
    pub recipe: Option<WitnessRecipe>,
    pub note: Option<String>,
}

impl Verdict {
    fn realizable(recipe: WitnessRecipe) -> Verdict {
        Verdict {
            status: Status::Realizable,
            recipe: Some(recipe),
            note: None,
        }
    }

    fn with(status: Status) -> Verdict {
        Verdict {
            status,
            recipe: None,
            note: None,
        }
    }

    fn note(mut self, s: impl Into<String>) -> Verdict {
        self.note = Some(s.into());
        self
    }
}

/// Gallery maps whose sorted multidegree is not covered by the numbered rules.
const GALLERY_TRIPLES: &[(&str, [u64; 3])] = &[("su_example", [6, 8, 9])];

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn pair(a: u64, b: u64) -> SemigroupPair {
    SemigroupPair::new(a, b).expect("positive generators")
}

/// The sum-rule recipe when `d2 ∈ d1ℕ` or `d3 ∈ d1ℕ + d2ℕ`.
pub fn sum_rule_recipe(d: [u64; 3]) -> Option<WitnessRecipe> {
    let [d1, d2, d3] = d;
    if d2 % d1 == 0 {
        return Some(WitnessRecipe::SumRule {
            target: d.to_vec(),
            index: 1,
            coeffs: vec![d2 / d1],
        });
    }
    pair(d1, d2)
        .member(d3)
        .map(|(k1, k2)| WitnessRecipe::SumRule {
            target: d.to_vec(),
            index: 2,
            coeffs: vec![k1, k2],
        })
}

/// Verdict of `(p|d2 or d3 ∈ pℕ + d2ℕ)`.
fn membership_verdict(d: [u64; 3]) -> Verdict {
    match sum_rule_recipe(d) {
        Some(r) => Verdict::realizable(r),
        None => Verdict::with(Status::NotRealizable),
    }
}

/// `r = min{b−1, (a−1)(⌊b/a⌋+1)}` and the tail start `lcm(a,b) − r`.
pub fn tab_tail_start(a: u64, b: u64) -> u64 {
    let r = (b - 1).min((a - 1) * (b / a + 1));
    a.lcm(&b) - r
}

/// Applies one rule to a sorted triple.
pub fn apply_rule(rule: Rule, d: [u64; 3]) -> Option<Verdict> {
    let [d1, d2, d3] = d;
    let target = d.to_vec();
    match rule {
        Rule::R1 => (d1 == 1).then(|| {
            Verdict::realizable(WitnessRecipe::Padding {
                target,
                positions: vec![0],
            })
        }),
        Rule::R2 => (d1 <= 2).then(|| Verdict::realizable(WitnessRecipe::Gcd2 { target })),
        Rule::R3 => sum_rule_recipe(d).map(Verdict::realizable),
        Rule::R4 => {
            let g = d1.gcd(&d2).gcd(&d3);
            (d1 / g <= 2).then(|| Verdict::realizable(WitnessRecipe::Gcd2 { target }))
        }
        Rule::R5 => (d1 == 3).then(|| membership_verdict(d)),
        Rule::R6 => (d1 == 4).then(|| rule_four(d)),
        Rule::R7 => (d == [5, 6, 9]).then(|| Verdict::with(Status::NotRealizable)),
        Rule::R8 => {
            if d1 < 5 || !is_prime(d1) {
                return None;
            }
            let three_halves = 2 * d3 == 3 * d2;
            let applies = !three_halves || d2 / 2 > d1 - 2;
            applies.then(|| {
                let v = membership_verdict(d);
                if d1 == 11 {
                    v.note("for p = 11 the condition reads 11|d2")
                } else {
                    v
                }
            })
        }
        Rule::R9 => {
            if d1 < 5 || !is_prime(d1) || d2 != 2 * (d1 - 2) || d3 != 3 * (d1 - 2) {
                return None;
            }
            Some(if d1 <= 35 {
                Verdict::with(Status::NotRealizable).note("family (p, 2(p-2), 3(p-2))")
            } else {
                Verdict::with(Status::ConditionalOnJC2).note(
                    "realizability would refute JC2 (the two-dimensional Jacobian Conjecture)",
                )
            })
        }
        Rule::R10 => {
            let odd = d1 % 2 == 1 && d2 % 2 == 1;
            (odd && d1 > 1 && d1 < d2 && d1.gcd(&d2) == 1).then(|| membership_verdict(d))
        }
        Rule::R11 => {
            let primes = d1 > 2 && d1 < d2 && is_prime(d1) && is_prime(d2);
            primes.then(|| membership_verdict(d))
        }
        Rule::R12 => (1 < d1 && d1 < d2 && d3 >= tab_tail_start(d1, d2))
            .then(|| Verdict::realizable(WitnessRecipe::TabTail { a: d1, b: d2, d3 })),
        Rule::Gallery => GALLERY_TRIPLES
            .iter()
            .find(|(_, t)| *t == d)
            .map(|(name, _)| {
                Verdict::realizable(WitnessRecipe::Gallery {
                    name: name.to_string(),
                })
            }),
        Rule::Open => None,
    }
}

fn rule_four(d: [u64; 3]) -> Verdict {
    let [_, d2, d3] = d;
    let target = d.to_vec();
    match (d2 % 2 == 0, d3 % 2 == 0) {
        (true, true) => Verdict::realizable(WitnessRecipe::Gcd2 { target }),
        (false, false) => membership_verdict(d),
        (false, true) => {
            if d3 - d2 != 1 {
                membership_verdict(d)
            } else {
                match sum_rule_recipe(d) {
                    Some(r) => Verdict::realizable(r),
                    None => Verdict::with(Status::Unknown).note("open family (4, 4k+1, 4k+2)"),
                }
            }
        }
        (true, false) => {
            if d2 % 4 == 0 {
                return membership_verdict(d);
            }
            let k = (d2 - 2) / 4;
            if d2 == 6 {
                // d3 odd and at least 7
                let (variant, base) = if d3 % 4 == 1 {
                    (Variant469::Nine, 9)
                } else {
                    (Variant469::Seven, 7)
                };
                Verdict::realizable(WitnessRecipe::Ex469family {
                    k: (d3 - base) / 4,
                    variant,
                })
            } else if d2 == 10 {
                Verdict::realizable(WitnessRecipe::Ex4610family { d3 })
            } else if k >= 3 && d3 > 5 * k {
                Verdict::realizable(WitnessRecipe::FourK2 { k, d3 })
            } else {
                Verdict::with(Status::Unknown).note("(4, 4k+2, odd d3) below 5k+1 is open")
            }
        }
    }
}

pub fn sort3(d: [u64; 3]) -> [u64; 3] {
    let mut s = d;
    s.sort_unstable();
    s
}

pub fn classify(d1: u64, d2: u64, d3: u64) -> Result<Classification> {
    let input = [d1, d2, d3];
    if input.contains(&0) {
        return Err(Error::InvalidArgument(format!(
            "degrees must be positive, got {input:?}"
        )));
    }
    let sorted = sort3(input);
    let applicable: Vec<(Rule, Verdict)> = Rule::ORDER
        .iter()
        .filter_map(|&r| apply_rule(r, sorted).map(|v| (r, v)))
        .collect();
    let mut notes: Vec<String> = applicable
        .iter()
        .map(|(r, v)| format!("{} applies: {}", r.tag(), v.status))
        .collect();
    for (_, v) in &applicable {
        if let Some(n) = &v.note {
            notes.push(n.clone());
        }
    }
    let (rule, status, recipe) = match applicable.into_iter().next() {
        Some((r, v)) => (r, v.status, v.recipe),
        None => (Rule::Open, Status::Unknown, None),
    };
    Ok(Classification {
        input,
        sorted,
        status,
        rule,
        witness_recipe: recipe,
        notes,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub by_status: BTreeMap<Status, usize>,
    pub by_rule: BTreeMap<Rule, usize>,
}

/// All sorted triples with `d3 <= bound`, in lexicographic order.
pub fn enumerate(bound: u64) -> Result<Vec<Classification>> {
    if bound == 0 {
        return Err(Error::InvalidArgument("bound must be at least 1".into()));
    }
    let triples: Vec<[u64; 3]> = (1..=bound)
        .flat_map(|d1| (d1..=bound).flat_map(move |d2| (d2..=bound).map(move |d3| [d1, d2, d3])))
        .collect();
    triples
        .par_iter()
        .map(|&[a, b, c]| classify(a, b, c))
        .collect()
}

pub fn summarize(items: &[Classification]) -> Summary {
    let mut s = Summary {
        total: items.len(),
        ..Summary::default()
    };
    for c in items {
        *s.by_status.entry(c.status).or_default() += 1;
        *s.by_rule.entry(c.rule).or_default() += 1;
    }
    s
}
