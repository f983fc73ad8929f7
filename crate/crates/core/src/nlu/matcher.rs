//! Pattern alignment of token lists against rules.

use super::lexicon::{EntityKind, Lexicon};
use super::rules::{IntentLabel, PatternToken, Rule, RuleSet, SlotType};

pub const PRONOUNS: [&str; 4] = ["it", "its", "that", "there"];

pub fn is_pronoun(token: &str) -> bool {
    PRONOUNS.contains(&token)
}

/// Whether `pronoun` may stand in for a slot of type `ty`. "there" only
/// refers to places.
pub fn pronoun_fits(pronoun: &str, ty: SlotType) -> bool {
    match pronoun {
        "there" => ty == SlotType::Location,
        _ => ty.is_entity(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Binding {
    Entity {
        canonical: String,
        kind: EntityKind,
    },
    /// Canonical literal: seconds for durations, the number itself for numbers.
    Value(String),
    /// Awaiting anaphora resolution.
    Pronoun(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlotMatch {
    pub name: String,
    pub ty: SlotType,
    pub binding: Binding,
    /// Token range [start, end).
    pub span: (usize, usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub rule_id: String,
    pub intent: IntentLabel,
    /// Count of matched literal tokens.
    pub specificity: u32,
    pub priority: usize,
    pub slots: Vec<SlotMatch>,
}

impl Candidate {
    pub fn has_pronoun(&self) -> bool {
        self.slots
            .iter()
            .any(|s| matches!(s.binding, Binding::Pronoun(_)))
    }
}

fn number_word(token: &str) -> Option<f64> {
    const WORDS: [&str; 21] = [
        "zero",
        "one",
        "two",
        "three",
        "four",
        "five",
        "six",
        "seven",
        "eight",
        "nine",
        "ten",
        "eleven",
        "twelve",
        "thirteen",
        "fourteen",
        "fifteen",
        "sixteen",
        "seventeen",
        "eighteen",
        "nineteen",
        "twenty",
    ];
    if let Some(i) = WORDS.iter().position(|w| *w == token) {
        return Some(i as f64);
    }
    match token {
        "thirty" => Some(30.0),
        "forty" => Some(40.0),
        "fifty" => Some(50.0),
        "sixty" => Some(60.0),
        _ => None,
    }
}

pub fn parse_number(token: &str) -> Option<f64> {
    if token.chars().next().is_some_and(|c| c.is_ascii_digit()) {
        return token.parse::<f64>().ok().filter(|v| v.is_finite());
    }
    number_word(token)
}

fn unit_seconds(unit: &str) -> Option<f64> {
    match unit {
        "s" | "sec" | "secs" | "second" | "seconds" => Some(1.0),
        "m" | "min" | "mins" | "minute" | "minutes" => Some(60.0),
        "h" | "hr" | "hrs" | "hour" | "hours" => Some(3600.0),
        _ => None,
    }
}

fn format_value(v: f64) -> String {
    if v.fract() == 0.0 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

/// Duration spans at the head of `tokens`: `<number> <unit>`, `a|an <unit>`,
/// or a fused token like `5min`. Returns (tokens consumed, seconds).
pub fn parse_duration(tokens: &[String]) -> Option<(usize, f64)> {
    if tokens.len() >= 2 {
        let count = match tokens[0].as_str() {
            "a" | "an" => Some(1.0),
            t => parse_number(t),
        };
        if let (Some(n), Some(u)) = (count, unit_seconds(&tokens[1])) {
            return Some((2, n * u));
        }
    }
    let first = tokens.first()?;
    let split = first.find(|c: char| !(c.is_ascii_digit() || c == '.'))?;
    if split == 0 {
        return None;
    }
    let (num, unit) = first.split_at(split);
    Some((1, num.parse::<f64>().ok()? * unit_seconds(unit)?))
}

/// Every way a slot of type `ty` can bind at the head of `tokens`, best first.
fn slot_options(ty: SlotType, tokens: &[String], lexicon: &Lexicon) -> Vec<(usize, Binding)> {
    let mut out = Vec::new();
    match ty {
        SlotType::Duration => {
            if let Some((n, secs)) = parse_duration(tokens) {
                out.push((n, Binding::Value(format_value(secs))));
            }
        }
        SlotType::Number => {
            if let Some(v) = tokens.first().and_then(|t| parse_number(t)) {
                out.push((1, Binding::Value(format_value(v))));
            }
        }
        _ => {
            for len in (1..=lexicon.max_span().min(tokens.len())).rev() {
                if let Some(e) = lexicon.lookup(&tokens[..len]) {
                    if ty.accepts(e.kind) {
                        out.push((
                            len,
                            Binding::Entity {
                                canonical: e.canonical.clone(),
                                kind: e.kind,
                            },
                        ));
                    }
                }
            }
            if let Some(t) = tokens.first() {
                if is_pronoun(t) && pronoun_fits(t, ty) {
                    out.push((1, Binding::Pronoun(t.clone())));
                }
            }
        }
    }
    out
}

fn align(
    pattern: &[PatternToken],
    tokens: &[String],
    offset: usize,
    lexicon: &Lexicon,
    out: &mut Vec<SlotMatch>,
) -> bool {
    let Some(head) = pattern.first() else {
        return tokens.is_empty();
    };
    let rest = &pattern[1..];
    match head {
        PatternToken::Literal(l) => {
            tokens.first() == Some(l) && align(rest, &tokens[1..], offset + 1, lexicon, out)
        }
        PatternToken::Wildcard => {
            (0..=tokens.len()).any(|k| align(rest, &tokens[k..], offset + k, lexicon, out))
        }
        PatternToken::Slot { name, ty } => {
            for (len, binding) in slot_options(*ty, tokens, lexicon) {
                out.push(SlotMatch {
                    name: name.clone(),
                    ty: *ty,
                    binding,
                    span: (offset, offset + len),
                });
                if align(rest, &tokens[len..], offset + len, lexicon, out) {
                    return true;
                }
                out.pop();
            }
            false
        }
    }
}

/// Aligns one rule against `tokens`.
pub fn match_rule(rule: &Rule, tokens: &[String], lexicon: &Lexicon) -> Option<Candidate> {
    let mut slots = Vec::new();
    align(&rule.pattern, tokens, 0, lexicon, &mut slots).then(|| Candidate {
        rule_id: rule.rule_id.clone(),
        intent: rule.intent,
        specificity: rule.literal_count() as u32,
        priority: rule.priority,
        slots,
    })
}

/// All matching rules ranked by specificity (desc) then priority (asc).
pub fn match_rules(tokens: &[String], lexicon: &Lexicon, rules: &RuleSet) -> Vec<Candidate> {
    if tokens.is_empty() {
        return Vec::new();
    }
    let mut out: Vec<Candidate> = rules
        .rules
        .iter()
        .filter_map(|r| match_rule(r, tokens, lexicon))
        .collect();
    out.sort_by(|a, b| {
        b.specificity
            .cmp(&a.specificity)
            .then(a.priority.cmp(&b.priority))
    });
    out
}
