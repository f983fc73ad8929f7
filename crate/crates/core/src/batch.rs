//! Batch parsing over independent utterances, each with a fresh dialogue
//! context. Uses rayon when the `parallel` feature is on.

use std::fmt;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::ConfigError;
use crate::nlu::{DialogueContext, IntentFrame, IntentLabel, Nlu};

pub fn parse_batch_sequential<S: AsRef<str>>(nlu: &Nlu, utterances: &[S]) -> Vec<IntentFrame> {
    utterances
        .iter()
        .map(|u| nlu.parse(u.as_ref(), &mut DialogueContext::new()))
        .collect()
}

#[cfg(feature = "parallel")]
pub fn parse_batch<S: AsRef<str> + Sync>(nlu: &Nlu, utterances: &[S]) -> Vec<IntentFrame> {
    utterances
        .par_iter()
        .map(|u| nlu.parse(u.as_ref(), &mut DialogueContext::new()))
        .collect()
}

#[cfg(not(feature = "parallel"))]
pub fn parse_batch<S: AsRef<str> + Sync>(nlu: &Nlu, utterances: &[S]) -> Vec<IntentFrame> {
    parse_batch_sequential(nlu, utterances)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusEntry {
    pub utterance: String,
    pub intent: IntentLabel,
    /// Phrasing not written as a rule; scored separately.
    pub paraphrase: bool,
}

/// `utterance<TAB>intent<TAB>literal|paraphrase` lines; `#` comments.
pub fn parse_corpus(text: &str, file: &str) -> Result<Vec<CorpusEntry>, ConfigError> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let err = |message: String| ConfigError::Parse {
            file: file.to_string(),
            line: n + 1,
            message,
        };
        let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
        let [utterance, intent, kind] = fields.as_slice() else {
            return Err(err(format!(
                "expected 3 tab-separated fields, found {}",
                fields.len()
            )));
        };
        let intent = IntentLabel::parse(intent).ok_or_else(|| err(format!("unknown intent '{intent}'")))?;
        let paraphrase = match *kind {
            "literal" => false,
            "paraphrase" => true,
            other => return Err(err(format!("expected literal or paraphrase, got '{other}'"))),
        };
        out.push(CorpusEntry {
            utterance: utterance.to_string(),
            intent,
            paraphrase,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Miss {
    pub utterance: String,
    pub expected: IntentLabel,
    pub got: IntentLabel,
}

#[derive(Debug, Clone, Default)]
pub struct CorpusReport {
    pub total: usize,
    pub correct: usize,
    pub literal_total: usize,
    pub literal_correct: usize,
    pub misses: Vec<Miss>,
}

impl CorpusReport {
    pub fn accuracy(&self) -> f64 {
        ratio(self.correct, self.total)
    }

    pub fn literal_accuracy(&self) -> f64 {
        ratio(self.literal_correct, self.literal_total)
    }
}

fn ratio(a: usize, b: usize) -> f64 {
    if b == 0 {
        1.0
    } else {
        a as f64 / b as f64
    }
}

impl fmt::Display for CorpusReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}/{} correct ({:.1}%), literal subset {}/{}",
            self.correct,
            self.total,
            100.0 * self.accuracy(),
            self.literal_correct,
            self.literal_total
        )?;
        for m in &self.misses {
            write!(f, "\n  '{}': expected {}, got {}", m.utterance, m.expected, m.got)?;
        }
        Ok(())
    }
}

pub fn evaluate_corpus(nlu: &Nlu, entries: &[CorpusEntry]) -> CorpusReport {
    let utterances: Vec<&str> = entries.iter().map(|e| e.utterance.as_str()).collect();
    let frames = parse_batch(nlu, &utterances);
    let mut report = CorpusReport::default();
    for (entry, frame) in entries.iter().zip(&frames) {
        let hit = frame.intent == entry.intent;
        report.total += 1;
        report.correct += usize::from(hit);
        if !entry.paraphrase {
            report.literal_total += 1;
            report.literal_correct += usize::from(hit);
        }
        if !hit {
            report.misses.push(Miss {
                utterance: entry.utterance.clone(),
                expected: entry.intent,
                got: frame.intent,
            });
        }
    }
    report
}
