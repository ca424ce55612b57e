//! Sentence variants referring to occupancy states.
//!
//! A state with `k` entities in state 1 and `N - k` in state 2 is referred
//! to by phrases of the form `<number> <state1> and <number> <state2>` in
//! both orderings, one phrase per pair of number references. All phrases
//! are lowercase; the grammatical form keys on the numeric count (singular
//! exactly at one), not on the reference text.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::occupancy::{DomainError, OccupancyConfig};

#[derive(Clone, Debug, Error, PartialEq)]
pub enum SentenceError {
    #[error("no textual references for the number {0}")]
    LexiconGap(u32),
    #[error("state lexeme has an empty {0} form")]
    EmptyLexeme(&'static str),
    #[error("number lexicon entry for {number} is empty or blank")]
    EmptyReference { number: u32 },
    #[error(transparent)]
    Domain(#[from] DomainError),
}

/// Singular and plural surface forms for one state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StateLexeme {
    singular: String,
    plural: String,
}

impl StateLexeme {
    pub fn new(
        singular: impl Into<String>,
        plural: impl Into<String>,
    ) -> Result<Self, SentenceError> {
        let singular = singular.into().trim().to_lowercase();
        let plural = plural.into().trim().to_lowercase();
        if singular.is_empty() {
            return Err(SentenceError::EmptyLexeme("singular"));
        }
        if plural.is_empty() {
            return Err(SentenceError::EmptyLexeme("plural"));
        }
        Ok(StateLexeme { singular, plural })
    }

    pub fn singular(&self) -> &str {
        &self.singular
    }

    pub fn plural(&self) -> &str {
        &self.plural
    }

    /// Grammatical form for a count: singular exactly at one.
    pub fn form(&self, count: u32) -> &str {
        if count == 1 {
            &self.singular
        } else {
            &self.plural
        }
    }
}

/// Textual references for the numbers a run may mention.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumberLexicon {
    references: BTreeMap<u32, Vec<String>>,
}

impl NumberLexicon {
    pub fn new(references: BTreeMap<u32, Vec<String>>) -> Result<Self, SentenceError> {
        let mut normalized = BTreeMap::new();
        for (number, entries) in references {
            let entries: Vec<String> = entries
                .into_iter()
                .map(|e| e.trim().to_lowercase())
                .collect();
            if entries.is_empty() || entries.iter().any(String::is_empty) {
                return Err(SentenceError::EmptyReference { number });
            }
            normalized.insert(number, entries);
        }
        Ok(NumberLexicon {
            references: normalized,
        })
    }

    /// The reference table used for web experiments: every number from 0 to
    /// 16 as a digit string plus its English word, with the extra everyday
    /// forms "no", "a" and "a couple of" for 0, 1 and 2.
    pub fn standard() -> Self {
        const WORDS: [&str; 17] = [
            "zero", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine",
            "ten", "eleven", "twelve", "thirteen", "fourteen", "fifteen", "sixteen",
        ];
        let mut references = BTreeMap::new();
        for (number, word) in WORDS.iter().enumerate() {
            references.insert(
                number as u32,
                vec![number.to_string(), (*word).to_string()],
            );
        }
        references.insert(0, vec!["0".into(), "no".into(), "zero".into()]);
        references.insert(1, vec!["1".into(), "a".into(), "one".into()]);
        references.insert(2, vec!["2".into(), "two".into(), "a couple of".into()]);
        NumberLexicon { references }
    }

    pub fn references(&self, number: u32) -> Result<&[String], SentenceError> {
        self.references
            .get(&number)
            .map(Vec::as_slice)
            .ok_or(SentenceError::LexiconGap(number))
    }

    pub fn max_number(&self) -> Option<u32> {
        self.references.keys().next_back().copied()
    }
}

/// The distinct phrases referring to one occupancy state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SentenceSet {
    state: OccupancyConfig,
    sentences: Vec<String>,
}

impl SentenceSet {
    pub fn state(&self) -> OccupancyConfig {
        self.state
    }

    pub fn sentences(&self) -> &[String] {
        &self.sentences
    }

    pub fn len(&self) -> usize {
        self.sentences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sentences.is_empty()
    }
}

/// Builds every phrase for the state with `k` of `lex1` and `total - k` of
/// `lex2`: both orderings of `<u> <F1> and <v> <F2>` over all reference
/// pairs `(u, v)`, duplicates dropped while keeping first-seen order.
pub fn generate_sentences(
    k: u32,
    total: u32,
    lex1: &StateLexeme,
    lex2: &StateLexeme,
    numbers: &NumberLexicon,
) -> Result<SentenceSet, SentenceError> {
    let state = OccupancyConfig::new(k, total)?;
    let first = numbers.references(k)?;
    let second = numbers.references(total - k)?;
    let f1 = lex1.form(k);
    let f2 = lex2.form(total - k);
    let mut sentences: Vec<String> = Vec::with_capacity(2 * first.len() * second.len());
    fn push_unique(sentences: &mut Vec<String>, candidate: String) {
        if !sentences.iter().any(|s| *s == candidate) {
            sentences.push(candidate);
        }
    }
    for u in first {
        for v in second {
            push_unique(&mut sentences, format!("{u} {f1} and {v} {f2}"));
            push_unique(&mut sentences, format!("{v} {f2} and {u} {f1}"));
        }
    }
    Ok(SentenceSet { state, sentences })
}
