use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

/// Fixed English stopword list used when no configuration overrides it.
pub const DEFAULT_STOPWORDS: [&str; 50] = [
    "a", "about", "after", "all", "also", "an", "and", "any", "are", "as", "at", "be", "been",
    "before", "between", "but", "by", "can", "during", "each", "for", "from", "has", "have", "in",
    "into", "is", "it", "its", "may", "not", "of", "on", "or", "other", "over", "such", "than",
    "that", "the", "their", "these", "this", "those", "to", "using", "was", "were", "which", "with",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(from = "TokenizerConfigFile", into = "TokenizerConfigFile")]
pub struct TokenizerConfig {
    stopwords: BTreeSet<String>,
    min_token_length: usize,
    lowercase: bool,
}

#[derive(Serialize, Deserialize)]
struct TokenizerConfigFile {
    #[serde(default = "default_stopwords")]
    stopwords: Vec<String>,
    #[serde(default = "default_min_len")]
    min_token_length: usize,
    #[serde(default = "default_lowercase")]
    lowercase: bool,
}

fn default_stopwords() -> Vec<String> {
    DEFAULT_STOPWORDS.iter().map(|s| s.to_string()).collect()
}

fn default_min_len() -> usize {
    3
}

fn default_lowercase() -> bool {
    true
}

impl From<TokenizerConfigFile> for TokenizerConfig {
    fn from(file: TokenizerConfigFile) -> Self {
        TokenizerConfig::new(file.stopwords, file.min_token_length, file.lowercase)
    }
}

impl From<TokenizerConfig> for TokenizerConfigFile {
    fn from(config: TokenizerConfig) -> Self {
        TokenizerConfigFile {
            stopwords: config.stopwords.into_iter().collect(),
            min_token_length: config.min_token_length,
            lowercase: config.lowercase,
        }
    }
}

impl Default for TokenizerConfig {
    fn default() -> Self {
        TokenizerConfig::new(default_stopwords(), default_min_len(), default_lowercase())
    }
}

impl TokenizerConfig {
    /// Stopwords are normalized the same way tokens are, so lookups are
    /// consistent with the token stream.
    pub fn new<I, S>(stopwords: I, min_token_length: usize, lowercase: bool) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let stopwords = stopwords
            .into_iter()
            .map(|w| {
                let w = w.as_ref().trim();
                if lowercase {
                    w.to_lowercase()
                } else {
                    w.to_owned()
                }
            })
            .filter(|w| !w.is_empty())
            .collect();
        Self { stopwords, min_token_length, lowercase }
    }

    pub fn stopwords(&self) -> &BTreeSet<String> {
        &self.stopwords
    }

    pub fn min_token_length(&self) -> usize {
        self.min_token_length
    }

    pub fn lowercase(&self) -> bool {
        self.lowercase
    }

    pub fn is_stopword(&self, token: &str) -> bool {
        self.stopwords.contains(token)
    }
}

/// Splits free text into index terms.
pub fn tokenize(text: &str, config: &TokenizerConfig) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|piece| !piece.is_empty())
        .map(|piece| if config.lowercase { piece.to_lowercase() } else { piece.to_owned() })
        .filter(|t| t.chars().count() >= config.min_token_length && !config.is_stopword(t))
        .collect()
}

/// Normalizes a curated keyword as a whole: trimmed, internal whitespace
/// collapsed, lowercased when configured. Multi-word keywords stay one term.
pub fn keyword_term(keyword: &str, config: &TokenizerConfig) -> Option<String> {
    let term = keyword.split_whitespace().collect::<Vec<_>>().join(" ");
    let term = if config.lowercase { term.to_lowercase() } else { term };
    (!term.is_empty()).then_some(term)
}

/// Identity normalization for keywords coming from any source: trimmed,
/// whitespace-collapsed and lowercased.
pub fn normalize_term(keyword: &str) -> String {
    keyword.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase()
}
