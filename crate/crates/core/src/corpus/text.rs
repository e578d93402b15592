use alloc::string::String;
use alloc::vec::Vec;

/// Lowercase and split on anything that is not alphanumeric.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(|t| t.chars().flat_map(char::to_lowercase).collect())
        .collect()
}

/// Whether `word` occurs as a token of `text`.
pub fn contains_word(text: &str, word: &str) -> bool {
    let needle: String = word.chars().flat_map(char::to_lowercase).collect();
    tokenize(text).contains(&needle)
}

/// A short English stop-word list.
pub const DEFAULT_STOPWORDS: &[&str] = &[
    "a", "an", "and", "are", "as", "at", "be", "but", "by", "for", "from", "has", "have", "he", "her", "his",
    "in", "into", "is", "it", "its", "of", "on", "or", "she", "that", "the", "their", "them", "there",
    "they", "this", "to", "up", "was", "were", "while", "who", "with", "down", "out", "over", "some", "two",
    "one", "other", "another", "near", "next", "very",
];
