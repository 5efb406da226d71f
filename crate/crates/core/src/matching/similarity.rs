use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Knobs for name-based entity matching.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default, deny_unknown_fields)]
pub struct SimilarityConfig {
    /// Minimum name score for two entities (and two fields) to count as
    /// similar.
    pub threshold: f64,
    /// Optional synonym sets: one line per set, comma-separated lowercase
    /// tokens.
    pub synonym_dict_path: Option<PathBuf>,
    /// Minimum matched-field count for an entity pair; entities without any
    /// fields fall back to name-only matching.
    pub min_field_matches: u32,
}

impl Default for SimilarityConfig {
    fn default() -> Self {
        SimilarityConfig { threshold: 0.80, synonym_dict_path: None, min_field_matches: 1 }
    }
}

impl SimilarityConfig {
    pub fn check(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.threshold) {
            return Err(Error::Config(format!(
                "similarity threshold {} is outside [0, 1]",
                self.threshold
            )));
        }
        Ok(())
    }
}

/// Token-level synonym sets. Two tokens are synonymous when they appear on
/// the same line of the dictionary file.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SynonymDict {
    groups: BTreeMap<String, u32>,
}

impl SynonymDict {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(Self::parse(&text))
    }

    pub fn parse(text: &str) -> Self {
        let mut groups = BTreeMap::new();
        let mut next = 0u32;
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let tokens: Vec<String> = line
                .split(',')
                .map(|t| t.trim().to_lowercase())
                .filter(|t| !t.is_empty())
                .collect();
            if tokens.len() < 2 {
                continue;
            }
            // A token already in a group pulls the whole line into it.
            let group = tokens
                .iter()
                .find_map(|t| groups.get(t).copied())
                .unwrap_or_else(|| {
                    next += 1;
                    next - 1
                });
            for token in tokens {
                groups.entry(token).or_insert(group);
            }
        }
        SynonymDict { groups }
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn synonymous(&self, a: &str, b: &str) -> bool {
        match (self.groups.get(a), self.groups.get(b)) {
            (Some(ga), Some(gb)) => ga == gb,
            _ => false,
        }
    }
}

/// Split an identifier into lowercase tokens at camelCase humps, acronym
/// ends and non-alphanumeric separators. Digits stay attached to the token
/// they follow.
pub fn tokenize(name: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    let chars: Vec<char> = name.chars().collect();
    for (i, &c) in chars.iter().enumerate() {
        if !c.is_alphanumeric() {
            if !current.is_empty() {
                tokens.push(std::mem::take(&mut current));
            }
            continue;
        }
        if c.is_uppercase() && !current.is_empty() {
            let prev = chars[i - 1];
            let acronym_end =
                prev.is_uppercase() && chars.get(i + 1).is_some_and(|n| n.is_lowercase());
            if prev.is_lowercase() || prev.is_ascii_digit() || acronym_end {
                tokens.push(std::mem::take(&mut current));
            }
        }
        current.extend(c.to_lowercase());
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

/// Edit distance with unit costs for insert, delete and substitute.
pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    if a.is_empty() {
        return b.len();
    }
    if b.is_empty() {
        return a.len();
    }
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0usize; b.len() + 1];
    for (i, &ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, &cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Score how alike two identifiers are, in [0, 1]. Token-normalized equality
/// and dictionary synonymy score 1.0; otherwise the score degrades with the
/// edit distance between the normalized concatenated names.
pub fn name_similarity(a: &str, b: &str, dict: &SynonymDict) -> Result<f64> {
    let ta = tokenize(a);
    let tb = tokenize(b);
    if ta.is_empty() {
        return Err(Error::InvalidName);
    }
    if tb.is_empty() {
        return Err(Error::InvalidName);
    }
    if ta == tb {
        return Ok(1.0);
    }
    let na = ta.concat();
    let nb = tb.concat();
    if dict.synonymous(&na, &nb) {
        return Ok(1.0);
    }
    if ta.len() == tb.len()
        && ta
            .iter()
            .zip(&tb)
            .all(|(x, y)| x == y || dict.synonymous(x, y))
    {
        return Ok(1.0);
    }
    let dist = levenshtein(&na, &nb);
    let max_len = na.chars().count().max(nb.chars().count());
    Ok(1.0 - dist as f64 / max_len as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokenizes_camel_snake_and_acronyms() {
        assert_eq!(tokenize("UserDto"), vec!["user", "dto"]);
        assert_eq!(tokenize("userDTO"), vec!["user", "dto"]);
        assert_eq!(tokenize("order_alter_info"), vec!["order", "alter", "info"]);
        assert_eq!(tokenize("HTTPServerConfig"), vec!["http", "server", "config"]);
        assert_eq!(tokenize("OrderV2"), vec!["order", "v2"]);
        assert!(tokenize("___").is_empty());
    }

    #[test]
    fn levenshtein_matches_hand_computed_values() {
        // Frozen oracles, worked out by hand before the implementation.
        assert_eq!(levenshtein("trip", "journey"), 6);
        assert_eq!(levenshtein("order", "orderalterinfo"), 9);
        assert_eq!(levenshtein("kitten", "sitting"), 3);
        assert_eq!(levenshtein("", "abc"), 3);
        assert_eq!(levenshtein("same", "same"), 0);
    }

    #[test]
    fn identical_names_score_one() {
        let dict = SynonymDict::default();
        assert_eq!(name_similarity("Order", "Order", &dict).unwrap(), 1.0);
        assert_eq!(name_similarity("UserDto", "userDTO", &dict).unwrap(), 1.0);
    }

    #[test]
    fn distance_fallback_uses_normalized_concatenation() {
        let dict = SynonymDict::default();
        let score = name_similarity("Trip", "Journey", &dict).unwrap();
        assert!((score - (1.0 - 6.0 / 7.0)).abs() < 1e-12, "got {score}");
        let score = name_similarity("Order", "OrderAlterInfo", &dict).unwrap();
        assert!((score - (1.0 - 9.0 / 14.0)).abs() < 1e-12, "got {score}");
    }

    #[test]
    fn dictionary_promotes_synonyms_to_one() {
        let dict = SynonymDict::parse("trip, journey\nuser, customer\n");
        assert_eq!(name_similarity("Trip", "Journey", &dict).unwrap(), 1.0);
        // Aligned tokens: trip~journey by dictionary, info exact.
        assert_eq!(name_similarity("TripInfo", "JourneyInfo", &dict).unwrap(), 1.0);
        // Token counts differ, no full-name entry: falls back to distance.
        assert!(name_similarity("TripInfo", "Journey", &dict).unwrap() < 1.0);
    }

    #[test]
    fn dictionary_merges_overlapping_lines() {
        let dict = SynonymDict::parse("a, b\nb, c\n");
        assert!(dict.synonymous("a", "c"));
    }

    #[test]
    fn similarity_is_symmetric() {
        let dict = SynonymDict::default();
        for (a, b) in [("Trip", "Journey"), ("Order", "OrderAlterInfo"), ("Route", "RoutePlan")] {
            let ab = name_similarity(a, b, &dict).unwrap();
            let ba = name_similarity(b, a, &dict).unwrap();
            assert_eq!(ab, ba);
        }
    }

    #[test]
    fn empty_names_are_rejected() {
        let dict = SynonymDict::default();
        assert!(matches!(name_similarity("", "x", &dict), Err(Error::InvalidName)));
        assert!(matches!(name_similarity("x", "_", &dict), Err(Error::InvalidName)));
    }
}
