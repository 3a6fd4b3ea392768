use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Issue, Result};

pub const PROFILE_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Deserialize, Serialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct ProfileDoc {
    schema_version: u32,
    name: String,
    extensions: Vec<String>,
    #[serde(default)]
    line_comments: Vec<String>,
    #[serde(default)]
    block_comments: Vec<[String; 2]>,
    #[serde(default)]
    string_delimiters: Vec<String>,
    #[serde(default)]
    escape: Option<char>,
    #[serde(default)]
    operators: Vec<String>,
    #[serde(default)]
    operator_keywords: Vec<String>,
    #[serde(default)]
    decision_tokens: Vec<String>,
    #[serde(default)]
    ignored_tokens: Vec<String>,
}

/// Table-driven description of a language's lexical surface.
#[derive(Debug, Clone)]
pub struct LanguageProfile {
    pub name: String,
    pub(crate) extensions: BTreeSet<String>,
    pub(crate) line_comments: Vec<String>,
    pub(crate) block_comments: Vec<(String, String)>,
    /// Longest first so `"""` wins over `"`.
    pub(crate) string_delimiters: Vec<String>,
    pub(crate) escape: Option<char>,
    /// Operators, decision symbols and ignored symbols, longest first.
    pub(crate) symbols: Vec<String>,
    pub(crate) operator_keywords: BTreeSet<String>,
    pub(crate) decisions: BTreeSet<String>,
    pub(crate) ignored: BTreeSet<String>,
}

fn longest_first(mut v: Vec<String>) -> Vec<String> {
    v.sort_by(|a, b| b.chars().count().cmp(&a.chars().count()).then(a.cmp(b)));
    v.dedup();
    v
}

fn is_word(s: &str) -> bool {
    s.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
        && s.chars().all(|c| c.is_alphanumeric() || c == '_')
}

impl LanguageProfile {
    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ProfileDoc = serde_json::from_str(text).map_err(|e| Error::json("language profile", e))?;
        let mut issues = Vec::new();
        if doc.schema_version != PROFILE_SCHEMA_VERSION {
            issues.push(Issue::new("schemaVersion", format!("unsupported version {}", doc.schema_version)));
        }
        if doc.name.trim().is_empty() {
            issues.push(Issue::new("name", "must not be empty"));
        }
        if doc.extensions.is_empty() {
            issues.push(Issue::new("extensions", "at least one extension is required"));
        }
        let mut check_nonempty = |field: &str, list: &[String]| {
            for (k, t) in list.iter().enumerate() {
                if t.is_empty() || t.chars().any(char::is_whitespace) {
                    issues.push(Issue::new(format!("{field}[{k}]"), "tokens must be non-empty and contain no whitespace"));
                }
            }
        };
        check_nonempty("extensions", &doc.extensions);
        check_nonempty("lineComments", &doc.line_comments);
        check_nonempty("stringDelimiters", &doc.string_delimiters);
        check_nonempty("operators", &doc.operators);
        check_nonempty("operatorKeywords", &doc.operator_keywords);
        check_nonempty("decisionTokens", &doc.decision_tokens);
        check_nonempty("ignoredTokens", &doc.ignored_tokens);
        for (k, [open, close]) in doc.block_comments.iter().enumerate() {
            if open.is_empty() || close.is_empty() {
                issues.push(Issue::new(format!("blockComments[{k}]"), "delimiters must be non-empty"));
            }
        }
        for (k, w) in doc.operator_keywords.iter().enumerate() {
            if !w.is_empty() && !is_word(w) {
                issues.push(Issue::new(format!("operatorKeywords[{k}]"), format!("`{w}` is not a word")));
            }
        }
        for (k, t) in doc.operators.iter().chain(&doc.ignored_tokens).enumerate() {
            if !t.is_empty() && is_word(t) {
                issues.push(Issue::new(
                    format!("operators/ignoredTokens[{k}]"),
                    format!("`{t}` is a word; list it under operatorKeywords"),
                ));
            }
        }
        if !issues.is_empty() {
            return Err(Error::Validation(issues));
        }

        let mut symbols: Vec<String> = doc.operators.clone();
        symbols.extend(doc.ignored_tokens.iter().cloned());
        symbols.extend(doc.decision_tokens.iter().filter(|t| !is_word(t)).cloned());
        let extensions = doc
            .extensions
            .iter()
            .map(|e| e.trim_start_matches('.').to_ascii_lowercase())
            .collect();
        Ok(Self {
            name: doc.name,
            extensions,
            line_comments: longest_first(doc.line_comments),
            block_comments: doc.block_comments.into_iter().map(|[a, b]| (a, b)).collect(),
            string_delimiters: longest_first(doc.string_delimiters),
            escape: doc.escape,
            symbols: longest_first(symbols),
            operator_keywords: doc.operator_keywords.into_iter().collect(),
            decisions: doc.decision_tokens.into_iter().collect(),
            ignored: doc.ignored_tokens.into_iter().collect(),
        })
    }

    pub fn handles_extension(&self, ext: &str) -> bool {
        self.extensions.contains(&ext.to_ascii_lowercase())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_profiles() {
        assert!(LanguageProfile::from_json("{").is_err());
        let doc = r#"{"schemaVersion":1,"name":"x","extensions":[],"operators":["if"]}"#;
        match LanguageProfile::from_json(doc).unwrap_err() {
            Error::Validation(v) => assert_eq!(v.len(), 2, "{v:?}"),
            e => panic!("{e}"),
        }
    }

    #[test]
    fn symbols_sorted_longest_first() {
        let doc = r#"{"schemaVersion":1,"name":"x","extensions":[".X"],"operators":["<","<<=","<<"],"decisionTokens":["&&","if"]}"#;
        let p = LanguageProfile::from_json(doc).unwrap();
        assert_eq!(p.symbols, vec!["<<=", "&&", "<<", "<"]);
        assert!(p.handles_extension("x"));
    }
}
