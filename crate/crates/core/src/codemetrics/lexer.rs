use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::profile::LanguageProfile;
use crate::indicators::Halstead;

/// Counts for one source file.
///
/// A line holding any code token (string contents included) is a code line;
/// otherwise a line touched by a comment is a comment line; the rest are
/// blank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FileMetrics {
    pub loc: u64,
    pub blank_lines: u64,
    pub comment_lines: u64,
    pub halstead: Halstead,
    pub decision_points: u64,
}

impl FileMetrics {
    pub fn physical_lines(&self) -> u64 {
        self.loc + self.blank_lines + self.comment_lines
    }
}

#[derive(Default)]
struct Tally {
    metrics: FileMetrics,
    operators: BTreeSet<String>,
    operands: BTreeSet<String>,
    line_code: bool,
    line_comment: bool,
}

impl Tally {
    fn end_line(&mut self) {
        if self.line_code {
            self.metrics.loc += 1;
        } else if self.line_comment {
            self.metrics.comment_lines += 1;
        } else {
            self.metrics.blank_lines += 1;
        }
        self.line_code = false;
        self.line_comment = false;
    }

    fn operator(&mut self, tok: &str) {
        self.metrics.halstead.big_n1 += 1;
        self.operators.insert(tok.to_string());
    }

    fn operand(&mut self, tok: &str) {
        self.metrics.halstead.big_n2 += 1;
        self.operands.insert(tok.to_string());
    }

    fn finish(mut self) -> FileMetrics {
        self.metrics.halstead.n1 = self.operators.len() as u64;
        self.metrics.halstead.n2 = self.operands.len() as u64;
        self.metrics
    }
}

enum State {
    Code,
    Block(Vec<char>),
    Str { close: Vec<char>, text: String },
}

fn at(chars: &[char], pos: usize, pat: &[char]) -> bool {
    chars.len() >= pos + pat.len() && chars[pos..pos + pat.len()] == *pat
}

/// Tokenize `text` with `profile` and count lines, Halstead tokens and
/// decision points. Nested block comments are not recognised.
pub fn scan_source(text: &str, profile: &LanguageProfile) -> FileMetrics {
    let chars: Vec<char> = text.chars().collect();
    let to_chars = |s: &String| s.chars().collect::<Vec<char>>();
    let line_comments: Vec<Vec<char>> = profile.line_comments.iter().map(to_chars).collect();
    let blocks: Vec<(Vec<char>, Vec<char>)> = profile
        .block_comments
        .iter()
        .map(|(a, b)| (a.chars().collect(), b.chars().collect()))
        .collect();
    let strings: Vec<Vec<char>> = profile.string_delimiters.iter().map(to_chars).collect();
    let symbols: Vec<Vec<char>> = profile.symbols.iter().map(to_chars).collect();

    let mut t = Tally::default();
    let mut state = State::Code;
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            match &mut state {
                State::Str { text, .. } => {
                    text.push('\n');
                    t.line_code = true;
                }
                State::Block(_) => t.line_comment = true,
                State::Code => {}
            }
            t.end_line();
            i += 1;
            continue;
        }
        match &mut state {
            State::Block(close) => {
                t.line_comment = true;
                if at(&chars, i, close) {
                    i += close.len();
                    state = State::Code;
                } else {
                    i += 1;
                }
            }
            State::Str { close, text } => {
                t.line_code = true;
                if Some(c) == profile.escape && i + 1 < chars.len() && chars[i + 1] != '\n' {
                    text.push(c);
                    text.push(chars[i + 1]);
                    i += 2;
                } else if at(&chars, i, close) {
                    text.extend(close.iter());
                    i += close.len();
                    let literal = std::mem::take(text);
                    t.operand(&literal);
                    state = State::Code;
                } else {
                    text.push(c);
                    i += 1;
                }
            }
            State::Code => {
                // The longer opener wins, so Lua's `--[[` is a block, not a line comment.
                let line = line_comments.iter().filter(|p| at(&chars, i, p)).map(Vec::len).max();
                let block = blocks.iter().filter(|(o, _)| at(&chars, i, o)).max_by_key(|(o, _)| o.len());
                if c.is_whitespace() {
                    i += 1;
                } else if let Some((open, close)) = block.filter(|(o, _)| line.is_none_or(|n| o.len() >= n)) {
                    t.line_comment = true;
                    i += open.len();
                    state = State::Block(close.clone());
                } else if line.is_some() {
                    t.line_comment = true;
                    while i < chars.len() && chars[i] != '\n' {
                        i += 1;
                    }
                } else if let Some(d) = strings.iter().find(|d| at(&chars, i, d)) {
                    t.line_code = true;
                    i += d.len();
                    state = State::Str {
                        close: d.clone(),
                        text: d.iter().collect(),
                    };
                } else if c.is_alphabetic() || c == '_' {
                    let start = i;
                    while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                        i += 1;
                    }
                    let word: String = chars[start..i].iter().collect();
                    t.line_code = true;
                    let decision = profile.decisions.contains(&word);
                    if decision {
                        t.metrics.decision_points += 1;
                    }
                    if decision || profile.operator_keywords.contains(&word) {
                        t.operator(&word);
                    } else {
                        t.operand(&word);
                    }
                } else if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(char::is_ascii_digit)) {
                    let start = i;
                    while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '.') {
                        i += 1;
                    }
                    let num: String = chars[start..i].iter().collect();
                    t.line_code = true;
                    t.operand(&num);
                } else {
                    let len = symbols.iter().find(|s| at(&chars, i, s)).map_or(1, Vec::len);
                    let tok: String = chars[i..i + len].iter().collect();
                    i += len;
                    t.line_code = true;
                    if profile.decisions.contains(&tok) {
                        t.metrics.decision_points += 1;
                    }
                    if !profile.ignored.contains(&tok) {
                        t.operator(&tok);
                    }
                }
            }
        }
    }
    if chars.last().is_some_and(|&c| c != '\n') {
        t.end_line();
    }
    if let State::Str { text, .. } = state {
        // Unterminated literal: still an operand.
        if !text.is_empty() {
            t.operand(&text);
        }
    }
    t.finish()
}
