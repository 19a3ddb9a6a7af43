//! Parser for the line-oriented `.thue` format:
//!
//! ```text
//! # comment
//! alphabet: a b
//! rule: ab = ba
//! goal: aab = aba
//! ```
//!
//! Words are whitespace-free. Each character is a one-character symbol, and
//! longer symbol names are written in parentheses: `(sym1)(sym2)`.

use thiserror::Error;

use super::{Symbol, ThueInstance, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: unknown symbol `{symbol}` at offset {offset} of the word")]
    UnknownSymbol { line: usize, offset: usize, symbol: String },
    #[error("line {line}: rule side is empty")]
    EmptyRuleSide { line: usize },
    #[error("line {line}: goal side is empty")]
    EmptyGoalSide { line: usize },
    #[error("no `goal:` line")]
    MissingGoal,
    #[error("line {line}: second `goal:` line")]
    DuplicateGoal { line: usize },
    #[error("no `alphabet:` line")]
    MissingAlphabet,
    #[error("line {line}: second `alphabet:` line")]
    DuplicateAlphabet { line: usize },
    #[error("line {line}: symbol `{symbol}` listed twice in the alphabet")]
    DuplicateAlphabetSymbol { line: usize, symbol: String },
    #[error("line {line}: `{symbol}` is reserved")]
    ReservedSymbol { line: usize, symbol: String },
    #[error("line {line}: invalid symbol name `{token}`")]
    InvalidSymbol { line: usize, token: String },
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
}

enum Directive<'a> {
    Alphabet(&'a str),
    Rule(&'a str),
    Goal(&'a str),
}

pub fn parse_thue(text: &str) -> Result<ThueInstance, ParseError> {
    let mut alphabet: Option<(usize, Vec<Symbol>)> = None;
    let mut rules: Vec<(usize, &str)> = Vec::new();
    let mut goal: Option<(usize, &str)> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        match directive(content, line)? {
            Directive::Alphabet(rest) => {
                if alphabet.is_some() {
                    return Err(ParseError::DuplicateAlphabet { line });
                }
                let mut symbols: Vec<Symbol> = Vec::new();
                for token in rest.split_whitespace() {
                    let s = Symbol::new(token).map_err(|_| ParseError::InvalidSymbol {
                        line,
                        token: token.to_string(),
                    })?;
                    if s.is_reserved() {
                        return Err(ParseError::ReservedSymbol {
                            line,
                            symbol: token.to_string(),
                        });
                    }
                    if symbols.contains(&s) {
                        return Err(ParseError::DuplicateAlphabetSymbol {
                            line,
                            symbol: token.to_string(),
                        });
                    }
                    symbols.push(s);
                }
                if symbols.is_empty() {
                    return Err(ParseError::Malformed {
                        line,
                        message: "alphabet must list at least one symbol".into(),
                    });
                }
                alphabet = Some((line, symbols));
            }
            Directive::Rule(rest) => rules.push((line, rest)),
            Directive::Goal(rest) => {
                if goal.is_some() {
                    return Err(ParseError::DuplicateGoal { line });
                }
                goal = Some((line, rest));
            }
        }
    }

    let (_, alphabet) = alphabet.ok_or(ParseError::MissingAlphabet)?;
    let mut parsed_rules = Vec::with_capacity(rules.len());
    for (line, rest) in rules {
        let (l, r) = equation(rest, line, &alphabet)?;
        if l.is_empty() || r.is_empty() {
            return Err(ParseError::EmptyRuleSide { line });
        }
        parsed_rules.push((l, r));
    }
    let (goal_line, goal_text) = goal.ok_or(ParseError::MissingGoal)?;
    let (l, r) = equation(goal_text, goal_line, &alphabet)?;
    if l.is_empty() || r.is_empty() {
        return Err(ParseError::EmptyGoalSide { line: goal_line });
    }

    // Symbol membership was already checked above with positions attached.
    ThueInstance::new(alphabet, parsed_rules, l, r).map_err(|e| ParseError::Malformed {
        line: goal_line,
        message: e.to_string(),
    })
}

fn directive(content: &str, line: usize) -> Result<Directive<'_>, ParseError> {
    let (head, rest) = content.split_once(':').ok_or_else(|| ParseError::Malformed {
        line,
        message: format!("expected `alphabet:`, `rule:` or `goal:`, found `{content}`"),
    })?;
    match head.trim() {
        "alphabet" => Ok(Directive::Alphabet(rest)),
        "rule" => Ok(Directive::Rule(rest)),
        "goal" => Ok(Directive::Goal(rest)),
        other => Err(ParseError::Malformed {
            line,
            message: format!("unknown directive `{other}`"),
        }),
    }
}

fn equation(text: &str, line: usize, alphabet: &[Symbol]) -> Result<(Word, Word), ParseError> {
    let mut sides = text.split('=');
    let (Some(l), Some(r), None) = (sides.next(), sides.next(), sides.next()) else {
        return Err(ParseError::Malformed {
            line,
            message: "expected exactly one `=`".into(),
        });
    };
    Ok((
        parse_word_at(l.trim(), line, alphabet)?,
        parse_word_at(r.trim(), line, alphabet)?,
    ))
}

/// Parses a single word against an alphabet. Errors report line 1.
pub fn parse_word(text: &str, alphabet: &[Symbol]) -> Result<Word, ParseError> {
    parse_word_at(text.trim(), 1, alphabet)
}

fn parse_word_at(text: &str, line: usize, alphabet: &[Symbol]) -> Result<Word, ParseError> {
    if text.chars().any(char::is_whitespace) {
        return Err(ParseError::Malformed {
            line,
            message: format!("words may not contain whitespace: `{text}`"),
        });
    }
    let lookup = |name: &str, offset: usize| {
        alphabet
            .iter()
            .find(|s| s.as_str() == name)
            .cloned()
            .ok_or_else(|| ParseError::UnknownSymbol {
                line,
                offset,
                symbol: name.to_string(),
            })
    };
    let mut symbols = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some((pos, c)) = chars.next() {
        if c == '(' {
            let start = pos + 1;
            let mut end = None;
            for (p, c2) in chars.by_ref() {
                if c2 == ')' {
                    end = Some(p);
                    break;
                }
            }
            let end = end.ok_or_else(|| ParseError::Malformed {
                line,
                message: format!("unclosed `(` in `{text}`"),
            })?;
            symbols.push(lookup(&text[start..end], start + 1)?);
        } else if c == ')' {
            return Err(ParseError::Malformed {
                line,
                message: format!("unbalanced `)` in `{text}`"),
            });
        } else {
            symbols.push(lookup(&c.to_string(), pos + 1)?);
        }
    }
    Ok(Word::from_symbols(symbols))
}
