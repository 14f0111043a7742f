//! Lexer for the concrete syntax.
//!
//! Tokens are separated by spaces, horizontal tabs, carriage returns,
//! line and form feeds; `/* ... */` comments are skipped.  Keywords are
//! soft: every word lexes as a name and the parser matches keyword text
//! in position, except for the reserved words which are rejected wherever
//! a name is required.
//!
//! Hyphens are forbidden in user-written names.  When re-reading printed
//! normal forms (`allow_hidden`), a hyphenated word lexes as a hidden
//! name `prefix-uname`, split at the first hyphen; a bracketed instance
//! list inside the prefix (`exAB[Copy]-B`) is recognized by lookahead.

use std::fmt;

use crate::core::names::{is_function_name_char, is_plain_name_char};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Pos {
    pub file: usize,
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TokKind {
    /// A name; `func_only` marks names containing operator characters,
    /// which are only acceptable where function names are.
    Name { text: String, func_only: bool },
    /// A hidden name `prefix-uname` (only with `allow_hidden`).
    HiddenName { prefix: String, uname: String },
    /// The infix placeholder `_`.
    Underscore,
    LBrace,
    RBrace,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Lt,
    Gt,
    Comma,
    Colon,
    Hash,
    /// `->`
    Arrow,
    /// `-->`
    Implies,
    Equals,
    At,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Token {
    pub kind: TokKind,
    pub pos: Pos,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LexError {
    pub msg: String,
    pub pos: Pos,
}

impl fmt::Display for LexError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: lexical error: {}", self.pos, self.msg)
    }
}

impl std::error::Error for LexError {}

struct Lexer<'a> {
    src: &'a [u8],
    i: usize,
    file: usize,
    line: u32,
    col: u32,
    allow_hidden: bool,
}

impl<'a> Lexer<'a> {
    fn pos(&self) -> Pos {
        Pos { file: self.file, line: self.line, col: self.col }
    }

    fn peek(&self) -> Option<char> {
        self.src.get(self.i).map(|&b| b as char)
    }

    fn peek_at(&self, off: usize) -> Option<char> {
        self.src.get(self.i + off).map(|&b| b as char)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.i += 1;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn err(&self, msg: impl Into<String>, pos: Pos) -> LexError {
        LexError { msg: msg.into(), pos }
    }

    fn skip_trivia(&mut self) -> Result<(), LexError> {
        loop {
            match self.peek() {
                Some(c) if c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\x0c' => {
                    self.bump();
                }
                Some('/') if self.peek_at(1) == Some('*') => {
                    let start = self.pos();
                    self.bump();
                    self.bump();
                    loop {
                        match self.peek() {
                            Some('*') if self.peek_at(1) == Some('/') => {
                                self.bump();
                                self.bump();
                                break;
                            }
                            Some(_) => {
                                self.bump();
                            }
                            None => return Err(self.err("unterminated comment", start)),
                        }
                    }
                }
                _ => return Ok(()),
            }
        }
    }

    /// Scans a maximal run of name characters including hyphens.
    fn scan_word(&mut self) -> String {
        let mut out = String::new();
        while let Some(c) = self.peek() {
            if is_function_name_char(c) {
                out.push(c);
                self.bump();
            } else if c == '-' {
                // `->`, `-->` and a trailing hyphen all end the word
                match self.peek_at(1) {
                    Some(n) if is_function_name_char(n) => {
                        out.push('-');
                        self.bump();
                    }
                    _ => break,
                }
            } else {
                break;
            }
        }
        out
    }

    /// After a plain word immediately followed by `[`, tries to scan a
    /// bracketed-instance hidden name `word[a,b]-rest`.  Restores the
    /// lexer state when the pattern does not match.
    fn try_bracketed_hidden(&mut self, word: &str) -> Option<(String, String)> {
        let save = (self.i, self.line, self.col);
        let mut prefix = format!("{}[", word);
        self.bump(); // '['
        loop {
            let part = self.scan_word();
            if part.is_empty() || part.contains('-') {
                break;
            }
            prefix.push_str(&part);
            match self.peek() {
                Some(',') => {
                    prefix.push(',');
                    self.bump();
                }
                Some(']') => {
                    prefix.push(']');
                    self.bump();
                    if self.peek() == Some('-')
                        && self.peek_at(1).map(is_function_name_char).unwrap_or(false)
                    {
                        self.bump(); // '-'
                        let rest = self.scan_word();
                        if !rest.is_empty() && !rest.contains('-') {
                            return Some((prefix, rest));
                        }
                    }
                    break;
                }
                _ => break,
            }
        }
        self.i = save.0;
        self.line = save.1;
        self.col = save.2;
        None
    }

    fn next_token(&mut self) -> Result<Option<Token>, LexError> {
        self.skip_trivia()?;
        let pos = self.pos();
        let c = match self.peek() {
            Some(c) => c,
            None => return Ok(None),
        };
        let kind = match c {
            '{' => {
                self.bump();
                TokKind::LBrace
            }
            '}' => {
                self.bump();
                TokKind::RBrace
            }
            '(' => {
                self.bump();
                TokKind::LParen
            }
            ')' => {
                self.bump();
                TokKind::RParen
            }
            '[' => {
                self.bump();
                TokKind::LBracket
            }
            ']' => {
                self.bump();
                TokKind::RBracket
            }
            '<' => {
                self.bump();
                TokKind::Lt
            }
            '>' => {
                self.bump();
                TokKind::Gt
            }
            ',' => {
                self.bump();
                TokKind::Comma
            }
            ':' => {
                self.bump();
                TokKind::Colon
            }
            '#' => {
                self.bump();
                TokKind::Hash
            }
            '=' => {
                self.bump();
                TokKind::Equals
            }
            '@' => {
                self.bump();
                TokKind::At
            }
            '-' => {
                if self.peek_at(1) == Some('-') && self.peek_at(2) == Some('>') {
                    self.bump();
                    self.bump();
                    self.bump();
                    TokKind::Implies
                } else if self.peek_at(1) == Some('>') {
                    self.bump();
                    self.bump();
                    TokKind::Arrow
                } else {
                    return Err(self.err("stray '-': names may not contain a hyphen", pos));
                }
            }
            c if is_function_name_char(c) => {
                let word = self.scan_word();
                if word == "_" {
                    TokKind::Underscore
                } else if word.starts_with('_') || word.ends_with('_') {
                    return Err(self.err(
                        format!("'{}': underscore may not start or end a name", word),
                        pos,
                    ));
                } else if let Some(idx) = word.find('-') {
                    // hyphenated keywords first, then hidden names
                    if word == "non-constructors" || word == "macro-equation" {
                        TokKind::Name { text: word, func_only: false }
                    } else if self.allow_hidden {
                        let (prefix, uname) = word.split_at(idx);
                        TokKind::HiddenName {
                            prefix: prefix.to_string(),
                            uname: uname[1..].to_string(),
                        }
                    } else {
                        return Err(self.err(
                            format!("'{}': names may not contain a hyphen", word),
                            pos,
                        ));
                    }
                } else if self.allow_hidden && self.peek() == Some('[') {
                    match self.try_bracketed_hidden(&word) {
                        Some((prefix, uname)) => TokKind::HiddenName { prefix, uname },
                        None => TokKind::Name {
                            func_only: !word.chars().all(is_plain_name_char),
                            text: word,
                        },
                    }
                } else {
                    TokKind::Name {
                        func_only: !word.chars().all(is_plain_name_char),
                        text: word,
                    }
                }
            }
            other => {
                return Err(self.err(format!("illegal character '{}'", other), pos));
            }
        };
        Ok(Some(Token { kind, pos }))
    }
}

/// Tokenizes `text`.  `file` tags positions for multi-file diagnostics.
pub fn lex(text: &str, file: usize, allow_hidden: bool) -> Result<Vec<Token>, LexError> {
    if !text.is_ascii() {
        // find the first offender for a useful position
        let mut line = 1u32;
        let mut col = 1u32;
        for ch in text.chars() {
            if !ch.is_ascii() {
                return Err(LexError {
                    msg: format!("non-ASCII character '{}'", ch),
                    pos: Pos { file, line, col },
                });
            }
            if ch == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
    }
    let mut lx = Lexer { src: text.as_bytes(), i: 0, file, line: 1, col: 1, allow_hidden };
    let mut out = Vec::new();
    while let Some(tok) = lx.next_token()? {
        out.push(tok);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds(text: &str) -> Vec<TokKind> {
        lex(text, 0, false).unwrap().into_iter().map(|t| t.kind).collect()
    }

    fn name(t: &str) -> TokKind {
        TokKind::Name { text: t.to_string(), func_only: false }
    }

    #[test]
    fn lexes_infix_declaration() {
        let got = kinds("_ + _ : NAT # NAT -> NAT");
        assert_eq!(
            got,
            vec![
                TokKind::Underscore,
                TokKind::Name { text: "+".into(), func_only: true },
                TokKind::Underscore,
                TokKind::Colon,
                name("NAT"),
                TokKind::Hash,
                name("NAT"),
                TokKind::Arrow,
                name("NAT"),
            ]
        );
    }

    #[test]
    fn empty_input_lexes_to_nothing() {
        assert!(kinds("").is_empty());
    }

    #[test]
    fn hyphen_in_user_name_is_rejected() {
        let err = lex("Bo-x", 0, false).unwrap_err();
        assert!(err.msg.contains("hyphen"));
    }

    #[test]
    fn hidden_names_lex_in_nf_mode() {
        let toks = lex("Bo-and OSeq-seq1 exAB[Copy]-B", 0, true).unwrap();
        let kinds: Vec<_> = toks.into_iter().map(|t| t.kind).collect();
        assert_eq!(
            kinds,
            vec![
                TokKind::HiddenName { prefix: "Bo".into(), uname: "and".into() },
                TokKind::HiddenName { prefix: "OSeq".into(), uname: "seq1".into() },
                TokKind::HiddenName { prefix: "exAB[Copy]".into(), uname: "B".into() },
            ]
        );
    }

    #[test]
    fn bracket_lookahead_backtracks_for_imports() {
        // `Naturals[Int1] {` is a module reference, not a hidden name
        let toks = lex("import Naturals[Int1] { }", 0, true).unwrap();
        let kinds: Vec<_> = toks.into_iter().map(|t| t.kind).collect();
        assert_eq!(
            kinds,
            vec![
                name("import"),
                name("Naturals"),
                TokKind::LBracket,
                name("Int1"),
                TokKind::RBracket,
                TokKind::LBrace,
                TokKind::RBrace,
            ]
        );
    }

    #[test]
    fn arrows_split_adjacent_names() {
        let got = kinds("NAT->NAT");
        assert_eq!(got, vec![name("NAT"), TokKind::Arrow, name("NAT")]);
        let got = kinds("-->x");
        assert_eq!(got, vec![TokKind::Implies, name("x")]);
    }

    #[test]
    fn comments_and_separators_are_skipped() {
        let got = kinds("a /* comment\nwith lines */ b\tc\x0cd");
        assert_eq!(got, vec![name("a"), name("b"), name("c"), name("d")]);
    }

    #[test]
    fn keyword_words_with_hyphens_stay_words() {
        let got = kinds("non-constructors macro-equation");
        assert_eq!(got, vec![name("non-constructors"), name("macro-equation")]);
    }

    #[test]
    fn positions_are_tracked() {
        let toks = lex("a\n  b", 3, false).unwrap();
        assert_eq!(toks[0].pos, Pos { file: 3, line: 1, col: 1 });
        assert_eq!(toks[1].pos, Pos { file: 3, line: 2, col: 3 });
    }
}
