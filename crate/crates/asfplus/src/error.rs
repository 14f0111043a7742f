//! Error types.  The normalization error vocabulary mirrors the error
//! messages of the normal-form procedure (SPEZIFIKATIONSFEHLER,
//! NAMENSKONFLIKT, EXPORTIERBARKEITS-KONFLIKT, SEMANTIC ERROR); each kind
//! carries a stable machine-readable code for diagnostics.

use std::fmt;

use crate::syntax::Pos;

/// One unmet semantic condition of a parameter binding.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UnmetCondition {
    pub label: String,
    pub condition: String,
    pub reason: String,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum NormError {
    /// SPEZIFIKATIONSFEHLER
    Spec { msg: String, pos: Option<Pos> },
    /// NAMENSKONFLIKT
    NameClash { msg: String, pos: Option<Pos> },
    /// EXPORTIERBARKEITS-KONFLIKT
    Exportability { msg: String, pos: Option<Pos> },
    /// SEMANTIC ERROR; all unmet conditions of one binding are collected.
    Semantic { unmet: Vec<UnmetCondition>, pos: Option<Pos> },
    /// Lexical or syntactic error wrapped from the front end.
    LexOrParse { msg: String, pos: Option<Pos> },
}

impl NormError {
    pub fn spec(msg: impl Into<String>) -> Self {
        NormError::Spec { msg: msg.into(), pos: None }
    }

    pub fn spec_at(msg: impl Into<String>, pos: Pos) -> Self {
        NormError::Spec { msg: msg.into(), pos: Some(pos) }
    }

    pub fn clash(msg: impl Into<String>) -> Self {
        NormError::NameClash { msg: msg.into(), pos: None }
    }

    pub fn export(msg: impl Into<String>) -> Self {
        NormError::Exportability { msg: msg.into(), pos: None }
    }

    /// Stable diagnostic code.
    pub fn code(&self) -> &'static str {
        match self {
            NormError::Spec { .. } => "E-SPEC",
            NormError::NameClash { .. } => "E-NAMECLASH",
            NormError::Exportability { .. } => "E-EXPORT",
            NormError::Semantic { .. } => "E-SEM",
            NormError::LexOrParse { .. } => "E-PARSE",
        }
    }

    /// The error category as named by the normalization procedure,
    /// with an English gloss.
    pub fn category(&self) -> &'static str {
        match self {
            NormError::Spec { .. } => "SPEZIFIKATIONSFEHLER (specification error)",
            NormError::NameClash { .. } => "NAMENSKONFLIKT (name clash)",
            NormError::Exportability { .. } => "EXPORTIERBARKEITS-KONFLIKT (exportability conflict)",
            NormError::Semantic { .. } => "SEMANTIC ERROR (unmet parameter condition)",
            NormError::LexOrParse { .. } => "SYNTAXFEHLER (lex/parse error)",
        }
    }

    pub fn pos(&self) -> Option<&Pos> {
        match self {
            NormError::Spec { pos, .. }
            | NormError::NameClash { pos, .. }
            | NormError::Exportability { pos, .. }
            | NormError::Semantic { pos, .. }
            | NormError::LexOrParse { pos, .. } => pos.as_ref(),
        }
    }

    pub fn with_pos(mut self, p: Pos) -> Self {
        match &mut self {
            NormError::Spec { pos, .. }
            | NormError::NameClash { pos, .. }
            | NormError::Exportability { pos, .. }
            | NormError::Semantic { pos, .. }
            | NormError::LexOrParse { pos, .. } => {
                if pos.is_none() {
                    *pos = Some(p);
                }
            }
        }
        self
    }
}

impl fmt::Display for NormError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(pos) = self.pos() {
            write!(f, "{}: ", pos)?;
        }
        write!(f, "{} {}: ", self.code(), self.category())?;
        match self {
            NormError::Spec { msg, .. }
            | NormError::NameClash { msg, .. }
            | NormError::Exportability { msg, .. }
            | NormError::LexOrParse { msg, .. } => write!(f, "{}", msg),
            NormError::Semantic { unmet, .. } => {
                write!(f, "{} unmet condition(s)", unmet.len())?;
                for u in unmet {
                    write!(f, "\n  [{}] {}: {}", u.label, u.condition, u.reason)?;
                }
                Ok(())
            }
        }
    }
}

impl std::error::Error for NormError {}

pub type NormResult<T> = Result<T, NormError>;
