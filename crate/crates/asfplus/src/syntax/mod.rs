//! Concrete syntax: lexer, parser and pretty-printer.

pub mod lexer;
pub mod parser;
pub mod printer;

pub use lexer::{lex, LexError, Pos, TokKind, Token};
pub use parser::{
    parse_module_text, parse_specification, AsfSpec, ParseError, ParsedModule, SourceFile,
    SyntaxError,
};
pub use printer::{print_module, PrintOpts};
