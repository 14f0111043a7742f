//! Recursive-descent parser building the 9-tuple module representation.
//!
//! Keywords are matched by text so that words like `public` or `of` stay
//! available as names where the grammar permits; only the reserved words
//! are rejected outright.  Section keywords (`sorts`, `constructors`,
//! `public`, ...) terminate declaration lists.

use indexmap::{IndexMap, IndexSet};

use crate::core::names::{is_reserved_word, AbbrevTable, SpecName, UserName};
use crate::core::{
    BindingBlock, Clause, EqTerm, Equation, ImportDecl, MacroBody, MacroCond, MacroEquation,
    ModEquation, Module9, ParamSig, Signature, Term, Visibility,
};

use super::lexer::{lex, LexError, Pos, TokKind, Token};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ParseError {
    pub msg: String,
    pub pos: Pos,
}

impl std::fmt::Display for ParseError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: parse error: {}", self.pos, self.msg)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SyntaxError {
    Lex(LexError),
    Parse(ParseError),
}

impl std::fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SyntaxError::Lex(e) => write!(f, "{}", e),
            SyntaxError::Parse(e) => write!(f, "{}", e),
        }
    }
}

impl std::error::Error for SyntaxError {}

impl From<LexError> for SyntaxError {
    fn from(e: LexError) -> Self {
        SyntaxError::Lex(e)
    }
}

impl From<ParseError> for SyntaxError {
    fn from(e: ParseError) -> Self {
        SyntaxError::Parse(e)
    }
}

impl SyntaxError {
    pub fn pos(&self) -> Pos {
        match self {
            SyntaxError::Lex(e) => e.pos,
            SyntaxError::Parse(e) => e.pos,
        }
    }
}

/// A source module as parsed, before semantic processing.
#[derive(Clone, Debug)]
pub struct ParsedModule {
    pub module: Module9,
    pub short: Option<String>,
    /// Parameter tuples declared in the module header.
    pub header: Vec<Vec<UserName>>,
    pub pos: Pos,
}

/// A whole specification: the top module plus all modules reachable from
/// it, with the abbreviation table and per-module header metadata.
#[derive(Clone, Debug, Default)]
pub struct AsfSpec {
    pub top: String,
    pub modules: IndexMap<String, Module9>,
    pub abbrevs: AbbrevTable,
    pub shorts_declared: IndexSet<String>,
    pub headers: IndexMap<String, Vec<Vec<UserName>>>,
    pub module_pos: IndexMap<String, Pos>,
    pub files: Vec<String>,
}

impl AsfSpec {
    pub fn module(&self, name: &str) -> Option<&Module9> {
        self.modules.get(name)
    }
}

const SECTION_WORDS: &[&str] = &[
    "sorts",
    "constructors",
    "non-constructors",
    "public",
    "private",
    "parameters",
    "conditions",
];

struct Parser<'a> {
    toks: &'a [Token],
    i: usize,
    allow_hidden: bool,
    file: usize,
}

type PResult<T> = Result<T, ParseError>;

impl<'a> Parser<'a> {
    fn new(toks: &'a [Token], file: usize, allow_hidden: bool) -> Self {
        Parser { toks, i: 0, allow_hidden, file }
    }

    fn pos(&self) -> Pos {
        self.toks
            .get(self.i)
            .map(|t| t.pos)
            .unwrap_or_else(|| {
                self.toks
                    .last()
                    .map(|t| t.pos)
                    .unwrap_or(Pos { file: self.file, line: 1, col: 1 })
            })
    }

    fn err<T>(&self, msg: impl Into<String>) -> PResult<T> {
        Err(ParseError { msg: msg.into(), pos: self.pos() })
    }

    fn peek(&self) -> Option<&TokKind> {
        self.toks.get(self.i).map(|t| &t.kind)
    }

    fn peek_at(&self, off: usize) -> Option<&TokKind> {
        self.toks.get(self.i + off).map(|t| &t.kind)
    }

    fn bump(&mut self) -> Option<&'a Token> {
        let t = self.toks.get(self.i);
        if t.is_some() {
            self.i += 1;
        }
        t
    }

    fn at_end(&self) -> bool {
        self.i >= self.toks.len()
    }

    /// True when the next token is the word `w`.
    fn at_word(&self, w: &str) -> bool {
        matches!(self.peek(), Some(TokKind::Name { text, .. }) if text == w)
    }

    fn eat_word(&mut self, w: &str) -> bool {
        if self.at_word(w) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect_word(&mut self, w: &str) -> PResult<()> {
        if self.eat_word(w) {
            Ok(())
        } else {
            self.err(format!("expected '{}'", w))
        }
    }

    fn expect(&mut self, kind: TokKind, what: &str) -> PResult<Pos> {
        match self.toks.get(self.i) {
            Some(t) if t.kind == kind => {
                self.i += 1;
                Ok(t.pos)
            }
            _ => self.err(format!("expected {}", what)),
        }
    }

    /// A plain name (module names, shorts, instance names, sort names,
    /// variable names, labels).
    fn plain_name(&mut self, what: &str) -> PResult<String> {
        match self.peek() {
            Some(TokKind::Name { text, func_only: false }) if !is_reserved_word(text) => {
                let text = text.clone();
                self.i += 1;
                Ok(text)
            }
            Some(TokKind::Name { text, .. }) if is_reserved_word(text) => {
                self.err(format!("'{}' is a reserved word and not available as {}", text, what))
            }
            _ => self.err(format!("expected {}", what)),
        }
    }

    /// A module name.  Printed normal forms carry a `.nf` suffix, which
    /// is admitted only when re-reading such output.
    fn module_name(&mut self) -> PResult<String> {
        match self.peek() {
            Some(TokKind::Name { text, func_only }) if !is_reserved_word(text) => {
                if *func_only
                    && !(self.allow_hidden
                        && text.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'' || c == '.'))
                {
                    return self.err("expected module name");
                }
                let text = text.clone();
                self.i += 1;
                Ok(text)
            }
            _ => self.err("expected module name"),
        }
    }

    /// A sort name or function name position, possibly hidden.
    fn spec_name(&mut self, function: bool) -> PResult<SpecName> {
        match self.peek() {
            Some(TokKind::Name { text, func_only }) if !is_reserved_word(text) => {
                if *func_only && !function {
                    return self.err("operator characters are only allowed in function names");
                }
                let name = SpecName::user(text.clone());
                self.i += 1;
                Ok(name)
            }
            Some(TokKind::HiddenName { prefix, uname }) => {
                let name = SpecName::hidden_raw(prefix.clone(), uname.clone());
                self.i += 1;
                Ok(name)
            }
            Some(TokKind::Name { text, .. }) if is_reserved_word(text) => {
                self.err(format!("'{}' is a reserved word", text))
            }
            _ => self.err(if function { "expected function name" } else { "expected name" }),
        }
    }

    fn user_name(&mut self, function: bool, what: &str) -> PResult<UserName> {
        match self.spec_name(function)? {
            SpecName::User(u) => Ok(u),
            SpecName::Hidden { .. } => self.err(format!("hidden name not allowed as {}", what)),
        }
    }

    // ---- specification / module --------------------------------------

    fn specification(&mut self) -> PResult<Vec<ParsedModule>> {
        let mut out = Vec::new();
        while !self.at_end() {
            out.push(self.module()?);
        }
        Ok(out)
    }

    fn module(&mut self) -> PResult<ParsedModule> {
        let pos = self.pos();
        self.expect_word("module")?;
        let name = self.module_name()?;
        let header = if matches!(self.peek(), Some(TokKind::Lt)) {
            self.param_header()?
        } else {
            Vec::new()
        };
        let short = if self.at_word("short") {
            self.bump();
            Some(self.plain_name("a short module name")?)
        } else {
            None
        };
        self.expect(TokKind::LBrace, "'{'")?;
        let mut module = Module9 { name: name.clone(), ..Module9::default() };
        while self.at_word("import") {
            module.imports.push(self.import()?);
        }
        if self.at_word("add") {
            self.bump();
            self.expect_word("signature")?;
            self.add_signature(&mut module)?;
        }
        if self.at_word("variables") {
            self.bump();
            self.variables(&mut module)?;
        }
        if self.at_word("equations") {
            self.bump();
            self.equations(&mut module)?;
        }
        if self.at_word("goals") {
            self.bump();
            self.goals(&mut module)?;
        }
        self.expect(TokKind::RBrace, "'}'")?;
        Ok(ParsedModule { module, short, header, pos })
    }

    /// `<' ( '(' name,+ ')' )+ '>'` in a module header.
    fn param_header(&mut self) -> PResult<Vec<Vec<UserName>>> {
        self.expect(TokKind::Lt, "'<'")?;
        let mut tuples = Vec::new();
        while matches!(self.peek(), Some(TokKind::LParen)) {
            self.bump();
            let mut names = Vec::new();
            loop {
                names.push(self.user_name(true, "a parameter name")?);
                if !matches!(self.peek(), Some(TokKind::Comma)) {
                    break;
                }
                self.bump();
            }
            self.expect(TokKind::RParen, "')'")?;
            tuples.push(names);
        }
        if tuples.is_empty() {
            return self.err("expected '(' after '<'");
        }
        self.expect(TokKind::Gt, "'>'")?;
        Ok(tuples)
    }

    // ---- imports ------------------------------------------------------

    fn import(&mut self) -> PResult<ImportDecl> {
        let pos = self.pos();
        self.expect_word("import")?;
        let module = self.module_name()?;
        let instance = if matches!(self.peek(), Some(TokKind::LBracket)) {
            self.bump();
            let inst = self.plain_name("an instance name")?;
            self.expect(TokKind::RBracket, "']'")?;
            Some(inst)
        } else {
            None
        };
        let mut visibility = IndexMap::new();
        let mut renaming = IndexMap::new();
        let mut bindings = Vec::new();
        let mut listed_params = Vec::new();
        if matches!(self.peek(), Some(TokKind::Lt)) {
            self.bump();
            while matches!(self.peek(), Some(TokKind::LParen)) {
                self.ext_para_block(&mut renaming, &mut bindings, &mut listed_params)?;
            }
            self.expect(TokKind::Gt, "'>'")?;
        }
        if matches!(self.peek(), Some(TokKind::LBrace)) {
            self.bump();
            if self.at_word("public") {
                self.bump();
                self.expect(TokKind::Colon, "':'")?;
                self.name_with_ren_list(Visibility::Public, &mut visibility, &mut renaming)?;
            }
            if self.at_word("private") {
                self.bump();
                self.expect(TokKind::Colon, "':'")?;
                self.name_with_ren_list(Visibility::Private, &mut visibility, &mut renaming)?;
            }
            self.expect(TokKind::RBrace, "'}' after import block")?;
        }
        Ok(ImportDecl { module, instance, visibility, renaming, bindings, listed_params, pos })
    }

    /// One `( ... )` block after an imported module name: either a
    /// re-listing of parameters (with optional renaming) or a binding
    /// `(p bound to a, ...) of Mod`.
    fn ext_para_block(
        &mut self,
        renaming: &mut IndexMap<UserName, SpecName>,
        bindings: &mut Vec<BindingBlock>,
        listed_params: &mut Vec<Vec<UserName>>,
    ) -> PResult<()> {
        self.expect(TokKind::LParen, "'('")?;
        // a binding block is recognized by `bound` after the first name
        let is_binding = matches!(self.peek_at(1), Some(TokKind::Name { text, .. }) if text == "bound");
        if is_binding {
            let mut binding = IndexMap::new();
            loop {
                let formal = self.user_name(true, "a parameter name")?;
                self.expect_word("bound")?;
                self.expect_word("to")?;
                let actual = self.user_name(true, "an actual parameter name")?;
                if binding.insert(formal.clone(), actual).is_some() {
                    return self.err(format!("parameter '{}' bound twice", formal));
                }
                if !matches!(self.peek(), Some(TokKind::Comma)) {
                    break;
                }
                self.bump();
            }
            self.expect(TokKind::RParen, "')'")?;
            self.expect_word("of")?;
            let act_module = self.module_name()?;
            let act_params = if matches!(self.peek(), Some(TokKind::Lt)) {
                self.param_header()?
            } else {
                Vec::new()
            };
            bindings.push(BindingBlock { binding, act_module, act_params });
        } else {
            let mut names = Vec::new();
            loop {
                let (name, renamed) = self.name_with_ren()?;
                if let Some(target) = renamed {
                    renaming.insert(name.clone(), target);
                }
                names.push(name);
                if !matches!(self.peek(), Some(TokKind::Comma)) {
                    break;
                }
                self.bump();
            }
            self.expect(TokKind::RParen, "')'")?;
            listed_params.push(names);
        }
        Ok(())
    }

    /// `name [renamed to name]` or `copy of name`.
    fn name_with_ren(&mut self) -> PResult<(UserName, Option<SpecName>)> {
        if self.at_word("copy") && matches!(self.peek_at(1), Some(TokKind::Name { text, .. }) if text == "of") {
            self.bump();
            self.bump();
            let name = self.user_name(true, "a name")?;
            let target = SpecName::User(name.clone());
            return Ok((name, Some(target)));
        }
        let name = self.user_name(true, "a name")?;
        if self.at_word("renamed") {
            self.bump();
            self.expect_word("to")?;
            let target = self.user_name(true, "a new name")?;
            Ok((name, Some(SpecName::User(target))))
        } else {
            Ok((name, None))
        }
    }

    fn name_with_ren_list(
        &mut self,
        vis: Visibility,
        visibility: &mut IndexMap<UserName, Visibility>,
        renaming: &mut IndexMap<UserName, SpecName>,
    ) -> PResult<()> {
        loop {
            let (name, renamed) = self.name_with_ren()?;
            if visibility.insert(name.clone(), vis).is_some() {
                return self.err(format!("'{}' listed twice in import block", name));
            }
            if let Some(target) = renamed {
                renaming.insert(name, target);
            }
            if !matches!(self.peek(), Some(TokKind::Comma)) {
                break;
            }
            self.bump();
        }
        Ok(())
    }

    // ---- signatures ----------------------------------------------------

    fn add_signature(&mut self, module: &mut Module9) -> PResult<()> {
        self.expect(TokKind::LBrace, "'{' after 'add signature'")?;
        if self.at_word("parameters") {
            self.bump();
            self.expect(TokKind::Colon, "':'")?;
            while matches!(self.peek(), Some(TokKind::LParen)) {
                self.bump();
                let sig = self.signature()?;
                let mut conditions = IndexSet::new();
                if self.at_word("conditions") {
                    self.bump();
                    while matches!(self.peek(), Some(TokKind::LBracket)) {
                        conditions.insert(self.clause()?);
                    }
                }
                self.expect(TokKind::RParen, "')' after parameter block")?;
                module.param_sigs.push(ParamSig { sig, conditions });
            }
        }
        if self.at_word("public") {
            self.bump();
            self.expect(TokKind::Colon, "':'")?;
            module.public_sig = self.signature()?;
        }
        if self.at_word("private") {
            self.bump();
            self.expect(TokKind::Colon, "':'")?;
            module.private_sig = self.signature()?;
        }
        self.expect(TokKind::RBrace, "'}' after signature")?;
        Ok(())
    }

    fn at_section_word(&self) -> bool {
        matches!(self.peek(), Some(TokKind::Name { text, .. }) if SECTION_WORDS.contains(&text.as_str()))
    }

    fn signature(&mut self) -> PResult<Signature> {
        let mut sig = Signature::default();
        if self.at_word("sorts") {
            self.bump();
            loop {
                let name = self.spec_name(false)?;
                if !sig.sorts.insert(name.clone()) {
                    return self.err(format!("sort '{}' declared twice", name));
                }
                if !matches!(self.peek(), Some(TokKind::Comma)) {
                    break;
                }
                self.bump();
            }
        }
        if self.at_word("constructors") {
            self.bump();
            self.function_decs(true, &mut sig)?;
        }
        if self.at_word("non-constructors") {
            self.bump();
            self.function_decs(false, &mut sig)?;
        }
        Ok(sig)
    }

    /// True when a function declaration can start here.
    fn at_function_dec(&self) -> bool {
        if self.at_section_word() {
            return false;
        }
        matches!(
            self.peek(),
            Some(TokKind::Underscore) | Some(TokKind::Name { .. }) | Some(TokKind::HiddenName { .. })
        ) && !matches!(self.peek(), Some(TokKind::Name { text, .. }) if is_reserved_word(text))
    }

    fn function_decs(&mut self, cons: bool, sig: &mut Signature) -> PResult<()> {
        while self.at_function_dec() {
            let mut names = Vec::new();
            loop {
                let mut infix = false;
                if matches!(self.peek(), Some(TokKind::Underscore)) {
                    self.bump();
                    infix = true;
                }
                let name = self.spec_name(true)?;
                if matches!(self.peek(), Some(TokKind::Underscore)) {
                    self.bump();
                } else if infix {
                    return self.err("expected '_' after infix function name");
                }
                names.push((name, infix));
                if !matches!(self.peek(), Some(TokKind::Comma)) {
                    break;
                }
                self.bump();
            }
            self.expect(TokKind::Colon, "':' in function declaration")?;
            let mut sortv = Vec::new();
            if !matches!(self.peek(), Some(TokKind::Arrow)) {
                loop {
                    sortv.push(self.spec_name(false)?);
                    if !matches!(self.peek(), Some(TokKind::Hash)) {
                        break;
                    }
                    self.bump();
                }
            }
            self.expect(TokKind::Arrow, "'->'")?;
            let target = self.spec_name(false)?;
            for (name, infix) in names {
                if infix && sortv.len() != 2 {
                    return self.err(format!("infix function '{}' must take two arguments", name));
                }
                let key = crate::core::DisambName::func(name.clone(), sortv.clone());
                if sig.cons_decs.contains_key(&key) || sig.noncons_decs.contains_key(&key) {
                    return self.err(format!("duplicate declaration of '{}'", key));
                }
                let map = if cons { &mut sig.cons_decs } else { &mut sig.noncons_decs };
                map.insert(key, target.clone());
                if infix {
                    sig.infix.insert(name);
                }
            }
        }
        Ok(())
    }

    // ---- variables ------------------------------------------------------

    fn variables(&mut self, module: &mut Module9) -> PResult<()> {
        self.expect(TokKind::LBrace, "'{' after 'variables'")?;
        // default block kind is `constructors`
        if !self.at_word("non-constructors") {
            self.eat_word("constructors");
            self.variable_decs(true, module)?;
        }
        if self.at_word("non-constructors") {
            self.bump();
            self.variable_decs(false, module)?;
        }
        self.expect(TokKind::RBrace, "'}' after variables")?;
        Ok(())
    }

    fn variable_decs(&mut self, cons: bool, module: &mut Module9) -> PResult<()> {
        while !self.at_section_word()
            && matches!(self.peek(), Some(TokKind::Name { .. }) | Some(TokKind::HiddenName { .. }))
            && !matches!(self.peek(), Some(TokKind::Name { text, .. }) if is_reserved_word(text))
        {
            let mut names = Vec::new();
            loop {
                names.push(self.spec_name(false)?);
                if !matches!(self.peek(), Some(TokKind::Comma)) {
                    break;
                }
                self.bump();
            }
            self.expect(TokKind::Colon, "':' in variable declaration")?;
            self.expect(TokKind::Arrow, "'->'")?;
            let sort = self.spec_name(false)?;
            for name in names {
                if module.varsort_cons.contains_key(&name) || module.varsort_noncons.contains_key(&name) {
                    return self.err(format!("variable '{}' declared twice", name));
                }
                let map = if cons { &mut module.varsort_cons } else { &mut module.varsort_noncons };
                map.insert(name.clone(), sort.clone());
            }
        }
        Ok(())
    }

    // ---- equations and goals ---------------------------------------------

    fn equations(&mut self, module: &mut Module9) -> PResult<()> {
        self.expect(TokKind::LBrace, "'{' after 'equations'")?;
        loop {
            if matches!(self.peek(), Some(TokKind::LBracket)) {
                module.equations.insert(ModEquation::Plain(self.equation()?));
            } else if self.at_word("macro-equation") {
                self.bump();
                let head = self.term()?;
                self.expect(TokKind::LBrace, "'{' after macro-equation head")?;
                let body = self.macro_body()?;
                self.expect(TokKind::RBrace, "'}' after macro body")?;
                module.equations.insert(ModEquation::Macro(MacroEquation { head, body }));
            } else {
                break;
            }
        }
        self.expect(TokKind::RBrace, "'}' after equations")?;
        Ok(())
    }

    fn label(&mut self) -> PResult<SpecName> {
        self.expect(TokKind::LBracket, "'['")?;
        let label = self.spec_name(false)?;
        self.expect(TokKind::RBracket, "']' after label")?;
        Ok(label)
    }

    fn equation(&mut self) -> PResult<Equation> {
        let label = self.label()?;
        let eq = self.eq_term()?;
        let mut pos_conds = Vec::new();
        let mut neg_conds = Vec::new();
        if self.at_word("if") {
            self.bump();
            loop {
                pos_conds.push(self.eq_term()?);
                if !matches!(self.peek(), Some(TokKind::Comma)) {
                    break;
                }
                self.bump();
            }
        }
        if self.at_word("unless") {
            self.bump();
            loop {
                neg_conds.push(self.eq_term()?);
                if !matches!(self.peek(), Some(TokKind::Comma)) {
                    break;
                }
                self.bump();
            }
        }
        Ok(Equation { label, eq, pos_conds, neg_conds })
    }

    fn goals(&mut self, module: &mut Module9) -> PResult<()> {
        self.expect(TokKind::LBrace, "'{' after 'goals'")?;
        while matches!(self.peek(), Some(TokKind::LBracket)) {
            module.goals.insert(self.clause()?);
        }
        self.expect(TokKind::RBrace, "'}' after goals")?;
        Ok(())
    }

    fn clause(&mut self) -> PResult<Clause> {
        let label = self.label()?;
        let mut antecedent = Vec::new();
        if !matches!(self.peek(), Some(TokKind::Implies)) {
            loop {
                antecedent.push(self.eq_term()?);
                if !matches!(self.peek(), Some(TokKind::Comma)) {
                    break;
                }
                self.bump();
            }
        }
        self.expect(TokKind::Implies, "'-->'")?;
        let mut succedent = Vec::new();
        if self.at_term_start() {
            loop {
                succedent.push(self.eq_term()?);
                if !matches!(self.peek(), Some(TokKind::Comma)) {
                    break;
                }
                self.bump();
            }
        }
        Ok(Clause { label, antecedent, succedent })
    }

    // ---- macro bodies ------------------------------------------------------

    fn macro_body(&mut self) -> PResult<MacroBody> {
        if self.at_word("case") {
            self.bump();
            self.expect(TokKind::LBrace, "'{' after 'case'")?;
            let mut branches = Vec::new();
            while matches!(self.peek(), Some(TokKind::LParen)) {
                self.bump();
                let conds = self.macro_conds()?;
                self.expect(TokKind::RParen, "')' after case conditions")?;
                self.expect(TokKind::Colon, "':' after case conditions")?;
                branches.push((conds, self.macro_body()?));
            }
            if branches.is_empty() {
                return self.err("'case' needs at least one branch");
            }
            self.expect(TokKind::RBrace, "'}' after case branches")?;
            Ok(MacroBody::Case(branches))
        } else if self.at_word("if") {
            self.bump();
            self.expect(TokKind::LParen, "'(' after 'if'")?;
            let conds = self.macro_conds()?;
            self.expect(TokKind::RParen, "')' after if conditions")?;
            let then = Box::new(self.macro_body()?);
            let els = if self.at_word("else") {
                self.bump();
                Some(Box::new(self.macro_body()?))
            } else {
                None
            };
            Ok(MacroBody::If { conds, then, els })
        } else {
            Ok(MacroBody::Leaf(self.term()?))
        }
    }

    fn macro_conds(&mut self) -> PResult<Vec<MacroCond>> {
        let mut out = Vec::new();
        loop {
            // `x @ pattern` is a match condition, anything else an equation
            let is_match = matches!(
                (self.peek(), self.peek_at(1)),
                (Some(TokKind::Name { .. }), Some(TokKind::At))
                    | (Some(TokKind::HiddenName { .. }), Some(TokKind::At))
            );
            if is_match {
                let var = self.spec_name(false)?;
                self.expect(TokKind::At, "'@'")?;
                let pattern = self.term()?;
                out.push(MacroCond::Match { var, pattern });
            } else {
                out.push(MacroCond::Cond(self.eq_term()?));
            }
            if !matches!(self.peek(), Some(TokKind::Comma)) {
                break;
            }
            self.bump();
        }
        Ok(out)
    }

    // ---- terms ------------------------------------------------------------

    fn at_term_start(&self) -> bool {
        match self.peek() {
            Some(TokKind::LParen) | Some(TokKind::HiddenName { .. }) => true,
            Some(TokKind::Name { text, .. }) => !is_reserved_word(text),
            _ => false,
        }
    }

    /// Infix application is left-associative with a single precedence
    /// level: `x + y + u` parses as `(x + y) + u`.
    fn term(&mut self) -> PResult<Term> {
        let mut acc = self.primary()?;
        loop {
            let op = match self.peek() {
                Some(TokKind::Name { text, .. }) if !is_reserved_word(text) => {
                    SpecName::user(text.clone())
                }
                Some(TokKind::HiddenName { prefix, uname }) => {
                    SpecName::hidden_raw(prefix.clone(), uname.clone())
                }
                _ => break,
            };
            self.i += 1;
            let rhs = self.primary()?;
            acc = Term::App { func: op, args: vec![acc, rhs] };
        }
        Ok(acc)
    }

    fn primary(&mut self) -> PResult<Term> {
        match self.peek() {
            Some(TokKind::LParen) => {
                self.bump();
                let t = self.term()?;
                self.expect(TokKind::RParen, "')'")?;
                Ok(t)
            }
            Some(TokKind::Name { .. }) | Some(TokKind::HiddenName { .. }) => {
                let name = self.spec_name(true)?;
                if matches!(self.peek(), Some(TokKind::LParen)) {
                    // try a call; on failure this was a bare name followed
                    // by an unrelated '(' (e.g. the next case branch)
                    let save = self.i;
                    match self.call_args() {
                        Ok(args) => return Ok(Term::App { func: name, args }),
                        Err(_) => self.i = save,
                    }
                }
                Ok(Term::Name(name))
            }
            _ => self.err("expected a term"),
        }
    }

    fn call_args(&mut self) -> PResult<Vec<Term>> {
        self.expect(TokKind::LParen, "'('")?;
        let mut args = Vec::new();
        loop {
            args.push(self.term()?);
            match self.peek() {
                Some(TokKind::Comma) => {
                    self.bump();
                }
                Some(TokKind::RParen) => {
                    self.bump();
                    return Ok(args);
                }
                _ => return self.err("expected ',' or ')' in argument list"),
            }
        }
    }

    fn eq_term(&mut self) -> PResult<EqTerm> {
        let lhs = self.term()?;
        if matches!(self.peek(), Some(TokKind::Equals)) {
            self.bump();
            let rhs = self.term()?;
            Ok(EqTerm::new(lhs, rhs))
        } else {
            Ok(EqTerm::bare(lhs))
        }
    }
}

/// One input file (name is used in diagnostics only).
#[derive(Clone, Debug)]
pub struct SourceFile {
    pub name: String,
    pub text: String,
}

/// Parses a whole specification from one or more files.  The first module
/// of the first file is the top module unless `top` overrides it.
pub fn parse_specification(
    files: &[SourceFile],
    top: Option<&str>,
    allow_hidden: bool,
) -> Result<AsfSpec, SyntaxError> {
    let mut spec = AsfSpec::default();
    let mut instance_names: IndexMap<String, String> = IndexMap::new();
    for (idx, file) in files.iter().enumerate() {
        spec.files.push(file.name.clone());
        let toks = lex(&file.text, idx, allow_hidden)?;
        let mut parser = Parser::new(&toks, idx, allow_hidden);
        for parsed in parser.specification()? {
            let name = parsed.module.name.clone();
            if spec.modules.contains_key(&name) {
                return Err(ParseError {
                    msg: format!("duplicate module name '{}'", name),
                    pos: parsed.pos,
                }
                .into());
            }
            let short = parsed.short.clone().unwrap_or_else(|| name.clone());
            if let Some((other, _)) = spec.abbrevs.iter().find(|(_, s)| **s == short) {
                return Err(ParseError {
                    msg: format!(
                        "duplicate short module name '{}' (already used by '{}')",
                        short, other
                    ),
                    pos: parsed.pos,
                }
                .into());
            }
            for imp in &parsed.module.imports {
                if let Some(inst) = &imp.instance {
                    if let Some(owner) = instance_names.get(inst) {
                        return Err(ParseError {
                            msg: format!(
                                "duplicate instance name '{}' (already used in '{}')",
                                inst, owner
                            ),
                            pos: imp.pos,
                        }
                        .into());
                    }
                    instance_names.insert(inst.clone(), name.clone());
                }
            }
            if parsed.short.is_some() {
                spec.shorts_declared.insert(name.clone());
            }
            spec.abbrevs.insert(name.clone(), short);
            spec.headers.insert(name.clone(), parsed.header);
            spec.module_pos.insert(name.clone(), parsed.pos);
            spec.modules.insert(name, parsed.module);
        }
    }
    match top {
        Some(t) => {
            if !spec.modules.contains_key(t) {
                return Err(ParseError {
                    msg: format!("top module '{}' not found in the specification", t),
                    pos: Pos::default(),
                }
                .into());
            }
            spec.top = t.to_string();
        }
        None => {
            spec.top = match spec.modules.keys().next() {
                Some(k) => k.clone(),
                None => {
                    return Err(ParseError {
                        msg: "specification contains no modules".to_string(),
                        pos: Pos::default(),
                    }
                    .into())
                }
            };
        }
    }
    Ok(spec)
}

/// Parses exactly one module from `text`.
pub fn parse_module_text(text: &str, allow_hidden: bool) -> Result<ParsedModule, SyntaxError> {
    let toks = lex(text, 0, allow_hidden)?;
    let mut parser = Parser::new(&toks, 0, allow_hidden);
    let m = parser.module()?;
    if !parser.at_end() {
        return Err(ParseError { msg: "trailing input after module".into(), pos: parser.pos() }.into());
    }
    Ok(m)
}
