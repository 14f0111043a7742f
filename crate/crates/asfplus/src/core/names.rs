//! Names and namespaces.
//!
//! Every name that can occur in a specification after flattening is a
//! [`SpecName`]: either a plain user-written name or a hidden name built
//! from an abbreviated namespace designation, a hyphen, and the original
//! user name.  The hyphen is forbidden in user names, so the two classes
//! never collide.

use std::fmt;

use indexmap::{IndexMap, IndexSet};

/// Characters allowed in module names, shorts, instance names, labels,
/// sort names and variable names.
pub fn is_plain_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '\'' || c == '_'
}

/// Extra characters allowed in function names.
pub fn is_function_extra_char(c: char) -> bool {
    matches!(c, '!' | '$' | '%' | '&' | '+' | '*' | ';' | '?' | '~' | '\\' | '|' | '/' | '.')
}

pub fn is_function_name_char(c: char) -> bool {
    is_plain_name_char(c) || is_function_extra_char(c)
}

/// Words that are not available as names.  `unless` is claimed by this
/// tool for printing expanded negative conditions.
pub const RESERVED_WORDS: &[&str] = &[
    "if", "equation", "else", "case", "renamed", "bound", "sorts", "constructors", "unless",
];

pub fn is_reserved_word(s: &str) -> bool {
    RESERVED_WORDS.contains(&s)
}

/// Checks the lexical class of a user name.  `function` admits the extra
/// operator characters.  Underscores may not start or end a name and a
/// hyphen is never allowed.
pub fn is_valid_user_name(s: &str, function: bool) -> bool {
    if s.is_empty() || is_reserved_word(s) {
        return false;
    }
    let ok_char = if function { is_function_name_char } else { is_plain_name_char };
    if !s.chars().all(ok_char) {
        return false;
    }
    !s.starts_with('_') && !s.ends_with('_')
}

/// A name written by the specifier.  Contents are validated by the lexer;
/// names generated internally (e.g. macro expansion labels) bypass the
/// lexical check.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UserName(String);

impl UserName {
    pub fn new(s: impl Into<String>) -> Self {
        UserName(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for UserName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for UserName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<&str> for UserName {
    fn from(s: &str) -> Self {
        UserName::new(s)
    }
}

/// A namespace designation: a module name plus the (possibly empty) list
/// of instance names appended by copying imports, rendered `Mod[i1,i2]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModInstName {
    pub module: String,
    pub instances: Vec<String>,
}

impl ModInstName {
    pub fn plain(module: impl Into<String>) -> Self {
        ModInstName { module: module.into(), instances: Vec::new() }
    }

    pub fn with_instances(module: impl Into<String>, instances: &[&str]) -> Self {
        ModInstName {
            module: module.into(),
            instances: instances.iter().map(|s| s.to_string()).collect(),
        }
    }

    /// Appends an instance name.  Instanciating twice with the same
    /// instance name is a specification error, reported by the caller.
    pub fn instanciated(&self, iname: &str) -> Result<ModInstName, String> {
        if self.instances.iter().any(|i| i == iname) {
            return Err(format!(
                "namespace {} has already been instanciated with {}",
                self, iname
            ));
        }
        let mut out = self.clone();
        out.instances.push(iname.to_string());
        Ok(out)
    }

    fn render_with(&self, base: &str) -> String {
        if self.instances.is_empty() {
            base.to_string()
        } else {
            format!("{}[{}]", base, self.instances.join(","))
        }
    }
}

impl fmt::Display for ModInstName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_with(&self.module))
    }
}

impl fmt::Debug for ModInstName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Module name -> short module name.  Shorts default to the module name
/// itself and are specification-wide unique.
pub type AbbrevTable = IndexMap<String, String>;

/// Computes the abbreviated rendering of a namespace designation and
/// registers the result in `in_use`.  The bare short name is used unless
/// a different namespace already claimed it, in which case the instance
/// list disambiguates.
pub fn short_modinst_name(
    modiname: &ModInstName,
    abbrevs: &AbbrevTable,
    in_use: &mut IndexMap<String, ModInstName>,
) -> String {
    let short = abbrevs
        .get(&modiname.module)
        .cloned()
        .unwrap_or_else(|| modiname.module.clone());
    match in_use.get(&short) {
        Some(owner) if owner == modiname => return short,
        None => {
            in_use.insert(short.clone(), modiname.clone());
            return short;
        }
        Some(_) => {}
    }
    let full = modiname.render_with(&short);
    in_use.entry(full.clone()).or_insert_with(|| modiname.clone());
    full
}

/// The hidden-name prefix: a namespace known structurally (created by the
/// normalizer) or the literal abbreviated text recovered by the parser
/// from printed output.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum NsPrefix {
    Ns(ModInstName),
    Raw(String),
}

/// A name after flattening: user names pass through untouched, hidden
/// names carry their namespace prefix.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SpecName {
    User(UserName),
    Hidden { prefix: NsPrefix, uname: UserName },
}

impl SpecName {
    pub fn user(s: impl Into<String>) -> Self {
        SpecName::User(UserName::new(s))
    }

    pub fn hidden(ns: ModInstName, uname: impl Into<String>) -> Self {
        SpecName::Hidden { prefix: NsPrefix::Ns(ns), uname: UserName::new(uname) }
    }

    pub fn hidden_raw(prefix: impl Into<String>, uname: impl Into<String>) -> Self {
        SpecName::Hidden { prefix: NsPrefix::Raw(prefix.into()), uname: UserName::new(uname) }
    }

    pub fn is_hidden(&self) -> bool {
        matches!(self, SpecName::Hidden { .. })
    }

    pub fn as_user(&self) -> Option<&UserName> {
        match self {
            SpecName::User(u) => Some(u),
            SpecName::Hidden { .. } => None,
        }
    }

    /// Renders the name using `table` for structural prefixes.
    pub fn render(&self, table: &RenderTable) -> String {
        match self {
            SpecName::User(u) => u.to_string(),
            SpecName::Hidden { prefix, uname } => {
                format!("{}-{}", table.prefix_text(prefix), uname)
            }
        }
    }

    /// Replaces structural prefixes by their rendered text so values
    /// compare equal with re-parsed output.
    pub fn externalize(&self, table: &RenderTable) -> SpecName {
        match self {
            SpecName::User(_) => self.clone(),
            SpecName::Hidden { prefix, uname } => SpecName::Hidden {
                prefix: NsPrefix::Raw(table.prefix_text(prefix)),
                uname: uname.clone(),
            },
        }
    }
}

impl fmt::Display for SpecName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecName::User(u) => write!(f, "{}", u),
            SpecName::Hidden { prefix: NsPrefix::Raw(p), uname } => write!(f, "{}-{}", p, uname),
            SpecName::Hidden { prefix: NsPrefix::Ns(ns), uname } => write!(f, "{}-{}", ns, uname),
        }
    }
}

impl fmt::Debug for SpecName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// A disambiguated name: the name plus the argument-sort vector.  The
/// vector is empty except for functions, whose declared arity it matches.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DisambName {
    pub name: SpecName,
    pub sortv: Vec<SpecName>,
}

impl DisambName {
    pub fn plain(name: SpecName) -> Self {
        DisambName { name, sortv: Vec::new() }
    }

    pub fn func(name: SpecName, sortv: Vec<SpecName>) -> Self {
        DisambName { name, sortv }
    }
}

impl fmt::Display for DisambName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.sortv.is_empty() {
            write!(f, "{}", self.name)
        } else {
            let sorts: Vec<String> = self.sortv.iter().map(|s| s.to_string()).collect();
            write!(f, "{}[{}]", self.name, sorts.join(","))
        }
    }
}

impl fmt::Debug for DisambName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Run-wide assignment of abbreviated prefixes to hidden namespaces.
///
/// Built after normalization from the full set of namespaces that occur
/// in hidden names, so the minimal-disambiguation rule sees every
/// competitor: a namespace keeps the bare short unless a distinct
/// namespace with the same short also renders in the run.
#[derive(Clone, Debug, Default)]
pub struct RenderTable {
    assigned: IndexMap<ModInstName, String>,
}

impl RenderTable {
    pub fn empty() -> Self {
        RenderTable::default()
    }

    /// Assigns prefixes for `namespaces`.  Plain namespaces are served
    /// first so instanciated ones never shadow their original.
    pub fn build<'a>(
        namespaces: impl IntoIterator<Item = &'a ModInstName>,
        abbrevs: &AbbrevTable,
    ) -> Self {
        let mut wanted: IndexSet<ModInstName> = IndexSet::new();
        for ns in namespaces {
            wanted.insert(ns.clone());
        }
        let mut in_use: IndexMap<String, ModInstName> = IndexMap::new();
        let mut assigned = IndexMap::new();
        for ns in wanted.iter().filter(|n| n.instances.is_empty()) {
            assigned.insert(ns.clone(), short_modinst_name(ns, abbrevs, &mut in_use));
        }
        for ns in wanted.iter().filter(|n| !n.instances.is_empty()) {
            assigned.insert(ns.clone(), short_modinst_name(ns, abbrevs, &mut in_use));
        }
        RenderTable { assigned }
    }

    pub fn prefix_text(&self, prefix: &NsPrefix) -> String {
        match prefix {
            NsPrefix::Raw(s) => s.clone(),
            NsPrefix::Ns(ns) => self
                .assigned
                .get(ns)
                .cloned()
                .unwrap_or_else(|| ns.to_string()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abbrevs(pairs: &[(&str, &str)]) -> AbbrevTable {
        pairs.iter().map(|(m, s)| (m.to_string(), s.to_string())).collect()
    }

    #[test]
    fn short_rendering_uses_bare_abbreviation() {
        let table = abbrevs(&[("Booleans", "Bo")]);
        let mut in_use = IndexMap::new();
        let got = short_modinst_name(&ModInstName::plain("Booleans"), &table, &mut in_use);
        assert_eq!(got, "Bo");
    }

    #[test]
    fn instanciated_namespace_keeps_bare_short_when_free() {
        let table = abbrevs(&[("OrdSequences", "OSeq")]);
        let mut in_use = IndexMap::new();
        let ns = ModInstName::with_instances("OrdSequences", &["ONSeq"]);
        assert_eq!(short_modinst_name(&ns, &table, &mut in_use), "OSeq");
    }

    #[test]
    fn instanciated_namespace_disambiguates_when_bare_taken() {
        let table = abbrevs(&[("exAB", "exAB")]);
        let mut in_use = IndexMap::new();
        let plain = ModInstName::plain("exAB");
        assert_eq!(short_modinst_name(&plain, &table, &mut in_use), "exAB");
        let copy = ModInstName::with_instances("exAB", &["Copy"]);
        assert_eq!(short_modinst_name(&copy, &table, &mut in_use), "exAB[Copy]");
        // the assignment is stable on repetition
        assert_eq!(short_modinst_name(&copy, &table, &mut in_use), "exAB[Copy]");
        assert_eq!(short_modinst_name(&plain, &table, &mut in_use), "exAB");
    }

    #[test]
    fn render_table_prefers_plain_namespaces() {
        let table = abbrevs(&[("exAB", "exAB")]);
        let copy = ModInstName::with_instances("exAB", &["Copy"]);
        let plain = ModInstName::plain("exAB");
        // the copy is listed first, but the plain namespace still wins the bare short
        let rt = RenderTable::build([&copy, &plain], &table);
        assert_eq!(rt.prefix_text(&NsPrefix::Ns(plain)), "exAB");
        assert_eq!(rt.prefix_text(&NsPrefix::Ns(copy)), "exAB[Copy]");
    }

    #[test]
    fn instanciation_rejects_duplicate_instance() {
        let ns = ModInstName::with_instances("Naturals", &["Int1"]);
        assert_eq!(ns.instanciated("Int2").unwrap().to_string(), "Naturals[Int1,Int2]");
        assert!(ns.instanciated("Int1").is_err());
    }

    #[test]
    fn user_name_lexical_class() {
        assert!(is_valid_user_name("greater", false));
        assert!(is_valid_user_name("i1'", false));
        assert!(is_valid_user_name("a_b", false));
        assert!(!is_valid_user_name("_ab", false));
        assert!(!is_valid_user_name("ab_", false));
        assert!(!is_valid_user_name("Bo-x", false));
        assert!(!is_valid_user_name("Bo-x", true));
        assert!(!is_valid_user_name("case", false));
        assert!(!is_valid_user_name("+", false));
        assert!(is_valid_user_name("+", true));
        assert!(is_valid_user_name("eq!", true));
    }

    #[test]
    fn hidden_and_user_names_are_disjoint() {
        let h = SpecName::hidden(ModInstName::plain("Booleans"), "and");
        let u = SpecName::user("and");
        assert_ne!(h, u);
        let rt = RenderTable::build(
            [&ModInstName::plain("Booleans")],
            &abbrevs(&[("Booleans", "Bo")]),
        );
        assert_eq!(h.render(&rt), "Bo-and");
        assert!(h.render(&rt).contains('-'));
        assert!(!u.render(&rt).contains('-'));
    }
}
