//! The internal module representation and its componentwise union.

use indexmap::{IndexMap, IndexSet};

use super::names::{DisambName, ModInstName, SpecName, UserName};
use super::term::{Clause, ModEquation};
use crate::syntax::Pos;

/// Visibility levels of names.  Labels and variables are treated like
/// private signature names and are hidden when their module is imported;
/// parameters can never be hidden.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Visibility {
    Parameter,
    Public,
    Private,
    Hidden,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum SymbolType {
    Label,
    Variable,
    Sort,
    Function,
}

/// A partial signature: sort names plus constructor and non-constructor
/// declarations keyed by disambiguated name.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct Signature {
    pub sorts: IndexSet<SpecName>,
    pub cons_decs: IndexMap<DisambName, SpecName>,
    pub noncons_decs: IndexMap<DisambName, SpecName>,
    /// Function names declared with infix placeholders (`_ f _`), kept so
    /// printing reproduces the declaration and application style.
    pub infix: IndexSet<SpecName>,
}

impl Signature {
    pub fn is_empty(&self) -> bool {
        self.sorts.is_empty() && self.cons_decs.is_empty() && self.noncons_decs.is_empty()
    }

    pub fn union_with(&mut self, other: &Signature) {
        self.sorts.extend(other.sorts.iter().cloned());
        for (k, v) in &other.cons_decs {
            self.cons_decs.entry(k.clone()).or_insert_with(|| v.clone());
        }
        for (k, v) in &other.noncons_decs {
            self.noncons_decs.entry(k.clone()).or_insert_with(|| v.clone());
        }
        self.infix.extend(other.infix.iter().cloned());
    }

    /// All user names introduced by this signature (sort and function
    /// names without disambiguation).
    pub fn names(&self) -> IndexSet<SpecName> {
        let mut out: IndexSet<SpecName> = self.sorts.iter().cloned().collect();
        out.extend(self.cons_decs.keys().map(|k| k.name.clone()));
        out.extend(self.noncons_decs.keys().map(|k| k.name.clone()));
        out
    }
}

/// A parameter tuple: its signature and the semantic conditions attached
/// to it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ParamSig {
    pub sig: Signature,
    pub conditions: IndexSet<Clause>,
}

impl ParamSig {
    /// The set of parameter names of this tuple.
    pub fn names(&self) -> IndexSet<SpecName> {
        self.sig.names()
    }
}

/// A parameter binding block `(p1 bound to a1, ...) of Mod`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BindingBlock {
    pub binding: IndexMap<UserName, UserName>,
    pub act_module: String,
    /// Parameter tuples re-listed after the actual module name.
    pub act_params: Vec<Vec<UserName>>,
}

/// Structured form of one import command.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ImportDecl {
    pub module: String,
    pub instance: Option<String>,
    pub visibility: IndexMap<UserName, Visibility>,
    pub renaming: IndexMap<UserName, SpecName>,
    pub bindings: Vec<BindingBlock>,
    /// Parameter tuples re-listed in angle brackets without binding.
    pub listed_params: Vec<Vec<UserName>>,
    pub pos: Pos,
}

/// The 9-tuple module representation: name, imports, parameter signatures,
/// public and private signature, the two variable-sort maps, equations and
/// goals.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct Module9 {
    pub name: String,
    pub imports: Vec<ImportDecl>,
    pub param_sigs: Vec<ParamSig>,
    pub public_sig: Signature,
    pub private_sig: Signature,
    pub varsort_cons: IndexMap<SpecName, SpecName>,
    pub varsort_noncons: IndexMap<SpecName, SpecName>,
    pub equations: IndexSet<ModEquation>,
    pub goals: IndexSet<Clause>,
}

impl Module9 {
    /// Iterates over all parameter tuples' name sets, as user names.
    pub fn param_tuples(&self) -> Vec<IndexSet<UserName>> {
        self.param_sigs
            .iter()
            .map(|p| {
                p.names()
                    .into_iter()
                    .filter_map(|n| n.as_user().cloned())
                    .collect()
            })
            .collect()
    }
}

/// Componentwise union of a set of modules.  The module-name slot of the
/// result is left unset; conflicts are detected later through the origin
/// functions, not here.
pub fn module_union<'a>(mods: impl IntoIterator<Item = &'a Module9>) -> Module9 {
    let mut out = Module9::default();
    for m in mods {
        for imp in &m.imports {
            if !out.imports.contains(imp) {
                out.imports.push(imp.clone());
            }
        }
        for ps in &m.param_sigs {
            if !out.param_sigs.contains(ps) {
                out.param_sigs.push(ps.clone());
            }
        }
        out.public_sig.union_with(&m.public_sig);
        out.private_sig.union_with(&m.private_sig);
        for (k, v) in &m.varsort_cons {
            out.varsort_cons.entry(k.clone()).or_insert_with(|| v.clone());
        }
        for (k, v) in &m.varsort_noncons {
            out.varsort_noncons.entry(k.clone()).or_insert_with(|| v.clone());
        }
        out.equations.extend(m.equations.iter().cloned());
        out.goals.extend(m.goals.iter().cloned());
    }
    out
}

/// An origin: the user name, the namespace the name belongs to, the kind
/// of symbol and the visibility within the current module.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Origin {
    pub uname: UserName,
    pub modiname: ModInstName,
    pub symboltype: SymbolType,
    pub visibility: Visibility,
}

impl Origin {
    pub fn new(
        uname: impl Into<String>,
        modiname: ModInstName,
        symboltype: SymbolType,
        visibility: Visibility,
    ) -> Self {
        Origin { uname: UserName::new(uname), modiname, symboltype, visibility }
    }
}
