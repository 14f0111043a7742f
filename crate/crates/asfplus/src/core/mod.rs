//! Semantic data types shared by the whole toolchain: names, namespaces,
//! terms, the 9-tuple module representation, origin and dependency
//! functions.

pub mod module;
pub mod names;
pub mod origin;
pub mod term;

pub use module::{
    module_union, BindingBlock, ImportDecl, Module9, Origin, ParamSig, Signature, SymbolType,
    Visibility,
};
pub use names::{
    short_modinst_name, AbbrevTable, DisambName, ModInstName, NsPrefix, RenderTable, SpecName,
    UserName,
};
pub use origin::{
    combine_dependencies, get_renaming, get_spec_name, references_same_object, DependencyFunc,
    OriginFunc,
};
pub use term::{Clause, EqTerm, Equation, MacroBody, MacroCond, MacroEquation, ModEquation, Term};

/// A module together with its origin and dependency function.  During
/// normalization both functions may still be partial; a normal form is a
/// general form whose module is import-free and whose functions are total
/// on the names and namespaces occurring in it.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Triple {
    pub module: Module9,
    pub originf: OriginFunc,
    pub depf: DependencyFunc,
}
