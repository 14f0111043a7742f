//! Order-insensitive canonical forms for structural comparison.
//!
//! Normal forms built from permuted import lists agree as sets but not in
//! insertion order; tests compare their canonicalizations.  Hidden names
//! are externalized first so values survive a print/parse round trip.

use std::collections::{BTreeMap, BTreeSet};

use crate::core::{
    Clause, DisambName, ModEquation, Module9, Origin, RenderTable, SpecName, Triple,
};
use crate::norm::rewrite::map_all_names;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct CanonSignature {
    pub sorts: BTreeSet<SpecName>,
    pub cons_decs: BTreeMap<DisambName, SpecName>,
    pub noncons_decs: BTreeMap<DisambName, SpecName>,
    pub infix: BTreeSet<SpecName>,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct CanonModule {
    pub name: String,
    pub param_sigs: BTreeSet<(CanonSignature, BTreeSet<Clause>)>,
    pub public_sig: CanonSignature,
    pub private_sig: CanonSignature,
    pub varsort_cons: BTreeMap<SpecName, SpecName>,
    pub varsort_noncons: BTreeMap<SpecName, SpecName>,
    pub equations: BTreeSet<ModEquation>,
    pub goals: BTreeSet<Clause>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CanonTriple {
    pub module: CanonModule,
    pub originf: BTreeMap<DisambName, Origin>,
    pub depf: BTreeMap<crate::core::ModInstName, BTreeSet<crate::core::ModInstName>>,
}

fn canon_sig(sig: &crate::core::Signature) -> CanonSignature {
    CanonSignature {
        sorts: sig.sorts.iter().cloned().collect(),
        cons_decs: sig.cons_decs.iter().map(|(k, v)| (k.clone(), v.clone())).collect(),
        noncons_decs: sig.noncons_decs.iter().map(|(k, v)| (k.clone(), v.clone())).collect(),
        infix: sig.infix.iter().cloned().collect(),
    }
}

/// Canonicalizes a module.  Imports are intentionally dropped: canonical
/// comparison is used on normal forms an parsed flat modules only.
pub fn canon_module(m: &Module9) -> CanonModule {
    CanonModule {
        name: m.name.clone(),
        param_sigs: m
            .param_sigs
            .iter()
            .map(|ps| (canon_sig(&ps.sig), ps.conditions.iter().cloned().collect()))
            .collect(),
        public_sig: canon_sig(&m.public_sig),
        private_sig: canon_sig(&m.private_sig),
        varsort_cons: m.varsort_cons.iter().map(|(k, v)| (k.clone(), v.clone())).collect(),
        varsort_noncons: m.varsort_noncons.iter().map(|(k, v)| (k.clone(), v.clone())).collect(),
        equations: m.equations.iter().cloned().collect(),
        goals: m.goals.iter().cloned().collect(),
    }
}

pub fn canon_triple(t: &Triple) -> CanonTriple {
    CanonTriple {
        module: canon_module(&t.module),
        originf: t.originf.entries.iter().map(|(k, v)| (k.clone(), v.clone())).collect(),
        depf: t
            .depf
            .entries
            .iter()
            .map(|(k, v)| (k.clone(), v.iter().cloned().collect()))
            .collect(),
    }
}

/// Replaces structural hidden-name prefixes by their rendered text
/// throughout a module, making it comparable with re-parsed output.
pub fn externalize_module(m: &Module9, render: &RenderTable) -> Module9 {
    map_all_names(m, &|n: &SpecName| n.externalize(render))
}
