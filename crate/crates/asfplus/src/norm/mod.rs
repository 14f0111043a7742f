//! The normalization procedure: flattens a module hierarchy into a
//! single import-free module with total origin and dependency functions.

pub mod ops;
pub mod rewrite;

use indexmap::{IndexMap, IndexSet};

use crate::core::{
    ModInstName, Module9, NsPrefix, RenderTable, SpecName, SymbolType, Triple, UserName,
};
use crate::error::{NormError, NormResult};
use crate::provedb::ProveDb;
use crate::syntax::AsfSpec;
use crate::typecheck::SigView;

pub use ops::{
    adapt_visibility, check_semantic_conditions, check_signature_correct, combine_imports,
    combine_with_act_module, combine_with_imports, get_parameter_renamings, hide, instanciate,
    make_consistent, make_gf, rename, separate_para_block, BindEvent, NfBundle,
};
use rewrite::{map_all_names, visit_names};

/// Looks up a module's source text in the specification.
pub fn module_text<'a>(modname: &str, spec: &'a AsfSpec) -> NormResult<&'a Module9> {
    spec.module(modname)
        .ok_or_else(|| NormError::spec(format!("no module named '{}' in the specification", modname)))
}

/// Binds one parameter tuple of a normalized formal module to names of a
/// normalized actual module.
pub fn bind(
    form: NfBundle,
    binding: &IndexMap<UserName, UserName>,
    act_module_name: &str,
    act: NfBundle,
    pdb: &ProveDb,
    check_semantics: bool,
) -> NormResult<NfBundle> {
    let dom: IndexSet<UserName> = binding.keys().cloned().collect();
    // separate the tuple first: the bound formal parameters are about to
    // disappear, so they must not be compared against the actual module's
    // names during visibility adaptation (self-binding would otherwise
    // clash on the parameter names)
    let (form_sep, block, paradefmod) = separate_para_block(form, &dom)?;

    if !block.conditions.is_empty() && !act.triple.module.param_sigs.is_empty() {
        return Err(NormError::spec(format!(
            "parameter tuple with conditions bound to module {}, which still has unbound parameters",
            act_module_name
        )));
    }

    let act_originf = act.triple.originf.clone();
    let act_triple = act.triple.clone();
    let act_hidden = hide(act, &IndexMap::new())?;

    let pair = adapt_visibility(
        vec![act_hidden, form_sep],
        &[SymbolType::Label, SymbolType::Variable, SymbolType::Sort],
    )?;
    let mut pair = adapt_visibility(pair, &[SymbolType::Function])?;
    let form_av = pair.pop().expect("formal form present");
    let act_av = pair.pop().expect("actual form present");

    let par_renaming =
        get_parameter_renamings(&block.sig, binding, &act_originf, &act_av.triple.originf)?;

    // substitute the formal parameters in the module, the origin function
    // and the conditions
    let subst = |n: &SpecName| match n.as_user() {
        Some(u) => par_renaming.get(u).cloned().unwrap_or_else(|| n.clone()),
        None => n.clone(),
    };
    let module = map_all_names(&form_av.triple.module, &subst);
    check_signature_correct(&module)?;
    let originf = rewrite::map_originf_keys(&form_av.triple.originf, &subst)?;
    let conditions: IndexSet<crate::core::Clause> = block
        .conditions
        .iter()
        .map(|c| {
            let m = Module9 { goals: [c.clone()].into_iter().collect(), ..Module9::default() };
            let rewritten = map_all_names(&m, &subst);
            rewritten.goals.into_iter().next().expect("one goal")
        })
        .collect();
    let form_subst = NfBundle {
        triple: Triple { module, originf, depf: form_av.triple.depf },
        diag_depf: form_av.diag_depf,
        bind_log: form_av.bind_log,
    };

    if check_semantics && !conditions.is_empty() {
        let unmet = check_semantic_conditions(
            &conditions,
            &form_subst.triple.module,
            &act_av.triple.module,
            &act_av.triple.originf,
            &act_triple,
            pdb,
        );
        if !unmet.is_empty() {
            return Err(NormError::Semantic { unmet, pos: None });
        }
    }

    let act_root = ModInstName::plain(act_module_name);
    let params: Vec<UserName> = binding.keys().cloned().collect();
    let mut result = combine_with_act_module(form_subst, &paradefmod, act_av)?;
    result.bind_log.push(BindEvent { paradefmod, act_root, params });
    Ok(result)
}

/// Driver for the recursive normalization.  Results are memoized per
/// module name within one run; cyclic imports are detected and reported.
pub struct Normalizer<'a> {
    spec: &'a AsfSpec,
    pdb: &'a ProveDb,
    pub check_semantics: bool,
    pub memo_enabled: bool,
    memo: IndexMap<String, NfBundle>,
    stack: Vec<String>,
}

impl<'a> Normalizer<'a> {
    pub fn new(spec: &'a AsfSpec, pdb: &'a ProveDb) -> Self {
        Normalizer {
            spec,
            pdb,
            check_semantics: true,
            memo_enabled: true,
            memo: IndexMap::new(),
            stack: Vec::new(),
        }
    }

    /// Recursively computes the normal form of the named module.
    pub fn nf(&mut self, modname: &str) -> NormResult<NfBundle> {
        if self.memo_enabled {
            if let Some(hit) = self.memo.get(modname) {
                return Ok(hit.clone());
            }
        }
        if self.stack.iter().any(|m| m == modname) {
            let mut cycle: Vec<String> = self
                .stack
                .iter()
                .skip_while(|m| *m != modname)
                .cloned()
                .collect();
            cycle.push(modname.to_string());
            return Err(NormError::spec(format!("cyclic import: {}", cycle.join(" -> "))));
        }
        self.stack.push(modname.to_string());
        let result = self.nf_inner(modname);
        self.stack.pop();
        let bundle = result?;
        if self.memo_enabled {
            self.memo.insert(modname.to_string(), bundle.clone());
        }
        Ok(bundle)
    }

    fn nf_inner(&mut self, modname: &str) -> NormResult<NfBundle> {
        let source = module_text(modname, self.spec)?;
        let gf = make_gf(source)?;
        let mut processed: Vec<NfBundle> = Vec::new();
        for imp in &source.imports {
            let attach = |e: NormError| e.with_pos(imp.pos);
            let sub = self.nf(&imp.module)?;
            self.check_param_listing(imp, &sub).map_err(attach)?;
            let mut cur = hide(sub, &imp.visibility).map_err(attach)?;
            match &imp.instance {
                None => {
                    if !imp.renaming.is_empty() || !imp.bindings.is_empty() {
                        return Err(NormError::spec_at(
                            format!(
                                "import of {} renames or binds but carries no instance name",
                                imp.module
                            ),
                            imp.pos,
                        ));
                    }
                }
                Some(iname) => {
                    let binding_doms: Vec<IndexSet<UserName>> = imp
                        .bindings
                        .iter()
                        .map(|b| b.binding.keys().cloned().collect())
                        .collect();
                    cur = instanciate(cur, &imp.renaming, &binding_doms, iname).map_err(attach)?;
                    cur = rename(cur, &imp.renaming).map_err(attach)?;
                    for block in &imp.bindings {
                        let act = self.nf(&block.act_module)?;
                        self.check_act_param_listing(block, &act).map_err(attach)?;
                        cur = bind(
                            cur,
                            &block.binding,
                            &block.act_module,
                            act,
                            self.pdb,
                            self.check_semantics,
                        )
                        .map_err(attach)?;
                    }
                }
            }
            processed.push(cur);
        }
        let combined = combine_imports(processed)?;
        let result = combine_with_imports(gf, combined, modname)?;
        self.check_header(modname, &result)?;
        Ok(result)
    }

    /// Every parameter tuple of an imported module must be listed after
    /// the module name, either re-listed or bound.
    fn check_param_listing(&self, imp: &crate::core::ImportDecl, sub: &NfBundle) -> NormResult<()> {
        let tuples = sub.triple.module.param_tuples();
        let mut covered: Vec<IndexSet<UserName>> = imp
            .listed_params
            .iter()
            .map(|t| t.iter().cloned().collect())
            .collect();
        covered.extend(
            imp.bindings
                .iter()
                .map(|b| b.binding.keys().cloned().collect::<IndexSet<_>>()),
        );
        for tuple in &tuples {
            if !covered.iter().any(|c| c == tuple) {
                let names: Vec<String> = tuple.iter().map(|n| n.to_string()).collect();
                return Err(NormError::spec(format!(
                    "import of {} must list its parameter tuple ({})",
                    imp.module,
                    names.join(", ")
                )));
            }
        }
        for c in &covered {
            if !tuples.iter().any(|t| t == c) {
                let names: Vec<String> = c.iter().map(|n| n.to_string()).collect();
                return Err(NormError::spec(format!(
                    "import of {} lists a parameter tuple ({}) that the module does not declare",
                    imp.module,
                    names.join(", ")
                )));
            }
        }
        Ok(())
    }

    /// The same listing rule for the actual module of a binding block.
    fn check_act_param_listing(
        &self,
        block: &crate::core::BindingBlock,
        act: &NfBundle,
    ) -> NormResult<()> {
        let tuples = act.triple.module.param_tuples();
        let listed: Vec<IndexSet<UserName>> = block
            .act_params
            .iter()
            .map(|t| t.iter().cloned().collect())
            .collect();
        for tuple in &tuples {
            if !listed.iter().any(|c| c == tuple) {
                let names: Vec<String> = tuple.iter().map(|n| n.to_string()).collect();
                return Err(NormError::spec(format!(
                    "actual module {} has a parameter tuple ({}) that must be listed",
                    block.act_module,
                    names.join(", ")
                )));
            }
        }
        Ok(())
    }

    /// The header of a module must list exactly the parameter tuples its
    /// normal form retains (own plus inherited unbound ones).
    fn check_header(&self, modname: &str, result: &NfBundle) -> NormResult<()> {
        let remaining: Vec<IndexSet<UserName>> = result.triple.module.param_tuples();
        let declared: Vec<IndexSet<UserName>> = self
            .spec
            .headers
            .get(modname)
            .map(|h| h.iter().map(|t| t.iter().cloned().collect()).collect())
            .unwrap_or_default();
        let missing = remaining.iter().find(|t| !declared.iter().any(|d| d == *t));
        if let Some(t) = missing {
            let names: Vec<String> = t.iter().map(|n| n.to_string()).collect();
            return Err(NormError::spec(format!(
                "module {} must list its parameter tuple ({}) in the header",
                modname,
                names.join(", ")
            )));
        }
        let excess = declared.iter().find(|t| !remaining.iter().any(|d| d == *t));
        if let Some(t) = excess {
            let names: Vec<String> = t.iter().map(|n| n.to_string()).collect();
            return Err(NormError::spec(format!(
                "module {} declares a parameter tuple ({}) it does not have",
                modname,
                names.join(", ")
            )));
        }
        Ok(())
    }
}

/// A finished normalization run: the normal form plus the run's hidden
/// name prefix assignment.
#[derive(Clone, Debug)]
pub struct NormRun {
    pub bundle: NfBundle,
    pub render: RenderTable,
}

/// Builds the prefix table for a run from every namespace occurring in
/// hidden names or origins.
pub fn build_render_table(bundle: &NfBundle, spec: &AsfSpec) -> RenderTable {
    let mut namespaces: IndexSet<ModInstName> = IndexSet::new();
    fn collect(namespaces: &mut IndexSet<ModInstName>, n: &SpecName) {
        if let SpecName::Hidden { prefix: NsPrefix::Ns(ns), .. } = n {
            namespaces.insert(ns.clone());
        }
    }
    visit_names(&bundle.triple.module, &mut |n| collect(&mut namespaces, n));
    for (k, o) in &bundle.triple.originf.entries {
        collect(&mut namespaces, &k.name);
        for s in &k.sortv {
            collect(&mut namespaces, s);
        }
        namespaces.insert(o.modiname.clone());
    }
    RenderTable::build(namespaces.iter(), &spec.abbrevs)
}

/// Flattens the whole specification: normalizes the top module and
/// returns the run with its render table.
pub fn normal_form(spec: &AsfSpec, pdb: &ProveDb, check_semantics: bool) -> NormResult<NormRun> {
    let mut norm = Normalizer::new(spec, pdb);
    norm.check_semantics = check_semantics;
    let bundle = norm.nf(&spec.top)?;
    let render = build_render_table(&bundle, spec);
    Ok(NormRun { bundle, render })
}

/// Validates the normal-form invariants: the module is import-free, every
/// disambiguated name occurring in it has exactly one origin, every
/// origin's name matches its key, and the dependency function is total on
/// the namespaces of the origin range.
pub fn validate_nf(bundle: &NfBundle) -> Result<(), String> {
    let t = &bundle.triple;
    if !t.module.imports.is_empty() {
        return Err("normal form still contains imports".into());
    }
    // totality of the origin function on occurring names: sorts,
    // declaration keys, variables, labels, and resolved term occurrences
    let mut missing: Vec<String> = Vec::new();
    let mut check_plain = |n: &SpecName, what: &str| {
        if t.originf.get_plain(n).is_none() {
            missing.push(format!("{} '{}'", what, n));
        }
    };
    for sig in [&t.module.public_sig, &t.module.private_sig] {
        for s in &sig.sorts {
            check_plain(s, "sort");
        }
    }
    for ps in &t.module.param_sigs {
        for s in &ps.sig.sorts {
            check_plain(s, "parameter sort");
        }
    }
    for (v, _) in t.module.varsort_cons.iter().chain(t.module.varsort_noncons.iter()) {
        check_plain(v, "variable");
    }
    let mut sigs = vec![&t.module.public_sig, &t.module.private_sig];
    for ps in &t.module.param_sigs {
        sigs.push(&ps.sig);
    }
    for sig in sigs {
        for (k, _) in sig.cons_decs.iter().chain(sig.noncons_decs.iter()) {
            if t.originf.get(k).is_none() {
                missing.push(format!("function '{}'", k));
            }
        }
    }
    if !missing.is_empty() {
        return Err(format!("origin function not total on: {}", missing.join(", ")));
    }
    // consistency: every entry's origin renders back to its key name
    for (k, o) in &t.originf.entries {
        let expect = crate::core::get_spec_name(o);
        if expect != k.name {
            return Err(format!(
                "inconsistent origin entry: key '{}' but origin renders '{}'",
                k.name, expect
            ));
        }
    }
    // the dependency function covers every namespace in the origin range
    for o in t.originf.entries.values() {
        if t.depf.get(&o.modiname).is_none() {
            return Err(format!("dependency function not total: missing {}", o.modiname));
        }
    }
    // terms resolve against the flat signature
    let view = SigView::new(&t.module);
    view.check_module().map_err(|e| format!("flat module is not well-sorted: {}", e))?;
    let own_ns = t
        .depf
        .entries
        .iter()
        .find(|(_, deps)| deps.is_empty())
        .map(|(ns, _)| ns.clone());
    if own_ns.is_none() {
        return Err("no namespace with empty dependents (own namespace missing)".into());
    }
    Ok(())
}
