//! The operations of the normal-form procedure: origin bookkeeping,
//! visibility adaptation with the identification rule, hiding,
//! instanciation, explicit renaming, parameter separation and binding
//! support, and the combination functions.

use indexmap::{IndexMap, IndexSet};

use crate::core::{
    combine_dependencies, get_renaming, module_union, references_same_object,
    Clause, DependencyFunc, DisambName, ModInstName, Module9, Origin, OriginFunc, ParamSig,
    Signature, SpecName, SymbolType, Term, Triple, UserName, Visibility,
};
use crate::error::{NormError, NormResult, UnmetCondition};
use crate::provedb::{clause_fingerprint, ProveDb};

use super::rewrite::{
    map_all_names, map_function_names, map_originf_function_keys, map_originf_keys,
    map_sort_var_label_names,
};

/// A normal form plus bookkeeping that the diagram module needs: a second
/// dependency function that treats the implicit import of an actual
/// module like a use-import, and the log of performed bindings.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct NfBundle {
    pub triple: Triple,
    pub diag_depf: DependencyFunc,
    pub bind_log: Vec<BindEvent>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BindEvent {
    pub paradefmod: ModInstName,
    pub act_root: ModInstName,
    pub params: Vec<UserName>,
}

fn uname_of(name: &SpecName, what: &str) -> NormResult<UserName> {
    match name.as_user() {
        Some(u) => Ok(u.clone()),
        None => Err(NormError::spec(format!("hidden name '{}' not allowed as {}", name, what))),
    }
}

/// Builds the general form of an isolated, not necessarily import-free
/// module: every locally declared sort, function, parameter, variable and
/// label gets an origin in the module's own namespace; imported names
/// stay absent and the dependency function starts empty.
pub fn make_gf(module: &Module9) -> NormResult<Triple> {
    let ns = ModInstName::plain(module.name.clone());
    let mut of = OriginFunc::new();
    let mut add = |key: DisambName, origin: Origin| -> NormResult<()> {
        of.insert(key, origin).map_err(|(k, _, _)| {
            NormError::spec(format!(
                "duplicate declaration of '{}' in module {}",
                k, module.name
            ))
        })
    };

    let mut sigs: Vec<(&Signature, Visibility)> = vec![
        (&module.public_sig, Visibility::Public),
        (&module.private_sig, Visibility::Private),
    ];
    for ps in &module.param_sigs {
        sigs.push((&ps.sig, Visibility::Parameter));
    }
    for (sig, vis) in sigs {
        for s in &sig.sorts {
            let u = uname_of(s, "a sort declaration")?;
            add(DisambName::plain(s.clone()), Origin { uname: u, modiname: ns.clone(), symboltype: SymbolType::Sort, visibility: vis })?;
        }
        for (k, _) in sig.cons_decs.iter().chain(sig.noncons_decs.iter()) {
            let u = uname_of(&k.name, "a function declaration")?;
            add(k.clone(), Origin { uname: u, modiname: ns.clone(), symboltype: SymbolType::Function, visibility: vis })?;
        }
    }
    for (v, _) in module.varsort_cons.iter().chain(module.varsort_noncons.iter()) {
        let u = uname_of(v, "a variable declaration")?;
        add(DisambName::plain(v.clone()), Origin { uname: u, modiname: ns.clone(), symboltype: SymbolType::Variable, visibility: Visibility::Private })?;
    }
    let mut labels: Vec<SpecName> = Vec::new();
    for eq in &module.equations {
        if let crate::core::ModEquation::Plain(e) = eq {
            labels.push(e.label.clone());
        }
    }
    for g in &module.goals {
        labels.push(g.label.clone());
    }
    for ps in &module.param_sigs {
        for c in &ps.conditions {
            labels.push(c.label.clone());
        }
    }
    for l in labels {
        let u = uname_of(&l, "a label")?;
        add(DisambName::plain(l), Origin { uname: u, modiname: ns.clone(), symboltype: SymbolType::Label, visibility: Visibility::Private })?;
    }
    Ok(Triple { module: module.clone(), originf: of, depf: DependencyFunc::new() })
}

/// Restores consistency after origin visibilities were manipulated:
/// sorts, variables and labels are renamed first (also inside the sort
/// vectors of disambiguated function keys), then functions, and finally
/// declarations move between the public and private signature blocks
/// according to their visibility.
pub fn make_consistent(module: Module9, of: OriginFunc) -> NormResult<(Module9, OriginFunc)> {
    // stage 1: sorts, variables, labels (all have empty sort vectors)
    let stage1 = get_renaming(&of, &[SymbolType::Label, SymbolType::Variable, SymbolType::Sort]);
    let (module1, of1) = if stage1.is_empty() {
        (module, of)
    } else {
        let name_map: IndexMap<SpecName, SpecName> =
            stage1.iter().map(|(k, v)| (k.name.clone(), v.clone())).collect();
        let f = |n: &SpecName| name_map.get(n).cloned().unwrap_or_else(|| n.clone());
        (map_sort_var_label_names(&module, &f), map_originf_keys(&of, &f)?)
    };

    // stage 2: functions, by disambiguated name
    let stage2 = get_renaming(&of1, &[SymbolType::Function]);
    let (module2, of2) = if stage2.is_empty() {
        (module1, of1)
    } else {
        (map_function_names(&module1, &stage2)?, map_originf_function_keys(&of1, &stage2)?)
    };

    // redistribute between the public and private signature blocks
    let mut public = Signature::default();
    let mut private = Signature::default();
    let pool_sigs = [&module2.public_sig, &module2.private_sig];
    for sig in pool_sigs {
        for s in &sig.sorts {
            let vis = of2.get_plain(s).map(|o| o.visibility);
            match vis {
                Some(Visibility::Public) => {
                    public.sorts.insert(s.clone());
                }
                _ => {
                    private.sorts.insert(s.clone());
                }
            }
        }
        for (cons, decs) in [(true, &sig.cons_decs), (false, &sig.noncons_decs)] {
            for (k, v) in decs {
                let vis = of2.get(k).map(|o| o.visibility);
                let target = match vis {
                    Some(Visibility::Public) => &mut public,
                    _ => &mut private,
                };
                if cons {
                    target.cons_decs.insert(k.clone(), v.clone());
                } else {
                    target.noncons_decs.insert(k.clone(), v.clone());
                }
                if sig.infix.contains(&k.name) {
                    target.infix.insert(k.name.clone());
                }
            }
        }
    }
    let module3 = Module9 { public_sig: public, private_sig: private, ..module2 };
    Ok((module3, of2))
}

/// The identification rule: adjusts visibilities of identified names
/// across several normal forms and reports conflicts.  Sort
/// identifications must run before function identifications so the sort
/// vector test reduces to syntactic equality.
pub fn adapt_visibility(
    bundles: Vec<NfBundle>,
    symboltypes: &[SymbolType],
) -> NormResult<Vec<NfBundle>> {
    let mut bundles = bundles;
    let n = bundles.len();
    for i in 0..n {
        for j in (i + 1)..n {
            let keys_i: Vec<DisambName> =
                bundles[i].triple.originf.entries.keys().cloned().collect();
            for ki in &keys_i {
                let oi = match bundles[i].triple.originf.get(ki) {
                    Some(o) => o.clone(),
                    None => continue,
                };
                if !symboltypes.contains(&oi.symboltype) {
                    continue;
                }
                let keys_j: Vec<DisambName> =
                    bundles[j].triple.originf.entries.keys().cloned().collect();
                for kj in &keys_j {
                    let oj = match bundles[j].triple.originf.get(kj) {
                        Some(o) => o.clone(),
                        None => continue,
                    };
                    if ki.sortv != kj.sortv || oi.uname != oj.uname {
                        continue;
                    }
                    if oi.modiname == oj.modiname {
                        if oi.symboltype != oj.symboltype {
                            return Err(NormError::spec(format!(
                                "'{}' from namespace {} is declared both as {:?} and {:?}",
                                oi.uname, oi.modiname, oi.symboltype, oj.symboltype
                            )));
                        }
                        if oi.visibility == Visibility::Hidden
                            && matches!(oj.visibility, Visibility::Public | Visibility::Private)
                        {
                            bundles[i]
                                .triple
                                .originf
                                .entries
                                .get_mut(ki)
                                .expect("entry present")
                                .visibility = oj.visibility;
                        } else if oj.visibility == Visibility::Hidden
                            && matches!(oi.visibility, Visibility::Public | Visibility::Private)
                        {
                            bundles[j]
                                .triple
                                .originf
                                .entries
                                .get_mut(kj)
                                .expect("entry present")
                                .visibility = oi.visibility;
                        } else if oi.visibility != oj.visibility {
                            return Err(NormError::export(format!(
                                "'{}' from namespace {} is imported both {:?} and {:?}",
                                oi.uname, oi.modiname, oi.visibility, oj.visibility
                            )));
                        }
                    } else if ki.name == kj.name {
                        return Err(NormError::clash(format!(
                            "{} '{}' ({} vs {})",
                            match oi.symboltype {
                                SymbolType::Sort => "sort",
                                SymbolType::Function => "function",
                                SymbolType::Variable => "variable",
                                SymbolType::Label => "label",
                            },
                            ki,
                            oi.modiname,
                            oj.modiname
                        )));
                    }
                }
            }
        }
    }
    bundles
        .into_iter()
        .map(|b| {
            let (module, of) = make_consistent(b.triple.module, b.triple.originf)?;
            Ok(NfBundle {
                triple: Triple { module, originf: of, depf: b.triple.depf },
                diag_depf: b.diag_depf,
                bind_log: b.bind_log,
            })
        })
        .collect()
}

fn union_originf(a: &OriginFunc, b: &OriginFunc) -> NormResult<OriginFunc> {
    a.union(b).map_err(|(k, x, y)| {
        NormError::clash(format!("'{}' ({} vs {})", k, x.modiname, y.modiname))
    })
}

/// Combines the processed normal forms of all imports of one module.
pub fn combine_imports(bundles: Vec<NfBundle>) -> NormResult<NfBundle> {
    let bundles = adapt_visibility(
        bundles,
        &[SymbolType::Label, SymbolType::Variable, SymbolType::Sort],
    )?;
    let bundles = adapt_visibility(bundles, &[SymbolType::Function])?;
    let module = module_union(bundles.iter().map(|b| &b.triple.module));
    let mut originf = OriginFunc::new();
    for b in &bundles {
        originf = union_originf(&originf, &b.triple.originf)?;
    }
    let depf = combine_dependencies(bundles.iter().map(|b| &b.triple.depf));
    let diag_depf = combine_dependencies(bundles.iter().map(|b| &b.diag_depf));
    let bind_log = bundles.into_iter().flat_map(|b| b.bind_log).collect();
    Ok(NfBundle { triple: Triple { module, originf, depf }, diag_depf, bind_log })
}

/// Combines the general form of a module with the combination of its
/// imports; the result carries the `.nf` name and a dependency function
/// in which every imported namespace gains the importing module as a
/// dependent.
pub fn combine_with_imports(gf: Triple, imp: NfBundle, modname: &str) -> NormResult<NfBundle> {
    let mut own = gf.module.clone();
    own.imports.clear();
    let mut module = module_union([&imp.triple.module, &own]);
    module.name = format!("{}.nf", modname);
    let originf = union_originf(&gf.originf, &imp.triple.originf)?;
    let own_ns = ModInstName::plain(modname);

    let extend = |src: &DependencyFunc| {
        let mut out = DependencyFunc::new();
        for (ns, deps) in &src.entries {
            let mut deps = deps.clone();
            deps.insert(own_ns.clone());
            out.entries.insert(ns.clone(), deps);
        }
        out.entries.insert(own_ns.clone(), IndexSet::new());
        out
    };
    let depf = extend(&imp.triple.depf);
    let diag_depf = extend(&imp.diag_depf);
    Ok(NfBundle {
        triple: Triple { module, originf, depf },
        diag_depf,
        bind_log: imp.bind_log,
    })
}

/// Hides all private names and adjusts public names to the visibility the
/// import block assigns, defaulting to hidden.  The block may only list
/// exported names.
pub fn hide(bundle: NfBundle, vf: &IndexMap<UserName, Visibility>) -> NormResult<NfBundle> {
    let of = &bundle.triple.originf;
    for (uname, _) in vf {
        let ok = of
            .entries
            .values()
            .any(|o| o.uname == *uname && o.visibility == Visibility::Public);
        if !ok {
            return Err(NormError::spec(format!(
                "import block lists '{}', which is not an exported name of {}",
                uname, bundle.triple.module.name
            )));
        }
    }
    let mut of2 = OriginFunc::new();
    for (k, o) in &of.entries {
        let visibility = match o.visibility {
            Visibility::Hidden | Visibility::Parameter => o.visibility,
            Visibility::Private => Visibility::Hidden,
            Visibility::Public => vf.get(&o.uname).copied().unwrap_or(Visibility::Hidden),
        };
        of2.entries.insert(k.clone(), Origin { visibility, ..o.clone() });
    }
    let (module, originf) = make_consistent(bundle.triple.module, of2)?;
    Ok(NfBundle {
        triple: Triple { module, originf, depf: bundle.triple.depf },
        diag_depf: bundle.diag_depf,
        bind_log: bundle.bind_log,
    })
}

/// Instanciates the namespaces directly affected by an explicit renaming
/// or parameter binding, plus all namespaces depending on them, with the
/// import's instance name.
pub fn instanciate(
    bundle: NfBundle,
    renaming: &IndexMap<UserName, SpecName>,
    binding_doms: &[IndexSet<UserName>],
    iname: &str,
) -> NormResult<NfBundle> {
    let mut affected: IndexSet<UserName> = renaming.keys().cloned().collect();
    for dom in binding_doms {
        affected.extend(dom.iter().cloned());
    }
    let of = &bundle.triple.originf;
    let mut toinst: IndexSet<ModInstName> = IndexSet::new();
    for (k, o) in &of.entries {
        if let Some(u) = k.name.as_user() {
            if affected.contains(u) {
                toinst.insert(o.modiname.clone());
            }
        }
    }
    let mut toinst_all = toinst.clone();
    for ns in &toinst {
        if let Some(deps) = bundle.triple.depf.get(ns) {
            toinst_all.extend(deps.iter().cloned());
        }
    }
    if toinst_all.is_empty() {
        return Ok(bundle);
    }

    let mut replacement: IndexMap<ModInstName, ModInstName> = IndexMap::new();
    for ns in &toinst_all {
        let inst = ns.instanciated(iname).map_err(NormError::spec)?;
        replacement.insert(ns.clone(), inst);
    }
    let repl_ns = |ns: &ModInstName| replacement.get(ns).cloned().unwrap_or_else(|| ns.clone());
    let repl_name = |n: &SpecName| match n {
        SpecName::Hidden { prefix: crate::core::NsPrefix::Ns(ns), uname } => SpecName::Hidden {
            prefix: crate::core::NsPrefix::Ns(repl_ns(ns)),
            uname: uname.clone(),
        },
        _ => n.clone(),
    };

    let module = map_all_names(&bundle.triple.module, &repl_name);
    let mut originf = map_originf_keys(&bundle.triple.originf, &repl_name)?;
    for o in originf.entries.values_mut() {
        o.modiname = repl_ns(&o.modiname);
    }
    let map_depf = |df: &DependencyFunc| {
        let mut out = DependencyFunc::new();
        for (ns, deps) in &df.entries {
            out.entries
                .entry(repl_ns(ns))
                .or_default()
                .extend(deps.iter().map(|d| repl_ns(d)));
        }
        out
    };
    Ok(NfBundle {
        triple: Triple { module, originf, depf: map_depf(&bundle.triple.depf) },
        diag_depf: map_depf(&bundle.diag_depf),
        bind_log: bundle.bind_log,
    })
}

/// Checks that the combined signature of a module declares no
/// disambiguated name twice with different target sorts or constructor
/// kinds.
pub fn check_signature_correct(module: &Module9) -> NormResult<()> {
    let mut seen: IndexMap<&DisambName, (&SpecName, bool)> = IndexMap::new();
    let mut sigs: Vec<&Signature> = vec![&module.public_sig, &module.private_sig];
    for ps in &module.param_sigs {
        sigs.push(&ps.sig);
    }
    for sig in sigs {
        for (cons, decs) in [(true, &sig.cons_decs), (false, &sig.noncons_decs)] {
            for (k, v) in decs {
                if let Some((target, kind)) = seen.get(k) {
                    if *target != v || *kind != cons {
                        return Err(NormError::spec(format!(
                            "incorrect signature: '{}' is declared with conflicting target sorts or constructor kinds",
                            k
                        )));
                    }
                } else {
                    seen.insert(k, (v, cons));
                }
            }
        }
    }
    Ok(())
}

/// Explicit renaming.  The rename map only affects visible names; a
/// renaming that makes two previously distinct names of one namespace
/// coincide, or that produces an incorrect signature, is rejected.
pub fn rename(bundle: NfBundle, renaming: &IndexMap<UserName, SpecName>) -> NormResult<NfBundle> {
    if renaming.is_empty() {
        return Ok(bundle);
    }
    let of = &bundle.triple.originf;
    // collapse detection: a renamed name may not coincide with another
    // name of the same namespace
    for (x, y) in renaming {
        let from = SpecName::User(x.clone());
        if from == *y {
            continue;
        }
        let namespaces: IndexSet<&ModInstName> = of
            .entries
            .iter()
            .filter(|(k, _)| k.name == from)
            .map(|(_, o)| &o.modiname)
            .collect();
        for (k2, o2) in &of.entries {
            let clashes_existing = k2.name == *y && namespaces.contains(&o2.modiname);
            let clashes_renamed = k2
                .name
                .as_user()
                .map(|u| u != x && renaming.get(u) == Some(y))
                .unwrap_or(false)
                && namespaces.contains(&o2.modiname);
            if clashes_existing || clashes_renamed {
                return Err(NormError::spec(format!(
                    "renaming '{}' to '{}' collapses two previously distinct names of namespace {}",
                    x, y, o2.modiname
                )));
            }
        }
    }

    let ren = |n: &SpecName| match n.as_user() {
        Some(u) => renaming.get(u).cloned().unwrap_or_else(|| n.clone()),
        None => n.clone(),
    };
    let module = map_all_names(&bundle.triple.module, &ren);
    check_signature_correct(&module)?;
    let mut originf = map_originf_keys(&bundle.triple.originf, &ren)?;
    for o in originf.entries.values_mut() {
        if o.visibility != Visibility::Hidden {
            if let Some(SpecName::User(new)) = renaming.get(&o.uname) {
                o.uname = new.clone();
            }
        }
    }
    Ok(NfBundle {
        triple: Triple { module, originf, depf: bundle.triple.depf },
        diag_depf: bundle.diag_depf,
        bind_log: bundle.bind_log,
    })
}

/// Extracts the parameter signature whose name set equals `parameters`
/// from a normal form, removing its names from the origin function and
/// reporting the namespace the parameters belong to.
pub fn separate_para_block(
    bundle: NfBundle,
    parameters: &IndexSet<UserName>,
) -> NormResult<(NfBundle, ParamSig, ModInstName)> {
    let mut module = bundle.triple.module.clone();
    let idx = module
        .param_sigs
        .iter()
        .position(|ps| {
            let names: IndexSet<UserName> =
                ps.names().into_iter().filter_map(|n| n.as_user().cloned()).collect();
            names == *parameters
        })
        .ok_or_else(|| {
            let names: Vec<String> = parameters.iter().map(|p| p.to_string()).collect();
            NormError::spec(format!(
                "no parameter tuple of {} consists of exactly ({})",
                bundle.triple.module.name,
                names.join(", ")
            ))
        })?;
    let block = module.param_sigs.remove(idx);

    let param_names: IndexSet<SpecName> =
        parameters.iter().map(|p| SpecName::User(p.clone())).collect();
    let paradefmod = bundle
        .triple
        .originf
        .entries
        .iter()
        .find(|(k, o)| param_names.contains(&k.name) && o.visibility == Visibility::Parameter)
        .map(|(_, o)| o.modiname.clone())
        .ok_or_else(|| NormError::spec("parameter tuple has no origins".to_string()))?;

    let mut originf = OriginFunc::new();
    for (k, o) in &bundle.triple.originf.entries {
        let is_param_entry =
            param_names.contains(&k.name) && o.visibility == Visibility::Parameter;
        if !is_param_entry {
            originf.entries.insert(k.clone(), o.clone());
        }
    }
    Ok((
        NfBundle {
            triple: Triple { module, originf, depf: bundle.triple.depf },
            diag_depf: bundle.diag_depf,
            bind_log: bundle.bind_log,
        },
        block,
        paradefmod,
    ))
}

/// Finds the entry of `of_av` that references the same object as `key`
/// does with respect to `of`.
fn counterpart(
    key: &DisambName,
    of: &OriginFunc,
    of_av: &OriginFunc,
) -> Option<DisambName> {
    of_av
        .entries
        .keys()
        .find(|k| references_same_object(k, of_av, key, of))
        .cloned()
}

/// Computes the names that the formal parameters must be syntactically
/// replaced by: the renditions, within the visibility-adjusted actual
/// module, of the names the binding assigns.
pub fn get_parameter_renamings(
    sig_p: &Signature,
    binding: &IndexMap<UserName, UserName>,
    of_act: &OriginFunc,
    of_act_av: &OriginFunc,
) -> NormResult<IndexMap<UserName, SpecName>> {
    let mut out: IndexMap<UserName, SpecName> = IndexMap::new();

    // sort parameters
    let mut sort_params: Vec<UserName> = Vec::new();
    for s in &sig_p.sorts {
        sort_params.push(uname_of(s, "a parameter")?);
    }
    for sortpar in &sort_params {
        let actual = binding
            .get(sortpar)
            .ok_or_else(|| NormError::spec(format!("parameter '{}' is not bound", sortpar)))?;
        let act_key = DisambName::plain(SpecName::User(actual.clone()));
        if of_act.get(&act_key).is_none() {
            return Err(NormError::spec(format!(
                "actual sort '{}' does not exist in the actual module",
                actual
            )));
        }
        let av_key = counterpart(&act_key, of_act, of_act_av).ok_or_else(|| {
            NormError::spec(format!(
                "actual sort '{}' has no counterpart in the adjusted actual module",
                actual
            ))
        })?;
        out.insert(sortpar.clone(), av_key.name);
    }

    // non-parameter sorts occurring in parameter-function declarations
    // must exist in the actual module too
    let mut sorts_np: IndexSet<SpecName> = IndexSet::new();
    for (k, v) in sig_p.cons_decs.iter().chain(sig_p.noncons_decs.iter()) {
        for s in k.sortv.iter().chain(std::iter::once(v)) {
            if !sig_p.sorts.contains(s) {
                sorts_np.insert(s.clone());
            }
        }
    }
    for s in &sorts_np {
        if of_act_av.get_plain(s).is_none() {
            return Err(NormError::spec(format!(
                "sort '{}' of a parameter-function declaration does not exist in the actual module",
                s
            )));
        }
    }

    // rewrite the parameter declarations into the actual module's names
    let mut local: IndexMap<SpecName, SpecName> = IndexMap::new();
    for sortpar in &sort_params {
        local.insert(
            SpecName::User(sortpar.clone()),
            SpecName::User(binding[sortpar].clone()),
        );
    }
    for s in &sorts_np {
        let av_key = DisambName::plain(s.clone());
        let act_key = counterpart(&av_key, of_act_av, of_act).ok_or_else(|| {
            NormError::spec(format!(
                "sort '{}' has no counterpart in the actual module",
                s
            ))
        })?;
        local.insert(s.clone(), act_key.name);
    }
    let rewrite = |s: &SpecName| local.get(s).cloned().unwrap_or_else(|| s.clone());

    // function parameters
    for (k, _) in sig_p.cons_decs.iter().chain(sig_p.noncons_decs.iter()) {
        let funcpar = uname_of(&k.name, "a parameter")?;
        let actual = binding
            .get(&funcpar)
            .ok_or_else(|| NormError::spec(format!("parameter '{}' is not bound", funcpar)))?;
        let sortv: Vec<SpecName> = k.sortv.iter().map(&rewrite).collect();
        let act_key = DisambName::func(SpecName::User(actual.clone()), sortv);
        if of_act.get(&act_key).is_none() {
            return Err(NormError::spec(format!(
                "binding of function parameter '{}' is incorrect: no well-sorted actual parameter '{}'",
                funcpar, act_key
            )));
        }
        let av_key = counterpart(&act_key, of_act, of_act_av).ok_or_else(|| {
            NormError::spec(format!(
                "actual function '{}' has no counterpart in the adjusted actual module",
                act_key
            ))
        })?;
        out.insert(funcpar, av_key.name);
    }
    Ok(out)
}

fn merged_varsorts(m: &Module9) -> IndexMap<SpecName, SpecName> {
    let mut out = m.varsort_cons.clone();
    for (k, v) in &m.varsort_noncons {
        out.entry(k.clone()).or_insert_with(|| v.clone());
    }
    out
}

fn match_terms(
    goal: &Term,
    cond: &Term,
    goal_vars: &IndexMap<SpecName, SpecName>,
    cond_vars: &IndexMap<SpecName, SpecName>,
    sub: &mut IndexMap<SpecName, SpecName>,
) -> bool {
    match (goal, cond) {
        (Term::Name(g), c) if goal_vars.contains_key(g) => match c {
            Term::Name(v) if cond_vars.contains_key(v) => match sub.get(g) {
                Some(bound) => bound == v,
                None => {
                    sub.insert(g.clone(), v.clone());
                    true
                }
            },
            _ => false,
        },
        (Term::Name(g), Term::Name(c)) => g == c,
        (Term::App { func: gf, args: ga }, Term::App { func: cf, args: ca }) => {
            gf == cf
                && ga.len() == ca.len()
                && ga
                    .iter()
                    .zip(ca.iter())
                    .all(|(g, c)| match_terms(g, c, goal_vars, cond_vars, sub))
        }
        _ => false,
    }
}

fn match_eqs(
    goal: &[crate::core::EqTerm],
    cond: &[crate::core::EqTerm],
    goal_vars: &IndexMap<SpecName, SpecName>,
    cond_vars: &IndexMap<SpecName, SpecName>,
    sub: &mut IndexMap<SpecName, SpecName>,
) -> bool {
    goal.len() == cond.len()
        && goal.iter().zip(cond.iter()).all(|(g, c)| {
            match (&g.rhs, &c.rhs) {
                (None, None) => match_terms(&g.lhs, &c.lhs, goal_vars, cond_vars, sub),
                (Some(gr), Some(cr)) => {
                    match_terms(&g.lhs, &c.lhs, goal_vars, cond_vars, sub)
                        && match_terms(gr, cr, goal_vars, cond_vars, sub)
                }
                _ => false,
            }
        })
}

/// Checks the semantic conditions of a parameter binding: each condition
/// needs a goal of the actual module that maps onto it by a sort-pure,
/// kind-preserving variable substitution and whose proof is recorded in
/// the prove-db.  All unmet conditions are reported together.
pub fn check_semantic_conditions(
    conditions: &IndexSet<Clause>,
    mod_form: &Module9,
    mod_act_av: &Module9,
    of_act_av: &OriginFunc,
    nform_act: &Triple,
    pdb: &ProveDb,
) -> Vec<UnmetCondition> {
    let form_vars = merged_varsorts(mod_form);
    let act_av_vars = merged_varsorts(mod_act_av);
    let act_vars = merged_varsorts(&nform_act.module);
    let mut unmet = Vec::new();

    'conditions: for condition in conditions {
        let mut best_reason =
            "no goal of the actual module matches the condition".to_string();
        for goal in &mod_act_av.goals {
            let mut sub = IndexMap::new();
            let matches = match_eqs(
                &goal.antecedent,
                &condition.antecedent,
                &act_av_vars,
                &form_vars,
                &mut sub,
            ) && match_eqs(
                &goal.succedent,
                &condition.succedent,
                &act_av_vars,
                &form_vars,
                &mut sub,
            );
            if !matches {
                continue;
            }
            // the substitution must be sort-pure and map constructor
            // variables to constructor variables
            let mut ok = true;
            for (x, y) in &sub {
                if act_av_vars.get(x) != form_vars.get(y) {
                    ok = false;
                    break;
                }
                let x_cons = mod_act_av.varsort_cons.contains_key(x);
                let y_cons = mod_form.varsort_cons.contains_key(y);
                if x_cons != y_cons {
                    ok = false;
                    break;
                }
            }
            if !ok {
                best_reason = format!(
                    "goal [{}] matches structurally but the substitution is not sort-pure or mixes variable kinds",
                    goal.label
                );
                continue;
            }
            // locate the corresponding goal of the unhidden actual module
            // via the label's origin and consult the prove-db
            let origin = match of_act_av.get_plain(&goal.label) {
                Some(o) => o.clone(),
                None => continue,
            };
            let act_goal = nform_act.goals_by_origin(&origin);
            match act_goal {
                Some(g) => {
                    let fp = clause_fingerprint(g, &act_vars);
                    if pdb.is_proven(&origin.modiname.module, origin.uname.as_str(), &fp) {
                        continue 'conditions;
                    }
                    best_reason = format!(
                        "goal [{}] of module {} matches but no valid proof is recorded",
                        origin.uname, origin.modiname.module
                    );
                }
                None => {
                    best_reason = format!(
                        "goal [{}] has no counterpart in the actual module",
                        goal.label
                    );
                }
            }
        }
        let label = match &condition.label {
            SpecName::User(u) => u.to_string(),
            SpecName::Hidden { uname, .. } => uname.to_string(),
        };
        unmet.push(UnmetCondition {
            label,
            condition: format!("{:?} --> {:?}", condition.antecedent, condition.succedent),
            reason: best_reason,
        });
    }
    unmet
}

impl Triple {
    /// Finds a goal whose label has the given origin (matched by user
    /// name and namespace).
    pub fn goals_by_origin(&self, origin: &Origin) -> Option<&Clause> {
        self.module.goals.iter().find(|g| {
            self.originf
                .get_plain(&g.label)
                .map(|o| o.uname == origin.uname && o.modiname == origin.modiname)
                .unwrap_or(false)
        })
    }
}

/// Implants the normal form of an actual module into the normal form of
/// the formal module whose parameters were bound: the module keeps the
/// formal module's name, and every namespace of the actual side gains the
/// parameters' namespace (plus its dependents) as dependents.
pub fn combine_with_act_module(
    form: NfBundle,
    paradefmod: &ModInstName,
    act: NfBundle,
) -> NormResult<NfBundle> {
    let mut module = module_union([&act.triple.module, &form.triple.module]);
    module.name = form.triple.module.name.clone();
    let originf = union_originf(&form.triple.originf, &act.triple.originf)?;

    let mut addset: IndexSet<ModInstName> = IndexSet::new();
    addset.insert(paradefmod.clone());
    if let Some(deps) = form.triple.depf.get(paradefmod) {
        addset.extend(deps.iter().cloned());
    }
    let mut act_depf = DependencyFunc::new();
    for (ns, deps) in &act.triple.depf.entries {
        let mut deps = deps.clone();
        deps.extend(addset.iter().cloned());
        act_depf.entries.insert(ns.clone(), deps);
    }
    let depf = combine_dependencies([&form.triple.depf, &act_depf]);
    let diag_depf = combine_dependencies([&form.diag_depf, &act.diag_depf]);
    let mut bind_log = form.bind_log;
    bind_log.extend(act.bind_log);
    Ok(NfBundle { triple: Triple { module, originf, depf }, diag_depf, bind_log })
}
