//! Name rewriting over modules and origin functions.
//!
//! Renamings come in three shapes: name-level maps over sorts, variables
//! and labels (first stage of MakeConsistent, where by construction no
//! function position can be hit); disambiguated function renamings, whose
//! application to terms requires resolving every occurrence against the
//! signature; and blanket name substitutions used by explicit renaming,
//! instanciation and parameter binding.

use indexmap::{IndexMap, IndexSet};

use crate::core::{
    Clause, DisambName, EqTerm, MacroBody, MacroCond, MacroEquation, ModEquation, Module9,
    OriginFunc, ParamSig, Signature, SpecName, Term,
};
use crate::error::{NormError, NormResult};
use crate::typecheck::{rewrite_functions, SigView};

fn map_term(t: &Term, f: &impl Fn(&SpecName) -> SpecName, funcs_too: bool) -> Term {
    match t {
        Term::Name(n) => Term::Name(f(n)),
        Term::App { func, args } => Term::App {
            func: if funcs_too { f(func) } else { func.clone() },
            args: args.iter().map(|a| map_term(a, f, funcs_too)).collect(),
        },
    }
}

fn map_eq(e: &EqTerm, f: &impl Fn(&SpecName) -> SpecName, funcs_too: bool) -> EqTerm {
    EqTerm {
        lhs: map_term(&e.lhs, f, funcs_too),
        rhs: e.rhs.as_ref().map(|r| map_term(r, f, funcs_too)),
    }
}

fn map_clause(c: &Clause, f: &impl Fn(&SpecName) -> SpecName, funcs_too: bool) -> Clause {
    Clause {
        label: f(&c.label),
        antecedent: c.antecedent.iter().map(|e| map_eq(e, f, funcs_too)).collect(),
        succedent: c.succedent.iter().map(|e| map_eq(e, f, funcs_too)).collect(),
    }
}

fn map_macro_body(b: &MacroBody, f: &impl Fn(&SpecName) -> SpecName, funcs_too: bool) -> MacroBody {
    match b {
        MacroBody::Leaf(t) => MacroBody::Leaf(map_term(t, f, funcs_too)),
        MacroBody::Case(branches) => MacroBody::Case(
            branches
                .iter()
                .map(|(conds, body)| {
                    (
                        conds.iter().map(|c| map_macro_cond(c, f, funcs_too)).collect(),
                        map_macro_body(body, f, funcs_too),
                    )
                })
                .collect(),
        ),
        MacroBody::If { conds, then, els } => MacroBody::If {
            conds: conds.iter().map(|c| map_macro_cond(c, f, funcs_too)).collect(),
            then: Box::new(map_macro_body(then, f, funcs_too)),
            els: els.as_ref().map(|e| Box::new(map_macro_body(e, f, funcs_too))),
        },
    }
}

fn map_macro_cond(c: &MacroCond, f: &impl Fn(&SpecName) -> SpecName, funcs_too: bool) -> MacroCond {
    match c {
        MacroCond::Match { var, pattern } => {
            MacroCond::Match { var: f(var), pattern: map_term(pattern, f, funcs_too) }
        }
        MacroCond::Cond(eq) => MacroCond::Cond(map_eq(eq, f, funcs_too)),
    }
}

fn map_signature(
    sig: &Signature,
    f: &impl Fn(&SpecName) -> SpecName,
    key_names_too: bool,
) -> Signature {
    let map_decls = |decs: &IndexMap<DisambName, SpecName>| -> IndexMap<DisambName, SpecName> {
        decs.iter()
            .map(|(k, v)| {
                let name = if key_names_too { f(&k.name) } else { k.name.clone() };
                let sortv = k.sortv.iter().map(f).collect();
                (DisambName { name, sortv }, f(v))
            })
            .collect()
    };
    Signature {
        sorts: sig.sorts.iter().map(f).collect(),
        cons_decs: map_decls(&sig.cons_decs),
        noncons_decs: map_decls(&sig.noncons_decs),
        infix: if key_names_too {
            sig.infix.iter().map(f).collect()
        } else {
            sig.infix.clone()
        },
    }
}

fn map_module(m: &Module9, f: &impl Fn(&SpecName) -> SpecName, all_positions: bool) -> Module9 {
    Module9 {
        name: m.name.clone(),
        imports: m.imports.clone(),
        param_sigs: m
            .param_sigs
            .iter()
            .map(|ps| ParamSig {
                sig: map_signature(&ps.sig, f, all_positions),
                conditions: ps.conditions.iter().map(|c| map_clause(c, f, all_positions)).collect(),
            })
            .collect(),
        public_sig: map_signature(&m.public_sig, f, all_positions),
        private_sig: map_signature(&m.private_sig, f, all_positions),
        varsort_cons: m.varsort_cons.iter().map(|(k, v)| (f(k), f(v))).collect(),
        varsort_noncons: m.varsort_noncons.iter().map(|(k, v)| (f(k), f(v))).collect(),
        equations: m
            .equations
            .iter()
            .map(|eq| match eq {
                ModEquation::Plain(e) => ModEquation::Plain(crate::core::Equation {
                    label: f(&e.label),
                    eq: map_eq(&e.eq, f, all_positions),
                    pos_conds: e.pos_conds.iter().map(|c| map_eq(c, f, all_positions)).collect(),
                    neg_conds: e.neg_conds.iter().map(|c| map_eq(c, f, all_positions)).collect(),
                }),
                ModEquation::Macro(me) => ModEquation::Macro(MacroEquation {
                    head: map_term(&me.head, f, all_positions),
                    body: map_macro_body(&me.body, f, all_positions),
                }),
            })
            .collect(),
        goals: m.goals.iter().map(|c| map_clause(c, f, all_positions)).collect(),
    }
}

/// Rewrites every name occurrence, including declaration key names and
/// function occurrences in terms.  Used by explicit renaming, parameter
/// substitution and namespace instanciation, whose domains never collide
/// with variable or label names.
pub fn map_all_names(m: &Module9, f: &impl Fn(&SpecName) -> SpecName) -> Module9 {
    map_module(m, f, true)
}

/// Rewrites sort, variable and label positions only: sort sets, argument
/// and target sorts of declarations, variable-sort maps, labels, and term
/// leaves.  Function keys and applied occurrences stay untouched.
pub fn map_sort_var_label_names(m: &Module9, f: &impl Fn(&SpecName) -> SpecName) -> Module9 {
    map_module(m, f, false)
}

/// Rewrites function declarations and applied occurrences according to a
/// disambiguated renaming; term occurrences are resolved bottom-up.
pub fn map_function_names(
    m: &Module9,
    renaming: &IndexMap<DisambName, SpecName>,
) -> NormResult<Module9> {
    let view = SigView::new(m);
    let sort_err = |e: crate::typecheck::SortError, what: &str| {
        NormError::spec(format!("while renaming functions in {}: {}", what, e.msg))
    };
    let rewrite_eq = |e: &EqTerm, what: &str| -> NormResult<EqTerm> {
        Ok(EqTerm {
            lhs: rewrite_functions(&view, renaming, &e.lhs).map_err(|er| sort_err(er, what))?.0,
            rhs: match &e.rhs {
                Some(r) => Some(rewrite_functions(&view, renaming, r).map_err(|er| sort_err(er, what))?.0),
                None => None,
            },
        })
    };
    fn rewrite_body(
        view: &SigView,
        renaming: &IndexMap<DisambName, SpecName>,
        b: &MacroBody,
        rewrite_eq: &dyn Fn(&EqTerm, &str) -> NormResult<EqTerm>,
    ) -> NormResult<MacroBody> {
        let term_err = |e: crate::typecheck::SortError| {
            NormError::spec(format!("while renaming functions in a macro body: {}", e.msg))
        };
        Ok(match b {
            MacroBody::Leaf(t) => {
                MacroBody::Leaf(rewrite_functions(view, renaming, t).map_err(term_err)?.0)
            }
            MacroBody::Case(branches) => {
                let mut out = Vec::new();
                for (conds, body) in branches {
                    let mut cs = Vec::new();
                    for c in conds {
                        cs.push(match c {
                            MacroCond::Match { var, pattern } => MacroCond::Match {
                                var: var.clone(),
                                pattern: rewrite_functions(view, renaming, pattern)
                                    .map_err(term_err)?
                                    .0,
                            },
                            MacroCond::Cond(eq) => MacroCond::Cond(rewrite_eq(eq, "a macro condition")?),
                        });
                    }
                    out.push((cs, rewrite_body(view, renaming, body, rewrite_eq)?));
                }
                MacroBody::Case(out)
            }
            MacroBody::If { conds, then, els } => {
                let mut cs = Vec::new();
                for c in conds {
                    cs.push(match c {
                        MacroCond::Match { var, pattern } => MacroCond::Match {
                            var: var.clone(),
                            pattern: rewrite_functions(view, renaming, pattern).map_err(term_err)?.0,
                        },
                        MacroCond::Cond(eq) => MacroCond::Cond(rewrite_eq(eq, "a macro condition")?),
                    });
                }
                MacroBody::If {
                    conds: cs,
                    then: Box::new(rewrite_body(view, renaming, then, rewrite_eq)?),
                    els: match els {
                        Some(e) => Some(Box::new(rewrite_body(view, renaming, e, rewrite_eq)?)),
                        None => None,
                    },
                }
            }
        })
    }

    let rewrite_clause = |c: &Clause, what: &str| -> NormResult<Clause> {
        let mut ante = Vec::new();
        for e in &c.antecedent {
            ante.push(rewrite_eq(e, what)?);
        }
        let mut succ = Vec::new();
        for e in &c.succedent {
            succ.push(rewrite_eq(e, what)?);
        }
        Ok(Clause { label: c.label.clone(), antecedent: ante, succedent: succ })
    };

    let rename_sig = |sig: &Signature| -> Signature {
        let map_decls = |decs: &IndexMap<DisambName, SpecName>| -> IndexMap<DisambName, SpecName> {
            decs.iter()
                .map(|(k, v)| {
                    let name = renaming.get(k).cloned().unwrap_or_else(|| k.name.clone());
                    (DisambName { name, sortv: k.sortv.clone() }, v.clone())
                })
                .collect()
        };
        let mut infix: IndexSet<SpecName> = IndexSet::new();
        for (k, _) in sig.cons_decs.iter().chain(sig.noncons_decs.iter()) {
            if sig.infix.contains(&k.name) {
                infix.insert(renaming.get(k).cloned().unwrap_or_else(|| k.name.clone()));
            }
        }
        Signature {
            sorts: sig.sorts.clone(),
            cons_decs: map_decls(&sig.cons_decs),
            noncons_decs: map_decls(&sig.noncons_decs),
            infix,
        }
    };

    let mut equations = IndexSet::new();
    for eq in &m.equations {
        equations.insert(match eq {
            ModEquation::Plain(e) => {
                let mut pos = Vec::new();
                for c in &e.pos_conds {
                    pos.push(rewrite_eq(c, "an equation condition")?);
                }
                let mut neg = Vec::new();
                for c in &e.neg_conds {
                    neg.push(rewrite_eq(c, "an equation condition")?);
                }
                ModEquation::Plain(crate::core::Equation {
                    label: e.label.clone(),
                    eq: rewrite_eq(&e.eq, "an equation")?,
                    pos_conds: pos,
                    neg_conds: neg,
                })
            }
            ModEquation::Macro(me) => ModEquation::Macro(MacroEquation {
                head: rewrite_functions(&view, renaming, &me.head)
                    .map_err(|e| sort_err(e, "a macro head"))?
                    .0,
                body: rewrite_body(&view, renaming, &me.body, &rewrite_eq)?,
            }),
        });
    }
    let mut goals = IndexSet::new();
    for g in &m.goals {
        goals.insert(rewrite_clause(g, "a goal")?);
    }
    let mut param_sigs = Vec::new();
    for ps in &m.param_sigs {
        let mut conditions = IndexSet::new();
        for c in &ps.conditions {
            conditions.insert(rewrite_clause(c, "a parameter condition")?);
        }
        param_sigs.push(ParamSig { sig: rename_sig(&ps.sig), conditions });
    }

    Ok(Module9 {
        name: m.name.clone(),
        imports: m.imports.clone(),
        param_sigs,
        public_sig: rename_sig(&m.public_sig),
        private_sig: rename_sig(&m.private_sig),
        varsort_cons: m.varsort_cons.clone(),
        varsort_noncons: m.varsort_noncons.clone(),
        equations,
        goals,
    })
}

/// Rewrites the domain of an origin function with a name-level map
/// (applied to key names and sort-vector components).
pub fn map_originf_keys(
    of: &OriginFunc,
    f: &impl Fn(&SpecName) -> SpecName,
) -> NormResult<OriginFunc> {
    let mut out = OriginFunc::new();
    for (k, o) in &of.entries {
        let key = DisambName { name: f(&k.name), sortv: k.sortv.iter().map(f).collect() };
        out.insert(key, o.clone()).map_err(|(k, a, b)| {
            NormError::spec(format!(
                "renaming collapses two distinct objects onto '{}' ({} vs {})",
                k, a.modiname, b.modiname
            ))
        })?;
    }
    Ok(out)
}

/// Rewrites the domain of an origin function with a disambiguated
/// function renaming (full-key match).
pub fn map_originf_function_keys(
    of: &OriginFunc,
    renaming: &IndexMap<DisambName, SpecName>,
) -> NormResult<OriginFunc> {
    let mut out = OriginFunc::new();
    for (k, o) in &of.entries {
        let key = match renaming.get(k) {
            Some(new_name) => DisambName { name: new_name.clone(), sortv: k.sortv.clone() },
            None => k.clone(),
        };
        out.insert(key, o.clone()).map_err(|(k, a, b)| {
            NormError::spec(format!(
                "renaming collapses two distinct objects onto '{}' ({} vs {})",
                k, a.modiname, b.modiname
            ))
        })?;
    }
    Ok(out)
}

/// Collects every namespace mentioned in hidden-name prefixes or origins.
pub fn visit_names(m: &Module9, f: &mut impl FnMut(&SpecName)) {
    fn term(t: &Term, f: &mut impl FnMut(&SpecName)) {
        match t {
            Term::Name(n) => f(n),
            Term::App { func, args } => {
                f(func);
                for a in args {
                    term(a, f);
                }
            }
        }
    }
    fn eq(e: &EqTerm, f: &mut impl FnMut(&SpecName)) {
        term(&e.lhs, f);
        if let Some(r) = &e.rhs {
            term(r, f);
        }
    }
    fn clause(c: &Clause, f: &mut impl FnMut(&SpecName)) {
        f(&c.label);
        for e in c.antecedent.iter().chain(c.succedent.iter()) {
            eq(e, f);
        }
    }
    fn body(b: &MacroBody, f: &mut impl FnMut(&SpecName)) {
        match b {
            MacroBody::Leaf(t) => term(t, f),
            MacroBody::Case(branches) => {
                for (conds, sub) in branches {
                    for c in conds {
                        cond(c, f);
                    }
                    body(sub, f);
                }
            }
            MacroBody::If { conds, then, els } => {
                for c in conds {
                    cond(c, f);
                }
                body(then, f);
                if let Some(e) = els {
                    body(e, f);
                }
            }
        }
    }
    fn cond(c: &MacroCond, f: &mut impl FnMut(&SpecName)) {
        match c {
            MacroCond::Match { var, pattern } => {
                f(var);
                term(pattern, f);
            }
            MacroCond::Cond(e) => eq(e, f),
        }
    }
    fn sig(s: &Signature, f: &mut impl FnMut(&SpecName)) {
        for n in &s.sorts {
            f(n);
        }
        for (k, v) in s.cons_decs.iter().chain(s.noncons_decs.iter()) {
            f(&k.name);
            for c in &k.sortv {
                f(c);
            }
            f(v);
        }
    }
    sig(&m.public_sig, f);
    sig(&m.private_sig, f);
    for ps in &m.param_sigs {
        sig(&ps.sig, f);
        for c in &ps.conditions {
            clause(c, f);
        }
    }
    for (k, v) in m.varsort_cons.iter().chain(m.varsort_noncons.iter()) {
        f(k);
        f(v);
    }
    for e in &m.equations {
        match e {
            ModEquation::Plain(p) => {
                f(&p.label);
                eq(&p.eq, f);
                for c in p.pos_conds.iter().chain(p.neg_conds.iter()) {
                    eq(c, f);
                }
            }
            ModEquation::Macro(me) => {
                term(&me.head, f);
                body(&me.body, f);
            }
        }
    }
    for g in &m.goals {
        clause(g, f);
    }
}
