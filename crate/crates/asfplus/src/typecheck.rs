//! Bottom-up sort resolution against a module signature.
//!
//! Overloaded function names are admitted as long as their argument sorts
//! differ, so every occurrence in a well-sorted term resolves to exactly
//! one declaration.  The same machinery drives disambiguated function
//! renaming and `f[S1,...,Sn]` printing.

use indexmap::IndexMap;

use crate::core::{
    Clause, DisambName, EqTerm, MacroBody, MacroCond, MacroEquation, ModEquation, Module9,
    SpecName, Term,
};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SortError {
    pub msg: String,
}

impl std::fmt::Display for SortError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.msg)
    }
}

impl std::error::Error for SortError {}

fn err<T>(msg: impl Into<String>) -> Result<T, SortError> {
    Err(SortError { msg: msg.into() })
}

/// A resolution view over a module: all declarations (parameter, public
/// and private) and the merged variable-sort map.
pub struct SigView<'a> {
    decls: IndexMap<DisambName, (SpecName, bool)>,
    vars: IndexMap<&'a SpecName, (&'a SpecName, bool)>,
    module: &'a Module9,
}

impl<'a> SigView<'a> {
    pub fn new(module: &'a Module9) -> Self {
        let mut decls = IndexMap::new();
        let mut sigs: Vec<&crate::core::Signature> = vec![&module.public_sig, &module.private_sig];
        for ps in &module.param_sigs {
            sigs.push(&ps.sig);
        }
        for sig in sigs {
            for (k, v) in &sig.cons_decs {
                decls.entry(k.clone()).or_insert((v.clone(), true));
            }
            for (k, v) in &sig.noncons_decs {
                decls.entry(k.clone()).or_insert((v.clone(), false));
            }
        }
        let mut vars = IndexMap::new();
        for (k, v) in &module.varsort_cons {
            vars.insert(k, (v, true));
        }
        for (k, v) in &module.varsort_noncons {
            vars.insert(k, (v, false));
        }
        SigView { decls, vars, module }
    }

    pub fn module(&self) -> &Module9 {
        self.module
    }

    pub fn var_sort(&self, name: &SpecName) -> Option<&SpecName> {
        self.vars.get(name).map(|(s, _)| *s)
    }

    pub fn is_constructor_var(&self, name: &SpecName) -> Option<bool> {
        self.vars.get(name).map(|(_, c)| *c)
    }

    pub fn lookup(&self, key: &DisambName) -> Option<&SpecName> {
        self.decls.get(key).map(|(t, _)| t)
    }

    /// Resolves a term to its sort.
    pub fn sort_of(&self, term: &Term) -> Result<SpecName, SortError> {
        Ok(self.resolve(term)?.0)
    }

    /// Resolves a term to (sort, resolved disambiguated head key if the
    /// term is an application or constant).
    pub fn resolve(&self, term: &Term) -> Result<(SpecName, Option<DisambName>), SortError> {
        match term {
            Term::Name(n) => {
                if let Some(sort) = self.var_sort(n) {
                    return Ok((sort.clone(), None));
                }
                let key = DisambName::plain(n.clone());
                match self.lookup(&key) {
                    Some(target) => Ok((target.clone(), Some(key))),
                    None => err(format!("'{}' is neither a declared variable nor a constant", n)),
                }
            }
            Term::App { func, args } => {
                let mut sortv = Vec::with_capacity(args.len());
                for a in args {
                    sortv.push(self.sort_of(a)?);
                }
                let key = DisambName::func(func.clone(), sortv);
                match self.lookup(&key) {
                    Some(target) => Ok((target.clone(), Some(key))),
                    None => err(format!("no declaration matches '{}'", key)),
                }
            }
        }
    }

    /// Checks an equation; a bare term abbreviates `= true`, which is only
    /// correct when `true` is visible and sort-equal to the term.
    pub fn check_eq(&self, eq: &EqTerm) -> Result<(), SortError> {
        let lhs_sort = self.sort_of(&eq.lhs)?;
        match &eq.rhs {
            Some(rhs) => {
                let rhs_sort = self.sort_of(rhs)?;
                if lhs_sort != rhs_sort {
                    return err(format!(
                        "equation sides have different sorts: {} vs {}",
                        lhs_sort, rhs_sort
                    ));
                }
            }
            None => {
                let tru = DisambName::plain(SpecName::user("true"));
                match self.lookup(&tru) {
                    Some(t) if *t == lhs_sort => {}
                    Some(t) => {
                        return err(format!(
                            "bare term abbreviates '= true' but has sort {} while true : -> {}",
                            lhs_sort, t
                        ))
                    }
                    None => return err("bare term abbreviates '= true' but 'true' is not visible"),
                }
            }
        }
        Ok(())
    }

    pub fn check_clause(&self, clause: &Clause) -> Result<(), SortError> {
        for eq in clause.antecedent.iter().chain(clause.succedent.iter()) {
            self.check_eq(eq)?;
        }
        Ok(())
    }

    fn check_macro_body(&self, head_sort: &SpecName, body: &MacroBody) -> Result<(), SortError> {
        match body {
            MacroBody::Leaf(t) => {
                let s = self.sort_of(t)?;
                if s != *head_sort {
                    return err(format!(
                        "macro leaf '{:?}' has sort {} but the head's target sort is {}",
                        t, s, head_sort
                    ));
                }
                Ok(())
            }
            MacroBody::Case(branches) => {
                for (conds, b) in branches {
                    self.check_macro_conds(conds)?;
                    self.check_macro_body(head_sort, b)?;
                }
                Ok(())
            }
            MacroBody::If { conds, then, els } => {
                self.check_macro_conds(conds)?;
                self.check_macro_body(head_sort, then)?;
                if let Some(e) = els {
                    self.check_macro_body(head_sort, e)?;
                }
                Ok(())
            }
        }
    }

    fn check_macro_conds(&self, conds: &[MacroCond]) -> Result<(), SortError> {
        for c in conds {
            match c {
                MacroCond::Match { var, pattern } => {
                    let var_sort = match self.var_sort(var) {
                        Some(s) => s.clone(),
                        None => return err(format!("match condition on undeclared variable '{}'", var)),
                    };
                    let pat_sort = self.sort_of(pattern)?;
                    if pat_sort != var_sort {
                        return err(format!(
                            "pattern '{:?}' has sort {} but variable '{}' has sort {}",
                            pattern, pat_sort, var, var_sort
                        ));
                    }
                }
                MacroCond::Cond(eq) => self.check_eq(eq)?,
            }
        }
        Ok(())
    }

    pub fn check_macro(&self, me: &MacroEquation) -> Result<(), SortError> {
        let head_sort = self.sort_of(&me.head)?;
        if me.head.head().is_none() {
            return err("macro-equation head must be a function application");
        }
        self.check_macro_body(&head_sort, &me.body)
    }

    /// Full well-sortedness check of an import-free module: every sort
    /// referenced by a declaration exists and every term resolves.
    pub fn check_module(&self) -> Result<(), SortError> {
        let m = self.module;
        let mut all_sorts = m.public_sig.sorts.clone();
        all_sorts.extend(m.private_sig.sorts.iter().cloned());
        for ps in &m.param_sigs {
            all_sorts.extend(ps.sig.sorts.iter().cloned());
        }
        let check_sort = |s: &SpecName, what: &str| -> Result<(), SortError> {
            if all_sorts.contains(s) {
                Ok(())
            } else {
                err(format!("{} references unknown sort '{}'", what, s))
            }
        };
        for (key, target) in self.decls.iter() {
            for s in &key.sortv {
                check_sort(s, &format!("declaration of '{}'", key.name))?;
            }
            check_sort(&target.0, &format!("declaration of '{}'", key.name))?;
        }
        for (v, (s, _)) in self.vars.iter() {
            check_sort(s, &format!("variable '{}'", v))?;
        }
        for eq in &m.equations {
            match eq {
                ModEquation::Plain(e) => {
                    self.check_eq(&e.eq)?;
                    for c in e.pos_conds.iter().chain(e.neg_conds.iter()) {
                        self.check_eq(c)?;
                    }
                }
                ModEquation::Macro(me) => self.check_macro(me)?,
            }
        }
        for g in &m.goals {
            self.check_clause(g)?;
        }
        for ps in &m.param_sigs {
            for c in &ps.conditions {
                self.check_clause(c)?;
            }
        }
        Ok(())
    }
}

/// Rewrites every resolved function occurrence in a term according to a
/// disambiguated renaming, bottom-up.  Returns the rewritten term and its
/// sort (computed against the pre-rewrite signature).
pub fn rewrite_functions(
    view: &SigView,
    renaming: &IndexMap<DisambName, SpecName>,
    term: &Term,
) -> Result<(Term, SpecName), SortError> {
    match term {
        Term::Name(n) => {
            if let Some(sort) = view.var_sort(n) {
                return Ok((term.clone(), sort.clone()));
            }
            let key = DisambName::plain(n.clone());
            match view.lookup(&key) {
                Some(target) => {
                    let new_name = renaming.get(&key).cloned().unwrap_or_else(|| n.clone());
                    Ok((Term::Name(new_name), target.clone()))
                }
                None => err(format!("'{}' is neither a declared variable nor a constant", n)),
            }
        }
        Term::App { func, args } => {
            let mut new_args = Vec::with_capacity(args.len());
            let mut sortv = Vec::with_capacity(args.len());
            for a in args {
                let (na, s) = rewrite_functions(view, renaming, a)?;
                new_args.push(na);
                sortv.push(s);
            }
            let key = DisambName::func(func.clone(), sortv);
            match view.lookup(&key) {
                Some(target) => {
                    let new_func = renaming.get(&key).cloned().unwrap_or_else(|| func.clone());
                    Ok((Term::App { func: new_func, args: new_args }, target.clone()))
                }
                None => err(format!("no declaration matches '{}'", key)),
            }
        }
    }
}
