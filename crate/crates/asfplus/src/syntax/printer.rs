//! Pretty-printer producing concrete syntax, 3-space indented in the
//! style of the source corpus.  Output re-parses to a structurally equal
//! module; with `disambiguate` every function occurrence of arity > 0 is
//! rendered `f[S1,...,Sn]`.

use crate::core::{
    Clause, EqTerm, ImportDecl, MacroBody, MacroCond, ModEquation, Module9, ParamSig, RenderTable,
    Signature, SpecName, Term, UserName, Visibility,
};
use crate::typecheck::SigView;

#[derive(Clone, Copy, Default)]
pub struct PrintOpts<'a> {
    pub short: Option<&'a str>,
    /// Header parameter tuples; when absent they are derived from the
    /// module's parameter signatures.
    pub header: Option<&'a [Vec<UserName>]>,
    pub disambiguate: bool,
}

struct Printer<'a> {
    out: String,
    render: &'a RenderTable,
    disamb: bool,
    view: Option<SigView<'a>>,
}

const IND: &str = "   ";

impl<'a> Printer<'a> {
    fn indent(&mut self, depth: usize) {
        for _ in 0..depth {
            self.out.push_str(IND);
        }
    }

    fn line(&mut self, depth: usize, text: &str) {
        self.indent(depth);
        self.out.push_str(text);
        self.out.push('\n');
    }

    fn name(&self, n: &SpecName) -> String {
        n.render(self.render)
    }

    fn is_infix(&self, f: &SpecName) -> bool {
        match &self.view {
            Some(v) => {
                let m = v.module();
                m.public_sig.infix.contains(f)
                    || m.private_sig.infix.contains(f)
                    || m.param_sigs.iter().any(|p| p.sig.infix.contains(f))
            }
            None => false,
        }
    }

    fn func_occurrence(&self, f: &SpecName, args: &[Term]) -> String {
        let base = self.name(f);
        if !self.disamb || args.is_empty() {
            return base;
        }
        if let Some(view) = &self.view {
            let sorts: Option<Vec<String>> = args
                .iter()
                .map(|a| view.sort_of(a).ok().map(|s| s.render(self.render)))
                .collect();
            if let Some(sorts) = sorts {
                return format!("{}[{}]", base, sorts.join(","));
            }
        }
        base
    }

    fn term(&self, t: &Term) -> String {
        match t {
            Term::Name(n) => self.name(n),
            Term::App { func, args } if args.len() == 2 && self.is_infix(func) => {
                let lhs = self.term_infix_operand(&args[0], false);
                let rhs = self.term_infix_operand(&args[1], true);
                format!("{} {} {}", lhs, self.func_occurrence(func, args), rhs)
            }
            Term::App { func, args } => {
                let inner: Vec<String> = args.iter().map(|a| self.term(a)).collect();
                format!("{}({})", self.func_occurrence(func, args), inner.join(", "))
            }
        }
    }

    /// Operands of an infix application: the right side needs parentheses
    /// around nested infix applications to keep left associativity.
    fn term_infix_operand(&self, t: &Term, right: bool) -> String {
        match t {
            Term::App { func, args } if args.len() == 2 && self.is_infix(func) && right => {
                format!("({})", self.term(t))
            }
            _ => self.term(t),
        }
    }

    fn eq(&self, e: &EqTerm) -> String {
        match &e.rhs {
            Some(rhs) => format!("{} = {}", self.term(&e.lhs), self.term(rhs)),
            None => self.term(&e.lhs),
        }
    }

    fn eq_list(&self, eqs: &[EqTerm]) -> String {
        eqs.iter().map(|e| self.eq(e)).collect::<Vec<_>>().join(", ")
    }

    fn clause(&mut self, depth: usize, c: &Clause) {
        let ante = self.eq_list(&c.antecedent);
        let succ = self.eq_list(&c.succedent);
        let label = self.name(&c.label);
        if ante.is_empty() {
            self.line(depth, &format!("[{}]", label));
        } else {
            self.line(depth, &format!("[{}] {}", label, ante));
        }
        self.line(depth + 1, &format!("--> {}", succ));
    }

    fn signature(&mut self, depth: usize, sig: &Signature) {
        if !sig.sorts.is_empty() {
            self.line(depth, "sorts");
            let names: Vec<String> = sig.sorts.iter().map(|s| self.name(s)).collect();
            self.line(depth + 1, &names.join(", "));
        }
        if !sig.cons_decs.is_empty() {
            self.line(depth, "constructors");
            self.decl_group(depth + 1, sig, true);
        }
        if !sig.noncons_decs.is_empty() {
            self.line(depth, "non-constructors");
            self.decl_group(depth + 1, sig, false);
        }
    }

    fn decl_group(&mut self, depth: usize, sig: &Signature, cons: bool) {
        let decs = if cons { &sig.cons_decs } else { &sig.noncons_decs };
        // group consecutive declarations with identical argument and
        // target sorts, as the concrete syntax allows
        let entries: Vec<_> = decs.iter().collect();
        let mut i = 0;
        while i < entries.len() {
            let (key, target) = entries[i];
            let mut names = vec![self.decl_name(&key.name, sig)];
            let mut j = i + 1;
            while j < entries.len()
                && entries[j].0.sortv == key.sortv
                && entries[j].1 == target
                && sig.infix.contains(&entries[j].0.name) == sig.infix.contains(&key.name)
            {
                names.push(self.decl_name(&entries[j].0.name, sig));
                j += 1;
            }
            let args: Vec<String> = key.sortv.iter().map(|s| self.name(s)).collect();
            let lhs = names.join(", ");
            if args.is_empty() {
                self.line(depth, &format!("{} : -> {}", lhs, self.name(target)));
            } else {
                self.line(
                    depth,
                    &format!("{} : {} -> {}", lhs, args.join(" # "), self.name(target)),
                );
            }
            i = j;
        }
    }

    fn decl_name(&self, n: &SpecName, sig: &Signature) -> String {
        if sig.infix.contains(n) {
            format!("_ {} _", self.name(n))
        } else {
            self.name(n)
        }
    }

    fn param_sig(&mut self, depth: usize, ps: &ParamSig) {
        self.line(depth, "(");
        self.signature(depth + 1, &ps.sig);
        if !ps.conditions.is_empty() {
            self.line(depth + 1, "conditions");
            let conds: Vec<Clause> = ps.conditions.iter().cloned().collect();
            for c in &conds {
                self.clause(depth + 2, c);
            }
        }
        self.line(depth, ")");
    }

    fn import(&mut self, depth: usize, imp: &ImportDecl) {
        let mut head = format!("import {}", imp.module);
        if let Some(inst) = &imp.instance {
            head.push_str(&format!("[{}]", inst));
        }
        let mut blocks: Vec<String> = Vec::new();
        for tuple in &imp.listed_params {
            let mut names = Vec::new();
            for n in tuple {
                match imp.renaming.get(n) {
                    Some(t) if *t == SpecName::User(n.clone()) => names.push(format!("copy of {}", n)),
                    Some(t) => names.push(format!("{} renamed to {}", n, self.name(t))),
                    None => names.push(n.to_string()),
                }
            }
            blocks.push(format!("({})", names.join(", ")));
        }
        for b in &imp.bindings {
            let pairs: Vec<String> = b
                .binding
                .iter()
                .map(|(p, a)| format!("{} bound to {}", p, a))
                .collect();
            let mut block = format!("({}) of {}", pairs.join(", "), b.act_module);
            if !b.act_params.is_empty() {
                let tuples: Vec<String> = b
                    .act_params
                    .iter()
                    .map(|t| format!("({})", t.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(", ")))
                    .collect();
                block.push_str(&format!(" <{}>", tuples.join(" ")));
            }
            blocks.push(block);
        }
        if !blocks.is_empty() {
            head.push_str(&format!(" <{}>", blocks.join(" ")));
        }
        self.line(depth, &head);
        let pubs: Vec<String> = imp
            .visibility
            .iter()
            .filter(|(_, v)| **v == Visibility::Public)
            .map(|(n, _)| n.to_string())
            .collect();
        let privs: Vec<String> = imp
            .visibility
            .iter()
            .filter(|(_, v)| **v == Visibility::Private)
            .map(|(n, _)| n.to_string())
            .collect();
        if pubs.is_empty() && privs.is_empty() {
            self.line(depth, "{ }");
            return;
        }
        self.line(depth, "{");
        if !pubs.is_empty() {
            let rendered: Vec<String> = imp
                .visibility
                .iter()
                .filter(|(_, v)| **v == Visibility::Public)
                .map(|(n, _)| self.name_with_ren(imp, n))
                .collect();
            self.line(depth + 1, &format!("public: {}", rendered.join(", ")));
        }
        if !privs.is_empty() {
            let rendered: Vec<String> = imp
                .visibility
                .iter()
                .filter(|(_, v)| **v == Visibility::Private)
                .map(|(n, _)| self.name_with_ren(imp, n))
                .collect();
            self.line(depth + 1, &format!("private: {}", rendered.join(", ")));
        }
        self.line(depth, "}");
    }

    fn name_with_ren(&self, imp: &ImportDecl, n: &UserName) -> String {
        match imp.renaming.get(n) {
            Some(t) if *t == SpecName::User(n.clone()) => format!("copy of {}", n),
            Some(t) => format!("{} renamed to {}", n, t.render(self.render)),
            None => n.to_string(),
        }
    }

    fn macro_body(&mut self, depth: usize, body: &MacroBody) {
        match body {
            MacroBody::Leaf(t) => {
                let s = self.term(t);
                self.line(depth, &s);
            }
            MacroBody::Case(branches) => {
                self.line(depth, "case");
                self.line(depth, "{");
                for (conds, b) in branches {
                    let conds_str = self.macro_conds(conds);
                    match b {
                        MacroBody::Leaf(t) => {
                            let leaf = self.term(t);
                            self.line(depth + 1, &format!("( {} ) : {}", conds_str, leaf));
                        }
                        _ => {
                            self.line(depth + 1, &format!("( {} ) :", conds_str));
                            self.macro_body(depth + 2, b);
                        }
                    }
                }
                self.line(depth, "}");
            }
            MacroBody::If { conds, then, els } => {
                let conds_str = self.macro_conds(conds);
                match then.as_ref() {
                    MacroBody::Leaf(t) => {
                        let leaf = self.term(t);
                        self.line(depth, &format!("if ( {} ) {}", conds_str, leaf));
                    }
                    _ => {
                        self.line(depth, &format!("if ( {} )", conds_str));
                        self.macro_body(depth + 1, then);
                    }
                }
                if let Some(e) = els {
                    match e.as_ref() {
                        MacroBody::Leaf(t) => {
                            let leaf = self.term(t);
                            self.line(depth, &format!("else {}", leaf));
                        }
                        _ => {
                            self.line(depth, "else");
                            self.macro_body(depth + 1, e);
                        }
                    }
                }
            }
        }
    }

    fn macro_conds(&self, conds: &[MacroCond]) -> String {
        conds
            .iter()
            .map(|c| match c {
                MacroCond::Match { var, pattern } => {
                    format!("{} @ {}", self.name(var), self.term(pattern))
                }
                MacroCond::Cond(eq) => self.eq(eq),
            })
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// Renders a module in concrete syntax.
pub fn print_module(module: &Module9, render: &RenderTable, opts: PrintOpts) -> String {
    let view = SigView::new(module);
    let mut p = Printer { out: String::new(), render, disamb: opts.disambiguate, view: Some(view) };

    let mut head = format!("module {}", module.name);
    let derived_header: Vec<Vec<UserName>>;
    let header: &[Vec<UserName>] = match opts.header {
        Some(h) => h,
        None => {
            derived_header = module
                .param_tuples()
                .into_iter()
                .map(|t| t.into_iter().collect())
                .collect();
            &derived_header
        }
    };
    if !header.is_empty() {
        let tuples: Vec<String> = header
            .iter()
            .map(|t| format!("({})", t.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(", ")))
            .collect();
        head.push_str(&format!(" <{}>", tuples.join(" ")));
    }
    p.line(0, &head);
    if let Some(short) = opts.short {
        p.line(0, &format!("short  {}", short));
    }
    p.line(0, "{");

    for imp in &module.imports {
        p.import(1, imp);
        p.out.push('\n');
    }

    if !module.param_sigs.is_empty() || !module.public_sig.is_empty() || !module.private_sig.is_empty()
    {
        p.line(1, "add signature");
        p.line(1, "{");
        if !module.param_sigs.is_empty() {
            p.line(2, "parameters:");
            let sigs = module.param_sigs.clone();
            for ps in &sigs {
                p.param_sig(2, ps);
            }
        }
        if !module.public_sig.is_empty() {
            p.line(2, "public:");
            let sig = module.public_sig.clone();
            p.signature(3, &sig);
        }
        if !module.private_sig.is_empty() {
            p.line(2, "private:");
            let sig = module.private_sig.clone();
            p.signature(3, &sig);
        }
        p.line(1, "}");
        p.out.push('\n');
    }

    if !module.varsort_cons.is_empty() || !module.varsort_noncons.is_empty() {
        p.line(1, "variables");
        p.line(1, "{");
        for (cons, kw) in [(true, "constructors"), (false, "non-constructors")] {
            let map = if cons { &module.varsort_cons } else { &module.varsort_noncons };
            if map.is_empty() {
                continue;
            }
            p.line(2, kw);
            // group consecutive variables of one sort
            let entries: Vec<(SpecName, SpecName)> =
                map.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
            let mut i = 0;
            while i < entries.len() {
                let sort = entries[i].1.clone();
                let mut names = vec![p.name(&entries[i].0)];
                let mut j = i + 1;
                while j < entries.len() && entries[j].1 == sort {
                    names.push(p.name(&entries[j].0));
                    j += 1;
                }
                p.line(3, &format!("{} : -> {}", names.join(", "), p.name(&sort)));
                i = j;
            }
        }
        p.line(1, "}");
        p.out.push('\n');
    }

    if !module.equations.is_empty() {
        p.line(1, "equations");
        p.line(1, "{");
        let eqs: Vec<ModEquation> = module.equations.iter().cloned().collect();
        for eq in &eqs {
            match eq {
                ModEquation::Plain(e) => {
                    let mut line = format!("[{}] {}", p.name(&e.label), p.eq(&e.eq));
                    if !e.pos_conds.is_empty() {
                        line.push_str(&format!(" if {}", p.eq_list(&e.pos_conds)));
                    }
                    if !e.neg_conds.is_empty() {
                        line.push_str(&format!(" unless {}", p.eq_list(&e.neg_conds)));
                    }
                    p.line(2, &line);
                }
                ModEquation::Macro(me) => {
                    let head = match &me.head {
                        Term::App { func, args } if args.len() == 2 && p.is_infix(func) => {
                            format!("({})", p.term(&me.head))
                        }
                        _ => p.term(&me.head),
                    };
                    p.line(2, &format!("macro-equation {}", head));
                    p.line(2, "{");
                    p.macro_body(3, &me.body);
                    p.line(2, "}");
                }
            }
            p.out.push('\n');
        }
        p.line(1, "}");
        p.out.push('\n');
    }

    if !module.goals.is_empty() {
        p.line(1, "goals");
        p.line(1, "{");
        let goals: Vec<Clause> = module.goals.iter().cloned().collect();
        for g in &goals {
            p.clause(2, g);
        }
        p.line(1, "}");
    }

    p.line(0, &format!("}} /* {} */", module.name));
    p.out
}
