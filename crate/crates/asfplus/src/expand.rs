//! Macro expansion: turns `macro-equation` constructs into labeled
//! positive/negative conditional equations.
//!
//! A `case` branch `(x @ p, ...)` substitutes the pattern for the matched
//! variable in the pending left-hand side; an equation condition adds a
//! positive condition; `if (c) t else u` yields the `t`-expansions with
//! `c` positive and the `u`-expansions with `c` negative.  Each leaf term
//! closes one equation, labeled `me-<head><k>` with `k` counting leaves
//! in traversal order.

use crate::core::{
    EqTerm, Equation, MacroBody, MacroCond, MacroEquation, ModEquation, Module9, NsPrefix,
    RenderTable, SpecName, Term,
};
use crate::typecheck::SigView;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExpansionError {
    pub msg: String,
}

impl std::fmt::Display for ExpansionError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "macro expansion error: {}", self.msg)
    }
}

impl std::error::Error for ExpansionError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ExpansionError> {
    Err(ExpansionError { msg: msg.into() })
}

fn substitute(term: &Term, var: &SpecName, replacement: &Term) -> Term {
    match term {
        Term::Name(n) if n == var => replacement.clone(),
        Term::Name(_) => term.clone(),
        Term::App { func, args } => Term::App {
            func: func.clone(),
            args: args.iter().map(|a| substitute(a, var, replacement)).collect(),
        },
    }
}

fn occurs(term: &Term, var: &SpecName) -> bool {
    match term {
        Term::Name(n) => n == var,
        Term::App { args, .. } => args.iter().any(|a| occurs(a, var)),
    }
}

/// The label text of the k-th expansion of a macro head, e.g. `me-and1`
/// or `me-+1` for an infix head.
fn expansion_label(head: &SpecName, k: usize, render: &RenderTable) -> SpecName {
    let head_text = match head {
        SpecName::User(u) => u.to_string(),
        SpecName::Hidden { prefix, uname } => format!("{}-{}", render.prefix_text(prefix), uname),
    };
    SpecName::Hidden { prefix: NsPrefix::Raw("me".to_string()), uname: crate::core::UserName::new(format!("{}{}", head_text, k)) }
}

struct Expander<'a> {
    view: &'a SigView<'a>,
    head_name: SpecName,
    head_sort: SpecName,
    render: &'a RenderTable,
    out: Vec<Equation>,
}

impl<'a> Expander<'a> {
    fn walk(
        &mut self,
        body: &MacroBody,
        lhs: &Term,
        pos: &[EqTerm],
        neg: &[EqTerm],
    ) -> Result<(), ExpansionError> {
        match body {
            MacroBody::Leaf(rhs) => {
                let rhs_sort = self
                    .view
                    .sort_of(rhs)
                    .map_err(|e| ExpansionError { msg: e.msg })?;
                if rhs_sort != self.head_sort {
                    return err(format!(
                        "leaf '{:?}' has sort {} but the macro head's target sort is {}",
                        rhs, rhs_sort, self.head_sort
                    ));
                }
                let label = expansion_label(&self.head_name, self.out.len() + 1, self.render);
                self.out.push(Equation {
                    label,
                    eq: EqTerm::new(lhs.clone(), rhs.clone()),
                    pos_conds: pos.to_vec(),
                    neg_conds: neg.to_vec(),
                });
                Ok(())
            }
            MacroBody::Case(branches) => {
                for (conds, sub) in branches {
                    let (lhs2, pos2) = self.apply_conds(conds, lhs, pos)?;
                    self.walk(sub, &lhs2, &pos2, neg)?;
                }
                Ok(())
            }
            MacroBody::If { conds, then, els } => {
                let (lhs2, pos2) = self.apply_conds(conds, lhs, pos)?;
                self.walk(then, &lhs2, &pos2, neg)?;
                if let Some(els) = els {
                    // negating a condition list is only well-defined for a
                    // single plain equation
                    match conds.as_slice() {
                        [MacroCond::Cond(c)] => {
                            let mut neg2 = neg.to_vec();
                            neg2.push(c.clone());
                            self.walk(els, lhs, pos, &neg2)?;
                        }
                        _ => {
                            return err(
                                "'else' requires the 'if' to have exactly one equation condition",
                            )
                        }
                    }
                }
                Ok(())
            }
        }
    }

    /// Applies the conditions of a branch: matches rewrite the pending
    /// left-hand side, equations become positive conditions.
    fn apply_conds(
        &self,
        conds: &[MacroCond],
        lhs: &Term,
        pos: &[EqTerm],
    ) -> Result<(Term, Vec<EqTerm>), ExpansionError> {
        let mut lhs = lhs.clone();
        let mut pos = pos.to_vec();
        for c in conds {
            match c {
                MacroCond::Match { var, pattern } => {
                    if self.view.var_sort(var).is_none() {
                        return err(format!("match condition on undeclared variable '{}'", var));
                    }
                    if !occurs(&lhs, var) {
                        return err(format!(
                            "match condition on '{}', which does not occur in the pending left-hand side",
                            var
                        ));
                    }
                    lhs = substitute(&lhs, var, pattern);
                }
                MacroCond::Cond(eq) => pos.push(eq.clone()),
            }
        }
        Ok((lhs, pos))
    }
}

/// Expands one macro-equation against the enclosing module.
pub fn expand_macro(
    me: &MacroEquation,
    view: &SigView,
    render: &RenderTable,
) -> Result<Vec<Equation>, ExpansionError> {
    let head_name = match me.head.head() {
        Some(f) => f.clone(),
        None => return err("macro-equation head must be a function application"),
    };
    let head_sort = view
        .sort_of(&me.head)
        .map_err(|e| ExpansionError { msg: e.msg })?;
    let mut ex = Expander { view, head_name, head_sort, render, out: Vec::new() };
    ex.walk(&me.body, &me.head, &[], &[])?;
    Ok(ex.out)
}

/// Replaces every macro-equation of a module by its expansions.  Plain
/// equations pass through; a generated label colliding with an existing
/// label in the module is an error.
pub fn expand_module(module: &Module9, render: &RenderTable) -> Result<Module9, ExpansionError> {
    let view = SigView::new(module);
    let mut out = module.clone();
    out.equations.clear();
    let mut labels: Vec<String> = module
        .equations
        .iter()
        .filter_map(|e| match e {
            ModEquation::Plain(p) => Some(p.label.render(render)),
            ModEquation::Macro(_) => None,
        })
        .chain(module.goals.iter().map(|g| g.label.render(render)))
        .collect();
    for eq in &module.equations {
        match eq {
            ModEquation::Plain(e) => {
                out.equations.insert(ModEquation::Plain(e.clone()));
            }
            ModEquation::Macro(me) => {
                for expanded in expand_macro(me, &view, render)? {
                    let rendered = expanded.label.render(render);
                    if labels.contains(&rendered) {
                        return err(format!("generated label '{}' collides with an existing label", rendered));
                    }
                    labels.push(rendered);
                    out.equations.insert(ModEquation::Plain(expanded));
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_module_text;

    const BOOLEANS: &str = r#"
module Booleans
short  Bo
{
   add signature
   {  public:
         sorts
            BOOL
         constructors
            true, false :             -> BOOL
         non-constructors
            and, or     : BOOL # BOOL -> BOOL
      private:
         non-constructors
            not         : BOOL        -> BOOL  }
   variables
   {  non-constructors
         x,y : -> BOOL  }
   equations
   {
      macro-equation and(x,y)
      {
         case
         {  ( x @ true ) : y
            ( x @ false ): false  }
      }
      macro-equation not(x)
      {
         case
         {  ( x @ true ) : false
            ( x @ false ): true  }
      }
      [e1] or(x, y) = not(and(not(x), not(y)))
   }
} /* Booleans */
"#;

    fn booleans() -> Module9 {
        parse_module_text(BOOLEANS, false).unwrap().module
    }

    fn plain_eqs(m: &Module9) -> Vec<Equation> {
        m.equations
            .iter()
            .filter_map(|e| match e {
                ModEquation::Plain(p) => Some(p.clone()),
                _ => None,
            })
            .collect()
    }

    #[test]
    fn and_macro_expands_to_two_equations() {
        let m = booleans();
        let view = SigView::new(&m);
        let render = RenderTable::empty();
        let and_macro = m
            .equations
            .iter()
            .find_map(|e| match e {
                ModEquation::Macro(me) if me.head.head() == Some(&SpecName::user("and")) => {
                    Some(me.clone())
                }
                _ => None,
            })
            .unwrap();
        let got = expand_macro(&and_macro, &view, &render).unwrap();
        assert_eq!(got.len(), 2);
        assert_eq!(got[0].label.render(&render), "me-and1");
        assert_eq!(
            got[0].eq,
            EqTerm::new(
                Term::app("and", vec![Term::name("true"), Term::name("y")]),
                Term::name("y")
            )
        );
        assert!(got[0].pos_conds.is_empty() && got[0].neg_conds.is_empty());
        assert_eq!(got[1].label.render(&render), "me-and2");
        assert_eq!(
            got[1].eq,
            EqTerm::new(
                Term::app("and", vec![Term::name("false"), Term::name("y")]),
                Term::name("false")
            )
        );
    }

    #[test]
    fn expanding_booleans_yields_four_generated_plus_user_equation() {
        let m = booleans();
        let render = RenderTable::empty();
        let out = expand_module(&m, &render).unwrap();
        let eqs = plain_eqs(&out);
        assert_eq!(eqs.len(), 5);
        let labels: Vec<String> = eqs.iter().map(|e| e.label.render(&render)).collect();
        assert!(labels.contains(&"me-and1".to_string()));
        assert!(labels.contains(&"me-and2".to_string()));
        assert!(labels.contains(&"me-not1".to_string()));
        assert!(labels.contains(&"me-not2".to_string()));
        assert!(labels.contains(&"e1".to_string()));
        let not1 = eqs.iter().find(|e| e.label.render(&render) == "me-not1").unwrap();
        assert_eq!(
            not1.eq,
            EqTerm::new(Term::app("not", vec![Term::name("true")]), Term::name("false"))
        );
        let not2 = eqs.iter().find(|e| e.label.render(&render) == "me-not2").unwrap();
        assert_eq!(
            not2.eq,
            EqTerm::new(Term::app("not", vec![Term::name("false")]), Term::name("true"))
        );
    }

    #[test]
    fn module_without_macros_is_unchanged() {
        let text = r#"
module M
{
   add signature
   {  public: sorts S
              constructors c : -> S }
   variables { x : -> S }
   equations { [e1] x = c }
}
"#;
        let m = parse_module_text(text, false).unwrap().module;
        let out = expand_module(&m, &RenderTable::empty()).unwrap();
        assert_eq!(m, out);
    }

    #[test]
    fn if_else_macro_splits_into_positive_and_negative() {
        let text = r#"
module N
{
   add signature
   {  public:
         sorts BOOL, NAT
         constructors
            true, false : -> BOOL
            0 : -> NAT
         non-constructors
            eq : NAT # NAT -> BOOL }
   variables { x, y : -> NAT }
   equations
   {
      macro-equation eq(x,y)
      {  if ( x = y ) true
            else      false  }
   }
}
"#;
        let m = parse_module_text(text, false).unwrap().module;
        let render = RenderTable::empty();
        let out = expand_module(&m, &render).unwrap();
        let eqs = plain_eqs(&out);
        assert_eq!(eqs.len(), 2);
        let cond = EqTerm::new(Term::name("x"), Term::name("y"));
        assert_eq!(eqs[0].label.render(&render), "me-eq1");
        assert_eq!(eqs[0].eq.rhs, Some(Term::name("true")));
        assert_eq!(eqs[0].pos_conds, vec![cond.clone()]);
        assert!(eqs[0].neg_conds.is_empty());
        assert_eq!(eqs[1].label.render(&render), "me-eq2");
        assert_eq!(eqs[1].eq.rhs, Some(Term::name("false")));
        assert!(eqs[1].pos_conds.is_empty());
        assert_eq!(eqs[1].neg_conds, vec![cond]);
    }

    #[test]
    fn undeclared_match_variable_is_rejected() {
        let text = r#"
module M
{
   add signature
   {  public: sorts S
              constructors c : -> S
              non-constructors f : S -> S }
   variables { x : -> S }
   equations
   {
      macro-equation f(x)
      {
         case { ( z @ c ) : x }
      }
   }
}
"#;
        let m = parse_module_text(text, false).unwrap().module;
        let got = expand_module(&m, &RenderTable::empty());
        assert!(got.is_err());
    }

    #[test]
    fn leaf_of_wrong_sort_is_rejected() {
        let text = r#"
module M
{
   add signature
   {  public: sorts S, T
              constructors c : -> S
                           d : -> T
              non-constructors f : S -> S }
   variables { x : -> S }
   equations
   {
      macro-equation f(x)
      {
         case { ( x @ c ) : d }
      }
   }
}
"#;
        let m = parse_module_text(text, false).unwrap().module;
        let got = expand_module(&m, &RenderTable::empty());
        assert!(got.is_err());
    }
}
