//! Terms, equations, Gentzen clauses and macro-equations.

use std::fmt;

use super::names::SpecName;

/// A term.  `Name` covers both variables and constants; which one it is
/// gets decided during sort resolution against the enclosing signature.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Name(SpecName),
    App { func: SpecName, args: Vec<Term> },
}

impl Term {
    pub fn name(n: impl Into<String>) -> Term {
        Term::Name(SpecName::user(n))
    }

    pub fn app(f: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App { func: SpecName::user(f), args }
    }

    /// The head function name, if the term is an application.
    pub fn head(&self) -> Option<&SpecName> {
        match self {
            Term::App { func, .. } => Some(func),
            Term::Name(_) => None,
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Name(n) => write!(f, "{}", n),
            Term::App { func, args } => {
                write!(f, "{}(", func)?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{:?}", a)?;
                }
                write!(f, ")")
            }
        }
    }
}

/// An equation between two terms.  A missing right-hand side is the
/// shorthand for `= true`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct EqTerm {
    pub lhs: Term,
    pub rhs: Option<Term>,
}

impl EqTerm {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        EqTerm { lhs, rhs: Some(rhs) }
    }

    pub fn bare(lhs: Term) -> Self {
        EqTerm { lhs, rhs: None }
    }
}

/// A Gentzen clause `[label] e1,...,en --> f1,...,fm`: the conjunction of
/// the antecedent implies the disjunction of the succedent.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Clause {
    pub label: SpecName,
    pub antecedent: Vec<EqTerm>,
    pub succedent: Vec<EqTerm>,
}

/// A labeled positive/negative conditional equation.  Negative conditions
/// only arise from macro expansion, never from source syntax.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Equation {
    pub label: SpecName,
    pub eq: EqTerm,
    pub pos_conds: Vec<EqTerm>,
    pub neg_conds: Vec<EqTerm>,
}

/// One condition inside a `case` branch or an `if`: either a
/// match-condition `x @ pattern` or a plain equation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum MacroCond {
    Match { var: SpecName, pattern: Term },
    Cond(EqTerm),
}

/// The body of a macro-equation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum MacroBody {
    Case(Vec<(Vec<MacroCond>, MacroBody)>),
    If { conds: Vec<MacroCond>, then: Box<MacroBody>, els: Option<Box<MacroBody>> },
    Leaf(Term),
}

impl MacroBody {
    pub fn leaf_count(&self) -> usize {
        match self {
            MacroBody::Leaf(_) => 1,
            MacroBody::Case(branches) => branches.iter().map(|(_, b)| b.leaf_count()).sum(),
            MacroBody::If { then, els, .. } => {
                then.leaf_count() + els.as_ref().map_or(0, |e| e.leaf_count())
            }
        }
    }
}

/// A macro-equation: head term plus a case/if/else body that expands into
/// positive/negative conditional equations.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct MacroEquation {
    pub head: Term,
    pub body: MacroBody,
}

/// Entry of a module's equations component.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum ModEquation {
    Plain(Equation),
    Macro(MacroEquation),
}
