//! Origin and dependency functions and the helper calculus on them.

use indexmap::{IndexMap, IndexSet};

use super::module::{Origin, SymbolType, Visibility};
use super::names::{DisambName, ModInstName, SpecName};

/// A finite map from disambiguated names to origins.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct OriginFunc {
    pub entries: IndexMap<DisambName, Origin>,
}

impl OriginFunc {
    pub fn new() -> Self {
        OriginFunc::default()
    }

    pub fn get(&self, name: &DisambName) -> Option<&Origin> {
        self.entries.get(name)
    }

    /// Inserts an entry; a second, different origin under the same name is
    /// a conflict and is returned to the caller.
    pub fn insert(&mut self, name: DisambName, origin: Origin) -> Result<(), (DisambName, Origin, Origin)> {
        match self.entries.get(&name) {
            Some(existing) if *existing != origin => {
                Err((name, existing.clone(), origin))
            }
            Some(_) => Ok(()),
            None => {
                self.entries.insert(name, origin);
                Ok(())
            }
        }
    }

    /// Set union of two origin functions.  Fails when the union would not
    /// be a function.
    pub fn union(&self, other: &OriginFunc) -> Result<OriginFunc, (DisambName, Origin, Origin)> {
        let mut out = self.clone();
        for (k, v) in &other.entries {
            out.insert(k.clone(), v.clone())?;
        }
        Ok(out)
    }

    /// Looks up the entry for a plain (empty sort vector) name.
    pub fn get_plain(&self, name: &SpecName) -> Option<&Origin> {
        self.entries.get(&DisambName::plain(name.clone()))
    }

    /// All namespaces occurring in the range.
    pub fn namespaces(&self) -> IndexSet<ModInstName> {
        self.entries.values().map(|o| o.modiname.clone()).collect()
    }
}

/// Maps each namespace designation to the set of namespaces depending
/// on it.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct DependencyFunc {
    pub entries: IndexMap<ModInstName, IndexSet<ModInstName>>,
}

impl DependencyFunc {
    pub fn new() -> Self {
        DependencyFunc::default()
    }

    pub fn singleton(ns: ModInstName) -> Self {
        let mut out = DependencyFunc::new();
        out.entries.insert(ns, IndexSet::new());
        out
    }

    pub fn get(&self, ns: &ModInstName) -> Option<&IndexSet<ModInstName>> {
        self.entries.get(ns)
    }
}

/// Joins several dependency functions pointwise: the domain is the union
/// of the domains, the value at each namespace the union of the values of
/// those functions defined there.
pub fn combine_dependencies<'a>(
    dfs: impl IntoIterator<Item = &'a DependencyFunc>,
) -> DependencyFunc {
    let mut out = DependencyFunc::new();
    for df in dfs {
        for (ns, deps) in &df.entries {
            out.entries
                .entry(ns.clone())
                .or_default()
                .extend(deps.iter().cloned());
        }
    }
    out
}

/// Computes the name an origin stands for: visible names pass through,
/// hidden names get the abbreviated namespace prefix.
pub fn get_spec_name(origin: &Origin) -> SpecName {
    match origin.visibility {
        Visibility::Parameter | Visibility::Public | Visibility::Private => {
            SpecName::User(origin.uname.clone())
        }
        Visibility::Hidden => SpecName::Hidden {
            prefix: super::names::NsPrefix::Ns(origin.modiname.clone()),
            uname: origin.uname.clone(),
        },
    }
}

/// The "is/should" renaming for disambiguated names: all entries whose
/// stored origin calls for a different name than the key currently uses,
/// restricted to the given symbol types.
pub fn get_renaming(
    originf: &OriginFunc,
    symboltypes: &[SymbolType],
) -> IndexMap<DisambName, SpecName> {
    let mut out = IndexMap::new();
    for (key, origin) in &originf.entries {
        if !symboltypes.contains(&origin.symboltype) {
            continue;
        }
        let target = get_spec_name(origin);
        if target != key.name {
            out.insert(key.clone(), target);
        }
    }
    out
}

/// Whether two disambiguated names reference the same signature object
/// with respect to their origin functions: the origins agree on user
/// name, namespace and symbol type, and the argument sorts pairwise
/// reference the same objects.
pub fn references_same_object(
    d1: &DisambName,
    of1: &OriginFunc,
    d2: &DisambName,
    of2: &OriginFunc,
) -> bool {
    let (o1, o2) = match (of1.get(d1), of2.get(d2)) {
        (Some(a), Some(b)) => (a, b),
        _ => return false,
    };
    if o1.uname != o2.uname || o1.modiname != o2.modiname || o1.symboltype != o2.symboltype {
        return false;
    }
    if d1.sortv.len() != d2.sortv.len() {
        return false;
    }
    d1.sortv.iter().zip(d2.sortv.iter()).all(|(s1, s2)| {
        references_same_object(
            &DisambName::plain(s1.clone()),
            of1,
            &DisambName::plain(s2.clone()),
            of2,
        )
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::names::{ModInstName, RenderTable};

    fn origin(u: &str, m: ModInstName, t: SymbolType, v: Visibility) -> Origin {
        Origin::new(u, m, t, v)
    }

    #[test]
    fn spec_name_of_visible_origin_passes_through() {
        let o = origin("NAT", ModInstName::plain("Naturals"), SymbolType::Sort, Visibility::Public);
        assert_eq!(get_spec_name(&o), SpecName::user("NAT"));
    }

    #[test]
    fn spec_name_of_hidden_origin_gets_prefix() {
        let abbrevs: crate::core::names::AbbrevTable =
            [("Booleans".to_string(), "Bo".to_string())].into_iter().collect();
        let o = origin("and", ModInstName::plain("Booleans"), SymbolType::Function, Visibility::Hidden);
        let rt = RenderTable::build([&ModInstName::plain("Booleans")], &abbrevs);
        assert_eq!(get_spec_name(&o).render(&rt), "Bo-and");

        let abbrevs2: crate::core::names::AbbrevTable =
            [("OrdSequences".to_string(), "OSeq".to_string())].into_iter().collect();
        let ns = ModInstName::with_instances("OrdSequences", &["ONSeq"]);
        let o2 = origin("seq1", ns.clone(), SymbolType::Variable, Visibility::Hidden);
        let rt2 = RenderTable::build([&ns], &abbrevs2);
        assert_eq!(get_spec_name(&o2).render(&rt2), "OSeq-seq1");
    }

    #[test]
    fn renaming_is_empty_for_consistent_originf() {
        let mut of = OriginFunc::new();
        of.insert(
            DisambName::plain(SpecName::user("BOOL")),
            origin("BOOL", ModInstName::plain("Booleans"), SymbolType::Sort, Visibility::Public),
        )
        .unwrap();
        assert!(get_renaming(&of, &[SymbolType::Sort, SymbolType::Function]).is_empty());
    }

    #[test]
    fn renaming_lists_hidden_mismatches_and_respects_type_filter() {
        let mut of = OriginFunc::new();
        let key = DisambName::func(
            SpecName::user("and"),
            vec![SpecName::user("BOOL"), SpecName::user("BOOL")],
        );
        of.insert(
            key.clone(),
            origin("and", ModInstName::plain("Booleans"), SymbolType::Function, Visibility::Hidden),
        )
        .unwrap();
        let ren = get_renaming(&of, &[SymbolType::Function]);
        assert_eq!(ren.len(), 1);
        assert_eq!(
            ren[&key],
            SpecName::hidden(ModInstName::plain("Booleans"), "and")
        );
        assert!(get_renaming(&of, &[SymbolType::Sort]).is_empty());
    }

    #[test]
    fn same_object_reference_follows_namespaces() {
        let mut of1 = OriginFunc::new();
        let mut of2 = OriginFunc::new();
        let bool_key = DisambName::plain(SpecName::user("BOOL"));
        of1.insert(
            bool_key.clone(),
            origin("BOOL", ModInstName::plain("Booleans"), SymbolType::Sort, Visibility::Public),
        )
        .unwrap();
        of2.insert(
            bool_key.clone(),
            origin("BOOL", ModInstName::plain("Booleans"), SymbolType::Sort, Visibility::Hidden),
        )
        .unwrap();
        // same namespace in both functions: same object, reflexivity included
        assert!(references_same_object(&bool_key, &of1, &bool_key, &of2));
        assert!(references_same_object(&bool_key, &of1, &bool_key, &of1));

        // a copied namespace references a different object
        let mut of3 = OriginFunc::new();
        let c = DisambName::plain(SpecName::user("C"));
        of3.insert(
            c.clone(),
            origin("C", ModInstName::with_instances("exABC", &["Copy"]), SymbolType::Sort, Visibility::Public),
        )
        .unwrap();
        let mut of4 = OriginFunc::new();
        of4.insert(
            c.clone(),
            origin("C", ModInstName::plain("exABC"), SymbolType::Sort, Visibility::Public),
        )
        .unwrap();
        assert!(!references_same_object(&c, &of3, &c, &of4));
    }

    #[test]
    fn combine_dependencies_unions_pointwise() {
        assert_eq!(combine_dependencies([&DependencyFunc::new()]), DependencyFunc::new());

        let mut a = DependencyFunc::new();
        a.entries.insert(
            ModInstName::plain("Booleans"),
            [ModInstName::plain("Naturals")].into_iter().collect(),
        );
        let mut b = DependencyFunc::new();
        b.entries.insert(
            ModInstName::plain("Booleans"),
            [ModInstName::plain("OrdNaturals")].into_iter().collect(),
        );
        let combined = combine_dependencies([&a, &b]);
        let deps = combined.get(&ModInstName::plain("Booleans")).unwrap();
        assert_eq!(deps.len(), 2);
        assert!(deps.contains(&ModInstName::plain("Naturals")));
        assert!(deps.contains(&ModInstName::plain("OrdNaturals")));
    }
}
