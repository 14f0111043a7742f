//! The prove-db: a persistent ledger of proven goals consulted when
//! semantic parameter conditions are checked.  It never proves anything
//! itself.
//!
//! The on-disk format is line-oriented and diff-friendly:
//!
//! ```text
//! module<TAB>label<TAB>fingerprint-hex<TAB>proof-ref<TAB>spec-digest<TAB>iso-timestamp
//! ```
//!
//! `#` starts a comment line.  A record stays valid only while its clause
//! fingerprint matches the current goal with the same module and label,
//! so unrelated edits never invalidate proofs while any change to the
//! goal itself does.

use std::fmt;
use std::path::Path;

use indexmap::IndexMap;
use sha2::{Digest, Sha256};

use crate::core::{Clause, EqTerm, SpecName, Term};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProofRecord {
    pub module: String,
    pub label: String,
    pub fingerprint: String,
    pub proof_ref: String,
    pub spec_digest: String,
    pub timestamp: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ProveDb {
    pub records: IndexMap<(String, String), ProofRecord>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FormatError {
    pub line: usize,
    pub msg: String,
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "prove-db line {}: {}", self.line, self.msg)
    }
}

impl std::error::Error for FormatError {}

impl ProveDb {
    pub fn new() -> Self {
        ProveDb::default()
    }

    pub fn parse(text: &str) -> Result<ProveDb, FormatError> {
        let mut db = ProveDb::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 6 {
                return Err(FormatError {
                    line: line_no,
                    msg: format!("expected 6 tab-separated fields, found {}", fields.len()),
                });
            }
            let rec = ProofRecord {
                module: fields[0].to_string(),
                label: fields[1].to_string(),
                fingerprint: fields[2].to_string(),
                proof_ref: fields[3].to_string(),
                spec_digest: fields[4].to_string(),
                timestamp: fields[5].to_string(),
            };
            if rec.module.is_empty() || rec.label.is_empty() {
                return Err(FormatError { line: line_no, msg: "empty module or label".into() });
            }
            // later records replace earlier ones, keeping the file
            // appendable
            db.records.insert((rec.module.clone(), rec.label.clone()), rec);
        }
        Ok(db)
    }

    /// Loads a ledger; a missing file is an empty ledger.
    pub fn load(path: &Path) -> Result<ProveDb, FormatError> {
        match std::fs::read_to_string(path) {
            Ok(text) => ProveDb::parse(&text),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(ProveDb::new()),
            Err(e) => Err(FormatError { line: 0, msg: format!("cannot read: {}", e) }),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("# asfplus prove-db: module, label, fingerprint, proof-ref, spec-digest, timestamp\n");
        for rec in self.records.values() {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}\t{}\n",
                rec.module, rec.label, rec.fingerprint, rec.proof_ref, rec.spec_digest, rec.timestamp
            ));
        }
        out
    }

    pub fn store(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_text())
    }

    /// Whether a valid, non-stale proof is recorded for the goal.
    pub fn is_proven(&self, module: &str, label: &str, fingerprint: &str) -> bool {
        self.records
            .get(&(module.to_string(), label.to_string()))
            .map(|r| r.fingerprint == fingerprint)
            .unwrap_or(false)
    }

    pub fn get(&self, module: &str, label: &str) -> Option<&ProofRecord> {
        self.records.get(&(module.to_string(), label.to_string()))
    }

    /// Upserts a record.
    pub fn record(&mut self, rec: ProofRecord) {
        self.records.insert((rec.module.clone(), rec.label.clone()), rec);
    }
}

/// Canonical fingerprint of a clause: variables are numbered by first
/// occurrence and the label is dropped, so renaming variables or the
/// label keeps the fingerprint while any term or structure change breaks
/// it.  `vars` is the domain of the enclosing module's variable-sort
/// maps.
pub fn clause_fingerprint(clause: &Clause, vars: &IndexMap<SpecName, SpecName>) -> String {
    let mut numbering: IndexMap<String, usize> = IndexMap::new();
    let mut out = String::new();

    fn term(
        t: &Term,
        vars: &IndexMap<SpecName, SpecName>,
        numbering: &mut IndexMap<String, usize>,
        out: &mut String,
    ) {
        match t {
            Term::Name(n) if vars.contains_key(n) => {
                let next = numbering.len();
                let idx = *numbering.entry(n.to_string()).or_insert(next);
                out.push_str(&format!("v{}", idx));
            }
            Term::Name(n) => {
                out.push_str(&format!("n:{};", n));
            }
            Term::App { func, args } => {
                out.push_str(&format!("a:{}(", func));
                for a in args {
                    term(a, vars, numbering, out);
                    out.push(',');
                }
                out.push(')');
            }
        }
    }

    fn eq(
        e: &EqTerm,
        vars: &IndexMap<SpecName, SpecName>,
        numbering: &mut IndexMap<String, usize>,
        out: &mut String,
    ) {
        match &e.rhs {
            Some(r) => {
                out.push_str("(eq ");
                term(&e.lhs, vars, numbering, out);
                out.push(' ');
                term(r, vars, numbering, out);
                out.push(')');
            }
            None => {
                out.push_str("(bare ");
                term(&e.lhs, vars, numbering, out);
                out.push(')');
            }
        }
    }

    out.push_str("(ante");
    for e in &clause.antecedent {
        out.push(' ');
        eq(e, vars, &mut numbering, &mut out);
    }
    out.push_str(")(succ");
    for e in &clause.succedent {
        out.push(' ');
        eq(e, vars, &mut numbering, &mut out);
    }
    out.push(')');

    let digest = Sha256::digest(out.as_bytes());
    hex::encode(digest)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars(names: &[&str]) -> IndexMap<SpecName, SpecName> {
        names
            .iter()
            .map(|n| (SpecName::user(*n), SpecName::user("NAT")))
            .collect()
    }

    fn clause(label: &str, ante: Vec<EqTerm>, succ: Vec<EqTerm>) -> Clause {
        Clause { label: SpecName::user(label), antecedent: ante, succedent: succ }
    }

    #[test]
    fn fingerprint_ignores_label_and_variable_names() {
        let c1 = clause(
            "irref",
            vec![EqTerm::bare(Term::app("greater", vec![Term::name("x"), Term::name("x")]))],
            vec![],
        );
        let c2 = clause(
            "other",
            vec![EqTerm::bare(Term::app("greater", vec![Term::name("z"), Term::name("z")]))],
            vec![],
        );
        let f1 = clause_fingerprint(&c1, &vars(&["x"]));
        let f2 = clause_fingerprint(&c2, &vars(&["z"]));
        assert_eq!(f1, f2);
    }

    #[test]
    fn fingerprint_is_sensitive_to_structure() {
        let c1 = clause(
            "g",
            vec![EqTerm::bare(Term::app("greater", vec![Term::name("x"), Term::name("y")]))],
            vec![],
        );
        let c2 = clause(
            "g",
            vec![EqTerm::bare(Term::app("greater", vec![Term::name("x"), Term::name("x")]))],
            vec![],
        );
        let v = vars(&["x", "y"]);
        assert_ne!(clause_fingerprint(&c1, &v), clause_fingerprint(&c2, &v));

        // a bare term and an explicit `= true` differ structurally
        let b1 = clause("g", vec![EqTerm::bare(Term::name("p"))], vec![]);
        let b2 = clause(
            "g",
            vec![EqTerm::new(Term::name("p"), Term::name("true"))],
            vec![],
        );
        assert_ne!(clause_fingerprint(&b1, &v), clause_fingerprint(&b2, &v));
    }

    #[test]
    fn roundtrip_and_replacement() {
        let mut db = ProveDb::new();
        for (m, l) in [("A", "g1"), ("A", "g2"), ("B", "g1")] {
            db.record(ProofRecord {
                module: m.into(),
                label: l.into(),
                fingerprint: "abcd".into(),
                proof_ref: format!("proofs/{}-{}.txt", m, l),
                spec_digest: "1234".into(),
                timestamp: "2024-01-01T00:00:00Z".into(),
            });
        }
        let text = db.to_text();
        let loaded = ProveDb::parse(&text).unwrap();
        assert_eq!(db, loaded);

        // re-recording replaces
        let mut db2 = loaded.clone();
        db2.record(ProofRecord {
            module: "A".into(),
            label: "g1".into(),
            fingerprint: "ef01".into(),
            proof_ref: "proofs/new.txt".into(),
            spec_digest: "5678".into(),
            timestamp: "2024-01-02T00:00:00Z".into(),
        });
        assert_eq!(db2.records.len(), 3);
        assert_eq!(db2.get("A", "g1").unwrap().fingerprint, "ef01");
    }

    #[test]
    fn empty_and_malformed_files() {
        assert!(ProveDb::parse("").unwrap().records.is_empty());
        assert!(ProveDb::parse("# just a comment\n\n").unwrap().records.is_empty());
        let err = ProveDb::parse("too\tfew\tfields\n").unwrap_err();
        assert_eq!(err.line, 1);
    }

    #[test]
    fn stale_fingerprint_is_not_proven() {
        let mut db = ProveDb::new();
        let c = clause(
            "irref",
            vec![EqTerm::bare(Term::app("greater", vec![Term::name("x"), Term::name("x")]))],
            vec![],
        );
        let v = vars(&["x"]);
        let fp = clause_fingerprint(&c, &v);
        db.record(ProofRecord {
            module: "OrdNaturals".into(),
            label: "irref".into(),
            fingerprint: fp.clone(),
            proof_ref: "proofs/irref.txt".into(),
            spec_digest: "d".into(),
            timestamp: "t".into(),
        });
        assert!(db.is_proven("OrdNaturals", "irref", &fp));

        // mutate the goal: the recorded proof is stale
        let mutated = clause(
            "irref",
            vec![EqTerm::bare(Term::app("greater", vec![Term::name("x"), Term::name("y")]))],
            vec![],
        );
        let fp2 = clause_fingerprint(&mutated, &vars(&["x", "y"]));
        assert!(!db.is_proven("OrdNaturals", "irref", &fp2));
        assert!(!db.is_proven("OrdNaturals", "trans", &fp));
    }
}
