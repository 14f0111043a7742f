//! Helpers shared by the integration tests: corpus loading, prove-db
//! seeding, and the random hierarchy generator with its brute-force
//! identification oracle.

#![allow(dead_code)]

use asfplus::core::{RenderTable, SpecName};
use asfplus::norm::NormRun;
use asfplus::provedb::{clause_fingerprint, ProofRecord, ProveDb};
use asfplus::syntax::{parse_specification, AsfSpec, SourceFile};

pub const CORPUS_FILES: &[&str] = &[
    "booleans.asfp",
    "naturals.asfp",
    "ordnaturals.asfp",
    "sequences.asfp",
    "ordsequences.asfp",
    "integers.asfp",
    "ordnatsequences.asfp",
    "seqofseq.asfp",
];

pub fn corpus_dir() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("..")
        .join("..")
        .join("corpus")
}

pub fn read_corpus(files: &[&str]) -> Vec<SourceFile> {
    let dir = corpus_dir();
    files
        .iter()
        .map(|f| SourceFile {
            name: f.to_string(),
            text: std::fs::read_to_string(dir.join(f))
                .unwrap_or_else(|e| panic!("cannot read corpus file {}: {}", f, e)),
        })
        .collect()
}

pub fn corpus_spec(top: &str) -> AsfSpec {
    let files = read_corpus(CORPUS_FILES);
    parse_specification(&files, Some(top), false).expect("corpus parses")
}

/// A prove-db with all three ordering goals of OrdNaturals recorded.
pub fn proven_ordnaturals(spec: &AsfSpec) -> ProveDb {
    let mut db = ProveDb::new();
    let m = spec.module("OrdNaturals").expect("OrdNaturals present");
    let mut vars = m.varsort_cons.clone();
    for (k, v) in &m.varsort_noncons {
        vars.entry(k.clone()).or_insert_with(|| v.clone());
    }
    let render = RenderTable::empty();
    for goal in &m.goals {
        let label = goal.label.render(&render);
        db.record(ProofRecord {
            module: "OrdNaturals".into(),
            label: label.clone(),
            fingerprint: clause_fingerprint(goal, &vars),
            proof_ref: format!("proofs/{}.txt", label),
            spec_digest: "test".into(),
            timestamp: "2024-01-01T00:00:00Z".into(),
        });
    }
    db
}

pub fn normalize_corpus(top: &str, db: &ProveDb) -> Result<NormRun, asfplus::NormError> {
    let spec = corpus_spec(top);
    asfplus::norm::normal_form(&spec, db, true)
}

/// Renders a hidden or plain name for assertion convenience.
pub fn rendered(run: &NormRun, name: &SpecName) -> String {
    name.render(&run.render)
}
