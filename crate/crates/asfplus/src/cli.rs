//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on any specification error, 2 on usage
//! errors.  Diagnostics carry `file:line:col` where known plus the error
//! category and a stable machine-readable code.

use std::io::Read;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::core::{ModInstName, RenderTable};
use crate::error::NormError;
use crate::norm::{self, build_render_table, normal_form, Normalizer};
use crate::provedb::{clause_fingerprint, ProofRecord, ProveDb};
use crate::syntax::{parse_specification, print_module, AsfSpec, PrintOpts, SourceFile};
use crate::typecheck::SigView;

#[derive(Parser)]
#[command(name = "asfplus", version, about = "Toolchain for the ASF+ specification language")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArgs {
    /// Input files (`-` reads one specification from stdin)
    #[arg(required = true)]
    files: Vec<String>,
    /// Top module (default: first module of the first file)
    #[arg(long)]
    top: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and check a specification: local well-formedness plus the
    /// overload/sort check of the flattened top module
    Check {
        #[command(flatten)]
        input: InputArgs,
        /// Accept hidden (hyphenated) names, e.g. when re-checking
        /// printed normal forms
        #[arg(long)]
        allow_hidden: bool,
    },
    /// Flatten the hierarchy into a single import-free module
    Normalize {
        #[command(flatten)]
        input: InputArgs,
        /// Prove-db path (default: $ASFPLUS_PROVEDB, then the first input
        /// file with extension .provedb)
        #[arg(long)]
        provedb: Option<PathBuf>,
        /// Expand macro-equations in the result
        #[arg(long)]
        expand_macros: bool,
        /// Render every function occurrence as f[S1,...,Sn]
        #[arg(long)]
        disambiguate: bool,
        /// Output path (default: <top>.nf.asfp; `-` prints to stdout)
        #[arg(long, short)]
        output: Option<String>,
    },
    /// Expand the macro-equations of one module
    Expand {
        #[command(flatten)]
        input: InputArgs,
        /// Module to expand (default: the top module)
        #[arg(long)]
        module: Option<String>,
        #[arg(long, short)]
        output: Option<String>,
    },
    /// Emit the structure diagram of the top module
    Diagram {
        #[command(flatten)]
        input: InputArgs,
        /// Output format: dot or ascii
        #[arg(long, default_value = "dot")]
        format: String,
        /// Draw the implicit import of each bound actual module as its
        /// own duplicated box
        #[arg(long)]
        expanded: bool,
        /// Add public/private/hidden name columns to each box
        #[arg(long)]
        names: bool,
        #[arg(long)]
        provedb: Option<PathBuf>,
        /// Output path (default: <top>.dot / <top>.txt; `-` for stdout)
        #[arg(long, short)]
        output: Option<String>,
    },
    /// List all goals with their proof status
    Goals {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        provedb: Option<PathBuf>,
    },
    /// Prove-db ledger operations
    Prove {
        #[command(subcommand)]
        op: ProveOp,
    },
}

#[derive(Subcommand)]
enum ProveOp {
    /// Record a proof reference for a goal
    Record {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        module: String,
        #[arg(long)]
        label: String,
        /// Free-form locator of the proof
        #[arg(long)]
        proof_ref: String,
        #[arg(long)]
        provedb: Option<PathBuf>,
    },
    /// List all records
    List {
        #[arg(long)]
        provedb: Option<PathBuf>,
    },
    /// Check every record against the current specification
    Validate {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        provedb: Option<PathBuf>,
    },
}

fn read_files(names: &[String]) -> Result<Vec<SourceFile>, String> {
    if names.len() == 1 && names[0] == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| format!("cannot read stdin: {}", e))?;
        return Ok(vec![SourceFile { name: "<stdin>".into(), text }]);
    }
    let mut out = Vec::new();
    for name in names {
        let text = std::fs::read_to_string(name)
            .map_err(|e| format!("cannot read {}: {}", name, e))?;
        out.push(SourceFile { name: name.clone(), text });
    }
    Ok(out)
}

fn provedb_path(flag: Option<PathBuf>, files: &[String]) -> PathBuf {
    if let Some(p) = flag {
        return p;
    }
    if let Ok(env) = std::env::var("ASFPLUS_PROVEDB") {
        if !env.is_empty() {
            return PathBuf::from(env);
        }
    }
    let first = files.first().map(|s| s.as_str()).unwrap_or("spec");
    Path::new(first).with_extension("provedb")
}

fn report(err: &NormError, files: &[String]) {
    let file = err
        .pos()
        .and_then(|p| files.get(p.file))
        .cloned()
        .unwrap_or_default();
    if file.is_empty() {
        eprintln!("error[{}] {}", err.code(), err);
    } else {
        eprintln!("{}:{}: error[{}] {}", file, err.pos().unwrap(), err.code(), err);
    }
}

fn parse_input(
    input: &InputArgs,
    allow_hidden: bool,
) -> Result<(AsfSpec, Vec<String>), i32> {
    let files = match read_files(&input.files) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {}", e);
            return Err(2);
        }
    };
    let names: Vec<String> = files.iter().map(|f| f.name.clone()).collect();
    match parse_specification(&files, input.top.as_deref(), allow_hidden) {
        Ok(spec) => Ok((spec, names)),
        Err(e) => {
            let norm_err = NormError::LexOrParse { msg: e.to_string(), pos: Some(e.pos()) };
            report(&norm_err, &names);
            Err(1)
        }
    }
}

fn load_db(path: &Path, files: &[String]) -> Result<ProveDb, i32> {
    ProveDb::load(path).map_err(|e| {
        report(&NormError::spec(format!("{}: {}", path.display(), e)), files);
        1
    })
}

fn write_output(path: &str, content: &str) -> Result<(), i32> {
    if path == "-" {
        print!("{}", content);
        return Ok(());
    }
    std::fs::write(path, content).map_err(|e| {
        eprintln!("error: cannot write {}: {}", path, e);
        1
    })
}

fn spec_digest(files: &[SourceFile]) -> String {
    use sha2::{Digest, Sha256};
    let mut hasher = Sha256::new();
    for f in files {
        hasher.update(f.text.as_bytes());
    }
    hex::encode(hasher.finalize())[..16].to_string()
}

fn now_iso() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

/// Runs the CLI; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match cli.command {
        Command::Check { input, allow_hidden } => cmd_check(input, allow_hidden),
        Command::Normalize { input, provedb, expand_macros, disambiguate, output } => {
            cmd_normalize(input, provedb, expand_macros, disambiguate, output)
        }
        Command::Expand { input, module, output } => cmd_expand(input, module, output),
        Command::Diagram { input, format, expanded, names, provedb, output } => {
            cmd_diagram(input, format, expanded, names, provedb, output)
        }
        Command::Goals { input, provedb } => cmd_goals(input, provedb),
        Command::Prove { op } => match op {
            ProveOp::Record { input, module, label, proof_ref, provedb } => {
                cmd_prove_record(input, module, label, proof_ref, provedb)
            }
            ProveOp::List { provedb } => cmd_prove_list(provedb),
            ProveOp::Validate { input, provedb } => cmd_prove_validate(input, provedb),
        },
    }
}

fn cmd_check(input: InputArgs, allow_hidden: bool) -> i32 {
    let (spec, files) = match parse_input(&input, allow_hidden) {
        Ok(v) => v,
        Err(c) => return c,
    };
    // local well-formedness of each module
    for (name, module) in &spec.modules {
        if let Err(e) = norm::make_gf(module) {
            let e = spec
                .module_pos
                .get(name)
                .map(|p| e.clone().with_pos(*p))
                .unwrap_or(e);
            report(&e, &files);
            return 1;
        }
    }
    // flatten (without the proof gate) and sort-check the result
    let pdb = ProveDb::new();
    let run = match normal_form(&spec, &pdb, false) {
        Ok(r) => r,
        Err(e) => {
            report(&e, &files);
            return 1;
        }
    };
    let view = SigView::new(&run.bundle.triple.module);
    if let Err(e) = view.check_module() {
        report(&NormError::spec(format!("in {}: {}", run.bundle.triple.module.name, e)), &files);
        return 1;
    }
    println!("ok: {} module(s), flattened {} checks out", spec.modules.len(), spec.top);
    0
}

fn cmd_normalize(
    input: InputArgs,
    provedb: Option<PathBuf>,
    expand_macros: bool,
    disambiguate: bool,
    output: Option<String>,
) -> i32 {
    let db_path = provedb_path(provedb, &input.files);
    let (spec, files) = match parse_input(&input, false) {
        Ok(v) => v,
        Err(c) => return c,
    };
    let pdb = match load_db(&db_path, &files) {
        Ok(db) => db,
        Err(c) => return c,
    };
    let run = match normal_form(&spec, &pdb, true) {
        Ok(r) => r,
        Err(e) => {
            report(&e, &files);
            return 1;
        }
    };
    let mut module = run.bundle.triple.module.clone();
    if expand_macros {
        match crate::expand::expand_module(&module, &run.render) {
            Ok(m) => module = m,
            Err(e) => {
                report(&NormError::spec(e.to_string()), &files);
                return 1;
            }
        }
    }
    let text = print_module(
        &module,
        &run.render,
        PrintOpts { disambiguate, ..PrintOpts::default() },
    );
    let out_path = output.unwrap_or_else(|| format!("{}.nf.asfp", spec.top));
    match write_output(&out_path, &text) {
        Ok(()) => {
            if out_path != "-" {
                println!("wrote {}", out_path);
            }
            0
        }
        Err(c) => c,
    }
}

fn cmd_expand(input: InputArgs, module: Option<String>, output: Option<String>) -> i32 {
    let (spec, files) = match parse_input(&input, false) {
        Ok(v) => v,
        Err(c) => return c,
    };
    let name = module.unwrap_or_else(|| spec.top.clone());
    let m = match spec.module(&name) {
        Some(m) => m,
        None => {
            report(&NormError::spec(format!("no module named '{}'", name)), &files);
            return 1;
        }
    };
    let render = RenderTable::empty();
    let expanded = match crate::expand::expand_module(m, &render) {
        Ok(m) => m,
        Err(e) => {
            report(&NormError::spec(e.to_string()), &files);
            return 1;
        }
    };
    let text = print_module(
        &expanded,
        &render,
        PrintOpts {
            short: spec.abbrevs.get(&name).map(|s| s.as_str()).filter(|_| spec.shorts_declared.contains(&name)),
            header: spec.headers.get(&name).map(|h| h.as_slice()),
            disambiguate: false,
        },
    );
    match write_output(&output.unwrap_or_else(|| "-".into()), &text) {
        Ok(()) => 0,
        Err(c) => c,
    }
}

fn cmd_diagram(
    input: InputArgs,
    format: String,
    expanded: bool,
    names: bool,
    provedb: Option<PathBuf>,
    output: Option<String>,
) -> i32 {
    let db_path = provedb_path(provedb, &input.files);
    let (spec, files) = match parse_input(&input, false) {
        Ok(v) => v,
        Err(c) => return c,
    };
    let pdb = match load_db(&db_path, &files) {
        Ok(db) => db,
        Err(c) => return c,
    };
    let run = match normal_form(&spec, &pdb, true) {
        Ok(r) => r,
        Err(e) => {
            report(&e, &files);
            return 1;
        }
    };
    let top = ModInstName::plain(spec.top.clone());
    let diagram = crate::diagram::structure_tree(
        &run.bundle,
        &top,
        &run.render,
        crate::diagram::DiagramOpts { expanded, names },
    );
    let (text, ext) = match format.as_str() {
        "dot" => (crate::diagram::emit_dot(&diagram), "dot"),
        "ascii" => (crate::diagram::emit_ascii(&diagram), "txt"),
        other => {
            eprintln!("error: unknown diagram format '{}' (expected dot or ascii)", other);
            return 2;
        }
    };
    let out_path = output.unwrap_or_else(|| format!("{}.{}", spec.top, ext));
    match write_output(&out_path, &text) {
        Ok(()) => {
            if out_path != "-" {
                println!("wrote {}", out_path);
            }
            0
        }
        Err(c) => c,
    }
}

fn cmd_goals(input: InputArgs, provedb: Option<PathBuf>) -> i32 {
    let db_path = provedb_path(provedb, &input.files);
    let (spec, files) = match parse_input(&input, false) {
        Ok(v) => v,
        Err(c) => return c,
    };
    let pdb = match load_db(&db_path, &files) {
        Ok(db) => db,
        Err(c) => return c,
    };
    let render = RenderTable::empty();
    for (name, module) in &spec.modules {
        let mut vars = module.varsort_cons.clone();
        for (k, v) in &module.varsort_noncons {
            vars.entry(k.clone()).or_insert_with(|| v.clone());
        }
        for goal in &module.goals {
            let label = goal.label.render(&render);
            let fp = clause_fingerprint(goal, &vars);
            let status = match pdb.get(name, &label) {
                Some(rec) if rec.fingerprint == fp => format!("proven ({})", rec.proof_ref),
                Some(_) => "stale (goal changed since the proof was recorded)".to_string(),
                None => "unproven".to_string(),
            };
            println!("{}\t{}\t{}", name, label, status);
        }
    }
    0
}

fn cmd_prove_record(
    input: InputArgs,
    module: String,
    label: String,
    proof_ref: String,
    provedb: Option<PathBuf>,
) -> i32 {
    let db_path = provedb_path(provedb, &input.files);
    let sources = match read_files(&input.files) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("error: {}", e);
            return 2;
        }
    };
    let names: Vec<String> = sources.iter().map(|f| f.name.clone()).collect();
    let spec = match parse_specification(&sources, input.top.as_deref(), false) {
        Ok(s) => s,
        Err(e) => {
            report(&NormError::LexOrParse { msg: e.to_string(), pos: Some(e.pos()) }, &names);
            return 1;
        }
    };
    let m = match spec.module(&module) {
        Some(m) => m,
        None => {
            report(&NormError::spec(format!("unknown goal: no module named '{}'", module)), &names);
            return 1;
        }
    };
    let render = RenderTable::empty();
    let mut vars = m.varsort_cons.clone();
    for (k, v) in &m.varsort_noncons {
        vars.entry(k.clone()).or_insert_with(|| v.clone());
    }
    let goal = m.goals.iter().find(|g| g.label.render(&render) == label);
    let goal = match goal {
        Some(g) => g,
        None => {
            report(
                &NormError::spec(format!(
                    "unknown goal: module '{}' has no goal labeled '{}'",
                    module, label
                )),
                &names,
            );
            return 1;
        }
    };
    let mut db = match load_db(&db_path, &names) {
        Ok(db) => db,
        Err(c) => return c,
    };
    db.record(ProofRecord {
        module,
        label,
        fingerprint: clause_fingerprint(goal, &vars),
        proof_ref,
        spec_digest: format!("{}+{}", spec.top, spec_digest(&sources)),
        timestamp: now_iso(),
    });
    if let Err(e) = db.store(&db_path) {
        eprintln!("error: cannot write {}: {}", db_path.display(), e);
        return 1;
    }
    println!("recorded in {}", db_path.display());
    0
}

fn cmd_prove_list(provedb: Option<PathBuf>) -> i32 {
    let db_path = provedb_path(provedb, &[]);
    let db = match load_db(&db_path, &[]) {
        Ok(db) => db,
        Err(c) => return c,
    };
    for rec in db.records.values() {
        println!(
            "{}\t{}\t{}\t{}\t{}",
            rec.module, rec.label, rec.proof_ref, rec.timestamp, rec.fingerprint
        );
    }
    0
}

fn cmd_prove_validate(input: InputArgs, provedb: Option<PathBuf>) -> i32 {
    let db_path = provedb_path(provedb, &input.files);
    let (spec, files) = match parse_input(&input, false) {
        Ok(v) => v,
        Err(c) => return c,
    };
    let db = match load_db(&db_path, &files) {
        Ok(db) => db,
        Err(c) => return c,
    };
    let render = RenderTable::empty();
    let mut stale = 0;
    for rec in db.records.values() {
        let status = match spec.module(&rec.module) {
            None => "unknown-module",
            Some(m) => {
                let mut vars = m.varsort_cons.clone();
                for (k, v) in &m.varsort_noncons {
                    vars.entry(k.clone()).or_insert_with(|| v.clone());
                }
                match m.goals.iter().find(|g| g.label.render(&render) == rec.label) {
                    None => "unknown-goal",
                    Some(g) if clause_fingerprint(g, &vars) == rec.fingerprint => "valid",
                    Some(_) => "stale",
                }
            }
        };
        if status != "valid" {
            stale += 1;
        }
        println!("{}\t{}\t{}", rec.module, rec.label, status);
    }
    if stale > 0 {
        1
    } else {
        0
    }
}

/// Builds a render table for printing a normal form produced elsewhere.
pub fn render_for(bundle: &norm::NfBundle, spec: &AsfSpec) -> RenderTable {
    build_render_table(bundle, spec)
}

/// Convenience used by tests: flatten with an explicit semantic switch
/// and keep the normalizer accessible.
pub fn normalize_with(
    spec: &AsfSpec,
    pdb: &ProveDb,
    check_semantics: bool,
    memo: bool,
) -> crate::NormResult<norm::NormRun> {
    let mut n = Normalizer::new(spec, pdb);
    n.check_semantics = check_semantics;
    n.memo_enabled = memo;
    let bundle = n.nf(&spec.top)?;
    let render = build_render_table(&bundle, spec);
    Ok(norm::NormRun { bundle, render })
}
