//! Structure diagrams: nested namespace boxes, parameter hexagons and
//! binding arrows, emitted as graphviz clusters or nested ASCII boxes.
//!
//! Box nesting reflects the import-derived dependency function (a box
//! encloses the boxes of the namespaces it depends on, transitively
//! reduced).  Dependencies induced by parameter binding are drawn as an
//! arrow from the actual module's box to the parameter hexagon instead of
//! as nesting; by default the implicit and the direct import of an actual
//! module merge into one box, `expanded` duplicates the actual module's
//! subtree per binding.

use indexmap::{IndexMap, IndexSet};

use crate::core::{DependencyFunc, ModInstName, RenderTable, SpecName, UserName, Visibility};
use crate::norm::{BindEvent, NfBundle};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DiagramTree {
    pub node: ModInstName,
    pub children: Vec<DiagramTree>,
    /// Parameter tuples declared by this namespace.
    pub param_tuples: Vec<Vec<UserName>>,
    /// Public, private and hidden names of this namespace (only filled
    /// when name columns are requested).
    pub name_columns: Option<NameColumns>,
    /// Marks the duplicated actual-module subtree of the expanded form.
    pub implicit: bool,
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct NameColumns {
    pub public: Vec<String>,
    pub private: Vec<String>,
    pub hidden: Vec<String>,
}

/// An arrow from the actual module's namespace to the parameter tuple of
/// the formal module it was bound into.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BindingEdge {
    pub source: ModInstName,
    pub target: ModInstName,
    pub params: Vec<UserName>,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Diagram {
    pub root: DiagramTree,
    pub edges: Vec<BindingEdge>,
}

#[derive(Clone, Copy, Default)]
pub struct DiagramOpts {
    pub expanded: bool,
    pub names: bool,
}

/// Direct dependencies of `node`: the namespaces it depends on, with
/// transitively reachable ones removed.
fn direct_deps(depf: &DependencyFunc, node: &ModInstName) -> Vec<ModInstName> {
    let deps: Vec<ModInstName> = depf
        .entries
        .iter()
        .filter(|(_, dependents)| dependents.contains(node))
        .map(|(ns, _)| ns.clone())
        .collect();
    let reachable_from = |start: &ModInstName| -> IndexSet<ModInstName> {
        let mut seen = IndexSet::new();
        let mut work = vec![start.clone()];
        while let Some(cur) = work.pop() {
            for (ns, dependents) in &depf.entries {
                if dependents.contains(&cur) && seen.insert(ns.clone()) {
                    work.push(ns.clone());
                }
            }
        }
        seen
    };
    let mut out = Vec::new();
    for d in &deps {
        let covered = deps
            .iter()
            .filter(|o| *o != d)
            .any(|o| reachable_from(o).contains(d));
        if !covered {
            out.push(d.clone());
        }
    }
    out
}

fn build_tree(
    depf: &DependencyFunc,
    node: &ModInstName,
    params: &IndexMap<ModInstName, Vec<Vec<UserName>>>,
    columns: &IndexMap<ModInstName, NameColumns>,
    implicit: bool,
) -> DiagramTree {
    let children = direct_deps(depf, node)
        .into_iter()
        .map(|c| build_tree(depf, &c, params, columns, false))
        .collect();
    DiagramTree {
        node: node.clone(),
        children,
        param_tuples: params.get(node).cloned().unwrap_or_default(),
        name_columns: columns.get(node).cloned(),
        implicit,
    }
}

/// Builds the structure diagram of a normal form from its import-derived
/// dependency function and the binding log.
pub fn structure_tree(
    bundle: &NfBundle,
    top: &ModInstName,
    render: &RenderTable,
    opts: DiagramOpts,
) -> Diagram {
    // hexagons: bound tuples attach to the namespace of the separated
    // parameters, remaining tuples to the namespace of their parameters
    let mut params: IndexMap<ModInstName, Vec<Vec<UserName>>> = IndexMap::new();
    for ev in &bundle.bind_log {
        params.entry(ev.paradefmod.clone()).or_default().push(ev.params.clone());
    }
    for ps in &bundle.triple.module.param_sigs {
        let names: Vec<UserName> =
            ps.names().into_iter().filter_map(|n| n.as_user().cloned()).collect();
        if let Some(first) = names.first() {
            let ns = bundle
                .triple
                .originf
                .entries
                .iter()
                .find(|(k, o)| {
                    o.visibility == Visibility::Parameter
                        && k.name == SpecName::User(first.clone())
                })
                .map(|(_, o)| o.modiname.clone());
            if let Some(ns) = ns {
                params.entry(ns).or_default().push(names);
            }
        }
    }

    let mut columns: IndexMap<ModInstName, NameColumns> = IndexMap::new();
    if opts.names {
        for (k, o) in &bundle.triple.originf.entries {
            if o.symboltype != crate::core::SymbolType::Sort
                && o.symboltype != crate::core::SymbolType::Function
            {
                continue;
            }
            let cols = columns.entry(o.modiname.clone()).or_default();
            let rendered = k.name.render(render);
            let list = match o.visibility {
                Visibility::Public | Visibility::Parameter => &mut cols.public,
                Visibility::Private => &mut cols.private,
                Visibility::Hidden => &mut cols.hidden,
            };
            if !list.contains(&rendered) {
                list.push(rendered);
            }
        }
    }

    let mut root = build_tree(&bundle.diag_depf, top, &params, &columns, false);
    if opts.expanded {
        for ev in &bundle.bind_log {
            let dup = build_tree(&bundle.diag_depf, &ev.act_root, &params, &columns, true);
            root.children.push(dup);
        }
    }
    let edges = bundle
        .bind_log
        .iter()
        .map(|ev: &BindEvent| BindingEdge {
            source: ev.act_root.clone(),
            target: ev.paradefmod.clone(),
            params: ev.params.clone(),
        })
        .collect();
    Diagram { root, edges }
}

fn node_id(ns: &ModInstName) -> String {
    ns.to_string()
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect()
}

/// Emits a graphviz digraph with one cluster per namespace box,
/// hexagon-shaped parameter nodes and one directed edge per binding.
pub fn emit_dot(diagram: &Diagram) -> String {
    let mut out = String::from("digraph structure {\n  compound=true;\n");
    let mut anchors: IndexMap<String, String> = IndexMap::new();
    let mut hexagons: IndexMap<String, String> = IndexMap::new();

    fn walk(
        t: &DiagramTree,
        path: &str,
        depth: usize,
        out: &mut String,
        anchors: &mut IndexMap<String, String>,
        hexagons: &mut IndexMap<String, String>,
    ) {
        let pad = "  ".repeat(depth + 1);
        let id = format!("{}_{}", path, node_id(&t.node));
        out.push_str(&format!("{}subgraph cluster_{} {{\n", pad, id));
        out.push_str(&format!("{}  label=\"{}\";\n", pad, t.node));
        if let Some(cols) = &t.name_columns {
            let fmt = |v: &[String]| if v.is_empty() { "-".to_string() } else { v.join(", ") };
            out.push_str(&format!(
                "{}  names_{} [shape=record, label=\"{} : {} : {}\"];\n",
                pad,
                id,
                fmt(&cols.public),
                fmt(&cols.private),
                fmt(&cols.hidden)
            ));
        }
        out.push_str(&format!("{}  anchor_{} [shape=point, style=invis];\n", pad, id));
        if !t.implicit {
            anchors.entry(node_id(&t.node)).or_insert_with(|| id.clone());
        } else {
            anchors.insert(node_id(&t.node), id.clone());
        }
        for (i, tuple) in t.param_tuples.iter().enumerate() {
            let label: Vec<String> = tuple.iter().map(|n| n.to_string()).collect();
            let hex_id = format!("hex_{}_{}", id, i);
            out.push_str(&format!(
                "{}  {} [shape=hexagon, label=\"{}\"];\n",
                pad,
                hex_id,
                label.join(", ")
            ));
            hexagons.entry(node_id(&t.node)).or_insert(hex_id);
        }
        for c in &t.children {
            walk(c, &id, depth + 1, out, anchors, hexagons);
        }
        out.push_str(&format!("{}}}\n", pad));
    }

    walk(&diagram.root, "c", 0, &mut out, &mut anchors, &mut hexagons);
    for e in &diagram.edges {
        let src = anchors
            .get(&node_id(&e.source))
            .cloned()
            .unwrap_or_else(|| node_id(&e.source));
        match hexagons.get(&node_id(&e.target)) {
            Some(hex) => {
                out.push_str(&format!(
                    "  anchor_{} -> {} [ltail=cluster_{}];\n",
                    src, hex, src
                ));
            }
            None => {
                let dst = anchors
                    .get(&node_id(&e.target))
                    .cloned()
                    .unwrap_or_else(|| node_id(&e.target));
                out.push_str(&format!(
                    "  anchor_{} -> anchor_{} [ltail=cluster_{}, lhead=cluster_{}];\n",
                    src, dst, src, dst
                ));
            }
        }
    }
    out.push_str("}\n");
    out
}

/// Emits nested ASCII boxes; binding arrows are listed below the boxes.
pub fn emit_ascii(diagram: &Diagram) -> String {
    fn box_lines(t: &DiagramTree) -> Vec<String> {
        let mut inner: Vec<String> = Vec::new();
        if let Some(cols) = &t.name_columns {
            let fmt = |v: &[String]| if v.is_empty() { "-".to_string() } else { v.join(", ") };
            inner.push(format!(
                "{} : {} : {}",
                fmt(&cols.public),
                fmt(&cols.private),
                fmt(&cols.hidden)
            ));
        }
        for tuple in &t.param_tuples {
            let names: Vec<String> = tuple.iter().map(|n| n.to_string()).collect();
            inner.push(format!("< {} >", names.join(", ")));
        }
        for c in &t.children {
            inner.extend(box_lines(c));
        }
        let title = t.node.to_string();
        let width = inner
            .iter()
            .map(|l| l.len())
            .chain(std::iter::once(title.len()))
            .max()
            .unwrap_or(0)
            + 2;
        let mut out = Vec::new();
        out.push(format!("+-{}-+", "-".repeat(width)));
        out.push(format!("| {:^width$} |", title, width = width));
        for l in inner {
            out.push(format!("| {:<width$} |", l, width = width));
        }
        out.push(format!("+-{}-+", "-".repeat(width)));
        out
    }
    let mut out = box_lines(&diagram.root).join("\n");
    out.push('\n');
    for e in &diagram.edges {
        let names: Vec<String> = e.params.iter().map(|n| n.to_string()).collect();
        out.push_str(&format!("{} ==> < {} > of {}\n", e.source, names.join(", "), e.target));
    }
    out
}

/// Re-parses the cluster nesting of emitted dot text into a containment
/// relation (parent label -> child labels); used to check diagram
/// fidelity against the dependency function.
pub fn parse_dot_nesting(dot: &str) -> IndexMap<String, IndexSet<String>> {
    let mut out: IndexMap<String, IndexSet<String>> = IndexMap::new();
    let mut stack: Vec<String> = Vec::new();
    for line in dot.lines() {
        let trimmed = line.trim();
        if trimmed.starts_with("subgraph cluster_") {
            stack.push(String::new());
        } else if let Some(rest) = trimmed.strip_prefix("label=\"") {
            if let Some(label) = rest.strip_suffix("\";") {
                if let Some(top) = stack.last_mut() {
                    if top.is_empty() {
                        *top = label.to_string();
                        if stack.len() >= 2 {
                            let parent = stack[stack.len() - 2].clone();
                            out.entry(parent).or_default().insert(label.to_string());
                        }
                        out.entry(label.to_string()).or_default();
                    }
                }
            }
        } else if trimmed == "}" && !stack.is_empty() {
            stack.pop();
        }
    }
    out
}
