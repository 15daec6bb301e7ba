//! CODEMAP.md: a committed, body-free navigation map of a source tree.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::source::{CallTarget, Declaration, EntryRules, ScanConfig, SourceModel};

pub const DEFAULT_MAX_DEPTH: usize = 5;
pub const SECTIONS: [&str; 5] = ["Topology", "Entry Points", "Call Chains", "Declarations", "Data Flow"];
const GENERATED_PREFIX: &str = "generated: ";

#[derive(Debug, Clone)]
pub struct CodeMapOptions {
    pub project_name: String,
    pub max_depth: usize,
    pub include_unexported: bool,
    /// Unix seconds.
    pub generated_at: i64,
    pub entry_rules: EntryRules,
}

impl Default for CodeMapOptions {
    fn default() -> Self {
        CodeMapOptions {
            project_name: "project".into(),
            max_depth: DEFAULT_MAX_DEPTH,
            include_unexported: false,
            generated_at: 0,
            entry_rules: ScanConfig::default().entry_points,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopologyEntry {
    /// Directory relative to the root with a trailing `/`; `./` for the root.
    pub dir: String,
    pub files: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeclRef {
    pub id: String,
    pub label: String,
    pub description: String,
    pub path: String,
    pub line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainNode {
    pub id: String,
    pub label: String,
    pub description: String,
    /// Calls back into a declaration already on this path.
    pub cyclic: bool,
    /// Expanded earlier in the map; children omitted.
    pub repeated: bool,
    pub children: Vec<ChainNode>,
}

impl ChainNode {
    /// Every root-to-leaf path as labels.
    pub fn paths(&self) -> Vec<Vec<String>> {
        if self.children.is_empty() {
            return vec![vec![self.label.clone()]];
        }
        self.children
            .iter()
            .flat_map(|c| c.paths())
            .map(|mut p| {
                p.insert(0, self.label.clone());
                p
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexEntry {
    pub id: String,
    pub path: String,
    pub line: usize,
    pub signature: String,
    pub doc: Option<String>,
    /// Undocumented callable whose body holds no logic (accessors, injection
    /// constructors); folded onto one line per file when rendered.
    pub trivial: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DataFlowEntry {
    pub type_name: String,
    pub producers: Vec<String>,
    pub consumers: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeMap {
    pub project_name: String,
    pub generated_at: i64,
    pub file_count: usize,
    /// Directory prefix shared by every file, omitted from rendered paths.
    pub path_prefix: String,
    pub topology: Vec<TopologyEntry>,
    pub entry_points: Vec<DeclRef>,
    pub call_chains: Vec<ChainNode>,
    pub declaration_index: Vec<IndexEntry>,
    pub data_flow: Vec<DataFlowEntry>,
}

static ANNOTATION: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"@[\w.$]+(\([^()]*\))?\s*").unwrap());
const DROPPED_WORDS: &[&str] = &[
    "public", "private", "protected", "internal", "static", "final", "abstract", "synchronized",
    "native", "export", "default", "declare", "readonly", "override", "virtual", "sealed",
    "strictfp", "func", "def", "function",
];

/// Signature without modifiers, annotations or the defining keyword.
pub fn compact_signature(sig: &str) -> String {
    let stripped = ANNOTATION.replace_all(sig, "");
    let words: Vec<&str> = stripped
        .split_whitespace()
        .skip_while(|w| DROPPED_WORDS.contains(w))
        .collect();
    words.join(" ").replace("( ", "(").replace(" )", ")")
}

/// First sentence of a docstring.
pub fn first_sentence(doc: &str) -> String {
    let doc = doc.trim();
    match doc.find(". ") {
        Some(i) => doc[..=i].to_string(),
        None => doc.to_string(),
    }
}

/// Chain and entry descriptions: the doc's first sentence, or nothing when
/// the signature (already in the index) is all there is.
fn doc_summary(d: &Declaration) -> String {
    d.docstring.as_deref().map(first_sentence).unwrap_or_default()
}

fn is_constructor(d: &Declaration) -> bool {
    d.name == "constructor" || d.name == "__init__" || d.owner.as_deref() == Some(d.name.as_str())
}

fn is_trivial(model: &SourceModel, d: &Declaration) -> bool {
    if !d.kind.is_callable() || !d.has_body || d.docstring.is_some() {
        return false;
    }
    model.file(&d.path).is_some_and(|f| {
        f.line_classes
            .get(d.span.0..d.span.1)
            .is_some_and(|body| !body.contains(&crate::source::LineClass::Logic))
    })
}

fn decl_ref(d: &Declaration) -> DeclRef {
    DeclRef {
        id: d.id.clone(),
        label: d.label(),
        description: doc_summary(d),
        path: d.path.clone(),
        line: d.span.0,
    }
}

fn annotation_matches(annotation: &str, markers: &[String]) -> bool {
    let last = annotation.rsplit('.').next().unwrap_or(annotation);
    markers.iter().any(|m| m == last || m == annotation)
}

/// Union of the name, glob and annotation rules, in model order.
pub fn detect_entry_points<'m>(model: &'m SourceModel, rules: &EntryRules) -> Vec<&'m Declaration> {
    let globs = crate::source::build_entry_globs(&rules.globs);
    model
        .declarations
        .iter()
        .filter(|d| d.kind.is_callable())
        .filter(|d| {
            rules.names.contains(&d.name)
                || (d.exported && globs.as_ref().is_some_and(|g| g.is_match(&d.path)))
                || d.annotations.iter().any(|a| annotation_matches(a, &rules.annotations))
        })
        .collect()
}

struct ChainBuilder<'m> {
    by_id: BTreeMap<&'m str, &'m Declaration>,
    edges: BTreeMap<&'m str, Vec<&'m str>>,
    expanded: BTreeSet<&'m str>,
    max_depth: usize,
}

impl<'m> ChainBuilder<'m> {
    fn new(model: &'m SourceModel, max_depth: usize) -> Self {
        let mut edges: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
        for e in &model.call_edges {
            if let CallTarget::Resolved(to) = &e.target {
                let list = edges.entry(e.caller.as_str()).or_default();
                if !list.contains(&to.as_str()) {
                    list.push(to.as_str());
                }
            }
        }
        ChainBuilder {
            by_id: model.declarations.iter().map(|d| (d.id.as_str(), d)).collect(),
            edges,
            expanded: BTreeSet::new(),
            max_depth,
        }
    }

    fn has_callees(&self, id: &str) -> bool {
        self.edges.get(id).is_some_and(|v| !v.is_empty())
    }

    fn node(&mut self, id: &'m str, path: &mut Vec<&'m str>) -> ChainNode {
        let d = self.by_id[id];
        let mut node = ChainNode {
            id: d.id.clone(),
            label: d.label(),
            description: doc_summary(d),
            cyclic: false,
            repeated: false,
            children: Vec::new(),
        };
        if self.expanded.contains(id) && self.has_callees(id) {
            node.repeated = true;
            return node;
        }
        self.expanded.insert(id);
        if path.len() >= self.max_depth {
            return node;
        }
        path.push(id);
        let callees = self.edges.get(id).cloned().unwrap_or_default();
        for callee in callees {
            if path.contains(&callee) {
                node.cyclic = true;
                continue;
            }
            let child = self.node(callee, path);
            node.children.push(child);
        }
        path.pop();
        node
    }
}

fn common_dir(model: &SourceModel) -> String {
    let mut prefix: Option<Vec<&str>> = None;
    for f in &model.files {
        let dirs: Vec<&str> = f.path.split('/').collect();
        let dirs = &dirs[..dirs.len() - 1];
        prefix = Some(match prefix {
            None => dirs.to_vec(),
            Some(p) => p.iter().zip(dirs).take_while(|(a, b)| a == b).map(|(a, _)| *a).collect(),
        });
    }
    prefix
        .filter(|p| !p.is_empty())
        .map(|p| format!("{}/", p.join("/")))
        .unwrap_or_default()
}

fn topology(model: &SourceModel) -> Vec<TopologyEntry> {
    let mut dirs: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for f in &model.files {
        let (dir, name) = match f.path.rsplit_once('/') {
            Some((d, n)) => (format!("{d}/"), n.to_string()),
            None => ("./".to_string(), f.path.clone()),
        };
        dirs.entry(dir).or_default().push(name);
    }
    dirs.into_iter().map(|(dir, files)| TopologyEntry { dir, files }).collect()
}

/// Parameter text and return-position text of a signature.
fn signature_parts(sig: &str, name: &str) -> Option<(String, String)> {
    let start = find_word_followed_by_paren(sig, name)?;
    let open = start + name.len() + sig[start + name.len()..].find('(')?;
    let mut depth = 0;
    let mut close = None;
    for (i, c) in sig[open..].char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    close = Some(open + i);
                    break;
                }
            }
            _ => {}
        }
    }
    let close = close?;
    let params = sig[open + 1..close].to_string();
    // Drop parenthesised groups before the name (Go receivers).
    let mut prefix = String::new();
    let mut depth = 0;
    for c in sig[..start].chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ if depth == 0 => prefix.push(c),
            _ => {}
        }
    }
    Some((params, format!("{prefix} {}", &sig[close + 1..])))
}

fn find_word_followed_by_paren(sig: &str, name: &str) -> Option<usize> {
    let mut from = 0;
    while let Some(rel) = sig[from..].find(name) {
        let i = from + rel;
        let before_ok = sig[..i]
            .chars()
            .next_back()
            .is_none_or(|c| !(c.is_alphanumeric() || c == '_' || c == '$'));
        let after = sig[i + name.len()..].trim_start();
        if before_ok && (after.starts_with('(') || after.starts_with('<') || after.starts_with('[')) {
            return Some(i);
        }
        from = i + name.len();
    }
    None
}

fn mentions(text: &str, word: &str) -> bool {
    text.split(|c: char| !(c.is_alphanumeric() || c == '_' || c == '$'))
        .any(|w| w == word)
}

fn data_flow(model: &SourceModel, indexed: &[&Declaration]) -> Vec<DataFlowEntry> {
    let types: BTreeSet<&str> = model
        .declarations
        .iter()
        .filter(|d| matches!(d.kind, crate::source::DeclKind::Type | crate::source::DeclKind::Interface))
        .map(|d| d.name.as_str())
        .collect();
    // A bodiless declaration adds nothing when a bodied one shares its name.
    let bodied: BTreeSet<&str> = indexed.iter().filter(|d| d.has_body).map(|d| d.name.as_str()).collect();
    let mut flow: BTreeMap<&str, (Vec<String>, Vec<String>)> = BTreeMap::new();
    for d in indexed
        .iter()
        .filter(|d| d.kind.is_callable() && !is_constructor(d))
        .filter(|d| d.has_body || !bodied.contains(d.name.as_str()))
    {
        let Some((params, ret)) = signature_parts(&d.signature_text, &d.name) else {
            continue;
        };
        for t in &types {
            let entry = || (Vec::new(), Vec::new());
            if mentions(&ret, t) {
                flow.entry(t).or_insert_with(entry).0.push(d.label());
            }
            if mentions(&params, t) {
                flow.entry(t).or_insert_with(entry).1.push(d.label());
            }
        }
    }
    flow.into_iter()
        .map(|(t, (mut producers, mut consumers))| {
            producers.dedup();
            consumers.dedup();
            DataFlowEntry {
                type_name: t.to_string(),
                producers,
                consumers,
            }
        })
        .collect()
}

pub fn build_codemap(model: &SourceModel, options: &CodeMapOptions) -> CodeMap {
    let entries = detect_entry_points(model, &options.entry_rules);
    let indexed: Vec<&Declaration> = model
        .declarations
        .iter()
        .filter(|d| d.exported || options.include_unexported)
        .collect();

    let mut builder = ChainBuilder::new(model, options.max_depth);
    let roots: Vec<&Declaration> = if entries.is_empty() {
        // Fallback: every exported callable that leads somewhere.
        indexed
            .iter()
            .copied()
            .filter(|d| d.kind.is_callable() && builder.has_callees(&d.id))
            .collect()
    } else {
        entries.clone()
    };
    let mut call_chains = Vec::new();
    for root in roots {
        if entries.is_empty() && builder.expanded.contains(root.id.as_str()) {
            continue;
        }
        call_chains.push(builder.node(&root.id, &mut Vec::new()));
    }

    // Compact signatures of bodied callables, to fold the abstract
    // declarations they implement.
    let mut implemented: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for d in indexed.iter().filter(|d| d.kind.is_callable() && d.has_body) {
        let owner = d.owner.clone().unwrap_or_else(|| d.path.clone());
        implemented.entry(compact_signature(&d.signature_text)).or_default().push(owner);
    }
    let signature_of = |d: &Declaration| {
        let sig = compact_signature(&d.signature_text);
        match implemented.get(&sig) {
            Some(owners) if d.kind.is_callable() && !d.has_body => {
                format!("{} → {}", d.name, owners.join(", "))
            }
            _ => sig,
        }
    };

    CodeMap {
        project_name: options.project_name.clone(),
        generated_at: options.generated_at,
        file_count: model.files.len(),
        path_prefix: common_dir(model),
        topology: topology(model),
        entry_points: entries.iter().map(|d| decl_ref(d)).collect(),
        call_chains,
        declaration_index: indexed
            .iter()
            .map(|d| IndexEntry {
                id: d.id.clone(),
                path: d.path.clone(),
                line: d.span.0,
                signature: signature_of(d),
                doc: d.docstring.as_deref().map(first_sentence),
                trivial: is_trivial(model, d) && !entries.iter().any(|e| e.id == d.id),
            })
            .collect(),
        data_flow: data_flow(model, &indexed),
    }
}

fn format_timestamp(secs: i64) -> String {
    chrono::DateTime::from_timestamp(secs, 0)
        .map(|t| t.format("%Y-%m-%dT%H:%M:%SZ").to_string())
        .unwrap_or_else(|| secs.to_string())
}

fn with_description(label: &str, description: &str) -> String {
    if description.is_empty() {
        label.to_string()
    } else {
        format!("{label} — {description}")
    }
}

/// Bare name from an id of the form `path::Owner.name@line`.
fn bare_name(id: &str) -> &str {
    let base = id.rsplit_once("::").map_or(id, |(_, b)| b);
    let base = base.rsplit_once('@').map_or(base, |(b, _)| b);
    base.rsplit_once('.').map_or(base, |(_, n)| n)
}

fn render_chain(out: &mut String, node: &ChainNode, depth: usize) {
    let mut flags = String::new();
    if node.cyclic {
        flags.push_str(" (cyclic)");
    }
    if node.repeated {
        flags.push_str(" (see above)");
    }
    let _ = writeln!(out, "{}- {}{flags}", "  ".repeat(depth), node.label);
    for c in &node.children {
        render_chain(out, c, depth + 1);
    }
}

pub fn render_codemap(map: &CodeMap) -> String {
    let rel = |p: &str| p.strip_prefix(map.path_prefix.as_str()).unwrap_or(p).to_string();
    let mut out = String::new();
    let _ = writeln!(out, "# CODEMAP: {}\n", map.project_name);
    let _ = writeln!(out, "{GENERATED_PREFIX}{}", format_timestamp(map.generated_at));
    if !map.path_prefix.is_empty() {
        let _ = writeln!(out, "root: {}", map.path_prefix);
    }

    let _ = writeln!(out, "\n## {}\n", SECTIONS[0]);
    for t in &map.topology {
        let dir = rel(&t.dir);
        let dir = if dir.is_empty() { "./".to_string() } else { dir };
        let n = t.files.len();
        let _ = writeln!(out, "- {dir} {n} file{}", if n == 1 { "" } else { "s" });
    }

    let _ = writeln!(out, "\n## {}\n", SECTIONS[1]);
    if map.entry_points.is_empty() {
        let _ = writeln!(out, "- none detected; chains start at exported callables");
    }
    for e in &map.entry_points {
        let _ = writeln!(out, "- {} ({}:L{})", e.label, rel(&e.path), e.line);
    }

    let _ = writeln!(out, "\n## {}\n", SECTIONS[2]);
    for c in &map.call_chains {
        render_chain(&mut out, c, 0);
    }

    let _ = writeln!(out, "\n## {}\n", SECTIONS[3]);
    let mut by_file: Vec<(&str, Vec<&IndexEntry>)> = Vec::new();
    for e in &map.declaration_index {
        match by_file.last_mut() {
            Some((p, list)) if *p == e.path => list.push(e),
            _ => by_file.push((&e.path, vec![e])),
        }
    }
    for (i, (path, entries)) in by_file.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        let _ = writeln!(out, "### {}\n", rel(path));
        for e in entries.iter().filter(|e| !e.trivial) {
            let line = format!("L{} {}", e.line, e.signature);
            let _ = writeln!(out, "- {}", with_description(&line, e.doc.as_deref().unwrap_or("")));
        }
        let trivial: Vec<String> = entries
            .iter()
            .filter(|e| e.trivial)
            .map(|e| bare_name(&e.id).to_string())
            .collect();
        if !trivial.is_empty() {
            let _ = writeln!(out, "- no logic: {}", trivial.join(", "));
        }
    }

    let _ = writeln!(out, "\n## {}\n", SECTIONS[4]);
    for f in &map.data_flow {
        let mut parts = Vec::new();
        if !f.producers.is_empty() {
            parts.push(format!("from {}", f.producers.join(", ")));
        }
        if !f.consumers.is_empty() {
            parts.push(format!("into {}", f.consumers.join(", ")));
        }
        let _ = writeln!(out, "- {}: {}", f.type_name, parts.join("; "));
    }
    out
}

/// True when two renderings differ only in their `generated:` line.
pub fn same_ignoring_timestamp(a: &str, b: &str) -> bool {
    let strip = |s: &str| -> Vec<String> {
        s.lines()
            .filter(|l| !l.starts_with(GENERATED_PREFIX))
            .map(str::to_string)
            .collect()
    };
    strip(a) == strip(b)
}
