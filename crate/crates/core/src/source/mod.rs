//! Declaration-level scanning of source trees and per-line classification.

mod classify;
mod config;
mod lexer;
mod scan;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use walkdir::WalkDir;

pub use classify::{classify_line, LineClass, LineContext};
pub use config::{EntryRules, ProfileMap, ScanConfig};
pub use lexer::{LexedLine, Lexer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    CFamily,
    GoStyle,
    PyStyle,
}

impl Profile {
    pub fn name(self) -> &'static str {
        match self {
            Profile::CFamily => "cfamily",
            Profile::GoStyle => "gostyle",
            Profile::PyStyle => "pystyle",
        }
    }
}

impl std::str::FromStr for Profile {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "cfamily" => Ok(Profile::CFamily),
            "gostyle" => Ok(Profile::GoStyle),
            "pystyle" => Ok(Profile::PyStyle),
            _ => Err(format!("unknown profile {s:?} (expected cfamily, gostyle or pystyle)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeclKind {
    Function,
    Method,
    Type,
    Interface,
    Constant,
    EntryPointCandidate,
}

impl DeclKind {
    pub fn is_callable(self) -> bool {
        matches!(self, DeclKind::Function | DeclKind::Method | DeclKind::EntryPointCandidate)
    }

    pub fn name(self) -> &'static str {
        match self {
            DeclKind::Function => "function",
            DeclKind::Method => "method",
            DeclKind::Type => "type",
            DeclKind::Interface => "interface",
            DeclKind::Constant => "constant",
            DeclKind::EntryPointCandidate => "entry_point_candidate",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Declaration {
    /// `path::name@line`.
    pub id: String,
    pub kind: DeclKind,
    pub name: String,
    /// Enclosing type, or the receiver type of a Go method.
    pub owner: Option<String>,
    pub path: String,
    pub signature_text: String,
    pub docstring: Option<String>,
    pub exported: bool,
    /// Inclusive 1-based line range.
    pub span: (usize, usize),
    pub has_body: bool,
    pub annotations: Vec<String>,
    pub outgoing_calls: Vec<String>,
}

impl Declaration {
    /// `Owner.name`, or the bare name for free functions.
    pub fn label(&self) -> String {
        match &self.owner {
            Some(o) => format!("{o}.{}", self.name),
            None => self.name.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CallTarget {
    Resolved(String),
    /// Several project declarations share the name; none is guessed.
    Ambiguous(Vec<String>),
    External,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CallEdge {
    pub caller: String,
    pub callee: String,
    pub target: CallTarget,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceFile {
    /// Relative to the scanned root, `/`-separated.
    pub path: String,
    pub line_count: usize,
    pub profile: Profile,
    #[serde(with = "class_letters")]
    pub line_classes: Vec<LineClass>,
}

impl SourceFile {
    pub fn count(&self, class: LineClass) -> usize {
        self.line_classes.iter().filter(|c| **c == class).count()
    }
}

mod class_letters {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::LineClass;

    pub fn serialize<S: Serializer>(v: &[LineClass], s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.iter().map(|c| c.letter()).collect::<String>())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<LineClass>, D::Error> {
        let s = String::deserialize(d)?;
        s.chars()
            .map(|c| LineClass::from_letter(c).ok_or_else(|| serde::de::Error::custom(format!("bad class letter {c:?}"))))
            .collect()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceModel {
    pub files: Vec<SourceFile>,
    pub declarations: Vec<Declaration>,
    pub call_edges: Vec<CallEdge>,
}

#[derive(Debug, thiserror::Error)]
pub enum ScanError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0} is not a text file")]
    Binary(String),
    #[error("source root {0} does not exist")]
    RootMissing(String),
    #[error("scan config: {0}")]
    Config(String),
}

#[derive(Serialize)]
#[serde(tag = "record", rename_all = "snake_case")]
enum Record<'a> {
    File(&'a SourceFile),
    Declaration(&'a Declaration),
    Call(&'a CallEdge),
}

impl SourceModel {
    pub fn declaration(&self, id: &str) -> Option<&Declaration> {
        self.declarations.iter().find(|d| d.id == id)
    }

    pub fn file(&self, path: &str) -> Option<&SourceFile> {
        self.files.iter().find(|f| f.path == path)
    }

    /// Line-delimited JSON: files, then declarations, then call edges.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        let records = self
            .files
            .iter()
            .map(Record::File)
            .chain(self.declarations.iter().map(Record::Declaration))
            .chain(self.call_edges.iter().map(Record::Call));
        for r in records {
            out.push_str(&serde_json::to_string(&r).expect("records serialize"));
            out.push('\n');
        }
        out
    }

    /// Merges fragments in path order and resolves call names project-wide.
    pub fn merge(fragments: Vec<SourceModel>) -> SourceModel {
        let mut files = Vec::new();
        let mut declarations = Vec::new();
        for f in fragments {
            files.extend(f.files);
            declarations.extend(f.declarations);
        }
        files.sort_by(|a: &SourceFile, b| a.path.cmp(&b.path));
        declarations.sort_by(|a: &Declaration, b| (&a.path, a.span.0, &a.name).cmp(&(&b.path, b.span.0, &b.name)));
        let call_edges = resolve_calls(&declarations);
        SourceModel {
            files,
            declarations,
            call_edges,
        }
    }
}

/// Unqualified-name resolution. Declarations with bodies win over bodiless
/// ones (interface methods); any remaining tie is left ambiguous.
fn resolve_calls(decls: &[Declaration]) -> Vec<CallEdge> {
    let mut by_name: BTreeMap<&str, Vec<&Declaration>> = BTreeMap::new();
    for d in decls.iter().filter(|d| d.kind.is_callable()) {
        by_name.entry(d.name.as_str()).or_default().push(d);
    }
    let mut edges = Vec::new();
    for d in decls {
        for callee in &d.outgoing_calls {
            let candidates = by_name.get(callee.as_str()).map(Vec::as_slice).unwrap_or(&[]);
            let bodied: Vec<&&Declaration> = candidates.iter().filter(|c| c.has_body).collect();
            let pick: Vec<&str> = if bodied.is_empty() {
                candidates.iter().map(|c| c.id.as_str()).collect()
            } else {
                bodied.iter().map(|c| c.id.as_str()).collect()
            };
            let target = match pick.as_slice() {
                [] => CallTarget::External,
                [one] => CallTarget::Resolved(one.to_string()),
                many => CallTarget::Ambiguous(many.iter().map(|s| s.to_string()).collect()),
            };
            edges.push(CallEdge {
                caller: d.id.clone(),
                callee: callee.clone(),
                target,
            });
        }
    }
    edges
}

/// Scans text already in memory; `path` is recorded verbatim.
pub fn scan_source(path: &str, text: &str, profile: Profile) -> SourceModel {
    let fs = scan::scan_text(path, text, profile);
    let file = SourceFile {
        path: path.to_string(),
        line_count: fs.classes.len(),
        profile,
        line_classes: fs.classes,
    };
    let call_edges = resolve_calls(&fs.declarations);
    SourceModel {
        files: vec![file],
        declarations: fs.declarations,
        call_edges,
    }
}

fn read_text(path: &Path) -> Result<String, ScanError> {
    let bytes = fs::read(path).map_err(|source| ScanError::Io {
        path: path.display().to_string(),
        source,
    })?;
    if bytes.iter().take(8192).any(|b| *b == 0) {
        return Err(ScanError::Binary(path.display().to_string()));
    }
    String::from_utf8(bytes).map_err(|_| ScanError::Binary(path.display().to_string()))
}

/// Scans one file into a model fragment.
pub fn scan_file(path: impl AsRef<Path>, profile: Profile) -> Result<SourceModel, ScanError> {
    let path = path.as_ref();
    let text = read_text(path)?;
    Ok(scan_source(&path.to_string_lossy().replace('\\', "/"), &text, profile))
}

/// Glob matcher for entry-point rules; `None` when no globs are configured
/// or a pattern is invalid (configs are validated on load).
pub fn build_entry_globs(patterns: &[String]) -> Option<globset::GlobSet> {
    if patterns.is_empty() {
        return None;
    }
    config::build_globs(patterns).ok()
}

/// Files under `root` selected by the config, as (relative path, profile).
pub fn select_files(root: &Path, config: &ScanConfig) -> Result<Vec<(String, PathBuf, Profile)>, ScanError> {
    if !root.exists() {
        return Err(ScanError::RootMissing(root.display().to_string()));
    }
    let (include, exclude) = config.file_filter()?;
    let mut out = Vec::new();
    for entry in WalkDir::new(root).sort_by_file_name() {
        let entry = entry.map_err(|e| ScanError::Io {
            path: e.path().map(|p| p.display().to_string()).unwrap_or_default(),
            source: e.into(),
        })?;
        if !entry.file_type().is_file() {
            continue;
        }
        let rel = entry
            .path()
            .strip_prefix(root)
            .unwrap_or(entry.path())
            .to_string_lossy()
            .replace('\\', "/");
        if !include.is_match(&rel) || exclude.is_match(&rel) {
            continue;
        }
        if let Some(profile) = config.profile_for(&rel) {
            out.push((rel, entry.path().to_path_buf(), profile));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

/// Scans every selected file under `root`. No matching files yields an empty
/// model rather than an error.
pub fn scan_project(root: impl AsRef<Path>, config: &ScanConfig) -> Result<SourceModel, ScanError> {
    let root = root.as_ref();
    let mut fragments = Vec::new();
    for (rel, full, profile) in select_files(root, config)? {
        let text = read_text(&full)?;
        fragments.push(scan_source(&rel, &text, profile));
    }
    Ok(SourceModel::merge(fragments))
}
