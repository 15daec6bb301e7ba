use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};

use super::lexer::Lexer;
use super::Profile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LineClass {
    Ceremony,
    Logic,
    Documentation,
    Blank,
}

impl LineClass {
    pub const ALL: [LineClass; 4] = [
        LineClass::Ceremony,
        LineClass::Logic,
        LineClass::Documentation,
        LineClass::Blank,
    ];

    pub fn letter(self) -> char {
        match self {
            LineClass::Ceremony => 'C',
            LineClass::Logic => 'L',
            LineClass::Documentation => 'D',
            LineClass::Blank => 'B',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        LineClass::ALL.into_iter().find(|l| l.letter() == c)
    }
}

/// Multi-line state the caller tracks for the line being classified.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LineContext {
    pub profile: Profile,
    /// Inside a block comment or docstring that began on an earlier line.
    pub inside_docstring: bool,
    /// Continuation of a declaration header.
    pub inside_signature: bool,
    /// Continuation of an annotation/decorator argument list.
    pub inside_annotation: bool,
    pub inside_import_block: bool,
    /// Directly inside a type body (fields and member declarations).
    pub member_scope: bool,
}

impl LineContext {
    pub fn new(profile: Profile) -> Self {
        LineContext {
            profile,
            inside_docstring: false,
            inside_signature: false,
            inside_annotation: false,
            inside_import_block: false,
            member_scope: false,
        }
    }
}

static PUNCT_ONLY: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^[\s{}()\[\];,]*$").unwrap());
static C_IMPORT: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^(import\b|package\b|using\s|#\s*(include|import|pragma)\b|export\s.*\bfrom\s)").unwrap());
static GO_IMPORT: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^(import|package)\b").unwrap());
static PY_IMPORT: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^(import|from)\s").unwrap());
static C_TRIVIAL_RETURN: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^return(\s+(this\.)?[A-Za-z_$][\w$]*)?\s*;$").unwrap());
static TRIVIAL_RETURN: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^return(\s+((this|self)\.)?[A-Za-z_]\w*)?$").unwrap());
static FIELD_ASSIGN: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^(this|self)\.[A-Za-z_$][\w$]*\s*=\s*[A-Za-z_$][\w$]*\s*;?$").unwrap());
static PURE_PY_STRING: LazyLock<Regex> = LazyLock::new(|| Regex::new(r#"^[rRuUbBfF]{0,2}["']+$"#).unwrap());

/// True for import/package/include lines of the profile.
pub(crate) fn is_import(code: &str, profile: Profile) -> bool {
    match profile {
        Profile::CFamily => C_IMPORT.is_match(code),
        Profile::GoStyle => GO_IMPORT.is_match(code),
        Profile::PyStyle => PY_IMPORT.is_match(code),
    }
}

/// A Python statement consisting of nothing but a string literal.
pub(crate) fn is_pure_py_string(code: &str) -> bool {
    PURE_PY_STRING.is_match(code)
}

/// Consumes leading `@name(args)` annotations. Returns the names, the
/// remaining code, and the unclosed paren depth when arguments continue on
/// the next line.
pub(crate) fn split_annotations(code: &str) -> (Vec<String>, &str, i32) {
    let mut names = Vec::new();
    let mut rest = code.trim_start();
    while let Some(after_at) = rest.strip_prefix('@') {
        let name_len = after_at
            .find(|c: char| !(c.is_alphanumeric() || c == '_' || c == '.' || c == '$'))
            .unwrap_or(after_at.len());
        if name_len == 0 {
            break;
        }
        names.push(after_at[..name_len].to_string());
        let mut tail = after_at[name_len..].trim_start();
        if tail.starts_with('(') {
            let mut depth = 0;
            let mut end = None;
            for (i, c) in tail.char_indices() {
                match c {
                    '(' => depth += 1,
                    ')' => {
                        depth -= 1;
                        if depth == 0 {
                            end = Some(i + 1);
                            break;
                        }
                    }
                    _ => {}
                }
            }
            match end {
                Some(e) => tail = &tail[e..],
                None => return (names, "", depth),
            }
        }
        rest = tail.trim_start();
    }
    (names, rest, 0)
}

/// Classifies one physical line. Declaration headers are recognised by the
/// scanner, which reports them as signature lines.
pub fn classify_line(line: &str, ctx: &LineContext) -> LineClass {
    if line.trim().is_empty() {
        return LineClass::Blank;
    }
    if ctx.inside_docstring {
        return LineClass::Documentation;
    }
    let lexed = Lexer::new(ctx.profile).line(line);
    classify_code(lexed.code.trim(), ctx)
}

/// Rule table over a line's code with comments removed and string contents
/// emptied. An empty code part means a comment-only line.
pub(crate) fn classify_code(code: &str, ctx: &LineContext) -> LineClass {
    if code.is_empty() {
        return LineClass::Documentation;
    }
    if ctx.inside_signature || ctx.inside_annotation || ctx.inside_import_block {
        return LineClass::Ceremony;
    }
    if ctx.profile == Profile::PyStyle && is_pure_py_string(code) {
        return LineClass::Documentation;
    }
    let ceremony = is_import(code, ctx.profile)
        || (code.starts_with('@') && {
            let (names, rest, _) = split_annotations(code);
            !names.is_empty() && rest.is_empty()
        })
        || PUNCT_ONLY.is_match(code)
        || match ctx.profile {
            Profile::CFamily => C_TRIVIAL_RETURN.is_match(code),
            _ => TRIVIAL_RETURN.is_match(code),
        }
        || FIELD_ASSIGN.is_match(code)
        || (ctx.member_scope && !code.contains('(') && !code.contains('='))
        || (ctx.profile == Profile::PyStyle && (code == "pass" || code == "..."));
    if ceremony {
        LineClass::Ceremony
    } else {
        LineClass::Logic
    }
}
