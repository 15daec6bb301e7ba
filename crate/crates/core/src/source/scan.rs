use std::sync::LazyLock;

use regex::Regex;

use super::classify::{classify_code, is_import, is_pure_py_string, split_annotations, LineClass, LineContext};
use super::lexer::{LexedLine, Lexer};
use super::{DeclKind, Declaration, Profile};

pub(crate) struct FileScan {
    pub classes: Vec<LineClass>,
    pub declarations: Vec<Declaration>,
}

pub(crate) fn scan_text(path: &str, text: &str, profile: Profile) -> FileScan {
    match profile {
        Profile::PyStyle => Indented::new(path).run(text),
        _ => Braced::new(path, profile).run(text),
    }
}

const MODIFIERS: &[&str] = &[
    "public", "private", "protected", "internal", "static", "final", "abstract", "sealed",
    "non-sealed", "synchronized", "native", "default", "async", "override", "readonly", "export",
    "declare", "virtual", "inline", "extern", "const", "unsafe", "partial", "typedef", "strictfp",
    "transient", "volatile", "get", "set",
];

const KEYWORDS: &[&str] = &[
    "if", "else", "elif", "for", "while", "do", "switch", "case", "return", "new", "throw",
    "catch", "try", "finally", "function", "typeof", "sizeof", "instanceof", "delete", "void",
    "await", "yield", "in", "of", "super", "this", "func", "go", "defer", "select", "range",
    "not", "and", "or", "lambda", "def", "class", "with", "assert", "except", "raise", "del",
    "elif", "import", "from", "as", "is", "struct", "interface", "type", "chan", "goto",
];

/// Words that start statements rather than typed declarations.
const STATEMENT_WORDS: &[&str] = &[
    "return", "new", "throw", "else", "case", "await", "yield", "delete", "typeof", "if", "for",
    "while", "do", "switch", "catch", "go", "defer", "goto",
];

fn is_keyword(w: &str) -> bool {
    KEYWORDS.contains(&w)
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_alphabetic() || c == '_' || c == '$')
        && chars.all(|c| c.is_alphanumeric() || c == '_' || c == '$')
}

static CALL: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"([A-Za-z_$][\w$]*)\s*\(").unwrap());

/// Names immediately followed by call syntax, in order of first use.
pub(crate) fn call_names(code: &str, into: &mut Vec<String>) {
    for cap in CALL.captures_iter(code) {
        let m = cap.get(1).unwrap();
        let before = code[..m.start()].chars().next_back();
        if matches!(before, Some('@') | Some('#')) || is_keyword(m.as_str()) {
            continue;
        }
        if !into.iter().any(|c| c == m.as_str()) {
            into.push(m.as_str().to_string());
        }
    }
}

fn collapse_ws(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Joins comment lines into docstring text, dropping decoration.
fn clean_doc(lines: &[String]) -> Option<String> {
    let parts: Vec<&str> = lines
        .iter()
        .map(|l| l.trim().trim_start_matches(['*', '/', '!']).trim())
        .filter(|l| !l.is_empty())
        .collect();
    (!parts.is_empty()).then(|| parts.join(" "))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BlockKind {
    Type,
    Body,
    Other,
}

#[derive(Debug)]
struct Block {
    kind: BlockKind,
    decl: Option<usize>,
}

#[derive(Debug)]
struct Header {
    decl: usize,
    text: String,
    paren: i32,
    block: BlockKind,
    lines: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ImportBlock {
    Paren,
    Brace,
}

struct Detected {
    kind: DeclKind,
    name: String,
    owner: Option<String>,
    modifiers: Vec<String>,
    block: BlockKind,
    /// Constants are single statements and never open a header.
    statement: bool,
    is_enum: bool,
}

static TYPE_RE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"^((?:[a-z-]+\s+)*)(class|interface|enum|record|struct|union|trait)\s+([A-Za-z_$][\w$]*)(.*)$").unwrap()
});
static TS_FUNC: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"^((?:(?:export|default|async|declare)\s+)*)function\*?\s*([A-Za-z_$][\w$]*)\s*[<(]").unwrap()
});
static TS_ARROW: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"^((?:export\s+)?)(?:const|let)\s+([A-Za-z_$][\w$]*)\s*(?::[^=]+)?=\s*(?:async\s+)?(?:\([^)]*\)|[A-Za-z_$][\w$]*)\s*(?::[^=]+?)?=>").unwrap()
});
static TOP_CONST: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^((?:export\s+)?)const\s+([A-Za-z_$][\w$]*)\s*[:=]").unwrap());
static GO_FUNC: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^func\s+([A-Za-z_]\w*)\s*[\[(]").unwrap());
static GO_METHOD: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"^func\s*\(\s*(?:[A-Za-z_]\w*\s+)?\*?\s*([A-Za-z_]\w*)(?:\[[^\]]*\])?\s*\)\s*([A-Za-z_]\w*)\s*[\[(]").unwrap()
});
static GO_TYPE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"^type\s+([A-Za-z_]\w*)(?:\[[^\]]*\])?\s+(struct|interface)?").unwrap()
});
static GO_CONST: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^const\s+([A-Za-z_]\w*)").unwrap());
static GO_CONST_BLOCK_ITEM: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^([A-Za-z_]\w*)\b").unwrap());

struct Braced<'a> {
    path: &'a str,
    profile: Profile,
    /// C/C++ have no export keyword: top-level non-static means visible.
    c_linkage: bool,
    decls: Vec<Declaration>,
    stack: Vec<Block>,
    header: Option<Header>,
    annotation_depth: i32,
    import_block: Option<ImportBlock>,
    go_const_block: bool,
    enum_decls: Vec<usize>,
    pending_doc: Vec<String>,
    pending_annotations: Vec<String>,
    /// Class of the line that opened a multi-line string.
    carry: LineClass,
    classes: Vec<LineClass>,
}

impl<'a> Braced<'a> {
    fn new(path: &'a str, profile: Profile) -> Self {
        let ext = path.rsplit('.').next().unwrap_or("");
        Braced {
            path,
            profile,
            c_linkage: matches!(ext, "c" | "h" | "cc" | "cpp" | "cxx" | "hpp" | "hh"),
            decls: Vec::new(),
            stack: Vec::new(),
            header: None,
            annotation_depth: 0,
            import_block: None,
            go_const_block: false,
            enum_decls: Vec::new(),
            pending_doc: Vec::new(),
            pending_annotations: Vec::new(),
            carry: LineClass::Logic,
            classes: Vec::new(),
        }
    }

    fn run(mut self, text: &str) -> FileScan {
        let mut lexer = Lexer::new(self.profile);
        for (idx, raw) in text.lines().enumerate() {
            let lexed = lexer.line(raw);
            let class = self.line(idx + 1, raw, &lexed);
            if lexed.ends_in_string && !lexed.starts_in_string {
                self.carry = class;
            }
            self.classes.push(class);
        }
        let last = self.classes.len().max(1);
        if let Some(h) = self.header.take() {
            self.finish_header(h, last, false);
        }
        while let Some(b) = self.stack.pop() {
            if let Some(d) = b.decl {
                self.decls[d].span.1 = last;
            }
        }
        FileScan {
            classes: self.classes,
            declarations: self.decls,
        }
    }

    fn container(&self) -> Option<usize> {
        self.stack.iter().rev().find(|b| b.kind == BlockKind::Type).and_then(|b| b.decl)
    }

    fn innermost_decl(&self) -> Option<usize> {
        self.stack.iter().rev().find_map(|b| b.decl)
    }

    fn member_scope(&self) -> bool {
        self.stack.last().is_some_and(|b| b.kind == BlockKind::Type)
    }

    fn in_body(&self) -> bool {
        self.stack.iter().any(|b| b.kind != BlockKind::Type)
    }

    fn ctx(&self) -> LineContext {
        LineContext {
            member_scope: self.member_scope(),
            ..LineContext::new(self.profile)
        }
    }

    fn line(&mut self, n: usize, raw: &str, lexed: &LexedLine) -> LineClass {
        if raw.trim().is_empty() {
            self.pending_doc.clear();
            return LineClass::Blank;
        }
        let code = lexed.code.trim();
        if lexed.starts_in_string {
            self.braces(n, code, None);
            return self.carry;
        }
        if code.is_empty() {
            self.pending_doc.push(lexed.comment.clone());
            return LineClass::Documentation;
        }
        let doc = std::mem::take(&mut self.pending_doc);

        if self.annotation_depth > 0 {
            self.annotation_depth += paren_delta(code);
            self.pending_doc = doc;
            return LineClass::Ceremony;
        }
        if let Some(kind) = self.import_block {
            let done = match kind {
                ImportBlock::Paren => code.starts_with(')'),
                ImportBlock::Brace => code.contains(" from ") || code.starts_with("} from") || code.ends_with(';'),
            };
            if done {
                self.import_block = None;
            }
            return LineClass::Ceremony;
        }
        if let Some(mut h) = self.header.take() {
            h.lines += 1;
            return match self.feed_header(&mut h, n, code) {
                Some(rest) => {
                    let rest = rest.to_string();
                    self.finish_header(h, n, true);
                    self.braces(n, &rest, None);
                    LineClass::Ceremony
                }
                None if self.profile == Profile::GoStyle && h.paren <= 0 => {
                    self.finish_header(h, n, false);
                    LineClass::Ceremony
                }
                None if h.lines > 12 => {
                    // Runaway header: treat as bodiless rather than swallow the file.
                    self.finish_header(h, n, false);
                    LineClass::Ceremony
                }
                None => {
                    self.header = Some(h);
                    LineClass::Ceremony
                }
            };
        }

        let (annotations, rest, depth) = split_annotations(code);
        if !annotations.is_empty() {
            self.pending_annotations.extend(annotations);
            if depth > 0 || rest.is_empty() {
                self.annotation_depth = depth;
                self.pending_doc = doc;
                return LineClass::Ceremony;
            }
        }
        let code = rest;
        let annotations = std::mem::take(&mut self.pending_annotations);

        if is_import(code, self.profile) {
            self.import_block = match self.profile {
                Profile::GoStyle if code.ends_with('(') => Some(ImportBlock::Paren),
                Profile::CFamily if code.contains('{') && !code.contains('}') => Some(ImportBlock::Brace),
                _ => None,
            };
            return LineClass::Ceremony;
        }
        if self.profile == Profile::GoStyle && self.stack.is_empty() && code.starts_with("const") && code.ends_with('(') {
            self.go_const_block = true;
            return LineClass::Ceremony;
        }
        if self.go_const_block && code.starts_with(')') {
            self.go_const_block = false;
            return LineClass::Ceremony;
        }

        let ctx = self.ctx();
        let Some(det) = self.detect(code) else {
            let class = classify_code(code, &ctx);
            let owner = self.innermost_decl();
            self.braces(n, code, owner);
            return class;
        };

        let container = self.container();
        let in_body = self.in_body();
        let exported = !in_body && self.exported(&det, container);
        let kind = if det.name == "main" && det.kind.is_callable() {
            DeclKind::EntryPointCandidate
        } else {
            det.kind
        };
        let owner = det.owner.or_else(|| match det.kind {
            DeclKind::Method | DeclKind::Constant => container.map(|c| self.decls[c].name.clone()),
            _ => None,
        });
        let idx = self.decls.len();
        if det.is_enum {
            self.enum_decls.push(idx);
        }
        self.decls.push(Declaration {
            id: format!("{}::{}@{}", self.path, det.name, n),
            kind,
            name: det.name,
            owner,
            path: self.path.to_string(),
            signature_text: String::new(),
            docstring: clean_doc(&doc),
            exported,
            span: (n, n),
            has_body: false,
            annotations,
            outgoing_calls: Vec::new(),
        });

        if det.statement {
            let sig = code.split('=').next().unwrap_or(code);
            self.decls[idx].signature_text = collapse_ws(sig.trim_end_matches(':').trim());
            let mut calls = Vec::new();
            call_names(code, &mut calls);
            self.decls[idx].outgoing_calls = calls;
            self.braces(n, code, Some(idx));
            return classify_code(code, &ctx);
        }

        let mut h = Header {
            decl: idx,
            text: String::new(),
            paren: 0,
            block: det.block,
            lines: 1,
        };
        match self.feed_header(&mut h, n, code) {
            Some(rest) => {
                let rest = rest.to_string();
                self.finish_header(h, n, true);
                self.braces(n, &rest, None);
            }
            None if self.profile == Profile::GoStyle && h.paren <= 0 => self.finish_header(h, n, false),
            None => self.header = Some(h),
        }
        LineClass::Ceremony
    }

    /// Appends header text up to the body opener or terminator. Returns the
    /// code after the terminator when the header ends on this line.
    fn feed_header<'c>(&mut self, h: &mut Header, n: usize, code: &'c str) -> Option<&'c str> {
        for (i, c) in code.char_indices() {
            match c {
                '(' => h.paren += 1,
                ')' => h.paren -= 1,
                '{' if h.paren <= 0 => {
                    self.push_text(h, &code[..i]);
                    self.decls[h.decl].has_body = true;
                    self.stack.push(Block {
                        kind: h.block,
                        decl: Some(h.decl),
                    });
                    return Some(&code[i + 1..]);
                }
                ';' if h.paren <= 0 => {
                    self.push_text(h, &code[..i]);
                    self.decls[h.decl].span.1 = n;
                    return Some(&code[i + 1..]);
                }
                _ => {}
            }
        }
        self.push_text(h, code);
        None
    }

    fn push_text(&self, h: &mut Header, s: &str) {
        if !h.text.is_empty() {
            h.text.push(' ');
        }
        h.text.push_str(s.trim());
    }

    fn finish_header(&mut self, h: Header, n: usize, terminated: bool) {
        let d = &mut self.decls[h.decl];
        d.signature_text = collapse_ws(h.text.trim_end_matches([';', '{']).trim());
        if !terminated {
            d.span.1 = n;
        }
    }

    /// Tracks `{`/`}` nesting; also records calls for the owning declaration.
    fn braces(&mut self, n: usize, code: &str, calls_for: Option<usize>) {
        if let Some(d) = calls_for {
            let mut calls = std::mem::take(&mut self.decls[d].outgoing_calls);
            call_names(code, &mut calls);
            self.decls[d].outgoing_calls = calls;
        }
        for c in code.chars() {
            match c {
                '{' => self.stack.push(Block {
                    kind: BlockKind::Other,
                    decl: None,
                }),
                '}' => {
                    if let Some(Block { decl: Some(d), .. }) = self.stack.pop() {
                        self.decls[d].span.1 = n;
                    }
                }
                _ => {}
            }
        }
    }

    fn exported(&self, det: &Detected, container: Option<usize>) -> bool {
        let has = |m: &str| det.modifiers.iter().any(|x| x == m);
        match self.profile {
            Profile::GoStyle => det.name.starts_with(|c: char| c.is_uppercase()),
            _ => match container {
                None if self.c_linkage => !has("static"),
                None => has("public") || has("export"),
                Some(c) => {
                    self.decls[c].exported
                        && !has("private")
                        && !has("protected")
                        && !det.name.starts_with('#')
                }
            },
        }
    }

    fn detect(&self, code: &str) -> Option<Detected> {
        match self.profile {
            Profile::GoStyle => self.detect_go(code),
            _ => self.detect_c(code),
        }
    }

    fn detect_go(&self, code: &str) -> Option<Detected> {
        if !self.stack.is_empty() {
            return None;
        }
        let simple = |kind, name: &str, block| Detected {
            kind,
            name: name.to_string(),
            owner: None,
            modifiers: Vec::new(),
            block,
            statement: false,
            is_enum: false,
        };
        if let Some(c) = GO_METHOD.captures(code) {
            let mut d = simple(DeclKind::Method, &c[2], BlockKind::Body);
            d.owner = Some(c[1].to_string());
            return Some(d);
        }
        if let Some(c) = GO_FUNC.captures(code) {
            return Some(simple(DeclKind::Function, &c[1], BlockKind::Body));
        }
        if let Some(c) = GO_TYPE.captures(code) {
            let kind = match c.get(2).map(|m| m.as_str()) {
                Some("interface") => DeclKind::Interface,
                _ => DeclKind::Type,
            };
            return Some(simple(kind, &c[1], BlockKind::Type));
        }
        let constant = if self.go_const_block {
            GO_CONST_BLOCK_ITEM.captures(code)
        } else {
            GO_CONST.captures(code)
        };
        constant.map(|c| Detected {
            statement: true,
            ..simple(DeclKind::Constant, &c[1], BlockKind::Other)
        })
    }

    fn detect_c(&self, code: &str) -> Option<Detected> {
        let member = self.member_scope();
        let top = self.stack.is_empty();
        let words = |s: &str| s.split_whitespace().map(str::to_string).collect::<Vec<_>>();

        if let Some(c) = TYPE_RE.captures(code) {
            let modifiers = words(&c[1]);
            let tail = c[4].trim_start();
            let c_pointer_fn = tail.starts_with('*') || tail.split('(').next().is_some_and(|p| is_ident(p.trim()) && tail.contains('('));
            if modifiers.iter().all(|m| MODIFIERS.contains(&m.as_str())) && !(c[2].eq("struct") && c_pointer_fn) {
                let kind = if &c[2] == "interface" || &c[2] == "trait" {
                    DeclKind::Interface
                } else {
                    DeclKind::Type
                };
                return Some(Detected {
                    kind,
                    name: c[3].to_string(),
                    owner: None,
                    modifiers,
                    block: BlockKind::Type,
                    statement: false,
                    is_enum: &c[2] == "enum",
                });
            }
        }
        if let Some(c) = TS_FUNC.captures(code).or_else(|| if top { TS_ARROW.captures(code) } else { None }) {
            return Some(Detected {
                kind: DeclKind::Function,
                name: c[2].to_string(),
                owner: None,
                modifiers: words(&c[1]),
                block: BlockKind::Body,
                statement: false,
                is_enum: false,
            });
        }
        if top {
            if let Some(c) = TOP_CONST.captures(code) {
                return Some(Detected {
                    kind: DeclKind::Constant,
                    name: c[2].to_string(),
                    owner: None,
                    modifiers: words(&c[1]),
                    block: BlockKind::Other,
                    statement: true,
                    is_enum: false,
                });
            }
        }
        if !(member || top) {
            return None;
        }
        if member {
            if let Some(d) = self.member_constant(code) {
                return Some(d);
            }
        }
        let paren = code.find('(')?;
        let prefix = &code[..paren];
        if prefix.contains('=') || prefix.contains('.') {
            return None;
        }
        let mut tokens = words(prefix);
        let mut name = tokens.pop()?;
        if let Some(lt) = name.find('<') {
            name.truncate(lt);
        }
        let name = name.trim_end_matches(['?', '!']).trim_start_matches('*').to_string();
        if !is_ident(&name) || is_keyword(&name) || tokens.first().is_some_and(|t| STATEMENT_WORDS.contains(&t.as_str())) {
            return None;
        }
        let (modifiers, rest): (Vec<String>, Vec<String>) =
            tokens.into_iter().partition(|t| MODIFIERS.contains(&t.as_str()));
        if top && rest.is_empty() {
            // A bare call statement, not a typed function definition.
            return None;
        }
        if member && rest.is_empty() {
            let enum_body = self.container().is_some_and(|c| self.enum_decls.contains(&c));
            let after = code[paren..].find(')').map(|i| code[paren + i + 1..].trim_start());
            if enum_body || after.is_some_and(|a| a.starts_with(',')) {
                return None;
            }
        }
        Some(Detected {
            kind: if member { DeclKind::Method } else { DeclKind::Function },
            name,
            owner: None,
            modifiers,
            block: BlockKind::Body,
            statement: false,
            is_enum: false,
        })
    }

    fn member_constant(&self, code: &str) -> Option<Detected> {
        let eq = code.find('=')?;
        let prefix = &code[..eq];
        if prefix.contains('(') {
            return None;
        }
        let mut tokens: Vec<String> = prefix.split_whitespace().map(str::to_string).collect();
        let name = tokens.pop()?;
        let name = name.trim_end_matches(':').to_string();
        let has = |m: &str| tokens.iter().any(|t| t == m);
        let constant = (has("static") && (has("final") || has("readonly"))) || has("const");
        (constant && is_ident(&name)).then(|| Detected {
            kind: DeclKind::Constant,
            name,
            owner: None,
            modifiers: tokens.iter().filter(|t| MODIFIERS.contains(&t.as_str())).cloned().collect(),
            block: BlockKind::Other,
            statement: true,
            is_enum: false,
        })
    }
}

fn paren_delta(code: &str) -> i32 {
    code.chars()
        .map(|c| match c {
            '(' => 1,
            ')' => -1,
            _ => 0,
        })
        .sum()
}

static PY_DEF: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^(?:async\s+)?def\s+([A-Za-z_]\w*)\s*[\[(]").unwrap());
static PY_CLASS: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^class\s+([A-Za-z_]\w*)").unwrap());
static PY_CONST: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"^([A-Z][A-Z0-9_]*)\s*(?::[^=]+)?=[^=]").unwrap());

struct PyBlock {
    indent: usize,
    decl: usize,
    class: bool,
}

struct PyHeader {
    decl: usize,
    indent: usize,
    class: bool,
    text: String,
    paren: i32,
}

struct DocCapture {
    decl: usize,
    raw: String,
}

/// Indentation-driven scanner for the Python-style profile.
struct Indented<'a> {
    path: &'a str,
    decls: Vec<Declaration>,
    stack: Vec<PyBlock>,
    header: Option<PyHeader>,
    paren: i32,
    annotation_depth: i32,
    import_block: bool,
    pending_annotations: Vec<String>,
    expect_doc: Option<usize>,
    doc: Option<DocCapture>,
    carry: LineClass,
    last_code_line: usize,
    classes: Vec<LineClass>,
}

fn indent_of(raw: &str) -> usize {
    raw.chars()
        .take_while(|c| c.is_whitespace())
        .map(|c| if c == '\t' { 8 } else { 1 })
        .sum()
}

fn strip_py_quotes(raw: &str) -> Option<String> {
    let t = raw.trim().trim_start_matches(['r', 'R', 'u', 'U', 'b', 'B', 'f', 'F']);
    let q = ["\"\"\"", "'''", "\"", "'"].into_iter().find(|q| t.starts_with(q))?;
    let inner = t[q.len()..].trim_end();
    let inner = inner.strip_suffix(q).unwrap_or(inner);
    let text = collapse_ws(inner);
    (!text.is_empty()).then_some(text)
}

impl<'a> Indented<'a> {
    fn new(path: &'a str) -> Self {
        Indented {
            path,
            decls: Vec::new(),
            stack: Vec::new(),
            header: None,
            paren: 0,
            annotation_depth: 0,
            import_block: false,
            pending_annotations: Vec::new(),
            expect_doc: None,
            doc: None,
            carry: LineClass::Logic,
            last_code_line: 0,
            classes: Vec::new(),
        }
    }

    fn run(mut self, text: &str) -> FileScan {
        let mut lexer = Lexer::new(Profile::PyStyle);
        for (idx, raw) in text.lines().enumerate() {
            let lexed = lexer.line(raw);
            let class = self.line(idx + 1, raw, &lexed);
            if lexed.ends_in_string && !lexed.starts_in_string {
                self.carry = class;
            }
            self.classes.push(class);
        }
        let last = self.last_code_line.max(1);
        if let Some(h) = self.header.take() {
            self.decls[h.decl].signature_text = collapse_ws(h.text.trim_end_matches(':'));
        }
        self.close_blocks(0, last);
        FileScan {
            classes: self.classes,
            declarations: self.decls,
        }
    }

    fn close_blocks(&mut self, indent: usize, end: usize) {
        while self.stack.last().is_some_and(|b| b.indent >= indent) {
            let b = self.stack.pop().unwrap();
            self.decls[b.decl].span.1 = end.max(self.decls[b.decl].span.0);
        }
    }

    fn line(&mut self, n: usize, raw: &str, lexed: &LexedLine) -> LineClass {
        if raw.trim().is_empty() {
            return LineClass::Blank;
        }
        let code = lexed.code.trim();
        if lexed.starts_in_string {
            self.last_code_line = n;
            if let Some(cap) = self.doc.as_mut() {
                cap.raw.push('\n');
                cap.raw.push_str(raw);
                if !lexed.ends_in_string {
                    self.finish_doc();
                }
            }
            self.paren += paren_delta(code);
            return self.carry;
        }
        if code.is_empty() {
            return LineClass::Documentation;
        }

        if self.annotation_depth > 0 {
            self.annotation_depth += paren_delta(code);
            return LineClass::Ceremony;
        }
        if self.import_block {
            if code.contains(')') {
                self.import_block = false;
            }
            return LineClass::Ceremony;
        }
        if let Some(mut h) = self.header.take() {
            h.paren += paren_delta(code);
            h.text.push(' ');
            h.text.push_str(code);
            if h.paren <= 0 && code.ends_with(':') {
                self.open_block(h);
            } else {
                self.header = Some(h);
            }
            return LineClass::Ceremony;
        }
        let continuation = self.paren > 0;
        self.paren = (self.paren + paren_delta(code)).max(0);
        let indent = indent_of(raw);
        if !continuation {
            let end = self.last_code_line;
            self.close_blocks(indent, end);
        }
        self.last_code_line = n;
        let ctx = LineContext {
            member_scope: !continuation && self.stack.last().is_some_and(|b| b.class),
            ..LineContext::new(Profile::PyStyle)
        };

        if let Some(decl) = self.expect_doc.take() {
            if is_pure_py_string(code) {
                self.doc = Some(DocCapture {
                    decl,
                    raw: raw.to_string(),
                });
                if !lexed.ends_in_string {
                    self.finish_doc();
                }
                return LineClass::Documentation;
            }
        }
        if continuation {
            let owner = self.stack.last().map(|b| b.decl);
            self.record_calls(owner, code);
            return classify_code(code, &ctx);
        }

        let (annotations, rest, depth) = split_annotations(code);
        if !annotations.is_empty() {
            self.pending_annotations.extend(annotations);
            self.paren = 0;
            self.annotation_depth = depth;
            if rest.is_empty() || depth > 0 {
                return LineClass::Ceremony;
            }
        }
        if is_import(code, Profile::PyStyle) {
            self.import_block = code.contains('(') && !code.contains(')');
            self.paren = 0;
            return LineClass::Ceremony;
        }

        let def = PY_DEF.captures(code).map(|c| (c[1].to_string(), false));
        let class = PY_CLASS.captures(code).map(|c| (c[1].to_string(), true));
        if let Some((name, is_class)) = def.or(class) {
            self.paren = 0;
            let container = self.stack.last().filter(|b| b.class).map(|b| b.decl);
            let in_function = self.stack.iter().any(|b| !b.class);
            let kind = match (is_class, container) {
                (true, _) => DeclKind::Type,
                _ if name == "main" => DeclKind::EntryPointCandidate,
                (false, Some(_)) => DeclKind::Method,
                (false, None) => DeclKind::Function,
            };
            let exported = !in_function
                && !name.starts_with('_')
                && container.is_none_or(|c| self.decls[c].exported);
            let idx = self.decls.len();
            self.decls.push(Declaration {
                id: format!("{}::{}@{}", self.path, name, n),
                kind,
                owner: container.map(|c| self.decls[c].name.clone()),
                name,
                path: self.path.to_string(),
                signature_text: String::new(),
                docstring: None,
                exported,
                span: (n, n),
                has_body: true,
                annotations: std::mem::take(&mut self.pending_annotations),
                outgoing_calls: Vec::new(),
            });
            let h = PyHeader {
                decl: idx,
                indent,
                class: is_class,
                text: code.to_string(),
                paren: paren_delta(code),
            };
            match (h.paren <= 0, code.ends_with(':')) {
                (true, true) => self.open_block(h),
                // One-line body such as `def f(): pass`.
                (true, false) => {
                    self.decls[idx].signature_text = collapse_ws(code.split_once("):").map_or(code, |(s, _)| s));
                    if code.contains("):") {
                        self.decls[idx].signature_text.push(')');
                    }
                }
                _ => self.header = Some(h),
            }
            return LineClass::Ceremony;
        }
        self.pending_annotations.clear();

        if indent == 0 {
            if let Some(c) = PY_CONST.captures(code) {
                let name = c[1].to_string();
                let sig = code.split('=').next().unwrap_or(code);
                let mut calls = Vec::new();
                call_names(code, &mut calls);
                self.decls.push(Declaration {
                    id: format!("{}::{}@{}", self.path, name, n),
                    kind: DeclKind::Constant,
                    exported: !name.starts_with('_'),
                    name,
                    owner: None,
                    path: self.path.to_string(),
                    signature_text: collapse_ws(sig),
                    docstring: None,
                    span: (n, n),
                    has_body: false,
                    annotations: Vec::new(),
                    outgoing_calls: calls,
                });
                return classify_code(code, &ctx);
            }
        }
        let owner = self.stack.last().map(|b| b.decl);
        self.record_calls(owner, code);
        classify_code(code, &ctx)
    }

    fn record_calls(&mut self, owner: Option<usize>, code: &str) {
        if let Some(d) = owner {
            let mut calls = std::mem::take(&mut self.decls[d].outgoing_calls);
            call_names(code, &mut calls);
            self.decls[d].outgoing_calls = calls;
        }
    }

    fn open_block(&mut self, h: PyHeader) {
        self.decls[h.decl].signature_text = collapse_ws(h.text.trim_end_matches(':'));
        self.stack.push(PyBlock {
            indent: h.indent,
            decl: h.decl,
            class: h.class,
        });
        self.expect_doc = Some(h.decl);
    }

    fn finish_doc(&mut self) {
        if let Some(cap) = self.doc.take() {
            self.decls[cap.decl].docstring = strip_py_quotes(&cap.raw);
        }
    }
}
