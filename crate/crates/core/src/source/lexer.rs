use super::Profile;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Delim {
    Double,
    Single,
    /// TS template literal (escapes) or Go raw string (no escapes).
    Backtick,
    TripleDouble,
    TripleSingle,
}

impl Delim {
    fn text(self) -> &'static str {
        match self {
            Delim::Double => "\"",
            Delim::Single => "'",
            Delim::Backtick => "`",
            Delim::TripleDouble => "\"\"\"",
            Delim::TripleSingle => "'''",
        }
    }

    fn spans_lines(self) -> bool {
        !matches!(self, Delim::Double | Delim::Single)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    Code,
    BlockComment,
    Str(Delim),
}

/// One physical line split into code (string contents dropped, delimiters
/// kept) and comment text.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LexedLine {
    pub code: String,
    pub comment: String,
    pub starts_in_comment: bool,
    pub starts_in_string: bool,
    pub ends_in_string: bool,
}

/// Line-at-a-time lexer carrying comment/string state across lines.
#[derive(Debug, Clone)]
pub struct Lexer {
    profile: Profile,
    mode: Mode,
}

impl Lexer {
    pub fn new(profile: Profile) -> Self {
        Lexer {
            profile,
            mode: Mode::Code,
        }
    }

    pub fn in_comment(&self) -> bool {
        self.mode == Mode::BlockComment
    }

    pub fn line(&mut self, raw: &str) -> LexedLine {
        let mut out = LexedLine {
            starts_in_comment: self.mode == Mode::BlockComment,
            starts_in_string: matches!(self.mode, Mode::Str(_)),
            ..Default::default()
        };
        let chars: Vec<char> = raw.chars().collect();
        let at = |i: usize| chars.get(i).copied();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            match self.mode {
                Mode::BlockComment => {
                    if c == '*' && at(i + 1) == Some('/') {
                        self.mode = Mode::Code;
                        i += 2;
                    } else {
                        out.comment.push(c);
                        i += 1;
                    }
                }
                Mode::Str(d) => {
                    let escapes = !(d == Delim::Backtick && self.profile == Profile::GoStyle);
                    if escapes && c == '\\' {
                        i += 2;
                        continue;
                    }
                    let close = d.text();
                    if raw[byte_offset(&chars, i)..].starts_with(close) {
                        out.code.push_str(close);
                        i += close.chars().count();
                        self.mode = Mode::Code;
                    } else {
                        i += 1;
                    }
                }
                Mode::Code => {
                    let rest = &raw[byte_offset(&chars, i)..];
                    match self.profile {
                        Profile::PyStyle if c == '#' => {
                            out.comment.push_str(&rest[1..]);
                            break;
                        }
                        Profile::CFamily | Profile::GoStyle if rest.starts_with("//") => {
                            out.comment.push_str(&rest[2..]);
                            break;
                        }
                        Profile::CFamily | Profile::GoStyle if rest.starts_with("/*") => {
                            self.mode = Mode::BlockComment;
                            i += 2;
                            continue;
                        }
                        _ => {}
                    }
                    let delim = if rest.starts_with("\"\"\"")
                        && matches!(self.profile, Profile::PyStyle | Profile::CFamily)
                    {
                        // Java text blocks share the Python spelling.
                        Some(Delim::TripleDouble)
                    } else if rest.starts_with("'''") && self.profile == Profile::PyStyle {
                        Some(Delim::TripleSingle)
                    } else {
                        match c {
                            '"' => Some(Delim::Double),
                            '\'' => Some(Delim::Single),
                            '`' if self.profile != Profile::PyStyle => Some(Delim::Backtick),
                            _ => None,
                        }
                    };
                    match delim {
                        Some(d) => {
                            out.code.push_str(d.text());
                            i += d.text().chars().count();
                            self.mode = Mode::Str(d);
                        }
                        None => {
                            out.code.push(c);
                            i += 1;
                        }
                    }
                }
            }
        }
        if let Mode::Str(d) = self.mode {
            if !d.spans_lines() {
                // Unterminated single-line literal: recover at end of line.
                self.mode = Mode::Code;
            }
        }
        out.ends_in_string = matches!(self.mode, Mode::Str(_));
        out
    }
}

fn byte_offset(chars: &[char], idx: usize) -> usize {
    chars[..idx].iter().map(|c| c.len_utf8()).sum()
}
