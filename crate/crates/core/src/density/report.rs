use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{delta_vs_baseline, format_delta, session_to_file_ratio, CeremonyReport, DensityReport, Scoped};
use super::{Fraction, SessionRecord};

pub const REPORT_TITLE: &str = "# Semantic density report";

/// Token statistics of one log file, keyed by its format letter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileStatRecord {
    pub format: String,
    pub tokens: usize,
    pub lines: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReportInputs {
    pub file_stats: Vec<FileStatRecord>,
    pub sessions: Vec<SessionRecord>,
    pub ceremony: Vec<Scoped<CeremonyReport>>,
    pub density: Vec<Scoped<DensityReport>>,
}

fn long_name(format: &str) -> String {
    match format {
        "A" => "A — Human-Readable".into(),
        "B" => "B — Structured".into(),
        "C" => "C — Compressed".into(),
        "D" => "D — C + Decoder Tool".into(),
        other => other.into(),
    }
}

fn short_name(format: char) -> String {
    match format {
        'A' => "A (Human)".into(),
        'B' => "B (Struct.)".into(),
        'C' => "C (Compr.)".into(),
        'D' => "D (C+Tool)".into(),
        other => other.to_string(),
    }
}

fn thousands(n: impl Into<u64>) -> String {
    let digits = n.into().to_string();
    let mut out = String::new();
    for (i, c) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i) % 3 == 0 {
            out.push(',');
        }
        out.push(c);
    }
    out
}

fn kilo(n: u64) -> String {
    if n < 1000 {
        n.to_string()
    } else {
        format!("{:.1}k", n as f64 / 1000.0)
    }
}

fn duration(secs: u64) -> String {
    let (h, m, s) = (secs / 3600, secs / 60 % 60, secs % 60);
    if h > 0 {
        format!("{h}h {m:02}m {s:02}s")
    } else if m > 0 {
        format!("{m}m {s:02}s")
    } else {
        format!("{s}s")
    }
}

const DASH: &str = "—";

#[derive(Clone, Copy)]
enum Align {
    Left,
    Right,
}

/// Markdown table with cells padded to their column width.
fn table(out: &mut String, headers: &[String], aligns: &[Align], rows: &[Vec<String>]) {
    let width = |i: usize| {
        rows.iter()
            .map(|r| r[i].chars().count())
            .chain([headers[i].chars().count(), 3])
            .max()
            .unwrap()
    };
    let widths: Vec<usize> = (0..headers.len()).map(width).collect();
    let line = |out: &mut String, cells: &[String]| {
        out.push('|');
        for ((cell, w), a) in cells.iter().zip(&widths).zip(aligns) {
            let pad = " ".repeat(w - cell.chars().count());
            match a {
                Align::Left => {
                    let _ = write!(out, " {cell}{pad} |");
                }
                Align::Right => {
                    let _ = write!(out, " {pad}{cell} |");
                }
            }
        }
        out.push('\n');
    };
    line(out, headers);
    out.push('|');
    for (w, a) in widths.iter().zip(aligns) {
        match a {
            Align::Left => {
                let _ = write!(out, " :{} |", "-".repeat(w - 1));
            }
            Align::Right => {
                let _ = write!(out, " {}: |", "-".repeat(w - 1));
            }
        }
    }
    out.push('\n');
    for r in rows {
        line(out, r);
    }
}

fn delta_cell(x: u64, base: Option<u64>) -> String {
    match base {
        None => DASH.into(),
        Some(b) => delta_vs_baseline(x as usize, b as usize).map_or("n/a".into(), format_delta),
    }
}

fn file_table(out: &mut String, stats: &[FileStatRecord]) {
    let base = &stats[0];
    let headers = ["Format", "Tokens", "Lines", "Tok/Line", &format!("Δ vs. {}", base.format)].map(String::from);
    let rows: Vec<Vec<String>> = stats
        .iter()
        .enumerate()
        .map(|(i, s)| {
            vec![
                long_name(&s.format),
                thousands(s.tokens as u64),
                thousands(s.lines as u64),
                if s.lines == 0 {
                    DASH.into()
                } else {
                    format!("{:.2}", s.tokens as f64 / s.lines as f64)
                },
                delta_cell(s.tokens as u64, (i > 0).then_some(base.tokens as u64)),
            ]
        })
        .collect();
    let mut aligns = vec![Align::Right; 5];
    aligns[0] = Align::Left;
    table(out, &headers, &aligns, &rows);
}

/// Shared denominator of the present fractions, if there is exactly one.
fn common_denominator(values: &[Option<Fraction>]) -> Option<u32> {
    let mut dens = values.iter().flatten().map(|f| f.denominator);
    let first = dens.next()?;
    dens.all(|d| d == first).then_some(first)
}

fn session_table(out: &mut String, sessions: &[SessionRecord]) {
    let mut headers = vec!["Metric".to_string()];
    headers.extend(sessions.iter().map(|s| short_name(s.format)));
    let mut rows = Vec::new();
    let mut row = |label: String, cells: Vec<Option<String>>| {
        if cells.iter().any(Option::is_some) {
            let mut r = vec![label];
            r.extend(cells.into_iter().map(|c| c.unwrap_or_else(|| DASH.into())));
            rows.push(r);
        }
    };
    row(
        "Session tokens (Messages)".into(),
        sessions.iter().map(|s| Some(kilo(s.session_tokens))).collect(),
    );
    row(
        "Wall-clock time".into(),
        sessions.iter().map(|s| s.wall_clock_s.map(duration)).collect(),
    );
    row(
        "Tool calls".into(),
        sessions.iter().map(|s| s.tool_calls.map(|t| t.to_string())).collect(),
    );
    for (label, values) in [
        ("Correctness", sessions.iter().map(|s| s.correctness).collect::<Vec<_>>()),
        ("HIGH confidence", sessions.iter().map(|s| s.confidence_high).collect()),
    ] {
        let label = match (label, common_denominator(&values)) {
            ("Correctness", Some(d)) => format!("Correctness (of {d})"),
            _ => label.to_string(),
        };
        row(label, values.iter().map(|v| v.map(|f| f.to_string())).collect());
    }
    let mut aligns = vec![Align::Right; headers.len()];
    aligns[0] = Align::Left;
    table(out, &headers, &aligns, &rows);
}

fn ratio_table(out: &mut String, sessions: &[SessionRecord]) {
    let base = &sessions[0];
    let headers = [
        "Format",
        "Session tokens",
        "Baseline",
        "File tokens",
        "Session/File",
        &format!("Δ session vs. {}", base.format),
        &format!("Δ file vs. {}", base.format),
    ]
    .map(String::from);
    let rows: Vec<Vec<String>> = sessions
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let base = (i > 0).then_some(base);
            vec![
                short_name(s.format),
                thousands(s.session_tokens),
                thousands(s.baseline_tokens),
                thousands(s.file_tokens),
                session_to_file_ratio(s).map_or("n/a".into(), |r| format!("{r:.1}×")),
                delta_cell(s.session_tokens, base.map(|b| b.session_tokens)),
                delta_cell(s.file_tokens, base.map(|b| b.file_tokens)),
            ]
        })
        .collect();
    let mut aligns = vec![Align::Right; headers.len()];
    aligns[0] = Align::Left;
    table(out, &headers, &aligns, &rows);
}

/// Scopes in first-seen order, pairing ceremony and density reports.
fn scopes(inputs: &ReportInputs) -> Vec<(String, Option<CeremonyReport>, Option<DensityReport>)> {
    let mut out: Vec<(String, Option<CeremonyReport>, Option<DensityReport>)> = Vec::new();
    for c in &inputs.ceremony {
        match out.iter_mut().find(|(s, _, _)| *s == c.scope) {
            Some(e) => e.1 = Some(c.report),
            None => out.push((c.scope.clone(), Some(c.report), None)),
        }
    }
    for d in &inputs.density {
        match out.iter_mut().find(|(s, _, _)| *s == d.scope) {
            Some(e) => e.2 = Some(d.report),
            None => out.push((d.scope.clone(), None, Some(d.report))),
        }
    }
    out
}

fn density_table(out: &mut String, inputs: &ReportInputs) {
    let headers = [
        "Scope",
        "Ceremony",
        "Logic",
        "Docs",
        "Blank",
        "Ceremony:Logic",
        "Meaning tokens",
        "Total tokens",
        "Density",
    ]
    .map(String::from);
    let dash = || DASH.to_string();
    let rows: Vec<Vec<String>> = scopes(inputs)
        .into_iter()
        .map(|(scope, c, d)| {
            let mut r = vec![scope];
            match c {
                Some(c) => r.extend([
                    thousands(c.ceremony_lines as u64),
                    thousands(c.logic_lines as u64),
                    thousands(c.documentation_lines as u64),
                    thousands(c.blank_lines as u64),
                    c.ratio_display(),
                ]),
                None => r.extend((0..5).map(|_| dash())),
            }
            match d {
                Some(d) => r.extend([
                    thousands(d.meaning_tokens as u64),
                    thousands(d.total_tokens as u64),
                    format!("{:.1}%", d.density * 100.0),
                ]),
                None => r.extend((0..3).map(|_| dash())),
            }
            r
        })
        .collect();
    let mut aligns = vec![Align::Right; headers.len()];
    aligns[0] = Align::Left;
    table(out, &headers, &aligns, &rows);
}

/// Markdown document; sections whose inputs are absent are left out.
pub fn render_report(inputs: &ReportInputs) -> String {
    let mut out = format!("{REPORT_TITLE}\n");
    if !inputs.file_stats.is_empty() {
        out.push_str("\n## File-level token counts (cl100k_base)\n\n");
        file_table(&mut out, &inputs.file_stats);
    }
    if !inputs.sessions.is_empty() {
        out.push_str("\n## Session-level results\n\n");
        session_table(&mut out, &inputs.sessions);
        out.push_str("\n## Session-to-file ratios\n\n");
        ratio_table(&mut out, &inputs.sessions);
    }
    if !inputs.ceremony.is_empty() || !inputs.density.is_empty() {
        out.push_str("\n## Ceremony and semantic density\n\n");
        density_table(&mut out, inputs);
    }
    out
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

fn csv_text(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
}

/// Raw (unformatted) values of each present table as `(file name, csv)`.
pub fn render_csv(inputs: &ReportInputs) -> Vec<(&'static str, String)> {
    let mut files = Vec::new();
    if let Some(base) = inputs.file_stats.first() {
        let rows = inputs
            .file_stats
            .iter()
            .map(|s| {
                vec![
                    s.format.clone(),
                    s.tokens.to_string(),
                    s.lines.to_string(),
                    if s.lines == 0 {
                        String::new()
                    } else {
                        format!("{:.2}", s.tokens as f64 / s.lines as f64)
                    },
                    opt(delta_vs_baseline(s.tokens, base.tokens).ok().map(|d| format!("{d:.1}"))),
                ]
            })
            .collect();
        files.push((
            "file_tokens.csv",
            csv_text(&["format", "tokens", "lines", "tokens_per_line", "delta_vs_first_pct"], rows),
        ));
    }
    if let Some(base) = inputs.sessions.first() {
        let rows = inputs
            .sessions
            .iter()
            .map(|s| {
                vec![
                    s.format.to_string(),
                    s.session_tokens.to_string(),
                    s.baseline_tokens.to_string(),
                    s.file_tokens.to_string(),
                    opt(session_to_file_ratio(s).ok().map(|r| format!("{r:.1}"))),
                    opt(delta_vs_baseline(s.session_tokens as usize, base.session_tokens as usize)
                        .ok()
                        .map(|d| format!("{d:.1}"))),
                    opt(s.wall_clock_s),
                    opt(s.tool_calls),
                    opt(s.correctness),
                    opt(s.confidence_high),
                ]
            })
            .collect();
        files.push((
            "sessions.csv",
            csv_text(
                &[
                    "format",
                    "session_tokens",
                    "baseline_tokens",
                    "file_tokens",
                    "session_to_file",
                    "session_delta_vs_first_pct",
                    "wall_clock_s",
                    "tool_calls",
                    "correctness",
                    "confidence_high",
                ],
                rows,
            ),
        ));
    }
    let scoped = scopes(inputs);
    if !scoped.is_empty() {
        let rows = scoped
            .into_iter()
            .map(|(scope, c, d)| {
                vec![
                    scope,
                    opt(c.map(|c| c.ceremony_lines)),
                    opt(c.map(|c| c.logic_lines)),
                    opt(c.map(|c| c.documentation_lines)),
                    opt(c.map(|c| c.blank_lines)),
                    opt(c.and_then(|c| c.ratio).map(|r| format!("{r:.2}"))),
                    opt(d.map(|d| d.meaning_tokens)),
                    opt(d.map(|d| d.total_tokens)),
                    opt(d.map(|d| format!("{:.4}", d.density))),
                ]
            })
            .collect();
        files.push((
            "density.csv",
            csv_text(
                &[
                    "scope",
                    "ceremony_lines",
                    "logic_lines",
                    "documentation_lines",
                    "blank_lines",
                    "ceremony_logic_ratio",
                    "meaning_tokens",
                    "total_tokens",
                    "density",
                ],
                rows,
            ),
        ));
    }
    files
}
