//! Ceremony-to-logic ratio, semantic density, token deltas, session ratios
//! and the report tables built from them.

mod report;
mod sessions;

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::source::{LineClass, SourceFile, SourceModel};
use crate::tokenizer::Vocabulary;

pub use report::{render_csv, render_report, FileStatRecord, ReportInputs};
pub use sessions::{
    ingest_session_records, parse_session_records, Fraction, SessionError, SessionRecord, ToolCalls,
};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum DensityError {
    #[error("baseline token count is zero")]
    ZeroBaseline,
    #[error("file token count is zero")]
    ZeroFileTokens,
}

#[derive(Debug, thiserror::Error)]
#[error("cannot read {path}: {source}")]
pub struct SourceReadError {
    pub path: String,
    #[source]
    pub source: std::io::Error,
}

/// Line counts per class over a scope.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "CeremonyCounts")]
pub struct CeremonyReport {
    pub ceremony_lines: usize,
    pub logic_lines: usize,
    pub documentation_lines: usize,
    pub blank_lines: usize,
    /// Ceremony lines per logic line; `None` when there is no logic.
    pub ratio: Option<f64>,
}

/// Wire form; the ratio is always recomputed from the counts.
#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CeremonyCounts {
    ceremony_lines: usize,
    logic_lines: usize,
    documentation_lines: usize,
    blank_lines: usize,
    #[serde(default, rename = "ratio")]
    _ratio: Option<f64>,
}

impl From<CeremonyCounts> for CeremonyReport {
    fn from(c: CeremonyCounts) -> Self {
        CeremonyReport::from_counts(c.ceremony_lines, c.logic_lines, c.documentation_lines, c.blank_lines)
    }
}

impl CeremonyReport {
    pub fn from_counts(ceremony: usize, logic: usize, documentation: usize, blank: usize) -> Self {
        CeremonyReport {
            ceremony_lines: ceremony,
            logic_lines: logic,
            documentation_lines: documentation,
            blank_lines: blank,
            ratio: (logic > 0).then(|| ceremony as f64 / logic as f64),
        }
    }

    pub fn total_lines(&self) -> usize {
        self.ceremony_lines + self.logic_lines + self.documentation_lines + self.blank_lines
    }

    /// Ratio to one decimal, or `undefined`.
    pub fn ratio_display(&self) -> String {
        self.ratio.map_or_else(|| "undefined".into(), |r| format!("{r:.1}"))
    }

    fn merge(self, other: CeremonyReport) -> Self {
        CeremonyReport::from_counts(
            self.ceremony_lines + other.ceremony_lines,
            self.logic_lines + other.logic_lines,
            self.documentation_lines + other.documentation_lines,
            self.blank_lines + other.blank_lines,
        )
    }
}

pub fn ceremony_ratio(classes: impl IntoIterator<Item = LineClass>) -> CeremonyReport {
    let mut counts = [0usize; 4];
    for c in classes {
        counts[c as usize] += 1;
    }
    CeremonyReport::from_counts(counts[0], counts[1], counts[2], counts[3])
}

/// Files whose path equals `scope` or lies below it; `None` or `""` is the
/// whole project.
fn in_scope<'m>(model: &'m SourceModel, scope: Option<&'m str>) -> impl Iterator<Item = &'m SourceFile> {
    let scope = scope.map(|s| s.trim_end_matches('/')).filter(|s| !s.is_empty());
    model.files.iter().filter(move |f| match scope {
        None => true,
        Some(s) => f.path == s || f.path.strip_prefix(s).is_some_and(|r| r.starts_with('/')),
    })
}

/// Aggregated over a file, a directory (module) or the whole project.
pub fn ceremony_for(model: &SourceModel, scope: Option<&str>) -> CeremonyReport {
    in_scope(model, scope)
        .map(|f| ceremony_ratio(f.line_classes.iter().copied()))
        .fold(CeremonyReport::default(), CeremonyReport::merge)
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "DensityCounts")]
pub struct DensityReport {
    /// Tokens on logic and documentation lines.
    pub meaning_tokens: usize,
    pub total_tokens: usize,
    pub density: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DensityCounts {
    meaning_tokens: usize,
    total_tokens: usize,
    #[serde(default, rename = "density")]
    _density: Option<f64>,
}

impl From<DensityCounts> for DensityReport {
    fn from(c: DensityCounts) -> Self {
        DensityReport::from_counts(c.meaning_tokens.min(c.total_tokens), c.total_tokens)
    }
}

impl DensityReport {
    pub fn from_counts(meaning_tokens: usize, total_tokens: usize) -> Self {
        let density = if total_tokens == 0 {
            0.0
        } else {
            meaning_tokens as f64 / total_tokens as f64
        };
        DensityReport {
            meaning_tokens,
            total_tokens,
            density,
        }
    }

    fn merge(self, other: DensityReport) -> Self {
        DensityReport::from_counts(self.meaning_tokens + other.meaning_tokens, self.total_tokens + other.total_tokens)
    }
}

/// Each line is tokenized on its own, newline included, and its tokens are
/// credited to the line's class. `classes` pairs with `text` line by line.
pub fn semantic_density(vocab: &Vocabulary, text: &str, classes: &[LineClass]) -> DensityReport {
    let mut meaning = 0;
    let mut total = 0;
    for (line, class) in text.split_inclusive('\n').zip(classes) {
        let n = vocab.count(line);
        total += n;
        if matches!(class, LineClass::Logic | LineClass::Documentation) {
            meaning += n;
        }
    }
    DensityReport::from_counts(meaning, total)
}

/// Density over the scanned files of `model` below `scope`, reading sources
/// relative to `root`.
pub fn density_for(
    vocab: &Vocabulary,
    root: &Path,
    model: &SourceModel,
    scope: Option<&str>,
) -> Result<DensityReport, SourceReadError> {
    let mut acc = DensityReport::default();
    for f in in_scope(model, scope) {
        let path = root.join(&f.path);
        let text = std::fs::read_to_string(&path).map_err(|source| SourceReadError {
            path: path.display().to_string(),
            source,
        })?;
        acc = acc.merge(semantic_density(vocab, &text, &f.line_classes));
    }
    Ok(acc)
}

/// Signed percentage change of `tokens_x` against `tokens_a`.
pub fn delta_vs_baseline(tokens_x: usize, tokens_a: usize) -> Result<f64, DensityError> {
    if tokens_a == 0 {
        return Err(DensityError::ZeroBaseline);
    }
    Ok((tokens_x as f64 / tokens_a as f64 - 1.0) * 100.0)
}

/// One decimal with an explicit sign; `0.0%` for changes that round to zero.
pub fn format_delta(delta: f64) -> String {
    let s = format!("{delta:.1}");
    match s.as_str() {
        "0.0" | "-0.0" => "0.0%".into(),
        _ if delta > 0.0 => format!("+{s}%"),
        _ => format!("{s}%"),
    }
}

pub fn session_to_file_ratio(record: &SessionRecord) -> Result<f64, DensityError> {
    if record.file_tokens == 0 {
        return Err(DensityError::ZeroFileTokens);
    }
    Ok(record.session_tokens as f64 / record.file_tokens as f64)
}

/// A report tagged with the scope it covers, as written by the CLI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scoped<T> {
    pub scope: String,
    #[serde(flatten)]
    pub report: T,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_examples() {
        let r = CeremonyReport::from_counts(152, 18, 0, 0);
        assert_eq!((r.ratio.unwrap() * 100.0).round() / 100.0, 8.44);
        assert_eq!(r.ratio_display(), "8.4");
        let none = CeremonyReport::from_counts(5, 0, 1, 2);
        assert_eq!(none.ratio, None);
        assert_eq!(none.ratio_display(), "undefined");
        assert_eq!(none.total_lines(), 8);
    }

    #[test]
    fn ratio_counts_partition_lines() {
        use LineClass::*;
        let r = ceremony_ratio([Ceremony, Logic, Blank, Ceremony, Documentation]);
        assert_eq!((r.ceremony_lines, r.logic_lines, r.documentation_lines, r.blank_lines), (2, 1, 1, 1));
        assert_eq!(r.total_lines(), 5);
    }

    #[test]
    fn deltas() {
        assert_eq!(format_delta(delta_vs_baseline(7106, 8072).unwrap()), "-12.0%");
        assert_eq!(format_delta(delta_vs_baseline(6695, 8072).unwrap()), "-17.1%");
        assert_eq!(format_delta(delta_vs_baseline(31600, 18900).unwrap()), "+67.2%");
        assert_eq!(delta_vs_baseline(8072, 8072).unwrap(), 0.0);
        assert_eq!(format_delta(-0.01), "0.0%");
        assert_eq!(delta_vs_baseline(1, 0), Err(DensityError::ZeroBaseline));
    }

    #[test]
    fn report_wire_form_recomputes_derived_fields() {
        let r: CeremonyReport =
            serde_json::from_str(r#"{"ceremony_lines":10,"logic_lines":4,"documentation_lines":0,"blank_lines":1,"ratio":99}"#)
                .unwrap();
        assert_eq!(r.ratio, Some(2.5));
        let d: DensityReport = serde_json::from_str(r#"{"meaning_tokens":3,"total_tokens":4}"#).unwrap();
        assert_eq!(d.density, 0.75);
        let s: Scoped<CeremonyReport> = serde_json::from_str(
            r#"{"scope":"x","ceremony_lines":1,"logic_lines":0,"documentation_lines":0,"blank_lines":0,"ratio":null}"#,
        )
        .unwrap();
        assert_eq!(s.report.ratio, None);
    }

    #[test]
    fn zero_total_density_is_zero() {
        assert_eq!(DensityReport::from_counts(0, 0).density, 0.0);
    }
}
