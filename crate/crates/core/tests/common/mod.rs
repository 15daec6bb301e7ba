#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::OnceLock;

use semdense::tokenizer::Vocabulary;

pub fn workspace_root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn vocab_path() -> PathBuf {
    std::env::var_os("SEMDENSE_VOCAB")
        .map(PathBuf::from)
        .unwrap_or_else(|| workspace_root().join("data/cl100k_base.tiktoken"))
}

pub fn vocab() -> &'static Vocabulary {
    static VOCAB: OnceLock<Vocabulary> = OnceLock::new();
    VOCAB.get_or_init(|| Vocabulary::load(vocab_path()).expect("cl100k_base vocabulary"))
}

pub fn fixtures_dir() -> PathBuf {
    workspace_root().join("fixtures")
}

pub const FIXTURES: [&str; 3] = ["spring_orders", "go_orders", "angular_orders"];

/// Hand-labelled fixture manifest.
#[derive(Debug, serde::Deserialize)]
pub struct Manifest {
    pub file: Vec<ManifestFile>,
    pub expect: ManifestExpect,
}

#[derive(Debug, serde::Deserialize)]
pub struct ManifestFile {
    pub path: String,
    pub declarations: Vec<String>,
    pub lines: String,
}

#[derive(Debug, serde::Deserialize)]
pub struct ManifestExpect {
    pub entry_points: Vec<String>,
    pub calls: Vec<String>,
}

impl ManifestFile {
    /// (class letter, source text) per line.
    pub fn labelled_lines(&self) -> Vec<(char, String)> {
        self.lines
            .lines()
            .map(|l| {
                let (tag, text) = l.split_once(' ').unwrap_or((l, ""));
                (tag.chars().next().unwrap(), text.to_string())
            })
            .collect()
    }
}

pub fn manifest(fixture: &str) -> Manifest {
    let text = std::fs::read_to_string(fixtures_dir().join(fixture).join("MANIFEST.toml")).unwrap();
    toml::from_str(&text).unwrap()
}
