use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::CliError;

pub const VOCAB_ENV: &str = "SEMDENSE_VOCAB";
pub const DEFAULT_VOCAB: &str = "data/cl100k_base.tiktoken";
pub const DEFAULT_SEED: u64 = 42;

/// Defaults read from `--config`; relative paths resolve against the
/// config file's directory.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    vocab: Option<PathBuf>,
    registry: Option<PathBuf>,
    scan_config: Option<PathBuf>,
    seed: Option<u64>,
    output_dir: Option<PathBuf>,
}

/// Flags as given on the command line, before fallbacks.
#[derive(Debug, Default)]
pub struct PathFlags {
    pub config: Option<PathBuf>,
    pub vocab: Option<PathBuf>,
    pub registry: Option<PathBuf>,
    pub scan_config: Option<PathBuf>,
    pub output_dir: Option<PathBuf>,
}

/// Resolved settings: flag, then config file, then (vocabulary only) the
/// environment, then built-in defaults.
#[derive(Debug)]
pub struct CliConfig {
    pub vocabulary_path: PathBuf,
    pub registry_path: Option<PathBuf>,
    pub scan_config_path: Option<PathBuf>,
    pub seed: u64,
    pub output_dir: Option<PathBuf>,
}

impl CliConfig {
    pub fn resolve(flags: PathFlags) -> Result<Self, CliError> {
        let (file, base) = match &flags.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Validation(format!("cannot read config {}: {e}", path.display())))?;
                let file: ConfigFile = toml::from_str(&text)
                    .map_err(|e| CliError::Validation(format!("config {}: {e}", path.display())))?;
                (file, path.parent().map(Path::to_path_buf).unwrap_or_default())
            }
            None => (ConfigFile::default(), PathBuf::new()),
        };
        let rebase = |p: Option<PathBuf>| p.map(|p| if p.is_absolute() { p } else { base.join(p) });
        let explicit_vocab = flags
            .vocab
            .or_else(|| rebase(file.vocab))
            .or_else(|| std::env::var_os(VOCAB_ENV).map(PathBuf::from));
        let cfg = CliConfig {
            vocabulary_path: explicit_vocab.clone().unwrap_or_else(|| PathBuf::from(DEFAULT_VOCAB)),
            registry_path: flags.registry.or_else(|| rebase(file.registry)),
            scan_config_path: flags.scan_config.or_else(|| rebase(file.scan_config)),
            seed: file.seed.unwrap_or(DEFAULT_SEED),
            output_dir: flags.output_dir.or_else(|| rebase(file.output_dir)),
        };
        for (what, path) in [
            ("vocabulary", explicit_vocab.as_ref()),
            ("registry", cfg.registry_path.as_ref()),
            ("scan config", cfg.scan_config_path.as_ref()),
        ] {
            if let Some(p) = path {
                if !p.is_file() {
                    return Err(CliError::Validation(format!("{what} file {} does not exist", p.display())));
                }
            }
        }
        Ok(cfg)
    }

    /// Output paths are taken relative to the output directory when one is set.
    pub fn output_path(&self, path: &Path) -> PathBuf {
        match &self.output_dir {
            Some(dir) if path.is_relative() => dir.join(path),
            _ => path.to_path_buf(),
        }
    }
}
