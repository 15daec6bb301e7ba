use std::path::Path;

use globset::{Glob, GlobSet, GlobSetBuilder};
use serde::{Deserialize, Serialize};

use super::{Profile, ScanError};

const DEFAULT_SCAN_TOML: &str = include_str!("../../config/scan.toml");

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileMap {
    #[serde(default)]
    pub cfamily: Vec<String>,
    #[serde(default)]
    pub gostyle: Vec<String>,
    #[serde(default)]
    pub pystyle: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntryRules {
    #[serde(default)]
    pub names: Vec<String>,
    #[serde(default)]
    pub globs: Vec<String>,
    #[serde(default)]
    pub annotations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    #[serde(default)]
    pub include: Vec<String>,
    #[serde(default)]
    pub exclude: Vec<String>,
    #[serde(default)]
    pub profiles: ProfileMap,
    #[serde(default)]
    pub entry_points: EntryRules,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig::from_toml(DEFAULT_SCAN_TOML).expect("bundled scan config parses")
    }
}

impl ScanConfig {
    pub fn from_toml(text: &str) -> Result<Self, ScanError> {
        let cfg: ScanConfig = toml::from_str(text).map_err(|e| ScanError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ScanError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| ScanError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml(&text)
    }

    fn validate(&self) -> Result<(), ScanError> {
        build_globs(&self.include)?;
        build_globs(&self.exclude)?;
        build_globs(&self.entry_points.globs)?;
        let mut seen = std::collections::BTreeSet::new();
        for ext in self.profiles.cfamily.iter().chain(&self.profiles.gostyle).chain(&self.profiles.pystyle) {
            if !seen.insert(ext.as_str()) {
                return Err(ScanError::Config(format!("extension {ext:?} mapped to two profiles")));
            }
        }
        Ok(())
    }

    pub fn profile_for(&self, path: &str) -> Option<Profile> {
        let ext = path.rsplit_once('.')?.1;
        let has = |list: &[String]| list.iter().any(|e| e.eq_ignore_ascii_case(ext));
        if has(&self.profiles.cfamily) {
            Some(Profile::CFamily)
        } else if has(&self.profiles.gostyle) {
            Some(Profile::GoStyle)
        } else if has(&self.profiles.pystyle) {
            Some(Profile::PyStyle)
        } else {
            None
        }
    }

    pub(crate) fn file_filter(&self) -> Result<(GlobSet, GlobSet), ScanError> {
        Ok((build_globs(&self.include)?, build_globs(&self.exclude)?))
    }
}

pub(crate) fn build_globs(patterns: &[String]) -> Result<GlobSet, ScanError> {
    let mut b = GlobSetBuilder::new();
    for p in patterns {
        b.add(Glob::new(p).map_err(|e| ScanError::Config(format!("bad glob {p:?}: {e}")))?);
    }
    b.build().map_err(|e| ScanError::Config(e.to_string()))
}
