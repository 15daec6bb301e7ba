use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Deserialize;

/// The registry shipped with the toolkit.
pub const DEFAULT_REGISTRY: &str = include_str!("../../config/registry.toml");

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Namespace {
    Service,
    Kind,
    AttrKey,
    Value,
}

impl Namespace {
    pub const ALL: [Namespace; 4] = [
        Namespace::Service,
        Namespace::Kind,
        Namespace::AttrKey,
        Namespace::Value,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Namespace::Service => "service",
            Namespace::Kind => "kind",
            Namespace::AttrKey => "attr_key",
            Namespace::Value => "value",
        }
    }
}

impl fmt::Display for Namespace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Namespace {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "service" | "services" => Ok(Namespace::Service),
            "kind" | "kinds" => Ok(Namespace::Kind),
            "attr_key" | "attr_keys" | "key" | "keys" => Ok(Namespace::AttrKey),
            "value" | "values" => Ok(Namespace::Value),
            other => Err(format!("unknown namespace {other:?}")),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RegistryError {
    #[error("unknown {namespace} name {name:?}")]
    UnknownName { namespace: Namespace, name: String },
    #[error("undefined code {code:?} in {namespace} namespace")]
    UndefinedCode { namespace: Namespace, code: String },
    #[error("{namespace} code {code:?} is assigned to both {first:?} and {second:?}")]
    DuplicateCode {
        namespace: Namespace,
        code: String,
        first: String,
        second: String,
    },
    #[error("{namespace} entry {name:?} has invalid code {code:?}")]
    InvalidCode {
        namespace: Namespace,
        name: String,
        code: String,
    },
    #[error("template for {kind:?} references unknown attribute key {key:?}")]
    TemplateKey { kind: String, key: String },
    #[error("template for unknown kind {0:?}")]
    TemplateKind(String),
    #[error("cannot read registry {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("invalid registry file: {0}")]
    Parse(String),
}

/// Injective map between full names and short codes.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BiMap {
    to_code: BTreeMap<String, String>,
    to_full: BTreeMap<String, String>,
}

impl BiMap {
    fn insert(&mut self, namespace: Namespace, full: &str, code: &str) -> Result<(), RegistryError> {
        if !valid_code(code) {
            return Err(RegistryError::InvalidCode {
                namespace,
                name: full.to_string(),
                code: code.to_string(),
            });
        }
        if let Some(first) = self.to_full.get(code) {
            return Err(RegistryError::DuplicateCode {
                namespace,
                code: code.to_string(),
                first: first.clone(),
                second: full.to_string(),
            });
        }
        if let Some(old) = self.to_code.insert(full.to_string(), code.to_string()) {
            self.to_full.remove(&old);
        }
        self.to_full.insert(code.to_string(), full.to_string());
        Ok(())
    }

    pub fn code(&self, full: &str) -> Option<&str> {
        self.to_code.get(full).map(String::as_str)
    }

    pub fn full(&self, code: &str) -> Option<&str> {
        self.to_full.get(code).map(String::as_str)
    }

    /// Entries ordered by full name.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &str)> {
        self.to_code.iter().map(|(f, c)| (f.as_str(), c.as_str()))
    }

    pub fn len(&self) -> usize {
        self.to_code.len()
    }

    pub fn is_empty(&self) -> bool {
        self.to_code.is_empty()
    }
}

fn valid_code(code: &str) -> bool {
    !code.is_empty()
        && !code
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '|' | '=' | ';' | '\\' | '#'))
}

/// Name/code tables for the compressed log format plus the per-kind
/// sentence templates used by the human-readable format.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CodeRegistry {
    services: BiMap,
    kinds: BiMap,
    attr_keys: BiMap,
    values: BiMap,
    templates: BTreeMap<String, String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RegistryFile {
    #[serde(default)]
    services: BTreeMap<String, String>,
    #[serde(default)]
    kinds: BTreeMap<String, String>,
    #[serde(default)]
    attr_keys: BTreeMap<String, String>,
    #[serde(default)]
    values: BTreeMap<String, String>,
    #[serde(default)]
    templates: BTreeMap<String, String>,
}

impl CodeRegistry {
    pub fn empty() -> Self {
        Self::default()
    }

    /// The built-in registry (`config/registry.toml`).
    pub fn builtin() -> Self {
        Self::from_toml(DEFAULT_REGISTRY).expect("built-in registry is valid")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, RegistryError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| RegistryError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> Result<Self, RegistryError> {
        let file: RegistryFile =
            toml::from_str(text).map_err(|e| RegistryError::Parse(e.to_string()))?;
        let mut reg = Self::default();
        for (ns, table) in [
            (Namespace::Service, &file.services),
            (Namespace::Kind, &file.kinds),
            (Namespace::AttrKey, &file.attr_keys),
            (Namespace::Value, &file.values),
        ] {
            for (full, code) in table {
                reg.insert(ns, full, code)?;
            }
        }
        for (kind, template) in file.templates {
            reg.set_template(&kind, &template)?;
        }
        Ok(reg)
    }

    pub fn insert(&mut self, namespace: Namespace, full: &str, code: &str) -> Result<(), RegistryError> {
        self.map_mut(namespace).insert(namespace, full, code)
    }

    pub fn set_template(&mut self, kind: &str, template: &str) -> Result<(), RegistryError> {
        if self.kinds.code(kind).is_none() {
            return Err(RegistryError::TemplateKind(kind.to_string()));
        }
        for key in placeholders(template) {
            if self.attr_keys.code(key).is_none() {
                return Err(RegistryError::TemplateKey {
                    kind: kind.to_string(),
                    key: key.to_string(),
                });
            }
        }
        self.templates.insert(kind.to_string(), template.to_string());
        Ok(())
    }

    pub fn map(&self, namespace: Namespace) -> &BiMap {
        match namespace {
            Namespace::Service => &self.services,
            Namespace::Kind => &self.kinds,
            Namespace::AttrKey => &self.attr_keys,
            Namespace::Value => &self.values,
        }
    }

    fn map_mut(&mut self, namespace: Namespace) -> &mut BiMap {
        match namespace {
            Namespace::Service => &mut self.services,
            Namespace::Kind => &mut self.kinds,
            Namespace::AttrKey => &mut self.attr_keys,
            Namespace::Value => &mut self.values,
        }
    }

    pub fn resolve_code(&self, namespace: Namespace, full: &str) -> Result<&str, RegistryError> {
        self.map(namespace)
            .code(full)
            .ok_or_else(|| RegistryError::UnknownName {
                namespace,
                name: full.to_string(),
            })
    }

    pub fn resolve_full(&self, namespace: Namespace, code: &str) -> Result<&str, RegistryError> {
        self.map(namespace)
            .full(code)
            .ok_or_else(|| RegistryError::UndefinedCode {
                namespace,
                code: code.to_string(),
            })
    }

    pub fn template(&self, kind: &str) -> Option<&str> {
        self.templates.get(kind).map(String::as_str)
    }

    pub fn is_empty(&self) -> bool {
        Namespace::ALL.iter().all(|ns| self.map(*ns).is_empty())
    }
}

/// `{name}` placeholders of a template, in order of appearance.
pub fn placeholders(template: &str) -> impl Iterator<Item = &str> {
    let mut rest = template;
    std::iter::from_fn(move || loop {
        let open = rest.find('{')?;
        let after = &rest[open + 1..];
        let close = after.find('}')?;
        let name = &after[..close];
        rest = &after[close + 1..];
        if !name.is_empty() && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Some(name);
        }
    })
}
