//! Browser bindings. The page fetches the rank file and hands its text to
//! [`Demo::new`]; nothing is embedded in the module.

use semdense::density::{ceremony_ratio, semantic_density};
use semdense::logcodecs::{render_log, FormatId};
use semdense::logmodel::{generate_corpus, CodeRegistry, CorpusSpec};
use semdense::source::{scan_source, Profile, ScanConfig};
use semdense::tokenizer::{count_lines, Vocabulary, VocabularyConfig};
use wasm_bindgen::prelude::*;

fn js_err(e: impl std::fmt::Display) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
pub struct Demo {
    vocab: Vocabulary,
    registry: CodeRegistry,
}

#[wasm_bindgen]
impl Demo {
    /// Parses a cl100k_base rank file.
    #[wasm_bindgen(constructor)]
    pub fn new(rank_file: &str) -> Result<Demo, JsError> {
        Ok(Demo {
            vocab: Vocabulary::parse(rank_file, VocabularyConfig::cl100k_base()).map_err(js_err)?,
            registry: CodeRegistry::builtin(),
        })
    }

    /// `{tokens, lines, ids}` for arbitrary text.
    #[wasm_bindgen(js_name = countTokens)]
    pub fn count_tokens(&self, text: &str) -> String {
        let ids = self.vocab.encode(text);
        serde_json::json!({ "tokens": ids.len(), "lines": count_lines(text), "ids": ids }).to_string()
    }

    /// Renders a synthetic corpus in formats A, B and C with token counts.
    #[wasm_bindgen(js_name = encodeSample)]
    pub fn encode_sample(&self, seed: u32, events: u32) -> Result<String, JsError> {
        let spec = CorpusSpec {
            seed: seed.into(),
            event_count: events as usize,
            ..CorpusSpec::default()
        };
        let corpus = generate_corpus(&spec, &self.registry).map_err(js_err)?;
        let mut out = Vec::new();
        for f in [FormatId::A, FormatId::B, FormatId::C] {
            let text = render_log(&corpus, f, &self.registry).map_err(js_err)?;
            out.push(serde_json::json!({
                "format": f.letter().to_string(),
                "tokens": self.vocab.count(&text),
                "lines": count_lines(&text),
                "text": text,
            }));
        }
        Ok(serde_json::Value::Array(out).to_string())
    }

    /// Per-line classes, ceremony ratio and semantic density of one source file.
    #[wasm_bindgen(js_name = classifySource)]
    pub fn classify_source(&self, file_name: &str, text: &str) -> Result<String, JsError> {
        let profile = ScanConfig::default().profile_for(file_name).unwrap_or(Profile::CFamily);
        let model = scan_source(file_name, text, profile);
        let classes = &model.files[0].line_classes;
        let ceremony = ceremony_ratio(classes.iter().copied());
        let density = semantic_density(&self.vocab, text, classes);
        Ok(serde_json::json!({
            "classes": classes.iter().map(|c| c.letter().to_string()).collect::<String>(),
            "ceremony": ceremony,
            "ratio": ceremony.ratio_display(),
            "density": density,
        })
        .to_string())
    }
}
