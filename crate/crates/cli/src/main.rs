mod config;

use std::io::{self, BufReader, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use semdense::density::{
    ceremony_for, density_for, ingest_session_records, render_csv, render_report, session_to_file_ratio,
    CeremonyReport, DensityReport, FileStatRecord, ReportInputs, Scoped,
};
use semdense::logcodecs::{query_compressed_text, render_log, FormatId, QueryFilter};
use semdense::logmodel::{generate_corpus, read_events, write_events, Category, CodeRegistry, CorpusSpec, Level};
use semdense::skeleton::{build_codemap, render_codemap, same_ignoring_timestamp, CodeMapOptions, DEFAULT_MAX_DEPTH};
use semdense::source::{scan_project, ScanConfig, SourceModel};
use semdense::tokenizer::{TokenStats, Vocabulary};

use config::{CliConfig, PathFlags};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Stale(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Stale(_) => 3,
        }
    }
}

fn invalid(e: impl std::fmt::Display) -> CliError {
    CliError::Validation(e.to_string())
}

#[derive(Parser)]
#[command(
    name = "semdense",
    version,
    about = "Token accounting for log formats, program skeletons and ceremony metrics",
    after_help = "Exit status: 0 ok, 1 validation error, 2 usage error, 3 stale CODEMAP (codemap --check)."
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// TOML file with defaults for vocab, registry, scan_config, seed and output_dir
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// cl100k_base rank file [env: SEMDENSE_VOCAB] [default: data/cl100k_base.tiktoken]
    #[arg(long, global = true, value_name = "FILE")]
    vocab: Option<PathBuf>,
    /// Name/code registry TOML [default: built-in]
    #[arg(long, global = true, value_name = "FILE")]
    registry: Option<PathBuf>,
    /// Source scan config TOML [default: built-in]
    #[arg(long, global = true, value_name = "FILE")]
    scan_config: Option<PathBuf>,
    /// Directory that relative output paths are written under
    #[arg(long, global = true, value_name = "DIR")]
    output_dir: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded synthetic event corpus (JSON lines)
    GenLogs(GenLogsArgs),
    /// Render an event file in log format A, B or C
    Encode(EncodeArgs),
    /// Expand a Format-C log into Format-A text
    Decode(DecodeArgs),
    /// Filter a Format-C log and print matching events as Format-A text
    Query(QueryArgs),
    /// Count tokens and lines of files
    Tokens(TokensArgs),
    /// Write or check the CODEMAP.md skeleton of a source tree
    Codemap(CodemapArgs),
    /// Ceremony-to-logic line counts of a source tree
    Ceremony(ScopeArgs),
    /// Semantic density (meaning tokens / total tokens) of a source tree
    Density(ScopeArgs),
    /// Render the report tables from stats, session records and metrics
    Report(ReportArgs),
    /// Validate a session-record file and print session-to-file ratios
    Sessions(SessionsArgs),
}

#[derive(Args)]
struct GenLogsArgs {
    /// RNG seed [default: config seed or 42]
    #[arg(long)]
    seed: Option<u64>,
    /// Number of events
    #[arg(long, default_value_t = 200)]
    count: usize,
    /// Window start, epoch seconds [default: 2025-01-15T10:00:00Z]
    #[arg(long, value_name = "SECS")]
    window_start: Option<i64>,
    /// Window length in seconds [default: 1800]
    #[arg(long, value_name = "SECS")]
    window_length: Option<u64>,
    /// Category weight override, e.g. `auth=0.2` (repeatable)
    #[arg(long, value_name = "CATEGORY=W")]
    weight: Vec<String>,
    /// Output file [default: stdout]
    #[arg(short, long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EncodeArgs {
    /// Target layout: a, b or c
    #[arg(short, long, value_parser = parse_format)]
    format: FormatId,
    /// Event file [default: stdin]
    input: Option<PathBuf>,
    #[arg(short, long, value_name = "FILE")]
    /// Output file [default: stdout]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DecodeArgs {
    /// Format-C log [default: stdin]
    input: Option<PathBuf>,
    #[arg(short, long, value_name = "FILE")]
    /// Output file [default: stdout]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct QueryArgs {
    /// Level name or code (ERROR, E, ...)
    #[arg(long)]
    level: Option<String>,
    /// Full service name
    #[arg(long)]
    service: Option<String>,
    /// Full event kind
    #[arg(long)]
    kind: Option<String>,
    /// Inclusive start: epoch seconds or RFC 3339
    #[arg(long, value_name = "TIME")]
    from: Option<String>,
    /// Exclusive end: epoch seconds or RFC 3339
    #[arg(long, value_name = "TIME")]
    to: Option<String>,
    /// Substring of any attribute value
    #[arg(long, value_name = "TEXT")]
    contains: Option<String>,
    /// Format-C log [default: stdin]
    input: Option<PathBuf>,
    #[arg(short, long, value_name = "FILE")]
    /// Output file [default: stdout]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TokensArgs {
    /// Files to count; `-` or none reads stdin
    files: Vec<PathBuf>,
    /// Format label per file, in order (used with --jsonl)
    #[arg(long)]
    label: Vec<String>,
    /// Emit one {"format","tokens","lines"} record per file
    #[arg(long)]
    jsonl: bool,
}

#[derive(Args)]
struct CodemapArgs {
    /// Source root
    root: PathBuf,
    /// Output path, `-` for stdout [default: <root>/CODEMAP.md]
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Compare with the existing map (ignoring its timestamp); exit 3 when stale
    #[arg(long)]
    check: bool,
    /// Maximum call-chain depth
    #[arg(long, default_value_t = DEFAULT_MAX_DEPTH)]
    depth: usize,
    /// Project name in the title [default: root directory name]
    #[arg(long)]
    name: Option<String>,
    /// Timestamp, epoch seconds [default: newest source modification time]
    #[arg(long, value_name = "SECS")]
    generated_at: Option<i64>,
    /// Index unexported declarations too
    #[arg(long)]
    include_internal: bool,
}

#[derive(Args)]
struct ScopeArgs {
    /// Source root
    root: PathBuf,
    /// Restrict to a file or directory below the root
    #[arg(long, value_name = "PATH")]
    scope: Option<String>,
    /// Also report every file
    #[arg(long)]
    per_file: bool,
    /// Emit JSON lines ({"scope", ...counts})
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ReportArgs {
    /// File statistics JSON lines from `tokens --jsonl` (repeatable)
    #[arg(long, value_name = "FILE")]
    stats: Vec<PathBuf>,
    /// Session-record JSON lines
    #[arg(long, value_name = "FILE")]
    sessions: Option<PathBuf>,
    /// Output of `ceremony --json` (repeatable)
    #[arg(long, value_name = "FILE")]
    ceremony: Vec<PathBuf>,
    /// Output of `density --json` (repeatable)
    #[arg(long, value_name = "FILE")]
    density: Vec<PathBuf>,
    /// Output file [default: stdout]
    #[arg(short, long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Also write the tables as CSV files into this directory
    #[arg(long, value_name = "DIR")]
    csv_dir: Option<PathBuf>,
}

#[derive(Args)]
struct SessionsArgs {
    /// Session-record JSON lines
    file: PathBuf,
    /// Re-emit the validated records as JSON lines
    #[arg(long)]
    json: bool,
}

fn parse_format(s: &str) -> Result<FormatId, String> {
    s.parse()
}

fn main() -> ExitCode {
    let cli = Cli::try_parse().unwrap_or_else(|e| e.exit());
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("semdense: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let g = cli.global;
    let cfg = CliConfig::resolve(PathFlags {
        config: g.config,
        vocab: g.vocab,
        registry: g.registry,
        scan_config: g.scan_config,
        output_dir: g.output_dir,
    })?;
    match cli.command {
        Command::GenLogs(a) => gen_logs(&cfg, a),
        Command::Encode(a) => encode(&cfg, a),
        Command::Decode(a) => query(
            &cfg,
            QueryArgs {
                level: None,
                service: None,
                kind: None,
                from: None,
                to: None,
                contains: None,
                input: a.input,
                out: a.out,
            },
        ),
        Command::Query(a) => query(&cfg, a),
        Command::Tokens(a) => tokens(&cfg, a),
        Command::Codemap(a) => codemap(&cfg, a),
        Command::Ceremony(a) => ceremony(&cfg, a),
        Command::Density(a) => density(&cfg, a),
        Command::Report(a) => report(&cfg, a),
        Command::Sessions(a) => sessions(a),
    }
}

fn is_stdio(p: &Option<PathBuf>) -> bool {
    p.as_deref().is_none_or(|p| p == Path::new("-"))
}

fn read_input(path: &Option<PathBuf>) -> Result<Vec<u8>, CliError> {
    if is_stdio(path) {
        let mut buf = Vec::new();
        io::stdin().read_to_end(&mut buf).map_err(|e| invalid(format!("cannot read stdin: {e}")))?;
        Ok(buf)
    } else {
        let p = path.as_ref().unwrap();
        std::fs::read(p).map_err(|e| invalid(format!("cannot read {}: {e}", p.display())))
    }
}

fn read_text(path: &Option<PathBuf>) -> Result<String, CliError> {
    String::from_utf8(read_input(path)?).map_err(|_| invalid("input is not UTF-8"))
}

fn write_output(cfg: &CliConfig, path: &Option<PathBuf>, data: &[u8]) -> Result<(), CliError> {
    if is_stdio(path) {
        let mut out = io::stdout().lock();
        return out.write_all(data).and_then(|_| out.flush()).map_err(invalid);
    }
    let p = cfg.output_path(path.as_ref().unwrap());
    if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| invalid(format!("cannot create {}: {e}", dir.display())))?;
    }
    std::fs::write(&p, data).map_err(|e| invalid(format!("cannot write {}: {e}", p.display())))
}

fn registry(cfg: &CliConfig) -> Result<CodeRegistry, CliError> {
    match &cfg.registry_path {
        Some(p) => CodeRegistry::load(p).map_err(invalid),
        None => Ok(CodeRegistry::builtin()),
    }
}

fn vocabulary(cfg: &CliConfig) -> Result<Vocabulary, CliError> {
    Vocabulary::load(&cfg.vocabulary_path).map_err(|e| {
        invalid(format!(
            "{e} (set --vocab, the config `vocab` key or {})",
            config::VOCAB_ENV
        ))
    })
}

fn scan_config(cfg: &CliConfig) -> Result<ScanConfig, CliError> {
    match &cfg.scan_config_path {
        Some(p) => ScanConfig::load(p).map_err(invalid),
        None => Ok(ScanConfig::default()),
    }
}

fn scan(cfg: &CliConfig, root: &Path) -> Result<SourceModel, CliError> {
    scan_project(root, &scan_config(cfg)?).map_err(invalid)
}

fn gen_logs(cfg: &CliConfig, a: GenLogsArgs) -> Result<(), CliError> {
    let mut spec = CorpusSpec {
        seed: a.seed.unwrap_or(cfg.seed),
        event_count: a.count,
        ..CorpusSpec::default()
    };
    if let Some(s) = a.window_start {
        spec.window_start = s;
    }
    if let Some(l) = a.window_length {
        spec.window_length = l;
    }
    for w in &a.weight {
        let (name, value) = w
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("--weight expects CATEGORY=W, got {w:?}")))?;
        let category: Category = name.parse().map_err(CliError::Usage)?;
        let value: f64 = value
            .parse()
            .map_err(|_| CliError::Usage(format!("--weight {name}: {value:?} is not a number")))?;
        spec.category_weights.set(category, value);
    }
    spec.validate().map_err(invalid)?;
    let events = generate_corpus(&spec, &registry(cfg)?).map_err(invalid)?;
    let mut buf = Vec::new();
    write_events(&mut buf, &events).map_err(invalid)?;
    write_output(cfg, &a.out, &buf)
}

fn encode(cfg: &CliConfig, a: EncodeArgs) -> Result<(), CliError> {
    let data = read_input(&a.input)?;
    let events = read_events(BufReader::new(data.as_slice())).map_err(invalid)?;
    let text = render_log(&events, a.format, &registry(cfg)?).map_err(invalid)?;
    write_output(cfg, &a.out, text.as_bytes())
}

fn parse_time(s: &str) -> Result<i64, CliError> {
    if let Ok(secs) = s.parse::<i64>() {
        return Ok(secs * 1000);
    }
    chrono::DateTime::parse_from_rfc3339(s)
        .map(|t| t.timestamp_millis())
        .map_err(|_| CliError::Usage(format!("time {s:?} is neither epoch seconds nor RFC 3339")))
}

fn query(cfg: &CliConfig, a: QueryArgs) -> Result<(), CliError> {
    let level = a
        .level
        .as_deref()
        .map(str::parse::<Level>)
        .transpose()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let time_range = match (a.from.as_deref(), a.to.as_deref()) {
        (None, None) => None,
        (from, to) => Some((
            from.map(parse_time).transpose()?.unwrap_or(i64::MIN),
            to.map(parse_time).transpose()?.unwrap_or(i64::MAX),
        )),
    };
    let filter = QueryFilter {
        level,
        service: a.service,
        kind: a.kind,
        time_range,
        value_substring: a.contains,
    };
    let text = read_text(&a.input)?;
    let lines = query_compressed_text(&text, &registry(cfg)?, &filter).map_err(invalid)?;
    let mut out = String::new();
    for l in lines {
        out.push_str(&l);
        out.push('\n');
    }
    write_output(cfg, &a.out, out.as_bytes())
}

fn tokens(cfg: &CliConfig, a: TokensArgs) -> Result<(), CliError> {
    let files: Vec<Option<PathBuf>> = if a.files.is_empty() {
        vec![None]
    } else {
        a.files.into_iter().map(Some).collect()
    };
    if !a.label.is_empty() && a.label.len() != files.len() {
        return Err(CliError::Usage(format!(
            "{} --label values for {} files",
            a.label.len(),
            files.len()
        )));
    }
    let vocab = vocabulary(cfg)?;
    let mut out = String::new();
    for (i, f) in files.iter().enumerate() {
        let data = read_input(f)?;
        let stats = TokenStats::new(
            vocab.encode_bytes(&data).len(),
            semdense::tokenizer::count_lines(&String::from_utf8_lossy(&data)),
        );
        let name = f.as_ref().map_or("-".to_string(), |p| p.display().to_string());
        if a.jsonl {
            let record = FileStatRecord {
                format: a.label.get(i).cloned().unwrap_or(name),
                tokens: stats.tokens,
                lines: stats.lines,
            };
            out.push_str(&serde_json::to_string(&record).map_err(invalid)?);
            out.push('\n');
        } else if files.len() == 1 {
            out.push_str(&format!("{stats}\n"));
        } else {
            out.push_str(&format!("{name}: {stats}\n"));
        }
    }
    write_output(cfg, &None, out.as_bytes())
}

fn root_name(root: &Path) -> String {
    std::fs::canonicalize(root)
        .ok()
        .and_then(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
        .unwrap_or_else(|| root.display().to_string())
}

/// Newest modification time among the scanned files, epoch seconds.
fn newest_mtime(root: &Path, model: &SourceModel) -> i64 {
    model
        .files
        .iter()
        .filter_map(|f| std::fs::metadata(root.join(&f.path)).and_then(|m| m.modified()).ok())
        .filter_map(|t| t.duration_since(std::time::UNIX_EPOCH).ok())
        .map(|d| d.as_secs() as i64)
        .max()
        .unwrap_or(0)
}

fn codemap(cfg: &CliConfig, a: CodemapArgs) -> Result<(), CliError> {
    let scan_cfg = scan_config(cfg)?;
    let model = scan_project(&a.root, &scan_cfg).map_err(invalid)?;
    let options = CodeMapOptions {
        project_name: a.name.unwrap_or_else(|| root_name(&a.root)),
        max_depth: a.depth,
        include_unexported: a.include_internal,
        generated_at: a.generated_at.unwrap_or_else(|| newest_mtime(&a.root, &model)),
        entry_rules: scan_cfg.entry_points,
    };
    let text = render_codemap(&build_codemap(&model, &options));
    let target = a.out.clone().unwrap_or_else(|| a.root.join("CODEMAP.md"));
    if a.check {
        if target == Path::new("-") {
            return Err(CliError::Usage("--check needs a file, not stdout".into()));
        }
        let target = cfg.output_path(&target);
        let existing = std::fs::read_to_string(&target)
            .map_err(|e| CliError::Stale(format!("{}: {e}", target.display())))?;
        if !same_ignoring_timestamp(&existing, &text) {
            return Err(CliError::Stale(format!("{} is stale; regenerate it", target.display())));
        }
        eprintln!("{} is up to date", target.display());
        return Ok(());
    }
    write_output(cfg, &Some(target), text.as_bytes())
}

/// Scopes to report: every file (when asked) followed by the requested scope.
fn scopes(a: &ScopeArgs, model: &SourceModel) -> Vec<(String, Option<String>)> {
    let mut out = Vec::new();
    if a.per_file {
        let prefix = a.scope.as_deref().map(|s| s.trim_end_matches('/'));
        for f in &model.files {
            let inside = prefix.is_none_or(|p| f.path == p || f.path.starts_with(&format!("{p}/")));
            if inside {
                out.push((f.path.clone(), Some(f.path.clone())));
            }
        }
    }
    let label = a.scope.clone().unwrap_or_else(|| root_name(&a.root));
    out.push((label, a.scope.clone()));
    out
}

fn emit_scoped<T: serde::Serialize>(
    json: bool,
    rows: Vec<Scoped<T>>,
    text: impl Fn(&T) -> String,
) -> Result<(), CliError> {
    let mut out = String::new();
    for r in rows {
        if json {
            out.push_str(&serde_json::to_string(&r).map_err(invalid)?);
        } else {
            out.push_str(&format!("{}: {}", r.scope, text(&r.report)));
        }
        out.push('\n');
    }
    io::stdout().write_all(out.as_bytes()).map_err(invalid)
}

fn ceremony(cfg: &CliConfig, a: ScopeArgs) -> Result<(), CliError> {
    let model = scan(cfg, &a.root)?;
    let rows = scopes(&a, &model)
        .into_iter()
        .map(|(scope, filter)| Scoped {
            scope,
            report: ceremony_for(&model, filter.as_deref()),
        })
        .collect();
    emit_scoped(a.json, rows, |r: &CeremonyReport| {
        format!(
            "ceremony={} logic={} documentation={} blank={} ratio={}",
            r.ceremony_lines,
            r.logic_lines,
            r.documentation_lines,
            r.blank_lines,
            r.ratio_display()
        )
    })
}

fn density(cfg: &CliConfig, a: ScopeArgs) -> Result<(), CliError> {
    let model = scan(cfg, &a.root)?;
    let vocab = vocabulary(cfg)?;
    let mut rows = Vec::new();
    for (scope, filter) in scopes(&a, &model) {
        let report = density_for(&vocab, &a.root, &model, filter.as_deref()).map_err(invalid)?;
        rows.push(Scoped { scope, report });
    }
    emit_scoped(a.json, rows, |r: &DensityReport| {
        format!(
            "meaning_tokens={} total_tokens={} density={:.3}",
            r.meaning_tokens, r.total_tokens, r.density
        )
    })
}

fn read_jsonl<T: serde::de::DeserializeOwned>(path: &Path) -> Result<Vec<T>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| serde_json::from_str(l).map_err(|e| invalid(format!("{}:{}: {e}", path.display(), i + 1))))
        .collect()
}

fn report(cfg: &CliConfig, a: ReportArgs) -> Result<(), CliError> {
    let mut inputs = ReportInputs::default();
    for p in &a.stats {
        inputs.file_stats.extend(read_jsonl::<FileStatRecord>(p)?);
    }
    if let Some(p) = &a.sessions {
        inputs.sessions = ingest_session_records(p).map_err(|e| invalid(format!("{}: {e}", p.display())))?;
    }
    for p in &a.ceremony {
        inputs.ceremony.extend(read_jsonl(p)?);
    }
    for p in &a.density {
        inputs.density.extend(read_jsonl(p)?);
    }
    if let Some(dir) = &a.csv_dir {
        for (name, text) in render_csv(&inputs) {
            write_output(cfg, &Some(dir.join(name)), text.as_bytes())?;
        }
    }
    write_output(cfg, &a.out, render_report(&inputs).as_bytes())
}

fn sessions(a: SessionsArgs) -> Result<(), CliError> {
    let records = ingest_session_records(&a.file).map_err(|e| invalid(format!("{}: {e}", a.file.display())))?;
    let mut out = String::new();
    for r in &records {
        if a.json {
            out.push_str(&serde_json::to_string(r).map_err(invalid)?);
        } else {
            let ratio = session_to_file_ratio(r).map_err(invalid)?;
            out.push_str(&format!(
                "{}: session_tokens={} baseline_tokens={} file_tokens={} session_to_file={ratio:.1}",
                r.format, r.session_tokens, r.baseline_tokens, r.file_tokens
            ));
        }
        out.push('\n');
    }
    io::stdout().write_all(out.as_bytes()).map_err(invalid)
}
