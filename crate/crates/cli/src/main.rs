//! `mora` — command-line front end for the Malagasy verb morphology
//! toolkit: compile the allomorph dictionary, inflect single roots, analyze
//! tokens or whole files, list paradigms, and score gold corpora.
//!
//! Resource locations come from a TOML config file (`--config`, the
//! `MORA_RESOURCES` environment variable, or `./mora.toml`), with per-file
//! flag overrides. Diagnostics go to stderr, data to stdout; the exit code
//! is zero exactly when no error occurred.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use mora_core::corpus_eval::{evaluate, normalize_token, parse_gold_tsv, tokenize};
use mora_core::inflect::parse_transducer_dsl;
use mora_core::lexicon::{parse_dema_vs, serialize_dema_vsflx};
use mora_core::morpho::{Analysis, BuildOptions, CompiledResources, FeatureBundle};
use mora_core::{compile_lexicon, ResourcePaths};

const ANALYSIS_SCHEMA: &str = "mora.analysis/1";
const PARADIGM_SCHEMA: &str = "mora.paradigm/1";

#[derive(Parser)]
#[command(name = "mora", version, about = "Finite-state morphology for Malagasy simple verbs")]
struct Cli {
    /// Config file naming the resource set (default: $MORA_RESOURCES, then ./mora.toml)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(flatten)]
    overrides: Overrides,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Overrides {
    /// DEMA-VS root dictionary
    #[arg(long, global = true)]
    dema_vs: Option<PathBuf>,
    /// Directory of *.stem inflection transducers
    #[arg(long, global = true)]
    stem_dir: Option<PathBuf>,
    /// Directory of *.affix morpheme graphs
    #[arg(long, global = true)]
    affix_dir: Option<PathBuf>,
    /// DEMA-INVflx invariable dictionary
    #[arg(long, global = true)]
    dema_invflx: Option<PathBuf>,
    /// Bound pronoun table
    #[arg(long, global = true)]
    pronouns: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Compile DEMA-VS through the stem transducers into DEMA-VSflx
    Compile {
        /// Write the allomorph dictionary here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the allomorph entries of one root
    Inflect { lemma: String },
    /// Analyze one token, or every token of a file
    Analyze {
        token: Option<String>,
        /// Analyze every token of this file
        #[arg(long, conflicts_with = "token")]
        file: Option<PathBuf>,
        /// One JSON record per token instead of readable lines
        #[arg(long)]
        json: bool,
    },
    /// List every conjugated form of one root
    Generate {
        lemma: String,
        #[arg(long)]
        json: bool,
    },
    /// Score the analyzer against a gold TSV corpus
    Evaluate {
        gold: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

/// Keys accepted in the config file. Paths are relative to the file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    dema_vs: Option<PathBuf>,
    stem_dir: Option<PathBuf>,
    affix_dir: Option<PathBuf>,
    dema_invflx: Option<PathBuf>,
    pronouns: Option<PathBuf>,
    max_call_depth: Option<usize>,
    paradigm_ceiling: Option<usize>,
}

fn resolve_paths(cli: &Cli) -> Result<ResourcePaths> {
    let explicit = cli
        .config
        .clone()
        .or_else(|| std::env::var_os("MORA_RESOURCES").map(PathBuf::from));
    let config_path = explicit.clone().unwrap_or_else(|| PathBuf::from("mora.toml"));

    let (file, base): (ConfigFile, PathBuf) = if config_path.exists() {
        let text = fs::read_to_string(&config_path)
            .with_context(|| format!("reading {}", config_path.display()))?;
        let file: ConfigFile = toml::from_str(&text)
            .with_context(|| format!("parsing {}", config_path.display()))?;
        let base = config_path.parent().unwrap_or(Path::new(".")).to_path_buf();
        (file, base)
    } else if explicit.is_some() {
        bail!("config file {} does not exist", config_path.display());
    } else {
        (ConfigFile::default(), PathBuf::from("."))
    };

    let mut paths = ResourcePaths::in_dir(&base);
    let join = |p: PathBuf| if p.is_absolute() { p } else { base.join(p) };
    if let Some(p) = file.dema_vs {
        paths.dema_vs = join(p);
    }
    if let Some(p) = file.stem_dir {
        paths.stem_dir = join(p);
    }
    if let Some(p) = file.affix_dir {
        paths.affix_dir = join(p);
    }
    if let Some(p) = file.dema_invflx {
        paths.dema_invflx = join(p);
    }
    if let Some(p) = file.pronouns {
        paths.pronouns = join(p);
    }
    let mut options = BuildOptions::default();
    if let Some(d) = file.max_call_depth {
        options.max_call_depth = d;
    }
    if let Some(c) = file.paradigm_ceiling {
        options.paradigm_ceiling = c;
    }
    paths.options = options;

    let o = &cli.overrides;
    if let Some(p) = &o.dema_vs {
        paths.dema_vs = p.clone();
    }
    if let Some(p) = &o.stem_dir {
        paths.stem_dir = p.clone();
    }
    if let Some(p) = &o.affix_dir {
        paths.affix_dir = p.clone();
    }
    if let Some(p) = &o.dema_invflx {
        paths.dema_invflx = p.clone();
    }
    if let Some(p) = &o.pronouns {
        paths.pronouns = p.clone();
    }
    Ok(paths)
}

#[derive(Serialize)]
struct AnalysisRecord<'a> {
    schema: &'static str,
    token: &'a str,
    analyses: &'a [Analysis],
}

#[derive(Serialize)]
struct ParadigmRecord<'a> {
    schema: &'static str,
    lemma: &'a str,
    forms: Vec<ParadigmForm>,
}

#[derive(Serialize)]
struct ParadigmForm {
    form: String,
    features: FeatureBundle,
}

fn print_analyses(token: &str, analyses: &[Analysis], json: bool) -> Result<()> {
    if json {
        let record = AnalysisRecord {
            schema: ANALYSIS_SCHEMA,
            token,
            analyses,
        };
        println!("{}", serde_json::to_string(&record)?);
    } else if analyses.is_empty() {
        println!("{token}: no analysis");
    } else {
        for a in analyses {
            println!("{token}: {} -> {}  [{}]", a.lemma, a.segmentation(), a.features);
        }
    }
    Ok(())
}

fn cmd_compile(paths: &ResourcePaths, out: Option<&Path>) -> Result<()> {
    let entries = parse_dema_vs(
        &fs::read_to_string(&paths.dema_vs)
            .with_context(|| format!("reading {}", paths.dema_vs.display()))?,
    )
    .map_err(|e| e.in_file(paths.dema_vs.display().to_string()))?;

    let mut registry = BTreeMap::new();
    for entry in fs::read_dir(&paths.stem_dir)
        .with_context(|| format!("reading {}", paths.stem_dir.display()))?
    {
        let path = entry?.path();
        if path.extension().map(|e| e == "stem").unwrap_or(false) {
            let t = parse_transducer_dsl(&fs::read_to_string(&path)?)
                .map_err(|e| e.in_file(path.display().to_string()))?;
            registry.insert(t.name.clone(), t);
        }
    }

    let (allomorphs, stats) = compile_lexicon(&entries, &registry)?;
    let text = serialize_dema_vsflx(&allomorphs);
    match out {
        Some(path) => fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    eprintln!(
        "{} roots -> {} entries, {:.2} variants/root",
        stats.roots, stats.entries, stats.mean_variants_per_root
    );
    Ok(())
}

fn cmd_inflect(resources: &CompiledResources, lemma: &str) -> Result<()> {
    let entry = resources
        .entry(lemma)
        .ok_or_else(|| mora_core::Error::UnknownLemma(lemma.to_string()))?;
    for a in resources
        .allomorphs()
        .iter()
        .filter(|a| a.lemma == entry.lemma)
    {
        println!("{}", a.serialize_line());
    }
    Ok(())
}

fn cmd_analyze(
    resources: &CompiledResources,
    token: Option<&str>,
    file: Option<&Path>,
    json: bool,
) -> Result<()> {
    match (token, file) {
        (Some(raw), None) => {
            let token = normalize_token(raw);
            print_analyses(&token, &resources.analyze_token(&token), json)
        }
        (None, Some(path)) => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            for tok in tokenize(&text) {
                print_analyses(&tok.text, &resources.analyze_token(&tok.text), json)?;
            }
            Ok(())
        }
        _ => bail!("pass a token or --file, not both"),
    }
}

fn cmd_generate(resources: &CompiledResources, lemma: &str, json: bool) -> Result<()> {
    let entry = resources
        .entry(lemma)
        .ok_or_else(|| mora_core::Error::UnknownLemma(lemma.to_string()))?;
    let paradigm = resources.generate_paradigm(entry)?;
    if json {
        let record = ParadigmRecord {
            schema: PARADIGM_SCHEMA,
            lemma: &entry.lemma,
            forms: paradigm
                .into_iter()
                .map(|(form, features)| ParadigmForm { form, features })
                .collect(),
        };
        println!("{}", serde_json::to_string(&record)?);
    } else {
        for (form, features) in paradigm {
            println!("{form}\t{features}");
        }
    }
    Ok(())
}

fn cmd_evaluate(resources: &CompiledResources, gold_path: &Path, json: bool) -> Result<()> {
    let text = fs::read_to_string(gold_path)
        .with_context(|| format!("reading {}", gold_path.display()))?;
    let gold = parse_gold_tsv(&text).map_err(|e| e.in_file(gold_path.display().to_string()))?;
    let report = evaluate(&gold, resources)?;
    if json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.table());
    }
    Ok(())
}

fn run() -> Result<()> {
    let cli = Cli::parse();
    let paths = resolve_paths(&cli)?;
    match &cli.command {
        Command::Compile { out } => cmd_compile(&paths, out.as_deref()),
        Command::Inflect { lemma } => cmd_inflect(&paths.load()?, lemma),
        Command::Analyze { token, file, json } => {
            cmd_analyze(&paths.load()?, token.as_deref(), file.as_deref(), *json)
        }
        Command::Generate { lemma, json } => cmd_generate(&paths.load()?, lemma, *json),
        Command::Evaluate { gold, json } => cmd_evaluate(&paths.load()?, gold, *json),
    }
}

fn main() {
    if let Err(err) = run() {
        eprintln!("error: {err:#}");
        std::process::exit(1);
    }
}
