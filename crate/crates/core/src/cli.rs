//! Command-line front end behind the `botlex` binary.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error. Reports carry the tool
//! version, the effective run configuration and the lexicon checksums, and no
//! timestamps, so reruns produce identical bytes. `--jobs` is left out of the
//! recorded configuration because it never changes results.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use chrono::{DateTime, Utc};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::annotate::{annotate, AnnotatorConfig};
use crate::classifiers::{
    feature_importance, predict_proba, train, ClassifierKind, FeatureMatrix, FeatureSet, Params, TrainedModel,
};
use crate::dataset::{
    generate_synthetic_corpus, load_corpus, read_feature_csv, write_corpus, AccountRecord, Label, Strictness,
    SynthParams,
};
use crate::error::Error;
use crate::eval::{cross_validate, summary_csv, EvalReport};
use crate::lexer::tokenize;
use crate::lexicon::{EmoticonPolicy, Lexicons, LEXICON_DIR_ENV};
use crate::pipeline::{feature_matrix, feature_rows, label_averages, label_averages_csv, ProfileMode};
use crate::profile::PROFILE_FEATURES;

pub const TOOL: &str = "botlex";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Parser)]
#[command(
    name = "botlex",
    version,
    about = "Lexical features and classifiers for social bot detection"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Worker threads; 0 uses every core. Results do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Directory holding stopwords.txt, contractions.txt and emoticons.txt.
    #[arg(long, global = true, env = LEXICON_DIR_ENV)]
    lexicon_dir: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Emoticons::All)]
    emoticons: Emoticons,
    /// Abort on the first malformed corpus line (default).
    #[arg(long, global = true, conflicts_with = "lenient")]
    strict: bool,
    /// Skip malformed corpus lines and report them on stderr.
    #[arg(long, global = true)]
    lenient: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Emoticons {
    All,
    Ascii,
}

#[derive(Debug, Args)]
struct ModelArgs {
    #[arg(long, default_value = "L")]
    feature_set: FeatureSet,
    #[arg(long, default_value = "random_forest")]
    classifier: ClassifierKind,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Reference time for account age, RFC 3339. Defaults to the latest
    /// timestamp in the corpus.
    #[arg(long)]
    now: Option<DateTime<Utc>>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the tokens of a text or of every tweet in a corpus as JSON lines.
    Tokenize {
        #[arg(long, conflicts_with = "input", required_unless_present = "input")]
        text: Option<String>,
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the per-account feature CSV.
    Features {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Restrict columns; F and FL require profile metadata.
        #[arg(long)]
        feature_set: Option<FeatureSet>,
        #[arg(long)]
        now: Option<DateTime<Utc>>,
    },
    /// Run the screening heuristics, one JSON report per account.
    Annotate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit a classifier and save it as JSON.
    Train {
        /// Corpus JSONL, or a feature CSV when the name ends in .csv.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        m: ModelArgs,
    },
    /// Score accounts with a saved model.
    Predict {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        now: Option<DateTime<Utc>>,
    },
    /// Stratified k-fold cross-validation.
    Evaluate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
        /// Also write the one-line CSV summary here.
        #[arg(long)]
        summary: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        folds: usize,
        #[arg(long)]
        dataset_tag: Option<String>,
        #[command(flatten)]
        m: ModelArgs,
    },
    /// Mean-decrease-in-impurity importances of a random forest.
    Importance {
        /// Saved random-forest model.
        #[arg(long, conflicts_with = "input", required_unless_present = "input")]
        model: Option<PathBuf>,
        /// Train a forest on this corpus or feature CSV instead.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "L")]
        feature_set: FeatureSet,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        now: Option<DateTime<Utc>>,
    },
    /// Generate a synthetic labelled corpus.
    Synth {
        #[arg(long)]
        out: PathBuf,
        /// SynthParams as JSON; omitted fields take their defaults.
        #[arg(long)]
        params: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        accounts: Option<usize>,
        #[arg(long)]
        tweets: Option<usize>,
    },
    /// Per-label means of the lexical features, from a feature CSV.
    PlotData {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// The effective configuration embedded in every report.
#[derive(Debug, Clone, Default, Serialize)]
pub struct RunConfig {
    pub subcommand: String,
    pub input: Option<String>,
    pub out: Option<String>,
    pub model: Option<String>,
    pub feature_set: Option<FeatureSet>,
    pub classifier: Option<ClassifierKind>,
    pub folds: Option<usize>,
    pub seed: Option<u64>,
    pub strictness: &'static str,
    pub lexicon_dir: Option<String>,
    pub emoticons: &'static str,
    pub dataset_tag: Option<String>,
    pub now: Option<String>,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    tool: &'static str,
    version: &'static str,
    config: &'a RunConfig,
    lexicon_checksums: &'a BTreeMap<String, String>,
    result: &'a T,
}

enum Failure {
    Usage(String),
    Data(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Data(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Parses `argv` (program name first), runs the subcommand and returns the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.global.jobs).build() {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: cannot start worker threads: {e}");
            return 1;
        }
    };
    match pool.install(|| dispatch(cli)) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(Failure::Data(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

fn write_output(out: Option<&Path>, content: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, content).map_err(|e| Error::io(path, e).into()),
        None => std::io::stdout()
            .write_all(content.as_bytes())
            .map_err(|e| Failure::Data(format!("cannot write to stdout: {e}"))),
    }
}

fn write_report<T: Serialize>(path: Option<&Path>, config: &RunConfig, lex: &Lexicons, result: &T) -> CliResult<()> {
    let envelope = Envelope {
        tool: TOOL,
        version: VERSION,
        config,
        lexicon_checksums: lex.checksums(),
        result,
    };
    let mut text = serde_json::to_string_pretty(&envelope).map_err(Error::from)?;
    text.push('\n');
    write_output(path, &text)
}

struct Context {
    lexicons: Lexicons,
    strictness: Strictness,
    base: RunConfig,
}

impl Context {
    fn new(global: &GlobalArgs) -> CliResult<Self> {
        let lexicons = match &global.lexicon_dir {
            Some(dir) => Lexicons::from_dir(dir)?,
            None => Lexicons::bundled(),
        };
        let policy = match global.emoticons {
            Emoticons::All => EmoticonPolicy::All,
            Emoticons::Ascii => EmoticonPolicy::AsciiOnly,
        };
        let strictness = if global.lenient {
            Strictness::Lenient
        } else {
            Strictness::Strict
        };
        Ok(Self {
            lexicons: lexicons.with_emoticon_policy(policy),
            strictness,
            base: RunConfig {
                strictness: if global.lenient { "lenient" } else { "strict" },
                lexicon_dir: global.lexicon_dir.as_deref().map(path_str),
                emoticons: match global.emoticons {
                    Emoticons::All => "all",
                    Emoticons::Ascii => "ascii",
                },
                ..Default::default()
            },
        })
    }

    fn config(&self, subcommand: &str) -> RunConfig {
        RunConfig {
            subcommand: subcommand.to_string(),
            ..self.base.clone()
        }
    }

    fn corpus(&self, path: &Path) -> CliResult<Vec<AccountRecord>> {
        let load = load_corpus(path, self.strictness)?;
        for e in &load.errors {
            eprintln!("warning: {}: line {}: {}", path.display(), e.line, e.message);
        }
        Ok(load.records)
    }

    /// Feature matrix for `set` from either a feature CSV or a corpus.
    fn matrix(&self, input: &Path, set: FeatureSet, now: Option<DateTime<Utc>>) -> CliResult<FeatureMatrix> {
        if is_csv(input) {
            Ok(read_feature_csv(input)?.select_set(set)?)
        } else {
            Ok(feature_matrix(&self.corpus(input)?, &self.lexicons, set, now)?)
        }
    }
}

fn is_csv(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

fn dispatch(cli: Cli) -> CliResult<()> {
    let ctx = Context::new(&cli.global)?;
    match cli.command {
        Command::Tokenize { text, input, out } => tokenize_cmd(&ctx, text, input, out),
        Command::Features {
            input,
            out,
            feature_set,
            now,
        } => {
            let records = ctx.corpus(&input)?;
            let matrix = match feature_set {
                Some(set) => feature_matrix(&records, &ctx.lexicons, set, now)?,
                None => {
                    let rows = feature_rows(&records, &ctx.lexicons, ProfileMode::IfPresent, now)?;
                    crate::dataset::feature_csv::rows_to_matrix(&rows)?
                }
            };
            write_output(
                out.as_deref(),
                &crate::dataset::feature_csv::matrix_csv_string(&matrix)?,
            )
        }
        Command::Annotate { input, out } => {
            let config = AnnotatorConfig::default();
            let mut text = String::new();
            for record in ctx.corpus(&input)? {
                let report = annotate(&record, &ctx.lexicons, &config)?;
                text.push_str(&serde_json::to_string(&report).map_err(Error::from)?);
                text.push('\n');
            }
            write_output(out.as_deref(), &text)
        }
        Command::Train {
            input,
            model,
            report,
            m,
        } => {
            let matrix = ctx.matrix(&input, m.feature_set, m.now)?;
            let trained = train(m.classifier, &matrix, &Params::default(), m.seed)?;
            write_output(Some(&model), &trained.to_json()?)?;
            if let Some(report) = report {
                let config = RunConfig {
                    input: Some(path_str(&input)),
                    model: Some(path_str(&model)),
                    feature_set: Some(m.feature_set),
                    classifier: Some(m.classifier),
                    seed: Some(m.seed),
                    now: m.now.map(|t| t.to_rfc3339()),
                    ..ctx.config("train")
                };
                #[derive(Serialize)]
                struct TrainSummary<'a> {
                    n_rows: usize,
                    feature_names: &'a [String],
                }
                let summary = TrainSummary {
                    n_rows: matrix.n_rows(),
                    feature_names: &matrix.feature_names,
                };
                write_report(Some(&report), &config, &ctx.lexicons, &summary)?;
            }
            Ok(())
        }
        Command::Predict { input, model, out, now } => predict_cmd(&ctx, &input, &model, out.as_deref(), now),
        Command::Evaluate {
            input,
            report,
            summary,
            folds,
            dataset_tag,
            m,
        } => {
            let matrix = ctx.matrix(&input, m.feature_set, m.now)?;
            let tag = dataset_tag.unwrap_or_else(|| {
                let stem = input
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_default();
                format!("{stem}_{}", m.feature_set)
            });
            let result: EvalReport = cross_validate(&matrix, m.classifier, &Params::default(), folds, m.seed)?
                .with_tags(tag.clone(), Some(m.feature_set.as_str()));
            let config = RunConfig {
                input: Some(path_str(&input)),
                out: report.as_deref().map(path_str),
                feature_set: Some(m.feature_set),
                classifier: Some(m.classifier),
                folds: Some(folds),
                seed: Some(m.seed),
                dataset_tag: Some(tag),
                now: m.now.map(|t| t.to_rfc3339()),
                ..ctx.config("evaluate")
            };
            if let Some(path) = summary {
                write_output(Some(&path), &summary_csv(std::slice::from_ref(&result)))?;
            }
            write_report(report.as_deref(), &config, &ctx.lexicons, &result)
        }
        Command::Importance {
            model,
            input,
            out,
            feature_set,
            seed,
            now,
        } => {
            let trained = match (model, input) {
                (Some(path), _) => read_model(&path)?,
                (None, Some(input)) => {
                    let matrix = ctx.matrix(&input, feature_set, now)?;
                    train(ClassifierKind::RandomForest, &matrix, &Params::default(), seed)?
                }
                (None, None) => return Err(Failure::Usage("either --model or --input is required".into())),
            };
            let importances = feature_importance(&trained)?;
            let mut order: Vec<usize> = (0..importances.len()).collect();
            order.sort_by(|&a, &b| importances[b].total_cmp(&importances[a]).then(a.cmp(&b)));
            let mut text = String::from("rank,feature,importance\n");
            for (rank, &j) in order.iter().enumerate() {
                text.push_str(&format!(
                    "{},{},{:.6}\n",
                    rank + 1,
                    trained.feature_names[j],
                    importances[j]
                ));
            }
            write_output(out.as_deref(), &text)
        }
        Command::Synth {
            out,
            params,
            seed,
            accounts,
            tweets,
        } => {
            let mut p = match params {
                Some(path) => {
                    let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
                    serde_json::from_str::<SynthParams>(&text).map_err(Error::from)?
                }
                None => SynthParams::default(),
            };
            p.seed = seed;
            if let Some(n) = accounts {
                p.n_accounts_per_class = n;
            }
            if let Some(n) = tweets {
                p.tweets_per_account = n;
            }
            write_corpus(&generate_synthetic_corpus(&p)?, &out)?;
            Ok(())
        }
        Command::PlotData { input, out } => {
            let matrix = read_feature_csv(&input)?;
            write_output(out.as_deref(), &label_averages_csv(&label_averages(&matrix)?))
        }
    }
}

fn tokenize_cmd(ctx: &Context, text: Option<String>, input: Option<PathBuf>, out: Option<PathBuf>) -> CliResult<()> {
    #[derive(Serialize)]
    struct Line<'a> {
        #[serde(skip_serializing_if = "Option::is_none")]
        account_id: Option<&'a str>,
        #[serde(skip_serializing_if = "Option::is_none")]
        tweet: Option<usize>,
        tokens: Vec<crate::lexer::Token>,
    }
    let mut lines = String::new();
    let mut push = |line: Line| -> CliResult<()> {
        lines.push_str(&serde_json::to_string(&line).map_err(Error::from)?);
        lines.push('\n');
        Ok(())
    };
    match (text, input) {
        (Some(text), _) => push(Line {
            account_id: None,
            tweet: None,
            tokens: tokenize(&text, &ctx.lexicons),
        })?,
        (None, Some(input)) => {
            for record in ctx.corpus(&input)? {
                for (i, tweet) in record.tweets.iter().enumerate() {
                    push(Line {
                        account_id: Some(&record.account_id),
                        tweet: Some(i),
                        tokens: tokenize(&tweet.text, &ctx.lexicons),
                    })?;
                }
            }
        }
        (None, None) => return Err(Failure::Usage("either --text or --input is required".into())),
    }
    write_output(out.as_deref(), &lines)
}

fn read_model(path: &Path) -> CliResult<TrainedModel> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(TrainedModel::from_json(&text)?)
}

fn predict_cmd(
    ctx: &Context,
    input: &Path,
    model: &Path,
    out: Option<&Path>,
    now: Option<DateTime<Utc>>,
) -> CliResult<()> {
    let model = read_model(model)?;
    let matrix = if is_csv(input) {
        read_feature_csv(input)?
    } else {
        let needs_profile = model
            .feature_names
            .iter()
            .any(|n| PROFILE_FEATURES.contains(&n.as_str()));
        let set = if needs_profile { FeatureSet::FL } else { FeatureSet::L };
        feature_matrix(&ctx.corpus(input)?, &ctx.lexicons, set, now)?
    }
    .select(&model.feature_names)?;
    let scores = predict_proba(&model, &matrix)?;
    let mut text = String::from("account_id,score,label\n");
    for (id, s) in matrix.ids.iter().zip(&scores) {
        let label = Label::from_class(u8::from(*s >= 0.5));
        text.push_str(&format!("{id},{s:.6},{}\n", label.as_str()));
    }
    write_output(out, &text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn argv(args: &[&str]) -> Vec<String> {
        std::iter::once("botlex")
            .chain(args.iter().copied())
            .map(str::to_string)
            .collect()
    }

    #[test]
    fn usage_errors_exit_1() {
        assert_eq!(run(argv(&["frobnicate"])), 1);
        assert_eq!(run(argv(&["evaluate", "--input", "x.jsonl", "--bogus"])), 1);
        assert_eq!(
            run(argv(&["evaluate", "--input", "x.jsonl", "--classifier", "tree"])),
            1
        );
        assert_eq!(run(argv(&["annotate", "--input", "x", "--strict", "--lenient"])), 1);
    }

    #[test]
    fn help_exits_0() {
        assert_eq!(run(argv(&["--help"])), 0);
    }

    #[test]
    fn missing_file_exits_2() {
        assert_eq!(run(argv(&["features", "--input", "/nonexistent/corpus.jsonl"])), 2);
    }
}
