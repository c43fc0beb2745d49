//! Argument parsing and dispatch. Flags override the config file.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands::{self, Context};
use crate::config::{OnMissing, PipelineConfig, ProfileName};
use crate::error::Result;

#[derive(Debug, Parser)]
#[command(
    name = "storyline",
    version,
    about = "Segment videos, stitch their captions into a story, and score it"
)]
pub struct Cli {
    /// TOML configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Threshold preset.
    #[arg(long, global = true, value_enum)]
    pub profile: Option<ProfileName>,
    /// Worker threads for per-video work; output does not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct WindowArgs {
    /// CSV of scored windows: video_id,start,end,class,score.
    #[arg(long)]
    pub window_scores: Option<PathBuf>,
    /// CSV of video_id,length in frames.
    #[arg(long)]
    pub video_lengths: Option<PathBuf>,
    /// Directory of per-video descriptor JSONL files.
    #[arg(long)]
    pub descriptors: Option<PathBuf>,
    /// Directory holding pca.json, gmm.json and svm.json.
    #[arg(long)]
    pub models: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    pub nms_iou: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Localize action segments and pick keyframes.
    Segment {
        #[command(flatten)]
        windows: WindowArgs,
        /// Overrides the profile threshold.
        #[arg(long, allow_negative_numbers = true)]
        threshold: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Average segment count per video across thresholds.
    Sweep {
        #[command(flatten)]
        windows: WindowArgs,
        /// Comma-separated thresholds; defaults to -0.1 down to -1.0 in steps of 0.1.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        thresholds: Option<Vec<f64>>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fit PCA, GMM and one-vs-rest SVMs from labelled descriptors.
    Train {
        #[arg(long)]
        descriptors: Option<PathBuf>,
        /// CSV of video_id,start,end,class.
        #[arg(long)]
        labels: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Extract the connective bank from a tagged corpus.
    BuildBank {
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long)]
        grammar: Option<PathBuf>,
        #[arg(long)]
        embeddings: Option<PathBuf>,
        #[arg(long)]
        max_bank: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Resolve coreference and insert connectives.
    Stitch {
        #[arg(long)]
        captions: Option<PathBuf>,
        /// Segment directory; enables the missing-caption check.
        #[arg(long)]
        segments: Option<PathBuf>,
        #[arg(long)]
        bank: Option<PathBuf>,
        #[arg(long)]
        embeddings: Option<PathBuf>,
        #[arg(long)]
        gender_lexicon: Option<PathBuf>,
        #[arg(long)]
        lemma_exceptions: Option<PathBuf>,
        #[arg(long)]
        tagger_lexicon: Option<PathBuf>,
        #[arg(long, value_enum)]
        on_missing: Option<OnMissing>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Score stitched captions against references.
    Evaluate {
        #[arg(long)]
        stitched: Option<PathBuf>,
        #[arg(long)]
        references: Option<PathBuf>,
        /// Second system in the same format, reported as `mid-frame`.
        #[arg(long)]
        baseline: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
}

fn set<T>(slot: &mut Option<T>, value: Option<T>) {
    if value.is_some() {
        *slot = value;
    }
}

impl WindowArgs {
    fn apply(self, cfg: &mut PipelineConfig) {
        let p = &mut cfg.paths;
        set(&mut p.window_scores, self.window_scores);
        set(&mut p.video_lengths, self.video_lengths);
        set(&mut p.descriptors, self.descriptors);
        set(&mut p.models, self.models);
        if let Some(iou) = self.nms_iou {
            cfg.windows.nms_iou = iou;
        }
    }
}

/// Runs the parsed command and returns its summary.
pub fn run(cli: Cli) -> Result<String> {
    let mut cfg = match &cli.config {
        Some(path) => PipelineConfig::load(path)?,
        None => PipelineConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(profile) = cli.profile {
        cfg.profile = profile;
    }

    let out = match cli.command {
        Command::Segment {
            windows,
            threshold,
            out,
        } => {
            windows.apply(&mut cfg);
            if threshold.is_some() {
                cfg.windows.score_threshold = threshold;
            }
            (Op::Segment, out)
        }
        Command::Sweep {
            windows,
            thresholds,
            out,
        } => {
            windows.apply(&mut cfg);
            (Op::Sweep(thresholds), out)
        }
        Command::Train {
            descriptors,
            labels,
            out,
        } => {
            set(&mut cfg.paths.descriptors, descriptors);
            set(&mut cfg.paths.labels, labels);
            (Op::Train, out)
        }
        Command::BuildBank {
            corpus,
            grammar,
            embeddings,
            max_bank,
            out,
        } => {
            set(&mut cfg.paths.corpus, corpus);
            set(&mut cfg.paths.grammar, grammar);
            set(&mut cfg.paths.embeddings, embeddings);
            if let Some(m) = max_bank {
                cfg.stitch.max_bank = m;
            }
            (Op::BuildBank, out)
        }
        Command::Stitch {
            captions,
            segments,
            bank,
            embeddings,
            gender_lexicon,
            lemma_exceptions,
            tagger_lexicon,
            on_missing,
            out,
        } => {
            let p = &mut cfg.paths;
            set(&mut p.captions, captions);
            set(&mut p.segments, segments);
            set(&mut p.bank, bank);
            set(&mut p.embeddings, embeddings);
            set(&mut p.gender_lexicon, gender_lexicon);
            set(&mut p.lemma_exceptions, lemma_exceptions);
            set(&mut p.tagger_lexicon, tagger_lexicon);
            if let Some(m) = on_missing {
                cfg.stitch.on_missing = m;
            }
            (Op::Stitch, out)
        }
        Command::Evaluate {
            stitched,
            references,
            baseline,
            out,
        } => {
            set(&mut cfg.paths.stitched, stitched);
            set(&mut cfg.paths.references, references);
            set(&mut cfg.paths.baseline, baseline);
            (Op::Evaluate, out)
        }
    };
    let (op, out) = out;
    cfg.validate_paths()?;
    let ctx = Context::new(cfg, cli.threads)?;
    match op {
        Op::Segment => commands::segment(&ctx, &out),
        Op::Sweep(t) => {
            let t = t.unwrap_or_else(storyline_core::localization::default_sweep_thresholds);
            commands::sweep(&ctx, &t, &out)
        }
        Op::Train => commands::train(&ctx, &out),
        Op::BuildBank => commands::build_bank(&ctx, &out),
        Op::Stitch => commands::stitch(&ctx, &out),
        Op::Evaluate => commands::evaluate(&ctx, &out),
    }
}

enum Op {
    Segment,
    Sweep(Option<Vec<f64>>),
    Train,
    BuildBank,
    Stitch,
    Evaluate,
}
