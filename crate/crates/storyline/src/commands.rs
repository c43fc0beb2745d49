//! Subcommand bodies. Each reads its inputs from the effective
//! configuration, writes fixed file names under an output directory together
//! with a run manifest, and returns a short human-readable summary.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use storyline_core::encoding::{
    fisher_encode, fit_gmm, fit_pca, power_l2_normalize, score_ovr, train_ovr_linear, DescriptorSequence, FisherVector,
    GmmFitConfig, GmmModel, PcaModel, SvmTrainConfig,
};
use storyline_core::grammar::{build_connective_bank, LoadOptions, Pcfg};
use storyline_core::linalg::Matrix;
use storyline_core::localization::{
    argmax_class, generate_windows, segment_video, sweep_thresholds, temporal_nms, ActionWindow, SegmentationResult,
    SlidingWindowConfig,
};
use storyline_core::metrics::{self, normalize, Scores};
use storyline_core::stitching::{stitch as stitch_doc, CaptionDoc, StitchResources};
use storyline_core::text::{tokenize, TaggedToken, Tagger};

use crate::config::{OnMissing, PipelineConfig};
use crate::error::{CliError, Result};
use crate::formats::{self, CaptionsFile, ModelSet, SegmentFile, StitchedFile, StitchedVideo};
use crate::manifest::RunManifest;
use crate::plot;

/// Effective configuration plus the worker pool for per-video work.
pub struct Context {
    pub config: PipelineConfig,
    pool: rayon::ThreadPool,
}

impl Context {
    /// `threads = None` lets rayon pick. Output never depends on the count.
    pub fn new(config: PipelineConfig, threads: Option<usize>) -> Result<Self> {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = threads {
            if n == 0 {
                return Err(CliError::input("--threads must be at least 1"));
            }
            builder = builder.num_threads(n);
        }
        let pool = builder.build().map_err(|e| CliError::internal(e.to_string()))?;
        Ok(Self { config, pool })
    }

    fn par_map<T: Sync, U: Send>(&self, items: &[T], f: impl Fn(&T) -> Result<U> + Sync + Send) -> Result<Vec<U>> {
        self.pool.install(|| items.par_iter().map(f).collect())
    }
}

fn required<'a>(slot: &'a Option<PathBuf>, field: &str) -> Result<&'a Path> {
    slot.as_deref()
        .ok_or_else(|| CliError::input(format!("missing input: set `paths.{field}` or pass its flag")))
}

fn safe_file_stem(video_id: &str) -> Result<&str> {
    let bad =
        video_id.is_empty() || video_id.starts_with('.') || video_id.contains(['/', '\\']) || video_id == "manifest";
    if bad {
        Err(CliError::input(format!(
            "video id `{video_id}` cannot be used as a file name"
        )))
    } else {
        Ok(video_id)
    }
}

// ---------------------------------------------------------------- windows

/// One video's best-class windows ready for NMS.
struct VideoWindows {
    video_id: String,
    windows: Vec<ActionWindow>,
    length: u64,
}

struct ScoredInput {
    classes: Vec<String>,
    videos: Vec<VideoWindows>,
}

fn load_scored_windows(ctx: &Context, win: &SlidingWindowConfig, manifest: &mut RunManifest) -> Result<ScoredInput> {
    let paths = &ctx.config.paths;
    if let Some(scores_path) = &paths.window_scores {
        manifest.record_input("window_scores", scores_path)?;
        let scores = formats::read_window_scores(scores_path)?;
        let lengths = match &paths.video_lengths {
            Some(p) => {
                manifest.record_input("video_lengths", p)?;
                Some((p, formats::read_lengths(p)?))
            }
            None => None,
        };
        let mut videos = Vec::new();
        for (video_id, windows) in scores.videos {
            let length = match &lengths {
                Some((p, map)) => *map
                    .get(&video_id)
                    .ok_or_else(|| CliError::input_at(p, format!("no length for video `{video_id}`")))?,
                None => windows.iter().map(|w| w.end).max().unwrap_or(0),
            };
            videos.push(VideoWindows {
                video_id,
                windows,
                length,
            });
        }
        return Ok(ScoredInput {
            classes: scores.classes,
            videos,
        });
    }

    let (Some(desc_dir), Some(model_dir)) = (&paths.descriptors, &paths.models) else {
        return Err(CliError::input(
            "missing input: set `paths.window_scores`, or both `paths.descriptors` and `paths.models`",
        ));
    };
    manifest.record_input("descriptors", desc_dir)?;
    manifest.record_input("models", model_dir)?;
    let models = ModelSet::load(model_dir)?;
    let sequences = formats::read_descriptor_dir(desc_dir)?;
    if let Some(s) = sequences.iter().find(|s| s.dim() != models.pca.input_dim()) {
        return Err(CliError::input_at(
            &desc_dir.join(format!("{}.jsonl", s.video_id())),
            format!(
                "field `vec` has length {}, PCA expects {}",
                s.dim(),
                models.pca.input_dim()
            ),
        ));
    }
    let videos = ctx.par_map(&sequences, |seq| score_sequence(seq, &models, win))?;
    Ok(ScoredInput {
        classes: models.svm.classes().to_vec(),
        videos,
    })
}

fn encode_window<'a>(
    frames: impl Iterator<Item = &'a [f64]>,
    pca: &PcaModel,
    gmm: &GmmModel,
) -> Result<Option<FisherVector>> {
    let projected: Vec<Vec<f64>> = frames
        .map(|f| pca.project(f))
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| CliError::input(e.to_string()))?;
    if projected.is_empty() {
        return Ok(None);
    }
    let fv = fisher_encode(&projected, gmm).map_err(|e| CliError::internal(e.to_string()))?;
    Ok(Some(power_l2_normalize(fv)))
}

/// Encodes and scores every sliding window of one descriptor stream.
fn score_sequence(seq: &DescriptorSequence, models: &ModelSet, win: &SlidingWindowConfig) -> Result<VideoWindows> {
    let length = seq.video_length();
    let mut windows = Vec::new();
    for (start, end) in generate_windows(length, win) {
        let Some(fv) = encode_window(seq.window(start, end), &models.pca, &models.gmm)? else {
            continue;
        };
        let scores: Vec<f64> = score_ovr(&models.svm, &fv)
            .map_err(|e| CliError::internal(e.to_string()))?
            .into_iter()
            .map(|(_, s)| s)
            .collect();
        let (class_id, score) = argmax_class(&scores).expect("model has classes");
        windows.push(ActionWindow {
            start,
            end,
            class_id,
            score,
        });
    }
    Ok(VideoWindows {
        video_id: seq.video_id().to_string(),
        windows,
        length,
    })
}

fn segment_all(
    ctx: &Context,
    input: &ScoredInput,
    win: &SlidingWindowConfig,
    threshold: f64,
) -> Result<Vec<SegmentationResult>> {
    ctx.par_map(&input.videos, |v| {
        let kept = temporal_nms(&v.windows, win.nms_iou, win.cross_class_nms);
        segment_video(&v.video_id, &kept, threshold, v.length)
            .map_err(|e| CliError::input(format!("{}: {e}", v.video_id)))
    })
}

// ---------------------------------------------------------------- segment

pub fn segment(ctx: &Context, out: &Path) -> Result<String> {
    let win = ctx.config.window_config()?;
    let mut manifest = RunManifest::new("segment", &ctx.config, Some(win.score_threshold));
    let input = load_scored_windows(ctx, &win, &mut manifest)?;
    if input.videos.is_empty() {
        return Err(CliError::input("no videos to segment"));
    }
    let results = segment_all(ctx, &input, &win, win.score_threshold)?;

    let mut total = 0usize;
    for r in &results {
        let file = SegmentFile::from_result(r, &input.classes);
        let name = format!("{}.json", safe_file_stem(&r.video_id)?);
        let text = json_text(&file)?;
        formats::write_text(&out.join(&name), &text)?;
        manifest.record_output(&name, text.as_bytes());
        total += r.reported_segments();
    }
    manifest.write(out)?;
    let avg = total as f64 / results.len() as f64;
    Ok(format!(
        "segmented {} videos at threshold {} (profile {}): {avg:.3} segments/video, {} fallback",
        results.len(),
        win.score_threshold,
        ctx.config.profile.name(),
        results.iter().filter(|r| r.fallback_used).count()
    ))
}

fn json_text<T: Serialize>(value: &T) -> Result<String> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::internal(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

fn write_output(out: &Path, name: &str, text: &str, manifest: &mut RunManifest) -> Result<()> {
    formats::write_text(&out.join(name), text)?;
    manifest.record_output(name, text.as_bytes());
    Ok(())
}

// ---------------------------------------------------------------- sweep

pub fn sweep(ctx: &Context, thresholds: &[f64], out: &Path) -> Result<String> {
    if thresholds.is_empty() {
        return Err(CliError::input("no thresholds to sweep"));
    }
    let win = ctx.config.window_config()?;
    let mut manifest = RunManifest::new("sweep", &ctx.config, None);
    let input = load_scored_windows(ctx, &win, &mut manifest)?;
    if input.videos.is_empty() {
        return Err(CliError::input("no videos to sweep"));
    }
    let mut runs = Vec::with_capacity(thresholds.len());
    for &t in thresholds {
        runs.push((t, segment_all(ctx, &input, &win, t)?));
    }
    let report = sweep_thresholds(&runs).map_err(|e| CliError::internal(e.to_string()))?;
    let ascii = plot::sweep_ascii(&report);
    write_output(out, "sweep.csv", &plot::sweep_csv(&report), &mut manifest)?;
    write_output(out, "sweep.svg", &plot::sweep_svg(&report), &mut manifest)?;
    write_output(out, "sweep.txt", &ascii, &mut manifest)?;
    manifest.write(out)?;
    Ok(ascii)
}

// ---------------------------------------------------------------- train

/// Fits PCA and GMM on every descriptor, then one-vs-rest SVMs on the
/// labelled windows.
pub fn train(ctx: &Context, out: &Path) -> Result<String> {
    let cfg = &ctx.config;
    let desc_dir = required(&cfg.paths.descriptors, "descriptors")?;
    let labels_path = required(&cfg.paths.labels, "labels")?;
    let mut manifest = RunManifest::new("train", cfg, None);
    manifest.record_input("descriptors", desc_dir)?;
    manifest.record_input("labels", labels_path)?;

    let sequences = formats::read_descriptor_dir(desc_dir)?;
    let dim = sequences[0].dim();
    if let Some(s) = sequences.iter().find(|s| s.dim() != dim) {
        return Err(CliError::input(format!(
            "video `{}`: descriptor dimension {} differs from {dim}",
            s.video_id(),
            s.dim()
        )));
    }
    let rows: Vec<&[f64]> = sequences
        .iter()
        .flat_map(|s| s.frames().iter().map(|f| f.descriptor.as_slice()))
        .collect();
    let data = Matrix::from_rows(&rows).expect("uniform dimension checked above");
    let pca = fit_pca(&data, cfg.encoding.pca_dim.min(dim), cfg.encoding.whiten)
        .map_err(|e| CliError::input(format!("pca: {e}")))?;
    let projected: Vec<Vec<f64>> =
        ctx.par_map(&rows, |r| pca.project(r).map_err(|e| CliError::internal(e.to_string())))?;
    let gmm = fit_gmm(
        &Matrix::from_rows(&projected).expect("uniform dimension"),
        &GmmFitConfig {
            components: cfg.encoding.gmm_components,
            iterations: cfg.encoding.gmm_iterations,
            seed: cfg.seed,
            ..GmmFitConfig::default()
        },
    )
    .map_err(|e| CliError::input(format!("gmm: {e}")))?;

    let labels = formats::read_labels(labels_path)?;
    let by_id: BTreeMap<&str, &DescriptorSequence> = sequences.iter().map(|s| (s.video_id(), s)).collect();
    let encoded = ctx.par_map(&labels, |l| {
        let seq = by_id
            .get(l.video_id.as_str())
            .ok_or_else(|| CliError::input_at(labels_path, format!("unknown video `{}`", l.video_id)))?;
        encode_window(seq.window(l.start, l.end), &pca, &gmm)?.ok_or_else(|| {
            CliError::input_at(
                labels_path,
                format!("window {} [{}, {}) has no frames", l.video_id, l.start, l.end),
            )
        })
    })?;
    let names: Vec<&str> = labels.iter().map(|l| l.class.as_str()).collect();
    let svm = train_ovr_linear(
        &encoded,
        &names,
        &SvmTrainConfig {
            c: cfg.encoding.svm_c,
            epochs: cfg.encoding.svm_epochs,
            seed: cfg.seed,
        },
    )
    .map_err(|e| CliError::input(format!("svm: {e}")))?;
    let models = ModelSet { pca, gmm, svm };
    models.save(out)?;
    for name in [formats::PCA_FILE, formats::GMM_FILE, formats::SVM_FILE] {
        let bytes = std::fs::read(out.join(name)).map_err(|e| CliError::io(&out.join(name), e))?;
        manifest.record_output(name, &bytes);
    }
    manifest.write(out)?;
    Ok(format!(
        "trained on {} frames and {} labelled windows: PCA {dim}->{}, GMM K={}, {} classes",
        rows.len(),
        labels.len(),
        models.pca.output_dim(),
        models.gmm.components(),
        models.svm.classes().len()
    ))
}

// ---------------------------------------------------------------- build-bank

pub fn build_bank(ctx: &Context, out: &Path) -> Result<String> {
    let cfg = &ctx.config;
    let corpus_path = required(&cfg.paths.corpus, "corpus")?;
    let grammar_path = required(&cfg.paths.grammar, "grammar")?;
    let emb_path = required(&cfg.paths.embeddings, "embeddings")?;
    let mut manifest = RunManifest::new("build-bank", cfg, None);
    manifest.record_input("corpus", corpus_path)?;
    manifest.record_input("grammar", grammar_path)?;
    manifest.record_input("embeddings", emb_path)?;

    let grammar = load_grammar(grammar_path)?;
    let pairs = formats::read_tagged_corpus(corpus_path)?;
    if pairs.is_empty() {
        return Err(CliError::input_at(corpus_path, "corpus has no sentence pairs"));
    }
    let embeddings = formats::read_embeddings(emb_path)?;
    let bank = build_connective_bank(&pairs, &grammar, &embeddings, cfg.stitch.max_bank)
        .map_err(|e| CliError::input_at(corpus_path, e.to_string()))?;

    let entries: Vec<formats::BankEntry> = bank
        .iter()
        .map(|b| formats::BankEntry {
            connective: b.connective.clone(),
            vec: b.vector.clone(),
        })
        .collect();
    write_output(out, "bank.json", &json_text(&entries)?, &mut manifest)?;
    manifest.write(out)?;
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    for b in &bank {
        *counts.entry(&b.connective).or_default() += 1;
    }
    let detail: Vec<String> = counts.iter().map(|(c, n)| format!("{c}={n}")).collect();
    Ok(format!(
        "bank: {} instances from {} pairs ({})",
        bank.len(),
        pairs.len(),
        detail.join(", ")
    ))
}

fn load_grammar(path: &Path) -> Result<Pcfg> {
    let grammar = Pcfg::parse(&formats::read_text(path)?, LoadOptions::default())
        .map_err(|e| CliError::input_at(path, e.to_string()))?;
    for w in grammar.warnings() {
        eprintln!("warning: {}: {w}", path.display());
    }
    Ok(grammar)
}

// ---------------------------------------------------------------- stitch

/// Tokenizes a caption, splits it into sentences and tags each one.
pub fn tag_caption(text: &str, tagger: &Tagger) -> Vec<Vec<TaggedToken>> {
    let mut sentences = Vec::new();
    let mut current: Vec<String> = Vec::new();
    for tok in tokenize(text) {
        let end = matches!(tok.as_str(), "." | "!" | "?");
        current.push(tok);
        if end {
            sentences.push(tagger.tag(&std::mem::take(&mut current)));
        }
    }
    if !current.is_empty() {
        sentences.push(tagger.tag(&current));
    }
    sentences
}

enum StitchOutcome {
    Done(StitchedVideo),
    Skipped(String),
}

pub fn stitch(ctx: &Context, out: &Path) -> Result<String> {
    let cfg = &ctx.config;
    let paths = &cfg.paths;
    let captions_path = required(&paths.captions, "captions")?;
    let bank_path = required(&paths.bank, "bank")?;
    let emb_path = required(&paths.embeddings, "embeddings")?;
    let lex_path = required(&paths.gender_lexicon, "gender_lexicon")?;
    let mut manifest = RunManifest::new("stitch", cfg, None);
    manifest.record_input("captions", captions_path)?;
    manifest.record_input("bank", bank_path)?;
    manifest.record_input("embeddings", emb_path)?;
    manifest.record_input("gender_lexicon", lex_path)?;
    for (role, p) in [
        ("lemma_exceptions", &paths.lemma_exceptions),
        ("tagger_lexicon", &paths.tagger_lexicon),
        ("segments", &paths.segments),
    ] {
        if let Some(p) = p {
            manifest.record_input(role, p)?;
        }
    }

    let docs = formats::read_captions(captions_path)?;
    let bank = formats::read_bank(bank_path)?;
    let embeddings = formats::read_embeddings(emb_path)?;
    if bank[0].vector.len() != embeddings.dim() {
        return Err(CliError::input_at(
            bank_path,
            format!(
                "field `vec` has length {}, embeddings have dim {}",
                bank[0].vector.len(),
                embeddings.dim()
            ),
        ));
    }
    let lexicon = formats::read_gender_lexicon(lex_path)?;
    let lemmatizer = formats::read_lemmatizer(paths.lemma_exceptions.as_deref())?;
    let tagger = formats::load_tagger(paths.tagger_lexicon.as_deref())?;
    let segments = paths.segments.as_deref().map(formats::read_segment_dir).transpose()?;
    let resources = StitchResources {
        lexicon: &lexicon,
        lemmatizer: &lemmatizer,
        embeddings: &embeddings,
        bank: &bank,
    };
    let on_missing = cfg.stitch.on_missing;

    let outcomes = ctx.par_map(&docs, |doc| {
        stitch_video(doc, segments.as_ref(), &resources, &tagger, on_missing, captions_path)
    })?;

    let mut videos = Vec::new();
    let mut skipped = Vec::new();
    for o in outcomes {
        match o {
            StitchOutcome::Done(v) => videos.push(v),
            StitchOutcome::Skipped(id) => skipped.push(id),
        }
    }
    let avg_length = if videos.is_empty() {
        0.0
    } else {
        videos.iter().map(|v| v.words).sum::<usize>() as f64 / videos.len() as f64
    };
    let file = StitchedFile {
        videos,
        skipped,
        avg_length,
    };
    write_output(out, "stitched.json", &json_text(&file)?, &mut manifest)?;
    manifest.write(out)?;
    Ok(format!(
        "stitched {} videos ({} skipped); average length {avg_length:.2} words",
        file.videos.len(),
        file.skipped.len()
    ))
}

fn stitch_video(
    doc: &CaptionsFile,
    segments: Option<&BTreeMap<String, SegmentFile>>,
    res: &StitchResources<'_>,
    tagger: &Tagger,
    on_missing: OnMissing,
    captions_path: &Path,
) -> Result<StitchOutcome> {
    let mut captions = doc.captions.clone();
    captions.sort_by_key(|c| c.segment_index);
    if let Some(w) = captions.windows(2).find(|w| w[0].segment_index == w[1].segment_index) {
        return Err(CliError::input_at(
            captions_path,
            format!(
                "video `{}`: two captions for segment {}",
                doc.video_id, w[0].segment_index
            ),
        ));
    }

    let mut missing = Vec::new();
    if let Some(segs) = segments {
        let seg = segs.get(&doc.video_id).ok_or_else(|| {
            CliError::input_at(captions_path, format!("video `{}` has no segment file", doc.video_id))
        })?;
        let n = seg.segments.len();
        if let Some(c) = captions.iter().find(|c| c.segment_index >= n) {
            return Err(CliError::input_at(
                captions_path,
                format!(
                    "video `{}`: caption for segment {} but only {n} segments",
                    doc.video_id, c.segment_index
                ),
            ));
        }
        missing = (0..n)
            .filter(|i| !captions.iter().any(|c| c.segment_index == *i))
            .collect();
    }
    if captions.is_empty() && missing.is_empty() {
        missing.push(0);
    }

    let passthrough = |captions: &[formats::CaptionEntry]| {
        let text = captions.iter().map(|c| c.text.trim()).collect::<Vec<_>>().join(" ");
        StitchOutcome::Done(StitchedVideo {
            video_id: doc.video_id.clone(),
            words: normalize(&text).len(),
            text,
            stitched: false,
        })
    };

    if !missing.is_empty() {
        let list: Vec<String> = missing.iter().map(usize::to_string).collect();
        eprintln!(
            "warning: video `{}`: no caption for segment(s) {}; {}",
            doc.video_id,
            list.join(", "),
            match on_missing {
                OnMissing::Skip => "skipped",
                OnMissing::Passthrough => "passed through",
            }
        );
        return Ok(match on_missing {
            OnMissing::Skip => StitchOutcome::Skipped(doc.video_id.clone()),
            OnMissing::Passthrough => passthrough(&captions),
        });
    }
    if captions.len() == 1 {
        return Ok(passthrough(&captions));
    }

    let sentences: Vec<Vec<TaggedToken>> = captions.iter().flat_map(|c| tag_caption(&c.text, tagger)).collect();
    let caption_doc = CaptionDoc::new(doc.video_id.clone(), sentences)
        .map_err(|e| CliError::input_at(captions_path, format!("video `{}`: {e}", doc.video_id)))?;
    let stitched =
        stitch_doc(&caption_doc, res).map_err(|e| CliError::input(format!("video `{}`: {e}", doc.video_id)))?;
    let text = stitched.stitched().unwrap_or_default().to_string();
    Ok(StitchOutcome::Done(StitchedVideo {
        video_id: doc.video_id.clone(),
        words: normalize(&text).len(),
        text,
        stitched: true,
    }))
}

// ---------------------------------------------------------------- evaluate

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VideoScores {
    pub video_id: String,
    pub bleu4: f64,
    pub cider: f64,
    pub meteor: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SystemReport {
    pub name: String,
    pub bleu4: f64,
    pub cider: f64,
    pub meteor: f64,
    pub avg_length: f64,
    pub per_video: Vec<VideoScores>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub videos: usize,
    pub systems: Vec<SystemReport>,
}

fn score_system(
    name: &str,
    file: &StitchedFile,
    source: &Path,
    refs: &BTreeMap<String, Vec<String>>,
    refs_path: &Path,
) -> Result<SystemReport> {
    let mut by_id: BTreeMap<&str, &StitchedVideo> = BTreeMap::new();
    for v in &file.videos {
        if by_id.insert(&v.video_id, v).is_some() {
            return Err(CliError::input_at(source, format!("duplicate video `{}`", v.video_id)));
        }
    }
    if let Some(id) = by_id.keys().find(|id| !refs.contains_key(**id)) {
        return Err(CliError::input_at(refs_path, format!("no references for video `{id}`")));
    }
    if let Some(id) = refs.keys().find(|id| !by_id.contains_key(id.as_str())) {
        return Err(CliError::input_at(source, format!("no caption for video `{id}`")));
    }
    let ids: Vec<&str> = refs.keys().map(String::as_str).collect();
    let hyps: Vec<Vec<String>> = ids.iter().map(|id| normalize(&by_id[id].text)).collect();
    let references: Vec<Vec<Vec<String>>> = ids
        .iter()
        .map(|id| refs[*id].iter().map(|r| normalize(r)).collect())
        .collect();
    let report = metrics::evaluate(&hyps, &references).map_err(|e| CliError::input_at(source, e.to_string()))?;
    let Scores { bleu4, cider, meteor } = report.corpus;
    Ok(SystemReport {
        name: name.to_string(),
        bleu4,
        cider,
        meteor,
        avg_length: hyps.iter().map(Vec::len).sum::<usize>() as f64 / hyps.len() as f64,
        per_video: ids
            .iter()
            .zip(&report.per_item)
            .map(|(id, s)| VideoScores {
                video_id: id.to_string(),
                bleu4: s.bleu4,
                cider: s.cider,
                meteor: s.meteor,
            })
            .collect(),
    })
}

/// Aligned table in the column order BLEU-4, CIDEr, METEOR.
pub fn render_table(report: &Report) -> String {
    let width = report
        .systems
        .iter()
        .map(|s| s.name.len())
        .max()
        .unwrap_or(0)
        .max("system".len());
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<width$}  {:>8}  {:>8}  {:>8}  {:>8}",
        "system", "BLEU-4", "CIDEr", "METEOR", "length"
    );
    for s in &report.systems {
        let _ = writeln!(
            out,
            "{:<width$}  {:>8.4}  {:>8.4}  {:>8.4}  {:>8.2}",
            s.name, s.bleu4, s.cider, s.meteor, s.avg_length
        );
    }
    out
}

pub fn evaluate(ctx: &Context, out: &Path) -> Result<String> {
    let cfg = &ctx.config;
    let stitched_path = required(&cfg.paths.stitched, "stitched")?;
    let refs_path = required(&cfg.paths.references, "references")?;
    let mut manifest = RunManifest::new("evaluate", cfg, None);
    manifest.record_input("stitched", stitched_path)?;
    manifest.record_input("references", refs_path)?;
    let refs = formats::read_references(refs_path)?;
    if refs.is_empty() {
        return Err(CliError::input_at(refs_path, "no references"));
    }

    let mut systems = vec![score_system(
        "stitched",
        &formats::read_json(stitched_path)?,
        stitched_path,
        &refs,
        refs_path,
    )?];
    if let Some(base) = &cfg.paths.baseline {
        manifest.record_input("baseline", base)?;
        systems.push(score_system(
            "mid-frame",
            &formats::read_json(base)?,
            base,
            &refs,
            refs_path,
        )?);
    }
    let report = Report {
        videos: refs.len(),
        systems,
    };
    let table = render_table(&report);
    write_output(out, "report.json", &json_text(&report)?, &mut manifest)?;
    write_output(out, "report.txt", &table, &mut manifest)?;
    manifest.write(out)?;
    Ok(table)
}
