//! Readers and writers for every file the pipeline touches.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use storyline_core::encoding::{DescriptorSequence, Frame, GmmModel, LinearOvrModel, PcaModel};
use storyline_core::grammar::ConnectiveInstance;
use storyline_core::linalg::Matrix;
use storyline_core::localization::{argmax_class, ActionWindow, SegmentationResult};
use storyline_core::stitching::{EmbeddingTable, Gender, GenderLexicon, Lemmatizer, LexiconEntry};
use storyline_core::text::{parse_tagged, TaggedToken, Tagger};

use crate::error::{CliError, Result};

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Pretty JSON with a trailing newline.
pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::internal(e.to_string()))?;
    text.push('\n');
    write_text(path, &text)
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    serde_json::from_str(&read_text(path)?).map_err(|e| CliError::input_at(path, e.to_string()))
}

/// Files in `dir` with the given extension, sorted by name.
pub fn list_files(dir: &Path, extension: &str) -> Result<Vec<PathBuf>> {
    let entries = fs::read_dir(dir).map_err(|e| CliError::io(dir, e))?;
    let mut out = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| CliError::io(dir, e))?.path();
        if path.is_file() && path.extension().is_some_and(|x| x == extension) {
            out.push(path);
        }
    }
    out.sort();
    Ok(out)
}

fn stem_of(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn field_error(path: &Path, field: &str, reason: impl std::fmt::Display) -> CliError {
    CliError::input_at(path, format!("field `{field}`: {reason}"))
}

// ---------------------------------------------------------------- descriptors

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DescriptorLine {
    frame: u64,
    vec: Vec<f64>,
}

/// One descriptor stream per `.jsonl` file; the file stem is the video id.
pub fn read_descriptors(path: &Path) -> Result<DescriptorSequence> {
    let mut frames = Vec::new();
    for (i, line) in read_text(path)?.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let d: DescriptorLine =
            serde_json::from_str(line).map_err(|e| CliError::input_at(path, format!("line {}: {e}", i + 1)))?;
        if let Some(first) = frames.first() {
            let first: &Frame = first;
            if d.vec.len() != first.descriptor.len() {
                return Err(CliError::input_at(
                    path,
                    format!(
                        "line {}: field `vec` has length {}, expected {}",
                        i + 1,
                        d.vec.len(),
                        first.descriptor.len()
                    ),
                ));
            }
        }
        frames.push(Frame {
            index: d.frame,
            descriptor: d.vec,
        });
    }
    DescriptorSequence::new(stem_of(path), frames).map_err(|e| CliError::input_at(path, e.to_string()))
}

pub fn read_descriptor_dir(dir: &Path) -> Result<Vec<DescriptorSequence>> {
    let files = list_files(dir, "jsonl")?;
    if files.is_empty() {
        return Err(CliError::input_at(dir, "no descriptor files (*.jsonl)"));
    }
    files.iter().map(|f| read_descriptors(f)).collect()
}

// ---------------------------------------------------------------- models

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PcaFile {
    pub input_dim: usize,
    pub output_dim: usize,
    pub whiten: bool,
    pub mean: Vec<f64>,
    /// `input_dim` rows of `output_dim` columns; column j is component j.
    pub projection: Vec<Vec<f64>>,
    pub eigenvalues: Vec<f64>,
}

impl PcaFile {
    pub fn from_model(m: &PcaModel) -> Self {
        let p = m.projection();
        Self {
            input_dim: m.input_dim(),
            output_dim: m.output_dim(),
            whiten: m.whiten(),
            mean: m.mean().to_vec(),
            projection: (0..p.rows()).map(|r| p.row(r).to_vec()).collect(),
            eigenvalues: m.eigenvalues().to_vec(),
        }
    }

    pub fn into_model(self, path: &Path) -> Result<PcaModel> {
        check_len(path, "mean", self.mean.len(), self.input_dim)?;
        check_len(path, "projection", self.projection.len(), self.input_dim)?;
        for row in &self.projection {
            check_len(path, "projection[row]", row.len(), self.output_dim)?;
        }
        check_len(path, "eigenvalues", self.eigenvalues.len(), self.output_dim)?;
        let projection =
            Matrix::from_rows(&self.projection).ok_or_else(|| field_error(path, "projection", "ragged rows"))?;
        PcaModel::new(self.mean, projection, self.eigenvalues, self.whiten)
            .map_err(|e| CliError::input_at(path, e.to_string()))
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GmmFile {
    pub components: usize,
    pub dim: usize,
    pub variance_floor: f64,
    pub weights: Vec<f64>,
    pub means: Vec<Vec<f64>>,
    pub variances: Vec<Vec<f64>>,
}

impl GmmFile {
    pub fn from_model(m: &GmmModel) -> Self {
        Self {
            components: m.components(),
            dim: m.dim(),
            variance_floor: m.variance_floor(),
            weights: m.weights().to_vec(),
            means: m.means().to_vec(),
            variances: m.variances().to_vec(),
        }
    }

    pub fn into_model(self, path: &Path) -> Result<GmmModel> {
        check_len(path, "weights", self.weights.len(), self.components)?;
        check_len(path, "means", self.means.len(), self.components)?;
        check_len(path, "variances", self.variances.len(), self.components)?;
        for (field, rows) in [("means", &self.means), ("variances", &self.variances)] {
            for r in rows {
                check_len(path, field, r.len(), self.dim)?;
            }
        }
        GmmModel::new(self.weights, self.means, self.variances, self.variance_floor)
            .map_err(|e| CliError::input_at(path, e.to_string()))
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SvmFile {
    pub classes: Vec<String>,
    pub dim: usize,
    pub c: f64,
    pub weights: Vec<Vec<f64>>,
    pub biases: Vec<f64>,
}

impl SvmFile {
    pub fn from_model(m: &LinearOvrModel) -> Self {
        Self {
            classes: m.classes().to_vec(),
            dim: m.dim(),
            c: m.c(),
            weights: m.weights().to_vec(),
            biases: m.biases().to_vec(),
        }
    }

    pub fn into_model(self, path: &Path) -> Result<LinearOvrModel> {
        check_len(path, "weights", self.weights.len(), self.classes.len())?;
        check_len(path, "biases", self.biases.len(), self.classes.len())?;
        for w in &self.weights {
            check_len(path, "weights[row]", w.len(), self.dim)?;
        }
        LinearOvrModel::new(self.classes, self.weights, self.biases, self.c)
            .map_err(|e| CliError::input_at(path, e.to_string()))
    }
}

fn check_len(path: &Path, field: &str, found: usize, expected: usize) -> Result<()> {
    if found == expected {
        Ok(())
    } else {
        Err(field_error(path, field, format!("length {found}, expected {expected}")))
    }
}

/// PCA, GMM and SVM models stored side by side in one directory.
pub struct ModelSet {
    pub pca: PcaModel,
    pub gmm: GmmModel,
    pub svm: LinearOvrModel,
}

pub const PCA_FILE: &str = "pca.json";
pub const GMM_FILE: &str = "gmm.json";
pub const SVM_FILE: &str = "svm.json";

impl ModelSet {
    pub fn load(dir: &Path) -> Result<Self> {
        let (p, g, s) = (dir.join(PCA_FILE), dir.join(GMM_FILE), dir.join(SVM_FILE));
        let pca = read_json::<PcaFile>(&p)?.into_model(&p)?;
        let gmm = read_json::<GmmFile>(&g)?.into_model(&g)?;
        let svm = read_json::<SvmFile>(&s)?.into_model(&s)?;
        if gmm.dim() != pca.output_dim() {
            return Err(field_error(
                &g,
                "dim",
                format!("{} but PCA outputs {}", gmm.dim(), pca.output_dim()),
            ));
        }
        if svm.dim() != 2 * gmm.components() * gmm.dim() {
            return Err(field_error(
                &s,
                "dim",
                format!(
                    "{} but the GMM encodes to {}",
                    svm.dim(),
                    2 * gmm.components() * gmm.dim()
                ),
            ));
        }
        Ok(Self { pca, gmm, svm })
    }

    pub fn save(&self, dir: &Path) -> Result<()> {
        write_json(&dir.join(PCA_FILE), &PcaFile::from_model(&self.pca))?;
        write_json(&dir.join(GMM_FILE), &GmmFile::from_model(&self.gmm))?;
        write_json(&dir.join(SVM_FILE), &SvmFile::from_model(&self.svm))
    }
}

/// Training labels: CSV `video_id,start,end,class`.
#[derive(Debug, Clone, Deserialize)]
pub struct LabelRow {
    pub video_id: String,
    pub start: u64,
    pub end: u64,
    pub class: String,
}

pub fn read_labels(path: &Path) -> Result<Vec<LabelRow>> {
    read_csv(path)
}

fn read_csv<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| csv_error(path, e))?;
    reader
        .deserialize()
        .map(|r| r.map_err(|e| csv_error(path, e)))
        .collect()
}

fn csv_error(path: &Path, e: csv::Error) -> CliError {
    match e.kind() {
        csv::ErrorKind::Io(_) => CliError::input_at(path, e.to_string()),
        _ => CliError::input_at(path, format!("csv: {e}")),
    }
}

// ---------------------------------------------------------------- window scores

#[derive(Debug, Deserialize)]
struct ScoreRow {
    video_id: String,
    start: u64,
    end: u64,
    class: String,
    score: f64,
}

/// Scored windows per video. Class ids index `classes`, which is sorted.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowScores {
    pub classes: Vec<String>,
    pub videos: BTreeMap<String, Vec<ActionWindow>>,
}

/// Reads CSV `video_id,start,end,class,score` (one row per window and class)
/// and keeps each window's best class.
pub fn read_window_scores(path: &Path) -> Result<WindowScores> {
    let rows: Vec<ScoreRow> = read_csv(path)?;
    if rows.is_empty() {
        return Err(CliError::input_at(path, "no window scores"));
    }
    let mut classes: Vec<String> = rows.iter().map(|r| r.class.clone()).collect();
    classes.sort();
    classes.dedup();
    let mut grid: BTreeMap<(String, u64, u64), Vec<f64>> = BTreeMap::new();
    for (i, r) in rows.iter().enumerate() {
        if r.start >= r.end {
            return Err(CliError::input_at(
                path,
                format!("row {}: start {} >= end {}", i + 2, r.start, r.end),
            ));
        }
        if !r.score.is_finite() {
            return Err(CliError::input_at(
                path,
                format!("row {}: field `score` is not finite", i + 2),
            ));
        }
        let c = classes.binary_search(&r.class).expect("class collected above");
        let scores = grid
            .entry((r.video_id.clone(), r.start, r.end))
            .or_insert_with(|| vec![f64::NEG_INFINITY; classes.len()]);
        if scores[c] != f64::NEG_INFINITY {
            return Err(CliError::input_at(
                path,
                format!(
                    "row {}: duplicate score for {} [{}, {}) {}",
                    i + 2,
                    r.video_id,
                    r.start,
                    r.end,
                    r.class
                ),
            ));
        }
        scores[c] = r.score;
    }
    let mut videos: BTreeMap<String, Vec<ActionWindow>> = BTreeMap::new();
    for ((video, start, end), scores) in grid {
        let (class_id, score) = argmax_class(&scores).expect("at least one class per window");
        videos.entry(video).or_default().push(ActionWindow {
            start,
            end,
            class_id,
            score,
        });
    }
    Ok(WindowScores { classes, videos })
}

#[derive(Debug, Deserialize)]
struct LengthRow {
    video_id: String,
    length: u64,
}

/// CSV `video_id,length` in frames.
pub fn read_lengths(path: &Path) -> Result<BTreeMap<String, u64>> {
    Ok(read_csv::<LengthRow>(path)?
        .into_iter()
        .map(|r| (r.video_id, r.length))
        .collect())
}

// ---------------------------------------------------------------- segments

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentEntry {
    pub start: u64,
    pub end: u64,
    /// `None` on the whole-video fallback segment.
    pub class: Option<String>,
    pub keyframe: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentFile {
    pub video_id: String,
    pub fallback: bool,
    pub segments: Vec<SegmentEntry>,
}

impl SegmentFile {
    pub fn from_result(r: &SegmentationResult, classes: &[String]) -> Self {
        Self {
            video_id: r.video_id.clone(),
            fallback: r.fallback_used,
            segments: r
                .segments
                .iter()
                .map(|s| SegmentEntry {
                    start: s.start,
                    end: s.end,
                    class: (!r.fallback_used).then(|| classes[s.class_id].clone()),
                    keyframe: s.keyframe,
                })
                .collect(),
        }
    }
}

/// Every `*.json` segment file in `dir` except the run manifest, keyed by
/// video id.
pub fn read_segment_dir(dir: &Path) -> Result<BTreeMap<String, SegmentFile>> {
    let mut out = BTreeMap::new();
    for f in list_files(dir, "json")? {
        if f.file_name().is_some_and(|n| n == crate::manifest::MANIFEST_FILE) {
            continue;
        }
        let s: SegmentFile = read_json(&f)?;
        out.insert(s.video_id.clone(), s);
    }
    if out.is_empty() {
        return Err(CliError::input_at(dir, "no segment files"));
    }
    Ok(out)
}

// ---------------------------------------------------------------- tagged corpus and bank

/// One sentence pair per line, TAB between the sentences.
pub fn read_tagged_corpus(path: &Path) -> Result<Vec<(Vec<TaggedToken>, Vec<TaggedToken>)>> {
    let mut pairs = Vec::new();
    for (i, line) in read_text(path)?.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let (a, b) = line
            .split_once('\t')
            .ok_or_else(|| CliError::input_at(path, format!("line {}: expected two TAB-separated sentences", i + 1)))?;
        let parse = |s: &str| parse_tagged(s).map_err(|e| CliError::input_at(path, format!("line {}: {e}", i + 1)));
        pairs.push((parse(a)?, parse(b)?));
    }
    Ok(pairs)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BankEntry {
    pub connective: String,
    pub vec: Vec<f64>,
}

pub fn write_bank(path: &Path, bank: &[ConnectiveInstance]) -> Result<()> {
    let entries: Vec<BankEntry> = bank
        .iter()
        .map(|b| BankEntry {
            connective: b.connective.clone(),
            vec: b.vector.clone(),
        })
        .collect();
    write_json(path, &entries)
}

pub fn read_bank(path: &Path) -> Result<Vec<ConnectiveInstance>> {
    let entries: Vec<BankEntry> = read_json(path)?;
    if entries.is_empty() {
        return Err(CliError::input_at(path, "bank is empty"));
    }
    let dim = entries[0].vec.len();
    entries
        .into_iter()
        .enumerate()
        .map(|(i, e)| {
            if e.vec.len() != dim {
                return Err(CliError::input_at(
                    path,
                    format!("entry {i}: field `vec` has length {}, expected {dim}", e.vec.len()),
                ));
            }
            Ok(ConnectiveInstance {
                connective: e.connective,
                vector: e.vec,
                source_pair: i,
            })
        })
        .collect()
}

// ---------------------------------------------------------------- captions

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaptionEntry {
    pub segment_index: usize,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaptionsFile {
    pub video_id: String,
    pub captions: Vec<CaptionEntry>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    Many(Vec<CaptionsFile>),
    One(CaptionsFile),
}

/// A JSON array of caption documents, a single document, or a directory of
/// such files. Sorted by video id; duplicates are rejected.
pub fn read_captions(path: &Path) -> Result<Vec<CaptionsFile>> {
    let files = if path.is_dir() {
        list_files(path, "json")?
    } else {
        vec![path.to_path_buf()]
    };
    let mut docs = Vec::new();
    for f in &files {
        match read_json::<OneOrMany>(f)? {
            OneOrMany::Many(v) => docs.extend(v),
            OneOrMany::One(d) => docs.push(d),
        }
    }
    if docs.is_empty() {
        return Err(CliError::input_at(path, "no captions"));
    }
    docs.sort_by(|a, b| a.video_id.cmp(&b.video_id));
    if let Some(w) = docs.windows(2).find(|w| w[0].video_id == w[1].video_id) {
        return Err(CliError::input_at(
            path,
            format!("duplicate video_id `{}`", w[0].video_id),
        ));
    }
    Ok(docs)
}

/// Closed-class words and frequent caption vocabulary. A tagger-lexicon file
/// adds to and overrides these.
const DEFAULT_TAGS: &[(&str, &str)] = &[
    ("a", "DT"),
    ("an", "DT"),
    ("the", "DT"),
    ("this", "DT"),
    ("that", "DT"),
    ("some", "DT"),
    ("another", "DT"),
    ("his", "PRP$"),
    ("her", "PRP$"),
    ("their", "PRP$"),
    ("its", "PRP$"),
    ("he", "PRP"),
    ("him", "PRP"),
    ("she", "PRP"),
    ("it", "PRP"),
    ("they", "PRP"),
    ("them", "PRP"),
    ("someone", "NN"),
    ("people", "NNS"),
    ("men", "NNS"),
    ("women", "NNS"),
    ("children", "NNS"),
    ("is", "VBZ"),
    ("are", "VBP"),
    ("was", "VBD"),
    ("were", "VBD"),
    ("has", "VBZ"),
    ("have", "VBP"),
    ("does", "VBZ"),
    ("can", "MD"),
    ("will", "MD"),
    ("in", "IN"),
    ("on", "IN"),
    ("at", "IN"),
    ("with", "IN"),
    ("into", "IN"),
    ("from", "IN"),
    ("of", "IN"),
    ("to", "TO"),
    ("by", "IN"),
    ("through", "IN"),
    ("across", "IN"),
    ("toward", "IN"),
    ("towards", "IN"),
    ("behind", "IN"),
    ("under", "IN"),
    ("over", "IN"),
    ("and", "CC"),
    ("or", "CC"),
    ("but", "CC"),
    ("then", "RB"),
    ("later", "RB"),
    ("now", "RB"),
    ("again", "RB"),
    ("away", "RB"),
    ("back", "RB"),
    ("not", "RB"),
    ("next", "JJ"),
    ("two", "CD"),
    ("three", "CD"),
    ("one", "CD"),
    ("sits", "VBZ"),
    ("stands", "VBZ"),
    ("walks", "VBZ"),
    ("runs", "VBZ"),
    ("eats", "VBZ"),
    ("drinks", "VBZ"),
    ("looks", "VBZ"),
    ("holds", "VBZ"),
    ("takes", "VBZ"),
    ("opens", "VBZ"),
    ("closes", "VBZ"),
    ("leaves", "VBZ"),
    ("enters", "VBZ"),
    ("turns", "VBZ"),
    ("smiles", "VBZ"),
    ("puts", "VBZ"),
    ("picks", "VBZ"),
    ("gets", "VBZ"),
    ("goes", "VBZ"),
    ("comes", "VBZ"),
    ("watches", "VBZ"),
    ("plays", "VBZ"),
    ("talks", "VBZ"),
    ("cooks", "VBZ"),
    ("nods", "VBZ"),
    ("sit", "VBP"),
    ("stand", "VBP"),
    ("walk", "VBP"),
    ("run", "VBP"),
    ("eat", "VBP"),
    ("play", "VBP"),
    ("look", "VBP"),
];

/// Default lexicon overlaid with `path` (TSV `token<TAB>tag`) when given.
pub fn load_tagger(path: Option<&Path>) -> Result<Tagger> {
    let mut entries: BTreeMap<String, String> = DEFAULT_TAGS
        .iter()
        .map(|(w, t)| (w.to_string(), t.to_string()))
        .collect();
    if let Some(path) = path {
        for row in read_tsv(path)? {
            let [word, tag] = two_columns(path, row)?;
            entries.insert(word.to_lowercase(), tag);
        }
    }
    Ok(Tagger::new(entries))
}

fn read_tsv(path: &Path) -> Result<Vec<(usize, Vec<String>)>> {
    Ok(read_text(path)?
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|(i, l)| (i + 1, l.split('\t').map(|c| c.trim().to_string()).collect()))
        .collect())
}

fn two_columns(path: &Path, (line, cols): (usize, Vec<String>)) -> Result<[String; 2]> {
    match <[String; 2]>::try_from(cols) {
        Ok(pair) if !pair[0].is_empty() && !pair[1].is_empty() => Ok(pair),
        _ => Err(CliError::input_at(
            path,
            format!("line {line}: expected two TAB-separated columns"),
        )),
    }
}

/// TSV `token<TAB>kind`, kind one of `male`, `female`, `neutral`, `plural`,
/// `name:male`, `name:female`, `name:neutral`.
pub fn read_gender_lexicon(path: &Path) -> Result<GenderLexicon> {
    let mut entries = Vec::new();
    for row in read_tsv(path)? {
        let line = row.0;
        let [token, kind] = two_columns(path, row)?;
        let entry = match kind.split_once(':') {
            Some(("name", g)) => Gender::parse(g).map(LexiconEntry::Name),
            Some(_) => None,
            None if kind == "plural" => Some(LexiconEntry::Plural),
            None => Gender::parse(&kind).map(LexiconEntry::Gender),
        }
        .ok_or_else(|| CliError::input_at(path, format!("line {line}: unknown kind `{kind}`")))?;
        entries.push((token, entry));
    }
    GenderLexicon::new(entries).map_err(|e| CliError::input_at(path, e.to_string()))
}

/// TSV `word<TAB>lemma`.
pub fn read_lemmatizer(path: Option<&Path>) -> Result<Lemmatizer> {
    let Some(path) = path else {
        return Ok(Lemmatizer::default());
    };
    let mut pairs = Vec::new();
    for row in read_tsv(path)? {
        pairs.push(two_columns(path, row)?);
    }
    Ok(Lemmatizer::new(pairs.into_iter().map(|[a, b]| (a, b))))
}

/// Header `count dim`, then `token v1 ... vD` per line.
pub fn read_embeddings(path: &Path) -> Result<EmbeddingTable> {
    let text = read_text(path)?;
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines
        .next()
        .ok_or_else(|| CliError::input_at(path, "empty embedding file"))?;
    let nums: Vec<usize> = header
        .split_whitespace()
        .map(str::parse)
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| CliError::input_at(path, "line 1: header must be `count dim`"))?;
    let [count, dim] = nums[..] else {
        return Err(CliError::input_at(path, "line 1: header must be `count dim`"));
    };
    let mut entries = Vec::with_capacity(count);
    for (i, line) in lines {
        let mut parts = line.split_whitespace();
        let token = parts.next().expect("non-empty line").to_string();
        let vec: Vec<f64> = parts
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| CliError::input_at(path, format!("line {}: bad number", i + 1)))?;
        if vec.len() != dim {
            return Err(CliError::input_at(
                path,
                format!(
                    "line {}: `{token}` has {} values, header says dim {dim}",
                    i + 1,
                    vec.len()
                ),
            ));
        }
        entries.push((token, vec));
    }
    if entries.len() != count {
        return Err(CliError::input_at(
            path,
            format!("header says count {count}, found {} vectors", entries.len()),
        ));
    }
    EmbeddingTable::new(dim, entries).map_err(|e| CliError::input_at(path, e.to_string()))
}

// ---------------------------------------------------------------- stitched output and references

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StitchedVideo {
    pub video_id: String,
    pub text: String,
    /// False when the captions were passed through unchanged.
    pub stitched: bool,
    pub words: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StitchedFile {
    pub videos: Vec<StitchedVideo>,
    pub skipped: Vec<String>,
    /// Mean word count over `videos`.
    pub avg_length: f64,
}

/// JSON object `{video_id: [reference, ...]}`.
pub fn read_references(path: &Path) -> Result<BTreeMap<String, Vec<String>>> {
    let refs: BTreeMap<String, Vec<String>> = read_json(path)?;
    if let Some((id, _)) = refs.iter().find(|(_, r)| r.is_empty()) {
        return Err(CliError::input_at(path, format!("video `{id}` has no references")));
    }
    Ok(refs)
}
