//! Pipeline configuration: a TOML file, then command-line overrides.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use storyline_core::localization::{Profile, SlidingWindowConfig};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ProfileName {
    #[default]
    Montreal,
    Mpii,
    Longform,
    /// No default threshold; `windows.score_threshold` must be set.
    Custom,
}

impl ProfileName {
    pub fn preset(self) -> Option<Profile> {
        match self {
            ProfileName::Montreal => Some(Profile::Montreal),
            ProfileName::Mpii => Some(Profile::Mpii),
            ProfileName::Longform => Some(Profile::Longform),
            ProfileName::Custom => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ProfileName::Montreal => "montreal",
            ProfileName::Mpii => "mpii",
            ProfileName::Longform => "longform",
            ProfileName::Custom => "custom",
        }
    }
}

/// What `stitch` does with a video whose segments are not all captioned.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OnMissing {
    /// Leave the video out of the output.
    #[default]
    Skip,
    /// Emit the captions that exist, in segment order, without stitching.
    Passthrough,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WindowSection {
    pub lengths: Vec<u64>,
    pub stride: u64,
    pub nms_iou: f64,
    /// Overrides the profile threshold when set.
    pub score_threshold: Option<f64>,
    pub cross_class_nms: bool,
}

impl Default for WindowSection {
    fn default() -> Self {
        let d = SlidingWindowConfig::default();
        Self {
            lengths: d.lengths,
            stride: d.stride,
            nms_iou: d.nms_iou,
            score_threshold: None,
            cross_class_nms: d.cross_class_nms,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EncodingSection {
    pub pca_dim: usize,
    pub whiten: bool,
    pub gmm_components: usize,
    pub gmm_iterations: usize,
    pub svm_c: f64,
    pub svm_epochs: usize,
}

impl Default for EncodingSection {
    fn default() -> Self {
        Self {
            pca_dim: 64,
            whiten: false,
            gmm_components: 256,
            gmm_iterations: 100,
            svm_c: storyline_core::encoding::DEFAULT_C,
            svm_epochs: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StitchSection {
    pub on_missing: OnMissing,
    pub max_bank: usize,
}

impl Default for StitchSection {
    fn default() -> Self {
        Self {
            on_missing: OnMissing::Skip,
            max_bank: storyline_core::grammar::DEFAULT_MAX_INSTANCES,
        }
    }
}

/// Input locations. Relative paths in a config file are resolved against
/// the file's directory.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PathSection {
    pub window_scores: Option<PathBuf>,
    pub video_lengths: Option<PathBuf>,
    pub descriptors: Option<PathBuf>,
    pub labels: Option<PathBuf>,
    pub models: Option<PathBuf>,
    pub segments: Option<PathBuf>,
    pub captions: Option<PathBuf>,
    pub stitched: Option<PathBuf>,
    pub tagger_lexicon: Option<PathBuf>,
    pub embeddings: Option<PathBuf>,
    pub grammar: Option<PathBuf>,
    pub corpus: Option<PathBuf>,
    pub bank: Option<PathBuf>,
    pub gender_lexicon: Option<PathBuf>,
    pub lemma_exceptions: Option<PathBuf>,
    pub references: Option<PathBuf>,
    pub baseline: Option<PathBuf>,
}

impl PathSection {
    fn entries_mut(&mut self) -> [(&'static str, &mut Option<PathBuf>); 17] {
        [
            ("window_scores", &mut self.window_scores),
            ("video_lengths", &mut self.video_lengths),
            ("descriptors", &mut self.descriptors),
            ("labels", &mut self.labels),
            ("models", &mut self.models),
            ("segments", &mut self.segments),
            ("captions", &mut self.captions),
            ("stitched", &mut self.stitched),
            ("tagger_lexicon", &mut self.tagger_lexicon),
            ("embeddings", &mut self.embeddings),
            ("grammar", &mut self.grammar),
            ("corpus", &mut self.corpus),
            ("bank", &mut self.bank),
            ("gender_lexicon", &mut self.gender_lexicon),
            ("lemma_exceptions", &mut self.lemma_exceptions),
            ("references", &mut self.references),
            ("baseline", &mut self.baseline),
        ]
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub profile: ProfileName,
    pub seed: u64,
    pub windows: WindowSection,
    pub encoding: EncodingSection,
    pub stitch: StitchSection,
    pub paths: PathSection,
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut cfg: Self = toml::from_str(&text).map_err(|e| CliError::input_at(path, e.to_string()))?;
        let base = path.parent().unwrap_or(Path::new("."));
        for (_, slot) in cfg.paths.entries_mut() {
            if let Some(p) = slot.as_mut() {
                if p.is_relative() {
                    *p = base.join(&*p);
                }
            }
        }
        Ok(cfg)
    }

    /// Every configured path must exist.
    pub fn validate_paths(&mut self) -> Result<()> {
        for (field, slot) in self.paths.entries_mut() {
            if let Some(p) = slot.as_ref() {
                if !p.exists() {
                    return Err(CliError::input_at(p, format!("`paths.{field}` does not exist")));
                }
            }
        }
        Ok(())
    }

    /// Explicit threshold if set, otherwise the profile's.
    pub fn score_threshold(&self) -> Result<f64> {
        match (self.windows.score_threshold, self.profile.preset()) {
            (Some(t), _) => Ok(t),
            (None, Some(p)) => Ok(p.score_threshold()),
            (None, None) => Err(CliError::input(
                "profile `custom` needs `windows.score_threshold` or --threshold",
            )),
        }
    }

    pub fn window_config(&self) -> Result<SlidingWindowConfig> {
        let cfg = SlidingWindowConfig {
            lengths: self.windows.lengths.clone(),
            stride: self.windows.stride,
            nms_iou: self.windows.nms_iou,
            score_threshold: self.score_threshold()?,
            cross_class_nms: self.windows.cross_class_nms,
        };
        cfg.validate().map_err(|e| CliError::input(format!("windows: {e}")))?;
        Ok(cfg)
    }

    /// Canonical JSON of the effective settings without `paths`, whose
    /// contents the manifest records by digest instead. The manifest hashes it.
    pub fn canonical_json(&self) -> String {
        let settings = PipelineConfig {
            paths: PathSection::default(),
            ..self.clone()
        };
        serde_json::to_string(&settings).expect("config is always serializable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_thresholds() {
        for (p, t) in [
            (ProfileName::Montreal, -0.5),
            (ProfileName::Mpii, -1.0),
            (ProfileName::Longform, -0.1),
        ] {
            let cfg = PipelineConfig {
                profile: p,
                ..Default::default()
            };
            assert_eq!(cfg.score_threshold().unwrap(), t);
        }
        let custom = PipelineConfig {
            profile: ProfileName::Custom,
            ..Default::default()
        };
        assert!(custom.score_threshold().is_err());
    }

    #[test]
    fn toml_round_trip_and_relative_paths() {
        let dir = std::env::temp_dir().join(format!("storyline-cfg-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("run.toml");
        std::fs::write(
            &path,
            "profile = \"mpii\"\nseed = 7\n[windows]\nscore_threshold = -0.3\n[paths]\nbank = \"bank.json\"\n",
        )
        .unwrap();
        let cfg = PipelineConfig::load(&path).unwrap();
        assert_eq!(cfg.profile, ProfileName::Mpii);
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.score_threshold().unwrap(), -0.3);
        assert_eq!(cfg.paths.bank.as_deref(), Some(dir.join("bank.json").as_path()));
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn canonical_json_ignores_locations() {
        let mut a = PipelineConfig::default();
        let b = a.clone();
        a.paths.bank = Some("/elsewhere/bank.json".into());
        assert_eq!(a.canonical_json(), b.canonical_json());
        a.seed = 1;
        assert_ne!(a.canonical_json(), b.canonical_json());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<PipelineConfig>("threshold = 1.0").is_err());
    }
}
