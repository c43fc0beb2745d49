//! Temporal segmentation from scored sliding windows.
//!
//! Windows are half-open frame intervals `[start, end)`. Each window carries
//! the index of its single best class. Non-maximum suppression runs per class
//! with temporal IoU as the overlap measure. Windows scoring below the
//! threshold are dropped, and runs of overlapping or abutting windows of one
//! class become a segment whose keyframe is its midpoint.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

/// Dataset presets for the score threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Profile {
    /// Movie clips; threshold -0.5.
    Montreal,
    /// Shorter movie clips; threshold -1.0.
    Mpii,
    /// Minutes-long web videos; threshold -0.1.
    Longform,
}

impl Profile {
    pub fn score_threshold(self) -> f64 {
        match self {
            Profile::Montreal => -0.5,
            Profile::Mpii => -1.0,
            Profile::Longform => -0.1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Profile::Montreal => "montreal",
            Profile::Mpii => "mpii",
            Profile::Longform => "longform",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "montreal" => Some(Profile::Montreal),
            "mpii" => Some(Profile::Mpii),
            "longform" => Some(Profile::Longform),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlidingWindowConfig {
    pub lengths: Vec<u64>,
    pub stride: u64,
    pub nms_iou: f64,
    pub score_threshold: f64,
    /// Suppress across classes instead of within each class.
    pub cross_class_nms: bool,
}

impl SlidingWindowConfig {
    pub fn for_profile(profile: Profile) -> Self {
        Self {
            score_threshold: profile.score_threshold(),
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), LocalizationError> {
        if self.stride == 0 {
            return Err(LocalizationError::Config("stride must be positive"));
        }
        if self.lengths.is_empty() {
            return Err(LocalizationError::Config("at least one window length is required"));
        }
        if self.lengths.iter().any(|&l| l == 0 || l % self.stride != 0) {
            return Err(LocalizationError::Config(
                "window lengths must be positive multiples of the stride",
            ));
        }
        if !(0.0..=1.0).contains(&self.nms_iou) {
            return Err(LocalizationError::Config("nms_iou must lie in [0, 1]"));
        }
        if !self.score_threshold.is_finite() {
            return Err(LocalizationError::Config("score_threshold must be finite"));
        }
        Ok(())
    }
}

impl Default for SlidingWindowConfig {
    fn default() -> Self {
        Self {
            lengths: alloc::vec![30, 60, 90, 120],
            stride: 30,
            nms_iou: 0.2,
            score_threshold: Profile::Montreal.score_threshold(),
            cross_class_nms: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LocalizationError {
    #[error("invalid window config: {0}")]
    Config(&'static str),
    #[error("window [{start}, {end}) is empty or exceeds video length {video_length}")]
    InvalidWindow { start: u64, end: u64, video_length: u64 },
    #[error("threshold {threshold}: video set differs from the first threshold (`{video_id}`)")]
    VideoSetMismatch { threshold: f64, video_id: String },
    #[error("no thresholds to sweep")]
    EmptySweep,
}

/// A scored window labelled with its best class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActionWindow {
    pub start: u64,
    pub end: u64,
    pub class_id: usize,
    pub score: f64,
}

impl ActionWindow {
    pub fn len(&self) -> u64 {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end <= self.start
    }
}

/// Intersection over union of two half-open frame intervals.
pub fn temporal_iou(a: &ActionWindow, b: &ActionWindow) -> f64 {
    let inter = a.end.min(b.end).saturating_sub(a.start.max(b.start));
    let union = a.end.max(b.end) - a.start.min(b.start);
    if union == 0 || inter == 0 {
        return 0.0;
    }
    // The hull overcounts the union when the windows are disjoint, but then
    // the intersection is zero and we returned above.
    inter as f64 / union as f64
}

/// Every `[k·stride, k·stride + L)` that fits inside the video, ordered by
/// start then length.
pub fn generate_windows(video_length: u64, cfg: &SlidingWindowConfig) -> Vec<(u64, u64)> {
    let mut out = BTreeSet::new();
    if cfg.stride == 0 {
        return Vec::new();
    }
    for &len in &cfg.lengths {
        if len == 0 {
            continue;
        }
        let mut start = 0;
        while start + len <= video_length {
            out.insert((start, start + len));
            start += cfg.stride;
        }
    }
    out.into_iter().collect()
}

/// Picks the highest score per row; ties go to the lower class index.
pub fn argmax_class(scores: &[f64]) -> Option<(usize, f64)> {
    let mut best: Option<(usize, f64)> = None;
    for (i, &s) in scores.iter().enumerate() {
        match best {
            Some((_, b)) if s <= b => {}
            _ => best = Some((i, s)),
        }
    }
    best
}

/// Priority order: higher score, then earlier start, shorter window, lower
/// class index.
fn priority(a: &ActionWindow, b: &ActionWindow) -> Ordering {
    b.score
        .total_cmp(&a.score)
        .then(a.start.cmp(&b.start))
        .then(a.len().cmp(&b.len()))
        .then(a.class_id.cmp(&b.class_id))
}

fn position(a: &ActionWindow, b: &ActionWindow) -> Ordering {
    a.start
        .cmp(&b.start)
        .then(a.end.cmp(&b.end))
        .then(a.class_id.cmp(&b.class_id))
        .then(b.score.total_cmp(&a.score))
}

/// Greedy non-maximum suppression. A window is dropped when its IoU with an
/// already kept window of the same class (any class with `cross_class`)
/// exceeds `iou_threshold`. Output is sorted by start frame.
pub fn temporal_nms(windows: &[ActionWindow], iou_threshold: f64, cross_class: bool) -> Vec<ActionWindow> {
    let mut ranked: Vec<ActionWindow> = windows.to_vec();
    ranked.sort_by(priority);
    let mut kept: Vec<ActionWindow> = Vec::new();
    for w in ranked {
        let suppressed = kept
            .iter()
            .any(|k| (cross_class || k.class_id == w.class_id) && temporal_iou(k, &w) > iou_threshold);
        if !suppressed {
            kept.push(w);
        }
    }
    kept.sort_by(position);
    kept
}

#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub start: u64,
    pub end: u64,
    pub class_id: usize,
    pub keyframe: u64,
    pub source_windows: Vec<ActionWindow>,
}

impl Segment {
    fn from_run(run: Vec<ActionWindow>) -> Self {
        let start = run.iter().map(|w| w.start).min().unwrap_or(0);
        let end = run.iter().map(|w| w.end).max().unwrap_or(0);
        Self {
            start,
            end,
            class_id: run[0].class_id,
            keyframe: midpoint(start, end),
            source_windows: run,
        }
    }
}

fn midpoint(start: u64, end: u64) -> u64 {
    start + (end - start) / 2
}

#[derive(Debug, Clone, PartialEq)]
pub struct SegmentationResult {
    pub video_id: String,
    pub video_length: u64,
    pub segments: Vec<Segment>,
    /// No window survived; `segments` holds one whole-video segment keyed on
    /// the middle frame.
    pub fallback_used: bool,
}

impl SegmentationResult {
    /// Segment count with a fallback counted as zero.
    pub fn reported_segments(&self) -> usize {
        if self.fallback_used {
            0
        } else {
            self.segments.len()
        }
    }
}

/// Thresholds and merges NMS survivors into segments.
///
/// A window whose score is strictly below `score_threshold` is dropped. The
/// survivors, sorted by start, are grouped into maximal runs where the next
/// window has the same class and starts no later than the run's end. A run
/// that starts inside the previous segment is clipped to begin at that
/// segment's end; runs swallowed entirely are dropped, and neighbours of the
/// same class that end up touching are merged again.
pub fn segment_video(
    video_id: &str,
    windows: &[ActionWindow],
    score_threshold: f64,
    video_length: u64,
) -> Result<SegmentationResult, LocalizationError> {
    for w in windows {
        if w.start >= w.end || w.end > video_length {
            return Err(LocalizationError::InvalidWindow {
                start: w.start,
                end: w.end,
                video_length,
            });
        }
    }
    let mut surviving: Vec<ActionWindow> = windows
        .iter()
        .filter(|w| !(w.score < score_threshold))
        .copied()
        .collect();
    surviving.sort_by(position);

    if surviving.is_empty() {
        let length = video_length.max(1);
        return Ok(SegmentationResult {
            video_id: video_id.into(),
            video_length,
            segments: alloc::vec![Segment {
                start: 0,
                end: length,
                class_id: 0,
                keyframe: midpoint(0, length),
                source_windows: Vec::new(),
            }],
            fallback_used: true,
        });
    }

    let mut runs: Vec<Vec<ActionWindow>> = Vec::new();
    let mut run_end = 0;
    for w in surviving {
        match runs.last_mut() {
            Some(run) if run[0].class_id == w.class_id && w.start <= run_end => {
                run_end = run_end.max(w.end);
                run.push(w);
            }
            _ => {
                run_end = w.end;
                runs.push(alloc::vec![w]);
            }
        }
    }

    let mut segments: Vec<Segment> = Vec::new();
    for run in runs {
        let mut seg = Segment::from_run(run);
        if let Some(prev) = segments.last_mut() {
            if seg.start < prev.end {
                seg.start = prev.end;
            }
            if seg.start >= seg.end {
                continue;
            }
            if prev.class_id == seg.class_id && seg.start <= prev.end {
                prev.end = seg.end;
                prev.keyframe = midpoint(prev.start, prev.end);
                prev.source_windows.extend(seg.source_windows);
                continue;
            }
        }
        seg.keyframe = midpoint(seg.start, seg.end);
        segments.push(seg);
    }

    Ok(SegmentationResult {
        video_id: video_id.into(),
        video_length,
        segments,
        fallback_used: false,
    })
}

/// Average segments per video at each threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub threshold: f64,
    pub avg_segments: f64,
    pub videos: usize,
}

/// Averages [`SegmentationResult::reported_segments`] per threshold. Every
/// threshold must cover the same set of videos.
pub fn sweep_thresholds(
    results_per_threshold: &[(f64, Vec<SegmentationResult>)],
) -> Result<SweepReport, LocalizationError> {
    let (_, first) = results_per_threshold.first().ok_or(LocalizationError::EmptySweep)?;
    let reference: BTreeSet<&str> = first.iter().map(|r| r.video_id.as_str()).collect();
    let mut rows = Vec::with_capacity(results_per_threshold.len());
    for (threshold, results) in results_per_threshold {
        let ids: BTreeSet<&str> = results.iter().map(|r| r.video_id.as_str()).collect();
        if ids != reference || ids.len() != results.len() {
            let video_id = ids
                .symmetric_difference(&reference)
                .next()
                .map_or_else(String::new, |s| String::from(*s));
            return Err(LocalizationError::VideoSetMismatch {
                threshold: *threshold,
                video_id,
            });
        }
        let total: usize = results.iter().map(SegmentationResult::reported_segments).sum();
        let avg_segments = if results.is_empty() {
            0.0
        } else {
            total as f64 / results.len() as f64
        };
        rows.push(SweepRow {
            threshold: *threshold,
            avg_segments,
            videos: results.len(),
        });
    }
    Ok(SweepReport { rows })
}

/// Thresholds on the default sweep axis: -0.1 down to -1.0 in steps of 0.1.
pub fn default_sweep_thresholds() -> Vec<f64> {
    (1..=10).map(|i| -(i as f64) / 10.0).collect()
}
