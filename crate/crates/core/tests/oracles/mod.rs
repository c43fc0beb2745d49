//! Brute-force reference implementations used only by tests. None of these
//! call into the code paths they check.
#![allow(dead_code)]

use std::collections::HashMap;

use storyline_core::grammar::{Pcfg, Terminal};
use storyline_core::localization::ActionWindow;
use storyline_core::text::TaggedToken;

/// IoU by counting frames one at a time.
pub fn iou_by_frames(a: &ActionWindow, b: &ActionWindow) -> f64 {
    let lo = a.start.min(b.start);
    let hi = a.end.max(b.end);
    let (mut inter, mut union) = (0u64, 0u64);
    for f in lo..hi {
        let ina = (a.start..a.end).contains(&f);
        let inb = (b.start..b.end).contains(&f);
        if ina && inb {
            inter += 1;
        }
        if ina || inb {
            union += 1;
        }
    }
    if union == 0 {
        0.0
    } else {
        inter as f64 / union as f64
    }
}

/// Textbook greedy NMS: per class, repeatedly take the best remaining window
/// and delete everything overlapping it by more than the threshold.
pub fn nms_greedy(windows: &[ActionWindow], thr: f64) -> Vec<ActionWindow> {
    let mut classes: Vec<usize> = windows.iter().map(|w| w.class_id).collect();
    classes.sort();
    classes.dedup();
    let mut out = Vec::new();
    for c in classes {
        let mut remaining: Vec<ActionWindow> = windows.iter().filter(|w| w.class_id == c).copied().collect();
        while !remaining.is_empty() {
            let mut best = 0;
            for i in 1..remaining.len() {
                let (a, b) = (&remaining[i], &remaining[best]);
                let better = a.score > b.score
                    || (a.score == b.score && a.start < b.start)
                    || (a.score == b.score && a.start == b.start && (a.end - a.start) < (b.end - b.start));
                if better {
                    best = i;
                }
            }
            let pick = remaining.remove(best);
            remaining.retain(|w| iou_by_frames(w, &pick) <= thr);
            out.push(pick);
        }
    }
    out.sort_by(|a, b| {
        (a.start, a.end, a.class_id)
            .cmp(&(b.start, b.end, b.class_id))
            .then(b.score.partial_cmp(&a.score).unwrap())
    });
    out
}

/// Fisher vector with linear-space posteriors and plain loops.
pub fn fisher_scalar(window: &[Vec<f64>], weights: &[f64], means: &[Vec<f64>], vars: &[Vec<f64>]) -> Vec<f64> {
    let k = weights.len();
    let d = means[0].len();
    let n = window.len() as f64;
    let mut out = vec![0.0; 2 * k * d];
    for x in window {
        let mut dens = vec![0.0; k];
        for c in 0..k {
            let mut p = weights[c];
            for j in 0..d {
                let v = vars[c][j];
                p *= (-(x[j] - means[c][j]).powi(2) / (2.0 * v)).exp() / (2.0 * std::f64::consts::PI * v).sqrt();
            }
            dens[c] = p;
        }
        let total: f64 = dens.iter().sum();
        for c in 0..k {
            let g = dens[c] / total;
            for j in 0..d {
                let sd = vars[c][j].sqrt();
                let u = (x[j] - means[c][j]) / sd;
                out[c * d + j] += g * u / (n * weights[c].sqrt());
                out[k * d + c * d + j] += g * (u * u - 1.0) / (n * (2.0 * weights[c]).sqrt());
            }
        }
    }
    out
}

/// Every parse probability of `sym` over `tokens[i..j]`, by plain recursion
/// with no chart. Exponential; keep inputs small.
pub fn all_parse_probs(g: &Pcfg, tokens: &[TaggedToken], sym: usize, i: usize, j: usize) -> Vec<f64> {
    let mut out = Vec::new();
    if j - i == 1 {
        for r in g.lexical_rules() {
            if r.lhs == sym {
                let hit = match &r.terminal {
                    Terminal::Word(w) => tokens[i].word.to_lowercase() == *w,
                    Terminal::Tag(t) => tokens[i].tag == *t,
                };
                if hit {
                    out.push(r.prob);
                }
            }
        }
        return out;
    }
    for r in g.binary_rules() {
        if r.lhs != sym {
            continue;
        }
        for split in i + 1..j {
            let left = all_parse_probs(g, tokens, r.left, i, split);
            if left.is_empty() {
                continue;
            }
            let right = all_parse_probs(g, tokens, r.right, split, j);
            for a in &left {
                for b in &right {
                    out.push(r.prob * a * b);
                }
            }
        }
    }
    out
}

/// Maximum derivation probability of the start symbol, by top-down recursion
/// in linear probability space with a memo keyed on `(symbol, span)`.
pub fn best_parse_prob(g: &Pcfg, tokens: &[TaggedToken]) -> Option<f64> {
    fn best(
        g: &Pcfg,
        tokens: &[TaggedToken],
        sym: usize,
        i: usize,
        j: usize,
        memo: &mut HashMap<(usize, usize, usize), Option<f64>>,
    ) -> Option<f64> {
        if let Some(v) = memo.get(&(sym, i, j)) {
            return *v;
        }
        let mut top: Option<f64> = None;
        if j - i == 1 {
            for p in all_parse_probs(g, tokens, sym, i, j) {
                top = Some(top.map_or(p, |t: f64| t.max(p)));
            }
        } else {
            for r in g.binary_rules().iter().filter(|r| r.lhs == sym) {
                for split in i + 1..j {
                    let Some(a) = best(g, tokens, r.left, i, split, memo) else {
                        continue;
                    };
                    let Some(b) = best(g, tokens, r.right, split, j, memo) else {
                        continue;
                    };
                    let p = r.prob * a * b;
                    top = Some(top.map_or(p, |t: f64| t.max(p)));
                }
            }
        }
        memo.insert((sym, i, j), top);
        top
    }
    best(g, tokens, g.start(), 0, tokens.len(), &mut HashMap::new())
}

/// First index with the smallest Euclidean distance.
pub fn nearest_by_scan(query: &[f64], bank: &[Vec<f64>]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, v) in bank.iter().enumerate() {
        let d = query.iter().zip(v).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        if d < best_d {
            best_d = d;
            best = i;
        }
    }
    best
}

/// CIDEr with hash maps and explicit loops.
pub fn cider_scalar(hyps: &[Vec<String>], refs: &[Vec<Vec<String>>]) -> Vec<f64> {
    fn grams(t: &[String], n: usize) -> HashMap<Vec<String>, f64> {
        let mut m = HashMap::new();
        if t.len() >= n {
            for i in 0..=t.len() - n {
                *m.entry(t[i..i + n].to_vec()).or_insert(0.0) += 1.0;
            }
        }
        m
    }
    let docs = refs.len() as f64;
    let mut scores = vec![0.0; hyps.len()];
    for n in 1..=4 {
        let mut df: HashMap<Vec<String>, f64> = HashMap::new();
        for rs in refs {
            let mut seen: HashMap<Vec<String>, ()> = HashMap::new();
            for r in rs {
                for g in grams(r, n).into_keys() {
                    seen.insert(g, ());
                }
            }
            for g in seen.into_keys() {
                *df.entry(g).or_insert(0.0) += 1.0;
            }
        }
        let weigh = |m: HashMap<Vec<String>, f64>| -> HashMap<Vec<String>, f64> {
            m.into_iter()
                .map(|(g, tf)| {
                    let d = df.get(&g).copied().unwrap_or(0.0).max(1.0);
                    (g, tf * (docs / d).ln())
                })
                .collect()
        };
        for (i, h) in hyps.iter().enumerate() {
            let hv = weigh(grams(h, n));
            let mut acc = 0.0;
            for r in &refs[i] {
                let rv = weigh(grams(r, n));
                let dot: f64 = hv.iter().map(|(g, x)| x * rv.get(g).unwrap_or(&0.0)).sum();
                let nh = hv.values().map(|x| x * x).sum::<f64>().sqrt();
                let nr = rv.values().map(|x| x * x).sum::<f64>().sqrt();
                if nh > 0.0 && nr > 0.0 {
                    acc += dot / (nh * nr);
                }
            }
            scores[i] += acc / refs[i].len() as f64;
        }
    }
    scores.iter().map(|s| s * 10.0 / 4.0).collect()
}

/// Mean of known vectors by explicit indexing.
pub fn mean_known(tokens: &[&str], table: &HashMap<String, Vec<f64>>, dim: usize) -> Vec<f64> {
    let mut out = vec![0.0; dim];
    let mut n = 0.0;
    for t in tokens {
        if let Some(v) = table.get(*t) {
            for i in 0..dim {
                out[i] += v[i];
            }
            n += 1.0;
        }
    }
    if n > 0.0 {
        for x in out.iter_mut() {
            *x /= n;
        }
    }
    out
}

pub fn fixture(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}
