#![allow(clippy::cloned_ref_to_slice_refs)]

mod oracles;

use proptest::prelude::*;
use storyline_core::metrics::{bleu4, cider_per_item, evaluate, meteor_lite, ngram_precisions, normalize, stem};

fn refs(texts: &[&str]) -> Vec<Vec<String>> {
    texts.iter().map(|t| normalize(t)).collect()
}

#[test]
fn bleu_identity_and_disjoint() {
    let h = normalize("A man is with a plate. He is sitting with it.");
    assert!((bleu4(std::slice::from_ref(&h), &[vec![h.clone()]]).unwrap() - 1.0).abs() < 1e-12);
    let d = normalize("dogs bark loudly outside tonight");
    assert_eq!(bleu4(&[h], &[vec![d]]).unwrap(), 0.0);
}

#[test]
fn repeated_word_precision_is_clipped() {
    let p = ngram_precisions(&[normalize("the the the the")], &[refs(&["the cat"])]).unwrap();
    assert_eq!(p[0], 0.25);
}

#[test]
fn cider_toy_corpus_matches_scalar_oracle() {
    let hyps = vec![
        normalize("a man is sitting with a plate"),
        normalize("a woman walks into the room"),
        normalize("two dogs run in the park"),
    ];
    let references = vec![
        refs(&["a man sits with a plate", "a man is eating from a plate"]),
        refs(&["a woman enters the room", "the woman walks in"]),
        refs(&["dogs are running in a park", "two dogs play in the park"]),
    ];
    let got = cider_per_item(&hyps, &references).unwrap();
    let want = oracles::cider_scalar(&hyps, &references);
    for (g, w) in got.iter().zip(&want) {
        assert!((g - w).abs() < 1e-9, "{g} vs {w}");
    }
    assert!(got.iter().all(|s| *s > 0.0));
}

#[test]
fn meteor_identity_formula_is_exact() {
    for text in ["a man sits", "a man is sitting with a plate", "dogs"] {
        let h = normalize(text);
        let m = h.len() as f64;
        assert_eq!(meteor_lite(&h, std::slice::from_ref(&h)), 1.0 - 0.5 * (1.0 / m).powi(3));
    }
}

#[test]
fn meteor_stem_match_example() {
    let s = meteor_lite(&normalize("a man sits"), &refs(&["a man is sitting"]));
    let f = 10.0 * 0.75 / (0.75 + 9.0);
    let want = f * (1.0 - 0.5 * (2.0f64 / 3.0).powi(3));
    assert!((s - want).abs() < 1e-12);
    assert!((s - 0.655_270_655).abs() < 1e-9);
}

#[test]
fn porter_reference_pairs() {
    for (w, s) in [
        ("caresses", "caress"),
        ("ponies", "poni"),
        ("running", "run"),
        ("hopping", "hop"),
        ("relational", "relat"),
        ("generalization", "gener"),
        ("sitting", "sit"),
        ("sits", "sit"),
    ] {
        assert_eq!(stem(w), s, "{w}");
    }
}

#[test]
fn report_layout() {
    let hyps = vec![normalize("a man sits"), normalize("a dog runs")];
    let references = vec![refs(&["a man sits"]), refs(&["a dog runs fast"])];
    let report = evaluate(&hyps, &references).unwrap();
    assert_eq!(report.per_item.len(), 2);
    assert!(report.corpus.bleu4 >= 0.0 && report.corpus.meteor > 0.0 && report.corpus.cider > 0.0);
}

fn arb_text() -> impl Strategy<Value = Vec<String>> {
    prop::collection::vec(
        prop::sample::select(vec![
            "a", "man", "sits", "sitting", "dog", "runs", "the", "plate", "with",
        ]),
        1..8,
    )
    .prop_map(|w| w.into_iter().map(String::from).collect())
}

proptest! {
    #[test]
    fn adding_a_reference_never_lowers_meteor(h in arb_text(), rs in prop::collection::vec(arb_text(), 1..4), extra in arb_text()) {
        let before = meteor_lite(&h, &rs);
        let mut more = rs.clone();
        more.push(extra);
        prop_assert!(meteor_lite(&h, &more) >= before);
    }

    #[test]
    fn scores_are_bounded(h in arb_text(), rs in prop::collection::vec(arb_text(), 1..4)) {
        let m = meteor_lite(&h, &rs);
        prop_assert!((0.0..=1.0).contains(&m));
        let b = bleu4(std::slice::from_ref(&h), std::slice::from_ref(&rs)).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&b));
    }

    #[test]
    fn cider_agrees_with_oracle(hs in prop::collection::vec(arb_text(), 2..5), rs in prop::collection::vec(prop::collection::vec(arb_text(), 1..3), 5)) {
        let rs = &rs[..hs.len()];
        let got = cider_per_item(&hs, rs).unwrap();
        let want = oracles::cider_scalar(&hs, rs);
        for (g, w) in got.iter().zip(&want) {
            prop_assert!((g - w).abs() < 1e-9);
        }
    }
}
