#![allow(clippy::needless_range_loop)]

mod oracles;

use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use storyline_core::encoding::{
    fisher_encode, fit_gmm, fit_pca, posteriors, power_l2_normalize, score_ovr, train_ovr_linear, FisherVector,
    GmmFitConfig, GmmModel, LinearOvrModel, SvmTrainConfig,
};
use storyline_core::linalg::Matrix;

fn random_matrix(rng: &mut StdRng, rows: usize, cols: usize) -> Vec<Vec<f64>> {
    (0..rows)
        .map(|_| (0..cols).map(|_| rng.random_range(-1.0..1.0)).collect())
        .collect()
}

fn random_gmm(rng: &mut StdRng, k: usize, d: usize) -> GmmModel {
    let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.1..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let weights = raw.iter().map(|w| w / total).collect();
    let means = random_matrix(rng, k, d);
    let vars = (0..k)
        .map(|_| (0..d).map(|_| rng.random_range(0.2..2.0)).collect())
        .collect();
    GmmModel::new(weights, means, vars, 1e-6).unwrap()
}

#[test]
fn pca_variances_match_dense_eigen_oracle() {
    let mut rng = StdRng::seed_from_u64(11);
    let rows = random_matrix(&mut rng, 50, 8);
    let data = Matrix::from_rows(&rows).unwrap();
    let model = fit_pca(&data, 4, false).unwrap();

    let x = DMatrix::from_fn(50, 8, |i, j| rows[i][j]);
    let mean = x.row_mean();
    let centered = DMatrix::from_fn(50, 8, |i, j| x[(i, j)] - mean[j]);
    let cov = centered.transpose() * &centered / 49.0;
    let mut oracle: Vec<f64> = SymmetricEigen::new(cov).eigenvalues.iter().copied().collect();
    oracle.sort_by(|a, b| b.partial_cmp(a).unwrap());

    let projected: Vec<Vec<f64>> = rows.iter().map(|r| model.project(r).unwrap()).collect();
    for j in 0..4 {
        let m: f64 = projected.iter().map(|p| p[j]).sum::<f64>() / 50.0;
        let var: f64 = projected.iter().map(|p| (p[j] - m).powi(2)).sum::<f64>() / 49.0;
        assert!((var - oracle[j]).abs() < 1e-6, "component {j}: {var} vs {}", oracle[j]);
        assert!((model.eigenvalues()[j] - oracle[j]).abs() < 1e-6);
    }
    // Off-diagonal covariance of the projection vanishes.
    let cross: f64 = projected.iter().map(|p| p[0] * p[1]).sum::<f64>() / 49.0;
    assert!(cross.abs() < 1e-6);
}

#[test]
fn full_rank_pca_reconstructs_centered_data() {
    let mut rng = StdRng::seed_from_u64(3);
    // Standard-normal-ish sample via sums of uniforms.
    let rows: Vec<Vec<f64>> = (0..200)
        .map(|_| {
            (0..6)
                .map(|_| (0..12).map(|_| rng.random::<f64>()).sum::<f64>() - 6.0)
                .collect()
        })
        .collect();
    let model = fit_pca(&Matrix::from_rows(&rows).unwrap(), 6, false).unwrap();
    for r in &rows {
        let y = model.project(r).unwrap();
        for i in 0..6 {
            let back: f64 = (0..6).map(|j| model.projection().get(i, j) * y[j]).sum();
            assert!((back - (r[i] - model.mean()[i])).abs() < 1e-6);
        }
    }
}

#[test]
fn single_component_at_the_mean() {
    let g = GmmModel::new(vec![1.0], vec![vec![0.3, -1.2, 4.0]], vec![vec![0.5, 2.0, 1.0]], 1e-6).unwrap();
    let fv = fisher_encode(&[vec![0.3, -1.2, 4.0]], &g).unwrap();
    assert_eq!(fv.len(), 6);
    for v in &fv.values()[..3] {
        assert_eq!(*v, 0.0);
    }
    for v in &fv.values()[3..] {
        assert!((v + 1.0 / 2f64.sqrt()).abs() < 1e-12);
    }
}

#[test]
fn fisher_matches_scalar_oracle() {
    let mut rng = StdRng::seed_from_u64(5);
    for trial in 0..50 {
        let k = 1 + trial % 4;
        let d = 2 + trial % 3;
        let g = random_gmm(&mut rng, k, d);
        let window = random_matrix(&mut rng, 3, d);
        let fv = fisher_encode(&window, &g).unwrap();
        let want = oracles::fisher_scalar(&window, g.weights(), g.means(), g.variances());
        assert_eq!(fv.len(), 2 * k * d);
        for (a, b) in fv.values().iter().zip(&want) {
            assert!((a - b).abs() < 1e-9, "trial {trial}: {a} vs {b}");
        }
    }
}

#[test]
fn posteriors_sum_to_one() {
    let mut rng = StdRng::seed_from_u64(9);
    for _ in 0..100 {
        let g = random_gmm(&mut rng, 4, 5);
        let x: Vec<f64> = (0..5).map(|_| rng.random_range(-3.0..3.0)).collect();
        let p = posteriors(&x, &g).unwrap();
        assert!(p.iter().all(|&v| v >= 0.0));
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn posteriors_survive_far_outliers() {
    let g = GmmModel::new(
        vec![0.5, 0.5],
        vec![vec![0.0; 64], vec![1.0; 64]],
        vec![vec![1e-3; 64]; 2],
        1e-6,
    )
    .unwrap();
    let p = posteriors(&[500.0; 64], &g).unwrap();
    assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    assert!(p[1] > 0.99);
}

#[test]
fn gmm_fit_then_encode_end_to_end() {
    let mut rng = StdRng::seed_from_u64(21);
    let rows: Vec<Vec<f64>> = (0..120)
        .map(|i| {
            let c = if i % 2 == 0 { -2.0 } else { 2.0 };
            (0..4).map(|_| c + rng.random_range(-0.5..0.5)).collect()
        })
        .collect();
    let data = Matrix::from_rows(&rows).unwrap();
    let pca = fit_pca(&data, 2, false).unwrap();
    let reduced: Vec<Vec<f64>> = rows.iter().map(|r| pca.project(r).unwrap()).collect();
    let gmm = fit_gmm(
        &Matrix::from_rows(&reduced).unwrap(),
        &GmmFitConfig {
            components: 2,
            iterations: 30,
            ..GmmFitConfig::default()
        },
    )
    .unwrap();
    let fv = power_l2_normalize(fisher_encode(&reduced[..10], &gmm).unwrap());
    assert_eq!(fv.len(), 2 * 2 * 2);
    let norm: f64 = fv.values().iter().map(|v| v * v).sum::<f64>().sqrt();
    assert!((norm - 1.0).abs() < 1e-9);
}

fn normalized(v: Vec<f64>) -> FisherVector {
    power_l2_normalize(FisherVector::new(v, false))
}

#[test]
fn separable_two_class_set_is_learned() {
    let mut rng = StdRng::seed_from_u64(1);
    let mut feats = Vec::new();
    let mut labels = Vec::new();
    for i in 0..40 {
        let (x, label) = if i % 2 == 0 {
            (rng.random_range(0.5..2.0), "pos")
        } else {
            (rng.random_range(-2.0..-0.5), "neg")
        };
        feats.push(FisherVector::new(vec![x, rng.random_range(-1.0..1.0)], true));
        labels.push(label);
    }
    let m = train_ovr_linear(&feats, &labels, &SvmTrainConfig::default()).unwrap();
    assert_eq!(m.classes(), ["neg", "pos"]);
    for (f, l) in feats.iter().zip(&labels) {
        let scores = score_ovr(&m, f).unwrap();
        let best = scores.iter().max_by(|a, b| a.1.partial_cmp(&b.1).unwrap()).unwrap();
        assert_eq!(best.0, *l);
        let own = scores.iter().find(|s| s.0 == *l).unwrap().1;
        assert!(own > 0.0, "sample of {l} not on the positive side");
    }
}

#[test]
fn one_hot_clusters_rank_their_own_class_first() {
    let mut rng = StdRng::seed_from_u64(2);
    let names = ["jump", "run", "sit"];
    let mut feats = Vec::new();
    let mut labels = Vec::new();
    for i in 0..60 {
        let c = i % 3;
        let v: Vec<f64> = (0..3)
            .map(|j| if j == c { 1.0 } else { 0.0 } + rng.random_range(-0.1..0.1))
            .collect();
        feats.push(normalized(v));
        labels.push(names[c]);
    }
    let m = train_ovr_linear(&feats, &labels, &SvmTrainConfig::default()).unwrap();
    for (ci, name) in names.iter().enumerate() {
        let class_scores: Vec<(usize, f64)> = feats
            .iter()
            .enumerate()
            .map(|(i, f)| (i, score_ovr(&m, f).unwrap()[ci].1))
            .collect();
        let own_min = class_scores
            .iter()
            .filter(|(i, _)| labels[*i] == *name)
            .map(|s| s.1)
            .fold(f64::INFINITY, f64::min);
        let other_max = class_scores
            .iter()
            .filter(|(i, _)| labels[*i] != *name)
            .map(|s| s.1)
            .fold(f64::NEG_INFINITY, f64::max);
        assert!(own_min > other_max, "{name}: {own_min} <= {other_max}");
    }
}

#[test]
fn training_is_bitwise_reproducible() {
    let mut rng = StdRng::seed_from_u64(4);
    let feats: Vec<FisherVector> = (0..30)
        .map(|_| normalized(random_matrix(&mut rng, 1, 6).remove(0)))
        .collect();
    let labels: Vec<&str> = (0..30).map(|i| ["a", "b", "c"][i % 3]).collect();
    let cfg = SvmTrainConfig {
        seed: 77,
        ..SvmTrainConfig::default()
    };
    let a = train_ovr_linear(&feats, &labels, &cfg).unwrap();
    let b = train_ovr_linear(&feats, &labels, &cfg).unwrap();
    for (wa, wb) in a.weights().iter().zip(b.weights()) {
        let bits_a: Vec<u64> = wa.iter().map(|x| x.to_bits()).collect();
        let bits_b: Vec<u64> = wb.iter().map(|x| x.to_bits()).collect();
        assert_eq!(bits_a, bits_b);
    }
    assert_eq!(a, b);
}

#[test]
fn scores_match_scalar_dot_product() {
    let mut rng = StdRng::seed_from_u64(8);
    let weights = random_matrix(&mut rng, 5, 16);
    let biases: Vec<f64> = (0..5).map(|_| rng.random_range(-1.0..1.0)).collect();
    let classes = (0..5).map(|i| format!("c{i}")).collect();
    let m = LinearOvrModel::new(classes, weights.clone(), biases.clone(), 100.0).unwrap();
    let fv = normalized(random_matrix(&mut rng, 1, 16).remove(0));
    let scores = score_ovr(&m, &fv).unwrap();
    for c in 0..5 {
        let mut s = biases[c];
        for j in 0..16 {
            s += weights[c][j] * fv.values()[j];
        }
        assert!((scores[c].1 - s).abs() < 1e-12);
        assert_eq!(scores[c].0, format!("c{c}"));
    }
}

proptest! {
    #[test]
    fn power_step_is_odd(v in prop::collection::vec(-100.0f64..100.0, 1..32)) {
        let pos = power_l2_normalize(FisherVector::new(v.clone(), false));
        let neg = power_l2_normalize(FisherVector::new(v.iter().map(|x| -x).collect(), false));
        for (a, b) in pos.values().iter().zip(neg.values()) {
            prop_assert_eq!(*a, -*b);
        }
    }

    #[test]
    fn normalized_vectors_have_unit_norm(v in prop::collection::vec(-1e3f64..1e3, 1..64)) {
        let out = power_l2_normalize(FisherVector::new(v.clone(), false));
        let norm: f64 = out.values().iter().map(|x| x * x).sum::<f64>().sqrt();
        if v.iter().all(|x| *x == 0.0) {
            prop_assert_eq!(norm, 0.0);
        } else {
            prop_assert!((norm - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn fisher_dimension_is_2kd(k in 1usize..5, d in 1usize..6, n in 1usize..5, seed in 0u64..1000) {
        let mut rng = StdRng::seed_from_u64(seed);
        let g = random_gmm(&mut rng, k, d);
        let window = random_matrix(&mut rng, n, d);
        prop_assert_eq!(fisher_encode(&window, &g).unwrap().len(), 2 * k * d);
    }

    #[test]
    fn scoring_is_linear(
        w in prop::collection::vec(-1.0f64..1.0, 8),
        u in prop::collection::vec(-1.0f64..1.0, 8),
        v in prop::collection::vec(-1.0f64..1.0, 8),
        alpha in -3.0f64..3.0,
        beta in -3.0f64..3.0,
    ) {
        let m = LinearOvrModel::new(vec!["a".into()], vec![w], vec![0.0], 100.0).unwrap();
        let s = |x: &[f64]| score_ovr(&m, &FisherVector::new(x.to_vec(), true)).unwrap()[0].1;
        let mix: Vec<f64> = u.iter().zip(&v).map(|(a, b)| alpha * a + beta * b).collect();
        prop_assert!((s(&mix) - (alpha * s(&u) + beta * s(&v))).abs() < 1e-9);
    }
}
