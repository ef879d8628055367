//! End-to-end training behavior: convergence on separable synthetic data
//! (checked against a nearest-centroid oracle), gradient-descent
//! monotonicity on the single-rotation model, and the data-independence of
//! phase-only encoding.

use qbias_core::data::{synthetic_gaussians, Dataset};
use qbias_core::encode::{Axis, EncodingSpec};
use qbias_core::vqc::{evaluate, mse_loss, parameter_shift_gradient, train, Model, TrainConfig};

/// Independent margin-style oracle: classify by the nearer class centroid of
/// the training set.
fn nearest_centroid_accuracy(train_set: &Dataset, test_set: &Dataset) -> f64 {
    let dim = train_set.num_features();
    let mut centroids = [vec![0.0; dim], vec![0.0; dim]];
    let mut counts = [0usize; 2];
    for (row, &label) in train_set.features.iter().zip(&train_set.labels) {
        let class = if label == 1.0 { 0 } else { 1 };
        counts[class] += 1;
        for (c, x) in centroids[class].iter_mut().zip(row) {
            *c += x;
        }
    }
    for (centroid, count) in centroids.iter_mut().zip(counts) {
        for c in centroid.iter_mut() {
            *c /= count as f64;
        }
    }
    let distance_sqr = |a: &[f64], b: &[f64]| -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
    };
    let correct = test_set
        .features
        .iter()
        .zip(&test_set.labels)
        .filter(|(row, &label)| {
            let predicted = if distance_sqr(row, &centroids[0]) <= distance_sqr(row, &centroids[1])
            {
                1.0
            } else {
                -1.0
            };
            predicted == label
        })
        .count();
    correct as f64 / test_set.len() as f64
}

#[test]
fn angle_encoding_learns_separable_gaussians() {
    let train_set = synthetic_gaussians(100, 4, 2.0, 1001);
    let test_set = synthetic_gaussians(50, 4, 2.0, 1002);

    // the task itself is easy: a plain centroid rule clears 0.97
    let oracle = nearest_centroid_accuracy(&train_set, &test_set);
    assert!(oracle >= 0.97, "centroid oracle only reached {oracle}");

    let mut model = Model::new(EncodingSpec::angle(4), 2, 1001).unwrap();
    let config = TrainConfig {
        epochs: 20,
        seed: 1001,
        ..TrainConfig::default()
    };
    let report = train(&mut model, &train_set, &test_set, &config).unwrap();
    let final_acc = report.rows.last().unwrap().test_acc;
    assert!(final_acc >= 0.95, "test accuracy only reached {final_acc}");
    assert_eq!(report.rows.len(), 20);
    for row in &report.rows {
        assert!(row.train_acc >= 0.0 && row.train_acc <= 1.0);
        assert!(row.test_acc >= 0.0 && row.test_acc <= 1.0);
    }
}

#[test]
fn plain_gradient_descent_is_monotone_on_single_rotation_model() {
    // prediction = cos(theta), label +1: loss (cos(theta) - 1)^2 is smooth and
    // the descent path from theta = 2 rolls downhill
    let mut model = Model::new(EncodingSpec::angle(1), 1, 0).unwrap();
    model.set_params(vec![2.0]).unwrap();
    let features = vec![vec![0.0]];
    let labels = vec![1.0];
    let mut losses = Vec::new();
    for _ in 0..50 {
        let prediction = model.predict(&features[0]).unwrap();
        losses.push(mse_loss(&[prediction], &labels).unwrap());
        let grad = parameter_shift_gradient(&model, &features, &labels).unwrap();
        let theta = model.params()[0] - 0.05 * grad[0];
        model.set_params(vec![theta]).unwrap();
    }
    for (i, pair) in losses.windows(2).enumerate() {
        if i >= 5 {
            assert!(
                pair[1] <= pair[0] + 1e-12,
                "loss rose at step {i}: {} -> {}",
                pair[0],
                pair[1]
            );
        }
    }
    // the valley is quartic near the optimum, so descent is slow but steady
    assert!(*losses.last().unwrap() < losses[0] / 10.0);
}

#[test]
fn phase_only_encoding_scores_exactly_the_majority_rate() {
    let balanced = synthetic_gaussians(25, 3, 1.0, 31);
    assert_eq!(balanced.majority_rate(), 0.5);

    // any parameter values: predictions cannot depend on the input
    for seed in [1, 2, 3] {
        let model = Model::new(EncodingSpec::hybrid(3, Axis::Z, false), 2, seed).unwrap();
        let accuracy = evaluate(&model, &balanced).unwrap();
        assert_eq!(accuracy, balanced.majority_rate());

        let first = model.predict(&balanced.features[0]).unwrap();
        for row in &balanced.features {
            assert!((model.predict(row).unwrap() - first).abs() < 1e-12);
        }
    }

    // training does not change that
    let mut model = Model::new(EncodingSpec::hybrid(3, Axis::Z, false), 2, 9).unwrap();
    let config = TrainConfig {
        epochs: 3,
        seed: 9,
        ..TrainConfig::default()
    };
    let report = train(&mut model, &balanced, &balanced, &config).unwrap();
    assert_eq!(report.rows.last().unwrap().test_acc, 0.5);
}

#[test]
fn train_report_echoes_config_and_row_count() {
    let train_set = synthetic_gaussians(12, 2, 1.0, 3);
    let test_set = synthetic_gaussians(6, 2, 1.0, 4);
    let config = TrainConfig {
        epochs: 5,
        batch_size: 8,
        seed: 3,
        layers: 1,
        ..TrainConfig::default()
    };
    let mut model = Model::new(EncodingSpec::angle(2), 1, 3).unwrap();
    let report = train(&mut model, &train_set, &test_set, &config).unwrap();
    assert_eq!(report.rows.len(), config.epochs);
    assert_eq!(report.config, config);
    assert_eq!(report.final_params, model.params());
    for (i, row) in report.rows.iter().enumerate() {
        assert_eq!(row.epoch, i + 1);
    }
}
