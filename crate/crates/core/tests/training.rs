use qlstm_core::chem::{synthetic_clusters, SyntheticSpec};
use qlstm_core::model::{Checkpoint, ModelKind, ParamSet, Qlstm, QlstmConfig, SequenceModel};
use qlstm_core::noise::NoiseConfig;
use qlstm_core::train::{train_model, TrainConfig};
use qlstm_core::Error;

fn toy_model() -> QlstmConfig {
    QlstmConfig { n_qubits: 2, depth: 1, seq_len: 4, chunk_dim: 16, ..Default::default() }
}

fn toy_data(n: usize) -> qlstm_core::chem::DatasetTable {
    synthetic_clusters(&SyntheticSpec { n_samples: n, fp_len: 64, flip_prob: 0.1, seed: 1 }).unwrap()
}

#[test]
fn lstm_solves_separable_clusters() {
    let data = synthetic_clusters(&SyntheticSpec::default()).unwrap();
    let model = QlstmConfig { n_qubits: 2, seq_len: 4, chunk_dim: 64, ..Default::default() };
    let cfg = TrainConfig { epochs: 30, batch_size: 32, lr: 0.05, split_seeds: vec![0], model: ModelKind::Lstm, ..Default::default() };
    let out = train_model(&cfg, &model, &data, 0).unwrap();
    assert!(out.report.seeds[0].final_train_accuracy.unwrap() >= 0.95);
}

#[test]
fn training_is_deterministic() {
    let data = toy_data(40);
    for model in [ModelKind::Qlstm, ModelKind::Lstm] {
        let cfg = TrainConfig { epochs: 3, batch_size: 8, lr: 0.05, split_seeds: vec![1, 2], model, ..Default::default() };
        let a = train_model(&cfg, &toy_model(), &data, 9).unwrap();
        let b = train_model(&cfg, &toy_model(), &data, 9).unwrap();
        assert_eq!(a.report.without_timing(), b.report.without_timing());
        assert_eq!(a.checkpoints, b.checkpoints);
        assert_eq!(a.report.seeds.len(), 2);
        assert_eq!(a.report.seeds[0].epochs.len(), 3);
    }
}

#[test]
fn noisy_training_is_deterministic() {
    let data = toy_data(20);
    let noise = NoiseConfig { trajectories: 4, eval_trajectories: 8, rng_seed: 5, ..NoiseConfig::new(0.05) };
    let cfg = TrainConfig { epochs: 2, batch_size: 8, lr: 0.05, split_seeds: vec![0], noise: Some(noise), ..Default::default() };
    let a = train_model(&cfg, &toy_model(), &data, 3).unwrap();
    let b = train_model(&cfg, &toy_model(), &data, 3).unwrap();
    assert_eq!(a.report.without_timing(), b.report.without_timing());
    let exact = TrainConfig { noise: None, ..cfg };
    let c = train_model(&exact, &toy_model(), &data, 3).unwrap();
    assert_ne!(a.report.without_timing(), c.report.without_timing());
}

#[test]
fn zero_epochs_reports_untrained_accuracy() {
    let data = toy_data(30);
    let cfg = TrainConfig { epochs: 0, split_seeds: vec![4], ..Default::default() };
    let out = train_model(&cfg, &toy_model(), &data, 0).unwrap();
    let s = &out.report.seeds[0];
    assert!(s.epochs.is_empty());
    assert_eq!(s.final_train_accuracy, None);
    assert_eq!(s.final_val_accuracy, s.initial_val_accuracy);
    assert_eq!((s.n_train, s.n_val), (24, 6));
    assert_eq!(out.report.mean_val_accuracy, s.initial_val_accuracy);
}

#[test]
fn shape_mismatches_are_config_errors() {
    let data = toy_data(10);
    let cfg = TrainConfig::default();
    let wrong_len = QlstmConfig { chunk_dim: 8, ..toy_model() };
    assert!(matches!(train_model(&cfg, &wrong_len, &data, 0), Err(Error::Config(_))));
    let wrong_tasks = QlstmConfig { n_tasks: 2, ..toy_model() };
    assert!(matches!(train_model(&cfg, &wrong_tasks, &data, 0), Err(Error::Config(_))));
    let bad_lr = TrainConfig { lr: 0.0, ..Default::default() };
    match train_model(&bad_lr, &toy_model(), &data, 0) {
        Err(Error::Config(m)) => assert!(m.contains("train.lr"), "{m}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn checkpoint_restores_the_trained_model() {
    let data = toy_data(20);
    let cfg = TrainConfig { epochs: 2, batch_size: 8, lr: 0.05, split_seeds: vec![0], ..Default::default() };
    let out = train_model(&cfg, &toy_model(), &data, 0).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ckpt.json");
    out.checkpoints[0].save(&path).unwrap();
    let ckpt = Checkpoint::load(&path).unwrap();
    assert_eq!(ckpt, out.checkpoints[0]);

    let mut model = Qlstm::<f64>::init(ckpt.config.clone(), &mut rand::rngs::mock::StepRng::new(0, 1)).unwrap();
    ckpt.restore_into(model.params_mut()).unwrap();
    let stored: Vec<f64> = ckpt.tensors.iter().flat_map(|t| t.values.iter().copied()).collect();
    assert_eq!(model.params().flat(), stored);
    let logits = model.logits(&data.rows[0].fingerprint.bits, None).unwrap();
    assert!(logits[0].is_finite());
}
