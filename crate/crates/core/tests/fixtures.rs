//! Frozen synthetic-shift fixture. The files under `tests/fixtures/shift/`
//! come from `common::synthetic_shift(SHIFT_SEED)`; set
//! `EASYTL_REGENERATE_FIXTURES=1` to rewrite them (accuracies are re-checked
//! before anything is written).

mod common;

use common::*;
use easytl::dataio::{self, DatasetFile, LabelDictionary};
use easytl::pipeline::{self, ClassifierKind, PipelineConfig};
use easytl::AlignmentKind;

fn shift_dir() -> std::path::PathBuf {
    fixtures_dir().join("shift")
}

fn config(alignment: AlignmentKind, classifier: ClassifierKind) -> PipelineConfig {
    PipelineConfig {
        alignment,
        classifier,
    }
}

#[test]
fn regenerate_or_verify_shift_fixture() {
    let task = synthetic_shift(SHIFT_SEED);
    let target = &task.target.features;

    let full = pipeline::run(
        config(AlignmentKind::Coral, ClassifierKind::EasyTl),
        &task.source,
        target,
    )
    .unwrap();
    let nn = pipeline::run(
        config(AlignmentKind::None, ClassifierKind::NearestNeighbor1),
        &task.source,
        target,
    )
    .unwrap();
    // independent check of the 1-NN baseline
    let scan: Vec<usize> = target
        .iter_rows()
        .map(|x| task.source.labels[nearest_row_oracle(&task.source.features, x)])
        .collect();
    assert_eq!(scan, nn.labels);
    assert_eq!(accuracy(&full.labels, &task.target.labels), 1.0);
    assert!(accuracy(&nn.labels, &task.target.labels) < 1.0);

    let dir = shift_dir();
    let dict = LabelDictionary::from_labels(&SHIFT_CLASS_NAMES);
    if std::env::var_os("EASYTL_REGENERATE_FIXTURES").is_some() {
        std::fs::create_dir_all(&dir).unwrap();
        write_labeled_csv(&dir.join("source.csv"), &task.source, &SHIFT_CLASS_NAMES);
        dataio::save_features(target, &dir.join("target.csv")).unwrap();
        write_label_csv(
            &dir.join("target_labels.csv"),
            &task.target.labels,
            &SHIFT_CLASS_NAMES,
        );
        dataio::save_predictions(&full, &dict, &dir.join("golden_coral_easytl.csv")).unwrap();
        dataio::save_predictions(&nn, &dict, &dir.join("golden_none_1nn.csv")).unwrap();
    }

    // the frozen files must still load back to the generator output
    let (src, src_dict) =
        dataio::load_labeled::<f64>(&DatasetFile::new(dir.join("source.csv"))).unwrap();
    assert_eq!(src.features, task.source.features);
    assert_eq!(src.labels, task.source.labels);
    assert_eq!(src_dict, dict);
    let tgt = dataio::load_unlabeled::<f64>(&DatasetFile::new(dir.join("target.csv"))).unwrap();
    assert_eq!(&tgt, target);
}
