use std::fs;
use std::path::{Path, PathBuf};

use felix_core::ingest::{
    build_manifest, golden_subset, load_feature_matrix, load_layer_tables, npy, read_layer_manifest, read_npy,
    read_sidecar, save_feature_matrix, write_npy, write_sidecar, Dtype, LayerTable, PairStatus,
};
use felix_core::{Error, FeatureMatrix};
use image::{GrayImage, Luma, Rgb, RgbImage, Rgba, RgbaImage};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

#[test]
fn reads_float32_fixture_widened() {
    let a = read_npy(fixture("f32_3x2.npy")).unwrap();
    assert_eq!((a.rows, a.cols, a.dtype), (3, 2, Dtype::F4));
    let want = [1.5f32, -2.0, 0.25, 3.0, 1e-3, 7.0].map(f64::from);
    assert_eq!(a.values, want);
}

#[test]
fn writer_is_byte_identical_to_reference() {
    for name in ["f8_2x3.npy", "f32_3x2.npy", "f8_0x4.npy"] {
        let bytes = fs::read(fixture(name)).unwrap();
        let a = npy::parse_npy(&bytes).unwrap();
        assert_eq!(
            npy::encode_npy(a.rows, a.cols, a.dtype, &a.values).unwrap(),
            bytes,
            "{name}"
        );
    }
}

#[test]
fn rejects_big_endian_and_non_2d() {
    match read_npy(fixture("be_f8.npy")) {
        Err(Error::Format { offset, message }) => {
            assert!(message.contains("big-endian"), "{message}");
            assert!(offset > 10);
        }
        other => panic!("{other:?}"),
    }
    match read_npy(fixture("f8_1d.npy")) {
        Err(Error::Format { message, .. }) => assert!(message.contains("2-D"), "{message}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn zero_row_file_is_invalid() {
    let dir = tempfile::tempdir().unwrap();
    let ids = dir.path().join("ids.txt");
    fs::write(&ids, "").unwrap();
    assert!(matches!(
        load_feature_matrix(fixture("f8_0x4.npy"), &ids),
        Err(Error::InvalidInput(_))
    ));
}

#[test]
fn feature_matrix_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let x = FeatureMatrix::new(
        3,
        2,
        vec![0.1, -1e-300, 1.0 / 3.0, 7.5, 2.0f64.sqrt(), -4.0],
        vec!["a.png".into(), "sub/b.png".into(), "c.png".into()],
    )
    .unwrap();
    let (p, s) = (dir.path().join("x.npy"), dir.path().join("x.ids"));
    save_feature_matrix(&x, &p, &s, Dtype::F8).unwrap();
    assert_eq!(load_feature_matrix(&p, &s).unwrap(), x);

    save_feature_matrix(&x, &p, &s, Dtype::F4).unwrap();
    let back = load_feature_matrix(&p, &s).unwrap();
    for (a, b) in back.values().iter().zip(x.values()) {
        assert_eq!(*a, (*b as f32) as f64);
    }
}

#[test]
fn sidecar_row_count_must_match() {
    let dir = tempfile::tempdir().unwrap();
    let (p, s) = (dir.path().join("x.npy"), dir.path().join("x.ids"));
    write_npy(&p, 2, 1, Dtype::F8, &[1.0, 2.0]).unwrap();
    write_sidecar(&s, &["only".to_string()]).unwrap();
    assert!(matches!(load_feature_matrix(&p, &s), Err(Error::Misaligned(_))));
    assert_eq!(read_sidecar(&s).unwrap(), vec!["only"]);
}

fn save_rgb(path: &Path) {
    fs::create_dir_all(path.parent().unwrap()).unwrap();
    RgbImage::from_pixel(4, 3, Rgb([10, 200, 30])).save(path).unwrap();
}

#[test]
fn manifest_statuses_and_determinism() {
    let root = tempfile::tempdir().unwrap();
    let (h, c) = (root.path().join("human"), root.path().join("cat"));
    for p in ["a.png", "b.png", "nested/d.png", "e.png", "f.png"] {
        save_rgb(&h.join(p));
    }
    for p in ["a.png", "nested/d.png", "only_cat.png"] {
        save_rgb(&c.join(p));
    }
    GrayImage::from_pixel(4, 3, Luma([80])).save(c.join("e.png")).unwrap();
    RgbaImage::from_pixel(4, 3, Rgba([1, 2, 3, 255]))
        .save(h.join("g.png"))
        .unwrap();
    RgbImage::from_pixel(4, 3, Rgb([1, 2, 3]))
        .save(c.join("g.png"))
        .unwrap();
    fs::write(c.join("f.png"), b"not an image").unwrap();
    fs::write(h.join(".hidden"), b"x").unwrap();

    let m = build_manifest(&h, &c).unwrap();
    let got: Vec<(&str, PairStatus)> = m.records().iter().map(|r| (r.pair_id.as_str(), r.status)).collect();
    assert_eq!(
        got,
        vec![
            ("a.png", PairStatus::Ok),
            ("b.png", PairStatus::MissingCounterpart),
            ("e.png", PairStatus::NonRgb),
            ("f.png", PairStatus::Corrupt),
            ("g.png", PairStatus::Ok),
            ("nested/d.png", PairStatus::Ok),
            ("only_cat.png", PairStatus::MissingCounterpart),
        ]
    );
    assert_eq!(m.ok().count(), 3);

    let csv = m.to_csv().unwrap();
    assert!(String::from_utf8_lossy(&csv).starts_with("pair_id,human_path,cat_path,status\n"));
    assert_eq!(build_manifest(&h, &c).unwrap().to_csv().unwrap(), csv);
}

#[test]
fn identical_trees_pair_fully_and_disjoint_trees_warn_only() {
    let root = tempfile::tempdir().unwrap();
    let (h, c, other) = (root.path().join("h"), root.path().join("c"), root.path().join("o"));
    for i in 0..5 {
        save_rgb(&h.join(format!("{i}.jpg")));
        save_rgb(&c.join(format!("{i}.jpg")));
        save_rgb(&other.join(format!("x{i}.jpg")));
    }
    let m = build_manifest(&h, &c).unwrap();
    assert_eq!(m.ok().count(), 5);
    let disjoint = build_manifest(&h, &other).unwrap();
    assert_eq!(disjoint.ok().count(), 0);
    assert_eq!(disjoint.count(PairStatus::MissingCounterpart), 10);
}

fn write_layer(dir: &Path, name: &str, n: usize, ids: &[String]) {
    let x: Vec<f64> = (0..n * 3).map(|i| (i as f64 * 0.7).sin()).collect();
    let y: Vec<f64> = (0..n * 3).map(|i| (i as f64 * 0.3).cos()).collect();
    write_npy(dir.join(format!("{name}_h.npy")), n, 3, Dtype::F4, &x).unwrap();
    write_npy(dir.join(format!("{name}_c.npy")), n, 3, Dtype::F8, &y).unwrap();
    write_sidecar(dir.join(format!("{name}.ids")), ids).unwrap();
}

#[test]
fn layer_manifest_loading() {
    let dir = tempfile::tempdir().unwrap();
    let ids: Vec<String> = (0..6).map(|i| format!("p{i}.png")).collect();
    write_layer(dir.path(), "l1", 6, &ids);
    write_layer(dir.path(), "l0", 6, &ids);
    let mut swapped = ids.clone();
    swapped.swap(0, 1);
    write_sidecar(dir.path().join("cat.ids"), &swapped).unwrap();
    fs::write(
        dir.path().join("layers.csv"),
        "model,layer,human_feature_path,cat_feature_path,sidecar_path\n\
         m,l1,l1_h.npy,l1_c.npy,l1.ids\n\
         m,l0,l0_h.npy,l0_c.npy,l0.ids\n",
    )
    .unwrap();
    let tables = load_layer_tables(&read_layer_manifest(dir.path().join("layers.csv")).unwrap()).unwrap();
    assert_eq!(
        tables.iter().map(|t| t.layer.as_str()).collect::<Vec<_>>(),
        ["l0", "l1"]
    );
    assert!(tables.iter().all(|t| t.n() == 6));

    fs::write(
        dir.path().join("bad.csv"),
        "model,layer,human_feature_path,cat_feature_path,sidecar_path,cat_sidecar_path\n\
         m,l0,l0_h.npy,l0_c.npy,l0.ids,l0.ids\n\
         m,shuffled,l1_h.npy,l1_c.npy,l1.ids,cat.ids\n",
    )
    .unwrap();
    match load_layer_tables(&read_layer_manifest(dir.path().join("bad.csv")).unwrap()) {
        Err(Error::Misaligned(m)) => assert!(m.contains("m/shuffled"), "{m}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn golden_subset_is_stable() {
    let n = 200;
    let ids: Vec<String> = (0..n).map(|i| format!("frame_{i:04}.png")).collect();
    let x = FeatureMatrix::new(n, 1, (0..n).map(|i| i as f64).collect(), ids.clone()).unwrap();
    let t = LayerTable::new("m", "l", x.clone(), x).unwrap();
    let a = golden_subset(&t, 4, 7).unwrap();
    let b = golden_subset(&t, 4, 7).unwrap();
    assert_eq!(a, b);
    assert!(a.n() > 25 && a.n() < 80, "{}", a.n());
    assert_eq!(golden_subset(&t, 1, 7).unwrap().n(), n);
    assert_ne!(
        golden_subset(&t, 4, 8).unwrap().x_human.pair_ids(),
        a.x_human.pair_ids()
    );
}
