use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use felix_core::filter::{io as fio, RgbImage};
use felix_core::ingest::{write_npy, write_sidecar, Dtype};

fn felix(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_felix"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .expect("binary runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn write_images(dir: &Path, count: usize) {
    fs::create_dir_all(dir).unwrap();
    for i in 0..count {
        let img = RgbImage::<f64>::from_fn(12, 16, |y, x| {
            [(x + i) as f64 / 20.0, y as f64 / 12.0, ((x * y + i) % 7) as f64 / 7.0]
        });
        fio::write_image(&img, dir.join(format!("frame_{i:02}.png"))).unwrap();
    }
}

fn write_layer_grid(dir: &Path) -> PathBuf {
    let (n, d) = (10, 4);
    let ids: Vec<String> = (0..n).map(|i| format!("pair_{i}")).collect();
    write_sidecar(dir.join("pairs.ids"), &ids).unwrap();
    let mut manifest = String::from("model,layer,human_feature_path,cat_feature_path,sidecar_path\n");
    for (m, model) in ["cnn", "vit"].into_iter().enumerate() {
        for l in 0..2 {
            let x: Vec<f64> = (0..n * d).map(|k| ((k * 7 + m * 3 + l) as f64).sin()).collect();
            let y: Vec<f64> = x
                .iter()
                .enumerate()
                .map(|(k, v)| v + 0.2 * ((k * 13 + l) as f64).cos())
                .collect();
            let (h, c) = (format!("{model}_{l}_h.npy"), format!("{model}_{l}_c.npy"));
            write_npy(dir.join(&h), n, d, Dtype::F4, &x).unwrap();
            write_npy(dir.join(&c), n, d, Dtype::F4, &y).unwrap();
            writeln!(manifest, "{model},layer{l},{h},{c},pairs.ids").unwrap();
        }
    }
    let path = dir.join("layers.csv");
    fs::write(&path, manifest).unwrap();
    path
}

#[test]
fn filter_directory_writes_one_output_and_line_per_image() {
    let dir = tempfile::tempdir().unwrap();
    let (input, out) = (dir.path().join("in"), dir.path().join("out"));
    write_images(&input, 3);
    let o = felix(&["filter", s(&input), "--out", s(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let lines: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 3);
    for line in &lines {
        assert_eq!(line["temporal"], "skipped");
        assert!(Path::new(line["output"].as_str().unwrap()).is_file());
    }
    assert_eq!(fs::read_dir(&out).unwrap().count(), 3);
}

#[test]
fn filter_sequence_reports_stage_flags() {
    let dir = tempfile::tempdir().unwrap();
    let (input, out) = (dir.path().join("seq"), dir.path().join("out"));
    write_images(&input, 4);
    let o = felix(&[
        "filter",
        s(&input),
        "--out",
        s(&out),
        "--mode",
        "sequence",
        "--frame-rate",
        "24",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let lines: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 4);
    assert!(lines.iter().all(|l| l["temporal"] == "applied"));
    assert_eq!(fio::list_frames(&out).unwrap().len(), 4);
}

#[test]
fn unknown_config_key_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let img = dir.path().join("a.png");
    write_images(dir.path(), 1);
    fs::rename(dir.path().join("frame_00.png"), &img).unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, r#"{"sigma_lp": 0.2, "sigma_lowpass": 0.3}"#).unwrap();
    let o = felix(&[
        "filter",
        s(&img),
        "--out",
        s(&dir.path().join("b.png")),
        "--config",
        s(&cfg),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("sigma_lowpass"), "{}", stderr(&o));
}

#[test]
fn missing_input_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let o = felix(&[
        "filter",
        s(&dir.path().join("nope.png")),
        "--out",
        s(&dir.path().join("o.png")),
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn bad_worker_count_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_felix"))
        .args(["rank", s(&dir.path().join("r.csv"))])
        .env("FELIX_WORKERS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn align_then_rank() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = write_layer_grid(dir.path());
    let out = dir.path().join("report");
    let o = felix(&[
        "align",
        s(&manifest),
        "--out",
        s(&out),
        "--seed",
        "3",
        "--perms-mantel",
        "99",
        "--perms-shift",
        "49",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    for f in [
        "layer_reports.csv",
        "model_summary.csv",
        "dissimilarity.csv",
        "report.json",
    ] {
        assert!(out.join(f).is_file(), "missing {f}");
    }
    let reports = fs::read_to_string(out.join("layer_reports.csv")).unwrap();
    assert_eq!(reports.lines().count(), 5);

    let o = felix(&["rank", s(&out.join("layer_reports.csv"))]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("criterion,rank,model,layer,value"));
    assert_eq!(text, fs::read_to_string(out.join("dissimilarity.csv")).unwrap());
}

#[test]
fn align_with_bad_options_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = write_layer_grid(dir.path());
    let o = felix(&[
        "align",
        s(&manifest),
        "--out",
        s(&dir.path().join("r")),
        "--fdr-q",
        "1.5",
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn pairs_writes_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let (human, cat) = (dir.path().join("human"), dir.path().join("cat"));
    write_images(&human, 3);
    write_images(&cat, 2);
    let out = dir.path().join("pairs.csv");
    let o = felix(&["pairs", s(&human), s(&cat), "--out", s(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "pair_id,human_path,cat_path,status");
    assert_eq!(lines.len(), 4);
    assert!(lines[3].starts_with("frame_02.png,") && lines[3].ends_with(",missing-counterpart"));
}
