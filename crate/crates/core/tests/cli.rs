mod common;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use memcompose::io::{load_graph, read_matrix_csv};
use memcompose::{Alphabet, Curve};

use common::fixtures;

fn memcompose(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_memcompose"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn seed_into(dir: &Path, corpus: &Path) -> PathBuf {
    let out = dir.join("matrices");
    let res = memcompose(&["seed", "--corpus", s(corpus), "--out", s(&out)]);
    assert!(
        res.status.success(),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    out
}

#[test]
fn seed_writes_four_matrices() {
    let dir = tempfile::tempdir().unwrap();
    let out = seed_into(dir.path(), &fixtures().join("corpus.txt"));
    for (file, n) in [
        ("pitch-states.csv", 24),
        ("pitch-weights.csv", 24),
        ("tempo-states.csv", 9),
        ("tempo-weights.csv", 9),
    ] {
        let text = fs::read_to_string(out.join(file)).unwrap();
        let (alphabet, m) = read_matrix_csv::<f64, _>(text.as_bytes(), Path::new(file)).unwrap();
        assert_eq!(alphabet.size(), n, "{file}");
        assert_eq!(m.len(), n * n);
    }
}

#[test]
fn seed_is_byte_identical_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let a = seed_into(&dir.path().join("a"), &fixtures().join("corpus.txt"));
    let b = seed_into(&dir.path().join("b"), &fixtures().join("corpus.json"));
    for file in [
        "pitch-states.csv",
        "pitch-weights.csv",
        "tempo-states.csv",
        "tempo-weights.csv",
    ] {
        assert_eq!(
            fs::read(a.join(file)).unwrap(),
            fs::read(b.join(file)).unwrap(),
            "{file}"
        );
    }
    let (in_memory, _) = common::fixture_graphs();
    let loaded = load_graph(&a.join("pitch-states.csv"), Curve::default()).unwrap();
    let bits = |g: &memcompose::Graph| -> Vec<u64> {
        g.effective_weights()
            .as_slice()
            .iter()
            .map(|w| w.to_bits())
            .collect()
    };
    assert_eq!(bits(&loaded), bits(&in_memory));
}

#[test]
fn empty_corpus_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("empty.txt");
    fs::write(&manifest, "# no files\n").unwrap();
    let res = memcompose(&["seed", "--corpus", s(&manifest), "--out", s(dir.path())]);
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn parse_errors_name_the_file_and_line() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.mel");
    fs::write(&bad, "C4:1\nD4:1 H4:1\n").unwrap();
    let res = memcompose(&["seed", "--corpus", s(&bad), "--out", s(dir.path())]);
    assert_eq!(res.status.code(), Some(2));
    let err = String::from_utf8_lossy(&res.stderr);
    assert!(err.contains("bad.mel:2:6"), "{err}");
}

#[test]
fn generate_defaults_to_one_hundred_notes() {
    let dir = tempfile::tempdir().unwrap();
    let matrices = seed_into(dir.path(), &fixtures().join("corpus.txt"));
    let out = dir.path().join("gen");
    let res = memcompose(&["generate", "--matrices", s(&matrices), "--out", s(&out)]);
    assert!(res.status.success());
    let piece = memcompose::io::read_melody_file(&out.join("piece.mel")).unwrap();
    assert_eq!(piece.len(), 100);
    assert!(piece.events.iter().all(|e| e.pitch.index().is_some()));
    let trace = fs::read_to_string(out.join("trace.csv")).unwrap();
    assert_eq!(
        trace.lines().next().unwrap(),
        "step,from_pitch,to_pitch,score,from_dur,to_dur,dur_score"
    );
    assert!(trace.lines().nth(1).unwrap().starts_with("1,C4,"));
    assert!(out.join("final/pitch-states.csv").exists());
    assert!(out.join("final/tempo-states.csv").exists());
}

#[test]
fn no_feedback_leaves_inputs_and_writes_no_final_matrices() {
    let dir = tempfile::tempdir().unwrap();
    let matrices = seed_into(dir.path(), &fixtures().join("corpus.txt"));
    let before = fs::read(matrices.join("pitch-states.csv")).unwrap();
    let out = dir.path().join("gen");
    let res = memcompose(&[
        "generate",
        "--matrices",
        s(&matrices),
        "--no-feedback",
        "--out",
        s(&out),
    ]);
    assert!(res.status.success());
    assert_eq!(fs::read(matrices.join("pitch-states.csv")).unwrap(), before);
    assert!(!out.join("final").exists());
}

#[test]
fn generate_seed_controls_output() {
    let dir = tempfile::tempdir().unwrap();
    let matrices = seed_into(dir.path(), &fixtures().join("corpus.txt"));
    let run = |name: &str, seed: &str| {
        let out = dir.path().join(name);
        let res = memcompose(&[
            "generate",
            "--matrices",
            s(&matrices),
            "--seed",
            seed,
            "--out",
            s(&out),
        ]);
        assert!(res.status.success());
        fs::read(out.join("piece.mel")).unwrap()
    };
    assert_eq!(run("a", "7"), run("b", "7"));
    assert_ne!(run("c", "7"), run("d", "8"));
    // Seeding in memory from the corpus gives the same piece.
    let out = dir.path().join("e");
    let corpus = fixtures().join("corpus.txt");
    let res = memcompose(&[
        "generate",
        "--corpus",
        s(&corpus),
        "--seed",
        "7",
        "--out",
        s(&out),
    ]);
    assert!(res.status.success());
    assert_eq!(fs::read(out.join("piece.mel")).unwrap(), run("f", "7"));
}

#[test]
fn generate_rejects_missing_or_corrupt_matrices() {
    let dir = tempfile::tempdir().unwrap();
    let res = memcompose(&[
        "generate",
        "--matrices",
        s(&dir.path().join("nope")),
        "--out",
        s(dir.path()),
    ]);
    assert_eq!(res.status.code(), Some(2));

    let matrices = seed_into(dir.path(), &fixtures().join("corpus.txt"));
    let res = memcompose(&["generate", "--matrices", s(&matrices), "--sigma", "0"]);
    assert_eq!(res.status.code(), Some(1));

    fs::write(matrices.join("tempo-states.csv"), "1,2,3\n").unwrap();
    let res = memcompose(&[
        "generate",
        "--matrices",
        s(&matrices),
        "--out",
        s(dir.path()),
    ]);
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn evolve_writes_snapshot_directories() {
    let dir = tempfile::tempdir().unwrap();
    let matrices = seed_into(dir.path(), &fixtures().join("corpus.txt"));
    let out = dir.path().join("evo");
    let res = memcompose(&[
        "evolve",
        "--matrices",
        s(&matrices),
        "--snapshots",
        "1000,10000,100000",
        "--out",
        s(&out),
    ]);
    assert!(
        res.status.success(),
        "{}",
        String::from_utf8_lossy(&res.stderr)
    );
    let mut dirs: Vec<_> = fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().file_name())
        .collect();
    dirs.sort();
    assert_eq!(
        dirs,
        ["snapshot-001000", "snapshot-010000", "snapshot-100000"]
    );
    for d in &dirs {
        let excerpt = memcompose::io::read_melody_file(&out.join(d).join("excerpt.mel")).unwrap();
        assert_eq!(excerpt.len(), 100);
        assert!(out.join(d).join("pitch-states.csv").exists());
    }
}

#[test]
fn evolve_snapshot_zero_copies_the_seed() {
    let dir = tempfile::tempdir().unwrap();
    let matrices = seed_into(dir.path(), &fixtures().join("corpus.txt"));
    let out = dir.path().join("evo");
    let res = memcompose(&[
        "evolve",
        "--matrices",
        s(&matrices),
        "--snapshots",
        "0",
        "--out",
        s(&out),
    ]);
    assert!(res.status.success());
    for file in ["pitch-states.csv", "tempo-states.csv"] {
        assert_eq!(
            fs::read(out.join("snapshot-000000").join(file)).unwrap(),
            fs::read(matrices.join(file)).unwrap()
        );
    }
    let res = memcompose(&["evolve", "--matrices", s(&matrices), "--snapshots", "10,5"]);
    assert_eq!(res.status.code(), Some(1));
}

#[test]
fn analyze_reports_symmetry_reducibility_and_drift() {
    let dir = tempfile::tempdir().unwrap();

    // Symmetric fixture: C4 <-> D4 once each way.
    let sym = dir.path().join("sym.mel");
    fs::write(&sym, "C4:1 D4:1 C4:1\n").unwrap();
    let sym_m = seed_into(&dir.path().join("sym"), &sym);
    let res = memcompose(&["analyze", s(&sym_m.join("pitch-states.csv"))]);
    assert!(res.status.success());
    let stdout = String::from_utf8(res.stdout).unwrap();
    let json_start = stdout.find('[').unwrap();
    let reports: serde_json::Value = serde_json::from_str(&stdout[json_start..]).unwrap();
    assert_eq!(reports[0]["symmetry_pct"], 100.0);

    let five = seed_into(&dir.path().join("five"), &fixtures().join("five.mel"));
    let out = dir.path().join("report");
    let res = memcompose(&[
        "analyze",
        s(&five.join("pitch-states.csv")),
        s(&five.join("tempo-states.csv")),
        "--reference",
        s(&sym_m.join("pitch-states.csv")),
        "--out",
        s(&out),
    ]);
    // The tempo matrix has no same-sized reference.
    assert_eq!(res.status.code(), Some(2));

    let res = memcompose(&[
        "analyze",
        s(&five.join("pitch-states.csv")),
        "--reference",
        s(&sym_m.join("pitch-states.csv")),
        "--out",
        s(&out),
    ]);
    assert!(res.status.success());
    let reports: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(reports[0]["reducibility"], 5);
    assert!(reports[0]["drift_l1"].as_f64().unwrap() > 0.0);
    assert_eq!(reports[0]["alphabet"], "pitch");
    assert_eq!(
        reports[0]["per_symbol_usage"].as_array().unwrap().len(),
        Alphabet::Pitch.size()
    );
}

#[test]
fn usage_errors_exit_with_one() {
    assert_eq!(memcompose(&[]).status.code(), Some(1));
    assert_eq!(memcompose(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(memcompose(&["seed"]).status.code(), Some(1));
    assert_eq!(memcompose(&["analyze"]).status.code(), Some(1));
    assert_eq!(memcompose(&["--version"]).status.code(), Some(0));
}
