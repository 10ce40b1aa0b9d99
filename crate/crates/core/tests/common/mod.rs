#![allow(dead_code)]

use std::path::{Path, PathBuf};

use memcompose::manifest::RunManifest;
use memcompose::{seed_graphs, Curve, Graph, Melody};

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn fixture_corpus() -> Vec<Melody> {
    RunManifest::load(&fixtures().join("corpus.txt"), 0)
        .unwrap()
        .load_corpus()
        .unwrap()
        .normalized()
}

pub fn fixture_graphs() -> (Graph, Graph) {
    seed_graphs(&fixture_corpus(), Curve::default(), 1.0).unwrap()
}

/// Independent fold into C4..B5 by repeated octave shifts.
pub fn oracle_pitch_index(midi: i32) -> usize {
    let mut p = midi;
    while p < 60 {
        p += 12;
    }
    while p > 83 {
        p -= 12;
    }
    (p - 60) as usize
}

/// Alphabet order: semiquaver, quaver, crotchet, minim, dotted semiquaver,
/// dotted quaver, dotted crotchet, dotted minim, breve.
pub const ORACLE_BEATS: [f64; 9] = [0.25, 0.5, 1.0, 2.0, 0.375, 0.75, 1.5, 3.0, 8.0];

/// Nearest duration index by linear scan; ties go to the shorter value.
pub fn oracle_duration_index(beats: f64) -> usize {
    let mut best = 0;
    for (k, &v) in ORACLE_BEATS.iter().enumerate() {
        let d = (v - beats).abs();
        let b = (ORACLE_BEATS[best] - beats).abs();
        if d < b || (d == b && v < ORACLE_BEATS[best]) {
            best = k;
        }
    }
    best
}
