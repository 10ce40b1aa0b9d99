//! Memristor-network melody generation.
//!
//! Seed melodies are folded into two octaves and counted into a 24×24
//! pitch transition graph and a 9×9 duration graph whose connections are
//! memristors: conductance grows with accumulated state along a saturating
//! curve. Generation picks, at each step, the transition out of the current
//! symbol with the largest `weight × |gaussian|` score, then feeds the spike
//! back (forward up, reverse down, short relaxation), so the process drifts
//! away from its seed and is not Markovian.
//!
//! Core types are generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix `f64`, which the CLI uses.

pub mod alphabet;
pub mod analyzer;
pub mod cli;
pub mod composer;
pub mod error;
pub mod graph;
pub mod io;
pub mod manifest;
pub mod matrix;
pub mod memristor;
pub mod scalar;
pub mod seeder;

pub use alphabet::{Alphabet, Duration, Pitch};
pub use analyzer::{drift_l1, reducibility, symmetry_pct, StyleReport};
pub use composer::{
    draw_scores, evolve, generate, generate_with, next_symbol, Choice, Composer, DrawSource,
    Evolution, GaussianStream, GeneratedPiece, GeneratorConfig, Noise, Snapshot, StepRecord,
};
pub use error::{Error, Result};
pub use graph::TransitionGraph;
pub use matrix::SquareMatrix;
pub use memristor::{relax_factor, ConductanceCurve, MemristorElement, RelaxPhase};
pub use scalar::Scalar;
pub use seeder::{
    count_transitions, normalize, parse_melody, seed_graphs, Melody, NoteEvent, SeedCorpus,
};

pub type Curve = ConductanceCurve<f64>;
pub type Element = MemristorElement<f64>;
pub type Graph = TransitionGraph<f64>;
pub type Piece = GeneratedPiece<f64>;
pub type Record = StepRecord<f64>;

pub type CurveF32 = ConductanceCurve<f32>;
pub type GraphF32 = TransitionGraph<f32>;
pub type PieceF32 = GeneratedPiece<f32>;
