//! Melody generation by the simplified spiking rule.
//!
//! Each step every transition gets a score `weight × |mu + sigma·z|` with one
//! standard normal draw `z` per transition; the next symbol is the highest
//! scoring transition out of the current one. With feedback on, the fired
//! transition is pushed back into its graph (increment forward, decrement
//! reverse, quarter/half relaxation), so the walk is not Markovian.
//!
//! Draw order is the determinism contract: per step, the 24×24 pitch block
//! in row-major order, then the 9×9 tempo block. Every draw uses exactly one
//! 64-bit word pair of a ChaCha8 stream, so rows that are not needed are
//! skipped by seeking instead of sampled; the result is identical to
//! drawing the full matrices.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use statrs::function::erf::erfc_inv;

use crate::alphabet::{Alphabet, Duration, Pitch};
use crate::error::{Error, Result};
use crate::graph::TransitionGraph;
use crate::matrix::SquareMatrix;
use crate::scalar::Scalar;
use crate::seeder::{Melody, NoteEvent};

pub const DEFAULT_SEED: u64 = 42;

/// Source of standard normal draws.
pub trait DrawSource {
    fn next_normal(&mut self) -> f64;

    /// Discards `count` draws.
    fn skip(&mut self, count: u64) {
        for _ in 0..count {
            self.next_normal();
        }
    }
}

/// Seekable standard normal stream: ChaCha8 words through the inverse
/// normal CDF, one `u64` per draw.
#[derive(Clone, Debug)]
pub struct GaussianStream {
    rng: ChaCha8Rng,
}

impl GaussianStream {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Independent stream `stream` under the same seed.
    pub fn fork(seed: u64, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        Self { rng }
    }

    /// Number of draws consumed so far.
    pub fn draws_consumed(&self) -> u128 {
        self.rng.get_word_pos() / 2
    }
}

impl DrawSource for GaussianStream {
    fn next_normal(&mut self) -> f64 {
        // Uniform on the open interval (0, 1).
        let u = ((self.rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64);
        -std::f64::consts::SQRT_2 * erfc_inv(2.0 * u)
    }

    fn skip(&mut self, count: u64) {
        let pos = self.rng.get_word_pos();
        self.rng.set_word_pos(pos + 2 * u128::from(count));
    }
}

/// Gaussian parameters; scores use the folded value `|mu + sigma·z|`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Noise {
    pub mu: f64,
    pub sigma: f64,
}

impl Noise {
    pub fn fold(&self, z: f64) -> f64 {
        (self.mu + self.sigma * z).abs()
    }
}

impl Default for Noise {
    fn default() -> Self {
        Self {
            mu: 0.0,
            sigma: 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorConfig {
    pub rng_seed: u64,
    pub gaussian_mu: f64,
    pub gaussian_sigma: f64,
    pub inc_step: f64,
    pub dec_step: f64,
    pub note_count: usize,
    pub feedback: bool,
    pub start_pitch: Pitch,
    pub start_duration: Duration,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self {
            rng_seed: DEFAULT_SEED,
            gaussian_mu: 0.0,
            gaussian_sigma: 1.0,
            inc_step: 1.0,
            dec_step: 1.0,
            note_count: 100,
            feedback: true,
            start_pitch: Pitch::C4,
            start_duration: Duration::Crotchet,
        }
    }
}

impl GeneratorConfig {
    pub fn noise(&self) -> Noise {
        Noise {
            mu: self.gaussian_mu,
            sigma: self.gaussian_sigma,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !self.gaussian_sigma.is_finite() || self.gaussian_sigma <= 0.0 {
            return bad(format!(
                "gaussian_sigma must be positive, got {}",
                self.gaussian_sigma
            ));
        }
        if !self.gaussian_mu.is_finite() {
            return bad(format!(
                "gaussian_mu must be finite, got {}",
                self.gaussian_mu
            ));
        }
        for (name, v) in [("inc_step", self.inc_step), ("dec_step", self.dec_step)] {
            if !v.is_finite() || v <= 0.0 {
                return bad(format!("{name} must be positive, got {v}"));
            }
        }
        if self.note_count == 0 {
            return bad("note_count must be at least 1".into());
        }
        if self.start_pitch.index().is_none() {
            return bad(format!(
                "start pitch {} is outside C4..B5",
                self.start_pitch
            ));
        }
        Ok(())
    }
}

/// Outcome of one argmax selection.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Choice<T> {
    pub to: usize,
    pub score: T,
    /// Effective weight of the chosen transition when it was scored.
    pub weight: T,
    /// Relaxation factor included in `weight`.
    pub factor: T,
    /// Folded Gaussian value the weight was multiplied by.
    pub draw: f64,
}

/// Scores for every transition, consuming N² draws in row-major order.
pub fn draw_scores<T: Scalar, S: DrawSource>(
    graph: &TransitionGraph<T>,
    source: &mut S,
    noise: Noise,
) -> SquareMatrix<T> {
    graph
        .effective_weights()
        .map(|&w| w * T::lit(noise.fold(source.next_normal())))
}

fn choose<T: Scalar, S: DrawSource>(
    graph: &TransitionGraph<T>,
    current: usize,
    source: &mut S,
    noise: Noise,
    weights: &mut Vec<T>,
) -> Choice<T> {
    let n = graph.size();
    graph.row_weights_into(current, weights);
    source.skip((current * n) as u64);
    let mut best: Option<Choice<T>> = None;
    for (to, &weight) in weights.iter().enumerate() {
        let draw = noise.fold(source.next_normal());
        let score = weight * T::lit(draw);
        if best.is_none_or(|b| score > b.score) {
            best = Some(Choice {
                to,
                score,
                weight,
                factor: graph.elements()[current * n + to].phase().factor(),
                draw,
            });
        }
    }
    source.skip(((n - current - 1) * n) as u64);
    best.expect("alphabet is non-empty")
}

/// Highest scoring successor of `current`; ties go to the lower index.
/// Consumes the draws of the whole matrix.
pub fn next_symbol<T: Scalar, S: DrawSource>(
    graph: &TransitionGraph<T>,
    current: usize,
    source: &mut S,
    noise: Noise,
) -> Result<Choice<T>> {
    if current >= graph.size() {
        return Err(Error::UnknownSymbol {
            index: current,
            size: graph.size(),
        });
    }
    Ok(choose(graph, current, source, noise, &mut Vec::new()))
}

/// Audit record of one generation step. Symbols are alphabet indices.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepRecord<T> {
    /// 1-based step number.
    pub step: usize,
    pub from_pitch: usize,
    pub pitch: Choice<T>,
    pub from_dur: usize,
    pub dur: Choice<T>,
}

/// Stateful generator driving a pitch graph and a tempo graph in lockstep.
#[derive(Clone, Debug)]
pub struct Composer<T, S> {
    pitch: TransitionGraph<T>,
    tempo: TransitionGraph<T>,
    source: S,
    config: GeneratorConfig,
    pitch_at: usize,
    dur_at: usize,
    steps: usize,
    scratch: Vec<T>,
}

impl<T: Scalar, S: DrawSource> Composer<T, S> {
    pub fn new(
        pitch: TransitionGraph<T>,
        tempo: TransitionGraph<T>,
        config: GeneratorConfig,
        source: S,
    ) -> Result<Self> {
        config.validate()?;
        if pitch.alphabet() != Alphabet::Pitch || tempo.alphabet() != Alphabet::Duration {
            return Err(Error::InvalidConfig(
                "expected a pitch graph and a tempo graph".into(),
            ));
        }
        let pitch_at = config.start_pitch.index().expect("validated start pitch");
        let dur_at = config.start_duration.index();
        Ok(Self {
            pitch,
            tempo,
            source,
            config,
            pitch_at,
            dur_at,
            steps: 0,
            scratch: Vec::new(),
        })
    }

    pub fn config(&self) -> &GeneratorConfig {
        &self.config
    }

    pub fn pitch_graph(&self) -> &TransitionGraph<T> {
        &self.pitch
    }

    pub fn tempo_graph(&self) -> &TransitionGraph<T> {
        &self.tempo
    }

    pub fn steps_taken(&self) -> usize {
        self.steps
    }

    pub fn into_graphs(self) -> (TransitionGraph<T>, TransitionGraph<T>) {
        (self.pitch, self.tempo)
    }

    /// Picks the next pitch and duration, ages relaxation, and feeds the
    /// spikes back when feedback is on. Scores see the relaxation phases
    /// left by earlier steps, so a spike at step n reads 0.25 at n+1, 0.5
    /// at n+2 and full weight from n+3.
    pub fn step(&mut self) -> Result<StepRecord<T>> {
        let noise = self.config.noise();
        let pitch = choose(
            &self.pitch,
            self.pitch_at,
            &mut self.source,
            noise,
            &mut self.scratch,
        );
        let dur = choose(
            &self.tempo,
            self.dur_at,
            &mut self.source,
            noise,
            &mut self.scratch,
        );

        self.pitch.advance_relaxation();
        self.tempo.advance_relaxation();
        if self.config.feedback {
            let inc = T::lit(self.config.inc_step);
            let dec = T::lit(self.config.dec_step);
            self.pitch.apply_spike(self.pitch_at, pitch.to, inc, dec)?;
            self.tempo.apply_spike(self.dur_at, dur.to, inc, dec)?;
        }

        self.steps += 1;
        let record = StepRecord {
            step: self.steps,
            from_pitch: self.pitch_at,
            pitch,
            from_dur: self.dur_at,
            dur,
        };
        self.pitch_at = pitch.to;
        self.dur_at = dur.to;
        Ok(record)
    }

    pub fn event_of(record: &StepRecord<T>) -> NoteEvent {
        NoteEvent {
            pitch: Pitch::from_index(record.pitch.to).expect("pitch index"),
            duration: Duration::from_index(record.dur.to)
                .expect("duration index")
                .beats(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneratedPiece<T> {
    pub events: Vec<NoteEvent>,
    pub pitch_graph: TransitionGraph<T>,
    pub tempo_graph: TransitionGraph<T>,
    pub trace: Vec<StepRecord<T>>,
}

impl<T> GeneratedPiece<T> {
    pub fn melody(&self, name: &str) -> Melody {
        Melody::new(name, self.events.clone())
    }
}

/// Generates `config.note_count` notes starting from the successor of the
/// configured start note.
pub fn generate<T: Scalar>(
    pitch: TransitionGraph<T>,
    tempo: TransitionGraph<T>,
    config: &GeneratorConfig,
) -> Result<GeneratedPiece<T>> {
    let source = GaussianStream::new(config.rng_seed);
    generate_with(pitch, tempo, config, source)
}

pub fn generate_with<T: Scalar, S: DrawSource>(
    pitch: TransitionGraph<T>,
    tempo: TransitionGraph<T>,
    config: &GeneratorConfig,
    source: S,
) -> Result<GeneratedPiece<T>> {
    let mut composer = Composer::new(pitch, tempo, config.clone(), source)?;
    let mut events = Vec::with_capacity(config.note_count);
    let mut trace = Vec::with_capacity(config.note_count);
    for _ in 0..config.note_count {
        let record = composer.step()?;
        events.push(Composer::<T, S>::event_of(&record));
        trace.push(record);
    }
    let (pitch_graph, tempo_graph) = composer.into_graphs();
    Ok(GeneratedPiece {
        events,
        pitch_graph,
        tempo_graph,
        trace,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot<T> {
    /// Notes generated before the snapshot was taken.
    pub at: usize,
    pub pitch: TransitionGraph<T>,
    pub tempo: TransitionGraph<T>,
    /// Excerpt generated from the snapshot without feedback.
    pub excerpt: GeneratedPiece<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Evolution<T> {
    pub snapshots: Vec<Snapshot<T>>,
    pub final_pitch: TransitionGraph<T>,
    pub final_tempo: TransitionGraph<T>,
}

/// Runs `total_notes` steps with feedback on (regardless of
/// `config.feedback`) and snapshots both graphs after each count in
/// `snapshot_at`. Each snapshot gets a `config.note_count`-note excerpt
/// from its own forked stream, with relaxation cleared and no feedback, so
/// excerpts from different snapshots are comparable.
pub fn evolve<T: Scalar>(
    pitch: TransitionGraph<T>,
    tempo: TransitionGraph<T>,
    config: &GeneratorConfig,
    total_notes: usize,
    snapshot_at: &[usize],
) -> Result<Evolution<T>> {
    if snapshot_at.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidConfig(
            "snapshot points must be strictly ascending".into(),
        ));
    }
    if let Some(&last) = snapshot_at.last() {
        if last > total_notes {
            return Err(Error::InvalidConfig(format!(
                "snapshot point {last} exceeds total notes {total_notes}"
            )));
        }
    }
    let run_config = GeneratorConfig {
        feedback: true,
        ..config.clone()
    };
    let mut composer = Composer::new(
        pitch,
        tempo,
        run_config,
        GaussianStream::new(config.rng_seed),
    )?;
    let mut captured = Vec::with_capacity(snapshot_at.len());
    let mut points = snapshot_at.iter().copied().peekable();
    for done in 0..=total_notes {
        if points.next_if_eq(&done).is_some() {
            captured.push((
                done,
                composer.pitch_graph().clone(),
                composer.tempo_graph().clone(),
            ));
        }
        if done < total_notes {
            composer.step()?;
        }
    }

    let excerpt_config = GeneratorConfig {
        feedback: false,
        ..config.clone()
    };
    let snapshots = captured
        .into_par_iter()
        .enumerate()
        .map(|(ordinal, (at, pitch, tempo))| {
            let mut p = pitch.clone();
            let mut t = tempo.clone();
            p.clear_relaxation();
            t.clear_relaxation();
            let source = GaussianStream::fork(config.rng_seed, ordinal as u64 + 1);
            let excerpt = generate_with(p, t, &excerpt_config, source)?;
            Ok(Snapshot {
                at,
                pitch,
                tempo,
                excerpt,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let (final_pitch, final_tempo) = composer.into_graphs();
    Ok(Evolution {
        snapshots,
        final_pitch,
        final_tempo,
    })
}
