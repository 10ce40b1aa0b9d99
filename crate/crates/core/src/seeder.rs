//! Seed melodies: parsing the token format, transposition and octave
//! folding into C4..B5, transition counting, and graph population.
//!
//! Token format: whitespace-separated `PITCH:DURATION` tokens such as
//! `Eb5:0.75`, `R:d` for rests, and `#` comment lines. Durations are in
//! crotchets and may be written as decimals or fractions (`3/8`).

use crate::alphabet::{Alphabet, Duration, Pitch, DURATION_COUNT, PITCH_COUNT};
use crate::error::{Error, Result};
use crate::graph::TransitionGraph;
use crate::matrix::SquareMatrix;
use crate::memristor::ConductanceCurve;
use crate::scalar::Scalar;

/// Shortest and longest durations accepted before quantization.
pub const MIN_PARSE_BEATS: f64 = 0.125;
pub const MAX_PARSE_BEATS: f64 = 16.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoteEvent {
    pub pitch: Pitch,
    /// Length in crotchets.
    pub duration: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Melody {
    pub name: String,
    pub events: Vec<NoteEvent>,
}

impl Melody {
    pub fn new(name: impl Into<String>, events: Vec<NoteEvent>) -> Self {
        Self {
            name: name.into(),
            events,
        }
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Renders in the token format, eight tokens per line.
    pub fn to_tokens(&self) -> String {
        let mut out = format!("# {}\n", self.name);
        for line in self.events.chunks(8) {
            let tokens: Vec<String> = line
                .iter()
                .map(|e| format!("{}:{}", e.pitch, e.duration))
                .collect();
            out.push_str(&tokens.join(" "));
            out.push('\n');
        }
        out
    }
}

/// A melody paired with the transposition that brings it to C.
#[derive(Clone, Debug, PartialEq)]
pub struct CorpusEntry {
    pub melody: Melody,
    pub transpose: i32,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SeedCorpus {
    pub entries: Vec<CorpusEntry>,
}

impl SeedCorpus {
    pub fn new(entries: Vec<CorpusEntry>) -> Self {
        Self { entries }
    }

    pub fn push(&mut self, melody: Melody, transpose: i32) {
        self.entries.push(CorpusEntry { melody, transpose });
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn normalized(&self) -> Vec<Melody> {
        self.entries
            .iter()
            .map(|e| normalize(&e.melody, e.transpose))
            .collect()
    }
}

fn parse_beats(text: &str) -> Option<f64> {
    match text.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num.trim().parse().ok()?;
            let den: f64 = den.trim().parse().ok()?;
            Some(num / den)
        }
        None => text.parse().ok(),
    }
}

pub fn parse_melody(text: &str) -> Result<Melody> {
    parse_melody_named("<input>", text)
}

/// Parses one melody; errors carry `name`, 1-based line and column.
pub fn parse_melody_named(name: &str, text: &str) -> Result<Melody> {
    let mut events = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        if line.trim_start().starts_with('#') {
            continue;
        }
        let mut offset = 0;
        for token in line.split_whitespace() {
            let start = offset + line[offset..].find(token).expect("token from this line");
            offset = start + token.len();
            let column = line[..start].chars().count() + 1;
            let fail = |message: String| Error::Parse {
                source_name: name.to_string(),
                line: line_no + 1,
                column,
                message,
            };
            let (pitch_text, beats_text) = token
                .split_once(':')
                .ok_or_else(|| fail(format!("expected PITCH:DURATION, got `{token}`")))?;
            let beats = parse_beats(beats_text)
                .ok_or_else(|| fail(format!("invalid duration `{beats_text}`")))?;
            if beats.is_nan() || beats <= 0.0 {
                return Err(fail(format!(
                    "duration must be positive, got `{beats_text}`"
                )));
            }
            if !(MIN_PARSE_BEATS..=MAX_PARSE_BEATS).contains(&beats) {
                return Err(fail(format!(
                    "duration {beats} is outside the mappable range [{MIN_PARSE_BEATS}, {MAX_PARSE_BEATS}]"
                )));
            }
            if pitch_text.eq_ignore_ascii_case("r") {
                continue;
            }
            let pitch: Pitch = pitch_text.parse().map_err(|e| fail(format!("{e}")))?;
            events.push(NoteEvent {
                pitch,
                duration: beats,
            });
        }
    }
    Ok(Melody::new(name, events))
}

/// Transposes, folds every pitch into C4..B5 and quantizes durations.
pub fn normalize(melody: &Melody, transpose_semitones: i32) -> Melody {
    let events = melody
        .events
        .iter()
        .map(|e| NoteEvent {
            pitch: e.pitch.transposed(transpose_semitones).folded(),
            duration: Duration::quantize(e.duration).beats(),
        })
        .collect();
    Melody::new(melody.name.clone(), events)
}

fn symbols(melody: &Melody) -> Result<Vec<(usize, usize)>> {
    melody
        .events
        .iter()
        .map(|e| {
            let pitch = e.pitch.index().ok_or_else(|| Error::NotNormalized {
                name: melody.name.clone(),
                detail: format!("pitch {} is outside C4..B5", e.pitch),
            })?;
            let dur = Duration::from_beats(e.duration).ok_or_else(|| Error::NotNormalized {
                name: melody.name.clone(),
                detail: format!("duration {} is not a duration class", e.duration),
            })?;
            Ok((pitch, dur.index()))
        })
        .collect()
}

/// Note→note and duration→duration transition counts over consecutive
/// events, per melody; nothing is counted across melody boundaries.
pub fn count_transitions(corpus: &[Melody]) -> Result<(SquareMatrix<u64>, SquareMatrix<u64>)> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let mut pitch = SquareMatrix::filled(PITCH_COUNT, 0u64);
    let mut tempo = SquareMatrix::filled(DURATION_COUNT, 0u64);
    for melody in corpus {
        let seq = symbols(melody)?;
        for pair in seq.windows(2) {
            let ((p0, d0), (p1, d1)) = (pair[0], pair[1]);
            *pitch.get_mut(p0, p1) += 1;
            *tempo.get_mut(d0, d1) += 1;
        }
    }
    Ok((pitch, tempo))
}

/// Builds the independent pitch and tempo graphs from a normalized corpus.
pub fn seed_graphs<T: Scalar>(
    corpus: &[Melody],
    curve: ConductanceCurve<T>,
    state_per_count: T,
) -> Result<(TransitionGraph<T>, TransitionGraph<T>)> {
    let (pitch_counts, tempo_counts) = count_transitions(corpus)?;
    let mut pitch = TransitionGraph::new(Alphabet::Pitch, curve);
    pitch.seed_from_counts(&pitch_counts, state_per_count)?;
    let mut tempo = TransitionGraph::new(Alphabet::Duration, curve);
    tempo.seed_from_counts(&tempo_counts, state_per_count)?;
    Ok((pitch, tempo))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn events(text: &str) -> Vec<NoteEvent> {
        parse_melody(text).unwrap().events
    }

    #[test]
    fn parses_tokens() {
        let m = parse_melody("C4:1 D4:0.5 C4:1").unwrap();
        assert_eq!(m.len(), 3);
        assert_eq!(
            m.events[1],
            NoteEvent {
                pitch: Pitch(62),
                duration: 0.5
            }
        );
        assert_eq!(events("Eb5:3/8")[0].duration, 0.375);
    }

    #[test]
    fn rests_are_skipped() {
        assert_eq!(events("C4:1 R:1 D4:1").len(), 2);
    }

    #[test]
    fn comments_and_blank_lines() {
        let m = parse_melody("# title\n\n  # indented comment\nC4:1\n  D#4:2  \n").unwrap();
        assert_eq!(
            m.events.iter().map(|e| e.pitch.0).collect::<Vec<_>>(),
            vec![60, 63]
        );
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = parse_melody_named("tune.mel", "C4:1\nD4:1 H4:1").unwrap_err();
        match err {
            Error::Parse {
                source_name,
                line,
                column,
                ..
            } => {
                assert_eq!((source_name.as_str(), line, column), ("tune.mel", 2, 6));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_melody("C4:0").is_err());
        assert!(parse_melody("C4:-1").is_err());
        assert!(parse_melody("C4:abc").is_err());
        assert!(parse_melody("C4:40").is_err());
        assert!(parse_melody("C4:0.01").is_err());
        assert!(parse_melody("C4").is_err());
        assert!(parse_melody("C4:NaN").is_err());
        assert!(parse_melody("R:0").is_err());
    }

    #[test]
    fn normalization_folds_and_quantizes() {
        let m = parse_melody("C6:1 B3:0.26 E4:7").unwrap();
        let n = normalize(&m, 0);
        assert_eq!(n.events[0].pitch, Pitch(72));
        assert_eq!(n.events[1].pitch, Pitch(71));
        assert_eq!(n.events[1].duration, 0.25);
        assert_eq!(n.events[2].duration, 8.0);
        let up = normalize(&parse_melody("A4:1").unwrap(), 3);
        assert_eq!(up.events[0].pitch, Pitch(72));
    }

    #[test]
    fn counts_repetitions_on_the_diagonal() {
        let m = normalize(&parse_melody("C4:1 C4:1 C4:1").unwrap(), 0);
        let (p, t) = count_transitions(&[m]).unwrap();
        assert_eq!(*p.get(0, 0), 2);
        assert_eq!(p.as_slice().iter().sum::<u64>(), 2);
        assert_eq!(
            *t.get(Duration::Crotchet.index(), Duration::Crotchet.index()),
            2
        );
    }

    #[test]
    fn counts_back_and_forth() {
        let m = normalize(&parse_melody("C4:1 D4:1 C4:1").unwrap(), 0);
        let (p, _) = count_transitions(&[m]).unwrap();
        assert_eq!((*p.get(0, 2), *p.get(2, 0)), (1, 1));
        assert_eq!(p.as_slice().iter().sum::<u64>(), 2);
    }

    #[test]
    fn empty_corpus_is_an_error() {
        assert!(matches!(count_transitions(&[]), Err(Error::EmptyCorpus)));
    }

    #[test]
    fn unnormalized_input_is_rejected() {
        let m = parse_melody("C6:1 C4:1").unwrap();
        assert!(matches!(
            count_transitions(&[m]),
            Err(Error::NotNormalized { .. })
        ));
    }

    #[test]
    fn single_note_seeds_flat_graphs() {
        let m = normalize(&parse_melody("G4:1").unwrap(), 0);
        let (p, t) = seed_graphs(&[m], ConductanceCurve::<f64>::default(), 1.0).unwrap();
        assert!(p.effective_weights().as_slice().iter().all(|&w| w == 0.1));
        assert!(t.effective_weights().as_slice().iter().all(|&w| w == 0.1));
    }

    #[test]
    fn two_note_corpus_has_one_nonzero_state() {
        let m = normalize(&parse_melody("C4:1 D4:1").unwrap(), 0);
        let (p, _) = seed_graphs(&[m], ConductanceCurve::<f64>::default(), 1.0).unwrap();
        let nonzero = p.states().as_slice().iter().filter(|&&s| s > 0.0).count();
        assert_eq!(nonzero, 1);
        assert_eq!(p.element(0, 2).unwrap().state(), 1.0);
    }

    #[test]
    fn corpus_counts_are_sums_of_melody_counts() {
        let corpus: Vec<Melody> = [
            "C4:1 E4:0.5 G4:0.5 C5:2",
            "G4:1 G4:1 A4:1 G4:2",
            "E5:0.75 D5:0.25 C5:1",
        ]
        .iter()
        .map(|t| normalize(&parse_melody(t).unwrap(), 0))
        .collect();
        let (p, t) = count_transitions(&corpus).unwrap();
        let mut p_sum = SquareMatrix::filled(24, 0u64);
        let mut t_sum = SquareMatrix::filled(9, 0u64);
        for m in &corpus {
            let (pm, tm) = count_transitions(std::slice::from_ref(m)).unwrap();
            for i in 0..24 {
                for j in 0..24 {
                    *p_sum.get_mut(i, j) += pm.get(i, j);
                }
            }
            for i in 0..9 {
                for j in 0..9 {
                    *t_sum.get_mut(i, j) += tm.get(i, j);
                }
            }
        }
        assert_eq!(p, p_sum);
        assert_eq!(t, t_sum);
        assert_eq!(p.as_slice().iter().sum::<u64>(), 3 + 3 + 2);
    }

    #[test]
    fn token_output_round_trips() {
        let m = normalize(&parse_melody("C4:1 Eb5:0.375 B5:8 Gb4:0.75").unwrap(), 0);
        let back = parse_melody_named(&m.name, &m.to_tokens()).unwrap();
        assert_eq!(back.events, m.events);
    }

    proptest! {
        #[test]
        fn normalize_is_idempotent_and_keeps_pitch_class(
            notes in prop::collection::vec((-30i32..150, 0.125f64..16.0), 1..40),
            transpose in -24i32..24,
        ) {
            let m = Melody::new(
                "p",
                notes.iter().map(|&(p, d)| NoteEvent { pitch: Pitch(p), duration: d }).collect(),
            );
            let once = normalize(&m, transpose);
            prop_assert_eq!(normalize(&once, 0), once.clone());
            for (raw, norm) in m.events.iter().zip(&once.events) {
                prop_assert!(norm.pitch.index().is_some());
                prop_assert_eq!(norm.pitch.pitch_class(), (raw.pitch.0 + transpose).rem_euclid(12));
                prop_assert!(Duration::from_beats(norm.duration).is_some());
            }
        }
    }
}
