//! The two symbol alphabets: 24 chromatic pitches C4..B5 and 9 note
//! durations in crotchet units.

use std::fmt;
use std::str::FromStr;

/// MIDI number of C4, alphabet index 0.
pub const LOWEST_PITCH: i32 = 60;
pub const PITCH_COUNT: usize = 24;
pub const DURATION_COUNT: usize = 9;

const FLAT_NAMES: [&str; 12] = [
    "C", "Db", "D", "Eb", "E", "F", "Gb", "G", "Ab", "A", "Bb", "B",
];

/// A pitch as a MIDI note number (C4 = 60). May lie outside the alphabet
/// until a melody is normalized.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pitch(pub i32);

impl Pitch {
    pub const C4: Pitch = Pitch(LOWEST_PITCH);

    pub fn midi(self) -> i32 {
        self.0
    }

    pub fn pitch_class(self) -> i32 {
        self.0.rem_euclid(12)
    }

    pub fn octave(self) -> i32 {
        self.0.div_euclid(12) - 1
    }

    pub fn transposed(self, semitones: i32) -> Pitch {
        Pitch(self.0 + semitones)
    }

    /// Index in the 24-symbol alphabet, if in range.
    pub fn index(self) -> Option<usize> {
        let offset = self.0 - LOWEST_PITCH;
        (0..PITCH_COUNT as i32)
            .contains(&offset)
            .then_some(offset as usize)
    }

    pub fn from_index(index: usize) -> Option<Pitch> {
        (index < PITCH_COUNT).then(|| Pitch(LOWEST_PITCH + index as i32))
    }

    /// Shifts by whole octaves until the pitch lies in C4..B5.
    pub fn folded(self) -> Pitch {
        let low = LOWEST_PITCH;
        let high = LOWEST_PITCH + PITCH_COUNT as i32 - 1;
        let p = self.0;
        if p < low {
            Pitch(p + 12 * (low - p + 11).div_euclid(12))
        } else if p > high {
            Pitch(p - 12 * (p - high + 11).div_euclid(12))
        } else {
            self
        }
    }
}

impl fmt::Display for Pitch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}",
            FLAT_NAMES[self.pitch_class() as usize],
            self.octave()
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PitchParseError(pub String);

impl fmt::Display for PitchParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for PitchParseError {}

impl FromStr for Pitch {
    type Err = PitchParseError;

    /// Accepts `C4`, `Eb5`, `F#3`, `B♭4`, `C♯4` and double accidentals.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.chars().peekable();
        let letter = chars
            .next()
            .ok_or_else(|| PitchParseError("empty pitch".into()))?;
        let class = match letter.to_ascii_uppercase() {
            'C' => 0,
            'D' => 2,
            'E' => 4,
            'F' => 5,
            'G' => 7,
            'A' => 9,
            'B' => 11,
            _ => {
                return Err(PitchParseError(format!(
                    "unknown pitch letter `{letter}` in `{s}`"
                )))
            }
        };
        let mut shift = 0;
        while let Some(&c) = chars.peek() {
            match c {
                'b' | '♭' => shift -= 1,
                '#' | '♯' => shift += 1,
                _ => break,
            }
            chars.next();
        }
        let octave: String = chars.collect();
        let octave: i32 = octave
            .parse()
            .map_err(|_| PitchParseError(format!("missing or invalid octave in `{s}`")))?;
        Ok(Pitch((octave + 1) * 12 + class + shift))
    }
}

/// The nine duration classes, in alphabet order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Duration {
    Semiquaver,
    Quaver,
    Crotchet,
    Minim,
    DottedSemiquaver,
    DottedQuaver,
    DottedCrotchet,
    DottedMinim,
    Breve,
}

impl Duration {
    pub const ALL: [Duration; DURATION_COUNT] = [
        Duration::Semiquaver,
        Duration::Quaver,
        Duration::Crotchet,
        Duration::Minim,
        Duration::DottedSemiquaver,
        Duration::DottedQuaver,
        Duration::DottedCrotchet,
        Duration::DottedMinim,
        Duration::Breve,
    ];

    /// Length in crotchets.
    pub fn beats(self) -> f64 {
        match self {
            Duration::Semiquaver => 0.25,
            Duration::Quaver => 0.5,
            Duration::Crotchet => 1.0,
            Duration::Minim => 2.0,
            Duration::DottedSemiquaver => 0.375,
            Duration::DottedQuaver => 0.75,
            Duration::DottedCrotchet => 1.5,
            Duration::DottedMinim => 3.0,
            Duration::Breve => 8.0,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<Duration> {
        Self::ALL.get(index).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            Duration::Semiquaver => "semiquaver",
            Duration::Quaver => "quaver",
            Duration::Crotchet => "crotchet",
            Duration::Minim => "minim",
            Duration::DottedSemiquaver => "dotted-semiquaver",
            Duration::DottedQuaver => "dotted-quaver",
            Duration::DottedCrotchet => "dotted-crotchet",
            Duration::DottedMinim => "dotted-minim",
            Duration::Breve => "breve",
        }
    }

    pub fn from_name(name: &str) -> Option<Duration> {
        Self::ALL.into_iter().find(|d| d.name() == name)
    }

    /// Exact match on a crotchet value.
    pub fn from_beats(beats: f64) -> Option<Duration> {
        Self::ALL.into_iter().find(|d| d.beats() == beats)
    }

    /// Nearest duration class; ties go to the shorter one.
    pub fn quantize(beats: f64) -> Duration {
        let mut best = Duration::Semiquaver;
        let mut best_dist = f64::INFINITY;
        for d in Self::ALL {
            let dist = (d.beats() - beats).abs();
            if dist < best_dist || (dist == best_dist && d.beats() < best.beats()) {
                best = d;
                best_dist = dist;
            }
        }
        best
    }
}

impl fmt::Display for Duration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which symbol set a transition graph runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Alphabet {
    Pitch,
    Duration,
}

impl Alphabet {
    pub fn size(self) -> usize {
        match self {
            Alphabet::Pitch => PITCH_COUNT,
            Alphabet::Duration => DURATION_COUNT,
        }
    }

    /// Alphabet with `size` symbols, if there is one.
    pub fn from_size(size: usize) -> Option<Alphabet> {
        match size {
            PITCH_COUNT => Some(Alphabet::Pitch),
            DURATION_COUNT => Some(Alphabet::Duration),
            _ => None,
        }
    }

    pub fn symbol_name(self, index: usize) -> Option<String> {
        match self {
            Alphabet::Pitch => Pitch::from_index(index).map(|p| p.to_string()),
            Alphabet::Duration => Duration::from_index(index).map(|d| d.name().to_string()),
        }
    }

    pub fn symbol_names(self) -> Vec<String> {
        (0..self.size())
            .map(|i| self.symbol_name(i).expect("index in range"))
            .collect()
    }

    pub fn label(self) -> &'static str {
        match self {
            Alphabet::Pitch => "pitch",
            Alphabet::Duration => "tempo",
        }
    }
}
