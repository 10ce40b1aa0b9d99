//! File formats: matrix CSVs (raw states and effective weights), the trace
//! CSV, and melody token files.
//!
//! Matrix CSVs hold N rows × N columns, row = from-symbol in alphabet order,
//! with an optional header row of symbol names. State files use the
//! shortest decimal that reads back to the same float; weight files use 9
//! significant digits and are derived data.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use crate::alphabet::{Alphabet, Duration, Pitch};
use crate::composer::StepRecord;
use crate::error::{Error, Result};
use crate::graph::TransitionGraph;
use crate::matrix::SquareMatrix;
use crate::memristor::ConductanceCurve;
use crate::scalar::Scalar;
use crate::seeder::{parse_melody_named, Melody};

pub fn format_sig9(value: f64) -> String {
    if value == 0.0 || !value.is_finite() {
        return format!("{value}");
    }
    let exponent = value.abs().log10().floor() as i32;
    let decimals = (8 - exponent).max(0) as usize;
    format!("{value:.decimals$}")
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    Error::format(path, e.to_string())
}

fn write_matrix<W: Write, F: Fn(usize) -> String>(
    out: W,
    path: &Path,
    alphabet: Alphabet,
    cell: F,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(alphabet.symbol_names())
        .map_err(|e| csv_err(path, e))?;
    let n = alphabet.size();
    for i in 0..n {
        w.write_record((0..n).map(|j| cell(i * n + j)))
            .map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn write_states_csv<T: Scalar, W: Write>(out: W, graph: &TransitionGraph<T>) -> Result<()> {
    let states = graph.states();
    write_matrix(out, Path::new("<states>"), graph.alphabet(), |k| {
        states.as_slice()[k].to_string()
    })
}

pub fn write_weights_csv<T: Scalar, W: Write>(out: W, graph: &TransitionGraph<T>) -> Result<()> {
    let weights = graph.effective_weights();
    write_matrix(out, Path::new("<weights>"), graph.alphabet(), |k| {
        format_sig9(weights.as_slice()[k].as_f64())
    })
}

/// Reads a square numeric CSV; the alphabet is inferred from its size.
/// `path` only labels errors.
pub fn read_matrix_csv<T: Scalar, R: Read>(
    input: R,
    path: &Path,
) -> Result<(Alphabet, SquareMatrix<T>)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(input);
    let mut header: Option<Vec<String>> = None;
    let mut rows: Vec<Vec<T>> = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| csv_err(path, e))?;
        if line == 0 && record.iter().any(|f| f.parse::<f64>().is_err()) {
            header = Some(record.iter().map(str::to_string).collect());
            continue;
        }
        let row = record
            .iter()
            .enumerate()
            .map(|(col, field)| {
                field.parse::<T>().map_err(|_| {
                    Error::format(
                        path,
                        format!(
                            "line {}, column {}: invalid number `{field}`",
                            line + 1,
                            col + 1
                        ),
                    )
                })
            })
            .collect::<Result<Vec<T>>>()?;
        rows.push(row);
    }
    let n = rows.len();
    let alphabet = Alphabet::from_size(n).ok_or_else(|| {
        Error::format(
            path,
            format!("expected 24 (pitch) or 9 (tempo) rows, found {n}"),
        )
    })?;
    if let Some(header) = header {
        if header != alphabet.symbol_names() {
            return Err(Error::format(
                path,
                "header does not match the alphabet's symbol names",
            ));
        }
    }
    let matrix = SquareMatrix::from_rows(rows).map_err(|e| Error::format(path, e.to_string()))?;
    Ok((alphabet, matrix))
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn create_file(path: &Path) -> Result<fs::File> {
    fs::File::create(path).map_err(|e| Error::io(path, e))
}

/// Loads a graph from a raw-state CSV.
pub fn load_graph<T: Scalar>(
    path: &Path,
    curve: ConductanceCurve<T>,
) -> Result<TransitionGraph<T>> {
    let text = read_file(path)?;
    let (alphabet, states) = read_matrix_csv(text.as_bytes(), path)?;
    TransitionGraph::from_states(alphabet, curve, &states)
        .map_err(|e| Error::format(path, e.to_string()))
}

pub fn load_graph_expecting<T: Scalar>(
    path: &Path,
    curve: ConductanceCurve<T>,
    alphabet: Alphabet,
) -> Result<TransitionGraph<T>> {
    let graph = load_graph(path, curve)?;
    if graph.alphabet() != alphabet {
        return Err(Error::format(
            path,
            format!(
                "expected a {} matrix, found a {} matrix",
                alphabet.label(),
                graph.alphabet().label()
            ),
        ));
    }
    Ok(graph)
}

pub fn states_path(dir: &Path, alphabet: Alphabet) -> PathBuf {
    dir.join(format!("{}-states.csv", alphabet.label()))
}

pub fn weights_path(dir: &Path, alphabet: Alphabet) -> PathBuf {
    dir.join(format!("{}-weights.csv", alphabet.label()))
}

/// Writes `<label>-states.csv` and `<label>-weights.csv` into `dir`.
pub fn save_graph<T: Scalar>(dir: &Path, graph: &TransitionGraph<T>) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let states = states_path(dir, graph.alphabet());
    write_states_csv(create_file(&states)?, graph).map_err(|e| relabel(e, &states))?;
    let weights = weights_path(dir, graph.alphabet());
    write_weights_csv(create_file(&weights)?, graph).map_err(|e| relabel(e, &weights))
}

fn relabel(e: Error, path: &Path) -> Error {
    match e {
        Error::Io { source, .. } => Error::io(path, source),
        Error::Format { message, .. } => Error::format(path, message),
        other => other,
    }
}

/// Loads `pitch-states.csv` and `tempo-states.csv` from `dir`.
pub fn load_graph_pair<T: Scalar>(
    dir: &Path,
    curve: ConductanceCurve<T>,
) -> Result<(TransitionGraph<T>, TransitionGraph<T>)> {
    Ok((
        load_graph_expecting(&states_path(dir, Alphabet::Pitch), curve, Alphabet::Pitch)?,
        load_graph_expecting(
            &states_path(dir, Alphabet::Duration),
            curve,
            Alphabet::Duration,
        )?,
    ))
}

/// Trace columns: step, from_pitch, to_pitch, score, from_dur, to_dur, dur_score.
pub fn write_trace_csv<T: Scalar, W: Write>(out: W, trace: &[StepRecord<T>]) -> Result<()> {
    let path = Path::new("<trace>");
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "step",
        "from_pitch",
        "to_pitch",
        "score",
        "from_dur",
        "to_dur",
        "dur_score",
    ])
    .map_err(|e| csv_err(path, e))?;
    let pitch = |i: usize| Pitch::from_index(i).expect("pitch index").to_string();
    let dur = |i: usize| {
        Duration::from_index(i)
            .expect("duration index")
            .beats()
            .to_string()
    };
    for r in trace {
        w.write_record([
            r.step.to_string(),
            pitch(r.from_pitch),
            pitch(r.pitch.to),
            format_sig9(r.pitch.score.as_f64()),
            dur(r.from_dur),
            dur(r.dur.to),
            format_sig9(r.dur.score.as_f64()),
        ])
        .map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

pub fn save_trace<T: Scalar>(path: &Path, trace: &[StepRecord<T>]) -> Result<()> {
    write_trace_csv(create_file(path)?, trace).map_err(|e| relabel(e, path))
}

/// Reads one melody; its name is the file stem.
pub fn read_melody_file(path: &Path) -> Result<Melody> {
    let text = read_file(path)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut melody = parse_melody_named(&path.display().to_string(), &text)?;
    melody.name = name;
    Ok(melody)
}

pub fn write_melody_file(path: &Path, melody: &Melody) -> Result<()> {
    fs::write(path, melody.to_tokens()).map_err(|e| Error::io(path, e))
}
