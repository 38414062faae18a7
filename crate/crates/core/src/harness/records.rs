use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::env::Status;
use crate::error::{Error, Result};

pub const EPISODES_CSV: &str = "episodes.csv";
pub const CSV_HEADER: [&str; 11] = [
    "trial",
    "episode",
    "final_energy",
    "gate_count",
    "depth",
    "cumulative_reward",
    "steps",
    "outcome",
    "e_threshold",
    "e_best",
    "epsilon_at_end",
];

/// One row of `episodes.csv`. `e_threshold` is the threshold that was in
/// force while the episode ran.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpisodeRecord {
    pub trial: usize,
    pub episode: usize,
    pub final_energy: f64,
    pub gate_count: usize,
    pub depth: usize,
    pub cumulative_reward: f64,
    pub steps: usize,
    pub outcome: Status,
    pub e_threshold: f64,
    pub e_best: f64,
    pub epsilon_at_end: f64,
}

impl EpisodeRecord {
    pub fn is_success(&self) -> bool {
        self.outcome == Status::Success
    }
}

/// Writes the header and every record; an empty slice still yields a header.
pub fn write_records(path: &Path, records: &[EpisodeRecord]) -> Result<()> {
    let file = BufWriter::new(File::create(path)?);
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(file);
    w.write_record(CSV_HEADER)?;
    for r in records {
        w.serialize(r)?;
    }
    w.into_inner()
        .map_err(|e| Error::Io(e.into_error()))?
        .flush()?;
    Ok(())
}

pub fn read_records(path: &Path) -> Result<Vec<EpisodeRecord>> {
    let mut reader = csv::Reader::from_path(path)?;
    let header: Vec<String> = reader.headers()?.iter().map(str::to_owned).collect();
    if header != CSV_HEADER {
        return Err(Error::Data {
            path: path.to_path_buf(),
            reason: format!("unexpected header {header:?}"),
        });
    }
    let mut out = Vec::new();
    for row in reader.deserialize() {
        out.push(row?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(episode: usize, energy: f64) -> EpisodeRecord {
        EpisodeRecord {
            trial: 0,
            episode,
            final_energy: energy,
            gate_count: 4,
            depth: 1,
            cumulative_reward: 0.1 + 0.2,
            steps: 4,
            outcome: Status::Success,
            e_threshold: 0.0,
            e_best: f64::INFINITY,
            epsilon_at_end: 0.985f64.powi(3),
        }
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join(EPISODES_CSV);
        let records = vec![rec(1, -2.999_999_999_123_456_7), rec(2, -1.0 / 3.0)];
        write_records(&path, &records).unwrap();
        assert_eq!(read_records(&path).unwrap(), records);
    }

    #[test]
    fn empty_log_has_header() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join(EPISODES_CSV);
        write_records(&path, &[]).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text.trim_end(), CSV_HEADER.join(","));
        assert!(read_records(&path).unwrap().is_empty());
    }
}
