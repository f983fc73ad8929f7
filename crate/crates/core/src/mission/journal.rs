//! Append-only NDJSON journal of ingested records, replayable into a fresh store.

use std::fs::{File, OpenOptions};
use std::io::{self, BufRead, BufWriter, Write};
use std::path::Path;

use super::store::MissionStore;
use super::types::StreamRecord;

pub struct Journal {
    out: BufWriter<File>,
}

impl Journal {
    pub fn open(path: impl AsRef<Path>) -> io::Result<Self> {
        let file = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(Self {
            out: BufWriter::new(file),
        })
    }

    pub fn append(&mut self, record: &StreamRecord) -> io::Result<()> {
        serde_json::to_writer(&mut self.out, record)?;
        self.out.write_all(b"\n")?;
        self.out.flush()
    }
}

/// Parses one NDJSON line into a stream record.
pub fn parse_record(line: &str) -> Result<StreamRecord, serde_json::Error> {
    serde_json::from_str(line)
}

/// Feeds every record of an NDJSON stream into `store`. Malformed lines and
/// records the store rejects are logged and skipped. Returns the number applied.
pub fn replay(store: &mut MissionStore, reader: impl BufRead) -> io::Result<usize> {
    let mut applied = 0;
    for (n, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match parse_record(&line) {
            Ok(record) => match store.ingest(record) {
                Ok(()) => applied += 1,
                Err(e) => tracing::warn!("line {}: {e}", n + 1),
            },
            Err(e) => tracing::warn!("line {}: malformed record: {e}", n + 1),
        }
    }
    Ok(applied)
}
