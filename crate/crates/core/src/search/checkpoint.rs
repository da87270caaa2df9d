//! JSON-lines checkpoint for cell sweeps.
//!
//! The first line is a header carrying the sweep configuration, each later
//! line one completed cell, and a summary line closes a finished run. On
//! reopening, an unterminated or unparsable final line (a write cut short) is
//! dropped, as is the summary, and new cells are appended after the last good
//! record.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufWriter, Read, Seek, SeekFrom, Write};
use std::path::Path;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::{SearchConfig, Solution};
use crate::error::{Error, Result};

pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum CheckpointRecord {
    Header { version: u32, config: SearchConfig },
    Cell { n: i64, a: i64, solutions: Vec<Solution> },
    Summary { cells: usize, solutions: usize },
}

/// Serializes appends from worker threads.
#[derive(Debug)]
pub struct CheckpointWriter {
    out: Mutex<BufWriter<File>>,
}

type Done = HashMap<(i64, i64), Vec<Solution>>;

impl CheckpointWriter {
    /// Open or create the checkpoint at `path` for `cfg`, returning the cells
    /// it already holds.
    pub fn open(path: &Path, cfg: &SearchConfig) -> Result<(Self, Done)> {
        let mut file = OpenOptions::new().read(true).write(true).create(true).truncate(false).open(path)?;
        let mut text = String::new();
        file.read_to_string(&mut text)
            .map_err(|e| Error::Checkpoint(format!("{}: {e}", path.display())))?;
        let (good_len, done) = scan(&text, cfg)?;
        file.set_len(good_len as u64)?;
        file.seek(SeekFrom::Start(good_len as u64))?;
        let writer = CheckpointWriter { out: Mutex::new(BufWriter::new(file)) };
        if good_len == 0 {
            writer.write(&CheckpointRecord::Header { version: CHECKPOINT_VERSION, config: cfg.clone() })?;
        }
        Ok((writer, done))
    }

    fn write(&self, rec: &CheckpointRecord) -> Result<()> {
        let mut line = serde_json::to_string(rec)?;
        line.push('\n');
        let mut out = self.out.lock().expect("checkpoint writer poisoned");
        out.write_all(line.as_bytes())?;
        out.flush()?;
        Ok(())
    }

    pub fn write_cell(&self, n: i64, a: i64, solutions: &[Solution]) -> Result<()> {
        self.write(&CheckpointRecord::Cell { n, a, solutions: solutions.to_vec() })
    }

    pub fn finish(&self, cells: usize, solutions: usize) -> Result<()> {
        self.write(&CheckpointRecord::Summary { cells, solutions })
    }
}

/// Byte length of the valid prefix and the cells it records.
fn scan(text: &str, cfg: &SearchConfig) -> Result<(usize, Done)> {
    let mut done = Done::new();
    let mut good = 0;
    let mut offset = 0;
    let mut lines = text.split_inclusive('\n').enumerate().peekable();
    while let Some((i, line)) = lines.next() {
        let last = lines.peek().is_none();
        let start = offset;
        offset += line.len();
        let parsed = if line.ends_with('\n') { serde_json::from_str::<CheckpointRecord>(line).ok() } else { None };
        let Some(rec) = parsed else {
            if last {
                break;
            }
            return Err(Error::Checkpoint(format!("corrupt record on line {}", i + 1)));
        };
        match (i, rec) {
            (0, CheckpointRecord::Header { version, config }) => {
                if version != CHECKPOINT_VERSION {
                    return Err(Error::Checkpoint(format!("unsupported checkpoint version {version}")));
                }
                let mut want = cfg.clone();
                want.checkpoint = None;
                if config != want {
                    return Err(Error::Checkpoint("checkpoint was written for a different configuration".into()));
                }
            }
            (0, _) => return Err(Error::Checkpoint("missing header line".into())),
            (_, CheckpointRecord::Header { .. }) => {
                return Err(Error::Checkpoint(format!("unexpected header on line {}", i + 1)))
            }
            (_, CheckpointRecord::Cell { n, a, solutions }) => {
                done.insert((n, a), solutions);
            }
            (_, CheckpointRecord::Summary { .. }) => {
                // rewritten when the resumed run finishes
                good = start;
                break;
            }
        }
        good = offset;
    }
    Ok((good, done))
}
