//! Append-only count cache. One record per line, tab-separated:
//! `<hex hash> <q> <N> <engine>`. Corrupt lines are skipped with a warning,
//! never silently misread. Single writer, any number of readers.

use super::CountResult;
use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::{Mutex, RwLock};

pub struct CountCache {
    path: PathBuf,
    map: RwLock<HashMap<(String, u64), u64>>,
    writer: Mutex<File>,
}

impl CountCache {
    /// Open (or create) a cache file, loading all intact records.
    pub fn open(path: &Path) -> std::io::Result<Self> {
        let mut map = HashMap::new();
        if path.exists() {
            let reader = BufReader::new(File::open(path)?);
            for (lineno, line) in reader.lines().enumerate() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                match parse_record(&line) {
                    Some((hash, q, n)) => {
                        map.insert((hash, q), n);
                    }
                    None => {
                        eprintln!(
                            "warning: skipping corrupt cache record at {}:{}",
                            path.display(),
                            lineno + 1
                        );
                    }
                }
            }
        }
        let writer = OpenOptions::new().create(true).append(true).open(path)?;
        Ok(CountCache {
            path: path.to_path_buf(),
            map: RwLock::new(map),
            writer: Mutex::new(writer),
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.map.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, task_hash: &str, q: u64) -> Option<u64> {
        self.map
            .read()
            .unwrap()
            .get(&(task_hash.to_string(), q))
            .copied()
    }

    /// Record a completed count; appends one line and flushes.
    pub fn put(&self, result: &CountResult) -> std::io::Result<()> {
        {
            let mut w = self.writer.lock().unwrap();
            writeln!(
                w,
                "{}\t{}\t{}\t{}",
                result.task_hash,
                result.q,
                result.n,
                result.engine.as_str()
            )?;
            w.flush()?;
        }
        self.map
            .write()
            .unwrap()
            .insert((result.task_hash.clone(), result.q), result.n);
        Ok(())
    }
}

fn parse_record(line: &str) -> Option<(String, u64, u64)> {
    let mut parts = line.split('\t');
    let hash = parts.next()?;
    if hash.len() != 64 || !hash.bytes().all(|b| b.is_ascii_hexdigit()) {
        return None;
    }
    let q: u64 = parts.next()?.parse().ok()?;
    let n: u64 = parts.next()?.parse().ok()?;
    match parts.next()? {
        "fast" | "oracle" => {}
        _ => return None,
    }
    if parts.next().is_some() {
        return None;
    }
    Some((hash.to_string(), q, n))
}
