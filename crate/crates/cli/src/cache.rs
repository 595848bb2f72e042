//! On-disk result cache: one JSON file per entry, named by a SHA-256 of the
//! engine version and the canonical request.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::report::Report;

#[derive(Serialize, Deserialize)]
struct Entry {
    version: String,
    request: String,
    report: Report,
}

pub struct Cache {
    dir: PathBuf,
}

#[derive(Debug, Default, Serialize)]
pub struct Stats {
    pub dir: String,
    pub entries: usize,
    pub bytes: u64,
}

impl Cache {
    /// `--cache-dir`, else `BWBFORGE_CACHE`, else `~/.cache/bwbforge`.
    pub fn locate(flag: Option<&Path>) -> Option<Self> {
        let dir = match flag {
            Some(p) => p.to_path_buf(),
            None => match std::env::var_os("BWBFORGE_CACHE") {
                Some(p) if !p.is_empty() => PathBuf::from(p),
                _ => PathBuf::from(std::env::var_os("HOME")?).join(".cache").join("bwbforge"),
            },
        };
        Some(Cache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key(request: &str) -> String {
        let mut h = Sha256::new();
        h.update(bwbforge_core::VERSION.as_bytes());
        h.update([0]);
        h.update(request.as_bytes());
        hex::encode(h.finalize())
    }

    fn path(&self, request: &str) -> PathBuf {
        self.dir.join(format!("{}.json", Self::key(request)))
    }

    /// A stale or unreadable entry counts as a miss.
    pub fn get(&self, request: &str) -> Option<Report> {
        let text = fs::read_to_string(self.path(request)).ok()?;
        let e: Entry = serde_json::from_str(&text).ok()?;
        (e.version == bwbforge_core::VERSION && e.request == request).then_some(e.report)
    }

    pub fn put(&self, request: &str, report: &Report) -> io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let e = Entry { version: bwbforge_core::VERSION.into(), request: request.into(), report: report.clone() };
        let tmp = self.dir.join(format!(".{}.tmp{}", Self::key(request), std::process::id()));
        fs::write(&tmp, serde_json::to_vec(&e)?)?;
        fs::rename(tmp, self.path(request))
    }

    fn entries(&self) -> io::Result<Vec<PathBuf>> {
        match fs::read_dir(&self.dir) {
            Ok(rd) => Ok(rd
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "json"))
                .collect()),
            Err(e) if e.kind() == io::ErrorKind::NotFound => Ok(Vec::new()),
            Err(e) => Err(e),
        }
    }

    pub fn stats(&self) -> io::Result<Stats> {
        let mut s = Stats { dir: self.dir.display().to_string(), ..Default::default() };
        for p in self.entries()? {
            s.entries += 1;
            s.bytes += fs::metadata(&p)?.len();
        }
        Ok(s)
    }

    pub fn clear(&self) -> io::Result<usize> {
        let list = self.entries()?;
        for p in &list {
            fs::remove_file(p)?;
        }
        Ok(list.len())
    }
}
