//! On-disk cache of enumerated rational points, keyed by backend
//! fingerprint and height bound.
//!
//! Entries carry a format version; a mismatched version, key, or any point
//! that fails to lie on the variety makes the entry a miss. Writes go to a
//! temporary file in the same directory and are renamed into place.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Backend, Point};

pub const CACHE_VERSION: u32 = 1;

/// Environment variable naming the default cache directory.
pub const CACHE_DIR_ENV: &str = "MLCOSET_CACHE_DIR";

#[derive(Serialize, Deserialize)]
struct Entry {
    version: u32,
    fingerprint: String,
    height: u64,
    points: Vec<Point>,
}

#[derive(Clone, Debug)]
pub struct PointCache {
    dir: PathBuf,
}

impl PointCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        PointCache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, backend: &Backend, height: u64) -> PathBuf {
        // '/' is the only fingerprint character that cannot appear in a file
        // name, and '_' never appears in a fingerprint
        let name = backend.fingerprint().replace('/', "_");
        self.dir
            .join(format!("points-v{CACHE_VERSION}-{name}-h{height}.json"))
    }

    /// The cached list, if present and valid.
    pub fn load(&self, backend: &Backend, height: u64) -> Option<Vec<Point>> {
        let text = fs::read_to_string(self.path(backend, height)).ok()?;
        let entry: Entry = serde_json::from_str(&text).ok()?;
        let valid = entry.version == CACHE_VERSION
            && entry.fingerprint == backend.fingerprint()
            && entry.height == height
            && entry.points.iter().all(|p| backend.on_variety(p));
        valid.then_some(entry.points)
    }

    pub fn store(&self, backend: &Backend, height: u64, points: &[Point]) -> Result<()> {
        let io = |e: std::io::Error| Error::input(format!("cache write failed: {e}"));
        fs::create_dir_all(&self.dir).map_err(io)?;
        let entry = Entry {
            version: CACHE_VERSION,
            fingerprint: backend.fingerprint(),
            height,
            points: points.to_vec(),
        };
        let target = self.path(backend, height);
        let tmp = target.with_extension(format!("tmp{}", std::process::id()));
        let mut f = fs::File::create(&tmp).map_err(io)?;
        f.write_all(
            serde_json::to_string(&entry)
                .expect("entry serializes")
                .as_bytes(),
        )
        .map_err(io)?;
        f.sync_all().map_err(io)?;
        fs::rename(&tmp, &target).map_err(io)
    }

    /// Cached enumeration, computing and storing it on a miss. A failed
    /// write does not fail the lookup.
    pub fn rational_points(&self, backend: &Backend, height: u64) -> Vec<Point> {
        if let Some(points) = self.load(backend, height) {
            return points;
        }
        let points = backend.enumerate_rational_points(height);
        let _ = self.store(backend, height, &points);
        points
    }
}

/// Enumerates through the cache when one is given.
pub fn rational_points(cache: Option<&PointCache>, backend: &Backend, height: u64) -> Vec<Point> {
    match cache {
        Some(c) => c.rational_points(backend, height),
        None => backend.enumerate_rational_points(height),
    }
}
