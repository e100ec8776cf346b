//! Dataset manifests: the CSV contract between frame extraction (an
//! external concern) and this pipeline.
//!
//! A manifest row names a video, its genre, its split and the directory
//! holding its frame images. The genre set is the sorted list of distinct
//! genre names, so genre indices do not depend on row order.

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::classifier::GenreSet;
use crate::error::{Error, Result};

pub const MANIFEST_HEADER: [&str; 4] = ["video_id", "genre", "split", "frame_dir"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Test,
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Split::Train => "train",
            Split::Test => "test",
        })
    }
}

impl FromStr for Split {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "train" => Ok(Split::Train),
            "test" => Ok(Split::Test),
            other => Err(Error::invalid_input(format!(
                "unknown split `{other}` (expected train or test)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    pub video_id: String,
    pub genre: usize,
    pub split: Split,
    pub frame_dir: PathBuf,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetManifest {
    pub genres: GenreSet,
    pub videos: Vec<ManifestEntry>,
}

impl DatasetManifest {
    /// Builds a manifest from (video_id, genre name, split, frame_dir)
    /// rows. Genre indices come from the sorted set of distinct names.
    pub fn from_rows(rows: Vec<(String, String, Split, PathBuf)>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::invalid_input("manifest has no videos"));
        }
        let names: BTreeSet<String> = rows.iter().map(|(_, g, _, _)| g.clone()).collect();
        let genres = GenreSet::new(names.into_iter().collect())?;
        let mut seen = BTreeSet::new();
        let mut videos = Vec::with_capacity(rows.len());
        for (video_id, genre_name, split, frame_dir) in rows {
            if !seen.insert(video_id.clone()) {
                return Err(Error::invalid_input(format!(
                    "duplicate video_id `{video_id}` in manifest"
                )));
            }
            let genre = genres
                .index_of(&genre_name)
                .expect("genre set built from these rows");
            videos.push(ManifestEntry {
                video_id,
                genre,
                split,
                frame_dir,
            });
        }
        Ok(DatasetManifest { genres, videos })
    }

    /// Loads and validates a manifest CSV. Frame directories are resolved
    /// relative to the manifest's parent directory and must exist.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let base = path.parent().unwrap_or_else(|| Path::new(""));
        let mut reader = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_path(path)
            .map_err(|e| csv_error(path, e))?;
        let headers = reader.headers().map_err(|e| csv_error(path, e))?.clone();
        let expected: Vec<&str> = MANIFEST_HEADER.to_vec();
        let got: Vec<&str> = headers.iter().collect();
        if got != expected {
            return Err(Error::format(
                path,
                0,
                format!("manifest header must be `{}`, found `{}`", expected.join(","), got.join(",")),
            ));
        }
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| csv_error(path, e))?;
            let offset = record.position().map(|p| p.byte()).unwrap_or(0);
            if record.len() != 4 {
                return Err(Error::format(
                    path,
                    offset,
                    format!("manifest row has {} fields, expected 4", record.len()),
                ));
            }
            let split: Split = record[2].parse()?;
            let dir = base.join(&record[3]);
            if !dir.is_dir() {
                return Err(Error::invalid_input(format!(
                    "frame_dir `{}` for video `{}` does not exist",
                    dir.display(),
                    &record[0]
                )));
            }
            rows.push((record[0].to_string(), record[1].to_string(), split, dir));
        }
        DatasetManifest::from_rows(rows)
    }

    /// Serializes back to the CSV contract. `base` strips a common prefix
    /// so the manifest stays relocatable next to its frame directories.
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let base = path.parent().unwrap_or_else(|| Path::new(""));
        let mut out = String::from("video_id,genre,split,frame_dir\n");
        for v in &self.videos {
            let dir = v.frame_dir.strip_prefix(base).unwrap_or(&v.frame_dir);
            out.push_str(&format!(
                "{},{},{},{}\n",
                v.video_id,
                self.genres.label(v.genre),
                v.split,
                dir.display()
            ));
        }
        crate::binio::write_file(path, out.as_bytes())
    }

    pub fn split_videos(&self, split: Split) -> impl Iterator<Item = &ManifestEntry> {
        self.videos.iter().filter(move |v| v.split == split)
    }
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    let offset = e.position().map(|p| p.byte()).unwrap_or(0);
    Error::format(path, offset, e.to_string())
}

/// Frame image paths of a video directory, sorted by file name. The frame
/// index of a path is its position in this list.
pub fn list_frames(frame_dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let dir = frame_dir.as_ref();
    let entries = std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut frames = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        let path = entry.path();
        let is_image = path
            .extension()
            .and_then(|e| e.to_str())
            .map(|e| matches!(e.to_ascii_lowercase().as_str(), "png" | "jpg" | "jpeg"))
            .unwrap_or(false);
        if is_image {
            frames.push(path);
        }
    }
    frames.sort();
    Ok(frames)
}
