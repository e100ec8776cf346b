//! Persistent artifacts: the frame feature cache and the per-video BoG
//! file.
//!
//! Both formats carry a 32-byte provenance hash. The feature cache embeds
//! the hash of the extraction configuration, so resuming with different
//! settings is refused instead of silently mixing features. The BoG file
//! embeds the hash of the model file that produced it. Records are stored
//! in sorted key order, which makes the files byte-identical across reruns
//! and worker counts.

use std::collections::BTreeMap;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::binio::{read_file, write_file, ByteReader, ByteWriter};
use crate::descriptors::{Descriptor, DescriptorConfig, FeatureVector};
use crate::encoder::BoGVector;
use crate::error::{Error, Result};

const CACHE_MAGIC: &[u8; 4] = b"BOGF";
const CACHE_VERSION: u16 = 1;
const BOG_MAGIC: &[u8; 4] = b"BOGB";
const BOG_VERSION: u16 = 1;

/// SHA-256 over the canonical serialization of the extraction settings.
pub fn config_hash(descriptor: Descriptor, cfg: &DescriptorConfig) -> [u8; 32] {
    let canonical = serde_json::to_vec(&(descriptor.name(), cfg)).expect("config serialization");
    Sha256::digest(&canonical).into()
}

pub fn sha256(bytes: &[u8]) -> [u8; 32] {
    Sha256::digest(bytes).into()
}

pub fn hex(hash: &[u8; 32]) -> String {
    hash.iter().map(|b| format!("{b:02x}")).collect()
}

/// All cached frame features for one descriptor under one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureCache {
    pub descriptor: Descriptor,
    pub config_hash: [u8; 32],
    pub dim: usize,
    entries: BTreeMap<(String, u32), Vec<f64>>,
}

impl FeatureCache {
    pub fn new(descriptor: Descriptor, config_hash: [u8; 32], dim: usize) -> Self {
        FeatureCache {
            descriptor,
            config_hash,
            dim,
            entries: BTreeMap::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, video_id: &str, frame_index: u32) -> bool {
        self.entries
            .contains_key(&(video_id.to_string(), frame_index))
    }

    pub fn insert(&mut self, video_id: &str, frame_index: u32, values: Vec<f64>) -> Result<()> {
        if values.len() != self.dim {
            return Err(Error::invalid_input(format!(
                "cache holds vectors of dimension {}, got {}",
                self.dim,
                values.len()
            )));
        }
        self.entries
            .insert((video_id.to_string(), frame_index), values);
        Ok(())
    }

    /// Features of one video ordered by frame index.
    pub fn features_of(&self, video_id: &str) -> Vec<FeatureVector> {
        self.entries
            .range((video_id.to_string(), 0)..=(video_id.to_string(), u32::MAX))
            .map(|(_, values)| FeatureVector::new(self.descriptor, values.clone()))
            .collect()
    }

    pub fn video_ids(&self) -> Vec<&str> {
        let mut ids: Vec<&str> = self.entries.keys().map(|(id, _)| id.as_str()).collect();
        ids.dedup();
        ids
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut w = ByteWriter::new();
        w.bytes(CACHE_MAGIC);
        w.u16(CACHE_VERSION);
        w.u8(self.descriptor.code());
        w.bytes(&self.config_hash);
        w.u32(self.dim as u32);
        w.u64(self.entries.len() as u64);
        for ((id, frame), values) in &self.entries {
            w.str(id)?;
            w.u32(*frame);
            w.f64_slice(values);
        }
        write_file(path, &w.finish())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let data = read_file(path)?;
        let mut r = ByteReader::open(&data, path)?;
        r.magic(CACHE_MAGIC)?;
        let version = r.u16("version")?;
        if version != CACHE_VERSION {
            return Err(r.err(format!("unsupported cache version {version}")));
        }
        let code = r.u8("descriptor")?;
        let descriptor = Descriptor::from_code(code)
            .ok_or_else(|| r.err(format!("unknown descriptor code {code}")))?;
        let mut config_hash = [0u8; 32];
        config_hash.copy_from_slice(r.bytes(32, "config hash")?);
        let dim = r.u32("dimension")? as usize;
        if dim < 1 {
            return Err(r.err("cache declares a zero feature dimension"));
        }
        let count = r.u64("entry count")?;
        let mut entries = BTreeMap::new();
        for _ in 0..count {
            let id = r.str("video id")?;
            let frame = r.u32("frame index")?;
            let values = r.f64_vec(dim, "feature values")?;
            entries.insert((id, frame), values);
        }
        r.finish()?;
        Ok(FeatureCache {
            descriptor,
            config_hash,
            dim,
            entries,
        })
    }
}

/// Serialized corpus of BoG vectors plus the labels they are defined over.
#[derive(Debug, Clone, PartialEq)]
pub struct BogFile {
    /// SHA-256 of the model file that encoded these vectors.
    pub model_hash: [u8; 32],
    pub genre_labels: Vec<String>,
    pub vectors: Vec<BoGVector>,
}

impl BogFile {
    pub fn dim(&self) -> usize {
        self.genre_labels.len()
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut w = ByteWriter::new();
        w.bytes(BOG_MAGIC);
        w.u16(BOG_VERSION);
        w.bytes(&self.model_hash);
        w.u32(self.genre_labels.len() as u32);
        for label in &self.genre_labels {
            w.str(label)?;
        }
        let mut sorted: Vec<&BoGVector> = self.vectors.iter().collect();
        sorted.sort_by(|a, b| a.video_id.cmp(&b.video_id));
        w.u64(sorted.len() as u64);
        for v in sorted {
            if v.histogram.len() != self.genre_labels.len() {
                return Err(Error::invalid_input(format!(
                    "vector {} has dimension {}, file declares {}",
                    v.video_id,
                    v.histogram.len(),
                    self.genre_labels.len()
                )));
            }
            w.str(&v.video_id)?;
            w.u32(v.frame_count as u32);
            w.f64_slice(&v.histogram);
        }
        write_file(path, &w.finish())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let data = read_file(path)?;
        let mut r = ByteReader::open(&data, path)?;
        r.magic(BOG_MAGIC)?;
        let version = r.u16("version")?;
        if version != BOG_VERSION {
            return Err(r.err(format!("unsupported bog file version {version}")));
        }
        let mut model_hash = [0u8; 32];
        model_hash.copy_from_slice(r.bytes(32, "model hash")?);
        let g = r.u32("genre count")? as usize;
        let mut genre_labels = Vec::with_capacity(g);
        for _ in 0..g {
            genre_labels.push(r.str("genre label")?);
        }
        let count = r.u64("vector count")?;
        let mut vectors = Vec::with_capacity(count as usize);
        for _ in 0..count {
            let video_id = r.str("video id")?;
            let frame_count = r.u32("frame count")? as usize;
            let histogram = r.f64_vec(g, "histogram")?;
            vectors.push(BoGVector {
                video_id,
                histogram,
                frame_count,
            });
        }
        r.finish()?;
        Ok(BogFile {
            model_hash,
            genre_labels,
            vectors,
        })
    }

    /// CSV export: `video_id,<label0>,...,<label{G-1}>`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("video_id");
        for label in &self.genre_labels {
            out.push(',');
            out.push_str(label);
        }
        out.push('\n');
        let mut sorted: Vec<&BoGVector> = self.vectors.iter().collect();
        sorted.sort_by(|a, b| a.video_id.cmp(&b.video_id));
        for v in sorted {
            out.push_str(&v.video_id);
            for x in &v.histogram {
                out.push_str(&format!(",{x:.6}"));
            }
            out.push('\n');
        }
        out
    }
}
