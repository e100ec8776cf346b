//! Bag-of-genres encoding: code each frame by classifying it, then pool the
//! predicted labels into one normalized frequency histogram per video.

use rayon::prelude::*;

use crate::classifier::LinearModel;
use crate::descriptors::FeatureVector;
use crate::error::{Error, Result};

/// A video's extracted frame features plus its ground-truth genre.
#[derive(Debug, Clone, PartialEq)]
pub struct VideoRecord {
    pub video_id: String,
    pub genre: usize,
    pub frame_features: Vec<FeatureVector>,
}

/// The bag-of-genres vector: histogram[g] is the exact fraction of frames
/// the model assigned to genre g.
#[derive(Debug, Clone, PartialEq)]
pub struct BoGVector {
    pub video_id: String,
    pub histogram: Vec<f64>,
    pub frame_count: usize,
}

impl BoGVector {
    pub fn dim(&self) -> usize {
        self.histogram.len()
    }
}

pub fn encode_video(model: &LinearModel, video: &VideoRecord) -> Result<BoGVector> {
    if video.frame_features.is_empty() {
        return Err(Error::invalid_input(format!(
            "video {} has no frames to encode",
            video.video_id
        )));
    }
    let g = model.genre_count();
    let mut counts = vec![0u64; g];
    for feature in &video.frame_features {
        counts[model.predict(feature)?] += 1;
    }
    let total = video.frame_features.len() as f64;
    Ok(BoGVector {
        video_id: video.video_id.clone(),
        histogram: counts.iter().map(|&c| c as f64 / total).collect(),
        frame_count: video.frame_features.len(),
    })
}

/// Corpus encoding result: vectors for every encodable video, in input
/// order, plus one recorded error per video that could not be encoded.
#[derive(Debug)]
pub struct CorpusEncoding {
    pub vectors: Vec<BoGVector>,
    pub errors: Vec<(String, Error)>,
}

/// Encodes every video, recording per-video failures instead of aborting.
pub fn encode_corpus(model: &LinearModel, videos: &[VideoRecord]) -> CorpusEncoding {
    let results: Vec<(String, Result<BoGVector>)> = videos
        .par_iter()
        .map(|v| (v.video_id.clone(), encode_video(model, v)))
        .collect();
    let mut vectors = Vec::new();
    let mut errors = Vec::new();
    for (id, result) in results {
        match result {
            Ok(v) => vectors.push(v),
            Err(e) => errors.push((id, e)),
        }
    }
    CorpusEncoding { vectors, errors }
}

/// The BoG dimensionality is the number of genres in the dictionary.
pub fn bog_dimensionality(model: &LinearModel) -> usize {
    model.genre_count()
}
