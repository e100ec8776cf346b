//! Core library for the bag-of-genres video retrieval pipeline.
//!
//! The pipeline turns a video (a directory of frames) into a compact
//! semantic histogram: frames are described by classical image descriptors,
//! a bank of one-vs-rest linear classifiers trained on genre labels scores
//! every frame, and the per-frame genre decisions are pooled into one
//! normalized histogram per video. Retrieval then ranks videos by Euclidean
//! distance between histograms, and the evaluation layer scores rankings
//! with replicated query samples and confidence intervals.

pub mod binio;
pub mod cache;
pub mod classifier;
pub mod descriptors;
pub mod encoder;
pub mod error;
pub mod image;
pub mod manifest;
pub mod pipeline;
pub mod retrieval;
pub mod stats;
pub mod synth;

pub use cache::{BogFile, FeatureCache};
pub use classifier::{GenreSet, LabeledFeature, LinearModel, TrainConfig};
pub use descriptors::{Descriptor, DescriptorConfig, FeatureVector};
pub use encoder::{BoGVector, VideoRecord};
pub use error::{Error, Result};
pub use image::Image;
pub use manifest::{DatasetManifest, Split};
pub use pipeline::{OutputLayout, RunConfig};
pub use retrieval::{QueryPlan, RankedList};
pub use stats::{EvalReport, RelevanceJudge};
pub use synth::SynthSpec;
