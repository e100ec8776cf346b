//! The genre dictionary: a bank of one-vs-rest linear SVMs.
//!
//! Training uses a deterministic primal subgradient solver with the
//! Pegasos step schedule (eta_t = 1/(lambda*t), lambda = 1/(C*n)) on
//! standardized features. The bias rides along as an always-one augmented
//! coordinate, so the same shrink-and-step update covers it. Each binary
//! subproblem owns an independent seeded shuffle, which makes the trained
//! model a pure function of (train set, config) regardless of how the
//! subproblems are scheduled.

use std::collections::BTreeSet;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::binio::{read_file, write_file, ByteReader, ByteWriter};
use crate::descriptors::{Descriptor, FeatureVector};
use crate::error::{Error, Result};

const MODEL_MAGIC: &[u8; 4] = b"BOGM";
const MODEL_VERSION: u16 = 1;

/// Mixes a subproblem index into a base seed.
pub(crate) fn derive_seed(seed: u64, index: u64) -> u64 {
    seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Ordered set of genre names. The index of a name is stable for the
/// lifetime of any model built from this set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenreSet {
    labels: Vec<String>,
}

impl GenreSet {
    pub fn new(labels: Vec<String>) -> Result<Self> {
        if labels.len() < 2 {
            return Err(Error::invalid_input(format!(
                "a genre set needs at least 2 genres, got {}",
                labels.len()
            )));
        }
        let unique: BTreeSet<&str> = labels.iter().map(String::as_str).collect();
        if unique.len() != labels.len() {
            return Err(Error::invalid_input("genre names must be unique"));
        }
        Ok(GenreSet { labels })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, g: usize) -> &str {
        &self.labels[g]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == name)
    }
}

/// A frame feature with its genre label (the label of the source video).
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledFeature {
    pub feature: FeatureVector,
    pub genre: usize,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    /// Regularization tradeoff in the objective 0.5*|w|^2 + C*sum(hinge).
    pub c: f64,
    pub epochs: usize,
    pub seed: u64,
    /// Frames sampled per genre before training.
    pub frames_per_genre: usize,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            c: 1.0,
            epochs: 20,
            seed: 42,
            frames_per_genre: 100,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.c.is_finite() && self.c > 0.0) {
            return Err(Error::config("train c must be finite and > 0"));
        }
        if self.epochs < 1 {
            return Err(Error::config("train epochs must be >= 1"));
        }
        if self.frames_per_genre < 1 {
            return Err(Error::config("frames_per_genre must be >= 1"));
        }
        Ok(())
    }
}

/// Trained one-vs-rest linear model with its standardization baked in.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub genre_set: GenreSet,
    pub descriptor: Descriptor,
    pub feature_dim: usize,
    pub feature_means: Vec<f64>,
    pub feature_scales: Vec<f64>,
    /// G rows of D weights.
    pub weights: Vec<Vec<f64>>,
    pub biases: Vec<f64>,
}

impl LinearModel {
    pub fn genre_count(&self) -> usize {
        self.genre_set.len()
    }

    fn check_feature(&self, feature: &FeatureVector) -> Result<()> {
        if feature.descriptor != self.descriptor {
            return Err(Error::invalid_input(format!(
                "model scores {} features, got {}",
                self.descriptor, feature.descriptor
            )));
        }
        if feature.len() != self.feature_dim {
            return Err(Error::invalid_input(format!(
                "model expects dimension {}, got {}",
                self.feature_dim,
                feature.len()
            )));
        }
        Ok(())
    }

    /// Per-genre decision values for a feature.
    pub fn scores(&self, feature: &FeatureVector) -> Result<Vec<f64>> {
        self.check_feature(feature)?;
        let standardized: Vec<f64> = feature
            .values
            .iter()
            .zip(self.feature_means.iter().zip(self.feature_scales.iter()))
            .map(|(&x, (&m, &s))| (x - m) / s)
            .collect();
        Ok(self
            .weights
            .iter()
            .zip(self.biases.iter())
            .map(|(w, &b)| dot(w, &standardized) + b)
            .collect())
    }

    /// Argmax genre; ties resolve to the lowest genre index.
    pub fn predict(&self, feature: &FeatureVector) -> Result<usize> {
        let scores = self.scores(feature)?;
        let mut best = 0;
        for (g, &s) in scores.iter().enumerate().skip(1) {
            if s > scores[best] {
                best = g;
            }
        }
        Ok(best)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// Result of the per-genre sampling step.
#[derive(Debug, Clone)]
pub struct SampleSplit {
    pub train: Vec<LabeledFeature>,
    pub held_out: Vec<LabeledFeature>,
    /// One entry per genre that had fewer than the requested frames.
    pub warnings: Vec<String>,
}

/// Draws up to `n` frames per genre without replacement, seeded. The rest
/// of the pool becomes the held-out set; both halves keep pool order.
pub fn sample_training_frames(
    pool: Vec<LabeledFeature>,
    n: usize,
    seed: u64,
) -> Result<SampleSplit> {
    if pool.is_empty() {
        return Err(Error::invalid_input("cannot sample from an empty pool"));
    }
    if n < 1 {
        return Err(Error::invalid_input("frames per genre must be >= 1"));
    }

    let mut by_genre: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for (i, lf) in pool.iter().enumerate() {
        by_genre.entry(lf.genre).or_default().push(i);
    }

    let mut warnings = Vec::new();
    let mut picked = vec![false; pool.len()];
    for (&genre, indices) in &by_genre {
        let mut indices = indices.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, genre as u64));
        indices.shuffle(&mut rng);
        if indices.len() < n {
            warnings.push(format!(
                "genre {genre} has {} frames, fewer than the requested {n}; taking all",
                indices.len()
            ));
        }
        for &i in indices.iter().take(n) {
            picked[i] = true;
        }
    }

    let mut train = Vec::new();
    let mut held_out = Vec::new();
    for (i, lf) in pool.into_iter().enumerate() {
        if picked[i] {
            train.push(lf);
        } else {
            held_out.push(lf);
        }
    }
    Ok(SampleSplit {
        train,
        held_out,
        warnings,
    })
}

/// Per-dimension mean and population standard deviation over the training
/// set. Zero-variance dimensions get scale 1 so standardization never
/// divides by zero.
pub fn standardize_fit(train: &[LabeledFeature]) -> Result<(Vec<f64>, Vec<f64>)> {
    let dim = check_homogeneous(train)?;
    let n = train.len() as f64;
    let mut means = vec![0.0; dim];
    for lf in train {
        for (m, &x) in means.iter_mut().zip(lf.feature.values.iter()) {
            *m += x;
        }
    }
    means.iter_mut().for_each(|m| *m /= n);

    let mut vars = vec![0.0; dim];
    for lf in train {
        for ((v, &m), &x) in vars.iter_mut().zip(means.iter()).zip(lf.feature.values.iter()) {
            let d = x - m;
            *v += d * d;
        }
    }
    let scales = vars
        .iter()
        .map(|&v| {
            let s = (v / n).sqrt();
            if s > 0.0 {
                s
            } else {
                1.0
            }
        })
        .collect();
    Ok((means, scales))
}

fn check_homogeneous(train: &[LabeledFeature]) -> Result<usize> {
    let first = train
        .first()
        .ok_or_else(|| Error::invalid_input("training set is empty"))?;
    let dim = first.feature.len();
    let descriptor = first.feature.descriptor;
    for lf in train {
        if lf.feature.descriptor != descriptor {
            return Err(Error::invalid_input(format!(
                "mixed descriptors in training set: {} and {}",
                descriptor, lf.feature.descriptor
            )));
        }
        if lf.feature.len() != dim {
            return Err(Error::invalid_input(format!(
                "mixed feature dimensions in training set: {} and {}",
                dim,
                lf.feature.len()
            )));
        }
    }
    Ok(dim)
}

/// Model plus the solver's per-genre, per-epoch objective trace.
#[derive(Debug, Clone)]
pub struct TrainOutput {
    pub model: LinearModel,
    /// objectives[g][e] = 0.5*|w|^2 + C*sum(hinge) after epoch e.
    pub objectives: Vec<Vec<f64>>,
}

pub fn train(
    train_set: &[LabeledFeature],
    genres: &GenreSet,
    cfg: &TrainConfig,
) -> Result<TrainOutput> {
    cfg.validate()?;
    let dim = check_homogeneous(train_set)?;
    let descriptor = train_set[0].feature.descriptor;
    let g_count = genres.len();
    for lf in train_set {
        if lf.genre >= g_count {
            return Err(Error::invalid_input(format!(
                "label {} out of range for {} genres",
                lf.genre, g_count
            )));
        }
    }
    for g in 0..g_count {
        if !train_set.iter().any(|lf| lf.genre == g) {
            return Err(Error::invalid_input(format!(
                "genre {} ({}) has no training frames; the dictionary must cover every genre",
                g,
                genres.label(g)
            )));
        }
    }

    let (means, scales) = standardize_fit(train_set)?;
    let n = train_set.len();
    // Standardized features with an augmented constant-one bias coordinate.
    let mut x = vec![0.0f64; n * (dim + 1)];
    for (i, lf) in train_set.iter().enumerate() {
        let row = &mut x[i * (dim + 1)..(i + 1) * (dim + 1)];
        for (j, &v) in lf.feature.values.iter().enumerate() {
            row[j] = (v - means[j]) / scales[j];
        }
        row[dim] = 1.0;
    }
    let labels: Vec<usize> = train_set.iter().map(|lf| lf.genre).collect();

    let solved: Vec<(Vec<f64>, Vec<f64>)> = (0..g_count)
        .into_par_iter()
        .map(|g| solve_binary(&x, &labels, n, dim + 1, g, cfg))
        .collect();

    let mut weights = Vec::with_capacity(g_count);
    let mut biases = Vec::with_capacity(g_count);
    let mut objectives = Vec::with_capacity(g_count);
    for (mut w, trace) in solved {
        let b = w.pop().expect("augmented coordinate");
        weights.push(w);
        biases.push(b);
        objectives.push(trace);
    }

    Ok(TrainOutput {
        model: LinearModel {
            genre_set: genres.clone(),
            descriptor,
            feature_dim: dim,
            feature_means: means,
            feature_scales: scales,
            weights,
            biases,
        },
        objectives,
    })
}

/// One binary subproblem: genre `g` against the rest. Returns the augmented
/// weight vector and the objective after each epoch.
fn solve_binary(
    x: &[f64],
    labels: &[usize],
    n: usize,
    dim: usize,
    g: usize,
    cfg: &TrainConfig,
) -> (Vec<f64>, Vec<f64>) {
    let y: Vec<f64> = labels
        .iter()
        .map(|&l| if l == g { 1.0 } else { -1.0 })
        .collect();
    let lambda = 1.0 / (cfg.c * n as f64);
    let mut w = vec![0.0f64; dim];
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(cfg.seed, g as u64));
    let mut t = 0u64;
    let mut trace = Vec::with_capacity(cfg.epochs);
    for _ in 0..cfg.epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            t += 1;
            let row = &x[i * dim..(i + 1) * dim];
            let margin = y[i] * dot(&w, row);
            let shrink = 1.0 - 1.0 / t as f64;
            if margin < 1.0 {
                let eta = 1.0 / (lambda * t as f64);
                for (wj, &xj) in w.iter_mut().zip(row.iter()) {
                    *wj = *wj * shrink + eta * y[i] * xj;
                }
            } else {
                w.iter_mut().for_each(|wj| *wj *= shrink);
            }
        }
        trace.push(objective(&w, x, &y, n, dim, cfg.c));
    }
    (w, trace)
}

/// 0.5*|w|^2 + C*sum(hinge), with the augmented bias coordinate excluded
/// from the norm.
fn objective(w: &[f64], x: &[f64], y: &[f64], n: usize, dim: usize, c: f64) -> f64 {
    let norm: f64 = w[..dim - 1].iter().map(|v| v * v).sum();
    let mut hinge = 0.0;
    for i in 0..n {
        let row = &x[i * dim..(i + 1) * dim];
        hinge += (1.0 - y[i] * dot(w, row)).max(0.0);
    }
    0.5 * norm + c * hinge
}

/// Fraction of frames whose predicted genre matches the label.
pub fn evaluate_accuracy(model: &LinearModel, test: &[LabeledFeature]) -> Result<f64> {
    if test.is_empty() {
        return Err(Error::invalid_input("cannot evaluate on an empty test set"));
    }
    let hits: Result<Vec<bool>> = test
        .iter()
        .map(|lf| Ok(model.predict(&lf.feature)? == lf.genre))
        .collect();
    let hits = hits?;
    Ok(hits.iter().filter(|&&h| h).count() as f64 / test.len() as f64)
}

pub fn save_model(model: &LinearModel, path: impl AsRef<Path>) -> Result<()> {
    let mut w = ByteWriter::new();
    w.bytes(MODEL_MAGIC);
    w.u16(MODEL_VERSION);
    w.u8(model.descriptor.code());
    w.u32(model.genre_count() as u32);
    w.u32(model.feature_dim as u32);
    for label in model.genre_set.labels() {
        w.str(label)?;
    }
    w.f64_slice(&model.feature_means);
    w.f64_slice(&model.feature_scales);
    for row in &model.weights {
        w.f64_slice(row);
    }
    w.f64_slice(&model.biases);
    write_file(path, &w.finish())
}

pub fn load_model(path: impl AsRef<Path>) -> Result<LinearModel> {
    let path = path.as_ref();
    let data = read_file(path)?;
    let mut r = ByteReader::open(&data, path)?;
    r.magic(MODEL_MAGIC)?;
    let version = r.u16("version")?;
    if version != MODEL_VERSION {
        return Err(r.err(format!("unsupported model version {version}")));
    }
    let code = r.u8("descriptor")?;
    let descriptor = Descriptor::from_code(code)
        .ok_or_else(|| r.err(format!("unknown descriptor code {code}")))?;
    let g = r.u32("genre count")? as usize;
    if g < 2 {
        return Err(r.err(format!("model declares {g} genres, need at least 2")));
    }
    let dim = r.u32("feature dimension")? as usize;
    if dim < 1 {
        return Err(r.err("model declares a zero feature dimension"));
    }
    let mut labels = Vec::with_capacity(g);
    for _ in 0..g {
        labels.push(r.str("genre label")?);
    }
    let genre_set = GenreSet::new(labels).map_err(|e| r.err(e.to_string()))?;
    let feature_means = r.f64_vec(dim, "feature means")?;
    let feature_scales = r.f64_vec(dim, "feature scales")?;
    if feature_scales.iter().any(|&s| !(s.is_finite() && s > 0.0)) {
        return Err(r.err("feature scales must be finite and strictly positive"));
    }
    let mut weights = Vec::with_capacity(g);
    for _ in 0..g {
        weights.push(r.f64_vec(dim, "weight row")?);
    }
    let biases = r.f64_vec(g, "biases")?;
    r.finish()?;

    let model = LinearModel {
        genre_set,
        descriptor,
        feature_dim: dim,
        feature_means,
        feature_scales,
        weights,
        biases,
    };
    let finite = model
        .weights
        .iter()
        .flatten()
        .chain(model.biases.iter())
        .chain(model.feature_means.iter())
        .chain(model.feature_scales.iter())
        .all(|v| v.is_finite());
    if !finite {
        return Err(Error::format(path, 0, "model contains non-finite values"));
    }
    Ok(model)
}
