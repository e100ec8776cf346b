//! End-to-end orchestration: extract, train, encode, evaluate, compare.
//!
//! Every stage is a plain function over loaded artifacts plus a RunConfig,
//! so the command-line layer stays a thin argument parser and integration
//! tests can drive the full pipeline in-process. Output files never embed
//! timestamps or machine identity; reruns with equal inputs are
//! byte-identical.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::binio::{read_file, write_file};
use crate::cache::{config_hash, hex, sha256, BogFile, FeatureCache};
use crate::classifier::{
    evaluate_accuracy, sample_training_frames, train, LabeledFeature, LinearModel, TrainConfig,
};
use crate::descriptors::{extract, Descriptor, DescriptorConfig};
use crate::encoder::{encode_corpus, VideoRecord};
use crate::error::{Error, Result};
use crate::image::Image;
use crate::manifest::{list_frames, DatasetManifest, Split};
use crate::retrieval::{build_query_plan, run_retrieval, trec_lines};
use crate::stats::{
    comparison_markdown, paired_diff_interval, per_genre_report, EvalReport, Metric,
    PairedDiffInterval, RelevanceJudge,
};

/// Experiment configuration, loadable from TOML.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    pub descriptor: Descriptor,
    pub descriptors: DescriptorConfig,
    pub train: TrainConfig,
    pub query_fraction: f64,
    pub replication_seeds: Vec<u64>,
    pub k: usize,
    pub confidence_level: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            descriptor: Descriptor::Gch,
            descriptors: DescriptorConfig::default(),
            train: TrainConfig::default(),
            query_fraction: 0.05,
            replication_seeds: vec![101, 102, 103, 104, 105],
            k: 10,
            confidence_level: 0.99,
        }
    }
}

impl RunConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let cfg: RunConfig = toml::from_str(&text)
            .map_err(|e| Error::format(path, 0, format!("config parse error: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let text = toml::to_string_pretty(self)
            .map_err(|e| Error::config(format!("config serialization: {e}")))?;
        write_file(path, text.as_bytes())
    }

    pub fn validate(&self) -> Result<()> {
        self.descriptors.validate()?;
        self.train.validate()?;
        if !(self.query_fraction > 0.0 && self.query_fraction <= 1.0) {
            return Err(Error::config("query_fraction must lie in (0, 1]"));
        }
        if self.replication_seeds.is_empty() {
            return Err(Error::config("at least one replication seed is required"));
        }
        if self.k < 1 {
            return Err(Error::config("k must be >= 1"));
        }
        if !(self.confidence_level > 0.0 && self.confidence_level < 1.0) {
            return Err(Error::config("confidence_level must lie in (0, 1)"));
        }
        Ok(())
    }

    pub fn hash(&self) -> [u8; 32] {
        config_hash(self.descriptor, &self.descriptors)
    }
}

/// Canonical file names for one experiment directory.
#[derive(Debug, Clone)]
pub struct OutputLayout {
    pub dir: PathBuf,
    pub descriptor: Descriptor,
}

impl OutputLayout {
    pub fn new(dir: impl Into<PathBuf>, descriptor: Descriptor) -> Self {
        OutputLayout {
            dir: dir.into(),
            descriptor,
        }
    }

    pub fn feature_cache(&self, split: Split) -> PathBuf {
        self.dir
            .join(format!("features_{split}_{}.bogf", self.descriptor))
    }

    pub fn model(&self) -> PathBuf {
        self.dir.join(format!("model_{}.bogm", self.descriptor))
    }

    pub fn model_for_n(&self, n: usize) -> PathBuf {
        self.dir
            .join(format!("model_{}_n{n}.bogm", self.descriptor))
    }

    pub fn train_report(&self) -> PathBuf {
        self.dir
            .join(format!("train_report_{}.json", self.descriptor))
    }

    pub fn train_sweep_csv(&self) -> PathBuf {
        self.dir
            .join(format!("train_sweep_{}.csv", self.descriptor))
    }

    pub fn bog(&self, split: Split) -> PathBuf {
        self.dir.join(format!("bog_{split}_{}.bogb", self.descriptor))
    }

    pub fn bog_csv(&self, split: Split) -> PathBuf {
        self.dir.join(format!("bog_{split}_{}.csv", self.descriptor))
    }

    pub fn eval_json(&self) -> PathBuf {
        self.dir
            .join(format!("eval_report_{}.json", self.descriptor))
    }

    pub fn eval_csv(&self) -> PathBuf {
        self.dir.join(format!("eval_report_{}.csv", self.descriptor))
    }

    pub fn trec_run(&self, replication: usize) -> PathBuf {
        self.dir
            .join(format!("runs_{}_rep{replication}.trec", self.descriptor))
    }

    pub fn config_sidecar(&self) -> PathBuf {
        self.dir.join(format!("run_config_{}.toml", self.descriptor))
    }

    pub fn comparison(&self) -> PathBuf {
        self.dir.join("comparison.md")
    }
}

#[derive(Debug)]
pub struct ExtractSummary {
    pub extracted: usize,
    pub skipped: usize,
    /// (frame path, why it was skipped)
    pub errors: Vec<(PathBuf, String)>,
}

/// Extracts features for one split into a cache file. Frames already in a
/// cache with a matching configuration hash are skipped, so the command is
/// resumable; a cache with a different hash is refused.
pub fn run_extract(
    manifest: &DatasetManifest,
    cfg: &RunConfig,
    split: Split,
    cache_path: &Path,
) -> Result<(FeatureCache, ExtractSummary)> {
    use rayon::prelude::*;

    let hash = cfg.hash();
    let dim = cfg.descriptor.feature_len(&cfg.descriptors);
    let mut cache = if cache_path.exists() {
        let existing = FeatureCache::load(cache_path)?;
        if existing.descriptor != cfg.descriptor || existing.config_hash != hash {
            return Err(Error::config(format!(
                "cache {} was built with descriptor {} / config {}, current run wants {} / {}; \
                 refusing to mix configurations",
                cache_path.display(),
                existing.descriptor,
                hex(&existing.config_hash),
                cfg.descriptor,
                hex(&hash)
            )));
        }
        existing
    } else {
        FeatureCache::new(cfg.descriptor, hash, dim)
    };

    let mut jobs: Vec<(String, u32, PathBuf)> = Vec::new();
    let mut skipped = 0usize;
    for video in manifest.split_videos(split) {
        for (index, frame) in list_frames(&video.frame_dir)?.into_iter().enumerate() {
            if cache.contains(&video.video_id, index as u32) {
                skipped += 1;
            } else {
                jobs.push((video.video_id.clone(), index as u32, frame));
            }
        }
    }

    let started = Instant::now();
    let results: Vec<(String, u32, PathBuf, Result<Vec<f64>>)> = jobs
        .into_par_iter()
        .map(|(id, index, path)| {
            let values = Image::load(&path)
                .and_then(|img| extract(&img, cfg.descriptor, &cfg.descriptors))
                .map(|fv| fv.values);
            (id, index, path, values)
        })
        .collect();

    let mut extracted = 0usize;
    let mut errors = Vec::new();
    for (id, index, path, result) in results {
        match result {
            Ok(values) => {
                cache.insert(&id, index, values)?;
                extracted += 1;
            }
            Err(e) => errors.push((path, e.to_string())),
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    if extracted > 0 && elapsed > 0.0 {
        log::info!(
            "extracted {extracted} {} frames in {elapsed:.2}s ({:.0} frames/s)",
            cfg.descriptor,
            extracted as f64 / elapsed
        );
    }

    cache.save(cache_path)?;
    Ok((
        cache,
        ExtractSummary {
            extracted,
            skipped,
            errors,
        },
    ))
}

fn labeled_pool(
    manifest: &DatasetManifest,
    cache: &FeatureCache,
    split: Split,
) -> (Vec<LabeledFeature>, Vec<String>) {
    let mut pool = Vec::new();
    let mut warnings = Vec::new();
    for video in manifest.split_videos(split) {
        let features = cache.features_of(&video.video_id);
        if features.is_empty() {
            warnings.push(format!(
                "video {} has no cached frames; it contributes nothing",
                video.video_id
            ));
        }
        for feature in features {
            pool.push(LabeledFeature {
                feature,
                genre: video.genre,
            });
        }
    }
    (pool, warnings)
}

fn check_cache_matches(cache: &FeatureCache, cfg: &RunConfig, what: &str) -> Result<()> {
    let hash = cfg.hash();
    if cache.descriptor != cfg.descriptor || cache.config_hash != hash {
        return Err(Error::config(format!(
            "{what} cache was built with descriptor {} / config {}, current run wants {} / {}",
            cache.descriptor,
            hex(&cache.config_hash),
            cfg.descriptor,
            hex(&hash)
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct TrainReport {
    pub descriptor: String,
    pub config_hash: String,
    pub genre_labels: Vec<String>,
    pub frames_per_genre: usize,
    pub train_frames: usize,
    pub held_out_frames: usize,
    pub held_out_accuracy: Option<f64>,
    pub test_accuracy: Option<f64>,
    /// Hinge objective per genre after the first and after the final epoch.
    pub objective_first_epoch: Vec<f64>,
    pub objective_final_epoch: Vec<f64>,
    pub warnings: Vec<String>,
}

/// Samples N frames per genre from the train split, trains the dictionary,
/// saves the model, and measures accuracy on the held-out remainder (plus
/// the test split when its cache is supplied).
pub fn run_train(
    manifest: &DatasetManifest,
    cache: &FeatureCache,
    cfg: &RunConfig,
    test_cache: Option<&FeatureCache>,
    model_path: &Path,
    report_path: Option<&Path>,
) -> Result<(LinearModel, TrainReport)> {
    check_cache_matches(cache, cfg, "train")?;
    let (pool, mut warnings) = labeled_pool(manifest, cache, Split::Train);
    if pool.is_empty() {
        return Err(Error::invalid_input(
            "train split has no cached frames; run extraction first",
        ));
    }
    let split = sample_training_frames(pool, cfg.train.frames_per_genre, cfg.train.seed)?;
    warnings.extend(split.warnings.iter().cloned());

    let output = train(&split.train, &manifest.genres, &cfg.train)?;
    let held_out_accuracy = if split.held_out.is_empty() {
        None
    } else {
        Some(evaluate_accuracy(&output.model, &split.held_out)?)
    };
    let test_accuracy = match test_cache {
        Some(tc) => {
            check_cache_matches(tc, cfg, "test")?;
            let (test_pool, test_warnings) = labeled_pool(manifest, tc, Split::Test);
            warnings.extend(test_warnings);
            if test_pool.is_empty() {
                None
            } else {
                Some(evaluate_accuracy(&output.model, &test_pool)?)
            }
        }
        None => None,
    };

    crate::classifier::save_model(&output.model, model_path)?;
    let report = TrainReport {
        descriptor: cfg.descriptor.to_string(),
        config_hash: hex(&cfg.hash()),
        genre_labels: manifest.genres.labels().to_vec(),
        frames_per_genre: cfg.train.frames_per_genre,
        train_frames: split.train.len(),
        held_out_frames: split.held_out.len(),
        held_out_accuracy,
        test_accuracy,
        objective_first_epoch: output.objectives.iter().map(|t| t[0]).collect(),
        objective_final_epoch: output
            .objectives
            .iter()
            .map(|t| *t.last().expect("at least one epoch"))
            .collect(),
        warnings,
    };
    if let Some(path) = report_path {
        let json =
            serde_json::to_string_pretty(&report).expect("train report serialization");
        write_file(path, json.as_bytes())?;
    }
    Ok((output.model, report))
}

/// Trains one model per requested frames-per-genre value, writing each to
/// its own file plus one CSV of accuracy rows for plotting.
pub fn run_train_sweep(
    manifest: &DatasetManifest,
    cache: &FeatureCache,
    cfg: &RunConfig,
    test_cache: Option<&FeatureCache>,
    ns: &[usize],
    layout: &OutputLayout,
) -> Result<Vec<TrainReport>> {
    if ns.is_empty() {
        return Err(Error::invalid_input("sweep needs at least one value of N"));
    }
    let fmt = |acc: Option<f64>| acc.map(|a| format!("{a:.6}")).unwrap_or_default();
    let mut reports = Vec::with_capacity(ns.len());
    let mut csv = String::from(
        "descriptor,frames_per_genre,train_frames,held_out_frames,held_out_accuracy,test_accuracy\n",
    );
    for &n in ns {
        let mut sweep_cfg = cfg.clone();
        sweep_cfg.train.frames_per_genre = n;
        let (_, report) = run_train(
            manifest,
            cache,
            &sweep_cfg,
            test_cache,
            &layout.model_for_n(n),
            None,
        )?;
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            report.descriptor,
            n,
            report.train_frames,
            report.held_out_frames,
            fmt(report.held_out_accuracy),
            fmt(report.test_accuracy)
        ));
        reports.push(report);
    }
    write_file(layout.train_sweep_csv(), csv.as_bytes())?;
    Ok(reports)
}

#[derive(Debug)]
pub struct EncodeSummary {
    pub encoded: usize,
    /// (video_id, why it was not encoded)
    pub errors: Vec<(String, String)>,
}

/// Encodes a split's videos into a BoG file stamped with the hash of the
/// model file that produced it.
pub fn run_encode(
    manifest: &DatasetManifest,
    cache: &FeatureCache,
    model: &LinearModel,
    model_path: &Path,
    split: Split,
    bog_path: &Path,
    csv_path: Option<&Path>,
) -> Result<(BogFile, EncodeSummary)> {
    if model.descriptor != cache.descriptor {
        return Err(Error::invalid_input(format!(
            "model descriptor {} does not match cache descriptor {} (cache config {})",
            model.descriptor,
            cache.descriptor,
            hex(&cache.config_hash)
        )));
    }
    if model.feature_dim != cache.dim {
        return Err(Error::invalid_input(format!(
            "model dimension {} does not match cache dimension {}",
            model.feature_dim, cache.dim
        )));
    }
    let videos: Vec<VideoRecord> = manifest
        .split_videos(split)
        .map(|v| VideoRecord {
            video_id: v.video_id.clone(),
            genre: v.genre,
            frame_features: cache.features_of(&v.video_id),
        })
        .collect();
    let encoding = encode_corpus(model, &videos);
    let model_hash = sha256(&read_file(model_path)?);
    let file = BogFile {
        model_hash,
        genre_labels: model.genre_set.labels().to_vec(),
        vectors: encoding.vectors,
    };
    file.save(bog_path)?;
    if let Some(path) = csv_path {
        write_file(path, file.to_csv().as_bytes())?;
    }
    let summary = EncodeSummary {
        encoded: file.vectors.len(),
        errors: encoding
            .errors
            .into_iter()
            .map(|(id, e)| (id, e.to_string()))
            .collect(),
    };
    Ok((file, summary))
}

/// Evaluation report plus the experiment context it was produced under.
#[derive(Debug, Clone, Serialize)]
pub struct PipelineEvalReport {
    pub descriptor: String,
    pub genre_labels: Vec<String>,
    pub dimensionality: usize,
    /// 1 - G/100: payload reduction against a 100-bin scene codebook.
    pub compactness_vs_100_bins: f64,
    pub query_fraction: f64,
    pub k: usize,
    pub confidence_level: f64,
    pub replication_seeds: Vec<u64>,
    pub model_hash: String,
    pub note: String,
    pub report: EvalReport,
}

/// Runs the replicated retrieval protocol over a BoG corpus and writes the
/// report (JSON + CSV) and one TREC run file per replication.
pub fn run_evaluate(
    manifest: &DatasetManifest,
    bog: &BogFile,
    cfg: &RunConfig,
    out: &OutputLayout,
) -> Result<PipelineEvalReport> {
    let genre_count = manifest.genres.len();
    if bog.dim() != genre_count {
        return Err(Error::invalid_input(format!(
            "bog file has dimensionality {}, manifest has {} genres",
            bog.dim(),
            genre_count
        )));
    }
    let mut ids_with_genres = Vec::with_capacity(bog.vectors.len());
    let mut judged = std::collections::BTreeMap::new();
    for v in &bog.vectors {
        let entry = manifest
            .videos
            .iter()
            .find(|m| m.video_id == v.video_id)
            .ok_or_else(|| {
                Error::invalid_input(format!(
                    "video {} from the bog file is not in the manifest",
                    v.video_id
                ))
            })?;
        ids_with_genres.push((v.video_id.clone(), entry.genre));
        judged.insert(v.video_id.clone(), entry.genre);
    }
    let judge = RelevanceJudge::new(judged);

    let plan = build_query_plan(
        &ids_with_genres,
        genre_count,
        cfg.query_fraction,
        &cfg.replication_seeds,
    )?;
    let runs = run_retrieval(&plan, &bog.vectors)?;
    let report = per_genre_report(&runs, &judge, genre_count, cfg.k, cfg.confidence_level)?;

    let wrapper = PipelineEvalReport {
        descriptor: cfg.descriptor.to_string(),
        genre_labels: manifest.genres.labels().to_vec(),
        dimensionality: genre_count,
        compactness_vs_100_bins: 1.0 - genre_count as f64 / 100.0,
        query_fraction: cfg.query_fraction,
        k: cfg.k,
        confidence_level: cfg.confidence_level,
        replication_seeds: cfg.replication_seeds.clone(),
        model_hash: hex(&bog.model_hash),
        note: "query sampling treats every genre uniformly, including any default category"
            .to_string(),
        report,
    };

    let json = serde_json::to_string_pretty(&wrapper).expect("eval report serialization");
    write_file(out.eval_json(), json.as_bytes())?;
    write_file(
        out.eval_csv(),
        wrapper
            .report
            .to_csv(manifest.genres.labels())
            .as_bytes(),
    )?;
    let tag = format!("bog-{}", cfg.descriptor);
    for (r, lists) in runs.iter().enumerate() {
        write_file(out.trec_run(r), trec_lines(lists, &tag).as_bytes())?;
    }
    Ok(wrapper)
}

/// Per-class (map, p10) scores parsed from a CSV with a header naming at
/// least `genre`, `map` and `p10` columns. An `overall` row is ignored.
pub fn load_per_class_scores(path: &Path) -> Result<Vec<(String, f64, f64)>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Error::format(path, 0, e.to_string()))?;
    let headers = reader
        .headers()
        .map_err(|e| Error::format(path, 0, e.to_string()))?
        .clone();
    let col = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::format(path, 0, format!("missing column `{name}`")))
    };
    let (genre_col, map_col, p10_col) = (col("genre")?, col("map")?, col("p10")?);
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::format(path, 0, e.to_string()))?;
        let genre = record[genre_col].to_string();
        if genre == "overall" {
            continue;
        }
        let parse = |i: usize, what: &str| -> Result<f64> {
            record[i].parse::<f64>().map_err(|_| {
                Error::format(
                    path,
                    record.position().map(|p| p.byte()).unwrap_or(0),
                    format!("bad {what} value `{}` for class {genre}", &record[i]),
                )
            })
        };
        let map = parse(map_col, "map")?;
        let p10 = parse(p10_col, "p10")?;
        rows.push((genre, map, p10));
    }
    if rows.len() < 2 {
        return Err(Error::invalid_input(format!(
            "{} has {} class rows; paired comparison needs at least 2",
            path.display(),
            rows.len()
        )));
    }
    rows.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(rows)
}

/// Paired comparison of two per-class score files, written as a Markdown
/// table.
pub fn run_compare(
    csv_a: &Path,
    csv_b: &Path,
    name_a: &str,
    name_b: &str,
    level: f64,
    out_md: &Path,
) -> Result<Vec<PairedDiffInterval>> {
    let a = load_per_class_scores(csv_a)?;
    let b = load_per_class_scores(csv_b)?;
    let classes_a: Vec<&String> = a.iter().map(|(g, _, _)| g).collect();
    let classes_b: Vec<&String> = b.iter().map(|(g, _, _)| g).collect();
    if classes_a != classes_b {
        return Err(Error::invalid_input(format!(
            "class sets differ between {} and {}",
            csv_a.display(),
            csv_b.display()
        )));
    }
    let map_a: Vec<f64> = a.iter().map(|(_, m, _)| *m).collect();
    let map_b: Vec<f64> = b.iter().map(|(_, m, _)| *m).collect();
    let p10_a: Vec<f64> = a.iter().map(|(_, _, p)| *p).collect();
    let p10_b: Vec<f64> = b.iter().map(|(_, _, p)| *p).collect();
    let rows = vec![
        paired_diff_interval(name_a, name_b, Metric::Map, &map_a, &map_b, level)?,
        paired_diff_interval(name_a, name_b, Metric::P10, &p10_a, &p10_b, level)?,
    ];
    write_file(out_md, comparison_markdown(&rows).as_bytes())?;
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn run_config_defaults_are_valid() {
        let cfg = RunConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.query_fraction, 0.05);
        assert_eq!(cfg.replication_seeds.len(), 5);
        assert_eq!(cfg.k, 10);
    }

    #[test]
    fn run_config_toml_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        let cfg = RunConfig {
            descriptor: Descriptor::Bic,
            train: TrainConfig { frames_per_genre: 50, ..Default::default() },
            ..Default::default()
        };
        cfg.save(&path).unwrap();
        let loaded = RunConfig::load(&path).unwrap();
        assert_eq!(loaded, cfg);
    }

    #[test]
    fn run_config_partial_toml_fills_defaults() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(
            &path,
            "descriptor = \"acc\"\n[train]\nframes_per_genre = 9\n",
        )
        .unwrap();
        let cfg = RunConfig::load(&path).unwrap();
        assert_eq!(cfg.descriptor, Descriptor::Acc);
        assert_eq!(cfg.train.frames_per_genre, 9);
        assert_eq!(cfg.train.c, 1.0);
        assert_eq!(cfg.k, 10);
    }

    #[test]
    fn run_config_rejects_bad_values() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        std::fs::write(&path, "query_fraction = 0.0\n").unwrap();
        assert!(RunConfig::load(&path).is_err());
        std::fs::write(&path, "descriptor = \"sift\"\n").unwrap();
        assert!(RunConfig::load(&path).is_err());
    }

    #[test]
    fn layout_names_are_split_and_descriptor_scoped() {
        let layout = OutputLayout::new("/tmp/x", Descriptor::Gch);
        assert!(layout
            .feature_cache(Split::Train)
            .ends_with("features_train_gch.bogf"));
        assert!(layout.bog(Split::Test).ends_with("bog_test_gch.bogb"));
        assert!(layout.model_for_n(500).ends_with("model_gch_n500.bogm"));
        assert!(layout.trec_run(3).ends_with("runs_gch_rep3.trec"));
    }

    #[test]
    fn per_class_scores_parse_and_skip_overall() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("scores.csv");
        std::fs::write(
            &path,
            "genre,queries,map,map_ci_lo,map_ci_hi,p10,p10_ci_lo,p10_ci_hi\n\
             beta,4,0.5,,,0.4,,\n\
             alpha,4,0.9,,,0.8,,\n\
             overall,8,0.7,0.6,0.8,0.6,0.5,0.7\n",
        )
        .unwrap();
        let rows = load_per_class_scores(&path).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].0, "alpha");
        assert_eq!(rows[0].1, 0.9);
        assert_eq!(rows[1].2, 0.4);
    }

    #[test]
    fn compare_rejects_mismatched_class_sets() {
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a.csv");
        let b = dir.path().join("b.csv");
        std::fs::write(&a, "genre,map,p10\nx,0.5,0.4\ny,0.6,0.5\n").unwrap();
        std::fs::write(&b, "genre,map,p10\nx,0.5,0.4\nz,0.6,0.5\n").unwrap();
        let out = dir.path().join("cmp.md");
        assert!(run_compare(&a, &b, "a", "b", 0.99, &out).is_err());
    }

    #[test]
    fn compare_writes_markdown() {
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a.csv");
        let b = dir.path().join("b.csv");
        std::fs::write(&a, "genre,map,p10\nx,0.9,0.8\ny,0.7,0.9\nz,0.8,0.7\n").unwrap();
        std::fs::write(&b, "genre,map,p10\nx,0.5,0.5\ny,0.4,0.6\nz,0.6,0.4\n").unwrap();
        let out = dir.path().join("cmp.md");
        let rows = run_compare(&a, &b, "bog-gch", "external", 0.99, &out).unwrap();
        assert_eq!(rows.len(), 2);
        let text = std::fs::read_to_string(&out).unwrap();
        assert!(text.contains("| bog-gch | external | MAP |"));
        assert!(text.contains("| bog-gch | external | P@10 |"));
    }
}
