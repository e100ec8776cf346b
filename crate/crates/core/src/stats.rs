//! Retrieval metrics and replication statistics.
//!
//! Relevance is genre match: a retrieved video is relevant to a query iff
//! they share a genre. Average precision runs over the full ranked list.
//! Replicated experiments aggregate into Student-t confidence intervals on
//! the per-replication means, and systems compare via paired per-class
//! difference intervals whose exclusion of zero marks significance.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};
use crate::retrieval::RankedList;

/// Ground-truth genre lookup for every video in the corpus.
#[derive(Debug, Clone, Default)]
pub struct RelevanceJudge {
    genre_of: BTreeMap<String, usize>,
}

impl RelevanceJudge {
    pub fn new(genre_of: BTreeMap<String, usize>) -> Self {
        RelevanceJudge { genre_of }
    }

    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, usize)>) -> Self {
        RelevanceJudge {
            genre_of: pairs
                .into_iter()
                .map(|(id, g)| (id.to_string(), g))
                .collect(),
        }
    }

    pub fn genre_of(&self, video_id: &str) -> Result<usize> {
        self.genre_of.get(video_id).copied().ok_or_else(|| {
            Error::invalid_input(format!("video {video_id} has no genre judgment"))
        })
    }

    fn relevant(&self, video_id: &str, query_genre: usize) -> Result<bool> {
        Ok(self.genre_of(video_id)? == query_genre)
    }
}

/// AP = (1/R) * sum over relevant ranks k of precision@k, over the whole
/// list. R is the number of relevant items in the list.
pub fn average_precision(
    ranked: &RankedList,
    judge: &RelevanceJudge,
    query_genre: usize,
) -> Result<f64> {
    let mut relevant_flags = Vec::with_capacity(ranked.entries.len());
    for (id, _) in &ranked.entries {
        relevant_flags.push(judge.relevant(id, query_genre)?);
    }
    let total_relevant = relevant_flags.iter().filter(|&&r| r).count();
    if total_relevant == 0 {
        return Err(Error::invalid_input(format!(
            "query {} has no relevant videos in the list",
            ranked.query_id
        )));
    }
    let mut seen = 0usize;
    let mut sum = 0.0;
    for (k, &rel) in relevant_flags.iter().enumerate() {
        if rel {
            seen += 1;
            sum += seen as f64 / (k + 1) as f64;
        }
    }
    Ok(sum / total_relevant as f64)
}

/// Fraction of the top k that is relevant, with the denominator fixed at k
/// even for lists shorter than k.
pub fn precision_at_k(
    ranked: &RankedList,
    judge: &RelevanceJudge,
    query_genre: usize,
    k: usize,
) -> Result<f64> {
    if k < 1 {
        return Err(Error::invalid_input("precision cutoff k must be >= 1"));
    }
    let mut hits = 0usize;
    for (id, _) in ranked.entries.iter().take(k) {
        if judge.relevant(id, query_genre)? {
            hits += 1;
        }
    }
    Ok(hits as f64 / k as f64)
}

/// Inverse CDF of Student's t with `df` degrees of freedom.
pub fn student_t_quantile(p: f64, df: usize) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::invalid_input(format!(
            "quantile probability must lie in (0, 1), got {p}"
        )));
    }
    if df < 1 {
        return Err(Error::invalid_input("degrees of freedom must be >= 1"));
    }
    if p == 0.5 {
        return Ok(0.0);
    }
    let dist = StudentsT::new(0.0, 1.0, df as f64)
        .map_err(|e| Error::invalid_input(format!("t distribution: {e}")))?;
    Ok(dist.inverse_cdf(p))
}

fn mean_and_sample_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Two-sided confidence interval on the mean of per-replication scores:
/// mean +- t_{(1+level)/2, n-1} * s / sqrt(n), s the sample standard
/// deviation.
pub fn aggregate_replications(means: &[f64], level: f64) -> Result<(f64, f64, f64)> {
    if means.len() < 2 {
        return Err(Error::invalid_input(format!(
            "confidence interval needs at least 2 replications, got {}",
            means.len()
        )));
    }
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::invalid_input("confidence level must lie in (0, 1)"));
    }
    let (mean, s) = mean_and_sample_std(means);
    let t = student_t_quantile((1.0 + level) / 2.0, means.len() - 1)?;
    let half = t * s / (means.len() as f64).sqrt();
    Ok((mean, mean - half, mean + half))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Map,
    P10,
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Metric::Map => f.write_str("MAP"),
            Metric::P10 => f.write_str("P@10"),
        }
    }
}

/// Confidence interval on the mean per-class score difference of two
/// systems. Zero outside the interval means the difference is significant.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairedDiffInterval {
    pub system_a: String,
    pub system_b: String,
    pub metric: Metric,
    pub lo: f64,
    pub hi: f64,
    pub significant: bool,
}

pub fn paired_diff_interval(
    system_a: &str,
    system_b: &str,
    metric: Metric,
    per_class_a: &[f64],
    per_class_b: &[f64],
    level: f64,
) -> Result<PairedDiffInterval> {
    if per_class_a.len() != per_class_b.len() {
        return Err(Error::invalid_input(format!(
            "paired score lists differ in length: {} vs {}",
            per_class_a.len(),
            per_class_b.len()
        )));
    }
    let diffs: Vec<f64> = per_class_a
        .iter()
        .zip(per_class_b.iter())
        .map(|(a, b)| a - b)
        .collect();
    let (_, lo, hi) = aggregate_replications(&diffs, level)?;
    let significant = lo > 0.0 || hi < 0.0;
    Ok(PairedDiffInterval {
        system_a: system_a.to_string(),
        system_b: system_b.to_string(),
        metric,
        lo,
        hi,
        significant,
    })
}

/// Markdown table of paired comparisons: metric, interval bounds,
/// significance verdict.
pub fn comparison_markdown(rows: &[PairedDiffInterval]) -> String {
    let mut out = String::from(
        "| system a | system b | metric | min | max | significant |\n\
         |----------|----------|--------|-----|-----|-------------|\n",
    );
    for r in rows {
        out.push_str(&format!(
            "| {} | {} | {} | {:.3} | {:.3} | {} |\n",
            r.system_a,
            r.system_b,
            r.metric,
            r.lo,
            r.hi,
            if r.significant { "yes" } else { "no" }
        ));
    }
    out
}

/// Pooled per-genre scores.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenreScore {
    pub map: f64,
    pub p10: f64,
    pub queries: usize,
}

/// Full evaluation outcome over all replications.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub map_mean: f64,
    pub map_ci: (f64, f64),
    pub p10_mean: f64,
    pub p10_ci: (f64, f64),
    /// Genre index -> scores pooled over every replication's queries.
    pub per_genre: BTreeMap<usize, GenreScore>,
    pub replication_count: usize,
    pub warnings: Vec<String>,
}

impl EvalReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    /// One row per genre plus an overall row carrying the intervals.
    pub fn to_csv(&self, genre_names: &[String]) -> String {
        let mut out =
            String::from("genre,queries,map,map_ci_lo,map_ci_hi,p10,p10_ci_lo,p10_ci_hi\n");
        for (&g, score) in &self.per_genre {
            let name = genre_names
                .get(g)
                .map(String::as_str)
                .unwrap_or("unknown");
            out.push_str(&format!(
                "{},{},{:.6},,,{:.6},,\n",
                name, score.queries, score.map, score.p10
            ));
        }
        out.push_str(&format!(
            "overall,{},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6}\n",
            self.per_genre.values().map(|s| s.queries).sum::<usize>(),
            self.map_mean,
            self.map_ci.0,
            self.map_ci.1,
            self.p10_mean,
            self.p10_ci.0,
            self.p10_ci.1
        ));
        out
    }
}

/// Scores every replication's rankings and aggregates. Queries without any
/// relevant corpus video are excluded with a warning; genres that end up
/// with no queries are omitted with a warning.
pub fn per_genre_report(
    runs: &[Vec<RankedList>],
    judge: &RelevanceJudge,
    genre_count: usize,
    k: usize,
    level: f64,
) -> Result<EvalReport> {
    if runs.is_empty() {
        return Err(Error::invalid_input("no replications to evaluate"));
    }
    let mut warnings = Vec::new();
    let mut rep_map = Vec::with_capacity(runs.len());
    let mut rep_p10 = Vec::with_capacity(runs.len());
    let mut pooled: BTreeMap<usize, Vec<(f64, f64)>> = BTreeMap::new();

    for (r, lists) in runs.iter().enumerate() {
        let mut aps = Vec::new();
        let mut p10s = Vec::new();
        for list in lists {
            let genre = judge.genre_of(&list.query_id)?;
            let mut has_relevant = false;
            for (id, _) in &list.entries {
                if judge.relevant(id, genre)? {
                    has_relevant = true;
                    break;
                }
            }
            if !has_relevant {
                warnings.push(format!(
                    "query {} (replication {r}) has no relevant videos; excluded from averages",
                    list.query_id
                ));
                continue;
            }
            let ap = average_precision(list, judge, genre)?;
            let p = precision_at_k(list, judge, genre, k)?;
            aps.push(ap);
            p10s.push(p);
            pooled.entry(genre).or_default().push((ap, p));
        }
        if aps.is_empty() {
            return Err(Error::invalid_input(format!(
                "replication {r} has no scoreable queries"
            )));
        }
        rep_map.push(aps.iter().sum::<f64>() / aps.len() as f64);
        rep_p10.push(p10s.iter().sum::<f64>() / p10s.len() as f64);
    }

    let (map_mean, map_ci, p10_mean, p10_ci) = if runs.len() >= 2 {
        let (m, lo, hi) = aggregate_replications(&rep_map, level)?;
        let (p, plo, phi) = aggregate_replications(&rep_p10, level)?;
        (m, (lo, hi), p, (plo, phi))
    } else {
        warnings.push("single replication: intervals are degenerate".to_string());
        (rep_map[0], (rep_map[0], rep_map[0]), rep_p10[0], (rep_p10[0], rep_p10[0]))
    };

    let mut per_genre = BTreeMap::new();
    for (genre, scores) in pooled {
        let n = scores.len() as f64;
        per_genre.insert(
            genre,
            GenreScore {
                map: scores.iter().map(|(ap, _)| ap).sum::<f64>() / n,
                p10: scores.iter().map(|(_, p)| p).sum::<f64>() / n,
                queries: scores.len(),
            },
        );
    }
    for g in 0..genre_count {
        if !per_genre.contains_key(&g) {
            warnings.push(format!("genre {g} had no scoreable queries; omitted"));
        }
    }

    Ok(EvalReport {
        map_mean,
        map_ci,
        p10_mean,
        p10_ci,
        per_genre,
        replication_count: runs.len(),
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// List over ids "r#" (relevant) and "n#" (non-relevant) under a judge
    /// that maps r* -> genre 0, n* -> genre 1.
    fn list(pattern: &[bool]) -> (RankedList, RelevanceJudge) {
        let mut entries = Vec::new();
        let mut judge = BTreeMap::new();
        for (i, &rel) in pattern.iter().enumerate() {
            let id = format!("{}{i}", if rel { "r" } else { "n" });
            judge.insert(id.clone(), if rel { 0 } else { 1 });
            entries.push((id, i as f64));
        }
        judge.insert("q".to_string(), 0);
        (
            RankedList {
                query_id: "q".into(),
                entries,
            },
            RelevanceJudge::new(judge),
        )
    }

    #[test]
    fn ap_all_relevant_first() {
        let (l, j) = list(&[true, true, false]);
        assert_eq!(average_precision(&l, &j, 0).unwrap(), 1.0);
    }

    #[test]
    fn ap_interleaved() {
        let (l, j) = list(&[true, false, true]);
        let ap = average_precision(&l, &j, 0).unwrap();
        assert!((ap - 5.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn ap_single_relevant_reversed() {
        let n = 8;
        let mut pattern = vec![false; n];
        pattern[0] = true;
        let (l, j) = list(&pattern);
        assert_eq!(average_precision(&l, &j, 0).unwrap(), 1.0);

        let mut pattern = vec![false; n];
        pattern[n - 1] = true;
        let (l, j) = list(&pattern);
        assert!((average_precision(&l, &j, 0).unwrap() - 1.0 / n as f64).abs() < 1e-12);
    }

    /// Brute-force AP straight from the definition.
    fn ap_oracle(pattern: &[bool]) -> f64 {
        let total = pattern.iter().filter(|&&r| r).count();
        let mut sum = 0.0;
        for k in 1..=pattern.len() {
            if pattern[k - 1] {
                let in_top = pattern[..k].iter().filter(|&&r| r).count();
                sum += in_top as f64 / k as f64;
            }
        }
        sum / total as f64
    }

    #[test]
    fn ap_matches_definition_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        for _ in 0..100 {
            let len = rng.random_range(1..=20);
            let mut pattern: Vec<bool> = (0..len).map(|_| rng.random::<bool>()).collect();
            if !pattern.iter().any(|&r| r) {
                pattern[0] = true;
            }
            let (l, j) = list(&pattern);
            let ap = average_precision(&l, &j, 0).unwrap();
            assert!((ap - ap_oracle(&pattern)).abs() < 1e-12);
        }
    }

    #[test]
    fn ap_requires_a_relevant_item() {
        let (l, j) = list(&[false, false]);
        assert!(average_precision(&l, &j, 0).is_err());
    }

    #[test]
    fn p_at_k_counting() {
        let mut pattern = vec![false; 10];
        for i in [0, 2, 5, 9] {
            pattern[i] = true;
        }
        let (l, j) = list(&pattern);
        assert_eq!(precision_at_k(&l, &j, 0, 10).unwrap(), 0.4);
    }

    #[test]
    fn p_at_k_fixed_denominator() {
        let (l, j) = list(&[true; 5]);
        assert_eq!(precision_at_k(&l, &j, 0, 10).unwrap(), 0.5);
        assert!(precision_at_k(&l, &j, 0, 0).is_err());
    }

    #[test]
    fn t_quantile_reference_values() {
        assert!((student_t_quantile(0.995, 4).unwrap() - 4.604095).abs() < 1e-5);
        assert!((student_t_quantile(0.995, 25).unwrap() - 2.787436).abs() < 1e-5);
        assert_eq!(student_t_quantile(0.5, 11).unwrap(), 0.0);
        assert!(student_t_quantile(0.0, 4).is_err());
        assert!(student_t_quantile(1.0, 4).is_err());
    }

    /// Independent quantile oracle: Simpson integration of the t density
    /// plus bisection.
    fn t_quantile_oracle(p: f64, df: usize) -> f64 {
        let v = df as f64;
        // log normalizing constant via the log-gamma series
        fn ln_gamma(x: f64) -> f64 {
            // Stirling with correction terms; adequate for x >= 1
            let mut x = x;
            let mut shift = 0.0;
            while x < 7.0 {
                shift -= x.ln();
                x += 1.0;
            }
            let inv = 1.0 / x;
            let inv2 = inv * inv;
            shift
                + 0.5 * ((2.0 * std::f64::consts::PI).ln() - x.ln())
                + x * (x.ln() - 1.0)
                + inv / 12.0 - inv * inv2 / 360.0 + inv * inv2 * inv2 / 1260.0
        }
        let log_c = ln_gamma((v + 1.0) / 2.0)
            - ln_gamma(v / 2.0)
            - 0.5 * (v * std::f64::consts::PI).ln();
        let pdf = |t: f64| (log_c - (v + 1.0) / 2.0 * (1.0 + t * t / v).ln()).exp();
        let cdf = |x: f64| {
            // CDF(x) = 0.5 + integral from 0 to x
            let steps = 4000;
            let h = x / steps as f64;
            let mut sum = pdf(0.0) + pdf(x);
            for i in 1..steps {
                let w = if i % 2 == 1 { 4.0 } else { 2.0 };
                sum += w * pdf(i as f64 * h);
            }
            0.5 + sum * h / 3.0
        };
        let (mut lo, mut hi) = (0.0, 1000.0);
        for _ in 0..200 {
            let mid = (lo + hi) / 2.0;
            if cdf(mid) < p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (lo + hi) / 2.0
    }

    #[test]
    fn t_quantile_matches_integration_oracle() {
        for (p, df) in [(0.995, 4), (0.995, 25), (0.975, 9), (0.9, 2)] {
            let got = student_t_quantile(p, df).unwrap();
            let want = t_quantile_oracle(p, df);
            assert!(
                (got - want).abs() < 1e-6,
                "p={p} df={df}: {got} vs oracle {want}"
            );
        }
    }

    #[test]
    fn aggregate_zero_variance() {
        let (m, lo, hi) = aggregate_replications(&[0.5; 5], 0.99).unwrap();
        assert_eq!((m, lo, hi), (0.5, 0.5, 0.5));
    }

    #[test]
    fn aggregate_three_point_closed_form() {
        let (m, lo, hi) = aggregate_replications(&[0.4, 0.5, 0.6], 0.99).unwrap();
        assert!((m - 0.5).abs() < 1e-12);
        let half = 9.924843 * 0.1 / 3.0f64.sqrt();
        assert!(((hi - lo) / 2.0 - half).abs() < 1e-5);
        assert!(lo <= m && m <= hi);
    }

    #[test]
    fn aggregate_matches_direct_oracle() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(44);
        for _ in 0..50 {
            let n = rng.random_range(2..=10);
            let xs: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();
            let (m, lo, hi) = aggregate_replications(&xs, 0.99).unwrap();
            let mean = xs.iter().sum::<f64>() / n as f64;
            let s = (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n as f64 - 1.0))
                .sqrt();
            let t = student_t_quantile(0.995, n - 1).unwrap();
            let half = t * s / (n as f64).sqrt();
            assert!((m - mean).abs() < 1e-9);
            assert!((lo - (mean - half)).abs() < 1e-9);
            assert!((hi - (mean + half)).abs() < 1e-9);
        }
    }

    #[test]
    fn aggregate_needs_two_points() {
        assert!(aggregate_replications(&[0.5], 0.99).is_err());
    }

    #[test]
    fn doubling_deviations_doubles_half_width() {
        // dyadic inputs keep every step exact
        let base = [0.5 - 0.0625, 0.5 + 0.0625, 0.5 - 0.125, 0.5 + 0.125];
        let doubled = [0.5 - 0.125, 0.5 + 0.125, 0.5 - 0.25, 0.5 + 0.25];
        let (_, lo1, hi1) = aggregate_replications(&base, 0.99).unwrap();
        let (_, lo2, hi2) = aggregate_replications(&doubled, 0.99).unwrap();
        assert_eq!(hi2 - 0.5, 2.0 * (hi1 - 0.5));
        assert_eq!(0.5 - lo2, 2.0 * (0.5 - lo1));
    }

    #[test]
    fn paired_identical_lists() {
        let a = [0.3, 0.4, 0.5];
        let d = paired_diff_interval("x", "y", Metric::Map, &a, &a, 0.99).unwrap();
        assert_eq!((d.lo, d.hi), (0.0, 0.0));
        assert!(!d.significant);
    }

    #[test]
    fn paired_antisymmetry_is_exact() {
        let a = [0.9, 0.7, 0.8, 0.6, 0.75];
        let b = [0.5, 0.6, 0.7, 0.65, 0.55];
        let ab = paired_diff_interval("a", "b", Metric::P10, &a, &b, 0.99).unwrap();
        let ba = paired_diff_interval("b", "a", Metric::P10, &b, &a, 0.99).unwrap();
        assert_eq!(ab.lo, -ba.hi);
        assert_eq!(ab.hi, -ba.lo);
        assert_eq!(ab.significant, ba.significant);
    }

    /// Per-class inputs whose paired interval is exactly (lo, hi) under the
    /// pinned critical value.
    fn interval_inputs(lo: f64, hi: f64, n: usize, t: f64) -> (Vec<f64>, Vec<f64>) {
        let m = (lo + hi) / 2.0;
        let h = (hi - lo) / 2.0;
        let s = h * (n as f64).sqrt() / t;
        let delta = s * ((n as f64 - 1.0) / 2.0).sqrt();
        let mut a = vec![m; n];
        a[0] = m + delta;
        a[1] = m - delta;
        (a, vec![0.0; n])
    }

    #[test]
    fn published_interval_readings() {
        let t = 2.787436;
        let (a, b) = interval_inputs(-0.018, 0.018, 26, t);
        let d = paired_diff_interval("bog", "baseline", Metric::Map, &a, &b, 0.99).unwrap();
        assert!((d.lo - -0.018).abs() < 1e-6 && (d.hi - 0.018).abs() < 1e-6);
        assert!(!d.significant, "interval straddling zero is not significant");

        let (a, b) = interval_inputs(-0.232, -0.079, 26, t);
        let d = paired_diff_interval("bog", "baseline", Metric::Map, &a, &b, 0.99).unwrap();
        assert!((d.lo - -0.232).abs() < 1e-6 && (d.hi - -0.079).abs() < 1e-6);
        assert!(d.significant, "interval excluding zero is significant");
    }

    #[test]
    fn paired_rejects_mismatched_lengths() {
        assert!(paired_diff_interval("a", "b", Metric::Map, &[0.1, 0.2], &[0.1], 0.99).is_err());
    }

    fn toy_runs() -> (Vec<Vec<RankedList>>, RelevanceJudge) {
        // corpus: a0,a1,a2 genre 0; b0,b1 genre 1
        let judge = RelevanceJudge::from_pairs([
            ("a0", 0),
            ("a1", 0),
            ("a2", 0),
            ("b0", 1),
            ("b1", 1),
        ]);
        let list = RankedList {
            query_id: "a0".into(),
            entries: vec![
                ("a1".into(), 0.1),
                ("b0".into(), 0.2),
                ("a2".into(), 0.3),
                ("b1".into(), 0.4),
            ],
        };
        (vec![vec![list]], judge)
    }

    #[test]
    fn report_single_query_single_replication() {
        let (runs, judge) = toy_runs();
        let report = per_genre_report(&runs, &judge, 2, 10, 0.99).unwrap();
        let expected_ap = (1.0 + 2.0 / 3.0) / 2.0;
        assert!((report.map_mean - expected_ap).abs() < 1e-12);
        assert!((report.p10_mean - 0.2).abs() < 1e-12);
        assert_eq!(report.map_ci, (report.map_mean, report.map_mean));
        assert_eq!(report.replication_count, 1);
        assert_eq!(report.per_genre.len(), 1);
        assert!(report
            .warnings
            .iter()
            .any(|w| w.contains("genre 1")), "genre without queries is flagged");
    }

    #[test]
    fn report_identical_replications_have_zero_width() {
        let (mut runs, judge) = toy_runs();
        runs.push(runs[0].clone());
        let report = per_genre_report(&runs, &judge, 2, 10, 0.99).unwrap();
        assert_eq!(report.map_ci.0, report.map_ci.1);
        assert_eq!(report.per_genre[&0].queries, 2);
    }

    #[test]
    fn report_serializes() {
        let (runs, judge) = toy_runs();
        let report = per_genre_report(&runs, &judge, 2, 10, 0.99).unwrap();
        let json = report.to_json();
        assert!(json.contains("map_mean"));
        let csv = report.to_csv(&["alpha".to_string(), "beta".to_string()]);
        assert!(csv.starts_with("genre,"));
        assert!(csv.contains("alpha"));
        assert!(csv.contains("overall"));
    }

    #[test]
    fn comparison_markdown_layout() {
        let row = PairedDiffInterval {
            system_a: "bog-gch".into(),
            system_b: "bog-acc".into(),
            metric: Metric::Map,
            lo: -0.232,
            hi: -0.079,
            significant: true,
        };
        let md = comparison_markdown(&[row]);
        assert!(md.contains("| bog-gch | bog-acc | MAP | -0.232 | -0.079 | yes |"));
    }
}
