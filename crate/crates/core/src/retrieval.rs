//! Exact L2 retrieval over bag-of-genres vectors.
//!
//! Corpora at target scale are small enough that brute-force ranking with a
//! full sort is instant, so there is no index structure. Ties on distance
//! break by ascending video id, which makes every ranking a total order and
//! keeps replicated experiments byte-reproducible.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::classifier::derive_seed;
use crate::encoder::BoGVector;
use crate::error::{Error, Result};

/// A query's ranking of the rest of the corpus, nearest first.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedList {
    pub query_id: String,
    /// (video_id, distance), distances non-decreasing.
    pub entries: Vec<(String, f64)>,
}

pub fn l2_distance(a: &BoGVector, b: &BoGVector) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::invalid_input(format!(
            "distance between vectors of dimension {} and {}",
            a.dim(),
            b.dim()
        )));
    }
    let sum: f64 = a
        .histogram
        .iter()
        .zip(b.histogram.iter())
        .map(|(&x, &y)| (x - y) * (x - y))
        .sum();
    Ok(sum.sqrt())
}

/// Ranks `corpus` minus the query itself by ascending distance to `query`.
pub fn rank(query: &BoGVector, corpus: &[BoGVector]) -> Result<RankedList> {
    let mut entries = Vec::with_capacity(corpus.len());
    for v in corpus {
        if v.video_id == query.video_id {
            continue;
        }
        entries.push((v.video_id.clone(), l2_distance(query, v)?));
    }
    if entries.is_empty() {
        return Err(Error::invalid_input(format!(
            "nothing to rank for query {}: corpus is empty after excluding it",
            query.video_id
        )));
    }
    entries.sort_unstable_by(|(id_a, d_a), (id_b, d_b)| {
        d_a.total_cmp(d_b).then_with(|| id_a.cmp(id_b))
    });
    Ok(RankedList {
        query_id: query.video_id.clone(),
        entries,
    })
}

/// Seeded selection of query videos: per replication and per genre,
/// max(1, round(fraction * genre size)) ids drawn without replacement.
#[derive(Debug, Clone, PartialEq)]
pub struct QueryPlan {
    pub replication_seeds: Vec<u64>,
    pub query_fraction: f64,
    /// One map per replication seed: genre index -> selected query ids.
    pub replications: Vec<BTreeMap<usize, Vec<String>>>,
}

impl QueryPlan {
    pub fn queries_of(&self, replication: usize) -> impl Iterator<Item = &String> {
        self.replications[replication].values().flatten()
    }
}

/// Builds the plan from (video_id, genre) pairs. Candidate ids are sorted
/// before the seeded shuffle, so the plan depends only on the id set, not
/// on input order.
pub fn build_query_plan(
    videos: &[(String, usize)],
    genre_count: usize,
    fraction: f64,
    seeds: &[u64],
) -> Result<QueryPlan> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::invalid_input("query fraction must lie in (0, 1]"));
    }
    if seeds.is_empty() {
        return Err(Error::invalid_input("at least one replication seed is required"));
    }
    let mut by_genre: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    for (id, g) in videos {
        by_genre.entry(*g).or_default().push(id.clone());
    }
    for g in 0..genre_count {
        if !by_genre.contains_key(&g) {
            return Err(Error::invalid_input(format!(
                "genre {g} has no videos; cannot sample queries"
            )));
        }
    }
    for ids in by_genre.values_mut() {
        ids.sort_unstable();
    }

    let mut replications = Vec::with_capacity(seeds.len());
    for &seed in seeds {
        let mut selected = BTreeMap::new();
        for (&g, ids) in &by_genre {
            let take = ((fraction * ids.len() as f64).round() as usize).max(1);
            let mut shuffled = ids.clone();
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, g as u64));
            shuffled.shuffle(&mut rng);
            shuffled.truncate(take);
            selected.insert(g, shuffled);
        }
        replications.push(selected);
    }
    Ok(QueryPlan {
        replication_seeds: seeds.to_vec(),
        query_fraction: fraction,
        replications,
    })
}

/// Runs every query of every replication against the corpus. Output is one
/// list of rankings per replication, in plan order.
pub fn run_retrieval(plan: &QueryPlan, corpus: &[BoGVector]) -> Result<Vec<Vec<RankedList>>> {
    let by_id: BTreeMap<&str, &BoGVector> =
        corpus.iter().map(|v| (v.video_id.as_str(), v)).collect();
    let mut out = Vec::with_capacity(plan.replications.len());
    for replication in 0..plan.replications.len() {
        let queries: Vec<&BoGVector> = plan
            .queries_of(replication)
            .map(|id| {
                by_id.get(id.as_str()).copied().ok_or_else(|| {
                    Error::invalid_input(format!("query id {id} is not in the corpus"))
                })
            })
            .collect::<Result<_>>()?;
        let lists: Vec<RankedList> = queries
            .par_iter()
            .map(|q| rank(q, corpus))
            .collect::<Result<_>>()?;
        out.push(lists);
    }
    Ok(out)
}

/// TREC-style run lines: `query_id Q0 video_id rank distance run_tag`.
pub fn trec_lines(lists: &[RankedList], run_tag: &str) -> String {
    let mut out = String::new();
    for list in lists {
        for (rank, (id, dist)) in list.entries.iter().enumerate() {
            writeln!(
                out,
                "{} Q0 {} {} {:.6} {}",
                list.query_id,
                id,
                rank + 1,
                dist,
                run_tag
            )
            .expect("string write");
        }
    }
    out
}
