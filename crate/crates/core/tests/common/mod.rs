//! Fixtures shared by the integration tests.

#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::{Distribution, LogNormal, Zipf};

/// Ten documents of exactly six tokens each.
pub fn uniform_length_corpus() -> Vec<(u64, String)> {
    [
        "apple banana apple cherry date fig",
        "banana banana banana grape kiwi lemon",
        "apple cherry cherry cherry mango nut",
        "date date fig fig grape grape",
        "apple apple apple apple kiwi lemon",
        "banana cherry date fig grape kiwi",
        "lemon lemon mango mango nut nut",
        "apple banana cherry date mango mango",
        "fig grape kiwi lemon lemon lemon",
        "nut nut nut nut apple banana",
    ]
    .iter()
    .enumerate()
    .map(|(i, t)| (i as u64 + 1, t.to_string()))
    .collect()
}

pub fn as_jsonl(docs: &[(u64, String)]) -> String {
    docs.iter()
        .map(|(id, text)| serde_json::json!({ "id": id, "text": text }).to_string() + "\n")
        .collect()
}

/// `n_docs` documents over a Zipf-distributed vocabulary of `vocab` words,
/// with log-normal lengths of median `median_len`.
pub fn synthetic_corpus(seed: u64, n_docs: usize, vocab: usize, median_len: f64, sigma: f64) -> Vec<(u64, String)> {
    let mut rng = StdRng::seed_from_u64(seed);
    let lengths = LogNormal::new(median_len.ln(), sigma).unwrap();
    let words = Zipf::new(vocab as f64, 1.0).unwrap();
    (0..n_docs)
        .map(|i| {
            let len = (lengths.sample(&mut rng).round() as usize).max(1);
            let text = (0..len)
                .map(|_| format!("w{}", words.sample(&mut rng) as usize))
                .collect::<Vec<_>>()
                .join(" ");
            (i as u64, text)
        })
        .collect()
}

/// Queries of two distinct words drawn uniformly from `candidates`.
pub fn random_queries(seed: u64, candidates: &[String], count: usize) -> Vec<String> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let a = rng.random_range(0..candidates.len());
            let mut b = rng.random_range(0..candidates.len());
            while b == a {
                b = rng.random_range(0..candidates.len());
            }
            format!("{} {}", candidates[a], candidates[b])
        })
        .collect()
}
