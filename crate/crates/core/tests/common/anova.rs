//! Textbook one-way ANOVA used as an independent oracle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, FisherSnedecor};

use placenav::harness::summarize;

pub struct BruteForce {
    pub f: f64,
    pub p: f64,
    pub means: Vec<f64>,
    pub sems: Vec<f64>,
}

/// Total sum of squares split as SST − SSW, with every sum an explicit loop.
pub fn brute_force(groups: &[Vec<f64>]) -> BruteForce {
    let mut n_total = 0usize;
    let mut grand_sum = 0.0;
    for g in groups {
        for &x in g {
            grand_sum += x;
            n_total += 1;
        }
    }
    let grand = grand_sum / n_total as f64;
    let mut sst = 0.0;
    let mut ssw = 0.0;
    let mut means = Vec::new();
    let mut sems = Vec::new();
    for g in groups {
        let mut s = 0.0;
        for &x in g {
            s += x;
        }
        let m = s / g.len() as f64;
        let mut dev = 0.0;
        for &x in g {
            sst += (x - grand) * (x - grand);
            dev += (x - m) * (x - m);
        }
        ssw += dev;
        means.push(m);
        sems.push((dev / (g.len() - 1) as f64).sqrt() / (g.len() as f64).sqrt());
    }
    let df_b = (groups.len() - 1) as f64;
    let df_w = (n_total - groups.len()) as f64;
    let f = ((sst - ssw) / df_b) / (ssw / df_w);
    let p = FisherSnedecor::new(df_b, df_w).unwrap().sf(f);
    BruteForce { f, p, means, sems }
}

pub fn random_groups(rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let k = rng.random_range(2..=5);
    (0..k)
        .map(|_| {
            let n = rng.random_range(2..=8);
            let shift = rng.random_range(0.0..30.0);
            (0..n).map(|_| shift + rng.random_range(0.0..100.0)).collect()
        })
        .collect()
}

/// Largest relative disagreement in F, group means and SEMs, and largest
/// absolute disagreement in p, over `count` random datasets.
pub fn worst_disagreement(count: usize, seed: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(f64::MIN_POSITIVE);
    let (mut worst_rel, mut worst_p) = (0.0f64, 0.0f64);
    for _ in 0..count {
        let groups = random_groups(&mut rng);
        let ours = summarize(&groups).unwrap();
        let oracle = brute_force(&groups);
        worst_rel = worst_rel.max(rel(ours.f.unwrap(), oracle.f));
        for (g, (m, s)) in ours.groups.iter().zip(oracle.means.iter().zip(&oracle.sems)) {
            worst_rel = worst_rel.max(rel(g.mean, *m)).max(rel(g.sem, *s));
        }
        worst_p = worst_p.max((ours.p.unwrap() - oracle.p).abs());
    }
    (worst_rel, worst_p)
}
