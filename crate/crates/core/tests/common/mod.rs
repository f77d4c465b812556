#![allow(dead_code)]

use missa::markov::TransitionMatrix;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random stochastic matrix with small-integer rational entries. Roughly half
/// of the draws have a cyclic block structure so periodic classes and
/// transient states show up often.
pub fn random_stochastic(seed: u64, max_m: usize) -> TransitionMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = rng.gen_range(1..=max_m);
    let mut rows = vec![vec![0.0; m]; m];
    if rng.gen_bool(0.5) {
        for row in rows.iter_mut() {
            for v in row.iter_mut() {
                if rng.gen_bool(0.4) {
                    *v = rng.gen_range(1..=9) as f64;
                }
            }
            if row.iter().all(|v| *v == 0.0) {
                let j = rng.gen_range(0..m);
                row[j] = 1.0;
            }
        }
    } else {
        // states are dealt into `blocks` groups; edges run from group b to b+1
        let blocks = rng.gen_range(1..=m.min(4));
        let group: Vec<usize> = (0..m).map(|i| if i < blocks { i } else { rng.gen_range(0..blocks) }).collect();
        for i in 0..m {
            let next = (group[i] + 1) % blocks;
            let targets: Vec<usize> = (0..m).filter(|&j| group[j] == next).collect();
            for &j in &targets {
                if rng.gen_bool(0.6) {
                    rows[i][j] = rng.gen_range(1..=9) as f64;
                }
            }
            if rows[i].iter().all(|v| *v == 0.0) {
                rows[i][targets[rng.gen_range(0..targets.len())]] = 1.0;
            }
            // occasionally leak to an arbitrary state
            if rng.gen_bool(0.15) {
                let j = rng.gen_range(0..m);
                rows[i][j] += 1.0;
            }
        }
    }
    for row in rows.iter_mut() {
        let s: f64 = row.iter().sum();
        row.iter_mut().for_each(|v| *v /= s);
    }
    TransitionMatrix::from_rows(&rows).expect("normalized rows")
}

pub fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).abs().max()
}

pub fn unit(m: usize, i: usize) -> Vec<f64> {
    let mut v = vec![0.0; m];
    v[i] = 1.0;
    v
}
