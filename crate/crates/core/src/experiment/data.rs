//! Fixed data of the sparse l1 residual study (7 components, 20 variables).
//! Row, column and state numbers here are 1-based, as published.

pub const N: usize = 20;
pub const M: usize = 7;

/// Nonzero entries `(i, j, a_ij)` of the 7×20 matrix.
pub const A_ENTRIES: &[(usize, usize, f64)] = &[
    (1, 2, 0.5),
    (1, 3, 0.1),
    (1, 4, 0.2),
    (1, 14, 0.25),
    (1, 15, 0.1),
    (2, 6, 0.4),
    (2, 7, 0.15),
    (2, 12, 0.3),
    (2, 16, 0.45),
    (2, 19, 0.1),
    (2, 20, 0.2),
    (3, 13, 0.02),
    (3, 14, 0.06),
    (4, 1, 0.12),
    (4, 2, 0.21),
    (4, 3, 0.3),
    (4, 7, 0.5),
    (4, 13, 0.4),
    (4, 14, 0.1),
    (4, 15, 0.18),
    (4, 19, 0.1),
    (4, 20, 0.14),
    (5, 1, 0.8),
    (5, 2, 0.4),
    (5, 8, 1.2),
    (5, 9, 1.0),
    (5, 10, 0.85),
    (5, 17, 0.4),
    (5, 18, 0.7),
    (5, 19, 0.1),
    (6, 2, 0.25),
    (6, 3, 0.34),
    (6, 8, 0.45),
    (6, 9, 0.35),
    (6, 13, 0.18),
    (6, 14, 0.22),
    (7, 13, 0.05),
    (7, 14, 0.08),
];

pub const LOWER: [f64; N] = [
    -1.0, -0.5, -1.5, -1.3, 0.0, 0.1, 0.3, -0.2, -1.0, 0.0, -0.25, -0.1, 0.3, 0.1, 0.0, -1.1, 0.35,
    0.15, 0.0, -0.45,
];

pub const UPPER: [f64; N] = [
    2.0, 1.5, 2.3, 3.0, 2.0, 1.8, 2.25, 1.7, 1.5, 2.0, 2.8, 1.75, 2.35, 1.95, 2.0, 1.0, 2.5, 1.35,
    2.0, 3.0,
];

/// Transition matrix of the two-chain method: a period-2 class {1,2,3,4}
/// and an aperiodic class {5,6,7}.
pub const TRANSITION: [[f64; M]; M] = [
    [0.0, 0.0, 0.2, 0.8, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.15, 0.85, 0.0, 0.0, 0.0],
    [0.4, 0.6, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.5, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.8, 0.2],
    [0.0, 0.0, 0.0, 0.0, 0.8, 0.0, 0.2],
    [0.0, 0.0, 0.0, 0.0, 0.6, 0.4, 0.0],
];

/// Start states of the two chains.
pub const CHAIN_STARTS: [usize; 2] = [1, 5];

/// Neighbor sets of the equal-probability baseline.
pub const NEIGHBORS: [&[usize]; M] = [&[2, 3], &[1, 3, 7], &[1, 2, 6], &[5, 6], &[4], &[3, 4, 7], &[2, 6]];

/// Start state of the equal-probability baseline.
pub const EQUAL_PROBABILITY_START: usize = 5;

/// Nine-state example with two periodic classes and two transient states.
pub const NINE_STATE: [[f64; 9]; 9] = [
    [0.0, 0.0, 0.5, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.3, 0.7, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.2, 0.8, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.1, 0.0, 0.0, 0.2, 0.0, 0.7, 0.0],
    [0.1, 0.0, 0.0, 0.0, 0.0, 0.0, 0.9, 0.0, 0.0],
];

/// Four initial distributions for the nine-state example that together
/// reach both recurrent classes.
pub fn nine_state_initials() -> Vec<Vec<f64>> {
    let unit = |s: usize| {
        let mut v = vec![0.0; 9];
        v[s - 1] = 1.0;
        v
    };
    let mut half = vec![0.0; 9];
    half[0] = 0.5;
    half[1] = 0.5;
    vec![half, unit(5), unit(8), unit(9)]
}

/// Dense rows of the 7×20 matrix.
pub fn dense_rows() -> Vec<Vec<f64>> {
    let mut rows = vec![vec![0.0; N]; M];
    for &(i, j, v) in A_ENTRIES {
        rows[i - 1][j - 1] = v;
    }
    rows
}

pub fn rows_of<const K: usize>(m: &[[f64; K]; K]) -> Vec<Vec<f64>> {
    m.iter().map(|r| r.to_vec()).collect()
}
