use std::collections::VecDeque;

use nalgebra::DMatrix;

use super::limits::{cesaro_limit, power_limit};
use super::{gcd, lcm, TransitionMatrix};
use crate::Result;

/// Recurrent classes, transient states and limit matrices of a chain.
///
/// Classes are sorted by their smallest state and each class lists its states
/// in increasing order. All indices are 0-based.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainDecomposition {
    pub classes: Vec<Vec<usize>>,
    pub class_periods: Vec<usize>,
    pub transient: Vec<usize>,
    pub global_period: usize,
    /// Cesàro limit `P̄ = P_δ`.
    pub cesaro: DMatrix<f64>,
    /// `Δ = lim P^{δk}`.
    pub power_limit: DMatrix<f64>,
}

impl ChainDecomposition {
    pub fn m(&self) -> usize {
        self.cesaro.nrows()
    }

    /// Class index of `state`, or `None` for transient states.
    pub fn class_of(&self, state: usize) -> Option<usize> {
        self.classes.iter().position(|c| c.binary_search(&state).is_ok())
    }

    pub fn is_transient(&self, state: usize) -> bool {
        self.transient.binary_search(&state).is_ok()
    }
}

/// Structural part of the decomposition, before the limit matrices.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Structure {
    pub classes: Vec<Vec<usize>>,
    pub class_periods: Vec<usize>,
    pub transient: Vec<usize>,
    pub global_period: usize,
}

pub fn decompose(p: &TransitionMatrix) -> Result<ChainDecomposition> {
    let s = structure(p);
    let cesaro = cesaro_limit(p, &s.classes, &s.transient)?;
    let power = power_limit(p, s.global_period)?;
    Ok(ChainDecomposition {
        classes: s.classes,
        class_periods: s.class_periods,
        transient: s.transient,
        global_period: s.global_period,
        cesaro,
        power_limit: power,
    })
}

pub(crate) fn structure(p: &TransitionMatrix) -> Structure {
    let m = p.m();
    let adj: Vec<Vec<usize>> = (0..m).map(|i| p.successors(i).collect()).collect();
    let comps = strongly_connected_components(&adj);

    let mut comp_of = vec![0; m];
    for (c, states) in comps.iter().enumerate() {
        for &s in states {
            comp_of[s] = c;
        }
    }

    let mut classes = Vec::new();
    let mut transient = Vec::new();
    for states in comps {
        let c = comp_of[states[0]];
        let closed = states.iter().all(|&i| adj[i].iter().all(|&j| comp_of[j] == c));
        if closed {
            classes.push(states);
        } else {
            transient.extend(states);
        }
    }
    for c in &mut classes {
        c.sort_unstable();
    }
    classes.sort_unstable_by_key(|c| c[0]);
    transient.sort_unstable();

    let class_periods: Vec<usize> = classes.iter().map(|c| class_period(&adj, c)).collect();
    let global_period = class_periods.iter().copied().fold(1, lcm);
    Structure { classes, class_periods, transient, global_period }
}

/// Tarjan's algorithm, iterative so deep chains cannot overflow the stack.
fn strongly_connected_components(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    const UNVISITED: usize = usize::MAX;
    let n = adj.len();
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut next = 0;

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        // (vertex, position in its adjacency list)
        let mut call = vec![(root, 0usize)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(top) = call.last_mut() {
            let v = top.0;
            if let Some(&w) = adj[v].get(top.1) {
                top.1 += 1;
                if index[w] == UNVISITED {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comps.push(comp);
            }
        }
    }
    comps
}

/// Period of a closed class: BFS levels from the smallest state, then the gcd
/// of `level(i) + 1 - level(j)` over all support edges `i -> j` in the class.
fn class_period(adj: &[Vec<usize>], class: &[usize]) -> usize {
    let n = adj.len();
    let mut level = vec![usize::MAX; n];
    let start = class[0];
    level[start] = 0;
    let mut queue = VecDeque::from([start]);
    while let Some(i) = queue.pop_front() {
        for &j in &adj[i] {
            if level[j] == usize::MAX {
                level[j] = level[i] + 1;
                queue.push_back(j);
            }
        }
    }
    let mut period = 0;
    for &i in class {
        for &j in &adj[i] {
            let diff = (level[i] + 1).abs_diff(level[j]);
            period = gcd(period, diff);
        }
    }
    // a class always has at least one edge, so the gcd is positive
    period.max(1)
}
