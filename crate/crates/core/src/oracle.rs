//! Brute-force references: the full constraint system, digraph powers,
//! multiplicativity checks and exhaustive cycle enumeration.

use std::collections::VecDeque;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::PcaModel;
use crate::power::{digraph, equivalent, power, ArcFamily, Digraph, EpsPoint};
use crate::solver::WEdge;
use crate::syngraph::{SynEdge, SynGraph, WalkWeights};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ConstraintKind {
    Attract(usize),
    Repel(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FullEdge {
    pub from: usize,
    pub to: usize,
    pub kind: ConstraintKind,
    pub w: i128,
}

/// One attract or repel edge per ordered pair and order `i ≤ k`.
pub fn full_constraint_graph(m: &PcaModel, k: usize, c: i128, ell: i128) -> Result<Vec<FullEdge>> {
    m.check_k(k)?;
    let n = m.len();
    let mut out = Vec::with_capacity(n * n * (k + 1));
    for i in 0..=k {
        let pw = power(m, i)?;
        let il = i as i128 * ell;
        for a in 0..n {
            for b in 0..n {
                let wrap = c * i128::from(a >= b);
                if pw.contains(a, EpsPoint::int(pw.start(b))) {
                    out.push(FullEdge { from: b, to: a, kind: ConstraintKind::Attract(i), w: -il + wrap });
                } else {
                    out.push(FullEdge { from: a, to: b, kind: ConstraintKind::Repel(i), w: il + 2 - wrap });
                }
            }
        }
    }
    Ok(out)
}

/// Keeps the heaviest edge per ordered pair; longest paths are unchanged.
pub fn collapse(n: usize, edges: impl IntoIterator<Item = (usize, usize, i128)>) -> Vec<WEdge<i128>> {
    let mut best: Vec<Option<i128>> = vec![None; n * n];
    for (u, v, w) in edges {
        let slot = &mut best[u * n + v];
        *slot = Some(slot.map_or(w, |x| x.max(w)));
    }
    best.iter()
        .enumerate()
        .filter_map(|(i, w)| w.map(|w| WEdge { from: i / n, to: i % n, w }))
        .collect()
}

pub fn digraph_distances(d: &Digraph, src: usize) -> Vec<Option<usize>> {
    let mut dist = vec![None; d.n];
    dist[src] = Some(0);
    let mut q = VecDeque::from([src]);
    while let Some(u) = q.pop_front() {
        let du = dist[u].expect("queued");
        for &v in &d.adj[u] {
            if dist[v].is_none() {
                dist[v] = Some(du + 1);
                q.push_back(v);
            }
        }
    }
    dist
}

pub fn digraph_power(d: &Digraph, i: usize) -> Digraph {
    let adj = (0..d.n)
        .map(|u| {
            digraph_distances(d, u)
                .iter()
                .enumerate()
                .filter(|&(v, dv)| v != u && dv.is_some_and(|x| x <= i))
                .map(|(v, _)| v)
                .collect()
        })
        .collect();
    Digraph { n: d.n, adj }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyFailure {
    /// The multiple that failed; 1 also covers the plain equivalence check.
    pub i: usize,
    pub reason: String,
}

impl fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "i = {}: {}", self.i, self.reason)
    }
}

/// `u ≅ m` and `i×u ≅ m^i` for every `1 ≤ i ≤ k`.
pub fn verify_k_multiplicative(u: &PcaModel, m: &PcaModel, k: usize) -> std::result::Result<(), VerifyFailure> {
    let fail = |i, reason: String| VerifyFailure { i, reason };
    if u.uniform_length().is_none() {
        return Err(fail(0, "arcs have unequal lengths".into()));
    }
    if !equivalent(u, m) {
        return Err(fail(0, "not equivalent to the model".into()));
    }
    for i in 1..=k {
        let mult = u.multiply(i).map_err(|e| fail(i, e.to_string()))?;
        let pw = power(m, i).map_err(|e| fail(i, e.to_string()))?;
        if !equivalent(&mult, &pw) {
            return Err(fail(i, "multiple not equivalent to the power".into()));
        }
    }
    Ok(())
}

/// Whether `D(m^k)` equals the k-th power of `D(m)`.
pub fn power_represents(m: &PcaModel, k: usize) -> Result<bool> {
    let pw = power(m, k)?;
    Ok(digraph(&pw) == digraph_power(&digraph(m), k))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CycleInfo {
    pub edges: Vec<SynEdge>,
    pub bal: i64,
    pub ext: i64,
    /// `(num, den)` of `-Bal/Ext`; absent when `Ext = 0`.
    pub ratio: Option<(i128, i128)>,
}

impl CycleInfo {
    pub fn vertex_mask(&self) -> u64 {
        self.edges.iter().fold(0, |m, e| m | 1u64 << e.from)
    }
}

pub const ENUMERATION_LIMIT: usize = 14;

/// Every simple cycle, each reported once from its smallest vertex.
pub fn enumerate_cycles(g: &SynGraph) -> Result<Vec<CycleInfo>> {
    if g.n > ENUMERATION_LIMIT {
        return Err(Error::TooLarge(g.n));
    }
    let mut out = Vec::new();
    let mut path: Vec<SynEdge> = Vec::new();
    let mut on_path = vec![false; g.n];
    for s in 0..g.n {
        dfs(g, s, s, &mut path, &mut on_path, &mut out);
    }
    Ok(out)
}

fn dfs(
    g: &SynGraph,
    s: usize,
    v: usize,
    path: &mut Vec<SynEdge>,
    on_path: &mut [bool],
    out: &mut Vec<CycleInfo>,
) {
    on_path[v] = true;
    for e in g.out_edges(v) {
        if e.to == s {
            path.push(*e);
            let w = WalkWeights::of_edges(path.iter());
            let ratio = (w.ext != 0).then(|| {
                let r = crate::construct::ratio_of(w.bal, w.ext);
                (*r.numer(), *r.denom())
            });
            out.push(CycleInfo { edges: path.clone(), bal: w.bal, ext: w.ext, ratio });
            path.pop();
        } else if e.to > s && !on_path[e.to] {
            path.push(*e);
            dfs(g, s, e.to, path, on_path, out);
            path.pop();
        }
    }
    on_path[v] = false;
}

/// True iff every cycle with Ext < 0 meets every cycle with Ext > 0.
pub fn crossing_cycles_check(g: &SynGraph) -> Result<bool> {
    let cycles = enumerate_cycles(g)?;
    let mut neg: Vec<u64> = cycles.iter().filter(|c| c.ext < 0).map(CycleInfo::vertex_mask).collect();
    let mut pos: Vec<u64> = cycles.iter().filter(|c| c.ext > 0).map(CycleInfo::vertex_mask).collect();
    neg.sort_unstable();
    neg.dedup();
    pos.sort_unstable();
    pos.dedup();
    Ok(neg.iter().all(|a| pos.iter().all(|b| a & b != 0)))
}
