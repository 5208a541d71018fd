//! Synthetic graphs `S^k` and `S^k_*` with their edge weightings.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ArcId, NavTables, PcaModel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum EdgeKind {
    Hollow,
    Nose(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct SynEdge {
    pub from: ArcId,
    pub to: ArcId,
    pub kind: EdgeKind,
}

impl SynEdge {
    pub fn hollow(from: ArcId, to: ArcId) -> Self {
        SynEdge { from, to, kind: EdgeKind::Hollow }
    }

    pub fn nose(from: ArcId, to: ArcId, order: usize) -> Self {
        SynEdge { from, to, kind: EdgeKind::Nose(order) }
    }

    pub fn is_nose(&self) -> bool {
        matches!(self.kind, EdgeKind::Nose(_))
    }

    pub fn order(&self) -> Option<usize> {
        match self.kind {
            EdgeKind::Nose(i) => Some(i),
            EdgeKind::Hollow => None,
        }
    }

    /// Hollows point left and noses point right; a nose onto its own source
    /// goes once around the circle.
    pub fn is_internal(&self) -> bool {
        match self.kind {
            EdgeKind::Hollow => self.to < self.from,
            EdgeKind::Nose(_) => self.from < self.to,
        }
    }

    pub fn bal(&self) -> i64 {
        match self.kind {
            EdgeKind::Hollow => -1,
            EdgeKind::Nose(i) => i as i64,
        }
    }

    pub fn ext(&self) -> i64 {
        match (self.kind, self.is_internal()) {
            (_, true) => 0,
            (EdgeKind::Hollow, false) => 1,
            (EdgeKind::Nose(_), false) => -1,
        }
    }

    /// `ℓ·Bal + c·Ext + 2·[nose]`.
    pub fn sep(&self, c: i128, ell: i128) -> i128 {
        let nose = i128::from(self.is_nose());
        ell * i128::from(self.bal()) + c * i128::from(self.ext()) + 2 * nose
    }
}

pub fn sep_weight(e: &SynEdge, c: i128, ell: i128) -> i128 {
    e.sep(c, ell)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SynGraph {
    pub k: usize,
    pub n: usize,
    /// Sorted: hollows first, then noses, each by source then order.
    pub edges: Vec<SynEdge>,
    #[serde(skip)]
    adj: Vec<Vec<usize>>,
}

impl SynGraph {
    pub fn from_edges(k: usize, n: usize, mut edges: Vec<SynEdge>) -> Self {
        edges.sort_unstable_by_key(|e| (e.is_nose(), e.from, e.kind, e.to));
        edges.dedup();
        let mut adj = vec![Vec::new(); n];
        for (i, e) in edges.iter().enumerate() {
            adj[e.from].push(i);
        }
        SynGraph { k, n, edges, adj }
    }

    pub fn out_edges(&self, v: ArcId) -> impl Iterator<Item = &SynEdge> + '_ {
        self.adj[v].iter().map(move |&i| &self.edges[i])
    }

    pub fn hollow_from(&self, v: ArcId) -> Option<&SynEdge> {
        self.out_edges(v).find(|e| !e.is_nose())
    }

    /// The highest-order nose leaving `v` (the only one in `S^k`).
    pub fn nose_from(&self, v: ArcId) -> Option<&SynEdge> {
        self.out_edges(v).filter(|e| e.is_nose()).last()
    }

    pub fn find_edge(&self, from: ArcId, to: ArcId, prefer_nose: bool) -> Option<&SynEdge> {
        let mut it = self.out_edges(from).filter(|e| e.to == to);
        if prefer_nose {
            let all: Vec<&SynEdge> = it.collect();
            all.iter().rev().find(|e| e.is_nose()).or(all.first()).copied()
        } else {
            it.next()
        }
    }
}

fn check_pre(m: &PcaModel, k: usize) -> Result<()> {
    if !m.is_connected() {
        return Err(Error::Disconnected);
    }
    m.check_k(k)?;
    Ok(())
}

fn hollows(m: &PcaModel, nav: &NavTables) -> Vec<SynEdge> {
    (0..m.len())
        .filter_map(|a| {
            let f = nav.fl[a];
            (f != a && nav.fr[f] == a).then(|| SynEdge::hollow(a, f))
        })
        .collect()
}

/// On a PIG model stored on a finite circle, no k-multiple may reach around
/// to `s(A_0)`: the order-k nose from the last arc to the first. On the
/// line itself this is vacuous.
fn line_cut(m: &PcaModel, k: usize) -> Option<SynEdge> {
    m.is_pig().then(|| SynEdge::nose(m.len() - 1, 0, k))
}

/// `μ(A)` and `H(A) = H_r^μ(A)` from the paths and cycles of the `H_r` graph.
pub(crate) fn mu_h(nav: &NavTables, k: usize) -> (Vec<usize>, Vec<ArcId>) {
    let n = nav.n;
    let mut has_pred = vec![false; n];
    for b in nav.hr.iter().flatten() {
        has_pred[*b] = true;
    }
    let mut mu = vec![0usize; n];
    let mut h: Vec<ArcId> = (0..n).collect();
    let mut seen = vec![false; n];
    let mut comp = Vec::new();
    for start in 0..n {
        if has_pred[start] {
            continue;
        }
        comp.clear();
        let mut x = Some(start);
        while let Some(v) = x {
            seen[v] = true;
            comp.push(v);
            x = nav.hr[v];
        }
        let j = comp.len();
        for (i, &v) in comp.iter().enumerate() {
            let m = k.min(j - 1 - i);
            mu[v] = m;
            h[v] = comp[i + m];
        }
    }
    for start in 0..n {
        if seen[start] {
            continue;
        }
        comp.clear();
        let mut v = start;
        while !seen[v] {
            seen[v] = true;
            comp.push(v);
            v = nav.hr[v].expect("vertices left over lie on H_r cycles");
        }
        let j = comp.len();
        for (i, &v) in comp.iter().enumerate() {
            mu[v] = k;
            h[v] = comp[(i + k) % j];
        }
    }
    (mu, h)
}

/// A nose `A → B` is implied through the hollow `A → H_l(A)`.
fn covered_from(nav: &NavTables, a: ArcId) -> bool {
    nav.hl[a].is_some_and(|h| nav.fl[a] == h)
}

/// A nose `A → B` is implied through the hollow `H_r(B) → B`.
fn covered_to(nav: &NavTables, b: ArcId) -> bool {
    nav.hr[b].is_some_and(|h| nav.fr[b] == h)
}

/// For every `v`, the first `w = H_r^d(v)` with `covered_to(w)` false, and `d`.
fn next_stop(nav: &NavTables) -> Vec<Option<(ArcId, usize)>> {
    let n = nav.n;
    let mut out: Vec<Option<(ArcId, usize)>> = vec![None; n];
    let mut state = vec![0u8; n]; // 0 new, 1 on stack, 2 done
    let mut stack = Vec::new();
    for start in 0..n {
        let mut v = start;
        while state[v] == 0 && covered_to(nav, v) {
            state[v] = 1;
            stack.push(v);
            v = nav.hr[v].expect("covered implies H_r");
        }
        let mut tail = match state[v] {
            // An H_r cycle on which every step is a hollow.
            1 => None,
            2 => out[v],
            _ => {
                state[v] = 2;
                out[v] = Some((v, 0));
                out[v]
            }
        };
        while let Some(u) = stack.pop() {
            tail = tail.map(|(w, d)| (w, d + 1));
            out[u] = tail;
            state[u] = 2;
        }
    }
    out
}

/// `S^k` in linear time in `n` plus the number of kept noses. A nose of
/// order `i < k` is dropped only when it is implied through a hollow and a
/// nose of order `i + 1`; all noses of order `k` are kept.
pub fn build_syn(m: &PcaModel, k: usize) -> Result<SynGraph> {
    check_pre(m, k)?;
    Ok(build_syn_unchecked(m, m.nav(), k))
}

pub(crate) fn build_syn_unchecked(m: &PcaModel, nav: &NavTables, k: usize) -> SynGraph {
    let n = m.len();
    let mut edges = hollows(m, nav);
    let (mu, h) = mu_h(nav, k);
    let stop = next_stop(nav);
    for a in 0..n {
        let src = nav.l(a);
        if mu[a] == k {
            edges.push(SynEdge::nose(src, h[a], k));
        }
        if covered_from(nav, src) {
            continue;
        }
        let (mut v, mut depth) = (a, 0);
        while let Some((w, d)) = stop[v] {
            let i = depth + d;
            if i >= k {
                break;
            }
            edges.push(SynEdge::nose(src, w, i));
            match nav.hr[w] {
                Some(x) => (v, depth) = (x, i + 1),
                None => break,
            }
        }
    }
    edges.extend(line_cut(m, k));
    SynGraph::from_edges(k, n, edges)
}

/// `S^k` with every short nose removed, whether or not the hollow that
/// would imply it exists. This is the graph the drawings are made of; it
/// can miss constraints of the full system (see [`build_syn`]).
pub fn build_syn_literal(m: &PcaModel, k: usize) -> Result<SynGraph> {
    check_pre(m, k)?;
    let nav = m.nav();
    let n = m.len();
    let mut edges = hollows(m, nav);
    let (mu, h) = mu_h(nav, k);
    for a in 0..n {
        let src = nav.l(a);
        if mu[a] == k || nav.hl[src].is_none() {
            edges.push(SynEdge::nose(src, h[a], mu[a]));
        }
    }
    edges.extend(line_cut(m, k));
    Ok(SynGraph::from_edges(k, n, edges))
}

/// `S^k` by starting from `S^0` and promoting noses one order at a time.
pub fn build_syn_incremental(m: &PcaModel, k: usize) -> Result<SynGraph> {
    check_pre(m, k)?;
    let nav = m.nav();
    let n = m.len();
    let mut edges = hollows(m, nav);
    edges.extend((0..n).map(|a| SynEdge::nose(a, nav.r(a), 0)));
    for r in 0..k {
        let mut next = Vec::with_capacity(edges.len());
        for e in edges {
            match e.kind {
                EdgeKind::Nose(i) if i == r => {
                    let keep = !covered_from(nav, e.from) && !covered_to(nav, e.to);
                    if let Some(b) = nav.hr[e.to] {
                        next.push(SynEdge::nose(e.from, b, r + 1));
                    }
                    if keep {
                        next.push(e);
                    }
                }
                _ => next.push(e),
            }
        }
        edges = next;
    }
    edges.extend(line_cut(m, k));
    Ok(SynGraph::from_edges(k, n, edges))
}

/// `S^k_*`: the hollows and every i-nose with `i ≤ k`.
pub fn build_syn_star(m: &PcaModel, k: usize) -> Result<SynGraph> {
    check_pre(m, k)?;
    let nav = m.nav();
    let n = m.len();
    let mut edges = hollows(m, nav);
    for a in 0..n {
        let mut cur = Some(nav.r(a));
        for i in 0..=k {
            let Some(b) = cur else { break };
            edges.push(SynEdge::nose(a, b, i));
            cur = nav.hr[b];
        }
    }
    edges.extend(line_cut(m, k));
    Ok(SynGraph::from_edges(k, n, edges))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct WalkWeights {
    pub bal: i64,
    pub ext: i64,
    /// Number of noses.
    pub mu: usize,
    /// Number of hollows.
    pub eta: usize,
    pub mu_ext: usize,
    pub eta_ext: usize,
}

impl WalkWeights {
    pub fn of_edges<'a>(edges: impl IntoIterator<Item = &'a SynEdge>) -> Self {
        let mut w = WalkWeights::default();
        for e in edges {
            w.bal += e.bal();
            w.ext += e.ext();
            let ext = !e.is_internal();
            if e.is_nose() {
                w.mu += 1;
                w.mu_ext += usize::from(ext);
            } else {
                w.eta += 1;
                w.eta_ext += usize::from(ext);
            }
        }
        w
    }

    /// `Sep_{c,ℓ}(W) = ℓ·Bal + c·Ext + 2μ`.
    pub fn sep(&self, c: i128, ell: i128) -> i128 {
        ell * i128::from(self.bal) + c * i128::from(self.ext) + 2 * self.mu as i128
    }
}

/// Resolves a vertex walk to edges, preferring hollows when both kinds join
/// the same pair.
pub fn walk_edges(g: &SynGraph, w: &[ArcId]) -> Result<Vec<SynEdge>> {
    w.windows(2)
        .map(|p| g.find_edge(p[0], p[1], false).copied().ok_or(Error::NotAWalk(p[0], p[1])))
        .collect()
}

pub fn walk_weights(g: &SynGraph, w: &[ArcId]) -> Result<WalkWeights> {
    Ok(WalkWeights::of_edges(&walk_edges(g, w)?))
}
