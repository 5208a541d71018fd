//! Construction of a k-multiplicative model for yes-instances.

use std::ops::Add;

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::decide::{decide, greedy_cycles, Decision};
use crate::error::{Error, Result};
use crate::model::{ArcId, Circle, Coord, PcaModel};
use crate::oracle::verify_k_multiplicative;
use crate::solver::{model_from_starts, PathWeight};
use crate::syngraph::{build_syn, SynEdge, SynGraph};

pub type Rational = Ratio<i128>;

/// `(Bal + r·Ext, Ext)`, compared lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LexValue {
    pub len: Rational,
    pub ext: i64,
}

impl Add for LexValue {
    type Output = LexValue;
    fn add(self, o: LexValue) -> LexValue {
        LexValue { len: self.len + o.len, ext: self.ext + o.ext }
    }
}

impl PathWeight for LexValue {
    fn zero() -> Self {
        LexValue { len: Rational::zero(), ext: 0 }
    }
}

pub fn lex(e: &SynEdge, r: Rational) -> LexValue {
    let ext = e.ext();
    LexValue { len: Rational::from(i128::from(e.bal())) + r * i128::from(ext), ext }
}

/// `-Bal/Ext` of a walk with nonzero Ext.
pub fn ratio_of(bal: i64, ext: i64) -> Rational {
    Rational::new(-i128::from(bal), i128::from(ext))
}

/// Inserts one bridging arc in every gap, leaving the line cut of a PIG
/// model alone.
/// Coordinates are renumbered by rank, which keeps the extreme order.
pub fn connectify(m: &PcaModel) -> (PcaModel, Vec<ArcId>) {
    let gaps = m.gap_ids();
    if gaps.is_empty() {
        return (m.clone(), Vec::new());
    }
    let n = m.len();
    let mut ext: Vec<Coord> = m.arcs().iter().flat_map(|a| [a.s, a.t]).collect();
    ext.sort_unstable();
    let pos = |x: Coord| 4 * ext.binary_search(&x).expect("extreme") as Coord + 2;
    let mut arcs: Vec<(Coord, Coord, bool)> =
        m.arcs().iter().map(|a| (pos(a.s), pos(a.t), false)).collect();
    for &a in &gaps {
        let right = m.arc(m.r(a));
        arcs.push((pos(m.arc(a).t) - 1, pos(right.s) + 1, true));
    }
    arcs.sort_unstable();
    let inserted: Vec<ArcId> = (0..arcs.len()).filter(|&i| arcs[i].2).collect();
    let circle = if m.is_pig_line() {
        Circle::Pig
    } else {
        Circle::Finite(8 * n as Coord)
    };
    let out = PcaModel::new(circle, arcs.iter().map(|&(s, t, _)| (s, t)))
        .expect("bridging arcs keep the model proper");
    (out, inserted)
}

/// `(Ratio^k, RATIO^k)`, with `None` standing for +∞.
pub fn ratios(g: &SynGraph) -> Result<(Rational, Option<Rational>)> {
    let (gn, gh) = greedy_cycles(g)?;
    let lo = ratio_of(gn.bal, gn.ext);
    let hi = gh.map(|c| ratio_of(c.bal, c.ext));
    Ok((lo, hi))
}

/// Longest `Lex` distances from `A_0`, via greedy nose path, anti-hollow
/// predecessors and a spanning forest.
pub fn lex_distances(g: &SynGraph, r: Rational) -> Result<Vec<LexValue>> {
    let n = g.n;
    // Greedy nose path from A_0: position φ and prefix sums α.
    let mut phi = vec![n + 1; n];
    let mut alpha: Vec<Option<LexValue>> = vec![None; n];
    let mut v = 0;
    let mut acc = LexValue::zero();
    for i in 0..n {
        if phi[v] != n + 1 {
            break;
        }
        phi[v] = i;
        alpha[v] = Some(acc);
        let Some(e) = g.nose_from(v).or_else(|| g.hollow_from(v)) else { break };
        acc = acc + lex(e, r);
        v = e.to;
    }
    // x(A): the hollow into A if there is one, else the nose into A.
    let mut parent: Vec<Option<SynEdge>> = vec![None; n];
    for e in &g.edges {
        let slot = &mut parent[e.to];
        if slot.is_none_or(|p| p.is_nose() && !e.is_nose()) {
            *slot = Some(*e);
        }
    }
    // Break every cycle of the parent graph at its minimum (φ, id).
    let mut state = vec![0u8; n];
    for s in 0..n {
        let mut path = Vec::new();
        let mut x = s;
        while state[x] == 0 {
            state[x] = 1;
            path.push(x);
            match parent[x] {
                Some(e) => x = e.from,
                None => break,
            }
        }
        if state[x] == 1 {
            if let Some(p) = path.iter().position(|&y| y == x) {
                let cyc = &path[p..];
                let cut = *cyc.iter().min_by_key(|&&y| (phi[y], y)).expect("cycle");
                parent[cut] = None;
            }
        }
        for y in path {
            state[y] = 2;
        }
    }
    let mut children = vec![Vec::new(); n];
    let mut roots = Vec::new();
    for a in 0..n {
        match parent[a] {
            Some(e) => children[e.from].push(e),
            None => roots.push(a),
        }
    }
    let mut psi: Vec<Option<LexValue>> = vec![None; n];
    let mut stack = Vec::new();
    for &rt in &roots {
        psi[rt] = alpha[rt];
        stack.push(rt);
        while let Some(u) = stack.pop() {
            for e in &children[u] {
                let via = psi[u].map(|d| d + lex(e, r));
                psi[e.to] = via.max(alpha[e.to]);
                stack.push(e.to);
            }
        }
    }
    let psi: Vec<LexValue> = psi.into_iter().collect::<Option<_>>().ok_or(Error::PreconditionViolated)?;
    // A genuine longest-path labeling is a fixpoint of every edge.
    if psi[0] != LexValue::zero() || g.edges.iter().any(|e| psi[e.to] < psi[e.from] + lex(e, r)) {
        return Err(Error::PreconditionViolated);
    }
    Ok(psi)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedGraph {
    pub n: usize,
    pub edges: Vec<SynEdge>,
    /// A topological order of the vertices.
    pub topo: Vec<ArcId>,
}

/// Keeps the tight edges; they must form a DAG.
pub fn reduced_graph(g: &SynGraph, dist: &[LexValue], r: Rational) -> Result<ReducedGraph> {
    let n = g.n;
    let edges: Vec<SynEdge> = g
        .edges
        .iter()
        .filter(|e| dist[e.to] == dist[e.from] + lex(e, r))
        .copied()
        .collect();
    let mut indeg = vec![0usize; n];
    let mut adj = vec![Vec::new(); n];
    for e in &edges {
        indeg[e.to] += 1;
        adj[e.from].push(e.to);
    }
    let mut stack: Vec<ArcId> = (0..n).rev().filter(|&v| indeg[v] == 0).collect();
    let mut topo = Vec::with_capacity(n);
    while let Some(v) = stack.pop() {
        topo.push(v);
        for &w in &adj[v] {
            indeg[w] -= 1;
            if indeg[w] == 0 {
                stack.push(w);
            }
        }
    }
    if topo.len() < n {
        return Err(Error::CycleInReduced);
    }
    Ok(ReducedGraph { n, edges, topo })
}

impl ReducedGraph {
    /// Longest `Sep_{c,ℓ}` distances from `A_0`.
    pub fn longest(&self, c: i128, ell: i128) -> Result<Vec<i128>> {
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e.from].push(*e);
        }
        let mut dist: Vec<Option<i128>> = vec![None; self.n];
        dist[0] = Some(0);
        for &v in &self.topo {
            let Some(dv) = dist[v] else { continue };
            for e in &adj[v] {
                let cand = dv + e.sep(c, ell);
                if dist[e.to].is_none_or(|d| cand > d) {
                    dist[e.to] = Some(cand);
                }
            }
        }
        dist.into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::InternalVerificationFailed("arc unreachable in R^k".into()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RatioJson {
    pub num: i128,
    pub den: i128,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sidecar {
    pub c: i128,
    pub ell: i128,
    pub ratio: RatioJson,
    pub scaled_by: i128,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Construction {
    pub model: PcaModel,
    pub c: i128,
    pub ell: i128,
    pub ratio: Rational,
    pub ratio_hi: Option<Rational>,
    pub scaled_by: i128,
    /// Beginning points of the working model, bridging arcs included.
    pub working: PcaModel,
    pub inserted: Vec<ArcId>,
    pub reduced: ReducedGraph,
    pub starts: Vec<i128>,
}

impl Construction {
    pub fn sidecar(&self) -> Sidecar {
        Sidecar {
            c: self.c,
            ell: self.ell,
            ratio: RatioJson { num: *self.ratio.numer(), den: *self.ratio.denom() },
            scaled_by: self.scaled_by,
        }
    }
}

/// `ℓ = d(4n)³` and `c = ℓ·r + 4nd` with `d` the denominator of `r`.
pub fn scaled_params(n: usize, r: Rational) -> Result<(i128, i128, i128)> {
    let d = *r.denom();
    let e = 4 * n as i128;
    let cube = e.checked_mul(e).and_then(|x| x.checked_mul(e)).ok_or(Error::Overflow)?;
    let ell = d.checked_mul(cube).ok_or(Error::Overflow)?;
    let c = r
        .numer()
        .checked_mul(cube)
        .and_then(|x| x.checked_add(e.checked_mul(d)?))
        .ok_or(Error::Overflow)?;
    Ok((c, ell, d))
}

pub fn construct(m: &PcaModel, k: usize) -> Result<Construction> {
    if k == 0 {
        return Err(Error::InvalidParams("k must be positive".into()));
    }
    m.check_k(k)?;
    if let Decision::No { .. } = decide(m, k)? {
        return Err(Error::NotMultiplicative);
    }
    let (w, inserted) = connectify(m);
    let g = build_syn(&w, k)?;
    let (r, hi) = ratios(&g)?;
    if !r.is_positive() {
        return Err(Error::InternalVerificationFailed(format!("nonpositive ratio {r}")));
    }
    let psi = lex_distances(&g, r)?;
    let reduced = reduced_graph(&g, &psi, r)?;
    let (mut c, ell, d) = scaled_params(w.len(), r)?;
    let starts = reduced.longest(c, ell)?;
    let mut s: Vec<i128> = (0..w.len()).filter(|i| !inserted.contains(i)).map(|i| starts[i]).collect();
    if m.is_pig() && !inserted.is_empty() {
        c = respace(m, &mut s, c, ell, k)?;
    }
    let model = model_from_starts(&s, c, ell)
        .map_err(|e| Error::InternalVerificationFailed(e.to_string()))?;
    verify_k_multiplicative(&model, m, k).map_err(|f| Error::InternalVerificationFailed(f.to_string()))?;
    Ok(Construction { model, c, ell, ratio: r, ratio_hi: hi, scaled_by: d, working: w, inserted, reduced, starts })
}

/// Moves the components of a disconnected PIG model apart so that no
/// multiple up to `k` reaches across a gap, and widens the circle so that
/// none wraps.
fn respace(m: &PcaModel, s: &mut [i128], c: i128, ell: i128, k: usize) -> Result<i128> {
    let reach = (k as i128).checked_mul(ell).and_then(|x| x.checked_add(2)).ok_or(Error::Overflow)?;
    let mut shift = 0i128;
    let orig: Vec<i128> = s.to_vec();
    for a in 1..m.len() {
        if !m.intersects(a - 1, a) {
            let gap = orig[a] - orig[a - 1];
            if gap < reach {
                let mut need = reach - gap;
                need += need & 1;
                shift += need;
            }
        }
        s[a] = orig[a] + shift;
    }
    let last = *s.iter().max().expect("nonempty");
    let mut need = last.checked_add(reach).ok_or(Error::Overflow)?;
    need += need & 1;
    Ok(c.max(need))
}
