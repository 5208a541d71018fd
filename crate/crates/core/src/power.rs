//! Power models, the equivalence test and the represented digraphs.

use serde::Serialize;

use crate::error::Result;
use crate::model::{modc, ArcId, Coord, PcaModel};

/// A point `base + eps·ε` for a symbolic infinitesimal ε.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct EpsPoint {
    pub base: Coord,
    pub eps: u32,
}

impl EpsPoint {
    pub fn int(base: Coord) -> Self {
        EpsPoint { base, eps: 0 }
    }
}

/// Read access shared by integer models and power models.
pub trait ArcFamily {
    fn circle(&self) -> Coord;
    fn n(&self) -> usize;
    fn start(&self, i: ArcId) -> Coord;
    fn end(&self, i: ArcId) -> EpsPoint;

    /// Open-arc membership under the ε order.
    fn contains(&self, i: ArcId, p: EpsPoint) -> bool {
        let c = self.circle();
        let s = self.start(i);
        let t = self.end(i);
        let off_p = (modc(p.base - s, c), p.eps);
        let off_t = (modc(t.base - s, c), t.eps);
        off_p > (0, 0) && off_p < off_t
    }

    /// Labeled extremes read clockwise from the beginning of the initial arc.
    /// Extremes lying between point 0 and that beginning are read last.
    fn word(&self) -> Vec<(ArcId, bool)> {
        let c = self.circle();
        let cut = if self.n() == 0 { 0 } else { self.start(0) };
        let key = |p: EpsPoint| EpsPoint { base: modc(p.base - cut, c), eps: p.eps };
        let n = self.n();
        let starts: Vec<(EpsPoint, ArcId, bool)> =
            (0..n).map(|i| (key(EpsPoint::int(self.start(i))), i, false)).collect();
        let mut ends: Vec<(EpsPoint, ArcId, bool)> = (0..n).map(|i| (key(self.end(i)), i, true)).collect();
        // Proper families keep ends in the cyclic order of the starts, so a
        // rotation and a merge suffice; anything else is sorted outright.
        if let Some(lo) = (0..n).min_by_key(|&i| ends[i]) {
            ends.rotate_left(lo);
        }
        let sorted = |v: &[(EpsPoint, ArcId, bool)]| v.windows(2).all(|w| w[0] < w[1]);
        if !sorted(&starts) || !sorted(&ends) {
            let mut pts = starts;
            pts.extend(ends);
            pts.sort_unstable();
            return pts.into_iter().map(|(_, i, e)| (i, e)).collect();
        }
        let mut out = Vec::with_capacity(2 * n);
        let (mut i, mut j) = (0, 0);
        while i < n || j < n {
            let take_start = j == n || (i < n && starts[i] < ends[j]);
            let p = if take_start { &mut i } else { &mut j };
            let (_, id, e) = if take_start { starts[*p] } else { ends[*p] };
            *p += 1;
            out.push((id, e));
        }
        out
    }
}

impl ArcFamily for PcaModel {
    fn circle(&self) -> Coord {
        PcaModel::circle(self)
    }
    fn n(&self) -> usize {
        self.len()
    }
    fn start(&self, i: ArcId) -> Coord {
        self.arc(i).s
    }
    fn end(&self, i: ArcId) -> EpsPoint {
        EpsPoint::int(self.arc(i).t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerModel {
    pub k: usize,
    pub circle: Coord,
    pub arcs: Vec<(Coord, EpsPoint)>,
}

impl ArcFamily for PowerModel {
    fn circle(&self) -> Coord {
        self.circle
    }
    fn n(&self) -> usize {
        self.arcs.len()
    }
    fn start(&self, i: ArcId) -> Coord {
        self.arcs[i].0
    }
    fn end(&self, i: ArcId) -> EpsPoint {
        self.arcs[i].1
    }
}

/// `A^k = (s(A), s(F_r^k(A)) + (x+1)ε)` for every arc.
pub fn power(m: &PcaModel, k: usize) -> Result<PowerModel> {
    m.check_k(k)?;
    let n = m.len();
    let nav = m.nav();
    let frk = nav.fr_pow(k);
    let arcs = (0..n)
        .map(|a| {
            let s = m.arc(a).s;
            // Rank of A in the run of arcs sharing its target. Where every
            // earlier member of the run contains s(A) this is the count of
            // such arcs; where F_r^k saturates it keeps the ends distinct.
            // A target inside its own run ends last, so the run starts after it.
            let mut x = 0u32;
            let mut b = a;
            for _ in 1..n {
                b = m.l(b);
                if frk[b] != frk[a] || b == frk[a] {
                    break;
                }
                x += 1;
            }
            (s, EpsPoint { base: m.arc(frk[a]).s, eps: x + 1 })
        })
        .collect();
    Ok(PowerModel { k, circle: m.circle(), arcs })
}

/// Same size and the same labeled circular word read from point 0.
pub fn equivalent(a: &impl ArcFamily, b: &impl ArcFamily) -> bool {
    a.n() == b.n() && a.word() == b.word()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    pub n: usize,
    pub adj: Vec<Vec<usize>>,
}

impl Digraph {
    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }
}

/// Edge `A → B` iff `A ≠ B` and `s(B) ∈ A`.
pub fn digraph(f: &impl ArcFamily) -> Digraph {
    let n = f.n();
    let adj = (0..n)
        .map(|a| {
            let mut out: Vec<usize> = (0..n)
                .filter(|&b| b != a && f.contains(a, EpsPoint::int(f.start(b))))
                .collect();
            out.sort_unstable();
            out
        })
        .collect();
    Digraph { n, adj }
}
