//! Row and column geometry of synthetic graphs and the planarity checker.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ArcId, PcaModel};
use crate::syngraph::{build_syn_literal, EdgeKind, SynEdge};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EdgeClass {
    External,
    Forward,
    Backward,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DrawingGeom {
    pub row: Vec<usize>,
    pub col0: Vec<usize>,
    pub rows: usize,
    pub cols: usize,
}

/// Row of every arc: one pass in id order.
pub fn rows(m: &PcaModel) -> Vec<usize> {
    let nav = m.nav();
    let n = m.len();
    let mut row = vec![0usize; n];
    for a in 1..n {
        let b = nav.fl[a];
        row[a] = if b < a && nav.hr[b] == Some(a) { row[b] + 1 } else { row[a - 1] };
    }
    row
}

fn rightmost(row: &[usize], a: ArcId) -> bool {
    a + 1 == row.len() || row[a + 1] != row[a]
}

fn classify_with(row: &[usize], e: &SynEdge) -> EdgeClass {
    if !e.is_internal() {
        EdgeClass::External
    } else if e.is_nose() && rightmost(row, e.from) {
        EdgeClass::Backward
    } else {
        EdgeClass::Forward
    }
}

/// Forward edges of `S^{ω-1}_*`, walking each `H_r` chain only while it
/// stays internal.
fn backbone(m: &PcaModel, row: &[usize]) -> Vec<(ArcId, ArcId)> {
    let nav = m.nav();
    let n = m.len();
    let top = m.omega().saturating_sub(1);
    let mut out = Vec::new();
    for a in 0..n {
        let f = nav.fl[a];
        if f != a && nav.fr[f] == a && f < a {
            out.push((a, f));
        }
        if rightmost(row, a) {
            continue;
        }
        let mut cur = nav.r(a);
        for _ in 0..=top {
            if cur <= a {
                break;
            }
            out.push((a, cur));
            match nav.hr[cur] {
                Some(b) if b > cur => cur = b,
                _ => break,
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

pub fn rows_cols(m: &PcaModel) -> Result<DrawingGeom> {
    if !m.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = m.len();
    let row = rows(m);
    let edges = backbone(m, &row);
    let mut indeg = vec![0usize; n];
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in &edges {
        adj[a].push(b);
        indeg[b] += 1;
    }
    let mut col0 = vec![0usize; n];
    let mut stack: Vec<ArcId> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut done = 0;
    while let Some(v) = stack.pop() {
        done += 1;
        for &w in &adj[v] {
            col0[w] = col0[w].max(col0[v] + 1);
            indeg[w] -= 1;
            if indeg[w] == 0 {
                stack.push(w);
            }
        }
    }
    if done < n {
        return Err(Error::CyclicBackbone);
    }
    let rows = 1 + row.iter().max().copied().unwrap_or(0);
    let cols = 1 + col0.iter().max().copied().unwrap_or(0);
    Ok(DrawingGeom { row, col0, rows, cols })
}

impl DrawingGeom {
    pub fn classify(&self, e: &SynEdge) -> EdgeClass {
        classify_with(&self.row, e)
    }

    /// `Row(to) - Row(from)`, internal edges only.
    pub fn jump(&self, e: &SynEdge) -> Option<i64> {
        e.is_internal().then(|| self.row[e.to] as i64 - self.row[e.from] as i64)
    }

    /// Sum of jumps, defined only when every edge is internal.
    pub fn walk_jump(&self, w: &[SynEdge]) -> Option<i64> {
        w.iter().map(|e| self.jump(e)).sum()
    }

    pub fn pos(&self, a: ArcId, copy: usize) -> (i128, i128) {
        ((copy * self.cols + self.col0[a]) as i128, self.row[a] as i128)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Segment {
    pub x1: i128,
    pub y1: i128,
    pub x2: i128,
    pub y2: i128,
    pub class: EdgeClass,
    pub kind: EdgeKind,
    pub copy: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Drawing {
    pub geom: DrawingGeom,
    pub segments: Vec<Segment>,
    /// Index pairs of segments meeting at a point that is not a common endpoint.
    pub crossings: Vec<(usize, usize)>,
}

/// Straight arrows for the internal edges of the literal `S^k` in `p` copies.
pub fn drawing_arrows(m: &PcaModel, k: usize, p: usize) -> Result<Drawing> {
    if p == 0 {
        return Err(Error::InvalidParams("copies must be at least 1".into()));
    }
    let geom = rows_cols(m)?;
    let g = build_syn_literal(m, k)?;
    let mut segments = Vec::new();
    for e in &g.edges {
        let class = geom.classify(e);
        if class == EdgeClass::External {
            continue;
        }
        for i in 0..p {
            let (x1, y1) = geom.pos(e.from, i);
            let j = if class == EdgeClass::Backward { i + 1 } else { i };
            let (x2, y2) = geom.pos(e.to, j);
            segments.push(Segment { x1, y1, x2, y2, class, kind: e.kind, copy: i });
        }
    }
    let crossings = find_crossings(&segments);
    Ok(Drawing { geom, segments, crossings })
}

type Pt = (i128, i128);

fn orient(a: Pt, b: Pt, c: Pt) -> i128 {
    ((b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)).signum()
}

fn on_segment(p: Pt, a: Pt, b: Pt) -> bool {
    orient(a, b, p) == 0
        && p.0 >= a.0.min(b.0)
        && p.0 <= a.0.max(b.0)
        && p.1 >= a.1.min(b.1)
        && p.1 <= a.1.max(b.1)
}

/// Whether two closed segments share a point other than a common endpoint.
pub fn segments_cross(s: (Pt, Pt), t: (Pt, Pt)) -> bool {
    let (a, b) = s;
    let (c, d) = t;
    let d1 = orient(c, d, a);
    let d2 = orient(c, d, b);
    let d3 = orient(a, b, c);
    let d4 = orient(a, b, d);
    if d1 * d2 < 0 && d3 * d4 < 0 {
        return true;
    }
    if d1 == 0 && d2 == 0 && d3 == 0 && d4 == 0 {
        // Collinear: overlapping in more than one point is a crossing.
        let key = |p: Pt| if a.0 != b.0 || c.0 != d.0 { p.0 } else { p.1 };
        let lo = key(a).min(key(b)).max(key(c).min(key(d)));
        let hi = key(a).max(key(b)).min(key(c).max(key(d)));
        if lo < hi {
            return true;
        }
    }
    let shared = |p: Pt| (p == a || p == b) && (p == c || p == d);
    [a, b].iter().any(|&p| on_segment(p, c, d) && !shared(p))
        || [c, d].iter().any(|&p| on_segment(p, a, b) && !shared(p))
}

pub fn find_crossings(segments: &[Segment]) -> Vec<(usize, usize)> {
    let pts: Vec<(Pt, Pt)> = segments.iter().map(|s| ((s.x1, s.y1), (s.x2, s.y2))).collect();
    let mut out = Vec::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if segments_cross(pts[i], pts[j]) {
                out.push((i, j));
            }
        }
    }
    out
}
