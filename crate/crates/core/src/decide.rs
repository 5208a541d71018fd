//! Linear-time decision by greedy cycles, with checkable negative answers.

use serde::{Deserialize, Serialize};

use crate::construct::connectify;
use crate::error::{Error, Result};
use crate::model::{ArcId, PcaModel};
use crate::syngraph::{build_syn, SynEdge, SynGraph, WalkWeights};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Flavor {
    Nose,
    Hollow,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GreedyCycle {
    /// Closed: the first vertex is repeated at the end.
    pub vertices: Vec<ArcId>,
    pub edges: Vec<SynEdge>,
    pub flavor: Flavor,
    pub bal: i64,
    pub ext: i64,
}

fn greedy_step(g: &SynGraph, v: ArcId, flavor: Flavor) -> Option<SynEdge> {
    match flavor {
        Flavor::Nose => g.nose_from(v).or_else(|| g.hollow_from(v)),
        Flavor::Hollow => g.hollow_from(v).or_else(|| g.nose_from(v)),
    }
    .copied()
}

fn cycle_from(edges: Vec<SynEdge>, flavor: Flavor) -> GreedyCycle {
    // Rotate so the smallest vertex comes first.
    let p = (0..edges.len()).min_by_key(|&i| edges[i].from).unwrap_or(0);
    let mut edges = edges;
    edges.rotate_left(p);
    let mut vertices: Vec<ArcId> = edges.iter().map(|e| e.from).collect();
    vertices.push(edges[0].from);
    let w = WalkWeights::of_edges(&edges);
    GreedyCycle { vertices, edges, flavor, bal: w.bal, ext: w.ext }
}

/// The greedy cycle of the given flavor whose Ext sign matches `want`,
/// taking the first start vertex (by id) whose walk reaches one.
pub fn greedy_cycle(g: &SynGraph, flavor: Flavor, want: impl Fn(i64) -> bool) -> Option<GreedyCycle> {
    let n = g.n;
    // cycle_of[v]: index into `cycles` of the cycle reached from v.
    let mut cycle_of: Vec<Option<Option<usize>>> = vec![None; n];
    let mut cycles: Vec<GreedyCycle> = Vec::new();
    let mut on_walk = vec![usize::MAX; n];
    for start in 0..n {
        if cycle_of[start].is_none() {
            let mut path = Vec::new();
            let mut v = start;
            let reached: Option<usize> = loop {
                if let Some(r) = cycle_of[v] {
                    break r;
                }
                if on_walk[v] == start {
                    let pos = path.iter().position(|e: &SynEdge| e.from == v).expect("on walk");
                    cycles.push(cycle_from(path[pos..].to_vec(), flavor));
                    break Some(cycles.len() - 1);
                }
                on_walk[v] = start;
                match greedy_step(g, v, flavor) {
                    Some(e) => {
                        path.push(e);
                        v = e.to;
                    }
                    None => break None,
                }
            };
            for e in &path {
                cycle_of[e.from] = Some(reached);
            }
            cycle_of[v].get_or_insert(reached);
        }
        if let Some(Some(ci)) = cycle_of[start] {
            if want(cycles[ci].ext) {
                return Some(cycles[ci].clone());
            }
        }
    }
    None
}

/// `(G_N, G_H)`: a greedy nose cycle with Ext < 0 and a greedy hollow cycle
/// with Ext > 0 (the latter absent when no such cycle exists).
pub fn greedy_cycles(g: &SynGraph) -> Result<(GreedyCycle, Option<GreedyCycle>)> {
    let gn = greedy_cycle(g, Flavor::Nose, |e| e < 0).ok_or(Error::NotFound("nose"))?;
    let gh = greedy_cycle(g, Flavor::Hollow, |e| e > 0);
    Ok((gn, gh))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NegCert {
    pub k: usize,
    pub g_hollow: Vec<ArcId>,
    pub g_nose: Vec<ArcId>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Decision {
    /// `connectified` is set when bridging arcs were inserted first.
    Yes { connectified: bool },
    No { cert: NegCert, connectified: bool },
}

impl Decision {
    pub fn is_yes(&self) -> bool {
        matches!(self, Decision::Yes { .. })
    }
}

/// The model the synthetic graph is built on: `m` itself, or `m` with
/// bridging arcs when it is disconnected.
pub(crate) fn working_model(m: &PcaModel) -> (PcaModel, bool) {
    if m.is_connected() {
        (m.clone(), false)
    } else {
        (connectify(m).0, true)
    }
}

pub fn decide(m: &PcaModel, k: usize) -> Result<Decision> {
    m.check_k(k)?;
    if k == 0 || m.is_pig() {
        return Ok(Decision::Yes { connectified: false });
    }
    let (w, connectified) = working_model(m);
    let g = build_syn(&w, k)?;
    let (gn, gh) = greedy_cycles(&g)?;
    let Some(gh) = gh else {
        return Ok(Decision::Yes { connectified });
    };
    let mut on_n = vec![false; w.len()];
    for &v in &gn.vertices {
        on_n[v] = true;
    }
    if gh.vertices.iter().any(|&v| on_n[v]) {
        Ok(Decision::Yes { connectified })
    } else {
        let cert = NegCert { k, g_hollow: gh.vertices, g_nose: gn.vertices };
        Ok(Decision::No { cert, connectified })
    }
}

fn cycle_ext(g: &SynGraph, vs: &[ArcId], flavor: Flavor) -> std::result::Result<i64, String> {
    if vs.len() < 2 || vs.first() != vs.last() {
        return Err("vertex sequence is not closed".into());
    }
    let body = &vs[..vs.len() - 1];
    let mut seen = vec![false; g.n];
    for &v in body {
        if v >= g.n {
            return Err(format!("vertex {v} out of range"));
        }
        if std::mem::replace(&mut seen[v], true) {
            return Err(format!("vertex {v} repeats"));
        }
    }
    let mut ext = 0;
    for p in vs.windows(2) {
        let e = g
            .find_edge(p[0], p[1], flavor == Flavor::Nose)
            .ok_or_else(|| format!("no edge {} -> {}", p[0], p[1]))?;
        ext += e.ext();
    }
    Ok(ext)
}

/// Checks a negative certificate against a freshly built `S^k`.
pub fn authenticate_negative_reason(m: &PcaModel, cert: &NegCert) -> std::result::Result<(), String> {
    m.check_k(cert.k).map_err(|e| e.to_string())?;
    if cert.k == 0 {
        return Err("k must be positive".into());
    }
    let (w, _) = working_model(m);
    let g = build_syn(&w, cert.k).map_err(|e| e.to_string())?;
    let eh = cycle_ext(&g, &cert.g_hollow, Flavor::Hollow)?;
    let en = cycle_ext(&g, &cert.g_nose, Flavor::Nose)?;
    if eh <= 0 {
        return Err(format!("hollow cycle has Ext {eh}"));
    }
    if en >= 0 {
        return Err(format!("nose cycle has Ext {en}"));
    }
    if cert.g_hollow.iter().any(|v| cert.g_nose.contains(v)) {
        return Err("cycles share a vertex".into());
    }
    Ok(())
}

pub fn authenticate_negative(m: &PcaModel, cert: &NegCert) -> bool {
    authenticate_negative_reason(m, cert).is_ok()
}
