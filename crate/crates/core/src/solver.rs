//! Longest-path Bellman-Ford over difference constraints and the fixed
//! parameter problem.

use std::fmt;
use std::ops::Add;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ArcId, Circle, Coord, PcaModel};
use crate::syngraph::{build_syn, EdgeKind, SynEdge, SynGraph};

/// Weights for max-plus path problems.
pub trait PathWeight: Copy + Ord + Add<Output = Self> {
    fn zero() -> Self;
}

impl PathWeight for i128 {
    fn zero() -> Self {
        0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WEdge<W> {
    pub from: usize,
    pub to: usize,
    pub w: W,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BfOutcome<W> {
    /// Longest distances; `None` marks vertices unreachable from the source.
    Dist(Vec<Option<W>>),
    /// Edge indices of a positive cycle, in walk order.
    PositiveCycle(Vec<usize>),
}

pub fn bellman_ford_longest<W: PathWeight>(n: usize, edges: &[WEdge<W>], src: usize) -> BfOutcome<W> {
    let mut dist: Vec<Option<W>> = vec![None; n];
    let mut pred = vec![usize::MAX; n];
    dist[src] = Some(W::zero());
    let mut last = None;
    for _ in 0..n {
        last = None;
        for (i, e) in edges.iter().enumerate() {
            let Some(du) = dist[e.from] else { continue };
            let cand = du + e.w;
            if dist[e.to].is_none_or(|dv| cand > dv) {
                dist[e.to] = Some(cand);
                pred[e.to] = i;
                last = Some(e.to);
            }
        }
        if last.is_none() {
            return BfOutcome::Dist(dist);
        }
    }
    // Still relaxing after n rounds: walk back n steps to land on the cycle.
    let mut x = last.expect("relaxation happened");
    for _ in 0..n {
        x = edges[pred[x]].from;
    }
    let start = x;
    let mut cyc = Vec::new();
    loop {
        let e = pred[x];
        cyc.push(e);
        x = edges[e].from;
        if x == start {
            break;
        }
    }
    cyc.reverse();
    BfOutcome::PositiveCycle(cyc)
}

pub fn sep_edges(g: &SynGraph, c: i128, ell: i128) -> Vec<WEdge<i128>> {
    g.edges.iter().map(|e| WEdge { from: e.from, to: e.to, w: e.sep(c, ell) }).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Constraint {
    pub edge: SynEdge,
    pub weight: i128,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InfeasibleCycle {
    pub cycle: Vec<ArcId>,
    pub weight: i128,
    pub constraints: Vec<Constraint>,
}

fn render(e: &SynEdge, c: i128, ell: i128) -> String {
    match e.kind {
        EdgeKind::Hollow => {
            // attract: s(to) >= s(from) - ℓ + c[to >= from]
            let wrap = i128::from(e.to >= e.from);
            format!("s(A{}) >= s(A{}) - {} + {}", e.to, e.from, ell, c * wrap)
        }
        EdgeKind::Nose(i) => {
            let wrap = i128::from(e.from >= e.to);
            format!(
                "s(A{}) >= s(A{}) + {}*{} + 2 - {}",
                e.to, e.from, i, ell, c * wrap
            )
        }
    }
}

impl fmt::Display for InfeasibleCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for con in &self.constraints {
            writeln!(f, "{}", con.text)?;
        }
        write!(f, "sum: 0 >= {}", self.weight)
    }
}

/// Renders a positive cycle as its family of inequalities.
pub fn certificate_from_cycle(cy: &[SynEdge], c: i128, ell: i128) -> Result<InfeasibleCycle> {
    let weight: i128 = cy.iter().map(|e| e.sep(c, ell)).sum();
    if cy.is_empty() || weight <= 0 {
        return Err(Error::NotPositive(weight));
    }
    let mut cycle: Vec<ArcId> = cy.iter().map(|e| e.from).collect();
    cycle.push(cy[0].from);
    let constraints = cy
        .iter()
        .map(|e| Constraint { edge: *e, weight: e.sep(c, ell), text: render(e, c, ell) })
        .collect();
    Ok(InfeasibleCycle { cycle, weight, constraints })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Feasible { model: PcaModel, dist: Vec<i128>, parity_warning: bool },
    Infeasible { cert: InfeasibleCycle, parity_warning: bool },
}

/// Builds the `(c, ℓ+1)`-CA model with beginning points `s`.
pub fn model_from_starts(s: &[Coord], c: Coord, ell: Coord) -> Result<PcaModel> {
    let len = ell.checked_add(1).ok_or(Error::Overflow)?;
    PcaModel::new(
        Circle::Finite(c),
        s.iter().map(|&x| (x.rem_euclid(c), (x + len).rem_euclid(c))),
    )
}

/// Decides the system `S^k_{c,ℓ}` and returns a model or a positive cycle.
pub fn solve_fixed(m: &PcaModel, k: usize, c: i128, ell: i128) -> Result<SolveOutcome> {
    if k == 0 {
        return Err(Error::InvalidParams("k must be positive".into()));
    }
    if c < 2 || ell < 2 {
        return Err(Error::InvalidParams(format!("need c, ell >= 2, got c={c} ell={ell}")));
    }
    let parity_warning = c % 2 != 0 || ell % 2 != 0;
    let g = build_syn(m, k)?;
    let edges = sep_edges(&g, c, ell);
    match bellman_ford_longest(g.n, &edges, 0) {
        BfOutcome::Dist(d) => {
            let dist: Vec<i128> = d
                .into_iter()
                .map(|x| x.ok_or_else(|| Error::InternalVerificationFailed("unreachable arc".into())))
                .collect::<Result<_>>()?;
            let model = model_from_starts(&dist, c, ell)
                .map_err(|e| Error::InternalVerificationFailed(e.to_string()))?;
            Ok(SolveOutcome::Feasible { model, dist, parity_warning })
        }
        BfOutcome::PositiveCycle(idx) => {
            let cy: Vec<SynEdge> = idx.iter().map(|&i| g.edges[i]).collect();
            let cert = certificate_from_cycle(&cy, c, ell)?;
            Ok(SolveOutcome::Infeasible { cert, parity_warning })
        }
    }
}
