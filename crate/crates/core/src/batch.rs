//! Corpus-level evaluation. Models are independent, so the work is mapped
//! over a rayon pool when the `parallel` feature is on, and over a plain
//! iterator otherwise.

use serde::Serialize;

use crate::construct::{construct, ratios};
use crate::decide::{authenticate_negative, decide, working_model, Decision};
use crate::error::Result;
use crate::model::PcaModel;
use crate::solver::{bellman_ford_longest, sep_edges, BfOutcome};
use crate::syngraph::build_syn;

pub fn map_sequential<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_parallel<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

/// Parallel when the `parallel` feature is enabled.
pub fn map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
    #[cfg(feature = "parallel")]
    {
        map_parallel(items, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_sequential(items, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseReport {
    pub n: usize,
    pub k: usize,
    pub yes: bool,
    /// Yes: the construction verified. No: the certificate authenticated.
    pub certified: bool,
    pub detail: Option<String>,
}

/// Decides, then certifies the answer either way.
pub fn evaluate(m: &PcaModel, k: usize) -> Result<CaseReport> {
    let n = m.len();
    match decide(m, k)? {
        Decision::Yes { .. } => {
            let (certified, detail) = match construct(m, k) {
                Ok(_) => (true, None),
                Err(e) => (false, Some(e.to_string())),
            };
            Ok(CaseReport { n, k, yes: true, certified, detail })
        }
        Decision::No { cert, .. } => {
            let ok = authenticate_negative(m, &cert);
            let (w, _) = working_model(m);
            let g = build_syn(&w, k)?;
            let (lo, hi) = ratios(&g)?;
            let ordered = hi.is_some_and(|hi| lo >= hi);
            let detail = (!ordered).then(|| format!("ratios {lo} vs {hi:?}"));
            Ok(CaseReport { n, k, yes: false, certified: ok && ordered, detail })
        }
    }
}

/// Every `k` in `1..ω` for every model.
pub fn evaluate_corpus(models: &[PcaModel], parallel: bool) -> Vec<Result<CaseReport>> {
    let f = |m: &PcaModel| -> Vec<Result<CaseReport>> {
        (1..m.omega()).map(|k| evaluate(m, k)).collect()
    };
    let nested = if parallel { map(models, f) } else { map_sequential(models, f) };
    nested.into_iter().flatten().collect()
}

/// First `(c, ℓ)` in the grid for which `S^k_{c,ℓ}` is feasible.
pub fn grid_feasible(m: &PcaModel, k: usize, grid: &[(i128, i128)]) -> Result<Option<(i128, i128)>> {
    let g = build_syn(m, k)?;
    let hits = map(grid, |&(c, ell)| {
        let edges = sep_edges(&g, c, ell);
        matches!(bellman_ford_longest(g.n, &edges, 0), BfOutcome::Dist(_))
    });
    Ok(grid.iter().zip(hits).find(|(_, h)| *h).map(|(p, _)| *p))
}
