//! Constant-time distance queries from the beginning points of a
//! k-multiplicative uniform model.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{ArcId, PcaModel};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LabelSet {
    pub c: i128,
    pub ell: i128,
    pub k: usize,
    pub labels: Vec<i128>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Distance {
    Zero,
    Within(usize),
    MoreThanK,
}

pub fn make_labels(u: &PcaModel, k: usize) -> Result<LabelSet> {
    let len = u.uniform_length().ok_or(Error::NotUniform)?;
    Ok(LabelSet {
        c: u.circle(),
        ell: len - 1,
        k,
        labels: u.arcs().iter().map(|a| a.s).collect(),
    })
}

impl LabelSet {
    /// Least `i ≤ k` with `s(B)` inside `(s(A), s(A) + iℓ + 1)`.
    pub fn query(&self, a: ArcId, b: ArcId) -> Distance {
        query_labels(self.labels[a], self.labels[b], self.c, self.ell, self.k)
    }
}

pub fn query_distance(ls: &LabelSet, a: ArcId, b: ArcId) -> Distance {
    ls.query(a, b)
}

/// Distance class from two labels alone.
pub fn query_labels(sa: i128, sb: i128, c: i128, ell: i128, k: usize) -> Distance {
    if sa == sb {
        return Distance::Zero;
    }
    let gap = (sb - sa).rem_euclid(c);
    if ell <= 0 {
        return Distance::MoreThanK;
    }
    // gap < iℓ + 1  ⟺  i ≥ ⌈gap / ℓ⌉
    let i = (gap + ell - 1) / ell;
    if i <= k as i128 {
        Distance::Within(i.max(1) as usize)
    } else {
        Distance::MoreThanK
    }
}
