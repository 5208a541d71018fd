//! Proper circular-arc models and their navigation tables.
//!
//! Arcs are open, extremes are pairwise distinct integers, and arcs are kept
//! sorted by beginning point so that the position of an arc is its id.

use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};

pub type Coord = i128;
pub type ArcId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Circle {
    Finite(Coord),
    /// The real line, stored as a finite circle on which no arc wraps.
    Pig,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Arc {
    pub s: Coord,
    pub t: Coord,
}

impl Arc {
    pub fn is_external(&self) -> bool {
        self.t < self.s
    }
}

#[derive(Clone)]
pub struct PcaModel {
    c: Coord,
    pig: bool,
    arcs: Vec<Arc>,
    nav: OnceLock<NavTables>,
    omega: OnceLock<usize>,
}

impl PartialEq for PcaModel {
    fn eq(&self, other: &Self) -> bool {
        (self.c, self.pig, &self.arcs) == (other.c, other.pig, &other.arcs)
    }
}

impl Eq for PcaModel {}

impl fmt::Debug for PcaModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PcaModel").field("c", &self.c).field("pig", &self.pig).field("arcs", &self.arcs).finish()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub is_pig: bool,
    pub is_spca: bool,
    pub is_connected: bool,
    pub is_saturated: bool,
}

pub(crate) fn modc(x: Coord, c: Coord) -> Coord {
    x.rem_euclid(c)
}

impl PcaModel {
    /// Validates an unsorted arc list and assigns ids by beginning point.
    pub fn new(circle: Circle, arcs: impl IntoIterator<Item = (Coord, Coord)>) -> Result<Self> {
        let mut arcs: Vec<Arc> = arcs.into_iter().map(|(s, t)| Arc { s, t }).collect();
        if arcs.is_empty() {
            return Err(Error::Empty);
        }
        let (c, pig) = match circle {
            Circle::Finite(c) => {
                if c < 2 {
                    return Err(Error::BadCircle(c));
                }
                (c, false)
            }
            Circle::Pig => {
                let max = arcs.iter().map(|a| a.s.max(a.t)).max().unwrap_or(0);
                (max.checked_add(1).ok_or(Error::Overflow)?, true)
            }
        };
        for a in &arcs {
            for v in [a.s, a.t] {
                if v < 0 || v >= c {
                    return Err(Error::OutOfRange { value: v, circle: c });
                }
            }
            if pig && a.is_external() {
                return Err(Error::ExternalArcInPig(a.s, a.t));
            }
        }
        let mut ext: Vec<Coord> = arcs.iter().flat_map(|a| [a.s, a.t]).collect();
        ext.sort_unstable();
        if let Some(w) = ext.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateExtreme(w[0]));
        }
        arcs.sort_unstable_by_key(|a| a.s);
        let m = PcaModel { c, pig, arcs, nav: OnceLock::new(), omega: OnceLock::new() };
        // Any inclusion forces an inclusion between cyclically consecutive arcs.
        let n = m.len();
        if n > 1 {
            for i in 0..n {
                let j = m.r(i);
                if m.contains_arc(i, j) {
                    return Err(Error::NotProper { outer: m.pair(i), inner: m.pair(j) });
                }
            }
        }
        Ok(m)
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn circle(&self) -> Coord {
        self.c
    }

    pub fn circle_kind(&self) -> Circle {
        if self.pig {
            Circle::Pig
        } else {
            Circle::Finite(self.c)
        }
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc(&self, i: ArcId) -> Arc {
        self.arcs[i]
    }

    pub fn pair(&self, i: ArcId) -> (Coord, Coord) {
        (self.arcs[i].s, self.arcs[i].t)
    }

    pub fn l(&self, i: ArcId) -> ArcId {
        if i == 0 {
            self.len() - 1
        } else {
            i - 1
        }
    }

    pub fn r(&self, i: ArcId) -> ArcId {
        if i + 1 == self.len() {
            0
        } else {
            i + 1
        }
    }

    /// Clockwise length of an arc.
    pub fn arc_len(&self, i: ArcId) -> Coord {
        modc(self.arcs[i].t - self.arcs[i].s, self.c)
    }

    /// Open-arc membership of an integer point.
    pub fn contains_point(&self, i: ArcId, p: Coord) -> bool {
        let a = self.arcs[i];
        let off = modc(p - a.s, self.c);
        off > 0 && off < modc(a.t - a.s, self.c)
    }

    /// True when arc `inner` is a proper subset of arc `outer`.
    pub fn contains_arc(&self, outer: ArcId, inner: ArcId) -> bool {
        if outer == inner {
            return false;
        }
        let o = self.arcs[outer];
        let a = self.arcs[inner];
        let os = modc(a.s - o.s, self.c);
        let ot = modc(a.t - o.s, self.c);
        0 < os && os < ot && ot < modc(o.t - o.s, self.c)
    }

    pub fn intersects(&self, a: ArcId, b: ArcId) -> bool {
        a == b || self.contains_point(a, self.arcs[b].s) || self.contains_point(b, self.arcs[a].s)
    }

    /// No arc is external.
    pub fn is_pig(&self) -> bool {
        self.arcs.iter().all(|a| !a.is_external())
    }

    /// True when the model was declared on the line (`circle pig`).
    pub fn is_pig_line(&self) -> bool {
        self.pig
    }

    /// Arcs `A` with `F_r(A) = A`: the point just after `t(A)` lies in no arc.
    pub fn gaps(&self) -> Vec<ArcId> {
        let nav = self.nav();
        (0..self.len()).filter(|&a| nav.fr[a] == a).collect()
    }

    /// Gaps that must be bridged: all of them, except the cut of the line
    /// after the last arc of a PIG model.
    pub(crate) fn gap_ids(&self) -> Vec<ArcId> {
        let last = self.len() - 1;
        let pig = self.is_pig();
        self.gaps().into_iter().filter(|&a| !(pig && a == last)).collect()
    }

    /// Every point is covered by an arc, up to the line cut of a PIG model.
    pub fn is_connected(&self) -> bool {
        self.gap_ids().is_empty()
    }

    pub fn is_saturated(&self) -> bool {
        let nav = self.nav();
        (0..self.len()).all(|i| nav.fl[i] != i)
    }

    pub fn classify(&self) -> Classification {
        let is_pig = self.is_pig();
        Classification {
            is_pig,
            is_spca: !is_pig,
            is_connected: self.is_connected(),
            is_saturated: self.is_saturated(),
        }
    }

    /// Common length `ℓ + 1` of all arcs, if there is one.
    pub fn uniform_length(&self) -> Option<Coord> {
        let first = self.arc_len(0);
        (1..self.len()).all(|i| self.arc_len(i) == first).then_some(first)
    }

    /// Built on first use and kept with the model.
    pub fn nav(&self) -> &NavTables {
        self.nav.get_or_init(|| NavTables::build(self))
    }

    /// Smallest ω > 1 such that `A^ω ⊂ A` for some arc; `n` for PIG models.
    pub fn omega(&self) -> usize {
        *self.omega.get_or_init(|| self.compute_omega())
    }

    fn compute_omega(&self) -> usize {
        let n = self.len();
        if self.is_pig() {
            return n;
        }
        let nav = self.nav();
        if (0..n).any(|a| nav.fr[a] == a) {
            return 2;
        }
        // A^j ⊂ A exactly when the unrolled F_r chain has advanced a full lap.
        let step: Vec<u64> = (0..n).map(|a| ((nav.fr[a] + n - a) % n) as u64).collect();
        let mut up = vec![nav.fr.clone()];
        let mut adv = vec![step];
        let lap = n as u64;
        while (1usize << (up.len() - 1)) <= n {
            let (pu, pa) = (up.last().unwrap(), adv.last().unwrap());
            let nu: Vec<usize> = (0..n).map(|a| pu[pu[a]]).collect();
            let na: Vec<u64> = (0..n).map(|a| (pa[a] + pa[pu[a]]).min(2 * lap)).collect();
            up.push(nu);
            adv.push(na);
        }
        let mut best = usize::MAX;
        for a in 0..n {
            let (mut pos, mut total, mut j) = (a, 0u64, 0usize);
            for p in (0..up.len()).rev() {
                if total + adv[p][pos] < lap {
                    total += adv[p][pos];
                    pos = up[p][pos];
                    j += 1 << p;
                }
            }
            best = best.min(j + 1);
        }
        best.max(2)
    }

    /// Rejects `k ≥ ω`.
    pub fn check_k(&self, k: usize) -> Result<usize> {
        let omega = self.omega();
        if k >= omega {
            return Err(Error::KTooLarge { k, omega });
        }
        Ok(omega)
    }

    /// The i-multiple of a model whose arcs all have length `ℓ + 1`.
    pub fn multiply(&self, i: usize) -> Result<PcaModel> {
        let len = self.uniform_length().ok_or(Error::NotUniform)?;
        let ell = len - 1;
        let reach = (i as Coord)
            .checked_mul(ell)
            .and_then(|x| x.checked_add(1))
            .ok_or(Error::Overflow)?;
        let arcs = self.arcs.iter().map(|a| {
            if self.pig {
                (a.s, a.s + reach)
            } else {
                (a.s, modc(a.s + reach, self.c))
            }
        });
        PcaModel::new(self.circle_kind(), arcs).map_err(|e| Error::ExtremeCollision(e.to_string()))
    }

    /// `(c, ℓ)` becomes `(2c, 2ℓ + 1)` with the same extreme order.
    pub fn to_even(&self) -> PcaModel {
        let circle = if self.pig { Circle::Pig } else { Circle::Finite(2 * self.c) };
        PcaModel::new(circle, self.arcs.iter().map(|a| (2 * a.s, 2 * a.t + 1)))
            .expect("doubling preserves validity")
    }

    /// λ copies around a circle of length λc, with the map back to `(id, copy)`.
    pub fn unroll(&self, lambda: usize) -> Result<(PcaModel, Vec<(ArcId, usize)>)> {
        if self.is_pig() {
            return Err(Error::PigInput);
        }
        if lambda == 0 {
            return Err(Error::InvalidParams("lambda must be at least 1".into()));
        }
        let c = self.c;
        let big = c.checked_mul(lambda as Coord).ok_or(Error::Overflow)?;
        let mut arcs = Vec::with_capacity(self.len() * lambda);
        let mut map = Vec::with_capacity(self.len() * lambda);
        for i in 0..lambda {
            let i = i as Coord;
            for (id, a) in self.arcs.iter().enumerate() {
                let wrap = Coord::from(a.s > a.t);
                arcs.push((a.s + i * c, modc(a.t + c * (i + wrap), big)));
                map.push((id, i as usize));
            }
        }
        let m = PcaModel::new(Circle::Finite(big), arcs)?;
        Ok((m, map))
    }

    /// Same model with coordinates shifted clockwise by `delta`, re-sorted.
    pub fn rotate(&self, delta: Coord) -> Result<PcaModel> {
        let c = self.c;
        PcaModel::new(
            Circle::Finite(c),
            self.arcs.iter().map(|a| (modc(a.s + delta, c), modc(a.t + delta, c))),
        )
    }
}

/// Per-arc navigation: `L`, `R`, `F_l`, `F_r`, `H_l`, `H_r` and the sizes of
/// `N⁻[A]` and `N⁺[A]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NavTables {
    pub n: usize,
    pub fr: Vec<ArcId>,
    pub fl: Vec<ArcId>,
    pub hr: Vec<Option<ArcId>>,
    pub hl: Vec<Option<ArcId>>,
    /// `|N⁺[A]|`, counting `A`; the run is `A, R(A), ..., F_r(A)`.
    pub nplus: Vec<usize>,
    /// `|N⁻[A]|`, counting `A`; the run is `F_l(A), ..., L(A), A`.
    pub nminus: Vec<usize>,
}

impl NavTables {
    fn build(m: &PcaModel) -> Self {
        let n = m.len();
        let mut nplus = vec![1usize; n];
        let mut nminus = vec![1usize; n];

        // Two pointers: the unrolled index of F_r never decreases with A.
        let mut j = 0usize;
        for i in 0..n {
            j = j.max(i);
            while j + 1 < i + n && m.contains_point(i, m.arcs[(j + 1) % n].s) {
                j += 1;
            }
            nplus[i] = j - i + 1;
        }
        let ni = n as isize;
        let mut p = ni - 1;
        for i in (0..n).rev() {
            let ii = i as isize;
            p = p.min(ii);
            while p - 1 > ii - ni && m.contains_point(i, m.arcs[(p - 1).rem_euclid(ni) as usize].t) {
                p -= 1;
            }
            nminus[i] = (ii - p + 1) as usize;
        }

        let fr: Vec<ArcId> = (0..n).map(|i| (i + nplus[i] - 1) % n).collect();
        let fl: Vec<ArcId> = (0..n).map(|i| (i + n - (nminus[i] - 1)) % n).collect();

        let hl = unique_candidates(n, |a| {
            let b = fr[a];
            (fr[m.r(a)] != b).then_some(b)
        });
        let hr = unique_candidates(n, |a| {
            let b = fl[a];
            (fl[m.l(a)] != b).then_some(b)
        });
        NavTables { n, fr, fl, hr, hl, nplus, nminus }
    }

    pub fn l(&self, i: ArcId) -> ArcId {
        (i + self.n - 1) % self.n
    }

    pub fn r(&self, i: ArcId) -> ArcId {
        (i + 1) % self.n
    }

    /// `F_r^k` for every arc, by repeated squaring.
    pub fn fr_pow(&self, k: usize) -> Vec<ArcId> {
        pow_map(&self.fr, k)
    }

    /// `H_r^i(a)`, or `None` as soon as the chain hits ⊥.
    pub fn hr_pow(&self, a: ArcId, i: usize) -> Option<ArcId> {
        let mut x = a;
        for _ in 0..i {
            x = self.hr[x]?;
        }
        Some(x)
    }

    pub fn hl_pow(&self, a: ArcId, i: usize) -> Option<ArcId> {
        let mut x = a;
        for _ in 0..i {
            x = self.hl[x]?;
        }
        Some(x)
    }
}

/// For each arc `a` proposing target `f(a)`, the map target → the single
/// proposer, or ⊥ when there is none or more than one.
fn unique_candidates(n: usize, f: impl Fn(ArcId) -> Option<ArcId>) -> Vec<Option<ArcId>> {
    let mut out: Vec<Option<ArcId>> = vec![None; n];
    let mut count = vec![0u8; n];
    for a in 0..n {
        if let Some(b) = f(a) {
            count[b] = count[b].saturating_add(1);
            out[b] = Some(a);
        }
    }
    for b in 0..n {
        if count[b] != 1 {
            out[b] = None;
        }
    }
    out
}

pub(crate) fn pow_map(f: &[usize], mut k: usize) -> Vec<usize> {
    let n = f.len();
    let mut result: Vec<usize> = (0..n).collect();
    let mut base = f.to_vec();
    while k > 0 {
        if k & 1 == 1 {
            result = result.iter().map(|&x| base[x]).collect();
        }
        k >>= 1;
        if k > 0 {
            base = base.iter().map(|&x| base[x]).collect();
        }
    }
    result
}

/// Connectivity-independent helper used by tests: navigation by the literal
/// definitions in quadratic time.
pub fn nav_brute(m: &PcaModel) -> NavTables {
    let n = m.len();
    let mut nplus = vec![1; n];
    let mut nminus = vec![1; n];
    for i in 0..n {
        let mut j = 1;
        while j < n && m.contains_point(i, m.arcs[(i + j) % n].s) {
            j += 1;
        }
        nplus[i] = j;
        let mut j = 1;
        while j < n && m.contains_point(i, m.arcs[(i + n - j) % n].t) {
            j += 1;
        }
        nminus[i] = j;
    }
    let fr: Vec<ArcId> = (0..n).map(|i| (i + nplus[i] - 1) % n).collect();
    let fl: Vec<ArcId> = (0..n).map(|i| (i + n - (nminus[i] - 1)) % n).collect();
    let pick = |cond: &dyn Fn(ArcId, ArcId) -> bool| -> Vec<Option<ArcId>> {
        (0..n)
            .map(|b| {
                let c: Vec<ArcId> = (0..n).filter(|&a| cond(a, b)).collect();
                (c.len() == 1).then(|| c[0])
            })
            .collect()
    };
    let hl = pick(&|a, b| fr[a] == b && fr[m.r(a)] != b);
    let hr = pick(&|a, b| fl[a] == b && fl[m.l(a)] != b);
    NavTables { n, fr, fl, hr, hl, nplus, nminus }
}
