//! Seeded random models.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{Circle, Coord, PcaModel};

const MAX_ATTEMPTS: u32 = 1000;

/// A proper model with `n` arcs and even coordinates. With `spca` the model
/// has an external arc; without it, none.
pub fn gen_random(n: usize, spca: bool, seed: u64) -> Result<PcaModel> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        if let Some(m) = attempt(n, spca, &mut rng) {
            return Ok(m);
        }
    }
    Err(Error::GiveUp(MAX_ATTEMPTS))
}

fn attempt(n: usize, spca: bool, rng: &mut ChaCha8Rng) -> Option<PcaModel> {
    if n == 0 {
        return None;
    }
    let gmax: i64 = rng.gen_range(1..=4);
    let gaps: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=gmax)).collect();
    let total: i64 = gaps.iter().sum();
    let depth: i64 = rng.gen_range(1..=4);
    let base = (depth * (total / n as i64).max(1)).max(1);
    let jitter = rng.gen_range(0..=base / 2);
    // Units: beginnings at 2s, ends at odd 2(s+len)+1, circle 2·total.
    let circle = 2 * total;
    let mut s = 0i64;
    let mut prev_t = i64::MIN;
    let mut arcs = Vec::with_capacity(n);
    for &g in &gaps {
        let len = (base + rng.gen_range(-jitter..=jitter)).max(1);
        let mut t = 2 * (s + len) + 1;
        if t <= prev_t {
            t = prev_t + 2;
        }
        if t - 2 * s >= circle {
            return None;
        }
        prev_t = t;
        arcs.push((2 * s, t));
        s += g;
    }
    // Scale by 4: beginnings ≡ 0, ends ≡ 4 (mod 8); points ≡ 2 (mod 8) are free.
    let c = 4 * circle as Coord;
    let arcs: Vec<(Coord, Coord)> =
        arcs.iter().map(|&(s, t)| (4 * s as Coord, (4 * t as Coord).rem_euclid(c))).collect();
    let m = PcaModel::new(Circle::Finite(c), arcs).ok()?;
    let free: Vec<Coord> = (0..c).step_by(8).map(|p| p + 2).collect();
    let covered = |p: Coord| (0..m.len()).any(|i| m.contains_point(i, p));
    let mut pick: Vec<Coord> = free.into_iter().filter(|&p| covered(p) == spca).collect();
    if pick.is_empty() && !spca {
        // Points just past an end; always present after the last arc.
        pick = (6..c).step_by(8).filter(|&p| !covered(p)).collect();
    }
    if pick.is_empty() {
        return None;
    }
    let p = pick[rng.gen_range(0..pick.len())];
    let out = m.rotate(-p).ok()?;
    if out.is_pig() == spca {
        return None;
    }
    if spca {
        Some(out)
    } else {
        PcaModel::new(Circle::Pig, out.arcs().iter().map(|a| (a.s, a.t))).ok()
    }
}

/// A uniform model, hence 1-multiplicative, with external arcs and every
/// arc meeting the next: beginnings `4·Σgaps`, length `4·L + 2`.
pub fn gen_uca(n: usize, seed: u64) -> PcaModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gaps: Vec<Coord> = (0..n).map(|_| rng.gen_range(1..=3)).collect();
    let total: Coord = gaps.iter().sum();
    let c = 4 * total;
    let len: Coord = 4 * 5 + 2;
    let mut s: Coord = 0;
    let mut arcs = Vec::with_capacity(n);
    for g in gaps {
        arcs.push((4 * s, (4 * s + len).rem_euclid(c)));
        s += g;
    }
    PcaModel::new(Circle::Finite(c), arcs).expect("uniform arcs with distinct extremes are proper")
}
