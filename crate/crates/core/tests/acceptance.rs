//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Runs as a plain binary (`harness = false`).

use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use kmult::batch::map;
use kmult::construct::{connectify, ratio_of, ratios, Rational};
use kmult::decide::{authenticate_negative, greedy_cycles, Decision};
use kmult::drawing::{drawing_arrows, rows_cols, EdgeClass};
use kmult::fixtures::{e5, power_cycle};
use kmult::gen::{gen_random, gen_uca};
use kmult::labeling::{make_labels, Distance};
use kmult::oracle::{
    collapse, crossing_cycles_check, digraph_distances, enumerate_cycles, full_constraint_graph,
    verify_k_multiplicative,
};
use kmult::power::digraph;
use kmult::solver::{bellman_ford_longest, sep_edges, solve_fixed, BfOutcome, SolveOutcome};
use kmult::syngraph::walk_weights;
use kmult::*;

type Check = std::result::Result<String, String>;

/// Draws models with `n` in `lo..=hi` until `count` pass `keep`.
fn corpus(count: usize, lo: usize, hi: usize, spca: Option<bool>, seed0: u64, keep: impl Fn(&PcaModel) -> bool) -> Vec<PcaModel> {
    let mut out = Vec::with_capacity(count);
    let mut seed = seed0;
    while out.len() < count {
        let n = lo + (seed as usize % (hi - lo + 1));
        let pig_coin = spca.unwrap_or(!seed.is_multiple_of(3));
        if let Ok(m) = gen_random(n, pig_coin, seed) {
            if keep(&m) {
                out.push(m);
            }
        }
        seed += 1;
    }
    out
}

fn first_err(results: Vec<std::result::Result<usize, String>>) -> std::result::Result<usize, String> {
    let mut total = 0;
    for r in results {
        total += r?;
    }
    Ok(total)
}

fn canonical(n: usize, edges: &[kmult::solver::WEdge<i128>]) -> Option<Vec<Option<i128>>> {
    match bellman_ford_longest(n, edges, 0) {
        BfOutcome::Dist(d) => Some(d),
        BfOutcome::PositiveCycle(_) => None,
    }
}

fn c1_system_equivalence() -> Check {
    let start = Instant::now();
    let models = corpus(200, 1, 10, None, 1_000, PcaModel::is_connected);
    let grid: Vec<(i128, i128)> =
        (1..=20).flat_map(|c| (1..=20).map(move |l| (2 * c as i128, 2 * l as i128))).collect();
    let res = map(&models, |m| {
        let n = m.len();
        let mut cases = 0;
        for k in 0..m.omega() {
            let mut g = build_syn(m, k).map_err(|e| e.to_string())?;
            if k == 0 {
                // F^0 has no attracts; S^0 carries the 1-hollows on top.
                g = kmult::SynGraph::from_edges(0, n, g.edges.iter().filter(|e| e.is_nose()).copied().collect());
            }
            // Weights are affine in (c, ℓ): keep the structure, reweigh per point.
            let full: Vec<_> = full_constraint_graph(m, k, 0, 0).map_err(|e| e.to_string())?;
            for &(c, ell) in &grid {
                let fw = full.iter().map(|e| {
                    let w = match e.kind {
                        kmult::oracle::ConstraintKind::Attract(i) => {
                            -(i as i128) * ell + c * i128::from(e.to >= e.from)
                        }
                        kmult::oracle::ConstraintKind::Repel(i) => {
                            i as i128 * ell + 2 - c * i128::from(e.from >= e.to)
                        }
                    };
                    (e.from, e.to, w)
                });
                let a = canonical(n, &sep_edges(&g, c, ell));
                let b = canonical(n, &collapse(n, fw));
                if a != b {
                    return Err(format!("{} k={k} c={c} l={ell}: S {:?} vs F {:?}", io::serialize_model(m).replace('\n', " "), a, b));
                }
                cases += 1;
            }
        }
        Ok(cases)
    });
    let cases = first_err(res)?;
    let t = start.elapsed();
    if t > Duration::from_secs(60) {
        return Err(format!("{cases} cases took {t:?}"));
    }
    Ok(format!("{} models, {cases} (k,c,l) cases, {t:.2?}", models.len()))
}

struct YesCase {
    n: usize,
    out: kmult::construct::Construction,
    k: usize,
}

fn decision_corpus() -> Vec<PcaModel> {
    corpus(500, 1, 12, Some(true), 50_000, |_| true)
}

fn c2_decision() -> (Check, Vec<YesCase>) {
    let start = Instant::now();
    let models = decision_corpus();
    let res = map(&models, |m| -> std::result::Result<(usize, usize, Vec<YesCase>), String> {
        let mut yes = Vec::new();
        let mut no = 0;
        let label = io::serialize_model(m).replace('\n', " ");
        for k in 1..m.omega() {
            match decide(m, k).map_err(|e| format!("{label} k={k}: {e}"))? {
                Decision::Yes { .. } => {
                    let out = construct(m, k).map_err(|e| format!("{label} k={k}: {e}"))?;
                    verify_k_multiplicative(&out.model, m, k).map_err(|e| format!("{label} k={k}: {e}"))?;
                    if !equivalent(&out.model, m) {
                        return Err(format!("{label} k={k}: not equivalent"));
                    }
                    yes.push(YesCase { n: out.working.len(), out, k });
                }
                Decision::No { cert, .. } => {
                    no += 1;
                    if !authenticate_negative(m, &cert) {
                        return Err(format!("{label} k={k}: certificate rejected"));
                    }
                    let g = build_syn(&connectify(m).0, k).map_err(|e| e.to_string())?;
                    let (lo, hi) = ratios(&g).map_err(|e| e.to_string())?;
                    if hi.is_none_or(|hi| lo < hi) {
                        return Err(format!("{label} k={k}: Ratio {lo} < RATIO {hi:?}"));
                    }
                    if crossing_cycles_check(&g).map_err(|e| e.to_string())? {
                        return Err(format!("{label} k={k}: every cycle pair crosses"));
                    }
                }
            }
        }
        Ok((yes.len(), no, yes))
    });
    let mut all_yes = Vec::new();
    let (mut ny, mut nn) = (0, 0);
    for r in res {
        match r {
            Ok((y, n, cases)) => {
                ny += y;
                nn += n;
                all_yes.extend(cases);
            }
            Err(e) => return (Err(e), all_yes),
        }
    }
    let t = start.elapsed();
    if t > Duration::from_secs(120) {
        return (Err(format!("took {t:?}")), all_yes);
    }
    (Ok(format!("{} models, {ny} yes, {nn} no, {t:.2?}", models.len())), all_yes)
}

fn c3_parameters(cases: &[YesCase]) -> Check {
    if cases.is_empty() {
        return Err("no yes-instances".into());
    }
    for YesCase { n, out, k } in cases {
        let e = 4 * *n as i128;
        let d = *out.ratio.denom();
        let ell = d * e * e * e;
        let c = out.ratio * Rational::from_integer(ell) + Rational::from_integer(e * d);
        let ctx = format!("n={n} k={k}");
        if out.ell != ell || Rational::from_integer(out.c) != c || out.scaled_by != d {
            return Err(format!("{ctx}: got (c,l)=({}, {}), want ({c}, {ell})", out.c, out.ell));
        }
        if out.c % 2 != 0 || out.ell % 2 != 0 {
            return Err(format!("{ctx}: odd parameters"));
        }
        let red = &out.reduced;
        let mut pos = vec![usize::MAX; red.n];
        for (i, &v) in red.topo.iter().enumerate() {
            pos[v] = i;
        }
        if red.topo.len() != red.n || red.edges.iter().any(|e| pos[e.from] >= pos[e.to]) {
            return Err(format!("{ctx}: reduced graph not topologically ordered"));
        }
        let g = build_syn(&out.working, *k).map_err(|e| e.to_string())?;
        let bf = canonical(g.n, &sep_edges(&g, out.c, out.ell)).ok_or(format!("{ctx}: S^k infeasible"))?;
        let dag = red.longest(out.c, out.ell).map_err(|e| e.to_string())?;
        if bf.iter().zip(&dag).any(|(a, b)| *a != Some(*b)) {
            return Err(format!("{ctx}: DAG {dag:?} vs BF {bf:?}"));
        }
    }
    Ok(format!("{} yes-instances", cases.len()))
}

fn random_walk_check(m: &PcaModel, k: usize, rng: &mut ChaCha8Rng, walks: usize) -> std::result::Result<(), String> {
    let geom = rows_cols(m).map_err(|e| e.to_string())?;
    let star = build_syn_star(m, k).map_err(|e| e.to_string())?;
    for e in &star.edges {
        let want = match (geom.classify(e), e.order()) {
            (EdgeClass::External, _) => continue,
            (_, None) => -1,
            (EdgeClass::Forward, Some(i)) => i as i64,
            (EdgeClass::Backward, Some(i)) => i as i64 + 1,
        };
        if geom.jump(e) != Some(want) {
            return Err(format!("edge {e:?}: jump {:?}, want {want}", geom.jump(e)));
        }
    }
    let internal: Vec<Vec<SynEdge>> =
        (0..m.len()).map(|v| star.out_edges(v).filter(|e| e.is_internal()).copied().collect()).collect();
    for _ in 0..walks {
        let mut v = rng.gen_range(0..m.len());
        let len = rng.gen_range(0..=2 * m.len());
        let mut walk = Vec::new();
        for _ in 0..len {
            let out = &internal[v];
            if out.is_empty() {
                break;
            }
            let e = out[rng.gen_range(0..out.len())];
            walk.push(e);
            v = e.to;
        }
        let w = kmult::syngraph::WalkWeights::of_edges(&walk);
        let mu_b = walk.iter().filter(|e| geom.classify(e) == EdgeClass::Backward).count() as i64;
        if geom.walk_jump(&walk) != Some(w.bal + mu_b) {
            return Err(format!("walk {walk:?}: jump {:?} vs bal {} + {mu_b}", geom.walk_jump(&walk), w.bal));
        }
    }
    Ok(())
}

fn c4_geometry() -> Check {
    let models = corpus(300, 3, 12, Some(true), 200_000, |m| m.is_connected() && m.is_saturated());
    let res = map(&models, |m| -> std::result::Result<usize, String> {
        let label = io::serialize_model(m).replace('\n', " ");
        let mut rng = ChaCha8Rng::seed_from_u64(m.len() as u64 * 7919 + m.circle() as u64);
        rows_cols(m).map_err(|e| format!("{label}: {e}"))?;
        let mut walks = 0;
        for k in 0..m.omega() {
            let per = 1000usize.div_ceil(m.omega());
            random_walk_check(m, k, &mut rng, per).map_err(|e| format!("{label} k={k}: {e}"))?;
            walks += per;
            if k >= 1 {
                for p in 1..=4 {
                    let d = drawing_arrows(m, k, p).map_err(|e| format!("{label}: {e}"))?;
                    if !d.crossings.is_empty() {
                        return Err(format!("{label} k={k} p={p}: crossings {:?}", d.crossings));
                    }
                }
            }
        }
        Ok(walks)
    });
    let walks = first_err(res)?;
    Ok(format!("{} models, {walks} walks", models.len()))
}

fn c5_incremental() -> Check {
    let mut models = corpus(300, 1, 12, None, 400_000, PcaModel::is_connected);
    models.extend(decision_corpus().into_iter().filter(PcaModel::is_connected));
    let res = map(&models, |m| -> std::result::Result<usize, String> {
        for k in 0..m.omega() {
            let a = build_syn(m, k).map_err(|e| e.to_string())?;
            let b = build_syn_incremental(m, k).map_err(|e| e.to_string())?;
            if a != b {
                return Err(format!("{} k={k}", io::serialize_model(m).replace('\n', " ")));
            }
        }
        Ok(m.omega())
    });
    let cases = first_err(res)?;
    Ok(format!("{} models, {cases} graphs", models.len()))
}

fn c6_ratio_extremality() -> Check {
    let models = corpus(300, 1, 8, Some(true), 600_000, PcaModel::is_connected);
    let res = map(&models, |m| -> std::result::Result<usize, String> {
        let label = io::serialize_model(m).replace('\n', " ");
        for k in 1..m.omega() {
            let g = build_syn(m, k).map_err(|e| e.to_string())?;
            let (lo, hi) = ratios(&g).map_err(|e| format!("{label}: {e}"))?;
            let cycles = enumerate_cycles(&g).map_err(|e| e.to_string())?;
            let best_neg = cycles.iter().filter(|c| c.ext < 0).map(|c| ratio_of(c.bal, c.ext)).max();
            let best_pos = cycles.iter().filter(|c| c.ext > 0).map(|c| ratio_of(c.bal, c.ext)).min();
            if best_neg != Some(lo) || best_pos != hi {
                return Err(format!("{label} k={k}: greedy ({lo}, {hi:?}) vs enumerated ({best_neg:?}, {best_pos:?})"));
            }
        }
        Ok(m.omega() - 1)
    });
    let cases = first_err(res)?;
    Ok(format!("{} models, {cases} graphs", models.len()))
}

fn c7_power_cycle() -> Check {
    let start = Instant::now();
    let m = power_cycle(9, 2);
    if m.omega() != 5 {
        return Err(format!("omega {}", m.omega()));
    }
    verify_k_multiplicative(&m, &m, 4).map_err(|e| e.to_string())?;
    for k in 1..=4 {
        if !decide(&m, k).map_err(|e| e.to_string())?.is_yes() {
            return Err(format!("decide No at k={k}"));
        }
    }
    let ls = make_labels(&m, 4).map_err(|e| e.to_string())?;
    let d = digraph(&m);
    for a in 0..m.len() {
        let dist = digraph_distances(&d, a);
        for b in 0..m.len() {
            let want = match dist[b] {
                Some(0) => Distance::Zero,
                Some(x) if x <= 4 => Distance::Within(x),
                _ => Distance::MoreThanK,
            };
            if ls.query(a, b) != want {
                return Err(format!("query({a},{b}) = {:?}, want {want:?}", ls.query(a, b)));
            }
        }
    }
    let t = start.elapsed();
    if t > Duration::from_secs(1) {
        return Err(format!("took {t:?}"));
    }
    Ok(format!("omega 5, 81 queries, {t:.2?}"))
}

fn c8_e5() -> Check {
    let m = e5();
    let g = build_syn(&m, 1).map_err(|e| e.to_string())?;
    let (lo, hi) = ratios(&g).map_err(|e| e.to_string())?;
    if (lo, hi) != (Rational::new(5, 2), Some(Rational::from_integer(5))) {
        return Err(format!("ratios ({lo}, {hi:?})"));
    }
    let (gn, gh) = greedy_cycles(&g).map_err(|e| e.to_string())?;
    let gh = gh.ok_or("no hollow cycle")?;
    if gn.vertices != [0, 2, 4, 1, 3, 0] || gh.vertices != [0, 4, 3, 2, 1, 0] || gn.ext != -2 || gh.ext != 1 {
        return Err(format!("greedy cycles {:?} / {:?}", gn.vertices, gh.vertices));
    }
    let wn = walk_weights(&g, &gn.vertices).map_err(|e| e.to_string())?;
    if wn.sep(12, 4) != 6 {
        return Err(format!("nose cycle Sep {}", wn.sep(12, 4)));
    }
    match solve_fixed(&m, 1, 12, 4).map_err(|e| e.to_string())? {
        SolveOutcome::Infeasible { cert, .. } if cert.weight == 6 => {}
        other => return Err(format!("solve(12,4): {other:?}")),
    }
    match solve_fixed(&m, 1, 16, 4).map_err(|e| e.to_string())? {
        SolveOutcome::Feasible { model, .. } => verify_k_multiplicative(&model, &m, 1).map_err(|e| e.to_string())?,
        other => return Err(format!("solve(16,4): {other:?}")),
    }
    let out = construct(&m, 1).map_err(|e| e.to_string())?;
    if (out.c, out.ell) != (40040, 16000) {
        return Err(format!("construct gave ({}, {})", out.c, out.ell));
    }
    verify_k_multiplicative(&out.model, &m, 1).map_err(|e| e.to_string())?;
    Ok("ratios (5/2, 5), cycles, (12,4) weight 6, (16,4) feasible, (40040, 16000)".into())
}

fn timed(n: usize) -> std::result::Result<Duration, String> {
    let m = gen_uca(n, 9);
    let mut best = Duration::MAX;
    for _ in 0..3 {
        let t = Instant::now();
        if !decide(&m, 1).map_err(|e| e.to_string())?.is_yes() {
            return Err(format!("n={n}: decide No on a uniform model"));
        }
        construct(&m, 1).map_err(|e| format!("n={n}: {e}"))?;
        best = best.min(t.elapsed());
    }
    Ok(best)
}

fn c9_performance() -> Check {
    let t1 = timed(100_000)?;
    let t2 = timed(200_000)?;
    let ratio = t2.as_secs_f64() / t1.as_secs_f64();
    let line = format!("n=1e5 {t1:.2?}, n=2e5 {t2:.2?}, ratio {ratio:.2}");
    if t1 > Duration::from_secs(2) || ratio > 2.5 {
        return Err(line);
    }
    Ok(line)
}

fn c10_readme() -> Check {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../README.md");
    let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    let lower = text.to_lowercase();
    let needles = ["derived fixtures", "not reproducible"];
    match needles.iter().find(|s| !lower.contains(*s)) {
        Some(s) => Err(format!("README lacks \"{s}\"")),
        None => Ok("README documents the fixture substitution".into()),
    }
}

fn main() -> ExitCode {
    let mut failed = 0;
    let mut report = |name: &str, r: Check| {
        match r {
            Ok(s) => println!("PASS {name}: {s}"),
            Err(s) => {
                failed += 1;
                println!("FAIL {name}: {s}");
            }
        }
    };
    report("1 system equivalence", c1_system_equivalence());
    let (c2, yes) = c2_decision();
    report("2 decision soundness", c2);
    report("3 construction parameters", c3_parameters(&yes));
    report("4 geometry", c4_geometry());
    report("5 incremental build", c5_incremental());
    report("6 ratio extremality", c6_ratio_extremality());
    report("7 power cycle model", c7_power_cycle());
    report("8 E5 ledger", c8_e5());
    report("9 performance", c9_performance());
    report("10 figure fixtures", c10_readme());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
