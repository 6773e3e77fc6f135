//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! fails if any criterion fails.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::time::Instant;

use planar_inv_core::corpus::{base_curve, standard_corpus, CorpusCurve};
use planar_inv_core::curve::find_crossings;
use planar_inv_core::exactness::{
    model_basis_check, verify_exactness, verify_window_rank, TruncationWindow,
};
use planar_inv_core::indices::{crossing_reports, default_epsilon};
use planar_inv_core::invariant::compute;
use planar_inv_core::moves::{
    make_j_move, make_s_move, perturb, random_j_site, random_s_site, verify_j_relations,
    MoveOutcome, MoveSymbol, SSite,
};
use planar_inv_core::symbols::{project, rat, winding_functional, JKind, Rational};
use planar_inv_core::{double_index, Error, PlanarCurve, Point, ToleranceConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const CORPUS_SIZE: usize = 50;
const CORPUS_SEED: u64 = 2024;
const INDEX_RESIDUAL: f64 = 0.1;
const PERTURBATIONS: usize = 100;
/// Perturbation size relative to the curve diameter.
const AMPLITUDE: f64 = 0.002;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn cfg() -> ToleranceConfig {
    ToleranceConfig {
        index_residual: INDEX_RESIDUAL,
        ..ToleranceConfig::default()
    }
}

fn corpus() -> Vec<CorpusCurve> {
    standard_corpus(CORPUS_SIZE, CORPUS_SEED, &cfg())
}

fn bottom_parity(corpus: &[CorpusCurve]) -> Outcome {
    let (mut arcs, mut worst, mut bad) = (0, 0.0f64, Vec::new());
    for cc in corpus {
        let xs = find_crossings(&cc.curve).unwrap();
        for idx in 0..xs.len() {
            let eps = default_epsilon(&cc.curve, &xs, idx, &cfg());
            match crossing_reports(&cc.curve, &xs, idx, eps, &cfg()) {
                Ok((r1, r2)) => {
                    for r in [r1, r2] {
                        arcs += 1;
                        let v = (r.angles.radial_turn - r.angles.tangent_turn) / PI;
                        worst = worst.max((v - v.round()).abs());
                        if r.index.i2.rem_euclid(2) != 1 {
                            bad.push(cc.name.clone());
                        }
                    }
                }
                Err(e) => bad.push(format!("{}: {e}", cc.name)),
            }
        }
    }
    outcome(
        bad.is_empty() && worst < INDEX_RESIDUAL && corpus.len() >= 50,
        format!(
            "{} curves, {arcs} arcs, max residual {worst:.2e}, failures {bad:?}",
            corpus.len()
        ),
    )
}

fn top_index_crosscheck(corpus: &[CorpusCurve]) -> Outcome {
    let (mut arcs, mut bad) = (0, Vec::new());
    for cc in corpus {
        let xs = find_crossings(&cc.curve).unwrap();
        for idx in 0..xs.len() {
            let eps = default_epsilon(&cc.curve, &xs, idx, &cfg());
            let Ok((r1, r2)) = crossing_reports(&cc.curve, &xs, idx, eps, &cfg()) else {
                bad.push(format!("{} crossing {idx}", cc.name));
                continue;
            };
            for r in [r1, r2] {
                arcs += 1;
                if r.top_index_check.formula.round() as i64 != r.top_index_check.combinatorial {
                    bad.push(format!(
                        "{} crossing {idx}: {:?}",
                        cc.name, r.top_index_check
                    ));
                }
            }
        }
    }
    outcome(bad.is_empty(), format!("{arcs} arcs, mismatches {bad:?}"))
}

fn grading(corpus: &[CorpusCurve]) -> Outcome {
    let (mut terms, mut bad) = (0, Vec::new());
    for cc in corpus {
        match compute(&cc.curve, &cfg()) {
            Ok(r) => {
                for (sym, _) in r.crossing_sum.terms() {
                    terms += 1;
                    if sym.grade() != r.whitney {
                        bad.push(format!("{}: {sym}", cc.name));
                    }
                }
            }
            Err(e) => bad.push(format!("{}: {e}", cc.name)),
        }
    }
    outcome(
        bad.is_empty(),
        format!("{terms} terms checked, violations {bad:?}"),
    )
}

fn invariance(corpus: &[CorpusCurve]) -> Outcome {
    let (mut trials, mut retries, mut bad) = (0, 0, Vec::new());
    for (ci, cc) in corpus.iter().enumerate() {
        let reference = compute(&cc.curve, &cfg()).unwrap().invariant.to_string();
        for t in 0..PERTURBATIONS {
            let seed = (ci * PERTURBATIONS + t) as u64;
            let mut amp = AMPLITUDE * cc.curve.diameter();
            let moved = loop {
                match perturb(&cc.curve, seed, amp, &cfg()) {
                    Ok(c) => break Some(c),
                    Err(Error::StabilityLost(_)) if amp > 1e-6 * cc.curve.diameter() => {
                        retries += 1;
                        amp /= 2.0;
                    }
                    Err(_) => break None,
                }
            };
            let Some(moved) = moved else {
                bad.push(format!("{} seed {seed}: no stable perturbation", cc.name));
                continue;
            };
            trials += 1;
            match compute(&moved, &cfg()) {
                Ok(r) if r.invariant.to_string() == reference => {}
                Ok(r) => bad.push(format!(
                    "{} seed {seed}: {} vs {reference}",
                    cc.name, r.invariant
                )),
                Err(e) => bad.push(format!("{} seed {seed}: {e}", cc.name)),
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!("{trials} perturbed curves, {retries} amplitude halvings, differences {bad:?}"),
    )
}

fn j_moves(corpus: &[CorpusCurve]) -> Vec<MoveOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut out = Vec::new();
    let mut counts: BTreeMap<JKind, usize> = BTreeMap::new();
    let want = |c: &BTreeMap<JKind, usize>| {
        c.get(&JKind::Plus).copied().unwrap_or(0) >= 25
            && c.get(&JKind::A).copied().unwrap_or(0) >= 25
            && c.get(&JKind::B).copied().unwrap_or(0) >= 15
    };
    for _ in 0..40 {
        for cc in corpus {
            if want(&counts) {
                return out;
            }
            let site = random_j_site(&cc.curve, &mut rng);
            if let Ok(o) = make_j_move(&cc.curve, &site, &cfg()) {
                if let MoveSymbol::J(j) = &o.symbol {
                    *counts.entry(j.kind).or_default() += 1;
                }
                out.push(o);
            }
        }
    }
    out
}

fn j_deltas(moves: &[MoveOutcome]) -> Outcome {
    let report = verify_j_relations(moves, false);
    let control = verify_j_relations(moves, true);
    let mut ok = BTreeMap::new();
    let mut bad = Vec::new();
    for (c, o) in report.checks.iter().zip(moves) {
        let symmetric =
            c.symbol.kind != JKind::Plus || c.alternatives.iter().all(|a| *a == c.delta);
        let hat_same = o.delta == o.invariant_delta;
        let count_ok = find_crossings(&o.curve_plus).unwrap().len()
            == find_crossings(&o.curve_minus).unwrap().len() + 2;
        if c.matches && symmetric && hat_same && count_ok {
            *ok.entry(c.symbol.kind.name()).or_insert(0usize) += 1;
        } else {
            bad.push(format!(
                "{}: delta {} predicted {}",
                c.symbol, c.delta, c.predicted
            ));
        }
    }
    let n = |k: &str| ok.get(k).copied().unwrap_or(0);
    outcome(
        bad.is_empty() && n("J+") >= 20 && n("JA") >= 20 && n("JB") >= 10 && !control.all_match,
        format!(
            "J+ {} / JA {} / JB {} exact matches, mismatches {bad:?}, corrupted control flagged: {}",
            n("J+"),
            n("JA"),
            n("JB"),
            !control.all_match
        ),
    )
}

fn s_equivalence(corpus: &[CorpusCurve]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut groups: BTreeMap<String, Vec<(String, String)>> = BTreeMap::new();
    let mut bad = Vec::new();
    let mut record = |label: String, o: &MoveOutcome, bad: &mut Vec<String>| {
        if o.delta != o.invariant_delta {
            bad.push(format!("{label}: G term changed"));
        }
        groups
            .entry(o.symbol.to_string())
            .or_default()
            .push((label, o.delta.to_string()));
    };
    for cc in corpus
        .iter()
        .filter(|c| !c.name.starts_with("base"))
        .take(25)
    {
        for k in 0..4 {
            let Some(site) = random_s_site(&cc.curve, &mut rng) else {
                break;
            };
            let Ok(o) = make_s_move(&cc.curve, &site, &cfg()) else {
                continue;
            };
            record(format!("{} site {k}", cc.name), &o, &mut bad);
            let narrow = SSite {
                half_width: Some(0.6 * o.half_width),
                ..site.clone()
            };
            if let Ok(v) = make_s_move(&cc.curve, &narrow, &cfg()) {
                record(format!("{} site {k} narrow", cc.name), &v, &mut bad);
            }
            let motion = |p: Point| p.rotate(0.7) * 1.7 + Point::new(3.0, -1.0);
            let moved = cc.curve.map_points(motion).unwrap();
            let rs = SSite {
                crossing: motion(site.crossing),
                direction: site.direction.rotate(0.7),
                ..site.clone()
            };
            if let Ok(v) = make_s_move(&moved, &rs, &cfg()) {
                record(format!("{} site {k} moved", cc.name), &v, &mut bad);
            }
            if let Ok(pc) = perturb(&cc.curve, k, 0.003 * cc.curve.diameter(), &cfg()) {
                if let Ok(v) = make_s_move(&pc, &site, &cfg()) {
                    record(format!("{} site {k} perturbed", cc.name), &v, &mut bad);
                }
            }
        }
    }
    let mut pairs = 0;
    for (sym, v) in &groups {
        pairs += v.len() - 1;
        if v.iter().any(|x| x.1 != v[0].1) {
            bad.push(format!("{sym}: {v:?}"));
        }
    }
    let deltas: Vec<&String> = groups.values().map(|v| &v[0].1).collect();
    let distinct = deltas
        .iter()
        .collect::<std::collections::BTreeSet<_>>()
        .len();
    outcome(
        bad.is_empty() && pairs >= 10 && distinct > 1,
        format!(
            "{} symbols, {pairs} equal-symbol pairs, {distinct} distinct deltas across symbols, inconsistencies {bad:?}",
            groups.len()
        ),
    )
}

fn kernel(moves: &[MoveOutcome]) -> Outcome {
    let bad: Vec<String> = moves
        .iter()
        .filter(|o| !project(&o.delta).is_zero())
        .map(|o| format!("{}: {}", o.symbol, project(&o.delta)))
        .collect();
    outcome(
        bad.is_empty() && !moves.is_empty(),
        format!("{} J deltas, nonzero images {bad:?}", moves.len()),
    )
}

fn base_functionals() -> Outcome {
    let mut bad = Vec::new();
    for mp in -4i64..=4 {
        let r = compute(&base_curve(mp), &cfg()).unwrap();
        let hat = project(&r.invariant);
        for m in -4i64..=4 {
            let delta = if m == mp { 1 } else { 0 };
            let want_hat: Rational = rat(2 * (1 + if mp == 0 { 1 } else { 0 }) * delta);
            let want_k: Rational = rat(2 * delta * if mp == 0 { 1 } else { 0 });
            let (got_hat, got_k) = (
                winding_functional(&hat, m),
                winding_functional(&r.projection, m),
            );
            if got_hat != want_hat || got_k != want_k {
                bad.push(format!("m={m} m'={mp}: {got_hat}/{got_k}"));
            }
        }
    }
    outcome(bad.is_empty(), format!("81 pairs, deviations {bad:?}"))
}

fn separation() -> Outcome {
    let c = base_curve(1);
    let a = compute(&c, &cfg()).unwrap();
    let b = compute(&c.reversed(), &cfg()).unwrap();
    outcome(
        a.crossing_sum.is_zero() && b.crossing_sum.is_zero() && a.invariant != b.invariant,
        format!(
            "F = {} / {}, F_hat = {} / {}",
            a.crossing_sum, b.crossing_sum, a.invariant, b.invariant
        ),
    )
}

fn algebra() -> Outcome {
    let mut bad = Vec::new();
    let basis = model_basis_check(50);
    if !basis.pass {
        bad.push(format!("model basis: {basis:?}"));
    }
    let mut windows = 0;
    for n in -3..=3 {
        for (k, l) in [(1, 1), (-1, -1), (-1, 1), (1, 3), (-3, 1)] {
            windows += 1;
            let w = TruncationWindow::new(n, k, l, 30).unwrap();
            match verify_window_rank(&w) {
                Ok(c) if c.pass => {}
                Ok(c) => bad.push(format!("{w:?}: rank {} codim {}", c.rank, c.codimension)),
                Err(e) => bad.push(format!("{w:?}: {e}")),
            }
            match verify_exactness(&w, 4, (n + 10) as u64) {
                Ok(r) if r.pass => {}
                Ok(r) => bad.push(format!("{w:?}: {r:?}")),
                Err(e) => bad.push(format!("{w:?}: {e}")),
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!("model basis N=50, {windows} windows at depth 30, failures {bad:?}"),
    )
}

fn nearest(curve: &PlanarCurve, at: Point) -> usize {
    let xs = find_crossings(curve).unwrap();
    (0..xs.len())
        .min_by(|&i, &j| {
            xs[i]
                .location
                .distance(at)
                .total_cmp(&xs[j].location.distance(at))
        })
        .unwrap()
}

fn index_stability(corpus: &[CorpusCurve]) -> Outcome {
    let (mut checked, mut bad) = (0, Vec::new());
    for cc in corpus {
        let xs = find_crossings(&cc.curve).unwrap();
        let fine = cc.resampled(2).unwrap();
        let fine_xs = find_crossings(&fine).unwrap();
        for idx in 0..xs.len() {
            checked += 1;
            let eps = default_epsilon(&cc.curve, &xs, idx, &cfg());
            let base = double_index(&cc.curve, &xs, idx, Some(eps), &cfg());
            let half = double_index(&cc.curve, &xs, idx, Some(eps / 2.0), &cfg());
            let j = nearest(&fine, xs[idx].location);
            let resampled = double_index(&fine, &fine_xs, j, None, &cfg());
            match (base, half, resampled) {
                (Ok(a), Ok(b), Ok(c)) if a == b && a == c => {}
                other => bad.push(format!("{} crossing {idx}: {other:?}", cc.name)),
            }
        }
    }
    outcome(
        bad.is_empty(),
        format!("{checked} crossings, changes {bad:?}"),
    )
}

type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;

#[test]
fn acceptance() {
    let start = Instant::now();
    let corpus = corpus();
    let moves = j_moves(&corpus);
    let criteria: Vec<(&str, Check<'_>)> = vec![
        ("bottom-index parity", Box::new(|| bottom_parity(&corpus))),
        (
            "top index matches the angle formula",
            Box::new(|| top_index_crosscheck(&corpus)),
        ),
        ("grading by Whitney number", Box::new(|| grading(&corpus))),
        (
            "invariance under perturbation",
            Box::new(|| invariance(&corpus)),
        ),
        ("self-tangency jumps", Box::new(|| j_deltas(&moves))),
        (
            "triple-point equivalence",
            Box::new(|| s_equivalence(&corpus)),
        ),
        (
            "self-tangency jumps lie in the kernel",
            Box::new(|| kernel(&moves)),
        ),
        ("base-curve functional values", Box::new(base_functionals)),
        ("separation of the two circles", Box::new(separation)),
        ("truncated algebra", Box::new(algebra)),
        (
            "stability of indices",
            Box::new(|| index_stability(&corpus)),
        ),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2} {verdict} {name} ({:.1}s): {}",
            i + 1,
            t.elapsed().as_secs_f64(),
            o.detail
        );
        if !o.pass {
            failed.push(i + 1);
        }
    }
    println!(
        "acceptance finished in {:.1}s",
        start.elapsed().as_secs_f64()
    );
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
