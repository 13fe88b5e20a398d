//! Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use icebox::coxeter::flags_match_pattern;
use icebox::duality::{all_sigmas, check_left_right_duality, replay_duality, replay_swap_word};
use icebox::gt::{
    all_patterns, bk_involution, crystal_replay, evacuation, gt_from_state, gt_weight, pattern_monomial,
    schutzenberger, schutzenberger_word, sh, ssyt_from_gt, state_from_gt, t_k, t_on_state, truncate_types, unsh,
};
use icebox::lattice::{enumerate_states, partition_by_enumeration, partition_function, state_weight};
use icebox::weights::{all_crystal_configs, bit, crystal_t_weight, fuse_block, FusedConfig};
use icebox::ybe::{check_rl_inverse, twist_suite, ybe_suite};
use icebox::{LatticeKind, LaurentPoly, Registry, RowType, SystemSpec, TwistData, WeightRegime, Weights, YbeReport};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn rows_of(s: &str) -> Vec<RowType> {
    s.chars().map(|c| if c == 'R' { RowType::R } else { RowType::L }).collect()
}

/// Whether an RRR diagram on rows `(x, y, z)` uses an R-vertex with a right-moving
/// row over a left-moving row.
fn needs_rl(rows: &[RowType]) -> bool {
    let pairs = [(0, 1), (0, 2), (1, 2)];
    pairs.iter().any(|&(a, b)| rows[a] == RowType::R && rows[b] == RowType::L)
}

fn describe_failures(rs: &[&YbeReport]) -> String {
    rs.iter()
        .filter(|r| !r.pass)
        .map(|r| format!("{} {} k={:?}", r.equation, r.rows, r.k))
        .collect::<Vec<_>>()
        .join(", ")
}

fn all_thetas(r: usize) -> Vec<Vec<RowType>> {
    (0..1u32 << r).map(|b| (0..r).map(|i| if b >> i & 1 == 1 { RowType::L } else { RowType::R }).collect()).collect()
}

fn plus_rho(lam: &[usize]) -> Vec<usize> {
    let r = lam.len();
    lam.iter().enumerate().map(|(i, a)| a + r - 1 - i).collect()
}

fn generic_suite_m3() -> Result<Vec<YbeReport>, String> {
    let reg = Registry::standard(3, 3);
    ybe_suite(&Weights::Unfused(WeightRegime::generic(&reg, 3)), false).map_err(err)
}

fn criterion_1() -> Outcome {
    let rs = generic_suite_m3()?;
    let rtt: Vec<&YbeReport> = rs.iter().filter(|r| r.equation == "RTT").collect();
    let rrr: Vec<&YbeReport> = rs.iter().filter(|r| r.equation == "RRR").collect();
    ensure(rtt.len() == 12 && rrr.len() == 12, || format!("unexpected job count {} + {}", rtt.len(), rrr.len()))?;
    ensure(rrr.iter().all(|r| !needs_rl(&rows_of(&r.rows))), || "suite included R^R_L diagrams".into())?;
    let all: Vec<&YbeReport> = rs.iter().collect();
    ensure(all.iter().all(|r| r.pass), || format!("failing: {}", describe_failures(&all)))?;
    Ok(format!("{} RTT and {} RRR checks over k=1..3 are exact identities", rtt.len(), rrr.len()))
}

fn criterion_2() -> Outcome {
    let mut count = 0;
    for m in 1..=4 {
        let rs = check_rl_inverse(m).map_err(err)?;
        let refs: Vec<&YbeReport> = rs.iter().collect();
        ensure(!rs.is_empty() && rs.iter().all(|r| r.pass), || format!("m={m}: {}", describe_failures(&refs)))?;
        let families: BTreeSet<&str> = rs.iter().filter_map(|r| r.rows.split_once(" (").map(|(_, f)| f)).collect();
        ensure(families.len() == if m == 1 { 4 } else { 5 }, || format!("m={m}: families {families:?}"))?;
        ensure(rs.iter().any(|r| r.rows == "telescoping"), || format!("m={m}: no telescoping check"))?;
        ensure(m != 2 || rs.iter().any(|r| r.rows.starts_with("printed")), || "no printed m=2 check".into())?;
        count += rs.len();
    }
    Ok(format!("{count} inverse, family and telescoping checks for m=1..4"))
}

fn criterion_3() -> Outcome {
    let reg = Registry::standard(3, 3);
    let rs = ybe_suite(&Weights::Crystal { reg, m: 3 }, true).map_err(err)?;
    let refs: Vec<&YbeReport> = rs.iter().collect();
    ensure(rs.len() == 12 && rs.iter().all(|r| r.pass), || format!("failing: {}", describe_failures(&refs)))?;
    Ok(format!("{} crystal RTT/RRR combinations over Gamma/Delta at m=3", rs.len()))
}

fn criterion_4() -> Outcome {
    let reg = Registry::standard(3, 3);
    let base = WeightRegime::generic(&reg, 3);
    for seed in 0..10u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tw = TwistData::random(&reg, 3, &mut rng);
        let (before, after) = twist_suite(3, &base, &tw).map_err(err)?;
        let verdicts = |rs: &[YbeReport]| rs.iter().map(|r| (r.equation.clone(), r.rows.clone(), r.k, r.pass)).collect::<Vec<_>>();
        ensure(verdicts(&before) == verdicts(&after), || format!("seed {seed} changed a verdict"))?;
        ensure(after.iter().all(|r| r.pass), || format!("seed {seed}: twisted check failed"))?;
    }
    Ok("10 seeded twists leave all 24 verdicts unchanged".into())
}

fn criterion_5() -> Outcome {
    let cases: [(usize, usize, Vec<usize>); 4] =
        [(2, 1, vec![1, 0]), (2, 2, vec![3, 0]), (3, 2, vec![4, 2, 0]), (3, 3, vec![5, 4, 0])];
    let mut n_checks = 0;
    let mut differing_counts = 0;
    for (r, m, mu) in &cases {
        let reg = Registry::standard(*r, *m);
        let regime = WeightRegime::generic(&reg, *m);
        let n = mu[0] / m + 1;
        for sigma in all_sigmas(*m, *r) {
            let direct = check_left_right_duality(mu, Some(&sigma), n, *m, *r, &regime).map_err(err)?;
            ensure(direct.pass, || format!("direct r={r} m={m} mu={mu:?} sigma={sigma:?}"))?;
            if direct.lhs_system.states != direct.rhs_system.states {
                differing_counts += 1;
            }
            let replay = replay_duality(mu, Some(&sigma), n, *m, *r, &regime).map_err(err)?;
            ensure(replay.pass, || format!("replay r={r} m={m} mu={mu:?} sigma={sigma:?}"))?;
            ensure(replay.swap_word == replay_swap_word(*r), || "replay used an unexpected exchange order".into())?;
            n_checks += 1;
        }
    }
    Ok(format!("{n_checks} boundary conditions, direct and replayed ({differing_counts} with different state counts)"))
}

fn criterion_6() -> Outcome {
    let mut states_seen = 0;
    for lam in [vec![2usize, 1, 0], vec![3, 1, 0]] {
        let lr = plus_rho(&lam);
        let lam_top: Vec<i64> = lam.iter().map(|&a| a as i64).collect();
        let unshifted: BTreeSet<_> = all_patterns(&lam_top).into_iter().collect();
        for theta in all_thetas(3) {
            let tp = truncate_types(&theta);
            let spec = SystemSpec::crystal(theta.clone(), lr.clone(), None).map_err(err)?;
            let states = enumerate_states(&spec).map_err(err)?;
            let mut image = BTreeSet::new();
            for s in &states {
                let t = gt_from_state(s, &theta).map_err(err)?;
                ensure(state_from_gt(&t, &theta, None).map_err(err)? == *s, || format!("{t} does not invert"))?;
                let w = state_weight(s, &spec).map_err(err)?;
                ensure(w == pattern_monomial(&t, &spec.z).map_err(err)?, || format!("weight mismatch at {t}"))?;
                image.insert(unsh(&t, &tp).map_err(err)?);
            }
            ensure(image.len() == states.len(), || "state map is not injective".into())?;
            ensure(image == unshifted, || format!("image for {theta:?} is not all of GTP_{lam:?}"))?;
            states_seen += states.len();
        }
    }
    Ok(format!("{states_seen} states over 8 row-type words and 2 shapes"))
}

fn criterion_7() -> Outcome {
    let mut checks = 0usize;
    for lam in [vec![2usize, 1, 0], vec![3, 1, 0]] {
        let lr = plus_rho(&lam);
        let lam_top: Vec<i64> = lam.iter().map(|&a| a as i64).collect();
        let lr_top: Vec<i64> = lr.iter().map(|&a| a as i64).collect();
        for top in [&lam_top, &lr_top] {
            for t in all_patterns(top) {
                for k in 1..3 {
                    let u = t_k(&t, k).map_err(err)?;
                    ensure(t_k(&u, k).map_err(err)? == t, || format!("t_{k} not an involution at {t}"))?;
                    ensure(u.top() == t.top(), || "top row changed".into())?;
                    let mut w = gt_weight(&t);
                    w.swap(k - 1, k);
                    ensure(gt_weight(&u) == w, || format!("weight of t_{k} {t} is not transposed"))?;
                    checks += 1;
                }
            }
        }
        let unshifted = all_patterns(&lam_top);
        for theta in all_thetas(3) {
            let tp = truncate_types(&theta);
            let spec = SystemSpec::crystal(theta.clone(), lr.clone(), None).map_err(err)?;
            let states = enumerate_states(&spec).map_err(err)?;
            for i in 1..3 {
                if theta[i - 1] == theta[i] {
                    continue;
                }
                let mut theta2 = theta.clone();
                theta2.swap(i - 1, i);
                let tp2 = truncate_types(&theta2);
                for t in &unshifted {
                    let lhs = bk_involution(&sh(t, &tp).map_err(err)?, i).map_err(err)?;
                    let rhs = sh(&bk_involution(t, i).map_err(err)?, &tp2).map_err(err)?;
                    ensure(lhs == rhs, || format!("sh does not commute with t at {t}, {theta:?}, i={i}"))?;
                }
                let spec2 = SystemSpec::crystal(theta2.clone(), lr.clone(), None).map_err(err)?;
                let mut zs = spec.z.clone();
                zs.swap(i - 1, i);
                let spec_swapped = spec.clone().with_z(zs);
                let mut image = Vec::new();
                for s in &states {
                    let (s2, th2) = t_on_state(s, &theta, i).map_err(err)?;
                    ensure(th2 == theta2, || "row types not exchanged".into())?;
                    let w2 = state_weight(&s2, &spec2).map_err(err)?;
                    let w1 = state_weight(s, &spec_swapped).map_err(err)?;
                    ensure(w1 == w2, || format!("state weight rule fails for {theta:?} i={i}"))?;
                    let mut sig = s.sigma(&theta);
                    sig.swap(i - 1, i);
                    ensure(s2.sigma(&theta2) == sig, || format!("boundary rule fails for {theta:?} i={i}"))?;
                    ensure(flags_match_pattern(&s2, &theta2).map_err(err)?, || "flag table disagrees".into())?;
                    image.push(s2);
                    checks += 1;
                }
                image.sort();
                ensure(image == enumerate_states(&spec2).map_err(err)?, || "state involution is not a bijection".into())?;
            }
        }
    }
    Ok(format!("{checks} pattern and state checks"))
}

fn criterion_8() -> Outcome {
    let mut n = 0;
    for lam in [vec![2i64, 1, 0], vec![3, 1, 0], vec![2, 2, 0]] {
        for t in all_patterns(&lam) {
            let q = schutzenberger(&t).map_err(err)?;
            let e = evacuation(&ssyt_from_gt(&t).map_err(err)?).map_err(err)?;
            ensure(ssyt_from_gt(&q).map_err(err)? == e, || format!("evacuation differs at {t}"))?;
            n += 1;
        }
    }
    for r in 2..=5 {
        let mapped: Vec<usize> = replay_swap_word(r).iter().map(|i| r - i).collect();
        ensure(mapped == schutzenberger_word(r), || format!("orders differ at r={r}"))?;
    }
    let mut replays = 0;
    for lam in [vec![2usize, 1, 0], vec![3, 1, 0], vec![2, 2, 0]] {
        let spec = SystemSpec::crystal(vec![RowType::R; 3], plus_rho(&lam), None).map_err(err)?;
        for s in enumerate_states(&spec).map_err(err)? {
            let (steps, end, word) = crystal_replay(&s, &spec.z).map_err(err)?;
            ensure(steps.iter().all(|st| st.weight_ok && st.sigma_ok), || "replay step failed".into())?;
            ensure(word == schutzenberger_word(3), || "replay word differs".into())?;
            let t = gt_from_state(&s, &spec.theta).map_err(err)?;
            let end_t = gt_from_state(&end, &[RowType::L; 3]).map_err(err)?;
            ensure(end_t == schutzenberger(&t).map_err(err)?, || format!("replay of {t} does not end at q(T)"))?;
            let mut sig = s.sigma(&spec.theta);
            sig.reverse();
            ensure(end.sigma(&[RowType::L; 3]) == sig, || "replay does not reverse the exit colors".into())?;
            replays += 1;
        }
    }
    Ok(format!("{n} patterns match evacuation; {replays} state replays follow the exchange order"))
}

fn criterion_9() -> Outcome {
    let mut n = 0;
    for m in 1..=3 {
        let reg = Registry::standard(2, m);
        let regime = WeightRegime::crystal(&reg, m);
        let z = LaurentPoly::var(&reg, "z1").map_err(err)?;
        for family in [RowType::GAMMA, RowType::DELTA] {
            for c in all_crystal_configs(m) {
                let fused = fuse_block(family, &c, &z, &regime).map_err(err)?;
                let table = crystal_t_weight(family, &c, &z);
                ensure(fused == table, || format!("m={m} {family:?} {c:?}: fused {fused} vs table {table}"))?;
                n += 1;
            }
        }
    }
    let reg = Registry::standard(2, 5);
    let regime = WeightRegime::crystal(&reg, 5);
    let z = LaurentPoly::var(&reg, "z1").map_err(err)?;
    let a2p = FusedConfig { left: 2, bottom: bit(2), top: bit(4), right: 4 };
    let w = fuse_block(RowType::GAMMA, &a2p, &z, &regime).map_err(err)?;
    ensure(w == z, || format!("figure configuration gives {w}"))?;
    Ok(format!("{n} fused configurations match the crystal tables; figure block gives z"))
}

fn criterion_10() -> Outcome {
    // Fusion enumeration never produces a multi-color vertical edge.
    let mut states = 0;
    for lam in [vec![2usize, 1, 0], vec![3, 1, 0], vec![2, 2, 0]] {
        for theta in all_thetas(3) {
            let spec = SystemSpec::crystal(theta.clone(), plus_rho(&lam), None).map_err(err)?;
            let fused = spec.clone().with_kind(LatticeKind::CrystalFusion);
            let ss = enumerate_states(&fused).map_err(err)?;
            ensure(ss.iter().all(|s| s.vertical.iter().flatten().all(|v| v.count_ones() <= 1)), || {
                format!("multi-color edge for {theta:?}, {lam:?}")
            })?;
            ensure(ss == enumerate_states(&spec).map_err(err)?, || "fusion states differ from crystal states".into())?;
            states += ss.len();
        }
    }
    // Internal colors of every nonzero YBE filling appear on the boundary.
    let reg2 = Registry::standard(3, 2);
    let mut reports = ybe_suite(&Weights::Unfused(WeightRegime::generic(&reg2, 2)), true).map_err(err)?;
    reports.extend(generic_suite_m3()?);
    let flagged = reports.iter().filter(|r| r.internal_colors_on_boundary.is_some()).count();
    ensure(flagged > 0 && reports.iter().all(|r| r.internal_colors_on_boundary != Some(false)), || {
        "an internal color is missing from the boundary".into()
    })?;
    // Dependence on the number of columns.
    let cases: [(usize, usize, Vec<usize>); 3] = [(2, 1, vec![1, 0]), (2, 2, vec![3, 0]), (3, 2, vec![4, 2, 0])];
    let mut scalings = 0;
    for (r, m, mu) in &cases {
        let reg = Registry::standard(*r, *m);
        let regime = WeightRegime::generic(&reg, *m);
        let n = mu[0] / m + 1;
        let mut sigmas: Vec<Option<Vec<u8>>> = all_sigmas(*m, *r).into_iter().map(Some).collect();
        sigmas.push(None);
        for sigma in sigmas {
            let make = |theta: RowType, cols: usize| -> Result<SystemSpec, String> {
                let mut s = SystemSpec::unfused(vec![theta; *r], *m, mu.clone(), cols, regime.clone()).map_err(err)?;
                s.sigma = sigma.clone();
                Ok(s)
            };
            let zr = partition_function(&make(RowType::R, n)?).map_err(err)?;
            let zr1 = partition_function(&make(RowType::R, n + 1)?).map_err(err)?;
            ensure(zr == zr1, || format!("right-moving Z depends on N for {mu:?} {sigma:?}"))?;
            let left = make(RowType::L, n)?;
            let zl = partition_function(&left).map_err(err)?;
            let zl1 = partition_function(&make(RowType::L, n + 1)?).map_err(err)?;
            let zprod = left.z.iter().fold(LaurentPoly::one(&reg), |acc, z| &acc * z);
            ensure(&zl1 * &zprod == zl, || format!("left-moving Z does not scale for {mu:?} {sigma:?}"))?;
            if sigma.is_none() {
                ensure(zl == partition_by_enumeration(&left).map_err(err)?, || "transfer and enumeration differ".into())?;
            }
            scalings += 1;
        }
    }
    Ok(format!(
        "{states} fusion states single-colored; {flagged} YBE color checks; {scalings} column-count checks"
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("yang-baxter generic m=3", criterion_1),
        ("R^R_L inverse m=1..4", criterion_2),
        ("crystal yang-baxter m=3", criterion_3),
        ("twist invariance", criterion_4),
        ("left-right duality", criterion_5),
        ("state/GT bijection and weights", criterion_6),
        ("Berenstein-Kirillov suite", criterion_7),
        ("Schutzenberger and evacuation", criterion_8),
        ("fusion consistency", criterion_9),
        ("structural lemmas", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = f();
        let secs = start.elapsed().as_secs_f64();
        match out {
            Ok(msg) => println!("PASS criterion {}: {name}: {msg} ({secs:.1}s)", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {msg} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
