//! Named verification suites shared by the command-line tool and the benches.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::Registry;
use crate::coxeter::{flags_match_pattern, state_flags};
use crate::error::Result;
use crate::gt::{
    all_patterns, crystal_replay, evacuation, gt_from_state, gt_weight, schutzenberger, schutzenberger_word,
    ssyt_from_gt, t_k, t_on_state,
};
use crate::lattice::{enumerate_states, state_weight, SystemSpec};
use crate::weights::{RowType, TwistData, WeightRegime};
use crate::ybe::twist_suite;

/// One named check and its outcome.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckLine {
    pub check: String,
    pub pass: bool,
    pub detail: String,
}

impl CheckLine {
    fn new(check: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        CheckLine { check: check.into(), pass, detail: detail.into() }
    }
}

/// Every row-type word of length `r`, all right-moving first.
pub fn all_thetas(r: usize) -> Vec<Vec<RowType>> {
    (0..1u32 << r)
        .map(|b| (0..r).map(|i| if b >> (r - 1 - i) & 1 == 1 { RowType::L } else { RowType::R }).collect())
        .collect()
}

/// `lambda + rho`.
pub fn plus_rho(lambda: &[usize]) -> Vec<usize> {
    let r = lambda.len();
    lambda.iter().enumerate().map(|(i, a)| a + r - 1 - i).collect()
}

fn theta_str(theta: &[RowType]) -> String {
    theta.iter().map(|t| t.crystal_letter()).collect()
}

/// For every row-type word and every adjacent pair of different types: the
/// state involution is a bijection onto the exchanged system, moves weights by
/// `s_i` on the row parameters, moves exit colors by `s_i`, and its image
/// has flags generated by its pattern.
pub fn crystal_involutions(lambda: &[usize]) -> Result<Vec<CheckLine>> {
    let r = lambda.len();
    let lr = plus_rho(lambda);
    let jobs: Vec<(Vec<RowType>, usize)> = all_thetas(r)
        .into_iter()
        .flat_map(|th| (1..r).filter(|&i| th[i - 1] != th[i]).map(|i| (th.clone(), i)).collect::<Vec<_>>())
        .collect();
    jobs.into_par_iter()
        .map(|(theta, i)| -> Result<CheckLine> {
            let spec = SystemSpec::crystal(theta.clone(), lr.clone(), None)?;
            let mut theta2 = theta.clone();
            theta2.swap(i - 1, i);
            let spec2 = SystemSpec::crystal(theta2.clone(), lr.clone(), None)?;
            let mut zs = spec.z.clone();
            zs.swap(i - 1, i);
            let swapped = spec.clone().with_z(zs);
            let states = enumerate_states(&spec)?;
            let (mut weights, mut bounds, mut flags) = (true, true, true);
            let mut image = Vec::with_capacity(states.len());
            for s in &states {
                let (s2, _) = t_on_state(s, &theta, i)?;
                weights &= state_weight(&s2, &spec2)? == state_weight(s, &swapped)?;
                let mut sig = s.sigma(&theta);
                sig.swap(i - 1, i);
                bounds &= s2.sigma(&theta2) == sig;
                flags &= flags_match_pattern(&s2, &theta2)?;
                image.push(s2);
            }
            image.sort();
            let bijective = image == enumerate_states(&spec2)?;
            let pass = weights && bounds && flags && bijective;
            Ok(CheckLine::new(
                format!("t_{} on {} (rows {i},{})", r - i, theta_str(&theta), i + 1),
                pass,
                format!(
                    "{} states; bijection {bijective}, weights {weights}, boundary {bounds}, flags {flags}",
                    states.len()
                ),
            ))
        })
        .collect()
}

/// Pattern-level involution properties, evacuation, and the replay of every
/// all-right-moving crystal state to the all-left-moving system.
pub fn schutzenberger_suite(lambda: &[usize]) -> Result<Vec<CheckLine>> {
    let r = lambda.len();
    let top: Vec<i64> = lambda.iter().map(|&a| a as i64).collect();
    let patterns = all_patterns(&top);
    let mut involutive = true;
    let mut transposes = true;
    let mut evac = true;
    for t in &patterns {
        for k in 1..r {
            let u = t_k(t, k)?;
            involutive &= t_k(&u, k)? == *t && u.top() == t.top();
            let mut w = gt_weight(t);
            w.swap(k - 1, k);
            transposes &= gt_weight(&u) == w;
        }
        let q = schutzenberger(t)?;
        evac &= ssyt_from_gt(&q)? == evacuation(&ssyt_from_gt(t)?)?;
        involutive &= schutzenberger(&q)? == *t;
    }
    let spec = SystemSpec::crystal(vec![RowType::R; r], plus_rho(lambda), None)?;
    let states = enumerate_states(&spec)?;
    let mut replay = true;
    for s in &states {
        let (steps, end, word) = crystal_replay(s, &spec.z)?;
        let t = gt_from_state(s, &spec.theta)?;
        let mut sig = s.sigma(&spec.theta);
        sig.reverse();
        replay &= steps.iter().all(|st| st.weight_ok && st.sigma_ok)
            && word == schutzenberger_word(r)
            && gt_from_state(&end, &vec![RowType::L; r])? == schutzenberger(&t)?
            && end.sigma(&vec![RowType::L; r]) == sig;
        state_flags(&end, &vec![RowType::L; r])?;
    }
    Ok(vec![
        CheckLine::new("involutions", involutive, format!("{} patterns", patterns.len())),
        CheckLine::new("weight transposition", transposes, format!("{} patterns", patterns.len())),
        CheckLine::new("evacuation", evac, "q_{r-1} against jeu de taquin evacuation"),
        CheckLine::new("crystal replay", replay, format!("{} states, word {:?}", states.len(), schutzenberger_word(r))),
    ])
}

/// Runs the generic suite under `count` random twists drawn from `seed`.
pub fn twist_checks(m: usize, count: u64, seed: u64) -> Result<Vec<CheckLine>> {
    let reg = Registry::standard(3, m);
    let base = WeightRegime::generic(&reg, m);
    let mut out = Vec::new();
    for j in 0..count {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(j));
        let tw = TwistData::random(&reg, m, &mut rng);
        let (before, after) = twist_suite(m, &base, &tw)?;
        let same = before.iter().zip(&after).all(|(a, b)| a.pass == b.pass) && before.len() == after.len();
        let passed = after.iter().filter(|r| r.pass).count();
        out.push(CheckLine::new(
            format!("twist {j}"),
            same && passed == after.len(),
            format!("{passed}/{} checks pass after twisting", after.len()),
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass() {
        assert!(crystal_involutions(&[1, 0, 0]).unwrap().iter().all(|c| c.pass));
        assert!(schutzenberger_suite(&[2, 1, 0]).unwrap().iter().all(|c| c.pass));
        assert_eq!(all_thetas(2)[0], vec![RowType::R; 2]);
    }
}
