//! Gelfand-Tsetlin patterns, semistandard tableaux and the involutions on them.
//!
//! A pattern with `r` rows stores row `i` (top row `i = 0`) as `rows[i]`, of
//! length `r - i`; entry `a_{i,j}` for `j = i..r` is `rows[i][j - i]`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::LaurentPoly;
use crate::error::{Error, Result};
use crate::lattice::{color_completion, State, SystemSpec};
use crate::weights::{RowType, Spin};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GTPattern {
    pub rows: Vec<Vec<i64>>,
}

impl GTPattern {
    /// Checks the triangular shape, nonnegativity and weak interlacing.
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        let r = rows.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != r - i {
                return Err(Error::Domain(format!("row {i} has {} entries, expected {}", row.len(), r - i)));
            }
            if row.iter().any(|&a| a < 0) {
                return Err(Error::Domain(format!("row {i} has a negative entry")));
            }
        }
        let p = GTPattern { rows };
        for i in 1..r {
            for j in i..r {
                let (up_l, up_r, a) = (p.a(i - 1, j - 1), p.a(i - 1, j), p.a(i, j));
                if !(up_l >= a && a >= up_r) {
                    return Err(Error::Domain(format!("entry a[{i},{j}] = {a} is outside [{up_r}, {up_l}]")));
                }
            }
        }
        Ok(p)
    }

    pub fn r(&self) -> usize {
        self.rows.len()
    }

    /// Entry `a_{i,j}` with row `i` counted from the top.
    pub fn a(&self, i: usize, j: usize) -> i64 {
        self.rows[i][j - i]
    }

    fn get(&self, i: usize, j: usize) -> Option<i64> {
        (i < self.r() && j >= i && j < self.r()).then(|| self.a(i, j))
    }

    pub fn top(&self) -> &[i64] {
        &self.rows[0]
    }

    /// Whether rows `i-1, i` form a pair of the given type: left-strict for
    /// `Gamma` (= `R`), right-strict for `Delta` (= `L`).
    pub fn pair_has_type(&self, i: usize, t: RowType) -> bool {
        (i..self.r()).all(|j| {
            let (l, rr, a) = (self.a(i - 1, j - 1), self.a(i - 1, j), self.a(i, j));
            match t {
                RowType::R => l > a && a >= rr,
                RowType::L => l >= a && a > rr,
            }
        })
    }

    /// Whether every row pair matches `theta_prime` (length `r - 1`).
    pub fn has_types(&self, theta_prime: &[RowType]) -> bool {
        theta_prime.len() + 1 == self.r() && theta_prime.iter().enumerate().all(|(k, &t)| self.pair_has_type(k + 1, t))
    }

    pub fn to_text(&self) -> String {
        self.rows
            .iter()
            .map(|row| row.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(" "))
            .collect::<Vec<_>>()
            .join("; ")
    }

    /// Parses rows separated by `;` or newlines, entries by whitespace or commas.
    pub fn parse(text: &str) -> Result<Self> {
        let rows: Vec<Vec<i64>> = text
            .split([';', '\n'])
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(|l| {
                l.split(|c: char| c.is_whitespace() || c == ',')
                    .filter(|t| !t.is_empty())
                    .map(|t| t.parse::<i64>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
                    .collect()
            })
            .collect::<Result<_>>()?;
        GTPattern::new(rows)
    }
}

impl fmt::Display for GTPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.to_text())
    }
}

/// All patterns with the given top row, in lexicographic order.
pub fn all_patterns(top: &[i64]) -> Vec<GTPattern> {
    fn rec(rows: &mut Vec<Vec<i64>>, out: &mut Vec<GTPattern>) {
        let last = rows.last().expect("nonempty").clone();
        if last.len() <= 1 {
            out.push(GTPattern { rows: rows.clone() });
            return;
        }
        let mut next = vec![0; last.len() - 1];
        fn fill(k: usize, last: &[i64], next: &mut Vec<i64>, rows: &mut Vec<Vec<i64>>, out: &mut Vec<GTPattern>) {
            if k == next.len() {
                rows.push(next.clone());
                rec(rows, out);
                rows.pop();
                return;
            }
            for v in last[k + 1]..=last[k] {
                next[k] = v;
                fill(k + 1, last, next, rows, out);
            }
        }
        fill(0, &last, &mut next, rows, out);
    }
    if top.is_empty() {
        return vec![];
    }
    let mut out = Vec::new();
    rec(&mut vec![top.to_vec()], &mut out);
    out.sort();
    out
}

/// `(d_{r-1}, d_{r-2} - d_{r-1}, ..., d_0 - d_1)` with `d_i` the row sums.
pub fn gt_weight(t: &GTPattern) -> Vec<i64> {
    let d: Vec<i64> = t.rows.iter().map(|row| row.iter().sum()).collect();
    let r = d.len();
    (0..r).map(|k| {
        let i = r - 1 - k;
        d[i] - d.get(i + 1).copied().unwrap_or(0)
    })
    .collect()
}

/// The involution `t_{r-i}` on row `i` (`1 <= i <= r-1`): each entry is
/// reflected in the interval allowed by its neighbors in rows `i-1, i+1`.
pub fn bk_involution(t: &GTPattern, i: usize) -> Result<GTPattern> {
    let r = t.r();
    if i == 0 || i >= r {
        return Err(Error::Precondition(format!("row {i} is not in 1..{r}")));
    }
    let mut out = t.clone();
    for j in i..r {
        let hi = [t.get(i - 1, j - 1), t.get(i + 1, j)].into_iter().flatten().min().expect("upper neighbor exists");
        let lo = [t.get(i - 1, j), t.get(i + 1, j + 1)].into_iter().flatten().max().expect("upper neighbor exists");
        out.rows[i][j - i] = hi + lo - t.a(i, j);
    }
    Ok(out)
}

/// `t_k` in the lower-index convention, acting on row `r - k`.
pub fn t_k(t: &GTPattern, k: usize) -> Result<GTPattern> {
    if k == 0 || k >= t.r() {
        return Err(Error::Precondition(format!("t_{k} undefined for r = {}", t.r())));
    }
    bk_involution(t, t.r() - k)
}

/// Indices `k` of `t_k` in application order for `q_{r-1}`:
/// `t_1, ..., t_{r-1}`, then `t_1, ..., t_{r-2}`, ..., then `t_1`.
pub fn schutzenberger_word(r: usize) -> Vec<usize> {
    (1..r).rev().flat_map(|top| 1..=top).collect()
}

/// `q_{r-1}` as the composition of Berenstein-Kirillov involutions.
pub fn schutzenberger(t: &GTPattern) -> Result<GTPattern> {
    let mut cur = t.clone();
    for k in schutzenberger_word(t.r()) {
        cur = t_k(&cur, k)?;
    }
    Ok(cur)
}

/// The minimal pattern of type `theta_prime` with top row `(r-1, ..., 0)`.
pub fn rho_shift(theta_prime: &[RowType], r: usize) -> Result<GTPattern> {
    if theta_prime.len() + 1 != r {
        return Err(Error::Precondition(format!("{} row-pair types for r = {r}", theta_prime.len())));
    }
    let mut rows = vec![(0..r as i64).rev().collect::<Vec<_>>()];
    for &ty in theta_prime {
        let mut next = rows.last().expect("nonempty").clone();
        match ty {
            RowType::R => {
                next.remove(0);
            }
            RowType::L => {
                next.pop();
            }
        }
        rows.push(next);
    }
    GTPattern::new(rows)
}

/// `sh`: adds the minimal strict pattern entrywise.
pub fn sh(t: &GTPattern, theta_prime: &[RowType]) -> Result<GTPattern> {
    let rho = rho_shift(theta_prime, t.r())?;
    let rows = t.rows.iter().zip(&rho.rows).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect()).collect();
    GTPattern::new(rows)
}

/// Inverse of [`sh`]; fails unless the pattern has the requested row-pair types.
pub fn unsh(t: &GTPattern, theta_prime: &[RowType]) -> Result<GTPattern> {
    if !t.has_types(theta_prime) {
        return Err(Error::Domain(format!("pattern {t} lacks row-pair types {theta_prime:?}")));
    }
    let rho = rho_shift(theta_prime, t.r())?;
    let rows = t.rows.iter().zip(&rho.rows).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect()).collect();
    GTPattern::new(rows)
}

/// Three consecutive rows `x, y, z` with `|x| = |y| + 1 = |z| + 2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShortPattern {
    pub x: Vec<i64>,
    pub y: Vec<i64>,
    pub z: Vec<i64>,
}

impl ShortPattern {
    pub fn new(x: Vec<i64>, y: Vec<i64>, z: Vec<i64>) -> Result<Self> {
        if x.len() != y.len() + 1 || y.len() != z.len() + 1 {
            return Err(Error::Domain("short pattern rows must shrink by one".into()));
        }
        let ok = (0..y.len()).all(|j| x[j] >= y[j] && y[j] >= x[j + 1])
            && (0..z.len()).all(|j| y[j] >= z[j] && z[j] >= y[j + 1]);
        if !ok {
            return Err(Error::Domain("short pattern rows do not interlace".into()));
        }
        Ok(ShortPattern { x, y, z })
    }

    /// `(sum y - sum z, sum x - sum y)`.
    pub fn weight(&self) -> (i64, i64) {
        let s = |v: &[i64]| v.iter().sum::<i64>();
        (s(&self.y) - s(&self.z), s(&self.x) - s(&self.y))
    }

    /// Reflection of the middle row.
    pub fn t_short(&self) -> ShortPattern {
        let n = self.y.len();
        let y = (0..n)
            .map(|j| {
                let hi = [Some(self.x[j]), j.checked_sub(1).and_then(|p| self.z.get(p).copied())]
                    .into_iter()
                    .flatten()
                    .min()
                    .expect("x exists");
                let lo = [Some(self.x[j + 1]), self.z.get(j).copied()].into_iter().flatten().max().expect("x exists");
                hi + lo - self.y[j]
            })
            .collect();
        ShortPattern { x: self.x.clone(), y, z: self.z.clone() }
    }
}

/// A semistandard tableau with entries in `1..=r`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Ssyt {
    pub rows: Vec<Vec<u32>>,
    pub r: usize,
}

impl Ssyt {
    pub fn new(rows: Vec<Vec<u32>>, r: usize) -> Result<Self> {
        let rows: Vec<Vec<u32>> = rows.into_iter().filter(|row| !row.is_empty()).collect();
        for (p, row) in rows.iter().enumerate() {
            if row.iter().any(|&v| v == 0 || v as usize > r) {
                return Err(Error::Domain(format!("row {p} has entries outside 1..={r}")));
            }
            if row.windows(2).any(|w| w[0] > w[1]) {
                return Err(Error::Domain(format!("row {p} is not weakly increasing")));
            }
            if p > 0 {
                let above = &rows[p - 1];
                if row.len() > above.len() {
                    return Err(Error::Domain(format!("row {p} is longer than the row above")));
                }
                if row.iter().zip(above).any(|(b, a)| b <= a) {
                    return Err(Error::Domain(format!("column strictness fails in row {p}")));
                }
            }
        }
        Ok(Ssyt { rows, r })
    }

    pub fn shape(&self) -> Vec<usize> {
        self.rows.iter().map(Vec::len).collect()
    }

    /// Number of entries equal to `1, ..., r`.
    pub fn content(&self) -> Vec<i64> {
        let mut c = vec![0; self.r];
        for &v in self.rows.iter().flatten() {
            c[v as usize - 1] += 1;
        }
        c
    }

    fn at(&self, p: usize, q: usize) -> Option<u32> {
        self.rows.get(p).and_then(|row| row.get(q)).copied()
    }
}

impl fmt::Display for Ssyt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> =
            self.rows.iter().map(|row| row.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")).collect();
        write!(f, "[{}]", rows.join(" / "))
    }
}

/// Row `k` of the pattern is the shape of the entries `<= r - k`.
pub fn ssyt_from_gt(t: &GTPattern) -> Result<Ssyt> {
    let r = t.r();
    let mut rows = Vec::new();
    for p in 0..r {
        let mut row = Vec::new();
        let mut prev = 0;
        for v in 1..=r {
            let le = t.rows[r - v].get(p).copied().unwrap_or(0);
            if le < prev {
                return Err(Error::Domain(format!("pattern {t} does not describe a tableau")));
            }
            row.extend(std::iter::repeat_n(v as u32, (le - prev) as usize));
            prev = le;
        }
        rows.push(row);
    }
    Ssyt::new(rows, r)
}

pub fn gt_from_ssyt(s: &Ssyt) -> Result<GTPattern> {
    let r = s.r;
    if s.rows.len() > r {
        return Err(Error::Domain(format!("tableau has more than {r} rows")));
    }
    let rows = (0..r)
        .map(|k| {
            (0..r - k)
                .map(|p| s.rows.get(p).map_or(0, |row| row.iter().filter(|&&v| v as usize <= r - k).count() as i64))
                .collect()
        })
        .collect();
    GTPattern::new(rows)
}

/// All tableaux of the given shape with entries in `1..=r`, built box by box.
pub fn all_ssyt(shape: &[usize], r: usize) -> Vec<Ssyt> {
    let shape: Vec<usize> = shape.iter().copied().filter(|&l| l > 0).collect();
    let cells: Vec<(usize, usize)> = shape.iter().enumerate().flat_map(|(p, &l)| (0..l).map(move |q| (p, q))).collect();
    let mut rows: Vec<Vec<u32>> = shape.iter().map(|&l| vec![0; l]).collect();
    let mut out = Vec::new();
    fn rec(k: usize, cells: &[(usize, usize)], rows: &mut Vec<Vec<u32>>, r: usize, out: &mut Vec<Ssyt>) {
        if k == cells.len() {
            out.push(Ssyt { rows: rows.clone(), r });
            return;
        }
        let (p, q) = cells[k];
        let lo_row = if q > 0 { rows[p][q - 1] } else { 1 };
        let lo_col = if p > 0 { rows[p - 1][q] + 1 } else { 1 };
        for v in lo_row.max(lo_col).max(1)..=r as u32 {
            rows[p][q] = v;
            rec(k + 1, cells, rows, r, out);
        }
        rows[p][q] = 0;
    }
    rec(0, &cells, &mut rows, r, &mut out);
    out
}

/// The Bender-Knuth involution exchanging the roles of `i` and `i + 1`.
pub fn bender_knuth(s: &Ssyt, i: u32) -> Result<Ssyt> {
    if i == 0 || i as usize >= s.r {
        return Err(Error::Precondition(format!("BK_{i} undefined for entries 1..={}", s.r)));
    }
    let mut rows = s.rows.clone();
    for p in 0..rows.len() {
        let row = &s.rows[p];
        // Free entries: an i without i+1 below, an i+1 without i above.
        let free: Vec<usize> = (0..row.len())
            .filter(|&q| {
                (row[q] == i && s.at(p + 1, q) != Some(i + 1))
                    || (row[q] == i + 1 && (p == 0 || s.at(p - 1, q) != Some(i)))
            })
            .collect();
        if free.is_empty() {
            continue;
        }
        let a = free.iter().filter(|&&q| row[q] == i).count();
        let b = free.len() - a;
        for (k, &q) in free.iter().enumerate() {
            rows[p][q] = if k < b { i } else { i + 1 };
        }
    }
    Ssyt::new(rows, s.r)
}

/// Evacuation by repeated jeu de taquin: remove the corner entry `a`, slide
/// the hole outward, and record `r + 1 - a` where the hole leaves the shape.
pub fn evacuation(s: &Ssyt) -> Result<Ssyt> {
    let r = s.r as u32;
    let mut cur: Vec<Vec<Option<u32>>> = s.rows.iter().map(|row| row.iter().map(|&v| Some(v)).collect()).collect();
    let mut out: Vec<Vec<u32>> = s.rows.iter().map(|row| vec![0; row.len()]).collect();
    let total: usize = s.rows.iter().map(Vec::len).sum();
    for _ in 0..total {
        let a = cur[0][0].take().expect("shape is nonempty");
        let (mut p, mut q) = (0usize, 0usize);
        loop {
            let right = cur[p].get(q + 1).copied().flatten();
            let below = cur.get(p + 1).and_then(|row| row.get(q)).copied().flatten();
            let go_down = match (right, below) {
                (None, None) => break,
                (Some(_), None) => false,
                (None, Some(_)) => true,
                (Some(x), Some(y)) => y <= x,
            };
            if go_down {
                cur[p][q] = cur[p + 1][q].take();
                p += 1;
            } else {
                cur[p][q] = cur[p][q + 1].take();
                q += 1;
            }
        }
        // The hole is an outer corner of the remaining shape: drop it.
        cur[p].truncate(q);
        while cur.last().is_some_and(Vec::is_empty) {
            cur.pop();
        }
        out[p][q] = r + 1 - a;
    }
    Ssyt::new(out, s.r)
}

/// The lattice row types `Theta` truncated to row-pair types.
pub fn truncate_types(theta: &[RowType]) -> Vec<RowType> {
    theta[..theta.len().saturating_sub(1)].to_vec()
}

/// Row `i` of the pattern lists the column numbers of occupied vertical edges
/// below lattice row `i`, left to right (row 0 is the top boundary).
pub fn gt_from_state(s: &State, theta: &[RowType]) -> Result<GTPattern> {
    let r = theta.len();
    if s.rows() != r {
        return Err(Error::Domain(format!("state has {} rows, types give {r}", s.rows())));
    }
    let cols = s.cols();
    let rows: Vec<Vec<i64>> = (0..r)
        .map(|i| (0..cols).filter(|&x| s.vertical[i][x] != 0).map(|x| (cols - 1 - x) as i64).collect())
        .collect();
    let t = GTPattern::new(rows)?;
    if !t.has_types(&truncate_types(theta)) {
        return Err(Error::Domain(format!("state pattern {t} does not match row types")));
    }
    Ok(t)
}

/// The crystal system with top row given by the pattern's first row.
pub fn crystal_system_for(t: &GTPattern, theta: &[RowType], top_colors: Option<Vec<Spin>>) -> Result<SystemSpec> {
    let top: Vec<usize> = t
        .top()
        .iter()
        .map(|&a| usize::try_from(a).map_err(|_| Error::Domain("negative column".into())))
        .collect::<Result<_>>()?;
    SystemSpec::crystal(theta.to_vec(), top, top_colors)
}

/// Inverse of [`gt_from_state`]: lays out uncolored paths and colors them.
pub fn state_from_gt(t: &GTPattern, theta: &[RowType], top_colors: Option<Vec<Spin>>) -> Result<State> {
    let r = t.r();
    if theta.len() != r {
        return Err(Error::Precondition(format!("{} row types for a pattern with {r} rows", theta.len())));
    }
    if !t.has_types(&truncate_types(theta)) {
        return Err(Error::Domain(format!("pattern {t} violates the strictness of {theta:?}")));
    }
    let spec = crystal_system_for(t, theta, top_colors)?;
    let cols = spec.cols();
    let mut layout = State { horizontal: vec![vec![0; cols + 1]; r], vertical: vec![vec![0; cols]; r + 1] };
    for (i, row) in t.rows.iter().enumerate() {
        for &a in row {
            layout.vertical[i][cols - 1 - a as usize] = 1;
        }
    }
    for i in 0..r {
        let (top, bottom) = (layout.vertical[i].clone(), layout.vertical[i + 1].clone());
        let mut h: i64 = 0;
        let order: Vec<usize> = match theta[i] {
            RowType::R => (0..cols).collect(),
            RowType::L => (0..cols).rev().collect(),
        };
        for x in order {
            h += i64::from(top[x] != 0) - i64::from(bottom[x] != 0);
            if !(0..=1).contains(&h) {
                return Err(Error::Domain(format!("row {i} overlaps at column {}", cols - 1 - x)));
            }
            let slot = match theta[i] {
                RowType::R => x + 1,
                RowType::L => x,
            };
            layout.horizontal[i][slot] = h as Spin;
        }
    }
    color_completion(&layout, &spec)
}

/// `z^{w0 wt(T)}` over the system's row parameters.
pub fn pattern_monomial(t: &GTPattern, z: &[LaurentPoly]) -> Result<LaurentPoly> {
    let mut w = gt_weight(t);
    w.reverse();
    let reg = z.first().ok_or_else(|| Error::Precondition("no row parameters".into()))?.registry();
    let mut out = LaurentPoly::one(reg);
    for (zi, e) in z.iter().zip(w) {
        out = &out * &zi.pow(e as i32)?;
    }
    Ok(out)
}

/// The state-level involution `t_{r-i}`: requires `theta[i-1] != theta[i]`
/// and returns the image state with types `s_i theta`.
pub fn t_on_state(s: &State, theta: &[RowType], i: usize) -> Result<(State, Vec<RowType>)> {
    if i == 0 || i >= theta.len() || theta[i - 1] == theta[i] {
        return Err(Error::Precondition(format!("rows {i}, {} must have different types", i + 1)));
    }
    let t = gt_from_state(s, theta)?;
    let t2 = bk_involution(&t, i)?;
    let mut theta2 = theta.to_vec();
    theta2.swap(i - 1, i);
    let tops = top_colors_of(s);
    Ok((state_from_gt(&t2, &theta2, Some(tops))?, theta2))
}

/// Colors along the top boundary, left to right.
pub fn top_colors_of(s: &State) -> Vec<Spin> {
    s.vertical[0]
        .iter()
        .filter(|&&v| v != 0)
        .map(|&v| v.trailing_zeros() as Spin + 1)
        .collect()
}

/// Changes the last row's type, keeping the pattern.
pub fn flip_last_row(s: &State, theta: &[RowType]) -> Result<(State, Vec<RowType>)> {
    let t = gt_from_state(s, theta)?;
    let mut theta2 = theta.to_vec();
    let last = theta2.len() - 1;
    theta2[last] = theta2[last].flip();
    Ok((state_from_gt(&t, &theta2, Some(top_colors_of(s)))?, theta2))
}

/// One step of the crystal replay.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplayStep {
    pub operation: String,
    pub theta: String,
    pub sigma: Vec<Spin>,
    pub weight_ok: bool,
    pub sigma_ok: bool,
}

/// Carries a state of all-`Gamma` rows to all-`Delta` rows by last-row flips and
/// the involutions `t_1, ..., t_{r-1}, t_1, ..., t_1`, checking each step's
/// weight rule `wt(t_{r-i} s)(z) = wt(s)(s_i z)` and exit rule `sigma -> s_i sigma`.
/// Returns the steps, the final state and the word of `t` indices used.
pub fn crystal_replay(s: &State, z: &[LaurentPoly]) -> Result<(Vec<ReplayStep>, State, Vec<usize>)> {
    let r = s.rows();
    let mut theta = vec![RowType::R; r];
    let mut cur = s.clone();
    // Parameters carried by each row: swapping rows swaps parameters.
    let mut zs: Vec<LaurentPoly> = z.to_vec();
    let weight = |st: &State, th: &[RowType], zz: &[LaurentPoly]| -> Result<LaurentPoly> {
        pattern_monomial(&gt_from_state(st, th)?, zz)
    };
    let mut steps = Vec::new();
    let mut word = Vec::new();
    let show = |th: &[RowType]| th.iter().map(|t| t.crystal_letter()).collect::<String>();
    for stage in 1..=r {
        let w0 = weight(&cur, &theta, &zs)?;
        let sig0 = cur.sigma(&theta);
        let (next, th2) = flip_last_row(&cur, &theta)?;
        let ok = weight(&next, &th2, &zs)? == w0;
        let sig = next.sigma(&th2);
        steps.push(ReplayStep {
            operation: "flip last row".into(),
            theta: show(&th2),
            sigma_ok: sig == sig0,
            sigma: sig,
            weight_ok: ok,
        });
        cur = next;
        theta = th2;
        for i in (stage..r).rev() {
            let w_before = weight(&cur, &theta, &zs)?;
            let mut sig_expect = cur.sigma(&theta);
            sig_expect.swap(i - 1, i);
            let (next, th2) = t_on_state(&cur, &theta, i)?;
            zs.swap(i - 1, i);
            // wt(t s)(z) = wt(s)(s_i z): evaluate the new state at swapped parameters.
            let w_after = weight(&next, &th2, &zs)?;
            let sig = next.sigma(&th2);
            word.push(r - i);
            steps.push(ReplayStep {
                operation: format!("t_{}", r - i),
                theta: show(&th2),
                sigma_ok: sig == sig_expect,
                sigma: sig,
                weight_ok: w_after == w_before,
            });
            cur = next;
            theta = th2;
        }
    }
    Ok((steps, cur, word))
}

/// Groups patterns by weight; used for counting and diagnostics.
pub fn weight_histogram(ps: &[GTPattern]) -> BTreeMap<Vec<i64>, usize> {
    let mut h = BTreeMap::new();
    for p in ps {
        *h.entry(gt_weight(p)).or_insert(0) += 1;
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pat(s: &str) -> GTPattern {
        GTPattern::parse(s).unwrap()
    }

    #[test]
    fn figure_example() {
        let t = pat("4 2 0; 2 0; 2");
        assert_eq!(gt_weight(&t), vec![2, 0, 4]);
        assert_eq!(bk_involution(&t, 1).unwrap(), pat("4 2 0; 4 2; 2"));
        let s = ssyt_from_gt(&t).unwrap();
        assert_eq!(s.rows, vec![vec![1, 1, 3, 3], vec![3, 3]]);
        assert_eq!(gt_from_ssyt(&s).unwrap(), t);
    }

    #[test]
    fn rho_example() {
        use RowType::{L, R};
        assert_eq!(rho_shift(&[R, L, L], 4).unwrap(), pat("3 2 1 0; 2 1 0; 2 1; 2"));
        assert_eq!(rho_shift(&[], 1).unwrap(), pat("0"));
    }

    #[test]
    fn evacuation_matches_q() {
        for lam in [vec![2, 1, 0], vec![3, 1, 0], vec![2, 2, 0], vec![3, 2, 0, 0]] {
            for t in all_patterns(&lam) {
                let q = schutzenberger(&t).unwrap();
                let e = evacuation(&ssyt_from_gt(&t).unwrap()).unwrap();
                assert_eq!(ssyt_from_gt(&q).unwrap(), e, "{t}");
            }
        }
    }

    #[test]
    fn bk_intertwines() {
        let lam = [3i64, 1, 0];
        for t in all_patterns(&lam) {
            for k in 1..3 {
                let lhs = ssyt_from_gt(&t_k(&t, k).unwrap()).unwrap();
                let rhs = bender_knuth(&ssyt_from_gt(&t).unwrap(), k as u32).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
        assert_eq!(all_patterns(&lam).len(), all_ssyt(&[3, 1, 0], 3).len());
    }

    #[test]
    fn state_round_trip_and_weights() {
        use crate::lattice::{enumerate_states, state_weight};
        for theta in [vec![RowType::R, RowType::L, RowType::R], vec![RowType::L; 3]] {
            let spec = SystemSpec::crystal(theta.clone(), vec![4, 2, 0], None).unwrap();
            let states = enumerate_states(&spec).unwrap();
            assert!(!states.is_empty());
            for s in &states {
                let t = gt_from_state(s, &theta).unwrap();
                assert_eq!(&state_from_gt(&t, &theta, None).unwrap(), s);
                assert_eq!(state_weight(s, &spec).unwrap(), pattern_monomial(&t, &spec.z).unwrap());
            }
        }
    }

    #[test]
    fn replay_reaches_delta() {
        use crate::lattice::enumerate_states;
        let spec = SystemSpec::crystal(vec![RowType::R; 3], vec![4, 2, 0], None).unwrap();
        for s in enumerate_states(&spec).unwrap() {
            let (steps, end, word) = crystal_replay(&s, &spec.z).unwrap();
            assert!(steps.iter().all(|st| st.weight_ok && st.sigma_ok), "{steps:#?}");
            assert_eq!(word, schutzenberger_word(3));
            let mut sig = s.sigma(&spec.theta);
            sig.reverse();
            assert_eq!(end.sigma(&[RowType::L; 3]), sig);
            let t = gt_from_state(&s, &spec.theta).unwrap();
            let q = schutzenberger(&t).unwrap();
            assert_eq!(gt_from_state(&end, &[RowType::L; 3]).unwrap(), q);
        }
    }
}
