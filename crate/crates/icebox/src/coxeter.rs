//! The 0-Hecke monoid of the symmetric group, its action on color flags, the
//! flags of crystal states, and highlighted short patterns.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gt::{bk_involution, gt_from_state, GTPattern};
use crate::lattice::State;
use crate::weights::{RowType, Spin};

/// An element of the monoid, stored as the permutation in one-line notation
/// (`perm[p]` is the image of `p`, 0-based) of the same-named group element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MonoidElement {
    pub perm: Vec<usize>,
}

impl MonoidElement {
    pub fn identity(r: usize) -> Self {
        MonoidElement { perm: (0..r).collect() }
    }

    pub fn r(&self) -> usize {
        self.perm.len()
    }

    /// Number of inversions.
    pub fn length(&self) -> usize {
        let p = &self.perm;
        (0..p.len()).map(|a| (a + 1..p.len()).filter(|&b| p[a] > p[b]).count()).sum()
    }

    /// Right multiplication by the generator `m_i` (1-based): `w s_i` when this
    /// lengthens `w`, else `w`.
    pub fn mul_gen(&self, i: usize) -> Result<Self> {
        if i == 0 || i >= self.r() {
            return Err(Error::Domain(format!("generator m_{i} outside 1..{}", self.r())));
        }
        let mut out = self.clone();
        if out.perm[i - 1] < out.perm[i] {
            out.perm.swap(i - 1, i);
        }
        Ok(out)
    }

    /// A reduced word, taking the smallest right descent at each step; the
    /// word `[i_1, ..., i_k]` means `m_{i_1} ... m_{i_k}`.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut w = self.perm.clone();
        let mut rev = Vec::new();
        while let Some(d) = (0..w.len().saturating_sub(1)).find(|&p| w[p] > w[p + 1]) {
            w.swap(d, d + 1);
            rev.push(d + 1);
        }
        rev.reverse();
        rev
    }
}

impl fmt::Display for MonoidElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = self.reduced_word();
        if w.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = w.iter().map(|i| format!("m{i}")).collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// The product `m_{w_1} m_{w_2} ... m_{w_k}` in the monoid of rank `r`.
pub fn demazure_product(r: usize, word: &[usize]) -> Result<MonoidElement> {
    let mut e = MonoidElement::identity(r);
    for &i in word {
        e = e.mul_gen(i)?;
    }
    Ok(e)
}

/// An `r`-tuple of colors.
pub type Flag = Vec<Spin>;

/// `m_i d`: swap entries `i, i+1` when they are out of order.
pub fn gen_act(i: usize, d: &[Spin]) -> Result<Flag> {
    if i == 0 || i >= d.len() {
        return Err(Error::Domain(format!("generator m_{i} outside 1..{}", d.len())));
    }
    let mut out = d.to_vec();
    if out[i - 1] > out[i] {
        out.swap(i - 1, i);
    }
    Ok(out)
}

/// Applies a word to a flag (rightmost generator first).
pub fn word_act(word: &[usize], d: &[Spin]) -> Result<Flag> {
    let mut cur = d.to_vec();
    for &i in word.iter().rev() {
        cur = gen_act(i, &cur)?;
    }
    Ok(cur)
}

pub fn monoid_act(e: &MonoidElement, d: &[Spin]) -> Result<Flag> {
    if e.r() != d.len() {
        return Err(Error::Precondition(format!("flag of length {} for rank {}", d.len(), e.r())));
    }
    word_act(&e.reduced_word(), d)
}

/// A vertex where two paths meet: `flags[i][j + 1] = m_k flags[i][j]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Meeting {
    pub row: usize,
    pub j: usize,
    pub k: usize,
}

/// All flags `Sigma_{i,j}` of a crystal state, `i = 0..r`, `j = 0..=N`, plus
/// `Sigma_r`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlagTable {
    pub flags: Vec<Vec<Flag>>,
    pub last: Flag,
    pub meetings: Vec<Meeting>,
}

impl FlagTable {
    /// `Sigma_i = Sigma_{i,0}` for `i = 0..=r`.
    pub fn row_flags(&self) -> Vec<Flag> {
        self.flags.iter().map(|row| row[0].clone()).chain(std::iter::once(self.last.clone())).collect()
    }
}

fn color_of(v: u32) -> Spin {
    v.trailing_zeros() as Spin + 1
}

/// Colors on the output boundary of the first `i` rows plus `j` vertices of
/// row `i`, read counterclockwise: left exits downward, bottom edges left to
/// right, right exits upward.
fn flag_at(s: &State, theta: &[RowType], i: usize, j: usize) -> Flag {
    let cols = s.cols();
    let mut out = Vec::new();
    for row in 0..i {
        if theta[row] == RowType::L && s.horizontal[row][0] != 0 {
            out.push(s.horizontal[row][0]);
        }
    }
    let push_v = |out: &mut Flag, b: usize, xs: std::ops::Range<usize>| {
        for x in xs {
            if s.vertical[b][x] != 0 {
                out.push(color_of(s.vertical[b][x]));
            }
        }
    };
    if i < theta.len() {
        match theta[i] {
            RowType::R => {
                push_v(&mut out, i + 1, 0..j);
                if s.horizontal[i][j] != 0 {
                    out.push(s.horizontal[i][j]);
                }
                push_v(&mut out, i, j..cols);
            }
            RowType::L => {
                push_v(&mut out, i, 0..cols - j);
                if s.horizontal[i][cols - j] != 0 {
                    out.push(s.horizontal[i][cols - j]);
                }
                push_v(&mut out, i + 1, cols - j..cols);
            }
        }
    }
    for row in (0..i).rev() {
        if theta[row] == RowType::R && s.horizontal[row][cols] != 0 {
            out.push(s.horizontal[row][cols]);
        }
    }
    out
}

/// Computes every flag of a crystal state and the vertices where paths meet,
/// checking `Sigma_{i,j+1} = m_k Sigma_{i,j}` at each meeting.
pub fn state_flags(s: &State, theta: &[RowType]) -> Result<FlagTable> {
    let r = theta.len();
    let cols = s.cols();
    if s.rows() != r {
        return Err(Error::Precondition("row count mismatch".into()));
    }
    let mut flags = Vec::with_capacity(r);
    let mut meetings = Vec::new();
    let mut left_exits = 0usize;
    for i in 0..r {
        let row: Vec<Flag> = (0..=cols).map(|j| flag_at(s, theta, i, j)).collect();
        for f in &row {
            if f.len() != r {
                return Err(Error::Domain(format!("flag {f:?} in row {i} does not have {r} colors")));
            }
        }
        let mut bottoms_before = 0usize;
        let mut tops_after: usize = (0..cols).filter(|&x| s.vertical[i][x] != 0).count();
        for j in 0..cols {
            // The vertex added when passing from j to j + 1.
            let x = match theta[i] {
                RowType::R => j,
                RowType::L => cols - 1 - j,
            };
            let top = s.vertical[i][x] != 0;
            let bottom = s.vertical[i + 1][x] != 0;
            let side_in = match theta[i] {
                RowType::R => s.horizontal[i][x] != 0,
                RowType::L => s.horizontal[i][x + 1] != 0,
            };
            if top {
                tops_after -= 1;
            }
            if top && side_in {
                let k = match theta[i] {
                    // Left edge then top edge; bottoms to the left come first.
                    RowType::R => left_exits + bottoms_before + 1,
                    // Top edge then right edge; tops to the left come first.
                    RowType::L => left_exits + tops_after + 1,
                };
                let expect = gen_act(k, &row[j])?;
                if expect != row[j + 1] {
                    return Err(Error::Internal(format!("flag rule fails at row {i}, vertex {j}")));
                }
                meetings.push(Meeting { row: i, j, k });
            } else if row[j] != row[j + 1] {
                return Err(Error::Internal(format!("flag changes without a meeting at row {i}, vertex {j}")));
            }
            if bottom {
                bottoms_before += 1;
            }
        }
        if theta[i] == RowType::L {
            left_exits += 1;
        }
        flags.push(row);
    }
    let last = flag_at(s, theta, r, 0);
    Ok(FlagTable { flags, last, meetings })
}

/// Exit colors from the final flag: left exits come first in row order,
/// then right exits from the bottom row upward.
pub fn sigma_from_flag(last: &[Spin], theta: &[RowType]) -> Vec<Spin> {
    let mut sigma = vec![0; theta.len()];
    let mut it = last.iter();
    for (i, t) in theta.iter().enumerate() {
        if *t == RowType::L {
            sigma[i] = *it.next().unwrap_or(&0);
        }
    }
    for (i, t) in theta.iter().enumerate().rev() {
        if *t == RowType::R {
            sigma[i] = *it.next().unwrap_or(&0);
        }
    }
    sigma
}

/// Highlighted generator columns of the row pair `(i, i+1)` whose lower row
/// has type `t`, as a word in application-reversed (product) order.
/// `l` is the number of left-moving rows above.
pub fn row_pair_word(upper: &[i64], lower: &[i64], t: RowType, l: usize) -> Vec<usize> {
    match t {
        RowType::R => (0..lower.len()).rev().filter(|&j| lower[j] == upper[j + 1]).map(|j| l + 1 + j).collect(),
        RowType::L => (0..lower.len()).filter(|&j| lower[j] == upper[j]).map(|j| l + 1 + j).collect(),
    }
}

/// The monoid element carrying `Sigma_{i}` to `Sigma_{i+1}` read off the
/// pattern's row pair `(i, i+1)` (lattice row `i + 1`, type `theta[i]`).
pub fn pattern_monoid_element(t: &GTPattern, i: usize, theta: &[RowType]) -> Result<MonoidElement> {
    let r = t.r();
    if i >= r || theta.len() != r {
        return Err(Error::Precondition(format!("row pair {i} outside a pattern with {r} rows")));
    }
    if i + 1 == r {
        return Ok(MonoidElement::identity(r));
    }
    let l = theta[..i].iter().filter(|&&x| x == RowType::L).count();
    demazure_product(r, &row_pair_word(&t.rows[i], &t.rows[i + 1], theta[i], l))
}

/// Highlight state of one generator slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Slot {
    Absent,
    Off,
    On,
}

impl Slot {
    fn on(self) -> bool {
        self == Slot::On
    }

    fn from(b: bool) -> Slot {
        if b { Slot::On } else { Slot::Off }
    }
}

/// Two rows of generator slots `m_{l+1} .. m_{l+n}` with a central column.
/// Columns left of the center are read like the Gamma-over-Delta form and
/// columns right of it like the Delta-over-Gamma form; the center's own slots
/// are unused. With the center at column 1 this is the Delta-over-Gamma form,
/// at column `n` the Gamma-over-Delta form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HighlightPattern {
    pub offset: usize,
    pub top: Vec<Slot>,
    pub bottom: Vec<Slot>,
    /// 1-based center column.
    pub center: usize,
    pub center_on: bool,
}

impl HighlightPattern {
    pub fn n(&self) -> usize {
        self.top.len()
    }

    fn validate(&self) -> Result<()> {
        let n = self.n();
        if self.bottom.len() != n || self.center == 0 || self.center > n {
            return Err(Error::Domain("highlight pattern has inconsistent dimensions".into()));
        }
        Ok(())
    }

    /// The product word: bottom entries inward toward the center, the center,
    /// then top entries outward.
    pub fn word(&self) -> Vec<usize> {
        let c = self.center;
        let n = self.n();
        let g = |col: usize| self.offset + col;
        let mut w = Vec::new();
        w.extend((1..c).filter(|&col| self.bottom[col - 1].on()).map(g));
        w.extend((c + 1..=n).rev().filter(|&col| self.bottom[col - 1].on()).map(g));
        if self.center_on {
            w.push(g(c));
        }
        w.extend((1..c).rev().filter(|&col| self.top[col - 1].on()).map(g));
        w.extend((c + 1..=n).filter(|&col| self.top[col - 1].on()).map(g));
        w
    }

    pub fn element(&self, r: usize) -> Result<MonoidElement> {
        demazure_product(r, &self.word())
    }

    /// Whether column `col` (1-based) has a highlighted entry.
    pub fn column_on(&self, col: usize) -> bool {
        if col == self.center {
            self.center_on
        } else {
            self.top[col - 1].on() || self.bottom[col - 1].on()
        }
    }

    /// Columns without any highlighted entry.
    pub fn separators(&self) -> Vec<usize> {
        (1..=self.n()).filter(|&c| !self.column_on(c)).collect()
    }

    pub fn render(&self) -> String {
        let cell = |s: Slot, col: usize| match s {
            Slot::Absent => " .  ".to_string(),
            Slot::Off => format!(" m{} ", self.offset + col),
            Slot::On => format!("[m{}]", self.offset + col),
        };
        let mut top = String::new();
        let mut bottom = String::new();
        for col in 1..=self.n() {
            if col == self.center {
                let c = if self.center_on { format!("<m{}>", self.offset + col) } else { format!("<{}>", self.offset + col) };
                top.push_str(&c);
                bottom.push_str(" || ");
            } else {
                top.push_str(&cell(self.top[col - 1], col));
                bottom.push_str(&cell(self.bottom[col - 1], col));
            }
        }
        format!("{top}\n{bottom}")
    }
}

fn normalize_blocks(p: &mut HighlightPattern, leftmost: bool) {
    let n = p.n();
    for col in 1..=n {
        if col == p.center || !p.column_on(col) {
            continue;
        }
        let neighbor = if leftmost { col.checked_sub(1).filter(|&c| c >= 1) } else { Some(col + 1).filter(|&c| c <= n) };
        let starts = neighbor.is_none_or(|c| !p.column_on(c));
        if starts {
            p.top[col - 1] = Slot::On;
            p.bottom[col - 1] = Slot::Absent;
        }
    }
}

/// Decorates a short pattern whose middle row is left-moving and lower row
/// right-moving (the Delta-over-Gamma form). `z` may be empty when the middle
/// row is the last pattern row. Block-leading columns are normalized to a
/// single highlighted top entry.
pub fn decorate_dg(x: &[i64], y: &[i64], z: &[i64], l: usize) -> Result<HighlightPattern> {
    let n = y.len();
    if x.len() != n + 1 || !(z.len() + 1 == n || (z.is_empty() && n == 1)) {
        return Err(Error::Domain("short pattern rows have wrong lengths".into()));
    }
    let top: Vec<Slot> = (0..n).map(|j| Slot::from(x[j] == y[j])).collect();
    let mut bottom = vec![Slot::Absent; n];
    for (j, &zj) in z.iter().enumerate() {
        bottom[j + 1] = Slot::from(zj == y[j + 1]);
    }
    let center_on = top[0].on();
    let mut p = HighlightPattern { offset: l, top, bottom, center: 1, center_on };
    p.top[0] = Slot::Absent;
    normalize_blocks(&mut p, true);
    Ok(p)
}

/// Decorates a short pattern in the Gamma-over-Delta form, normalizing
/// block-ending columns to a single highlighted top entry.
pub fn decorate_gd(x: &[i64], y: &[i64], z: &[i64], l: usize) -> Result<HighlightPattern> {
    let n = y.len();
    if x.len() != n + 1 || !(z.len() + 1 == n || (z.is_empty() && n == 1)) {
        return Err(Error::Domain("short pattern rows have wrong lengths".into()));
    }
    let top: Vec<Slot> = (0..n).map(|j| Slot::from(y[j] == x[j + 1])).collect();
    let mut bottom = vec![Slot::Absent; n];
    for (j, &zj) in z.iter().enumerate() {
        bottom[j] = Slot::from(y[j] == zj);
    }
    let center_on = top[n - 1].on();
    let mut p = HighlightPattern { offset: l, top, bottom, center: n, center_on };
    p.top[n - 1] = Slot::Absent;
    normalize_blocks(&mut p, false);
    Ok(p)
}

/// Moves the center from column 1 to column `n` one column at a time, using
/// the braid relation or a trivial rewrite at each step. Returns every
/// intermediate pattern (the input first); each step is checked to preserve
/// the monoid element.
pub fn dg_to_gd(p: &HighlightPattern, r: usize) -> Result<Vec<HighlightPattern>> {
    p.validate()?;
    if p.center != 1 {
        return Err(Error::Domain("pattern is not in the Delta-over-Gamma form".into()));
    }
    let n = p.n();
    let mut steps = vec![p.clone()];
    let mut cur = p.clone();
    let target = p.element(r)?;
    for i in 1..n {
        let (t, b) = (cur.top[i], cur.bottom[i]);
        use Slot::{Absent, Off, On};
        let (new_t, new_b, new_c) = match (cur.center_on, t, b) {
            (true, On, On) => (On, On, true),
            (true, On, Off) => (Off, On, true),
            (true, Off, On) => (On, Off, true),
            (true, Off, Off) => (On, Absent, false),
            (false, Off, Off) => (Off, Off, false),
            (false, On, Absent) => (Off, Off, true),
            other => {
                return Err(Error::Domain(format!("column {} has unexpected highlights {other:?}", i + 1)));
            }
        };
        cur.top[i - 1] = new_t;
        cur.bottom[i - 1] = new_b;
        cur.top[i] = Slot::Absent;
        cur.bottom[i] = Slot::Absent;
        cur.center = i + 1;
        cur.center_on = new_c;
        if cur.element(r)? != target {
            return Err(Error::Internal(format!("step {i} changed the monoid element")));
        }
        steps.push(cur.clone());
    }
    Ok(steps)
}

/// For a crystal pattern with `theta[i-1] = Delta`, `theta[i] = Gamma`
/// (1-based rows `i, i+1`), decorates rows `i-1, i, i+1` before and after
/// `t_{r-i}` and runs [`dg_to_gd`]. Returns the algorithm's output and the
/// decoration of the transformed pattern.
pub fn short_pattern_transfer(
    t: &GTPattern,
    theta: &[RowType],
    i: usize,
) -> Result<(Vec<HighlightPattern>, HighlightPattern)> {
    let r = t.r();
    if i == 0 || i >= r || theta[i - 1] != RowType::L || theta[i] != RowType::R {
        return Err(Error::Precondition(format!("rows {i}, {} are not left-moving over right-moving", i + 1)));
    }
    let l = theta[..i - 1].iter().filter(|&&x| x == RowType::L).count();
    let empty: Vec<i64> = Vec::new();
    let z = t.rows.get(i + 1).unwrap_or(&empty);
    let dg = decorate_dg(&t.rows[i - 1], &t.rows[i], z, l)?;
    let steps = dg_to_gd(&dg, r)?;
    let t2 = bk_involution(t, i)?;
    let gd = decorate_gd(&t2.rows[i - 1], &t2.rows[i], z, l)?;
    Ok((steps, gd))
}

/// Checks that the row-pair elements applied to `Sigma_0` reproduce every
/// `Sigma_i` of the state.
pub fn flags_match_pattern(s: &State, theta: &[RowType]) -> Result<bool> {
    let table = state_flags(s, theta)?;
    let t = gt_from_state(s, theta)?;
    let flags = table.row_flags();
    for i in 0..theta.len() {
        let e = pattern_monoid_element(&t, i, theta)?;
        if monoid_act(&e, &flags[i])? != flags[i + 1] {
            return Ok(false);
        }
    }
    Ok(true)
}
