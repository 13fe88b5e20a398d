//! Grids, boundary conditions, state enumeration and partition functions.
//!
//! Columns are stored left to right as `x = 0..cols`; the column number used
//! by boundary data is `cols - 1 - x`. Horizontal spins of row `i` live at
//! `horizontal[i][p]` for `p = 0..=cols` (position `p` is the left edge of
//! column `p`). Vertical spins live at `vertical[b][x]` for row boundaries
//! `b = 0..=rows`, with `b = 0` the top boundary.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::algebra::{LaurentPoly, Registry};
use crate::error::{Error, Result};
use crate::weights::{
    all_crystal_configs, all_t_configs, bit, crystal_t_weight, fuse_block, ColorSet, FusedConfig,
    RegimeTag, RowType, Spin, WeightRegime, EMPTY,
};

/// How vertices are weighted and what vertical spins may carry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeKind {
    /// `N*m` single-color columns with colors cycling `1..=m`.
    Unfused,
    /// `N` fused columns weighted by the crystal tables (at most one color per vertical edge).
    Crystal,
    /// `N` fused columns with arbitrary color subsets, weighted by fusing crystal blocks.
    CrystalFusion,
}

/// A lattice system with its boundary data.
#[derive(Debug, Clone)]
pub struct SystemSpec {
    pub kind: LatticeKind,
    pub m: usize,
    pub theta: Vec<RowType>,
    /// Strictly decreasing top column numbers (`mu`, or `lambda + rho` for fused systems).
    pub mu: Vec<usize>,
    /// Exit colors per row; `None` sums over all exits.
    pub sigma: Option<Vec<Spin>>,
    /// Number of blocks (unfused) or fused columns.
    pub n: usize,
    pub regime: WeightRegime,
    /// Colors entering through the top, left to right.
    pub top_colors: Vec<Spin>,
    /// Row parameters, one per row.
    pub z: Vec<LaurentPoly>,
}

fn check_mu(mu: &[usize]) -> Result<()> {
    if mu.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::Domain(format!("column numbers {mu:?} must be strictly decreasing")));
    }
    Ok(())
}

impl SystemSpec {
    /// An unfused system with `N` blocks of `m` columns. Top colors are the
    /// column colors at the columns numbered by `mu`.
    pub fn unfused(theta: Vec<RowType>, m: usize, mu: Vec<usize>, n: usize, regime: WeightRegime) -> Result<Self> {
        let r = theta.len();
        if mu.len() != r {
            return Err(Error::Domain(format!("mu has {} entries for {r} rows", mu.len())));
        }
        if regime.m != m {
            return Err(Error::Domain("regime palette differs from m".into()));
        }
        check_mu(&mu)?;
        if let Some(&top) = mu.first() {
            if n * m <= top {
                return Err(Error::Domain(format!("N*m = {} does not exceed mu_1 = {top}", n * m)));
            }
        }
        let top_colors = mu.iter().map(|&c| ((n * m - 1 - c) % m + 1) as Spin).collect();
        let z = default_z(regime.registry(), r)?;
        Ok(SystemSpec { kind: LatticeKind::Unfused, m, theta, mu, sigma: None, n, regime, top_colors, z })
    }

    /// A fused crystal system on `r = theta.len()` colors with top edges at
    /// `lambda + rho`. Default top colors are `(r, r-1, ..., 1)` left to right.
    pub fn crystal(theta: Vec<RowType>, lambda_rho: Vec<usize>, top_colors: Option<Vec<Spin>>) -> Result<Self> {
        let r = theta.len();
        let reg = Registry::standard(r.max(3), r);
        Self::crystal_in(&reg, theta, lambda_rho, top_colors)
    }

    /// As [`SystemSpec::crystal`] but over a given registry.
    pub fn crystal_in(
        reg: &Arc<Registry>,
        theta: Vec<RowType>,
        lambda_rho: Vec<usize>,
        top_colors: Option<Vec<Spin>>,
    ) -> Result<Self> {
        let r = theta.len();
        if lambda_rho.len() != r {
            return Err(Error::Domain(format!("lambda+rho has {} entries for {r} rows", lambda_rho.len())));
        }
        check_mu(&lambda_rho)?;
        let top_colors = top_colors.unwrap_or_else(|| (1..=r as Spin).rev().collect());
        if top_colors.len() != r || top_colors.iter().any(|&c| c == 0 || c as usize > r) {
            return Err(Error::Domain(format!("top colors {top_colors:?} invalid for r = {r}")));
        }
        let n = lambda_rho.first().map_or(1, |&c| c + 1);
        let regime = WeightRegime::crystal(reg, r);
        let z = default_z(reg, r)?;
        Ok(SystemSpec {
            kind: LatticeKind::Crystal,
            m: r,
            theta,
            mu: lambda_rho,
            sigma: None,
            n,
            regime,
            top_colors,
            z,
        })
    }

    pub fn with_sigma(mut self, sigma: Vec<Spin>) -> Self {
        self.sigma = Some(sigma);
        self
    }

    pub fn with_kind(mut self, kind: LatticeKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn with_columns(mut self, n: usize) -> Self {
        self.n = n;
        if self.kind == LatticeKind::Unfused {
            let m = self.m;
            self.top_colors = self.mu.iter().map(|&c| ((n * m - 1 - c) % m + 1) as Spin).collect();
        }
        self
    }

    pub fn with_z(mut self, z: Vec<LaurentPoly>) -> Self {
        self.z = z;
        self
    }

    pub fn rows(&self) -> usize {
        self.theta.len()
    }

    pub fn cols(&self) -> usize {
        match self.kind {
            LatticeKind::Unfused => self.n * self.m,
            _ => self.n,
        }
    }

    pub fn registry(&self) -> &Arc<Registry> {
        self.regime.registry()
    }

    /// Column color of position `x` (unfused), or 0 for fused columns.
    pub fn column_color(&self, x: usize) -> Spin {
        match self.kind {
            LatticeKind::Unfused => (x % self.m + 1) as Spin,
            _ => 0,
        }
    }

    pub fn column_number(&self, x: usize) -> usize {
        self.cols() - 1 - x
    }

    pub fn position_of_column(&self, c: usize) -> usize {
        self.cols() - 1 - c
    }

    /// Vertical spins along the top boundary.
    pub fn top_boundary(&self) -> Vec<ColorSet> {
        let mut v = vec![0; self.cols()];
        for (p, &c) in self.mu.iter().enumerate() {
            v[self.position_of_column(c)] = bit(self.top_colors[p]);
        }
        v
    }

    pub fn validate(&self) -> Result<()> {
        let r = self.rows();
        if self.mu.len() != r || self.top_colors.len() != r || self.z.len() != r {
            return Err(Error::Domain("row count mismatch in system".into()));
        }
        check_mu(&self.mu)?;
        if let Some(&top) = self.mu.first() {
            if self.cols() <= top {
                return Err(Error::Domain(format!("{} columns cannot hold column number {top}", self.cols())));
            }
        }
        if let Some(s) = &self.sigma {
            if s.len() != r {
                return Err(Error::Domain(format!("sigma has {} entries for {r} rows", s.len())));
            }
            if s.iter().any(|&c| c == 0 || c as usize > self.m) {
                return Err(Error::Domain(format!("sigma {s:?} has colors outside 1..={}", self.m)));
            }
        }
        if self.kind != LatticeKind::Unfused && self.regime.tag != RegimeTag::Crystal {
            return Err(Error::Domain("fused systems use the crystal regime".into()));
        }
        Ok(())
    }

    /// Whether the exit spin of row `i` is acceptable.
    fn exit_ok(&self, i: usize, h: Spin) -> bool {
        match &self.sigma {
            Some(s) => h == s[i],
            None => h != EMPTY,
        }
    }

    /// Positions of row `i` in the order its paths travel.
    fn motion_order(&self, i: usize) -> Vec<usize> {
        match self.theta[i] {
            RowType::R => (0..self.cols()).collect(),
            RowType::L => (0..self.cols()).rev().collect(),
        }
    }

    /// Builds the per-row weight models.
    pub fn row_models(&self) -> Result<Vec<RowModel>> {
        self.validate()?;
        (0..self.rows()).map(|i| RowModel::new(self, i)).collect()
    }
}

fn default_z(reg: &Arc<Registry>, r: usize) -> Result<Vec<LaurentPoly>> {
    (1..=r).map(|i| LaurentPoly::var(reg, &format!("z{i}"))).collect()
}

/// Lookup key of a vertex: horizontal spins, vertical color sets and column color.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VertexKey {
    pub left: Spin,
    pub right: Spin,
    pub top: ColorSet,
    pub bottom: ColorSet,
    pub color: Spin,
}

/// Nonzero vertex weights of one row, with transitions indexed by the inputs.
#[derive(Debug, Clone)]
pub struct RowModel {
    pub family: RowType,
    weights: HashMap<VertexKey, LaurentPoly>,
    moves: HashMap<(Spin, ColorSet, Spin), Vec<(Spin, ColorSet)>>,
}

impl RowModel {
    fn new(spec: &SystemSpec, i: usize) -> Result<Self> {
        let family = spec.theta[i];
        let z = &spec.z[i];
        let m = spec.m;
        let mut weights = HashMap::new();
        match spec.kind {
            LatticeKind::Unfused => {
                for c in all_t_configs(m) {
                    let w = spec.regime.t_weight(family, &c, z)?;
                    if !w.is_zero() {
                        let key = VertexKey {
                            left: c.left,
                            right: c.right,
                            top: if c.top { bit(c.color) } else { 0 },
                            bottom: if c.bottom { bit(c.color) } else { 0 },
                            color: c.color,
                        };
                        weights.insert(key, w);
                    }
                }
            }
            LatticeKind::Crystal => {
                for c in all_crystal_configs(m) {
                    let w = crystal_t_weight(family, &c, z);
                    if !w.is_zero() {
                        weights.insert(VertexKey { left: c.left, right: c.right, top: c.top, bottom: c.bottom, color: 0 }, w);
                    }
                }
            }
            LatticeKind::CrystalFusion => {
                for left in 0..=m as Spin {
                    for right in 0..=m as Spin {
                        for top in 0..(1u32 << m) {
                            for bottom in 0..(1u32 << m) {
                                let c = FusedConfig { left, right, top, bottom };
                                let w = fuse_block(family, &c, z, &spec.regime)?;
                                if !w.is_zero() {
                                    weights.insert(VertexKey { left, right, top, bottom, color: 0 }, w);
                                }
                            }
                        }
                    }
                }
            }
        }
        let mut moves: HashMap<(Spin, ColorSet, Spin), Vec<(Spin, ColorSet)>> = HashMap::new();
        for k in weights.keys() {
            let (inp, out) = match family {
                RowType::R => (k.left, k.right),
                RowType::L => (k.right, k.left),
            };
            moves.entry((inp, k.top, k.color)).or_default().push((out, k.bottom));
        }
        for v in moves.values_mut() {
            v.sort_unstable();
        }
        Ok(RowModel { family, weights, moves })
    }

    pub fn weight(&self, key: &VertexKey) -> Option<&LaurentPoly> {
        self.weights.get(key)
    }

    fn moves(&self, inp: Spin, top: ColorSet, color: Spin) -> &[(Spin, ColorSet)] {
        self.moves.get(&(inp, top, color)).map_or(&[], Vec::as_slice)
    }

    fn key(&self, inp: Spin, out: Spin, top: ColorSet, bottom: ColorSet, color: Spin) -> VertexKey {
        match self.family {
            RowType::R => VertexKey { left: inp, right: out, top, bottom, color },
            RowType::L => VertexKey { left: out, right: inp, top, bottom, color },
        }
    }
}

/// A full edge labeling of a grid.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct State {
    pub horizontal: Vec<Vec<Spin>>,
    pub vertical: Vec<Vec<ColorSet>>,
}

impl State {
    pub fn rows(&self) -> usize {
        self.horizontal.len()
    }

    pub fn cols(&self) -> usize {
        self.vertical.first().map_or(0, Vec::len)
    }

    /// The color leaving row `i` on its exit side.
    pub fn exit_color(&self, i: usize, theta: RowType) -> Spin {
        match theta {
            RowType::R => self.horizontal[i][self.cols()],
            RowType::L => self.horizontal[i][0],
        }
    }

    /// Exit colors of all rows.
    pub fn sigma(&self, theta: &[RowType]) -> Vec<Spin> {
        theta.iter().enumerate().map(|(i, &t)| self.exit_color(i, t)).collect()
    }

    /// The same layout with every color replaced by color 1.
    pub fn uncolored(&self) -> State {
        State {
            horizontal: self.horizontal.iter().map(|r| r.iter().map(|&h| u8::from(h != 0)).collect()).collect(),
            vertical: self.vertical.iter().map(|r| r.iter().map(|&v| u32::from(v != 0)).collect()).collect(),
        }
    }

    pub fn to_json(&self, theta: &[RowType], weight: Option<&LaurentPoly>) -> Value {
        let vertical: Vec<Vec<Vec<u32>>> = self
            .vertical
            .iter()
            .map(|row| row.iter().map(|&s| (0..32).filter(|b| s & (1 << b) != 0).map(|b| b + 1).collect()).collect())
            .collect();
        let mut v = json!({
            "rows": self.rows(),
            "cols": self.cols(),
            "theta": theta.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
            "horizontal": self.horizontal,
            "vertical": vertical,
        });
        if let Some(w) = weight {
            v["weight"] = w.to_json();
        }
        v
    }

    /// Reads the JSON state format, returning the state and its row types.
    pub fn from_json(v: &Value) -> Result<(State, Vec<RowType>)> {
        let perr = |m: &str| Error::Parse(format!("state JSON: {m}"));
        let horizontal: Vec<Vec<Spin>> =
            serde_json::from_value(v.get("horizontal").cloned().ok_or_else(|| perr("missing horizontal"))?)
                .map_err(|e| perr(&e.to_string()))?;
        let vertical: Vec<Vec<Vec<u32>>> =
            serde_json::from_value(v.get("vertical").cloned().ok_or_else(|| perr("missing vertical"))?)
                .map_err(|e| perr(&e.to_string()))?;
        let vertical: Vec<Vec<ColorSet>> = vertical
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|cs| {
                        cs.into_iter().try_fold(0u32, |acc, c| {
                            if (1..=32).contains(&c) { Ok(acc | 1 << (c - 1)) } else { Err(perr("color out of range")) }
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let s = State { horizontal, vertical };
        let r = s.rows();
        if s.vertical.len() != r + 1
            || s.horizontal.iter().any(|h| h.len() != s.cols() + 1)
            || s.vertical.iter().any(|x| x.len() != s.cols())
        {
            return Err(perr("inconsistent dimensions"));
        }
        let theta = match v.get("theta").and_then(Value::as_array) {
            Some(a) => a
                .iter()
                .map(|t| t.as_str().ok_or_else(|| perr("theta entry")).and_then(RowType::parse))
                .collect::<Result<Vec<_>>>()?,
            None => (0..r)
                .map(|i| if s.horizontal[i][0] == EMPTY { RowType::R } else { RowType::L })
                .collect(),
        };
        if theta.len() != r {
            return Err(perr("theta length"));
        }
        Ok((s, theta))
    }
}

/// Product of the vertex weights of `s`, or `None` if some vertex is inadmissible
/// or the boundary does not match the system.
pub fn try_state_weight(s: &State, spec: &SystemSpec, models: &[RowModel]) -> Option<LaurentPoly> {
    let r = spec.rows();
    let cols = spec.cols();
    if s.rows() != r || s.cols() != cols || s.vertical.len() != r + 1 {
        return None;
    }
    if s.vertical[0] != spec.top_boundary() || s.vertical[r].iter().any(|&v| v != 0) {
        return None;
    }
    let mut w = LaurentPoly::one(spec.registry());
    for i in 0..r {
        let h = &s.horizontal[i];
        let (entry, exit) = match spec.theta[i] {
            RowType::R => (h[0], h[cols]),
            RowType::L => (h[cols], h[0]),
        };
        if entry != EMPTY || !spec.exit_ok(i, exit) {
            return None;
        }
        for x in 0..cols {
            let key = VertexKey {
                left: h[x],
                right: h[x + 1],
                top: s.vertical[i][x],
                bottom: s.vertical[i + 1][x],
                color: spec.column_color(x),
            };
            w = &w * models[i].weight(&key)?;
        }
    }
    Some(w)
}

/// Weight of an admissible state. Fails if the state is not in the system.
pub fn state_weight(s: &State, spec: &SystemSpec) -> Result<LaurentPoly> {
    let models = spec.row_models()?;
    try_state_weight(s, spec, &models).ok_or_else(|| Error::Domain("state is not admissible for this system".into()))
}

struct Dfs<'a> {
    spec: &'a SystemSpec,
    models: &'a [RowModel],
    orders: Vec<Vec<usize>>,
}

impl Dfs<'_> {
    fn row(&self, s: &mut State, i: usize, out: &mut Vec<State>) {
        if i == self.spec.rows() {
            out.push(s.clone());
            return;
        }
        let start = match self.spec.theta[i] {
            RowType::R => 0,
            RowType::L => self.spec.cols(),
        };
        s.horizontal[i][start] = EMPTY;
        self.step(s, i, 0, EMPTY, out);
    }

    fn step(&self, s: &mut State, i: usize, k: usize, h: Spin, out: &mut Vec<State>) {
        let order = &self.orders[i];
        if k == order.len() {
            if self.spec.exit_ok(i, h) {
                self.row(s, i + 1, out);
            }
            return;
        }
        let x = order[k];
        let last = i + 1 == self.spec.rows();
        let top = s.vertical[i][x];
        let color = self.spec.column_color(x);
        for &(o, bottom) in self.models[i].moves(h, top, color) {
            if last && bottom != 0 {
                continue;
            }
            s.vertical[i + 1][x] = bottom;
            let pos = match self.spec.theta[i] {
                RowType::R => x + 1,
                RowType::L => x,
            };
            s.horizontal[i][pos] = o;
            self.step(s, i, k + 1, o, out);
        }
        s.vertical[i + 1][x] = 0;
    }
}

/// All admissible states, sorted lexicographically by (horizontal, vertical).
pub fn enumerate_states(spec: &SystemSpec) -> Result<Vec<State>> {
    let models = spec.row_models()?;
    enumerate_with(spec, &models)
}

/// [`enumerate_states`] with prebuilt row models.
pub fn enumerate_with(spec: &SystemSpec, models: &[RowModel]) -> Result<Vec<State>> {
    let r = spec.rows();
    let cols = spec.cols();
    let mut init = State { horizontal: vec![vec![EMPTY; cols + 1]; r], vertical: vec![vec![0; cols]; r + 1] };
    init.vertical[0] = spec.top_boundary();
    let dfs = Dfs { spec, models, orders: (0..r).map(|i| spec.motion_order(i)).collect() };
    if r == 0 {
        return Ok(vec![init]);
    }
    // Complete the first row sequentially, then fan out over its completions.
    let mut firsts = Vec::new();
    {
        let single = SystemSpec { theta: spec.theta[..1].to_vec(), ..spec.clone() };
        let d1 = Dfs { spec: &single, models, orders: vec![dfs.orders[0].clone()] };
        let mut s = init.clone();
        s.horizontal.truncate(1);
        s.vertical.truncate(2);
        d1.row_partial(&mut s, &mut firsts, r == 1);
    }
    let mut states: Vec<State> = firsts
        .into_par_iter()
        .flat_map_iter(|first| {
            let mut s = init.clone();
            s.horizontal[0] = first.horizontal[0].clone();
            s.vertical[1] = first.vertical[1].clone();
            let mut out = Vec::new();
            dfs.row(&mut s, 1, &mut out);
            out
        })
        .collect();
    states.sort();
    Ok(states)
}

impl Dfs<'_> {
    /// Completes row 0 only, recording partial states whose exit is valid.
    fn row_partial(&self, s: &mut State, out: &mut Vec<State>, last: bool) {
        fn go(d: &Dfs, s: &mut State, k: usize, h: Spin, out: &mut Vec<State>, last: bool) {
            let order = &d.orders[0];
            if k == order.len() {
                if d.spec.exit_ok(0, h) {
                    out.push(s.clone());
                }
                return;
            }
            let x = order[k];
            let top = s.vertical[0][x];
            let color = d.spec.column_color(x);
            for &(o, bottom) in d.models[0].moves(h, top, color) {
                if last && bottom != 0 {
                    continue;
                }
                s.vertical[1][x] = bottom;
                let pos = match d.spec.theta[0] {
                    RowType::R => x + 1,
                    RowType::L => x,
                };
                s.horizontal[0][pos] = o;
                go(d, s, k + 1, o, out, last);
            }
            s.vertical[1][x] = 0;
        }
        go(self, s, 0, EMPTY, out, last);
    }
}

/// Partition function by a row transfer computation over vertical frontiers.
pub fn partition_function(spec: &SystemSpec) -> Result<LaurentPoly> {
    let models = spec.row_models()?;
    partition_with(spec, &models)
}

/// [`partition_function`] with prebuilt row models.
pub fn partition_with(spec: &SystemSpec, models: &[RowModel]) -> Result<LaurentPoly> {
    let reg = spec.registry();
    let r = spec.rows();
    let mut layer: HashMap<Vec<ColorSet>, LaurentPoly> = HashMap::new();
    layer.insert(spec.top_boundary(), LaurentPoly::one(reg));
    for i in 0..r {
        let last = i + 1 == r;
        let mut cur: HashMap<(Vec<ColorSet>, Spin), LaurentPoly> =
            layer.into_iter().map(|(v, p)| ((v, EMPTY), p)).collect();
        for x in spec.motion_order(i) {
            let color = spec.column_color(x);
            let mut next: HashMap<(Vec<ColorSet>, Spin), LaurentPoly> = HashMap::new();
            for ((v, h), p) in cur {
                let top = v[x];
                for &(o, bottom) in models[i].moves(h, top, color) {
                    if last && bottom != 0 {
                        continue;
                    }
                    let w = models[i].weight(&models[i].key(h, o, top, bottom, color)).expect("move has weight");
                    let mut v2 = v.clone();
                    v2[x] = bottom;
                    let t = &p * w;
                    next.entry((v2, o))
                        .and_modify(|acc| acc.add_assign_ref(&t))
                        .or_insert(t);
                }
            }
            cur = next;
        }
        layer = HashMap::new();
        for ((v, h), p) in cur {
            if spec.exit_ok(i, h) {
                layer.entry(v).and_modify(|acc| acc.add_assign_ref(&p)).or_insert(p);
            }
        }
    }
    let bottom = vec![0; spec.cols()];
    Ok(layer.remove(&bottom).unwrap_or_else(|| LaurentPoly::zero(reg)).clone())
}

/// Sum of the weights of enumerated states; an independent check on [`partition_function`].
pub fn partition_by_enumeration(spec: &SystemSpec) -> Result<LaurentPoly> {
    let models = spec.row_models()?;
    let states = enumerate_with(spec, &models)?;
    let mut z = LaurentPoly::zero(spec.registry());
    for s in &states {
        z.add_assign_ref(&try_state_weight(s, spec, &models).ok_or_else(|| Error::Internal("enumerated state has zero weight".into()))?);
    }
    Ok(z)
}

/// Colors an uncolored crystal layout (occupancy encoded as color 1).
///
/// Rows are processed from the top; within a row vertices are visited in the
/// direction of motion and the unique nonzero coloring of each vertex's
/// outputs is chosen. Fails with an internal error if zero or several
/// colorings are admissible.
pub fn color_completion(layout: &State, spec: &SystemSpec) -> Result<State> {
    if spec.kind != LatticeKind::Crystal {
        return Err(Error::Precondition("color completion applies to fused crystal systems".into()));
    }
    let models = spec.row_models()?;
    let r = spec.rows();
    let cols = spec.cols();
    if layout.rows() != r || layout.cols() != cols {
        return Err(Error::Domain("layout dimensions differ from the system".into()));
    }
    let mut s = State { horizontal: vec![vec![EMPTY; cols + 1]; r], vertical: vec![vec![0; cols]; r + 1] };
    s.vertical[0] = spec.top_boundary();
    for (x, &v) in layout.vertical[0].iter().enumerate() {
        if (v != 0) != (s.vertical[0][x] != 0) {
            return Err(Error::Domain("layout top boundary differs from the system".into()));
        }
    }
    for i in 0..r {
        let mut h = EMPTY;
        for x in spec.motion_order(i) {
            let top = s.vertical[i][x];
            let (lo, lb) = match spec.theta[i] {
                RowType::R => (layout.horizontal[i][x + 1], layout.vertical[i + 1][x]),
                RowType::L => (layout.horizontal[i][x], layout.vertical[i + 1][x]),
            };
            let choices: Vec<(Spin, ColorSet)> = models[i]
                .moves(h, top, 0)
                .iter()
                .copied()
                .filter(|&(o, b)| (o != 0) == (lo != 0) && (b != 0) == (lb != 0))
                .collect();
            if choices.len() != 1 {
                return Err(Error::Internal(format!(
                    "row {i} column {x}: {} admissible colorings",
                    choices.len()
                )));
            }
            let (o, b) = choices[0];
            s.vertical[i + 1][x] = b;
            match spec.theta[i] {
                RowType::R => s.horizontal[i][x + 1] = o,
                RowType::L => s.horizontal[i][x] = o,
            }
            h = o;
        }
        if h == EMPTY {
            return Err(Error::Internal(format!("row {i} has no exit")));
        }
    }
    if s.vertical[r].iter().any(|&v| v != 0) {
        return Err(Error::Internal("colored layout leaves paths at the bottom".into()));
    }
    Ok(s)
}

/// All uncolored layouts of a crystal system (states over a one-color palette).
pub fn uncolored_layouts(spec: &SystemSpec) -> Result<Vec<State>> {
    let gray = SystemSpec::crystal(spec.theta.clone(), spec.mu.clone(), Some(vec![1; spec.rows()]))?
        .with_columns(spec.n);
    let mut gray = gray;
    gray.m = 1;
    gray.regime = WeightRegime::crystal(gray.registry(), 1);
    enumerate_states(&gray)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(reg: &Arc<Registry>, s: &str) -> LaurentPoly {
        LaurentPoly::parse(reg, s).unwrap()
    }

    #[test]
    fn trivial_system() {
        let reg = Registry::standard(3, 1);
        let spec = SystemSpec::unfused(vec![RowType::R], 1, vec![0], 1, WeightRegime::generic(&reg, 1)).unwrap();
        let states = enumerate_states(&spec).unwrap();
        assert_eq!(states.len(), 1);
        assert_eq!(state_weight(&states[0], &spec).unwrap(), LaurentPoly::one(&reg));
        assert_eq!(partition_function(&spec).unwrap(), LaurentPoly::one(&reg));
    }

    #[test]
    fn figure_state_is_enumerated() {
        // mu = (5,4,0), m = 3, N = 2; columns x = 0..6 with colors 1,2,3,1,2,3.
        let reg = Registry::standard(3, 3);
        let spec = SystemSpec::unfused(vec![RowType::R; 3], 3, vec![5, 4, 0], 2, WeightRegime::generic(&reg, 3))
            .unwrap()
            .with_sigma(vec![3, 2, 1]);
        assert_eq!(spec.top_colors, vec![1, 2, 3]);
        let states = enumerate_states(&spec).unwrap();
        assert!(!states.is_empty());
        for s in &states {
            assert_eq!(s.sigma(&spec.theta), vec![3, 2, 1]);
        }
        let z = partition_function(&spec).unwrap();
        assert_eq!(z, partition_by_enumeration(&spec).unwrap());
    }

    #[test]
    fn dp_matches_enumeration_mixed() {
        let reg = Registry::standard(3, 2);
        for theta in [vec![RowType::R, RowType::L], vec![RowType::L, RowType::L], vec![RowType::L, RowType::R]] {
            let spec = SystemSpec::unfused(theta, 2, vec![3, 0], 2, WeightRegime::generic(&reg, 2)).unwrap();
            assert_eq!(partition_function(&spec).unwrap(), partition_by_enumeration(&spec).unwrap());
        }
    }

    #[test]
    fn crystal_gamma_r2() {
        // lambda = (1,0), lambda + rho = (2,0).
        let spec = SystemSpec::crystal(vec![RowType::GAMMA; 2], vec![2, 0], None).unwrap();
        let reg = spec.registry().clone();
        let z = partition_function(&spec).unwrap();
        assert_eq!(z, partition_by_enumeration(&spec).unwrap());
        assert_eq!(z, lp(&reg, "z1^2 + z1*z2"));
    }

    #[test]
    fn json_round_trip() {
        let spec = SystemSpec::crystal(vec![RowType::GAMMA, RowType::DELTA], vec![2, 0], None).unwrap();
        for s in enumerate_states(&spec).unwrap() {
            let w = state_weight(&s, &spec).unwrap();
            let j = s.to_json(&spec.theta, Some(&w));
            let (back, theta) = State::from_json(&j).unwrap();
            assert_eq!(back, s);
            assert_eq!(theta, spec.theta);
        }
    }

    #[test]
    fn color_completion_recovers_states() {
        let spec = SystemSpec::crystal(vec![RowType::GAMMA, RowType::DELTA, RowType::GAMMA], vec![4, 2, 0], None).unwrap();
        let states = enumerate_states(&spec).unwrap();
        let layouts = uncolored_layouts(&spec).unwrap();
        assert_eq!(states.len(), layouts.len());
        for s in &states {
            assert_eq!(&color_completion(&s.uncolored(), &spec).unwrap(), s);
        }
    }
}
