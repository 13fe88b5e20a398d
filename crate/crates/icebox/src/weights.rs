//! Boltzmann weight tables for T- and R-vertices, weight regimes and twists.
//!
//! Horizontal spins are [`Spin`] values: `0` is empty, `1..=m` is a color.
//! Unfused vertical edges carry a boolean occupancy by the column color; fused
//! vertical edges carry a color subset encoded as a bitmask (bit `c-1` for color `c`).

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::algebra::{Bindings, LaurentPoly, Registry};
use crate::error::{Error, Result};

/// A horizontal spin: `0` for empty, otherwise a color in `1..=m`.
pub type Spin = u8;
pub const EMPTY: Spin = 0;

/// Bitmask of colors on a fused vertical edge.
pub type ColorSet = u32;

pub fn bit(c: Spin) -> ColorSet {
    debug_assert!(c > 0);
    1 << (c - 1)
}

/// Row orientation. In crystal mode `R` is drawn as Γ and `L` as Δ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RowType {
    /// Right-moving (Γ in crystal mode).
    R,
    /// Left-moving (Δ in crystal mode).
    L,
}

impl RowType {
    pub const GAMMA: RowType = RowType::R;
    pub const DELTA: RowType = RowType::L;

    pub fn flip(self) -> RowType {
        match self {
            RowType::R => RowType::L,
            RowType::L => RowType::R,
        }
    }

    /// Single-letter crystal name (`G` or `D`).
    pub fn crystal_letter(self) -> char {
        match self {
            RowType::R => 'G',
            RowType::L => 'D',
        }
    }

    /// Accepts `R`, `L`, `G`, `D`, `Γ`, `Δ` and the words `Gamma`, `Delta`.
    pub fn parse(s: &str) -> Result<RowType> {
        match s.trim() {
            "R" | "r" | "G" | "g" | "Γ" | "Gamma" | "gamma" => Ok(RowType::R),
            "L" | "l" | "D" | "d" | "Δ" | "Delta" | "delta" => Ok(RowType::L),
            other => Err(Error::Parse(format!("unknown row type {other:?}"))),
        }
    }

    /// Parses a comma-separated or contiguous list such as `R,L,R` or `GDG`.
    pub fn parse_list(s: &str) -> Result<Vec<RowType>> {
        if s.contains(',') {
            s.split(',').map(RowType::parse).collect()
        } else {
            s.chars().map(|c| RowType::parse(&c.to_string())).collect()
        }
    }
}

impl fmt::Display for RowType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", match self {
            RowType::R => "R",
            RowType::L => "L",
        })
    }
}

/// Configuration classes of a T-vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TClass {
    A1,
    A2,
    A2p,
    B1,
    B2,
    C1,
    C2,
}

impl fmt::Display for TClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TClass::A1 => "a1",
            TClass::A2 => "a2",
            TClass::A2p => "a2'",
            TClass::B1 => "b1",
            TClass::B2 => "b2",
            TClass::C1 => "c1",
            TClass::C2 => "c2",
        };
        f.write_str(s)
    }
}

/// An unfused T-vertex. Vertical edges are occupied only by the column color.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TConfig {
    pub left: Spin,
    pub right: Spin,
    pub top: bool,
    pub bottom: bool,
    pub color: Spin,
}

/// A fused T-vertex with subset-valued vertical edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FusedConfig {
    pub left: Spin,
    pub right: Spin,
    pub top: ColorSet,
    pub bottom: ColorSet,
}

/// Classifies an unfused configuration; `None` means inadmissible.
pub fn classify_t(family: RowType, c: &TConfig) -> Option<TClass> {
    let j = c.color;
    let (inp, out) = match family {
        RowType::R => (c.left, c.right),
        RowType::L => (c.right, c.left),
    };
    match (c.top, c.bottom) {
        (false, false) if inp == EMPTY && out == EMPTY => Some(TClass::A1),
        (false, false) if inp != EMPTY && inp == out => Some(TClass::B2),
        (true, true) if inp == EMPTY && out == EMPTY => Some(TClass::B1),
        (true, true) if inp != EMPTY && inp == out => Some(TClass::A2),
        (false, true) if inp == j && out == EMPTY => Some(TClass::C1),
        (true, false) if inp == EMPTY && out == j => Some(TClass::C2),
        _ => None,
    }
}

/// Classifies a fused crystal configuration (vertical edges with at most one color).
///
/// Returns the class together with the path color `i` and vertical color `j`
/// (zero when not applicable).
pub fn classify_crystal(family: RowType, c: &FusedConfig) -> Option<(TClass, Spin, Spin)> {
    if c.top.count_ones() > 1 || c.bottom.count_ones() > 1 {
        return None;
    }
    let color = |s: ColorSet| if s == 0 { EMPTY } else { s.trailing_zeros() as Spin + 1 };
    let (t, b) = (color(c.top), color(c.bottom));
    let (inp, out) = match family {
        RowType::R => (c.left, c.right),
        RowType::L => (c.right, c.left),
    };
    match (inp, out, t, b) {
        (0, 0, 0, 0) => Some((TClass::A1, 0, 0)),
        (0, 0, t, b) if t == b => Some((TClass::B1, 0, t)),
        (i, o, 0, 0) if i == o => Some((TClass::B2, i, 0)),
        (i, o, t, b) if i == o && t == b && i != 0 && t != 0 => Some((TClass::A2, i, t)),
        (i, 0, 0, b) if i == b => Some((TClass::C1, i, 0)),
        (0, o, t, 0) if o == t => Some((TClass::C2, o, 0)),
        // Γ: left=bottom=i, top=right=j. Δ: right=bottom=i, top=left=j.
        (i, o, t, b) if i == b && o == t && i != 0 && o != 0 && i != o => {
            Some((TClass::A2p, i, o))
        }
        _ => None,
    }
}

/// Rational constant helper.
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn var(reg: &Arc<Registry>, name: &str) -> LaurentPoly {
    LaurentPoly::var(reg, name).unwrap_or_else(|_| panic!("registry lacks {name}"))
}

/// The X-symbol with the rewrite `X(i,i) = -q2`, `X(j,i) = q2 / X(i,j)` for `i < j`.
pub fn x_symbol(reg: &Arc<Registry>, i: Spin, j: Spin) -> LaurentPoly {
    use std::cmp::Ordering::*;
    match i.cmp(&j) {
        Equal => -var(reg, "q2"),
        Less => var(reg, &format!("X_{i}_{j}")),
        Greater => {
            let x = var(reg, &format!("X_{j}_{i}"));
            &var(reg, "q2") * &x.inv_monomial().expect("monomial")
        }
    }
}

/// Generic-parameter T weight, before any regime is applied.
///
/// `z` must be a monomial (it is inverted for the left-moving family).
pub fn t_weight_template(family: RowType, c: &TConfig, z: &LaurentPoly) -> LaurentPoly {
    let reg = z.registry();
    let one = LaurentPoly::one(reg);
    let phi = var(reg, "Phi");
    let q2 = var(reg, "q2");
    let Some(class) = classify_t(family, c) else {
        return LaurentPoly::zero(reg);
    };
    let j = c.color;
    match family {
        RowType::R => {
            let i = c.left;
            match class {
                TClass::A1 | TClass::C2 => one,
                TClass::A2 => {
                    let w = &phi * &x_symbol(reg, i, j);
                    if i == j { &w * z } else { w }
                }
                TClass::B1 => phi,
                TClass::B2 => {
                    if i == j { z.clone() } else { one }
                }
                TClass::C1 => &phi * &(&(&one - &q2) * z),
                TClass::A2p => unreachable!(),
            }
        }
        RowType::L => {
            let zi = z.inv_monomial().expect("row parameter must be a monomial");
            let i = c.right;
            match class {
                TClass::A1 => one,
                TClass::A2 => {
                    let w = &phi * &x_symbol(reg, j, i);
                    if i == j { &w * &zi } else { w }
                }
                TClass::B1 => phi,
                TClass::B2 => {
                    if i == j { zi } else { one }
                }
                TClass::C1 => &phi * &(&one - &q2),
                TClass::C2 => zi,
                TClass::A2p => unreachable!(),
            }
        }
    }
}

/// Which specialization a regime applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegimeTag {
    Generic,
    Metaplectic,
    Iwahori,
    Crystal,
}

impl RegimeTag {
    pub fn parse(s: &str) -> Result<RegimeTag> {
        match s {
            "generic" => Ok(RegimeTag::Generic),
            "metaplectic" => Ok(RegimeTag::Metaplectic),
            "iwahori" => Ok(RegimeTag::Iwahori),
            "crystal" => Ok(RegimeTag::Crystal),
            other => Err(Error::Parse(format!("unknown regime {other:?}"))),
        }
    }
}

impl fmt::Display for RegimeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RegimeTag::Generic => "generic",
            RegimeTag::Metaplectic => "metaplectic",
            RegimeTag::Iwahori => "iwahori",
            RegimeTag::Crystal => "crystal",
        };
        f.write_str(s)
    }
}

/// A specialization of `q2`, `Phi` and the `X` symbols, applied after the
/// generic tables are built. Crystal regimes additionally send `v` to zero.
#[derive(Debug, Clone)]
pub struct WeightRegime {
    pub tag: RegimeTag,
    pub m: usize,
    reg: Arc<Registry>,
    bindings: Bindings,
    v_to_zero: bool,
    twisted: bool,
}

impl WeightRegime {
    fn build(tag: RegimeTag, reg: &Arc<Registry>, m: usize, pairs: Vec<(String, LaurentPoly)>) -> Self {
        let mut bindings = Bindings::new();
        for (name, p) in pairs {
            let idx = reg.index_of(&name).unwrap_or_else(|| panic!("registry lacks {name}"));
            bindings.insert(idx, p);
        }
        WeightRegime {
            tag,
            m,
            reg: reg.clone(),
            bindings,
            v_to_zero: tag == RegimeTag::Crystal,
            twisted: false,
        }
    }

    pub fn generic(reg: &Arc<Registry>, m: usize) -> Self {
        Self::build(RegimeTag::Generic, reg, m, vec![])
    }

    fn iwahori_pairs(reg: &Arc<Registry>, m: usize) -> Vec<(String, LaurentPoly)> {
        let v = var(reg, "v");
        let mut pairs = vec![
            ("Phi".to_string(), -&v),
            ("q2".to_string(), v.inv_monomial().expect("monomial")),
        ];
        for i in 1..=m {
            for j in i + 1..=m {
                pairs.push((format!("X_{i}_{j}"), LaurentPoly::int(reg, -1)));
            }
        }
        pairs
    }

    /// `Phi = -v`, `X(i<j) = -1`, `q2 = 1/v`.
    pub fn iwahori(reg: &Arc<Registry>, m: usize) -> Self {
        Self::build(RegimeTag::Iwahori, reg, m, Self::iwahori_pairs(reg, m))
    }

    /// Iwahori followed by `v -> 0`.
    pub fn crystal(reg: &Arc<Registry>, m: usize) -> Self {
        Self::build(RegimeTag::Crystal, reg, m, Self::iwahori_pairs(reg, m))
    }

    /// `Phi = 1`, `q2 = v`, `X(i<j) = g(j-i)` with `g(a)` free for `a <= m/2`
    /// and `g(a) = v / g(m-a)` otherwise.
    pub fn metaplectic(reg: &Arc<Registry>, m: usize) -> Self {
        let v = var(reg, "v");
        let g = |a: usize| -> LaurentPoly {
            if 2 * a <= m {
                var(reg, &format!("g_{a}"))
            } else {
                &v * &var(reg, &format!("g_{}", m - a)).inv_monomial().expect("monomial")
            }
        };
        let mut pairs = vec![("Phi".to_string(), LaurentPoly::one(reg)), ("q2".to_string(), v.clone())];
        for i in 1..=m {
            for j in i + 1..=m {
                pairs.push((format!("X_{i}_{j}"), g(j - i)));
            }
        }
        Self::build(RegimeTag::Metaplectic, reg, m, pairs)
    }

    pub fn from_tag(tag: RegimeTag, reg: &Arc<Registry>, m: usize) -> Self {
        match tag {
            RegimeTag::Generic => Self::generic(reg, m),
            RegimeTag::Metaplectic => Self::metaplectic(reg, m),
            RegimeTag::Iwahori => Self::iwahori(reg, m),
            RegimeTag::Crystal => Self::crystal(reg, m),
        }
    }

    pub fn registry(&self) -> &Arc<Registry> {
        &self.reg
    }

    pub fn is_twisted(&self) -> bool {
        self.twisted
    }

    pub fn bindings(&self) -> &Bindings {
        &self.bindings
    }

    /// Applies the regime's bindings to a generic-parameter expression.
    pub fn specialize(&self, p: &LaurentPoly) -> Result<LaurentPoly> {
        let s = p.substitute(&self.bindings)?;
        if self.v_to_zero {
            v_to_zero(&s)
        } else {
            Ok(s)
        }
    }

    /// Applies only the bindings, skipping the crystal `v -> 0` step.
    pub fn specialize_without_limit(&self, p: &LaurentPoly) -> Result<LaurentPoly> {
        p.substitute(&self.bindings)
    }

    /// Checks `X(i,j) X(j,i) = q2` and `X(i,i) = -q2` after specialization.
    /// Not applicable to crystal regimes, where `q2` has no limit.
    pub fn check_x_condition(&self) -> Result<()> {
        let q2 = self.specialize_without_limit(&var(&self.reg, "q2"))?;
        for i in 1..=self.m as Spin {
            for j in 1..=self.m as Spin {
                let xij = self.specialize_without_limit(&x_symbol(&self.reg, i, j))?;
                if i == j {
                    if xij != -&q2 {
                        return Err(Error::Domain(format!("X({i},{i}) = {xij} is not -q2")));
                    }
                } else {
                    let xji = self.specialize_without_limit(&x_symbol(&self.reg, j, i))?;
                    if &xij * &xji != q2 {
                        return Err(Error::Domain(format!("X({i},{j}) X({j},{i}) != q2")));
                    }
                }
            }
        }
        Ok(())
    }

    /// The T weight under this regime.
    pub fn t_weight(&self, family: RowType, c: &TConfig, z: &LaurentPoly) -> Result<LaurentPoly> {
        self.specialize(&t_weight_template(family, c, z))
    }

    /// The R weight under this regime.
    pub fn r_weight(
        &self,
        kind: RKind,
        c: &RConfig,
        z1: &LaurentPoly,
        z2: &LaurentPoly,
        k: Spin,
    ) -> Result<LaurentPoly> {
        self.specialize(&r_weight_template(kind, c, z1, z2, k, self.m))
    }
}

/// Sends `v` to zero; fails if any term has a negative power of `v`.
pub fn v_to_zero(p: &LaurentPoly) -> Result<LaurentPoly> {
    let reg = p.registry();
    p.substitute_named(&[("v", LaurentPoly::zero(reg))])
}

/// Free-standing form of [`WeightRegime::t_weight`].
pub fn t_weight(family: RowType, c: &TConfig, z: &LaurentPoly, regime: &WeightRegime) -> Result<LaurentPoly> {
    regime.t_weight(family, c, z)
}

/// Fused crystal T weights, with the Δ table scaled by `z`.
pub fn crystal_t_weight(family: RowType, c: &FusedConfig, z: &LaurentPoly) -> LaurentPoly {
    let reg = z.registry();
    let zero = LaurentPoly::zero(reg);
    let one = LaurentPoly::one(reg);
    let Some((class, i, j)) = classify_crystal(family, c) else {
        return zero;
    };
    match family {
        RowType::R => match class {
            TClass::A1 | TClass::C2 => one,
            TClass::A2 => if i >= j { z.clone() } else { zero },
            TClass::A2p => if i < j { z.clone() } else { zero },
            TClass::B1 => zero,
            TClass::B2 | TClass::C1 => z.clone(),
        },
        RowType::L => match class {
            TClass::A1 | TClass::C1 => z.clone(),
            TClass::A2 => if i <= j { one } else { zero },
            TClass::A2p => if i > j { one } else { zero },
            TClass::B1 => zero,
            TClass::B2 | TClass::C2 => one,
        },
    }
}

/// Weight of one fused block: expand the fused vertex into `m` unfused columns
/// with colors `1..=m`, force the internal horizontal spins by color
/// conservation and multiply. Returns zero when no admissible completion exists.
///
/// In the crystal regime the left-moving result is multiplied by `z`.
pub fn fuse_block(family: RowType, c: &FusedConfig, z: &LaurentPoly, regime: &WeightRegime) -> Result<LaurentPoly> {
    let m = regime.m;
    let reg = z.registry();
    let mut w = LaurentPoly::one(reg);
    // Walk in the direction of motion, carrying the horizontal spin.
    let order: Vec<usize> = match family {
        RowType::R => (0..m).collect(),
        RowType::L => (0..m).rev().collect(),
    };
    let mut h = match family {
        RowType::R => c.left,
        RowType::L => c.right,
    };
    for x in order {
        let col = (x + 1) as Spin;
        let top = c.top & bit(col) != 0;
        let bottom = c.bottom & bit(col) != 0;
        let out = match (top, bottom) {
            (true, false) => {
                if h != EMPTY {
                    return Ok(LaurentPoly::zero(reg));
                }
                col
            }
            (false, true) => {
                if h != col {
                    return Ok(LaurentPoly::zero(reg));
                }
                EMPTY
            }
            _ => h,
        };
        let cfg = match family {
            RowType::R => TConfig { left: h, right: out, top, bottom, color: col },
            RowType::L => TConfig { left: out, right: h, top, bottom, color: col },
        };
        let t = regime.t_weight(family, &cfg, z)?;
        if t.is_zero() {
            return Ok(t);
        }
        w = &w * &t;
        h = out;
    }
    let end = match family {
        RowType::R => c.right,
        RowType::L => c.left,
    };
    if h != end || c.top & !((1u32 << m) - 1) != 0 || c.bottom & !((1u32 << m) - 1) != 0 {
        return Ok(LaurentPoly::zero(reg));
    }
    if regime.tag == RegimeTag::Crystal && family == RowType::L {
        w = &w * z;
    }
    Ok(w)
}

/// The four unfused R-vertex kinds. `LR` is `R^L_R`, `RL` is `R^R_L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RKind {
    LL,
    RR,
    LR,
    RL,
}

impl RKind {
    /// The kind of `R_{XY}` swapping a row of type `x` (parameter `z1`) with one of type `y`.
    pub fn of(x: RowType, y: RowType) -> RKind {
        match (x, y) {
            (RowType::L, RowType::L) => RKind::LL,
            (RowType::R, RowType::R) => RKind::RR,
            (RowType::L, RowType::R) => RKind::LR,
            (RowType::R, RowType::L) => RKind::RL,
        }
    }

    pub fn rows(self) -> (RowType, RowType) {
        match self {
            RKind::LL => (RowType::L, RowType::L),
            RKind::RR => (RowType::R, RowType::R),
            RKind::LR => (RowType::L, RowType::R),
            RKind::RL => (RowType::R, RowType::L),
        }
    }

    pub fn all() -> [RKind; 4] {
        [RKind::LL, RKind::RR, RKind::LR, RKind::RL]
    }

    /// Crystal name: `DD`, `GG`, `DG`, `GD`.
    pub fn crystal_name(self) -> &'static str {
        match self {
            RKind::LL => "DD",
            RKind::RR => "GG",
            RKind::LR => "DG",
            RKind::RL => "GD",
        }
    }
}

impl fmt::Display for RKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Edges of an R-vertex: bottom-left, top-left, top-right, bottom-right.
/// The `z1` line runs from bottom-left to top-right, the `z2` line from
/// top-left to bottom-right.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RConfig {
    pub bl: Spin,
    pub tl: Spin,
    pub tr: Spin,
    pub br: Spin,
}

impl RConfig {
    pub fn new(bl: Spin, tl: Spin, tr: Spin, br: Spin) -> Self {
        RConfig { bl, tl, tr, br }
    }
}

/// Index (1..=8) of an R configuration in the weight tables with its colors.
pub fn classify_r(kind: RKind, c: &RConfig) -> Option<(u8, Spin, Spin)> {
    let RConfig { bl, tl, tr, br } = *c;
    let straight = match (bl, tl, tr, br) {
        (0, 0, 0, 0) => Some((1, 0, 0)),
        (i, 0, t, 0) if i != 0 && i == t => Some((2, i, 0)),
        (0, i, 0, b) if i != 0 && i == b => Some((3, i, 0)),
        (i, t, a, b) if i != 0 && i == t && i == a && i == b => Some((4, i, 0)),
        (i, j, a, b) if i != 0 && j != 0 && i != j && a == i && b == j => Some((5, i, j)),
        _ => None,
    };
    if straight.is_some() {
        return straight;
    }
    match kind {
        RKind::LL | RKind::RR => match (bl, tl, tr, br) {
            (0, i, t, 0) if i != 0 && i == t => Some((6, i, 0)),
            (i, 0, 0, b) if i != 0 && i == b => Some((7, i, 0)),
            (i, j, a, b) if i != 0 && j != 0 && i != j && a == j && b == i => Some((8, i, j)),
            _ => None,
        },
        RKind::LR | RKind::RL => match (bl, tl, tr, br) {
            (0, 0, i, b) if i != 0 && i == b => Some((6, i, 0)),
            (i, t, 0, 0) if i != 0 && i == t => Some((7, i, 0)),
            (i, t, j, b) if i != 0 && j != 0 && i != j && t == i && b == j => Some((8, i, j)),
            _ => None,
        },
    }
}

/// `res_m(x)` in `[0, m-1]`.
pub fn res_lower(x: i64, m: usize) -> i64 {
    x.rem_euclid(m as i64)
}

/// `res^m(x)` in `[1, m]`.
pub fn res_upper(x: i64, m: usize) -> i64 {
    let r = x.rem_euclid(m as i64);
    if r == 0 { m as i64 } else { r }
}

/// Cyclic order starting at `k`: `s(i) < s(j)` with `s(x) = (x - k) mod m`.
pub fn cyclic_less(i: Spin, j: Spin, k: Spin, m: usize) -> bool {
    res_lower(i as i64 - k as i64, m) < res_lower(j as i64 - k as i64, m)
}

/// Generic-parameter R weight with vertex color `k`, before any regime is applied.
pub fn r_weight_template(
    kind: RKind,
    c: &RConfig,
    z1: &LaurentPoly,
    z2: &LaurentPoly,
    k: Spin,
    m: usize,
) -> LaurentPoly {
    let reg = z1.registry();
    let Some((n, i, j)) = classify_r(kind, c) else {
        return LaurentPoly::zero(reg);
    };
    let one = LaurentPoly::one(reg);
    let phi = var(reg, "Phi");
    let q2 = var(reg, "q2");
    let q2p = |e: i64| q2.pow(e as i32).expect("monomial power");
    let phii = phi.inv_monomial().expect("monomial");
    let omq = &one - &q2;
    let d12 = z1 - z2;
    let cyc = n == 8 && cyclic_less(i, j, k, m);
    match kind {
        RKind::LL => match n {
            1 => z1 - &(&q2 * z2),
            2 => &q2 * &(&phi * &d12),
            3 => &d12 * &phii,
            4 => z2 - &(&q2 * z1),
            5 => &x_symbol(reg, i, j) * &d12,
            6 => &omq * z1,
            7 => &omq * z2,
            _ => &omq * (if cyc { z2 } else { z1 }),
        },
        RKind::RR => match n {
            1 => z1 - &(&q2 * z2),
            2 => &d12 * &phii,
            3 => &q2 * &(&phi * &d12),
            4 => z2 - &(&q2 * z1),
            5 => &x_symbol(reg, i, j) * &d12,
            6 => &omq * z2,
            7 => &omq * z1,
            _ => &omq * (if cyc { z1 } else { z2 }),
        },
        RKind::LR => {
            let phi2 = &phi * &phi;
            let a = z1 - &(&q2 * z2);
            match n {
                1 => d12,
                2 | 3 => &phi * &a,
                4 => &phi2 * &(&(&q2p(2) * z2) - z1),
                5 => &phi2 * &(&x_symbol(reg, j, i) * &a),
                6 => &phi * &(&omq * z1),
                7 => &phi * &(&omq * z2),
                _ => {
                    let t = if cyc { &q2 * z2 } else { z1.clone() };
                    -(&phi2 * &(&omq * &t))
                }
            }
        }
        RKind::RL => {
            let m = m as i64;
            let phii2 = &phii * &phii;
            let b = z2 - &(&q2p(m) * z1);
            let (ii, jj, kk) = (i as i64, j as i64, k as i64);
            match n {
                1 => z2 - &(&q2p(m + 1) * z1),
                2 | 3 => &b * &phii,
                4 => &(&(&q2p(m - 1) * z1) - z2) * &phii2,
                5 => &(&x_symbol(reg, j, i) * &q2p(-1)) * &(&phii2 * &b),
                6 => &(&q2p(res_upper(kk - ii, m as usize) - 1) * &phii) * &(&omq * z2),
                7 => &(&q2p(res_lower(ii - kk, m as usize)) * &phii) * &(&omq * z1),
                _ => {
                    let t = if cyc { z1 } else { z2 };
                    &(&q2p(res_lower(ii - jj, m as usize) - 1) * &phii2) * &(&omq * t)
                }
            }
        }
    }
}

/// Free-standing form of [`WeightRegime::r_weight`].
pub fn r_weight(
    kind: RKind,
    c: &RConfig,
    z1: &LaurentPoly,
    z2: &LaurentPoly,
    k: Spin,
    regime: &WeightRegime,
) -> Result<LaurentPoly> {
    regime.r_weight(kind, c, z1, z2, k)
}

/// The scaling applied before the crystal limit of each R kind.
fn crystal_r_factor(kind: RKind, reg: &Arc<Registry>, m: usize) -> LaurentPoly {
    let v = var(reg, "v");
    match kind {
        RKind::LL | RKind::RR => -v,
        RKind::LR => LaurentPoly::one(reg),
        RKind::RL => v.pow(m as i32 + 2).expect("power"),
    }
}

/// Crystal R weight: Iwahori specialization at vertex color 1, times the
/// kind's scaling factor, then `v -> 0`.
pub fn crystal_r_weight(
    kind: RKind,
    c: &RConfig,
    z1: &LaurentPoly,
    z2: &LaurentPoly,
    m: usize,
) -> Result<LaurentPoly> {
    let reg = z1.registry();
    let iw = WeightRegime::iwahori(reg, m);
    let w = iw.specialize(&r_weight_template(kind, c, z1, z2, 1, m))?;
    v_to_zero(&(&w * &crystal_r_factor(kind, reg, m)))
}

/// A twist of the `X` symbols and `Phi`.
#[derive(Debug, Clone)]
pub struct TwistData {
    /// `phi[(c, d)]` for colors `c, d` in `1..=m`.
    pub phi: std::collections::BTreeMap<(Spin, Spin), LaurentPoly>,
    /// Multiplier for `Phi`.
    pub phi_scale: LaurentPoly,
}

impl TwistData {
    /// The identity twist.
    pub fn identity(reg: &Arc<Registry>, m: usize) -> Self {
        let mut phi = std::collections::BTreeMap::new();
        for c in 1..=m as Spin {
            for d in 1..=m as Spin {
                phi.insert((c, d), LaurentPoly::one(reg));
            }
        }
        TwistData { phi, phi_scale: LaurentPoly::one(reg) }
    }

    /// Builds a twist from values `phi(c,d)` for `c < d`, extended by
    /// `phi(d,c) = 1/phi(c,d)` and `phi(c,c) = 1`.
    pub fn from_upper(reg: &Arc<Registry>, m: usize, upper: &[((Spin, Spin), LaurentPoly)], phi_scale: LaurentPoly) -> Result<Self> {
        let mut t = Self::identity(reg, m);
        for ((c, d), p) in upper {
            if c >= d {
                return Err(Error::Domain(format!("twist entry ({c},{d}) must have c < d")));
            }
            t.phi.insert((*d, *c), p.inv_monomial()?);
            t.phi.insert((*c, *d), p.clone());
        }
        t.phi_scale = phi_scale;
        t.validate(m)?;
        Ok(t)
    }

    /// Draws a random twist with small nonzero rational entries.
    pub fn random<R: rand::Rng>(reg: &Arc<Registry>, m: usize, rng: &mut R) -> Self {
        let mut draw = || -> LaurentPoly {
            let mut n: i64 = 0;
            while n == 0 {
                n = rng.gen_range(-9..=9);
            }
            let d: i64 = rng.gen_range(1..=9);
            LaurentPoly::constant(reg, BigRational::new(n.into(), d.into()))
        };
        let mut upper = Vec::new();
        for c in 1..=m as Spin {
            for d in c + 1..=m as Spin {
                upper.push(((c, d), draw()));
            }
        }
        let scale = draw();
        Self::from_upper(reg, m, &upper, scale).expect("random twist is valid")
    }

    /// Checks `phi(c,d) phi(d,c) = 1`, `phi(c,c) = 1` and that every entry and the
    /// `Phi` scale are invertible monomials.
    pub fn validate(&self, m: usize) -> Result<()> {
        if !self.phi_scale.is_monomial() {
            return Err(Error::Domain("Phi scale must be a nonzero monomial".into()));
        }
        for c in 1..=m as Spin {
            for d in 1..=m as Spin {
                let a = self.phi.get(&(c, d)).ok_or_else(|| Error::Domain(format!("phi({c},{d}) missing")))?;
                let b = self.phi.get(&(d, c)).ok_or_else(|| Error::Domain(format!("phi({d},{c}) missing")))?;
                if !a.is_monomial() {
                    return Err(Error::Domain(format!("phi({c},{d}) is not a nonzero monomial")));
                }
                let one = LaurentPoly::one(a.registry());
                if c == d && *a != one {
                    return Err(Error::Domain(format!("phi({c},{c}) must be 1")));
                }
                if a * b != one {
                    return Err(Error::Domain(format!("phi({c},{d}) phi({d},{c}) != 1")));
                }
            }
        }
        Ok(())
    }
}

/// Rescales `X(i,j)` by `phi(i,j)` and `Phi` by the twist's scale.
pub fn apply_twist(regime: &WeightRegime, tw: &TwistData) -> Result<WeightRegime> {
    tw.validate(regime.m)?;
    let reg = regime.reg.clone();
    let mut out = regime.clone();
    for i in 1..=regime.m as Spin {
        for j in i + 1..=regime.m as Spin {
            let name = format!("X_{i}_{j}");
            let idx = reg.index_of(&name).expect("X registered");
            let cur = regime.bindings.get(&idx).cloned().unwrap_or_else(|| LaurentPoly::var_at(&reg, idx));
            out.bindings.insert(idx, &cur * &tw.phi[&(i, j)]);
        }
    }
    let idx = reg.index_of("Phi").expect("Phi registered");
    let cur = regime.bindings.get(&idx).cloned().unwrap_or_else(|| LaurentPoly::var_at(&reg, idx));
    out.bindings.insert(idx, &cur * &tw.phi_scale);
    out.twisted = true;
    Ok(out)
}

/// All unfused T configurations for a palette of size `m`.
pub fn all_t_configs(m: usize) -> Vec<TConfig> {
    let mut out = Vec::new();
    for color in 1..=m as Spin {
        for left in 0..=m as Spin {
            for right in 0..=m as Spin {
                for top in [false, true] {
                    for bottom in [false, true] {
                        out.push(TConfig { left, right, top, bottom, color });
                    }
                }
            }
        }
    }
    out
}

/// All fused configurations whose vertical edges carry at most one color.
pub fn all_crystal_configs(m: usize) -> Vec<FusedConfig> {
    let sets: Vec<ColorSet> = std::iter::once(0).chain((1..=m as Spin).map(bit)).collect();
    let mut out = Vec::new();
    for left in 0..=m as Spin {
        for right in 0..=m as Spin {
            for &top in &sets {
                for &bottom in &sets {
                    out.push(FusedConfig { left, right, top, bottom });
                }
            }
        }
    }
    out
}

/// All R configurations over a palette of size `m`.
pub fn all_r_configs(m: usize) -> Vec<RConfig> {
    let mut out = Vec::new();
    for bl in 0..=m as Spin {
        for tl in 0..=m as Spin {
            for tr in 0..=m as Spin {
                for br in 0..=m as Spin {
                    out.push(RConfig { bl, tl, tr, br });
                }
            }
        }
    }
    out
}

fn spin_str(s: Spin) -> String {
    if s == EMPTY { "-".into() } else { s.to_string() }
}

fn set_str(s: ColorSet) -> String {
    if s == 0 {
        return "-".into();
    }
    (0..32).filter(|b| s & (1 << b) != 0).map(|b| (b + 1).to_string()).collect::<Vec<_>>().join("")
}

/// Descriptor string for an unfused T configuration.
pub fn describe_t(family: RowType, c: &TConfig) -> String {
    let class = classify_t(family, c).map(|k| k.to_string()).unwrap_or_else(|| "x".into());
    format!(
        "{class} col={} left={} top={} right={} bottom={}",
        c.color,
        spin_str(c.left),
        u8::from(c.top),
        spin_str(c.right),
        u8::from(c.bottom)
    )
}

/// Descriptor string for a fused configuration.
pub fn describe_fused(family: RowType, c: &FusedConfig) -> String {
    let class = classify_crystal(family, c).map(|k| k.0.to_string()).unwrap_or_else(|| "x".into());
    format!(
        "{class} left={} top={} right={} bottom={}",
        spin_str(c.left),
        set_str(c.top),
        spin_str(c.right),
        set_str(c.bottom)
    )
}

/// Descriptor string for an R configuration.
pub fn describe_r(kind: RKind, c: &RConfig) -> String {
    let n = classify_r(kind, c).map(|k| k.0.to_string()).unwrap_or_else(|| "x".into());
    format!(
        "#{n} bl={} tl={} tr={} br={}",
        spin_str(c.bl),
        spin_str(c.tl),
        spin_str(c.tr),
        spin_str(c.br)
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reg() -> Arc<Registry> {
        Registry::standard(3, 3)
    }

    fn p(s: &str) -> LaurentPoly {
        LaurentPoly::parse(&reg(), s).unwrap()
    }

    fn tc(left: Spin, top: bool, right: Spin, bottom: bool, color: Spin) -> TConfig {
        TConfig { left, right, top, bottom, color }
    }

    #[test]
    fn generic_t_examples() {
        let g = WeightRegime::generic(&reg(), 3);
        let z = p("z1");
        assert_eq!(g.t_weight(RowType::R, &tc(2, true, 2, true, 2), &z).unwrap(), p("-Phi*q2*z1"));
        assert_eq!(g.t_weight(RowType::L, &tc(2, true, 0, false, 2), &z).unwrap(), p("z1^-1"));
        let iw = WeightRegime::iwahori(&reg(), 3);
        assert_eq!(iw.t_weight(RowType::R, &tc(0, true, 0, true, 1), &z).unwrap(), p("-v"));
        let cr = WeightRegime::crystal(&reg(), 3);
        assert!(cr.t_weight(RowType::L, &tc(0, true, 0, true, 1), &z).unwrap().is_zero());
    }

    #[test]
    fn substitution_example_iwahori_a2() {
        let iw = WeightRegime::iwahori(&reg(), 3);
        let w = iw.specialize(&(p("Phi") * x_symbol(&reg(), 1, 1) * p("z1"))).unwrap();
        assert_eq!(w, p("z1"));
    }

    #[test]
    fn regimes_satisfy_x_condition() {
        for m in 1..=3 {
            let r = Registry::standard(2, m);
            WeightRegime::generic(&r, m).check_x_condition().unwrap();
            WeightRegime::iwahori(&r, m).check_x_condition().unwrap();
            WeightRegime::metaplectic(&r, m).check_x_condition().unwrap();
        }
    }

    #[test]
    fn crystal_table_examples() {
        let z = p("z1");
        let a2p = |i, j| FusedConfig { left: i, bottom: bit(i), top: bit(j), right: j };
        assert_eq!(crystal_t_weight(RowType::GAMMA, &a2p(1, 2), &z), z);
        assert!(crystal_t_weight(RowType::GAMMA, &a2p(2, 1), &z).is_zero());
        let a1 = FusedConfig { left: 0, right: 0, top: 0, bottom: 0 };
        assert_eq!(crystal_t_weight(RowType::DELTA, &a1, &z), z);
        let b1 = FusedConfig { left: 0, right: 0, top: bit(2), bottom: bit(2) };
        assert!(crystal_t_weight(RowType::GAMMA, &b1, &z).is_zero());
    }

    #[test]
    fn r_examples() {
        let g = WeightRegime::generic(&reg(), 2);
        let (z1, z2) = (p("z1"), p("z2"));
        let e = RConfig::new(0, 0, 0, 0);
        assert_eq!(g.r_weight(RKind::LL, &e, &z1, &z2, 1).unwrap(), p("z1 - q2*z2"));
        assert_eq!(g.r_weight(RKind::LR, &e, &z1, &z2, 1).unwrap(), p("z1 - z2"));
        assert_eq!(g.r_weight(RKind::RL, &e, &z1, &z2, 1).unwrap(), p("z2 - q2^3*z1"));
    }

    #[test]
    fn rr_is_ll_with_phi_inverted_and_rows_swapped() {
        let m = 3;
        let r = reg();
        let (z1, z2) = (p("z1"), p("z2"));
        let inv = p("q2^-1*Phi^-1");
        for k in 1..=m as Spin {
            for c in all_r_configs(m) {
                let ll = r_weight_template(RKind::LL, &c, &z1, &z2, k, m);
                let rr = r_weight_template(RKind::RR, &c, &z1, &z2, k, m);
                let n = classify_r(RKind::LL, &c).map(|x| x.0);
                let expect = match n {
                    Some(1..=5) => ll.substitute_named(&[("Phi", inv.clone())]).unwrap(),
                    Some(_) => ll.substitute_named(&[("z1", z2.clone()), ("z2", z1.clone())]).unwrap(),
                    None => LaurentPoly::zero(&r),
                };
                assert_eq!(rr, expect, "{c:?}");
            }
        }
    }

    #[test]
    fn residues() {
        assert_eq!(res_lower(0, 3), 0);
        assert_eq!(res_upper(0, 3), 3);
        assert_eq!(res_lower(-1, 3), 2);
        assert_eq!(res_upper(4, 3), 1);
    }

    #[test]
    fn twist_validation() {
        let r = reg();
        let mut t = TwistData::identity(&r, 3);
        assert!(t.validate(3).is_ok());
        t.phi.insert((1, 2), p("2"));
        assert!(matches!(t.validate(3), Err(Error::Domain(_))));
        let id = apply_twist(&WeightRegime::generic(&r, 3), &TwistData::identity(&r, 3)).unwrap();
        let z = p("z1");
        for c in all_t_configs(3) {
            for fam in [RowType::R, RowType::L] {
                assert_eq!(
                    id.t_weight(fam, &c, &z).unwrap(),
                    WeightRegime::generic(&r, 3).t_weight(fam, &c, &z).unwrap()
                );
            }
        }
    }
}
