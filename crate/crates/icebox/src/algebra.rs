//! Sparse multivariate Laurent polynomials with exact rational coefficients.
//!
//! Every polynomial carries a shared [`Registry`] naming its indeterminates.
//! Exponent vectors are dense and sized to the registry; coefficients are
//! [`BigRational`] and never stored as zero, so structural equality is
//! mathematical equality.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// An ordered, duplicate-free list of indeterminate names.
#[derive(Debug)]
pub struct Registry {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl Registry {
    /// Builds a registry. Names must be unique, and any `X_i_j` name must have `i < j`.
    pub fn new<I, S>(names: I) -> Result<Arc<Self>>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut out = Registry { names: Vec::new(), index: HashMap::new() };
        for name in names {
            let name = name.into();
            if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(Error::Domain(format!("invalid indeterminate name {name:?}")));
            }
            if let Some((i, j)) = parse_x_name(&name) {
                if i >= j {
                    return Err(Error::Domain(format!(
                        "{name}: only X_i_j with i < j may be registered"
                    )));
                }
            }
            if out.index.contains_key(&name) {
                return Err(Error::Domain(format!("duplicate indeterminate {name}")));
            }
            out.index.insert(name.clone(), out.names.len());
            out.names.push(name);
        }
        Ok(Arc::new(out))
    }

    /// The registry used throughout the engine: `q2`, `v`, `Phi`, `z1..z{nz}`,
    /// `X_i_j` for `1 <= i < j <= m` and the Gauss-sum symbols `g_1..g_{m-1}`.
    pub fn standard(nz: usize, m: usize) -> Arc<Self> {
        let mut names: Vec<String> = vec!["q2".into(), "v".into(), "Phi".into()];
        names.extend((1..=nz).map(|i| format!("z{i}")));
        for i in 1..=m {
            for j in i + 1..=m {
                names.push(format!("X_{i}_{j}"));
            }
        }
        names.extend((1..m).map(|a| format!("g_{a}")));
        Registry::new(names).expect("standard names are valid")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.names[idx]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// Registries are interchangeable when they list the same names in the same order.
    pub fn same(a: &Arc<Registry>, b: &Arc<Registry>) -> bool {
        Arc::ptr_eq(a, b) || a.names == b.names
    }
}

fn parse_x_name(name: &str) -> Option<(u32, u32)> {
    let rest = name.strip_prefix("X_")?;
    let (i, j) = rest.split_once('_')?;
    Some((i.parse().ok()?, j.parse().ok()?))
}

/// Variable index to replacement polynomial.
pub type Bindings = BTreeMap<usize, LaurentPoly>;

/// A Laurent polynomial in canonical form.
#[derive(Clone)]
pub struct LaurentPoly {
    reg: Arc<Registry>,
    terms: BTreeMap<Vec<i32>, BigRational>,
}

impl PartialEq for LaurentPoly {
    fn eq(&self, other: &Self) -> bool {
        Registry::same(&self.reg, &other.reg) && self.terms == other.terms
    }
}

impl Eq for LaurentPoly {}

impl std::hash::Hash for LaurentPoly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        for (e, c) in &self.terms {
            e.hash(state);
            c.hash(state);
        }
    }
}

impl LaurentPoly {
    pub fn zero(reg: &Arc<Registry>) -> Self {
        LaurentPoly { reg: reg.clone(), terms: BTreeMap::new() }
    }

    pub fn one(reg: &Arc<Registry>) -> Self {
        Self::constant(reg, BigRational::one())
    }

    pub fn constant(reg: &Arc<Registry>, c: BigRational) -> Self {
        Self::monomial(reg, vec![0; reg.len()], c)
    }

    pub fn int(reg: &Arc<Registry>, c: i64) -> Self {
        Self::constant(reg, BigRational::from_integer(BigInt::from(c)))
    }

    /// `coef * x^exp`. Panics if `exp` has the wrong length.
    pub fn monomial(reg: &Arc<Registry>, exp: Vec<i32>, coef: BigRational) -> Self {
        assert_eq!(exp.len(), reg.len(), "exponent vector length must match registry");
        let mut terms = BTreeMap::new();
        if !coef.is_zero() {
            terms.insert(exp, coef);
        }
        LaurentPoly { reg: reg.clone(), terms }
    }

    /// The indeterminate with the given index.
    pub fn var_at(reg: &Arc<Registry>, idx: usize) -> Self {
        let mut exp = vec![0; reg.len()];
        exp[idx] = 1;
        Self::monomial(reg, exp, BigRational::one())
    }

    /// The indeterminate with the given name.
    pub fn var(reg: &Arc<Registry>, name: &str) -> Result<Self> {
        let idx = reg
            .index_of(name)
            .ok_or_else(|| Error::Domain(format!("unknown indeterminate {name}")))?;
        Ok(Self::var_at(reg, idx))
    }

    pub fn registry(&self) -> &Arc<Registry> {
        &self.reg
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i32>, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// The value if this polynomial is a constant (including zero).
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next()?;
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Smallest and largest exponent of variable `idx` over all terms.
    pub fn exponent_range(&self, idx: usize) -> Option<(i32, i32)> {
        let mut it = self.terms.keys().map(|e| e[idx]);
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), x| (lo.min(x), hi.max(x))))
    }

    fn check(&self, other: &Self) -> Result<()> {
        if Registry::same(&self.reg, &other.reg) {
            Ok(())
        } else {
            Err(Error::RegistryMismatch(format!(
                "[{}] vs [{}]",
                self.reg.names.join(","),
                other.reg.names.join(",")
            )))
        }
    }

    fn add_term(terms: &mut BTreeMap<Vec<i32>, BigRational>, e: Vec<i32>, c: BigRational) {
        use std::collections::btree_map::Entry;
        match terms.entry(e) {
            Entry::Vacant(v) => {
                if !c.is_zero() {
                    v.insert(c);
                }
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        out.add_assign_unchecked(other);
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            Self::add_term(&mut out.terms, e.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut terms = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<i32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                Self::add_term(&mut terms, e, ca * cb);
            }
        }
        Ok(LaurentPoly { reg: self.reg.clone(), terms })
    }

    fn add_assign_unchecked(&mut self, other: &Self) {
        for (e, c) in &other.terms {
            Self::add_term(&mut self.terms, e.clone(), c.clone());
        }
    }

    /// In-place addition. Panics on registry mismatch.
    pub fn add_assign_ref(&mut self, other: &Self) {
        self.check(other).expect("LaurentPoly addition");
        self.add_assign_unchecked(other);
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.reg);
        }
        let terms = self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect();
        LaurentPoly { reg: self.reg.clone(), terms }
    }

    /// Multiplicative inverse of a monomial.
    pub fn inv_monomial(&self) -> Result<Self> {
        if !self.is_monomial() {
            return Err(Error::Domain(format!("{self} is not an invertible monomial")));
        }
        let (e, c) = self.terms.iter().next().expect("one term");
        Ok(Self::monomial(&self.reg, e.iter().map(|x| -x).collect(), c.recip()))
    }

    /// Integer power; negative powers require a monomial.
    pub fn pow(&self, n: i32) -> Result<Self> {
        if n < 0 {
            return self.inv_monomial()?.pow(-n);
        }
        if self.is_monomial() {
            let (e, c) = self.terms.iter().next().expect("one term");
            let coef = num_traits::pow::Pow::pow(c, n.unsigned_abs());
            return Ok(Self::monomial(&self.reg, e.iter().map(|x| x * n).collect(), coef));
        }
        let mut acc = Self::one(&self.reg);
        let mut base = self.clone();
        let mut k = n as u32;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    /// Simultaneous substitution of the bound variables.
    ///
    /// A variable appearing with a negative exponent must be bound to a monomial.
    pub fn substitute(&self, bindings: &Bindings) -> Result<Self> {
        for b in bindings.values() {
            self.check(b)?;
        }
        if bindings.is_empty() {
            return Ok(self.clone());
        }
        let mut cache: HashMap<(usize, i32), LaurentPoly> = HashMap::new();
        let mut out = Self::zero(&self.reg);
        for (e, c) in &self.terms {
            let mut rest = e.clone();
            let mut factor = Self::constant(&self.reg, c.clone());
            for (&idx, b) in bindings {
                let k = e[idx];
                if k == 0 {
                    continue;
                }
                rest[idx] = 0;
                if k < 0 && !b.is_monomial() {
                    return Err(Error::Domain(format!(
                        "cannot substitute {} -> {} into a negative power",
                        self.reg.names[idx], b
                    )));
                }
                let p = match cache.get(&(idx, k)) {
                    Some(p) => p.clone(),
                    None => {
                        let p = b.pow(k)?;
                        cache.insert((idx, k), p.clone());
                        p
                    }
                };
                factor = &factor * &p;
                if factor.is_zero() {
                    break;
                }
            }
            if factor.is_zero() {
                continue;
            }
            for (fe, fc) in factor.terms {
                let ne: Vec<i32> = fe.iter().zip(&rest).map(|(x, y)| x + y).collect();
                Self::add_term(&mut out.terms, ne, fc);
            }
        }
        Ok(out)
    }

    /// Substitution keyed by variable name.
    pub fn substitute_named(&self, bindings: &[(&str, LaurentPoly)]) -> Result<Self> {
        let mut map = Bindings::new();
        for (name, p) in bindings {
            let idx = self
                .reg
                .index_of(name)
                .ok_or_else(|| Error::Domain(format!("unknown indeterminate {name}")))?;
            map.insert(idx, p.clone());
        }
        self.substitute(&map)
    }

    /// Terms in graded order: higher total degree first, ties broken by
    /// lexicographically larger exponent vector first.
    pub fn graded_terms(&self) -> Vec<(&Vec<i32>, &BigRational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| graded_cmp(a.0, b.0));
        v
    }

    /// Canonical text: terms `p/q*var^e` joined by `" + "`, zero as `"0"`.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let parts: Vec<String> = self
            .graded_terms()
            .into_iter()
            .map(|(e, c)| {
                let mut s = format!("{}/{}", c.numer(), c.denom());
                for (i, &k) in e.iter().enumerate() {
                    if k != 0 {
                        s.push_str(&format!("*{}^{}", self.reg.names[i], k));
                    }
                }
                s
            })
            .collect();
        parts.join(" + ")
    }

    /// Parses either the canonical text form or a general expression using
    /// `+ - * / ^` and parentheses. Division is only by nonzero monomials.
    pub fn parse(reg: &Arc<Registry>, text: &str) -> Result<Self> {
        Parser::new(reg, text)?.parse_all()
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .graded_terms()
            .into_iter()
            .map(|(e, c)| json!({"exp": e, "coef": format!("{}/{}", c.numer(), c.denom())}))
            .collect();
        json!({"vars": self.reg.names, "terms": terms})
    }

    /// Reads the JSON form. With `reg` given, the `vars` list must match it.
    pub fn from_json(v: &Value, reg: Option<&Arc<Registry>>) -> Result<Self> {
        let perr = |m: &str| Error::Parse(format!("polynomial JSON: {m}"));
        let vars: Vec<String> = v
            .get("vars")
            .and_then(Value::as_array)
            .ok_or_else(|| perr("missing vars"))?
            .iter()
            .map(|x| x.as_str().map(str::to_string).ok_or_else(|| perr("non-string var")))
            .collect::<Result<_>>()?;
        let reg = match reg {
            Some(r) => {
                if r.names != vars {
                    return Err(Error::RegistryMismatch(format!(
                        "JSON vars [{}] vs registry [{}]",
                        vars.join(","),
                        r.names.join(",")
                    )));
                }
                r.clone()
            }
            None => Registry::new(vars)?,
        };
        let mut out = Self::zero(&reg);
        for t in v.get("terms").and_then(Value::as_array).ok_or_else(|| perr("missing terms"))? {
            let exp: Vec<i32> = t
                .get("exp")
                .and_then(Value::as_array)
                .ok_or_else(|| perr("missing exp"))?
                .iter()
                .map(|x| {
                    x.as_i64()
                        .and_then(|k| i32::try_from(k).ok())
                        .ok_or_else(|| perr("bad exponent"))
                })
                .collect::<Result<_>>()?;
            if exp.len() != reg.len() {
                return Err(perr("exponent length differs from vars"));
            }
            let coef = parse_rational(
                t.get("coef").and_then(Value::as_str).ok_or_else(|| perr("missing coef"))?,
            )?;
            Self::add_term(&mut out.terms, exp, coef);
        }
        Ok(out)
    }
}

fn graded_cmp(a: &[i32], b: &[i32]) -> Ordering {
    let da: i64 = a.iter().map(|&x| x as i64).sum();
    let db: i64 = b.iter().map(|&x| x as i64).sum();
    db.cmp(&da).then_with(|| b.cmp(a))
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s.trim(), "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.graded_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k != 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        self.reg.names[i].clone()
                    } else {
                        format!("{}^{}", self.reg.names[i], k)
                    }
                })
                .collect();
            let coef = if a.is_integer() {
                a.numer().to_string()
            } else {
                format!("{}/{}", a.numer(), a.denom())
            };
            if vars.is_empty() {
                write!(f, "{coef}")?;
            } else if a.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{coef}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $try:ident) => {
        impl $tr<&LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: &LaurentPoly) -> LaurentPoly {
                self.$try(rhs).expect(concat!("LaurentPoly ", stringify!($m)))
            }
        }
        impl $tr<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$m(rhs)
            }
        }
        impl $tr<LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                self.$m(&rhs)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect();
        LaurentPoly { reg: self.reg.clone(), terms }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

/// Convenience wrapper around [`LaurentPoly::try_add`].
pub fn lp_add(a: &LaurentPoly, b: &LaurentPoly) -> Result<LaurentPoly> {
    a.try_add(b)
}

/// Convenience wrapper around [`LaurentPoly::try_mul`].
pub fn lp_mul(a: &LaurentPoly, b: &LaurentPoly) -> Result<LaurentPoly> {
    a.try_mul(b)
}

/// Equality; fails only when the registries differ.
pub fn lp_eq(a: &LaurentPoly, b: &LaurentPoly) -> Result<bool> {
    Ok(a.try_sub(b)?.is_zero())
}

/// Convenience wrapper around [`LaurentPoly::substitute`].
pub fn lp_substitute(p: &LaurentPoly, bindings: &Bindings) -> Result<LaurentPoly> {
    p.substitute(bindings)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

struct Parser<'a> {
    reg: &'a Arc<Registry>,
    toks: Vec<Tok>,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(reg: &'a Arc<Registry>, text: &str) -> Result<Self> {
        let chars: Vec<char> = text.chars().collect();
        let mut toks = Vec::new();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                toks.push(Tok::Num(s.parse().expect("digits")));
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                toks.push(Tok::Ident(chars[start..i].iter().collect()));
            } else if "+-*/^()".contains(c) {
                toks.push(Tok::Sym(c));
                i += 1;
            } else {
                return Err(Error::Parse(format!("unexpected character {c:?} in {text:?}")));
            }
        }
        Ok(Parser { reg, toks, pos: 0 })
    }

    fn peek_sym(&self, c: char) -> bool {
        self.toks.get(self.pos) == Some(&Tok::Sym(c))
    }

    fn parse_all(mut self) -> Result<LaurentPoly> {
        if self.toks.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        let p = self.expr()?;
        if self.pos != self.toks.len() {
            return Err(Error::Parse(format!("trailing input at token {}", self.pos)));
        }
        Ok(p)
    }

    fn expr(&mut self) -> Result<LaurentPoly> {
        let mut acc = self.term()?;
        loop {
            if self.peek_sym('+') {
                self.pos += 1;
                acc = &acc + &self.term()?;
            } else if self.peek_sym('-') {
                self.pos += 1;
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<LaurentPoly> {
        let mut neg = false;
        while self.peek_sym('-') || self.peek_sym('+') {
            neg ^= self.peek_sym('-');
            self.pos += 1;
        }
        let mut acc = self.factor()?;
        if neg {
            acc = -acc;
        }
        loop {
            if self.peek_sym('*') {
                self.pos += 1;
                acc = &acc * &self.factor()?;
            } else if self.peek_sym('/') {
                self.pos += 1;
                let d = self.factor()?;
                acc = &acc * &d.inv_monomial()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<LaurentPoly> {
        let base = self.atom()?;
        if !self.peek_sym('^') {
            return Ok(base);
        }
        self.pos += 1;
        let mut neg = false;
        if self.peek_sym('-') {
            neg = true;
            self.pos += 1;
        }
        match self.toks.get(self.pos) {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let k: i32 = n
                    .try_into()
                    .map_err(|_| Error::Parse(format!("exponent {n} out of range")))?;
                base.pow(if neg { -k } else { k })
            }
            _ => Err(Error::Parse("expected integer exponent".into())),
        }
    }

    fn atom(&mut self) -> Result<LaurentPoly> {
        let tok = self
            .toks
            .get(self.pos)
            .cloned()
            .ok_or_else(|| Error::Parse("unexpected end of input".into()))?;
        self.pos += 1;
        match tok {
            Tok::Num(n) => Ok(LaurentPoly::constant(self.reg, BigRational::from_integer(n))),
            Tok::Ident(name) => LaurentPoly::var(self.reg, &name),
            Tok::Sym('(') => {
                let e = self.expr()?;
                if !self.peek_sym(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                self.pos += 1;
                Ok(e)
            }
            Tok::Sym(c) => Err(Error::Parse(format!("unexpected {c:?}"))),
        }
    }
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

    #[test]
    fn additive_inverse_and_cancellation() {
        assert!((p("z1") + p("-z1")).is_zero());
        assert_eq!(p("z2 - q2*z1") + p("q2*z1"), p("z2"));
    }

    #[test]
    fn telescoping_sum_m3() {
        let r = reg();
        let mut acc = LaurentPoly::zero(&r);
        for i in 1..=3 {
            acc = acc + p("1 - q2") * p("q2").pow(i - 1).unwrap();
        }
        assert_eq!(acc, p("1 - q2^3"));
    }

    #[test]
    fn products_from_the_inverse_identity() {
        assert!((p("z1") * p("z1^-1")) == p("1"));
        let lhs = p("Phi*(z2 - q2*z1)") * p("(z2 - q2^2*z1)/Phi");
        assert_eq!(lhs, p("(z2 - q2*z1)*(z2 - q2^2*z1)"));
        assert_eq!(p("X_1_2") * p("q2*X_1_2^-1"), p("q2"));
    }

    #[test]
    fn equality_checks() {
        assert_eq!(p("z1*z2"), p("z2*z1"));
        assert_ne!(p("z2 - q2*z1"), p("z1 - q2*z2"));
    }

    #[test]
    fn substitution_examples() {
        let r = reg();
        let mut b = Bindings::new();
        b.insert(r.index_of("z1").unwrap(), p("z2"));
        b.insert(r.index_of("z2").unwrap(), p("z1"));
        assert_eq!(p("z1").substitute(&b).unwrap(), p("z2"));

        let v0 = [("v", LaurentPoly::zero(&r))];
        assert!(p("-v").substitute_named(&v0).unwrap().is_zero());
        assert!(matches!(p("v^-1").substitute_named(&v0), Err(Error::Domain(_))));
        assert!(matches!(
            p("z1^-1").substitute_named(&[("z1", p("z1 + z2"))]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn registry_rules() {
        assert!(Registry::new(["a", "a"]).is_err());
        assert!(Registry::new(["X_2_1"]).is_err());
        assert!(Registry::new(["X_1_1"]).is_err());
        let other = Registry::new(["z1"]).unwrap();
        let a = LaurentPoly::var(&other, "z1").unwrap();
        assert!(matches!(a.try_add(&p("z1")), Err(Error::RegistryMismatch(_))));
    }

    #[test]
    fn text_and_json_round_trip() {
        let x = p("3/2*z1^2*z2^-1 - 7*q2 + 1 - X_1_3*Phi^-2");
        let t = x.to_text();
        assert_eq!(LaurentPoly::parse(&reg(), &t).unwrap(), x);
        assert_eq!(LaurentPoly::parse(&reg(), &t).unwrap().to_text(), t);
        let j = x.to_json();
        let back = LaurentPoly::from_json(&j, Some(&reg())).unwrap();
        assert_eq!(back, x);
        assert_eq!(serde_json::to_string(&back.to_json()).unwrap(), serde_json::to_string(&j).unwrap());
        assert_eq!(LaurentPoly::zero(&reg()).to_text(), "0");
    }

    #[test]
    fn graded_order() {
        let x = p("1 + z1 + z2^2 + z1*z2");
        let order: Vec<String> = x
            .graded_terms()
            .into_iter()
            .map(|(e, c)| LaurentPoly::monomial(&reg(), e.clone(), c.clone()).to_string())
            .collect();
        assert_eq!(order, vec!["z1*z2", "z2^2", "z1", "1"]);
        assert_eq!(x.to_string(), "z1*z2 + z2^2 + z1 + 1");
    }
}
