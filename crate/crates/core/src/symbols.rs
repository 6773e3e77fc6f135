//! Symbol spaces with exact rational coefficients.
//!
//! Text grammar for vectors:
//!
//! ```text
//! vector := "0" | term ((" + " | " - ") term)*
//! term   := ["-"] [coef "*"] symbol
//! coef   := integer | integer "/" integer
//! symbol := "X[" a "," b ";" k "," l "]" | "Y[" n ";" k "," l "]"
//! ```
//!
//! Terms appear in increasing symbol order and a unit coefficient is omitted.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn is_odd(k: i64) -> bool {
    k.rem_euclid(2) == 1
}

/// Top and bottom index of an exterior arc.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DoubleIndex {
    pub i1: i64,
    pub i2: i64,
}

impl DoubleIndex {
    pub const fn new(i1: i64, i2: i64) -> Self {
        DoubleIndex { i1, i2 }
    }

    pub fn is_valid(&self) -> bool {
        is_odd(self.i2)
    }

    pub fn shift_top(self, d: i64) -> Self {
        DoubleIndex::new(self.i1 + d, self.i2)
    }
}

impl fmt::Display for DoubleIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i1, self.i2)
    }
}

/// Basis symbol `X^{a,b}_{k,l}` with `k`, `l` odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct XSymbol {
    pub a: i64,
    pub b: i64,
    pub k: i64,
    pub l: i64,
}

impl XSymbol {
    pub fn new(a: i64, b: i64, k: i64, l: i64) -> Self {
        debug_assert!(
            is_odd(k) && is_odd(l),
            "bottom entries must be odd: {k}, {l}"
        );
        XSymbol { a, b, k, l }
    }

    /// Symbol of a crossing whose arcs have indices `first` and `second`.
    pub fn from_indices(first: DoubleIndex, second: DoubleIndex) -> Self {
        XSymbol::new(first.i1, second.i1, first.i2, second.i2)
    }

    /// `a + b − k − l`.
    pub fn grade(&self) -> i64 {
        self.a + self.b - self.k - self.l
    }
}

pub fn grade(x: &XSymbol) -> i64 {
    x.grade()
}

impl fmt::Display for XSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X[{},{};{},{}]", self.a, self.b, self.k, self.l)
    }
}

/// Basis symbol `Y^n_{k,l}`, always stored with `k < l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct YSymbol {
    pub n: i64,
    pub k: i64,
    pub l: i64,
}

impl YSymbol {
    /// Canonical form of `Y^n_{k,l}` with the sign it picks up, or `None`
    /// when `k = l`.
    pub fn canonical(n: i64, k: i64, l: i64) -> Option<(YSymbol, i64)> {
        match k.cmp(&l) {
            std::cmp::Ordering::Less => Some((YSymbol { n, k, l }, 1)),
            std::cmp::Ordering::Greater => Some((YSymbol { n, k: l, l: k }, -1)),
            std::cmp::Ordering::Equal => None,
        }
    }
}

impl fmt::Display for YSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Y[{};{},{}]", self.n, self.k, self.l)
    }
}

fn parse_ints(body: &str, expect: usize) -> Result<Vec<i64>> {
    let nums: Vec<i64> = body
        .split([',', ';'])
        .map(|s| {
            s.trim()
                .parse::<i64>()
                .map_err(|e| Error::Parse(format!("{s:?}: {e}")))
        })
        .collect::<Result<_>>()?;
    if nums.len() != expect {
        return Err(Error::Parse(format!(
            "expected {expect} integers in {body:?}"
        )));
    }
    Ok(nums)
}

fn bracket<'a>(s: &'a str, head: &str) -> Result<&'a str> {
    s.strip_prefix(head)
        .and_then(|r| r.strip_prefix('['))
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("malformed symbol {s:?}")))
}

impl FromStr for XSymbol {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let body = bracket(s, "X")?;
        if body.matches(';').count() != 1 {
            return Err(Error::Parse(format!("malformed symbol {s:?}")));
        }
        let v = parse_ints(body, 4)?;
        if !is_odd(v[2]) || !is_odd(v[3]) {
            return Err(Error::Parse(format!("bottom entries of {s} must be odd")));
        }
        Ok(XSymbol::new(v[0], v[1], v[2], v[3]))
    }
}

impl FromStr for YSymbol {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let body = bracket(s, "Y")?;
        if body.matches(';').count() != 1 {
            return Err(Error::Parse(format!("malformed symbol {s:?}")));
        }
        let v = parse_ints(body, 3)?;
        if !is_odd(v[1]) || !is_odd(v[2]) || v[1] >= v[2] {
            return Err(Error::Parse(format!("{s} needs odd k < l")));
        }
        Ok(YSymbol {
            n: v[0],
            k: v[1],
            l: v[2],
        })
    }
}

macro_rules! serde_as_text {
    ($t:ty) => {
        impl Serialize for $t {
            fn serialize<Ser: Serializer>(
                &self,
                ser: Ser,
            ) -> std::result::Result<Ser::Ok, Ser::Error> {
                ser.collect_str(self)
            }
        }

        impl<'de> Deserialize<'de> for $t {
            fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
                let s = String::deserialize(de)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

serde_as_text!(XSymbol);
serde_as_text!(YSymbol);

/// Finite rational combination of basis symbols. Zero coefficients are
/// never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinComb<S: Ord> {
    terms: BTreeMap<S, Rational>,
}

pub type XVector = LinComb<XSymbol>;
pub type YVector = LinComb<YSymbol>;

impl<S: Ord> Default for LinComb<S> {
    fn default() -> Self {
        LinComb {
            terms: BTreeMap::new(),
        }
    }
}

impl<S: Ord + Clone> LinComb<S> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(s: S) -> Self {
        let mut v = Self::zero();
        v.add_term(s, rat(1));
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, s: S, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(s.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&s);
        }
    }

    pub fn coefficient(&self, s: &S) -> Rational {
        self.terms.get(s).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&S, &Rational)> {
        self.terms.iter()
    }

    pub fn symbols(&self) -> impl Iterator<Item = &S> {
        self.terms.keys()
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (s, v) in &self.terms {
            out.add_term(s.clone(), v * c);
        }
        out
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (s, v) in &other.terms {
            self.add_term(s.clone(), v.clone());
        }
    }

    pub fn sub_assign(&mut self, other: &Self) {
        for (s, v) in &other.terms {
            self.add_term(s.clone(), -v.clone());
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn minus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.sub_assign(other);
        out
    }
}

impl<S: Ord + Clone> FromIterator<(S, Rational)> for LinComb<S> {
    fn from_iter<I: IntoIterator<Item = (S, Rational)>>(iter: I) -> Self {
        let mut v = Self::zero();
        for (s, c) in iter {
            v.add_term(s, c);
        }
        v
    }
}

impl YVector {
    /// Adds `c · Y^n_{k,l}`, applying antisymmetry.
    pub fn add_y(&mut self, n: i64, k: i64, l: i64, c: Rational) {
        if let Some((sym, sign)) = YSymbol::canonical(n, k, l) {
            self.add_term(sym, c * rat(sign));
        }
    }
}

impl<S: Ord + fmt::Display> fmt::Display for LinComb<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (s, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            if mag.is_one() {
                write!(f, "{s}")?;
            } else {
                write!(f, "{mag}*{s}")?;
            }
        }
        Ok(())
    }
}

fn parse_term<S: FromStr<Err = Error>>(tok: &str) -> Result<(S, Rational)> {
    let (neg, body) = match tok.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, tok),
    };
    let (coef, sym) = match body.split_once('*') {
        Some((c, s)) => (
            Rational::from_str(c).map_err(|e| Error::Parse(format!("coefficient {c:?}: {e}")))?,
            s,
        ),
        None => (rat(1), body),
    };
    if coef.is_zero() || coef.is_negative() {
        return Err(Error::Parse(format!(
            "coefficient in {tok:?} must be positive"
        )));
    }
    let sym = sym.parse::<S>()?;
    Ok((sym, if neg { -coef } else { coef }))
}

impl<S: Ord + Clone + FromStr<Err = Error>> FromStr for LinComb<S> {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" {
            return Ok(Self::zero());
        }
        let toks: Vec<&str> = s.split_whitespace().collect();
        if toks.is_empty() {
            return Err(Error::Parse("empty vector".into()));
        }
        let mut out = Self::zero();
        let (s0, c0) = parse_term::<S>(toks[0])?;
        out.add_term(s0, c0);
        let mut rest = toks[1..].chunks(2);
        for pair in &mut rest {
            let [op, term] = pair else {
                return Err(Error::Parse(format!("dangling operator in {s:?}")));
            };
            if term.starts_with('-') {
                return Err(Error::Parse(format!("unexpected sign in {term:?}")));
            }
            let (sym, c) = parse_term::<S>(term)?;
            match *op {
                "+" => out.add_term(sym, c),
                "-" => out.add_term(sym, -c),
                other => return Err(Error::Parse(format!("unknown operator {other:?}"))),
            }
        }
        Ok(out)
    }
}

impl<S: Ord + Clone + fmt::Display> LinComb<S> {
    /// Terms as `[symbol, "p/q"]` pairs in canonical order.
    pub fn json_terms(&self) -> Vec<(String, String)> {
        self.terms
            .iter()
            .map(|(s, c)| (s.to_string(), c.to_string()))
            .collect()
    }
}

impl<S: Ord + Clone + fmt::Display> Serialize for LinComb<S> {
    fn serialize<Ser: Serializer>(&self, ser: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        self.json_terms().serialize(ser)
    }
}

impl<'de, S: Ord + Clone + FromStr<Err = Error>> Deserialize<'de> for LinComb<S> {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = Vec::<(String, String)>::deserialize(de)?;
        let mut out = Self::zero();
        for (s, c) in raw {
            let sym = s.parse::<S>().map_err(D::Error::custom)?;
            let coef =
                Rational::from_str(&c).map_err(|e| D::Error::custom(format!("{c:?}: {e}")))?;
            out.add_term(sym, coef);
        }
        Ok(out)
    }
}

/// `X^{a,b}_{k,l} ↦ Y^{a+b}_{k,l}`, extended linearly.
pub fn project(x: &XVector) -> YVector {
    let mut y = YVector::zero();
    for (s, c) in x.terms() {
        y.add_y(s.a + s.b, s.k, s.l, c.clone());
    }
    y
}

/// Linear functional on `𝕐` that separates base curves of winding `m`:
/// reads only grade-`m` terms with `k + l ∈ {0, ±2}`.
pub fn winding_functional(y: &YVector, m: i64) -> Rational {
    let mut total = Rational::zero();
    for (s, c) in y.terms() {
        if s.n - s.k - s.l != m {
            continue;
        }
        let v = match s.k + s.l {
            0 => rat(s.k - s.l),
            2 | -2 => Rational::new(BigInt::from(s.l - s.k), BigInt::from(2)),
            _ => continue,
        };
        total += c * v;
    }
    total
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum JKind {
    #[serde(rename = "J+")]
    Plus,
    #[serde(rename = "JA")]
    A,
    #[serde(rename = "JB")]
    B,
}

impl JKind {
    pub fn name(self) -> &'static str {
        match self {
            JKind::Plus => "J+",
            JKind::A => "JA",
            JKind::B => "JB",
        }
    }
}

impl FromStr for JKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "J+" | "Jplus" | "plus" => Ok(JKind::Plus),
            "JA" | "A" => Ok(JKind::A),
            "JB" | "B" => Ok(JKind::B),
            _ => Err(Error::Parse(format!("unknown J kind {s:?}"))),
        }
    }
}

/// Label of a tangency: its kind and the unordered pair of arc indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct JSymbol {
    pub kind: JKind,
    pub pair: [DoubleIndex; 2],
}

impl JSymbol {
    pub fn new(kind: JKind, a: DoubleIndex, b: DoubleIndex) -> Self {
        let pair = if a <= b { [a, b] } else { [b, a] };
        JSymbol { kind, pair }
    }
}

impl fmt::Display for JSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", self.kind.name(), self.pair[0], self.pair[1])
    }
}

fn check_kind(j: &JSymbol, expected: JKind) -> Result<()> {
    if j.kind != expected {
        return Err(Error::WrongKind {
            expected: expected.name(),
            found: j.kind.name(),
        });
    }
    Ok(())
}

fn two_terms(x: XSymbol, y: XSymbol) -> XVector {
    [(x, rat(1)), (y, rat(1))].into_iter().collect()
}

fn ja_terms(a: DoubleIndex, b: DoubleIndex) -> XVector {
    two_terms(
        XSymbol::new(a.i1, b.i1 + 1, a.i2, b.i2),
        XSymbol::new(b.i1, a.i1 + 1, b.i2, a.i2),
    )
}

/// `X^{a1,b1}_{a2,b2} + X^{b1,a1}_{b2,a2}`.
pub fn delta_plus(j: &JSymbol) -> Result<XVector> {
    check_kind(j, JKind::Plus)?;
    let [a, b] = j.pair;
    Ok(two_terms(
        XSymbol::from_indices(a, b),
        XSymbol::from_indices(b, a),
    ))
}

/// `X^{a1,b1+1}_{a2,b2} + X^{b1,a1+1}_{b2,a2}`.
pub fn delta_a(j: &JSymbol) -> Result<XVector> {
    check_kind(j, JKind::A)?;
    let [a, b] = j.pair;
    Ok(ja_terms(a, b))
}

/// The `J^A` value after lowering both top entries by one.
pub fn delta_b(j: &JSymbol) -> Result<XVector> {
    check_kind(j, JKind::B)?;
    let [a, b] = j.pair;
    Ok(ja_terms(a.shift_top(-1), b.shift_top(-1)))
}

/// First derivative of `F` on any tangency symbol.
pub fn predicted_delta(j: &JSymbol) -> XVector {
    match j.kind {
        JKind::Plus => delta_plus(j),
        JKind::A => delta_a(j),
        JKind::B => delta_b(j),
    }
    .expect("kind matches by construction")
}

/// Label of a triple point: the three arc indices in cyclic order along the
/// curve, each with its hat flag, rotated to the lexicographically least
/// form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SSymbol {
    pub arcs: [(DoubleIndex, bool); 3],
}

impl SSymbol {
    pub fn new(arcs: [(DoubleIndex, bool); 3]) -> Self {
        let rot = |r: usize| [arcs[r % 3], arcs[(r + 1) % 3], arcs[(r + 2) % 3]];
        let best = (0..3).map(rot).min().expect("three rotations");
        SSymbol { arcs: best }
    }

    pub fn hats(&self) -> usize {
        self.arcs.iter().filter(|(_, h)| *h).count()
    }
}

impl fmt::Display for SSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("S")?;
        for (d, hat) in &self.arcs {
            if *hat {
                write!(f, "^{d}")?;
            } else {
                write!(f, "{d}")?;
            }
        }
        Ok(())
    }
}
