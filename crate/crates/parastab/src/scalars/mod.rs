//! Exact commutative-ring arithmetic for eigenvalue computations.
//!
//! Three scalar domains live here:
//!
//! * [`SymScalar`] — the Laurent ring `Q[x1^±, x2^±, s^±, v^±]` holding the
//!   values of the inducing characters at the inverse uniformizer together
//!   with a formal square root `v` of `q`. The symbol `q` is never stored:
//!   every occurrence is rewritten as `v^2`, so half-integral powers of `q`
//!   are ordinary integer powers of `v`.
//! * [`QuadExtElem`] — elements `a + b·y` of a quadratic extension
//!   `Q[y]/(y^2 - t·y + n)`, used for concrete Hecke roots such as the pair
//!   `alpha_p, beta_p` with trace `a_p` and norm `chi(p) p^(k-1)`.
//! * [`PAdicVal`] — p-adic valuations with values in `Q ∪ {+∞}`, assigned to
//!   quadratic-ring elements through the Newton polygon of the minimal
//!   polynomial, with the convention that the ring generator `y` is the root
//!   of smaller valuation.
//!
//! All values are immutable; every operation is pure.

mod parse;

pub use parse::parse_rat;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

/// Convenience constructor for rationals.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `n/d` as an exact rational.
pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// The four formal variables of the symbolic ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    X1,
    X2,
    S,
    V,
}

impl Var {
    pub const ALL: [Var; 4] = [Var::X1, Var::X2, Var::S, Var::V];

    fn index(self) -> usize {
        match self {
            Var::X1 => 0,
            Var::X2 => 1,
            Var::S => 2,
            Var::V => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::X1 => "x1",
            Var::X2 => "x2",
            Var::S => "s",
            Var::V => "v",
        }
    }
}

/// Exponent vector `(e_x1, e_x2, e_s, e_v)`.
pub type Expo = [i64; 4];

fn expo_add(a: &Expo, b: &Expo) -> Expo {
    let mut out = [0i64; 4];
    for i in 0..4 {
        out[i] = a[i]
            .checked_add(b[i])
            .expect("exponent overflow in SymScalar multiplication");
    }
    out
}

fn expo_neg(a: &Expo) -> Expo {
    let mut out = [0i64; 4];
    for i in 0..4 {
        out[i] = a[i].checked_neg().expect("exponent overflow in negation");
    }
    out
}

/// Element of the exact Laurent ring `Q[x1^±, x2^±, s^±, v^±]`.
///
/// Canonical form: the term map stores no zero coefficients, so two scalars
/// are equal iff their maps coincide. `q` is represented as `v^2` throughout.
/// The `Ord` instance is the lexicographic order on the canonical term list
/// and exists only to give multisets of scalars a deterministic ordering.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SymScalar {
    terms: BTreeMap<Expo, Rat>,
}

impl SymScalar {
    pub fn zero() -> Self {
        SymScalar { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::constant(rat(1))
    }

    pub fn constant(c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert([0; 4], c);
        }
        SymScalar { terms }
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(rat(n))
    }

    pub fn var(v: Var) -> Self {
        let mut e = [0i64; 4];
        e[v.index()] = 1;
        Self::monomial(rat(1), e)
    }

    pub fn var_pow(v: Var, exp: i64) -> Self {
        let mut e = [0i64; 4];
        e[v.index()] = exp;
        Self::monomial(rat(1), e)
    }

    pub fn monomial(c: Rat, e: Expo) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        SymScalar { terms }
    }

    /// The scalar `q = v^2`.
    pub fn q() -> Self {
        Self::var_pow(Var::V, 2)
    }

    /// `q^e` for an integer exponent.
    pub fn q_pow(e: i64) -> Self {
        Self::var_pow(Var::V, 2 * e)
    }

    /// Satake parameter `alpha = x1 * x2 * s`.
    pub fn alpha() -> Self {
        Self::monomial(rat(1), [1, 1, 1, 0])
    }

    /// Satake parameter `beta = x1 * s`.
    pub fn beta() -> Self {
        Self::monomial(rat(1), [1, 0, 1, 0])
    }

    /// Satake parameter `gamma = x2 * s`.
    pub fn gamma() -> Self {
        Self::monomial(rat(1), [0, 1, 1, 0])
    }

    /// Satake parameter `delta = s`.
    pub fn delta() -> Self {
        Self::monomial(rat(1), [0, 0, 1, 0])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&[0; 4])
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Expo, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Single-term view, if this scalar is a monomial.
    pub fn as_monomial(&self) -> Option<(&Expo, &Rat)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Constant view, if this scalar has no variable content.
    pub fn as_constant(&self) -> Option<Rat> {
        if self.is_zero() {
            return Some(rat(0));
        }
        let (e, c) = self.as_monomial()?;
        if *e == [0; 4] {
            Some(c.clone())
        } else {
            None
        }
    }

    /// Multiplicative inverse; defined only for monomials.
    pub fn inverse(&self) -> Option<SymScalar> {
        let (e, c) = self.as_monomial()?;
        Some(SymScalar::monomial(c.recip(), expo_neg(e)))
    }

    /// Integer power; negative exponents require a monomial.
    pub fn pow(&self, exp: i64) -> Option<SymScalar> {
        if exp == 0 {
            return Some(SymScalar::one());
        }
        let base = if exp < 0 { self.inverse()? } else { self.clone() };
        let mut out = SymScalar::one();
        for _ in 0..exp.unsigned_abs() {
            out = &out * &base;
        }
        Some(out)
    }

    /// Monomial quotient `self / divisor`, if both are monomials.
    pub fn monomial_quotient(&self, divisor: &SymScalar) -> Option<SymScalar> {
        let (em, cm) = self.as_monomial()?;
        let (ed, cd) = divisor.as_monomial()?;
        let mut e = [0i64; 4];
        for i in 0..4 {
            e[i] = em[i].checked_sub(ed[i])?;
        }
        Some(SymScalar::monomial(cm / cd, e))
    }

    /// Specialize every variable via `bindings`, producing an element of a
    /// quadratic ring. The map is a ring homomorphism. Variables that occur
    /// with nonzero exponent must be bound; negative exponents require the
    /// binding to be invertible.
    pub fn specialize(&self, bindings: &Bindings) -> Result<QuadExtElem> {
        let mut acc = QuadExtElem::from_rat(rat(0));
        for (expo, coef) in &self.terms {
            let mut term = QuadExtElem::from_rat(coef.clone());
            for var in Var::ALL {
                let e = expo[var.index()];
                if e == 0 {
                    continue;
                }
                let val = bindings
                    .get(var)
                    .ok_or_else(|| Error::UnboundVariable(var.name().to_string()))?;
                term = term.mul_checked(&val.pow(e)?)?;
            }
            acc = acc.add_checked(&term)?;
        }
        Ok(acc)
    }

    /// Render with even `v`-powers written as powers of `q`.
    pub fn display_q(&self) -> String {
        self.render(true)
    }

    fn render(&self, use_q: bool) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (expo, coef)) in self.terms.iter().enumerate() {
            if i > 0 {
                out.push_str(" + ");
            }
            out.push_str(&render_term(expo, coef, use_q));
        }
        out
    }
}

fn render_term(expo: &Expo, coef: &Rat, use_q: bool) -> String {
    let mut factors: Vec<String> = Vec::new();
    for var in [Var::X1, Var::X2, Var::S] {
        let e = expo[var.index()];
        if e == 1 {
            factors.push(var.name().to_string());
        } else if e != 0 {
            factors.push(format!("{}^{}", var.name(), e));
        }
    }
    let ev = expo[Var::V.index()];
    if ev != 0 {
        if use_q && ev % 2 == 0 {
            let eq = ev / 2;
            if eq == 1 {
                factors.push("q".to_string());
            } else {
                factors.push(format!("q^{}", eq));
            }
        } else if ev == 1 {
            factors.push("v".to_string());
        } else {
            factors.push(format!("v^{}", ev));
        }
    }
    if factors.is_empty() {
        return format!("{}", coef);
    }
    if coef.is_one() {
        factors.join(" * ")
    } else {
        format!("{} * {}", coef, factors.join(" * "))
    }
}

impl fmt::Display for SymScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(false))
    }
}

impl std::str::FromStr for SymScalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse::parse_sym_scalar(s)
    }
}

impl serde::Serialize for SymScalar {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for SymScalar {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! impl_sym_binop {
    ($trait:ident, $method:ident) => {
        impl std::ops::$trait<&SymScalar> for &SymScalar {
            type Output = SymScalar;
            fn $method(self, rhs: &SymScalar) -> SymScalar {
                SymScalar::$method(self, rhs)
            }
        }
        impl std::ops::$trait<SymScalar> for SymScalar {
            type Output = SymScalar;
            fn $method(self, rhs: SymScalar) -> SymScalar {
                SymScalar::$method(&self, &rhs)
            }
        }
        impl std::ops::$trait<&SymScalar> for SymScalar {
            type Output = SymScalar;
            fn $method(self, rhs: &SymScalar) -> SymScalar {
                SymScalar::$method(&self, rhs)
            }
        }
        impl std::ops::$trait<SymScalar> for &SymScalar {
            type Output = SymScalar;
            fn $method(self, rhs: SymScalar) -> SymScalar {
                SymScalar::$method(self, &rhs)
            }
        }
    };
}

impl_sym_binop!(Add, add);
impl_sym_binop!(Sub, sub);
impl_sym_binop!(Mul, mul);

impl SymScalar {
    fn add(a: &SymScalar, b: &SymScalar) -> SymScalar {
        let mut terms = a.terms.clone();
        for (e, c) in &b.terms {
            let entry = terms.entry(*e).or_insert_with(|| rat(0));
            *entry += c;
            if entry.is_zero() {
                terms.remove(e);
            }
        }
        SymScalar { terms }
    }

    fn sub(a: &SymScalar, b: &SymScalar) -> SymScalar {
        SymScalar::add(a, &-b)
    }

    fn mul(a: &SymScalar, b: &SymScalar) -> SymScalar {
        let mut terms: BTreeMap<Expo, Rat> = BTreeMap::new();
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e = expo_add(ea, eb);
                let entry = terms.entry(e).or_insert_with(|| rat(0));
                *entry += ca * cb;
                if entry.is_zero() {
                    terms.remove(&e);
                }
            }
        }
        SymScalar { terms }
    }
}

impl std::ops::Neg for &SymScalar {
    type Output = SymScalar;
    fn neg(self) -> SymScalar {
        SymScalar {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl std::ops::Neg for SymScalar {
    type Output = SymScalar;
    fn neg(self) -> SymScalar {
        -&self
    }
}

/// Variable bindings for [`SymScalar::specialize`].
#[derive(Debug, Clone, Default)]
pub struct Bindings {
    map: BTreeMap<Var, QuadExtElem>,
}

impl Bindings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(mut self, var: Var, value: QuadExtElem) -> Self {
        self.map.insert(var, value);
        self
    }

    pub fn bind_rat(self, var: Var, value: Rat) -> Self {
        self.bind(var, QuadExtElem::from_rat(value))
    }

    pub fn get(&self, var: Var) -> Option<&QuadExtElem> {
        self.map.get(&var)
    }
}

/// Minimal polynomial data `y^2 = t·y - n` of a quadratic ring over `Q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadRing {
    pub trace: Rat,
    pub norm: Rat,
}

impl QuadRing {
    pub fn new(trace: Rat, norm: Rat) -> Self {
        QuadRing { trace, norm }
    }

    pub fn discriminant(&self) -> Rat {
        &self.trace * &self.trace - rat(4) * &self.norm
    }
}

/// `a + b·y` in `Q[y]/(y^2 - t·y + n)`.
///
/// Rational elements (`b = 0`) carry no ring tag and mix freely with elements
/// of any ring; combining elements of two distinct rings is a hard error at
/// the arithmetic level, and checked constructors validate inputs up front.
#[derive(Debug, Clone)]
pub struct QuadExtElem {
    a: Rat,
    b: Rat,
    ring: Option<QuadRing>,
}

impl QuadExtElem {
    pub fn from_rat(a: Rat) -> Self {
        QuadExtElem { a, b: rat(0), ring: None }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(rat(n))
    }

    pub fn new(a: Rat, b: Rat, ring: QuadRing) -> Self {
        if b.is_zero() {
            Self::from_rat(a)
        } else {
            QuadExtElem { a, b, ring: Some(ring) }
        }
    }

    /// The ring generator `y` (the root of smaller p-adic valuation, when a
    /// prime is in play).
    pub fn root_of(ring: QuadRing) -> Self {
        Self::new(rat(0), rat(1), ring)
    }

    pub fn a(&self) -> &Rat {
        &self.a
    }

    pub fn b(&self) -> &Rat {
        &self.b
    }

    pub fn ring(&self) -> Option<&QuadRing> {
        self.ring.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_rat(&self) -> Option<&Rat> {
        if self.b.is_zero() {
            Some(&self.a)
        } else {
            None
        }
    }

    fn unify_ring(&self, other: &Self) -> Result<Option<QuadRing>> {
        match (&self.ring, &other.ring) {
            (None, r) | (r, None) => Ok(r.clone()),
            (Some(r1), Some(r2)) => {
                if r1 == r2 {
                    Ok(Some(r1.clone()))
                } else {
                    Err(Error::IncompatibleRings)
                }
            }
        }
    }

    pub fn add_checked(&self, other: &Self) -> Result<Self> {
        let ring = self.unify_ring(other)?;
        let a = &self.a + &other.a;
        let b = &self.b + &other.b;
        Ok(if b.is_zero() {
            Self::from_rat(a)
        } else {
            QuadExtElem { a, b, ring }
        })
    }

    pub fn sub_checked(&self, other: &Self) -> Result<Self> {
        self.add_checked(&-other)
    }

    pub fn mul_checked(&self, other: &Self) -> Result<Self> {
        let ring = self.unify_ring(other)?;
        // (a + by)(a' + b'y) = aa' + (ab' + a'b) y + bb' y^2,  y^2 = t·y − n.
        let aa = &self.a * &other.a;
        let cross = &self.a * &other.b + &other.a * &self.b;
        let bb = &self.b * &other.b;
        let (a, b) = if bb.is_zero() {
            (aa, cross)
        } else {
            let r = ring.as_ref().expect("nonzero y^2 coefficient without a ring");
            (aa - &bb * &r.norm, cross + &bb * &r.trace)
        };
        Ok(if b.is_zero() {
            Self::from_rat(a)
        } else {
            QuadExtElem { a, b, ring }
        })
    }

    /// Galois conjugate `a + b(t - y)`.
    pub fn conj(&self) -> Self {
        match &self.ring {
            None => self.clone(),
            Some(r) => {
                let a = &self.a + &self.b * &r.trace;
                let b = -&self.b;
                QuadExtElem { a, b, ring: self.ring.clone() }
            }
        }
    }

    /// Field norm `N(a + by) = a^2 + a·b·t + b^2·n`.
    pub fn norm(&self) -> Rat {
        match &self.ring {
            None => &self.a * &self.a,
            Some(r) => {
                &self.a * &self.a
                    + &self.a * &self.b * &r.trace
                    + &self.b * &self.b * &r.norm
            }
        }
    }

    /// Trace `2a + b·t`.
    pub fn trace(&self) -> Rat {
        match &self.ring {
            None => rat(2) * &self.a,
            Some(r) => rat(2) * &self.a + &self.b * &r.trace,
        }
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        let conj = self.conj();
        let inv_n = n.recip();
        Some(QuadExtElem {
            a: &conj.a * &inv_n,
            b: &conj.b * &inv_n,
            ring: conj.ring,
        })
    }

    pub fn pow(&self, exp: i64) -> Result<Self> {
        if exp == 0 {
            return Ok(Self::from_rat(rat(1)));
        }
        let base = if exp < 0 {
            self.inverse().ok_or(Error::NonInvertible)?
        } else {
            self.clone()
        };
        let mut out = Self::from_rat(rat(1));
        for _ in 0..exp.unsigned_abs() {
            out = out.mul_checked(&base)?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let a = &self.a * c;
        let b = &self.b * c;
        if b.is_zero() {
            Self::from_rat(a)
        } else {
            QuadExtElem { a, b, ring: self.ring.clone() }
        }
    }
}

impl PartialEq for QuadExtElem {
    fn eq(&self, other: &Self) -> bool {
        if self.a != other.a || self.b != other.b {
            return false;
        }
        // Rational elements compare equal regardless of ring tags.
        if self.b.is_zero() {
            return true;
        }
        self.ring == other.ring
    }
}

impl Eq for QuadExtElem {}

impl std::ops::Neg for &QuadExtElem {
    type Output = QuadExtElem;
    fn neg(self) -> QuadExtElem {
        QuadExtElem {
            a: -&self.a,
            b: -&self.b,
            ring: if self.b.is_zero() { None } else { self.ring.clone() },
        }
    }
}

impl std::ops::Neg for QuadExtElem {
    type Output = QuadExtElem;
    fn neg(self) -> QuadExtElem {
        -&self
    }
}

macro_rules! impl_quad_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl std::ops::$trait<&QuadExtElem> for &QuadExtElem {
            type Output = QuadExtElem;
            fn $method(self, rhs: &QuadExtElem) -> QuadExtElem {
                self.$checked(rhs).expect("quadratic ring mismatch")
            }
        }
        impl std::ops::$trait<QuadExtElem> for QuadExtElem {
            type Output = QuadExtElem;
            fn $method(self, rhs: QuadExtElem) -> QuadExtElem {
                (&self).$method(&rhs)
            }
        }
        impl std::ops::$trait<&QuadExtElem> for QuadExtElem {
            type Output = QuadExtElem;
            fn $method(self, rhs: &QuadExtElem) -> QuadExtElem {
                (&self).$method(rhs)
            }
        }
        impl std::ops::$trait<QuadExtElem> for &QuadExtElem {
            type Output = QuadExtElem;
            fn $method(self, rhs: QuadExtElem) -> QuadExtElem {
                self.$method(&rhs)
            }
        }
    };
}

impl_quad_binop!(Add, add, add_checked);
impl_quad_binop!(Sub, sub, sub_checked);
impl_quad_binop!(Mul, mul, mul_checked);

impl fmt::Display for QuadExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "[{}, {}]", self.a, self.b)
        }
    }
}

/// A p-adic valuation: a rational number or `+∞` (the valuation of zero).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PAdicVal {
    Finite(Rat),
    Infinite,
}

impl PAdicVal {
    pub fn finite(n: i64) -> Self {
        PAdicVal::Finite(rat(n))
    }

    pub fn finite_ratio(n: i64, d: i64) -> Self {
        PAdicVal::Finite(ratio(n, d))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, PAdicVal::Finite(r) if r.is_zero())
    }

    pub fn is_positive(&self) -> bool {
        match self {
            PAdicVal::Finite(r) => r.is_positive(),
            PAdicVal::Infinite => true,
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        match self {
            PAdicVal::Finite(r) => !r.is_negative(),
            PAdicVal::Infinite => true,
        }
    }

    pub fn min(a: &PAdicVal, b: &PAdicVal) -> PAdicVal {
        match (a, b) {
            (PAdicVal::Infinite, x) | (x, PAdicVal::Infinite) => x.clone(),
            (PAdicVal::Finite(x), PAdicVal::Finite(y)) => {
                PAdicVal::Finite(if x <= y { x.clone() } else { y.clone() })
            }
        }
    }

    pub fn add(a: &PAdicVal, b: &PAdicVal) -> PAdicVal {
        match (a, b) {
            (PAdicVal::Infinite, _) | (_, PAdicVal::Infinite) => PAdicVal::Infinite,
            (PAdicVal::Finite(x), PAdicVal::Finite(y)) => PAdicVal::Finite(x + y),
        }
    }
}

impl fmt::Display for PAdicVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PAdicVal::Finite(r) => write!(f, "{}", r),
            PAdicVal::Infinite => write!(f, "+inf"),
        }
    }
}

impl PartialOrd for PAdicVal {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PAdicVal {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        use std::cmp::Ordering;
        match (self, other) {
            (PAdicVal::Infinite, PAdicVal::Infinite) => Ordering::Equal,
            (PAdicVal::Infinite, _) => Ordering::Greater,
            (_, PAdicVal::Infinite) => Ordering::Less,
            (PAdicVal::Finite(a), PAdicVal::Finite(b)) => a.cmp(b),
        }
    }
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p % 2 == 0 {
        return p == 2;
    }
    let mut d = 3u64;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// p-adic valuation of a rational number; `Infinite` for zero.
pub fn rational_val(r: &Rat, p: u64) -> PAdicVal {
    if r.is_zero() {
        return PAdicVal::Infinite;
    }
    let pb = BigInt::from(p);
    let mut v: i64 = 0;
    let mut num = r.numer().clone();
    while (&num % &pb).is_zero() {
        num /= &pb;
        v += 1;
    }
    let mut den = r.denom().clone();
    while (&den % &pb).is_zero() {
        den /= &pb;
        v -= 1;
    }
    PAdicVal::finite(v)
}

/// Valuations of the two roots of `z^2 - t·z + n`, smallest first, from the
/// Newton polygon: the smaller root valuation is `min(ord(t), ord(n)/2)` and
/// the two valuations sum to `ord(n)`.
pub fn root_valuations(ring: &QuadRing, p: u64) -> Result<(PAdicVal, PAdicVal)> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if ring.norm.is_zero() {
        return Err(Error::DegenerateRing("norm is zero".into()));
    }
    let vt = rational_val(&ring.trace, p);
    let vn = match rational_val(&ring.norm, p) {
        PAdicVal::Finite(r) => r,
        PAdicVal::Infinite => unreachable!(),
    };
    let half_vn = &vn / rat(2);
    let small = PAdicVal::min(&vt, &PAdicVal::Finite(half_vn));
    let small_r = match &small {
        PAdicVal::Finite(r) => r.clone(),
        PAdicVal::Infinite => unreachable!("min with finite is finite"),
    };
    Ok((small, PAdicVal::Finite(&vn - small_r)))
}

/// Integer square root test for a rational; returns the exact square root if
/// the argument is a perfect square.
fn rational_sqrt(r: &Rat) -> Option<Rat> {
    if r.is_negative() {
        return None;
    }
    let num = r.numer().sqrt();
    let den = r.denom().sqrt();
    if &(&num * &num) == r.numer() && &(&den * &den) == r.denom() {
        Some(Rat::new(num, den))
    } else {
        None
    }
}

/// p-adic valuation of a quadratic-ring element, under the convention that
/// the generator `y` is the root of smaller valuation of `z^2 - t·z + n`
/// (valuation `min(ord(t), ord(n)/2)`).
///
/// The assignment is exact on the subring where it is well-defined. In the
/// equal-slope case a split ring admits no canonical choice between the two
/// roots; elements whose valuation would depend on that choice are rejected
/// with [`Error::ValuationUndetermined`].
pub fn padic_valuation(e: &QuadExtElem, p: u64) -> Result<PAdicVal> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if e.is_zero() {
        return Ok(PAdicVal::Infinite);
    }
    if e.b.is_zero() {
        return Ok(rational_val(&e.a, p));
    }
    let ring = e.ring.as_ref().expect("irrational element without ring");
    let (val_y, val_conj) = root_valuations(ring, p)?;
    let vb = rational_val(&e.b, p);

    // e = b·(c + y): reduce to the valuation of c + y.
    let c = &e.a / &e.b;
    let vc = rational_val(&c, p);
    if vc > val_y {
        return Ok(PAdicVal::add(&vb, &val_y));
    }
    if vc < val_y {
        return Ok(PAdicVal::add(&vb, &vc));
    }

    // ord(c) = val(y): cancellation is possible; use the norm of c + y.
    let norm_cy = &c * &c + &c * &ring.trace + &ring.norm;
    if norm_cy.is_zero() {
        // -c is one of the two (then necessarily rational) roots.
        let disc = ring.discriminant();
        let sd = rational_sqrt(&disc)
            .ok_or_else(|| Error::DegenerateRing("vanishing norm without rational roots".into()))?;
        let r_plus = (&ring.trace + &sd) / rat(2);
        let r_minus = (&ring.trace - &sd) / rat(2);
        let v_plus = rational_val(&r_plus, p);
        let v_minus = rational_val(&r_minus, p);
        let (small, large) = if v_plus <= v_minus {
            (r_plus, r_minus)
        } else {
            (r_minus, r_plus)
        };
        if v_plus == v_minus && &small != &large {
            return Err(Error::ValuationUndetermined);
        }
        let minus_c = -&c;
        return if minus_c == small {
            Ok(PAdicVal::Infinite)
        } else {
            Ok(PAdicVal::add(&vb, &rational_val(&(&small - &minus_c), p)))
        };
    }
    if val_y < val_conj {
        // Distinct slopes: val(c + conj(y)) = val(y) exactly, so the norm
        // pins val(c + y) = ord(N(c+y)) - val(y).
        let vn_cy = match rational_val(&norm_cy, p) {
            PAdicVal::Finite(r) => r,
            PAdicVal::Infinite => unreachable!(),
        };
        let vy = match &val_y {
            PAdicVal::Finite(r) => r.clone(),
            PAdicVal::Infinite => unreachable!(),
        };
        return Ok(PAdicVal::add(&vb, &PAdicVal::Finite(vn_cy - vy)));
    }
    // Equal slopes: the valuation of c + y is Galois-stable only if the
    // Newton polygon of its own minimal polynomial has a repeated slope.
    let sub_ring = QuadRing::new(rat(2) * &c + &ring.trace, norm_cy);
    let (v1, v2) = root_valuations(&sub_ring, p)?;
    if v1 == v2 {
        Ok(PAdicVal::add(&vb, &v1))
    } else {
        Err(Error::ValuationUndetermined)
    }
}
