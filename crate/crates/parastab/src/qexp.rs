//! Hecke and U_p action on q-expansions, p-stabilization of elliptic
//! eigenforms, and stabilization of degree-2 Siegel Fourier tables.
//!
//! Elliptic forms are truncated coefficient lists `a_1..a_B`; every
//! operation narrows the valid range explicitly (`⌊B/p⌋` after T_p or U_p)
//! instead of padding with zeros. The Hecke coefficient law is
//! `a_n(T_p f) = a_{np} + chi(p) p^{k-1} a_{n/p}`, validated downstream by
//! the eigenform certificate on the discriminant cusp form, whose expansion
//! comes from the independent eta-product oracle [`eta_delta`].
//!
//! Siegel tables are keyed by raw half-integral indices `T = (a, b, c)`
//! (the matrix `[[a, b/2], [b/2, c]]`); the stabilization law
//!
//! ```text
//! out(T) = p^{k-1} chi'(p) beta_p a(T) - (chi'(p) p^{k-1} + beta_p) a(pT) + a(p^2 T)
//! ```
//!
//! is also computed as the two-factor shift-operator composition
//! `(beta_p - U)(chi'(p) p^{k-1} - U)`, and the two routes must agree
//! table-for-table.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalars::{
    is_prime, rat, rational_val, PAdicVal, QuadExtElem, QuadRing, Rat, SymScalar, Var,
};

/// `p^e` as an exact rational (negative exponents allowed).
pub fn p_pow(p: u64, e: i64) -> Rat {
    Rat::from_integer(BigInt::from(p)).pow(i32::try_from(e).expect("exponent fits in i32"))
}

// ---------------------------------------------------------------------------
// Elliptic forms
// ---------------------------------------------------------------------------

/// Truncated elliptic q-expansion with exact coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EllipticForm {
    pub weight: u32,
    pub level: u64,
    pub chi_p: QuadExtElem,
    coefficients: Vec<QuadExtElem>,
    pub normalized: bool,
}

impl EllipticForm {
    pub fn new(
        weight: u32,
        level: u64,
        chi_p: QuadExtElem,
        coefficients: Vec<QuadExtElem>,
    ) -> Result<Self> {
        if coefficients.is_empty() {
            return Err(Error::TruncationTooSmall { needed: 1, have: 0 });
        }
        let mut ring: Option<QuadRing> = chi_p.ring().cloned();
        for c in &coefficients {
            match (&ring, c.ring()) {
                (None, Some(r)) => ring = Some(r.clone()),
                (Some(r1), Some(r2)) if r1 != r2 => return Err(Error::IncompatibleRings),
                _ => {}
            }
        }
        let normalized = coefficients[0] == QuadExtElem::from_int(1);
        Ok(EllipticForm {
            weight,
            level,
            chi_p,
            coefficients,
            normalized,
        })
    }

    /// Truncation bound B: coefficients a_1..a_B are stored.
    pub fn truncation(&self) -> u64 {
        self.coefficients.len() as u64
    }

    /// 1-indexed coefficient access; `None` beyond the truncation.
    pub fn coeff(&self, n: u64) -> Option<&QuadExtElem> {
        if n == 0 {
            return None;
        }
        self.coefficients.get((n - 1) as usize)
    }

    pub fn coefficients(&self) -> &[QuadExtElem] {
        &self.coefficients
    }

    /// The quadratic ring the coefficients live in, if any.
    pub fn ring(&self) -> Option<QuadRing> {
        let mut ring: Option<QuadRing> = self.chi_p.ring().cloned();
        for c in &self.coefficients {
            if ring.is_some() {
                break;
            }
            ring = c.ring().cloned();
        }
        ring
    }
}

/// The discriminant cusp form of weight 12 and level 1, expanded to B
/// coefficients by exact polynomial arithmetic on the eta product
/// `q ∏ (1 - q^n)^24`. Serves as the independent oracle for the Hecke
/// operators downstream.
pub fn eta_delta(truncation: u64) -> Result<EllipticForm> {
    if truncation == 0 {
        return Err(Error::TruncationTooSmall { needed: 1, have: 0 });
    }
    let deg = truncation as usize; // work modulo q^deg after the q-shift
    // Euler product via the pentagonal number expansion.
    let mut euler = vec![BigInt::zero(); deg];
    euler[0] = BigInt::one();
    let mut k: i64 = 1;
    loop {
        let e1 = k * (3 * k - 1) / 2;
        let e2 = k * (3 * k + 1) / 2;
        if e1 as usize >= deg && e2 as usize >= deg {
            break;
        }
        let sign = if k % 2 == 0 { BigInt::one() } else { -BigInt::one() };
        for e in [e1, e2] {
            if (e as usize) < deg {
                euler[e as usize] += &sign;
            }
        }
        k += 1;
    }
    // 24th power by square-and-multiply on truncated polynomials.
    let mul = |a: &[BigInt], b: &[BigInt]| -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); deg];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if i + j >= deg {
                    break;
                }
                if !bj.is_zero() {
                    out[i + j] += ai * bj;
                }
            }
        }
        out
    };
    let e2 = mul(&euler, &euler);
    let e4 = mul(&e2, &e2);
    let e8 = mul(&e4, &e4);
    let e16 = mul(&e8, &e8);
    let e24 = mul(&e16, &e8);
    let coefficients: Vec<QuadExtElem> = e24
        .into_iter()
        .map(|c| QuadExtElem::from_rat(Rat::from_integer(c)))
        .collect();
    EllipticForm::new(12, 1, QuadExtElem::from_int(1), coefficients)
}

/// The Hecke operator T_p at a good prime: coefficient law
/// `a_n(T_p f) = a_{np} + chi(p) p^{k-1} a_{n/p}`, output truncated to
/// `⌊B/p⌋`.
pub fn tp_elliptic(f: &EllipticForm, p: u64) -> Result<EllipticForm> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if f.level % p == 0 {
        return Err(Error::HeckeAtBadPrime { p, level: f.level });
    }
    let b_out = f.truncation() / p;
    if b_out == 0 {
        return Err(Error::TruncationTooSmall {
            needed: p,
            have: f.truncation(),
        });
    }
    let scale = f
        .chi_p
        .scale(&p_pow(p, f.weight as i64 - 1));
    let mut out = Vec::with_capacity(b_out as usize);
    for n in 1..=b_out {
        let mut c = f.coeff(n * p).expect("within truncation").clone();
        if n % p == 0 {
            let lower = f.coeff(n / p).expect("within truncation");
            c = c.add_checked(&scale.mul_checked(lower)?)?;
        }
        out.push(c);
    }
    EllipticForm::new(f.weight, f.level, f.chi_p.clone(), out)
}

/// The U_p operator: `a_n(U_p f) = a_{np}`, truncated to `⌊B/p⌋`. The
/// level metadata must be divisible by p unless `force` overrides.
pub fn up_elliptic(f: &EllipticForm, p: u64, force: bool) -> Result<EllipticForm> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if !force && f.level % p != 0 {
        return Err(Error::UpWithoutPInLevel { p, level: f.level });
    }
    let b_out = f.truncation() / p;
    if b_out == 0 {
        return Err(Error::TruncationTooSmall {
            needed: p,
            have: f.truncation(),
        });
    }
    let out: Vec<QuadExtElem> = (1..=b_out)
        .map(|n| f.coeff(n * p).expect("within truncation").clone())
        .collect();
    EllipticForm::new(f.weight, f.level, f.chi_p.clone(), out)
}

// ---------------------------------------------------------------------------
// Stabilization choices
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RootLabel {
    Alpha,
    Beta,
}

impl std::str::FromStr for RootLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "alpha" => Ok(RootLabel::Alpha),
            "beta" => Ok(RootLabel::Beta),
            other => Err(Error::Parse(format!("unknown root label `{other}`"))),
        }
    }
}

/// A choice of Hecke root for p-stabilization. The two roots generate
/// `Q[y]/(y^2 - a_p·y + chi(p) p^{k-1})`; `alpha` is the root of smaller
/// p-adic valuation (so the p-unit root in the ordinary case) and
/// `beta = a_p - alpha`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizedChoice {
    pub label: RootLabel,
    pub alpha: QuadExtElem,
    pub beta: QuadExtElem,
    pub p: u64,
    pub weight: u32,
    pub chi_p: QuadExtElem,
}

impl StabilizedChoice {
    /// Build the choice from the eigenvalue data of the form.
    pub fn from_eigen_data(
        a_p: &Rat,
        chi_p: &Rat,
        weight: u32,
        p: u64,
        label: RootLabel,
    ) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let norm = chi_p * p_pow(p, weight as i64 - 1);
        if a_p.is_zero() && norm.is_zero() {
            return Err(Error::DegenerateHeckePolynomial);
        }
        let ring = QuadRing::new(a_p.clone(), norm);
        let alpha = QuadExtElem::root_of(ring.clone());
        let beta = QuadExtElem::new(a_p.clone(), rat(-1), ring);
        Ok(StabilizedChoice {
            label,
            alpha,
            beta,
            p,
            weight,
            chi_p: QuadExtElem::from_rat(chi_p.clone()),
        })
    }

    /// Build the choice from explicit roots, validating the trace and norm
    /// identities `alpha + beta = a_p` and `alpha·beta = chi(p) p^{k-1}`.
    pub fn from_roots(
        alpha: QuadExtElem,
        beta: QuadExtElem,
        a_p: &QuadExtElem,
        chi_p: &QuadExtElem,
        weight: u32,
        p: u64,
        label: RootLabel,
    ) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let sum = alpha.add_checked(&beta)?;
        if &sum != a_p {
            return Err(Error::InconsistentChoice(format!(
                "alpha + beta = {sum} but a_p = {a_p}"
            )));
        }
        let prod = alpha.mul_checked(&beta)?;
        let expected = chi_p.scale(&p_pow(p, weight as i64 - 1));
        if prod != expected {
            return Err(Error::InconsistentChoice(format!(
                "alpha * beta = {prod} but chi(p) p^(k-1) = {expected}"
            )));
        }
        Ok(StabilizedChoice {
            label,
            alpha,
            beta,
            p,
            weight,
            chi_p: chi_p.clone(),
        })
    }

    /// The root stabilized onto.
    pub fn chosen(&self) -> &QuadExtElem {
        match self.label {
            RootLabel::Alpha => &self.alpha,
            RootLabel::Beta => &self.beta,
        }
    }

    /// The root removed by stabilization.
    pub fn other(&self) -> &QuadExtElem {
        match self.label {
            RootLabel::Alpha => &self.beta,
            RootLabel::Beta => &self.alpha,
        }
    }
}

/// p-stabilization of an eigenform: `a_n(out) = a_n - other·a_{n/p}` (the
/// second term vanishing unless p | n). The output keeps the full
/// truncation, is a U_p-eigenform with eigenvalue the chosen root, and its
/// level metadata gains a factor of p.
pub fn stabilize_elliptic(f: &EllipticForm, choice: &StabilizedChoice) -> Result<EllipticForm> {
    let p = choice.p;
    if f.level % p == 0 {
        return Err(Error::HeckeAtBadPrime { p, level: f.level });
    }
    if f.weight != choice.weight {
        return Err(Error::InconsistentChoice(format!(
            "choice built for weight {} but the form has weight {}",
            choice.weight, f.weight
        )));
    }
    // The trace must match the form's stated T_p eigenvalue when visible.
    if let Some(a_p) = f.coeff(p) {
        if f.normalized {
            let sum = choice.alpha.add_checked(&choice.beta)?;
            if &sum != a_p {
                return Err(Error::InconsistentChoice(format!(
                    "alpha + beta = {sum} but a_p(f) = {a_p}"
                )));
            }
        }
    }
    let other = choice.other();
    let mut out = Vec::with_capacity(f.truncation() as usize);
    for n in 1..=f.truncation() {
        let mut c = f.coeff(n).expect("within truncation").clone();
        if n % p == 0 {
            let lower = f.coeff(n / p).expect("within truncation");
            c = c.sub_checked(&other.mul_checked(lower)?)?;
        }
        out.push(c);
    }
    EllipticForm::new(f.weight, f.level * p, choice.chi_p.clone(), out)
}

// ---------------------------------------------------------------------------
// Saito-Kurokawa eigenvalues and Siegel tables
// ---------------------------------------------------------------------------

/// The two Hecke eigenvalues of the degree-2 lift attached to eigenvalue
/// data `(a_p, chi(p), k)`:
///
/// ```text
/// a_{p,1} = chi(p)(p^{k-1} + p^{k-2}) + a_p
/// a_{p,2} = a_p chi(p)(p^{k-2} + p^{k-3}) + 2 chi^2(p) p^{2k-4}
///           - (p^2 + 1) chi^2(p) p^{2k-6}
/// ```
pub fn sk_eigenvalues(
    a_p: &QuadExtElem,
    chi_p: &QuadExtElem,
    k: u32,
    p: u64,
) -> Result<(QuadExtElem, QuadExtElem)> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let k = k as i64;
    let a1 = chi_p
        .scale(&(p_pow(p, k - 1) + p_pow(p, k - 2)))
        .add_checked(a_p)?;
    let chi2 = chi_p.mul_checked(chi_p)?;
    let a2 = a_p
        .mul_checked(&chi_p.scale(&(p_pow(p, k - 2) + p_pow(p, k - 3))))?
        .add_checked(&chi2.scale(&(rat(2) * p_pow(p, 2 * k - 4))))?
        .sub_checked(&chi2.scale(&((p_pow(p, 2) + rat(1)) * p_pow(p, 2 * k - 6))))?;
    Ok((a1, a2))
}

/// Both sides of the Satake consistency identity for the first eigenvalue:
/// with `x1, x2` the elliptic Satake parameters scaled by `p^{-(2k-3)/2}`,
/// `s = chi'(p)` and `v^2 = p`,
///
/// ```text
/// chi(p)(p^{k-1} + p^{k-2}) + a_p  =  p^{(2k-3)/2}(x1 + v·s + v^{-1}·s + x2).
/// ```
pub fn sk_first_eigenvalue_satake_identity(k: u32) -> (SymScalar, SymScalar) {
    let k = k as i64;
    let x1 = SymScalar::var(Var::X1);
    let x2 = SymScalar::var(Var::X2);
    let s = SymScalar::var(Var::S);
    let v = SymScalar::var(Var::V);
    let v_inv = SymScalar::var_pow(Var::V, -1);
    let a_p = (&x1 + &x2) * SymScalar::var_pow(Var::V, 2 * k - 3);
    let lhs = &s * (SymScalar::q_pow(k - 1) + SymScalar::q_pow(k - 2)) + &a_p;
    let rhs = SymScalar::var_pow(Var::V, 2 * k - 3) * (&x1 + &v * &s + &v_inv * &s + &x2);
    (lhs, rhs)
}

/// Index of a half-integral symmetric matrix `[[a, b/2], [b/2, c]]`.
pub type TIndex = (i64, i64, i64);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Closure {
    /// Missing indices are declared zero.
    #[serde(rename = "declared-zero")]
    DeclaredZero,
    /// Missing indices make the stabilized value undefined at that index.
    #[serde(rename = "strict")]
    Strict,
}

/// Truncated Fourier table of a degree-2 Siegel form.
///
/// `weight` is the parameter k of the eigenvalue formulas; the underlying
/// form has scalar weight k - 1. Indices are raw integer triples with
/// `p·(a,b,c) = (pa, pb, pc)`; no reduction is applied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SiegelCoeffTable {
    pub weight: u32,
    pub chi_p: QuadExtElem,
    entries: BTreeMap<TIndex, QuadExtElem>,
    pub closure: Closure,
}

impl SiegelCoeffTable {
    pub fn new(
        weight: u32,
        chi_p: QuadExtElem,
        entries: BTreeMap<TIndex, QuadExtElem>,
        closure: Closure,
    ) -> Self {
        SiegelCoeffTable {
            weight,
            chi_p,
            entries,
            closure,
        }
    }

    pub fn entries(&self) -> &BTreeMap<TIndex, QuadExtElem> {
        &self.entries
    }

    pub fn get(&self, t: &TIndex) -> Option<&QuadExtElem> {
        self.entries.get(t)
    }

    /// Value at an index, applying the closure policy.
    pub fn value(&self, t: &TIndex) -> Result<QuadExtElem> {
        match self.entries.get(t) {
            Some(v) => Ok(v.clone()),
            None => match self.closure {
                Closure::DeclaredZero => Ok(QuadExtElem::from_int(0)),
                Closure::Strict => Err(Error::MissingClosure(t.0, t.1, t.2)),
            },
        }
    }

    pub fn scale(&self, c: &QuadExtElem) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (t, v) in &self.entries {
            entries.insert(*t, v.mul_checked(c)?);
        }
        Ok(SiegelCoeffTable {
            weight: self.weight,
            chi_p: self.chi_p.clone(),
            entries,
            closure: self.closure,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut entries = self.entries.clone();
        for (t, v) in &other.entries {
            let entry = entries
                .entry(*t)
                .or_insert_with(|| QuadExtElem::from_int(0));
            *entry = entry.add_checked(v)?;
        }
        Ok(SiegelCoeffTable {
            weight: self.weight,
            chi_p: self.chi_p.clone(),
            entries,
            closure: self.closure,
        })
    }
}

fn scale_t(p: u64, t: &TIndex) -> TIndex {
    let p = p as i64;
    (t.0 * p, t.1 * p, t.2 * p)
}

/// A stabilized Siegel table with its eigenvalue metadata and the list of
/// indices left undefined by a strict closure.
#[derive(Debug, Clone)]
pub struct StabilizedSiegel {
    pub table: SiegelCoeffTable,
    pub undefined: Vec<TIndex>,
    /// `(chosen root, p^{k-2}·chosen·chi'(p))`: the eigenvalues of the two
    /// global U_p operators on the output.
    pub eigenvalues: (QuadExtElem, QuadExtElem),
}

/// Direct three-term stabilization law.
pub fn sk_stabilize(table: &SiegelCoeffTable, choice: &StabilizedChoice) -> Result<StabilizedSiegel> {
    sk_stabilize_impl(table, choice, false)
}

/// The same operator as the composition of the two shift-operator factors
/// `(other - U)(chi'(p) p^{k-1} - U)` with `U a(T) = a(pT)`.
pub fn sk_stabilize_two_factor(
    table: &SiegelCoeffTable,
    choice: &StabilizedChoice,
) -> Result<StabilizedSiegel> {
    sk_stabilize_impl(table, choice, true)
}

fn sk_stabilize_impl(
    table: &SiegelCoeffTable,
    choice: &StabilizedChoice,
    two_factor: bool,
) -> Result<StabilizedSiegel> {
    let p = choice.p;
    let k = choice.weight as i64;
    if table.weight != choice.weight {
        return Err(Error::InconsistentChoice(format!(
            "choice built for weight parameter {} but the table has {}",
            choice.weight, table.weight
        )));
    }
    let other = choice.other().clone();
    let chi_pk = table.chi_p.scale(&p_pow(p, k - 1));
    let mut entries = BTreeMap::new();
    let mut undefined = Vec::new();
    for t in table.entries.keys() {
        let pt = scale_t(p, t);
        let ppt = scale_t(p, &pt);
        let fetch = |idx: &TIndex| table.value(idx);
        let out = if two_factor {
            // G(T) = chi' p^{k-1} a(T) - a(pT); out(T) = other·G(T) - G(pT).
            let g = |idx: &TIndex| -> Result<QuadExtElem> {
                let here = fetch(idx)?;
                let up = fetch(&scale_t(p, idx))?;
                chi_pk.mul_checked(&here)?.sub_checked(&up)
            };
            match (g(t), g(&pt)) {
                (Ok(g0), Ok(g1)) => Ok(other.mul_checked(&g0)?.sub_checked(&g1)?),
                (Err(e), _) | (_, Err(e)) => Err(e),
            }
        } else {
            match (fetch(t), fetch(&pt), fetch(&ppt)) {
                (Ok(a0), Ok(a1), Ok(a2)) => {
                    // p^{k-1} chi' other a(T) - (chi' p^{k-1} + other) a(pT) + a(p^2 T)
                    let term1 = chi_pk.mul_checked(&other)?.mul_checked(&a0)?;
                    let term2 = chi_pk.add_checked(&other)?.mul_checked(&a1)?;
                    term1.sub_checked(&term2)?.add_checked(&a2)
                }
                (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => Err(e),
            }
        };
        match out {
            Ok(v) => {
                entries.insert(*t, v);
            }
            Err(Error::MissingClosure(..)) => undefined.push(*t),
            Err(e) => return Err(e),
        }
    }
    let chosen = choice.chosen().clone();
    let second = chosen
        .mul_checked(&table.chi_p)?
        .scale(&p_pow(p, k - 2));
    Ok(StabilizedSiegel {
        table: SiegelCoeffTable {
            weight: table.weight,
            chi_p: table.chi_p.clone(),
            entries,
            closure: table.closure,
        },
        undefined,
        eigenvalues: (chosen, second),
    })
}

// ---------------------------------------------------------------------------
// Ordinarity and mod-p nonvanishing
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct OrdinarityReport {
    pub is_ordinary: bool,
    pub val_alpha: PAdicVal,
    pub val_beta: PAdicVal,
}

/// Ordinarity and Newton-polygon valuations of the two Hecke roots.
pub fn ordinarity(a_p: &Rat, chi_p: &Rat, k: u32, p: u64) -> Result<OrdinarityReport> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let norm = chi_p * p_pow(p, k as i64 - 1);
    if a_p.is_zero() && norm.is_zero() {
        return Err(Error::DegenerateHeckePolynomial);
    }
    let ring = QuadRing::new(a_p.clone(), norm);
    let (val_alpha, val_beta) = crate::scalars::root_valuations(&ring, p)?;
    let is_ordinary = rational_val(a_p, p).is_zero();
    Ok(OrdinarityReport {
        is_ordinary,
        val_alpha,
        val_beta,
    })
}

#[derive(Debug, Clone)]
pub struct NonvanishingReport {
    pub nonvanishing: bool,
    pub witness: Option<TIndex>,
}

/// Search a stabilized table for an index with a p-unit coefficient.
///
/// Preconditions: `k ≥ 2`, the chosen root is a p-unit, and every stored
/// value is p-integral. Indices are scanned in ascending order of
/// `(a + c, a, b)` and the first unit coefficient is reported as witness.
pub fn modp_nonvanishing(
    stab: &SiegelCoeffTable,
    p: u64,
    k: u32,
    choice: &StabilizedChoice,
) -> Result<NonvanishingReport> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if k < 2 {
        return Err(Error::InconsistentChoice(format!(
            "mod-p analysis requires k >= 2, got {k}"
        )));
    }
    let val_chosen = crate::scalars::padic_valuation(choice.chosen(), p)?;
    if !val_chosen.is_zero() {
        return Err(Error::InconsistentChoice(format!(
            "the chosen root has valuation {val_chosen}, not a p-unit"
        )));
    }
    let mut indices: Vec<&TIndex> = stab.entries.keys().collect();
    indices.sort_by_key(|t| (t.0 + t.2, t.0, t.1));
    for t in &indices {
        let v = crate::scalars::padic_valuation(&stab.entries[*t], p)?;
        if !v.is_nonnegative() {
            return Err(Error::NotPIntegral(t.0, t.1, t.2));
        }
    }
    for t in indices {
        let v = crate::scalars::padic_valuation(&stab.entries[t], p)?;
        if v.is_zero() {
            return Ok(NonvanishingReport {
                nonvanishing: true,
                witness: Some(*t),
            });
        }
    }
    Ok(NonvanishingReport {
        nonvanishing: false,
        witness: None,
    })
}

// ---------------------------------------------------------------------------
// JSON serialization
// ---------------------------------------------------------------------------

/// Exact scalar as JSON: a rational string, or `[a, b]` in the quadratic
/// ring described by the document's `minpoly` header.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarRepr {
    Rational(String),
    Quad([String; 2]),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MinPolyRepr {
    pub t: String,
    pub n: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EllipticFormRepr {
    #[serde(default = "elliptic_schema")]
    pub schema: String,
    pub weight: u32,
    pub level: u64,
    pub chi_p: ScalarRepr,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minpoly: Option<MinPolyRepr>,
    pub coefficients: Vec<ScalarRepr>,
}

fn elliptic_schema() -> String {
    "parastab/elliptic/v1".to_string()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SiegelEntryRepr {
    #[serde(rename = "T")]
    pub t: [i64; 3],
    pub value: ScalarRepr,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SiegelTableRepr {
    #[serde(default = "siegel_schema")]
    pub schema: String,
    pub weight: u32,
    pub chi_p: ScalarRepr,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minpoly: Option<MinPolyRepr>,
    pub entries: Vec<SiegelEntryRepr>,
    pub closure: Closure,
}

fn siegel_schema() -> String {
    "parastab/siegel/v1".to_string()
}

fn parse_rat_str(s: &str) -> Result<Rat> {
    crate::scalars::parse_rat(s)
}

impl ScalarRepr {
    pub fn to_elem(&self, ring: Option<&QuadRing>) -> Result<QuadExtElem> {
        match self {
            ScalarRepr::Rational(s) => Ok(QuadExtElem::from_rat(parse_rat_str(s)?)),
            ScalarRepr::Quad([a, b]) => {
                let ring = ring.ok_or_else(|| {
                    Error::Parse("quadratic coefficient without a minpoly header".into())
                })?;
                Ok(QuadExtElem::new(
                    parse_rat_str(a)?,
                    parse_rat_str(b)?,
                    ring.clone(),
                ))
            }
        }
    }

    pub fn from_elem(e: &QuadExtElem) -> ScalarRepr {
        if e.is_rational() {
            ScalarRepr::Rational(e.a().to_string())
        } else {
            ScalarRepr::Quad([e.a().to_string(), e.b().to_string()])
        }
    }
}

fn minpoly_of(ring: &Option<QuadRing>) -> Option<MinPolyRepr> {
    ring.as_ref().map(|r| MinPolyRepr {
        t: r.trace.to_string(),
        n: r.norm.to_string(),
    })
}

fn ring_of(minpoly: &Option<MinPolyRepr>) -> Result<Option<QuadRing>> {
    match minpoly {
        None => Ok(None),
        Some(mp) => Ok(Some(QuadRing::new(
            parse_rat_str(&mp.t)?,
            parse_rat_str(&mp.n)?,
        ))),
    }
}

impl EllipticForm {
    pub fn to_repr(&self) -> EllipticFormRepr {
        let ring = self.ring();
        EllipticFormRepr {
            schema: elliptic_schema(),
            weight: self.weight,
            level: self.level,
            chi_p: ScalarRepr::from_elem(&self.chi_p),
            minpoly: minpoly_of(&ring),
            coefficients: self.coefficients.iter().map(ScalarRepr::from_elem).collect(),
        }
    }

    pub fn from_repr(repr: &EllipticFormRepr) -> Result<Self> {
        let ring = ring_of(&repr.minpoly)?;
        let chi_p = repr.chi_p.to_elem(ring.as_ref())?;
        let coefficients: Vec<QuadExtElem> = repr
            .coefficients
            .iter()
            .map(|c| c.to_elem(ring.as_ref()))
            .collect::<Result<_>>()?;
        EllipticForm::new(repr.weight, repr.level, chi_p, coefficients)
    }
}

impl SiegelCoeffTable {
    pub fn ring(&self) -> Option<QuadRing> {
        let mut ring: Option<QuadRing> = self.chi_p.ring().cloned();
        for v in self.entries.values() {
            if ring.is_some() {
                break;
            }
            ring = v.ring().cloned();
        }
        ring
    }

    pub fn to_repr(&self) -> SiegelTableRepr {
        let ring = self.ring();
        SiegelTableRepr {
            schema: siegel_schema(),
            weight: self.weight,
            chi_p: ScalarRepr::from_elem(&self.chi_p),
            minpoly: minpoly_of(&ring),
            entries: self
                .entries
                .iter()
                .map(|(t, v)| SiegelEntryRepr {
                    t: [t.0, t.1, t.2],
                    value: ScalarRepr::from_elem(v),
                })
                .collect(),
            closure: self.closure,
        }
    }

    pub fn from_repr(repr: &SiegelTableRepr) -> Result<Self> {
        let ring = ring_of(&repr.minpoly)?;
        let chi_p = repr.chi_p.to_elem(ring.as_ref())?;
        let mut entries = BTreeMap::new();
        for e in &repr.entries {
            entries.insert(
                (e.t[0], e.t[1], e.t[2]),
                e.value.to_elem(ring.as_ref())?,
            );
        }
        Ok(SiegelCoeffTable::new(repr.weight, chi_p, entries, repr.closure))
    }
}
