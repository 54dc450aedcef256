//! Construction of the operator polynomial that projects a spherical vector
//! onto a simultaneous U_p-eigenvector, and evaluation of such polynomials
//! against concrete commuting matrix models.
//!
//! Starting from a spherical vector, the product
//!
//! ```text
//! ∏ (δ_P^{1/2}(t_i)·U_i − root)^{exponent}
//! ```
//!
//! over the factors below kills every non-target generalized eigencomponent
//! of the level's fixed space. One factor arises per distinct competing
//! eigen-tuple, on the smallest generator separating it from the target,
//! with exponent equal to the tuple's multiplicity; factors agreeing in
//! generator and root merge by adding exponents. Factor order is irrelevant
//! because the U_i commute, and is canonicalized by (generator, root).

use crate::error::{Error, Result};
use crate::local_tables::{EigenSystem, RepCase};
use crate::root_data::{GroupDescriptor, GroupName, ParabolicKind, U21Extension};
use crate::scalars::{rat, QuadExtElem, Rat, SymScalar};

/// One factor `(δ_P^{1/2}(t_i)·U_i − root)^exponent`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerFactor {
    /// Index of the U_p generator the factor acts through (0-based).
    pub generator: usize,
    pub root: SymScalar,
    pub exponent: u32,
}

/// Factored stabilization operator for one target eigen-tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizerPoly {
    pub factors: Vec<StabilizerFactor>,
    /// `δ_P^{1/2}(t_i)` per generator.
    pub normalizations: Vec<SymScalar>,
    /// `δ_P^{-1/2}(t_i) · target_i`: the eigenvalue of U_i on the output.
    pub target_eigenvalues: Vec<SymScalar>,
    /// The Jacquet-side target tuple.
    pub target: Vec<SymScalar>,
}

/// Square root of a monomial with even exponents and square coefficient.
fn monomial_sqrt(x: &SymScalar) -> Option<SymScalar> {
    let (expo, coef) = x.as_monomial()?;
    let mut half = [0i64; 4];
    for i in 0..4 {
        if expo[i] % 2 != 0 {
            return None;
        }
        half[i] = expo[i] / 2;
    }
    let root = sqrt_rat(coef)?;
    Some(SymScalar::monomial(root, half))
}

fn sqrt_rat(r: &Rat) -> Option<Rat> {
    use num_traits::Signed;
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

/// Build the stabilization operator for `target` inside `sys`.
///
/// `deltas` supplies the modulus values `δ_P(t_i)` (powers of q) for the
/// non-central generators, in generator order. The construction starts from
/// the spherical vector, so the system must have one; when the target tuple
/// has multiplicity greater than one, within-target factors of exponent
/// `multiplicity - 1` are appended on every generator.
pub fn build_stabilizer(
    sys: &EigenSystem,
    target: &[SymScalar],
    deltas: &[SymScalar],
) -> Result<StabilizerPoly> {
    if sys.dim_spherical == 0 {
        return Err(Error::NoSphericalVector);
    }
    let arity = match sys.tuples.first() {
        Some((t, _)) => t.len(),
        None => return Err(Error::TargetNotFound),
    };
    if target.len() != arity {
        return Err(Error::DimensionMismatch(format!(
            "target arity {} does not match system arity {}",
            target.len(),
            arity
        )));
    }
    if deltas.len() != arity {
        return Err(Error::DimensionMismatch(format!(
            "{} modulus values supplied for {} generators",
            deltas.len(),
            arity
        )));
    }
    let target_mult = sys
        .tuples
        .iter()
        .find(|(t, _)| t.as_slice() == target)
        .map(|(_, m)| *m)
        .ok_or(Error::TargetNotFound)?;

    let mut factors: Vec<StabilizerFactor> = Vec::new();
    let mut push = |generator: usize, root: SymScalar, exponent: u32| {
        for f in factors.iter_mut() {
            if f.generator == generator && f.root == root {
                f.exponent += exponent;
                return;
            }
        }
        factors.push(StabilizerFactor {
            generator,
            root,
            exponent,
        });
    };
    for (tuple, mult) in &sys.tuples {
        if tuple.as_slice() == target {
            continue;
        }
        let sep = (0..arity)
            .find(|&i| tuple[i] != target[i])
            .ok_or(Error::NoSeparatingGenerator)?;
        push(sep, tuple[sep].clone(), *mult);
    }
    if target_mult > 1 {
        for (i, t) in target.iter().enumerate() {
            push(i, t.clone(), target_mult - 1);
        }
    }
    factors.sort_by(|a, b| a.generator.cmp(&b.generator).then_with(|| a.root.cmp(&b.root)));

    let mut normalizations = Vec::with_capacity(arity);
    let mut target_eigenvalues = Vec::with_capacity(arity);
    for (i, delta) in deltas.iter().enumerate() {
        let half = monomial_sqrt(delta).ok_or_else(|| {
            Error::DimensionMismatch(format!("modulus value {delta} is not a square monomial"))
        })?;
        let inv_half = half.inverse().ok_or(Error::NonInvertible)?;
        target_eigenvalues.push(&inv_half * &target[i]);
        normalizations.push(half);
    }

    Ok(StabilizerPoly {
        factors,
        normalizations,
        target_eigenvalues,
        target: target.to_vec(),
    })
}

/// `δ_P(t_i)` for the non-central generators of the level.
pub fn modulus_values(group: GroupName, parahoric: ParabolicKind) -> Result<Vec<SymScalar>> {
    let descriptor = match group {
        GroupName::U21 => GroupDescriptor::u21(U21Extension::Unramified),
        other => GroupDescriptor::by_name(other),
    };
    modulus_values_for(&descriptor, parahoric)
}

/// `δ_P(t_i)` for the non-central generators, with an explicit descriptor
/// (needed to pick the U(2,1) extension type).
pub fn modulus_values_for(
    descriptor: &GroupDescriptor,
    parahoric: ParabolicKind,
) -> Result<Vec<SymScalar>> {
    let p = descriptor.parabolic(parahoric)?;
    let gens = descriptor.tp_generators(&p)?;
    gens[..p.m_p]
        .iter()
        .map(|t| descriptor.modulus_character(&p, t))
        .collect()
}

// ---------------------------------------------------------------------------
// Matrix evaluation
// ---------------------------------------------------------------------------

/// Minimal ring interface for matrix entries.
pub trait RingScalar: Clone + PartialEq {
    fn ring_zero() -> Self;
    fn ring_one() -> Self;
    fn ring_add(&self, other: &Self) -> Self;
    fn ring_mul(&self, other: &Self) -> Self;
    fn ring_neg(&self) -> Self;

    fn ring_sub(&self, other: &Self) -> Self {
        self.ring_add(&other.ring_neg())
    }
    fn ring_is_zero(&self) -> bool {
        *self == Self::ring_zero()
    }
}

impl RingScalar for SymScalar {
    fn ring_zero() -> Self {
        SymScalar::zero()
    }
    fn ring_one() -> Self {
        SymScalar::one()
    }
    fn ring_add(&self, other: &Self) -> Self {
        self + other
    }
    fn ring_mul(&self, other: &Self) -> Self {
        self * other
    }
    fn ring_neg(&self) -> Self {
        -self
    }
}

impl RingScalar for QuadExtElem {
    fn ring_zero() -> Self {
        QuadExtElem::from_rat(rat(0))
    }
    fn ring_one() -> Self {
        QuadExtElem::from_rat(rat(1))
    }
    fn ring_add(&self, other: &Self) -> Self {
        self + other
    }
    fn ring_mul(&self, other: &Self) -> Self {
        self * other
    }
    fn ring_neg(&self) -> Self {
        -self
    }
}

/// Dense square matrix over an exact ring.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<R> {
    n: usize,
    entries: Vec<R>,
}

impl<R: RingScalar> Matrix<R> {
    pub fn from_rows(rows: Vec<Vec<R>>) -> Self {
        let n = rows.len();
        for r in &rows {
            assert_eq!(r.len(), n, "matrix must be square");
        }
        Matrix {
            n,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![R::ring_zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = R::ring_one();
        }
        Matrix { n, entries }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn at(&self, i: usize, j: usize) -> &R {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: R) {
        self.entries[i * self.n + j] = value;
    }

    pub fn matmul(&self, other: &Matrix<R>) -> Matrix<R> {
        assert_eq!(self.n, other.n, "matrix size mismatch");
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = R::ring_zero();
                for k in 0..n {
                    acc = acc.ring_add(&self.at(i, k).ring_mul(other.at(k, j)));
                }
                entries.push(acc);
            }
        }
        Matrix { n, entries }
    }

    pub fn apply(&self, v: &[R]) -> Vec<R> {
        assert_eq!(v.len(), self.n, "vector length mismatch");
        (0..self.n)
            .map(|i| {
                let mut acc = R::ring_zero();
                for (j, x) in v.iter().enumerate() {
                    acc = acc.ring_add(&self.at(i, j).ring_mul(x));
                }
                acc
            })
            .collect()
    }

    pub fn scale(&self, c: &R) -> Matrix<R> {
        Matrix {
            n: self.n,
            entries: self.entries.iter().map(|e| e.ring_mul(c)).collect(),
        }
    }

    pub fn add(&self, other: &Matrix<R>) -> Matrix<R> {
        assert_eq!(self.n, other.n);
        Matrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.ring_add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Matrix<R>) -> Matrix<R> {
        assert_eq!(self.n, other.n);
        Matrix {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.ring_sub(b))
                .collect(),
        }
    }

    pub fn trace(&self) -> R {
        let mut acc = R::ring_zero();
        for i in 0..self.n {
            acc = acc.ring_add(self.at(i, i));
        }
        acc
    }

    pub fn det2(&self) -> R {
        assert_eq!(self.n, 2, "det2 is for 2x2 matrices");
        self.at(0, 0)
            .ring_mul(self.at(1, 1))
            .ring_sub(&self.at(0, 1).ring_mul(self.at(1, 0)))
    }

    pub fn commutes_with(&self, other: &Matrix<R>) -> bool {
        self.matmul(other) == other.matmul(self)
    }
}

/// Result of evaluating a stabilizer polynomial in a matrix model.
#[derive(Debug, Clone)]
pub struct ApplyOutcome<R> {
    pub vector: Vec<R>,
    /// False when the output vanished; the construction then certifies
    /// nothing (the non-vanishing argument needs the spherical generator).
    pub nontrivial: bool,
}

/// Evaluate `∏ (δ^{1/2}(t_i)·M_i − root·Id)^exp · start`.
///
/// `to_scalar` converts the polynomial's symbolic normalizations and roots
/// into the matrix ring (the identity map for symbolic matrices, or a
/// specialization into a quadratic ring). The matrices must commute
/// pairwise; when they model the level faithfully the output is a
/// simultaneous eigenvector with the polynomial's target eigenvalues.
pub fn apply_to_matrix<R: RingScalar>(
    poly: &StabilizerPoly,
    matrices: &[Matrix<R>],
    start: &[R],
    to_scalar: impl Fn(&SymScalar) -> Result<R>,
) -> Result<ApplyOutcome<R>> {
    if matrices.len() != poly.normalizations.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} matrices supplied for {} generators",
            matrices.len(),
            poly.normalizations.len()
        )));
    }
    let n = match matrices.first() {
        Some(m) => m.size(),
        None => start.len(),
    };
    for m in matrices {
        if m.size() != n {
            return Err(Error::DimensionMismatch(
                "matrices have different sizes".into(),
            ));
        }
    }
    if start.len() != n {
        return Err(Error::DimensionMismatch(
            "start vector length does not match matrix size".into(),
        ));
    }
    for (i, a) in matrices.iter().enumerate() {
        for b in &matrices[i + 1..] {
            if !a.commutes_with(b) {
                return Err(Error::NonCommutingMatrices);
            }
        }
    }

    // Normalized generators delta^{1/2}(t_i) * M_i.
    let normalized: Vec<Matrix<R>> = matrices
        .iter()
        .zip(&poly.normalizations)
        .map(|(m, half)| Ok(m.scale(&to_scalar(half)?)))
        .collect::<Result<_>>()?;

    let mut v = start.to_vec();
    for factor in &poly.factors {
        let root = to_scalar(&factor.root)?;
        let m = &normalized[factor.generator];
        let shifted = m.sub(&Matrix::identity(n).scale(&root));
        for _ in 0..factor.exponent {
            v = shifted.apply(&v);
        }
    }
    let nontrivial = v.iter().any(|x| !x.ring_is_zero());
    Ok(ApplyOutcome {
        vector: v,
        nontrivial,
    })
}

/// Coordinates of the stabilized GL2 vectors in the Iwahori basis
/// `{φ, φ' = π(t1^{-1})φ}`.
///
/// For distinct character values the two stabilizations have coordinates
/// `(1, -q^{-1/2}·x2)` and `(1, -q^{-1/2}·x1)` (each scaled by the inverse
/// character value of its target); when the values coincide there is a
/// single stabilized vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gl2BasisExpansion {
    /// `(target eigen-parameter, coordinates in (φ, φ'))`.
    pub vectors: Vec<(SymScalar, [SymScalar; 2])>,
}

pub fn gl2_basis_expansion(rep: &RepCase) -> Result<Gl2BasisExpansion> {
    if rep.group != GroupName::Gl2 {
        return Err(Error::DescriptorMismatch(
            "basis expansion is a GL2 operation".into(),
        ));
    }
    let x1 = rep.chi1().clone();
    let x2 = rep.chi2().clone();
    let v_inv = SymScalar::var_pow(crate::scalars::Var::V, -1);
    let coord = |other: &SymScalar| [SymScalar::one(), -(&v_inv * other)];
    let vectors = if x1 == x2 {
        vec![(x1.clone(), coord(&x1))]
    } else {
        vec![(x1.clone(), coord(&x2)), (x2.clone(), coord(&x1))]
    };
    Ok(Gl2BasisExpansion { vectors })
}
