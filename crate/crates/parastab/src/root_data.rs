//! Root data for GL2, U(2,1) and GSp4: parabolic subsets, the semigroup
//! generators of `T_P^-`, positivity tests and modulus characters.
//!
//! Torus elements are recorded by the valuations of their diagonal
//! coordinates (their class modulo the maximal compact torus); every
//! operation in this crate depends only on those valuations. Roots are
//! integer functionals on the valuation vector, so `ord α(t)` is a dot
//! product. The sign convention is `|α(t)| ≤ 1  ⟺  ord α(t) ≥ 0`.
//!
//! For GSp4 the torus is `diag(a, b, c·b⁻¹, c·a⁻¹)` with simple roots
//! `α1(t) = a·b⁻¹` and `α2(t) = b²·c⁻¹`; on diagonal valuations
//! `(v1, v2, v3, v4)` these are `e1 - e2` and `e2 - e3`.
//!
//! For U(2,1) attached to a quadratic extension E/F the torus is
//! `diag(x, e, x̄⁻¹)` and only `val_E(x)` is recorded; the norm-one factor
//! carries no valuation data.

use crate::error::{Error, Result};
use crate::scalars::{ratio, Rat, SymScalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupName {
    Gl2,
    U21,
    Gsp4,
}

impl GroupName {
    pub fn as_str(self) -> &'static str {
        match self {
            GroupName::Gl2 => "gl2",
            GroupName::U21 => "u21",
            GroupName::Gsp4 => "gsp4",
        }
    }
}

impl std::str::FromStr for GroupName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "gl2" => Ok(GroupName::Gl2),
            "u21" | "u(2,1)" => Ok(GroupName::U21),
            "gsp4" => Ok(GroupName::Gsp4),
            other => Err(Error::Parse(format!("unknown group `{other}`"))),
        }
    }
}

/// Ramification of the quadratic extension behind U(2,1). Controls the size
/// of the residue field of E: `q_E = q^2` when unramified, `q_E = q` when
/// ramified.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum U21Extension {
    Unramified,
    Ramified,
}

impl U21Extension {
    /// `q_E` as a power of `q`.
    pub fn q_e_exponent(self) -> i64 {
        match self {
            U21Extension::Unramified => 2,
            U21Extension::Ramified => 1,
        }
    }

    /// `q_E` as a symbolic scalar.
    pub fn q_e(self) -> SymScalar {
        SymScalar::q_pow(self.q_e_exponent())
    }

    /// `val_E(ϖ_F)`: 1 when unramified, 2 when ramified.
    pub fn val_e_of_uniformizer(self) -> i64 {
        match self {
            U21Extension::Unramified => 1,
            U21Extension::Ramified => 2,
        }
    }
}

/// Class of a torus element modulo the maximal compact torus: the vector of
/// ϖ-valuations of its diagonal coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TorusElement {
    vals: Vec<i64>,
}

impl TorusElement {
    pub fn new(vals: Vec<i64>) -> Self {
        TorusElement { vals }
    }

    pub fn identity(rank: usize) -> Self {
        TorusElement { vals: vec![0; rank] }
    }

    pub fn vals(&self) -> &[i64] {
        &self.vals
    }

    pub fn compose(&self, other: &TorusElement) -> TorusElement {
        assert_eq!(self.vals.len(), other.vals.len(), "torus rank mismatch");
        TorusElement {
            vals: self
                .vals
                .iter()
                .zip(&other.vals)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn inverse(&self) -> TorusElement {
        TorusElement {
            vals: self.vals.iter().map(|v| -v).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.vals.iter().all(|&v| v == 0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParabolicKind {
    Borel,
    Siegel,
    Klingen,
    Hyperspecial,
}

impl ParabolicKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ParabolicKind::Borel => "borel",
            ParabolicKind::Siegel => "siegel",
            ParabolicKind::Klingen => "klingen",
            ParabolicKind::Hyperspecial => "hyperspecial",
        }
    }
}

impl std::str::FromStr for ParabolicKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "borel" | "iwahori" => Ok(ParabolicKind::Borel),
            "siegel" => Ok(ParabolicKind::Siegel),
            "klingen" => Ok(ParabolicKind::Klingen),
            "hyperspecial" | "maximal" => Ok(ParabolicKind::Hyperspecial),
            other => Err(Error::Parse(format!("unknown parabolic `{other}`"))),
        }
    }
}

/// A standard parabolic of one of the fixed groups, described by the subset
/// `Δ_P` of simple roots contained in its Levi. `m_P = #(Δ \ Δ_P)` is the
/// number of non-central U_p generators at this level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParabolicDescriptor {
    pub kind: ParabolicKind,
    pub group: GroupName,
    /// Indices into the group's simple-root list.
    pub delta_p: Vec<usize>,
    pub m_p: usize,
}

/// Fixed root-datum description of one of the three supported groups.
#[derive(Debug, Clone)]
pub struct GroupDescriptor {
    name: GroupName,
    torus_rank: usize,
    simple_roots: Vec<Vec<i64>>,
    positive_roots: Vec<Vec<i64>>,
    center_contains_gm: bool,
    /// Basis of the coweight lattice inside the valuation vectors.
    coweight_basis: Vec<Vec<i64>>,
    /// Weight of one unit of `ord α(t)` in the modulus exponent, in
    /// q-valuation units. 1 for split groups; for U(2,1) it accounts for the
    /// normalization of the extension's absolute value.
    ord_weight: Rat,
    u21_ext: Option<U21Extension>,
}

impl GroupDescriptor {
    pub fn gl2() -> Self {
        GroupDescriptor {
            name: GroupName::Gl2,
            torus_rank: 2,
            simple_roots: vec![vec![1, -1]],
            positive_roots: vec![vec![1, -1]],
            center_contains_gm: true,
            coweight_basis: vec![vec![1, 0], vec![0, 1]],
            ord_weight: ratio(1, 1),
            u21_ext: None,
        }
    }

    pub fn gsp4() -> Self {
        GroupDescriptor {
            name: GroupName::Gsp4,
            torus_rank: 4,
            // alpha1 = e1 - e2, alpha2 = e2 - e3 on diag(a, b, c/b, c/a).
            simple_roots: vec![vec![1, -1, 0, 0], vec![0, 1, -1, 0]],
            positive_roots: vec![
                vec![1, -1, 0, 0],
                vec![0, 1, -1, 0],
                vec![1, 0, -1, 0],
                vec![1, 0, 0, -1],
            ],
            center_contains_gm: true,
            // (v1, v2, v3, v4) with v1 + v4 = v2 + v3.
            coweight_basis: vec![vec![1, 0, 0, -1], vec![0, 1, 0, 1], vec![0, 0, 1, 1]],
            ord_weight: ratio(1, 1),
            u21_ext: None,
        }
    }

    pub fn u21(ext: U21Extension) -> Self {
        // The positive root spaces have F-dimensions 2 (alpha, counted
        // twice below) and 1 (2*alpha), giving delta_B(t) = q_E^(-2 val_E);
        // ord_weight converts the root-product exponent into q-powers.
        let ord_weight = match ext {
            U21Extension::Unramified => ratio(1, 1),
            U21Extension::Ramified => ratio(1, 2),
        };
        GroupDescriptor {
            name: GroupName::U21,
            torus_rank: 1,
            simple_roots: vec![vec![1]],
            positive_roots: vec![vec![1], vec![1], vec![2]],
            center_contains_gm: false,
            coweight_basis: vec![vec![1]],
            ord_weight,
            u21_ext: Some(ext),
        }
    }

    pub fn by_name(name: GroupName) -> Self {
        match name {
            GroupName::Gl2 => Self::gl2(),
            GroupName::Gsp4 => Self::gsp4(),
            GroupName::U21 => Self::u21(U21Extension::Unramified),
        }
    }

    pub fn name(&self) -> GroupName {
        self.name
    }

    pub fn torus_rank(&self) -> usize {
        self.torus_rank
    }

    pub fn simple_roots(&self) -> &[Vec<i64>] {
        &self.simple_roots
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    pub fn center_contains_gm(&self) -> bool {
        self.center_contains_gm
    }

    pub fn u21_extension(&self) -> Option<U21Extension> {
        self.u21_ext
    }

    /// The standard parabolic of the given kind.
    pub fn parabolic(&self, kind: ParabolicKind) -> Result<ParabolicDescriptor> {
        let delta_p: Vec<usize> = match (self.name, kind) {
            (_, ParabolicKind::Borel) => vec![],
            (_, ParabolicKind::Hyperspecial) => (0..self.simple_roots.len()).collect(),
            (GroupName::Gsp4, ParabolicKind::Siegel) => vec![0],
            (GroupName::Gsp4, ParabolicKind::Klingen) => vec![1],
            (g, k) => {
                return Err(Error::DescriptorMismatch(format!(
                    "{} has no {} parabolic",
                    g.as_str(),
                    k.as_str()
                )))
            }
        };
        let m_p = self.simple_roots.len() - delta_p.len();
        Ok(ParabolicDescriptor {
            kind,
            group: self.name,
            delta_p,
            m_p,
        })
    }

    fn check_parabolic(&self, p: &ParabolicDescriptor) -> Result<()> {
        if p.group != self.name {
            return Err(Error::DescriptorMismatch(format!(
                "parabolic of {} applied to {}",
                p.group.as_str(),
                self.name.as_str()
            )));
        }
        Ok(())
    }

    pub fn ord_root(&self, root: &[i64], t: &TorusElement) -> i64 {
        assert_eq!(root.len(), t.vals().len(), "root/torus rank mismatch");
        root.iter().zip(t.vals()).map(|(r, v)| r * v).sum()
    }

    /// Positive roots lying in the unipotent radical of P (not in the Levi).
    pub fn unipotent_roots(&self, p: &ParabolicDescriptor) -> Result<Vec<Vec<i64>>> {
        self.check_parabolic(p)?;
        let levi: Vec<&Vec<i64>> = p.delta_p.iter().map(|&i| &self.simple_roots[i]).collect();
        Ok(self
            .positive_roots
            .iter()
            .filter(|root| !in_nonneg_span(root, &levi))
            .cloned()
            .collect())
    }

    /// Positivity relative to (P, K_P): the element contracts `K_P ∩ N` and
    /// expands the opposite side, which for a torus class means
    /// `ord α(t) ≥ 0` for every root of the unipotent radical.
    pub fn is_positive(&self, t: &TorusElement, p: &ParabolicDescriptor) -> Result<bool> {
        Ok(self
            .unipotent_roots(p)?
            .iter()
            .all(|root| self.ord_root(root, t) >= 0))
    }

    /// Membership in the semigroup `T_P^-`: `ord α(t) ≥ 0` for every simple
    /// root together with contraction of `K_P ∩ N` (automatic for torus
    /// classes once the simple-root condition holds).
    pub fn in_t_p_minus(&self, t: &TorusElement, p: &ParabolicDescriptor) -> Result<bool> {
        self.check_parabolic(p)?;
        Ok(self
            .simple_roots
            .iter()
            .all(|root| self.ord_root(root, t) >= 0)
            && self.is_positive(t, p)?)
    }

    /// Exponent `e` with `δ_P(t) = q^e` (always ≤ 0 for positive `t`).
    pub fn modulus_exponent(&self, p: &ParabolicDescriptor, t: &TorusElement) -> Result<Rat> {
        let total: i64 = self
            .unipotent_roots(p)?
            .iter()
            .map(|root| self.ord_root(root, t))
            .sum();
        Ok(&self.ord_weight * ratio(-total, 1))
    }

    /// The modulus character `δ_P(t)` as a power of q. Computed as the
    /// product of `|α(t)|` over the roots of the unipotent radical, counted
    /// with the dimension of their root spaces.
    pub fn modulus_character(
        &self,
        p: &ParabolicDescriptor,
        t: &TorusElement,
    ) -> Result<SymScalar> {
        self.modulus_power(p, t, ratio(1, 1))
    }

    /// `δ_P(t)^{1/2}` as a power of v.
    pub fn modulus_half(&self, p: &ParabolicDescriptor, t: &TorusElement) -> Result<SymScalar> {
        self.modulus_power(p, t, ratio(1, 2))
    }

    /// `δ_P(t)^{-1/2}` as a power of v.
    pub fn modulus_inv_half(&self, p: &ParabolicDescriptor, t: &TorusElement) -> Result<SymScalar> {
        self.modulus_power(p, t, ratio(-1, 2))
    }

    fn modulus_power(
        &self,
        p: &ParabolicDescriptor,
        t: &TorusElement,
        power: Rat,
    ) -> Result<SymScalar> {
        let e = self.modulus_exponent(p, t)?;
        // v-exponent = 2 * q-exponent; half-integral q-exponents (ramified
        // U(2,1)) stay integral in v.
        let ev_rat = e * power * ratio(2, 1);
        if !ev_rat.is_integer() {
            return Err(Error::DescriptorMismatch(
                "modulus exponent is not half-integral in q".into(),
            ));
        }
        let ev: i64 = ev_rat
            .to_integer()
            .try_into()
            .map_err(|_| Error::DescriptorMismatch("modulus exponent out of range".into()))?;
        Ok(SymScalar::var_pow(crate::scalars::Var::V, ev))
    }

    /// Generators `t_1, …, t_{m_P}, t_{m_P+1}` of `T_P^-`.
    ///
    /// Each `t_i` (i ≤ m_P) satisfies `ord α_i(t_i) = 1` for exactly one
    /// simple root `α_i ∉ Δ_P` and `ord β(t_i) = 0` for every other simple
    /// root, normalized so its largest diagonal valuation is 0. The
    /// generators are sorted by their Borel modulus exponent, which matches
    /// the usual labeling for GSp4 (the Siegel-type element first). The last
    /// element is `ϖ⁻¹·Id` when the scalar torus sits inside the group, and
    /// the identity otherwise.
    pub fn tp_generators(&self, p: &ParabolicDescriptor) -> Result<Vec<TorusElement>> {
        self.check_parabolic(p)?;
        let borel = self.parabolic(ParabolicKind::Borel)?;
        let mut gens: Vec<TorusElement> = Vec::new();
        for (idx, _) in self.simple_roots.iter().enumerate() {
            if p.delta_p.contains(&idx) {
                continue;
            }
            gens.push(self.solve_generator(idx)?);
        }
        let borel_roots = self.unipotent_roots(&borel)?;
        let mut keyed: Vec<(i64, TorusElement)> = gens
            .into_iter()
            .map(|t| {
                let key: i64 = borel_roots.iter().map(|r| self.ord_root(r, &t)).sum();
                (key, t)
            })
            .collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.vals().cmp(b.1.vals())));
        let mut out: Vec<TorusElement> = keyed.into_iter().map(|(_, t)| t).collect();
        debug_assert_eq!(out.len(), p.m_p);
        out.push(if self.center_contains_gm {
            TorusElement::new(vec![-1; self.torus_rank])
        } else {
            TorusElement::identity(self.torus_rank)
        });
        Ok(out)
    }

    /// Find the coweight with `ord α_target = 1`, `ord β = 0` for the other
    /// simple roots, normalized to have maximal coordinate 0.
    fn solve_generator(&self, target: usize) -> Result<TorusElement> {
        let dim = self.coweight_basis.len();
        let range = 4i64;
        let mut found: Option<TorusElement> = None;
        let mut coeffs = vec![-range; dim];
        'outer: loop {
            let mut vals = vec![0i64; self.torus_rank];
            for (c, basis) in coeffs.iter().zip(&self.coweight_basis) {
                for (v, b) in vals.iter_mut().zip(basis) {
                    *v += c * b;
                }
            }
            let t = TorusElement::new(vals);
            let ok = self.simple_roots.iter().enumerate().all(|(j, root)| {
                let want = if j == target { 1 } else { 0 };
                self.ord_root(root, &t) == want
            });
            if ok {
                let t = self.normalize_by_center(&t);
                match &found {
                    None => found = Some(t),
                    Some(prev) => {
                        debug_assert_eq!(prev, &t, "generator not unique after normalization");
                    }
                }
            }
            for i in 0..dim {
                coeffs[i] += 1;
                if coeffs[i] <= range {
                    continue 'outer;
                }
                coeffs[i] = -range;
            }
            break;
        }
        found.ok_or_else(|| {
            Error::DescriptorMismatch(format!(
                "no coweight solves the generator conditions for simple root {target}"
            ))
        })
    }

    fn normalize_by_center(&self, t: &TorusElement) -> TorusElement {
        if !self.center_contains_gm {
            return t.clone();
        }
        let max = *t.vals().iter().max().expect("nonempty valuation vector");
        TorusElement::new(t.vals().iter().map(|v| v - max).collect())
    }
}

/// Is `root` a nonnegative integer combination of `gens`?
fn in_nonneg_span(root: &[i64], gens: &[&Vec<i64>]) -> bool {
    if gens.is_empty() {
        return false;
    }
    // Coefficients of simple roots inside a positive root stay small here.
    let bound = 3i64;
    let mut coeffs = vec![0i64; gens.len()];
    loop {
        let combo: Vec<i64> = (0..root.len())
            .map(|i| coeffs.iter().zip(gens).map(|(c, g)| c * g[i]).sum::<i64>())
            .collect();
        if combo == root {
            return true;
        }
        let mut k = 0;
        loop {
            if k == coeffs.len() {
                return false;
            }
            coeffs[k] += 1;
            if coeffs[k] <= bound {
                break;
            }
            coeffs[k] = 0;
            k += 1;
        }
    }
}
