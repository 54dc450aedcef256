//! Classification of parahori-spherical representations and their
//! U_p eigen-systems.
//!
//! Every irreducible representation handled here is a constituent of an
//! unramified principal series. For GSp4 the constituents fall into groups
//! I–VId; each case records the values of the inducing characters
//! `chi1, chi2, sigma` at the inverse uniformizer as symbolic scalars, with
//! the convention `nu(ϖ⁻¹) = q = v²`. The Satake parameters are
//!
//! ```text
//! alpha = chi1·chi2·sigma,  beta = chi1·sigma,
//! gamma = chi2·sigma,       delta = sigma        (values at ϖ⁻¹)
//! ```
//!
//! Eigen-systems are generated from the per-case Jacquet-module constituent
//! lists, not from hard-coded eigenvalue strings: a Borel constituent
//! `chi_a ⊗ chi_b ⊗ chi_c` contributes the pair
//! `(chi_c(ϖ⁻¹), chi_b(ϖ⁻¹)·chi_c(ϖ⁻¹)²)` for `(t1, t2)`, a Siegel
//! constituent contributes the value at ϖ⁻¹ of its GL1-twist, and a Klingen
//! constituent contributes the central character of its degree-2 part at
//! `ϖ⁻¹·Id`. The eigenvalue tables are then a derived artifact, diffed
//! against checked-in snapshots rather than hard-coded.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::root_data::{GroupName, ParabolicKind, U21Extension};
use crate::scalars::{Bindings, SymScalar, Var};

/// Classified case labels for the three groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseLabel {
    Gl2Ps,
    U21Ps,
    I,
    IIa,
    IIb,
    IIIa,
    IIIb,
    IVa,
    IVb,
    IVc,
    IVd,
    Va,
    Vb,
    Vc,
    Vd,
    VIa,
    VIb,
    VIc,
    VId,
}

impl CaseLabel {
    pub const GSP4_ALL: [CaseLabel; 17] = [
        CaseLabel::I,
        CaseLabel::IIa,
        CaseLabel::IIb,
        CaseLabel::IIIa,
        CaseLabel::IIIb,
        CaseLabel::IVa,
        CaseLabel::IVb,
        CaseLabel::IVc,
        CaseLabel::IVd,
        CaseLabel::Va,
        CaseLabel::Vb,
        CaseLabel::Vc,
        CaseLabel::Vd,
        CaseLabel::VIa,
        CaseLabel::VIb,
        CaseLabel::VIc,
        CaseLabel::VId,
    ];

    /// Constituent families of a single principal series.
    pub const GSP4_FAMILIES: [&'static [CaseLabel]; 6] = [
        &[CaseLabel::I],
        &[CaseLabel::IIa, CaseLabel::IIb],
        &[CaseLabel::IIIa, CaseLabel::IIIb],
        &[CaseLabel::IVa, CaseLabel::IVb, CaseLabel::IVc, CaseLabel::IVd],
        &[CaseLabel::Va, CaseLabel::Vb, CaseLabel::Vc, CaseLabel::Vd],
        &[CaseLabel::VIa, CaseLabel::VIb, CaseLabel::VIc, CaseLabel::VId],
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CaseLabel::Gl2Ps => "GL2-PS",
            CaseLabel::U21Ps => "U21-PS",
            CaseLabel::I => "I",
            CaseLabel::IIa => "IIa",
            CaseLabel::IIb => "IIb",
            CaseLabel::IIIa => "IIIa",
            CaseLabel::IIIb => "IIIb",
            CaseLabel::IVa => "IVa",
            CaseLabel::IVb => "IVb",
            CaseLabel::IVc => "IVc",
            CaseLabel::IVd => "IVd",
            CaseLabel::Va => "Va",
            CaseLabel::Vb => "Vb",
            CaseLabel::Vc => "Vc",
            CaseLabel::Vd => "Vd",
            CaseLabel::VIa => "VIa",
            CaseLabel::VIb => "VIb",
            CaseLabel::VIc => "VIc",
            CaseLabel::VId => "VId",
        }
    }

    pub fn group(self) -> GroupName {
        match self {
            CaseLabel::Gl2Ps => GroupName::Gl2,
            CaseLabel::U21Ps => GroupName::U21,
            _ => GroupName::Gsp4,
        }
    }
}

impl std::str::FromStr for CaseLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        for label in CaseLabel::GSP4_ALL {
            if s.eq_ignore_ascii_case(label.as_str()) {
                return Ok(label);
            }
        }
        if s.eq_ignore_ascii_case("GL2-PS") || s.eq_ignore_ascii_case("gl2ps") {
            return Ok(CaseLabel::Gl2Ps);
        }
        if s.eq_ignore_ascii_case("U21-PS") || s.eq_ignore_ascii_case("u21ps") {
            return Ok(CaseLabel::U21Ps);
        }
        Err(Error::UnknownCase(s.to_string()))
    }
}

/// A symbolic non-equality `lhs ≠ rhs` attached to a case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub description: String,
    pub lhs: SymScalar,
    pub rhs: SymScalar,
}

impl Constraint {
    fn new(description: &str, lhs: SymScalar, rhs: SymScalar) -> Self {
        Constraint {
            description: description.to_string(),
            lhs,
            rhs,
        }
    }

    /// Check the non-equality at a full specialization.
    pub fn holds_at(&self, bindings: &Bindings) -> Result<bool> {
        let l = self.lhs.specialize(bindings)?;
        let r = self.rhs.specialize(bindings)?;
        Ok(l != r)
    }
}

/// A classified irreducible constituent with its inducing data.
#[derive(Debug, Clone)]
pub struct RepCase {
    pub group: GroupName,
    pub label: CaseLabel,
    /// The free parameters of the case, in the documented order.
    pub params: Vec<SymScalar>,
    chi1: SymScalar,
    chi2: SymScalar,
    sigma: SymScalar,
    /// Case conditions from the classification.
    pub constraints: Vec<Constraint>,
    /// Extra distinctness conditions under which the eigen-tuples are
    /// pairwise distinct.
    pub distinctness: Vec<Constraint>,
    pub notes: Vec<String>,
    dim_spherical: u32,
    u21_ext: Option<U21Extension>,
}

/// Multiset of simultaneous eigen-tuples on a parahoric fixed space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenSystem {
    pub group: GroupName,
    pub case: CaseLabel,
    pub parahoric: ParabolicKind,
    /// `(tuple, multiplicity)`, canonically sorted; tuple arity is the
    /// number of non-central U_p generators (2 for GSp4 Iwahori, 1 for the
    /// other tabulated levels, 0 at hyperspecial level).
    pub tuples: Vec<(Vec<SymScalar>, u32)>,
    pub dim_fixed: u32,
    pub dim_spherical: u32,
}

impl EigenSystem {
    fn from_raw(
        group: GroupName,
        case: CaseLabel,
        parahoric: ParabolicKind,
        raw: Vec<(Vec<SymScalar>, u32)>,
        dim_spherical: u32,
    ) -> Self {
        let mut tuples: Vec<(Vec<SymScalar>, u32)> = Vec::new();
        'outer: for (tuple, mult) in raw {
            for (existing, m) in tuples.iter_mut() {
                if *existing == tuple {
                    *m += mult;
                    continue 'outer;
                }
            }
            tuples.push((tuple, mult));
        }
        tuples.sort();
        let dim_fixed = tuples.iter().map(|(_, m)| m).sum();
        EigenSystem {
            group,
            case,
            parahoric,
            tuples,
            dim_fixed,
            dim_spherical,
        }
    }

    /// Total multiplicity, which always equals the fixed-space dimension.
    pub fn total_multiplicity(&self) -> u32 {
        self.tuples.iter().map(|(_, m)| m).sum()
    }

    /// Merge several systems into one multiset (for partition checks).
    pub fn union(systems: &[EigenSystem]) -> Vec<(Vec<SymScalar>, u32)> {
        let mut out: Vec<(Vec<SymScalar>, u32)> = Vec::new();
        for sys in systems {
            for (tuple, mult) in &sys.tuples {
                match out.iter_mut().find(|(existing, _)| existing == tuple) {
                    Some((_, m)) => *m += mult,
                    None => out.push((tuple.clone(), *mult)),
                }
            }
        }
        out.sort();
        out
    }
}

/// Classify a constituent with explicit inducing data.
///
/// The parameters are the values at ϖ⁻¹ of the free characters of the case:
/// `[chi1, chi2, sigma]` for group I, `[chi, sigma]` for group II,
/// `[chi, rho]` for group III, `[rho]` for groups IV–VI, and `[x1, x2]` for
/// the GL2 principal series. Group V hard-codes the unramified quadratic
/// character `xi(ϖ⁻¹) = -1`.
pub fn classify(group: GroupName, label: CaseLabel, params: Vec<SymScalar>) -> Result<RepCase> {
    if label.group() != group {
        return Err(Error::UnknownCase(format!(
            "case {} does not belong to {}",
            label.as_str(),
            group.as_str()
        )));
    }
    let expect = |n: usize| -> Result<()> {
        if params.len() != n {
            Err(Error::WrongParameterCount {
                expected: n,
                got: params.len(),
            })
        } else {
            Ok(())
        }
    };
    let nu = SymScalar::q(); // nu(ϖ⁻¹) = q
    let v = SymScalar::var(Var::V);
    let v_inv = SymScalar::var_pow(Var::V, -1);
    let one = SymScalar::one();

    let mut notes = Vec::new();
    let (chi1, chi2, sigma, constraints, distinctness, dim_spherical) = match label {
        CaseLabel::Gl2Ps => {
            expect(2)?;
            let x1 = params[0].clone();
            let x2 = params[1].clone();
            if x1 == x2 {
                notes.push("non-semisimple Jacquet module (chi1 = chi2)".to_string());
            }
            let cons = vec![
                Constraint::new("chi1/chi2 != nu", x1.clone(), &nu * &x2),
                Constraint::new("chi1/chi2 != nu^-1", &nu * &x1, x2.clone()),
            ];
            (x1, x2, one.clone(), cons, vec![], 1)
        }
        CaseLabel::U21Ps => {
            expect(1)?;
            let u = params[0].clone();
            // chi stored in the chi1 slot; chi-bar abstractly in chi2.
            (u, SymScalar::var(Var::X2), one.clone(), vec![], vec![], 1)
        }
        CaseLabel::I => {
            expect(3)?;
            let c1 = params[0].clone();
            let c2 = params[1].clone();
            let sg = params[2].clone();
            let cons = vec![
                Constraint::new("chi1 != nu", c1.clone(), nu.clone()),
                Constraint::new("chi1 != nu^-1", &c1 * &nu, one.clone()),
                Constraint::new("chi2 != nu", c2.clone(), nu.clone()),
                Constraint::new("chi2 != nu^-1", &c2 * &nu, one.clone()),
                Constraint::new("chi1 != nu*chi2", c1.clone(), &nu * &c2),
                Constraint::new("chi1 != nu^-1*chi2", &c1 * &nu, c2.clone()),
                Constraint::new("chi1 != nu*chi2^-1", &c1 * &c2, nu.clone()),
                Constraint::new("chi1 != nu^-1*chi2^-1", &c1 * &c2 * &nu, one.clone()),
            ];
            let dist = vec![
                Constraint::new("chi1 != 1", c1.clone(), one.clone()),
                Constraint::new("chi2 != 1", c2.clone(), one.clone()),
                Constraint::new("chi1 != chi2", c1.clone(), c2.clone()),
                Constraint::new("chi1 != chi2^-1", &c1 * &c2, one.clone()),
            ];
            (c1, c2, sg, cons, dist, 1)
        }
        CaseLabel::IIa | CaseLabel::IIb => {
            expect(2)?;
            let c = params[0].clone();
            let sg = params[1].clone();
            let c2 = &c * &c;
            let cons = vec![
                Constraint::new("chi^2 != nu", c2.clone(), nu.clone()),
                Constraint::new("chi^2 != nu^-1", &c2 * &nu, one.clone()),
                Constraint::new("chi != nu^(3/2)", c.clone(), SymScalar::var_pow(Var::V, 3)),
                Constraint::new(
                    "chi != nu^(-3/2)",
                    &c * SymScalar::var_pow(Var::V, 3),
                    one.clone(),
                ),
            ];
            let dist = vec![Constraint::new("chi^2 != 1", c2, one.clone())];
            let dim_k = if label == CaseLabel::IIb { 1 } else { 0 };
            (&v * &c, &v_inv * &c, sg, cons, dist, dim_k)
        }
        CaseLabel::IIIa | CaseLabel::IIIb => {
            expect(2)?;
            let c = params[0].clone();
            let r = params[1].clone();
            let cons = vec![
                Constraint::new("chi != 1", c.clone(), one.clone()),
                Constraint::new("chi != nu^2", c.clone(), SymScalar::q_pow(2)),
                Constraint::new("chi != nu^-2", &c * SymScalar::q_pow(2), one.clone()),
            ];
            let dist = vec![
                Constraint::new("chi != nu", c.clone(), nu.clone()),
                Constraint::new("chi != nu^-1", &c * &nu, one.clone()),
            ];
            let dim_k = if label == CaseLabel::IIIb { 1 } else { 0 };
            (c, nu.clone(), &v_inv * &r, cons, dist, dim_k)
        }
        CaseLabel::IVa | CaseLabel::IVb | CaseLabel::IVc | CaseLabel::IVd => {
            expect(1)?;
            let r = params[0].clone();
            let dim_k = if label == CaseLabel::IVd { 1 } else { 0 };
            (
                SymScalar::q_pow(2),
                nu.clone(),
                SymScalar::var_pow(Var::V, -3) * &r,
                vec![],
                vec![],
                dim_k,
            )
        }
        CaseLabel::Va | CaseLabel::Vb | CaseLabel::Vc | CaseLabel::Vd => {
            expect(1)?;
            let r = params[0].clone();
            let xi = -SymScalar::one();
            let dim_k = if label == CaseLabel::Vd { 1 } else { 0 };
            (&nu * &xi, xi.clone(), &v_inv * &r, vec![], vec![], dim_k)
        }
        CaseLabel::VIa | CaseLabel::VIb | CaseLabel::VIc | CaseLabel::VId => {
            expect(1)?;
            let r = params[0].clone();
            let dim_k = if label == CaseLabel::VId { 1 } else { 0 };
            (nu.clone(), one.clone(), &v_inv * &r, vec![], vec![], dim_k)
        }
    };

    Ok(RepCase {
        group,
        label,
        params,
        chi1,
        chi2,
        sigma,
        constraints,
        distinctness,
        notes,
        dim_spherical,
        u21_ext: if group == GroupName::U21 {
            Some(U21Extension::Unramified)
        } else {
            None
        },
    })
}

/// Classify with the default symbolic parameters of the case.
pub fn classify_symbolic(label: CaseLabel) -> Result<RepCase> {
    let group = label.group();
    let params = match label {
        CaseLabel::I => vec![
            SymScalar::var(Var::X1),
            SymScalar::var(Var::X2),
            SymScalar::var(Var::S),
        ],
        CaseLabel::IIa | CaseLabel::IIb | CaseLabel::IIIa | CaseLabel::IIIb => {
            vec![SymScalar::var(Var::X1), SymScalar::var(Var::S)]
        }
        CaseLabel::Gl2Ps => vec![SymScalar::var(Var::X1), SymScalar::var(Var::X2)],
        CaseLabel::U21Ps => vec![SymScalar::var(Var::X1)],
        _ => vec![SymScalar::var(Var::S)],
    };
    classify(group, label, params)
}

impl RepCase {
    pub fn chi1(&self) -> &SymScalar {
        &self.chi1
    }

    pub fn chi2(&self) -> &SymScalar {
        &self.chi2
    }

    pub fn sigma(&self) -> &SymScalar {
        &self.sigma
    }

    pub fn dim_spherical(&self) -> u32 {
        self.dim_spherical
    }

    /// Satake parameter values `[alpha, beta, gamma, delta]` at ϖ⁻¹.
    pub fn satake(&self) -> [SymScalar; 4] {
        let alpha = &self.chi1 * &self.chi2 * &self.sigma;
        let beta = &self.chi1 * &self.sigma;
        let gamma = &self.chi2 * &self.sigma;
        let delta = self.sigma.clone();
        [alpha, beta, gamma, delta]
    }

    fn inv(x: &SymScalar) -> SymScalar {
        x.inverse()
            .expect("inducing character values are monomials and invertible")
    }

    /// Borel Jacquet constituents as character triples at ϖ⁻¹.
    fn borel_constituents(&self) -> Vec<([SymScalar; 3], u32)> {
        let c1 = &self.chi1;
        let c2 = &self.chi2;
        let sg = &self.sigma;
        let i1 = Self::inv(c1);
        let i2 = Self::inv(c2);
        let c12s = c1 * c2 * sg;
        let c1s = c1 * sg;
        let c2s = c2 * sg;
        let t = |a: &SymScalar, b: &SymScalar, c: &SymScalar, m: u32| {
            ([a.clone(), b.clone(), c.clone()], m)
        };
        match self.label {
            CaseLabel::I => vec![
                t(c1, c2, sg, 1),
                t(c2, c1, sg, 1),
                t(&i1, &i2, &c12s, 1),
                t(&i2, &i1, &c12s, 1),
                t(c1, &i2, &c2s, 1),
                t(&i2, c1, &c2s, 1),
                t(c2, &i1, &c1s, 1),
                t(&i1, c2, &c1s, 1),
            ],
            CaseLabel::IIa => vec![
                t(c1, c2, sg, 1),
                t(&i2, &i1, &c12s, 1),
                t(c1, &i2, &c2s, 1),
                t(&i2, c1, &c2s, 1),
            ],
            CaseLabel::IIb => vec![
                t(c2, c1, sg, 1),
                t(&i1, &i2, &c12s, 1),
                t(c2, &i1, &c1s, 1),
                t(&i1, c2, &c1s, 1),
            ],
            CaseLabel::IIIa => vec![
                t(c1, c2, sg, 1),
                t(c2, c1, sg, 1),
                t(c2, &i1, &c1s, 1),
                t(&i1, c2, &c1s, 1),
            ],
            CaseLabel::IIIb => vec![
                t(&i1, &i2, &c12s, 1),
                t(&i2, &i1, &c12s, 1),
                t(c1, &i2, &c2s, 1),
                t(&i2, c1, &c2s, 1),
            ],
            CaseLabel::IVa => vec![t(c1, c2, sg, 1)],
            CaseLabel::IVb => vec![t(c2, c1, sg, 1), t(c2, &i1, &c1s, 1), t(&i1, c2, &c1s, 1)],
            CaseLabel::IVc => vec![t(&i2, &i1, &c12s, 1), t(c1, &i2, &c2s, 1), t(&i2, c1, &c2s, 1)],
            CaseLabel::IVd => vec![t(&i1, &i2, &c12s, 1)],
            CaseLabel::Va => vec![t(c1, c2, sg, 1), t(c1, &i2, &c2s, 1)],
            CaseLabel::Vb => vec![t(&i2, &i1, &c12s, 1), t(&i2, c1, &c2s, 1)],
            CaseLabel::Vc => vec![t(c2, c1, sg, 1), t(c2, &i1, &c1s, 1)],
            CaseLabel::Vd => vec![t(&i1, &i2, &c12s, 1), t(&i1, c2, &c1s, 1)],
            // The doubled constituent of VIa lies over chi1 ⊗ chi2 ⊗ sigma:
            // the partition of the full induced module across the VI family
            // forces chi2 in the middle slot.
            CaseLabel::VIa => vec![t(c1, c2, sg, 2), t(c2, c1, sg, 1)],
            CaseLabel::VIb => vec![t(c2, c1, sg, 1)],
            CaseLabel::VIc => vec![t(c2, &i1, &c1s, 1)],
            CaseLabel::VId => vec![t(&i1, c2, &c1s, 2), t(c2, &i1, &c1s, 1)],
            CaseLabel::Gl2Ps | CaseLabel::U21Ps => {
                unreachable!("GSp4 constituent data requested for {:?}", self.label)
            }
        }
    }

    /// Siegel Jacquet constituents: the value at ϖ⁻¹ of the GL1-twist.
    fn siegel_constituents(&self) -> Vec<(SymScalar, u32)> {
        let sg = &self.sigma;
        let c12s = &self.chi1 * &self.chi2 * sg;
        let c1s = &self.chi1 * sg;
        let c2s = &self.chi2 * sg;
        match self.label {
            CaseLabel::I => vec![
                (sg.clone(), 1),
                (c12s.clone(), 1),
                (c2s.clone(), 1),
                (c1s.clone(), 1),
            ],
            CaseLabel::IIa => vec![(c2s, 1)],
            CaseLabel::IIb => vec![(sg.clone(), 1), (c12s, 1), (c1s, 1)],
            CaseLabel::IIIa => vec![(sg.clone(), 1), (c1s, 1)],
            CaseLabel::IIIb => vec![(c12s, 1), (c2s, 1)],
            CaseLabel::IVa => vec![],
            CaseLabel::IVb => vec![(sg.clone(), 1), (c1s, 1)],
            CaseLabel::IVc => vec![(c2s, 1)],
            CaseLabel::IVd => vec![(c12s, 1)],
            CaseLabel::Va => vec![],
            CaseLabel::Vb => vec![(c2s, 1)],
            CaseLabel::Vc => vec![(sg.clone(), 1)],
            CaseLabel::Vd => vec![(c1s, 1), (c12s, 1)],
            CaseLabel::VIa => vec![(sg.clone(), 1)],
            CaseLabel::VIb => vec![(sg.clone(), 1)],
            CaseLabel::VIc => vec![],
            CaseLabel::VId => vec![(c1s, 2)],
            CaseLabel::Gl2Ps | CaseLabel::U21Ps => {
                unreachable!("GSp4 constituent data requested for {:?}", self.label)
            }
        }
    }

    /// Klingen Jacquet constituents. A constituent `chi_u ⋊ chi_v` of the
    /// degree-2 Levi factor has central character `chi_u·chi_v²` at
    /// `ϖ⁻¹·Id`, recorded as the factor pair `(chi_u·chi_v, chi_v)`; the
    /// one-dimensional twists `rho'·1` sit inside `ν^{1/2}rho' ⋊ ν^{-1/2}rho'`
    /// and contribute the pair `(ν^{1/2}rho', ν^{-1/2}rho')`. Both factors
    /// of every pair are Satake parameter values, so the eigenvalue
    /// (their product) carries its table label structurally.
    fn klingen_constituents(&self) -> Vec<(SymScalar, SymScalar, u32)> {
        let c1 = &self.chi1;
        let c2 = &self.chi2;
        let sg = &self.sigma;
        let nu = SymScalar::q();
        let c12s = c1 * c2 * sg; // alpha value
        let c1s = c1 * sg; // beta value
        let c2s = c2 * sg; // gamma value
        let pair = |a: &SymScalar, b: &SymScalar, m: u32| (a.clone(), b.clone(), m);
        match self.label {
            CaseLabel::I => vec![
                pair(&c2s, sg, 1),
                pair(&c1s, sg, 1),
                pair(&c12s, &c2s, 1),
                pair(&c12s, &c1s, 1),
            ],
            CaseLabel::IIa => vec![pair(&c2s, sg, 1), pair(&c12s, &c2s, 1)],
            CaseLabel::IIb => vec![pair(&c1s, sg, 1), pair(&c12s, &c1s, 1)],
            CaseLabel::IIIa => vec![pair(&c1s, sg, 1)],
            // rho·1 and chi·rho·1 (with rho = ν^{1/2}·sigma in this case)
            // plus chi2^{-1} ⊗ (chi1 ⋊ chi2·sigma).
            CaseLabel::IIIb => vec![
                pair(&(&nu * sg), sg, 1),
                pair(&(c1 * &nu * sg), &(c1 * sg), 1),
                pair(&c12s, &c2s, 1),
            ],
            CaseLabel::IVa => vec![],
            CaseLabel::IVb => vec![pair(&c1s, sg, 1)],
            CaseLabel::IVc => vec![pair(&(&nu * sg), sg, 1), pair(&c12s, &c2s, 1)],
            CaseLabel::IVd => vec![pair(
                &(&nu * &nu * &nu * sg),
                &(&nu * &nu * sg),
                1,
            )],
            CaseLabel::Va => vec![pair(&c2s, sg, 1)],
            CaseLabel::Vb => vec![pair(&c12s, &c2s, 1)],
            CaseLabel::Vc => vec![pair(&c1s, sg, 1)],
            // ν^{-1/2}ξ ⊗ (ξ ⋊ ν^{1/2}rho): pair (ξ·ν·sigma, ν·sigma).
            CaseLabel::Vd => vec![pair(&(-(&nu * sg)), &(&nu * sg), 1)],
            CaseLabel::VIa => vec![pair(&c2s, sg, 1)],
            CaseLabel::VIb => vec![],
            CaseLabel::VIc => vec![pair(&(&nu * sg), sg, 1)],
            CaseLabel::VId => vec![pair(&(&nu * sg), sg, 1), pair(&c12s, &c1s, 1)],
            CaseLabel::Gl2Ps | CaseLabel::U21Ps => {
                unreachable!("GSp4 constituent data requested for {:?}", self.label)
            }
        }
    }
}

/// Compute the eigen-system of a case at a parahoric level.
///
/// Eigen-tuples are the Jacquet-side eigenvalues of `(t_1[, t_2])` with
/// multiplicity; the fixed-space dimension is the total multiplicity. At
/// hyperspecial level the tuple list is empty and the dimension is the
/// spherical dimension.
pub fn eigen_system(rep: &RepCase, parahoric: ParabolicKind) -> Result<EigenSystem> {
    match rep.group {
        GroupName::Gsp4 => eigen_system_gsp4(rep, parahoric),
        GroupName::Gl2 => eigen_system_gl2(rep, parahoric),
        GroupName::U21 => {
            let ext = rep.u21_ext.unwrap_or(U21Extension::Unramified);
            match parahoric {
                ParabolicKind::Borel => u21_eigen_system(rep.chi1.clone(), ext),
                ParabolicKind::Hyperspecial => {
                    let mut sys = EigenSystem::from_raw(
                        rep.group,
                        rep.label,
                        parahoric,
                        vec![],
                        rep.dim_spherical,
                    );
                    sys.dim_fixed = rep.dim_spherical;
                    Ok(sys)
                }
                other => Err(Error::DescriptorMismatch(format!(
                    "u21 has no {} level",
                    other.as_str()
                ))),
            }
        }
    }
}

fn eigen_system_gsp4(rep: &RepCase, parahoric: ParabolicKind) -> Result<EigenSystem> {
    let raw: Vec<(Vec<SymScalar>, u32)> = match parahoric {
        ParabolicKind::Borel => rep
            .borel_constituents()
            .into_iter()
            .map(|([_, b, c], m)| {
                let t1 = c.clone();
                let t2 = &b * &c * &c;
                (vec![t1, t2], m)
            })
            .collect(),
        ParabolicKind::Siegel => rep
            .siegel_constituents()
            .into_iter()
            .map(|(tw, m)| (vec![tw], m))
            .collect(),
        ParabolicKind::Klingen => rep
            .klingen_constituents()
            .into_iter()
            .map(|(f1, f2, m)| (vec![&f1 * &f2], m))
            .collect(),
        ParabolicKind::Hyperspecial => vec![],
    };
    let dim_spherical = rep.dim_spherical;
    let mut sys = EigenSystem::from_raw(rep.group, rep.label, parahoric, raw, dim_spherical);
    if parahoric == ParabolicKind::Hyperspecial {
        sys.dim_fixed = dim_spherical;
    }
    Ok(sys)
}

fn eigen_system_gl2(rep: &RepCase, parahoric: ParabolicKind) -> Result<EigenSystem> {
    match parahoric {
        ParabolicKind::Borel => {
            // Constituents chi1 ⊗ chi2 and chi2 ⊗ chi1; t1 = diag(1, ϖ⁻¹)
            // acts through the second slot.
            let raw = vec![
                (vec![rep.chi2.clone()], 1),
                (vec![rep.chi1.clone()], 1),
            ];
            Ok(EigenSystem::from_raw(
                rep.group,
                rep.label,
                parahoric,
                raw,
                rep.dim_spherical,
            ))
        }
        ParabolicKind::Hyperspecial => {
            let mut sys =
                EigenSystem::from_raw(rep.group, rep.label, parahoric, vec![], rep.dim_spherical);
            sys.dim_fixed = rep.dim_spherical;
            Ok(sys)
        }
        other => Err(Error::DescriptorMismatch(format!(
            "gl2 has no {} level",
            other.as_str()
        ))),
    }
}

/// Outcome of the U(2,1) irreducibility screen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum U21Reducibility {
    Irreducible,
    /// `chi = |·|_E^{±1}`.
    Case1,
    /// `chi` restricted to F^× equals `omega_{E/F} |·|^{±1}`.
    Case2,
    /// `chi` restricted to F^× is trivial but `chi` is not.
    Case3,
}

/// Screen an unramified character of E^× (given by its value at ϖ_E) for
/// the reducibility of the induced representation.
///
/// The restriction map to F^× sends an unramified `chi` to the unramified
/// character with value `chi(ϖ_E)^{val_E(ϖ_F)}` at ϖ_F. For ramified E/F the
/// restriction is unramified while `omega_{E/F}` is ramified, so case 2
/// cannot occur there.
pub fn u21_reducibility(chi_value: &SymScalar, ext: U21Extension) -> U21Reducibility {
    let q_e = ext.q_e();
    let one = SymScalar::one();
    // Case 1: chi(ϖ_E) = q_E^{∓1}.
    if *chi_value == q_e.inverse().expect("q_E invertible") || *chi_value == q_e {
        return U21Reducibility::Case1;
    }
    let e = ext.val_e_of_uniformizer();
    let restriction = chi_value
        .pow(e)
        .expect("character values are invertible monomials");
    match ext {
        U21Extension::Unramified => {
            // omega_{E/F} is unramified quadratic: value -1 at ϖ_F.
            let q = SymScalar::q();
            if restriction == -q.inverse().expect("q invertible") || restriction == -q {
                return U21Reducibility::Case2;
            }
            // chi|_{F^x} trivial forces chi trivial when E/F is unramified,
            // and trivial chi is excluded from case 3.
            U21Reducibility::Irreducible
        }
        U21Extension::Ramified => {
            if restriction == one && *chi_value != one {
                return U21Reducibility::Case3;
            }
            U21Reducibility::Irreducible
        }
    }
}

/// Jacquet-side (t_1)-eigenvalues for the irreducible unramified principal
/// series of U(2,1): `{chi(ϖ_E), chi-bar^{-1}(ϖ_E)}`.
///
/// For unramified E/F an unramified character satisfies
/// `chi-bar(ϖ_E) = chi(ϖ_E)` (conjugation preserves valuations), so the
/// system is `{u, u^{-1}}`. For ramified E/F the relation between `chi-bar`
/// and `chi` at ϖ_E is kept abstract: the symbol `x2` stands for
/// `chi-bar(ϖ_E)`.
pub fn u21_eigen_system(chi_value: SymScalar, ext: U21Extension) -> Result<EigenSystem> {
    match u21_reducibility(&chi_value, ext) {
        U21Reducibility::Irreducible => {}
        case => {
            return Err(Error::NotTabulated(format!(
                "reducible induced representation for U(2,1) ({case:?}); eigenvalues are not tabulated"
            )))
        }
    }
    let chi_bar = match ext {
        U21Extension::Unramified => chi_value.clone(),
        U21Extension::Ramified => SymScalar::var(Var::X2),
    };
    let chi_bar_inv = chi_bar
        .inverse()
        .ok_or(Error::NonInvertible)?;
    let raw = vec![(vec![chi_value], 1), (vec![chi_bar_inv], 1)];
    Ok(EigenSystem::from_raw(
        GroupName::U21,
        CaseLabel::U21Ps,
        ParabolicKind::Borel,
        raw,
        1,
    ))
}

/// Report of a constraint check at a concrete specialization.
#[derive(Debug, Clone)]
pub struct ConstraintReport {
    pub ok: bool,
    pub violated: Vec<String>,
}

/// Evaluate all case constraints and distinctness conditions at a full
/// specialization of the parameters.
pub fn check_constraints(rep: &RepCase, bindings: &Bindings) -> Result<ConstraintReport> {
    let mut violated = Vec::new();
    for c in rep.constraints.iter().chain(rep.distinctness.iter()) {
        if !c.holds_at(bindings)? {
            violated.push(c.description.clone());
        }
    }
    Ok(ConstraintReport {
        ok: violated.is_empty(),
        violated,
    })
}

/// The full unramified-principal-series eigen multiset at a level, evaluated
/// with a case's parameter relations (the expected union of the constituent
/// systems of its family).
pub fn full_induced_multiset(
    rep: &RepCase,
    parahoric: ParabolicKind,
) -> Result<Vec<(Vec<SymScalar>, u32)>> {
    if rep.group != GroupName::Gsp4 {
        return Err(Error::DescriptorMismatch(
            "full induced multiset is a GSp4 operation".into(),
        ));
    }
    let [alpha, beta, gamma, delta] = rep.satake();
    let raw: Vec<(Vec<SymScalar>, u32)> = match parahoric {
        ParabolicKind::Borel => {
            let pairs = [
                (&delta, &gamma),
                (&delta, &beta),
                (&alpha, &beta),
                (&alpha, &gamma),
                (&gamma, &delta),
                (&gamma, &alpha),
                (&beta, &delta),
                (&beta, &alpha),
            ];
            pairs
                .iter()
                .map(|(f, s)| (vec![(*f).clone(), *f * *s], 1))
                .collect()
        }
        ParabolicKind::Siegel => [&alpha, &beta, &gamma, &delta]
            .iter()
            .map(|x| (vec![(**x).clone()], 1))
            .collect(),
        ParabolicKind::Klingen => [
            &alpha * &beta,
            &alpha * &gamma,
            &delta * &beta,
            &delta * &gamma,
        ]
        .into_iter()
        .map(|x| (vec![x], 1))
        .collect(),
        ParabolicKind::Hyperspecial => vec![],
    };
    let sys = EigenSystem::from_raw(rep.group, rep.label, parahoric, raw, 0);
    Ok(sys.tuples)
}

/// Check the constituent-partition property for one family at one level.
pub fn family_partition_holds(family: &[CaseLabel], parahoric: ParabolicKind) -> Result<bool> {
    let reps: Vec<RepCase> = family
        .iter()
        .map(|&l| classify_symbolic(l))
        .collect::<Result<_>>()?;
    let systems: Vec<EigenSystem> = reps
        .iter()
        .map(|r| eigen_system(r, parahoric))
        .collect::<Result<_>>()?;
    let union = EigenSystem::union(&systems);
    let expected = full_induced_multiset(&reps[0], parahoric)?;
    Ok(union == expected)
}

// ---------------------------------------------------------------------------
// Table rendering
// ---------------------------------------------------------------------------

const SATAKE_LETTERS: [&str; 4] = ["alpha", "beta", "gamma", "delta"];

/// Canonical label of a degree-1 eigenvalue in the Satake letters, matched
/// by exact value. Ties from case collapses (alpha = beta and so on) resolve
/// to the earliest letter, matching the collapsed group-VI tables.
pub fn satake_label_deg1(value: &SymScalar, satake: &[SymScalar; 4]) -> Option<String> {
    (0..4)
        .find(|&i| &satake[i] == value)
        .map(|i| SATAKE_LETTERS[i].to_string())
}

/// Canonical label of a degree-2 eigenvalue (a product of two letters).
pub fn satake_label_deg2(value: &SymScalar, satake: &[SymScalar; 4]) -> Option<String> {
    for i in 0..4 {
        for j in i..4 {
            if &(&satake[i] * &satake[j]) == value {
                return Some(render_letter_product(i, j));
            }
        }
    }
    None
}

fn satake_index(value: &SymScalar, satake: &[SymScalar; 4]) -> Option<usize> {
    (0..4).find(|&i| &satake[i] == value)
}

fn render_letter_product(i: usize, j: usize) -> String {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    if i == j {
        format!("{}^2", SATAKE_LETTERS[i])
    } else {
        format!("{}*{}", SATAKE_LETTERS[i], SATAKE_LETTERS[j])
    }
}

/// Parse a Satake-letter monomial such as `alpha*beta` or `gamma^2` into
/// its value under a case's parameter relations.
pub fn satake_monomial_value(expr: &str, satake: &[SymScalar; 4]) -> Result<SymScalar> {
    let mut out = SymScalar::one();
    for factor in expr.split('*') {
        let factor = factor.trim();
        let (name, exp) = match factor.split_once('^') {
            Some((n, e)) => {
                let e: i64 = e
                    .trim()
                    .trim_matches(|c| c == '(' || c == ')')
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent in `{factor}`")))?;
                (n.trim(), e)
            }
            None => (factor, 1),
        };
        let idx = SATAKE_LETTERS
            .iter()
            .position(|l| name.eq_ignore_ascii_case(l))
            .ok_or_else(|| Error::Parse(format!("unknown Satake letter `{name}`")))?;
        let powered = satake[idx]
            .pow(exp)
            .ok_or(Error::NonInvertible)?;
        out = out * powered;
    }
    Ok(out)
}

/// One tuple cell of a rendered table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableTuple {
    pub value: TupleValue,
    pub mult: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TupleValue {
    One(String),
    Many(Vec<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub case: String,
    pub tuples: Vec<TableTuple>,
    pub dim: u32,
    pub dim_spherical: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableDocument {
    pub schema: String,
    pub group: String,
    pub parahoric: String,
    pub rows: Vec<TableRow>,
}

/// Labeled eigen-tuples of one case at one level, with labels taken from
/// the constituent structure: the first Iwahori coordinate and the Siegel
/// eigenvalue are matched directly against `{alpha, beta, gamma, delta}`
/// (earliest letter on case collapses), the second Iwahori coordinate is
/// labeled through its quotient by the first, and Klingen eigenvalues carry
/// the factor pair of their constituent.
pub fn labeled_tuples(rep: &RepCase, parahoric: ParabolicKind) -> Result<Vec<(Vec<String>, u32)>> {
    let satake = rep.satake();
    let deg1 = |v: &SymScalar| -> String {
        satake_label_deg1(v, &satake).unwrap_or_else(|| v.to_string())
    };
    let raw: Vec<(Vec<String>, u32)> = match parahoric {
        ParabolicKind::Borel => rep
            .borel_constituents()
            .into_iter()
            .map(|([_, b, c], m)| {
                let first = c.clone();
                let second = &b * &c * &c;
                let quotient = second
                    .monomial_quotient(&first)
                    .expect("eigen-tuples are monomials");
                let second_label =
                    match (satake_index(&first, &satake), satake_index(&quotient, &satake)) {
                        (Some(i), Some(j)) => render_letter_product(i, j),
                        _ => second.to_string(),
                    };
                (vec![deg1(&first), second_label], m)
            })
            .collect(),
        ParabolicKind::Siegel => rep
            .siegel_constituents()
            .into_iter()
            .map(|(tw, m)| (vec![deg1(&tw)], m))
            .collect(),
        ParabolicKind::Klingen => rep
            .klingen_constituents()
            .into_iter()
            .map(|(f1, f2, m)| {
                let label = match (satake_index(&f1, &satake), satake_index(&f2, &satake)) {
                    (Some(i), Some(j)) => render_letter_product(i, j),
                    _ => (&f1 * &f2).to_string(),
                };
                (vec![label], m)
            })
            .collect(),
        ParabolicKind::Hyperspecial => vec![],
    };
    // Merge equal labels and sort.
    let mut out: Vec<(Vec<String>, u32)> = Vec::new();
    for (labels, mult) in raw {
        match out.iter_mut().find(|(existing, _)| existing == &labels) {
            Some((_, m)) => *m += mult,
            None => out.push((labels, mult)),
        }
    }
    out.sort();
    Ok(out)
}

/// Generate the eigenvalue table for all GSp4 cases at one parahoric level,
/// with eigenvalues rendered in the Satake letters.
pub fn table_document(parahoric: ParabolicKind) -> Result<TableDocument> {
    let mut rows = Vec::new();
    for label in CaseLabel::GSP4_ALL {
        let rep = classify_symbolic(label)?;
        let sys = eigen_system(&rep, parahoric)?;
        let tuples: Vec<TableTuple> = labeled_tuples(&rep, parahoric)?
            .into_iter()
            .map(|(labels, mult)| {
                let value = if labels.len() == 1 {
                    TupleValue::One(labels.into_iter().next().expect("one label"))
                } else {
                    TupleValue::Many(labels)
                };
                TableTuple { value, mult }
            })
            .collect();
        let labeled_total: u32 = tuples.iter().map(|t| t.mult).sum();
        debug_assert_eq!(labeled_total, sys.dim_fixed, "label/value multiset drift");
        rows.push(TableRow {
            case: label.as_str().to_string(),
            tuples,
            dim: sys.dim_fixed,
            dim_spherical: sys.dim_spherical,
        });
    }
    Ok(TableDocument {
        schema: "parastab/tables/v1".to_string(),
        group: "gsp4".to_string(),
        parahoric: parahoric.as_str().to_string(),
        rows,
    })
}

impl TableDocument {
    /// Canonical pretty-printed JSON used both by the CLI and the snapshot
    /// files.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("table serialization");
        s.push('\n');
        s
    }

    /// Aligned text rendering.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "group {}  parahoric {}\n",
            self.group, self.parahoric
        ));
        let width = self
            .rows
            .iter()
            .map(|r| r.case.len())
            .max()
            .unwrap_or(4)
            .max(4);
        for row in &self.rows {
            let cells: Vec<String> = row
                .tuples
                .iter()
                .map(|t| {
                    let v = match &t.value {
                        TupleValue::One(s) => s.clone(),
                        TupleValue::Many(v) => format!("({})", v.join(", ")),
                    };
                    if t.mult == 1 {
                        v
                    } else {
                        format!("{v} x{}", t.mult)
                    }
                })
                .collect();
            out.push_str(&format!(
                "{:width$}  dim {:>2}  dim_K {}  {}\n",
                row.case,
                row.dim,
                row.dim_spherical,
                cells.join("; "),
                width = width
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::{rat, QuadExtElem, QuadRing};

    fn sym(label: CaseLabel) -> RepCase {
        classify_symbolic(label).unwrap()
    }

    #[test]
    fn satake_values_match_parameter_relations() {
        let rep = sym(CaseLabel::IVa);
        let [alpha, beta, gamma, delta] = rep.satake();
        // chi1 = nu^2, chi2 = nu, sigma = nu^{-3/2} rho.
        assert_eq!(alpha, SymScalar::monomial(rat(1), [0, 0, 1, 3]));
        assert_eq!(beta, SymScalar::monomial(rat(1), [0, 0, 1, 1]));
        assert_eq!(gamma, SymScalar::monomial(rat(1), [0, 0, 1, -1]));
        assert_eq!(delta, SymScalar::monomial(rat(1), [0, 0, 1, -3]));
    }

    #[test]
    fn group_v_satake_signs() {
        let rep = sym(CaseLabel::Va);
        let [alpha, beta, gamma, delta] = rep.satake();
        assert_eq!(alpha, SymScalar::monomial(rat(1), [0, 0, 1, 1]));
        assert_eq!(beta, SymScalar::monomial(rat(-1), [0, 0, 1, 1]));
        assert_eq!(gamma, SymScalar::monomial(rat(-1), [0, 0, 1, -1]));
        assert_eq!(delta, SymScalar::monomial(rat(1), [0, 0, 1, -1]));
        let set = [alpha, beta, gamma, delta];
        for i in 0..4 {
            for j in (i + 1)..4 {
                assert_ne!(set[i], set[j], "group V Satake values must be distinct");
            }
        }
    }

    #[test]
    fn iib_iwahori_eigen_tuples() {
        let rep = sym(CaseLabel::IIb);
        let sys = eigen_system(&rep, ParabolicKind::Borel).unwrap();
        let [alpha, beta, _gamma, delta] = rep.satake();
        let expected_raw = vec![
            (vec![delta.clone(), &delta * &beta], 1u32),
            (vec![alpha.clone(), &alpha * &beta], 1),
            (vec![beta.clone(), &beta * &delta], 1),
            (vec![beta.clone(), &beta * &alpha], 1),
        ];
        let expected =
            EigenSystem::from_raw(GroupName::Gsp4, CaseLabel::IIb, ParabolicKind::Borel, expected_raw, 1);
        assert_eq!(sys.tuples, expected.tuples);
        assert_eq!(sys.dim_fixed, 4);
        assert_eq!(sys.dim_spherical, 1);
    }

    #[test]
    fn via_iwahori_multiplicities() {
        let rep = sym(CaseLabel::VIa);
        let sys = eigen_system(&rep, ParabolicKind::Borel).unwrap();
        let [alpha, _beta, gamma, _delta] = rep.satake();
        let gg = (&gamma * &gamma, 2u32);
        let ga = (&gamma * &alpha, 1u32);
        assert_eq!(sys.dim_fixed, 3);
        let mut found_gg = false;
        let mut found_ga = false;
        for (tuple, mult) in &sys.tuples {
            if tuple == &vec![gamma.clone(), gg.0.clone()] {
                assert_eq!(*mult, gg.1);
                found_gg = true;
            }
            if tuple == &vec![gamma.clone(), ga.0.clone()] {
                assert_eq!(*mult, ga.1);
                found_ga = true;
            }
        }
        assert!(found_gg && found_ga);
    }

    #[test]
    fn vid_siegel_and_i_klingen() {
        let vid = sym(CaseLabel::VId);
        let sys = eigen_system(&vid, ParabolicKind::Siegel).unwrap();
        let [alpha, ..] = vid.satake();
        assert_eq!(sys.tuples, vec![(vec![alpha], 2)]);
        assert_eq!(sys.dim_fixed, 2);

        let i = sym(CaseLabel::I);
        let sys = eigen_system(&i, ParabolicKind::Klingen).unwrap();
        let [alpha, beta, gamma, delta] = i.satake();
        let mut expected = vec![
            (vec![&alpha * &beta], 1u32),
            (vec![&alpha * &gamma], 1),
            (vec![&delta * &beta], 1),
            (vec![&delta * &gamma], 1),
        ];
        expected.sort();
        assert_eq!(sys.tuples, expected);
        assert_eq!(sys.dim_fixed, 4);
    }

    #[test]
    fn iva_siegel_empty() {
        let rep = sym(CaseLabel::IVa);
        let sys = eigen_system(&rep, ParabolicKind::Siegel).unwrap();
        assert!(sys.tuples.is_empty());
        assert_eq!(sys.dim_fixed, 0);
    }

    #[test]
    fn dimension_columns() {
        let iwahori: Vec<u32> = vec![8, 4, 4, 4, 4, 1, 3, 3, 1, 2, 2, 2, 2, 3, 1, 1, 3];
        let siegel: Vec<u32> = vec![4, 1, 3, 2, 2, 0, 2, 1, 1, 0, 1, 1, 2, 1, 1, 0, 2];
        let klingen: Vec<u32> = vec![4, 2, 2, 1, 3, 0, 1, 2, 1, 1, 1, 1, 1, 1, 0, 1, 2];
        let spherical: Vec<u32> = vec![1, 0, 1, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1];
        for (i, label) in CaseLabel::GSP4_ALL.iter().enumerate() {
            let rep = sym(*label);
            assert_eq!(
                eigen_system(&rep, ParabolicKind::Borel).unwrap().dim_fixed,
                iwahori[i],
                "iwahori dim for {}",
                label.as_str()
            );
            assert_eq!(
                eigen_system(&rep, ParabolicKind::Siegel).unwrap().dim_fixed,
                siegel[i],
                "siegel dim for {}",
                label.as_str()
            );
            assert_eq!(
                eigen_system(&rep, ParabolicKind::Klingen).unwrap().dim_fixed,
                klingen[i],
                "klingen dim for {}",
                label.as_str()
            );
            assert_eq!(rep.dim_spherical(), spherical[i]);
        }
    }

    #[test]
    fn constituent_partition_all_families_all_levels() {
        for family in CaseLabel::GSP4_FAMILIES {
            for parahoric in [
                ParabolicKind::Borel,
                ParabolicKind::Siegel,
                ParabolicKind::Klingen,
            ] {
                assert!(
                    family_partition_holds(family, parahoric).unwrap(),
                    "partition fails for {:?} at {}",
                    family,
                    parahoric.as_str()
                );
            }
        }
    }

    #[test]
    fn iwahori_second_coordinate_divisible_by_first() {
        for label in CaseLabel::GSP4_ALL {
            let rep = sym(label);
            let satake = rep.satake();
            let sys = eigen_system(&rep, ParabolicKind::Borel).unwrap();
            for (tuple, _) in &sys.tuples {
                let quotient = tuple[1]
                    .monomial_quotient(&tuple[0])
                    .expect("eigen-tuples are monomials");
                assert!(
                    satake.iter().any(|s| s == &quotient),
                    "second/first = {} is not a Satake parameter in case {}",
                    quotient,
                    label.as_str()
                );
            }
        }
    }

    #[test]
    fn gl2_eigen_set_and_nonsemisimple_flag() {
        let rep = sym(CaseLabel::Gl2Ps);
        let sys = eigen_system(&rep, ParabolicKind::Borel).unwrap();
        let x1 = SymScalar::var(Var::X1);
        let x2 = SymScalar::var(Var::X2);
        let mut expected = vec![(vec![x2], 1u32), (vec![x1.clone()], 1)];
        expected.sort();
        assert_eq!(sys.tuples, expected);
        assert!(rep.notes.is_empty());

        let merged = classify(GroupName::Gl2, CaseLabel::Gl2Ps, vec![x1.clone(), x1.clone()])
            .unwrap();
        assert!(merged.notes.iter().any(|n| n.contains("non-semisimple")));
        let sys = eigen_system(&merged, ParabolicKind::Borel).unwrap();
        assert_eq!(sys.tuples, vec![(vec![x1], 2)]);
    }

    #[test]
    fn classify_iib_relations() {
        let rep = sym(CaseLabel::IIb);
        // chi1 = nu^{1/2} chi = v * x1.
        assert_eq!(rep.chi1(), &SymScalar::monomial(rat(1), [1, 0, 0, 1]));
        assert_eq!(rep.chi2(), &SymScalar::monomial(rat(1), [1, 0, 0, -1]));
        assert!(rep
            .constraints
            .iter()
            .any(|c| c.description == "chi^2 != nu"));
        assert!(rep
            .constraints
            .iter()
            .any(|c| c.description == "chi != nu^(3/2)"));
    }

    #[test]
    fn classify_iva_relations() {
        let rep = sym(CaseLabel::IVa);
        assert_eq!(rep.chi1(), &SymScalar::q_pow(2));
        assert_eq!(rep.chi2(), &SymScalar::q());
        assert_eq!(
            rep.sigma(),
            &SymScalar::monomial(rat(1), [0, 0, 1, -3])
        );
    }

    #[test]
    fn classify_rejects_bad_input() {
        assert!(classify(GroupName::Gl2, CaseLabel::I, vec![]).is_err());
        assert!(classify(
            GroupName::Gsp4,
            CaseLabel::I,
            vec![SymScalar::one()]
        )
        .is_err());
        assert!("IIq".parse::<CaseLabel>().is_err());
        assert_eq!("iib".parse::<CaseLabel>().unwrap(), CaseLabel::IIb);
    }

    #[test]
    fn constraint_check_at_bindings() {
        // Group I with chi1 = chi2 violates distinctness.
        let rep = sym(CaseLabel::I);
        let b = Bindings::new()
            .bind_rat(Var::X1, rat(5))
            .bind_rat(Var::X2, rat(5))
            .bind_rat(Var::S, rat(1))
            .bind_rat(Var::V, rat(3));
        let report = check_constraints(&rep, &b).unwrap();
        assert!(!report.ok);
        assert!(report.violated.iter().any(|d| d == "chi1 != chi2"));

        // Group IIb with chi = 2, q = 3 satisfies everything.
        let rep = sym(CaseLabel::IIb);
        let ring = QuadRing::new(rat(0), rat(-3));
        let b = Bindings::new()
            .bind_rat(Var::X1, rat(2))
            .bind_rat(Var::S, rat(7))
            .bind(Var::V, QuadExtElem::root_of(ring));
        let report = check_constraints(&rep, &b).unwrap();
        assert!(report.ok, "violations: {:?}", report.violated);

        // Group V: no constraints at all.
        let rep = sym(CaseLabel::Va);
        assert!(rep.constraints.is_empty() && rep.distinctness.is_empty());
    }

    #[test]
    fn u21_reducibility_screen() {
        let ext = U21Extension::Unramified;
        let q_e = ext.q_e();
        assert_eq!(u21_reducibility(&q_e, ext), U21Reducibility::Case1);
        assert_eq!(
            u21_reducibility(&q_e.inverse().unwrap(), ext),
            U21Reducibility::Case1
        );
        let minus_q = -SymScalar::q();
        assert_eq!(u21_reducibility(&minus_q, ext), U21Reducibility::Case2);
        assert_eq!(
            u21_reducibility(&SymScalar::one(), ext),
            U21Reducibility::Irreducible
        );
        assert_eq!(
            u21_reducibility(&SymScalar::var(Var::X1), ext),
            U21Reducibility::Irreducible
        );
        // Ramified: chi(ϖ_E) = -1 restricts trivially but chi is nontrivial.
        let ram = U21Extension::Ramified;
        assert_eq!(
            u21_reducibility(&-SymScalar::one(), ram),
            U21Reducibility::Case3
        );
        assert_eq!(
            u21_reducibility(&-SymScalar::one(), ext),
            U21Reducibility::Irreducible
        );
    }

    #[test]
    fn u21_eigen_systems() {
        let u = SymScalar::var(Var::X1);
        let sys = u21_eigen_system(u.clone(), U21Extension::Unramified).unwrap();
        let mut expected = vec![
            (vec![u.clone()], 1u32),
            (vec![u.inverse().unwrap()], 1),
        ];
        expected.sort();
        assert_eq!(sys.tuples, expected);

        let ram = u21_eigen_system(u.clone(), U21Extension::Ramified).unwrap();
        let mut expected = vec![
            (vec![u], 1u32),
            (vec![SymScalar::var(Var::X2).inverse().unwrap()], 1),
        ];
        expected.sort();
        assert_eq!(ram.tuples, expected);

        // chi trivial: irreducible, eigenvalues {1, 1}.
        let sys = u21_eigen_system(SymScalar::one(), U21Extension::Unramified).unwrap();
        assert_eq!(sys.tuples, vec![(vec![SymScalar::one()], 2)]);

        // chi = |.|_E is reducible and rejected.
        let q_e = U21Extension::Unramified.q_e();
        assert!(matches!(
            u21_eigen_system(q_e.inverse().unwrap(), U21Extension::Unramified),
            Err(Error::NotTabulated(_))
        ));
    }

    #[test]
    fn satake_labels() {
        let rep = sym(CaseLabel::I);
        let satake = rep.satake();
        assert_eq!(
            satake_label_deg1(&satake[0], &satake).unwrap(),
            "alpha"
        );
        let ab = &satake[0] * &satake[1];
        assert_eq!(satake_label_deg2(&ab, &satake).unwrap(), "alpha*beta");
        // Group VI collapse: gamma^2 preferred over gamma*delta.
        let rep = sym(CaseLabel::VIa);
        let satake = rep.satake();
        let gg = &satake[2] * &satake[2];
        assert_eq!(satake_label_deg2(&gg, &satake).unwrap(), "gamma^2");
        let aa = &satake[0] * &satake[0];
        assert_eq!(satake_label_deg2(&aa, &satake).unwrap(), "alpha^2");
        // Round-trip through the parser.
        let v = satake_monomial_value("alpha*beta", &rep.satake()).unwrap();
        assert_eq!(v, &rep.satake()[0] * &rep.satake()[1]);
    }

    #[test]
    fn table_documents_have_all_rows() {
        for parahoric in [
            ParabolicKind::Borel,
            ParabolicKind::Siegel,
            ParabolicKind::Klingen,
        ] {
            let doc = table_document(parahoric).unwrap();
            assert_eq!(doc.rows.len(), 17);
            let json = doc.to_json();
            let back: TableDocument = serde_json::from_str(&json).unwrap();
            assert_eq!(back, doc);
        }
    }
}
