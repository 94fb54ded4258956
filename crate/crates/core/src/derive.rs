//! Derivation of congruence schemes for the sections of `F = S + R F(q^m)`.
//!
//! Sectioning the equation gives `F_i(q) = S_i(q) + R_i(q) F(q)`. Eliminating
//! `F` yields a new equation of the same shape for the section,
//!
//! ```text
//! F_i(q) = A(q) + G(q) F_i(q^m),
//! G = R R_i / R_i(q^m),
//! A = S_i + R_i S - R R_i S_i(q^m) / R_i(q^m).
//! ```
//!
//! Splitting `G` into a polynomial and a proper part, the scheme exists when
//! the proper part vanishes modulo `m`; then `F_i = A + P F_i(q^m) (mod m)`
//! with `P` the polynomial part, and coefficients follow from base-m digits.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::modular::{poly_mod, rat_mod, ModRatFun};
use crate::msection::msect;
use crate::oracle;
use crate::poly::{Poly, Rat};
use crate::ratfun::RatFun;

/// `F(q) = S(q) + R(q) F(q^m)` together with the value `F(0)` that singles
/// out one solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionalEquation {
    s: RatFun,
    r: RatFun,
    m: usize,
    f0: Rat,
    explicit_f0: Option<Rat>,
    s_text: String,
    r_text: String,
}

impl FunctionalEquation {
    /// Builds the equation and resolves `F(0)`:
    ///
    /// * `R(0) != 1`: `F(0) = S(0) / (1 - R(0))`; a given `f0` must agree.
    /// * `R(0) = 1`, `S(0) != 0`: no solution.
    /// * `R(0) = 1`, `S = 0`: `F(0) = f0`, defaulting to 1.
    /// * `R(0) = 1`, `S != 0`, `S(0) = 0`: `f0` is required.
    pub fn new(s: RatFun, r: RatFun, m: usize, f0: Option<Rat>) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidArgument(format!("m must be at least 2, got {m}")));
        }
        let r0 = r.constant_term();
        let s0 = s.constant_term();
        let resolved = if !r0.is_one() {
            let forced = &s0 / (Rat::one() - &r0);
            if let Some(given) = &f0 {
                if *given != forced {
                    return Err(Error::InvalidArgument(format!(
                        "f0 = {given} contradicts the forced value {forced}"
                    )));
                }
            }
            forced
        } else if !s0.is_zero() {
            return Err(Error::NoSolution);
        } else if s.is_zero() {
            f0.clone().unwrap_or_else(Rat::one)
        } else {
            f0.clone().ok_or(Error::AmbiguousNormalization)?
        };
        let s_text = s.to_string();
        let r_text = r.to_string();
        Ok(FunctionalEquation {
            s,
            r,
            m,
            f0: resolved,
            explicit_f0: f0,
            s_text,
            r_text,
        })
    }

    /// Record the user's spelling of `S` and `R` for provenance.
    pub fn with_sources(mut self, s_text: impl Into<String>, r_text: impl Into<String>) -> Self {
        self.s_text = s_text.into();
        self.r_text = r_text.into();
        self
    }

    pub fn s(&self) -> &RatFun {
        &self.s
    }

    pub fn r(&self) -> &RatFun {
        &self.r
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Resolved `F(0)`.
    pub fn f0(&self) -> &Rat {
        &self.f0
    }

    /// `f0` as supplied by the caller, if any.
    pub fn explicit_f0(&self) -> Option<&Rat> {
        self.explicit_f0.as_ref()
    }

    pub fn s_text(&self) -> &str {
        &self.s_text
    }

    pub fn r_text(&self) -> &str {
        &self.r_text
    }
}

/// `F_i(q) = A(q) + G(q) F_i(q^m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedFE {
    pub a: RatFun,
    pub g: RatFun,
    pub m: usize,
    pub i: usize,
}

/// Where a scheme came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub s: String,
    pub r: String,
    pub f0: Option<Rat>,
    pub a: RatFun,
    pub g: RatFun,
}

/// Certified data for `F_i(q) = E(q) + P(q) F_i(q^m) (mod m)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scheme {
    m: usize,
    i: usize,
    e: ModRatFun,
    p: Vec<u64>,
    seed: u64,
    provenance: Option<Provenance>,
}

impl Scheme {
    pub fn new(
        m: usize,
        i: usize,
        e: ModRatFun,
        p: Vec<u64>,
        seed: u64,
        provenance: Option<Provenance>,
    ) -> Result<Self> {
        let mu = m as u64;
        if m < 2 || i >= m {
            return Err(Error::InvalidArgument(format!("need m >= 2 and i < m, got m = {m}, i = {i}")));
        }
        if e.modulus() != mu {
            return Err(Error::InvalidArgument("E has a different modulus".into()));
        }
        if seed >= mu || p.iter().any(|&c| c >= mu) {
            return Err(Error::InvalidArgument(format!("residue out of range for m = {m}")));
        }
        if p.last() == Some(&0) {
            return Err(Error::InvalidArgument("P has a trailing zero coefficient".into()));
        }
        Ok(Scheme { m, i, e, p, seed, provenance })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn i(&self) -> usize {
        self.i
    }

    pub fn e(&self) -> &ModRatFun {
        &self.e
    }

    pub fn p(&self) -> &[u64] {
        &self.p
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    /// `None` when `P = 0`.
    pub fn deg_p(&self) -> Option<usize> {
        self.p.len().checked_sub(1)
    }

    /// Number of recursion children per node: `floor(deg P / m) + 1`.
    pub fn window(&self) -> usize {
        self.deg_p().map_or(0, |d| d / self.m + 1)
    }
}

/// The proper part of `G` did not vanish mod `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NoMiracle {
    pub m: usize,
    pub i: usize,
    pub derived: DerivedFE,
    pub polynomial_part: Poly,
    pub proper_part: RatFun,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Derivation {
    Scheme(Scheme),
    NoMiracle(NoMiracle),
}

impl Derivation {
    pub fn scheme(&self) -> Option<&Scheme> {
        match self {
            Derivation::Scheme(s) => Some(s),
            Derivation::NoMiracle(_) => None,
        }
    }

    pub fn into_scheme(self) -> Option<Scheme> {
        match self {
            Derivation::Scheme(s) => Some(s),
            Derivation::NoMiracle(_) => None,
        }
    }
}

/// Equation for the `i`-th section.
pub fn section_fe(fe: &FunctionalEquation, i: usize) -> Result<DerivedFE> {
    let m = fe.m;
    if i >= m {
        return Err(Error::InvalidArgument(format!("section index {i} not below m = {m}")));
    }
    let r_i = msect(&fe.r, m, i)?;
    if r_i.is_zero() {
        return Err(Error::SectionVanishes { m: m as u64, i: i as u64 });
    }
    let s_i = msect(&fe.s, m, i)?;
    let r_i_m = r_i.substitute_power(m);
    let r_ri = &fe.r * &r_i;
    let g = r_ri.checked_div(&r_i_m)?;
    let correction = (&r_ri * &s_i.substitute_power(m)).checked_div(&r_i_m)?;
    let a = &(&s_i + &(&r_i * &fe.s)) - &correction;
    Ok(DerivedFE { a, g, m, i })
}

/// `G = polynomial part + proper part` with `deg num < deg den` in the
/// proper part.
pub fn proper_split(g: &RatFun) -> (Poly, RatFun) {
    let (quot, rem) = g.num().divmod(g.den()).expect("denominator is nonzero");
    let proper = RatFun::new(rem, g.den().clone()).expect("same denominator as G");
    (quot, proper)
}

/// Numerator and denominator of `f` over `Z/m`, with `den(0) = 1`.
pub fn reduce_ratfun_mod(f: &RatFun, m: u64) -> Result<ModRatFun> {
    ModRatFun::from_ratfun(f, m)
}

/// Runs the full pipeline for section `i`.
///
/// Errors mean the question cannot be decided in this representation; a
/// decided negative answer is `Ok(Derivation::NoMiracle)`.
pub fn derive_scheme(fe: &FunctionalEquation, i: usize) -> Result<Derivation> {
    let m = fe.m;
    let mu = m as u64;
    let derived = section_fe(fe, i)?;
    let (poly_part, proper) = proper_split(&derived.g);
    let proper_mod = reduce_ratfun_mod(&proper, mu)?;
    if !proper_mod.is_zero() {
        return Ok(Derivation::NoMiracle(NoMiracle {
            m,
            i,
            derived,
            polynomial_part: poly_part,
            proper_part: proper,
        }));
    }
    let e = reduce_ratfun_mod(&derived.a, mu)?;
    let p = poly_mod(&poly_part, mu)?;
    let prefix = oracle::expand_fe(fe, i + 1)?;
    let seed = rat_mod(&prefix.coeffs[i], mu)?;
    let provenance = Provenance {
        s: fe.s_text.clone(),
        r: fe.r_text.clone(),
        f0: fe.explicit_f0.clone(),
        a: derived.a,
        g: derived.g,
    };
    Scheme::new(m, i, e, p, seed, Some(provenance)).map(Derivation::Scheme)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c.iter().copied())
    }

    fn rf(n: &[i64], d: &[i64]) -> RatFun {
        RatFun::new(p(n), p(d)).unwrap()
    }

    fn fe(s: RatFun, r: RatFun, m: usize) -> FunctionalEquation {
        FunctionalEquation::new(s, r, m, None).unwrap()
    }

    #[test]
    fn normalization_rules() {
        let geo = rf(&[1], &[1, -1]);
        assert_eq!(fe(RatFun::zero(), geo.clone(), 2).f0(), &Rat::one());
        assert_eq!(
            fe(RatFun::one(), rf(&[0, 1], &[1, -1]), 2).f0(),
            &Rat::one()
        );
        assert_eq!(
            FunctionalEquation::new(RatFun::from_poly(p(&[0, 1])), geo.clone(), 2, None),
            Err(Error::AmbiguousNormalization)
        );
        assert_eq!(
            FunctionalEquation::new(RatFun::one(), geo.clone(), 2, None),
            Err(Error::NoSolution)
        );
        let explicit =
            FunctionalEquation::new(RatFun::from_poly(p(&[0, 1])), geo, 2, Some(Rat::from_integer(3.into())))
                .unwrap();
        assert_eq!(explicit.f0(), &Rat::from_integer(3.into()));
        // R(0) = 2: F(0) = S(0) / (1 - 2)
        let forced = fe(RatFun::from_int(5), RatFun::from_int(2), 3);
        assert_eq!(forced.f0(), &Rat::from_integer((-5).into()));
    }

    #[test]
    fn section_equation_for_binary_partitions() {
        let d = section_fe(&fe(RatFun::zero(), rf(&[1], &[1, -1]), 3), 0).unwrap();
        assert!(d.a.is_zero());
        assert_eq!(d.g, rf(&[1, 0, 0, -1], &[1, -2, 1]));
    }

    #[test]
    fn section_equation_for_no_gap_partitions() {
        let d = section_fe(&fe(RatFun::one(), rf(&[0, 1], &[1, -1]), 3), 1).unwrap();
        assert_eq!(d.a, rf(&[1], &[1, -1]));
        assert_eq!(d.g, rf(&[0, 1, 0, 0, -1], &[1, -2, 1]));
    }

    #[test]
    fn vanishing_section() {
        let e = fe(RatFun::zero(), rf(&[1], &[1, 0, -1]), 2);
        assert_eq!(section_fe(&e, 1), Err(Error::SectionVanishes { m: 2, i: 1 }));
    }

    #[test]
    fn split_examples() {
        let (poly, proper) = proper_split(&rf(&[1, 0, 0, -1], &[1, -2, 1]));
        assert_eq!(poly, p(&[-2, -1]));
        assert_eq!(proper, rf(&[3], &[1, -1]));

        let (poly, proper) = proper_split(&RatFun::from_poly(p(&[1, 2, 3])));
        assert_eq!(poly, p(&[1, 2, 3]));
        assert!(proper.is_zero());

        let (poly, proper) = proper_split(&rf(&[0, 1, 0, 0, 0, -1], &[1, -2, 1]));
        assert_eq!(poly, p(&[-4, -3, -2, -1]));
        assert_eq!(proper, rf(&[4], &[1, -1]));
    }

    #[test]
    fn scheme_for_binary_partitions_mod_3() {
        let d = derive_scheme(&fe(RatFun::zero(), rf(&[1], &[1, -1]), 3), 0).unwrap();
        let s = d.scheme().expect("miracle");
        assert!(s.e().is_zero());
        assert_eq!(s.p(), &[1, 2]);
        assert_eq!(s.seed(), 1);
        assert_eq!(s.window(), 1);
    }

    #[test]
    fn scheme_for_no_gap_partitions_mod_3() {
        let d = derive_scheme(&fe(RatFun::one(), rf(&[0, 1], &[1, -1]), 3), 1).unwrap();
        let s = d.scheme().expect("miracle");
        assert_eq!((s.e().num(), s.e().den()), (&[1u64][..], &[1u64, 2][..]));
        assert_eq!(s.p(), &[0, 1, 2]);
        assert_eq!(s.seed(), 1);
    }

    #[test]
    fn no_miracle_for_m_6() {
        let r = RatFun::new(p(&[1]), &p(&[1, -1]) * &p(&[1, 0, -1])).unwrap();
        let d = derive_scheme(&fe(RatFun::zero(), r, 6), 5).unwrap();
        assert!(matches!(d, Derivation::NoMiracle(_)));
    }

    #[test]
    fn scheme_validation() {
        let e = ModRatFun::zero(3);
        assert!(Scheme::new(3, 0, e.clone(), vec![1, 2], 1, None).is_ok());
        assert!(Scheme::new(3, 3, e.clone(), vec![1], 1, None).is_err());
        assert!(Scheme::new(3, 0, e.clone(), vec![1, 0], 1, None).is_err());
        assert!(Scheme::new(3, 0, e, vec![1], 3, None).is_err());
    }
}
