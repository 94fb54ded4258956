//! m-sections of rational functions.
//!
//! Every rational `f` decomposes uniquely as `f(q) = sum_{i<m} q^i f_i(q^m)`.
//! The sections share the denominator `D` produced by [`denominator_norm`]:
//! if `Q(q) = c * prod (1 - a_j q)` then `D(x) = prod (1 - a_j^m x)`, so that
//! `Q(q)` divides `D(q^m)`. `D` is obtained as the reversed characteristic
//! polynomial of the m-th power of the companion matrix of `Q`, which keeps
//! the whole computation inside the rationals.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{Poly, Rat};
use crate::ratfun::RatFun;

/// The `m` sections of a rational function, `sections[i] = f_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectionSet {
    pub m: usize,
    pub sections: Vec<RatFun>,
}

impl SectionSet {
    /// `sum_i q^i f_i(q^m)`.
    pub fn reconstruct(&self) -> RatFun {
        let mut acc = RatFun::zero();
        for (i, s) in self.sections.iter().enumerate() {
            let term = &RatFun::from_poly(Poly::monomial(Rat::one(), i)) * &s.substitute_power(self.m);
            acc = &acc + &term;
        }
        acc
    }
}

type Matrix = Vec<Vec<Rat>>;

fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|r| (0..n).map(|c| if r == c { Rat::one() } else { Rat::zero() }).collect())
        .collect()
}

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    let mut out = vec![vec![Rat::zero(); n]; n];
    for (r, row) in a.iter().enumerate() {
        for (k, x) in row.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for c in 0..n {
                out[r][c] += x * &b[k][c];
            }
        }
    }
    out
}

fn mat_pow(a: &Matrix, mut e: usize) -> Matrix {
    let mut base = a.clone();
    let mut acc = identity(a.len());
    while e > 0 {
        if e & 1 == 1 {
            acc = mat_mul(&acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = mat_mul(&base, &base);
        }
    }
    acc
}

/// Characteristic polynomial `det(xI - A)` by Faddeev-LeVerrier, as
/// coefficients lowest degree first (monic, length `n + 1`).
fn char_poly(a: &Matrix) -> Vec<Rat> {
    let n = a.len();
    let mut coeffs = vec![Rat::zero(); n + 1];
    coeffs[n] = Rat::one();
    let mut aux = vec![vec![Rat::zero(); n]; n];
    for k in 1..=n {
        // aux <- A * aux + c_{n-k+1} I
        let mut next = mat_mul(a, &aux);
        for (d, row) in next.iter_mut().enumerate() {
            row[d] += &coeffs[n - k + 1];
        }
        aux = next;
        let prod = mat_mul(a, &aux);
        let trace: Rat = (0..n).map(|d| prod[d][d].clone()).sum();
        coeffs[n - k] = -trace / Rat::from_integer(k.into());
    }
    coeffs
}

/// Companion matrix of the monic polynomial `x^n + c_{n-1} x^{n-1} + ... + c_0`
/// given by `lower = [c_0, ..., c_{n-1}]`.
fn companion(lower: &[Rat]) -> Matrix {
    let n = lower.len();
    let mut m = vec![vec![Rat::zero(); n]; n];
    for r in 1..n {
        m[r][r - 1] = Rat::one();
    }
    for (r, c) in lower.iter().enumerate() {
        m[r][n - 1] = -c;
    }
    m
}

/// Returns `(D, C)` with `D(q^m) = C(q) * Q(q)` and `D(0) != 0`.
///
/// `D` is normalized to a primitive integer polynomial with `D(0) > 0`.
pub fn denominator_norm(q_poly: &Poly, m: usize) -> Result<(Poly, Poly)> {
    let d = q_poly
        .degree()
        .ok_or_else(|| Error::InvalidArgument("denominator_norm of the zero polynomial".into()))?;
    if q_poly.constant_term().is_zero() {
        return Err(Error::InvalidArgument(
            "denominator_norm needs Q(0) != 0".into(),
        ));
    }
    if m < 2 {
        return Err(Error::InvalidArgument(format!("m must be at least 2, got {m}")));
    }
    let norm = if d == 0 {
        Poly::one()
    } else {
        // Reversal x^d Q(1/x) has the reciprocal roots a_j; make it monic.
        let q0 = q_poly.constant_term();
        let lower: Vec<Rat> = (0..d).map(|k| q_poly.coeff(d - k) / &q0).collect();
        let cp = char_poly(&mat_pow(&companion(&lower), m));
        let reversed: Vec<Rat> = cp.into_iter().rev().collect();
        let raw = Poly::new(reversed);
        raw.scale(&raw.content().recip())
    };
    let (cof, rem) = norm.substitute_power(m).divmod(q_poly)?;
    if !rem.is_zero() {
        return Err(Error::InternalInvariant(format!(
            "{q_poly} does not divide D(q^{m}) for D = {norm}"
        )));
    }
    if norm.constant_term().is_zero() {
        return Err(Error::InternalInvariant(format!("norm polynomial {norm} vanishes at 0")));
    }
    Ok((norm, cof))
}

fn check_m(m: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("m must be at least 2, got {m}")));
    }
    Ok(())
}

/// Numerators `N_0, ..., N_{m-1}` over the common denominator `D`.
fn section_numerators(f: &RatFun, m: usize) -> Result<(Vec<Vec<Rat>>, Poly)> {
    let (norm, cof) = denominator_norm(f.den(), m)?;
    let lifted = f.num() * &cof;
    let mut parts: Vec<Vec<Rat>> = vec![Vec::new(); m];
    for (e, c) in lifted.coeffs().iter().enumerate() {
        let part = &mut parts[e % m];
        let k = e / m;
        if part.len() <= k {
            part.resize(k + 1, Rat::zero());
        }
        part[k] = c.clone();
    }
    Ok((parts, norm))
}

/// Section `f_i` of `f`. A zero section is returned as the zero function.
pub fn msect(f: &RatFun, m: usize, i: usize) -> Result<RatFun> {
    check_m(m)?;
    if i >= m {
        return Err(Error::InvalidArgument(format!("section index {i} not below m = {m}")));
    }
    let (mut parts, norm) = section_numerators(f, m)?;
    RatFun::new(Poly::new(parts.swap_remove(i)), norm)
}

/// All sections of `f`.
pub fn msect_all(f: &RatFun, m: usize) -> Result<SectionSet> {
    check_m(m)?;
    let (parts, norm) = section_numerators(f, m)?;
    let sections = parts
        .into_iter()
        .map(|p| RatFun::new(Poly::new(p), norm.clone()))
        .collect::<Result<Vec<_>>>()?;
    Ok(SectionSet { m, sections })
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

    #[test]
    fn norm_of_one_minus_q() {
        let (d, c) = denominator_norm(&p(&[1, -1]), 3).unwrap();
        assert_eq!(d, p(&[1, -1]));
        assert_eq!(c, p(&[1, 1, 1]));
    }

    #[test]
    fn norm_of_two_factor_denominator() {
        // roots {1, 1, -1} square to {1, 1, 1}
        let q = &p(&[1, -1]) * &p(&[1, 0, -1]);
        let (d, c) = denominator_norm(&q, 2).unwrap();
        assert_eq!(d, p(&[1, -3, 3, -1]));
        assert_eq!(c, &p(&[1, -1]) * &p(&[1, 2, 1]));
        assert_eq!(&c * &q, d.substitute_power(2));
    }

    #[test]
    fn norm_of_non_unit_root() {
        let (d, c) = denominator_norm(&p(&[1, -2]), 2).unwrap();
        assert_eq!(d, p(&[1, -4]));
        assert_eq!(c, p(&[1, 2]));
    }

    #[test]
    fn norm_of_constant() {
        let (d, c) = denominator_norm(&p(&[1]), 4).unwrap();
        assert_eq!(d, Poly::one());
        assert_eq!(c, Poly::one());
    }

    #[test]
    fn sections_of_geometric_series() {
        let f = rf(&[1], &[1, -1]);
        for m in 2..7 {
            assert_eq!(msect(&f, m, 0).unwrap(), f);
        }
        let g = rf(&[0, 1], &[1, -1]);
        assert_eq!(msect(&g, 3, 1).unwrap(), f);
    }

    #[test]
    fn polynomial_sections() {
        let f = RatFun::from_poly(p(&[0, 0, 1]));
        assert_eq!(msect(&f, 2, 0).unwrap(), RatFun::from_poly(p(&[0, 1])));
        assert_eq!(msect(&f, 2, 1).unwrap(), RatFun::zero());
        let one = msect_all(&RatFun::one(), 5).unwrap();
        assert_eq!(one.sections[0], RatFun::one());
        assert!(one.sections[1..].iter().all(RatFun::is_zero));
    }

    #[test]
    fn all_sections_examples() {
        let s = msect_all(&rf(&[1], &[1, -1]), 2).unwrap();
        assert_eq!(s.sections, vec![rf(&[1], &[1, -1]), rf(&[1], &[1, -1])]);
        let s = msect_all(&rf(&[1], &[1, -2, 1]), 2).unwrap();
        assert_eq!(s.sections[0], rf(&[1, 1], &[1, -2, 1]));
        assert_eq!(s.sections[1], rf(&[2], &[1, -2, 1]));
        assert_eq!(s.reconstruct(), rf(&[1], &[1, -2, 1]));
    }

    #[test]
    fn bad_arguments() {
        let f = rf(&[1], &[1, -1]);
        assert!(matches!(msect(&f, 1, 0), Err(Error::InvalidArgument(_))));
        assert!(matches!(msect(&f, 3, 3), Err(Error::InvalidArgument(_))));
    }
}
