//! Brute-force ground truth: exact truncated expansions.
//!
//! Nothing here depends on sections or on the derived equations, so it can
//! arbitrate between them.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::derive::{FunctionalEquation, Scheme};
use crate::error::{Error, Result};
use crate::modular::{rat_mod, scheme_coeff_block};
use crate::poly::{Poly, Rat};
use crate::ratfun::RatFun;

/// A truncated power series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeriesPrefix {
    pub coeffs: Vec<Rat>,
    pub origin: String,
}

impl SeriesPrefix {
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficients reduced mod `m`.
    pub fn residues(&self, m: u64) -> Result<Vec<u64>> {
        self.coeffs.iter().map(|c| rat_mod(c, m)).collect()
    }
}

/// First `n` coefficients of the solution of `fe`.
///
/// Clearing the denominator of `R` turns the equation into
/// `Rd F = Rd S + Rn F(q^m)`, a recurrence whose right side only looks at
/// indices below the one being computed.
pub fn expand_fe(fe: &FunctionalEquation, n: usize) -> Result<SeriesPrefix> {
    let m = fe.m();
    let rn = fe.r().num();
    let rd = fe.r().den().coeffs();
    let forced = (&RatFun::from_poly(fe.r().den().clone()) * fe.s()).series_prefix(n);
    let inv0 = rd[0].recip();
    let mut f: Vec<Rat> = Vec::with_capacity(n);
    if n > 0 {
        f.push(fe.f0().clone());
    }
    for k in 1..n {
        let mut acc = forced[k].clone();
        for (j, c) in rn.coeffs().iter().enumerate().take(k + 1) {
            let idx = k - j;
            if !c.is_zero() && idx % m == 0 {
                acc += c * &f[idx / m];
            }
        }
        for (j, d) in rd.iter().enumerate().skip(1).take(k) {
            if !d.is_zero() {
                acc -= d * &f[k - j];
            }
        }
        f.push(acc * &inv0);
    }
    Ok(SeriesPrefix {
        coeffs: f,
        origin: format!("F = ({}) + ({}) F(q^{m}), F(0) = {}", fe.s(), fe.r(), fe.f0()),
    })
}

/// Entries `p[m n + i]` for every `m n + i` inside the prefix.
pub fn section_prefix(p: &SeriesPrefix, m: usize, i: usize) -> Result<SeriesPrefix> {
    if m < 2 || i >= m {
        return Err(Error::InvalidArgument(format!("need m >= 2 and i < m, got m = {m}, i = {i}")));
    }
    Ok(SeriesPrefix {
        coeffs: p.coeffs.iter().skip(i).step_by(m).cloned().collect(),
        origin: format!("section {i} mod {m} of [{}]", p.origin),
    })
}

/// First `n` coefficients of `prod_{k >= 0} R(q^{m^k})`.
pub fn expand_infinite_product(r: &RatFun, m: usize, n: usize) -> Result<SeriesPrefix> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("m must be at least 2, got {m}")));
    }
    let r0 = r.constant_term();
    if !r0.is_one() {
        return Err(Error::ProductDiverges(r0.to_string()));
    }
    let mut acc = vec![Rat::zero(); n];
    if n > 0 {
        acc[0] = Rat::one();
    }
    let mut step = 1usize;
    while step < n.max(1) {
        acc = mul_spread(&acc, r.num(), step);
        acc = div_spread(&acc, r.den(), step);
        step = match step.checked_mul(m) {
            Some(s) => s,
            None => break,
        };
    }
    Ok(SeriesPrefix {
        coeffs: acc,
        origin: format!("prod_k ({})(q^({m}^k))", r),
    })
}

/// `a(q) * p(q^step)`, truncated to the length of `a`.
fn mul_spread(a: &[Rat], p: &Poly, step: usize) -> Vec<Rat> {
    let n = a.len();
    let mut out = vec![Rat::zero(); n];
    for (j, c) in p.coeffs().iter().enumerate() {
        let shift = j * step;
        if shift >= n {
            break;
        }
        if c.is_zero() {
            continue;
        }
        for k in shift..n {
            if !a[k - shift].is_zero() {
                out[k] += c * &a[k - shift];
            }
        }
    }
    out
}

/// `a(q) / d(q^step)`, with `d(0) != 0`.
fn div_spread(a: &[Rat], d: &Poly, step: usize) -> Vec<Rat> {
    let dc = d.coeffs();
    let inv0 = dc[0].recip();
    let mut out: Vec<Rat> = Vec::with_capacity(a.len());
    for k in 0..a.len() {
        let mut acc = a[k].clone();
        for (j, c) in dc.iter().enumerate().skip(1) {
            let shift = j * step;
            if shift > k {
                break;
            }
            if !c.is_zero() {
                acc -= c * &out[k - shift];
            }
        }
        out.push(acc * &inv0);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub index: usize,
    pub expected: u64,
    pub got: u64,
}

/// Outcome of comparing a scheme against the oracle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub n: usize,
    pub matched: usize,
    pub first_mismatch: Option<Mismatch>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.first_mismatch.is_none()
    }
}

/// Compare the scheme's residues for indices `0..n` with the oracle's.
pub fn verify_scheme(
    fe: &FunctionalEquation,
    i: usize,
    scheme: &Scheme,
    n: usize,
) -> Result<VerificationReport> {
    let m = fe.m();
    if scheme.m() != m || scheme.i() != i {
        return Err(Error::InvalidArgument(format!(
            "scheme is for (m, i) = ({}, {}), asked to verify ({m}, {i})",
            scheme.m(),
            scheme.i()
        )));
    }
    let full = expand_fe(fe, m * n + i)?;
    let expected = section_prefix(&full, m, i)?.residues(m as u64)?;
    let got = scheme_coeff_block(scheme, 0, n);
    let mut matched = 0;
    let mut first_mismatch = None;
    for (index, (&e, &g)) in expected.iter().zip(&got).enumerate() {
        if e == g {
            matched += 1;
        } else if first_mismatch.is_none() {
            first_mismatch = Some(Mismatch { index, expected: e, got: g });
        }
    }
    Ok(VerificationReport { n, matched, first_mismatch })
}
