//! Closed-form schemes for three families of m-ary partition functions,
//! kept independent of the derivation pipeline so each can check the other.
//!
//! * A: `B(q) = B(q^m) / (1 - q)`, section 0, `P = sum_{j<m} (j+1) q^j`, `E = 0`.
//! * B: `C(q) = 1 + q C(q^m) / (1 - q)`, section 1, `P = sum_{j<m} j q^j`,
//!   `E = 1/(1 - q)`.
//! * C: `C(q) = C(q^m) / ((1 - q)(1 - q^2))`, section `m - 1`, `E = 0`, with
//!   `P` given by [`prop_c_nes`]; no scheme exists for `m = 2 (mod 4)`.

use std::fmt;
use std::str::FromStr;

use crate::derive::FunctionalEquation;
use crate::error::{Error, Result};
use crate::modular::ModRatFun;
use crate::poly::Poly;
use crate::ratfun::RatFun;

/// Which of the three families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KnownLabel {
    PropA,
    PropB,
    PropC,
}

impl FromStr for KnownLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(KnownLabel::PropA),
            "B" | "b" => Ok(KnownLabel::PropB),
            "C" | "c" => Ok(KnownLabel::PropC),
            other => Err(Error::InvalidArgument(format!("unknown family '{other}', expected A, B or C"))),
        }
    }
}

impl fmt::Display for KnownLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            KnownLabel::PropA => "A",
            KnownLabel::PropB => "B",
            KnownLabel::PropC => "C",
        })
    }
}

/// A closed-form scheme, or the statement that none exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnownScheme {
    pub label: KnownLabel,
    pub m: usize,
    pub i: usize,
    /// Human-readable exact form of `E`.
    pub e_text: &'static str,
    /// `None` for the no-miracle verdict.
    pub scheme: Option<(ModRatFun, Vec<u64>)>,
}

impl KnownScheme {
    pub fn is_miracle(&self) -> bool {
        self.scheme.is_some()
    }
}

fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn check_m(m: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("m must be at least 2, got {m}")));
    }
    Ok(())
}

/// `sum_{j<m} (j+1) q^j` reduced mod `m`.
pub fn prop_a_poly(m: usize) -> Vec<u64> {
    let mu = m as u64;
    trim((0..mu).map(|j| (j + 1) % mu).collect())
}

/// `E = 1/(1 - q)` and `P = sum_{j<m} j q^j`, both mod `m`.
pub fn prop_b_scheme(m: usize) -> (ModRatFun, Vec<u64>) {
    let mu = m as u64;
    let e = ModRatFun::new(vec![1], vec![1, mu - 1], mu).expect("valid residues");
    (e, trim((0..mu).collect()))
}

/// `floor((j+2)(j+4)(2j+3) / 24)`.
pub fn a002623(j: u64) -> u128 {
    let j = j as u128;
    (j + 2) * (j + 4) * (2 * j + 3) / 24
}

/// The polynomial `Nes(q)` mod `m`, or `None` when `m = 2 (mod 4)`.
///
/// * odd `m`: `(1 + q) sum_{j=0}^{m-2} C(j+2, 2) q^{2j}`
/// * `4 | m`: `sum_{j=0}^{m-3} a002623(j) (q^j + q^{2m-5-j})`, a palindrome
///   of degree `2m - 5`
///
/// The mirror exponent `2m - 4 - j` (degree `2m - 4`) is refuted by the
/// oracle already at `m = 4`; see [`prop_c_nes_mirror`].
pub fn prop_c_nes(m: usize) -> Option<Vec<u64>> {
    prop_c_nes_with_mirror(m, 5)
}

/// The divisible-by-4 closed form with mirror exponent `2m - 4 - j`, kept
/// so tests can show it is not a valid congruence. Equal to [`prop_c_nes`]
/// for odd `m`.
pub fn prop_c_nes_mirror(m: usize) -> Option<Vec<u64>> {
    prop_c_nes_with_mirror(m, 4)
}

fn prop_c_nes_with_mirror(m: usize, offset: usize) -> Option<Vec<u64>> {
    let mu = m as u128;
    if m % 4 == 2 {
        return None;
    }
    let mut coeffs = vec![0u128; 2 * m];
    if m % 2 == 1 {
        for j in 0..=(m - 2) {
            let jj = j as u128;
            let binom = (jj + 2) * (jj + 1) / 2;
            coeffs[2 * j] += binom;
            coeffs[2 * j + 1] += binom;
        }
    } else {
        for j in 0..=(m - 3) {
            let a = a002623(j as u64);
            coeffs[j] += a;
            coeffs[2 * m - offset - j] += a;
        }
    }
    Some(trim(coeffs.into_iter().map(|c| (c % mu) as u64).collect()))
}

/// Product of `(d + 1)` over the base-`m` digits `d` of `n`, mod `m`.
pub fn digit_product_prop_a(n: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    let mut x = n;
    while x > 0 {
        let d = x % m;
        acc = ((acc as u128 * (d + 1) as u128) % m as u128) as u64;
        x /= m;
    }
    acc
}

/// The functional equation behind each family, with the section index.
pub fn fixture(label: KnownLabel, m: usize) -> Result<(FunctionalEquation, usize)> {
    check_m(m)?;
    let one_minus_q = Poly::from_ints([1, -1]);
    let (s, r, i, s_text, r_text) = match label {
        KnownLabel::PropA => (
            RatFun::zero(),
            RatFun::new(Poly::one(), one_minus_q)?,
            0,
            "0",
            "1/(1-q)",
        ),
        KnownLabel::PropB => (
            RatFun::one(),
            RatFun::new(Poly::from_ints([0, 1]), one_minus_q)?,
            1,
            "1",
            "q/(1-q)",
        ),
        KnownLabel::PropC => (
            RatFun::zero(),
            RatFun::new(Poly::one(), &one_minus_q * &Poly::from_ints([1, 0, -1]))?,
            m - 1,
            "0",
            "1/((1-q)*(1-q^2))",
        ),
    };
    Ok((FunctionalEquation::new(s, r, m, None)?.with_sources(s_text, r_text), i))
}

/// Closed-form scheme for one family and modulus.
pub fn known_scheme(label: KnownLabel, m: usize) -> Result<KnownScheme> {
    check_m(m)?;
    let mu = m as u64;
    let (i, e_text, scheme) = match label {
        KnownLabel::PropA => (0, "0", Some((ModRatFun::zero(mu), prop_a_poly(m)))),
        KnownLabel::PropB => (1, "1/(1 - q)", Some(prop_b_scheme(m))),
        KnownLabel::PropC => (m - 1, "0", prop_c_nes(m).map(|p| (ModRatFun::zero(mu), p))),
    };
    Ok(KnownScheme { label, m, i, e_text, scheme })
}
