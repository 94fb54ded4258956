//! Coefficient extraction modulo `m` in time polynomial in `log n`.
//!
//! Two evaluators live here. [`ModCoeffEvaluator`] computes coefficients of
//! a rational function over `Z/m` by reducing `x^n` modulo the reversed
//! denominator. [`DigitEvaluator`] evaluates a [`Scheme`] by the recursion
//! `f(n) = e(n) + sum_k P[n - m k] f(k)`, where every `k` is at most `n / m`.
//! The modulus may be composite; only `den(0) = 1` is assumed.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use crate::derive::Scheme;
use crate::error::{Error, Result};
use crate::poly::{Poly, Rat};
use crate::ratfun::RatFun;

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

/// Inverse of `a` modulo `m`, if `gcd(a, m) = 1`.
pub(crate) fn inv_mod(a: &BigInt, m: u64) -> Option<u64> {
    let mb = BigInt::from(m);
    let a = a.mod_floor(&mb);
    let ext = a.extended_gcd(&mb);
    if !ext.gcd.is_one() {
        return None;
    }
    Some(to_u64(&ext.x.mod_floor(&mb)))
}

fn to_u64(x: &BigInt) -> u64 {
    u64::try_from(x).expect("residue fits in u64")
}

/// Residue of an exact rational modulo `m`. The reduced denominator must
/// be coprime to `m`.
pub fn rat_mod(c: &Rat, m: u64) -> Result<u64> {
    let mb = BigInt::from(m);
    let num = c.numer().mod_floor(&mb);
    if c.denom().is_one() {
        return Ok(to_u64(&num));
    }
    let inv = inv_mod(c.denom(), m).ok_or_else(|| Error::NonIntegralCoefficient {
        value: c.to_string(),
        m,
    })?;
    Ok(mul_mod(to_u64(&num), inv, m))
}

fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

/// Coefficients of `p` modulo `m`, trailing zeros stripped.
pub fn poly_mod(p: &Poly, m: u64) -> Result<Vec<u64>> {
    let v = p
        .coeffs()
        .iter()
        .map(|c| rat_mod(c, m))
        .collect::<Result<Vec<_>>>()?;
    Ok(trim(v))
}

/// Rational function over `Z/m` with `den(0) = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ModRatFun {
    num: Vec<u64>,
    den: Vec<u64>,
    m: u64,
}

impl ModRatFun {
    /// Validates residues lie in `[0, m)` and `den(0) = 1`.
    pub fn new(num: Vec<u64>, den: Vec<u64>, m: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidArgument(format!("modulus must be at least 2, got {m}")));
        }
        if num.iter().chain(den.iter()).any(|&c| c >= m) {
            return Err(Error::InvalidArgument(format!("residue out of range for m = {m}")));
        }
        let (num, den) = (trim(num), trim(den));
        if den.first() != Some(&1) {
            return Err(Error::InvalidArgument("denominator constant term must be 1".into()));
        }
        Ok(ModRatFun { num, den, m })
    }

    pub fn zero(m: u64) -> Self {
        ModRatFun { num: Vec::new(), den: vec![1], m }
    }

    /// Reduce an exact rational function modulo `m`, scaling so that the
    /// denominator has constant term 1.
    pub fn from_ratfun(f: &RatFun, m: u64) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidArgument(format!("modulus must be at least 2, got {m}")));
        }
        let d0 = f.den().constant_term();
        debug_assert!(d0.is_integer());
        let unit = inv_mod(d0.numer(), m).ok_or_else(|| Error::NonUnitDenominator {
            constant: d0.to_string(),
            m,
        })?;
        let num = poly_mod(f.num(), m)?;
        let den = poly_mod(f.den(), m)?;
        Ok(ModRatFun {
            num: trim(num.into_iter().map(|c| mul_mod(c, unit, m)).collect()),
            den: trim(den.into_iter().map(|c| mul_mod(c, unit, m)).collect()),
            m,
        })
    }

    pub fn num(&self) -> &[u64] {
        &self.num
    }

    pub fn den(&self) -> &[u64] {
        &self.den
    }

    pub fn modulus(&self) -> u64 {
        self.m
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    /// Exact rational function with these residues as integer coefficients.
    pub fn to_ratfun(&self) -> RatFun {
        let lift = |v: &[u64]| Poly::new(v.iter().map(|&c| Rat::from_integer(c.into())).collect());
        RatFun::new(lift(&self.num), lift(&self.den)).expect("den(0) = 1")
    }

    /// First `n` coefficients by direct long division.
    pub fn series_prefix(&self, n: usize) -> Vec<u64> {
        let m = self.m;
        let mut out: Vec<u64> = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = self.num.get(k).copied().unwrap_or(0);
            for (j, &d) in self.den.iter().enumerate().skip(1).take(k) {
                if d != 0 {
                    acc = add_mod(acc, m - mul_mod(d, out[k - j], m), m);
                }
            }
            out.push(acc % m);
        }
        out
    }
}

/// Precomputed state for repeated coefficient queries on one [`ModRatFun`].
#[derive(Debug, Clone)]
pub struct ModCoeffEvaluator {
    m: u64,
    /// Coefficients `c(0 .. start + order)`.
    prefix: Vec<u64>,
    /// Beyond `start`, `c` obeys `c(n) = -sum_j den[j] c(n - j)`.
    start: u64,
    /// `den[1..]`; the recurrence order is its length.
    tail: Vec<u64>,
}

impl ModCoeffEvaluator {
    pub fn new(f: &ModRatFun) -> Self {
        let order = f.den.len().saturating_sub(1);
        let start = match f.num.len() {
            0 => 0,
            len => len.saturating_sub(order),
        };
        ModCoeffEvaluator {
            m: f.m,
            prefix: f.series_prefix(start + order),
            start: start as u64,
            tail: f.den[1..].to_vec(),
        }
    }

    /// Multiply two residues of degree `< order` modulo the characteristic
    /// polynomial `x^k + tail[0] x^{k-1} + ... + tail[k-1]`.
    fn mul_reduce(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let k = self.tail.len();
        let m = self.m;
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = add_mod(prod[i + j], mul_mod(x, y, m), m);
            }
        }
        for e in (k..prod.len()).rev() {
            let c = prod[e];
            if c == 0 {
                continue;
            }
            // x^e = x^{e-k} x^k = -sum_j tail[j-1] x^{e-j}
            for (j, &t) in self.tail.iter().enumerate() {
                let idx = e - j - 1;
                prod[idx] = add_mod(prod[idx], m - mul_mod(c, t, m), m);
            }
            prod[e] = 0;
        }
        prod.truncate(k);
        prod
    }

    /// `x^t` modulo the characteristic polynomial.
    fn x_pow(&self, t: u64) -> Vec<u64> {
        let k = self.tail.len();
        let mut acc = vec![0u64; k];
        acc[0] = 1 % self.m;
        let mut base = vec![0u64; k];
        if k == 1 {
            base[0] = (self.m - self.tail[0]) % self.m;
        } else {
            base[1] = 1;
        }
        let mut e = t;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_reduce(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul_reduce(&base, &base);
            }
        }
        acc
    }

    pub fn coeff(&self, n: u64) -> u64 {
        if (n as u128) < self.prefix.len() as u128 {
            return self.prefix[n as usize];
        }
        if self.tail.is_empty() {
            return 0;
        }
        let t = n - self.start;
        let r = self.x_pow(t);
        let base = self.start as usize;
        r.iter().enumerate().fold(0, |acc, (j, &c)| {
            add_mod(acc, mul_mod(c, self.prefix[base + j], self.m), self.m)
        })
    }
}

/// Coefficient of `q^n` in `f` over `Z/m`.
pub fn ratfun_coeff_mod(f: &ModRatFun, n: u64) -> u64 {
    ModCoeffEvaluator::new(f).coeff(n)
}

/// Memoized digit recursion for one scheme.
#[derive(Debug)]
pub struct DigitEvaluator<'a> {
    scheme: &'a Scheme,
    inhomogeneous: ModCoeffEvaluator,
    memo: HashMap<u64, u64>,
}

impl<'a> DigitEvaluator<'a> {
    pub fn new(scheme: &'a Scheme) -> Self {
        DigitEvaluator {
            scheme,
            inhomogeneous: ModCoeffEvaluator::new(scheme.e()),
            memo: HashMap::new(),
        }
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    /// Forget all memoized values.
    pub fn reset(&mut self) {
        self.memo.clear();
    }

    /// `f_i(n) mod m`.
    pub fn coeff(&mut self, n: u64) -> u64 {
        if let Some(&v) = self.memo.get(&n) {
            return v;
        }
        let s = self.scheme;
        let m = s.m() as u64;
        let v = if n == 0 {
            s.seed()
        } else {
            let p = s.p();
            let mut acc = self.inhomogeneous.coeff(n);
            let hi = n / m;
            let lo = match p.len() {
                0 => hi + 1,
                len => {
                    let deg = (len - 1) as u64;
                    if n > deg {
                        (n - deg).div_ceil(m)
                    } else {
                        0
                    }
                }
            };
            for k in lo..=hi {
                let c = p[(n - m * k) as usize];
                if c != 0 {
                    let fk = self.coeff(k);
                    acc = add_mod(acc, mul_mod(c, fk, m), m);
                }
            }
            acc
        };
        self.memo.insert(n, v);
        v
    }
}

/// `f_i(n) mod m` with a fresh memo table.
pub fn scheme_coeff(scheme: &Scheme, n: u64) -> u64 {
    DigitEvaluator::new(scheme).coeff(n)
}

/// Residues for `n0 .. n0 + count`, sharing one memo table.
pub fn scheme_coeff_block(scheme: &Scheme, n0: u64, count: usize) -> Vec<u64> {
    let mut ev = DigitEvaluator::new(scheme);
    (0..count as u64).map(|k| ev.coeff(n0 + k)).collect()
}

/// Upper bound on the memo size after a single query at `n`.
pub fn memo_bound(scheme: &Scheme, n: u64) -> usize {
    let m = scheme.m() as u64;
    let deg_p = scheme.p().len().saturating_sub(1) as u64;
    let mut log = 0u64;
    let mut x = n;
    while x >= m {
        x /= m;
        log += 1;
    }
    ((deg_p / m + 2) * (log + 2)) as usize
}

/// Lift a residue vector to an exact polynomial; used by tests and rendering.
pub fn lift_poly(v: &[u64]) -> Poly {
    Poly::new(v.iter().map(|&c| Rat::from_integer(c.into())).collect())
}

/// Residue of a signed integer.
pub fn int_mod(x: &BigInt, m: u64) -> u64 {
    let r = x.mod_floor(&BigInt::from(m));
    debug_assert!(!r.is_negative());
    to_u64(&r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mrf(num: &[u64], den: &[u64], m: u64) -> ModRatFun {
        ModRatFun::new(num.to_vec(), den.to_vec(), m).unwrap()
    }

    #[test]
    fn geometric_at_huge_index() {
        assert_eq!(ratfun_coeff_mod(&mrf(&[1], &[1, 6], 7), 1_000_000_000_000_000_000), 1);
    }

    #[test]
    fn squared_pole_is_linear() {
        // 1/(1-q)^2 mod 5 = 1/(1 + 3q + q^2)
        assert_eq!(ratfun_coeff_mod(&mrf(&[1], &[1, 3, 1], 5), 123), 4);
    }

    #[test]
    fn periodic_numerator_over_cubic() {
        // (1+q)/(1-q^3) mod 4: expand 8 terms directly
        let f = mrf(&[1, 1], &[1, 0, 0, 3], 4);
        let direct = f.series_prefix(8);
        assert_eq!(direct, vec![1, 1, 0, 1, 1, 0, 1, 1]);
        assert_eq!(ratfun_coeff_mod(&f, 7), direct[7]);
    }

    #[test]
    fn polynomial_has_finite_support() {
        let f = mrf(&[1, 2, 3], &[1], 5);
        assert_eq!(ratfun_coeff_mod(&f, 2), 3);
        assert_eq!(ratfun_coeff_mod(&f, 3), 0);
        assert_eq!(ratfun_coeff_mod(&f, u64::MAX >> 1), 0);
    }

    #[test]
    fn high_degree_numerator_uses_shifted_recurrence() {
        let f = mrf(&[0, 0, 0, 0, 0, 1, 2], &[1, 1], 3);
        let direct = f.series_prefix(40);
        for (n, &c) in direct.iter().enumerate() {
            assert_eq!(ratfun_coeff_mod(&f, n as u64), c, "n = {n}");
        }
    }

    #[test]
    fn rational_residues() {
        let half = Rat::new(1.into(), 2.into());
        assert_eq!(rat_mod(&half, 5).unwrap(), 3);
        assert!(matches!(rat_mod(&half, 4), Err(Error::NonIntegralCoefficient { .. })));
        assert_eq!(rat_mod(&Rat::from_integer((-1).into()), 5).unwrap(), 4);
        let three_halves = Rat::new(3.into(), 2.into());
        assert_eq!(rat_mod(&three_halves, 3).unwrap(), 0);
    }

    #[test]
    fn reduce_examples() {
        let p = |c: &[i64]| Poly::from_ints(c.iter().copied());
        let f = RatFun::new(p(&[1]), p(&[1, -1])).unwrap();
        let r = ModRatFun::from_ratfun(&f, 5).unwrap();
        assert_eq!((r.num(), r.den()), (&[1u64][..], &[1u64, 4][..]));
        let f = RatFun::new(p(&[3]), p(&[1, -1])).unwrap();
        let r = ModRatFun::from_ratfun(&f, 3).unwrap();
        assert_eq!((r.num(), r.den()), (&[][..], &[1u64, 2][..]));
        let f = RatFun::new(p(&[1]), p(&[2, -1])).unwrap();
        assert!(matches!(
            ModRatFun::from_ratfun(&f, 4),
            Err(Error::NonUnitDenominator { .. })
        ));
        // den(0) = 2 is a unit mod 5: both sides scale by 3
        let r = ModRatFun::from_ratfun(&f, 5).unwrap();
        assert_eq!((r.num(), r.den()), (&[3u64][..], &[1u64, 2][..]));
    }

    #[test]
    fn constructor_rejects_bad_denominator() {
        assert!(ModRatFun::new(vec![1], vec![2, 1], 5).is_err());
        assert!(ModRatFun::new(vec![7], vec![1], 5).is_err());
        assert!(ModRatFun::new(vec![1], vec![1], 1).is_err());
    }
}
