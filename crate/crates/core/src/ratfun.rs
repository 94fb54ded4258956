//! Rational functions in `q` that are formal power series.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{Poly, Rat};

/// `num / den` in lowest terms.
///
/// The denominator has coprime integer coefficients, a positive constant
/// term and `den(0) != 0`; two equal rational functions therefore have
/// identical fields.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFun {
    num: Poly,
    den: Poly,
}

/// Binary field operation selector for [`RatFun::arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Reduce `num / den` to lowest terms with a primitive integer denominator
/// whose lowest nonzero coefficient is positive. Does not require
/// `den(0) != 0`.
pub(crate) fn normalize(num: &Poly, den: &Poly) -> Result<(Poly, Poly)> {
    if den.is_zero() {
        return Err(Error::DivisionByZeroRatFun);
    }
    if num.is_zero() {
        return Ok((Poly::zero(), Poly::one()));
    }
    let g = num.gcd(den);
    let (mut num, mut den) = if g.degree() == Some(0) {
        (num.clone(), den.clone())
    } else {
        (num.exact_div(&g)?, den.exact_div(&g)?)
    };
    let mut c = den.content();
    let low = den.valuation().expect("nonzero denominator");
    if den.coeffs()[low].is_negative() {
        c = -c;
    }
    if !c.is_zero() && c != Rat::from_integer(1.into()) {
        let inv = c.recip();
        num = num.scale(&inv);
        den = den.scale(&inv);
    }
    Ok((num, den))
}

impl RatFun {
    /// Canonical `num / den`; fails when the reduced denominator vanishes
    /// at `q = 0`.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        let (num, den) = normalize(&num, &den)?;
        if den.constant_term().is_zero() {
            return Err(Error::NonSeriesResult);
        }
        Ok(RatFun { num, den })
    }

    pub fn zero() -> Self {
        RatFun {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn one() -> Self {
        RatFun::from_poly(Poly::one())
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFun {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        RatFun::from_poly(Poly::from_ints([n]))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// Value at `q = 0`.
    pub fn constant_term(&self) -> Rat {
        self.num.constant_term() / self.den.constant_term()
    }

    /// `f(q^m)`.
    pub fn substitute_power(&self, m: usize) -> RatFun {
        // Substitution preserves coprimality and the denominator's content
        // and constant term, so the result is already canonical.
        RatFun {
            num: self.num.substitute_power(m),
            den: self.den.substitute_power(m),
        }
    }

    pub fn arith(&self, other: &RatFun, op: ArithOp) -> Result<RatFun> {
        match op {
            ArithOp::Add => Ok(self + other),
            ArithOp::Sub => Ok(self - other),
            ArithOp::Mul => Ok(self * other),
            ArithOp::Div => self.checked_div(other),
        }
    }

    pub fn checked_div(&self, other: &RatFun) -> Result<RatFun> {
        if other.is_zero() {
            return Err(Error::DivisionByZeroRatFun);
        }
        RatFun::new(&self.num * &other.den, &self.den * &other.num)
    }

    /// First `n` Maclaurin coefficients.
    pub fn series_prefix(&self, n: usize) -> Vec<Rat> {
        let den = self.den.coeffs();
        let inv0 = den[0].recip();
        let mut out: Vec<Rat> = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = self.num.coeff(k);
            for (j, d) in den.iter().enumerate().skip(1).take(k) {
                if !d.is_zero() {
                    acc -= d * &out[k - j];
                }
            }
            out.push(acc * &inv0);
        }
        out
    }
}

impl fmt::Debug for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFun({self})")
    }
}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::render_ratfun(self))
    }
}

// Sums, differences and products of power series are power series, so the
// canonical constructor cannot fail here.
fn rebuild(num: Poly, den: Poly) -> RatFun {
    RatFun::new(num, den).expect("closed under ring operations")
}

impl Add for &RatFun {
    type Output = RatFun;
    fn add(self, rhs: &RatFun) -> RatFun {
        if self.den == rhs.den {
            return rebuild(&self.num + &rhs.num, self.den.clone());
        }
        rebuild(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &RatFun {
    type Output = RatFun;
    fn sub(self, rhs: &RatFun) -> RatFun {
        self + &(-rhs)
    }
}

impl Mul for &RatFun {
    type Output = RatFun;
    fn mul(self, rhs: &RatFun) -> RatFun {
        rebuild(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &RatFun {
    type Output = RatFun;
    fn neg(self) -> RatFun {
        RatFun {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl From<Poly> for RatFun {
    fn from(p: Poly) -> Self {
        RatFun::from_poly(p)
    }
}
