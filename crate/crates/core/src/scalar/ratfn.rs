//! Reduced univariate rational functions over [`Rat`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Poly, Rat, ScalarError};

/// `num / den` with `gcd(num, den) = 1` and `den` monic.
///
/// The canonical form makes `==` decide equality of functions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFn {
    num: Poly,
    den: Poly,
}

impl RatFn {
    pub fn new(num: Poly, den: Poly) -> Result<Self, ScalarError> {
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(Self::reduced(num, den))
    }

    fn reduced(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatFn::zero();
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.degree() == Some(0) {
            (num, den)
        } else {
            (num.exact_div(&g), den.exact_div(&g))
        };
        let lc = den.leading().expect("nonzero denominator").clone();
        if !lc.is_one() {
            let inv = lc.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RatFn { num, den }
    }

    pub fn zero() -> Self {
        RatFn { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        RatFn::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        RatFn { num: Poly::constant(c), den: Poly::one() }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFn { num: p, den: Poly::one() }
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

    pub fn recip(&self) -> Result<Self, ScalarError> {
        RatFn::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &RatFn) -> Result<Self, ScalarError> {
        if rhs.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(self * &rhs.recip()?)
    }

    pub fn scale(&self, k: &Rat) -> RatFn {
        if k.is_zero() {
            return RatFn::zero();
        }
        RatFn { num: self.num.scale(k), den: self.den.clone() }
    }

    pub fn pow(&self, e: u32) -> RatFn {
        // gcd(num, den) = 1 implies gcd(num^e, den^e) = 1
        RatFn { num: self.num.pow(e), den: self.den.pow(e) }
    }

    /// Value at `x0`; a vanishing denominator is reported as [`ScalarError::Pole`].
    pub fn eval(&self, x0: &Rat) -> Result<Rat, ScalarError> {
        let d = self.den.eval(x0);
        if d.is_zero() {
            return Err(ScalarError::Pole(x0.clone()));
        }
        Ok(self.num.eval(x0) / d)
    }

    /// First derivative by the quotient rule.
    pub fn derivative(&self) -> RatFn {
        if self.den.degree() == Some(0) {
            return RatFn { num: self.num.derivative(), den: self.den.clone() };
        }
        // (n/d)' = (n' (d/g) - n (d'/g)) / (d (d/g)) with g = gcd(d, d')
        let dp = self.den.derivative();
        let g = self.den.gcd(&dp);
        let d_over_g = self.den.exact_div(&g);
        let dp_over_g = dp.exact_div(&g);
        let num = &(&self.num.derivative() * &d_over_g) - &(&self.num * &dp_over_g);
        let den = &self.den * &d_over_g;
        RatFn::reduced(num, den)
    }

    /// `l`-fold derivative; order 0 is the identity.
    pub fn nth_derivative(&self, l: u32) -> RatFn {
        (0..l).fold(self.clone(), |f, _| f.derivative())
    }

    /// Taylor coefficients `f^(l)(0) / l!` for `l = 0..=order`, by power-series division.
    pub fn taylor_at_zero(&self, order: usize) -> Result<Vec<Rat>, ScalarError> {
        let b0 = self.den.coeff(0);
        if b0.is_zero() {
            return Err(ScalarError::Pole(Rat::zero()));
        }
        let b0_inv = b0.recip();
        let mut out: Vec<Rat> = Vec::with_capacity(order + 1);
        for k in 0..=order {
            let mut acc = self.num.coeff(k);
            for i in 1..=k.min(self.den.coeffs().len().saturating_sub(1)) {
                acc -= self.den.coeff(i) * &out[k - i];
            }
            out.push(acc * &b0_inv);
        }
        Ok(out)
    }

    /// Derivatives `f^(l)(0)` for `l = 0..=order`.
    pub fn derivatives_at_zero(&self, order: usize) -> Result<Vec<Rat>, ScalarError> {
        let coeffs = self.taylor_at_zero(order)?;
        let mut fact = BigInt::one();
        Ok(coeffs
            .into_iter()
            .enumerate()
            .map(|(l, c)| {
                if l > 0 {
                    fact *= l;
                }
                c * Rat::from_integer(fact.clone())
            })
            .collect())
    }
}

impl Default for RatFn {
    fn default() -> Self {
        RatFn::zero()
    }
}

impl From<Poly> for RatFn {
    fn from(p: Poly) -> Self {
        RatFn::from_poly(p)
    }
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFn({self})")
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.degree() == Some(0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl Add<&RatFn> for &RatFn {
    type Output = RatFn;
    fn add(self, rhs: &RatFn) -> RatFn {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            return RatFn::reduced(&self.num + &rhs.num, self.den.clone());
        }
        let g = self.den.gcd(&rhs.den);
        let a = rhs.den.exact_div(&g);
        let b = self.den.exact_div(&g);
        let num = &(&self.num * &a) + &(&rhs.num * &b);
        RatFn::reduced(num, &self.den * &a)
    }
}

impl Sub<&RatFn> for &RatFn {
    type Output = RatFn;
    fn sub(self, rhs: &RatFn) -> RatFn {
        self + &(-rhs)
    }
}

impl Mul<&RatFn> for &RatFn {
    type Output = RatFn;
    fn mul(self, rhs: &RatFn) -> RatFn {
        if self.is_zero() || rhs.is_zero() {
            return RatFn::zero();
        }
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let num = &self.num.exact_div(&g1) * &rhs.num.exact_div(&g2);
        let den = &self.den.exact_div(&g2) * &rhs.den.exact_div(&g1);
        let lc = den.leading().expect("nonzero").recip();
        RatFn { num: num.scale(&lc), den: den.scale(&lc) }
    }
}

impl Neg for &RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        RatFn { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RatFn {
    type Output = RatFn;
    fn neg(self) -> RatFn {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RatFn {
            type Output = RatFn;
            fn $m(self, rhs: RatFn) -> RatFn {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&RatFn> for RatFn {
            type Output = RatFn;
            fn $m(self, rhs: &RatFn) -> RatFn {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
