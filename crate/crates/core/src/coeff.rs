//! Exact scalars: rationals and Gaussian rationals.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rational = BigRational;

/// Parses `p` or `p/q` into a reduced rational. Zero denominators are rejected.
pub fn parse_rational(text: &str) -> Result<Rational, String> {
    let t = text.trim();
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (t, "1"),
    };
    let p: BigInt = num
        .parse()
        .map_err(|_| format!("malformed rational {text:?}"))?;
    let q: BigInt = den
        .parse()
        .map_err(|_| format!("malformed rational {text:?}"))?;
    if q.is_zero() {
        return Err(format!("zero denominator in {text:?}"));
    }
    Ok(Rational::new(p, q))
}

/// Canonical text: `p/q` in lowest terms, `p` when q = 1.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// A Gaussian rational `re + i im`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussCoeff {
    pub re: Rational,
    pub im: Rational,
}

impl GaussCoeff {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussCoeff { re, im }
    }

    pub fn from_int(v: i64) -> Self {
        GaussCoeff::new(Rational::from_integer(v.into()), Rational::zero())
    }

    pub fn from_rational(r: Rational) -> Self {
        GaussCoeff::new(r, Rational::zero())
    }

    pub fn i() -> Self {
        GaussCoeff::new(Rational::zero(), Rational::one())
    }

    pub fn conj(&self) -> Self {
        GaussCoeff::new(self.re.clone(), -self.im.clone())
    }

    /// |c|^2
    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn scale(&self, r: &Rational) -> Self {
        GaussCoeff::new(&self.re * r, &self.im * r)
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(GaussCoeff::new(&self.re / &n, -(&self.im / &n)))
    }

    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        other.inv().map(|v| self * &v)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = GaussCoeff::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl fmt::Display for GaussCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", format_rational(&self.re)),
            (true, false) => write!(f, "{}i", format_rational(&self.im)),
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(
                    f,
                    "({} {} {}i)",
                    format_rational(&self.re),
                    sign,
                    format_rational(&self.im.abs())
                )
            }
        }
    }
}

impl Zero for GaussCoeff {
    fn zero() -> Self {
        GaussCoeff::default()
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for GaussCoeff {
    fn one() -> Self {
        GaussCoeff::from_int(1)
    }
}

impl From<Rational> for GaussCoeff {
    fn from(r: Rational) -> Self {
        GaussCoeff::from_rational(r)
    }
}

impl From<i64> for GaussCoeff {
    fn from(v: i64) -> Self {
        GaussCoeff::from_int(v)
    }
}

impl Add<&GaussCoeff> for &GaussCoeff {
    type Output = GaussCoeff;
    fn add(self, o: &GaussCoeff) -> GaussCoeff {
        GaussCoeff::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub<&GaussCoeff> for &GaussCoeff {
    type Output = GaussCoeff;
    fn sub(self, o: &GaussCoeff) -> GaussCoeff {
        GaussCoeff::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul<&GaussCoeff> for &GaussCoeff {
    type Output = GaussCoeff;
    fn mul(self, o: &GaussCoeff) -> GaussCoeff {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussCoeff::from_rational(&self.re * &o.re);
        }
        GaussCoeff::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Div<&GaussCoeff> for &GaussCoeff {
    type Output = GaussCoeff;
    /// Panics on division by zero; use [`GaussCoeff::checked_div`] otherwise.
    fn div(self, o: &GaussCoeff) -> GaussCoeff {
        self.checked_div(o).expect("division by zero Gaussian rational")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<GaussCoeff> for GaussCoeff {
            type Output = GaussCoeff;
            fn $m(self, o: GaussCoeff) -> GaussCoeff {
                (&self).$m(&o)
            }
        }
        impl $tr<&GaussCoeff> for GaussCoeff {
            type Output = GaussCoeff;
            fn $m(self, o: &GaussCoeff) -> GaussCoeff {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for GaussCoeff {
    type Output = GaussCoeff;
    fn neg(self) -> GaussCoeff {
        GaussCoeff::new(-self.re, -self.im)
    }
}

impl Neg for &GaussCoeff {
    type Output = GaussCoeff;
    fn neg(self) -> GaussCoeff {
        GaussCoeff::new(-self.re.clone(), -self.im.clone())
    }
}

impl AddAssign<&GaussCoeff> for GaussCoeff {
    fn add_assign(&mut self, o: &GaussCoeff) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl SubAssign<&GaussCoeff> for GaussCoeff {
    fn sub_assign(&mut self, o: &GaussCoeff) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl MulAssign<&GaussCoeff> for GaussCoeff {
    fn mul_assign(&mut self, o: &GaussCoeff) {
        *self = &*self * o;
    }
}
