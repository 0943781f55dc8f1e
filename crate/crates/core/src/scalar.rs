//! Exact arithmetic in the field ℚ(i, √2).
//!
//! A [`Scalar`] is stored on the basis {1, i, √2, i√2}. Each component is a
//! [`Rational`], which keeps small values in machine words and promotes to
//! arbitrary precision on overflow.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::ParseError;

/// A reduced rational number with arbitrary precision.
///
/// Values whose numerator and denominator fit in `i64` are always stored in
/// the `Small` variant, so structural equality is value equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Rational {
    Small(i64, i64),
    Big(Box<BigRational>),
}

impl Rational {
    pub fn zero() -> Self {
        Rational::Small(0, 1)
    }

    pub fn one() -> Self {
        Rational::Small(1, 1)
    }

    pub fn from_int(n: i64) -> Self {
        Rational::Small(n, 1)
    }

    /// Builds `num/den`; panics on a zero denominator.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i128(num as i128, den as i128)
    }

    fn from_i128(num: i128, den: i128) -> Self {
        let g = num.gcd(&den);
        let (mut n, mut d) = if g == 0 { (0, 1) } else { (num / g, den / g) };
        if d < 0 {
            n = -n;
            d = -d;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Rational::Small(n, d),
            _ => Rational::Big(Box::new(BigRational::new(BigInt::from(n), BigInt::from(d)))),
        }
    }

    fn from_big(r: BigRational) -> Self {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Rational::Small(n, d),
            _ => Rational::Big(Box::new(r)),
        }
    }

    fn to_big(&self) -> BigRational {
        match self {
            Rational::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Rational::Big(r) => (**r).clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Rational::Small(0, _))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Rational::Small(1, 1))
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Rational::Small(n, _) => *n < 0,
            Rational::Big(r) => r.is_negative(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match self {
            Rational::Small(n, _) => BigInt::from(*n),
            Rational::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match self {
            Rational::Small(_, d) => BigInt::from(*d),
            Rational::Big(r) => r.denom().clone(),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Rational::Small(n, d) => Self::from_i128(*d as i128, *n as i128),
            Rational::Big(r) => Self::from_big(r.recip()),
        })
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::zero()
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rational::Small(n, 1) => write!(f, "{n}"),
            Rational::Small(n, d) => write!(f, "{n}/{d}"),
            Rational::Big(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            Rational::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl FromStr for Rational {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || ParseError::new(0, format!("invalid rational `{s}`"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Self::from_big(BigRational::new(n, d)))
    }
}

impl<'a> Add<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        match (self, rhs) {
            (Rational::Small(a, b), Rational::Small(c, d)) => {
                if *b == 1 && *d == 1 {
                    if let Some(s) = a.checked_add(*c) {
                        return Rational::Small(s, 1);
                    }
                }
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                match (a.checked_mul(d), c.checked_mul(b), b.checked_mul(d)) {
                    (Some(x), Some(y), Some(z)) => match x.checked_add(y) {
                        Some(num) => Rational::from_i128(num, z),
                        None => Rational::from_big(self.to_big() + rhs.to_big()),
                    },
                    _ => Rational::from_big(self.to_big() + rhs.to_big()),
                }
            }
            _ => Rational::from_big(self.to_big() + rhs.to_big()),
        }
    }
}

impl<'a> Mul<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn mul(self, rhs: &Rational) -> Rational {
        match (self, rhs) {
            (Rational::Small(a, b), Rational::Small(c, d)) => {
                if *a == 0 || *c == 0 {
                    return Rational::zero();
                }
                if *b == 1 && *d == 1 {
                    if let Some(p) = a.checked_mul(*c) {
                        return Rational::Small(p, 1);
                    }
                }
                let num = (*a as i128) * (*c as i128);
                let den = (*b as i128) * (*d as i128);
                Rational::from_i128(num, den)
            }
            _ => Rational::from_big(self.to_big() * rhs.to_big()),
        }
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match self {
            Rational::Small(n, d) => match n.checked_neg() {
                Some(m) => Rational::Small(m, *d),
                None => Rational::from_big(-self.to_big()),
            },
            Rational::Big(r) => Rational::from_big(-(**r).clone()),
        }
    }
}

impl Sub for &Rational {
    type Output = Rational;
    fn sub(self, rhs: &Rational) -> Rational {
        self + &(-rhs)
    }
}

/// An element `a + b·i + c·√2 + d·i√2` of ℚ(i, √2).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    c: [Rational; 4],
}

impl Scalar {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Self {
        Scalar { c: [a, b, c, d] }
    }

    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_rational(Rational::from_int(n))
    }

    pub fn from_rational(r: Rational) -> Self {
        Scalar::new(r, Rational::zero(), Rational::zero(), Rational::zero())
    }

    /// `num/den` as a scalar.
    pub fn frac(num: i64, den: i64) -> Self {
        Scalar::from_rational(Rational::new(num, den))
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Scalar::new(Rational::zero(), Rational::one(), Rational::zero(), Rational::zero())
    }

    /// √2.
    pub fn sqrt2() -> Self {
        Scalar::new(Rational::zero(), Rational::zero(), Rational::one(), Rational::zero())
    }

    /// 1/√2 = √2/2.
    pub fn inv_sqrt2() -> Self {
        Scalar::new(Rational::zero(), Rational::zero(), Rational::new(1, 2), Rational::zero())
    }

    /// `(-1)^e`.
    pub fn sign(odd: bool) -> Self {
        Scalar::from_int(if odd { -1 } else { 1 })
    }

    pub fn components(&self) -> &[Rational; 4] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Rational::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(Rational::is_zero)
    }

    /// The rational value if this scalar lies in ℚ.
    pub fn as_rational(&self) -> Option<&Rational> {
        self.c[1..].iter().all(Rational::is_zero).then_some(&self.c[0])
    }

    /// Multiplies by a sign and a power of i; used on hot paths.
    pub fn times_unit(&self, i_power: u8) -> Self {
        let [a, b, c, d] = &self.c;
        match i_power % 4 {
            0 => self.clone(),
            1 => Scalar::new(-b, a.clone(), -d, c.clone()),
            2 => -self,
            _ => Scalar::new(b.clone(), -a, d.clone(), -c),
        }
    }

    /// Multiplicative inverse, computed by conjugating away √2 and then i.
    pub fn inv(&self) -> Result<Self, crate::error::Error> {
        if self.is_zero() {
            return Err(crate::error::Error::DivisionByZero);
        }
        let [a, b, c, d] = &self.c;
        // x = A + B√2 with A = a + bi, B = c + di; conj over √2 is A - B√2.
        let conj_r2 = Scalar::new(a.clone(), b.clone(), -c, -d);
        let norm = self * &conj_r2;
        debug_assert!(norm.c[2].is_zero() && norm.c[3].is_zero());
        let [p, q, _, _] = &norm.c;
        let mod2 = &(p * p) + &(q * q);
        let r = mod2.recip().expect("nonzero norm");
        let norm_inv = Scalar::new(p * &r, &(-q) * &r, Rational::zero(), Rational::zero());
        Ok(&conj_r2 * &norm_inv)
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        if r.is_one() {
            return self.clone();
        }
        let f = |x: &Rational| if x.is_zero() { Rational::zero() } else { x * r };
        Scalar { c: [f(&self.c[0]), f(&self.c[1]), f(&self.c[2]), f(&self.c[3])] }
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar {
            c: [
                &self.c[0] + &rhs.c[0],
                &self.c[1] + &rhs.c[1],
                &self.c[2] + &rhs.c[2],
                &self.c[3] + &rhs.c[3],
            ],
        }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        for t in 0..4 {
            if !rhs.c[t].is_zero() {
                self.c[t] = &self.c[t] + &rhs.c[t];
            }
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        for t in 0..4 {
            if !rhs.c[t].is_zero() {
                self.c[t] = &self.c[t] - &rhs.c[t];
            }
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { c: [-&self.c[0], -&self.c[1], -&self.c[2], -&self.c[3]] }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if let Some(r) = rhs.as_rational() {
            return self.scale_rational(r);
        }
        if let Some(r) = self.as_rational() {
            return rhs.scale_rational(r);
        }
        let [a, b, c, d] = &self.c;
        let [e, f, g, h] = &rhs.c;
        let two = Rational::from_int(2);
        let one = &(&(a * e) - &(b * f)) + &(&two * &(&(c * g) - &(d * h)));
        let im = &(&(a * f) + &(b * e)) + &(&two * &(&(c * h) + &(d * g)));
        let r2 = &(&(a * g) + &(c * e)) - &(&(b * h) + &(d * f));
        let ir2 = &(&(a * h) + &(d * e)) + &(&(b * g) + &(c * f));
        Scalar::new(one, im, r2, ir2)
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

const UNITS: [&str; 4] = ["", "i", "r2", "i*r2"];

impl fmt::Display for Scalar {
    /// Canonical text: nonzero components in basis order, joined by ` + `
    /// or ` - `; `0` for zero.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (t, r) in self.c.iter().enumerate() {
            if r.is_zero() {
                continue;
            }
            let body = if t == 0 { r.abs().to_string() } else { format!("{}*{}", r.abs(), UNITS[t]) };
            match (first, r.is_negative()) {
                (true, false) => write!(f, "{body}")?,
                (true, true) => write!(f, "-{body}")?,
                (false, false) => write!(f, " + {body}")?,
                (false, true) => write!(f, " - {body}")?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scalar({self})")
    }
}

impl FromStr for Scalar {
    type Err = ParseError;

    /// Accepts a sum of terms `rat`, `rat*i`, `rat*r2`, `rat*i*r2` joined by
    /// `+` or `-`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bytes: Vec<char> = s.chars().collect();
        let mut out = Scalar::zero();
        let mut pos = 0usize;
        let mut seen_term = false;
        let skip_ws = |pos: &mut usize| {
            while *pos < bytes.len() && bytes[*pos].is_whitespace() {
                *pos += 1;
            }
        };
        loop {
            skip_ws(&mut pos);
            if pos >= bytes.len() {
                break;
            }
            let mut negative = false;
            if seen_term {
                match bytes[pos] {
                    '+' => {}
                    '-' => negative = true,
                    c => return Err(ParseError::new(pos, format!("expected `+` or `-`, found `{c}`"))),
                }
                pos += 1;
                skip_ws(&mut pos);
            }
            let start = pos;
            if pos < bytes.len() && bytes[pos] == '-' {
                negative = !negative;
                pos += 1;
            }
            let num_start = pos;
            while pos < bytes.len() && (bytes[pos].is_ascii_digit() || bytes[pos] == '/') {
                pos += 1;
            }
            if num_start == pos {
                return Err(ParseError::new(start, "expected a rational coefficient"));
            }
            let text: String = bytes[num_start..pos].iter().collect();
            let mut r: Rational = text.parse().map_err(|_| ParseError::new(num_start, format!("invalid rational `{text}`")))?;
            if negative {
                r = -&r;
            }
            skip_ws(&mut pos);
            let mut unit = 0usize;
            if pos < bytes.len() && bytes[pos] == '*' {
                pos += 1;
                skip_ws(&mut pos);
                let rest: String = bytes[pos..].iter().collect();
                let rest_compact: String = rest.chars().filter(|c| !c.is_whitespace()).collect();
                if rest_compact.starts_with("i*r2") {
                    unit = 3;
                    // advance over `i`, `*`, `r2` with interleaved whitespace
                    let mut want = "i*r2".chars().peekable();
                    while want.peek().is_some() {
                        if bytes[pos].is_whitespace() {
                            pos += 1;
                            continue;
                        }
                        want.next();
                        pos += 1;
                    }
                } else if rest.starts_with("r2") {
                    unit = 2;
                    pos += 2;
                } else if rest.starts_with('i') {
                    unit = 1;
                    pos += 1;
                } else {
                    return Err(ParseError::new(pos, "expected unit `i`, `r2` or `i*r2`"));
                }
            }
            out.c[unit] = &out.c[unit] + &r;
            seen_term = true;
        }
        if !seen_term {
            return Err(ParseError::new(0, "empty scalar"));
        }
        Ok(out)
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> Scalar {
        t.parse().unwrap()
    }

    #[test]
    fn table() {
        assert_eq!(&Scalar::i() * &Scalar::i(), Scalar::from_int(-1));
        assert_eq!(&Scalar::sqrt2() * &Scalar::sqrt2(), Scalar::from_int(2));
        assert_eq!(s("1 + 1*i") * s("1 - 1*i"), Scalar::from_int(2));
        assert_eq!(s("1/2*r2") + s("1/2*r2"), Scalar::sqrt2());
    }

    #[test]
    fn inverse() {
        assert_eq!(Scalar::from_int(2).inv().unwrap(), Scalar::frac(1, 2));
        assert_eq!(Scalar::i().inv().unwrap(), -Scalar::i());
        assert!(Scalar::zero().inv().is_err());
    }

    #[test]
    fn text() {
        assert_eq!(s("1/2 + 3*i"), Scalar::new(Rational::new(1, 2), Rational::from_int(3), Rational::zero(), Rational::zero()));
        assert_eq!(s("0"), Scalar::zero());
        assert_eq!(s("1*r2"), Scalar::sqrt2());
        assert_eq!(s("2 + 1*i*r2").to_string(), "2 + 1*i*r2");
        assert_eq!(s("-1/3*i - 2*r2").to_string(), "-1/3*i - 2*r2");
        assert!("1 +".parse::<Scalar>().is_err());
        assert!("x".parse::<Scalar>().is_err());
    }

    #[test]
    fn overflow_promotes() {
        let big = Scalar::from_int(i64::MAX);
        let sq = &big * &big;
        let back = &sq * &big.inv().unwrap();
        assert_eq!(back, big);
    }
}
