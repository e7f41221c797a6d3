//! Exact scalars: rationals and elements of cyclotomic fields Q(ζ_d).
//!
//! Character values of order `d` live in Q(ζ_d). They are stored on the
//! power basis 1, ζ, …, ζ^{φ(d)-1} modulo the d-th cyclotomic polynomial.
//! Rational elements are always stored with `d = 1`, so structural
//! equality is value equality.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `q^{-n}` as an exact rational.
pub fn q_pow_neg(q: u64, n: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(q).pow(n))
}

/// `q^{e}` for a signed exponent.
pub fn q_pow(q: u64, e: i64) -> Rational {
    if e >= 0 {
        Rational::from_integer(BigInt::from(q).pow(e as u32))
    } else {
        q_pow_neg(q, (-e) as u32)
    }
}

/// Serializes a rational as a decimal-free `"a/b"` string.
pub fn fmt_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.trim().parse().ok()?;
            let b: BigInt = b.trim().parse().ok()?;
            if b.is_zero() {
                None
            } else {
                Some(Rational::new(a, b))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// Coefficient domain for the rational-function algebra.
pub trait Coeff:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Zero
    + One
{
    fn from_rational(r: Rational) -> Self;
    fn scale(&self, r: &Rational) -> Self;
    /// The value as a rational, when it is one.
    fn as_rational(&self) -> Option<Rational>;
    fn to_json(&self) -> Value;
}

impl Coeff for Rational {
    fn from_rational(r: Rational) -> Self {
        r
    }
    fn scale(&self, r: &Rational) -> Self {
        self * r
    }
    fn as_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
    fn to_json(&self) -> Value {
        Value::String(fmt_rational(self))
    }
}

fn cyclotomic_cache() -> &'static Mutex<HashMap<u32, Arc<Vec<BigInt>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<BigInt>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients (low to high) of the d-th cyclotomic polynomial.
pub fn cyclotomic_polynomial(d: u32) -> Arc<Vec<BigInt>> {
    assert!(d >= 1);
    if let Some(p) = cyclotomic_cache().lock().unwrap().get(&d) {
        return p.clone();
    }
    // x^d - 1 divided by every Φ_e with e | d, e < d.
    let mut num = vec![BigInt::zero(); d as usize + 1];
    num[0] = BigInt::from(-1);
    num[d as usize] = BigInt::one();
    for e in 1..d {
        if d.is_multiple_of(e) {
            let phi_e = cyclotomic_polynomial(e);
            num = exact_monic_div(&num, &phi_e);
        }
    }
    let arc = Arc::new(num);
    cyclotomic_cache().lock().unwrap().insert(d, arc.clone());
    arc
}

fn exact_monic_div(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); num.len() - dn];
    for i in (0..quot.len()).rev() {
        let c = rem[i + dn].clone();
        if c.is_zero() {
            continue;
        }
        for (j, dc) in den.iter().enumerate() {
            rem[i + j] -= &c * dc;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(|c| c.is_zero()));
    quot
}

pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// An element of the cyclotomic field Q(ζ_d).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cyclo {
    d: u32,
    c: Vec<Rational>,
}

impl Cyclo {
    pub fn rational(r: Rational) -> Self {
        Cyclo { d: 1, c: vec![r] }
    }

    /// ζ_d^k.
    pub fn root_power(d: u32, k: u64) -> Self {
        assert!(d >= 1);
        if d == 1 {
            return Cyclo::rational(One::one());
        }
        let deg = euler_phi(d as u64) as usize;
        let e = (k % d as u64) as usize;
        let mut v = vec![Rational::zero(); e.max(deg) + 1];
        v[e] = One::one();
        Cyclo::from_raw(d, v)
    }

    fn from_raw(d: u32, raw: Vec<Rational>) -> Self {
        if d == 1 {
            let s = raw.into_iter().fold(Rational::zero(), |a, b| a + b);
            return Cyclo::rational(s);
        }
        let phi = cyclotomic_polynomial(d);
        let deg = phi.len() - 1;
        let mut r = raw;
        for i in (deg..r.len()).rev() {
            let c = std::mem::replace(&mut r[i], Rational::zero());
            if c.is_zero() {
                continue;
            }
            for (j, pc) in phi.iter().enumerate().take(deg) {
                let t = &c * Rational::from_integer(pc.clone());
                r[i - deg + j] -= t;
            }
        }
        r.truncate(deg);
        r.resize(deg, Rational::zero());
        let mut out = Cyclo { d, c: r };
        out.canonicalize();
        out
    }

    fn canonicalize(&mut self) {
        if self.d > 1 && self.c.iter().skip(1).all(|x| x.is_zero()) {
            let c0 = self.c.first().cloned().unwrap_or_else(Rational::zero);
            self.d = 1;
            self.c = vec![c0];
        }
    }

    pub fn order(&self) -> u32 {
        self.d
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.c
    }

    fn promoted(&self, d: u32) -> Vec<Rational> {
        if self.d == d {
            return self.c.clone();
        }
        assert_eq!(self.d, 1, "mixing cyclotomic fields of orders {} and {}", self.d, d);
        let deg = euler_phi(d as u64) as usize;
        let mut v = vec![Rational::zero(); deg];
        v[0] = self.c[0].clone();
        v
    }

    fn common_order(&self, other: &Cyclo) -> u32 {
        match (self.d, other.d) {
            (1, d) | (d, 1) => d,
            (a, b) => {
                assert_eq!(a, b, "mixing cyclotomic fields of orders {a} and {b}");
                a
            }
        }
    }

    /// Numerical value, for display only.
    pub fn to_complex(&self) -> (f64, f64) {
        use num_traits::ToPrimitive;
        let mut re = 0.0;
        let mut im = 0.0;
        for (k, c) in self.c.iter().enumerate() {
            let v = c.to_f64().unwrap_or(f64::NAN);
            let ang = 2.0 * std::f64::consts::PI * k as f64 / self.d as f64;
            re += v * ang.cos();
            im += v * ang.sin();
        }
        (re, im)
    }
}

impl fmt::Debug for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.d == 1 {
            return write!(f, "{}", self.c[0]);
        }
        write!(f, "Q(z{})[", self.d)?;
        for (i, c) in self.c.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl Add for Cyclo {
    type Output = Cyclo;
    fn add(self, rhs: Cyclo) -> Cyclo {
        let d = self.common_order(&rhs);
        let a = self.promoted(d);
        let b = rhs.promoted(d);
        let mut out = Cyclo {
            d,
            c: a.into_iter().zip(b).map(|(x, y)| x + y).collect(),
        };
        out.canonicalize();
        out
    }
}

impl Sub for Cyclo {
    type Output = Cyclo;
    fn sub(self, rhs: Cyclo) -> Cyclo {
        self + (-rhs)
    }
}

impl Neg for Cyclo {
    type Output = Cyclo;
    fn neg(self) -> Cyclo {
        Cyclo {
            d: self.d,
            c: self.c.into_iter().map(|x| -x).collect(),
        }
    }
}

impl Mul for Cyclo {
    type Output = Cyclo;
    fn mul(self, rhs: Cyclo) -> Cyclo {
        if self.d == 1 {
            return rhs.scale(&self.c[0]);
        }
        if rhs.d == 1 {
            return self.scale(&rhs.c[0]);
        }
        let d = self.common_order(&rhs);
        let mut raw = vec![Rational::zero(); self.c.len() + rhs.c.len()];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                raw[i + j] += a * b;
            }
        }
        Cyclo::from_raw(d, raw)
    }
}

impl Zero for Cyclo {
    fn zero() -> Self {
        Cyclo::rational(Zero::zero())
    }
    fn is_zero(&self) -> bool {
        self.d == 1 && self.c[0].is_zero()
    }
}

impl One for Cyclo {
    fn one() -> Self {
        Cyclo::rational(One::one())
    }
}

impl Coeff for Cyclo {
    fn from_rational(r: Rational) -> Self {
        Cyclo::rational(r)
    }
    fn scale(&self, r: &Rational) -> Self {
        let mut out = Cyclo {
            d: self.d,
            c: self.c.iter().map(|x| x * r).collect(),
        };
        if r.is_zero() {
            out = Cyclo::rational(Zero::zero());
        }
        out
    }
    fn as_rational(&self) -> Option<Rational> {
        (self.d == 1).then(|| self.c[0].clone())
    }
    fn to_json(&self) -> Value {
        json!({
            "d": self.d,
            "coeffs": self.c.iter().map(fmt_rational).collect::<Vec<_>>(),
        })
    }
}

/// p-adic valuation of a nonzero integer; `None` for zero.
pub fn valuation(x: &BigInt, p: u64) -> Option<u32> {
    if x.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut v = 0;
    let mut y = x.abs();
    loop {
        let (q, r) = y.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        v += 1;
        y = q;
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials() {
        let to_i = |v: &[BigInt]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>();
        assert_eq!(to_i(&cyclotomic_polynomial(1)), ["-1", "1"]);
        assert_eq!(to_i(&cyclotomic_polynomial(3)), ["1", "1", "1"]);
        assert_eq!(to_i(&cyclotomic_polynomial(4)), ["1", "0", "1"]);
        assert_eq!(to_i(&cyclotomic_polynomial(6)), ["1", "-1", "1"]);
        assert_eq!(cyclotomic_polynomial(12).len(), 5);
    }

    #[test]
    fn roots_of_unity_sum_to_zero() {
        for d in [2u32, 3, 4, 5, 6, 12] {
            let s = (0..d as u64).fold(Cyclo::zero(), |acc, k| acc + Cyclo::root_power(d, k));
            assert!(s.is_zero(), "d = {d}");
            let w = Cyclo::root_power(d, 1);
            let mut pw = Cyclo::one();
            for _ in 0..d {
                pw = pw * w.clone();
            }
            assert_eq!(pw, Cyclo::one());
        }
    }

    #[test]
    fn quadratic_character_values_are_rational() {
        assert_eq!(Cyclo::root_power(2, 1), Cyclo::rational(int(-1)));
        assert_eq!(Cyclo::root_power(2, 1).order(), 1);
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation(&BigInt::from(98), 7), Some(2));
        assert_eq!(valuation(&BigInt::from(-3), 7), Some(0));
        assert_eq!(valuation(&BigInt::zero(), 7), None);
    }

    #[test]
    fn rational_strings() {
        assert_eq!(fmt_rational(&rat(-6, 4)), "-3/2");
        assert_eq!(fmt_rational(&int(3)), "3/1");
        assert_eq!(parse_rational("-3/2"), Some(rat(-3, 2)));
        assert_eq!(parse_rational("5"), Some(int(5)));
        assert_eq!(parse_rational("1/0"), None);
    }
}
