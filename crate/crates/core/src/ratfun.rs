//! Rational functions in t = q^{-s} with denominators kept as products of
//! factors (1 - q^{-N} t^M).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{IgusaError, Result};
use crate::scalar::{fmt_rational, q_pow, q_pow_neg, Coeff, Rational};

/// The factor 1 - q^{-N} t^M. Ordered by (M, N); M = 0 is the constant 1 - q^{-N}.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DenFactor {
    pub m: u64,
    pub n: u64,
}

impl DenFactor {
    pub fn new(n: u64, m: u64) -> Self {
        assert!((n, m) != (0, 0), "degenerate denominator factor");
        DenFactor { m, n }
    }

    fn coefficients(&self, q: u64) -> Vec<Rational> {
        if self.m == 0 {
            return vec![Rational::one() - q_pow_neg(q, self.n as u32)];
        }
        let mut v = vec![Rational::zero(); self.m as usize + 1];
        v[0] = Rational::one();
        v[self.m as usize] = -q_pow_neg(q, self.n as u32);
        v
    }
}

pub type Denominator = BTreeMap<DenFactor, u32>;

#[derive(Clone, Debug, PartialEq)]
pub struct Term<C> {
    /// Dense coefficients of t^0, t^1, …; no trailing zeros.
    pub num: Vec<C>,
    pub den: Denominator,
}

#[derive(Clone, Debug)]
pub struct FactoredRatFun<C> {
    q: u64,
    terms: Vec<Term<C>>,
}

/// A real pole family s = -N/M (+ 2πik/(M log q)) with its multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoleFamily {
    pub n: u64,
    pub m: u64,
    pub real_part: Rational,
    pub multiplicity: u32,
}

fn trim<C: Coeff>(v: &mut Vec<C>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn padd<C: Coeff>(a: &[C], b: &[C]) -> Vec<C> {
    let n = a.len().max(b.len());
    let mut out: Vec<C> = (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => x.clone() + y.clone(),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => y.clone(),
            (None, None) => C::zero(),
        })
        .collect();
    trim(&mut out);
    out
}

fn pmul<C: Coeff>(a: &[C], b: &[C]) -> Vec<C> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![C::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    trim(&mut out);
    out
}

fn pmul_rat<C: Coeff>(a: &[C], b: &[Rational]) -> Vec<C> {
    let bc: Vec<C> = b.iter().cloned().map(C::from_rational).collect();
    pmul(a, &bc)
}

/// Exact quotient a / (1 - c t^m) if it exists.
fn div_factor<C: Coeff>(a: &[C], f: &DenFactor, q: u64) -> Option<Vec<C>> {
    if a.is_empty() {
        return Some(Vec::new());
    }
    let c = q_pow_neg(q, f.n as u32);
    if f.m == 0 {
        let inv = (Rational::one() - c).recip();
        return Some(a.iter().map(|x| x.scale(&inv)).collect());
    }
    let m = f.m as usize;
    if a.len() <= m {
        return None;
    }
    let qlen = a.len() - m;
    let mut quo: Vec<C> = Vec::with_capacity(qlen);
    for k in 0..qlen {
        let mut v = a[k].clone();
        if k >= m {
            v = v + quo[k - m].scale(&c);
        }
        quo.push(v);
    }
    // Remainder check on the top m coefficients.
    for k in qlen..a.len() {
        let mut v = a[k].clone();
        if k >= m {
            v = v + quo[k - m].scale(&c);
        }
        if !v.is_zero() {
            return None;
        }
    }
    Some(quo)
}

impl<C: Coeff> FactoredRatFun<C> {
    pub fn zero(q: u64) -> Self {
        FactoredRatFun { q, terms: Vec::new() }
    }

    pub fn constant(q: u64, c: C) -> Self {
        Self::monomial(q, c, 0)
    }

    pub fn one(q: u64) -> Self {
        Self::constant(q, C::one())
    }

    /// c · t^k.
    pub fn monomial(q: u64, c: C, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero(q);
        }
        let mut num = vec![C::zero(); k + 1];
        num[k] = c;
        FactoredRatFun {
            q,
            terms: vec![Term {
                num,
                den: Denominator::new(),
            }],
        }
    }

    pub fn from_parts(q: u64, num: Vec<C>, den: Denominator) -> Self {
        let mut num = num;
        trim(&mut num);
        if num.is_empty() {
            return Self::zero(q);
        }
        FactoredRatFun {
            q,
            terms: vec![Term { num, den }],
        }
    }

    /// Σ over y ∈ (N∖{0})^e of q^{-Σ y_j N_j} t^{Σ y_j M_j}
    /// = Π_j q^{-N_j} t^{M_j} / (1 - q^{-N_j} t^{M_j}).
    pub fn geometric_closed_form(q: u64, pairs: &[(u64, u64)]) -> Self {
        let mut out = Self::one(q);
        for &(n, m) in pairs {
            assert!(n >= 1);
            let mut den = Denominator::new();
            den.insert(DenFactor::new(n, m), 1);
            let mut num = vec![C::zero(); m as usize + 1];
            num[m as usize] = C::from_rational(q_pow_neg(q, n as u32));
            out = out.mul(&Self::from_parts(q, num, den)).unwrap();
        }
        out
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn terms(&self) -> &[Term<C>] {
        &self.terms
    }

    pub fn is_zero_repr(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_q(&self, other: &Self) -> Result<()> {
        if self.q != other.q {
            return Err(IgusaError::QMismatch(self.q, other.q));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_q(other)?;
        let mut terms = self.terms.clone();
        for t in &other.terms {
            match terms.iter_mut().find(|s| s.den == t.den) {
                Some(s) => s.num = padd(&s.num, &t.num),
                None => terms.push(t.clone()),
            }
        }
        terms.retain(|t| !t.num.is_empty());
        Ok(FactoredRatFun { q: self.q, terms })
    }

    pub fn neg(&self) -> Self {
        FactoredRatFun {
            q: self.q,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    num: t.num.iter().map(|c| -c.clone()).collect(),
                    den: t.den.clone(),
                })
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_q(other)?;
        let mut out = Self::zero(self.q);
        for a in &self.terms {
            for b in &other.terms {
                let mut den = a.den.clone();
                for (f, k) in &b.den {
                    *den.entry(*f).or_insert(0) += k;
                }
                let t = Self::from_parts(self.q, pmul(&a.num, &b.num), den);
                out = out.add(&t)?;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = self.clone();
        for t in out.terms.iter_mut() {
            t.num = t.num.iter().map(|x| x.clone() * c.clone()).collect();
            trim(&mut t.num);
        }
        out.terms.retain(|t| !t.num.is_empty());
        out
    }

    /// Multiplies by t^k.
    pub fn shift(&self, k: usize) -> Self {
        let mut out = self.clone();
        for t in out.terms.iter_mut() {
            let mut v = vec![C::zero(); k];
            v.append(&mut t.num);
            t.num = v;
        }
        out
    }

    /// Single fraction over the lcm of the factors, with constant factors
    /// absorbed and every factor cancelled while it divides the numerator.
    pub fn normalize(&self) -> Self {
        let mut lcm = Denominator::new();
        for t in &self.terms {
            for (f, &k) in &t.den {
                if f.m == 0 {
                    continue;
                }
                let e = lcm.entry(*f).or_insert(0);
                *e = (*e).max(k);
            }
        }
        let mut num: Vec<C> = Vec::new();
        for t in &self.terms {
            let mut p = t.num.clone();
            for (f, &k) in &t.den {
                if f.m == 0 {
                    for _ in 0..k {
                        p = div_factor(&p, f, self.q).unwrap();
                    }
                }
            }
            for (f, &k) in &lcm {
                let have = t.den.get(f).copied().unwrap_or(0);
                let fc = f.coefficients(self.q);
                for _ in have..k {
                    p = pmul_rat(&p, &fc);
                }
            }
            num = padd(&num, &p);
        }
        if num.is_empty() {
            return Self::zero(self.q);
        }
        let factors: Vec<DenFactor> = lcm.keys().rev().copied().collect();
        for f in factors {
            while lcm[&f] > 0 {
                match div_factor(&num, &f, self.q) {
                    Some(qt) => {
                        num = qt;
                        *lcm.get_mut(&f).unwrap() -= 1;
                    }
                    None => break,
                }
            }
        }
        lcm.retain(|_, k| *k > 0);
        Self::from_parts(self.q, num, lcm)
    }

    /// Numerator and denominator of the normalized form.
    pub fn normalized_parts(&self) -> (Vec<C>, Denominator) {
        let n = self.normalize();
        match n.terms.into_iter().next() {
            Some(t) => (t.num, t.den),
            None => (Vec::new(), Denominator::new()),
        }
    }

    /// Exact equality of the represented functions.
    pub fn equals(&self, other: &Self) -> bool {
        self.q == other.q && self.sub(other).map(|d| d.is_zero()).unwrap_or(false)
    }

    pub fn is_zero(&self) -> bool {
        self.normalize().terms.is_empty()
    }

    /// Whether the function is a polynomial in t.
    pub fn is_polynomial(&self) -> bool {
        self.normalized_parts().1.is_empty()
    }

    /// Taylor coefficients of t^0 … t^{k_max}.
    pub fn series_expand(&self, k_max: usize) -> Vec<C> {
        let len = k_max + 1;
        let mut total = vec![C::zero(); len];
        for t in &self.terms {
            let mut s: Vec<C> = t.num.iter().take(len).cloned().collect();
            for (f, &k) in &t.den {
                for _ in 0..k {
                    if f.m == 0 {
                        let inv = (Rational::one() - q_pow_neg(self.q, f.n as u32)).recip();
                        s = s.iter().map(|x| x.scale(&inv)).collect();
                    } else {
                        // Multiply by 1/(1 - c t^m) = Σ c^j t^{mj}, in place from low degree.
                        let c = q_pow_neg(self.q, f.n as u32);
                        let m = f.m as usize;
                        s.resize(len, C::zero());
                        for i in m..len {
                            let add = s[i - m].scale(&c);
                            s[i] = s[i].clone() + add;
                        }
                    }
                }
            }
            s.resize(len, C::zero());
            for (a, b) in total.iter_mut().zip(s) {
                *a = a.clone() + b;
            }
        }
        total
    }

    /// Value at a rational point t (None at a pole).
    pub fn eval(&self, t: &Rational) -> Option<C> {
        let mut acc = C::zero();
        for term in &self.terms {
            let mut den = Rational::one();
            for (f, &k) in &term.den {
                let fc = f.coefficients(self.q);
                let v = eval_rat(&fc, t);
                for _ in 0..k {
                    den *= &v;
                }
            }
            if den.is_zero() {
                return None;
            }
            let mut pw = Rational::one();
            let mut num = C::zero();
            for c in &term.num {
                num = num + c.scale(&pw);
                pw *= t;
            }
            acc = acc + num.scale(&den.recip());
        }
        Some(acc)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.terms.iter().map(|t| term_json(t)).collect())
    }

    pub fn normalized_json(&self) -> Value {
        let n = self.normalize();
        match n.terms.first() {
            Some(t) => term_json(t),
            None => json!({"num": [], "den": []}),
        }
    }
}

fn term_json<C: Coeff>(t: &Term<C>) -> Value {
    json!({
        "num": t.num.iter().enumerate().filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| json!([k, c.to_json()])).collect::<Vec<_>>(),
        "den": t.den.iter().map(|(f, k)| json!([f.n, f.m, k])).collect::<Vec<_>>(),
    })
}

fn eval_rat(p: &[Rational], t: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * t + c)
}

/// Elements of Q[y]/(y^M - c), used to evaluate at t0 = q^{N/M}.
#[derive(Clone, Debug, PartialEq)]
pub struct RootField {
    pub m: usize,
    pub c: Rational,
}

impl RootField {
    pub fn reduce(&self, p: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.m];
        let mut pw = Rational::one();
        for (i, chunk) in p.chunks(self.m).enumerate() {
            if i > 0 {
                pw *= &self.c;
            }
            for (j, x) in chunk.iter().enumerate() {
                out[j] += x * &pw;
            }
        }
        out
    }

    pub fn mul(&self, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let mut raw = vec![Rational::zero(); a.len() + b.len()];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                raw[i + j] += x * y;
            }
        }
        self.reduce(&raw)
    }

    /// Inverse via the extended Euclidean algorithm against y^M - c.
    pub fn inv(&self, a: &[Rational]) -> Result<Vec<Rational>> {
        let mut modulus = vec![Rational::zero(); self.m + 1];
        modulus[0] = -self.c.clone();
        modulus[self.m] = Rational::one();
        let (g, s) = ext_gcd(a.to_vec(), modulus);
        if g.len() != 1 {
            return Err(IgusaError::RatFun("non-invertible element in Q[y]/(y^M - c)".into()));
        }
        let inv = g[0].recip();
        Ok(self.reduce(&s.iter().map(|x| x * &inv).collect::<Vec<_>>()))
    }

    pub fn to_f64(&self, a: &[Rational]) -> f64 {
        let y = self.c.to_f64().unwrap().powf(1.0 / self.m as f64);
        a.iter()
            .enumerate()
            .map(|(i, x)| x.to_f64().unwrap() * y.powi(i as i32))
            .sum()
    }
}

fn rtrim(v: &mut Vec<Rational>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn rdivmod(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut r = a.to_vec();
    rtrim(&mut r);
    let db = b.len() - 1;
    let lead = b[db].clone();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut quo = vec![Rational::zero(); r.len() - db];
    while r.len() >= b.len() {
        let k = r.len() - 1 - db;
        let c = r.last().unwrap() / &lead;
        for (i, bc) in b.iter().enumerate() {
            r[k + i] -= &c * bc;
        }
        quo[k] = c;
        rtrim(&mut r);
    }
    (quo, r)
}

fn rsub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out: Vec<Rational> = (0..n)
        .map(|i| a.get(i).cloned().unwrap_or_default() - b.get(i).cloned().unwrap_or_default())
        .collect();
    rtrim(&mut out);
    out
}

fn rmul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    rtrim(&mut out);
    out
}

/// (g, s) with s·a ≡ g (mod b), g = gcd(a, b).
fn ext_gcd(a: Vec<Rational>, b: Vec<Rational>) -> (Vec<Rational>, Vec<Rational>) {
    let (mut r0, mut r1) = (a, b);
    rtrim(&mut r0);
    rtrim(&mut r1);
    let (mut s0, mut s1) = (vec![Rational::one()], Vec::<Rational>::new());
    while !r1.is_empty() {
        let (qt, r) = rdivmod(&r0, &r1);
        let s = rsub(&s0, &rmul(&qt, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    (r0, s0)
}

/// Reduced (N', M') with N/M = N'/M'.
fn reduced(n: u64, m: u64) -> (u64, u64) {
    let g = n.gcd(&m);
    (n / g, m / g)
}

/// Exact limit value in Q(q^{N'/M'}), coefficients on 1, y, …, y^{M'-1}.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraicValue {
    pub field: RootField,
    pub coeffs: Vec<Rational>,
}

impl AlgebraicValue {
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs.iter().skip(1).all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.field.to_f64(&self.coeffs)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "basis": format!("y^k, y^{} = {}", self.field.m, fmt_rational(&self.field.c)),
            "coeffs": self.coeffs.iter().map(fmt_rational).collect::<Vec<_>>(),
            "approx": format!("{:.12e}", self.to_f64()),
        })
    }
}

impl FactoredRatFun<Rational> {
    /// Order of the pole at the real point s = -N/M, i.e. at t0 = q^{N/M}.
    pub fn pole_order_at(&self, n: u64, m: u64) -> u32 {
        let (num, den) = self.normalized_parts();
        pole_order(&num, &den, self.q, n, m).0
    }

    /// lim_{s→β} (1 - q^{β-s})^ρ Z for β = -N/M.
    pub fn limit_value(&self, n: u64, m: u64, rho: u32) -> Result<AlgebraicValue> {
        let q = self.q;
        let (np, mp) = reduced(n, m);
        let field = RootField {
            m: mp as usize,
            c: q_pow(q, np as i64),
        };
        let (num, den) = self.normalized_parts();
        let (order, v, kk, reduced_num) = pole_order(&num, &den, q, n, m);
        let zero = AlgebraicValue {
            field: field.clone(),
            coeffs: vec![Rational::zero(); mp as usize],
        };
        if num.is_empty() || (rho as i64) > kk as i64 - v as i64 {
            return Ok(zero);
        }
        if (rho as i64) < kk as i64 - v as i64 {
            return Err(IgusaError::InfiniteLimit { order, rho });
        }
        // P = g^v · P̃ with g = t^{M'} - q^{N'} ≈ -q^{N'} M' (1 - t/t0);
        // each matching factor 1 - u^g ≈ g·M'·(1 - t/t0).
        let mut value = field.reduce(&reduced_num);
        let scal = Rational::from_integer(-BigInt::from(q).pow(np as u32) * BigInt::from(mp));
        let mut c = Rational::one();
        for _ in 0..v {
            c *= &scal;
        }
        let mut denom = vec![Rational::one()];
        for (f, &k) in &den {
            if f.m > 0 && reduced(f.n, f.m) == (np, mp) {
                let g = f.m / mp;
                for _ in 0..k {
                    c /= Rational::from_integer(BigInt::from(g * mp));
                }
            } else {
                let fv = field.reduce(&f.coefficients(q));
                for _ in 0..k {
                    denom = field.mul(&denom, &fv);
                }
            }
        }
        value = value.iter().map(|x| x * &c).collect();
        let inv = field.inv(&denom)?;
        Ok(AlgebraicValue {
            coeffs: field.mul(&value, &inv),
            field,
        })
    }

    /// Real pole families of the normalized function, sorted by real part descending.
    pub fn pole_families(&self) -> Vec<PoleFamily> {
        let (num, den) = self.normalized_parts();
        let mut ratios: Vec<(u64, u64)> = den
            .keys()
            .filter(|f| f.m > 0)
            .map(|f| reduced(f.n, f.m))
            .collect();
        ratios.sort();
        ratios.dedup();
        let mut out: Vec<PoleFamily> = ratios
            .into_iter()
            .filter_map(|(n, m)| {
                let k = pole_order(&num, &den, self.q, n, m).0;
                (k > 0).then(|| PoleFamily {
                    n,
                    m,
                    real_part: -Rational::new(BigInt::from(n), BigInt::from(m)),
                    multiplicity: k,
                })
            })
            .collect();
        out.sort_by(|a, b| b.real_part.cmp(&a.real_part));
        out
    }
}

/// Returns (clamped pole order, numerator vanishing order v, matching
/// denominator multiplicity K, numerator with g^v divided out).
fn pole_order(
    num: &[Rational],
    den: &Denominator,
    q: u64,
    n: u64,
    m: u64,
) -> (u32, u32, u32, Vec<Rational>) {
    let (np, mp) = reduced(n, m);
    let mut g = vec![Rational::zero(); mp as usize + 1];
    g[0] = -q_pow(q, np as i64);
    g[mp as usize] = Rational::one();
    let mut p = num.to_vec();
    rtrim(&mut p);
    let mut v = 0u32;
    while !p.is_empty() {
        let (qt, r) = rdivmod(&p, &g);
        if !r.is_empty() {
            break;
        }
        p = qt;
        v += 1;
    }
    let kk: u32 = den
        .iter()
        .filter(|(f, _)| f.m > 0 && reduced(f.n, f.m) == (np, mp))
        .map(|(_, &k)| k)
        .sum();
    let order = kk.saturating_sub(v);
    (order, v, kk, p)
}

/// First index where two coefficient sequences differ.
pub fn first_mismatch<C: Coeff>(a: &[C], b: &[C]) -> Option<usize> {
    (0..a.len().max(b.len())).find(|&i| a.get(i) != b.get(i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    type RF = FactoredRatFun<Rational>;

    fn den(items: &[(u64, u64, u32)]) -> Denominator {
        items
            .iter()
            .map(|&(n, m, k)| (DenFactor::new(n, m), k))
            .collect()
    }

    #[test]
    fn add_and_mul_basics() {
        let q = 3;
        let f = RF::from_parts(q, vec![int(1)], den(&[(1, 1, 1)]));
        assert!(f.add(&RF::zero(q)).unwrap().equals(&f));
        let g = RF::from_parts(q, vec![int(1), rat(-1, 3)], Denominator::new());
        let prod = g.mul(&f).unwrap().normalize();
        assert!(prod.equals(&RF::one(q)));
        assert_eq!(prod.normalized_parts().1.len(), 0);
        assert!(f.add(&RF::zero(5)).is_err());
    }

    #[test]
    fn normalize_cancels() {
        let q = 5;
        let f = RF::from_parts(q, vec![int(1), rat(-1, 5)], den(&[(1, 1, 2)]));
        let (num, d) = f.normalized_parts();
        assert_eq!(num, vec![int(1)]);
        assert_eq!(d, den(&[(1, 1, 1)]));
        let n2 = f.normalize().normalize();
        assert!(n2.equals(&f));
    }

    #[test]
    fn geometric_forms() {
        let q = 3;
        let g = RF::geometric_closed_form(q, &[(1, 0)]);
        assert_eq!(g.eval(&int(0)).unwrap(), rat(1, 2)); // q^-1/(1-q^-1) = 1/2
        let g = RF::geometric_closed_form(q, &[(5, 10)]);
        let s = g.series_expand(20);
        assert_eq!(s[10], q_pow_neg(3, 5));
        assert_eq!(s[20], q_pow_neg(3, 10));
        assert!(s[5].is_zero());
        assert!(RF::geometric_closed_form(q, &[]).equals(&RF::one(q)));
    }

    #[test]
    fn series() {
        let f = RF::from_parts(3, vec![int(1)], den(&[(1, 1, 1)]));
        assert_eq!(f.series_expand(2), vec![int(1), rat(1, 3), rat(1, 9)]);
        let g = RF::from_parts(3, vec![rat(2, 3)], den(&[(1, 1, 1)]));
        assert_eq!(g.series_expand(1), vec![rat(2, 3), rat(2, 9)]);
    }

    #[test]
    fn pole_orders_and_limits() {
        // 1/(1 - q^{-1} t)^2 at s = -1: order 2, limit 1.
        let q = 7;
        let f = RF::from_parts(q, vec![int(1)], den(&[(1, 1, 2)]));
        assert_eq!(f.pole_order_at(1, 1), 2);
        assert_eq!(f.limit_value(1, 1, 2).unwrap().as_rational(), Some(int(1)));
        assert_eq!(f.limit_value(1, 1, 3).unwrap().as_rational(), Some(int(0)));
        assert!(f.limit_value(1, 1, 1).is_err());
        // 1/(1 - q^{-2} t^2) at s = -1: factor = (1 - u)(1 + u), limit 1/2.
        let g = RF::from_parts(q, vec![int(1)], den(&[(2, 2, 1)]));
        assert_eq!(g.pole_order_at(1, 1), 1);
        assert_eq!(g.limit_value(1, 1, 1).unwrap().as_rational(), Some(rat(1, 2)));
        // 1/(1 - q^{-1} t^2) at s = -1/2: t0 = sqrt(q), 1 - t/t0 ~ (1 - t^2/q)/2.
        let h = RF::from_parts(q, vec![int(1)], den(&[(1, 2, 1)]));
        assert_eq!(h.pole_order_at(1, 2), 1);
        assert_eq!(h.limit_value(1, 2, 1).unwrap().as_rational(), Some(rat(1, 2)));
        // t/(1 - q^{-1}t^2) at s = -1/2 is irrational: sqrt(7)/2.
        let k = RF::from_parts(q, vec![int(0), int(1)], den(&[(1, 2, 1)]));
        let v = k.limit_value(1, 2, 1).unwrap();
        assert_eq!(v.coeffs, vec![int(0), rat(1, 2)]);
        assert!((v.to_f64() - 7f64.sqrt() / 2.0).abs() < 1e-12);
        // Numerator vanishing lowers the order.
        let z = RF::from_parts(q, vec![int(-7), int(0), int(1)], den(&[(1, 2, 2)]));
        assert_eq!(z.pole_order_at(1, 2), 1);
    }

    #[test]
    fn root_field_inverse() {
        let f = RootField { m: 2, c: int(5) };
        let a = vec![int(1), int(1)]; // 1 + sqrt5
        let inv = f.inv(&a).unwrap();
        assert_eq!(f.mul(&a, &inv), vec![int(1), int(0)]);
    }

    #[test]
    fn pole_families_listing() {
        let q = 5;
        let f = RF::from_parts(q, vec![int(1)], den(&[(1, 1, 1), (5, 10, 2)]));
        let fams = f.pole_families();
        assert_eq!(fams.len(), 2);
        assert_eq!(fams[0].real_part, rat(-1, 2));
        assert_eq!(fams[0].multiplicity, 2);
        assert_eq!(fams[1].real_part, int(-1));
    }
}
