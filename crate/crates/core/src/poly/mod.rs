//! Sparse multivariate polynomials with integer coefficients.

mod parse;

pub use parse::{default_variables, infer_variables, parse_newton_polynomial, parse_polynomial};

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{IgusaError, Result};
use crate::scalar::valuation;

/// Exponent vector of a monomial. Ordered graded-lexicographically:
/// total degree first, then lexicographically on the entries.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ExponentVector(pub Vec<u32>);

impl ExponentVector {
    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn dot(&self, w: &[u64]) -> u64 {
        self.0.iter().zip(w).map(|(&e, &a)| e as u64 * a).sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

impl Ord for ExponentVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// f(x) = Σ a_l x^l with no stored zero coefficient.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    nvars: usize,
    terms: BTreeMap<ExponentVector, BigInt>,
}

impl IntPolynomial {
    pub fn zero(nvars: usize) -> Self {
        IntPolynomial {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms<I>(nvars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<u32>, BigInt)>,
    {
        let mut f = IntPolynomial::zero(nvars);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(IgusaError::DimensionMismatch {
                    expected: nvars,
                    found: e.len(),
                });
            }
            f.add_term(ExponentVector(e), c);
        }
        Ok(f)
    }

    /// Convenience constructor for tests and fixtures; panics on a length mismatch.
    pub fn from_i64(nvars: usize, terms: &[(&[u32], i64)]) -> Self {
        Self::from_terms(
            nvars,
            terms.iter().map(|(e, c)| (e.to_vec(), BigInt::from(*c))),
        )
        .expect("exponent length")
    }

    pub fn add_term(&mut self, e: ExponentVector, c: BigInt) {
        assert_eq!(e.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e.clone()).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ExponentVector, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &ExponentVector) -> BigInt {
        self.terms.get(e).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn support(&self) -> Vec<ExponentVector> {
        self.terms.keys().cloned().collect()
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.keys().map(|e| e.degree()).max().unwrap_or(0)
    }

    pub fn has_constant_term(&self) -> bool {
        self.terms.keys().any(|e| e.is_zero())
    }

    fn check_dims(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(IgusaError::DimensionMismatch {
                expected: self.nvars,
                found: other.nvars,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dims(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&BigInt::from(-1)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_dims(other)?;
        let mut out = IntPolynomial::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1.0.iter().zip(&e2.0).map(|(a, b)| a + b).collect();
                out.add_term(ExponentVector(e), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        let mut out = IntPolynomial::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * k);
        }
        out
    }

    /// Formal partial derivative with respect to variable `i`.
    pub fn partial(&self, i: usize) -> Self {
        let mut out = IntPolynomial::zero(self.nvars);
        for (e, c) in &self.terms {
            if e.0[i] == 0 {
                continue;
            }
            let mut d = e.0.clone();
            d[i] -= 1;
            out.add_term(ExponentVector(d), c * BigInt::from(e.0[i]));
        }
        out
    }

    pub fn partials(&self) -> Vec<Self> {
        (0..self.nvars).map(|i| self.partial(i)).collect()
    }

    /// Keeps only the terms whose exponent satisfies `keep`.
    pub fn restrict(&self, keep: impl Fn(&ExponentVector) -> bool) -> Self {
        IntPolynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| keep(e))
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Coefficients reduced into `{0, …, p-1}`, zero terms dropped.
    pub fn reduce_mod_p(&self, p: u64) -> FpPolynomial {
        let pb = BigInt::from(p);
        let terms = self
            .terms
            .iter()
            .filter_map(|(e, c)| {
                let r = c.mod_floor(&pb).to_u64().unwrap();
                (r != 0).then(|| (e.0.clone(), r))
            })
            .collect();
        FpPolynomial {
            p,
            nvars: self.nvars,
            terms,
        }
    }

    /// Minimum p-adic valuation over the coefficients; `None` for zero.
    pub fn content_valuation(&self, p: u64) -> Option<u32> {
        self.terms.values().filter_map(|c| valuation(c, p)).min()
    }

    /// Exact division of every coefficient by `p^e`.
    pub fn divide_by_p_power(&self, p: u64, e: u32) -> Self {
        let d = BigInt::from(p).pow(e);
        IntPolynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(k, c)| {
                    debug_assert!((c % &d).is_zero());
                    (k.clone(), c / &d)
                })
                .collect(),
        }
    }

    /// f(shift + scale·x), expanded exactly by the binomial theorem.
    pub fn substitute_affine(&self, shift: &[BigInt], scale: &[BigInt]) -> Self {
        assert_eq!(shift.len(), self.nvars);
        assert_eq!(scale.len(), self.nvars);
        // Per-variable expansion tables: (shift_i + scale_i x)^k as coefficient lists.
        let maxdeg: Vec<u32> = (0..self.nvars)
            .map(|i| self.terms.keys().map(|e| e.0[i]).max().unwrap_or(0))
            .collect();
        let tables: Vec<Vec<Vec<BigInt>>> = (0..self.nvars)
            .map(|i| {
                let mut pows = vec![vec![BigInt::one()]];
                for _ in 0..maxdeg[i] {
                    let prev = pows.last().unwrap();
                    let mut next = vec![BigInt::zero(); prev.len() + 1];
                    for (j, c) in prev.iter().enumerate() {
                        next[j] += c * &shift[i];
                        next[j + 1] += c * &scale[i];
                    }
                    pows.push(next);
                }
                pows
            })
            .collect();
        let mut out = IntPolynomial::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut partial: Vec<(Vec<u32>, BigInt)> = vec![(Vec::new(), c.clone())];
            for i in 0..self.nvars {
                let row = &tables[i][e.0[i] as usize];
                let mut next = Vec::with_capacity(partial.len() * row.len());
                for (mono, coef) in &partial {
                    for (k, rc) in row.iter().enumerate() {
                        if rc.is_zero() {
                            continue;
                        }
                        let mut m = mono.clone();
                        m.push(k as u32);
                        next.push((m, coef * rc));
                    }
                }
                partial = next;
            }
            for (m, coef) in partial {
                out.add_term(ExponentVector(m), coef);
            }
        }
        out
    }

    /// Dilatation at `point`: returns `(f_P, e_P)` with
    /// `f(P + p·x) = p^{e_P} · f_P(x)` and `f_P` of unit content.
    pub fn dilate(&self, point: &[BigInt], p: u64) -> Result<(Self, u32)> {
        if self.is_zero() {
            return Err(IgusaError::ZeroPolynomial { context: "dilate" });
        }
        let scale = vec![BigInt::from(p); self.nvars];
        let g = self.substitute_affine(point, &scale);
        let e = g.content_valuation(p).expect("nonzero after substitution");
        Ok((g.divide_by_p_power(p, e), e))
    }

    /// `p^{-m} f(p^{k_1} x_1, …, p^{k_n} x_n)` with `m = min ⟨k, l⟩` over the
    /// support. Returns the polynomial and `m`.
    pub fn monomial_dilation(&self, weight: &[u64], p: u64) -> (Self, u64) {
        let m = self
            .terms
            .keys()
            .map(|e| e.dot(weight))
            .min()
            .unwrap_or(0);
        let pb = BigInt::from(p);
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let shift = e.dot(weight) - m;
                (e.clone(), c * pb.pow(shift as u32))
            })
            .collect();
        (
            IntPolynomial {
                nvars: self.nvars,
                terms,
            },
            m,
        )
    }

    pub fn eval(&self, x: &[BigInt]) -> BigInt {
        assert_eq!(x.len(), self.nvars);
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(&e.0) {
                if k > 0 {
                    t *= xi.pow(k);
                }
            }
            acc += t;
        }
        acc
    }

    /// Value at `x` reduced into `[0, modulus)`.
    pub fn eval_mod(&self, x: &[u64], modulus: u64) -> u64 {
        ModEvaluator::new(self, modulus).eval(x)
    }

    pub fn display_with(&self, vars: &[String]) -> String {
        assert!(vars.len() >= self.nvars);
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (idx, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let factors: Vec<String> = e
                .0
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        vars[i].clone()
                    } else {
                        format!("{}^{}", vars[i], k)
                    }
                })
                .collect();
            if factors.is_empty() {
                s.push_str(&abs.to_string());
            } else {
                if !abs.is_one() {
                    s.push_str(&abs.to_string());
                    s.push('*');
                }
                s.push_str(&factors.join("*"));
            }
        }
        s
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&default_variables(self.nvars)))
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial({self})")
    }
}

/// Polynomial over F_p, coefficients in `1..p`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FpPolynomial {
    p: u64,
    nvars: usize,
    terms: Vec<(Vec<u32>, u64)>,
}

impl FpPolynomial {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> &[(Vec<u32>, u64)] {
        &self.terms
    }

    pub fn eval(&self, x: &[u64]) -> u64 {
        let p = self.p as u128;
        let mut acc: u128 = 0;
        for (e, c) in &self.terms {
            let mut t = *c as u128;
            for (&xi, &k) in x.iter().zip(e) {
                t = t * pow_mod(xi as u128 % p, k, p) % p;
            }
            acc = (acc + t) % p;
        }
        acc as u64
    }

    pub fn partial(&self, i: usize) -> FpPolynomial {
        let mut acc: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let c2 = (*c as u128 * (e[i] as u128 % self.p as u128) % self.p as u128) as u64;
            if c2 == 0 {
                continue;
            }
            let mut d = e.clone();
            d[i] -= 1;
            let slot = acc.entry(d).or_insert(0);
            *slot = (*slot + c2) % self.p;
        }
        FpPolynomial {
            p: self.p,
            nvars: self.nvars,
            terms: acc.into_iter().filter(|(_, c)| *c != 0).collect(),
        }
    }

    pub fn partials(&self) -> Vec<FpPolynomial> {
        (0..self.nvars).map(|i| self.partial(i)).collect()
    }
}

fn pow_mod(mut b: u128, mut e: u32, m: u128) -> u128 {
    let mut r = 1u128 % m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

/// Fast evaluation of an integer polynomial modulo a fixed modulus below 2^63.
#[derive(Clone, Debug)]
pub struct ModEvaluator {
    modulus: u64,
    terms: Vec<(Vec<u32>, u64)>,
}

impl ModEvaluator {
    pub fn new(f: &IntPolynomial, modulus: u64) -> Self {
        assert!((1..(1u64 << 63)).contains(&modulus));
        let m = BigInt::from(modulus);
        let terms = f
            .terms
            .iter()
            .map(|(e, c)| (e.0.clone(), c.mod_floor(&m).to_u64().unwrap()))
            .filter(|(_, c)| *c != 0)
            .collect();
        ModEvaluator { modulus, terms }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn eval(&self, x: &[u64]) -> u64 {
        let m = self.modulus as u128;
        let mut acc: u128 = 0;
        for (e, c) in &self.terms {
            let mut t = *c as u128;
            for (&xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    t = t * pow_mod(xi as u128 % m, k, m) % m;
                }
            }
            acc = (acc + t) % m;
        }
        acc as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars2() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    #[test]
    fn partials_of_examples() {
        let f = parse_polynomial("x^2+x*y+y^2", &vars2()).unwrap();
        let d = f.partials();
        assert_eq!(d[0], parse_polynomial("2*x+y", &vars2()).unwrap());
        assert_eq!(d[1], parse_polynomial("x+2*y", &vars2()).unwrap());

        let g = parse_polynomial("x^2*y^2 + x^5 + y^5", &vars2()).unwrap();
        let d = g.partials();
        assert_eq!(d[0], parse_polynomial("2*x*y^2+5*x^4", &vars2()).unwrap());
        assert_eq!(d[1], parse_polynomial("2*x^2*y+5*y^4", &vars2()).unwrap());

        let z = IntPolynomial::zero(2);
        assert!(z.partials().iter().all(|p| p.is_zero()));
    }

    #[test]
    fn reduce_mod_p_examples() {
        let f = parse_polynomial("x^2+x*y+y^2", &vars2()).unwrap();
        assert_eq!(f.reduce_mod_p(2).num_terms(), 3);
        let g = parse_polynomial("3*x^2+7*y", &vars2()).unwrap();
        let r = g.reduce_mod_p(7);
        assert_eq!(r.terms(), &[(vec![2, 0], 3)]);
        let h = parse_polynomial("5*x+10*y", &vars2()).unwrap();
        assert!(h.reduce_mod_p(5).is_zero());
    }

    #[test]
    fn dilate_examples() {
        let f = parse_polynomial("x^2+x*y+y^2", &vars2()).unwrap();
        for p in [2, 3, 7] {
            let (fp, e) = f.dilate(&[BigInt::zero(), BigInt::zero()], p).unwrap();
            assert_eq!(e, 2);
            assert_eq!(fp, f);
        }
        let x = vec!["x".to_string()];
        let g = parse_polynomial("x^2 + 3*x", &x).unwrap();
        let (gp, e) = g.dilate(&[BigInt::zero()], 3).unwrap();
        assert_eq!(e, 2);
        assert_eq!(gp, parse_polynomial("x^2+x", &x).unwrap());

        let h = parse_polynomial("x", &x).unwrap();
        let (hp, e) = h.dilate(&[BigInt::one()], 5).unwrap();
        assert_eq!(e, 0);
        assert_eq!(hp, parse_polynomial("1+5*x", &x).unwrap());

        assert!(IntPolynomial::zero(1).dilate(&[BigInt::zero()], 5).is_err());
    }

    #[test]
    fn eval_mod_examples() {
        let f = parse_polynomial("x^2+x*y+y^2", &vars2()).unwrap();
        assert_eq!(f.eval_mod(&[1, 2], 7), 0);
        let x = vec!["x".to_string()];
        assert_eq!(parse_polynomial("x", &x).unwrap().eval_mod(&[3], 9), 3);
        let g = parse_polynomial("x^2*y^2+x^5+y^5", &vars2()).unwrap();
        assert_eq!(g.eval_mod(&[1, 1], 3), 0);
        let h = parse_polynomial("x - 7", &x).unwrap();
        assert_eq!(h.eval_mod(&[2], 5), 0);
    }

    #[test]
    fn monomial_dilation_extracts_face_part() {
        let f = parse_polynomial("x^2*y^2 + x^5 + y^5", &vars2()).unwrap();
        let (g, m) = f.monomial_dilation(&[1, 1], 5);
        assert_eq!(m, 4);
        assert_eq!(g, parse_polynomial("x^2*y^2 + 5*x^5 + 5*y^5", &vars2()).unwrap());
    }

    #[test]
    fn display_is_graded_lex_descending() {
        let f = parse_polynomial("y^5 + x^2*y^2 - 3*x^5 + x", &vars2()).unwrap();
        assert_eq!(f.to_string(), "-3*x^5 + y^5 + x^2*y^2 + x");
    }
}
