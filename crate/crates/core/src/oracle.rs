//! Independent verification by counting: zeros mod p^m, truncated zeta
//! series (plain and twisted) and exponential sums.
//!
//! Uses only the polynomial layer, the scalar types and characters; no
//! polyhedral or stationary-phase code.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{IgusaError, Result};
use crate::padic::Character;
use crate::poly::{IntPolynomial, ModEvaluator};
use crate::ratfun::{first_mismatch, FactoredRatFun};
use crate::scalar::{Coeff, Cyclo, Rational};

/// Which residues mod p the integration domain keeps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleDomain {
    All,
    Torus,
    Residues(Vec<Vec<u64>>),
}

impl OracleDomain {
    fn keeps(&self, residue: &[u64]) -> bool {
        match self {
            OracleDomain::All => true,
            OracleDomain::Torus => residue.iter().all(|&x| x != 0),
            OracleDomain::Residues(list) => list.iter().any(|r| r.as_slice() == residue),
        }
    }
}

fn checked_pow(p: u64, e: u32) -> Option<u64> {
    p.checked_pow(e)
}

fn cap_check(p: u64, exp: u32, cap: u64) -> Result<u64> {
    match checked_pow(p, exp) {
        Some(v) if v <= cap => Ok(v),
        _ => Err(IgusaError::CapExceeded {
            module: "oracle",
            needed: (p as u128).checked_pow(exp).unwrap_or(u128::MAX),
            cap,
        }),
    }
}

/// Visits every x ∈ (Z/modulus)^n.
fn odometer(n: usize, modulus: u64, mut visit: impl FnMut(&[u64])) {
    let mut x = vec![0u64; n];
    loop {
        visit(&x);
        let mut i = 0;
        loop {
            if i == n {
                return;
            }
            x[i] += 1;
            if x[i] < modulus {
                break;
            }
            x[i] = 0;
            i += 1;
        }
    }
}

fn val(x: u64, p: u64, cap: u32) -> u32 {
    if x == 0 {
        return cap;
    }
    let mut v = 0;
    let mut y = x;
    while y.is_multiple_of(p) {
        y /= p;
        v += 1;
    }
    v.min(cap)
}

/// #{x mod p^m : f(x) ≡ 0 mod p^m}.
pub fn count_zeros_mod(f: &IntPolynomial, p: u64, m: u32, cap: u64) -> Result<u64> {
    let n = f.nvars();
    cap_check(p, n as u32 * m, cap)?;
    let modulus = p.pow(m);
    let ev = ModEvaluator::new(f, modulus);
    let mut count = 0u64;
    odometer(n, modulus, |x| {
        if ev.eval(x) == 0 {
            count += 1;
        }
    });
    Ok(count)
}

/// Series coefficients c_0..=c_kmax of ∫_D χ(ac f)|f|^s |dx|.
///
/// Exact enumeration mod p^{kmax+c} when that fits in `cap`; otherwise
/// the class-tree refinement below.
pub fn twisted_coeffs(
    f: &IntPolynomial,
    chi: &Character,
    k_max: usize,
    domain: &OracleDomain,
    cap: u64,
) -> Result<Vec<Cyclo>> {
    let n = f.nvars() as u32;
    let p = chi.p();
    let depth = k_max as u32 + chi.conductor();
    let brute_ok = checked_pow(p, n * depth).is_some_and(|v| v <= cap);
    let acc = if brute_ok {
        brute_force(f, chi, k_max, domain)?
    } else {
        class_tree(f, chi, k_max, domain)?
    };
    Ok(acc.finish(p, chi))
}

/// μ_k = vol{x ∈ D : v(f(x)) = k} for k ≤ kmax.
pub fn measure_coeffs(
    f: &IntPolynomial,
    p: u64,
    k_max: usize,
    domain: &OracleDomain,
    cap: u64,
) -> Result<Vec<Rational>> {
    let c = twisted_coeffs(f, &Character::trivial(p), k_max, domain, cap)?;
    Ok(c.iter().map(|x| x.as_rational().expect("trivial character is rational")).collect())
}

/// Exact accumulators keyed by the volume exponent E (a class has volume
/// p^{-E}): `hits[(k, e, E)]` counts classes with v(f) = k and
/// χ(ac f) = ζ_d^e; `smooth[(k0, E)]` counts submersion classes whose
/// values start at valuation k0.
struct Tally {
    k_max: usize,
    hits: BTreeMap<(usize, u64, u32), u64>,
    smooth: BTreeMap<(usize, u32), u64>,
}

impl Tally {
    fn new(k_max: usize) -> Self {
        Tally {
            k_max,
            hits: BTreeMap::new(),
            smooth: BTreeMap::new(),
        }
    }

    fn finish(&self, p: u64, chi: &Character) -> Vec<Cyclo> {
        let vol = |e: u32| Rational::new(BigInt::one(), BigInt::from(p).pow(e));
        let mut out = vec![Cyclo::zero(); self.k_max + 1];
        for (&(k, e, j), &cnt) in &self.hits {
            let w = vol(j) * Rational::from_integer(cnt.into());
            out[k] = out[k].clone() + Cyclo::root_power(chi.order(), e).scale(&w);
        }
        if chi.is_trivial() {
            // v(h) = r with probability (1 − 1/p) p^{−r} for a Haar-distributed h.
            let pr = Rational::new(BigInt::one(), BigInt::from(p));
            for (&(k0, j), &cnt) in &self.smooth {
                let mut w = vol(j) * Rational::from_integer(cnt.into()) * (Rational::one() - &pr);
                for slot in out.iter_mut().skip(k0) {
                    *slot = slot.clone() + Cyclo::rational(w.clone());
                    w *= &pr;
                }
            }
        }
        out
    }
}

fn brute_force(
    f: &IntPolynomial,
    chi: &Character,
    k_max: usize,
    domain: &OracleDomain,
) -> Result<Tally> {
    let p = chi.p();
    let c = chi.conductor();
    let depth = k_max as u32 + c;
    let modulus = p.pow(depth);
    let ev = ModEvaluator::new(f, modulus);
    let unit_mod = p.pow(c);
    let n = f.nvars() as u32;
    let mut tally = Tally::new(k_max);
    let mut residue = vec![0u64; f.nvars()];
    let mut err = None;
    odometer(f.nvars(), modulus, |x| {
        for (r, xi) in residue.iter_mut().zip(x) {
            *r = xi % p;
        }
        if !domain.keeps(&residue) {
            return;
        }
        let y = ev.eval(x);
        let v = val(y, p, depth);
        if (v as usize) > k_max {
            return;
        }
        let u = (y / p.pow(v)) % unit_mod;
        match chi.exponent(u) {
            Some(e) => *tally.hits.entry((v as usize, e, n * depth)).or_insert(0) += 1,
            None => err = Some(IgusaError::Engine(format!("no character value at {u}"))),
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(tally),
    }
}

/// Recursive refinement of boxes B = x0 + diag(p^{j_1},…,p^{j_n}) Z_p^n.
///
/// On B, f(x0 + p^j y) = Σ c_α y^α exactly; with a = v(c_0) and spread =
/// min_{α≠0} v(c_α), v(f) and ac f mod p^c are constant on B once
/// a + c ≤ spread. Otherwise write f = p^s h(y) with h of unit content. If
/// h̄ has no singular point in F_p^n, each residue class of y is decided:
/// zeros of h̄ are submersion classes (h pushes Haar measure to Haar
/// measure, so the twisted part vanishes and v(h) − 1 is geometric), and
/// non-zeros have constant ac mod p. Singular h̄ splits B along the
/// variables that h̄ actually involves.
fn class_tree(
    f: &IntPolynomial,
    chi: &Character,
    k_max: usize,
    domain: &OracleDomain,
) -> Result<Tally> {
    let p = chi.p();
    let n = f.nvars();
    let c = chi.conductor();
    let kk = k_max as u32;
    let bp = BigInt::from(p);
    let unit_mod = BigInt::from(p.pow(c));
    let mut tally = Tally::new(k_max);

    let big_val = |x: &BigInt| -> u32 {
        let mut v = 0;
        let mut y = x.clone();
        while (&y % &bp).is_zero() {
            y /= &bp;
            v += 1;
        }
        v
    };
    let mut stack: Vec<(Vec<BigInt>, Vec<u32>)> = Vec::new();
    odometer(n, p, |r| {
        if domain.keeps(r) {
            stack.push((r.iter().map(|&x| BigInt::from(x)).collect(), vec![1; n]));
        }
    });
    let mut visited: u64 = 0;
    while let Some((x0, j)) = stack.pop() {
        visited += 1;
        if visited > 50_000_000 {
            return Err(IgusaError::CapExceeded {
                module: "oracle",
                needed: visited as u128,
                cap: 50_000_000,
            });
        }
        let scale: Vec<BigInt> = j.iter().map(|&e| bp.pow(e)).collect();
        let g = f.substitute_affine(&x0, &scale);
        let vol: u32 = j.iter().sum();
        let mut a = u32::MAX;
        let mut spread = u32::MAX;
        let mut c0 = BigInt::zero();
        for (e, coef) in g.terms() {
            let v = big_val(coef);
            if e.is_zero() {
                a = v;
                c0 = coef.clone();
            } else {
                spread = spread.min(v);
            }
        }
        let s = a.min(spread);
        if s > kk {
            continue;
        }
        if a != u32::MAX && a.saturating_add(c) <= spread {
            let u = (&c0 / bp.pow(a)).mod_floor(&unit_mod);
            let e = char_exp(chi, &u)?;
            *tally.hits.entry((a as usize, e, vol)).or_insert(0) += 1;
            continue;
        }
        let h = g.divide_by_p_power(p, s);
        let hbar = h.reduce_mod_p(p);
        let dh: Vec<_> = hbar.partials();
        let mut smooth = true;
        odometer(n, p, |y| {
            if smooth && hbar.eval(y) == 0 && dh.iter().all(|d| d.eval(y) == 0) {
                smooth = false;
            }
        });
        if smooth {
            let child_vol = vol + n as u32;
            let mut pending = Vec::new();
            odometer(n, p, |y| {
                let hv = hbar.eval(y);
                if hv == 0 {
                    *tally.smooth.entry(((s + 1) as usize, child_vol)).or_insert(0) += 1;
                } else if c == 1 {
                    pending.push((s, hv));
                } else {
                    let child: Vec<BigInt> =
                        x0.iter().zip(&scale).zip(y).map(|((x, sc), &t)| x + sc * t).collect();
                    stack.push((child, j.iter().map(|e| e + 1).collect()));
                }
            });
            for (s, hv) in pending {
                let e = char_exp(chi, &BigInt::from(hv))?;
                *tally.hits.entry((s as usize, e, child_vol)).or_insert(0) += 1;
            }
            continue;
        }
        let vars: Vec<usize> = (0..n)
            .filter(|&i| hbar.terms().iter().any(|(e, _)| e[i] > 0))
            .collect();
        odometer(vars.len(), p, |t| {
            let mut child = x0.clone();
            let mut cj = j.clone();
            for (k, &i) in vars.iter().enumerate() {
                child[i] += &scale[i] * t[k];
                cj[i] += 1;
            }
            stack.push((child, cj));
        });
    }
    Ok(tally)
}

fn char_exp(chi: &Character, u: &BigInt) -> Result<u64> {
    let m = BigInt::from(chi.modulus());
    let r = u.mod_floor(&m).to_u64().unwrap();
    chi.exponent(r)
        .ok_or_else(|| IgusaError::Engine(format!("no character value at {r}")))
}

/// E = p^{−nm} Σ_{x mod p^m} exp(2πi u f(x)/p^m), as (re, im).
pub fn exp_sum(f: &IntPolynomial, p: u64, m: u32, u: u64, cap: u64) -> Result<(f64, f64)> {
    if u.is_multiple_of(p) {
        return Err(IgusaError::Config(format!("u = {u} must be a unit mod {p}")));
    }
    let n = f.nvars();
    let total = cap_check(p, n as u32 * m, cap)?;
    let modulus = p.pow(m);
    let ev = ModEvaluator::new(f, modulus);
    // Exact histogram of u·f(x) mod p^m, then one complex sum per residue.
    let mut hist = vec![0u64; modulus as usize];
    odometer(n, modulus, |x| {
        let r = (ev.eval(x) as u128 * u as u128 % modulus as u128) as usize;
        hist[r] += 1;
    });
    let (mut re, mut im) = (0.0f64, 0.0f64);
    for (r, &cnt) in hist.iter().enumerate() {
        if cnt > 0 {
            let theta = 2.0 * std::f64::consts::PI * r as f64 / modulus as f64;
            re += cnt as f64 * theta.cos();
            im += cnt as f64 * theta.sin();
        }
    }
    Ok((re / total as f64, im / total as f64))
}

#[derive(Clone, Debug)]
pub struct SeriesComparison<C> {
    pub engine: Vec<C>,
    pub oracle: Vec<C>,
    pub first_mismatch: Option<usize>,
}

impl<C: Coeff> SeriesComparison<C> {
    pub fn matches(&self) -> bool {
        self.first_mismatch.is_none()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "k_max": self.oracle.len().saturating_sub(1),
            "engine": self.engine.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
            "oracle": self.oracle.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
            "match": self.matches(),
            "first_mismatch": self.first_mismatch,
        })
    }
}

/// Compares the expansion of `z` with an oracle prefix of the same length.
pub fn compare_series<C: Coeff>(z: &FactoredRatFun<C>, prefix: &[C]) -> SeriesComparison<C> {
    let engine = z.series_expand(prefix.len().saturating_sub(1));
    SeriesComparison {
        first_mismatch: first_mismatch(&engine, prefix),
        engine,
        oracle: prefix.to_vec(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{default_variables, parse_polynomial};
    use crate::scalar::rat;

    const CAP: u64 = 10_000_000;

    fn poly(s: &str, n: usize) -> IntPolynomial {
        parse_polynomial(s, &default_variables(n)).unwrap()
    }

    #[test]
    fn zero_counts() {
        assert_eq!(count_zeros_mod(&poly("x", 1), 3, 2, CAP).unwrap(), 1);
        assert_eq!(count_zeros_mod(&poly("x^2+x*y+y^2", 2), 7, 1, CAP).unwrap(), 13);
        assert_eq!(count_zeros_mod(&poly("x^2+y^2", 2), 3, 1, CAP).unwrap(), 1);
        assert!(count_zeros_mod(&poly("x+y+z", 3), 13, 3, CAP).is_err());
    }

    #[test]
    fn measures() {
        let mu = measure_coeffs(&poly("x", 1), 3, 2, &OracleDomain::All, CAP).unwrap();
        assert_eq!(mu, vec![rat(2, 3), rat(2, 9), rat(2, 27)]);
        let mu = measure_coeffs(&poly("x^2+x*y+y^2", 2), 7, 0, &OracleDomain::All, CAP).unwrap();
        assert_eq!(mu[0], rat(36, 49));
        let mu = measure_coeffs(&poly("x^2", 1), 5, 2, &OracleDomain::All, CAP).unwrap();
        assert_eq!(mu, vec![rat(4, 5), rat(0, 1), rat(4, 25)]);
    }

    #[test]
    fn class_tree_agrees_with_enumeration() {
        let cases = [
            ("x^2+x*y+y^2", 2, 3u64),
            ("x^2*y^2+x^5+y^5", 2, 3),
            ("x^3+y^3", 2, 2),
            ("x^2-y^2+3*x*y", 2, 3),
            ("x^2+y^2+z^2", 3, 3),
            ("x*y*z+x^3", 3, 2),
        ];
        for (s, n, p) in cases {
            let f = poly(s, n);
            for dom in [OracleDomain::All, OracleDomain::Torus] {
                for chi in [Character::trivial(p)]
                    .into_iter()
                    .chain(Character::new(p, 2, 1).ok())
                {
                    let a = brute_force(&f, &chi, 3, &dom).unwrap().finish(p, &chi);
                    let b = class_tree(&f, &chi, 3, &dom).unwrap().finish(p, &chi);
                    assert_eq!(a, b, "{s} p={p} {dom:?} order {}", chi.order());
                }
            }
        }
    }

    #[test]
    fn class_tree_with_conductor_two() {
        let chi = Character::new(5, 5, 2).unwrap();
        for s in ["x^2+x*y+y^2", "x^2-y^3", "x*y+5*x^2"] {
            let f = poly(s, 2);
            let a = brute_force(&f, &chi, 2, &OracleDomain::All).unwrap().finish(5, &chi);
            let b = class_tree(&f, &chi, 2, &OracleDomain::All).unwrap().finish(5, &chi);
            assert_eq!(a, b, "{s}");
        }
    }

    #[test]
    fn total_measure() {
        let f = poly("x^2*y^2+x^5+y^5", 2);
        let k = 3;
        let mu = measure_coeffs(&f, 3, k - 1, &OracleDomain::All, CAP).unwrap();
        let nk = count_zeros_mod(&f, 3, k as u32, CAP).unwrap();
        let rest = Rational::new(nk.into(), BigInt::from(3u64).pow(2 * k as u32));
        let s: Rational = mu.iter().sum();
        assert_eq!(s + rest, rat(1, 1));
    }

    #[test]
    fn twisted_examples() {
        let chi = Character::new(5, 2, 1).unwrap();
        let c = twisted_coeffs(&poly("x", 1), &chi, 3, &OracleDomain::All, CAP).unwrap();
        assert!(c.iter().all(|x| x.is_zero()));
        let c = twisted_coeffs(&poly("x^2", 1), &chi, 0, &OracleDomain::All, CAP).unwrap();
        assert_eq!(c[0], Cyclo::rational(rat(4, 5)));
    }

    #[test]
    fn gauss_sum() {
        let (re, im) = exp_sum(&poly("x^2", 1), 3, 1, 1, CAP).unwrap();
        assert!(re.abs() < 1e-12);
        assert!((im - 3f64.sqrt() / 3.0).abs() < 1e-12);
        let (re, im) = exp_sum(&poly("x", 1), 11, 1, 1, CAP).unwrap();
        assert!(re.abs() < 1e-12 && im.abs() < 1e-12);
        let (re, im) = exp_sum(&poly("x^2+x*y+y^2", 2), 7, 1, 1, CAP).unwrap();
        assert!((re * re + im * im).sqrt() <= 1.0);
    }

    #[test]
    fn negative_control() {
        let z = FactoredRatFun::<Rational>::geometric_closed_form(3, &[(1, 1)]);
        let mut prefix = z.series_expand(3);
        assert!(compare_series(&z, &prefix).matches());
        prefix[2] += rat(1, 81);
        assert_eq!(compare_series(&z, &prefix).first_mismatch, Some(2));
    }
}
