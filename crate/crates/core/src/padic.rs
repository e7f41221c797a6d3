//! Prime, caps, and multiplicative characters of (Z/p^c)^×.

use std::sync::Arc;

use crate::error::{IgusaError, Result};
use crate::scalar::{euler_phi, is_prime, Cyclo};

pub const DEFAULT_ENUM_CAP: u64 = 10_000_000;
pub const DEFAULT_SPF_DEPTH: usize = 64;

/// The prime `q = p` together with the resource caps shared by every module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PAdicContext {
    pub p: u64,
    /// Maximum number of residue points any exhaustive scan may visit.
    pub enum_cap: u64,
    /// Maximum residue depth (SPF towers and stability refinement).
    pub m_cap: usize,
}

impl PAdicContext {
    pub fn new(p: u64) -> Result<Self> {
        Self::with_caps(p, DEFAULT_ENUM_CAP, DEFAULT_SPF_DEPTH)
    }

    pub fn with_caps(p: u64, enum_cap: u64, m_cap: usize) -> Result<Self> {
        if !is_prime(p) {
            return Err(IgusaError::Config(format!("p = {p} is not prime")));
        }
        if p >= 1 << 20 {
            return Err(IgusaError::Config(format!("p = {p} is too large")));
        }
        if m_cap == 0 {
            return Err(IgusaError::Config("depth cap must be at least 1".into()));
        }
        Ok(PAdicContext { p, enum_cap, m_cap })
    }

    /// Fails with `CapExceeded` unless `p^{exp}` points fit under the cap.
    pub fn check_cap(&self, module: &'static str, exp: u32) -> Result<u64> {
        let needed = (self.p as u128).checked_pow(exp).unwrap_or(u128::MAX);
        if needed > self.enum_cap as u128 {
            return Err(IgusaError::CapExceeded {
                module,
                needed,
                cap: self.enum_cap,
            });
        }
        Ok(needed as u64)
    }
}

/// A multiplicative character χ of O^× factoring through (Z/p^c)^×,
/// extended by χ(0) = 0.
#[derive(Clone, Debug)]
pub struct Character {
    p: u64,
    order: u32,
    conductor: u32,
    modulus: u64,
    generator: u64,
    /// Discrete log table indexed by residue mod p^c; `u64::MAX` for non-units.
    dlog: Arc<Vec<u64>>,
}

impl PartialEq for Character {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.order == other.order && self.conductor == other.conductor
    }
}

impl Character {
    pub fn trivial(p: u64) -> Self {
        Character {
            p,
            order: 1,
            conductor: 1,
            modulus: p,
            generator: 1,
            dlog: Arc::new(Vec::new()),
        }
    }

    /// The character of order `d` and conductor `c` sending a fixed
    /// generator g of (Z/p^c)^× to ζ_d.
    pub fn new(p: u64, d: u32, c: u32) -> Result<Self> {
        if d == 1 {
            if c != 1 {
                return Err(IgusaError::Config(
                    "the trivial character has conductor 1".into(),
                ));
            }
            return Ok(Character::trivial(p));
        }
        if d == 0 || c == 0 {
            return Err(IgusaError::Config("character order and conductor must be positive".into()));
        }
        if p == 2 && c > 2 {
            return Err(IgusaError::Config(
                "(Z/2^c)^× is not cyclic for c > 2; unsupported".into(),
            ));
        }
        let modulus = p
            .checked_pow(c)
            .filter(|&m| m <= DEFAULT_ENUM_CAP)
            .ok_or_else(|| IgusaError::Config(format!("conductor p^{c} too large")))?;
        let group = euler_phi(modulus);
        if !group.is_multiple_of(d as u64) {
            return Err(IgusaError::Config(format!(
                "order {d} does not divide |(Z/{modulus})^×| = {group}"
            )));
        }
        if c > 1 && euler_phi(modulus / p).is_multiple_of(d as u64) {
            return Err(IgusaError::Config(format!(
                "a character of order {d} mod {modulus} has conductor < {c}"
            )));
        }
        let generator = find_generator(p, modulus, group);
        let mut dlog = vec![u64::MAX; modulus as usize];
        let mut x = 1u64;
        for k in 0..group {
            dlog[x as usize] = k;
            x = ((x as u128 * generator as u128) % modulus as u128) as u64;
        }
        Ok(Character {
            p,
            order: d,
            conductor: c,
            modulus,
            generator,
            dlog: Arc::new(dlog),
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    /// p^c, the modulus through which χ factors.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn generator(&self) -> u64 {
        self.generator
    }

    /// Exponent k with χ(u) = ζ_d^k, or `None` when u is not a unit.
    pub fn exponent(&self, u: u64) -> Option<u64> {
        if u.is_multiple_of(self.p) {
            return None;
        }
        if self.order == 1 {
            return Some(0);
        }
        let k = self.dlog[(u % self.modulus) as usize];
        Some(k % self.order as u64)
    }

    /// χ(u) for a residue u modulo (a multiple of) p^c; χ(non-unit) = 0.
    pub fn value(&self, u: u64) -> Cyclo {
        match self.exponent(u) {
            None => Cyclo::rational(num_traits::Zero::zero()),
            Some(k) => Cyclo::root_power(self.order, k),
        }
    }
}

fn find_generator(p: u64, modulus: u64, group: u64) -> u64 {
    let mut primes = Vec::new();
    let mut g = group;
    let mut f = 2;
    while f * f <= g {
        if g.is_multiple_of(f) {
            primes.push(f);
            while g.is_multiple_of(f) {
                g /= f;
            }
        }
        f += 1;
    }
    if g > 1 {
        primes.push(g);
    }
    (1..modulus)
        .filter(|x| x % p != 0)
        .find(|&x| {
            primes
                .iter()
                .all(|&r| pow_mod(x, group / r, modulus) != 1)
        })
        .expect("cyclic unit group has a generator")
}

pub fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let m = m as u128;
    let mut b = b as u128 % m;
    let mut r = 1u128 % m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Coeff;
    use num_traits::Zero;

    #[test]
    fn rejects_bad_configs() {
        assert!(PAdicContext::new(9).is_err());
        assert!(Character::new(7, 4, 1).is_err());
        assert!(Character::new(7, 3, 2).is_err()); // conductor 1 really
        assert!(Character::new(7, 7, 2).is_ok());
    }

    #[test]
    fn character_values() {
        let chi = Character::new(5, 2, 1).unwrap();
        let vals: Vec<_> = (1..5).map(|u| chi.value(u).as_rational().unwrap()).collect();
        // Legendre symbol mod 5.
        let expect: Vec<i64> = vec![1, -1, -1, 1];
        for (v, e) in vals.iter().zip(expect) {
            assert_eq!(*v, crate::scalar::int(e));
        }
        assert!(chi.value(0).is_zero());
        let chi3 = Character::new(7, 3, 1).unwrap();
        let s = (1..7).fold(Cyclo::zero(), |a, u| a + chi3.value(u));
        assert!(s.is_zero());
        let g = chi3.generator();
        assert_eq!(chi3.value(g * g % 7), Cyclo::root_power(3, 2));
    }

    #[test]
    fn cap_check() {
        let ctx = PAdicContext::with_caps(7, 1000, 8).unwrap();
        assert_eq!(ctx.check_cap("t", 3).unwrap(), 343);
        assert!(matches!(
            ctx.check_cap("t", 4),
            Err(IgusaError::CapExceeded { needed: 2401, .. })
        ));
    }
}
