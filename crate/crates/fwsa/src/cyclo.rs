//! Exact arithmetic in cyclotomic fields Q(zeta_e).
//!
//! A number is stored as a dense rational coordinate vector in the power
//! basis 1, zeta, ..., zeta^(phi(e)-1), always reduced modulo the e-th
//! cyclotomic polynomial Phi_e, so equality is coordinatewise. Rational
//! numbers embed with all higher coordinates zero; e = 1 is plain Q.
//! Arithmetic between numbers in different ambient fields is an error, not
//! an implicit promotion.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use once_cell::sync::Lazy;

use crate::{Error, Result};

type Poly = Vec<BigRational>;

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn poly_trim(p: &mut Poly) {
    while p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if bj.is_zero() {
                continue;
            }
            out[i + j] += ai * bj;
        }
    }
    poly_trim(&mut out);
    out
}

/// Quotient and remainder of polynomial division; divisor must be nonzero.
fn poly_divmod(num: &[BigRational], den: &[BigRational]) -> (Poly, Poly) {
    let mut rem: Poly = num.to_vec();
    poly_trim(&mut rem);
    let mut den = den.to_vec();
    poly_trim(&mut den);
    assert!(!den.is_empty(), "division by zero polynomial");
    let dlead = den.last().unwrap().clone();
    let dn = den.len();
    if rem.len() < dn {
        return (Vec::new(), rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - dn + 1];
    while rem.len() >= dn {
        let k = rem.len() - dn;
        let c = rem.last().unwrap() / &dlead;
        quot[k] = c.clone();
        for (i, d) in den.iter().enumerate() {
            let v = &c * d;
            rem[k + i] -= v;
        }
        poly_trim(&mut rem);
        if rem.len() >= dn && rem.len() - dn >= k {
            // Leading term did not drop; cannot happen with exact arithmetic.
            unreachable!("polynomial division failed to reduce degree");
        }
    }
    poly_trim(&mut quot);
    (quot, rem)
}

/// Euler totient.
fn totient(e: u64) -> u64 {
    let mut n = e;
    let mut result = e;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result = result / p * (p - 1);
        }
        p += 1;
    }
    if n > 1 {
        result = result / n * (n - 1);
    }
    result
}

/// The e-th cyclotomic polynomial as a little-endian coefficient vector,
/// computed by dividing x^e - 1 by the cyclotomic polynomials of the proper
/// divisors of e.
fn cyclotomic_poly(e: u64) -> Poly {
    if e == 1 {
        return vec![rat(-1), rat(1)];
    }
    let mut num = vec![BigRational::zero(); e as usize + 1];
    num[0] = rat(-1);
    num[e as usize] = rat(1);
    let mut den = vec![rat(1)];
    for d in 1..e {
        if e % d == 0 {
            den = poly_mul(&den, &cyclotomic_poly(d));
        }
    }
    let (quot, rem) = poly_divmod(&num, &den);
    assert!(rem.is_empty(), "cyclotomic division must be exact");
    quot
}

struct FieldData {
    phi: usize,
    modulus: Poly,
    /// x^k mod Phi_e for k in 0..powers.len(); covers every exponent the
    /// arithmetic can produce before reduction.
    powers: Vec<Vec<BigRational>>,
}

impl FieldData {
    fn build(e: u64) -> Self {
        let phi = totient(e) as usize;
        let modulus = cyclotomic_poly(e);
        debug_assert_eq!(modulus.len(), phi + 1);
        let max_pow = (2 * phi).max(e as usize);
        let mut powers: Vec<Vec<BigRational>> = Vec::with_capacity(max_pow);
        let mut cur = vec![BigRational::zero(); phi];
        cur[0] = rat(1);
        powers.push(cur.clone());
        for _ in 1..max_pow {
            // Multiply by x, then reduce the overflow coefficient.
            let mut next = vec![BigRational::zero(); phi + 1];
            for (i, c) in cur.iter().enumerate() {
                next[i + 1] = c.clone();
            }
            let lead = next[phi].clone();
            next.truncate(phi);
            if !lead.is_zero() {
                for i in 0..phi {
                    next[i] -= &lead * &modulus[i];
                }
            }
            cur = next;
            powers.push(cur.clone());
        }
        Self {
            phi,
            modulus,
            powers,
        }
    }
}

static FIELDS: Lazy<Mutex<HashMap<u64, Arc<FieldData>>>> =
    Lazy::new(|| Mutex::new(HashMap::new()));

fn field(e: u64) -> Arc<FieldData> {
    assert!(e >= 1, "cyclotomic exponent must be at least 1");
    let mut map = FIELDS.lock().expect("field registry poisoned");
    map.entry(e)
        .or_insert_with(|| Arc::new(FieldData::build(e)))
        .clone()
}

/// An element of Q(zeta_e) in the reduced power basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cyclo {
    e: u64,
    coords: Vec<BigRational>,
}

impl Cyclo {
    pub fn zero(e: u64) -> Self {
        let f = field(e);
        Self {
            e,
            coords: vec![BigRational::zero(); f.phi],
        }
    }

    pub fn one(e: u64) -> Self {
        Self::from_i64(e, 1)
    }

    pub fn from_i64(e: u64, n: i64) -> Self {
        Self::from_rational(e, rat(n))
    }

    pub fn from_rational(e: u64, q: BigRational) -> Self {
        let f = field(e);
        let mut coords = vec![BigRational::zero(); f.phi];
        coords[0] = q;
        Self { e, coords }
    }

    /// The primitive root zeta_e.
    pub fn zeta(e: u64) -> Self {
        Self::zeta_pow(e, 1)
    }

    /// zeta_e^k, reduced.
    pub fn zeta_pow(e: u64, k: u64) -> Self {
        let f = field(e);
        let k = (k % e) as usize;
        Self {
            e,
            coords: f.powers[k].clone(),
        }
    }

    pub fn exponent(&self) -> u64 {
        self.e
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(|c| c.is_zero())
    }

    pub fn is_rational(&self) -> bool {
        self.coords[1..].iter().all(|c| c.is_zero())
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        if self.is_rational() {
            Some(self.coords[0].clone())
        } else {
            None
        }
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.e != other.e {
            return Err(Error::FieldMismatch(self.e, other.e));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self { e: self.e, coords })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self { e: self.e, coords })
    }

    pub fn neg(&self) -> Self {
        Self {
            e: self.e,
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let f = field(self.e);
        let conv = poly_mul(&self.coords, &other.coords);
        let mut coords = vec![BigRational::zero(); f.phi];
        for (k, c) in conv.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if k < f.phi {
                coords[k] += c;
            } else {
                for (i, p) in f.powers[k].iter().enumerate() {
                    if !p.is_zero() {
                        coords[i] += c * p;
                    }
                }
            }
        }
        Ok(Self { e: self.e, coords })
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against
    /// Phi_e; errors on zero.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Validation("inverse of zero".into()));
        }
        let f = field(self.e);
        // Extended Euclid over Q[x]: u * a + v * Phi = g, g a nonzero constant
        // because Phi_e is irreducible over Q.
        let mut r0: Poly = f.modulus.clone();
        let mut r1: Poly = self.coords.clone();
        poly_trim(&mut r1);
        let mut u0: Poly = Vec::new();
        let mut u1: Poly = vec![rat(1)];
        while !r1.is_empty() {
            let (q, r) = poly_divmod(&r0, &r1);
            let qu = poly_mul(&q, &u1);
            let mut u = u0.clone();
            if u.len() < qu.len() {
                u.resize(qu.len(), BigRational::zero());
            }
            for (i, c) in qu.iter().enumerate() {
                u[i] -= c;
            }
            poly_trim(&mut u);
            r0 = r1;
            r1 = r;
            u0 = u1;
            u1 = u;
        }
        assert_eq!(r0.len(), 1, "gcd with irreducible modulus must be constant");
        let g = r0[0].clone();
        let mut inv = vec![BigRational::zero(); f.phi];
        let (_, reduced) = poly_divmod(&u0, &f.modulus);
        for (i, c) in reduced.iter().enumerate() {
            inv[i] = c / &g;
        }
        let out = Self {
            e: self.e,
            coords: inv,
        };
        debug_assert!(out.try_mul(self).unwrap().is_one());
        Ok(out)
    }

    /// Scales by an exact rational.
    pub fn scale(&self, q: &BigRational) -> Self {
        Self {
            e: self.e,
            coords: self.coords.iter().map(|c| c * q).collect(),
        }
    }

    /// Re-expresses a rational value in another ambient field; errors if the
    /// value is genuinely irrational.
    pub fn with_exponent(&self, e: u64) -> Result<Self> {
        if e == self.e {
            return Ok(self.clone());
        }
        match self.to_rational() {
            Some(q) => Ok(Self::from_rational(e, q)),
            None => Err(Error::FieldMismatch(self.e, e)),
        }
    }

    /// Embeds into Q(zeta_new) along zeta_e = zeta_new^{new_e/e}; the current
    /// exponent must divide the new one.
    pub fn embed(&self, new_e: u64) -> Result<Self> {
        if new_e == self.e {
            return Ok(self.clone());
        }
        if new_e == 0 || new_e % self.e != 0 {
            return Err(Error::FieldMismatch(self.e, new_e));
        }
        let step = (new_e / self.e) as usize;
        let f = field(new_e);
        let mut coords = vec![BigRational::zero(); f.phi];
        for (i, c) in self.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (k, v) in f.powers[i * step].iter().enumerate() {
                coords[k] += c * v;
            }
        }
        Ok(Self { e: new_e, coords })
    }
}

impl fmt::Display for Cyclo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.to_rational() {
            if q.is_integer() {
                return write!(f, "{}", q.numer());
            }
            return write!(f, "{}", q);
        }
        let parts: Vec<String> = self
            .coords
            .iter()
            .map(|c| {
                if c.is_integer() {
                    c.numer().to_string()
                } else {
                    c.to_string()
                }
            })
            .collect();
        write!(f, "z{}:{}", self.e, parts.join(","))
    }
}

/// Formats a rational as an exact string, integer values without denominator.
pub fn rational_string(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        q.to_string()
    }
}

/// True when the rational is a nonnegative integer.
pub fn is_nonneg_integer(q: &BigRational) -> bool {
    q.is_integer() && !q.is_negative()
}
