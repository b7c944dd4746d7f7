//! Exact arithmetic in small finite fields GF(p^k), p^k <= 256.
//!
//! Elements are coefficient vectors over GF(p) packed base-p into a single
//! integer code; multiplication goes through log/antilog tables built once
//! per field. The characteristic-2 square root (a |-> a^(2^(k-1))) is exact
//! and unique.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_ORDER: u32 = 256;

/// Default moduli (Conway-style, coefficients low-to-high, monic) per (p, k).
/// Fixed so serialized data is portable across runs.
const DEFAULT_MODULI: &[(u32, u32, &[u32])] = &[
    (2, 1, &[1, 1]),
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 1, 1, 0, 1]),
    (2, 7, &[1, 1, 0, 0, 0, 0, 0, 1]),
    (2, 8, &[1, 0, 1, 1, 1, 0, 0, 0, 1]),
    (3, 1, &[1, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (3, 4, &[2, 0, 0, 2, 1]),
    (3, 5, &[1, 2, 0, 0, 0, 1]),
    (5, 1, &[3, 1]),
    (5, 2, &[2, 4, 1]),
    (5, 3, &[3, 3, 0, 1]),
    (7, 1, &[4, 1]),
    (7, 2, &[3, 6, 1]),
];

#[derive(Debug)]
struct FieldInner {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    /// exp[i] = g^i for a fixed generator g, i in [0, q-1); exp has length 2(q-1)
    /// so products of logs index without a reduction.
    exp: Vec<u16>,
    /// log[code] for nonzero codes; log[0] unused.
    log: Vec<u16>,
}

/// A small finite field GF(p^k). Cheap to clone; immutable and thread-safe.
#[derive(Clone)]
pub struct Field(Arc<FieldInner>);

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.0.q)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.k == other.0.k && self.0.modulus == other.0.modulus)
    }
}
impl Eq for Field {}

fn is_prime(p: u32) -> bool {
    matches!(p, 2 | 3 | 5 | 7)
}

/// Polynomial multiplication mod (modulus, p), coefficients low-to-high.
fn poly_mul_mod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let k = modulus.len() - 1;
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai * bj) % p;
        }
    }
    // reduce: modulus is monic of degree k
    for d in (k..prod.len()).rev() {
        let c = prod[d];
        if c == 0 {
            continue;
        }
        prod[d] = 0;
        for j in 0..k {
            let sub = (c * modulus[j]) % p;
            prod[d - k + j] = (prod[d - k + j] + p * p - sub) % p;
        }
    }
    prod.truncate(k.max(1));
    prod.resize(k.max(1), 0);
    prod
}

fn code_of(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn coeffs_of(code: u32, p: u32, k: u32) -> Vec<u32> {
    let mut c = code;
    (0..k)
        .map(|_| {
            let d = c % p;
            c /= p;
            d
        })
        .collect()
}

/// Irreducibility over GF(p) by trial division by all monic polynomials of
/// degree in [1, k/2]. Fine for k <= 8, p <= 7.
fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let k = modulus.len() - 1;
    if k == 1 {
        return true;
    }
    if modulus[k] != 1 {
        return false;
    }
    for d in 1..=k / 2 {
        // all monic divisor candidates of degree d
        let count = p.pow(d as u32);
        for code in 0..count {
            let mut div = coeffs_of(code, p, d as u32);
            div.push(1);
            if poly_divides(&div, modulus, p) {
                return false;
            }
        }
    }
    true
}

/// Does monic `div` divide `poly` over GF(p)?
fn poly_divides(div: &[u32], poly: &[u32], p: u32) -> bool {
    let mut rem: Vec<u32> = poly.to_vec();
    let dd = div.len() - 1;
    while rem.len() > dd {
        let lead = *rem.last().unwrap();
        let deg = rem.len() - 1;
        if lead != 0 {
            for j in 0..=dd {
                let sub = (lead * div[j]) % p;
                rem[deg - dd + j] = (rem[deg - dd + j] + p * p - sub) % p;
            }
        }
        rem.pop();
    }
    rem.iter().all(|&c| c == 0)
}

impl Field {
    /// Construct GF(p^k). With `modulus == None` a fixed built-in table entry
    /// is used; an explicit modulus must be monic irreducible of degree k.
    pub fn new(p: u32, k: u32, modulus: Option<Vec<u32>>) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::Construction(format!("p = {p} is not one of 2,3,5,7")));
        }
        if k < 1 {
            return Err(Error::Construction("extension degree k must be >= 1".into()));
        }
        let q = p.checked_pow(k).filter(|&q| q <= MAX_ORDER).ok_or_else(|| {
            Error::Size(format!("p^k = {p}^{k} exceeds the supported bound {MAX_ORDER}"))
        })?;
        let modulus = match modulus {
            Some(m) => {
                let mut m = m;
                while m.len() > 1 && m.last() == Some(&0) {
                    m.pop();
                }
                if m.len() != k as usize + 1 {
                    return Err(Error::Construction(format!(
                        "modulus must have degree {k}, got degree {}",
                        m.len().saturating_sub(1)
                    )));
                }
                if m.iter().any(|&c| c >= p) {
                    return Err(Error::Construction("modulus coefficients must lie in [0, p)".into()));
                }
                if !is_irreducible(&m, p) {
                    return Err(Error::Construction("modulus is reducible over GF(p)".into()));
                }
                m
            }
            None => DEFAULT_MODULI
                .iter()
                .find(|&&(dp, dk, _)| dp == p && dk == k)
                .map(|&(_, _, m)| m.to_vec())
                .ok_or_else(|| Error::Construction(format!("no default modulus for ({p},{k})")))?,
        };
        debug_assert!(is_irreducible(&modulus, p));

        // Find a generator of the multiplicative group and build log/antilog.
        let mul = |a: u32, b: u32| {
            let ac = coeffs_of(a, p, k);
            let bc = coeffs_of(b, p, k);
            code_of(&poly_mul_mod(&ac, &bc, &modulus, p), p)
        };
        let mut generator = 0;
        'search: for g in 1..q {
            let mut x = 1u32;
            for _ in 0..q - 2 {
                x = mul(x, g);
                if x == 1 {
                    continue 'search;
                }
            }
            if mul(x, g) == 1 {
                generator = g;
                break;
            }
        }
        if generator == 0 {
            return Err(Error::Construction("no multiplicative generator found".into()));
        }
        let mut exp = vec![0u16; 2 * (q as usize - 1)];
        let mut log = vec![0u16; q as usize];
        let mut x = 1u32;
        for i in 0..q as usize - 1 {
            exp[i] = x as u16;
            exp[i + q as usize - 1] = x as u16;
            log[x as usize] = i as u16;
            x = mul(x, generator);
        }
        Ok(Field(Arc::new(FieldInner { p, k, q, modulus, exp, log })))
    }

    pub fn p(&self) -> u32 {
        self.0.p
    }
    pub fn k(&self) -> u32 {
        self.0.k
    }
    pub fn order(&self) -> u32 {
        self.0.q
    }
    pub fn characteristic(&self) -> u32 {
        self.0.p
    }
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn zero(&self) -> Elt {
        Elt { field: self.clone(), code: 0 }
    }
    pub fn one(&self) -> Elt {
        Elt { field: self.clone(), code: 1 }
    }

    /// Element from its packed code in [0, q).
    pub fn elt(&self, code: u32) -> Elt {
        assert!(code < self.0.q, "element code {code} out of range");
        Elt { field: self.clone(), code }
    }

    /// Element from its coefficient vector, low-to-high.
    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Elt> {
        if coeffs.len() > self.0.k as usize || coeffs.iter().any(|&c| c >= self.0.p) {
            return Err(Error::Parse(format!(
                "coefficient vector {coeffs:?} invalid for GF({})",
                self.0.q
            )));
        }
        Ok(self.elt(code_of(coeffs, self.0.p)))
    }

    pub fn from_int(&self, n: u32) -> Elt {
        // n mod p embedded in the prime field
        let r = n % self.0.p;
        self.elt(r)
    }

    /// All q elements, in code order.
    pub fn elements(&self) -> impl Iterator<Item = Elt> + '_ {
        (0..self.0.q).map(move |c| self.elt(c))
    }

    pub(crate) fn add_codes(&self, a: u32, b: u32) -> u32 {
        let p = self.0.p;
        if p == 2 {
            return a ^ b;
        }
        let ac = coeffs_of(a, p, self.0.k);
        let bc = coeffs_of(b, p, self.0.k);
        let sum: Vec<u32> = ac.iter().zip(&bc).map(|(&x, &y)| (x + y) % p).collect();
        code_of(&sum, p)
    }

    pub(crate) fn neg_code(&self, a: u32) -> u32 {
        let p = self.0.p;
        if p == 2 {
            return a;
        }
        let ac = coeffs_of(a, p, self.0.k);
        let neg: Vec<u32> = ac.iter().map(|&x| (p - x) % p).collect();
        code_of(&neg, p)
    }

    pub(crate) fn mul_codes(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let inner = &self.0;
        inner.exp[inner.log[a as usize] as usize + inner.log[b as usize] as usize] as u32
    }

    pub(crate) fn inv_code(&self, a: u32) -> u32 {
        debug_assert!(a != 0);
        let inner = &self.0;
        let l = inner.log[a as usize] as usize;
        if l == 0 {
            1
        } else {
            inner.exp[inner.q as usize - 1 - l] as u32
        }
    }
}

/// An element of a [`Field`]. Immutable value; arithmetic is exact.
#[derive(Clone)]
pub struct Elt {
    field: Field,
    code: u32,
}

impl fmt::Debug for Elt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code)
    }
}

impl PartialEq for Elt {
    fn eq(&self, other: &Self) -> bool {
        self.code == other.code && self.field == other.field
    }
}
impl Eq for Elt {}

impl Elt {
    pub fn field(&self) -> &Field {
        &self.field
    }
    pub fn code(&self) -> u32 {
        self.code
    }
    pub fn coeffs(&self) -> Vec<u32> {
        coeffs_of(self.code, self.field.0.p, self.field.0.k)
    }
    pub fn is_zero(&self) -> bool {
        self.code == 0
    }
    pub fn is_one(&self) -> bool {
        self.code == 1
    }

    fn same_field(&self, other: &Elt) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, other: &Elt) -> Result<Elt> {
        self.same_field(other)?;
        Ok(self.field.elt(self.field.add_codes(self.code, other.code)))
    }

    pub fn sub(&self, other: &Elt) -> Result<Elt> {
        self.same_field(other)?;
        Ok(self
            .field
            .elt(self.field.add_codes(self.code, self.field.neg_code(other.code))))
    }

    pub fn mul(&self, other: &Elt) -> Result<Elt> {
        self.same_field(other)?;
        Ok(self.field.elt(self.field.mul_codes(self.code, other.code)))
    }

    pub fn div(&self, other: &Elt) -> Result<Elt> {
        self.same_field(other)?;
        if other.code == 0 {
            return Err(Error::DivideByZero);
        }
        Ok(self
            .field
            .elt(self.field.mul_codes(self.code, self.field.inv_code(other.code))))
    }

    pub fn neg(&self) -> Elt {
        self.field.elt(self.field.neg_code(self.code))
    }

    pub fn inv(&self) -> Result<Elt> {
        if self.code == 0 {
            return Err(Error::DivideByZero);
        }
        Ok(self.field.elt(self.field.inv_code(self.code)))
    }

    pub fn square(&self) -> Elt {
        self.field.elt(self.field.mul_codes(self.code, self.code))
    }

    /// The unique square root in characteristic 2, computed as a^(2^(k-1)).
    pub fn sqrt_char2(&self) -> Result<Elt> {
        let p = self.field.characteristic();
        if p != 2 {
            return Err(Error::Characteristic { expected: 2, found: p });
        }
        let mut x = self.clone();
        for _ in 0..self.field.k().saturating_sub(1) {
            x = x.square();
        }
        debug_assert_eq!(x.square(), *self);
        Ok(x)
    }
}

/// Serde-facing field description: {"p":2,"k":2,"modulus":[1,1,1]}.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    pub k: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
}

impl FieldSpec {
    pub fn build(&self) -> Result<Field> {
        Field::new(self.p, self.k, self.modulus.clone())
    }

    pub fn of(field: &Field) -> FieldSpec {
        FieldSpec {
            p: field.p(),
            k: field.k(),
            modulus: Some(field.modulus().to_vec()),
        }
    }
}
