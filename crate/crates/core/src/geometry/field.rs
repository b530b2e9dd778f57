//! Small finite fields GF(p^k) with table-driven arithmetic.
//!
//! Elements are encoded as integers `0..p^k`: the base-p digits of an
//! element are the coefficients of its polynomial representative, lowest
//! degree first. Each extension field uses one fixed modulus so element
//! encodings (and hence generated point labels) never change.

use thiserror::Error;

/// Fixed moduli, coefficients lowest degree first, leading 1 included.
const MODULI: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),    // x^2 + x + 1
    (2, 3, &[1, 1, 0, 1]), // x^3 + x + 1
    (3, 2, &[1, 0, 1]),    // x^2 + 1
    (2, 4, &[1, 1, 0, 0, 1]), // x^4 + x + 1
    (5, 2, &[2, 0, 1]),    // x^2 + 2
];

/// Field sizes that can be constructed.
pub const SUPPORTED_ORDERS: &[u32] = &[2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("GF({p}^{k}) is outside the supported sizes {SUPPORTED_ORDERS:?}")]
    Unsupported { p: u32, k: u32 },
    #[error("modulus for GF({p}^{k}) is reducible")]
    ReducibleModulus { p: u32, k: u32 },
    #[error("no primitive element found in GF({0})")]
    NotCyclic(u32),
    #[error("{0} is not a prime power in range")]
    NotPrimePower(u32),
}

#[derive(Debug, Clone)]
pub struct FiniteField {
    p: u32,
    k: u32,
    modulus: Vec<u32>,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

impl FiniteField {
    pub fn new(p: u32, k: u32) -> Result<Self, FieldError> {
        let size = p.checked_pow(k).ok_or(FieldError::Unsupported { p, k })?;
        if !is_prime(p) || k == 0 || !SUPPORTED_ORDERS.contains(&size) {
            return Err(FieldError::Unsupported { p, k });
        }
        let modulus: Vec<u32> = if k == 1 {
            vec![0, 1]
        } else {
            MODULI
                .iter()
                .find(|(mp, mk, _)| *mp == p && *mk == k)
                .map(|(_, _, m)| m.to_vec())
                .ok_or(FieldError::Unsupported { p, k })?
        };
        if !poly_irreducible(&modulus, p) {
            return Err(FieldError::ReducibleModulus { p, k });
        }

        let n = size as usize;
        let mut add = vec![0; n * n];
        let mut mul = vec![0; n * n];
        for a in 0..size {
            let da = digits(a, p, k);
            for b in 0..size {
                let db = digits(b, p, k);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a as usize * n + b as usize] = undigits(&sum, p);
                mul[a as usize * n + b as usize] = undigits(&poly_mulmod(&da, &db, &modulus, p), p);
            }
        }
        let mut neg = vec![0; n];
        let mut inv = vec![0; n];
        for a in 0..n {
            neg[a] = (0..size).find(|&b| add[a * n + b as usize] == 0).unwrap();
            if a != 0 {
                inv[a] = (1..size).find(|&b| mul[a * n + b as usize] == 1).ok_or(FieldError::NotCyclic(size))?;
            }
        }
        let field = Self { p, k, modulus, add, mul, neg, inv };
        if field.primitive_element().is_none() {
            return Err(FieldError::NotCyclic(size));
        }
        Ok(field)
    }

    /// The field with `q` elements.
    pub fn with_order(q: u32) -> Result<Self, FieldError> {
        let (p, k) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        Self::new(p, k)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.p.pow(self.k)
    }

    /// Modulus coefficients, lowest degree first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[(a * self.order() + b) as usize]
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[(a * self.order() + b) as usize]
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.inv[a as usize])
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Smallest encoded element generating the multiplicative group.
    pub fn primitive_element(&self) -> Option<u32> {
        let size = self.order();
        (1..size).find(|&g| {
            let mut x = g;
            let mut ord = 1;
            while x != 1 {
                x = self.mul(x, g);
                ord += 1;
            }
            ord == size - 1
        })
    }

    /// The Frobenius map `a -> a^p`.
    pub fn frobenius(&self, a: u32) -> u32 {
        self.pow(a, self.p as u64)
    }
}

fn digits(mut a: u32, p: u32, k: u32) -> Vec<u32> {
    (0..k)
        .map(|_| {
            let d = a % p;
            a /= p;
            d
        })
        .collect()
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

/// Product of `a` and `b` reduced modulo monic `m`, over GF(p).
fn poly_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let k = m.len() - 1;
    let mut prod = vec![0u32; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    poly_rem(&mut prod, m, p);
    prod.resize(k, 0);
    prod
}

/// In-place remainder of `a` modulo monic `m`.
fn poly_rem(a: &mut Vec<u32>, m: &[u32], p: u32) {
    let k = m.len() - 1;
    for top in (k..a.len()).rev() {
        let c = a[top];
        if c != 0 {
            for (i, &mc) in m.iter().enumerate() {
                let idx = top - k + i;
                a[idx] = (a[idx] + (p - (c * mc) % p)) % p;
            }
        }
    }
    a.truncate(k.max(1));
}

/// Exhaustive irreducibility test: no monic factor of degree `1..=deg/2`.
fn poly_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    if deg <= 1 {
        return deg == 1;
    }
    for d in 1..=deg / 2 {
        for low in 0..p.pow(d as u32) {
            let mut f = digits(low, p, d as u32);
            f.push(1);
            let mut r = m.to_vec();
            poly_rem(&mut r, &f, p);
            if r.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// `(p, k)` with `q = p^k`, if `q` is a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut k = 0;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}
