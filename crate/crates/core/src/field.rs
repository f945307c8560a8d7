//! Arithmetic in GF(p^n) with a fixed, deterministically chosen modulus.
//!
//! Elements are coefficient vectors in the generator `x`, little-endian.
//! The modulus is the lexicographically least monic irreducible of degree
//! `n` over Z_p, compared on the tuple `(c_{n-1}, ..., c_0)`.
//!
//! [`FieldTables`] precomputes dense lookup tables over the integer coding
//! `index = Σ c_i p^i` for the small fields the matrix groups live over.

use std::fmt;

use thiserror::Error;

/// Largest supported field order.
pub const MAX_FIELD_ORDER: u64 = 1 << 16;

/// Largest field order for which [`FieldTables`] are built.
pub const MAX_TABLE_ORDER: u32 = 256;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("extension degree {0} out of range 1..=16")]
    DegreeOutOfRange(u32),
    #[error("field order {p}^{n} exceeds 2^16")]
    OrderTooLarge { p: u32, n: u32 },
    #[error("element does not belong to GF({p}^{n})")]
    Mismatch { p: u32, n: u32 },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("suzuki twist needs GF(2^(2m+1)) with m = {m}, got GF({p}^{n})")]
    NotSuzukiField { p: u32, n: u32, m: u32 },
    #[error("field of order {0} is too large for lookup tables")]
    TableTooLarge(u32),
}

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= p as u64 {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` as `p^n` when it is a prime power.
pub fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let mut rest = q;
    let mut n = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        n += 1;
    }
    (rest == 1 && p <= u32::MAX as u64).then_some((p as u32, n))
}

/// Field description: characteristic, degree and modulus.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u32,
    n: u32,
    /// `(c_{n-1}, ..., c_0)` of the monic modulus `x^n + c_{n-1} x^{n-1} + ... + c_0`.
    modulus: Vec<u32>,
    /// Little-endian `(c_0, ..., c_{n-1})`.
    low: Vec<u32>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}) mod {:?}", self.p, self.n, self.modulus)
    }
}

/// An element of GF(p^n): `n` residues mod `p`, little-endian in `x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    coeffs: Vec<u32>,
}

impl FieldElement {
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

impl FieldSpec {
    /// Builds GF(p^n) with the lexicographically least irreducible modulus.
    pub fn new(p: u32, n: u32) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        if !(1..=16).contains(&n) {
            return Err(FieldError::DegreeOutOfRange(n));
        }
        if (p as u64)
            .checked_pow(n)
            .is_none_or(|q| q > MAX_FIELD_ORDER)
        {
            return Err(FieldError::OrderTooLarge { p, n });
        }
        let n_us = n as usize;
        // Walk tuples (c_{n-1}, ..., c_0) in lexicographic order.
        let mut tuple = vec![0u32; n_us];
        loop {
            let low: Vec<u32> = tuple.iter().rev().copied().collect();
            let mut poly: Vec<u64> = low.iter().map(|&c| c as u64).collect();
            poly.push(1);
            if is_irreducible(&poly, p as u64) {
                return Ok(FieldSpec {
                    p,
                    n,
                    modulus: tuple,
                    low,
                });
            }
            // increment, last position fastest
            let mut i = n_us;
            loop {
                if i == 0 {
                    unreachable!("irreducible polynomials exist in every degree");
                }
                i -= 1;
                tuple[i] += 1;
                if tuple[i] < p {
                    break;
                }
                tuple[i] = 0;
            }
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.p.pow(self.n)
    }

    /// Modulus tail as `(c_{n-1}, ..., c_0)`.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            coeffs: vec![0; self.n as usize],
        }
    }

    pub fn one(&self) -> FieldElement {
        self.constant(1)
    }

    pub fn constant(&self, c: u32) -> FieldElement {
        let mut e = self.zero();
        e.coeffs[0] = c % self.p;
        e
    }

    /// The class of `x`; equals the constant `-c_0` when `n == 1`.
    pub fn generator(&self) -> FieldElement {
        if self.n == 1 {
            return self.constant((self.p - self.low[0]) % self.p);
        }
        let mut e = self.zero();
        e.coeffs[1] = 1;
        e
    }

    pub fn element(&self, coeffs: &[u32]) -> Result<FieldElement, FieldError> {
        let e = FieldElement {
            coeffs: coeffs.to_vec(),
        };
        self.check(&e)?;
        Ok(e)
    }

    pub fn from_index(&self, mut index: u32) -> FieldElement {
        let mut e = self.zero();
        for c in e.coeffs.iter_mut() {
            *c = index % self.p;
            index /= self.p;
        }
        e
    }

    pub fn to_index(&self, e: &FieldElement) -> u32 {
        e.coeffs.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.order()).map(|i| self.from_index(i))
    }

    fn check(&self, e: &FieldElement) -> Result<(), FieldError> {
        if e.coeffs.len() != self.n as usize || e.coeffs.iter().any(|&c| c >= self.p) {
            return Err(FieldError::Mismatch {
                p: self.p,
                n: self.n,
            });
        }
        Ok(())
    }

    pub fn add(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(a)?;
        self.check(b)?;
        Ok(FieldElement {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(x, y)| (x + y) % self.p)
                .collect(),
        })
    }

    pub fn neg(&self, a: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(a)?;
        Ok(FieldElement {
            coeffs: a.coeffs.iter().map(|&x| (self.p - x) % self.p).collect(),
        })
    }

    pub fn sub(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement, FieldError> {
        self.add(a, &self.neg(b)?)
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(a)?;
        self.check(b)?;
        let n = self.n as usize;
        let p = self.p as u64;
        let mut prod = vec![0u64; 2 * n - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        // x^n = -(c_0 + c_1 x + ... + c_{n-1} x^{n-1})
        for k in (n..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for (i, &l) in self.low.iter().enumerate() {
                let t = c * l as u64 % p;
                prod[k - n + i] = (prod[k - n + i] + p - t) % p;
            }
        }
        Ok(FieldElement {
            coeffs: prod[..n].iter().map(|&c| c as u32).collect(),
        })
    }

    pub fn pow(&self, a: &FieldElement, mut e: u64) -> Result<FieldElement, FieldError> {
        self.check(a)?;
        let mut base = a.clone();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base)?;
            }
            base = self.mul(&base, &base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Multiplicative inverse via `a^(q-2)`.
    pub fn inv(&self, a: &FieldElement) -> Result<FieldElement, FieldError> {
        self.check(a)?;
        if a.is_zero() {
            return Err(FieldError::ZeroInverse);
        }
        self.pow(a, self.order() as u64 - 2)
    }

    /// `a ↦ a^p`.
    pub fn frobenius(&self, a: &FieldElement) -> Result<FieldElement, FieldError> {
        self.pow(a, self.p as u64)
    }

    /// The Suzuki twist `a ↦ a^(2^(m+1))` on GF(2^(2m+1)); applying it twice squares.
    pub fn suzuki_theta(&self, a: &FieldElement, m: u32) -> Result<FieldElement, FieldError> {
        if self.p != 2 || m == 0 || self.n != 2 * m + 1 {
            return Err(FieldError::NotSuzukiField {
                p: self.p,
                n: self.n,
                m,
            });
        }
        let mut r = a.clone();
        for _ in 0..=m {
            r = self.frobenius(&r)?;
        }
        Ok(r)
    }
}

/// Rabin's test over Z_p; `f` is little-endian and monic.
fn is_irreducible(f: &[u64], p: u64) -> bool {
    let n = f.len() - 1;
    if n == 1 {
        return true;
    }
    let x = vec![0, 1];
    let frob_pow = |k: usize| {
        let mut r = x.clone();
        for _ in 0..k {
            r = poly_powmod(&r, p, f, p);
        }
        r
    };
    if poly_sub(&frob_pow(n), &x, p) != Vec::<u64>::new() {
        return false;
    }
    for r in prime_factors(n as u64) {
        let h = poly_sub(&frob_pow(n / r as usize), &x, p);
        let g = poly_gcd(f.to_vec(), h, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let len = a.len().max(b.len());
    let r = (0..len)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(r)
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // p prime
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut a = trim(a.to_vec());
    let m = trim(m.to_vec());
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while a.len() > dm {
        let da = a.len() - 1;
        let c = a[da] * lead_inv % p;
        for i in 0..=dm {
            let t = c * m[i] % p;
            a[da - dm + i] = (a[da - dm + i] + p - t) % p;
        }
        a = trim(a);
    }
    a
}

fn poly_mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    poly_rem(&prod, m, p)
}

fn poly_powmod(a: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut base = poly_rem(a, m, p);
    let mut acc = vec![1u64];
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_mulmod(&acc, &base, m, p);
        }
        base = poly_mulmod(&base, &base, m, p);
        e >>= 1;
    }
    acc
}

fn poly_gcd(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> Vec<u64> {
    a = trim(a);
    b = trim(b);
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Dense lookup tables over the integer coding of a small field.
#[derive(Clone, Debug)]
pub struct FieldTables {
    spec: FieldSpec,
    q: u32,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
}

impl FieldTables {
    /// Exhaustive check of the field axioms on the tables; the first
    /// violation is described in the error.
    pub fn check_axioms(&self) -> Result<(), String> {
        let q = self.order() as u16;
        for a in 0..q {
            if self.add(a, 0) != a || self.mul(a, 1) != a || self.add(a, self.neg(a)) != 0 {
                return Err(format!("identity or negation fails at {a}"));
            }
            if a != 0 && self.mul(a, self.inv(a)) != 1 {
                return Err(format!("inverse fails at {a}"));
            }
            for b in 0..q {
                if self.add(a, b) != self.add(b, a) || self.mul(a, b) != self.mul(b, a) {
                    return Err(format!("commutativity fails at ({a}, {b})"));
                }
                for c in 0..q {
                    let assoc = self.add(self.add(a, b), c) == self.add(a, self.add(b, c))
                        && self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c));
                    let dist =
                        self.mul(a, self.add(b, c)) == self.add(self.mul(a, b), self.mul(a, c));
                    if !assoc || !dist {
                        return Err(format!(
                            "associativity or distributivity fails at ({a}, {b}, {c})"
                        ));
                    }
                }
            }
        }
        Ok(())
    }
    pub fn new(spec: &FieldSpec) -> Result<Self, FieldError> {
        let q = spec.order();
        if q > MAX_TABLE_ORDER {
            return Err(FieldError::TableTooLarge(q));
        }
        let elems: Vec<FieldElement> = spec.elements().collect();
        let qs = q as usize;
        let mut add = vec![0u16; qs * qs];
        let mut mul = vec![0u16; qs * qs];
        for i in 0..qs {
            for j in 0..qs {
                add[i * qs + j] = spec.to_index(&spec.add(&elems[i], &elems[j])?) as u16;
                mul[i * qs + j] = spec.to_index(&spec.mul(&elems[i], &elems[j])?) as u16;
            }
        }
        let neg = (0..qs)
            .map(|i| (0..qs).find(|&j| add[i * qs + j] == 0).unwrap() as u16)
            .collect();
        let inv = (0..qs)
            .map(|i| {
                if i == 0 {
                    0
                } else {
                    (1..qs).find(|&j| mul[i * qs + j] == 1).unwrap() as u16
                }
            })
            .collect();
        Ok(FieldTables {
            spec: spec.clone(),
            q,
            add,
            mul,
            neg,
            inv,
        })
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    #[inline(always)]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        self.add[a as usize * self.q as usize + b as usize]
    }

    #[inline(always)]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    #[inline(always)]
    pub fn neg(&self, a: u16) -> u16 {
        self.neg[a as usize]
    }

    /// Inverse of a nonzero element; `inv(0)` is 0.
    #[inline(always)]
    pub fn inv(&self, a: u16) -> u16 {
        self.inv[a as usize]
    }

    pub fn pow(&self, a: u16, e: u64) -> u16 {
        let mut r = 1u16;
        for _ in 0..e {
            r = self.mul(r, a);
        }
        r
    }

    /// Least-index element generating the multiplicative group.
    pub fn primitive_element(&self) -> u16 {
        (1..self.q as u16)
            .find(|&a| {
                let mut x = a;
                let mut ord = 1;
                while x != 1 {
                    x = self.mul(x, a);
                    ord += 1;
                }
                ord == self.q - 1
            })
            .expect("multiplicative group of a finite field is cyclic")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent irreducibility oracle: no monic factor of degree ≤ n/2.
    fn brute_irreducible(f: &[u64], p: u64) -> bool {
        let n = f.len() - 1;
        for d in 1..=n / 2 {
            let count = p.pow(d as u32);
            for code in 0..count {
                let mut g = Vec::with_capacity(d + 1);
                let mut c = code;
                for _ in 0..d {
                    g.push(c % p);
                    c /= p;
                }
                g.push(1);
                if poly_rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn rabin_matches_trial_division() {
        for &(p, maxn) in &[(2u64, 6usize), (3, 4), (5, 3)] {
            for n in 1..=maxn {
                for code in 0..p.pow(n as u32) {
                    let mut f = Vec::new();
                    let mut c = code;
                    for _ in 0..n {
                        f.push(c % p);
                        c /= p;
                    }
                    f.push(1);
                    assert_eq!(
                        is_irreducible(&f, p),
                        brute_irreducible(&f, p),
                        "{f:?} mod {p}"
                    );
                }
            }
        }
    }

    #[test]
    fn least_moduli() {
        assert_eq!(FieldSpec::new(2, 1).unwrap().modulus(), &[0]);
        assert_eq!(FieldSpec::new(2, 3).unwrap().modulus(), &[0, 1, 1]);
        assert_eq!(FieldSpec::new(3, 2).unwrap().modulus(), &[0, 1]);
        // x^5 + x^2 + 1
        assert_eq!(FieldSpec::new(2, 5).unwrap().modulus(), &[0, 0, 1, 0, 1]);
    }

    #[test]
    fn spec_errors() {
        assert_eq!(FieldSpec::new(4, 1), Err(FieldError::NotPrime(4)));
        assert_eq!(FieldSpec::new(2, 0), Err(FieldError::DegreeOutOfRange(0)));
        assert_eq!(FieldSpec::new(2, 17), Err(FieldError::DegreeOutOfRange(17)));
        assert!(matches!(
            FieldSpec::new(3, 11),
            Err(FieldError::OrderTooLarge { .. })
        ));
        assert!(FieldSpec::new(2, 16).is_ok());
    }

    #[test]
    fn gf8_products() {
        let f = FieldSpec::new(2, 3).unwrap();
        let x = f.element(&[0, 1, 0]).unwrap();
        let x2 = f.element(&[0, 0, 1]).unwrap();
        assert_eq!(f.mul(&x, &x2).unwrap().coeffs(), &[1, 1, 0]);
        assert_eq!(f.inv(&x).unwrap().coeffs(), &[1, 0, 1]);
        assert_eq!(f.mul(&x, &f.one()).unwrap(), x);
    }

    #[test]
    fn gf9_and_gf3() {
        let f = FieldSpec::new(3, 2).unwrap();
        let x = f.element(&[0, 1]).unwrap();
        assert_eq!(f.mul(&x, &x).unwrap().coeffs(), &[2, 0]);
        let g = FieldSpec::new(3, 1).unwrap();
        assert_eq!(g.inv(&g.constant(2)).unwrap(), g.constant(2));
        assert_eq!(g.inv(&g.one()).unwrap(), g.one());
    }

    #[test]
    fn zero_and_mismatch() {
        let f = FieldSpec::new(2, 3).unwrap();
        assert_eq!(f.inv(&f.zero()), Err(FieldError::ZeroInverse));
        let g = FieldSpec::new(3, 2).unwrap();
        assert!(matches!(
            f.mul(&g.one(), &f.one()),
            Err(FieldError::Mismatch { .. })
        ));
        assert!(f.element(&[2, 0, 0]).is_err());
    }

    #[test]
    fn theta_on_gf8() {
        let f = FieldSpec::new(2, 3).unwrap();
        assert_eq!(f.suzuki_theta(&f.zero(), 1).unwrap(), f.zero());
        assert_eq!(f.suzuki_theta(&f.one(), 1).unwrap(), f.one());
        let x = f.element(&[0, 1, 0]).unwrap();
        assert_eq!(f.suzuki_theta(&x, 1).unwrap().coeffs(), &[0, 1, 1]);
        assert!(f.suzuki_theta(&x, 2).is_err());
        assert!(FieldSpec::new(3, 3).unwrap().suzuki_theta(&x, 1).is_err());
    }

    #[test]
    fn theta_squared_is_squaring() {
        for m in [1u32, 2] {
            let f = FieldSpec::new(2, 2 * m + 1).unwrap();
            for a in f.elements() {
                let tt = f.suzuki_theta(&f.suzuki_theta(&a, m).unwrap(), m).unwrap();
                assert_eq!(tt, f.mul(&a, &a).unwrap());
            }
        }
    }

    #[test]
    fn frobenius_is_additive() {
        for (p, n) in [(2, 3), (3, 2), (2, 5)] {
            let f = FieldSpec::new(p, n).unwrap();
            let elems: Vec<_> = f.elements().collect();
            for a in &elems {
                for b in &elems {
                    let lhs = f.frobenius(&f.add(a, b).unwrap()).unwrap();
                    let rhs = f
                        .add(&f.frobenius(a).unwrap(), &f.frobenius(b).unwrap())
                        .unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn field_axioms_exhaustive_small() {
        for q in 2..=81u64 {
            let Some((p, n)) = prime_power(q) else {
                continue;
            };
            let f = FieldSpec::new(p, n).unwrap();
            let t = FieldTables::new(&f).unwrap();
            let q = q as u16;
            for a in 0..q {
                assert_eq!(t.add(a, 0), a);
                assert_eq!(t.mul(a, 1), a);
                assert_eq!(t.add(a, t.neg(a)), 0);
                if a != 0 {
                    assert_eq!(t.mul(a, t.inv(a)), 1);
                }
                for b in 0..q {
                    assert_eq!(t.add(a, b), t.add(b, a));
                    assert_eq!(t.mul(a, b), t.mul(b, a));
                    for c in 0..q {
                        assert_eq!(t.add(t.add(a, b), c), t.add(a, t.add(b, c)));
                        assert_eq!(t.mul(t.mul(a, b), c), t.mul(a, t.mul(b, c)));
                        assert_eq!(t.mul(a, t.add(b, c)), t.add(t.mul(a, b), t.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(7), Some((7, 1)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }
}
