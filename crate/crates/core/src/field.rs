//! Table-driven arithmetic in `GF(p^k)`.
//!
//! Elements are encoded as integers `0..q`: the base-`p` digits of an element,
//! least significant first, are the coefficients of its polynomial
//! representative, constant term first. The modulus is the lexicographically
//! first monic irreducible polynomial of degree `k`, comparing coefficients
//! from the constant term upwards.

use crate::error::{param, Error, Result};

/// Largest field order for which tables are built. The add and mul tables
/// take `2 q^2` bytes each.
pub const MAX_FIELD_ORDER: usize = 1 << 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    pub p: u32,
    pub k: u32,
    /// Coefficients of the modulus, constant term first; length `k + 1`,
    /// leading coefficient 1.
    pub modulus: Vec<u32>,
}

impl FieldSpec {
    pub fn order(&self) -> usize {
        (self.p as usize).pow(self.k)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldTable {
    spec: FieldSpec,
    q: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    /// `inv[0]` is unused and kept at 0.
    inv: Vec<u16>,
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

/// `(p, k)` with `q = p^k`, if `q` is a prime power.
pub fn prime_power(q: usize) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let (mut rest, mut k) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p as u32, k))
}

fn digits(mut x: usize, p: u32, k: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(k as usize);
    for _ in 0..k {
        out.push((x % p as usize) as u32);
        x /= p as usize;
    }
    out
}

fn pack(coeffs: &[u32], p: u32) -> usize {
    coeffs
        .iter()
        .rev()
        .fold(0usize, |acc, &c| acc * p as usize + c as usize)
}

fn mod_inverse(a: u32, p: u32) -> u32 {
    (1..p)
        .find(|&b| (a * b) % p == 1)
        .expect("nonzero residue mod a prime")
}

/// Remainder of `num` modulo the monic-or-not polynomial `den` over `GF(p)`.
fn poly_rem(num: &[u32], den: &[u32], p: u32) -> Vec<u32> {
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    let lead_inv = mod_inverse(den[dd], p);
    while r.len() > dd {
        let top = *r.last().unwrap();
        if top != 0 {
            let factor = (top * lead_inv) % p;
            let shift = r.len() - 1 - dd;
            for (i, &c) in den.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - (factor * c) % p) % p;
            }
        }
        r.pop();
    }
    r
}

/// Checks for a monic divisor of degree `1..=k/2`.
fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let k = poly.len() - 1;
    for d in 1..=k / 2 {
        let count = (p as usize).pow(d as u32);
        for low in 0..count {
            let mut div = digits(low, p, d as u32);
            div.push(1);
            if poly_rem(poly, &div, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// The lexicographically first monic irreducible of degree `k` over `GF(p)`.
pub fn first_irreducible(p: u32, k: u32) -> Vec<u32> {
    let count = (p as usize).pow(k);
    (0..count)
        .map(|t| {
            // constant term is the most significant digit of the ranking
            let mut coeffs: Vec<u32> = digits(t, p, k).into_iter().rev().collect();
            coeffs.push(1);
            coeffs
        })
        .find(|c| is_irreducible(c, p))
        .expect("an irreducible polynomial exists in every degree")
}

pub fn build_field(q: usize) -> Result<FieldTable> {
    let Some((p, k)) = prime_power(q) else {
        return param(format!("{q} is not a prime power"));
    };
    if q > MAX_FIELD_ORDER {
        return param(format!("field order {q} exceeds {MAX_FIELD_ORDER}"));
    }
    let modulus = first_irreducible(p, k);
    let elems: Vec<Vec<u32>> = (0..q).map(|x| digits(x, p, k)).collect();

    let mut add = vec![0u16; q * q];
    let mut mul = vec![0u16; q * q];
    for a in 0..q {
        for b in 0..q {
            let sum: Vec<u32> = elems[a]
                .iter()
                .zip(&elems[b])
                .map(|(x, y)| (x + y) % p)
                .collect();
            add[a * q + b] = pack(&sum, p) as u16;

            let mut prod = vec![0u32; 2 * k as usize - 1];
            for (i, x) in elems[a].iter().enumerate() {
                for (j, y) in elems[b].iter().enumerate() {
                    prod[i + j] = (prod[i + j] + x * y) % p;
                }
            }
            let mut red = poly_rem(&prod, &modulus, p);
            red.resize(k as usize, 0);
            mul[a * q + b] = pack(&red, p) as u16;
        }
    }
    let neg = (0..q)
        .map(|a| (0..q).find(|&b| add[a * q + b] == 0).unwrap() as u16)
        .collect();
    let mut inv = vec![0u16; q];
    for a in 1..q {
        inv[a] = (1..q)
            .find(|&b| mul[a * q + b] == 1)
            .ok_or_else(|| Error::Domain(format!("{a} has no inverse; modulus not irreducible")))?
            as u16;
    }
    Ok(FieldTable {
        spec: FieldSpec { p, k, modulus },
        q,
        add,
        mul,
        neg,
        inv,
    })
}

impl FieldTable {
    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.spec.p
    }

    pub fn elements(&self) -> impl Iterator<Item = u16> {
        0..self.q as u16
    }

    #[inline]
    fn at(&self, a: u16, b: u16) -> usize {
        assert!(
            (a as usize) < self.q && (b as usize) < self.q,
            "operand out of GF({})",
            self.q
        );
        a as usize * self.q + b as usize
    }

    #[inline]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        self.add[self.at(a, b)]
    }

    #[inline]
    pub fn sub(&self, a: u16, b: u16) -> u16 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[self.at(a, b)]
    }

    #[inline]
    pub fn neg(&self, a: u16) -> u16 {
        self.neg[a as usize]
    }

    pub fn inv(&self, a: u16) -> Result<u16> {
        if a == 0 {
            return Err(Error::Domain("zero has no multiplicative inverse".into()));
        }
        if a as usize >= self.q {
            return Err(Error::Domain(format!(
                "{a} is not an element of GF({})",
                self.q
            )));
        }
        Ok(self.inv[a as usize])
    }

    pub fn div(&self, a: u16, b: u16) -> Result<u16> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `sum_i a_i b_i`.
    pub fn dot(&self, a: &[u16], b: &[u16]) -> u16 {
        a.iter()
            .zip(b)
            .fold(0, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }
}
