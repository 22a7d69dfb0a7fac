//! Polynomials over a small prime field 𝔽_q, with distinct-degree and
//! equal-degree (Cantor–Zassenhaus) factorization.
//!
//! Equal-degree splitting walks a fixed sequence of trial polynomials, so
//! results never depend on a random source.

use num_bigint::{BigInt, BigUint};
use num_traits::One;

use crate::ntheory::{mul_mod, pow_mod};

use super::IntPoly;

/// Coefficients in `[0, q)`, lowest degree first, no trailing zeros.
pub type Coeffs = Vec<u64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    q: u64,
}

impl PrimeField {
    /// `q` must be an odd prime below `2^31`.
    pub fn new(q: u64) -> Self {
        assert!(q > 2 && q < (1 << 31), "field characteristic out of range");
        PrimeField { q }
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn reduce(&self, f: &IntPoly) -> Coeffs {
        let q = BigInt::from(self.q);
        let mut out: Coeffs = f
            .coeffs()
            .iter()
            .map(|c| {
                let r = ((c % &q) + &q) % &q;
                r.try_into().expect("reduced coefficient fits in u64")
            })
            .collect();
        trim(&mut out);
        out
    }

    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.q));
        pow_mod(a, self.q - 2, self.q)
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Coeffs {
        let n = a.len().max(b.len());
        let mut out: Coeffs = (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % self.q)
            .collect();
        trim(&mut out);
        out
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Coeffs {
        let n = a.len().max(b.len());
        let mut out: Coeffs = (0..n)
            .map(|i| {
                (a.get(i).copied().unwrap_or(0) + self.q - b.get(i).copied().unwrap_or(0)) % self.q
            })
            .collect();
        trim(&mut out);
        out
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Coeffs {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(x, y, self.q)) % self.q;
            }
        }
        trim(&mut out);
        out
    }

    pub fn scale(&self, a: &[u64], k: u64) -> Coeffs {
        let mut out: Coeffs = a.iter().map(|&x| mul_mod(x, k, self.q)).collect();
        trim(&mut out);
        out
    }

    pub fn monic(&self, a: &[u64]) -> Coeffs {
        match a.last() {
            None => Vec::new(),
            Some(&lc) => self.scale(a, self.inv(lc)),
        }
    }

    pub fn div_rem(&self, a: &[u64], b: &[u64]) -> (Coeffs, Coeffs) {
        assert!(!b.is_empty(), "division by zero polynomial");
        let db = b.len() - 1;
        let inv_lc = self.inv(*b.last().unwrap());
        let mut rem = a.to_vec();
        if rem.len() <= db {
            return (Vec::new(), rem);
        }
        let mut quot = vec![0u64; rem.len() - db];
        while rem.len() > db {
            let k = rem.len() - 1 - db;
            let c = mul_mod(*rem.last().unwrap(), inv_lc, self.q);
            quot[k] = c;
            for (i, &bc) in b.iter().enumerate() {
                let sub = mul_mod(c, bc, self.q);
                rem[k + i] = (rem[k + i] + self.q - sub) % self.q;
            }
            trim(&mut rem);
        }
        trim(&mut quot);
        (quot, rem)
    }

    pub fn rem(&self, a: &[u64], b: &[u64]) -> Coeffs {
        self.div_rem(a, b).1
    }

    /// Monic gcd.
    pub fn gcd(&self, a: &[u64], b: &[u64]) -> Coeffs {
        let (mut a, mut b) = (a.to_vec(), b.to_vec());
        while !b.is_empty() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    /// `(g, s, t)` with `s·a + t·b = g`, `g` monic.
    pub fn ext_gcd(&self, a: &[u64], b: &[u64]) -> (Coeffs, Coeffs, Coeffs) {
        let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
        let (mut s0, mut s1) = (vec![1u64], Vec::new());
        let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
        while !r1.is_empty() {
            let (q, r) = self.div_rem(&r0, &r1);
            let s2 = self.sub(&s0, &self.mul(&q, &s1));
            let t2 = self.sub(&t0, &self.mul(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        let inv = self.inv(*r0.last().expect("not both zero"));
        (
            self.scale(&r0, inv),
            self.scale(&s0, inv),
            self.scale(&t0, inv),
        )
    }

    pub fn derivative(&self, a: &[u64]) -> Coeffs {
        let mut out: Coeffs = a
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mul_mod(c, i as u64 % self.q, self.q))
            .collect();
        trim(&mut out);
        out
    }

    pub fn is_squarefree(&self, a: &[u64]) -> bool {
        self.gcd(a, &self.derivative(a)).len() == 1
    }

    pub fn pow_mod(&self, base: &[u64], exp: &BigUint, modulus: &[u64]) -> Coeffs {
        let mut acc = vec![1u64];
        let base = self.rem(base, modulus);
        for i in (0..exp.bits()).rev() {
            acc = self.rem(&self.mul(&acc, &acc), modulus);
            if exp.bit(i) {
                acc = self.rem(&self.mul(&acc, &base), modulus);
            }
        }
        self.rem(&acc, modulus)
    }

    /// Distinct-degree factorization of a monic squarefree `f`: pairs
    /// `(product of all irreducible factors of degree d, d)`.
    pub fn distinct_degree(&self, f: &[u64]) -> Vec<(Coeffs, usize)> {
        let x = vec![0u64, 1];
        let q = BigUint::from(self.q);
        let mut out = Vec::new();
        let mut rest = f.to_vec();
        let mut h = x.clone();
        let mut d = 1;
        while rest.len() > 2 * d {
            h = self.pow_mod(&h, &q, &rest);
            let g = self.gcd(&rest, &self.sub(&h, &x));
            if g.len() > 1 {
                rest = self.div_rem(&rest, &g).0;
                h = self.rem(&h, &rest);
                out.push((g, d));
            }
            d += 1;
        }
        if rest.len() > 1 {
            let deg = rest.len() - 1;
            out.push((rest, deg));
        }
        out
    }

    /// Split a monic product of distinct irreducibles of common degree `d`.
    pub fn equal_degree(&self, f: &[u64], d: usize) -> Vec<Coeffs> {
        let n = f.len() - 1;
        if n == d {
            return vec![f.to_vec()];
        }
        let exp = (BigUint::from(self.q).pow(d as u32) - BigUint::one()) >> 1;
        let mut counter = self.q;
        loop {
            let a = self.trial_poly(counter, n);
            counter += 1;
            if a.len() < 2 {
                continue;
            }
            let mut b = self.pow_mod(&a, &exp, f);
            b = self.sub(&b, &[1]);
            let g = self.gcd(f, &b);
            if g.len() > 1 && g.len() < f.len() {
                let h = self.div_rem(f, &g).0;
                let mut out = self.equal_degree(&g, d);
                out.extend(self.equal_degree(&self.monic(&h), d));
                return out;
            }
        }
    }

    fn trial_poly(&self, mut k: u64, n: usize) -> Coeffs {
        let mut out = Vec::new();
        while k > 0 && out.len() < n {
            out.push(k % self.q);
            k /= self.q;
        }
        trim(&mut out);
        out
    }

    /// Monic irreducible factors of a squarefree `f`, sorted by degree and then
    /// coefficients.
    pub fn factor_squarefree(&self, f: &[u64]) -> Vec<Coeffs> {
        let f = self.monic(f);
        let mut out = Vec::new();
        for (g, d) in self.distinct_degree(&f) {
            out.extend(self.equal_degree(&g, d));
        }
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        out
    }
}

pub(crate) fn trim(v: &mut Coeffs) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub(crate) fn is_one(a: &[u64]) -> bool {
    a.len() == 1 && a[0].is_one()
}
