//! Factorization over ℚ by the modular lift-and-recombine method:
//! squarefree split, factor modulo a small prime, Hensel-lift to a modulus
//! beyond the Mignotte bound, then recombine by exact trial division.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ntheory::is_prime;

use super::modp::{self, Coeffs, PrimeField};
use super::IntPoly;

pub const DEFAULT_MAX_DEGREE: usize = 64;

/// How many admissible primes to try before settling on the one giving the
/// fewest modular factors.
const PRIME_CANDIDATES: usize = 6;

/// `unit · Π factorᵐ`, each factor primitive, irreducible over ℚ, with
/// positive leading coefficient, in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: BigInt,
    pub factors: Vec<(IntPoly, u32)>,
}

impl Factorization {
    pub fn reconstruct(&self) -> IntPoly {
        self.factors
            .iter()
            .fold(IntPoly::constant(self.unit.clone()), |acc, (f, m)| {
                &acc * &f.pow(*m)
            })
    }

    /// Exactly one irreducible factor, with multiplicity one.
    pub fn is_irreducible(&self) -> bool {
        self.factors.len() == 1 && self.factors[0].1 == 1
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.factors
            .iter()
            .flat_map(|(f, m)| std::iter::repeat_n(f.degree().unwrap_or(0), *m as usize))
            .collect()
    }
}

impl std::fmt::Display for Factorization {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let unit_is_one = self.unit.is_one();
        if !unit_is_one || self.factors.is_empty() {
            if self.unit == -BigInt::one() && !self.factors.is_empty() {
                f.write_str("-")?;
            } else {
                write!(f, "{}", self.unit)?;
            }
        }
        for (g, m) in &self.factors {
            write!(f, "({g})")?;
            if *m > 1 {
                write!(f, "^{m}")?;
            }
        }
        Ok(())
    }
}

pub fn factor_rational(f: &IntPoly) -> Result<Factorization> {
    factor_rational_with(f, DEFAULT_MAX_DEGREE)
}

pub fn factor_rational_with(f: &IntPoly, max_degree: usize) -> Result<Factorization> {
    let Some(deg) = f.degree() else {
        return Err(Error::InvalidInput(
            "cannot factor the zero polynomial".into(),
        ));
    };
    if deg > max_degree {
        return Err(Error::Capacity {
            what: "polynomial degree",
            got: deg as u64,
            limit: max_degree as u64,
        });
    }
    let prim = f.primitive_part();
    let mut factors = Vec::new();
    for (part, mult) in squarefree_decomposition(&prim) {
        for g in factor_squarefree(&part) {
            factors.push((g, mult));
        }
    }
    factors.sort_by(|a, b| a.0.canonical_cmp(&b.0).then(a.1.cmp(&b.1)));

    let product = factors
        .iter()
        .fold(IntPoly::one(), |acc, (g, m)| &acc * &g.pow(*m));
    let (unit, rem) = f.leading().unwrap().div_rem(product.leading().unwrap());
    debug_assert!(rem.is_zero());
    let out = Factorization { unit, factors };
    debug_assert_eq!(&out.reconstruct(), f);
    Ok(out)
}

/// Yun's algorithm over ℤ. Returns `(a_i, i)` with `f = c·Π a_iⁱ`, each
/// `a_i` primitive, squarefree, positive leading coefficient, degree ≥ 1.
pub fn squarefree_decomposition(f: &IntPoly) -> Vec<(IntPoly, u32)> {
    let f = f.primitive_part();
    if f.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let fp = f.derivative();
    let c = f.gcd(&fp).primitive_part();
    let mut w = f.exact_div(&c).expect("gcd divides f").primitive_part();
    let mut y = fp.exact_div(&c).expect("gcd divides f'");
    let mut z = &y - &w.derivative();
    let mut i = 1u32;
    let mut out = Vec::new();
    while w.degree().unwrap_or(0) > 0 {
        let g = w.gcd(&z).primitive_part();
        if g.degree().unwrap_or(0) > 0 {
            out.push((g.clone(), i));
        }
        w = w.exact_div(&g).expect("gcd divides w").primitive_part();
        y = z.exact_div(&g).expect("gcd divides z");
        z = &y - &w.derivative();
        i += 1;
    }
    out
}

/// Irreducible factors of a primitive squarefree `f`, unsorted.
fn factor_squarefree(f: &IntPoly) -> Vec<IntPoly> {
    let deg = f.degree().unwrap();
    if deg == 0 {
        return Vec::new();
    }
    // Peel off T.
    if f.coeff(0).is_zero() {
        let rest = f.exact_div(&IntPoly::from_i64(&[0, 1])).unwrap();
        let mut out = vec![IntPoly::from_i64(&[0, 1])];
        out.extend(factor_squarefree(&rest.primitive_part()));
        return out;
    }
    if deg == 1 {
        return vec![f.primitive_part()];
    }
    let (field, modular) = choose_prime(f);
    if modular.len() == 1 {
        return vec![f.primitive_part()];
    }
    let lifted = hensel_lift(f, field, &modular);
    recombine(f, &lifted)
}

/// Pick the admissible prime (not dividing the leading coefficient, `f`
/// squarefree modulo it) with the fewest modular factors among the first few.
fn choose_prime(f: &IntPoly) -> (PrimeField, Vec<Coeffs>) {
    let lc = f.leading().unwrap();
    let mut best: Option<(PrimeField, Vec<Coeffs>)> = None;
    let mut tried = 0;
    let mut q = 3u64;
    while tried < PRIME_CANDIDATES {
        if is_prime(q) && !(lc % BigInt::from(q)).is_zero() {
            let field = PrimeField::new(q);
            let reduced = field.reduce(f);
            if field.is_squarefree(&reduced) {
                tried += 1;
                let fs = field.factor_squarefree(&reduced);
                if best.as_ref().is_none_or(|(_, b)| fs.len() < b.len()) {
                    let done = fs.len() == 1;
                    best = Some((field, fs));
                    if done {
                        break;
                    }
                }
            }
        }
        q += 2;
    }
    best.expect("some prime is admissible")
}

/// Polynomials with coefficients reduced into `[0, m)`.
struct ModRing {
    m: BigInt,
}

impl ModRing {
    fn reduce(&self, c: &BigInt) -> BigInt {
        c.mod_floor(&self.m)
    }

    fn poly(&self, f: &[BigInt]) -> Vec<BigInt> {
        let mut v: Vec<BigInt> = f.iter().map(|c| self.reduce(c)).collect();
        trim_big(&mut v);
        v
    }

    fn add(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let n = a.len().max(b.len());
        let zero = BigInt::zero();
        let v: Vec<BigInt> = (0..n)
            .map(|i| a.get(i).unwrap_or(&zero) + b.get(i).unwrap_or(&zero))
            .collect();
        self.poly(&v)
    }

    fn sub(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let n = a.len().max(b.len());
        let zero = BigInt::zero();
        let v: Vec<BigInt> = (0..n)
            .map(|i| a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero))
            .collect();
        self.poly(&v)
    }

    fn mul(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        self.poly(&out)
    }

    /// Division by a monic `b`.
    fn div_rem_monic(&self, a: &[BigInt], b: &[BigInt]) -> (Vec<BigInt>, Vec<BigInt>) {
        debug_assert!(b.last().is_some_and(One::is_one));
        let db = b.len() - 1;
        let mut rem = self.poly(a);
        if rem.len() <= db {
            return (Vec::new(), rem);
        }
        let mut quot = vec![BigInt::zero(); rem.len() - db];
        while rem.len() > db {
            let k = rem.len() - 1 - db;
            let c = rem.last().unwrap().clone();
            for (i, bc) in b.iter().enumerate() {
                rem[k + i] = self.reduce(&(&rem[k + i] - &c * bc));
            }
            quot[k] = c;
            trim_big(&mut rem);
        }
        trim_big(&mut quot);
        (quot, rem)
    }

    fn symmetric(&self, f: &[BigInt]) -> IntPoly {
        let half = &self.m >> 1;
        IntPoly::new(
            f.iter()
                .map(|c| {
                    let r = self.reduce(c);
                    if r > half {
                        r - &self.m
                    } else {
                        r
                    }
                })
                .collect(),
        )
    }
}

fn trim_big(v: &mut Vec<BigInt>) {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

fn lift_coeffs(a: &[u64]) -> Vec<BigInt> {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

/// Coefficient bound for `lc(f)·g` over every factor `g` of `f`:
/// `|lc|·2^deg·‖f‖₂`.
fn factor_coefficient_bound(f: &IntPoly) -> BigInt {
    let norm_sq: BigInt = f.coeffs().iter().map(|c| c * c).sum();
    let norm = norm_sq.sqrt() + BigInt::one();
    f.leading().unwrap().abs() * (BigInt::one() << f.degree().unwrap()) * norm
}

/// Quadratic Hensel lifting of `f ≡ lc·Π g_i (mod q)` to a modulus
/// `q^(2^k) > 2·bound`. Returns the monic lifted factors and that modulus.
fn hensel_lift(f: &IntPoly, field: PrimeField, factors: &[Coeffs]) -> (Vec<Vec<BigInt>>, BigInt) {
    let q = BigInt::from(field.modulus());
    let bound = factor_coefficient_bound(f) * 2;
    let mut target = q.clone();
    while target <= bound {
        target = &target * &target;
    }
    let top = ModRing { m: target.clone() };
    let lc_inv = f
        .leading()
        .unwrap()
        .modinv(&target)
        .expect("leading coefficient is a unit mod q");
    let monic_f = top.poly(&f.scale(&lc_inv).into_coeffs());

    let mut lifted = Vec::with_capacity(factors.len());
    let mut rest_target = monic_f;
    for i in 0..factors.len() - 1 {
        let g = factors[i].clone();
        let h = factors[i + 1..]
            .iter()
            .fold(vec![1u64], |acc, x| field.mul(&acc, x));
        let (g_up, h_up) = lift_pair(&rest_target, &g, &h, field, &target);
        lifted.push(g_up);
        rest_target = h_up;
    }
    lifted.push(rest_target);
    (lifted, target)
}

/// Lift `target ≡ g·h (mod q)`, both monic and coprime mod q, to
/// `target ≡ g*·h* (mod m)`.
fn lift_pair(
    target: &[BigInt],
    g: &[u64],
    h: &[u64],
    field: PrimeField,
    m: &BigInt,
) -> (Vec<BigInt>, Vec<BigInt>) {
    let (one, s, t) = field.ext_gcd(g, h);
    debug_assert!(modp::is_one(&one));
    let (mut g, mut h) = (lift_coeffs(g), lift_coeffs(h));
    let (mut s, mut t) = (lift_coeffs(&s), lift_coeffs(&t));
    let mut modulus = BigInt::from(field.modulus());
    while &modulus < m {
        modulus = &modulus * &modulus;
        let ring = ModRing { m: modulus.clone() };
        let f = ring.poly(target);
        let e = ring.sub(&f, &ring.mul(&g, &h));
        let (quo, rem) = ring.div_rem_monic(&ring.mul(&s, &e), &h);
        let g_new = ring.add(&ring.add(&g, &ring.mul(&t, &e)), &ring.mul(&quo, &g));
        let h_new = ring.add(&h, &rem);
        let b = ring.sub(
            &ring.add(&ring.mul(&s, &g_new), &ring.mul(&t, &h_new)),
            &[BigInt::one()],
        );
        let (c, d) = ring.div_rem_monic(&ring.mul(&s, &b), &h_new);
        s = ring.sub(&s, &d);
        t = ring.sub(&ring.sub(&t, &ring.mul(&t, &b)), &ring.mul(&c, &g_new));
        g = g_new;
        h = h_new;
    }
    let ring = ModRing { m: m.clone() };
    (ring.poly(&g), ring.poly(&h))
}

/// Zassenhaus recombination: try subsets of the lifted factors in order of
/// increasing size, keeping those whose image is a true factor over ℤ.
fn recombine(f: &IntPoly, lifted: &(Vec<Vec<BigInt>>, BigInt)) -> Vec<IntPoly> {
    let (modular, m) = lifted;
    let ring = ModRing { m: m.clone() };
    let mut remaining: Vec<usize> = (0..modular.len()).collect();
    let mut rest = f.primitive_part();
    let mut out = Vec::new();
    let mut size = 1;
    while 2 * size <= remaining.len() {
        let mut found = false;
        let lc = rest.leading().unwrap().clone();
        for subset in Subsets::new(remaining.len(), size) {
            let chosen: Vec<usize> = subset.iter().map(|&i| remaining[i]).collect();
            // cheap constant-term screen
            let c0 = chosen
                .iter()
                .fold(lc.clone(), |acc, &i| ring.reduce(&(acc * &modular[i][0])));
            let c0 = ring.symmetric(&[c0]).coeff(0);
            if c0.is_zero() || !(rest.coeff(0) * &lc % &c0).is_zero() {
                continue;
            }
            let cand = chosen
                .iter()
                .fold(vec![lc.clone()], |acc, &i| ring.mul(&acc, &modular[i]));
            let cand = ring.symmetric(&cand).primitive_part();
            if let Ok(quot) = rest.exact_div(&cand) {
                out.push(cand);
                rest = quot.primitive_part();
                remaining = remaining
                    .iter()
                    .copied()
                    .filter(|i| !chosen.contains(i))
                    .collect();
                found = true;
                break;
            }
        }
        if !found {
            size += 1;
        }
    }
    if rest.degree().unwrap_or(0) > 0 {
        out.push(rest);
    }
    out
}

/// k-subsets of `0..n` in lexicographic order.
struct Subsets {
    n: usize,
    idx: Vec<usize>,
    first: bool,
}

impl Subsets {
    fn new(n: usize, k: usize) -> Self {
        Subsets {
            n,
            idx: (0..k).collect(),
            first: true,
        }
    }
}

impl Iterator for Subsets {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        let k = self.idx.len();
        if k > self.n {
            return None;
        }
        if self.first {
            self.first = false;
            return Some(self.idx.clone());
        }
        let mut i = k;
        while i > 0 {
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                return Some(self.idx.clone());
            }
        }
        None
    }
}

/// Outcome of reducing one claimed-irreducible factor modulo several primes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossCheck {
    /// `(q, sorted modular factor degrees)`.
    pub patterns: Vec<(u64, Vec<usize>)>,
    /// A rational root found by lifting a modular root, refuting
    /// irreducibility of a factor of degree > 1: `(numerator·lc, lc)`.
    pub rational_root: Option<(BigInt, BigInt)>,
    /// Degrees `k` with `0 < k < deg` that appear as a subset sum of the
    /// modular degrees at every prime. Empty means the patterns alone prove
    /// irreducibility.
    pub common_subset_degrees: Vec<usize>,
}

impl CrossCheck {
    pub fn consistent(&self, degree: usize) -> bool {
        self.rational_root.is_none()
            && self
                .patterns
                .iter()
                .all(|(_, p)| p.iter().sum::<usize>() == degree)
    }
}

/// Reduce `f` modulo `count` primes not dividing `disc(f)·lc(f)` and check the
/// degree patterns are consistent with `f` being irreducible over ℚ.
pub fn cross_check_irreducible(f: &IntPoly, count: usize) -> CrossCheck {
    let deg = f.degree().expect("nonzero polynomial");
    let lc = f.leading().unwrap().clone();
    let mut patterns = Vec::new();
    let mut rational_root = None;
    let mut q = 3u64;
    while patterns.len() < count {
        if is_prime(q) && !(&lc % BigInt::from(q)).is_zero() {
            let field = PrimeField::new(q);
            let red = field.reduce(f);
            // q ∤ disc(f) ⇔ f stays squarefree of full degree mod q
            if red.len() == deg + 1 && field.is_squarefree(&red) {
                let fs = field.factor_squarefree(&red);
                let mut degs: Vec<usize> = fs.iter().map(|g| g.len() - 1).collect();
                degs.sort_unstable();
                if deg > 1 && rational_root.is_none() {
                    for g in fs.iter().filter(|g| g.len() == 2) {
                        let root = (q - g[0]) % q;
                        if let Some(r) = lift_root_to_rational(f, field, root) {
                            rational_root = Some(r);
                            break;
                        }
                    }
                }
                patterns.push((q, degs));
            }
        }
        q += 2;
    }
    let common_subset_degrees = (1..deg)
        .filter(|&k| patterns.iter().all(|(_, p)| subset_sums(p)[k]))
        .collect();
    CrossCheck {
        patterns,
        rational_root,
        common_subset_degrees,
    }
}

fn subset_sums(degs: &[usize]) -> Vec<bool> {
    let total: usize = degs.iter().sum();
    let mut reach = vec![false; total + 1];
    reach[0] = true;
    for &d in degs {
        for s in (d..=total).rev() {
            if reach[s - d] {
                reach[s] = true;
            }
        }
    }
    reach
}

/// Newton-lift a simple root `r` of `f mod q` and test whether
/// `lc·root` reduces to an integer `c` with `f(c/lc) = 0`.
fn lift_root_to_rational(f: &IntPoly, field: PrimeField, r: u64) -> Option<(BigInt, BigInt)> {
    let lc = f.leading().unwrap().clone();
    let bound = lc.abs() * f.coeff(0).abs() * 2 + BigInt::one();
    let q = BigInt::from(field.modulus());
    let fp = f.derivative();
    let mut m = q.clone();
    let mut x = BigInt::from(r);
    while m <= bound {
        m = &m * &m;
        let d = fp.eval(&x).mod_floor(&m);
        let inv = d.modinv(&m)?;
        x = (&x - f.eval(&x) * inv).mod_floor(&m);
    }
    let ring = ModRing { m };
    let c = ring.symmetric(&[&lc * &x]).coeff(0);
    // lc^deg · f(c/lc) = Σ a_i c^i lc^(deg−i)
    let deg = f.degree().unwrap();
    let hom: BigInt = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, a)| a * c.pow(i as u32) * lc.pow((deg - i) as u32))
        .sum();
    hom.is_zero().then_some((c, lc))
}
