//! Finite fields of small characteristic.
//!
//! [`ExtField`] realizes `F_{q^n}` with `q = p^e` as `F_p[X]/(m(X))`, where
//! `m` is the lexicographically smallest monic irreducible polynomial of
//! degree `e·n` over `F_p`. Elements are coefficient vectors over `F_p`
//! packed into a `u32` as base-`p` digits (constant term least significant),
//! so the index of an element is stable across runs and machines.

mod upoly;

pub use upoly::UPoly;

use std::fmt;

use thiserror::Error;

/// Largest absolute degree `e·n` accepted by [`ExtField::new`].
pub const MAX_ABSOLUTE_DEGREE: u32 = 20;

/// Largest field that may be enumerated element by element.
pub const ENUMERATION_LIMIT: u64 = 1 << 20;

// Fields up to this size get discrete log tables for multiplication.
const TABLE_LIMIT: u64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FfError {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("exponent e must be at least 1")]
    ZeroExponent,
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field of characteristic {p} and absolute degree {degree} exceeds the supported size (degree cap {cap}, 32-bit packing)")]
    UnsupportedSize { p: u32, degree: u32, cap: u32 },
}

/// The constant field `F_q`, `q = p^e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldParams {
    p: u32,
    e: u32,
}

impl FieldParams {
    pub fn new(p: u32, e: u32) -> Result<Self, FfError> {
        if !is_prime(p as u64) {
            return Err(FfError::NotPrime(p));
        }
        if e == 0 {
            return Err(FfError::ZeroExponent);
        }
        if e > MAX_ABSOLUTE_DEGREE || (p as u64).checked_pow(e).map_or(true, |q| q > u32::MAX as u64) {
            return Err(FfError::UnsupportedSize { p, degree: e, cap: MAX_ABSOLUTE_DEGREE });
        }
        Ok(FieldParams { p, e })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn q(&self) -> u64 {
        (self.p as u64).pow(self.e)
    }
}

impl fmt::Display for FieldParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.e == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "F_{}^{}", self.p, self.e)
        }
    }
}

/// An element of some [`ExtField`], identified by its packed coefficient vector.
///
/// Elements carry no reference to their field; mixing elements of different
/// fields is a logic error that is not detected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Elem(pub(crate) u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct DigitChunks {
    size: u32,
    add: Vec<u8>,
    neg: Vec<u8>,
}

struct LogTables {
    log: Vec<u32>,
    exp: Vec<u32>,
}

/// The field `F_{q^n}`.
pub struct ExtField {
    params: FieldParams,
    n: u32,
    degree: u32,
    order: u64,
    modulus: Vec<u32>,
    chunks: Option<DigitChunks>,
    tables: Option<LogTables>,
}

impl fmt::Debug for ExtField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ExtField")
            .field("p", &self.params.p)
            .field("e", &self.params.e)
            .field("n", &self.n)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl ExtField {
    /// Builds `F_{q^n}` over the constant field `params`.
    pub fn new(params: FieldParams, n: u32) -> Result<Self, FfError> {
        if n == 0 {
            return Err(FfError::ZeroDegree);
        }
        let p = params.p;
        let degree = params.e.checked_mul(n).unwrap_or(u32::MAX);
        let order = (p as u64).checked_pow(degree).filter(|&o| o <= u32::MAX as u64 + 1);
        let order = match order {
            Some(o) if degree <= MAX_ABSOLUTE_DEGREE => o,
            _ => return Err(FfError::UnsupportedSize { p, degree, cap: MAX_ABSOLUTE_DEGREE }),
        };
        let modulus = smallest_irreducible(p, degree);
        let chunks = (p != 2).then(|| DigitChunks::new(p));
        let mut field = ExtField { params, n, degree, order, modulus, chunks, tables: None };
        if order <= TABLE_LIMIT {
            field.tables = Some(field.build_tables());
        }
        Ok(field)
    }

    pub fn params(&self) -> FieldParams {
        self.params
    }

    pub fn p(&self) -> u32 {
        self.params.p
    }

    /// Degree over the constant field `F_q`.
    pub fn n(&self) -> u32 {
        self.n
    }

    /// Degree over the prime field.
    pub fn absolute_degree(&self) -> u32 {
        self.degree
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Coefficients of the defining polynomial, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> Elem {
        Elem(0)
    }

    pub fn one(&self) -> Elem {
        Elem(1)
    }

    /// The class of `X`, a root of the modulus.
    pub fn generator(&self) -> Elem {
        if self.degree == 1 {
            self.from_fp(self.p() - self.modulus[0] % self.p())
        } else {
            Elem(self.params.p)
        }
    }

    /// Embeds `c mod p`.
    pub fn from_fp(&self, c: u32) -> Elem {
        Elem(c % self.params.p)
    }

    /// Embeds a signed integer reduced mod `p`.
    pub fn from_int(&self, c: i64) -> Elem {
        Elem(c.rem_euclid(self.params.p as i64) as u32)
    }

    /// The element with the given packed index, if it is in range.
    pub fn element(&self, index: u32) -> Option<Elem> {
        ((index as u64) < self.order).then_some(Elem(index))
    }

    /// Coefficient vector over `F_p`, constant term first.
    pub fn coefficients(&self, a: Elem) -> Vec<u32> {
        let mut d = [0u32; MAX_ABSOLUTE_DEGREE as usize];
        self.unpack(a, &mut d);
        d[..self.degree as usize].to_vec()
    }

    /// Every element exactly once, in index order.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        debug_assert!(self.order <= ENUMERATION_LIMIT);
        (0..self.order).map(|i| Elem(i as u32))
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        match &self.chunks {
            None => Elem(a.0 ^ b.0),
            Some(c) => {
                let (mut a, mut b) = (a.0, b.0);
                let (mut out, mut scale) = (0u32, 1u32);
                while a != 0 || b != 0 {
                    let (ai, bi) = (a % c.size, b % c.size);
                    out += c.add[(ai * c.size + bi) as usize] as u32 * scale;
                    a /= c.size;
                    b /= c.size;
                    scale = scale.wrapping_mul(c.size);
                }
                Elem(out)
            }
        }
    }

    pub fn neg(&self, a: Elem) -> Elem {
        match &self.chunks {
            None => a,
            Some(c) => {
                let mut a = a.0;
                let (mut out, mut scale) = (0u32, 1u32);
                while a != 0 {
                    out += c.neg[(a % c.size) as usize] as u32 * scale;
                    a /= c.size;
                    scale = scale.wrapping_mul(c.size);
                }
                Elem(out)
            }
        }
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem(0);
        }
        match &self.tables {
            Some(t) => {
                let m = (self.order - 1) as u64;
                let s = (t.log[a.0 as usize] as u64 + t.log[b.0 as usize] as u64) % m;
                Elem(t.exp[s as usize])
            }
            None => self.mul_slow(a, b),
        }
    }

    pub fn square(&self, a: Elem) -> Elem {
        self.mul(a, a)
    }

    pub fn pow(&self, a: Elem, mut exp: u64) -> Elem {
        if let Some(t) = &self.tables {
            if exp == 0 {
                return Elem(1);
            }
            if a.0 == 0 {
                return Elem(0);
            }
            let m = (self.order - 1) as u128;
            let s = (t.log[a.0 as usize] as u128 * (exp as u128 % m)) % m;
            return Elem(t.exp[s as usize]);
        }
        let mut base = a;
        let mut acc = Elem(1);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a.0 == 0 {
            return None;
        }
        Some(self.pow(a, self.order - 2))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    /// `x ↦ x^p`.
    pub fn frobenius(&self, a: Elem) -> Elem {
        self.pow(a, self.params.p as u64)
    }

    /// `x ↦ x^q`, the generator of `Gal(F_{q^n}/F_q)`.
    pub fn frobenius_q(&self, a: Elem) -> Elem {
        self.pow(a, self.params.q())
    }

    /// `Tr(x) = Σ_{i < e·n} x^{p^i}`, returned as an integer in `0..p`.
    pub fn absolute_trace(&self, a: Elem) -> u32 {
        let mut acc = Elem(0);
        let mut cur = a;
        for _ in 0..self.degree {
            acc = self.add(acc, cur);
            cur = self.frobenius(cur);
        }
        debug_assert!(acc.0 < self.params.p, "trace left the prime field");
        acc.0
    }

    /// Whether `a` lies in the subfield `F_{q^m}`.
    pub fn in_subfield(&self, a: Elem, m: u32) -> bool {
        self.pow(a, self.params.q().pow(m)) == a
    }

    fn unpack(&self, a: Elem, out: &mut [u32; MAX_ABSOLUTE_DEGREE as usize]) {
        let p = self.params.p;
        let mut v = a.0;
        for slot in out.iter_mut().take(self.degree as usize) {
            if p == 2 {
                *slot = v & 1;
                v >>= 1;
            } else {
                *slot = v % p;
                v /= p;
            }
        }
    }

    fn pack(&self, digits: &[u32]) -> Elem {
        let p = self.params.p;
        let mut v = 0u32;
        for &d in digits[..self.degree as usize].iter().rev() {
            v = v * p + d;
        }
        Elem(v)
    }

    fn mul_slow(&self, a: Elem, b: Elem) -> Elem {
        let p = self.params.p;
        let k = self.degree as usize;
        let mut da = [0u32; MAX_ABSOLUTE_DEGREE as usize];
        let mut db = [0u32; MAX_ABSOLUTE_DEGREE as usize];
        self.unpack(a, &mut da);
        self.unpack(b, &mut db);
        let mut prod = [0u32; 2 * MAX_ABSOLUTE_DEGREE as usize];
        for i in 0..k {
            if da[i] == 0 {
                continue;
            }
            for j in 0..k {
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
            }
        }
        for i in (k..2 * k - 1).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..k {
                let t = (c * self.modulus[j]) % p;
                prod[i - k + j] = (prod[i - k + j] + p - t) % p;
            }
        }
        self.pack(&prod)
    }

    fn pow_slow(&self, a: Elem, mut exp: u64) -> Elem {
        let mut base = a;
        let mut acc = Elem(1);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul_slow(acc, base);
            }
            base = self.mul_slow(base, base);
            exp >>= 1;
        }
        acc
    }

    fn build_tables(&self) -> LogTables {
        let m = self.order - 1;
        let primes = prime_factors(m);
        let g = (1..self.order as u32)
            .map(Elem)
            .find(|&g| primes.iter().all(|&r| self.pow_slow(g, m / r) != Elem(1)))
            .expect("multiplicative group of a finite field is cyclic");
        let mut log = vec![u32::MAX; self.order as usize];
        let mut exp = Vec::with_capacity(m as usize);
        let mut cur = Elem(1);
        for i in 0..m {
            exp.push(cur.0);
            log[cur.0 as usize] = i as u32;
            cur = self.mul_slow(cur, g);
        }
        LogTables { log, exp }
    }
}

impl DigitChunks {
    fn new(p: u32) -> Self {
        let mut digits = 1;
        while p.pow(digits + 1) <= 256 {
            digits += 1;
        }
        let size = p.pow(digits);
        let split = |mut v: u32| {
            let mut d = Vec::with_capacity(digits as usize);
            for _ in 0..digits {
                d.push(v % p);
                v /= p;
            }
            d
        };
        let join = |d: &[u32]| d.iter().rev().fold(0u32, |acc, &x| acc * p + x);
        let mut add = vec![0u8; (size * size) as usize];
        let mut neg = vec![0u8; size as usize];
        for a in 0..size {
            let da = split(a);
            let na: Vec<u32> = da.iter().map(|&x| (p - x) % p).collect();
            neg[a as usize] = join(&na) as u8;
            for b in 0..size {
                let db = split(b);
                let s: Vec<u32> = da.iter().zip(&db).map(|(&x, &y)| (x + y) % p).collect();
                add[(a * size + b) as usize] = join(&s) as u8;
            }
        }
        DigitChunks { size, add, neg }
    }
}

/// Trial-division primality for the small integers used as characteristics.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
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

// Dense polynomials over F_p, constant term first, used only to pick moduli.

fn fp_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn fp_inv(a: u32, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = a as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

fn fp_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    fp_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = fp_inv(m[dm], p);
    while r.len() > dm {
        let top = r.len() - 1;
        let c = r[top] * lead_inv % p;
        for j in 0..=dm {
            let t = c * m[j] % p;
            r[top - dm + j] = (r[top - dm + j] + p - t) % p;
        }
        fp_trim(&mut r);
    }
    r
}

fn fp_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    fp_rem(&prod, m, p)
}

// X^(p^k) mod m
fn fp_frobenius_power(m: &[u32], p: u32, k: u32) -> Vec<u32> {
    let mut r = fp_rem(&[0, 1], m, p);
    for _ in 0..k {
        let mut acc = vec![1u32];
        for _ in 0..p {
            acc = fp_mulmod(&acc, &r, m, p);
        }
        r = acc;
    }
    r
}

fn fp_gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    fp_trim(&mut a);
    fp_trim(&mut b);
    while !b.is_empty() {
        let r = fp_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn fp_sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let n = a.len().max(b.len());
    let mut out: Vec<u32> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    fp_trim(&mut out);
    out
}

/// Rabin's irreducibility test for a monic polynomial over `F_p`
/// (coefficients constant term first).
pub fn is_irreducible_fp(m: &[u32], p: u32) -> bool {
    let mut m = m.to_vec();
    fp_trim(&mut m);
    if m.len() < 2 {
        return false;
    }
    let k = (m.len() - 1) as u32;
    let x = fp_rem(&[0, 1], &m, p);
    if fp_sub(&fp_frobenius_power(&m, p, k), &x, p) != Vec::<u32>::new() {
        return false;
    }
    for r in prime_factors(k as u64) {
        let h = fp_sub(&fp_frobenius_power(&m, p, k / r as u32), &x, p);
        if fp_gcd(&m, &h, p).len() != 1 {
            return false;
        }
    }
    true
}

/// Lexicographically smallest monic irreducible polynomial of degree `k`
/// over `F_p`, compared from the `X^{k-1}` coefficient down.
pub fn smallest_irreducible(p: u32, k: u32) -> Vec<u32> {
    let total = (p as u64).pow(k);
    for code in 0..total {
        let mut m = Vec::with_capacity(k as usize + 1);
        let mut c = code;
        for _ in 0..k {
            m.push((c % p as u64) as u32);
            c /= p as u64;
        }
        m.push(1);
        if is_irreducible_fp(&m, p) {
            return m;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> FieldParams {
        FieldParams::new(2, 1).unwrap()
    }

    fn f3() -> FieldParams {
        FieldParams::new(3, 1).unwrap()
    }

    #[test]
    fn cardinalities() {
        assert_eq!(ExtField::new(f2(), 1).unwrap().order(), 2);
        assert_eq!(ExtField::new(f2(), 10).unwrap().order(), 1024);
        assert_eq!(ExtField::new(f3(), 9).unwrap().order(), 19683);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert_eq!(FieldParams::new(4, 1), Err(FfError::NotPrime(4)));
        assert_eq!(FieldParams::new(2, 0), Err(FfError::ZeroExponent));
        assert!(matches!(ExtField::new(f2(), 21), Err(FfError::UnsupportedSize { .. })));
        assert!(matches!(ExtField::new(f2(), 0), Err(FfError::ZeroDegree)));
        let f4 = FieldParams::new(2, 2).unwrap();
        assert!(matches!(ExtField::new(f4, 11), Err(FfError::UnsupportedSize { .. })));
    }

    #[test]
    fn f4_modulus_and_trace() {
        let f = ExtField::new(f2(), 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        let g = f.generator();
        assert_eq!(f.square(g), f.add(g, f.one()));
        assert_eq!(f.absolute_trace(f.zero()), 0);
        assert_eq!(f.absolute_trace(f.one()), 0);
        assert_eq!(f.absolute_trace(g), 1);
    }

    #[test]
    fn enumeration_counts() {
        for (params, n, count) in [(f2(), 1, 2u64), (f2(), 3, 8), (f3(), 5, 243)] {
            let f = ExtField::new(params, n).unwrap();
            let all: std::collections::BTreeSet<_> = f.elements().collect();
            assert_eq!(all.len() as u64, count);
        }
    }

    #[test]
    fn table_and_slow_multiplication_agree() {
        for (params, n) in [(f2(), 6), (f3(), 4)] {
            let f = ExtField::new(params, n).unwrap();
            for a in f.elements().step_by(7) {
                for b in f.elements().step_by(5) {
                    assert_eq!(f.mul(a, b), f.mul_slow(a, b));
                }
            }
        }
    }

    #[test]
    fn large_field_without_tables() {
        let f = ExtField::new(f3(), 14).unwrap();
        assert!(f.tables.is_none());
        let g = f.generator();
        let x = f.add(g, f.from_fp(2));
        let xi = f.inv(x).unwrap();
        assert_eq!(f.mul(x, xi), f.one());
        assert!(f.absolute_trace(x) < 3);
        assert_eq!(f.pow(x, f.order()), x);
    }

    #[test]
    fn modulus_is_lexicographically_first() {
        assert_eq!(smallest_irreducible(2, 3), vec![1, 1, 0, 1]);
        assert_eq!(smallest_irreducible(3, 2), vec![1, 0, 1]);
        assert_eq!(smallest_irreducible(2, 1), vec![0, 1]);
    }

    #[test]
    fn prime_field_generator_is_root_of_modulus() {
        let f = ExtField::new(f3(), 1).unwrap();
        assert_eq!(f.generator(), f.zero());
    }
}
