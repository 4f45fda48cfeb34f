use super::{Elem, ExtField};

/// Dense univariate polynomial over an [`ExtField`], constant term first.
///
/// Always trimmed: the zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UPoly(Vec<Elem>);

impl UPoly {
    pub fn new(mut coeffs: Vec<Elem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly(coeffs)
    }

    pub fn zero() -> Self {
        UPoly(Vec::new())
    }

    pub fn monomial(c: Elem, deg: usize) -> Self {
        let mut v = vec![Elem::ZERO; deg + 1];
        v[deg] = c;
        UPoly::new(v)
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, f: &ExtField, x: Elem) -> Elem {
        self.0.iter().rev().fold(Elem::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn add(&self, f: &ExtField, other: &UPoly) -> UPoly {
        let n = self.0.len().max(other.0.len());
        let v = (0..n)
            .map(|i| {
                let a = self.0.get(i).copied().unwrap_or(Elem::ZERO);
                let b = other.0.get(i).copied().unwrap_or(Elem::ZERO);
                f.add(a, b)
            })
            .collect();
        UPoly::new(v)
    }

    pub fn sub(&self, f: &ExtField, other: &UPoly) -> UPoly {
        let neg = UPoly(other.0.iter().map(|&c| f.neg(c)).collect());
        self.add(f, &neg)
    }

    pub fn mul(&self, f: &ExtField, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero();
        }
        let mut v = vec![Elem::ZERO; self.0.len() + other.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.0.iter().enumerate() {
                v[i + j] = f.add(v[i + j], f.mul(a, b));
            }
        }
        UPoly::new(v)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, f: &ExtField, d: &UPoly) -> (UPoly, UPoly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead_inv = f.inv(d.0[dd]).expect("nonzero leading coefficient");
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (UPoly::zero(), self.clone());
        }
        let mut q = vec![Elem::ZERO; r.len() - dd];
        for top in (dd..r.len()).rev() {
            let c = f.mul(r[top], lead_inv);
            if c.is_zero() {
                continue;
            }
            q[top - dd] = c;
            for j in 0..=dd {
                r[top - dd + j] = f.sub(r[top - dd + j], f.mul(c, d.0[j]));
            }
        }
        (UPoly::new(q), UPoly::new(r))
    }

    pub fn rem(&self, f: &ExtField, d: &UPoly) -> UPoly {
        self.div_rem(f, d).1
    }

    pub fn monic(&self, f: &ExtField) -> UPoly {
        match self.0.last() {
            None => UPoly::zero(),
            Some(&lead) => {
                let li = f.inv(lead).expect("trimmed");
                UPoly(self.0.iter().map(|&c| f.mul(c, li)).collect())
            }
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, f: &ExtField, other: &UPoly) -> UPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(f, &b);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    fn mulmod(&self, f: &ExtField, other: &UPoly, m: &UPoly) -> UPoly {
        self.mul(f, other).rem(f, m)
    }

    fn powmod_small(&self, f: &ExtField, mut e: u64, m: &UPoly) -> UPoly {
        let mut base = self.rem(f, m);
        let mut acc = UPoly::new(vec![f.one()]).rem(f, m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mulmod(f, &base, m);
            }
            base = base.mulmod(f, &base, m);
            e >>= 1;
        }
        acc
    }

    // self^(p^k) mod m by k successive p-th powers.
    fn frobenius_power_mod(&self, f: &ExtField, k: u32, m: &UPoly) -> UPoly {
        let mut r = self.rem(f, m);
        for _ in 0..k {
            r = r.powmod_small(f, f.p() as u64, m);
        }
        r
    }

    /// `gcd(self, Y^|F| - Y)`: the product of the distinct linear factors.
    pub fn rational_part(&self, f: &ExtField) -> UPoly {
        if self.degree().unwrap_or(0) == 0 {
            return UPoly::new(vec![f.one()]);
        }
        let m = self.monic(f);
        let y = UPoly::new(vec![Elem::ZERO, f.one()]);
        let yq = y.frobenius_power_mod(f, f.absolute_degree(), &m);
        m.gcd(f, &yq.sub(f, &y))
    }

    /// Number of distinct roots in the field. The zero polynomial vanishes
    /// everywhere and reports the field order.
    pub fn count_distinct_roots(&self, f: &ExtField) -> u64 {
        if self.is_zero() {
            return f.order();
        }
        self.rational_part(f).degree().unwrap_or(0) as u64
    }

    /// The distinct roots in the field, sorted by index. Not defined for the
    /// zero polynomial (returns every element).
    pub fn roots(&self, f: &ExtField) -> Vec<Elem> {
        if self.is_zero() {
            return f.elements().collect();
        }
        let mut out = Vec::new();
        split_roots(f, &self.rational_part(f), 0, &mut out);
        out.sort();
        out
    }
}

// Berlekamp trace splitting of a squarefree product of linear factors, using
// the traces of beta·Y for beta running through the power basis.
fn split_roots(f: &ExtField, g: &UPoly, basis_index: u32, out: &mut Vec<Elem>) {
    match g.degree() {
        None | Some(0) => {}
        Some(1) => {
            let c = g.coeffs();
            let r = f.neg(f.div(c[0], c[1]).expect("monic"));
            out.push(r);
        }
        Some(_) => {
            assert!(basis_index < f.absolute_degree(), "trace splitting exhausted the basis");
            let beta = f.pow(f.generator(), basis_index as u64);
            let beta = if f.absolute_degree() == 1 { f.one() } else { beta };
            let by = UPoly::new(vec![Elem::ZERO, beta]).rem(f, g);
            let mut tr = UPoly::zero();
            let mut cur = by;
            for _ in 0..f.absolute_degree() {
                tr = tr.add(f, &cur);
                cur = cur.powmod_small(f, f.p() as u64, g);
            }
            for c in 0..f.p() {
                let shifted = tr.sub(f, &UPoly::new(vec![f.from_fp(c)]));
                let h = g.gcd(f, &shifted);
                if h.degree() == g.degree() {
                    split_roots(f, g, basis_index + 1, out);
                    return;
                }
                split_roots(f, &h, basis_index + 1, out);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::FieldParams;

    #[test]
    fn roots_match_enumeration() {
        for (p, n) in [(2u32, 4u32), (3, 3), (2, 1), (3, 1)] {
            let f = ExtField::new(FieldParams::new(p, 1).unwrap(), n).unwrap();
            let g = f.generator();
            let polys = [
                UPoly::new(vec![f.one(), f.one(), f.one()]),
                UPoly::new(vec![g, f.zero(), f.one()]),
                UPoly::new(vec![f.zero(), f.neg(f.one()), f.zero(), f.one()]),
                UPoly::new(vec![f.add(g, f.one()), g, f.one(), f.one()]),
            ];
            for poly in &polys {
                let brute: Vec<Elem> = f.elements().filter(|&y| poly.eval(&f, y).is_zero()).collect();
                assert_eq!(poly.roots(&f), brute);
                assert_eq!(poly.count_distinct_roots(&f), brute.len() as u64);
            }
        }
    }

    #[test]
    fn zero_and_constant_polynomials() {
        let f = ExtField::new(FieldParams::new(2, 1).unwrap(), 3).unwrap();
        assert_eq!(UPoly::zero().count_distinct_roots(&f), 8);
        assert_eq!(UPoly::new(vec![f.one()]).count_distinct_roots(&f), 0);
    }

    #[test]
    fn repeated_roots_counted_once() {
        let f = ExtField::new(FieldParams::new(3, 1).unwrap(), 2).unwrap();
        // (Y - 1)^2 (Y - g)
        let a = UPoly::new(vec![f.neg(f.one()), f.one()]);
        let b = UPoly::new(vec![f.neg(f.generator()), f.one()]);
        let poly = a.mul(&f, &a).mul(&f, &b);
        assert_eq!(poly.roots(&f), {
            let mut v = vec![f.one(), f.generator()];
            v.sort();
            v
        });
    }
}
