#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use ihara::cft::{PlanEntry, RamificationPlan};
use ihara::cli::Session;
use ihara::cover::CoverSpec;
use ihara::curve::{CurveModel, PlaceSpectrum};
use ihara::ff::{ExtField, FieldParams};

pub fn session(name: &str) -> Session {
    Session::load(name).unwrap_or_else(|e| panic!("builtin config {name}: {e}"))
}

pub fn curve<'a>(s: &'a Session, name: &str) -> &'a CurveModel {
    &s.workspace.curves[name]
}

pub fn cover<'a>(s: &'a Session, name: &str) -> &'a CoverSpec {
    &s.workspace.covers[name]
}

pub fn f2() -> FieldParams {
    FieldParams::new(2, 1).unwrap()
}

pub fn f3() -> FieldParams {
    FieldParams::new(3, 1).unwrap()
}

pub fn plan(params: FieldParams, entries: &[(u32, u64, u32)], t: u64) -> RamificationPlan {
    let entries = entries.iter().map(|&(degree, count, nu)| PlanEntry { degree, count, nu }).collect();
    RamificationPlan::new(params, entries, t).unwrap()
}

/// Every pair `(x, y)` of `F_{q^n}` plugged into the equation, plus the
/// declared points at infinity.
pub fn naive_point_count(model: &CurveModel, n: u32) -> u64 {
    let f = ExtField::new(model.params(), n).unwrap();
    let eq = model.equation();
    let mut affine = 0u64;
    for x in f.elements() {
        for y in f.elements() {
            if eq.eval(&f, x, y).is_zero() {
                affine += 1;
            }
        }
    }
    affine + model.infinite_points(n)
}

/// The places of `S` listed one by one: `(degree, ν)` repeated `count` times.
fn expand(entries: &[(u32, u64, u32)]) -> Vec<(u32, u32)> {
    entries.iter().flat_map(|&(d, c, nu)| std::iter::repeat((d, nu)).take(c as usize)).collect()
}

/// Left side of the infinitude inequality summed place by place in big
/// integers, straight from the displayed formula.
pub fn margin_oracle(p: u32, e: u32, entries: &[(u32, u64, u32)], t: u64) -> BigInt {
    let big = |v: u64| BigInt::from(v);
    let (mut units, mut quad) = (BigInt::zero(), BigInt::zero());
    for (f, nu) in expand(entries) {
        let (f, nu, p, e) = (f as u64, nu as u64, p as u64, e as u64);
        units += big(e * f * (nu - 1 - (nu - 1) / p));
        let m = big(e * f * (nu - 1));
        quad += &m * (&m + BigInt::one());
    }
    let lead = BigInt::one() + &units - big(t);
    &lead * &lead - BigInt::from(2) * quad - BigInt::from(4) * units
}

/// `t / (g - 1 + ½ Σ f ν)`, place by place.
pub fn plain_bound_oracle(genus: u64, entries: &[(u32, u64, u32)], t: u64) -> BigRational {
    let mut den = BigRational::from_integer(BigInt::from(genus) - 1);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    for (f, nu) in expand(entries) {
        den += &half * BigRational::from_integer(BigInt::from(f * nu));
    }
    BigRational::from_integer(BigInt::from(t)) / den
}

/// `t / (g - 1 + ½ Σ f ν (1 - q^{-f}))`, place by place.
pub fn refined_bound_oracle(q: u64, genus: u64, entries: &[(u32, u64, u32)], t: u64) -> BigRational {
    let mut den = BigRational::from_integer(BigInt::from(genus) - 1);
    for (f, nu) in expand(entries) {
        let qf = BigInt::from(q).pow(f);
        let frac = BigRational::new(&qf - BigInt::one(), qf);
        den += BigRational::new(BigInt::from(f * nu), BigInt::from(2)) * frac;
    }
    BigRational::from_integer(BigInt::from(t)) / den
}

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Elliptic Weil numbers: `N_n = q^n + 1 - Σ_i (α_i^n + ᾱ_i^n)` with
/// `α_i + ᾱ_i = a_i`, `α_i ᾱ_i = q`.
pub fn counts_from_traces(q: i128, traces: &[i128], n_max: usize) -> Vec<i128> {
    let mut power_sums = vec![0i128; n_max + 1];
    for &a in traces {
        let (mut s_prev, mut s) = (2i128, a);
        power_sums[1] += s;
        for slot in power_sums.iter_mut().take(n_max + 1).skip(2) {
            let next = a * s - q * s_prev;
            s_prev = s;
            s = next;
            *slot += s;
        }
    }
    (1..=n_max).map(|n| q.pow(n as u32) + 1 - power_sums[n]).collect()
}

pub fn spectrum_places(s: &PlaceSpectrum) -> Vec<u64> {
    s.places().to_vec()
}
