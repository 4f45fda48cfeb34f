//! Plane curve models over `F_q`, point counts over `F_{q^n}`, place spectra
//! and zeta-function consistency checks.

use rayon::prelude::*;
use thiserror::Error;

use crate::expr::{MPoly, ParseError, Var};
use crate::ff::{Elem, ExtField, FfError, FieldParams, UPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error(transparent)]
    Field(#[from] FfError),
    #[error("invalid curve model: {0}")]
    InvalidModel(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("inconsistent model: a_{degree} = {numerator}/{degree} is not a nonnegative integer")]
    InconsistentModel { degree: usize, numerator: i128 },
    #[error("functional equation violated at n = {n}: predicted N_n = {predicted}, observed {observed}")]
    FunctionalEquationViolation { n: usize, predicted: i128, observed: i128 },
    #[error("L-polynomial coefficient b_{index} is not integral or violates the Riemann hypothesis bound")]
    WeilPolynomialViolation { index: usize },
    #[error("zeta check for genus {genus} needs point counts up to n = {needed}, have {available}")]
    InsufficientData { genus: u64, needed: usize, available: usize },
    #[error("Weil bound violated: |N_{n} - (q^{n} + 1)| > 2g q^({n}/2) with N_{n} = {count}, g = {genus}")]
    WeilBoundViolated { n: usize, count: u64, genus: u64 },
}

/// Places at infinity, supplied with the model: `count` places of `degree`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InfiniteGroup {
    pub degree: u32,
    pub count: u64,
}

/// An affine plane model `F(x, y) = 0` together with its places at infinity
/// and its genus.
///
/// The model is assumed smooth in the affine part and absolutely irreducible;
/// neither property is verified.
#[derive(Debug, Clone)]
pub struct CurveModel {
    name: String,
    params: FieldParams,
    equation: MPoly,
    y_coeffs: Vec<MPoly>,
    infinity: Vec<InfiniteGroup>,
    genus: u64,
}

impl CurveModel {
    pub fn new(
        name: impl Into<String>,
        params: FieldParams,
        equation: MPoly,
        infinity: Vec<InfiniteGroup>,
        genus: u64,
    ) -> Result<Self, CurveError> {
        if equation.characteristic() != params.p() {
            return Err(CurveError::InvalidModel("equation characteristic differs from the field".into()));
        }
        if equation.degree_in(Var::H) > 0 {
            return Err(CurveError::InvalidModel("curve equation may only use x and y".into()));
        }
        if equation.degree_in(Var::Y) == 0 {
            return Err(CurveError::InvalidModel("equation must involve y".into()));
        }
        if infinity.iter().any(|g| g.degree == 0) {
            return Err(CurveError::InvalidModel("places at infinity need positive degree".into()));
        }
        let y_coeffs = equation.y_coefficients();
        Ok(CurveModel { name: name.into(), params, equation, y_coeffs, infinity, genus })
    }

    /// Parses `equation` (for example `"y^2 + y = x^3 + x"`).
    pub fn parse(
        name: impl Into<String>,
        params: FieldParams,
        equation: &str,
        infinity: Vec<InfiniteGroup>,
        genus: u64,
    ) -> Result<Self, CurveError> {
        let eq = MPoly::parse(equation, params.p())?;
        Self::new(name, params, eq, infinity, genus)
    }

    /// The line `y = 0` with one rational place at infinity.
    pub fn projective_line(params: FieldParams) -> Self {
        Self::parse("P1", params, "y", vec![InfiniteGroup { degree: 1, count: 1 }], 0).expect("valid model")
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn params(&self) -> FieldParams {
        self.params
    }

    pub fn equation(&self) -> &MPoly {
        &self.equation
    }

    pub fn infinity(&self) -> &[InfiniteGroup] {
        &self.infinity
    }

    pub fn genus(&self) -> u64 {
        self.genus
    }

    /// `F(x, Y)` as a polynomial in `Y`.
    pub fn y_polynomial(&self, f: &ExtField, x: Elem) -> UPoly {
        UPoly::new(self.y_coeffs.iter().map(|c| c.eval(f, x, f.zero())).collect())
    }

    /// All affine points over `f`, ordered by `(x, y)` index.
    pub fn affine_points(&self, f: &ExtField) -> Vec<(Elem, Elem)> {
        (0..f.order() as u32)
            .into_par_iter()
            .flat_map_iter(|i| {
                let x = Elem(i);
                self.y_polynomial(f, x).roots(f).into_iter().map(move |y| (x, y))
            })
            .collect()
    }

    /// Number of affine points over `f`.
    pub fn affine_count(&self, f: &ExtField) -> u64 {
        (0..f.order() as u32)
            .into_par_iter()
            .map(|i| self.y_polynomial(f, Elem(i)).count_distinct_roots(f))
            .sum()
    }

    /// Points over `F_{q^n}` contributed by the places at infinity.
    pub fn infinite_points(&self, n: u32) -> u64 {
        self.infinity.iter().filter(|g| n % g.degree == 0).map(|g| g.degree as u64 * g.count).sum()
    }
}

/// `N_n`: affine solutions over `F_{q^n}` plus the points of the places at
/// infinity whose degree divides `n`.
pub fn count_points(model: &CurveModel, n: u32) -> Result<u64, CurveError> {
    let f = ExtField::new(model.params, n)?;
    Ok(model.affine_count(&f) + model.infinite_points(n))
}

/// The Möbius function.
pub fn mobius(mut n: u64) -> i64 {
    assert!(n > 0);
    let mut result = 1;
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            n /= d;
            if n % d == 0 {
                return 0;
            }
            result = -result;
        }
        d += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// `a_d = (1/d) Σ_{m | d} μ(d/m) N_m` for `d = 1..=counts.len()`.
///
/// Fails with the first degree whose numerator is not divisible by `d`.
pub fn mobius_invert(counts: &[i128]) -> Result<Vec<i128>, (usize, i128)> {
    (1..=counts.len())
        .map(|d| {
            let num: i128 = (1..=d)
                .filter(|m| d % m == 0)
                .map(|m| mobius((d / m) as u64) as i128 * counts[m - 1])
                .sum();
            if num % d as i128 == 0 {
                Ok(num / d as i128)
            } else {
                Err((d, num))
            }
        })
        .collect()
}

/// `N_n = Σ_{d | n} d·a_d` for `n = 1..=places.len()`.
pub fn divisor_sum(places: &[i128]) -> Vec<i128> {
    (1..=places.len())
        .map(|n| (1..=n).filter(|d| n % d == 0).map(|d| d as i128 * places[d - 1]).sum())
        .collect()
}

/// `|N - (q^n + 1)| ≤ 2g·q^{n/2}`, decided exactly by squaring.
pub fn weil_bound_holds(q: u64, genus: u64, n: u32, count: u64) -> bool {
    let qn = (q as i128).pow(n);
    let dev = count as i128 - qn - 1;
    dev * dev <= 4 * (genus as i128) * (genus as i128) * qn
}

/// Number of places of each degree `1..=D` and the induced point counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaceSpectrum {
    q: u64,
    genus: u64,
    places: Vec<u64>,
    counts: Vec<u64>,
}

impl PlaceSpectrum {
    /// Builds a spectrum from the place counts `a_1, a_2, …`.
    pub fn from_places(q: u64, genus: u64, places: Vec<u64>) -> Self {
        let counts = divisor_sum(&places.iter().map(|&a| a as i128).collect::<Vec<_>>())
            .into_iter()
            .map(|n| n as u64)
            .collect();
        PlaceSpectrum { q, genus, places, counts }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn genus(&self) -> u64 {
        self.genus
    }

    pub fn with_genus(mut self, genus: u64) -> Self {
        self.genus = genus;
        self
    }

    /// Largest degree covered.
    pub fn max_degree(&self) -> usize {
        self.places.len()
    }

    /// `a_d`, or 0 outside the covered range.
    pub fn places_of_degree(&self, d: usize) -> u64 {
        d.checked_sub(1).and_then(|i| self.places.get(i)).copied().unwrap_or(0)
    }

    /// `N_n` for `1 ≤ n ≤ max_degree`.
    pub fn point_count(&self, n: usize) -> Option<u64> {
        n.checked_sub(1).and_then(|i| self.counts.get(i)).copied()
    }

    pub fn places(&self) -> &[u64] {
        &self.places
    }

    pub fn point_counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn check_weil(&self) -> Result<(), CurveError> {
        for (i, &count) in self.counts.iter().enumerate() {
            if !weil_bound_holds(self.q, self.genus, i as u32 + 1, count) {
                return Err(CurveError::WeilBoundViolated { n: i + 1, count, genus: self.genus });
            }
        }
        Ok(())
    }
}

/// Counts points up to `d_max` and recovers `a_d` by Möbius inversion.
pub fn spectrum_from_counts(model: &CurveModel, d_max: usize) -> Result<PlaceSpectrum, CurveError> {
    let counts = (1..=d_max as u32).map(|n| count_points(model, n)).collect::<Result<Vec<_>, _>>()?;
    spectrum_from_point_counts(model.params.q(), model.genus, &counts)
}

/// Möbius inversion of already computed counts `N_1..N_D`.
pub fn spectrum_from_point_counts(q: u64, genus: u64, counts: &[u64]) -> Result<PlaceSpectrum, CurveError> {
    let wide: Vec<i128> = counts.iter().map(|&c| c as i128).collect();
    let places = mobius_invert(&wide).map_err(|(degree, numerator)| CurveError::InconsistentModel { degree, numerator })?;
    if let Some((i, &a)) = places.iter().enumerate().find(|(_, &a)| a < 0) {
        return Err(CurveError::InconsistentModel { degree: i + 1, numerator: a * (i as i128 + 1) });
    }
    Ok(PlaceSpectrum { q, genus, places: places.into_iter().map(|a| a as u64).collect(), counts: counts.to_vec() })
}

/// Outcome of [`zeta_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZetaReport {
    pub genus: u64,
    /// `b_0 = 1, b_1, …, b_{2g}` of `L(T) = Σ b_i T^i`.
    pub l_coefficients: Vec<i128>,
    /// `(n, predicted N_n, observed N_n)` for every stored `n > g`.
    pub predictions: Vec<(usize, i128, i128)>,
}

impl ZetaReport {
    pub fn max_discrepancy(&self) -> i128 {
        self.predictions.iter().map(|&(_, p, o)| (p - o).abs()).max().unwrap_or(0)
    }
}

/// Recovers the numerator `L(T)` of the zeta function from `N_1..N_g`, imposes
/// the functional equation `b_{2g-i} = q^{g-i} b_i`, checks that the
/// reciprocal roots have absolute value `√q` and re-predicts every stored
/// `N_n` with `n > g`.
///
/// The root-circle test is exact for `g ≤ 2`; for larger genus only the
/// coefficient bounds `|b_i| ≤ C(2g, i) q^{i/2}` are enforced.
pub fn zeta_check(spectrum: &PlaceSpectrum) -> Result<ZetaReport, CurveError> {
    let g = spectrum.genus as usize;
    let q = spectrum.q as i128;
    let available = spectrum.max_degree();
    let needed = (2 * g).max(1);
    if available < needed {
        return Err(CurveError::InsufficientData { genus: spectrum.genus, needed, available });
    }
    // s_n = N_n - q^n - 1 = -Σ α_i^n
    let s: Vec<i128> = (1..=available).map(|n| spectrum.counts[n - 1] as i128 - q.pow(n as u32) - 1).collect();
    let mut b = vec![0i128; 2 * g + 1];
    b[0] = 1;
    for n in 1..=g {
        let num: i128 = (1..=n).map(|i| s[i - 1] * b[n - i]).sum();
        if num % n as i128 != 0 {
            return Err(CurveError::WeilPolynomialViolation { index: n });
        }
        b[n] = num / n as i128;
    }
    for i in 0..g {
        b[2 * g - i] = q.pow((g - i) as u32) * b[i];
    }
    check_root_circle(&b, g, q)?;

    let coeff = |n: usize| if n <= 2 * g { b[n] } else { 0 };
    let mut predicted_s: Vec<i128> = Vec::with_capacity(available);
    let mut predictions = Vec::new();
    for n in 1..=available {
        let tail: i128 = (1..n).map(|i| predicted_s[i - 1] * coeff(n - i)).sum();
        let sn = n as i128 * coeff(n) - tail;
        predicted_s.push(sn);
        if n > g {
            let predicted = sn + q.pow(n as u32) + 1;
            let observed = spectrum.counts[n - 1] as i128;
            if predicted != observed {
                return Err(CurveError::FunctionalEquationViolation { n, predicted, observed });
            }
            predictions.push((n, predicted, observed));
        }
    }
    Ok(ZetaReport { genus: spectrum.genus, l_coefficients: b, predictions })
}

fn binomial(n: u64, k: u64) -> i128 {
    (0..k).fold(1i128, |acc, i| acc * (n - i) as i128 / (i + 1) as i128)
}

fn check_root_circle(b: &[i128], g: usize, q: i128) -> Result<(), CurveError> {
    match g {
        0 => Ok(()),
        1 => {
            if b[1] * b[1] <= 4 * q {
                Ok(())
            } else {
                Err(CurveError::WeilPolynomialViolation { index: 1 })
            }
        }
        2 => {
            // u = α + q/α runs over the roots of u^2 + b1 u + (b2 - 2q);
            // both must be real and lie in [-2√q, 2√q].
            let (b1, b2) = (b[1], b[2]);
            let disc = b1 * b1 - 4 * (b2 - 2 * q);
            let edge = 2 * q + b2;
            let ok = disc >= 0 && b1 * b1 <= 16 * q && edge >= 0 && edge * edge >= 4 * b1 * b1 * q;
            if ok {
                Ok(())
            } else {
                Err(CurveError::WeilPolynomialViolation { index: 2 })
            }
        }
        _ => {
            for (i, &bi) in b.iter().enumerate().take(2 * g + 1) {
                let c = binomial(2 * g as u64, i as u64);
                if bi * bi > c * c * q.pow(i as u32) {
                    return Err(CurveError::WeilPolynomialViolation { index: i });
                }
            }
            Ok(())
        }
    }
}

/// Representative of a place.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum PlaceRepr {
    /// A point over `F_{q^d}` (in the field `ExtField::new(params, d)`),
    /// the smallest of its Frobenius orbit.
    Affine { x: Elem, y: Elem },
    /// The `index`-th place of the `group`-th infinite group of the model.
    Infinite { group: usize, index: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Place {
    pub degree: u32,
    pub repr: PlaceRepr,
}

/// Size of the `x ↦ x^q` orbit of an affine point.
pub fn orbit_size(f: &ExtField, x: Elem, y: Elem) -> u32 {
    let (mut cx, mut cy) = (f.frobenius_q(x), f.frobenius_q(y));
    let mut s = 1;
    while (cx, cy) != (x, y) {
        cx = f.frobenius_q(cx);
        cy = f.frobenius_q(cy);
        s += 1;
    }
    s
}

/// The Frobenius orbit of an affine point, starting at the point itself.
pub fn orbit(f: &ExtField, x: Elem, y: Elem) -> Vec<(Elem, Elem)> {
    let mut out = vec![(x, y)];
    let (mut cx, mut cy) = (f.frobenius_q(x), f.frobenius_q(y));
    while (cx, cy) != (x, y) {
        out.push((cx, cy));
        cx = f.frobenius_q(cx);
        cy = f.frobenius_q(cy);
    }
    out
}

/// Places of degree exactly `d`: one affine representative (minimal in its
/// orbit) per Galois orbit of size `d`, then the infinite places of degree `d`.
pub fn enumerate_places(model: &CurveModel, d: u32) -> Result<Vec<Place>, CurveError> {
    let f = ExtField::new(model.params, d)?;
    Ok(enumerate_places_in(model, &f))
}

pub(crate) fn enumerate_places_in(model: &CurveModel, f: &ExtField) -> Vec<Place> {
    let d = f.n();
    let mut out: Vec<Place> = model
        .affine_points(f)
        .into_par_iter()
        .filter(|&(x, y)| {
            let orb = orbit(f, x, y);
            orb.len() as u32 == d && orb.iter().all(|&pt| (x, y) <= pt)
        })
        .map(|(x, y)| Place { degree: d, repr: PlaceRepr::Affine { x, y } })
        .collect();
    for (group, g) in model.infinity.iter().enumerate() {
        if g.degree == d {
            out.extend((0..g.count).map(|index| Place { degree: d, repr: PlaceRepr::Infinite { group, index } }));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> FieldParams {
        FieldParams::new(2, 1).unwrap()
    }

    fn elliptic() -> CurveModel {
        CurveModel::parse("E", f2(), "y^2 + y = x^3 + x", vec![InfiniteGroup { degree: 1, count: 1 }], 1).unwrap()
    }

    #[test]
    fn projective_line_counts() {
        let p1 = CurveModel::projective_line(f2());
        assert_eq!(count_points(&p1, 3).unwrap(), 9);
        let s = spectrum_from_counts(&p1, 3).unwrap();
        assert_eq!(s.places(), &[3, 1, 2]);
        let z = zeta_check(&s).unwrap();
        assert_eq!(z.l_coefficients, vec![1]);
    }

    #[test]
    fn elliptic_small_counts() {
        let e = elliptic();
        assert_eq!(count_points(&e, 1).unwrap(), 5);
        assert_eq!(count_points(&e, 2).unwrap(), 5);
    }

    #[test]
    fn elliptic_l_polynomial() {
        let s = spectrum_from_counts(&elliptic(), 4).unwrap();
        let z = zeta_check(&s).unwrap();
        assert_eq!(z.l_coefficients, vec![1, 2, 2]);
        assert_eq!(z.predictions[0], (2, 5, 5));
    }

    #[test]
    fn mobius_values() {
        let mu: Vec<i64> = (1..=12).map(mobius).collect();
        assert_eq!(mu, vec![1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]);
    }

    #[test]
    fn inconsistent_counts_rejected() {
        // N_1 = 3, N_2 = 4 would need a_2 = 1/2
        assert!(matches!(
            spectrum_from_point_counts(2, 0, &[3, 4]),
            Err(CurveError::InconsistentModel { degree: 2, .. })
        ));
        // N_1 = 5, N_2 = 3 gives a_2 = -1
        assert!(matches!(
            spectrum_from_point_counts(2, 1, &[5, 3]),
            Err(CurveError::InconsistentModel { degree: 2, .. })
        ));
    }

    #[test]
    fn wrong_genus_is_caught() {
        let s = spectrum_from_counts(&elliptic(), 4).unwrap().with_genus(0);
        assert!(matches!(zeta_check(&s), Err(CurveError::FunctionalEquationViolation { n: 1, .. })));
        let short = PlaceSpectrum::from_places(2, 2, vec![5]);
        assert!(matches!(zeta_check(&short), Err(CurveError::InsufficientData { .. })));
    }

    #[test]
    fn weil_bound_is_exact() {
        // q = 2, g = 1, n = 1: |N - 3| ≤ 2√2 ≈ 2.83
        assert!(weil_bound_holds(2, 1, 1, 5));
        assert!(!weil_bound_holds(2, 1, 1, 6));
        assert!(weil_bound_holds(2, 1, 1, 1));
        assert!(!weil_bound_holds(2, 1, 1, 0));
    }

    #[test]
    fn places_of_elliptic_curve() {
        let e = elliptic();
        assert_eq!(enumerate_places(&e, 1).unwrap().len(), 5);
        assert_eq!(enumerate_places(&e, 2).unwrap().len(), 0);
        assert_eq!(enumerate_places(&e, 4).unwrap().len(), 5);
    }

    #[test]
    fn model_validation() {
        assert!(matches!(
            CurveModel::parse("bad", f2(), "x^2 + 1", vec![], 0),
            Err(CurveError::InvalidModel(_))
        ));
        assert!(matches!(CurveModel::parse("bad", f2(), "y + h", vec![], 0), Err(CurveError::InvalidModel(_))));
        assert!(matches!(CurveModel::parse("bad", f2(), "y + z", vec![], 0), Err(CurveError::Parse(_))));
    }
}
