//! Elementary abelian `p`-covers built as composita of Artin–Schreier curves.
//!
//! Each component is `v^p - A^{p-1} v = B` over the base curve. Where `A ≠ 0`
//! the substitution `w = v/A` turns it into `w^p - w = u` with `u = B/A^p`,
//! and an unramified place of degree `m` splits in that component iff the
//! absolute trace of `u` at the place vanishes. The vector of these traces
//! over all components (the Frobenius vector) determines how the place
//! decomposes in the compositum.
//!
//! Places at infinity and the conductor support are not analysed: their
//! behaviour is declared with the cover.

use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::cft::{genus_from_conductors, CftError, CharacterConductorProfile};
use crate::curve::{enumerate_places_in, orbit, CurveError, CurveModel, Place, PlaceRepr, PlaceSpectrum};
use crate::expr::{MPoly, Var};
use crate::ff::{Elem, ExtField, FfError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoverError {
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Field(#[from] FfError),
    #[error(transparent)]
    Cft(#[from] CftError),
    #[error("invalid cover: {0}")]
    InvalidCover(String),
    #[error("place of degree {degree} is declared ({what}); its decomposition is not computed")]
    RamifiedPlace { degree: u32, what: String },
    #[error("component {component} has a pole at an undeclared place of degree {degree} (x = {x}, y = {y})")]
    PoleAtPlace { component: usize, degree: u32, x: Elem, y: Elem },
    #[error("trace-based decomposition needs a prime constant field (e = 1), got e = {0}")]
    UnsupportedConstantField(u32),
}

/// `v^p - A^{p-1} v = B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AsComponent {
    label: String,
    a: MPoly,
    b: MPoly,
}

impl AsComponent {
    pub fn new(label: impl Into<String>, a: MPoly, b: MPoly) -> Result<Self, CoverError> {
        if a.degree_in(Var::H) > 0 || b.degree_in(Var::H) > 0 {
            return Err(CoverError::InvalidCover("component polynomials may only use x and y".into()));
        }
        if a.characteristic() != b.characteristic() {
            return Err(CoverError::InvalidCover("component characteristic mismatch".into()));
        }
        if a.is_zero() {
            return Err(CoverError::InvalidCover("coefficient A must be nonzero".into()));
        }
        Ok(AsComponent { label: label.into(), a, b })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn a(&self) -> &MPoly {
        &self.a
    }

    pub fn b(&self) -> &MPoly {
        &self.b
    }

    /// `u = B/A^p` at `(x, y)`, or `None` where `A` vanishes.
    pub fn normalized(&self, f: &ExtField, x: Elem, y: Elem) -> Option<Elem> {
        let a = self.a.eval(f, x, y);
        let ap = f.pow(a, f.p() as u64);
        f.div(self.b.eval(f, x, y), ap)
    }

    /// `v^p - A^{p-1} v - B` at `(x, y, v)`.
    pub fn residual(&self, f: &ExtField, x: Elem, y: Elem, v: Elem) -> Elem {
        let a = self.a.eval(f, x, y);
        let b = self.b.eval(f, x, y);
        let p = f.p() as u64;
        let lin = f.mul(f.pow(a, p - 1), v);
        f.sub(f.sub(f.pow(v, p), lin), b)
    }
}

/// Places of the cover above one declared base place: `count` places of
/// `degree` each.
pub type PlacesAbove = Vec<(u32, u64)>;

/// Which base places a support declaration refers to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlaceSelector {
    /// Every place of this degree at which some component coefficient `A`
    /// vanishes.
    ZerosOfDegree(u32),
    /// The place through this point of `F_{q^degree}` (any conjugate).
    Point { degree: u32, x: Elem, y: Elem },
}

impl PlaceSelector {
    pub fn degree(&self) -> u32 {
        match *self {
            PlaceSelector::ZerosOfDegree(d) => d,
            PlaceSelector::Point { degree, .. } => degree,
        }
    }
}

/// A conductor-support place with its declared decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportEntry {
    pub selector: PlaceSelector,
    pub above: PlacesAbove,
}

/// The cover `k/base` of degree `p^r`, `r` = number of components.
#[derive(Debug, Clone)]
pub struct CoverSpec {
    name: String,
    base: CurveModel,
    components: Vec<AsComponent>,
    support: Vec<SupportEntry>,
    infinity_above: Vec<PlacesAbove>,
    profile: CharacterConductorProfile,
}

impl CoverSpec {
    /// `infinity_above[i]` declares what lies above each place of the base's
    /// `i`-th infinite group. Components are assumed independent (no
    /// `F_p`-combination of the `u`'s is of the form `z^p - z`); this is not
    /// verified.
    pub fn new(
        name: impl Into<String>,
        base: CurveModel,
        components: Vec<AsComponent>,
        support: Vec<SupportEntry>,
        infinity_above: Vec<PlacesAbove>,
        profile: CharacterConductorProfile,
    ) -> Result<Self, CoverError> {
        let p = base.params().p();
        let r = components.len() as u32;
        let degree = (p as u64)
            .checked_pow(r)
            .filter(|&d| d <= u32::MAX as u64)
            .ok_or_else(|| CoverError::InvalidCover(format!("rank {r} too large")))?;
        if components.iter().any(|c| c.a.characteristic() != p) {
            return Err(CoverError::InvalidCover("component characteristic differs from the base field".into()));
        }
        if profile.group_order() != degree {
            return Err(CoverError::InvalidCover(format!(
                "conductor profile has group order {}, cover has degree {degree}",
                profile.group_order()
            )));
        }
        if infinity_above.len() != base.infinity().len() {
            return Err(CoverError::InvalidCover(format!(
                "base has {} infinite place groups, {} declared",
                base.infinity().len(),
                infinity_above.len()
            )));
        }
        for (group, above) in base.infinity().iter().zip(&infinity_above) {
            check_declared(group.degree, above, degree)?;
        }
        for s in &support {
            check_declared(s.selector.degree(), &s.above, degree)?;
        }
        let name = name.into();
        Ok(CoverSpec { name, base, components, support, infinity_above, profile })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn base(&self) -> &CurveModel {
        &self.base
    }

    pub fn components(&self) -> &[AsComponent] {
        &self.components
    }

    pub fn rank(&self) -> u32 {
        self.components.len() as u32
    }

    /// `[k : base] = p^r`.
    pub fn degree(&self) -> u64 {
        (self.base.params().p() as u64).pow(self.rank())
    }

    pub fn support(&self) -> &[SupportEntry] {
        &self.support
    }

    pub fn infinity_above(&self) -> &[PlacesAbove] {
        &self.infinity_above
    }

    pub fn profile(&self) -> &CharacterConductorProfile {
        &self.profile
    }

    /// Genus of the cover from the declared conductor profile.
    pub fn genus(&self) -> Result<u64, CoverError> {
        Ok(genus_from_conductors(self.base.genus(), &self.profile)?)
    }

    /// A cover using only the components at `indices` (the subfield fixed by
    /// the complementary characters); declarations are supplied anew.
    pub fn subcover(
        &self,
        name: impl Into<String>,
        indices: &[usize],
        support: Vec<SupportEntry>,
        infinity_above: Vec<PlacesAbove>,
        profile: CharacterConductorProfile,
    ) -> Result<CoverSpec, CoverError> {
        let components = indices
            .iter()
            .map(|&i| {
                self.components.get(i).cloned().ok_or_else(|| CoverError::InvalidCover(format!("no component {i}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        CoverSpec::new(name, self.base.clone(), components, support, infinity_above, profile)
    }

    fn matching_support(&self, f: &ExtField, x: Elem, y: Elem) -> Option<&SupportEntry> {
        let m = f.n();
        self.support.iter().find(|s| match s.selector {
            PlaceSelector::ZerosOfDegree(d) => {
                d == m && self.components.iter().any(|c| c.a.eval(f, x, y).is_zero())
            }
            PlaceSelector::Point { degree, x: px, y: py } => {
                degree == m && orbit(f, x, y).contains(&(px, py))
            }
        })
    }
}

// A Galois cover: all places above a base place share degree f·m and
// ramification e, with count·f·e = [k : base].
fn check_declared(base_degree: u32, above: &PlacesAbove, cover_degree: u64) -> Result<(), CoverError> {
    let bad = |msg: String| Err(CoverError::InvalidCover(msg));
    let Some(&(d0, _)) = above.first() else {
        return bad(format!("empty declaration above a place of degree {base_degree}"));
    };
    if above.iter().any(|&(d, c)| d != d0 || c == 0) {
        return bad(format!("places above a degree-{base_degree} place must share one degree and be present"));
    }
    if base_degree == 0 || d0 % base_degree != 0 {
        return bad(format!("degree {d0} above a degree-{base_degree} place is not a multiple"));
    }
    let count: u64 = above.iter().map(|&(_, c)| c).sum();
    let fc = count * (d0 / base_degree) as u64;
    if fc == 0 || cover_degree % fc != 0 {
        return bad(format!("{count} places of degree {d0} above a degree-{base_degree} place cannot occur in a cover of degree {cover_degree}"));
    }
    Ok(())
}

/// How an unramified place decomposes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionRecord {
    pub base_place: Place,
    /// `Tr(u_i)` at the place, one entry per component.
    pub frobenius_vector: Vec<u32>,
    pub places_above: PlacesAbove,
}

fn require_prime_field(cover: &CoverSpec) -> Result<(), CoverError> {
    match cover.base.params().e() {
        1 => Ok(()),
        e => Err(CoverError::UnsupportedConstantField(e)),
    }
}

/// Decomposition of an unramified base place from its Frobenius vector:
/// zero vector → `p^r` places of degree `m`, otherwise `p^{r-1}` places of
/// degree `p·m`.
pub fn decompose_place(cover: &CoverSpec, place: &Place) -> Result<DecompositionRecord, CoverError> {
    require_prime_field(cover)?;
    let f = ExtField::new(cover.base.params(), place.degree)?;
    decompose_in(cover, &f, place)
}

fn decompose_in(cover: &CoverSpec, f: &ExtField, place: &Place) -> Result<DecompositionRecord, CoverError> {
    let m = place.degree;
    let (x, y) = match place.repr {
        PlaceRepr::Infinite { group, .. } => {
            return Err(CoverError::RamifiedPlace { degree: m, what: format!("infinite place of group {group}") })
        }
        PlaceRepr::Affine { x, y } => (x, y),
    };
    if cover.matching_support(f, x, y).is_some() {
        return Err(CoverError::RamifiedPlace { degree: m, what: "conductor support".into() });
    }
    let frobenius_vector = cover
        .components
        .iter()
        .enumerate()
        .map(|(i, c)| {
            c.normalized(f, x, y)
                .map(|u| f.absolute_trace(u))
                .ok_or(CoverError::PoleAtPlace { component: i, degree: m, x, y })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let p = cover.base.params().p() as u64;
    let r = cover.rank();
    let places_above = if frobenius_vector.iter().all(|&t| t == 0) {
        vec![(m, p.pow(r))]
    } else {
        vec![(m * p as u32, p.pow(r - 1))]
    };
    Ok(DecompositionRecord { base_place: *place, frobenius_vector, places_above })
}

/// A base place whose fibre is declared rather than computed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeclaredFibre {
    pub base_place: Place,
    pub above: PlacesAbove,
}

/// Spectrum of the cover with the bookkeeping behind it.
#[derive(Debug, Clone)]
pub struct AssembledSpectrum {
    pub spectrum: PlaceSpectrum,
    /// Declared fibres over base places of degree `≤ d_max`.
    pub declared: Vec<DeclaredFibre>,
    /// Number of base places decomposed through their Frobenius vector.
    pub decomposed: usize,
}

impl AssembledSpectrum {
    /// Points over `F_{q^n}` on declared places of the cover.
    pub fn declared_points(&self, n: u32) -> u64 {
        self.declared
            .iter()
            .flat_map(|d| d.above.iter())
            .filter(|&&(deg, _)| n % deg == 0)
            .map(|&(deg, c)| deg as u64 * c)
            .sum()
    }
}

/// Place spectrum of the cover up to `d_max`, with genus from the conductor
/// profile.
pub fn assemble_spectrum(cover: &CoverSpec, d_max: usize) -> Result<PlaceSpectrum, CoverError> {
    Ok(assemble_detailed(cover, d_max)?.spectrum)
}

pub fn assemble_detailed(cover: &CoverSpec, d_max: usize) -> Result<AssembledSpectrum, CoverError> {
    require_prime_field(cover)?;
    let genus = cover.genus()?;
    let mut places = vec![0u64; d_max];
    let mut declared = Vec::new();
    let mut decomposed = 0;
    let add = |above: &PlacesAbove, places: &mut Vec<u64>| {
        for &(deg, c) in above {
            if (deg as usize) <= d_max {
                places[deg as usize - 1] += c;
            }
        }
    };
    for m in 1..=d_max as u32 {
        let f = ExtField::new(cover.base.params(), m)?;
        let base_places = enumerate_places_in(&cover.base, &f);
        let records: Vec<Result<Option<DecompositionRecord>, CoverError>> = base_places
            .par_iter()
            .map(|place| match place.repr {
                PlaceRepr::Infinite { .. } => Ok(None),
                PlaceRepr::Affine { x, y } if cover.matching_support(&f, x, y).is_some() => Ok(None),
                _ => decompose_in(cover, &f, place).map(Some),
            })
            .collect();
        for (place, rec) in base_places.iter().zip(records) {
            match rec? {
                Some(r) => {
                    decomposed += 1;
                    add(&r.places_above, &mut places);
                }
                None => {
                    let above = match place.repr {
                        PlaceRepr::Infinite { group, .. } => cover.infinity_above[group].clone(),
                        PlaceRepr::Affine { x, y } => cover.matching_support(&f, x, y).expect("support").above.clone(),
                    };
                    add(&above, &mut places);
                    declared.push(DeclaredFibre { base_place: *place, above });
                }
            }
        }
    }
    let spectrum = PlaceSpectrum::from_places(cover.base.params().q(), genus, places);
    Ok(AssembledSpectrum { spectrum, declared, decomposed })
}

/// Independent count of the affine points of the compositum over `F_{q^n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompositumCount {
    pub n: u32,
    /// Solutions `(x, y, v_1..v_r)` over base points where every `A_i ≠ 0`.
    pub regular_points: u64,
    /// Solutions over base points where some `A_i = 0`.
    pub singular_points: u64,
    /// `N_n` of the cover from the assembled spectrum.
    pub spectrum_points: u64,
    /// Points of the cover on declared (infinite or support) places.
    pub declared_points: u64,
    /// `regular_points - (spectrum_points - declared_points)`.
    pub residual: i128,
}

/// Enumerates every `(x, y)` with `F(x, y) = 0` and every `v_i` over
/// `F_{q^n}` and compares with the assembled spectrum. Quadratic in the
/// field size; intended for small `n`.
pub fn brute_force_compositum_count(cover: &CoverSpec, n: u32) -> Result<CompositumCount, CoverError> {
    let f = ExtField::new(cover.base.params(), n)?;
    if f.order() > 1 << 12 {
        return Err(FfError::UnsupportedSize { p: f.p(), degree: f.absolute_degree(), cap: 12 }.into());
    }
    let eq = cover.base.equation();
    let (regular, singular) = (0..f.order() as u32)
        .into_par_iter()
        .map(|xi| {
            let x = Elem(xi);
            let mut acc = (0u64, 0u64);
            for y in f.elements().filter(|&y| eq.eval(&f, x, y).is_zero()) {
                let fibre: u64 = cover
                    .components
                    .iter()
                    .map(|c| f.elements().filter(|&v| c.residual(&f, x, y, v).is_zero()).count() as u64)
                    .product();
                if cover.components.iter().any(|c| c.a.eval(&f, x, y).is_zero()) {
                    acc.1 += fibre;
                } else {
                    acc.0 += fibre;
                }
            }
            acc
        })
        .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1));
    let assembled = assemble_detailed(cover, n as usize)?;
    let spectrum_points = assembled.spectrum.point_count(n as usize).unwrap_or(0);
    let declared_points = assembled.declared_points(n);
    let residual = regular as i128 - (spectrum_points as i128 - declared_points as i128);
    Ok(CompositumCount {
        n,
        regular_points: regular,
        singular_points: singular,
        spectrum_points,
        declared_points,
        residual,
    })
}

/// Frobenius vectors of all unramified places of degree `m`, keyed by the
/// resulting decomposition.
pub fn decomposition_histogram(cover: &CoverSpec, m: u32) -> Result<BTreeMap<PlacesAbove, usize>, CoverError> {
    require_prime_field(cover)?;
    let f = ExtField::new(cover.base.params(), m)?;
    let mut out = BTreeMap::new();
    for place in enumerate_places_in(&cover.base, &f) {
        match decompose_in(cover, &f, &place) {
            Ok(r) => *out.entry(r.places_above).or_insert(0) += 1,
            Err(CoverError::RamifiedPlace { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}
