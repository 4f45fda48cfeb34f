//! Search over ramification plans, and the comparison of the two inequality
//! systems for towers built on top of an elementary abelian extension.
//!
//! Places of the same degree are interchangeable in every formula of
//! [`crate::cft`], so a candidate is a vector of multiplicities indexed by
//! `(degree, ν)` together with a split count `t`.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::ops::RangeInclusive;

use num_rational::BigRational;
use rayon::prelude::*;
use thiserror::Error;

use crate::cft::{certify_tower, gs_margin, gs_margin_raw, CftError, PlanEntry, RamificationPlan, TowerCertificate};
use crate::curve::PlaceSpectrum;
use crate::ff::FieldParams;

/// Spaces larger than this are refused rather than enumerated.
pub const MAX_CANDIDATES: u64 = 50_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("no plan in the search space certifies an infinite tower ({evaluated} candidates evaluated)")]
    EmptySpace { evaluated: u64 },
    #[error("search space has {0} candidates, more than {MAX_CANDIDATES}")]
    TooLarge(u128),
    #[error("invalid search space: {0}")]
    InvalidSpace(String),
    #[error(transparent)]
    Cft(#[from] CftError),
}

#[derive(Debug, Clone)]
pub struct SearchSpace {
    params: FieldParams,
    spectrum: PlaceSpectrum,
    genus: u64,
    allowed_nu: Vec<u32>,
    t_values: Vec<u64>,
    degrees: RangeInclusive<u32>,
    cap: u64,
    top_n: usize,
    injected: Vec<RamificationPlan>,
}

impl SearchSpace {
    /// Defaults: `ν ∈ {p}` for `p ≤ 3` (else `{2}`), `t = a_1`, degrees
    /// `5..=10`, at most 200 places per degree, top 10 reported.
    pub fn new(params: FieldParams, spectrum: PlaceSpectrum, genus: u64) -> Self {
        let nu = if params.p() <= 3 { params.p().max(2) } else { 2 };
        let a1 = spectrum.places_of_degree(1);
        SearchSpace {
            params,
            spectrum,
            genus,
            allowed_nu: vec![nu],
            t_values: vec![a1],
            degrees: 5..=10,
            cap: 200,
            top_n: 10,
            injected: Vec::new(),
        }
    }

    pub fn with_nu(mut self, nu: Vec<u32>) -> Self {
        self.allowed_nu = nu;
        self
    }

    pub fn with_t_values(mut self, t: Vec<u64>) -> Self {
        self.t_values = t;
        self
    }

    pub fn with_degrees(mut self, degrees: RangeInclusive<u32>) -> Self {
        self.degrees = degrees;
        self
    }

    pub fn with_cap(mut self, cap: u64) -> Self {
        self.cap = cap;
        self
    }

    pub fn with_top_n(mut self, n: usize) -> Self {
        self.top_n = n;
        self
    }

    /// Adds a plan that is always evaluated, whether or not the enumeration
    /// reaches it.
    pub fn inject(mut self, plan: RamificationPlan) -> Self {
        self.injected.push(plan);
        self
    }

    pub fn spectrum(&self) -> &PlaceSpectrum {
        &self.spectrum
    }

    pub fn genus(&self) -> u64 {
        self.genus
    }

    pub fn params(&self) -> FieldParams {
        self.params
    }

    pub fn t_values(&self) -> &[u64] {
        &self.t_values
    }

    fn layout(&self) -> Result<Layout, SearchError> {
        let nus: BTreeSet<u32> = self.allowed_nu.iter().copied().collect();
        if nus.is_empty() || nus.iter().any(|&nu| nu < 2) {
            return Err(SearchError::InvalidSpace("conductor exponents must be at least 2".into()));
        }
        let ts: BTreeSet<u64> = self.t_values.iter().copied().collect();
        if ts.is_empty() || ts.contains(&0) {
            return Err(SearchError::InvalidSpace("split counts must be positive".into()));
        }
        let mut dims = Vec::new();
        let mut radix = Vec::new();
        let max_degree = self.spectrum.max_degree() as u32;
        for d in self.degrees.clone().filter(|&d| d >= 1 && d <= max_degree) {
            let avail = self.spectrum.places_of_degree(d as usize).min(self.cap);
            if avail == 0 {
                continue;
            }
            for &nu in &nus {
                dims.push((d, nu));
                radix.push(avail + 1);
            }
        }
        let enumerated = radix.iter().try_fold(1u128, |acc, &r| acc.checked_mul(r as u128));
        let total = enumerated
            .and_then(|e| e.checked_mul(ts.len() as u128))
            .ok_or(SearchError::TooLarge(u128::MAX))?;
        if total > MAX_CANDIDATES as u128 {
            return Err(SearchError::TooLarge(total));
        }
        let mut all_dims: BTreeSet<(u32, u32)> = dims.iter().copied().collect();
        for plan in &self.injected {
            all_dims.extend(plan.entries().iter().map(|e| (e.degree, e.nu)));
        }
        Ok(Layout {
            enumerated_dims: dims,
            radix,
            t_values: ts.into_iter().collect(),
            all_dims: all_dims.into_iter().collect(),
            total: total as u64,
        })
    }

    /// Number of candidates the enumeration visits (injected plans excluded).
    pub fn candidate_count(&self) -> Result<u64, SearchError> {
        Ok(self.layout()?.total)
    }
}

struct Layout {
    enumerated_dims: Vec<(u32, u32)>,
    radix: Vec<u64>,
    t_values: Vec<u64>,
    all_dims: Vec<(u32, u32)>,
    total: u64,
}

impl Layout {
    fn decode(&self, mut index: u64) -> (Vec<u64>, u64) {
        let mut counts = vec![0; self.radix.len()];
        for (slot, &r) in counts.iter_mut().zip(&self.radix).rev() {
            *slot = index % r;
            index /= r;
        }
        (counts, self.t_values[index as usize])
    }

    fn key_of(&self, entries: &[PlanEntry]) -> Vec<u64> {
        let mut key = vec![0; self.all_dims.len()];
        for e in entries {
            let i = self.all_dims.binary_search(&(e.degree, e.nu)).expect("dimension present");
            key[i] += e.count;
        }
        key
    }
}

/// A certified plan with its certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankedPlan {
    pub plan: RamificationPlan,
    /// Multiplicities over every `(degree, ν)` of the space, sorted.
    pub multiplicities: Vec<u64>,
    pub certificate: TowerCertificate,
    pub injected: bool,
}

impl RankedPlan {
    pub fn bound_refined(&self) -> &BigRational {
        self.certificate.bound_refined.as_ref().expect("ranked plans are certified")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    /// The `(degree, ν)` labels of [`RankedPlan::multiplicities`].
    pub dimensions: Vec<(u32, u32)>,
    /// Enumerated candidates, each evaluated once.
    pub evaluated: u64,
    /// Candidates skipped because their places do not exist in the base.
    pub infeasible: u64,
    /// Certified plans found, injected ones included.
    pub certified: u64,
    pub ranked: Vec<RankedPlan>,
}

impl SearchOutcome {
    pub fn best(&self) -> &RankedPlan {
        &self.ranked[0]
    }
}

fn rank_order(a: &RankedPlan, b: &RankedPlan) -> Ordering {
    b.bound_refined()
        .cmp(a.bound_refined())
        .then_with(|| a.multiplicities.cmp(&b.multiplicities))
        .then_with(|| a.plan.t().cmp(&b.plan.t()))
}

enum Verdict {
    Infeasible,
    Rejected,
    Certified(RankedPlan),
}

fn evaluate(space: &SearchSpace, layout: &Layout, plan: RamificationPlan, injected: bool) -> Result<Verdict, CftError> {
    if plan.validate_against(&space.spectrum).is_err() {
        return Ok(Verdict::Infeasible);
    }
    if !plan.side_condition_holds() || gs_margin(&plan) < 0 {
        return Ok(Verdict::Rejected);
    }
    let certificate = certify_tower(space.genus, &plan)?;
    if !certificate.infinite {
        return Ok(Verdict::Rejected);
    }
    let multiplicities = layout.key_of(plan.entries());
    Ok(Verdict::Certified(RankedPlan { plan, multiplicities, certificate, injected }))
}

/// Evaluates every candidate of the space plus the injected plans and
/// returns the best `top_n` certified ones, ordered by refined bound
/// (descending), then multiplicity vector, then `t`.
pub fn optimize(space: &SearchSpace) -> Result<SearchOutcome, SearchError> {
    let layout = space.layout()?;
    let chunks: Vec<Result<(u64, Vec<RankedPlan>), CftError>> = (0..layout.total)
        .into_par_iter()
        .map(|index| {
            let (counts, t) = layout.decode(index);
            let entries: Vec<PlanEntry> = layout
                .enumerated_dims
                .iter()
                .zip(&counts)
                .filter(|(_, &c)| c > 0)
                .map(|(&(degree, nu), &count)| PlanEntry { degree, count, nu })
                .collect();
            let plan = RamificationPlan::new(space.params, entries, t)?;
            Ok(match evaluate(space, &layout, plan, false)? {
                Verdict::Infeasible => (1, Vec::new()),
                Verdict::Rejected => (0, Vec::new()),
                Verdict::Certified(r) => (0, vec![r]),
            })
        })
        .collect();
    let mut infeasible = 0;
    let mut found = Vec::new();
    for chunk in chunks {
        let (inf, mut rs) = chunk?;
        infeasible += inf;
        found.append(&mut rs);
    }
    for plan in &space.injected {
        if plan.params() != space.params {
            return Err(SearchError::InvalidSpace(format!("injected plan over {} in a space over {}", plan.params(), space.params)));
        }
        if let Verdict::Certified(r) = evaluate(space, &layout, plan.clone(), true)? {
            let duplicate = found.iter_mut().find(|f| f.multiplicities == r.multiplicities && f.plan.t() == r.plan.t());
            match duplicate {
                Some(existing) => existing.injected = true,
                None => found.push(r),
            }
        }
    }
    if found.is_empty() {
        return Err(SearchError::EmptySpace { evaluated: layout.total });
    }
    let certified = found.len() as u64;
    found.sort_by(rank_order);
    found.truncate(space.top_n.max(1));
    Ok(SearchOutcome { dimensions: layout.all_dims, evaluated: layout.total, infeasible, certified, ranked: found })
}

/// Parameters of a tower `L/K/k` with `K/k` elementary abelian of rank `l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MethodComparisonInput {
    /// Rational places of `k` totally ramified in `K`.
    pub s: u64,
    /// Rank of `Gal(K/k)`.
    pub l: u64,
    /// Completely split rational places of `k`.
    pub t: u64,
    /// Ramified places whose unique place above is put into `T_k`.
    pub s_prime: u64,
    /// `|T|`, the split places of `K`.
    pub t_size: u64,
    pub p: u32,
}

impl MethodComparisonInput {
    /// `|T_k| = t + s'`.
    pub fn t_k(&self) -> u64 {
        self.t + self.s_prime
    }
}

/// A lower bound on `d` and an upper bound on `r - d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InequalityPair {
    pub d_lower: i128,
    pub rd_upper: i128,
    pub infinite: bool,
}

impl InequalityPair {
    fn new(d_lower: i128, rd_upper: i128) -> Self {
        InequalityPair { d_lower, rd_upper, infinite: gs_margin_raw(d_lower, rd_upper) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MethodComparison {
    pub input: MethodComparisonInput,
    pub usual: InequalityPair,
    pub ours: InequalityPair,
}

pub fn compare_methods(input: MethodComparisonInput) -> MethodComparison {
    let s = input.s as i128;
    let l = input.l as i128;
    let tk = input.t_k() as i128;
    let usual = InequalityPair::new(s * l - (tk - 1) - l, input.t_size as i128 - 1);
    let ours = InequalityPair::new(s * l - (tk - 1), s * l * (l + 1) / 2 - input.s_prime as i128 * l + tk - 1);
    MethodComparison { input, usual, ours }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> FieldParams {
        FieldParams::new(2, 1).unwrap()
    }

    #[test]
    fn mixed_radix_round_trip() {
        let layout = Layout {
            enumerated_dims: vec![(5, 2), (8, 2)],
            radix: vec![2, 3],
            t_values: vec![7, 9],
            all_dims: vec![(5, 2), (8, 2)],
            total: 12,
        };
        let seen: BTreeSet<(Vec<u64>, u64)> = (0..12).map(|i| layout.decode(i)).collect();
        assert_eq!(seen.len(), 12);
        assert_eq!(layout.decode(0), (vec![0, 0], 7));
        assert_eq!(layout.decode(11), (vec![1, 2], 9));
    }

    #[test]
    fn no_usable_places_is_empty() {
        let spectrum = PlaceSpectrum::from_places(2, 1, vec![5, 0, 0]);
        let err = optimize(&SearchSpace::new(f2(), spectrum, 1)).unwrap_err();
        assert_eq!(err, SearchError::EmptySpace { evaluated: 1 });
    }

    #[test]
    fn small_space_is_exhaustive_and_ordered() {
        let spectrum = PlaceSpectrum::from_places(2, 2, vec![6, 0, 0, 0, 2, 16]);
        let space = SearchSpace::new(f2(), spectrum, 2).with_top_n(usize::MAX);
        assert_eq!(space.candidate_count().unwrap(), 3 * 17);
        let out = optimize(&space).unwrap();
        assert_eq!(out.evaluated, 51);
        let bounds: Vec<_> = out.ranked.iter().map(|r| r.bound_refined().clone()).collect();
        assert!(bounds.windows(2).all(|w| w[0] >= w[1]));
        for r in &out.ranked {
            assert!(r.certificate.infinite && r.certificate.gs_margin >= 0);
        }
    }

    #[test]
    fn injection_is_marked() {
        let spectrum = PlaceSpectrum::from_places(2, 2, vec![6, 0, 0, 0, 2, 16]);
        let plan = RamificationPlan::new(f2(), vec![PlanEntry { degree: 6, count: 16, nu: 2 }], 6).unwrap();
        let out = optimize(&SearchSpace::new(f2(), spectrum, 2).with_top_n(10_000).inject(plan.clone())).unwrap();
        assert_eq!(out.ranked.iter().filter(|r| r.injected).count(), 1);
        assert!(out.ranked.iter().any(|r| r.injected && r.plan.entries() == plan.entries()));
    }

    #[test]
    fn comparison_formulas() {
        let c = compare_methods(MethodComparisonInput { s: 3, l: 2, t: 1, s_prime: 0, t_size: 4, p: 2 });
        assert_eq!((c.usual.d_lower, c.usual.rd_upper), (6 - 0 - 2, 3));
        assert_eq!((c.ours.d_lower, c.ours.rd_upper), (6, 9));
        assert!(c.ours.infinite == gs_margin_raw(6, 9));
    }
}
