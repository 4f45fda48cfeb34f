//! Class-field-theoretic bounds for `(T, p)` class field towers.
//!
//! A [`RamificationPlan`] fixes the conductor `m = Σ ν_P·P` over a set `S` of
//! places of a base field `k` and the number `t` of completely split rational
//! places. From it we derive a lower bound `d` for the generator rank and an
//! upper bound for `r - d` of the Galois group of the tower, decide the
//! Golod–Shafarevich contradiction exactly, and produce exact rational lower
//! bounds for `A(q)`.
//!
//! The correction terms coming from unit and class group ranks of the base
//! field are not computable from the plan and are dropped. On the generator
//! side they are nonnegative, on the relation side they would only be
//! subtracted, so both bounds remain valid.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::curve::PlaceSpectrum;
use crate::ff::FieldParams;

const MAX_ENTRIES: usize = 10_000;
const MAX_DEGREE: u32 = 10_000;
const MAX_NU: u32 = 1_000;
const MAX_COUNT: u64 = 1_000_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CftError {
    #[error("invalid ramification plan: {0}")]
    InvalidPlan(String),
    #[error("plan does not fit the available places: {0}")]
    Infeasible(String),
    #[error("side condition violated: t = {t} exceeds Σ e·f·(ν-1-⌊(ν-1)/p⌋) = {cap}")]
    SideConditionViolated { t: u64, cap: u64 },
    #[error("invalid character conductor profile: {0}")]
    InvalidProfile(String),
    #[error("conductor degree sum {sum} has the wrong parity for [K:F] = {order}, base genus {base_genus}")]
    ParityViolation { sum: u64, order: u64, base_genus: u64 },
    #[error("tower not certified infinite: Golod–Shafarevich margin {margin} (d ≥ {d_lower}, r - d ≤ {rd_upper}){reason}")]
    NotCertified { margin: i128, d_lower: i128, rd_upper: i128, reason: String },
    #[error("degenerate genus {0}: the bound needs a positive denominator")]
    DegenerateGenus(u64),
}

/// `count` places of degree `degree`, each with conductor exponent `nu`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlanEntry {
    pub degree: u32,
    pub count: u64,
    pub nu: u32,
}

impl fmt::Display for PlanEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x(f={},nu={})", self.count, self.degree, self.nu)
    }
}

/// The ramification set `S` with exponents, and the split count `t = |T|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RamificationPlan {
    params: FieldParams,
    entries: Vec<PlanEntry>,
    t: u64,
}

impl RamificationPlan {
    pub fn new(params: FieldParams, entries: Vec<PlanEntry>, t: u64) -> Result<Self, CftError> {
        if entries.len() > MAX_ENTRIES {
            return Err(CftError::InvalidPlan(format!("more than {MAX_ENTRIES} entries")));
        }
        for e in &entries {
            if e.degree == 0 || e.degree > MAX_DEGREE {
                return Err(CftError::InvalidPlan(format!("place degree {} out of range 1..={MAX_DEGREE}", e.degree)));
            }
            if e.nu < 2 {
                return Err(CftError::InvalidPlan(format!(
                    "conductor exponent {} at degree {} contributes no rank; exponents must be at least 2",
                    e.nu, e.degree
                )));
            }
            if e.nu > MAX_NU {
                return Err(CftError::InvalidPlan(format!("conductor exponent {} exceeds {MAX_NU}", e.nu)));
            }
            if e.count == 0 || e.count > MAX_COUNT {
                return Err(CftError::InvalidPlan(format!("multiplicity {} out of range 1..={MAX_COUNT}", e.count)));
            }
        }
        if t == 0 || t > MAX_COUNT {
            return Err(CftError::InvalidPlan(format!("split count t = {t} out of range 1..={MAX_COUNT}")));
        }
        Ok(RamificationPlan { params, entries, t })
    }

    pub fn params(&self) -> FieldParams {
        self.params
    }

    pub fn entries(&self) -> &[PlanEntry] {
        &self.entries
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn with_t(&self, t: u64) -> Result<Self, CftError> {
        RamificationPlan::new(self.params, self.entries.clone(), t)
    }

    /// Adds `count` places of `degree` with exponent `nu`.
    pub fn with_entry(&self, entry: PlanEntry) -> Result<Self, CftError> {
        let mut entries = self.entries.clone();
        entries.push(entry);
        RamificationPlan::new(self.params, entries, self.t)
    }

    /// `Σ e·f·(ν-1-⌊(ν-1)/p⌋)` over `S`, the cap on `t`.
    pub fn unit_rank_sum(&self) -> u64 {
        self.entries.iter().map(|e| e.count * local_unit_rank(self.params, e.degree, e.nu)).sum()
    }

    /// `t ≤ Σ e·f·(ν-1-⌊(ν-1)/p⌋)`.
    pub fn side_condition_holds(&self) -> bool {
        self.t <= self.unit_rank_sum()
    }

    /// `deg m = Σ f·ν`.
    pub fn conductor_degree(&self) -> u64 {
        self.entries.iter().map(|e| e.count * e.degree as u64 * e.nu as u64).sum()
    }

    /// Checks the plan against the places actually available in `spectrum`:
    /// enough places of each degree, `t ≤ a_1`, and `S ∩ T = ∅`.
    pub fn validate_against(&self, spectrum: &PlaceSpectrum) -> Result<(), CftError> {
        let mut by_degree = std::collections::BTreeMap::<u32, u64>::new();
        for e in &self.entries {
            *by_degree.entry(e.degree).or_default() += e.count;
        }
        for (&d, &c) in &by_degree {
            if d as usize > spectrum.max_degree() {
                return Err(CftError::Infeasible(format!("degree {d} lies beyond the computed spectrum")));
            }
            let a = spectrum.places_of_degree(d as usize);
            if c > a {
                return Err(CftError::Infeasible(format!("{c} places of degree {d} requested, {a} exist")));
            }
        }
        let a1 = spectrum.places_of_degree(1);
        let s1 = by_degree.get(&1).copied().unwrap_or(0);
        if self.t + s1 > a1 {
            return Err(CftError::Infeasible(format!("t = {} plus {s1} ramified rational places exceeds a_1 = {a1}", self.t)));
        }
        Ok(())
    }

    /// Whether the printed damping exponent `f` differs from the local unit
    /// rank for some entry (it agrees exactly when `ν-1-⌊(ν-1)/p⌋ = 1`).
    pub fn refinement_exponent_differs(&self) -> bool {
        let p = self.params.p();
        self.entries.iter().any(|e| e.nu - 1 - (e.nu - 1) / p != 1)
    }
}

impl fmt::Display for RamificationPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(ToString::to_string).collect();
        write!(f, "S = {{{}}}, t = {}", parts.join(", "), self.t)
    }
}

/// Conductor degrees of the nontrivial characters of an abelian `K/F`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterConductorProfile {
    group_order: u64,
    degrees: Vec<(u64, u64)>,
}

impl CharacterConductorProfile {
    /// `degrees` lists `(conductor degree, number of characters)`; the
    /// multiplicities must add up to `group_order - 1`.
    pub fn new(group_order: u64, degrees: Vec<(u64, u64)>) -> Result<Self, CftError> {
        if group_order == 0 {
            return Err(CftError::InvalidProfile("group order must be positive".into()));
        }
        let total: u64 = degrees.iter().map(|&(_, m)| m).sum();
        if total != group_order - 1 {
            return Err(CftError::InvalidProfile(format!(
                "{total} nontrivial characters listed, group of order {group_order} has {}",
                group_order - 1
            )));
        }
        Ok(CharacterConductorProfile { group_order, degrees })
    }

    pub fn group_order(&self) -> u64 {
        self.group_order
    }

    pub fn degrees(&self) -> &[(u64, u64)] {
        &self.degrees
    }

    /// `Σ_χ deg f_χ`.
    pub fn conductor_sum(&self) -> u64 {
        self.degrees.iter().map(|&(d, m)| d * m).sum()
    }
}

/// `e·f·(ν-1-⌊(ν-1)/p⌋)`: the `p`-rank contributed by `U^(1)/U^(ν)` at a
/// place of degree `f`.
pub fn local_unit_rank(params: FieldParams, f: u32, nu: u32) -> u64 {
    if nu == 0 {
        return 0;
    }
    let k = (nu - 1) as u64;
    params.e() as u64 * f as u64 * (k - k / params.p() as u64)
}

/// `C(e·f·(ν-1) + 1, 2)`, the bound on `r_p(G_P) - d_p(G_P)` for
/// ramification of depth at most `ν`.
pub fn local_rd_bound(params: FieldParams, f: u32, nu: u32) -> u64 {
    let m = params.e() as u64 * f as u64 * nu.saturating_sub(1) as u64;
    m * (m + 1) / 2
}

/// `d ≥ 1 + Σ e·f·(ν-1-⌊(ν-1)/p⌋) - t`.
pub fn generator_rank_lower(plan: &RamificationPlan) -> i128 {
    1 + plan.unit_rank_sum() as i128 - plan.t as i128
}

/// `r - d ≤ Σ C(e·f·(ν-1) + 1, 2) + t - 1`.
pub fn relation_slack_upper(plan: &RamificationPlan) -> i128 {
    let local: u64 = plan.entries.iter().map(|e| e.count * local_rd_bound(plan.params, e.degree, e.nu)).sum();
    local as i128 + plan.t as i128 - 1
}

/// Left-hand side of the infinitude criterion,
/// `(1 + Σu - t)^2 - 2 Σ e f (ν-1)(e f (ν-1) + 1) - 4 Σu`,
/// with `u = e f (ν-1-⌊(ν-1)/p⌋)`. Evaluated without the side condition.
pub fn gs_margin(plan: &RamificationPlan) -> i128 {
    let e = plan.params.e() as i128;
    let u = plan.unit_rank_sum() as i128;
    let quad: i128 = plan
        .entries
        .iter()
        .map(|en| {
            let m = e * en.degree as i128 * (en.nu as i128 - 1);
            en.count as i128 * m * (m + 1)
        })
        .sum();
    let d = 1 + u - plan.t as i128;
    d * d - 2 * quad - 4 * u
}

/// Result of [`check_gs_inequality`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GsCheck {
    pub gs_margin: i128,
    pub infinite: bool,
    pub d_lower: i128,
    pub rd_upper: i128,
}

/// Golod–Shafarevich: a finite `p`-group with `d ≥ 1` generators has
/// `r - d > d²/4 - d`. Returns `true` when `rd ≤ d²/4 - d`, i.e. when the
/// bounds contradict finiteness. A group with fewer than two generators
/// never yields a contradiction.
pub fn gs_margin_raw(d: i128, rd: i128) -> bool {
    d >= 2 && 4 * rd <= d * d - 4 * d
}

/// Evaluates the infinitude criterion for a plan satisfying the side
/// condition. `infinite` holds iff the margin is nonnegative (which forces
/// `d ≥ 4`); it agrees with `gs_margin_raw(d_lower, rd_upper)` because the
/// margin equals `4·(d²/4 - d - (r-d))`.
pub fn check_gs_inequality(plan: &RamificationPlan) -> Result<GsCheck, CftError> {
    if !plan.side_condition_holds() {
        return Err(CftError::SideConditionViolated { t: plan.t, cap: plan.unit_rank_sum() });
    }
    Ok(evaluate(plan))
}

fn evaluate(plan: &RamificationPlan) -> GsCheck {
    let d_lower = generator_rank_lower(plan);
    let rd_upper = relation_slack_upper(plan);
    let margin = gs_margin(plan);
    debug_assert_eq!(margin, d_lower * d_lower - 4 * d_lower - 4 * rd_upper);
    let infinite = margin >= 0 && d_lower >= 2 && plan.side_condition_holds();
    debug_assert_eq!(infinite, plan.side_condition_holds() && gs_margin_raw(d_lower, rd_upper));
    GsCheck { gs_margin: margin, infinite, d_lower, rd_upper }
}

/// `2g(K) - 2 = [K:F](2g(F) - 2) + Σ_χ deg f_χ`.
pub fn genus_from_conductors(base_genus: u64, profile: &CharacterConductorProfile) -> Result<u64, CftError> {
    let order = profile.group_order as i128;
    let sum = profile.conductor_sum();
    let two_g_minus_two = order * (2 * base_genus as i128 - 2) + sum as i128;
    if two_g_minus_two % 2 != 0 {
        return Err(CftError::ParityViolation { sum, order: profile.group_order, base_genus });
    }
    let g = two_g_minus_two / 2 + 1;
    if g < 0 {
        return Err(CftError::InvalidProfile(format!("negative genus {g}")));
    }
    Ok(g as u64)
}

fn rational(n: i128) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn require_certified(plan: &RamificationPlan) -> Result<(), CftError> {
    let c = evaluate(plan);
    if c.infinite {
        return Ok(());
    }
    let reason = if !plan.side_condition_holds() {
        format!("; side condition t ≤ {} fails", plan.unit_rank_sum())
    } else {
        String::new()
    };
    Err(CftError::NotCertified { margin: c.gs_margin, d_lower: c.d_lower, rd_upper: c.rd_upper, reason })
}

fn ratio(t: u64, denominator: BigRational, genus: u64) -> Result<BigRational, CftError> {
    if denominator <= BigRational::zero() {
        return Err(CftError::DegenerateGenus(genus));
    }
    Ok(rational(t as i128) / denominator)
}

/// `t / (g - 1 + ½ Σ f·ν)`: every character conductor bounded by `m`.
pub fn bound_plain(genus: u64, plan: &RamificationPlan) -> Result<BigRational, CftError> {
    require_certified(plan)?;
    ratio(plan.t, plain_denominator(genus, plan), genus)
}

/// `g - 1 + ½ deg m`.
pub fn plain_denominator(genus: u64, plan: &RamificationPlan) -> BigRational {
    rational(genus as i128 - 1) + rational(plan.conductor_degree() as i128) / rational(2)
}

/// `g - 1 + ½ Σ f·ν·(1 - q^{-f})`.
pub fn refined_denominator(genus: u64, plan: &RamificationPlan) -> BigRational {
    let q = BigInt::from(plan.params.q());
    let mut sum = BigRational::zero();
    for e in &plan.entries {
        let qf = num_traits::pow(q.clone(), e.degree as usize);
        let damping = BigRational::one() - BigRational::new(BigInt::one(), qf);
        sum += rational(e.count as i128 * e.degree as i128 * e.nu as i128) * damping;
    }
    rational(genus as i128 - 1) + sum / rational(2)
}

/// `t / (g - 1 + ½ Σ f·ν·(1 - q^{-f}))`: a place of degree `f` in `S` is
/// taken to contribute to at most a fraction `1 - q^{-f}` of the characters.
pub fn bound_refined(genus: u64, plan: &RamificationPlan) -> Result<BigRational, CftError> {
    require_certified(plan)?;
    ratio(plan.t, refined_denominator(genus, plan), genus)
}

/// `|T| / (g - 1)`.
pub fn asymptotic_ratio(t_split: u64, genus: u64) -> Result<BigRational, CftError> {
    if genus < 2 {
        return Err(CftError::DegenerateGenus(genus));
    }
    Ok(BigRational::new(BigInt::from(t_split), BigInt::from(genus - 1)))
}

/// Everything the criterion says about one plan over a base of genus `genus`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerCertificate {
    pub genus: u64,
    pub d_lower: i128,
    pub rd_upper: i128,
    pub gs_margin: i128,
    pub side_condition: bool,
    pub side_condition_cap: u64,
    pub infinite: bool,
    pub bound: Option<BigRational>,
    pub bound_refined: Option<BigRational>,
    pub refinement_exponent_differs: bool,
}

/// Evaluates the plan; bounds are present exactly when the tower is
/// certified infinite. Fails only on a degenerate denominator.
pub fn certify_tower(genus: u64, plan: &RamificationPlan) -> Result<TowerCertificate, CftError> {
    let c = evaluate(plan);
    let (bound, bound_refined) = if c.infinite {
        (Some(bound_plain(genus, plan)?), Some(bound_refined(genus, plan)?))
    } else {
        (None, None)
    };
    Ok(TowerCertificate {
        genus,
        d_lower: c.d_lower,
        rd_upper: c.rd_upper,
        gs_margin: c.gs_margin,
        side_condition: plan.side_condition_holds(),
        side_condition_cap: plan.unit_rank_sum(),
        infinite: c.infinite,
        bound,
        bound_refined,
        refinement_exponent_differs: plan.refinement_exponent_differs(),
    })
}
