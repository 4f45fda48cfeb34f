//! Configuration documents: a TOML description of one constant field with
//! its curves, covers, conductor profiles, plans, an optional search space
//! and inequality comparisons. Unknown keys are rejected.
//!
//! ```toml
//! [field]
//! p = 2
//!
//! [[curves]]
//! name = "E"
//! equation = "y^2 + y = x^3 + x"
//! genus = 1
//! infinity = [[1, 1]]
//! ```

use std::collections::{BTreeMap, BTreeSet};

use serde::Deserialize;
use thiserror::Error;

use crate::cft::{genus_from_conductors, CharacterConductorProfile, PlanEntry, RamificationPlan};
use crate::cover::{AsComponent, CoverSpec, PlaceSelector, SupportEntry};
use crate::curve::{CurveModel, InfiniteGroup};
use crate::expr::MPoly;
use crate::ff::{ExtField, FieldParams};
use crate::search::{MethodComparisonInput, SearchSpace};

pub const BUILTIN: [(&str, &str); 4] = [
    ("f2_tower1", include_str!("../configs/f2_tower1.toml")),
    ("f2_tower2", include_str!("../configs/f2_tower2.toml")),
    ("f3_tower", include_str!("../configs/f3_tower.toml")),
    ("remark_comparisons", include_str!("../configs/remark_comparisons.toml")),
];

pub fn builtin(name: &str) -> Option<&'static str> {
    BUILTIN.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("cannot parse configuration: {0}")]
    Syntax(String),
    #[error("unknown {kind} `{name}`")]
    Unresolved { kind: &'static str, name: String },
    #[error("name `{0}` is defined twice")]
    Duplicate(String),
    #[error("{context}: {message}")]
    Invalid { context: String, message: String },
}

fn invalid(context: impl Into<String>, message: impl ToString) -> ConfigError {
    ConfigError::Invalid { context: context.into(), message: message.to_string() }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDocument {
    pub field: FieldSection,
    #[serde(default)]
    pub curves: Vec<CurveSection>,
    #[serde(default)]
    pub covers: Vec<CoverSection>,
    #[serde(default)]
    pub profiles: Vec<ProfileSection>,
    #[serde(default)]
    pub plans: Vec<PlanSection>,
    pub search: Option<SearchSection>,
    #[serde(default)]
    pub comparisons: Vec<ComparisonSection>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSection {
    pub p: u32,
    #[serde(default = "one")]
    pub e: u32,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveSection {
    pub name: String,
    pub equation: String,
    pub genus: u64,
    /// `[degree, count]` per group of places at infinity.
    pub infinity: Vec<(u32, u64)>,
    pub expect_places: Option<Vec<u64>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverSection {
    pub name: String,
    pub base: String,
    pub a: String,
    /// May contain `h`, replaced by each entry of `h_basis` in turn.
    pub b: String,
    pub h_basis: Vec<String>,
    #[serde(default)]
    pub support: Vec<SupportSection>,
    /// For each infinite group of the base, `[degree, count]` of the places
    /// above one of its places.
    pub infinity: Vec<Vec<(u32, u64)>>,
    pub profile: String,
    pub expect_places: Option<Vec<u64>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SupportSection {
    pub zeros_of_degree: Option<u32>,
    /// `[degree, x, y]` with coordinates as element indices of `F_{q^degree}`.
    pub point: Option<(u32, u32, u32)>,
    pub above: Vec<(u32, u64)>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSection {
    pub name: String,
    pub base: String,
    pub order: u64,
    /// `[conductor degree, number of characters]`.
    pub conductors: Vec<(u64, u64)>,
    pub expect_genus: Option<u64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanSection {
    pub name: String,
    pub t: u64,
    /// `[degree, count, nu]`.
    pub entries: Vec<(u32, u64, u32)>,
    pub genus: Option<u64>,
    pub profile: Option<String>,
    /// Curve or cover whose places the plan draws on.
    pub over: Option<String>,
    pub expect_margin: Option<i64>,
    pub expect_infinite: Option<bool>,
    pub expect_bound: Option<String>,
    pub expect_bound_refined: Option<String>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchSection {
    pub over: String,
    pub genus: Option<u64>,
    pub profile: Option<String>,
    #[serde(default = "ten")]
    pub dmax: u32,
    pub nu: Option<Vec<u32>>,
    pub t: Option<Vec<u64>>,
    pub degrees: Option<(u32, u32)>,
    pub cap: Option<u64>,
    pub top: Option<usize>,
    #[serde(default)]
    pub inject: Vec<String>,
    pub expect_top_at_least: Option<String>,
}

fn ten() -> u32 {
    10
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComparisonSection {
    pub name: String,
    pub s: u64,
    pub l: u64,
    pub t: u64,
    pub s_prime: u64,
    pub t_size: u64,
    pub p: u32,
    pub expect_usual: Option<(i64, i64)>,
    pub expect_ours: Option<(i64, i64)>,
}

impl ConfigDocument {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        toml::from_str(text).map_err(|e| ConfigError::Syntax(e.to_string()))
    }
}

/// A plan with the genus it is evaluated against.
#[derive(Debug, Clone)]
pub struct ResolvedPlan {
    pub plan: RamificationPlan,
    pub genus: u64,
    pub over: Option<String>,
}

/// A resolved search section; `dmax` is the spectrum depth to compute.
#[derive(Debug, Clone)]
pub struct ResolvedSearch {
    pub over: String,
    pub genus: u64,
    pub dmax: u32,
    pub injected: Vec<String>,
}

/// A configuration with every name resolved to a model.
#[derive(Debug, Clone)]
pub struct Workspace {
    pub document: ConfigDocument,
    pub params: FieldParams,
    pub curves: BTreeMap<String, CurveModel>,
    pub covers: BTreeMap<String, CoverSpec>,
    pub profiles: BTreeMap<String, (CharacterConductorProfile, u64)>,
    pub plans: BTreeMap<String, ResolvedPlan>,
    pub search: Option<ResolvedSearch>,
    pub comparisons: BTreeMap<String, MethodComparisonInput>,
}

fn unique<'a>(names: impl Iterator<Item = &'a str>, seen: &mut BTreeSet<String>) -> Result<(), ConfigError> {
    for n in names {
        if !seen.insert(n.to_string()) {
            return Err(ConfigError::Duplicate(n.to_string()));
        }
    }
    Ok(())
}

fn places_above(context: &str, list: &[(u32, u64)]) -> Result<Vec<(u32, u64)>, ConfigError> {
    if list.is_empty() {
        return Err(invalid(context, "empty list of places above"));
    }
    Ok(list.to_vec())
}

impl Workspace {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        Self::resolve(ConfigDocument::parse(text)?)
    }

    pub fn resolve(document: ConfigDocument) -> Result<Self, ConfigError> {
        let params = FieldParams::new(document.field.p, document.field.e).map_err(|e| invalid("[field]", e))?;
        let p = params.p();

        let mut spectral = BTreeSet::new();
        unique(document.curves.iter().map(|c| c.name.as_str()), &mut spectral)?;
        unique(document.covers.iter().map(|c| c.name.as_str()), &mut spectral)?;
        unique(document.profiles.iter().map(|c| c.name.as_str()), &mut BTreeSet::new())?;
        unique(document.plans.iter().map(|c| c.name.as_str()), &mut BTreeSet::new())?;
        unique(document.comparisons.iter().map(|c| c.name.as_str()), &mut BTreeSet::new())?;

        let mut curves = BTreeMap::new();
        for c in &document.curves {
            let ctx = format!("curve `{}`", c.name);
            let infinity = c.infinity.iter().map(|&(degree, count)| InfiniteGroup { degree, count }).collect();
            let model = CurveModel::parse(&c.name, params, &c.equation, infinity, c.genus).map_err(|e| invalid(&ctx, e))?;
            curves.insert(c.name.clone(), model);
        }

        let curve = |name: &str| -> Result<&CurveModel, ConfigError> {
            curves.get(name).ok_or_else(|| ConfigError::Unresolved { kind: "curve", name: name.into() })
        };

        let mut profiles = BTreeMap::new();
        for pr in &document.profiles {
            let ctx = format!("profile `{}`", pr.name);
            let base_genus = curve(&pr.base)?.genus();
            let profile = CharacterConductorProfile::new(pr.order, pr.conductors.clone()).map_err(|e| invalid(&ctx, e))?;
            genus_from_conductors(base_genus, &profile).map_err(|e| invalid(&ctx, e))?;
            profiles.insert(pr.name.clone(), (profile, base_genus));
        }
        let profile = |name: &str| {
            profiles.get(name).ok_or_else(|| ConfigError::Unresolved { kind: "profile", name: name.into() })
        };

        let mut covers = BTreeMap::new();
        for c in &document.covers {
            let ctx = format!("cover `{}`", c.name);
            let base = curve(&c.base)?.clone();
            let (prof, prof_base_genus) = profile(&c.profile)?;
            let prof_base = &document.profiles.iter().find(|x| x.name == c.profile).expect("resolved").base;
            if *prof_base != c.base {
                return Err(invalid(&ctx, format!("profile `{}` belongs to base `{prof_base}`", c.profile)));
            }
            debug_assert_eq!(*prof_base_genus, base.genus());
            let a_template = MPoly::parse(&c.a, p).map_err(|e| invalid(&ctx, e))?;
            let b_template = MPoly::parse(&c.b, p).map_err(|e| invalid(&ctx, e))?;
            let mut components = Vec::new();
            for h in &c.h_basis {
                let hv = MPoly::parse(h, p).map_err(|e| invalid(&ctx, e))?;
                let comp = AsComponent::new(h, a_template.substitute_h(&hv), b_template.substitute_h(&hv))
                    .map_err(|e| invalid(&ctx, e))?;
                components.push(comp);
            }
            let mut support = Vec::new();
            for s in &c.support {
                let selector = match (s.zeros_of_degree, s.point) {
                    (Some(d), None) => PlaceSelector::ZerosOfDegree(d),
                    (None, Some((degree, x, y))) => {
                        let f = ExtField::new(params, degree).map_err(|e| invalid(&ctx, e))?;
                        let elem = |i| f.element(i).ok_or_else(|| invalid(&ctx, format!("element index {i} outside F_{{q^{degree}}}")));
                        PlaceSelector::Point { degree, x: elem(x)?, y: elem(y)? }
                    }
                    _ => return Err(invalid(&ctx, "a support entry needs exactly one of `zeros_of_degree`, `point`")),
                };
                support.push(SupportEntry { selector, above: places_above(&ctx, &s.above)? });
            }
            let infinity = c.infinity.iter().map(|l| places_above(&ctx, l)).collect::<Result<Vec<_>, _>>()?;
            let spec = CoverSpec::new(&c.name, base, components, support, infinity, prof.clone()).map_err(|e| invalid(&ctx, e))?;
            covers.insert(c.name.clone(), spec);
        }

        let spectral_genus = |name: &str| -> Result<u64, ConfigError> {
            if let Some(c) = curves.get(name) {
                return Ok(c.genus());
            }
            let cover = covers.get(name).ok_or_else(|| ConfigError::Unresolved { kind: "curve or cover", name: name.into() })?;
            cover.genus().map_err(|e| invalid(format!("cover `{name}`"), e))
        };
        let genus_of = |ctx: &str, genus: Option<u64>, prof: &Option<String>, over: Option<&str>| -> Result<u64, ConfigError> {
            match (genus, prof, over) {
                (Some(g), _, _) => Ok(g),
                (None, Some(name), _) => {
                    let (pr, base_genus) = profile(name)?;
                    genus_from_conductors(*base_genus, pr).map_err(|e| invalid(ctx, e))
                }
                (None, None, Some(o)) => spectral_genus(o),
                (None, None, None) => Err(invalid(ctx, "needs one of `genus`, `profile`, `over`")),
            }
        };

        let mut plans = BTreeMap::new();
        for pl in &document.plans {
            let ctx = format!("plan `{}`", pl.name);
            if let Some(o) = &pl.over {
                spectral_genus(o)?;
            }
            let genus = genus_of(&ctx, pl.genus, &pl.profile, pl.over.as_deref())?;
            let entries = pl.entries.iter().map(|&(degree, count, nu)| PlanEntry { degree, count, nu }).collect();
            let plan = RamificationPlan::new(params, entries, pl.t).map_err(|e| invalid(&ctx, e))?;
            plans.insert(pl.name.clone(), ResolvedPlan { plan, genus, over: pl.over.clone() });
        }

        let search = match &document.search {
            None => None,
            Some(s) => {
                let genus = genus_of("[search]", s.genus, &s.profile, Some(&s.over))?;
                for name in &s.inject {
                    if !plans.contains_key(name) {
                        return Err(ConfigError::Unresolved { kind: "plan", name: name.clone() });
                    }
                }
                if s.dmax == 0 {
                    return Err(invalid("[search]", "dmax must be positive"));
                }
                Some(ResolvedSearch { over: s.over.clone(), genus, dmax: s.dmax, injected: s.inject.clone() })
            }
        };

        let comparisons = document
            .comparisons
            .iter()
            .map(|c| {
                let input = MethodComparisonInput { s: c.s, l: c.l, t: c.t, s_prime: c.s_prime, t_size: c.t_size, p: c.p };
                (c.name.clone(), input)
            })
            .collect();

        Ok(Workspace { document, params, curves, covers, profiles, plans, search, comparisons })
    }

    pub fn plan(&self, name: &str) -> Result<&ResolvedPlan, ConfigError> {
        self.plans.get(name).ok_or_else(|| ConfigError::Unresolved { kind: "plan", name: name.into() })
    }

    /// Builds the search space around a spectrum of `search.over`.
    pub fn search_space(&self, spectrum: crate::curve::PlaceSpectrum) -> Result<SearchSpace, ConfigError> {
        let s = self.document.search.as_ref().ok_or_else(|| invalid("[search]", "no search section"))?;
        let r = self.search.as_ref().expect("resolved with the document");
        let mut space = SearchSpace::new(self.params, spectrum, r.genus);
        if let Some(nu) = &s.nu {
            space = space.with_nu(nu.clone());
        }
        if let Some(t) = &s.t {
            space = space.with_t_values(t.clone());
        }
        if let Some((lo, hi)) = s.degrees {
            space = space.with_degrees(lo..=hi);
        }
        if let Some(cap) = s.cap {
            space = space.with_cap(cap);
        }
        if let Some(top) = s.top {
            space = space.with_top_n(top);
        }
        for name in &r.injected {
            space = space.inject(self.plan(name)?.plan.clone());
        }
        Ok(space)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_resolve() {
        for (name, text) in BUILTIN {
            Workspace::parse(text).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = Workspace::parse("[field]\np = 2\nq = 4\n").unwrap_err();
        assert!(matches!(err, ConfigError::Syntax(_)));
    }

    #[test]
    fn dangling_reference() {
        let text = "[field]\np = 2\n[[plans]]\nname = \"x\"\nt = 1\nentries = [[5, 1, 2]]\nover = \"nowhere\"\n";
        assert_eq!(
            Workspace::parse(text).unwrap_err(),
            ConfigError::Unresolved { kind: "curve or cover", name: "nowhere".into() }
        );
    }

    #[test]
    fn duplicate_names() {
        let text = "[field]\np = 2\n[[curves]]\nname = \"E\"\nequation = \"y\"\ngenus = 0\ninfinity = [[1, 1]]\n\
                    [[curves]]\nname = \"E\"\nequation = \"y\"\ngenus = 0\ninfinity = [[1, 1]]\n";
        assert_eq!(Workspace::parse(text).unwrap_err(), ConfigError::Duplicate("E".into()));
    }
}
