//! Reports: human-readable lines plus flat JSON records, one per line.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde_json::{Map, Value};

use crate::cft::{certify_tower, PlanEntry, RamificationPlan, TowerCertificate};
use crate::ff::FieldParams;

/// Decimal digits shown after the point.
pub const DECIMAL_DIGITS: usize = 12;

/// `r` truncated toward zero to `digits` places, e.g. `0.316999`.
pub fn truncated_decimal(r: &BigRational, digits: usize) -> String {
    let num = r.numer().abs();
    let den = r.denom().abs();
    let int = &num / &den;
    let mut rem = &num % &den;
    let mut s = String::new();
    if r.is_negative() {
        s.push('-');
    }
    write!(s, "{int}").unwrap();
    if digits > 0 {
        s.push('.');
        let ten = BigInt::from(10);
        for _ in 0..digits {
            rem *= &ten;
            write!(s, "{}", &rem / &den).unwrap();
            rem = &rem % &den;
        }
    }
    s
}

/// `p/q` in lowest terms (`p` alone when `q = 1`).
pub fn fraction(r: &BigRational) -> String {
    if r.denom() == &BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `p/q = 0.xxxxxxxxxxxx…`
pub fn render_rational(r: &BigRational) -> String {
    format!("{} = {}…", fraction(r), truncated_decimal(r, DECIMAL_DIGITS))
}

/// Parses `p/q`, an integer, or a finite decimal such as `0.316999`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n.trim().parse().ok()?, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let whole: BigInt = format!("{int}{frac}").parse().ok()?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        return Some(BigRational::new(whole, den));
    }
    s.parse::<BigInt>().ok().map(BigRational::from_integer)
}

/// Whether `r` matches an expectation: exact for `p/q` or integers,
/// truncated-decimal agreement for decimals.
pub fn matches_expectation(r: &BigRational, expected: &str) -> bool {
    let expected = expected.trim();
    match expected.split_once('.') {
        Some((_, frac)) if !expected.contains('/') => truncated_decimal(r, frac.len()) == expected,
        _ => parse_rational(expected).is_some_and(|e| &e == r),
    }
}

/// One flat record: `{"record": kind, key: scalar, …}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    fields: Map<String, Value>,
}

impl Record {
    pub fn new(kind: &str) -> Self {
        let mut fields = Map::new();
        fields.insert("record".into(), Value::from(kind));
        Record { fields }
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.fields.insert(key.into(), value.into());
        self
    }

    /// Integers outside the `i64` range are stored as decimal strings.
    pub fn with_int(self, key: &str, v: i128) -> Self {
        match i64::try_from(v) {
            Ok(small) => self.with(key, small),
            Err(_) => self.with(key, v.to_string()),
        }
    }

    pub fn with_rational(self, key: &str, r: &BigRational) -> Self {
        let decimal = truncated_decimal(r, DECIMAL_DIGITS);
        self.with(key, fraction(r)).with(&format!("{key}_decimal"), decimal)
    }

    pub fn kind(&self) -> &str {
        self.fields["record"].as_str().unwrap_or("")
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.get(key)
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(&self.fields).expect("flat record")
    }

    pub fn from_json_line(line: &str) -> Option<Self> {
        let fields: Map<String, Value> = serde_json::from_str(line).ok()?;
        fields.get("record")?.as_str()?;
        fields.values().all(|v| !v.is_array() && !v.is_object()).then_some(Record { fields })
    }
}

/// What a command produced.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub lines: Vec<String>,
    pub records: Vec<Record>,
    pub warnings: Vec<String>,
    /// Process exit status: 0, or 4 for an uncertified plan, 3 for a failed
    /// self-check.
    pub status: i32,
}

impl Report {
    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn record(&mut self, r: Record) {
        self.records.push(r);
    }

    pub fn warn(&mut self, s: impl Into<String>) {
        self.warnings.push(s.into());
    }

    pub fn merge(&mut self, other: Report) {
        self.lines.extend(other.lines);
        self.records.extend(other.records);
        self.warnings.extend(other.warnings);
        self.status = self.status.max(other.status);
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        for l in &self.lines {
            s.push_str(l);
            s.push('\n');
        }
        for w in &self.warnings {
            writeln!(s, "warning: {w}").unwrap();
        }
        s
    }

    pub fn render_json(&self) -> String {
        let mut s = String::new();
        for r in &self.records {
            s.push_str(&r.to_json_line());
            s.push('\n');
        }
        for w in &self.warnings {
            s.push_str(&Record::new("warning").with("message", w.as_str()).to_json_line());
            s.push('\n');
        }
        s
    }
}

/// `degree:count:nu` entries joined by commas.
pub fn encode_entries(entries: &[PlanEntry]) -> String {
    entries.iter().map(|e| format!("{}:{}:{}", e.degree, e.count, e.nu)).collect::<Vec<_>>().join(",")
}

pub fn decode_entries(s: &str) -> Option<Vec<PlanEntry>> {
    if s.is_empty() {
        return Some(Vec::new());
    }
    s.split(',')
        .map(|part| {
            let mut it = part.split(':').map(str::parse::<u64>);
            let (d, c, n) = (it.next()?.ok()?, it.next()?.ok()?, it.next()?.ok()?);
            if it.next().is_some() {
                return None;
            }
            Some(PlanEntry { degree: u32::try_from(d).ok()?, count: c, nu: u32::try_from(n).ok()? })
        })
        .collect()
}

/// The full certificate of `plan` as a record that [`certificate_from_record`]
/// can replay.
pub fn certificate_record(name: &str, genus: u64, plan: &RamificationPlan, cert: &TowerCertificate) -> Record {
    let params = plan.params();
    let mut r = Record::new("certificate")
        .with("plan", name)
        .with("p", params.p())
        .with("e", params.e())
        .with("genus", genus)
        .with("t", plan.t())
        .with("entries", encode_entries(plan.entries()))
        .with_int("d_lower", cert.d_lower)
        .with_int("rd_upper", cert.rd_upper)
        .with_int("gs_margin", cert.gs_margin)
        .with("side_condition", cert.side_condition)
        .with("side_condition_cap", cert.side_condition_cap)
        .with("infinite", cert.infinite)
        .with("refinement_exponent_differs", cert.refinement_exponent_differs);
    if let Some(b) = &cert.bound {
        r = r.with_rational("bound", b);
    }
    if let Some(b) = &cert.bound_refined {
        r = r.with_rational("bound_refined", b);
    }
    r
}

/// Rebuilds the plan from a certificate record and certifies it again.
pub fn certificate_from_record(r: &Record) -> Option<(u64, RamificationPlan, TowerCertificate)> {
    let int = |k: &str| r.get(k)?.as_u64();
    let params = FieldParams::new(u32::try_from(int("p")?).ok()?, u32::try_from(int("e")?).ok()?).ok()?;
    let entries = decode_entries(r.get("entries")?.as_str()?)?;
    let plan = RamificationPlan::new(params, entries, int("t")?).ok()?;
    let genus = int("genus")?;
    let cert = certify_tower(genus, &plan).ok()?;
    Some((genus, plan, cert))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn decimals_truncate() {
        assert_eq!(truncated_decimal(&q(2, 3), 4), "0.6666");
        assert_eq!(truncated_decimal(&q(-2, 3), 2), "-0.66");
        assert_eq!(truncated_decimal(&q(63, 128), 12), "0.492187500000");
        assert_eq!(truncated_decimal(&q(7, 1), 0), "7");
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("6/19"), Some(q(6, 19)));
        assert_eq!(parse_rational("0.25"), Some(q(1, 4)));
        assert_eq!(parse_rational("-1.5"), Some(q(-3, 2)));
        assert_eq!(parse_rational("3"), Some(q(3, 1)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("1."), None);
    }

    #[test]
    fn expectations() {
        assert!(matches_expectation(&q(6, 19), "6/19"));
        assert!(matches_expectation(&q(6, 19), "0.315789"));
        assert!(!matches_expectation(&q(6, 19), "0.315790"));
    }

    #[test]
    fn records_are_flat() {
        let r = Record::new("x").with("a", 1).with_rational("b", &q(1, 3));
        let line = r.to_json_line();
        assert_eq!(Record::from_json_line(&line), Some(r));
        assert_eq!(Record::from_json_line(r#"{"record":"x","a":[1]}"#), None);
    }

    #[test]
    fn entries_round_trip() {
        let e = vec![PlanEntry { degree: 5, count: 1, nu: 2 }, PlanEntry { degree: 8, count: 27, nu: 3 }];
        assert_eq!(decode_entries(&encode_entries(&e)), Some(e));
        assert_eq!(decode_entries("5:1"), None);
    }
}
