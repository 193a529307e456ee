use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::PersistenceError;
use crate::field::{as_string, Extended, Rational};

/// Half-open interval `(left, right]`, with `right` possibly `+∞`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Interval {
    #[serde(with = "as_string")]
    pub left: Rational,
    pub right: Extended,
}

impl Interval {
    pub fn new(left: Rational, right: Extended) -> Result<Self, PersistenceError> {
        if Extended::Finite(left.clone()) >= right {
            return Err(PersistenceError::EmptyInterval {
                left: left.to_string(),
                right: right.to_string(),
            });
        }
        Ok(Self { left, right })
    }

    pub fn finite(left: Rational, right: Rational) -> Result<Self, PersistenceError> {
        Self::new(left, Extended::Finite(right))
    }

    pub fn length(&self) -> Extended {
        self.right.sub_finite(&self.left)
    }

    /// `(left + c, right - c]`; the right end stays at `+∞` if infinite.
    pub fn shrink(&self, c: &Rational) -> Result<Self, PersistenceError> {
        if c.is_negative() {
            return Err(PersistenceError::NegativeShrink(c.to_string()));
        }
        let two_c = Extended::Finite(c * Rational::from_integer(2.into()));
        if self.length() <= two_c {
            return Err(PersistenceError::OverShrink {
                interval: self.to_string(),
                c: c.to_string(),
            });
        }
        Ok(Self {
            left: &self.left + c,
            right: self.right.sub_finite(c),
        })
    }

    /// Containment of half-open intervals: `(l, r] ⊆ self`.
    pub fn contains(&self, other: &Interval) -> bool {
        self.left <= other.left && other.right <= self.right
    }

    pub fn contains_point(&self, t: &Rational) -> bool {
        &self.left < t && Extended::Finite(t.clone()) <= self.right
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.right {
            Extended::Infinity => write!(f, "({}, inf)", self.left),
            Extended::Finite(r) => write!(f, "({}, {}]", self.left, r),
        }
    }
}

/// A bar is just a nonempty interval; the alias keeps signatures readable.
pub type Bar = Interval;

/// Shrinks an interval by `c` on both sides.
pub fn shrink(i: &Interval, c: &Rational) -> Result<Interval, PersistenceError> {
    i.shrink(c)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BarcodeEntry {
    #[serde(flatten)]
    pub bar: Bar,
    pub mult: u64,
    pub degree: Option<i64>,
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    birth: String,
    death: String,
    mult: u64,
    degree: Option<i64>,
}

/// Multiset of bars, each optionally tagged with a degree.
///
/// Entries are kept merged (one per distinct `(degree, bar)`) and sorted, so
/// equality is multiset equality.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Barcode {
    entries: Vec<BarcodeEntry>,
}

impl Barcode {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_entries(entries: impl IntoIterator<Item = BarcodeEntry>) -> Self {
        let mut merged: BTreeMap<(Option<i64>, Bar), u64> = BTreeMap::new();
        for e in entries {
            if e.mult > 0 {
                *merged.entry((e.degree, e.bar)).or_default() += e.mult;
            }
        }
        Self {
            entries: merged
                .into_iter()
                .map(|((degree, bar), mult)| BarcodeEntry { bar, mult, degree })
                .collect(),
        }
    }

    /// Ungraded barcode from `(bar, mult)` pairs.
    pub fn from_bars(bars: impl IntoIterator<Item = (Bar, u64)>) -> Self {
        Self::from_entries(bars.into_iter().map(|(bar, mult)| BarcodeEntry {
            bar,
            mult,
            degree: None,
        }))
    }

    pub fn entries(&self) -> &[BarcodeEntry] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total_multiplicity(&self) -> u64 {
        self.entries.iter().map(|e| e.mult).sum()
    }

    pub fn union(&self, other: &Barcode) -> Barcode {
        Self::from_entries(self.entries.iter().chain(&other.entries).cloned())
    }

    /// Same bars, every multiplicity multiplied by `k`.
    pub fn scale_multiplicity(&self, k: u64) -> Barcode {
        Self::from_entries(self.entries.iter().map(|e| BarcodeEntry {
            mult: e.mult * k,
            ..e.clone()
        }))
    }

    pub fn with_degree(&self, degree: Option<i64>) -> Barcode {
        Self::from_entries(self.entries.iter().map(|e| BarcodeEntry {
            degree,
            ..e.clone()
        }))
    }

    pub fn degrees(&self) -> Vec<Option<i64>> {
        let mut d: Vec<_> = self.entries.iter().map(|e| e.degree).collect();
        d.dedup();
        d
    }

    pub fn in_degree(&self, degree: Option<i64>) -> Barcode {
        Self {
            entries: self
                .entries
                .iter()
                .filter(|e| e.degree == degree)
                .cloned()
                .collect(),
        }
    }

    /// Number of bars, with multiplicity and across all degrees, that contain `i`.
    pub fn multiplicity(&self, i: &Interval) -> u64 {
        self.entries
            .iter()
            .filter(|e| e.bar.contains(i))
            .map(|e| e.mult)
            .sum()
    }

    pub fn infinite_count(&self) -> u64 {
        self.entries
            .iter()
            .filter(|e| !e.bar.right.is_finite())
            .map(|e| e.mult)
            .sum()
    }

    /// Maximal finite bar length; zero when there are no finite bars.
    pub fn longest_finite_bar(&self) -> Rational {
        self.entries
            .iter()
            .filter_map(|e| e.bar.length().finite().cloned())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Births of all bars and deaths of finite bars, sorted and deduplicated.
    pub fn endpoints(&self) -> Vec<Rational> {
        let mut pts: Vec<Rational> = self
            .entries
            .iter()
            .flat_map(|e| {
                std::iter::once(e.bar.left.clone()).chain(e.bar.right.finite().cloned())
            })
            .collect();
        pts.sort();
        pts.dedup();
        pts
    }

    /// Every bar repeated by its multiplicity.
    pub fn expanded(&self) -> Vec<(Bar, Option<i64>)> {
        self.entries
            .iter()
            .flat_map(|e| std::iter::repeat_n((e.bar.clone(), e.degree), e.mult as usize))
            .collect()
    }

    pub fn shift(&self, c: &Rational) -> Barcode {
        Self::from_entries(self.entries.iter().map(|e| BarcodeEntry {
            bar: Interval {
                left: &e.bar.left + c,
                right: e.bar.right.add_finite(c),
            },
            ..e.clone()
        }))
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<EntryJson> = self
            .entries
            .iter()
            .map(|e| EntryJson {
                birth: e.bar.left.to_string(),
                death: e.bar.right.to_string(),
                mult: e.mult,
                degree: e.degree,
            })
            .collect();
        serde_json::to_string_pretty(&rows).expect("plain data serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, PersistenceError> {
        let rows: Vec<EntryJson> =
            serde_json::from_str(s).map_err(|e| PersistenceError::Json(e.to_string()))?;
        let mut entries = Vec::with_capacity(rows.len());
        for r in rows {
            let left = Extended::parse(&r.birth)?;
            let Extended::Finite(left) = left else {
                return Err(PersistenceError::Json("birth cannot be inf".into()));
            };
            let right = Extended::parse(&r.death)?;
            if r.mult == 0 {
                return Err(PersistenceError::Json("multiplicity must be positive".into()));
            }
            entries.push(BarcodeEntry {
                bar: Interval::new(left, right)?,
                mult: r.mult,
                degree: r.degree,
            });
        }
        Ok(Self::from_entries(entries))
    }
}

impl fmt::Display for Barcode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|e| match e.degree {
                Some(d) => format!("{}x{} @{}", e.bar, e.mult, d),
                None => format!("{}x{}", e.bar, e.mult),
            })
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rational;

    pub(crate) fn iv(l: i64, r: i64) -> Interval {
        Interval::finite(rational(l, 1), rational(r, 1)).unwrap()
    }

    fn ray(l: i64) -> Interval {
        Interval::new(rational(l, 1), Extended::Infinity).unwrap()
    }

    #[test]
    fn multiplicity_examples() {
        let b = Barcode::from_bars([(iv(0, 10), 1), (iv(2, 8), 2)]);
        assert_eq!(b.multiplicity(&iv(3, 7)), 3);
        assert_eq!(b.multiplicity(&iv(-1, 11)), 0);
        let r = Barcode::from_bars([(ray(0), 1)]);
        assert_eq!(r.multiplicity(&iv(1, 1_000_000)), 1);
    }

    #[test]
    fn shrink_examples() {
        assert_eq!(iv(0, 10).shrink(&rational(2, 1)).unwrap(), iv(2, 8));
        assert_eq!(iv(0, 10).shrink(&rational(0, 1)).unwrap(), iv(0, 10));
        assert_eq!(ray(0).shrink(&rational(3, 1)).unwrap(), ray(3));
        assert!(iv(0, 4).shrink(&rational(2, 1)).is_err());
        assert!(iv(0, 4).shrink(&rational(-1, 1)).is_err());
    }

    #[test]
    fn longest_finite() {
        assert_eq!(Barcode::new().longest_finite_bar(), rational(0, 1));
        let b = Barcode::from_bars([(iv(0, 3), 1), (iv(1, 2), 5), (ray(0), 1)]);
        assert_eq!(b.longest_finite_bar(), rational(3, 1));
    }

    #[test]
    fn merging_and_json() {
        let b = Barcode::from_entries([
            BarcodeEntry { bar: iv(0, 2), mult: 1, degree: Some(1) },
            BarcodeEntry { bar: iv(0, 2), mult: 2, degree: Some(1) },
            BarcodeEntry { bar: ray(-3), mult: 1, degree: None },
        ]);
        assert_eq!(b.entries().len(), 2);
        assert_eq!(b.total_multiplicity(), 4);
        let json = b.to_json();
        assert!(json.contains("\"inf\""));
        assert_eq!(Barcode::from_json(&json).unwrap(), b);
        assert!(Barcode::from_json(r#"[{"birth":"2","death":"1","mult":1,"degree":null}]"#).is_err());
        assert!(Barcode::from_json(r#"[{"birth":"0.5","death":"1","mult":1,"degree":null}]"#).is_err());
    }
}
