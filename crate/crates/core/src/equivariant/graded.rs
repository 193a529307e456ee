use std::collections::BTreeMap;

use super::spread::mu_from_barcode;
use super::EquivariantError;
use crate::field::Extended;
use crate::persistence::Barcode;

/// Barcodes indexed by degree (for one fixed eigenvalue).
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GradedBarcodeFamily {
    pub by_degree: BTreeMap<i64, Barcode>,
}

impl GradedBarcodeFamily {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, degree: i64, b: Barcode) {
        if b.is_empty() {
            self.by_degree.remove(&degree);
        } else {
            self.by_degree.insert(degree, b);
        }
    }

    pub fn get(&self, degree: i64) -> Option<&Barcode> {
        self.by_degree.get(&degree)
    }

    /// `max_r μ(B_r)`.
    pub fn mu(&self, p: u32) -> Extended {
        self.by_degree
            .values()
            .map(|b| mu_from_barcode(b, p))
            .fold(Extended::zero(), Extended::max)
    }

    /// Flattens into one barcode with degree tags.
    pub fn to_barcode(&self) -> Barcode {
        self.by_degree
            .iter()
            .fold(Barcode::new(), |acc, (&r, b)| acc.union(&b.with_degree(Some(r))))
    }

    pub fn from_barcode(b: &Barcode) -> Self {
        let mut fam = Self::new();
        for d in b.degrees() {
            fam.insert(d.unwrap_or(0), b.in_degree(d).with_degree(None));
        }
        fam
    }
}

/// Product with a connected manifold of Betti numbers `betti`:
/// `F'(r) = ⊎_i betti[i] copies of F(r − i)`.
pub fn kunneth_stabilize(f: &GradedBarcodeFamily, betti: &[u64]) -> Result<GradedBarcodeFamily, EquivariantError> {
    if betti.first() != Some(&1) {
        return Err(EquivariantError::Invalid(
            "betti[0] must be 1 (connected factor)".into(),
        ));
    }
    let mut out: BTreeMap<i64, Barcode> = BTreeMap::new();
    for (&r, b) in &f.by_degree {
        for (i, &bi) in betti.iter().enumerate() {
            if bi == 0 {
                continue;
            }
            let slot = out.entry(r + i as i64).or_default();
            *slot = slot.union(&b.scale_multiplicity(bi));
        }
    }
    let mut fam = GradedBarcodeFamily::new();
    for (r, b) in out {
        fam.insert(r, b);
    }
    Ok(fam)
}
