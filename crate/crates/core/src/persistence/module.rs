use num_traits::One;

use super::barcode::{Barcode, BarcodeEntry, Interval};
use super::PersistenceError;
use crate::field::{Extended, Field, Matrix, Rational};

/// Persistence module that is constant between consecutive spectrum points.
///
/// With spectrum `s_1 < … < s_m`, `dims[i]` is the dimension of `V_i`, the
/// value on `(s_i, s_{i+1}]` (with `s_0 = -∞`, `s_{m+1} = +∞`).
/// `transitions[i]: V_i → V_{i+1}` is the structure map across `s_{i+1}`.
/// Values at spectrum points are left limits, so `V_t = V_{index(t)}` with
/// `index(t) = #{s_k < t}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FinitePersistenceModule<F: Field> {
    spectrum: Vec<Rational>,
    dims: Vec<usize>,
    transitions: Vec<Matrix<F>>,
    unit: F,
}

impl<F: Field> FinitePersistenceModule<F> {
    pub fn new(
        spectrum: Vec<Rational>,
        dims: Vec<usize>,
        transitions: Vec<Matrix<F>>,
        unit: &F,
    ) -> Result<Self, PersistenceError> {
        let m = spectrum.len();
        if spectrum.windows(2).any(|w| w[0] >= w[1]) {
            return Err(PersistenceError::Invalid(
                "spectrum must be strictly increasing".into(),
            ));
        }
        if dims.len() != m + 1 {
            return Err(PersistenceError::Invalid(format!(
                "expected {} dimensions, got {}",
                m + 1,
                dims.len()
            )));
        }
        if dims[0] != 0 {
            return Err(PersistenceError::Invalid(
                "module must vanish below the spectrum".into(),
            ));
        }
        if transitions.len() != m {
            return Err(PersistenceError::Invalid(format!(
                "expected {m} transitions, got {}",
                transitions.len()
            )));
        }
        for (i, t) in transitions.iter().enumerate() {
            if t.rows() != dims[i + 1] || t.cols() != dims[i] {
                return Err(PersistenceError::Invalid(format!(
                    "transition {i} is {}x{}, expected {}x{}",
                    t.rows(),
                    t.cols(),
                    dims[i + 1],
                    dims[i]
                )));
            }
        }
        Ok(Self {
            spectrum,
            dims,
            transitions,
            unit: unit.one_like(),
        })
    }

    pub fn zero(unit: &F) -> Self {
        Self {
            spectrum: Vec::new(),
            dims: vec![0],
            transitions: Vec::new(),
            unit: unit.one_like(),
        }
    }

    /// Direct sum of interval modules `Q(I)`, one basis vector per bar copy,
    /// ordered as in [`Barcode::expanded`]. Degrees are ignored.
    pub fn from_barcode(barcode: &Barcode, unit: &F) -> Self {
        let spectrum = barcode.endpoints();
        let bars = barcode.expanded();
        let alive: Vec<Vec<usize>> = (0..=spectrum.len())
            .map(|i| {
                bars.iter()
                    .enumerate()
                    .filter(|(_, (b, _))| Self::alive_in(&spectrum, b, i))
                    .map(|(k, _)| k)
                    .collect()
            })
            .collect();
        let transitions = (0..spectrum.len())
            .map(|i| {
                let (src, dst) = (&alive[i], &alive[i + 1]);
                Matrix::from_fn(dst.len(), src.len(), unit, |r, c| {
                    if dst[r] == src[c] {
                        unit.one_like()
                    } else {
                        unit.zero_like()
                    }
                })
            })
            .collect();
        Self {
            dims: alive.iter().map(Vec::len).collect(),
            spectrum,
            transitions,
            unit: unit.one_like(),
        }
    }

    fn alive_in(spectrum: &[Rational], bar: &Interval, i: usize) -> bool {
        // V_i is the value on (s_i, s_{i+1}]; test with that interval's right end
        // (or any point past s_m for the last one).
        let t = if i < spectrum.len() {
            spectrum[i].clone()
        } else {
            spectrum.last().cloned().unwrap_or_default() + Rational::one()
        };
        bar.contains_point(&t)
    }

    pub fn spectrum(&self) -> &[Rational] {
        &self.spectrum
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn transitions(&self) -> &[Matrix<F>] {
        &self.transitions
    }

    pub fn unit(&self) -> &F {
        &self.unit
    }

    /// `#{s ∈ spectrum : s < t}`.
    pub fn index(&self, t: &Rational) -> usize {
        self.spectrum.partition_point(|s| s < t)
    }

    pub fn dim_at(&self, t: &Rational) -> usize {
        self.dims[self.index(t)]
    }

    /// Structure map `V_i → V_j` for `i ≤ j`.
    pub fn composite(&self, i: usize, j: usize) -> Matrix<F> {
        assert!(i <= j && j < self.dims.len(), "composite({i}, {j}) out of range");
        let mut acc = Matrix::identity(self.dims[i], &self.unit);
        for t in &self.transitions[i..j] {
            acc = t.mul(&acc).expect("shapes validated at construction");
        }
        acc
    }

    /// Rank of `π_{s,t}: V_s → V_t`.
    pub fn rank_between(&self, s: &Rational, t: &Rational) -> usize {
        let (i, j) = (self.index(s), self.index(t));
        assert!(i <= j, "rank_between needs s <= t");
        self.composite(i, j).rank()
    }

    /// Barcode by the elder rule.
    ///
    /// A basis of `V_i` is kept oldest first. Crossing `s_{i+1}`, the images
    /// are scanned in that order; an image that depends on older ones marks a
    /// death, the independent ones survive, and a complement of their span is
    /// born.
    pub fn barcode(&self) -> Barcode {
        let mut entries = Vec::new();
        let mut basis: Vec<Vec<F>> = Vec::new();
        let mut births: Vec<Rational> = Vec::new();
        for (i, t) in self.transitions.iter().enumerate() {
            let s = &self.spectrum[i];
            let dim_next = self.dims[i + 1];
            let images: Vec<Vec<F>> = basis
                .iter()
                .map(|v| t.mul_vec(v).expect("shapes validated"))
                .collect();
            let img = Matrix::from_columns(dim_next, &images, &self.unit).expect("lengths agree");
            let keep = img.independent_columns();
            for (k, b) in births.iter().enumerate() {
                if !keep.contains(&k) {
                    entries.push(BarcodeEntry {
                        bar: Interval {
                            left: b.clone(),
                            right: Extended::Finite(s.clone()),
                        },
                        mult: 1,
                        degree: None,
                    });
                }
            }
            let kept = img.select_columns(&keep);
            let mut new_basis: Vec<Vec<F>> = kept.columns();
            let mut new_births: Vec<Rational> = keep.iter().map(|&k| births[k].clone()).collect();
            for v in kept.complement_basis() {
                new_basis.push(v);
                new_births.push(s.clone());
            }
            basis = new_basis;
            births = new_births;
        }
        for b in births {
            entries.push(BarcodeEntry {
                bar: Interval {
                    left: b,
                    right: Extended::Infinity,
                },
                mult: 1,
                degree: None,
            });
        }
        Barcode::from_entries(entries)
    }

    /// Restricts to a sub-collection of values given by column bases `subs[i]`
    /// of subspaces `W_i ⊆ V_i` with `T_i(W_i) ⊆ W_{i+1}`.
    pub fn submodule(&self, subs: &[Matrix<F>]) -> Result<Self, PersistenceError> {
        self.check_family(subs)?;
        let transitions = self
            .transitions
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let img = t.mul(&subs[i]).expect("shapes checked");
                express_in_basis(&subs[i + 1], &img).ok_or_else(|| {
                    PersistenceError::Invalid(format!("subspace {i} is not mapped into {}", i + 1))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(
            self.spectrum.clone(),
            subs.iter().map(Matrix::cols).collect(),
            transitions,
            &self.unit,
        )
    }

    /// Quotient by a family of subspaces `W_i ⊆ V_i` (column bases, preserved
    /// by the transitions).
    pub fn quotient(&self, subs: &[Matrix<F>]) -> Result<Self, PersistenceError> {
        self.check_family(subs)?;
        // Complement bases C_i; V_i/W_i is identified with span(C_i).
        let comps: Vec<Matrix<F>> = subs
            .iter()
            .map(|w| {
                Matrix::from_columns(w.rows(), &w.complement_basis(), &self.unit)
                    .expect("lengths agree")
            })
            .collect();
        let transitions = self
            .transitions
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let img = t.mul(&comps[i]).expect("shapes checked");
                let basis = comps[i + 1].hstack(&subs[i + 1]).expect("same rows");
                let coords = express_in_basis(&basis, &img)
                    .expect("complement plus subspace spans the whole space");
                let keep: Vec<usize> = (0..comps[i + 1].cols()).collect();
                coords.select_rows(&keep)
            })
            .collect();
        Self::new(
            self.spectrum.clone(),
            comps.iter().map(Matrix::cols).collect(),
            transitions,
            &self.unit,
        )
    }

    fn check_family(&self, subs: &[Matrix<F>]) -> Result<(), PersistenceError> {
        if subs.len() != self.dims.len() {
            return Err(PersistenceError::Invalid(format!(
                "expected {} subspaces, got {}",
                self.dims.len(),
                subs.len()
            )));
        }
        for (i, w) in subs.iter().enumerate() {
            if w.rows() != self.dims[i] || w.rank() != w.cols() {
                return Err(PersistenceError::Invalid(format!(
                    "subspace {i} must be given by {} -row independent columns",
                    self.dims[i]
                )));
            }
        }
        Ok(())
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut spectrum: Vec<Rational> =
            self.spectrum.iter().chain(&other.spectrum).cloned().collect();
        spectrum.sort();
        spectrum.dedup();
        let a = self.refine(&spectrum);
        let b = other.refine(&spectrum);
        Self {
            dims: a.dims.iter().zip(&b.dims).map(|(x, y)| x + y).collect(),
            transitions: a
                .transitions
                .iter()
                .zip(&b.transitions)
                .map(|(x, y)| x.direct_sum(y))
                .collect(),
            spectrum,
            unit: self.unit.clone(),
        }
    }

    /// Same module over a finer spectrum (identity maps at added points).
    pub fn refine(&self, spectrum: &[Rational]) -> Self {
        let mut dims = vec![0];
        let mut transitions = Vec::with_capacity(spectrum.len());
        let mut cur = 0usize;
        for s in spectrum {
            let next = self.spectrum.binary_search(s);
            match next {
                Ok(k) => {
                    transitions.push(self.transitions[k].clone());
                    cur = k + 1;
                }
                Err(_) => transitions.push(Matrix::identity(self.dims[cur], &self.unit)),
            }
            dims.push(self.dims[cur]);
        }
        Self {
            spectrum: spectrum.to_vec(),
            dims,
            transitions,
            unit: self.unit.clone(),
        }
    }

    /// Changes the basis of every `V_i` by the invertible `p_i` (new coordinates
    /// `p_i^{-1} v`), leaving the isomorphism type unchanged.
    pub fn change_basis(&self, p: &[Matrix<F>]) -> Result<Self, PersistenceError> {
        if p.len() != self.dims.len() {
            return Err(PersistenceError::Invalid("one basis change per value".into()));
        }
        let inv: Vec<Matrix<F>> = p
            .iter()
            .map(|m| {
                m.inverse()
                    .ok()
                    .flatten()
                    .ok_or_else(|| PersistenceError::Invalid("basis change not invertible".into()))
            })
            .collect::<Result<_, _>>()?;
        let transitions = self
            .transitions
            .iter()
            .enumerate()
            .map(|(i, t)| inv[i + 1].mul(&t.mul(&p[i])?))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self {
            transitions,
            ..self.clone()
        })
    }
}

/// Solves `basis · X = target` for the coordinate matrix `X`, or `None` if
/// some column of `target` is outside the span.
pub(crate) fn express_in_basis<F: Field>(basis: &Matrix<F>, target: &Matrix<F>) -> Option<Matrix<F>> {
    let cols: Vec<Vec<F>> = (0..target.cols())
        .map(|j| basis.solve_linear(&target.column(j)).ok().flatten())
        .collect::<Option<_>>()?;
    Some(Matrix::from_columns(basis.cols(), &cols, basis.unit()).expect("lengths agree"))
}

/// Independent oracle: bar multiplicities from ranks of composite maps.
///
/// With `r(i, j) = rank(V_i → V_j)` and `r(0, ·) = 0`, the bar
/// `(s_i, s_j]` has multiplicity `r(i,j-1) - r(i-1,j-1) - r(i,j) + r(i-1,j)`
/// and `(s_i, ∞)` has `r(i,m) - r(i-1,m)`.
pub fn barcode_by_ranks<F: Field>(m: &FinitePersistenceModule<F>) -> Barcode {
    let n = m.spectrum().len();
    let r = |i: usize, j: usize| -> i64 {
        if i == 0 {
            0
        } else {
            m.composite(i, j).rank() as i64
        }
    };
    let mut bars = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            let mult = r(i, j - 1) - r(i - 1, j - 1) - r(i, j) + r(i - 1, j);
            if mult > 0 {
                bars.push((
                    Interval::finite(m.spectrum()[i - 1].clone(), m.spectrum()[j - 1].clone())
                        .expect("increasing spectrum"),
                    mult as u64,
                ));
            }
        }
        let mult = r(i, n) - r(i - 1, n);
        if mult > 0 {
            bars.push((
                Interval::new(m.spectrum()[i - 1].clone(), Extended::Infinity).expect("ray"),
                mult as u64,
            ));
        }
    }
    Barcode::from_bars(bars)
}
