use std::collections::BTreeSet;

use num_traits::{One, Signed};

use super::module::ZpPersistenceModule;
use super::EquivariantError;
use crate::field::{Extended, Field, Matrix, Rational};
use crate::par::Execution;
use crate::persistence::{express_in_basis, FilteredComplex, FinitePersistenceModule, Generator};

/// Filtered complex with an action-preserving chain automorphism `T`,
/// `T^k = id`, standing in for the loop-rotation operator.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivariantComplex<F: Field> {
    complex: FilteredComplex<F>,
    chain_map: Matrix<F>,
    k: u32,
}

impl<F: Field> EquivariantComplex<F> {
    pub fn new(complex: FilteredComplex<F>, chain_map: Matrix<F>, k: u32) -> Result<Self, EquivariantError> {
        let n = complex.len();
        if chain_map.rows() != n || chain_map.cols() != n {
            return Err(EquivariantError::Invalid(format!("chain map must be {n}x{n}")));
        }
        if k == 0 || chain_map.pow(k as u64)? != Matrix::identity(n, complex.unit()) {
            return Err(EquivariantError::Invalid(format!("chain map does not satisfy T^{k} = id")));
        }
        let d = complex.boundary();
        if chain_map.mul(d)? != d.mul(&chain_map)? {
            return Err(EquivariantError::Invalid("chain map does not commute with the boundary".into()));
        }
        let gens = complex.generators();
        for i in 0..n {
            for j in 0..n {
                if !chain_map.get(i, j).is_zero() && gens[i] != gens[j] {
                    return Err(EquivariantError::Invalid(format!(
                        "chain map mixes generators {j} and {i} of different action or degree"
                    )));
                }
            }
        }
        Ok(Self { complex, chain_map, k })
    }

    pub fn complex(&self) -> &FilteredComplex<F> {
        &self.complex
    }

    pub fn chain_map(&self) -> &Matrix<F> {
        &self.chain_map
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    fn n(&self) -> usize {
        self.complex.len()
    }

    fn window(&self, a: &Rational, b: &Rational) -> Vec<usize> {
        let g = self.complex.generators();
        (0..self.n()).filter(|&i| a < &g[i].action && &g[i].action < b).collect()
    }

    fn project(&self, v: &[F], window: &[usize]) -> Vec<F> {
        let zero = self.complex.unit().zero_like();
        (0..self.n())
            .map(|i| if window.contains(&i) { v[i].clone() } else { zero.clone() })
            .collect()
    }

    fn boundaries(&self, window: &[usize], r: i64) -> Vec<Vec<F>> {
        let g = self.complex.generators();
        window
            .iter()
            .filter(|&&j| g[j].degree == r + 1)
            .map(|&j| self.project(&self.complex.boundary().column(j), window))
            .collect()
    }

    /// Whether `j_d ∘ (T − id)` is nonzero on `H_r(a, b)` for some degree `r`.
    fn shifted_nonzero(&self, a: &Rational, b: &Rational, d: &Rational) -> bool {
        let (a2, b2) = (a + d, b + d);
        if &a2 >= b {
            return false;
        }
        let target = self.window(&a2, &b2);
        let unit = self.complex.unit();
        let minus = self
            .chain_map
            .sub_scalar_identity(&unit.one_like())
            .expect("square");
        self.complex.degrees().into_iter().any(|r| {
            let h = self
                .complex
                .window_homology(a, b, r)
                .expect("window endpoints avoid the spectrum");
            if h.dim == 0 {
                return false;
            }
            let bounds = self.boundaries(&target, r);
            let imgs: Vec<Vec<F>> = h
                .basis
                .iter()
                .map(|z| self.project(&minus.mul_vec(z).expect("square"), &target))
                .collect();
            let n = self.n();
            let bm = Matrix::from_columns(n, &bounds, unit).expect("lengths agree");
            let both = Matrix::from_columns(n, &[bounds.clone(), imgs].concat(), unit)
                .expect("lengths agree");
            both.rank() > bm.rank()
        })
    }

    /// Whether some window `(a, b)` has `j_d ∘ (T − id) ≠ 0`. Windows are
    /// sampled once per cell of the arrangement `S ∪ (S − d)`, which covers
    /// every combinatorial type.
    fn nonzero_at(&self, d: &Rational) -> bool {
        let spectrum = self.complex.spectrum();
        let mut pts: Vec<Rational> = spectrum.iter().chain(spectrum.iter().map(|s| s - d).collect::<Vec<_>>().iter()).cloned().collect();
        pts.sort();
        pts.dedup();
        let samples = cell_samples(&pts);
        for (i, a) in samples.iter().enumerate() {
            for b in &samples[i + 1..] {
                if self.shifted_nonzero(a, b, d) {
                    return true;
                }
            }
        }
        false
    }

    /// `w = sup{d ≥ 0 : j_d ∘ (T − id) ≠ 0 for some window}`.
    ///
    /// Returns `+∞` when the map never dies, which happens for complexes whose
    /// nontrivially rotated classes are never killed (e.g. zero boundary).
    pub fn w_spread(&self, exec: Execution) -> Extended {
        let spectrum = self.complex.spectrum();
        let (Some(lo), Some(hi)) = (spectrum.first(), spectrum.last()) else {
            return Extended::zero();
        };
        let diameter = hi - lo;
        let far = &diameter * Rational::from_integer(2.into()) + Rational::one();
        if self.nonzero_at(&far) {
            return Extended::Infinity;
        }
        let mut cands: BTreeSet<Rational> = BTreeSet::new();
        for s in &spectrum {
            for t in &spectrum {
                if t > s {
                    cands.insert(t - s);
                }
            }
        }
        let cands: Vec<Rational> = cands.into_iter().collect();
        let hits = exec.map(&cands, |c| {
            let eta = just_below(&spectrum, c);
            self.nonzero_at(&(c - eta))
        });
        cands
            .iter()
            .zip(hits)
            .filter(|(_, h)| *h)
            .map(|(c, _)| Extended::Finite(c.clone()))
            .fold(Extended::zero(), Extended::max)
    }

    /// `Z_p` persistence module of sublevel homology `H_r(CF^{<t})` with the
    /// induced action of `T` (requires `k = p` prime).
    pub fn homology_module(&self, r: i64) -> Result<ZpPersistenceModule<F>, EquivariantError> {
        let spectrum = self.complex.spectrum();
        let unit = self.complex.unit().clone();
        let n = self.n();
        let Some(lo) = spectrum.first() else {
            let base = FinitePersistenceModule::zero(&unit);
            return ZpPersistenceModule::new(base, vec![Matrix::zeros(0, 0, &unit)], self.k, Some(r));
        };
        let a = lo - Rational::one();
        let mut samples: Vec<Rational> = spectrum.windows(2).map(|w| (&w[0] + &w[1]) / Rational::from_integer(2.into())).collect();
        samples.push(spectrum.last().expect("nonempty") + Rational::one());
        // Region 0 is below the spectrum and always zero.
        let mut bases: Vec<Vec<Vec<F>>> = vec![Vec::new()];
        let mut bounds: Vec<Vec<Vec<F>>> = vec![Vec::new()];
        for t in &samples {
            let h = self.complex.window_homology(&a, t, r)?;
            bounds.push(self.boundaries(&h.support, r));
            bases.push(h.basis);
        }
        // Coordinates of `v` (a cycle of region i) in the homology basis of region i.
        let coords = |i: usize, vs: &[Vec<F>]| -> Result<Matrix<F>, EquivariantError> {
            let basis = Matrix::from_columns(n, &[bases[i].clone(), bounds[i].clone()].concat(), &unit)?;
            let target = Matrix::from_columns(n, vs, &unit)?;
            let full = solve_any(&basis, &target).ok_or_else(|| {
                EquivariantError::Invalid("class not representable in window homology".into())
            })?;
            let keep: Vec<usize> = (0..bases[i].len()).collect();
            Ok(full.select_rows(&keep))
        };
        let m = spectrum.len();
        let mut transitions = Vec::with_capacity(m);
        let mut action = Vec::with_capacity(m + 1);
        action.push(Matrix::zeros(0, 0, &unit));
        for i in 0..m {
            transitions.push(if bases[i].is_empty() {
                Matrix::zeros(bases[i + 1].len(), 0, &unit)
            } else {
                coords(i + 1, &bases[i])?
            });
        }
        for i in 1..=m {
            let imgs: Vec<Vec<F>> = bases[i]
                .iter()
                .map(|z| self.chain_map.mul_vec(z).expect("square"))
                .collect();
            action.push(if imgs.is_empty() {
                Matrix::zeros(0, 0, &unit)
            } else {
                coords(i, &imgs)?
            });
        }
        let dims = bases.iter().map(Vec::len).collect();
        let base = FinitePersistenceModule::new(spectrum, dims, transitions, &unit)?;
        ZpPersistenceModule::new(base, action, self.k, Some(r))
    }
}

/// Solves `basis · X = target` allowing a non-injective `basis`.
fn solve_any<F: Field>(basis: &Matrix<F>, target: &Matrix<F>) -> Option<Matrix<F>> {
    if basis.cols() == 0 {
        return target.is_zero().then(|| Matrix::zeros(0, target.cols(), basis.unit()));
    }
    express_in_basis(basis, target)
}

/// One point per open cell of the sorted breakpoints, plus one on each end.
fn cell_samples(pts: &[Rational]) -> Vec<Rational> {
    let mut out = Vec::with_capacity(pts.len() + 1);
    if let Some(first) = pts.first() {
        out.push(first - Rational::one());
    }
    for w in pts.windows(2) {
        out.push((&w[0] + &w[1]) / Rational::from_integer(2.into()));
    }
    if let Some(last) = pts.last() {
        out.push(last + Rational::one());
    }
    out
}

/// A step `η > 0` so small that `S ∪ (S − (c − η))` has the combinatorics of
/// `S ∪ (S − d)` for every `d` just below `c`.
fn just_below(spectrum: &[Rational], c: &Rational) -> Rational {
    let mut pts: Vec<Rational> = spectrum.iter().cloned().chain(spectrum.iter().map(|s| s - c)).collect();
    pts.sort();
    pts.dedup();
    let gap = pts
        .windows(2)
        .map(|w| &w[1] - &w[0])
        .min()
        .unwrap_or_else(Rational::one);
    let eta = gap / Rational::from_integer(3.into());
    eta.min(c / Rational::from_integer(2.into()))
}

/// `D = min |A(x) − A(y)|` over generator pairs whose degrees differ by one;
/// `+∞` when there is no such pair.
pub fn spread_lower_bound_from_gaps(generators: &[Generator]) -> Extended {
    let mut best = Extended::Infinity;
    for (i, g) in generators.iter().enumerate() {
        for h in &generators[i + 1..] {
            if (g.degree - h.degree).abs() == 1 {
                best = best.min(Extended::Finite((&g.action - &h.action).abs()));
            }
        }
    }
    best
}
