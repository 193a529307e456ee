use std::collections::BTreeSet;

use super::barcode::{Barcode, BarcodeEntry, Interval};
use super::PersistenceError;
use crate::field::{Extended, Field, Matrix, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    pub action: Rational,
    pub degree: i64,
}

/// Finitely generated complex filtered by action.
///
/// Column `j` of `boundary` is `∂ g_j`. The sublevel complex at `t` is spanned
/// by generators with action `< t`.
#[derive(Debug, Clone, PartialEq)]
pub struct FilteredComplex<F: Field> {
    generators: Vec<Generator>,
    boundary: Matrix<F>,
}

/// Homology of the window `(a, b)` in one degree.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowHomology<F: Field> {
    pub dim: usize,
    /// Indices of the generators with action in `(a, b)`.
    pub support: Vec<usize>,
    /// Cycle representatives, as full-length chain vectors, of a homology basis.
    pub basis: Vec<Vec<F>>,
}

impl<F: Field> FilteredComplex<F> {
    pub fn new(generators: Vec<Generator>, boundary: Matrix<F>) -> Result<Self, PersistenceError> {
        let n = generators.len();
        if boundary.rows() != n || boundary.cols() != n {
            return Err(PersistenceError::Invalid(format!(
                "boundary must be {n}x{n}, got {}x{}",
                boundary.rows(),
                boundary.cols()
            )));
        }
        for j in 0..n {
            for i in 0..n {
                if boundary.get(i, j).is_zero() {
                    continue;
                }
                let (gi, gj) = (&generators[i], &generators[j]);
                if gi.degree != gj.degree - 1 {
                    return Err(PersistenceError::Invalid(format!(
                        "boundary of generator {j} has a degree {} component",
                        gi.degree
                    )));
                }
                if gi.action >= gj.action {
                    return Err(PersistenceError::ActionIncrease { from: j, to: i });
                }
            }
        }
        if !boundary.mul(&boundary)?.is_zero() {
            return Err(PersistenceError::BoundarySquare);
        }
        Ok(Self {
            generators,
            boundary,
        })
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn boundary(&self) -> &Matrix<F> {
        &self.boundary
    }

    pub fn unit(&self) -> &F {
        self.boundary.unit()
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Sorted distinct actions.
    pub fn spectrum(&self) -> Vec<Rational> {
        let set: BTreeSet<&Rational> = self.generators.iter().map(|g| &g.action).collect();
        set.into_iter().cloned().collect()
    }

    pub fn degrees(&self) -> BTreeSet<i64> {
        self.generators.iter().map(|g| g.degree).collect()
    }

    /// Graded barcode of the sublevel filtration, by standard column reduction
    /// in order of increasing action.
    pub fn barcode(&self) -> Barcode {
        let n = self.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            let (ga, gb) = (&self.generators[a], &self.generators[b]);
            (&ga.action, ga.degree).cmp(&(&gb.action, gb.degree)).then(a.cmp(&b))
        });
        let mut cols: Vec<Vec<F>> = order
            .iter()
            .map(|&j| order.iter().map(|&i| self.boundary.get(i, j).clone()).collect())
            .collect();
        let low = |v: &[F]| v.iter().rposition(|x| !x.is_zero());
        // owner[r] = column whose pivot is row r.
        let mut owner: Vec<Option<usize>> = vec![None; n];
        for j in 0..n {
            while let Some(r) = low(&cols[j]) {
                let Some(k) = owner[r] else {
                    owner[r] = Some(j);
                    break;
                };
                let f = cols[j][r].mul(&cols[k][r].inverse().expect("pivot nonzero"));
                let pivot_col = cols[k].clone();
                for (x, y) in cols[j].iter_mut().zip(&pivot_col) {
                    if !y.is_zero() {
                        *x = x.sub(&f.mul(y));
                    }
                }
            }
        }
        let mut entries = Vec::new();
        for r in 0..n {
            let g = &self.generators[order[r]];
            if low(&cols[r]).is_some() {
                continue; // r kills something; it is not a cycle
            }
            let right = match owner[r] {
                Some(j) => Extended::Finite(self.generators[order[j]].action.clone()),
                None => Extended::Infinity,
            };
            entries.push(BarcodeEntry {
                bar: Interval {
                    left: g.action.clone(),
                    right,
                },
                mult: 1,
                degree: Some(g.degree),
            });
        }
        Barcode::from_entries(entries)
    }

    fn check_outside_spectrum(&self, ts: &[&Rational]) -> Result<(), PersistenceError> {
        for t in ts {
            if self.generators.iter().any(|g| &g.action == *t) {
                return Err(PersistenceError::SpectrumCollision(t.to_string()));
            }
        }
        Ok(())
    }

    fn window(&self, a: &Rational, b: &Rational) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| a < &self.generators[i].action && &self.generators[i].action < b)
            .collect()
    }

    fn in_degree(&self, idx: &[usize], r: i64) -> Vec<usize> {
        idx.iter().copied().filter(|&i| self.generators[i].degree == r).collect()
    }

    /// Boundary images (full-length vectors, projected to `window`) of the
    /// degree-`r+1` generators in `window`.
    fn boundary_images(&self, window: &[usize], r: i64) -> Vec<Vec<F>> {
        self.in_degree(window, r + 1)
            .into_iter()
            .map(|j| self.project(&self.boundary.column(j), window))
            .collect()
    }

    fn project(&self, v: &[F], window: &[usize]) -> Vec<F> {
        let zero = self.unit().zero_like();
        (0..self.len())
            .map(|i| if window.contains(&i) { v[i].clone() } else { zero.clone() })
            .collect()
    }

    /// Homology of `CF^{<b} / CF^{<a}` in degree `r`.
    pub fn window_homology(
        &self,
        a: &Rational,
        b: &Rational,
        r: i64,
    ) -> Result<WindowHomology<F>, PersistenceError> {
        if a >= b {
            return Err(PersistenceError::Invalid(format!("window ({a}, {b}) is empty")));
        }
        self.check_outside_spectrum(&[a, b])?;
        let window = self.window(a, b);
        let n = self.len();
        let unit = self.unit().clone();
        let cells = self.in_degree(&window, r);
        let faces = self.in_degree(&window, r - 1);
        // Restricted boundary C_r → C_{r-1}.
        let d = Matrix::from_fn(faces.len(), cells.len(), &unit, |i, j| {
            self.boundary.get(faces[i], cells[j]).clone()
        });
        let cycles: Vec<Vec<F>> = d
            .kernel_basis()
            .into_iter()
            .map(|k| {
                let mut v = vec![unit.zero_like(); n];
                for (c, x) in cells.iter().zip(k) {
                    v[*c] = x;
                }
                v
            })
            .collect();
        let bounds = self.boundary_images(&window, r);
        let stacked = Matrix::from_columns(n, &[bounds.clone(), cycles.clone()].concat(), &unit)?;
        let basis: Vec<Vec<F>> = stacked
            .independent_columns()
            .into_iter()
            .filter(|&c| c >= bounds.len())
            .map(|c| cycles[c - bounds.len()].clone())
            .collect();
        Ok(WindowHomology {
            dim: basis.len(),
            support: window,
            basis,
        })
    }

    /// Rank of the map induced on homology by sending each representative
    /// `z` to `f(z)` in the window `target` (degree `r`).
    fn induced_rank(&self, images: Vec<Vec<F>>, target: &[usize], r: i64) -> usize {
        let n = self.len();
        let unit = self.unit();
        let bounds = self.boundary_images(target, r);
        let b = Matrix::from_columns(n, &bounds, unit).expect("lengths agree");
        let imgs: Vec<Vec<F>> = images.iter().map(|v| self.project(v, target)).collect();
        let both = Matrix::from_columns(n, &[bounds.clone(), imgs].concat(), unit)
            .expect("lengths agree");
        both.rank() - b.rank()
    }

    /// Checks exactness of the long exact sequence of the triple `a < b < c`,
    ///
    /// `… → H_r(a,b) → H_r(a,c) → H_r(b,c) → H_{r-1}(a,b) → …`,
    ///
    /// at every term, by comparing dimensions with ranks of the maps.
    pub fn les_check(&self, a: &Rational, b: &Rational, c: &Rational) -> Result<bool, PersistenceError> {
        if !(a < b && b < c) {
            return Err(PersistenceError::Invalid("les_check needs a < b < c".into()));
        }
        self.check_outside_spectrum(&[a, b, c])?;
        let (ab, ac, bc) = (self.window(a, b), self.window(a, c), self.window(b, c));
        let degrees = self.degrees();
        let (Some(&lo), Some(&hi)) = (degrees.first(), degrees.last()) else {
            return Ok(true);
        };
        struct Ranks {
            dims: [usize; 3],
            i: usize,
            j: usize,
            delta: usize,
        }
        let mut ranks = std::collections::BTreeMap::new();
        for r in lo - 1..=hi + 1 {
            let hab = self.window_homology(a, b, r)?;
            let hac = self.window_homology(a, c, r)?;
            let hbc = self.window_homology(b, c, r)?;
            let i = self.induced_rank(hab.basis.clone(), &ac, r);
            let j = self.induced_rank(hac.basis.clone(), &bc, r);
            // Connecting map: a cycle of (b,c) lifts to itself in (a,c); its
            // boundary lands in (a,b).
            let lifted: Vec<Vec<F>> = hbc
                .basis
                .iter()
                .map(|z| self.boundary.mul_vec(&self.project(z, &bc)).expect("square"))
                .collect();
            let delta = self.induced_rank(lifted, &ab, r - 1);
            ranks.insert(
                r,
                Ranks {
                    dims: [hab.dim, hac.dim, hbc.dim],
                    i,
                    j,
                    delta,
                },
            );
        }
        let delta_into = |r: i64| ranks.get(&(r + 1)).map_or(0, |x: &Ranks| x.delta);
        Ok(ranks.iter().all(|(&r, x)| {
            x.dims[0] == delta_into(r) + x.i && x.dims[1] == x.i + x.j && x.dims[2] == x.j + x.delta
        }))
    }
}

/// Window homology dimension predicted by a graded barcode: degree-`r` bars
/// born inside `(a, b)` that outlive `b`, plus degree-`(r-1)` bars born before
/// `a` that die inside `(a, b)`.
pub fn window_dim_from_barcode(barcode: &Barcode, a: &Rational, b: &Rational, r: i64) -> u64 {
    let fa = Extended::Finite(a.clone());
    let fb = Extended::Finite(b.clone());
    barcode
        .entries()
        .iter()
        .filter(|e| {
            let (birth, death) = (&e.bar.left, &e.bar.right);
            (e.degree == Some(r) && a < birth && birth < b && death > &fb)
                || (e.degree == Some(r - 1) && birth < a && &fa < death && death < &fb)
        })
        .map(|e| e.mult)
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rational;

    fn q(n: i64) -> Rational {
        rational(n, 1)
    }

    fn pair() -> FilteredComplex<Rational> {
        // x: degree 1, action 5; y: degree 0, action 2; ∂x = y.
        FilteredComplex::new(
            vec![
                Generator { action: q(5), degree: 1 },
                Generator { action: q(2), degree: 0 },
            ],
            Matrix::from_i64_rows(&[&[0, 0], &[1, 0]]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn zero_boundary_gives_rays() {
        let c = FilteredComplex::new(
            vec![Generator { action: q(1), degree: 0 }, Generator { action: q(3), degree: 2 }],
            Matrix::zeros(2, 2, &q(1)),
        )
        .unwrap();
        let b = c.barcode();
        assert_eq!(b.infinite_count(), 2);
        assert_eq!(b.to_string(), "{(1, inf)x1 @0, (3, inf)x1 @2}");
        assert_eq!(c.window_homology(&q(0), &q(4), 0).unwrap().dim, 1);
        assert_eq!(c.window_homology(&q(0), &q(4), 2).unwrap().dim, 1);
        assert_eq!(c.window_homology(&rational(3, 2), &rational(5, 2), 0).unwrap().dim, 0);
        assert!(c.les_check(&q(0), &q(2), &q(4)).unwrap());
    }

    #[test]
    fn hand_reduced_pair() {
        let c = pair();
        assert_eq!(c.barcode().to_string(), "{(2, 5]x1 @0}");
        let h = c.window_homology(&q(3), &q(6), 1).unwrap();
        assert_eq!(h.dim, 1);
        assert_eq!(c.window_homology(&q(3), &q(6), 0).unwrap().dim, 0);
        assert_eq!(c.window_homology(&q(1), &q(3), 0).unwrap().dim, 1);
        assert!(c.les_check(&q(1), &q(3), &q(6)).unwrap());
    }

    #[test]
    fn rejects_bad_complexes() {
        let gens = vec![
            Generator { action: q(1), degree: 1 },
            Generator { action: q(2), degree: 0 },
        ];
        let up = FilteredComplex::new(gens, Matrix::from_i64_rows(&[&[0, 0], &[1, 0]]).unwrap());
        assert!(matches!(up, Err(PersistenceError::ActionIncrease { .. })));
        let gens = vec![
            Generator { action: q(3), degree: 2 },
            Generator { action: q(2), degree: 1 },
            Generator { action: q(1), degree: 0 },
        ];
        let sq = FilteredComplex::new(
            gens,
            Matrix::from_i64_rows(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]]).unwrap(),
        );
        assert!(matches!(sq, Err(PersistenceError::BoundarySquare)));
        let c = pair();
        assert!(matches!(
            c.window_homology(&q(2), &q(6), 0),
            Err(PersistenceError::SpectrumCollision(_))
        ));
    }
}
