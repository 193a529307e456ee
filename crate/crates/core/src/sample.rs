//! Seeded random inputs for property tests, the acceptance suite and benches.
//!
//! The seed comes from `EGB_SEED` when set, so failures can be replayed.

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::equivariant::{cyclic_permutation, ZpPersistenceModule};
use crate::field::{rational, CyclotomicNumber, Extended, Field, Matrix, Rational};
use crate::persistence::{Barcode, BarcodeEntry, FilteredComplex, FinitePersistenceModule, Generator, Interval};

pub type SampleRng = ChaCha8Rng;

/// RNG seeded from `EGB_SEED`, or from `default_seed` if unset or unparsable.
pub fn rng(default_seed: u64) -> SampleRng {
    let seed = std::env::var("EGB_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(default_seed);
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform rational on the grid `lo + k/den`, `lo ≤ · ≤ hi`.
pub fn grid_rational<R: Rng>(rng: &mut R, lo: i64, hi: i64, den: i64) -> Rational {
    rational(rng.gen_range(lo * den..=hi * den), den)
}

#[derive(Debug, Clone)]
pub struct BarcodeShape {
    pub max_bars: usize,
    pub max_mult: u64,
    pub lo: i64,
    pub hi: i64,
    pub den: i64,
    pub infinite_prob: f64,
    pub degrees: Vec<Option<i64>>,
}

impl Default for BarcodeShape {
    fn default() -> Self {
        Self {
            max_bars: 5,
            max_mult: 2,
            lo: 0,
            hi: 10,
            den: 2,
            infinite_prob: 0.2,
            degrees: vec![None],
        }
    }
}

pub fn random_barcode<R: Rng>(rng: &mut R, shape: &BarcodeShape) -> Barcode {
    let n = rng.gen_range(0..=shape.max_bars);
    Barcode::from_entries((0..n).map(|_| {
        let a = grid_rational(rng, shape.lo, shape.hi - 1, shape.den);
        let right = if rng.gen_bool(shape.infinite_prob) {
            Extended::Infinity
        } else {
            let len = rational(rng.gen_range(1..=(shape.hi - shape.lo) * shape.den), shape.den);
            Extended::Finite(&a + len)
        };
        BarcodeEntry {
            bar: Interval { left: a, right },
            mult: rng.gen_range(1..=shape.max_mult),
            degree: *shape.degrees.choose(rng).expect("at least one degree"),
        }
    }))
}

/// Moves every endpoint by strictly less than `c` (a multiple of `1/den`
/// steps below `c`). Bars that would collapse are dropped, which keeps the
/// bottleneck distance below `c`.
pub fn perturb_barcode<R: Rng>(rng: &mut R, b: &Barcode, c: &Rational, den: i64) -> Barcode {
    let jitter = |rng: &mut R| -> Rational {
        // Uniform on (-c, c) with step c/den.
        let k = rng.gen_range(-(den - 1)..=den - 1);
        c * rational(k, den)
    };
    let mut entries = Vec::new();
    for (bar, degree) in b.expanded() {
        let left = &bar.left + jitter(rng);
        let right = match &bar.right {
            Extended::Finite(d) => Extended::Finite(d + jitter(rng)),
            Extended::Infinity => Extended::Infinity,
        };
        if Extended::Finite(left.clone()) < right {
            entries.push(BarcodeEntry {
                bar: Interval { left, right },
                mult: 1,
                degree,
            });
        }
    }
    Barcode::from_entries(entries)
}

/// Random invertible `n×n` rational matrix with small entries.
pub fn random_invertible<R: Rng>(rng: &mut R, n: usize) -> Matrix<Rational> {
    let one = rational(1, 1);
    loop {
        let m = Matrix::from_fn(n, n, &one, |_, _| rational(rng.gen_range(-2..=2), 1));
        if m.rank() == n {
            return m;
        }
    }
}

/// Random invertible matrix over any field, with small integer entries
/// embedded from `Q`.
pub fn random_invertible_over<F: Field, R: Rng>(rng: &mut R, n: usize, unit: &F) -> Matrix<F> {
    random_invertible(rng, n).map(unit, |q| unit.embed(q))
}

/// Filtered complex realizing a graded barcode, scrambled by a random
/// filtration-preserving change of basis.
///
/// Each finite bar `(b, d]` in degree `r` becomes a pair `x` (degree `r+1`,
/// action `d`), `y` (degree `r`, action `b`) with `∂x = y`; each ray becomes
/// a cycle. Bars without degree are put in degree 0.
pub fn random_complex<R: Rng>(rng: &mut R, barcode: &Barcode) -> FilteredComplex<Rational> {
    let mut gens = Vec::new();
    let mut edges = Vec::new();
    for (bar, degree) in barcode.expanded() {
        let r = degree.unwrap_or(0);
        let y = gens.len();
        gens.push(Generator { action: bar.left.clone(), degree: r });
        if let Extended::Finite(d) = &bar.right {
            edges.push((y, gens.len()));
            gens.push(Generator { action: d.clone(), degree: r + 1 });
        }
    }
    let n = gens.len();
    let one = rational(1, 1);
    let mut boundary = Matrix::zeros(n, n, &one);
    for &(y, x) in &edges {
        boundary.set(y, x, one.clone());
    }
    // g'_j = g_j + Σ c_ij g_i over same-degree g_i of no larger action.
    let mut p = Matrix::identity(n, &one);
    for j in 0..n {
        for i in 0..n {
            if i != j
                && gens[i].degree == gens[j].degree
                && gens[i].action <= gens[j].action
                && rng.gen_bool(0.5)
            {
                p.set(i, j, rational(rng.gen_range(-2..=2), 1));
            }
        }
    }
    // Equal actions could make p singular; fall back to a triangular choice.
    if p.rank() < n {
        for j in 0..n {
            for i in 0..n {
                if i != j && (&gens[i].action, i) > (&gens[j].action, j) {
                    p.set(i, j, Rational::zero());
                }
            }
        }
    }
    let p_inv = p.inverse().expect("square").expect("invertible");
    let scrambled = p_inv
        .mul(&boundary)
        .and_then(|m| m.mul(&p))
        .expect("square");
    FilteredComplex::new(gens, scrambled).expect("valid by construction")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_rng_is_deterministic() {
        let mut a = ChaCha8Rng::seed_from_u64(7);
        let mut b = ChaCha8Rng::seed_from_u64(7);
        let s = BarcodeShape::default();
        assert_eq!(random_barcode(&mut a, &s), random_barcode(&mut b, &s));
    }

    #[test]
    fn complex_realizes_barcode() {
        let mut r = ChaCha8Rng::seed_from_u64(3);
        let shape = BarcodeShape {
            degrees: vec![Some(0), Some(1)],
            ..Default::default()
        };
        for _ in 0..20 {
            let b = random_barcode(&mut r, &shape);
            let c = random_complex(&mut r, &b);
            assert_eq!(c.barcode(), b);
        }
    }
}

/// Random `Z_p` module together with the barcodes of `L_{ζ^k}`, `k = 0..p`,
/// known by construction.
#[derive(Debug, Clone)]
pub struct ZpSample {
    pub module: ZpPersistenceModule<CyclotomicNumber>,
    pub eigen: Vec<Barcode>,
}

impl ZpSample {
    /// Expected barcode of `V/Fix(A)`: the sum over nontrivial eigenvalues.
    pub fn quotient_barcode(&self) -> Barcode {
        self.eigen[1..]
            .iter()
            .fold(Barcode::new(), |acc, b| acc.union(b))
    }
}

fn distinct_times<R: Rng>(rng: &mut R, k: usize, hi: i64, den: i64) -> Vec<Rational> {
    let mut pool: Vec<i64> = (0..=hi * den).collect();
    pool.shuffle(rng);
    let mut picks: Vec<i64> = pool.into_iter().take(k).collect();
    picks.sort();
    picks.into_iter().map(|n| rational(n, den)).collect()
}

/// Module whose last region is zero unless `ray`, in which case it is dropped.
fn staged(
    mut spectrum: Vec<Rational>,
    mut dims: Vec<usize>,
    mut transitions: Vec<Matrix<CyclotomicNumber>>,
    mut action: Vec<Matrix<CyclotomicNumber>>,
    ray: bool,
    p: u32,
) -> ZpPersistenceModule<CyclotomicNumber> {
    if ray {
        spectrum.pop();
        dims.pop();
        transitions.pop();
        action.pop();
    }
    let unit = CyclotomicNumber::one(p).expect("supported prime");
    let base = FinitePersistenceModule::new(spectrum, dims, transitions, &unit).expect("valid piece");
    ZpPersistenceModule::new(base, action, p, None).expect("valid piece")
}

/// Direct sum of up to `max_pieces` random indecomposable-ish pieces, then
/// conjugated by a random basis change on every region.
///
/// Piece types: a bar with scalar action `ζ^k`; a cyclic `p`-tuple; `p`
/// cyclic generators collapsing by their sum into one class; one class
/// splitting diagonally into a cyclic `p`-tuple.
pub fn random_zp_module<R: Rng>(rng: &mut R, p: u32, max_pieces: usize, hi: i64, den: i64) -> ZpSample {
    let unit = CyclotomicNumber::one(p).expect("supported prime");
    let n = p as usize;
    let z = |r: usize, c: usize| Matrix::zeros(r, c, &unit);
    let ones = |r: usize, c: usize| Matrix::from_fn(r, c, &unit, |_, _| unit.clone());
    let perm = cyclic_permutation(n, &unit);
    let mut eigen = vec![Barcode::new(); n];
    let add = |eigen: &mut Vec<Barcode>, k: usize, bar: Interval| {
        eigen[k] = eigen[k].union(&Barcode::from_bars([(bar, 1)]));
    };
    let mut module: Option<ZpPersistenceModule<CyclotomicNumber>> = None;
    for _ in 0..rng.gen_range(1..=max_pieces) {
        let ray = rng.gen_bool(0.2);
        let end = |t: &Rational| if ray { Extended::Infinity } else { Extended::Finite(t.clone()) };
        let piece = match rng.gen_range(0..4) {
            0 => {
                let t = distinct_times(rng, 2, hi, den);
                let k = rng.gen_range(0..n);
                let s = Matrix::identity(1, &unit).scale(&CyclotomicNumber::zeta_pow(p, k as i64).expect("p"));
                add(&mut eigen, k, Interval::new(t[0].clone(), end(&t[1])).expect("ordered"));
                staged(t, vec![0, 1, 0], vec![z(1, 0), z(0, 1)], vec![z(0, 0), s, z(0, 0)], ray, p)
            }
            1 => {
                let t = distinct_times(rng, 2, hi, den);
                for k in 0..n {
                    add(&mut eigen, k, Interval::new(t[0].clone(), end(&t[1])).expect("ordered"));
                }
                staged(t, vec![0, n, 0], vec![z(n, 0), z(0, n)], vec![z(0, 0), perm.clone(), z(0, 0)], ray, p)
            }
            2 => {
                let t = distinct_times(rng, 3, hi, den);
                add(&mut eigen, 0, Interval::new(t[0].clone(), end(&t[2])).expect("ordered"));
                for k in 1..n {
                    add(&mut eigen, k, Interval::finite(t[0].clone(), t[1].clone()).expect("ordered"));
                }
                staged(
                    t,
                    vec![0, n, 1, 0],
                    vec![z(n, 0), ones(1, n), z(0, 1)],
                    vec![z(0, 0), perm.clone(), Matrix::identity(1, &unit), z(0, 0)],
                    ray,
                    p,
                )
            }
            _ => {
                let t = distinct_times(rng, 3, hi, den);
                add(&mut eigen, 0, Interval::new(t[0].clone(), end(&t[2])).expect("ordered"));
                for k in 1..n {
                    add(&mut eigen, k, Interval::new(t[1].clone(), end(&t[2])).expect("ordered"));
                }
                staged(
                    t,
                    vec![0, 1, n, 0],
                    vec![z(1, 0), ones(n, 1), z(0, n)],
                    vec![z(0, 0), Matrix::identity(1, &unit), perm.clone(), z(0, 0)],
                    ray,
                    p,
                )
            }
        };
        module = Some(match module {
            None => piece,
            Some(m) => m.direct_sum(&piece).expect("same p"),
        });
    }
    let module = module.expect("at least one piece");
    let basis: Vec<Matrix<CyclotomicNumber>> = module
        .base()
        .dims()
        .iter()
        .map(|&d| random_invertible_over(rng, d, &unit))
        .collect();
    ZpSample {
        module: module.change_basis(&basis).expect("invertible"),
        eigen,
    }
}
