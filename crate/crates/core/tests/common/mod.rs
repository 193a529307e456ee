//! Oracles shared by the integration tests and the acceptance suite.
#![allow(dead_code)]

use egb_core::equivariant::{construct_full_power, cyclic_permutation, ZpPersistenceModule};
use egb_core::field::{rational, CyclotomicNumber, Extended, Matrix, Rational};
use egb_core::persistence::{Barcode, FinitePersistenceModule, Interval};
use num_traits::Signed;

pub fn q(n: i64) -> Rational {
    rational(n, 1)
}

pub fn one(p: u32) -> CyclotomicNumber {
    CyclotomicNumber::one(p).unwrap()
}

pub fn beta(b: &Barcode) -> Extended {
    if b.infinite_count() > 0 {
        Extended::Infinity
    } else {
        Extended::Finite(b.longest_finite_bar())
    }
}

/// Every partial matching, including the rays, enumerated exhaustively.
pub fn brute_bottleneck(b: &Barcode, c: &Barcode) -> Extended {
    let bs: Vec<Interval> = b.expanded().into_iter().map(|x| x.0).collect();
    let cs: Vec<Interval> = c.expanded().into_iter().map(|x| x.0).collect();
    let half = |x: &Interval| match x.length() {
        Extended::Finite(l) => Extended::Finite(l / q(2)),
        Extended::Infinity => Extended::Infinity,
    };
    let pair = |x: &Interval, y: &Interval| {
        let db = Extended::Finite((&x.left - &y.left).abs());
        let dd = x.right.abs_diff(&y.right);
        db.max(dd)
    };
    fn go(
        i: usize,
        bs: &[Interval],
        cs: &[Interval],
        used: &mut Vec<bool>,
        half: &dyn Fn(&Interval) -> Extended,
        pair: &dyn Fn(&Interval, &Interval) -> Extended,
    ) -> Extended {
        if i == bs.len() {
            return cs
                .iter()
                .zip(used.iter())
                .filter(|(_, u)| !**u)
                .map(|(y, _)| half(y))
                .fold(Extended::zero(), Extended::max);
        }
        let mut best = half(&bs[i]).max(go(i + 1, bs, cs, used, half, pair));
        for j in 0..cs.len() {
            if !used[j] {
                used[j] = true;
                let cost = pair(&bs[i], &cs[j]).max(go(i + 1, bs, cs, used, half, pair));
                best = best.min(cost);
                used[j] = false;
            }
        }
        best
    }
    go(0, &bs, &cs, &mut vec![false; cs.len()], &half, &pair)
}

/// Seed module of `n` generators born at `birth` and dying at `death`.
pub fn block(n: usize, birth: i64, death: Option<i64>, unit: &CyclotomicNumber) -> FinitePersistenceModule<CyclotomicNumber> {
    match death {
        None => FinitePersistenceModule::new(vec![q(birth)], vec![0, n], vec![Matrix::zeros(n, 0, unit)], unit),
        Some(d) => FinitePersistenceModule::new(
            vec![q(birth), q(d)],
            vec![0, n, 0],
            vec![Matrix::zeros(n, 0, unit), Matrix::zeros(0, n, unit)],
            unit,
        ),
    }
    .unwrap()
}

pub fn full_power_fixtures(p: u32) -> Vec<ZpPersistenceModule<CyclotomicNumber>> {
    let unit = one(p);
    let n = p as usize;
    let mut out = Vec::new();
    let with = |seed: FinitePersistenceModule<CyclotomicNumber>, b: Matrix<CyclotomicNumber>| {
        let mut bs = vec![Matrix::zeros(0, 0, &unit)];
        bs.push(b);
        while bs.len() < seed.dims().len() {
            bs.push(Matrix::zeros(0, 0, &unit));
        }
        construct_full_power(&seed, &bs, p, None).unwrap()
    };
    // B a p²-cycle: A = B^p splits into p cycles of length p.
    out.push(with(block(n * n, 0, Some(10), &unit), cyclic_permutation(n * n, &unit)));
    out.push(with(block(n * n, 1, None, &unit), cyclic_permutation(n * n, &unit)));
    // B a p-cycle: A = id.
    out.push(with(block(n, 2, Some(9), &unit), cyclic_permutation(n, &unit)));
    // B = id.
    out.push(with(block(3, 0, Some(4), &unit), Matrix::identity(3, &unit)));
    // B a scalar primitive p-th root of unity: A = id.
    let z = CyclotomicNumber::zeta(p).unwrap();
    out.push(with(block(2, 3, Some(8), &unit), Matrix::identity(2, &unit).scale(&z)));
    let sums = vec![
        out[0].direct_sum(&out[2]).unwrap(),
        out[0].direct_sum(&out[1]).unwrap().direct_sum(&out[4]).unwrap(),
    ];
    out.extend(sums);
    out
}

