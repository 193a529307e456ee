use egb_core::field::{rational, Extended, Rational};
use egb_core::par::Execution;
use egb_core::persistence::{
    barcode_by_ranks, bottleneck, bottleneck_with, window_dim_from_barcode, Barcode, Interval,
    FinitePersistenceModule,
};
use egb_core::sample::{self, BarcodeShape};
use num_traits::Signed;

mod common;

use common::{brute_bottleneck, q};

fn scrambled_module(rng: &mut sample::SampleRng, b: &Barcode) -> FinitePersistenceModule<Rational> {
    let m = FinitePersistenceModule::from_barcode(b, &q(1));
    let changes: Vec<_> = m.dims().iter().map(|&d| sample::random_invertible(rng, d)).collect();
    m.change_basis(&changes).unwrap()
}

/// Points strictly between consecutive spectrum values, plus one on each side.
fn sample_points(spectrum: &[Rational]) -> Vec<Rational> {
    let mut pts = Vec::new();
    if let Some(first) = spectrum.first() {
        pts.push(first - q(1));
    }
    for w in spectrum.windows(2) {
        pts.push((&w[0] + &w[1]) / q(2));
    }
    if let Some(last) = spectrum.last() {
        pts.push(last + q(1));
    }
    pts
}

#[test]
fn rank_reconstruction_and_round_trip() {
    let mut rng = sample::rng(11);
    let shape = BarcodeShape { max_bars: 6, max_mult: 3, ..Default::default() };
    for _ in 0..60 {
        let b = sample::random_barcode(&mut rng, &shape);
        let m = scrambled_module(&mut rng, &b);
        assert_eq!(m.barcode(), b);
        assert_eq!(barcode_by_ranks(&m), b);
        let pts = sample_points(m.spectrum());
        for (i, s) in pts.iter().enumerate() {
            for t in &pts[i..] {
                let expected: u64 = b
                    .entries()
                    .iter()
                    .filter(|e| &e.bar.left < s && Extended::Finite(t.clone()) < e.bar.right)
                    .map(|e| e.mult)
                    .sum();
                assert_eq!(m.rank_between(s, t) as u64, expected);
            }
        }
    }
}

#[test]
fn bottleneck_matches_exhaustive_enumeration() {
    let mut rng = sample::rng(12);
    let shape = BarcodeShape { max_bars: 3, max_mult: 1, infinite_prob: 0.25, ..Default::default() };
    let mut checked = 0;
    while checked < 300 {
        let b = sample::random_barcode(&mut rng, &shape);
        let c = sample::random_barcode(&mut rng, &shape);
        if b.total_multiplicity() + c.total_multiplicity() > 5 {
            continue;
        }
        assert_eq!(bottleneck(&b, &c), brute_bottleneck(&b, &c), "{b} vs {c}");
        checked += 1;
    }
}

#[test]
fn bottleneck_is_a_pseudometric() {
    let mut rng = sample::rng(13);
    let shape = BarcodeShape {
        max_bars: 4,
        infinite_prob: 0.0,
        degrees: vec![Some(0), Some(1)],
        ..Default::default()
    };
    for _ in 0..100 {
        let a = sample::random_barcode(&mut rng, &shape);
        let b = sample::random_barcode(&mut rng, &shape);
        let c = sample::random_barcode(&mut rng, &shape);
        let ab = bottleneck(&a, &b);
        assert_eq!(bottleneck(&a, &a), Extended::zero());
        assert_eq!(ab, bottleneck(&b, &a));
        assert_eq!(ab, bottleneck_with(&a, &b, Execution::Parallel));
        let (Extended::Finite(x), Extended::Finite(y)) = (bottleneck(&a, &c), bottleneck(&c, &b))
        else {
            unreachable!("finite barcodes")
        };
        assert!(ab <= Extended::Finite(x + y));
    }
}

#[test]
fn multiplicity_stability() {
    let mut rng = sample::rng(14);
    let shape = BarcodeShape { max_bars: 6, max_mult: 3, den: 4, ..Default::default() };
    let mut hits = 0;
    for _ in 0..400 {
        let b = sample::random_barcode(&mut rng, &shape);
        let c_amt = rational(rng_range(&mut rng, 1, 4), 4);
        let c = sample::perturb_barcode(&mut rng, &b, &c_amt, 5);
        assert!(bottleneck(&b, &c) < Extended::Finite(c_amt.clone()));
        let left = sample::grid_rational(&mut rng, -1, 8, 4);
        let len = &c_amt * q(4) + sample::grid_rational(&mut rng, 0, 6, 4) + rational(1, 8);
        let i = Interval::finite(left.clone(), &left + len).unwrap();
        let l = b.multiplicity(&i);
        let i2 = i.shrink(&(&c_amt * q(2))).unwrap();
        if l != b.multiplicity(&i2) {
            continue;
        }
        hits += 1;
        assert_eq!(c.multiplicity(&i.shrink(&c_amt).unwrap()), l);
    }
    assert!(hits > 100);
}

fn rng_range(rng: &mut sample::SampleRng, lo: i64, hi: i64) -> i64 {
    use rand::Rng;
    rng.gen_range(lo..=hi)
}

#[test]
fn longest_finite_bar_is_two_lipschitz() {
    let mut rng = sample::rng(15);
    let shape = BarcodeShape { max_bars: 5, infinite_prob: 0.0, ..Default::default() };
    for _ in 0..200 {
        let b = sample::random_barcode(&mut rng, &shape);
        let c = sample::random_barcode(&mut rng, &shape);
        let Extended::Finite(d) = bottleneck(&b, &c) else { unreachable!() };
        let diff = (b.longest_finite_bar() - c.longest_finite_bar()).abs();
        assert!(diff <= d * q(2));
    }
}

#[test]
fn longest_finite_bar_matches_linear_scan() {
    let mut rng = sample::rng(16);
    for _ in 0..100 {
        let b = sample::random_barcode(&mut rng, &BarcodeShape::default());
        let mut best = q(0);
        for (bar, _) in b.expanded() {
            if let Extended::Finite(d) = &bar.right {
                let l = d - &bar.left;
                if l > best {
                    best = l;
                }
            }
        }
        assert_eq!(b.longest_finite_bar(), best);
    }
}

#[test]
fn complex_barcode_agrees_with_window_homology() {
    let mut rng = sample::rng(17);
    let shape = BarcodeShape {
        max_bars: 5,
        degrees: vec![Some(0), Some(1), Some(2)],
        ..Default::default()
    };
    for _ in 0..40 {
        let b = sample::random_barcode(&mut rng, &shape);
        let c = sample::random_complex(&mut rng, &b);
        let bc = c.barcode();
        assert_eq!(bc, b);
        let pts = sample_points(&c.spectrum());
        for (i, a) in pts.iter().enumerate() {
            for bb in &pts[i + 1..] {
                for r in -1..=4 {
                    let h = c.window_homology(a, bb, r).unwrap();
                    assert_eq!(h.dim as u64, window_dim_from_barcode(&bc, a, bb, r));
                }
            }
        }
    }
}

#[test]
fn long_exact_sequence_holds() {
    let mut rng = sample::rng(18);
    let shape = BarcodeShape {
        max_bars: 5,
        degrees: vec![Some(0), Some(1)],
        ..Default::default()
    };
    for _ in 0..30 {
        let b = sample::random_barcode(&mut rng, &shape);
        let c = sample::random_complex(&mut rng, &b);
        let pts = sample_points(&c.spectrum());
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                for k in j + 1..pts.len() {
                    assert!(c.les_check(&pts[i], &pts[j], &pts[k]).unwrap());
                }
            }
        }
    }
}
