use num_traits::{Signed, Zero};

use super::barcode::Barcode;
use super::matching::BipartiteGraph;
use crate::field::{Extended, Rational};
use crate::par::Execution;

/// Bottleneck distance between barcodes.
///
/// Bars only match bars of the same degree; the result is the maximum over
/// degrees. A mismatch in the number of infinite bars of some degree gives
/// `+∞`.
pub fn bottleneck(b: &Barcode, c: &Barcode) -> Extended {
    bottleneck_with(b, c, Execution::Sequential)
}

pub fn bottleneck_with(b: &Barcode, c: &Barcode, exec: Execution) -> Extended {
    let mut degrees = b.degrees();
    degrees.extend(c.degrees());
    degrees.sort();
    degrees.dedup();
    exec.map(&degrees, |&d| single_degree(&b.in_degree(d), &c.in_degree(d)))
        .into_iter()
        .fold(Extended::zero(), Extended::max)
}

fn single_degree(b: &Barcode, c: &Barcode) -> Extended {
    let (b_inf, b_fin) = split(b);
    let (c_inf, c_fin) = split(c);
    if b_inf.len() != c_inf.len() {
        return Extended::Infinity;
    }
    // Rays match optimally in sorted order of births.
    let ray_cost = b_inf
        .iter()
        .zip(&c_inf)
        .map(|(x, y)| (x - y).abs())
        .max()
        .unwrap_or_else(Rational::zero);
    let fin = finite_distance(&b_fin, &c_fin);
    Extended::Finite(ray_cost.max(fin))
}

fn split(b: &Barcode) -> (Vec<Rational>, Vec<(Rational, Rational)>) {
    let mut rays = Vec::new();
    let mut fin = Vec::new();
    for (bar, _) in b.expanded() {
        match bar.right {
            Extended::Infinity => rays.push(bar.left),
            Extended::Finite(d) => fin.push((bar.left, d)),
        }
    }
    rays.sort();
    (rays, fin)
}

fn half_length(x: &(Rational, Rational)) -> Rational {
    (&x.1 - &x.0) / Rational::from_integer(2.into())
}

fn pair_cost(x: &(Rational, Rational), y: &(Rational, Rational)) -> Rational {
    (&x.0 - &y.0).abs().max((&x.1 - &y.1).abs())
}

/// Smallest candidate δ that admits a δ-matching of the finite parts.
fn finite_distance(b: &[(Rational, Rational)], c: &[(Rational, Rational)]) -> Rational {
    let mut cands: Vec<Rational> = vec![Rational::zero()];
    cands.extend(b.iter().chain(c).map(half_length));
    for x in b {
        for y in c {
            cands.push(pair_cost(x, y));
        }
    }
    cands.sort();
    cands.dedup();
    // Feasibility is monotone in δ and the largest candidate always works.
    let (mut lo, mut hi) = (0usize, cands.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if feasible(b, c, &cands[mid]) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    cands[lo].clone()
}

/// Perfect matching on `B ∪ diag(C)` versus `C ∪ diag(B)`.
fn feasible(b: &[(Rational, Rational)], c: &[(Rational, Rational)], delta: &Rational) -> bool {
    let (n, m) = (b.len(), c.len());
    let mut g = BipartiteGraph::new(n + m, m + n);
    for (i, x) in b.iter().enumerate() {
        for (j, y) in c.iter().enumerate() {
            if &pair_cost(x, y) <= delta {
                g.add_edge(i, j);
            }
        }
        if &half_length(x) <= delta {
            g.add_edge(i, m + i);
        }
    }
    for (j, y) in c.iter().enumerate() {
        if &half_length(y) <= delta {
            g.add_edge(n + j, j);
        }
        for i in 0..n {
            g.add_edge(n + j, m + i);
        }
    }
    g.has_perfect_matching()
}

/// Whether `b` and `c` admit a `δ`-matching, checked directly.
pub fn admits_matching(b: &Barcode, c: &Barcode, delta: &Rational) -> bool {
    bottleneck(b, c) <= Extended::Finite(delta.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rational;
    use crate::persistence::barcode::Interval;

    fn iv(l: i64, r: i64) -> Interval {
        Interval::finite(rational(l, 1), rational(r, 1)).unwrap()
    }

    #[test]
    fn examples() {
        let b = Barcode::from_bars([(iv(0, 2), 1)]);
        let c = Barcode::from_bars([(iv(0, 1), 1)]);
        assert_eq!(bottleneck(&b, &b), Extended::zero());
        assert_eq!(bottleneck(&b, &c), Extended::Finite(rational(1, 1)));
        let ray = Barcode::from_bars([(Interval::new(rational(0, 1), Extended::Infinity).unwrap(), 1)]);
        assert_eq!(bottleneck(&ray, &Barcode::new()), Extended::Infinity);
        assert_eq!(bottleneck(&Barcode::new(), &Barcode::new()), Extended::zero());
    }

    #[test]
    fn degrees_do_not_mix() {
        let b = Barcode::from_bars([(iv(0, 10), 1)]).with_degree(Some(0));
        let c = Barcode::from_bars([(iv(0, 10), 1)]).with_degree(Some(1));
        assert_eq!(bottleneck(&b, &c), Extended::Finite(rational(5, 1)));
        assert_eq!(
            bottleneck_with(&b, &c, Execution::Parallel),
            bottleneck_with(&b, &c, Execution::Sequential)
        );
    }

    #[test]
    fn rays_sorted() {
        let ray = |x| Interval::new(rational(x, 1), Extended::Infinity).unwrap();
        let b = Barcode::from_bars([(ray(0), 1), (ray(10), 1)]);
        let c = Barcode::from_bars([(ray(9), 1), (ray(1), 1)]);
        assert_eq!(bottleneck(&b, &c), Extended::Finite(rational(1, 1)));
        assert!(admits_matching(&b, &c, &rational(1, 1)));
        assert!(!admits_matching(&b, &c, &rational(1, 2)));
    }
}
