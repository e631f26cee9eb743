//! Relation quantales against a plain boolean-matrix model.

use qlab_core::quantale::{
    check_axioms, classify, partial_units, projections, two_sided, Quantale,
};
use qlab_core::{Config, Lattice, RelQuantale};

type Matrix = Vec<Vec<bool>>;

fn decode(n: usize, r: usize) -> Matrix {
    (0..n).map(|z| (0..n).map(|x| r >> (z * n + x) & 1 == 1).collect()).collect()
}

fn compose(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    (0..n)
        .map(|z| (0..n).map(|x| (0..n).any(|y| a[z][y] && b[y][x])).collect())
        .collect()
}

fn converse(a: &Matrix) -> Matrix {
    let n = a.len();
    (0..n).map(|z| (0..n).map(|x| a[x][z]).collect()).collect()
}

fn is_per(a: &Matrix) -> bool {
    let n = a.len();
    let sym = (0..n).all(|z| (0..n).all(|x| a[z][x] == a[x][z]));
    let trans = (0..n).all(|z| (0..n).all(|y| (0..n).all(|x| !(a[z][y] && a[y][x]) || a[z][x])));
    sym && trans
}

fn is_partial_bijection(a: &Matrix) -> bool {
    let n = a.len();
    (0..n).all(|z| a[z].iter().filter(|&&v| v).count() <= 1)
        && (0..n).all(|x| (0..n).filter(|&z| a[z][x]).count() <= 1)
}

#[test]
fn operations_match_matrices() {
    for n in 1..=2 {
        let q = RelQuantale::new(n).unwrap();
        for a in q.elements() {
            assert_eq!(decode(n, q.star(a)), converse(&decode(n, a)));
            for b in q.elements() {
                assert_eq!(decode(n, q.mul(a, b)), compose(&decode(n, a), &decode(n, b)));
            }
        }
    }
}

#[test]
fn projection_census() {
    let cfg = Config::default();
    let mut counts = Vec::new();
    for n in 1..=3 {
        let q = RelQuantale::new(n).unwrap();
        let brute: Vec<usize> = (0..1 << (n * n))
            .filter(|&r| {
                let m = decode(n, r);
                compose(&m, &m) == m && converse(&m) == m
            })
            .collect();
        let pers: Vec<usize> = (0..1 << (n * n)).filter(|&r| is_per(&decode(n, r))).collect();
        assert_eq!(brute, pers);
        assert_eq!(projections(&q, &cfg).unwrap(), brute);
        counts.push(brute.len());
    }
    assert_eq!(counts, [2, 5, 15]);
}

#[test]
fn partial_units_are_partial_bijections() {
    let cfg = Config::default();
    let mut counts = Vec::new();
    for n in 1..=3 {
        let q = RelQuantale::new(n).unwrap();
        let brute: Vec<usize> = (0..1 << (n * n)).filter(|&r| is_partial_bijection(&decode(n, r))).collect();
        assert_eq!(partial_units(&q, &cfg).unwrap(), brute);
        counts.push(brute.len());
    }
    assert_eq!(counts, [2, 7, 34]);
}

#[test]
fn two_sided_relations_are_bottom_and_top() {
    let cfg = Config::default();
    for n in 1..=3 {
        let q = RelQuantale::new(n).unwrap();
        assert_eq!(two_sided(&q, &cfg).unwrap(), vec![q.bottom(), q.top()]);
    }
}

#[test]
fn relation_quantales_are_in_every_class() {
    let cfg = Config::default();
    for n in 1..=3 {
        let q = RelQuantale::new(n).unwrap();
        assert!(check_axioms(&q, &cfg).unwrap().passed(), "rel:{n}");
        let r = classify(&q, &cfg).unwrap();
        for (name, flag) in r.flags() {
            assert!(flag.holds(), "rel:{n} {name}");
        }
    }
}
