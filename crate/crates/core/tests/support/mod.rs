//! Reference model for the integration tests, written independently of the
//! library: numbers are `(a + b√2) + i(c + d√2)` with rational a..d, matrices
//! are plain row-major vectors, and terms are evaluated by a separate fold.
#![allow(dead_code)]

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use sqrtpi::exactnum::Cyclo;
use sqrtpi::lang::{Prim, Typed, TypedNode, ValueType};
use sqrtpi::semantics::ExactMatrix;

/// a + b√2
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct R2 {
    a: BigRational,
    b: BigRational,
}

impl R2 {
    fn new(a: BigRational, b: BigRational) -> R2 {
        R2 { a, b }
    }
    fn zero() -> R2 {
        R2::new(BigRational::zero(), BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl Add for &R2 {
    type Output = R2;
    fn add(self, o: &R2) -> R2 {
        R2::new(&self.a + &o.a, &self.b + &o.b)
    }
}

impl Mul for &R2 {
    type Output = R2;
    fn mul(self, o: &R2) -> R2 {
        let two = BigRational::from_integer(BigInt::from(2));
        R2::new(&self.a * &o.a + two * &self.b * &o.b, &self.a * &o.b + &self.b * &o.a)
    }
}

impl Neg for &R2 {
    type Output = R2;
    fn neg(self) -> R2 {
        R2::new(-&self.a, -&self.b)
    }
}

/// A complex number re + i·im.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Num {
    re: R2,
    im: R2,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Num {
    pub fn zero() -> Num {
        Num { re: R2::zero(), im: R2::zero() }
    }
    pub fn one() -> Num {
        Num::int(1)
    }
    pub fn int(n: i64) -> Num {
        Num::rat(n, 1, 0, 1)
    }
    /// (p/q) + i (r/s)
    pub fn rat(p: i64, q: i64, r: i64, s: i64) -> Num {
        Num { re: R2::new(rat(p, q), BigRational::zero()), im: R2::new(rat(r, s), BigRational::zero()) }
    }
    pub fn i() -> Num {
        Num::rat(0, 1, 1, 1)
    }
    /// 1/√2
    pub fn inv_sqrt2() -> Num {
        Num { re: R2::new(BigRational::zero(), rat(1, 2)), im: R2::zero() }
    }
    /// e^{iπ/4} = (1 + i)/√2
    pub fn omega() -> Num {
        let h = R2::new(BigRational::zero(), rat(1, 2));
        Num { re: h.clone(), im: h }
    }
    pub fn omega_pow(k: i64) -> Num {
        let mut x = Num::one();
        for _ in 0..k.rem_euclid(8) {
            x = &x * &Num::omega();
        }
        x
    }
    pub fn conj(&self) -> Num {
        Num { re: self.re.clone(), im: -&self.im }
    }
    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    pub fn scale(&self, q: BigRational) -> Num {
        let q = R2::new(q, BigRational::zero());
        Num { re: &self.re * &q, im: &self.im * &q }
    }
}

impl Add for &Num {
    type Output = Num;
    fn add(self, o: &Num) -> Num {
        Num { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl Sub for &Num {
    type Output = Num;
    fn sub(self, o: &Num) -> Num {
        Num { re: &self.re + &-&o.re, im: &self.im + &-&o.im }
    }
}

impl Mul for &Num {
    type Output = Num;
    fn mul(self, o: &Num) -> Num {
        let re = &(&self.re * &o.re) + &-&(&self.im * &o.im);
        let im = &(&self.re * &o.im) + &(&self.im * &o.re);
        Num { re, im }
    }
}

/// Library scalar to reference scalar: c0 + c1 ω + c2 ω² + c3 ω³.
pub fn num_of(c: &Cyclo) -> Num {
    let mut acc = Num::zero();
    for (k, d) in c.coeffs().iter().enumerate() {
        let q = BigRational::new(d.numerator().clone(), BigInt::one() << d.log_den());
        acc = &acc + &Num::omega_pow(k as i64).scale(q);
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub e: Vec<Num>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, e: vec![Num::zero(); rows * cols] }
    }
    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.e[i * n + i] = Num::one();
        }
        m
    }
    pub fn from_rows(rows: Vec<Vec<Num>>) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        Mat { rows: r, cols: c, e: rows.into_iter().flatten().collect() }
    }
    /// Integer entries times a common factor.
    pub fn ints(rows: &[&[i64]], factor: Num) -> Mat {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| &Num::int(x) * &factor).collect()).collect())
    }
    pub fn at(&self, r: usize, c: usize) -> &Num {
        &self.e[r * self.cols + c]
    }
    pub fn set(&mut self, r: usize, c: usize, x: Num) {
        let cols = self.cols;
        self.e[r * cols + c] = x;
    }
    /// The permutation sending basis vector `j` to `p[j]`.
    pub fn perm(p: &[usize]) -> Mat {
        let mut m = Mat::zeros(p.len(), p.len());
        for (j, &i) in p.iter().enumerate() {
            m.set(i, j, Num::one());
        }
        m
    }
    /// Ordinary product `self · o`.
    pub fn dot(&self, o: &Mat) -> Mat {
        assert_eq!(self.cols, o.rows);
        let mut m = Mat::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let x = &m.e[i * o.cols + j] + &(a * o.at(k, j));
                    m.e[i * o.cols + j] = x;
                }
            }
        }
        m
    }
    pub fn kron(&self, o: &Mat) -> Mat {
        let mut m = Mat::zeros(self.rows * o.rows, self.cols * o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                for k in 0..o.rows {
                    for l in 0..o.cols {
                        m.set(i * o.rows + k, j * o.cols + l, self.at(i, j) * o.at(k, l));
                    }
                }
            }
        }
        m
    }
    pub fn oplus(&self, o: &Mat) -> Mat {
        let mut m = Mat::zeros(self.rows + o.rows, self.cols + o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.at(i, j).clone());
            }
        }
        for i in 0..o.rows {
            for j in 0..o.cols {
                m.set(self.rows + i, self.cols + j, o.at(i, j).clone());
            }
        }
        m
    }
    pub fn dagger(&self) -> Mat {
        let mut m = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.at(i, j).conj());
            }
        }
        m
    }
    pub fn times(&self, x: &Num) -> Mat {
        Mat { rows: self.rows, cols: self.cols, e: self.e.iter().map(|y| x * y).collect() }
    }
    pub fn is_identity(&self) -> bool {
        *self == Mat::identity(self.rows)
    }
    pub fn is_unitary(&self) -> bool {
        self.rows == self.cols && self.dot(&self.dagger()).is_identity()
    }
    pub fn pow(&self, n: usize) -> Mat {
        (0..n).fold(Mat::identity(self.rows), |acc, _| acc.dot(self))
    }
}

pub fn mat_of(m: &ExactMatrix) -> Mat {
    Mat { rows: m.rows(), cols: m.cols(), e: m.entries().iter().map(num_of).collect() }
}

/// k in 0..8 with a = ω^k b, if any.
pub fn phase_between(a: &Mat, b: &Mat) -> Option<u8> {
    (0..8u8).find(|&k| *a == b.times(&Num::omega_pow(k as i64)))
}

// ---- printed gate matrices

pub fn x() -> Mat {
    Mat::ints(&[&[0, 1], &[1, 0]], Num::one())
}
pub fn z() -> Mat {
    Mat::ints(&[&[1, 0], &[0, -1]], Num::one())
}
pub fn s() -> Mat {
    Mat::from_rows(vec![vec![Num::one(), Num::zero()], vec![Num::zero(), Num::i()]])
}
pub fn t() -> Mat {
    let e = &Num::rat(1, 1, 1, 1) * &Num::inv_sqrt2();
    Mat::from_rows(vec![vec![Num::one(), Num::zero()], vec![Num::zero(), e]])
}
pub fn h() -> Mat {
    Mat::ints(&[&[1, 1], &[1, -1]], Num::inv_sqrt2())
}
/// H · diag(-1, i) · H
pub fn v() -> Mat {
    let d = Mat::from_rows(vec![vec![Num::int(-1), Num::zero()], vec![Num::zero(), Num::i()]]);
    h().dot(&d).dot(&h())
}
pub fn cx() -> Mat {
    Mat::ints(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 0, 1], &[0, 0, 1, 0]], Num::one())
}
fn csx_like(a: Num, b: Num) -> Mat {
    let (o, z) = (Num::one(), Num::zero());
    let half = Num::rat(1, 2, 0, 1);
    let (a, b) = (&a * &half, &b * &half);
    Mat::from_rows(vec![
        vec![o.clone(), z.clone(), z.clone(), z.clone()],
        vec![z.clone(), o, z.clone(), z.clone()],
        vec![z.clone(), z.clone(), a.clone(), b.clone()],
        vec![z.clone(), z, b, a],
    ])
}
/// Printed CSX: lower block ½[[-1+i, -1-i], [-1-i, -1+i]].
pub fn csx() -> Mat {
    csx_like(Num::rat(-1, 1, 1, 1), Num::rat(-1, 1, -1, 1))
}
pub fn csxdg() -> Mat {
    csx_like(Num::rat(-1, 1, -1, 1), Num::rat(-1, 1, 1, 1))
}
pub fn toffoli() -> Mat {
    Mat::perm(&[0, 1, 2, 3, 4, 5, 7, 6])
}
pub fn controlled(u: &Mat) -> Mat {
    Mat::identity(u.rows).oplus(u)
}

/// `g` on `wires` of an `n`-qubit register, wire 0 most significant, built
/// entry by entry from basis states.
pub fn on_wires(g: &Mat, wires: &[usize], n: usize) -> Mat {
    let dim = 1usize << n;
    let bit = |x: usize, w: usize| (x >> (n - 1 - w)) & 1;
    let sub = |x: usize| wires.iter().fold(0, |acc, &w| (acc << 1) | bit(x, w));
    let rest = |x: usize| (0..n).filter(|w| !wires.contains(w)).fold(0, |acc, w| (acc << 1) | bit(x, w));
    let mut m = Mat::zeros(dim, dim);
    for r in 0..dim {
        for c in 0..dim {
            if rest(r) == rest(c) {
                m.set(r, c, g.at(sub(r), sub(c)).clone());
            }
        }
    }
    m
}

/// Conjugate `m ⊕ I` by the permutation that sends component i to map[i].
pub fn embed(m: &Mat, dim: usize, map: &[usize]) -> Mat {
    let mut p: Vec<usize> = map.to_vec();
    p.extend((0..dim).filter(|j| !map.contains(j)));
    let big = m.oplus(&Mat::identity(dim - m.rows));
    let pm = Mat::perm(&p);
    pm.dot(&big).dot(&pm.dagger())
}

// ---- an evaluator of typed terms, separate from the library's

fn dim(t: &ValueType) -> usize {
    match t {
        ValueType::Zero => 0,
        ValueType::One => 1,
        ValueType::Sum(a, b) => dim(a) + dim(b),
        ValueType::Prod(a, b) => dim(a) * dim(b),
    }
}

fn prim(p: Prim, src: &ValueType) -> Mat {
    match (p, src) {
        (Prim::SwapPlus, ValueType::Sum(a, b)) => {
            let (m, n) = (dim(a), dim(b));
            // first block of m moves below the n others
            Mat::perm(&(0..m + n).map(|j| if j < m { j + n } else { j - m }).collect::<Vec<_>>())
        }
        (Prim::SwapTimes, ValueType::Prod(a, b)) => {
            let (m, n) = (dim(a), dim(b));
            Mat::perm(&(0..m * n).map(|j| (j % n) * m + j / n).collect::<Vec<_>>())
        }
        (Prim::V, _) => v(),
        (Prim::Vi, _) => v().dagger(),
        (Prim::W, _) => Mat::from_rows(vec![vec![Num::omega()]]),
        (Prim::Wi, _) => Mat::from_rows(vec![vec![Num::omega().conj()]]),
        _ => Mat::identity(dim(src)),
    }
}

pub fn eval(t: &Typed) -> Mat {
    match &t.node {
        TypedNode::Prim(p) => prim(*p, &t.src),
        TypedNode::Seq(a, b) => eval(b).dot(&eval(a)),
        TypedNode::Sum(a, b) => eval(a).oplus(&eval(b)),
        TypedNode::Prod(a, b) => eval(a).kron(&eval(b)),
    }
}

#[test]
fn reference_model_sanity() {
    let w = Num::omega();
    assert_eq!(Num::omega_pow(8), Num::one());
    assert_eq!(&w * &w, Num::i());
    assert_eq!(&Num::inv_sqrt2() * &Num::inv_sqrt2(), Num::rat(1, 2, 0, 1));
    let (a, b) = (Num::rat(-1, 2, 1, 2), Num::rat(-1, 2, -1, 2));
    assert_eq!(v(), Mat::from_rows(vec![vec![a.clone(), b.clone()], vec![b, a]]));
    assert_eq!(v().dot(&v()), x());
    assert!(on_wires(&cx(), &[0, 1], 2) == cx());
}
