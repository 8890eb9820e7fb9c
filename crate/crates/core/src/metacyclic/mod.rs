//! Metacyclic groups `M(k,l,m,n) = <x, y | y^m = x^l, x^n = 1, x^y = x^k>`.
//!
//! Elements are written canonically as `y^j x^i` with `0 <= j < m`,
//! `0 <= i < n`, and indexed lexicographically by `(j, i)`, i.e. as
//! `j * n + i`.

mod iso;
mod table;

pub use iso::is_isomorphic;
pub use table::CayleyTable;

use std::fmt;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};

/// Validated presentation parameters. `k` and `l` are stored reduced into `[0, n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct MetacyclicParams {
    k: usize,
    l: usize,
    m: usize,
    n: usize,
}

pub(crate) fn pow_mod(base: usize, exp: usize, modulus: usize) -> usize {
    if modulus == 1 {
        return 0;
    }
    let (mut b, mut e, mut acc) = (base % modulus, exp, 1usize);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % modulus;
        }
        b = b * b % modulus;
        e >>= 1;
    }
    acc
}

impl MetacyclicParams {
    /// Checks `gcd(n,k) = 1`, `k^m = 1 (mod n)` and `l(k-1) = 0 (mod n)`.
    pub fn validate(k: i64, l: i64, m: i64, n: i64) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParams(format!("n must be positive, got {n}")));
        }
        if m < 1 {
            return Err(Error::InvalidParams(format!("m must be positive, got {m}")));
        }
        let kr = k.rem_euclid(n);
        let lr = l.rem_euclid(n);
        let g = kr.gcd(&n);
        if g != 1 {
            return Err(Error::GcdViolation { n, k, gcd: g });
        }
        let residue = pow_mod(kr as usize, m as usize, n as usize) as i64;
        if residue != 1 % n {
            return Err(Error::OrderCongruenceViolation { k, m, n, residue });
        }
        let twist = (lr * ((kr - 1).rem_euclid(n))) % n;
        if twist != 0 {
            return Err(Error::TwistCongruenceViolation { k, l, n, residue: twist });
        }
        Ok(MetacyclicParams { k: kr as usize, l: lr as usize, m: m as usize, n: n as usize })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.n * self.m
    }

    /// The dihedral group of degree `d` (order `2d`), `M(-1, 0, 2, d)`.
    pub fn dihedral(d: usize) -> Result<Self> {
        Self::validate(-1, 0, 2, d as i64)
    }

    /// The dicyclic group `Dic_l = M(-1, l, 2, 2l)` of order `4l`.
    pub fn dicyclic(l: usize) -> Result<Self> {
        Self::validate(-1, l as i64, 2, 2 * l as i64)
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        Self::validate(1, 0, 1, n as i64)
    }

    /// Every valid canonical `(k, l, m, n)` with `n * m <= max_order`.
    pub fn enumerate(max_order: usize) -> Vec<Self> {
        let mut out = Vec::new();
        for n in 1..=max_order {
            for m in 1..=max_order / n {
                for k in 0..n {
                    for l in 0..n {
                        if let Ok(p) = Self::validate(k as i64, l as i64, m as i64, n as i64) {
                            out.push(p);
                        }
                    }
                }
            }
        }
        out
    }

    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.m).flat_map(move |j| (0..self.n).map(move |i| GroupElement { j, i }))
    }

    pub fn index(&self, g: GroupElement) -> usize {
        g.j * self.n + g.i
    }

    pub fn element(&self, index: usize) -> GroupElement {
        GroupElement { j: index / self.n, i: index % self.n }
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement { j: 0, i: 0 }
    }

    pub fn x(&self) -> GroupElement {
        GroupElement { j: 0, i: 1 % self.n }
    }

    /// `y` itself, reduced canonically (when `m = 1`, `y = x^l`).
    pub fn y(&self) -> GroupElement {
        if self.m == 1 {
            GroupElement { j: 0, i: self.l }
        } else {
            GroupElement { j: 1, i: 0 }
        }
    }

    /// `(y^j1 x^i1)(y^j2 x^i2) = y^(j1+j2) x^(i1 k^j2 + i2)`, folding `y^m = x^l`.
    pub fn multiply(&self, g1: GroupElement, g2: GroupElement) -> GroupElement {
        let n = self.n;
        let mut i = (g1.i * pow_mod(self.k, g2.j, n) + g2.i) % n;
        let mut j = g1.j + g2.j;
        if j >= self.m {
            j -= self.m;
            i = (i + self.l) % n;
        }
        GroupElement { j, i }
    }

    pub fn inverse(&self, g: GroupElement) -> GroupElement {
        let n = self.n;
        let y_inv = if g.j == 0 {
            self.identity()
        } else {
            GroupElement { j: self.m - g.j, i: (n - self.l) % n }
        };
        self.multiply(GroupElement { j: 0, i: (n - g.i) % n }, y_inv)
    }

    pub fn pow(&self, g: GroupElement, e: usize) -> GroupElement {
        (0..e).fold(self.identity(), |acc, _| self.multiply(acc, g))
    }

    /// The full `nm x nm` multiplication table.
    pub fn cayley(&self) -> CayleyTable {
        let order = self.order();
        let mut table = Vec::with_capacity(order * order);
        for a in self.elements() {
            for b in self.elements() {
                table.push(self.index(self.multiply(a, b)));
            }
        }
        let names = self.elements().map(|g| g.to_string()).collect();
        CayleyTable::new(order, table)
            .expect("metacyclic multiplication is a Latin square")
            .with_name(self.to_string())
            .with_element_names(names)
    }
}

impl fmt::Display for MetacyclicParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M({},{},{},{})", self.k, self.l, self.m, self.n)
    }
}

/// The element `y^j x^i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct GroupElement {
    pub j: usize,
    pub i: usize,
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.j, self.i) {
            (0, 0) => write!(f, "e"),
            (0, i) => write!(f, "x^{i}"),
            (j, 0) => write!(f, "y^{j}"),
            (j, i) => write!(f, "y^{j}x^{i}"),
        }
    }
}
