//! Exact arithmetic in the cyclotomic integers `Z[zeta_N]`.
//!
//! Elements are kept in the power basis `1, zeta, ..., zeta^(phi(N)-1)`,
//! always reduced modulo the `N`-th cyclotomic polynomial, so structural
//! equality of coefficient vectors is equality of algebraic numbers.
//!
//! Character values are sums of roots of unity, which are sparse in the
//! exponent representation but dense in the power basis. [`RootSum`] keeps
//! that sparse, unreduced form for bulk computations; it is reduced to a
//! canonical [`Cyclotomic`] only when a value is compared or reported.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Divides `num` by the monic polynomial `den` (coefficients low to high).
/// Returns `(quotient, remainder)`.
pub fn poly_divrem(num: &[i64], den: &[i64]) -> (Vec<i64>, Vec<i64>) {
    let dd = den.len() - 1;
    assert_eq!(den[dd], 1, "divisor must be monic");
    let mut rem = num.to_vec();
    if rem.len() <= dd {
        return (vec![0], rem);
    }
    let mut quot = vec![0i64; rem.len() - dd];
    for i in (dd..rem.len()).rev() {
        let c = rem[i];
        if c == 0 {
            continue;
        }
        quot[i - dd] = c;
        for (j, &d) in den.iter().enumerate() {
            rem[i - dd + j] -= c * d;
        }
    }
    rem.truncate(dd.max(1));
    (quot, rem)
}

pub fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn trim(mut p: Vec<i64>) -> Vec<i64> {
    while p.len() > 1 && *p.last().unwrap() == 0 {
        p.pop();
    }
    p
}

/// The `N`-th cyclotomic polynomial, coefficients from the constant term up.
///
/// Computed by the recursion `Phi_N = (x^N - 1) / prod_{d | N, d < N} Phi_d`.
pub fn cyclotomic_polynomial(n: u32) -> Vec<i64> {
    assert!(n >= 1, "cyclotomic_polynomial: N must be positive");
    let mut memo: HashMap<u32, Vec<i64>> = HashMap::new();
    cyclotomic_memo(n, &mut memo)
}

fn cyclotomic_memo(n: u32, memo: &mut HashMap<u32, Vec<i64>>) -> Vec<i64> {
    if let Some(p) = memo.get(&n) {
        return p.clone();
    }
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let phi_d = cyclotomic_memo(d, memo);
            let (q, r) = poly_divrem(&num, &phi_d);
            debug_assert!(r.iter().all(|&c| c == 0));
            num = trim(q);
        }
    }
    memo.insert(n, num.clone());
    num
}

pub fn euler_phi(n: u32) -> u32 {
    (1..=n).filter(|&j| j.gcd(&n) == 1).count() as u32
}

/// Shared data for arithmetic in `Z[zeta_N]`.
#[derive(Debug)]
pub struct CycloContext {
    order: u32,
    phi: usize,
    minimal_poly: Vec<i64>,
    /// `powers[e]` is the canonical form of `zeta^e` for `0 <= e < N`.
    powers: Vec<Vec<i64>>,
    /// The nonzero entries of each `powers[e]`.
    sparse_powers: Vec<Vec<(usize, i64)>>,
}

impl CycloContext {
    fn build(order: u32) -> Self {
        let minimal_poly = cyclotomic_polynomial(order);
        let phi = minimal_poly.len() - 1;
        let mut powers = Vec::with_capacity(order as usize);
        let mut cur = vec![0i64; phi];
        cur[0] = 1;
        for _ in 0..order {
            powers.push(cur.clone());
            // multiply by zeta and fold the x^phi term back using the monic relation
            let top = cur[phi - 1];
            for i in (1..phi).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for i in 0..phi {
                    cur[i] -= top * minimal_poly[i];
                }
            }
        }
        let sparse_powers = powers
            .iter()
            .map(|p| p.iter().enumerate().filter(|t| *t.1 != 0).map(|(i, &c)| (i, c)).collect())
            .collect();
        CycloContext { order, phi, minimal_poly, powers, sparse_powers }
    }

    /// Order `N` of the primitive root `zeta`.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn phi(&self) -> usize {
        self.phi
    }

    pub fn minimal_poly(&self) -> &[i64] {
        &self.minimal_poly
    }

    fn power(&self, e: u32) -> &[i64] {
        &self.powers[(e % self.order) as usize]
    }

    fn add_power(&self, coeffs: &mut [i64], e: u32, c: i64) {
        for &(i, p) in &self.sparse_powers[(e % self.order) as usize] {
            coeffs[i] += c * p;
        }
    }
}

static CONTEXTS: OnceLock<RwLock<HashMap<u32, Arc<CycloContext>>>> = OnceLock::new();

/// Returns the (cached) context for `Z[zeta_N]`.
pub fn context(order: u32) -> Arc<CycloContext> {
    assert!(order >= 1, "cyclotomic order must be positive");
    let table = CONTEXTS.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(ctx) = table.read().unwrap().get(&order) {
        return Arc::clone(ctx);
    }
    let built = Arc::new(CycloContext::build(order));
    let mut guard = table.write().unwrap();
    Arc::clone(guard.entry(order).or_insert(built))
}

/// A reduced rational number, used for inner products and fractional parts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalScalar(Ratio<i64>);

impl RationalScalar {
    pub fn new(numerator: i64, denominator: i64) -> Self {
        assert!(denominator != 0, "zero denominator");
        RationalScalar(Ratio::new(numerator, denominator))
    }

    pub fn integer(v: i64) -> Self {
        RationalScalar(Ratio::from_integer(v))
    }

    pub fn zero() -> Self {
        Self::integer(0)
    }

    pub fn numerator(&self) -> i64 {
        *self.0.numer()
    }

    /// Always positive.
    pub fn denominator(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn to_integer(&self) -> Option<i64> {
        self.is_integer().then(|| self.numerator())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// Fractional part `{x} = x - floor(x)`, in `[0, 1)`.
    pub fn fract_part(&self) -> Self {
        RationalScalar(self.0 - self.0.floor())
    }

    pub fn floor(&self) -> i64 {
        self.0.floor().to_integer()
    }

    pub fn to_f64(&self) -> f64 {
        self.numerator() as f64 / self.denominator() as f64
    }

    pub fn ratio(&self) -> Ratio<i64> {
        self.0
    }
}

impl From<Ratio<i64>> for RationalScalar {
    fn from(r: Ratio<i64>) -> Self {
        RationalScalar(r)
    }
}

impl Add for RationalScalar {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        RationalScalar(self.0 + o.0)
    }
}

impl Sub for RationalScalar {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        RationalScalar(self.0 - o.0)
    }
}

impl Mul for RationalScalar {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        RationalScalar(self.0 * o.0)
    }
}

impl Neg for RationalScalar {
    type Output = Self;
    fn neg(self) -> Self {
        RationalScalar(-self.0)
    }
}

impl fmt::Display for RationalScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator() == 1 {
            write!(f, "{}", self.numerator())
        } else {
            write!(f, "{}/{}", self.numerator(), self.denominator())
        }
    }
}

impl Serialize for RationalScalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A canonical element of `Z[zeta_N]`.
#[derive(Clone)]
pub struct Cyclotomic {
    ctx: Arc<CycloContext>,
    coeffs: Vec<i64>,
}

impl Cyclotomic {
    pub fn zero(ctx: &Arc<CycloContext>) -> Self {
        Cyclotomic { ctx: Arc::clone(ctx), coeffs: vec![0; ctx.phi] }
    }

    pub fn from_int(ctx: &Arc<CycloContext>, v: i64) -> Self {
        let mut z = Self::zero(ctx);
        z.coeffs[0] = v;
        z
    }

    pub fn one(ctx: &Arc<CycloContext>) -> Self {
        Self::from_int(ctx, 1)
    }

    /// `zeta_N^e`; the exponent is reduced modulo `N`.
    pub fn root_of_unity(ctx: &Arc<CycloContext>, e: i64) -> Self {
        let e = e.rem_euclid(ctx.order as i64) as u32;
        Cyclotomic { ctx: Arc::clone(ctx), coeffs: ctx.power(e).to_vec() }
    }

    /// Builds from power-basis coordinates of arbitrary length, reducing
    /// modulo `Phi_N` (and `x^N - 1`) as needed.
    pub fn from_coeffs(ctx: &Arc<CycloContext>, coeffs: &[i64]) -> Self {
        let mut acc = RootSum::zero(ctx.order);
        for (e, &c) in coeffs.iter().enumerate() {
            acc.push(e as u64, c);
        }
        acc.reduce(ctx)
    }

    pub fn context(&self) -> &Arc<CycloContext> {
        &self.ctx
    }

    pub fn order(&self) -> u32 {
        self.ctx.order
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    fn same_ctx(&self, other: &Self) -> Result<()> {
        if self.ctx.order == other.ctx.order {
            Ok(())
        } else {
            Err(Error::ContextMismatch { left: self.ctx.order, right: other.ctx.order })
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_ctx(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Cyclotomic { ctx: Arc::clone(&self.ctx), coeffs })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_ctx(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(Cyclotomic { ctx: Arc::clone(&self.ctx), coeffs })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.same_ctx(other)?;
        Ok(self.to_root_sum().mul(&other.to_root_sum()).reduce(&self.ctx))
    }

    /// Complex conjugation, the ring map `zeta -> zeta^(N-1)`.
    pub fn conj(&self) -> Self {
        self.to_root_sum().conj().reduce(&self.ctx)
    }

    pub fn as_rational(&self) -> Result<RationalScalar> {
        if self.coeffs[1..].iter().any(|&c| c != 0) {
            return Err(Error::NotRational);
        }
        Ok(RationalScalar::integer(self.coeffs[0]))
    }

    pub fn to_root_sum(&self) -> RootSum {
        let mut r = RootSum::zero(self.ctx.order);
        for (e, &c) in self.coeffs.iter().enumerate() {
            r.push(e as u64, c);
        }
        r
    }

    /// Floating-point value; for display only.
    pub fn to_complex(&self) -> (f64, f64) {
        let n = self.ctx.order as f64;
        self.coeffs.iter().enumerate().fold((0.0, 0.0), |(re, im), (e, &c)| {
            let t = std::f64::consts::TAU * e as f64 / n;
            (re + c as f64 * t.cos(), im + c as f64 * t.sin())
        })
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        self.ctx.order == other.ctx.order && self.coeffs == other.coeffs
    }
}

impl Eq for Cyclotomic {}

impl std::hash::Hash for Cyclotomic {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.ctx.order.hash(state);
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cyclotomic(N={}, {:?})", self.ctx.order, self.coeffs)
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            let body = match (e, mag) {
                (0, m) => m.to_string(),
                (1, 1) => "z".to_string(),
                (1, m) => format!("{m}z"),
                (e, 1) => format!("z^{e}"),
                (e, m) => format!("{m}z^{e}"),
            };
            if first {
                write!(f, "{sign}{body}")?;
            } else {
                write!(f, " {sign} {body}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Serialize for Cyclotomic {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Cyclotomic", 2)?;
        st.serialize_field("N", &self.ctx.order)?;
        st.serialize_field("coeffs", &self.coeffs)?;
        st.end()
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr for &Cyclotomic {
            type Output = Cyclotomic;
            /// Panics when the operands live in different cyclotomic fields;
            /// use the `checked_*` variant to get an error instead.
            fn $method(self, rhs: &Cyclotomic) -> Cyclotomic {
                self.$checked(rhs).expect("cyclotomic context mismatch")
            }
        }
        impl $tr for Cyclotomic {
            type Output = Cyclotomic;
            fn $method(self, rhs: Cyclotomic) -> Cyclotomic {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic { ctx: Arc::clone(&self.ctx), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        -&self
    }
}

/// An unreduced integer combination `sum c_e zeta^e` in `Z[x]/(x^N - 1)`.
///
/// Terms are kept sorted by exponent with no zero coefficients, so two
/// `RootSum`s compare equal when they are equal in the group ring; equality
/// in `Z[zeta_N]` needs [`RootSum::reduce`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootSum {
    order: u32,
    terms: Vec<(u32, i64)>,
}

impl RootSum {
    pub fn zero(order: u32) -> Self {
        RootSum { order, terms: Vec::new() }
    }

    pub fn monomial(order: u32, e: u64, c: i64) -> Self {
        let mut r = Self::zero(order);
        r.push(e, c);
        r
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn terms(&self) -> &[(u32, i64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c * zeta^e`.
    pub fn push(&mut self, e: u64, c: i64) {
        if c == 0 {
            return;
        }
        let e = (e % self.order as u64) as u32;
        match self.terms.binary_search_by_key(&e, |t| t.0) {
            Ok(i) => {
                self.terms[i].1 += c;
                if self.terms[i].1 == 0 {
                    self.terms.remove(i);
                }
            }
            Err(i) => self.terms.insert(i, (e, c)),
        }
    }

    pub fn add(&self, other: &RootSum) -> RootSum {
        assert_eq!(self.order, other.order);
        let mut out = self.clone();
        for &(e, c) in &other.terms {
            out.push(e as u64, c);
        }
        out
    }

    pub fn scale(&self, k: i64) -> RootSum {
        if k == 0 {
            return RootSum::zero(self.order);
        }
        RootSum { order: self.order, terms: self.terms.iter().map(|&(e, c)| (e, c * k)).collect() }
    }

    pub fn mul(&self, other: &RootSum) -> RootSum {
        assert_eq!(self.order, other.order);
        let n = self.order;
        let mut dense = vec![0i64; n as usize];
        for &(e1, c1) in &self.terms {
            for &(e2, c2) in &other.terms {
                dense[((e1 + e2) % n) as usize] += c1 * c2;
            }
        }
        RootSum {
            order: n,
            terms: dense.into_iter().enumerate().filter(|t| t.1 != 0).map(|(e, c)| (e as u32, c)).collect(),
        }
    }

    pub fn conj(&self) -> RootSum {
        let n = self.order;
        let mut terms: Vec<(u32, i64)> = self.terms.iter().map(|&(e, c)| ((n - e) % n, c)).collect();
        terms.sort_unstable();
        RootSum { order: n, terms }
    }

    /// Canonical form in `Z[zeta_N]`.
    pub fn reduce(&self, ctx: &Arc<CycloContext>) -> Cyclotomic {
        assert_eq!(self.order, ctx.order, "RootSum reduced in the wrong context");
        let mut coeffs = vec![0i64; ctx.phi];
        for &(e, c) in &self.terms {
            ctx.add_power(&mut coeffs, e, c);
        }
        Cyclotomic { ctx: Arc::clone(ctx), coeffs }
    }
}

/// Dense accumulator for large sums of products of [`RootSum`]s.
pub struct RootAccumulator {
    dense: Vec<i64>,
}

impl RootAccumulator {
    pub fn new(order: u32) -> Self {
        RootAccumulator { dense: vec![0; order as usize] }
    }

    /// Adds `a * conj(b)`.
    pub fn add_mul_conj(&mut self, a: &RootSum, b: &RootSum) {
        let n = self.dense.len() as u32;
        for &(e1, c1) in &a.terms {
            for &(e2, c2) in &b.terms {
                self.dense[((e1 + n - e2) % n) as usize] += c1 * c2;
            }
        }
    }

    /// Adds `w * a * b * conj(c)`.
    pub fn add_triple(&mut self, a: &RootSum, b: &RootSum, c: &RootSum, w: i64) {
        let n = self.dense.len() as u32;
        let wrap = |e: u32| if e >= n { e - n } else { e };
        for &(e1, c1) in &a.terms {
            for &(e2, c2) in &b.terms {
                let e12 = wrap(e1 + e2) + n;
                let c12 = c1 * c2 * w;
                for &(e3, c3) in &c.terms {
                    self.dense[wrap(e12 - e3) as usize] += c12 * c3;
                }
            }
        }
    }

    pub fn clear(&mut self) {
        self.dense.iter_mut().for_each(|c| *c = 0);
    }

    /// The accumulated value when it is a rational integer, using `scratch`
    /// (resized to `phi(N)`) for the reduction.
    pub fn integer_value(&self, ctx: &Arc<CycloContext>, scratch: &mut Vec<i64>) -> Option<i64> {
        scratch.clear();
        scratch.resize(ctx.phi, 0);
        for (e, &c) in self.dense.iter().enumerate() {
            if c != 0 {
                ctx.add_power(scratch, e as u32, c);
            }
        }
        scratch[1..].iter().all(|&c| c == 0).then_some(scratch[0])
    }

    pub fn reduce(&self, ctx: &Arc<CycloContext>) -> Cyclotomic {
        let mut coeffs = vec![0i64; ctx.phi];
        for (e, &c) in self.dense.iter().enumerate() {
            if c != 0 {
                ctx.add_power(&mut coeffs, e as u32, c);
            }
        }
        Cyclotomic { ctx: Arc::clone(ctx), coeffs }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(n: u32) -> Arc<CycloContext> {
        context(n)
    }

    /// Independent oracle: expand prod over primitive N-th roots of (x - root)
    /// in floating point and round.
    fn phi_numeric(n: u32) -> Vec<i64> {
        let mut poly: Vec<(f64, f64)> = vec![(1.0, 0.0)];
        for j in 1..=n {
            if j.gcd(&n) != 1 {
                continue;
            }
            let t = std::f64::consts::TAU * j as f64 / n as f64;
            let (rr, ri) = (t.cos(), t.sin());
            let mut next = vec![(0.0, 0.0); poly.len() + 1];
            for (i, &(pr, pi)) in poly.iter().enumerate() {
                next[i + 1].0 += pr;
                next[i + 1].1 += pi;
                next[i].0 -= pr * rr - pi * ri;
                next[i].1 -= pr * ri + pi * rr;
            }
            poly = next;
        }
        poly.iter().map(|c| c.0.round() as i64).collect()
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(6), vec![1, -1, 1]);
        for n in 1..=60 {
            assert_eq!(cyclotomic_polynomial(n), phi_numeric(n), "N={n}");
        }
    }

    #[test]
    fn phi_divides_x_n_minus_one() {
        for n in 1..=200u32 {
            let phi = cyclotomic_polynomial(n);
            assert_eq!(phi.len() as u32 - 1, euler_phi(n));
            assert_eq!(*phi.last().unwrap(), 1);
            let mut num = vec![0i64; n as usize + 1];
            num[0] = -1;
            num[n as usize] = 1;
            let (_, r) = poly_divrem(&num, &phi);
            assert!(r.iter().all(|&c| c == 0), "N={n}");
        }
    }

    #[test]
    fn roots_of_unity() {
        let c4 = ctx(4);
        assert_eq!(Cyclotomic::root_of_unity(&c4, 0), Cyclotomic::one(&c4));
        assert_eq!(Cyclotomic::root_of_unity(&c4, 2), Cyclotomic::from_int(&c4, -1));
        let s = &Cyclotomic::root_of_unity(&c4, 1) + &Cyclotomic::root_of_unity(&c4, 3);
        assert!(s.is_zero());
        assert_eq!(Cyclotomic::root_of_unity(&c4, -1), Cyclotomic::root_of_unity(&c4, 3));
    }

    #[test]
    fn primitivity() {
        for n in 1..=60u32 {
            let c = ctx(n);
            let z = Cyclotomic::root_of_unity(&c, 1);
            let mut p = Cyclotomic::one(&c);
            for e in 1..=n {
                p = &p * &z;
                if e < n {
                    assert_ne!(p, Cyclotomic::one(&c), "N={n} e={e}");
                }
            }
            assert_eq!(p, Cyclotomic::one(&c));
        }
    }

    #[test]
    fn ring_examples() {
        let c6 = ctx(6);
        let z = |e| Cyclotomic::root_of_unity(&c6, e);
        assert_eq!(&z(1) * &z(2), Cyclotomic::from_int(&c6, -1));
        let c4 = ctx(4);
        assert_eq!(Cyclotomic::root_of_unity(&c4, 1).conj(), -Cyclotomic::root_of_unity(&c4, 1));
        let c3 = ctx(3);
        let w = |e| Cyclotomic::root_of_unity(&c3, e);
        assert!((&(&Cyclotomic::one(&c3) + &w(1)) + &w(2)).is_zero());
    }

    #[test]
    fn rational_extraction() {
        let c4 = ctx(4);
        assert_eq!(Cyclotomic::from_int(&c4, 3).as_rational().unwrap(), RationalScalar::integer(3));
        assert_eq!(Cyclotomic::root_of_unity(&c4, 1).as_rational(), Err(Error::NotRational));
        let c5 = ctx(5);
        let s = (1..=4).fold(Cyclotomic::zero(&c5), |acc, e| &acc + &Cyclotomic::root_of_unity(&c5, e));
        assert_eq!(s.as_rational().unwrap(), RationalScalar::integer(-1));
    }

    #[test]
    fn context_mismatch() {
        let a = Cyclotomic::one(&ctx(4));
        let b = Cyclotomic::one(&ctx(6));
        assert_eq!(a.checked_add(&b), Err(Error::ContextMismatch { left: 4, right: 6 }));
        assert!(a.checked_mul(&b).is_err());
    }

    #[test]
    fn serializes_to_documented_shape() {
        let v = serde_json::to_value(Cyclotomic::root_of_unity(&ctx(4), 1)).unwrap();
        assert_eq!(v, serde_json::json!({"N": 4, "coeffs": [0, 1]}));
    }

    #[test]
    fn accumulator_matches_direct_products() {
        let c = ctx(12);
        let a = RootSum::monomial(12, 1, 1).add(&RootSum::monomial(12, 11, 1));
        let b = RootSum::monomial(12, 5, 2);
        let mut acc = RootAccumulator::new(12);
        acc.add_mul_conj(&a, &b);
        assert_eq!(acc.reduce(&c), a.mul(&b.conj()).reduce(&c));
        assert_eq!(a.reduce(&c).checked_mul(&b.reduce(&c).conj()).unwrap(), acc.reduce(&c));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn element(n: u32) -> impl Strategy<Value = Cyclotomic> {
            let c = context(n);
            proptest::collection::vec(-5i64..5, 0..(2 * n as usize)).prop_map(move |v| Cyclotomic::from_coeffs(&c, &v))
        }

        fn triple() -> impl Strategy<Value = (Cyclotomic, Cyclotomic, Cyclotomic)> {
            (1u32..30).prop_flat_map(|n| (element(n), element(n), element(n)))
        }

        proptest! {
            #[test]
            fn ring_axioms((a, b, c) in triple()) {
                prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
                prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
                prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
                prop_assert_eq!(&a * &b, &b * &a);
                prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
            }

            #[test]
            fn norm_of_scaled_root_is_rational(n in 1u32..40, e in 0i64..80, k in -6i64..6) {
                let c = context(n);
                let v = &Cyclotomic::from_int(&c, k) * &Cyclotomic::root_of_unity(&c, e);
                let norm = (&v * &v.conj()).as_rational().unwrap();
                prop_assert_eq!(norm, RationalScalar::integer(k * k));
            }
        }
    }
}
