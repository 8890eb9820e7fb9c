//! Irreducible characters of `M(k,l,m,n)`.
//!
//! With `N = lcm(n, nm/gcd(n,l))`, `omega = zeta_N^(N/n)` and
//! `eta = zeta_N^(N gcd(n,l)/(nm))`, the characters are
//!
//! ```text
//! theta_{a,alpha}(y^j x^i) = eta^(j e_{a,alpha}) * sum_{s in Ka} omega^(s i)   if r_a | j
//!                          = 0                                                  otherwise
//! ```
//!
//! for `a` an orbit representative and `0 <= alpha < s_a`. Values are kept as
//! [`RootSum`]s (exponents of `zeta_N`) and reduced only for comparison.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cyclotomic::{context, CycloContext, Cyclotomic, RationalScalar, RootAccumulator, RootSum};
use crate::error::{Error, Result};
use crate::metacyclic::{GroupElement, MetacyclicParams};
use crate::orbits::OrbitTable;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CharacterLabel {
    pub a: usize,
    pub alpha: usize,
}

impl CharacterLabel {
    pub fn new(a: usize, alpha: usize) -> Self {
        CharacterLabel { a, alpha }
    }

    pub fn is_trivial(&self) -> bool {
        self.a == 0 && self.alpha == 0
    }
}

impl fmt::Display for CharacterLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "θ[{},{}]", self.a, self.alpha)
    }
}

/// A function on the group, indexed by element index `j * n + i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassFunction {
    order: u32,
    values: Vec<RootSum>,
}

impl ClassFunction {
    pub fn new(order: u32, values: Vec<RootSum>) -> Self {
        ClassFunction { order, values }
    }

    pub fn values(&self) -> &[RootSum] {
        &self.values
    }

    pub fn value(&self, index: usize) -> &RootSum {
        &self.values[index]
    }

    /// Pointwise product.
    pub fn product(&self, other: &ClassFunction) -> ClassFunction {
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a.mul(b)).collect();
        ClassFunction { order: self.order, values }
    }

    /// Equality as functions into `Z[zeta_N]`.
    pub fn equals(&self, other: &ClassFunction, ctx: &Arc<CycloContext>) -> bool {
        self.values.len() == other.values.len()
            && self.values.iter().zip(&other.values).all(|(a, b)| a.reduce(ctx) == b.reduce(ctx))
    }
}

#[derive(Clone, Debug)]
pub struct CharacterTable {
    params: MetacyclicParams,
    orbits: OrbitTable,
    ctx: Arc<CycloContext>,
    /// `omega = zeta^omega_step`, `eta = zeta^eta_step`.
    omega_step: u64,
    eta_step: u64,
    labels: Vec<CharacterLabel>,
    characters: Vec<ClassFunction>,
    /// Conjugacy classes as `(representative index, size)`.
    classes: Vec<(usize, usize)>,
}

impl CharacterTable {
    pub fn new(params: MetacyclicParams) -> Self {
        let orbits = OrbitTable::new(params);
        let (n, m, l) = (params.n() as u64, params.m() as u64, params.l() as u64);
        let g = n.gcd(&l);
        let big_n = n.lcm(&(n * m / g));
        let ctx = context(big_n as u32);
        let omega_step = big_n / n;
        let eta_step = big_n * g / (n * m);
        let mut table = CharacterTable {
            params,
            orbits,
            ctx,
            omega_step,
            eta_step,
            labels: Vec::new(),
            characters: Vec::new(),
            classes: conjugacy_classes(&params),
        };
        for &a in table.orbits.reps() {
            for alpha in 0..table.orbits.s(a) {
                let lbl = CharacterLabel::new(a, alpha);
                let chi = table.closed_form(lbl);
                table.labels.push(lbl);
                table.characters.push(chi);
            }
        }
        table
    }

    fn closed_form(&self, lbl: CharacterLabel) -> ClassFunction {
        let big_n = self.ctx.order();
        let r = self.orbits.r(lbl.a);
        let e = self.orbits.e_value(lbl.a, lbl.alpha).expect("label in range") as u64;
        let values = self
            .params
            .elements()
            .map(|g| {
                let mut v = RootSum::zero(big_n);
                if g.j % r == 0 {
                    let base = g.j as u64 * e * self.eta_step;
                    for &s in self.orbits.orbit(lbl.a) {
                        v.push(base + (s * g.i) as u64 * self.omega_step, 1);
                    }
                }
                v
            })
            .collect();
        ClassFunction::new(big_n, values)
    }

    pub fn params(&self) -> &MetacyclicParams {
        &self.params
    }

    pub fn orbits(&self) -> &OrbitTable {
        &self.orbits
    }

    pub fn context(&self) -> &Arc<CycloContext> {
        &self.ctx
    }

    pub fn labels(&self) -> &[CharacterLabel] {
        &self.labels
    }

    pub fn label_index(&self, lbl: CharacterLabel) -> Result<usize> {
        self.labels
            .binary_search(&lbl)
            .map_err(|_| Error::LabelOutOfRange { a: lbl.a, alpha: lbl.alpha })
    }

    pub fn degree(&self, lbl: CharacterLabel) -> usize {
        self.orbits.r(lbl.a)
    }

    pub fn character(&self, lbl: CharacterLabel) -> Result<&ClassFunction> {
        Ok(&self.characters[self.label_index(lbl)?])
    }

    pub fn char_value(&self, lbl: CharacterLabel, g: GroupElement) -> Result<Cyclotomic> {
        let chi = self.character(lbl)?;
        Ok(chi.value(self.params.index(g)).reduce(&self.ctx))
    }

    /// `(1/|G|) sum_g f(g) conj(h(g))`.
    pub fn inner_product(&self, f: &ClassFunction, h: &ClassFunction) -> Result<RationalScalar> {
        let mut acc = RootAccumulator::new(self.ctx.order());
        for (a, b) in f.values().iter().zip(h.values()) {
            acc.add_mul_conj(a, b);
        }
        let total = acc.reduce(&self.ctx).as_rational()?;
        Ok(total * RationalScalar::new(1, self.params.order() as i64))
    }

    /// Induces the linear character of `G_a = <y^{r_a}, x>` sending
    /// `y^{r_a} -> eta^{r_a e}` and `x -> omega^a`, using coset
    /// representatives `1, y, ..., y^{r_a - 1}` and the group law directly.
    pub fn induced_oracle(&self, lbl: CharacterLabel) -> Result<ClassFunction> {
        self.label_index(lbl)?;
        let p = &self.params;
        let big_n = self.ctx.order();
        let r = self.orbits.r(lbl.a);
        let e = self.orbits.e_value(lbl.a, lbl.alpha)? as u64;
        // On G_a the element y^j x^i (r | j) is (y^r)^(j/r) x^i.
        let linear = |h: GroupElement| -> Option<u64> {
            h.j.is_multiple_of(r)
                .then(|| (h.j / r) as u64 * r as u64 * e * self.eta_step + (lbl.a * h.i) as u64 * self.omega_step)
        };
        let y = p.y();
        let reps: Vec<GroupElement> = (0..r).map(|t| p.pow(y, t)).collect();
        let values = p
            .elements()
            .map(|g| {
                let mut v = RootSum::zero(big_n);
                for &t in &reps {
                    let conj = p.multiply(p.multiply(p.inverse(t), g), t);
                    if let Some(exp) = linear(conj) {
                        v.push(exp, 1);
                    }
                }
                v
            })
            .collect();
        Ok(ClassFunction::new(big_n, values))
    }

    /// Multiplicity of `theta_{c,gamma}` in `theta_{a,alpha} theta_{b,beta}`:
    /// `r_c S(a,b,c) / lcm(r_a, r_b)` when the congruence holds, else `0`.
    pub fn product_coeff(&self, x: CharacterLabel, y: CharacterLabel, z: CharacterLabel) -> Result<i64> {
        for lbl in [x, y, z] {
            self.label_index(lbl)?;
        }
        let t = &self.orbits;
        let s = t.s_count(x.a, y.a, z.a);
        if s == 0 || !t.gamma_condition(x.a, x.alpha, y.a, y.alpha, z.a, z.alpha)? {
            return Ok(0);
        }
        let num = t.r(z.a) * s;
        let den = t.r(x.a).lcm(&t.r(y.a));
        if !num.is_multiple_of(den) {
            return Err(Error::NonIntegralCoefficient(format!("{x}·{y} at {z}: {num}/{den}")));
        }
        Ok((num / den) as i64)
    }

    /// Decomposition by the closed form, as nonzero `(label, multiplicity)` pairs.
    pub fn product_closed_form(&self, x: CharacterLabel, y: CharacterLabel) -> Result<Vec<(CharacterLabel, i64)>> {
        let mut out = Vec::new();
        for &z in &self.labels {
            let c = self.product_coeff(x, y, z)?;
            if c != 0 {
                out.push((z, c));
            }
        }
        Ok(out)
    }

    pub fn classes(&self) -> &[(usize, usize)] {
        &self.classes
    }

    /// Decomposition of the pointwise product by inner products against every
    /// irreducible, summed class by class.
    pub fn product_oracle(&self, x: CharacterLabel, y: CharacterLabel) -> Result<Vec<(CharacterLabel, i64)>> {
        let (fx, fy) = (self.character(x)?, self.character(y)?);
        let order = self.params.order() as i64;
        let mut acc = RootAccumulator::new(self.ctx.order());
        let mut scratch = Vec::new();
        let mut out = Vec::new();
        for (z, chi) in self.labels.iter().zip(&self.characters) {
            acc.clear();
            for &(g, size) in &self.classes {
                acc.add_triple(fx.value(g), fy.value(g), chi.value(g), size as i64);
            }
            let total = acc.integer_value(&self.ctx, &mut scratch).ok_or(Error::NotRational)?;
            if total % order != 0 {
                return Err(Error::NonIntegralCoefficient(format!("{x}·{y} at {z}: {total}/{order}")));
            }
            if total != 0 {
                out.push((*z, total / order));
            }
        }
        Ok(out)
    }

    /// Decomposition by the regrouped sum
    /// `r_a/lcm(r_a,r_b) sum_{s in Kb} sum_gamma theta_{a+s, gamma}`.
    pub fn product_regrouped(&self, x: CharacterLabel, y: CharacterLabel) -> Result<Vec<(CharacterLabel, i64)>> {
        self.label_index(x)?;
        self.label_index(y)?;
        let t = &self.orbits;
        let weight = RationalScalar::new(t.r(x.a) as i64, t.r(x.a).lcm(&t.r(y.a)) as i64);
        let mut acc: BTreeMap<CharacterLabel, RationalScalar> = BTreeMap::new();
        let n = self.params.n();
        for &s in t.orbit(y.a) {
            let c = t.rep_of((x.a + s) % n);
            for gamma in 0..t.s(c) {
                if t.gamma_condition(x.a, x.alpha, y.a, y.alpha, c, gamma)? {
                    let slot = acc.entry(CharacterLabel::new(c, gamma)).or_insert_with(RationalScalar::zero);
                    *slot = *slot + weight;
                }
            }
        }
        acc.into_iter()
            .filter(|(_, v)| !v.is_zero())
            .map(|(z, v)| {
                v.to_integer()
                    .map(|c| (z, c))
                    .ok_or_else(|| Error::NonIntegralCoefficient(format!("{x}·{y} at {z}: {v}")))
            })
            .collect()
    }

    /// Decomposes `theta_x theta_y`, requiring the closed form and the oracle to agree.
    pub fn product_decompose(&self, x: CharacterLabel, y: CharacterLabel) -> Result<Vec<(CharacterLabel, i64)>> {
        let closed = self.product_closed_form(x, y)?;
        let oracle = self.product_oracle(x, y)?;
        if closed != oracle {
            return Err(Error::OracleMismatch(format!(
                "{}: {x}·{y} closed form {closed:?} vs oracle {oracle:?}",
                self.params
            )));
        }
        Ok(closed)
    }

    pub fn to_json(&self) -> Value {
        let characters: Vec<Value> = self
            .labels
            .iter()
            .zip(&self.characters)
            .map(|(lbl, chi)| {
                let mut values = serde_json::Map::new();
                for g in self.params.elements() {
                    let v = chi.value(self.params.index(g)).reduce(&self.ctx);
                    let (re, im) = v.to_complex();
                    values.insert(
                        format!("{},{}", g.j, g.i),
                        json!({ "coeffs": v.coeffs(), "approx": [round6(re), round6(im)] }),
                    );
                }
                json!({ "a": lbl.a, "alpha": lbl.alpha, "degree": self.degree(*lbl), "values": values })
            })
            .collect();
        json!({
            "params": self.params,
            "N": self.ctx.order(),
            "labels": characters,
        })
    }
}

fn conjugacy_classes(p: &MetacyclicParams) -> Vec<(usize, usize)> {
    let order = p.order();
    let mut seen = vec![false; order];
    let mut classes = Vec::new();
    for g in 0..order {
        if seen[g] {
            continue;
        }
        let ge = p.element(g);
        let mut size = 0;
        for h in p.elements() {
            let c = p.index(p.multiply(p.multiply(p.inverse(h), ge), h));
            if !seen[c] {
                seen[c] = true;
                size += 1;
            }
        }
        classes.push((g, size));
    }
    classes
}

fn round6(v: f64) -> f64 {
    let r = (v * 1e6).round() / 1e6;
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

/// The multiset `{a k^i + b k^j : i < r_a, j < r_b}` and the rational multiset
/// `sum_{j < r_b} (r_a / r_{a + b k^j}) K(a + b k^j)`, both as residue -> multiplicity.
pub fn orbit_sum_multisets(t: &OrbitTable, a: usize, b: usize) -> (BTreeMap<usize, RationalScalar>, BTreeMap<usize, RationalScalar>) {
    let n = t.params().n();
    let mut left: BTreeMap<usize, RationalScalar> = BTreeMap::new();
    for &u in t.orbit(a) {
        for &v in t.orbit(b) {
            let slot = left.entry((u + v) % n).or_insert_with(RationalScalar::zero);
            *slot = *slot + RationalScalar::integer(1);
        }
    }
    let mut right: BTreeMap<usize, RationalScalar> = BTreeMap::new();
    for &v in t.orbit(b) {
        let c = (a + v) % n;
        let w = RationalScalar::new(t.r(a) as i64, t.r(c) as i64);
        for &u in t.orbit(c) {
            let slot = right.entry(u).or_insert_with(RationalScalar::zero);
            *slot = *slot + w;
        }
    }
    (left, right)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ct(k: i64, l: i64, m: i64, n: i64) -> CharacterTable {
        CharacterTable::new(MetacyclicParams::validate(k, l, m, n).unwrap())
    }

    fn lbl(a: usize, alpha: usize) -> CharacterLabel {
        CharacterLabel::new(a, alpha)
    }

    fn int(ctx: &CharacterTable, v: i64) -> Cyclotomic {
        Cyclotomic::from_int(ctx.context(), v)
    }

    #[test]
    fn value_examples() {
        let q8 = ct(3, 2, 2, 4);
        let x = GroupElement { j: 0, i: 1 };
        let x2 = GroupElement { j: 0, i: 2 };
        assert!(q8.char_value(lbl(1, 0), x).unwrap().is_zero());
        assert_eq!(q8.char_value(lbl(1, 0), x2).unwrap(), int(&q8, -2));
        for t in [ct(3, 2, 2, 4), ct(2, 0, 4, 3), ct(1, 3, 5, 7)] {
            for &l in t.labels() {
                let e = t.params().identity();
                assert_eq!(t.char_value(l, e).unwrap(), int(&t, t.degree(l) as i64));
            }
        }
        assert_eq!(q8.labels().len(), 5);
    }

    #[test]
    fn inner_product_examples() {
        let q8 = ct(3, 2, 2, 4);
        let one = RationalScalar::integer(1);
        let chi = |l| q8.character(l).unwrap();
        assert_eq!(q8.inner_product(chi(lbl(0, 0)), chi(lbl(0, 0))).unwrap(), one);
        assert_eq!(q8.inner_product(chi(lbl(1, 0)), chi(lbl(1, 0))).unwrap(), one);
        assert!(q8.inner_product(chi(lbl(0, 0)), chi(lbl(2, 0))).unwrap().is_zero());
    }

    #[test]
    fn induced_oracle_examples() {
        for t in [ct(3, 2, 2, 4), ct(2, 0, 4, 3)] {
            for &l in t.labels() {
                let ind = t.induced_oracle(l).unwrap();
                assert!(ind.equals(t.character(l).unwrap(), t.context()), "{} {l}", t.params());
            }
        }
        assert_eq!(ct(2, 0, 4, 3).labels().len(), 6);
    }

    #[test]
    fn product_examples() {
        let q8 = ct(3, 2, 2, 4);
        assert_eq!(q8.product_coeff(lbl(1, 0), lbl(1, 0), lbl(0, 0)).unwrap(), 1);
        assert_eq!(
            q8.product_decompose(lbl(1, 0), lbl(1, 0)).unwrap(),
            vec![(lbl(0, 0), 1), (lbl(0, 1), 1), (lbl(2, 0), 1), (lbl(2, 1), 1)]
        );
        assert_eq!(q8.product_decompose(lbl(0, 0), lbl(0, 1)).unwrap(), vec![(lbl(0, 1), 1)]);
        let t = ct(2, 0, 4, 3);
        assert_eq!(
            t.product_decompose(lbl(1, 0), lbl(1, 0)).unwrap(),
            vec![(lbl(0, 0), 1), (lbl(0, 2), 1), (lbl(1, 0), 1)]
        );
        for &b in t.labels() {
            assert_eq!(t.product_coeff(lbl(0, 0), b, b).unwrap(), 1);
        }
    }

    /// With `alpha + beta - gamma = f_a + f_b - f_c` (fractional-part term on
    /// the other side) the predicted constituents of the cyclic group of order
    /// 6 written as `M(1,1,3,2)` are wrong: `theta_{1,0}^2 = theta_{0,1}`, not
    /// `theta_{0,2}`.
    #[test]
    fn fractional_part_term_sign() {
        let t = ct(1, 1, 3, 2);
        assert_eq!(t.product_oracle(lbl(1, 0), lbl(1, 0)).unwrap(), vec![(lbl(0, 1), 1)]);
        assert_eq!(t.product_decompose(lbl(1, 0), lbl(1, 0)).unwrap(), vec![(lbl(0, 1), 1)]);
        let o = t.orbits();
        let rhs = o.frac_combination(1, 1, 0).unwrap();
        let modulus = o.s(1).gcd(&o.s(1)) as i64;
        let other_side = |gamma: i64| (0 - gamma - rhs).rem_euclid(modulus) == 0;
        assert!(other_side(2) && !other_side(1));
    }

    #[test]
    fn regrouped_matches_closed_form() {
        for t in [ct(3, 2, 2, 4), ct(2, 0, 4, 3), ct(2, 0, 6, 9), ct(4, 0, 3, 7)] {
            for &x in t.labels() {
                for &y in t.labels() {
                    assert_eq!(t.product_regrouped(x, y).unwrap(), t.product_decompose(x, y).unwrap());
                }
            }
        }
    }

    #[test]
    fn orbit_sum_identity_examples() {
        let t = OrbitTable::new(MetacyclicParams::validate(2, 0, 6, 9).unwrap());
        for &a in t.reps() {
            for &b in t.reps() {
                let (l, r) = orbit_sum_multisets(&t, a, b);
                assert_eq!(l, r, "a={a} b={b}");
            }
        }
    }

    #[test]
    fn class_counts() {
        // the number of classes equals the number of irreducibles
        for p in MetacyclicParams::enumerate(24) {
            let t = CharacterTable::new(p);
            assert_eq!(t.classes().len(), t.labels().len(), "{p}");
            assert_eq!(t.classes().iter().map(|c| c.1).sum::<usize>(), p.order());
        }
        assert_eq!(ct(3, 2, 2, 4).classes().len(), 5);
    }

    #[test]
    fn json_shape() {
        let v = ct(3, 2, 2, 4).to_json();
        assert_eq!(v["N"], json!(4));
        assert_eq!(v["labels"].as_array().unwrap().len(), 5);
        assert_eq!(v["labels"][2]["degree"], json!(2));
        assert_eq!(v["labels"][2]["values"]["0,2"]["coeffs"], json!([-2, 0]));
    }
}
