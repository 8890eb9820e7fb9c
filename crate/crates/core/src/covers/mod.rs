//! Coverings of weighted quasigroups by quasigroups.
//!
//! A covering is a map `f: Q -> X` with `|f^-1(x)| = w(x)` such that the
//! fibers `S_x = f^-1(x)` satisfy
//!
//! ```text
//! sum_{q in S_z} m_q(S_x, S_y) = alpha(x, y, z)
//! ```
//!
//! where `m_q(S, T)` is the multiplicity of `q` in the semialgebra product
//! `S T`. It is balanced when `m_q(S_x, S_y) = alpha(x,y,z) / w(z)` for every
//! `q in S_z`.

mod lift;
mod par;
mod search;

pub use lift::{find_lift, CellOrder, LiftOptions};
pub use search::{find_balanced_cover, find_balanced_group_cover, find_balanced_group_cover_with, SearchOptions};

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde_json::{json, Value};

use crate::characters::CharacterLabel;
use crate::cyclotomic::RationalScalar;
use crate::error::{Error, Result};
use crate::metacyclic::CayleyTable;
use crate::orbits::OrbitTable;
use crate::wqg::WeightedQuasigroup;

/// An element of the free semimodule `N[Q]`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Multiset {
    counts: Vec<u64>,
}

impl Multiset {
    pub fn new(order: usize) -> Self {
        Multiset { counts: vec![0; order] }
    }

    pub fn from_elements(order: usize, elements: &[usize]) -> Self {
        let mut m = Self::new(order);
        for &q in elements {
            m.counts[q] += 1;
        }
        m
    }

    pub fn from_counts(counts: Vec<u64>) -> Self {
        Multiset { counts }
    }

    pub fn order(&self) -> usize {
        self.counts.len()
    }

    pub fn count(&self, q: usize) -> u64 {
        self.counts[q]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.counts.len()).filter(|&q| self.counts[q] > 0).collect()
    }

    /// Adds `k` copies of `other`.
    pub fn add_scaled(&mut self, other: &Multiset, k: u64) {
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += k * b;
        }
    }
}

impl fmt::Debug for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.support().iter().map(|&q| format!("{q}:{}", self.counts[q])).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// The convolution `S T = sum_{s,t} S(s) T(t) (s t)`.
pub fn multiset_product(q: &CayleyTable, s: &Multiset, t: &Multiset) -> Multiset {
    let mut out = Multiset::new(q.order());
    for a in s.support() {
        for b in t.support() {
            out.counts[q.mul(a, b)] += s.counts[a] * t.counts[b];
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightViolation {
    pub label: usize,
    pub expected: u64,
    pub actual: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductViolation {
    pub x: usize,
    pub y: usize,
    pub z: usize,
    pub expected: u64,
    pub actual: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoverReport {
    pub weight_violations: Vec<WeightViolation>,
    pub product_violations: Vec<ProductViolation>,
}

impl CoverReport {
    pub fn passed(&self) -> bool {
        self.weight_violations.is_empty() && self.product_violations.is_empty()
    }
}

impl fmt::Display for CoverReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return write!(f, "cover ok");
        }
        for v in &self.weight_violations {
            writeln!(f, "label {}: fiber size {} but weight {}", v.label, v.actual, v.expected)?;
        }
        for v in &self.product_violations {
            writeln!(f, "({}, {}, {}): {} pairs but alpha = {}", v.x, v.y, v.z, v.actual, v.expected)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Covering {
    quasigroup: CayleyTable,
    target: WeightedQuasigroup,
    labels: Vec<usize>,
}

impl Covering {
    /// `labels[q]` is the label (index into `target`) of element `q`.
    pub fn new(quasigroup: CayleyTable, target: WeightedQuasigroup, labels: Vec<usize>) -> Result<Self> {
        if labels.len() != quasigroup.order() {
            return Err(Error::SizeMismatch(format!(
                "{} labels for a quasigroup of order {}",
                labels.len(),
                quasigroup.order()
            )));
        }
        if let Some(&x) = labels.iter().find(|&&x| x >= target.len()) {
            return Err(Error::SizeMismatch(format!("label {x} but only {} labels", target.len())));
        }
        Ok(Covering { quasigroup, target, labels })
    }

    pub fn quasigroup(&self) -> &CayleyTable {
        &self.quasigroup
    }

    pub fn target(&self) -> &WeightedQuasigroup {
        &self.target
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// `{"order": n, "labels": [name of the label of q, ...], "table": rows}`.
    pub fn to_json(&self) -> Value {
        let names: Vec<&str> = self.labels.iter().map(|&x| self.target.labels()[x].as_str()).collect();
        json!({ "order": self.quasigroup.order(), "labels": names, "table": self.quasigroup.rows() })
    }

    /// The fibers `S_x`, each ascending.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.target.len()];
        for (q, &x) in self.labels.iter().enumerate() {
            blocks[x].push(q);
        }
        blocks
    }

    /// `pairs[(x * L + y) * L + z] = |{(s, t) in S_x x S_y : s t in S_z}|`.
    fn pair_counts(&self) -> Vec<u64> {
        let len = self.target.len();
        let n = self.quasigroup.order();
        let mut pairs = vec![0u64; len * len * len];
        for a in 0..n {
            for b in 0..n {
                let z = self.labels[self.quasigroup.mul(a, b)];
                pairs[(self.labels[a] * len + self.labels[b]) * len + z] += 1;
            }
        }
        pairs
    }

    /// Checks the fiber sizes and `sum_{q in S_z} m_q(S_x,S_y) = alpha(x,y,z)`.
    pub fn check(&self) -> CoverReport {
        let len = self.target.len();
        let mut report = CoverReport::default();
        for (x, block) in self.blocks().iter().enumerate() {
            if block.len() as u64 != self.target.w(x) {
                report.weight_violations.push(WeightViolation {
                    label: x,
                    expected: self.target.w(x),
                    actual: block.len() as u64,
                });
            }
        }
        let pairs = self.pair_counts();
        for x in 0..len {
            for y in 0..len {
                for z in 0..len {
                    let actual = pairs[(x * len + y) * len + z];
                    let expected = self.target.alpha(x, y, z);
                    if actual != expected {
                        report.product_violations.push(ProductViolation { x, y, z, expected, actual });
                    }
                }
            }
        }
        report
    }

    /// Whether every `q in S_z` occurs in `S_x S_y` exactly `alpha(x,y,z)/w(z)` times.
    pub fn is_balanced(&self) -> Result<bool> {
        let report = self.check();
        if !report.passed() {
            return Err(Error::NotACover(report.to_string()));
        }
        let len = self.target.len();
        let n = self.quasigroup.order();
        // hits[(x * L + y) * n + q] = m_q(S_x, S_y)
        let mut hits = vec![0u64; len * len * n];
        for a in 0..n {
            for b in 0..n {
                hits[(self.labels[a] * len + self.labels[b]) * n + self.quasigroup.mul(a, b)] += 1;
            }
        }
        for x in 0..len {
            for y in 0..len {
                for q in 0..n {
                    let z = self.labels[q];
                    if hits[(x * len + y) * n + q] * self.target.w(z) != self.target.alpha(x, y, z) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

/// Disjoint blocks `S_{a,alpha}` indexed by character labels.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BlockAssignment {
    blocks: BTreeMap<CharacterLabel, Vec<usize>>,
}

impl BlockAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, label: CharacterLabel, mut elements: Vec<usize>) {
        elements.sort_unstable();
        self.blocks.insert(label, elements);
    }

    pub fn get(&self, label: CharacterLabel) -> Option<&[usize]> {
        self.blocks.get(&label).map(Vec::as_slice)
    }

    pub fn blocks(&self) -> &BTreeMap<CharacterLabel, Vec<usize>> {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Builds the assignment from a covering whose target is a weighted
    /// character quasigroup.
    pub fn from_covering(c: &Covering) -> Result<Self> {
        let chars = c
            .target()
            .characters()
            .ok_or_else(|| Error::InvalidParams("target has no character labels".into()))?;
        let mut out = Self::new();
        for (x, block) in c.blocks().into_iter().enumerate() {
            out.insert(chars[x], block);
        }
        Ok(out)
    }

    /// The covering of `target` (a weighted character quasigroup) defined by these blocks.
    pub fn to_covering(&self, q: &CayleyTable, target: &WeightedQuasigroup) -> Result<Covering> {
        let chars = target
            .characters()
            .ok_or_else(|| Error::InvalidParams("target has no character labels".into()))?;
        let mut labels = vec![usize::MAX; q.order()];
        for (&lbl, elems) in &self.blocks {
            let x = chars
                .iter()
                .position(|&c| c == lbl)
                .ok_or(Error::LabelOutOfRange { a: lbl.a, alpha: lbl.alpha })?;
            for &e in elems {
                if e >= q.order() || labels[e] != usize::MAX {
                    return Err(Error::SizeMismatch(format!("element {e} is out of range or in two blocks")));
                }
                labels[e] = x;
            }
        }
        if let Some(e) = labels.iter().position(|&x| x == usize::MAX) {
            return Err(Error::SizeMismatch(format!("element {e} is in no block")));
        }
        Covering::new(q.clone(), target.clone(), labels)
    }

    /// `{"blocks": {"a,alpha": [elements]}}`.
    pub fn to_json(&self) -> Value {
        let blocks: serde_json::Map<String, Value> = self
            .blocks
            .iter()
            .map(|(l, e)| (format!("{},{}", l.a, l.alpha), json!(e)))
            .collect();
        json!({ "blocks": blocks })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let blocks = v["blocks"].as_object().ok_or_else(|| Error::Parse("missing \"blocks\" object".into()))?;
        let mut out = Self::new();
        for (key, elems) in blocks {
            let (a, alpha) = key
                .split_once(',')
                .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)))
                .ok_or_else(|| Error::Parse(format!("bad block key {key:?}")))?;
            let elems = elems
                .as_array()
                .and_then(|xs| xs.iter().map(|x| x.as_u64().map(|v| v as usize)).collect::<Option<Vec<_>>>())
                .ok_or_else(|| Error::Parse(format!("bad element list for {key:?}")))?;
            out.insert(CharacterLabel::new(a, alpha), elems);
        }
        Ok(out)
    }

    fn multiset(&self, order: usize, label: CharacterLabel) -> Multiset {
        Multiset::from_elements(order, self.get(label).unwrap_or(&[]))
    }
}

/// `S_{a,alpha} S_{b,beta} = gcd(r_a,r_b) sum_c S(a,b,c) sum_gamma S_{c,gamma}` for every
/// pair of labels, `gamma` ranging over the solutions of the product congruence.
/// Returns the first failing pair.
pub fn check_orbit_sum_form(
    q: &CayleyTable,
    t: &OrbitTable,
    blocks: &BlockAssignment,
) -> Result<Option<(CharacterLabel, CharacterLabel)>> {
    let order = q.order();
    let labels: Vec<CharacterLabel> = blocks.blocks().keys().copied().collect();
    for &x in &labels {
        for &y in &labels {
            let lhs = multiset_product(q, &blocks.multiset(order, x), &blocks.multiset(order, y));
            let g = t.r(x.a).gcd(&t.r(y.a)) as u64;
            let mut rhs = Multiset::new(order);
            for &c in t.reps() {
                let s = t.s_count(x.a, y.a, c) as u64;
                if s == 0 {
                    continue;
                }
                for gamma in 0..t.s(c) {
                    if t.gamma_condition(x.a, x.alpha, y.a, y.alpha, c, gamma)? {
                        rhs.add_scaled(&blocks.multiset(order, CharacterLabel::new(c, gamma)), g * s);
                    }
                }
            }
            if lhs != rhs {
                return Ok(Some((x, y)));
            }
        }
    }
    Ok(None)
}

/// `S_{a,alpha} S_{b,beta} = r_a gcd(r_a,r_b) sum_{i<r_b} sum_gamma S_{a+bk^i,gamma} / r_{a+bk^i}`,
/// evaluated with rational multiplicities. Returns the first failing pair.
pub fn check_regrouped_form(
    q: &CayleyTable,
    t: &OrbitTable,
    blocks: &BlockAssignment,
) -> Result<Option<(CharacterLabel, CharacterLabel)>> {
    let order = q.order();
    let n = t.params().n();
    let labels: Vec<CharacterLabel> = blocks.blocks().keys().copied().collect();
    for &x in &labels {
        for &y in &labels {
            let lhs = multiset_product(q, &blocks.multiset(order, x), &blocks.multiset(order, y));
            let scale = (t.r(x.a) * t.r(x.a).gcd(&t.r(y.a))) as i64;
            let mut rhs = vec![RationalScalar::zero(); order];
            for &s in t.orbit(y.a) {
                let c = t.rep_of((x.a + s) % n);
                let w = RationalScalar::new(scale, t.r(c) as i64);
                for gamma in 0..t.s(c) {
                    if t.gamma_condition(x.a, x.alpha, y.a, y.alpha, c, gamma)? {
                        for &e in blocks.get(CharacterLabel::new(c, gamma)).unwrap_or(&[]) {
                            rhs[e] = rhs[e] + w;
                        }
                    }
                }
            }
            let equal = (0..order).all(|e| rhs[e] == RationalScalar::integer(lhs.count(e) as i64));
            if !equal {
                return Ok(Some((x, y)));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerEntry {
    pub gamma: usize,
    pub b: usize,
    pub beta: usize,
    /// `gamma` is a multiple of `s_b`, so `S_{0,gamma}` should fix `S_{b,beta}`.
    pub predicted: bool,
    /// `S_{0,gamma} S_{b,beta} = S_{b,beta}` holds.
    pub fixes: bool,
}

/// For every linear block `S_{0,gamma}` and every block `S_{b,beta}`, whether
/// left multiplication by `S_{0,gamma}` fixes `S_{b,beta}` setwise.
pub fn block_stabilizer_check(blocks: &BlockAssignment, q: &CayleyTable, t: &OrbitTable) -> Vec<StabilizerEntry> {
    let order = q.order();
    let mut out = Vec::new();
    for gamma in 0..t.s(0) {
        let g = blocks.multiset(order, CharacterLabel::new(0, gamma));
        for &lbl in blocks.blocks().keys() {
            let target = blocks.multiset(order, lbl);
            let fixes = multiset_product(q, &g, &target) == target;
            out.push(StabilizerEntry {
                gamma,
                b: lbl.a,
                beta: lbl.alpha,
                predicted: gamma % t.s(lbl.a) == 0,
                fixes,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characters::CharacterTable;
    use crate::metacyclic::MetacyclicParams;

    fn ms(order: usize, e: &[usize]) -> Multiset {
        Multiset::from_elements(order, e)
    }

    fn wcq(p: MetacyclicParams) -> WeightedQuasigroup {
        WeightedQuasigroup::from_character_table(&CharacterTable::new(p)).unwrap()
    }

    fn s3_blocks() -> BlockAssignment {
        let mut b = BlockAssignment::new();
        b.insert(CharacterLabel::new(0, 0), vec![0]);
        b.insert(CharacterLabel::new(0, 1), vec![3]);
        b.insert(CharacterLabel::new(1, 0), vec![1, 2, 4, 5]);
        b
    }

    fn z2_cubed() -> CayleyTable {
        let c2 = CayleyTable::cyclic(2);
        c2.direct_product(&c2).direct_product(&c2)
    }

    /// Z/2^3 over D_4: S_{0,*} = {000, 001}, S_{2,*} = {010, 011}, S_1 = the rest.
    fn d4_blocks() -> BlockAssignment {
        let mut b = BlockAssignment::new();
        b.insert(CharacterLabel::new(0, 0), vec![0]);
        b.insert(CharacterLabel::new(0, 1), vec![1]);
        b.insert(CharacterLabel::new(2, 0), vec![2]);
        b.insert(CharacterLabel::new(2, 1), vec![3]);
        b.insert(CharacterLabel::new(1, 0), vec![4, 5, 6, 7]);
        b
    }

    #[test]
    fn multiset_product_examples() {
        let z4 = CayleyTable::cyclic(4);
        assert_eq!(multiset_product(&z4, &ms(4, &[0, 1]), &ms(4, &[0, 2])), ms(4, &[0, 1, 2, 3]));
        let z6 = CayleyTable::cyclic(6);
        assert_eq!(multiset_product(&z6, &ms(6, &[2, 4]), &ms(6, &[2, 4])), ms(6, &[0, 0, 4, 2]));
        let t = ms(6, &[1, 1, 5]);
        assert_eq!(multiset_product(&z6, &ms(6, &[0]), &t), t);
    }

    #[test]
    fn s3_cover_by_z6() {
        let p = MetacyclicParams::validate(2, 0, 2, 3).unwrap();
        let z6 = CayleyTable::cyclic(6);
        let c = s3_blocks().to_covering(&z6, &wcq(p)).unwrap();
        assert!(c.check().passed());
        assert!(c.is_balanced().unwrap());
        let t = OrbitTable::new(p);
        assert_eq!(check_orbit_sum_form(&z6, &t, &s3_blocks()).unwrap(), None);
        assert_eq!(check_regrouped_form(&z6, &t, &s3_blocks()).unwrap(), None);
    }

    #[test]
    fn z8_does_not_cover_d4() {
        let p = MetacyclicParams::dihedral(4).unwrap();
        let z8 = CayleyTable::cyclic(8);
        let target = wcq(p);
        let labels = vec![0, 1, 3, 4, 2, 2, 2, 2];
        let c = Covering::new(z8, target, labels).unwrap();
        let report = c.check();
        assert!(report.weight_violations.is_empty());
        assert!(!report.product_violations.is_empty());
        assert!(matches!(c.is_balanced(), Err(Error::NotACover(_))));
    }

    #[test]
    fn abelian_self_cover() {
        for t in [CayleyTable::cyclic(6), z2_cubed(), CayleyTable::cyclic(4).direct_product(&CayleyTable::cyclic(2))] {
            let target = WeightedQuasigroup::from_quasigroup(&t);
            let c = Covering::new(t.clone(), target, (0..t.order()).collect()).unwrap();
            assert!(c.check().passed());
            assert!(c.is_balanced().unwrap());
        }
    }

    #[test]
    fn d4_cover_by_z2_cubed() {
        let p = MetacyclicParams::dihedral(4).unwrap();
        let q = z2_cubed();
        let c = d4_blocks().to_covering(&q, &wcq(p)).unwrap();
        assert!(c.check().passed());
        assert!(c.is_balanced().unwrap());
        let s1 = ms(8, &[4, 5, 6, 7]);
        let prod = multiset_product(&q, &s1, &s1);
        assert!((0..4).all(|e| prod.count(e) == 4));
    }

    #[test]
    fn stabilizer_examples() {
        let p = MetacyclicParams::validate(2, 0, 2, 3).unwrap();
        let z6 = CayleyTable::cyclic(6);
        let t = OrbitTable::new(p);
        let report = block_stabilizer_check(&s3_blocks(), &z6, &t);
        let entry = |g: usize, b: usize, beta: usize| report.iter().find(|e| (e.gamma, e.b, e.beta) == (g, b, beta)).unwrap();
        assert!(entry(0, 1, 0).fixes && entry(0, 1, 0).predicted);
        assert!(entry(1, 1, 0).fixes && entry(1, 1, 0).predicted);
        assert!(!entry(1, 0, 0).fixes && !entry(1, 0, 0).predicted);
        assert!(report.iter().all(|e| !e.predicted || e.fixes));
    }

    #[test]
    fn block_json_round_trip() {
        let b = s3_blocks();
        let v = b.to_json();
        assert_eq!(v["blocks"]["1,0"], json!([1, 2, 4, 5]));
        assert_eq!(BlockAssignment::from_json(&v).unwrap(), b);
    }
}
