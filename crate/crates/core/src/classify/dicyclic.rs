//! Balanced covers of `Dic_l = M(-1, l, 2, 2l)`.
//!
//! A witness merges the two linear blocks over `0` and over `l`:
//! `S_0 = {x_0, y_0}` and `S_l = {x_l, y_l}`, with interior blocks `S_a` of
//! size 4 for `0 < a < l`. It is a cover when
//!
//! - `<S_0, S_l>` is `C2 x C2` for even `l` and `C4` for odd `l`;
//! - `S_a S_b = (4 gcd(r_a,r_b) / r_b) sum_{i<r_b} S_{a+b(-1)^i} / r_{a+b(-1)^i}`
//!   whenever `(r_a, r_b) != (1, 1)`, indices mod `2l` with `S_h = S_{-h}`.

use std::collections::BTreeSet;

use num_integer::Integer;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::catalog::{abelian, catalog, identify, CatalogGroup};
use super::presentation::enumerate_group;
use crate::characters::CharacterLabel;
use crate::covers::{find_balanced_group_cover, multiset_product, BlockAssignment, Multiset};
use crate::cyclotomic::RationalScalar;
use crate::error::{Error, Result};
use crate::metacyclic::{is_isomorphic, CayleyTable, MetacyclicParams};
use crate::orbits::OrbitTable;

#[derive(Clone, Debug)]
pub struct DicyclicWitness {
    pub table: CayleyTable,
    /// `[x_0, y_0]` with `x_0 y_0 = y_0`.
    pub s0: [usize; 2],
    /// `[x_l, y_l]` with `y_0 x_l = y_l` when the witness is sound.
    pub sl: [usize; 2],
    /// `S_1, ..., S_{l-1}`.
    pub interior: Vec<Vec<usize>>,
}

impl DicyclicWitness {
    /// Orders `S_0` so that `x_0 y_0 = y_0`, and `S_l` by `x_l < y_l`.
    pub fn new(table: CayleyTable, s0: [usize; 2], sl: [usize; 2], interior: Vec<Vec<usize>>) -> Self {
        let s0 = if table.mul(s0[1], s0[0]) == s0[0] && table.mul(s0[0], s0[1]) != s0[1] { [s0[1], s0[0]] } else { s0 };
        let sl = [sl[0].min(sl[1]), sl[0].max(sl[1])];
        DicyclicWitness { table, s0, sl, interior }
    }

    pub fn l(&self) -> usize {
        self.interior.len() + 1
    }

    pub fn block(&self, h: i64) -> Vec<usize> {
        let l = self.l() as i64;
        let mut h = h.rem_euclid(2 * l);
        if h > l {
            h = 2 * l - h;
        }
        if h == 0 {
            self.s0.to_vec()
        } else if h == l {
            self.sl.to_vec()
        } else {
            self.interior[h as usize - 1].clone()
        }
    }

    fn r(&self, h: i64) -> i64 {
        let l = self.l() as i64;
        if h.rem_euclid(l) == 0 {
            1
        } else {
            2
        }
    }

    /// Merges the blocks of a cover of `Dic_l`.
    pub fn from_blocks(table: &CayleyTable, l: usize, blocks: &BlockAssignment) -> Result<Self> {
        let get = |a: usize, alpha: usize| -> Result<&[usize]> {
            blocks.get(CharacterLabel::new(a, alpha)).ok_or(Error::LabelOutOfRange { a, alpha })
        };
        let pair = |a: usize| -> Result<[usize; 2]> {
            match (get(a, 0)?, get(a, 1)?) {
                (&[u], &[v]) => Ok([u, v]),
                _ => Err(Error::SizeMismatch(format!("blocks over {a} must be singletons"))),
            }
        };
        let interior = (1..l).map(|a| get(a, 0).map(<[usize]>::to_vec)).collect::<Result<Vec<_>>>()?;
        Ok(Self::new(table.clone(), pair(0)?, pair(l)?, interior))
    }

    pub fn to_json(&self) -> Value {
        json!({ "S_0": self.s0, "S_l": self.sl, "interior": self.interior })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DicyclicReport {
    /// `<S_0, S_l>` has the required isomorphism type.
    pub subgroup: bool,
    /// Pairs `(a, b)` failing the block product equation.
    pub equation_failures: Vec<(usize, usize)>,
    /// `y_0 x_l = y_l`, `y_0 y_l = x_l`, `x_l^2 = y_0^l`.
    pub quartet: [bool; 3],
    /// `S_a S_0 = 2 S_a` for every interior `a`.
    pub interior_fixed: bool,
}

impl DicyclicReport {
    pub fn passed(&self) -> bool {
        self.subgroup && self.equation_failures.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "subgroup": self.subgroup,
            "equation_failures": self.equation_failures,
            "quartet": self.quartet,
            "interior_fixed": self.interior_fixed,
            "passed": self.passed(),
        })
    }
}

/// `y^1 = y`, `y^(j+1) = y^j y`.
fn left_power(t: &CayleyTable, y: usize, e: usize) -> usize {
    (1..e).fold(y, |acc, _| t.mul(acc, y))
}

pub fn dicyclic_check(w: &DicyclicWitness) -> Result<DicyclicReport> {
    let t = &w.table;
    let order = t.order();
    let l = w.l();
    if order != 4 * l || w.interior.iter().any(|s| s.len() != 4) {
        return Err(Error::SizeMismatch(format!("a witness of order {order} needs l = {} and blocks 2, 4, ..., 4, 2", order / 4)));
    }
    let mut seen = vec![0usize; order];
    for &e in w.s0.iter().chain(&w.sl).chain(w.interior.iter().flatten()) {
        if e >= order {
            return Err(Error::SizeMismatch(format!("element {e} out of range")));
        }
        seen[e] += 1;
    }
    if seen.iter().any(|&c| c != 1) {
        return Err(Error::SizeMismatch("blocks must partition the quasigroup".into()));
    }
    let mut report = DicyclicReport::default();

    let gens: Vec<usize> = w.s0.iter().chain(&w.sl).copied().collect();
    let closed = t.closure(&gens);
    let model = if l.is_multiple_of(2) { abelian(&[2, 2]) } else { CayleyTable::cyclic(4) };
    report.subgroup = closed.len() == 4
        && t.restrict(&closed).is_some_and(|sub| sub.is_group() && is_isomorphic(&sub, &model).map(|m| m.is_some()).unwrap_or(false));

    let li = l as i64;
    let set = |h: i64| Multiset::from_elements(order, &w.block(h));
    for a in 0..=li {
        for b in 0..=li {
            let (ra, rb) = (w.r(a), w.r(b));
            if ra == 1 && rb == 1 {
                continue;
            }
            let lhs = multiset_product(t, &set(a), &set(b));
            let mut rhs = vec![RationalScalar::zero(); order];
            for i in 0..rb {
                let c = if i == 0 { a + b } else { a - b };
                let coeff = RationalScalar::new(4 * ra.gcd(&rb), rb * w.r(c));
                for e in w.block(c) {
                    rhs[e] = rhs[e] + coeff;
                }
            }
            if (0..order).any(|e| rhs[e] != RationalScalar::integer(lhs.count(e) as i64)) {
                report.equation_failures.push((a as usize, b as usize));
            }
        }
    }

    let ([_, y0], [xl, yl]) = (w.s0, w.sl);
    report.quartet = [t.mul(y0, xl) == yl, t.mul(y0, yl) == xl, t.mul(xl, xl) == left_power(t, y0, l)];
    report.interior_fixed = (1..li).all(|a| {
        let mut twice = Multiset::new(order);
        twice.add_scaled(&set(a), 2);
        multiset_product(t, &set(a), &set(0)) == twice
    });
    Ok(report)
}

/// Which two of `x_1^2, x_1 y_1, y_1 x_1, y_1^2` lie in `S_0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SquareCase {
    /// `x_1^2, y_1^2`
    A,
    /// `x_1^2, x_1 y_1`
    B,
    /// `x_1^2, y_1 x_1`
    C,
    /// `x_1 y_1, y_1 x_1`
    D,
}

/// Where `x_1 y_0` lands.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwistCase {
    /// `x_1 y_0 = x_1`
    Fixed,
    /// `x_1 y_0 = y_1`
    Swap,
    /// `x_1 y_0 = y_0 x_1` and `y_1 y_0 = y_0 y_1`
    Commute,
    /// `x_1 y_0 = y_0 y_1`
    Conjugate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DicyclicCase {
    pub x1: usize,
    pub y1: usize,
    pub square: SquareCase,
    pub twist: TwistCase,
    /// `x_1 y_1 = y_1 x_1`.
    pub commuting: bool,
}

impl DicyclicCase {
    pub fn to_json(&self) -> Value {
        json!({
            "x1": self.x1,
            "y1": self.y1,
            "square": format!("{:?}", self.square),
            "twist": format!("{:?}", self.twist),
            "commuting": self.commuting,
        })
    }
}

fn violation(msg: impl Into<String>) -> Error {
    Error::CaseAnalysisViolation(msg.into())
}

/// Case analysis of a passing witness over a group. Writes
/// `S_1 = {x_1, y_1, y_0 x_1, y_0 y_1}` and classifies the products of
/// `x_1, y_1`; the cases ruled out for groups raise `CaseAnalysisViolation`.
pub fn dicyclic_case(w: &DicyclicWitness) -> Result<DicyclicCase> {
    let t = &w.table;
    if !t.is_group() {
        return Err(Error::NotAGroup("case analysis needs a group witness".into()));
    }
    if w.l() < 2 {
        return Err(Error::IllPosed("case analysis needs an interior block (l >= 2)".into()));
    }
    let report = dicyclic_check(w)?;
    if !report.passed() {
        return Err(Error::NotACover("witness fails the dicyclic conditions".into()));
    }
    let [x0, y0] = w.s0;
    if Some(x0) != t.identity() {
        return Err(violation("x_0 is not the identity"));
    }
    let s1 = &w.interior[0];
    let mut x1 = *s1.iter().min().unwrap();
    let mut y1 = *s1.iter().filter(|&&v| v != x1 && v != t.mul(y0, x1)).min().unwrap();
    let expect: BTreeSet<usize> = s1.iter().copied().collect();
    let got: BTreeSet<usize> = [x1, y1, t.mul(y0, x1), t.mul(y0, y1)].into_iter().collect();
    if got != expect {
        return Err(violation("S_1 is not (x_0 + y_0)(x_1 + y_1)"));
    }
    let inside = |v: usize| v == x0 || v == y0;
    let pattern = |x1: usize, y1: usize| {
        [t.mul(x1, x1), t.mul(x1, y1), t.mul(y1, x1), t.mul(y1, y1)].map(inside)
    };
    let mut p = pattern(x1, y1);
    if !p[0] && p[3] {
        std::mem::swap(&mut x1, &mut y1);
        p = pattern(x1, y1);
    }
    let square = match p {
        [true, false, false, true] => SquareCase::A,
        [true, true, false, false] => SquareCase::B,
        [true, false, true, false] => SquareCase::C,
        [false, true, true, false] => SquareCase::D,
        other => return Err(violation(format!("S_0 membership of the four products is {other:?}"))),
    };
    let commuting = t.mul(x1, y1) == t.mul(y1, x1);
    match square {
        SquareCase::C => return Err(violation("x_1^2 and y_1 x_1 both in S_0 in a group")),
        SquareCase::B if !(t.mul(x1, y1) == y0 && t.mul(x1, x1) == x0) => {
            return Err(violation("x_1 y_1 = y_0 and x_1^2 = x_0 fail"))
        }
        SquareCase::D if !commuting => return Err(violation("x_1 y_1 != y_1 x_1")),
        _ => {}
    }
    let v = t.mul(x1, y0);
    let twist = if v == x1 {
        return Err(violation("x_1 y_0 = x_1 in a group"));
    } else if v == y1 {
        TwistCase::Swap
    } else if v == t.mul(y0, x1) {
        if t.mul(y1, y0) != t.mul(y0, y1) {
            return Err(violation("x_1 commutes with y_0 but y_1 does not"));
        }
        TwistCase::Commute
    } else if v == t.mul(y0, y1) {
        TwistCase::Conjugate
    } else {
        return Err(violation("x_1 y_0 is outside {x_1, y_1, y_0 x_1, y_0 y_1}"));
    };
    Ok(DicyclicCase { x1, y1, square, twist, commuting })
}

/// `<x, y | x^4, y^2, (xy)^l, x^2 y x^-2 y^-1>`.
pub fn third_family_group(l: usize) -> Result<CayleyTable> {
    let xy: Vec<i32> = [1, 2].repeat(l);
    let t = enumerate_group(2, &[vec![1; 4], vec![2; 2], xy, vec![1, 1, 2, -1, -1, -2]], 64 * 64)?;
    Ok(t.with_name(format!("<x,y|x^4,y^2,(xy)^{l},[x^2,y]>")))
}

/// The groups the classification predicts to cover `Dic_l`:
/// `C_{4l}` for odd `l`; `C_{2l} x C2` and `D_{2l}` for even `l`; and the
/// third-family group when `l = 1, 2 mod 4` and it has order `4l`.
/// Names are catalog names where the catalog has the group.
pub fn dicyclic_predicted_set(l: usize) -> Result<Vec<CatalogGroup>> {
    if l == 0 || 4 * l > 64 {
        return Err(Error::InvalidParams(format!("l = {l} out of range")));
    }
    let mut tables = Vec::new();
    if l % 2 == 1 {
        tables.push(CayleyTable::cyclic(4 * l));
    } else {
        tables.push(abelian(&[2, 2 * l]));
        tables.push(MetacyclicParams::dihedral(2 * l)?.cayley().with_name(format!("D{}", 2 * l)));
    }
    if matches!(l % 4, 1 | 2) {
        let third = third_family_group(l)?;
        if third.order() == 4 * l {
            tables.push(third);
        }
    }
    let groups = catalog(4 * l)?;
    let mut out: Vec<CatalogGroup> = Vec::new();
    for t in tables {
        let g = match identify(&groups, &t)? {
            Some(g) => g.clone(),
            None => CatalogGroup { name: t.name().unwrap_or("?").to_string(), table: t },
        };
        if !out.iter().any(|o| o.name == g.name) {
            out.push(g);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct DicyclicOutcome {
    pub group: String,
    pub predicted: bool,
    pub blocks: Option<BlockAssignment>,
    /// Case analysis of the found cover.
    pub case: Option<std::result::Result<DicyclicCase, String>>,
}

#[derive(Clone, Debug)]
pub struct DicyclicClassification {
    pub l: usize,
    pub predicted: Vec<String>,
    pub outcomes: Vec<DicyclicOutcome>,
}

impl DicyclicClassification {
    pub fn found(&self) -> impl Iterator<Item = &DicyclicOutcome> {
        self.outcomes.iter().filter(|o| o.blocks.is_some())
    }

    /// Found exactly when predicted, for every candidate.
    pub fn matches(&self) -> bool {
        self.outcomes.iter().all(|o| o.blocks.is_some() == o.predicted)
    }

    pub fn mismatches(&self) -> Vec<&DicyclicOutcome> {
        self.outcomes.iter().filter(|o| o.blocks.is_some() != o.predicted).collect()
    }

    /// `{"l", "predicted", "found": [{"group", "blocks", "case"}], "match"}`.
    pub fn to_json(&self) -> Value {
        let found: Vec<Value> = self
            .found()
            .map(|o| {
                let case = match &o.case {
                    Some(Ok(c)) => c.to_json(),
                    Some(Err(e)) => json!({ "error": e }),
                    None => Value::Null,
                };
                json!({ "group": o.group, "blocks": o.blocks.as_ref().unwrap().to_json()["blocks"], "case": case })
            })
            .collect();
        json!({ "l": self.l, "predicted": self.predicted, "found": found, "match": self.matches() })
    }
}

/// Runs the generic search for every catalog group of order `4l`, plus any
/// predicted group missing from the catalog.
pub fn classify_dicyclic(l: usize) -> Result<DicyclicClassification> {
    let params = MetacyclicParams::dicyclic(l)?;
    let predicted = dicyclic_predicted_set(l)?;
    let mut candidates = catalog(4 * l)?;
    for p in &predicted {
        if !candidates.iter().any(|c| c.name == p.name) {
            candidates.push(p.clone());
        }
    }
    let outcomes = candidates
        .par_iter()
        .map(|g| {
            let blocks = find_balanced_group_cover(&params, &g.table)?;
            let case = match &blocks {
                Some(b) if l >= 2 => Some(
                    DicyclicWitness::from_blocks(&g.table, l, b)
                        .and_then(|w| dicyclic_case(&w))
                        .map_err(|e| e.to_string()),
                ),
                _ => None,
            };
            Ok(DicyclicOutcome {
                group: g.name.clone(),
                predicted: predicted.iter().any(|p| p.name == g.name),
                blocks,
                case,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DicyclicClassification { l, predicted: predicted.into_iter().map(|g| g.name).collect(), outcomes })
}

/// Triples `(a, b, c)` of orbit representatives of `Dic_l` with
/// `S(a,b,c) != 0` but `{a/2} + {b/2} - {c/2}` not an integer.
pub fn half_fraction_violations(l: usize) -> Result<Vec<(usize, usize, usize)>> {
    let t = OrbitTable::new(MetacyclicParams::dicyclic(l)?);
    let half = |a: usize| RationalScalar::new(a as i64, 2).fract_part();
    let mut out = Vec::new();
    for &a in t.reps() {
        for &b in t.reps() {
            for &c in t.reps() {
                if t.s_count(a, b, c) != 0 && !(half(a) + half(b) - half(c)).is_integer() {
                    out.push((a, b, c));
                }
            }
        }
    }
    Ok(out)
}
