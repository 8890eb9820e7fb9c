//! Balanced covers of split metacyclic groups `M(k, 0, m, n)` from an
//! element `q` of order `m` and sets `T_a` of size `r_a`.
//!
//! When `q T_a = T_a q`, the translates `q^g T_a` cover `Q`, and
//! `T_a T_b = sum_c S(a,b,c) T_c`, the blocks
//! `S_{a,alpha} = (sum_{i<r_a} q^(s_a i + alpha)) T_a` form a balanced cover.
//! The standard source of such witnesses is `Q = C_n x|_b C_m` with
//! `b = k^sigma`, `q = (0, 1)` and `T_a = Ka x {0}`.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::characters::{CharacterLabel, CharacterTable};
use crate::covers::{check_orbit_sum_form, check_regrouped_form, multiset_product, BlockAssignment, Multiset};
use crate::error::{Error, Result};
use crate::metacyclic::{CayleyTable, MetacyclicParams};
use crate::orbits::OrbitTable;
use crate::wqg::WeightedQuasigroup;

#[derive(Clone, Debug)]
pub struct SplitWitness {
    pub table: CayleyTable,
    pub q: usize,
    /// `T_a` keyed by orbit representative `a`.
    pub t: BTreeMap<usize, Vec<usize>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SplitReport {
    /// `q` has order `m`.
    pub order: bool,
    /// `|T_a| = r_a`, pairwise disjoint.
    pub sizes: bool,
    /// `q T_a = T_a q` for every `a`.
    pub commutes: bool,
    /// The translates `q^g T_a` cover `Q`.
    pub union: bool,
    /// `T_a T_b = sum_c S(a,b,c) T_c`.
    pub products: bool,
}

impl SplitReport {
    pub fn passed(&self) -> bool {
        self.order && self.sizes && self.commutes && self.union && self.products
    }

    pub fn to_json(&self) -> Value {
        json!({
            "order": self.order,
            "sizes": self.sizes,
            "commutes": self.commutes,
            "union": self.union,
            "products": self.products,
            "passed": self.passed(),
        })
    }
}

pub fn split_hypotheses(w: &SplitWitness, orbits: &OrbitTable) -> SplitReport {
    let tab = &w.table;
    let order = tab.order();
    let m = orbits.params().m();
    let mut report = SplitReport::default();
    report.order = tab.identity().is_some() && tab.element_order(w.q) == m;
    let mut seen = vec![false; order];
    report.sizes = orbits.reps().iter().all(|&a| {
        w.t.get(&a).is_some_and(|ta| {
            ta.len() == orbits.r(a) && ta.iter().all(|&e| e < order && !std::mem::replace(&mut seen[e], true))
        })
    }) && w.t.len() == orbits.reps().len();
    if !report.sizes || !report.order {
        return report;
    }
    let set = |v: &[usize]| Multiset::from_elements(order, v);
    report.commutes = w.t.values().all(|ta| {
        let left: Vec<usize> = ta.iter().map(|&x| tab.mul(w.q, x)).collect();
        let right: Vec<usize> = ta.iter().map(|&x| tab.mul(x, w.q)).collect();
        set(&left) == set(&right)
    });
    let mut covered = vec![false; order];
    for g in 1..=m {
        let qg = tab.pow(w.q, g);
        for ta in w.t.values() {
            for &x in ta {
                covered[tab.mul(qg, x)] = true;
            }
        }
    }
    report.union = covered.iter().all(|&c| c);
    report.products = orbits.reps().iter().all(|&a| {
        orbits.reps().iter().all(|&b| {
            let lhs = multiset_product(tab, &set(&w.t[&a]), &set(&w.t[&b]));
            let mut rhs = Multiset::new(order);
            for &c in orbits.reps() {
                rhs.add_scaled(&set(&w.t[&c]), orbits.s_count(a, b, c) as u64);
            }
            lhs == rhs
        })
    });
    report
}

/// `S_{a,alpha} = union_{i<r_a} q^(s_a i + alpha) T_a`.
pub fn split_blocks(w: &SplitWitness, orbits: &OrbitTable) -> BlockAssignment {
    let tab = &w.table;
    let mut blocks = BlockAssignment::new();
    for &a in orbits.reps() {
        for alpha in 0..orbits.s(a) {
            let mut s = Vec::new();
            for i in 0..orbits.r(a) {
                let qg = tab.pow(w.q, orbits.s(a) * i + alpha);
                s.extend(w.t[&a].iter().map(|&x| tab.mul(qg, x)));
            }
            blocks.insert(CharacterLabel::new(a, alpha), s);
        }
    }
    blocks
}

#[derive(Clone, Debug)]
pub struct SplitCover {
    pub target: MetacyclicParams,
    pub witness: SplitWitness,
    pub hypotheses: SplitReport,
    pub blocks: BlockAssignment,
    /// Both block product forms hold and the covering is balanced.
    pub balanced: bool,
}

impl SplitCover {
    pub fn to_json(&self) -> Value {
        let t: BTreeMap<String, &Vec<usize>> = self.witness.t.iter().map(|(a, v)| (a.to_string(), v)).collect();
        json!({
            "target": self.target.to_string(),
            "group": self.witness.table.name(),
            "q": self.witness.q,
            "T": t,
            "hypotheses": self.hypotheses.to_json(),
            "blocks": self.blocks.to_json()["blocks"],
            "balanced": self.balanced,
        })
    }
}

/// Checks the hypotheses and, when they hold, whether the derived blocks
/// form a balanced cover of the character quasigroup of `target`.
pub fn verify_split_witness(target: &MetacyclicParams, witness: SplitWitness) -> Result<SplitCover> {
    if target.l() != 0 {
        return Err(Error::InvalidParams(format!("{target} is not split")));
    }
    if witness.table.order() != target.order() {
        return Err(Error::OrderMismatch { left: witness.table.order(), right: target.order() });
    }
    let ct = CharacterTable::new(*target);
    let orbits = ct.orbits();
    let hypotheses = split_hypotheses(&witness, orbits);
    let (blocks, balanced) = if hypotheses.sizes && hypotheses.order {
        let blocks = split_blocks(&witness, orbits);
        let wqg = WeightedQuasigroup::from_character_table(&ct)?;
        let balanced = check_orbit_sum_form(&witness.table, orbits, &blocks)?.is_none()
            && check_regrouped_form(&witness.table, orbits, &blocks)?.is_none()
            && blocks.to_covering(&witness.table, &wqg).and_then(|c| c.is_balanced()).unwrap_or(false);
        (blocks, balanced)
    } else {
        (BlockAssignment::new(), false)
    };
    Ok(SplitCover { target: *target, witness, hypotheses, blocks, balanced })
}

/// `C_n x|_b C_m` with `b = k^sigma mod n`: `(x1, j1)(x2, j2) = (x1 + b^j1 x2, j1 + j2)`,
/// element `(x, j)` at index `j n + x`.
pub fn semidirect(n: usize, m: usize, b: usize) -> Result<CayleyTable> {
    let order = n * m;
    if order == 0 || order > 64 {
        return Err(Error::TooLarge(order));
    }
    let powers: Vec<usize> = (0..m).scan(1 % n, |acc, _| {
        let v = *acc;
        *acc = *acc * b % n;
        Some(v)
    }).collect();
    if (powers[m - 1] * b) % n != 1 % n {
        return Err(Error::InvalidSigma(format!("b = {b} has b^{m} != 1 mod {n}")));
    }
    let mut table = Vec::with_capacity(order * order);
    for e1 in 0..order {
        let (j1, x1) = (e1 / n, e1 % n);
        for e2 in 0..order {
            let (j2, x2) = (e2 / n, e2 % n);
            let x = (x1 + powers[j1] * x2) % n;
            table.push((j1 + j2) % m * n + x);
        }
    }
    let names = (0..order).map(|e| format!("({},{})", e % n, e / n)).collect();
    Ok(CayleyTable::new(order, table)?.with_name(format!("C{n}:C{m}[{b}]")).with_element_names(names))
}

/// Builds `C_n x|_b C_m` with `b = k^sigma`, the witness `q = (0,1)`,
/// `T_a = Ka x {0}`, and checks it against `M(k, 0, m, n)`.
/// `sigma` is an exponent of `k`; negative values are rejected.
pub fn split_cover_construct(n: i64, m: i64, k: i64, sigma: i64) -> Result<SplitCover> {
    if sigma < 0 {
        return Err(Error::InvalidSigma(format!("sigma = {sigma} must be a nonnegative exponent of k")));
    }
    let target = MetacyclicParams::validate(k, 0, m, n)?;
    let (n, m) = (target.n(), target.m());
    let b = crate::metacyclic::pow_mod(target.k(), sigma as usize, n);
    let table = semidirect(n, m, b)?;
    let orbits = OrbitTable::new(target);
    let q = (1 % m) * n; // (0, 1)
    let t = orbits.reps().iter().map(|&a| (a, orbits.orbit(a).to_vec())).collect();
    verify_split_witness(&target, SplitWitness { table, q, t })
}
