//! Small groups by name: cyclic, abelian, dihedral, dicyclic, every
//! metacyclic `M(k,l,m,n)` of the order, and `A4`.
//!
//! Entries of one order are deduplicated up to isomorphism; the first name
//! in the list above wins. The catalog is complete for orders 8 and 12 and
//! partial in general.

use crate::error::{Error, Result};
use crate::metacyclic::{is_isomorphic, CayleyTable, MetacyclicParams};

#[derive(Clone, Debug)]
pub struct CatalogGroup {
    pub name: String,
    pub table: CayleyTable,
}

/// Invariant factor lists `d_1 | d_2 | ... ` with product `order`, each `d_i >= 2`.
fn invariant_factors(order: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, last: usize, acc: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 1 {
            out.push(acc.clone());
            return;
        }
        // the next factor is a multiple of `last` dividing `rest`,
        // and what remains must still be divisible by it
        for d in (last..=rest).step_by(last.max(1)) {
            if d >= 2 && rest.is_multiple_of(d) && (rest / d == 1 || (rest / d).is_multiple_of(d)) {
                acc.push(d);
                go(rest / d, d, acc, out);
                acc.pop();
            }
        }
    }
    let mut out = Vec::new();
    if order == 1 {
        return vec![vec![]];
    }
    go(order, 1, &mut Vec::new(), &mut out);
    out
}

/// `C_{d_k} x ... x C_{d_1}` from invariant factors, largest first.
pub fn abelian(factors: &[usize]) -> CayleyTable {
    let mut desc = factors.to_vec();
    desc.sort_unstable_by(|a, b| b.cmp(a));
    match desc.split_first() {
        None => CayleyTable::cyclic(1),
        Some((&first, rest)) => rest.iter().fold(CayleyTable::cyclic(first), |t, &d| t.direct_product(&CayleyTable::cyclic(d))),
    }
}

fn alternating4() -> CayleyTable {
    let mut perms: Vec<[usize; 4]> = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    let distinct = (0..4).all(|i| (i + 1..4).all(|j| p[i] != p[j]));
                    let inversions = (0..4).map(|i| (i + 1..4).filter(|&j| p[i] > p[j]).count()).sum::<usize>();
                    if distinct && inversions % 2 == 0 {
                        perms.push(p);
                    }
                }
            }
        }
    }
    let n = perms.len();
    let mut table = Vec::with_capacity(n * n);
    for p in &perms {
        for q in &perms {
            let r = [p[q[0]], p[q[1]], p[q[2]], p[q[3]]];
            table.push(perms.iter().position(|s| *s == r).unwrap());
        }
    }
    CayleyTable::new(n, table).unwrap().with_name("A4")
}

fn named(p: &MetacyclicParams, name: String) -> CayleyTable {
    p.cayley().with_name(name)
}

/// Every catalog group of the given order, deduplicated up to isomorphism.
pub fn catalog(order: usize) -> Result<Vec<CatalogGroup>> {
    if order == 0 || order > 64 {
        return Err(Error::TooLarge(order));
    }
    let mut raw: Vec<CayleyTable> = vec![CayleyTable::cyclic(order)];
    for f in invariant_factors(order).into_iter().rev() {
        raw.push(abelian(&f));
    }
    if order.is_multiple_of(2) && order >= 6 {
        let d = order / 2;
        raw.push(named(&MetacyclicParams::dihedral(d)?, format!("D{d}")));
    }
    if order.is_multiple_of(4) && order >= 8 {
        let l = order / 4;
        raw.push(named(&MetacyclicParams::dicyclic(l)?, format!("Dic{l}")));
    }
    for p in MetacyclicParams::enumerate(order).into_iter().filter(|p| p.order() == order) {
        raw.push(p.cayley());
    }
    if order == 12 {
        raw.push(alternating4());
    }
    let mut out: Vec<CatalogGroup> = Vec::new();
    for t in raw {
        if !out.iter().any(|g| is_isomorphic(&g.table, &t).map(|w| w.is_some()).unwrap_or(false)) {
            let name = t.name().unwrap_or("?").to_string();
            out.push(CatalogGroup { name, table: t });
        }
    }
    Ok(out)
}

/// The catalog entry isomorphic to `t`.
pub fn identify<'a>(groups: &'a [CatalogGroup], t: &CayleyTable) -> Result<Option<&'a CatalogGroup>> {
    for g in groups {
        if g.table.order() == t.order() && is_isomorphic(&g.table, t)?.is_some() {
            return Ok(Some(g));
        }
    }
    Ok(None)
}

/// Looks a group up by catalog name (`C8`, `C4xC2`, `D4`, `Dic3`, `A4`,
/// `M(3,0,2,4)`, ...). Names are matched after isomorphism deduplication,
/// so an alias such as `M(3,0,2,4)` resolves to `D4`.
pub fn group_by_name(name: &str) -> Result<CatalogGroup> {
    let order = order_of_name(name).ok_or_else(|| Error::Parse(format!("unknown group name {name:?}")))?;
    let groups = catalog(order)?;
    if let Some(g) = groups.iter().find(|g| g.name == name) {
        return Ok(g.clone());
    }
    let table = table_of_name(name).ok_or_else(|| Error::Parse(format!("unknown group name {name:?}")))?;
    identify(&groups, &table)?.cloned().ok_or_else(|| Error::Parse(format!("unknown group name {name:?}")))
}

fn table_of_name(name: &str) -> Option<CayleyTable> {
    if name == "A4" {
        return Some(alternating4());
    }
    if let Some(d) = name.strip_prefix("Dic") {
        return MetacyclicParams::dicyclic(d.parse().ok()?).ok().map(|p| p.cayley());
    }
    if let Some(d) = name.strip_prefix('D') {
        return MetacyclicParams::dihedral(d.parse().ok()?).ok().map(|p| p.cayley());
    }
    if let Some(inner) = name.strip_prefix("M(").and_then(|s| s.strip_suffix(')')) {
        let v: Vec<i64> = inner.split(',').map(|s| s.trim().parse().ok()).collect::<Option<_>>()?;
        let [k, l, m, n] = v[..] else { return None };
        return MetacyclicParams::validate(k, l, m, n).ok().map(|p| p.cayley());
    }
    let factors: Vec<usize> =
        name.split('x').map(|f| f.strip_prefix('C')?.parse().ok().filter(|&d: &usize| d >= 1)).collect::<Option<_>>()?;
    let mut t = CayleyTable::cyclic(factors[0]);
    for &d in &factors[1..] {
        t = t.direct_product(&CayleyTable::cyclic(d));
    }
    Some(t)
}

fn order_of_name(name: &str) -> Option<usize> {
    let t = table_of_name(name)?;
    (t.order() <= 64).then_some(t.order())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(order: usize) -> Vec<String> {
        catalog(order).unwrap().into_iter().map(|g| g.name).collect()
    }

    #[test]
    fn complete_small_orders() {
        assert_eq!(names(8), ["C8", "C4xC2", "C2xC2xC2", "D4", "Dic2"]);
        assert_eq!(names(12), ["C12", "C6xC2", "D6", "Dic3", "A4"]);
        assert_eq!(names(6), ["C6", "D3"]);
        assert_eq!(names(7), ["C7"]);
    }

    #[test]
    fn invariant_factor_lists() {
        assert_eq!(invariant_factors(8), vec![vec![2, 2, 2], vec![2, 4], vec![8]]);
        assert_eq!(invariant_factors(12), vec![vec![2, 6], vec![12]]);
    }

    #[test]
    fn lookup_by_name() {
        assert_eq!(group_by_name("C2xC2xC2").unwrap().name, "C2xC2xC2");
        assert_eq!(group_by_name("M(3,0,2,4)").unwrap().name, "D4");
        assert_eq!(group_by_name("C2xC4").unwrap().name, "C4xC2");
        assert!(group_by_name("Q9").is_err());
    }
}
