//! Isomorphism testing for small group tables (order <= 64).
//!
//! A generating sequence of the first group is chosen greedily; images of
//! the generators are then searched among elements of matching order, and
//! each partial assignment is extended along the Cayley graph so that an
//! inconsistency prunes the branch immediately.

use super::CayleyTable;
use crate::error::{Error, Result};

fn order_profile(t: &CayleyTable) -> Vec<usize> {
    let mut orders: Vec<usize> = (0..t.order()).map(|a| t.element_order(a)).collect();
    orders.sort_unstable();
    orders
}

/// Greedy generating sequence, preferring elements of large order.
fn generators(t: &CayleyTable) -> Vec<usize> {
    let mut by_order: Vec<usize> = (0..t.order()).collect();
    by_order.sort_by_key(|&a| (std::cmp::Reverse(t.element_order(a)), a));
    let e = t.identity().unwrap();
    let mut gens = Vec::new();
    let mut span = vec![e];
    for a in by_order {
        if span.len() == t.order() {
            break;
        }
        if !span.contains(&a) {
            gens.push(a);
            span = t.closure(&[&gens[..], &[e]].concat());
        }
    }
    gens
}

/// Extends `images` (generator -> image) to the subgroup they generate.
/// Returns the partial map, or `None` on a conflict.
fn extend(t1: &CayleyTable, t2: &CayleyTable, gens: &[usize], images: &[usize]) -> Option<Vec<Option<usize>>> {
    let n = t1.order();
    let mut map = vec![None; n];
    let mut used = vec![false; n];
    let (e1, e2) = (t1.identity().unwrap(), t2.identity().unwrap());
    map[e1] = Some(e2);
    used[e2] = true;
    let mut queue = vec![e1];
    let mut head = 0;
    while head < queue.len() {
        let a = queue[head];
        head += 1;
        let fa = map[a].unwrap();
        for (&g, &fg) in gens.iter().zip(images) {
            let b = t1.mul(a, g);
            let fb = t2.mul(fa, fg);
            match map[b] {
                Some(existing) if existing != fb => return None,
                Some(_) => {}
                None => {
                    if std::mem::replace(&mut used[fb], true) {
                        return None;
                    }
                    map[b] = Some(fb);
                    queue.push(b);
                }
            }
        }
    }
    Some(map)
}

fn search(
    t1: &CayleyTable,
    t2: &CayleyTable,
    gens: &[usize],
    candidates: &[Vec<usize>],
    images: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    let depth = images.len();
    if depth == gens.len() {
        let map = extend(t1, t2, gens, images)?;
        return map.into_iter().collect();
    }
    for &c in &candidates[depth] {
        images.push(c);
        if extend(t1, t2, &gens[..=depth], images).is_some() {
            if let Some(found) = search(t1, t2, gens, candidates, images) {
                return Some(found);
            }
        }
        images.pop();
    }
    None
}

/// Returns a witness isomorphism `phi` (with `phi[a]` the image of `a`) when
/// the two group tables are isomorphic.
pub fn is_isomorphic(t1: &CayleyTable, t2: &CayleyTable) -> Result<Option<Vec<usize>>> {
    if t1.order() != t2.order() {
        return Err(Error::OrderMismatch { left: t1.order(), right: t2.order() });
    }
    if t1.order() > 64 {
        return Err(Error::TooLarge(t1.order()));
    }
    for t in [t1, t2] {
        if !t.is_group() {
            return Err(Error::NotAGroup(t.name().unwrap_or("table").to_string()));
        }
    }
    if order_profile(t1) != order_profile(t2) {
        return Ok(None);
    }
    let gens = generators(t1);
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&g| {
            let og = t1.element_order(g);
            (0..t2.order()).filter(|&c| t2.element_order(c) == og).collect()
        })
        .collect();
    Ok(search(t1, t2, &gens, &candidates, &mut Vec::new()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metacyclic::MetacyclicParams;

    fn is_hom(t1: &CayleyTable, t2: &CayleyTable, phi: &[usize]) -> bool {
        (0..t1.order()).all(|a| (0..t1.order()).all(|b| phi[t1.mul(a, b)] == t2.mul(phi[a], phi[b])))
    }

    #[test]
    fn examples() {
        let c4 = CayleyTable::cyclic(4);
        let v4 = CayleyTable::cyclic(2).direct_product(&CayleyTable::cyclic(2));
        assert_eq!(is_isomorphic(&c4, &v4).unwrap(), None);
        let c6 = CayleyTable::cyclic(6);
        let c2c3 = CayleyTable::cyclic(2).direct_product(&CayleyTable::cyclic(3));
        let phi = is_isomorphic(&c6, &c2c3).unwrap().unwrap();
        assert!(is_hom(&c6, &c2c3, &phi));
        let d4 = MetacyclicParams::dihedral(4).unwrap().cayley();
        let q8 = MetacyclicParams::dicyclic(2).unwrap().cayley();
        assert_eq!(is_isomorphic(&d4, &q8).unwrap(), None);
        assert!(matches!(is_isomorphic(&c4, &c6), Err(Error::OrderMismatch { .. })));
    }

    #[test]
    fn redundant_parameterizations() {
        // M(2,0,2,3) and M(5,0,2,3)... k is reduced, so use distinct tuples for S_3.
        let s3a = MetacyclicParams::validate(2, 0, 2, 3).unwrap().cayley();
        let s3b = MetacyclicParams::validate(-1, 0, 2, 3).unwrap().cayley();
        assert!(is_isomorphic(&s3a, &s3b).unwrap().is_some());
        // Z/6 written as M(1,1,2,3): y^2 = x.
        let c6 = MetacyclicParams::validate(1, 1, 2, 3).unwrap().cayley();
        assert!(is_isomorphic(&c6, &CayleyTable::cyclic(6)).unwrap().is_some());
        // The order-12 group <x,y | x^3, y^4, x^y = x^2> is not dihedral.
        let t12 = MetacyclicParams::validate(2, 0, 4, 3).unwrap().cayley();
        let d6 = MetacyclicParams::dihedral(6).unwrap().cayley();
        assert!(is_isomorphic(&t12, &d6).unwrap().is_none());
        let dic3 = MetacyclicParams::dicyclic(3).unwrap().cayley();
        let phi = is_isomorphic(&t12, &dic3).unwrap().unwrap();
        assert!(is_hom(&t12, &dic3, &phi));
    }

    #[test]
    fn relabelled_tables_are_isomorphic() {
        let t = MetacyclicParams::validate(3, 0, 4, 8).unwrap().cayley();
        let n = t.order();
        // conjugate the labels by a fixed permutation
        let perm: Vec<usize> = (0..n).map(|a| (a * 5 + 3) % n).collect();
        let mut inv = vec![0; n];
        for (a, &p) in perm.iter().enumerate() {
            inv[p] = a;
        }
        let table: Vec<usize> = (0..n * n).map(|idx| perm[t.mul(inv[idx / n], inv[idx % n])]).collect();
        let u = CayleyTable::new(n, table).unwrap();
        let phi = is_isomorphic(&t, &u).unwrap().unwrap();
        assert!(is_hom(&t, &u, &phi));
    }
}
