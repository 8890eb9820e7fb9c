//! Todd-Coxeter coset enumeration over the trivial subgroup.
//!
//! Generators are numbered `0..g`; a relator is a word of nonzero integers
//! where `i + 1` stands for generator `i` and `-(i + 1)` for its inverse.

use crate::error::{Error, Result};
use crate::metacyclic::CayleyTable;

struct Enumeration {
    gens: usize,
    /// `table[c][x]`, with `x = 2i` for generator `i` and `2i + 1` for its inverse.
    table: Vec<Vec<Option<usize>>>,
    parent: Vec<usize>,
    limit: usize,
}

fn letter(v: i32) -> usize {
    let g = (v.unsigned_abs() - 1) as usize;
    if v > 0 {
        2 * g
    } else {
        2 * g + 1
    }
}

impl Enumeration {
    fn rep(&mut self, c: usize) -> usize {
        let mut r = c;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = c;
        while self.parent[c] != r {
            let next = self.parent[c];
            self.parent[c] = r;
            c = next;
        }
        r
    }

    fn define(&mut self, c: usize, x: usize) -> Result<()> {
        if self.table.len() >= self.limit {
            return Err(Error::TooLarge(self.table.len()));
        }
        let d = self.table.len();
        self.table.push(vec![None; 2 * self.gens]);
        self.parent.push(d);
        self.table[c][x] = Some(d);
        self.table[d][x ^ 1] = Some(c);
        Ok(())
    }

    fn merge(&mut self, a: usize, b: usize, queue: &mut Vec<usize>) {
        let (a, b) = (self.rep(a), self.rep(b));
        if a != b {
            let (lo, hi) = (a.min(b), a.max(b));
            self.parent[hi] = lo;
            queue.push(hi);
        }
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut i = 0;
        while i < queue.len() {
            let g = queue[i];
            i += 1;
            for x in 0..2 * self.gens {
                let Some(d) = self.table[g][x] else { continue };
                self.table[d][x ^ 1] = None;
                let (mu, nu) = (self.rep(g), self.rep(d));
                if let Some(t) = self.table[mu][x] {
                    self.merge(nu, t, &mut queue);
                } else if let Some(t) = self.table[nu][x ^ 1] {
                    self.merge(mu, t, &mut queue);
                } else {
                    self.table[mu][x] = Some(nu);
                    self.table[nu][x ^ 1] = Some(mu);
                }
            }
        }
    }

    fn scan_and_fill(&mut self, c: usize, w: &[usize]) -> Result<()> {
        let (mut f, mut b) = (c, c);
        let (mut i, mut j) = (0usize, w.len());
        loop {
            while i < j {
                match self.table[f][w[i]] {
                    Some(t) => {
                        f = t;
                        i += 1;
                    }
                    None => break,
                }
            }
            if i == j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j > i {
                match self.table[b][w[j - 1] ^ 1] {
                    Some(t) => {
                        b = t;
                        j -= 1;
                    }
                    None => break,
                }
            }
            if j == i {
                self.coincidence(f, b);
                return Ok(());
            }
            if j == i + 1 {
                self.table[f][w[i]] = Some(b);
                self.table[b][w[i] ^ 1] = Some(f);
                return Ok(());
            }
            self.define(f, w[i])?;
        }
    }
}

/// The group `<g_0, ..., g_{gens-1} | relators>` as a Cayley table, provided
/// it is finite with at most `limit` elements. Element 0 is the identity and
/// the other elements are numbered in breadth-first order of short words.
pub fn enumerate_group(gens: usize, relators: &[Vec<i32>], limit: usize) -> Result<CayleyTable> {
    if relators.iter().flatten().any(|&v| v == 0 || v.unsigned_abs() as usize > gens) {
        return Err(Error::Parse("relator letter out of range".into()));
    }
    let words: Vec<Vec<usize>> = relators.iter().map(|r| r.iter().map(|&v| letter(v)).collect()).collect();
    let mut e = Enumeration { gens, table: vec![vec![None; 2 * gens]], parent: vec![0], limit };
    let mut c = 0;
    while c < e.table.len() {
        for w in &words {
            if e.parent[c] != c {
                break;
            }
            e.scan_and_fill(c, w)?;
        }
        if e.parent[c] == c {
            for x in 0..2 * gens {
                if e.table[c][x].is_none() {
                    e.define(c, x)?;
                }
            }
        }
        c += 1;
    }

    // Compact the live cosets in breadth-first order from the subgroup coset.
    let total = e.table.len();
    let mut index = vec![usize::MAX; total];
    let mut order = vec![0usize];
    index[0] = 0;
    let mut head = 0;
    while head < order.len() {
        let c = order[head];
        head += 1;
        for x in 0..2 * gens {
            let t = e.table[c][x].map(|t| e.rep(t)).expect("complete coset table");
            if index[t] == usize::MAX {
                index[t] = order.len();
                order.push(t);
            }
        }
    }
    let n = order.len();
    let act = |e: &mut Enumeration, c: usize, x: usize| index[e.table[order[c]][x].map(|t| e.rep(t)).unwrap()];
    // word[c]: letters leading from coset 0 to coset c
    let mut word: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = vec![0usize];
    let mut h = 0;
    while h < queue.len() {
        let c = queue[h];
        h += 1;
        for x in 0..2 * gens {
            let t = act(&mut e, c, x);
            if !seen[t] {
                seen[t] = true;
                word[t] = word[c].clone();
                word[t].push(x);
                queue.push(t);
            }
        }
    }
    let mut table = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let mut c = a;
            for &x in &word[b] {
                c = act(&mut e, c, x);
            }
            table.push(c);
        }
    }
    CayleyTable::new(n, table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metacyclic::is_isomorphic;

    #[test]
    fn small_presentations() {
        // <x | x^5>
        let c5 = enumerate_group(1, &[vec![1; 5]], 100).unwrap();
        assert!(is_isomorphic(&c5, &CayleyTable::cyclic(5)).unwrap().is_some());
        // <x, y | x^4, y^2, (xy)^2> is D_4
        let d4 = enumerate_group(2, &[vec![1; 4], vec![2; 2], vec![1, 2, 1, 2]], 100).unwrap();
        assert_eq!(d4.order(), 8);
        assert!(d4.is_group() && !d4.is_abelian());
        // Q_8 = <x, y | x^4, x^2 y^-2, y^-1 x y x>
        let q8 = enumerate_group(2, &[vec![1; 4], vec![1, 1, -2, -2], vec![-2, 1, 2, 1]], 100).unwrap();
        assert_eq!(q8.order(), 8);
        assert!(is_isomorphic(&q8, &d4).unwrap().is_none());
    }

    #[test]
    fn coset_limit() {
        // Z x Z is infinite
        let r = enumerate_group(2, &[vec![1, 2, -1, -2]], 50);
        assert!(matches!(r, Err(Error::TooLarge(_))));
    }
}
