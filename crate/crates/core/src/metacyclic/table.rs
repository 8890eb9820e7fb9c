use std::fmt::Write as _;

use crate::error::{Error, Result};

/// A finite quasigroup given by its multiplication table.
///
/// Construction rejects anything that is not a Latin square, so every
/// `CayleyTable` has unique left and right division.
#[derive(Clone, Debug)]
pub struct CayleyTable {
    order: usize,
    table: Vec<usize>,
    name: Option<String>,
    element_names: Option<Vec<String>>,
}

impl PartialEq for CayleyTable {
    /// Two tables are equal when their multiplication is; names are ignored.
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.table == other.table
    }
}

impl Eq for CayleyTable {}

impl CayleyTable {
    /// `table[a * order + b]` is the index of `a * b`.
    pub fn new(order: usize, table: Vec<usize>) -> Result<Self> {
        if order == 0 {
            return Err(Error::NotLatin("empty table".into()));
        }
        if table.len() != order * order {
            return Err(Error::NotLatin(format!("expected {} entries, got {}", order * order, table.len())));
        }
        if let Some(&bad) = table.iter().find(|&&v| v >= order) {
            return Err(Error::NotLatin(format!("entry {bad} out of range for order {order}")));
        }
        for r in 0..order {
            let mut seen = vec![false; order];
            for c in 0..order {
                let v = table[r * order + c];
                if std::mem::replace(&mut seen[v], true) {
                    return Err(Error::NotLatin(format!("symbol {v} repeated in row {r}")));
                }
            }
        }
        for c in 0..order {
            let mut seen = vec![false; order];
            for r in 0..order {
                let v = table[r * order + c];
                if std::mem::replace(&mut seen[v], true) {
                    return Err(Error::NotLatin(format!("symbol {v} repeated in column {c}")));
                }
            }
        }
        Ok(CayleyTable { order, table, name: None, element_names: None })
    }

    pub fn from_rows(rows: &[Vec<usize>]) -> Result<Self> {
        let order = rows.len();
        if rows.iter().any(|r| r.len() != order) {
            return Err(Error::NotLatin("table is not square".into()));
        }
        Self::new(order, rows.concat())
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn with_element_names(mut self, names: Vec<String>) -> Self {
        assert_eq!(names.len(), self.order);
        self.element_names = Some(names);
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn element_name(&self, a: usize) -> String {
        match &self.element_names {
            Some(names) => names[a].clone(),
            None => a.to_string(),
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn row(&self, a: usize) -> &[usize] {
        &self.table[a * self.order..(a + 1) * self.order]
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|a| self.row(a).to_vec()).collect()
    }

    /// Addition table of `Z/n`.
    pub fn cyclic(n: usize) -> Self {
        let table = (0..n * n).map(|t| (t / n + t % n) % n).collect();
        CayleyTable::new(n, table).unwrap().with_name(format!("C{n}"))
    }

    /// `(a1, b1)(a2, b2) = (a1 a2, b1 b2)` with index `a * |other| + b`.
    pub fn direct_product(&self, other: &CayleyTable) -> CayleyTable {
        let (n1, n2) = (self.order, other.order);
        let order = n1 * n2;
        let mut table = Vec::with_capacity(order * order);
        for x in 0..order {
            for y in 0..order {
                let a = self.mul(x / n2, y / n2);
                let b = other.mul(x % n2, y % n2);
                table.push(a * n2 + b);
            }
        }
        let name = match (&self.name, &other.name) {
            (Some(a), Some(b)) => Some(format!("{a}x{b}")),
            _ => None,
        };
        let t = CayleyTable::new(order, table).unwrap();
        match name {
            Some(n) => t.with_name(n),
            None => t,
        }
    }

    /// Solves `a * x = b`.
    pub fn left_divide(&self, a: usize, b: usize) -> usize {
        self.row(a).iter().position(|&v| v == b).expect("Latin row contains every symbol")
    }

    /// Solves `y * b = a`, written `a / b`.
    pub fn right_divide(&self, a: usize, b: usize) -> usize {
        (0..self.order).find(|&y| self.mul(y, b) == a).expect("Latin column contains every symbol")
    }

    /// Two-sided identity, if one exists.
    pub fn identity(&self) -> Option<usize> {
        (0..self.order).find(|&e| (0..self.order).all(|a| self.mul(e, a) == a && self.mul(a, e) == a))
    }

    pub fn is_associative(&self) -> bool {
        let n = self.order;
        (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c)))))
    }

    /// Associativity plus a two-sided identity; inverses then follow from the Latin property.
    pub fn is_group(&self) -> bool {
        let Some(e) = self.identity() else { return false };
        let inverses = (0..self.order).all(|a| {
            let b = self.left_divide(a, e);
            self.mul(b, a) == e
        });
        inverses && self.is_associative()
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (0..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Order of `a` in a group table.
    pub fn element_order(&self, a: usize) -> usize {
        let e = self.identity().expect("element_order needs an identity");
        let mut p = a;
        let mut k = 1;
        while p != e {
            p = self.mul(p, a);
            k += 1;
            assert!(k <= self.order, "element {a} has no finite order; not a group");
        }
        k
    }

    pub fn inverse(&self, a: usize) -> usize {
        let e = self.identity().expect("inverse needs an identity");
        self.left_divide(a, e)
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        let e = self.identity().expect("pow needs an identity");
        (0..k).fold(e, |acc, _| self.mul(acc, a))
    }

    /// Smallest subset containing `gens` and closed under multiplication.
    /// In a finite quasigroup this is the generated subquasigroup.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.order];
        let mut members: Vec<usize> = Vec::new();
        for &g in gens {
            if !std::mem::replace(&mut inside[g], true) {
                members.push(g);
            }
        }
        let mut changed = true;
        while changed {
            changed = false;
            let snapshot = members.clone();
            for &a in &snapshot {
                for &b in &snapshot {
                    let c = self.mul(a, b);
                    if !std::mem::replace(&mut inside[c], true) {
                        members.push(c);
                        changed = true;
                    }
                }
            }
        }
        members.sort_unstable();
        members
    }

    /// The table restricted to a multiplicatively closed subset, relabelled
    /// by position in `subset`. `None` when the subset is not closed.
    pub fn restrict(&self, subset: &[usize]) -> Option<CayleyTable> {
        let pos = |v: usize| subset.iter().position(|&s| s == v);
        let mut table = Vec::with_capacity(subset.len() * subset.len());
        for &a in subset {
            for &b in subset {
                table.push(pos(self.mul(a, b))?);
            }
        }
        CayleyTable::new(subset.len(), table).ok()
    }

    /// Text format: an optional `# name` line, the order, then one row per line.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        if let Some(name) = &self.name {
            let _ = writeln!(s, "# {name}");
        }
        let _ = writeln!(s, "{}", self.order);
        for a in 0..self.order {
            let row: Vec<String> = self.row(a).iter().map(|v| v.to_string()).collect();
            let _ = writeln!(s, "{}", row.join(" "));
        }
        s
    }

    /// Parses [`CayleyTable::to_text`] output. Lines starting with `#` are
    /// comments; the first comment becomes the table name.
    pub fn parse(text: &str) -> Result<Self> {
        let mut name = None;
        let mut numbers: Vec<Vec<usize>> = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                if name.is_none() {
                    name = Some(comment.trim().to_string());
                }
                continue;
            }
            let row = line
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|e| Error::Parse(format!("line {}: {e}", lineno + 1))))
                .collect::<Result<Vec<_>>>()?;
            numbers.push(row);
        }
        let Some((head, rows)) = numbers.split_first() else {
            return Err(Error::Parse("missing order line".into()));
        };
        let [order] = head[..] else {
            return Err(Error::Parse("first line must hold only the order".into()));
        };
        if rows.len() != order {
            return Err(Error::Parse(format!("expected {order} rows, got {}", rows.len())));
        }
        if rows.iter().any(|r| r.len() != order) {
            return Err(Error::Parse(format!("every row must have {order} entries")));
        }
        let t = CayleyTable::from_rows(rows)?;
        Ok(match name {
            Some(n) => t.with_name(n),
            None => t,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_tables_are_groups() {
        assert!(CayleyTable::cyclic(6).is_group());
        assert_eq!(CayleyTable::cyclic(4).left_divide(1, 3), 2);
        assert_eq!(CayleyTable::cyclic(4).right_divide(3, 1), 2);
    }

    #[test]
    fn division_identities() {
        let t = crate::metacyclic::MetacyclicParams::validate(3, 2, 2, 4).unwrap().cayley();
        for a in 0..8 {
            for b in 0..8 {
                assert_eq!(t.mul(a, t.left_divide(a, b)), b);
                assert_eq!(t.mul(t.right_divide(a, b), b), a);
                assert_eq!(t.left_divide(a, t.mul(a, b)), b);
                assert_eq!(t.right_divide(t.mul(a, b), b), a);
            }
        }
    }

    /// Rows are rotations of 0..5 (a Latin square); swapping two rows leaves a
    /// left identity with no matching right identity.
    #[test]
    fn latin_square_without_identity_is_not_a_group() {
        let n = 5;
        let base: Vec<Vec<usize>> = (0..n).map(|r| (0..n).map(|c| (r + c) % n).collect()).collect();
        let perm = [1, 0, 2, 3, 4];
        let rows: Vec<Vec<usize>> = perm.iter().map(|&p| base[p].clone()).collect();
        let t = CayleyTable::from_rows(&rows).unwrap();
        assert!(t.identity().is_none());
        assert!(!t.is_group());
    }

    #[test]
    fn rejects_non_latin() {
        assert!(matches!(CayleyTable::from_rows(&[vec![0, 0], vec![1, 1]]), Err(Error::NotLatin(_))));
        assert!(matches!(CayleyTable::new(2, vec![0, 1, 1]), Err(Error::NotLatin(_))));
        assert!(matches!(CayleyTable::new(2, vec![0, 1, 1, 2]), Err(Error::NotLatin(_))));
    }

    #[test]
    fn text_round_trip() {
        let t = CayleyTable::cyclic(3).direct_product(&CayleyTable::cyclic(2));
        let text = t.to_text();
        assert!(text.starts_with("# C3xC2\n6\n"));
        let back = CayleyTable::parse(&text).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.name(), Some("C3xC2"));
        assert!(CayleyTable::parse("2\n0 1\n").is_err());
        assert!(CayleyTable::parse("").is_err());
        assert!(matches!(CayleyTable::parse("2\n0 1\n0 1\n"), Err(Error::NotLatin(_))));
    }

    #[test]
    fn closure_and_restrict() {
        let t = CayleyTable::cyclic(6);
        assert_eq!(t.closure(&[2]), vec![0, 2, 4]);
        let sub = t.restrict(&[0, 2, 4]).unwrap();
        assert!(sub.is_group());
        assert!(t.restrict(&[0, 1]).is_none());
    }
}
