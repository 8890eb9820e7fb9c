//! Search for quasigroups covering a weighted quasigroup.
//!
//! Label `x` owns a contiguous block of `w(x)` elements. The Latin square is
//! filled cell by cell; a value `v` is allowed in cell `(a, b)` when it is
//! unused in the row and column and the block pair `(f(a), f(b))` still has
//! room for the label `f(v)` (for balanced lifts: room for `v` itself).
//! After every placement each empty cell must keep a candidate and every
//! missing row or column value must keep a cell.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::par::{first_in_order, thread_count, BranchOutcome, Cancel};
use super::Covering;
use crate::error::{Error, Result};
use crate::metacyclic::CayleyTable;
use crate::wqg::WeightedQuasigroup;

const EMPTY: u8 = u8::MAX;

/// Which empty cell to fill next.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CellOrder {
    RowMajor,
    /// Smallest branching among cells and row or column values, ties broken row-major.
    #[default]
    MostConstrained,
}

#[derive(Clone, Debug)]
pub struct LiftOptions {
    /// `0` tries values in ascending order; any other seed shuffles the value
    /// order of each row.
    pub seed: u64,
    /// Node cap (one node per tentative placement).
    pub budget: u64,
    /// Require `m_q(S_x, S_y) = alpha(x,y,z)/w(z)` for each `q in S_z`.
    pub balanced: bool,
    /// Worker threads; `None` reads `CHARQ_THREADS`.
    pub threads: Option<usize>,
    pub order: CellOrder,
}

impl Default for LiftOptions {
    fn default() -> Self {
        LiftOptions { seed: 0, budget: 10_000_000, balanced: false, threads: None, order: CellOrder::MostConstrained }
    }
}

struct Problem {
    n: usize,
    len: usize,
    label_of: Vec<usize>,
    block_mask: Vec<u64>,
    balanced: bool,
    value_order: Vec<Vec<u8>>,
    order: CellOrder,
    full: u64,
}

#[derive(Clone)]
struct State {
    grid: Vec<u8>,
    row_used: Vec<u64>,
    col_used: Vec<u64>,
    /// Remaining multiplicity per `(x, y, z)`, or per `(x, y, v)` when balanced.
    remaining: Vec<i64>,
    /// Values still admissible for the block pair `(x, y)`.
    cap: Vec<u64>,
    empty: usize,
}

enum Flow {
    Found,
    Fail,
    Abort,
}

enum Pick {
    Complete,
    Dead,
    /// Placements `(row, column, value)` to try in order.
    Moves(Vec<(usize, usize, usize)>),
}

impl Problem {
    fn slot(&self, x: usize, y: usize, v: usize) -> usize {
        if self.balanced {
            (x * self.len + y) * self.n + v
        } else {
            (x * self.len + y) * self.len + self.label_of[v]
        }
    }

    fn released(&self, v: usize) -> u64 {
        if self.balanced {
            1 << v
        } else {
            self.block_mask[self.label_of[v]]
        }
    }

    fn place(&self, st: &mut State, a: usize, b: usize, v: usize) {
        let (x, y) = (self.label_of[a], self.label_of[b]);
        st.grid[a * self.n + b] = v as u8;
        st.row_used[a] |= 1 << v;
        st.col_used[b] |= 1 << v;
        st.empty -= 1;
        let s = self.slot(x, y, v);
        st.remaining[s] -= 1;
        if st.remaining[s] == 0 {
            st.cap[x * self.len + y] &= !self.released(v);
        }
    }

    fn unplace(&self, st: &mut State, a: usize, b: usize, v: usize) {
        let (x, y) = (self.label_of[a], self.label_of[b]);
        st.grid[a * self.n + b] = EMPTY;
        st.row_used[a] &= !(1 << v);
        st.col_used[b] &= !(1 << v);
        st.empty += 1;
        let s = self.slot(x, y, v);
        if st.remaining[s] == 0 {
            st.cap[x * self.len + y] |= self.released(v);
        }
        st.remaining[s] += 1;
    }

    fn candidates(&self, st: &State, a: usize, b: usize) -> u64 {
        !st.row_used[a] & !st.col_used[b] & st.cap[self.label_of[a] * self.len + self.label_of[b]] & self.full
    }

    /// Forward check over all empty cells, then choose what to branch on.
    /// Row-major takes the first empty cell. Most-constrained takes the
    /// smallest of: the candidates of a cell, the cells left for a missing
    /// value in a row, the cells left for a missing value in a column.
    fn pick(&self, st: &State) -> Pick {
        if st.empty == 0 {
            return Pick::Complete;
        }
        let n = self.n;
        let mrv = self.order == CellOrder::MostConstrained;
        let mut col_union = vec![0u64; n];
        // col_cells[b * n + v]: columns' candidate cells per value, as row masks
        let mut col_cells = if mrv { vec![0u64; n * n] } else { Vec::new() };
        let mut row_cells = vec![0u64; n];
        let mut best_cell: Option<(usize, usize, u64)> = None;
        let mut best_line: Option<(u32, bool, usize, usize, u64)> = None;
        for a in 0..n {
            let mut row_union = 0u64;
            let mut row_has_empty = false;
            if mrv {
                row_cells.fill(0);
            }
            for b in 0..n {
                if st.grid[a * n + b] != EMPTY {
                    continue;
                }
                row_has_empty = true;
                let c = self.candidates(st, a, b);
                if c == 0 {
                    return Pick::Dead;
                }
                row_union |= c;
                col_union[b] |= c;
                if mrv {
                    let mut bits = c;
                    while bits != 0 {
                        let v = bits.trailing_zeros() as usize;
                        row_cells[v] |= 1 << b;
                        col_cells[b * n + v] |= 1 << a;
                        bits &= bits - 1;
                    }
                }
                let better = match best_cell {
                    None => true,
                    Some((_, _, bc)) => mrv && c.count_ones() < bc.count_ones(),
                };
                if better {
                    best_cell = Some((a, b, c));
                }
            }
            let missing = !st.row_used[a] & self.full;
            if row_has_empty && row_union & missing != missing {
                return Pick::Dead;
            }
            if mrv && row_has_empty {
                let mut bits = missing;
                while bits != 0 {
                    let v = bits.trailing_zeros() as usize;
                    let k = row_cells[v].count_ones();
                    if best_line.is_none_or(|l| k < l.0) {
                        best_line = Some((k, true, a, v, row_cells[v]));
                    }
                    bits &= bits - 1;
                }
            }
        }
        for b in 0..n {
            let missing = !st.col_used[b] & self.full;
            if col_union[b] & missing != missing {
                return Pick::Dead;
            }
            if mrv {
                let mut bits = missing;
                while bits != 0 {
                    let v = bits.trailing_zeros() as usize;
                    let k = col_cells[b * n + v].count_ones();
                    if best_line.is_none_or(|l| k < l.0) {
                        best_line = Some((k, false, b, v, col_cells[b * n + v]));
                    }
                    bits &= bits - 1;
                }
            }
        }
        let (a, b, c) = best_cell.expect("an empty cell exists");
        match best_line {
            Some((k, is_row, line, v, cells)) if k < c.count_ones() => {
                let mut moves = Vec::with_capacity(k as usize);
                let mut bits = cells;
                while bits != 0 {
                    let other = bits.trailing_zeros() as usize;
                    moves.push(if is_row { (line, other, v) } else { (other, line, v) });
                    bits &= bits - 1;
                }
                Pick::Moves(moves)
            }
            _ => Pick::Moves(self.values(a, c).map(|v| (a, b, v)).collect()),
        }
    }

    fn values(&self, a: usize, cands: u64) -> impl Iterator<Item = usize> + '_ {
        self.value_order[a].iter().map(|&v| v as usize).filter(move |&v| cands >> v & 1 == 1)
    }

    fn dfs(&self, st: &mut State, nodes: &mut u64, budget: u64, cancel: &Cancel<'_>) -> Flow {
        let moves = match self.pick(st) {
            Pick::Complete => return Flow::Found,
            Pick::Dead => return Flow::Fail,
            Pick::Moves(m) => m,
        };
        for (a, b, v) in moves {
            *nodes += 1;
            if *nodes > budget || (*nodes & 0x3ff == 0 && cancel.should_stop()) {
                return Flow::Abort;
            }
            self.place(st, a, b, v);
            match self.dfs(st, nodes, budget, cancel) {
                Flow::Found => return Flow::Found,
                Flow::Abort => return Flow::Abort,
                Flow::Fail => self.unplace(st, a, b, v),
            }
        }
        Flow::Fail
    }
}

/// A label `u` of weight 1 with `alpha(u,y,z) = alpha(y,u,z) = w(y) [y = z]`.
fn identity_label(q: &WeightedQuasigroup) -> Option<usize> {
    let len = q.len();
    (0..len).find(|&u| {
        q.w(u) == 1
            && (0..len).all(|y| {
                (0..len).all(|z| {
                    let want = if y == z { q.w(y) } else { 0 };
                    q.alpha(u, y, z) == want && q.alpha(y, u, z) == want
                })
            })
    })
}

/// Searches for a (balanced, if requested) quasigroup covering `target`.
/// Deterministic for a given seed and budget regardless of the thread count.
pub fn find_lift(target: &WeightedQuasigroup, opts: &LiftOptions) -> Result<Covering> {
    let n = target.gross_weight() as usize;
    if n == 0 {
        return Err(Error::IllPosed("gross weight is zero".into()));
    }
    if n > 64 {
        return Err(Error::TooLarge(n));
    }
    if let Some(v) = target.validate() {
        return Err(Error::IllPosed(v.to_string()));
    }
    let len = target.len();
    if opts.balanced {
        for x in 0..len {
            for y in 0..len {
                for z in 0..len {
                    if !target.alpha(x, y, z).is_multiple_of(target.w(z)) {
                        return Err(Error::IllPosed(format!(
                            "no balanced lift: w({z}) does not divide alpha({x},{y},{z})"
                        )));
                    }
                }
            }
        }
    }

    let mut label_of = Vec::with_capacity(n);
    let mut block_mask = vec![0u64; len];
    let mut offset = Vec::with_capacity(len);
    for x in 0..len {
        offset.push(label_of.len());
        for _ in 0..target.w(x) {
            block_mask[x] |= 1 << label_of.len();
            label_of.push(x);
        }
    }
    let value_order = (0..n)
        .map(|a| {
            let mut vals: Vec<u8> = (0..n as u8).collect();
            if opts.seed != 0 {
                let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(a as u64));
                vals.shuffle(&mut rng);
            }
            vals
        })
        .collect();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let problem = Problem { n, len, label_of, block_mask, balanced: opts.balanced, value_order, order: opts.order, full };

    let mut remaining = Vec::new();
    let mut cap = vec![0u64; len * len];
    for x in 0..len {
        for y in 0..len {
            if opts.balanced {
                for v in 0..n {
                    let z = problem.label_of[v];
                    let k = (target.alpha(x, y, z) / target.w(z)) as i64;
                    remaining.push(k);
                    if k > 0 {
                        cap[x * len + y] |= 1 << v;
                    }
                }
            } else {
                for z in 0..len {
                    let k = target.alpha(x, y, z) as i64;
                    remaining.push(k);
                    if k > 0 {
                        cap[x * len + y] |= problem.block_mask[z];
                    }
                }
            }
        }
    }
    let mut root = State {
        grid: vec![EMPTY; n * n],
        row_used: vec![0; n],
        col_used: vec![0; n],
        remaining,
        cap,
        empty: n * n,
    };
    // Block-preserving row and column permutations keep a lift a lift, so
    // the identity label's row and column may be taken to be the identity.
    if let Some(u) = identity_label(target) {
        let e = offset[u];
        for b in 0..n {
            problem.place(&mut root, e, b, b);
        }
        for a in (0..n).filter(|&a| a != e) {
            problem.place(&mut root, a, e, a);
        }
    }

    let grid = match problem.pick(&root) {
        Pick::Complete => Some(root.grid.clone()),
        Pick::Dead => None,
        Pick::Moves(branches) => {
            let run = |&(a, b, v): &(usize, usize, usize), budget: u64, cancel: &Cancel<'_>| {
                let mut st = root.clone();
                let mut nodes = 1;
                problem.place(&mut st, a, b, v);
                match problem.dfs(&mut st, &mut nodes, budget, cancel) {
                    Flow::Found => BranchOutcome { found: Some(st.grid), nodes },
                    Flow::Fail => BranchOutcome { found: None, nodes },
                    Flow::Abort => BranchOutcome { found: None, nodes: nodes.max(budget + 1) },
                }
            };
            first_in_order(&branches, opts.budget, thread_count(opts.threads), run)?.0
        }
    };
    let grid = grid.ok_or_else(|| Error::NotACover(format!("no lift of gross weight {n} exists")))?;
    let names = (0..n)
        .map(|v| {
            let x = problem.label_of[v];
            if target.w(x) == 1 {
                target.labels()[x].clone()
            } else {
                format!("{}.{}", target.labels()[x], v - offset[x])
            }
        })
        .collect();
    let table = CayleyTable::new(n, grid.into_iter().map(usize::from).collect())?
        .with_name("lift")
        .with_element_names(names);
    Covering::new(table, target.clone(), problem.label_of)
}
