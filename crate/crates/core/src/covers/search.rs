//! Complete search for balanced covers of a weighted quasigroup by a fixed
//! quasigroup.
//!
//! A balanced cover needs `S_x S_y = sum_z (alpha(x,y,z)/w(z)) S_z` for every
//! pair of labels. Every element keeps a mask of labels it may still take.
//! Blocks are placed one label at a time; each new block `S_x` is multiplied
//! against all placed blocks and the counts `m_v(S_x, S_y)` restrict the
//! label mask of `v` to the labels with that ratio.

use super::par::{first_in_order, thread_count, BranchOutcome, Cancel};
use super::{check_orbit_sum_form, check_regrouped_form, BlockAssignment};
use crate::characters::CharacterTable;
use crate::error::{Error, Result};
use crate::metacyclic::{CayleyTable, MetacyclicParams};
use crate::wqg::WeightedQuasigroup;

const UNSET: usize = usize::MAX;

#[derive(Clone, Debug, Default)]
pub struct SearchOptions {
    /// Node cap (one node per placed block); `None` searches exhaustively.
    pub budget: Option<u64>,
    /// Worker threads; `None` reads `CHARQ_THREADS`.
    pub threads: Option<usize>,
}

struct Problem<'a> {
    q: &'a CayleyTable,
    n: usize,
    len: usize,
    w: Vec<usize>,
    /// `alpha(x,y,z) / w(z)` at `(x * len + y) * len + z`.
    ratio: Vec<u64>,
    /// Labels `z` with `ratio(x,y,z) = c`, at `[x * len + y][c]`.
    by_count: Vec<Vec<u64>>,
}

#[derive(Clone)]
struct State {
    label_of: Vec<usize>,
    domain: Vec<u64>,
    placed: u64,
    blocks: Vec<Vec<usize>>,
}

enum Flow {
    Found(Vec<usize>),
    Fail,
    Abort,
}

struct Counter<'a> {
    nodes: u64,
    budget: u64,
    cancel: &'a Cancel<'a>,
}

impl Counter<'_> {
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        self.nodes > self.budget || (self.nodes & 0xff == 0 && self.cancel.should_stop())
    }
}

impl Problem<'_> {
    fn ratio(&self, x: usize, y: usize, z: usize) -> u64 {
        self.ratio[(x * self.len + y) * self.len + z]
    }

    fn mask_for(&self, x: usize, y: usize, c: u64) -> u64 {
        self.by_count[x * self.len + y].get(c as usize).copied().unwrap_or(0)
    }

    /// Largest ratio `v` may still carry in `S_x S_y`.
    fn max_allowed(&self, x: usize, y: usize, dom: u64) -> u64 {
        let mut best = 0;
        let mut d = dom;
        while d != 0 {
            let z = d.trailing_zeros() as usize;
            best = best.max(self.ratio(x, y, z));
            d &= d - 1;
        }
        best
    }

    fn restrict(&self, st: &mut State, x: usize, y: usize, cnt: &[u64]) -> bool {
        for v in 0..self.n {
            st.domain[v] &= self.mask_for(x, y, cnt[v]);
            if st.domain[v] == 0 {
                return false;
            }
        }
        true
    }

    fn product_counts(&self, s: &[usize], t: &[usize], cnt: &mut [u64]) {
        cnt.fill(0);
        for &a in s {
            for &b in t {
                cnt[self.q.mul(a, b)] += 1;
            }
        }
    }

    /// Places `S_x = block` and propagates; false when some element has no label left.
    fn place(&self, st: &mut State, x: usize, block: &[usize]) -> bool {
        let bit = 1u64 << x;
        for v in 0..self.n {
            if st.label_of[v] == UNSET {
                st.domain[v] &= !bit;
            }
        }
        for &v in block {
            st.label_of[v] = x;
            st.domain[v] = bit;
        }
        st.placed |= bit;
        st.blocks[x] = block.to_vec();
        let mut cnt = vec![0u64; self.n];
        for y in 0..self.len {
            if st.placed >> y & 1 == 0 {
                continue;
            }
            let other = st.blocks[y].clone();
            self.product_counts(block, &other, &mut cnt);
            if !self.restrict(st, x, y, &cnt) {
                return false;
            }
            if y != x {
                self.product_counts(&other, block, &mut cnt);
                if !self.restrict(st, y, x, &cnt) {
                    return false;
                }
            }
        }
        true
    }

    /// The unplaced label with the fewest candidate blocks, as
    /// `(label, forced elements, optional elements)`; `Err(())` on a dead end.
    #[allow(clippy::type_complexity)]
    fn pick(&self, st: &State) -> std::result::Result<Option<(usize, Vec<usize>, Vec<usize>)>, ()> {
        let mut best: Option<(f64, usize, Vec<usize>, Vec<usize>)> = None;
        for z in 0..self.len {
            if st.placed >> z & 1 == 1 {
                continue;
            }
            let bit = 1u64 << z;
            let mut forced = Vec::new();
            let mut free = Vec::new();
            for v in 0..self.n {
                if st.label_of[v] == UNSET && st.domain[v] & bit != 0 {
                    if st.domain[v] == bit {
                        forced.push(v);
                    } else {
                        free.push(v);
                    }
                }
            }
            if forced.len() > self.w[z] || forced.len() + free.len() < self.w[z] {
                return Err(());
            }
            let count = ln_binomial(free.len(), self.w[z] - forced.len());
            if best.as_ref().is_none_or(|b| count < b.0) {
                best = Some((count, z, forced, free));
            }
        }
        Ok(best.map(|(_, z, forced, free)| (z, forced, free)))
    }

    /// Enumerates blocks for `x` in ascending lexicographic order, pruning
    /// partial blocks whose products with placed blocks already overshoot.
    fn each_block(
        &self,
        st: &State,
        x: usize,
        forced: &[usize],
        free: &[usize],
        visit: &mut dyn FnMut(&[usize]) -> Option<Flow>,
    ) -> Option<Flow> {
        let placed: Vec<usize> = (0..self.len).filter(|&y| st.placed >> y & 1 == 1).collect();
        let mut partial = Partial { left: vec![0; placed.len() * self.n], right: vec![0; placed.len() * self.n], placed };
        let mut chosen: Vec<usize> = Vec::with_capacity(self.w[x]);
        for &f in forced {
            if !partial.add(self, st, x, f) {
                return None;
            }
            chosen.push(f);
        }
        let need = self.w[x] - forced.len();
        self.choose(st, x, free, 0, need, &mut chosen, &mut partial, visit)
    }

    #[allow(clippy::too_many_arguments)]
    fn choose(
        &self,
        st: &State,
        x: usize,
        free: &[usize],
        start: usize,
        need: usize,
        chosen: &mut Vec<usize>,
        partial: &mut Partial,
        visit: &mut dyn FnMut(&[usize]) -> Option<Flow>,
    ) -> Option<Flow> {
        if need == 0 {
            let mut block = chosen.clone();
            block.sort_unstable();
            return visit(&block);
        }
        for i in start..=free.len() - need {
            let s = free[i];
            if partial.add(self, st, x, s) {
                chosen.push(s);
                let r = self.choose(st, x, free, i + 1, need - 1, chosen, partial, visit);
                chosen.pop();
                if r.is_some() {
                    partial.remove(self, st, s);
                    return r;
                }
            }
            partial.remove(self, st, s);
        }
        None
    }

    fn dfs(&self, st: &State, counter: &mut Counter<'_>) -> Flow {
        let (x, forced, free) = match self.pick(st) {
            Err(()) => return Flow::Fail,
            Ok(None) => return Flow::Found(st.label_of.clone()),
            Ok(Some(p)) => p,
        };
        let mut visit = |block: &[usize]| -> Option<Flow> {
            if counter.tick() {
                return Some(Flow::Abort);
            }
            let mut next = st.clone();
            if !self.place(&mut next, x, block) {
                return None;
            }
            match self.dfs(&next, counter) {
                Flow::Fail => None,
                other => Some(other),
            }
        };
        self.each_block(st, x, &forced, &free, &mut visit).unwrap_or(Flow::Fail)
    }
}

/// Running product counts of a partial block against the placed blocks.
struct Partial {
    left: Vec<u64>,
    right: Vec<u64>,
    placed: Vec<usize>,
}

impl Partial {
    /// Adds `s` to the partial block; false if some count already exceeds
    /// every ratio still open to its element. The counts are updated either way.
    fn add(&mut self, p: &Problem<'_>, st: &State, x: usize, s: usize) -> bool {
        let mut ok = true;
        for (i, &y) in self.placed.iter().enumerate() {
            for &t in &st.blocks[y] {
                let v = p.q.mul(s, t);
                self.left[i * p.n + v] += 1;
                ok &= self.left[i * p.n + v] <= p.max_allowed(x, y, st.domain[v]);
                let v = p.q.mul(t, s);
                self.right[i * p.n + v] += 1;
                ok &= self.right[i * p.n + v] <= p.max_allowed(y, x, st.domain[v]);
            }
        }
        ok
    }

    fn remove(&mut self, p: &Problem<'_>, st: &State, s: usize) {
        for (i, &y) in self.placed.iter().enumerate() {
            for &t in &st.blocks[y] {
                self.left[i * p.n + p.q.mul(s, t)] -= 1;
                self.right[i * p.n + p.q.mul(t, s)] -= 1;
            }
        }
    }
}

fn ln_binomial(n: usize, k: usize) -> f64 {
    (0..k).map(|i| ((n - i) as f64).ln() - ((i + 1) as f64).ln()).sum()
}

/// Searches for a balanced cover of `target` by `q`, returning the label of
/// each element. `None` is a proof of nonexistence only when `opts.budget`
/// is `None`; a finite budget that runs out gives `BudgetExhausted`.
pub fn find_balanced_cover(
    q: &CayleyTable,
    target: &WeightedQuasigroup,
    opts: &SearchOptions,
) -> Result<Option<Vec<usize>>> {
    let n = q.order();
    if target.gross_weight() as usize != n {
        return Err(Error::OrderMismatch { left: n, right: target.gross_weight() as usize });
    }
    if n > 64 {
        return Err(Error::TooLarge(n));
    }
    let len = target.len();
    if len > 64 {
        return Err(Error::TooLarge(len));
    }
    let w: Vec<usize> = (0..len).map(|x| target.w(x) as usize).collect();
    let mut ratio = vec![0u64; len * len * len];
    let mut by_count = vec![Vec::new(); len * len];
    for x in 0..len {
        for y in 0..len {
            let masks: &mut Vec<u64> = &mut by_count[x * len + y];
            for z in 0..len {
                let a = target.alpha(x, y, z);
                if !a.is_multiple_of(w[z] as u64) {
                    return Ok(None);
                }
                let r = a / w[z] as u64;
                ratio[(x * len + y) * len + z] = r;
                if masks.len() <= r as usize {
                    masks.resize(r as usize + 1, 0);
                }
                masks[r as usize] |= 1 << z;
            }
        }
    }
    let problem = Problem { q, n, len, w, ratio, by_count };
    let all = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
    let mut root = State { label_of: vec![UNSET; n], domain: vec![all; n], placed: 0, blocks: vec![Vec::new(); len] };
    // A weight-1 label u with S_u S_u = S_u must sit on an idempotent, which
    // in a group is the identity.
    if let (Some(u), Some(e)) = (unit_label(target), q.identity()) {
        if !problem.place(&mut root, u, &[e]) {
            return Ok(None);
        }
    }
    let (x, forced, free) = match problem.pick(&root) {
        Err(()) => return Ok(None),
        Ok(None) => return Ok(Some(root.label_of)),
        Ok(Some(p)) => p,
    };

    let mut branches = Vec::new();
    problem.each_block(&root, x, &forced, &free, &mut |b| {
        branches.push(b.to_vec());
        None
    });
    let budget = opts.budget.unwrap_or(u64::MAX - 1);
    let run = |block: &Vec<usize>, budget: u64, cancel: &Cancel<'_>| {
        let mut counter = Counter { nodes: 1, budget, cancel };
        let mut st = root.clone();
        if !problem.place(&mut st, x, block) {
            return BranchOutcome { found: None, nodes: 1 };
        }
        match problem.dfs(&st, &mut counter) {
            Flow::Found(labels) => BranchOutcome { found: Some(labels), nodes: counter.nodes },
            Flow::Fail => BranchOutcome { found: None, nodes: counter.nodes },
            Flow::Abort => BranchOutcome { found: None, nodes: counter.nodes.max(budget + 1) },
        }
    };
    Ok(first_in_order(&branches, budget, thread_count(opts.threads), run)?.0)
}

fn unit_label(q: &WeightedQuasigroup) -> Option<usize> {
    (0..q.len()).find(|&u| q.w(u) == 1 && q.alpha(u, u, u) == 1)
}

/// Exhaustive search for a balanced cover of the character quasigroup of
/// `M(k,l,m,n)` by `candidate`, re-verified through both block product forms.
pub fn find_balanced_group_cover(p: &MetacyclicParams, candidate: &CayleyTable) -> Result<Option<BlockAssignment>> {
    find_balanced_group_cover_with(p, candidate, &SearchOptions::default())
}

pub fn find_balanced_group_cover_with(
    p: &MetacyclicParams,
    candidate: &CayleyTable,
    opts: &SearchOptions,
) -> Result<Option<BlockAssignment>> {
    if candidate.order() != p.order() {
        return Err(Error::OrderMismatch { left: candidate.order(), right: p.order() });
    }
    if !candidate.is_group() {
        return Err(Error::NotAGroup("candidate table".into()));
    }
    let ct = CharacterTable::new(*p);
    let target = WeightedQuasigroup::from_character_table(&ct)?;
    let Some(labels) = find_balanced_cover(candidate, &target, opts)? else {
        return Ok(None);
    };
    let mut blocks = BlockAssignment::new();
    for (x, &lbl) in ct.labels().iter().enumerate() {
        blocks.insert(lbl, (0..labels.len()).filter(|&v| labels[v] == x).collect());
    }
    for (name, check) in [
        ("orbit-sum", check_orbit_sum_form as fn(_, _, _) -> _),
        ("regrouped", check_regrouped_form),
    ] {
        if let Some((a, b)) = check(candidate, ct.orbits(), &blocks)? {
            return Err(Error::OracleMismatch(format!("{name} block product fails at {a} * {b}")));
        }
    }
    Ok(Some(blocks))
}
