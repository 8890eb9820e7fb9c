//! The action of `<y>` on `Z/n` by multiplication by `k`.
//!
//! Orbit `Ka` has size `r_a` (the least `t >= 1` with `a k^t = a mod n`) and
//! stabilizer size `s_a = m / r_a`. Characters are labelled `(a, alpha)` with
//! `a` an orbit representative and `0 <= alpha < s_a`.

use std::collections::BTreeMap;

use num_integer::Integer;
use serde_json::{json, Value};

use crate::cyclotomic::RationalScalar;
use crate::error::{Error, Result};
use crate::metacyclic::MetacyclicParams;

#[derive(Clone, Debug)]
pub struct OrbitTable {
    params: MetacyclicParams,
    /// Orbit representatives (minimum element of each orbit), ascending.
    reps: Vec<usize>,
    /// For each residue, the position of its orbit in `reps`.
    orbit_index: Vec<usize>,
    orbits: Vec<Vec<usize>>,
    sizes: Vec<usize>,
    stabilizers: Vec<usize>,
    fracs: Vec<RationalScalar>,
    /// `sums[ia * len + ib][c] = S(a, b, c)` for orbit positions `ia`, `ib`.
    sums: Vec<Vec<u32>>,
}

impl OrbitTable {
    pub fn new(params: MetacyclicParams) -> Self {
        let (n, k, l, m) = (params.n(), params.k(), params.l(), params.m());
        let mut orbit_index = vec![usize::MAX; n];
        let mut reps = Vec::new();
        let mut orbits = Vec::new();
        for a in 0..n {
            if orbit_index[a] != usize::MAX {
                continue;
            }
            let mut orbit = vec![a];
            let mut c = a * k % n;
            while c != a {
                orbit.push(c);
                c = c * k % n;
            }
            for &c in &orbit {
                orbit_index[c] = reps.len();
            }
            orbit.sort_unstable();
            reps.push(a);
            orbits.push(orbit);
        }
        let sizes: Vec<usize> = orbits.iter().map(Vec::len).collect();
        let stabilizers = sizes.iter().map(|&r| m / r).collect();
        let fracs = reps
            .iter()
            .map(|&a| RationalScalar::new((a * l) as i64, n as i64).fract_part())
            .collect();
        let mut sums = Vec::with_capacity(orbits.len() * orbits.len());
        for ka in &orbits {
            for kb in &orbits {
                let mut counts = vec![0u32; n];
                for &r in ka {
                    for &s in kb {
                        counts[(r + s) % n] += 1;
                    }
                }
                sums.push(counts);
            }
        }
        OrbitTable { params, reps, orbit_index, orbits, sizes, stabilizers, fracs, sums }
    }

    pub fn params(&self) -> &MetacyclicParams {
        &self.params
    }

    pub fn reps(&self) -> &[usize] {
        &self.reps
    }

    /// Position of `a`'s orbit among [`OrbitTable::reps`].
    pub fn index_of(&self, a: usize) -> usize {
        self.orbit_index[a % self.params.n()]
    }

    /// Representative of the orbit containing `c`.
    pub fn rep_of(&self, c: usize) -> usize {
        self.reps[self.index_of(c)]
    }

    pub fn is_rep(&self, a: usize) -> bool {
        a < self.params.n() && self.rep_of(a) == a
    }

    pub fn orbit(&self, a: usize) -> &[usize] {
        &self.orbits[self.index_of(a)]
    }

    /// `r_a = |Ka|`.
    pub fn r(&self, a: usize) -> usize {
        self.sizes[self.index_of(a)]
    }

    /// `s_a = m / r_a`.
    pub fn s(&self, a: usize) -> usize {
        self.stabilizers[self.index_of(a)]
    }

    /// `{a l / n}`.
    pub fn frac(&self, a: usize) -> RationalScalar {
        self.fracs[self.index_of(a)]
    }

    /// `n / gcd(n, l)`.
    pub fn twist_modulus(&self) -> usize {
        let n = self.params.n();
        n / n.gcd(&self.params.l())
    }

    /// `S(a,b,c) = |{(r,s) in Ka x Kb : r + s = c mod n}|`, for any residue `c`.
    pub fn s_count(&self, a: usize, b: usize, c: usize) -> usize {
        let len = self.reps.len();
        self.sums[self.index_of(a) * len + self.index_of(b)][c % self.params.n()] as usize
    }

    fn check_label(&self, a: usize, alpha: usize) -> Result<()> {
        if !self.is_rep(a) || alpha >= self.s(a) {
            return Err(Error::LabelOutOfRange { a, alpha });
        }
        Ok(())
    }

    /// `e_{a,alpha} = (n / gcd(n,l)) (alpha + {al/n})`.
    pub fn e_value(&self, a: usize, alpha: usize) -> Result<i64> {
        self.check_label(a, alpha)?;
        let scaled = RationalScalar::integer(self.twist_modulus() as i64)
            * (RationalScalar::integer(alpha as i64) + self.frac(a));
        Ok(scaled.to_integer().expect("(n/gcd(n,l)) {al/n} is an integer"))
    }

    /// `{al/n} + {bl/n} - {cl/n}`, required to be an integer.
    pub fn frac_combination(&self, a: usize, b: usize, c: usize) -> Result<i64> {
        let v = self.frac(a) + self.frac(b) - self.frac(c);
        v.to_integer().ok_or_else(|| Error::NonIntegerRhs(v.to_string()))
    }

    /// The congruence selecting which `theta_{c,gamma}` occur in
    /// `theta_{a,alpha} theta_{b,beta}`:
    ///
    /// `alpha + beta - gamma + ({al/n} + {bl/n} - {cl/n}) = 0  (mod gcd(s_a, s_b))`.
    ///
    /// The fractional-part term enters with a plus sign: it comes from
    /// `e_{a,alpha} + e_{b,beta} - e_{c,gamma} = 0 (mod n/gcd(n,l) gcd(s_a,s_b))`.
    /// It is `0` or `1`, so the sign only matters when `gcd(s_a,s_b) > 2`.
    pub fn gamma_condition(&self, a: usize, alpha: usize, b: usize, beta: usize, c: usize, gamma: usize) -> Result<bool> {
        self.check_label(a, alpha)?;
        self.check_label(b, beta)?;
        self.check_label(c, gamma)?;
        let rhs = self.frac_combination(a, b, c)?;
        let modulus = self.s(a).gcd(&self.s(b)) as i64;
        let lhs = alpha as i64 + beta as i64 - gamma as i64 + rhs;
        Ok(lhs.rem_euclid(modulus) == 0)
    }

    /// `{"reps": [...], "orbits": {a: [...]}, "r": {a: ..}, "s": {a: ..}}`.
    pub fn to_json(&self) -> Value {
        let mut orbits = BTreeMap::new();
        let mut r = BTreeMap::new();
        let mut s = BTreeMap::new();
        for (idx, &a) in self.reps.iter().enumerate() {
            orbits.insert(a.to_string(), json!(self.orbits[idx]));
            r.insert(a.to_string(), json!(self.sizes[idx]));
            s.insert(a.to_string(), json!(self.stabilizers[idx]));
        }
        json!({ "reps": self.reps, "orbits": orbits, "r": r, "s": s })
    }
}
