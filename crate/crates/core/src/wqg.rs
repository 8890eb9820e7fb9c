//! Weighted quasigroups `(X, w, alpha)`.
//!
//! `alpha(x, y, z)` is the multiplicity of `z` in the product `x y`. The three
//! marginals must all equal `w(x) w(y)`:
//!
//! ```text
//! sum_z alpha(x, y, z) = sum_z alpha(z, y, x) = sum_z alpha(x, z, y) = w(x) w(y)
//! ```

use std::fmt::Write as _;

use serde_json::{json, Value};

use crate::characters::{CharacterLabel, CharacterTable};
use crate::error::Result;
use crate::metacyclic::CayleyTable;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedQuasigroup {
    labels: Vec<String>,
    w: Vec<u64>,
    alpha: Vec<u64>,
    characters: Option<Vec<CharacterLabel>>,
}

/// Which marginal of `alpha` failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Marginal {
    /// `sum_z alpha(x, y, z)`
    Product,
    /// `sum_z alpha(z, y, x)`
    Left,
    /// `sum_z alpha(x, z, y)`
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarginalViolation {
    pub marginal: Marginal,
    pub x: usize,
    pub y: usize,
    pub expected: u64,
    pub actual: u64,
}

impl std::fmt::Display for MarginalViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{:?} marginal at ({}, {}): sum is {}, expected w(x)w(y) = {}",
            self.marginal, self.x, self.y, self.actual, self.expected
        )
    }
}

impl WeightedQuasigroup {
    /// `alpha` is dense, indexed `(x * len + y) * len + z`.
    pub fn new(labels: Vec<String>, w: Vec<u64>, alpha: Vec<u64>) -> Self {
        let len = labels.len();
        assert_eq!(w.len(), len, "one weight per label");
        assert_eq!(alpha.len(), len * len * len, "alpha must have |X|^3 entries");
        WeightedQuasigroup { labels, w, alpha, characters: None }
    }

    /// A quasigroup regarded as a weighted quasigroup with unit weights.
    pub fn from_quasigroup(q: &CayleyTable) -> Self {
        let n = q.order();
        let labels = (0..n).map(|a| q.element_name(a)).collect();
        let mut alpha = vec![0; n * n * n];
        for x in 0..n {
            for y in 0..n {
                alpha[(x * n + y) * n + q.mul(x, y)] = 1;
            }
        }
        Self::new(labels, vec![1; n], alpha)
    }

    /// The weighted character quasigroup: `w(theta) = theta(1)^2` and
    /// `alpha(x,y,z) = x(1) y(1) z(1) <x y, z>`.
    pub fn from_character_table(ct: &CharacterTable) -> Result<Self> {
        let chars = ct.labels().to_vec();
        let len = chars.len();
        let deg: Vec<u64> = chars.iter().map(|&c| ct.degree(c) as u64).collect();
        let mut alpha = vec![0; len * len * len];
        for (x, &cx) in chars.iter().enumerate() {
            for (y, &cy) in chars.iter().enumerate() {
                for (cz, coeff) in ct.product_decompose(cx, cy)? {
                    let z = ct.label_index(cz)?;
                    alpha[(x * len + y) * len + z] = deg[x] * deg[y] * deg[z] * coeff as u64;
                }
            }
        }
        let labels = chars.iter().map(|&c| character_name(c)).collect();
        let w = deg.iter().map(|d| d * d).collect();
        let mut q = Self::new(labels, w, alpha);
        q.characters = Some(chars);
        Ok(q)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// The character behind each label, for weighted character quasigroups.
    pub fn characters(&self) -> Option<&[CharacterLabel]> {
        self.characters.as_deref()
    }

    pub fn w(&self, x: usize) -> u64 {
        self.w[x]
    }

    pub fn weights(&self) -> &[u64] {
        &self.w
    }

    pub fn alpha(&self, x: usize, y: usize, z: usize) -> u64 {
        let n = self.len();
        self.alpha[(x * n + y) * n + z]
    }

    pub fn alpha_mut(&mut self, x: usize, y: usize, z: usize) -> &mut u64 {
        let n = self.len();
        &mut self.alpha[(x * n + y) * n + z]
    }

    pub fn gross_weight(&self) -> u64 {
        self.w.iter().sum()
    }

    /// The first pair `(x, y)` (row-major, product marginal first) whose
    /// marginal sums differ from `w(x) w(y)`.
    pub fn validate(&self) -> Option<MarginalViolation> {
        let n = self.len();
        for x in 0..n {
            for y in 0..n {
                let expected = self.w[x] * self.w[y];
                let sums = [
                    (Marginal::Product, (0..n).map(|z| self.alpha(x, y, z)).sum::<u64>()),
                    (Marginal::Left, (0..n).map(|z| self.alpha(z, y, x)).sum()),
                    (Marginal::Right, (0..n).map(|z| self.alpha(x, z, y)).sum()),
                ];
                if let Some(&(marginal, actual)) = sums.iter().find(|s| s.1 != expected) {
                    return Some(MarginalViolation { marginal, x, y, expected, actual });
                }
            }
        }
        None
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_none()
    }

    /// The formal sum `sum_z alpha(x,y,z) z`, e.g. `4e + 4θ[0,1]`.
    pub fn cell(&self, x: usize, y: usize) -> String {
        let terms: Vec<String> = (0..self.len())
            .filter_map(|z| match self.alpha(x, y, z) {
                0 => None,
                1 => Some(self.labels[z].clone()),
                c => Some(format!("{c}{}", self.labels[z])),
            })
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" + ")
        }
    }

    /// A Cayley-style table whose cells are formal sums.
    pub fn render_table(&self) -> String {
        let n = self.len();
        let cells: Vec<Vec<String>> = (0..n).map(|x| (0..n).map(|y| self.cell(x, y)).collect()).collect();
        let head_width = self.labels.iter().map(|l| l.chars().count()).max().unwrap_or(0);
        let widths: Vec<usize> = (0..n)
            .map(|y| {
                let col = cells.iter().map(|row| row[y].chars().count()).max().unwrap_or(0);
                col.max(self.labels[y].chars().count())
            })
            .collect();
        let pad = |s: &str, w: usize| format!("{s}{}", " ".repeat(w - s.chars().count()));
        let mut out = String::new();
        let _ = write!(out, "{} |", " ".repeat(head_width));
        for y in 0..n {
            let _ = write!(out, " {}", pad(&self.labels[y], widths[y]));
        }
        out.push('\n');
        for x in 0..n {
            let _ = write!(out, "{} |", pad(&self.labels[x], head_width));
            for y in 0..n {
                let _ = write!(out, " {}", pad(&cells[x][y], widths[y]));
            }
            out.push('\n');
        }
        out
    }

    /// `{"labels": [...], "w": [...], "alpha": [[[...]]]}`.
    pub fn to_json(&self) -> Value {
        let n = self.len();
        let alpha: Vec<Vec<Vec<u64>>> =
            (0..n).map(|x| (0..n).map(|y| (0..n).map(|z| self.alpha(x, y, z)).collect()).collect()).collect();
        json!({ "labels": self.labels, "w": self.w, "alpha": alpha })
    }
}

/// `e` for the trivial character, `θ[a,α]` otherwise.
pub fn character_name(c: CharacterLabel) -> String {
    if c.is_trivial() {
        "e".to_string()
    } else {
        c.to_string()
    }
}
