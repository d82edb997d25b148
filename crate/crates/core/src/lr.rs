//! Tensor product multiplicities for `SL_{n+1}`: Littlewood-Richardson
//! tableau counts, and an independent check by multiplying characters and
//! peeling off highest weights.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::type_a::{check_root_component_conditions, coroot_vector, Coweight, PositiveRoot};

/// A partition with trailing zeros removed.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotDominant(format!("{parts:?} is not weakly decreasing")));
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    /// `i`-th part (0-based), zero past the end.
    pub fn part(&self, i: usize) -> usize {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// Parts padded with zeros to length `len`.
    pub fn padded(&self, len: usize) -> Vec<usize> {
        (0..len).map(|i| self.part(i)).collect()
    }

    /// Removes full columns of height `rows`.
    pub fn strip_columns(&self, rows: usize) -> Partition {
        if self.len() < rows {
            return self.clone();
        }
        let c = self.part(rows - 1);
        Partition::new(self.0.iter().map(|p| p - c).collect()).expect("still decreasing")
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

pub fn coweight_to_partition(v: &Coweight) -> Result<Partition> {
    if !v.is_dominant() {
        return Err(Error::NotDominant(v.to_string()));
    }
    Partition::new(v.as_slice().iter().map(|&x| x as usize).collect())
}

pub fn partition_to_coweight(p: &Partition, n: usize) -> Result<Coweight> {
    if p.len() > n + 1 {
        return Err(Error::RankMismatch { expected: n, found: p.len() - 1 });
    }
    Coweight::from_gl(p.padded(n + 1).into_iter().map(|x| x as i64).collect())
}

/// `c^nu_{lam, mu}` for `SL_{n+1}`: full columns are added to or removed from `nu`
/// so that `|nu| = |lam| + |mu|`.
pub fn lr_coefficient(lam: &Partition, mu: &Partition, nu: &Partition, n: usize) -> u64 {
    let rows = n + 1;
    if lam.len() > rows || mu.len() > rows || nu.len() > rows {
        return 0;
    }
    let diff = (lam.size() + mu.size()) as i64 - nu.size() as i64;
    if diff % rows as i64 != 0 {
        return 0;
    }
    // Full columns may also have to be removed from nu.
    let shift = diff / rows as i64;
    if (nu.part(rows - 1) as i64) + shift < 0 {
        return 0;
    }
    let outer: Vec<usize> = nu.padded(rows).into_iter().map(|x| (x as i64 + shift) as usize).collect();
    let inner = lam.padded(rows);
    lr_skew_count(&outer, &inner, mu.parts())
}

/// Number of LR tableaux of shape `outer / inner` and content `content`.
fn lr_skew_count(outer: &[usize], inner: &[usize], content: &[usize]) -> u64 {
    if outer.iter().zip(inner).any(|(o, i)| o < i) {
        return 0;
    }
    let rows = outer.len();
    let m = content.len();
    if m == 0 {
        return u64::from(outer == inner);
    }
    let widths: Vec<usize> = outer.iter().zip(inner).map(|(o, i)| o - i).collect();
    if widths.iter().sum::<usize>() != content.iter().sum::<usize>() {
        return 0;
    }
    let mut search = LrSearch {
        inner,
        widths: &widths,
        content,
        used: vec![0; m],
        prev_row: vec![0; m],
        rows,
    };
    search.row(0)
}

struct LrSearch<'a> {
    inner: &'a [usize],
    widths: &'a [usize],
    content: &'a [usize],
    /// Letters placed in rows above, per letter.
    used: Vec<usize>,
    /// Letter counts of the previous row.
    prev_row: Vec<usize>,
    rows: usize,
}

impl LrSearch<'_> {
    fn row(&mut self, r: usize) -> u64 {
        if r == self.rows {
            return u64::from(self.used.iter().zip(self.content).all(|(u, c)| u == c));
        }
        let mut cur = vec![0usize; self.content.len()];
        self.fill(r, 0, self.widths[r], &mut cur)
    }

    /// Chooses how many copies of letter `k` go in row `r`.
    fn fill(&mut self, r: usize, k: usize, left: usize, cur: &mut Vec<usize>) -> u64 {
        let m = self.content.len();
        if left == 0 || k == m || k > r {
            if left != 0 {
                return 0;
            }
            for c in cur[k.min(m)..].iter_mut() {
                *c = 0;
            }
            let saved_prev = std::mem::replace(&mut self.prev_row, cur.clone());
            for (u, c) in self.used.iter_mut().zip(cur.iter()) {
                *u += c;
            }
            let out = self.row(r + 1);
            for (u, c) in self.used.iter_mut().zip(cur.iter()) {
                *u -= c;
            }
            self.prev_row = saved_prev;
            return out;
        }
        // Lattice condition while reading row r right to left: letter k+1
        // (index k) needs more k's (index k-1) already read.
        let lattice_cap = if k == 0 {
            usize::MAX
        } else {
            (self.used[k - 1]).saturating_sub(self.used[k])
        };
        let content_cap = self.content[k] - self.used[k];
        // Column strictness: letters <= k+1 of row r lie under cells of
        // row r-1 that are in the inner shape or hold letters <= k.
        let placed: usize = cur[..k].iter().sum();
        let column_cap = if r == 0 {
            usize::MAX
        } else {
            let above = self.inner[r - 1] + self.prev_row[..k].iter().sum::<usize>();
            above.saturating_sub(self.inner[r] + placed)
        };
        let cap = left.min(lattice_cap).min(content_cap).min(column_cap);
        let mut total = 0;
        for x in 0..=cap {
            cur[k] = x;
            total += self.fill(r, k + 1, left - x, cur);
        }
        cur[k] = 0;
        total
    }
}

/// Memoized Kostka numbers `K_{shape, weight}` via horizontal strips.
#[derive(Default)]
pub struct Kostka {
    memo: HashMap<(Vec<usize>, Vec<usize>), u64>,
}

impl Kostka {
    pub fn new() -> Self {
        Kostka::default()
    }

    /// Number of semistandard tableaux of `shape` with content `weight`.
    pub fn get(&mut self, shape: &[usize], weight: &[usize]) -> u64 {
        let shape: Vec<usize> = shape.iter().copied().filter(|&x| x > 0).collect();
        let weight: Vec<usize> = weight.iter().copied().filter(|&x| x > 0).collect();
        if shape.iter().sum::<usize>() != weight.iter().sum::<usize>() {
            return 0;
        }
        self.rec(shape, weight)
    }

    fn rec(&mut self, shape: Vec<usize>, mut weight: Vec<usize>) -> u64 {
        let Some(last) = weight.pop() else {
            return u64::from(shape.is_empty());
        };
        if shape.len() > weight.len() + 1 {
            return 0;
        }
        let key = (shape.clone(), {
            let mut w = weight.clone();
            w.push(last);
            w
        });
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        // Remove a horizontal strip of size `last` from `shape`.
        let mut total = 0;
        let mut inner = shape.clone();
        self.strips(&shape, &mut inner, 0, last, &weight, &mut total);
        self.memo.insert(key, total);
        total
    }

    fn strips(&mut self, shape: &[usize], inner: &mut Vec<usize>, row: usize, left: usize, weight: &[usize], total: &mut u64) {
        if row == shape.len() {
            if left == 0 {
                let next: Vec<usize> = inner.iter().copied().filter(|&x| x > 0).collect();
                *total += self.rec(next, weight.to_vec());
            }
            return;
        }
        let lower = shape.get(row + 1).copied().unwrap_or(0);
        let max_remove = (shape[row] - lower).min(left);
        for x in 0..=max_remove {
            inner[row] = shape[row] - x;
            self.strips(shape, inner, row + 1, left - x, weight, total);
        }
        inner[row] = shape[row];
    }
}

/// Weyl dimension formula for `GL_{n+1}` highest weight `parts`.
pub fn weyl_dimension(p: &Partition, n: usize) -> u128 {
    let v = p.padded(n + 1);
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..=n {
        for j in i + 1..=n {
            num *= (v[i] - v[j] + j - i) as u128;
            den *= (j - i) as u128;
        }
    }
    num / den
}

pub const MAX_WEIGHTS: usize = 100_000;

/// All weights of `V(shape)` for `GL_{rows}` with multiplicities.
fn weights(shape: &[usize], rows: usize, kostka: &mut Kostka) -> Result<Vec<(Vec<usize>, u64)>> {
    let size: usize = shape.iter().sum();
    let cap = shape.first().copied().unwrap_or(0);
    let mut out = Vec::new();
    let mut cur = vec![0usize; rows];
    fn rec(
        i: usize,
        left: usize,
        cap: usize,
        cur: &mut Vec<usize>,
        shape: &[usize],
        kostka: &mut Kostka,
        out: &mut Vec<(Vec<usize>, u64)>,
    ) -> Result<()> {
        if out.len() > MAX_WEIGHTS {
            return Err(Error::ScaleExceeded(out.len()));
        }
        if i + 1 == cur.len() {
            if left > cap {
                return Ok(());
            }
            cur[i] = left;
            let mut sorted = cur.clone();
            sorted.sort_unstable_by(|a, b| b.cmp(a));
            let k = kostka.get(shape, &sorted);
            if k > 0 {
                out.push((cur.clone(), k));
            }
            return Ok(());
        }
        for x in 0..=left.min(cap) {
            cur[i] = x;
            rec(i + 1, left - x, cap, cur, shape, kostka, out)?;
        }
        Ok(())
    }
    rec(0, size, cap, &mut cur, shape, kostka, &mut out)?;
    Ok(out)
}

/// Partitions of `size` with at most `rows` parts, each at most `cap`,
/// in decreasing lexicographic order.
fn partitions_lex_desc(size: usize, rows: usize, cap: usize) -> Vec<Vec<usize>> {
    fn rec(left: usize, rows: usize, cap: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == rows {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for x in (0..=left.min(cap)).rev() {
            cur.push(x);
            rec(left - x, rows, x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(size, rows, cap, &mut Vec::new(), &mut out);
    out
}

/// Decomposes `V(lam) (x) V(mu)` for `SL_{n+1}` by computing the dominant
/// part of the product character and removing highest weights greedily.
pub fn character_decompose(lam: &Coweight, mu: &Coweight, n: usize) -> Result<Vec<(Coweight, u64)>> {
    let rows = n + 1;
    let lp = coweight_to_partition(lam)?.strip_columns(rows);
    let mp = coweight_to_partition(mu)?.strip_columns(rows);
    let mut kostka = Kostka::new();
    let wl = weights(lp.parts(), rows, &mut kostka)?;
    let mut wm: HashMap<Vec<usize>, u64> = HashMap::new();
    for (w, k) in weights(mp.parts(), rows, &mut kostka)? {
        wm.insert(w, k);
    }
    let size = lp.size() + mp.size();
    let cap = lp.part(0) + mp.part(0);
    let dominant = partitions_lex_desc(size, rows, cap);
    if dominant.len().saturating_mul(wl.len()) > MAX_WEIGHTS * 100 {
        return Err(Error::ScaleExceeded(dominant.len() * wl.len()));
    }
    // Multiplicity of each dominant weight in the product.
    let mut mult: Vec<i128> = Vec::with_capacity(dominant.len());
    for nu in &dominant {
        let mut s: i128 = 0;
        let mut delta = vec![0usize; rows];
        'outer: for (g, a) in &wl {
            for i in 0..rows {
                if nu[i] < g[i] {
                    continue 'outer;
                }
                delta[i] = nu[i] - g[i];
            }
            if let Some(b) = wm.get(&delta) {
                s += (*a as i128) * (*b as i128);
            }
        }
        mult.push(s);
    }
    let mut out = Vec::new();
    for idx in 0..dominant.len() {
        let c = mult[idx];
        if c == 0 {
            continue;
        }
        if c < 0 {
            return Err(Error::PreconditionMismatch("negative multiplicity while peeling weights".into()));
        }
        let top = dominant[idx].clone();
        for (jdx, g) in dominant.iter().enumerate().skip(idx) {
            let k = kostka.get(&top, g);
            if k > 0 {
                mult[jdx] -= c * k as i128;
            }
        }
        let cw = Coweight::from_gl(top.iter().map(|&x| x as i64).collect())?;
        out.push((cw, c as u64));
    }
    out.sort_by(|a, b| b.0.as_slice().cmp(a.0.as_slice()));
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplicityReport {
    /// `lam + mu - N beta^vee`.
    pub nu: Coweight,
    pub multiplicity: u64,
    /// Whether both root-component conditions hold; the count is computed
    /// either way.
    pub conditions_hold: bool,
}

/// `m^{lam + mu - N beta^vee}_{lam, mu}`.
pub fn root_component_multiplicity(lam: &Coweight, mu: &Coweight, b: &PositiveRoot, big_n: i64) -> Result<MultiplicityReport> {
    let rep = check_root_component_conditions(lam, mu, b, big_n)?;
    let n = lam.rank();
    let nu = &(lam + mu) - &coroot_vector(b, n)?.scale(big_n);
    let multiplicity = if nu.is_dominant() {
        lr_coefficient(&coweight_to_partition(lam)?, &coweight_to_partition(mu)?, &coweight_to_partition(&nu)?, n)
    } else {
        0
    };
    Ok(MultiplicityReport { nu, multiplicity, conditions_hold: rep.holds() })
}
