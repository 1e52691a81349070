//! Eventually-constant bi-infinite sequences over {0, 1}.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A bi-infinite binary sequence that is constant outside a finite window.
///
/// The value at index `i` is `left` for `i < offset`, `core[i - offset]` on
/// the window, and `right` from `offset + core.len()` on. The representation
/// is canonical: the first core symbol differs from `left` and the last one
/// differs from `right`, so structural equality is sequence equality. An
/// empty core describes either a constant sequence (offset pinned to 0) or a
/// single jump from `left` to `right` at `offset`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BiSeq {
    left: u8,
    core: Vec<u8>,
    right: u8,
    offset: i64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub(crate) struct RawBiSeq {
    pub left: u8,
    #[serde(default)]
    pub core: Vec<u8>,
    pub right: u8,
    #[serde(default)]
    pub offset: i64,
}

fn check_symbol(s: u8) -> Result<u8> {
    if s <= 1 {
        Ok(s)
    } else {
        Err(Error::input(format!("symbol {s} is not in {{0, 1}}")))
    }
}

/// `2^{-k}` for `k >= 0`, flushing to zero past the subnormal range.
pub(crate) fn pow2neg(k: i64) -> f64 {
    debug_assert!(k >= 0);
    if k > 1074 {
        0.0
    } else {
        2f64.powi(-(k as i32))
    }
}

/// `sum_{i >= h} 2^{-|i|}`.
pub(crate) fn right_tail_weight(h: i64) -> f64 {
    if h >= 0 {
        2.0 * pow2neg(h)
    } else {
        3.0 - pow2neg(-h)
    }
}

/// `sum_{i < l} 2^{-|i|}`.
pub(crate) fn left_tail_weight(l: i64) -> f64 {
    right_tail_weight(1 - l)
}

/// `sum_{lo <= i < hi} 2^{-|i|}`.
pub(crate) fn range_weight(lo: i64, hi: i64) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    // Split at 0 so both halves are plain geometric sums without cancellation.
    let mut total = 0.0;
    if lo < 0 {
        let a = lo;
        let b = hi.min(0);
        // sum_{i=a}^{b-1} 2^{i} = 2^{b} - 2^{a}
        total += pow2neg(-b) - pow2neg(-a);
    }
    if hi > 0 {
        let a = lo.max(0);
        // sum_{i=a}^{hi-1} 2^{-i} = 2^{1-a} - 2^{1-hi}
        total += 2.0 * pow2neg(a) - 2.0 * pow2neg(hi);
    }
    total
}

impl BiSeq {
    pub fn new(left: u8, core: Vec<u8>, right: u8, offset: i64) -> Result<Self> {
        check_symbol(left)?;
        check_symbol(right)?;
        for &s in &core {
            check_symbol(s)?;
        }
        Ok(Self::canonical(left, core, right, offset))
    }

    fn canonical(left: u8, mut core: Vec<u8>, right: u8, mut offset: i64) -> Self {
        let lead = core.iter().take_while(|&&s| s == left).count();
        if lead > 0 {
            core.drain(..lead);
            offset += lead as i64;
        }
        while core.last() == Some(&right) {
            core.pop();
        }
        if core.is_empty() && left == right {
            offset = 0;
        }
        BiSeq {
            left,
            core,
            right,
            offset,
        }
    }

    pub fn constant(symbol: u8) -> Self {
        assert!(symbol <= 1, "symbol must be 0 or 1");
        BiSeq {
            left: symbol,
            core: Vec::new(),
            right: symbol,
            offset: 0,
        }
    }

    pub fn zeros() -> Self {
        Self::constant(0)
    }

    pub fn ones() -> Self {
        Self::constant(1)
    }

    /// Zero-tailed sequence carrying `pattern` on indices `lo..lo + pattern.len()`.
    pub fn from_window(lo: i64, pattern: &[u8]) -> Result<Self> {
        Self::new(0, pattern.to_vec(), 0, lo)
    }

    pub fn left(&self) -> u8 {
        self.left
    }

    pub fn right(&self) -> u8 {
        self.right
    }

    pub fn core(&self) -> &[u8] {
        &self.core
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    /// One past the last core index.
    pub fn end(&self) -> i64 {
        self.offset + self.core.len() as i64
    }

    pub fn get(&self, i: i64) -> u8 {
        if i < self.offset {
            self.left
        } else if i < self.end() {
            self.core[(i - self.offset) as usize]
        } else {
            self.right
        }
    }

    /// `sigma^p`: the sequence `i -> self[i + p]`.
    pub fn shift(&self, p: i64) -> Self {
        let mut out = self.clone();
        if !(out.core.is_empty() && out.left == out.right) {
            out.offset -= p;
        }
        out
    }

    /// Keeps indices `<= last` and replaces everything after by `symbol`.
    pub fn with_tail_after(&self, last: i64, symbol: u8) -> Self {
        let lo = self.offset.min(last + 1);
        let core: Vec<u8> = (lo..=last).map(|i| self.get(i)).collect();
        Self::canonical(self.left, core, symbol, lo)
    }

    /// Copies `other` onto indices `lo..=hi` and keeps `self` elsewhere.
    pub fn splice(&self, other: &BiSeq, lo: i64, hi: i64) -> Self {
        if hi < lo {
            return self.clone();
        }
        let start = self.offset.min(lo);
        let stop = self.end().max(hi + 1);
        let core: Vec<u8> = (start..stop)
            .map(|i| if (lo..=hi).contains(&i) { other.get(i) } else { self.get(i) })
            .collect();
        Self::canonical(self.left, core, self.right, start)
    }

    /// Zero-tailed copy that agrees with `self` on `[-window, window]`.
    pub fn truncate(&self, window: i64) -> Self {
        let core: Vec<u8> = (-window..=window).map(|i| self.get(i)).collect();
        Self::canonical(0, core, 0, -window)
    }

    /// `sum_i |a_i - b_i| / 2^{|i|}` evaluated in closed form.
    pub fn distance(&self, other: &BiSeq) -> f64 {
        let mut cuts = [self.offset, self.end(), other.offset, other.end()];
        cuts.sort_unstable();
        let mut total = 0.0;
        if self.left != other.left {
            total += left_tail_weight(cuts[0]);
        }
        for w in cuts.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            if lo == hi {
                continue;
            }
            let in_core = |s: &BiSeq| !s.core.is_empty() && lo >= s.offset && hi <= s.end();
            if in_core(self) || in_core(other) {
                for i in lo..hi {
                    if self.get(i) != other.get(i) {
                        total += pow2neg(i.abs());
                    }
                }
            } else if self.get(lo) != other.get(lo) {
                total += range_weight(lo, hi);
            }
        }
        if self.right != other.right {
            total += right_tail_weight(cuts[3]);
        }
        total
    }

    pub(crate) fn to_raw(&self) -> RawBiSeq {
        RawBiSeq {
            left: self.left,
            core: self.core.clone(),
            right: self.right,
            offset: self.offset,
        }
    }

    pub(crate) fn from_raw(raw: RawBiSeq) -> Result<Self> {
        Self::new(raw.left, raw.core, raw.right, raw.offset)
    }
}

impl PartialOrd for BiSeq {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BiSeq {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.left, self.right, self.offset, &self.core).cmp(&(
            other.left,
            other.right,
            other.offset,
            &other.core,
        ))
    }
}
