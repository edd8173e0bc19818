use std::fmt;

use crate::error::{Error, Result};

/// A strictly increasing list of 1-based coordinate indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    /// Validates strict increase and the range `1..=n`.
    pub fn new(entries: Vec<usize>, n: usize) -> Result<Self> {
        if entries.iter().any(|&i| i == 0 || i > n) {
            return Err(Error::InvalidMultiIndex(format!(
                "{entries:?} has an entry outside 1..={n}"
            )));
        }
        if entries.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidMultiIndex(format!(
                "{entries:?} is not strictly increasing"
            )));
        }
        Ok(MultiIndex(entries))
    }

    pub fn empty() -> Self {
        MultiIndex(Vec::new())
    }

    pub fn single(i: usize) -> Self {
        MultiIndex(vec![i])
    }

    /// Sorts an arbitrary index list, returning the permutation sign, or
    /// `None` when an index repeats.
    pub fn sorted(mut entries: Vec<usize>) -> Option<(i8, MultiIndex)> {
        let mut sign = 1i8;
        // insertion sort, counting transpositions
        for i in 1..entries.len() {
            let mut j = i;
            while j > 0 && entries[j - 1] > entries[j] {
                entries.swap(j - 1, j);
                sign = -sign;
                j -= 1;
            }
        }
        if entries.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some((sign, MultiIndex(entries)))
    }

    pub fn entries(&self) -> &[usize] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.0.binary_search(&i).is_ok()
    }

    /// Sum of the entries.
    pub fn weight(&self) -> usize {
        self.0.iter().sum()
    }

    /// The indices of `1..=n` not in `self`.
    pub fn complement(&self, n: usize) -> MultiIndex {
        MultiIndex((1..=n).filter(|i| !self.contains(*i)).collect())
    }

    /// Drops the entry at 0-based slot `h`.
    pub fn without_slot(&self, h: usize) -> MultiIndex {
        let mut e = self.0.clone();
        e.remove(h);
        MultiIndex(e)
    }

    /// All strictly increasing indices of length `p` drawn from `1..=n`, in
    /// lexicographic order.
    pub fn all(n: usize, p: usize) -> Vec<MultiIndex> {
        fn rec(
            start: usize,
            n: usize,
            left: usize,
            cur: &mut Vec<usize>,
            out: &mut Vec<MultiIndex>,
        ) {
            if left == 0 {
                out.push(MultiIndex(cur.clone()));
                return;
            }
            for i in start..=n {
                if n - i + 1 < left {
                    break;
                }
                cur.push(i);
                rec(i + 1, n, left - 1, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if p <= n {
            rec(1, n, p, &mut Vec::new(), &mut out);
        }
        out
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "]")
    }
}

/// `n choose k`.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}
