use std::fmt;

use smallvec::SmallVec;

/// Finitely supported exponent vector `alpha`, stored as ascending
/// `(position, exponent)` pairs with every exponent positive.
///
/// Positions are 1-based and index the sequence of primes; position `0` is
/// reserved for the auxiliary variable introduced by homogenization. The
/// derived ordering is lexicographic over the pair sequence.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex(SmallVec<[(u32, u32); 6]>);

impl MultiIndex {
    /// `alpha = 0`.
    pub fn zero() -> Self {
        MultiIndex(SmallVec::new())
    }

    /// The single variable `z_pos`.
    pub fn var(pos: u32) -> Self {
        Self::var_pow(pos, 1)
    }

    pub fn var_pow(pos: u32, exp: u32) -> Self {
        let mut v = SmallVec::new();
        if exp > 0 {
            v.push((pos, exp));
        }
        MultiIndex(v)
    }

    /// Build from arbitrary pairs; repeated positions are summed and zero
    /// exponents dropped.
    pub fn from_pairs<I: IntoIterator<Item = (u32, u32)>>(pairs: I) -> Self {
        let mut v: SmallVec<[(u32, u32); 6]> = pairs.into_iter().filter(|&(_, e)| e > 0).collect();
        v.sort_unstable_by_key(|&(p, _)| p);
        let mut out: SmallVec<[(u32, u32); 6]> = SmallVec::with_capacity(v.len());
        for (p, e) in v {
            match out.last_mut() {
                Some((q, f)) if *q == p => *f += e,
                _ => out.push((p, e)),
            }
        }
        MultiIndex(out)
    }

    /// Dense exponent vector `[a_1, ..., a_n]` with `a_i` at position `i`.
    pub fn from_dense(exps: &[u32]) -> Self {
        Self::from_pairs(exps.iter().enumerate().map(|(i, &e)| (i as u32 + 1, e)))
    }

    pub fn entries(&self) -> &[(u32, u32)] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `|alpha|`.
    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&(_, e)| e as u64).sum()
    }

    pub fn exponent(&self, pos: u32) -> u32 {
        match self.0.binary_search_by_key(&pos, |&(p, _)| p) {
            Ok(i) => self.0[i].1,
            Err(_) => 0,
        }
    }

    /// `alpha + beta`.
    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            let (pa, ea) = a[i];
            let (pb, eb) = b[j];
            if pa < pb {
                out.push((pa, ea));
                i += 1;
            } else if pb < pa {
                out.push((pb, eb));
                j += 1;
            } else {
                out.push((pa, ea + eb));
                i += 1;
                j += 1;
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        MultiIndex(out)
    }

    /// `alpha - beta` when `beta <= alpha` componentwise.
    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        let mut out = SmallVec::with_capacity(self.0.len());
        let mut j = 0;
        for &(p, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < p {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == p {
                let f = other.0[j].1;
                if f > e {
                    return None;
                }
                if e > f {
                    out.push((p, e - f));
                }
                j += 1;
            } else {
                out.push((p, e));
            }
        }
        (j == other.0.len()).then_some(MultiIndex(out))
    }

    /// Componentwise `alpha <= gamma`.
    pub fn le(&self, other: &MultiIndex) -> bool {
        self.0.iter().all(|&(p, e)| other.exponent(p) >= e)
    }

    /// Shift every position by `offset`.
    pub fn shifted(&self, offset: u32) -> MultiIndex {
        MultiIndex(self.0.iter().map(|&(p, e)| (p + offset, e)).collect())
    }

    /// `alpha` with the given variable's exponent replaced.
    pub fn with_exponent(&self, pos: u32, exp: u32) -> MultiIndex {
        let rest = self.0.iter().copied().filter(|&(p, _)| p != pos);
        MultiIndex::from_pairs(rest.chain(std::iter::once((pos, exp))))
    }
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, &(p, e)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if e == 1 {
                write!(f, "z{p}")?;
            } else {
                write!(f, "z{p}^{e}")?;
            }
        }
        Ok(())
    }
}
