//! Count symbols of the form `10_2 - 2_4 4_3` (proofs) and
//! `16^1_{10} 16^2_4 - 16_8 8_6 12_4` (ray/basis sets).
//!
//! A term `C^r_s` reads "C items of rank r with subscript s". Term order is
//! presentational, so equality of parsed symbols is checked as multisets.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    pub count: usize,
    pub rank: Option<usize>,
    pub sub: usize,
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn idx(v: usize) -> String {
            if v < 10 {
                v.to_string()
            } else {
                format!("{{{v}}}")
            }
        }
        write!(f, "{}", self.count)?;
        if let Some(r) = self.rank {
            write!(f, "^{}", idx(r))?;
        }
        write!(f, "_{}", idx(self.sub))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Symbol {
    pub left: Vec<Term>,
    pub right: Vec<Term>,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("malformed symbol {0:?}")]
pub struct SymbolError(pub String);

impl Symbol {
    /// Proof symbol: observables by multiplicity, IDs by size (largest first).
    pub fn from_counts(multiplicities: &[usize], sizes: &[usize]) -> Symbol {
        let mut left = group(multiplicities.iter().map(|&m| (None, m)));
        left.sort_by_key(|t| t.sub);
        let mut right = group(sizes.iter().map(|&s| (None, s)));
        right.sort_by(|a, b| b.sub.cmp(&a.sub));
        Symbol { left, right }
    }

    /// Ray/basis symbol: rays by rank ascending then multiplicity descending,
    /// bases by size descending. Ranks are omitted when every ray has rank 1.
    pub fn from_rays(rays: &[(usize, usize)], basis_sizes: &[usize]) -> Symbol {
        let all_rank_one = rays.iter().all(|&(r, _)| r == 1);
        let mut left = group(rays.iter().map(|&(r, m)| ((!all_rank_one).then_some(r), m)));
        left.sort_by(|a, b| a.rank.cmp(&b.rank).then(b.sub.cmp(&a.sub)));
        let mut right = group(basis_sizes.iter().map(|&s| (None, s)));
        right.sort_by(|a, b| b.sub.cmp(&a.sub));
        Symbol { left, right }
    }

    /// Total counts on each side, e.g. `(24, 9)` for a 24−9 set.
    pub fn totals(&self) -> (usize, usize) {
        (self.left.iter().map(|t| t.count).sum(), self.right.iter().map(|t| t.count).sum())
    }

    /// The short `R-B` form.
    pub fn short(&self) -> String {
        let (l, r) = self.totals();
        format!("{l}-{r}")
    }

    /// Equality up to term order (and up to omitted rank-1 superscripts).
    pub fn same_terms(&self, other: &Symbol) -> bool {
        fn norm(ts: &[Term]) -> Vec<Term> {
            let mut v: Vec<Term> = group(ts.iter().flat_map(|t| {
                std::iter::repeat_n((Some(t.rank.unwrap_or(1)), t.sub), t.count)
            }));
            v.sort();
            v
        }
        norm(&self.left) == norm(&other.left) && norm(&self.right) == norm(&other.right)
    }
}

fn group(items: impl Iterator<Item = (Option<usize>, usize)>) -> Vec<Term> {
    let mut counts: std::collections::BTreeMap<(Option<usize>, usize), usize> = Default::default();
    for k in items {
        *counts.entry(k).or_default() += 1;
    }
    counts.into_iter().map(|((rank, sub), count)| Term { count, rank, sub }).collect()
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |ts: &[Term]| ts.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(" ");
        write!(f, "{} - {}", side(&self.left), side(&self.right))
    }
}

impl Serialize for Symbol {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

fn parse_term(t: &str) -> Option<Term> {
    fn num(s: &str) -> Option<usize> {
        s.trim_start_matches('{').trim_end_matches('}').parse().ok()
    }
    let (head, sub) = t.split_once('_')?;
    let (count, rank) = match head.split_once('^') {
        Some((c, r)) => (num(c)?, Some(num(r)?)),
        None => (num(head)?, None),
    };
    Some(Term { count, rank, sub: num(sub)? })
}

impl FromStr for Symbol {
    type Err = SymbolError;

    fn from_str(s: &str) -> Result<Symbol, SymbolError> {
        let err = || SymbolError(s.to_string());
        let norm = s.replace('−', "-").replace('$', "");
        let (l, r) = norm.split_once(" - ").or_else(|| norm.split_once('-')).ok_or_else(err)?;
        let side = |x: &str| x.split_whitespace().map(parse_term).collect::<Option<Vec<Term>>>().ok_or_else(err);
        let (left, right) = (side(l)?, side(r)?);
        if left.is_empty() || right.is_empty() {
            return Err(err());
        }
        Ok(Symbol { left, right })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for s in ["10_2 - 2_4 4_3", "16^1_{10} 16^2_4 - 16_8 8_6 12_4", "40^8_5 16^{16}_4 - 19_8 12_6 10_4"] {
            let p: Symbol = s.parse().unwrap();
            assert_eq!(p.to_string(), s);
        }
        assert!("12_2".parse::<Symbol>().is_err());
        assert!("x_2 - 3_1".parse::<Symbol>().is_err());
    }

    #[test]
    fn builders_and_multiset_equality() {
        let s = Symbol::from_counts(&[2; 10], &[4, 4, 3, 3, 3, 3]);
        assert_eq!(s.to_string(), "10_2 - 2_4 4_3");
        let rb = Symbol::from_rays(&[(1, 10), (2, 4), (1, 10)], &[8, 6, 4]);
        assert_eq!(rb.to_string(), "2^1_{10} 1^2_4 - 1_8 1_6 1_4");
        let a: Symbol = "8^4_4 40^2_5 - 21_8 8_6 4_4".parse().unwrap();
        let b: Symbol = "40^2_5 8^4_4 - 21_8 8_6 4_4".parse().unwrap();
        assert!(a.same_terms(&b));
        let c: Symbol = "24^1_4 - 24_4".parse().unwrap();
        let d: Symbol = "24_4 - 24_4".parse().unwrap();
        assert!(c.same_terms(&d));
        assert_eq!(c.totals(), (24, 24));
        assert_eq!("24_4 − 24_4".parse::<Symbol>().unwrap().short(), "24-24");
    }
}
