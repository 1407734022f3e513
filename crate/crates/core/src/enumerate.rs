//! Exhaustive generators of small solutions, racks and abelian rack data.
//!
//! Output is labelled (no isomorphism rejection) and in a fixed order. Streams expose a cursor so a
//! long run can be resumed.

use serde::{Deserialize, Serialize};

use crate::perm::Perm;
use crate::rack::{check_rack_data, Rack, RackData};
use crate::solution::Solution;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error, Serialize, Deserialize)]
#[serde(tag = "error")]
pub enum EnumerationError {
    #[error("{kind} enumeration supports n ≤ {max}, got {n}")]
    SizeUnsupported { kind: String, n: usize, max: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Solutions,
    Racks,
    AbelianRackData,
}

impl Kind {
    pub fn max_n(self) -> usize {
        match self {
            Kind::Solutions => 3,
            Kind::Racks | Kind::AbelianRackData => 4,
        }
    }

    fn check(self, n: usize) -> Result<(), EnumerationError> {
        if n == 0 || n > self.max_n() {
            return Err(EnumerationError::SizeUnsupported { kind: format!("{self:?}"), n, max: self.max_n() });
        }
        Ok(())
    }
}

/// All permutations of `0..n` in lexicographic order.
pub fn all_perms(n: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(Perm(cur.clone()));
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("successor exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
}

/// Mixed-radix walk over `slots` independent choices from `perms`; the first slot varies slowest.
#[derive(Debug, Clone)]
struct Odometer {
    perms: Vec<Perm>,
    slots: usize,
    cursor: u64,
    total: u64,
}

impl Odometer {
    fn new(n: usize, slots: usize, cursor: u64) -> Self {
        let perms = all_perms(n);
        let total = (perms.len() as u64).pow(slots as u32);
        Odometer { perms, slots, cursor, total }
    }

    fn next_tuple(&mut self) -> Option<Vec<&Perm>> {
        if self.cursor >= self.total {
            return None;
        }
        let base = self.perms.len() as u64;
        let mut c = self.cursor;
        let mut digits = vec![0usize; self.slots];
        for d in digits.iter_mut().rev() {
            *d = (c % base) as usize;
            c /= base;
        }
        self.cursor += 1;
        Some(digits.into_iter().map(|d| &self.perms[d]).collect())
    }
}

/// Every solution on `0..n` for `n ≤ 3`: all `λ` and `ρ` tables with permutation rows, filtered by validation.
#[derive(Debug, Clone)]
pub struct SolutionStream {
    n: usize,
    odo: Odometer,
}

impl SolutionStream {
    pub fn cursor(&self) -> u64 {
        self.odo.cursor
    }

    pub fn total_candidates(&self) -> u64 {
        self.odo.total
    }
}

impl Iterator for SolutionStream {
    type Item = Solution;

    fn next(&mut self) -> Option<Solution> {
        let n = self.n;
        while let Some(t) = self.odo.next_tuple() {
            let lam = t[..n].iter().map(|p| p.0.clone()).collect();
            let rho = t[n..].iter().map(|p| p.0.clone()).collect();
            if let Ok(s) = Solution::new(lam, rho) {
                return Some(s);
            }
        }
        None
    }
}

pub fn enumerate_solutions(n: usize) -> Result<SolutionStream, EnumerationError> {
    resume_solutions(n, 0)
}

pub fn resume_solutions(n: usize, cursor: u64) -> Result<SolutionStream, EnumerationError> {
    Kind::Solutions.check(n)?;
    Ok(SolutionStream { n, odo: Odometer::new(n, 2 * n, cursor) })
}

/// Every rack on `0..n` for `n ≤ 4`, generated column by column from the right translations.
#[derive(Debug, Clone)]
pub struct RackStream {
    n: usize,
    odo: Odometer,
}

impl RackStream {
    pub fn cursor(&self) -> u64 {
        self.odo.cursor
    }
}

impl Iterator for RackStream {
    type Item = Rack;

    fn next(&mut self) -> Option<Rack> {
        let n = self.n;
        while let Some(cols) = self.odo.next_tuple() {
            let op = (0..n).map(|x| (0..n).map(|y| cols[y].apply(x)).collect()).collect();
            if let Ok(r) = Rack::new(op) {
                return Some(r);
            }
        }
        None
    }
}

pub fn enumerate_racks(n: usize) -> Result<RackStream, EnumerationError> {
    resume_racks(n, 0)
}

pub fn resume_racks(n: usize, cursor: u64) -> Result<RackStream, EnumerationError> {
    Kind::Racks.check(n)?;
    Ok(RackStream { n, odo: Odometer::new(n, n, cursor) })
}

/// Set partitions of `0..n` as sorted blocks ordered by least member, via restricted growth strings.
pub fn set_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn go(x: usize, n: usize, blocks: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if x == n {
            out.push(blocks.clone());
            return;
        }
        for i in 0..blocks.len() {
            blocks[i].push(x);
            go(x + 1, n, blocks, out);
            blocks[i].pop();
        }
        blocks.push(vec![x]);
        go(x + 1, n, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::new(), &mut out);
    out
}

/// Every valid [`RackData`] on `0..n` for `n ≤ 4`.
pub fn enumerate_abelian_rack_data(n: usize) -> Result<Vec<RackData>, EnumerationError> {
    Kind::AbelianRackData.check(n)?;
    let mut out = Vec::new();
    for blocks in set_partitions(n) {
        let r = blocks.len();
        let choices: Vec<Vec<Perm>> = blocks.iter().map(|b| all_perms(b.len())).collect();
        // Slot (i, j) picks from the permutations of block i.
        let radix: Vec<usize> = (0..r * r).map(|s| choices[s / r].len()).collect();
        let total: usize = radix.iter().product();
        for mut c in 0..total {
            let mut digits = vec![0; r * r];
            for s in (0..r * r).rev() {
                digits[s] = c % radix[s];
                c /= radix[s];
            }
            let f = (0..r).map(|i| (0..r).map(|j| choices[i][digits[i * r + j]].clone()).collect()).collect();
            let d = RackData { blocks: blocks.clone(), f };
            if check_rack_data(&d).is_ok() {
                out.push(d);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perms_and_partitions() {
        assert_eq!(all_perms(3).len(), 6);
        assert_eq!(all_perms(3)[1], Perm(vec![0, 2, 1]));
        assert_eq!(all_perms(0), vec![Perm(vec![])]);
        let bell: Vec<usize> = (1..=4).map(|n| set_partitions(n).len()).collect();
        assert_eq!(bell, vec![1, 2, 5, 15]);
    }

    #[test]
    fn sizes_are_limited() {
        assert!(enumerate_solutions(4).is_err());
        assert!(enumerate_racks(5).is_err());
        assert!(enumerate_abelian_rack_data(5).is_err());
        assert!(enumerate_solutions(0).is_err());
    }

    #[test]
    fn resuming_continues_the_stream() {
        let all: Vec<Solution> = enumerate_solutions(2).unwrap().collect();
        let mut s = enumerate_solutions(2).unwrap();
        let first = s.next().unwrap();
        let rest: Vec<Solution> = resume_solutions(2, s.cursor()).unwrap().collect();
        assert_eq!(all[0], first);
        assert_eq!(&all[1..], &rest[..]);
    }
}
