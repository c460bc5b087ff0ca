//! Brute-force counting oracles for the partition families under study.
//!
//! Everything here is deliberately independent of the series machinery: the
//! sparse gap-condition families are counted by exhaustive backtracking over
//! admissible parts in decreasing order, and the dense congruence/gap
//! families by direct combinatorial recurrences on exact big integers. These
//! counts are the ground truth that the generating-function identities are
//! tested against.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// The pair (d, r) with d >= 3 and 1 <= r < d/2, as in the gap/congruence
/// conditions. Construction rejects anything else. No gcd reduction is
/// applied; callers wanting reduced parameters must reduce explicitly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SchurParams {
    d: u32,
    r: u32,
}

impl SchurParams {
    pub fn new(d: u32, r: u32) -> Result<Self> {
        if d < 3 || r < 1 || 2 * r >= d {
            return Err(Error::InvalidParams(format!(
                "need d >= 3 and 1 <= r < d/2, got (d, r) = ({d}, {r})"
            )));
        }
        Ok(SchurParams { d, r })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// True iff `part` is congruent to 0, r, or -r modulo d.
    pub fn residue_admissible(&self, part: u64) -> bool {
        let m = (part % self.d as u64) as u32;
        m == 0 || m == self.r || m == self.d - self.r
    }
}

impl std::fmt::Display for SchurParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.d, self.r)
    }
}

/// An integer partition: weakly decreasing positive parts. The empty
/// partition (weight 0) is allowed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    parts: Vec<u64>,
}

impl Partition {
    pub fn new(parts: Vec<u64>) -> Result<Self> {
        for w in parts.windows(2) {
            if w[0] < w[1] {
                return Err(Error::InvalidParams(format!(
                    "parts must be weakly decreasing, got {} before {}",
                    w[0], w[1]
                )));
            }
        }
        if parts.contains(&0) {
            return Err(Error::InvalidParams("parts must be positive".into()));
        }
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    pub fn weight(&self) -> u64 {
        self.parts.iter().sum()
    }
}

/// Schur admissibility with a strict lower bound on parts: every part
/// exceeds min_exclusive, every part is congruent to 0 or +-r (mod d),
/// consecutive parts differ by at least d, and by more than d whenever the
/// larger part is divisible by d. The empty partition is vacuously
/// admissible.
pub fn is_schur_admissible(p: &Partition, params: SchurParams, min_exclusive: u64) -> bool {
    let d = params.d as u64;
    for (i, &part) in p.parts.iter().enumerate() {
        if part <= min_exclusive || !params.residue_admissible(part) {
            return false;
        }
        if i + 1 < p.parts.len() {
            let gap = part - p.parts[i + 1];
            let required = if part % d == 0 { d + 1 } else { d };
            if gap < required {
                return false;
            }
        }
    }
    true
}

/// Number of Schur-admissible partitions of n with all parts > min_exclusive,
/// by exhaustive backtracking over admissible parts in decreasing order.
/// j = 0 gives the unrestricted-smallest-part family, j = d the family whose
/// smallest part exceeds d.
pub fn count_schur(params: SchurParams, min_exclusive: u64, n: u64) -> BigUint {
    let mut total = BigUint::zero();
    schur_backtrack(params, min_exclusive, n, n, &mut total, None, 0);
    total
}

/// As [`count_schur`] but restricted to exactly `num_parts` parts.
pub fn count_schur_by_parts(
    params: SchurParams,
    min_exclusive: u64,
    n: u64,
    num_parts: u64,
) -> BigUint {
    let mut total = BigUint::zero();
    schur_backtrack(params, min_exclusive, n, n, &mut total, Some(num_parts), 0);
    total
}

fn schur_backtrack(
    params: SchurParams,
    min_exclusive: u64,
    remaining: u64,
    largest_allowed: u64,
    total: &mut BigUint,
    exact_parts: Option<u64>,
    depth: u64,
) {
    if remaining == 0 {
        if exact_parts.is_none_or(|m| m == depth) {
            *total += BigUint::one();
        }
        return;
    }
    if exact_parts.is_some_and(|m| depth >= m) {
        return;
    }
    let d = params.d as u64;
    let mut part = remaining.min(largest_allowed);
    while part > min_exclusive {
        if params.residue_admissible(part) {
            let required_gap = if part.is_multiple_of(d) { d + 1 } else { d };
            let next_allowed = part.saturating_sub(required_gap);
            schur_backtrack(
                params,
                min_exclusive,
                remaining - part,
                next_allowed,
                total,
                exact_parts,
                depth + 1,
            );
        }
        part -= 1;
    }
}

/// Number of partitions of n into distinct parts congruent to +-r (mod d),
/// by backtracking in decreasing order.
pub fn count_distinct_congruent(params: SchurParams, n: u64) -> BigUint {
    fn recurse(params: SchurParams, remaining: u64, largest_allowed: u64, total: &mut BigUint) {
        if remaining == 0 {
            *total += BigUint::one();
            return;
        }
        let d = params.d as u64;
        let r = params.r as u64;
        let mut part = remaining.min(largest_allowed);
        while part >= 1 {
            let m = part % d;
            if m == r || m == d - r {
                recurse(params, remaining - part, part - 1, total);
            }
            part -= 1;
        }
    }
    let mut total = BigUint::zero();
    recurse(params, n, n, &mut total);
    total
}

fn validated_residues(modulus: u32, residues: &[u32]) -> Result<Vec<u64>> {
    if modulus < 2 {
        return Err(Error::InvalidResidues(format!(
            "modulus must be at least 2, got {modulus}"
        )));
    }
    if residues.is_empty() {
        return Err(Error::InvalidResidues("empty residue set".into()));
    }
    let mut reduced: Vec<u64> = Vec::new();
    for &res in residues {
        let m = (res % modulus) as u64;
        if m == 0 {
            return Err(Error::InvalidResidues(format!(
                "residue {res} reduces to 0 mod {modulus}"
            )));
        }
        if !reduced.contains(&m) {
            reduced.push(m);
        }
    }
    reduced.sort_unstable();
    Ok(reduced)
}

/// Table of partition counts with parts restricted to the given residue
/// classes mod `modulus` (unrestricted multiplicity), for 0 <= n <= n_max.
/// Computed by the bounded-largest-part recurrence, one part value at a time.
pub fn count_congruence_classes_table(
    modulus: u32,
    residues: &[u32],
    n_max: u64,
) -> Result<Vec<BigUint>> {
    let reduced = validated_residues(modulus, residues)?;
    let n_max = n_max as usize;
    let mut table = vec![BigUint::zero(); n_max + 1];
    table[0] = BigUint::one();
    let mut part = 1u64;
    while part <= n_max as u64 {
        if reduced.contains(&(part % modulus as u64)) {
            let a = part as usize;
            for v in a..=n_max {
                let prev = table[v - a].clone();
                table[v] += prev;
            }
        }
        part += 1;
    }
    Ok(table)
}

/// Number of partitions of n with every part in the given residue classes
/// mod `modulus`, with unrestricted multiplicity.
pub fn count_congruence_classes(modulus: u32, residues: &[u32], n: u64) -> Result<BigUint> {
    Ok(count_congruence_classes_table(modulus, residues, n)?
        .pop()
        .expect("table is never empty"))
}

/// Counter for partitions with consecutive differences >= gap and smallest
/// part >= a given bound. Memoized over (min_part, n) so that whole tables
/// are cheap; the recurrence splits on whether the smallest part equals the
/// bound.
pub struct GapPartitionCounter {
    gap: u64,
    memo: HashMap<(u64, u64), BigUint>,
}

impl GapPartitionCounter {
    pub fn new(gap: u64) -> Result<Self> {
        if gap == 0 {
            return Err(Error::InvalidParams("gap must be at least 1".into()));
        }
        Ok(GapPartitionCounter {
            gap,
            memo: HashMap::new(),
        })
    }

    /// Count partitions of n with differences >= gap and smallest part >= min_part.
    pub fn count(&mut self, min_part: u64, n: u64) -> BigUint {
        if n == 0 {
            return BigUint::one();
        }
        if min_part > n {
            return BigUint::zero();
        }
        if let Some(hit) = self.memo.get(&(min_part, n)) {
            return hit.clone();
        }
        // either no part equals min_part, or strip one part equal to it;
        // the next part up must then clear the gap
        let without = self.count(min_part + 1, n);
        let with = self.count(min_part + self.gap, n - min_part);
        let result = without + with;
        self.memo.insert((min_part, n), result.clone());
        result
    }
}

/// One-shot wrapper around [`GapPartitionCounter`].
pub fn count_gap_partitions(gap: u64, min_part: u64, n: u64) -> Result<BigUint> {
    if min_part == 0 {
        return Err(Error::InvalidParams("min_part must be at least 1".into()));
    }
    Ok(GapPartitionCounter::new(gap)?.count(min_part, n))
}
