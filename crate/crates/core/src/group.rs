//! Generic breadth-first closure for finite groups given by generators.

use std::collections::VecDeque;
use std::hash::Hash;

use rustc_hash::FxHashSet;

use crate::error::{Error, Result};

pub trait GroupElement: Copy + Eq + Hash + Ord {
    fn op(&self, other: &Self) -> Self;
    fn inverse(&self) -> Self;
}

/// All elements of `⟨gens⟩`, sorted ascending.
pub fn closure<T: GroupElement>(identity: T, gens: &[T], cap: usize) -> Result<Vec<T>> {
    extend_closure(vec![identity], gens, cap)
}

/// Closure of `base ∪ gens` where `base` contains the identity; every element
/// of `base` is treated as a starting point and `gens` must generate the result.
pub fn extend_closure<T: GroupElement>(base: Vec<T>, gens: &[T], cap: usize) -> Result<Vec<T>> {
    let mut seen: FxHashSet<T> = base.iter().copied().collect();
    if seen.len() > cap {
        return Err(Error::GroupTooLarge { cap });
    }
    let mut queue: VecDeque<T> = base.into_iter().collect();
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.op(g);
            if seen.insert(y) {
                if seen.len() > cap {
                    return Err(Error::GroupTooLarge { cap });
                }
                queue.push_back(y);
            }
        }
    }
    let mut out: Vec<T> = seen.into_iter().collect();
    out.sort_unstable();
    Ok(out)
}

/// Greedy generating set: scan `candidates` in order, keeping those not yet
/// generated. Returns the generators and the generated (sorted) group.
pub fn greedy_generate<T: GroupElement>(
    identity: T,
    candidates: impl IntoIterator<Item = T>,
    cap: usize,
) -> Result<(Vec<T>, Vec<T>)> {
    let mut gens: Vec<T> = Vec::new();
    let mut current = vec![identity];
    for c in candidates {
        if current.binary_search(&c).is_ok() {
            continue;
        }
        gens.push(c);
        current = extend_closure(current, &gens, cap)?;
    }
    Ok((gens, current))
}

/// Normal closure of `⟨gens⟩` under conjugation by `ambient_gens`.
pub fn normal_closure<T: GroupElement>(
    identity: T,
    gens: &[T],
    ambient_gens: &[T],
    cap: usize,
) -> Result<(Vec<T>, Vec<T>)> {
    let mut current_gens: Vec<T> = gens.to_vec();
    let mut group = closure(identity, &current_gens, cap)?;
    loop {
        let mut added = false;
        let snapshot = current_gens.clone();
        for a in ambient_gens {
            let ai = a.inverse();
            for x in &snapshot {
                let c = a.op(x).op(&ai);
                if group.binary_search(&c).is_err() {
                    current_gens.push(c);
                    group = extend_closure(group, &current_gens, cap)?;
                    added = true;
                }
            }
        }
        if !added {
            return Ok((current_gens, group));
        }
    }
}

pub fn element_order<T: GroupElement>(identity: T, g: T) -> u64 {
    let mut x = g;
    let mut n = 1;
    while x != identity {
        x = x.op(&g);
        n += 1;
    }
    n
}
