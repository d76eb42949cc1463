use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::assigner::DisperserFamily;
use crate::error::{Error, Result};
use crate::multiset::for_each_combination;
use crate::oracle::{binomial, Meter, SearchBudget};

/// Largest domain the search accepts.
pub const MAX_DOMAIN: u64 = 32;
/// Largest number of constrained subsets tracked during the search.
pub const MAX_SUBSETS: u64 = 2_000_000;
/// Largest row space `M^D` searched exactly.
pub const MAX_ROWS: u64 = 1 << 20;

/// Search for a `(k, ε)` strong disperser `[N] × [D] → [M]`.
///
/// Only subsets of exactly `2^k` elements are constrained, since coverage
/// grows with the subset. When the `M^D` possible table rows can be listed,
/// rows are fixed element by element in non-decreasing order (elements are
/// interchangeable) with backtracking, which is exact. Otherwise a
/// random-restart local search rewrites one cell of a violated subset at a
/// time and keeps moves that do not increase the total deficit.
///
/// The returned family has passed [`DisperserFamily::verify`]. Each tried
/// row or move counts as one budget node. `Ok(None)` means no family
/// exists (exact mode) or none was found within budget.
pub fn disperser_search(
    domain: u64,
    seeds: u32,
    bins: u32,
    min_entropy: u32,
    epsilon: f64,
    budget: &SearchBudget,
    seed: u64,
) -> Result<Option<DisperserFamily>> {
    if domain == 0 || domain > MAX_DOMAIN {
        return Err(Error::InvalidParameter(format!("N must lie in [1, {MAX_DOMAIN}], got {domain}")));
    }
    if seeds == 0 || bins == 0 {
        return Err(Error::InvalidParameter("D and M must be positive".into()));
    }
    if !(0.0..=1.0).contains(&epsilon) {
        return Err(Error::InvalidParameter(format!("epsilon must lie in [0, 1], got {epsilon}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = 1u64.checked_shl(min_entropy).unwrap_or(u64::MAX);
    let random = |rng: &mut ChaCha8Rng| -> Vec<u32> {
        (0..domain * seeds as u64).map(|_| rng.gen_range(0..bins)).collect()
    };
    let family = |table| DisperserFamily::from_table(domain, seeds, bins, min_entropy, epsilon, table);
    if size > domain {
        // nothing to satisfy
        return family(random(&mut rng)).map(Some);
    }
    let count = binomial(domain, size);
    if count > MAX_SUBSETS {
        return Err(Error::InvalidParameter(format!(
            "{count} subsets of size {size}; at most {MAX_SUBSETS} are tracked"
        )));
    }

    let mut state = Search::new(domain, seeds, bins, size as usize, random(&mut rng));
    let need = family(state.table.clone())?.required_coverage();
    let d = seeds as usize;
    // a subset can cover at most min(|S|, M) bins per seed
    if (size as usize).min(bins as usize) * d < need {
        return Ok(None);
    }
    let mut meter = budget.meter();
    if let Some(rows) = (bins as u64).checked_pow(seeds).filter(|&r| r <= MAX_ROWS) {
        return match backtrack(domain, seeds, bins, size as usize, need, rows, &mut meter) {
            Some(table) => Ok(Some(family(table)?).filter(DisperserFamily::verify)),
            None => Ok(None),
        };
    }
    state.reset_coverage(need);

    let stall_limit = (50 * domain * seeds as u64).max(2_000);
    let mut stall = 0u64;
    let mut best = state.deficit;
    while state.deficit > 0 {
        if !meter.tick() {
            return Ok(None);
        }
        if stall > stall_limit {
            state.table = random(&mut rng);
            state.reset_coverage(need);
            best = state.deficit;
            stall = 0;
            continue;
        }
        let violated = state.random_violated(&mut rng);
        let members = state.members(violated).to_vec();
        let element = members[rng.gen_range(0..members.len())];
        let s = rng.gen_range(0..seeds);
        let old = state.get(element, s);
        let new = rng.gen_range(0..bins);
        if new == old {
            stall += 1;
            continue;
        }
        let delta = state.delta(element, s, new);
        if delta <= 0 {
            state.apply(element, s, new);
            if state.deficit < best {
                best = state.deficit;
                stall = 0;
            } else {
                stall += 1;
            }
        } else {
            stall += 1;
        }
    }
    let found = family(state.table)?;
    debug_assert!(found.verify());
    if found.verify() {
        Ok(Some(found))
    } else {
        Ok(None)
    }
}

/// The literal claim: every subset with at least `2^k` elements covers
/// enough `(bin, seed)` pairs. Exponential in `N`; meant as a test oracle
/// for small domains.
pub fn verify_exhaustive(family: &DisperserFamily) -> bool {
    let n = family.domain();
    assert!(n <= 24, "exhaustive verification is limited to N <= 24");
    let min = family.min_subset_size();
    let need = family.required_coverage();
    let mut subset = Vec::with_capacity(n as usize);
    for mask in 1u64..(1 << n) {
        if (mask.count_ones() as u64) < min {
            continue;
        }
        subset.clear();
        subset.extend((0..n).filter(|i| mask >> i & 1 == 1).map(|i| i + 1));
        if family.coverage(&subset) < need {
            return false;
        }
    }
    true
}

/// Exact row-by-row search. Returns the table or `None` when the space is
/// exhausted or the meter runs out.
fn backtrack(
    domain: u64,
    seeds: u32,
    bins: u32,
    size: usize,
    need: usize,
    rows: u64,
    meter: &mut Meter,
) -> Option<Vec<u32>> {
    let n = domain as usize;
    let d = seeds as usize;
    let digits = |r: u64| -> Vec<u32> {
        let mut r = r;
        let mut out = vec![0; d];
        for slot in out.iter_mut().rev() {
            *slot = (r % bins as u64) as u32;
            r /= bins as u64;
        }
        out
    };
    let mut table: Vec<u32> = Vec::with_capacity(n * d);
    let mut chosen: Vec<u64> = Vec::with_capacity(n);
    let mut next: Vec<u64> = vec![0];
    let mut seen = vec![false; bins as usize];
    let mut others: Vec<usize> = Vec::with_capacity(size);
    while chosen.len() < n {
        let depth = chosen.len();
        let cand = next[depth];
        if cand >= rows {
            next.pop();
            let r = chosen.pop()?;
            table.truncate(table.len() - d);
            next[depth - 1] = r + 1;
            continue;
        }
        if !meter.tick() {
            return None;
        }
        table.extend(digits(cand));
        // every size-subset made of this element and earlier ones
        let mut ok = true;
        if size <= depth + 1 {
            for_each_combination(depth as u64, size - 1, |rest| {
                others.clear();
                others.extend(rest.iter().map(|&e| (e - 1) as usize));
                others.push(depth);
                let mut covered = 0;
                for s in 0..d {
                    seen.iter_mut().for_each(|b| *b = false);
                    for &e in &others {
                        let b = table[e * d + s] as usize;
                        if !seen[b] {
                            seen[b] = true;
                            covered += 1;
                        }
                    }
                }
                ok = covered >= need;
                ok
            });
        }
        if ok {
            chosen.push(cand);
            next.push(cand);
        } else {
            table.truncate(table.len() - d);
            next[depth] = cand + 1;
        }
    }
    Some(table)
}

struct Search {
    seeds: u32,
    size: usize,
    need: usize,
    table: Vec<u32>,
    // subset members, flattened
    subsets: Vec<u64>,
    // subsets containing each element (0-based)
    containing: Vec<Vec<u32>>,
    // distinct bins per (subset, seed)
    cover: Vec<u32>,
    // total per subset
    total: Vec<u32>,
    deficit: u64,
    scratch: Vec<bool>,
}

impl Search {
    fn new(domain: u64, seeds: u32, bins: u32, size: usize, table: Vec<u32>) -> Self {
        let mut subsets = Vec::new();
        let mut containing = vec![Vec::new(); domain as usize];
        let mut idx = 0u32;
        for_each_combination(domain, size, |s| {
            subsets.extend_from_slice(s);
            for &e in s {
                containing[(e - 1) as usize].push(idx);
            }
            idx += 1;
            true
        });
        let n = idx as usize;
        Search {
            seeds,
            size,
            need: 0,
            table,
            subsets,
            containing,
            cover: vec![0; n * seeds as usize],
            total: vec![0; n],
            deficit: 0,
            scratch: vec![false; bins as usize],
        }
    }

    fn count(&self) -> usize {
        self.total.len()
    }

    fn members(&self, subset: usize) -> &[u64] {
        &self.subsets[subset * self.size..(subset + 1) * self.size]
    }

    fn get(&self, element: u64, seed: u32) -> u32 {
        self.table[((element - 1) * self.seeds as u64 + seed as u64) as usize]
    }

    fn distinct(&mut self, subset: usize, seed: u32, changed: Option<(u64, u32)>) -> u32 {
        self.scratch.iter_mut().for_each(|s| *s = false);
        let mut n = 0;
        for i in 0..self.size {
            let e = self.subsets[subset * self.size + i];
            let b = match changed {
                Some((ce, cb)) if ce == e => cb,
                _ => self.get(e, seed),
            } as usize;
            if !self.scratch[b] {
                self.scratch[b] = true;
                n += 1;
            }
        }
        n
    }

    fn reset_coverage(&mut self, need: usize) {
        self.need = need;
        let d = self.seeds as usize;
        self.deficit = 0;
        for s in 0..self.count() {
            let mut t = 0;
            for seed in 0..self.seeds {
                let c = self.distinct(s, seed, None);
                self.cover[s * d + seed as usize] = c;
                t += c;
            }
            self.total[s] = t;
            self.deficit += need.saturating_sub(t as usize) as u64;
        }
    }

    /// A violated subset, scanning from a random start.
    fn random_violated<R: Rng>(&self, rng: &mut R) -> usize {
        let n = self.count();
        let start = rng.gen_range(0..n);
        (0..n)
            .map(|i| (start + i) % n)
            .find(|&s| (self.total[s] as usize) < self.need)
            .unwrap_or(start)
    }

    /// Change in total deficit if `(element, seed)` moved to `bin`.
    fn delta(&mut self, element: u64, seed: u32, bin: u32) -> i64 {
        let need = self.need;
        let d = self.seeds as usize;
        let mut delta = 0i64;
        for k in 0..self.containing[(element - 1) as usize].len() {
            let s = self.containing[(element - 1) as usize][k] as usize;
            let old_c = self.cover[s * d + seed as usize];
            let new_c = self.distinct(s, seed, Some((element, bin)));
            let old_t = self.total[s];
            let new_t = old_t + new_c - old_c;
            delta += need.saturating_sub(new_t as usize) as i64 - need.saturating_sub(old_t as usize) as i64;
        }
        delta
    }

    fn apply(&mut self, element: u64, seed: u32, bin: u32) {
        let need = self.need;
        let d = self.seeds as usize;
        self.table[((element - 1) * self.seeds as u64 + seed as u64) as usize] = bin;
        for k in 0..self.containing[(element - 1) as usize].len() {
            let s = self.containing[(element - 1) as usize][k] as usize;
            let old_c = self.cover[s * d + seed as usize];
            let new_c = self.distinct(s, seed, None);
            let old_t = self.total[s];
            let new_t = old_t + new_c - old_c;
            self.cover[s * d + seed as usize] = new_c;
            self.total[s] = new_t;
            self.deficit = self.deficit + need.saturating_sub(new_t as usize) as u64
                - need.saturating_sub(old_t as usize) as u64;
        }
    }
}
