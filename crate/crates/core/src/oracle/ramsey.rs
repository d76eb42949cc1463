use std::collections::HashMap;

use crate::assigner::AssignmentFn;
use crate::assignment::switching_cost;
use crate::error::{Error, Result};
use crate::multiset::{for_each_combination, TaskMultiset};
use crate::oracle::binomial;
use crate::TaskId;

/// Largest number of `(w + 1)`-subsets the search scans.
pub const MAX_HYPEREDGES: u64 = 5_000_000;

/// `w + 1` tasks whose `w`-subsets all get the same coloring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RamseyWitness {
    /// Strictly increasing task ids.
    pub vertices: Vec<TaskId>,
    /// `color[i - 1] = π(i)`: worker `i` takes the `π(i)`-th smallest task.
    pub color: Vec<u32>,
    /// Switching cost between the assignments of the lowest and highest
    /// `w`-subsets.
    pub extreme_cost: usize,
}

/// Coloring of a `w`-set of tasks: the rank, 1-based, of each worker's
/// task within the set. `None` if some worker is idle or the assignment
/// is not onto the set.
pub fn hyperedge_color<A: AssignmentFn + ?Sized>(f: &A, edge: &[TaskId]) -> Result<Option<Vec<u32>>> {
    let tasks = TaskMultiset::from_tasks(f.universe(), edge.iter().copied())?;
    let a = f.assign(&tasks)?.assignment;
    let mut color = Vec::with_capacity(edge.len());
    for worker in 1..=f.workers() {
        let Some(task) = a.get(worker) else {
            return Ok(None);
        };
        match edge.binary_search(&task) {
            Ok(rank) => color.push(rank as u32 + 1),
            Err(_) => return Ok(None),
        }
    }
    Ok(Some(color))
}

/// Scans every `(w + 1)`-subset of `[t]` in lexicographic order and returns
/// the first one whose `w`-subsets share one coloring.
///
/// On a witness `τ_1 < ⋯ < τ_{w+1}` with coloring `π`, worker `i` holds
/// `τ_{π(i)}` on the lower subset and `τ_{π(i)+1}` on the upper one, so
/// all `w` workers move. That cost is measured, not assumed, and a
/// mismatch is reported as an error.
pub fn ramsey_witness<A: AssignmentFn + ?Sized>(f: &A, workers: u32, universe: u64) -> Result<Option<RamseyWitness>> {
    if workers != f.workers() || universe != f.universe() {
        return Err(Error::InvalidParameter(format!(
            "assigner is for w={}, t={}, asked for w={workers}, t={universe}",
            f.workers(),
            f.universe()
        )));
    }
    if workers == 0 {
        return Err(Error::InvalidParameter("w must be positive".into()));
    }
    let edges = binomial(universe, workers as u64 + 1);
    if edges > MAX_HYPEREDGES {
        return Err(Error::InvalidParameter(format!(
            "{edges} candidate vertex sets; at most {MAX_HYPEREDGES} are scanned"
        )));
    }

    let mut colors: HashMap<Vec<TaskId>, Option<Vec<u32>>> = HashMap::new();
    let mut found = None;
    let mut failure = None;
    let w = workers as usize;
    for_each_combination(universe, w + 1, |vertices| {
        let mut first: Option<Vec<u32>> = None;
        for skip in 0..=w {
            let edge: Vec<TaskId> = vertices
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, &v)| v)
                .collect();
            let color = match colors.get(&edge) {
                Some(c) => c.clone(),
                None => match hyperedge_color(f, &edge) {
                    Ok(c) => {
                        colors.insert(edge, c.clone());
                        c
                    }
                    Err(e) => {
                        failure = Some(e);
                        return false;
                    }
                },
            };
            let Some(color) = color else {
                return true;
            };
            match &first {
                None => first = Some(color),
                Some(c) if *c != color => return true,
                Some(_) => {}
            }
        }
        found = Some((vertices.to_vec(), first.expect("w + 1 >= 1 subsets")));
        false
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let Some((vertices, color)) = found else {
        return Ok(None);
    };

    let lower = TaskMultiset::from_tasks(universe, vertices[..w].iter().copied())?;
    let upper = TaskMultiset::from_tasks(universe, vertices[1..].iter().copied())?;
    let extreme_cost = switching_cost(&f.assign(&lower)?.assignment, &f.assign(&upper)?.assignment);
    if extreme_cost != w {
        return Err(Error::InvalidParameter(format!(
            "monochromatic witness with extreme cost {extreme_cost} != w = {w}"
        )));
    }
    Ok(Some(RamseyWitness {
        vertices,
        color,
        extreme_cost,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baselines::{PriorityOracle, RandomPermutation, SortedOrder};

    #[test]
    fn sorted_order_is_one_color() {
        let f = SortedOrder { workers: 2, universe: 4 };
        let wit = ramsey_witness(&f, 2, 4).unwrap().unwrap();
        assert_eq!(wit.vertices, vec![1, 2, 3]);
        assert_eq!(wit.color, vec![1, 2]);
        assert_eq!(wit.extreme_cost, 2);
    }

    #[test]
    fn single_worker_always_has_a_witness() {
        let f = RandomPermutation {
            workers: 1,
            universe: 5,
            oracle: PriorityOracle { seed: 3 },
        };
        let wit = ramsey_witness(&f, 1, 5).unwrap().unwrap();
        assert_eq!(wit.vertices, vec![1, 2]);
        assert_eq!(wit.color, vec![1]);
        assert_eq!(wit.extreme_cost, 1);
    }

    #[test]
    fn too_few_tasks_means_no_witness() {
        let f = SortedOrder { workers: 3, universe: 3 };
        assert_eq!(ramsey_witness(&f, 3, 3).unwrap(), None);
    }

    #[test]
    fn witnesses_are_monochromatic() {
        for seed in 0..20 {
            let f = RandomPermutation {
                workers: 2,
                universe: 7,
                oracle: PriorityOracle { seed },
            };
            if let Some(wit) = ramsey_witness(&f, 2, 7).unwrap() {
                for skip in 0..3 {
                    let edge: Vec<u64> = wit
                        .vertices
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != skip)
                        .map(|(_, &v)| v)
                        .collect();
                    assert_eq!(hyperedge_color(&f, &edge).unwrap().unwrap(), wit.color);
                }
            }
        }
    }

    #[test]
    fn mismatched_parameters_are_rejected() {
        let f = SortedOrder { workers: 2, universe: 4 };
        assert!(ramsey_witness(&f, 3, 4).is_err());
    }
}
