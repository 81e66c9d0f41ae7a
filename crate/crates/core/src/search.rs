//! Lexicographic backtracking over per-point choices, pruned by cubes.

use crate::error::Result;
use crate::limits::{Counter, Limits};
use crate::space::{enumerate_cubes, Cubespace};

/// Cubes of dimensions `from..=n_upto`, grouped by their largest point.
pub(crate) fn cubes_by_max(
    space: &dyn Cubespace,
    from: usize,
    n_upto: usize,
    limits: &Limits,
) -> Result<Vec<Vec<Vec<usize>>>> {
    let mut by_max = vec![Vec::new(); space.size()];
    for n in from..=n_upto {
        for c in enumerate_cubes(space, n, limits)? {
            let m = *c.iter().max().unwrap();
            by_max[m].push(c);
        }
    }
    Ok(by_max)
}

/// Backtracking over `choice[x] ∈ options[x]` in increasing order, checking
/// each constraint cube once its largest point is assigned.
pub(crate) struct Backtrack<'a> {
    pub(crate) options: &'a [Vec<usize>],
    pub(crate) by_max: &'a [Vec<Vec<usize>>],
    pub(crate) accept: &'a dyn Fn(&[usize], &[usize]) -> bool,
    pub(crate) finish: &'a mut dyn FnMut(&[usize]) -> Result<bool>,
    pub(crate) counter: Counter,
    pub(crate) rejected: u64,
}

impl Backtrack<'_> {
    pub(crate) fn weight(&self, from: usize) -> u64 {
        self.options[from..]
            .iter()
            .fold(1u64, |acc, o| acc.saturating_mul(o.len() as u64))
    }

    pub(crate) fn go(&mut self, choice: &mut Vec<usize>, x: usize) -> Result<bool> {
        if x == self.options.len() {
            if (self.finish)(choice)? {
                return Ok(true);
            }
            self.rejected = self.rejected.saturating_add(1);
            return Ok(false);
        }
        for t in 0..self.options[x].len() {
            choice[x] = self.options[x][t];
            let mut ok = true;
            for c in &self.by_max[x] {
                self.counter.tick()?;
                if !(self.accept)(choice, c) {
                    ok = false;
                    break;
                }
            }
            if !ok {
                let w = self.weight(x + 1);
                self.rejected = self.rejected.saturating_add(w);
                continue;
            }
            if self.go(choice, x + 1)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}
