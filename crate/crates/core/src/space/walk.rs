//! Backtracking enumeration of cubes, vertex by vertex in bitmask order.
//!
//! When a space is closed under taking faces through the origin, a partial
//! assignment is abandoned as soon as the face `{u ⊆ v}` at the newest vertex
//! `v` fails. Otherwise only complete maps are tested. The budget counts
//! membership queries. Spaces that list their cubes directly are not
//! searched; there the budget counts cubes visited.

use super::Cubespace;
use crate::error::{Error, Result};
use crate::limits::{Counter, Limits};

/// Receives a corner buffer and the values completing it at `1^n`.
pub type CornerVisit<'a> = dyn FnMut(&mut [usize], &[usize]) -> Result<bool> + 'a;

/// Visit every corner of dimension `n ≥ 1` whose faces `{x_j = 0}` are cubes,
/// with the list of values at `1^n` completing it to a cube.
///
/// The callback receives a buffer of length `2^n` whose last entry is
/// unspecified, and returns `false` to stop the walk.
pub fn for_each_corner(
    space: &dyn Cubespace,
    n: usize,
    limits: &Limits,
    visit: &mut CornerVisit,
) -> Result<u64> {
    let mut counter = limits.counter("cube enumeration").at_dim(n);
    walk_corners(space, n, &mut counter, visit)?;
    Ok(counter.used())
}

pub(crate) fn walk_corners(
    space: &dyn Cubespace,
    n: usize,
    counter: &mut Counter,
    visit: &mut CornerVisit,
) -> Result<()> {
    if n < 1 {
        return Err(Error::invalid("corners need dimension at least 1"));
    }
    if n > space.n_max() {
        return Err(Error::invalid(format!(
            "dimension {n} exceeds the oracle limit {}",
            space.n_max()
        )));
    }
    let mut walker = Walker {
        space,
        top: (1usize << n) - 1,
        n,
        prune: space.faces_closed(),
        buf: vec![0; 1 << n],
        completions: Vec::with_capacity(space.size()),
        counter,
        visit,
    };
    walker.descend(0)?;
    Ok(())
}

struct Walker<'a, 'b> {
    space: &'a dyn Cubespace,
    top: usize,
    n: usize,
    prune: bool,
    buf: Vec<usize>,
    completions: Vec<usize>,
    counter: &'a mut Counter,
    visit: &'b mut CornerVisit<'b>,
}

impl Walker<'_, '_> {
    /// Returns `false` once the visitor asked to stop.
    fn descend(&mut self, v: usize) -> Result<bool> {
        if v == self.top {
            return self.finish();
        }
        for x in 0..self.space.size() {
            self.buf[v] = x;
            if self.prune && v != 0 {
                self.counter.tick()?;
                if !self.space.lower_face_ok(&self.buf, v) {
                    continue;
                }
            }
            if !self.descend(v + 1)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn finish(&mut self) -> Result<bool> {
        let top = self.top;
        if !self.prune {
            for j in 0..self.n {
                self.counter.tick()?;
                if !self.space.lower_face_ok(&self.buf, top ^ (1 << j)) {
                    return Ok(true);
                }
            }
        }
        self.completions.clear();
        for x in 0..self.space.size() {
            self.buf[top] = x;
            self.counter.tick()?;
            let ok = if self.prune {
                self.space.lower_face_ok(&self.buf, top)
            } else {
                self.space.contains(&self.buf)
            };
            if ok {
                self.completions.push(x);
            }
        }
        let completions = std::mem::take(&mut self.completions);
        let go = (self.visit)(&mut self.buf, &completions)?;
        self.completions = completions;
        Ok(go)
    }
}

/// Visit every cube of dimension `n`; the callback returns `false` to stop.
pub fn for_each_cube(
    space: &dyn Cubespace,
    n: usize,
    limits: &Limits,
    visit: &mut dyn FnMut(&[usize]) -> Result<bool>,
) -> Result<u64> {
    let mut counter = limits.counter("cube enumeration").at_dim(n);
    walk_cubes(space, n, &mut counter, visit)?;
    Ok(counter.used())
}

pub(crate) fn walk_cubes(
    space: &dyn Cubespace,
    n: usize,
    counter: &mut Counter,
    visit: &mut dyn FnMut(&[usize]) -> Result<bool>,
) -> Result<()> {
    if n == 0 {
        for x in 0..space.size() {
            counter.tick()?;
            if !visit(&[x])? {
                break;
            }
        }
        return Ok(());
    }
    if space.direct_cubes() && n <= space.n_max() {
        space.visit_cubes(n, &mut |c| {
            counter.tick()?;
            visit(c)
        })?;
        return Ok(());
    }
    let top = (1usize << n) - 1;
    walk_corners(space, n, counter, &mut |buf, completions| {
        for &x in completions {
            buf[top] = x;
            if !visit(buf)? {
                return Ok(false);
            }
        }
        Ok(true)
    })
}

pub fn enumerate_cubes(
    space: &dyn Cubespace,
    n: usize,
    limits: &Limits,
) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    for_each_cube(space, n, limits, &mut |c| {
        out.push(c.to_vec());
        Ok(true)
    })?;
    Ok(out)
}

pub fn count_cubes(space: &dyn Cubespace, n: usize, limits: &Limits) -> Result<u64> {
    let mut count = 0u64;
    for_each_cube(space, n, limits, &mut |_| {
        count += 1;
        Ok(true)
    })?;
    Ok(count)
}
