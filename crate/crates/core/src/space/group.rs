//! Cube structures on finite abelian groups.
//!
//! A map `c: {0,1}^n → Z_m` has a unique expansion `c(v) = Σ_S a_S Π_{j∈S} v_j`
//! with `a_S = Σ_{T⊆S} (-1)^{|S∖T|} c(T)`. The degree-k structure asks that
//! every coefficient of weight above `k` vanish; a filtration by subgroups
//! `d_w Z_m` asks that `a_S` be divisible by `d_{|S|}`.

use std::sync::Arc;

use super::{Cubespace, Space};
use crate::abelian::FinAbGroup;
use crate::error::{Error, Result};
use crate::limits::MAX_DIM;

/// A finite abelian group with a filtration cube structure, one divisor chain
/// per cyclic coordinate.
#[derive(Debug, Clone)]
pub struct GroupSpace {
    group: FinAbGroup,
    /// `divisors[j][w]` for weights `0..=MAX_DIM`.
    divisors: Vec<Vec<u64>>,
    /// `coords[x][j]` for ground index `x`.
    coords: Vec<Vec<u64>>,
    /// The same table flattened, `flat[x · coordinates + j]`.
    flat: Vec<i64>,
    step: Option<usize>,
}

impl GroupSpace {
    /// `divisors[j]` lists `d_1, d_2, …` for coordinate `j`; missing weights
    /// repeat the last entry. Each must divide the next and the cyclic order.
    pub fn filtered(group: FinAbGroup, divisors: Vec<Vec<u64>>) -> Result<Self> {
        let orders = group.cyclic_orders().to_vec();
        if divisors.len() != orders.len() {
            return Err(Error::invalid(
                "one divisor chain per cyclic coordinate is required",
            ));
        }
        let mut table = Vec::with_capacity(orders.len());
        for (chain, &n) in divisors.iter().zip(&orders) {
            let mut row = vec![1u64];
            for w in 1..=MAX_DIM {
                let d = chain.get(w - 1).or(chain.last()).copied().unwrap_or(1);
                let prev = row[w - 1];
                if d == 0 || n % d != 0 || d % prev != 0 {
                    return Err(Error::invalid(format!(
                        "divisor chain {chain:?} is not a decreasing filtration of Z_{n}"
                    )));
                }
                row.push(d);
            }
            table.push(row);
        }
        let bounded = table.iter().zip(&orders).all(|(row, &n)| row[MAX_DIM] == n);
        let step = bounded.then(|| {
            table
                .iter()
                .zip(&orders)
                .filter_map(|(row, &n)| (0..=MAX_DIM).filter(|&w| row[w] != n).max())
                .max()
                .unwrap_or(0)
        });
        let coords: Vec<Vec<u64>> = (0..group.order() as usize)
            .map(|x| group.element_at(x).0)
            .collect();
        let flat = coords.iter().flatten().map(|&c| c as i64).collect();
        Ok(GroupSpace {
            group,
            divisors: table,
            coords,
            flat,
            step,
        })
    }

    /// `D_k(A)`.
    pub fn dk(group: FinAbGroup, k: usize) -> Result<Self> {
        if k < 1 {
            return Err(Error::invalid("degree k must be at least 1"));
        }
        Self::with_degrees(group.clone(), &vec![k; group.num_coords()])
    }

    /// Coordinate `j` carries `D_{degrees[j]}(Z_{n_j})`.
    pub fn with_degrees(group: FinAbGroup, degrees: &[usize]) -> Result<Self> {
        let divisors = group
            .cyclic_orders()
            .iter()
            .zip(degrees)
            .map(|(&n, &k)| (1..=MAX_DIM).map(|w| if w <= k { 1 } else { n }).collect())
            .collect();
        Self::filtered(group, divisors)
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn divisor(&self, coord: usize, weight: usize) -> u64 {
        self.divisors[coord][weight.min(MAX_DIM)]
    }

    pub fn coords_of(&self, x: usize) -> &[u64] {
        &self.coords[x]
    }

    pub fn into_space(self) -> Space {
        Arc::new(self)
    }

    /// Möbius coefficients are computed over the integers; `a_S` lies in
    /// `d Z_m` exactly when `d | a_S`, since `d | m`.
    fn contains_on_stack<const L: usize>(&self, cube: &[usize]) -> bool {
        let len = cube.len();
        let nc = self.coords_per_point();
        let mut buf = [0i64; L];
        for (j, &n) in self.group.cyclic_orders().iter().enumerate() {
            if n == 1 {
                continue;
            }
            for (slot, &x) in buf.iter_mut().zip(cube) {
                *slot = self.flat[x * nc + j];
            }
            let mut bit = 1;
            while bit < len {
                for block in buf[..len].chunks_exact_mut(2 * bit) {
                    let (low, high) = block.split_at_mut(bit);
                    for (h, l) in high.iter_mut().zip(low.iter()) {
                        *h -= *l;
                    }
                }
                bit <<= 1;
            }
            let row = &self.divisors[j];
            for (s, &a) in buf[..len].iter().enumerate().skip(1) {
                let d = row[s.count_ones() as usize] as i64;
                let divides = if d & (d - 1) == 0 {
                    a & (d - 1) == 0
                } else {
                    a % d == 0
                };
                if !divides {
                    return false;
                }
            }
        }
        true
    }

    fn coords_per_point(&self) -> usize {
        self.group.cyclic_orders().len()
    }
}

/// `D_k(A)` as a shared cubespace.
pub fn dk_structure(group: &FinAbGroup, k: usize) -> Result<Space> {
    Ok(GroupSpace::dk(group.clone(), k)?.into_space())
}

impl Cubespace for GroupSpace {
    fn size(&self) -> usize {
        self.coords.len()
    }

    fn contains(&self, cube: &[usize]) -> bool {
        match cube.len() {
            0..=16 => self.contains_on_stack::<16>(cube),
            len if len <= 1 << MAX_DIM => self.contains_on_stack::<{ 1 << MAX_DIM }>(cube),
            _ => false,
        }
    }

    fn faces_closed(&self) -> bool {
        true
    }

    fn lower_face_ok(&self, partial: &[usize], v: usize) -> bool {
        if v == 0 {
            return true;
        }
        let w = v.count_ones();
        let nc = self.coords_per_point();
        for (j, &n) in self.group.cyclic_orders().iter().enumerate() {
            let d = self.divisors[j][w as usize];
            if d == 1 {
                continue;
            }
            let mut acc = 0i64;
            let mut u = v;
            loop {
                let val = self.flat[partial[u] * nc + j];
                if (w - u.count_ones()).is_multiple_of(2) {
                    acc += val;
                } else {
                    acc -= val;
                }
                if u == 0 {
                    break;
                }
                u = (u - 1) & v;
            }
            if !(acc.rem_euclid(n as i64) as u64).is_multiple_of(d) {
                return false;
            }
        }
        true
    }

    fn step_hint(&self) -> Option<usize> {
        self.step
    }

    fn direct_cubes(&self) -> bool {
        true
    }

    /// Runs an odometer over the admissible coefficients `a_S ∈ d_{|S|} Z_m`;
    /// stepping `a_S` adds `d_{|S|}` at every vertex above `S`.
    fn visit_cubes(
        &self,
        n: usize,
        visit: &mut dyn FnMut(&[usize]) -> Result<bool>,
    ) -> Result<bool> {
        if n > MAX_DIM {
            return Err(Error::invalid(format!(
                "dimension {n} exceeds the oracle limit {MAX_DIM}"
            )));
        }
        let orders = self.group.cyclic_orders();
        let len = 1usize << n;
        let full = len - 1;
        let mut strides = vec![1usize; orders.len()];
        for j in (0..orders.len().saturating_sub(1)).rev() {
            strides[j] = strides[j + 1] * orders[j + 1] as usize;
        }
        // (coordinate, vertex set S, step d, number of steps m/d)
        let digits: Vec<(usize, usize, u64, u64)> = (0..orders.len())
            .flat_map(|j| (0..len).map(move |s| (j, s)))
            .filter_map(|(j, s)| {
                let d = self.divisors[j][s.count_ones() as usize];
                (orders[j] / d > 1).then_some((j, s, d, orders[j] / d))
            })
            .collect();
        let mut vals = vec![vec![0u64; len]; orders.len()];
        let mut cube = vec![0usize; len];
        let mut counts = vec![0u64; digits.len()];
        loop {
            if !visit(&cube)? {
                return Ok(false);
            }
            let mut i = 0;
            loop {
                let Some(&(j, s, d, steps)) = digits.get(i) else {
                    return Ok(true);
                };
                let (m, stride) = (orders[j], strides[j]);
                let rest = full ^ s;
                let mut t = rest;
                loop {
                    let v = s | t;
                    let old = vals[j][v];
                    let new = (old + d) % m;
                    vals[j][v] = new;
                    cube[v] = cube[v] + new as usize * stride - old as usize * stride;
                    if t == 0 {
                        break;
                    }
                    t = (t - 1) & rest;
                }
                counts[i] += 1;
                if counts[i] < steps {
                    break;
                }
                counts[i] = 0;
                i += 1;
            }
        }
    }

    fn label(&self, x: usize) -> String {
        let c = &self.coords[x];
        if c.len() == 1 {
            c[0].to_string()
        } else {
            format!(
                "({})",
                c.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
            )
        }
    }
}

/// The linear structure: cubes are the maps extending to affine maps `Z^n → A`.
#[derive(Debug, Clone)]
pub struct LinearSpace {
    group: FinAbGroup,
}

pub fn linear_structure(group: &FinAbGroup) -> Space {
    Arc::new(LinearSpace {
        group: group.clone(),
    })
}

impl Cubespace for LinearSpace {
    fn size(&self) -> usize {
        self.group.order() as usize
    }

    fn contains(&self, cube: &[usize]) -> bool {
        let g = &self.group;
        let n = cube.len().trailing_zeros() as usize;
        let base = g.element_at(cube[0]);
        let steps: Vec<_> = (0..n)
            .map(|j| g.sub(&g.element_at(cube[1 << j]), &base))
            .collect();
        (0..cube.len()).all(|v| {
            let mut acc = base.clone();
            for (j, s) in steps.iter().enumerate() {
                if (v >> j) & 1 == 1 {
                    acc = g.add(&acc, s);
                }
            }
            g.index_of(&acc) == cube[v]
        })
    }

    fn faces_closed(&self) -> bool {
        true
    }

    fn step_hint(&self) -> Option<usize> {
        Some(1)
    }

    fn label(&self, x: usize) -> String {
        format!("{:?}", self.group.element_at(x))
    }
}
