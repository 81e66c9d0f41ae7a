//! Cubespaces as cube-membership oracles over a finite indexed ground set.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::limits::{Limits, MAX_DIM};

mod axioms;
mod group;
mod walk;

pub use axioms::{
    check_axioms, check_derivmorph, completion_count, is_morphism, morphism_survivors, same_cubes,
    AxiomReport, Counterexample, DerivmorphReport, DimReport,
};
pub use group::{dk_structure, linear_structure, GroupSpace, LinearSpace};
pub use walk::{count_cubes, enumerate_cubes, for_each_corner, for_each_cube, CornerVisit};

/// A finite ground set `0..size()` together with its cube sets.
///
/// A cube of dimension `n` is a slice of length `2^n` indexed by vertex
/// bitmask. Zero-dimensional cubes are always members.
pub trait Cubespace: Send + Sync + fmt::Debug {
    fn size(&self) -> usize;

    /// Largest dimension `contains` answers.
    fn n_max(&self) -> usize {
        MAX_DIM
    }

    fn contains(&self, cube: &[usize]) -> bool;

    /// Whether membership of a cube implies membership of every face through
    /// the origin. Enumeration prunes on these faces when this holds.
    fn faces_closed(&self) -> bool {
        false
    }

    /// Whether the face `{u ⊆ v}` of `partial` is a cube. Only entries at
    /// vertices `u ⊆ v` are read.
    fn lower_face_ok(&self, partial: &[usize], v: usize) -> bool {
        let face = lower_face(partial, v);
        self.contains(&face)
    }

    fn step_hint(&self) -> Option<usize> {
        None
    }

    /// Whether [`Cubespace::visit_cubes`] lists cubes without searching.
    fn direct_cubes(&self) -> bool {
        false
    }

    /// Visit every `n`-cube in some fixed order, for spaces with
    /// [`Cubespace::direct_cubes`]. Returns `false` once `visit` asks to stop.
    fn visit_cubes(
        &self,
        _n: usize,
        _visit: &mut dyn FnMut(&[usize]) -> Result<bool>,
    ) -> Result<bool> {
        Err(Error::Unsupported(
            "no direct cube enumeration for this space".into(),
        ))
    }

    fn label(&self, x: usize) -> String {
        x.to_string()
    }
}

pub type Space = Arc<dyn Cubespace>;

/// Dimension of a cube given as a slice, if its length is a power of two.
pub fn cube_dim(cube: &[usize]) -> Option<usize> {
    let len = cube.len();
    if len.is_power_of_two() {
        Some(len.trailing_zeros() as usize)
    } else {
        None
    }
}

/// The restriction of `map` to the face `{u ⊆ v}`, as a cube of dimension `|v|`.
pub fn lower_face(map: &[usize], v: usize) -> Vec<usize> {
    let bits: Vec<usize> = (0..usize::BITS as usize)
        .filter(|&j| (v >> j) & 1 == 1)
        .collect();
    (0..1usize << bits.len())
        .map(|w| {
            let u = bits
                .iter()
                .enumerate()
                .fold(0usize, |acc, (t, &j)| acc | (((w >> t) & 1) << j));
            map[u]
        })
        .collect()
}

type Oracle = Box<dyn Fn(&[usize]) -> bool + Send + Sync>;

/// A cubespace given by an arbitrary membership closure.
pub struct OracleSpace {
    size: usize,
    n_max: usize,
    oracle: Oracle,
}

impl OracleSpace {
    pub fn new(
        size: usize,
        n_max: usize,
        oracle: impl Fn(&[usize]) -> bool + Send + Sync + 'static,
    ) -> Self {
        OracleSpace {
            size,
            n_max,
            oracle: Box::new(oracle),
        }
    }

    /// The space whose cubes are exactly the constant maps.
    pub fn constant_cubes(size: usize) -> Self {
        OracleSpace::new(size, MAX_DIM, |c| c.iter().all(|&x| x == c[0]))
    }

    /// The space in which every map is a cube.
    pub fn full(size: usize) -> Self {
        OracleSpace::new(size, MAX_DIM, |_| true)
    }
}

impl fmt::Debug for OracleSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Oracle(size {})", self.size)
    }
}

impl Cubespace for OracleSpace {
    fn size(&self) -> usize {
        self.size
    }

    fn n_max(&self) -> usize {
        self.n_max
    }

    fn contains(&self, cube: &[usize]) -> bool {
        cube.len() == 1 || (self.oracle)(cube)
    }
}

/// `N1 × N2` with ground index `a · |N2| + b`.
#[derive(Debug, Clone)]
pub struct ProductSpace {
    left: Space,
    right: Space,
}

impl ProductSpace {
    pub fn new(left: Space, right: Space) -> Self {
        ProductSpace { left, right }
    }

    pub fn left(&self) -> &Space {
        &self.left
    }

    pub fn right(&self) -> &Space {
        &self.right
    }

    pub fn pair(&self, a: usize, b: usize) -> usize {
        a * self.right.size() + b
    }

    pub fn split(&self, x: usize) -> (usize, usize) {
        (x / self.right.size(), x % self.right.size())
    }

    /// Apply `f` to the two coordinate maps of `cube`.
    fn with_split<T>(&self, cube: &[usize], f: impl FnOnce(&[usize], &[usize]) -> T) -> T {
        if cube.len() <= 16 {
            self.split_on_stack::<16, T>(cube, f)
        } else {
            self.split_on_stack::<{ 1 << MAX_DIM }, T>(cube, f)
        }
    }

    fn split_on_stack<const L: usize, T>(
        &self,
        cube: &[usize],
        f: impl FnOnce(&[usize], &[usize]) -> T,
    ) -> T {
        let len = cube.len().min(L);
        let mut a = [0usize; L];
        let mut b = [0usize; L];
        for (v, &x) in cube[..len].iter().enumerate() {
            (a[v], b[v]) = self.split(x);
        }
        f(&a[..len], &b[..len])
    }
}

pub fn product(left: Space, right: Space) -> Space {
    Arc::new(ProductSpace::new(left, right))
}

impl Cubespace for ProductSpace {
    fn size(&self) -> usize {
        self.left.size() * self.right.size()
    }

    fn n_max(&self) -> usize {
        self.left.n_max().min(self.right.n_max())
    }

    fn contains(&self, cube: &[usize]) -> bool {
        if cube.len() > 1 << MAX_DIM {
            return false;
        }
        self.with_split(cube, |a, b| self.left.contains(a) && self.right.contains(b))
    }

    fn faces_closed(&self) -> bool {
        self.left.faces_closed() && self.right.faces_closed()
    }

    fn lower_face_ok(&self, partial: &[usize], v: usize) -> bool {
        self.with_split(partial, |a, b| {
            self.left.lower_face_ok(a, v) && self.right.lower_face_ok(b, v)
        })
    }

    fn step_hint(&self) -> Option<usize> {
        Some(self.left.step_hint()?.max(self.right.step_hint()?))
    }

    fn direct_cubes(&self) -> bool {
        self.left.direct_cubes() && self.right.direct_cubes()
    }

    fn visit_cubes(
        &self,
        n: usize,
        visit: &mut dyn FnMut(&[usize]) -> Result<bool>,
    ) -> Result<bool> {
        let mut buf = vec![0usize; 1 << n];
        self.left.visit_cubes(n, &mut |a| {
            self.right.visit_cubes(n, &mut |b| {
                for (slot, (&x, &y)) in buf.iter_mut().zip(a.iter().zip(b)) {
                    *slot = self.pair(x, y);
                }
                visit(&buf)
            })
        })
    }

    fn label(&self, x: usize) -> String {
        let (a, b) = self.split(x);
        format!("({},{})", self.left.label(a), self.right.label(b))
    }
}

/// The subspace induced on a subset of the ground set: a map into the subset
/// is a cube when it is a cube of the parent.
#[derive(Debug, Clone)]
pub struct InducedSpace {
    parent: Space,
    points: Vec<usize>,
}

impl InducedSpace {
    pub fn new(parent: Space, points: Vec<usize>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::invalid("induced subspace needs at least one point"));
        }
        if points.iter().any(|&p| p >= parent.size()) {
            return Err(Error::invalid(
                "induced subspace point outside the ground set",
            ));
        }
        Ok(InducedSpace { parent, points })
    }

    pub fn parent(&self) -> &Space {
        &self.parent
    }

    /// Parent index of each point.
    pub fn points(&self) -> &[usize] {
        &self.points
    }

    fn lift(&self, cube: &[usize]) -> Vec<usize> {
        cube.iter().map(|&x| self.points[x]).collect()
    }
}

impl Cubespace for InducedSpace {
    fn size(&self) -> usize {
        self.points.len()
    }

    fn n_max(&self) -> usize {
        self.parent.n_max()
    }

    fn contains(&self, cube: &[usize]) -> bool {
        self.parent.contains(&self.lift(cube))
    }

    fn faces_closed(&self) -> bool {
        self.parent.faces_closed()
    }

    fn lower_face_ok(&self, partial: &[usize], v: usize) -> bool {
        self.parent.lower_face_ok(&self.lift(partial), v)
    }

    fn step_hint(&self) -> Option<usize> {
        self.parent.step_hint()
    }

    fn label(&self, x: usize) -> String {
        self.parent.label(self.points[x])
    }
}

/// The subdirect product `{(a, b) : p1(a) = p2(b)}` of `N` and `K` over a common
/// factor `F`, inside `N × K`. Both projections must be morphisms into `F`,
/// checked on cubes up to dimension `n_check`.
pub fn subdirect_product(
    n: Space,
    k: Space,
    f: Space,
    p1: &[usize],
    p2: &[usize],
    n_check: usize,
    limits: &Limits,
) -> Result<InducedSpace> {
    if p1.len() != n.size() || p2.len() != k.size() {
        return Err(Error::invalid(
            "projection tables do not match the ground sets",
        ));
    }
    if p1.iter().chain(p2).any(|&x| x >= f.size()) {
        return Err(Error::invalid("projection lands outside the common factor"));
    }
    if !is_morphism(p1, n.as_ref(), f.as_ref(), n_check, limits)? {
        return Err(Error::invalid("first projection is not a morphism"));
    }
    if !is_morphism(p2, k.as_ref(), f.as_ref(), n_check, limits)? {
        return Err(Error::invalid("second projection is not a morphism"));
    }
    let prod = ProductSpace::new(n.clone(), k.clone());
    let mut points = Vec::new();
    for (a, &pa) in p1.iter().enumerate() {
        for (b, &pb) in p2.iter().enumerate() {
            if pa == pb {
                points.push(prod.pair(a, b));
            }
        }
    }
    InducedSpace::new(Arc::new(prod), points)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lower_face_picks_subsets() {
        let map: Vec<usize> = (0..8).collect();
        assert_eq!(lower_face(&map, 0b101), vec![0, 1, 4, 5]);
        assert_eq!(lower_face(&map, 0), vec![0]);
        assert_eq!(lower_face(&map, 0b111), map);
    }

    #[test]
    fn cube_dims() {
        assert_eq!(cube_dim(&[0; 8]), Some(3));
        assert_eq!(cube_dim(&[0; 6]), None);
    }
}
