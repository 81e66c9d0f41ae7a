//! Abstract cubes `{0,1}^n`, their faces, and cube morphisms.
//!
//! Vertices are bitmasks: bit `j` of a vertex is coordinate `j`. A map on
//! `{0,1}^n` is a slice of length `2^n` indexed by vertex.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::limits::Limits;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Vertex {
    pub bits: u32,
    pub dim: usize,
}

impl Vertex {
    pub fn new(bits: u32, dim: usize) -> Self {
        debug_assert!(dim >= 32 || bits >> dim == 0);
        Vertex { bits, dim }
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = 0u32;
        for (j, &b) in bits.iter().enumerate() {
            if b != 0 {
                v |= 1 << j;
            }
        }
        Vertex {
            bits: v,
            dim: bits.len(),
        }
    }

    pub fn weight(&self) -> u32 {
        self.bits.count_ones()
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 0..self.dim {
            write!(f, "{}", (self.bits >> j) & 1)?;
        }
        Ok(())
    }
}

/// `(-1)^{h(v)}` with `h(v)` the number of ones.
pub fn h_parity(v: Vertex) -> i64 {
    if v.weight().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// All vertices of `{0,1}^n` except `1^n`, in increasing bitmask order.
pub fn corner_vertices(n: usize) -> Result<Vec<Vertex>> {
    if n < 1 {
        return Err(Error::invalid("corners need dimension at least 1"));
    }
    let top = (1u32 << n) - 1;
    Ok((0..top).map(|b| Vertex::new(b, n)).collect())
}

/// A face given by a partial assignment of coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Face {
    pub fixed: Vec<Option<bool>>,
}

impl Face {
    pub fn ambient_dim(&self) -> usize {
        self.fixed.len()
    }

    pub fn dim(&self) -> usize {
        self.fixed.iter().filter(|c| c.is_none()).count()
    }

    pub fn contains(&self, v: u32) -> bool {
        self.fixed.iter().enumerate().all(|(j, c)| match c {
            None => true,
            Some(b) => ((v >> j) & 1 == 1) == *b,
        })
    }

    /// Vertices in increasing bitmask order.
    pub fn vertices(&self) -> Vec<u32> {
        (0..1u32 << self.ambient_dim())
            .filter(|&v| self.contains(v))
            .collect()
    }

    /// Bitmask of vertices, for `n ≤ 6`.
    pub fn vertex_mask(&self) -> u64 {
        self.vertices().iter().fold(0u64, |m, &v| m | (1u64 << v))
    }
}

/// Every face of `{0,1}^n` of codimension `codim`.
pub fn faces_of_codim(n: usize, codim: usize) -> Vec<Face> {
    let mut out = Vec::new();
    if codim > n {
        return out;
    }
    for fixed_set in 0u32..1 << n {
        if fixed_set.count_ones() as usize != codim {
            continue;
        }
        for values in 0u32..1 << n {
            if values & !fixed_set != 0 {
                continue;
            }
            let fixed = (0..n)
                .map(|j| {
                    if (fixed_set >> j) & 1 == 1 {
                        Some((values >> j) & 1 == 1)
                    } else {
                        None
                    }
                })
                .collect();
            out.push(Face { fixed });
        }
    }
    out
}

/// One output coordinate of a cube morphism.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CoordForm {
    Zero,
    One,
    Input(usize),
    Negated(usize),
}

impl CoordForm {
    #[inline]
    fn eval(self, v: u32) -> u32 {
        match self {
            CoordForm::Zero => 0,
            CoordForm::One => 1,
            CoordForm::Input(j) => (v >> j) & 1,
            CoordForm::Negated(j) => 1 ^ ((v >> j) & 1),
        }
    }
}

/// A map `{0,1}^n → {0,1}^m` in coordinate form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CubeMorphism {
    n: usize,
    forms: Vec<CoordForm>,
}

impl CubeMorphism {
    pub fn new(n: usize, forms: Vec<CoordForm>) -> Result<Self> {
        for f in &forms {
            if let CoordForm::Input(j) | CoordForm::Negated(j) = f {
                if *j >= n {
                    return Err(Error::invalid(format!(
                        "coordinate form refers to input {j} ≥ {n}"
                    )));
                }
            }
        }
        Ok(CubeMorphism { n, forms })
    }

    pub fn identity(n: usize) -> Self {
        CubeMorphism {
            n,
            forms: (0..n).map(CoordForm::Input).collect(),
        }
    }

    pub fn source_dim(&self) -> usize {
        self.n
    }

    pub fn target_dim(&self) -> usize {
        self.forms.len()
    }

    pub fn forms(&self) -> &[CoordForm] {
        &self.forms
    }

    #[inline]
    pub fn apply(&self, v: u32) -> u32 {
        self.forms
            .iter()
            .enumerate()
            .fold(0u32, |acc, (i, f)| acc | (f.eval(v) << i))
    }

    pub fn table(&self) -> Vec<u32> {
        (0..1u32 << self.n).map(|v| self.apply(v)).collect()
    }

    /// `other ∘ self`: first `self`, then `other`.
    pub fn then(&self, other: &CubeMorphism) -> Result<CubeMorphism> {
        if other.n != self.target_dim() {
            return Err(Error::invalid("morphism dimensions do not compose"));
        }
        let forms = other
            .forms
            .iter()
            .map(|f| match *f {
                CoordForm::Zero => CoordForm::Zero,
                CoordForm::One => CoordForm::One,
                CoordForm::Input(j) => self.forms[j],
                CoordForm::Negated(j) => match self.forms[j] {
                    CoordForm::Zero => CoordForm::One,
                    CoordForm::One => CoordForm::Zero,
                    CoordForm::Input(t) => CoordForm::Negated(t),
                    CoordForm::Negated(t) => CoordForm::Input(t),
                },
            })
            .collect();
        Ok(CubeMorphism { n: self.n, forms })
    }

    /// Pull a map on `{0,1}^m` back to `{0,1}^n`.
    pub fn precompose<T: Copy>(&self, map: &[T]) -> Vec<T> {
        debug_assert_eq!(map.len(), 1 << self.target_dim());
        (0..1u32 << self.n)
            .map(|v| map[self.apply(v) as usize])
            .collect()
    }
}

/// All `(2n+2)^m` coordinate-form morphisms `{0,1}^n → {0,1}^m`.
pub fn enumerate_cube_morphisms(n: usize, m: usize, limits: &Limits) -> Result<Vec<CubeMorphism>> {
    let per = 2 * n as u64 + 2;
    let total = (per as u128).pow(m as u32);
    if total > limits.candidates as u128 {
        return Err(Error::ResourceLimit {
            what: format!("cube morphisms {n}→{m}"),
            budget: limits.candidates,
            dim: Some(m),
        });
    }
    let choices: Vec<CoordForm> = [CoordForm::Zero, CoordForm::One]
        .into_iter()
        .chain((0..n).map(CoordForm::Input))
        .chain((0..n).map(CoordForm::Negated))
        .collect();
    let mut out = Vec::with_capacity(total as usize);
    let mut idx = vec![0usize; m];
    loop {
        out.push(CubeMorphism {
            n,
            forms: idx.iter().map(|&i| choices[i]).collect(),
        });
        let mut pos = 0;
        loop {
            if pos == m {
                return Ok(out);
            }
            idx[pos] += 1;
            if idx[pos] < choices.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// Whether `table: {0,1}^n → {0,1}^m` extends to an affine map `Z^n → Z^m`.
///
/// Solves each output coordinate `g(v) = c + Σ a_j v_j` over the integers from
/// the values at `0` and the unit vectors, then checks every vertex.
pub fn extends_affinely(n: usize, m: usize, table: &[u32]) -> bool {
    (0..m).all(|i| {
        let g = |v: u32| ((table[v as usize] >> i) & 1) as i64;
        let c = g(0);
        let a: Vec<i64> = (0..n).map(|j| g(1 << j) - c).collect();
        (0..1u32 << n).all(|v| {
            let val = c
                + (0..n)
                    .filter(|&j| (v >> j) & 1 == 1)
                    .map(|j| a[j])
                    .sum::<i64>();
            val == g(v)
        })
    })
}

/// Morphisms into `{0,1}^m` whose precompositions generate every cube
/// morphism between dimensions `≤ n_upto`: adjacent transpositions, one
/// reflection, restriction to a face, a diagonal, and a dummy coordinate.
pub fn composition_generators(m: usize, n_upto: usize) -> Vec<CubeMorphism> {
    let ident = |k: usize| -> Vec<CoordForm> { (0..k).map(CoordForm::Input).collect() };
    let mut out = Vec::new();
    for j in 0..m.saturating_sub(1) {
        let mut f = ident(m);
        f.swap(j, j + 1);
        out.push(CubeMorphism { n: m, forms: f });
    }
    if m >= 1 {
        let mut f = ident(m);
        f[0] = CoordForm::Negated(0);
        out.push(CubeMorphism { n: m, forms: f });

        let mut f = ident(m - 1);
        f.push(CoordForm::Zero);
        out.push(CubeMorphism { n: m - 1, forms: f });
    }
    if m >= 2 {
        let mut f = ident(m - 1);
        f.push(CoordForm::Input(m - 2));
        out.push(CubeMorphism { n: m - 1, forms: f });
    }
    if m < n_upto {
        out.push(CubeMorphism {
            n: m + 1,
            forms: ident(m),
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn all_maps(n: usize, m: usize) -> Vec<Vec<u32>> {
        let size = 1usize << n;
        let targets = 1u64 << m;
        let count = targets.pow(size as u32);
        (0..count)
            .map(|mut code| {
                (0..size)
                    .map(|_| {
                        let t = (code % targets) as u32;
                        code /= targets;
                        t
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn morphism_counts() {
        let lim = Limits::default();
        assert_eq!(enumerate_cube_morphisms(1, 1, &lim).unwrap().len(), 4);
        assert_eq!(enumerate_cube_morphisms(0, 1, &lim).unwrap().len(), 2);
        let distinct: HashSet<Vec<u32>> = enumerate_cube_morphisms(2, 1, &lim)
            .unwrap()
            .iter()
            .map(|m| m.table())
            .collect();
        assert_eq!(distinct.len(), 6);
        let oracle = all_maps(2, 1)
            .into_iter()
            .filter(|t| extends_affinely(2, 1, t))
            .count();
        assert_eq!(oracle, 6);
    }

    #[test]
    fn budget_is_respected() {
        let lim = Limits::with_candidates(10);
        assert!(matches!(
            enumerate_cube_morphisms(2, 2, &lim),
            Err(Error::ResourceLimit { .. })
        ));
    }

    #[test]
    fn coordinate_forms_are_exactly_the_affine_maps() {
        let lim = Limits::default();
        for n in 0..=3 {
            for m in 0..=2 {
                let forms: HashSet<Vec<u32>> = enumerate_cube_morphisms(n, m, &lim)
                    .unwrap()
                    .iter()
                    .map(|f| f.table())
                    .collect();
                let oracle: HashSet<Vec<u32>> = all_maps(n, m)
                    .into_iter()
                    .filter(|t| extends_affinely(n, m, t))
                    .collect();
                assert_eq!(forms, oracle, "n={n} m={m}");
            }
        }
    }

    #[test]
    fn composition_is_closed() {
        let lim = Limits::default();
        for a in 0..=2 {
            for b in 0..=2 {
                for c in 0..=2 {
                    let first = enumerate_cube_morphisms(a, b, &lim).unwrap();
                    let second = enumerate_cube_morphisms(b, c, &lim).unwrap();
                    for f in &first {
                        for g in &second {
                            let h = f.then(g).unwrap();
                            let direct: Vec<u32> =
                                (0..1u32 << a).map(|v| g.apply(f.apply(v))).collect();
                            assert_eq!(h.table(), direct);
                            assert!(extends_affinely(a, c, &direct));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn generators_reach_every_morphism() {
        // closure of the identity under precomposition by generators
        let n_upto = 3;
        let lim = Limits::default();
        for m in 0..=n_upto {
            let mut reached: HashSet<(usize, Vec<u32>)> = HashSet::new();
            let mut frontier = vec![CubeMorphism::identity(m)];
            reached.insert((m, CubeMorphism::identity(m).table()));
            while let Some(phi) = frontier.pop() {
                let k = phi.source_dim();
                for g in composition_generators(k, n_upto) {
                    let next = g.then(&phi).unwrap();
                    if reached.insert((next.source_dim(), next.table())) {
                        frontier.push(next);
                    }
                }
            }
            for n in 0..=n_upto {
                for psi in enumerate_cube_morphisms(n, m, &lim).unwrap() {
                    assert!(reached.contains(&(n, psi.table())), "{psi:?} not generated");
                }
            }
        }
    }

    #[test]
    fn parity_and_corners() {
        assert_eq!(h_parity(Vertex::from_bits(&[0, 0, 0])), 1);
        assert_eq!(h_parity(Vertex::from_bits(&[1, 1, 0])), 1);
        assert_eq!(h_parity(Vertex::from_bits(&[1, 1, 1])), -1);
        assert_eq!(corner_vertices(1).unwrap(), vec![Vertex::new(0, 1)]);
        let c2: Vec<String> = corner_vertices(2)
            .unwrap()
            .iter()
            .map(|v| v.to_string())
            .collect();
        assert_eq!(c2, vec!["00", "10", "01"]);
        assert_eq!(corner_vertices(3).unwrap().len(), 7);
        assert!(corner_vertices(0).is_err());
    }

    #[test]
    fn face_counts() {
        assert_eq!(faces_of_codim(3, 1).len(), 6);
        assert_eq!(faces_of_codim(3, 2).len(), 12);
        assert_eq!(faces_of_codim(2, 2).len(), 4);
        for f in faces_of_codim(4, 2) {
            assert_eq!(f.dim(), 2);
            assert_eq!(f.vertices().len(), 4);
        }
    }
}
