//! Exhaustive axiom checks, gluing counts and morphism tests.

use serde::Serialize;

use super::walk::{walk_corners, walk_cubes};
use super::{cube_dim, dk_structure, Cubespace};
use crate::abelian::FinAbGroup;
use crate::cubes::{composition_generators, CubeMorphism};
use crate::error::{Error, Result};
use crate::limits::Limits;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimReport {
    pub n: usize,
    pub cubes: u64,
    /// Corners whose faces through the origin are cubes (none at `n = 0`).
    pub corners: u64,
    pub composition_ok: bool,
    pub gluing_ok: bool,
    pub min_completions: Option<u64>,
    pub max_completions: Option<u64>,
}

impl DimReport {
    pub fn unique_completion(&self) -> bool {
        self.n >= 1 && self.min_completions == Some(1) && self.max_completions == Some(1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub axiom: String,
    pub n: usize,
    pub map: Vec<usize>,
    pub morphism: Option<CubeMorphism>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub n_upto: usize,
    pub composition_ok: bool,
    pub ergodic_ok: bool,
    pub gluing_ok: bool,
    pub dims: Vec<DimReport>,
    /// Least `k` with unique completion at dimension `k + 1`, when all axioms hold.
    pub kstep: Option<usize>,
    pub counterexample: Option<Counterexample>,
    pub queries: u64,
}

impl AxiomReport {
    pub fn all_ok(&self) -> bool {
        self.composition_ok && self.ergodic_ok && self.gluing_ok
    }

    pub fn dim(&self, n: usize) -> Option<&DimReport> {
        self.dims.iter().find(|d| d.n == n)
    }
}

/// Check composition (through a generating set of cube morphisms between
/// dimensions `≤ n_upto`), ergodicity and gluing for every dimension up to
/// `n_upto`, and read off the step from completion counts.
pub fn check_axioms(space: &dyn Cubespace, n_upto: usize, limits: &Limits) -> Result<AxiomReport> {
    if n_upto > space.n_max() {
        return Err(Error::invalid(format!(
            "n_upto {n_upto} exceeds the oracle limit {}",
            space.n_max()
        )));
    }
    let mut counter = limits.counter("axiom check");
    let mut counterexample = None;
    let size = space.size();

    let mut ergodic_ok = true;
    'pairs: for x in 0..size {
        for y in 0..size {
            counter.tick()?;
            if !space.contains(&[x, y]) {
                ergodic_ok = false;
                counterexample = Some(Counterexample {
                    axiom: "ergodicity".into(),
                    n: 1,
                    map: vec![x, y],
                    morphism: None,
                });
                break 'pairs;
            }
        }
    }

    let mut dims = Vec::new();
    for n in 0..=n_upto {
        let gens: Vec<(CubeMorphism, Vec<u32>)> = composition_generators(n, n_upto)
            .into_iter()
            .map(|g| {
                let t = g.table();
                (g, t)
            })
            .collect();
        let mut report = DimReport {
            n,
            cubes: 0,
            corners: 0,
            composition_ok: true,
            gluing_ok: true,
            min_completions: None,
            max_completions: None,
        };
        let mut scratch = Vec::with_capacity(1 << (n + 1));
        let mut failure: Option<Counterexample> = None;
        let mut check_cube =
            |cube: &[usize], counter: &mut crate::limits::Counter| -> Result<bool> {
                for (g, table) in &gens {
                    scratch.clear();
                    scratch.extend(table.iter().map(|&v| cube[v as usize]));
                    counter.tick()?;
                    if !space.contains(&scratch) {
                        failure = Some(Counterexample {
                            axiom: "composition".into(),
                            n,
                            map: cube.to_vec(),
                            morphism: Some(g.clone()),
                        });
                        return Ok(false);
                    }
                }
                Ok(true)
            };
        if n == 0 {
            for x in 0..size {
                report.cubes += 1;
                if !check_cube(&[x], &mut counter)? {
                    report.composition_ok = false;
                    break;
                }
            }
        } else {
            let top = (1usize << n) - 1;
            let mut gluing_failure = None;
            // the walker borrows the counter, so cube checks get their own
            let mut inner = limits.counter("axiom check").at_dim(n);
            let mut walk_counter = limits.counter("axiom check").at_dim(n);
            walk_corners(space, n, &mut walk_counter, &mut |buf, completions| {
                report.corners += 1;
                let c = completions.len() as u64;
                report.min_completions = Some(report.min_completions.map_or(c, |m| m.min(c)));
                report.max_completions = Some(report.max_completions.map_or(c, |m| m.max(c)));
                if c == 0 {
                    report.gluing_ok = false;
                    if gluing_failure.is_none() {
                        gluing_failure = Some(buf[..top].to_vec());
                    }
                }
                for &x in completions {
                    buf[top] = x;
                    report.cubes += 1;
                    if report.composition_ok && !check_cube(buf, &mut inner)? {
                        report.composition_ok = false;
                    }
                }
                Ok(true)
            })?;
            counter.absorb(&walk_counter)?;
            counter.absorb(&inner)?;
            if let (None, Some(map)) = (&failure, gluing_failure) {
                failure = Some(Counterexample {
                    axiom: "gluing".into(),
                    n,
                    map,
                    morphism: None,
                });
            }
        }
        if counterexample.is_none() {
            counterexample = failure;
        }
        dims.push(report);
    }

    let composition_ok = dims.iter().all(|d| d.composition_ok);
    let gluing_ok = dims.iter().all(|d| d.gluing_ok);
    let kstep = if composition_ok && gluing_ok && ergodic_ok {
        dims.iter().find(|d| d.unique_completion()).map(|d| d.n - 1)
    } else {
        None
    };
    Ok(AxiomReport {
        n_upto,
        composition_ok,
        ergodic_ok,
        gluing_ok,
        dims,
        kstep,
        counterexample,
        queries: counter.used(),
    })
}

/// Number of values at `1^n` completing `corner` (values at all other
/// vertices, in bitmask order) to a cube.
pub fn completion_count(space: &dyn Cubespace, corner: &[usize]) -> Result<usize> {
    let full = corner.len() + 1;
    let n = cube_dim(&vec![0; full])
        .filter(|&n| n >= 1)
        .ok_or_else(|| Error::InvalidCorner(format!("corner has {} vertices", corner.len())))?;
    if n > space.n_max() {
        return Err(Error::invalid(format!(
            "dimension {n} exceeds the oracle limit"
        )));
    }
    if corner.iter().any(|&x| x >= space.size()) {
        return Err(Error::InvalidCorner(
            "corner value outside the ground set".into(),
        ));
    }
    let top = full - 1;
    let mut buf = corner.to_vec();
    buf.push(0);
    for j in 0..n {
        if !space.lower_face_ok(&buf, top ^ (1 << j)) {
            return Err(Error::InvalidCorner(format!(
                "face x_{j} = 0 is not a cube"
            )));
        }
    }
    Ok((0..space.size())
        .filter(|&x| {
            buf[top] = x;
            space.contains(&buf)
        })
        .count())
}

/// Whether `f` sends every cube of `source` of dimension `≤ n_upto` to a cube
/// of `target`.
pub fn is_morphism(
    f: &[usize],
    source: &dyn Cubespace,
    target: &dyn Cubespace,
    n_upto: usize,
    limits: &Limits,
) -> Result<bool> {
    let dims: Vec<usize> = (1..=n_upto).collect();
    Ok(morphism_survivors(&[f.to_vec()], source, target, &dims, limits)?[0])
}

/// For each candidate map, whether it sends every cube of `source` in the
/// listed dimensions to a cube of `target`. Each cube is enumerated once.
pub fn morphism_survivors(
    candidates: &[Vec<usize>],
    source: &dyn Cubespace,
    target: &dyn Cubespace,
    dims: &[usize],
    limits: &Limits,
) -> Result<Vec<bool>> {
    for f in candidates {
        if f.len() != source.size() || f.iter().any(|&y| y >= target.size()) {
            return Err(Error::invalid(
                "map does not go from the source ground to the target ground",
            ));
        }
    }
    if let Some(&n) = dims
        .iter()
        .find(|&&n| n > source.n_max() || n > target.n_max())
    {
        return Err(Error::invalid(format!(
            "dimension {n} exceeds an oracle limit"
        )));
    }
    let mut alive: Vec<usize> = (0..candidates.len()).collect();
    let mut counter = limits.counter("morphism check");
    let mut image = Vec::new();
    for &n in dims {
        if alive.is_empty() {
            break;
        }
        let mut counter_n = limits.counter("morphism check").at_dim(n);
        walk_cubes(source, n, &mut counter_n, &mut |cube| {
            alive.retain(|&i| {
                let f = &candidates[i];
                image.clear();
                image.extend(cube.iter().map(|&x| f[x]));
                target.contains(&image)
            });
            Ok(!alive.is_empty())
        })?;
        counter.absorb(&counter_n)?;
    }
    let mut out = vec![false; candidates.len()];
    for i in alive {
        out[i] = true;
    }
    Ok(out)
}

/// Whether two spaces have the same cubes up to dimension `n_upto` after
/// relabeling the ground of `a` by the bijection `relabel`.
pub fn same_cubes(
    a: &dyn Cubespace,
    b: &dyn Cubespace,
    relabel: Option<&[usize]>,
    n_upto: usize,
    limits: &Limits,
) -> Result<bool> {
    if a.size() != b.size() {
        return Ok(false);
    }
    let ident: Vec<usize> = (0..a.size()).collect();
    let r = relabel.unwrap_or(&ident);
    let mut seen = vec![false; b.size()];
    for &y in r {
        if y >= b.size() || std::mem::replace(&mut seen[y], true) {
            return Err(Error::invalid("relabeling is not a bijection"));
        }
    }
    for n in 1..=n_upto {
        let mut count_a = 0u64;
        let mut inside = true;
        let mut image = Vec::new();
        let mut counter = limits.counter("cube comparison").at_dim(n);
        walk_cubes(a, n, &mut counter, &mut |cube| {
            count_a += 1;
            image.clear();
            image.extend(cube.iter().map(|&x| r[x]));
            inside = b.contains(&image);
            Ok(inside)
        })?;
        if !inside {
            return Ok(false);
        }
        let mut count_b = 0u64;
        let mut counter = limits.counter("cube comparison").at_dim(n);
        walk_cubes(b, n, &mut counter, &mut |_| {
            count_b += 1;
            Ok(true)
        })?;
        if count_a != count_b {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DerivmorphReport {
    pub source: String,
    pub target: String,
    pub i: usize,
    pub j: usize,
    pub maps_checked: u64,
    /// Value tables of the morphisms `D_i(A) → D_j(B)`.
    pub morphisms: Vec<Vec<usize>>,
    /// Morphisms violating the expected conclusion.
    pub exceptions: Vec<Vec<usize>>,
    pub holds: bool,
}

/// Enumerate all morphisms `D_i(A) → D_j(B)` and confirm that they are
/// constant when `i > j`, and morphisms `D_1(A) → D_{j-i+1}(B)` otherwise.
///
/// Maps into `D_j(B)` are tested on `(j+1)`-cubes only: every lower
/// dimensional map is a cube there, and higher ones are cubes as soon as all
/// their `(j+1)`-dimensional morphic images are.
pub fn check_derivmorph(
    a: &FinAbGroup,
    b: &FinAbGroup,
    i: usize,
    j: usize,
    limits: &Limits,
) -> Result<DerivmorphReport> {
    if i < 1 || j < 1 {
        return Err(Error::invalid("degrees must be at least 1"));
    }
    let (na, nb) = (a.order() as usize, b.order() as usize);
    let total = (nb as u128).checked_pow(na as u32).unwrap_or(u128::MAX);
    if total > limits.candidates as u128 {
        return Err(Error::ResourceLimit {
            what: "maps between the groups".into(),
            budget: limits.candidates,
            dim: None,
        });
    }
    let candidates: Vec<Vec<usize>> = (0..total as u64)
        .map(|mut code| {
            (0..na)
                .map(|_| {
                    let y = (code % nb as u64) as usize;
                    code /= nb as u64;
                    y
                })
                .collect()
        })
        .collect();
    let src = dk_structure(a, i)?;
    let dst = dk_structure(b, j)?;
    let keep = morphism_survivors(&candidates, src.as_ref(), dst.as_ref(), &[j + 1], limits)?;
    let morphisms: Vec<Vec<usize>> = candidates
        .into_iter()
        .zip(keep)
        .filter_map(|(f, k)| k.then_some(f))
        .collect();
    let exceptions = if i > j {
        morphisms
            .iter()
            .filter(|f| f.iter().any(|&y| y != f[0]))
            .cloned()
            .collect()
    } else {
        let d = j - i + 1;
        let src1 = dk_structure(a, 1)?;
        let dst1 = dk_structure(b, d)?;
        let ok = morphism_survivors(&morphisms, src1.as_ref(), dst1.as_ref(), &[d + 1], limits)?;
        morphisms
            .iter()
            .zip(ok)
            .filter(|&(_f, k)| !k)
            .map(|(f, _k)| f.clone())
            .collect::<Vec<_>>()
    };
    Ok(DerivmorphReport {
        source: format!("D_{i}({a:?})"),
        target: format!("D_{j}({b:?})"),
        i,
        j,
        maps_checked: total as u64,
        holds: exceptions.is_empty(),
        morphisms,
        exceptions,
    })
}
