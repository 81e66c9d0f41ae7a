//! The relations `~_i`, factors `F_i(N)`, structure groups and the bundle
//! conditions of a finite nilspace.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::abelian::{identify_abelian, FinAbGroup};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::space::{count_cubes, dk_structure, for_each_cube, is_morphism, Cubespace, Space};

/// A partition of `0..n`; classes are listed by smallest element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Partition {
    pub class_of: Vec<usize>,
    pub classes: Vec<Vec<usize>>,
}

impl Partition {
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut ids: HashMap<usize, usize> = HashMap::new();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        let class_of = labels
            .iter()
            .enumerate()
            .map(|(x, l)| {
                let id = *ids.entry(*l).or_insert_with(|| {
                    classes.push(Vec::new());
                    classes.len() - 1
                });
                classes[id].push(x);
                id
            })
            .collect();
        Partition { class_of, classes }
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn is_discrete(&self) -> bool {
        self.classes.len() == self.class_of.len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }
}

/// The one-corner cube of dimension `i + 1`: `x` at the origin, `y` elsewhere.
fn one_corner(x: usize, y: usize, i: usize) -> Vec<usize> {
    let mut c = vec![y; 1 << (i + 1)];
    c[0] = x;
    c
}

/// Classes of `x ~_i y`, after checking that the relation is an equivalence.
pub fn sim_classes(space: &dyn Cubespace, i: usize) -> Result<Partition> {
    if i + 1 > space.n_max() {
        return Err(Error::invalid(format!(
            "~_{i} needs cubes of dimension {}",
            i + 1
        )));
    }
    let n = space.size();
    let rel: Vec<Vec<bool>> = (0..n)
        .map(|x| {
            (0..n)
                .map(|y| space.contains(&one_corner(x, y, i)))
                .collect()
        })
        .collect();
    for x in 0..n {
        if !rel[x][x] {
            return Err(Error::structural(
                format!("~_{i} is not reflexive"),
                vec![x],
            ));
        }
        for y in 0..n {
            if rel[x][y] != rel[y][x] {
                return Err(Error::structural(
                    format!("~_{i} is not symmetric"),
                    vec![x, y],
                ));
            }
            if !rel[x][y] {
                continue;
            }
            if let Some(z) = (0..n).find(|&z| rel[y][z] && !rel[x][z]) {
                return Err(Error::structural(
                    format!("~_{i} is not transitive"),
                    vec![x, y, z],
                ));
            }
        }
    }
    let labels: Vec<usize> = (0..n)
        .map(|x| rel[x].iter().position(|&r| r).unwrap())
        .collect();
    Ok(Partition::from_labels(&labels))
}

/// Search for a cube `c'` of `space` with `c'(v) ∈ fibers[cube[v]]` for every vertex.
pub fn find_lift(
    space: &dyn Cubespace,
    fibers: &[Vec<usize>],
    cube: &[usize],
) -> Option<Vec<usize>> {
    let mut buf = vec![0usize; cube.len()];
    let prune = space.faces_closed();
    fn go(
        space: &dyn Cubespace,
        fibers: &[Vec<usize>],
        cube: &[usize],
        buf: &mut Vec<usize>,
        v: usize,
        prune: bool,
    ) -> bool {
        if v == cube.len() {
            return prune || space.contains(buf);
        }
        for &x in &fibers[cube[v]] {
            buf[v] = x;
            if prune && v != 0 && !space.lower_face_ok(buf, v) {
                continue;
            }
            if go(space, fibers, cube, buf, v + 1, prune) {
                return true;
            }
        }
        false
    }
    go(space, fibers, cube, &mut buf, 0, prune).then_some(buf)
}

/// A quotient of a cubespace by a partition: a map into the classes is a cube
/// when some choice of representatives is a cube.
pub struct FactorSpace {
    parent: Space,
    partition: Partition,
    memo: Mutex<HashMap<Vec<usize>, bool>>,
}

impl FactorSpace {
    pub fn new(parent: Space, partition: Partition) -> Self {
        FactorSpace {
            parent,
            partition,
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn parent(&self) -> &Space {
        &self.parent
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    pub fn lift(&self, cube: &[usize]) -> Option<Vec<usize>> {
        find_lift(self.parent.as_ref(), &self.partition.classes, cube)
    }
}

impl fmt::Debug for FactorSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Factor({:?} / {} classes)",
            self.parent,
            self.partition.len()
        )
    }
}

impl Cubespace for FactorSpace {
    fn size(&self) -> usize {
        self.partition.len()
    }

    fn n_max(&self) -> usize {
        self.parent.n_max()
    }

    fn contains(&self, cube: &[usize]) -> bool {
        if cube.len() == 1 {
            return true;
        }
        if let Some(&known) = self.memo.lock().unwrap().get(cube) {
            return known;
        }
        let ok = self.lift(cube).is_some();
        self.memo.lock().unwrap().insert(cube.to_vec(), ok);
        ok
    }

    fn faces_closed(&self) -> bool {
        self.parent.faces_closed()
    }

    fn step_hint(&self) -> Option<usize> {
        self.parent.step_hint()
    }

    fn label(&self, x: usize) -> String {
        let members: Vec<String> = self.partition.classes[x]
            .iter()
            .map(|&p| self.parent.label(p))
            .collect();
        format!("[{}]", members.join(" "))
    }
}

/// `F_i(N)` and the projection `N → F_i(N)`, verified as a morphism on cubes
/// of dimension `≤ n_check`.
pub fn factor_nilspace(
    space: Space,
    i: usize,
    n_check: usize,
    limits: &Limits,
) -> Result<(Space, Vec<usize>)> {
    let partition = sim_classes(space.as_ref(), i)?;
    let proj = partition.class_of.clone();
    let factor: Space = Arc::new(FactorSpace::new(space.clone(), partition));
    if !is_morphism(&proj, space.as_ref(), factor.as_ref(), n_check, limits)? {
        return Err(Error::structural(
            "projection to the factor is not a morphism",
            vec![],
        ));
    }
    Ok((factor, proj))
}

/// Least `k` with `~_k` discrete, searched while `k + 1 ≤ n_max`.
pub fn step_of(space: &dyn Cubespace) -> Result<usize> {
    for k in 0..space.n_max() {
        if sim_classes(space, k)?.is_discrete() {
            return Ok(k);
        }
    }
    Err(Error::Unsupported(
        "no discrete ~_k within the oracle's dimensions".into(),
    ))
}

/// The `i`-th factor together with its fibration over the `(i-1)`-th.
struct Level {
    space: Space,
    /// `fiber_of[x]` for points `x` of `space`: the `~_{i-1}` class below.
    fiber_of: Vec<usize>,
    fibers: Vec<Vec<usize>>,
}

fn level(space: &Space, i: usize) -> Result<Level> {
    let upper = sim_classes(space.as_ref(), i)?;
    let lower = sim_classes(space.as_ref(), i - 1)?;
    let x_i: Space = if upper.is_discrete() {
        space.clone()
    } else {
        Arc::new(FactorSpace::new(space.clone(), upper.clone()))
    };
    let labels: Vec<usize> = upper.classes.iter().map(|c| lower.class_of[c[0]]).collect();
    let fibration = Partition::from_labels(&labels);
    Ok(Level {
        space: x_i,
        fiber_of: fibration.class_of,
        fibers: fibration.classes,
    })
}

/// The `i`-th structure group with its action on the `i`-th factor.
#[derive(Debug, Clone)]
pub struct StructureGroup {
    pub i: usize,
    pub group: FinAbGroup,
    /// The `i`-th factor `X_i`.
    pub factor: Space,
    /// Fibers of `X_i → X_{i-1}`, as lists of points of `X_i`.
    pub fibers: Vec<Vec<usize>>,
    pub fiber_of: Vec<usize>,
    /// `action[a][x] = x + a` for group element index `a`.
    pub action: Vec<Vec<usize>>,
}

impl StructureGroup {
    /// `x - y` for points in one fiber, as a group element index.
    pub fn difference(&self, x: usize, y: usize) -> Option<usize> {
        (0..self.action.len()).find(|&a| self.action[a][y] == x)
    }
}

/// Recover `A_i` from `N` by translating along faces of codimension `i` of
/// the `i`-th factor.
pub fn structure_group(space: &Space, i: usize) -> Result<StructureGroup> {
    if i < 1 {
        return Err(Error::invalid("structure groups are indexed from 1"));
    }
    if i + 1 > space.n_max() {
        return Err(Error::invalid(format!(
            "dimension {} exceeds the oracle limit",
            i + 1
        )));
    }
    let Level {
        space: x_i,
        fiber_of,
        fibers,
    } = level(space, i)?;
    let (group, action) = regular_action(x_i.as_ref(), &fiber_of, &fibers, i, &format!("A_{i}"))?;
    Ok(StructureGroup {
        i,
        group,
        factor: x_i,
        fibers,
        fiber_of,
        action,
    })
}

/// The free action on the fibers of `space` determined by its
/// `(height+1)`-cubes, as `(group, action[a][x] = x + a)`.
///
/// Point `0` is the base point `p`. For `q` in its fiber, `y + (q - p)` is
/// the unique `z` in the fiber of `y` such that the `(height+1)`-cube equal to
/// `p` / `y` on the halves `x_{height+1} = 0` / `1` stays a cube after moving
/// the edge `{x_1 = … = x_height = 1}` from `(p, y)` to `(q, z)`.
pub(crate) fn regular_action(
    space: &dyn Cubespace,
    fiber_of: &[usize],
    fibers: &[Vec<usize>],
    height: usize,
    what: &str,
) -> Result<(FinAbGroup, Vec<Vec<usize>>)> {
    let p = 0usize;
    let base = fibers[fiber_of[p]].clone();
    let size = space.size();
    let dim = height + 1;
    let half = 1usize << height;
    let edge_low = half - 1;
    let edge_high = (1usize << dim) - 1;

    let mut action = Vec::with_capacity(base.len());
    for &q in &base {
        let mut perm = vec![usize::MAX; size];
        for y in 0..size {
            let mut cube: Vec<usize> = (0..1usize << dim)
                .map(|v| if v < half { p } else { y })
                .collect();
            cube[edge_low] = q;
            let mut found = None;
            for &z in &fibers[fiber_of[y]] {
                cube[edge_high] = z;
                if space.contains(&cube) {
                    if found.is_some() {
                        return Err(Error::structural(
                            format!("translation in {what} is not unique"),
                            vec![q, y, z],
                        ));
                    }
                    found = Some(z);
                }
            }
            perm[y] = found.ok_or_else(|| {
                Error::structural(format!("no translate found for {what}"), vec![q, y])
            })?;
        }
        action.push(perm);
    }

    // the action is free, transitive on each fiber, abelian and closed
    let index_in_base: HashMap<usize, usize> =
        base.iter().enumerate().map(|(t, &q)| (q, t)).collect();
    for (t, perm) in action.iter().enumerate() {
        let mut seen = vec![false; size];
        for (y, &z) in perm.iter().enumerate() {
            if std::mem::replace(&mut seen[z], true) {
                return Err(Error::structural(
                    format!("{what} translate is not a bijection"),
                    vec![base[t], y],
                ));
            }
            if t != 0 && z == y && base[t] != p {
                return Err(Error::structural(
                    format!("{what} does not act freely"),
                    vec![base[t], y],
                ));
            }
        }
    }
    if action[index_in_base[&p]]
        .iter()
        .enumerate()
        .any(|(y, &z)| y != z)
    {
        return Err(Error::structural(
            format!("{what} neutral element moves points"),
            vec![p],
        ));
    }
    for fiber in fibers {
        if fiber.len() != base.len() {
            return Err(Error::structural(
                format!("fibers of {what} have different sizes"),
                fiber.clone(),
            ));
        }
        let orbit: std::collections::BTreeSet<usize> =
            action.iter().map(|perm| perm[fiber[0]]).collect();
        if orbit.len() != fiber.len() {
            return Err(Error::structural(
                format!("{what} is not transitive on a fiber"),
                fiber.clone(),
            ));
        }
    }
    let n = base.len();
    let mut table = vec![vec![0usize; n]; n];
    for a in 0..n {
        for b in 0..n {
            let c_point = action[a][action[b][p]];
            let c = *index_in_base.get(&c_point).ok_or_else(|| {
                Error::structural(format!("{what} leaves the base fiber"), vec![c_point])
            })?;
            for y in 0..size {
                if action[a][action[b][y]] != action[c][y] {
                    return Err(Error::structural(
                        format!("{what} translates do not compose"),
                        vec![a, b, y],
                    ));
                }
            }
            table[a][b] = c;
        }
    }
    let zero = index_in_base[&p];
    let (group, iso) = identify_abelian(n, zero, &|a, b| table[a][b])?;
    let action = iso.iter().map(|&t| action[t].clone()).collect();
    Ok((group, action))
}

#[derive(Debug, Clone, Serialize)]
pub struct LevelReport {
    pub i: usize,
    pub factor_size: usize,
    pub fiber_sizes: Vec<usize>,
    pub group: Vec<u64>,
    /// Cubes of `X_{i-1}` checked for a lift, per dimension.
    pub lifted: Vec<u64>,
    /// Fibers of `C^n(X_i) → C^n(X_{i-1})` checked against `D_i(A_i)`, per dimension.
    pub fibers_checked: Vec<u64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BundleDecomposition {
    pub k: usize,
    pub n_upto: usize,
    /// Invariant factors of `A_1, …, A_k`.
    pub groups: Vec<Vec<u64>>,
    pub levels: Vec<LevelReport>,
    #[serde(skip)]
    pub structure: Vec<StructureGroup>,
}

/// Build the factors and structure groups of `N` and check the bundle
/// conditions: every cube of `X_{i-1}` lifts to `X_i`, and each fiber of the
/// projection on `n`-cubes is a coset of `C^n(D_i(A_i))`, for `n ≤ n_upto`.
pub fn verify_degree_bundle(
    space: &Space,
    n_upto: usize,
    limits: &Limits,
) -> Result<BundleDecomposition> {
    let k = step_of(space.as_ref())?;
    let mut structure = Vec::new();
    let mut levels = Vec::new();
    let mut below: Option<Space> = None;
    for i in 1..=k {
        let sg = structure_group(space, i)?;
        let x_i = sg.factor.clone();
        let x_prev = match &below {
            Some(s) => s.clone(),
            None => Arc::new(crate::space::OracleSpace::full(1)) as Space,
        };
        if x_prev.size() != sg.fibers.len() {
            return Err(Error::structural(
                format!("fibers of X_{i} do not match the points of X_{}", i - 1),
                vec![x_prev.size(), sg.fibers.len()],
            ));
        }
        let a_i = dk_structure(&sg.group, i)?;
        let mut lifted = Vec::new();
        let mut fibers_checked = Vec::new();
        for n in 1..=n_upto {
            let mut count = 0u64;
            let mut missing = None;
            for_each_cube(x_prev.as_ref(), n, limits, &mut |f| {
                count += 1;
                if find_lift(x_i.as_ref(), &sg.fibers, f).is_none() {
                    missing = Some(f.to_vec());
                    return Ok(false);
                }
                Ok(true)
            })?;
            if let Some(f) = missing {
                return Err(Error::structural(
                    format!("a cube of X_{} does not lift to X_{i}", i - 1),
                    f,
                ));
            }
            lifted.push(count);

            let fibers = check_coset_fibers(
                x_i.as_ref(),
                &sg.fiber_of,
                &sg.action,
                a_i.as_ref(),
                n,
                limits,
            )?;
            fibers_checked.push(fibers);
        }
        levels.push(LevelReport {
            i,
            factor_size: x_i.size(),
            fiber_sizes: sg.fibers.iter().map(Vec::len).collect(),
            group: sg.group.invariant_factors().to_vec(),
            lifted,
            fibers_checked,
        });
        below = Some(x_i);
        structure.push(sg);
    }
    Ok(BundleDecomposition {
        k,
        n_upto,
        groups: structure
            .iter()
            .map(|s| s.group.invariant_factors().to_vec())
            .collect(),
        levels,
        structure,
    })
}

/// Check that each fiber of `C^n(M) → C^n(N)` (projection given by
/// `fiber_of`) is `{f + g : g ∈ C^n(D)}` for the action `action` of the group
/// carrying `shifts` (a `D_k(A)`). Returns the number of fibers.
pub(crate) fn check_coset_fibers(
    total: &dyn Cubespace,
    fiber_of: &[usize],
    action: &[Vec<usize>],
    shifts: &dyn Cubespace,
    n: usize,
    limits: &Limits,
) -> Result<u64> {
    let expected = count_cubes(shifts, n, limits)?;
    let mut groups: HashMap<Vec<usize>, (Vec<usize>, u64)> = HashMap::new();
    let mut key = vec![0usize; 1 << n];
    for_each_cube(total, n, limits, &mut |f| {
        for (k, &x) in key.iter_mut().zip(f) {
            *k = fiber_of[x];
        }
        match groups.get_mut(key.as_slice()) {
            Some(entry) => entry.1 += 1,
            None => {
                groups.insert(key.clone(), (f.to_vec(), 1));
            }
        }
        Ok(true)
    })?;
    let mut reps: Vec<&(Vec<usize>, u64)> = groups.values().collect();
    reps.sort();
    if let Some((rep, cnt)) = reps.iter().find(|(_, cnt)| *cnt != expected) {
        return Err(Error::structural(
            format!("a fiber of {n}-cubes has {cnt} cubes, expected {expected}"),
            rep.clone(),
        ));
    }
    let mut moved = vec![0usize; 1 << n];
    let mut failure = None;
    for_each_cube(shifts, n, limits, &mut |g| {
        for (rep, _) in &reps {
            for (m, (&x, &a)) in moved.iter_mut().zip(rep.iter().zip(g)) {
                *m = action[a][x];
            }
            if !total.contains(&moved) {
                failure = Some(moved.clone());
                return Ok(false);
            }
        }
        Ok(true)
    })?;
    if let Some(moved) = failure {
        return Err(Error::structural(
            format!("shifting a {n}-cube by a group cube leaves the cube set"),
            moved,
        ));
    }
    Ok(groups.len() as u64)
}

/// Whether the morphism `phi` maps every `~_i` class of `N` onto a `~_i`
/// class of `M`, for `0 ≤ i ≤ k`. Including `i = 0` makes `phi` surjective.
pub fn is_factor_map(
    phi: &[usize],
    n: &dyn Cubespace,
    m: &dyn Cubespace,
    n_check: usize,
    limits: &Limits,
) -> Result<bool> {
    if !is_morphism(phi, n, m, n_check, limits)? {
        return Err(Error::invalid("map is not a morphism"));
    }
    let k = step_of(n)?.max(step_of(m)?);
    for i in 0..=k {
        let pn = sim_classes(n, i)?;
        let pm = sim_classes(m, i)?;
        for class in &pn.classes {
            let mut image: Vec<usize> = class.iter().map(|&x| phi[x]).collect();
            image.sort_unstable();
            image.dedup();
            if image != pm.classes[pm.class_of[image[0]]] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
