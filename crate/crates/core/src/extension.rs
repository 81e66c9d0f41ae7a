//! Degree-k extensions, split sections, translations and arrow spaces.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use serde::Serialize;

use crate::abelian::{invariant_isomorphism, FinAbGroup, GroupExtension};
use crate::bundle::{
    check_coset_fibers, find_lift, regular_action, sim_classes, step_of, structure_group,
    FactorSpace, Partition,
};
use crate::cubes::{faces_of_codim, Face};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::search::{cubes_by_max, Backtrack};
use crate::space::{
    dk_structure, enumerate_cubes, for_each_cube, Cubespace, GroupSpace, InducedSpace,
    ProductSpace, Space,
};

/// The `i`-th arrow space over `N`: a map into `N × N` is a cube when the
/// assembled map `(f_1, f_2)_i` on `{0,1}^{n+i}` is a cube of `N`. The pair
/// `(x, y)` has ground index `x · |N| + y`.
#[derive(Debug, Clone)]
pub struct ArrowSpace {
    base: Space,
    i: usize,
}

impl ArrowSpace {
    pub fn new(base: Space, i: usize) -> Self {
        ArrowSpace { base, i }
    }

    pub fn pair(&self, x: usize, y: usize) -> usize {
        x * self.base.size() + y
    }

    pub fn split(&self, p: usize) -> (usize, usize) {
        (p / self.base.size(), p % self.base.size())
    }

    /// `(f_1, f_2)_i`: `f_1(v)` at `(v, w)` for `w ≠ 1^i`, `f_2(v)` at `(v, 1^i)`.
    pub fn assemble(&self, f1: &[usize], f2: &[usize]) -> Vec<usize> {
        let len = f1.len();
        let top = (1usize << self.i) - 1;
        (0..len << self.i)
            .map(|u| {
                if u / len == top {
                    f2[u % len]
                } else {
                    f1[u % len]
                }
            })
            .collect()
    }
}

pub fn arrow_space(base: Space, i: usize) -> ArrowSpace {
    ArrowSpace::new(base, i)
}

impl Cubespace for ArrowSpace {
    fn size(&self) -> usize {
        self.base.size() * self.base.size()
    }

    fn n_max(&self) -> usize {
        self.base.n_max().saturating_sub(self.i)
    }

    fn contains(&self, cube: &[usize]) -> bool {
        let (f1, f2): (Vec<usize>, Vec<usize>) = cube.iter().map(|&p| self.split(p)).unzip();
        self.base.contains(&self.assemble(&f1, &f2))
    }

    fn faces_closed(&self) -> bool {
        self.base.faces_closed()
    }

    fn label(&self, p: usize) -> String {
        let (x, y) = self.split(p);
        format!("{}→{}", self.base.label(x), self.base.label(y))
    }
}

/// A degree-`k` extension `M → N` by `A`, certified on cubes of dimension
/// `≤ n_checked`.
#[derive(Debug, Clone)]
pub struct Extension {
    pub total: Space,
    pub base: Space,
    pub group: FinAbGroup,
    pub proj: Vec<usize>,
    pub degree: usize,
    /// `action[a][x] = x + a` for element index `a` of `group`.
    pub action: Vec<Vec<usize>>,
    /// Points of `total` over each base point, in increasing order.
    pub fibers: Vec<Vec<usize>>,
    pub n_checked: usize,
}

fn fibers_of(proj: &[usize], base_size: usize, group_order: usize) -> Result<Vec<Vec<usize>>> {
    let mut fibers = vec![Vec::new(); base_size];
    for (x, &u) in proj.iter().enumerate() {
        if u >= base_size {
            return Err(Error::invalid("projection lands outside the base"));
        }
        fibers[u].push(x);
    }
    if let Some(u) = fibers.iter().position(|f| f.len() != group_order) {
        return Err(Error::invalid(format!(
            "fiber over base point {u} has {} points, expected |A| = {group_order}",
            fibers[u].len()
        )));
    }
    Ok(fibers)
}

/// Certify `M` as a degree-`k` extension of `N` by `A` through `proj`, for
/// cubes of dimension `1..=n_upto`. The action of `A` on fibers is recovered
/// from the `(k+1)`-cubes of `M` and matched with `A` along invariant
/// generators.
///
/// The lifting condition asks for a lift `c' ∈ C^n(M)` of each `c ∈ C^n(N)`.
pub fn verify_extension(
    total: Space,
    base: Space,
    group: &FinAbGroup,
    proj: &[usize],
    k: usize,
    n_upto: usize,
    limits: &Limits,
) -> Result<Extension> {
    if proj.len() != total.size() {
        return Err(Error::invalid(
            "projection table does not match the total space",
        ));
    }
    if k < 1 {
        return Err(Error::invalid("extension degree must be at least 1"));
    }
    let fibers = fibers_of(proj, base.size(), group.order() as usize)?;
    let (found, act) = regular_action(total.as_ref(), proj, &fibers, k, "the fiber group")?;
    let iso = invariant_isomorphism(group, &found).ok_or_else(|| {
        Error::structural(
            format!("fiber translations form {found:?}, not {group:?}"),
            found
                .invariant_factors()
                .iter()
                .map(|&d| d as usize)
                .collect(),
        )
    })?;
    let action = iso.iter().map(|&t| act[t].clone()).collect();
    verify_extension_with_action(total, base, group, proj, action, k, n_upto, limits)
}

/// As [`verify_extension`], with the action of `A` given explicitly.
#[allow(clippy::too_many_arguments)]
pub fn verify_extension_with_action(
    total: Space,
    base: Space,
    group: &FinAbGroup,
    proj: &[usize],
    action: Vec<Vec<usize>>,
    k: usize,
    n_upto: usize,
    limits: &Limits,
) -> Result<Extension> {
    let order = group.order() as usize;
    let fibers = fibers_of(proj, base.size(), order)?;
    if action.len() != order || action.iter().any(|a| a.len() != total.size()) {
        return Err(Error::invalid("action table has the wrong shape"));
    }
    let zero = group.index_of(&group.zero());
    for a in 0..order {
        let ea = group.element_at(a);
        for x in 0..total.size() {
            let y = action[a][x];
            if proj[y] != proj[x] {
                return Err(Error::structural("action leaves a fiber", vec![a, x]));
            }
            if a != zero && y == x {
                return Err(Error::structural("action is not free", vec![a, x]));
            }
            if a == zero && y != x {
                return Err(Error::structural("neutral element moves a point", vec![x]));
            }
        }
        for b in 0..order {
            let c = group.index_of(&group.add(&ea, &group.element_at(b)));
            if (0..total.size()).any(|x| action[a][action[b][x]] != action[c][x]) {
                return Err(Error::structural(
                    "action is not a group action",
                    vec![a, b],
                ));
            }
        }
    }
    let shifts = dk_structure(group, k)?;
    for n in 1..=n_upto {
        let mut missing = None;
        for_each_cube(base.as_ref(), n, limits, &mut |c| {
            if find_lift(total.as_ref(), &fibers, c).is_none() {
                missing = Some(c.to_vec());
                return Ok(false);
            }
            Ok(true)
        })?;
        if let Some(c) = missing {
            return Err(Error::structural(format!("base {n}-cube has no lift"), c));
        }
        check_coset_fibers(total.as_ref(), proj, &action, shifts.as_ref(), n, limits)?;
    }
    Ok(Extension {
        total,
        base,
        group: group.clone(),
        proj: proj.to_vec(),
        degree: k,
        action,
        fibers,
        n_checked: n_upto,
    })
}

impl Extension {
    /// `N × D_k(A)` over `N`. Its cube sets are products, so every condition
    /// holds by construction and nothing is enumerated; `n_upto` is the
    /// dimension later checks such as [`Extension::is_section`] use.
    pub fn trivial(
        base: Space,
        group: &FinAbGroup,
        k: usize,
        n_upto: usize,
        limits: &Limits,
    ) -> Result<Self> {
        let fiber = dk_structure(group, k)?;
        let prod = ProductSpace::new(base.clone(), fiber);
        let na = group.order() as usize;
        limits.check_ground(prod.size() as u128, "trivial extension")?;
        let proj: Vec<usize> = (0..prod.size()).map(|x| prod.split(x).0).collect();
        let action = (0..na)
            .map(|a| {
                let ea = group.element_at(a);
                (0..prod.size())
                    .map(|x| {
                        let (u, b) = prod.split(x);
                        prod.pair(u, group.index_of(&group.add(&group.element_at(b), &ea)))
                    })
                    .collect()
            })
            .collect();
        let fibers = fibers_of(&proj, base.size(), na)?;
        Ok(Extension {
            total: Arc::new(prod),
            base,
            group: group.clone(),
            proj,
            degree: k,
            action,
            fibers,
            n_checked: n_upto,
        })
    }

    /// `D_k(B)` over `D_k(A)` for a group extension `0 → C → B → A → 0`, by `C`.
    pub fn of_groups(
        ext: &GroupExtension,
        k: usize,
        n_upto: usize,
        limits: &Limits,
    ) -> Result<Self> {
        let (b, a, c) = (ext.total(), ext.base(), ext.kernel());
        let proj: Vec<usize> = b.elements().map(|x| a.index_of(&ext.project(&x))).collect();
        let action = c
            .elements()
            .map(|e| {
                let shift = ext.kernel_embed().apply(&e);
                b.elements()
                    .map(|x| b.index_of(&b.add(&x, &shift)))
                    .collect()
            })
            .collect();
        verify_extension_with_action(
            dk_structure(b, k)?,
            dk_structure(a, k)?,
            c,
            &proj,
            action,
            k,
            n_upto,
            limits,
        )
    }

    /// Whether `m` is a section: `proj ∘ m = id` and `m` sends base cubes of
    /// dimension `≤ n_checked` to cubes.
    pub fn is_section(&self, m: &[usize], limits: &Limits) -> Result<bool> {
        if m.len() != self.base.size()
            || m.iter()
                .enumerate()
                .any(|(u, &x)| x >= self.proj.len() || self.proj[x] != u)
        {
            return Ok(false);
        }
        crate::space::is_morphism(
            m,
            self.base.as_ref(),
            self.total.as_ref(),
            self.n_checked,
            limits,
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SectionSearch {
    pub section: Option<Vec<usize>>,
    pub mode: String,
    /// `|A|^|N|` (saturating).
    pub candidates: u64,
    /// Candidates excluded before the answer was reached.
    pub rejected: u64,
    pub dims_checked: usize,
}

/// Exhaustive lexicographic search for a section: base points in index order,
/// fiber points in index order; the first verified section wins.
pub fn find_section(ext: &Extension, limits: &Limits) -> Result<SectionSearch> {
    let by_max = cubes_by_max(ext.base.as_ref(), 1, ext.n_checked, limits)?;
    let total = ext.total.clone();
    let accept = move |m: &[usize], c: &[usize]| {
        let image: Vec<usize> = c.iter().map(|&u| m[u]).collect();
        total.contains(&image)
    };
    let mut finish = |_: &[usize]| Ok(true);
    let mut bt = Backtrack {
        options: &ext.fibers,
        by_max: &by_max,
        accept: &accept,
        finish: &mut finish,
        counter: limits.counter("section search"),
        rejected: 0,
    };
    let candidates = bt.weight(0);
    let mut choice = vec![0; ext.fibers.len()];
    let found = bt.go(&mut choice, 0)?;
    Ok(SectionSearch {
        section: found.then_some(choice),
        mode: "exhaustive".into(),
        candidates,
        rejected: bt.rejected,
        dims_checked: ext.n_checked,
    })
}

/// Height of coordinate `j` of a group space built from degree structures.
fn coordinate_height(space: &GroupSpace, j: usize) -> usize {
    (1..=crate::limits::MAX_DIM)
        .take_while(|&w| space.divisor(j, w) == 1)
        .last()
        .unwrap_or(0)
}

/// Sections over a base carrying a product of degree structures, built from
/// lifts of the generator shifts applied in order of increasing height to a
/// fixed point over `0`. Falls back to [`find_section`] when the construction
/// does not produce a verified section.
pub fn find_section_structured(
    ext: &Extension,
    base: &GroupSpace,
    limits: &Limits,
) -> Result<SectionSearch> {
    if base.size() != ext.base.size() {
        return Err(Error::invalid(
            "structured base does not match the extension base",
        ));
    }
    if let Some(m) = structured_section(ext, base, limits)? {
        if ext.is_section(&m, limits)? {
            return Ok(SectionSearch {
                section: Some(m),
                mode: "structured".into(),
                candidates: (ext.group.order()).saturating_pow(ext.base.size() as u32),
                rejected: 0,
                dims_checked: ext.n_checked,
            });
        }
    }
    find_section(ext, limits)
}

fn structured_section(
    ext: &Extension,
    base: &GroupSpace,
    limits: &Limits,
) -> Result<Option<Vec<usize>>> {
    let g = base.group();
    let mut gens: Vec<(usize, usize)> = (0..g.num_coords())
        .filter(|&j| g.cyclic_orders()[j] > 1)
        .map(|j| (coordinate_height(base, j), j))
        .collect();
    if gens.iter().any(|&(h, _)| h == 0) {
        return Ok(None);
    }
    gens.sort();
    let mut lifts = Vec::new();
    for &(h, j) in &gens {
        let mut e = vec![0u64; g.num_coords()];
        e[j] = 1;
        let e = crate::abelian::Element(e);
        let alpha: Vec<usize> = g.elements().map(|x| g.index_of(&g.add(&x, &e))).collect();
        match lift_translation(ext, &alpha, h, limits)?.beta {
            Some(beta) => lifts.push((j, beta)),
            None => return Ok(None),
        }
    }
    let m0 = ext.fibers[g.index_of(&g.zero())][0];
    let section = (0..base.size())
        .map(|x| {
            let coords = base.coords_of(x);
            lifts
                .iter()
                .fold(m0, |y, (j, beta)| (0..coords[*j]).fold(y, |y, _| beta[y]))
        })
        .collect();
    Ok(Some(section))
}

fn check_bijection(alpha: &[usize], size: usize) -> Result<()> {
    if alpha.len() != size {
        return Err(Error::invalid("map does not match the ground set"));
    }
    let mut seen = vec![false; size];
    for &y in alpha {
        if y >= size || std::mem::replace(&mut seen[y], true) {
            return Err(Error::invalid("map is not a bijection"));
        }
    }
    Ok(())
}

/// `k + 1` for a `k`-step space: the largest cube dimension translation
/// checks use by default.
pub fn default_check_dim(space: &dyn Cubespace) -> Result<usize> {
    Ok(step_of(space)? + 1)
}

/// A cube and a face of codimension `i` on which applying `alpha` leaves the
/// cube set, searching dimensions `i..=check_dim`.
pub fn translation_violation(
    alpha: &[usize],
    space: &dyn Cubespace,
    i: usize,
    check_dim: usize,
    limits: &Limits,
) -> Result<Option<(Vec<usize>, Face)>> {
    if i < 1 {
        return Err(Error::invalid("translation height must be at least 1"));
    }
    check_bijection(alpha, space.size())?;
    for n in i..=check_dim {
        let faces: Vec<(Face, Vec<bool>)> = faces_of_codim(n, i)
            .into_iter()
            .map(|f| {
                let mask = (0..1u32 << n).map(|v| f.contains(v)).collect();
                (f, mask)
            })
            .collect();
        let mut bad = None;
        let mut moved = Vec::new();
        for_each_cube(space, n, limits, &mut |c| {
            for (face, mask) in &faces {
                moved.clear();
                moved.extend(
                    c.iter()
                        .zip(mask)
                        .map(|(&x, &m)| if m { alpha[x] } else { x }),
                );
                if !space.contains(&moved) {
                    bad = Some((c.to_vec(), face.clone()));
                    return Ok(false);
                }
            }
            Ok(true)
        })?;
        if bad.is_some() {
            return Ok(bad);
        }
    }
    Ok(None)
}

pub fn is_translation(
    alpha: &[usize],
    space: &dyn Cubespace,
    i: usize,
    check_dim: usize,
    limits: &Limits,
) -> Result<bool> {
    Ok(translation_violation(alpha, space, i, check_dim, limits)?.is_none())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransGroup {
    pub i: usize,
    pub check_dim: usize,
    pub elements: Vec<Vec<usize>>,
    pub bijections_checked: u64,
    /// Closed under composition and inverses.
    pub closed: bool,
    /// `|Trans_{i+1}|`, found by the same search.
    pub next_size: usize,
    /// `Trans_{i+1} ⊆ Trans_i`.
    pub nested: bool,
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn brute_translations(
    space: &dyn Cubespace,
    i: usize,
    check_dim: usize,
    cubes: &HashMap<usize, Vec<Vec<usize>>>,
) -> (Vec<Vec<usize>>, u64) {
    let faces: Vec<(usize, Vec<Vec<bool>>)> = (i..=check_dim)
        .map(|n| {
            let masks = faces_of_codim(n, i)
                .iter()
                .map(|f| (0..1u32 << n).map(|v| f.contains(v)).collect())
                .collect();
            (n, masks)
        })
        .collect();
    let mut perm: Vec<usize> = (0..space.size()).collect();
    let mut out = Vec::new();
    let mut checked = 0u64;
    let mut moved = Vec::new();
    loop {
        checked += 1;
        let ok = faces.iter().all(|(n, masks)| {
            cubes[n].iter().all(|c| {
                masks.iter().all(|mask| {
                    moved.clear();
                    moved.extend(
                        c.iter()
                            .zip(mask)
                            .map(|(&x, &m)| if m { perm[x] } else { x }),
                    );
                    space.contains(&moved)
                })
            })
        });
        if ok {
            out.push(perm.clone());
        }
        if !next_permutation(&mut perm) {
            return (out, checked);
        }
    }
}

/// All height-`i` translations by brute force over the bijections of the
/// ground set, with closure and `Trans_{i+1} ⊆ Trans_i` verified.
pub fn trans_group(
    space: &dyn Cubespace,
    i: usize,
    check_dim: usize,
    limits: &Limits,
) -> Result<TransGroup> {
    if i < 1 {
        return Err(Error::invalid("translation height must be at least 1"));
    }
    let n = space.size();
    let factorial = (1..=n as u64).try_fold(1u64, |acc, t| acc.checked_mul(t));
    if factorial.is_none_or(|f| f.saturating_mul(2) > limits.candidates) {
        return Err(Error::ResourceLimit {
            what: format!("bijections of a {n}-point ground set"),
            budget: limits.candidates,
            dim: None,
        });
    }
    let top = check_dim.max(i + 1);
    let mut cubes = HashMap::new();
    for d in i..=top {
        cubes.insert(d, enumerate_cubes(space, d, limits)?);
    }
    let (elements, checked) = brute_translations(space, i, check_dim.max(i), &cubes);
    let (next, checked_next) = brute_translations(space, i + 1, top, &cubes);
    let set: BTreeSet<&Vec<usize>> = elements.iter().collect();
    let closed = elements.iter().all(|a| {
        let mut inv = vec![0; n];
        for (x, &y) in a.iter().enumerate() {
            inv[y] = x;
        }
        set.contains(&inv)
            && elements
                .iter()
                .all(|b| set.contains(&b.iter().map(|&y| a[y]).collect::<Vec<_>>()))
    });
    let nested = next.iter().all(|b| set.contains(b));
    Ok(TransGroup {
        i,
        check_dim,
        next_size: next.len(),
        nested,
        closed,
        elements,
        bijections_checked: checked + checked_next,
    })
}

/// The space `T(α, N, i)` of pairs `(x, y)` with `α(π_{k-1} x) = π_{k-1} y`
/// inside the `i`-th arrow space, and `T* = F_{k-1}(T)` certified as a degree
/// `k - i` extension of `F_{k-1}(N)` by `A_k`.
#[derive(Debug, Clone)]
pub struct TranslationBundle {
    pub k: usize,
    pub i: usize,
    /// Points of `T` as pairs of points of `N`.
    pub pairs: Vec<(usize, usize)>,
    pub t: Space,
    /// `~_{k-1}` classes of `T`, the points of `T*`.
    pub classes: Partition,
    pub extension: Extension,
}

pub fn translation_bundle(
    alpha: &[usize],
    n: &Space,
    i: usize,
    n_upto: usize,
    limits: &Limits,
) -> Result<TranslationBundle> {
    if i < 1 {
        return Err(Error::invalid("translation height must be at least 1"));
    }
    let k = step_of(n.as_ref())?;
    if k < i + 1 {
        return Err(Error::Unsupported(format!(
            "T(α, N, {i}) needs a k-step N with k ≥ i + 1; N is {k}-step"
        )));
    }
    let lower = sim_classes(n.as_ref(), k - 1)?;
    let base: Space = Arc::new(FactorSpace::new(n.clone(), lower.clone()));
    check_bijection(alpha, base.size())?;
    if !is_translation(alpha, base.as_ref(), i, k, limits)? {
        return Err(Error::invalid(format!(
            "map is not a height-{i} translation of F_{}(N)",
            k - 1
        )));
    }
    let arrow = ArrowSpace::new(n.clone(), i);
    let mut pairs = Vec::new();
    let mut points = Vec::new();
    for x in 0..n.size() {
        for y in 0..n.size() {
            if alpha[lower.class_of[x]] == lower.class_of[y] {
                pairs.push((x, y));
                points.push(arrow.pair(x, y));
            }
        }
    }
    let t: Space = Arc::new(InducedSpace::new(Arc::new(arrow), points)?);
    for a in 0..t.size() {
        for b in 0..t.size() {
            if !t.contains(&[a, b]) {
                return Err(Error::structural("T is not ergodic", vec![a, b]));
            }
        }
    }
    let classes = sim_classes(t.as_ref(), k - 1)?;
    let mut proj = Vec::with_capacity(classes.len());
    for class in &classes.classes {
        let u = lower.class_of[pairs[class[0]].0];
        if class.iter().any(|&p| lower.class_of[pairs[p].0] != u) {
            return Err(Error::structural(
                "a class of T* straddles base fibers",
                class.clone(),
            ));
        }
        proj.push(u);
    }
    let tstar: Space = Arc::new(FactorSpace::new(t.clone(), classes.clone()));
    let a_k = structure_group(n, k)?.group;
    let extension = verify_extension(tstar, base, &a_k, &proj, k - i, n_upto, limits)?;
    Ok(TranslationBundle {
        k,
        i,
        pairs,
        t,
        classes,
        extension,
    })
}

/// Lift `alpha ∈ Trans_i(F_{k-1}(N))` to `Trans_i(N)` through a section of
/// `T*`; `None` when `T*` has no section.
pub fn lift_translation_split(
    alpha: &[usize],
    n: &Space,
    i: usize,
    n_upto: usize,
    limits: &Limits,
) -> Result<Option<Vec<usize>>> {
    let tb = translation_bundle(alpha, n, i, n_upto, limits)?;
    let Some(section) = find_section(&tb.extension, limits)?.section else {
        return Ok(None);
    };
    let lower = sim_classes(n.as_ref(), tb.k - 1)?;
    let mut beta = vec![usize::MAX; n.size()];
    for x in 0..n.size() {
        let class = &tb.classes.classes[section[lower.class_of[x]]];
        let ys: Vec<usize> = class
            .iter()
            .map(|&p| tb.pairs[p])
            .filter(|&(a, _)| a == x)
            .map(|(_, y)| y)
            .collect();
        if ys.len() != 1 {
            return Err(Error::structural(
                "section class is not the graph of a map",
                vec![x],
            ));
        }
        beta[x] = ys[0];
    }
    if !is_translation(&beta, n.as_ref(), i, tb.k + 1, limits)? {
        return Err(Error::structural(
            "lift from the section is not a translation",
            beta,
        ));
    }
    Ok(Some(beta))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TranslationLift {
    pub beta: Option<Vec<usize>>,
    pub check_dim: usize,
    pub rejected: u64,
}

/// Lift a height-`i` translation `alpha` of the base of `ext` to a height-`i`
/// translation `β` of the total space with `proj ∘ β = α ∘ proj`.
///
/// `β` is searched as a map `x ↦ β(x) ∈ proj⁻¹(α(proj x))` whose graph is a
/// morphism into the `i`-th arrow space, lexicographically by ground index;
/// the first candidate that is a verified translation wins.
pub fn lift_translation(
    ext: &Extension,
    alpha: &[usize],
    i: usize,
    limits: &Limits,
) -> Result<TranslationLift> {
    if i < 1 {
        return Err(Error::invalid("translation height must be at least 1"));
    }
    check_bijection(alpha, ext.base.size())?;
    let base_dim = default_check_dim(ext.base.as_ref())?;
    if !is_translation(alpha, ext.base.as_ref(), i, base_dim, limits)? {
        return Err(Error::invalid(format!(
            "map is not a height-{i} translation of the base"
        )));
    }
    let check_dim = default_check_dim(ext.total.as_ref())?;
    let total = ext.total.clone();
    let options: Vec<Vec<usize>> = ext
        .proj
        .iter()
        .map(|&u| ext.fibers[alpha[u]].clone())
        .collect();
    let by_max = cubes_by_max(total.as_ref(), 0, check_dim.saturating_sub(i), limits)?;
    let arrow = ArrowSpace::new(total.clone(), i);
    let accept = |beta: &[usize], c: &[usize]| {
        let image: Vec<usize> = c.iter().map(|&x| beta[x]).collect();
        total.contains(&arrow.assemble(c, &image))
    };
    let mut finish = |beta: &[usize]| -> Result<bool> {
        if check_bijection(beta, total.size()).is_err() {
            return Ok(false);
        }
        is_translation(beta, total.as_ref(), i, check_dim, limits)
    };
    let mut bt = Backtrack {
        options: &options,
        by_max: &by_max,
        accept: &accept,
        finish: &mut finish,
        counter: limits.counter("translation lift"),
        rejected: 0,
    };
    let mut choice = vec![0; options.len()];
    let found = bt.go(&mut choice, 0)?;
    Ok(TranslationLift {
        beta: found.then_some(choice),
        check_dim,
        rejected: bt.rejected,
    })
}

/// Whether integer values `c` on `{0,1}^n` form a cube of `D_i(Z)`: every
/// finite-difference coefficient of weight above `i` vanishes.
pub fn is_integer_dk_cube(c: &[i64], i: usize) -> bool {
    let mut a = c.to_vec();
    let len = a.len();
    let mut bit = 1;
    while bit < len {
        for v in 0..len {
            if v & bit != 0 {
                a[v] -= a[v ^ bit];
            }
        }
        bit <<= 1;
    }
    a.iter()
        .enumerate()
        .all(|(s, &x)| s.count_ones() as usize <= i || x == 0)
}

/// `v ↦ α^{c(v)}(f(v))`, checked to be a cube.
pub fn cube_action(
    space: &dyn Cubespace,
    f: &[usize],
    c: &[i64],
    alpha: &[usize],
    i: usize,
) -> Result<Vec<usize>> {
    check_bijection(alpha, space.size())?;
    if f.len() != c.len() || !f.len().is_power_of_two() {
        return Err(Error::invalid(
            "cube and exponent map have different shapes",
        ));
    }
    if !space.contains(f) {
        return Err(Error::invalid("f is not a cube"));
    }
    if !is_integer_dk_cube(c, i) {
        return Err(Error::invalid(format!(
            "exponents are not a cube of D_{i}(Z)"
        )));
    }
    let mut inverse = vec![0; alpha.len()];
    for (x, &y) in alpha.iter().enumerate() {
        inverse[y] = x;
    }
    let out: Vec<usize> = f
        .iter()
        .zip(c)
        .map(|(&x, &e)| {
            let step = if e >= 0 { alpha } else { &inverse };
            (0..e.unsigned_abs()).fold(x, |y, _| step[y])
        })
        .collect();
    if !space.contains(&out) {
        return Err(Error::structural("acted map is not a cube", out));
    }
    Ok(out)
}
