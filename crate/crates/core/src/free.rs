//! Free and modulo-n free nilspaces, polynomial maps in the binomial basis,
//! periodicity, finite free factors and morphism lifting.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::abelian::{height_extension, Element, FinAbGroup, GroupExtension};
use crate::bundle::{is_factor_map, step_of, structure_group};
use crate::error::{Error, Result};
use crate::extension::{find_section_structured, is_integer_dk_cube, verify_extension};
use crate::limits::Limits;
use crate::search::{cubes_by_max, Backtrack};
use crate::space::{
    dk_structure, for_each_cube, is_morphism, linear_structure, subdirect_product, Cubespace,
    GroupSpace, OracleSpace, ProductSpace, Space,
};

/// Ranks `(a_1, …, a_k)`: `a_i` copies of `Z` (or `Z_n`) carrying `D_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeRank {
    pub ranks: Vec<usize>,
    /// `None` for the free nilspace over `Z`.
    pub modulus: Option<u64>,
}

impl FreeRank {
    pub fn free(ranks: &[usize]) -> Self {
        FreeRank {
            ranks: ranks.to_vec(),
            modulus: None,
        }
    }

    pub fn modulo(n: u64, ranks: &[usize]) -> Self {
        FreeRank {
            ranks: ranks.to_vec(),
            modulus: Some(n),
        }
    }

    /// Degree of each coordinate, in order.
    pub fn degrees(&self) -> Vec<usize> {
        self.ranks
            .iter()
            .enumerate()
            .flat_map(|(i, &a)| std::iter::repeat_n(i + 1, a))
            .collect()
    }

    pub fn num_coords(&self) -> usize {
        self.ranks.iter().sum()
    }

    /// Largest `i` with `a_i > 0`.
    pub fn step(&self) -> usize {
        self.ranks.iter().rposition(|&a| a > 0).map_or(0, |i| i + 1)
    }

    pub fn ground_size(&self) -> Option<u128> {
        let n = self.modulus? as u128;
        (0..self.num_coords()).try_fold(1u128, |acc, _| acc.checked_mul(n))
    }
}

/// `F_n(a_1, …, a_k) = Π D_i(Z_n^{a_i})`.
pub fn mod_free_nilspace(n: u64, ranks: &[usize], limits: &Limits) -> Result<GroupSpace> {
    if n < 1 {
        return Err(Error::invalid("modulus must be positive"));
    }
    let rank = FreeRank::modulo(n, ranks);
    let size = rank.ground_size().unwrap_or(u128::MAX);
    limits.check_ground(size, "modulo-n free nilspace")?;
    let group = FinAbGroup::new(&vec![n; rank.num_coords()])?;
    GroupSpace::with_degrees(group, &rank.degrees())
}

/// `Σ_{S ⊆ v} (-1)^{|v \ S|} c(S)` for every `v`.
fn mobius(c: &[i64]) -> Vec<i64> {
    let mut a = c.to_vec();
    let mut bit = 1;
    while bit < a.len() {
        for v in 0..a.len() {
            if v & bit != 0 {
                a[v] -= a[v ^ bit];
            }
        }
        bit <<= 1;
    }
    a
}

/// All cubes of `D_i(Z)` of dimension `n` with values in `0..window`.
pub fn integer_cubes(n: usize, i: usize, window: i64, limits: &Limits) -> Result<Vec<Vec<i64>>> {
    let len = 1usize << n;
    let mut counter = limits.counter("integer cube enumeration").at_dim(n);
    let mut out = Vec::new();
    let mut c = vec![0i64; len];
    fn go(
        v: usize,
        c: &mut Vec<i64>,
        i: usize,
        window: i64,
        out: &mut Vec<Vec<i64>>,
        counter: &mut crate::limits::Counter,
    ) -> Result<()> {
        if v == c.len() {
            out.push(c.clone());
            return Ok(());
        }
        if (v as u32).count_ones() as usize > i {
            // the top coefficient at v vanishes
            let mut s = 0i64;
            let mut sub = v;
            while sub != 0 {
                sub = (sub - 1) & v;
                let sign = if (v ^ sub).count_ones().is_multiple_of(2) {
                    1
                } else {
                    -1
                };
                s += sign * c[sub];
            }
            c[v] = -s;
            if (0..window).contains(&c[v]) {
                counter.tick()?;
                go(v + 1, c, i, window, out, counter)?;
            }
            return Ok(());
        }
        for x in 0..window {
            counter.tick()?;
            c[v] = x;
            go(v + 1, c, i, window, out, counter)?;
        }
        Ok(())
    }
    go(0, &mut c, i, window, &mut out, &mut counter)?;
    Ok(out)
}

/// The coordinatewise reduction `F(a_1, …, a_k) → F_m(a_1, …, a_k)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModReduction {
    pub rank: FreeRank,
    pub modulus: u64,
}

pub fn reduce_mod(ranks: &[usize], modulus: u64) -> Result<ModReduction> {
    if modulus < 1 {
        return Err(Error::invalid("modulus must be positive"));
    }
    Ok(ModReduction {
        rank: FreeRank::free(ranks),
        modulus,
    })
}

impl ModReduction {
    pub fn target(&self, limits: &Limits) -> Result<GroupSpace> {
        mod_free_nilspace(self.modulus, &self.rank.ranks, limits)
    }

    /// Index in the target of the reduction of integer coordinates `x`.
    pub fn apply(&self, x: &[i64]) -> Result<usize> {
        if x.len() != self.rank.num_coords() {
            return Err(Error::invalid("point has the wrong number of coordinates"));
        }
        let m = self.modulus as i64;
        Ok(x.iter().fold(0usize, |acc, &c| {
            acc * m as usize + c.mod_floor(&m) as usize
        }))
    }

    /// Whether every window cube of each `D_i(Z)` coordinate of dimension
    /// `≤ n_upto` reduces to a cube of `D_i(Z_m)`.
    pub fn verify_window(&self, window: i64, n_upto: usize, limits: &Limits) -> Result<bool> {
        let m = self.modulus;
        let mut degrees = self.rank.degrees();
        degrees.dedup();
        for i in degrees {
            let target = GroupSpace::dk(FinAbGroup::cyclic(m), i)?;
            for n in 1..=n_upto {
                for c in integer_cubes(n, i, window, limits)? {
                    let image: Vec<usize> = c
                        .iter()
                        .map(|&x| x.mod_floor(&(m as i64)) as usize)
                        .collect();
                    if !target.contains(&image) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// Whether `phi ∘ reduction` sends every window cube of `F(a_1, …, a_k)`
    /// of dimension `≤ n_upto` to a cube of `target`.
    pub fn composed_is_morphism(
        &self,
        phi: &[usize],
        target: &dyn Cubespace,
        window: i64,
        n_upto: usize,
        limits: &Limits,
    ) -> Result<bool> {
        let modulus_space = self.target(limits)?;
        if phi.len() != modulus_space.size() {
            return Err(Error::invalid(
                "map does not match the reduced free nilspace",
            ));
        }
        let degrees = self.rank.degrees();
        let mut counter = limits.counter("free window cubes");
        for n in 1..=n_upto {
            let per_degree: BTreeMap<usize, Vec<Vec<i64>>> = degrees
                .iter()
                .map(|&i| Ok((i, integer_cubes(n, i, window, limits)?)))
                .collect::<Result<_>>()?;
            let lists: Vec<&Vec<Vec<i64>>> = degrees.iter().map(|i| &per_degree[i]).collect();
            let mut pick = vec![0usize; lists.len()];
            loop {
                counter.tick()?;
                let image: Vec<usize> = (0..1usize << n)
                    .map(|v| {
                        let x: Vec<i64> = pick.iter().zip(&lists).map(|(&p, l)| l[p][v]).collect();
                        self.apply(&x).map(|y| phi[y])
                    })
                    .collect::<Result<_>>()?;
                if !target.contains(&image) {
                    return Ok(false);
                }
                let mut t = pick.len();
                loop {
                    if t == 0 {
                        break;
                    }
                    t -= 1;
                    pick[t] += 1;
                    if pick[t] < lists[t].len() {
                        break;
                    }
                    pick[t] = 0;
                }
                if pick.iter().all(|&p| p == 0) {
                    break;
                }
            }
        }
        Ok(true)
    }
}

/// `x ↦ Σ_r coeff_r · Π_j binom(x_j, r_j)` into a finite abelian group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMap {
    arity: usize,
    target: FinAbGroup,
    coeffs: BTreeMap<Vec<usize>, Element>,
}

/// JSON literal: `{"arity": d, "target": [..], "coeffs": {"(r_1,…,r_d)": [..]}}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyMapLiteral {
    pub arity: usize,
    pub target: Vec<i64>,
    pub coeffs: BTreeMap<String, Vec<i64>>,
}

/// Generalized binomial coefficient `binom(x, r)` for any integer `x`.
pub fn binom(x: i64, r: usize) -> i128 {
    let mut b: i128 = 1;
    for j in 0..r as i128 {
        b = b * (x as i128 - j) / (j + 1);
    }
    b
}

impl PolyMap {
    pub fn new(
        arity: usize,
        target: FinAbGroup,
        coeffs: Vec<(Vec<usize>, Vec<i64>)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (r, c) in coeffs {
            if r.len() != arity {
                return Err(Error::invalid(format!(
                    "multi-index {r:?} does not have arity {arity}"
                )));
            }
            if c.len() != target.num_coords() {
                return Err(Error::invalid(
                    "coefficient does not match the target group",
                ));
            }
            let e = target.reduce(&c);
            let slot = map.entry(r).or_insert_with(|| target.zero());
            *slot = target.add(slot, &e);
        }
        map.retain(|_, e| *e != target.zero());
        Ok(PolyMap {
            arity,
            target,
            coeffs: map,
        })
    }

    pub fn from_literal(lit: &PolyMapLiteral) -> Result<Self> {
        let target = crate::abelian::make_group(&lit.target)?;
        let coeffs = lit
            .coeffs
            .iter()
            .map(|(key, c)| {
                let inner = key.trim().trim_start_matches('(').trim_end_matches(')');
                let r = inner
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| s.trim().parse::<usize>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| Error::invalid(format!("bad multi-index {key:?}")))?;
                Ok((r, c.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(lit.arity, target, coeffs)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn target(&self) -> &FinAbGroup {
        &self.target
    }

    pub fn coeffs(&self) -> &BTreeMap<Vec<usize>, Element> {
        &self.coeffs
    }

    /// Largest total weight of a nonzero coefficient (0 for constants).
    pub fn degree(&self) -> usize {
        self.coeffs
            .keys()
            .map(|r| r.iter().sum())
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&self, x: &[i64]) -> Element {
        let mut acc = self.target.zero();
        for (r, c) in &self.coeffs {
            let mut b: i128 = 1;
            for (&xj, &rj) in x.iter().zip(r) {
                b *= binom(xj, rj);
                let e = self.target.exponent() as i128;
                b = b.rem_euclid(e);
            }
            acc = self.target.add(&acc, &self.target.scale(c, b as i64));
        }
        acc
    }

    /// `e^max(deg, 1)` for the exponent `e` of the target: every coordinate
    /// period divides it.
    pub fn period_bound(&self) -> Result<u64> {
        self.target
            .exponent()
            .checked_pow(self.degree().max(1) as u32)
            .ok_or_else(|| Error::invalid("period bound overflows"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PeriodReport {
    pub period: u64,
    /// `|A|^{k-i+1}` (1 when `i > k`).
    pub bound: u64,
    pub divides: bool,
}

/// Minimal period of a one-variable polynomial map viewed as a morphism
/// `D_i(Z) → D_k(A)`.
pub fn period_of_polymap(p: &PolyMap, i: usize, k: usize) -> Result<PeriodReport> {
    if p.arity != 1 {
        return Err(Error::invalid(
            "periods are computed for maps of one variable",
        ));
    }
    let exp = if i > k { 0 } else { k - i + 1 };
    if p.degree() > exp {
        return Err(Error::invalid(format!(
            "degree {} exceeds k - i + 1 = {exp}",
            p.degree()
        )));
    }
    let big = p.period_bound()?;
    let values: Vec<Element> = (0..2 * big as i64).map(|m| p.eval(&[m])).collect();
    let b = big as usize;
    if (0..b).any(|m| values[m] != values[m + b]) {
        return Err(Error::structural(
            "map is not periodic with the predicted period",
            vec![b],
        ));
    }
    let period = (1..=big)
        .filter(|d| big % d == 0)
        .find(|&d| (0..b).all(|m| values[m] == values[m + d as usize]))
        .unwrap_or(big);
    let bound = p
        .target
        .order()
        .checked_pow(exp as u32)
        .ok_or_else(|| Error::invalid("period bound overflows"))?;
    Ok(PeriodReport {
        period,
        bound,
        divides: bound % period == 0,
    })
}

/// A cube of `D_i(Z^d)` (as integer points) sent by `p` to a non-cube of
/// `D_k(A)`. The check runs on `Z_P^d` for a common period `P` and cube
/// dimensions `≤ k + 1`.
pub fn poly_morphism_violation(
    p: &PolyMap,
    i: usize,
    k: usize,
    limits: &Limits,
) -> Result<Option<Vec<Vec<i64>>>> {
    if i < 1 || k < 1 {
        return Err(Error::invalid("degrees must be at least 1"));
    }
    let period = p.period_bound()?.max(2);
    let d = p.arity;
    let src_group = FinAbGroup::new(&vec![period; d])?;
    limits.check_ground(src_group.order() as u128, "polynomial map domain")?;
    let points: Vec<Vec<i64>> = src_group
        .elements()
        .map(|e| e.0.iter().map(|&x| x as i64).collect())
        .collect();
    let values: Vec<usize> = points
        .iter()
        .map(|x| p.target.index_of(&p.eval(x)))
        .collect();
    for (x, &v) in points.iter().zip(&values) {
        for j in 0..d {
            let mut y = x.clone();
            y[j] += period as i64;
            if p.target.index_of(&p.eval(&y)) != v {
                return Err(Error::structural(
                    "map is not periodic with the predicted period",
                    vec![j],
                ));
            }
        }
    }
    let src = GroupSpace::dk(src_group, i)?;
    let dst = GroupSpace::dk(p.target.clone(), k)?;
    for n in 1..=k + 1 {
        let mut bad = None;
        for_each_cube(&src, n, limits, &mut |c| {
            let image: Vec<usize> = c.iter().map(|&x| values[x]).collect();
            if !dst.contains(&image) {
                bad = Some(c.iter().map(|&x| points[x].clone()).collect());
                return Ok(false);
            }
            Ok(true)
        })?;
        if bad.is_some() {
            return Ok(bad);
        }
    }
    Ok(None)
}

pub fn poly_is_morphism(p: &PolyMap, i: usize, k: usize, limits: &Limits) -> Result<bool> {
    Ok(poly_morphism_violation(p, i, k, limits)?.is_none())
}

/// A modulo-`m` free nilspace `F` with a factor map `h : F → N`.
#[derive(Debug, Clone)]
pub struct FreeFactor {
    pub rank: FreeRank,
    pub alpha: u32,
    pub exponent: u64,
    pub space: GroupSpace,
    pub h: Vec<usize>,
    /// `F' = F_m(a_1, …, a_{k-1}) × D_k(A_k)` and the map `β' : F' → N`
    /// through which `h` factors.
    pub reduced: Space,
    pub reduced_rank: FreeRank,
    pub top_group: FinAbGroup,
    pub beta: Vec<usize>,
    /// `(α, reason)` for each modulus tried without success.
    pub attempts: Vec<(u32, String)>,
}

struct Built {
    ranks: Vec<usize>,
    space: GroupSpace,
    h: Vec<usize>,
    lower_ranks: Vec<usize>,
    lower: GroupSpace,
    top: FinAbGroup,
    beta: Vec<usize>,
}

/// One pass of the inductive construction with a fixed modulus `m`; the inner
/// error names the first level that does not split.
fn build_factor(
    n: &Space,
    k: usize,
    m: u64,
    limits: &Limits,
) -> Result<std::result::Result<Built, String>> {
    let mut ranks: Vec<usize> = Vec::new();
    let mut free = mod_free_nilspace(m, &ranks, limits)?;
    let mut h = vec![0usize];
    let mut prev: Space = Arc::new(OracleSpace::full(1));
    let mut last = None;
    for i in 1..=k {
        let sg = structure_group(n, i)?;
        let x_i = sg.factor.clone();
        let r = sg.group.invariant_factors().len();
        let free_space: Space = Arc::new(free.clone());
        let q = subdirect_product(
            free_space.clone(),
            x_i.clone(),
            prev.clone(),
            &h,
            &sg.fiber_of,
            i + 1,
            limits,
        )?;
        let prod = ProductSpace::new(free_space.clone(), x_i.clone());
        let pairs: Vec<(usize, usize)> = q.points().iter().map(|&p| prod.split(p)).collect();
        let q_space: Space = Arc::new(q);
        let proj: Vec<usize> = pairs.iter().map(|&(a, _)| a).collect();
        let ext = verify_extension(q_space, free_space, &sg.group, &proj, i, i + 1, limits)?;
        let search = find_section_structured(&ext, &free, limits)?;
        let Some(section) = search.section else {
            return Ok(Err(format!(
                "level {i}: the extension by {:?} has no section",
                sg.group.invariant_factors()
            )));
        };
        // β' on F_m(lower) × D_i(A_i) and h on F_m(lower) × D_i(Z_m^r)
        let order = sg.group.order() as usize;
        let beta: Vec<usize> = (0..free.size() * order)
            .map(|y| pairs[ext.action[y % order][section[y / order]]].1)
            .collect();
        let lower_ranks = ranks.clone();
        let lower = free.clone();
        ranks.resize(i - 1, 0);
        ranks.push(r);
        free = mod_free_nilspace(m, &ranks, limits)?;
        let new_coords = FinAbGroup::new(&vec![m; r])?;
        let per = new_coords.order() as usize;
        h = (0..free.size())
            .map(|x| {
                let (a, z) = (x / per, x % per);
                let coeffs: Vec<i64> = new_coords
                    .element_at(z)
                    .0
                    .iter()
                    .map(|&c| c as i64)
                    .collect();
                let t = sg.group.index_of(&sg.group.from_invariant_coeffs(&coeffs));
                beta[a * order + t]
            })
            .collect();
        prev = x_i;
        last = Some((lower_ranks, lower, sg.group.clone(), beta));
    }
    let (lower_ranks, lower, top, beta) = match last {
        Some(l) => l,
        None => (Vec::new(), free.clone(), FinAbGroup::trivial(), vec![0]),
    };
    Ok(Ok(Built {
        ranks,
        space: free,
        h,
        lower_ranks,
        lower,
        top,
        beta,
    }))
}

/// A modulo-`e^α` free nilspace with a factor map onto `N`, for the least
/// `α ≤ alpha_cap` at which every level of the construction splits. `e` is
/// the least common multiple of the exponents of the structure groups.
pub fn factor_to_finite(n: &Space, alpha_cap: u32, limits: &Limits) -> Result<FreeFactor> {
    let k = step_of(n.as_ref())?;
    let mut e = 1u64;
    for i in 1..=k {
        e = e.lcm(&structure_group(n, i)?.group.exponent());
    }
    let e = e.max(2);
    let mut attempts = Vec::new();
    for alpha in 1..=alpha_cap {
        let m = e
            .checked_pow(alpha)
            .ok_or_else(|| Error::invalid("modulus overflows"))?;
        match build_factor(n, k, m, limits)? {
            Err(reason) => attempts.push((alpha, reason)),
            Ok(b) => {
                if !is_factor_map(&b.h, &b.space, n.as_ref(), k + 1, limits)? {
                    return Err(Error::structural(
                        "constructed map is not a factor map",
                        b.h,
                    ));
                }
                let top_space = dk_structure(&b.top, k.max(1))?;
                let reduced: Space = Arc::new(ProductSpace::new(Arc::new(b.lower), top_space));
                let mut reduced_ranks = b.lower_ranks;
                reduced_ranks.resize(k.saturating_sub(1), 0);
                return Ok(FreeFactor {
                    rank: FreeRank::modulo(m, &b.ranks),
                    alpha,
                    exponent: e,
                    space: b.space,
                    h: b.h,
                    reduced,
                    reduced_rank: FreeRank::modulo(m, &reduced_ranks),
                    top_group: b.top,
                    beta: b.beta,
                    attempts,
                });
            }
        }
    }
    let log: Vec<String> = attempts
        .iter()
        .map(|(a, r)| format!("α={a}: {r}"))
        .collect();
    Err(Error::NotFound(format!(
        "no split construction with α ≤ {alpha_cap}: {}",
        log.join("; ")
    )))
}

/// `φ : A → N` lifted through a height-`i` extension `B → A`: a morphism
/// `ψ : B → F'` with `β'(ψ(b)) = φ(π(b))` for all `b`.
#[derive(Debug, Clone)]
pub struct MorphismLift {
    pub height: u32,
    pub extension: GroupExtension,
    /// Element index of `B` to point of `F'`.
    pub psi: Vec<usize>,
    pub factor: FreeFactor,
    /// `β'(ψ(b)) = φ(π(b))` on all of `B`.
    pub commutes: bool,
    pub reading: String,
}

pub fn lift_morphism(
    group: &FinAbGroup,
    n: &Space,
    phi: &[usize],
    ext_cap: u32,
    alpha_cap: u32,
    limits: &Limits,
) -> Result<MorphismLift> {
    if phi.len() != group.order() as usize || phi.iter().any(|&y| y >= n.size()) {
        return Err(Error::invalid("φ does not map the group into N"));
    }
    let k = step_of(n.as_ref())?;
    let dims = k + 1;
    if !is_morphism(
        phi,
        linear_structure(group).as_ref(),
        n.as_ref(),
        dims,
        limits,
    )? {
        return Err(Error::invalid(
            "φ is not a morphism from the linear structure",
        ));
    }
    let factor = factor_to_finite(n, alpha_cap, limits)?;
    let fprime = factor.reduced.clone();
    let mut over: Vec<Vec<usize>> = vec![Vec::new(); n.size()];
    for (y, &x) in factor.beta.iter().enumerate() {
        over[x].push(y);
    }
    for height in 1..=ext_cap {
        let ext = height_extension(group, height)?;
        let b = ext.total();
        let source = linear_structure(b);
        let projected: Vec<usize> = b
            .elements()
            .map(|x| group.index_of(&ext.project(&x)))
            .collect();
        let options: Vec<Vec<usize>> = projected.iter().map(|&a| over[phi[a]].clone()).collect();
        let by_max = cubes_by_max(source.as_ref(), 1, dims, limits)?;
        let accept = |psi: &[usize], c: &[usize]| {
            let image: Vec<usize> = c.iter().map(|&x| psi[x]).collect();
            fprime.contains(&image)
        };
        let mut finish = |_: &[usize]| Ok(true);
        let mut bt = Backtrack {
            options: &options,
            by_max: &by_max,
            accept: &accept,
            finish: &mut finish,
            counter: limits.counter("morphism lift search"),
            rejected: 0,
        };
        let mut psi = vec![0; options.len()];
        if bt.go(&mut psi, 0)? {
            if !is_morphism(&psi, source.as_ref(), fprime.as_ref(), dims, limits)? {
                return Err(Error::structural("lift is not a morphism", psi));
            }
            let commutes = (0..psi.len()).all(|x| factor.beta[psi[x]] == phi[projected[x]]);
            return Ok(MorphismLift {
                height,
                extension: ext,
                psi,
                factor,
                commutes,
                reading: "ψ applied first, then β: β(ψ(b)) = φ(π(b)); the left-to-right reading \
                          ψ∘β = π∘φ does not type-check"
                    .into(),
            });
        }
    }
    Err(Error::NotFound(format!(
        "no lift through extensions of height ≤ {ext_cap}"
    )))
}

/// Whether integer points `cube` form a cube of the free (or modulo-n free)
/// nilspace of the given rank.
pub fn is_free_cube(rank: &FreeRank, cube: &[Vec<i64>]) -> bool {
    let degrees = rank.degrees();
    (0..degrees.len()).all(|j| {
        let coord: Vec<i64> = cube.iter().map(|x| x[j]).collect();
        if let Some(m) = rank.modulus {
            let a = mobius(&coord);
            a.iter()
                .enumerate()
                .all(|(s, &x)| s.count_ones() as usize <= degrees[j] || x.rem_euclid(m as i64) == 0)
        } else {
            is_integer_dk_cube(&coord, degrees[j])
        }
    })
}
