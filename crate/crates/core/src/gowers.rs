//! Gowers norms, phase polynomials, projected phase polynomials, nilspace
//! polynomials and the inverse-theorem search.

use num_complex::Complex64;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::abelian::{
    characters, height_extension, Character, Element, FinAbGroup, GroupExtension,
};
use crate::error::{Error, Result};
use crate::free::PolyMap;
use crate::limits::Limits;
use crate::phase::Phase;
use crate::search::{cubes_by_max, Backtrack};
use crate::space::{is_morphism, linear_structure, Cubespace};

/// Tolerance for unimodularity and exact-phase agreement.
pub const UNIT_TOL: f64 = 1e-12;

/// A complex function on a finite abelian group, indexed by element index.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupFunction {
    group: FinAbGroup,
    values: Vec<Complex64>,
    phases: Option<Vec<Phase>>,
}

impl GroupFunction {
    pub fn new(group: FinAbGroup, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != group.order() as usize {
            return Err(Error::invalid("one value per group element required"));
        }
        if let Some(x) = values.iter().position(|v| v.norm() > 1.0 + UNIT_TOL) {
            return Err(Error::invalid(format!(
                "|f| exceeds 1 at element index {x}"
            )));
        }
        Ok(GroupFunction {
            group,
            values,
            phases: None,
        })
    }

    pub fn from_phases(group: FinAbGroup, phases: Vec<Phase>) -> Result<Self> {
        if phases.len() != group.order() as usize {
            return Err(Error::invalid("one phase per group element required"));
        }
        Ok(GroupFunction {
            values: phases.iter().map(|p| p.to_complex()).collect(),
            group,
            phases: Some(phases),
        })
    }

    pub fn constant(group: FinAbGroup, phase: Phase) -> Self {
        let n = group.order() as usize;
        Self::from_phases(group, vec![phase; n]).expect("sizes agree")
    }

    pub fn from_character(chi: &Character) -> Self {
        let g = chi.group().clone();
        let phases = g.elements().map(|x| chi.eval(&x)).collect();
        Self::from_phases(g, phases).expect("sizes agree")
    }

    /// The indicator of the zero element.
    pub fn dirac(group: FinAbGroup) -> Self {
        let zero = group.index_of(&group.zero());
        let values = (0..group.order() as usize)
            .map(|x| Complex64::new(if x == zero { 1.0 } else { 0.0 }, 0.0))
            .collect();
        Self::new(group, values).expect("bounded values")
    }

    /// Values drawn uniformly from the unit disk.
    pub fn random(group: FinAbGroup, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = (0..group.order())
            .map(|_| {
                let r = rng.gen::<f64>().sqrt();
                let t = rng.gen::<f64>() * std::f64::consts::TAU;
                Complex64::from_polar(r, t)
            })
            .collect();
        Self::new(group, values).expect("bounded values")
    }

    /// Exact phases `j / denom` with `j` uniform.
    pub fn random_phases(group: FinAbGroup, denom: i64, seed: u64) -> Result<Self> {
        if denom < 1 {
            return Err(Error::invalid("phase denominator must be positive"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phases = (0..group.order())
            .map(|_| Phase::new(rng.gen_range(0..denom), denom))
            .collect();
        Self::from_phases(group, phases)
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn phases(&self) -> Option<&[Phase]> {
        self.phases.as_deref()
    }

    pub fn value(&self, x: &Element) -> Complex64 {
        self.values[self.group.index_of(x)]
    }

    fn require_phases(&self) -> Result<&[Phase]> {
        self.phases.as_deref().ok_or_else(|| {
            Error::invalid("function has no exact phases (not unimodular roots of unity)")
        })
    }

    /// Pointwise product.
    pub fn mul(&self, other: &GroupFunction) -> Result<GroupFunction> {
        self.same_group(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .collect();
        let phases = match (&self.phases, &other.phases) {
            (Some(a), Some(b)) => Some(a.iter().zip(b).map(|(&x, &y)| x + y).collect()),
            _ => None,
        };
        Ok(GroupFunction {
            group: self.group.clone(),
            values,
            phases,
        })
    }

    pub fn conj(&self) -> GroupFunction {
        GroupFunction {
            group: self.group.clone(),
            values: self.values.iter().map(|v| v.conj()).collect(),
            phases: self
                .phases
                .as_ref()
                .map(|p| p.iter().map(|&x| -x).collect()),
        }
    }

    /// `x ↦ f(x)^m` on exact phases.
    pub fn pow(&self, m: i64) -> Result<GroupFunction> {
        let phases = self.require_phases()?.iter().map(|p| p.scale(m)).collect();
        Self::from_phases(self.group.clone(), phases)
    }

    fn same_group(&self, other: &GroupFunction) -> Result<()> {
        if self.group != other.group {
            return Err(Error::invalid("functions live on different groups"));
        }
        Ok(())
    }

    /// Index of `x + t` for every element index `x`.
    fn shift_table(&self, t: usize) -> Vec<usize> {
        let te = self.group.element_at(t);
        self.group
            .elements()
            .map(|x| self.group.index_of(&self.group.add(&x, &te)))
            .collect()
    }
}

/// `Δ_t f(x) = f(x) · conj(f(x + t))`.
pub fn delta(f: &GroupFunction, t: &Element) -> Result<GroupFunction> {
    if !f.group.contains(t) {
        return Err(Error::invalid("shift is not an element of the group"));
    }
    let shift = f.shift_table(f.group.index_of(t));
    let values = (0..shift.len())
        .map(|x| f.values[x] * f.values[shift[x]].conj())
        .collect();
    let phases = f
        .phases
        .as_ref()
        .map(|p| (0..shift.len()).map(|x| p[x] - p[shift[x]]).collect());
    Ok(GroupFunction {
        group: f.group.clone(),
        values,
        phases,
    })
}

/// `E_{x, t_1..t_d} Δ_{t_1}…Δ_{t_d} f(x)`, computed as the average of
/// `‖Δ_t f‖^{2^{d-1}}` over `t`.
fn gowers_power(f: &[Complex64], shifts: &[Vec<usize>], d: usize) -> Complex64 {
    let n = f.len() as f64;
    if d == 0 {
        return f.iter().sum::<Complex64>() / n;
    }
    let mut total = Complex64::new(0.0, 0.0);
    let mut df = vec![Complex64::new(0.0, 0.0); f.len()];
    for shift in shifts {
        for x in 0..f.len() {
            df[x] = f[x] * f[shift[x]].conj();
        }
        total += gowers_power(&df, shifts, d - 1);
    }
    total / n
}

/// `‖f‖_{U_d}` for `d ≥ 1`.
pub fn gowers_norm(f: &GroupFunction, d: usize, limits: &Limits) -> Result<f64> {
    if d < 1 {
        return Err(Error::invalid("Gowers norms are defined for d ≥ 1"));
    }
    let n = f.group.order();
    let work = (0..=d).try_fold(1u64, |acc, _| acc.checked_mul(n));
    if work.is_none_or(|w| w > limits.candidates) {
        return Err(Error::ResourceLimit {
            what: format!("Gowers U_{d} average over |G|^{} terms", d + 1),
            budget: limits.candidates,
            dim: Some(d),
        });
    }
    let shifts: Vec<Vec<usize>> = (0..n as usize).map(|t| f.shift_table(t)).collect();
    let avg = gowers_power(&f.values, &shifts, d).re;
    if avg < -1e-9 {
        return Err(Error::structural("Gowers average is negative", vec![]));
    }
    Ok(avg.max(0.0).powf(1.0 / (1u64 << d) as f64))
}

/// `f̂(χ) = E_x f(x) · conj(χ(x))` for every character, in character order.
pub fn fourier(f: &GroupFunction) -> Vec<Complex64> {
    let n = f.group.order() as f64;
    characters(&f.group)
        .iter()
        .map(|chi| {
            f.group
                .elements()
                .zip(&f.values)
                .map(|(x, v)| v * chi.eval(&x).to_complex().conj())
                .sum::<Complex64>()
                / n
        })
        .collect()
}

/// `‖f‖_{U_2}` through `Σ_χ |f̂(χ)|^4`.
pub fn gowers_u2_fourier(f: &GroupFunction) -> f64 {
    fourier(f)
        .iter()
        .map(|c| c.norm_sqr().powi(2))
        .sum::<f64>()
        .powf(0.25)
}

/// Outcome of an exact phase-polynomial check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhaseCheck {
    pub k: usize,
    pub holds: bool,
    pub tuples_checked: u64,
    /// First shift tuple (element indices) and point with a nonzero derivative.
    pub failing: Option<(Vec<usize>, usize)>,
}

/// Whether `Δ_{t_1}…Δ_{t_{k+1}} φ ≡ 1` for all shift tuples, in exact phases.
/// The derivatives commute, so tuples are enumerated as multisets.
pub fn is_phase_polynomial(phi: &GroupFunction, k: usize, limits: &Limits) -> Result<PhaseCheck> {
    let phases = phi.require_phases()?;
    let n = phases.len();
    let shifts: Vec<Vec<usize>> = (0..n).map(|t| phi.shift_table(t)).collect();
    let mut counter = limits.counter("phase polynomial check");
    let mut tuple = Vec::with_capacity(k + 1);
    let mut check = PhaseCheck {
        k,
        holds: true,
        tuples_checked: 0,
        failing: None,
    };
    fn go(
        g: &[Phase],
        from: usize,
        depth: usize,
        shifts: &[Vec<usize>],
        tuple: &mut Vec<usize>,
        check: &mut PhaseCheck,
        counter: &mut crate::limits::Counter,
    ) -> Result<bool> {
        if depth == 0 {
            counter.tick()?;
            check.tuples_checked += 1;
            if let Some(x) = g.iter().position(|p| !p.is_zero()) {
                check.holds = false;
                check.failing = Some((tuple.clone(), x));
                return Ok(false);
            }
            return Ok(true);
        }
        let mut dg = vec![Phase::ZERO; g.len()];
        for t in from..shifts.len() {
            for x in 0..g.len() {
                dg[x] = g[x] - g[shifts[t][x]];
            }
            tuple.push(t);
            let ok = go(&dg, t, depth - 1, shifts, tuple, check, counter)?;
            tuple.pop();
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }
    go(
        phases,
        0,
        k + 1,
        &shifts,
        &mut tuple,
        &mut check,
        &mut counter,
    )?;
    Ok(check)
}

/// Least `k ≤ k_max` for which `phi` is a phase polynomial of degree `k`.
pub fn phase_degree(phi: &GroupFunction, k_max: usize, limits: &Limits) -> Result<Option<usize>> {
    for k in 0..=k_max {
        if is_phase_polynomial(phi, k, limits)?.holds {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// A unimodular function with a verified degree certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct PhasePolynomial {
    pub function: GroupFunction,
    pub degree: usize,
    pub certificate: PhaseCheck,
}

impl PhasePolynomial {
    pub fn certify(function: GroupFunction, k: usize, limits: &Limits) -> Result<Self> {
        let certificate = is_phase_polynomial(&function, k, limits)?;
        if !certificate.holds {
            let witness = certificate
                .failing
                .clone()
                .map(|(t, x)| [t, vec![x]].concat())
                .unwrap_or_default();
            return Err(Error::structural(
                format!("not a phase polynomial of degree {k}"),
                witness,
            ));
        }
        Ok(PhasePolynomial {
            function,
            degree: k,
            certificate,
        })
    }

    pub fn phases(&self) -> &[Phase] {
        self.function
            .phases()
            .expect("phase polynomials carry exact phases")
    }
}

/// Integer representatives of the coordinates of `x`.
fn reps(x: &Element) -> Vec<i64> {
    x.0.iter().map(|&c| c as i64).collect()
}

/// `x ↦ χ(p(x))` on `domain`, reading elements by their representatives in
/// `[0, n_j)`. The map must be periodic in each coordinate with the cyclic
/// orders of `domain`.
pub fn phase_poly_from_coeffs(
    p: &PolyMap,
    chi: &Character,
    domain: &FinAbGroup,
    limits: &Limits,
) -> Result<PhasePolynomial> {
    if p.target() != chi.group() {
        return Err(Error::invalid(
            "the character is not defined on the map's target",
        ));
    }
    if p.arity() != domain.num_coords() {
        return Err(Error::invalid(
            "map arity differs from the number of cyclic factors",
        ));
    }
    let span = p.degree() as u64 + 1;
    let box_orders: Vec<u64> = domain
        .cyclic_orders()
        .iter()
        .map(|&n| n.max(span))
        .collect();
    let window = FinAbGroup::new(&box_orders)?;
    for x in window.elements() {
        let x = reps(&x);
        for (j, &n) in domain.cyclic_orders().iter().enumerate() {
            let mut y = x.clone();
            y[j] += n as i64;
            if p.eval(&x) != p.eval(&y) {
                return Err(Error::invalid(format!(
                    "map is not periodic modulo {n} in coordinate {j}; it does not descend to the domain"
                )));
            }
        }
    }
    let phases = domain
        .elements()
        .map(|x| chi.eval(&p.eval(&reps(&x))))
        .collect();
    let f = GroupFunction::from_phases(domain.clone(), phases)?;
    PhasePolynomial::certify(f, p.degree(), limits)
}

/// `f(a) = |C|^{-1} Σ_{τ(b) = a} φ(b)`.
pub fn project_phase(phi: &GroupFunction, ext: &GroupExtension) -> Result<GroupFunction> {
    if phi.group() != ext.total() {
        return Err(Error::invalid(
            "function is not defined on the extension group",
        ));
    }
    let a = ext.base();
    let mut sums = vec![Complex64::new(0.0, 0.0); a.order() as usize];
    let mut fiber_phases: Vec<Option<Phase>> = vec![None; a.order() as usize];
    let mut constant_on_fibers = phi.phases.is_some();
    for (b, x) in ext.total().elements().enumerate() {
        let i = a.index_of(&ext.project(&x));
        sums[i] += phi.values[b];
        if let Some(p) = &phi.phases {
            match fiber_phases[i] {
                None => fiber_phases[i] = Some(p[b]),
                Some(q) if q != p[b] => constant_on_fibers = false,
                _ => {}
            }
        }
    }
    let c = ext.kernel_order() as f64;
    if constant_on_fibers {
        return GroupFunction::from_phases(
            a.clone(),
            fiber_phases.into_iter().map(|p| p.unwrap()).collect(),
        );
    }
    GroupFunction::new(a.clone(), sums.into_iter().map(|s| s / c).collect())
}

/// `f ∘ τ` on the extension group.
pub fn lift_function(f: &GroupFunction, ext: &GroupExtension) -> Result<GroupFunction> {
    if f.group() != ext.base() {
        return Err(Error::invalid("function is not defined on the base group"));
    }
    let idx: Vec<usize> = ext
        .total()
        .elements()
        .map(|x| f.group.index_of(&ext.project(&x)))
        .collect();
    let values = idx.iter().map(|&i| f.values[i]).collect();
    let phases = f
        .phases
        .as_ref()
        .map(|p| idx.iter().map(|&i| p[i]).collect());
    Ok(GroupFunction {
        group: ext.total().clone(),
        values,
        phases,
    })
}

/// `(f, g) = E_x f(x) · conj(g(x))`.
pub fn correlation(f: &GroupFunction, g: &GroupFunction) -> Result<Complex64> {
    f.same_group(g)?;
    let n = f.values.len() as f64;
    Ok(f.values
        .iter()
        .zip(&g.values)
        .map(|(a, b)| a * b.conj())
        .sum::<Complex64>()
        / n)
}

/// Values on the points of a nilspace.
#[derive(Debug, Clone, PartialEq)]
pub enum PointValues {
    Complex(Vec<Complex64>),
    Exact(Vec<Phase>),
}

/// `x ↦ g(φ(x))` for a morphism `φ` from the linear structure of `group`,
/// certified on cubes of dimension `≤ n_check`.
pub fn nilspace_polynomial(
    group: &FinAbGroup,
    n: &dyn Cubespace,
    phi: &[usize],
    g: &PointValues,
    n_check: usize,
    limits: &Limits,
) -> Result<GroupFunction> {
    if phi.len() != group.order() as usize || phi.iter().any(|&y| y >= n.size()) {
        return Err(Error::invalid("φ does not map the group into N"));
    }
    if !is_morphism(phi, linear_structure(group).as_ref(), n, n_check, limits)? {
        return Err(Error::invalid("φ is not a morphism"));
    }
    match g {
        PointValues::Complex(v) => {
            if v.len() != n.size() {
                return Err(Error::invalid("one value per point of N required"));
            }
            GroupFunction::new(group.clone(), phi.iter().map(|&y| v[y]).collect())
        }
        PointValues::Exact(p) => {
            if p.len() != n.size() {
                return Err(Error::invalid("one value per point of N required"));
            }
            GroupFunction::from_phases(group.clone(), phi.iter().map(|&y| p[y]).collect())
        }
    }
}

/// `φ = φ_1 · φ_2` with `φ_1` of degree `≤ k - 1` and `φ_2^q = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSplit {
    pub phi1: PhasePolynomial,
    pub phi2: PhasePolynomial,
    pub q: u64,
    pub candidates_rejected: u64,
}

/// Search `φ_1(x) ∈ φ(x) + (1/q)Z` of degree `≤ k - 1`, points in index order,
/// values in increasing phase order; the first verified factor wins.
pub fn decompose_phase(phi: &PhasePolynomial, q: u64, limits: &Limits) -> Result<PhaseSplit> {
    let k = phi.degree;
    if k < 1 {
        return Err(Error::invalid(
            "a degree-0 phase polynomial has no lower-degree factor",
        ));
    }
    if q < 1 {
        return Err(Error::invalid("q must be positive"));
    }
    let group = phi.function.group().clone();
    let phases = phi.phases().to_vec();
    let value = |x: usize, j: usize| phases[x] + Phase::new(j as i64, q as i64);
    let options: Vec<Vec<usize>> = (0..phases.len())
        .map(|x| {
            let mut js: Vec<usize> = (0..q as usize).collect();
            js.sort_by_key(|&j| value(x, j));
            js
        })
        .collect();
    let source = linear_structure(&group);
    let by_max = cubes_by_max(source.as_ref(), k, k, limits)?;
    // k-cubes of D_1(B) must go to cubes of D_{k-1}: vanishing alternating sums
    let accept = |choice: &[usize], c: &[usize]| {
        let mut s = Phase::ZERO;
        for (v, &x) in c.iter().enumerate() {
            let p = value(x, choice[x]);
            if (k - (v.count_ones() as usize)).is_multiple_of(2) {
                s += p;
            } else {
                s += -p;
            }
        }
        s.is_zero()
    };
    let mut finish = |_: &[usize]| Ok(true);
    let mut bt = Backtrack {
        options: &options,
        by_max: &by_max,
        accept: &accept,
        finish: &mut finish,
        counter: limits.counter("phase decomposition search"),
        rejected: 0,
    };
    let mut choice = vec![0; options.len()];
    if !bt.go(&mut choice, 0)? {
        return Err(Error::NotFound(format!(
            "no degree-{} factor with a {q}-torsion cofactor",
            k - 1
        )));
    }
    let rejected = bt.rejected;
    let p1: Vec<Phase> = (0..phases.len()).map(|x| value(x, choice[x])).collect();
    let p2: Vec<Phase> = phases.iter().zip(&p1).map(|(&a, &b)| a - b).collect();
    let phi1 = PhasePolynomial::certify(
        GroupFunction::from_phases(group.clone(), p1)?,
        k - 1,
        limits,
    )?;
    let phi2 = PhasePolynomial::certify(GroupFunction::from_phases(group, p2)?, k, limits)?;
    if phi2.phases().iter().any(|p| !p.scale(q as i64).is_zero()) {
        return Err(Error::structural("cofactor is not q-torsion", vec![]));
    }
    Ok(PhaseSplit {
        phi1,
        phi2,
        q,
        candidates_rejected: rejected,
    })
}

/// Multi-indices `r` over `d` coordinates with `1 ≤ Σ r ≤ k`, in graded
/// lexicographic order.
pub fn multi_indices(d: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for total in 1..=k {
        let mut r = vec![0usize; d];
        fn fill(j: usize, left: usize, r: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if j + 1 == r.len() {
                r[j] = left;
                out.push(r.clone());
                return;
            }
            for v in (0..=left).rev() {
                r[j] = v;
                fill(j + 1, left - v, r, out);
            }
        }
        if d > 0 {
            fill(0, total, &mut r, &mut out);
        }
    }
    out
}

/// Phases `Σ_r θ_r Π_j binom(x_j, r_j)` on the representatives of `group`.
pub fn coefficient_phases(group: &FinAbGroup, terms: &[(Vec<usize>, Phase)]) -> Vec<Phase> {
    group
        .elements()
        .map(|x| {
            terms.iter().fold(Phase::ZERO, |acc, (r, theta)| {
                let b = r.iter().zip(&x.0).fold(1i128, |b, (&rj, &xj)| {
                    (b * crate::free::binom(xj as i64, rj)).rem_euclid(theta.denom() as i128)
                });
                acc + theta.scale(b as i64)
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeightResult {
    pub height: u32,
    /// Invariant factors of `B`.
    pub extension: Vec<u64>,
    pub candidates: u64,
    pub examined: u64,
    pub certified: u64,
    pub best: f64,
    pub exhaustive: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Candidate {
    pub height: u32,
    pub extension: Vec<u64>,
    /// Nonzero coefficients `(r, θ_r)` with `θ_r` as `"p/q"`.
    pub coeffs: Vec<(Vec<usize>, String)>,
    pub phases: Vec<String>,
    pub correlation_re: f64,
    pub correlation_im: f64,
    pub correlation_abs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrelationReport {
    pub k: usize,
    pub q: u64,
    pub norm: f64,
    pub norm_floor: f64,
    pub skipped: bool,
    pub heights: Vec<HeightResult>,
    pub best: Option<Candidate>,
    pub delta: f64,
    pub clears_delta: bool,
    pub complete: bool,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InverseSearch {
    pub k: usize,
    pub q: u64,
    pub ext_cap: u32,
    pub delta: f64,
    pub norm_floor: f64,
    /// Candidates examined per height before switching to seeded sampling.
    pub budget: u64,
    pub seed: u64,
}

/// Search degree-`k` phase polynomials `φ` with `φ^{q^i} = 1` on height-`i`
/// extensions `B → A` for the best `|(f ∘ τ, φ)|`. Heights increase from 1;
/// within a height, candidates are ordered by number of nonzero
/// coefficients, then lexicographically. Stops at the first height reaching
/// correlation 1.
pub fn inverse_search(
    f: &GroupFunction,
    params: &InverseSearch,
    limits: &Limits,
) -> Result<CorrelationReport> {
    let a = f.group().clone();
    if params.q < 2 || !params.q.is_multiple_of(a.exponent()) {
        return Err(Error::invalid(
            "q must be a multiple of the exponent of the group",
        ));
    }
    let norm = gowers_norm(f, params.k + 1, limits)?;
    let mut report = CorrelationReport {
        k: params.k,
        q: params.q,
        norm,
        norm_floor: params.norm_floor,
        skipped: norm < params.norm_floor,
        heights: Vec::new(),
        best: None,
        delta: params.delta,
        clears_delta: false,
        complete: true,
        seed: params.seed,
    };
    if report.skipped {
        return Ok(report);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    for height in 1..=params.ext_cap {
        let ext = height_extension(&a, height)?;
        let b = ext.total().clone();
        let lifted = lift_function(f, &ext)?;
        let den = params
            .q
            .checked_pow(height)
            .ok_or_else(|| Error::invalid("phase denominator overflows"))? as i64;
        let indices = multi_indices(b.num_coords(), params.k);
        let slots = indices.len() as u32;
        let total = (den as u64).checked_pow(slots);
        let exhaustive = total.is_some_and(|t| t <= params.budget);
        let codes: Vec<Vec<i64>> = if exhaustive {
            let t = total.unwrap();
            let mut all: Vec<Vec<i64>> = (0..t)
                .map(|mut c| {
                    (0..slots)
                        .map(|_| {
                            let d = (c % den as u64) as i64;
                            c /= den as u64;
                            d
                        })
                        .collect::<Vec<i64>>()
                        .into_iter()
                        .rev()
                        .collect()
                })
                .collect();
            all.sort_by_key(|c| (c.iter().filter(|&&x| x != 0).count(), c.clone()));
            all
        } else {
            report.complete = false;
            (0..params.budget)
                .map(|_| (0..slots).map(|_| rng.gen_range(0..den)).collect())
                .collect()
        };
        let mut result = HeightResult {
            height,
            extension: b.invariant_factors().to_vec(),
            candidates: total.unwrap_or(u64::MAX),
            examined: 0,
            certified: 0,
            best: 0.0,
            exhaustive,
        };
        for code in codes {
            result.examined += 1;
            let terms: Vec<(Vec<usize>, Phase)> = indices
                .iter()
                .zip(&code)
                .filter(|(_, &c)| c != 0)
                .map(|(r, &c)| (r.clone(), Phase::new(c, den)))
                .collect();
            let phases = coefficient_phases(&b, &terms);
            let phi = GroupFunction::from_phases(b.clone(), phases)?;
            if !is_phase_polynomial(&phi, params.k, limits)?.holds {
                continue;
            }
            result.certified += 1;
            let corr = correlation(&lifted, &phi)?;
            if corr.norm() > result.best + 1e-12 {
                result.best = corr.norm();
            }
            let better = report
                .best
                .as_ref()
                .is_none_or(|c| corr.norm() > c.correlation_abs + 1e-12);
            if better {
                // recompute from scratch before recording
                let again = correlation(&lift_function(f, &ext)?, &phi)?;
                report.best = Some(Candidate {
                    height,
                    extension: b.invariant_factors().to_vec(),
                    coeffs: terms
                        .iter()
                        .map(|(r, t)| (r.clone(), t.to_string()))
                        .collect(),
                    phases: phi
                        .phases()
                        .unwrap()
                        .iter()
                        .map(|p| p.to_string())
                        .collect(),
                    correlation_re: again.re,
                    correlation_im: again.im,
                    correlation_abs: again.norm(),
                });
            }
        }
        report.heights.push(result);
        if report
            .best
            .as_ref()
            .is_some_and(|c| c.correlation_abs >= 1.0 - 1e-9)
        {
            break;
        }
    }
    report.clears_delta = report
        .best
        .as_ref()
        .is_some_and(|c| c.correlation_abs >= params.delta);
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TzReport {
    pub p: u64,
    pub k: usize,
    /// `k ≤ p - 1`.
    pub precondition: bool,
    pub holds: bool,
    /// A window point `x` and coordinate `j` with `φ(x + p e_j) ≠ φ(x)`.
    pub witness: Option<(Vec<i64>, usize)>,
}

/// Whether `x ↦ exp(2πi/p · Σ_r c_r Π binom(x_j, r_j))`, with every term of
/// total degree `k`, is invariant under shifting any coordinate by `p` on
/// `[-radius, radius]^d`.
pub fn tz_residue_check(terms: &PolyMap, p: u64, radius: i64) -> Result<TzReport> {
    let target = terms.target();
    if target.cyclic_orders() != [p] {
        return Err(Error::invalid(format!("coefficients must live in Z_{p}")));
    }
    let degrees: Vec<usize> = terms.coeffs().keys().map(|r| r.iter().sum()).collect();
    let k = degrees.iter().copied().max().unwrap_or(0);
    if degrees.iter().any(|&d| d != k) {
        return Err(Error::invalid("every term must have the same total degree"));
    }
    let d = terms.arity();
    let side = (2 * radius + 1) as usize;
    let mut report = TzReport {
        p,
        k,
        precondition: k as u64 <= p.saturating_sub(1),
        holds: true,
        witness: None,
    };
    for code in 0..side.pow(d as u32) {
        let x: Vec<i64> = (0..d)
            .map(|j| (code / side.pow(j as u32) % side) as i64 - radius)
            .collect();
        let here = terms.eval(&x);
        for j in 0..d {
            let mut y = x.clone();
            y[j] += p as i64;
            if terms.eval(&y) != here {
                report.holds = false;
                report.witness = Some((x, j));
                return Ok(report);
            }
        }
    }
    Ok(report)
}

/// Least `m ≥ 1` with `φ^m = 1`.
pub fn phase_order(phi: &GroupFunction) -> Result<u64> {
    Ok(phi
        .require_phases()?
        .iter()
        .fold(1u64, |acc, p| acc.lcm(&p.order())))
}
