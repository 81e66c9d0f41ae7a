//! Exact arithmetic in finite abelian groups `Z_{n_1} × … × Z_{n_r}`.
//!
//! Elements are residue vectors; every operation reduces componentwise. Each
//! group also carries its invariant-factor normal form together with explicit
//! generators realizing `⊕ Z_{d_t} ≅ G` inside the given presentation.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase::Phase;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Element(pub Vec<u64>);

impl Element {
    pub fn coords(&self) -> &[u64] {
        &self.0
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinAbGroup {
    cyclic_orders: Vec<u64>,
    invariant_factors: Vec<u64>,
    /// `invariant_generators[t]` has order `invariant_factors[t]`.
    invariant_generators: Vec<Element>,
}

impl fmt::Debug for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.cyclic_orders.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.cyclic_orders.iter().map(|n| format!("Z{n}")).collect();
        write!(f, "{}", parts.join("×"))
    }
}

/// Build a group from a list of cyclic orders; rejects orders below 1.
pub fn make_group(orders: &[i64]) -> Result<FinAbGroup> {
    let mut out = Vec::with_capacity(orders.len());
    for &n in orders {
        if n < 1 {
            return Err(Error::invalid(format!(
                "cyclic order {n} must be at least 1"
            )));
        }
        out.push(n as u64);
    }
    FinAbGroup::new(&out)
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

impl FinAbGroup {
    pub fn new(orders: &[u64]) -> Result<Self> {
        if orders.contains(&0) {
            return Err(Error::invalid("cyclic orders must be at least 1"));
        }
        let total: u128 = orders.iter().map(|&n| n as u128).product();
        if total > u64::MAX as u128 / 4 {
            return Err(Error::invalid("group order overflows"));
        }

        // prime -> [(exponent, cyclic factor)] sorted by decreasing exponent
        let mut by_prime: BTreeMap<u64, Vec<(u32, usize)>> = BTreeMap::new();
        for (j, &n) in orders.iter().enumerate() {
            for (p, e) in factorize(n) {
                by_prime.entry(p).or_default().push((e, j));
            }
        }
        for v in by_prime.values_mut() {
            v.sort_by(|a, b| b.0.cmp(&a.0).then(b.1.cmp(&a.1)));
        }
        let rank = by_prime.values().map(Vec::len).max().unwrap_or(0);

        // t = 0 is the largest invariant factor here; reversed below
        let mut factors = Vec::with_capacity(rank);
        let mut gens = Vec::with_capacity(rank);
        for t in 0..rank {
            let mut d = 1u64;
            let mut g = vec![0u64; orders.len()];
            for (&p, list) in &by_prime {
                if let Some(&(e, j)) = list.get(t) {
                    let pe = p.pow(e);
                    d *= pe;
                    g[j] = (g[j] + orders[j] / pe) % orders[j];
                }
            }
            factors.push(d);
            gens.push(Element(g));
        }
        factors.reverse();
        gens.reverse();

        Ok(FinAbGroup {
            cyclic_orders: orders.to_vec(),
            invariant_factors: factors,
            invariant_generators: gens,
        })
    }

    pub fn cyclic(n: u64) -> Self {
        FinAbGroup::new(&[n]).expect("cyclic order must be positive")
    }

    pub fn trivial() -> Self {
        FinAbGroup::new(&[]).expect("empty presentation is valid")
    }

    pub fn cyclic_orders(&self) -> &[u64] {
        &self.cyclic_orders
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    pub fn invariant_generators(&self) -> &[Element] {
        &self.invariant_generators
    }

    pub fn order(&self) -> u64 {
        self.cyclic_orders.iter().product()
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    pub fn exponent(&self) -> u64 {
        self.invariant_factors.last().copied().unwrap_or(1)
    }

    pub fn num_coords(&self) -> usize {
        self.cyclic_orders.len()
    }

    pub fn is_isomorphic(&self, other: &FinAbGroup) -> bool {
        self.invariant_factors == other.invariant_factors
    }

    pub fn zero(&self) -> Element {
        Element(vec![0; self.cyclic_orders.len()])
    }

    pub fn contains(&self, x: &Element) -> bool {
        x.0.len() == self.cyclic_orders.len()
            && x.0.iter().zip(&self.cyclic_orders).all(|(a, n)| a < n)
    }

    /// Reduce arbitrary integer coordinates into the group.
    pub fn reduce(&self, coords: &[i64]) -> Element {
        debug_assert_eq!(coords.len(), self.cyclic_orders.len());
        Element(
            coords
                .iter()
                .zip(&self.cyclic_orders)
                .map(|(&a, &n)| a.rem_euclid(n as i64) as u64)
                .collect(),
        )
    }

    pub fn add(&self, x: &Element, y: &Element) -> Element {
        Element(
            x.0.iter()
                .zip(&y.0)
                .zip(&self.cyclic_orders)
                .map(|((a, b), n)| (a + b) % n)
                .collect(),
        )
    }

    pub fn neg(&self, x: &Element) -> Element {
        Element(
            x.0.iter()
                .zip(&self.cyclic_orders)
                .map(|(a, n)| (n - a) % n)
                .collect(),
        )
    }

    pub fn sub(&self, x: &Element, y: &Element) -> Element {
        self.add(x, &self.neg(y))
    }

    pub fn scale(&self, x: &Element, k: i64) -> Element {
        Element(
            x.0.iter()
                .zip(&self.cyclic_orders)
                .map(|(&a, &n)| ((a as i128 * k as i128).rem_euclid(n as i128)) as u64)
                .collect(),
        )
    }

    pub fn element_order(&self, x: &Element) -> u64 {
        x.0.iter()
            .zip(&self.cyclic_orders)
            .fold(1u64, |acc, (&a, &n)| acc.lcm(&(n / a.gcd(&n))))
    }

    /// Mixed-radix index; coordinate 0 is most significant.
    pub fn index_of(&self, x: &Element) -> usize {
        x.0.iter()
            .zip(&self.cyclic_orders)
            .fold(0usize, |acc, (&a, &n)| acc * n as usize + a as usize)
    }

    pub fn element_at(&self, mut index: usize) -> Element {
        let mut coords = vec![0u64; self.cyclic_orders.len()];
        for (c, &n) in coords.iter_mut().zip(&self.cyclic_orders).rev() {
            *c = (index % n as usize) as u64;
            index /= n as usize;
        }
        Element(coords)
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.order() as usize).map(move |i| self.element_at(i))
    }

    /// `Σ_t coeffs[t] · g_t` over the invariant generators.
    pub fn from_invariant_coeffs(&self, coeffs: &[i64]) -> Element {
        let mut acc = self.zero();
        for (g, &c) in self.invariant_generators.iter().zip(coeffs) {
            acc = self.add(&acc, &self.scale(g, c));
        }
        acc
    }
}

/// A homomorphism fixed by the images of the cyclic generators of `source`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homomorphism {
    source: FinAbGroup,
    target: FinAbGroup,
    images: Vec<Element>,
}

impl Homomorphism {
    pub fn new(source: FinAbGroup, target: FinAbGroup, images: Vec<Element>) -> Result<Self> {
        if images.len() != source.num_coords() {
            return Err(Error::invalid(
                "one image per source cyclic generator required",
            ));
        }
        for (j, img) in images.iter().enumerate() {
            if !target.contains(img) {
                return Err(Error::invalid(format!(
                    "image {j} is not an element of the target"
                )));
            }
            let n = source.cyclic_orders()[j];
            if !n.is_multiple_of(target.element_order(img)) {
                return Err(Error::invalid(format!(
                    "image {img:?} of generator {j} has order not dividing {n}"
                )));
            }
        }
        Ok(Homomorphism {
            source,
            target,
            images,
        })
    }

    pub fn source(&self) -> &FinAbGroup {
        &self.source
    }

    pub fn target(&self) -> &FinAbGroup {
        &self.target
    }

    pub fn images(&self) -> &[Element] {
        &self.images
    }

    pub fn apply(&self, x: &Element) -> Element {
        let mut acc = self.target.zero();
        for (img, &c) in self.images.iter().zip(&x.0) {
            acc = self.target.add(&acc, &self.target.scale(img, c as i64));
        }
        acc
    }

    pub fn image_size(&self) -> usize {
        let mut seen = vec![false; self.target.order() as usize];
        for x in self.source.elements() {
            seen[self.target.index_of(&self.apply(&x))] = true;
        }
        seen.iter().filter(|&&b| b).count()
    }

    pub fn is_surjective(&self) -> bool {
        self.image_size() as u64 == self.target.order()
    }
}

/// A linear character, stored as one numerator per cyclic factor: the phase
/// at generator `j` is `coeffs[j] / n_j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Character {
    group: FinAbGroup,
    coeffs: Vec<u64>,
}

impl Character {
    pub fn new(group: FinAbGroup, coeffs: Vec<u64>) -> Result<Self> {
        if coeffs.len() != group.num_coords() {
            return Err(Error::invalid(
                "one phase coefficient per cyclic factor required",
            ));
        }
        let coeffs = coeffs
            .iter()
            .zip(group.cyclic_orders())
            .map(|(c, n)| c % n)
            .collect();
        Ok(Character { group, coeffs })
    }

    pub fn trivial(group: FinAbGroup) -> Self {
        let coeffs = vec![0; group.num_coords()];
        Character { group, coeffs }
    }

    pub fn group(&self) -> &FinAbGroup {
        &self.group
    }

    pub fn phase_coeffs(&self) -> Vec<Phase> {
        self.coeffs
            .iter()
            .zip(self.group.cyclic_orders())
            .map(|(&c, &n)| Phase::new(c as i64, n as i64))
            .collect()
    }

    pub fn eval(&self, x: &Element) -> Phase {
        self.coeffs
            .iter()
            .zip(&x.0)
            .zip(self.group.cyclic_orders())
            .fold(Phase::ZERO, |acc, ((&c, &a), &n)| {
                acc + Phase::new(((c as u128 * a as u128) % n as u128) as i64, n as i64)
            })
    }

    pub fn order(&self) -> u64 {
        self.phase_coeffs()
            .iter()
            .fold(1u64, |acc, p| acc.lcm(&p.order()))
    }
}

/// All `|G|` characters, in index order of their coefficient vectors.
pub fn characters(g: &FinAbGroup) -> Vec<Character> {
    g.elements()
        .map(|e| Character {
            group: g.clone(),
            coeffs: e.0,
        })
        .collect()
}

/// `0 → C → B → A → 0` where `B = ⊕ Z_{b_j}` maps generator `j` to an element
/// `h_j ∈ A` of order `a_j`, the `h_j` forming a basis of `A`. The kernel is
/// then `⊕ a_j Z_{b_j} ≅ ⊕ Z_{b_j / a_j}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupExtension {
    total: FinAbGroup,
    base: FinAbGroup,
    proj: Homomorphism,
    kernel: FinAbGroup,
    kernel_embed: Homomorphism,
}

impl GroupExtension {
    /// `total` and `base` given by cyclic orders of equal length with
    /// `base[j] | total[j]`; the projection reduces each coordinate.
    pub fn componentwise(total: &FinAbGroup, base: &FinAbGroup) -> Result<Self> {
        if total.num_coords() != base.num_coords() {
            return Err(Error::invalid(
                "componentwise extension needs equally many factors",
            ));
        }
        let images = (0..base.num_coords())
            .map(|j| {
                let mut e = base.zero();
                e.0[j] = 1 % base.cyclic_orders()[j];
                e
            })
            .collect();
        Self::from_basis(total.clone(), base.clone(), images)
    }

    fn from_basis(total: FinAbGroup, base: FinAbGroup, images: Vec<Element>) -> Result<Self> {
        let proj = Homomorphism::new(total.clone(), base.clone(), images)?;
        let orders: Vec<u64> = proj
            .images()
            .iter()
            .map(|h| base.element_order(h))
            .collect();
        if orders.iter().product::<u64>() != base.order() || !proj.is_surjective() {
            return Err(Error::invalid(
                "projection images do not form a basis of the base group",
            ));
        }
        let kernel = FinAbGroup::new(
            &total
                .cyclic_orders()
                .iter()
                .zip(&orders)
                .map(|(b, a)| b / a)
                .collect::<Vec<_>>(),
        )?;
        let embed_images = orders
            .iter()
            .enumerate()
            .map(|(j, &a)| {
                let mut e = total.zero();
                e.0[j] = a % total.cyclic_orders()[j];
                e
            })
            .collect();
        let kernel_embed = Homomorphism::new(kernel.clone(), total.clone(), embed_images)?;
        Ok(GroupExtension {
            total,
            base,
            proj,
            kernel,
            kernel_embed,
        })
    }

    pub fn total(&self) -> &FinAbGroup {
        &self.total
    }

    pub fn base(&self) -> &FinAbGroup {
        &self.base
    }

    pub fn proj(&self) -> &Homomorphism {
        &self.proj
    }

    pub fn kernel(&self) -> &FinAbGroup {
        &self.kernel
    }

    pub fn kernel_embed(&self) -> &Homomorphism {
        &self.kernel_embed
    }

    pub fn kernel_order(&self) -> u64 {
        self.kernel.order()
    }

    pub fn project(&self, b: &Element) -> Element {
        self.proj.apply(b)
    }
}

/// Canonical height-`i` extension: each invariant factor `Z_{d}` of `A`
/// becomes `Z_{e^{i-1} d}`, where `e` is the exponent of `A`.
pub fn height_extension(a: &FinAbGroup, i: u32) -> Result<GroupExtension> {
    if i < 1 {
        return Err(Error::invalid("extension height must be at least 1"));
    }
    let e = a.exponent();
    let lift = e
        .checked_pow(i - 1)
        .ok_or_else(|| Error::invalid("extension height overflows"))?;
    let orders: Vec<u64> = a.invariant_factors().iter().map(|d| d * lift).collect();
    let total = FinAbGroup::new(&orders)?;
    GroupExtension::from_basis(total, a.clone(), a.invariant_generators().to_vec())
}

/// `{ b ∈ B : τ(b) = a }`, in index order.
pub fn fiber(ext: &GroupExtension, a: &Element) -> Result<Vec<Element>> {
    if !ext.base.contains(a) {
        return Err(Error::invalid("fiber point is not in the base group"));
    }
    Ok(ext
        .total
        .elements()
        .filter(|b| &ext.project(b) == a)
        .collect())
}

/// An isomorphism `from → to` matching invariant generators, as element
/// index tables; `None` when the groups are not isomorphic.
pub fn invariant_isomorphism(from: &FinAbGroup, to: &FinAbGroup) -> Option<Vec<usize>> {
    if !from.is_isomorphic(to) {
        return None;
    }
    let factors = from.invariant_factors().to_vec();
    let mut table = vec![usize::MAX; from.order() as usize];
    let mut coeffs = vec![0i64; factors.len()];
    loop {
        let x = from.index_of(&from.from_invariant_coeffs(&coeffs));
        table[x] = to.index_of(&to.from_invariant_coeffs(&coeffs));
        let mut t = 0;
        loop {
            if t == factors.len() {
                return Some(table);
            }
            coeffs[t] += 1;
            if coeffs[t] < factors[t] as i64 {
                break;
            }
            coeffs[t] = 0;
            t += 1;
        }
    }
}

/// Identify an abstract finite abelian group given by its addition table.
///
/// Returns the group in invariant-factor presentation and `iso[g] = t`
/// mapping each element index `g` of that group to the table index `t`.
pub fn identify_abelian(
    n: usize,
    zero: usize,
    op: &dyn Fn(usize, usize) -> usize,
) -> Result<(FinAbGroup, Vec<usize>)> {
    for a in 0..n {
        if op(a, zero) != a {
            return Err(Error::structural("table has no neutral element", vec![a]));
        }
        for b in 0..a {
            if op(a, b) != op(b, a) {
                return Err(Error::structural("table is not commutative", vec![a, b]));
            }
        }
    }
    let order_of = |x: usize| -> u64 {
        let mut acc = x;
        let mut k = 1;
        while acc != zero {
            acc = op(acc, x);
            k += 1;
            if k > n as u64 {
                return 0;
            }
        }
        k
    };
    let orders: Vec<u64> = (0..n).map(order_of).collect();
    if orders.contains(&0) {
        return Err(Error::structural("table element of infinite order", vec![]));
    }
    let mul = |x: usize, k: u64| -> usize {
        let mut acc = zero;
        for _ in 0..k {
            acc = op(acc, x);
        }
        acc
    };

    // per prime: basis of the Sylow subgroup as (element, exponent)
    let mut prime_bases: Vec<(u64, Vec<(usize, u32)>)> = Vec::new();
    for (p, _) in factorize(n as u64) {
        let sylow: Vec<usize> = (0..n)
            .filter(|&x| {
                let mut o = orders[x];
                while o.is_multiple_of(p) {
                    o /= p;
                }
                o == 1
            })
            .collect();
        let mut span = vec![false; n];
        span[zero] = true;
        let mut span_list = vec![zero];
        let mut basis: Vec<(usize, u32)> = Vec::new();
        while span_list.len() < sylow.len() {
            // element of maximal order modulo the current span
            let mut best: Option<(usize, u32)> = None;
            for &x in &sylow {
                if span[x] {
                    continue;
                }
                let mut m = 0u32;
                let mut y = x;
                while !span[y] {
                    y = mul(y, p);
                    m += 1;
                }
                if best.is_none_or(|(_, bm)| m > bm) {
                    best = Some((x, m));
                }
            }
            let (x, m) = best.expect("sylow subgroup larger than span");
            let pm = p.pow(m);
            let target = mul(x, pm);
            let h = span_list
                .iter()
                .copied()
                .find(|&h| mul(h, pm) == target)
                .ok_or_else(|| Error::structural("no complement adjustment exists", vec![x]))?;
            let neg_h = mul(h, orders[h] - 1);
            let g = op(x, neg_h);
            basis.push((g, m));
            let mut new_list = Vec::with_capacity(span_list.len() * pm as usize);
            let mut mult = zero;
            for _ in 0..pm {
                for &s in &span_list {
                    let v = op(s, mult);
                    if !span[v] {
                        span[v] = true;
                        new_list.push(v);
                    }
                }
                mult = op(mult, g);
            }
            span_list.extend(new_list);
        }
        basis.sort_by_key(|e| std::cmp::Reverse(e.1));
        prime_bases.push((p, basis));
    }

    let rank = prime_bases.iter().map(|(_, b)| b.len()).max().unwrap_or(0);
    let mut factors = Vec::with_capacity(rank);
    let mut gens = Vec::with_capacity(rank);
    for t in 0..rank {
        let mut d = 1u64;
        let mut g = zero;
        for (p, basis) in &prime_bases {
            if let Some(&(x, m)) = basis.get(t) {
                d *= p.pow(m);
                g = op(g, x);
            }
        }
        factors.push(d);
        gens.push(g);
    }
    factors.reverse();
    gens.reverse();
    let group = FinAbGroup::new(&factors)?;
    let mut iso = vec![usize::MAX; n];
    let mut hit = vec![false; n];
    for (idx, e) in group.elements().enumerate() {
        let mut acc = zero;
        for (&g, &c) in gens.iter().zip(&e.0) {
            acc = op(acc, mul(g, c));
        }
        if hit[acc] {
            return Err(Error::structural(
                "identified generators are dependent",
                vec![acc],
            ));
        }
        hit[acc] = true;
        iso[idx] = acc;
    }
    Ok((group, iso))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn snf_oracle(orders: &[u64]) -> Vec<u64> {
        // repeatedly replace (a, b) by (gcd, lcm) until the chain divides
        let mut d: Vec<u64> = orders.to_vec();
        loop {
            let mut changed = false;
            for i in 0..d.len() {
                for j in i + 1..d.len() {
                    let (g, l) = (d[i].gcd(&d[j]), d[i].lcm(&d[j]));
                    if (g, l) != (d[i], d[j]) {
                        d[i] = g;
                        d[j] = l;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        d.into_iter().filter(|&x| x > 1).collect()
    }

    #[test]
    fn make_group_examples() {
        let g = make_group(&[2, 2]).unwrap();
        assert_eq!((g.rank(), g.exponent()), (2, 2));
        let g = make_group(&[2, 4]).unwrap();
        assert_eq!(g.invariant_factors(), &[2, 4]);
        let g = make_group(&[6, 4]).unwrap();
        assert_eq!(g.invariant_factors(), &[2, 12]);
        assert_eq!((g.rank(), g.exponent()), (2, 12));
        assert!(make_group(&[0]).is_err());
        assert!(make_group(&[3, -1]).is_err());
    }

    #[test]
    fn invariant_factors_match_gcd_lcm_oracle() {
        let cases: &[&[u64]] = &[
            &[6, 4],
            &[12, 18, 5],
            &[2, 3, 4, 5, 6],
            &[1, 1],
            &[8, 12, 20],
            &[9, 27, 6],
        ];
        for orders in cases {
            let g = FinAbGroup::new(orders).unwrap();
            assert_eq!(
                g.invariant_factors(),
                snf_oracle(orders).as_slice(),
                "{orders:?}"
            );
            assert_eq!(g.invariant_factors().iter().product::<u64>(), g.order());
            for (gen, &d) in g.invariant_generators().iter().zip(g.invariant_factors()) {
                assert_eq!(g.element_order(gen), d);
            }
        }
    }

    #[test]
    fn invariant_generators_span() {
        let g = FinAbGroup::new(&[6, 4]).unwrap();
        let mut seen = std::collections::HashSet::new();
        for a in 0..2 {
            for b in 0..12 {
                seen.insert(g.from_invariant_coeffs(&[a, b]));
            }
        }
        assert_eq!(seen.len() as u64, g.order());
    }

    #[test]
    fn characters_examples() {
        let z2 = FinAbGroup::cyclic(2);
        let chars = characters(&z2);
        assert_eq!(chars.len(), 2);
        assert_eq!(chars[1].eval(&Element(vec![1])), Phase::new(1, 2));
        assert_eq!(characters(&make_group(&[2, 4]).unwrap()).len(), 8);
        let z3 = FinAbGroup::cyclic(3);
        let chi = Character::new(z3, vec![1]).unwrap();
        assert_eq!(chi.eval(&Element(vec![2])), Phase::new(2, 3));
    }

    #[test]
    fn character_orthogonality_exact() {
        for orders in [
            &[2u64][..],
            &[4],
            &[2, 2],
            &[2, 4],
            &[3, 3],
            &[8],
            &[2, 2, 2],
        ] {
            let g = FinAbGroup::new(orders).unwrap();
            let chars = characters(&g);
            for (i, a) in chars.iter().enumerate() {
                for b in &chars[i + 1..] {
                    // phases of a·conj(b) are equidistributed over a nontrivial subgroup
                    let mut hist: BTreeMap<Phase, usize> = BTreeMap::new();
                    for x in g.elements() {
                        *hist.entry(a.eval(&x) - b.eval(&x)).or_default() += 1;
                    }
                    let counts: Vec<usize> = hist.values().copied().collect();
                    assert!(counts.len() > 1 && counts.iter().all(|&c| c == counts[0]));
                    let s: num_complex::Complex64 = g
                        .elements()
                        .map(|x| (a.eval(&x) - b.eval(&x)).to_complex())
                        .sum();
                    assert!(s.norm() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn height_extension_examples() {
        let ext = height_extension(&FinAbGroup::cyclic(2), 2).unwrap();
        assert_eq!(ext.total().cyclic_orders(), &[4]);
        assert_eq!(ext.project(&Element(vec![3])), Element(vec![1]));
        assert_eq!(ext.kernel_order(), 2);

        let ext = height_extension(&make_group(&[2, 2]).unwrap(), 2).unwrap();
        assert_eq!(ext.total().cyclic_orders(), &[4, 4]);
        assert_eq!(ext.project(&Element(vec![3, 2])), Element(vec![1, 0]));

        let a = make_group(&[2, 4]).unwrap();
        let ext = height_extension(&a, 2).unwrap();
        assert_eq!(ext.total().cyclic_orders(), &[8, 16]);
        assert_eq!(ext.total().rank(), 2);
        assert_eq!(16 % ext.total().exponent(), 0);
        assert!(ext.proj().is_surjective());
        assert_eq!(ext.kernel_order(), 4u64.pow(2));
    }

    #[test]
    fn height_extension_on_non_normal_presentation() {
        let a = make_group(&[6, 4]).unwrap();
        let ext = height_extension(&a, 2).unwrap();
        assert_eq!(ext.total().rank(), a.rank());
        assert_eq!(144 % ext.total().exponent(), 0);
        assert!(ext.proj().is_surjective());
        assert_eq!(ext.total().order(), a.order() * ext.kernel_order());
        // rank-1 group presented with two factors
        let a = make_group(&[2, 3]).unwrap();
        let ext = height_extension(&a, 3).unwrap();
        assert_eq!(ext.total().rank(), 1);
        assert_eq!(ext.kernel_order(), 36);
    }

    #[test]
    fn fibers_partition_total() {
        let ext = height_extension(&FinAbGroup::cyclic(2), 2).unwrap();
        assert_eq!(
            fiber(&ext, &Element(vec![0])).unwrap(),
            vec![Element(vec![0]), Element(vec![2])]
        );
        assert_eq!(
            fiber(&ext, &Element(vec![1])).unwrap(),
            vec![Element(vec![1]), Element(vec![3])]
        );
        let a = make_group(&[2, 2]).unwrap();
        let ext = height_extension(&a, 2).unwrap();
        let f = fiber(&ext, &Element(vec![1, 0])).unwrap();
        assert_eq!(f.len(), 4);
        for x in &f {
            for y in &f {
                let d = ext.total().sub(x, y);
                assert_eq!(ext.project(&d), a.zero());
            }
        }
        let mut count = 0;
        for x in a.elements() {
            count += fiber(&ext, &x).unwrap().len();
        }
        assert_eq!(count as u64, ext.total().order());
    }

    #[test]
    fn homomorphism_well_definedness() {
        let z4 = FinAbGroup::cyclic(4);
        let z2 = FinAbGroup::cyclic(2);
        assert!(Homomorphism::new(z4.clone(), z2.clone(), vec![Element(vec![1])]).is_ok());
        assert!(Homomorphism::new(z2, z4, vec![Element(vec![1])]).is_err());
    }

    #[test]
    fn identify_cyclic_tables() {
        // Z_2 × Z_6 written additively as a table on 12 points
        let g = make_group(&[2, 6]).unwrap();
        let op = |a: usize, b: usize| g.index_of(&g.add(&g.element_at(a), &g.element_at(b)));
        let (h, iso) = identify_abelian(12, 0, &op).unwrap();
        assert_eq!(h.invariant_factors(), &[2, 6]);
        for x in h.elements() {
            for y in h.elements() {
                let s = h.index_of(&h.add(&x, &y));
                assert_eq!(iso[s], op(iso[h.index_of(&x)], iso[h.index_of(&y)]));
            }
        }
    }
}
