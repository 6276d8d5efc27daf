//! Finite groups as explicit multiplication tables.
//!
//! Groups are built by breadth-first closure of a set of permutation
//! generators: index 0 is the identity and new elements are numbered in
//! discovery order (right multiplication by the generators, in the order
//! given). Element indexing is therefore canonical and all downstream
//! enumeration output is reproducible bit for bit.

use std::collections::HashMap;

use crate::{Error, Result};

/// Default cap on the order of a generated group.
pub const DEFAULT_ORDER_CAP: usize = 256;

/// A permutation of `{0, .., degree-1}` stored as its image vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation((0..degree).collect())
    }

    /// Builds a permutation from its image vector, checking bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &img in &images {
            if img >= n || seen[img] {
                return Err(Error::MalformedPermutation(format!(
                    "image vector {images:?} is not a bijection"
                )));
            }
            seen[img] = true;
        }
        Ok(Permutation(images))
    }

    /// Builds a permutation of `{1, .., degree}` from disjoint cycles of
    /// 1-based points, e.g. `[[1,2],[3,4]]`.
    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<usize> = (0..degree).collect();
        let mut used = vec![false; degree];
        for cycle in cycles {
            if cycle.is_empty() {
                return Err(Error::MalformedPermutation("empty cycle".into()));
            }
            for &p in cycle {
                if p == 0 || p > degree {
                    return Err(Error::MalformedPermutation(format!(
                        "point {p} outside 1..={degree}"
                    )));
                }
                if used[p - 1] {
                    return Err(Error::MalformedPermutation(format!(
                        "point {p} repeated across cycles"
                    )));
                }
                used[p - 1] = true;
            }
            for i in 0..cycle.len() {
                images[cycle[i] - 1] = cycle[(i + 1) % cycle.len()] - 1;
            }
        }
        Ok(Permutation(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, point: usize) -> usize {
        self.0[point]
    }

    /// `self` followed by `other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(self.0.iter().map(|&i| other.0[i]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.0.len()];
        for (i, &img) in self.0.iter().enumerate() {
            images[img] = i;
        }
        Permutation(images)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &img)| i == img)
    }

    /// Nontrivial cycles on 1-based points, each rotated to start at its
    /// minimal point, sorted by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.0[start] == start {
                continue;
            }
            let mut cycle = vec![start + 1];
            seen[start] = true;
            let mut p = self.0[start];
            while p != start {
                seen[p] = true;
                cycle.push(p + 1);
                p = self.0[p];
            }
            out.push(cycle);
        }
        out
    }
}

/// A generating set of permutations, the concrete source for [`GroupTable`].
#[derive(Debug, Clone)]
pub struct PermutationGenerators {
    pub degree: usize,
    pub perms: Vec<Permutation>,
}

impl PermutationGenerators {
    pub fn new(degree: usize, perms: Vec<Permutation>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::MalformedPermutation("degree must be positive".into()));
        }
        for p in &perms {
            if p.degree() != degree {
                return Err(Error::MalformedPermutation(format!(
                    "permutation degree {} does not match {degree}",
                    p.degree()
                )));
            }
        }
        Ok(PermutationGenerators { degree, perms })
    }

    /// Generators given as lists of disjoint cycles on 1-based points.
    pub fn from_cycle_lists(degree: usize, gens: &[Vec<Vec<usize>>]) -> Result<Self> {
        let perms = gens
            .iter()
            .map(|cycles| Permutation::from_cycles(degree, cycles))
            .collect::<Result<Vec<_>>>()?;
        Self::new(degree, perms)
    }
}

/// A finite group as an indexed multiplication table.
///
/// Identity is element 0. `mul`, `inverse`, element orders and conjugacy
/// classes are all precomputed; the table is immutable afterwards and safe to
/// share across threads.
#[derive(Debug, Clone)]
pub struct GroupTable {
    name: String,
    order: usize,
    mul: Vec<u16>,
    inverse: Vec<u16>,
    generators: Vec<usize>,
    element_orders: Vec<u32>,
    class_of: Vec<u16>,
    classes: Vec<Vec<usize>>,
}

/// Identity element index of every [`GroupTable`].
pub const IDENTITY: usize = 0;

impl GroupTable {
    /// Breadth-first closure of the generators, default order cap.
    pub fn from_permutations(name: &str, gens: &PermutationGenerators) -> Result<Self> {
        Self::from_permutations_capped(name, gens, DEFAULT_ORDER_CAP)
    }

    pub fn from_permutations_capped(
        name: &str,
        gens: &PermutationGenerators,
        cap: usize,
    ) -> Result<Self> {
        let identity = Permutation::identity(gens.degree);
        let mut elems: Vec<Permutation> = vec![identity.clone()];
        let mut index: HashMap<Permutation, usize> = HashMap::new();
        index.insert(identity, 0);

        let mut i = 0;
        while i < elems.len() {
            for g in &gens.perms {
                let p = elems[i].compose(g);
                if !index.contains_key(&p) {
                    if elems.len() >= cap {
                        return Err(Error::GroupCapExceeded { cap });
                    }
                    index.insert(p.clone(), elems.len());
                    elems.push(p);
                }
            }
            i += 1;
        }

        let n = elems.len();
        let mut mul = vec![0u16; n * n];
        for a in 0..n {
            for b in 0..n {
                mul[a * n + b] = index[&elems[a].compose(&elems[b])] as u16;
            }
        }
        let inverse: Vec<u16> = elems.iter().map(|p| index[&p.inverse()] as u16).collect();
        let generators: Vec<usize> = gens.perms.iter().map(|p| index[p]).collect();

        let mut table = GroupTable {
            name: name.to_string(),
            order: n,
            mul,
            inverse,
            generators,
            element_orders: Vec::new(),
            class_of: Vec::new(),
            classes: Vec::new(),
        };
        table.element_orders = (0..n).map(|g| table.compute_order(g)).collect();
        table.compute_classes();
        Ok(table)
    }

    fn compute_order(&self, g: usize) -> u32 {
        let mut x = g;
        let mut k = 1;
        while x != IDENTITY {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    fn compute_classes(&mut self) {
        let n = self.order;
        let mut class_of = vec![u16::MAX; n];
        let mut classes = Vec::new();
        for x in 0..n {
            if class_of[x] != u16::MAX {
                continue;
            }
            let id = classes.len() as u16;
            let mut members = Vec::new();
            for h in 0..n {
                let c = self.conj(h, x);
                if class_of[c] == u16::MAX {
                    class_of[c] = id;
                    members.push(c);
                }
            }
            members.sort_unstable();
            classes.push(members);
        }
        self.class_of = class_of;
        self.classes = classes;
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    /// `h * x * h^-1`.
    #[inline]
    pub fn conj(&self, h: usize, x: usize) -> usize {
        self.mul(self.mul(h, x), self.inv(h))
    }

    /// Smallest `k >= 1` with `g^k = identity`.
    pub fn element_order(&self, g: usize) -> u32 {
        self.element_orders[g]
    }

    pub fn power(&self, g: usize, k: u32) -> usize {
        let mut x = IDENTITY;
        for _ in 0..k {
            x = self.mul(x, g);
        }
        x
    }

    pub fn conjugacy_class_of(&self, g: usize) -> &[usize] {
        &self.classes[self.class_of[g] as usize]
    }

    pub fn conjugacy_classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    /// Elements of the subgroup generated by `seed`, sorted.
    pub fn subgroup_closure(&self, seed: &[usize]) -> Vec<usize> {
        let mut mask = vec![false; self.order];
        let mut out = vec![IDENTITY];
        mask[IDENTITY] = true;
        let mut i = 0;
        while i < out.len() {
            for &s in seed {
                let y = self.mul(out[i], s);
                if !mask[y] {
                    mask[y] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }

    pub fn generates(&self, seed: &[usize]) -> bool {
        self.subgroup_closure(seed).len() == self.order
    }

    /// Exhaustive associativity, identity, inverse and closure checks.
    pub fn check_table(&self) -> Result<()> {
        let n = self.order;
        for a in 0..n {
            if self.mul(IDENTITY, a) != a || self.mul(a, IDENTITY) != a {
                return Err(Error::InvariantViolation(format!(
                    "identity fails on element {a}"
                )));
            }
            if self.mul(a, self.inv(a)) != IDENTITY || self.mul(self.inv(a), a) != IDENTITY {
                return Err(Error::InvariantViolation(format!(
                    "inverse fails on element {a}"
                )));
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Err(Error::InvariantViolation(format!(
                            "associativity fails on ({a},{b},{c})"
                        )));
                    }
                }
            }
        }
        if !self.generates(&self.generators) {
            return Err(Error::InvariantViolation(
                "generators do not reach the whole table".into(),
            ));
        }
        Ok(())
    }

    /// Number of central elements.
    pub fn center_order(&self) -> usize {
        (0..self.order)
            .filter(|&x| (0..self.order).all(|h| self.mul(x, h) == self.mul(h, x)))
            .count()
    }

    /// The commutator subgroup, sorted.
    pub fn commutator_subgroup(&self) -> Vec<usize> {
        let n = self.order;
        let mut comms = Vec::new();
        let mut seen = vec![false; n];
        for a in 0..n {
            for b in 0..n {
                let c = self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)));
                if !seen[c] {
                    seen[c] = true;
                    comms.push(c);
                }
            }
        }
        self.subgroup_closure(&comms)
    }

    /// Invariant factors of the abelianization, ascending divisibility chain
    /// with trivial factors dropped (empty for perfect groups).
    pub fn abelian_invariants(&self) -> Vec<u64> {
        let n = self.order;
        let derived = self.commutator_subgroup();
        let mut in_derived = vec![false; n];
        for &d in &derived {
            in_derived[d] = true;
        }
        // Left-coset representatives and the element orders in the quotient.
        let mut rep_of = vec![usize::MAX; n];
        let mut orders = Vec::new();
        for x in 0..n {
            if rep_of[x] != usize::MAX {
                continue;
            }
            let mut members: Vec<usize> = derived.iter().map(|&d| self.mul(x, d)).collect();
            members.sort_unstable();
            let rep = members[0];
            for m in members {
                rep_of[m] = rep;
            }
            let mut k = 1u64;
            let mut p = x;
            while !in_derived[p] {
                p = self.mul(p, x);
                k += 1;
            }
            orders.push(k);
        }
        abelian_invariants_from_orders(&orders)
    }

    /// Order histogram as sorted `(order, count)` pairs.
    pub fn order_histogram(&self) -> Vec<(u32, usize)> {
        let mut hist: Vec<(u32, usize)> = Vec::new();
        let mut sorted = self.element_orders.clone();
        sorted.sort_unstable();
        for o in sorted {
            match hist.last_mut() {
                Some((last, count)) if *last == o => *count += 1,
                _ => hist.push((o, 1)),
            }
        }
        hist
    }
}

/// Invariant factors of a finite abelian group given the multiset of its
/// element orders. Counting argument: for each prime p, the number of
/// solutions of `x^(p^k) = 1` determines the partition of the p-part.
fn abelian_invariants_from_orders(orders: &[u64]) -> Vec<u64> {
    let m = orders.len() as u64;
    if m <= 1 {
        return Vec::new();
    }
    let mut primes = Vec::new();
    let mut rest = m;
    let mut p = 2;
    while p * p <= rest {
        if rest % p == 0 {
            primes.push(p);
            while rest % p == 0 {
                rest /= p;
            }
        }
        p += 1;
    }
    if rest > 1 {
        primes.push(rest);
    }

    // Per prime, the partition lambda_1 >= lambda_2 >= ... of the p-part.
    let mut per_prime: Vec<Vec<u32>> = Vec::new();
    for &p in &primes {
        let mut s_prev = 0u32;
        let mut lambda_counts: Vec<u32> = Vec::new(); // m_k = #{i : lambda_i >= k}
        let mut k = 0u32;
        loop {
            k += 1;
            let pk = p.pow(k);
            let count = orders.iter().filter(|&&o| pk % o == 0).count() as u64;
            let s_k = exact_log(count, p);
            if s_k == s_prev {
                break;
            }
            lambda_counts.push(s_k - s_prev);
            s_prev = s_k;
        }
        let parts = lambda_counts.first().copied().unwrap_or(0);
        let lambdas: Vec<u32> = (1..=parts)
            .map(|i| lambda_counts.iter().filter(|&&mk| mk >= i).count() as u32)
            .collect();
        per_prime.push(lambdas);
    }

    let width = per_prime.iter().map(|l| l.len()).max().unwrap_or(0);
    let mut factors = Vec::new();
    for j in 0..width {
        let mut f = 1u64;
        for (pi, lambdas) in per_prime.iter().enumerate() {
            if let Some(&e) = lambdas.get(j) {
                f *= primes[pi].pow(e);
            }
        }
        factors.push(f);
    }
    factors.reverse(); // ascending divisibility chain
    factors
}

fn exact_log(mut value: u64, base: u64) -> u32 {
    let mut e = 0;
    while value > 1 {
        assert!(value % base == 0, "count {value} is not a power of {base}");
        value /= base;
        e += 1;
    }
    e
}

/// The stabilizer set of a tuple of elements: all conjugates of all nontrivial
/// powers of the entries. A diagonal action on a product of two curves is free
/// exactly when the sets of the two defining tuples are disjoint.
pub fn sigma_set(g: &GroupTable, entries: &[usize]) -> Vec<usize> {
    let mut mask = sigma_mask(g, entries);
    mask[IDENTITY] = false;
    mask.iter()
        .enumerate()
        .filter_map(|(i, &m)| m.then_some(i))
        .collect()
}

pub(crate) fn sigma_mask(g: &GroupTable, entries: &[usize]) -> Vec<bool> {
    let n = g.order();
    let mut mask = vec![false; n];
    for &v in entries {
        let mut x = v;
        while x != IDENTITY {
            for h in 0..n {
                mask[g.conj(h, x)] = true;
            }
            x = g.mul(x, v);
        }
    }
    mask[IDENTITY] = false;
    mask
}
