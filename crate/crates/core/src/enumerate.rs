//! Enumeration of spherical generating systems and admissible free pairs.
//!
//! A spherical system of signature `[m_1, .., m_s]` on a group `G` is an
//! ordered tuple of elements of those exact orders whose product is the
//! identity and which generate `G`; it encodes a `G`-cover of the projective
//! line branched in `s` points. Two such systems with disjoint sigma sets
//! define a free diagonal action on the product of the two covers, hence a
//! smooth quotient surface.
//!
//! Tuples are enumerated up to simultaneous conjugation (orbit minima in the
//! lexicographic order on element indices), depth-first over positions, so
//! the output order is deterministic. Backtracking prunes on suffix-product
//! feasibility and on conjugation-minimality of the prefix; generation is
//! only decidable at the last position and is checked there.

use serde::Serialize;

use crate::group::{sigma_mask, sigma_set, GroupTable, IDENTITY};
use crate::{Error, Result};

/// Branch periods `[m_1, .., m_s]`, non-decreasing, each at least 2.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Signature(Vec<u32>);

impl Signature {
    pub fn new(periods: Vec<u32>) -> Result<Self> {
        if periods.is_empty() {
            return Err(Error::InvalidSignature("no periods".into()));
        }
        if periods.iter().any(|&m| m < 2) {
            return Err(Error::InvalidSignature(format!(
                "period below 2 in {periods:?}"
            )));
        }
        if periods.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidSignature(format!(
                "periods {periods:?} are not sorted"
            )));
        }
        Ok(Signature(periods))
    }

    pub fn periods(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Least common multiple of the periods.
    pub fn lcm(&self) -> u64 {
        self.0.iter().fold(1u64, |acc, &m| {
            let m = m as u64;
            acc / gcd(acc, m) * m
        })
    }

    /// Parses a comma-separated period list such as `2,5,5`.
    pub fn parse(text: &str) -> Result<Self> {
        let periods = text
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidSignature(format!("bad period {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Signature::new(periods)
    }
}

impl std::fmt::Display for Signature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|m| m.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// An ordered tuple of group elements realizing a signature.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratingVector {
    entries: Vec<usize>,
    signature: Signature,
}

impl GeneratingVector {
    /// Validates the three defining invariants: entry orders match the
    /// periods, the product of the entries is the identity, and the entries
    /// generate the whole group.
    pub fn new(g: &GroupTable, entries: Vec<usize>, signature: Signature) -> Result<Self> {
        if entries.len() != signature.len() {
            return Err(Error::InvalidGeneratingVector(format!(
                "{} entries for signature {signature}",
                entries.len()
            )));
        }
        for (&e, &m) in entries.iter().zip(signature.periods()) {
            if e >= g.order() {
                return Err(Error::InvalidGeneratingVector(format!(
                    "entry {e} out of range"
                )));
            }
            if g.element_order(e) != m {
                return Err(Error::InvalidGeneratingVector(format!(
                    "entry {e} has order {} instead of {m}",
                    g.element_order(e)
                )));
            }
        }
        let prod = entries.iter().fold(IDENTITY, |acc, &e| g.mul(acc, e));
        if prod != IDENTITY {
            return Err(Error::InvalidGeneratingVector(
                "product of entries is not the identity".into(),
            ));
        }
        if !g.generates(&entries) {
            return Err(Error::InvalidGeneratingVector(
                "entries do not generate the group".into(),
            ));
        }
        Ok(GeneratingVector { entries, signature })
    }

    pub(crate) fn new_unchecked(entries: Vec<usize>, signature: Signature) -> Self {
        GeneratingVector { entries, signature }
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    /// The tuple conjugated entrywise by `h`; defines the same surface.
    pub fn conjugate(&self, g: &GroupTable, h: usize) -> Self {
        GeneratingVector {
            entries: self.entries.iter().map(|&v| g.conj(h, v)).collect(),
            signature: self.signature.clone(),
        }
    }
}

/// Genus of the degree-`order` cover of the line with branch signature `sig`:
/// `2g - 2 = order * (-2 + sum(1 - 1/m_j))`. The right-hand side must come
/// out an even non-negative integer.
pub fn rh_genus(order: u64, sig: &Signature) -> Result<u64> {
    // order * ((s - 2) - sum 1/m_j), over the common denominator lcm.
    let l = sig.lcm() as i128;
    let s = sig.len() as i128;
    let sum_recip: i128 = sig.periods().iter().map(|&m| l / m as i128).sum();
    let numerator = order as i128 * ((s - 2) * l - sum_recip);
    if numerator % l != 0 {
        return Err(Error::SignatureIncompatible(format!(
            "2g - 2 = {order} * (-2 + sum(1 - 1/m)) is not an integer for {sig}"
        )));
    }
    let t = numerator / l;
    if t < 0 || t % 2 != 0 {
        return Err(Error::SignatureIncompatible(format!(
            "2g - 2 = {t} for {sig} over order {order}"
        )));
    }
    Ok((t / 2 + 1) as u64)
}

/// As [`rh_genus`], additionally rejecting genus 0 and 1 covers.
pub fn rh_genus_general_type(order: u64, sig: &Signature) -> Result<u64> {
    let g = rh_genus(order, sig)?;
    if g < 2 {
        return Err(Error::GenusBelowTwo(g));
    }
    Ok(g)
}

/// Backtracking state for one signature over one group.
struct VectorSearch<'g> {
    g: &'g GroupTable,
    s: usize,
    /// Ascending candidate entries per position.
    allowed_lists: Vec<Vec<usize>>,
    allowed_masks: Vec<Vec<bool>>,
    /// `suffix[j][x]`: x is a product of admissible entries of the last j positions.
    suffix: Vec<Vec<bool>>,
    entries: Vec<usize>,
    /// prods[d] = product of entries[0..d].
    prods: Vec<usize>,
    /// ties[d] = conjugators fixing the prefix entries[0..d] entrywise.
    ties: Vec<Vec<u16>>,
}

impl<'g> VectorSearch<'g> {
    fn new(g: &'g GroupTable, sig: &Signature, mask: Option<&[bool]>) -> Self {
        let n = g.order();
        let s = sig.len();
        let mut allowed_lists = Vec::with_capacity(s);
        let mut allowed_masks = Vec::with_capacity(s);
        for &m in sig.periods() {
            let list: Vec<usize> = (0..n)
                .filter(|&x| g.element_order(x) == m && mask.map_or(true, |mk| mk[x]))
                .collect();
            let mut pm = vec![false; n];
            for &x in &list {
                pm[x] = true;
            }
            allowed_lists.push(list);
            allowed_masks.push(pm);
        }
        // Achievable suffix products, back to front.
        let mut suffix = vec![vec![false; n]; s + 1];
        suffix[0][IDENTITY] = true;
        for j in 1..=s {
            let (done, cur) = suffix.split_at_mut(j);
            let prev = &done[j - 1];
            for &a in &allowed_lists[s - j] {
                for (x, &ok) in prev.iter().enumerate() {
                    if ok {
                        cur[0][g.mul(a, x)] = true;
                    }
                }
            }
        }
        VectorSearch {
            g,
            s,
            allowed_lists,
            allowed_masks,
            suffix,
            entries: Vec::with_capacity(s),
            prods: vec![IDENTITY],
            ties: vec![(1..n as u16).collect()],
        }
    }

    /// Runs the search; `emit` returns true to stop. Returns true if stopped.
    fn run(&mut self, emit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        self.step(emit)
    }

    fn step(&mut self, emit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        let d = self.entries.len();
        let prod = self.prods[d];
        if d == self.s - 1 {
            let v = self.g.inv(prod);
            if !self.allowed_masks[d][v] {
                return false;
            }
            if !self.prefix_is_minimal_final(v) {
                return false;
            }
            self.entries.push(v);
            let stop = self.g.generates(&self.entries) && emit(&self.entries);
            self.entries.pop();
            return stop;
        }
        let candidates = std::mem::take(&mut self.allowed_lists[d]);
        let mut stop = false;
        for &v in &candidates {
            // Remaining positions must be able to absorb the partial product.
            let next_prod = self.g.mul(prod, v);
            if !self.suffix[self.s - d - 1][self.g.inv(next_prod)] {
                continue;
            }
            let Some(survivors) = self.filter_ties(v) else {
                continue; // a conjugate of the prefix would be lexicographically smaller
            };
            self.entries.push(v);
            self.prods.push(next_prod);
            self.ties.push(survivors);
            stop = self.step(emit);
            self.ties.pop();
            self.prods.pop();
            self.entries.pop();
            if stop {
                break;
            }
        }
        self.allowed_lists[d] = candidates;
        stop
    }

    /// Advances the conjugation-minimality filter by one entry. Returns the
    /// conjugators still tying, or None when some conjugate is smaller.
    fn filter_ties(&self, v: usize) -> Option<Vec<u16>> {
        let d = self.entries.len();
        let mut survivors = Vec::with_capacity(self.ties[d].len() / 2);
        for &h in &self.ties[d] {
            let c = self.g.conj(h as usize, v);
            if c < v {
                return None;
            }
            if c == v {
                survivors.push(h);
            }
        }
        Some(survivors)
    }

    fn prefix_is_minimal_final(&self, v: usize) -> bool {
        let d = self.entries.len();
        self.ties[d]
            .iter()
            .all(|&h| self.g.conj(h as usize, v) >= v)
    }
}

/// Emits every generating vector of the signature up to simultaneous
/// conjugation, in lexicographic order on the entry indices, stopping after
/// `limit` when given. An empty result is a valid outcome.
pub fn enumerate_generating_vectors(
    g: &GroupTable,
    sig: &Signature,
    limit: Option<usize>,
) -> Vec<GeneratingVector> {
    let mut out = Vec::new();
    if limit == Some(0) {
        return out;
    }
    let mut search = VectorSearch::new(g, sig, None);
    search.run(&mut |entries| {
        out.push(GeneratingVector::new_unchecked(
            entries.to_vec(),
            sig.clone(),
        ));
        limit.is_some_and(|l| out.len() >= l)
    });
    out
}

/// Outcome of a free-pair search, with enough bookkeeping for reports.
#[derive(Debug, Clone)]
pub struct FreePairOutcome {
    pub witness: Option<(GeneratingVector, GeneratingVector)>,
    /// First-signature candidates examined.
    pub first_tried: usize,
    /// False when the search stopped early on a caller-supplied budget.
    pub exhausted: bool,
}

/// Finds the first pair of generating vectors with the given signatures whose
/// sigma sets are disjoint, i.e. whose diagonal action on the product of the
/// two covers is free. Deterministic: the first vector is minimal in the
/// enumeration order, and the second is minimal given the first.
pub fn free_pair_exists(
    g: &GroupTable,
    sig1: &Signature,
    sig2: &Signature,
) -> Result<Option<(GeneratingVector, GeneratingVector)>> {
    Ok(free_pair_search(g, sig1, sig2, None)?.witness)
}

pub fn free_pair_search(
    g: &GroupTable,
    sig1: &Signature,
    sig2: &Signature,
    first_budget: Option<usize>,
) -> Result<FreePairOutcome> {
    rh_genus_general_type(g.order() as u64, sig1)?;
    rh_genus_general_type(g.order() as u64, sig2)?;

    let n = g.order();
    let mut outcome = FreePairOutcome {
        witness: None,
        first_tried: 0,
        exhausted: true,
    };
    let mut search1 = VectorSearch::new(g, sig1, None);
    search1.run(&mut |entries1| {
        outcome.first_tried += 1;
        let sigma1 = sigma_mask(g, entries1);
        // Elements all of whose nontrivial powers avoid sigma(V1); sigma sets
        // are conjugation-closed, so this is exactly the disjointness test.
        let mut allowed = vec![false; n];
        for x in 0..n {
            let mut ok = true;
            let mut p = x;
            while p != IDENTITY {
                if sigma1[p] {
                    ok = false;
                    break;
                }
                p = g.mul(p, x);
            }
            allowed[x] = ok;
        }
        let mut search2 = VectorSearch::new(g, sig2, Some(&allowed));
        let found = search2.run(&mut |entries2| {
            outcome.witness = Some((
                GeneratingVector::new_unchecked(entries1.to_vec(), sig1.clone()),
                GeneratingVector::new_unchecked(entries2.to_vec(), sig2.clone()),
            ));
            true
        });
        if found {
            return true;
        }
        if first_budget.is_some_and(|b| outcome.first_tried >= b) {
            outcome.exhausted = false;
            return true;
        }
        false
    });

    if let Some((v1, v2)) = &outcome.witness {
        debug_assert!(sigma_sets_disjoint(g, v1, v2));
    }
    Ok(outcome)
}

pub fn sigma_sets_disjoint(g: &GroupTable, v1: &GeneratingVector, v2: &GeneratingVector) -> bool {
    let s1 = sigma_set(g, v1.entries());
    let s2 = sigma_set(g, v2.entries());
    s1.iter().all(|x| s2.binary_search(x).is_err())
}

/// A surface isogenous to a product of curves, of unmixed type, with its
/// numerical invariants.
#[derive(Debug, Clone, Serialize)]
pub struct ProductSurface {
    pub group: String,
    pub group_order: usize,
    pub v1: GeneratingVector,
    pub v2: GeneratingVector,
    pub g1: u64,
    pub g2: u64,
    pub k2: i64,
    pub chi: i64,
    pub moduli_dim: usize,
}

/// Validates a free pair and derives the surface invariants: curve genera via
/// the branch data, `(g1-1)(g2-1) = |G|` (equivalently chi = 1), `K^2 = 8`,
/// and the moduli dimension `(s1 - 3) + (s2 - 3)`.
pub fn surface_invariants(
    g: &GroupTable,
    v1: &GeneratingVector,
    v2: &GeneratingVector,
) -> Result<ProductSurface> {
    // Re-validate both vectors from scratch.
    let v1 = GeneratingVector::new(g, v1.entries().to_vec(), v1.signature().clone())?;
    let v2 = GeneratingVector::new(g, v2.entries().to_vec(), v2.signature().clone())?;
    if !sigma_sets_disjoint(g, &v1, &v2) {
        return Err(Error::InvariantViolation(
            "sigma sets intersect; the diagonal action is not free".into(),
        ));
    }
    let order = g.order() as u64;
    let g1 = rh_genus_general_type(order, v1.signature())?;
    let g2 = rh_genus_general_type(order, v2.signature())?;
    if (g1 - 1) * (g2 - 1) != order {
        return Err(Error::InvariantViolation(format!(
            "(g1-1)(g2-1) = {} differs from |G| = {order}; chi(O) is not 1",
            (g1 - 1) * (g2 - 1)
        )));
    }
    let moduli_dim = (v1.signature().len() - 3) + (v2.signature().len() - 3);
    Ok(ProductSurface {
        group: g.name().to_string(),
        group_order: g.order(),
        v1,
        v2,
        g1,
        g2,
        k2: 8,
        chi: 1,
        moduli_dim,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::PermutationGenerators;

    fn a5() -> GroupTable {
        let gens = PermutationGenerators::from_cycle_lists(
            5,
            &[vec![vec![1, 2, 3, 4, 5]], vec![vec![1, 2, 3]]],
        )
        .unwrap();
        GroupTable::from_permutations("A5", &gens).unwrap()
    }

    fn z5_squared() -> GroupTable {
        let gens = PermutationGenerators::from_cycle_lists(
            10,
            &[vec![vec![1, 2, 3, 4, 5]], vec![vec![6, 7, 8, 9, 10]]],
        )
        .unwrap();
        GroupTable::from_permutations("(Z5)^2", &gens).unwrap()
    }

    fn z2_cubed() -> GroupTable {
        let gens = PermutationGenerators::from_cycle_lists(
            6,
            &[vec![vec![1, 2]], vec![vec![3, 4]], vec![vec![5, 6]]],
        )
        .unwrap();
        GroupTable::from_permutations("(Z2)^3", &gens).unwrap()
    }

    fn sig(p: &[u32]) -> Signature {
        Signature::new(p.to_vec()).unwrap()
    }

    #[test]
    fn signature_validation() {
        assert!(Signature::new(vec![]).is_err());
        assert!(Signature::new(vec![1, 2]).is_err());
        assert!(Signature::new(vec![3, 2]).is_err());
        assert_eq!(Signature::parse("2,5,5").unwrap(), sig(&[2, 5, 5]));
        assert_eq!(sig(&[2, 5, 5]).lcm(), 10);
        assert_eq!(sig(&[2, 5, 5]).to_string(), "[2,5,5]");
    }

    #[test]
    fn rh_genus_examples() {
        assert_eq!(rh_genus(60, &sig(&[2, 5, 5])).unwrap(), 4);
        assert_eq!(rh_genus(25, &sig(&[5, 5, 5])).unwrap(), 6);
        assert_eq!(rh_genus(8, &sig(&[2, 2, 2, 2, 2])).unwrap(), 3);
    }

    #[test]
    fn rh_genus_rejects_incompatible_data() {
        // 2g-2 = 4 * (-3/2) = -6: negative.
        assert!(rh_genus(4, &sig(&[2])).is_err());
        // 2g-2 = 2 * (-2 + 1/2) = -3: not even.
        assert!(rh_genus(2, &sig(&[2])).is_err());
        // Genus-0 quotient datum: 2g-2 = 60 * (-1/30) = -2.
        assert!(rh_genus(60, &sig(&[2, 3, 5])).is_err());
        // Genus 1 is fine for rh_genus but rejected for general type.
        assert_eq!(rh_genus(4, &sig(&[2, 2, 2, 2])).unwrap(), 1);
        assert!(matches!(
            rh_genus_general_type(4, &sig(&[2, 2, 2, 2])),
            Err(Error::GenusBelowTwo(1))
        ));
    }

    #[test]
    fn two_involutions_never_generate_a5() {
        let g = a5();
        assert!(enumerate_generating_vectors(&g, &sig(&[2, 2]), None).is_empty());
    }

    #[test]
    fn beauville_vector_is_enumerated() {
        let g = z5_squared();
        let vectors = enumerate_generating_vectors(&g, &sig(&[5, 5, 5]), None);
        assert!(!vectors.is_empty());
        let a = g.generators()[0];
        let b = g.generators()[1];
        let c = g.mul(g.power(a, 4), g.power(b, 4));
        // The group is abelian, so conjugation dedup keeps every tuple.
        assert!(vectors.iter().any(|v| v.entries() == [a, b, c]));
        for v in &vectors {
            GeneratingVector::new(&g, v.entries().to_vec(), v.signature().clone()).unwrap();
        }
    }

    #[test]
    fn a5_admits_3333() {
        let g = a5();
        let vectors = enumerate_generating_vectors(&g, &sig(&[3, 3, 3, 3]), Some(5));
        assert!(!vectors.is_empty());
        for v in &vectors {
            GeneratingVector::new(&g, v.entries().to_vec(), v.signature().clone()).unwrap();
        }
    }

    #[test]
    fn enumeration_respects_limit_and_order() {
        let g = a5();
        let all = enumerate_generating_vectors(&g, &sig(&[2, 5, 5]), None);
        let two = enumerate_generating_vectors(&g, &sig(&[2, 5, 5]), Some(2));
        assert_eq!(two.len(), 2);
        assert_eq!(&all[..2], &two[..]);
        let mut sorted = all.clone();
        sorted.sort_by(|x, y| x.entries().cmp(y.entries()));
        assert_eq!(all, sorted);
    }

    #[test]
    fn enumerated_vectors_are_orbit_minima() {
        let g = a5();
        for v in enumerate_generating_vectors(&g, &sig(&[2, 5, 5]), Some(10)) {
            for h in 0..g.order() {
                let conj: Vec<usize> = v.entries().iter().map(|&x| g.conj(h, x)).collect();
                assert!(conj.as_slice() >= v.entries());
            }
        }
    }

    #[test]
    fn beauville_free_pair() {
        let g = z5_squared();
        let (v1, v2) = free_pair_exists(&g, &sig(&[5, 5, 5]), &sig(&[5, 5, 5]))
            .unwrap()
            .expect("witness");
        assert!(sigma_sets_disjoint(&g, &v1, &v2));
        assert_eq!(sigma_set(&g, v1.entries()).len(), 12);
        assert_eq!(sigma_set(&g, v2.entries()).len(), 12);
        let s = surface_invariants(&g, &v1, &v2).unwrap();
        assert_eq!((s.g1, s.g2), (6, 6));
        assert_eq!((s.k2, s.chi), (8, 1));
        assert_eq!(s.moduli_dim, 0);
    }

    #[test]
    fn free_pair_is_deterministic() {
        let g = z5_squared();
        let w1 = free_pair_exists(&g, &sig(&[5, 5, 5]), &sig(&[5, 5, 5])).unwrap();
        let w2 = free_pair_exists(&g, &sig(&[5, 5, 5]), &sig(&[5, 5, 5])).unwrap();
        assert_eq!(w1, w2);
    }

    #[test]
    fn z2_cubed_free_pair_and_invariants() {
        let g = z2_cubed();
        let (v1, v2) = free_pair_exists(&g, &sig(&[2, 2, 2, 2, 2]), &sig(&[2, 2, 2, 2, 2, 2]))
            .unwrap()
            .expect("witness");
        let s = surface_invariants(&g, &v1, &v2).unwrap();
        assert_eq!((s.g1, s.g2), (3, 5));
        assert_eq!(s.moduli_dim, 5);
    }

    #[test]
    fn impossible_pair_yields_no_witness() {
        let g = a5();
        // [2,2] over A5 fails the genus precondition outright (the stream
        // would be empty anyway: two involutions generate at most Z2).
        assert!(free_pair_exists(&g, &sig(&[2, 2]), &sig(&[3, 3, 3, 3])).is_err());
        // A well-formed but unsatisfiable request: every order-5 element has
        // all order-5 elements among the conjugates of its powers, so two
        // [5,5,5] systems on A5 can never have disjoint sigma sets.
        let out = free_pair_exists(&g, &sig(&[5, 5, 5]), &sig(&[5, 5, 5])).unwrap();
        assert!(out.is_none());
    }

    #[test]
    fn surface_invariants_reports_violations() {
        let g = z5_squared();
        let (v1, _) = free_pair_exists(&g, &sig(&[5, 5, 5]), &sig(&[5, 5, 5]))
            .unwrap()
            .unwrap();
        // A pair with itself is never free.
        let err = surface_invariants(&g, &v1, &v1).unwrap_err();
        assert!(matches!(err, Error::InvariantViolation(_)));
    }

    #[test]
    fn conjugated_witness_defines_the_same_surface() {
        let g = z2_cubed();
        let (v1, v2) = free_pair_exists(&g, &sig(&[2, 2, 2, 2, 2]), &sig(&[2, 2, 2, 2, 2, 2]))
            .unwrap()
            .unwrap();
        let c1 = v1.conjugate(&g, 3);
        let c2 = v2.conjugate(&g, 5);
        let s = surface_invariants(&g, &c1, &c2).unwrap();
        assert_eq!((s.g1, s.g2), (3, 5));
    }
}
