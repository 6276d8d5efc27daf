//! Integral first homology of a product-quotient surface.
//!
//! The fundamental group of `S = (C1 x C2)/G` is the fiber product
//! `H = {(a, b) : phi1(a) = phi2(b)}` inside the product of the two polygonal
//! groups, where `phi_k` sends the k-th polygonal generators to the entries
//! of the k-th generating vector. `H` has index `|G|`; its abelianization is
//! `H_1(S, Z)`. The computation runs Reidemeister-Schreier rewriting over the
//! coset action (with a breadth-first Schreier transversal), abelianizes the
//! rewritten presentation, and reads off the Smith normal form.

use crate::enumerate::{GeneratingVector, Signature};
use crate::group::GroupTable;
use crate::snf::{smith_normal_form, AbelianInvariants};
use crate::{Error, Result};

/// A finite presentation; letters are signed 1-based generator indices, so
/// `3` is the third generator and `-3` its inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub generator_count: usize,
    pub relators: Vec<Vec<i32>>,
}

impl Presentation {
    /// Relation matrix of the abelianized presentation: one row per relator,
    /// one column per generator, entries the exponent sums.
    pub fn abelianized_rows(&self) -> Vec<Vec<i64>> {
        self.relators
            .iter()
            .map(|r| {
                let mut row = vec![0i64; self.generator_count];
                for &lit in r {
                    let idx = lit.unsigned_abs() as usize - 1;
                    row[idx] += lit.signum() as i64;
                }
                row
            })
            .collect()
    }
}

/// The polygonal (genus-0 orbifold) group of a signature:
/// `< x_1, .., x_s | x_j^{m_j}, x_1 x_2 .. x_s >`.
pub fn polygonal_presentation(sig: &Signature) -> Presentation {
    let s = sig.len();
    let mut relators = Vec::with_capacity(s + 1);
    for (j, &m) in sig.periods().iter().enumerate() {
        relators.push(vec![(j + 1) as i32; m as usize]);
    }
    relators.push((1..=s as i32).collect());
    Presentation {
        generator_count: s,
        relators,
    }
}

/// Presentation of the direct product of two presented groups: both
/// generator sets, both relator sets, and all cross commutators.
pub fn product_presentation(p1: &Presentation, p2: &Presentation) -> Presentation {
    let s1 = p1.generator_count as i32;
    let mut relators = p1.relators.clone();
    for r in &p2.relators {
        relators.push(r.iter().map(|&l| l + l.signum() * s1).collect());
    }
    for i in 1..=s1 {
        for j in 1..=p2.generator_count as i32 {
            relators.push(vec![i, s1 + j, -i, -(s1 + j)]);
        }
    }
    Presentation {
        generator_count: (s1 + p2.generator_count as i32) as usize,
        relators,
    }
}

/// A transitive action of presentation generators on cosets, each generator
/// acting as a permutation.
#[derive(Debug)]
pub struct CosetAction {
    pub cosets: usize,
    /// `maps[g][c]`: the coset reached from c by generator g.
    pub maps: Vec<Vec<usize>>,
    pub inverse_maps: Vec<Vec<usize>>,
}

impl CosetAction {
    pub fn new(cosets: usize, maps: Vec<Vec<usize>>) -> Result<Self> {
        let mut inverse_maps = Vec::with_capacity(maps.len());
        for map in &maps {
            let mut inv = vec![usize::MAX; cosets];
            for (c, &t) in map.iter().enumerate() {
                if t >= cosets || inv[t] != usize::MAX {
                    return Err(Error::InvariantViolation(
                        "coset map is not a permutation".into(),
                    ));
                }
                inv[t] = c;
            }
            inverse_maps.push(inv);
        }
        let action = CosetAction {
            cosets,
            maps,
            inverse_maps,
        };
        let reached = action.reachable_from(0);
        if reached != cosets {
            return Err(Error::CosetActionNotTransitive {
                reached,
                total: cosets,
            });
        }
        Ok(action)
    }

    fn reachable_from(&self, start: usize) -> usize {
        let mut seen = vec![false; self.cosets];
        seen[start] = true;
        let mut queue = vec![start];
        let mut i = 0;
        while i < queue.len() {
            let c = queue[i];
            for map in &self.maps {
                if !seen[map[c]] {
                    seen[map[c]] = true;
                    queue.push(map[c]);
                }
            }
            i += 1;
        }
        queue.len()
    }
}

/// Coset action of the fiber-product subgroup: cosets are labelled by the
/// elements of `G`; a first-factor generator with image `v` acts by
/// `x -> v^-1 x`, a second-factor generator with image `w` by `x -> x w`.
pub fn fiber_coset_action(
    g: &GroupTable,
    v1: &GeneratingVector,
    v2: &GeneratingVector,
) -> Result<CosetAction> {
    let n = g.order();
    let mut maps = Vec::with_capacity(v1.entries().len() + v2.entries().len());
    for &v in v1.entries() {
        let vi = g.inv(v);
        maps.push((0..n).map(|x| g.mul(vi, x)).collect());
    }
    for &w in v2.entries() {
        maps.push((0..n).map(|x| g.mul(x, w)).collect());
    }
    CosetAction::new(n, maps)
}

/// Coset action of the kernel of `phi: polygonal group -> G` defined by a
/// single generating vector; cosets are again labelled by `G`.
pub fn curve_coset_action(g: &GroupTable, v: &GeneratingVector) -> Result<CosetAction> {
    let n = g.order();
    let maps = v
        .entries()
        .iter()
        .map(|&w| (0..n).map(|x| g.mul(x, w)).collect())
        .collect();
    CosetAction::new(n, maps)
}

/// Reidemeister-Schreier: a presentation of the point stabilizer of coset 0.
///
/// The Schreier transversal is the breadth-first tree from coset 0 in the
/// canonical generator order; tree-edge Schreier generators are trivial and
/// are dropped, the rest are renumbered consecutively. Relators are the
/// rewrites of every defining relator from every coset.
pub fn rewrite_subgroup_presentation(p: &Presentation, action: &CosetAction) -> Presentation {
    let n = action.cosets;
    let k = p.generator_count;
    debug_assert_eq!(action.maps.len(), k);

    // Breadth-first Schreier tree.
    let mut is_tree = vec![vec![false; n]; k];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = vec![0usize];
    let mut i = 0;
    while i < queue.len() {
        let c = queue[i];
        for (gen, map) in action.maps.iter().enumerate() {
            let t = map[c];
            if !seen[t] {
                seen[t] = true;
                is_tree[gen][c] = true;
                queue.push(t);
            }
        }
        i += 1;
    }

    // Compact column ids for non-tree Schreier generators (coset, gen).
    let mut column = vec![vec![usize::MAX; n]; k];
    let mut next = 0;
    for gen in 0..k {
        for c in 0..n {
            if !is_tree[gen][c] {
                column[gen][c] = next;
                next += 1;
            }
        }
    }

    let mut relators = Vec::with_capacity(n * p.relators.len());
    for start in 0..n {
        for r in &p.relators {
            let mut word: Vec<i32> = Vec::with_capacity(r.len());
            let mut c = start;
            for &lit in r {
                let gen = lit.unsigned_abs() as usize - 1;
                if lit > 0 {
                    if !is_tree[gen][c] {
                        word.push((column[gen][c] + 1) as i32);
                    }
                    c = action.maps[gen][c];
                } else {
                    let from = action.inverse_maps[gen][c];
                    if !is_tree[gen][from] {
                        word.push(-((column[gen][from] + 1) as i32));
                    }
                    c = from;
                }
            }
            debug_assert_eq!(c, start, "relator does not act trivially on cosets");
            relators.push(word);
        }
    }

    Presentation {
        generator_count: next,
        relators,
    }
}

/// `H_1(S, Z)` of the quotient surface defined by a free pair of generating
/// vectors. The free rank must come out 0 (the surface has first Betti
/// number 0); a nonzero rank or a non-transitive coset action signals
/// invalid input.
pub fn fiber_product_h1(
    g: &GroupTable,
    v1: &GeneratingVector,
    v2: &GeneratingVector,
) -> Result<AbelianInvariants> {
    let p1 = polygonal_presentation(v1.signature());
    let p2 = polygonal_presentation(v2.signature());
    let product = product_presentation(&p1, &p2);
    let action = fiber_coset_action(g, v1, v2)?;
    let sub = rewrite_subgroup_presentation(&product, &action);
    let rows = sub.abelianized_rows();
    let inv = smith_normal_form(&rows, sub.generator_count);
    if inv.free_rank != 0 {
        return Err(Error::NonzeroFreeRank(inv.free_rank));
    }
    Ok(inv)
}

/// `H_1` of the curve defined by a single generating vector: the
/// abelianization of the kernel of the polygonal group's surjection onto
/// `G`. For a genus-g curve this is free of rank `2g`, which cross-checks
/// the branch-data genus formula through an entirely different route.
pub fn curve_h1(g: &GroupTable, v: &GeneratingVector) -> Result<AbelianInvariants> {
    let p = polygonal_presentation(v.signature());
    let action = curve_coset_action(g, v)?;
    let sub = rewrite_subgroup_presentation(&p, &action);
    let rows = sub.abelianized_rows();
    Ok(smith_normal_form(&rows, sub.generator_count))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{free_pair_exists, rh_genus};
    use crate::group::PermutationGenerators;

    fn sig(p: &[u32]) -> Signature {
        Signature::new(p.to_vec()).unwrap()
    }

    fn z5_squared() -> GroupTable {
        let gens = PermutationGenerators::from_cycle_lists(
            10,
            &[vec![vec![1, 2, 3, 4, 5]], vec![vec![6, 7, 8, 9, 10]]],
        )
        .unwrap();
        GroupTable::from_permutations("(Z5)^2", &gens).unwrap()
    }

    fn z2_squared() -> GroupTable {
        let gens =
            PermutationGenerators::from_cycle_lists(4, &[vec![vec![1, 2]], vec![vec![3, 4]]])
                .unwrap();
        GroupTable::from_permutations("(Z2)^2", &gens).unwrap()
    }

    fn z2_cubed() -> GroupTable {
        let gens = PermutationGenerators::from_cycle_lists(
            6,
            &[vec![vec![1, 2]], vec![vec![3, 4]], vec![vec![5, 6]]],
        )
        .unwrap();
        GroupTable::from_permutations("(Z2)^3", &gens).unwrap()
    }

    #[test]
    fn polygonal_shape() {
        let p = polygonal_presentation(&sig(&[5, 5, 5]));
        assert_eq!(p.generator_count, 3);
        assert_eq!(p.relators.len(), 4);
        assert_eq!(p.relators[3], vec![1, 2, 3]);
    }

    #[test]
    fn polygonal_abelianization_of_five_involutions() {
        let p = polygonal_presentation(&sig(&[2, 2, 2, 2, 2]));
        let inv = smith_normal_form(&p.abelianized_rows(), p.generator_count);
        assert_eq!(inv.factors_u64().unwrap(), vec![2, 2, 2, 2]);
        assert_eq!(inv.free_rank, 0);
    }

    #[test]
    fn polygonal_single_period_abelianization_is_trivial() {
        // <x | x^m, x> is the trivial group.
        let p = polygonal_presentation(&sig(&[7]));
        let inv = smith_normal_form(&p.abelianized_rows(), p.generator_count);
        assert!(inv.is_trivial());
    }

    #[test]
    fn product_presentation_counts() {
        let p1 = polygonal_presentation(&sig(&[2, 5, 5]));
        let p2 = polygonal_presentation(&sig(&[3, 3, 3, 3]));
        let p = product_presentation(&p1, &p2);
        assert_eq!(p.generator_count, 7);
        assert_eq!(p.relators.len(), 4 + 5 + 12);
    }

    #[test]
    fn curve_kernel_is_a_surface_group_abelianization() {
        // Genus-1 check: [2,2,2,2] over (Z2)^2.
        let g = z2_squared();
        let a = g.generators()[0];
        let b = g.generators()[1];
        let v = GeneratingVector::new(&g, vec![a, b, a, b], sig(&[2, 2, 2, 2])).unwrap();
        let h1 = curve_h1(&g, &v).unwrap();
        assert_eq!(h1.free_rank, 2);
        assert!(h1.factors.is_empty());
    }

    #[test]
    fn beauville_curve_has_genus_six_homology() {
        let g = z5_squared();
        let (v1, _) = free_pair_exists(&g, &sig(&[5, 5, 5]), &sig(&[5, 5, 5]))
            .unwrap()
            .unwrap();
        let h1 = curve_h1(&g, &v1).unwrap();
        let expected = 2 * rh_genus(25, &sig(&[5, 5, 5])).unwrap() as usize;
        assert_eq!(h1.free_rank, expected);
        assert!(h1.factors.is_empty());
    }

    #[test]
    fn beauville_surface_homology() {
        let g = z5_squared();
        let (v1, v2) = free_pair_exists(&g, &sig(&[5, 5, 5]), &sig(&[5, 5, 5]))
            .unwrap()
            .unwrap();
        let h1 = fiber_product_h1(&g, &v1, &v2).unwrap();
        assert_eq!(h1.factors_u64().unwrap(), vec![5, 5, 5]);
        assert_eq!(h1.to_string(), "(Z5)^3");
    }

    #[test]
    fn z2_cubed_surface_homology() {
        let g = z2_cubed();
        let (v1, v2) = free_pair_exists(&g, &sig(&[2, 2, 2, 2, 2]), &sig(&[2, 2, 2, 2, 2, 2]))
            .unwrap()
            .unwrap();
        let h1 = fiber_product_h1(&g, &v1, &v2).unwrap();
        assert_eq!(h1.factors_u64().unwrap(), vec![2, 2, 2, 2, 4, 4]);
        assert_eq!(h1.to_string(), "(Z2)^4 x (Z4)^2");
    }

    #[test]
    fn homology_is_conjugation_invariant() {
        let g = z2_cubed();
        let (v1, v2) = free_pair_exists(&g, &sig(&[2, 2, 2, 2, 2]), &sig(&[2, 2, 2, 2, 2, 2]))
            .unwrap()
            .unwrap();
        let base = fiber_product_h1(&g, &v1, &v2).unwrap();
        let conj = fiber_product_h1(&g, &v1.conjugate(&g, 4), &v2.conjugate(&g, 2)).unwrap();
        assert_eq!(base, conj);
    }

    #[test]
    fn coset_action_shape() {
        let g = z5_squared();
        let (v1, v2) = free_pair_exists(&g, &sig(&[5, 5, 5]), &sig(&[5, 5, 5]))
            .unwrap()
            .unwrap();
        let action = fiber_coset_action(&g, &v1, &v2).unwrap();
        assert_eq!(action.cosets, 25);
        assert_eq!(action.maps.len(), 6);
    }

    #[test]
    fn non_generating_entries_are_rejected() {
        let g = z2_cubed();
        let a = g.generators()[0];
        // (a, a) has the right orders and product but generates only Z2;
        // bypass the constructor checks to hit the transitivity error.
        let v = GeneratingVector::new_unchecked(vec![a, a], sig(&[2, 2]));
        let err = fiber_coset_action(&g, &v, &v).unwrap_err();
        assert!(matches!(err, Error::CosetActionNotTransitive { .. }));
    }
}
