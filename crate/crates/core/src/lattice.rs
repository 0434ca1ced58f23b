//! Index-p² subgroups of G(B): maximal subgroups, their Frattini subgroups,
//! the exact intersection of all index-p² subgroups, the explicit witness
//! family (line preimages and subalgebra lifts), and the embedding of G into
//! a product of symmetric groups through coset actions.

use std::collections::BTreeSet;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fpla::{enumerate_subspaces, FpVector, Subspace};
use crate::group::{
    closure, frattini, frattini_from_generators, BracketGroup, CosetAction, FiniteGroup, GroupElement, Permutation,
    Subgroup,
};

pub type ElementSubgroup = Subgroup<GroupElement>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FrattiniMethod {
    /// All p-th powers and all commutators of pairs of elements.
    FullEnumeration,
    /// Normal closure of p-th powers and commutators of generators.
    Generators,
}

#[derive(Clone, Debug)]
pub struct MaximalSubgroup {
    /// U = ker λ, the hyperplane of V this subgroup lies over.
    pub hyperplane: Subspace,
    pub subgroup: ElementSubgroup,
}

/// The preimages M_λ = {(a, s) : λ(a) = 0} of all hyperplanes of V.
pub fn maximal_subgroups(g: &BracketGroup, cap: u64) -> Result<Vec<MaximalSubgroup>> {
    let n = g.dim();
    let size = g.order() / g.p();
    if size > cap {
        return Err(Error::cap("maximal subgroup", size, cap));
    }
    enumerate_subspaces(g.field(), n, n - 1, cap)?
        .into_iter()
        .map(|u| Ok(MaximalSubgroup { subgroup: g.preimage(&u)?, hyperplane: u }))
        .collect()
}

pub fn frattini_of(g: &BracketGroup, h: &ElementSubgroup, method: FrattiniMethod, cap: u64) -> Result<ElementSubgroup> {
    match method {
        FrattiniMethod::FullEnumeration => frattini(g, h, g.p(), cap),
        FrattiniMethod::Generators => frattini_from_generators(g, h, g.p(), cap),
    }
}

#[derive(Clone, Debug)]
pub struct IndexP2Intersection {
    pub intersection: ElementSubgroup,
    pub maximals: Vec<MaximalSubgroup>,
    /// Φ(M) for each maximal subgroup, in the same order.
    pub frattinis: Vec<ElementSubgroup>,
}

/// ∩{H : [G : H] = p²}, computed as ∩_M Φ(M) over maximal subgroups M.
///
/// Every index-p² subgroup H is maximal in a maximal subgroup M of G, so
/// H ⊇ Φ(M). Conversely Φ(M) is the intersection of the maximal subgroups of
/// M, each of which has index p² in G. Hence both sides agree.
pub fn index_p2_intersection(g: &BracketGroup, method: FrattiniMethod, cap: u64) -> Result<IndexP2Intersection> {
    let maximals = maximal_subgroups(g, cap)?;
    let frattinis =
        maximals.par_iter().map(|m| frattini_of(g, &m.subgroup, method, cap)).collect::<Result<Vec<_>>>()?;
    let mut intersection = frattinis.first().cloned().ok_or_else(|| Error::contract("group has no maximal subgroups"))?;
    for f in &frattinis[1..] {
        intersection = intersection.intersect(f);
    }
    Ok(IndexP2Intersection { intersection, maximals, frattinis })
}

/// Maximal subgroups of a p-group `m`, found as kernels of all nonzero
/// homomorphisms m → Z/p. Homomorphisms are enumerated by assigning values
/// to generators, propagating along a spanning tree of the Cayley graph and
/// keeping the consistent assignments. Independent of any Frattini computation.
pub fn maximal_subgroups_by_homomorphisms(g: &BracketGroup, m: &ElementSubgroup) -> Result<Vec<ElementSubgroup>> {
    let p = g.p();
    let m = m.clone().with_generators(g);
    let gens = m.generators();
    let elems = m.elements();
    let index_of = |x: &GroupElement| elems.binary_search(x).expect("closed subgroup");
    let id = index_of(&g.identity());

    // spanning tree: parent index and generator used
    let mut tree: Vec<Option<(usize, usize)>> = vec![None; elems.len()];
    let mut order = vec![id];
    let mut reached = vec![false; elems.len()];
    reached[id] = true;
    let mut head = 0;
    while head < order.len() {
        let x = order[head];
        head += 1;
        for (j, gen) in gens.iter().enumerate() {
            let y = index_of(&g.mul(&elems[x], gen));
            if !reached[y] {
                reached[y] = true;
                tree[y] = Some((x, j));
                order.push(y);
            }
        }
    }
    if order.len() != elems.len() {
        return Err(Error::contract("generators do not generate the subgroup"));
    }
    let products: Vec<Vec<usize>> =
        (0..elems.len()).map(|x| gens.iter().map(|gen| index_of(&g.mul(&elems[x], gen))).collect()).collect();

    let mut kernels = BTreeSet::new();
    let mut values = vec![0u8; gens.len()];
    let mut f = vec![0u64; elems.len()];
    while crate::fpla::odometer(&mut values, p as u8) {
        for &x in &order[1..] {
            let (parent, j) = tree[x].expect("tree covers the subgroup");
            f[x] = (f[parent] + values[j] as u64) % p;
        }
        let consistent =
            (0..elems.len()).all(|x| gens.iter().enumerate().all(|(j, _)| f[products[x][j]] == (f[x] + values[j] as u64) % p));
        if consistent {
            let kernel: Vec<GroupElement> = (0..elems.len()).filter(|&x| f[x] == 0).map(|x| elems[x]).collect();
            kernels.insert(kernel);
        }
    }
    kernels
        .into_iter()
        .map(|k| Ok(crate::group::subgroup_from_sorted(k).with_generators(g)))
        .collect()
}

/// Third, Frattini-free route to the index-p² intersection: intersect every
/// maximal subgroup of every maximal subgroup of G.
pub fn index_p2_intersection_by_homomorphisms(g: &BracketGroup, cap: u64) -> Result<(ElementSubgroup, usize)> {
    let maximals = maximal_subgroups(g, cap)?;
    let per_m = maximals
        .par_iter()
        .map(|m| maximal_subgroups_by_homomorphisms(g, &m.subgroup))
        .collect::<Result<Vec<_>>>()?;
    let all: BTreeSet<Vec<GroupElement>> = per_m.into_iter().flatten().map(|h| h.elements().to_vec()).collect();
    let mut iter = all.iter();
    let first = iter.next().ok_or_else(|| Error::contract("no index-p² subgroups found"))?;
    let mut meet: Vec<GroupElement> = first.clone();
    for h in iter {
        meet.retain(|x| h.binary_search(x).is_ok());
    }
    Ok((crate::group::subgroup_from_sorted(meet), all.len()))
}

fn lift_basis(g: &BracketGroup, s: &Subspace) -> Vec<GroupElement> {
    s.basis().iter().map(|v| g.lift(v)).collect()
}

/// K = ⟨(u, 0), (v, 0)⟩ for a basis u, v of a 2-dimensional subalgebra S.
pub fn lift_subalgebra(g: &BracketGroup, s: &Subspace, cap: u64) -> Result<ElementSubgroup> {
    if s.dim() != 2 || s.ambient_dim() != g.dim() {
        return Err(Error::contract(format!("expected a 2-dimensional subspace of V, got dimension {}", s.dim())));
    }
    if !g.algebra().is_subalgebra(s) {
        return Err(Error::contract(format!("{s} is not a subalgebra")));
    }
    closure(g, &lift_basis(g, s), cap)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LiftCheck {
    pub order: u64,
    pub index: u64,
    /// K maps onto S under G → V.
    pub projects_onto_s: bool,
    /// K ∩ W = {0} × S.
    pub meets_w_in_s: bool,
    /// K = {x^l y^m : 0 <= l, m < p²} for the two basis lifts x, y.
    pub normal_form: bool,
}

impl LiftCheck {
    pub fn holds(&self, p: u64) -> bool {
        self.order == p.pow(4) && self.projects_onto_s && self.meets_w_in_s && self.normal_form
    }
}

pub fn check_lift(g: &BracketGroup, s: &Subspace, k: &ElementSubgroup) -> LiftCheck {
    let p = g.p();
    let image: BTreeSet<FpVector> = k.elements().iter().map(|x| g.a_vector(x)).collect();
    let s_elems: BTreeSet<FpVector> = s.elements().into_iter().collect();
    let meet_w: BTreeSet<FpVector> =
        k.elements().iter().filter(|x| x.is_central_coordinate()).map(|x| g.s_vector(x)).collect();
    let lifts = lift_basis(g, s);
    let (x, y) = (lifts[0], lifts[1]);
    let mut words = BTreeSet::new();
    for l in 0..(p * p) as i64 {
        let xl = g.power(&x, l);
        for m in 0..(p * p) as i64 {
            words.insert(g.mul(&xl, &g.power(&y, m)));
        }
    }
    let k_set: BTreeSet<GroupElement> = k.elements().iter().copied().collect();
    LiftCheck {
        order: k.order(),
        index: g.order() / k.order(),
        projects_onto_s: image == s_elems,
        meets_w_in_s: meet_w == s_elems,
        normal_form: words == k_set,
    }
}

/// {(a, s) : a ∈ ℓ} for a line ℓ of V.
pub fn line_preimage(g: &BracketGroup, line: &Subspace) -> Result<ElementSubgroup> {
    if line.dim() != 1 {
        return Err(Error::contract(format!("expected a 1-dimensional subspace, got dimension {}", line.dim())));
    }
    g.preimage(line)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum WitnessKind {
    LinePreimage,
    SubalgebraLift,
}

#[derive(Clone, Debug)]
pub struct WitnessMember {
    pub kind: WitnessKind,
    pub subspace: Subspace,
    pub subgroup: ElementSubgroup,
}

#[derive(Clone, Debug)]
pub struct WitnessFamily {
    pub members: Vec<WitnessMember>,
    pub intersection: ElementSubgroup,
}

impl WitnessFamily {
    pub fn subgroups(&self) -> Vec<ElementSubgroup> {
        self.members.iter().map(|m| m.subgroup.clone()).collect()
    }

    pub fn count(&self, kind: WitnessKind) -> usize {
        self.members.iter().filter(|m| m.kind == kind).count()
    }
}

/// All line preimages plus all lifts of 2-dimensional subalgebras, each
/// checked to have index p², with their common intersection.
pub fn witness_family(g: &BracketGroup, cap: u64) -> Result<WitnessFamily> {
    let p = g.p();
    let mut members = Vec::new();
    for line in enumerate_subspaces(g.field(), g.dim(), 1, cap)? {
        let subgroup = line_preimage(g, &line)?;
        members.push(WitnessMember { kind: WitnessKind::LinePreimage, subspace: line, subgroup });
    }
    for s in g.algebra().subalgebras_of_dim(2, cap)? {
        let subgroup = lift_subalgebra(g, &s, cap)?;
        members.push(WitnessMember { kind: WitnessKind::SubalgebraLift, subspace: s, subgroup });
    }
    if let Some(bad) = members.iter().find(|m| m.subgroup.order() * p * p != g.order()) {
        return Err(Error::contract(format!(
            "witness subgroup over {} has order {}, not index p² in a group of order {}",
            bad.subspace,
            bad.subgroup.order(),
            g.order()
        )));
    }
    let mut intersection = members.first().map(|m| m.subgroup.clone()).ok_or_else(|| Error::contract("empty family"))?;
    for m in &members[1..] {
        intersection = intersection.intersect(&m.subgroup);
    }
    Ok(WitnessFamily { members, intersection })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EmbeddingOptions {
    /// Check the homomorphism property on all pairs when |G|² is at most this.
    pub exhaustive_pair_limit: u64,
    /// Otherwise check this many seeded random pairs per member.
    pub sampled_pairs: usize,
    pub seed: u64,
    pub degree_cap: u64,
    pub group_cap: u64,
}

impl Default for EmbeddingOptions {
    fn default() -> Self {
        EmbeddingOptions {
            exhaustive_pair_limit: 10_000_000,
            sampled_pairs: 100_000,
            seed: 0x5eed,
            degree_cap: crate::group::DEFAULT_DEGREE_CAP,
            group_cap: crate::group::DEFAULT_GROUP_CAP,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ActionCheck {
    pub degree: usize,
    pub pairs_checked: u64,
    pub exhaustive: bool,
    pub homomorphism: bool,
    pub kernel_order: u64,
    pub kernel_in_subgroup: bool,
    pub image_order: u64,
    pub image_is_p_group: bool,
    pub image_exponent: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingReport {
    pub factors: usize,
    pub actions: Vec<ActionCheck>,
    /// Order of the kernel of G → ∏ Sym(cosets).
    pub kernel_order: u64,
    pub injective: bool,
}

impl EmbeddingReport {
    pub fn all_homomorphisms(&self) -> bool {
        self.actions.iter().all(|a| a.homomorphism && a.kernel_in_subgroup)
    }

    pub fn max_image_exponent(&self) -> u64 {
        self.actions.iter().map(|a| a.image_exponent).max().unwrap_or(1)
    }
}

fn is_power_of(mut x: u64, p: u64) -> bool {
    while x > 1 && x % p == 0 {
        x /= p;
    }
    x == 1
}

/// Builds the coset actions φᵢ : G → Sym(G/Hᵢ) and checks each is a
/// homomorphism, then whether the product map is injective. No hypothesis
/// on the family is required.
pub fn embedding_report(g: &BracketGroup, family: &[ElementSubgroup], opts: &EmbeddingOptions) -> Result<EmbeddingReport> {
    let p = g.p();
    let all = g.elements(opts.group_cap)?;
    let order = g.order();
    let actions: Vec<(ActionCheck, Vec<bool>)> = family
        .par_iter()
        .enumerate()
        .map(|(i, h)| {
            let action = CosetAction::new(g, h, opts.degree_cap, opts.group_cap)?;
            let images: Vec<Permutation> = all.iter().map(|x| action.image(g, x)).collect();
            let exhaustive = (order as u128) * (order as u128) <= opts.exhaustive_pair_limit as u128;
            let check_pair = |x: usize, y: usize| {
                let xy = g.code(&g.mul(&all[x], &all[y])) as usize;
                images[xy] == images[x].compose(&images[y])
            };
            let (homomorphism, pairs_checked) = if exhaustive {
                let ok = (0..all.len()).all(|x| (0..all.len()).all(|y| check_pair(x, y)));
                (ok, order * order)
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(opts.seed.wrapping_add(i as u64));
                let ok = (0..opts.sampled_pairs).all(|_| {
                    let x = rng.gen_range(0..all.len());
                    let y = rng.gen_range(0..all.len());
                    check_pair(x, y)
                });
                (ok, opts.sampled_pairs as u64)
            };
            let in_kernel: Vec<bool> = images.iter().map(|im| im.is_identity()).collect();
            let kernel_order = in_kernel.iter().filter(|&&k| k).count() as u64;
            let kernel_in_subgroup = all.iter().zip(&in_kernel).all(|(x, &k)| !k || h.contains(x));
            let image_exponent = images.iter().fold(1u64, |acc, im| acc.lcm(&im.order()));
            let image_order = order / kernel_order;
            Ok((
                ActionCheck {
                    degree: action.degree(),
                    pairs_checked,
                    exhaustive,
                    homomorphism,
                    kernel_order,
                    kernel_in_subgroup,
                    image_order,
                    image_is_p_group: is_power_of(image_order, p) && order % kernel_order == 0,
                    image_exponent,
                },
                in_kernel,
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let kernel_order =
        (0..all.len()).filter(|&x| actions.iter().all(|(_, in_kernel)| in_kernel[x])).count() as u64;
    Ok(EmbeddingReport {
        factors: family.len(),
        actions: actions.into_iter().map(|(a, _)| a).collect(),
        kernel_order,
        injective: kernel_order == 1,
    })
}

/// Checks the embedding of G into ∏ Sym(p²) built from a family of index-p²
/// subgroups with trivial common intersection.
pub fn verify_embedding(g: &BracketGroup, family: &[ElementSubgroup], opts: &EmbeddingOptions) -> Result<EmbeddingReport> {
    let p = g.p();
    if let Some(h) = family.iter().find(|h| h.order() * p * p != g.order()) {
        return Err(Error::contract(format!("family member of order {} does not have index p²", h.order())));
    }
    let (first, rest) = family.split_first().ok_or_else(|| Error::contract("empty family"))?;
    let meet = rest.iter().fold(first.clone(), |acc, h| acc.intersect(h));
    if !meet.is_trivial() {
        return Err(Error::HypothesisFailed(format!(
            "family intersection has order {}, so the product of coset actions is not injective",
            meet.order()
        )));
    }
    embedding_report(g, family, opts)
}
