//! Relative projectivity: traces, Higman's criterion, vertices, ideals of
//! relatively projective maps, and relative cones.
//!
//! Trace images are computed in coordinates. With `Hom_G(M, N)` in reduced
//! row-echelon form, the coordinate of a G-map at basis vector `t` is its
//! entry at the pivot `(i_t, j_t)`, so
//! `coord_t(Tr φ) = Σ_{a,b} φ[a][b] · Z_t[a][b]` with
//! `Z_t[a][b] = Σ_c ρ_N(g_c)[i_t][a] · ρ_M(g_c⁻¹)[b][j_t]`.
//! Only the pivot rows and columns of the coset actions are ever formed.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::adjfun::{counit_map, g_unit_map, restrict, Induction};
use crate::decomp::is_indecomposable;
use crate::error::{Error, Result};
use crate::ffmat::{FieldMatrix, Subspace};
use crate::grp::{
    all_subgroups, are_conjugate, is_subconjugate, left_cosets, maximal_subgroups, sylow, PermGroup, Subgroup,
};
use crate::repmod::{direct_sum, hom_space, module_seed, quotient_by_subspace, HomSpace, Module, ModuleMap};

/// Decider (b) builds `Hom_G(M, (M↓_H)↑ᴳ)`; it is skipped above this
/// induced dimension.
pub const COUNIT_DECIDER_DIM_CAP: usize = 160;

/// Above this dimension, projectivity relative to the trivial subgroup is
/// decided by the fixed-point count instead of the trace system.
pub const TRACE_DIM_CAP: usize = 64;

/// A set of subgroups of `ambient`, optionally closed under conjugation and
/// subgroups.
#[derive(Clone, Debug)]
pub struct SubgroupFamily {
    ambient: Arc<PermGroup>,
    members: Vec<Subgroup>,
    maximal: Vec<Subgroup>,
    closed: bool,
}

impl SubgroupFamily {
    /// The closure of `seeds` under `ambient`-conjugation and subgroups.
    pub fn closure(ambient: &Arc<PermGroup>, seeds: &[Subgroup]) -> Result<Self> {
        let mut found: BTreeMap<(usize, Vec<usize>), Subgroup> = BTreeMap::new();
        for seed in seeds {
            if !seed.parent().same_as(ambient) {
                return Err(Error::input("family seed is not a subgroup of the ambient group"));
            }
            for s in all_subgroups(seed)? {
                if found.contains_key(&(s.order(), s.key().to_vec())) {
                    continue;
                }
                for x in ambient.elements() {
                    let c = crate::grp::conjugate_subgroup(&s, x)?;
                    found.entry((c.order(), c.key().to_vec())).or_insert(c);
                }
            }
        }
        let members: Vec<Subgroup> = found.into_values().collect();
        let maximal = maximal_up_to_conjugacy(&members)?;
        Ok(SubgroupFamily { ambient: ambient.clone(), members, maximal, closed: true })
    }

    /// Exactly the given subgroups, with no closure.
    pub fn explicit(ambient: &Arc<PermGroup>, members: Vec<Subgroup>) -> Result<Self> {
        if members.iter().any(|m| !m.parent().same_as(ambient)) {
            return Err(Error::input("family member is not a subgroup of the ambient group"));
        }
        let mut members = members;
        members.sort_by(|a, b| (a.order(), a.key()).cmp(&(b.order(), b.key())));
        members.dedup();
        let maximal = maximal_up_to_conjugacy(&members)?;
        Ok(SubgroupFamily { ambient: ambient.clone(), members, maximal, closed: false })
    }

    pub fn single(s: &Subgroup) -> Self {
        SubgroupFamily::explicit(s.parent(), vec![s.clone()]).expect("subgroup of its parent")
    }

    pub fn ambient(&self) -> &Arc<PermGroup> {
        &self.ambient
    }

    pub fn members(&self) -> &[Subgroup] {
        &self.members
    }

    /// Members not properly contained in another, one per conjugacy class.
    pub fn maximal(&self) -> &[Subgroup] {
        &self.maximal
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn only_trivial(&self) -> bool {
        !self.members.is_empty() && self.maximal.iter().all(Subgroup::is_trivial)
    }

    /// Exhaustive check of conjugation and subgroup closure.
    pub fn verify_closure(&self) -> Result<bool> {
        let keys: std::collections::HashSet<&[usize]> = self.members.iter().map(Subgroup::key).collect();
        for m in &self.members {
            for x in self.ambient.elements() {
                if !keys.contains(crate::grp::conjugate_subgroup(m, x)?.key()) {
                    return Ok(false);
                }
            }
            for s in all_subgroups(m)? {
                if !keys.contains(s.key()) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Whether `q` is conjugate to a subgroup of some member.
    pub fn contains_up_to_conjugacy(&self, q: &Subgroup) -> Result<bool> {
        for m in &self.maximal {
            if is_subconjugate(q, m)?.is_some() {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

fn maximal_up_to_conjugacy(members: &[Subgroup]) -> Result<Vec<Subgroup>> {
    let mut out: Vec<Subgroup> = Vec::new();
    for m in members {
        if members.iter().any(|o| o.order() > m.order() && m.is_subgroup_of(o)) {
            continue;
        }
        let mut dup = false;
        for o in &out {
            if are_conjugate(m, o)?.is_some() {
                dup = true;
                break;
            }
        }
        if !dup {
            out.push(m.clone());
        }
    }
    Ok(out)
}

/// Which maps an ideal of `Hom` consists of.
#[derive(Clone, Debug)]
pub enum IdealSpec {
    TraceFamily(SubgroupFamily),
    Basket(Vec<Module>),
}

/// A subspace of `Hom_G(M, N)`, in coordinates of the hom space's basis.
#[derive(Clone, Debug)]
pub struct Ideal {
    pub hom: HomSpace,
    pub coords: Subspace,
}

impl Ideal {
    pub fn dim(&self) -> usize {
        self.coords.dim()
    }

    pub fn contains(&self, map: &ModuleMap) -> bool {
        self.hom.coordinates(map.matrix()).is_some_and(|c| self.coords.contains(&c))
    }

    /// The ideal as flattened matrices.
    pub fn maps(&self) -> Vec<ModuleMap> {
        self.coords.basis().iter().map(|c| self.hom.combine(c)).collect()
    }
}

fn check_restriction(phi_side: &Module, full: &Module, h: &Subgroup) -> Result<()> {
    let r = restrict(full, h)?;
    if !phi_side.same_action(&r) {
        return Err(Error::input(format!(
            "{} is not the restriction of {} to the subgroup",
            phi_side.label(),
            full.label()
        )));
    }
    Ok(())
}

/// `Tr_H^G(φ) = Σ_i ρ_N(g_i) φ ρ_M(g_i⁻¹)` for an H-map `φ : M↓ → N↓`.
pub fn relative_trace(phi: &ModuleMap, m: &Module, n: &Module, h: &Subgroup) -> Result<ModuleMap> {
    m.check_context(n)?;
    check_restriction(phi.source(), m, h)?;
    check_restriction(phi.target(), n, h)?;
    if !phi.is_equivariant() {
        return Err(Error::input("trace of a map that is not equivariant over the subgroup"));
    }
    let g = h.parent();
    let mut total = FieldMatrix::zeros(m.field(), n.dim(), m.dim());
    for &r in &left_cosets(h).reps {
        let left = n.act_left(r, phi.matrix());
        total = total.add(&m.act_right(&left, g.inverse_index(r)));
    }
    Ok(ModuleMap::trusted(m, n, total))
}

/// The trace image `Tr_E^G(Hom_E(M↓, N↓))` in coordinates of `hom`.
pub fn trace_image(hom: &HomSpace, e: &Subgroup) -> Result<Subspace> {
    let (m, n) = (hom.source(), hom.target());
    let f = m.field();
    let p = f.prime() as u64;
    let k = hom.dim();
    let (dm, dn) = (m.dim(), n.dim());
    if !e.parent().same_as(m.group()) {
        return Err(Error::input("trace from a subgroup of a different group"));
    }
    if k == 0 {
        return Ok(Subspace::zero(f, 0));
    }
    let g = e.parent();
    let reps = left_cosets(e).reps;
    let mut z = vec![vec![0u32; dn * dm]; k];
    for (t, &q) in hom.space().pivots().iter().enumerate() {
        let (it, jt) = (q / dm, q % dm);
        let zt = &mut z[t];
        for &r in &reps {
            let row = n.act_row(r, it);
            let col = m.act_col(g.inverse_index(r), jt);
            for (a, &ra) in row.iter().enumerate() {
                if ra == 0 {
                    continue;
                }
                let dst = &mut zt[a * dm..(a + 1) * dm];
                for (x, &cb) in dst.iter_mut().zip(&col) {
                    *x += ra * cb;
                }
            }
        }
        for x in zt.iter_mut() {
            *x %= p as u32;
        }
    }
    let mut image = Subspace::zero(f, k);
    if e.is_trivial() {
        for ab in 0..dn * dm {
            let v: Vec<u32> = (0..k).map(|t| z[t][ab]).collect();
            image.insert(&v);
            if image.dim() == k {
                break;
            }
        }
        return Ok(image);
    }
    let me = restrict(m, e)?;
    let ne = restrict(n, e)?;
    let local = hom_space(&me, &ne)?;
    for phi in local.space().basis() {
        let v: Vec<u32> = z
            .iter()
            .map(|zt| {
                let s: u64 = zt.iter().zip(phi).map(|(&a, &b)| (a * b) as u64).sum();
                (s % p) as u32
            })
            .collect();
        image.insert(&v);
        if image.dim() == k {
            break;
        }
    }
    Ok(image)
}

/// Witness data for a relative projectivity verdict.
#[derive(Clone, Debug)]
pub struct HigmanCertificate {
    pub subgroup: Subgroup,
    pub projective: bool,
    /// Decider (a): an H-endomorphism of `M↓` with trace `id`.
    pub trace_witness: Option<ModuleMap>,
    /// Decider (b): verdict of the counit-split test, `None` when skipped.
    pub counit_splits: Option<bool>,
    pub section: Option<ModuleMap>,
}

/// Decider (a) alone: whether `id_M` lies in the trace image from `h`.
pub fn trace_decider(m: &Module, h: &Subgroup) -> Result<Option<ModuleMap>> {
    let end = hom_space(m, m)?;
    let id = FieldMatrix::identity(m.field(), m.dim());
    let target = end.coordinates(&id).expect("identity is equivariant");
    let image = trace_image(&end, h)?;
    if !image.contains(&target) {
        return Ok(None);
    }
    // recover a preimage and confirm it with the full trace
    let me = restrict(m, h)?;
    let local = hom_space(&me, &me)?;
    let coords: Vec<Vec<u32>> = local
        .basis()
        .iter()
        .map(|phi| {
            let tr = relative_trace(phi, m, m, h)?;
            Ok(end.coordinates(tr.matrix()).expect("trace is G-equivariant"))
        })
        .collect::<Result<_>>()?;
    if coords.is_empty() {
        return Err(Error::Inconsistent("identity in an empty trace image".into()));
    }
    let a = FieldMatrix::from_columns(m.field(), end.dim(), &coords);
    let b = FieldMatrix::from_columns(m.field(), end.dim(), &[target]);
    let lambda = FieldMatrix::solve(&a, &b)?
        .ok_or_else(|| Error::Inconsistent("pivot trace image disagrees with full traces".into()))?;
    let phi = local.combine(&lambda.column(0));
    if !relative_trace(&phi, m, m, h)?.matrix().is_identity() {
        return Err(Error::Inconsistent("trace witness does not trace to the identity".into()));
    }
    Ok(Some(phi))
}

/// An equivariant section `s` with `g ∘ s = id`, if one exists.
pub fn find_section(g: &ModuleMap) -> Result<Option<ModuleMap>> {
    let (src, tgt) = (g.source(), g.target());
    let f = src.field();
    let d = tgt.dim();
    if d == 0 {
        return Ok(Some(ModuleMap::zero(tgt, src)));
    }
    let sections = hom_space(tgt, src)?;
    if sections.dim() == 0 {
        return Ok(None);
    }
    let cols: Vec<Vec<u32>> = sections.basis().iter().map(|s| g.matrix().mul(s.matrix()).into_data()).collect();
    let a = FieldMatrix::from_columns(f, d * d, &cols);
    let b = FieldMatrix::from_columns(f, d * d, &[FieldMatrix::identity(f, d).into_data()]);
    let Some(lambda) = FieldMatrix::solve(&a, &b)? else {
        return Ok(None);
    };
    let s = sections.combine(&lambda.column(0));
    debug_assert!(g.matrix().mul(s.matrix()).is_identity());
    Ok(Some(s))
}

/// Higman's criterion by both deciders; disagreement is an internal error.
pub fn is_relatively_projective(m: &Module, h: &Subgroup) -> Result<HigmanCertificate> {
    if !h.parent().same_as(m.group()) {
        return Err(Error::input("subgroup of a different group"));
    }
    if m.dim() == 0 || h.is_whole() {
        return Ok(HigmanCertificate {
            subgroup: h.clone(),
            projective: true,
            trace_witness: None,
            counit_splits: Some(true),
            section: None,
        });
    }
    let witness = if h.is_trivial() && m.dim() > TRACE_DIM_CAP {
        None
    } else {
        trace_decider(m, h)?
    };
    let a = if h.is_trivial() && m.dim() > TRACE_DIM_CAP { is_projective(m)? } else { witness.is_some() };
    let (counit_splits, section) = if m.dim() * h.index_in_parent() <= COUNIT_DECIDER_DIM_CAP {
        let (_, eta) = counit_map(m, h)?;
        let s = find_section(&eta)?;
        (Some(s.is_some()), s)
    } else {
        (None, None)
    };
    if counit_splits.is_some_and(|b| b != a) {
        return Err(Error::Inconsistent(format!(
            "Higman deciders disagree for {} relative to a subgroup of order {}: trace {a}, counit {}",
            m.label(),
            h.order(),
            !a
        )));
    }
    Ok(HigmanCertificate { subgroup: h.clone(), projective: a, trace_witness: witness, counit_splits, section })
}

/// Projectivity by fixed points: over a Sylow `P`, `M` is free exactly when
/// `|P| · dim M^P = dim M`.
pub fn is_projective(m: &Module) -> Result<bool> {
    if m.dim() == 0 {
        return Ok(true);
    }
    let p = sylow(m.group(), m.prime() as usize);
    if p.is_trivial() {
        return Ok(true);
    }
    if !m.dim().is_multiple_of(p.order()) {
        return Ok(false);
    }
    let mp = restrict(m, &p)?;
    let id = FieldMatrix::identity(m.field(), m.dim());
    let parts: Vec<FieldMatrix> = mp.generators().iter().map(|a| a.sub(&id)).collect();
    let refs: Vec<&FieldMatrix> = parts.iter().collect();
    let fixed = FieldMatrix::vstack(&refs).nullspace().len();
    Ok(fixed * p.order() == m.dim())
}

/// Whether `id_M` lies in the joint trace image of the family.
pub fn is_family_projective(m: &Module, fam: &SubgroupFamily) -> Result<bool> {
    if !fam.ambient().same_as(m.group()) {
        return Err(Error::input("family over a different group"));
    }
    if m.dim() == 0 {
        return Ok(true);
    }
    if fam.is_empty() {
        return Ok(false);
    }
    if fam.only_trivial() && m.dim() > TRACE_DIM_CAP {
        return is_projective(m);
    }
    if fam.maximal().iter().any(Subgroup::is_whole) {
        return Ok(true);
    }
    let end = hom_space(m, m)?;
    let id = end.coordinates(&FieldMatrix::identity(m.field(), m.dim())).expect("identity");
    let mut image = Subspace::zero(m.field(), end.dim());
    for e in fam.maximal() {
        image = image.sum(&trace_image(&end, e)?)?;
        if image.contains(&id) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// A vertex computation with its chain of Higman tests.
#[derive(Clone, Debug)]
pub struct VertexReport {
    pub vertex: Subgroup,
    pub sylow_start: Subgroup,
    pub chain: Vec<(Subgroup, bool)>,
}

/// Vertex of an indecomposable module, descending from the BFS Sylow subgroup.
pub fn vertex(m: &Module, seed: u64) -> Result<VertexReport> {
    let start = sylow(m.group(), m.prime() as usize);
    vertex_from(m, &start, seed)
}

/// Vertex descent from a given Sylow subgroup; `seed` orders the maximal
/// subgroups tried at each step.
pub fn vertex_from(m: &Module, start: &Subgroup, seed: u64) -> Result<VertexReport> {
    let p = m.prime() as usize;
    if !start.parent().same_as(m.group()) || crate::grp::p_part(m.group().order(), p) != start.order() {
        return Err(Error::input("vertex search must start from a Sylow subgroup of the module's group"));
    }
    if !is_indecomposable(m, seed)? {
        return Err(Error::input(format!("{} is decomposable; vertices need an indecomposable", m.label())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(module_seed(seed, m.label(), m.dim()));
    let mut current = start.clone();
    let mut chain = vec![(start.clone(), true)];
    'descend: loop {
        let mut maxes = maximal_subgroups(&current)?;
        maxes.shuffle(&mut rng);
        for q in maxes {
            let passed = is_relatively_projective(m, &q)?.projective;
            chain.push((q.clone(), passed));
            if passed {
                current = q;
                continue 'descend;
            }
        }
        break;
    }
    debug_assert!(current.is_p_group(p));
    Ok(VertexReport { vertex: current, sylow_start: start.clone(), chain })
}

/// Maps `M → N` factoring through some basket module.
pub fn factoring_ideal(m: &Module, n: &Module, basket: &[Module]) -> Result<Ideal> {
    let hom = hom_space(m, n)?;
    let mut coords = Subspace::zero(m.field(), hom.dim());
    for v in basket {
        if coords.dim() == hom.dim() {
            break;
        }
        let into = hom_space(m, v)?;
        let out = hom_space(v, n)?;
        for a in into.basis() {
            for b in out.basis() {
                let c = hom.coordinates(&b.matrix().mul(a.matrix())).expect("composite is equivariant");
                coords.insert(&c);
            }
        }
    }
    Ok(Ideal { hom, coords })
}

/// `Σ_E Tr_E^G(Hom_E(M↓, N↓))` over the family.
pub fn trace_ideal(m: &Module, n: &Module, fam: &SubgroupFamily) -> Result<Ideal> {
    if !fam.ambient().same_as(m.group()) {
        return Err(Error::input("family over a different group"));
    }
    let hom = hom_space(m, n)?;
    let mut coords = Subspace::zero(m.field(), hom.dim());
    for e in fam.maximal() {
        coords = coords.sum(&trace_image(&hom, e)?)?;
    }
    Ok(Ideal { hom, coords })
}

pub fn ideal(m: &Module, n: &Module, spec: &IdealSpec) -> Result<Ideal> {
    match spec {
        IdealSpec::TraceFamily(fam) => trace_ideal(m, n, fam),
        IdealSpec::Basket(b) => factoring_ideal(m, n, b),
    }
}

/// `Hom(M, N)` modulo an ideal.
#[derive(Clone, Debug)]
pub struct StableHom {
    pub dim: usize,
    pub hom_dim: usize,
    pub ideal_dim: usize,
    /// Hom-space basis maps whose classes form a basis of the quotient.
    pub lifted: Vec<ModuleMap>,
    pub ideal: Ideal,
}

pub fn stable_hom(m: &Module, n: &Module, spec: &IdealSpec) -> Result<StableHom> {
    let ideal = ideal(m, n, spec)?;
    let lifted = ideal
        .coords
        .complement_basis()
        .iter()
        .map(|c| ideal.hom.combine(c))
        .collect::<Vec<_>>();
    Ok(StableHom {
        dim: lifted.len(),
        hom_dim: ideal.hom.dim(),
        ideal_dim: ideal.dim(),
        lifted,
        ideal,
    })
}

/// The relative cone of `f : M → N` and its defining sequence
/// `N → C(f) → Ω⁻¹(M)`.
#[derive(Clone, Debug)]
pub struct Cone {
    pub cone: Module,
    pub c1: ModuleMap,
    pub c2: ModuleMap,
    pub omega_inv: Module,
    pub iota: ModuleMap,
    pub induction: Induction,
}

pub fn relative_cone(f: &ModuleMap, h: &Subgroup) -> Result<Cone> {
    let (m, n) = (f.source(), f.target());
    let (induction, iota) = g_unit_map(m, h)?;
    let big = direct_sum(&[induction.induced.clone(), n.clone()])?;
    let field = m.field();
    let pushout = FieldMatrix::vstack(&[iota.matrix(), &f.matrix().neg()]);
    let space = Subspace::from_row_space(&pushout.transpose());
    let (cone, proj) = quotient_by_subspace(&big.module, &space, format!("C({})", m.label()));
    let c1 = proj.compose(&big.injections[1])?;
    let (omega_inv, pi) = iota.cokernel();
    // c2 ∘ proj = [π | 0]; the free unit vectors give a right inverse of proj
    let mut is_pivot = vec![false; big.module.dim()];
    for &q in space.pivots() {
        is_pivot[q] = true;
    }
    let free: Vec<usize> = (0..big.module.dim()).filter(|&i| !is_pivot[i]).collect();
    let mut lift = FieldMatrix::zeros(field, big.module.dim(), free.len());
    for (c, &i) in free.iter().enumerate() {
        lift.set(i, c, 1);
    }
    let pi0 = FieldMatrix::hstack(&[pi.matrix(), &FieldMatrix::zeros(field, omega_inv.dim(), n.dim())]);
    let c2 = ModuleMap::trusted(&cone, &omega_inv, pi0.mul(&lift));
    Ok(Cone { cone, c1, c2, omega_inv, iota, induction })
}

/// `Ω⁻¹(M) = coker(ι_M)` relative to `h`.
pub fn omega_inverse(m: &Module, h: &Subgroup) -> Result<Module> {
    let (_, iota) = g_unit_map(m, h)?;
    Ok(iota.cokernel().0)
}

/// Whether `g` restricted to `h` has an equivariant section.
pub fn is_relatively_split_epi(g: &ModuleMap, h: &Subgroup) -> Result<bool> {
    let src = restrict(g.source(), h)?;
    let tgt = restrict(g.target(), h)?;
    let gh = ModuleMap::trusted(&src, &tgt, g.matrix().clone());
    Ok(find_section(&gh)?.is_some())
}

/// Checks on the cone sequence of one map.
#[derive(Clone, Debug)]
pub struct ConeCheck {
    pub cone_dim: usize,
    pub expected_dim: usize,
    pub exact: bool,
    pub splits_on_h: bool,
}

impl ConeCheck {
    pub fn passed(&self) -> bool {
        self.cone_dim == self.expected_dim && self.exact && self.splits_on_h
    }
}

/// `dim C(f) = dim N + dim M·([G:H] − 1)`, exactness of `N → C(f) → Ω⁻¹(M)`
/// and its splitting over `h`.
pub fn check_cone(f: &ModuleMap, h: &Subgroup) -> Result<(Cone, ConeCheck)> {
    let cone = relative_cone(f, h)?;
    let (m, n) = (f.source(), f.target());
    let dc = cone.cone.dim();
    let exact = cone.c1.is_equivariant()
        && cone.c2.is_equivariant()
        && cone.c2.compose(&cone.c1)?.is_zero()
        && cone.c1.rank() == n.dim()
        && cone.c2.rank() == cone.omega_inv.dim()
        && dc == n.dim() + cone.omega_inv.dim();
    let splits_on_h = is_relatively_split_epi(&cone.c2, h)?;
    let check = ConeCheck {
        cone_dim: dc,
        expected_dim: n.dim() + m.dim() * (h.index_in_parent() - 1),
        exact,
        splits_on_h,
    };
    Ok((cone, check))
}

/// The BFS Sylow subgroup and, unless it is normal, its conjugate by the
/// first element that moves it.
pub fn sylow_starts(g: &Arc<PermGroup>, p: usize) -> Result<Vec<Subgroup>> {
    let first = sylow(g, p);
    let mut out = vec![first.clone()];
    for x in g.elements() {
        let c = crate::grp::conjugate_subgroup(&first, x)?;
        if c != first {
            out.push(c);
            break;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adjfun::induce;
    use crate::ffmat::PrimeField;
    use crate::grp::{Permutation, DEFAULT_ORDER_CAP};
    use crate::repmod::{is_isomorphic, tensor};

    fn gf(p: u32) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn group(n: usize, gens: &[&str]) -> Arc<PermGroup> {
        let gens = gens.iter().map(|s| Permutation::parse(n, s).unwrap()).collect();
        PermGroup::enumerate(n, gens, DEFAULT_ORDER_CAP).unwrap()
    }

    fn sub(g: &Arc<PermGroup>, gens: &[&str]) -> Subgroup {
        Subgroup::generated(g, gens.iter().map(|s| Permutation::parse(g.degree(), s).unwrap()).collect()).unwrap()
    }

    fn s3() -> Arc<PermGroup> {
        group(3, &["(0 1 2)", "(0 1)"])
    }

    #[test]
    fn trace_examples() {
        let g = s3();
        let perm = Module::permutation(&g, gf(2));
        let whole = Subgroup::whole(&g);
        let end = hom_space(&perm, &perm).unwrap();
        for phi in end.basis() {
            assert_eq!(relative_trace(&phi, &perm, &perm, &whole).unwrap().matrix(), phi.matrix());
        }
        let c2 = sub(&g, &["(0 1)"]);
        let r = restrict(&perm, &c2).unwrap();
        let id = ModuleMap::identity(&r);
        let tr = relative_trace(&id, &perm, &perm, &c2).unwrap();
        assert_eq!(tr.into_matrix(), FieldMatrix::scalar(gf(2), 3, 3));
        let c3 = sub(&g, &["(0 1 2)"]);
        let r3 = restrict(&perm, &c3).unwrap();
        assert!(relative_trace(&ModuleMap::identity(&r3), &perm, &perm, &c3).unwrap().is_zero());
    }

    #[test]
    fn pivot_trace_image_matches_full_traces() {
        let s4 = group(4, &["(0 1 2 3)", "(0 1)"]);
        let m = Module::permutation(&s4, gf(2));
        let n = tensor(&m, &m).unwrap();
        for e in [sub(&s4, &["(0 1)"]), sub(&s4, &["(0 1)(2 3)", "(0 2)(1 3)"]), Subgroup::trivial(&s4)] {
            let hom = hom_space(&m, &n).unwrap();
            let fast = trace_image(&hom, &e).unwrap();
            let local = hom_space(&restrict(&m, &e).unwrap(), &restrict(&n, &e).unwrap()).unwrap();
            let mut slow = Subspace::zero(gf(2), hom.dim());
            for phi in local.basis() {
                let tr = relative_trace(&phi, &m, &n, &e).unwrap();
                assert!(tr.is_equivariant());
                slow.insert(&hom.coordinates(tr.matrix()).unwrap());
            }
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn higman_examples() {
        let g = s3();
        let t = Module::trivial(&g, gf(3));
        let c3 = sub(&g, &["(0 1 2)"]);
        let cert = is_relatively_projective(&t, &c3).unwrap();
        assert!(cert.projective && cert.counit_splits == Some(true));
        assert!(is_relatively_projective(&t, &Subgroup::whole(&g)).unwrap().projective);
        let cert = is_relatively_projective(&t, &Subgroup::trivial(&g)).unwrap();
        assert!(!cert.projective && cert.counit_splits == Some(false));
        let reg = Module::regular(&g, gf(3));
        assert!(is_relatively_projective(&reg, &Subgroup::trivial(&g)).unwrap().projective);
    }

    #[test]
    fn fixed_point_projectivity_agrees_with_traces() {
        let s4 = group(4, &["(0 1 2 3)", "(0 1)"]);
        let one = Subgroup::trivial(&s4);
        for p in [2, 3] {
            for m in [
                Module::permutation(&s4, gf(p)),
                Module::regular(&s4, gf(p)),
                Module::trivial(&s4, gf(p)),
                induce(&Module::trivial(one.group(), gf(p)), &one).unwrap().induced,
            ] {
                assert_eq!(is_projective(&m).unwrap(), trace_decider(&m, &one).unwrap().is_some(), "{p} {}", m.label());
            }
        }
    }

    #[test]
    fn family_projectivity_examples() {
        let g = s3();
        let t = Module::trivial(&g, gf(3));
        let whole = SubgroupFamily::single(&Subgroup::whole(&g));
        assert!(is_family_projective(&t, &whole).unwrap());
        let one = SubgroupFamily::single(&Subgroup::trivial(&g));
        assert!(!is_family_projective(&t, &one).unwrap());
        let syl = SubgroupFamily::single(&sylow(&g, 3));
        for m in [t.clone(), Module::permutation(&g, gf(3)), Module::regular(&g, gf(3))] {
            assert!(is_family_projective(&m, &syl).unwrap());
        }
    }

    #[test]
    fn family_closure() {
        let s4 = group(4, &["(0 1 2 3)", "(0 1)"]);
        let v4 = sub(&s4, &["(0 1)(2 3)", "(0 2)(1 3)"]);
        let fam = SubgroupFamily::closure(&s4, &[sub(&s4, &["(0 1)"])]).unwrap();
        assert_eq!(fam.members().len(), 7);
        assert_eq!(fam.maximal().len(), 1);
        assert!(fam.verify_closure().unwrap());
        let fam = SubgroupFamily::closure(&s4, &[v4]).unwrap();
        // 1, three double transpositions, V4
        assert_eq!(fam.members().len(), 5);
        assert!(fam.verify_closure().unwrap());
        let explicit = SubgroupFamily::explicit(&s4, vec![sub(&s4, &["(0 1)"])]).unwrap();
        assert!(!explicit.verify_closure().unwrap());
    }

    #[test]
    fn vertex_examples() {
        let g = s3();
        let v = vertex(&Module::trivial(&g, gf(3)), 0).unwrap();
        assert_eq!(v.vertex.order(), 3);
        let v = vertex(&Module::trivial(&g, gf(5)), 0).unwrap();
        assert!(v.vertex.is_trivial());
        let c3 = group(3, &["(0 1 2)"]);
        let v = vertex(&Module::regular(&c3, gf(3)), 0).unwrap();
        assert!(v.vertex.is_trivial());
        let reg = Module::regular(&g, gf(3));
        assert!(vertex(&reg, 0).is_err());
    }

    #[test]
    fn ideal_examples() {
        let g = s3();
        let t = Module::trivial(&g, gf(3));
        let perm = Module::permutation(&g, gf(3));
        let full = factoring_ideal(&perm, &t, std::slice::from_ref(&t)).unwrap();
        assert_eq!(full.dim(), full.hom.dim());
        assert_eq!(factoring_ideal(&perm, &t, &[Module::zero(&g, gf(3))]).unwrap().dim(), 0);
        let sum = direct_sum(&[perm.clone(), t.clone()]).unwrap().module;
        let f = factoring_ideal(&perm, &t, &[sum]).unwrap();
        assert_eq!(f.dim(), f.hom.dim());
        let whole = SubgroupFamily::single(&Subgroup::whole(&g));
        let ti = trace_ideal(&perm, &t, &whole).unwrap();
        assert_eq!(ti.dim(), ti.hom.dim());
        let syl = SubgroupFamily::single(&sylow(&g, 3));
        let ti = trace_ideal(&perm, &perm, &syl).unwrap();
        assert_eq!(ti.dim(), ti.hom.dim());
        let one = SubgroupFamily::single(&Subgroup::trivial(&g));
        assert_eq!(trace_ideal(&t, &t, &one).unwrap().dim(), 0);
    }

    #[test]
    fn trace_ideal_matches_factoring_through_induced() {
        let s4 = group(4, &["(0 1 2 3)", "(0 1)"]);
        let mods = [Module::permutation(&s4, gf(2)), Module::trivial(&s4, gf(2))];
        for e in [sub(&s4, &["(0 1)"]), sub(&s4, &["(0 1 2 3)", "(0 2)"]), Subgroup::trivial(&s4)] {
            for m in &mods {
                for n in &mods {
                    let ti = trace_ideal(m, n, &SubgroupFamily::single(&e)).unwrap();
                    let up = induce(&restrict(m, &e).unwrap(), &e).unwrap().induced;
                    let fi = factoring_ideal(m, n, &[up]).unwrap();
                    assert_eq!(ti.coords, fi.coords);
                }
            }
        }
    }

    #[test]
    fn stable_hom_examples() {
        let g = s3();
        let t = Module::trivial(&g, gf(3));
        assert_eq!(stable_hom(&t, &t, &IdealSpec::Basket(vec![t.clone()])).unwrap().dim, 0);
        let one = SubgroupFamily::single(&Subgroup::trivial(&g));
        let sh = stable_hom(&t, &t, &IdealSpec::TraceFamily(one.clone())).unwrap();
        assert_eq!(sh.dim, 1);
        let reg = Module::regular(&g, gf(3));
        for n in [t.clone(), reg.clone(), Module::permutation(&g, gf(3))] {
            assert_eq!(stable_hom(&reg, &n, &IdealSpec::TraceFamily(one.clone())).unwrap().dim, 0);
        }
    }

    #[test]
    fn cone_examples() {
        let s4 = group(4, &["(0 1 2 3)", "(0 1)"]);
        let h = sub(&s4, &["(0 1 2)", "(0 1)"]);
        let m = Module::permutation(&s4, gf(3));
        let n = Module::trivial(&s4, gf(3));
        let idx = 4;
        let id = ModuleMap::identity(&m);
        let c = relative_cone(&id, &h).unwrap();
        assert!(is_isomorphic(&c.cone, &c.induction.induced, 0).unwrap().is_some());
        assert!(is_relatively_projective(&c.cone, &h).unwrap().projective);
        let zero = ModuleMap::zero(&m, &n);
        let c = relative_cone(&zero, &h).unwrap();
        assert_eq!(c.cone.dim(), n.dim() + m.dim() * (idx - 1));
        let split = direct_sum(&[n.clone(), c.omega_inv.clone()]).unwrap().module;
        assert!(is_isomorphic(&c.cone, &split, 0).unwrap().is_some());
        for cone in [relative_cone(&id, &h).unwrap(), c] {
            assert!(cone.c1.is_equivariant() && cone.c2.is_equivariant());
            assert!(cone.c2.compose(&cone.c1).unwrap().is_zero());
            assert_eq!(cone.c1.rank(), cone.c1.source().dim());
            assert_eq!(cone.c2.rank(), cone.omega_inv.dim());
            assert!(is_relatively_split_epi(&cone.c2, &h).unwrap());
        }
    }

    #[test]
    fn cone_checks_pass_on_random_maps() {
        let s4 = group(4, &["(0 1 2 3)", "(0 1)"]);
        let h = sub(&s4, &["(0 1 2 3)", "(0 2)"]);
        let m = Module::permutation(&s4, gf(2));
        let hom = hom_space(&m, &m).unwrap();
        for c in crate::repmod::normalized_combinations(2, hom.dim()).take(6) {
            let (_, check) = check_cone(&hom.combine(&c), &h).unwrap();
            assert!(check.passed(), "{check:?}");
        }
    }

    #[test]
    fn sylow_starts_examples() {
        let s4 = group(4, &["(0 1 2 3)", "(0 1)"]);
        let starts = sylow_starts(&s4, 3).unwrap();
        assert_eq!(starts.len(), 2);
        assert!(are_conjugate(&starts[0], &starts[1]).unwrap().is_some());
        let a4 = group(4, &["(0 1 2)", "(0 1)(2 3)"]);
        assert_eq!(sylow_starts(&a4, 2).unwrap().len(), 1);
    }

    #[test]
    fn omega_inverse_examples() {
        let g = s3();
        let t = Module::trivial(&g, gf(3));
        assert_eq!(omega_inverse(&t, &Subgroup::whole(&g)).unwrap().dim(), 0);
        let c3 = sub(&g, &["(0 1 2)"]);
        let om = omega_inverse(&t, &c3).unwrap();
        assert_eq!(om.dim(), 1);
        // the transposition acts by -1: the sign module
        assert_eq!(om.gen(1).get(0, 0), 2);
        assert_eq!(om.gen(0).get(0, 0), 1);
    }

    #[test]
    fn split_epi_examples() {
        let g = s3();
        let c3 = sub(&g, &["(0 1 2)"]);
        let perm = Module::permutation(&g, gf(3));
        assert!(is_relatively_split_epi(&ModuleMap::identity(&perm), &c3).unwrap());
        let t = Module::trivial(&g, gf(3));
        assert!(!is_relatively_split_epi(&ModuleMap::zero(&perm, &t), &c3).unwrap());
        let (_, eta) = counit_map(&perm, &c3).unwrap();
        assert!(is_relatively_split_epi(&eta, &c3).unwrap());
    }
}
