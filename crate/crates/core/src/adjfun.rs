//! Restriction and induction with their units and counits.
//!
//! The induced module `M↑ᴳ` has basis `g_i ⊗ v` over the left coset
//! representatives `g_i` of `H`, identity first. A group element `x` sends
//! `g_i ⊗ v` to `g_j ⊗ h v` where `x g_i = g_j h`, so every action matrix is
//! block monomial.

use std::sync::Arc;

use crate::decomp::{indecomposable_summands, Summand};
use crate::error::{Error, Result};
use crate::ffmat::FieldMatrix;
use crate::grp::{conjugate_subgroup, double_coset_reps, intersect, left_cosets, LeftCosets, Permutation, PermGroup, Subgroup};
use crate::repmod::{direct_sum, is_isomorphic, Module, ModuleMap};

fn check_over(m: &Module, group: &Arc<PermGroup>, what: &str) -> Result<()> {
    if !m.group().same_as(group) {
        return Err(Error::input(format!("{} is not a module for the {what}", m.label())));
    }
    Ok(())
}

/// `M↓_H` for a module over `H`'s parent.
pub fn restrict(m: &Module, h: &Subgroup) -> Result<Module> {
    check_over(m, h.parent(), "parent of the subgroup")?;
    if h.is_whole() && h.group().same_as(m.group()) {
        return Ok(m.clone());
    }
    let gens = (0..h.group().generators().len())
        .map(|s| {
            let x = h.embed(h.group().right_gen(0, s));
            m.act_index(x).into_owned()
        })
        .collect();
    Ok(Module::trusted(h.group().clone(), m.field(), m.dim(), gens, format!("res({})", m.label())))
}

/// An induced module with the coset bookkeeping that defines it.
#[derive(Clone, Debug)]
pub struct Induction {
    pub subgroup: Subgroup,
    pub cosets: LeftCosets,
    pub source: Module,
    pub induced: Module,
    /// `sigma[s][i] = j` and `h_parts[s][i]` (index in the subgroup) with `s·g_i = g_j·h`.
    pub sigma: Vec<Vec<usize>>,
    pub h_parts: Vec<Vec<usize>>,
}

/// `(j, h)` with `x·g_i = g_j·h`, `h` as an index in the subgroup.
fn coset_step(h: &Subgroup, cosets: &LeftCosets, x: usize, i: usize) -> (usize, usize) {
    let g = h.parent();
    let y = g.mul_index(x, cosets.reps[i]);
    let j = cosets.coset_of[y];
    let hp = g.mul_index(g.inverse_index(cosets.reps[j]), y);
    let local = h.group().index_of(g.element(hp)).expect("coset decomposition lands in H");
    (j, local)
}

/// `M↑ᴳ` for a module over the subgroup `h`.
pub fn induce(m: &Module, h: &Subgroup) -> Result<Induction> {
    check_over(m, h.group(), "subgroup being induced from")?;
    let g = h.parent().clone();
    let cosets = left_cosets(h);
    let n = cosets.reps.len();
    let dm = m.dim();
    let f = m.field();
    let mut sigma = Vec::new();
    let mut h_parts = Vec::new();
    let mut gens = Vec::new();
    for s in 0..g.generators().len() {
        let x = g.right_gen(0, s);
        let mut sig = Vec::with_capacity(n);
        let mut hs = Vec::with_capacity(n);
        let mut a = FieldMatrix::zeros(f, n * dm, n * dm);
        for i in 0..n {
            let (j, hl) = coset_step(h, &cosets, x, i);
            a.set_block(j * dm, i * dm, &m.act_index(hl));
            sig.push(j);
            hs.push(hl);
        }
        sigma.push(sig);
        h_parts.push(hs);
        gens.push(a);
    }
    let induced = Module::trusted(g, f, n * dm, gens, format!("ind({})", m.label()));
    Ok(Induction { subgroup: h.clone(), cosets, source: m.clone(), induced, sigma, h_parts })
}

impl Induction {
    pub fn index(&self) -> usize {
        self.cosets.reps.len()
    }

    pub fn module(&self) -> &Module {
        &self.induced
    }

    /// The action of the parent element with index `x`, built blockwise.
    pub fn act(&self, x: usize) -> FieldMatrix {
        let dm = self.source.dim();
        let n = self.index();
        let mut a = FieldMatrix::zeros(self.source.field(), n * dm, n * dm);
        for i in 0..n {
            let (j, hl) = coset_step(&self.subgroup, &self.cosets, x, i);
            a.set_block(j * dm, i * dm, &self.source.act_index(hl));
        }
        a
    }

    /// `(M↑ᴳ)↓_K` using the blockwise action.
    pub fn restrict_to(&self, k: &Subgroup) -> Result<Module> {
        if !k.parent().same_as(self.induced.group()) {
            return Err(Error::input("restriction to a subgroup of a different group"));
        }
        let gens = (0..k.group().generators().len())
            .map(|s| self.act(k.embed(k.group().right_gen(0, s))))
            .collect();
        Ok(Module::trusted(
            k.group().clone(),
            self.induced.field(),
            self.induced.dim(),
            gens,
            format!("res({})", self.induced.label()),
        ))
    }

    /// `(M↑ᴳ)↓_H`, the target of the unit.
    pub fn restricted(&self) -> Module {
        self.restrict_to(&self.subgroup).expect("subgroup of the induced group")
    }

    /// `ε_M : M → (M↑ᴳ)↓_H`, the identity-coset embedding.
    pub fn unit_map(&self) -> ModuleMap {
        let f = self.source.field();
        let dm = self.source.dim();
        let mut e = FieldMatrix::zeros(f, self.induced.dim(), dm);
        e.set_block(0, 0, &FieldMatrix::identity(f, dm));
        ModuleMap::trusted(&self.source, &self.restricted(), e)
    }

    /// `p_1 : (M↑ᴳ)↓_H → M`, projection onto the identity coset block.
    pub fn retraction(&self) -> ModuleMap {
        let f = self.source.field();
        let dm = self.source.dim();
        let mut p = FieldMatrix::zeros(f, dm, self.induced.dim());
        p.set_block(0, 0, &FieldMatrix::identity(f, dm));
        ModuleMap::trusted(&self.restricted(), &self.source, p)
    }

    /// `U(M)`: the non-identity coset blocks of `(M↑ᴳ)↓_H`, with inclusion
    /// and projection.
    pub fn u_summand(&self) -> (Module, ModuleMap, ModuleMap) {
        let f = self.source.field();
        let dm = self.source.dim();
        let total = self.induced.dim();
        let restricted = self.restricted();
        let rest = total - dm;
        let gens = restricted
            .generators()
            .iter()
            .map(|a| a.submatrix(dm..total, dm..total))
            .collect();
        let u = Module::trusted(
            self.subgroup.group().clone(),
            f,
            rest,
            gens,
            format!("U({})", self.source.label()),
        );
        let mut incl = FieldMatrix::zeros(f, total, rest);
        incl.set_block(dm, 0, &FieldMatrix::identity(f, rest));
        let proj = incl.transpose();
        (
            u.clone(),
            ModuleMap::trusted(&u, &restricted, incl),
            ModuleMap::trusted(&restricted, &u, proj),
        )
    }

    /// `φ↑ : M↑ᴳ → N↑ᴳ`, blockwise `φ`.
    pub fn induce_map(&self, target: &Induction, phi: &ModuleMap) -> Result<ModuleMap> {
        if self.subgroup != target.subgroup {
            return Err(Error::input("inductions from different subgroups"));
        }
        if !phi.source().same_action(&self.source) || !phi.target().same_action(&target.source) {
            return Err(Error::input("map does not run between the induced sources"));
        }
        let n = self.index();
        let blocks: Vec<&FieldMatrix> = (0..n).map(|_| phi.matrix()).collect();
        let m = FieldMatrix::block_diag(self.source.field(), &blocks);
        Ok(ModuleMap::trusted(&self.induced, &target.induced, m))
    }
}

/// `ε_M : M → (M↑ᴳ)↓_H`.
pub fn unit_map(m: &Module, h: &Subgroup) -> Result<ModuleMap> {
    Ok(induce(m, h)?.unit_map())
}

/// `η_M : (M↓_H)↑ᴳ → M`, block `i` acting by `ρ(g_i)`.
pub fn counit_map(m: &Module, h: &Subgroup) -> Result<(Induction, ModuleMap)> {
    let ind = induce(&restrict(m, h)?, h)?;
    let blocks: Vec<FieldMatrix> = ind.cosets.reps.iter().map(|&r| m.act_index(r).into_owned()).collect();
    let refs: Vec<&FieldMatrix> = blocks.iter().collect();
    let eta = FieldMatrix::hstack(&refs);
    let map = ModuleMap::trusted(&ind.induced, m, eta);
    Ok((ind, map))
}

/// `ι_M : M → (M↓_H)↑ᴳ`, block `i` acting by `ρ(g_i⁻¹)`.
pub fn g_unit_map(m: &Module, h: &Subgroup) -> Result<(Induction, ModuleMap)> {
    let ind = induce(&restrict(m, h)?, h)?;
    let g = h.parent();
    let blocks: Vec<FieldMatrix> = ind
        .cosets
        .reps
        .iter()
        .map(|&r| m.act_index(g.inverse_index(r)).into_owned())
        .collect();
    let refs: Vec<&FieldMatrix> = blocks.iter().collect();
    let iota = FieldMatrix::vstack(&refs);
    let map = ModuleMap::trusted(m, &ind.induced, iota);
    Ok((ind, map))
}

/// `ˣM` over `ˣD`: the same matrices on the conjugated generators.
pub fn conjugate_module(m: &Module, d: &Subgroup, x: &Permutation) -> Result<(Subgroup, Module)> {
    check_over(m, d.group(), "subgroup being conjugated")?;
    let cd = conjugate_subgroup(d, x)?;
    let cm = Module::trusted(
        cd.group().clone(),
        m.field(),
        m.dim(),
        m.generators().to_vec(),
        format!("{x}^{}", m.label()),
    );
    Ok((cd, cm))
}

/// Outcome of a Mackey comparison.
#[derive(Clone, Debug)]
pub struct MackeyReport {
    pub double_cosets: usize,
    pub piece_dims: Vec<usize>,
    pub expected_dim: usize,
    pub restricted_dim: usize,
    pub isomorphic: bool,
    pub lhs_summand_dims: Vec<usize>,
    pub rhs_summand_dims: Vec<usize>,
    pub witness: Option<ModuleMap>,
}

impl MackeyReport {
    pub fn passed(&self) -> bool {
        self.isomorphic && self.expected_dim == self.restricted_dim
    }
}

/// Compares `(M↑ᴳ)↓_K` with `⊕_x (ˣM↓_{ˣH∩K})↑ᴷ` over `x ∈ K\G/H`.
pub fn mackey_check(m: &Module, h: &Subgroup, k: &Subgroup, seed: u64) -> Result<MackeyReport> {
    let ind = induce(m, h)?;
    let lhs = ind.restrict_to(k)?;
    let reps = double_coset_reps(k, h)?;
    let mut pieces = Vec::new();
    let mut expected = 0;
    for x in &reps {
        let (xh, xm) = conjugate_module(m, h, x)?;
        let meet = intersect(&xh, k)?;
        let down = restrict(&xm, &meet.as_subgroup_of(&xh)?)?;
        let up = induce(&down, &meet.as_subgroup_of(k)?)?;
        expected += k.order() / meet.order() * m.dim();
        pieces.push(up.induced);
    }
    let piece_dims = pieces.iter().map(Module::dim).collect();
    let sum = direct_sum(&pieces)?;
    let lhs_dec = indecomposable_summands(&lhs, seed)?;
    let mut rhs_parts = Vec::new();
    for (piece, inj) in pieces.iter().zip(&sum.injections) {
        for s in indecomposable_summands(piece, seed)?.summands {
            rhs_parts.push((inj.compose(&s.inclusion)?, s.module));
        }
    }
    let witness = if lhs.dim() == sum.module.dim() {
        matched_witness(&lhs_dec.summands, &rhs_parts, &lhs, &sum.module, seed)?
    } else {
        None
    };
    let mut lhs_summand_dims = lhs_dec.dims();
    lhs_summand_dims.sort_unstable();
    let mut rhs_summand_dims: Vec<usize> = rhs_parts.iter().map(|(_, m)| m.dim()).collect();
    rhs_summand_dims.sort_unstable();
    Ok(MackeyReport {
        double_cosets: reps.len(),
        piece_dims,
        expected_dim: expected,
        restricted_dim: lhs.dim(),
        isomorphic: witness.is_some(),
        lhs_summand_dims,
        rhs_summand_dims,
        witness,
    })
}

/// Pairs isomorphic indecomposables on both sides and assembles `Σ ι_j ∘ θ_ij ∘ π_i`.
fn matched_witness(
    lhs: &[Summand],
    rhs: &[(ModuleMap, Module)],
    source: &Module,
    target: &Module,
    seed: u64,
) -> Result<Option<ModuleMap>> {
    if lhs.len() != rhs.len() {
        return Ok(None);
    }
    let mut used = vec![false; rhs.len()];
    let mut total = ModuleMap::zero(source, target);
    for s in lhs {
        let mut hit = None;
        for (j, (incl, m)) in rhs.iter().enumerate() {
            if used[j] || m.dim() != s.module.dim() {
                continue;
            }
            if let Some(theta) = is_isomorphic(&s.module, m, seed)? {
                hit = Some((j, incl.compose(&theta)?.compose(&s.projection)?));
                break;
            }
        }
        let Some((j, piece)) = hit else { return Ok(None) };
        used[j] = true;
        total = total.add(&piece)?;
    }
    if !total.is_equivariant() || !total.is_isomorphism() {
        return Err(Error::Inconsistent("assembled Mackey isomorphism fails its check".into()));
    }
    Ok(Some(total))
}
