//! kG-modules as matrix representations over GF(p).
//!
//! A module stores one matrix per group generator; the action of an arbitrary
//! element is the product along its BFS word. Hom spaces are computed by
//! spinning the source module from a few generating vectors, so the unknowns
//! are the images of those generators rather than whole matrices.

use std::borrow::Cow;
use std::fmt;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::{Arc, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ffmat::{FieldMatrix, PrimeField, Subspace};
use crate::grp::PermGroup;

/// Largest `|G|·d²` for which the full element table is cached.
const ACT_TABLE_LIMIT: usize = 1 << 24;

/// Random combinations tried by the isomorphism search.
pub const ISO_RANDOM_TRIES: usize = 200;

/// Exhaustive searches run only when `p^k` is at most this.
pub const EXHAUSTIVE_LIMIT: u64 = 50_000;

struct Inner {
    group: Arc<PermGroup>,
    field: PrimeField,
    dim: usize,
    gens: Vec<FieldMatrix>,
    label: String,
    table: OnceLock<Vec<FieldMatrix>>,
    end_dim: OnceLock<usize>,
    certified: AtomicBool,
}

/// A finite-dimensional kG-module.
#[derive(Clone)]
pub struct Module {
    inner: Arc<Inner>,
}

impl fmt::Debug for Module {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Module({:?}, dim {}, over {:?})", self.label(), self.dim(), self.field())
    }
}

impl Module {
    /// Validated constructor for externally supplied actions.
    pub fn new(
        group: Arc<PermGroup>,
        field: PrimeField,
        gens: Vec<FieldMatrix>,
        label: impl Into<String>,
    ) -> Result<Module> {
        if gens.len() != group.generators().len() {
            return Err(Error::input(format!(
                "{} generator matrices for a group with {} generators",
                gens.len(),
                group.generators().len()
            )));
        }
        let dim = gens.first().map_or(0, FieldMatrix::rows);
        for (s, a) in gens.iter().enumerate() {
            if a.rows() != dim || a.cols() != dim {
                return Err(Error::input(format!(
                    "generator {s} acts by a {}x{} matrix, expected {dim}x{dim}",
                    a.rows(),
                    a.cols()
                )));
            }
            if a.field() != field {
                return Err(Error::input(format!("generator {s} matrix is over the wrong field")));
            }
            if !a.is_invertible() {
                return Err(Error::input(format!("generator {s} acts by a singular matrix")));
            }
        }
        let m = Module::trusted(group, field, dim, gens, label);
        m.verify()?;
        Ok(m)
    }

    /// Constructor for actions that are correct by construction.
    pub(crate) fn trusted(
        group: Arc<PermGroup>,
        field: PrimeField,
        dim: usize,
        gens: Vec<FieldMatrix>,
        label: impl Into<String>,
    ) -> Module {
        debug_assert_eq!(gens.len(), group.generators().len());
        Module {
            inner: Arc::new(Inner {
                group,
                field,
                dim,
                gens,
                label: label.into(),
                table: OnceLock::new(),
                end_dim: OnceLock::new(),
                certified: AtomicBool::new(false),
            }),
        }
    }

    /// Checks `ρ(g)ρ(s) = ρ(gs)` for every element `g` and generator `s`.
    pub fn verify(&self) -> Result<()> {
        let g = self.group();
        for i in 0..g.order() {
            let a = self.act_index(i);
            for (s, gen) in self.inner.gens.iter().enumerate() {
                let j = g.right_gen(i, s);
                if a.mul(gen) != *self.act_index(j) {
                    return Err(Error::input(format!(
                        "matrices do not define a representation: ρ({})ρ({}) ≠ ρ({})",
                        g.element(i),
                        g.generators()[s],
                        g.element(j)
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn trivial(group: &Arc<PermGroup>, field: PrimeField) -> Module {
        let gens = vec![FieldMatrix::identity(field, 1); group.generators().len()];
        Module::trusted(group.clone(), field, 1, gens, "trivial")
    }

    pub fn zero(group: &Arc<PermGroup>, field: PrimeField) -> Module {
        let gens = vec![FieldMatrix::zeros(field, 0, 0); group.generators().len()];
        Module::trusted(group.clone(), field, 0, gens, "zero")
    }

    /// The left regular module, basis `e_g` indexed by the group's elements.
    pub fn regular(group: &Arc<PermGroup>, field: PrimeField) -> Module {
        let n = group.order();
        let gens = group
            .generators()
            .iter()
            .map(|s| {
                let si = group.index_of(s).expect("generator is an element");
                let mut a = FieldMatrix::zeros(field, n, n);
                for x in 0..n {
                    a.set(group.mul_index(si, x), x, 1);
                }
                a
            })
            .collect();
        Module::trusted(group.clone(), field, n, gens, "regular")
    }

    /// The natural permutation module on the points.
    pub fn permutation(group: &Arc<PermGroup>, field: PrimeField) -> Module {
        let n = group.degree();
        let gens = group
            .generators()
            .iter()
            .map(|s| {
                let mut a = FieldMatrix::zeros(field, n, n);
                for i in 0..n {
                    a.set(s.image(i), i, 1);
                }
                a
            })
            .collect();
        Module::trusted(group.clone(), field, n, gens, "permutation")
    }

    pub fn group(&self) -> &Arc<PermGroup> {
        &self.inner.group
    }

    pub fn field(&self) -> PrimeField {
        self.inner.field
    }

    pub fn prime(&self) -> u32 {
        self.inner.field.prime()
    }

    pub fn dim(&self) -> usize {
        self.inner.dim
    }

    pub fn label(&self) -> &str {
        &self.inner.label
    }

    pub fn generators(&self) -> &[FieldMatrix] {
        &self.inner.gens
    }

    pub fn gen(&self, s: usize) -> &FieldMatrix {
        &self.inner.gens[s]
    }

    /// Same action under a new label; the cache and certificate carry over.
    pub fn relabel(&self, label: impl Into<String>) -> Module {
        let m = Module::trusted(
            self.inner.group.clone(),
            self.inner.field,
            self.inner.dim,
            self.inner.gens.clone(),
            label,
        );
        if let Some(t) = self.inner.table.get() {
            let _ = m.inner.table.set(t.clone());
        }
        if let Some(&e) = self.inner.end_dim.get() {
            let _ = m.inner.end_dim.set(e);
        }
        if self.is_certified_indecomposable() {
            m.mark_indecomposable();
        }
        m
    }

    pub fn is_certified_indecomposable(&self) -> bool {
        self.inner.certified.load(Ordering::Acquire)
    }

    pub(crate) fn mark_indecomposable(&self) {
        self.inner.certified.store(true, Ordering::Release);
    }

    /// Same group and field.
    pub fn same_context(&self, other: &Module) -> bool {
        self.inner.field == other.inner.field && self.inner.group.same_as(&other.inner.group)
    }

    /// Same group, field and generator matrices.
    pub fn same_action(&self, other: &Module) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.same_context(other) && self.inner.gens == other.inner.gens)
    }

    pub(crate) fn check_context(&self, other: &Module) -> Result<()> {
        if self.inner.field != other.inner.field {
            return Err(Error::input(format!(
                "modules over different fields: {:?} and {:?}",
                self.inner.field, other.inner.field
            )));
        }
        if !self.inner.group.same_as(&other.inner.group) {
            return Err(Error::input("modules for different groups"));
        }
        Ok(())
    }

    fn word_product(&self, i: usize) -> FieldMatrix {
        let mut a = FieldMatrix::identity(self.field(), self.dim());
        for &s in self.group().word(i) {
            a = a.mul(self.gen(s));
        }
        a
    }

    fn table(&self) -> Option<&Vec<FieldMatrix>> {
        let g = self.group();
        if g.order().saturating_mul(self.dim() * self.dim()) > ACT_TABLE_LIMIT {
            return None;
        }
        Some(self.inner.table.get_or_init(|| {
            let mut t = Vec::with_capacity(g.order());
            t.push(FieldMatrix::identity(self.field(), self.dim()));
            for i in 1..g.order() {
                let (j, s) = g.step(i).expect("non-identity element");
                let next = t[j].mul(self.gen(s));
                t.push(next);
            }
            t
        }))
    }

    /// `ρ(g)` for the group element with index `i`.
    pub fn act_index(&self, i: usize) -> Cow<'_, FieldMatrix> {
        match self.table() {
            Some(t) => Cow::Borrowed(&t[i]),
            None => Cow::Owned(self.word_product(i)),
        }
    }

    pub fn act(&self, g: &crate::grp::Permutation) -> Result<FieldMatrix> {
        let i = self
            .group()
            .index_of(g)
            .ok_or_else(|| Error::input(format!("{g} is not an element of the module's group")))?;
        Ok(self.act_index(i).into_owned())
    }

    /// `ρ(g_i)·x` without forming `ρ(g_i)` when no table is cached.
    pub fn act_left(&self, i: usize, x: &FieldMatrix) -> FieldMatrix {
        if let Some(t) = self.table() {
            return t[i].mul(x);
        }
        let mut out = x.clone();
        for &s in self.group().word(i).iter().rev() {
            out = self.gen(s).mul(&out);
        }
        out
    }

    /// `x·ρ(g_i)`.
    pub fn act_right(&self, x: &FieldMatrix, i: usize) -> FieldMatrix {
        if let Some(t) = self.table() {
            return x.mul(&t[i]);
        }
        let mut out = x.clone();
        for &s in self.group().word(i) {
            out = out.mul(self.gen(s));
        }
        out
    }

    /// Row `r` of `ρ(g_x)`.
    pub fn act_row(&self, x: usize, r: usize) -> Vec<u32> {
        if let Some(t) = self.table() {
            return t[x].row(r).to_vec();
        }
        let f = self.field();
        let mut v = vec![0u32; self.dim()];
        v[r] = 1;
        for &s in self.group().word(x) {
            let a = self.gen(s);
            let mut out = vec![0u64; self.dim()];
            for (i, &vi) in v.iter().enumerate() {
                if vi != 0 {
                    for (o, &aij) in out.iter_mut().zip(a.row(i)) {
                        *o += (vi * aij) as u64;
                    }
                }
            }
            v = out.into_iter().map(|o| (o % f.prime() as u64) as u32).collect();
        }
        v
    }

    /// Column `c` of `ρ(g_x)`.
    pub fn act_col(&self, x: usize, c: usize) -> Vec<u32> {
        if let Some(t) = self.table() {
            return t[x].column(c);
        }
        let mut v = vec![0u32; self.dim()];
        v[c] = 1;
        for &s in self.group().word(x).iter().rev() {
            v = self.gen(s).mul_vec(&v);
        }
        v
    }

    /// `dim End(M)`, cached.
    pub fn end_dim(&self) -> usize {
        *self.inner.end_dim.get_or_init(|| {
            hom_space(self, self).expect("module is compatible with itself").dim()
        })
    }
}

/// An equivariant linear map, `matrix` of shape `target.dim × source.dim`.
#[derive(Clone)]
pub struct ModuleMap {
    source: Module,
    target: Module,
    matrix: FieldMatrix,
}

impl fmt::Debug for ModuleMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ModuleMap({} -> {}, {:?})", self.source.label(), self.target.label(), self.matrix)
    }
}

impl ModuleMap {
    pub fn new(source: &Module, target: &Module, matrix: FieldMatrix) -> Result<ModuleMap> {
        source.check_context(target)?;
        if matrix.rows() != target.dim() || matrix.cols() != source.dim() {
            return Err(Error::input(format!(
                "map matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                target.dim(),
                source.dim()
            )));
        }
        if matrix.field() != source.field() {
            return Err(Error::input("map matrix is over the wrong field"));
        }
        let map = ModuleMap::trusted(source, target, matrix);
        if !map.is_equivariant() {
            return Err(Error::input("matrix does not commute with the group action"));
        }
        Ok(map)
    }

    pub(crate) fn trusted(source: &Module, target: &Module, matrix: FieldMatrix) -> ModuleMap {
        debug_assert_eq!((matrix.rows(), matrix.cols()), (target.dim(), source.dim()));
        ModuleMap { source: source.clone(), target: target.clone(), matrix }
    }

    pub fn identity(m: &Module) -> ModuleMap {
        ModuleMap::trusted(m, m, FieldMatrix::identity(m.field(), m.dim()))
    }

    pub fn zero(source: &Module, target: &Module) -> ModuleMap {
        ModuleMap::trusted(source, target, FieldMatrix::zeros(source.field(), target.dim(), source.dim()))
    }

    pub fn source(&self) -> &Module {
        &self.source
    }

    pub fn target(&self) -> &Module {
        &self.target
    }

    pub fn matrix(&self) -> &FieldMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> FieldMatrix {
        self.matrix
    }

    /// `X·ρ_src(s) = ρ_tgt(s)·X` for every generator `s`.
    pub fn is_equivariant(&self) -> bool {
        self.source
            .generators()
            .iter()
            .zip(self.target.generators())
            .all(|(a, b)| self.matrix.mul(a) == b.mul(&self.matrix))
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &ModuleMap) -> Result<ModuleMap> {
        if !first.target.same_action(&self.source) {
            return Err(Error::input(format!(
                "cannot compose: {} is not the source {}",
                first.target.label(),
                self.source.label()
            )));
        }
        Ok(ModuleMap::trusted(&first.source, &self.target, self.matrix.mul(&first.matrix)))
    }

    fn check_parallel(&self, other: &ModuleMap) -> Result<()> {
        if !self.source.same_action(&other.source) || !self.target.same_action(&other.target) {
            return Err(Error::input("maps have different sources or targets"));
        }
        Ok(())
    }

    pub fn add(&self, other: &ModuleMap) -> Result<ModuleMap> {
        self.check_parallel(other)?;
        Ok(ModuleMap::trusted(&self.source, &self.target, self.matrix.add(&other.matrix)))
    }

    pub fn sub(&self, other: &ModuleMap) -> Result<ModuleMap> {
        self.check_parallel(other)?;
        Ok(ModuleMap::trusted(&self.source, &self.target, self.matrix.sub(&other.matrix)))
    }

    pub fn scale(&self, c: u32) -> ModuleMap {
        ModuleMap::trusted(&self.source, &self.target, self.matrix.scale(c))
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    pub fn is_isomorphism(&self) -> bool {
        self.matrix.is_invertible()
    }

    pub fn inverse(&self) -> Option<ModuleMap> {
        let inv = self.matrix.invert().ok()??;
        Some(ModuleMap::trusted(&self.target, &self.source, inv))
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    /// `f ⊗ g` between tensor products.
    pub fn tensor(&self, other: &ModuleMap) -> Result<ModuleMap> {
        let src = tensor(&self.source, &other.source)?;
        let tgt = tensor(&self.target, &other.target)?;
        Ok(ModuleMap::trusted(&src, &tgt, self.matrix.kron(&other.matrix)))
    }

    /// Kernel as a submodule of the source, with its inclusion.
    pub fn kernel(&self) -> (Module, ModuleMap) {
        let space = Subspace::span(self.source.field(), self.source.dim(), &self.matrix.nullspace())
            .expect("kernel vectors have the source length");
        submodule(&self.source, &space, format!("ker({})", self.source.label()))
    }

    /// Image as a submodule of the target, with its inclusion.
    pub fn image(&self) -> (Module, ModuleMap) {
        let space = Subspace::from_row_space(&self.matrix.transpose());
        submodule(&self.target, &space, format!("im({})", self.source.label()))
    }

    /// Cokernel with its projection from the target.
    pub fn cokernel(&self) -> (Module, ModuleMap) {
        let space = Subspace::from_row_space(&self.matrix.transpose());
        quotient_by_subspace(&self.target, &space, format!("coker({})", self.source.label()))
    }
}

/// The submodule on a G-stable subspace, with basis the subspace's RREF basis.
pub(crate) fn submodule(m: &Module, space: &Subspace, label: String) -> (Module, ModuleMap) {
    let f = m.field();
    let k = space.dim();
    let gens = m
        .generators()
        .iter()
        .map(|a| {
            let cols: Vec<Vec<u32>> = space
                .basis()
                .iter()
                .map(|v| space.coordinates(&a.mul_vec(v)).expect("subspace is G-stable"))
                .collect();
            FieldMatrix::from_columns(f, k, &cols)
        })
        .collect();
    let sub = Module::trusted(m.group().clone(), f, k, gens, label);
    let incl = FieldMatrix::from_columns(f, m.dim(), space.basis());
    let map = ModuleMap::trusted(&sub, m, incl);
    (sub, map)
}

/// `M / U` on the unit vectors outside the pivots of `U`.
pub(crate) fn quotient_by_subspace(m: &Module, space: &Subspace, label: String) -> (Module, ModuleMap) {
    let f = m.field();
    let d = m.dim();
    let mut is_pivot = vec![false; d];
    for &q in space.pivots() {
        is_pivot[q] = true;
    }
    let free: Vec<usize> = (0..d).filter(|&i| !is_pivot[i]).collect();
    let k = free.len();
    let project = |v: &[u32]| -> Vec<u32> {
        let r = space.reduce(v);
        free.iter().map(|&i| r[i]).collect()
    };
    let gens = m
        .generators()
        .iter()
        .map(|a| {
            let cols: Vec<Vec<u32>> = free.iter().map(|&c| project(&a.column(c))).collect();
            FieldMatrix::from_columns(f, k, &cols)
        })
        .collect();
    let q = Module::trusted(m.group().clone(), f, k, gens, label);
    let cols: Vec<Vec<u32>> = (0..d)
        .map(|i| {
            let mut e = vec![0; d];
            e[i] = 1;
            project(&e)
        })
        .collect();
    let proj = ModuleMap::trusted(m, &q, FieldMatrix::from_columns(f, k, &cols));
    (q, proj)
}

/// Smallest submodule containing the given vectors.
pub fn spin(m: &Module, vectors: &[Vec<u32>]) -> Result<(Module, ModuleMap)> {
    let mut space = Subspace::span(m.field(), m.dim(), vectors)?;
    let mut k = 0;
    // Close under the generators; new basis rows may appear anywhere in the
    // RREF order, so iterate until a full pass adds nothing.
    loop {
        let before = space.dim();
        let current: Vec<Vec<u32>> = space.basis().to_vec();
        for v in &current {
            for a in m.generators() {
                space.insert(&a.mul_vec(v));
            }
        }
        if space.dim() == before {
            break;
        }
        k += 1;
        debug_assert!(k <= m.dim() + 1);
    }
    Ok(submodule(m, &space, format!("spin({})", m.label())))
}

/// `M / sub` for an injective equivariant inclusion.
pub fn quotient(m: &Module, inclusion: &ModuleMap) -> Result<(Module, ModuleMap)> {
    if !inclusion.target().same_action(m) {
        return Err(Error::input("inclusion does not land in the module"));
    }
    if inclusion.rank() != inclusion.source().dim() {
        return Err(Error::input("quotient by a non-injective map"));
    }
    let space = Subspace::from_row_space(&inclusion.matrix().transpose());
    Ok(quotient_by_subspace(m, &space, format!("{}/{}", m.label(), inclusion.source().label())))
}

/// A direct sum with its structure maps.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub module: Module,
    pub injections: Vec<ModuleMap>,
    pub projections: Vec<ModuleMap>,
}

pub fn direct_sum(ms: &[Module]) -> Result<DirectSum> {
    let first = ms.first().ok_or_else(|| Error::input("direct sum of no modules"))?;
    for m in ms {
        first.check_context(m)?;
    }
    let f = first.field();
    let total: usize = ms.iter().map(Module::dim).sum();
    let gens = (0..first.generators().len())
        .map(|s| {
            let blocks: Vec<&FieldMatrix> = ms.iter().map(|m| m.gen(s)).collect();
            FieldMatrix::block_diag(f, &blocks)
        })
        .collect();
    let label = ms.iter().map(|m| m.label().to_string()).collect::<Vec<_>>().join(" + ");
    let module = Module::trusted(first.group().clone(), f, total, gens, label);
    let mut injections = Vec::new();
    let mut projections = Vec::new();
    let mut offset = 0;
    for m in ms {
        let mut inj = FieldMatrix::zeros(f, total, m.dim());
        inj.set_block(offset, 0, &FieldMatrix::identity(f, m.dim()));
        projections.push(ModuleMap::trusted(&module, m, inj.transpose()));
        injections.push(ModuleMap::trusted(m, &module, inj));
        offset += m.dim();
    }
    Ok(DirectSum { module, injections, projections })
}

/// Diagonal action on `M ⊗ N`.
pub fn tensor(m: &Module, n: &Module) -> Result<Module> {
    m.check_context(n)?;
    let gens = m.generators().iter().zip(n.generators()).map(|(a, b)| a.kron(b)).collect();
    Ok(Module::trusted(
        m.group().clone(),
        m.field(),
        m.dim() * n.dim(),
        gens,
        format!("{} x {}", m.label(), n.label()),
    ))
}

/// `Hom_G(M, N)` with a reduced row-echelon basis of flattened matrices.
#[derive(Clone, Debug)]
pub struct HomSpace {
    source: Module,
    target: Module,
    space: Subspace,
}

impl HomSpace {
    pub fn source(&self) -> &Module {
        &self.source
    }

    pub fn target(&self) -> &Module {
        &self.target
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// The basis as vectors of length `dim N · dim M`, row-major.
    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn map(&self, i: usize) -> ModuleMap {
        let f = self.source.field();
        let m = FieldMatrix::from_vector(f, self.target.dim(), self.source.dim(), &self.space.basis()[i]);
        ModuleMap::trusted(&self.source, &self.target, m)
    }

    pub fn basis(&self) -> Vec<ModuleMap> {
        (0..self.dim()).map(|i| self.map(i)).collect()
    }

    pub fn combine(&self, coords: &[u32]) -> ModuleMap {
        let f = self.source.field();
        let v = self.space.combine(coords);
        ModuleMap::trusted(&self.source, &self.target, FieldMatrix::from_vector(f, self.target.dim(), self.source.dim(), &v))
    }

    /// Coordinates of an equivariant map; `None` if it is not in the space.
    pub fn coordinates(&self, map: &FieldMatrix) -> Option<Vec<u32>> {
        self.space.coordinates(map.data())
    }
}

/// Echelon rows that remember their expression in the spun basis.
struct TrackedEchelon {
    field: PrimeField,
    rows: Vec<(usize, Vec<u32>, Vec<u32>)>,
    count: usize,
}

enum Spun {
    New,
    Dependent(Vec<u32>),
}

impl TrackedEchelon {
    fn new(field: PrimeField) -> Self {
        TrackedEchelon { field, rows: Vec::new(), count: 0 }
    }

    fn insert(&mut self, v: &[u32]) -> Spun {
        let f = self.field;
        let p = f.prime();
        let mut r = v.to_vec();
        let mut coef = vec![0u32; self.count];
        for (q, row, t) in &self.rows {
            let a = r[*q];
            if a == 0 {
                continue;
            }
            let na = p - a;
            for (x, &y) in r.iter_mut().zip(row) {
                *x = f.reduce_small(*x + na * y);
            }
            for (x, &y) in coef.iter_mut().zip(t) {
                *x = f.reduce_small(*x + a * y);
            }
        }
        let Some(q) = r.iter().position(|&x| x != 0) else {
            return Spun::Dependent(coef);
        };
        let inv = f.inv(r[q]).expect("nonzero");
        for x in r.iter_mut() {
            *x = f.mul(*x, inv);
        }
        let mut t: Vec<u32> = coef.iter().map(|&c| f.mul(f.neg(c), inv)).collect();
        t.push(inv);
        self.rows.push((q, r, t));
        self.count += 1;
        Spun::New
    }
}

/// `Hom_G(M, N)`.
///
/// Spins `M` from unit vectors; the images of the spinning generators are the
/// unknowns and every relation found while spinning cuts the solution space.
pub fn hom_space(m: &Module, n: &Module) -> Result<HomSpace> {
    m.check_context(n)?;
    let f = m.field();
    let (dm, dn) = (m.dim(), n.dim());
    let len = dm * dn;
    if dm == 0 || dn == 0 {
        return Ok(HomSpace { source: m.clone(), target: n.clone(), space: Subspace::zero(f, len) });
    }
    if m.generators().is_empty() {
        return Ok(HomSpace { source: m.clone(), target: n.clone(), space: Subspace::full(f, len) });
    }
    let p = f.prime();
    let mut ech = TrackedEchelon::new(f);
    let mut basis: Vec<Vec<u32>> = Vec::with_capacity(dm);
    // psi[l] has one column per free parameter: the image of basis[l]
    let mut psi: Vec<FieldMatrix> = Vec::with_capacity(dm);
    let mut k = 0usize;
    for unit in 0..dm {
        if basis.len() == dm {
            break;
        }
        let mut e = vec![0u32; dm];
        e[unit] = 1;
        if let Spun::Dependent(_) = ech.insert(&e) {
            continue;
        }
        basis.push(e);
        let zeros = FieldMatrix::zeros(f, dn, dn);
        for x in psi.iter_mut() {
            *x = FieldMatrix::hstack(&[x, &zeros]);
        }
        psi.push(FieldMatrix::hstack(&[
            &FieldMatrix::zeros(f, dn, k),
            &FieldMatrix::identity(f, dn),
        ]));
        k += dn;
        let mut q = basis.len() - 1;
        while q < basis.len() {
            for s in 0..m.generators().len() {
                let v = m.gen(s).mul_vec(&basis[q]);
                match ech.insert(&v) {
                    Spun::New => {
                        let image = n.gen(s).mul(&psi[q]);
                        basis.push(v);
                        psi.push(image);
                    }
                    Spun::Dependent(c) => {
                        if k == 0 {
                            continue;
                        }
                        let mut defect = n.gen(s).mul(&psi[q]);
                        for (j, &cj) in c.iter().enumerate() {
                            if cj != 0 {
                                defect.add_scaled(p - cj, &psi[j]);
                            }
                        }
                        if defect.is_zero() {
                            continue;
                        }
                        let kern = defect.nullspace();
                        let cut = FieldMatrix::from_columns(f, k, &kern);
                        for x in psi.iter_mut() {
                            *x = x.mul(&cut);
                        }
                        k = kern.len();
                    }
                }
            }
            q += 1;
        }
    }
    let bm = FieldMatrix::from_columns(f, dm, &basis);
    let bm_inv = bm.invert()?.expect("spun vectors form a basis");
    let mut solutions = Vec::with_capacity(k);
    for t in 0..k {
        let y = FieldMatrix::from_fn(f, dn, dm, |i, l| psi[l].get(i, t));
        solutions.push(y.mul(&bm_inv).into_data());
    }
    let space = Subspace::span(f, len, &solutions)?;
    Ok(HomSpace { source: m.clone(), target: n.clone(), space })
}

/// Projectively normalized coefficient vectors (first nonzero entry 1), in
/// lexicographic order of the tail.
pub(crate) fn normalized_combinations(p: u32, k: usize) -> impl Iterator<Item = Vec<u32>> {
    (0..k).flat_map(move |lead| {
        let tail = k - lead - 1;
        let count = (p as u64).pow(tail as u32);
        (0..count).map(move |mut idx| {
            let mut c = vec![0u32; k];
            c[lead] = 1;
            for j in (lead + 1..k).rev() {
                c[j] = (idx % p as u64) as u32;
                idx /= p as u64;
            }
            c
        })
    })
}

pub(crate) fn exhaustive_feasible(p: u32, k: usize) -> bool {
    (p as u64).checked_pow(k as u32).is_some_and(|n| n <= EXHAUSTIVE_LIMIT)
}

pub(crate) fn random_coords(rng: &mut ChaCha8Rng, p: u32, k: usize) -> Vec<u32> {
    (0..k).map(|_| rng.gen_range(0..p)).collect()
}

/// Per-module seed: FNV-1a of label and dimension, mixed with the run seed.
pub fn module_seed(run_seed: u64, label: &str, dim: usize) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes().chain(dim.to_le_bytes()) {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h ^ run_seed
}

/// An isomorphism `M → N`, or `None` when the modules are not isomorphic.
///
/// When either module is certified indecomposable its endomorphism ring is
/// local, so the non-invertible maps form a proper subspace and some basis
/// element of `Hom(M, N)` is invertible whenever `M ≅ N`.
pub fn is_isomorphic(m: &Module, n: &Module, seed: u64) -> Result<Option<ModuleMap>> {
    m.check_context(n)?;
    if m.dim() != n.dim() {
        return Ok(None);
    }
    if m.dim() == 0 {
        return Ok(Some(ModuleMap::zero(m, n)));
    }
    if m.same_action(n) {
        return Ok(Some(ModuleMap::trusted(m, n, FieldMatrix::identity(m.field(), m.dim()))));
    }
    let hmn = hom_space(m, n)?;
    let hnm = hom_space(n, m)?;
    if hmn.dim() != hnm.dim() || m.end_dim() != hmn.dim() || n.end_dim() != hmn.dim() {
        return Ok(None);
    }
    let local = m.is_certified_indecomposable() || n.is_certified_indecomposable();
    for i in 0..hmn.dim() {
        let x = hmn.map(i);
        if x.is_isomorphism() {
            return Ok(Some(x));
        }
    }
    if local {
        return Ok(None);
    }
    let p = m.prime();
    let k = hmn.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..ISO_RANDOM_TRIES {
        let x = hmn.combine(&random_coords(&mut rng, p, k));
        if x.is_isomorphism() {
            return Ok(Some(x));
        }
    }
    if !exhaustive_feasible(p, k) {
        return Err(Error::Undecided(format!(
            "isomorphism of {} and {}: {p}^{k} hom combinations exceed the exhaustive limit",
            m.label(),
            n.label()
        )));
    }
    for c in normalized_combinations(p, k) {
        let x = hmn.combine(&c);
        if x.is_isomorphism() {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// Parses a `.mod` file for the given group.
pub fn parse_module(text: &str, group: &Arc<PermGroup>, label: &str) -> Result<Module> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let mut header = |key: &str| -> Result<(usize, u64)> {
        let (no, line) = lines.next().ok_or_else(|| Error::parse(0, format!("missing {key} line")))?;
        let value = line
            .strip_prefix(key)
            .filter(|rest| rest.starts_with(char::is_whitespace))
            .ok_or_else(|| Error::parse(no, format!("expected `{key} <n>`, found {line:?}")))?;
        let v = value
            .trim()
            .parse::<u64>()
            .map_err(|_| Error::parse(no, format!("bad {key} value {:?}", value.trim())))?;
        Ok((no, v))
    };
    let (pline, p) = header("prime")?;
    let (_, d) = header("dim")?;
    let field = PrimeField::new(p as u32).map_err(|e| Error::parse(pline, e.to_string()))?;
    let d = d as usize;
    let mut gens = Vec::new();
    while let Some((no, line)) = lines.next() {
        if line != "mat" {
            return Err(Error::parse(no, format!("expected `mat`, found {line:?}")));
        }
        let mut rows = Vec::with_capacity(d);
        for _ in 0..d {
            let (rno, row) = lines
                .next()
                .ok_or_else(|| Error::parse(no, "matrix block ends early"))?;
            let entries = row
                .split_whitespace()
                .map(|t| match t.parse::<i64>() {
                    Ok(v) if (0..p as i64).contains(&v) => Ok(v),
                    _ => Err(Error::parse(rno, format!("entry {t:?} is not in [0, {p})"))),
                })
                .collect::<Result<Vec<_>>>()?;
            if entries.len() != d {
                return Err(Error::parse(rno, format!("row has {} entries, expected {d}", entries.len())));
            }
            rows.push(entries);
        }
        let m = if d == 0 {
            FieldMatrix::zeros(field, 0, 0)
        } else {
            FieldMatrix::from_rows(field, &rows)?
        };
        gens.push(m);
    }
    if gens.len() != group.generators().len() {
        return Err(Error::parse(
            0,
            format!("{} matrices for {} generators", gens.len(), group.generators().len()),
        ));
    }
    if d == 0 {
        return Ok(Module::zero(group, field).relabel(label));
    }
    Module::new(group.clone(), field, gens, label)
}

pub fn format_module(m: &Module) -> String {
    let mut out = format!("prime {}\ndim {}\n", m.prime(), m.dim());
    for a in m.generators() {
        out.push_str("mat\n");
        for i in 0..a.rows() {
            let row: Vec<String> = a.row(i).iter().map(ToString::to_string).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
    }
    out
}
