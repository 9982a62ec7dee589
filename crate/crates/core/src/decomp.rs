//! Krull–Schmidt decomposition by Fitting splits of endomorphisms.
//!
//! Splitting endomorphisms are searched along a ladder: shifted basis
//! elements of `End(M)`, an exact local-ring certificate, seeded random
//! combinations, and finally every projectively distinct element when the
//! ring is small enough. A module is only ever reported indecomposable when
//! one of the exact rungs proves it.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::ffmat::{FieldMatrix, Subspace};
use crate::repmod::{
    direct_sum, exhaustive_feasible, hom_space, is_isomorphic, module_seed,
    normalized_combinations, random_coords, HomSpace, Module, ModuleMap,
};

/// Random endomorphisms tried before the exhaustive rung.
pub const SPLIT_RANDOM_TRIES: usize = 500;

/// A direct summand with its structure maps into and out of the parent.
#[derive(Clone, Debug)]
pub struct Summand {
    pub module: Module,
    pub inclusion: ModuleMap,
    pub projection: ModuleMap,
}

/// A complete decomposition into certified indecomposables.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub parent: Module,
    pub summands: Vec<Summand>,
}

impl Decomposition {
    pub fn dims(&self) -> Vec<usize> {
        self.summands.iter().map(|s| s.module.dim()).collect()
    }

    /// Checks the biproduct identities exactly.
    pub fn verify(&self) -> Result<()> {
        let f = self.parent.field();
        let d = self.parent.dim();
        let mut total = FieldMatrix::zeros(f, d, d);
        for (i, s) in self.summands.iter().enumerate() {
            if !s.inclusion.is_equivariant() || !s.projection.is_equivariant() {
                return Err(Error::Inconsistent(format!("summand {i} maps are not equivariant")));
            }
            if !s.projection.matrix().mul(s.inclusion.matrix()).is_identity() {
                return Err(Error::Inconsistent(format!("summand {i}: projection ∘ inclusion ≠ id")));
            }
            total = total.add(&s.inclusion.matrix().mul(s.projection.matrix()));
        }
        if !total.is_identity() {
            return Err(Error::Inconsistent("inclusions ∘ projections do not sum to id".into()));
        }
        Ok(())
    }
}

/// Splits `M = ker(e^N) ⊕ im(e^N)` for `N ≥ dim M`, when both are nonzero.
pub fn fitting_split(m: &Module, e: &ModuleMap) -> Result<Option<(Summand, Summand)>> {
    if !e.source().same_action(m) || !e.target().same_action(m) {
        return Err(Error::input("fitting_split needs an endomorphism of the module"));
    }
    Ok(fitting_split_matrix(m, e.matrix()))
}

fn fitting_split_matrix(m: &Module, e: &FieldMatrix) -> Option<(Summand, Summand)> {
    let d = m.dim();
    if d < 2 {
        return None;
    }
    let mut power = e.clone();
    let mut reach = 1;
    while reach < d {
        power = power.mul(&power);
        reach *= 2;
    }
    let kernel = power.nullspace();
    if kernel.is_empty() || kernel.len() == d {
        return None;
    }
    let image = Subspace::from_row_space(&power.transpose());
    Some(split_along(m, &kernel, image.basis()))
}

/// Splits along a complementary pair of G-stable subspaces.
fn split_along(m: &Module, first: &[Vec<u32>], second: &[Vec<u32>]) -> (Summand, Summand) {
    let f = m.field();
    let d = m.dim();
    let a = first.len();
    let cols: Vec<Vec<u32>> = first.iter().chain(second).cloned().collect();
    let p = FieldMatrix::from_columns(f, d, &cols);
    let q = p.invert().expect("square").expect("complementary subspaces");
    let part = |range: std::ops::Range<usize>, tag: &str| -> Summand {
        let k = range.len();
        let incl = p.submatrix(0..d, range.clone());
        let proj = q.submatrix(range.clone(), 0..d);
        let gens = m.generators().iter().map(|g| proj.mul(g).mul(&incl)).collect();
        let module = Module::trusted(m.group().clone(), f, k, gens, format!("{}.{tag}", m.label()));
        Summand {
            inclusion: ModuleMap::trusted(&module, m, incl),
            projection: ModuleMap::trusted(m, &module, proj),
            module,
        }
    };
    (part(0..a, "0"), part(a..d, "1"))
}

enum Verdict {
    Split(Box<(Summand, Summand)>),
    Indecomposable,
}

/// Exact test that `End(M)` is local with residue field GF(p).
///
/// Each basis element `b` must have a single eigenvalue `λ` in GF(p); then
/// the span `N` of the `b − λ` is checked to be closed under products and
/// nilpotent. Such an `N` lies in the radical and has codimension one, so
/// `End(M)/J = GF(p)`.
fn local_certificate(end: &HomSpace) -> bool {
    let m = end.source();
    let f = m.field();
    let d = m.dim();
    let len = d * d;
    let id = FieldMatrix::identity(f, d);
    let mut nil = Subspace::zero(f, len);
    let mut gens = Vec::new();
    for b in end.basis() {
        let Some(lambda) = (0..f.prime()).find(|&l| is_nilpotent(&b.matrix().sub(&id.scale(l)))) else {
            return false;
        };
        let n = b.matrix().sub(&id.scale(lambda));
        if nil.insert(n.data()) {
            gens.push(n);
        }
    }
    if nil.dim() + 1 != end.dim() {
        return false;
    }
    for a in &gens {
        for b in &gens {
            if !nil.contains(a.mul(b).data()) {
                return false;
            }
        }
    }
    // N^(j+1) = N^j · N must reach zero
    let mut layer = gens.clone();
    for _ in 0..=end.dim() {
        let mut next = Subspace::zero(f, len);
        let mut next_gens = Vec::new();
        for a in &layer {
            for b in &gens {
                let c = a.mul(b);
                if next.insert(c.data()) {
                    next_gens.push(c);
                }
            }
        }
        if next_gens.is_empty() {
            return true;
        }
        layer = next_gens;
    }
    false
}

fn is_nilpotent(x: &FieldMatrix) -> bool {
    let d = x.rows();
    let mut power = x.clone();
    let mut reach = 1;
    while reach < d {
        power = power.mul(&power);
        reach *= 2;
    }
    power.is_zero()
}

fn search_split(m: &Module, seed: u64) -> Result<Verdict> {
    if m.dim() < 2 {
        return Ok(Verdict::Indecomposable);
    }
    let end = hom_space(m, m)?;
    if end.dim() == 1 {
        return Ok(Verdict::Indecomposable);
    }
    let f = m.field();
    let p = f.prime();
    let id = FieldMatrix::identity(f, m.dim());
    for b in end.basis() {
        for lambda in 0..p {
            let shifted = b.matrix().sub(&id.scale(lambda));
            if let Some(parts) = fitting_split_matrix(m, &shifted) {
                return Ok(Verdict::Split(Box::new(parts)));
            }
        }
    }
    if local_certificate(&end) {
        return Ok(Verdict::Indecomposable);
    }
    let k = end.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(module_seed(seed, m.label(), m.dim()));
    for _ in 0..SPLIT_RANDOM_TRIES {
        let x = end.combine(&random_coords(&mut rng, p, k));
        if let Some(parts) = fitting_split_matrix(m, x.matrix()) {
            return Ok(Verdict::Split(Box::new(parts)));
        }
    }
    if !exhaustive_feasible(p, k) {
        return Err(Error::Undecided(format!(
            "indecomposability of {} (dim {}): no split found and {p}^{k} endomorphisms exceed the exhaustive limit",
            m.label(),
            m.dim()
        )));
    }
    for c in normalized_combinations(p, k) {
        let x = end.combine(&c);
        if let Some(parts) = fitting_split_matrix(m, x.matrix()) {
            return Ok(Verdict::Split(Box::new(parts)));
        }
    }
    Ok(Verdict::Indecomposable)
}

/// Whether `M` is indecomposable; the zero module is not.
pub fn is_indecomposable(m: &Module, seed: u64) -> Result<bool> {
    if m.dim() == 0 {
        return Ok(false);
    }
    if m.is_certified_indecomposable() {
        return Ok(true);
    }
    match search_split(m, seed)? {
        Verdict::Split(_) => Ok(false),
        Verdict::Indecomposable => {
            m.mark_indecomposable();
            Ok(true)
        }
    }
}

/// Complete decomposition into certified indecomposable summands.
pub fn indecomposable_summands(m: &Module, seed: u64) -> Result<Decomposition> {
    let mut summands = Vec::new();
    if m.dim() > 0 {
        collect(m, seed, &mut summands)?;
    }
    let parent = m.clone();
    // re-anchor every summand's maps at the parent
    let summands = summands
        .into_iter()
        .map(|(module, incl, proj)| Summand {
            inclusion: ModuleMap::trusted(&module, &parent, incl),
            projection: ModuleMap::trusted(&parent, &module, proj),
            module,
        })
        .collect();
    Ok(Decomposition { parent, summands })
}

fn collect(m: &Module, seed: u64, out: &mut Vec<(Module, FieldMatrix, FieldMatrix)>) -> Result<()> {
    if m.is_certified_indecomposable() {
        out.push((m.clone(), FieldMatrix::identity(m.field(), m.dim()), FieldMatrix::identity(m.field(), m.dim())));
        return Ok(());
    }
    match search_split(m, seed)? {
        Verdict::Indecomposable => {
            m.mark_indecomposable();
            out.push((m.clone(), FieldMatrix::identity(m.field(), m.dim()), FieldMatrix::identity(m.field(), m.dim())));
        }
        Verdict::Split(parts) => {
            let (a, b) = *parts;
            for part in [a, b] {
                let mut inner = Vec::new();
                collect(&part.module, seed, &mut inner)?;
                for (module, incl, proj) in inner {
                    out.push((
                        module,
                        part.inclusion.matrix().mul(&incl),
                        proj.mul(part.projection.matrix()),
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Representatives of isomorphism classes in insertion order.
#[derive(Clone, Debug, Default)]
pub struct ClassRegistry {
    reps: Vec<Module>,
    seed: u64,
}

impl ClassRegistry {
    pub fn new(seed: u64) -> Self {
        ClassRegistry { reps: Vec::new(), seed }
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn representative(&self, id: usize) -> &Module {
        &self.reps[id]
    }

    pub fn representatives(&self) -> &[Module] {
        &self.reps
    }

    /// Registry id of a matching class, if any.
    pub fn find(&self, m: &Module) -> Result<Option<usize>> {
        for (id, r) in self.reps.iter().enumerate() {
            if !r.same_context(m) || r.dim() != m.dim() {
                continue;
            }
            let seed = module_seed(self.seed, m.label(), m.dim());
            if is_isomorphic(r, m, seed)?.is_some() {
                return Ok(Some(id));
            }
        }
        Ok(None)
    }

    /// Id of the class of `m`, inserting it as a new class when unseen.
    pub fn classify_module(&mut self, m: &Module) -> Result<usize> {
        if let Some(id) = self.find(m)? {
            return Ok(id);
        }
        self.reps.push(m.clone());
        Ok(self.reps.len() - 1)
    }
}

/// `(class id, multiplicity)` pairs in order of first appearance.
pub fn classify(d: &Decomposition, registry: &mut ClassRegistry) -> Result<Vec<(usize, usize)>> {
    let mut classes: Vec<(usize, usize)> = Vec::new();
    for s in &d.summands {
        let id = registry.classify_module(&s.module)?;
        match classes.iter_mut().find(|(c, _)| *c == id) {
            Some((_, mult)) => *mult += 1,
            None => classes.push((id, 1)),
        }
    }
    Ok(classes)
}

/// Reassembles the summands and returns an isomorphism onto the parent.
pub fn reassemble(d: &Decomposition, seed: u64) -> Result<Option<ModuleMap>> {
    if d.summands.is_empty() {
        return Ok((d.parent.dim() == 0).then(|| ModuleMap::identity(&d.parent)));
    }
    let mods: Vec<Module> = d.summands.iter().map(|s| s.module.clone()).collect();
    let sum = direct_sum(&mods)?;
    is_isomorphic(&sum.module, &d.parent, seed)
}
