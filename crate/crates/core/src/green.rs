//! The Green correspondence: scenarios, the correspondents `f` and `g`,
//! round trips, and the stable-hom comparison.

use std::sync::Arc;

use crate::adjfun::{induce, restrict, Induction};
use crate::decomp::{indecomposable_summands, ClassRegistry, Summand};
use crate::error::{Error, Result};
use crate::ffmat::{FieldMatrix, PrimeField, Subspace};
use crate::grp::{are_conjugate, conjugate_subgroup, intersect, normalizer, PermGroup, Permutation, Subgroup};
use crate::relhom::{is_family_projective, stable_hom, vertex, IdealSpec, SubgroupFamily};
use crate::repmod::{is_isomorphic, module_seed, quotient_by_subspace, submodule, Module, ModuleMap};

/// Baskets are truncated to this many classes.
pub const BASKET_CAP: usize = 12;

/// Modules checked by `check_dagger` are decomposed up to this dimension;
/// larger ones are tested for family projectivity as a whole.
pub const DAGGER_DECOMPOSE_CAP: usize = 48;

/// `(G, p, D, H)` with `N_G(D) ≤ H` and the families 𝔜 (over H) and 𝔛
/// (over G).
#[derive(Clone, Debug)]
pub struct Scenario {
    pub name: String,
    pub group: Arc<PermGroup>,
    pub field: PrimeField,
    pub d: Subgroup,
    pub h: Subgroup,
    /// `D` viewed inside `H`.
    pub d_in_h: Subgroup,
    pub yfam: SubgroupFamily,
    pub xfam: SubgroupFamily,
}

impl Scenario {
    pub fn is_degenerate(&self) -> bool {
        self.h.is_whole()
    }
}

pub fn build_scenario(
    name: &str,
    g: &Arc<PermGroup>,
    p: u32,
    d_gens: Vec<Permutation>,
    h_gens: Vec<Permutation>,
) -> Result<Scenario> {
    let field = PrimeField::new(p)?;
    let d = Subgroup::generated(g, d_gens)?;
    if !d.is_p_group(p as usize) {
        return Err(Error::input(format!("D has order {}, not a power of {p}", d.order())));
    }
    let h = Subgroup::generated(g, h_gens)?;
    let n = normalizer(&d);
    if !n.is_subgroup_of(&h) {
        return Err(Error::input(format!(
            "N_G(D) of order {} is not contained in H of order {}",
            n.order(),
            h.order()
        )));
    }
    let d_in_h = d.as_subgroup_of(&h)?;
    let mut yseeds: Vec<Subgroup> = Vec::new();
    let mut xseeds: Vec<Subgroup> = Vec::new();
    for x in g.elements() {
        if h.contains(x) {
            continue;
        }
        let xd = conjugate_subgroup(&d, x)?;
        let y = intersect(&h, &xd)?;
        if !yseeds.contains(&y) {
            yseeds.push(y);
        }
        let xx = intersect(&d, &xd)?;
        if !xseeds.contains(&xx) {
            xseeds.push(xx);
        }
    }
    let yseeds = yseeds.iter().map(|y| y.as_subgroup_of(&h)).collect::<Result<Vec<_>>>()?;
    let yfam = SubgroupFamily::closure(h.group(), &yseeds)?;
    let xfam = SubgroupFamily::closure(g, &xseeds)?;
    Ok(Scenario { name: name.to_string(), group: g.clone(), field, d, h, d_in_h, yfam, xfam })
}

/// An indecomposable summand class discarded by the family filter.
#[derive(Clone, Debug)]
pub struct Discarded {
    pub module: Module,
    pub multiplicity: usize,
    pub vertex: Subgroup,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `g(N)`, a summand of `N↑ᴳ`.
    Induce,
    /// `f(M)`, a summand of `M↓_H`.
    Restrict,
}

#[derive(Clone, Debug)]
pub struct GreenPair {
    pub over_h: Module,
    pub over_g: Module,
    pub direction: Direction,
    /// `N↑ᴳ` or `M↓_H`.
    pub transported: Module,
    /// The produced correspondent as a summand of `transported`.
    pub correspondent: Summand,
    pub vertex: Subgroup,
    pub discarded: Vec<Discarded>,
    pub induction: Option<Induction>,
}

impl GreenPair {
    pub fn produced(&self) -> &Module {
        match self.direction {
            Direction::Induce => &self.over_g,
            Direction::Restrict => &self.over_h,
        }
    }
}

/// Family projectivity of an indecomposable, decided by the trace system and
/// cross-checked against its vertex.
pub fn family_verdict(m: &Module, fam: &SubgroupFamily, seed: u64) -> Result<(bool, Subgroup)> {
    let by_trace = is_family_projective(m, fam)?;
    let v = vertex(m, seed)?.vertex;
    let by_vertex = fam.contains_up_to_conjugacy(&v)?;
    if by_trace != by_vertex {
        return Err(Error::Inconsistent(format!(
            "{}: trace system says {by_trace}, vertex of order {} says {by_vertex}",
            m.label(),
            v.order()
        )));
    }
    Ok((by_trace, v))
}

fn has_vertex(m: &Module, d: &Subgroup, seed: u64) -> Result<Option<Subgroup>> {
    let v = vertex(m, seed)?.vertex;
    Ok(are_conjugate(&v, d)?.map(|_| v))
}

struct Filtered {
    survivor: Summand,
    vertex: Subgroup,
    discarded: Vec<Discarded>,
}

fn filter_summands(m: &Module, fam: &SubgroupFamily, expected: &Subgroup, seed: u64) -> Result<Filtered> {
    let dec = indecomposable_summands(m, seed)?;
    let mut reg = ClassRegistry::new(seed);
    let ids = dec
        .summands
        .iter()
        .map(|s| reg.classify_module(&s.module))
        .collect::<Result<Vec<_>>>()?;
    let mut survivors: Vec<(usize, usize, Subgroup)> = Vec::new();
    let mut discarded = Vec::new();
    for id in 0..reg.len() {
        let mult = ids.iter().filter(|&&i| i == id).count();
        let rep = reg.representative(id);
        let (projective, v) = family_verdict(rep, fam, seed)?;
        if projective {
            discarded.push(Discarded { module: rep.clone(), multiplicity: mult, vertex: v });
        } else {
            survivors.push((id, mult, v));
        }
    }
    let dims: Vec<String> = survivors.iter().map(|(id, mult, _)| format!("{}x{mult}", reg.representative(*id).dim())).collect();
    match survivors.as_slice() {
        [(id, 1, v)] => {
            if are_conjugate(v, expected)?.is_none() {
                return Err(Error::Violation(format!(
                    "correspondent of {} has vertex of order {}, expected order {}",
                    m.label(),
                    v.order(),
                    expected.order()
                )));
            }
            let pos = ids.iter().position(|i| i == id).expect("class occurs");
            Ok(Filtered { survivor: dec.summands[pos].clone(), vertex: v.clone(), discarded })
        }
        _ => Err(Error::Violation(format!(
            "{} has {} surviving classes (dims {}) instead of exactly one of multiplicity 1",
            m.label(),
            survivors.len(),
            dims.join(", ")
        ))),
    }
}

/// `g(N)`: the unique summand of `N↑ᴳ` that is not 𝔛-projective.
pub fn green_g(n: &Module, s: &Scenario, seed: u64) -> Result<GreenPair> {
    if !n.group().same_as(s.h.group()) {
        return Err(Error::input(format!("{} is not a module over H", n.label())));
    }
    if has_vertex(n, &s.d_in_h, seed)?.is_none() {
        return Err(Error::input(format!("{} does not have vertex D", n.label())));
    }
    let ind = induce(n, &s.h)?;
    let f = filter_summands(&ind.induced, &s.xfam, &s.d, seed)?;
    Ok(GreenPair {
        over_h: n.clone(),
        over_g: f.survivor.module.relabel(format!("g({})", n.label())),
        direction: Direction::Induce,
        transported: ind.induced.clone(),
        correspondent: f.survivor,
        vertex: f.vertex,
        discarded: f.discarded,
        induction: Some(ind),
    })
}

/// `f(M)`: the unique summand of `M↓_H` that is not 𝔜-projective.
pub fn green_f(m: &Module, s: &Scenario, seed: u64) -> Result<GreenPair> {
    if !m.group().same_as(&s.group) {
        return Err(Error::input(format!("{} is not a module over G", m.label())));
    }
    if has_vertex(m, &s.d, seed)?.is_none() {
        return Err(Error::input(format!("{} does not have vertex D", m.label())));
    }
    let res = restrict(m, &s.h)?;
    let f = filter_summands(&res, &s.yfam, &s.d_in_h, seed)?;
    Ok(GreenPair {
        over_h: f.survivor.module.relabel(format!("f({})", m.label())),
        over_g: m.clone(),
        direction: Direction::Restrict,
        transported: res,
        correspondent: f.survivor,
        vertex: f.vertex,
        discarded: f.discarded,
        induction: None,
    })
}

#[derive(Clone, Debug)]
pub struct RoundTrip {
    pub n: Module,
    pub g_pair: GreenPair,
    pub f_pair: GreenPair,
    /// `f(g(N)) → N`.
    pub f_witness: ModuleMap,
    /// `g(f(g(N))) → g(N)`.
    pub g_witness: ModuleMap,
}

/// `f(g(N)) ≅ N` and `g(f(M)) ≅ M` for `M = g(N)`, with witnesses.
pub fn verify_round_trip(s: &Scenario, basket: &[Module], seed: u64) -> Result<Vec<RoundTrip>> {
    let mut out = Vec::new();
    for n in basket {
        let g_pair = green_g(n, s, seed)?;
        let f_pair = green_f(&g_pair.over_g, s, seed)?;
        let iso_seed = module_seed(seed, n.label(), n.dim());
        let f_witness = is_isomorphic(&f_pair.over_h, n, iso_seed)?
            .ok_or_else(|| Error::Violation(format!("f(g({0})) is not isomorphic to {0}", n.label())))?;
        let back = green_g(&f_pair.over_h, s, seed)?;
        let g_witness = is_isomorphic(&back.over_g, &g_pair.over_g, iso_seed)?
            .ok_or_else(|| Error::Violation(format!("g(f(M)) is not isomorphic to M = g({})", n.label())))?;
        out.push(RoundTrip { n: n.clone(), g_pair, f_pair, f_witness, g_witness });
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct StableHomReport {
    pub n1: String,
    pub n2: String,
    pub hom_h: usize,
    pub ideal_h: usize,
    pub d_h: usize,
    pub hom_g: usize,
    pub ideal_g: usize,
    pub d_g: usize,
    /// Transported lifted basis stays independent modulo the 𝔛-ideal.
    pub lifted_independent: bool,
    /// Transported 𝔜-ideal lands in the 𝔛-ideal.
    pub ideal_preserved: bool,
}

impl StableHomReport {
    pub fn passed(&self) -> bool {
        self.d_h == self.d_g && self.lifted_independent && self.ideal_preserved
    }
}

/// Compares `Hom_H(N1, N2)` modulo 𝔜 with `Hom_G(g N1, g N2)` modulo 𝔛,
/// and transports maps by `φ ↦ π₂ ∘ φ↑ ∘ ι₁`.
pub fn stable_hom_correspondence(s: &Scenario, p1: &GreenPair, p2: &GreenPair) -> Result<StableHomReport> {
    let (Some(i1), Some(i2)) = (&p1.induction, &p2.induction) else {
        return Err(Error::input("stable-hom comparison needs pairs produced by induction"));
    };
    let sh_h = stable_hom(&p1.over_h, &p2.over_h, &IdealSpec::TraceFamily(s.yfam.clone()))?;
    let sh_g = stable_hom(&p1.over_g, &p2.over_g, &IdealSpec::TraceFamily(s.xfam.clone()))?;
    let transport = |phi: &ModuleMap| -> Result<Vec<u32>> {
        let up = i1.induce_map(i2, phi)?;
        let m: FieldMatrix =
            p2.correspondent.projection.matrix().mul(up.matrix()).mul(p1.correspondent.inclusion.matrix());
        sh_g.ideal
            .hom
            .coordinates(&m)
            .ok_or_else(|| Error::Inconsistent("transported map is not equivariant".into()))
    };
    let mut span: Subspace = sh_g.ideal.coords.clone();
    let mut lifted_independent = true;
    for phi in &sh_h.lifted {
        if !span.insert(&transport(phi)?) {
            lifted_independent = false;
        }
    }
    let mut ideal_preserved = true;
    for psi in sh_h.ideal.maps() {
        if !sh_g.ideal.coords.contains(&transport(&psi)?) {
            ideal_preserved = false;
        }
    }
    let report = StableHomReport {
        n1: p1.over_h.label().to_string(),
        n2: p2.over_h.label().to_string(),
        hom_h: sh_h.hom_dim,
        ideal_h: sh_h.ideal_dim,
        d_h: sh_h.dim,
        hom_g: sh_g.hom_dim,
        ideal_g: sh_g.ideal_dim,
        d_g: sh_g.dim,
        lifted_independent,
        ideal_preserved,
    };
    if !report.passed() {
        return Err(Error::Violation(format!(
            "stable homs {} -> {}: d_H = {}, d_G = {}, lifted independent {}, ideal preserved {}",
            report.n1, report.n2, report.d_h, report.d_g, lifted_independent, ideal_preserved
        )));
    }
    Ok(report)
}

/// One summand class of a module checked by `check_dagger`.
#[derive(Clone, Debug)]
pub struct DaggerClass {
    pub dim: usize,
    pub multiplicity: usize,
    pub projective: bool,
    pub vertex: Option<Subgroup>,
}

#[derive(Clone, Debug)]
pub struct DaggerPiece {
    pub source: String,
    pub y_dim: usize,
    pub tested_dim: usize,
    /// Empty when the module was tested as a whole.
    pub classes: Vec<DaggerClass>,
    pub projective: bool,
}

#[derive(Clone, Debug)]
pub struct DaggerReport {
    pub pieces: Vec<DaggerPiece>,
}

impl DaggerReport {
    pub fn passed(&self) -> bool {
        self.pieces.iter().all(|p| p.projective)
    }
}

pub fn default_dagger_basket(s: &Scenario) -> Vec<Module> {
    let d = s.d_in_h.group();
    vec![
        Module::trivial(d, s.field).relabel("trivial_D"),
        Module::regular(d, s.field).relabel("regular_D"),
    ]
}

/// For each `W`, the 𝔜-projective summands `Y` of `W↑ᴴ` are pushed through
/// `((((Y↓_D)↑ᴴ)↑ᴳ)↓_H` and the result is tested for 𝔜-projectivity.
pub fn check_dagger(s: &Scenario, basket: &[Module], seed: u64) -> Result<DaggerReport> {
    let mut ys = ClassRegistry::new(seed);
    for w in basket {
        let up = induce(w, &s.d_in_h)?.induced;
        for summand in indecomposable_summands(&up, seed)?.summands {
            if is_family_projective(&summand.module, &s.yfam)? {
                ys.classify_module(&summand.module.relabel(format!("{}.{}", w.label(), ys.len())))?;
            }
        }
    }
    let mut pieces = Vec::new();
    for y in ys.representatives() {
        let down = restrict(y, &s.d_in_h)?;
        let back = induce(&down, &s.d_in_h)?.induced;
        let t = induce(&back, &s.h)?.restricted();
        let mut piece = DaggerPiece {
            source: y.label().to_string(),
            y_dim: y.dim(),
            tested_dim: t.dim(),
            classes: Vec::new(),
            projective: true,
        };
        if t.dim() <= DAGGER_DECOMPOSE_CAP {
            let dec = indecomposable_summands(&t, seed)?;
            let mut reg = ClassRegistry::new(seed);
            let ids = dec.summands.iter().map(|x| reg.classify_module(&x.module)).collect::<Result<Vec<_>>>()?;
            for id in 0..reg.len() {
                let (projective, v) = family_verdict(reg.representative(id), &s.yfam, seed)?;
                piece.projective &= projective;
                piece.classes.push(DaggerClass {
                    dim: reg.representative(id).dim(),
                    multiplicity: ids.iter().filter(|&&i| i == id).count(),
                    projective,
                    vertex: Some(v),
                });
            }
        } else {
            piece.projective = is_family_projective(&t, &s.yfam)?;
        }
        pieces.push(piece);
    }
    Ok(DaggerReport { pieces })
}

/// `I_D^j · M` for `j = 1, 2, …` until it stabilises, with `I_D` the
/// augmentation ideal of `kD`.
fn augmentation_layers(m: &Module, d: &Subgroup) -> Vec<Subspace> {
    let f = m.field();
    let n = m.dim();
    let id = FieldMatrix::identity(f, n);
    let shifts: Vec<FieldMatrix> = (1..d.order()).map(|i| m.act_index(d.embed(i)).sub(&id)).collect();
    let mut layers = Vec::new();
    let mut current = Subspace::full(f, n);
    loop {
        let mut next = Subspace::zero(f, n);
        for v in current.basis() {
            for a in &shifts {
                next.insert(&a.mul_vec(v));
            }
        }
        if next.dim() == 0 || next.dim() == current.dim() {
            break;
        }
        layers.push(next.clone());
        current = next;
    }
    layers
}

/// Indecomposable kH-modules with vertex D: the trivial module, summands of
/// `k↑ᴴ` from D, and the `I_D`-power submodules and quotients of the
/// projective indecomposables. Capped at [`BASKET_CAP`] classes.
pub fn harvest_basket(s: &Scenario, seed: u64) -> Result<Vec<Module>> {
    let hg = s.h.group();
    let f = s.field;
    let mut candidates = vec![Module::trivial(hg, f).relabel("trivial_H")];
    let td = Module::trivial(s.d_in_h.group(), f);
    for (i, x) in indecomposable_summands(&induce(&td, &s.d_in_h)?.induced, seed)?.summands.into_iter().enumerate() {
        candidates.push(x.module.relabel(format!("ind_D.{i}")));
    }
    let pims = indecomposable_summands(&Module::regular(hg, f), seed)?;
    let mut seen_pims = ClassRegistry::new(seed);
    for x in pims.summands {
        let before = seen_pims.len();
        let id = seen_pims.classify_module(&x.module)?;
        if id < before {
            continue;
        }
        for (j, layer) in augmentation_layers(&x.module, &s.d_in_h).iter().enumerate() {
            let (q, _) = quotient_by_subspace(&x.module, layer, format!("P{id}/I^{}", j + 1));
            let (sub, _) = submodule(&x.module, layer, format!("I^{}P{id}", j + 1));
            candidates.push(q);
            candidates.push(sub);
        }
    }
    let mut reg = ClassRegistry::new(seed);
    let mut basket = Vec::new();
    for c in candidates {
        for (i, x) in indecomposable_summands(&c, seed)?.summands.into_iter().enumerate() {
            if basket.len() == BASKET_CAP {
                return Ok(basket);
            }
            if reg.find(&x.module)?.is_some() {
                continue;
            }
            let label = if x.module.dim() == c.dim() { c.label().to_string() } else { format!("{}.{i}", c.label()) };
            let m = x.module.relabel(label);
            reg.classify_module(&m)?;
            if has_vertex(&m, &s.d_in_h, seed)?.is_some() {
                basket.push(m);
            }
        }
    }
    Ok(basket)
}

/// Where a scenario's basket comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasketSpec {
    Auto,
    Files(Vec<String>),
}

/// A parsed `.scn` file, before the group is loaded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScenarioSpec {
    pub prime: u32,
    pub group_file: String,
    pub h_gens: Vec<String>,
    pub d_gens: Vec<String>,
    pub basket: BasketSpec,
}

pub fn parse_scenario(text: &str) -> Result<ScenarioSpec> {
    let mut prime = None;
    let mut group_file = None;
    let mut h_gens = None;
    let mut d_gens = None;
    let mut basket = None;
    for (no, raw) in text.lines().enumerate() {
        let line_no = no + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let rest = rest.trim();
        let dup = |seen: bool| {
            if seen {
                Err(Error::parse(line_no, format!("duplicate {key} line")))
            } else {
                Ok(())
            }
        };
        if rest.is_empty() {
            return Err(Error::parse(line_no, format!("{key} needs a value")));
        }
        match key {
            "prime" => {
                dup(prime.is_some())?;
                prime = Some(rest.parse::<u32>().map_err(|_| Error::parse(line_no, format!("bad prime {rest:?}")))?);
            }
            "group" => {
                dup(group_file.is_some())?;
                group_file = Some(rest.to_string());
            }
            "subgroup_h" => {
                dup(h_gens.is_some())?;
                h_gens = Some(split_gens(rest));
            }
            "vertex_d" => {
                dup(d_gens.is_some())?;
                d_gens = Some(split_gens(rest));
            }
            "basket" => {
                dup(basket.is_some())?;
                basket = Some(if rest == "auto" {
                    BasketSpec::Auto
                } else {
                    BasketSpec::Files(rest.split(',').map(|s| s.trim().to_string()).collect())
                });
            }
            _ => return Err(Error::parse(line_no, format!("unknown key {key:?}"))),
        }
    }
    let missing = |k: &str| Error::parse(0, format!("missing {k} line"));
    Ok(ScenarioSpec {
        prime: prime.ok_or_else(|| missing("prime"))?,
        group_file: group_file.ok_or_else(|| missing("group"))?,
        h_gens: h_gens.ok_or_else(|| missing("subgroup_h"))?,
        d_gens: d_gens.ok_or_else(|| missing("vertex_d"))?,
        basket: basket.unwrap_or(BasketSpec::Auto),
    })
}

fn split_gens(text: &str) -> Vec<String> {
    text.split(';').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

impl ScenarioSpec {
    pub fn build(&self, name: &str, g: &Arc<PermGroup>) -> Result<Scenario> {
        let parse = |gens: &[String]| -> Result<Vec<Permutation>> {
            gens.iter().map(|s| Permutation::parse(g.degree(), s)).collect()
        };
        build_scenario(name, g, self.prime, parse(&self.d_gens)?, parse(&self.h_gens)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grp::DEFAULT_ORDER_CAP;

    fn group(n: usize, gens: &[&str]) -> Arc<PermGroup> {
        let gens = gens.iter().map(|s| Permutation::parse(n, s).unwrap()).collect();
        PermGroup::enumerate(n, gens, DEFAULT_ORDER_CAP).unwrap()
    }

    fn perms(n: usize, gens: &[&str]) -> Vec<Permutation> {
        gens.iter().map(|s| Permutation::parse(n, s).unwrap()).collect()
    }

    fn s4_p3() -> Scenario {
        let g = group(4, &["(0 1 2 3)", "(0 1)"]);
        build_scenario("s4_p3", &g, 3, perms(4, &["(0 1 2)"]), perms(4, &["(0 1 2)", "(0 1)"])).unwrap()
    }

    fn s3_p2() -> Scenario {
        let g = group(3, &["(0 1 2)", "(0 1)"]);
        build_scenario("s3_p2", &g, 2, perms(3, &["(0 1)"]), perms(3, &["(0 1)"])).unwrap()
    }

    fn a4_degenerate() -> Scenario {
        let g = group(4, &["(0 1 2)", "(0 1)(2 3)"]);
        build_scenario("a4", &g, 2, perms(4, &["(0 1)(2 3)", "(0 2)(1 3)"]), perms(4, &["(0 1 2)", "(0 1)(2 3)"]))
            .unwrap()
    }

    #[test]
    fn scenario_families() {
        let s = s4_p3();
        assert_eq!(s.h.order(), 6);
        assert!(s.xfam.only_trivial());
        assert!(s.yfam.only_trivial());
        let s = s3_p2();
        assert!(s.yfam.only_trivial());
        assert_eq!(s.yfam.members().len(), 1);
        let s = a4_degenerate();
        assert!(s.yfam.is_empty() && s.xfam.is_empty());
    }

    #[test]
    fn scenario_rejections() {
        let g = group(4, &["(0 1 2 3)", "(0 1)"]);
        let err = build_scenario("x", &g, 3, perms(4, &["(0 1 2)"]), perms(4, &["(0 1 2)"])).unwrap_err();
        assert!(err.is_input_error());
        let err = build_scenario("x", &g, 2, perms(4, &["(0 1 2)"]), perms(4, &["(0 1 2 3)", "(0 1)"])).unwrap_err();
        assert!(err.is_input_error());
    }

    #[test]
    fn green_g_trivial_module() {
        let s = s4_p3();
        let t = Module::trivial(s.h.group(), s.field);
        let pair = green_g(&t, &s, 1).unwrap();
        assert_eq!(pair.over_g.dim(), 1);
        assert!(pair.over_g.same_action(&Module::trivial(&s.group, s.field)));
        assert_eq!(pair.discarded.len(), 1);
        assert_eq!((pair.discarded[0].module.dim(), pair.discarded[0].multiplicity), (3, 1));
        assert!(pair.discarded[0].vertex.is_trivial());
        let back = green_f(&pair.over_g, &s, 1).unwrap();
        assert!(back.discarded.is_empty());
        assert!(back.over_h.same_action(&t));
    }

    #[test]
    fn green_g_sign_module() {
        let s = s4_p3();
        let hg = s.h.group();
        let sign: Vec<FieldMatrix> = hg
            .generators()
            .iter()
            .map(|x| {
                let odd = (x.degree() - cycle_count(x)) % 2 == 1;
                FieldMatrix::scalar(s.field, 1, if odd { 2 } else { 1 })
            })
            .collect();
        let sign = Module::new(hg.clone(), s.field, sign, "sign").unwrap();
        let pair = green_g(&sign, &s, 3).unwrap();
        assert!(are_conjugate(&pair.vertex, &s.d).unwrap().is_some());
        for d in &pair.discarded {
            assert!(d.vertex.is_trivial());
        }
        let rt = verify_round_trip(&s, &[sign], 3).unwrap();
        assert_eq!(rt.len(), 1);
    }

    fn cycle_count(x: &Permutation) -> usize {
        let n = x.degree();
        let mut seen = vec![false; n];
        let mut c = 0;
        for i in 0..n {
            if !seen[i] {
                c += 1;
                let mut j = i;
                while !seen[j] {
                    seen[j] = true;
                    j = x.image(j);
                }
            }
        }
        c
    }

    #[test]
    fn degenerate_scenario_is_identity() {
        let s = a4_degenerate();
        let basket = harvest_basket(&s, 0).unwrap();
        assert!(!basket.is_empty());
        for rt in verify_round_trip(&s, &basket, 0).unwrap() {
            assert!(rt.g_pair.discarded.is_empty() && rt.f_pair.discarded.is_empty());
            assert!(is_isomorphic(&rt.g_pair.over_g, &rt.n, 0).unwrap().is_some());
        }
        let dagger = check_dagger(&s, &default_dagger_basket(&s), 0).unwrap();
        assert!(dagger.pieces.is_empty() && dagger.passed());
    }

    #[test]
    fn s4_p3_basket_and_round_trips() {
        let s = s4_p3();
        let basket = harvest_basket(&s, 0).unwrap();
        // simples and uniserials of length two
        let mut dims: Vec<usize> = basket.iter().map(Module::dim).collect();
        dims.sort();
        assert_eq!(dims, vec![1, 1, 2, 2]);
        assert_eq!(verify_round_trip(&s, &basket, 0).unwrap().len(), 4);
        let t = green_g(&basket[0], &s, 0).unwrap();
        let r = stable_hom_correspondence(&s, &t, &t).unwrap();
        assert_eq!((r.d_h, r.d_g), (1, 1));
    }

    #[test]
    fn s3_p2_trivial_case() {
        let s = s3_p2();
        let t = Module::trivial(s.h.group(), s.field);
        assert_eq!(verify_round_trip(&s, std::slice::from_ref(&t), 0).unwrap().len(), 1);
        let basket = vec![Module::regular(s.d_in_h.group(), s.field)];
        assert!(check_dagger(&s, &basket, 0).unwrap().passed());
    }

    #[test]
    fn dagger_s4_p3() {
        let s = s4_p3();
        let w = vec![Module::trivial(s.d_in_h.group(), s.field)];
        assert!(check_dagger(&s, &w, 0).unwrap().passed());
        assert!(check_dagger(&s, &default_dagger_basket(&s), 0).unwrap().passed());
    }

    #[test]
    fn scenario_file_round_trip() {
        let text = "# comment\nprime 3\ngroup s4.grp\nsubgroup_h (0 1 2); (0 1)\nvertex_d (0 1 2)\n";
        let spec = parse_scenario(text).unwrap();
        assert_eq!(spec.h_gens, vec!["(0 1 2)", "(0 1)"]);
        assert_eq!(spec.basket, BasketSpec::Auto);
        let spec = parse_scenario(&format!("{text}basket a.mod, b.mod\n")).unwrap();
        assert_eq!(spec.basket, BasketSpec::Files(vec!["a.mod".into(), "b.mod".into()]));
        assert!(parse_scenario("prime 3\nprime 3\n").is_err());
        assert!(parse_scenario("prime 3\ngroup a\nvertex_d ()\n").is_err());
        assert!(parse_scenario("colour blue\n").is_err());
    }
}
