//! Finite permutation groups with full element tables.
//!
//! Groups are enumerated by breadth-first closure from the identity, always
//! multiplying on the right by the generators in their given order. The
//! resulting element order is the only ordering used downstream (coset
//! representatives, scans, witness search), which is what makes every
//! computation in the crate reproducible without canonical forms.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Default cap on enumerated group orders.
pub const DEFAULT_ORDER_CAP: usize = 5000;

/// Largest group accepted by [`all_subgroups`].
pub const SUBGROUP_SCAN_CAP: usize = 256;

/// A permutation of `{0, .., n-1}`; `images[i]` is the image of `i`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Box<[u32]>,
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Permutation {
    /// Disjoint cycle notation, `()` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.degree()];
        let mut any = false;
        for start in 0..self.degree() {
            if seen[start] || self.image(start) == start {
                continue;
            }
            any = true;
            write!(f, "(")?;
            let mut x = start;
            let mut first = true;
            while !seen[x] {
                seen[x] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{x}")?;
                first = false;
                x = self.image(x);
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation { images: (0..degree as u32).collect() }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut hit = vec![false; n];
        for &i in &images {
            if i as usize >= n || std::mem::replace(&mut hit[i as usize], true) {
                return Err(Error::input(format!("images {images:?} do not form a bijection")));
            }
        }
        Ok(Permutation { images: images.into_boxed_slice() })
    }

    pub fn from_cycles(degree: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut used = vec![false; degree];
        for cycle in cycles {
            for (k, &x) in cycle.iter().enumerate() {
                if x >= degree {
                    return Err(Error::input(format!("point {x} out of range for degree {degree}")));
                }
                if std::mem::replace(&mut used[x], true) {
                    return Err(Error::input(format!("point {x} appears twice in cycle notation")));
                }
                images[x] = cycle[(k + 1) % cycle.len()] as u32;
            }
        }
        Permutation::from_images(images)
    }

    /// Parses disjoint cycle notation such as `(0 1 2)(3 4)` or `()`.
    pub fn parse(degree: usize, text: &str) -> Result<Self> {
        let mut cycles = Vec::new();
        let mut rest = text.trim();
        if rest.is_empty() {
            return Err(Error::input("empty permutation; write () for the identity"));
        }
        while !rest.is_empty() {
            let Some(body) = rest.strip_prefix('(') else {
                return Err(Error::input(format!("expected '(' in cycle notation at {rest:?}")));
            };
            let Some(close) = body.find(')') else {
                return Err(Error::input(format!("unclosed cycle in {text:?}")));
            };
            let points = body[..close]
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::input(format!("bad point {t:?} in {text:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            if !points.is_empty() {
                cycles.push(points);
            }
            rest = body[close + 1..].trim_start();
        }
        Permutation::from_cycles(degree, &cycles)
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn image(&self, i: usize) -> usize {
        self.images[i] as usize
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "degree mismatch in compose");
        Permutation { images: other.images.iter().map(|&i| self.images[i as usize]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Permutation { images: inv.into_boxed_slice() }
    }

    /// `x ∘ self ∘ x⁻¹`.
    pub fn conjugate_by(&self, x: &Permutation) -> Permutation {
        x.compose(self).compose(&x.inverse())
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    pub fn order(&self) -> usize {
        let mut seen = vec![false; self.degree()];
        let mut order = 1usize;
        for start in 0..self.degree() {
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.image(x);
                len += 1;
            }
            if len > 0 {
                order = lcm(order, len);
            }
        }
        order
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

pub(crate) fn is_power_of(mut n: usize, p: usize) -> bool {
    if n == 0 {
        return false;
    }
    while n.is_multiple_of(p) {
        n /= p;
    }
    n == 1
}

pub(crate) fn p_part(mut n: usize, p: usize) -> usize {
    let mut part = 1;
    while n.is_multiple_of(p) {
        n /= p;
        part *= p;
    }
    part
}

/// A finite permutation group with its full element table.
pub struct PermGroup {
    degree: usize,
    gens: Vec<Permutation>,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, usize>,
    words: Vec<Vec<usize>>,
    // elements[i] = elements[step[i].0] ∘ gens[step[i].1] for i > 0
    step: Vec<(usize, usize)>,
    right_gen: Vec<Vec<usize>>,
    inverse: Vec<usize>,
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PermGroup(order {}, gens [", self.order())?;
        for (i, g) in self.gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "])")
    }
}

impl PermGroup {
    /// Breadth-first closure of `gens`, recording shortest generator words.
    pub fn enumerate(degree: usize, gens: Vec<Permutation>, cap: usize) -> Result<Arc<PermGroup>> {
        if let Some(g) = gens.iter().find(|g| g.degree() != degree) {
            return Err(Error::input(format!(
                "generator {g} has degree {} but the group has degree {degree}",
                g.degree()
            )));
        }
        let id = Permutation::identity(degree);
        let mut elements = vec![id.clone()];
        let mut index = HashMap::from([(id, 0usize)]);
        let mut words = vec![Vec::new()];
        let mut step = vec![(0, 0)];
        let mut right_gen = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(e) = queue.pop_front() {
            let mut row = Vec::with_capacity(gens.len());
            for (s, g) in gens.iter().enumerate() {
                let x = elements[e].compose(g);
                let idx = match index.get(&x) {
                    Some(&i) => i,
                    None => {
                        let i = elements.len();
                        if i >= cap {
                            return Err(Error::Resource(format!(
                                "group order exceeds the cap of {cap}"
                            )));
                        }
                        let mut w = words[e].clone();
                        w.push(s);
                        words.push(w);
                        step.push((e, s));
                        index.insert(x.clone(), i);
                        elements.push(x);
                        queue.push_back(i);
                        i
                    }
                };
                row.push(idx);
            }
            right_gen.push(row);
        }
        // BFS pops in discovery order, so right_gen is indexed by element.
        let inverse = elements.iter().map(|e| index[&e.inverse()]).collect();
        Ok(Arc::new(PermGroup { degree, gens, elements, index, words, step, right_gen, inverse }))
    }

    pub fn trivial(degree: usize) -> Arc<PermGroup> {
        PermGroup::enumerate(degree, Vec::new(), 1).expect("trivial group")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.gens
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Permutation {
        &self.elements[i]
    }

    pub fn index_of(&self, g: &Permutation) -> Option<usize> {
        self.index.get(g).copied()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.index.contains_key(g)
    }

    /// Generator word of element `i`; evaluating it left to right gives the element.
    pub fn word(&self, i: usize) -> &[usize] {
        &self.words[i]
    }

    /// `(j, s)` with `element(i) = element(j) ∘ gen(s)`, for `i > 0`.
    pub fn step(&self, i: usize) -> Option<(usize, usize)> {
        (i > 0).then(|| self.step[i])
    }

    /// Index of `element(i) ∘ gen(s)`.
    pub fn right_gen(&self, i: usize, s: usize) -> usize {
        self.right_gen[i][s]
    }

    pub fn inverse_index(&self, i: usize) -> usize {
        self.inverse[i]
    }

    pub fn mul_index(&self, i: usize, j: usize) -> usize {
        self.index[&self.elements[i].compose(&self.elements[j])]
    }

    /// Two groups with equal degree and generator lists have identical tables.
    pub fn same_as(&self, other: &PermGroup) -> bool {
        std::ptr::eq(self, other) || (self.degree == other.degree && self.gens == other.gens)
    }

    /// Sorted element indices of the subgroup generated by the given elements.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[0] = true;
        let mut members = vec![0usize];
        let mut k = 0;
        while k < members.len() {
            let e = members[k];
            k += 1;
            for &g in gens {
                let x = self.mul_index(e, g);
                if !seen[x] {
                    seen[x] = true;
                    members.push(x);
                }
            }
        }
        members.sort_unstable();
        members
    }
}

/// A subgroup of `parent`, carried as its own enumerated group plus the
/// embedding of its elements into the parent's table.
#[derive(Clone)]
pub struct Subgroup {
    parent: Arc<PermGroup>,
    group: Arc<PermGroup>,
    embed: Vec<usize>,
    key: Vec<usize>,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup(order {} of {}, gens [", self.order(), self.parent.order())?;
        for (i, g) in self.group.generators().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "])")
    }
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.parent.same_as(&other.parent) && self.key == other.key
    }
}

impl Eq for Subgroup {}

impl Subgroup {
    pub fn new(parent: Arc<PermGroup>, group: Arc<PermGroup>) -> Result<Subgroup> {
        if parent.degree() != group.degree() {
            return Err(Error::input("subgroup and parent have different degrees"));
        }
        let embed = group
            .elements()
            .iter()
            .map(|e| {
                parent
                    .index_of(e)
                    .ok_or_else(|| Error::input(format!("{e} does not lie in the parent group")))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut key = embed.clone();
        key.sort_unstable();
        Ok(Subgroup { parent, group, embed, key })
    }

    pub fn generated(parent: &Arc<PermGroup>, gens: Vec<Permutation>) -> Result<Subgroup> {
        let group = PermGroup::enumerate(parent.degree(), gens, parent.order().max(1))
            .map_err(|e| match e {
                Error::Resource(_) => Error::input("generators do not lie in the parent group"),
                other => other,
            })?;
        Subgroup::new(parent.clone(), group)
    }

    pub fn whole(parent: &Arc<PermGroup>) -> Subgroup {
        Subgroup::new(parent.clone(), parent.clone()).expect("group is a subgroup of itself")
    }

    pub fn trivial(parent: &Arc<PermGroup>) -> Subgroup {
        Subgroup::generated(parent, Vec::new()).expect("trivial subgroup")
    }

    /// Subgroup given by a closed set of parent element indices. Generators
    /// are chosen greedily in parent order.
    pub fn from_parent_indices(parent: &Arc<PermGroup>, members: &[usize]) -> Result<Subgroup> {
        let mut sorted = members.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut gens = Vec::new();
        let mut span: HashSet<usize> = HashSet::from([0]);
        for &m in &sorted {
            if !span.contains(&m) {
                gens.push(m);
                span = parent.closure(&gens).into_iter().collect();
            }
        }
        if span.len() != sorted.len() || !sorted.iter().all(|m| span.contains(m)) {
            return Err(Error::input("element set is not closed under multiplication"));
        }
        Subgroup::generated(parent, gens.iter().map(|&i| parent.element(i).clone()).collect())
    }

    pub fn parent(&self) -> &Arc<PermGroup> {
        &self.parent
    }

    pub fn group(&self) -> &Arc<PermGroup> {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn index_in_parent(&self) -> usize {
        self.parent.order() / self.order()
    }

    /// Sorted parent indices of the members.
    pub fn key(&self) -> &[usize] {
        &self.key
    }

    /// Parent index of the subgroup's `i`-th element.
    pub fn embed(&self, i: usize) -> usize {
        self.embed[i]
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.group.contains(g)
    }

    pub fn contains_parent_index(&self, i: usize) -> bool {
        self.key.binary_search(&i).is_ok()
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.parent.same_as(&other.parent)
            && self.key.iter().all(|&i| other.contains_parent_index(i))
    }

    pub fn is_whole(&self) -> bool {
        self.order() == self.parent.order()
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn is_p_group(&self, p: usize) -> bool {
        is_power_of(self.order(), p)
    }

    /// Re-parents this subgroup into `ambient` (which must contain it).
    pub fn within(&self, ambient: &Arc<PermGroup>) -> Result<Subgroup> {
        Subgroup::new(ambient.clone(), self.group.clone())
    }

    /// View of `self` as a subgroup of `over`, which must contain it.
    pub fn as_subgroup_of(&self, over: &Subgroup) -> Result<Subgroup> {
        Subgroup::new(over.group.clone(), self.group.clone())
    }

    pub fn generators_display(&self) -> String {
        let gens = self.group.generators();
        if gens.is_empty() {
            "()".to_string()
        } else {
            gens.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
        }
    }
}

/// Left cosets `gH` of `h` in its parent: representatives (parent indices,
/// identity first, each the BFS-least element of its coset) and the coset
/// number of every parent element.
#[derive(Clone, Debug)]
pub struct LeftCosets {
    pub reps: Vec<usize>,
    pub coset_of: Vec<usize>,
}

pub fn left_cosets(h: &Subgroup) -> LeftCosets {
    let g = h.parent();
    let mut coset_of = vec![usize::MAX; g.order()];
    let mut reps = Vec::new();
    for x in 0..g.order() {
        if coset_of[x] != usize::MAX {
            continue;
        }
        let c = reps.len();
        reps.push(x);
        for &y in h.key() {
            coset_of[g.mul_index(x, y)] = c;
        }
    }
    LeftCosets { reps, coset_of }
}

pub fn left_coset_reps(h: &Subgroup) -> Vec<Permutation> {
    let g = h.parent();
    left_cosets(h).reps.iter().map(|&i| g.element(i).clone()).collect()
}

/// Representatives of the double cosets `K x H`, BFS-least in each.
pub fn double_coset_reps(k: &Subgroup, h: &Subgroup) -> Result<Vec<Permutation>> {
    if !k.parent().same_as(h.parent()) {
        return Err(Error::input("double cosets of subgroups of different groups"));
    }
    let g = h.parent();
    let mut covered = vec![false; g.order()];
    let mut reps = Vec::new();
    for x in 0..g.order() {
        if covered[x] {
            continue;
        }
        reps.push(g.element(x).clone());
        for &a in k.key() {
            let ax = g.mul_index(a, x);
            for &b in h.key() {
                covered[g.mul_index(ax, b)] = true;
            }
        }
    }
    Ok(reps)
}

/// `x D x⁻¹` as a subgroup of the same parent.
pub fn conjugate_subgroup(d: &Subgroup, x: &Permutation) -> Result<Subgroup> {
    if !d.parent().contains(x) {
        return Err(Error::input(format!("{x} does not lie in the parent group")));
    }
    let gens = d.group().generators().iter().map(|g| g.conjugate_by(x)).collect();
    Subgroup::generated(d.parent(), gens)
}

/// Whether `x A x⁻¹ ≤ B`.
fn conjugates_into(a: &Subgroup, b: &Subgroup, x: &Permutation) -> bool {
    a.group().generators().iter().all(|g| b.contains(&g.conjugate_by(x)))
}

pub fn normalizer(d: &Subgroup) -> Subgroup {
    let g = d.parent();
    let members: Vec<usize> = (0..g.order())
        .filter(|&x| conjugates_into(d, d, g.element(x)))
        .collect();
    Subgroup::from_parent_indices(g, &members).expect("normalizer is a subgroup")
}

/// A Sylow p-subgroup grown greedily from the BFS-first p-elements.
pub fn sylow(g: &Arc<PermGroup>, p: usize) -> Subgroup {
    let target = p_part(g.order(), p);
    let mut current: Vec<usize> = vec![0];
    let mut gens: Vec<usize> = Vec::new();
    while current.len() < target {
        let mut grown = false;
        for x in 0..g.order() {
            if current.binary_search(&x).is_ok() || !is_power_of(g.element(x).order(), p) {
                continue;
            }
            let mut trial = gens.clone();
            trial.push(x);
            let span = g.closure(&trial);
            if is_power_of(span.len(), p) {
                gens = trial;
                current = span;
                grown = true;
                break;
            }
        }
        assert!(grown, "a non-Sylow p-subgroup always extends");
    }
    Subgroup::from_parent_indices(g, &current).expect("closure is a subgroup")
}

/// Every subgroup of `s`, each once, sorted by order then member list.
pub fn all_subgroups(s: &Subgroup) -> Result<Vec<Subgroup>> {
    if s.order() > SUBGROUP_SCAN_CAP {
        return Err(Error::Resource(format!(
            "subgroup lattice scan limited to order {SUBGROUP_SCAN_CAP}, got {}",
            s.order()
        )));
    }
    let g = s.parent();
    let members = s.key().to_vec();
    let n = members.len();
    let local: HashMap<usize, usize> = members.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let table: Vec<Vec<usize>> = members
        .iter()
        .map(|&a| members.iter().map(|&b| local[&g.mul_index(a, b)]).collect())
        .collect();
    let closure = |gens: &[usize]| -> Vec<bool> {
        let mut inside = vec![false; n];
        let id = local[&0];
        inside[id] = true;
        let mut stack = vec![id];
        while let Some(e) = stack.pop() {
            for &x in gens {
                let y = table[e][x];
                if !inside[y] {
                    inside[y] = true;
                    stack.push(y);
                }
            }
        }
        inside
    };
    let mut found: HashSet<Vec<bool>> = HashSet::new();
    let mut queue: Vec<(Vec<bool>, Vec<usize>)> = Vec::new();
    let trivial = closure(&[]);
    found.insert(trivial.clone());
    queue.push((trivial, Vec::new()));
    let mut k = 0;
    while k < queue.len() {
        let (set, gens) = queue[k].clone();
        k += 1;
        for x in 0..n {
            if set[x] {
                continue;
            }
            let mut next_gens = gens.clone();
            next_gens.push(x);
            let next = closure(&next_gens);
            if found.insert(next.clone()) {
                queue.push((next, next_gens));
            }
        }
    }
    let mut keys: Vec<Vec<usize>> = found
        .into_iter()
        .map(|set| (0..n).filter(|&i| set[i]).map(|i| members[i]).collect::<Vec<_>>())
        .collect();
    keys.iter_mut().for_each(|k| k.sort_unstable());
    keys.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    keys.iter().map(|k| Subgroup::from_parent_indices(g, k)).collect()
}

/// Maximal proper subgroups of `s`, in [`all_subgroups`] order.
pub fn maximal_subgroups(s: &Subgroup) -> Result<Vec<Subgroup>> {
    let all = all_subgroups(s)?;
    let proper: Vec<&Subgroup> = all.iter().filter(|t| t.order() < s.order()).collect();
    Ok(proper
        .iter()
        .filter(|t| !proper.iter().any(|u| u.order() > t.order() && t.is_subgroup_of(u)))
        .map(|t| (*t).clone())
        .collect())
}

/// Some `x` with `x A x⁻¹ ≤ B`, scanning the parent in BFS order.
pub fn is_subconjugate(a: &Subgroup, b: &Subgroup) -> Result<Option<Permutation>> {
    if !a.parent().same_as(b.parent()) {
        return Err(Error::input("subconjugacy test across different groups"));
    }
    if a.order() > b.order() || !b.order().is_multiple_of(a.order()) {
        return Ok(None);
    }
    let g = a.parent();
    Ok(g.elements().iter().find(|x| conjugates_into(a, b, x)).cloned())
}

pub fn are_conjugate(a: &Subgroup, b: &Subgroup) -> Result<Option<Permutation>> {
    if a.order() != b.order() {
        return Ok(None);
    }
    is_subconjugate(a, b)
}

pub fn intersect(h: &Subgroup, k: &Subgroup) -> Result<Subgroup> {
    if !h.parent().same_as(k.parent()) {
        return Err(Error::input("intersection of subgroups of different groups"));
    }
    let common: Vec<usize> =
        h.key().iter().copied().filter(|&i| k.contains_parent_index(i)).collect();
    Subgroup::from_parent_indices(h.parent(), &common)
}

/// Parses a `.grp` file: `degree N` then `gen <cycles>` lines.
///
/// Blank lines and lines starting with `#` are ignored; anything else that
/// is not one of the two forms is rejected.
pub fn parse_group(text: &str, cap: usize) -> Result<Arc<PermGroup>> {
    let mut degree: Option<usize> = None;
    let mut gens = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line_no = no + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (head, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        match head {
            "degree" => {
                if degree.is_some() {
                    return Err(Error::parse(line_no, "duplicate degree line"));
                }
                let n = rest
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| Error::parse(line_no, format!("bad degree {:?}", rest.trim())))?;
                degree = Some(n);
            }
            "gen" => {
                let n = degree.ok_or_else(|| Error::parse(line_no, "gen before degree"))?;
                let g = Permutation::parse(n, rest)
                    .map_err(|e| Error::parse(line_no, e.to_string()))?;
                gens.push(g);
            }
            _ => return Err(Error::parse(line_no, format!("unknown line {line:?}"))),
        }
    }
    let degree = degree.ok_or_else(|| Error::parse(1, "missing degree line"))?;
    PermGroup::enumerate(degree, gens, cap)
}

pub fn format_group(g: &PermGroup) -> String {
    let mut out = format!("degree {}\n", g.degree());
    for s in g.generators() {
        out.push_str(&format!("gen {s}\n"));
    }
    out
}
