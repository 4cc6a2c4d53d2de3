//! Simplices of the nerve of a host category over Δ^op, their classification
//! into the families used by the filtration, and the filtration itself.
//!
//! A host is a category of slice objects in the Δ direction; its opposite is
//! the category whose nerve is studied. An n-simplex `x₀ → x₁ → ⋯ → x_n` of
//! the opposite is stored as the start object and the host arrows
//! `a_j : x_j → x_{j-1}`.

use std::collections::HashMap;

use rustc_hash::{FxHashMap, FxHashSet};
use std::fmt;

use serde::Serialize;

use crate::category::TruncatedCategory;
use crate::error::{CombinatError, Result};
use crate::simplex::{Budget, DeltaMorphism, DeltaNMorphism, DeltaNObject, MorphismClass};
use crate::slice::SliceObject;
use crate::tally::Tally;

/// `[x₀, a₁, …, a_n]`: the start object followed by host arrow ids.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Simplex(Vec<u32>);

impl Simplex {
    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn start(&self) -> u32 {
        self.0[0]
    }

    /// Host arrow `a_j`, `1 ≤ j ≤ n`.
    pub fn arrow(&self, j: usize) -> u32 {
        self.0[j]
    }

    pub fn arrows(&self) -> &[u32] {
        &self.0[1..]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Width {
    Narrow,
    Wide,
    Neither,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SimplexClass {
    NarrowActive,
    Wide,
    InA { k: usize, r: usize },
    InAPrime { k: usize, r: usize },
    InB { k: usize },
    InBPrime { k: usize },
    Decomposition,
    KFactored { k: usize },
    Unclassified,
}

impl fmt::Display for SimplexClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimplexClass::InA { k, r } => write!(f, "A({k},{r})"),
            SimplexClass::InAPrime { k, r } => write!(f, "A'({k},{r})"),
            SimplexClass::InB { k } => write!(f, "B({k})"),
            SimplexClass::InBPrime { k } => write!(f, "B'({k})"),
            other => write!(f, "{other:?}"),
        }
    }
}

/// A host category with the tables the nerve computations need.
pub struct Host {
    pub name: String,
    cat: TruncatedCategory<SliceObject>,
    dims: Vec<usize>,
    class: Vec<MorphismClass>,
    src: Vec<u32>,
    tgt: Vec<u32>,
    identity: Vec<bool>,
    comp: FxHashMap<(u32, u32), u32>,
    /// host arrows into each object, i.e. the ways to extend a chain from it
    into: Vec<Vec<u32>>,
    /// neutral arrow `x_k → x_{k-1}` ↦ (inert `y → x_{k-1}`, active `x_k → y`)
    factor: HashMap<u32, (u32, u32)>,
    /// wide object ↦ pairs (arrow `e_i → x`, arrow `p_j → e_i`) for each edge of its cells
    cells: HashMap<u32, Vec<(u32, u32)>>,
}

fn map_of(cat: &TruncatedCategory<SliceObject>, a: usize) -> &DeltaMorphism {
    &cat.arrow(a).map.components()[0]
}

impl Host {
    /// Requires an arity-one slice host with unique inert-active factorizations
    /// and all inert maps to `[1]` and `[0]` from its wide objects.
    pub fn new(name: &str, cat: TruncatedCategory<SliceObject>) -> Result<Self> {
        let n_obj = cat.objects().len();
        let n_arr = cat.size();
        let dims: Vec<usize> = (0..n_obj).map(|x| cat.shape(x).0[0]).collect();
        let class: Vec<MorphismClass> = (0..n_arr).map(|a| map_of(&cat, a).classify()).collect();
        let src: Vec<u32> = cat.arrows().iter().map(|a| a.src as u32).collect();
        let tgt: Vec<u32> = cat.arrows().iter().map(|a| a.tgt as u32).collect();
        let identity: Vec<bool> = (0..n_arr).map(|a| cat.identity(cat.arrow(a).src) == a).collect();
        for (a, arrow) in cat.arrows().iter().enumerate() {
            let m = map_of(&cat, a);
            if arrow.src == arrow.tgt && m.is_injective() && m.is_surjective() && !identity[a] {
                return Err(CombinatError::Inconsistent(format!("{name} has a non-trivial automorphism")));
            }
        }
        let mut comp = FxHashMap::default();
        let mut into = vec![Vec::new(); n_obj];
        for f in 0..n_arr {
            into[tgt[f] as usize].push(f as u32);
            for &g in cat.out_of(tgt[f] as usize) {
                if let Some(h) = cat.compose(f, g) {
                    comp.insert((f as u32, g as u32), h as u32);
                }
            }
        }
        let restrict = |x: usize, m: &DeltaMorphism| -> Result<(usize, usize)> {
            let obj = cat.object(x);
            let values = m.values().iter().map(|&i| obj.sequence()[i]).collect();
            let y = SliceObject::from_sequence(obj.target.0[0], values)?;
            let yi = cat.find(&y).ok_or_else(|| CombinatError::UnknownObject(format!("{y} in {name}")))?;
            let arrow = cat
                .find_arrow(yi, x, &DeltaNMorphism::single(m.clone()))
                .ok_or_else(|| CombinatError::UnknownMorphism(format!("{m} into {obj} in {name}")))?;
            Ok((yi, arrow))
        };
        let mut factor = HashMap::new();
        for a in 0..n_arr {
            if class[a] == MorphismClass::Neutral {
                let fac = map_of(&cat, a).factorize();
                let (y, iota) = restrict(tgt[a] as usize, &fac.inert)?;
                let alpha = cat
                    .find_arrow(src[a] as usize, y, &DeltaNMorphism::single(fac.active.clone()))
                    .ok_or_else(|| CombinatError::UnknownMorphism(format!("active part {} in {name}", fac.active)))?;
                factor.insert(a as u32, (iota as u32, alpha as u32));
            }
        }
        let mut cells = HashMap::new();
        for (x, &r) in dims.iter().enumerate() {
            if r < 2 {
                continue;
            }
            let mut edges = Vec::new();
            for i in 1..=r {
                let (e, to_x) = restrict(x, &DeltaMorphism::rho(i, r))?;
                for end in 0..=1 {
                    let (_, to_e) = restrict(e, &DeltaMorphism::point(end, 1))?;
                    edges.push((to_x as u32, to_e as u32));
                }
            }
            cells.insert(x as u32, edges);
        }
        Ok(Host { name: name.to_string(), cat, dims, class, src, tgt, identity, comp, into, factor, cells })
    }

    pub fn category(&self) -> &TruncatedCategory<SliceObject> {
        &self.cat
    }

    pub fn object_count(&self) -> usize {
        self.dims.len()
    }

    pub fn object(&self, x: u32) -> &SliceObject {
        self.cat.object(x as usize)
    }

    pub fn arrow_class(&self, a: u32) -> MorphismClass {
        self.class[a as usize]
    }

    pub fn vertex(&self, s: &Simplex, j: usize) -> u32 {
        if j == 0 {
            s.start()
        } else {
            self.src[s.arrow(j) as usize]
        }
    }

    pub fn vertices(&self, s: &Simplex) -> Vec<u32> {
        (0..=s.dim()).map(|j| self.vertex(s, j)).collect()
    }

    /// `r_j`, the Δ-dimension of vertex `j`.
    pub fn r(&self, s: &Simplex, j: usize) -> usize {
        self.dims[self.vertex(s, j) as usize]
    }

    pub fn vertex_simplex(x: u32) -> Simplex {
        Simplex(vec![x])
    }

    /// Builds a chain from a start object and host arrows, checking composability.
    pub fn chain(&self, start: u32, arrows: &[u32]) -> Result<Simplex> {
        let mut cur = start;
        for &a in arrows {
            if self.tgt[a as usize] != cur {
                return Err(CombinatError::NotASimplex(format!("arrow {a} does not end at {cur}")));
            }
            cur = self.src[a as usize];
        }
        let mut v = vec![start];
        v.extend_from_slice(arrows);
        Ok(Simplex(v))
    }

    pub fn is_nondegenerate(&self, s: &Simplex) -> bool {
        s.arrows().iter().all(|&a| !self.identity[a as usize])
    }

    /// Drops identity arrows: the nondegenerate simplex a degenerate one comes from.
    pub fn normalize(&self, s: Simplex) -> Simplex {
        if self.is_nondegenerate(&s) {
            return s;
        }
        let mut v = vec![s.start()];
        v.extend(s.arrows().iter().copied().filter(|&a| !self.identity[a as usize]));
        Simplex(v)
    }

    /// `d_j`, normalized.
    pub fn face(&self, s: &Simplex, j: usize) -> Simplex {
        let n = s.dim();
        assert!(n >= 1 && j <= n);
        let v = &s.0;
        let out = if j == 0 {
            let mut w = vec![self.src[v[1] as usize]];
            w.extend_from_slice(&v[2..]);
            w
        } else if j == n {
            v[..n].to_vec()
        } else {
            let composite = self.comp[&(v[j + 1], v[j])];
            let mut w = v[..j].to_vec();
            w.push(composite);
            w.extend_from_slice(&v[j + 2..]);
            w
        };
        self.normalize(Simplex(out))
    }

    pub fn width(&self, s: &Simplex) -> Width {
        match self.r(s, s.dim()) {
            0 => Width::Neither,
            1 => Width::Narrow,
            _ => Width::Wide,
        }
    }

    /// Positions `k` (1-based) with `f_k` neutral.
    pub fn neutral_positions(&self, s: &Simplex) -> Vec<usize> {
        (1..=s.dim()).filter(|&k| self.class[s.arrow(k) as usize] == MorphismClass::Neutral).collect()
    }

    /// Replaces the neutral `f_k` by its inert-active factorization.
    pub fn k_factor(&self, s: &Simplex, k: usize) -> Result<Simplex> {
        let a = s.arrow(k);
        let &(iota, alpha) = self
            .factor
            .get(&a)
            .ok_or_else(|| CombinatError::NotASimplex(format!("f_{k} of {s:?} is not neutral")))?;
        let mut v = s.0[..k].to_vec();
        v.push(iota);
        v.push(alpha);
        v.extend_from_slice(&s.0[k + 1..]);
        Ok(Simplex(v))
    }

    /// The top simplices `σ ⋆ (e_i → p_j)` of the decomposition diagram.
    pub fn decomposition_tops(&self, s: &Simplex) -> Result<Vec<Simplex>> {
        let last = self.vertex(s, s.dim());
        let edges = self
            .cells
            .get(&last)
            .ok_or_else(|| CombinatError::NotASimplex(format!("{s:?} is not wide")))?;
        Ok(edges
            .iter()
            .map(|&(to_x, to_e)| {
                let mut v = s.0.clone();
                v.push(to_x);
                v.push(to_e);
                Simplex(v)
            })
            .collect())
    }

    fn is(&self, s: &Simplex, p: usize, c: fn(MorphismClass) -> bool) -> bool {
        c(self.class[s.arrow(p) as usize])
    }

    /// The simplex restricted to its first `n` arrows, for the primed families.
    fn primed_core(&self, s: &Simplex) -> Option<usize> {
        let m = s.dim();
        (m >= 2 && self.r(s, m - 1) == 1 && self.r(s, m) == 0).then(|| m - 1)
    }

    fn a_conditions(&self, s: &Simplex, n: usize, k: usize, r: usize) -> bool {
        1 <= r
            && r < k
            && k <= n
            && self.is(s, r, |c| c == MorphismClass::Inert)
            && self.is(s, k, |c| c == MorphismClass::Neutral)
            && (r + 1..k).chain(k + 1..=n).all(|p| self.is(s, p, MorphismClass::is_active))
    }

    /// Membership in `A_n(k, r)` straight from the definition.
    pub fn in_a(&self, s: &Simplex, k: usize, r: usize) -> bool {
        self.is_nondegenerate(s) && self.width(s) == Width::Narrow && self.a_conditions(s, s.dim(), k, r)
    }

    /// Membership in `A′_n(k, r)`; the active range is `k < p ≤ n`.
    pub fn in_a_prime(&self, s: &Simplex, k: usize, r: usize) -> bool {
        self.is_nondegenerate(s) && self.primed_core(s).is_some_and(|n| self.a_conditions(s, n, k, r))
    }

    pub fn in_b(&self, s: &Simplex, k: usize) -> bool {
        let n = s.dim();
        self.is_nondegenerate(s)
            && self.width(s) == Width::Narrow
            && 1 <= k
            && k <= n
            && self.is(s, k, |c| c == MorphismClass::Neutral)
            && (k + 1..=n).all(|p| self.is(s, p, MorphismClass::is_active))
            && (1..k).all(|r| !self.in_a(s, k, r))
    }

    pub fn in_b_prime(&self, s: &Simplex, k: usize) -> bool {
        self.is_nondegenerate(s)
            && self.primed_core(s).is_some_and(|n| {
                1 <= k
                    && k <= n
                    && self.is(s, k, |c| c == MorphismClass::Neutral)
                    && (k + 1..=n).all(|p| self.is(s, p, MorphismClass::is_active))
                    && (1..k).all(|r| !self.in_a_prime(s, k, r))
            })
    }

    /// Family of a nondegenerate simplex, read off from its last non-active
    /// arrows; `Unclassified` outside the four families.
    pub fn classify_family(&self, s: &Simplex) -> SimplexClass {
        let family = |n: usize, primed: bool| {
            let Some(k) = (1..=n).rev().find(|&p| !self.is(s, p, MorphismClass::is_active)) else {
                return SimplexClass::Unclassified;
            };
            if !self.is(s, k, |c| c == MorphismClass::Neutral) {
                return SimplexClass::Unclassified;
            }
            match (1..k).rev().find(|&p| !self.is(s, p, MorphismClass::is_active)) {
                Some(r) if self.is(s, r, |c| c == MorphismClass::Inert) => {
                    if primed {
                        SimplexClass::InAPrime { k, r }
                    } else {
                        SimplexClass::InA { k, r }
                    }
                }
                _ if primed => SimplexClass::InBPrime { k },
                _ => SimplexClass::InB { k },
            }
        };
        match self.width(s) {
            Width::Wide => SimplexClass::Unclassified,
            Width::Narrow => family(s.dim(), false),
            Width::Neither => match self.primed_core(s) {
                Some(n) => family(n, true),
                None => SimplexClass::Unclassified,
            },
        }
    }

    /// Family if any, else `NarrowActive`, `Wide` or `Unclassified`.
    pub fn simplex_class(&self, s: &Simplex) -> SimplexClass {
        match self.classify_family(s) {
            SimplexClass::Unclassified => match self.width(s) {
                Width::Wide => SimplexClass::Wide,
                Width::Narrow if s.arrows().iter().all(|&a| self.class[a as usize].is_active()) => {
                    SimplexClass::NarrowActive
                }
                _ => SimplexClass::Unclassified,
            },
            c => c,
        }
    }

    /// The k-factored simplex demanded by the family, if any.
    pub fn family_factor(&self, s: &Simplex) -> Option<(usize, Simplex)> {
        match self.classify_family(s) {
            SimplexClass::InA { k, .. }
            | SimplexClass::InAPrime { k, .. }
            | SimplexClass::InB { k }
            | SimplexClass::InBPrime { k } => self.k_factor(s, k).ok().map(|t| (k, t)),
            _ => None,
        }
    }

    /// Nondegenerate simplices of dimension exactly `dim` whose every prefix
    /// passes `keep`.
    pub fn enumerate(&self, dim: usize, keep: &dyn Fn(&Host, &Simplex) -> bool) -> Vec<Simplex> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(dim + 1);
        for x in 0..self.object_count() as u32 {
            cur.clear();
            cur.push(x);
            self.extend(&mut cur, dim, keep, &mut out);
        }
        out
    }

    fn extend(&self, cur: &mut Vec<u32>, dim: usize, keep: &dyn Fn(&Host, &Simplex) -> bool, out: &mut Vec<Simplex>) {
        let s = Simplex(cur.clone());
        if !keep(self, &s) {
            return;
        }
        if cur.len() == dim + 1 {
            out.push(s);
            return;
        }
        let last = if cur.len() == 1 { cur[0] } else { self.src[cur[cur.len() - 1] as usize] };
        for &a in &self.into[last as usize] {
            if !self.identity[a as usize] {
                cur.push(a);
                self.extend(cur, dim, keep, out);
                cur.pop();
            }
        }
    }

    /// All nondegenerate `dim`-simplices, refusing to list more than `budget`.
    pub fn enumerate_simplices(&self, dim: usize, budget: Budget) -> Result<Vec<Simplex>> {
        let all = self.enumerate(dim, &|_, _| true);
        budget.check(all.len() as u128, "nerve simplices")?;
        Ok(all)
    }

    /// Narrow simplices all of whose arrows are active, dimension `dim`.
    pub fn narrow_active(&self, dim: usize) -> Vec<Simplex> {
        self.enumerate(dim, &|h, s| s.arrows().iter().all(|&a| h.class[a as usize].is_active()))
            .into_iter()
            .filter(|s| self.width(s) == Width::Narrow)
            .collect()
    }

    /// Extends simplices ending at `[1]` by an arrow to a `[0]`-object.
    fn primed_extensions(&self, base: &[Simplex]) -> Vec<Simplex> {
        base.iter()
            .filter(|s| self.width(s) == Width::Narrow)
            .flat_map(|s| {
                let last = self.vertex(s, s.dim());
                self.into[last as usize]
                    .iter()
                    .filter(|&&a| self.dims[self.src[a as usize] as usize] == 0)
                    .map(move |&a| {
                        let mut v = s.0.clone();
                        v.push(a);
                        Simplex(v)
                    })
            })
            .collect()
    }

    pub fn describe(&self, s: &Simplex) -> String {
        let verts: Vec<String> = self.vertices(s).iter().map(|&x| self.object(x).to_string()).collect();
        verts.join(" → ")
    }
}

type Membership<'h> = Box<dyn Fn(&Host, &Simplex) -> bool + 'h>;

/// A simplicial subset `N O₀ ⊆ N O` given by a face-closed membership predicate.
pub struct MarkedSubset<'h> {
    pub name: String,
    pub host: &'h Host,
    member: Membership<'h>,
}

impl<'h> MarkedSubset<'h> {
    pub fn new(name: &str, host: &'h Host, member: impl Fn(&Host, &Simplex) -> bool + 'h) -> Self {
        MarkedSubset { name: name.to_string(), host, member: Box::new(member) }
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        (self.member)(self.host, s)
    }

    /// Every simplex of `N O`.
    pub fn everything(host: &'h Host) -> Self {
        Self::new("everything", host, |_, _| true)
    }

    /// Δ^{⨿}/[i] inside Λ/[i]: simplices whose first vertex spans at most one step.
    pub fn coproduct_cells(host: &'h Host) -> Self {
        Self::new("coproduct of cells", host, |h, s| {
            let seq = h.object(s.start()).sequence();
            seq[seq.len() - 1] - seq[0] <= 1
        })
    }

    /// Δ ⨿_{(0)} 𝒳 ⨿_{(1)} Δ inside 𝒰: all vertices constant 0, all in
    /// {(0), (1), (0,1)}, or all constant 1.
    pub fn two_algebras_and_object(host: &'h Host) -> Self {
        Self::new("two algebras and an object", host, |h, s| {
            let verts = h.vertices(s);
            let seqs = || verts.iter().map(|&x| h.object(x).sequence());
            seqs().all(|q| q.iter().all(|&v| v == 0))
                || seqs().all(|q| q.iter().all(|&v| v == 1))
                || seqs().all(|q| matches!(q, [0] | [1] | [0, 1]))
        })
    }

    /// Nondegenerate members of dimension `dim`.
    pub fn enumerate(&self, dim: usize) -> Vec<Simplex> {
        self.host.enumerate(dim, &|_, s| self.contains(s))
    }

    /// Faces of members are members, up to `max_dim`.
    pub fn check_face_closed(&self, max_dim: usize) -> Tally {
        let mut t = Tally::new();
        for d in 1..=max_dim {
            for s in self.enumerate(d) {
                for j in 0..=d {
                    let f = self.host.face(&s, j);
                    t.record(self.contains(&f), || format!("face d_{j} of {} missing", self.host.describe(&s)));
                }
            }
        }
        t
    }
}

/// Hypotheses (a)–(d) up to dimension `max_dim`.
pub fn verify_closure_hypotheses(sub: &MarkedSubset<'_>, max_dim: usize) -> Tally {
    let h = sub.host;
    let mut t = Tally::new();
    for d in 0..=max_dim {
        for s in h.narrow_active(d) {
            t.record(sub.contains(&s), || format!("(a) narrow active {} not in subset", h.describe(&s)));
        }
        for s in sub.enumerate(d) {
            match h.width(&s) {
                Width::Wide => match h.decomposition_tops(&s) {
                    Ok(tops) => {
                        for top in tops {
                            t.record(sub.contains(&top), || {
                                format!("(b) decomposition of {} leaves the subset", h.describe(&s))
                            });
                        }
                    }
                    Err(e) => t.fail(|| format!("(b) {e}")),
                },
                _ => {
                    if let Some((k, tau)) = h.family_factor(&s) {
                        let tag = if h.primed_core(&s).is_some() { "(d)" } else { "(c)" };
                        t.record(sub.contains(&tau), || {
                            format!("{tag} {k}-factored simplex of {} leaves the subset", h.describe(&s))
                        });
                    }
                }
            }
        }
    }
    t
}

/// A face-closed set of simplices layered over a marked subset.
#[derive(Clone)]
struct Layer<'a, 'h> {
    base: &'a MarkedSubset<'h>,
    extra: FxHashSet<Simplex>,
}

impl<'a, 'h> Layer<'a, 'h> {
    fn new(base: &'a MarkedSubset<'h>) -> Self {
        Layer { base, extra: FxHashSet::default() }
    }

    fn contains(&self, s: &Simplex) -> bool {
        self.extra.contains(s) || self.base.contains(s)
    }

    /// Adds `s` with its faces; returns how many simplices were new.
    fn add(&mut self, s: Simplex) -> usize {
        if self.contains(&s) {
            return 0;
        }
        let faces: Vec<Simplex> = if s.dim() == 0 { Vec::new() } else { (0..=s.dim()).map(|j| self.base.host.face(&s, j)).collect() };
        self.extra.insert(s);
        1 + faces.into_iter().map(|f| self.add(f)).sum::<usize>()
    }

    fn add_decomposition(&mut self, s: &Simplex) -> Result<usize> {
        let tops = self.base.host.decomposition_tops(s)?;
        Ok(self.add(s.clone()) + tops.into_iter().map(|t| self.add(t)).sum::<usize>())
    }
}

/// 𝔉_n O, or 𝔉⁺_n O when `plus`, generated inside the host.
fn frak<'a, 'h>(sub: &'a MarkedSubset<'h>, n: usize, plus: bool, by_dim: &[Vec<Simplex>]) -> Result<Layer<'a, 'h>> {
    let h = sub.host;
    let mut layer = Layer::new(sub);
    for dim in by_dim.iter().take(n + 1) {
        for s in dim {
            layer.add(s.clone());
            match h.width(s) {
                Width::Wide => {
                    layer.add_decomposition(s)?;
                }
                Width::Narrow => {
                    if let Some((_, tau)) = h.family_factor(s) {
                        layer.add(tau);
                    }
                }
                Width::Neither => {}
            }
        }
        for s in h.primed_extensions(dim) {
            if let Some((_, tau)) = h.family_factor(&s) {
                layer.add(tau);
            }
        }
    }
    if plus {
        for s in h.narrow_active(n + 1) {
            layer.add(s);
        }
    }
    Ok(layer)
}

#[derive(Clone, Debug, Serialize)]
pub struct StageRecord {
    pub stage: String,
    /// simplices the stage is built from
    pub main: usize,
    /// simplices it adds, faces included
    pub added: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct FiltrationReport {
    pub n: usize,
    pub new_simplices: usize,
    pub stages: Vec<StageRecord>,
    pub tally: Tally,
}

/// Builds the filtration from 𝔉⁺_{n-1} O to 𝔉_n O stage by stage and checks
/// that main simplices are new when attached, the horn and boundary faces are
/// already present, and the last stage is all of 𝔉_n O.
pub fn filtration_partition(sub: &MarkedSubset<'_>, n: usize) -> Result<FiltrationReport> {
    let h = sub.host;
    let mut t = Tally::new();
    if n == 0 {
        return Ok(FiltrationReport { n, new_simplices: 0, stages: Vec::new(), tally: t });
    }
    let all = |_: &Host, _: &Simplex| true;
    let by_dim: Vec<Vec<Simplex>> = (0..=n).map(|d| h.enumerate(d, &all)).collect();
    let old = frak(sub, n - 1, true, &by_dim)?;
    let target = frak(sub, n, false, &by_dim)?;
    let is_new = |s: &Simplex| !old.contains(s);
    let new_count = target.extra.iter().filter(|s| is_new(s)).count();
    for s in old.extra.iter().filter(|s| !target.contains(s)) {
        t.fail(|| format!("old simplex {} outside 𝔉_{n}", h.describe(s)));
    }

    let new_n: Vec<&Simplex> = by_dim[n].iter().filter(|s| is_new(s)).collect();
    let primed: Vec<Simplex> = h.primed_extensions(&by_dim[n]).into_iter().filter(|s| is_new(s) && target.contains(s)).collect();
    let wide_new: Vec<&Simplex> = new_n.iter().copied().filter(|s| h.width(s) == Width::Wide).collect();

    let mut layer = old.clone();
    let mut stages = Vec::new();
    let mut attached: FxHashSet<Simplex> = FxHashSet::default();

    // boundary check for a wide simplex: every d_j(σ ⋆ edge), j ≤ n, is present
    let boundary_ok = |layer: &Layer, s: &Simplex| -> bool {
        h.decomposition_tops(s)
            .map(|tops| tops.iter().all(|top| (0..=s.dim()).all(|j| layer.contains(&h.face(top, j)))))
            .unwrap_or(false)
    };

    let run_wide = |label: String, members: Vec<&Simplex>, layer: &mut Layer, t: &mut Tally, attached: &mut FxHashSet<Simplex>| -> Result<StageRecord> {
        for s in &members {
            t.record(!layer.contains(s), || format!("{label}: {} already present", h.describe(s)));
            t.record(boundary_ok(layer, s), || format!("{label}: boundary of {} not in previous layer", h.describe(s)));
        }
        let mut added = 0;
        for s in &members {
            attached.insert((*s).clone());
            added += layer.add_decomposition(s)?;
        }
        Ok(StageRecord { stage: label, main: members.len(), added })
    };

    let horn = |label: String, members: Vec<Simplex>, layer: &mut Layer, t: &mut Tally, attached: &mut FxHashSet<Simplex>| -> StageRecord {
        // all horns of one stage are checked against the layer before the stage
        let mut fillers = Vec::new();
        for s in &members {
            let Some((k, tau)) = h.family_factor(s) else {
                t.fail(|| format!("{label}: {} has no k-factored simplex", h.describe(s)));
                continue;
            };
            let fresh = !layer.contains(s) && !layer.contains(&tau);
            t.record(fresh, || format!("{label}: {} already present", h.describe(s)));
            let faces_ok = (0..=tau.dim()).filter(|&j| j != k).all(|j| layer.contains(&h.face(&tau, j)));
            t.record(faces_ok, || format!("{label}: horn faces of {} not in previous layer", h.describe(&tau)));
            t.record(h.face(&tau, k) == *s, || format!("{label}: d_k of the filler is not {}", h.describe(s)));
            fillers.push(tau);
        }
        let mut added = 0;
        for (s, tau) in members.iter().zip(fillers) {
            attached.insert(s.clone());
            added += layer.add(tau);
        }
        StageRecord { stage: label, main: members.len(), added }
    };

    let s1: Vec<&Simplex> =
        wide_new.iter().copied().filter(|s| h.arrow_class(s.arrow(n)).is_inert()).collect();
    stages.push(run_wide("S1".into(), s1, &mut layer, &mut t, &mut attached)?);

    for r in (1..n).rev() {
        for k in r + 1..=n {
            let a: Vec<Simplex> = new_n.iter().filter(|s| h.in_a(s, k, r)).map(|s| (*s).clone()).collect();
            stages.push(horn(format!("A({k},{r})"), a, &mut layer, &mut t, &mut attached));
            let a1: Vec<Simplex> = primed.iter().filter(|s| h.in_a_prime(s, k, r)).cloned().collect();
            stages.push(horn(format!("A'({k},{r})"), a1, &mut layer, &mut t, &mut attached));
        }
        let s2: Vec<&Simplex> = wide_new
            .iter()
            .copied()
            .filter(|s| {
                h.arrow_class(s.arrow(r)).is_inert()
                    && (r + 1..=n).all(|p| h.arrow_class(s.arrow(p)).is_active())
                    && !attached.contains(*s)
            })
            .collect();
        stages.push(run_wide(format!("S2({r})"), s2, &mut layer, &mut t, &mut attached)?);
    }
    for k in 1..=n {
        let b: Vec<Simplex> = new_n.iter().filter(|s| h.in_b(s, k)).map(|s| (*s).clone()).collect();
        stages.push(horn(format!("B({k})"), b, &mut layer, &mut t, &mut attached));
        let b1: Vec<Simplex> = primed.iter().filter(|s| h.in_b_prime(s, k)).cloned().collect();
        stages.push(horn(format!("B'({k})"), b1, &mut layer, &mut t, &mut attached));
    }
    let s4: Vec<&Simplex> = wide_new.iter().copied().filter(|s| !layer.contains(s)).collect();
    stages.push(run_wide("S4".into(), s4, &mut layer, &mut t, &mut attached)?);

    // exhaustive and nothing outside the target
    for s in target.extra.iter().filter(|s| !layer.contains(s)) {
        t.fail(|| format!("{} never attached", h.describe(s)));
    }
    for s in layer.extra.iter().filter(|s| !target.contains(s)) {
        t.fail(|| format!("{} attached outside 𝔉_{n}", h.describe(s)));
    }
    t.pass();
    Ok(FiltrationReport { n, new_simplices: new_count, stages, tally: t })
}

/// Λ/[i] truncated at `d` as a host.
pub fn cellular_host(i: usize, d: usize) -> Result<Host> {
    Host::new(&format!("Λ/[{i}]"), crate::slice::cellular_slice(i, d, Budget::default())?)
}

/// 𝒰 truncated at `d` as a host.
pub fn u_host(d: usize) -> Result<Host> {
    Host::new("𝒰", crate::slice::build_u_category(d)?)
}

/// Counts of nondegenerate simplices per class, dimensions `0..=max_dim`.
pub fn class_counts(h: &Host, max_dim: usize) -> Vec<HashMap<String, usize>> {
    (0..=max_dim)
        .map(|d| {
            let mut m = HashMap::new();
            for s in h.enumerate(d, &|_, _| true) {
                *m.entry(h.simplex_class(&s).to_string()).or_insert(0) += 1;
            }
            m
        })
        .collect()
}

/// Object of the host with the given sequence.
/// Each nondegenerate simplex up to `max_dim` is in at most one family and
/// at most one of {family member, narrow-active, wide}, and both classifiers
/// agree with the family tests.
pub fn check_family_exclusive(h: &Host, max_dim: usize) -> Tally {
    let mut t = Tally::new();
    for d in 0..=max_dim {
        for s in h.enumerate(d, &|_, _| true) {
            let n = s.dim();
            let mut hits = Vec::new();
            for k in 1..=n {
                for r in 1..k {
                    if h.in_a(&s, k, r) {
                        hits.push(SimplexClass::InA { k, r });
                    }
                    if h.in_a_prime(&s, k, r) {
                        hits.push(SimplexClass::InAPrime { k, r });
                    }
                }
                if h.in_b(&s, k) {
                    hits.push(SimplexClass::InB { k });
                }
                if h.in_b_prime(&s, k) {
                    hits.push(SimplexClass::InBPrime { k });
                }
            }
            let narrow_active = h.width(&s) == Width::Narrow && s.arrows().iter().all(|&a| h.arrow_class(a).is_active());
            let wide = h.width(&s) == Width::Wide;
            let kinds = usize::from(!hits.is_empty()) + usize::from(narrow_active) + usize::from(wide);
            let family = hits.first().copied().unwrap_or(SimplexClass::Unclassified);
            let overall = match hits.first() {
                Some(&c) => c,
                None if narrow_active => SimplexClass::NarrowActive,
                None if wide => SimplexClass::Wide,
                None => SimplexClass::Unclassified,
            };
            let ok = hits.len() <= 1 && kinds <= 1 && h.classify_family(&s) == family && h.simplex_class(&s) == overall;
            t.record(ok, || format!("{}: families {hits:?}, narrow-active {narrow_active}, wide {wide}", h.describe(&s)));
        }
    }
    t
}

/// `d_k` of the `k`-factor of `s` is `s`, and the factor is nondegenerate,
/// for every neutral position of every simplex up to `max_dim`.
pub fn check_k_factor(h: &Host, max_dim: usize) -> Tally {
    let mut t = Tally::new();
    for d in 1..=max_dim {
        for s in h.enumerate(d, &|_, _| true) {
            for k in h.neutral_positions(&s) {
                match h.k_factor(&s, k) {
                    Ok(tau) => t.record(tau.dim() == d + 1 && h.face(&tau, k) == s && h.is_nondegenerate(&tau), || {
                        format!("{} at {k}: factor {}", h.describe(&s), h.describe(&tau))
                    }),
                    Err(e) => t.fail(|| format!("{} at {k}: {e}", h.describe(&s))),
                }
            }
        }
    }
    t
}

pub fn find_object(h: &Host, seq: &[usize]) -> Option<u32> {
    let n = h.object(0).target.0[0];
    let o = SliceObject::from_sequence(n, seq.to_vec()).ok()?;
    h.category().find(&o).map(|x| x as u32)
}

/// The host arrow `src → tgt` over `map`.
pub fn find_arrow(h: &Host, src: u32, tgt: u32, map: &[usize]) -> Option<u32> {
    let m = DeltaMorphism::new(h.dims[src as usize], h.dims[tgt as usize], map.to_vec()).ok()?;
    h.category().find_arrow(src as usize, tgt as usize, &DeltaNMorphism::single(m)).map(|a| a as u32)
}

/// Shape of the underlying Δ object of vertex `j`.
pub fn vertex_shape(h: &Host, s: &Simplex, j: usize) -> DeltaNObject {
    DeltaNObject(vec![h.r(s, j)])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn host2() -> Host {
        cellular_host(2, 2).unwrap()
    }

    #[test]
    fn zero_and_one_simplices() {
        let h = host2();
        let v = h.enumerate(0, &|_, _| true);
        assert_eq!(v.len(), h.object_count());
        let e = h.enumerate(1, &|_, _| true);
        let non_id = h.category().arrows().iter().filter(|a| !a.map.is_identity()).count();
        assert_eq!(e.len(), non_id);
    }

    #[test]
    fn two_simplices_match_composable_pairs() {
        let h = cellular_host(1, 2).unwrap();
        let cat = h.category();
        let mut pairs = 0;
        for (f, a) in cat.arrows().iter().enumerate() {
            if a.map.is_identity() {
                continue;
            }
            for g in 0..cat.size() {
                if cat.arrow(g).tgt == a.src && !cat.arrow(g).map.is_identity() {
                    pairs += 1;
                    let _ = f;
                }
            }
        }
        assert_eq!(h.enumerate(2, &|_, _| true).len(), pairs);
    }

    #[test]
    fn width_examples() {
        let h = host2();
        let x = find_object(&h, &[0, 1, 2]).unwrap();
        let e = find_object(&h, &[0, 1]).unwrap();
        let p = find_object(&h, &[1]).unwrap();
        assert_eq!(h.width(&Host::vertex_simplex(x)), Width::Wide);
        assert_eq!(h.width(&Host::vertex_simplex(e)), Width::Narrow);
        assert_eq!(h.width(&Host::vertex_simplex(p)), Width::Neither);
    }

    #[test]
    fn k_factor_recovers_simplex() {
        let t = check_k_factor(&host2(), 3);
        assert!(t.ok() && t.checked > 0, "{:?}", t.witnesses);
    }

    #[test]
    fn k_factor_example() {
        // x₀ = (0,1,1,2) restricted along (1,3) gives (1,2); (1,3) factors through [2]
        let h = cellular_host(2, 3).unwrap();
        let x0 = find_object(&h, &[0, 1, 1, 2]).unwrap();
        let x1 = find_object(&h, &[1, 2]).unwrap();
        let a = find_arrow(&h, x1, x0, &[1, 3]).unwrap();
        let s = h.chain(x0, &[a]).unwrap();
        assert_eq!(h.neutral_positions(&s), vec![1]);
        let tau = h.k_factor(&s, 1).unwrap();
        assert_eq!(h.vertices(&tau)[1], find_object(&h, &[1, 1, 2]).unwrap());
        assert!(h.k_factor(&s, 1).is_ok());
        assert!(h.k_factor(&tau, 1).is_err());
    }

    #[test]
    fn double_factoring_commutes() {
        let h = cellular_host(2, 3).unwrap();
        for s in h.enumerate(2, &|_, _| true) {
            let ks = h.neutral_positions(&s);
            if ks == vec![1, 2] {
                let a = h.k_factor(&h.k_factor(&s, 2).unwrap(), 1).unwrap();
                let b = h.k_factor(&h.k_factor(&s, 1).unwrap(), 3).unwrap();
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn decomposition_of_a_point() {
        let h = host2();
        let x = find_object(&h, &[0, 1, 2]).unwrap();
        let tops = h.decomposition_tops(&Host::vertex_simplex(x)).unwrap();
        assert_eq!(tops.len(), 4);
        let sub = MarkedSubset::new("none", &h, |_, _| false);
        let mut layer = Layer::new(&sub);
        for t in tops {
            layer.add(t);
        }
        // vertices: x, 2 edges, 3 points
        let verts = layer.extra.iter().filter(|s| s.dim() == 0).count();
        assert_eq!(verts, 6);
        // narrow: error
        let e = find_object(&h, &[0, 1]).unwrap();
        assert!(h.decomposition_tops(&Host::vertex_simplex(e)).is_err());
    }

    #[test]
    fn families_are_exclusive() {
        let h = cellular_host(2, 2).unwrap();
        let t = check_family_exclusive(&h, 4);
        assert!(t.ok() && t.checked > 0, "{:?}", t.witnesses);
    }

    #[test]
    fn classify_examples() {
        let h = cellular_host(2, 3).unwrap();
        let x0 = find_object(&h, &[0, 1, 1, 2]).unwrap();
        let x1 = find_object(&h, &[0, 1, 1]).unwrap();
        let x2 = find_object(&h, &[0, 0]).unwrap();
        // inert then neutral, ending at [1]
        let a1 = find_arrow(&h, x1, x0, &[0, 1, 2]).unwrap();
        let a2 = find_arrow(&h, x2, x1, &[0, 0]).unwrap();
        let s = h.chain(x0, &[a1, a2]).unwrap();
        assert_eq!(h.classify_family(&s), SimplexClass::InA { k: 2, r: 1 });
        // active then neutral
        let y0 = find_object(&h, &[0, 1, 2]).unwrap();
        let b1 = find_arrow(&h, x0, y0, &[0, 1, 1, 2]).unwrap();
        let b2 = find_arrow(&h, x2, x0, &[0, 0]).unwrap();
        let s = h.chain(y0, &[b1, b2]).unwrap();
        assert_eq!(h.classify_family(&s), SimplexClass::InB { k: 2 });
        // primed: extend by a point of (0,0)
        let p = find_object(&h, &[0]).unwrap();
        let c = find_arrow(&h, p, x2, &[1]).unwrap();
        let s = h.chain(y0, &[b1, b2, c]).unwrap();
        assert_eq!(h.classify_family(&s), SimplexClass::InBPrime { k: 2 });
        // (0,2) is not cellular, so an active map to [1] needs a repeated value
        assert!(find_object(&h, &[0, 2]).is_none());
        let top = find_object(&h, &[1, 1, 2]).unwrap();
        let w = find_object(&h, &[1, 2]).unwrap();
        let a = find_arrow(&h, w, top, &[0, 2]).unwrap();
        let s = h.chain(top, &[a]).unwrap();
        assert_eq!(h.classify_family(&s), SimplexClass::Unclassified);
        assert_eq!(h.simplex_class(&s), SimplexClass::NarrowActive);
        assert_eq!(h.simplex_class(&Host::vertex_simplex(y0)), SimplexClass::Wide);
    }

    #[test]
    fn subsets_are_face_closed() {
        let h = host2();
        assert!(MarkedSubset::coproduct_cells(&h).check_face_closed(3).ok());
        let u = u_host(2).unwrap();
        assert!(MarkedSubset::two_algebras_and_object(&u).check_face_closed(3).ok());
    }

    #[test]
    fn closure_hypotheses_small() {
        let h = cellular_host(1, 2).unwrap();
        let t = verify_closure_hypotheses(&MarkedSubset::coproduct_cells(&h), 2);
        assert!(t.ok(), "{:?}", t.witnesses);
        let t = verify_closure_hypotheses(&MarkedSubset::everything(&h), 2);
        assert!(t.ok(), "{:?}", t.witnesses);
    }

    #[test]
    fn filtration_small() {
        let h = cellular_host(1, 2).unwrap();
        let sub = MarkedSubset::coproduct_cells(&h);
        let r = filtration_partition(&sub, 0).unwrap();
        assert!(r.tally.ok());
        for n in 1..=2 {
            let r = filtration_partition(&sub, n).unwrap();
            assert!(r.tally.ok(), "n={n}: {:?}", r.tally.witnesses);
        }
    }

    #[test]
    fn delta_op_low_dimensions() {
        // cellular sequences into [0] are the ordinals themselves
        let h = cellular_host(0, 1).unwrap();
        assert_eq!(h.enumerate_simplices(0, Budget::default()).unwrap().len(), 2);
        // non-identity maps among [0], [1]: two points, one collapse, two constant endomaps
        let edges = h.enumerate_simplices(1, Budget::default()).unwrap();
        assert_eq!(edges.len(), 2 + 1 + 2);
        assert!(h.enumerate_simplices(2, Budget(edges.len() as u64)).is_err());
    }

    #[test]
    fn decomposition_face_closure() {
        let h = cellular_host(2, 3).unwrap();
        let none = MarkedSubset::new("none", &h, |_, _| false);
        for d in 0..=2 {
            for s in h.enumerate(d, &|_, _| true).into_iter().filter(|s| h.width(s) == Width::Wide) {
                let mut layer = Layer::new(&none);
                layer.add_decomposition(&s).unwrap();
                for x in layer.extra.iter().filter(|x| x.dim() > 0) {
                    assert!((0..=x.dim()).all(|j| layer.contains(&h.face(x, j))));
                }
                // σ itself, σ ⋆ e_i, σ ⋆ p_j and σ ⋆ (e_i → p_j) contain all of σ
                let full = layer.extra.iter().filter(|x| x.dim() >= d && x.0[..=d] == s.0[..]).count();
                let r = h.r(&s, d);
                assert_eq!(full, 1 + r + (r + 1) + 2 * r);
            }
        }
    }

    #[test]
    fn neutral_position_examples() {
        let h = cellular_host(2, 3).unwrap();
        let x = find_object(&h, &[0, 1, 1, 2]).unwrap();
        let inert = find_arrow(&h, find_object(&h, &[1, 1, 2]).unwrap(), x, &[1, 2, 3]).unwrap();
        let s = h.chain(x, &[inert]).unwrap();
        assert!(h.neutral_positions(&s).is_empty());
        assert!(h.neutral_positions(&Host::vertex_simplex(x)).is_empty());
    }

    #[test]
    fn automorphism_free_hosts() {
        assert!(cellular_host(3, 2).is_ok());
        assert!(u_host(3).is_ok());
    }
}
