//! Set-valued presheaves on truncated index categories and the Segal
//! conditions for monoids, slice monoids, n-uple and n-fold objects.
//!
//! Equivalences are bijections of finite sets throughout.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Debug;
use std::hash::Hash;

use ncat_combinat::category::TruncatedCategory;
use ncat_combinat::simplex::{cell_maps_over, enumerate_n_morphisms, inert_cell_maps, DeltaMorphism, DeltaNMorphism, DeltaNObject};
use ncat_combinat::slice::SliceObject;
use ncat_combinat::{Budget, Tally};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{AlgebraError, Result};

/// `act[f]` sends `X(tgt f)` to `X(src f)`.
#[derive(Clone)]
pub struct Presheaf<'c, O> {
    index: &'c TruncatedCategory<O>,
    sizes: Vec<usize>,
    act: Vec<Vec<usize>>,
}

impl<O> Debug for Presheaf<'_, O> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Presheaf").field("sizes", &self.sizes).finish_non_exhaustive()
    }
}

impl<'c, O: Clone + Eq + Hash + Ord + Debug> Presheaf<'c, O> {
    pub fn new(index: &'c TruncatedCategory<O>, sizes: Vec<usize>, act: Vec<Vec<usize>>) -> Result<Self> {
        if sizes.len() != index.objects().len() || act.len() != index.size() {
            return Err(AlgebraError::Shape("one carrier per object and one table per arrow".into()));
        }
        for (f, a) in index.arrows().iter().enumerate() {
            if act[f].len() != sizes[a.tgt] || act[f].iter().any(|&x| x >= sizes[a.src]) {
                return Err(AlgebraError::Shape(format!("table of arrow {f} does not fit its carriers")));
            }
        }
        Ok(Presheaf { index, sizes, act })
    }

    /// Builds the tables from a rule computing `act(f)(x)`.
    pub fn from_fn(index: &'c TruncatedCategory<O>, sizes: Vec<usize>, rule: impl Fn(usize, usize) -> usize) -> Result<Self> {
        let act = index.arrows().iter().enumerate().map(|(f, a)| (0..sizes[a.tgt]).map(|x| rule(f, x)).collect()).collect();
        Self::new(index, sizes, act)
    }

    pub fn index(&self) -> &'c TruncatedCategory<O> {
        self.index
    }

    pub fn size_at(&self, obj: usize) -> usize {
        self.sizes[obj]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn apply(&self, f: usize, x: usize) -> usize {
        self.act[f][x]
    }

    pub fn table(&self, f: usize) -> &[usize] {
        &self.act[f]
    }

    /// `act(g∘f) = act(f)∘act(g)` on every stored composite, `act(id) = id`.
    pub fn audit_functoriality(&self) -> Tally {
        let mut t = Tally::new();
        let idx = self.index;
        for a in 0..idx.objects().len() {
            let id = idx.identity(a);
            t.record(self.act[id].iter().enumerate().all(|(x, &y)| x == y), || format!("identity of {:?} acts nontrivially", idx.object(a)));
        }
        for (f, af) in idx.arrows().iter().enumerate() {
            for &g in idx.out_of(af.tgt) {
                let Some(gf) = idx.compose(f, g) else { continue };
                let ok = (0..self.sizes[idx.arrow(g).tgt]).all(|x| self.act[gf][x] == self.act[f][self.act[g][x]]);
                t.record(ok, || format!("act({g}∘{f}) ≠ act({f})∘act({g})"));
            }
        }
        t
    }

    /// Pulls back along a functor given on objects and arrows.
    pub fn restrict<'d, P: Clone + Eq + Hash + Ord + Debug>(
        &self,
        along: &'d TruncatedCategory<P>,
        on_objects: impl Fn(usize) -> Option<usize>,
        on_arrows: impl Fn(usize) -> Option<usize>,
    ) -> Result<Presheaf<'d, P>> {
        let objs: Vec<usize> = (0..along.objects().len())
            .map(|a| on_objects(a).ok_or_else(|| AlgebraError::Incompatible(format!("object {:?} has no image", along.object(a)))))
            .collect::<Result<_>>()?;
        let arrows: Vec<usize> = (0..along.size())
            .map(|f| on_arrows(f).ok_or_else(|| AlgebraError::Incompatible(format!("arrow {f} has no image"))))
            .collect::<Result<_>>()?;
        let sizes = objs.iter().map(|&o| self.sizes[o]).collect();
        Presheaf::new(along, sizes, arrows.iter().map(|&f| self.act[f].clone()).collect())
    }

    /// Adds a copy of `x` at object `obj`; breaks injectivity of every
    /// Segal map out of `obj`. Stays functorial only when no arrow out of
    /// `obj` has a retraction, e.g. at the top dimension.
    pub fn with_duplicate(&self, obj: usize, x: usize) -> Self {
        let new = self.sizes[obj];
        let mut out = self.clone();
        out.sizes[obj] += 1;
        for (f, a) in self.index.arrows().iter().enumerate() {
            if a.tgt == obj {
                let v = if f == self.index.identity(obj) { new } else { self.act[f][x] };
                out.act[f].push(v);
            }
        }
        out
    }

    /// The map `X(a) → ∏ X(src αᵢ)` along `arrows`, checked for bijectivity
    /// against the product of the factor sizes.
    fn product_map_bijective(&self, obj: usize, arrows: &[usize]) -> std::result::Result<(), String> {
        let expected: u128 = arrows.iter().map(|&f| self.sizes[self.index.arrow(f).src] as u128).product();
        if expected != self.sizes[obj] as u128 {
            return Err(format!("{:?}: carrier has {} elements, product of factors has {expected}", self.index.object(obj), self.sizes[obj]));
        }
        let mut seen = HashSet::new();
        for x in 0..self.sizes[obj] {
            let tuple: Vec<usize> = arrows.iter().map(|&f| self.act[f][x]).collect();
            if !seen.insert(tuple.clone()) {
                return Err(format!("{:?}: two elements share the factors {tuple:?}", self.index.object(obj)));
            }
        }
        Ok(())
    }
}

impl<'c, O: Clone + Eq + Hash + Ord + Debug> Presheaf<'c, O> {
    /// Extends tables given on some arrows to every arrow by composing;
    /// two routes to the same arrow must agree.
    pub fn from_generators(index: &'c TruncatedCategory<O>, sizes: Vec<usize>, given: Vec<(usize, Vec<usize>)>) -> Result<Self> {
        let mut act: Vec<Option<Vec<usize>>> = vec![None; index.size()];
        for a in 0..index.objects().len() {
            act[index.identity(a)] = Some((0..sizes[a]).collect());
        }
        for (f, table) in given {
            if let Some(old) = &act[f] {
                if *old != table {
                    return Err(AlgebraError::Incompatible(format!("two tables for arrow {f}")));
                }
            }
            act[f] = Some(table);
        }
        let mut frontier: Vec<usize> = (0..index.size()).filter(|&f| act[f].is_some()).collect();
        while let Some(f) = frontier.pop() {
            // pair f with every known arrow on either side
            let partners: Vec<usize> = (0..index.size()).filter(|&g| act[g].is_some()).collect();
            for g in partners {
                for (first, second) in [(f, g), (g, f)] {
                    let Some(h) = index.compose(first, second) else { continue };
                    let (t1, t2) = (act[first].as_ref().expect("known"), act[second].as_ref().expect("known"));
                    let table: Vec<usize> = t2.iter().map(|&y| t1[y]).collect();
                    match &act[h] {
                        Some(old) if *old != table => {
                            return Err(AlgebraError::Incompatible(format!("arrow {h} gets two different tables by composition")));
                        }
                        Some(_) => {}
                        None => {
                            act[h] = Some(table);
                            frontier.push(h);
                        }
                    }
                }
            }
        }
        let act = act
            .into_iter()
            .enumerate()
            .map(|(f, t)| t.ok_or_else(|| AlgebraError::Incompatible(format!("arrow {f} is not a composite of the given maps"))))
            .collect::<Result<_>>()?;
        Presheaf::new(index, sizes, act)
    }
}

/// A presheaf on `Δⁿ` written out by hand. Maps not listed are composites
/// of listed ones; identities are implicit.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PresheafSpec {
    pub arity: usize,
    pub truncation: usize,
    pub carriers: Vec<CarrierSpec>,
    pub maps: Vec<MapSpec>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CarrierSpec {
    pub object: Vec<usize>,
    pub elements: Vec<String>,
}

/// `values[k]` is the k-th coordinate map; `table[i]` is the image of the
/// i-th element of the target carrier.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MapSpec {
    pub target: Vec<usize>,
    pub values: Vec<Vec<usize>>,
    pub table: Vec<String>,
}

impl PresheafSpec {
    pub fn index(&self) -> Result<TruncatedCategory<DeltaNObject>> {
        delta_n_index(self.arity, self.truncation)
    }

    pub fn build<'c>(&self, index: &'c TruncatedCategory<DeltaNObject>) -> Result<Presheaf<'c, DeltaNObject>> {
        let mut names: Vec<Option<&[String]>> = vec![None; index.objects().len()];
        for c in &self.carriers {
            let o = index.find(&DeltaNObject(c.object.clone())).ok_or_else(|| AlgebraError::Shape(format!("no object {:?} at this truncation", c.object)))?;
            if c.elements.iter().collect::<HashSet<_>>().len() != c.elements.len() {
                return Err(AlgebraError::Shape(format!("carrier at {:?} repeats an element", c.object)));
            }
            names[o] = Some(&c.elements);
        }
        let names: Vec<&[String]> = names
            .into_iter()
            .enumerate()
            .map(|(o, n)| n.ok_or_else(|| AlgebraError::Shape(format!("no carrier for {:?}", index.object(o)))))
            .collect::<Result<_>>()?;
        let lookup: Vec<HashMap<&str, usize>> = names.iter().map(|ns| ns.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect()).collect();
        let mut given = Vec::new();
        for m in &self.maps {
            let comps = m
                .values
                .iter()
                .zip(&m.target)
                .map(|(v, &t)| DeltaMorphism::new(v.len().saturating_sub(1), t, v.clone()))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            let map = DeltaNMorphism::new(comps)?;
            let src = DeltaNObject(m.values.iter().map(|v| v.len() - 1).collect());
            let (s, t) = (index.find(&src), index.find(&DeltaNObject(m.target.clone())));
            let f = s.zip(t).and_then(|(s, t)| index.find_arrow(s, t, &map)).ok_or_else(|| AlgebraError::Shape(format!("map {:?} is not in the index", m.values)))?;
            let a = index.arrow(f);
            if m.table.len() != names[a.tgt].len() {
                return Err(AlgebraError::Shape(format!("table for {:?} has {} entries, carrier has {}", m.values, m.table.len(), names[a.tgt].len())));
            }
            let table = m
                .table
                .iter()
                .map(|e| lookup[a.src].get(e.as_str()).copied().ok_or_else(|| AlgebraError::Shape(format!("unknown element {e} at {src:?}"))))
                .collect::<Result<_>>()?;
            given.push((f, table));
        }
        Presheaf::from_generators(index, names.iter().map(|n| n.len()).collect(), given)
    }
}

/// Δ truncated at `d`.
pub fn delta_index(d: usize) -> Result<TruncatedCategory<DeltaNObject>> {
    Ok(ncat_combinat::category::delta_n(1, d, Budget::default())?)
}

/// Δⁿ truncated at `d` in every coordinate.
pub fn delta_n_index(arity: usize, d: usize) -> Result<TruncatedCategory<DeltaNObject>> {
    Ok(ncat_combinat::category::delta_n(arity, d, Budget::default())?)
}

fn find_arrow<O: Clone + Eq + Hash + Ord + Debug>(idx: &TruncatedCategory<O>, src: &O, tgt: usize, map: &DeltaNMorphism) -> Option<usize> {
    idx.find_arrow(idx.find(src)?, tgt, map)
}

/// PASS iff functorial and `X_n → X_1ⁿ` along `ρ₁,…,ρ_n` is a bijection for
/// every `n ≤ D`, `n = 0` included.
pub fn check_segal_monoid(x: &Presheaf<'_, DeltaNObject>) -> Tally {
    let mut t = x.audit_functoriality();
    let idx = x.index();
    for (a, obj) in idx.objects().iter().enumerate() {
        let n = obj.0[0];
        let arrows: Option<Vec<usize>> = (1..=n).map(|i| find_arrow(idx, &DeltaNObject(vec![1]), a, &DeltaNMorphism::single(DeltaMorphism::rho(i, n)))).collect();
        match arrows {
            Some(arrows) => match x.product_map_bijective(a, &arrows) {
                Ok(()) => t.pass(),
                Err(w) => t.fail(|| w),
            },
            None => t.fail(|| format!("index lacks the maps ρᵢ into [{n}]")),
        }
    }
    t
}

/// Segal condition on a slice `Δⁿ/I`: at every object `φ`, the map to the
/// product over the levelwise inert cell maps `α` of `X(φ∘α)`.
pub fn check_segal_slice(x: &Presheaf<'_, SliceObject>) -> Tally {
    let mut t = Tally::new();
    let idx = x.index();
    for (a, obj) in idx.objects().iter().enumerate() {
        let arrows: Option<Vec<usize>> = inert_cell_maps(&obj.shape())
            .into_iter()
            .map(|alpha| {
                let src = SliceObject { target: obj.target.clone(), map: alpha.then(&obj.map).ok()? };
                find_arrow(idx, &src, a, &alpha)
            })
            .collect();
        match arrows {
            Some(arrows) => match x.product_map_bijective(a, &arrows) {
                Ok(()) => t.pass(),
                Err(w) => t.fail(|| w),
            },
            None => t.fail(|| format!("{obj}: a cell restriction is missing from the index")),
        }
    }
    t
}

/// Objects and arrows of `Cellⁿ/I` together with the index arrows they
/// name.
struct CellDiagram {
    /// index object of each cell, and the index arrow `C → I`
    nodes: Vec<(usize, usize)>,
    /// `(c, c', index arrow C → C')` with `α' ∘ u = α`
    edges: Vec<(usize, usize, usize)>,
}

fn cell_diagram(idx: &TruncatedCategory<DeltaNObject>, obj: usize) -> Option<CellDiagram> {
    let target = idx.object(obj).clone();
    let over = cell_maps_over(&target);
    let mut nodes = Vec::new();
    for (cell, alpha) in &over {
        let c = idx.find(&cell.object())?;
        nodes.push((c, idx.find_arrow(c, obj, alpha)?));
    }
    let mut edges = Vec::new();
    for (i, (ci, ai)) in over.iter().enumerate() {
        for (j, (cj, aj)) in over.iter().enumerate() {
            if i == j {
                continue;
            }
            for u in enumerate_n_morphisms(&ci.object(), &cj.object(), Budget::default()).ok()? {
                if u.then(aj).ok().as_ref() == Some(ai) {
                    edges.push((i, j, idx.find_arrow(nodes[i].0, nodes[j].0, &u)?));
                }
            }
        }
    }
    Some(CellDiagram { nodes, edges })
}

/// The limit of `X` over `Cellⁿ/I`, computed by assigning the maximal
/// cells one at a time in `order` and propagating to their faces.
fn cell_limit(x: &Presheaf<'_, DeltaNObject>, diag: &CellDiagram, order: &[usize]) -> HashSet<Vec<usize>> {
    let n = diag.nodes.len();
    let faces_of: Vec<Vec<(usize, usize)>> = (0..n).map(|j| diag.edges.iter().filter(|e| e.1 == j).map(|e| (e.0, e.2)).collect()).collect();
    let mut out = HashSet::new();
    let mut assign: Vec<Option<usize>> = vec![None; n];
    fn go(
        x: &Presheaf<'_, DeltaNObject>,
        diag: &CellDiagram,
        faces_of: &[Vec<(usize, usize)>],
        order: &[usize],
        k: usize,
        assign: &mut Vec<Option<usize>>,
        out: &mut HashSet<Vec<usize>>,
    ) {
        if k == order.len() {
            // every edge must commute once everything is assigned
            if diag.edges.iter().all(|&(c, cp, u)| matches!((assign[c], assign[cp]), (Some(a), Some(b)) if x.apply(u, b) == a)) {
                out.insert(assign.iter().map(|v| v.expect("assigned")).collect());
            }
            return;
        }
        let top = order[k];
        for v in 0..x.size_at(diag.nodes[top].0) {
            let saved = assign.clone();
            let mut ok = assign[top].is_none_or(|w| w == v);
            assign[top] = Some(v);
            for &(c, u) in &faces_of[top] {
                if !ok {
                    break;
                }
                let w = x.apply(u, v);
                match assign[c] {
                    Some(old) if old != w => ok = false,
                    _ => assign[c] = Some(w),
                }
            }
            if ok {
                go(x, diag, faces_of, order, k + 1, assign, out);
            }
            *assign = saved;
        }
    }
    go(x, diag, &faces_of, order, 0, &mut assign, &mut out);
    out
}

fn maximal_cells(diag: &CellDiagram) -> Vec<usize> {
    (0..diag.nodes.len()).filter(|&c| !diag.edges.iter().any(|e| e.0 == c)).collect()
}

/// Comparison `X_I → lim_{Cellⁿ/I} X` checked for bijectivity at every
/// object, with the maximal cells taken in `order_of` order.
pub fn check_uple_with(x: &Presheaf<'_, DeltaNObject>, order_of: impl Fn(Vec<usize>) -> Vec<usize>) -> Tally {
    let mut t = Tally::new();
    let idx = x.index();
    for a in 0..idx.objects().len() {
        let Some(diag) = cell_diagram(idx, a) else {
            t.fail(|| format!("{:?}: the cells over it are not all in the index", idx.object(a)));
            continue;
        };
        let lim = cell_limit(x, &diag, &order_of(maximal_cells(&diag)));
        let image: HashSet<Vec<usize>> = (0..x.size_at(a)).map(|v| diag.nodes.iter().map(|&(_, f)| x.apply(f, v)).collect()).collect();
        let ok = image.len() == x.size_at(a) && image == lim;
        t.record(ok, || format!("{:?}: {} elements, {} distinct images, limit of size {}", idx.object(a), x.size_at(a), image.len(), lim.len()));
    }
    t
}

pub fn check_uple(x: &Presheaf<'_, DeltaNObject>) -> Tally {
    check_uple_with(x, |v| v)
}

/// All structure maps bijective, i.e. the presheaf is constant up to
/// isomorphism on a connected index.
fn is_constant(x: &Presheaf<'_, DeltaNObject>) -> std::result::Result<(), String> {
    for (f, a) in x.index().arrows().iter().enumerate() {
        let img: HashSet<usize> = x.table(f).iter().copied().collect();
        if x.size_at(a.src) != x.size_at(a.tgt) || img.len() != x.size_at(a.src) {
            return Err(format!("structure map {:?} → {:?} is not a bijection", x.index().object(a.src), x.index().object(a.tgt)));
        }
    }
    Ok(())
}

/// The `(n−1)`-uple object `X([k], −)`.
pub fn slice_at<'d>(x: &Presheaf<'_, DeltaNObject>, k: usize, lower: &'d TruncatedCategory<DeltaNObject>) -> Result<Presheaf<'d, DeltaNObject>> {
    let idx = x.index();
    let lift_obj = |o: &DeltaNObject| DeltaNObject(std::iter::once(k).chain(o.0.iter().copied()).collect());
    x.restrict(
        lower,
        |a| idx.find(&lift_obj(lower.object(a))),
        |f| {
            let ar = lower.arrow(f);
            let map = DeltaNMorphism(std::iter::once(DeltaMorphism::identity(k)).chain(ar.map.components().iter().cloned()).collect());
            idx.find_arrow(idx.find(&lift_obj(lower.object(ar.src)))?, idx.find(&lift_obj(lower.object(ar.tgt)))?, &map)
        },
    )
}

/// n-uple check, then constancy of `X([0], −)` and the `(n−1)`-fold
/// condition on every `X([k], −)`.
pub fn check_nfold_segal(x: &Presheaf<'_, DeltaNObject>) -> Result<Tally> {
    let idx = x.index();
    let arity = idx.object(0).arity();
    let mut t = check_uple(x);
    if arity == 1 || !t.ok() {
        return Ok(t);
    }
    let d = idx.bound();
    let lower = delta_n_index(arity - 1, d)?;
    for k in 0..=d {
        let s = slice_at(x, k, &lower)?;
        if k == 0 {
            match is_constant(&s) {
                Ok(()) => t.pass(),
                Err(w) => t.fail(|| format!("X([0], −): {w}")),
            }
        }
        let sub = check_nfold_segal(&s)?;
        if !sub.ok() {
            t.fail(|| format!("X([{k}], −) is not {}-fold Segal: {}", arity - 1, sub.witnesses.first().cloned().unwrap_or_default()));
        } else {
            t.pass();
        }
    }
    Ok(t)
}

/// A finite category: arrow `f` goes `src[f] → tgt[f]`, `comp[(f, g)]` is
/// `g ∘ f`.
#[derive(Clone, Debug)]
pub struct FiniteCategory {
    objects: usize,
    src: Vec<usize>,
    tgt: Vec<usize>,
    ident: Vec<usize>,
    comp: HashMap<(usize, usize), usize>,
    out: Vec<Vec<usize>>,
}

impl FiniteCategory {
    pub fn new(objects: usize, src: Vec<usize>, tgt: Vec<usize>, ident: Vec<usize>, comp: HashMap<(usize, usize), usize>) -> Result<Self> {
        let mut out = vec![Vec::new(); objects];
        for (f, &s) in src.iter().enumerate() {
            out[s].push(f);
        }
        let c = FiniteCategory { objects, src, tgt, ident, comp, out };
        c.check()?;
        Ok(c)
    }

    fn check(&self) -> Result<()> {
        let err = |w: String| Err(AlgebraError::Axiom(w));
        for (o, &i) in self.ident.iter().enumerate() {
            if self.src[i] != o || self.tgt[i] != o {
                return err(format!("identity of {o} has the wrong ends"));
            }
        }
        for f in 0..self.src.len() {
            if self.then(self.ident[self.src[f]], f) != f || self.then(f, self.ident[self.tgt[f]]) != f {
                return err(format!("unit law at arrow {f}"));
            }
            for &g in &self.out[self.tgt[f]] {
                let gf = self.comp.get(&(f, g)).copied();
                match gf {
                    Some(h) if self.src[h] == self.src[f] && self.tgt[h] == self.tgt[g] => {}
                    _ => return err(format!("composite of {f} and {g} missing or misplaced")),
                }
                for &h in &self.out[self.tgt[g]] {
                    if self.then(self.then(f, g), h) != self.then(f, self.then(g, h)) {
                        return err(format!("associativity at ({f}, {g}, {h})"));
                    }
                }
            }
        }
        Ok(())
    }

    /// `g ∘ f`.
    pub fn then(&self, f: usize, g: usize) -> usize {
        self.comp[&(f, g)]
    }

    pub fn arrows(&self) -> usize {
        self.src.len()
    }

    pub fn objects(&self) -> usize {
        self.objects
    }

    pub fn hom(&self, a: usize, b: usize) -> impl Iterator<Item = usize> + '_ {
        self.out[a].iter().copied().filter(move |&f| self.tgt[f] == b)
    }

    /// One object; arrows are the elements, `g ∘ f = f·g`.
    pub fn from_monoid(m: &FiniteMonoid) -> Self {
        let n = m.size();
        let comp = (0..n).flat_map(|f| (0..n).map(move |g| ((f, g), m.mul(f, g)))).collect();
        FiniteCategory::new(1, vec![0; n], vec![0; n], vec![m.unit()], comp).expect("monoid category")
    }

    /// Arrows are pairs, composed componentwise.
    pub fn product(c: &FiniteCategory, d: &FiniteCategory) -> Self {
        let (m, n) = (c.arrows(), d.arrows());
        let pair = |f: usize, g: usize| f * n + g;
        let src = (0..m * n).map(|p| c.src[p / n] * d.objects + d.src[p % n]).collect();
        let tgt = (0..m * n).map(|p| c.tgt[p / n] * d.objects + d.tgt[p % n]).collect();
        let ident = (0..c.objects * d.objects).map(|o| pair(c.ident[o / d.objects], d.ident[o % d.objects])).collect();
        let comp = c
            .comp
            .iter()
            .flat_map(|(&(f1, g1), &h1)| d.comp.iter().map(move |(&(f2, g2), &h2)| ((pair(f1, f2), pair(g1, g2)), pair(h1, h2))))
            .collect();
        FiniteCategory::new(c.objects * d.objects, src, tgt, ident, comp).expect("product category")
    }

    /// A totally ordered set `0 < 1 < ⋯ < n−1` as a category.
    pub fn ordinal(n: usize) -> Self {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
        let at: HashMap<(usize, usize), usize> = pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();
        let mut comp = HashMap::new();
        for &(i, j) in &pairs {
            for l in j..n {
                comp.insert((at[&(i, j)], at[&(j, l)]), at[&(i, l)]);
            }
        }
        FiniteCategory::new(n, pairs.iter().map(|p| p.0).collect(), pairs.iter().map(|p| p.1).collect(), (0..n).map(|i| at[&(i, i)]).collect(), comp)
            .expect("ordinal")
    }
}

/// Chains `x₀ → ⋯ → x_m` encoded as `[x₀, f₁, …, f_m]`, enumerated in
/// lexicographic order; `labels` pins the vertices when given.
fn chains(c: &FiniteCategory, m: usize, labels: Option<&[usize]>) -> Vec<Vec<usize>> {
    let starts: Vec<usize> = match labels {
        Some(l) => vec![l[0]],
        None => (0..c.objects).collect(),
    };
    let mut out = Vec::new();
    let mut stack: Vec<Vec<usize>> = starts.into_iter().rev().map(|x| vec![x]).collect();
    while let Some(ch) = stack.pop() {
        if ch.len() == m + 1 {
            out.push(ch);
            continue;
        }
        let end = if ch.len() == 1 { ch[0] } else { c.tgt[*ch.last().expect("nonempty")] };
        let next: Vec<usize> = match labels {
            Some(l) => c.hom(end, l[ch.len()]).collect(),
            None => c.out[end].clone(),
        };
        for f in next.into_iter().rev() {
            let mut e = ch.clone();
            e.push(f);
            stack.push(e);
        }
    }
    out
}

/// `α*` of a chain: vertices `x_{α(k)}`, arrows the composites over
/// `(α(k−1), α(k)]`, identities on empty intervals.
fn pull_chain(c: &FiniteCategory, chain: &[usize], alpha: &[usize]) -> Vec<usize> {
    let vertex = |j: usize| if j == 0 { chain[0] } else { c.tgt[chain[j]] };
    let mut out = vec![vertex(alpha[0])];
    for k in 1..alpha.len() {
        let mut f = c.ident[vertex(alpha[k - 1])];
        for &step in &chain[alpha[k - 1] + 1..=alpha[k]] {
            f = c.then(f, step);
        }
        out.push(f);
    }
    out
}

fn chain_presheaf<'c, O: Clone + Eq + Hash + Ord + Debug>(
    c: &FiniteCategory,
    idx: &'c TruncatedCategory<O>,
    labels: impl Fn(&O) -> Option<Vec<usize>>,
) -> Result<Presheaf<'c, O>> {
    let per: Vec<Vec<Vec<usize>>> = idx.objects().iter().map(|o| chains(c, idx.shape(idx.find(o).expect("own object")).0[0], labels(o).as_deref())).collect();
    let lookup: Vec<HashMap<&Vec<usize>, usize>> = per.iter().map(|v| v.iter().enumerate().map(|(i, ch)| (ch, i)).collect()).collect();
    let sizes = per.iter().map(Vec::len).collect();
    Presheaf::from_fn(idx, sizes, |f, x| {
        let a = idx.arrow(f);
        let pulled = pull_chain(c, &per[a.tgt][x], a.map.components()[0].values());
        lookup[a.src][&pulled]
    })
}

/// The nerve of a finite category on Δ truncated.
pub fn category_nerve<'c>(c: &FiniteCategory, idx: &'c TruncatedCategory<DeltaNObject>) -> Result<Presheaf<'c, DeltaNObject>> {
    chain_presheaf(c, idx, |_| None)
}

/// The nerve of a category with objects `0..=n` over `Δ/[n]`: the value
/// at `φ` is the chains whose vertices are `φ(0), …, φ(m)`.
pub fn linear_nerve<'c>(c: &FiniteCategory, idx: &'c TruncatedCategory<SliceObject>) -> Result<Presheaf<'c, SliceObject>> {
    chain_presheaf(c, idx, |o| Some(o.sequence().to_vec()))
}

/// Componentwise product of presheaves on Δ, as a presheaf on Δⁿ.
pub fn external_product<'c>(factors: &[&Presheaf<'_, DeltaNObject>], idx: &'c TruncatedCategory<DeltaNObject>) -> Result<Presheaf<'c, DeltaNObject>> {
    let sub = |p: &Presheaf<'_, DeltaNObject>, n: usize| p.index().find(&DeltaNObject(vec![n]));
    let mut sizes = Vec::new();
    for o in idx.objects() {
        let mut s = 1;
        for (p, &n) in factors.iter().zip(&o.0) {
            s *= p.size_at(sub(p, n).ok_or_else(|| AlgebraError::Shape(format!("factor lacks [{n}]")))?);
        }
        sizes.push(s);
    }
    let arrow_in = |p: &Presheaf<'_, DeltaNObject>, m: &DeltaMorphism| -> usize {
        let (s, t) = (sub(p, m.src().n()).expect("src"), sub(p, m.tgt().n()).expect("tgt"));
        p.index().find_arrow(s, t, &DeltaNMorphism::single(m.clone())).expect("all maps present")
    };
    Presheaf::from_fn(idx, sizes, |f, x| {
        let a = idx.arrow(f);
        let tgt = &idx.object(a.tgt).0;
        // mixed radix, last coordinate fastest
        let mut digits = vec![0; factors.len()];
        let mut rest = x;
        for (k, p) in factors.iter().enumerate().rev() {
            let base = p.size_at(sub(p, tgt[k]).expect("object"));
            digits[k] = rest % base;
            rest /= base;
        }
        let src = &idx.object(a.src).0;
        factors.iter().enumerate().fold(0, |acc, (k, p)| {
            let base = p.size_at(sub(p, src[k]).expect("object"));
            acc * base + p.apply(arrow_in(p, &a.map.components()[k]), digits[k])
        })
    })
}

/// Every structure map the identity.
pub fn constant_presheaf<O: Clone + Eq + Hash + Ord + Debug>(idx: &TruncatedCategory<O>, size: usize) -> Result<Presheaf<'_, O>> {
    Presheaf::from_fn(idx, vec![size; idx.objects().len()], |_, x| x)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteMonoid {
    table: Vec<Vec<usize>>,
    unit: usize,
}

impl FiniteMonoid {
    pub fn new(table: Vec<Vec<usize>>, unit: usize) -> Result<Self> {
        let n = table.len();
        if table.iter().any(|r| r.len() != n || r.iter().any(|&v| v >= n)) || unit >= n {
            return Err(AlgebraError::Shape("multiplication table is not square over its carrier".into()));
        }
        let m = FiniteMonoid { table, unit };
        for a in 0..n {
            if m.mul(unit, a) != a || m.mul(a, unit) != a {
                return Err(AlgebraError::Axiom(format!("unit law at {a}")));
            }
            for b in 0..n {
                for c in 0..n {
                    if m.mul(m.mul(a, b), c) != m.mul(a, m.mul(b, c)) {
                        return Err(AlgebraError::Axiom(format!("associativity at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn cyclic(n: usize) -> Self {
        FiniteMonoid::new((0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect(), 0).expect("cyclic group")
    }

    /// Permutations of three letters in lexicographic order, `a·b = a ∘ b`.
    pub fn symmetric3() -> Self {
        let perms: Vec<[usize; 3]> = vec![[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
        let pos = |p: [usize; 3]| perms.iter().position(|&q| q == p).expect("permutation");
        let table = perms.iter().map(|a| perms.iter().map(|b| pos([a[b[0]], a[b[1]], a[b[2]]])).collect()).collect();
        FiniteMonoid::new(table, 0).expect("S3")
    }

    pub fn size(&self) -> usize {
        self.table.len()
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }
}

/// Every monoid on `{0, …, n−1}` with unit `0`, in lexicographic order of
/// the free part of the table.
pub fn monoids_of_order(n: usize) -> Vec<FiniteMonoid> {
    if n == 0 {
        return Vec::new();
    }
    let free = (n - 1) * (n - 1);
    let total = n.pow(free as u32);
    (0..total)
        .filter_map(|code| {
            let mut rest = code;
            let mut table: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| if a == 0 { b } else if b == 0 { a } else { 0 }).collect()).collect();
            for cell in table.iter_mut().skip(1).flat_map(|row| row.iter_mut().skip(1)) {
                *cell = rest % n;
                rest /= n;
            }
            FiniteMonoid::new(table, 0).ok()
        })
        .collect()
}

/// `A_n = Mⁿ`, tuples in base `|M|` with the first entry most significant.
pub fn monoid_to_presheaf<'c>(m: &FiniteMonoid, idx: &'c TruncatedCategory<DeltaNObject>) -> Result<Presheaf<'c, DeltaNObject>> {
    let s = m.size();
    let sizes = idx.objects().iter().map(|o| s.pow(o.0[0] as u32)).collect();
    Presheaf::from_fn(idx, sizes, |f, x| {
        let a = idx.arrow(f);
        let alpha = a.map.components()[0].values();
        let n = idx.object(a.tgt).0[0];
        let mut g = vec![0; n];
        let mut rest = x;
        for k in (0..n).rev() {
            g[k] = rest % s;
            rest /= s;
        }
        alpha.windows(2).fold(0, |acc, w| acc * s + (w[0]..w[1]).fold(m.unit(), |p, j| m.mul(p, g[j])))
    })
}

/// Multiplication off `d₁` through the inverse of the Segal map at `[2]`,
/// unit off `s₀`.
pub fn extract_monoid(x: &Presheaf<'_, DeltaNObject>) -> Result<FiniteMonoid> {
    let t = check_segal_monoid(x);
    if !t.ok() {
        return Err(AlgebraError::NotSegal(t.witnesses.first().cloned().unwrap_or_default()));
    }
    let idx = x.index();
    let obj = |n: usize| idx.find(&DeltaNObject(vec![n])).ok_or_else(|| AlgebraError::Shape(format!("index lacks [{n}]")));
    let (o0, o1, o2) = (obj(0)?, obj(1)?, obj(2)?);
    let arrow = |s: usize, t: usize, m: DeltaMorphism| idx.find_arrow(s, t, &DeltaNMorphism::single(m)).ok_or_else(|| AlgebraError::Shape("missing structure map".into()));
    let (r1, r2) = (arrow(o1, o2, DeltaMorphism::rho(1, 2))?, arrow(o1, o2, DeltaMorphism::rho(2, 2))?);
    let d1 = arrow(o1, o2, DeltaMorphism::face(1, 2))?;
    let s0 = arrow(o1, o0, DeltaMorphism::degeneracy(0, 0))?;
    let inverse: HashMap<(usize, usize), usize> = (0..x.size_at(o2)).map(|v| ((x.apply(r1, v), x.apply(r2, v)), v)).collect();
    let n = x.size_at(o1);
    let table = (0..n).map(|a| (0..n).map(|b| x.apply(d1, inverse[&(a, b)])).collect()).collect();
    FiniteMonoid::new(table, x.apply(s0, 0))
}

/// A presheaf on Δ truncated from face and degeneracy tables; every other
/// map acts through its surjection–injection factorization.
pub fn simplicial_presheaf<'c>(
    idx: &'c TruncatedCategory<DeltaNObject>,
    sizes: &[usize],
    faces: &[Vec<Vec<usize>>],
    degeneracies: &[Vec<Vec<usize>>],
) -> Result<Presheaf<'c, DeltaNObject>> {
    let d = idx.bound();
    if sizes.len() != d + 1 {
        return Err(AlgebraError::Shape(format!("{} carriers for truncation {d}", sizes.len())));
    }
    let per_obj: Vec<usize> = idx.objects().iter().map(|o| sizes[o.0[0]]).collect();
    Presheaf::from_fn(idx, per_obj, |f, x| {
        let a = idx.arrow(f);
        let phi = a.map.components()[0].values();
        let n = idx.object(a.tgt).0[0];
        // faces for the missed values, highest first
        let mut v = x;
        let mut level = n;
        for i in (0..=n).rev() {
            if !phi.contains(&i) {
                v = faces[level][i][v];
                level -= 1;
            }
        }
        // then degeneracies for the repeats, lowest first
        for j in 0..phi.len().saturating_sub(1) {
            if phi[j] == phi[j + 1] {
                v = degeneracies[level][j][v];
                level += 1;
            }
        }
        v
    })
}

/// Replaces one entry of a non-identity table by a different value.
pub fn corrupt<'c, O: Clone + Eq + Hash + Ord + Debug>(x: &Presheaf<'c, O>, rng: &mut impl Rng) -> Option<(Presheaf<'c, O>, String)> {
    let idx = x.index();
    let candidates: Vec<usize> = (0..idx.size()).filter(|&f| x.size_at(idx.arrow(f).src) > 1 && x.size_at(idx.arrow(f).tgt) > 0).collect();
    let &f = candidates.get(rng.gen_range(0..candidates.len().max(1)))?;
    let a = idx.arrow(f);
    let pos = rng.gen_range(0..x.size_at(a.tgt));
    let old = x.act[f][pos];
    let new = (old + rng.gen_range(1..x.size_at(a.src))) % x.size_at(a.src);
    let mut y = x.clone();
    y.act[f][pos] = new;
    Some((y, format!("arrow {f} ({:?} → {:?}) entry {pos}: {old} → {new}", idx.object(a.src), idx.object(a.tgt))))
}

/// Monoids `A, B` acting on a set from the left and right.
#[derive(Clone, Debug)]
pub struct Biaction {
    pub left: FiniteMonoid,
    pub right: FiniteMonoid,
    pub size: usize,
    /// `lact[a][m]`
    pub lact: Vec<Vec<usize>>,
    /// `ract[m][b]`
    pub ract: Vec<Vec<usize>>,
}

impl Biaction {
    pub fn regular(m: &FiniteMonoid) -> Self {
        Biaction { left: m.clone(), right: m.clone(), size: m.size(), lact: m.table().to_vec(), ract: m.table().to_vec() }
    }
}

/// Objects `0..=n`, `hom(i,i) = A_i`, `hom(i,j)` given for `i < j`.
pub struct LinearData {
    pub diag: Vec<FiniteMonoid>,
    pub sizes: BTreeMap<(usize, usize), usize>,
    /// product of `x ∈ hom(i,j)` then `y ∈ hom(j,k)`, all `i ≤ j ≤ k`
    pub mult: Box<dyn Fn(usize, usize, usize, usize, usize) -> usize>,
}

impl LinearData {
    pub fn category(&self) -> Result<FiniteCategory> {
        let n = self.diag.len();
        let mut blocks: BTreeMap<(usize, usize), usize> = self.diag.iter().enumerate().map(|(i, m)| ((i, i), m.size())).collect();
        blocks.extend(self.sizes.iter().map(|(&k, &v)| (k, v)));
        let mut offset = BTreeMap::new();
        let (mut src, mut tgt) = (Vec::new(), Vec::new());
        for (&(i, j), &s) in &blocks {
            offset.insert((i, j), src.len());
            src.extend(std::iter::repeat_n(i, s));
            tgt.extend(std::iter::repeat_n(j, s));
        }
        let locate = |f: usize| -> (usize, usize, usize) {
            let (&(i, j), &o) = offset.iter().rfind(|(_, &o)| o <= f).expect("block");
            (i, j, f - o)
        };
        let mut comp = HashMap::new();
        for f in 0..src.len() {
            let (i, j, x) = locate(f);
            for g in 0..src.len() {
                let (j2, k, y) = locate(g);
                if j2 == j {
                    comp.insert((f, g), offset[&(i, k)] + (self.mult)(i, j, k, x, y));
                }
            }
        }
        let ident = (0..n).map(|i| offset[&(i, i)] + self.diag[i].unit()).collect();
        FiniteCategory::new(n, src, tgt, ident, comp)
    }
}

/// The linear category of a biaction over `Δ/[1]`.
pub fn biaction_data(b: &Biaction) -> LinearData {
    let (l, r) = (b.left.clone(), b.right.clone());
    let (la, ra) = (b.lact.clone(), b.ract.clone());
    LinearData {
        diag: vec![b.left.clone(), b.right.clone()],
        sizes: BTreeMap::from([((0, 1), b.size)]),
        mult: Box::new(move |i, j, k, x, y| match (i, j, k) {
            (0, 0, 0) => l.mul(x, y),
            (1, 1, 1) => r.mul(x, y),
            // x ∈ A then y ∈ M: the arrow y ∘ x is x·y
            (0, 0, 1) => la[x][y],
            (0, 1, 1) => ra[x][y],
            _ => unreachable!("no arrows 1 → 0"),
        }),
    }
}

/// `M ×_{A₁} N`: pairs modulo `(m·a, n) ~ (m, a·n)`, by union–find.
pub fn balanced_product(m: &Biaction, n: &Biaction) -> (usize, Vec<Vec<usize>>) {
    let (sm, sn) = (m.size, n.size);
    let mut parent: Vec<usize> = (0..sm * sn).collect();
    fn root(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for x in 0..sm {
        for a in 0..m.right.size() {
            for y in 0..sn {
                let (u, v) = (root(&mut parent, m.ract[x][a] * sn + y), root(&mut parent, x * sn + n.lact[a][y]));
                if u != v {
                    parent[u.max(v)] = u.min(v);
                }
            }
        }
    }
    let mut class = HashMap::new();
    let mut to_class = vec![vec![0; sn]; sm];
    for (x, row) in to_class.iter_mut().enumerate() {
        for (y, cell) in row.iter_mut().enumerate() {
            let r = root(&mut parent, x * sn + y);
            let next = class.len();
            *cell = *class.entry(r).or_insert(next);
        }
    }
    (class.len(), to_class)
}

/// The `Δ/[2]` data with `M(0,2) = M(0,1) ×_{A₁} M(1,2)`.
pub fn set_composite_fill(m01: &Biaction, m12: &Biaction) -> Result<LinearData> {
    if m01.right != m12.left {
        return Err(AlgebraError::MiddleMismatch { left: "right monoid of M(0,1)".into(), right: "left monoid of M(1,2)".into() });
    }
    let (s02, cls) = balanced_product(m01, m12);
    // a representative pair for every class
    let mut rep = vec![(0, 0); s02];
    for (x, row) in cls.iter().enumerate().rev() {
        for (y, &c) in row.iter().enumerate().rev() {
            rep[c] = (x, y);
        }
    }
    let (a, b) = (m01.clone(), m12.clone());
    let (a0, a1, a2) = (m01.left.clone(), m01.right.clone(), m12.right.clone());
    Ok(LinearData {
        diag: vec![a0.clone(), a1.clone(), a2.clone()],
        sizes: BTreeMap::from([((0, 1), m01.size), ((1, 2), m12.size), ((0, 2), s02)]),
        mult: Box::new(move |i, j, k, x, y| match (i, j, k) {
            (0, 0, 0) => a0.mul(x, y),
            (1, 1, 1) => a1.mul(x, y),
            (2, 2, 2) => a2.mul(x, y),
            (0, 0, 1) => a.lact[x][y],
            (0, 1, 1) => a.ract[x][y],
            (1, 1, 2) => b.lact[x][y],
            (1, 2, 2) => b.ract[x][y],
            (0, 1, 2) => cls[x][y],
            (0, 0, 2) => {
                let (p, q) = rep[y];
                cls[a.lact[x][p]][q]
            }
            (0, 2, 2) => {
                let (p, q) = rep[x];
                cls[p][b.ract[q][y]]
            }
            _ => unreachable!("no arrows downward"),
        }),
    })
}

/// Double nerve of the one-object 2-category whose hom category has
/// objects `M` and arrows `M × K` (`K` commutative):
/// `X_{p,q} = M^p × K^{pq}`.
pub fn double_nerve<'c>(m: &FiniteMonoid, k: &FiniteMonoid, idx: &'c TruncatedCategory<DeltaNObject>) -> Result<Presheaf<'c, DeltaNObject>> {
    let (sm, sk) = (m.size(), k.size());
    let size = |p: usize, q: usize| sm.pow(p as u32) * sk.pow((p * q) as u32);
    let sizes = idx.objects().iter().map(|o| size(o.0[0], o.0[1])).collect();
    Presheaf::from_fn(idx, sizes, |f, x| {
        let a = idx.arrow(f);
        let (p, q) = (idx.object(a.tgt).0[0], idx.object(a.tgt).0[1]);
        let (phi, psi) = (a.map.components()[0].values(), a.map.components()[1].values());
        let mut rest = x;
        let mut ks = vec![vec![0; q]; p];
        for row in ks.iter_mut().rev() {
            for v in row.iter_mut().rev() {
                *v = rest % sk;
                rest /= sk;
            }
        }
        let mut ms = vec![0; p];
        for v in ms.iter_mut().rev() {
            *v = rest % sm;
            rest /= sm;
        }
        let new_m: Vec<usize> = phi.windows(2).map(|w| (w[0]..w[1]).fold(m.unit(), |acc, j| m.mul(acc, ms[j]))).collect();
        let new_k: Vec<usize> = phi
            .windows(2)
            .flat_map(|w| {
                let ks = &ks;
                psi.windows(2).map(move |v| (w[0]..w[1]).flat_map(|r| (v[0]..v[1]).map(move |c| ks[r][c])).fold(k.unit(), |acc, z| k.mul(acc, z)))
            })
            .collect();
        let enc = new_m.iter().fold(0, |acc, &v| acc * sm + v);
        new_k.iter().fold(enc, |acc, &v| acc * sk + v)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ncat_combinat::slice::slice_category;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn cyclic_nerve_is_segal() {
        let idx = delta_index(3).unwrap();
        let x = monoid_to_presheaf(&FiniteMonoid::cyclic(2), &idx).unwrap();
        assert!(check_segal_monoid(&x).ok());
        let m = extract_monoid(&x).unwrap();
        assert_eq!(m, FiniteMonoid::cyclic(2));
        // associativity square read off the extracted product
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    assert_eq!(m.mul(m.mul(a, b), c), m.mul(a, m.mul(b, c)));
                }
            }
        }
    }

    #[test]
    fn trivial_monoid_is_a_point() {
        let idx = delta_index(3).unwrap();
        let x = monoid_to_presheaf(&FiniteMonoid::cyclic(1), &idx).unwrap();
        assert!(x.sizes().iter().all(|&s| s == 1));
    }

    #[test]
    fn symmetric_group_roundtrip() {
        let idx = delta_index(3).unwrap();
        let s3 = FiniteMonoid::symmetric3();
        assert_eq!(extract_monoid(&monoid_to_presheaf(&s3, &idx).unwrap()).unwrap(), s3);
    }

    #[test]
    fn monoid_counts() {
        // monoids up to isomorphism: 1, 2, 7, 35
        fn classes(n: usize) -> usize {
            let perms = permutations(n - 1);
            let mut seen = HashSet::new();
            let mut count = 0;
            for m in monoids_of_order(n) {
                if seen.contains(m.table()) {
                    continue;
                }
                count += 1;
                for p in &perms {
                    // relabel the non-unit elements
                    let sigma: Vec<usize> = std::iter::once(0).chain(p.iter().map(|&i| i + 1)).collect();
                    let mut t = vec![vec![0; n]; n];
                    for a in 0..n {
                        for b in 0..n {
                            t[sigma[a]][sigma[b]] = sigma[m.mul(a, b)];
                        }
                    }
                    seen.insert(t);
                }
            }
            count
        }
        fn permutations(k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![Vec::new()];
            }
            permutations(k - 1)
                .into_iter()
                .flat_map(|p| {
                    (0..k).map(move |pos| {
                        let mut q = p.clone();
                        q.insert(pos, k - 1);
                        q
                    })
                })
                .collect()
        }
        assert_eq!((1..=4).map(classes).collect::<Vec<_>>(), [1, 2, 7, 35]);
    }

    #[test]
    fn nerve_formula_matches_faces_and_degeneracies() {
        let idx = delta_index(3).unwrap();
        let m = FiniteMonoid::symmetric3();
        let x = monoid_to_presheaf(&m, &idx).unwrap();
        let obj = |n: usize| idx.find(&DeltaNObject(vec![n])).unwrap();
        let arrow = |s: usize, t: usize, f: DeltaMorphism| idx.find_arrow(obj(s), obj(t), &DeltaNMorphism::single(f)).unwrap();
        let sizes: Vec<usize> = (0..=3).map(|n| x.size_at(obj(n))).collect();
        let faces: Vec<Vec<Vec<usize>>> = (0..=3).map(|n| if n == 0 { Vec::new() } else { (0..=n).map(|i| x.table(arrow(n - 1, n, DeltaMorphism::face(i, n))).to_vec()).collect() }).collect();
        let degs: Vec<Vec<Vec<usize>>> = (0..=3).map(|n| if n == 3 { Vec::new() } else { (0..=n).map(|j| x.table(arrow(n + 1, n, DeltaMorphism::degeneracy(j, n))).to_vec()).collect() }).collect();
        let y = simplicial_presheaf(&idx, &sizes, &faces, &degs).unwrap();
        for f in 0..idx.size() {
            assert_eq!(x.table(f), y.table(f));
        }
        // and the chain nerve of the one-object category
        let z = category_nerve(&FiniteCategory::from_monoid(&m), &idx).unwrap();
        for f in 0..idx.size() {
            assert_eq!(x.table(f), z.table(f));
        }
    }

    #[test]
    fn wrong_cardinality_fails() {
        let idx = delta_index(2).unwrap();
        let x = monoid_to_presheaf(&FiniteMonoid::cyclic(2), &idx).unwrap();
        let y = x.with_duplicate(idx.find(&DeltaNObject(vec![2])).unwrap(), 3);
        assert!(y.audit_functoriality().ok());
        assert_eq!(y.size_at(2), 5);
        assert!(!check_segal_monoid(&y).ok());
        assert!(extract_monoid(&y).is_err());
    }

    /// `X₀ = *`, `X₁ = {u, g}`, `X₂` the three degenerate triangles and one
    /// more `σ` with `d₀σ = g`, `d₁σ = d₂σ = u`.
    #[test]
    fn right_sizes_wrong_map_fails() {
        let idx = delta_index(2).unwrap();
        let faces = vec![vec![], vec![vec![0, 0], vec![0, 0]], vec![vec![0, 0, 1, 1], vec![0, 0, 1, 0], vec![0, 0, 0, 1]]];
        // X₂ = [s₀u, s₀g, s₁g, σ] with s₀u = s₁u
        let faces = {
            let mut f = faces;
            // d_i on X₂ = [s₀u, s₀g, s₁g, σ]
            f[2] = vec![vec![0, 1, 0, 1], vec![0, 1, 1, 0], vec![0, 0, 1, 0]];
            f
        };
        let degs = vec![vec![vec![0]], vec![vec![0, 1], vec![0, 2]]];
        let x = simplicial_presheaf(&idx, &[1, 2, 4], &faces, &degs).unwrap();
        assert!(x.audit_functoriality().ok());
        assert_eq!(x.sizes(), &[1, 2, 4]);
        let t = check_segal_monoid(&x);
        assert_eq!(t.failed, 1, "{:?}", t.witnesses);
    }

    #[test]
    fn corruption_detected() {
        let idx = delta_index(3).unwrap();
        let x = monoid_to_presheaf(&FiniteMonoid::cyclic(3), &idx).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let (y, _) = corrupt(&x, &mut rng).unwrap();
            assert!(!check_segal_monoid(&y).ok());
        }
    }

    #[test]
    fn biaction_slice() {
        let idx = slice_category(&DeltaNObject(vec![1]), 3, Budget::default()).unwrap();
        let b = Biaction::regular(&FiniteMonoid::cyclic(2));
        let c = biaction_data(&b).category().unwrap();
        let x = linear_nerve(&c, &idx).unwrap();
        assert!(x.audit_functoriality().ok());
        assert!(check_segal_slice(&x).ok());
        let at = idx.find(&SliceObject::from_sequence(1, vec![0, 0, 1, 1]).unwrap()).unwrap();
        assert_eq!(x.size_at(at), 8);
        let y = x.with_duplicate(at, 0);
        assert!(y.audit_functoriality().ok());
        assert!(!check_segal_slice(&y).ok());
        // restricting along both endpoints gives monoids
        let delta = delta_index(3).unwrap();
        for end in 0..=1 {
            let r = x
                .restrict(
                    &delta,
                    |a| idx.find(&SliceObject::from_sequence(1, vec![end; delta.object(a).0[0] + 1]).ok()?),
                    |f| {
                        let ar = delta.arrow(f);
                        let s = idx.find(&SliceObject::from_sequence(1, vec![end; delta.object(ar.src).0[0] + 1]).ok()?)?;
                        let t = idx.find(&SliceObject::from_sequence(1, vec![end; delta.object(ar.tgt).0[0] + 1]).ok()?)?;
                        idx.find_arrow(s, t, &ar.map)
                    },
                )
                .unwrap();
            assert!(check_segal_monoid(&r).ok());
        }
    }

    #[test]
    fn set_fill_over_two() {
        let idx = slice_category(&DeltaNObject(vec![2]), 2, Budget::default()).unwrap();
        let z2 = FiniteMonoid::cyclic(2);
        let m = Biaction::regular(&z2);
        let data = set_composite_fill(&m, &m).unwrap();
        assert_eq!(data.sizes[&(0, 2)], 2);
        let c = data.category().unwrap();
        let x = linear_nerve(&c, &idx).unwrap();
        assert!(x.audit_functoriality().ok());
        assert!(check_segal_slice(&x).ok());
    }

    #[test]
    fn uple_examples() {
        let idx = delta_index(3).unwrap();
        let c = FiniteCategory::ordinal(3);
        let x = category_nerve(&c, &idx).unwrap();
        assert!(check_uple(&x).ok());
        // 1-uple of a category with one object is the monoid condition
        let y = monoid_to_presheaf(&FiniteMonoid::cyclic(2), &idx).unwrap();
        assert!(check_uple(&y).ok());
        assert!(!check_uple(&y.with_duplicate(2, 0)).ok());
        let idx2 = delta_n_index(2, 2).unwrap();
        let small = delta_index(2).unwrap();
        let a = category_nerve(&FiniteCategory::ordinal(2), &small).unwrap();
        let b = monoid_to_presheaf(&FiniteMonoid::cyclic(2), &small).unwrap();
        let p = external_product(&[&a, &b], &idx2).unwrap();
        assert!(p.audit_functoriality().ok());
        assert!(check_uple(&p).ok());
        // a different order of the maximal cells gives the same verdicts
        let rev = check_uple_with(&p, |mut v| {
            v.reverse();
            v
        });
        assert_eq!(rev, check_uple(&p));
        let k = constant_presheaf(&idx2, 3).unwrap();
        assert!(check_uple(&k).ok());
    }

    #[test]
    fn uple_agrees_with_slicewise() {
        let idx2 = delta_n_index(2, 2).unwrap();
        let small = delta_index(2).unwrap();
        let a = category_nerve(&FiniteCategory::ordinal(2), &small).unwrap();
        let b = monoid_to_presheaf(&FiniteMonoid::cyclic(2), &small).unwrap();
        let good = external_product(&[&a, &b], &idx2).unwrap();
        let bad = good.with_duplicate(idx2.find(&DeltaNObject(vec![1, 2])).unwrap(), 1);
        for x in [&good, &bad] {
            let slicewise = (0..=2).all(|k| {
                let s = slice_at(x, k, &small).unwrap();
                check_uple(&s).ok()
            }) && (0..=2).all(|k| {
                let s = x
                    .restrict(
                        &small,
                        |o| idx2.find(&DeltaNObject(vec![small.object(o).0[0], k])),
                        |f| {
                            let ar = small.arrow(f);
                            let map = DeltaNMorphism(vec![ar.map.components()[0].clone(), DeltaMorphism::identity(k)]);
                            idx2.find_arrow(idx2.find(&DeltaNObject(vec![small.object(ar.src).0[0], k]))?, idx2.find(&DeltaNObject(vec![small.object(ar.tgt).0[0], k]))?, &map)
                        },
                    )
                    .unwrap();
                check_uple(&s).ok()
            });
            assert_eq!(check_uple(x).ok(), slicewise);
        }
    }

    #[test]
    fn nfold_examples() {
        let idx2 = delta_n_index(2, 2).unwrap();
        let small = delta_index(2).unwrap();
        let a = category_nerve(&FiniteCategory::ordinal(2), &small).unwrap();
        let b = monoid_to_presheaf(&FiniteMonoid::cyclic(2), &small).unwrap();
        let p = external_product(&[&a, &b], &idx2).unwrap();
        assert!(check_uple(&p).ok());
        assert!(!check_nfold_segal(&p).unwrap().ok());
        let z2 = FiniteMonoid::cyclic(2);
        let x = double_nerve(&z2, &z2, &idx2).unwrap();
        assert!(x.audit_functoriality().ok());
        assert!(check_nfold_segal(&x).unwrap().ok());
        // arity one is the n-uple check
        assert_eq!(check_nfold_segal(&a).unwrap(), check_uple(&a));
    }

    fn z2_spec() -> PresheafSpec {
        let names = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        let face = |i: usize, n: usize| DeltaMorphism::face(i, n).values().to_vec();
        let degen = |j: usize, n: usize| DeltaMorphism::degeneracy(j, n).values().to_vec();
        let x2 = ["ee", "eg", "ge", "gg"];
        PresheafSpec {
            arity: 1,
            truncation: 2,
            carriers: vec![
                CarrierSpec { object: vec![0], elements: names(&["*"]) },
                CarrierSpec { object: vec![1], elements: names(&["e", "g"]) },
                CarrierSpec { object: vec![2], elements: names(&x2) },
            ],
            maps: vec![
                MapSpec { target: vec![1], values: vec![face(0, 1)], table: names(&["*", "*"]) },
                MapSpec { target: vec![1], values: vec![face(1, 1)], table: names(&["*", "*"]) },
                MapSpec { target: vec![0], values: vec![degen(0, 0)], table: names(&["e"]) },
                MapSpec { target: vec![2], values: vec![face(0, 2)], table: names(&["e", "g", "e", "g"]) },
                MapSpec { target: vec![2], values: vec![face(1, 2)], table: names(&["e", "g", "g", "e"]) },
                MapSpec { target: vec![2], values: vec![face(2, 2)], table: names(&["e", "e", "g", "g"]) },
                MapSpec { target: vec![1], values: vec![degen(0, 1)], table: names(&["ee", "eg"]) },
                MapSpec { target: vec![1], values: vec![degen(1, 1)], table: names(&["ee", "ge"]) },
            ],
        }
    }

    #[test]
    fn spec_closes_under_composition() {
        let spec = z2_spec();
        let idx = spec.index().unwrap();
        let x = spec.build(&idx).unwrap();
        let y = monoid_to_presheaf(&FiniteMonoid::cyclic(2), &idx).unwrap();
        for f in 0..idx.size() {
            assert_eq!(x.table(f), y.table(f));
        }
        let mut bad = z2_spec();
        bad.maps[4].table = ["e", "e", "g", "e"].iter().map(|s| s.to_string()).collect();
        assert!(matches!(bad.build(&idx), Err(AlgebraError::Incompatible(_))));
        let mut partial = z2_spec();
        partial.maps.truncate(6);
        assert!(partial.build(&idx).is_err());
    }

    #[test]
    fn slice_cardinality_at_top() {
        let idx = slice_category(&DeltaNObject(vec![1]), 2, Budget::default()).unwrap();
        let c = biaction_data(&Biaction::regular(&FiniteMonoid::cyclic(3))).category().unwrap();
        let x = linear_nerve(&c, &idx).unwrap();
        let at = idx.find(&SliceObject::from_sequence(1, vec![0, 0, 1]).unwrap()).unwrap();
        let y = x.with_duplicate(at, 2);
        assert!(y.audit_functoriality().ok());
        assert_eq!(check_segal_slice(&y).failed, 1);
    }
}
