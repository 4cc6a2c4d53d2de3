//! Finite categories whose morphisms are (tuples of) Δ-maps between object
//! shapes, with composition computed by composing the underlying maps.

use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{CombinatError, Result};
use crate::simplex::{enumerate_n_morphisms, Budget, DeltaNMorphism, DeltaNObject};
use crate::tally::{Tally, Verdict};

/// A morphism `src → tgt` lying over the Δⁿ-map `shape(src) → shape(tgt)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Arrow {
    pub src: usize,
    pub tgt: usize,
    pub map: DeltaNMorphism,
}

pub struct TruncatedCategory<O> {
    bound: usize,
    objects: Vec<O>,
    shapes: Vec<DeltaNObject>,
    lookup: HashMap<O, usize>,
    arrows: Vec<Arrow>,
    index: HashMap<(usize, usize, DeltaNMorphism), usize>,
    homs: HashMap<(usize, usize), Vec<usize>>,
    out: Vec<Vec<usize>>,
    identities: Vec<usize>,
}

impl<O: Clone + Eq + Hash + Ord + Debug> TruncatedCategory<O> {
    /// Objects are sorted; `candidates(x, y)` lists the maps `shape(x) → shape(y)`
    /// that are morphisms `x → y`.
    pub fn from_candidates(
        bound: usize,
        mut objects: Vec<O>,
        shape: impl Fn(&O) -> DeltaNObject,
        mut candidates: impl FnMut(&O, &O) -> Vec<DeltaNMorphism>,
        budget: Budget,
    ) -> Result<Self> {
        objects.sort();
        objects.dedup();
        let shapes: Vec<DeltaNObject> = objects.iter().map(&shape).collect();
        let lookup = objects.iter().cloned().enumerate().map(|(i, o)| (o, i)).collect();
        let mut arrows = Vec::new();
        let mut index = HashMap::new();
        let mut homs: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        let mut out = vec![Vec::new(); objects.len()];
        for (a, x) in objects.iter().enumerate() {
            for (b, y) in objects.iter().enumerate() {
                for map in candidates(x, y) {
                    debug_assert_eq!(map.src(), shapes[a]);
                    let id = arrows.len();
                    budget.check(id as u128 + 1, "category morphisms")?;
                    index.insert((a, b, map.clone()), id);
                    homs.entry((a, b)).or_default().push(id);
                    out[a].push(id);
                    arrows.push(Arrow { src: a, tgt: b, map });
                }
            }
        }
        let identities = shapes
            .iter()
            .enumerate()
            .map(|(a, s)| {
                index
                    .get(&(a, a, DeltaNMorphism::identity(s)))
                    .copied()
                    .ok_or_else(|| CombinatError::UnknownMorphism(format!("identity of {:?}", objects[a])))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TruncatedCategory { bound, objects, shapes, lookup, arrows, index, homs, out, identities })
    }

    /// Every Δⁿ-map between shapes that passes `keep`.
    pub fn from_predicate(
        bound: usize,
        objects: Vec<O>,
        shape: impl Fn(&O) -> DeltaNObject,
        keep: impl Fn(&O, &O, &DeltaNMorphism) -> bool,
        budget: Budget,
    ) -> Result<Self> {
        let shape_ref = &shape;
        let mut err = None;
        let cat = Self::from_candidates(
            bound,
            objects,
            shape_ref,
            |x, y| match enumerate_n_morphisms(&shape_ref(x), &shape_ref(y), budget) {
                Ok(all) => all.into_iter().filter(|m| keep(x, y, m)).collect(),
                Err(e) => {
                    err.get_or_insert(e);
                    Vec::new()
                }
            },
            budget,
        );
        match err {
            Some(e) => Err(e),
            None => cat,
        }
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn objects(&self) -> &[O] {
        &self.objects
    }

    pub fn object(&self, i: usize) -> &O {
        &self.objects[i]
    }

    pub fn shape(&self, i: usize) -> &DeltaNObject {
        &self.shapes[i]
    }

    pub fn find(&self, o: &O) -> Option<usize> {
        self.lookup.get(o).copied()
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, f: usize) -> &Arrow {
        &self.arrows[f]
    }

    pub fn hom(&self, a: usize, b: usize) -> &[usize] {
        self.homs.get(&(a, b)).map_or(&[], Vec::as_slice)
    }

    pub fn out_of(&self, a: usize) -> &[usize] {
        &self.out[a]
    }

    pub fn identity(&self, a: usize) -> usize {
        self.identities[a]
    }

    pub fn find_arrow(&self, src: usize, tgt: usize, map: &DeltaNMorphism) -> Option<usize> {
        self.index.get(&(src, tgt, map.clone())).copied()
    }

    /// `g ∘ f`, or `None` if not composable or the composite is not kept.
    pub fn compose(&self, f: usize, g: usize) -> Option<usize> {
        let (af, ag) = (&self.arrows[f], &self.arrows[g]);
        if af.tgt != ag.src {
            return None;
        }
        let map = af.map.then(&ag.map).ok()?;
        self.find_arrow(af.src, ag.tgt, &map)
    }

    /// Closure under composition, unit laws and associativity on every
    /// composable pair and triple.
    pub fn check_axioms(&self) -> Tally {
        let mut t = Tally::new();
        for (f, a) in self.arrows.iter().enumerate() {
            let left = self.compose(self.identities[a.src], f);
            let right = self.compose(f, self.identities[a.tgt]);
            t.record(left == Some(f) && right == Some(f), || format!("unit law fails at {:?}", a));
            for &g in &self.out[a.tgt] {
                let Some(gf) = self.compose(f, g) else {
                    t.fail(|| format!("composite of {f} and {g} not kept"));
                    continue;
                };
                t.pass();
                for &h in &self.out[self.arrows[g].tgt] {
                    let lhs = self.compose(gf, h);
                    let rhs = self.compose(g, h).and_then(|hg| self.compose(f, hg));
                    t.record(lhs.is_some() && lhs == rhs, || format!("associativity fails at ({f},{g},{h})"));
                }
            }
        }
        t
    }

    /// Number of arrows.
    pub fn size(&self) -> usize {
        self.arrows.len()
    }

    /// Objects with exactly one arrow to every object.
    pub fn initial_objects(&self) -> Vec<usize> {
        let n = self.objects.len();
        (0..n).filter(|&a| (0..n).all(|b| self.hom(a, b).len() == 1)).collect()
    }

    /// Objects with exactly one arrow from every object.
    pub fn terminal_objects(&self) -> Vec<usize> {
        let n = self.objects.len();
        (0..n).filter(|&b| (0..n).all(|a| self.hom(a, b).len() == 1)).collect()
    }
}

impl<O: Serialize> TruncatedCategory<O> {
    /// `{"objects", "morphisms", "composition"}`; composition rows are `[f, g, g∘f]`.
    pub fn to_json(&self) -> Value
    where
        O: Clone + Eq + Hash + Ord + Debug,
    {
        let morphisms: Vec<Value> = self
            .arrows
            .iter()
            .map(|a| json!({"src": a.src, "tgt": a.tgt, "data": a.map}))
            .collect();
        let mut composition = Vec::new();
        for (f, a) in self.arrows.iter().enumerate() {
            for &g in &self.out[a.tgt] {
                if let Some(h) = self.compose(f, g) {
                    composition.push(json!([f, g, h]));
                }
            }
        }
        json!({
            "truncation": self.bound,
            "objects": self.objects,
            "morphisms": morphisms,
            "composition": composition,
        })
    }
}

/// A functor between truncated categories, stored on indices.
pub struct CategoryFunctor<'a, A, B> {
    pub domain: &'a TruncatedCategory<A>,
    pub codomain: &'a TruncatedCategory<B>,
    pub on_objects: Vec<usize>,
    pub on_arrows: Vec<usize>,
}

impl<'a, A, B> CategoryFunctor<'a, A, B>
where
    A: Clone + Eq + Hash + Ord + Debug,
    B: Clone + Eq + Hash + Ord + Debug,
{
    /// `arrow_map(f, F(src), F(tgt))` gives the underlying map of `F(f)`.
    pub fn new(
        domain: &'a TruncatedCategory<A>,
        codomain: &'a TruncatedCategory<B>,
        object_map: impl Fn(&A) -> B,
        arrow_map: impl Fn(&Arrow) -> DeltaNMorphism,
    ) -> Result<Self> {
        let on_objects = domain
            .objects
            .iter()
            .map(|a| {
                let b = object_map(a);
                codomain.find(&b).ok_or_else(|| CombinatError::UnknownObject(format!("{b:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let on_arrows = domain
            .arrows
            .iter()
            .map(|f| {
                let map = arrow_map(f);
                codomain
                    .find_arrow(on_objects[f.src], on_objects[f.tgt], &map)
                    .ok_or_else(|| CombinatError::UnknownMorphism(format!("{map}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CategoryFunctor { domain, codomain, on_objects, on_arrows })
    }

    pub fn check_functorial(&self) -> Tally {
        let mut t = Tally::new();
        for a in 0..self.domain.objects.len() {
            let ok = self.on_arrows[self.domain.identity(a)] == self.codomain.identity(self.on_objects[a]);
            t.record(ok, || format!("identity of object {a} not preserved"));
        }
        for (f, af) in self.domain.arrows.iter().enumerate() {
            for &g in self.domain.out_of(af.tgt) {
                let Some(gf) = self.domain.compose(f, g) else { continue };
                let image = self.codomain.compose(self.on_arrows[f], self.on_arrows[g]);
                t.record(image == Some(self.on_arrows[gf]), || format!("composite ({f},{g}) not preserved"));
            }
        }
        t
    }

    /// Objects `(a, g : F(a) → b)` of the comma category `F/b`.
    fn comma_over(&self, b: usize) -> Vec<(usize, usize)> {
        (0..self.domain.objects.len())
            .flat_map(|a| self.codomain.hom(self.on_objects[a], b).iter().map(move |&g| (a, g)))
            .collect()
    }

    /// Number of `u : a → a*` with `g* ∘ F(u) = g`.
    fn factorizations_over(&self, (a, g): (usize, usize), (a_star, g_star): (usize, usize)) -> usize {
        self.domain
            .hom(a, a_star)
            .iter()
            .filter(|&&u| self.codomain.compose(self.on_arrows[u], g_star) == Some(g))
            .count()
    }

    /// Terminal objects of `F/b`.
    pub fn terminal_in_comma_over(&self, b: usize) -> Vec<(usize, usize)> {
        let objs = self.comma_over(b);
        objs.iter()
            .copied()
            .filter(|&cand| objs.iter().all(|&x| self.factorizations_over(x, cand) == 1))
            .collect()
    }

    /// Objects `(a, g : b → F(a))` of `b/F`.
    fn comma_under(&self, b: usize) -> Vec<(usize, usize)> {
        (0..self.domain.objects.len())
            .flat_map(|a| self.codomain.hom(b, self.on_objects[a]).iter().map(move |&g| (a, g)))
            .collect()
    }

    pub fn initial_in_comma_under(&self, b: usize) -> Vec<(usize, usize)> {
        let objs = self.comma_under(b);
        objs.iter()
            .copied()
            .filter(|&(a_star, g_star)| {
                objs.iter().all(|&(a, g)| {
                    self.domain
                        .hom(a_star, a)
                        .iter()
                        .filter(|&&u| self.codomain.compose(g_star, self.on_arrows[u]) == Some(g))
                        .count()
                        == 1
                })
            })
            .collect()
    }
}

/// Which comma categories are searched for a witness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CommaSide {
    /// `F/b` must have a terminal object for every `b`.
    OverTerminal,
    /// `b/F` must have an initial object for every `b`.
    UnderInitial,
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessReport {
    pub lemma: String,
    pub truncation: usize,
    pub verdict: Verdict,
    pub checked: u64,
    pub witnesses: Vec<String>,
    /// Witness found in every comma category; weak contractibility is not decided.
    pub note: &'static str,
}

pub const CONTRACTIBILITY_NOTE: &str =
    "witness search only: an initial/final object was sought in each truncated comma category";

/// PASS if every comma category has the requested witness, else INCONCLUSIVE
/// naming the objects without one.
pub fn check_coinitial_by_witness<A, B>(f: &CategoryFunctor<'_, A, B>, side: CommaSide, lemma: &str) -> WitnessReport
where
    A: Clone + Eq + Hash + Ord + Debug,
    B: Clone + Eq + Hash + Ord + Debug,
{
    let mut missing = Vec::new();
    let n = f.codomain.objects().len();
    for b in 0..n {
        let found = match side {
            CommaSide::OverTerminal => !f.terminal_in_comma_over(b).is_empty(),
            CommaSide::UnderInitial => !f.initial_in_comma_under(b).is_empty(),
        };
        if !found {
            missing.push(format!("no witness over {:?}", f.codomain.object(b)));
        }
    }
    WitnessReport {
        lemma: lemma.to_string(),
        truncation: f.codomain.bound(),
        verdict: if missing.is_empty() { Verdict::Pass } else { Verdict::Inconclusive },
        checked: n as u64,
        witnesses: missing.into_iter().take(8).collect(),
        note: CONTRACTIBILITY_NOTE,
    }
}

/// Δⁿ with every component at most `d`, all maps.
pub fn delta_n(arity: usize, d: usize, budget: Budget) -> Result<TruncatedCategory<DeltaNObject>> {
    let components: Vec<Vec<usize>> = vec![(0..=d).collect(); arity];
    let objects = crate::simplex::cartesian(&components).into_iter().map(DeltaNObject).collect();
    TruncatedCategory::from_predicate(d, objects, |o: &DeltaNObject| o.clone(), |_, _, _| true, budget)
}
